//! The three node colors and total colorings of a graph.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

/// Node color.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Color {
    A,
    B,
    C,
}

impl Color {
    pub const ALL: [Color; 3] = [Color::A, Color::B, Color::C];

    /// B and C trade places, A is fixed.
    #[inline]
    pub const fn transliterated(self) -> Color {
        match self {
            Color::A => Color::A,
            Color::B => Color::C,
            Color::C => Color::B,
        }
    }

    /// A and B trade places, C is fixed.
    #[inline]
    pub const fn complemented(self) -> Color {
        match self {
            Color::A => Color::B,
            Color::B => Color::A,
            Color::C => Color::C,
        }
    }

    pub const fn as_char(self) -> char {
        match self {
            Color::A => 'A',
            Color::B => 'B',
            Color::C => 'C',
        }
    }

    pub const fn from_char(c: char) -> Option<Color> {
        match c {
            'A' => Some(Color::A),
            'B' => Some(Color::B),
            'C' => Some(Color::C),
            _ => None,
        }
    }

    #[inline]
    pub(crate) const fn index(self) -> usize {
        self as usize
    }

    #[inline]
    pub(crate) const fn from_index(i: usize) -> Color {
        match i % 3 {
            0 => Color::A,
            1 => Color::B,
            _ => Color::C,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// A total assignment of colors to nodes, indexed by node id.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coloring(Vec<Color>);

/// Error returned when parsing a coloring string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseColoringError {
    pub position: usize,
    pub found: char,
}

impl fmt::Display for ParseColoringError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "invalid color {:?} at position {} (expected one of A, B, C)",
            self.found, self.position
        )
    }
}

impl core::error::Error for ParseColoringError {}

impl Coloring {
    pub fn new(colors: Vec<Color>) -> Self {
        Coloring(colors)
    }

    pub fn uniform(len: usize, color: Color) -> Self {
        Coloring(alloc::vec![color; len])
    }

    /// Decodes the `index`-th of the `3^len` colorings, node 0 being the least
    /// significant base-3 digit.
    pub fn from_index(len: usize, mut index: u64) -> Self {
        let mut colors = Vec::with_capacity(len);
        for _ in 0..len {
            colors.push(Color::from_index((index % 3) as usize));
            index /= 3;
        }
        Coloring(colors)
    }

    /// Inverse of [`Coloring::from_index`].
    pub fn to_index(&self) -> u64 {
        self.0
            .iter()
            .rev()
            .fold(0u64, |acc, c| acc * 3 + c.index() as u64)
    }

    /// The {A,B} coloring whose set bits are B, node 0 at bit 0.
    pub fn from_ab_bits(len: usize, bits: u64) -> Self {
        Coloring(
            (0..len)
                .map(|i| if bits >> i & 1 == 1 { Color::B } else { Color::A })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn colors(&self) -> &[Color] {
        &self.0
    }

    pub fn get(&self, v: usize) -> Color {
        self.0[v]
    }

    pub fn set(&mut self, v: usize, c: Color) {
        self.0[v] = c;
    }

    pub fn iter(&self) -> impl Iterator<Item = Color> + '_ {
        self.0.iter().copied()
    }

    pub fn count(&self, color: Color) -> usize {
        self.0.iter().filter(|&&c| c == color).count()
    }

    pub fn contains(&self, color: Color) -> bool {
        self.0.contains(&color)
    }

    /// True when every node is A or B (a valid start state).
    pub fn is_ab(&self) -> bool {
        !self.contains(Color::C)
    }

    /// True when every node is A or C.
    pub fn is_ac(&self) -> bool {
        !self.contains(Color::B)
    }

    pub fn transliterate(&self) -> Coloring {
        Coloring(self.0.iter().map(|c| c.transliterated()).collect())
    }

    pub fn complement(&self) -> Coloring {
        Coloring(self.0.iter().map(|c| c.complemented()).collect())
    }
}

impl fmt::Display for Coloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.0 {
            write!(f, "{}", c.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for Coloring {
    type Err = ParseColoringError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .enumerate()
            .map(|(position, found)| {
                Color::from_char(found).ok_or(ParseColoringError { position, found })
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Coloring)
    }
}

impl From<Vec<Color>> for Coloring {
    fn from(v: Vec<Color>) -> Self {
        Coloring(v)
    }
}

impl From<Coloring> for String {
    fn from(c: Coloring) -> Self {
        use alloc::string::ToString;
        c.to_string()
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for Coloring {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for Coloring {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = <String as serde::Deserialize>::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> Coloring {
        s.parse().unwrap()
    }

    #[test]
    fn transliterate_examples() {
        assert_eq!(c("ABA").transliterate(), c("ACA"));
        assert_eq!(c("AAAA").transliterate(), c("AAAA"));
    }

    #[test]
    fn complement_examples() {
        assert_eq!(c("ABA").complement(), c("BAB"));
        assert_eq!(c("CCC").complement(), c("CCC"));
    }

    #[test]
    fn both_maps_are_involutions_on_small_colorings() {
        for len in 1..=4 {
            for i in 0..3u64.pow(len as u32) {
                let col = Coloring::from_index(len, i);
                assert_eq!(col.to_index(), i);
                assert_eq!(col.transliterate().transliterate(), col);
                assert_eq!(col.complement().complement(), col);
            }
        }
    }

    #[test]
    fn parse_rejects_foreign_letters() {
        let err = "ABx".parse::<Coloring>().unwrap_err();
        assert_eq!(err, ParseColoringError { position: 2, found: 'x' });
    }

    #[test]
    fn ab_bits_put_node_zero_first() {
        assert_eq!(Coloring::from_ab_bits(3, 0b010), c("ABA"));
    }
}
