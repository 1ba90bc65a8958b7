use core::fmt;
use core::str::FromStr;

/// One cell of a resolution table: a digit in `0..3` and a bar flag.
///
/// Encoded `0..6`, where `3, 4, 5` are the barred digits `0̄, 1̄, 2̄`
/// (also written `-0, -1, -2`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RtValue(u8);

impl RtValue {
    pub const ALL: [RtValue; 6] = [
        RtValue(0),
        RtValue(1),
        RtValue(2),
        RtValue(3),
        RtValue(4),
        RtValue(5),
    ];
    pub const PLUS_ONE: RtValue = RtValue(1);
    pub const MINUS_ONE: RtValue = RtValue(4);

    pub const fn from_code(code: u8) -> Option<RtValue> {
        if code < 6 {
            Some(RtValue(code))
        } else {
            None
        }
    }

    pub const fn new(digit: u8, barred: bool) -> RtValue {
        RtValue(digit % 3 + if barred { 3 } else { 0 })
    }

    pub const fn code(self) -> u8 {
        self.0
    }

    pub const fn digit(self) -> u8 {
        self.0 % 3
    }

    pub const fn is_barred(self) -> bool {
        self.0 >= 3
    }

    pub const fn token(self) -> &'static str {
        ["0", "1", "2", "-0", "-1", "-2"][self.0 as usize]
    }

    /// Maps an `=0` cell into the subtable labelled `target`.
    ///
    /// An unbarred target `c` adds `c` to unbarred digits and subtracts it
    /// from barred ones; a barred target does the same and toggles the bar.
    pub const fn substitute(self, target: RtValue) -> RtValue {
        let c = target.digit();
        let d = self.digit();
        let digit = if self.is_barred() { (d + 3 - c) % 3 } else { (d + c) % 3 };
        RtValue::new(digit, self.is_barred() != target.is_barred())
    }

    /// The target whose substitution undoes `substitute(self)`.
    pub const fn inverse(self) -> RtValue {
        if self.is_barred() {
            self
        } else {
            RtValue::new((3 - self.digit()) % 3, false)
        }
    }
}

impl fmt::Display for RtValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseRtValueError;

impl fmt::Display for ParseRtValueError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("expected one of 0, 1, 2, -0, -1, -2")
    }
}

impl core::error::Error for ParseRtValueError {}

impl FromStr for RtValue {
    type Err = ParseRtValueError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "0" | "+0" => Ok(RtValue(0)),
            "1" | "+1" => Ok(RtValue(1)),
            "2" | "+2" => Ok(RtValue(2)),
            "-0" | "0̄" => Ok(RtValue(3)),
            "-1" | "1̄" => Ok(RtValue(4)),
            "-2" | "2̄" => Ok(RtValue(5)),
            _ => Err(ParseRtValueError),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> RtValue {
        s.parse().unwrap()
    }

    /// Rows of the six-column substitution chart, `=0` first.
    const CHART: [[&str; 6]; 6] = [
        ["1", "2", "0", "-1", "-2", "-0"],
        ["-1", "-0", "-2", "1", "0", "2"],
        ["2", "0", "1", "-2", "-0", "-1"],
        ["-2", "-1", "-0", "2", "1", "0"],
        ["0", "1", "2", "-0", "-1", "-2"],
        ["-0", "-2", "-1", "0", "2", "1"],
    ];
    const TARGETS: [&str; 6] = ["0", "1", "2", "-0", "-1", "-2"];

    #[test]
    fn substitutions_reproduce_the_chart() {
        for row in CHART {
            for (col, target) in TARGETS.iter().enumerate() {
                assert_eq!(v(row[0]).substitute(v(target)), v(row[col]), "{row:?} {target}");
            }
        }
    }

    #[test]
    fn tokens_round_trip() {
        for x in RtValue::ALL {
            assert_eq!(v(x.token()), x);
            assert_eq!(RtValue::new(x.digit(), x.is_barred()), x);
        }
        assert!("3".parse::<RtValue>().is_err());
    }

    #[test]
    fn substitutions_form_a_group_of_order_six() {
        let apply = |t: RtValue| RtValue::ALL.map(|x| x.substitute(t));
        let maps: alloc::vec::Vec<_> = RtValue::ALL.iter().map(|&t| apply(t)).collect();
        let compose = |f: &[RtValue; 6], g: &[RtValue; 6]| {
            RtValue::ALL.map(|x| g[f[x.code() as usize].code() as usize])
        };
        // distinct, identity present, closed, inverses exist
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(maps[i] == maps[j], i == j);
            }
        }
        assert_eq!(maps[0], RtValue::ALL);
        for f in &maps {
            for g in &maps {
                assert!(maps.contains(&compose(f, g)));
            }
            assert!(maps.iter().any(|g| compose(f, g) == RtValue::ALL));
        }
        for f in &maps {
            for g in &maps {
                for h in &maps {
                    assert_eq!(compose(&compose(f, g), h), compose(f, &compose(g, h)));
                }
            }
        }
        // =1 applied twice acts as =2
        assert_eq!(compose(&maps[1], &maps[1]), maps[2]);
    }
}
