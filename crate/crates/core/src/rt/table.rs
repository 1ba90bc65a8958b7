use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use super::value::RtValue;
use super::RtError;
use crate::ac23::Mask;

/// A row of a resolution table; column 0 is the central point.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RtRow(Vec<RtValue>);

impl RtRow {
    pub fn new(values: Vec<RtValue>) -> Self {
        RtRow(values)
    }

    pub fn from_codes(codes: &[u8]) -> Option<Self> {
        codes
            .iter()
            .map(|&c| RtValue::from_code(c))
            .collect::<Option<Vec<_>>>()
            .map(RtRow)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[RtValue] {
        &self.0
    }

    pub fn center(&self) -> RtValue {
        self.0[0]
    }

    /// Columns `1..N`, zero column deleted.
    pub fn without_center(&self) -> &[RtValue] {
        &self.0[1..]
    }

    /// Digits in sort order: columns `1..N` followed by column 0.
    fn sort_digits(&self) -> impl Iterator<Item = u8> + '_ {
        self.0[1..]
            .iter()
            .chain(self.0.first())
            .map(|v| v.code())
    }

    /// Base-6 number read from columns `1..N` then column 0, most significant
    /// first. Injective for a fixed row length up to 49 columns.
    ///
    /// For `(-1, 2, 0, -2, 1)` the digit string is `(2, 0, 5, 1, 4)` and the
    /// key is 2782.
    pub fn canonical_key(&self) -> u128 {
        self.sort_digits().fold(0u128, |acc, d| acc * 6 + d as u128)
    }

    pub fn substitute(&self, target: RtValue) -> RtRow {
        RtRow(self.0.iter().map(|v| v.substitute(target)).collect())
    }
}

impl Ord for RtRow {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.sort_digits().cmp(other.sort_digits()))
    }
}

impl PartialOrd for RtRow {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for RtRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Value-set class of a table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum TableClass {
    /// Only `1, 2, -1`.
    Small,
    /// `0` together with some of `1, 2, -1`.
    Middle,
    /// Any of `-0, -2` present.
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum TableKind {
    NotCompletelyCorrect,
    CompletelyCorrect1st,
    CompletelyCorrect2nd,
}

/// Occurrences of each value, indexed by code, outside and inside the zero
/// column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SCounts {
    pub others: [usize; 6],
    pub zero: [usize; 6],
}

impl SCounts {
    pub fn total(&self) -> usize {
        self.others.iter().chain(&self.zero).sum()
    }
}

/// The `=0` subtable: a set of equal-length rows kept in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ResolutionTable {
    width: usize,
    pub mask: Option<Mask>,
    /// Offsets of columns `0..N`, when known.
    pub columns: Option<Vec<i64>>,
    /// Set for tables produced under an unconfirmed construction.
    pub hypothesis: Option<String>,
    rows: BTreeSet<RtRow>,
}

impl ResolutionTable {
    pub fn new(width: usize) -> Self {
        ResolutionTable {
            width,
            mask: None,
            columns: None,
            hypothesis: None,
            rows: BTreeSet::new(),
        }
    }

    /// An empty table for `mask`, columns in the standard numbering.
    pub fn for_mask(mask: Mask) -> Self {
        let columns = mask.column_offsets();
        ResolutionTable {
            width: columns.len(),
            mask: Some(mask),
            columns: Some(columns),
            hypothesis: None,
            rows: BTreeSet::new(),
        }
    }

    pub fn from_rows(width: usize, rows: impl IntoIterator<Item = RtRow>) -> Result<Self, RtError> {
        let mut t = ResolutionTable::new(width);
        t.extend(rows)?;
        Ok(t)
    }

    /// `N`.
    pub fn width(&self) -> usize {
        self.width
    }

    /// `C_R`.
    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_experimental(&self) -> bool {
        self.hypothesis.is_some()
    }

    pub fn rows(&self) -> impl Iterator<Item = &RtRow> + '_ {
        self.rows.iter()
    }

    pub fn contains(&self, row: &RtRow) -> bool {
        self.rows.contains(row)
    }

    /// Adds a row; returns `false` if it was already present.
    pub fn insert(&mut self, row: RtRow) -> Result<bool, RtError> {
        if row.len() != self.width {
            return Err(RtError::RowWidth { expected: self.width, found: row.len() });
        }
        Ok(self.rows.insert(row))
    }

    pub fn extend(&mut self, rows: impl IntoIterator<Item = RtRow>) -> Result<(), RtError> {
        for r in rows {
            self.insert(r)?;
        }
        Ok(())
    }

    pub(crate) fn with_rows(&self, rows: BTreeSet<RtRow>) -> Self {
        ResolutionTable { rows, ..self.clone_header() }
    }

    pub(crate) fn clone_header(&self) -> Self {
        ResolutionTable {
            width: self.width,
            mask: self.mask,
            columns: self.columns.clone(),
            hypothesis: self.hypothesis.clone(),
            rows: BTreeSet::new(),
        }
    }

    pub(crate) fn row_set(&self) -> &BTreeSet<RtRow> {
        &self.rows
    }

    /// Distinct values occurring anywhere, as a bit set over codes.
    pub fn value_set(&self) -> u8 {
        self.rows
            .iter()
            .flat_map(|r| r.values())
            .fold(0u8, |acc, v| acc | 1 << v.code())
    }

    pub fn classify(&self) -> TableClass {
        classify_value_set(self.value_set())
    }

    pub fn s_counts(&self) -> SCounts {
        let mut s = SCounts::default();
        for row in &self.rows {
            s.zero[row.center().code() as usize] += 1;
            for v in row.without_center() {
                s.others[v.code() as usize] += 1;
            }
        }
        s
    }

    /// Completely correct when the zero column holds only `±1`; of the 1st
    /// kind when, in addition, the `+1` rows are exactly every `±1` pattern
    /// over the other columns.
    pub fn kind(&self) -> TableKind {
        let s = self.s_counts();
        if s.zero[0] + s.zero[2] + s.zero[3] + s.zero[5] > 0 {
            return TableKind::NotCompletelyCorrect;
        }
        let free = self.width.saturating_sub(1);
        if free >= 127 || s.zero[1] != 1usize << free {
            return TableKind::CompletelyCorrect2nd;
        }
        let all_signs = self
            .rows
            .iter()
            .filter(|r| r.center() == RtValue::PLUS_ONE)
            .all(|r| {
                r.without_center()
                    .iter()
                    .all(|&v| v == RtValue::PLUS_ONE || v == RtValue::MINUS_ONE)
            });
        // 2^(N-1) distinct rows over {+1,-1}^(N-1) cover every pattern
        if all_signs {
            TableKind::CompletelyCorrect1st
        } else {
            TableKind::CompletelyCorrect2nd
        }
    }

    /// The table moved into the subtable labelled `target`.
    pub fn subtable(&self, target: RtValue) -> ResolutionTable {
        self.with_rows(self.rows.iter().map(|r| r.substitute(target)).collect())
    }

    /// The six subtables, `=0` first, in label order `0, 1, 2, -0, -1, -2`.
    pub fn expand_subtables(&self) -> [ResolutionTable; 6] {
        RtValue::ALL.map(|t| self.subtable(t))
    }

    /// Re-expresses the table for the mirrored mask `(m, n)`: the column at
    /// offset `x` moves to the column at offset `-x`.
    pub fn reflect(&self) -> Result<ResolutionTable, RtError> {
        let mask = self.mask.ok_or(RtError::MissingMask)?;
        let columns = self.columns.clone().unwrap_or_else(|| mask.column_offsets());
        let mirrored = mask.reflected();
        let target = mirrored.column_offsets();
        if columns.len() != self.width || target.len() != self.width {
            return Err(RtError::DimensionMismatch { left: self.width, right: target.len() });
        }
        let perm: Vec<usize> = columns
            .iter()
            .map(|&x| target.iter().position(|&y| y == -x).ok_or(RtError::MissingMask))
            .collect::<Result<_, _>>()?;
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut out = r.values().to_vec();
                for (j, &p) in perm.iter().enumerate() {
                    out[p] = r.values()[j];
                }
                RtRow::new(out)
            })
            .collect();
        let mut t = self.with_rows(rows);
        t.mask = Some(mirrored);
        t.columns = Some(target);
        Ok(t)
    }
}

pub fn classify_value_set(set: u8) -> TableClass {
    const SMALL: u8 = 1 << 1 | 1 << 2 | 1 << 4;
    if set & !SMALL == 0 {
        TableClass::Small
    } else if set & !(SMALL | 1) == 0 {
        TableClass::Middle
    } else {
        TableClass::Full
    }
}
