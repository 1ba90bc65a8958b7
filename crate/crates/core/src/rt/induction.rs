//! Building tables for masks `(1, 2^k − 1)` by induction on `k`.
//!
//! Each step triples the table: every row (in construction order) is copied
//! three times and a new last column is appended, its value taken from the
//! step map keyed by the row's current last value and the copy index. The
//! zero column follows the ±1 Cantor fractal: the middle copy of each row
//! gets `-1`, the outer copies keep the parent's value.
//!
//! The base table and the step map are inputs. The legible material fixes
//! neither, so every table built here carries the step table's hypothesis
//! id.

use alloc::string::String;
use alloc::vec::Vec;

use super::table::{ResolutionTable, RtRow};
use super::value::RtValue;
use super::RtError;
use crate::ac23::Mask;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepTable {
    pub id: String,
    /// Rows of the `k = 1` table (mask `(1,1)`, three columns) in
    /// construction order.
    pub base: Vec<RtRow>,
    /// New-column values for each last value (indexed by code) and copy.
    pub map: [Option<[RtValue; 3]>; 6],
}

impl StepTable {
    /// The product hypothesis: other columns range freely over `1, 2, -1`,
    /// the center is `+1` exactly when no other column holds `2`.
    pub fn product() -> StepTable {
        let free = [RtValue::PLUS_ONE, RtValue::new(2, false), RtValue::MINUS_ONE];
        let mut base = Vec::new();
        for a in free {
            for b in free {
                let center = if a.code() == 2 || b.code() == 2 {
                    RtValue::MINUS_ONE
                } else {
                    RtValue::PLUS_ONE
                };
                base.push(RtRow::new(alloc::vec![center, a, b]));
            }
        }
        let mut map = [None; 6];
        for v in free {
            map[v.code() as usize] = Some(free);
        }
        StepTable {
            id: String::from("product-v1"),
            base,
            map,
        }
    }

    fn validate(&self) -> Result<(), RtError> {
        if self.base.is_empty() || self.base.iter().any(|r| r.len() != 3) {
            return Err(RtError::BadStepTable("base rows must have three columns"));
        }
        Ok(())
    }
}

fn grow(rows: &[RtRow], step: &StepTable) -> Result<Vec<RtRow>, RtError> {
    let mut out = Vec::with_capacity(rows.len() * 3);
    for row in rows {
        let last = *row.values().last().expect("rows are non-empty");
        let next = step.map[last.code() as usize].ok_or(RtError::MissingStep(last))?;
        for (copy, value) in next.into_iter().enumerate() {
            let mut values = row.values().to_vec();
            if copy == 1 {
                values[0] = RtValue::MINUS_ONE;
            }
            values.push(value);
            out.push(RtRow::new(values));
        }
    }
    Ok(out)
}

/// The table of mask `(1, 2^k − 1)`, `N = k + 2` columns.
pub fn build_1_2k1(k: u32, step: Option<&StepTable>) -> Result<ResolutionTable, RtError> {
    let step = step.ok_or(RtError::UnconfiguredStepTable)?;
    step.validate()?;
    if k == 0 || k > 40 {
        return Err(RtError::BadStepTable("k must lie in 1..=40"));
    }
    let mut rows = step.base.clone();
    for _ in 1..k {
        rows = grow(&rows, step)?;
    }
    let mut table = ResolutionTable::for_mask(Mask::new(1, (1u64 << k) - 1));
    let expected = rows.len();
    table.extend(rows)?;
    if table.row_count() != expected {
        return Err(RtError::BadStepTable("step map produced duplicate rows"));
    }
    table.hypothesis = Some(step.id.clone());
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rt::{intersect, union, TableClass, TableKind};

    #[test]
    fn unconfigured() {
        assert_eq!(build_1_2k1(2, None), Err(RtError::UnconfiguredStepTable));
    }

    #[test]
    fn product_tables_triple_and_stay_first_kind() {
        let step = StepTable::product();
        let mut prev = 0;
        for k in 1..=5 {
            let t = build_1_2k1(k, Some(&step)).unwrap();
            assert_eq!(t.width(), k as usize + 2);
            assert_eq!(t.row_count(), 3usize.pow(k + 1));
            if prev > 0 {
                assert_eq!(t.row_count(), 3 * prev);
            }
            prev = t.row_count();
            assert_eq!(t.kind(), TableKind::CompletelyCorrect1st, "k={k}");
            assert_eq!(t.classify(), TableClass::Small);
            assert_eq!(t.s_counts().zero[1], 1 << (k + 1));
        }
        let k2 = build_1_2k1(2, Some(&step)).unwrap();
        assert_eq!(k2.mask, Some(Mask::new(1, 3)));
        assert_eq!(k2.row_count(), 27);
        assert_eq!(k2.hypothesis.as_deref(), Some("product-v1"));
    }

    #[test]
    fn zero_column_is_the_cantor_fractal_in_canonical_order() {
        let t = build_1_2k1(2, Some(&StepTable::product())).unwrap();
        let centers: Vec<bool> = t.rows().map(|r| r.center() == RtValue::PLUS_ONE).collect();
        // canonical order ranks 1 < 2 < -1, so index digits avoid the middle value
        let cantor: Vec<bool> = (0..27u32)
            .map(|i| (0..3).all(|p| i / 3u32.pow(p) % 3 != 1))
            .collect();
        assert_eq!(centers, cantor);
    }

    #[test]
    fn product_reflection_is_symmetric() {
        let t = build_1_2k1(2, Some(&StepTable::product())).unwrap();
        let r = t.reflect().unwrap();
        assert_eq!(intersect(&t, &r).unwrap().row_count(), 27);
        assert_eq!(union(&t, &r).unwrap().row_count(), 27);
    }

    #[test]
    fn missing_step_entry() {
        let mut step = StepTable::product();
        step.map[4] = None;
        assert_eq!(build_1_2k1(2, Some(&step)), Err(RtError::MissingStep(RtValue::MINUS_ONE)));
        assert!(build_1_2k1(1, Some(&step)).is_ok());
    }
}
