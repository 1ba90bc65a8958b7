//! Experimental extraction of resolution-table rows from automaton runs.
//!
//! Every (node, slot) of a verified run pair yields one row whose column
//! `j` describes the mask point `v + offset_j` relative to the central node
//! `v` at the same slot. How a cell is computed is a named hypothesis; all
//! tables produced here carry its id.

use alloc::string::String;
use alloc::vec::Vec;

use super::table::{ResolutionTable, RtRow};
use super::value::RtValue;
use super::RtError;
use crate::ac23::Mask;
use crate::dynamics::RunRecord;
use crate::ipf::{build_slots, check_ipf, CheckLevel, IpfOptions, SlotTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum ExtractionHypothesis {
    /// Digit: difference of C times at the slot mod 3, taking the time from
    /// whichever run holds the C. Bar: the point's C is in the complement
    /// run.
    #[default]
    PhaseDifference,
    /// Digit: difference of slot start times in the own run mod 3. Bar: the
    /// point holds A in the own run.
    SlotStart,
}

impl ExtractionHypothesis {
    pub const fn id(self) -> &'static str {
        match self {
            ExtractionHypothesis::PhaseDifference => "phase-diff-v1",
            ExtractionHypothesis::SlotStart => "slot-start-v1",
        }
    }

    pub fn from_id(s: &str) -> Option<Self> {
        [ExtractionHypothesis::PhaseDifference, ExtractionHypothesis::SlotStart]
            .into_iter()
            .find(|h| h.id() == s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExtractOptions {
    pub hypothesis: ExtractionHypothesis,
    pub level: CheckLevel,
    pub ipf: IpfOptions,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        ExtractOptions {
            hypothesis: ExtractionHypothesis::PhaseDifference,
            level: CheckLevel::Full,
            ipf: IpfOptions::default(),
        }
    }
}

/// Per (node, slot): the hypothesis' raw time and bar flag.
fn cell_data(own: &SlotTable, bar: &SlotTable, hypothesis: ExtractionHypothesis) -> Vec<Vec<(i64, bool)>> {
    match hypothesis {
        ExtractionHypothesis::PhaseDifference => own
            .nodes
            .iter()
            .zip(&bar.nodes)
            .map(|(x, y)| {
                x.f.iter()
                    .zip(&y.f)
                    .map(|(&f, &fb)| if f != -1 { (f, false) } else { (fb, true) })
                    .collect()
            })
            .collect(),
        ExtractionHypothesis::SlotStart => own
            .nodes
            .iter()
            .map(|x| {
                let mut t = 1i64;
                x.c.iter()
                    .zip(&x.a)
                    .map(|(&c, &a)| {
                        let cell = (t, a);
                        t += if c { 2 } else { 1 };
                        cell
                    })
                    .collect()
            })
            .collect(),
    }
}

/// Rows from verified run pairs `(run, complement_run)` of `mask`.
pub fn extract_rows(
    mask: &Mask,
    runs: &[(RunRecord, RunRecord)],
    options: &ExtractOptions,
) -> Result<ResolutionTable, RtError> {
    let offsets = mask.column_offsets();
    let mut table = ResolutionTable::for_mask(*mask);
    table.hypothesis = Some(String::from(options.hypothesis.id()));
    for (index, (run, comp)) in runs.iter().enumerate() {
        let verified = check_ipf(run, comp, &options.ipf)
            .map(|r| r.passes(options.level) && r.slot_mismatches.is_empty())
            .unwrap_or(false);
        if !verified {
            return Err(RtError::UnverifiedRuns { index });
        }
        let (own, bar) = build_slots(run, comp);
        let cells = cell_data(&own, &bar, options.hypothesis);
        let len = run.node_count() as i64;
        for v in 0..run.node_count() {
            for (slot, &(tv, _)) in cells[v].iter().enumerate() {
                let row = offsets
                    .iter()
                    .map(|&o| {
                        let u = (v as i64 + o).rem_euclid(len) as usize;
                        let (tu, barred) = cells[u][slot];
                        RtValue::new((tu - tv).rem_euclid(3) as u8, barred)
                    })
                    .collect();
                table.insert(RtRow::new(row))?;
            }
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::color::Coloring;
    use crate::dynamics::run_to_mirror;

    fn pairs(mask: &Mask, len: usize) -> Vec<(RunRecord, RunRecord)> {
        let ring = mask.ring(len);
        let full = ring.full_mask();
        (1..full)
            .map(|bits| {
                (
                    run_to_mirror(&ring, &Coloring::from_ab_bits(len, bits), 10_000).unwrap(),
                    run_to_mirror(&ring, &Coloring::from_ab_bits(len, !bits & full), 10_000).unwrap(),
                )
            })
            .filter(|(a, b)| !a.is_degenerate() && !b.is_degenerate())
            .collect()
    }

    #[test]
    fn no_runs_no_rows() {
        let t = extract_rows(&Mask::new(1, 1), &[], &ExtractOptions::default()).unwrap();
        assert!(t.is_empty());
        assert_eq!(t.hypothesis.as_deref(), Some("phase-diff-v1"));
    }

    #[test]
    fn extraction_is_deterministic_and_labelled() {
        let mask = Mask::new(1, 3);
        let runs = pairs(&mask, 6);
        let opts = ExtractOptions::default();
        let a = extract_rows(&mask, &runs, &opts).unwrap();
        let b = extract_rows(&mask, &runs, &opts).unwrap();
        assert_eq!(a, b);
        assert!(a.row_count() > 0);
        assert_eq!(a.width(), 4);
        // the central cell compares a node with itself
        assert!(a.rows().all(|r| r.center().digit() == 0));
    }

    #[test]
    fn slot_start_tables_of_mask_1_1() {
        let mask = Mask::new(1, 1);
        let runs: Vec<_> = (3..=8).flat_map(|l| pairs(&mask, l)).collect();
        let opts = ExtractOptions { hypothesis: ExtractionHypothesis::SlotStart, ..ExtractOptions::default() };
        let t = extract_rows(&mask, &runs, &opts).unwrap();
        assert_eq!(t.row_count(), 18);
    }

    #[test]
    fn failing_runs_are_rejected() {
        let mask = Mask::new(1, 5);
        let ring = mask.ring(7);
        let start = Coloring::from_ab_bits(7, 0b101);
        let comp = Coloring::from_ab_bits(7, !0b101 & 0x7f);
        let pair = (run_to_mirror(&ring, &start, 10_000).unwrap(), run_to_mirror(&ring, &comp, 10_000).unwrap());
        assert_eq!(
            extract_rows(&mask, &[pair], &ExtractOptions::default()),
            Err(RtError::UnverifiedRuns { index: 0 })
        );
    }
}
