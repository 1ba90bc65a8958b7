//! The Invariant of Precise Filling: slot arrays built from a run and its
//! complement run, the integral phase, and the divisibility check plus
//! conditions \[1\]–\[8\].
//!
//! Slots are assigned by ordinal: scanning a node's history `t = 1..T`, each
//! A or C event takes the next slot index. A C event at slot `k` records its
//! time in `f_v(k)`. A B event always follows a C of the same node and
//! belongs to that C's slot, so `B_v = C_v`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::color::Color;
use crate::dynamics::{Lambda, RunRecord, RunSummary};
use crate::graph::NodeId;

/// How `G_T = Ḡ_T̄` is compared.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Cond1Reading {
    /// `G_T` equals the last state of the complement-started run.
    Raw,
    /// `G_T` equals the complement of that state.
    #[default]
    Complemented,
}

/// Which statements a check covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum CheckLevel {
    /// Divisibility plus \[1\]–\[3\].
    #[default]
    Light,
    /// All nine statements.
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct IpfOptions {
    pub cond1: Cond1Reading,
    /// Subtracted from every recorded C time before taking phases.
    pub time_origin: u8,
}

impl Default for IpfOptions {
    fn default() -> Self {
        IpfOptions {
            cond1: Cond1Reading::Complemented,
            time_origin: 1,
        }
    }
}

/// One of the nine statements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Condition {
    Div3,
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    C7,
    C8,
}

impl Condition {
    pub const ALL: [Condition; 9] = [
        Condition::Div3,
        Condition::C1,
        Condition::C2,
        Condition::C3,
        Condition::C4,
        Condition::C5,
        Condition::C6,
        Condition::C7,
        Condition::C8,
    ];

    pub const fn name(self) -> &'static str {
        match self {
            Condition::Div3 => "div3",
            Condition::C1 => "c1",
            Condition::C2 => "c2",
            Condition::C3 => "c3",
            Condition::C4 => "c4",
            Condition::C5 => "c5",
            Condition::C6 => "c6",
            Condition::C7 => "c7",
            Condition::C8 => "c8",
        }
    }

    pub fn from_name(s: &str) -> Option<Condition> {
        Condition::ALL.into_iter().find(|c| c.name() == s)
    }

    /// Position in `IpfReport::cond` for \[1\]..\[8\].
    const fn cond_index(self) -> Option<usize> {
        match self {
            Condition::Div3 => None,
            Condition::C1 => Some(0),
            Condition::C2 => Some(1),
            Condition::C3 => Some(2),
            Condition::C4 => Some(3),
            Condition::C5 => Some(4),
            Condition::C6 => Some(5),
            Condition::C7 => Some(6),
            Condition::C8 => Some(7),
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IpfError {
    /// One of the runs has `T ≤ 2`.
    DegenerateRun { period: usize, complement_period: usize },
    LengthMismatch,
}

impl fmt::Display for IpfError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            IpfError::DegenerateRun { period, complement_period } => write!(
                f,
                "degenerate run pair (T={period}, T̄={complement_period}); the invariant needs T > 2"
            ),
            IpfError::LengthMismatch => write!(f, "runs are on graphs of different sizes"),
        }
    }
}

impl core::error::Error for IpfError {}

/// A node whose A/C event count differs from `K`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SlotMismatch {
    pub node: NodeId,
    pub events: usize,
    pub k: usize,
}

/// Slot arrays of one node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeSlots {
    pub a: Vec<bool>,
    pub c: Vec<bool>,
    /// Time of the C event at each slot, `-1` where there is none.
    pub f: Vec<i64>,
}

impl NodeSlots {
    /// `B_v`, identical to `C_v`.
    pub fn b(&self) -> &[bool] {
        &self.c
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlotTable {
    pub k: usize,
    pub nodes: Vec<NodeSlots>,
    pub lambdas: Vec<Lambda>,
    pub mismatches: Vec<SlotMismatch>,
}

impl SlotTable {
    fn from_run(run: &RunRecord, k: usize) -> SlotTable {
        let n = run.node_count();
        let mut nodes = vec![
            NodeSlots {
                a: vec![false; k],
                c: vec![false; k],
                f: vec![-1; k],
            };
            n
        ];
        let mut next = vec![0usize; n];
        for (i, state) in run.states.iter().enumerate() {
            let t = i as i64 + 1;
            for (v, color) in state.iter().enumerate() {
                if color == Color::B {
                    continue;
                }
                let slot = next[v];
                next[v] += 1;
                if slot >= k {
                    continue;
                }
                match color {
                    Color::A => nodes[v].a[slot] = true,
                    Color::C => {
                        nodes[v].c[slot] = true;
                        nodes[v].f[slot] = t;
                    }
                    Color::B => unreachable!(),
                }
            }
        }
        let mismatches = next
            .iter()
            .enumerate()
            .filter(|&(_, &events)| events != k)
            .map(|(node, &events)| SlotMismatch { node, events, k })
            .collect();
        SlotTable {
            k,
            nodes,
            lambdas: run.summary.lambdas(),
            mismatches,
        }
    }
}

/// Slot tables for a run and its complement run, with
/// `K = ⌊(T + T̄) / 3⌋`. Nodes whose event count is not `K` are listed in
/// `mismatches`; events past `K` are dropped.
pub fn build_slots(run: &RunRecord, complement_run: &RunRecord) -> (SlotTable, SlotTable) {
    let k = (run.period() + complement_run.period()) / 3;
    (
        SlotTable::from_run(run, k),
        SlotTable::from_run(complement_run, k),
    )
}

/// `F_v^(2)`: per node and slot a value in `0..4`, `None` where neither
/// run supplies a C time.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaseTable {
    pub nodes: Vec<Vec<Option<u8>>>,
}

impl PhaseTable {
    pub fn get(&self, v: NodeId, k: usize) -> Option<u8> {
        self.nodes[v][k]
    }
}

/// Full integral phase with modulus 2. `time_origin` is subtracted from
/// every C time first.
pub fn integral_phase(slots: &SlotTable, complement_slots: &SlotTable, time_origin: u8) -> PhaseTable {
    let origin = time_origin as i64;
    let nodes = slots
        .nodes
        .iter()
        .zip(&complement_slots.nodes)
        .map(|(own, bar)| {
            own.f
                .iter()
                .zip(&bar.f)
                .map(|(&f, &fb)| {
                    if f != -1 {
                        Some((f - origin).rem_euclid(2) as u8)
                    } else if fb != -1 {
                        Some(2 + (fb - origin).rem_euclid(2) as u8)
                    } else {
                        None
                    }
                })
                .collect()
        })
        .collect();
    PhaseTable { nodes }
}

/// Evidence for a failed statement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Witness {
    pub condition: Condition,
    pub node: Option<NodeId>,
    pub slot: Option<usize>,
    pub time: Option<i64>,
}

impl Witness {
    const fn scalar(condition: Condition) -> Self {
        Witness { condition, node: None, slot: None, time: None }
    }
}

/// Outcome of checking one run pair.
///
/// `cond[i]` holds statement `[i + 1]`; entries for \[4\]–\[8\] are `None`
/// when only summaries were available.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IpfReport {
    pub t: usize,
    pub t_bar: usize,
    /// λ of node 0; see `lambda_uniform`.
    pub lambda: Lambda,
    pub lambda_bar: Lambda,
    pub lambda_uniform: bool,
    pub k: usize,
    pub div3: bool,
    pub cond: [Option<bool>; 8],
    /// \[1\] under each reading, raw first.
    pub cond1_readings: [bool; 2],
    /// \[8\] under time origins 0 and 1.
    pub cond8_origins: [Option<bool>; 2],
    /// \[4\]–\[7\] agree slot by slot; a disagreement points at the slot
    /// reconstruction rather than the automaton.
    pub slots_consistent: Option<bool>,
    pub slot_mismatches: Vec<SlotMismatch>,
    pub witnesses: Vec<Witness>,
}

impl IpfReport {
    pub fn light_ok(&self) -> bool {
        self.div3 && self.cond[..3].iter().all(|c| *c == Some(true))
    }

    pub fn full_ok(&self) -> bool {
        self.light_ok() && self.cond[3..].iter().all(|c| *c == Some(true))
    }

    pub fn passes(&self, level: CheckLevel) -> bool {
        match level {
            CheckLevel::Light => self.light_ok(),
            CheckLevel::Full => self.full_ok(),
        }
    }

    pub fn holds(&self, condition: Condition) -> Option<bool> {
        match condition.cond_index() {
            None => Some(self.div3),
            Some(i) => self.cond[i],
        }
    }

    /// First failing statement in the order div3, \[1\], ..., \[8\],
    /// restricted to the statements `level` covers.
    pub fn first_failure(&self, level: CheckLevel) -> Option<Condition> {
        let covered = match level {
            CheckLevel::Light => 4,
            CheckLevel::Full => 9,
        };
        Condition::ALL[..covered]
            .iter()
            .copied()
            .find(|&c| self.holds(c) == Some(false))
    }
}

fn check_pair(a: &RunSummary, b: &RunSummary) -> Result<(), IpfError> {
    if a.start_ab.len() != b.start_ab.len() {
        return Err(IpfError::LengthMismatch);
    }
    if a.is_degenerate() || b.is_degenerate() {
        return Err(IpfError::DegenerateRun {
            period: a.period,
            complement_period: b.period,
        });
    }
    Ok(())
}

/// Divisibility and \[1\]–\[3\] from two run summaries. \[2\] and \[3\] are
/// checked at every node.
pub fn check_light(
    run: &RunSummary,
    complement_run: &RunSummary,
    cond1: Cond1Reading,
) -> Result<IpfReport, IpfError> {
    check_pair(run, complement_run)?;
    let (t, t_bar) = (run.period, complement_run.period);
    let mut witnesses = Vec::new();

    let div3 = (t + t_bar) % 3 == 0;
    if !div3 {
        witnesses.push(Witness::scalar(Condition::Div3));
    }

    let raw = run.last_state == complement_run.last_state;
    let complemented = run.last_state == complement_run.last_state.complement();
    let c1 = match cond1 {
        Cond1Reading::Raw => raw,
        Cond1Reading::Complemented => complemented,
    };
    if !c1 {
        let expected = match cond1 {
            Cond1Reading::Raw => complement_run.last_state.clone(),
            Cond1Reading::Complemented => complement_run.last_state.complement(),
        };
        let node = run
            .last_state
            .iter()
            .zip(expected.iter())
            .position(|(x, y)| x != y);
        witnesses.push(Witness { node, ..Witness::scalar(Condition::C1) });
    }

    let gap = t_bar as i64 - t as i64;
    let mut c2 = true;
    let mut c3 = true;
    for v in 0..run.counts.len() {
        let (lam, lam_bar) = (run.lambda(v), complement_run.lambda(v));
        if c2 && lam != -lam_bar {
            c2 = false;
            witnesses.push(Witness { node: Some(v), ..Witness::scalar(Condition::C2) });
        }
        if c3 && gap != lam.0 {
            c3 = false;
            witnesses.push(Witness { node: Some(v), ..Witness::scalar(Condition::C3) });
        }
    }

    Ok(IpfReport {
        t,
        t_bar,
        lambda: run.lambda(0),
        lambda_bar: complement_run.lambda(0),
        lambda_uniform: run.uniform_lambda().is_some()
            && complement_run.uniform_lambda().is_some(),
        k: (t + t_bar) / 3,
        div3,
        cond: [Some(c1), Some(c2), Some(c3), None, None, None, None, None],
        cond1_readings: [raw, complemented],
        cond8_origins: [None, None],
        slots_consistent: None,
        slot_mismatches: Vec::new(),
        witnesses,
    })
}

/// All nine statements from two recorded runs.
pub fn check_ipf(
    run: &RunRecord,
    complement_run: &RunRecord,
    options: &IpfOptions,
) -> Result<IpfReport, IpfError> {
    let mut report = check_light(&run.summary, &complement_run.summary, options.cond1)?;
    let (own, bar) = build_slots(run, complement_run);
    let k = own.k;

    // [4]..[7] per node and slot; the first failure of each is kept.
    let mut ok = [true; 4];
    let mut consistent = true;
    let mut slot_witness = [None; 4];
    for (v, (x, y)) in own.nodes.iter().zip(&bar.nodes).enumerate() {
        for slot in 0..k {
            let results = [
                x.c[slot] as u8 + y.c[slot] as u8 == 1,
                x.a[slot] as u8 + y.a[slot] as u8 == 1,
                y.a[slot] == x.c[slot],
                y.c[slot] == x.a[slot],
            ];
            if results.iter().any(|&r| r != results[0]) {
                consistent = false;
            }
            for (i, &r) in results.iter().enumerate() {
                if !r && ok[i] {
                    ok[i] = false;
                    let time = [x.f[slot], y.f[slot]].into_iter().find(|&f| f != -1);
                    slot_witness[i] = Some((v, slot, time));
                }
            }
        }
    }
    let mismatched = !own.mismatches.is_empty() || !bar.mismatches.is_empty();
    let labels = [Condition::C4, Condition::C5, Condition::C6, Condition::C7];
    for i in 0..4 {
        // A count mismatch means some events never found a slot.
        if mismatched && ok[i] {
            ok[i] = false;
            let m = own.mismatches.first().or(bar.mismatches.first()).unwrap();
            slot_witness[i] = Some((m.node, m.events.min(k), None));
        }
        if let Some((node, slot, time)) = slot_witness[i] {
            report.witnesses.push(Witness {
                condition: labels[i],
                node: Some(node),
                slot: Some(slot),
                time,
            });
        }
        report.cond[3 + i] = Some(ok[i]);
    }

    let mut c8 = [None, None];
    let mut c8_witness = None;
    for origin in 0..2u8 {
        let phases = integral_phase(&own, &bar, origin);
        let failure = phase_condition_failure(&phases, k);
        if origin == options.time_origin {
            c8_witness = failure;
        }
        c8[origin as usize] = Some(failure.is_none());
    }
    report.cond[7] = c8[options.time_origin as usize & 1];
    if let Some((node, slot)) = c8_witness {
        report.witnesses.push(Witness {
            condition: Condition::C8,
            node: Some(node),
            slot: Some(slot),
            time: None,
        });
    }
    report.cond8_origins = c8;
    report.slots_consistent = Some(consistent && !mismatched);
    report.slot_mismatches = own.mismatches.into_iter().chain(bar.mismatches).collect();
    Ok(report)
}

/// First `(node, slot)` violating the phase condition \[8\], if any.
fn phase_condition_failure(phases: &PhaseTable, k: usize) -> Option<(NodeId, usize)> {
    if k == 0 {
        return None;
    }
    let parity = |v: NodeId, slot: usize| phases.get(v, slot).map(|p| p % 2);
    for v in 0..phases.nodes.len() {
        if parity(v, 0) != Some(0) {
            return Some((v, 0));
        }
        let mut pair = 1;
        while 2 * pair < k {
            let (lo, hi) = (parity(v, 2 * pair - 1), parity(v, 2 * pair));
            if lo.is_none() || lo != hi {
                return Some((v, 2 * pair - 1));
            }
            pair += 1;
        }
    }
    if k.is_multiple_of(2) {
        let last = parity(0, k - 1);
        for v in 0..phases.nodes.len() {
            if parity(v, k - 1).is_none() || parity(v, k - 1) != last {
                return Some((v, k - 1));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::run_to_mirror;
    use crate::graph::MixedGraph;

    fn fixture() -> (RunRecord, RunRecord) {
        let ring = MixedGraph::ring(3).unwrap();
        let start: crate::Coloring = "ABA".parse().unwrap();
        (
            run_to_mirror(&ring, &start, 100).unwrap(),
            run_to_mirror(&ring, &start.complement(), 100).unwrap(),
        )
    }

    #[test]
    fn fixture_slots() {
        let (run, bar) = fixture();
        assert_eq!(bar.history(0), [Color::C, Color::B, Color::A]);
        let (s, sb) = build_slots(&run, &bar);
        assert_eq!(s.k, 2);
        assert_eq!(s.nodes[0].a, [true, false]);
        assert_eq!(s.nodes[0].c, [false, true]);
        assert_eq!(s.nodes[0].f, [-1, 2]);
        assert_eq!(s.nodes[0].b(), s.nodes[0].c.as_slice());
        assert_eq!(sb.nodes[0].c, [true, false]);
        assert_eq!(sb.nodes[0].f, [1, -1]);
        assert_eq!(sb.nodes[0].a, [false, true]);
        assert!(s.mismatches.is_empty() && sb.mismatches.is_empty());
    }

    #[test]
    fn fixture_phases() {
        let (run, bar) = fixture();
        let (s, sb) = build_slots(&run, &bar);
        let ph = integral_phase(&s, &sb, 0);
        assert_eq!(ph.get(0, 1), Some(0));
        assert_eq!(ph.get(0, 0), Some(3));
        let ph1 = integral_phase(&s, &sb, 1);
        assert_eq!(ph1.get(0, 0), Some(2));
    }

    #[test]
    fn phase_formula_cases() {
        let one = |f: i64, fb: i64| {
            let s = SlotTable {
                k: 1,
                nodes: vec![NodeSlots { a: vec![false], c: vec![f != -1], f: vec![f] }],
                lambdas: vec![Lambda(0)],
                mismatches: vec![],
            };
            let sb = SlotTable {
                k: 1,
                nodes: vec![NodeSlots { a: vec![false], c: vec![fb != -1], f: vec![fb] }],
                lambdas: vec![Lambda(0)],
                mismatches: vec![],
            };
            integral_phase(&s, &sb, 0).get(0, 0)
        };
        assert_eq!(one(4, -1), Some(0));
        assert_eq!(one(-1, 2), Some(2));
        assert_eq!(one(-1, -1), None);
    }

    #[test]
    fn fixture_report() {
        let (run, bar) = fixture();
        let r = check_ipf(&run, &bar, &IpfOptions::default()).unwrap();
        assert_eq!((r.t, r.t_bar, r.k), (3, 3, 2));
        assert_eq!((r.lambda, r.lambda_bar), (Lambda(0), Lambda(0)));
        assert!(r.div3);
        assert_eq!(r.cond, [Some(true); 8]);
        assert_eq!(r.cond8_origins, [Some(false), Some(true)]);
        assert_eq!(r.cond1_readings, [false, true]);
        assert!(r.light_ok() && r.full_ok());
        assert_eq!(r.slots_consistent, Some(true));

        let raw = check_ipf(&run, &bar, &IpfOptions { cond1: Cond1Reading::Raw, time_origin: 0 })
            .unwrap();
        assert_eq!(raw.cond[0], Some(false));
        assert_eq!(raw.first_failure(CheckLevel::Light), Some(Condition::C1));
    }

    #[test]
    fn all_a_pair_is_degenerate() {
        let ring = MixedGraph::ring(3).unwrap();
        let a = run_to_mirror(&ring, &"AAA".parse().unwrap(), 10).unwrap();
        let b = run_to_mirror(&ring, &"BBB".parse().unwrap(), 10).unwrap();
        assert_eq!(
            check_ipf(&a, &b, &IpfOptions::default()),
            Err(IpfError::DegenerateRun { period: 1, complement_period: 1 })
        );
    }

    #[test]
    fn condition_names_round_trip() {
        for c in Condition::ALL {
            assert_eq!(Condition::from_name(c.name()), Some(c));
        }
    }
}
