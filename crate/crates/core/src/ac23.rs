//! Circle automata built from a pair of bit masks, and the search that
//! classifies a mask as correct-so-far or incorrect.
//!
//! Mask `(n, m)` gives node `x` of an `L`-circle the out-neighbors
//! `x − (i + 1)` for every set bit `i` of `n` and `x + (i + 1)` for every set
//! bit `i` of `m`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::color::Coloring;
use crate::dynamics::{run_summary, run_to_mirror, DynamicsError, DEFAULT_MAX_STEPS};
use crate::graph::MixedGraph;
use crate::ipf::{check_ipf, check_light, CheckLevel, Condition, IpfError, IpfOptions};
use crate::ring::{RingAutomaton, MAX_RING_LEN};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Mask {
    pub n: u64,
    pub m: u64,
}

fn set_bit_offsets(x: u64) -> impl Iterator<Item = i64> {
    (0..64).filter(move |i| x >> i & 1 == 1).map(|i| i as i64 + 1)
}

impl Mask {
    /// # Panics
    /// If `n` or `m` is zero.
    pub fn new(n: u64, m: u64) -> Self {
        assert!(n > 0 && m > 0, "mask ({n},{m}) needs both sides non-empty");
        Mask { n, m }
    }

    pub fn try_new(n: u64, m: u64) -> Option<Self> {
        (n > 0 && m > 0).then_some(Mask { n, m })
    }

    /// Distances `d` such that `x` reads `x − d`, ascending.
    pub fn left_offsets(&self) -> Vec<i64> {
        set_bit_offsets(self.n).collect()
    }

    /// Distances `d` such that `x` reads `x + d`, ascending.
    pub fn right_offsets(&self) -> Vec<i64> {
        set_bit_offsets(self.m).collect()
    }

    /// Points of the mask including the central point.
    pub fn point_count(&self) -> usize {
        (self.n.count_ones() + self.m.count_ones() + 1) as usize
    }

    /// Signed offsets of the non-central points, ascending.
    pub fn shifts(&self) -> Vec<i64> {
        let mut s: Vec<i64> = set_bit_offsets(self.n)
            .map(|d| -d)
            .chain(set_bit_offsets(self.m))
            .collect();
        s.sort_unstable();
        s
    }

    /// Offset of each table column: column 0 is the central point, the rest
    /// follow in ascending offset order.
    pub fn column_offsets(&self) -> Vec<i64> {
        let mut cols = Vec::with_capacity(self.point_count());
        cols.push(0);
        cols.extend(self.shifts());
        cols
    }

    pub fn max_offset(&self) -> i64 {
        (64 - self.n.leading_zeros()).max(64 - self.m.leading_zeros()) as i64
    }

    /// The mirror image `(m, n)`.
    pub fn reflected(&self) -> Mask {
        Mask { n: self.m, m: self.n }
    }

    pub fn is_odd(&self) -> bool {
        self.n & 1 == 1 && self.m & 1 == 1
    }

    /// Some offsets vanish or coincide mod `len`.
    pub fn is_degenerate_at(&self, len: usize) -> bool {
        let residues: BTreeSet<i64> = self
            .shifts()
            .into_iter()
            .map(|s| s.rem_euclid(len as i64))
            .collect();
        residues.contains(&0) || residues.len() < self.point_count() - 1
    }

    pub fn ring(&self, len: usize) -> RingAutomaton {
        RingAutomaton::new(len, self.shifts())
    }
}

impl fmt::Display for Mask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.n, self.m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ac23Error {
    LengthTooSmall(usize),
    LengthTooLarge(usize),
    EmptyRange,
    NotWeakComputable { mask: Mask, len: usize },
    Dynamics { len: usize, start: Coloring, source: DynamicsError },
}

impl fmt::Display for Ac23Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ac23Error::LengthTooSmall(l) => write!(f, "circle length {l} is below 3"),
            Ac23Error::LengthTooLarge(l) => {
                write!(f, "circle length {l} exceeds {MAX_RING_LEN}")
            }
            Ac23Error::EmptyRange => write!(f, "empty range of circle lengths"),
            Ac23Error::NotWeakComputable { mask, len } => write!(
                f,
                "mask {mask} is not weak computable at L={len}"
            ),
            Ac23Error::Dynamics { len, start, source } => {
                write!(f, "L={len}, start {start}: {source}")
            }
        }
    }
}

impl core::error::Error for Ac23Error {}

/// A built circle graph and whether offsets collided while building it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircleGraph {
    pub graph: MixedGraph,
    pub degenerate: bool,
}

/// The mixed graph of `mask` on `len` nodes. Arc pairs `x → y`, `y → x`
/// become one undirected edge; zero and repeated offsets are dropped and
/// flagged.
pub fn build_graph(mask: &Mask, len: usize) -> Result<CircleGraph, Ac23Error> {
    if len < 3 {
        return Err(Ac23Error::LengthTooSmall(len));
    }
    let l = len as i64;
    let residues: BTreeSet<i64> = mask
        .shifts()
        .into_iter()
        .map(|s| s.rem_euclid(l))
        .filter(|&s| s != 0)
        .collect();
    let mut directed = BTreeSet::new();
    let mut undirected = BTreeSet::new();
    for x in 0..l {
        for &s in &residues {
            let y = (x + s) % l;
            let (u, v) = (x as usize, y as usize);
            if residues.contains(&(l - s)) {
                undirected.insert((u.min(v), u.max(v)));
            } else {
                directed.insert((u, v));
            }
        }
    }
    let graph = MixedGraph::new(len, directed, undirected)
        .expect("circle construction yields a valid mixed graph");
    Ok(CircleGraph {
        graph,
        degenerate: mask.is_degenerate_at(len),
    })
}

pub fn mask_weak_computable(mask: &Mask, len: usize) -> Result<bool, Ac23Error> {
    Ok(build_graph(mask, len)?.graph.weak_computable())
}

/// Search envelope and check settings.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SearchConfig {
    pub lmin: usize,
    pub lmax: usize,
    /// Lengths up to this are searched over all `2^L` starts.
    pub exhaustive_cutoff: usize,
    pub samples_per_len: u64,
    pub seed: u64,
    pub level: CheckLevel,
    pub ipf: IpfOptions,
    pub max_steps: usize,
    /// Cap on the number of start pairs examined, `None` for no cap.
    pub budget: Option<u64>,
    /// Starts per work item.
    pub block_size: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            lmin: 3,
            lmax: 24,
            exhaustive_cutoff: 12,
            samples_per_len: 1000,
            seed: 0,
            level: CheckLevel::Light,
            ipf: IpfOptions::default(),
            max_steps: DEFAULT_MAX_STEPS,
            budget: None,
            block_size: 512,
        }
    }
}

impl SearchConfig {
    pub fn lengths(&self) -> Range<usize> {
        self.lmin..self.lmax + 1
    }

    fn validate(&self) -> Result<(), Ac23Error> {
        if self.lmin < 3 {
            return Err(Ac23Error::LengthTooSmall(self.lmin));
        }
        if self.lmax > MAX_RING_LEN {
            return Err(Ac23Error::LengthTooLarge(self.lmax));
        }
        if self.lmin > self.lmax {
            return Err(Ac23Error::EmptyRange);
        }
        Ok(())
    }

    pub fn is_exhaustive(&self, len: usize) -> bool {
        len <= self.exhaustive_cutoff
    }

    /// Number of starts examined at `len`.
    pub fn starts_at(&self, len: usize) -> u64 {
        if self.is_exhaustive(len) {
            1u64 << len
        } else {
            self.samples_per_len
        }
    }
}

/// How the starts at one length were chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Coverage {
    Exhaustive,
    Sampled,
}

/// A contiguous range of start indices at one length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WorkItem {
    pub len: usize,
    pub starts: Range<u64>,
}

impl WorkItem {
    fn key(&self) -> (usize, u64, u64) {
        (self.len, self.starts.start, self.starts.end)
    }
}

impl PartialOrd for WorkItem {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for WorkItem {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

/// Splits the envelope into ordered work items, honoring the budget.
pub fn work_items(config: &SearchConfig) -> Vec<WorkItem> {
    let mut items = Vec::new();
    let mut remaining = config.budget.unwrap_or(u64::MAX);
    for len in config.lengths() {
        let total = config.starts_at(len);
        let mut lo = 0;
        while lo < total && remaining > 0 {
            let hi = (lo + config.block_size.max(1)).min(total).min(lo + remaining);
            remaining -= hi - lo;
            items.push(WorkItem { len, starts: lo..hi });
            lo = hi;
        }
    }
    items
}

fn reverse_circle(bits: u64, len: usize) -> u64 {
    // node x moves to (len - x) mod len
    let mut out = bits & 1;
    for x in 1..len {
        if bits >> x & 1 == 1 {
            out |= 1 << (len - x);
        }
    }
    out
}

/// The B-set of the `index`-th start at `len`. Sampled starts depend only on
/// the seed, length and index; for masks with `n > m` they are the mirror
/// images of those used for `(m, n)`, so a mask and its reflection see
/// mirrored start sets.
pub fn start_bits(config: &SearchConfig, mask: &Mask, len: usize, index: u64) -> u64 {
    if config.is_exhaustive(len) {
        return index;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ (len as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    rng.set_word_pos(2 * index as u128);
    let full = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
    let bits = rng.next_u64() & full;
    if mask.n > mask.m {
        reverse_circle(bits, len)
    } else {
        bits
    }
}

/// A start pair on which the invariant failed.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MaskWitness {
    pub len: usize,
    pub start: Coloring,
    pub condition: Condition,
}

/// Result of one work item.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ItemOutcome {
    pub item: WorkItem,
    /// Start pairs fully checked.
    pub tested: u64,
    /// Pairs skipped because one run has `T ≤ 2`.
    pub degenerate: u64,
    /// First failure in start order; the item stops there.
    pub failure: Option<MaskWitness>,
}

/// Checks every start of `item`, stopping at the first failure.
pub fn evaluate_item(
    mask: &Mask,
    item: &WorkItem,
    config: &SearchConfig,
) -> Result<ItemOutcome, Ac23Error> {
    let len = item.len;
    let ring = mask.ring(len);
    let full = ring.full_mask();
    let mut outcome = ItemOutcome {
        item: item.clone(),
        tested: 0,
        degenerate: 0,
        failure: None,
    };
    let dyn_err = |start: &Coloring, source| Ac23Error::Dynamics {
        len,
        start: start.clone(),
        source,
    };
    for index in item.starts.clone() {
        let bits = start_bits(config, mask, len, index);
        let start = Coloring::from_ab_bits(len, bits);
        let comp = Coloring::from_ab_bits(len, !bits & full);
        let run = run_summary(&ring, &start, config.max_steps).map_err(|e| dyn_err(&start, e))?;
        let bar = run_summary(&ring, &comp, config.max_steps).map_err(|e| dyn_err(&comp, e))?;
        let report = match check_light(&run, &bar, config.ipf.cond1) {
            Ok(r) => r,
            Err(IpfError::DegenerateRun { .. }) => {
                outcome.degenerate += 1;
                continue;
            }
            Err(IpfError::LengthMismatch) => unreachable!("both runs share the ring"),
        };
        let report = if config.level == CheckLevel::Full && report.light_ok() {
            let run = run_to_mirror(&ring, &start, config.max_steps).map_err(|e| dyn_err(&start, e))?;
            let bar = run_to_mirror(&ring, &comp, config.max_steps).map_err(|e| dyn_err(&comp, e))?;
            check_ipf(&run, &bar, &config.ipf).expect("non-degenerate pair")
        } else {
            report
        };
        outcome.tested += 1;
        if let Some(condition) = report.first_failure(config.level) {
            outcome.failure = Some(MaskWitness { len, start, condition });
            break;
        }
    }
    Ok(outcome)
}

/// Starts examined at one length.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TestedBlock {
    pub len: usize,
    pub coverage: Coverage,
    pub tested: u64,
    pub degenerate_starts: u64,
    /// Offsets collide at this length; failures here do not decide the
    /// verdict.
    pub degenerate_len: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum MaskStatus {
    CorrectSoFar,
    Incorrect,
}

impl fmt::Display for MaskStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MaskStatus::CorrectSoFar => "CorrectSoFar",
            MaskStatus::Incorrect => "Incorrect",
        })
    }
}

/// Verdict for one mask. `CorrectSoFar` only speaks for `tested`.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MaskVerdict {
    pub mask: Mask,
    pub status: MaskStatus,
    pub tested: Vec<TestedBlock>,
    pub witness: Option<MaskWitness>,
    /// Failures at lengths where offsets collide.
    pub degenerate_failures: Vec<MaskWitness>,
    /// The budget cut the envelope short.
    pub budget_exhausted: bool,
}

/// Folds item outcomes into a verdict. The outcome set may arrive in any
/// order; items that follow the earliest headline failure, or the first
/// failure of a degenerate length within that length, are ignored, so the
/// result only depends on the items up to those failures.
pub fn aggregate(mask: &Mask, config: &SearchConfig, mut outcomes: Vec<ItemOutcome>) -> MaskVerdict {
    outcomes.sort_by(|a, b| a.item.cmp(&b.item));
    let mut blocks: BTreeMap<usize, TestedBlock> = BTreeMap::new();
    let mut witness = None;
    let mut degenerate_failures = Vec::new();
    let mut skip_len = None;
    for out in &outcomes {
        if witness.is_some() {
            break;
        }
        let len = out.item.len;
        if skip_len == Some(len) {
            continue;
        }
        let degenerate_len = mask.is_degenerate_at(len);
        let block = blocks.entry(len).or_insert_with(|| TestedBlock {
            len,
            coverage: if config.is_exhaustive(len) {
                Coverage::Exhaustive
            } else {
                Coverage::Sampled
            },
            tested: 0,
            degenerate_starts: 0,
            degenerate_len,
        });
        block.tested += out.tested;
        block.degenerate_starts += out.degenerate;
        if let Some(f) = &out.failure {
            if degenerate_len {
                degenerate_failures.push(f.clone());
                skip_len = Some(len);
            } else {
                witness = Some(f.clone());
            }
        }
    }
    let full: u64 = config.lengths().map(|l| config.starts_at(l)).sum();
    MaskVerdict {
        mask: *mask,
        status: if witness.is_some() {
            MaskStatus::Incorrect
        } else {
            MaskStatus::CorrectSoFar
        },
        tested: blocks.into_values().collect(),
        budget_exhausted: witness.is_none() && config.budget.is_some_and(|b| b < full),
        witness,
        degenerate_failures,
    }
}

fn check_weak(mask: &Mask, config: &SearchConfig) -> Result<(), Ac23Error> {
    for len in config.lengths() {
        if !mask_weak_computable(mask, len)? {
            return Err(Ac23Error::NotWeakComputable { mask: *mask, len });
        }
    }
    Ok(())
}

/// Runs the whole envelope on the calling thread. Within a degenerate
/// length only the first failure is kept and the search moves on.
pub fn classify_mask(mask: &Mask, config: &SearchConfig) -> Result<MaskVerdict, Ac23Error> {
    config.validate()?;
    check_weak(mask, config)?;
    let mut outcomes = Vec::new();
    let mut skip_len = None;
    for item in work_items(config) {
        if skip_len == Some(item.len) {
            continue;
        }
        let out = evaluate_item(mask, &item, config)?;
        let failed = out.failure.is_some();
        outcomes.push(out);
        if failed {
            if mask.is_degenerate_at(item.len) {
                skip_len = Some(item.len);
            } else {
                break;
            }
        }
    }
    Ok(aggregate(mask, config, outcomes))
}

/// Validates the config and the mask for a search.
pub fn prepare(mask: &Mask, config: &SearchConfig) -> Result<Vec<WorkItem>, Ac23Error> {
    config.validate()?;
    check_weak(mask, config)?;
    Ok(work_items(config))
}

/// One grid cell.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GridCell {
    pub verdict: MaskVerdict,
    pub point_count: usize,
    /// Row count of the mask's resolution table, when known.
    pub c_r: Option<usize>,
}

/// Verdicts over odd `n ≤ n_max`, odd `m ≤ m_max`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct VerdictGrid {
    pub cells: BTreeMap<(u64, u64), GridCell>,
}

impl VerdictGrid {
    pub fn get(&self, n: u64, m: u64) -> Option<&GridCell> {
        self.cells.get(&(n, m))
    }

    pub fn insert(&mut self, cell: GridCell) {
        let mask = cell.verdict.mask;
        self.cells.insert((mask.n, mask.m), cell);
    }

    /// Cells whose mirror cell exists and has a different status.
    pub fn asymmetric_cells(&self) -> Vec<(u64, u64)> {
        self.cells
            .iter()
            .filter(|(&(n, m), cell)| {
                self.cells
                    .get(&(m, n))
                    .is_some_and(|other| other.verdict.status != cell.verdict.status)
            })
            .map(|(&k, _)| k)
            .collect()
    }

    pub fn is_reflection_symmetric(&self) -> bool {
        self.asymmetric_cells().is_empty()
    }
}

/// Odd masks of a grid, row by row.
pub fn grid_masks(n_max: u64, m_max: u64) -> Vec<Mask> {
    let mut masks = Vec::new();
    for n in (1..=n_max).step_by(2) {
        for m in (1..=m_max).step_by(2) {
            masks.push(Mask::new(n, m));
        }
    }
    masks
}

pub fn verdict_grid(n_max: u64, m_max: u64, config: &SearchConfig) -> Result<VerdictGrid, Ac23Error> {
    let mut grid = VerdictGrid::default();
    for mask in grid_masks(n_max, m_max) {
        let verdict = classify_mask(&mask, config)?;
        grid.insert(GridCell {
            point_count: mask.point_count(),
            verdict,
            c_r: None,
        });
    }
    Ok(grid)
}
