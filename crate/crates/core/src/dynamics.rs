//! Synchronous stepping under the two recoloring rules, and trajectories
//! from the Start Point to the Mirror Point.
//!
//! A trajectory begins at an {A,B} start state. The first step sees no C
//! anywhere, so every node follows rule I and the first recorded state
//! `G_1` is the transliteration of the start. States `G_1..G_T` are then
//! recorded until `step(G_T) == transliterate(G_T)`; `T` is the period.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::color::{Color, Coloring};
use crate::graph::{MixedGraph, NodeId};

/// Default bound on the number of steps searched for a Mirror Point.
pub const DEFAULT_MAX_STEPS: usize = 1_000_000;

/// Rule I (no C among out-neighbors) or rule II (at least one).
#[inline]
pub const fn recolor(color: Color, sees_c: bool) -> Color {
    match (color, sees_c) {
        (Color::A, false) => Color::A,
        (Color::B, false) => Color::C,
        (Color::A, true) => Color::C,
        (Color::B, true) => Color::A,
        (Color::C, _) => Color::B,
    }
}

/// A finite substrate on which the recoloring rules run.
///
/// Implemented by [`MixedGraph`] over [`Coloring`] and by the bit-packed
/// [`crate::ring::RingAutomaton`].
pub trait Automaton {
    type State: Clone + Eq;

    fn node_count(&self) -> usize;
    fn step(&self, state: &Self::State) -> Self::State;
    fn transliterate(&self, state: &Self::State) -> Self::State;
    fn color(&self, state: &Self::State, v: NodeId) -> Color;
    fn encode(&self, coloring: &Coloring) -> Self::State;

    fn decode(&self, state: &Self::State) -> Coloring {
        Coloring::new(
            (0..self.node_count())
                .map(|v| self.color(state, v))
                .collect(),
        )
    }

    /// `transliterate ∘ step ∘ transliterate`, the unique predecessor.
    fn predecessor(&self, state: &Self::State) -> Self::State {
        self.transliterate(&self.step(&self.transliterate(state)))
    }

    /// Adds one to `counts[v][color]` for every node.
    fn tally(&self, state: &Self::State, counts: &mut [[u32; 3]]) {
        for (v, slot) in counts.iter_mut().enumerate() {
            slot[self.color(state, v).index()] += 1;
        }
    }
}

/// True when some out-neighbor of `v` is colored C.
pub fn p_condition(g: &MixedGraph, c: &Coloring, v: NodeId) -> bool {
    g.out_neighbors(v).iter().any(|&u| c.get(u) == Color::C)
}

/// One synchronous step; all nodes read the old state.
pub fn step(g: &MixedGraph, c: &Coloring) -> Coloring {
    Coloring::new(
        (0..g.node_count())
            .map(|v| recolor(c.get(v), p_condition(g, c, v)))
            .collect(),
    )
}

pub fn predecessor(g: &MixedGraph, c: &Coloring) -> Coloring {
    step(g, &c.transliterate()).transliterate()
}

impl Automaton for MixedGraph {
    type State = Coloring;

    fn node_count(&self) -> usize {
        MixedGraph::node_count(self)
    }

    fn step(&self, state: &Coloring) -> Coloring {
        step(self, state)
    }

    fn transliterate(&self, state: &Coloring) -> Coloring {
        state.transliterate()
    }

    fn color(&self, state: &Coloring, v: NodeId) -> Color {
        state.get(v)
    }

    fn encode(&self, coloring: &Coloring) -> Coloring {
        coloring.clone()
    }

    fn decode(&self, state: &Coloring) -> Coloring {
        state.clone()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DynamicsError {
    /// The start state contains C.
    NotAbStart,
    LengthMismatch { expected: usize, found: usize },
    MaxStepsExceeded { max_steps: usize },
    /// A state repeated before the orbit returned to `G_1`.
    NotACycle { at: usize },
}

impl fmt::Display for DynamicsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            DynamicsError::NotAbStart => {
                write!(f, "start coloring must use only colors A and B")
            }
            DynamicsError::LengthMismatch { expected, found } => write!(
                f,
                "coloring has {found} nodes but the graph has {expected}"
            ),
            DynamicsError::MaxStepsExceeded { max_steps } => write!(
                f,
                "no Mirror Point within {max_steps} steps; raise the step bound"
            ),
            DynamicsError::NotACycle { at } => {
                write!(f, "orbit entered a repeated state at step {at} before closing")
            }
        }
    }
}

impl core::error::Error for DynamicsError {}

/// `N_A − N_BC` of a node over one run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct Lambda(pub i64);

impl core::ops::Neg for Lambda {
    type Output = Lambda;
    fn neg(self) -> Lambda {
        Lambda(-self.0)
    }
}

impl fmt::Display for Lambda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Per-node color occurrence counts over `G_1..G_T`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ColorCounts {
    pub a: u32,
    pub b: u32,
    pub c: u32,
}

impl ColorCounts {
    fn from_tally(t: [u32; 3]) -> Self {
        ColorCounts { a: t[0], b: t[1], c: t[2] }
    }

    /// `N_A − N_C`; equals `N_A − N_BC` whenever B and C counts agree.
    pub fn lambda(&self) -> Lambda {
        Lambda(self.a as i64 - self.c as i64)
    }
}

/// Everything about a run that the light-level checks need, without the
/// state sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunSummary {
    pub start_ab: Coloring,
    /// `T`, the number of recorded states `G_1..G_T`.
    pub period: usize,
    /// `G_T`.
    pub last_state: Coloring,
    /// `G_{T+1} = transliterate(G_T)`.
    pub mirror_state: Coloring,
    pub counts: Vec<ColorCounts>,
}

impl RunSummary {
    /// `T ≤ 2`: the state at the Mirror Point is its own transliteration.
    pub fn is_degenerate(&self) -> bool {
        self.period <= 2
    }

    pub fn lambda(&self, v: NodeId) -> Lambda {
        self.counts[v].lambda()
    }

    pub fn lambdas(&self) -> Vec<Lambda> {
        self.counts.iter().map(ColorCounts::lambda).collect()
    }

    /// The common λ when every node has the same value.
    pub fn uniform_lambda(&self) -> Option<Lambda> {
        let first = self.lambda(0);
        self.counts
            .iter()
            .all(|c| c.lambda() == first)
            .then_some(first)
    }

    /// Per-node `N_B == N_C`.
    pub fn b_c_balanced(&self) -> bool {
        self.counts.iter().all(|c| c.b == c.c)
    }
}

/// A full trajectory from the Start Point to the Mirror Point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunRecord {
    pub summary: RunSummary,
    /// `G_1..G_T`; `states[t - 1]` is `G_t`.
    pub states: Vec<Coloring>,
}

impl RunRecord {
    pub fn period(&self) -> usize {
        self.summary.period
    }

    pub fn is_degenerate(&self) -> bool {
        self.summary.is_degenerate()
    }

    pub fn node_count(&self) -> usize {
        self.summary.start_ab.len()
    }

    /// `G_t` for `1 ≤ t ≤ T`.
    pub fn state(&self, t: usize) -> &Coloring {
        &self.states[t - 1]
    }

    /// The color sequence `v(1), ..., v(T)`.
    pub fn history(&self, v: NodeId) -> Vec<Color> {
        self.states.iter().map(|s| s.get(v)).collect()
    }

    pub fn lambda(&self, v: NodeId) -> Lambda {
        self.summary.lambda(v)
    }
}

fn validate_start<A: Automaton>(aut: &A, start_ab: &Coloring) -> Result<(), DynamicsError> {
    if start_ab.len() != aut.node_count() {
        return Err(DynamicsError::LengthMismatch {
            expected: aut.node_count(),
            found: start_ab.len(),
        });
    }
    if !start_ab.is_ab() {
        return Err(DynamicsError::NotAbStart);
    }
    Ok(())
}

/// Walks from `G_1` to the Mirror Point, calling `visit` on every `G_t`.
/// Returns `(T, G_T, G_{T+1})`.
fn walk<A: Automaton>(
    aut: &A,
    start_ab: &Coloring,
    max_steps: usize,
    mut visit: impl FnMut(&A::State),
) -> Result<(usize, A::State, A::State), DynamicsError> {
    validate_start(aut, start_ab)?;
    let mut current = aut.step(&aut.encode(start_ab));
    for t in 1..=max_steps {
        visit(&current);
        let next = aut.step(&current);
        if next == aut.transliterate(&current) {
            return Ok((t, current, next));
        }
        current = next;
    }
    Err(DynamicsError::MaxStepsExceeded { max_steps })
}

/// Runs to the Mirror Point keeping only counts and the boundary states.
pub fn run_summary<A: Automaton>(
    aut: &A,
    start_ab: &Coloring,
    max_steps: usize,
) -> Result<RunSummary, DynamicsError> {
    let mut tally = vec![[0u32; 3]; aut.node_count()];
    let (period, last, mirror) = walk(aut, start_ab, max_steps, |s| aut.tally(s, &mut tally))?;
    Ok(RunSummary {
        start_ab: start_ab.clone(),
        period,
        last_state: aut.decode(&last),
        mirror_state: aut.decode(&mirror),
        counts: tally.into_iter().map(ColorCounts::from_tally).collect(),
    })
}

/// Runs to the Mirror Point recording every state.
pub fn run_to_mirror<A: Automaton>(
    aut: &A,
    start_ab: &Coloring,
    max_steps: usize,
) -> Result<RunRecord, DynamicsError> {
    let mut tally = vec![[0u32; 3]; aut.node_count()];
    let mut states = Vec::new();
    let (period, last, mirror) = walk(aut, start_ab, max_steps, |s| {
        aut.tally(s, &mut tally);
        states.push(aut.decode(s));
    })?;
    Ok(RunRecord {
        summary: RunSummary {
            start_ab: start_ab.clone(),
            period,
            last_state: aut.decode(&last),
            mirror_state: aut.decode(&mirror),
            counts: tally.into_iter().map(ColorCounts::from_tally).collect(),
        },
        states,
    })
}

/// The whole orbit of `G_1`, starting at `G_1` and ending just before it
/// recurs. Fails if any other state repeats first.
pub fn full_cycle<A: Automaton>(
    aut: &A,
    start_ab: &Coloring,
    max_steps: usize,
) -> Result<Vec<Coloring>, DynamicsError> {
    validate_start(aut, start_ab)?;
    let first = aut.step(&aut.encode(start_ab));
    let mut seen = BTreeSet::new();
    let mut cycle = Vec::new();
    let mut current = first.clone();
    for t in 1..=max_steps {
        let decoded = aut.decode(&current);
        if !seen.insert(decoded.clone()) {
            return Err(DynamicsError::NotACycle { at: t });
        }
        cycle.push(decoded);
        current = aut.step(&current);
        if current == first {
            return Ok(cycle);
        }
    }
    Err(DynamicsError::MaxStepsExceeded { max_steps })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> Coloring {
        s.parse().unwrap()
    }

    #[test]
    fn p_condition_examples() {
        let ring = MixedGraph::ring(3).unwrap();
        assert!(p_condition(&ring, &c("ACA"), 0));
        assert!(!p_condition(&ring, &c("ACA"), 1));
        let lone = MixedGraph::new(2, [(0, 1)], []).unwrap();
        assert!(!p_condition(&lone, &c("CC"), 1));
    }

    #[test]
    fn step_examples() {
        let ring = MixedGraph::ring(3).unwrap();
        assert_eq!(step(&ring, &c("ACA")), c("CBC"));
        assert_eq!(step(&ring, &c("CAA")), c("BCC"));
        assert_eq!(step(&ring, &c("AAA")), c("AAA"));
        assert_eq!(predecessor(&ring, &c("CBC")), c("ACA"));
        assert_eq!(predecessor(&ring, &c("AAA")), c("AAA"));
    }

    #[test]
    fn fixture_run() {
        let ring = MixedGraph::ring(3).unwrap();
        let run = run_to_mirror(&ring, &c("ABA"), 100).unwrap();
        assert_eq!(run.period(), 3);
        assert_eq!(run.states, [c("ACA"), c("CBC"), c("BAB")]);
        assert_eq!(run.summary.mirror_state, c("CAC"));
        assert_eq!(run.summary.lambdas(), [Lambda(0); 3]);
        assert_eq!(run.history(0), [Color::A, Color::C, Color::B]);

        let cycle = full_cycle(&ring, &c("ABA"), 100).unwrap();
        assert_eq!(
            cycle,
            [c("ACA"), c("CBC"), c("BAB"), c("CAC"), c("BCB"), c("ABA")]
        );
    }

    #[test]
    fn all_a_is_a_fixed_point() {
        let ring = MixedGraph::ring(4).unwrap();
        let run = run_to_mirror(&ring, &c("AAAA"), 10).unwrap();
        assert_eq!(run.period(), 1);
        assert!(run.is_degenerate());
        assert_eq!(run.summary.mirror_state, c("AAAA"));
        assert_eq!(full_cycle(&ring, &c("AAAA"), 10).unwrap().len(), 1);
    }

    #[test]
    fn start_errors() {
        let ring = MixedGraph::ring(3).unwrap();
        assert_eq!(
            run_to_mirror(&ring, &c("ACA"), 10).unwrap_err(),
            DynamicsError::NotAbStart
        );
        assert_eq!(
            run_summary(&ring, &c("AB"), 10).unwrap_err(),
            DynamicsError::LengthMismatch { expected: 3, found: 2 }
        );
        assert_eq!(
            run_to_mirror(&ring, &c("ABA"), 2).unwrap_err(),
            DynamicsError::MaxStepsExceeded { max_steps: 2 }
        );
    }

    #[test]
    fn summary_agrees_with_record() {
        let g = MixedGraph::new(5, [(0, 2), (3, 1)], [(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        for bits in 0..32u64 {
            let start = Coloring::from_ab_bits(5, bits);
            let rec = run_to_mirror(&g, &start, 10_000).unwrap();
            let sum = run_summary(&g, &start, 10_000).unwrap();
            assert_eq!(rec.summary, sum);
        }
    }
}
