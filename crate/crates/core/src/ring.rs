//! Bit-packed circulant automaton: `len` nodes on a circle, each node `x`
//! reading the nodes `x + s (mod len)` for a fixed set of shifts `s`.
//!
//! A state is two bit planes (`b`, `c`), node `x` at bit `x`; A is the
//! absence of both. One step costs one rotate-and-or per shift.

use alloc::vec::Vec;

use crate::color::{Color, Coloring};
use crate::dynamics::Automaton;
use crate::graph::NodeId;

pub const MAX_RING_LEN: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct RingState {
    pub b: u64,
    pub c: u64,
}

impl RingState {
    /// The {A,B} state whose B nodes are the set bits of `bits`.
    pub const fn ab(bits: u64) -> Self {
        RingState { b: bits, c: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingAutomaton {
    len: usize,
    full: u64,
    shifts: Vec<u32>,
}

impl RingAutomaton {
    /// Shifts are reduced mod `len`; zero shifts are dropped and duplicates
    /// merged.
    ///
    /// # Panics
    /// If `len` is 0 or exceeds [`MAX_RING_LEN`].
    pub fn new(len: usize, shifts: impl IntoIterator<Item = i64>) -> Self {
        assert!(
            (1..=MAX_RING_LEN).contains(&len),
            "ring length {len} outside 1..={MAX_RING_LEN}"
        );
        let mut reduced: Vec<u32> = shifts
            .into_iter()
            .map(|s| s.rem_euclid(len as i64) as u32)
            .filter(|&s| s != 0)
            .collect();
        reduced.sort_unstable();
        reduced.dedup();
        let full = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
        RingAutomaton { len, full, shifts: reduced }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Residues `s` such that `x` reads `x + s`, ascending.
    pub fn shifts(&self) -> &[u32] {
        &self.shifts
    }

    pub fn full_mask(&self) -> u64 {
        self.full
    }

    /// Bit `x` of the result is bit `x + s (mod len)` of `v`.
    #[inline]
    fn rotr(&self, v: u64, s: u32) -> u64 {
        if s == 0 {
            v
        } else {
            ((v >> s) | (v << (self.len as u32 - s))) & self.full
        }
    }

    /// Nodes with at least one C among their out-neighbors.
    #[inline]
    pub fn sees_c(&self, c: u64) -> u64 {
        self.shifts.iter().fold(0, |acc, &s| acc | self.rotr(c, s))
    }

    #[inline]
    pub fn step_state(&self, s: RingState) -> RingState {
        let p = self.sees_c(s.c);
        let a = self.full & !(s.b | s.c);
        RingState {
            b: s.c,
            c: (a & p) | (s.b & !p),
        }
    }
}

impl Automaton for RingAutomaton {
    type State = RingState;

    fn node_count(&self) -> usize {
        self.len
    }

    #[inline]
    fn step(&self, state: &RingState) -> RingState {
        self.step_state(*state)
    }

    #[inline]
    fn transliterate(&self, state: &RingState) -> RingState {
        RingState { b: state.c, c: state.b }
    }

    fn color(&self, state: &RingState, v: NodeId) -> Color {
        if state.b >> v & 1 == 1 {
            Color::B
        } else if state.c >> v & 1 == 1 {
            Color::C
        } else {
            Color::A
        }
    }

    fn encode(&self, coloring: &Coloring) -> RingState {
        let mut s = RingState::default();
        for (v, col) in coloring.iter().enumerate() {
            match col {
                Color::A => {}
                Color::B => s.b |= 1 << v,
                Color::C => s.c |= 1 << v,
            }
        }
        s
    }

    fn tally(&self, state: &RingState, counts: &mut [[u32; 3]]) {
        let a = self.full & !(state.b | state.c);
        for (plane, idx) in [(a, 0), (state.b, 1), (state.c, 2)] {
            let mut bits = plane;
            while bits != 0 {
                let v = bits.trailing_zeros() as usize;
                counts[v][idx] += 1;
                bits &= bits - 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{run_summary, step};
    use crate::graph::MixedGraph;

    #[test]
    fn three_ring_matches_the_hand_trace() {
        let ring = RingAutomaton::new(3, [-1, 1]);
        let s = ring.encode(&"ACA".parse().unwrap());
        let next = ring.step(&s);
        assert_eq!(ring.decode(&next).to_string(), "CBC");
    }

    #[test]
    fn shifts_are_reduced_and_deduplicated() {
        let ring = RingAutomaton::new(4, [-1, 3, 4, 1, 5]);
        assert_eq!(ring.shifts(), &[1, 3]);
    }

    #[test]
    fn agrees_with_graph_stepping_on_all_colorings() {
        // x -> x+1, x -> x-1 (undirected), plus x -> x+2 (directed)
        let len = 6;
        let ring = RingAutomaton::new(len, [-1, 1, 2]);
        let und = (0..len).map(|x| (x, (x + 1) % len));
        let dir = (0..len).map(|x| (x, (x + 2) % len));
        let g = MixedGraph::new(len, dir, und).unwrap();
        for i in 0..3u64.pow(len as u32) {
            let col = Coloring::from_index(len, i);
            let by_ring = ring.decode(&ring.step(&ring.encode(&col)));
            assert_eq!(by_ring, step(&g, &col));
        }
        for bits in 0..64 {
            let start = Coloring::from_ab_bits(len, bits);
            assert_eq!(
                run_summary(&ring, &start, 100_000).unwrap(),
                run_summary(&g, &start, 100_000).unwrap()
            );
        }
    }

    #[test]
    fn length_64_uses_the_whole_word() {
        let ring = RingAutomaton::new(64, [-1, 1]);
        assert_eq!(ring.full_mask(), u64::MAX);
        let s = RingState { b: 0, c: 1 };
        assert_eq!(ring.sees_c(s.c), (1 << 1) | (1 << 63));
    }
}
