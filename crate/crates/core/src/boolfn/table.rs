//! Bit-packed truth tables.
//!
//! A `TruthTable` stores all `2^n` values of `f:{±1}^n → {0,1}`, one bit per
//! point, indexed by the packed point encoding (bit `i` of the index set ⇔
//! `x_i = +1`). Unused high bits of the last word are always zero.
//!
//! The per-direction scans at the bottom pair each index with its neighbor in
//! direction `i` by word shifts (`i < 6`, inside a word) or by XOR-ing the word
//! index (`i ≥ 6`), so edge counts and monotonicity flags cost `O(n·2^n/64)`
//! word operations.

use crate::error::Error;
use crate::exec::{self, Exec};
use crate::rat::{rat_pow2, Rat};
use crate::Result;

use super::point::HypercubePoint;

/// Largest dimension a table may be materialized at (`2^30` bits = 128 MiB).
pub const MAX_TABLE_DIM: u32 = 30;

/// For direction `i < 6`: mask of bit positions whose index has bit `i` clear.
pub(crate) const HALF_MASK: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0f0f_0f0f_0f0f_0f0f,
    0x00ff_00ff_00ff_00ff,
    0x0000_ffff_0000_ffff,
    0x0000_0000_ffff_ffff,
];

/// Permute the 64 bits of `w` by XOR-ing each position with `dl < 64`.
#[inline]
pub(crate) fn xor_permute_word(mut w: u64, dl: u32) -> u64 {
    debug_assert!(dl < 64);
    for b in 0..6 {
        if dl >> b & 1 == 1 {
            let s = 1u32 << b;
            let m = HALF_MASK[b as usize];
            w = ((w & m) << s) | ((w >> s) & m);
        }
    }
    w
}

/// Truth table of a Boolean function on `{±1}^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    n: u32,
    words: Vec<u64>,
}

impl TruthTable {
    pub(crate) fn word_len(n: u32) -> usize {
        if n >= 6 {
            1usize << (n - 6)
        } else {
            1
        }
    }

    fn tail_mask(n: u32) -> u64 {
        if n >= 6 {
            !0u64
        } else {
            (1u64 << (1u32 << n)) - 1
        }
    }

    fn check_dim(n: u32) -> Result<()> {
        if n < 1 || n > MAX_TABLE_DIM {
            return Err(Error::SizeCap {
                what: "truth table",
                limit: MAX_TABLE_DIM,
                requested: n,
            });
        }
        Ok(())
    }

    /// All-zero or all-one table.
    pub fn constant(n: u32, value: bool) -> Self {
        Self::check_dim(n).expect("dimension in range");
        let fill = if value { Self::tail_mask(n) } else { 0 };
        let mut words = vec![fill; Self::word_len(n)];
        if value && n >= 6 {
            let last = words.len() - 1;
            words[last] = !0;
        }
        TruthTable { n, words }
    }

    /// Indicator of `x_i = +1`.
    pub fn dictator(n: u32, i: u32) -> Self {
        assert!(i < n);
        Self::from_fn(n, |bits| bits >> i & 1 == 1)
    }

    /// Indicator of `Π_i x_i = +1` (the parity of the number of `−1` entries).
    pub fn parity(n: u32) -> Self {
        Self::from_fn(n, move |bits| (bits.count_ones() + n) % 2 == 0)
    }

    /// Tabulate `f` over all `2^n` indices.
    pub fn from_fn(n: u32, f: impl Fn(u32) -> bool) -> Self {
        Self::check_dim(n).expect("dimension in range");
        let size = 1u64 << n;
        let mut words = vec![0u64; Self::word_len(n)];
        for (wi, w) in words.iter_mut().enumerate() {
            let base = (wi as u64) << 6;
            let hi = 64.min(size - base);
            for j in 0..hi {
                if f((base + j) as u32) {
                    *w |= 1 << j;
                }
            }
        }
        TruthTable { n, words }
    }

    /// Like [`TruthTable::from_fn`] but filled in parallel word chunks.
    pub fn from_fn_with(exec: Exec, n: u32, f: impl Fn(u32) -> bool + Sync) -> Self {
        Self::check_dim(n).expect("dimension in range");
        let size = 1u64 << n;
        let mut words = vec![0u64; Self::word_len(n)];
        exec::fill_chunks(exec, &mut words, 64, |ci, chunk| {
            for (k, w) in chunk.iter_mut().enumerate() {
                let base = ((ci * 64 + k) as u64) << 6;
                let hi = 64.min(size.saturating_sub(base));
                let mut acc = 0u64;
                for j in 0..hi {
                    if f((base + j) as u32) {
                        acc |= 1 << j;
                    }
                }
                *w = acc;
            }
        });
        TruthTable { n, words }
    }

    pub(crate) fn from_words(n: u32, words: Vec<u64>) -> Self {
        assert_eq!(words.len(), Self::word_len(n));
        let mut t = TruthTable { n, words };
        t.mask_tail();
        t
    }

    fn mask_tail(&mut self) {
        let m = Self::tail_mask(self.n);
        if self.n < 6 {
            self.words[0] &= m;
        }
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of points, `2^n`.
    #[inline]
    pub fn len(&self) -> u64 {
        1u64 << self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    /// Value at the packed index.
    #[inline]
    pub fn get(&self, bits: u32) -> bool {
        debug_assert!((bits as u64) < self.len());
        self.words[(bits >> 6) as usize] >> (bits & 63) & 1 == 1
    }

    /// Value at a point.
    #[inline]
    pub fn eval(&self, x: &HypercubePoint) -> bool {
        assert_eq!(
            x.n(),
            self.n,
            "point dimension {} does not match table dimension {}",
            x.n(),
            self.n
        );
        self.get(x.bits())
    }

    /// Number of inputs mapped to 1.
    pub fn ones(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// `E[f] = ones / 2^n`, exact.
    pub fn mean(&self) -> Rat {
        rat_pow2(self.ones(), self.n)
    }

    /// Pointwise `1 − f`.
    pub fn complement(&self) -> TruthTable {
        let m = Self::tail_mask(self.n);
        let words = self.words.iter().map(|w| !w & m).collect();
        TruthTable { n: self.n, words }
    }

    fn zip(&self, other: &TruthTable, op: impl Fn(u64, u64) -> u64) -> TruthTable {
        assert_eq!(self.n, other.n, "table dimension mismatch");
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| op(*a, *b))
            .collect();
        TruthTable { n: self.n, words }
    }

    /// Pointwise AND.
    pub fn and(&self, other: &TruthTable) -> TruthTable {
        self.zip(other, |a, b| a & b)
    }

    /// Pointwise OR.
    pub fn or(&self, other: &TruthTable) -> TruthTable {
        self.zip(other, |a, b| a | b)
    }

    /// Pointwise `self ∧ ¬other` (the increment set of a union step).
    pub fn and_not(&self, other: &TruthTable) -> TruthTable {
        self.zip(other, |a, b| a & !b)
    }

    /// In-place OR, for folding unions.
    pub fn or_assign(&mut self, other: &TruthTable) {
        assert_eq!(self.n, other.n, "table dimension mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= *b;
        }
    }

    /// In-place AND, for folding intersections.
    pub fn and_assign(&mut self, other: &TruthTable) {
        assert_eq!(self.n, other.n, "table dimension mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= *b;
        }
    }

    /// The table of `g(x) = f(x ⊕ mask)`, i.e. the input relabeling that flips
    /// the sign of every coordinate in `mask`.
    pub fn xor_permute(&self, mask: u32) -> TruthTable {
        assert_eq!(
            mask & !((1u64 << self.n) as u32).wrapping_sub(1) & 0x3fff_ffff,
            0,
            "mask has bits above n"
        );
        let dl = mask & 63;
        let dh = (mask >> 6) as usize;
        let words: Vec<u64> = (0..self.words.len())
            .map(|a| xor_permute_word(self.words[a ^ dh], dl))
            .collect();
        let mut t = TruthTable { n: self.n, words };
        t.mask_tail();
        t
    }

    /// Smallest coordinatewise-increasing function dominating `f`:
    /// `f*(x) = max_{y ≤ x} f(y)` where `y ≤ x` compares signs coordinatewise.
    pub fn monotone_upward_closure(&self) -> TruthTable {
        let mut t = self.clone();
        for i in 0..self.n.min(6) {
            let s = 1u32 << i;
            let m = HALF_MASK[i as usize];
            for w in t.words.iter_mut() {
                *w |= (*w & m) << s;
            }
        }
        for i in 6..self.n {
            let bit = 1usize << (i - 6);
            for lo in 0..t.words.len() {
                if lo & bit == 0 {
                    t.words[lo | bit] |= t.words[lo];
                }
            }
        }
        t
    }

    /// Boundary edges per direction: entry `i` counts unordered pairs
    /// `{x, x^i}` with `f(x) ≠ f(x^i)`.
    pub fn boundary_edge_counts(&self, exec: Exec) -> Vec<u64> {
        let mut counts = vec![0u64; self.n as usize];
        for i in 0..self.n.min(6) {
            let s = 1u32 << i;
            let m = HALF_MASK[i as usize];
            counts[i as usize] = exec::sum_indexed(exec, self.words.len(), |wi| {
                let w = self.words[wi];
                ((w ^ (w >> s)) & m).count_ones() as u64
            });
        }
        for i in 6..self.n {
            let bit = 1usize << (i - 6);
            counts[i as usize] = exec::sum_indexed(exec, self.words.len(), |wi| {
                if wi & bit == 0 {
                    (self.words[wi] ^ self.words[wi | bit]).count_ones() as u64
                } else {
                    0
                }
            });
        }
        counts
    }

    /// Total boundary-edge count `B = #{{x, x^i} : f(x) ≠ f(x^i)}`.
    pub fn boundary_edges(&self, exec: Exec) -> u64 {
        self.boundary_edge_counts(exec).iter().sum()
    }

    /// For direction `i`: does `f` strictly increase / strictly decrease
    /// anywhere when `x_i` moves from `−1` to `+1`?
    pub(crate) fn direction_flags(&self, i: u32) -> (bool, bool) {
        debug_assert!(i < self.n);
        let mut inc = false;
        let mut dec = false;
        if i < 6 {
            let s = 1u32 << i;
            let m = HALF_MASK[i as usize];
            for &w in &self.words {
                let lo = w & m;
                let hi = (w >> s) & m;
                inc |= hi & !lo != 0;
                dec |= lo & !hi != 0;
                if inc && dec {
                    break;
                }
            }
        } else {
            let bit = 1usize << (i - 6);
            for lo_i in 0..self.words.len() {
                if lo_i & bit != 0 {
                    continue;
                }
                let lo = self.words[lo_i];
                let hi = self.words[lo_i | bit];
                inc |= hi & !lo != 0;
                dec |= lo & !hi != 0;
                if inc && dec {
                    break;
                }
            }
        }
        (inc, dec)
    }

    /// `#{x : f(x) = 1 and x_i = +1}` for every `i` (used by the correlation
    /// statistic; one popcount pass per direction).
    pub(crate) fn ones_with_coordinate_plus(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.n as usize];
        for i in 0..self.n.min(6) {
            let m = !HALF_MASK[i as usize];
            counts[i as usize] = self.words.iter().map(|w| (w & m).count_ones() as u64).sum();
        }
        for i in 6..self.n {
            let bit = 1usize << (i - 6);
            counts[i as usize] = self
                .words
                .iter()
                .enumerate()
                .filter(|(wi, _)| wi & bit != 0)
                .map(|(_, w)| w.count_ones() as u64)
                .sum();
        }
        counts
    }
}
