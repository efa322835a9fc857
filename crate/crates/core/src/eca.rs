//! Direct simulation of single-seeded elementary cellular automata.
//!
//! Rows live in a [`LatticeWindow`]: a packed bit array plus the lattice
//! coordinate of its first cell, with every cell outside the window equal to
//! 0. Rules 90 and 150 step by word-parallel shift-XOR; any other rule goes
//! through its 8-entry lookup table one cell at a time.

use std::fmt;

use crate::{Error, Result};

const WORD: usize = u64::BITS as usize;

/// Wolfram rule number: bit `4l + 2c + r` is the new state of a cell whose
/// left neighbour, own state and right neighbour are `l`, `c`, `r`. "Left"
/// is the lower coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RuleNumber(u8);

impl RuleNumber {
    /// `(left + right) mod 2`.
    pub const RULE_90: RuleNumber = RuleNumber(90);
    /// `(left + center + right) mod 2`.
    pub const RULE_150: RuleNumber = RuleNumber(150);

    /// Rules with bit 0 set turn the empty background on and cannot be
    /// simulated on a finite window, so they are rejected.
    pub fn new(value: u8) -> Result<Self> {
        if value & 1 == 1 {
            return Err(Error::domain(format!(
                "rule {value} maps 000 to 1 and fills the infinite background"
            )));
        }
        Ok(RuleNumber(value))
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn output(self, left: bool, center: bool, right: bool) -> bool {
        let index = (usize::from(left) << 2) | (usize::from(center) << 1) | usize::from(right);
        (self.0 >> index) & 1 == 1
    }

    /// `Some(r)` when the rule is `(left + r·center + right) mod 2`.
    fn linear_center(self) -> Option<bool> {
        match self.0 {
            90 => Some(false),
            150 => Some(true),
            _ => None,
        }
    }
}

impl fmt::Display for RuleNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rule {}", self.0)
    }
}

/// One lattice row, trimmed so its first and last cells are 1 (or empty).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeWindow {
    words: Vec<u64>,
    len: usize,
    offset: i64,
}

impl LatticeWindow {
    /// A single 1 at coordinate 0.
    pub fn seed() -> Self {
        LatticeWindow {
            words: vec![1],
            len: 1,
            offset: 0,
        }
    }

    pub fn from_bits(offset: i64, bits: &[bool]) -> Self {
        let mut words = vec![0u64; bits.len().div_ceil(WORD)];
        for (i, _) in bits.iter().enumerate().filter(|(_, &b)| b) {
            words[i / WORD] |= 1 << (i % WORD);
        }
        Self::from_words(words, bits.len(), offset)
    }

    /// Takes packed cells (bit `i` of the array is coordinate `offset + i`)
    /// and trims zero margins.
    fn from_words(mut words: Vec<u64>, len: usize, offset: i64) -> Self {
        words.truncate(len.div_ceil(WORD));
        if !len.is_multiple_of(WORD) {
            if let Some(last) = words.last_mut() {
                *last &= (1u64 << (len % WORD)) - 1;
            }
        }
        let Some(first) = first_set(&words) else {
            return LatticeWindow {
                words: Vec::new(),
                len: 0,
                offset: 0,
            };
        };
        let last = last_set(&words).expect("non-empty row has a last set bit");
        let words = if first > 0 {
            shift_down(&words, first)
        } else {
            words
        };
        let len = last - first + 1;
        let mut window = LatticeWindow {
            words,
            len,
            offset: offset + first as i64,
        };
        window.words.truncate(len.div_ceil(WORD));
        window
    }

    /// Number of cells in the window.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Lattice coordinate of the first cell.
    pub fn offset(&self) -> i64 {
        self.offset
    }

    /// State of the cell at `coord`; 0 outside the window.
    pub fn get(&self, coord: i64) -> bool {
        let Ok(i) = usize::try_from(coord - self.offset) else {
            return false;
        };
        i < self.len && (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    /// Cells from left to right.
    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| (self.words[i / WORD] >> (i % WORD)) & 1 == 1)
    }

    /// Number of 1-cells.
    pub fn popcount(&self) -> u64 {
        self.words.iter().map(|w| u64::from(w.count_ones())).sum()
    }
}

fn first_set(words: &[u64]) -> Option<usize> {
    words
        .iter()
        .position(|&w| w != 0)
        .map(|i| i * WORD + words[i].trailing_zeros() as usize)
}

fn last_set(words: &[u64]) -> Option<usize> {
    words
        .iter()
        .rposition(|&w| w != 0)
        .map(|i| i * WORD + (WORD - 1 - words[i].leading_zeros() as usize))
}

/// Moves bit `i + by` to position `i`.
fn shift_down(words: &[u64], by: usize) -> Vec<u64> {
    let (skip, bits) = (by / WORD, by % WORD);
    let src = &words[skip..];
    (0..src.len())
        .map(|i| {
            let lo = src[i] >> bits;
            let hi = match (bits, src.get(i + 1)) {
                (0, _) | (_, None) => 0,
                (_, Some(&next)) => next << (WORD - bits),
            };
            lo | hi
        })
        .collect()
}

/// Word `i` of `src` shifted up by `by` bits (`by < 64`).
#[inline]
fn shifted_word(src: &[u64], i: usize, by: u32) -> u64 {
    let cur = src.get(i).copied().unwrap_or(0);
    if by == 0 {
        return cur;
    }
    let prev = if i == 0 {
        0
    } else {
        src.get(i - 1).copied().unwrap_or(0)
    };
    (cur << by) | (prev >> (u64::BITS - by))
}

/// Next row of a linear rule written into `dst`: with the new window one
/// cell wider on each side, new cell `j` is `old[j−2] ^ r·old[j−1] ^ old[j]`.
fn linear_step_into(src: &[u64], src_len: usize, center: bool, dst: &mut Vec<u64>) -> usize {
    let len = src_len + 2;
    let n = len.div_ceil(WORD);
    dst.clear();
    dst.extend((0..n).map(|i| {
        let mut w = shifted_word(src, i, 2) ^ shifted_word(src, i, 0);
        if center {
            w ^= shifted_word(src, i, 1);
        }
        w
    }));
    if !len.is_multiple_of(WORD) {
        dst[n - 1] &= (1u64 << (len % WORD)) - 1;
    }
    len
}

/// Advances one time step; the result is trimmed to its 1-cells.
pub fn step(rule: RuleNumber, row: &LatticeWindow) -> LatticeWindow {
    if row.is_empty() {
        return row.clone();
    }
    if let Some(center) = rule.linear_center() {
        let mut words = Vec::new();
        let len = linear_step_into(&row.words, row.len, center, &mut words);
        return LatticeWindow::from_words(words, len, row.offset - 1);
    }
    let offset = row.offset - 1;
    let bits: Vec<bool> = (0..row.len as i64 + 2)
        .map(|j| {
            let c = offset + j;
            rule.output(row.get(c - 1), row.get(c), row.get(c + 1))
        })
        .collect();
    LatticeWindow::from_bits(offset, &bits)
}

/// Rows `0..count` of the single-seeded evolution.
pub fn evolve(rule: RuleNumber, count: usize) -> Vec<LatticeWindow> {
    let mut rows = Vec::with_capacity(count);
    let mut row = LatticeWindow::seed();
    for _ in 0..count {
        let next = step(rule, &row);
        rows.push(std::mem::replace(&mut row, next));
    }
    rows
}

/// Activity (1-cell count) of rows `0..count` from a single seed, by full
/// simulation. Quadratic in `count`.
pub fn simulate_activity(rule: RuleNumber, count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return out;
    }
    if let Some(center) = rule.linear_center() {
        // The ends of a single-seeded 90/150 row are always 1, so the window
        // never needs trimming and two buffers suffice.
        let mut cur = vec![1u64];
        let mut len = 1;
        let mut next = Vec::new();
        out.push(1);
        for _ in 1..count {
            len = linear_step_into(&cur, len, center, &mut next);
            std::mem::swap(&mut cur, &mut next);
            out.push(cur.iter().map(|w| u64::from(w.count_ones())).sum());
        }
        return out;
    }
    let mut row = LatticeWindow::seed();
    for _ in 0..count {
        out.push(row.popcount());
        row = step(rule, &row);
    }
    out
}

/// Carry-less product of two `u64` words.
fn clmul(a: u64, b: u64) -> (u64, u64) {
    let (mut lo, mut hi) = (0u64, 0u64);
    let mut rest = b;
    while rest != 0 {
        let i = rest.trailing_zeros();
        lo ^= a << i;
        if i > 0 {
            hi ^= a >> (u64::BITS - i);
        }
        rest &= rest - 1;
    }
    (lo, hi)
}

/// Product of two GF(2) polynomials, coefficient `k` at bit `k`.
fn poly_mul(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate().filter(|(_, &x)| x != 0) {
        for (j, &y) in b.iter().enumerate() {
            let (lo, hi) = clmul(x, y);
            out[i + j] ^= lo;
            out[i + j + 1] ^= hi;
        }
    }
    while out.len() > 1 && out.last() == Some(&0) {
        out.pop();
    }
    out
}

/// Row `t` of Rule 150 read off `(1 + x + x²)^t` over GF(2): coefficient `k`
/// is the cell at coordinate `k − t`.
pub fn row150_polynomial(t: u64) -> LatticeWindow {
    let mut result = vec![1u64];
    let mut base = vec![0b111u64];
    let mut exp = t;
    while exp > 0 {
        if exp & 1 == 1 {
            result = poly_mul(&result, &base);
        }
        exp >>= 1;
        if exp > 0 {
            base = poly_mul(&base, &base);
        }
    }
    let len = result.len() * WORD;
    LatticeWindow::from_words(result, len, -(t as i64))
}

/// Rows `0..rows` of a single-seeded evolution on a `rows × (2·rows − 1)`
/// frame with the seed in the middle column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceTimeGrid {
    width: usize,
    cells: Vec<Vec<bool>>,
}

impl SpaceTimeGrid {
    pub fn new(rule: RuleNumber, rows: usize) -> Result<Self> {
        if rows == 0 {
            return Err(Error::domain("render needs at least one row"));
        }
        let half = rows as i64 - 1;
        let cells = evolve(rule, rows)
            .iter()
            .map(|row| (-half..=half).map(|c| row.get(c)).collect())
            .collect();
        Ok(SpaceTimeGrid {
            width: 2 * rows - 1,
            cells,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.cells.len()
    }

    pub fn rows(&self) -> &[Vec<bool>] {
        &self.cells
    }

    /// Plain PBM (`P1`): magic, `width height`, then one line of
    /// space-separated `0`/`1` per row.
    pub fn to_pbm(&self) -> String {
        let mut out = format!("P1\n{} {}\n", self.width, self.height());
        for row in &self.cells {
            let line: Vec<&str> = row.iter().map(|&b| if b { "1" } else { "0" }).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}
