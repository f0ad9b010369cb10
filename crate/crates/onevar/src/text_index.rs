//! Suffix-array index over `t · reverse(t)` answering `lcp`, `rlcp` and
//! forward-vs-reversed match-length queries in O(1), plus per-segment
//! occurrence bit arrays.
//!
//! All public positions are 1-based to match the rest of the engine.

use crate::bitvec::BitArray;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IndexError {
    #[error("text must be non-empty")]
    EmptyText,
}

// ---------------------------------------------------------------------------
// SA-IS over integer alphabets
// ---------------------------------------------------------------------------

/// Suffix array by induced sorting; `s` values are arbitrary u32.
pub fn suffix_array(s: &[u32]) -> Vec<usize> {
    if s.is_empty() {
        return Vec::new();
    }
    // remap to a dense alphabet [1..k], append sentinel 0
    let mut vals: Vec<u32> = s.to_vec();
    vals.sort_unstable();
    vals.dedup();
    let mut t: Vec<usize> = s
        .iter()
        .map(|v| vals.binary_search(v).unwrap() + 1)
        .collect();
    t.push(0);
    let sa = sais(&t, vals.len() + 1);
    // drop the sentinel suffix
    sa.into_iter().filter(|&p| p < s.len()).collect()
}

fn sais(s: &[usize], k: usize) -> Vec<usize> {
    let n = s.len();
    if n == 1 {
        return vec![0];
    }
    let mut is_s = vec![false; n];
    is_s[n - 1] = true;
    for i in (0..n - 1).rev() {
        is_s[i] = s[i] < s[i + 1] || (s[i] == s[i + 1] && is_s[i + 1]);
    }
    let is_lms = |i: usize| i > 0 && is_s[i] && !is_s[i - 1];

    let mut bkt = vec![0usize; k + 1];
    for &c in s {
        bkt[c + 1] += 1;
    }
    for i in 0..k {
        bkt[i + 1] += bkt[i];
    }

    let induce = |lms_sorted: &[usize]| -> Vec<usize> {
        let mut sa = vec![usize::MAX; n];
        let mut tail: Vec<usize> = (0..k).map(|c| bkt[c + 1]).collect();
        for &p in lms_sorted.iter().rev() {
            let c = s[p];
            tail[c] -= 1;
            sa[tail[c]] = p;
        }
        let mut head: Vec<usize> = (0..k).map(|c| bkt[c]).collect();
        for i in 0..n {
            let p = sa[i];
            if p != usize::MAX && p > 0 && !is_s[p - 1] {
                let c = s[p - 1];
                sa[head[c]] = p - 1;
                head[c] += 1;
            }
        }
        let mut tail: Vec<usize> = (0..k).map(|c| bkt[c + 1]).collect();
        for i in (0..n).rev() {
            let p = sa[i];
            if p != usize::MAX && p > 0 && is_s[p - 1] {
                let c = s[p - 1];
                tail[c] -= 1;
                sa[tail[c]] = p - 1;
            }
        }
        sa
    };

    let lms_pos: Vec<usize> = (1..n).filter(|&i| is_lms(i)).collect();
    let sa = induce(&lms_pos);

    // name LMS substrings in sorted order
    let sorted_lms: Vec<usize> = sa.iter().copied().filter(|&p| p != usize::MAX && is_lms(p)).collect();
    let mut name = vec![usize::MAX; n];
    let mut cur = 0usize;
    if !sorted_lms.is_empty() {
        name[sorted_lms[0]] = 0;
    }
    let lms_end = |i: usize| -> usize {
        // exclusive end of the LMS substring starting at i (next LMS, inclusive)
        let mut j = i + 1;
        while j < n && !is_lms(j) {
            j += 1;
        }
        j.min(n - 1)
    };
    for w in sorted_lms.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (ea, eb) = (lms_end(a), lms_end(b));
        let equal = ea - a == eb - b && (0..=ea - a).all(|d| s[a + d] == s[b + d] && is_s[a + d] == is_s[b + d]);
        if !equal {
            cur += 1;
        }
        name[b] = cur;
    }
    let n1 = lms_pos.len();
    let order: Vec<usize> = if n1 > 0 && cur + 1 < n1 {
        let s1: Vec<usize> = lms_pos.iter().map(|&p| name[p]).collect();
        let sa1 = sais(&s1, cur + 1);
        sa1.into_iter().map(|i| lms_pos[i]).collect()
    } else {
        sorted_lms
    };
    induce(&order)
}

/// Kasai's algorithm; `lcp[i]` = lcp of suffixes `sa[i-1]` and `sa[i]`.
fn lcp_array(s: &[u32], sa: &[usize], rank: &[usize]) -> Vec<usize> {
    let n = s.len();
    let mut lcp = vec![0usize; n];
    let mut k = 0usize;
    for i in 0..n {
        if rank[i] > 0 {
            let j = sa[rank[i] - 1];
            while i + k < n && j + k < n && s[i + k] == s[j + k] {
                k += 1;
            }
            lcp[rank[i]] = k;
            k = k.saturating_sub(1);
        } else {
            k = 0;
        }
    }
    lcp
}

// ---------------------------------------------------------------------------
// Sparse-table RMQ
// ---------------------------------------------------------------------------

/// Sparse table over block minima (block = 8) with linear in-block tails;
/// O(n/8 log n) space, O(1)-ish queries.
struct Rmq {
    vals: Vec<u32>,
    nb: usize,
    table: Vec<u32>,
}

const RMQ_BLOCK: usize = 8;

impl Rmq {
    fn new(a: &[usize]) -> Rmq {
        let n = a.len();
        let vals: Vec<u32> = a.iter().map(|&v| v as u32).collect();
        let nb = (n + RMQ_BLOCK - 1) / RMQ_BLOCK;
        if nb == 0 {
            return Rmq { vals, nb, table: Vec::new() };
        }
        let logn = nb.ilog2() as usize;
        let mut table = vec![u32::MAX; nb * (logn + 1)];
        for b in 0..nb {
            let lo = b * RMQ_BLOCK;
            let hi = (lo + RMQ_BLOCK).min(n);
            table[b] = vals[lo..hi].iter().copied().min().unwrap();
        }
        for k in 1..=logn {
            let len = 1usize << (k - 1);
            for i in 0..=(nb - (1 << k)) {
                table[k * nb + i] = table[(k - 1) * nb + i].min(table[(k - 1) * nb + i + len]);
            }
        }
        Rmq { vals, nb, table }
    }

    /// min over [l, r) — 0-based, right exclusive, r > l.
    fn query(&self, l: usize, r: usize) -> usize {
        let bl = l / RMQ_BLOCK;
        let br = (r - 1) / RMQ_BLOCK;
        if bl == br {
            return self.vals[l..r].iter().copied().min().unwrap() as usize;
        }
        let mut m = u32::MAX;
        let head_end = (bl + 1) * RMQ_BLOCK;
        m = m.min(self.vals[l..head_end].iter().copied().min().unwrap());
        m = m.min(self.vals[br * RMQ_BLOCK..r].iter().copied().min().unwrap());
        if bl + 1 < br {
            let (lo, hi) = (bl + 1, br);
            let k = (hi - lo).ilog2() as usize;
            m = m
                .min(self.table[k * self.nb + lo])
                .min(self.table[k * self.nb + hi - (1 << k)]);
        }
        m as usize
    }
}

// ---------------------------------------------------------------------------
// Generic lcp index over an integer string
// ---------------------------------------------------------------------------

/// Suffix array + LCP + RMQ over an integer string, answering 0-based
/// suffix-lcp queries in O(1).
pub struct IntIndex {
    len: usize,
    sa: Vec<u32>,
    rank: Vec<usize>,
    rmq: Rmq,
}

impl IntIndex {
    pub fn build(s: &[u32]) -> IntIndex {
        let sa = suffix_array(s);
        let mut rank = vec![0usize; s.len()];
        for (i, &p) in sa.iter().enumerate() {
            rank[p] = i;
        }
        let lcp = lcp_array(s, &sa, &rank);
        let sa = sa.into_iter().map(|p| p as u32).collect();
        IntIndex { len: s.len(), sa, rank, rmq: Rmq::new(&lcp) }
    }

    /// Suffix array (0-based positions in rank order).
    pub fn sa(&self) -> &[u32] {
        &self.sa
    }

    /// lcp of the suffixes starting at 0-based positions `a` and `b`.
    pub fn lcp0(&self, a: usize, b: usize) -> usize {
        assert!(a < self.len && b < self.len);
        if a == b {
            return self.len - a;
        }
        let (ra, rb) = (self.rank[a].min(self.rank[b]), self.rank[a].max(self.rank[b]));
        self.rmq.query(ra + 1, rb + 1)
    }
}

// ---------------------------------------------------------------------------
// TextIndex over t · reverse(t)
// ---------------------------------------------------------------------------

/// Occurrence bits of one string over 1-based text positions.
#[derive(Debug, Clone)]
pub struct OccBits {
    /// 1-based position of bit 0.
    pub base: usize,
    pub bits: BitArray,
}

impl OccBits {
    #[inline]
    pub fn get(&self, pos: usize) -> bool {
        pos >= self.base && self.bits.get(pos - self.base)
    }

    /// Bits for positions `lo..=hi` (out-of-range positions read as 0).
    pub fn window(&self, lo: isize, hi: isize) -> BitArray {
        let width = (hi - lo + 1).max(0) as usize;
        self.bits.window(lo - self.base as isize, width)
    }

    pub fn iter_positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter_ones().map(move |i| self.base + i)
    }
}

pub struct TextIndex {
    text: Vec<u8>,
    n: usize,
    idx: IntIndex,
}

impl TextIndex {
    /// Index over the concatenation t·reverse(t) (0-based positions).
    pub fn cat_index(&self) -> &IntIndex {
        &self.idx
    }
}

pub fn build_index(t: &[u8]) -> Result<TextIndex, IndexError> {
    if t.is_empty() {
        return Err(IndexError::EmptyText);
    }
    let mut cat: Vec<u32> = Vec::with_capacity(2 * t.len());
    cat.extend(t.iter().map(|&b| b as u32));
    cat.extend(t.iter().rev().map(|&b| b as u32));
    Ok(TextIndex { text: t.to_vec(), n: t.len(), idx: IntIndex::build(&cat) })
}

impl TextIndex {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn text(&self) -> &[u8] {
        &self.text
    }

    /// 1-based byte access.
    #[inline]
    pub fn byte(&self, i: usize) -> u8 {
        self.text[i - 1]
    }

    #[inline]
    fn check(&self, i: usize) {
        assert!(i >= 1 && i <= self.n, "position {} out of range 1..={}", i, self.n);
    }

    /// max l with t[i..i+l-1] = t[j..j+l-1].
    pub fn lcp(&self, i: usize, j: usize) -> usize {
        self.check(i);
        self.check(j);
        let raw = self.idx.lcp0(i - 1, j - 1);
        raw.min(self.n - i + 1).min(self.n - j + 1)
    }

    /// max l with t[i-l+1..i] = t[j-l+1..j].
    pub fn rlcp(&self, i: usize, j: usize) -> usize {
        self.check(i);
        self.check(j);
        let raw = self.idx.lcp0(2 * self.n - i, 2 * self.n - j);
        raw.min(i).min(j)
    }

    /// max l with t[i..i+l-1] = reverse(t[j-l+1..j]).
    pub fn rev_match_len(&self, i: usize, j: usize) -> usize {
        self.check(i);
        self.check(j);
        let raw = self.idx.lcp0(i - 1, 2 * self.n - j);
        raw.min(self.n - i + 1).min(j)
    }

    /// t[i..j] equals t[i2..j2] (equal lengths assumed by caller).
    #[inline]
    pub fn substr_eq(&self, i: usize, i2: usize, len: usize) -> bool {
        len == 0 || self.lcp(i, i2) >= len
    }

    /// t[i..i+len-1] equals reverse(t[j-len+1..j]).
    #[inline]
    pub fn substr_eq_rev(&self, i: usize, j: usize, len: usize) -> bool {
        len == 0 || self.rev_match_len(i, j) >= len
    }

    /// Occurrence bits of `s`; the empty string occurs at every position in
    /// [1..n+1] (n+1 included so trailing empty segments can sit past the end).
    pub fn occurrences(&self, s: &[u8]) -> OccBits {
        let n = self.n;
        if s.is_empty() {
            return OccBits { base: 1, bits: BitArray::ones(n + 1) };
        }
        let mut bits = BitArray::new(n + 1);
        if s.len() <= n {
            // KMP
            let mut fail = vec![0usize; s.len()];
            let mut k = 0;
            for i in 1..s.len() {
                while k > 0 && s[i] != s[k] {
                    k = fail[k - 1];
                }
                if s[i] == s[k] {
                    k += 1;
                }
                fail[i] = k;
            }
            let mut k = 0;
            for (i, &b) in self.text.iter().enumerate() {
                while k > 0 && b != s[k] {
                    k = fail[k - 1];
                }
                if b == s[k] {
                    k += 1;
                }
                if k == s.len() {
                    bits.set(i + 1 - s.len(), true);
                    k = fail[k - 1];
                }
            }
        }
        OccBits { base: 1, bits }
    }
}
