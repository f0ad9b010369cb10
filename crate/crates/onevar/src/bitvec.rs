//! Packed bit arrays with the word-parallel kernels used by the matcher.
//!
//! Bits are indexed from 0; bits beyond `len` are kept zero so that whole-word
//! operations never leak state between arrays.

use thiserror::Error;

const WORD: usize = 64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BitError {
    #[error("window widths disagree: {0} vs {1}")]
    WidthMismatch(usize, usize),
    #[error("range {lo}..{hi} out of bounds for length {len}")]
    RangeOutOfBounds { lo: usize, hi: usize, len: usize },
    #[error("empty input list")]
    EmptyInput,
}

/// Lookup table reversing the bits of a 16-bit chunk.
fn rev16(x: u16) -> u16 {
    static TABLE: std::sync::OnceLock<Vec<u16>> = std::sync::OnceLock::new();
    let t = TABLE.get_or_init(|| (0..=u16::MAX).map(|v: u16| v.reverse_bits()).collect());
    t[x as usize]
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitArray {
    len: usize,
    words: Vec<u64>,
}

impl BitArray {
    pub fn new(len: usize) -> Self {
        BitArray { len, words: vec![0; (len + WORD - 1) / WORD] }
    }

    pub fn ones(len: usize) -> Self {
        let mut a = Self::new(len);
        for w in a.words.iter_mut() {
            *w = !0;
        }
        a.trim();
        a
    }

    pub fn from_indices(len: usize, idx: &[usize]) -> Self {
        let mut a = Self::new(len);
        for &i in idx {
            a.set(i, true);
        }
        a
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Zero any bits at positions >= len in the last word.
    fn trim(&mut self) {
        let extra = self.words.len() * WORD - self.len;
        if extra > 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= !0u64 >> extra;
            }
        }
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        if i >= self.len {
            return false;
        }
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    /// Like `get` but treats any out-of-range index (including negative) as 0.
    #[inline]
    pub fn get_clipped(&self, i: isize) -> bool {
        if i < 0 {
            false
        } else {
            self.get(i as usize)
        }
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: bool) {
        assert!(i < self.len, "bit index {} out of range {}", i, self.len);
        let w = &mut self.words[i / WORD];
        if v {
            *w |= 1 << (i % WORD);
        } else {
            *w &= !(1 << (i % WORD));
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn any(&self) -> bool {
        self.words.iter().any(|&w| w != 0)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * WORD + b)
                }
            })
        })
    }

    pub fn first_one(&self) -> Option<usize> {
        for (wi, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(wi * WORD + w.trailing_zeros() as usize);
            }
        }
        None
    }

    /// Extract `width` bits starting at (possibly negative / overflowing)
    /// position `lo`; out-of-range source bits read as 0.
    pub fn window(&self, lo: isize, width: usize) -> BitArray {
        let mut out = BitArray::new(width);
        if width == 0 {
            return out;
        }
        for wi in 0..out.words.len() {
            out.words[wi] = self.read_word(lo + (wi * WORD) as isize);
        }
        out.trim();
        out
    }

    /// Read 64 bits starting at bit position `pos` (out of range -> 0).
    #[inline]
    fn read_word(&self, pos: isize) -> u64 {
        if pos >= self.len as isize || pos + 64 <= 0 {
            return 0;
        }
        if pos < 0 {
            return self.read_word(0) << (-pos).min(63) as u32;
        }
        let pos = pos as usize;
        let wi = pos / WORD;
        let off = pos % WORD;
        let lo = self.words.get(wi).copied().unwrap_or(0);
        if off == 0 {
            lo
        } else {
            let hi = self.words.get(wi + 1).copied().unwrap_or(0);
            (lo >> off) | (hi << (WORD - off))
        }
    }

    /// self[i] &= other[i + shift] for every i (missing source bits are 0).
    pub fn and_shifted(&mut self, other: &BitArray, shift: isize) {
        for wi in 0..self.words.len() {
            self.words[wi] &= other.read_word(shift + (wi * WORD) as isize);
        }
        self.trim();
    }

    pub fn or_with(&mut self, other: &BitArray) {
        assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    /// Zero all bits in `lo..hi` (exclusive upper bound).
    pub fn clear_range(&mut self, lo: usize, hi: usize) -> Result<(), BitError> {
        if lo > hi || hi > self.len {
            return Err(BitError::RangeOutOfBounds { lo, hi, len: self.len });
        }
        if lo == hi {
            return Ok(());
        }
        let (wl, bl) = (lo / WORD, lo % WORD);
        let (wh, bh) = ((hi - 1) / WORD, (hi - 1) % WORD);
        let head = !(!0u64 << bl); // bits below lo
        let tail = if bh == 63 { 0 } else { !0u64 << (bh + 1) }; // bits above hi-1
        if wl == wh {
            self.words[wl] &= head | tail;
        } else {
            self.words[wl] &= head;
            for w in &mut self.words[wl + 1..wh] {
                *w = 0;
            }
            self.words[wh] &= tail;
        }
        Ok(())
    }

    /// Keep only bits in `lo..hi`, zeroing everything outside.
    pub fn retain_range(&mut self, lo: usize, hi: usize) {
        let lo = lo.min(self.len);
        let hi = hi.min(self.len).max(lo);
        self.clear_range(0, lo).unwrap();
        self.clear_range(hi, self.len).unwrap();
    }

    /// Output bit i = input bit (len-1-i).
    pub fn reverse_bits(&self) -> BitArray {
        let mut out = BitArray::new(self.len);
        if self.len == 0 {
            return out;
        }
        // Reverse whole words via the 16-bit table, then shift into place.
        let nw = self.words.len();
        let mut rev_words = vec![0u64; nw];
        for i in 0..nw {
            let w = self.words[i];
            let r = (rev16((w & 0xffff) as u16) as u64) << 48
                | (rev16(((w >> 16) & 0xffff) as u16) as u64) << 32
                | (rev16(((w >> 32) & 0xffff) as u16) as u64) << 16
                | (rev16(((w >> 48) & 0xffff) as u16) as u64);
            rev_words[nw - 1 - i] = r;
        }
        let tmp = BitArray { len: nw * WORD, words: rev_words };
        let pad = nw * WORD - self.len;
        for wi in 0..out.words.len() {
            out.words[wi] = tmp.read_word((pad + wi * WORD) as isize);
        }
        out.trim();
        out
    }
}

/// Bitwise AND of windows taken at `offset` into each input; all windows must
/// have the same width `len - offset`.
pub fn and_aligned(inputs: &[(&BitArray, usize)]) -> Result<BitArray, BitError> {
    let (first, first_off) = *inputs.first().ok_or(BitError::EmptyInput)?;
    let width = first.len().saturating_sub(first_off);
    for &(a, off) in &inputs[1..] {
        let w = a.len().saturating_sub(off);
        if w != width {
            return Err(BitError::WidthMismatch(width, w));
        }
    }
    let mut out = first.window(first_off as isize, width);
    for &(a, off) in &inputs[1..] {
        out.and_shifted(a, off as isize - 0);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn naive_window(a: &BitArray, lo: isize, width: usize) -> Vec<bool> {
        (0..width).map(|i| a.get_clipped(lo + i as isize)).collect()
    }

    fn bits(a: &BitArray) -> Vec<bool> {
        (0..a.len()).map(|i| a.get(i)).collect()
    }

    fn random_bits(rng: &mut ChaCha8Rng, len: usize) -> BitArray {
        let mut a = BitArray::new(len);
        for i in 0..len {
            if rng.gen_bool(0.5) {
                a.set(i, true);
            }
        }
        a
    }

    #[test]
    fn window_matches_naive() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..500 {
            let len = rng.gen_range(0..300);
            let a = random_bits(&mut rng, len);
            let lo = rng.gen_range(-80..(len as isize + 80));
            let width = rng.gen_range(0..200);
            let w = a.window(lo, width);
            assert_eq!(bits(&w), naive_window(&a, lo, width));
        }
    }

    #[test]
    fn and_shifted_matches_naive() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..500 {
            let len = rng.gen_range(1..300);
            let mut a = random_bits(&mut rng, len);
            let blen = rng.gen_range(0..300);
            let b = random_bits(&mut rng, blen);
            let shift = rng.gen_range(-100..300);
            let expect: Vec<bool> = (0..len)
                .map(|i| a.get(i) && b.get_clipped(shift + i as isize))
                .collect();
            a.and_shifted(&b, shift);
            assert_eq!(bits(&a), expect);
        }
    }

    #[test]
    fn reverse_bits_matches_naive_and_is_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..300 {
            let len = rng.gen_range(0..500);
            let a = random_bits(&mut rng, len);
            let r = a.reverse_bits();
            let expect: Vec<bool> = (0..len).map(|i| a.get(len - 1 - i)).collect();
            assert_eq!(bits(&r), expect);
            assert_eq!(r.reverse_bits(), a);
        }
    }

    #[test]
    fn reverse_bits_examples() {
        // {1} over [1..4] -> {4} in 1-based terms; 0-based: bit 0 -> bit 3
        let a = BitArray::from_indices(4, &[0]);
        assert_eq!(a.reverse_bits(), BitArray::from_indices(4, &[3]));
        // {1,2,5} over [1..5] -> {1,4,5}; 0-based {0,1,4} -> {0,3,4}
        let a = BitArray::from_indices(5, &[0, 1, 4]);
        assert_eq!(a.reverse_bits(), BitArray::from_indices(5, &[0, 3, 4]));
        // palindromic pattern maps to itself
        let a = BitArray::from_indices(5, &[0, 2, 4]);
        assert_eq!(a.reverse_bits(), a);
    }

    #[test]
    fn and_aligned_examples() {
        // {1,3,5} ∩ {1,2,3} over [1..6] -> {1,3}; 0-based
        let a = BitArray::from_indices(6, &[0, 2, 4]);
        let b = BitArray::from_indices(6, &[0, 1, 2]);
        let r = and_aligned(&[(&a, 0), (&b, 0)]).unwrap();
        assert_eq!(r, BitArray::from_indices(6, &[0, 2]));
        // single input -> copy
        let r = and_aligned(&[(&a, 0)]).unwrap();
        assert_eq!(r, a);
        // width mismatch
        assert!(and_aligned(&[(&a, 1), (&b, 0)]).is_err());
        // shifted windows: {2,4} over 8 at offset 1 vs {1,3} over 7 at offset 0
        let a = BitArray::from_indices(8, &[1, 3]);
        let b = BitArray::from_indices(7, &[0, 2]);
        let r = and_aligned(&[(&a, 1), (&b, 0)]).unwrap();
        let expect: Vec<bool> = (0..7).map(|i| a.get(i + 1) && b.get(i)).collect();
        assert_eq!(bits(&r), expect);
    }

    #[test]
    fn clear_range_works() {
        let mut a = BitArray::from_indices(3, &[0, 1, 2]);
        a.clear_range(1, 2).unwrap();
        assert_eq!(a, BitArray::from_indices(3, &[0, 2]));
        let mut a = BitArray::ones(200);
        a.clear_range(0, 200).unwrap();
        assert!(!a.any());
        let mut a = BitArray::from_indices(5, &[3]);
        let before = a.clone();
        a.clear_range(2, 2).unwrap();
        assert_eq!(a, before);
        assert!(a.clear_range(3, 9).is_err());
    }

    #[test]
    fn ones_and_iter() {
        let a = BitArray::ones(70);
        assert_eq!(a.count_ones(), 70);
        let idx: Vec<usize> = a.iter_ones().collect();
        assert_eq!(idx, (0..70).collect::<Vec<_>>());
    }
}
