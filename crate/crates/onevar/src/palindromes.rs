//! Palindrome machinery: Manacher radii, an eertree with series links for
//! longest-palindromic-suffix queries, the mirrored structure for prefix
//! queries, and palindrome-pair decompositions `t[i..j] = u v`.

use std::collections::HashMap;

/// Eertree (palindromic tree) of one string with series links and the
/// per-prefix longest-palindromic-suffix array.
struct Eertree {
    len: Vec<i64>,
    link: Vec<u32>,
    slink: Vec<u32>,
    /// longest palindromic suffix node of t[1..j]; index 0 unused.
    psuf: Vec<u32>,
}

const ROOT_M1: u32 = 0; // imaginary root, len -1
const ROOT_0: u32 = 1; // empty palindrome

impl Eertree {
    fn build(t: &[u8]) -> Eertree {
        let n = t.len();
        let mut len: Vec<i64> = vec![-1, 0];
        let mut link: Vec<u32> = vec![ROOT_M1, ROOT_M1];
        let mut slink: Vec<u32> = vec![ROOT_M1, ROOT_M1];
        let mut trans: HashMap<(u32, u8), u32> = HashMap::new();
        let mut psuf: Vec<u32> = vec![ROOT_0; n + 1];
        let mut last = ROOT_0;
        for j in 0..n {
            let c = t[j];
            let mut cur = last;
            loop {
                let l = len[cur as usize];
                if j as i64 - l - 1 >= 0 && t[(j as i64 - l - 1) as usize] == c {
                    break;
                }
                cur = link[cur as usize];
            }
            if let Some(&nx) = trans.get(&(cur, c)) {
                last = nx;
            } else {
                let new_len = len[cur as usize] + 2;
                let new_link = if new_len == 1 {
                    ROOT_0
                } else {
                    let mut q = link[cur as usize];
                    loop {
                        let l = len[q as usize];
                        if j as i64 - l - 1 >= 0 && t[(j as i64 - l - 1) as usize] == c {
                            break;
                        }
                        q = link[q as usize];
                    }
                    trans[&(q, c)]
                };
                let id = len.len() as u32;
                len.push(new_len);
                link.push(new_link);
                let diff = new_len - len[new_link as usize];
                let ldiff = len[new_link as usize] - len[link[new_link as usize] as usize];
                slink.push(if new_link <= ROOT_0 {
                    ROOT_0
                } else if diff == ldiff {
                    slink[new_link as usize]
                } else {
                    new_link
                });
                trans.insert((cur, c), id);
                last = id;
            }
            psuf[j + 1] = last;
        }
        Eertree { len, link, slink, psuf }
    }

    /// Longest palindromic suffix of t[i..j] (1-based, i <= j).
    fn longest_suffix(&self, i: usize, j: usize) -> usize {
        let cap = (j - i + 1) as i64;
        let mut v = self.psuf[j];
        if self.len[v as usize] <= cap {
            return self.len[v as usize] as usize;
        }
        // climb series links while the next series still has members > cap
        while self.len[self.slink[v as usize] as usize] >= cap {
            v = self.slink[v as usize];
        }
        // v's series: lengths len(v), len(v)-diff, ..., down to len(slink)+smth
        let lv = self.len[v as usize];
        if lv <= cap {
            return lv as usize;
        }
        let diff = lv - self.len[self.link[v as usize] as usize];
        let slen = self.len[self.slink[v as usize] as usize];
        if diff <= 0 {
            return slen.max(0) as usize;
        }
        let c = (lv - cap + diff - 1) / diff; // minimal c with lv - c*diff <= cap
        let cand = lv - c * diff;
        if cand > slen {
            cand.max(0) as usize
        } else {
            slen.max(0) as usize
        }
    }
}

pub struct PalIndex {
    n: usize,
    /// d1[c] = number of odd palindromes centered at 0-based c.
    d1: Vec<usize>,
    /// d2[c] = number of even palindromes centered between c-1 and c.
    d2: Vec<usize>,
    fwd: Eertree,
    rev: Eertree,
}

pub fn build_pal_index(t: &[u8]) -> PalIndex {
    let n = t.len();
    let mut d1 = vec![0usize; n];
    let mut d2 = vec![0usize; n];
    // cp-algorithms Manacher
    {
        let (mut l, mut r) = (0isize, -1isize);
        for i in 0..n as isize {
            let mut k = if i > r { 1 } else { (d1[(l + r - i) as usize] as isize).min(r - i + 1) };
            while i - k >= 0 && i + k < n as isize && t[(i - k) as usize] == t[(i + k) as usize] {
                k += 1;
            }
            d1[i as usize] = k as usize;
            if i + k - 1 > r {
                l = i - k + 1;
                r = i + k - 1;
            }
        }
        let (mut l, mut r) = (0isize, -1isize);
        for i in 0..n as isize {
            let mut k = if i > r { 0 } else { (d2[(l + r - i + 1) as usize] as isize).min(r - i + 1) };
            while i - k - 1 >= 0 && i + k < n as isize && t[(i - k - 1) as usize] == t[(i + k) as usize] {
                k += 1;
            }
            d2[i as usize] = k as usize;
            if i + k - 1 > r {
                l = i - k;
                r = i + k - 1;
            }
        }
    }
    let trev: Vec<u8> = t.iter().rev().copied().collect();
    PalIndex { n, d1, d2, fwd: Eertree::build(t), rev: Eertree::build(&trev) }
}

impl PalIndex {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Is t[i..j] a palindrome (1-based inclusive)?  O(1).
    pub fn is_palindrome(&self, i: usize, j: usize) -> bool {
        assert!(i >= 1 && i <= j && j <= self.n, "invalid range {}..{}", i, j);
        let (i0, j0) = (i - 1, j - 1);
        let len = j0 - i0 + 1;
        if len % 2 == 1 {
            let c = (i0 + j0) / 2;
            self.d1[c] >= (len + 1) / 2
        } else {
            let c = (i0 + j0 + 1) / 2;
            self.d2[c] >= len / 2
        }
    }

    /// Length of the longest palindromic suffix of t[i..j].  O(log n).
    pub fn longest_pal_suffix(&self, i: usize, j: usize) -> usize {
        assert!(i >= 1 && i <= j && j <= self.n);
        self.fwd.longest_suffix(i, j)
    }

    /// Length of the longest palindromic prefix of t[i..j].
    pub fn longest_pal_prefix(&self, i: usize, j: usize) -> usize {
        assert!(i >= 1 && i <= j && j <= self.n);
        // prefix of t[i..j] = suffix of rev(t)[n+1-j .. n+1-i]
        self.rev.longest_suffix(self.n + 1 - j, self.n + 1 - i)
    }

    /// Some split t[i..j] = u·v with u, v palindromes and v non-empty,
    /// returned as (|u|, |v|); None if no such split exists.
    pub fn pal_pair_decompose(&self, i: usize, j: usize) -> Option<(usize, usize)> {
        let len = j - i + 1;
        let u = self.longest_pal_prefix(i, j);
        if u < len && self.is_palindrome(i + u, j) {
            return Some((u, len - u));
        }
        let v = self.longest_pal_suffix(i, j);
        if v >= 1 {
            if v == len {
                return Some((0, len));
            }
            if self.is_palindrome(i, j - v) {
                return Some((len - v, v));
            }
        }
        None
    }
}

/// Inside a period-d run, |u| of the pal-pair decomposition of the d-window
/// ending at h-1 changes to `(|u| - 2*delta_h) mod d` when h moves by delta_h.
pub fn pal_pair_step(u_len: usize, d: usize, delta_h: i64) -> usize {
    (u_len as i64 - 2 * delta_h).rem_euclid(d as i64) as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn is_pal_brute(s: &[u8]) -> bool {
        s.iter().eq(s.iter().rev())
    }

    fn texts(seed: u64, cases: usize, max_n: usize, sigma: u8) -> Vec<Vec<u8>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut v: Vec<Vec<u8>> = vec![b"abacaba".to_vec(), b"aabb".to_vec(), b"abaaba".to_vec()];
        for _ in 0..cases {
            let n = rng.gen_range(1..=max_n);
            v.push((0..n).map(|_| rng.gen_range(b'a'..b'a' + sigma)).collect());
        }
        v
    }

    #[test]
    fn is_palindrome_matches_brute() {
        for t in texts(21, 80, 70, 2) {
            let pix = build_pal_index(&t);
            for i in 1..=t.len() {
                for j in i..=t.len() {
                    assert_eq!(
                        pix.is_palindrome(i, j),
                        is_pal_brute(&t[i - 1..j]),
                        "t={:?} {}..{}",
                        String::from_utf8_lossy(&t),
                        i,
                        j
                    );
                }
            }
        }
    }

    #[test]
    fn longest_suffix_prefix_match_brute() {
        for t in texts(22, 60, 60, 2).iter().chain(texts(23, 30, 60, 3).iter()) {
            let pix = build_pal_index(t);
            for i in 1..=t.len() {
                for j in i..=t.len() {
                    let s = &t[i - 1..j];
                    let suf = (1..=s.len()).rev().find(|&l| is_pal_brute(&s[s.len() - l..])).unwrap();
                    let pre = (1..=s.len()).rev().find(|&l| is_pal_brute(&s[..l])).unwrap();
                    assert_eq!(pix.longest_pal_suffix(i, j), suf, "t={:?} {}..{}", String::from_utf8_lossy(t), i, j);
                    assert_eq!(pix.longest_pal_prefix(i, j), pre, "t={:?} {}..{}", String::from_utf8_lossy(t), i, j);
                }
            }
        }
    }

    #[test]
    fn longest_suffix_examples() {
        let pix = build_pal_index(b"abc");
        assert_eq!(pix.longest_pal_suffix(1, 3), 1);
        let pix = build_pal_index(b"abacaba");
        assert_eq!(pix.longest_pal_suffix(1, 7), 7);
        let pix = build_pal_index(b"aabb");
        assert_eq!(pix.longest_pal_suffix(1, 4), 2);
    }

    #[test]
    fn pal_pair_matches_split_enumeration() {
        for t in texts(24, 80, 50, 2).iter().chain(texts(25, 40, 50, 3).iter()) {
            let pix = build_pal_index(t);
            for i in 1..=t.len() {
                for j in i..=t.len() {
                    let s = &t[i - 1..j];
                    let brute_any = (0..s.len())
                        .any(|u| is_pal_brute(&s[..u]) && is_pal_brute(&s[u..]));
                    match pix.pal_pair_decompose(i, j) {
                        Some((u, v)) => {
                            assert!(brute_any, "splurious split t={:?} {}..{}", String::from_utf8_lossy(t), i, j);
                            assert!(v >= 1 && u + v == s.len());
                            assert!(is_pal_brute(&s[..u]) && is_pal_brute(&s[u..]));
                        }
                        None => assert!(!brute_any, "missed split t={:?} {}..{}", String::from_utf8_lossy(t), i, j),
                    }
                }
            }
        }
    }

    #[test]
    fn pal_pair_examples() {
        let pix = build_pal_index(b"ab");
        assert_eq!(pix.pal_pair_decompose(1, 2), Some((1, 1)));
        let pix = build_pal_index(b"aab");
        assert_eq!(pix.pal_pair_decompose(1, 3), Some((2, 1)));
        let pix = build_pal_index(b"abca");
        assert_eq!(pix.pal_pair_decompose(1, 4), None);
    }

    /// For primitive w there is at most one split u·v with v non-empty, and
    /// ours matches it.
    #[test]
    fn primitive_pal_pair_unique() {
        let mut rng = ChaCha8Rng::seed_from_u64(26);
        let mut done = 0;
        while done < 300 {
            let m = rng.gen_range(1..18);
            let w: Vec<u8> = (0..m).map(|_| rng.gen_range(b'a'..b'a' + 2)).collect();
            let primitive = (1..m).all(|d| m % d != 0 || (0..m).any(|i| w[i] != w[(i + d) % m]));
            if !primitive {
                continue;
            }
            done += 1;
            let splits: Vec<usize> = (0..m)
                .filter(|&u| is_pal_brute(&w[..u]) && is_pal_brute(&w[u..]))
                .collect();
            assert!(splits.len() <= 1, "w={:?}", w);
            let pix = build_pal_index(&w);
            let got = pix.pal_pair_decompose(1, m);
            assert_eq!(got.map(|(u, _)| u), splits.first().copied());
        }
    }

    /// Inside a run with period d, decompositions of consecutive length-d
    /// windows obey pal_pair_step.
    #[test]
    fn in_run_step_consistency() {
        use crate::runs::compute_runs;
        use crate::text_index::build_index;
        for t in texts(27, 120, 60, 2) {
            let idx = build_index(&t).unwrap();
            let rix = compute_runs(&idx);
            let pix = build_pal_index(&t);
            for r in rix.runs() {
                let d = r.period;
                // windows t[h-d..h-1] for h in [start+d .. end+1]
                let hs: Vec<usize> = (r.start + d..=r.end + 1).collect();
                let decs: Vec<Option<(usize, usize)>> =
                    hs.iter().map(|&h| pix.pal_pair_decompose(h - d, h - 1)).collect();
                for w in decs.windows(2) {
                    match (w[0], w[1]) {
                        (Some((u, _)), Some((u2, _))) => {
                            assert_eq!(u2, pal_pair_step(u, d, 1));
                        }
                        (None, None) => {}
                        other => panic!("decomposition existence flipped in run: {:?}", other),
                    }
                }
            }
        }
    }

    #[test]
    fn pal_pair_step_examples() {
        assert_eq!(pal_pair_step(0, 7, 0), 0);
        assert_eq!(pal_pair_step(3, 5, 1), 1);
        assert_eq!(pal_pair_step(1, 4, -1), 3);
    }
}
