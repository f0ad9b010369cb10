//! All runs of the text, period-indexed run lists, per-substring run lookup,
//! Lyndon-root positions and periodic-extension lengths.

use crate::text_index::{suffix_array, TextIndex};

/// Maximal periodic substring `t[start..end]` with minimal period `period`;
/// one-position extensions have strictly greater minimal periods.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Run {
    pub start: usize,
    pub end: usize,
    pub period: usize,
}

impl Run {
    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }
}

pub struct RunsIndex {
    runs: Vec<Run>,
    /// run ids with minimal period d, sorted by start (R_d).
    by_period: Vec<Vec<u32>>,
    /// run ids containing each 1-based position, sorted by period ascending.
    pos_runs: Vec<Vec<u32>>,
    /// leftmost start of the lexicographically smallest d-window of each run.
    lyn_start: Vec<usize>,
    /// end position of the leftmost d-window whose reversal is smallest.
    rev_lyn_end: Vec<usize>,
    /// length threshold ~ log2 n (R'_d keeps runs at least this long).
    pub len_log: usize,
    /// length threshold ~ log2 log2 n (R''_d).
    pub len_loglog: usize,
}

fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// Smallest-rotation start index of `w` (Booth's algorithm).
fn booth(w: &[u8]) -> usize {
    let n = w.len();
    let mut i = 0usize;
    let mut j = 1usize;
    let mut k = 0usize;
    while i < n && j < n && k < n {
        let a = w[(i + k) % n];
        let b = w[(j + k) % n];
        if a == b {
            k += 1;
            continue;
        }
        if a > b {
            i = (i + k + 1).max(j + 1);
        } else {
            j = (j + k + 1).max(i + 1);
        }
        k = 0;
    }
    i.min(j)
}

pub fn compute_runs(idx: &TextIndex) -> RunsIndex {
    let t = idx.text();
    let n = t.len();
    // Suffix ranks of t for the plain and the complemented alphabet (the
    // t·rev(t) ranks do not order pure t-suffixes; complementing keeps
    // end-of-string smallest, which negating ranks would not).
    let rank_for = |complement: bool| -> Vec<usize> {
        let tu: Vec<u32> = t
            .iter()
            .map(|&b| if complement { 255 - b as u32 } else { b as u32 })
            .collect();
        let sa = suffix_array(&tu);
        let mut rank = vec![0usize; n];
        for (i, &p) in sa.iter().enumerate() {
            rank[p] = i;
        }
        rank
    };

    // Longest Lyndon word at each position for both alphabet orders (via
    // next-smaller-value scans over rank); each yields a candidate run with
    // period = the Lyndon length, extended by lcp/rlcp.
    let mut runs: Vec<Run> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for order in 0..2 {
        let rank = rank_for(order == 1);
        let mut stack: Vec<usize> = Vec::new();
        for i in (0..n).rev() {
            while let Some(&j) = stack.last() {
                if rank[j] < rank[i] {
                    break;
                }
                stack.pop();
            }
            let d = stack.last().copied().unwrap_or(n) - i;
            stack.push(i);

            let s1 = i + 1; // 1-based root start
            let e1 = i + d; // 1-based root end
            let right = if e1 + 1 <= n { idx.lcp(s1, s1 + d) } else { 0 };
            let left = if s1 >= 2 { idx.rlcp(s1 - 1, e1) } else { 0 };
            let start = s1 - left;
            let end = e1 + right;
            if end - start + 1 >= 2 * d {
                let r = Run { start, end, period: d };
                if seen.insert(r) {
                    runs.push(r);
                }
            }
        }
    }
    runs.sort_by_key(|r| (r.start, r.end, r.period));

    let mut by_period: Vec<Vec<u32>> = vec![Vec::new(); n + 1];
    for (id, r) in runs.iter().enumerate() {
        by_period[r.period].push(id as u32);
    }
    let mut pos_runs: Vec<Vec<u32>> = vec![Vec::new(); n + 2];
    for (id, r) in runs.iter().enumerate() {
        for p in r.start..=r.end {
            pos_runs[p].push(id as u32);
        }
    }
    for v in pos_runs.iter_mut() {
        v.sort_by_key(|&id| runs[id as usize].period);
    }

    let mut lyn_start = Vec::with_capacity(runs.len());
    let mut rev_lyn_end = Vec::with_capacity(runs.len());
    for r in &runs {
        let d = r.period;
        let root = &t[r.start - 1..r.start - 1 + d];
        let k = booth(root);
        lyn_start.push(r.start + k);
        let rev_root: Vec<u8> = root.iter().rev().copied().collect();
        let j = booth(&rev_root);
        let delta = (d - j) % d;
        rev_lyn_end.push(r.start + delta + d - 1);
    }

    let len_log = ceil_log2(n).max(1);
    let len_loglog = ceil_log2(len_log).max(1);
    RunsIndex { runs, by_period, pos_runs, lyn_start, rev_lyn_end, len_log, len_loglog }
}

/// Which run-length filter to scan (all runs, length >= log n, or >= log log n).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunFilter {
    All,
    AtLeastLog,
    AtLeastLogLog,
}

impl RunsIndex {
    pub fn runs(&self) -> &[Run] {
        &self.runs
    }

    /// Minimal period and containing run of `t[i..j]` when it is periodic
    /// (minimal period at most half the length), else None.
    pub fn substring_run(&self, i: usize, j: usize) -> Option<(usize, Run)> {
        assert!(i >= 1 && i <= j, "invalid range {}..{}", i, j);
        let len = j - i + 1;
        for &id in &self.pos_runs[i] {
            let r = self.runs[id as usize];
            if 2 * r.period <= len && r.end >= j {
                return Some((r.period, r));
            }
        }
        None
    }

    /// Runs with period `d` overlapping `[lo..hi]`, optionally length-filtered.
    pub fn runs_with_period_overlapping(
        &self,
        d: usize,
        lo: usize,
        hi: usize,
        filter: RunFilter,
    ) -> impl Iterator<Item = Run> + '_ {
        let min_len = match filter {
            RunFilter::All => 0,
            RunFilter::AtLeastLog => self.len_log,
            RunFilter::AtLeastLogLog => self.len_loglog,
        };
        let ids: &[u32] = if d < self.by_period.len() { &self.by_period[d] } else { &[] };
        let first = ids.partition_point(|&id| self.runs[id as usize].end < lo);
        ids[first..]
            .iter()
            .map(|&id| self.runs[id as usize])
            .take_while(move |r| r.start <= hi)
            .filter(move |r| r.len() >= min_len)
    }

    fn run_id(&self, run: &Run) -> Option<usize> {
        self.pos_runs[run.start]
            .iter()
            .map(|&id| id as usize)
            .find(|&id| self.runs[id] == *run)
    }

    /// Start of the leftmost lexicographically-smallest d-window of `run`.
    pub fn lyndon_root(&self, run: &Run) -> usize {
        self.lyn_start[self.run_id(run).expect("run not in index")]
    }

    /// End of the leftmost d-window of `run` whose reversal is smallest.
    pub fn reversed_lyndon_root(&self, run: &Run) -> usize {
        self.rev_lyn_end[self.run_id(run).expect("run not in index")]
    }
}

/// Lengths of the longest period-`d` prefix and suffix of `t[a..b]`.
pub fn periodic_extension(idx: &TextIndex, a: usize, b: usize, d: usize) -> (usize, usize) {
    assert!(a >= 1 && a <= b && b <= idx.n(), "invalid range");
    assert!(d >= 1);
    let len = b - a + 1;
    if d >= len {
        return (len, len);
    }
    let pref = (d + idx.lcp(a, a + d)).min(len);
    let suff = (d + idx.rlcp(b, b - d)).min(len);
    (pref, suff)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text_index::build_index;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute_min_period(s: &[u8]) -> usize {
        (1..=s.len())
            .find(|&d| (0..s.len() - d).all(|i| s[i] == s[i + d]))
            .unwrap_or(s.len())
    }

    fn brute_runs(t: &[u8]) -> Vec<Run> {
        let n = t.len();
        let mut out = Vec::new();
        for i in 1..=n {
            for j in i..=n {
                let d = brute_min_period(&t[i - 1..j]);
                if 2 * d > j - i + 1 {
                    continue;
                }
                let left_ok = i == 1 || brute_min_period(&t[i - 2..j]) > d;
                let right_ok = j == n || brute_min_period(&t[i - 1..j + 1]) > d;
                if left_ok && right_ok {
                    out.push(Run { start: i, end: j, period: d });
                }
            }
        }
        out.sort_by_key(|r| (r.start, r.end, r.period));
        out
    }

    fn texts(seed: u64, cases: usize, max_n: usize, sigma: u8) -> Vec<Vec<u8>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut v: Vec<Vec<u8>> = vec![
            b"aaaa".to_vec(),
            b"abab".to_vec(),
            b"aabaa".to_vec(),
            b"abaababaab".to_vec(),
            b"aabaabaabaaabaabaaba".to_vec(),
        ];
        for _ in 0..cases {
            let n = rng.gen_range(1..=max_n);
            v.push((0..n).map(|_| rng.gen_range(b'a'..b'a' + sigma)).collect());
        }
        v
    }

    #[test]
    fn runs_match_brute_force() {
        for t in texts(1, 150, 60, 3).iter().chain(texts(2, 30, 40, 2).iter()) {
            let idx = build_index(t).unwrap();
            let rix = compute_runs(&idx);
            assert_eq!(rix.runs(), brute_runs(t).as_slice(), "t={:?}", String::from_utf8_lossy(t));
        }
    }

    #[test]
    fn runs_examples() {
        for (t, expect) in [
            (b"aaaa".to_vec(), vec![Run { start: 1, end: 4, period: 1 }]),
            (b"abab".to_vec(), vec![Run { start: 1, end: 4, period: 2 }]),
            (
                b"aabaa".to_vec(),
                vec![Run { start: 1, end: 2, period: 1 }, Run { start: 4, end: 5, period: 1 }],
            ),
        ] {
            let idx = build_index(&t).unwrap();
            assert_eq!(compute_runs(&idx).runs(), expect.as_slice());
        }
    }

    #[test]
    fn same_period_runs_overlap_less_than_d() {
        for t in texts(3, 120, 80, 2) {
            let idx = build_index(&t).unwrap();
            let rix = compute_runs(&idx);
            for a in rix.runs() {
                for b in rix.runs() {
                    if a != b && a.period == b.period {
                        let lo = a.start.max(b.start);
                        let hi = a.end.min(b.end);
                        let overlap = (hi + 1).saturating_sub(lo);
                        assert!(overlap < a.period, "a={:?} b={:?}", a, b);
                    }
                }
            }
        }
    }

    #[test]
    fn substring_run_matches_brute() {
        for t in texts(4, 100, 50, 2).iter().chain(texts(5, 40, 50, 3).iter()) {
            let idx = build_index(t).unwrap();
            let rix = compute_runs(&idx);
            let n = t.len();
            for i in 1..=n {
                for j in i..=n {
                    let d = brute_min_period(&t[i - 1..j]);
                    let got = rix.substring_run(i, j);
                    if 2 * d <= j - i + 1 {
                        let (gd, run) = got.expect("expected periodic");
                        assert_eq!(gd, d, "t={:?} i={} j={}", String::from_utf8_lossy(t), i, j);
                        assert!(run.start <= i && run.end >= j && run.period == d);
                    } else {
                        assert!(got.is_none(), "t={:?} i={} j={}", String::from_utf8_lossy(t), i, j);
                    }
                }
            }
        }
    }

    #[test]
    fn substring_run_examples() {
        let idx = build_index(b"aaaa").unwrap();
        let rix = compute_runs(&idx);
        assert_eq!(rix.substring_run(2, 3), Some((1, Run { start: 1, end: 4, period: 1 })));
        let idx = build_index(b"abab").unwrap();
        let rix = compute_runs(&idx);
        assert_eq!(rix.substring_run(1, 4), Some((2, Run { start: 1, end: 4, period: 2 })));
        let idx = build_index(b"abc").unwrap();
        let rix = compute_runs(&idx);
        assert_eq!(rix.substring_run(1, 3), None);
    }

    #[test]
    fn lyndon_roots_match_rotation_scan() {
        for t in texts(6, 120, 60, 3) {
            let idx = build_index(&t).unwrap();
            let rix = compute_runs(&idx);
            for r in rix.runs() {
                let d = r.period;
                let windows: Vec<(usize, &[u8])> =
                    (r.start..=r.end - d + 1).map(|a| (a, &t[a - 1..a - 1 + d])).collect();
                let min_fwd = windows.iter().map(|(_, w)| *w).min().unwrap();
                let expect_fwd = windows.iter().find(|(_, w)| *w == min_fwd).unwrap().0;
                assert_eq!(rix.lyndon_root(r), expect_fwd, "run {:?} in {:?}", r, String::from_utf8_lossy(&t));
                let revs: Vec<(usize, Vec<u8>)> = windows
                    .iter()
                    .map(|(a, w)| (*a, w.iter().rev().copied().collect()))
                    .collect();
                let min_rev = revs.iter().map(|(_, w)| w.clone()).min().unwrap();
                let expect_rev = revs.iter().find(|(_, w)| *w == min_rev).unwrap().0 + d - 1;
                assert_eq!(rix.reversed_lyndon_root(r), expect_rev);
            }
        }
    }

    #[test]
    fn lyndon_root_examples() {
        let idx = build_index(b"abab").unwrap();
        let rix = compute_runs(&idx);
        let run = Run { start: 1, end: 4, period: 2 };
        assert_eq!(rix.lyndon_root(&run), 1);
        let idx = build_index(b"baba").unwrap();
        let rix = compute_runs(&idx);
        let run = Run { start: 1, end: 4, period: 2 };
        assert_eq!(rix.lyndon_root(&run), 2);
        let idx = build_index(b"aaaa").unwrap();
        let rix = compute_runs(&idx);
        let run = Run { start: 1, end: 4, period: 1 };
        assert_eq!(rix.lyndon_root(&run), 1);
    }

    #[test]
    fn periodic_extension_matches_brute() {
        for t in texts(7, 60, 30, 2) {
            let idx = build_index(&t).unwrap();
            let n = t.len();
            for a in 1..=n {
                for b in a..=n {
                    for d in 1..=(b - a + 2).min(n) {
                        let s = &t[a - 1..b];
                        let pref = (1..=s.len())
                            .take_while(|&l| (0..l.saturating_sub(d)).all(|i| s[i] == s[i + d]))
                            .count();
                        let suff = (1..=s.len())
                            .take_while(|&l| {
                                (0..l.saturating_sub(d)).all(|i| s[s.len() - 1 - i] == s[s.len() - 1 - i - d])
                            })
                            .count();
                        assert_eq!(periodic_extension(&idx, a, b, d), (pref, suff));
                    }
                }
            }
        }
    }

    #[test]
    fn periodic_extension_examples() {
        let idx = build_index(b"aaab").unwrap();
        assert_eq!(periodic_extension(&idx, 1, 4, 1), (3, 1));
        assert_eq!(periodic_extension(&idx, 1, 4, 9), (4, 4));
        let idx = build_index(b"ababac").unwrap();
        // suffix "ac" has period 2 vacuously (no i with i+d in range)
        assert_eq!(periodic_extension(&idx, 1, 6, 2), (5, 2));
    }
}
