//! Orchestration: the scale/anchor strategy, run sweeps, and assembly of the
//! compressed match report.

use crate::anchor_nonperiodic;
use crate::anchor_periodic;
use crate::bitvec::BitArray;
use crate::palindromes::{build_pal_index, PalIndex};
use crate::pattern::{image_length, normalize, Direction, Pattern};
use crate::runs::{compute_runs, RunsIndex};
use crate::text_index::{build_index, OccBits, TextIndex};
use serde::Serialize;
use std::collections::HashSet;

#[derive(Debug, Clone)]
pub struct Config {
    /// Smallest substitution length reported (0 or 1).
    pub min_sub_len: usize,
    /// Worker threads for the scale/run loops (1 = serial).
    pub threads: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config { min_sub_len: 1, threads: 1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Instance {
    pub start: usize,
    pub sub_len: usize,
}

/// Arithmetic progression of instances: member i is
/// `(start + i*start_step, sub_len + i*len_step)` for i in [0..count).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct InstanceFamily {
    pub start: u64,
    pub start_step: i64,
    pub sub_len: u64,
    pub len_step: i64,
    pub count: u64,
}

impl InstanceFamily {
    pub fn singleton(start: usize, sub_len: usize) -> InstanceFamily {
        InstanceFamily { start: start as u64, start_step: 0, sub_len: sub_len as u64, len_step: 0, count: 1 }
    }

    pub fn member(&self, i: u64) -> Instance {
        debug_assert!(i < self.count);
        Instance {
            start: (self.start as i64 + i as i64 * self.start_step) as usize,
            sub_len: (self.sub_len as i64 + i as i64 * self.len_step) as usize,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = Instance> + '_ {
        (0..self.count).map(move |i| self.member(i))
    }

    /// Reorient so that members come out ascending by (start, sub_len).
    fn canonicalize(&mut self) {
        if self.count <= 1 {
            self.start_step = 0;
            self.len_step = 0;
            return;
        }
        if self.start_step < 0 || (self.start_step == 0 && self.len_step < 0) {
            let last = self.member(self.count - 1);
            self.start = last.start as u64;
            self.sub_len = last.sub_len as u64;
            self.start_step = -self.start_step;
            self.len_step = -self.len_step;
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MatchReport {
    pub n: usize,
    pub total: u64,
    pub families: Vec<InstanceFamily>,
    #[serde(skip)]
    pub pattern: Pattern,
    #[serde(skip)]
    pub min_sub_len: usize,
}

impl MatchReport {
    fn new(n: usize, pattern: Pattern, min_sub_len: usize, mut families: Vec<InstanceFamily>) -> MatchReport {
        for f in families.iter_mut() {
            f.canonicalize();
        }
        families.sort_by_key(|f| (f.start, f.sub_len, f.start_step, f.len_step, f.count));
        families.dedup();
        let total = families.iter().map(|f| f.count).sum();
        MatchReport { n, total, families, pattern, min_sub_len }
    }
}

/// Stream every instance exactly once, sorted by (start, sub_len); linear in
/// the number of instances plus the report size.
pub fn enumerate(report: &MatchReport) -> impl Iterator<Item = Instance> + '_ {
    use std::cmp::Reverse;
    use std::collections::BinaryHeap;
    let mut heap: BinaryHeap<Reverse<(Instance, usize, u64)>> = report
        .families
        .iter()
        .enumerate()
        .filter(|(_, f)| f.count > 0)
        .map(|(fi, f)| Reverse((f.member(0), fi, 0)))
        .collect();
    std::iter::from_fn(move || {
        let Reverse((inst, fi, mi)) = heap.pop()?;
        let f = &report.families[fi];
        if mi + 1 < f.count {
            heap.push(Reverse((f.member(mi + 1), fi, mi + 1)));
        }
        Some(inst)
    })
}

// ---------------------------------------------------------------------------
// Engine context
// ---------------------------------------------------------------------------

/// Everything the anchor and sweep machinery needs, immutable after build.
pub struct Ctx {
    pub t: Vec<u8>,
    pub n: usize,
    /// normalized pattern (first direction is Forward)
    pub p: Pattern,
    /// pre[z] = |s_1 .. s_z| for z in 0..=r
    pub pre: Vec<usize>,
    pub idx: TextIndex,
    pub rix: RunsIndex,
    pub pal: PalIndex,
    /// occurrence bits per segment
    pub docc: Vec<OccBits>,
    /// occurrence bits per reversed segment
    pub docc_rev: Vec<OccBits>,
    pub min_sub: usize,
    pub vfind: anchor_nonperiodic::VFindCache,
}

impl Ctx {
    pub fn new(t: &[u8], p: &Pattern, min_sub: usize) -> Ctx {
        let p = normalize(p);
        let idx = build_index(t).expect("non-empty text");
        let rix = compute_runs(&idx);
        let pal = build_pal_index(t);
        let docc: Vec<OccBits> = p.segments.iter().map(|s| idx.occurrences(s)).collect();
        let docc_rev: Vec<OccBits> = p
            .segments
            .iter()
            .map(|s| {
                let rev: Vec<u8> = s.iter().rev().copied().collect();
                idx.occurrences(&rev)
            })
            .collect();
        let pre: Vec<usize> = (0..=p.r()).map(|z| p.prefix_len(z)).collect();
        let vfind = anchor_nonperiodic::VFindCache::new(&idx, t.len());
        Ctx { t: t.to_vec(), n: t.len(), p, pre, idx, rix, pal, docc, docc_rev, min_sub, vfind }
    }

    pub fn r(&self) -> usize {
        self.p.r()
    }

    /// |s_a .. s_b| (1-based segment indices, inclusive); 0 when a > b.
    pub fn seg_span(&self, a: usize, b: usize) -> usize {
        if a > b {
            0
        } else {
            self.pre[b] - self.pre[a - 1]
        }
    }

    pub fn seg_len(&self, z: usize) -> usize {
        self.p.segments[z - 1].len()
    }

    pub fn dir(&self, z: usize) -> Direction {
        self.p.directions[z - 1]
    }

    pub fn image_len(&self, beta: usize) -> usize {
        image_length(&self.p, beta)
    }

    /// 1-based start of segment s_z in an instance (start, beta).
    pub fn seg_pos(&self, start: usize, beta: usize, z: usize) -> usize {
        start + self.pre[z - 1] + (z - 1) * beta
    }

    /// 1-based start of the z-th variable slot (z in 1..r).
    pub fn slot_pos(&self, start: usize, beta: usize, z: usize) -> usize {
        start + self.pre[z] + (z - 1) * beta
    }

    /// O(r) instance check via occurrence bits, lcp and reversed matching.
    pub fn verify(&self, start: usize, beta: usize) -> bool {
        let r = self.r();
        if start < 1 {
            return false;
        }
        let end = start + self.image_len(beta);
        if end < 1 || end - 1 > self.n {
            return false;
        }
        for z in 1..=r {
            if !self.docc[z - 1].get(self.seg_pos(start, beta, z)) {
                return false;
            }
        }
        if beta == 0 || r < 3 {
            return true;
        }
        let a1 = self.slot_pos(start, beta, 1);
        for z in 2..r {
            let az = self.slot_pos(start, beta, z);
            let ok = if self.dir(z) == self.dir(1) {
                self.idx.substr_eq(a1, az, beta)
            } else {
                self.idx.substr_eq_rev(a1, az + beta - 1, beta)
            };
            if !ok {
                return false;
            }
        }
        true
    }

    /// True when the run sweeps own this (verified) instance: the first slot
    /// is periodic with minimal period d0, beta >= 3*d0, and the slot chain
    /// breaks the d0-period at most once.
    pub fn sweep_owned(&self, start: usize, beta: usize) -> bool {
        let r = self.r();
        if r < 3 || beta < 2 {
            return false;
        }
        let a1 = self.slot_pos(start, beta, 1);
        let d0 = match self.rix.substring_run(a1, a1 + beta - 1) {
            None => return false,
            Some((d, _)) => d,
        };
        if beta < 3 * d0 {
            return false;
        }
        let mut breaks = 0;
        for z in 2..r {
            // span w_{z-1} s_z w_z
            let a = self.slot_pos(start, beta, z - 1);
            let b = self.slot_pos(start, beta, z) + beta - 1;
            let len = b - a + 1;
            let periodic = self.idx.lcp(a, a + d0) >= len - d0;
            if !periodic {
                breaks += 1;
                if breaks >= 2 {
                    return false;
                }
            }
        }
        true
    }

    /// AND of segment-occurrence windows: bit (i - lo) is set iff for every z
    /// in [1..r], s_z occurs at i + pre[z-1] + (z-1)*beta.
    pub fn occ_and(&self, lo: isize, hi: isize, beta: usize) -> BitArray {
        let width = (hi - lo + 1).max(0) as usize;
        let mut acc = BitArray::ones(width);
        for z in 1..=self.r() {
            let off = (self.pre[z - 1] + (z - 1) * beta) as isize;
            let win = self.docc[z - 1].window(lo + off, hi + off);
            acc.and_shifted(&win, 0);
        }
        acc
    }
}

// ---------------------------------------------------------------------------
// Scale buckets (alpha = 4/3)
// ---------------------------------------------------------------------------

/// Substitution-length buckets: bucket k holds integers in
/// (3/2 * alpha^k, 2 * alpha^k], which partition [2..n].
pub(crate) fn buckets(n: usize) -> Vec<(usize, usize, usize)> {
    // (beta_lo, beta_hi, anchor_len m = ceil(alpha^k))
    let mut out = Vec::new();
    let mut num: u128 = 1; // 4^k
    let mut den: u128 = 1; // 3^k
    loop {
        let lo = (3 * num / (2 * den)) as usize + 1; // smallest beta with 2*beta*den > 3*num
        let hi = (2 * num / den) as usize;
        let m = ((num + den - 1) / den) as usize;
        if lo > n {
            break;
        }
        if hi >= lo && hi >= 2 {
            out.push((lo.max(2), hi, m));
        }
        num *= 4;
        den *= 3;
        if num > u128::MAX / 8 {
            break;
        }
    }
    out
}

// ---------------------------------------------------------------------------
// find_all
// ---------------------------------------------------------------------------

pub fn find_all(t: &[u8], p: &Pattern, config: &Config) -> MatchReport {
    let p_norm = normalize(p);
    let n = t.len();
    let r = p_norm.r();
    if n == 0 {
        return MatchReport::new(0, p_norm, config.min_sub_len, Vec::new());
    }
    if r == 1 {
        return find_plain(t, p_norm, config);
    }
    if r == 2 {
        return find_degenerate(t, p_norm, config);
    }

    let ctx = Ctx::new(t, &p_norm, config.min_sub_len);
    let mut singles: Vec<(usize, usize)> = Vec::new();

    // (c) short substitutions: beta in {0, 1}
    short_sweep(&ctx, &mut singles);

    // (d) per-scale anchors
    let bks = buckets(n);
    let max_beta = (n.saturating_sub(ctx.pre[r])) / (r - 1);
    let anchors: Vec<(usize, usize, usize, usize)> = bks
        .iter()
        .flat_map(|&(lo, hi, m)| {
            let mut qs: Vec<usize> = Vec::new();
            if lo <= max_beta {
                let mut q = 1;
                while q + m - 1 <= n {
                    qs.push(q);
                    q += m;
                }
                let off = m / 2 + 1;
                if off != 1 {
                    let mut q = off;
                    while q + m - 1 <= n {
                        qs.push(q);
                        q += m;
                    }
                }
            }
            qs.into_iter().map(move |q| (q, m, lo, hi))
        })
        .collect();

    let process_anchor = |&(q1, m, lo, hi): &(usize, usize, usize, usize)| -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let h2 = q1 + m - 1;
        match ctx.rix.substring_run(q1, h2) {
            None => anchor_nonperiodic::anchor_candidates(&ctx, q1, h2, lo, hi, &mut out),
            Some((d, run)) => {
                anchor_periodic::periodic_anchor_candidates(&ctx, q1, h2, d, run, lo, hi, &mut out)
            }
        }
        out
    };
    let anchor_results: Vec<Vec<(usize, usize)>> = run_parallel(config.threads, &anchors, process_anchor);
    for v in anchor_results {
        singles.extend(v);
    }

    // (e) run sweeps
    let runs: Vec<crate::runs::Run> = ctx.rix.runs().to_vec();
    let sweep_results: Vec<(Vec<InstanceFamily>, Vec<(usize, usize)>)> =
        run_parallel(config.threads, &runs, |run| {
            let mut fams = Vec::new();
            let mut sgl = Vec::new();
            anchor_periodic::sweep_run(&ctx, run, &mut fams, &mut sgl);
            fams.retain(|f| f.count > 0);
            (fams, sgl)
        });
    let mut families: Vec<InstanceFamily> = Vec::new();
    let mut sweep_singles: Vec<(usize, usize)> = Vec::new();
    for (f, s) in sweep_results {
        families.extend(f);
        sweep_singles.extend(s);
    }

    // (f) verification, ownership filtering, dedup, assembly
    let mut seen: HashSet<(usize, usize)> = HashSet::new();
    let mut kept: Vec<(usize, usize)> = Vec::new();
    for (start, beta) in singles {
        if beta < ctx.min_sub || !ctx.verify(start, beta) || ctx.sweep_owned(start, beta) {
            continue;
        }
        if seen.insert((start, beta)) {
            kept.push((start, beta));
        }
    }
    for (start, beta) in sweep_singles {
        debug_assert!(ctx.verify(start, beta), "sweep single ({start},{beta}) fails verification");
        if beta >= ctx.min_sub && seen.insert((start, beta)) {
            kept.push((start, beta));
        }
    }
    families.extend(compress_singletons(kept));
    MatchReport::new(n, ctx.p.clone(), config.min_sub_len, families)
}

fn run_parallel<T: Sync, R: Send>(threads: usize, items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    if threads <= 1 {
        items.iter().map(f).collect()
    } else {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("thread pool");
        pool.install(|| items.par_iter().map(|it| f(it)).collect())
    }
}

/// r = 1: plain substring search; occurrences reported with sub_len 0.
fn find_plain(t: &[u8], p: Pattern, config: &Config) -> MatchReport {
    let idx = build_index(t).expect("non-empty");
    let occ = idx.occurrences(&p.segments[0]);
    let positions: Vec<(usize, usize)> = occ
        .iter_positions()
        .filter(|&i| i <= t.len())
        .map(|i| (i, 0))
        .collect();
    let fams = compress_singletons(positions);
    MatchReport::new(t.len(), p, config.min_sub_len, fams)
}

/// r = 2 (p = s1 x s2): every occurrence of s1 followed by an occurrence of
/// s2 at distance >= min_sub_len.
fn find_degenerate(t: &[u8], p: Pattern, config: &Config) -> MatchReport {
    let idx = build_index(t).expect("non-empty");
    let occ1 = idx.occurrences(&p.segments[0]);
    let occ2 = idx.occurrences(&p.segments[1]);
    let n = t.len();
    let s1 = p.segments[0].len();
    let pos2: Vec<usize> = occ2.iter_positions().collect();
    // maximal arithmetic groups of occ2
    let mut groups: Vec<(usize, usize, usize)> = Vec::new(); // (first, step, count)
    let mut i = 0;
    while i < pos2.len() {
        if i + 1 == pos2.len() {
            groups.push((pos2[i], 0, 1));
            break;
        }
        let step = pos2[i + 1] - pos2[i];
        let mut j = i + 1;
        while j + 1 < pos2.len() && pos2[j + 1] - pos2[j] == step {
            j += 1;
        }
        groups.push((pos2[i], step, j - i + 1));
        i = j + 1;
    }
    let mut fams = Vec::new();
    for i1 in occ1.iter_positions() {
        if i1 > n {
            continue;
        }
        let jmin = i1 + s1 + config.min_sub_len;
        for &(first, step, count) in &groups {
            let last = first + step * (count - 1);
            if last < jmin {
                continue;
            }
            let skip = if first >= jmin || step == 0 {
                0
            } else {
                (jmin - first + step - 1) / step
            };
            if skip >= count {
                continue;
            }
            let f0 = first + skip * step;
            fams.push(InstanceFamily {
                start: i1 as u64,
                start_step: 0,
                sub_len: (f0 - i1 - s1) as u64,
                len_step: step as i64,
                count: (count - skip) as u64,
            });
        }
    }
    MatchReport::new(n, p, config.min_sub_len, fams)
}

/// beta in {0, 1}: direct occurrence-window intersection (plus equal-byte
/// checks for beta = 1).
fn short_sweep(ctx: &Ctx, out: &mut Vec<(usize, usize)>) {
    let n = ctx.n;
    let r = ctx.r();
    for beta in 0..=1usize {
        if beta < ctx.min_sub {
            continue;
        }
        let len = ctx.image_len(beta);
        if len == 0 {
            // all-empty pattern with empty substitution: matches everywhere
            for i in 1..=n {
                out.push((i, 0));
            }
            continue;
        }
        if len > n {
            continue;
        }
        let hi = (n - len + 1) as isize;
        let acc = ctx.occ_and(1, hi, beta);
        for b in acc.iter_ones() {
            let i = b + 1;
            if beta == 1 {
                let c = ctx.t[ctx.slot_pos(i, 1, 1) - 1];
                if !(2..r).all(|z| ctx.t[ctx.slot_pos(i, 1, z) - 1] == c) {
                    continue;
                }
            }
            out.push((i, beta));
        }
    }
}

/// Group (start, len) singleton instances into families: per sub_len, maximal
/// constant-stride start runs.
fn compress_singletons(mut v: Vec<(usize, usize)>) -> Vec<InstanceFamily> {
    v.sort_by_key(|&(s, l)| (l, s));
    v.dedup();
    let mut out = Vec::new();
    let mut i = 0;
    while i < v.len() {
        let (s0, l0) = v[i];
        let mut j = i;
        let mut step = 0usize;
        while j + 1 < v.len() && v[j + 1].1 == l0 {
            let d = v[j + 1].0 - v[j].0;
            if j == i {
                step = d;
            } else if d != step {
                break;
            }
            j += 1;
        }
        out.push(InstanceFamily {
            start: s0 as u64,
            start_step: if j > i { step as i64 } else { 0 },
            sub_len: l0 as u64,
            len_step: 0,
            count: (j - i + 1) as u64,
        });
        i = j + 1;
    }
    out
}

/// Spec-level verify entry point.
pub fn verify_instance(ctx: &Ctx, start: usize, sub_len: usize) -> bool {
    ctx.verify(start, sub_len)
}
