//! Periodic-anchor machinery: period-break candidate positions, separations,
//! the three-or-more-runs driver, in-a-run instance families, the
//! `s1 x s2 ~x s3` special form, and the two-run driver.

use crate::anchor_nonperiodic::{anchor_candidates, fixed_len_starts};
use crate::bitvec::BitArray;
use crate::matcher::{Ctx, InstanceFamily};
use crate::pattern::Direction;
use crate::runs::Run;
use crate::text_index::IntIndex;

// ---------------------------------------------------------------------------
// small arithmetic helpers
// ---------------------------------------------------------------------------

fn egcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = egcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Solutions h mod d of k*h = c (mod d); at most gcd(k, d) residues.
fn solve_linear(k: i64, c: i64, d: i64) -> Vec<i64> {
    let (g, x, _) = egcd(k.rem_euclid(d).max(1), d);
    let g = g.max(1);
    if c.rem_euclid(d) % g != 0 {
        return Vec::new();
    }
    let d1 = d / g;
    let base = ((c.rem_euclid(d) / g) % d1 * x.rem_euclid(d1) % d1).rem_euclid(d1);
    (0..g).map(|i| (base + i * d1).rem_euclid(d)).collect()
}

/// Longest period-d prefix length of a byte string.
fn bytes_pref_d(s: &[u8], d: usize) -> usize {
    if s.len() <= d {
        return s.len();
    }
    let mut l = d;
    while l < s.len() && s[l] == s[l - d] {
        l += 1;
    }
    l
}

fn bytes_suff_d(s: &[u8], d: usize) -> usize {
    if s.len() <= d {
        return s.len();
    }
    let n = s.len();
    let mut l = d;
    while l < n && s[n - 1 - l] == s[n - 1 - l + d] {
        l += 1;
    }
    l
}

// ---------------------------------------------------------------------------
// Pattern-side lcp structure (for propwsw / separations)
// ---------------------------------------------------------------------------

/// lcp structure over s1 $ s2 $ ... $ s_r $ rev(s1) $ ... $ rev(s_r) with
/// distinct sentinels, so segment comparisons stop at segment ends.
pub struct PatLcp {
    int: IntIndex,
    /// 0-based start of s_z (1-based z) in the symbol string.
    off: Vec<usize>,
    /// 0-based start of rev(s_z).
    roff: Vec<usize>,
    seg_lens: Vec<usize>,
}

impl PatLcp {
    pub fn build(segments: &[Vec<u8>]) -> PatLcp {
        let r = segments.len();
        let mut sym: Vec<u32> = Vec::new();
        let mut off = vec![0usize; r + 1];
        let mut roff = vec![0usize; r + 1];
        for (i, s) in segments.iter().enumerate() {
            off[i + 1] = sym.len();
            sym.extend(s.iter().map(|&b| b as u32));
            sym.push(300 + i as u32);
        }
        for (i, s) in segments.iter().enumerate() {
            roff[i + 1] = sym.len();
            sym.extend(s.iter().rev().map(|&b| b as u32));
            sym.push(400 + i as u32);
        }
        PatLcp { int: IntIndex::build(&sym), off, roff, seg_lens: segments.iter().map(|s| s.len()).collect() }
    }

    fn lcp_at(&self, a: usize, b: usize) -> usize {
        if a == b {
            return usize::MAX / 2;
        }
        self.int.lcp0(a, b)
    }

    /// s_z has period d.
    pub fn seg_periodic(&self, z: usize, d: usize) -> bool {
        let l = self.seg_lens[z - 1];
        l <= d || self.lcp_at(self.off[z], self.off[z] + d) >= l - d
    }

    /// One of s_a and s_b (s_b reversed when `rev_b`) is a prefix of the other.
    pub fn prefix_comparable(&self, a: usize, b: usize, rev_b: bool) -> bool {
        let (la, lb) = (self.seg_lens[a - 1], self.seg_lens[b - 1]);
        let pb = if rev_b { self.roff[b] } else { self.off[b] };
        self.lcp_at(self.off[a], pb) >= la.min(lb)
    }
}

/// Equation propwsw: the standing compatibility test between two period-break
/// contexts of the same class.
pub fn propwsw(ctx: &Ctx, plcp: &PatLcp, z1: usize, z2: usize, d: usize) -> bool {
    let (l1, l2) = (ctx.seg_len(z1), ctx.seg_len(z2));
    if l1 % d != l2 % d {
        return false;
    }
    if !plcp.seg_periodic(z1, d) || !plcp.seg_periodic(z2, d) {
        return false;
    }
    // direction of the slot after the segment decides plain/reversed compare
    let rev = ctx.dir(z1) != ctx.dir(z2);
    plcp.prefix_comparable(z1, z2, rev)
}

/// Class of an interior segment index z in (1..r): directions of the
/// surrounding slots.
fn seg_class(ctx: &Ctx, z: usize) -> usize {
    use Direction::*;
    match (ctx.dir(z - 1), ctx.dir(z)) {
        (Forward, Forward) | (Reversed, Reversed) => 0,
        (Forward, Reversed) => 1,
        (Reversed, Forward) => 2,
    }
}

/// The (at most three) members of `members` satisfying eq. subz: the minimum,
/// the first propwsw breakpoint, and the first member with |s_z| >= d.
pub fn separation_candidates(ctx: &Ctx, plcp: &PatLcp, members: &[usize], d: usize) -> Vec<usize> {
    if members.is_empty() {
        return Vec::new();
    }
    let zp = members[0];
    // scan: maintain that members before the cursor are mutually compatible,
    // with the longest segment as representative
    let mut rep = zp;
    let mut zpp = None; // first breakpoint
    for &z in &members[1..] {
        if !propwsw(ctx, plcp, rep, z, d) {
            zpp = Some(z);
            break;
        }
        if ctx.seg_len(z) > ctx.seg_len(rep) {
            rep = z;
        }
    }
    let zppp = members
        .iter()
        .copied()
        .take_while(|&z| Some(z) != zpp)
        .find(|&z| ctx.seg_len(z) >= d);
    let mut cand: Vec<usize> = [Some(zp), zpp, zppp].into_iter().flatten().collect();
    cand.sort_unstable();
    cand.dedup();
    // keep only those genuinely satisfying eq. subz
    cand.retain(|&z| {
        let before: Vec<usize> = members.iter().copied().filter(|&x| x < z).collect();
        for (i, &a) in before.iter().enumerate() {
            for &b in &before[i + 1..] {
                if !propwsw(ctx, plcp, a, b, d) {
                    return false;
                }
            }
        }
        before
            .iter()
            .all(|&a| !propwsw(ctx, plcp, a, z, d) || (ctx.seg_len(a) < d && d <= ctx.seg_len(z)))
    });
    cand
}

/// All separations per class (pairs (z, z'), z <= z'), at most 12 per class.
pub fn separations(ctx: &Ctx, plcp: &PatLcp, d: usize) -> [Vec<(usize, usize)>; 3] {
    let r = ctx.r();
    let mut out: [Vec<(usize, usize)>; 3] = Default::default();
    for class in 0..3 {
        let members: Vec<usize> = (2..r).filter(|&z| seg_class(ctx, z) == class).collect();
        let firsts = separation_candidates(ctx, plcp, &members, d);
        let mut pairs: Vec<(usize, usize)> = firsts.iter().map(|&z| (z, z)).collect();
        for &z in &firsts {
            let rest: Vec<usize> = members.iter().copied().filter(|&x| x != z).collect();
            for zp in separation_candidates(ctx, plcp, &rest, d) {
                if zp > z {
                    pairs.push((z, zp));
                }
            }
        }
        pairs.sort_unstable();
        pairs.dedup();
        // definitional filter
        pairs.retain(|&(z, zp)| is_separation(ctx, plcp, &members, z, zp, d));
        out[class] = pairs;
    }
    out
}

/// Definition-based separation check within one class member list.
pub fn is_separation(
    ctx: &Ctx,
    plcp: &PatLcp,
    members: &[usize],
    z: usize,
    zp: usize,
    d: usize,
) -> bool {
    if !(members.contains(&z) && members.contains(&zp) && z <= zp) {
        return false;
    }
    let mid: Vec<usize> = members.iter().copied().filter(|&x| x < z || (x > z && x < zp)).collect();
    for (i, &a) in mid.iter().enumerate() {
        for &b in &mid[i + 1..] {
            if !propwsw(ctx, plcp, a, b, d) {
                return false;
            }
        }
    }
    for &a in &mid {
        for &b in [z, zp].iter() {
            if propwsw(ctx, plcp, a, b, d) && !(ctx.seg_len(a) < d && d <= ctx.seg_len(b)) {
                return false;
            }
        }
    }
    true
}

/// Break-candidate positions for `s` (of length s_len with period-d prefix
/// pref_len) placed after a period-d stretch ending at run end j: the wsw/wsw2
/// windows as an explicit set.
pub fn break_candidates(run: &Run, s_len: usize, pref_len: usize) -> Vec<usize> {
    let j = run.end;
    let d = run.period;
    let mut out: Vec<usize> = Vec::new();
    if j + 1 >= pref_len {
        out.push(j + 1 - pref_len);
    }
    for h in (j + 2).saturating_sub(d)..=j + 1 {
        out.push(h);
    }
    let hi = j.saturating_sub(s_len);
    for h in (hi + 1).saturating_sub(d)..=hi {
        if h >= 1 {
            out.push(h);
        }
    }
    out.sort_unstable();
    out.dedup();
    out.retain(|&h| h >= 1);
    out
}

// ---------------------------------------------------------------------------
// Possible |w| mod d values for in-run instances (Lemma wmodd)
// ---------------------------------------------------------------------------

/// Residues |w| mod d compatible with an in-run instance: one value when some
/// adjacent slot pair has equal directions, up to two from the mixed-pair
/// half-sum relation.  Empty when the constraints are contradictory.
pub fn w_mod_d(ctx: &Ctx, d: usize) -> Vec<usize> {
    let r = ctx.r();
    let mut same: Option<usize> = None;
    for z in 2..r {
        if ctx.dir(z - 1) == ctx.dir(z) {
            let v = (d - ctx.seg_len(z) % d) % d;
            match same {
                None => same = Some(v),
                Some(prev) if prev != v => return Vec::new(),
                _ => {}
            }
        }
    }
    if let Some(v) = same {
        return vec![v];
    }
    let zfr = (2..r).find(|&z| ctx.dir(z - 1) == Direction::Forward && ctx.dir(z) == Direction::Reversed);
    let zrf = (2..r).find(|&z| ctx.dir(z - 1) == Direction::Reversed && ctx.dir(z) == Direction::Forward);
    if let (Some(zf), Some(zr)) = (zfr, zrf) {
        let c = -(ctx.seg_len(zf) as i64 + ctx.seg_len(zr) as i64);
        let mut v: Vec<usize> = solve_linear(2, c, d as i64).into_iter().map(|x| x as usize).collect();
        v.sort_unstable();
        v.dedup();
        return v;
    }
    Vec::new()
}

// ---------------------------------------------------------------------------
// Dsubarray
// ---------------------------------------------------------------------------

/// Bit array over h in [b1..b2]: occurrence-window AND for the instance with
/// |w| = eta ending its slot chain at h-1 (s_r at h), with the congruence
/// gate eta = -|s_z| (mod d) for interior segments and zero-fill for
/// i + |s1| < run.start.
pub fn d_subarray(ctx: &Ctx, run: &Run, b1: usize, b2: usize, eta: usize) -> BitArray {
    let d = run.period;
    debug_assert_eq!(b2 - b1 + 1, d);
    let r = ctx.r();
    for z in 2..r {
        if (eta + ctx.seg_len(z)) % d != 0 {
            return BitArray::new(b2 - b1 + 1);
        }
    }
    let mut bits = occ_and_end_anchored(ctx, b1, b2, eta);
    // zero h where the middle would start left of the run
    let m = ctx.seg_span(2, r - 1);
    let min_h = run.start as i64 + m as i64 + ((r - 1) * eta) as i64;
    if min_h > b1 as i64 {
        let upto = ((min_h - b1 as i64) as usize).min(b2 - b1 + 1);
        bits.clear_range(0, upto).unwrap();
    }
    bits
}

/// AND of occurrence windows keyed by h = position of s_r: segment s_z sits
/// at h - |s_z..s_{r-1}| - (r-z)*eta.
fn occ_and_end_anchored(ctx: &Ctx, b1: usize, b2: usize, eta: usize) -> BitArray {
    let r = ctx.r();
    let width = b2 - b1 + 1;
    let mut acc = BitArray::ones(width);
    for z in 1..=r {
        let gamma = (ctx.seg_span(z, r - 1) + (r - z) * eta) as isize;
        let win = ctx.docc[z - 1].window(b1 as isize - gamma, b2 as isize - gamma);
        acc.and_shifted(&win, 0);
    }
    acc
}

// ---------------------------------------------------------------------------
// Family emission with endpoint verification
// ---------------------------------------------------------------------------

fn emit_family(
    ctx: &Ctx,
    fams: &mut Vec<InstanceFamily>,
    singles: &mut Vec<(usize, usize)>,
    start: usize,
    start_step: i64,
    sub_len: usize,
    len_step: i64,
    count: u64,
) {
    if count == 0 {
        return;
    }
    let fam = InstanceFamily {
        start: start as u64,
        start_step,
        sub_len: sub_len as u64,
        len_step,
        count,
    };
    let first = fam.member(0);
    let last = fam.member(count - 1);
    if ctx.verify(first.start, first.sub_len) && ctx.verify(last.start, last.sub_len) {
        fams.push(fam);
    } else {
        // Closure reasoning failed; fall back to explicit membership.
        debug_assert!(false, "family endpoints failed verification: {:?}", fam);
        for m in fam.iter() {
            if ctx.verify(m.start, m.sub_len) {
                singles.push((m.start, m.sub_len));
            }
        }
    }
}

// ---------------------------------------------------------------------------
// In-run machinery (general patterns)
// ---------------------------------------------------------------------------

/// Report of one in-run segment: decoded families plus boundary singles.
#[derive(Debug)]
pub struct InRunReport {
    pub e_bits: BitArray,
    pub families: Vec<InstanceFamily>,
    pub singles: Vec<(usize, usize)>,
}

/// All in-run instances (middle inside `run`, |w| >= 3d, |w| = delta (mod d))
/// whose slot chain ends at h-1 with h in [b1..b2].
pub fn in_run_segment(ctx: &Ctx, run: &Run, delta: usize, b1: usize, b2: usize) -> InRunReport {
    let d = run.period;
    let r = ctx.r();
    let base = 3 * d + delta;
    let s_all = ctx.seg_span(1, r - 1);
    let m_mid = ctx.seg_span(2, r - 1);
    let mut rep = InRunReport {
        e_bits: BitArray::new(b2 - b1 + 1),
        families: Vec::new(),
        singles: Vec::new(),
    };
    let mixed = (1..r).any(|z| ctx.dir(z) == Direction::Reversed);

    let mut e_hits: Vec<usize> = Vec::new();
    if !mixed {
        let bits = d_subarray(ctx, run, b1, b2, base);
        e_hits.extend(bits.iter_ones().map(|i| b1 + i));
        rep.e_bits = bits;
    } else {
        for h in mixed_candidate_hs(ctx, run, delta, b1, b2) {
            let i0 = h as i64 - s_all as i64 - ((r - 1) * base) as i64;
            if i0 >= run.start as i64 && ctx.verify(i0 as usize, base) {
                e_hits.push(h);
                rep.e_bits.set(h - b1, true);
            }
        }
    }
    for h in e_hits {
        let i0 = h - s_all - (r - 1) * base;
        let c_max = (i0 - run.start) / ((r - 1) * d);
        emit_family(
            ctx,
            &mut rep.families,
            &mut rep.singles,
            i0,
            -(((r - 1) * d) as i64),
            base,
            d as i64,
            (c_max + 1) as u64,
        );
    }

    // F: instances with i < run.start <= i + |s1| (the s1 window crosses the
    // left run boundary); the maximal |w| keeping the middle inside pins one
    // candidate per h.
    let f_hs: Vec<usize> = if !mixed {
        (b1..=b2).collect()
    } else {
        mixed_candidate_hs(ctx, run, delta, b1, b2)
    };
    for h in f_hs {
        let num = h as i64 - m_mid as i64 - ((r - 1) * base) as i64 - run.start as i64;
        if num < 0 {
            continue;
        }
        let a = num as usize / ((r - 1) * d);
        let y = base + a * d;
        let i = h as i64 - s_all as i64 - ((r - 1) * y) as i64;
        if i >= 1 && (i as usize) < run.start && ctx.verify(i as usize, y) {
            rep.singles.push((i as usize, y));
        }
    }

    // extra: i + |s1| = run.start + |suff_d(s1)| (s1's periodic suffix aligns
    // with the run start)
    let suff1 = bytes_suff_d(&ctx.p.segments[0], d);
    if suff1 < ctx.seg_len(1) {
        let target = (run.start + suff1 + m_mid) as i64;
        // h = target + (r-1)*y, y = delta (mod d): solve h in [b1..b2]
        for h in b1..=b2 {
            let num = h as i64 - target;
            if num < 0 || num % (r - 1) as i64 != 0 {
                continue;
            }
            let y = (num / (r - 1) as i64) as usize;
            if y % d != delta % d || y < 3 * d {
                continue;
            }
            let i = run.start as i64 + suff1 as i64 - ctx.seg_len(1) as i64;
            if i >= 1 && ctx.verify(i as usize, y) {
                rep.singles.push((i as usize, y));
            }
        }
    }
    rep
}

/// For mixed-direction patterns, the at-most-two positions h in [b1..b2]
/// whose preceding d-window admits the palindrome-pair split forced by the
/// pattern (plus a scan-based double check in debug builds).
fn mixed_candidate_hs(ctx: &Ctx, run: &Run, delta: usize, b1: usize, b2: usize) -> Vec<usize> {
    let d = run.period;
    let r = ctx.r();
    let zrev = (1..r).find(|&z| ctx.dir(z) == Direction::Reversed).unwrap();
    let u_base = ctx.seg_len(zrev) % d;
    let target = if ctx.dir(r - 1) == Direction::Forward {
        u_base
    } else {
        (2 * d - u_base - 2 * (delta % d)) % d
    };
    let lo = b1.max(run.start + d);
    if lo > b2 {
        return Vec::new();
    }
    let refp = ctx.pal.pal_pair_decompose(b2 - d, b2 - 1);
    let mut out = Vec::new();
    if let Some((u_ref, _)) = refp {
        // |u'(h)| = (u_ref - 2 (h - b2)) mod d = target  =>  2h = 2 b2 + u_ref - target (mod d)
        let c = 2 * b2 as i64 + u_ref as i64 - target as i64;
        for hres in solve_linear(2, c, d as i64) {
            // smallest h >= lo with h = hres (mod d)
            let mut h = lo as i64 + (hres - lo as i64).rem_euclid(d as i64);
            while h <= b2 as i64 {
                out.push(h as usize);
                h += d as i64;
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    #[cfg(debug_assertions)]
    {
        // the pal pinning must be a superset of actual instance end positions
        let base = 3 * d + delta;
        let s_all = ctx.seg_span(1, r - 1);
        for h in lo..=b2 {
            let i0 = h as i64 - s_all as i64 - ((r - 1) * base) as i64;
            if i0 >= run.start as i64 && ctx.verify(i0 as usize, base) {
                debug_assert!(out.contains(&h), "pal pinning missed h={} run={:?}", h, run);
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Special shape p = s1 x s2 ~x s3
// ---------------------------------------------------------------------------

/// Instances s1 w s2 rev(w) s3 with w in run1 ending at h-1, rev(w) in run2
/// starting at h+|s2|, and y = |w| >= 3d; h is the start of s2.
fn special_ys(
    ctx: &Ctx,
    run1: &Run,
    run2: &Run,
    h: usize,
    fams: &mut Vec<InstanceFamily>,
    singles: &mut Vec<(usize, usize)>,
) {
    let d = run1.period;
    let n = ctx.n;
    let (s1, s2, s3) = (ctx.seg_len(1), ctx.seg_len(2), ctx.seg_len(3));
    if !ctx.docc[1].get(h) {
        return;
    }
    if h < run1.start || h + s2 < run2.start || h + s2 > run2.end + 1 {
        return;
    }
    let ylo = 3 * d;
    let mut yhi = (h - run1.start).min(run2.end + 1 - h - s2);
    if h >= 2 && h + s2 <= n {
        yhi = yhi.min(ctx.idx.rev_match_len(h + s2, h - 1));
    } else if s2 == 0 && h >= 2 && h <= n {
        yhi = yhi.min(ctx.idx.rev_match_len(h, h - 1));
    } else {
        return;
    }
    if ylo > yhi {
        return;
    }
    // stability bounds: the s1 window must sit inside run1 and the s3 window
    // inside run2 for bit values to be d-periodic in y
    let stable1 = (h as i64 - s1 as i64 - run1.start as i64).max(0) as usize; // y <= this
    let stable3 = (run2.end as i64 + 1 - h as i64 - s2 as i64 - s3 as i64).max(0) as usize;
    let stable = stable1.min(stable3).min(yhi);

    let d1_bit = |y: usize| -> bool {
        let g = h as i64 - s1 as i64 - y as i64;
        g >= 1 && ctx.docc[0].get(g as usize)
    };
    let d3_bit = |y: usize| -> bool { ctx.docc[2].get(h + s2 + y) };

    // interior families: one residue class per set phase
    if ylo <= stable {
        let top = stable;
        let lo_probe = if top >= ylo + d - 1 { top - d + 1 } else { ylo };
        for y0 in lo_probe..=top {
            if d1_bit(y0) && d3_bit(y0) {
                // family over y = y0, y0-d, ..., >= ylo
                let count = (y0 - ylo) / d + 1;
                emit_family(
                    ctx,
                    fams,
                    singles,
                    h - s1 - y0,
                    d as i64,
                    y0,
                    -(d as i64),
                    count as u64,
                );
            }
        }
    }
    // boundary: y beyond a stability bound, scanned directly
    for y in stable.max(ylo.saturating_sub(1)) + 1..=yhi {
        if y >= ylo && d1_bit(y) && d3_bit(y) {
            let i = h - s1 - y;
            if ctx.verify(i, y) {
                singles.push((i, y));
            }
        }
    }
}

/// In-run and two-run drivers for the special shape.
fn special_driver(ctx: &Ctx, run: &Run, fams: &mut Vec<InstanceFamily>, singles: &mut Vec<(usize, usize)>) {
    let d = run.period;
    let n = ctx.n;
    let s2 = ctx.seg_len(2);
    // in-run: h sweeps all width-d segments; candidates via pal pinning
    let u_target = s2 % d;
    let f = (run.end + 1 - run.start) / d;
    for b in 1..=f {
        let b2 = run.end + 1 - (b - 1) * d;
        let b1 = b2 + 1 - d;
        let lo = b1.max(run.start + d);
        if lo > b2 {
            continue;
        }
        if let Some((u_ref, _)) = ctx.pal.pal_pair_decompose(b2 - d, b2 - 1) {
            let c = 2 * b2 as i64 + u_ref as i64 - u_target as i64;
            for hres in solve_linear(2, c, d as i64) {
                let mut h = lo as i64 + (hres - lo as i64).rem_euclid(d as i64);
                while h <= b2 as i64 {
                    special_ys(ctx, run, run, h as usize, fams, singles);
                    h += d as i64;
                }
            }
        }
        #[cfg(debug_assertions)]
        {
            // pal pinning must cover every in-run instance center
            for h in lo..=b2 {
                if ctx.docc[1].get(h) && h >= 3 * d + 1 {
                    let y = 3 * d;
                    if h >= ctx.seg_len(1) + y {
                        let i = h - ctx.seg_len(1) - y;
                        if i >= run.start
                            && h + s2 + y - 1 <= run.end
                            && ctx.verify(i, y)
                        {
                            let dec = ctx.pal.pal_pair_decompose(b2 - d, b2 - 1);
                            let ok = dec.map_or(false, |(u_ref, _)| {
                                (2 * h as i64 - (2 * b2 as i64 + u_ref as i64 - u_target as i64))
                                    .rem_euclid(d as i64)
                                    == 0
                            });
                            debug_assert!(ok, "special pal pinning missed h={}", h);
                        }
                    }
                }
            }
        }
    }
    // two-run: h near the run end, rev(w) in another run
    let pref2 = bytes_pref_d(&ctx.p.segments[1], d);
    let mut hs: Vec<usize> = Vec::new();
    for h in (run.end + 2).saturating_sub(d)..=run.end + 1 {
        hs.push(h);
    }
    let hi = run.end.saturating_sub(s2);
    for h in (hi + 1).saturating_sub(d)..=hi {
        hs.push(h);
    }
    if run.end + 1 >= pref2 {
        hs.push(run.end + 1 - pref2);
    }
    hs.sort_unstable();
    hs.dedup();
    for h in hs {
        if h < 1 || h > n + 1 {
            continue;
        }
        // probe for the second run
        let probe_lo = h + s2;
        let probe_hi = probe_lo + 2 * d - 1;
        if probe_lo < 1 || probe_hi > n {
            continue;
        }
        let run2 = match ctx.rix.substring_run(probe_lo, probe_hi) {
            Some((d2, r2)) if d2 == d => r2,
            _ => continue,
        };
        if run2 == *run {
            continue; // in-run case already handled
        }
        special_ys(ctx, run, &run2, h, fams, singles);
    }
}

// ---------------------------------------------------------------------------
// Two-run driver (general patterns)
// ---------------------------------------------------------------------------

/// Verify the slots z_from..z_to-1 and segments z_from..z_to of a candidate
/// instance chain against slot z_from (partial-instance check).
fn verify_span(ctx: &Ctx, start: usize, y: usize, z_from: usize, z_to: usize) -> bool {
    for z in z_from..=z_to {
        if !ctx.docc[z - 1].get(ctx.seg_pos(start, y, z)) {
            return false;
        }
    }
    if y == 0 {
        return true;
    }
    let a0 = ctx.slot_pos(start, y, z_from);
    for z in z_from + 1..z_to {
        let az = ctx.slot_pos(start, y, z);
        let ok = if ctx.dir(z) == ctx.dir(z_from) {
            ctx.idx.substr_eq(a0, az, y)
        } else {
            ctx.idx.substr_eq_rev(a0, az + y - 1, y)
        };
        if !ok {
            return false;
        }
    }
    true
}

fn two_run_driver(ctx: &Ctx, run: &Run, fams: &mut Vec<InstanceFamily>, singles: &mut Vec<(usize, usize)>) {
    let r = ctx.r();
    let d = run.period;
    let n = ctx.n;
    for zb in 2..r {
        // s_zb breaks: slots 1..zb-1 in `run`, slots zb..r-1 in run2
        let s = ctx.seg_len(zb);
        let prefs = bytes_pref_d(&ctx.p.segments[zb - 1], d);
        // candidate h windows (start of s_zb) and their run2 probes
        let mut window_cases: Vec<(usize, usize, usize)> = Vec::new(); // (h_lo, h_hi, probe_lo)
        window_cases.push(((run.end + 2).saturating_sub(d).max(1), run.end + 1, run.end + s + 1));
        if run.end >= s + 1 {
            let hi = run.end - s;
            window_cases.push(((hi + 1).saturating_sub(d).max(1), hi, run.end));
        }
        if run.end + 1 >= prefs && prefs < s {
            let h = run.end + 1 - prefs;
            window_cases.push((h, h, h + s));
        }
        for (h_lo, h_hi, probe_lo) in window_cases {
            if h_lo > h_hi {
                continue;
            }
            let probe_hi = probe_lo + 2 * d - 1;
            if probe_lo < 1 || probe_hi > n {
                continue;
            }
            let run2 = match ctx.rix.substring_run(probe_lo, probe_hi) {
                Some((d2, r2)) if d2 == d => r2,
                _ => continue,
            };
            if run2 == *run {
                continue;
            }
            for delta in two_run_deltas(ctx, run, &run2, zb, d) {
                two_run_window(ctx, run, &run2, zb, delta, h_lo, h_hi, fams, singles);
            }
        }
    }
}

/// |w| mod d candidates for a two-run instance split at segment zb.
fn two_run_deltas(ctx: &Ctx, run1: &Run, run2: &Run, zb: usize, d: usize) -> Vec<usize> {
    let r = ctx.r();
    let mut same: Option<usize> = None;
    let mut consistent = true;
    for z in 2..r {
        if z != zb && ctx.dir(z - 1) == ctx.dir(z) {
            let v = (d - ctx.seg_len(z) % d) % d;
            match same {
                None => same = Some(v),
                Some(prev) if prev != v => consistent = false,
                _ => {}
            }
        }
    }
    if !consistent {
        return Vec::new();
    }
    if let Some(v) = same {
        return vec![v];
    }
    let zfr = (2..r).find(|&z| {
        z != zb && ctx.dir(z - 1) == Direction::Forward && ctx.dir(z) == Direction::Reversed
    });
    let zrf = (2..r).find(|&z| {
        z != zb && ctx.dir(z - 1) == Direction::Reversed && ctx.dir(z) == Direction::Forward
    });
    if let (Some(zf), Some(zr)) = (zfr, zrf) {
        let c = -(ctx.seg_len(zf) as i64 + ctx.seg_len(zr) as i64);
        return solve_linear(2, c, d as i64).into_iter().map(|x| x as usize).collect();
    }
    // Lyndon fallback: same-direction slot pair straddling the break
    let mut best: Option<(usize, usize)> = None;
    for zl in 1..zb {
        for zrr in zb..r {
            if ctx.dir(zl) == ctx.dir(zrr) {
                let gap = zrr - zl;
                if best.map_or(true, |(a, b)| b - a > gap) {
                    best = Some((zl, zrr));
                }
            }
        }
    }
    if let Some((zl, zrr)) = best {
        let l1 = ctx.rix.lyndon_root(run1) as i64;
        let l2 = ctx.rix.lyndon_root(run2) as i64;
        let c = l2 - l1 - ctx.seg_span(zl + 1, zrr) as i64;
        return solve_linear((zrr - zl) as i64, c, d as i64)
            .into_iter()
            .map(|x| x as usize)
            .collect();
    }
    Vec::new()
}

#[allow(clippy::too_many_arguments)]
fn two_run_window(
    ctx: &Ctx,
    run1: &Run,
    run2: &Run,
    zb: usize,
    delta: usize,
    h_lo: usize,
    h_hi: usize,
    fams: &mut Vec<InstanceFamily>,
    singles: &mut Vec<(usize, usize)>,
) {
    let r = ctx.r();
    let d = run1.period;
    let base = 3 * d + delta;
    let s = ctx.seg_len(zb);
    let left_vars = zb - 1;
    let right_vars = r - zb;
    let left_span = ctx.seg_span(1, zb - 1);
    let right_mid_span = ctx.seg_span(zb + 1, r - 1);
    for h in h_lo..=h_hi {
        if !ctx.docc[zb - 1].get(h) {
            continue;
        }
        let g = h + s; // start of slot zb
        // fully-inside members at y = base
        let i0 = h as i64 - left_span as i64 - (left_vars * base) as i64;
        let e0 = g as i64 + (right_vars * base) as i64 + right_mid_span as i64 - 1;
        let left_ok = i0 >= run1.start as i64
            && verify_span(ctx, i0 as usize, base, 1, zb - 1)
            && slots_consistent_left(ctx, i0 as usize, base, zb);
        let right_ok = e0 <= run2.end as i64
            && g >= run2.start
            && right_side_ok(ctx, i0, base, g, zb);
        let sync_ok = sync_check(ctx, h, g, base, zb, d);
        if left_ok && right_ok && sync_ok {
            let c_left = (i0 as usize - run1.start) / (left_vars * d);
            let c_right = (run2.end - e0 as usize) / (right_vars * d);
            let c_max = c_left.min(c_right);
            emit_family(
                ctx,
                fams,
                singles,
                i0 as usize - 0,
                -((left_vars * d) as i64),
                base,
                d as i64,
                (c_max + 1) as u64,
            );
        }
        // boundary pins: left F (s1 crossing run1.start)
        let num = h as i64 - ctx.seg_span(2, zb - 1) as i64 - (left_vars * base) as i64 - run1.start as i64;
        if num >= 0 {
            let a = num as usize / (left_vars * d);
            let y = base + a * d;
            let i = h as i64 - left_span as i64 - (left_vars * y) as i64;
            if i >= 1 && (i as usize) < run1.start && ctx.verify(i as usize, y) {
                singles.push((i as usize, y));
            }
        }
        // left suff-extra
        let suff1 = bytes_suff_d(&ctx.p.segments[0], d);
        if suff1 < ctx.seg_len(1) {
            let num = h as i64 - (run1.start + suff1) as i64 - ctx.seg_span(2, zb - 1) as i64;
            if num >= 0 && num % left_vars as i64 == 0 {
                let y = (num / left_vars as i64) as usize;
                let i = (run1.start + suff1) as i64 - ctx.seg_len(1) as i64;
                if y >= 3 * d && i >= 1 && ctx.verify(i as usize, y) {
                    singles.push((i as usize, y));
                }
            }
        }
        // right F (s_r crossing run2.end): largest y with chain end <= run2.end
        let cap = run2.end as i64 - g as i64 + 1 - right_mid_span as i64;
        if cap >= (right_vars * base) as i64 {
            let a = (cap as usize - right_vars * base) / (right_vars * d);
            let y = base + (a + 1) * d; // first y past the inside range
            let i = h as i64 - left_span as i64 - (left_vars * y) as i64;
            if i >= 1 && ctx.verify(i as usize, y) {
                singles.push((i as usize, y));
            }
        }
        // right pref-extra: s_r's periodic prefix aligned with run2.end
        let prefr = bytes_pref_d(&ctx.p.segments[r - 1], d);
        if prefr < ctx.seg_len(r) {
            let num = run2.end as i64 - prefr as i64 + 1 - g as i64 - right_mid_span as i64;
            if num >= 0 && num % right_vars as i64 == 0 {
                let y = (num / right_vars as i64) as usize;
                let i = h as i64 - left_span as i64 - (left_vars * y) as i64;
                if y >= 3 * d && i >= 1 && ctx.verify(i as usize, y) {
                    singles.push((i as usize, y));
                }
            }
        }
    }
}

/// slots 1..zb-1 mutually consistent (w.r.t. slot 1) — segment bits are
/// checked separately.
fn slots_consistent_left(ctx: &Ctx, start: usize, y: usize, zb: usize) -> bool {
    let a1 = ctx.slot_pos(start, y, 1);
    for z in 2..zb {
        let az = ctx.slot_pos(start, y, z);
        let ok = if ctx.dir(z) == ctx.dir(1) {
            ctx.idx.substr_eq(a1, az, y)
        } else {
            ctx.idx.substr_eq_rev(a1, az + y - 1, y)
        };
        if !ok {
            return false;
        }
    }
    true
}

/// right part: segments zb+1..r occur and slots zb..r-1 are mutually
/// consistent with slot zb.
fn right_side_ok(ctx: &Ctx, i0: i64, y: usize, g: usize, zb: usize) -> bool {
    let r = ctx.r();
    let start = i0; // only used for absolute positions via g
    let _ = start;
    for z in zb + 1..=r {
        let pos = g as i64 + y as i64 + ctx.seg_span(zb + 1, z - 1) as i64 + ((z - 1 - zb) * y) as i64;
        if pos < 1 || !ctx.docc[z - 1].get(pos as usize) {
            return false;
        }
    }
    for z in zb + 1..r {
        let az = g + ctx.seg_span(zb + 1, z) + (z - zb) * y;
        let ok = if ctx.dir(z) == ctx.dir(zb) {
            ctx.idx.substr_eq(g, az, y)
        } else {
            ctx.idx.substr_eq_rev(g, az + y - 1, y)
        };
        if !ok {
            return false;
        }
    }
    true
}

/// Cross-run synchronization between slot zb-1 (ending at h-1 in run1) and
/// slot zb (starting at g in run2), phase-adjusted to the member y = base.
fn sync_check(ctx: &Ctx, h: usize, g: usize, base: usize, zb: usize, d: usize) -> bool {
    if h <= base {
        return false;
    }
    let a = h - base; // start of slot zb-1 at the base member
    if ctx.dir(zb - 1) == ctx.dir(zb) {
        ctx.idx.substr_eq(a, g, d.min(base))
    } else {
        // first d of slot zb must be the reversal of the last d of slot zb-1
        ctx.idx.substr_eq_rev(g, h - 1, d.min(base))
    }
}

// ---------------------------------------------------------------------------
// Per-run sweep entry point
// ---------------------------------------------------------------------------

pub fn sweep_run(ctx: &Ctx, run: &Run, fams: &mut Vec<InstanceFamily>, singles: &mut Vec<(usize, usize)>) {
    let r = ctx.r();
    if r < 3 {
        return;
    }
    let d = run.period;
    let special = r == 3 && ctx.dir(2) == Direction::Reversed;
    // quick gate: the middle needs (r-1)*3d + |s2..s_{r-1}| positions in-run
    let need = (r - 1) * 3 * d + ctx.seg_span(2, r - 1);
    if special {
        if need <= run.len() {
            special_driver(ctx, run, fams, singles);
        } else {
            // two-run part may still apply with shorter left parts
            special_driver(ctx, run, fams, singles);
        }
    } else {
        if need <= run.len() {
            for delta in w_mod_d(ctx, d) {
                let f = run.len() / d;
                for b in 1..=f {
                    let b2 = run.end + 1 - (b - 1) * d;
                    let b1 = b2 + 1 - d;
                    let rep = in_run_segment(ctx, run, delta, b1, b2);
                    fams.extend(rep.families);
                    singles.extend(rep.singles);
                }
            }
        }
        two_run_driver(ctx, run, fams, singles);
    }
}

// ---------------------------------------------------------------------------
// Per-anchor driver for periodic v
// ---------------------------------------------------------------------------

/// Candidates for instances whose first slot contains the periodic anchor v:
/// either the slot is not d-periodic (route the period-break extension of v
/// through the non-periodic machinery) or it spans three or more runs (the
/// separations driver).  One- and two-run instances are owned by the sweeps.
#[allow(clippy::too_many_arguments)]
pub fn periodic_anchor_candidates(
    ctx: &Ctx,
    h1: usize,
    h2: usize,
    d: usize,
    run: Run,
    blo: usize,
    bhi: usize,
    out: &mut Vec<(usize, usize)>,
) {
    let n = ctx.n;
    // (a) first slot not d-periodic: it must contain v' = t[h1..run.end+1] or
    // v'' = t[run.start-1..h2] (both non-periodic)
    if run.end + 1 <= n {
        let ve = run.end + 1;
        if ve - h1 + 1 <= 2 * bhi {
            anchor_candidates(ctx, h1, ve, blo, bhi, out);
        }
    }
    if run.start >= 2 {
        let vs = run.start - 1;
        if h2 - vs + 1 <= 2 * bhi {
            anchor_candidates(ctx, vs, h2, blo, bhi, out);
        }
    }
    // (b) three or more runs: separations
    separate_driver(ctx, h1, h2, d, &run, blo, bhi, out);
}

/// The three-or-more-runs driver: candidate break pairs from the separation
/// candidates, break positions from the wsw/wsw2 windows, and substitution
/// lengths from the congruence case analysis; every candidate beta goes
/// through the fixed-length extraction around the anchor.
#[allow(clippy::too_many_arguments)]
fn separate_driver(
    ctx: &Ctx,
    h1: usize,
    h2: usize,
    d: usize,
    run1: &Run,
    blo: usize,
    bhi: usize,
    out: &mut Vec<(usize, usize)>,
) {
    let r = ctx.r();
    if r < 4 {
        return; // at least three runs need at least three slots
    }
    let n = ctx.n;
    let vlen = h2 - h1 + 1;
    let plcp = PatLcp::build(&ctx.p.segments);
    let seps = separations(ctx, &plcp, d);
    let mut members: Vec<usize> = seps.iter().flatten().flat_map(|&(a, b)| [a, b]).collect();
    members.sort_unstable();
    members.dedup();
    let mut betas: Vec<usize> = Vec::new();
    for (ia, &za) in members.iter().enumerate() {
        for &zbb in &members[ia..] {
            if za >= zbb || zbb >= r {
                continue;
            }
            collect_pair_betas(ctx, d, run1, za, zbb, &mut betas);
        }
    }
    betas.sort_unstable();
    betas.dedup();
    for beta in betas {
        if beta >= blo && beta <= bhi && beta >= vlen && beta <= n {
            for start in fixed_len_starts(ctx, h1, h2, beta) {
                out.push((start, beta));
            }
        }
    }
}

/// wsw2 windows for the break segment s_z after a run ending at j, including
/// the periodic-prefix singleton; returns (h_lo, h_hi, probe_lo) cases.
fn wsw2_windows(ctx: &Ctx, z: usize, run: &Run) -> Vec<(usize, usize, usize)> {
    let d = run.period;
    let j = run.end;
    let s = ctx.seg_len(z);
    let prefs = bytes_pref_d(&ctx.p.segments[z - 1], d);
    let mut out = Vec::new();
    out.push(((j + 2).saturating_sub(d).max(1), j + 1, j + s + 1));
    if j >= s + 1 {
        let hi = j - s;
        out.push(((hi + 1).saturating_sub(d).max(1), hi, j));
    }
    if j + 1 >= prefs && prefs < s {
        let h = j + 1 - prefs;
        out.push((h, h, h + s));
    }
    out
}

/// Possible substitution lengths for instances whose first two period breaks
/// are at segments za < zbb (three-or-more-runs case).
fn collect_pair_betas(ctx: &Ctx, d: usize, run1: &Run, za: usize, zbb: usize, betas: &mut Vec<usize>) {
    let n = ctx.n;
    let span = ctx.seg_span(za, zbb - 1) as i64;
    let k = (zbb - za) as i64;
    let push = |betas: &mut Vec<usize>, dd: i64| {
        let num = dd - span;
        if num > 0 && num % k == 0 {
            betas.push((num / k) as usize);
        }
    };
    for (h_lo, h_hi, probe_lo) in wsw2_windows(ctx, za, run1) {
        if h_lo > h_hi {
            continue;
        }
        let probe_hi = probe_lo + 2 * d - 1;
        if probe_lo < 1 || probe_hi > n {
            continue;
        }
        let run2 = match ctx.rix.substring_run(probe_lo, probe_hi) {
            Some((d2, r2)) if d2 == d => r2,
            _ => continue,
        };
        for (hp_lo, hp_hi, probep_lo) in wsw2_windows(ctx, zbb, &run2) {
            if hp_lo > hp_hi {
                continue;
            }
            let da = ctx.dir(za - 1);
            let db = ctx.dir(zbb - 1);
            if da == db {
                // case A: h' - h = l(run2) - l(run1) (mod d)
                let c = ctx.rix.lyndon_root(&run2) as i64 - ctx.rix.lyndon_root(run1) as i64;
                for dd in cong_in_range(
                    hp_lo as i64 - h_hi as i64,
                    hp_hi as i64 - h_lo as i64,
                    c,
                    d as i64,
                ) {
                    push(betas, dd);
                }
                continue;
            }
            // need the run of slot zbb: probe beyond s_zbb
            let probep_hi = probep_lo + 2 * d - 1;
            if probep_lo < 1 || probep_hi > n {
                continue;
            }
            let run3 = match ctx.rix.substring_run(probep_lo, probep_hi) {
                Some((d3, r3)) if d3 == d => r3,
                _ => continue,
            };
            let qa = ctx.dir(za);
            let qb = ctx.dir(zbb);
            if qa == qb {
                // case B: via slot starts h0 = h + |s_za| - 1 + 1 etc.
                let c = ctx.rix.lyndon_root(&run3) as i64 - ctx.rix.lyndon_root(&run2) as i64;
                let shift = ctx.seg_len(zbb) as i64 - ctx.seg_len(za) as i64;
                for dd0 in cong_in_range(
                    hp_lo as i64 + shift - h_hi as i64,
                    hp_hi as i64 + shift - h_lo as i64,
                    c,
                    d as i64,
                ) {
                    push(betas, dd0 - shift);
                }
            } else if ctx.dir(za - 1) != ctx.dir(za) {
                // case C1: both breaks have mixed surrounding directions;
                // h and h' are pinned separately by reversal congruences
                let ch = ctx.rix.lyndon_root(run1) as i64
                    + ctx.rix.reversed_lyndon_root(&run2) as i64
                    + 1
                    - ctx.seg_len(za) as i64;
                let chp = ctx.rix.lyndon_root(&run2) as i64
                    + ctx.rix.reversed_lyndon_root(&run3) as i64
                    + 1
                    - ctx.seg_len(zbb) as i64;
                let hs = pins_in_range(h_lo, h_hi, ch, d);
                let hps = pins_in_range(hp_lo, hp_hi, chp, d);
                for &h in &hs {
                    for &hp in &hps {
                        push(betas, hp as i64 - h as i64);
                    }
                }
            } else {
                // case C2: (same,same) with opposite directions across the
                // breaks; pal-pair pinning for h, coupled scan for h'
                let zmid = (za + 1..zbb)
                    .find(|&z| ctx.dir(z - 1) == Direction::Forward && ctx.dir(z) == Direction::Reversed)
                    .or_else(|| {
                        (za + 1..zbb).find(|&z| {
                            ctx.dir(z - 1) == Direction::Reversed && ctx.dir(z) == Direction::Forward
                        })
                    });
                let Some(zmid) = zmid else { continue };
                let u_base = ctx.seg_len(zmid) % d;
                let hs = pal_pins_in_range(ctx, run1, h_lo, h_hi, u_base);
                for &h in &hs {
                    for hp in hp_lo..=hp_hi {
                        let dd = hp as i64 - h as i64;
                        let num = dd - span;
                        if num > 0 && num % k == 0 {
                            betas.push((num / k) as usize);
                        }
                    }
                }
            }
        }
    }
}

/// Values v in [lo..hi] with v = c (mod d).
fn cong_in_range(lo: i64, hi: i64, c: i64, d: i64) -> Vec<i64> {
    if lo > hi {
        return Vec::new();
    }
    let first = lo + (c - lo).rem_euclid(d);
    let mut out = Vec::new();
    let mut v = first;
    while v <= hi {
        out.push(v);
        v += d;
    }
    out
}

/// h in [lo..hi] with 2h = c (mod d).
fn pins_in_range(lo: usize, hi: usize, c: i64, d: usize) -> Vec<usize> {
    let mut out = Vec::new();
    for res in solve_linear(2, c, d as i64) {
        let mut h = lo as i64 + (res - lo as i64).rem_euclid(d as i64);
        while h <= hi as i64 {
            out.push(h as usize);
            h += d as i64;
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// h in [lo..hi] whose preceding d-window splits as u'v' with |u'| = target.
fn pal_pins_in_range(ctx: &Ctx, run: &Run, lo: usize, hi: usize, target: usize) -> Vec<usize> {
    let d = run.period;
    let lo = lo.max(run.start + d);
    if lo > hi {
        return Vec::new();
    }
    let hi_c = hi.min(run.end + 1);
    if lo > hi_c {
        return Vec::new();
    }
    match ctx.pal.pal_pair_decompose(hi_c - d, hi_c - 1) {
        None => Vec::new(),
        Some((u_ref, _)) => {
            let c = 2 * hi_c as i64 + u_ref as i64 - target as i64;
            pins_in_range(lo, hi_c, c, d)
        }
    }
}
