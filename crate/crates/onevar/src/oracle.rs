//! Reference matcher used as ground truth in the differential suites.
//!
//! Deliberately slow and simple: byte-by-byte comparisons only, sharing no
//! index machinery with the fast engine.

use crate::matcher::Instance;
use crate::pattern::Pattern;

/// All instances of `p` in `t`, sorted by (start, sub_len).
///
/// Variable-free patterns (r = 1) report each occurrence once with
/// `sub_len = 0`, matching the engine's plain-substring convention.
pub fn naive_find(t: &[u8], p: &Pattern, min_sub_len: usize) -> Vec<Instance> {
    let n = t.len();
    let mut out = Vec::new();
    let r = p.r();
    if r == 1 {
        let s = &p.segments[0];
        for i in 1..=n {
            if i + s.len() <= n + 1 && &t[i - 1..i - 1 + s.len()] == s.as_slice() {
                out.push(Instance { start: i, sub_len: 0 });
            }
        }
        return out;
    }
    let total: usize = p.total_segment_len();
    for start in 1..=n {
        let max_len = (n + 1 - start).saturating_sub(total) / (r - 1);
        for sub_len in min_sub_len..=max_len {
            if matches_at(t, p, start, sub_len) {
                out.push(Instance { start, sub_len });
            }
        }
    }
    out.sort();
    out
}

fn matches_at(t: &[u8], p: &Pattern, start: usize, sub_len: usize) -> bool {
    let mut pos = start - 1; // 0-based cursor
    let mut first_slot: Option<&[u8]> = None;
    for (z, seg) in p.segments.iter().enumerate() {
        if t[pos..].len() < seg.len() || &t[pos..pos + seg.len()] != seg.as_slice() {
            return false;
        }
        pos += seg.len();
        if z < p.directions.len() {
            if t[pos..].len() < sub_len {
                return false;
            }
            let slot = &t[pos..pos + sub_len];
            match first_slot {
                None => first_slot = Some(slot),
                Some(first) => {
                    let same_dir = p.directions[z] == p.directions[0];
                    let ok = if same_dir {
                        slot == first
                    } else {
                        slot.iter().eq(first.iter().rev())
                    };
                    if !ok {
                        return false;
                    }
                }
            }
            pos += sub_len;
        }
    }
    true
}
