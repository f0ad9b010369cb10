//! Pattern data model, textual syntax, normalization and image-length
//! arithmetic.
//!
//! Syntax: `{x}` is the variable, `{~x}` its reversal, `\{` and `\\` escape
//! literal bytes; everything else is a terminal byte.

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Reversed,
}

impl Direction {
    pub fn flip(self) -> Direction {
        match self {
            Direction::Forward => Direction::Reversed,
            Direction::Reversed => Direction::Forward,
        }
    }
}

/// `p = s1 x1 s2 x2 ... s_{r-1} x_{r-1} s_r`; `segments.len() = r`,
/// `directions.len() = r - 1`.  `r = 1` is a plain string.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pattern {
    pub segments: Vec<Vec<u8>>,
    pub directions: Vec<Direction>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("malformed variable token at byte {0}")]
    BadToken(usize),
    #[error("dangling escape at byte {0}")]
    DanglingEscape(usize),
}

pub fn parse_pattern(syntax: &[u8]) -> Result<Pattern, ParseError> {
    let mut segments = vec![Vec::new()];
    let mut directions = Vec::new();
    let mut i = 0;
    while i < syntax.len() {
        match syntax[i] {
            b'\\' => {
                let next = *syntax.get(i + 1).ok_or(ParseError::DanglingEscape(i))?;
                if next != b'{' && next != b'\\' {
                    return Err(ParseError::DanglingEscape(i));
                }
                segments.last_mut().unwrap().push(next);
                i += 2;
            }
            b'{' => {
                let rest = &syntax[i..];
                if rest.starts_with(b"{x}") {
                    directions.push(Direction::Forward);
                    segments.push(Vec::new());
                    i += 3;
                } else if rest.starts_with(b"{~x}") {
                    directions.push(Direction::Reversed);
                    segments.push(Vec::new());
                    i += 4;
                } else {
                    return Err(ParseError::BadToken(i));
                }
            }
            b => {
                segments.last_mut().unwrap().push(b);
                i += 1;
            }
        }
    }
    Ok(Pattern { segments, directions })
}

impl Pattern {
    pub fn new(segments: Vec<Vec<u8>>, directions: Vec<Direction>) -> Pattern {
        assert_eq!(segments.len(), directions.len() + 1);
        Pattern { segments, directions }
    }

    /// Number of segments `r` (variables = r - 1).
    pub fn r(&self) -> usize {
        self.segments.len()
    }

    pub fn total_segment_len(&self) -> usize {
        self.segments.iter().map(|s| s.len()).sum()
    }

    /// |s_1 .. s_z| for z in [0..r]; prefix_len(0) = 0.
    pub fn prefix_len(&self, z: usize) -> usize {
        self.segments[..z].iter().map(|s| s.len()).sum()
    }

    /// Render back to the textual syntax (escaping as needed).
    pub fn render(&self) -> Vec<u8> {
        let mut out = Vec::new();
        for (z, seg) in self.segments.iter().enumerate() {
            for &b in seg {
                if b == b'{' || b == b'\\' {
                    out.push(b'\\');
                }
                out.push(b);
            }
            if z < self.directions.len() {
                out.extend_from_slice(match self.directions[z] {
                    Direction::Forward => b"{x}".as_slice(),
                    Direction::Reversed => b"{~x}".as_slice(),
                });
            }
        }
        out
    }

    /// The image of `p` under a substitution `w` (for tests and the oracle).
    pub fn image(&self, w: &[u8]) -> Vec<u8> {
        let rev: Vec<u8> = w.iter().rev().copied().collect();
        let mut out = Vec::new();
        for (z, seg) in self.segments.iter().enumerate() {
            out.extend_from_slice(seg);
            if z < self.directions.len() {
                out.extend_from_slice(match self.directions[z] {
                    Direction::Forward => &w,
                    Direction::Reversed => &rev,
                });
            }
        }
        out
    }
}

/// Ensure the first variable is forward by flipping every direction if
/// needed; the instance set is unchanged (`w <-> reverse(w)` is a bijection).
pub fn normalize(p: &Pattern) -> Pattern {
    if p.directions.first() == Some(&Direction::Reversed) {
        Pattern {
            segments: p.segments.clone(),
            directions: p.directions.iter().map(|d| d.flip()).collect(),
        }
    } else {
        p.clone()
    }
}

/// Length of the image of `p` when the substitution has length `beta`.
pub fn image_length(p: &Pattern, beta: usize) -> usize {
    p.total_segment_len() + (p.r() - 1) * beta
}

#[cfg(test)]
mod tests {
    use super::*;
    use Direction::{Forward as F, Reversed as R};

    fn pat(segs: &[&str], dirs: &[Direction]) -> Pattern {
        Pattern::new(segs.iter().map(|s| s.as_bytes().to_vec()).collect(), dirs.to_vec())
    }

    #[test]
    fn parse_paper_pattern() {
        let p = parse_pattern(b"a{x}ab{x}bc{~x}").unwrap();
        assert_eq!(p, pat(&["a", "ab", "bc", ""], &[F, F, R]));
    }

    #[test]
    fn parse_plain_and_square() {
        assert_eq!(parse_pattern(b"abc").unwrap(), pat(&["abc"], &[]));
        assert_eq!(parse_pattern(b"{x}{x}").unwrap(), pat(&["", "", ""], &[F, F]));
    }

    #[test]
    fn parse_errors_carry_offset() {
        assert_eq!(parse_pattern(b"a{y}"), Err(ParseError::BadToken(1)));
        assert_eq!(parse_pattern(b"ab\\"), Err(ParseError::DanglingEscape(2)));
        assert_eq!(parse_pattern(b"a\\b"), Err(ParseError::DanglingEscape(1)));
        assert_eq!(parse_pattern(b"{x"), Err(ParseError::BadToken(0)));
    }

    #[test]
    fn parse_escapes() {
        let p = parse_pattern(b"\\{x}{x}\\\\").unwrap();
        assert_eq!(p, pat(&["{x}", "\\"], &[F]));
    }

    #[test]
    fn normalize_flips_all() {
        assert_eq!(normalize(&pat(&["", ""], &[R])), pat(&["", ""], &[F]));
        assert_eq!(normalize(&pat(&["a", "b", ""], &[R, F])), pat(&["a", "b", ""], &[F, R]));
        let already = pat(&["a", "b"], &[F]);
        assert_eq!(normalize(&already), already);
        // idempotent
        let q = normalize(&pat(&["a", "b", "c"], &[R, R]));
        assert_eq!(normalize(&q), q);
    }

    #[test]
    fn image_length_formula() {
        let p = parse_pattern(b"a{x}ab{x}bc{~x}").unwrap();
        assert_eq!(image_length(&p, 3), 14);
        assert_eq!(image_length(&p, 6), 23);
        let sq = parse_pattern(b"{x}{x}").unwrap();
        assert_eq!(image_length(&sq, 0), 0);
        // affine in beta with slope r-1
        for beta in 0..20 {
            assert_eq!(
                image_length(&p, beta + 1) - image_length(&p, beta),
                p.r() - 1
            );
        }
    }

    #[test]
    fn render_roundtrip() {
        let pats: Vec<Pattern> = vec![
            pat(&["a", "ab", "bc", ""], &[F, F, R]),
            pat(&["{", "\\", ""], &[R, F]),
            pat(&["abc"], &[]),
            pat(&["", "", ""], &[F, R]),
        ];
        for p in pats {
            assert_eq!(parse_pattern(&p.render()).unwrap(), p);
        }
    }

    #[test]
    fn image_matches_hand_example() {
        let p = parse_pattern(b"a{x}ab{x}bc{~x}").unwrap();
        assert_eq!(p.image(b"abc"), b"aabcababcbccba".to_vec());
    }
}
