//! Detection of one-variable patterns with reversals.
//!
//! A pattern `p = s1 x1 s2 x2 ... s_{r-1} x_{r-1} s_r` consists of terminal
//! segments `s_z` and variable slots `x_z`, each of which is either the
//! variable `x` or its reversal `~x`.  An *instance* of `p` in a text `t` is a
//! substring `s1 w1 s2 w2 ... w_{r-1} s_r` where `w_z = w` if `x_z = x` and
//! `w_z = reverse(w)` otherwise, for a single substitution string `w`.
//!
//! [`matcher::find_all`] reports every instance as a set of
//! [`matcher::InstanceFamily`] arithmetic progressions over
//! `(start, substitution length)` whose expansion is exactly the instance set,
//! so that `P` instances are retrieved in `O(P)` time.  The engine follows an
//! anchor-grid strategy over substitution-length scales combined with
//! run-based sweeps for heavily periodic texts; [`oracle::naive_find`] is an
//! independent quadratic reference used by the differential test suites.

pub mod bitvec;
pub mod pattern;
pub mod text_index;
pub mod runs;
pub mod palindromes;
pub mod anchor_nonperiodic;
pub mod anchor_periodic;
pub mod matcher;
pub mod oracle;

pub use pattern::{Direction, Pattern};
