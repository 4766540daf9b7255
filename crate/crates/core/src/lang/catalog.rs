//! Membership and viability predicates for the built-in languages.
//!
//! Words arrive as symbol ranks. For the bracket languages, rank `2i` opens
//! sort `i` and rank `2i+1` closes it.

use smallvec::SmallVec;

use crate::alphabet::{Alphabet, Symbol};

/// Bracket pairs used for the first sorts; later sorts use `A`/`a`, `B`/`b`, ...
const PAIRS: [(char, char); 4] = [('(', ')'), ('[', ']'), ('{', '}'), ('<', '>')];

/// Largest sort count a bracket alphabet can hold.
pub const MAX_SORTS: usize = PAIRS.len() + 26;

pub fn bracket_alphabet(k: usize) -> Alphabet {
    let mut syms = Vec::with_capacity(2 * k);
    for i in 0..k {
        if i < PAIRS.len() {
            syms.push(PAIRS[i].0);
            syms.push(PAIRS[i].1);
        } else {
            let j = (i - PAIRS.len()) as u8;
            syms.push((b'A' + j) as char);
            syms.push((b'a' + j) as char);
        }
    }
    Alphabet::new(syms).expect("distinct bracket symbols")
}

/// Outcome of scanning a word with the bracket stack.
enum Scan {
    /// A closer did not match the innermost open bracket.
    Mismatch,
    Open(usize),
}

fn scan_dyck(w: &[Symbol]) -> Scan {
    let mut stack: SmallVec<[Symbol; 32]> = SmallVec::new();
    for &s in w {
        let sort = s >> 1;
        if s & 1 == 0 {
            stack.push(sort);
        } else if stack.pop() != Some(sort) {
            return Scan::Mismatch;
        }
    }
    Scan::Open(stack.len())
}

pub fn dyck(w: &[Symbol]) -> bool {
    matches!(scan_dyck(w), Scan::Open(0))
}

/// Every well-matched prefix can be closed, so only a mismatch is fatal.
pub fn dyck_viable(w: &[Symbol]) -> bool {
    matches!(scan_dyck(w), Scan::Open(_))
}

/// Per-sort open counts, or `None` once some count went negative.
fn scan_commutative(k: usize, w: &[Symbol]) -> Option<SmallVec<[i64; 8]>> {
    let mut c: SmallVec<[i64; 8]> = SmallVec::from_elem(0, k);
    for &s in w {
        let sort = (s >> 1) as usize;
        if s & 1 == 0 {
            c[sort] += 1;
        } else {
            c[sort] -= 1;
            if c[sort] < 0 {
                return None;
            }
        }
    }
    Some(c)
}

pub fn commutative_dyck(k: usize, w: &[Symbol]) -> bool {
    scan_commutative(k, w).is_some_and(|c| c.iter().all(|&x| x == 0))
}

pub fn commutative_dyck_viable(k: usize, w: &[Symbol]) -> bool {
    scan_commutative(k, w).is_some()
}

/// Even-length palindromes.
pub fn palindrome(w: &[Symbol]) -> bool {
    w.len() % 2 == 0 && w.iter().eq(w.iter().rev())
}

/// Shape of a word over `{a, b, c}` (ranks 0, 1, 2) against `a* b* c*`.
fn blocks(w: &[Symbol]) -> Option<(usize, usize, usize)> {
    let mut counts = [0usize; 3];
    let mut phase = 0;
    for &s in w {
        let s = s as usize;
        if s < phase {
            return None;
        }
        phase = s;
        counts[s] += 1;
    }
    Some((counts[0], counts[1], counts[2]))
}

pub fn anbncn(w: &[Symbol]) -> bool {
    blocks(w).is_some_and(|(a, b, c)| a == b && b == c)
}

/// `aⁱbʲcˡ` extends into the language iff `j ≤ i`, `l ≤ j`, and no `c` was
/// read before the `b` block was complete.
pub fn anbncn_viable(w: &[Symbol]) -> bool {
    blocks(w).is_some_and(|(a, b, c)| b <= a && c <= b && (c == 0 || a == b))
}

/// `|w|_a = |w|_b + m` with `a` at rank 0.
pub fn count_diff(m: u32, w: &[Symbol]) -> bool {
    let a = w.iter().filter(|&&s| s == 0).count() as i64;
    let b = w.len() as i64 - a;
    a - b == m as i64
}

/// The binary language with `h = ∞`: words `u·v` with `|u| = 2ⁿ`, `|v| = n`,
/// and the symbol of `u` at position `rank(v)` equal to `b` (rank 1), where
/// `rank(v)` reads `v` as a binary number, most significant symbol first.
pub fn infinite_entropy(w: &[Symbol]) -> bool {
    let len = w.len();
    let mut n = 0usize;
    while n < usize::BITS as usize - 1 {
        let p = 1usize << n;
        if p + n == len {
            let (u, v) = w.split_at(p);
            let rank = v.iter().fold(0usize, |acc, &s| (acc << 1) | s as usize);
            return u[rank] == 1;
        }
        if p + n > len {
            return false;
        }
        n += 1;
    }
    false
}
