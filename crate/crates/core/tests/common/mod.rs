//! Slow, independent reference implementations used as oracles.
//!
//! Nothing here calls the library's membership code, viability pruning or row
//! certificates. Words are plain `String`s.

#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use entroscope::alphabet::{Alphabet, Word};
use entroscope::Language;

/// Every string over `symbols` of length at most `n`, shortest first.
pub fn strings_up_to(symbols: &[char], n: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut level = vec![String::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for w in &level {
            for &c in symbols {
                let mut x = w.clone();
                x.push(c);
                next.push(x);
            }
        }
        out.extend(next.iter().cloned());
        level = next;
    }
    out
}

pub fn strings_of_length(symbols: &[char], n: usize) -> Vec<String> {
    strings_up_to(symbols, n)
        .into_iter()
        .filter(|w| w.chars().count() == n)
        .collect()
}

/// Dyck membership by cancelling adjacent matched pairs until none is left.
pub fn dyck_by_rewriting(w: &str, pairs: &[(char, char)]) -> bool {
    let mut s: Vec<char> = w.chars().collect();
    loop {
        let pos = s
            .windows(2)
            .position(|p| pairs.iter().any(|&(o, c)| p[0] == o && p[1] == c));
        match pos {
            Some(i) => {
                s.drain(i..i + 2);
            }
            None => return s.is_empty(),
        }
    }
}

/// Partially commutative Dyck: for each sort, the count of openers minus
/// closers never goes negative and ends at zero.
pub fn commutative_dyck_by_counting(w: &str, pairs: &[(char, char)]) -> bool {
    pairs.iter().all(|&(o, c)| {
        let mut depth = 0i64;
        for x in w.chars() {
            if x == o {
                depth += 1;
            } else if x == c {
                depth -= 1;
                if depth < 0 {
                    return false;
                }
            }
        }
        depth == 0
    })
}

/// `w = x·reverse(x)`.
pub fn even_palindrome(w: &str) -> bool {
    let c: Vec<char> = w.chars().collect();
    let h = c.len() / 2;
    c.len() % 2 == 0 && c[..h].iter().eq(c[h..].iter().rev())
}

pub fn anbncn_by_construction(w: &str) -> bool {
    let m = w.len() / 3;
    w.len() % 3 == 0 && w == format!("{}{}{}", "a".repeat(m), "b".repeat(m), "c".repeat(m))
}

pub fn count_diff(w: &str, a: char, b: char, m: i64) -> bool {
    let ca = w.chars().filter(|&x| x == a).count() as i64;
    let cb = w.chars().filter(|&x| x == b).count() as i64;
    ca - cb == m
}

/// `|w| = 2ⁿ + n`, and with `w = u·v`, `|u| = 2ⁿ`, the letter of `u` at the
/// index spelled by `v` in binary (`a` = 0, `b` = 1) is `b`.
pub fn infinite_entropy(w: &str) -> bool {
    let c: Vec<char> = w.chars().collect();
    for n in 0..20u32 {
        let p = 2usize.pow(n);
        if p + n as usize == c.len() {
            let v: String = c[p..].iter().map(|&x| if x == 'b' { '1' } else { '0' }).collect();
            let idx = if v.is_empty() { 0 } else { usize::from_str_radix(&v, 2).unwrap() };
            return c[idx] == 'b';
        }
    }
    false
}

/// Word over the language's alphabet from a string.
pub fn word(lang: &Language, s: &str) -> Word {
    lang.alphabet().parse(s).unwrap()
}

/// Rows as bool vectors, computed by direct membership over all prefixes.
pub fn naive_rows<F: Fn(&str) -> bool>(
    member: F,
    prefixes: &[String],
    suffixes: &[String],
) -> HashMap<Vec<bool>, String> {
    let mut rows = HashMap::new();
    for u in prefixes {
        let r: Vec<bool> = suffixes.iter().map(|w| member(&format!("{u}{w}"))).collect();
        rows.entry(r).or_insert_with(|| u.clone());
    }
    rows
}

/// `γ` over all prefixes `|u| ≤ p`, no pruning.
pub fn naive_gamma<F: Fn(&str) -> bool>(member: F, symbols: &[char], n: usize, p: usize) -> usize {
    naive_rows(member, &strings_up_to(symbols, p), &strings_up_to(symbols, n)).len()
}

pub fn naive_gamma_exact_mode<F: Fn(&str) -> bool>(
    member: F,
    symbols: &[char],
    n: usize,
    p: usize,
) -> usize {
    naive_rows(member, &strings_up_to(symbols, p), &strings_of_length(symbols, n)).len()
}

/// A string membership closure for the library language, used to compare the
/// library against itself only where the oracle is independent elsewhere.
pub fn member_of(lang: &Language) -> impl Fn(&str) -> bool + '_ {
    move |s: &str| lang.contains_str(s).unwrap()
}

/// Moore-style minimization on an explicit table: number of classes among
/// reachable states.
pub fn moore_classes(initial: usize, accepting: &[bool], delta: &[Vec<usize>]) -> usize {
    let mut reach = vec![initial];
    let mut seen: HashSet<usize> = reach.iter().copied().collect();
    let mut i = 0;
    while i < reach.len() {
        for &t in &delta[reach[i]] {
            if seen.insert(t) {
                reach.push(t);
            }
        }
        i += 1;
    }
    let mut cls: HashMap<usize, usize> = reach.iter().map(|&s| (s, accepting[s] as usize)).collect();
    loop {
        let mut ids: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
        let mut next = HashMap::new();
        for &s in &reach {
            let key = (cls[&s], delta[s].iter().map(|t| cls[t]).collect());
            let fresh = ids.len();
            next.insert(s, *ids.entry(key).or_insert(fresh));
        }
        let before: HashSet<usize> = cls.values().copied().collect();
        if ids.len() == before.len() {
            return ids.len();
        }
        cls = next;
    }
}

/// `C(n, k)` for small arguments.
pub fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Lattice points of `ℤᵏ` with ℓ₁ norm at most `n`, by direct enumeration.
pub fn l1_ball(k: u32, n: i64) -> u64 {
    fn rec(k: u32, budget: i64) -> u64 {
        if k == 0 {
            return 1;
        }
        (-budget..=budget).map(|x| rec(k - 1, budget - x.abs())).sum()
    }
    rec(k, n)
}

pub fn ab() -> Alphabet {
    Alphabet::new("ab".chars()).unwrap()
}

/// The DFA counting `first` symbols mod 3, accepting residue 0.
pub fn mod3_json(first: &str, second: &str) -> String {
    format!(
        r#"{{"alphabet": ["{first}", "{second}"], "states": 3, "initial": 0, "accepting": [0],
  "transitions": [[1, 0], [2, 1], [0, 2]]}}"#
    )
}

/// Checks the two set-level facts a row certificate promises at horizon `n`:
/// every abstract row is the real row of its witness, and every real row of a
/// prefix up to `prefix_bound` (all of them, unpruned) is an abstract row.
pub fn audit_certificate(lang: &Language, n: usize, prefix_bound: usize) -> Result<usize, String> {
    use entroscope::alphabet::{enumerate_words, EnumMode};
    use entroscope::lang::DEFAULT_STATE_CAP;

    let cert = lang
        .abstraction(n, DEFAULT_STATE_CAP)
        .ok_or("no certificate")?
        .map_err(|e| e.to_string())?;
    let suffixes = enumerate_words(lang.alphabet(), n, EnumMode::UpTo);
    let abstract_row = |q: usize| -> Vec<bool> {
        suffixes
            .iter()
            .map(|w| cert.accepting[w.0.iter().fold(q, |p, &s| cert.step(p, s))])
            .collect()
    };
    let real_row = |u: &Word| -> Vec<bool> {
        suffixes.iter().map(|w| lang.contains_word(&u.concat(w))).collect()
    };
    let mut abstract_rows = HashSet::new();
    for q in 0..cert.len() {
        let r = abstract_row(q);
        if r != real_row(&cert.witness[q]) {
            return Err(format!(
                "state {q} disagrees with its witness {:?}",
                lang.alphabet().render(&cert.witness[q])
            ));
        }
        abstract_rows.insert(r);
    }
    for u in enumerate_words(lang.alphabet(), prefix_bound, EnumMode::UpTo) {
        if !abstract_rows.contains(&real_row(&u)) {
            return Err(format!("row of {:?} is missing", lang.alphabet().render(&u)));
        }
    }
    Ok(abstract_rows.len())
}
