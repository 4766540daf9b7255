//! Regularity probing and two worked examples: the `aᵐbᵐcᵐ` class census and
//! the palindrome prefix sets `ℓₙ`.

use std::collections::BTreeSet;

use indexmap::IndexMap;
use serde::Serialize;

use crate::alphabet::{EnumMode, Word};
use crate::error::GammaError;
use crate::lang::{catalog, Language, LanguageSpec};
use crate::nerode::{gamma_exact, gamma_table, row, SuffixSet, TableConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stability {
    /// Proven: the DFA's class count was reached.
    Bounded,
    /// γ was constant over the trailing window, which suggests but does not
    /// prove regularity.
    Stabilized,
    NotStabilized,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeReport {
    pub stability: Stability,
    /// Least `n₀` with `Θ(Σ^(n₀), L) = Θ(L)` (DFAs) or the start of the
    /// trailing constant run.
    pub stabilization_n: Option<usize>,
    pub gamma: Option<u64>,
    /// Myhill-Nerode class count from minimization, for DFAs.
    pub classes: Option<usize>,
    pub gammas: Vec<u64>,
}

impl ProbeReport {
    /// The suffix family `F₀ = Σ^(n₀)` that realizes the Nerode congruence.
    pub fn witness_set(&self, lang: &Language) -> Option<SuffixSet> {
        match self.stability {
            Stability::Bounded => self
                .stabilization_n
                .map(|n| SuffixSet::new(lang.alphabet(), n, EnumMode::UpTo)),
            _ => None,
        }
    }
}

/// For DFAs, finds the least `n₀ ≤ n_max` where `γ(Σ^(n₀))` reaches the
/// minimal-DFA class count. Otherwise reports whether γ stayed constant over
/// the last `window + 1` values of a γ-table.
pub fn regularity_probe(lang: &Language, n_max: usize, window: usize, cfg: TableConfig) -> ProbeReport {
    if let LanguageSpec::Dfa(d) = lang.spec() {
        let classes = d.minimal_state_count();
        let mut gammas = Vec::new();
        for n in 0..=n_max {
            let g = gamma_exact(lang, n, EnumMode::UpTo)
                .expect("DFAs always have a certificate")
                .gamma;
            gammas.push(g);
            if g as usize == classes {
                return ProbeReport {
                    stability: Stability::Bounded,
                    stabilization_n: Some(n),
                    gamma: Some(g),
                    classes: Some(classes),
                    gammas,
                };
            }
        }
        return ProbeReport {
            stability: Stability::NotStabilized,
            stabilization_n: None,
            gamma: gammas.last().copied(),
            classes: Some(classes),
            gammas,
        };
    }
    let table = gamma_table(lang, n_max, cfg);
    let gammas = table.gammas();
    let last = *gammas.last().expect("table has n = 0");
    let run_start = gammas.iter().rposition(|&g| g != last).map_or(0, |i| i + 1);
    let stable = !table.partial && gammas.len() - run_start > window;
    ProbeReport {
        stability: if stable {
            Stability::Stabilized
        } else {
            Stability::NotStabilized
        },
        stabilization_n: stable.then_some(run_start),
        gamma: Some(last),
        classes: None,
        gammas,
    }
}

/// Representative families for `aᵐbᵐcᵐ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    /// `aᵏ`, `k ≤ n/2`
    A,
    /// `aᵏbˡ`, `1 ≤ ℓ ≤ k`, `2k − ℓ ≤ n`
    AB,
    /// `aᵏbᵏcˡ`, `1 ≤ ℓ ≤ k`, `k − ℓ ≤ n`
    ABC,
    /// `b`, the dead class
    Dead,
}

#[derive(Clone, Debug, Serialize)]
pub struct Census {
    pub n: usize,
    /// Classes as listed, one per distinct row within each family.
    pub listed: usize,
    /// Distinct rows over all representatives.
    pub distinct: usize,
    /// One representative per distinct row, in listing order.
    pub classes: Vec<(Family, String)>,
}

/// Rows of the listed representatives over `Σ^(n)`, deduplicated.
///
/// The third family is infinite; `k ≤ n + 1` already realizes every value of
/// `k − ℓ ∈ [0, n]`, and `aᵏbᵏcˡ` only depends on `k − ℓ`.
pub fn anbncn_census(n: usize) -> Census {
    let lang = Language::new(LanguageSpec::AnBnCn).expect("fixed alphabet");
    let f = SuffixSet::new(lang.alphabet(), n, EnumMode::UpTo);
    let word = |a: usize, b: usize, c: usize| {
        let mut w = vec![0u8; a];
        w.extend(std::iter::repeat_n(1u8, b));
        w.extend(std::iter::repeat_n(2u8, c));
        Word(w)
    };
    let mut reps: Vec<(Family, Word)> = Vec::new();
    for k in 0..=n / 2 {
        reps.push((Family::A, word(k, 0, 0)));
    }
    for k in 1..=n {
        for l in 1..=k {
            if 2 * k - l <= n {
                reps.push((Family::AB, word(k, l, 0)));
            }
        }
    }
    for k in 1..=n + 1 {
        for l in 1..=k {
            if k - l <= n {
                reps.push((Family::ABC, word(k, k, l)));
            }
        }
    }
    reps.push((Family::Dead, word(0, 1, 0)));

    let mut per_family: IndexMap<(Family, crate::nerode::Row), ()> = IndexMap::new();
    let mut all: IndexMap<crate::nerode::Row, (Family, Word)> = IndexMap::new();
    for (fam, w) in reps {
        let r = row(&lang, &w.0, &f);
        per_family.insert((fam, r.clone()), ());
        all.entry(r).or_insert((fam, w));
    }
    Census {
        n,
        listed: per_family.len(),
        distinct: all.len(),
        classes: all
            .into_values()
            .map(|(fam, w)| (fam, lang.alphabet().render(&w)))
            .collect(),
    }
}

/// `ℓₙ(u) = { a₁…aᵢ : 1 ≤ i ≤ n, u = a₁…aᵢ·u′, u′ ∈ L }` for even palindromes.
///
/// Two words longer than `n` share a `Σ^(n)` row iff they agree on this set
/// and on membership; membership is the `i = 0` term, which the set alone
/// leaves out.
pub fn palindrome_ell(u: &Word, n: usize) -> Result<BTreeSet<Word>, GammaError> {
    if u.len() < n {
        return Err(GammaError::Domain(format!(
            "prefix sets need |u| >= n, got |u| = {} and n = {n}",
            u.len()
        )));
    }
    Ok((1..=n)
        .filter(|&i| catalog::palindrome(&u.0[i..]))
        .map(|i| Word(u.0[..i].to_vec()))
        .collect())
}
