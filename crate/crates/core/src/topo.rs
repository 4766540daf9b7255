//! Finite truncations of the minimal topological automaton.
//!
//! A state of the minimal automaton is the full suffix-membership function
//! `f_u(w) = [u·w ∈ L]`. Here it is cut down to a profile over `Σ^(m)`. Reading
//! `σ` shifts a profile, `δ(f, σ)(w) = f(σ·w)`, which is only known for
//! `|w| ≤ m − 1`; so the automaton is layered by horizon, `m` at the top and
//! `0` at the bottom, where only the final-state bit `f(ε)` is left.

use indexmap::IndexMap;
use serde::Serialize;

use crate::alphabet::{EnumMode, Symbol, Word};
use crate::error::GammaError;
use crate::lang::Language;
use crate::nerode::entropy::a_n;
use crate::nerode::{row_census, BruteForce, Row, SuffixSet};

/// Distinct profiles at one horizon.
#[derive(Clone, Debug)]
pub struct Layer {
    pub horizon: usize,
    pub suffixes: SuffixSet,
    pub profiles: Vec<Row>,
    /// `delta[p * k + σ]`: index in the next layer down. Empty at horizon 0.
    pub delta: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct TruncatedAutomaton {
    pub horizon: usize,
    pub prefix_bound: usize,
    pub k: usize,
    /// `layers[0]` is the top layer, at horizon `m`.
    pub layers: Vec<Layer>,
    /// One witness prefix per top-layer profile.
    pub witnesses: Vec<Word>,
    pub saturated: bool,
    pub queries: u64,
}

/// `δ(f, σ)` at horizon `h − 1` from `f` at horizon `h`.
fn shift(f: &Row, from: &SuffixSet, to: &SuffixSet, s: Symbol) -> Row {
    Row::from_bits(to.words().iter().map(|w| {
        let mut sw = Vec::with_capacity(w.len() + 1);
        sw.push(s);
        sw.extend_from_slice(&w.0);
        f.get(from.index_of(&Word(sw)).expect("σw is in the larger family"))
    }))
}

/// Profiles of all prefixes up to `prefix_bound` at horizon `m`, and the
/// shift layers below them.
pub fn build_truncated(
    lang: &Language,
    m: usize,
    prefix_bound: usize,
    budget: Option<u64>,
) -> Result<TruncatedAutomaton, GammaError> {
    let alphabet = lang.alphabet();
    let k = alphabet.len();
    let top = SuffixSet::new(alphabet, m, EnumMode::UpTo);
    let census = row_census(
        lang,
        &top,
        BruteForce {
            prefix_bound,
            window: 2,
            budget,
        },
    );
    if census.exhausted {
        return Err(GammaError::Budget {
            partial: Box::new(crate::nerode::GammaRecord {
                n: m,
                mode: EnumMode::UpTo,
                gamma: census.rows.len().max(1) as u64,
                exact: false,
                saturated: false,
                prefix_bound: census.prefix_bound,
                queries: census.queries,
                partial: true,
                lower_bound: None,
                upper_bound: None,
            }),
        });
    }
    let (profiles, witnesses): (Vec<Row>, Vec<Word>) = census.rows.into_iter().unzip();
    let mut layers = vec![Layer {
        horizon: m,
        suffixes: top,
        profiles,
        delta: Vec::new(),
    }];
    for h in (0..m).rev() {
        let below = SuffixSet::new(alphabet, h, EnumMode::UpTo);
        let upper = layers.last_mut().unwrap();
        let mut next: IndexMap<Row, ()> = IndexMap::new();
        let mut delta = Vec::with_capacity(upper.profiles.len() * k);
        for f in &upper.profiles {
            for s in 0..k {
                let g = shift(f, &upper.suffixes, &below, s as Symbol);
                let (idx, _) = next.insert_full(g, ());
                delta.push(idx);
            }
        }
        upper.delta = delta;
        layers.push(Layer {
            horizon: h,
            suffixes: below,
            profiles: next.into_keys().collect(),
            delta: Vec::new(),
        });
    }
    Ok(TruncatedAutomaton {
        horizon: m,
        prefix_bound: census.prefix_bound,
        k,
        layers,
        witnesses,
        saturated: census.saturated,
        queries: census.queries,
    })
}

impl TruncatedAutomaton {
    pub fn top(&self) -> &Layer {
        &self.layers[0]
    }

    /// Number of top-layer profiles.
    pub fn len(&self) -> usize {
        self.top().profiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.top().profiles.is_empty()
    }

    /// Follows `w` from top profile `p` and reads the final-state bit.
    pub fn accepts_from(&self, p: usize, w: &[Symbol]) -> bool {
        assert!(w.len() <= self.horizon);
        let mut q = p;
        for (depth, &s) in w.iter().enumerate() {
            q = self.layers[depth].delta[q * self.k + s as usize];
        }
        self.layers[w.len()].profiles[q].get(0)
    }

    /// `T = {f : f(ε) = 1}`.
    pub fn is_final(&self, p: usize) -> bool {
        self.top().profiles[p].get(0)
    }

    /// `Λ_E`: top profiles grouped by their behaviour on `E`.
    pub fn lambda_partition(&self, e: &SuffixSet) -> Result<LambdaPartition, GammaError> {
        if e.n() > self.horizon {
            return Err(GammaError::Horizon {
                needed: e.n(),
                available: self.horizon,
            });
        }
        let mut cells: IndexMap<Row, Vec<usize>> = IndexMap::new();
        for p in 0..self.len() {
            let pattern = Row::from_bits(e.words().iter().map(|w| self.accepts_from(p, &w.0)));
            cells.entry(pattern).or_default().push(p);
        }
        Ok(LambdaPartition {
            cells: cells.into_values().collect(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LambdaPartition {
    pub cells: Vec<Vec<usize>>,
}

/// `(E : 𝒰)_α`: the number of nonempty cells of the join of `w⁻¹(𝒰)`, `w ∈ E`,
/// for `𝒰 = {T, X ∖ T}`.
pub fn cover_complexity(auto: &TruncatedAutomaton, e: &SuffixSet) -> Result<usize, GammaError> {
    Ok(auto.lambda_partition(e)?.cells.len())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverPerN {
    pub n: usize,
    pub count: u64,
    pub a_n: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverEntropy {
    pub per_n: Vec<CoverPerN>,
    pub saturated: bool,
    pub prefix_bound: usize,
    pub queries: u64,
}

/// `log₂(Sⁿ : 𝒰)/n` for `n = 0..=n_max`, from one truncation at horizon
/// `n_max`.
pub fn entropy_via_covers(
    lang: &Language,
    n_max: usize,
    prefix_bound: usize,
    budget: Option<u64>,
) -> Result<CoverEntropy, GammaError> {
    let auto = build_truncated(lang, n_max, prefix_bound, budget)?;
    let mut per_n = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let e = SuffixSet::new(lang.alphabet(), n, EnumMode::UpTo);
        let count = cover_complexity(&auto, &e)? as u64;
        per_n.push(CoverPerN {
            n,
            count,
            a_n: (n >= 1).then(|| a_n(count, n)),
        });
    }
    Ok(CoverEntropy {
        per_n,
        saturated: auto.saturated,
        prefix_bound: auto.prefix_bound,
        queries: auto.queries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn universal_has_one_profile() {
        let l = Language::parse("universal:ab").unwrap();
        let a = build_truncated(&l, 3, 5, None).unwrap();
        assert_eq!(a.len(), 1);
        assert_eq!(a.top().profiles[0].ones(), 15);
    }

    #[test]
    fn dyck_one_at_horizon_one() {
        let l = Language::dyck(1);
        let a = build_truncated(&l, 1, 6, None).unwrap();
        assert_eq!(a.len(), 3);
        let eps = SuffixSet::new(l.alphabet(), 0, EnumMode::UpTo);
        assert_eq!(cover_complexity(&a, &eps).unwrap(), 2);
        let s1 = SuffixSet::new(l.alphabet(), 1, EnumMode::UpTo);
        assert_eq!(cover_complexity(&a, &s1).unwrap(), 3);
        let s2 = SuffixSet::new(l.alphabet(), 2, EnumMode::UpTo);
        assert!(cover_complexity(&a, &s2).is_err());
    }

    #[test]
    fn final_profiles_have_epsilon_bit() {
        let l = Language::dyck(1);
        let a = build_truncated(&l, 2, 6, None).unwrap();
        for (p, w) in a.witnesses.iter().enumerate() {
            assert_eq!(a.is_final(p), l.contains_word(w));
        }
    }
}
