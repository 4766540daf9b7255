//! The pseudo-ultrametric `d_Θ(u, v) = 2^{-n*}`, where `n*` is the least `n`
//! such that `u` and `v` have different rows over `Σ^(n)`, and the entropic
//! dimension of `(Σ*, d_Θ)`.
//!
//! The classes of `Θ(Σ^(n), L)` are exactly the open balls of radius `2⁻ⁿ`, so
//! the covering number at that radius is `γₙ` and the dimension sequence is
//! the entropy sequence `aₙ`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::alphabet::{enumerate_words, Alphabet, EnumMode, Symbol, Word};
use crate::error::GammaError;
use crate::lang::dfa::hopcroft_blocks;
use crate::lang::{Language, LanguageSpec};
use crate::nerode::entropy::{a_n, entropy_estimate, EntropyEstimate};
use crate::nerode::{GammaTable, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Qualifier {
    /// Rows first differ at `n*`.
    Separated,
    /// No difference up to the horizon: the distance is at most `2^{-n_max-1}`.
    Unresolved,
    /// Equal for every horizon (equal words, or equivalent DFA states).
    ProvablyZero,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Distance {
    pub value: f64,
    pub separated_at: Option<usize>,
    pub qualifier: Qualifier,
    pub n_max: usize,
}

impl Distance {
    /// Upper bound on the true distance.
    pub fn upper(&self) -> f64 {
        match self.qualifier {
            Qualifier::Unresolved => 0.5f64.powi(self.n_max as i32 + 1),
            _ => self.value,
        }
    }
}

/// Length of the shortest suffix `w` with `[u·w ∈ L] ≠ [v·w ∈ L]`, if at most
/// `n_max`.
pub fn first_separation(lang: &Language, u: &[Symbol], v: &[Symbol], n_max: usize) -> Option<usize> {
    let mut bu = u.to_vec();
    let mut bv = v.to_vec();
    for n in 0..=n_max {
        for w in enumerate_words(lang.alphabet(), n, EnumMode::Exact) {
            bu.truncate(u.len());
            bu.extend_from_slice(&w.0);
            bv.truncate(v.len());
            bv.extend_from_slice(&w.0);
            if lang.contains(&bu) != lang.contains(&bv) {
                return Some(n);
            }
        }
    }
    None
}

pub fn d_theta(lang: &Language, u: &Word, v: &Word, n_max: usize) -> Distance {
    let sep = first_separation(lang, &u.0, &v.0, n_max);
    let qualifier = match sep {
        Some(_) => Qualifier::Separated,
        None if u == v || dfa_equivalent(lang, u, v) => Qualifier::ProvablyZero,
        None => Qualifier::Unresolved,
    };
    Distance {
        value: sep.map_or(0.0, |n| 0.5f64.powi(n as i32)),
        separated_at: sep,
        qualifier,
        n_max,
    }
}

fn dfa_equivalent(lang: &Language, u: &Word, v: &Word) -> bool {
    let LanguageSpec::Dfa(d) = lang.spec() else {
        return false;
    };
    let (su, sv) = (d.run_from(d.initial(), &u.0), d.run_from(d.initial(), &v.0));
    hopcroft_blocks(d)
        .iter()
        .any(|b| b.contains(&su) && b.contains(&sv))
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct UltrametricReport {
    pub triples: usize,
    pub triangle_violations: usize,
    pub symmetry_violations: usize,
    pub reflexivity_violations: usize,
    pub pass: bool,
}

/// Checks `d(x,z) ≤ max(d(x,y), d(y,z))`, symmetry and `d(x,x) = 0`.
///
/// Unresolved pairs are compared by their resolved part: `n*` is taken as
/// `n_max + 1`, which is consistent because the inequality only involves
/// minima of separation lengths.
pub fn ultrametric_check(lang: &Language, triples: &[(Word, Word, Word)], n_max: usize) -> UltrametricReport {
    let sep = |a: &Word, b: &Word| first_separation(lang, &a.0, &b.0, n_max).unwrap_or(n_max + 1);
    let mut rep = UltrametricReport {
        triples: triples.len(),
        ..Default::default()
    };
    for (x, y, z) in triples {
        let (xy, yz, xz) = (sep(x, y), sep(y, z), sep(x, z));
        // d(x,z) ≤ max(d(x,y), d(y,z))  ⇔  n*(x,z) ≥ min(n*(x,y), n*(y,z))
        if xz < xy.min(yz) {
            rep.triangle_violations += 1;
        }
        if sep(y, x) != xy {
            rep.symmetry_violations += 1;
        }
        if sep(x, x) != n_max + 1 {
            rep.reflexivity_violations += 1;
        }
    }
    rep.pass =
        rep.triangle_violations == 0 && rep.symmetry_violations == 0 && rep.reflexivity_violations == 0;
    rep
}

/// Uniform random words with lengths in `0..=max_len`, from a seeded stream.
pub fn random_triples(alphabet: &Alphabet, count: usize, max_len: usize, seed: u64) -> Vec<(Word, Word, Word)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = alphabet.len();
    let word = |rng: &mut ChaCha8Rng| {
        let len = rng.gen_range(0..=max_len);
        Word((0..len).map(|_| rng.gen_range(0..k) as Symbol).collect())
    };
    (0..count)
        .map(|_| (word(&mut rng), word(&mut rng), word(&mut rng)))
        .collect()
}

/// Greedy cover of `sample` by open `d_Θ`-balls of radius `2⁻ⁿ`; returns the
/// number of centres.
pub fn greedy_cover(lang: &Language, sample: &[Word], n: usize) -> usize {
    let r = 0.5f64.powi(n as i32);
    let mut centres: Vec<&Word> = Vec::new();
    for x in sample {
        // `n_max = n` resolves every distance ≥ 2⁻ⁿ; unresolved means < r
        if !centres.iter().any(|c| d_theta(lang, x, c, n).value < r) {
            centres.push(x);
        }
    }
    centres.len()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DimPerN {
    pub n: usize,
    /// Covering number at radius `2⁻ⁿ`.
    pub covering: u64,
    /// `log₂(covering) / log₂(2ⁿ)`.
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DimensionEstimate {
    pub per_n: Vec<DimPerN>,
    pub tail_max: f64,
    pub slope: f64,
    pub verdict: Verdict,
    /// Per-n values and verdict coincide with the entropy estimate.
    pub matches_entropy: bool,
}

pub fn dimension_estimate(table: &GammaTable) -> Result<DimensionEstimate, GammaError> {
    if table.mode != EnumMode::UpTo {
        return Err(GammaError::ModeMismatch(table.mode));
    }
    let per_n: Vec<DimPerN> = table
        .records
        .iter()
        .filter(|r| r.n >= 1 && !r.partial)
        .map(|r| DimPerN {
            n: r.n,
            covering: r.gamma,
            value: a_n(r.gamma, r.n),
        })
        .collect();
    // the tail rule is shared with the entropy estimate
    let e: EntropyEstimate = entropy_estimate(table)?;
    let matches_entropy = per_n.len() == e.per_n.len()
        && per_n
            .iter()
            .zip(&e.per_n)
            .all(|(d, h)| d.n == h.n && d.value.to_bits() == h.a_n.to_bits());
    Ok(DimensionEstimate {
        per_n,
        tail_max: e.tail_max,
        slope: e.slope,
        verdict: e.verdict,
        matches_entropy,
    })
}
