//! Free and free abelian groups: canonical forms, balls |Sⁿ| and growth rates.
//!
//! The generating set is always the symmetric set of generators and their
//! inverses together with the identity, so `Sⁿ` is the ball of radius `n` in
//! the word metric.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use crate::alphabet::EnumMode;
use crate::error::{GroupError, InputError};
use crate::lang::Language;

/// A finitely generated group with a canonical normal form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    Free(usize),
    FreeAbelian(usize),
}

/// Group element in normal form.
///
/// Free-group letters are `±(i+1)` for generator `i`; a reduced word never
/// contains a letter next to its negation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    Free(Vec<i32>),
    Abelian(Vec<i64>),
}

impl GroupSpec {
    pub fn rank(&self) -> usize {
        match *self {
            GroupSpec::Free(k) | GroupSpec::FreeAbelian(k) => k,
        }
    }

    pub fn is_abelian(&self) -> bool {
        matches!(self, GroupSpec::FreeAbelian(_)) || *self == GroupSpec::Free(1)
    }

    pub fn identity(&self) -> GroupElement {
        match *self {
            GroupSpec::Free(_) => GroupElement::Free(Vec::new()),
            GroupSpec::FreeAbelian(k) => GroupElement::Abelian(vec![0; k]),
        }
    }

    /// The `i`-th generator (0-based).
    pub fn generator(&self, i: usize) -> GroupElement {
        match *self {
            GroupSpec::Free(_) => GroupElement::Free(vec![i as i32 + 1]),
            GroupSpec::FreeAbelian(k) => {
                let mut v = vec![0; k];
                v[i] = 1;
                GroupElement::Abelian(v)
            }
        }
    }

    /// Generators, their inverses and the identity.
    pub fn generating_set(&self) -> Vec<GroupElement> {
        let k = self.rank();
        let mut s = vec![self.identity()];
        for i in 0..k {
            let g = self.generator(i);
            s.push(self.inverse(&g));
            s.push(g);
        }
        s
    }

    fn check(&self, g: &GroupElement) -> Result<(), GroupError> {
        let k = self.rank();
        match (self, g) {
            (GroupSpec::Free(_), GroupElement::Free(w)) => {
                match w.iter().map(|l| l.unsigned_abs() as usize).max() {
                    Some(m) if m > k => Err(GroupError::RankMismatch { left: k, right: m }),
                    _ => Ok(()),
                }
            }
            (GroupSpec::FreeAbelian(_), GroupElement::Abelian(v)) if v.len() == k => Ok(()),
            (_, GroupElement::Abelian(v)) => Err(GroupError::RankMismatch {
                left: k,
                right: v.len(),
            }),
            (_, GroupElement::Free(_)) => Err(GroupError::RankMismatch { left: k, right: 0 }),
        }
    }

    pub fn multiply(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check(g)?;
        self.check(h)?;
        Ok(match (g, h) {
            (GroupElement::Free(a), GroupElement::Free(b)) => {
                let mut out = a.clone();
                for &l in b {
                    push_reduced(&mut out, l);
                }
                GroupElement::Free(out)
            }
            (GroupElement::Abelian(a), GroupElement::Abelian(b)) => {
                GroupElement::Abelian(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            _ => unreachable!("checked above"),
        })
    }

    pub fn inverse(&self, g: &GroupElement) -> GroupElement {
        match g {
            GroupElement::Free(w) => GroupElement::Free(w.iter().rev().map(|l| -l).collect()),
            GroupElement::Abelian(v) => GroupElement::Abelian(v.iter().map(|x| -x).collect()),
        }
    }

    /// Exact |Sⁿ| by breadth-first closure. `cap` bounds the number of stored
    /// elements.
    pub fn ball_size(&self, n: usize, cap: usize) -> Result<u64, GroupError> {
        let gens = self.generating_set();
        closure_sizes(&self.identity(), &gens, n, cap, |g, s| {
            self.multiply(g, s).expect("same group")
        })
        .map(|sizes| sizes.last().copied().unwrap_or(1))
    }

    /// Ball sizes for radii `0..=n_max`.
    pub fn ball_table(&self, n_max: usize, cap: usize) -> Result<BallTable, GroupError> {
        let gens = self.generating_set();
        let sizes = closure_sizes(&self.identity(), &gens, n_max, cap, |g, s| {
            self.multiply(g, s).expect("same group")
        })?;
        Ok(BallTable::new(*self, sizes))
    }

    /// Closed form of |Sⁿ|: `1 + 2k((2k−1)ⁿ − 1)/(2k − 2)` for free groups of
    /// rank `k ≥ 2`, `2n + 1` in rank one, and the ℓ₁ lattice-ball count
    /// `Σᵢ 2ⁱ C(k,i) C(n,i)` for ℤᵏ.
    pub fn closed_form_ball(&self, n: usize) -> u128 {
        match *self {
            GroupSpec::Free(1) | GroupSpec::FreeAbelian(1) => 2 * n as u128 + 1,
            GroupSpec::Free(k) => {
                let k = k as u128;
                1 + 2 * k * ((2 * k - 1).pow(n as u32) - 1) / (2 * k - 2)
            }
            GroupSpec::FreeAbelian(k) => (0..=k.min(n))
                .map(|i| (1u128 << i) * binomial(k, i) * binomial(n, i))
                .sum(),
        }
    }

    /// The known value of `lim log₂|Sⁿ|/n`.
    pub fn growth_limit(&self) -> f64 {
        match *self {
            GroupSpec::Free(k) if k >= 2 => ((2 * k - 1) as f64).log2(),
            _ => 0.0,
        }
    }

    /// Parses `free:K`, `abelian:K` or `freeabelian:K`.
    pub fn parse(text: &str) -> Result<Self, InputError> {
        let bad = |reason: &str| InputError::BadSpec {
            spec: text.to_string(),
            reason: reason.to_string(),
        };
        let (kind, rank) = text.split_once(':').ok_or_else(|| bad("expected KIND:RANK"))?;
        let rank: usize = rank.parse().map_err(|_| bad("rank must be a positive integer"))?;
        if rank == 0 {
            return Err(bad("rank must be at least 1"));
        }
        match kind {
            "free" => Ok(GroupSpec::Free(rank)),
            "abelian" | "freeabelian" | "zk" => Ok(GroupSpec::FreeAbelian(rank)),
            _ => Err(bad("group kind must be `free` or `abelian`")),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Free(k) => write!(f, "free:{k}"),
            GroupSpec::FreeAbelian(k) => write!(f, "abelian:{k}"),
        }
    }
}

fn push_reduced(w: &mut Vec<i32>, l: i32) {
    if w.last() == Some(&-l) {
        w.pop();
    } else {
        w.push(l);
    }
}

/// Free reduction of an arbitrary letter sequence.
pub fn reduce(word: &[i32]) -> Vec<i32> {
    let mut out = Vec::with_capacity(word.len());
    for &l in word {
        if l != 0 {
            push_reduced(&mut out, l);
        }
    }
    out
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i as u128 + 1);
    }
    r
}

/// Sizes of `{e} ∪ step(S)ⁱ` closures for `i = 0..=n`, where each level
/// multiplies the previous ball by every element of `gens`.
pub(crate) fn closure_sizes<F>(
    identity: &GroupElement,
    gens: &[GroupElement],
    n: usize,
    cap: usize,
    mul: F,
) -> Result<Vec<u64>, GroupError>
where
    F: Fn(&GroupElement, &GroupElement) -> GroupElement,
{
    let mut seen: HashSet<GroupElement> = HashSet::new();
    seen.insert(identity.clone());
    let mut frontier = vec![identity.clone()];
    let mut sizes = vec![1u64];
    for _ in 0..n {
        let mut next = Vec::new();
        for g in &frontier {
            for s in gens {
                let h = mul(g, s);
                if !seen.contains(&h) {
                    if seen.len() >= cap {
                        return Err(GroupError::Budget(cap));
                    }
                    seen.insert(h.clone());
                    next.push(h);
                }
            }
        }
        frontier = next;
        sizes.push(seen.len() as u64);
    }
    Ok(sizes)
}

/// Exact-length images `φ(Σⁿ)`: level `i` is `{g·s : g in level i−1, s in gens}`.
fn exact_closure_size<F>(
    identity: &GroupElement,
    gens: &[GroupElement],
    n: usize,
    cap: usize,
    mul: F,
) -> Result<u64, GroupError>
where
    F: Fn(&GroupElement, &GroupElement) -> GroupElement,
{
    let mut level: HashSet<GroupElement> = HashSet::from([identity.clone()]);
    for _ in 0..n {
        let mut next = HashSet::new();
        for g in &level {
            for s in gens {
                next.insert(mul(g, s));
                if next.len() > cap {
                    return Err(GroupError::Budget(cap));
                }
            }
        }
        level = next;
    }
    Ok(level.len() as u64)
}

/// Ball sizes `|Sⁿ|` for `n = 0..=n_max` together with `log₂|Sⁿ|/n`.
#[derive(Clone, Debug, Serialize)]
pub struct BallTable {
    pub group: String,
    pub sizes: Vec<u64>,
    /// `log₂|Sⁿ|/n` for `n ≥ 1`; index 0 holds `None`.
    pub ratios: Vec<Option<f64>>,
    #[serde(skip)]
    spec: Option<GroupSpec>,
}

impl BallTable {
    pub fn new(spec: GroupSpec, sizes: Vec<u64>) -> Self {
        let ratios = sizes
            .iter()
            .enumerate()
            .map(|(n, &s)| (n > 0).then(|| (s as f64).log2() / n as f64))
            .collect();
        Self {
            group: spec.to_string(),
            sizes,
            ratios,
            spec: Some(spec),
        }
    }

    pub fn n_max(&self) -> usize {
        self.sizes.len() - 1
    }
}

/// Finite-horizon exponential growth rate.
#[derive(Clone, Debug, Serialize)]
pub struct EgrEstimate {
    pub n_max: usize,
    /// `log₂|Sⁿ|/n` at `n = n_max`.
    pub estimate: f64,
    /// The closed-form limit when the group is one of the instantiated kinds.
    pub known_limit: Option<f64>,
}

pub fn egr_estimate(table: &BallTable) -> EgrEstimate {
    let n = table.n_max();
    EgrEstimate {
        n_max: n,
        estimate: table.ratios[n].unwrap_or(0.0),
        known_limit: table.spec.map(|s| s.growth_limit()),
    }
}

/// A subset `H` of the group given as a decidable predicate on normal forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrefixConstraint {
    /// `H = G`.
    Any,
    /// Free group: the reduced word uses no inverse letters.
    PositiveWord,
    /// Every abelianization coordinate is non-negative (`ψ⁻¹(ℕᵏ)` for free
    /// groups, `ℕᵏ` itself for ℤᵏ).
    NonNegative,
}

impl PrefixConstraint {
    pub fn holds(&self, g: &GroupElement) -> bool {
        match (self, g) {
            (PrefixConstraint::Any, _) => true,
            (PrefixConstraint::PositiveWord, GroupElement::Free(w)) => w.iter().all(|&l| l > 0),
            (PrefixConstraint::PositiveWord, GroupElement::Abelian(v)) => v.iter().all(|&x| x >= 0),
            (PrefixConstraint::NonNegative, GroupElement::Abelian(v)) => v.iter().all(|&x| x >= 0),
            (PrefixConstraint::NonNegative, GroupElement::Free(w)) => {
                let k = w.iter().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0);
                let mut coords = vec![0i64; k];
                for &l in w {
                    coords[l.unsigned_abs() as usize - 1] += l.signum() as i64;
                }
                coords.iter().all(|&x| x >= 0)
            }
        }
    }
}

/// The language `L_φ(H, E)`: words `w` whose every prefix maps into `H` and
/// with `φ(w) ∈ E`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupLanguage {
    pub group: GroupSpec,
    /// `φ` on each alphabet symbol, indexed by rank.
    pub images: Vec<GroupElement>,
    pub constraint: PrefixConstraint,
    /// The finite target set `E`.
    pub targets: Vec<GroupElement>,
}

impl GroupLanguage {
    pub fn contains(&self, word: &[u8]) -> bool {
        let mut g = self.group.identity();
        if !self.constraint.holds(&g) {
            return false;
        }
        for &s in word {
            g = self.group.multiply(&g, &self.images[s as usize]).expect("validated images");
            if !self.constraint.holds(&g) {
                return false;
            }
        }
        self.targets.contains(&g)
    }

    /// Least `m` with `φ(Σ) ⊆ Sᵐ`, i.e. the longest normal form among symbol
    /// images in the word metric.
    pub fn image_radius(&self) -> usize {
        self.images
            .iter()
            .map(|g| match g {
                GroupElement::Free(w) => w.len(),
                GroupElement::Abelian(v) => v.iter().map(|x| x.unsigned_abs() as usize).sum(),
            })
            .max()
            .unwrap_or(0)
    }

    pub(crate) fn validate(&self) -> Result<(), GroupError> {
        for g in self.images.iter().chain(&self.targets) {
            self.group.check(g)?;
        }
        Ok(())
    }
}

/// Default element cap for image closures.
pub const DEFAULT_CLOSURE_CAP: usize = 20_000_000;

/// `|φ(F)|` for `F = Σ^(n)` (up-to) or `Σⁿ` (exact), computed by closure.
pub fn phi_image_size(lang: &Language, n: usize, mode: EnumMode) -> Result<u64, GroupError> {
    let hom = lang
        .homomorphism()
        .ok_or_else(|| GroupError::Unsupported(lang.to_string()))?;
    let group = hom.group;
    let mul = |g: &GroupElement, s: &GroupElement| group.multiply(g, s).expect("same group");
    match mode {
        EnumMode::UpTo => {
            let mut gens = hom.images.clone();
            gens.push(group.identity());
            closure_sizes(&group.identity(), &gens, n, DEFAULT_CLOSURE_CAP, mul)
                .map(|s| *s.last().unwrap())
        }
        EnumMode::Exact => {
            exact_closure_size(&group.identity(), &hom.images, n, DEFAULT_CLOSURE_CAP, mul)
        }
    }
}

/// `|E|·|φ(F)| + 1`, the upper bound on `γ(F, L_φ(H, E))`.
pub fn theorem_bound(lang: &Language, n: usize, mode: EnumMode) -> Result<u64, GroupError> {
    let hom = lang
        .homomorphism()
        .ok_or_else(|| GroupError::Unsupported(lang.to_string()))?;
    Ok(hom.targets.len() as u64 * phi_image_size(lang, n, mode)? + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    const CAP: usize = 5_000_000;

    #[test]
    fn free_cancellation() {
        let g = GroupSpec::Free(2);
        let a = g.generator(0);
        let ai = g.inverse(&a);
        assert_eq!(g.multiply(&a, &ai).unwrap(), g.identity());
        // (ab)(b⁻¹a) = aa
        let ab = GroupElement::Free(vec![1, 2]);
        let bia = GroupElement::Free(vec![-2, 1]);
        assert_eq!(g.multiply(&ab, &bia).unwrap(), GroupElement::Free(vec![1, 1]));
    }

    #[test]
    fn abelian_sum() {
        let g = GroupSpec::FreeAbelian(2);
        let x = GroupElement::Abelian(vec![1, 2]);
        let y = GroupElement::Abelian(vec![3, -2]);
        assert_eq!(g.multiply(&x, &y).unwrap(), GroupElement::Abelian(vec![4, 0]));
    }

    #[test]
    fn rank_mismatch_is_an_error() {
        let g = GroupSpec::FreeAbelian(2);
        let x = GroupElement::Abelian(vec![1, 2, 3]);
        assert!(matches!(
            g.multiply(&x, &g.identity()),
            Err(GroupError::RankMismatch { .. })
        ));
        let f = GroupSpec::Free(1);
        assert!(f.multiply(&GroupElement::Free(vec![2]), &f.identity()).is_err());
    }

    #[test]
    fn small_balls() {
        assert_eq!(GroupSpec::Free(2).ball_size(2, CAP).unwrap(), 17);
        assert_eq!(GroupSpec::FreeAbelian(2).ball_size(2, CAP).unwrap(), 13);
        assert_eq!(GroupSpec::Free(3).ball_size(0, CAP).unwrap(), 1);
        assert_eq!(GroupSpec::FreeAbelian(3).ball_size(0, CAP).unwrap(), 1);
    }

    #[test]
    fn ball_cap_is_enforced() {
        assert_eq!(
            GroupSpec::Free(2).ball_size(6, 100),
            Err(GroupError::Budget(100))
        );
    }

    #[test]
    fn egr_free_two() {
        let t = GroupSpec::Free(2).ball_table(10, CAP).unwrap();
        let e = egr_estimate(&t);
        assert!((e.estimate - 3f64.log2()).abs() < 0.15);
        assert_eq!(e.known_limit, Some(3f64.log2()));
        let expected = ((2.0 * 3f64.powi(10) - 1.0) as f64).log2() / 10.0;
        assert!((e.estimate - expected).abs() < 1e-12);
    }

    #[test]
    fn egr_abelian_two_decreases() {
        let t = GroupSpec::FreeAbelian(2).ball_table(10, CAP).unwrap();
        let e = egr_estimate(&t);
        // |S¹⁰| = 2·10² + 2·10 + 1 = 221
        assert_eq!(t.sizes[10], 221);
        assert!((e.estimate - 221f64.log2() / 10.0).abs() < 1e-12);
        let r: Vec<f64> = t.ratios.iter().flatten().copied().collect();
        assert!(r.windows(2).all(|p| p[1] < p[0]));
        assert_eq!(e.known_limit, Some(0.0));
    }

    #[test]
    fn rank_one_free_group_is_linear() {
        let t = GroupSpec::Free(1).ball_table(12, CAP).unwrap();
        for (n, &s) in t.sizes.iter().enumerate() {
            assert_eq!(s, 2 * n as u64 + 1);
        }
        assert_eq!(egr_estimate(&t).known_limit, Some(0.0));
    }

    #[test]
    fn constraint_predicates() {
        let w = GroupElement::Free(vec![1, 2, -1]);
        assert!(!PrefixConstraint::PositiveWord.holds(&w));
        // abelianization (0, 1)
        assert!(PrefixConstraint::NonNegative.holds(&w));
        assert!(!PrefixConstraint::NonNegative.holds(&GroupElement::Free(vec![-2, 1])));
    }

    #[test]
    fn parse_group_specs() {
        assert_eq!(GroupSpec::parse("free:2").unwrap(), GroupSpec::Free(2));
        assert_eq!(GroupSpec::parse("abelian:3").unwrap(), GroupSpec::FreeAbelian(3));
        assert!(GroupSpec::parse("free:0").is_err());
        assert!(GroupSpec::parse("cyclic:2").is_err());
    }
}
