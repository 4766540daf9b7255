//! Rows `χ_{F,L}(u)`, the congruence index `γ_L(F)`, and γ-tables.
//!
//! Two ways to count rows:
//!
//! * brute force over all prefixes up to a length bound, a certified lower
//!   bound that is reported as saturated once the last `Δ` lengths added no row;
//! * a finite row certificate (see [`crate::lang::abstraction`]) refined Moore
//!   style, which is exact.

pub mod bounds;
pub mod entropy;
pub mod probe;

use std::collections::HashMap;

use indexmap::IndexMap;
use rayon::prelude::*;
use serde::Serialize;

use crate::alphabet::{count_words, enumerate_words, Alphabet, EnumMode, Symbol, Word};
use crate::error::GammaError;
use crate::lang::{FiniteAbstraction, Language, DEFAULT_STATE_CAP};

pub use bounds::{bounds_for, Bounds};
pub use entropy::{entropy_estimate, EntropyEstimate, EntropyThresholds, Verdict};
pub use probe::{anbncn_census, palindrome_ell, regularity_probe, Census, ProbeReport, Stability};

/// A finite suffix family `F`, enumerated in length-lex order.
#[derive(Clone, Debug)]
pub struct SuffixSet {
    alphabet: Alphabet,
    n: usize,
    mode: Option<EnumMode>,
    words: Vec<Word>,
    index: HashMap<Word, usize>,
}

impl SuffixSet {
    /// `Σ^(n)` for [`EnumMode::UpTo`], `Σⁿ` for [`EnumMode::Exact`].
    pub fn new(alphabet: &Alphabet, n: usize, mode: EnumMode) -> Self {
        let words = enumerate_words(alphabet, n, mode);
        Self::build(alphabet.clone(), n, Some(mode), words)
    }

    /// An arbitrary finite family, deduplicated and sorted length-lex.
    pub fn explicit(alphabet: &Alphabet, mut words: Vec<Word>) -> Self {
        words.sort_by(|a, b| (a.len(), &a.0).cmp(&(b.len(), &b.0)));
        words.dedup();
        let n = words.iter().map(Word::len).max().unwrap_or(0);
        Self::build(alphabet.clone(), n, None, words)
    }

    fn build(alphabet: Alphabet, n: usize, mode: Option<EnumMode>, words: Vec<Word>) -> Self {
        let index = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        Self {
            alphabet,
            n,
            mode,
            words,
            index,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Longest suffix length.
    pub fn n(&self) -> usize {
        self.n
    }

    /// `None` for explicit families.
    pub fn mode(&self) -> Option<EnumMode> {
        self.mode
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn index_of(&self, w: &Word) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn union(&self, other: &SuffixSet) -> SuffixSet {
        let mut words = self.words.clone();
        words.extend_from_slice(&other.words);
        SuffixSet::explicit(&self.alphabet, words)
    }
}

/// Bit `j` is `[u·F[j] ∈ L]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Row {
    len: usize,
    bits: Box<[u64]>,
}

impl Row {
    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut words = Vec::new();
        let mut len = 0;
        for b in bits {
            if len % 64 == 0 {
                words.push(0u64);
            }
            if b {
                *words.last_mut().unwrap() |= 1 << (len % 64);
            }
            len += 1;
        }
        Self {
            len,
            bits: words.into_boxed_slice(),
        }
    }

    pub fn zero(len: usize) -> Self {
        Self {
            len,
            bits: vec![0; len.div_ceil(64)].into_boxed_slice(),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, j: usize) -> bool {
        assert!(j < self.len);
        self.bits[j / 64] >> (j % 64) & 1 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn ones(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Restriction to the first `m` positions.
    pub fn truncated(&self, m: usize) -> Row {
        Row::from_bits((0..m.min(self.len)).map(|j| self.get(j)))
    }
}

impl std::fmt::Debug for Row {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s: String = (0..self.len).map(|j| if self.get(j) { '1' } else { '0' }).collect();
        write!(f, "Row({s})")
    }
}

/// `χ_{F,L}(u)`.
pub fn row(lang: &Language, u: &[Symbol], suffixes: &SuffixSet) -> Row {
    let mut buf = Vec::with_capacity(u.len() + suffixes.n());
    buf.extend_from_slice(u);
    row_with(lang, &mut buf, u.len(), suffixes)
}

fn row_with(lang: &Language, buf: &mut Vec<Symbol>, base: usize, suffixes: &SuffixSet) -> Row {
    Row::from_bits(suffixes.words().iter().map(|w| {
        buf.truncate(base);
        buf.extend_from_slice(&w.0);
        lang.contains(buf)
    }))
}

/// One value of the γ sequence.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GammaRecord {
    pub n: usize,
    pub mode: EnumMode,
    pub gamma: u64,
    /// Certified equal to the true index, not just a lower bound.
    pub exact: bool,
    /// The last `Δ` explored prefix lengths added no row.
    pub saturated: bool,
    /// Longest prefix explored (the longest certificate witness for exact
    /// records).
    pub prefix_bound: usize,
    pub queries: u64,
    /// The query budget ran out; `gamma` is a lower bound from the completed
    /// prefix lengths.
    pub partial: bool,
    pub lower_bound: Option<u128>,
    pub upper_bound: Option<u128>,
}

/// Brute-force settings.
#[derive(Clone, Copy, Debug)]
pub struct BruteForce {
    pub prefix_bound: usize,
    /// Saturation window `Δ`.
    pub window: usize,
    /// Membership-query cap.
    pub budget: Option<u64>,
}

impl BruteForce {
    pub fn new(prefix_bound: usize) -> Self {
        Self {
            prefix_bound,
            window: 2,
            budget: None,
        }
    }

    pub fn window(mut self, window: usize) -> Self {
        self.window = window.max(1);
        self
    }

    pub fn budget(mut self, budget: u64) -> Self {
        self.budget = Some(budget);
        self
    }
}

/// Distinct rows with their first (shortest, length-lex least) witnesses.
#[derive(Clone, Debug)]
pub struct RowCensus {
    pub rows: IndexMap<Row, Word>,
    /// Number of new rows found at each prefix length.
    pub new_per_length: Vec<usize>,
    pub queries: u64,
    pub saturated: bool,
    /// Longest completed prefix length.
    pub prefix_bound: usize,
    /// Set if the budget stopped exploration early.
    pub exhausted: bool,
}

/// Explores prefixes by increasing length. Prefixes the language reports as
/// non-viable are not expanded; they all share the zero row, which is recorded
/// at the first length where one occurs, where full enumeration would first
/// see it too.
pub fn row_census(lang: &Language, suffixes: &SuffixSet, cfg: BruteForce) -> RowCensus {
    let k = lang.alphabet().len();
    let f = suffixes.len() as u64;
    let mut rows: IndexMap<Row, Word> = IndexMap::new();
    let mut new_per_length = Vec::new();
    let mut queries = 0u64;
    let mut frontier = Vec::new();
    let mut first_dead = None;
    let mut dead_recorded = false;
    if lang.is_viable(&[]) {
        frontier.push(Word::empty());
    } else {
        first_dead = Some(Word::empty());
    }
    let mut exhausted = false;
    let mut completed = None;
    for len in 0..=cfg.prefix_bound {
        if len > 0 {
            let mut next = Vec::with_capacity(frontier.len() * k);
            for u in &frontier {
                for s in 0..k {
                    let w = u.pushed(s as Symbol);
                    if lang.is_viable(&w.0) {
                        next.push(w);
                    } else if !dead_recorded && first_dead.is_none() {
                        first_dead = Some(w);
                    }
                }
            }
            frontier = next;
        }
        let cost = frontier.len() as u64 * f;
        if cfg.budget.is_some_and(|b| queries + cost > b) {
            exhausted = true;
            break;
        }
        queries += cost;
        let before = rows.len();
        for (r, u) in compute_rows(lang, &frontier, suffixes).into_iter().zip(&frontier) {
            rows.entry(r).or_insert_with(|| u.clone());
        }
        if let Some(w) = first_dead.take() {
            rows.entry(Row::zero(suffixes.len())).or_insert(w);
            dead_recorded = true;
        }
        new_per_length.push(rows.len() - before);
        completed = Some(len);
    }
    let prefix_bound = completed.unwrap_or(0);
    let done = new_per_length.len();
    let saturated = !exhausted
        && done > cfg.window
        && new_per_length[done - cfg.window..].iter().all(|&x| x == 0);
    RowCensus {
        rows,
        new_per_length,
        queries,
        saturated,
        prefix_bound,
        exhausted,
    }
}

fn compute_rows(lang: &Language, prefixes: &[Word], suffixes: &SuffixSet) -> Vec<Row> {
    prefixes
        .par_iter()
        .map_init(Vec::new, |buf, u| {
            buf.clear();
            buf.extend_from_slice(&u.0);
            row_with(lang, buf, u.len(), suffixes)
        })
        .collect()
}

/// Brute-force `γ(F, L)` over prefixes up to `cfg.prefix_bound`.
///
/// Always a lower bound. Marked exact only when the exploration saturated and
/// the language's row certificate gives the same count.
pub fn gamma_bruteforce(
    lang: &Language,
    suffixes: &SuffixSet,
    cfg: BruteForce,
) -> Result<GammaRecord, GammaError> {
    let census = row_census(lang, suffixes, cfg);
    let mode = suffixes.mode().unwrap_or(EnumMode::UpTo);
    let mut rec = GammaRecord {
        n: suffixes.n(),
        mode,
        gamma: census.rows.len().max(1) as u64,
        exact: false,
        saturated: census.saturated,
        prefix_bound: census.prefix_bound,
        queries: census.queries,
        partial: census.exhausted,
        lower_bound: None,
        upper_bound: None,
    };
    if census.exhausted {
        rec.saturated = false;
        return Err(GammaError::Budget {
            partial: Box::new(rec),
        });
    }
    if rec.saturated && suffixes.mode().is_some() {
        if let Ok(cert) = gamma_exact(lang, suffixes.n(), mode) {
            rec.exact = cert.gamma == rec.gamma;
        }
    }
    Ok(rec)
}

/// `γ` over an explicit prefix set instead of all bounded prefixes.
pub fn gamma_over_prefixes(lang: &Language, prefixes: &[Word], suffixes: &SuffixSet) -> u64 {
    let rows = compute_rows(lang, prefixes, suffixes);
    let mut seen: IndexMap<Row, ()> = IndexMap::new();
    for r in rows {
        seen.insert(r, ());
    }
    seen.len() as u64
}

/// Class ids of the certificate states under `Θ(F, L)` for `F = Σ^(n)` or `Σⁿ`.
pub fn certificate_classes(cert: &FiniteAbstraction, n: usize, mode: EnumMode) -> Vec<u32> {
    let k = cert.k;
    let q = cert.len();
    let acc: Vec<u32> = cert.accepting.iter().map(|&a| a as u32).collect();
    let mut cls = acc.clone();
    for _ in 0..n {
        let mut ids: HashMap<Vec<u32>, u32> = HashMap::new();
        let mut next = vec![0u32; q];
        let mut key = Vec::with_capacity(k + 1);
        for s in 0..q {
            key.clear();
            match mode {
                EnumMode::UpTo => key.push(cls[s]),
                EnumMode::Exact => {}
            }
            for a in 0..k {
                key.push(cls[cert.step(s, a as Symbol)]);
            }
            let fresh = ids.len() as u32;
            next[s] = *ids.entry(key.clone()).or_insert(fresh);
        }
        cls = next;
    }
    cls
}

/// Exact `γ` from the language's row certificate.
pub fn gamma_exact(lang: &Language, n: usize, mode: EnumMode) -> Result<GammaRecord, GammaError> {
    gamma_exact_capped(lang, n, mode, DEFAULT_STATE_CAP)
}

pub fn gamma_exact_capped(
    lang: &Language,
    n: usize,
    mode: EnumMode,
    cap: usize,
) -> Result<GammaRecord, GammaError> {
    let cert = lang
        .abstraction(n, cap)
        .ok_or_else(|| GammaError::NoAbstraction(lang.to_string()))??;
    if let Some(h) = cert.horizon.filter(|&h| h < n) {
        return Err(GammaError::Horizon {
            needed: n,
            available: h,
        });
    }
    let gamma = distinct(&certificate_classes(&cert, n, mode));
    Ok(GammaRecord {
        n,
        mode,
        gamma,
        exact: true,
        saturated: true,
        prefix_bound: cert.witness.iter().map(Word::len).max().unwrap_or(0),
        queries: 0,
        partial: false,
        lower_bound: None,
        upper_bound: None,
    })
}

fn distinct(cls: &[u32]) -> u64 {
    let mut v = cls.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len() as u64
}

/// Table settings.
#[derive(Clone, Copy, Debug)]
pub struct TableConfig {
    pub mode: EnumMode,
    /// Fixed prefix bound for brute force; `None` uses `2n + 2`.
    pub prefix_bound: Option<usize>,
    pub window: usize,
    /// Total membership queries across the table.
    pub budget: Option<u64>,
    /// Use row certificates where they cover `n`.
    pub use_certificates: bool,
}

impl Default for TableConfig {
    fn default() -> Self {
        Self {
            mode: EnumMode::UpTo,
            prefix_bound: None,
            window: 2,
            budget: None,
            use_certificates: true,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GammaTable {
    pub language: String,
    pub alphabet_size: usize,
    pub mode: EnumMode,
    pub records: Vec<GammaRecord>,
    #[serde(serialize_with = "bounds::serialize_h")]
    pub h_lower: Option<f64>,
    #[serde(serialize_with = "bounds::serialize_h")]
    pub h_upper: Option<f64>,
    pub queries: u64,
    pub partial: bool,
}

pub const CSV_HEADER: &str = "n,mode,gamma,exact,saturated,prefix_bound,lower_bound,upper_bound";

impl GammaTable {
    pub fn gammas(&self) -> Vec<u64> {
        self.records.iter().map(|r| r.gamma).collect()
    }

    pub fn to_csv(&self) -> String {
        let opt = |x: Option<u128>| x.map(|v| v.to_string()).unwrap_or_default();
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                r.n,
                r.mode,
                r.gamma,
                r.exact,
                r.saturated,
                r.prefix_bound,
                opt(r.lower_bound),
                opt(r.upper_bound)
            ));
        }
        out
    }
}

/// Default brute-force prefix bound for horizon `n`.
pub fn default_prefix_bound(n: usize) -> usize {
    2 * n + 2
}

/// `γ` for `n = 0..=n_max`. Budget exhaustion stops the table; the affected
/// record is kept with `partial` set.
pub fn gamma_table(lang: &Language, n_max: usize, cfg: TableConfig) -> GammaTable {
    let mut records = Vec::with_capacity(n_max + 1);
    let mut used = 0u64;
    let mut partial = false;
    for n in 0..=n_max {
        let exact = if cfg.use_certificates {
            gamma_exact(lang, n, cfg.mode).ok()
        } else {
            None
        };
        let mut rec = match exact {
            Some(r) => r,
            None => {
                let suffixes = SuffixSet::new(lang.alphabet(), n, cfg.mode);
                let bf = BruteForce {
                    prefix_bound: cfg.prefix_bound.unwrap_or_else(|| default_prefix_bound(n)),
                    window: cfg.window,
                    budget: cfg.budget.map(|b| b.saturating_sub(used)),
                };
                match gamma_bruteforce(lang, &suffixes, bf) {
                    Ok(r) => r,
                    Err(GammaError::Budget { partial: p }) => {
                        partial = true;
                        *p
                    }
                    Err(e) => unreachable!("brute force only fails on budget: {e}"),
                }
            }
        };
        used += rec.queries;
        if let Some(b) = bounds_for(lang, n, cfg.mode) {
            rec.lower_bound = b.gamma_lower;
            rec.upper_bound = b.gamma_upper;
        }
        records.push(rec);
        if partial {
            break;
        }
    }
    let h = bounds_for(lang, n_max.max(1), cfg.mode);
    GammaTable {
        language: lang.to_string(),
        alphabet_size: lang.alphabet().len(),
        mode: cfg.mode,
        records,
        h_lower: h.as_ref().and_then(|b| b.h_lower),
        h_upper: h.as_ref().and_then(|b| b.h_upper),
        queries: used,
        partial,
    }
}

/// `2^|F|`, saturating.
pub fn row_space_size(k: usize, n: usize, mode: EnumMode) -> u128 {
    let f = count_words(k, n, mode);
    if f >= 128 {
        u128::MAX
    } else {
        1u128 << f
    }
}
