//! Languages: the catalog, DFA-backed languages, boolean combinations, and the
//! textual spec grammar used by the CLI.
//!
//! ```text
//! dyck:K  cdyck:K  palin:ALPHA  anbncn  countdiff:A,B,M  infent
//! dfa:PATH  empty:ALPHA  universal:ALPHA  not(X)  and(X,Y)  or(X,Y)
//! ```

pub mod abstraction;
pub mod catalog;
pub mod dfa;

use std::fmt;
use std::str::FromStr;

use crate::alphabet::{Alphabet, Symbol, Word};
use crate::error::{GammaError, InputError};
use crate::growth::{GroupElement, GroupLanguage, GroupSpec, PrefixConstraint};

pub use abstraction::{FiniteAbstraction, DEFAULT_STATE_CAP};
pub use dfa::Dfa;

use abstraction::{
    materialize, AnBnCnCert, CommutativeDyckCert, ConstCert, CountDiffCert, DfaCert, DyckCert,
};

#[derive(Clone, Debug)]
pub enum LanguageSpec {
    Empty(Alphabet),
    Universal(Alphabet),
    Dfa(Dfa),
    /// Well-bracketed words over `k` bracket sorts.
    Dyck(usize),
    /// Words where every sort is balanced and no prefix closes more brackets
    /// of a sort than it opened; sorts commute.
    CommutativeDyck(usize),
    /// Even-length palindromes.
    Palindromes(Alphabet),
    AnBnCn,
    /// `|w|_a − |w|_b = m`.
    CountDiff { a: char, b: char, m: u32 },
    /// A language `L_φ(H, E)` given directly.
    Group {
        alphabet: Alphabet,
        language: GroupLanguage,
    },
    InfiniteEntropy,
    Complement(Box<LanguageSpec>),
    Union(Box<LanguageSpec>, Box<LanguageSpec>),
    Intersection(Box<LanguageSpec>, Box<LanguageSpec>),
}

/// A validated language together with its alphabet.
#[derive(Clone, Debug)]
pub struct Language {
    spec: LanguageSpec,
    alphabet: Alphabet,
}

impl Language {
    pub fn new(spec: LanguageSpec) -> Result<Self, InputError> {
        let alphabet = alphabet_of(&spec)?;
        Ok(Self { spec, alphabet })
    }

    /// Parses a language spec string. `dfa:PATH` reads the file.
    pub fn parse(text: &str) -> Result<Self, InputError> {
        Self::new(parse_spec(text.trim())?)
    }

    pub fn dyck(k: usize) -> Self {
        Self::new(LanguageSpec::Dyck(k)).expect("valid sort count")
    }

    pub fn dfa(dfa: Dfa) -> Self {
        Self::new(LanguageSpec::Dfa(dfa)).expect("a DFA carries its alphabet")
    }

    pub fn spec(&self) -> &LanguageSpec {
        &self.spec
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn contains(&self, w: &[Symbol]) -> bool {
        member(&self.spec, w)
    }

    pub fn contains_word(&self, w: &Word) -> bool {
        member(&self.spec, &w.0)
    }

    pub fn contains_str(&self, text: &str) -> Result<bool, InputError> {
        Ok(self.contains(&self.alphabet.parse(text)?.0))
    }

    /// Conservative viability: `false` only if no extension of `w` lies in the
    /// language, so the row of `w` is zero for every suffix family.
    pub fn is_viable(&self, w: &[Symbol]) -> bool {
        viable(&self.spec, w)
    }

    /// The group presentation `L = L_φ(H, E)` when the language has one.
    pub fn homomorphism(&self) -> Option<GroupLanguage> {
        let bracket = |group: GroupSpec, k: usize, constraint| {
            let mut images = Vec::with_capacity(2 * k);
            for i in 0..k {
                let g = group.generator(i);
                images.push(g.clone());
                images.push(group.inverse(&g));
            }
            GroupLanguage {
                group,
                images,
                constraint,
                targets: vec![group.identity()],
            }
        };
        match &self.spec {
            LanguageSpec::Dyck(k) => Some(bracket(GroupSpec::Free(*k), *k, PrefixConstraint::PositiveWord)),
            LanguageSpec::CommutativeDyck(k) => Some(bracket(
                GroupSpec::FreeAbelian(*k),
                *k,
                PrefixConstraint::NonNegative,
            )),
            LanguageSpec::CountDiff { m, .. } => Some(GroupLanguage {
                group: GroupSpec::FreeAbelian(1),
                images: vec![GroupElement::Abelian(vec![1]), GroupElement::Abelian(vec![-1])],
                constraint: PrefixConstraint::Any,
                targets: vec![GroupElement::Abelian(vec![*m as i64])],
            }),
            LanguageSpec::Group { language, .. } => Some(language.clone()),
            _ => None,
        }
    }

    /// A finite row certificate valid for suffix lengths up to `horizon`, if
    /// the language has one.
    pub fn abstraction(
        &self,
        horizon: usize,
        cap: usize,
    ) -> Option<Result<FiniteAbstraction, GammaError>> {
        certificate(&self.spec, &self.alphabet, horizon, cap)
    }

    /// The defining DFA, for DFA-backed languages.
    pub fn as_dfa(&self) -> Option<&Dfa> {
        match &self.spec {
            LanguageSpec::Dfa(d) => Some(d),
            _ => None,
        }
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_spec(&self.spec, f)
    }
}

impl FromStr for Language {
    type Err = InputError;
    fn from_str(s: &str) -> Result<Self, InputError> {
        Language::parse(s)
    }
}

fn write_spec(spec: &LanguageSpec, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match spec {
        LanguageSpec::Empty(a) => write!(f, "empty:{a}"),
        LanguageSpec::Universal(a) => write!(f, "universal:{a}"),
        LanguageSpec::Dfa(d) => match d.name() {
            Some(name) => write!(f, "dfa:{name}"),
            None => write!(f, "dfa:<{} states>", d.states()),
        },
        LanguageSpec::Dyck(k) => write!(f, "dyck:{k}"),
        LanguageSpec::CommutativeDyck(k) => write!(f, "cdyck:{k}"),
        LanguageSpec::Palindromes(a) => write!(f, "palin:{a}"),
        LanguageSpec::AnBnCn => f.write_str("anbncn"),
        LanguageSpec::CountDiff { a, b, m } => write!(f, "countdiff:{a},{b},{m}"),
        LanguageSpec::Group { language, .. } => write!(f, "group:{}", language.group),
        LanguageSpec::InfiniteEntropy => f.write_str("infent"),
        LanguageSpec::Complement(x) => {
            f.write_str("not(")?;
            write_spec(x, f)?;
            f.write_str(")")
        }
        LanguageSpec::Union(x, y) | LanguageSpec::Intersection(x, y) => {
            f.write_str(if matches!(spec, LanguageSpec::Union(..)) { "or(" } else { "and(" })?;
            write_spec(x, f)?;
            f.write_str(",")?;
            write_spec(y, f)?;
            f.write_str(")")
        }
    }
}

fn alphabet_of(spec: &LanguageSpec) -> Result<Alphabet, InputError> {
    let bad = |reason: String| InputError::BadSpec {
        spec: spec_string(spec),
        reason,
    };
    Ok(match spec {
        LanguageSpec::Empty(a) | LanguageSpec::Universal(a) | LanguageSpec::Palindromes(a) => {
            a.clone()
        }
        LanguageSpec::Dfa(d) => d.alphabet().clone(),
        LanguageSpec::Dyck(k) | LanguageSpec::CommutativeDyck(k) => {
            if *k == 0 || *k > catalog::MAX_SORTS {
                return Err(bad(format!(
                    "sort count must be between 1 and {}",
                    catalog::MAX_SORTS
                )));
            }
            catalog::bracket_alphabet(*k)
        }
        LanguageSpec::AnBnCn => Alphabet::new("abc".chars())?,
        LanguageSpec::CountDiff { a, b, .. } => Alphabet::new([*a, *b])?,
        LanguageSpec::Group { alphabet, language } => {
            if language.images.len() != alphabet.len() {
                return Err(bad(format!(
                    "{} symbol images for {} symbols",
                    language.images.len(),
                    alphabet.len()
                )));
            }
            language.validate().map_err(|e| bad(e.to_string()))?;
            alphabet.clone()
        }
        LanguageSpec::InfiniteEntropy => Alphabet::new("ab".chars())?,
        LanguageSpec::Complement(x) => alphabet_of(x)?,
        LanguageSpec::Union(x, y) | LanguageSpec::Intersection(x, y) => {
            let (l, r) = (alphabet_of(x)?, alphabet_of(y)?);
            if l != r {
                return Err(InputError::AlphabetMismatch {
                    left: l.to_string(),
                    right: r.to_string(),
                });
            }
            l
        }
    })
}

fn spec_string(spec: &LanguageSpec) -> String {
    struct D<'a>(&'a LanguageSpec);
    impl fmt::Display for D<'_> {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            write_spec(self.0, f)
        }
    }
    D(spec).to_string()
}

fn member(spec: &LanguageSpec, w: &[Symbol]) -> bool {
    match spec {
        LanguageSpec::Empty(_) => false,
        LanguageSpec::Universal(_) => true,
        LanguageSpec::Dfa(d) => d.accepts(w),
        LanguageSpec::Dyck(_) => catalog::dyck(w),
        LanguageSpec::CommutativeDyck(k) => catalog::commutative_dyck(*k, w),
        LanguageSpec::Palindromes(_) => catalog::palindrome(w),
        LanguageSpec::AnBnCn => catalog::anbncn(w),
        LanguageSpec::CountDiff { m, .. } => catalog::count_diff(*m, w),
        LanguageSpec::Group { language, .. } => language.contains(w),
        LanguageSpec::InfiniteEntropy => catalog::infinite_entropy(w),
        LanguageSpec::Complement(x) => !member(x, w),
        LanguageSpec::Union(x, y) => member(x, w) || member(y, w),
        LanguageSpec::Intersection(x, y) => member(x, w) && member(y, w),
    }
}

fn viable(spec: &LanguageSpec, w: &[Symbol]) -> bool {
    match spec {
        LanguageSpec::Empty(_) => false,
        LanguageSpec::Dfa(d) => d.is_live(d.run_from(d.initial(), w)),
        LanguageSpec::Dyck(_) => catalog::dyck_viable(w),
        LanguageSpec::CommutativeDyck(k) => catalog::commutative_dyck_viable(*k, w),
        LanguageSpec::AnBnCn => catalog::anbncn_viable(w),
        LanguageSpec::Group { language, .. } => {
            // the prefix constraint is inherited by every extension
            let g0 = language.group.identity();
            let mut g = g0;
            if !language.constraint.holds(&g) {
                return false;
            }
            for &s in w {
                g = language
                    .group
                    .multiply(&g, &language.images[s as usize])
                    .expect("validated images");
                if !language.constraint.holds(&g) {
                    return false;
                }
            }
            true
        }
        LanguageSpec::Union(x, y) => viable(x, w) || viable(y, w),
        LanguageSpec::Intersection(x, y) => viable(x, w) && viable(y, w),
        LanguageSpec::Universal(_)
        | LanguageSpec::Palindromes(_)
        | LanguageSpec::CountDiff { .. }
        | LanguageSpec::InfiniteEntropy
        | LanguageSpec::Complement(_) => true,
    }
}

fn certificate(
    spec: &LanguageSpec,
    alphabet: &Alphabet,
    horizon: usize,
    cap: usize,
) -> Option<Result<FiniteAbstraction, GammaError>> {
    let k = alphabet.len();
    let h = Some(horizon);
    Some(match spec {
        LanguageSpec::Empty(_) => materialize(&ConstCert(false), k, None, cap),
        LanguageSpec::Universal(_) => materialize(&ConstCert(true), k, None, cap),
        LanguageSpec::Dfa(d) => materialize(&DfaCert(d), k, None, cap),
        LanguageSpec::Dyck(_) => materialize(&DyckCert { horizon }, k, h, cap),
        LanguageSpec::CommutativeDyck(sorts) => {
            materialize(&CommutativeDyckCert { k: *sorts, horizon }, k, h, cap)
        }
        LanguageSpec::CountDiff { m, .. } => materialize(&CountDiffCert { m: *m, horizon }, k, h, cap),
        LanguageSpec::AnBnCn => materialize(&AnBnCnCert { horizon }, k, h, cap),
        LanguageSpec::Complement(x) => {
            return certificate(x, alphabet, horizon, cap).map(|r| r.map(|a| a.complemented()))
        }
        _ => return None,
    })
}

// ---- spec grammar ----

fn parse_spec(text: &str) -> Result<LanguageSpec, InputError> {
    let bad = |reason: &str| InputError::BadSpec {
        spec: text.to_string(),
        reason: reason.to_string(),
    };
    if let Some(inner) = call_args(text, "not") {
        return Ok(LanguageSpec::Complement(Box::new(parse_spec(inner)?)));
    }
    for (name, union) in [("or", true), ("and", false)] {
        if let Some(inner) = call_args(text, name) {
            let (x, y) = split_pair(inner).ok_or_else(|| bad("expected two operands"))??;
            let (x, y) = (Box::new(x), Box::new(y));
            return Ok(if union {
                LanguageSpec::Union(x, y)
            } else {
                LanguageSpec::Intersection(x, y)
            });
        }
    }
    let (head, arg) = match text.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (text, None),
    };
    let alpha = |a: Option<&str>| -> Result<Alphabet, InputError> {
        let a = a.ok_or_else(|| bad("missing alphabet"))?;
        Alphabet::new(a.chars())
    };
    let sorts = |a: Option<&str>| -> Result<usize, InputError> {
        a.ok_or_else(|| bad("missing sort count"))?
            .parse::<usize>()
            .map_err(|_| bad("sort count must be a positive integer"))
    };
    match head {
        "dyck" => Ok(LanguageSpec::Dyck(sorts(arg)?)),
        "cdyck" => Ok(LanguageSpec::CommutativeDyck(sorts(arg)?)),
        "palin" => Ok(LanguageSpec::Palindromes(alpha(arg)?)),
        "empty" => Ok(LanguageSpec::Empty(alpha(arg)?)),
        "universal" => Ok(LanguageSpec::Universal(alpha(arg)?)),
        "anbncn" if arg.is_none() => Ok(LanguageSpec::AnBnCn),
        "infent" if arg.is_none() => Ok(LanguageSpec::InfiniteEntropy),
        "countdiff" => {
            let parts: Vec<&str> = arg.ok_or_else(|| bad("expected A,B,M"))?.split(',').collect();
            let [a, b, m] = parts[..] else {
                return Err(bad("expected A,B,M"));
            };
            let one = |t: &str| {
                let mut it = t.chars();
                match (it.next(), it.next()) {
                    (Some(c), None) => Ok(c),
                    _ => Err(InputError::BadToken(t.to_string())),
                }
            };
            let m = m
                .parse::<u32>()
                .map_err(|_| bad("offset must be a non-negative integer"))?;
            Ok(LanguageSpec::CountDiff {
                a: one(a)?,
                b: one(b)?,
                m,
            })
        }
        "dfa" => {
            let path = arg.filter(|p| !p.is_empty()).ok_or_else(|| bad("missing path"))?;
            let src = std::fs::read_to_string(path).map_err(|source| InputError::Io {
                path: path.to_string(),
                source,
            })?;
            Ok(LanguageSpec::Dfa(Dfa::from_json(&src)?.with_name(path)))
        }
        _ => Err(bad("unknown language")),
    }
}

/// `name(inner)` with balanced outer parentheses.
fn call_args<'a>(text: &'a str, name: &str) -> Option<&'a str> {
    text.strip_prefix(name)?.strip_prefix('(')?.strip_suffix(')')
}

/// Splits `x,y` at the first comma for which both sides parse. Commas and
/// parentheses can also be alphabet symbols, so the split is by trial.
fn split_pair(inner: &str) -> Option<Result<(LanguageSpec, LanguageSpec), InputError>> {
    let mut last_err = None;
    for (i, _) in inner.match_indices(',') {
        match (parse_spec(&inner[..i]), parse_spec(&inner[i + 1..])) {
            (Ok(x), Ok(y)) => return Some(Ok((x, y))),
            (Err(e), _) | (_, Err(e)) => last_err = Some(e),
        }
    }
    last_err.map(Err)
}
