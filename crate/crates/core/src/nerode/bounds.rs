//! Known bounds on `γ(Σ^(n), L)` and on `h(L)` for catalog languages.

use serde::{Serialize, Serializer};

use crate::alphabet::{count_words, EnumMode};
use crate::growth::theorem_bound;
use crate::lang::{Language, LanguageSpec};

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Bounds {
    pub gamma_lower: Option<u128>,
    pub gamma_upper: Option<u128>,
    #[serde(serialize_with = "serialize_h")]
    pub h_lower: Option<f64>,
    #[serde(serialize_with = "serialize_h")]
    pub h_upper: Option<f64>,
}

/// JSON has no infinity; an infinite entropy bound is written as `"inf"`.
pub(crate) fn serialize_h<S: Serializer>(h: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match h {
        Some(x) if x.is_infinite() => s.serialize_str(if *x > 0.0 { "inf" } else { "-inf" }),
        Some(x) => s.serialize_f64(*x),
        None => s.serialize_none(),
    }
}

fn pow(base: u128, e: usize) -> Option<u128> {
    base.checked_pow(u32::try_from(e).ok()?)
}

/// Bounds for the languages a theorem covers; `None` otherwise.
pub fn bounds_for(lang: &Language, n: usize, mode: EnumMode) -> Option<Bounds> {
    let k = lang.alphabet().len();
    let group_upper = || theorem_bound(lang, n, mode).ok().map(u128::from);
    let zero_entropy = |gamma_upper| Bounds {
        gamma_lower: None,
        gamma_upper,
        h_lower: Some(0.0),
        h_upper: Some(0.0),
    };
    Some(match lang.spec() {
        LanguageSpec::Dyck(sorts) => {
            let s = *sorts as f64;
            Bounds {
                // one class per word of length n, each with its own closing word
                gamma_lower: match mode {
                    EnumMode::Exact => pow(*sorts as u128, n),
                    EnumMode::UpTo => None,
                },
                gamma_upper: group_upper(),
                h_lower: Some(s.log2()),
                h_upper: Some((2.0 * s - 1.0).log2()),
            }
        }
        LanguageSpec::CommutativeDyck(_) | LanguageSpec::CountDiff { .. } => {
            zero_entropy(group_upper())
        }
        LanguageSpec::Group { .. } => Bounds {
            gamma_upper: group_upper(),
            ..Bounds::default()
        },
        LanguageSpec::Palindromes(_) => {
            let kn = pow(k as u128, n);
            Bounds {
                gamma_lower: match mode {
                    EnumMode::UpTo => kn,
                    EnumMode::Exact => None,
                },
                gamma_upper: match mode {
                    EnumMode::UpTo => kn
                        .and_then(|x| x.checked_mul(pow(2, n)?))
                        .and_then(|x| x.checked_add(count_words(k, n, EnumMode::UpTo))),
                    EnumMode::Exact => None,
                },
                h_lower: Some((k as f64).log2()),
                h_upper: Some((2.0 * k as f64).log2()),
            }
        }
        LanguageSpec::Dfa(d) => zero_entropy(Some(d.reachable().len() as u128)),
        LanguageSpec::Empty(_) | LanguageSpec::Universal(_) => zero_entropy(Some(1)),
        LanguageSpec::AnBnCn => zero_entropy(None),
        LanguageSpec::InfiniteEntropy => Bounds {
            gamma_lower: match mode {
                EnumMode::Exact => pow(2, 1usize.checked_shl(n as u32)?),
                EnumMode::UpTo => None,
            },
            gamma_upper: None,
            h_lower: Some(f64::INFINITY),
            h_upper: Some(f64::INFINITY),
        },
        _ => return None,
    })
}
