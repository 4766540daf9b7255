mod common;

use std::collections::HashMap;

use proptest::prelude::*;

use common::*;
use entroscope::alphabet::{enumerate_words, EnumMode, Symbol, Word};
use entroscope::growth::{reduce, theorem_bound, GroupSpec};
use entroscope::metric::{dimension_estimate, random_triples, ultrametric_check};
use entroscope::nerode::{
    entropy_estimate, gamma_bruteforce, gamma_exact, row, row_census, BruteForce, GammaRecord,
    GammaTable, SuffixSet,
};
use entroscope::topo::build_truncated;
use entroscope::{Dfa, Language, LanguageSpec};

fn upto(l: &Language, n: usize) -> SuffixSet {
    SuffixSet::new(l.alphabet(), n, EnumMode::UpTo)
}

fn gamma(l: &Language, f: &SuffixSet, p: usize) -> GammaRecord {
    gamma_bruteforce(l, f, BruteForce::new(p)).unwrap()
}

prop_compose! {
    fn arb_dfa()(states in 1usize..=5)
        (delta in prop::collection::vec(prop::collection::vec(0..states, 2), states),
         acc in prop::collection::vec(any::<bool>(), states)) -> Dfa {
        let accepting: Vec<usize> = (0..acc.len()).filter(|&i| acc[i]).collect();
        Dfa::new(ab(), 0, &accepting, delta).unwrap()
    }
}

fn arb_word(k: u8, max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..k, 0..=max).prop_map(Word)
}

fn paren_langs() -> Vec<LanguageSpec> {
    vec![
        LanguageSpec::Dyck(1),
        LanguageSpec::Dfa(Dfa::from_json(&mod3_json("(", ")")).unwrap()),
        Language::parse("palin:()").unwrap().spec().clone(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn complement_is_an_involution(w in arb_word(2, 14), i in 0usize..3) {
        let s = paren_langs().swap_remove(i);
        let l = Language::new(s.clone()).unwrap();
        let nn = Language::new(LanguageSpec::Complement(Box::new(LanguageSpec::Complement(Box::new(s))))).unwrap();
        prop_assert_eq!(nn.contains_word(&w), l.contains_word(&w));
    }

    #[test]
    fn combinators_follow_truth_tables(w in arb_word(2, 14), i in 0usize..3, j in 0usize..3) {
        let ls = paren_langs();
        let (a, b) = (ls[i].clone(), ls[j].clone());
        let la = Language::new(a.clone()).unwrap().contains_word(&w);
        let lb = Language::new(b.clone()).unwrap().contains_word(&w);
        let u = Language::new(LanguageSpec::Union(Box::new(a.clone()), Box::new(b.clone()))).unwrap();
        let x = Language::new(LanguageSpec::Intersection(Box::new(a.clone()), Box::new(b.clone()))).unwrap();
        let na = Language::new(LanguageSpec::Complement(Box::new(a))).unwrap();
        prop_assert_eq!(u.contains_word(&w), la || lb);
        prop_assert_eq!(x.contains_word(&w), la && lb);
        prop_assert_eq!(na.contains_word(&w), !la);
    }

    #[test]
    fn gamma_is_complement_invariant(d in arb_dfa(), n in 0usize..4) {
        let l = Language::dfa(d.clone());
        let c = Language::new(LanguageSpec::Complement(Box::new(LanguageSpec::Dfa(d)))).unwrap();
        prop_assert_eq!(gamma(&l, &upto(&l, n), 7).gamma, gamma(&c, &upto(&c, n), 7).gamma);
    }

    #[test]
    fn union_and_meet_are_submultiplicative(a in arb_dfa(), b in arb_dfa(), n in 0usize..4) {
        let (sa, sb) = (LanguageSpec::Dfa(a), LanguageSpec::Dfa(b));
        let g = |s: LanguageSpec| {
            let l = Language::new(s).unwrap();
            gamma(&l, &upto(&l, n), 12).gamma
        };
        let (ga, gb) = (g(sa.clone()), g(sb.clone()));
        prop_assert!(g(LanguageSpec::Union(Box::new(sa.clone()), Box::new(sb.clone()))) <= ga * gb);
        prop_assert!(g(LanguageSpec::Intersection(Box::new(sa), Box::new(sb))) <= ga * gb);
    }

    #[test]
    fn gamma_is_monotone_and_bounded(d in arb_dfa()) {
        let reachable = d.reachable().len() as u64;
        let l = Language::dfa(d);
        let mut last = 0;
        for n in 0..=4 {
            let f = upto(&l, n);
            let g = gamma(&l, &f, 7).gamma;
            prop_assert!(g >= last && g >= 1 && g <= reachable);
            prop_assert!((g as u128) <= 1u128 << f.len());
            last = g;
        }
    }

    #[test]
    fn gamma_is_bounded_on_explicit_families(words in prop::collection::vec(arb_word(2, 4), 1..8), i in 0usize..3) {
        let l = Language::new(paren_langs().swap_remove(i)).unwrap();
        let f = SuffixSet::explicit(l.alphabet(), words);
        let g = gamma(&l, &f, 8).gamma;
        prop_assert!(g >= 1 && (g as u128) <= 1u128 << f.len());
    }

    #[test]
    fn certificate_matches_saturated_brute_force(d in arb_dfa(), n in 0usize..5) {
        let l = Language::dfa(d);
        let rec = gamma(&l, &upto(&l, n), 8);
        prop_assert!(rec.saturated);
        prop_assert_eq!(rec.gamma, gamma_exact(&l, n, EnumMode::UpTo).unwrap().gamma);
        prop_assert!(rec.exact);
    }

    #[test]
    fn reduction_is_canonical(
        w in prop::collection::vec(prop_oneof![-3i32..=-1, 1i32..=3], 0..16),
        v in prop::collection::vec(prop_oneof![-3i32..=-1, 1i32..=3], 0..16),
    ) {
        let mut joined = reduce(&w);
        joined.extend(reduce(&v));
        let mut wv = w.clone();
        wv.extend(&v);
        prop_assert_eq!(reduce(&joined), reduce(&wv));
        let r = reduce(&wv);
        prop_assert!(r.windows(2).all(|p| p[0] != -p[1]));
    }

    #[test]
    fn distance_is_an_ultrametric(seed in any::<u64>(), i in 0usize..3) {
        let l = Language::new(paren_langs().swap_remove(i)).unwrap();
        let rep = ultrametric_check(&l, &random_triples(l.alphabet(), 40, 8, seed), 4);
        prop_assert!(rep.pass, "{:?}", rep);
    }

    #[test]
    fn dimension_and_entropy_agree(steps in prop::collection::vec(0u64..40, 5..12), k in 1usize..5) {
        let mut g = 1;
        let records = steps.iter().enumerate().map(|(n, s)| {
            g += s * n as u64;
            GammaRecord {
                n, mode: EnumMode::UpTo, gamma: g, exact: true, saturated: true, prefix_bound: 0,
                queries: 0, partial: false, lower_bound: None, upper_bound: None,
            }
        }).collect();
        let t = GammaTable {
            language: "synthetic".into(), alphabet_size: k, mode: EnumMode::UpTo, records,
            h_lower: None, h_upper: None, queries: 0, partial: false,
        };
        let d = dimension_estimate(&t).unwrap();
        let e = entropy_estimate(&t).unwrap();
        prop_assert!(d.matches_entropy);
        prop_assert_eq!(d.verdict, e.verdict);
        for (a, b) in d.per_n.iter().zip(&e.per_n) {
            prop_assert_eq!(a.value.to_bits(), b.a_n.to_bits());
        }
    }

    #[test]
    fn truncated_profiles_match_gamma(d in arb_dfa(), m in 0usize..4) {
        let l = Language::dfa(d);
        let a = build_truncated(&l, m, 7, None).unwrap();
        prop_assert!(a.saturated);
        prop_assert_eq!(a.len() as u64, gamma(&l, &upto(&l, m), 7).gamma);
        for (p, u) in a.witnesses.iter().enumerate() {
            prop_assert_eq!(a.is_final(p), l.contains_word(u));
        }
    }
}

/// Reference stack evaluator on characters.
fn balanced(w: &[char], closer: &HashMap<char, char>) -> bool {
    let mut stack = Vec::new();
    for c in w {
        match closer.get(c) {
            Some(&close) => stack.push(close),
            None => {
                if stack.pop() != Some(*c) {
                    return false;
                }
            }
        }
    }
    stack.is_empty()
}

#[test]
fn dyck_membership_is_exhaustively_balanced() {
    for k in 1..=2usize {
        let l = Language::dyck(k);
        let syms = l.alphabet().symbols().to_vec();
        let closer: HashMap<char, char> = [('(', ')'), ('[', ']')][..k].iter().copied().collect();
        for len in 0..=12 {
            let total = (2 * k).pow(len as u32);
            let mut w: Vec<Symbol> = vec![0; len];
            for mut code in 0..total {
                for s in w.iter_mut() {
                    *s = (code % (2 * k)) as Symbol;
                    code /= 2 * k;
                }
                let chars: Vec<char> = w.iter().map(|&s| syms[s as usize]).collect();
                assert_eq!(l.contains(&w), balanced(&chars, &closer), "{chars:?}");
            }
        }
    }
}

#[test]
fn dyck_exact_mode_lower_bound() {
    for k in 1..=2usize {
        let l = Language::dyck(k);
        for n in 0..=5 {
            let f = SuffixSet::new(l.alphabet(), n, EnumMode::Exact);
            let want = (k as u64).pow(n as u32);
            assert!(gamma(&l, &f, n + 2).gamma >= want);
            assert!(gamma_exact(&l, n, EnumMode::Exact).unwrap().gamma >= want);
        }
    }
}

#[test]
fn group_languages_respect_the_theorem_bound() {
    for s in ["dyck:1", "dyck:2", "cdyck:2", "countdiff:a,b,1", "countdiff:a,b,3"] {
        let l = Language::parse(s).unwrap();
        for n in 0..=6 {
            let g = gamma_exact(&l, n, EnumMode::UpTo).unwrap().gamma;
            assert!(g <= theorem_bound(&l, n, EnumMode::UpTo).unwrap(), "{s} n={n}");
        }
    }
}

#[test]
fn free_growth_ratio_approaches_from_above() {
    // |Sⁿ| = 2·3ⁿ − 1, so log₂|Sⁿ|/n = log₂3 + (1 + o(1))/n
    let target = 3f64.log2();
    let t = GroupSpec::Free(2).ball_table(12, 1 << 22).unwrap();
    for n in 5..=12 {
        let r = t.ratios[n].unwrap();
        assert!(r >= target - 0.01 && r <= target + 0.3, "n={n}: {r}");
    }
}

#[test]
fn rows_do_not_depend_on_thread_count() {
    let l = Language::parse("palin:ab").unwrap();
    let f = upto(&l, 3);
    let census = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| row_census(&l, &f, BruteForce::new(10)).rows)
    };
    let one = census(1);
    let many = census(4);
    assert!(one.iter().eq(many.iter()));
}

#[test]
fn shifted_profiles_are_well_defined() {
    // prefixes with equal m-profiles have equal (m−1)-profiles after any symbol
    for (s, p) in [("dyck:1", 7), ("palin:ab", 9), ("anbncn", 9)] {
        let l = Language::parse(s).unwrap();
        let k = l.alphabet().len();
        for m in 1..=3 {
            let (top, below) = (upto(&l, m), upto(&l, m - 1));
            let mut seen: HashMap<_, Vec<_>> = HashMap::new();
            for u in enumerate_words(l.alphabet(), p, EnumMode::UpTo) {
                let next: Vec<_> = (0..k).map(|s| row(&l, &u.pushed(s as Symbol).0, &below)).collect();
                let prev = seen.entry(row(&l, &u.0, &top)).or_insert_with(|| next.clone());
                assert_eq!(*prev, next, "{s} m={m}");
            }
        }
    }
}

#[test]
fn infinite_entropy_rows_are_all_distinct() {
    let l = Language::parse("infent").unwrap();
    for n in 1..=3usize {
        let f = SuffixSet::new(l.alphabet(), n, EnumMode::Exact);
        let prefixes = enumerate_words(l.alphabet(), 1 << n, EnumMode::Exact);
        let distinct: std::collections::HashSet<_> = prefixes.iter().map(|u| row(&l, &u.0, &f)).collect();
        assert!(distinct.len() as u64 >= 1 << (1 << n));
    }
}
