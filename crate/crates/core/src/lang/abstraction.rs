//! Finite row certificates.
//!
//! A certificate for horizon `H` is a deterministic automaton over the
//! language's alphabet whose states stand for prefixes. It is exact on every
//! state whose minimal completion into the language is at most `H` symbols
//! long, and it sends every other prefix to an absorbing sink with the zero row.
//! Two consequences hold for every `n ≤ H`:
//!
//! * the abstract row of each reachable state over `Σ^(n)` equals the real row
//!   of the BFS witness prefix that reaches it;
//! * every real prefix row over `Σ^(n)` occurs among the abstract rows.
//!
//! So the number of distinct abstract rows is exactly `γ(Σ^(n), L)`. The
//! certificate does not claim that each individual prefix is mapped to its own
//! row: a prefix can leave the exact region and come back, and the sink then
//! forgets it. `audit` in the test suite checks both set-level facts against
//! brute force.

use std::collections::HashMap;
use std::hash::Hash;

use smallvec::SmallVec;

use crate::alphabet::{Symbol, Word};
use crate::error::GammaError;
use crate::lang::dfa::Dfa;

/// Default bound on the number of materialized states.
pub const DEFAULT_STATE_CAP: usize = 4_000_000;

/// Abstract state machine for one language at one horizon.
pub(crate) trait RowCertificate {
    type State: Clone + Eq + Hash;
    fn initial(&self) -> Self::State;
    fn step(&self, q: &Self::State, s: Symbol) -> Self::State;
    fn accepting(&self, q: &Self::State) -> bool;
}

/// An explicit certificate: states `0..len`, BFS-numbered from the initial
/// state, each with a shortest witness prefix.
#[derive(Clone, Debug)]
pub struct FiniteAbstraction {
    /// Largest suffix length the certificate is valid for, `None` if unbounded.
    pub horizon: Option<usize>,
    pub k: usize,
    pub accepting: Vec<bool>,
    /// `delta[q * k + s]`
    pub delta: Vec<u32>,
    pub witness: Vec<Word>,
}

impl FiniteAbstraction {
    pub fn len(&self) -> usize {
        self.accepting.len()
    }

    pub fn is_empty(&self) -> bool {
        self.accepting.is_empty()
    }

    #[inline]
    pub fn step(&self, q: usize, s: Symbol) -> usize {
        self.delta[q * self.k + s as usize] as usize
    }

    pub fn covers(&self, n: usize) -> bool {
        self.horizon.is_none_or(|h| n <= h)
    }

    /// Flips acceptance; the complement of the language has the same
    /// certificate with the opposite accepting set.
    pub fn complemented(mut self) -> Self {
        for a in &mut self.accepting {
            *a = !*a;
        }
        self
    }
}

pub(crate) fn materialize<C: RowCertificate>(
    cert: &C,
    k: usize,
    horizon: Option<usize>,
    cap: usize,
) -> Result<FiniteAbstraction, GammaError> {
    let mut ids: HashMap<C::State, u32> = HashMap::new();
    let mut states = vec![cert.initial()];
    let mut witness = vec![Word::empty()];
    ids.insert(states[0].clone(), 0);
    let mut delta = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let q = states[i].clone();
        for s in 0..k {
            let t = cert.step(&q, s as Symbol);
            let id = match ids.get(&t) {
                Some(&id) => id,
                None => {
                    if states.len() >= cap {
                        return Err(GammaError::StateCap(cap));
                    }
                    let id = states.len() as u32;
                    ids.insert(t.clone(), id);
                    witness.push(witness[i].pushed(s as Symbol));
                    states.push(t);
                    id
                }
            };
            delta.push(id);
        }
        i += 1;
    }
    let accepting = states.iter().map(|q| cert.accepting(q)).collect();
    Ok(FiniteAbstraction {
        horizon,
        k,
        accepting,
        delta,
        witness,
    })
}

pub(crate) struct DfaCert<'a>(pub &'a Dfa);

impl RowCertificate for DfaCert<'_> {
    type State = usize;
    fn initial(&self) -> usize {
        self.0.initial()
    }
    fn step(&self, q: &usize, s: Symbol) -> usize {
        self.0.step(*q, s)
    }
    fn accepting(&self, q: &usize) -> bool {
        self.0.is_accepting(*q)
    }
}

/// The whole alphabet accepted or rejected: a single state.
pub(crate) struct ConstCert(pub bool);

impl RowCertificate for ConstCert {
    type State = ();
    fn initial(&self) {}
    fn step(&self, _: &(), _: Symbol) {}
    fn accepting(&self, _: &()) -> bool {
        self.0
    }
}

/// Exact bracket stack while its depth stays within the horizon.
pub(crate) struct DyckCert {
    pub horizon: usize,
}

impl RowCertificate for DyckCert {
    type State = Option<SmallVec<[Symbol; 16]>>;
    fn initial(&self) -> Self::State {
        Some(SmallVec::new())
    }
    fn step(&self, q: &Self::State, s: Symbol) -> Self::State {
        let mut st = q.clone()?;
        let sort = s >> 1;
        if s & 1 == 0 {
            if st.len() + 1 > self.horizon {
                return None;
            }
            st.push(sort);
        } else if st.pop() != Some(sort) {
            return None;
        }
        Some(st)
    }
    fn accepting(&self, q: &Self::State) -> bool {
        q.as_ref().is_some_and(|st| st.is_empty())
    }
}

/// Exact per-sort counters while their sum stays within the horizon.
pub(crate) struct CommutativeDyckCert {
    pub k: usize,
    pub horizon: usize,
}

impl RowCertificate for CommutativeDyckCert {
    type State = Option<SmallVec<[u32; 8]>>;
    fn initial(&self) -> Self::State {
        Some(SmallVec::from_elem(0, self.k))
    }
    fn step(&self, q: &Self::State, s: Symbol) -> Self::State {
        let mut c = q.clone()?;
        let sort = (s >> 1) as usize;
        if s & 1 == 0 {
            if c.iter().sum::<u32>() as usize + 1 > self.horizon {
                return None;
            }
            c[sort] += 1;
        } else {
            c[sort] = c[sort].checked_sub(1)?;
        }
        Some(c)
    }
    fn accepting(&self, q: &Self::State) -> bool {
        q.as_ref().is_some_and(|c| c.iter().all(|&x| x == 0))
    }
}

/// Counter `|u|_a − |u|_b`. Values farther than the horizon from `m` on the
/// outside of the range swept from 0 are absorbed.
pub(crate) struct CountDiffCert {
    pub m: u32,
    pub horizon: usize,
}

impl RowCertificate for CountDiffCert {
    type State = Option<i64>;
    fn initial(&self) -> Option<i64> {
        Some(0)
    }
    fn step(&self, q: &Option<i64>, s: Symbol) -> Option<i64> {
        let c = (*q)? + if s == 0 { 1 } else { -1 };
        let m = self.m as i64;
        let h = self.horizon as i64;
        if c > m + h || c < 0.min(m - h) {
            None
        } else {
            Some(c)
        }
    }
    fn accepting(&self, q: &Option<i64>) -> bool {
        *q == Some(self.m as i64)
    }
}

/// `aⁱ`, `aⁱbʲ` (`1 ≤ j ≤ i`) and `aᵏbᵏcˡ` (`1 ≤ l ≤ k`, keyed by `k − l`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub(crate) enum AnBnCnState {
    A(u32),
    B(u32, u32),
    C(u32),
    Sink,
}

pub(crate) struct AnBnCnCert {
    pub horizon: usize,
}

impl RowCertificate for AnBnCnCert {
    type State = AnBnCnState;
    fn initial(&self) -> AnBnCnState {
        AnBnCnState::A(0)
    }
    fn step(&self, q: &AnBnCnState, s: Symbol) -> AnBnCnState {
        use AnBnCnState::*;
        let deep = |i: u32| i as usize > self.horizon + 1;
        match (q, s) {
            (A(i), 0) if !deep(i + 1) => A(i + 1),
            (A(i), 1) if *i >= 1 => B(*i, 1),
            (B(i, j), 1) if j < i => B(*i, j + 1),
            (B(i, j), 2) if i == j => C(i - 1),
            (C(r), 2) if *r >= 1 => C(r - 1),
            _ => Sink,
        }
    }
    fn accepting(&self, q: &AnBnCnState) -> bool {
        matches!(q, AnBnCnState::A(0) | AnBnCnState::C(0))
    }
}
