//! Deterministic finite automata: the JSON loader and Hopcroft minimization.
//!
//! File format:
//!
//! ```json
//! {"alphabet": ["a","b"], "states": 3, "initial": 0, "accepting": [0],
//!  "transitions": [[1,0],[2,1],[0,2]]}
//! ```
//!
//! Row `s` of `transitions` lists `δ(s, r)` for every symbol rank `r`.

use std::collections::{HashSet, VecDeque};

use rand::Rng;
use serde_json::Value;

use crate::alphabet::{Alphabet, Symbol};
use crate::error::{DfaError, InputError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Alphabet,
    initial: usize,
    accepting: Vec<bool>,
    /// `delta[s * k + r]`
    delta: Vec<usize>,
    live: Vec<bool>,
    name: Option<String>,
}

impl Dfa {
    /// Builds a DFA from a complete transition table.
    pub fn new(
        alphabet: Alphabet,
        initial: usize,
        accepting: &[usize],
        transitions: Vec<Vec<usize>>,
    ) -> Result<Self, DfaError> {
        let n = transitions.len();
        let k = alphabet.len();
        if n == 0 {
            return Err(DfaError::Invalid {
                line: 0,
                message: "automaton needs at least one state".into(),
            });
        }
        if initial >= n {
            return Err(DfaError::UnknownState {
                line: 0,
                state: initial,
                states: n,
            });
        }
        let mut acc = vec![false; n];
        for &a in accepting {
            if a >= n {
                return Err(DfaError::UnknownState {
                    line: 0,
                    state: a,
                    states: n,
                });
            }
            acc[a] = true;
        }
        let mut delta = Vec::with_capacity(n * k);
        for (s, row) in transitions.iter().enumerate() {
            if row.len() < k {
                return Err(DfaError::MissingTransition {
                    line: 0,
                    state: s,
                    symbol: alphabet.char_of(row.len() as Symbol).to_string(),
                });
            }
            if row.len() > k {
                return Err(DfaError::UnknownSymbol {
                    line: 0,
                    state: s,
                    column: k,
                });
            }
            for &t in row {
                if t >= n {
                    return Err(DfaError::UnknownState {
                        line: 0,
                        state: t,
                        states: n,
                    });
                }
                delta.push(t);
            }
        }
        let mut dfa = Self {
            alphabet,
            initial,
            accepting: acc,
            delta,
            live: Vec::new(),
            name: None,
        };
        dfa.live = dfa.live_states();
        Ok(dfa)
    }

    /// Parses the JSON DFA format. Errors point at the offending line.
    pub fn from_json(text: &str) -> Result<Self, DfaError> {
        let value: Value = serde_json::from_str(text).map_err(|e| DfaError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let obj = value.as_object().ok_or_else(|| DfaError::Invalid {
            line: 1,
            message: "top level must be an object".into(),
        })?;
        let field = |key: &str| {
            obj.get(key).ok_or_else(|| DfaError::Invalid {
                line: 1,
                message: format!("missing field {key:?}"),
            })
        };
        let line = |key: &str| key_line(text, key);

        let tokens = field("alphabet")?
            .as_array()
            .ok_or_else(|| invalid(line("alphabet"), "alphabet must be an array of strings"))?;
        let mut syms = Vec::with_capacity(tokens.len());
        for t in tokens {
            let t = t
                .as_str()
                .ok_or_else(|| invalid(line("alphabet"), "alphabet entries must be strings"))?;
            syms.push(t.to_string());
        }
        let alphabet = Alphabet::from_tokens(&syms).map_err(|e| match e {
            InputError::DuplicateSymbol(c) => DfaError::Duplicate {
                line: line("alphabet"),
                what: format!("alphabet symbol {c:?}"),
            },
            other => invalid(line("alphabet"), &other.to_string()),
        })?;
        let k = alphabet.len();

        let states = as_index(field("states")?, line("states"), "states")?;
        if states == 0 {
            return Err(invalid(line("states"), "automaton needs at least one state"));
        }
        let initial = as_index(field("initial")?, line("initial"), "initial")?;
        if initial >= states {
            return Err(DfaError::UnknownState {
                line: line("initial"),
                state: initial,
                states,
            });
        }

        let acc_line = line("accepting");
        let acc_vals = field("accepting")?
            .as_array()
            .ok_or_else(|| invalid(acc_line, "accepting must be an array"))?;
        let mut accepting = Vec::with_capacity(acc_vals.len());
        let mut seen = HashSet::new();
        for v in acc_vals {
            let s = as_index(v, acc_line, "accepting state")?;
            if s >= states {
                return Err(DfaError::UnknownState {
                    line: acc_line,
                    state: s,
                    states,
                });
            }
            if !seen.insert(s) {
                return Err(DfaError::Duplicate {
                    line: acc_line,
                    what: format!("accepting state {s}"),
                });
            }
            accepting.push(s);
        }

        let rows = field("transitions")?
            .as_array()
            .ok_or_else(|| invalid(line("transitions"), "transitions must be an array"))?;
        let row_lines = array_row_lines(text, "transitions");
        let row_line = |i: usize| row_lines.get(i).copied().unwrap_or(line("transitions"));
        if rows.len() > states {
            return Err(DfaError::Duplicate {
                line: row_line(states),
                what: format!(
                    "transition row {} for a {states}-state automaton",
                    states
                ),
            });
        }
        let mut transitions = Vec::with_capacity(states);
        for (s, row) in rows.iter().enumerate() {
            let cells = row
                .as_array()
                .ok_or_else(|| invalid(row_line(s), "transition rows must be arrays"))?;
            if cells.len() > k {
                return Err(DfaError::UnknownSymbol {
                    line: row_line(s),
                    state: s,
                    column: k,
                });
            }
            let mut out = Vec::with_capacity(k);
            for c in cells {
                let t = as_index(c, row_line(s), "transition target")?;
                if t >= states {
                    return Err(DfaError::UnknownState {
                        line: row_line(s),
                        state: t,
                        states,
                    });
                }
                out.push(t);
            }
            if out.len() < k {
                return Err(DfaError::MissingTransition {
                    line: row_line(s),
                    state: s,
                    symbol: alphabet.char_of(out.len() as Symbol).to_string(),
                });
            }
            transitions.push(out);
        }
        if transitions.len() < states {
            return Err(DfaError::MissingTransition {
                line: line("transitions"),
                state: transitions.len(),
                symbol: alphabet.char_of(0).to_string(),
            });
        }
        Dfa::new(alphabet, initial, &accepting, transitions)
    }

    pub fn to_json(&self) -> String {
        let k = self.alphabet.len();
        let rows: Vec<Vec<usize>> = self.delta.chunks(k).map(|c| c.to_vec()).collect();
        let accepting: Vec<usize> = (0..self.states()).filter(|&s| self.accepting[s]).collect();
        serde_json::json!({
            "alphabet": self.alphabet.symbols().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "states": self.states(),
            "initial": self.initial,
            "accepting": accepting,
            "transitions": rows,
        })
        .to_string()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn states(&self) -> usize {
        self.accepting.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_accepting(&self, s: usize) -> bool {
        self.accepting[s]
    }

    #[inline]
    pub fn step(&self, s: usize, sym: Symbol) -> usize {
        self.delta[s * self.alphabet.len() + sym as usize]
    }

    pub fn run_from(&self, mut s: usize, word: &[Symbol]) -> usize {
        for &c in word {
            s = self.step(s, c);
        }
        s
    }

    pub fn accepts(&self, word: &[Symbol]) -> bool {
        self.accepting[self.run_from(self.initial, word)]
    }

    /// States reachable from the initial state, in BFS order.
    pub fn reachable(&self) -> Vec<usize> {
        let k = self.alphabet.len();
        let mut seen = vec![false; self.states()];
        let mut order = vec![self.initial];
        seen[self.initial] = true;
        let mut i = 0;
        while i < order.len() {
            let s = order[i];
            i += 1;
            for r in 0..k {
                let t = self.step(s, r as Symbol);
                if !seen[t] {
                    seen[t] = true;
                    order.push(t);
                }
            }
        }
        order
    }

    pub fn is_live(&self, s: usize) -> bool {
        self.live[s]
    }

    /// `live[s]` iff some accepting state is reachable from `s`.
    pub fn live_states(&self) -> Vec<bool> {
        let n = self.states();
        let k = self.alphabet.len();
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n];
        for s in 0..n {
            for r in 0..k {
                rev[self.step(s, r as Symbol)].push(s);
            }
        }
        let mut live = self.accepting.clone();
        let mut queue: VecDeque<usize> = (0..n).filter(|&s| live[s]).collect();
        while let Some(t) = queue.pop_front() {
            for &s in &rev[t] {
                if !live[s] {
                    live[s] = true;
                    queue.push_back(s);
                }
            }
        }
        live
    }

    /// Number of states of the minimal complete DFA, by Hopcroft's partition
    /// refinement over the reachable part.
    pub fn minimal_state_count(&self) -> usize {
        hopcroft_blocks(self).len()
    }

    /// Random complete DFA over the given alphabet.
    pub fn random<R: Rng>(alphabet: Alphabet, states: usize, rng: &mut R) -> Self {
        let k = alphabet.len();
        let transitions: Vec<Vec<usize>> = (0..states)
            .map(|_| (0..k).map(|_| rng.gen_range(0..states)).collect())
            .collect();
        let accepting: Vec<usize> = (0..states).filter(|_| rng.gen_bool(0.5)).collect();
        Dfa::new(alphabet, 0, &accepting, transitions).expect("well-formed by construction")
    }
}

fn invalid(line: usize, message: &str) -> DfaError {
    DfaError::Invalid {
        line,
        message: message.to_string(),
    }
}

fn as_index(v: &Value, line: usize, what: &str) -> Result<usize, DfaError> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| invalid(line, &format!("{what} must be a non-negative integer")))
}

/// 1-based line of the first occurrence of `"key"`.
fn key_line(text: &str, key: &str) -> usize {
    let needle = format!("\"{key}\"");
    match text.find(&needle) {
        Some(pos) => text[..pos].matches('\n').count() + 1,
        None => 1,
    }
}

/// Lines on which each inner array of the array-valued field `key` opens.
fn array_row_lines(text: &str, key: &str) -> Vec<usize> {
    let needle = format!("\"{key}\"");
    let Some(start) = text.find(&needle) else {
        return Vec::new();
    };
    let mut line = text[..start].matches('\n').count() + 1;
    let mut depth = 0usize;
    let mut out = Vec::new();
    for c in text[start + needle.len()..].chars() {
        match c {
            '\n' => line += 1,
            '[' => {
                depth += 1;
                if depth == 2 {
                    out.push(line);
                }
            }
            ']' => {
                if depth <= 1 {
                    break;
                }
                depth -= 1;
            }
            _ => {}
        }
    }
    out
}

/// Hopcroft's algorithm. Returns the blocks of the coarsest stable partition of
/// the reachable states.
pub(crate) fn hopcroft_blocks(dfa: &Dfa) -> Vec<Vec<usize>> {
    let k = dfa.alphabet().len();
    let reach = dfa.reachable();
    let n = dfa.states();
    let mut rev: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); n]; k];
    for &s in &reach {
        for (r, rev_r) in rev.iter_mut().enumerate() {
            rev_r[dfa.step(s, r as Symbol)].push(s);
        }
    }

    let (fin, non): (Vec<usize>, Vec<usize>) = reach.iter().partition(|&&s| dfa.is_accepting(s));
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut block_of = vec![usize::MAX; n];
    for b in [fin, non] {
        if !b.is_empty() {
            for &s in &b {
                block_of[s] = blocks.len();
            }
            blocks.push(b);
        }
    }
    let mut work: Vec<(usize, usize)> = Vec::new();
    let smallest = if blocks.len() == 2 && blocks[1].len() < blocks[0].len() { 1 } else { 0 };
    for r in 0..k {
        work.push((smallest, r));
    }
    if blocks.len() == 1 {
        work.clear();
    }

    while let Some((splitter, r)) = work.pop() {
        let mut pre: Vec<usize> = blocks[splitter]
            .iter()
            .flat_map(|&t| rev[r][t].iter().copied())
            .collect();
        pre.sort_unstable();
        pre.dedup();
        let mut touched: Vec<usize> = pre.iter().map(|&s| block_of[s]).collect();
        touched.sort_unstable();
        touched.dedup();
        let pre_set: HashSet<usize> = pre.into_iter().collect();
        for b in touched {
            let (inside, outside): (Vec<usize>, Vec<usize>) =
                blocks[b].iter().partition(|s| pre_set.contains(s));
            if inside.is_empty() || outside.is_empty() {
                continue;
            }
            let (keep, split) = if inside.len() <= outside.len() {
                (outside, inside)
            } else {
                (inside, outside)
            };
            let new_id = blocks.len();
            for &s in &split {
                block_of[s] = new_id;
            }
            blocks[b] = keep;
            blocks.push(split);
            // `split` is the smaller half, so queueing it suffices whether or
            // not `b` was already pending
            for r2 in 0..k {
                work.push((new_id, r2));
            }
        }
    }
    blocks
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const MOD3: &str = r#"{
  "alphabet": ["a", "b"],
  "states": 3,
  "initial": 0,
  "accepting": [0],
  "transitions": [
    [1, 0],
    [2, 1],
    [0, 2]
  ]
}"#;

    fn w(d: &Dfa, s: &str) -> Vec<Symbol> {
        d.alphabet().parse(s).unwrap().0
    }

    #[test]
    fn mod3_membership() {
        let d = Dfa::from_json(MOD3).unwrap();
        assert!(d.accepts(&w(&d, "aaa")));
        assert!(!d.accepts(&w(&d, "aa")));
        assert!(d.accepts(&w(&d, "bababa")));
        assert!(!d.accepts(&w(&d, "babab")));
        assert!(d.accepts(&w(&d, "")));
        assert_eq!(d.minimal_state_count(), 3);
    }

    #[test]
    fn missing_transition_reports_line() {
        let text = MOD3.replace("[2, 1]", "[2]");
        let err = Dfa::from_json(&text).unwrap_err();
        assert_eq!(
            err,
            DfaError::MissingTransition {
                line: 8,
                state: 1,
                symbol: "b".into()
            }
        );
    }

    #[test]
    fn unknown_state_and_symbol() {
        let err = Dfa::from_json(&MOD3.replace("[0, 2]", "[0, 7]")).unwrap_err();
        assert!(matches!(err, DfaError::UnknownState { line: 9, state: 7, .. }));
        let err = Dfa::from_json(&MOD3.replace("[0, 2]", "[0, 2, 1]")).unwrap_err();
        assert!(matches!(err, DfaError::UnknownSymbol { line: 9, state: 2, .. }));
        let err = Dfa::from_json(&MOD3.replace("\"initial\": 0", "\"initial\": 3")).unwrap_err();
        assert!(matches!(err, DfaError::UnknownState { line: 4, .. }));
    }

    #[test]
    fn duplicates_are_rejected() {
        let err = Dfa::from_json(&MOD3.replace("[0]", "[0, 0]")).unwrap_err();
        assert!(matches!(err, DfaError::Duplicate { line: 5, .. }));
        let err = Dfa::from_json(&MOD3.replace("[\"a\", \"b\"]", "[\"a\", \"a\"]")).unwrap_err();
        assert!(matches!(err, DfaError::Duplicate { line: 2, .. }));
        let extra = MOD3.replace("[0, 2]\n", "[0, 2],\n    [0, 0]\n");
        assert!(matches!(
            Dfa::from_json(&extra).unwrap_err(),
            DfaError::Duplicate { .. }
        ));
    }

    #[test]
    fn syntax_error_carries_position() {
        let err = Dfa::from_json("{\n  \"alphabet\": [\"a\",\n}").unwrap_err();
        assert!(matches!(err, DfaError::Syntax { line: 3, .. }));
    }

    #[test]
    fn json_round_trip() {
        let d = Dfa::from_json(MOD3).unwrap();
        assert_eq!(Dfa::from_json(&d.to_json()).unwrap(), d);
    }

    #[test]
    fn hopcroft_merges_equivalent_states() {
        // states 1 and 2 are both accepting sinks
        let a = Alphabet::new("ab".chars()).unwrap();
        let d = Dfa::new(a, 0, &[1, 2], vec![vec![1, 2], vec![1, 1], vec![2, 2]]).unwrap();
        assert_eq!(d.minimal_state_count(), 2);
        // unreachable states are ignored
        let a = Alphabet::new("a".chars()).unwrap();
        let d = Dfa::new(a, 0, &[1], vec![vec![0], vec![1]]).unwrap();
        assert_eq!(d.minimal_state_count(), 1);
    }

    #[test]
    fn live_states_of_mod3() {
        let d = Dfa::from_json(MOD3).unwrap();
        assert!(d.live_states().iter().all(|&x| x));
        let a = Alphabet::new("ab".chars()).unwrap();
        let d = Dfa::new(a, 0, &[], vec![vec![0, 0]]).unwrap();
        assert_eq!(d.live_states(), vec![false]);
    }
}
