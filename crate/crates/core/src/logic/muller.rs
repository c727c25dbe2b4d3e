use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::orbit::LassoWord;

/// Deterministic Müller automaton; a run is accepting when the set of states
/// it visits infinitely often is one of the `table` entries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MullerJson", into = "MullerJson")]
pub struct MullerAutomaton {
    states: Vec<String>,
    initial: usize,
    alphabet: Vec<String>,
    /// `delta[q][a]`
    delta: Vec<Vec<usize>>,
    table: BTreeSet<BTreeSet<usize>>,
}

#[derive(Serialize, Deserialize)]
struct MullerJson {
    states: Vec<String>,
    initial: String,
    alphabet: Vec<String>,
    delta: Vec<(String, String, String)>,
    table: Vec<Vec<String>>,
}

fn index_of(names: &[String], name: &str, what: &str) -> Result<usize> {
    names
        .iter()
        .position(|n| n == name)
        .ok_or_else(|| Error::Shape(format!("unknown {what} '{name}'")))
}

impl TryFrom<MullerJson> for MullerAutomaton {
    type Error = Error;

    fn try_from(j: MullerJson) -> Result<Self> {
        let mut delta = vec![vec![None; j.alphabet.len()]; j.states.len()];
        for (p, a, q) in &j.delta {
            let (p, a, q) = (
                index_of(&j.states, p, "state")?,
                index_of(&j.alphabet, a, "letter")?,
                index_of(&j.states, q, "state")?,
            );
            if delta[p][a].replace(q).is_some_and(|old| old != q) {
                return Err(Error::Shape(format!(
                    "transition from '{}' on '{}' is not deterministic",
                    j.states[p], j.alphabet[a]
                )));
            }
        }
        let delta = delta
            .into_iter()
            .enumerate()
            .map(|(p, row)| {
                row.into_iter()
                    .enumerate()
                    .map(|(a, q)| {
                        q.ok_or_else(|| {
                            Error::Shape(format!(
                                "no transition from '{}' on '{}'",
                                j.states[p], j.alphabet[a]
                            ))
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let table = j
            .table
            .iter()
            .map(|set| {
                set.iter()
                    .map(|q| index_of(&j.states, q, "state"))
                    .collect()
            })
            .collect::<Result<_>>()?;
        MullerAutomaton::new(
            j.states.clone(),
            index_of(&j.states, &j.initial, "state")?,
            j.alphabet,
            delta,
            table,
        )
    }
}

impl From<MullerAutomaton> for MullerJson {
    fn from(a: MullerAutomaton) -> Self {
        let mut delta = Vec::new();
        for (p, row) in a.delta.iter().enumerate() {
            for (l, &q) in row.iter().enumerate() {
                delta.push((
                    a.states[p].clone(),
                    a.alphabet[l].clone(),
                    a.states[q].clone(),
                ));
            }
        }
        MullerJson {
            initial: a.states[a.initial].clone(),
            table: a
                .table
                .iter()
                .map(|s| s.iter().map(|&q| a.states[q].clone()).collect())
                .collect(),
            states: a.states,
            alphabet: a.alphabet,
            delta,
        }
    }
}

/// Outcome of a language comparison, with a word accepted by exactly one
/// side when they differ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Equivalence {
    pub equivalent: bool,
    pub counterexample: Option<LassoWord<String>>,
}

impl MullerAutomaton {
    pub fn new(
        states: Vec<String>,
        initial: usize,
        alphabet: Vec<String>,
        delta: Vec<Vec<usize>>,
        table: BTreeSet<BTreeSet<usize>>,
    ) -> Result<Self> {
        let n = states.len();
        if n == 0 || alphabet.is_empty() {
            return Err(Error::Shape("automaton needs states and letters".into()));
        }
        if initial >= n || delta.len() != n {
            return Err(Error::Shape(
                "transition table does not match the states".into(),
            ));
        }
        for row in &delta {
            if row.len() != alphabet.len() || row.iter().any(|&q| q >= n) {
                return Err(Error::Shape("transition function is not total".into()));
            }
        }
        if table.iter().flatten().any(|&q| q >= n) {
            return Err(Error::Shape("acceptance table names unknown states".into()));
        }
        Ok(MullerAutomaton {
            states,
            initial,
            alphabet,
            delta,
            table,
        })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn step(&self, q: usize, letter: usize) -> usize {
        self.delta[q][letter]
    }

    pub fn is_accepting_set(&self, set: &BTreeSet<usize>) -> bool {
        self.table.contains(set)
    }

    /// `A(q)`: the same automaton started in `q`.
    pub fn with_initial(&self, q: usize) -> Self {
        MullerAutomaton {
            initial: q,
            ..self.clone()
        }
    }

    /// States reachable from the initial state.
    pub fn reachable(&self) -> Vec<usize> {
        let mut seen = vec![false; self.states.len()];
        let mut stack = vec![self.initial];
        seen[self.initial] = true;
        while let Some(p) = stack.pop() {
            for &q in &self.delta[p] {
                if !seen[q] {
                    seen[q] = true;
                    stack.push(q);
                }
            }
        }
        (0..self.states.len()).filter(|&q| seen[q]).collect()
    }

    fn letters_of(&self, w: &[String]) -> Result<Vec<usize>> {
        w.iter()
            .map(|l| {
                self.alphabet.iter().position(|a| a == l).ok_or_else(|| {
                    Error::Domain(format!("letter '{l}' is not in the automaton alphabet"))
                })
            })
            .collect()
    }

    /// States visited infinitely often on the run over `w`.
    pub fn inf_set(&self, w: &LassoWord<String>) -> Result<BTreeSet<usize>> {
        let stem = self.letters_of(&w.stem)?;
        let cycle = self.letters_of(&w.cycle)?;
        if cycle.is_empty() {
            return Err(Error::Shape("lasso cycle must be nonempty".into()));
        }
        let mut q = stem.iter().fold(self.initial, |q, &a| self.step(q, a));
        let mut entries: HashMap<usize, usize> = HashMap::new();
        let mut visited: Vec<Vec<usize>> = Vec::new();
        loop {
            if let Some(&k) = entries.get(&q) {
                return Ok(visited[k..].iter().flatten().copied().collect());
            }
            entries.insert(q, visited.len());
            let mut pass = Vec::with_capacity(cycle.len());
            for &a in &cycle {
                q = self.step(q, a);
                pass.push(q);
            }
            visited.push(pass);
        }
    }
}

pub fn muller_accepts_lasso(a: &MullerAutomaton, w: &LassoWord<String>) -> Result<bool> {
    Ok(a.is_accepting_set(&a.inf_set(w)?))
}

struct Product<'a> {
    a: &'a MullerAutomaton,
    b: &'a MullerAutomaton,
    nodes: Vec<(usize, usize)>,
    /// `edges[i][letter]`
    edges: Vec<Vec<usize>>,
}

impl<'a> Product<'a> {
    fn build(a: &'a MullerAutomaton, b: &'a MullerAutomaton) -> Self {
        let k = a.alphabet.len();
        let mut index = HashMap::new();
        let mut nodes = vec![(a.initial, b.initial)];
        index.insert(nodes[0], 0);
        let mut edges: Vec<Vec<usize>> = Vec::new();
        let mut i = 0;
        while i < nodes.len() {
            let (p, q) = nodes[i];
            let mut row = Vec::with_capacity(k);
            for l in 0..k {
                let next = (a.step(p, l), b.step(q, l));
                let j = *index.entry(next).or_insert_with(|| {
                    nodes.push(next);
                    nodes.len() - 1
                });
                row.push(j);
            }
            edges.push(row);
            i += 1;
        }
        Product { a, b, nodes, edges }
    }

    /// Strongly connected components, each sorted.
    fn components(&self) -> Vec<Vec<usize>> {
        let n = self.nodes.len();
        let reach = |from: usize| {
            let mut seen = vec![false; n];
            let mut stack = vec![from];
            seen[from] = true;
            while let Some(p) = stack.pop() {
                for &q in &self.edges[p] {
                    if !seen[q] {
                        seen[q] = true;
                        stack.push(q);
                    }
                }
            }
            seen
        };
        let all: Vec<Vec<bool>> = (0..n).map(reach).collect();
        let mut assigned = vec![false; n];
        let mut out = Vec::new();
        for i in 0..n {
            if assigned[i] {
                continue;
            }
            let comp: Vec<usize> = (0..n).filter(|&j| all[i][j] && all[j][i]).collect();
            for &j in &comp {
                assigned[j] = true;
            }
            out.push(comp);
        }
        out
    }

    /// Whether some cycle visits exactly the nodes of `set`: the induced
    /// subgraph is strongly connected and has at least one edge.
    fn loopable(&self, set: &[usize]) -> bool {
        let inside: BTreeSet<usize> = set.iter().copied().collect();
        let edge = |p: usize, q: usize| self.edges[p].contains(&q);
        let closure = |forward: bool| {
            let mut seen = BTreeSet::from([set[0]]);
            let mut stack = vec![set[0]];
            while let Some(p) = stack.pop() {
                for &q in &inside {
                    let linked = if forward { edge(p, q) } else { edge(q, p) };
                    if linked && seen.insert(q) {
                        stack.push(q);
                    }
                }
            }
            seen.len()
        };
        let has_edge = set.len() > 1 || edge(set[0], set[0]);
        has_edge && closure(true) == set.len() && closure(false) == set.len()
    }

    /// Letters of a shortest path from `from` to any node of `targets`,
    /// moving only through `allowed`.
    fn path(
        &self,
        from: usize,
        targets: &BTreeSet<usize>,
        allowed: Option<&BTreeSet<usize>>,
    ) -> (Vec<usize>, usize) {
        let mut prev: HashMap<usize, (usize, usize)> = HashMap::new();
        let mut queue = VecDeque::from([from]);
        let mut seen = BTreeSet::from([from]);
        let mut end = None;
        if targets.contains(&from) {
            end = Some(from);
        }
        while end.is_none() {
            let p = queue.pop_front().expect("target reachable");
            for (l, &q) in self.edges[p].iter().enumerate() {
                if allowed.is_some_and(|s| !s.contains(&q)) || !seen.insert(q) {
                    continue;
                }
                prev.insert(q, (p, l));
                if targets.contains(&q) {
                    end = Some(q);
                    break;
                }
                queue.push_back(q);
            }
        }
        let end = end.expect("found");
        let mut letters = Vec::new();
        let mut cur = end;
        while cur != from {
            let (p, l) = prev[&cur];
            letters.push(l);
            cur = p;
        }
        letters.reverse();
        (letters, end)
    }

    /// A lasso whose run settles into exactly the nodes of `set`.
    fn witness(&self, set: &[usize]) -> LassoWord<String> {
        let inside: BTreeSet<usize> = set.iter().copied().collect();
        let (stem, start) = self.path(0, &inside, None);
        let mut cycle = Vec::new();
        let mut cur = start;
        let mut missing: BTreeSet<usize> = inside.clone();
        missing.remove(&start);
        while !missing.is_empty() {
            let (ls, reached) = self.path(cur, &missing, Some(&inside));
            cycle.extend(ls);
            missing.remove(&reached);
            cur = reached;
        }
        // close the loop with at least one step
        let (first, next) = self.edges[cur]
            .iter()
            .enumerate()
            .find(|(_, q)| inside.contains(q))
            .map(|(l, &q)| (l, q))
            .expect("set is loopable");
        cycle.push(first);
        let (back, _) = self.path(next, &BTreeSet::from([start]), Some(&inside));
        cycle.extend(back);
        let names = |ls: Vec<usize>| ls.into_iter().map(|l| self.a.alphabet[l].clone()).collect();
        LassoWord {
            alphabet: self.a.alphabet.clone(),
            stem: names(stem),
            cycle: names(cycle),
        }
    }
}

/// Whether `a` and `b` accept the same words. Candidate infinity sets of the
/// product are enumerated inside each strongly connected component, which
/// must have at most `max_states` states.
pub fn muller_equivalent(
    a: &MullerAutomaton,
    b: &MullerAutomaton,
    max_states: usize,
) -> Result<Equivalence> {
    if a.alphabet != b.alphabet {
        return Err(Error::Domain("automata have different alphabets".into()));
    }
    let prod = Product::build(a, b);
    for comp in prod.components() {
        if comp.len() > max_states {
            return Err(Error::Resource(format!(
                "product component with {} states exceeds the cap of {max_states}",
                comp.len()
            )));
        }
        for mask in 1u64..(1u64 << comp.len()) {
            let set: Vec<usize> = (0..comp.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| comp[i])
                .collect();
            if !prod.loopable(&set) {
                continue;
            }
            let pa: BTreeSet<usize> = set.iter().map(|&i| prod.nodes[i].0).collect();
            let pb: BTreeSet<usize> = set.iter().map(|&i| prod.nodes[i].1).collect();
            if prod.a.is_accepting_set(&pa) != prod.b.is_accepting_set(&pb) {
                return Ok(Equivalence {
                    equivalent: false,
                    counterexample: Some(prod.witness(&set).normalized()),
                });
            }
        }
    }
    Ok(Equivalence {
        equivalent: true,
        counterexample: None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrefixIndependence {
    pub independent: bool,
    /// A reachable state `q` with `L(A(q)) != L(A)`, and a word telling them apart.
    pub state: Option<String>,
    pub counterexample: Option<LassoWord<String>>,
}

/// Whether every reachable `A(q)` recognises the language of `A`.
pub fn prefix_independent(a: &MullerAutomaton, max_states: usize) -> Result<PrefixIndependence> {
    for q in a.reachable() {
        if q == a.initial {
            continue;
        }
        let e = muller_equivalent(&a.with_initial(q), a, max_states)?;
        if !e.equivalent {
            return Ok(PrefixIndependence {
                independent: false,
                state: Some(a.states[q].clone()),
                counterexample: e.counterexample,
            });
        }
    }
    Ok(PrefixIndependence {
        independent: true,
        state: None,
        counterexample: None,
    })
}
