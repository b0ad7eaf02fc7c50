//! Explicit reachability graphs and the analyses that run on them.
//!
//! Exploration is breadth-first. Successors of a node are generated in
//! transition order, and the markings first discovered on one level are
//! numbered in marking order, so node numbering does not depend on how a
//! level was expanded. A new marking that strictly dominates one of its
//! spanning-tree ancestors proves unboundedness; every infinite run contains
//! such a pair, so on unbounded nets exploration stops with a pump witness.
//!
//! Liveness and home markings are read off the bottom strongly connected
//! components of a finite graph. Every run eventually stays inside one bottom
//! component, and inside it every node reaches every other, so a transition
//! can always be enabled again from everywhere iff it labels an edge inside
//! every bottom component. A marking reachable from every reachable marking
//! exists iff there is exactly one bottom component, and then the home
//! markings are exactly its nodes.

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::marking::Marking;
use crate::net::{enabled_transitions, fire_unchecked, NetError, PetriNet};
use crate::par;

/// Levels smaller than this are expanded on the calling thread.
const PAR_LEVEL: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_states: usize,
    pub max_edges: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_states: 1_000_000, max_edges: 50_000_000 }
    }
}

impl Limits {
    pub fn with_states(max_states: usize) -> Self {
        Limits { max_states: max_states.max(1), ..Limits::default() }
    }
}

/// `m0 --prefix--> m1 --pump--> m2` with `m2` strictly larger than `m1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PumpWitness {
    pub prefix: Vec<usize>,
    pub pump: Vec<usize>,
    pub m1: Marking,
    pub m2: Marking,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExploreError {
    #[error("the net is unbounded")]
    Unbounded(Box<PumpWitness>),
    #[error("exploration limit exceeded after {states} states and {edges} edges")]
    LimitExceeded { states: usize, edges: usize },
    #[error("marking {0} is not reachable")]
    UnknownMarking(String),
    #[error(transparent)]
    Net(#[from] NetError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub source: usize,
    pub transition: usize,
    pub target: usize,
}

#[derive(Clone, Debug)]
pub struct ReachabilityGraph {
    markings: Vec<Marking>,
    edges: Vec<Edge>,
    out_start: Vec<usize>,
    parent: Vec<Option<(usize, usize)>>,
    index: HashMap<Marking, usize>,
}

#[derive(Clone, Debug)]
pub enum Exploration {
    Complete(ReachabilityGraph),
    Unbounded(PumpWitness),
    LimitExceeded { states: usize, edges: usize },
}

impl Exploration {
    pub fn into_graph(self) -> Result<ReachabilityGraph, ExploreError> {
        match self {
            Exploration::Complete(g) => Ok(g),
            Exploration::Unbounded(w) => Err(ExploreError::Unbounded(Box::new(w))),
            Exploration::LimitExceeded { states, edges } => Err(ExploreError::LimitExceeded { states, edges }),
        }
    }
}

enum Target {
    Known(usize),
    Fresh(usize),
}

pub fn explore(net: &PetriNet, m0: &Marking, limits: Limits) -> Exploration {
    let mut markings = vec![m0.clone()];
    let mut parent: Vec<Option<(usize, usize)>> = vec![None];
    let mut index = HashMap::from([(m0.clone(), 0usize)]);
    let mut edges: Vec<Edge> = Vec::new();
    let mut level: Vec<usize> = vec![0];

    while !level.is_empty() {
        let current: Vec<&Marking> = level.iter().map(|&v| &markings[v]).collect();
        let succ: Vec<Vec<(usize, Marking)>> = if level.len() >= PAR_LEVEL {
            par::map(&current, |m| successors(net, m))
        } else {
            current.iter().map(|m| successors(net, m)).collect()
        };

        let mut fresh: Vec<(Marking, (usize, usize))> = Vec::new();
        let mut fresh_index: HashMap<Marking, usize> = HashMap::new();
        let mut level_edges: Vec<(usize, usize, Target)> = Vec::new();
        for (&src, list) in level.iter().zip(succ) {
            for (t, m) in list {
                let target = if let Some(&id) = index.get(&m) {
                    Target::Known(id)
                } else if let Some(&k) = fresh_index.get(&m) {
                    Target::Fresh(k)
                } else {
                    fresh_index.insert(m.clone(), fresh.len());
                    fresh.push((m, (src, t)));
                    Target::Fresh(fresh.len() - 1)
                };
                level_edges.push((src, t, target));
            }
        }
        if edges.len() + level_edges.len() > limits.max_edges {
            return Exploration::LimitExceeded { states: markings.len(), edges: edges.len() };
        }

        let mut order: Vec<usize> = (0..fresh.len()).collect();
        order.sort_by(|&a, &b| fresh[a].0.cmp(&fresh[b].0));

        let dominated = |k: &usize| dominated_ancestor(&markings, &parent, &fresh[*k].0, fresh[*k].1 .0);
        let hits: Vec<Option<usize>> =
            if order.len() >= PAR_LEVEL { par::map(&order, dominated) } else { order.iter().map(dominated).collect() };
        if let Some((k, a)) = order.iter().zip(&hits).find_map(|(&k, h)| h.map(|a| (k, a))) {
            let (src, t) = fresh[k].1;
            let prefix = path_to(&parent, a);
            let mut pump = path_between(&parent, a, src);
            pump.push(t);
            return Exploration::Unbounded(PumpWitness {
                prefix,
                pump,
                m1: markings[a].clone(),
                m2: fresh[k].0.clone(),
            });
        }

        let base = markings.len();
        let mut new_id = vec![0; fresh.len()];
        for (rank, &k) in order.iter().enumerate() {
            new_id[k] = base + rank;
        }
        let mut entries: Vec<Option<(Marking, (usize, usize))>> = fresh.into_iter().map(Some).collect();
        for &k in &order {
            let (m, p) = entries[k].take().expect("each fresh marking is placed once");
            index.insert(m.clone(), markings.len());
            markings.push(m);
            parent.push(Some(p));
        }
        edges.extend(level_edges.into_iter().map(|(source, transition, target)| Edge {
            source,
            transition,
            target: match target {
                Target::Known(id) => id,
                Target::Fresh(k) => new_id[k],
            },
        }));
        if markings.len() > limits.max_states {
            return Exploration::LimitExceeded { states: markings.len(), edges: edges.len() };
        }
        level = (base..markings.len()).collect();
    }

    edges.sort_unstable();
    let mut out_start = vec![0; markings.len() + 1];
    for e in &edges {
        out_start[e.source + 1] += 1;
    }
    for i in 0..markings.len() {
        out_start[i + 1] += out_start[i];
    }
    Exploration::Complete(ReachabilityGraph { markings, edges, out_start, parent, index })
}

fn successors(net: &PetriNet, m: &Marking) -> Vec<(usize, Marking)> {
    enabled_transitions(net, m).into_iter().map(|t| (t, fire_unchecked(net, m, t))).collect()
}

/// Nearest spanning-tree ancestor (starting at `from`) strictly below `m`.
fn dominated_ancestor(
    markings: &[Marking],
    parent: &[Option<(usize, usize)>],
    m: &Marking,
    from: usize,
) -> Option<usize> {
    let mut cur = Some(from);
    while let Some(a) = cur {
        if m.strictly_dominates(&markings[a]) {
            return Some(a);
        }
        cur = parent[a].map(|(p, _)| p);
    }
    None
}

fn path_to(parent: &[Option<(usize, usize)>], v: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut cur = v;
    while let Some((p, t)) = parent[cur] {
        out.push(t);
        cur = p;
    }
    out.reverse();
    out
}

/// Transitions along the spanning tree from ancestor `a` down to `v`.
fn path_between(parent: &[Option<(usize, usize)>], a: usize, v: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut cur = v;
    while cur != a {
        let (p, t) = parent[cur].expect("a is an ancestor of v");
        out.push(t);
        cur = p;
    }
    out.reverse();
    out
}

pub fn complete_graph(net: &PetriNet, m0: &Marking, limits: Limits) -> Result<ReachabilityGraph, ExploreError> {
    explore(net, m0, limits).into_graph()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Liveness {
    pub live: bool,
    /// A reachable node from which the transition can never fire again.
    pub witness: Option<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Boundedness {
    Bounded { k: u32, per_place: Vec<u32> },
    Unbounded(PumpWitness),
}

impl Boundedness {
    pub fn is_bounded(&self) -> bool {
        matches!(self, Boundedness::Bounded { .. })
    }

    pub fn is_safe(&self) -> bool {
        matches!(self, Boundedness::Bounded { k, .. } if *k <= 1)
    }
}

impl ReachabilityGraph {
    pub fn len(&self) -> usize {
        self.markings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.markings.is_empty()
    }

    pub fn initial(&self) -> usize {
        0
    }

    pub fn marking(&self, v: usize) -> &Marking {
        &self.markings[v]
    }

    pub fn markings(&self) -> &[Marking] {
        &self.markings
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn out_edges(&self, v: usize) -> &[Edge] {
        &self.edges[self.out_start[v]..self.out_start[v + 1]]
    }

    pub fn node_of(&self, m: &Marking) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Transitions along the spanning tree from the initial node to `v`.
    pub fn path_to(&self, v: usize) -> Vec<usize> {
        path_to(&self.parent, v)
    }

    /// Strongly connected component of each node, numbered in completion
    /// order, and the number of components.
    pub fn sccs(&self) -> (Vec<usize>, usize) {
        const UNSET: usize = usize::MAX;
        let n = self.len();
        let mut idx = vec![UNSET; n];
        let mut low = vec![0; n];
        let mut on_stack = vec![false; n];
        let mut comp = vec![UNSET; n];
        let mut stack = Vec::new();
        let mut next = 0;
        let mut count = 0;
        let mut call: Vec<(usize, usize)> = Vec::new();
        for s in 0..n {
            if idx[s] != UNSET {
                continue;
            }
            idx[s] = next;
            low[s] = next;
            next += 1;
            stack.push(s);
            on_stack[s] = true;
            call.push((s, self.out_start[s]));
            while let Some(&mut (v, ref mut pos)) = call.last_mut() {
                if *pos < self.out_start[v + 1] {
                    let w = self.edges[*pos].target;
                    *pos += 1;
                    if idx[w] == UNSET {
                        idx[w] = next;
                        low[w] = next;
                        next += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, self.out_start[w]));
                    } else if on_stack[w] {
                        low[v] = low[v].min(idx[w]);
                    }
                    continue;
                }
                call.pop();
                if let Some(&(u, _)) = call.last() {
                    low[u] = low[u].min(low[v]);
                }
                if low[v] == idx[v] {
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp[w] = count;
                        if w == v {
                            break;
                        }
                    }
                    count += 1;
                }
            }
        }
        (comp, count)
    }

    /// Bottom components as sorted node lists, ordered by smallest node.
    pub fn bottom_sccs(&self) -> Vec<Vec<usize>> {
        let (comp, count) = self.sccs();
        let mut leaves = vec![true; count];
        for e in &self.edges {
            if comp[e.source] != comp[e.target] {
                leaves[comp[e.source]] = false;
            }
        }
        let mut groups: Vec<Vec<usize>> = vec![Vec::new(); count];
        for (v, &c) in comp.iter().enumerate() {
            if leaves[c] {
                groups[c].push(v);
            }
        }
        let mut out: Vec<Vec<usize>> = groups.into_iter().filter(|g| !g.is_empty()).collect();
        out.sort();
        out
    }

    /// Nodes of the unique bottom component, or nothing if there are several.
    pub fn home_nodes(&self) -> Vec<usize> {
        let mut bottoms = self.bottom_sccs();
        if bottoms.len() == 1 {
            bottoms.pop().unwrap_or_default()
        } else {
            Vec::new()
        }
    }

    pub fn liveness(&self, transition_count: usize) -> Liveness {
        for group in self.bottom_sccs() {
            let mut seen = vec![false; transition_count];
            for &v in &group {
                for e in self.out_edges(v) {
                    seen[e.transition] = true;
                }
            }
            if let Some(t) = seen.iter().position(|s| !s) {
                return Liveness { live: false, witness: Some((group[0], t)) };
            }
        }
        Liveness { live: true, witness: None }
    }

    pub fn bounds(&self) -> (u32, Vec<u32>) {
        let places = self.markings.first().map_or(0, Marking::len);
        let mut per_place = vec![0; places];
        for m in &self.markings {
            for (p, c) in m.sparse() {
                per_place[p] = per_place[p].max(c);
            }
        }
        (per_place.iter().copied().max().unwrap_or(0), per_place)
    }

    /// Shortest transition sequence from `from` to `to` using only edges
    /// whose transition is allowed.
    pub fn constrained_path(&self, from: usize, to: usize, allowed: &[bool]) -> Option<Vec<usize>> {
        self.search(from, allowed, |v| v == to)
    }

    /// Shortest allowed path from `from` to the first node satisfying `goal`.
    pub fn search(&self, from: usize, allowed: &[bool], goal: impl Fn(usize) -> bool) -> Option<Vec<usize>> {
        let mut pred: Vec<Option<(usize, usize)>> = vec![None; self.len()];
        let mut seen = vec![false; self.len()];
        seen[from] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            if goal(v) {
                let mut out = Vec::new();
                let mut cur = v;
                while let Some((p, t)) = pred[cur] {
                    out.push(t);
                    cur = p;
                }
                out.reverse();
                return Some(out);
            }
            for e in self.out_edges(v) {
                if allowed[e.transition] && !seen[e.target] {
                    seen[e.target] = true;
                    pred[e.target] = Some((v, e.transition));
                    queue.push_back(e.target);
                }
            }
        }
        None
    }
}

pub fn home_markings(net: &PetriNet, m0: &Marking, limits: Limits) -> Result<Vec<Marking>, ExploreError> {
    let g = complete_graph(net, m0, limits)?;
    Ok(g.home_nodes().into_iter().map(|v| g.marking(v).clone()).collect())
}

pub fn is_live(net: &PetriNet, m0: &Marking, limits: Limits) -> Result<Liveness, ExploreError> {
    Ok(complete_graph(net, m0, limits)?.liveness(net.transition_count()))
}

pub fn boundedness(net: &PetriNet, m0: &Marking, limits: Limits) -> Result<Boundedness, ExploreError> {
    match explore(net, m0, limits) {
        Exploration::Complete(g) => {
            let (k, per_place) = g.bounds();
            Ok(Boundedness::Bounded { k, per_place })
        }
        Exploration::Unbounded(w) => Ok(Boundedness::Unbounded(w)),
        Exploration::LimitExceeded { states, edges } => Err(ExploreError::LimitExceeded { states, edges }),
    }
}

pub fn find_constrained_sequence(
    net: &PetriNet,
    m0: &Marking,
    from: &Marking,
    to: &Marking,
    allowed: &[usize],
    limits: Limits,
) -> Result<Option<Vec<usize>>, ExploreError> {
    let g = complete_graph(net, m0, limits)?;
    let a = g.node_of(from).ok_or_else(|| ExploreError::UnknownMarking(net.show(from)))?;
    let b = g.node_of(to).ok_or_else(|| ExploreError::UnknownMarking(net.show(to)))?;
    let mut mask = vec![false; net.transition_count()];
    for &t in allowed {
        mask[t] = true;
    }
    Ok(g.constrained_path(a, b, &mask))
}
