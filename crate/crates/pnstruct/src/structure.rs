//! Structural analyses: net classes, siphons and traps, P- and T-components,
//! Q-projections and workflow nets.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::marking::Marking;
use crate::net::{self, validate_fragment, Direction, NetError, Node, PetriNet, RawNet};
use crate::par;
use crate::state_space::{explore, Exploration, ExploreError, Limits, Liveness, PumpWitness};

pub const T_STAR: &str = "t_star";
pub const DEFAULT_SIZE_CAP: usize = 20;
pub const DEFAULT_COMPONENT_CAP: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("{places} places exceed the siphon enumeration cap of {cap}")]
    CapExceeded { places: usize, cap: usize },
    #[error("more than {0} components")]
    ComponentLimitExceeded(usize),
    #[error("unknown place `{0}`")]
    UnknownPlace(String),
    #[error("not a workflow net")]
    NotAWorkflowNet,
    #[error("the net already has a node named `{T_STAR}`")]
    IdCollisionOnTStar,
    #[error("no components chosen")]
    EmptyCover,
    #[error("chosen set #{0} is not a P-component")]
    NotAComponent(usize),
    #[error(transparent)]
    Explore(#[from] ExploreError),
    #[error(transparent)]
    Net(#[from] NetError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetClassification {
    pub is_p_net: bool,
    pub is_t_net: bool,
    pub is_free_choice: bool,
    pub is_strongly_connected: bool,
    /// Source and sink place of a workflow net.
    pub workflow: Option<(usize, usize)>,
}

pub fn classify(net: &PetriNet) -> NetClassification {
    let nt = net.transition_count();
    let np = net.place_count();
    NetClassification {
        is_p_net: (0..nt).all(|t| net.pre_t(t).len() == 1 && net.post_t(t).len() == 1),
        is_t_net: (0..np).all(|p| net.pre_p(p).len() == 1 && net.post_p(p).len() == 1),
        is_free_choice: is_free_choice(net),
        is_strongly_connected: is_strongly_connected(net),
        workflow: workflow_places(net),
    }
}

fn equal_or_disjoint(a: &[usize], b: &[usize]) -> bool {
    a == b || !a.iter().any(|x| b.binary_search(x).is_ok())
}

/// Any two transitions have equal or disjoint pre-sets.
pub fn is_free_choice(net: &PetriNet) -> bool {
    let nt = net.transition_count();
    (0..nt).all(|a| (a + 1..nt).all(|b| equal_or_disjoint(net.pre_t(a), net.pre_t(b))))
}

/// Any two places have equal or disjoint post-sets.
pub fn is_free_choice_by_places(net: &PetriNet) -> bool {
    let np = net.place_count();
    (0..np).all(|a| (a + 1..np).all(|b| equal_or_disjoint(net.post_p(a), net.post_p(b))))
}

fn directed_reach(net: &PetriNet, start: Node, dir: Direction, within: Option<&BTreeSet<Node>>) -> BTreeSet<Node> {
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(x) = stack.pop() {
        for y in net.neighbours(x, dir) {
            if within.is_none_or(|w| w.contains(&y)) && seen.insert(y) {
                stack.push(y);
            }
        }
    }
    seen
}

fn strongly_connected_within(net: &PetriNet, nodes: &BTreeSet<Node>) -> bool {
    let Some(&first) = nodes.iter().next() else {
        return false;
    };
    directed_reach(net, first, Direction::Post, Some(nodes)).len() == nodes.len()
        && directed_reach(net, first, Direction::Pre, Some(nodes)).len() == nodes.len()
}

pub fn is_strongly_connected(net: &PetriNet) -> bool {
    strongly_connected_within(net, &net.nodes().collect())
}

fn workflow_places(net: &PetriNet) -> Option<(usize, usize)> {
    let sources: Vec<usize> = (0..net.place_count()).filter(|&p| net.pre_p(p).is_empty()).collect();
    let sinks: Vec<usize> = (0..net.place_count()).filter(|&p| net.post_p(p).is_empty()).collect();
    let (&[i], &[o]) = (sources.as_slice(), sinks.as_slice()) else {
        return None;
    };
    let total = net.place_count() + net.transition_count();
    let forward = directed_reach(net, Node::Place(i), Direction::Post, None);
    let backward = directed_reach(net, Node::Place(o), Direction::Pre, None);
    (i != o && forward.len() == total && backward.len() == total).then_some((i, o))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetKind {
    Siphon,
    Trap,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SetPredicate {
    pub holds: bool,
    pub proper: bool,
}

/// Siphon: every transition feeding the set also consumes from it.
pub fn is_siphon(net: &PetriNet, members: &[bool]) -> bool {
    (0..net.transition_count())
        .all(|t| !net.post_t(t).iter().any(|&p| members[p]) || net.pre_t(t).iter().any(|&p| members[p]))
}

/// Trap: every transition consuming from the set also feeds it.
pub fn is_trap(net: &PetriNet, members: &[bool]) -> bool {
    (0..net.transition_count())
        .all(|t| !net.pre_t(t).iter().any(|&p| members[p]) || net.post_t(t).iter().any(|&p| members[p]))
}

pub fn siphon_trap_predicate(net: &PetriNet, ids: &[&str], kind: SetKind) -> Result<SetPredicate, StructureError> {
    let mut members = vec![false; net.place_count()];
    for id in ids {
        let p = net.place(id).ok_or_else(|| StructureError::UnknownPlace(id.to_string()))?;
        members[p] = true;
    }
    let holds = match kind {
        SetKind::Siphon => is_siphon(net, &members),
        SetKind::Trap => is_trap(net, &members),
    };
    Ok(SetPredicate { holds, proper: !ids.is_empty() })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommonerVerdict {
    pub holds: bool,
    /// A proper siphon containing no marked trap.
    pub failing_siphon: Option<Vec<usize>>,
}

/// Every proper siphon contains a trap marked under `m0`. Siphons are
/// enumerated as place bitmasks, and for each one the largest trap inside it
/// is computed as a greatest fixpoint.
pub fn commoner_check(net: &PetriNet, m0: &Marking, size_cap: usize) -> Result<CommonerVerdict, StructureError> {
    let np = net.place_count();
    if np > size_cap || np > 63 {
        return Err(StructureError::CapExceeded { places: np, cap: size_cap.min(63) });
    }
    let mask = |ps: &[usize]| ps.iter().fold(0u64, |acc, &p| acc | 1 << p);
    let pre: Vec<u64> = (0..net.transition_count()).map(|t| mask(net.pre_t(t))).collect();
    let post: Vec<u64> = (0..net.transition_count()).map(|t| mask(net.post_t(t))).collect();
    let marked = mask(&m0.support());

    let siphon = |r: u64| pre.iter().zip(&post).all(|(&i, &o)| o & r == 0 || i & r != 0);
    let max_trap = |mut r: u64| loop {
        let before = r;
        for (&i, &o) in pre.iter().zip(&post) {
            if i & r != 0 && o & r == 0 {
                r &= !i;
            }
        }
        if r == before {
            return r;
        }
    };
    let failing = par::find_first(1u64 << np, |r| r != 0 && siphon(r) && max_trap(r) & marked == 0);
    Ok(CommonerVerdict {
        holds: failing.is_none(),
        failing_siphon: failing.map(|r| (0..np).filter(|p| r >> p & 1 == 1).collect()),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ComponentKind {
    P,
    T,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ComponentSet {
    pub kind: ComponentKind,
    pub places: Vec<usize>,
    pub transitions: Vec<usize>,
}

impl ComponentSet {
    pub fn nodes(&self) -> Vec<Node> {
        self.places.iter().map(|&p| Node::Place(p)).chain(self.transitions.iter().map(|&t| Node::Trans(t))).collect()
    }

    pub fn show(&self, net: &PetriNet) -> String {
        net.show_nodes(&self.nodes())
    }

    pub fn place_mask(&self, place_count: usize) -> Vec<bool> {
        let mut keep = vec![false; place_count];
        for &p in &self.places {
            keep[p] = true;
        }
        keep
    }
}

/// Checks the component definition directly: the node set is closed under
/// adjacency of its selected kind, its subnet is a P-net (resp. T-net), and
/// that subnet is strongly connected.
pub fn is_component(net: &PetriNet, nodes: &[Node], kind: ComponentKind) -> bool {
    let set: BTreeSet<Node> = nodes.iter().copied().collect();
    let has_places = set.iter().any(|n| matches!(n, Node::Place(_)));
    let has_trans = set.iter().any(|n| matches!(n, Node::Trans(_)));
    if !has_places || !has_trans {
        return false;
    }
    let inside = |n: &Node| set.contains(n);
    for &x in &set {
        let selected = matches!((x, kind), (Node::Place(_), ComponentKind::P) | (Node::Trans(_), ComponentKind::T));
        let ins = net.neighbours(x, Direction::Pre);
        let outs = net.neighbours(x, Direction::Post);
        if selected {
            if !ins.iter().chain(&outs).all(inside) {
                return false;
            }
        } else if ins.iter().filter(|n| inside(n)).count() != 1 || outs.iter().filter(|n| inside(n)).count() != 1 {
            return false;
        }
    }
    strongly_connected_within(net, &set)
}

/// View of the net used to enumerate either kind of component: `sel` items
/// are chosen, every adjacent `con` item needs exactly one chosen input and
/// one chosen output.
struct Shape<'a> {
    net: &'a PetriNet,
    kind: ComponentKind,
}

impl Shape<'_> {
    fn sel_count(&self) -> usize {
        match self.kind {
            ComponentKind::P => self.net.place_count(),
            ComponentKind::T => self.net.transition_count(),
        }
    }

    fn con_count(&self) -> usize {
        match self.kind {
            ComponentKind::P => self.net.transition_count(),
            ComponentKind::T => self.net.place_count(),
        }
    }

    fn con_in(&self, j: usize) -> &[usize] {
        match self.kind {
            ComponentKind::P => self.net.pre_t(j),
            ComponentKind::T => self.net.pre_p(j),
        }
    }

    fn con_out(&self, j: usize) -> &[usize] {
        match self.kind {
            ComponentKind::P => self.net.post_t(j),
            ComponentKind::T => self.net.post_p(j),
        }
    }

    fn sel_adjacent(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        let (a, b) = match self.kind {
            ComponentKind::P => (self.net.pre_p(i), self.net.post_p(i)),
            ComponentKind::T => (self.net.pre_t(i), self.net.post_t(i)),
        };
        a.iter().chain(b).copied()
    }

    fn component(&self, chosen: &[usize]) -> ComponentSet {
        let con: BTreeSet<usize> = chosen.iter().flat_map(|&i| self.sel_adjacent(i)).collect();
        let con: Vec<usize> = con.into_iter().collect();
        match self.kind {
            ComponentKind::P => ComponentSet { kind: self.kind, places: chosen.to_vec(), transitions: con },
            ComponentKind::T => ComponentSet { kind: self.kind, places: con, transitions: chosen.to_vec() },
        }
    }
}

const UNKNOWN: u8 = 0;
const IN: u8 = 1;
const OUT: u8 = 2;

/// Components whose smallest selected item is `seed`. Every adjacent
/// constraint item lacking a chosen input (or output) branches over its
/// candidates, fixing exactly one and excluding the rest, so each component
/// is produced once.
fn components_from_seed(shape: &Shape, seed: usize, cap: usize) -> Result<Vec<ComponentSet>, StructureError> {
    let mut status = vec![UNKNOWN; shape.sel_count()];
    for s in status.iter_mut().take(seed) {
        *s = OUT;
    }
    status[seed] = IN;
    let mut out = Vec::new();
    search(shape, &mut status, &mut out, cap)?;
    Ok(out)
}

fn search(shape: &Shape, status: &mut Vec<u8>, out: &mut Vec<ComponentSet>, cap: usize) -> Result<(), StructureError> {
    let chosen: Vec<usize> = (0..status.len()).filter(|&i| status[i] == IN).collect();
    let mut adjacent = vec![false; shape.con_count()];
    for &i in &chosen {
        for j in shape.sel_adjacent(i) {
            adjacent[j] = true;
        }
    }
    let mut open: Option<Vec<usize>> = None;
    for j in (0..adjacent.len()).filter(|&j| adjacent[j]) {
        for side in [shape.con_in(j), shape.con_out(j)] {
            let count = side.iter().filter(|&&i| status[i] == IN).count();
            if count > 1 {
                return Ok(());
            }
            if count == 0 && open.is_none() {
                let candidates: Vec<usize> = side.iter().copied().filter(|&i| status[i] == UNKNOWN).collect();
                if candidates.is_empty() {
                    return Ok(());
                }
                open = Some(candidates);
            }
        }
    }
    match open {
        None => {
            let comp = shape.component(&chosen);
            if is_strongly_connected_component(shape.net, &comp) {
                if out.len() >= cap {
                    return Err(StructureError::ComponentLimitExceeded(cap));
                }
                out.push(comp);
            }
            Ok(())
        }
        Some(candidates) => {
            for &c in &candidates {
                for &d in &candidates {
                    status[d] = if d == c { IN } else { OUT };
                }
                search(shape, status, out, cap)?;
            }
            for &d in &candidates {
                status[d] = UNKNOWN;
            }
            Ok(())
        }
    }
}

fn is_strongly_connected_component(net: &PetriNet, comp: &ComponentSet) -> bool {
    !comp.places.is_empty()
        && !comp.transitions.is_empty()
        && strongly_connected_within(net, &comp.nodes().into_iter().collect())
}

fn enumerate(net: &PetriNet, kind: ComponentKind, cap: usize) -> Result<Vec<ComponentSet>, StructureError> {
    let shape = Shape { net, kind };
    let per_seed = par::map_range(shape.sel_count(), |s| components_from_seed(&shape, s, cap));
    let mut all = Vec::new();
    for r in per_seed {
        all.extend(r?);
        if all.len() > cap {
            return Err(StructureError::ComponentLimitExceeded(cap));
        }
    }
    all.sort();
    Ok(all)
}

/// All P-components, sorted by place list.
pub fn p_components(net: &PetriNet) -> Result<Vec<ComponentSet>, StructureError> {
    p_components_capped(net, DEFAULT_COMPONENT_CAP)
}

pub fn p_components_capped(net: &PetriNet, cap: usize) -> Result<Vec<ComponentSet>, StructureError> {
    enumerate(net, ComponentKind::P, cap)
}

/// All T-components, sorted by place list.
pub fn t_components(net: &PetriNet) -> Result<Vec<ComponentSet>, StructureError> {
    t_components_capped(net, DEFAULT_COMPONENT_CAP)
}

pub fn t_components_capped(net: &PetriNet, cap: usize) -> Result<Vec<ComponentSet>, StructureError> {
    enumerate(net, ComponentKind::T, cap)
}

/// The components jointly contain every node.
pub fn is_cover(net: &PetriNet, comps: &[ComponentSet]) -> bool {
    let mut places = vec![false; net.place_count()];
    let mut trans = vec![false; net.transition_count()];
    for c in comps {
        c.places.iter().for_each(|&p| places[p] = true);
        c.transitions.iter().for_each(|&t| trans[t] = true);
    }
    places.into_iter().chain(trans).all(|x| x)
}

#[derive(Clone, Debug)]
pub struct QProjection {
    pub nodes: Vec<Node>,
    pub net: PetriNet,
    pub marking: Marking,
}

/// Subnet generated by the union of the chosen P-components, with the
/// marking restricted to its places. Node ids carry over unchanged.
pub fn q_projection(net: &PetriNet, m: &Marking, chosen: &[ComponentSet]) -> Result<QProjection, StructureError> {
    if chosen.is_empty() {
        return Err(StructureError::EmptyCover);
    }
    let mut nodes = BTreeSet::new();
    for (i, c) in chosen.iter().enumerate() {
        if c.kind != ComponentKind::P || !is_component(net, &c.nodes(), ComponentKind::P) {
            return Err(StructureError::NotAComponent(i));
        }
        nodes.extend(c.nodes());
    }
    let nodes: Vec<Node> = nodes.into_iter().collect();
    let frag = net::subnet(net, &nodes)?;
    let (projected, marking) = validate_fragment(&frag.to_raw(net, m))?;
    Ok(QProjection { nodes, net: projected, marking })
}

/// Adds `t_star` from the sink back to the source and marks the source.
pub fn short_circuit(net: &PetriNet) -> Result<(PetriNet, Marking), StructureError> {
    let (i, o) = classify(net).workflow.ok_or(StructureError::NotAWorkflowNet)?;
    if net.node(T_STAR).is_ok() {
        return Err(StructureError::IdCollisionOnTStar);
    }
    let mut m = Marking::empty(net.place_count());
    m.set(i, 1);
    let mut raw: RawNet = net.to_raw(&m);
    raw.transitions.push(T_STAR.to_string());
    raw.arcs.push((net.place_name(o).to_string(), T_STAR.to_string()));
    raw.arcs.push((T_STAR.to_string(), net.place_name(i).to_string()));
    Ok(net::validate_net(&raw)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SoundnessDiagnosis {
    Sound,
    /// Node marking of the short-circuited net and the transition that can
    /// never fire again from it.
    NotLive {
        marking: Marking,
        transition: usize,
    },
    Unbounded(PumpWitness),
}

#[derive(Clone, Debug)]
pub struct Soundness {
    pub sound: bool,
    pub short_circuited: PetriNet,
    pub diagnosis: SoundnessDiagnosis,
}

/// Sound iff the short-circuited net marked with one token on the source is
/// live and bounded.
pub fn check_soundness(net: &PetriNet, limits: Limits) -> Result<Soundness, StructureError> {
    let (closed, m0) = short_circuit(net)?;
    let diagnosis = match explore(&closed, &m0, limits) {
        Exploration::Complete(g) => match g.liveness(closed.transition_count()) {
            Liveness { live: true, .. } => SoundnessDiagnosis::Sound,
            Liveness { witness, .. } => {
                let (v, t) = witness.expect("failing liveness has a witness");
                SoundnessDiagnosis::NotLive { marking: g.marking(v).clone(), transition: t }
            }
        },
        Exploration::Unbounded(w) => SoundnessDiagnosis::Unbounded(w),
        Exploration::LimitExceeded { states, edges } => {
            return Err(ExploreError::LimitExceeded { states, edges }.into())
        }
    };
    Ok(Soundness { sound: diagnosis == SoundnessDiagnosis::Sound, short_circuited: closed, diagnosis })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::net::tests::self_loop;
    use crate::net::{fire, validate_net};
    use crate::state_space::complete_graph;
    use proptest::prelude::*;

    fn shown(net: &PetriNet, comps: &[ComponentSet]) -> Vec<String> {
        comps.iter().map(|c| c.show(net)).collect()
    }

    fn seq_net() -> PetriNet {
        validate_net(&RawNet {
            name: "one".into(),
            places: vec![("i".into(), 0), ("o".into(), 0)],
            transitions: vec!["t".into()],
            arcs: vec![("i".into(), "t".into()), ("t".into(), "o".into())],
        })
        .unwrap()
        .0
    }

    #[test]
    fn free_choice_verdicts() {
        assert!(classify(&corpus::load("fig3").0).is_free_choice);
        assert!(!classify(&corpus::load("fig2").0).is_free_choice);
    }

    #[test]
    fn fig4_workflow_detection() {
        let (net, _) = corpus::load("fig4_wf");
        let (i, o) = classify(&net).workflow.unwrap();
        assert_eq!((net.place_name(i), net.place_name(o)), ("start", "end"));
        assert!(classify(&corpus::load("fig3").0).workflow.is_none());
    }

    #[test]
    fn siphons_and_traps() {
        let (net, _) = self_loop();
        for kind in [SetKind::Siphon, SetKind::Trap] {
            assert_eq!(siphon_trap_predicate(&net, &[], kind).unwrap(), SetPredicate { holds: true, proper: false });
            assert_eq!(siphon_trap_predicate(&net, &["p"], kind).unwrap(), SetPredicate { holds: true, proper: true });
        }
        assert!(matches!(siphon_trap_predicate(&net, &["q"], SetKind::Trap), Err(StructureError::UnknownPlace(_))));
    }

    #[test]
    fn commoner_on_fig3() {
        let (net, m0) = corpus::load("fig3");
        assert!(commoner_check(&net, &m0, DEFAULT_SIZE_CAP).unwrap().holds);
        let empty = Marking::empty(net.place_count());
        assert!(!commoner_check(&net, &empty, DEFAULT_SIZE_CAP).unwrap().holds);
        let (net, m0) = self_loop();
        assert!(commoner_check(&net, &m0, DEFAULT_SIZE_CAP).unwrap().holds);
        assert!(matches!(commoner_check(&net, &m0, 0), Err(StructureError::CapExceeded { .. })));
    }

    #[test]
    fn commoner_agrees_with_liveness_on_free_choice_corpus() {
        for (name, net, m0) in corpus::example_nets() {
            if !is_free_choice(&net) {
                continue;
            }
            let live = complete_graph(&net, &m0, Limits::default()).unwrap().liveness(net.transition_count()).live;
            assert_eq!(commoner_check(&net, &m0, DEFAULT_SIZE_CAP).unwrap().holds, live, "{name}");
        }
    }

    #[test]
    fn component_counts() {
        let (net, _) = corpus::load("fig3");
        assert_eq!(p_components(&net).unwrap().len(), 4);
        assert_eq!(t_components(&net).unwrap().len(), 2);
        let (net, _) = corpus::load("fig5");
        let pcs = p_components(&net).unwrap();
        assert_eq!(pcs.len(), 5);
        assert!(shown(&net, &pcs).contains(&"{p2,p3,p5,p6,p8,t2,t3,t4,t5,t6}".to_string()));
        let (net, _) = self_loop();
        assert_eq!(shown(&net, &p_components(&net).unwrap()), ["{p,t}"]);
        assert_eq!(shown(&net, &t_components(&net).unwrap()), ["{p,t}"]);
        assert!(matches!(
            p_components_capped(&corpus::load("fig3").0, 2),
            Err(StructureError::ComponentLimitExceeded(2))
        ));
    }

    #[test]
    fn components_conserve_tokens() {
        for (name, net, m0) in corpus::example_nets() {
            let g = complete_graph(&net, &m0, Limits::default()).unwrap();
            for c in p_components(&net).unwrap() {
                let sum = |m: &Marking| c.places.iter().map(|&p| m.get(p)).sum::<u32>();
                assert!(g.markings().iter().all(|m| sum(m) == sum(&m0)), "{name} {}", c.show(&net));
                for e in g.edges() {
                    let next = fire(&net, g.marking(e.source), e.transition).unwrap();
                    assert_eq!(sum(&next), sum(g.marking(e.source)));
                }
            }
        }
    }

    #[test]
    fn q_projection_of_fig3() {
        let (net, m0) = corpus::load("fig3");
        let pcs = p_components(&net).unwrap();
        let all = q_projection(&net, &m0, &pcs).unwrap();
        assert_eq!(all.nodes.len(), net.place_count() + net.transition_count());
        for c in &pcs {
            let q = q_projection(&net, &m0, std::slice::from_ref(c)).unwrap();
            assert!(classify(&q.net).is_p_net && classify(&q.net).is_strongly_connected);
            assert_eq!(q.marking.total(), 1);
        }
        assert!(matches!(q_projection(&net, &m0, &[]), Err(StructureError::EmptyCover)));
        let bogus = ComponentSet { kind: ComponentKind::P, places: vec![0], transitions: vec![0] };
        assert!(matches!(q_projection(&net, &m0, &[bogus]), Err(StructureError::NotAComponent(0))));
    }

    #[test]
    fn short_circuit_examples() {
        let (wf, _) = corpus::load("fig4_wf");
        let (closed, m) = short_circuit(&wf).unwrap();
        let (fig4, m4) = corpus::load("fig4");
        let (a, b) = (closed.to_raw(&m), fig4.to_raw(&m4));
        assert_eq!((a.places, a.transitions, a.arcs), (b.places, b.transitions, b.arcs));
        let (closed, _) = short_circuit(&seq_net()).unwrap();
        assert_eq!((closed.place_count(), closed.transition_count()), (2, 2));
        assert!(classify(&closed).is_strongly_connected);
        assert!(matches!(short_circuit(&corpus::load("fig3").0), Err(StructureError::NotAWorkflowNet)));
        assert!(matches!(short_circuit(&fig4), Err(StructureError::NotAWorkflowNet)));
    }

    #[test]
    fn soundness_examples() {
        assert!(check_soundness(&corpus::load("fig4_wf").0, Limits::default()).unwrap().sound);
        assert!(check_soundness(&seq_net(), Limits::default()).unwrap().sound);
        // xor-split whose second branch waits for a token that never comes
        let raw = RawNet {
            name: "stuck".into(),
            places: ["i", "a", "b", "c", "o"].iter().map(|p| (p.to_string(), 0)).collect(),
            transitions: ["x", "y", "u", "v"].iter().map(|t| t.to_string()).collect(),
            arcs: [
                ("i", "x"),
                ("i", "y"),
                ("x", "a"),
                ("y", "b"),
                ("a", "u"),
                ("u", "o"),
                ("b", "v"),
                ("c", "v"),
                ("v", "o"),
                ("u", "c"),
            ]
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect(),
        };
        let (net, _) = validate_net(&raw).unwrap();
        let s = check_soundness(&net, Limits::default()).unwrap();
        assert!(!s.sound);
        assert!(matches!(s.diagnosis, SoundnessDiagnosis::NotLive { .. } | SoundnessDiagnosis::Unbounded(_)));
    }

    /// Tests the component definition on every node subset.
    pub(crate) fn brute_force_components(net: &PetriNet, kind: ComponentKind) -> Vec<ComponentSet> {
        let nodes: Vec<Node> = net.nodes().collect();
        let mut out = Vec::new();
        for mask in 1u32..(1 << nodes.len()) {
            let xs: Vec<Node> = (0..nodes.len()).filter(|i| mask >> i & 1 == 1).map(|i| nodes[i]).collect();
            if is_component(net, &xs, kind) {
                let places = xs.iter().filter_map(|n| if let Node::Place(p) = n { Some(*p) } else { None }).collect();
                let transitions =
                    xs.iter().filter_map(|n| if let Node::Trans(t) = n { Some(*t) } else { None }).collect();
                out.push(ComponentSet { kind, places, transitions });
            }
        }
        out.sort();
        out
    }

    fn random_net() -> impl Strategy<Value = (PetriNet, Marking)> {
        (any::<u64>(), 2usize..=12)
            .prop_map(|(seed, size)| crate::gen::gen_small_random(&crate::gen::GenParams::new(seed, size)).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn free_choice_forms_agree((net, _) in random_net()) {
            prop_assert_eq!(is_free_choice(&net), is_free_choice_by_places(&net));
        }

        #[test]
        fn components_match_brute_force((net, _) in random_net()) {
            prop_assert_eq!(p_components(&net).unwrap(), brute_force_components(&net, ComponentKind::P));
            prop_assert_eq!(t_components(&net).unwrap(), brute_force_components(&net, ComponentKind::T));
        }

        #[test]
        fn siphon_predicate_matches_set_inclusion(mask in 0u32..256) {
            let (net, _) = corpus::load("fig3");
            let members: Vec<bool> = (0..8).map(|p| mask >> p & 1 == 1).collect();
            let pre_r: BTreeSet<usize> = (0..8).filter(|&p| members[p]).flat_map(|p| net.pre_p(p).to_vec()).collect();
            let post_r: BTreeSet<usize> = (0..8).filter(|&p| members[p]).flat_map(|p| net.post_p(p).to_vec()).collect();
            prop_assert_eq!(is_siphon(&net, &members), pre_r.is_subset(&post_r));
            prop_assert_eq!(is_trap(&net, &members), post_r.is_subset(&pre_r));
        }
    }
}
