//! Behavioural properties over the reachability graph: blocking markings,
//! local safeness, home clusters, perpetuality, lucency and realizable paths.

use std::collections::{BTreeSet, HashMap, VecDeque};

use thiserror::Error;

use crate::marking::Marking;
use crate::net::{cluster_marking, clusters, enabled_transitions, fire_sequence, Cluster, NetError, Node, PetriNet};
use crate::par;
use crate::state_space::{explore, Exploration, ExploreError, Limits, PumpWitness, ReachabilityGraph};
use crate::structure::{p_components, ComponentSet, StructureError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BehaviorError {
    #[error("not a cluster of this net: {0}")]
    UnknownCluster(String),
    #[error("path is not an alternating place/transition path of the net")]
    NotAPath,
    #[error("path visits a node twice")]
    PathNotElementary,
    #[error("path leaves the component")]
    PathLeavesComponent,
    #[error("path does not end in a place of the cluster")]
    PathEndsOutsideCluster,
    #[error("first place of the path is not marked")]
    StartUnmarked,
    #[error(transparent)]
    Explore(#[from] ExploreError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Net(#[from] NetError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockingReport {
    pub cluster: Cluster,
    /// Reachable markings enabling exactly the cluster's transitions, sorted.
    pub markings: Vec<Marking>,
    /// Per blocking marking, a shortest sequence from the initial marking
    /// that avoids the cluster's transitions.
    pub avoidance: Vec<Option<Vec<usize>>>,
}

pub fn blocking_in_graph(net: &PetriNet, g: &ReachabilityGraph, cluster: &Cluster) -> BlockingReport {
    let mut nodes: Vec<usize> =
        (0..g.len()).filter(|&v| enabled_transitions(net, g.marking(v)) == cluster.transitions).collect();
    nodes.sort_by(|&a, &b| g.marking(a).cmp(g.marking(b)));
    let mut allowed = vec![true; net.transition_count()];
    for &t in &cluster.transitions {
        allowed[t] = false;
    }
    BlockingReport {
        cluster: cluster.clone(),
        markings: nodes.iter().map(|&v| g.marking(v).clone()).collect(),
        avoidance: nodes.iter().map(|&v| g.constrained_path(g.initial(), v, &allowed)).collect(),
    }
}

/// Blocking reports for every cluster, in cluster order.
pub fn all_blocking(net: &PetriNet, g: &ReachabilityGraph, cs: &[Cluster]) -> Vec<BlockingReport> {
    par::map(cs, |c| blocking_in_graph(net, g, c))
}

pub fn blocking_markings(
    net: &PetriNet,
    m0: &Marking,
    c: &Cluster,
    limits: Limits,
) -> Result<BlockingReport, BehaviorError> {
    if !clusters(net).contains(c) {
        return Err(BehaviorError::UnknownCluster(c.show(net)));
    }
    let g = explore(net, m0, limits).into_graph()?;
    Ok(blocking_in_graph(net, &g, c))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalSafety {
    pub holds: bool,
    /// Component, marking and its token sum over the component.
    pub witness: Option<(ComponentSet, Marking, u64)>,
    /// No P-components at all, so the property holds vacuously.
    pub vacuous: bool,
}

/// Checks every component against the given markings. P-components keep
/// their token sum, so the initial marking alone decides nets that could not
/// be explored.
pub fn local_safety(comps: &[ComponentSet], markings: &[Marking]) -> LocalSafety {
    for c in comps {
        for m in markings {
            let sum: u64 = c.places.iter().map(|&p| m.get(p) as u64).sum();
            if sum > 1 {
                return LocalSafety { holds: false, witness: Some((c.clone(), m.clone(), sum)), vacuous: false };
            }
        }
    }
    LocalSafety { holds: true, witness: None, vacuous: comps.is_empty() }
}

pub fn is_locally_safe(net: &PetriNet, m0: &Marking, limits: Limits) -> Result<LocalSafety, BehaviorError> {
    let comps = p_components(net)?;
    let g = explore(net, m0, limits).into_graph()?;
    Ok(local_safety(&comps, g.markings()))
}

/// Indices of clusters whose marking is a home marking.
pub fn home_clusters_in_graph(net: &PetriNet, g: &ReachabilityGraph, cs: &[Cluster]) -> Vec<usize> {
    let home: BTreeSet<usize> = g.home_nodes().into_iter().collect();
    (0..cs.len()).filter(|&i| g.node_of(&cluster_marking(net, &cs[i])).is_some_and(|v| home.contains(&v))).collect()
}

pub fn home_clusters(net: &PetriNet, m0: &Marking, limits: Limits) -> Result<Vec<Cluster>, BehaviorError> {
    let g = explore(net, m0, limits).into_graph()?;
    let cs = clusters(net);
    Ok(home_clusters_in_graph(net, &g, &cs).into_iter().map(|i| cs[i].clone()).collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerpetualityReport {
    /// Undecided for unbounded nets.
    pub live: Option<bool>,
    pub bounded: bool,
    pub home_clusters: Vec<Cluster>,
    pub perpetual: bool,
    pub locally_safe: LocalSafety,
}

pub fn is_perpetual(net: &PetriNet, m0: &Marking, limits: Limits) -> Result<PerpetualityReport, BehaviorError> {
    let comps = p_components(net)?;
    match explore(net, m0, limits) {
        Exploration::Complete(g) => {
            let live = g.liveness(net.transition_count()).live;
            let cs = clusters(net);
            let home: Vec<Cluster> = home_clusters_in_graph(net, &g, &cs).into_iter().map(|i| cs[i].clone()).collect();
            Ok(PerpetualityReport {
                live: Some(live),
                bounded: true,
                perpetual: live && !home.is_empty(),
                home_clusters: home,
                locally_safe: local_safety(&comps, g.markings()),
            })
        }
        Exploration::Unbounded(_) => Ok(PerpetualityReport {
            live: None,
            bounded: false,
            home_clusters: Vec::new(),
            perpetual: false,
            locally_safe: local_safety(&comps, std::slice::from_ref(m0)),
        }),
        Exploration::LimitExceeded { states, edges } => Err(ExploreError::LimitExceeded { states, edges }.into()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LucencyVerdict {
    Lucent,
    NotLucent {
        first: Marking,
        second: Marking,
        enabled: Vec<usize>,
    },
    /// Unbounded nets are never lucent. `pair` holds two reachable markings
    /// with equal enabled sets obtained by pumping once more.
    NotLucentUnbounded {
        witness: PumpWitness,
        pair: Option<(Marking, Marking)>,
    },
    Inconclusive {
        states: usize,
        edges: usize,
    },
}

impl LucencyVerdict {
    pub fn is_lucent(&self) -> Option<bool> {
        match self {
            LucencyVerdict::Lucent => Some(true),
            LucencyVerdict::Inconclusive { .. } => None,
            _ => Some(false),
        }
    }
}

/// Groups of at least two nodes sharing an enabled set; nodes sorted by
/// marking, groups sorted by their first two markings.
pub fn shared_enabled_groups(net: &PetriNet, g: &ReachabilityGraph) -> Vec<(Vec<usize>, Vec<usize>)> {
    let enabled = par::map(g.markings(), |m| enabled_transitions(net, m));
    let mut groups: HashMap<&[usize], Vec<usize>> = HashMap::new();
    for (v, en) in enabled.iter().enumerate() {
        groups.entry(en.as_slice()).or_default().push(v);
    }
    let mut out: Vec<(Vec<usize>, Vec<usize>)> = groups
        .into_iter()
        .filter(|(_, vs)| vs.len() > 1)
        .map(|(en, mut vs)| {
            vs.sort_by(|&a, &b| g.marking(a).cmp(g.marking(b)));
            (en.to_vec(), vs)
        })
        .collect();
    out.sort_by(|a, b| (g.marking(a.1[0]), g.marking(a.1[1])).cmp(&(g.marking(b.1[0]), g.marking(b.1[1]))));
    out
}

pub fn lucency_in_graph(net: &PetriNet, g: &ReachabilityGraph) -> LucencyVerdict {
    match shared_enabled_groups(net, g).into_iter().next() {
        None => LucencyVerdict::Lucent,
        Some((enabled, vs)) => {
            LucencyVerdict::NotLucent { first: g.marking(vs[0]).clone(), second: g.marking(vs[1]).clone(), enabled }
        }
    }
}

/// Pumping once more from `m2` gives `m3 = m2 + (m2 - m1)`, which marks the
/// same places as `m2` and so enables the same transitions.
pub fn pumped_pair(net: &PetriNet, w: &PumpWitness) -> Option<(Marking, Marking)> {
    let (m3, _) = fire_sequence(net, &w.m2, &w.pump, false).ok()?;
    (enabled_transitions(net, &w.m2) == enabled_transitions(net, &m3) && m3 != w.m2).then(|| (w.m2.clone(), m3))
}

pub fn check_lucency(net: &PetriNet, m0: &Marking, limits: Limits) -> LucencyVerdict {
    match explore(net, m0, limits) {
        Exploration::Complete(g) => lucency_in_graph(net, &g),
        Exploration::Unbounded(witness) => {
            let pair = pumped_pair(net, &witness);
            LucencyVerdict::NotLucentUnbounded { witness, pair }
        }
        Exploration::LimitExceeded { states, edges } => LucencyVerdict::Inconclusive { states, edges },
    }
}

fn check_path(net: &PetriNet, path: &[Node]) -> Result<(usize, usize, Vec<usize>), BehaviorError> {
    let (Some(&Node::Place(first)), Some(&Node::Place(last))) = (path.first(), path.last()) else {
        return Err(BehaviorError::NotAPath);
    };
    if path.windows(2).any(|w| !net.has_arc(w[0], w[1])) {
        return Err(BehaviorError::NotAPath);
    }
    if path.iter().collect::<BTreeSet<_>>().len() != path.len() {
        return Err(BehaviorError::PathNotElementary);
    }
    let trans = path.iter().filter_map(|n| if let Node::Trans(t) = n { Some(*t) } else { None }).collect();
    Ok((first, last, trans))
}

/// Search over (graph node, path progress) pairs: transitions in `tracked`
/// may only fire when they are the next transition of the path.
fn realize(
    g: &ReachabilityGraph,
    start: usize,
    path: &[usize],
    tracked: &[bool],
    goal: usize,
    avoid: Option<usize>,
) -> Option<Vec<usize>> {
    let n = path.len();
    let id = |v: usize, k: usize| v * (n + 1) + k;
    let mut pred: Vec<Option<(usize, usize)>> = vec![None; g.len() * (n + 1)];
    let mut seen = vec![false; g.len() * (n + 1)];
    seen[id(start, 0)] = true;
    let mut queue = VecDeque::from([(start, 0)]);
    while let Some((v, k)) = queue.pop_front() {
        if v == goal && k == n {
            let mut out = Vec::new();
            let mut cur = id(v, k);
            while let Some((p, t)) = pred[cur] {
                out.push(t);
                cur = p;
            }
            out.reverse();
            return Some(out);
        }
        for e in g.out_edges(v) {
            let next_k = if tracked[e.transition] {
                if k < n && path[k] == e.transition {
                    k + 1
                } else {
                    continue;
                }
            } else {
                k
            };
            let w = e.target;
            let reached_goal = w == goal && next_k == n;
            if let Some(p) = avoid {
                if !reached_goal && g.marking(w).get(p) > 0 {
                    continue;
                }
            }
            if !seen[id(w, next_k)] {
                seen[id(w, next_k)] = true;
                pred[id(w, next_k)] = Some((id(v, k), e.transition));
                queue.push_back((w, next_k));
            }
        }
    }
    None
}

/// A firing sequence from `m_start` to `M(C)` whose projection onto the
/// component's transitions is the path's transition sequence.
pub fn realize_path(
    net: &PetriNet,
    g: &ReachabilityGraph,
    m_start: &Marking,
    comp: &ComponentSet,
    path: &[Node],
    cluster: &Cluster,
) -> Result<Option<Vec<usize>>, BehaviorError> {
    let (first, last, trans) = check_path(net, path)?;
    let inside: BTreeSet<Node> = comp.nodes().into_iter().collect();
    if !path.iter().all(|n| inside.contains(n)) {
        return Err(BehaviorError::PathLeavesComponent);
    }
    if !cluster.places.contains(&last) {
        return Err(BehaviorError::PathEndsOutsideCluster);
    }
    if m_start.get(first) == 0 {
        return Err(BehaviorError::StartUnmarked);
    }
    let start = g.node_of(m_start).ok_or_else(|| ExploreError::UnknownMarking(net.show(m_start)))?;
    let goal_marking = cluster_marking(net, cluster);
    let Some(goal) = g.node_of(&goal_marking) else {
        return Ok(None);
    };
    let mut tracked = vec![false; net.transition_count()];
    comp.transitions.iter().for_each(|&t| tracked[t] = true);
    Ok(realize(g, start, &trans, &tracked, goal, None))
}

/// Single-place variant: from `m_start` back to `[p_home]`, firing the path
/// transitions in order while no intermediate marking marks `p_home`.
pub fn realize_path_to_place(
    net: &PetriNet,
    g: &ReachabilityGraph,
    m_start: &Marking,
    path: &[Node],
    p_home: usize,
) -> Result<Option<Vec<usize>>, BehaviorError> {
    let (first, last, trans) = check_path(net, path)?;
    if last != p_home {
        return Err(BehaviorError::PathEndsOutsideCluster);
    }
    if m_start.get(first) == 0 {
        return Err(BehaviorError::StartUnmarked);
    }
    let start = g.node_of(m_start).ok_or_else(|| ExploreError::UnknownMarking(net.show(m_start)))?;
    let Some(goal) = g.node_of(&Marking::from_places(net.place_count(), &[p_home])) else {
        return Ok(None);
    };
    let mut tracked = vec![false; net.transition_count()];
    trans.iter().for_each(|&t| tracked[t] = true);
    Ok(realize(g, start, &trans, &tracked, goal, Some(p_home)))
}

/// All elementary paths inside `comp` from `from` to any place of `targets`.
pub fn elementary_paths(net: &PetriNet, comp: &ComponentSet, from: usize, targets: &[usize]) -> Vec<Vec<Node>> {
    let inside: BTreeSet<Node> = comp.nodes().into_iter().collect();
    let mut out = Vec::new();
    let mut path = vec![Node::Place(from)];
    fn walk(
        net: &PetriNet,
        inside: &BTreeSet<Node>,
        targets: &[usize],
        path: &mut Vec<Node>,
        out: &mut Vec<Vec<Node>>,
    ) {
        let last = *path.last().expect("path is never empty");
        if let Node::Place(p) = last {
            if targets.contains(&p) {
                out.push(path.clone());
            }
        }
        for next in net.neighbours(last, crate::net::Direction::Post) {
            if inside.contains(&next) && !path.contains(&next) {
                path.push(next);
                walk(net, inside, targets, path, out);
                path.pop();
            }
        }
    }
    walk(net, &inside, targets, &mut path, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::net::{cluster_of, tests::self_loop, Cluster};
    use crate::state_space::complete_graph;
    use crate::structure::p_components;

    fn cluster_by_node(net: &PetriNet, id: &str) -> Cluster {
        let cs = clusters(net);
        cs[cluster_of(&cs, net.node(id).unwrap()).unwrap()].clone()
    }

    fn shown(net: &PetriNet, ms: &[Marking]) -> Vec<String> {
        ms.iter().map(|m| net.show(m)).collect()
    }

    #[test]
    fn blocking_examples() {
        let lim = Limits::default();
        let (net, m0) = corpus::load("fig5");
        let r = blocking_markings(&net, &m0, &cluster_by_node(&net, "p2"), lim).unwrap();
        assert_eq!(shown(&net, &r.markings), ["[p2,p5]"]);
        assert!(r.avoidance[0].is_some());
        let (net, m0) = corpus::load("fig6");
        let r = blocking_markings(&net, &m0, &cluster_by_node(&net, "p1"), lim).unwrap();
        assert_eq!(shown(&net, &r.markings), ["[p1,p3]", "[p1,p4]"]);
        let (net, m0) = corpus::load("fig1");
        let r = blocking_markings(&net, &m0, &cluster_by_node(&net, "p3"), lim).unwrap();
        assert_eq!(shown(&net, &r.markings), ["[p1,p3]"]);
        let bogus = Cluster { places: vec![0], transitions: vec![] };
        assert!(matches!(blocking_markings(&net, &m0, &bogus, lim), Err(BehaviorError::UnknownCluster(_))));
    }

    #[test]
    fn local_safety_examples() {
        let lim = Limits::default();
        let (net, m0) = corpus::load("fig5");
        let ls = is_locally_safe(&net, &m0, lim).unwrap();
        assert!(!ls.holds);
        let (comp, _, sum) = ls.witness.unwrap();
        assert_eq!(sum, 2);
        assert_eq!(comp.show(&net), "{p2,p3,p5,p6,p8,t2,t3,t4,t5,t6}");
        assert!(is_locally_safe(&corpus::load("fig2").0, &corpus::load("fig2").1, lim).unwrap().holds);
        let (net, m0) = self_loop();
        let ls = is_locally_safe(&net, &m0, lim).unwrap();
        assert!(ls.holds && !ls.vacuous);
        assert!(local_safety(&[], &[m0]).vacuous);
    }

    #[test]
    fn home_cluster_examples() {
        let lim = Limits::default();
        let (net, m0) = corpus::load("fig1");
        let hc: Vec<String> = home_clusters(&net, &m0, lim).unwrap().iter().map(|c| c.show(&net)).collect();
        assert_eq!(hc, ["{p1,p2,t1,t2}"]);
        let (net, m0) = corpus::load("fig6");
        assert!(home_clusters(&net, &m0, lim).unwrap().is_empty());
        let (net, m0) = corpus::load("fig3");
        let hc: Vec<String> = home_clusters(&net, &m0, lim).unwrap().iter().map(|c| c.show(&net)).collect();
        assert_eq!(hc, ["{p1,p2,t1,t2}", "{p7,p8,t7}"]);
    }

    #[test]
    fn perpetual_examples() {
        let lim = Limits::default();
        for (name, expect) in [("fig1", true), ("fig5", false), ("fig4", true)] {
            let (net, m0) = corpus::load(name);
            assert_eq!(is_perpetual(&net, &m0, lim).unwrap().perpetual, expect, "{name}");
        }
    }

    #[test]
    fn lucency_examples() {
        let lim = Limits::default();
        let (net, m0) = corpus::load("fig1");
        assert_eq!(check_lucency(&net, &m0, lim), LucencyVerdict::Lucent);
        let (net, m0) = corpus::load("fig2");
        let LucencyVerdict::NotLucent { first, second, enabled } = check_lucency(&net, &m0, lim) else {
            panic!("fig2 is not lucent");
        };
        assert_eq!((net.show(&first), net.show(&second)), ("[p2,p5]".into(), "[p2,p6]".into()));
        assert_eq!(net.show_transitions(&enabled), "{t3}");
        let (net, m0) = crate::state_space::tests::pumping_net();
        let LucencyVerdict::NotLucentUnbounded { pair: Some((a, b)), .. } = check_lucency(&net, &m0, lim) else {
            panic!("pumping net is unbounded");
        };
        assert_ne!(a, b);
        assert_eq!(enabled_transitions(&net, &a), enabled_transitions(&net, &b));
        assert!(matches!(
            check_lucency(&net, &m0, Limits { max_states: 1, max_edges: 0 }),
            LucencyVerdict::Inconclusive { .. }
        ));
    }

    #[test]
    fn fig7_pair_is_in_the_offending_group() {
        let (net, m0) = corpus::load("fig7");
        let g = complete_graph(&net, &m0, Limits::default()).unwrap();
        let groups = shared_enabled_groups(&net, &g);
        let expect: BTreeSet<String> = ["[p3,p7,p8]", "[p3,p5,p7]"].iter().map(|s| s.to_string()).collect();
        let hit = groups.iter().find(|(en, vs)| {
            net.show_transitions(en) == "{t1,t4}"
                && vs.iter().map(|&v| net.show(g.marking(v))).collect::<BTreeSet<_>>() == expect
        });
        assert!(hit.is_some());
    }

    #[test]
    fn realizable_paths_on_fig3() {
        let (net, m0) = corpus::load("fig3");
        let g = complete_graph(&net, &m0, Limits::default()).unwrap();
        let home = cluster_by_node(&net, "p7");
        let mut checked = 0;
        for comp in p_components(&net).unwrap() {
            let target: Vec<usize> = comp.places.iter().copied().filter(|p| home.places.contains(p)).collect();
            for v in 0..g.len() {
                let m = g.marking(v);
                let Some(&start) = comp.places.iter().find(|&&p| m.get(p) > 0) else { continue };
                for path in elementary_paths(&net, &comp, start, &target) {
                    let seq = realize_path(&net, &g, m, &comp, &path, &home).unwrap().expect("path is realizable");
                    let (end, _) = fire_sequence(&net, m, &seq, false).unwrap();
                    assert_eq!(end, cluster_marking(&net, &home));
                    let path_t: Vec<usize> =
                        path.iter().filter_map(|n| if let Node::Trans(t) = n { Some(*t) } else { None }).collect();
                    assert_eq!(crate::net::project_sequence(&seq, &comp.transitions), path_t);
                    checked += 1;
                }
            }
        }
        assert!(checked > 0);
    }

    #[test]
    fn zero_length_path() {
        let (net, m0) = corpus::load("fig1");
        let g = complete_graph(&net, &m0, Limits::default()).unwrap();
        let c1 = cluster_by_node(&net, "p1");
        let comp = p_components(&net).unwrap().into_iter().find(|c| c.places.contains(&0)).unwrap();
        let seq = realize_path(&net, &g, &m0, &comp, &[Node::Place(0)], &c1).unwrap().unwrap();
        assert!(seq.is_empty());
        let p3 = net.place("p3").unwrap();
        let comp3 = p_components(&net).unwrap().into_iter().find(|c| c.places.contains(&p3)).unwrap();
        let m = net.marking_of(&["p1", "p3"]).unwrap();
        let targets: Vec<usize> = comp3.places.iter().copied().filter(|p| c1.places.contains(p)).collect();
        for path in elementary_paths(&net, &comp3, p3, &targets) {
            assert!(realize_path(&net, &g, &m, &comp3, &path, &c1).unwrap().is_some());
        }
    }

    #[test]
    fn path_validation() {
        let (net, m0) = corpus::load("fig1");
        let g = complete_graph(&net, &m0, Limits::default()).unwrap();
        let c1 = cluster_by_node(&net, "p1");
        let comps = p_components(&net).unwrap();
        let comp = &comps[0];
        let n = |id: &str| net.node(id).unwrap();
        assert!(matches!(realize_path(&net, &g, &m0, comp, &[n("t1")], &c1), Err(BehaviorError::NotAPath)));
        assert!(matches!(realize_path(&net, &g, &m0, comp, &[n("p1"), n("p2")], &c1), Err(BehaviorError::NotAPath)));
        let m = net.marking_of(&["p3", "p4"]).unwrap();
        assert!(matches!(realize_path(&net, &g, &m, comp, &[n("p1")], &c1), Err(BehaviorError::StartUnmarked)));
    }

    #[test]
    fn cyclic_single_place_variant() {
        let (wf, _) = corpus::load("fig4_wf");
        let (net, m0) = crate::structure::short_circuit(&wf).unwrap();
        let g = complete_graph(&net, &m0, Limits::default()).unwrap();
        let start = net.place("start").unwrap();
        let m = net.marking_of(&["p4", "p7"]).unwrap();
        let comp = p_components(&net)
            .unwrap()
            .into_iter()
            .find(|c| c.places.contains(&start) && c.places.contains(&net.place("p4").unwrap()))
            .unwrap();
        let paths = elementary_paths(&net, &comp, net.place("p4").unwrap(), &[start]);
        assert!(!paths.is_empty());
        for path in paths {
            let seq = realize_path_to_place(&net, &g, &m, &path, start).unwrap().expect("realizable");
            let (_, trace) = fire_sequence(&net, &m, &seq, true).unwrap();
            assert_eq!(trace.last().unwrap(), &m0);
            assert!(trace[1..trace.len() - 1].iter().all(|x| x.get(start) == 0));
        }
    }
}
