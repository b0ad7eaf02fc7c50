//! Net structure: construction and validation, adjacency, firing, clusters,
//! projections and subnets.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::marking::Marking;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeKind {
    Place,
    Transition,
}

/// A place or transition, referenced by its index in the net.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    Place(usize),
    Trans(usize),
}

impl Node {
    pub fn kind(self) -> NodeKind {
        match self {
            Node::Place(_) => NodeKind::Place,
            Node::Trans(_) => NodeKind::Transition,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Pre,
    Post,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetError {
    #[error("net has no places")]
    EmptyPlaces,
    #[error("net has no transitions")]
    EmptyTransitions,
    #[error("net is not connected: `{0}` cannot be reached from `{1}`")]
    Disconnected(String, String),
    #[error("arc endpoint `{0}` is not declared")]
    DanglingArcEndpoint(String),
    #[error("identifier `{0}` declared twice")]
    DuplicateId(String),
    #[error("arc `{0}` -> `{1}` declared twice")]
    DuplicateArc(String, String),
    #[error("arc `{0}` -> `{1}` connects two places")]
    PlaceToPlaceArc(String, String),
    #[error("arc `{0}` -> `{1}` connects two transitions")]
    TransitionToTransitionArc(String, String),
    #[error("invalid identifier `{0}`")]
    InvalidId(String),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("unknown transition `{0}`")]
    UnknownTransition(String),
    #[error("marking refers to unknown place `{0}`")]
    MarkingPlaceUnknown(String),
    #[error("transition `{0}` is not enabled")]
    NotEnabled(String),
    #[error("transition `{transition}` is not enabled at step {step}")]
    NotEnabledAtStep { step: usize, transition: String },
    #[error("empty node set")]
    EmptyNodeSet,
}

/// Unvalidated net description as read from a file or built by a generator.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawNet {
    pub name: String,
    /// Places with their initial token counts.
    pub places: Vec<(String, u32)>,
    pub transitions: Vec<String>,
    pub arcs: Vec<(String, String)>,
}

pub fn is_valid_id(id: &str) -> bool {
    let mut chars = id.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic()) && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Immutable P/T net with unit arc weights. Places and transitions are kept
/// sorted by id, so index order is id order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PetriNet {
    name: String,
    places: Vec<String>,
    transitions: Vec<String>,
    pre_t: Vec<Vec<usize>>,
    post_t: Vec<Vec<usize>>,
    pre_p: Vec<Vec<usize>>,
    post_p: Vec<Vec<usize>>,
    index: HashMap<String, Node>,
}

pub fn validate_net(raw: &RawNet) -> Result<(PetriNet, Marking), NetError> {
    build(raw, true)
}

/// Like [`validate_net`] without the connectedness requirement.
pub(crate) fn validate_fragment(raw: &RawNet) -> Result<(PetriNet, Marking), NetError> {
    build(raw, false)
}

fn build(raw: &RawNet, require_connected: bool) -> Result<(PetriNet, Marking), NetError> {
    if raw.places.is_empty() {
        return Err(NetError::EmptyPlaces);
    }
    if raw.transitions.is_empty() {
        return Err(NetError::EmptyTransitions);
    }
    let mut seen = BTreeSet::new();
    for id in raw.places.iter().map(|(p, _)| p).chain(&raw.transitions) {
        if !is_valid_id(id) {
            return Err(NetError::InvalidId(id.clone()));
        }
        if !seen.insert(id.as_str()) {
            return Err(NetError::DuplicateId(id.clone()));
        }
    }

    let mut places: Vec<&(String, u32)> = raw.places.iter().collect();
    places.sort_by(|a, b| a.0.cmp(&b.0));
    let mut transitions: Vec<&String> = raw.transitions.iter().collect();
    transitions.sort();

    let mut index = HashMap::new();
    for (i, (p, _)) in places.iter().enumerate() {
        index.insert(p.clone(), Node::Place(i));
    }
    for (i, t) in transitions.iter().enumerate() {
        index.insert((*t).clone(), Node::Trans(i));
    }

    let (np, nt) = (places.len(), transitions.len());
    let mut pre_t = vec![Vec::new(); nt];
    let mut post_t = vec![Vec::new(); nt];
    let mut pre_p = vec![Vec::new(); np];
    let mut post_p = vec![Vec::new(); np];
    let mut arcs = BTreeSet::new();
    for (a, b) in &raw.arcs {
        let x = *index.get(a).ok_or_else(|| NetError::DanglingArcEndpoint(a.clone()))?;
        let y = *index.get(b).ok_or_else(|| NetError::DanglingArcEndpoint(b.clone()))?;
        if !arcs.insert((x, y)) {
            return Err(NetError::DuplicateArc(a.clone(), b.clone()));
        }
        match (x, y) {
            (Node::Place(p), Node::Trans(t)) => {
                pre_t[t].push(p);
                post_p[p].push(t);
            }
            (Node::Trans(t), Node::Place(p)) => {
                post_t[t].push(p);
                pre_p[p].push(t);
            }
            (Node::Place(_), Node::Place(_)) => return Err(NetError::PlaceToPlaceArc(a.clone(), b.clone())),
            (Node::Trans(_), Node::Trans(_)) => return Err(NetError::TransitionToTransitionArc(a.clone(), b.clone())),
        }
    }
    for v in pre_t.iter_mut().chain(&mut post_t).chain(&mut pre_p).chain(&mut post_p) {
        v.sort_unstable();
    }

    let net = PetriNet {
        name: raw.name.clone(),
        places: places.iter().map(|(p, _)| p.clone()).collect(),
        transitions: transitions.into_iter().cloned().collect(),
        pre_t,
        post_t,
        pre_p,
        post_p,
        index,
    };
    if require_connected {
        let reached = net.undirected_reach(Node::Place(0));
        if let Some(n) = net.nodes().find(|n| !reached.contains(n)) {
            return Err(NetError::Disconnected(net.node_name(n).to_string(), net.places[0].clone()));
        }
    }
    let marking = Marking::from_counts(places.iter().map(|(_, k)| *k).collect());
    Ok((net, marking))
}

impl PetriNet {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn place_count(&self) -> usize {
        self.places.len()
    }

    pub fn transition_count(&self) -> usize {
        self.transitions.len()
    }

    pub fn place_names(&self) -> &[String] {
        &self.places
    }

    pub fn transition_names(&self) -> &[String] {
        &self.transitions
    }

    pub fn place_name(&self, p: usize) -> &str {
        &self.places[p]
    }

    pub fn transition_name(&self, t: usize) -> &str {
        &self.transitions[t]
    }

    pub fn node_name(&self, n: Node) -> &str {
        match n {
            Node::Place(p) => &self.places[p],
            Node::Trans(t) => &self.transitions[t],
        }
    }

    pub fn node(&self, id: &str) -> Result<Node, NetError> {
        self.index.get(id).copied().ok_or_else(|| NetError::UnknownNode(id.to_string()))
    }

    pub fn place(&self, id: &str) -> Option<usize> {
        match self.index.get(id) {
            Some(Node::Place(p)) => Some(*p),
            _ => None,
        }
    }

    pub fn transition(&self, id: &str) -> Option<usize> {
        match self.index.get(id) {
            Some(Node::Trans(t)) => Some(*t),
            _ => None,
        }
    }

    /// All nodes: places first, then transitions.
    pub fn nodes(&self) -> impl Iterator<Item = Node> {
        (0..self.places.len()).map(Node::Place).chain((0..self.transitions.len()).map(Node::Trans))
    }

    /// Input places of transition `t`, sorted.
    pub fn pre_t(&self, t: usize) -> &[usize] {
        &self.pre_t[t]
    }

    pub fn post_t(&self, t: usize) -> &[usize] {
        &self.post_t[t]
    }

    /// Input transitions of place `p`, sorted.
    pub fn pre_p(&self, p: usize) -> &[usize] {
        &self.pre_p[p]
    }

    pub fn post_p(&self, p: usize) -> &[usize] {
        &self.post_p[p]
    }

    pub fn arc_count(&self) -> usize {
        self.pre_t.iter().chain(&self.post_t).map(Vec::len).sum()
    }

    /// Flow relation as node pairs, sorted.
    pub fn arcs(&self) -> Vec<(Node, Node)> {
        let mut out = Vec::with_capacity(self.arc_count());
        for t in 0..self.transitions.len() {
            out.extend(self.pre_t[t].iter().map(|&p| (Node::Place(p), Node::Trans(t))));
            out.extend(self.post_t[t].iter().map(|&p| (Node::Trans(t), Node::Place(p))));
        }
        out.sort();
        out
    }

    pub fn has_arc(&self, a: Node, b: Node) -> bool {
        match (a, b) {
            (Node::Place(p), Node::Trans(t)) => self.pre_t[t].binary_search(&p).is_ok(),
            (Node::Trans(t), Node::Place(p)) => self.post_t[t].binary_search(&p).is_ok(),
            _ => false,
        }
    }

    /// Neighbours of a node in the given direction.
    pub fn neighbours(&self, x: Node, dir: Direction) -> Vec<Node> {
        match (x, dir) {
            (Node::Place(p), Direction::Pre) => self.pre_p[p].iter().map(|&t| Node::Trans(t)).collect(),
            (Node::Place(p), Direction::Post) => self.post_p[p].iter().map(|&t| Node::Trans(t)).collect(),
            (Node::Trans(t), Direction::Pre) => self.pre_t[t].iter().map(|&p| Node::Place(p)).collect(),
            (Node::Trans(t), Direction::Post) => self.post_t[t].iter().map(|&p| Node::Place(p)).collect(),
        }
    }

    fn undirected_reach(&self, start: Node) -> BTreeSet<Node> {
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for dir in [Direction::Pre, Direction::Post] {
                for y in self.neighbours(x, dir) {
                    if seen.insert(y) {
                        stack.push(y);
                    }
                }
            }
        }
        seen
    }

    /// Marking with the given number of tokens on named places.
    pub fn marking(&self, tokens: &[(&str, u32)]) -> Result<Marking, NetError> {
        let mut m = Marking::empty(self.place_count());
        for (id, k) in tokens {
            let p = self.place(id).ok_or_else(|| NetError::MarkingPlaceUnknown(id.to_string()))?;
            m.set(p, m.get(p) + k);
        }
        Ok(m)
    }

    /// Marking with one token per listed place (repeats add up).
    pub fn marking_of(&self, ids: &[&str]) -> Result<Marking, NetError> {
        let tokens: Vec<(&str, u32)> = ids.iter().map(|id| (*id, 1)).collect();
        self.marking(&tokens)
    }

    pub fn show(&self, m: &Marking) -> String {
        m.display(&self.places)
    }

    pub fn show_transitions(&self, ts: &[usize]) -> String {
        let names: Vec<&str> = ts.iter().map(|&t| self.transitions[t].as_str()).collect();
        format!("{{{}}}", names.join(","))
    }

    pub fn show_sequence(&self, ts: &[usize]) -> String {
        let names: Vec<&str> = ts.iter().map(|&t| self.transitions[t].as_str()).collect();
        format!("<{}>", names.join(","))
    }

    pub fn show_nodes(&self, nodes: &[Node]) -> String {
        let names: Vec<&str> = nodes.iter().map(|&n| self.node_name(n)).collect();
        format!("{{{}}}", names.join(","))
    }

    pub fn transitions_by_name(&self, ids: &[&str]) -> Result<Vec<usize>, NetError> {
        ids.iter().map(|id| self.transition(id).ok_or_else(|| NetError::UnknownTransition(id.to_string()))).collect()
    }

    pub fn to_raw(&self, m: &Marking) -> RawNet {
        RawNet {
            name: self.name.clone(),
            places: self.places.iter().cloned().zip(m.counts().iter().copied()).collect(),
            transitions: self.transitions.clone(),
            arcs: self
                .arcs()
                .into_iter()
                .map(|(a, b)| (self.node_name(a).to_string(), self.node_name(b).to_string()))
                .collect(),
        }
    }
}

pub fn adjacency(net: &PetriNet, x: &str, dir: Direction) -> Result<Vec<Node>, NetError> {
    Ok(net.neighbours(net.node(x)?, dir))
}

/// Union of neighbours over a node set, sorted.
pub fn adjacency_of_set(net: &PetriNet, xs: &[Node], dir: Direction) -> Vec<Node> {
    let set: BTreeSet<Node> = xs.iter().flat_map(|&x| net.neighbours(x, dir)).collect();
    set.into_iter().collect()
}

pub fn is_enabled(net: &PetriNet, m: &Marking, t: usize) -> bool {
    net.pre_t(t).iter().all(|&p| m.get(p) >= 1)
}

/// Enabled transitions in index order.
pub fn enabled_transitions(net: &PetriNet, m: &Marking) -> Vec<usize> {
    (0..net.transition_count()).filter(|&t| is_enabled(net, m, t)).collect()
}

/// Fires `t` without checking enabledness.
pub(crate) fn fire_unchecked(net: &PetriNet, m: &Marking, t: usize) -> Marking {
    let mut next = m.clone();
    for &p in net.pre_t(t) {
        next.set(p, next.get(p) - 1);
    }
    for &p in net.post_t(t) {
        next.set(p, next.get(p) + 1);
    }
    next
}

pub fn fire(net: &PetriNet, m: &Marking, t: usize) -> Result<Marking, NetError> {
    if t >= net.transition_count() {
        return Err(NetError::UnknownTransition(format!("#{t}")));
    }
    if !is_enabled(net, m, t) {
        return Err(NetError::NotEnabled(net.transition_name(t).to_string()));
    }
    Ok(fire_unchecked(net, m, t))
}

/// Final marking and, if `record` is set, every intermediate marking
/// including the first and the last.
pub fn fire_sequence(
    net: &PetriNet,
    m: &Marking,
    seq: &[usize],
    record: bool,
) -> Result<(Marking, Vec<Marking>), NetError> {
    let mut cur = m.clone();
    let mut trace = Vec::new();
    if record {
        trace.push(cur.clone());
    }
    for (step, &t) in seq.iter().enumerate() {
        cur = fire(net, &cur, t).map_err(|e| match e {
            NetError::NotEnabled(name) => NetError::NotEnabledAtStep { step, transition: name },
            other => other,
        })?;
        if record {
            trace.push(cur.clone());
        }
    }
    Ok((cur, trace))
}

/// A cluster: places and transitions, each sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cluster {
    pub places: Vec<usize>,
    pub transitions: Vec<usize>,
}

impl Cluster {
    pub fn nodes(&self) -> Vec<Node> {
        self.places.iter().map(|&p| Node::Place(p)).chain(self.transitions.iter().map(|&t| Node::Trans(t))).collect()
    }

    pub fn contains(&self, n: Node) -> bool {
        match n {
            Node::Place(p) => self.places.binary_search(&p).is_ok(),
            Node::Trans(t) => self.transitions.binary_search(&t).is_ok(),
        }
    }

    pub fn show(&self, net: &PetriNet) -> String {
        net.show_nodes(&self.nodes())
    }
}

/// Clusters partition the nodes: a place and a transition share a cluster
/// whenever the place is an input of the transition. Sorted by their first
/// place (clusters without places last, by transition).
pub fn clusters(net: &PetriNet) -> Vec<Cluster> {
    let np = net.place_count();
    let nt = net.transition_count();
    let mut parent: Vec<usize> = (0..np + nt).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for t in 0..nt {
        for &p in net.pre_t(t) {
            let (a, b) = (find(&mut parent, p), find(&mut parent, np + t));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: HashMap<usize, Cluster> = HashMap::new();
    for x in 0..np + nt {
        let r = find(&mut parent, x);
        let c = groups.entry(r).or_insert_with(|| Cluster { places: vec![], transitions: vec![] });
        if x < np {
            c.places.push(x);
        } else {
            c.transitions.push(x - np);
        }
    }
    let mut out: Vec<Cluster> = groups.into_values().collect();
    out.sort_by_key(|c| (c.places.first().copied().unwrap_or(usize::MAX), c.transitions.first().copied()));
    out
}

/// Index of the cluster containing `n`.
pub fn cluster_of(clusters: &[Cluster], n: Node) -> Option<usize> {
    clusters.iter().position(|c| c.contains(n))
}

/// One token on each place of the cluster.
pub fn cluster_marking(net: &PetriNet, c: &Cluster) -> Marking {
    Marking::from_places(net.place_count(), &c.places)
}

pub fn project_marking(net: &PetriNet, m: &Marking, places: &[usize]) -> Marking {
    let mut keep = vec![false; net.place_count()];
    for &p in places {
        keep[p] = true;
    }
    m.restrict(&keep)
}

/// Subsequence of `seq` keeping members of `keep`, order preserved.
pub fn project_sequence<T: PartialEq + Clone>(seq: &[T], keep: &[T]) -> Vec<T> {
    seq.iter().filter(|x| keep.contains(x)).cloned().collect()
}

/// The subnet generated by a node set; not required to be connected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetFragment {
    pub places: Vec<usize>,
    pub transitions: Vec<usize>,
    pub arcs: Vec<(Node, Node)>,
}

pub fn subnet(net: &PetriNet, xs: &[Node]) -> Result<NetFragment, NetError> {
    if xs.is_empty() {
        return Err(NetError::EmptyNodeSet);
    }
    let set: BTreeSet<Node> = xs.iter().copied().collect();
    let mut places = Vec::new();
    let mut transitions = Vec::new();
    for &n in &set {
        match n {
            Node::Place(p) => places.push(p),
            Node::Trans(t) => transitions.push(t),
        }
    }
    let arcs = net.arcs().into_iter().filter(|(a, b)| set.contains(a) && set.contains(b)).collect();
    Ok(NetFragment { places, transitions, arcs })
}

impl NetFragment {
    pub fn to_raw(&self, net: &PetriNet, m: &Marking) -> RawNet {
        RawNet {
            name: net.name().to_string(),
            places: self.places.iter().map(|&p| (net.place_name(p).to_string(), m.get(p))).collect(),
            transitions: self.transitions.iter().map(|&t| net.transition_name(t).to_string()).collect(),
            arcs: self
                .arcs
                .iter()
                .map(|&(a, b)| (net.node_name(a).to_string(), net.node_name(b).to_string()))
                .collect(),
        }
    }
}
