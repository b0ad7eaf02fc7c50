//! One analysis row per marked net, serialized as JSON with a fixed key order.

use serde::Serialize;

use crate::behavior::{
    all_blocking, home_clusters_in_graph, local_safety, lucency_in_graph, pumped_pair, LucencyVerdict,
};
use crate::marking::Marking;
use crate::net::{clusters, PetriNet};
use crate::state_space::{explore, Exploration, Limits, PumpWitness};
use crate::structure::{classify, is_cover, p_components, t_components, ComponentSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    pub name: String,
    pub place_count: usize,
    pub transition_count: usize,
    pub reachable_marking_count: Option<usize>,
    pub free_choice: bool,
    pub live: Option<bool>,
    pub bounded: Option<bool>,
    pub safe: Option<bool>,
    pub locally_safe: Option<bool>,
    pub p_component_count: Option<usize>,
    pub t_component_count: Option<usize>,
    pub has_p_cover: Option<bool>,
    pub has_t_cover: Option<bool>,
    pub home_cluster_present: Option<bool>,
    pub perpetual: Option<bool>,
    pub unique_blocking_markings: Option<bool>,
    pub lucent: Option<bool>,
    pub details: Details,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Details {
    pub clusters: Vec<String>,
    pub p_components: Vec<String>,
    pub t_components: Vec<String>,
    pub home_markings: Vec<String>,
    pub home_clusters: Vec<String>,
    pub blocking: Vec<BlockingEntry>,
    pub bound: Option<u32>,
    pub place_bounds: Vec<PlaceBound>,
    pub liveness_witness: Option<LivenessWitness>,
    pub local_safety_witness: Option<LocalSafetyWitness>,
    pub lucency_witness: Option<LucencyWitness>,
    pub unbounded_witness: Option<PumpView>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockingEntry {
    pub cluster: String,
    pub markings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlaceBound {
    pub place: String,
    pub max_tokens: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LivenessWitness {
    pub marking: String,
    pub transition: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalSafetyWitness {
    pub component: String,
    pub marking: String,
    pub tokens: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LucencyWitness {
    pub first: String,
    pub second: String,
    pub enabled: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PumpView {
    pub prefix: String,
    pub pump: String,
    pub from: String,
    pub to: String,
}

impl PumpView {
    pub fn new(net: &PetriNet, w: &PumpWitness) -> Self {
        PumpView {
            prefix: net.show_sequence(&w.prefix),
            pump: net.show_sequence(&w.pump),
            from: net.show(&w.m1),
            to: net.show(&w.m2),
        }
    }
}

fn and3(xs: &[Option<bool>]) -> Option<bool> {
    if xs.contains(&Some(false)) {
        Some(false)
    } else if xs.iter().all(|x| *x == Some(true)) {
        Some(true)
    } else {
        None
    }
}

pub fn analyze(net: &PetriNet, m0: &Marking, limits: Limits) -> AnalysisReport {
    let cls = classify(net);
    let cs = clusters(net);
    let mut warnings = Vec::new();
    let mut details = Details { clusters: cs.iter().map(|c| c.show(net)).collect(), ..Details::default() };

    let comps = |r: Result<Vec<ComponentSet>, _>, kind: &str, warnings: &mut Vec<String>| match r {
        Ok(v) => Some(v),
        Err(e) => {
            warnings.push(format!("{kind}-components: {e}"));
            None
        }
    };
    let pcs = comps(p_components(net), "P", &mut warnings);
    let tcs = comps(t_components(net), "T", &mut warnings);
    if let Some(v) = &pcs {
        details.p_components = v.iter().map(|c| c.show(net)).collect();
        if v.is_empty() {
            warnings.push("no P-components: local safeness holds vacuously".into());
        }
    }
    if let Some(v) = &tcs {
        details.t_components = v.iter().map(|c| c.show(net)).collect();
    }

    let mut report = AnalysisReport {
        name: net.name().to_string(),
        place_count: net.place_count(),
        transition_count: net.transition_count(),
        reachable_marking_count: None,
        free_choice: cls.is_free_choice,
        live: None,
        bounded: None,
        safe: None,
        locally_safe: None,
        p_component_count: pcs.as_ref().map(Vec::len),
        t_component_count: tcs.as_ref().map(Vec::len),
        has_p_cover: pcs.as_ref().map(|v| is_cover(net, v)),
        has_t_cover: tcs.as_ref().map(|v| is_cover(net, v)),
        home_cluster_present: None,
        perpetual: None,
        unique_blocking_markings: None,
        lucent: None,
        details: Details::default(),
        warnings: Vec::new(),
    };

    match explore(net, m0, limits) {
        Exploration::Complete(g) => {
            let (k, per_place) = g.bounds();
            let liveness = g.liveness(net.transition_count());
            let home_nodes = g.home_nodes();
            let home = home_clusters_in_graph(net, &g, &cs);
            let blocking = all_blocking(net, &g, &cs);
            let live_bounded_fc = liveness.live && cls.is_free_choice;
            report.reachable_marking_count = Some(g.len());
            report.live = Some(liveness.live);
            report.bounded = Some(true);
            report.safe = Some(k <= 1);
            report.home_cluster_present = Some(!home.is_empty());
            report.unique_blocking_markings =
                Some(blocking.iter().all(|b| b.markings.len() <= 1 && (!live_bounded_fc || b.markings.len() == 1)));
            if let Some(v) = &pcs {
                let ls = local_safety(v, g.markings());
                report.locally_safe = Some(ls.holds);
                details.local_safety_witness = ls.witness.map(|(c, m, tokens)| LocalSafetyWitness {
                    component: c.show(net),
                    marking: net.show(&m),
                    tokens,
                });
            }
            let verdict = lucency_in_graph(net, &g);
            report.lucent = verdict.is_lucent();
            if let LucencyVerdict::NotLucent { first, second, enabled } = verdict {
                details.lucency_witness = Some(LucencyWitness {
                    first: net.show(&first),
                    second: net.show(&second),
                    enabled: net.show_transitions(&enabled),
                });
            }
            details.liveness_witness = liveness.witness.map(|(v, t)| LivenessWitness {
                marking: net.show(g.marking(v)),
                transition: net.transition_name(t).to_string(),
            });
            details.home_markings = home_nodes.iter().map(|&v| net.show(g.marking(v))).collect();
            details.home_clusters = home.iter().map(|&i| cs[i].show(net)).collect();
            details.blocking = blocking
                .iter()
                .map(|b| BlockingEntry {
                    cluster: b.cluster.show(net),
                    markings: b.markings.iter().map(|m| net.show(m)).collect(),
                })
                .collect();
            details.bound = Some(k);
            details.place_bounds = per_place
                .iter()
                .enumerate()
                .map(|(p, &max_tokens)| PlaceBound { place: net.place_name(p).to_string(), max_tokens })
                .collect();
        }
        Exploration::Unbounded(w) => {
            warnings.push("unbounded: the reachable set is infinite".into());
            warnings.push("liveness, home clusters and blocking markings are not decided for unbounded nets".into());
            report.bounded = Some(false);
            report.safe = Some(false);
            report.lucent = Some(false);
            if let Some(v) = &pcs {
                let ls = local_safety(v, std::slice::from_ref(m0));
                report.locally_safe = Some(ls.holds);
            }
            if let Some((a, b)) = pumped_pair(net, &w) {
                details.lucency_witness = Some(LucencyWitness {
                    first: net.show(&a),
                    second: net.show(&b),
                    enabled: net.show_transitions(&crate::net::enabled_transitions(net, &a)),
                });
            }
            details.unbounded_witness = Some(PumpView::new(net, &w));
        }
        Exploration::LimitExceeded { states, edges } => {
            warnings.push(format!("exploration limit exceeded after {states} states and {edges} edges"));
            if let Some(v) = &pcs {
                let ls = local_safety(v, std::slice::from_ref(m0));
                report.locally_safe = Some(ls.holds);
            }
        }
    }
    report.perpetual = and3(&[report.live, report.bounded, report.home_cluster_present]);
    report.details = details;
    report.warnings = warnings;
    report
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
