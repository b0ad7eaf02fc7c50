//! The example nets shipped with the crate.

use crate::io::parse_lpn;
use crate::marking::Marking;
use crate::net::PetriNet;

pub const SOURCES: &[(&str, &str)] = &[
    ("fig1", include_str!("../corpus/fig1.lpn")),
    ("fig2", include_str!("../corpus/fig2.lpn")),
    ("fig3", include_str!("../corpus/fig3.lpn")),
    ("fig4", include_str!("../corpus/fig4.lpn")),
    ("fig5", include_str!("../corpus/fig5.lpn")),
    ("fig6", include_str!("../corpus/fig6.lpn")),
    ("fig7", include_str!("../corpus/fig7.lpn")),
    ("fig8", include_str!("../corpus/fig8.lpn")),
    ("fig4_wf", include_str!("../corpus/workflow/fig4_wf.lpn")),
];

/// Every example net with its initial marking, in `SOURCES` order.
pub fn example_nets() -> Vec<(String, PetriNet, Marking)> {
    SOURCES
        .iter()
        .map(|(name, text)| {
            let (net, m) = parse_lpn(text).expect("shipped corpus parses");
            (name.to_string(), net, m)
        })
        .collect()
}

pub fn get(name: &str) -> Option<(PetriNet, Marking)> {
    SOURCES.iter().find(|(n, _)| *n == name).map(|(_, text)| parse_lpn(text).expect("shipped corpus parses"))
}

/// Panics on unknown names; meant for tests and benches.
pub fn load(name: &str) -> (PetriNet, Marking) {
    get(name).unwrap_or_else(|| panic!("no corpus net named {name}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::behavior::{check_lucency, LucencyVerdict};
    use crate::state_space::{complete_graph, Limits};

    #[test]
    fn sizes() {
        for (name, places, trans, states) in [("fig3", 8, 7, 9), ("fig7", 8, 8, 12), ("fig8", 6, 4, 8)] {
            let (net, m0) = load(name);
            let g = complete_graph(&net, &m0, Limits::default()).unwrap();
            assert_eq!((net.place_count(), net.transition_count(), g.len()), (places, trans, states), "{name}");
        }
    }

    #[test]
    fn fig8_pair() {
        let (net, m0) = load("fig8");
        let LucencyVerdict::NotLucent { first, second, enabled } = check_lucency(&net, &m0, Limits::default()) else {
            panic!("fig8 is not lucent");
        };
        assert_eq!(net.show(&first), "[p1,p3,p6]");
        assert_eq!(net.show(&second), "[p1,p4,p6]");
        assert_eq!(net.show_transitions(&enabled), "{t1,t4}");
    }

    #[test]
    fn names_match_declarations() {
        for (name, net, _) in example_nets() {
            assert_eq!(net.name(), name);
        }
    }
}
