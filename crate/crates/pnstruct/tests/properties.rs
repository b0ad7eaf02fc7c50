use std::collections::BTreeSet;

use proptest::prelude::*;

use pnstruct::behavior::{elementary_paths, home_clusters_in_graph, realize_path};
use pnstruct::corpus;
use pnstruct::gen::{gen_block_wf, GenParams};
use pnstruct::io::analyze;
use pnstruct::net::{cluster_marking, clusters, fire_sequence, project_sequence, Node};
use pnstruct::par::Sequential;
use pnstruct::state_space::{complete_graph, Limits};
use pnstruct::structure::{p_components, q_projection, short_circuit};
use pnstruct::{Marking, PetriNet};

fn closed_workflow(seed: u64, size: usize) -> (PetriNet, Marking) {
    short_circuit(&gen_block_wf(&GenParams::new(seed, size)).unwrap().0).unwrap()
}

fn instances() -> Vec<(PetriNet, Marking)> {
    let mut v: Vec<(PetriNet, Marking)> = corpus::example_nets().into_iter().map(|(_, n, m)| (n, m)).collect();
    v.extend((0..20).map(|s| closed_workflow(s, 2 + s as usize % 8)));
    v
}

fn named_components(net: &PetriNet) -> BTreeSet<String> {
    p_components(net).unwrap().iter().map(|c| c.show(net)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn projection_components_are_source_components(pick in any::<usize>(), mask in 1u64..u64::MAX) {
        let nets = instances();
        let (net, m0) = &nets[pick % nets.len()];
        let pcs = p_components(net).unwrap();
        prop_assume!(!pcs.is_empty());
        let width = pcs.len().min(63);
        let bits = mask % ((1u64 << width) - 1) + 1;
        let chosen: Vec<_> = (0..width).filter(|i| bits >> i & 1 == 1).map(|i| pcs[i].clone()).collect();
        let q = q_projection(net, m0, &chosen).unwrap();
        let in_projection = named_components(&q.net);
        for c in &chosen {
            prop_assert!(in_projection.contains(&c.show(net)));
        }
        let in_source = named_components(net);
        prop_assert!(in_projection.is_subset(&in_source));
    }

    #[test]
    fn elementary_paths_to_home_clusters_are_realizable(seed in 0u64..400, size in 1usize..7) {
        let (net, m0) = closed_workflow(seed, size);
        let g = complete_graph(&net, &m0, Limits::default()).unwrap();
        let cs = clusters(&net);
        let homes = home_clusters_in_graph(&net, &g, &cs);
        prop_assert!(!homes.is_empty());
        let home = &cs[homes[0]];
        for comp in p_components(&net).unwrap() {
            let targets: Vec<usize> = comp.places.iter().copied().filter(|p| home.places.contains(p)).collect();
            if targets.is_empty() {
                continue;
            }
            for v in (0..g.len()).step_by(1 + g.len() / 8) {
                let m = g.marking(v);
                let Some(&start) = comp.places.iter().find(|&&p| m.get(p) > 0) else { continue };
                for path in elementary_paths(&net, &comp, start, &targets) {
                    let seq = realize_path(&net, &g, m, &comp, &path, home).unwrap();
                    let seq = seq.expect("elementary path is realizable");
                    let (end, _) = fire_sequence(&net, m, &seq, false).unwrap();
                    prop_assert_eq!(&end, &cluster_marking(&net, home));
                    let path_t: Vec<usize> =
                        path.iter().filter_map(|n| if let Node::Trans(t) = n { Some(*t) } else { None }).collect();
                    prop_assert_eq!(project_sequence(&seq, &comp.transitions), path_t);
                }
            }
        }
    }
}

#[test]
fn single_worker_gives_identical_reports() {
    let seq = Sequential::new();
    for (net, m0) in instances() {
        let parallel = analyze(&net, &m0, Limits::default()).to_json();
        let single = seq.run(|| analyze(&net, &m0, Limits::default()).to_json());
        assert_eq!(parallel, single, "{}", net.name());
    }
}
