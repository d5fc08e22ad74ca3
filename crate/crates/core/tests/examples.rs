//! Worked examples for each stage, from input parsing to reactive currents.

mod common;

use common::{identity_heights, labels_of};
use netland::datasets;
use netland::descent::{decompose, minimax_path, DescentDag};
use netland::flooding::{
    build_flooding_complex, build_flooding_complex_on, classify_critical, classify_higher, compute_persistence, Cause,
};
use netland::graph::{parse_edge_list, threshold_edges, Graph, ThresholdMode};
use netland::height::{
    energy_from_degree, energy_from_stationary, energy_from_weighted_degree, make_injective, BaseEnergy, TieBreak,
};
use netland::markov::{markov_from_graph, MarkovChain};
use netland::tpt::{transition_path_analysis, TptOptions};
use netland::{Error, HeightFunction};

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

fn path_graph(n: usize) -> Graph {
    let pairs: Vec<(String, String)> = (1..n).map(|i| ((i - 1).to_string(), i.to_string())).collect();
    Graph::from_pairs(&pairs).unwrap()
}

#[test]
fn karate_degrees_and_empty_input() {
    let g = datasets::karate();
    assert_eq!((g.n(), g.edges().len()), (34, 78));
    assert_eq!(g.degree(g.node("34").unwrap()), 17);
    assert_eq!(g.degree(g.node("1").unwrap()), 16);
    let empty = parse_edge_list("", None, false).unwrap();
    assert_eq!((empty.n(), empty.edges().len()), (0, 0));
    assert!(matches!(parse_edge_list("a b 7\nb a 3\n", None, false), Err(Error::DuplicateEdge { line: 2, .. })));
}

#[test]
fn thresholding_rules() {
    let g = datasets::les_miserables();
    let t = threshold_edges(&g, 7.0, ThresholdMode::StrictGreater).unwrap();
    let kept = t.without_isolated().graph;
    for name in ["Valjean", "Enjolras", "Courfeyrac", "Combeferre", "Bossuet", "Marius", "Cosette"] {
        assert!(kept.node(name).is_ok(), "{name}");
    }
    assert!(t.edges().iter().all(|e| e.weight > 7.0));
    let same = threshold_edges(&g, 0.0, ThresholdMode::StrictGreater).unwrap();
    assert_eq!(same.edges(), g.edges());
    let d = parse_edge_list("a b 40\nb a 30\n", None, true).unwrap();
    let s = threshold_edges(&d, 30.0, ThresholdMode::SymmetrizeAverage).unwrap();
    assert_eq!(s.edges().len(), 1);
    assert_eq!(s.edges()[0].weight, 35.0);
}

#[test]
fn energies() {
    let g = datasets::karate();
    let e = energy_from_degree(&g).unwrap();
    let (n34, n1) = (g.node("34").unwrap(), g.node("1").unwrap());
    assert!(close(e.values[n34], -(17f64).ln()));
    assert!(close(e.values[n1], -(16f64).ln()));
    let mut sorted = e.values.clone();
    sorted.sort_by(f64::total_cmp);
    assert_eq!((sorted[0], sorted[1]), (e.values[n34], e.values[n1]));

    let star = Graph::from_pairs(&[("c", "a"), ("c", "b"), ("c", "d"), ("c", "e")]).unwrap();
    let e = energy_from_degree(&star).unwrap();
    assert!(close(e.values[star.node("c").unwrap()], -(4f64).ln()));
    assert_eq!(e.values[star.node("a").unwrap()], 0.0);

    let two = parse_edge_list("a b 5\n", None, false).unwrap();
    assert!(energy_from_weighted_degree(&two).unwrap().values.iter().all(|&v| close(v, -(5f64).ln())));
    let unit = datasets::karate();
    assert_eq!(energy_from_weighted_degree(&unit).unwrap().values, energy_from_degree(&unit).unwrap().values);

    let mc = MarkovChain::from_rows(vec!["a".into(), "b".into()], vec![vec![(0, 0.8), (1, 0.2)], vec![(0, 0.4), (1, 0.6)]])
        .unwrap();
    let e = energy_from_stationary(&mc).unwrap();
    assert!((e.values[0] + (2f64 / 3.0).ln()).abs() < 1e-10);
    assert!((e.values[1] + (1f64 / 3.0).ln()).abs() < 1e-10);
}

#[test]
fn les_miserables_full_graph_has_one_minimum() {
    let g = datasets::les_miserables();
    let h = make_injective(&energy_from_weighted_degree(&g).unwrap(), &TieBreak::IdAscending).unwrap();
    let dag = DescentDag::new(&g, &h).unwrap();
    assert_eq!(labels_of(&g, dag.local_minima()), ["Valjean"]);
}

#[test]
fn tie_breaking() {
    let h = make_injective(&BaseEnergy::new(vec![1.0, 1.0, 2.0]), &TieBreak::IdAscending).unwrap();
    assert_eq!(h.order(), [0, 1, 2]);
    let h = make_injective(&BaseEnergy::new(vec![3.0, 1.0, 2.0]), &TieBreak::IdDescending).unwrap();
    assert_eq!(h.order(), [1, 2, 0]);
    let (g, h) = datasets::karate_landscape();
    let dag = DescentDag::new(&g, &h).unwrap();
    let (n25, n26) = (g.node("25").unwrap(), g.node("26").unwrap());
    assert!(dag.lower_neighbors(n25).contains(&n26));
}

#[test]
fn descent_arcs_and_reachability() {
    let g = datasets::karate();
    let h = make_injective(&energy_from_degree(&g).unwrap(), &TieBreak::IdAscending).unwrap();
    let dag = DescentDag::new(&g, &h).unwrap();
    let n = |l: &str| g.node(l).unwrap();
    assert!(dag.lower_neighbors(n("2")).contains(&n("1")));
    assert!(dag.is_fixed_point(n("34")));
    assert!(dag.reachable(n("3"), n("34")) && !dag.reachable(n("34"), n("3")));
    assert!((0..g.n()).all(|x| dag.reachable(x, x)));

    let g = datasets::fig1_left();
    let dag = DescentDag::new(&g, &identity_heights(&g)).unwrap();
    let n = |l: &str| g.node(l).unwrap();
    let mut arcs: Vec<(&str, &str)> = dag.arcs().map(|(x, y)| (g.label(x), g.label(y))).collect();
    arcs.sort();
    assert_eq!(arcs, [("3", "1"), ("3", "2"), ("5", "3"), ("5", "4")]);
    assert!(dag.reachable(n("5"), n("1")) && !dag.reachable(n("4"), n("3")));

    let single = Graph::new(vec!["x".into()], vec![], false).unwrap();
    let h = HeightFunction::from_values(vec![0.0]).unwrap();
    assert_eq!(DescentDag::new(&single, &h).unwrap().local_minima(), [0]);
}

#[test]
fn tree_decompositions() {
    let g = datasets::fig1_left();
    let d = decompose(&g, &identity_heights(&g)).unwrap();
    assert_eq!(labels_of(&g, d.critical(0).iter().copied()), ["1", "2", "4"]);
    assert_eq!(labels_of(&g, d.levels[0].boundary.iter().copied()), ["3", "5"]);
    assert_eq!(labels_of(&g, d.critical(1).iter().copied()), ["3"]);
    assert_eq!(labels_of(&g, d.levels[1].basins[0].members.iter().copied()), ["3", "5"]);
    assert!(d.levels[1].boundary.is_empty());
    assert!(d.roles(g.node("5").unwrap()).is_empty());

    let g = datasets::fig1_right();
    let d = decompose(&g, &identity_heights(&g)).unwrap();
    assert_eq!(labels_of(&g, d.critical(0).iter().copied()), ["1", "2", "3", "4"]);
    assert_eq!(labels_of(&g, d.critical(1).iter().copied()), ["5", "6"]);
    assert_eq!(labels_of(&g, d.levels[1].boundary.iter().copied()), ["7"]);
    assert_eq!(labels_of(&g, d.critical(2).iter().copied()), ["7"]);

    let p = path_graph(6);
    let d = decompose(&p, &identity_heights(&p)).unwrap();
    assert_eq!(d.levels.len(), 1);
    assert!(d.levels[0].boundary.is_empty());
    assert_eq!(d.levels[0].basins[0].members.len(), 6);
}

#[test]
fn minimum_energy_paths() {
    let (g, h) = datasets::karate_landscape();
    let n = |l: &str| g.node(l).unwrap();
    let m = minimax_path(&g, &h, n("1"), n("34")).unwrap();
    assert_eq!(g.label(m.bottleneck), "3");
    let m = minimax_path(&g, &h, n("1"), n("2")).unwrap();
    assert_eq!(m.path, [n("1"), n("2")]);
    assert_eq!(m.bottleneck, n("2"));

    let g = datasets::fig1_left();
    let m = minimax_path(&g, &identity_heights(&g), 0, g.node("4").unwrap()).unwrap();
    let labels: Vec<&str> = m.path.iter().map(|&x| g.label(x)).collect();
    assert_eq!(labels, ["1", "3", "5", "4"]);
    assert_eq!(g.label(m.bottleneck), "5");
}

#[test]
fn flooding_complexes() {
    let g = datasets::fig1_left();
    let c = build_flooding_complex(&g, &identity_heights(&g)).unwrap();
    let mut edges: Vec<Vec<&str>> = Vec::new();
    let mut triangles: Vec<Vec<&str>> = Vec::new();
    for s in c.simplices() {
        let mut v: Vec<&str> = s.vertices().iter().map(|&p| g.label(c.node_at(p as usize + 1))).collect();
        v.sort();
        match s.dim() {
            1 => edges.push(v),
            2 => triangles.push(v),
            _ => {}
        }
    }
    edges.sort();
    triangles.sort();
    assert_eq!(edges, [["1", "3"], ["1", "5"], ["2", "3"], ["2", "5"], ["3", "5"], ["4", "5"]]);
    assert_eq!(triangles, [["1", "3", "5"], ["2", "3", "5"]]);

    let single = Graph::from_pairs(&[("a", "b")]).unwrap();
    let c = build_flooding_complex(&single, &HeightFunction::from_values(vec![0.0, 1.0]).unwrap()).unwrap();
    assert_eq!((c.size().vertices, c.size().edges, c.size().triangles), (2, 1, 0));

    let (g, h) = datasets::karate_landscape();
    let c = build_flooding_complex(&g, &h).unwrap();
    for e in g.edges() {
        let (hi, lo) = if h.lower(e.u, e.v) { (e.v, e.u) } else { (e.u, e.v) };
        let nodes = |s: &netland::flooding::Simplex| -> Vec<usize> { s.vertices().iter().map(|&p| c.node_at(p as usize + 1)).collect() };
        assert!(c.simplices().iter().any(|s| s.dim() == 1 && nodes(s) == [lo, hi]));
    }
}

#[test]
fn barcodes_and_events() {
    let g = datasets::fig1_left();
    let b = compute_persistence(&build_flooding_complex(&g, &identity_heights(&g)).unwrap());
    let bars: Vec<_> = b.intervals.iter().map(|i| (i.dim, i.birth, i.death)).collect();
    assert_eq!(bars, [(0, 1, None), (0, 2, Some(3)), (0, 4, Some(5))]);
    assert_eq!(b.betti_curve(0), [1, 2, 1, 2, 1]);
    assert!(b.betti_curve(1).iter().all(|&x| x == 0));
    let ev = classify_critical(&b);
    let by_index = |k: usize| labels_of(&g, ev.iter().filter(|e| e.index == k).map(|e| e.node));
    assert_eq!(by_index(0), ["1", "2", "4"]);
    assert_eq!(by_index(1), ["3", "5"]);
    assert!(ev.iter().filter(|e| e.index == 1).all(|e| e.causes == [Cause::Beta0Merge]));

    let one = Graph::new(vec!["x".into()], vec![], false).unwrap();
    let b = compute_persistence(&build_flooding_complex(&one, &HeightFunction::from_values(vec![0.0]).unwrap()).unwrap());
    assert_eq!(b.intervals.len(), 1);
    assert_eq!((b.intervals[0].birth, b.intervals[0].death), (1, None));

    let c = build_flooding_complex_on(&one, &HeightFunction::from_values(vec![0.0]).unwrap(), &[], 0, usize::MAX, netland::Exec::Sequential)
        .unwrap();
    assert!(compute_persistence(&c).betti_curve(0).is_empty());

    let p = path_graph(7);
    let ev = classify_critical(&compute_persistence(&build_flooding_complex(&p, &identity_heights(&p)).unwrap()));
    assert_eq!(ev.len(), 1);
    assert_eq!((p.label(ev[0].node), ev[0].index), ("0", 0));
}

#[test]
fn higher_index_events() {
    let g = datasets::fig1_right();
    let h = identity_heights(&g);
    let d = decompose(&g, &h).unwrap();
    let ev = classify_higher(&g, &h, &d, 2).unwrap();
    assert_eq!(labels_of(&g, ev.iter().map(|e| e.node)), ["7"]);
    assert_eq!(ev[0].causes, [Cause::Beta0Merge]);

    let g = datasets::fig1_left();
    let h = identity_heights(&g);
    let d = decompose(&g, &h).unwrap();
    assert!(classify_higher(&g, &h, &d, 2).unwrap().is_empty());
}

#[test]
fn markov_chains_from_graphs() {
    let tri = Graph::from_pairs(&[("a", "b"), ("b", "c"), ("a", "c")]).unwrap();
    let mc = markov_from_graph(&tri).unwrap();
    assert_eq!(mc.prob(0, 1), 0.5);
    assert!(mc.stationary().unwrap().iter().all(|&p| close(p, 1.0 / 3.0)));
    let g = datasets::karate();
    let pi = markov_from_graph(&g).unwrap().stationary().unwrap().to_vec();
    for x in 0..g.n() {
        assert!((pi[x] - g.degree(x) as f64 / 156.0).abs() < 1e-12);
    }
    let looped = MarkovChain::from_weights(vec!["a".into(), "b".into()], &[(0, 1, 1.0), (1, 0, 2.0), (0, 0, 1.0)]).unwrap();
    assert_eq!((looped.prob(0, 1), looped.prob(1, 0)), (0.5, 1.0));
}

#[test]
fn path_graph_transition_paths() {
    let p = path_graph(5);
    let mc = markov_from_graph(&p).unwrap();
    let r = transition_path_analysis(&mc, &[0], &[4], &TptOptions::default()).unwrap();
    let pi = mc.stationary().unwrap();
    for k in 0..5 {
        assert!((r.committor[k] - k as f64 / 4.0).abs() < 1e-12);
    }
    assert!((r.reactive_distribution[2] - pi[2] / 4.0).abs() < 1e-12);
    assert_eq!((r.reactive_distribution[0], r.reactive_distribution[4]), (0.0, 0.0));
    assert!((r.rate_from_source - pi[0] / 4.0).abs() < 1e-12);
    assert!((r.rate_into_target - pi[0] / 4.0).abs() < 1e-12);
    assert!(r.current.iter().filter(|c| c.from == 4).all(|c| c.value == 0.0));
}

#[test]
fn karate_reactive_density_peaks_at_half() {
    let g = datasets::karate();
    let mc = markov_from_graph(&g).unwrap();
    let r = transition_path_analysis(&mc, &[0], &[33], &TptOptions::default()).unwrap();
    let pi = mc.stationary().unwrap();
    for x in 0..g.n() {
        assert!(r.reactive_distribution[x] <= pi[x] / 4.0 + 1e-15);
    }
}
