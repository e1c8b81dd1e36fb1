//! Worked examples across the public API.

mod common;

use lrc_core::bounds::{self, Branch};
use lrc_core::construction::{
    build_matroid, extend_rank, locality_sets_of_config, params_of_config, validate_atom_config, Atom,
    AtomConfiguration, ConfigViolation,
};
use lrc_core::graph::{
    build_theorem42_instance, graph_params, graph_to_atom_config, validate_graph_spec, GraphViolation,
};
use lrc_core::lrc::{global_distance, is_perfect, verify_locality, LrcParams};
use lrc_core::matroid::{verify_rank_axioms, verify_z_axioms, Matroid, ZAxiom};
use lrc_core::oracle::code::{check_code_matroid_agreement, code_min_distance, matroid_of_code, LinearCode};
use lrc_core::oracle::search::{enumerate_configs, search_dmax, SearchLimits};
use lrc_core::perfect::{build_perfect_config, check_theorem41_hypotheses};
use lrc_core::{GraphSpec, LrcError, SubsetMask};

fn set(n: usize, xs: impl IntoIterator<Item = usize>) -> SubsetMask {
    SubsetMask::from_indices(n, xs).unwrap()
}

fn c1() -> AtomConfiguration {
    AtomConfiguration::from_atoms(5, vec![Atom::new(0..4, 3), Atom::new(4..8, 3)])
}

fn g1() -> GraphSpec {
    GraphSpec { m: 2, edges: vec![[0, 1]], alpha: vec![0, 0], beta: vec![0, 0], gamma: vec![1], k: 3, r: 2, delta: 2 }
}

fn parallel_pairs() -> LinearCode {
    LinearCode::new(2, vec![vec![1, 0, 1, 0], vec![0, 1, 0, 1]]).unwrap()
}

fn mds_3() -> LinearCode {
    LinearCode::new(3, vec![vec![1, 0, 1, 1], vec![0, 1, 1, 2]]).unwrap()
}

#[test]
fn uniform_basics() {
    let u = Matroid::uniform(2, 4).unwrap();
    assert_eq!(u.rank(&set(4, [])).unwrap(), 0);
    assert_eq!(u.rank(&set(4, [0, 1, 2])).unwrap(), 2);
    assert_eq!(u.nullity(&u.ground()).unwrap(), 2);
    assert_eq!(u.closure(&set(4, [0])).unwrap(), set(4, [0]));
    assert_eq!(u.circuits().unwrap().len(), 4);
    assert!(u.circuits().unwrap().iter().all(|c| c.len() == 3));
    assert_eq!(u.cyclic_core(&u.ground()).unwrap(), u.ground());
    let lattice = u.cyclic_flats().unwrap();
    assert_eq!(lattice.to_pairs(), vec![(set(4, []), 0), (u.ground(), 2)]);
    assert_eq!(lattice.coatoms().map(|z| z.flat).collect::<Vec<_>>(), vec![set(4, [])]);
    assert_eq!(global_distance(&u).unwrap(), 3);
    let sub = u.restrict(&set(4, [0, 1, 2])).unwrap();
    assert_eq!(sub.rank_table().unwrap().as_ref(), Matroid::uniform(2, 3).unwrap().rank_table().unwrap().as_ref());
    assert!(verify_rank_axioms(&u).unwrap().passes());
}

#[test]
fn free_matroid() {
    let f = Matroid::free(3).unwrap();
    assert!(f.circuits().unwrap().is_empty());
    assert!(f.cyclic_core(&f.ground()).unwrap().is_empty());
    assert_eq!(f.cyclic_flats().unwrap().to_pairs(), vec![(set(3, []), 0)]);
    assert_eq!(verify_locality(&f, 2, 2), Err(LrcError::NoLocality(vec![0, 1, 2])));
}

#[test]
fn rank_bounded_by_cardinality() {
    let bad = Matroid::from_rank_table(1, vec![0, 2]);
    let report = bad.map(|m| verify_rank_axioms(&m).unwrap().passes());
    assert!(!report.unwrap_or(false));
}

#[test]
fn z_axiom_examples() {
    assert!(verify_z_axioms(4, &[(set(4, []), 0), (set(4, 0..4), 2)]).passes());
    let z = verify_z_axioms(1, &[(set(1, []), 1)]);
    assert!(!z.holds(ZAxiom::Z1));
    let u = Matroid::from_cyclic_flats(5, &[(set(5, []), 0), (set(5, 0..5), 3)]).unwrap();
    assert_eq!(u.rank_table().unwrap().as_ref(), Matroid::uniform(3, 5).unwrap().rank_table().unwrap().as_ref());
}

#[test]
fn construction_one() {
    let cfg = c1();
    assert!(validate_atom_config(&cfg).passes());
    assert_eq!(extend_rank(&cfg, &[]).unwrap(), 0);
    assert_eq!(extend_rank(&cfg, &[0]).unwrap(), 3);
    assert_eq!(extend_rank(&cfg, &[0, 1]).unwrap(), 5);
    let m = build_matroid(&cfg).unwrap();
    assert_eq!(m.rank(&set(8, 0..4)).unwrap(), 3);
    assert_eq!(m.nullity(&set(8, 0..4)).unwrap(), 1);
    let flats: Vec<_> = m.lattice().unwrap().to_pairs();
    assert_eq!(flats, vec![(set(8, []), 0), (set(8, 0..4), 3), (set(8, 4..8), 3), (set(8, 0..8), 5)]);
    let restricted = m.restrict(&set(8, 0..4)).unwrap();
    assert_eq!(
        restricted.rank_table().unwrap().as_ref(),
        Matroid::uniform(3, 4).unwrap().rank_table().unwrap().as_ref()
    );
    assert!(verify_rank_axioms(&m).unwrap().passes());
    assert_eq!(global_distance(&m).unwrap(), 3);
    assert_eq!(params_of_config(&cfg).unwrap().to_string(), "(8,5,3,3,2)");
    assert_eq!(locality_sets_of_config(&cfg).unwrap(), vec![(0..4).collect::<Vec<_>>(), (4..8).collect()]);
    let cert = verify_locality(&m, 3, 2).unwrap();
    assert_eq!(cert.get(0), Some(&[0, 1, 2, 3][..]));
    assert_eq!(cert.get(5), Some(&[4, 5, 6, 7][..]));
}

#[test]
fn construction_one_rejections() {
    let full_rank = AtomConfiguration::from_atoms(5, vec![Atom::new(0..4, 4), Atom::new(4..8, 3)]);
    let labels: Vec<_> = validate_atom_config(&full_rank).violations.iter().map(ConfigViolation::label).collect();
    assert!(labels.contains(&"i"));
    let overlap = AtomConfiguration::from_atoms(5, vec![Atom::new(0..4, 3), Atom::new(1..5, 3)]);
    let labels: Vec<_> = validate_atom_config(&overlap).violations.iter().map(ConfigViolation::label).collect();
    assert!(labels.contains(&"iv"));
}

#[test]
fn single_atom_is_uniform() {
    let cfg = AtomConfiguration::from_atoms(3, vec![Atom::new(0..4, 3)]);
    let m = build_matroid(&cfg).unwrap();
    assert_eq!(m.rank_table().unwrap().as_ref(), Matroid::uniform(3, 4).unwrap().rank_table().unwrap().as_ref());
}

#[test]
fn perfect_examples() {
    let p = LrcParams::new(10, 5, 5, 3, 2).unwrap();
    assert!(is_perfect(&p));
    assert!(is_perfect(&LrcParams::new(8, 5, 3, 3, 2).unwrap()));
    assert!(!is_perfect(&LrcParams::new(8, 5, 2, 3, 2).unwrap()));
    let cfg = build_perfect_config(10, 5, 3, 2).unwrap();
    assert_eq!(cfg.ground_size(), 10);
    assert_eq!(params_of_config(&cfg).unwrap(), p);
    assert_eq!(build_matroid(&cfg).unwrap().lattice().unwrap().len(), 5);
    assert!(check_theorem41_hypotheses(12, 5, 3, 2).is_err());
    assert!(check_theorem41_hypotheses(9, 5, 3, 2).is_err());
    assert!(check_theorem41_hypotheses(13, 9, 3, 2).is_err());
}

#[test]
fn graph_examples() {
    let g = g1();
    assert!(validate_graph_spec(&g).passes());
    let p = graph_params(&g).unwrap();
    assert_eq!((p.n, p.d), (5, 2));
    let cfg = graph_to_atom_config(&g).unwrap();
    assert_eq!(cfg.atoms, vec![Atom::new([0, 1, 2], 2), Atom::new([0, 3, 4], 2)]);
    assert_eq!(params_of_config(&cfg).unwrap().to_string(), "(5,3,2,2,2)");
    assert!(locality_sets_of_config(&cfg).unwrap().iter().all(|s| s.len() == 3));

    let thick = GraphSpec { gamma: vec![2], ..g1() };
    assert!(validate_graph_spec(&thick).violations.iter().any(|v| matches!(v, GraphViolation::Degree { .. })));

    let triangle = GraphSpec {
        m: 3,
        edges: vec![[0, 1], [1, 2], [0, 2]],
        alpha: vec![0; 3],
        beta: vec![0; 3],
        gamma: vec![1; 3],
        k: 5,
        r: 4,
        delta: 2,
    };
    assert!(validate_graph_spec(&triangle).violations.iter().any(|v| v.label() == "i"));

    let pair = GraphSpec { edges: vec![], gamma: vec![], ..g1() };
    let p = graph_params(&pair).unwrap();
    assert_eq!((p.n, p.d), (6, 3));
    assert_eq!(common::brute_config_distance(&graph_to_atom_config(&pair).unwrap()), 3);
}

#[test]
fn theorem42_instances() {
    let g = build_theorem42_instance(139, 60, 20, 21).unwrap();
    assert_eq!((g.m, g.beta.clone()), (3, vec![7, 6, 6]));
    let p = graph_params(&g).unwrap();
    assert_eq!((p.n, p.d), (139, 27));
    let sizes: Vec<_> = graph_to_atom_config(&g).unwrap().atoms.iter().map(Atom::len).collect();
    assert_eq!(sizes, vec![47, 46, 46]);

    let g = build_theorem42_instance(13, 5, 3, 2).unwrap();
    assert_eq!(graph_params(&g).unwrap().d, 7);
    let g = build_theorem42_instance(10, 5, 3, 2).unwrap();
    assert_eq!(graph_params(&g).unwrap().n, 10);
}

#[test]
fn bound_examples() {
    assert_eq!(bounds::singleton_bound(9i64, 4, 4, 2).unwrap(), 6);
    assert_eq!(bounds::singleton_bound(10i64, 5, 3, 2).unwrap(), 5);
    assert_eq!(bounds::singleton_bound(139i64, 60, 20, 21).unwrap(), 40);
    assert_eq!(bounds::d_old_bound(139i64, 60, 20, 21).unwrap(), 21);
    assert_eq!(bounds::d_old_bound(13i64, 5, 3, 2).unwrap(), 7);
    assert_eq!(bounds::d_old_bound(10i64, 5, 3, 2).unwrap(), 3);
    assert_eq!(bounds::theorem42_bound(139i64, 60, 20, 21).unwrap(), (27, Branch::Eq6));
    assert_eq!(bounds::theorem42_bound(13i64, 5, 3, 2).unwrap(), (7, Branch::Eq5));
    assert_eq!(bounds::theorem42_bound(7i64, 4, 2, 2).unwrap(), (2, Branch::Eq5));
    assert_eq!(bounds::improvement_delta(139i64, 60, 20, 21).unwrap(), (6, 6));
    assert_eq!(bounds::even_distribution_bound(5i64, 3, 5, 2).unwrap(), 4);
    assert_eq!(bounds::even_distribution_bound(0i64, 3, 5, 2).unwrap(), 0);
    assert_eq!(bounds::BoundReport::<i128>::compute(139, 60, 20, 21).unwrap().d_b, 27);
}

#[test]
fn code_examples() {
    let id = LinearCode::new(2, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
    assert_eq!(matroid_of_code(&id).unwrap().rank_table().unwrap().as_ref(), Matroid::free(3).unwrap().rank_table().unwrap().as_ref());
    assert_eq!(code_min_distance(&id).unwrap(), 1);

    let c = parallel_pairs();
    let m = matroid_of_code(&c).unwrap();
    assert_eq!(m.rank(&set(4, [0, 2])).unwrap(), 1);
    assert_eq!(m.closure(&set(4, [0])).unwrap(), set(4, [0, 2]));
    assert_eq!(m.circuits().unwrap(), vec![set(4, [0, 2]), set(4, [1, 3])]);
    assert_eq!(global_distance(&m).unwrap(), 2);
    assert_eq!(code_min_distance(&c).unwrap(), 2);
    let report = check_code_matroid_agreement(&c, 1, 2).unwrap();
    assert!(report.agrees());
    let sets: Vec<_> = report.locality_sets.iter().map(|s| s.set.clone()).collect();
    assert_eq!(sets, vec![vec![0, 2], vec![1, 3]]);

    let mds = mds_3();
    let m = matroid_of_code(&mds).unwrap();
    assert_eq!(m.rank_table().unwrap().as_ref(), Matroid::uniform(2, 4).unwrap().rank_table().unwrap().as_ref());
    assert_eq!(code_min_distance(&mds).unwrap(), 3);
    let report = check_code_matroid_agreement(&mds, 2, 3).unwrap();
    assert!(report.agrees());
    assert_eq!(report.locality_sets[0].set, vec![0, 1, 2, 3]);
}

#[test]
fn search_examples() {
    let limits = SearchLimits::default();
    assert!(enumerate_configs(8, 5, 3, 2, limits).unwrap().contains(&c1()));
    assert!(enumerate_configs(4, 3, 3, 2, limits).unwrap().is_empty());
    let stream = enumerate_configs(7, 4, 2, 2, limits).unwrap();
    assert!(!stream.is_empty());
    assert!(stream.iter().all(|c| validate_atom_config(c).passes()));
    let s = search_dmax(8, 5, 3, 2, limits).unwrap();
    assert_eq!((s.best_d, s.perfect), (3, true));
    let s = search_dmax(10, 5, 3, 2, limits).unwrap();
    assert_eq!((s.best_d, s.perfect), (5, true));
    let s = search_dmax(7, 4, 2, 2, limits).unwrap();
    assert_eq!((s.best_d, s.perfect), (2, false));
}
