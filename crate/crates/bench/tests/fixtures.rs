use ctlab_bench::{leaf_ladder, monodromy_model, random_family, random_graph};

#[test]
fn graph_fixtures_are_deterministic_and_connected() {
    let g = random_graph(60, 3);
    assert_eq!(g.len(), 60);
    assert_eq!(g.edges(), random_graph(60, 3).edges());
    let f = random_family(60, 4, 3);
    assert_eq!(f.len(), 4);
    assert!(f.subsets().iter().all(|s| !s.is_empty() && s.iter().all(|&v| v < 60)));
}

#[test]
fn ladder_fixture_spans_every_level() {
    let model = monodromy_model(2, 4);
    let ladder = leaf_ladder(&model);
    assert_eq!(ladder.levels(), 3);
    assert!((0..3).all(|i| !ladder.level(i).is_empty()));
}
