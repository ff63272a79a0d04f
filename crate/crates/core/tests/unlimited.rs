use explore_core::explore::unlimited::{explore_unlimited, initial_walk};
use explore_core::explore::ExploreConfig;
use explore_core::terrains::{generate, Family};
use explore_core::trajectory::SectionKind;

fn cfg() -> ExploreConfig {
    ExploreConfig::default()
}

#[test]
fn grid_of_nine_within_bound() {
    let g = generate(&Family::GridObstacles { k: 9, d: 10.0, eps: 0.01 }).unwrap();
    let m = g.terrain.metrics();
    let run = explore_unlimited(&g.terrain, g.start, &cfg()).unwrap();
    assert!(run.trajectory.total_length <= 5.0 * m.perimeter + 12.0 * 10.0 * 3.0);
    assert_eq!(run.exp_trav_calls, 10);
    assert_eq!(run.quadtree.non_terminal_count(), 10);
    assert!(run.quadtree.assignment_is_bijective());
}

#[test]
fn grid_of_sixteen_approach_total() {
    let g = generate(&Family::GridObstacles { k: 16, d: 10.0, eps: 0.01 }).unwrap();
    let run = explore_unlimited(&g.terrain, g.start, &cfg()).unwrap();
    let by = run.trajectory.totals_by_kind();
    assert!(by[&SectionKind::Approach] <= 12.0 * 10.0 * 4.0);
    assert!((by[&SectionKind::Approach] - by[&SectionKind::ApproachReturn]).abs() < 1e-9);
    assert!(run.approaches.iter().all(|a| a.length <= a.limit));
}

#[test]
fn every_boundary_traversed_twice() {
    let g = generate(&Family::CfatRandom { seed: 5, c: 3.0, n: 6 }).unwrap();
    let m = g.terrain.metrics();
    let run = explore_unlimited(&g.terrain, g.start, &cfg()).unwrap();
    let by = run.trajectory.totals_by_kind();
    assert!((by[&SectionKind::Recognition] - m.perimeter).abs() < 1e-6 * m.perimeter);
    assert!((by[&SectionKind::Exploration] - m.perimeter).abs() < 1e-6 * m.perimeter);
    assert!(run.trajectory.max_discontinuity() < 1e-9);
    assert!(run.trajectory.end().unwrap().approx_eq(run.walk.r0, 1e-9));
}

#[test]
fn comb_corridors_are_entered() {
    let (m, depth) = (6, 2.0);
    let g = generate(&Family::Comb { m, depth, width: 0.1 }).unwrap();
    let run = explore_unlimited(&g.terrain, g.start, &cfg()).unwrap();
    assert!(run.trajectory.total_length >= m as f64 * depth);
    // every corridor end is reached by the trajectory
    let pts = run.trajectory.sample(0.05);
    for i in 0..m {
        let tip = explore_core::Point::new(0.2 * i as f64 + 0.05, 0.1 + depth);
        assert!(pts.iter().any(|p| p.dist(tip) < 0.1), "corridor {i}");
    }
}

#[test]
fn walk_is_shorter_than_three_perimeters() {
    for seed in 0..5 {
        let g = generate(&Family::CfatRandom { seed, c: 3.0, n: 8 }).unwrap();
        let w = initial_walk(&g.terrain, g.start).unwrap();
        assert!(w.section.length < 3.0 * g.terrain.metrics().perimeter);
        assert_eq!(*w.hits.last().unwrap(), 0);
    }
}
