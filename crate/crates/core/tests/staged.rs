use std::f64::consts::FRAC_1_SQRT_2;

use explore_core::explore::limited::{lim_exp_trav, MAX_TILE_SIDE};
use explore_core::explore::staged::{let_a, let_a_stop, let_k, let_unknown, Ladder, StopReason};
use explore_core::explore::{Counters, ExploreConfig};
use explore_core::terrains::{gen_empty_square, generate, Family};
use explore_core::trajectory::SectionKind;

fn cfg() -> ExploreConfig {
    ExploreConfig::default()
}

#[test]
fn let_a_without_obstacles_is_one_stage() {
    let g = generate(&Family::EmptySquare { side: 3.0 }).unwrap();
    let run = let_a(&g.terrain, g.start, 9.0, &cfg()).unwrap();
    assert_eq!(run.stages.len(), 1);
    assert_eq!(run.stages[0].stop_reason, StopReason::Complete);
    assert_eq!(run.stages[0].f, FRAC_1_SQRT_2);
}

#[test]
fn let_a_halves_the_tile_side() {
    // many obstacles on a small area force the stopping condition
    let g = generate(&Family::GridObstacles { k: 64, d: 4.0, eps: 0.02 }).unwrap();
    let a = g.terrain.metrics().area;
    let run = let_a(&g.terrain, g.start, a, &cfg()).unwrap();
    assert!(run.stages.len() >= 2, "{:?}", run.stages);
    for w in run.stages.windows(2) {
        if w[0].stop_reason == StopReason::StoppingCondition {
            assert!(w[1].f <= w[0].f / 2.0 + 1e-12);
            assert!((w[1].f - a / (w[0].k_i as f64 * w[0].f)).abs() < 1e-12);
        }
    }
    assert_eq!(run.stages.last().unwrap().stop_reason, StopReason::Complete);
    // interrupted stages walk back to the start
    let back: f64 = run.trajectory.sections.iter().filter(|s| s.kind == SectionKind::StageReturn).map(|s| s.length).sum();
    let expected: f64 = run.stages.iter().map(|s| s.return_length).sum();
    assert!((back - expected).abs() < 1e-9);
    assert!(run.trajectory.max_discontinuity() < 1e-9);
}

#[test]
fn let_k_with_no_obstacles_uses_the_largest_tile() {
    let g = generate(&Family::EmptySquare { side: 2.0 }).unwrap();
    let run = let_k(&g.terrain, g.start, 0, &cfg()).unwrap();
    assert_eq!(run.stages.len(), 1);
    assert_eq!(run.stages[0].f, MAX_TILE_SIDE);
}

#[test]
fn let_k_grows_the_tile_side() {
    let g = generate(&Family::GridObstacles { k: 16, d: 10.0, eps: 0.01 }).unwrap();
    let run = let_k(&g.terrain, g.start, 16, &cfg()).unwrap();
    assert!((run.stages[0].f - 1.0 / (16.0 + 2f64.sqrt())).abs() < 1e-15);
    assert!(run.stages.len() >= 2);
    for w in run.stages.windows(2) {
        assert_eq!(w[0].stop_reason, StopReason::StoppingCondition);
        assert!(w[1].f >= (2.0 * w[0].f).min(MAX_TILE_SIDE) - 1e-12);
    }
    assert_eq!(run.stages.last().unwrap().stop_reason, StopReason::Complete);
}

#[test]
fn stages_are_oblivious() {
    let g = generate(&Family::GridObstacles { k: 16, d: 10.0, eps: 0.01 }).unwrap();
    let run = let_k(&g.terrain, g.start, 16, &cfg()).unwrap();
    let last = run.stages.last().unwrap();
    let alone = lim_exp_trav(&g.terrain, g.start, last.f, &cfg()).unwrap();
    assert_eq!(alone.trajectory.total_length, last.length);
    assert_eq!(alone.counters.approached, last.k_i);
}

#[test]
fn unknown_on_the_unit_square_needs_one_probe() {
    let t = gen_empty_square(1.0).unwrap();
    let run = let_unknown(&t, explore_core::Point::new(0.5, 0.5), &cfg()).unwrap();
    assert_eq!(run.probes.len(), 1);
    assert_eq!(run.probes[0].ladder, Ladder::Obstacles);
    assert!(run.probes[0].completed);
    assert!(run.trajectory.total_length.is_finite());
}

#[test]
fn unknown_area_ladder_stops_by_the_first_guess_above_the_area() {
    // area about 7 with more obstacles than early count guesses allow
    let side: f64 = 7.0f64.sqrt() + 0.05;
    let g = generate(&Family::GridObstacles { k: 16, d: side * 2f64.sqrt(), eps: 0.02 }).unwrap();
    let a = g.terrain.metrics().area;
    assert!(a > 4.0 && a < 8.0);
    let run = let_unknown(&g.terrain, g.start, &cfg()).unwrap();
    let area_probes: Vec<_> = run.probes.iter().filter(|p| p.ladder == Ladder::Area).collect();
    assert!(area_probes.len() <= 4);
    let last = run.probes.last().unwrap();
    assert!(last.completed);
    if last.ladder == Ladder::Area {
        assert_eq!(last.guess, 8.0);
    }
    let probe_total: f64 = run.probes.iter().map(|p| p.length).sum();
    assert!((probe_total - run.trajectory.total_length).abs() < 1e-6);
}

#[test]
fn stopping_condition_arithmetic() {
    let c = Counters { area: 0.0, perimeter: 1.0, approached: 4 };
    // k*F = 2 >= 2A/F = 2 and >= P* + 1 = 2
    assert!(let_a_stop(&c, 0.5, 0.5));
    assert!(!let_a_stop(&c, 0.5, 0.51));
    assert!(!let_a_stop(&Counters { perimeter: 1.01, ..c }, 0.5, 0.5));
}
