//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits nonzero
//! if any non-advisory criterion fails.

use std::collections::HashMap;
use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};
use std::path::Path;
use std::time::Instant;

use explore_core::explore::limited::TileGrid;
use explore_core::explore::staged::StopReason;
use explore_core::harness::*;
use explore_core::quadtree::{PolygonId, Quadtree};
use explore_core::terrains::{generate, Family, GenSpec, Lcg64};
use explore_core::{CellRegion, Point, Square, Terrain};

const ALGORITHMS: [AlgorithmId; 5] = [AlgorithmId::Exptrav, AlgorithmId::Let, AlgorithmId::LetA, AlgorithmId::LetK, AlgorithmId::LetAuto];
const TOL: f64 = 1e-9;

struct Outcome {
    pass: bool,
    advisory: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, advisory: false, detail }
}

fn corpus() -> Vec<Family> {
    let mut v = vec![Family::EmptySquare { side: 2.0 }];
    v.extend([1, 4, 9, 16].map(|k| Family::GridObstacles { k, d: 10.0, eps: 0.01 }));
    v.extend([1, 5, 10].map(|m| Family::Comb { m, depth: 2.0, width: 0.1 }));
    v.extend((0..10).map(|seed| Family::CfatRandom { seed, c: 3.0, n: 8 }));
    v
}

fn corpus_config(dir: &Path) -> ExperimentConfig {
    let mut runs = Vec::new();
    for (i, fam) in corpus().into_iter().enumerate() {
        for id in ALGORITHMS {
            runs.push(RunConfig {
                name: Some(format!("t{i:02}-{}", id.name())),
                terrain: TerrainSource::Generated(fam.clone()),
                start: None,
                algorithm: AlgorithmSpec::new(id),
                svg: true,
                coverage: None,
            });
        }
    }
    ExperimentConfig {
        seed: 0,
        output_dir: dir.to_path_buf(),
        csv: "runs.csv".into(),
        coverage: CoverageConfig { enabled: true, h: Some(0.05), clearance: 0.01 },
        warn_only: false,
        runs,
    }
}

struct Run {
    gen: GenSpec,
    id: AlgorithmId,
    report: ExplorationReport,
}

fn big_enough(r: &Run) -> bool {
    r.report.metrics.perimeter >= 4.0
}

/// `sum sqrt(k_T)` by scanning every tile for obstacles with all vertices inside it.
fn sqrt_k_oracle(terrain: &Terrain, side: f64, anchor: Point) -> f64 {
    let grid = TileGrid::new(terrain, side, anchor);
    let (lo, hi) = grid.tile_range();
    let mut counted = vec![false; terrain.obstacles().len()];
    let mut per_tile: HashMap<(i64, i64), usize> = HashMap::new();
    for i in lo.0..=hi.0 {
        for j in lo.1..=hi.1 {
            let sq = Square::new(Point::new(anchor.x + i as f64 * side, anchor.y + j as f64 * side), side);
            for (o, poly) in terrain.obstacles().iter().enumerate() {
                let inside = poly.vertices().iter().all(|p| {
                    p.x >= sq.origin.x - TOL && p.x <= sq.origin.x + side + TOL && p.y >= sq.origin.y - TOL && p.y <= sq.origin.y + side + TOL
                });
                if inside && !counted[o] {
                    counted[o] = true;
                    *per_tile.entry((i, j)).or_insert(0) += 1;
                }
            }
        }
    }
    per_tile.values().map(|&k| (k as f64).sqrt()).sum()
}

fn shoelace(v: &[Point]) -> f64 {
    let n = v.len();
    (0..n).map(|i| v[i].x * v[(i + 1) % n].y - v[(i + 1) % n].x * v[i].y).sum::<f64>() / 2.0
}

/// `(A_C, P_C, R_C)` recomputed from the cell's rings, classifying an edge as
/// tile boundary when both endpoints lie on the same side line of the tile.
fn cell_oracle(c: &CellRegion) -> (f64, f64, f64) {
    let t = c.tile;
    let (x0, y0, x1, y1) = (t.origin.x, t.origin.y, t.origin.x + t.side, t.origin.y + t.side);
    let on = |a: f64, b: f64, l: f64| (a - l).abs() < TOL && (b - l).abs() < TOL;
    let mut area = shoelace(c.outer().vertices()).abs();
    let (mut p, mut r) = (0.0, 0.0);
    let mut rings = vec![c.outer()];
    for h in c.holes() {
        area -= shoelace(h.vertices()).abs();
        rings.push(h);
    }
    for ring in rings {
        let v = ring.vertices();
        for i in 0..v.len() {
            let (a, b) = (v[i], v[(i + 1) % v.len()]);
            let len = a.dist(b);
            if on(a.x, b.x, x0) || on(a.x, b.x, x1) || on(a.y, b.y, y0) || on(a.y, b.y, y1) {
                r += len;
            } else {
                p += len;
            }
        }
    }
    (area, p, r)
}

fn lemma_holds(c: &CellRegion) -> bool {
    let (a, p, r) = cell_oracle(c);
    r <= 8.0 * (a / c.tile.side + p) + TOL
}

fn all_cells(terrain: &Terrain, side: f64, anchor: Point) -> Vec<std::rc::Rc<CellRegion>> {
    let mut grid = TileGrid::new(terrain, side, anchor);
    let (lo, hi) = grid.tile_range();
    let mut out = Vec::new();
    for i in lo.0..=hi.0 {
        for j in lo.1..=hi.1 {
            out.extend(grid.cells((i, j)));
        }
    }
    out
}

fn random_quadtree(rng: &mut Lcg64) -> Quadtree<f64> {
    let side = rng.uniform(0.1, 100.0);
    let mut qt = Quadtree::new(Square::new(Point::new(rng.uniform(-50.0, 50.0), rng.uniform(-50.0, 50.0)), side));
    let splits = rng.int(0, 300);
    for id in 0..splits {
        let terminals: Vec<_> = qt.nodes().filter(|(_, n)| n.is_terminal() && n.depth < 10).map(|(id, _)| id).collect();
        let pick = if id == 0 { qt.root() } else { terminals[rng.int(0, terminals.len() - 1)] };
        qt.split(pick, PolygonId(id)).unwrap();
    }
    qt
}

fn c1_coverage(runs: &[Run], errors: &[String], secs: f64) -> Outcome {
    let bad: Vec<String> = runs
        .iter()
        .filter(|r| r.report.coverage.as_ref().map_or(true, |c| c.fraction < 1.0))
        .map(|r| format!("{}/{}", r.gen.family.name(), r.id.name()))
        .collect();
    let min = runs.iter().filter_map(|r| r.report.coverage.as_ref()).map(|c| c.fraction).fold(1.0, f64::min);
    outcome(
        bad.is_empty() && errors.is_empty() && secs < 300.0,
        format!("{} runs, min fraction {min}, errors {}, incomplete {:?}, {secs:.1}s (limit 300s)", runs.len(), errors.len(), bad),
    )
}

fn c2_unlimited(runs: &[Run]) -> Outcome {
    let mut n = 0;
    let mut worst = 0.0f64;
    for r in runs.iter().filter(|r| r.id == AlgorithmId::Exptrav && big_enough(r)) {
        let m = r.gen.terrain.metrics();
        let rhs = 5.0 * m.perimeter + 12.0 * m.diameter * (m.k as f64).sqrt();
        worst = worst.max(r.report.total_length / rhs);
        n += 1;
    }
    outcome(worst <= 1.0 && n > 0, format!("{n} runs, max total/(5P+12D sqrt k) = {worst:.4}"))
}

fn c3_limited(runs: &[Run]) -> Outcome {
    let mut n = 0;
    let mut worst = 0.0f64;
    let mut sigma_mismatch = 0;
    for r in runs.iter().filter(|r| r.id != AlgorithmId::Exptrav && big_enough(r) && r.report.metrics.area >= 1.0) {
        let m = r.gen.terrain.metrics();
        let f = r.report.final_f.unwrap();
        let sk = sqrt_k_oracle(&r.gen.terrain, f, r.report.start);
        if (sk - r.report.final_sqrt_k_sum.unwrap()).abs() > 1e-9 {
            sigma_mismatch += 1;
        }
        let rhs = 27.0 * m.perimeter + 24.0 * m.area / f + 12.0 * SQRT_2 * f * sk;
        worst = worst.max(r.report.final_length.unwrap() / rhs);
        n += 1;
    }
    outcome(
        worst <= 1.0 && n > 0 && sigma_mismatch == 0,
        format!("{n} completed limited runs, max length/bound = {worst:.4}, sqrt-k mismatches {sigma_mismatch}"),
    )
}

fn c4_bijection(runs: &[Run]) -> Outcome {
    let mut bad = 0;
    let mut n = 0;
    for r in runs.iter().filter(|r| r.id == AlgorithmId::Exptrav) {
        let q = r.report.quadtree.unwrap();
        if q.non_terminal != r.gen.terrain.obstacles().len() + 1 || !q.bijective {
            bad += 1;
        }
        n += 1;
    }
    outcome(bad == 0 && n > 0, format!("{n} runs, {bad} with non-terminal count != k+1"))
}

fn c5_sigma(runs: &[Run]) -> Outcome {
    let mut bad = 0;
    let mut worst = 0.0f64;
    for r in runs.iter().filter(|r| r.id == AlgorithmId::Exptrav) {
        let q = r.report.quadtree.unwrap();
        let ratio = q.diameter_sum / (2.0 * q.root_diameter * (q.non_terminal as f64).sqrt());
        worst = worst.max(ratio);
        bad += (ratio > 1.0 + TOL) as usize;
    }
    let mut rng = Lcg64::new(0x5157);
    for _ in 0..1000 {
        let qt = random_quadtree(&mut rng);
        let x = qt.non_terminal_count();
        if x == 0 {
            continue;
        }
        let sum: f64 = qt.nodes().filter(|(_, n)| !n.is_terminal()).map(|(_, n)| n.square.side * SQRT_2).sum();
        let ratio = sum / (2.0 * qt.root_square().side * SQRT_2 * (x as f64).sqrt());
        worst = worst.max(ratio);
        bad += (ratio > 1.0 + TOL) as usize;
    }
    outcome(bad == 0, format!("run trees + 1000 random trees, max sigma/(2D sqrt x) = {worst:.4}, violations {bad}"))
}

fn c6_cells(runs: &[Run]) -> Outcome {
    let mut corpus_cells = 0;
    let mut bad = 0;
    let mut reported = 0;
    for r in runs.iter().filter(|r| r.id != AlgorithmId::Exptrav) {
        reported += r.report.cells.lemma_violations;
        for c in all_cells(&r.gen.terrain, r.report.final_f.unwrap(), r.report.start) {
            corpus_cells += 1;
            bad += !lemma_holds(&c) as usize;
        }
    }
    let mut rng = Lcg64::new(0xCE11);
    let mut random_cells = 0;
    let mut seed = 1000;
    while random_cells < 10_000 {
        let fam = if seed % 4 == 0 {
            let root = rng.int(1, 6);
            Family::GridObstacles { k: root * root, d: rng.uniform(2.0, 12.0), eps: rng.uniform(0.005, 0.05) }
        } else {
            Family::CfatRandom { seed, c: rng.uniform(1.5, 6.0), n: rng.int(0, 12) }
        };
        seed += 1;
        let g = generate(&fam).unwrap();
        let bb = g.terrain.outer().bbox();
        let anchor = Point::new(rng.uniform(bb.min.x, bb.max.x), rng.uniform(bb.min.y, bb.max.y));
        for c in all_cells(&g.terrain, rng.uniform(0.05, FRAC_1_SQRT_2), anchor) {
            random_cells += 1;
            bad += !lemma_holds(&c) as usize;
        }
    }
    outcome(
        bad == 0 && reported == 0,
        format!("{corpus_cells} corpus cells + {random_cells} random cells, violations {bad}, reported by runs {reported}"),
    )
}

fn c7_scaling() -> Outcome {
    let grid = scaling_check(
        &[4, 16, 64].map(|k| Family::GridObstacles { k, d: 10.0, eps: 0.01 }),
        Driver::K,
        &AlgorithmSpec::new(AlgorithmId::Exptrav),
    )
    .unwrap();
    let comb = scaling_check(&[5, 10, 20].map(|m| Family::Comb { m, depth: 2.0, width: 0.1 }), Driver::Perimeter, &AlgorithmSpec::new(AlgorithmId::Exptrav))
        .unwrap();
    let square = scaling_check(&[2.0, 4.0, 8.0].map(|side| Family::EmptySquare { side }), Driver::Area, &AlgorithmSpec::new(AlgorithmId::Let)).unwrap();
    let ok = (0.35..=0.65).contains(&grid.slope) && (0.8..=1.2).contains(&comb.slope) && (0.8..=1.2).contains(&square.slope);
    outcome(
        ok,
        format!(
            "grid vs k {:.3} in [0.35,0.65] (total incl. walk {:.3}); comb vs P {:.3} in [0.8,1.2]; square LET vs A {:.3} in [0.8,1.2]",
            grid.slope, grid.total_slope, comb.slope, square.slope
        ),
    )
}

fn c8_staged(runs: &[Run]) -> Outcome {
    let mut bad = Vec::new();
    let mut stages = 0;
    for r in runs.iter().filter(|r| matches!(r.id, AlgorithmId::LetA | AlgorithmId::LetK)) {
        let s = &r.report.stages;
        stages += s.len();
        if s.last().map_or(true, |l| l.stop_reason != StopReason::Complete) {
            bad.push(format!("{}/{} did not complete", r.gen.family.name(), r.id.name()));
        }
        for w in s.windows(2) {
            if w[0].stop_reason != StopReason::StoppingCondition {
                continue;
            }
            let ok = match r.id {
                AlgorithmId::LetA => w[1].f <= w[0].f / 2.0 + 1e-12,
                _ => w[1].f >= (2.0 * w[0].f).min(FRAC_1_SQRT_2) - 1e-12,
            };
            if !ok {
                bad.push(format!("{}/{} stage {}: {} -> {}", r.gen.family.name(), r.id.name(), w[0].i, w[0].f, w[1].f));
            }
        }
    }
    outcome(bad.is_empty(), format!("{stages} stages, problems {bad:?}"))
}

fn c9_overhead(runs: &[Run]) -> Outcome {
    let mut worst = 0.0f64;
    let mut over = Vec::new();
    for r in runs.iter().filter(|r| r.id == AlgorithmId::LetAuto) {
        let total = |id| runs.iter().find(|o| o.id == id && o.gen.family == r.gen.family).unwrap().report.total_length;
        let base = total(AlgorithmId::LetA).min(total(AlgorithmId::LetK));
        let factor = 8.0 * (r.report.metrics.area.max(2.0).log2() + 2.0);
        let ratio = r.report.total_length / (factor * base);
        worst = worst.max(ratio);
        if ratio > 1.0 {
            over.push(r.gen.family.name());
        }
    }
    Outcome { pass: over.is_empty(), advisory: true, detail: format!("max unknown/(8(log2 A+2) min(let-a,let-k)) = {worst:.4}, over {over:?}") }
}

fn c10_approach(runs: &[Run]) -> Outcome {
    let mut n = 0;
    let mut bad = 0;
    for r in runs {
        for a in &r.report.approaches {
            n += 1;
            if a.length > a.limit + TOL || (a.length - a.from.dist(a.to)).abs() > TOL {
                bad += 1;
            }
        }
    }
    outcome(bad == 0 && n > 0, format!("{n} approaches, {bad} violations"))
}

fn c11_determinism(first: &Path, second: &Path, names: &[String]) -> Outcome {
    let same = |name: &str| std::fs::read(first.join(name)).ok() == std::fs::read(second.join(name)).ok() && first.join(name).exists();
    let csv = same("runs.csv");
    let svgs = names.iter().filter(|n| same(&format!("{n}.svg"))).count();
    outcome(csv && svgs == names.len(), format!("csv identical {csv}, identical svgs {svgs}/{}", names.len()))
}

fn main() {
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    let t = Instant::now();
    let batch = run_experiment(&corpus_config(d1.path()), d1.path()).unwrap();
    let secs = t.elapsed().as_secs_f64();
    let fams = corpus();
    let mut runs = Vec::new();
    let mut errors = Vec::new();
    for (i, r) in batch.runs.iter().enumerate() {
        match &r.report {
            Ok(rep) => runs.push(Run { gen: generate(&fams[i / ALGORITHMS.len()]).unwrap(), id: ALGORITHMS[i % ALGORITHMS.len()], report: rep.clone() }),
            Err(e) => errors.push(format!("{}: {e}", r.name)),
        }
    }
    for e in &errors {
        println!("run error: {e}");
    }
    run_experiment(&corpus_config(d2.path()), d2.path()).unwrap();
    let names: Vec<String> = batch.runs.iter().map(|r| r.name.clone()).collect();

    let results = [
        ("completeness", c1_coverage(&runs, &errors, secs)),
        ("unlimited cost", c2_unlimited(&runs)),
        ("limited cost", c3_limited(&runs)),
        ("quadtree bijection", c4_bijection(&runs)),
        ("sigma bound", c5_sigma(&runs)),
        ("cell lemma", c6_cells(&runs)),
        ("scaling", c7_scaling()),
        ("staged drivers", c8_staged(&runs)),
        ("no-knowledge overhead", c9_overhead(&runs)),
        ("approach discipline", c10_approach(&runs)),
        ("determinism", c11_determinism(d1.path(), d2.path(), &names)),
    ];
    let mut failed = 0;
    for (i, (name, o)) in results.iter().enumerate() {
        let tag = match (o.pass, o.advisory) {
            (true, _) => "PASS",
            (false, true) => "WARN",
            (false, false) => "FAIL",
        };
        println!("{tag} [{:>2}] {name}: {}", i + 1, o.detail);
        failed += (!o.pass && !o.advisory) as usize;
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
