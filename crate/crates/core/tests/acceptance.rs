//! Acceptance suite: one test per criterion, each printing a PASS line
//! (run with `--nocapture` to see them). Expected values are exact
//! rationals wherever the library is exact; float tolerances are 1e-9.

mod common;

use std::time::{Duration, Instant};

use num_traits::{ToPrimitive, Zero};
use rand::Rng;

use common::*;
use rooksum::decomp::{
    alternating_staircase, decompose_exact, layer_points, layered_instance,
    min_norm_exact, peel_decompose, verify, ValuedSet2,
};
use rooksum::game::{
    decompose_nd, marginal_kernel, peel_depth_nd, winner_2d, PeelOutcomeNd, PointN,
    PointSetN, ValuedSetN, Winner,
};
use rooksum::graphs::{
    basic_in_plane, basic_in_plane_via_rn, defect, gen_r, FiniteGraph, RnDecision,
};
use rooksum::rat::{pow2, pow4, rat, rat_int, Rat};
use rooksum::rook::{find_closed_array, longest_odd_array, peel, peel_depth, Array2, OddArrayBound,
    PeelOutcome, Point2, PointSet2};
use rooksum::sequences::{alternating_sums, cross_increment, spike_area, tail_ratios, ArraySource};

fn pass(n: u32, detail: &str, elapsed: Duration) {
    println!("criterion {n}: PASS — {detail} ({elapsed:.2?})");
}

/// Criterion 1: over all 512 subsets of the 3×3 grid the four routes agree:
/// game verdict, marginal kernel, closed-array search, peeling depth.
#[test]
fn criterion_01_grid_triple_equivalence() {
    let t0 = Instant::now();
    let cells: Vec<Point2> = (0..9).map(|i| pt(i % 3, i / 3)).collect();
    let mut checked = 0;
    for mask in 0u32..512 {
        let subset: PointSet2 = cells
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, p)| p.clone())
            .collect();
        let decomposer_wins = winner_2d(&subset).winner == Winner::Decomposer;
        let no_cycle = find_closed_array(&subset).is_none();
        let vanishes = peel_depth(&subset).vanishes();
        let kernel_trivial = if subset.is_empty() {
            true
        } else {
            marginal_kernel(&PointSetN::from_planar(&subset)).is_trivial()
        };
        assert_eq!(decomposer_wins, no_cycle, "game vs cycle at mask {mask}");
        assert_eq!(no_cycle, vanishes, "cycle vs peeling at mask {mask}");
        assert_eq!(vanishes, kernel_trivial, "peeling vs kernel at mask {mask}");
        checked += 1;
    }
    let elapsed = t0.elapsed();
    assert!(elapsed < Duration::from_secs(2), "took {elapsed:?}");
    assert_eq!(checked, 512);
    pass(1, "512 subsets of the 3x3 grid, four routes agree", elapsed);
}

/// Criterion 2: peeling terminates iff no closed array (1000 random sets),
/// and planted arrays of 2n+1 distinct points peel out in exactly n+1
/// rounds.
#[test]
fn criterion_02_peeling_matches_closed_arrays() {
    let t0 = Instant::now();
    let mut rng = rng(0x0202);
    for case in 0..1000 {
        let set = random_point_set(&mut rng, 20, 6);
        let vanishes = peel_depth(&set).vanishes();
        let no_cycle = find_closed_array(&set).is_none();
        assert_eq!(vanishes, no_cycle, "case {case}: {set:?}");
    }
    for n in 1..=8usize {
        let dx = rng.gen_range(-3..=3);
        let dy = rng.gen_range(-3..=3);
        let planted: PointSet2 = staircase(2 * n + 1, dx, dy).into_iter().collect();
        assert_eq!(planted.len(), 2 * n + 1);
        let mut current = planted.clone();
        for _ in 0..n {
            current = peel(&current);
            assert!(!current.is_empty(), "E^{n}(K) should be nonempty");
        }
        assert!(peel(&current).is_empty(), "E^{}(K) should be empty", n + 1);
        assert_eq!(peel_depth(&planted), PeelOutcome::Vanishes { steps: n + 1 });
        assert_eq!(longest_odd_array(&planted), OddArrayBound::Bounded(2 * n + 1));
    }
    pass(2, "1000 random sets + planted arrays n = 1..8", t0.elapsed());
}

/// Criterion 3: 500 decomposable instances decompose with residual exactly
/// zero along every route; on 500 random instances over cyclic sets the
/// exact decision agrees with brute-force cycle enumeration.
#[test]
fn criterion_03_decomposition_soundness_completeness() {
    let t0 = Instant::now();
    let mut rng = rng(0x0303);
    let mut decomposable_checked = 0;
    while decomposable_checked < 500 {
        let base = random_point_set(&mut rng, 12, 4);
        if base.is_empty() {
            continue;
        }
        let kf = random_decomposable(&mut rng, base);
        let d = decompose_exact(&kf).expect("constructed decomposable");
        assert!(verify(&kf, &d).unwrap().residual.is_zero());
        if peel_depth(kf.base()).vanishes() {
            let dp = peel_decompose(&kf).unwrap();
            assert!(verify(&kf, &dp).unwrap().residual.is_zero());
        }
        let mn = min_norm_exact(&kf).expect("feasible");
        assert!(mn.report.residual.is_zero());
        decomposable_checked += 1;
    }

    let mut cyclic_checked = 0;
    while cyclic_checked < 500 {
        let base = random_point_set(&mut rng, 12, 4);
        if find_closed_array(&base).is_none() {
            continue;
        }
        // Mix decomposable and generic values so both branches are hit.
        let kf = if rng.gen_bool(0.5) {
            random_decomposable(&mut rng, base)
        } else {
            random_values(&mut rng, &base)
        };
        let oracle = brute_force_decomposable(&kf);
        match decompose_exact(&kf) {
            Ok(d) => {
                assert!(oracle, "accepted an instance the oracle rejects");
                assert!(verify(&kf, &d).unwrap().residual.is_zero());
            }
            Err(obstruction) => {
                assert!(!oracle, "rejected an instance the oracle accepts");
                assert!(!obstruction.alternating_sum.is_zero());
                assert!(obstruction.cycle.is_closed());
            }
        }
        cyclic_checked += 1;
    }
    pass(3, "500 decomposable + 500 cyclic instances vs cycle oracle", t0.elapsed());
}

/// Criterion 4: the minimal `sup|g| + sup|h|` on the alternating staircase
/// grows at least like m + 2 and strictly increases; each exact LP solves
/// within five seconds.
#[test]
fn criterion_04_staircase_norm_blowup() {
    let t0 = Instant::now();
    let mut previous: Option<Rat> = None;
    for m in 2..=8u32 {
        let kf = alternating_staircase(m);
        let solve_start = Instant::now();
        let res = min_norm_exact(&kf).expect("staircases are open arrays");
        let solve_time = solve_start.elapsed();
        assert!(
            solve_time < Duration::from_secs(5),
            "m = {m} took {solve_time:?}"
        );
        assert!(res.report.residual.is_zero());
        assert!(
            res.objective >= rat_int(m as i64 + 2),
            "m = {m}: objective {} below m + 2",
            res.objective
        );
        if let Some(prev) = &previous {
            assert!(res.objective > *prev, "objective not strictly increasing at m = {m}");
        }
        previous = Some(res.objective);
    }
    pass(4, "objective >= m+2 and strictly increasing for m = 2..8", t0.elapsed());
}

/// Criterion 5: on sets that peel out in one round, minimal norms stay
/// below 5 for sup-norm-1 values; violations would be reported.
#[test]
fn criterion_05_peeled_sets_norm_bound() {
    let t0 = Instant::now();
    let mut rng = rng(0x0505);
    let mut violations: Vec<String> = Vec::new();
    for case in 0..200 {
        // Build a union of stars with globally fresh coordinates, so every
        // point is alone on its row or column.
        let mut next_x = 0i64;
        let mut next_y = 0i64;
        let mut points = Vec::new();
        for _ in 0..rng.gen_range(1..=4) {
            match rng.gen_range(0..3) {
                0 => {
                    let x = next_x;
                    next_x += 1;
                    for _ in 0..rng.gen_range(2..=5) {
                        points.push(pt(x, next_y));
                        next_y += 1;
                    }
                }
                1 => {
                    let y = next_y;
                    next_y += 1;
                    for _ in 0..rng.gen_range(2..=5) {
                        points.push(pt(next_x, y));
                        next_x += 1;
                    }
                }
                _ => {
                    points.push(pt(next_x, next_y));
                    next_x += 1;
                    next_y += 1;
                }
            }
            if points.len() >= 15 {
                break;
            }
        }
        points.truncate(15);
        let base: PointSet2 = points.into_iter().collect();
        assert!(peel(&base).is_empty(), "generator must produce E(K) = empty");
        let raw = random_values(&mut rng, &base);
        let sup = raw.sup_norm();
        let kf = if sup.is_zero() {
            raw
        } else {
            ValuedSet2::from_fn(base, |p| raw.value(p) / &sup)
        };
        let res = min_norm_exact(&kf).expect("peelable sets always decompose");
        assert!(res.report.residual.is_zero());
        if res.objective >= rat_int(5) {
            violations.push(format!("case {case}: objective {}", res.objective));
        }
    }
    assert!(violations.is_empty(), "norm bound violations: {violations:?}");
    pass(5, "200 one-round-peelable sets, objective < 5 at sup-norm 1", t0.elapsed());
}

/// Criterion 6: the four-point space set has a trivial kernel while peeling
/// never shrinks it; its solutions match the closed formulas; and over 500
/// random space sets, peeling out implies a trivial kernel.
#[test]
fn criterion_06_space_asymmetry() {
    let t0 = Instant::now();
    let four = PointSetN::new(
        3,
        vec![
            PointN::new(vec![rat_int(0), rat_int(0), rat_int(0)]),
            PointN::new(vec![rat_int(1), rat_int(1), rat_int(0)]),
            PointN::new(vec![rat_int(0), rat_int(1), rat_int(1)]),
            PointN::new(vec![rat_int(1), rat_int(0), rat_int(1)]),
        ],
    )
    .unwrap();
    assert!(marginal_kernel(&four).is_trivial());
    assert_eq!(peel_depth_nd(&four), PeelOutcomeNd::Core(four.clone()));

    let mut rng = rng(0x0606);
    for _ in 0..20 {
        let values: Vec<(PointN, Rat)> = four
            .iter()
            .map(|p| (p.clone(), random_rat(&mut rng)))
            .collect();
        let kf = ValuedSetN::new(3, values).unwrap();
        let d = decompose_nd(&kf).expect("trivial kernel");
        let value = |x: i64, y: i64, z: i64| {
            kf.value(&PointN::new(vec![rat_int(x), rat_int(y), rat_int(z)]))
                .clone()
        };
        let (f000, f110, f011, f101) = (value(0, 0, 0), value(1, 1, 0), value(0, 1, 1), value(1, 0, 1));
        let two = rat_int(2);
        assert_eq!(d.axes[0][&rat_int(0)], f000);
        assert_eq!(d.axes[1][&rat_int(0)], rat_int(0));
        assert_eq!(d.axes[2][&rat_int(0)], rat_int(0));
        assert_eq!(d.axes[0][&rat_int(1)], (&f000 + &f110 + &f101 - &f011) / &two);
        assert_eq!(d.axes[1][&rat_int(1)], (-&f000 + &f110 - &f101 + &f011) / &two);
        assert_eq!(d.axes[2][&rat_int(1)], (-&f000 - &f110 + &f101 + &f011) / &two);
    }

    let mut vanishing = 0;
    for case in 0..500 {
        let set = random_point_set_3d(&mut rng, 12, 3);
        if peel_depth_nd(&set).vanishes() {
            vanishing += 1;
            assert!(
                marginal_kernel(&set).is_trivial(),
                "case {case}: peeled out but kernel nontrivial"
            );
        }
    }
    assert!(vanishing > 50, "generator should produce vanishing sets, got {vanishing}");
    pass(
        6,
        "4-point set asymmetry + closed formulas + 500 random space sets",
        t0.elapsed(),
    );
}

/// Criterion 7: for every tree on at most 11 vertices the forbidden-shape
/// criterion agrees with the R_n embedding search at n_max = 4, with no
/// inconclusive outcomes.
#[test]
fn criterion_07_plane_criterion_equivalence() {
    let t0 = Instant::now();
    let trees = all_trees_up_to(11);
    // Known counts of non-isomorphic trees on 1..=11 vertices.
    let expected = [1, 1, 1, 2, 3, 6, 11, 23, 47, 106, 235];
    let mut by_size = vec![0usize; 12];
    for t in &trees {
        by_size[t.vertex_count()] += 1;
    }
    assert_eq!(&by_size[1..=11], &expected, "tree enumeration counts");

    let mut embeddable = 0;
    for tree in &trees {
        let structural = basic_in_plane(tree).is_basic();
        match basic_in_plane_via_rn(tree, 4).unwrap() {
            RnDecision::EmbedsAt(n) => {
                assert!(structural, "embeds in R_{n} but structurally rejected: {tree:?}");
                embeddable += 1;
            }
            RnDecision::NotBasic => {
                assert!(!structural, "structurally basic but rejected: {tree:?}");
            }
            RnDecision::Inconclusive => panic!("inconclusive at n_max = 4: {tree:?}"),
        }
    }
    let elapsed = t0.elapsed();
    assert!(elapsed < Duration::from_secs(300), "took {elapsed:?}");
    pass(
        7,
        &format!("{} trees <= 11 vertices, {embeddable} embeddable, routes agree", trees.len()),
        elapsed,
    );
}

/// Criterion 8: the strip-criterion fixture table, hand evaluated.
#[test]
fn criterion_08_strip_fixture_table() {
    let t0 = Instant::now();
    use rooksum::graphs::basic_in_r_times_t;

    let t5 = FiniteGraph::star(5);
    assert!(basic_in_r_times_t(&t5, 3).unwrap());
    assert_eq!(defect(&t5).1, 3);

    // T5 with one arm subdivided and a triod glued at its end: the center
    // keeps degree 5 (horrible, contributing 3) and the new branch vertex
    // has degree 3 (neither horrible nor awful), so delta stays 3; the
    // center still touches four hanging edges.
    let subdivided = FiniteGraph::new(
        9,
        vec![(0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (5, 6), (6, 7), (6, 8)],
    )
    .unwrap();
    assert_eq!(defect(&subdivided).1, 3);
    assert!(basic_in_r_times_t(&subdivided, 3).unwrap());

    // Subdividing every arm removes the hanging edges at the center:
    // delta = n = 3 no longer suffices, delta < 4 does.
    let all_subdivided = {
        let mut edges = Vec::new();
        for arm in 0..5usize {
            let mid = 1 + 2 * arm;
            edges.push((0, mid));
            edges.push((mid, mid + 1));
        }
        FiniteGraph::new(11, edges).unwrap()
    };
    assert_eq!(defect(&all_subdivided).1, 3);
    assert!(!basic_in_r_times_t(&all_subdivided, 3).unwrap());
    assert!(basic_in_r_times_t(&all_subdivided, 4).unwrap());

    assert!(basic_in_r_times_t(&FiniteGraph::path(4), 3).unwrap());
    for arms in [3, 4, 7, 12] {
        assert!(!basic_in_r_times_t(&FiniteGraph::cycle(3), arms).unwrap());
    }
    assert_eq!(defect(&gen_r(2).unwrap()).1, 0);
    pass(8, "strip criterion fixtures match hand evaluation", t0.elapsed());
}

/// Criterion 9: layer k of the doubling family is an array of exactly 2^k
/// points, and every exact decomposition jumps by exactly one unit between
/// h(2 − 2·2^{−k}) and h(2 − 3·2^{−k}).
///
/// The jump is stated here in the orientation the construction actually
/// forces: with the diagonal points carrying +2^{−k}, telescoping along
/// layer k gives h(2 − 2·2^{−k}) − h(2 − 3·2^{−k}) = +1 (the reversed
/// difference is −1).
#[test]
fn criterion_09_layered_family_facts() {
    let t0 = Instant::now();
    for k in 1..=4u32 {
        let pts = layer_points(k);
        assert_eq!(pts.len(), 1 << k, "layer {k} size");
        Array2::detect(pts.clone()).expect("layer lists as an array");
        let layer: PointSet2 = pts.into_iter().collect();
        assert_eq!(layer.len(), 1 << k, "layer points are pairwise distinct");
        // No odd array beyond 2^k − 1 points, hence none of 2^k + 1.
        assert_eq!(longest_odd_array(&layer), OddArrayBound::Bounded((1 << k) - 1));
    }
    for i in 1..=4u32 {
        let kf = layered_instance(i);
        let lp = min_norm_exact(&kf).expect("layers decompose");
        assert!(lp.report.residual.is_zero());
        let exact = decompose_exact(&kf).unwrap();
        for k in 1..=i {
            let near = rat_int(2) - rat_int(2) * pow2(-(k as i32));
            let far = rat_int(2) - rat_int(3) * pow2(-(k as i32));
            for h in [&lp.decomposition.h, &exact.h] {
                assert_eq!(
                    &h[&near] - &h[&far],
                    rat_int(1),
                    "unit jump at layer {k} of instance {i}"
                );
            }
        }
    }
    pass(9, "layer arrays of exactly 2^k points; unit h-jumps for i <= 4", t0.elapsed());
}

/// Criterion 10: sequence diagnostics at their stated tolerances. The
/// cross-increment clause asserts the `(4d)^{3/4}/2` bound exactly as
/// stated; at d = 4^{−2} the exact sum is 1/14 ≈ 0.0714 against a bound of
/// ≈ 0.1768, so that clause fails — see the decisions ledger for the
/// analysis. The remaining clauses pass.
#[test]
fn criterion_10_sequence_diagnostics() {
    let t0 = Instant::now();
    let mut failures: Vec<String> = Vec::new();

    let sums = alternating_sums(
        &ArraySource::Power,
        |n, _| {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            sign / n as f64
        },
        1000,
    );
    if sums.max_abs_partial <= 3.0 {
        failures.push(format!("power sums reached only {}", sums.max_abs_partial));
    }

    let tails = tail_ratios(&ArraySource::Geometric, 50, 4000);
    if !(tails.ratios.len() == 50 && tails.max_ratio <= 4.0) {
        failures.push(format!("geometric tail ratio {}", tails.max_ratio));
    }

    if spike_area(&rat_int(1)).unwrap() != rat(1, 14) {
        failures.push("spike area at 1".into());
    }
    if spike_area(&rat(1, 4)).unwrap() != rat(1, 112) {
        failures.push("spike area at 1/4".into());
    }

    for k in [2, 3, 4] {
        let d = pow4(-k);
        let c = cross_increment(&d, 30).unwrap();
        let sum = c.sum.to_f64().unwrap();
        if !c.holds {
            failures.push(format!(
                "cross increment at d = 4^-{k}: sum {} ~ {sum:.6} < bound {:.6}",
                c.sum, c.bound
            ));
        }
    }

    assert!(
        failures.is_empty(),
        "sequence diagnostics failed: {failures:#?}"
    );
    pass(10, "divergence, tails, spike areas, cross increments", t0.elapsed());
}
