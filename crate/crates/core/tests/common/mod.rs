//! Shared oracles and generators for the integration suites.
//!
//! Everything here is deliberately independent of the decision paths it
//! checks: cycles are enumerated by exhaustive DFS, trees by canonical-form
//! deduplication, and instances come from seeded generators so failures
//! reproduce.

#![allow(dead_code)]

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rooksum::decomp::ValuedSet2;
use rooksum::game::{PointN, PointSetN};
use rooksum::graphs::FiniteGraph;
use rooksum::rat::{rat, rat_int, Rat};
use rooksum::rook::{incidence_graph, Point2, PointSet2};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn pt(x: i64, y: i64) -> Point2 {
    Point2::new(rat_int(x), rat_int(y))
}

pub fn random_rat(rng: &mut ChaCha8Rng) -> Rat {
    rat(rng.gen_range(-20..=20), rng.gen_range(1..=12))
}

/// Up to `max_points` distinct integer points with coordinates in
/// `0..=coord_max`.
pub fn random_point_set(rng: &mut ChaCha8Rng, max_points: usize, coord_max: i64) -> PointSet2 {
    let n = rng.gen_range(0..=max_points);
    (0..n)
        .map(|_| pt(rng.gen_range(0..=coord_max), rng.gen_range(0..=coord_max)))
        .collect()
}

pub fn random_point_set_3d(rng: &mut ChaCha8Rng, max_points: usize, coord_max: i64) -> PointSetN {
    let n = rng.gen_range(1..=max_points);
    let mut points: Vec<PointN> = (0..n)
        .map(|_| {
            PointN::new(vec![
                rat_int(rng.gen_range(0..=coord_max)),
                rat_int(rng.gen_range(0..=coord_max)),
                rat_int(rng.gen_range(0..=coord_max)),
            ])
        })
        .collect();
    points.sort();
    points.dedup();
    PointSetN::new(3, points).unwrap()
}

/// A decomposable instance `f = g0 + h0` with random rational level values.
pub fn random_decomposable(rng: &mut ChaCha8Rng, base: PointSet2) -> ValuedSet2 {
    let g0: Vec<(Rat, Rat)> = base.xs().into_iter().map(|x| (x, random_rat(rng))).collect();
    let h0: Vec<(Rat, Rat)> = base.ys().into_iter().map(|y| (y, random_rat(rng))).collect();
    let g = move |x: &Rat| g0.iter().find(|(k, _)| k == x).unwrap().1.clone();
    let h = move |y: &Rat| h0.iter().find(|(k, _)| k == y).unwrap().1.clone();
    ValuedSet2::from_fn(base, |p| g(&p.x) + h(&p.y))
}

pub fn random_values(rng: &mut ChaCha8Rng, base: &PointSet2) -> ValuedSet2 {
    let values: Vec<(Point2, Rat)> = base
        .iter()
        .map(|p| (p.clone(), random_rat(rng)))
        .collect();
    ValuedSet2::new(values).unwrap()
}

/// The canonical staircase array of `len` pairwise-distinct points,
/// shifted by `(dx, dy)`.
pub fn staircase(len: usize, dx: i64, dy: i64) -> Vec<Point2> {
    (1..=len)
        .map(|i| {
            let k = ((i - 1) / 2) as i64;
            if i % 2 == 1 {
                pt(k + dx, k + dy)
            } else {
                pt(k + 1 + dx, k + dy)
            }
        })
        .collect()
}

/// All simple cycles of the incidence graph, as cyclic point (edge) lists.
/// Exhaustive DFS, intended for sets of at most ~12 points.
pub fn enumerate_simple_cycles(set: &PointSet2) -> Vec<Vec<Point2>> {
    let ig = incidence_graph(set);
    let nx = ig.x_nodes.len();
    let n = nx + ig.y_nodes.len();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (e, &(xi, yi)) in ig.edges.iter().enumerate() {
        adj[xi].push((nx + yi, e));
        adj[nx + yi].push((xi, e));
    }
    let mut cycles = Vec::new();
    let mut path_nodes: Vec<usize> = Vec::new();
    let mut path_edges: Vec<usize> = Vec::new();
    let mut on_path = vec![false; n];

    fn dfs(
        u: usize,
        start: usize,
        adj: &[Vec<(usize, usize)>],
        on_path: &mut Vec<bool>,
        path_nodes: &mut Vec<usize>,
        path_edges: &mut Vec<usize>,
        cycles: &mut Vec<Vec<usize>>,
    ) {
        for &(v, e) in &adj[u] {
            if v == start && path_edges.len() >= 3 {
                // Close the cycle once per orientation.
                if path_nodes[1] < u {
                    let mut cycle = path_edges.clone();
                    cycle.push(e);
                    cycles.push(cycle);
                }
            } else if v > start && !on_path[v] {
                on_path[v] = true;
                path_nodes.push(v);
                path_edges.push(e);
                dfs(v, start, adj, on_path, path_nodes, path_edges, cycles);
                path_edges.pop();
                path_nodes.pop();
                on_path[v] = false;
            }
        }
    }

    let mut edge_cycles = Vec::new();
    for start in 0..n {
        on_path[start] = true;
        path_nodes.push(start);
        dfs(
            start,
            start,
            &adj,
            &mut on_path,
            &mut path_nodes,
            &mut path_edges,
            &mut edge_cycles,
        );
        path_nodes.pop();
        on_path[start] = false;
    }
    for cycle in edge_cycles {
        cycles.push(cycle.into_iter().map(|e| set.points()[e].clone()).collect());
    }
    cycles
}

/// `f(e1) − f(e2) + …` along a cyclic edge list.
pub fn cycle_alternating_sum(kf: &ValuedSet2, cycle: &[Point2]) -> Rat {
    use num_traits::Zero;
    let mut sum = Rat::zero();
    for (i, p) in cycle.iter().enumerate() {
        if i % 2 == 0 {
            sum += kf.value(p);
        } else {
            sum -= kf.value(p);
        }
    }
    sum
}

/// Brute-force decomposability: every simple cycle carries a zero
/// alternating sum.
pub fn brute_force_decomposable(kf: &ValuedSet2) -> bool {
    use num_traits::Zero;
    enumerate_simple_cycles(kf.base())
        .iter()
        .all(|c| cycle_alternating_sum(kf, c).is_zero())
}

fn ahu_encoding(adj: &[Vec<usize>], root: usize) -> String {
    fn enc(adj: &[Vec<usize>], u: usize, parent: usize) -> String {
        let mut children: Vec<String> = adj[u]
            .iter()
            .filter(|&&v| v != parent)
            .map(|&v| enc(adj, v, u))
            .collect();
        children.sort();
        format!("({})", children.concat())
    }
    enc(adj, root, usize::MAX)
}

/// Canonical form of a free tree: the minimum AHU encoding over all roots.
pub fn tree_canonical(g: &FiniteGraph) -> String {
    let adj = g.adjacency();
    (0..g.vertex_count())
        .map(|r| ahu_encoding(&adj, r))
        .min()
        .expect("nonempty tree")
}

/// All non-isomorphic trees with 1..=max_n vertices, by leaf augmentation
/// with canonical-form deduplication.
pub fn all_trees_up_to(max_n: usize) -> Vec<FiniteGraph> {
    let mut all = Vec::new();
    let mut frontier = vec![FiniteGraph::new(1, vec![]).unwrap()];
    all.extend(frontier.iter().cloned());
    for n in 2..=max_n {
        let mut seen = std::collections::BTreeMap::new();
        for tree in &frontier {
            for v in 0..tree.vertex_count() {
                let mut edges = tree.edges().to_vec();
                edges.push((v, n - 1));
                let bigger = FiniteGraph::new(n, edges).unwrap();
                seen.entry(tree_canonical(&bigger)).or_insert(bigger);
            }
        }
        frontier = seen.into_values().collect();
        all.extend(frontier.iter().cloned());
    }
    all
}
