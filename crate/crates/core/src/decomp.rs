//! Constructive additive decompositions `f(x, y) = g(x) + h(y)` on finite
//! valued sets, with exact verification and exact-rational norm
//! optimization.
//!
//! Three constructions are provided. [`decompose_exact`] propagates the
//! telescoping formulas along a spanning forest of the incidence graph and
//! either returns a decomposition with residual exactly zero or a closed
//! array whose alternating sum of values is nonzero (the complete
//! obstruction). [`peel_decompose`] re-derives a decomposition by recursing
//! on the peeled set, which works exactly when peeling empties the set.
//! [`min_norm_exact`] and [`best_sup_approx`] solve small exact linear
//! programs: the former minimizes `sup|g| + sup|h|` over exact
//! decompositions, the latter minimizes the Chebyshev residual
//! `max |f − g − h|`, which is always feasible.
//!
//! Two generator families feed the norm experiments: an alternating
//! staircase on `2m + 4` points whose every decomposition needs
//! `sup|g| + sup|h| ≥ m + 2`, and nested layers of doubling arrays with
//! values `±2^{−k}` that force a unit jump of `h` across a gap of width
//! `2^{−k}`.

use std::collections::BTreeMap;

use num_traits::Zero;
use thiserror::Error;

use crate::lp;
use crate::rat::{self, pow2, rat_int, Rat};
use crate::rook::{
    incidence_graph, peel, peel_depth, Array2, FirstShare, PeelOutcome, Point2, PointSet2,
};

/// A finite point set together with an exact value at each point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValuedSet2 {
    base: PointSet2,
    values: BTreeMap<Point2, Rat>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ValuedSetError {
    #[error("point {0} appears twice")]
    DuplicatePoint(Point2),
}

impl ValuedSet2 {
    pub fn new(entries: Vec<(Point2, Rat)>) -> Result<Self, ValuedSetError> {
        let mut values = BTreeMap::new();
        for (p, v) in entries {
            if values.insert(p.clone(), v).is_some() {
                return Err(ValuedSetError::DuplicatePoint(p));
            }
        }
        let base = values.keys().cloned().collect();
        Ok(ValuedSet2 { base, values })
    }

    pub fn from_fn(base: PointSet2, f: impl Fn(&Point2) -> Rat) -> Self {
        let values = base.iter().map(|p| (p.clone(), f(p))).collect();
        ValuedSet2 { base, values }
    }

    pub fn base(&self) -> &PointSet2 {
        &self.base
    }

    pub fn value(&self, p: &Point2) -> &Rat {
        &self.values[p]
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Point2, &Rat)> {
        self.values.iter()
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    /// `max |f|`, zero on the empty set.
    pub fn sup_norm(&self) -> Rat {
        self.values
            .values()
            .map(rat::abs)
            .max()
            .unwrap_or_else(Rat::zero)
    }

    /// Keeps only the points of `subset` (which must all carry values).
    pub fn restrict(&self, subset: &PointSet2) -> ValuedSet2 {
        let values: BTreeMap<Point2, Rat> = subset
            .iter()
            .map(|p| (p.clone(), self.values[p].clone()))
            .collect();
        ValuedSet2 { base: subset.clone(), values }
    }
}

/// Coordinate functions of a decomposition, total on the distinct x- and
/// y-values of the underlying set.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Decomposition2 {
    pub g: BTreeMap<Rat, Rat>,
    pub h: BTreeMap<Rat, Rat>,
}

/// Exact sup norms of a decomposition against a valued set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormReport {
    pub sup_g: Rat,
    pub sup_h: Rat,
    pub sup_f: Rat,
    pub residual: Rat,
}

/// A closed array along which the alternating sum of values is nonzero;
/// no decomposition can exist.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obstruction2 {
    pub cycle: Array2,
    pub alternating_sum: Rat,
}

/// `f(a₁) − f(a₂) + … − f(a₂ₗ)` along a closed listing.
pub fn alternating_sum(kf: &ValuedSet2, cycle: &Array2) -> Option<Rat> {
    let edges = cycle.cycle_points()?;
    let mut sum = Rat::zero();
    for (i, p) in edges.iter().enumerate() {
        if !kf.base.contains(p) {
            return None;
        }
        if i % 2 == 0 {
            sum += kf.value(p);
        } else {
            sum -= kf.value(p);
        }
    }
    Some(sum)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("decomposition is missing g({0})")]
    MissingX(Rat),
    #[error("decomposition is missing h({0})")]
    MissingY(Rat),
}

/// Exact norms and residual of a candidate decomposition. The sup norms of
/// `g` and `h` are taken over the coordinate values of the set.
pub fn verify(kf: &ValuedSet2, d: &Decomposition2) -> Result<NormReport, VerifyError> {
    let mut residual = Rat::zero();
    for (p, f) in kf.iter() {
        let g = d.g.get(&p.x).ok_or_else(|| VerifyError::MissingX(p.x.clone()))?;
        let h = d.h.get(&p.y).ok_or_else(|| VerifyError::MissingY(p.y.clone()))?;
        let r = rat::abs(&(f - g - h));
        if r > residual {
            residual = r;
        }
    }
    let sup_over = |m: &BTreeMap<Rat, Rat>, keys: Vec<Rat>| -> Rat {
        keys.iter()
            .filter_map(|k| m.get(k))
            .map(rat::abs)
            .max()
            .unwrap_or_else(Rat::zero)
    };
    Ok(NormReport {
        sup_g: sup_over(&d.g, kf.base.xs()),
        sup_h: sup_over(&d.h, kf.base.ys()),
        sup_f: kf.sup_norm(),
        residual,
    })
}

/// Node-indexed view used by the forest propagation: x-nodes first.
struct Propagation {
    value: Vec<Option<Rat>>,
    parent: Vec<Option<(usize, usize)>>,
}

/// Constructs an exact decomposition or the obstruction cycle.
///
/// Each array-connectivity class is anchored at its lexicographically
/// smallest point `a₁` with `h(y(a₁)) = 0`, and values propagate along a
/// breadth-first spanning forest of the incidence graph: a point with one
/// coordinate function known determines the other. Every point is then
/// re-verified; the first violated point (in lexicographic order) closes a
/// cycle against the forest, and that closed array with its nonzero
/// alternating sum is returned.
pub fn decompose_exact(kf: &ValuedSet2) -> Result<Decomposition2, Obstruction2> {
    let set = kf.base();
    let ig = incidence_graph(set);
    let nx = ig.x_nodes.len();
    let n = ig.node_count();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (e, &(xi, yi)) in ig.edges.iter().enumerate() {
        adj[xi].push((nx + yi, e));
        adj[nx + yi].push((xi, e));
    }
    for list in &mut adj {
        list.sort();
    }

    let mut prop = Propagation { value: vec![None; n], parent: vec![None; n] };
    for (e, p) in set.points().iter().enumerate() {
        let (xi, yi) = ig.edges[e];
        let (xn, yn) = (xi, nx + yi);
        if prop.value[xn].is_some() {
            continue; // class already anchored
        }
        debug_assert!(prop.value[yn].is_none());
        prop.value[yn] = Some(Rat::zero());
        prop.value[xn] = Some(kf.value(p).clone());
        prop.parent[xn] = Some((yn, e));
        let mut queue = std::collections::VecDeque::from([yn, xn]);
        while let Some(u) = queue.pop_front() {
            let base = prop.value[u].clone().unwrap();
            for &(v, edge) in &adj[u] {
                if prop.value[v].is_none() {
                    let f = kf.value(&set.points()[edge]);
                    prop.value[v] = Some(f - &base);
                    prop.parent[v] = Some((u, edge));
                    queue.push_back(v);
                }
            }
        }
    }

    for (e, p) in set.points().iter().enumerate() {
        let (xi, yi) = ig.edges[e];
        let g = prop.value[xi].as_ref().unwrap();
        let h = prop.value[nx + yi].as_ref().unwrap();
        if &(g + h) != kf.value(p) {
            let cycle = close_against_forest(&prop, set, xi, nx + yi, e);
            let alternating_sum =
                alternating_sum(kf, &cycle).expect("cycle lies in the set");
            debug_assert!(!alternating_sum.is_zero());
            return Err(Obstruction2 { cycle, alternating_sum });
        }
    }

    let g = ig
        .x_nodes
        .iter()
        .enumerate()
        .map(|(i, x)| (x.clone(), prop.value[i].clone().unwrap()))
        .collect();
    let h = ig
        .y_nodes
        .iter()
        .enumerate()
        .map(|(j, y)| (y.clone(), prop.value[nx + j].clone().unwrap()))
        .collect();
    Ok(Decomposition2 { g, h })
}

/// Builds the closed array formed by the forest path between the endpoints
/// of the violated edge plus that edge.
fn close_against_forest(
    prop: &Propagation,
    set: &PointSet2,
    from: usize,
    to: usize,
    closing_edge: usize,
) -> Array2 {
    let chain = |mut v: usize| -> Vec<(usize, usize)> {
        let mut out = vec![(v, usize::MAX)];
        while let Some((p, e)) = prop.parent[v] {
            out.push((p, e));
            v = p;
        }
        out
    };
    let up_a = chain(from);
    let up_b = chain(to);
    // Splice the two root chains at their lowest common node.
    let pos_b: BTreeMap<usize, usize> =
        up_b.iter().enumerate().map(|(i, &(v, _))| (v, i)).collect();
    let (meet_a, meet_b) = up_a
        .iter()
        .enumerate()
        .find_map(|(i, &(v, _))| pos_b.get(&v).map(|&j| (i, j)))
        .expect("both nodes live in one tree");
    let mut edges: Vec<usize> = Vec::new();
    for i in 0..meet_a {
        edges.push(up_a[i + 1].1);
    }
    let mut down: Vec<usize> = (0..meet_b).map(|j| up_b[j + 1].1).collect();
    down.reverse();
    edges.extend(down);
    let mut cycle: Vec<Point2> = edges.iter().map(|&e| set.points()[e].clone()).collect();
    cycle.push(set.points()[closing_edge].clone());
    canonical_cycle(cycle)
}

/// Rotates/reflects a cyclic edge list into the smallest y-first closed
/// listing (same canonical form as the rook module's cycle search).
fn canonical_cycle(cycle: Vec<Point2>) -> Array2 {
    let len = cycle.len();
    let mut best: Option<Vec<Point2>> = None;
    let mut reversed = cycle.clone();
    reversed.reverse();
    for seq in [&cycle, &reversed] {
        for rot in 0..len {
            let mut candidate: Vec<Point2> = Vec::with_capacity(len + 1);
            candidate.extend(seq[rot..].iter().cloned());
            candidate.extend(seq[..rot].iter().cloned());
            candidate.push(seq[rot].clone());
            if Array2::new(candidate.clone(), FirstShare::Y).is_ok()
                && best.as_ref().map_or(true, |b| candidate < *b)
            {
                best = Some(candidate);
            }
        }
    }
    Array2::new(best.expect("cycle admits a y-first listing"), FirstShare::Y)
        .expect("validated")
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PeelDecomposeError {
    #[error("peeling stabilizes on a nonempty core of {} points", core.len())]
    CoreRemains { core: PointSet2 },
}

/// Decomposes by recursion on the peeled set.
///
/// Requires that peeling empties the set. After decomposing the peeled
/// interior, every removed point is alone on its column or its row, so the
/// missing coordinate value can be chosen directly; fresh lines not touched
/// by the interior get the value zero.
pub fn peel_decompose(kf: &ValuedSet2) -> Result<Decomposition2, PeelDecomposeError> {
    if let PeelOutcome::Core(core) = peel_depth(kf.base()) {
        return Err(PeelDecomposeError::CoreRemains { core });
    }
    let mut d = Decomposition2::default();
    peel_extend(kf, &mut d);
    debug_assert_eq!(
        verify(kf, &d).map(|r| r.residual.is_zero()),
        Ok(true),
        "peeling decomposition must be exact"
    );
    Ok(d)
}

fn peel_extend(kf: &ValuedSet2, d: &mut Decomposition2) {
    if kf.is_empty() {
        return;
    }
    let inner = peel(kf.base());
    peel_extend(&kf.restrict(&inner), d);
    let mut col: BTreeMap<&Rat, usize> = BTreeMap::new();
    let mut row: BTreeMap<&Rat, usize> = BTreeMap::new();
    for p in kf.base().iter() {
        *col.entry(&p.x).or_insert(0) += 1;
        *row.entry(&p.y).or_insert(0) += 1;
    }
    for p in kf.base().iter() {
        if inner.contains(p) {
            continue;
        }
        let f = kf.value(p);
        if col[&p.x] == 1 {
            // Private column: pick h first if the row is fresh.
            let h = d.h.entry(p.y.clone()).or_insert_with(Rat::zero).clone();
            let prev = d.g.insert(p.x.clone(), f - &h);
            debug_assert!(prev.is_none());
        } else {
            debug_assert_eq!(row[&p.y], 1);
            let g = d.g.entry(p.x.clone()).or_insert_with(Rat::zero).clone();
            let prev = d.h.insert(p.y.clone(), f - &g);
            debug_assert!(prev.is_none());
        }
    }
}

/// An exact decomposition minimizing `sup|g| + sup|h|`, with the optimum.
#[derive(Clone, Debug)]
pub struct MinNorm {
    pub decomposition: Decomposition2,
    pub report: NormReport,
    /// `sup|g| + sup|h|` at the optimum (equals `report.sup_g + report.sup_h`).
    pub objective: Rat,
}

/// Minimizes `sup|g| + sup|h|` over all exact decompositions, as an exact
/// linear program: variables are the g- and h-values plus two bound
/// variables `G, H` with `|g| ≤ G`, `|h| ≤ H`, objective `G + H`.
pub fn min_norm_exact(kf: &ValuedSet2) -> Result<MinNorm, Obstruction2> {
    decompose_exact(kf)?; // feasibility, and the obstruction on failure
    if kf.is_empty() {
        let d = Decomposition2::default();
        let report = verify(kf, &d).unwrap();
        return Ok(MinNorm { decomposition: d, report, objective: Rat::zero() });
    }
    let xs = kf.base().xs();
    let ys = kf.base().ys();
    let (nx, ny) = (xs.len(), ys.len());
    let nvars = nx + ny + 2;
    let (gv, hv) = (nvars - 2, nvars - 1);
    let mut constraints = Vec::new();
    for (p, f) in kf.iter() {
        let mut coeffs = vec![Rat::zero(); nvars];
        coeffs[xs.binary_search(&p.x).unwrap()] = rat_int(1);
        coeffs[nx + ys.binary_search(&p.y).unwrap()] = rat_int(1);
        constraints.push(lp::Constraint::new(coeffs, lp::Relation::Eq, f.clone()));
    }
    for i in 0..nx {
        for sign in [1, -1] {
            let mut coeffs = vec![Rat::zero(); nvars];
            coeffs[i] = rat_int(sign);
            coeffs[gv] = rat_int(-1);
            constraints.push(lp::Constraint::new(coeffs, lp::Relation::Le, Rat::zero()));
        }
    }
    for j in 0..ny {
        for sign in [1, -1] {
            let mut coeffs = vec![Rat::zero(); nvars];
            coeffs[nx + j] = rat_int(sign);
            coeffs[hv] = rat_int(-1);
            constraints.push(lp::Constraint::new(coeffs, lp::Relation::Le, Rat::zero()));
        }
    }
    let mut minimize = vec![Rat::zero(); nvars];
    minimize[gv] = rat_int(1);
    minimize[hv] = rat_int(1);
    let mut nonneg = vec![false; nvars];
    nonneg[gv] = true;
    nonneg[hv] = true;
    let program = lp::Program { minimize, constraints, nonneg };
    let (objective, point) = match lp::solve(&program).expect("well-formed program") {
        lp::Solution::Optimal { value, point } => (value, point),
        other => unreachable!("feasible and bounded below by zero: {other:?}"),
    };
    let decomposition = Decomposition2 {
        g: xs.iter().cloned().zip(point[..nx].iter().cloned()).collect(),
        h: ys.iter().cloned().zip(point[nx..nx + ny].iter().cloned()).collect(),
    };
    let report = verify(kf, &decomposition).expect("total decomposition");
    debug_assert!(report.residual.is_zero());
    Ok(MinNorm { decomposition, report, objective })
}

/// The Chebyshev relaxation: minimizes `max |f − g − h|`.
#[derive(Clone, Debug)]
pub struct SupApprox {
    pub decomposition: Decomposition2,
    pub report: NormReport,
    pub residual: Rat,
}

/// Minimizes the sup-norm residual `max |f − g − h|` over all coordinate
/// functions; always feasible, exact optimum. The residual is zero exactly
/// when the set admits an exact decomposition of `f`.
pub fn best_sup_approx(kf: &ValuedSet2) -> SupApprox {
    if kf.is_empty() {
        let d = Decomposition2::default();
        let report = verify(kf, &d).unwrap();
        return SupApprox { decomposition: d, report, residual: Rat::zero() };
    }
    let xs = kf.base().xs();
    let ys = kf.base().ys();
    let (nx, ny) = (xs.len(), ys.len());
    let nvars = nx + ny + 1;
    let tv = nvars - 1;
    let mut constraints = Vec::new();
    for (p, f) in kf.iter() {
        let xi = xs.binary_search(&p.x).unwrap();
        let yj = ys.binary_search(&p.y).unwrap();
        // g + h + t >= f  and  g + h - t <= f
        for (t_coeff, rel) in [(rat_int(1), lp::Relation::Ge), (rat_int(-1), lp::Relation::Le)] {
            let mut coeffs = vec![Rat::zero(); nvars];
            coeffs[xi] = rat_int(1);
            coeffs[nx + yj] = rat_int(1);
            coeffs[tv] = t_coeff;
            constraints.push(lp::Constraint::new(coeffs, rel, f.clone()));
        }
    }
    let mut minimize = vec![Rat::zero(); nvars];
    minimize[tv] = rat_int(1);
    let mut nonneg = vec![false; nvars];
    nonneg[tv] = true;
    let program = lp::Program { minimize, constraints, nonneg };
    let (residual, point) = match lp::solve(&program).expect("well-formed program") {
        lp::Solution::Optimal { value, point } => (value, point),
        other => unreachable!("always feasible, residual bounded below: {other:?}"),
    };
    let decomposition = Decomposition2 {
        g: xs.iter().cloned().zip(point[..nx].iter().cloned()).collect(),
        h: ys.iter().cloned().zip(point[nx..nx + ny].iter().cloned()).collect(),
    };
    let report = verify(kf, &decomposition).expect("total decomposition");
    debug_assert_eq!(report.residual, residual);
    SupApprox { decomposition, report, residual }
}

/// An open staircase array of `2m + 4` pairwise-distinct points in general
/// position with values `f(aᵢ) = (−1)^i`.
///
/// The telescoping identity along the chain forces
/// `g(x(a₁)) − g(x(a₂ₘ₊₄)) = −(2m + 4)` for every exact decomposition, so
/// `sup|g| ≥ m + 2` and the minimal `sup|g| + sup|h|` grows linearly in `m`
/// even though `sup|f| = 1`.
pub fn alternating_staircase(m: u32) -> ValuedSet2 {
    let len = 2 * m as usize + 4;
    let entries = (1..=len)
        .map(|i| {
            let k = ((i - 1) / 2) as i64;
            let p = if i % 2 == 1 {
                Point2::new(rat_int(k), rat_int(k))
            } else {
                Point2::new(rat_int(k + 1), rat_int(k))
            };
            (p, rat_int(if i % 2 == 0 { 1 } else { -1 }))
        })
        .collect();
    ValuedSet2::new(entries).expect("staircase points are distinct")
}

fn layer_coord(k: u32, j: u64) -> Rat {
    // 2 − 3·2^{−k} + j·2^{−2k}
    rat_int(2) - rat_int(3) * pow2(-(k as i32)) + rat_int(j as i64) * pow2(-2 * k as i32)
}

/// The `k`-th doubling layer, listed as an array of `2^k` points:
/// below-diagonal and diagonal points alternate along shared columns and
/// rows, clustering toward `(2, 2)` as `k` grows.
pub fn layer_points(k: u32) -> Vec<Point2> {
    let mut pts = Vec::with_capacity(1 << k);
    for l in 1..=(1u64 << (k - 1)) {
        let xc = layer_coord(k, 2 * l);
        pts.push(Point2::new(xc.clone(), layer_coord(k, 2 * l - 2)));
        pts.push(Point2::new(xc.clone(), xc));
    }
    pts
}

/// The union of layers `1..=layers` with values `+2^{−k}` on the diagonal
/// points and `−2^{−k}` below.
///
/// Layers occupy disjoint coordinate ranges, so the incidence graph is a
/// disjoint union of paths: every function decomposes exactly, but the
/// telescoping identity along layer `k` pins
/// `h(2 − 2·2^{−k}) − h(2 − 3·2^{−k}) = 1`, a unit jump across a shrinking
/// gap.
pub fn layered_instance(layers: u32) -> ValuedSet2 {
    let mut entries = Vec::new();
    for k in 1..=layers {
        let v = pow2(-(k as i32));
        for (i, p) in layer_points(k).into_iter().enumerate() {
            let val = if i % 2 == 0 { -v.clone() } else { v.clone() };
            entries.push((p, val));
        }
    }
    ValuedSet2::new(entries).expect("layer points are distinct")
}
