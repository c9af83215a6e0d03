//! The "dare you to decompose" game, in the plane and in dimension `d ≥ 2`.
//!
//! One player (the spoiler) writes numbers on a finite set of marked cells;
//! the other (the decomposer) answers with per-line weights and wins if
//! every cell value is the sum of its line weights. In the plane the
//! decomposer wins for every spoiler move iff the cells contain no closed
//! rook route, and the peeling order is the winning strategy. In higher
//! dimensions no combinatorial criterion is known, so the decision is
//! algebraic: the decomposer wins iff the only signed weighting of the
//! cells with zero sums along every axis-aligned hyperplane is the trivial
//! one. A nonzero *zero-marginal vector* `μ` is a winning move for the
//! spoiler (write `f = μ`; any weight choice leaves `Σ μ(p) f(p) = Σ μ² > 0`
//! unexplained), and it is the finite analog of a measure annihilated by
//! all coordinate projections.
//!
//! Peeling generalizes coordinatewise (planes through a point instead of
//! lines). Emptying under peeling still forces a trivial kernel in any
//! dimension, because the support of a zero-marginal vector is a peeling
//! fixpoint; the converse fails already for four points in space, and that
//! asymmetry is exactly why the algebraic route is used here.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::linalg;
use crate::rat::Rat;
use crate::rook::{self, Array2, PointSet2};

/// A point with `d ≥ 2` exact rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointN {
    pub coords: Vec<Rat>,
}

impl PointN {
    pub fn new(coords: Vec<Rat>) -> Self {
        PointN { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

impl fmt::Display for PointN {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SetNError {
    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("point {0} has {} coordinates, expected {1}", .0.dim())]
    MixedDimensions(PointN, usize),
    #[error("point {0} appears twice")]
    DuplicatePoint(PointN),
}

/// A finite set of distinct points of uniform dimension, in lexicographic
/// order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSetN {
    dim: usize,
    points: Vec<PointN>,
}

impl PointSetN {
    pub fn new(dim: usize, mut points: Vec<PointN>) -> Result<Self, SetNError> {
        if dim < 2 {
            return Err(SetNError::DimensionTooSmall(dim));
        }
        for p in &points {
            if p.dim() != dim {
                return Err(SetNError::MixedDimensions(p.clone(), dim));
            }
        }
        points.sort();
        for w in points.windows(2) {
            if w[0] == w[1] {
                return Err(SetNError::DuplicatePoint(w[0].clone()));
            }
        }
        Ok(PointSetN { dim, points })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[PointN] {
        &self.points
    }

    pub fn iter(&self) -> impl Iterator<Item = &PointN> {
        self.points.iter()
    }

    /// Distinct values on the given axis, increasing.
    pub fn axis_values(&self, axis: usize) -> Vec<Rat> {
        let mut vals: Vec<Rat> = self.points.iter().map(|p| p.coords[axis].clone()).collect();
        vals.sort();
        vals.dedup();
        vals
    }

    pub fn from_planar(set: &PointSet2) -> Self {
        let points = set
            .iter()
            .map(|p| PointN::new(vec![p.x.clone(), p.y.clone()]))
            .collect();
        PointSetN { dim: 2, points }
    }
}

/// Values on a point set of dimension `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValuedSetN {
    base: PointSetN,
    values: BTreeMap<PointN, Rat>,
}

impl ValuedSetN {
    pub fn new(dim: usize, entries: Vec<(PointN, Rat)>) -> Result<Self, SetNError> {
        let base = PointSetN::new(dim, entries.iter().map(|(p, _)| p.clone()).collect())?;
        let values = entries.into_iter().collect();
        Ok(ValuedSetN { base, values })
    }

    pub fn from_fn(base: PointSetN, f: impl Fn(&PointN) -> Rat) -> Self {
        let values = base.iter().map(|p| (p.clone(), f(p))).collect();
        ValuedSetN { base, values }
    }

    pub fn base(&self) -> &PointSetN {
        &self.base
    }

    pub fn value(&self, p: &PointN) -> &Rat {
        &self.values[p]
    }
}

/// A primitive integer basis of the zero-marginal kernel: each basis vector
/// is indexed by the points of the set (in set order) and sums to zero
/// along every axis-aligned hyperplane meeting the set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarginalKernel {
    pub dim: usize,
    pub point_order: Vec<PointN>,
    pub basis: Vec<Vec<BigInt>>,
}

impl MarginalKernel {
    pub fn is_trivial(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

/// The marginal matrix: one row per (axis, value) pair in axis order,
/// values increasing; one column per point.
fn marginal_matrix(set: &PointSetN) -> Vec<Vec<Rat>> {
    let mut rows = Vec::new();
    for axis in 0..set.dim() {
        for value in set.axis_values(axis) {
            let row: Vec<Rat> = set
                .iter()
                .map(|p| {
                    if p.coords[axis] == value {
                        Rat::from_integer(1.into())
                    } else {
                        Rat::zero()
                    }
                })
                .collect();
            rows.push(row);
        }
    }
    rows
}

/// Exact kernel of the marginal map. Trivial iff every function on the set
/// splits as a sum of per-axis coordinate functions.
pub fn marginal_kernel(set: &PointSetN) -> MarginalKernel {
    let rows = marginal_matrix(set);
    let basis = if set.is_empty() {
        Vec::new()
    } else {
        linalg::reduce(&rows, set.len())
            .nullspace()
            .iter()
            .map(|v| linalg::primitive_integer(v))
            .collect()
    };
    MarginalKernel { dim: set.dim(), point_order: set.points().to_vec(), basis }
}

/// Per-axis coordinate functions `g₁ … g_d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordFunctions {
    pub axes: Vec<BTreeMap<Rat, Rat>>,
}

impl CoordFunctions {
    pub fn eval(&self, p: &PointN) -> Option<Rat> {
        let mut sum = Rat::zero();
        for (axis, c) in p.coords.iter().enumerate() {
            sum += self.axes.get(axis)?.get(c)?;
        }
        Some(sum)
    }
}

/// A nonzero integer zero-marginal vector `μ` with `Σ μ(p) f(p) ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelObstruction {
    pub point_order: Vec<PointN>,
    pub weights: Vec<BigInt>,
    pub pairing: Rat,
}

/// Solves `f(p) = Σ_t g_t(p_t)` exactly.
///
/// The solution is normalized per connected component of the coordinate-
/// sharing structure: on each component the first value of every axis
/// beyond the first is anchored at zero (remaining elimination freedom is
/// resolved by zeroing free variables). On failure the returned vector has
/// all marginals zero but pairs nontrivially with `f`.
pub fn decompose_nd(kf: &ValuedSetN) -> Result<CoordFunctions, KernelObstruction> {
    let set = kf.base();
    let dim = set.dim();
    if set.is_empty() {
        return Ok(CoordFunctions { axes: vec![BTreeMap::new(); dim] });
    }

    // Equation rows: one per point, over variables (axis, value-index).
    let axis_values: Vec<Vec<Rat>> = (0..dim).map(|t| set.axis_values(t)).collect();
    let offsets: Vec<usize> = {
        let mut off = vec![0];
        for vals in &axis_values {
            off.push(off.last().unwrap() + vals.len());
        }
        off
    };
    let cols = offsets[dim];
    let rows: Vec<Vec<Rat>> = set
        .iter()
        .map(|p| {
            let mut row = vec![Rat::zero(); cols];
            for (t, c) in p.coords.iter().enumerate() {
                let vi = axis_values[t].binary_search(c).unwrap();
                row[offsets[t] + vi] = Rat::from_integer(1.into());
            }
            row
        })
        .collect();
    let rhs: Vec<Rat> = set.iter().map(|p| kf.value(p).clone()).collect();

    let red = linalg::reduce(&rows, cols);
    let x = match red.solve(&rhs) {
        Ok(x) => x,
        Err(row) => {
            let weights = linalg::primitive_integer(&red.multipliers[row]);
            let pairing = weights
                .iter()
                .zip(&rhs)
                .map(|(w, f)| Rat::from_integer(w.clone()) * f)
                .fold(Rat::zero(), |acc, v| acc + v);
            debug_assert!(!pairing.is_zero());
            return Err(KernelObstruction {
                point_order: set.points().to_vec(),
                weights,
                pairing,
            });
        }
    };

    let mut axes: Vec<BTreeMap<Rat, Rat>> = (0..dim)
        .map(|t| {
            axis_values[t]
                .iter()
                .enumerate()
                .map(|(vi, v)| (v.clone(), x[offsets[t] + vi].clone()))
                .collect()
        })
        .collect();
    anchor_components(set, &mut axes);
    Ok(CoordFunctions { axes })
}

/// Shifts each connected component so that `g₂ … g_d` vanish at the
/// component's first value on their axis, compensating on the first axis.
fn anchor_components(set: &PointSetN, axes: &mut [BTreeMap<Rat, Rat>]) {
    let dim = set.dim();
    let comp = components(set);
    let n_comp = comp.iter().copied().max().map_or(0, |m| m + 1);
    for c in 0..n_comp {
        let members: Vec<&PointN> = set
            .iter()
            .zip(&comp)
            .filter(|(_, &cc)| cc == c)
            .map(|(p, _)| p)
            .collect();
        let mut correction = Rat::zero();
        for t in 1..dim {
            let first = members.iter().map(|p| &p.coords[t]).min().unwrap().clone();
            let delta = axes[t][&first].clone();
            if delta.is_zero() {
                continue;
            }
            let mut values: Vec<Rat> = members.iter().map(|p| p.coords[t].clone()).collect();
            values.sort();
            values.dedup();
            for v in values {
                let e = axes[t].get_mut(&v).unwrap();
                *e -= &delta;
            }
            correction += delta;
        }
        if !correction.is_zero() {
            let mut values: Vec<Rat> = members.iter().map(|p| p.coords[0].clone()).collect();
            values.sort();
            values.dedup();
            for v in values {
                let e = axes[0].get_mut(&v).unwrap();
                *e += &correction;
            }
        }
    }
}

/// Component index per point: points sharing a coordinate value on any axis
/// are connected.
fn components(set: &PointSetN) -> Vec<usize> {
    let n = set.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    for t in 0..set.dim() {
        let mut by_value: BTreeMap<&Rat, usize> = BTreeMap::new();
        for (i, p) in set.iter().enumerate() {
            if let Some(&j) = by_value.get(&p.coords[t]) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            } else {
                by_value.insert(&p.coords[t], i);
            }
        }
    }
    let mut label = BTreeMap::new();
    (0..n)
        .map(|i| {
            let r = find(&mut parent, i);
            let next = label.len();
            *label.entry(r).or_insert(next)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Winner {
    /// The weight-choosing player: wins when every spoiler move decomposes.
    Decomposer,
    /// The number-writing player: wins with a single undecomposable move.
    Spoiler,
}

/// Winning strategies, per dimension and winner.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GameCertificate {
    /// 2D spoiler: a closed rook route among the cells.
    RookRoute(Array2),
    /// 2D decomposer: the peeling order that empties the cells.
    PeelingOrder(Vec<PointSet2>),
    /// nD spoiler: a nonzero zero-marginal weighting of the cells.
    ZeroMarginalVector { point_order: Vec<PointN>, weights: Vec<BigInt> },
    /// nD decomposer: exact coordinate functions for every unit impulse;
    /// any spoiler move decomposes by linearity.
    DecompositionScheme(DecompositionScheme),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionScheme {
    pub point_order: Vec<PointN>,
    pub per_delta: Vec<CoordFunctions>,
}

impl DecompositionScheme {
    /// Combines the per-impulse solutions linearly for the given values.
    pub fn solve(&self, kf: &ValuedSetN) -> CoordFunctions {
        let dim = kf.base().dim();
        let mut axes: Vec<BTreeMap<Rat, Rat>> = vec![BTreeMap::new(); dim];
        for (p, funcs) in self.point_order.iter().zip(&self.per_delta) {
            let f = kf.value(p);
            for (t, m) in funcs.axes.iter().enumerate() {
                for (v, g) in m {
                    let slot = axes[t].entry(v.clone()).or_insert_with(Rat::zero);
                    *slot += f * g;
                }
            }
        }
        CoordFunctions { axes }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameVerdict {
    pub winner: Winner,
    pub certificate: GameCertificate,
}

/// Decides the planar game combinatorially: the decomposer wins iff the
/// marked cells contain no closed rook route.
pub fn winner_2d(cells: &PointSet2) -> GameVerdict {
    match rook::find_closed_array(cells) {
        Some(route) => GameVerdict {
            winner: Winner::Spoiler,
            certificate: GameCertificate::RookRoute(route),
        },
        None => GameVerdict {
            winner: Winner::Decomposer,
            certificate: GameCertificate::PeelingOrder(rook::peel_iterates(cells)),
        },
    }
}

/// Decides the game in any dimension algebraically: the decomposer wins iff
/// the zero-marginal kernel is trivial.
pub fn winner_nd(cells: &PointSetN) -> GameVerdict {
    let kernel = marginal_kernel(cells);
    if let Some(mu) = kernel.basis.first() {
        return GameVerdict {
            winner: Winner::Spoiler,
            certificate: GameCertificate::ZeroMarginalVector {
                point_order: kernel.point_order,
                weights: mu.clone(),
            },
        };
    }
    let per_delta = cells
        .iter()
        .map(|p| {
            let delta = ValuedSetN::from_fn(cells.clone(), |q| {
                if q == p {
                    Rat::from_integer(1.into())
                } else {
                    Rat::zero()
                }
            });
            decompose_nd(&delta).expect("trivial kernel solves every impulse")
        })
        .collect();
    GameVerdict {
        winner: Winner::Decomposer,
        certificate: GameCertificate::DecompositionScheme(DecompositionScheme {
            point_order: cells.points().to_vec(),
            per_delta,
        }),
    }
}

/// Removes every point some of whose axis-aligned hyperplanes meet the set
/// only in that point.
pub fn peel_nd(set: &PointSetN) -> PointSetN {
    let dim = set.dim();
    let counts: Vec<BTreeMap<&Rat, usize>> = (0..dim)
        .map(|t| {
            let mut m = BTreeMap::new();
            for p in set.iter() {
                *m.entry(&p.coords[t]).or_insert(0) += 1;
            }
            m
        })
        .collect();
    let kept: Vec<PointN> = set
        .iter()
        .filter(|p| (0..dim).all(|t| counts[t][&p.coords[t]] >= 2))
        .cloned()
        .collect();
    PointSetN { dim, points: kept }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PeelOutcomeNd {
    Vanishes { steps: usize },
    Core(PointSetN),
}

impl PeelOutcomeNd {
    pub fn vanishes(&self) -> bool {
        matches!(self, PeelOutcomeNd::Vanishes { .. })
    }
}

pub fn peel_depth_nd(set: &PointSetN) -> PeelOutcomeNd {
    let mut current = set.clone();
    let mut steps = 0;
    loop {
        if current.is_empty() {
            return PeelOutcomeNd::Vanishes { steps };
        }
        let next = peel_nd(&current);
        if next == current {
            return PeelOutcomeNd::Core(current);
        }
        current = next;
        steps += 1;
    }
}
