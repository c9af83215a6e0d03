//! Finite plane point sets, alternating chains ("arrays"), and the exact
//! criterion for unrestricted additive decomposability.
//!
//! An *array* is an ordered sequence of points in which consecutive points
//! alternately share the y-coordinate and the x-coordinate (a rook moves
//! along it, turning at every point). An array is *closed* when it returns
//! to its starting point after an even number of moves. Closed arrays are
//! the only obstruction to splitting an arbitrary `f : K → ℚ` as
//! `g(x) + h(y)`: along a closed array the alternating sum
//! `f(a₁) − f(a₂) + … − f(a₂ₗ)` must vanish for every decomposable `f`.
//!
//! The decision procedure works on the *incidence graph*: one node per
//! distinct x-value, one per distinct y-value, one edge per point joining
//! its two coordinate nodes. Arrays are exactly the non-backtracking walks
//! of this bipartite graph, so `K` contains a closed array iff the graph
//! has a cycle.
//!
//! The *peeling* operator removes every point that is alone on its vertical
//! or horizontal line; iterating it either empties the set (no closed
//! arrays, bounded array length) or stabilizes on a nonempty core. The
//! number of peeling steps bounds the longest odd array: if the set peels
//! out in `n + 1` steps, it contains an array of `2n + 1` pairwise-distinct
//! points and none of `2n + 3`.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::rat::Rat;

/// A plane point with exact rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point2 {
    pub x: Rat,
    pub y: Rat,
}

impl Point2 {
    pub fn new(x: Rat, y: Rat) -> Self {
        Point2 { x, y }
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.x, self.y)
    }
}

/// A finite set of distinct points, iterated in lexicographic (x, y) order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PointSet2 {
    points: Vec<Point2>,
}

impl PointSet2 {
    pub fn new(mut points: Vec<Point2>) -> Self {
        points.sort();
        points.dedup();
        PointSet2 { points }
    }

    pub fn empty() -> Self {
        PointSet2 { points: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn iter(&self) -> impl Iterator<Item = &Point2> {
        self.points.iter()
    }

    pub fn contains(&self, p: &Point2) -> bool {
        self.points.binary_search(p).is_ok()
    }

    /// Distinct x-values in increasing order.
    pub fn xs(&self) -> Vec<Rat> {
        let mut xs: Vec<Rat> = self.points.iter().map(|p| p.x.clone()).collect();
        xs.sort();
        xs.dedup();
        xs
    }

    /// Distinct y-values in increasing order.
    pub fn ys(&self) -> Vec<Rat> {
        let mut ys: Vec<Rat> = self.points.iter().map(|p| p.y.clone()).collect();
        ys.sort();
        ys.dedup();
        ys
    }
}

impl FromIterator<Point2> for PointSet2 {
    fn from_iter<I: IntoIterator<Item = Point2>>(iter: I) -> Self {
        PointSet2::new(iter.into_iter().collect())
    }
}

/// Which coordinate the first two points of an array share.
///
/// The reference convention is `Y`: odd moves share the y-coordinate, even
/// moves share the x-coordinate. Validation accepts either convention;
/// [`Array2::detect`] normalizes a listing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FirstShare {
    Y,
    X,
}

impl FirstShare {
    pub fn other(self) -> Self {
        match self {
            FirstShare::Y => FirstShare::X,
            FirstShare::X => FirstShare::Y,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArrayError {
    #[error("an array needs at least one point")]
    Empty,
    #[error("points {index} and {} coincide", index + 1)]
    RepeatedPoint { index: usize },
    #[error("points {index} and {} do not share the required coordinate", index + 1)]
    BrokenAlternation { index: usize },
}

/// An alternating point sequence. Points need not be pairwise distinct, but
/// consecutive points must differ and must share coordinates in strict
/// alternation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Array2 {
    points: Vec<Point2>,
    first_share: FirstShare,
}

impl Array2 {
    pub fn new(points: Vec<Point2>, first_share: FirstShare) -> Result<Self, ArrayError> {
        if points.is_empty() {
            return Err(ArrayError::Empty);
        }
        let mut share = first_share;
        for i in 0..points.len() - 1 {
            let (a, b) = (&points[i], &points[i + 1]);
            if a == b {
                return Err(ArrayError::RepeatedPoint { index: i });
            }
            let ok = match share {
                FirstShare::Y => a.y == b.y,
                FirstShare::X => a.x == b.x,
            };
            if !ok {
                return Err(ArrayError::BrokenAlternation { index: i });
            }
            share = share.other();
        }
        Ok(Array2 { points, first_share })
    }

    /// Validates a listing under either alternation convention, preferring
    /// the y-first one.
    pub fn detect(points: Vec<Point2>) -> Result<Self, ArrayError> {
        match Array2::new(points.clone(), FirstShare::Y) {
            Ok(a) => Ok(a),
            Err(first_err) => Array2::new(points, FirstShare::X).map_err(|_| first_err),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn first_share(&self) -> FirstShare {
        self.first_share
    }

    /// A closed listing returns to its start after an even number of moves:
    /// `a₁ = a₂ₗ₊₁` with `2l ≥ 4`.
    pub fn is_closed(&self) -> bool {
        self.points.len() >= 5
            && self.points.len() % 2 == 1
            && self.points.first() == self.points.last()
    }

    /// The cyclic edge list of a closed listing, without the repeated
    /// endpoint.
    pub fn cycle_points(&self) -> Option<&[Point2]> {
        if self.is_closed() {
            Some(&self.points[..self.points.len() - 1])
        } else {
            None
        }
    }
}

/// Bipartite incidence structure of a point set: nodes are the distinct
/// coordinate values, edges are the points.
#[derive(Clone, Debug)]
pub struct IncidenceGraph {
    pub x_nodes: Vec<Rat>,
    pub y_nodes: Vec<Rat>,
    /// One entry per point (in set order): indices into `x_nodes`/`y_nodes`.
    pub edges: Vec<(usize, usize)>,
}

impl IncidenceGraph {
    pub fn node_count(&self) -> usize {
        self.x_nodes.len() + self.y_nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    fn y_offset(&self) -> usize {
        self.x_nodes.len()
    }
}

pub fn incidence_graph(set: &PointSet2) -> IncidenceGraph {
    let x_nodes = set.xs();
    let y_nodes = set.ys();
    let edges = set
        .iter()
        .map(|p| {
            let xi = x_nodes.binary_search(&p.x).expect("x value present");
            let yi = y_nodes.binary_search(&p.y).expect("y value present");
            (xi, yi)
        })
        .collect();
    IncidenceGraph { x_nodes, y_nodes, edges }
}

/// Removes every point that is alone on its vertical or horizontal line.
pub fn peel(set: &PointSet2) -> PointSet2 {
    let mut col: BTreeMap<&Rat, usize> = BTreeMap::new();
    let mut row: BTreeMap<&Rat, usize> = BTreeMap::new();
    for p in set.iter() {
        *col.entry(&p.x).or_insert(0) += 1;
        *row.entry(&p.y).or_insert(0) += 1;
    }
    set.iter()
        .filter(|p| col[&p.x] >= 2 && row[&p.y] >= 2)
        .cloned()
        .collect()
}

/// The strictly decreasing chain of peeling iterates, starting at the set
/// itself. The final element is either empty (the set peels out) or a
/// nonempty fixpoint of [`peel`].
pub fn peel_iterates(set: &PointSet2) -> Vec<PointSet2> {
    let mut iterates = vec![set.clone()];
    loop {
        let last = iterates.last().unwrap();
        if last.is_empty() {
            return iterates;
        }
        let next = peel(last);
        if &next == last {
            return iterates;
        }
        iterates.push(next);
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PeelOutcome {
    /// Peeling empties the set; `steps` is the minimal number of
    /// applications after which nothing remains.
    Vanishes { steps: usize },
    /// Peeling stabilizes on this nonempty core.
    Core(PointSet2),
}

impl PeelOutcome {
    pub fn vanishes(&self) -> bool {
        matches!(self, PeelOutcome::Vanishes { .. })
    }
}

pub fn peel_depth(set: &PointSet2) -> PeelOutcome {
    let iterates = peel_iterates(set);
    let last = iterates.last().unwrap();
    if last.is_empty() {
        PeelOutcome::Vanishes { steps: iterates.len() - 1 }
    } else {
        PeelOutcome::Core(last.clone())
    }
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect() }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// Finds a closed array if one exists.
///
/// Points are scanned in lexicographic order and inserted into a growing
/// forest of the incidence graph; the first point whose two coordinate
/// nodes are already connected closes a cycle, and that cycle (whose
/// largest point is minimal over all cycles) is returned as a simple closed
/// listing, canonicalized to start at its lexicographically smallest
/// admissible point with the y-first convention.
pub fn find_closed_array(set: &PointSet2) -> Option<Array2> {
    let ig = incidence_graph(set);
    let n = ig.node_count();
    let mut dsu = Dsu::new(n);
    let mut forest: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (e, &(xi, yi)) in ig.edges.iter().enumerate() {
        let (a, b) = (xi, ig.y_offset() + yi);
        if !dsu.union(a, b) {
            let path = forest_path(&forest, a, b);
            let mut cycle: Vec<Point2> =
                path.iter().map(|&pe| set.points()[pe].clone()).collect();
            cycle.push(set.points()[e].clone());
            return Some(canonical_closed(cycle));
        }
        forest[a].push((b, e));
        forest[b].push((a, e));
    }
    None
}

/// Edge indices along the unique forest path from `a` to `b`.
fn forest_path(forest: &[Vec<(usize, usize)>], a: usize, b: usize) -> Vec<usize> {
    let mut prev: Vec<Option<(usize, usize)>> = vec![None; forest.len()];
    let mut seen = vec![false; forest.len()];
    let mut queue = std::collections::VecDeque::new();
    seen[a] = true;
    queue.push_back(a);
    while let Some(u) = queue.pop_front() {
        if u == b {
            break;
        }
        for &(v, e) in &forest[u] {
            if !seen[v] {
                seen[v] = true;
                prev[v] = Some((u, e));
                queue.push_back(v);
            }
        }
    }
    let mut path = Vec::new();
    let mut cur = b;
    while cur != a {
        let (p, e) = prev[cur].expect("a and b are connected in the forest");
        path.push(e);
        cur = p;
    }
    path.reverse();
    path
}

/// Canonicalizes a cyclic edge sequence into the lexicographically smallest
/// closed listing satisfying the y-first convention.
fn canonical_closed(cycle: Vec<Point2>) -> Array2 {
    let len = cycle.len();
    debug_assert!(len >= 4 && len % 2 == 0);
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
    Array2::new(best.expect("a cycle admits a y-first listing"), FirstShare::Y)
        .expect("validated above")
}

/// Partition of the set into array-connectivity classes: two points are
/// equivalent iff some array of `K` joins them, i.e. iff their edges lie in
/// the same component of the incidence graph.
pub fn equivalence_classes(set: &PointSet2) -> Vec<PointSet2> {
    let ig = incidence_graph(set);
    let mut dsu = Dsu::new(ig.node_count());
    for &(xi, yi) in &ig.edges {
        dsu.union(xi, ig.y_offset() + yi);
    }
    let mut classes: BTreeMap<usize, Vec<Point2>> = BTreeMap::new();
    for (e, &(xi, _)) in ig.edges.iter().enumerate() {
        classes
            .entry(dsu.find(xi))
            .or_default()
            .push(set.points()[e].clone());
    }
    classes.into_values().map(PointSet2::new).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OddArrayBound {
    /// The set contains an array of this many (odd) pairwise-distinct
    /// points and none longer of odd length; `0` for the empty set.
    Bounded(usize),
    /// Arbitrarily long arrays exist (a closed array repeats forever).
    Unbounded,
}

pub fn longest_odd_array(set: &PointSet2) -> OddArrayBound {
    match peel_depth(set) {
        PeelOutcome::Core(_) => OddArrayBound::Unbounded,
        PeelOutcome::Vanishes { steps: 0 } => OddArrayBound::Bounded(0),
        PeelOutcome::Vanishes { steps } => OddArrayBound::Bounded(2 * (steps - 1) + 1),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BasicCertificate {
    /// The set is not decomposable for every `f`: this closed array carries
    /// a nonzero alternating sum for suitable values.
    ClosedArray(Array2),
    /// The peeling order `K ⊃ E(K) ⊃ …` emptying the set, which lets the
    /// weights be chosen line by line for every `f`.
    PeelingOrder(Vec<PointSet2>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasicDecision {
    pub basic: bool,
    pub certificate: BasicCertificate,
}

/// Decides whether every function on the set splits as `g(x) + h(y)` with
/// no continuity requirement: true iff the set contains no closed array.
pub fn is_discontinuously_basic(set: &PointSet2) -> BasicDecision {
    match find_closed_array(set) {
        Some(cycle) => BasicDecision {
            basic: false,
            certificate: BasicCertificate::ClosedArray(cycle),
        },
        None => BasicDecision {
            basic: true,
            certificate: BasicCertificate::PeelingOrder(peel_iterates(set)),
        },
    }
}
