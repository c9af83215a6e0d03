//! Numeric and exact diagnostics for completed arrays — infinite
//! alternating chains converging to the origin together with their limit
//! point.
//!
//! Divergence of alternating sums and growth of tail ratios are floating-
//! point diagnostics: each report carries its truncation depth and
//! tolerance, and boundedness verdicts are heuristic by construction. The
//! spike-area function and the cross increment are exact rationals.
//!
//! Two built-in families:
//!
//! * `Geometric`: `a_n = (2^{−⌊(n+1)/2⌋}, 2^{−⌊n/2⌋})`, n ≥ 1 — tails decay
//!   geometrically, so tail ratios stay bounded (≈ 3.6) and alternating
//!   series of summable values converge.
//! * `Power`: `a_n = (⌊(n+1)/2⌋^{−1/2}, ⌊n/2⌋^{−1/2})`, n ≥ 2 — with the
//!   values `f(a_n) = (−1)^n/n` the alternating sums grow like the harmonic
//!   series, the telescoping witness that no decomposition with a limit at
//!   the origin exists.

use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::decomp;
use crate::rat::{pow2, pow4, rat_int, Rat};
use crate::rook::Point2;

pub use decomp::{layer_points, layered_instance};

/// Point generator for a completed array. Built-in families are closed
/// forms; custom arrays are finite prefixes given explicitly.
#[derive(Clone, Debug)]
pub enum ArraySource {
    Geometric,
    Power,
    Custom(Vec<(f64, f64)>),
}

impl ArraySource {
    /// First index of the family's natural numbering.
    pub fn start_index(&self) -> usize {
        match self {
            ArraySource::Geometric | ArraySource::Custom(_) => 1,
            ArraySource::Power => 2,
        }
    }

    /// The point `a_n`; `n` uses the family's own numbering.
    pub fn point(&self, n: usize) -> (f64, f64) {
        match self {
            ArraySource::Geometric => {
                let x = ((n + 1) / 2) as i32;
                let y = (n / 2) as i32;
                (0.5f64.powi(x), 0.5f64.powi(y))
            }
            ArraySource::Power => {
                let x = ((n + 1) / 2) as f64;
                let y = (n / 2) as f64;
                (x.powf(-0.5), y.powf(-0.5))
            }
            ArraySource::Custom(pts) => pts[n - 1],
        }
    }

    pub fn euclid_norm(&self, n: usize) -> f64 {
        let (x, y) = self.point(n);
        x.hypot(y)
    }

    /// Number of points available (custom arrays are finite).
    pub fn available(&self) -> usize {
        match self {
            ArraySource::Custom(pts) => pts.len(),
            _ => usize::MAX,
        }
    }

    /// An exact prefix whose coordinate coincidences mirror the family,
    /// suitable for the array validator. The geometric family is exact;
    /// the power family's coordinates `k^{−1/2}` are mapped through the
    /// injective monotone `t ↦ t²` to `1/k`, which preserves every
    /// equality and inequality the validator checks. Custom arrays have no
    /// exact form here.
    pub fn exact_surrogate_prefix(&self, len: usize) -> Option<Vec<Point2>> {
        let start = self.start_index();
        match self {
            ArraySource::Geometric => Some(
                (start..start + len)
                    .map(|n| {
                        Point2::new(
                            pow2(-(((n + 1) / 2) as i32)),
                            pow2(-((n / 2) as i32)),
                        )
                    })
                    .collect(),
            ),
            ArraySource::Power => Some(
                (start..start + len)
                    .map(|n| {
                        Point2::new(
                            Rat::new(1.into(), (((n + 1) / 2) as i64).into()),
                            Rat::new(1.into(), ((n / 2) as i64).into()),
                        )
                    })
                    .collect(),
            ),
            ArraySource::Custom(_) => None,
        }
    }
}

/// Default divergence threshold for alternating partial sums.
pub const DIVERGENCE_THRESHOLD: f64 = 3.0;
/// Default Cauchy tolerance over the trailing window.
pub const CAUCHY_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct SeriesReport {
    /// `S_L = Σ_{i ≤ L} (−1)^i f(a_i)` for each prefix length.
    pub partials: Vec<f64>,
    pub max_abs_partial: f64,
    /// Fluctuation of the last 10% of partial sums stays within tolerance.
    pub converged: bool,
    pub tolerance: f64,
    pub terms: usize,
}

impl SeriesReport {
    /// Divergence diagnostic: the sums left the threshold band and show no
    /// Cauchy tail.
    pub fn diverging(&self) -> bool {
        self.max_abs_partial > DIVERGENCE_THRESHOLD && !self.converged
    }
}

/// Partial alternating sums `Σ (−1)^i f(i, a_i)` of a value rule along the
/// array, with a convergence flag at [`CAUCHY_TOLERANCE`].
pub fn alternating_sums(
    source: &ArraySource,
    value: impl Fn(usize, (f64, f64)) -> f64,
    terms: usize,
) -> SeriesReport {
    let terms = terms.min(source.available());
    let start = source.start_index();
    let mut partials = Vec::with_capacity(terms);
    let mut sum = 0.0;
    for n in start..start + terms {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * value(n, source.point(n));
        partials.push(sum);
    }
    let max_abs_partial = partials.iter().fold(0.0f64, |m, s| m.max(s.abs()));
    let tail = &partials[partials.len().saturating_sub((terms / 10).max(2))..];
    let converged = match tail {
        [] => true,
        _ => {
            let hi = tail.iter().fold(f64::NEG_INFINITY, |m, s| m.max(*s));
            let lo = tail.iter().fold(f64::INFINITY, |m, s| m.min(*s));
            hi - lo < CAUCHY_TOLERANCE
        }
    };
    SeriesReport { partials, max_abs_partial, converged, tolerance: CAUCHY_TOLERANCE, terms }
}

#[derive(Clone, Debug)]
pub struct TailReport {
    /// `r_k = (Σ_{n=k}^{N} |a_n|) / |a_k|`, indexed from the family start.
    pub ratios: Vec<f64>,
    pub max_ratio: f64,
    pub k_max: usize,
    pub terms: usize,
    /// Heuristic only: the computed ratios stayed under the given bound.
    pub bounded_under: Option<f64>,
}

/// Truncated tail ratios of the point norms. The truncation at `terms`
/// underestimates each tail; for the built-in families the remainder
/// beyond `N` is geometric (Geometric) or `O(√N)`-growing (Power), so a
/// boundedness verdict from this report is heuristic and labeled as such.
pub fn tail_ratios(source: &ArraySource, k_max: usize, terms: usize) -> TailReport {
    let start = source.start_index();
    let last = (start + terms - 1).min(
        source
            .available()
            .saturating_add(start.saturating_sub(1)),
    );
    let k_max = k_max.min(last);
    let norms: Vec<f64> = (start..=last).map(|n| source.euclid_norm(n)).collect();
    let mut suffix = vec![0.0; norms.len() + 1];
    for i in (0..norms.len()).rev() {
        suffix[i] = suffix[i + 1] + norms[i];
    }
    let ratios: Vec<f64> = (start..=k_max)
        .map(|k| suffix[k - start] / norms[k - start])
        .collect();
    let max_ratio = ratios.iter().fold(0.0f64, |m, r| m.max(*r));
    TailReport { ratios, max_ratio, k_max, terms, bounded_under: None }
}

#[derive(Clone, Debug)]
pub struct GeometricDecomposition {
    /// `g(2^{−k})` for k = 0..=depth.
    pub g: Vec<f64>,
    /// `h(2^{−k})` for k = 0..=depth.
    pub h: Vec<f64>,
    pub residual: f64,
    pub worst_point: (f64, f64),
    /// Difference quotients `g(2^{−k}) / 2^{−k}` — a differentiability-at-
    /// the-origin diagnostic.
    pub g_quotients: Vec<f64>,
    pub h_quotients: Vec<f64>,
    pub depth: usize,
    pub tolerance: f64,
    /// Magnitude of the last alternating term, a truncation estimate.
    pub remainder_estimate: f64,
}

#[derive(Debug, Error)]
#[error("residual {residual:e} at ({}, {}) exceeds tolerance {tolerance:e}", worst_point.0, worst_point.1)]
pub struct ResidualExceeded {
    pub residual: f64,
    pub worst_point: (f64, f64),
    pub tolerance: f64,
    pub report: GeometricDecomposition,
}

/// Decomposes a value rule on the geometric family by the alternating tail
/// series
///
/// `h(2^{−k}) = f(2^{−k−1}, 2^{−k}) − f(2^{−k−1}, 2^{−k−1}) + …`,
/// `g(2^{−k}) = f(2^{−k}, 2^{−k}) − f(2^{−k−1}, 2^{−k}) + …`,
///
/// truncated at `depth`. The rule is normalized so that `f(0,0) = 0`. The
/// residual over the generated points must stay below `tol`.
pub fn geometric_decompose(
    value: impl Fn(f64, f64) -> f64,
    depth: usize,
    tol: f64,
) -> Result<GeometricDecomposition, ResidualExceeded> {
    let f00 = value(0.0, 0.0);
    let f = |x: f64, y: f64| value(x, y) - f00;
    let p = |k: usize| 0.5f64.powi(k as i32);
    let mut g = Vec::with_capacity(depth + 1);
    let mut h = Vec::with_capacity(depth + 1);
    for k in 0..=depth {
        // Alternating tails along the array below 2^{-k}, grouped in pairs:
        // h picks up f(2^{-j-1}, 2^{-j}) - f(2^{-j-1}, 2^{-j-1}),
        // g picks up f(2^{-j}, 2^{-j}) - f(2^{-j-1}, 2^{-j}).
        let mut hk = 0.0;
        let mut gk = 0.0;
        for j in k..depth {
            let diag = f(p(j), p(j));
            let off = f(p(j + 1), p(j));
            let diag_next = f(p(j + 1), p(j + 1));
            hk += off - diag_next;
            gk += diag - off;
        }
        g.push(gk);
        h.push(hk);
    }
    // Both truncated tails stop at the diagonal point of the cutoff level.
    let remainder_estimate = f(p(depth), p(depth)).abs();
    // Residual over the generated points with both coordinates >= 2^-depth.
    let mut residual = 0.0f64;
    let mut worst_point = (p(0), p(0));
    for k in 0..depth {
        for (x, y, gi, hi) in [
            (p(k), p(k), k, k),
            (p(k + 1), p(k), k + 1, k),
        ] {
            let r = (f(x, y) - g[gi] - h[hi]).abs();
            if r > residual {
                residual = r;
                worst_point = (x, y);
            }
        }
    }
    let g_quotients: Vec<f64> = g.iter().enumerate().map(|(k, v)| v / p(k)).collect();
    let h_quotients: Vec<f64> = h.iter().enumerate().map(|(k, v)| v / p(k)).collect();
    let report = GeometricDecomposition {
        g,
        h,
        residual,
        worst_point,
        g_quotients,
        h_quotients,
        depth,
        tolerance: tol,
        remainder_estimate,
    };
    if residual < tol {
        Ok(report)
    } else {
        Err(ResidualExceeded { residual, worst_point, tolerance: tol, report })
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeqError {
    #[error("argument {0} is outside [0, 1]")]
    OutsideUnitInterval(Rat),
    #[error("increment offset must satisfy 0 < d < 1/4, got {0}")]
    BadIncrementOffset(Rat),
}

/// Exact area under the spike train on `[0, x]`.
///
/// The profile is piecewise linear and zero except on the intervals
/// `[4^{−i}, 4^{−i} + 4^{−3i}]`, `i ≥ 1`, where it rises linearly to the
/// apex `2^{3i}` at `4^{−i} + 4^{−3i−1}` and falls back to zero. Spike `i`
/// has area `2^{−3i−1}`; the infinitely many spikes below `x` sum in
/// closed form (a geometric series), so the result is an exact rational.
/// The total area is `Σ_{i≥1} 2^{−3i−1} = 1/14`.
pub fn spike_area(x: &Rat) -> Result<Rat, SeqError> {
    if x.is_negative() || *x > rat_int(1) {
        return Err(SeqError::OutsideUnitInterval(x.clone()));
    }
    if x.is_zero() {
        return Ok(Rat::zero());
    }
    // Smallest spike index whose support lies fully below x.
    let mut i_min: i32 = 1;
    while &(pow4(-i_min) + pow4(-3 * i_min)) > x {
        i_min += 1;
    }
    // Tail of full spikes: sum_{i >= i_min} 2^{-3i-1} = (8/7)·2^{-3·i_min-1}.
    let mut area = pow2(-3 * i_min - 1) * Rat::new(8.into(), 7.into());
    // At most one spike is cut by x.
    let i = i_min - 1;
    if i >= 1 && &pow4(-i) < x {
        area += partial_spike(i, x);
    }
    Ok(area)
}

/// Area of spike `i` between its left edge and `x` strictly inside its
/// support.
fn partial_spike(i: i32, x: &Rat) -> Rat {
    let base = pow4(-3 * i);
    let height = pow2(3 * i);
    let u = x - pow4(-i);
    debug_assert!(u.is_positive() && u < base);
    let quarter = &base / rat_int(4);
    if u <= quarter {
        // Rising edge: slope H / (b/4).
        rat_int(2) * &height * &u * &u / &base
    } else {
        // Rising triangle plus the trapezoid down the falling edge.
        let rising = &height * &base / rat_int(8);
        let h_at_u = rat_int(4) * &height * (&base - &u) / (rat_int(3) * &base);
        rising + (&u - &quarter) * (&height + &h_at_u) / rat_int(2)
    }
}

/// The exact increment sum compared against the floating-point bound
/// `(4d)^{3/4} / 2`.
#[derive(Clone, Debug)]
pub struct CrossIncrement {
    pub sum: Rat,
    pub bound: f64,
    /// `sum ≥ bound` up to [`CROSS_BOUND_TOLERANCE`].
    pub holds: bool,
    pub depth: usize,
}

/// Comparison tolerance between the exact sum and the float bound.
pub const CROSS_BOUND_TOLERANCE: f64 = 1e-12;

/// `Σ_{k=0}^{depth} [W(4^{−k−1} + d·4^{−k}) − W(4^{−k−1})]` computed
/// exactly via [`spike_area`], checked against `(4d)^{3/4}/2`. Requires
/// `0 < d < 1/4`. The sum is nondecreasing in `d` at fixed depth.
pub fn cross_increment(d: &Rat, depth: usize) -> Result<CrossIncrement, SeqError> {
    if !d.is_positive() || *d >= Rat::new(1.into(), 4.into()) {
        return Err(SeqError::BadIncrementOffset(d.clone()));
    }
    let mut sum = Rat::zero();
    for k in 0..=depth as i32 {
        let base = pow4(-k - 1);
        let upper = &base + d * pow4(-k);
        sum += spike_area(&upper)? - spike_area(&base)?;
    }
    let bound = (4.0 * d.to_f64().unwrap()).powf(0.75) / 2.0;
    let holds = sum.to_f64().unwrap() >= bound - CROSS_BOUND_TOLERANCE;
    Ok(CrossIncrement { sum, bound, holds, depth })
}
