//! The curve `g_q` mapping concurrence to Tsallis-q entanglement, its
//! derivatives, and the auxiliary functions used by the monogamy and
//! polygamy bounds.
//!
//! With `s = √(1 − x²)`,
//!
//! ```text
//! g_q(x) = (1/(q−1)) [1 − ((1+s)/2)^q − ((1−s)/2)^q]      q ≠ 1
//! g_1(x) = H((1+s)/2)                                      (binary entropy, natural log)
//! ```
//!
//! `g_q` is the Tsallis-q entanglement of a pure two-qubit state with
//! concurrence `x`. For integer q it collapses to polynomials:
//! `g_2 = x²/2`, `g_3 = 3x²/8`, `g_4 = (8x² − x⁴)/24`.
//!
//! The auxiliary functions:
//! - `h(x) = 1 + (1 + s)/(x² s)`, the threshold curve whose minimum (5 at
//!   x = √3/2) bounds where `g_q` stays convex,
//! - `m_q(x, y) = g_q(√(x²+y²)) − g_q(x) − g_q(y)`, the superadditivity gap,
//! - `n_q(t) = [(1+s)^{q−1} − (1−s)^{q−1}]/s` (s = √(1−t²)), constant 2 at
//!   q = 2 and 4 at q = 3, otherwise strictly monotone in t — decreasing on
//!   q ∈ (1,2) ∪ (3,4), increasing on (2,3) — the injectivity that forces
//!   `m_q`'s extrema onto the boundary,
//! - `b_q(x) = m_q(x, √(1−x²))`, whose sign on (1,2) ∪ (3,4) vs (2,3) is
//!   what separates the polygamy regime from the monogamy regime.
//!
//! Throughout, `1 − s` is evaluated as `x²/(1+s)` to avoid cancellation for
//! small `x`.

use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entropy::EntropicIndex;
use crate::error::{Error, Result};

/// Inputs this close to x = 1 are rejected by the derivative formulas,
/// which divide by powers of `s = √(1 − x²)`.
pub const DERIV_ENDPOINT_GUARD: f64 = 1e-8;

/// Slack for clamping arguments nominally in `[0, 1]`.
pub const DOMAIN_SLACK: f64 = 1e-12;

/// Slack for the `x² + y² ≤ 1` domain of `m_q`.
pub const MQ_NORM_SLACK: f64 = 1e-9;

/// Second-derivative values below `-CONVEXITY_TOL` count as convexity
/// violations in scans.
pub const CONVEXITY_TOL: f64 = 1e-9;

/// Binary entropy `H(t) = −t ln t − (1−t) ln(1−t)` in nats; `H(0) = H(1) = 0`.
pub fn binary_entropy(t: f64) -> Result<f64> {
    let t = clamp_unit(t, "binary_entropy argument")?;
    let term = |u: f64| if u > 0.0 { -u * u.ln() } else { 0.0 };
    Ok(term(t) + term(1.0 - t))
}

/// Entanglement of formation of a two-qubit pure state with concurrence `x`:
/// `ℰ(x) = H(1/2 + √(1 − x²)/2)`. This is the q → 1 limit of [`g_q`].
pub fn eof_of_concurrence(x: f64) -> Result<f64> {
    let x = clamp_unit(x, "concurrence")?;
    let s = sqrt_one_minus_sq(x);
    binary_entropy(0.5 + 0.5 * s)
}

/// `g_q(x)`: Tsallis-q entanglement as a function of concurrence, `x ∈ [0, 1]`.
pub fn g_q(x: f64, q: EntropicIndex) -> Result<f64> {
    let x = clamp_unit(x, "concurrence")?;
    if q.is_limit() {
        return eof_of_concurrence(x);
    }
    let qv = q.q();
    let s = sqrt_one_minus_sq(x);
    let hi = (1.0 + s) / 2.0;
    let lo = x * x / (2.0 * (1.0 + s));
    Ok((1.0 - hi.powf(qv) - lo.powf(qv)) / (qv - 1.0))
}

/// First derivative `dg_q/dx` on `0 < x < 1` (x within
/// [`DERIV_ENDPOINT_GUARD`] of 1 is rejected).
pub fn g_q_d1(x: f64, q: EntropicIndex) -> Result<f64> {
    check_deriv_domain(x)?;
    let s = sqrt_one_minus_sq(x);
    let one_minus_s = x * x / (1.0 + s);
    if q.is_limit() {
        return Ok(x / (2.0 * s) * ((1.0 + s) / one_minus_s).ln());
    }
    let qv = q.q();
    let p = (1.0 + s).powf(qv - 1.0) - one_minus_s.powf(qv - 1.0);
    Ok(qv * x * p / (2f64.powf(qv) * (qv - 1.0) * s))
}

/// Second derivative `d²g_q/dx²` on the same domain as [`g_q_d1`]. Its sign
/// is what the convexity scans report.
pub fn g_q_d2(x: f64, q: EntropicIndex) -> Result<f64> {
    check_deriv_domain(x)?;
    let s = sqrt_one_minus_sq(x);
    let one_minus_s = x * x / (1.0 + s);
    if q.is_limit() {
        let log_ratio = ((1.0 + s) / one_minus_s).ln();
        return Ok(log_ratio / (2.0 * s * s * s) - 1.0 / (s * s));
    }
    let qv = q.q();
    let alpha = qv / (2f64.powf(qv) * (qv - 1.0));
    let x2q = x * x * (qv - 1.0);
    let plus = (1.0 + s).powf(qv - 2.0) / (s * s) * ((1.0 + s) / s - x2q);
    let minus = one_minus_s.powf(qv - 2.0) / (s * s) * (one_minus_s / s + x2q);
    Ok(alpha * (plus - minus))
}

/// Threshold curve `h(x) = 1 + (1 + √(1−x²))/(x² √(1−x²))` on `0 < x < 1`.
/// Its minimum value 5 (attained at x = √3/2) is the largest q for which
/// the convexity of `g_q` can extend across the full range.
pub fn h_threshold(x: f64) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "h is defined on the open interval (0, 1), got {x}"
        )));
    }
    let s = sqrt_one_minus_sq(x);
    Ok(1.0 + (1.0 + s) / (x * x * s))
}

/// Superadditivity gap `m_q(x, y) = g_q(√(x²+y²)) − g_q(x) − g_q(y)`;
/// requires `x² + y² ≤ 1` (within [`MQ_NORM_SLACK`]).
pub fn m_q(x: f64, y: f64, q: EntropicIndex) -> Result<f64> {
    let x = clamp_unit(x, "m_q first argument")?;
    let y = clamp_unit(y, "m_q second argument")?;
    let rr = x * x + y * y;
    if rr > 1.0 + MQ_NORM_SLACK {
        return Err(Error::InvalidArgument(format!(
            "m_q requires x² + y² ≤ 1, got {rr}"
        )));
    }
    let r = rr.sqrt().min(1.0);
    Ok(g_q(r, q)? - g_q(x, q)? - g_q(y, q)?)
}

/// `n_q(t) = [(1+s)^{q−1} − (1−s)^{q−1}]/s` with `s = √(1−t²)`, for
/// `t ∈ (0, 1)` and q > 1. Identically 2 at q = 2 and 4 at q = 3; for other
/// q it is strictly monotone in t, running from `2^{q−1}` at t → 0 to
/// `2(q−1)` at t → 1, so it decreases on q ∈ (1,2) ∪ (3,4) and increases on
/// q ∈ (2,3).
pub fn n_q(t: f64, q: EntropicIndex) -> Result<f64> {
    require_q_above_one(q, "n_q")?;
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "n_q is defined on the open interval (0, 1), got {t}"
        )));
    }
    let s = sqrt_one_minus_sq(t);
    let one_minus_s = t * t / (1.0 + s);
    let qv = q.q();
    Ok(((1.0 + s).powf(qv - 1.0) - one_minus_s.powf(qv - 1.0)) / s)
}

/// `b_q(x) = m_q(x, √(1−x²))` on `x ∈ [0, 1]`, q > 1: the superadditivity
/// gap along the unit circle, zero at the endpoints, negative on
/// q ∈ (1,2) ∪ (3,4) and positive on q ∈ (2,3) in the interior.
pub fn b_q(x: f64, q: EntropicIndex) -> Result<f64> {
    require_q_above_one(q, "b_q")?;
    let x = clamp_unit(x, "b_q argument")?;
    let y = sqrt_one_minus_sq(x);
    m_q(x, y, q)
}

/// Closed form for `b_q(1/√2)`:
/// `2β[(1 + 1/√2)^q + (1 − 1/√2)^q] − β(2 + 2^q)` with `β = 1/((q−1) 2^q)`.
/// Vanishes exactly at q = 2 and q = 3; its sign carries the same
/// polygamy/monogamy split as [`b_q`].
pub fn b_q_at_half_sqrt2(q: EntropicIndex) -> Result<f64> {
    require_q_above_one(q, "b_q_at_half_sqrt2")?;
    let qv = q.q();
    let a = std::f64::consts::FRAC_1_SQRT_2;
    let beta = 1.0 / ((qv - 1.0) * 2f64.powf(qv));
    Ok(2.0 * beta * ((1.0 + a).powf(qv) + (1.0 - a).powf(qv)) - beta * (2.0 + 2f64.powf(qv)))
}

/// Evenly spaced points including both endpoints.
pub fn linspace(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    assert!(steps >= 2, "linspace needs at least two points");
    let h = (hi - lo) / (steps - 1) as f64;
    (0..steps).map(|k| lo + k as f64 * h).collect()
}

/// A rectangular evaluation grid for [`scan_convexity`], endpoints included.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub x_steps: usize,
    pub q_min: f64,
    pub q_max: f64,
    pub q_steps: usize,
}

impl ScanGrid {
    pub fn new(
        x_min: f64,
        x_max: f64,
        x_steps: usize,
        q_min: f64,
        q_max: f64,
        q_steps: usize,
    ) -> Result<Self> {
        for v in [x_min, x_max, q_min, q_max] {
            if !v.is_finite() {
                return Err(Error::InvalidArgument("grid bounds must be finite".into()));
            }
        }
        if x_steps < 2 || q_steps < 2 {
            return Err(Error::InvalidArgument("grid needs at least 2 steps per axis".into()));
        }
        if !(x_min < x_max) || !(q_min < q_max) {
            return Err(Error::InvalidArgument("grid bounds must be increasing".into()));
        }
        if x_min <= 0.0 || x_max >= 1.0 - DERIV_ENDPOINT_GUARD {
            return Err(Error::InvalidArgument(format!(
                "x range must lie inside (0, {})",
                1.0 - DERIV_ENDPOINT_GUARD
            )));
        }
        if q_min <= 0.0 {
            return Err(Error::QOutOfRange { q: q_min, allowed: "(0, ∞)".into() });
        }
        Ok(Self { x_min, x_max, x_steps, q_min, q_max, q_steps })
    }

    pub fn x_points(&self) -> Vec<f64> {
        linspace(self.x_min, self.x_max, self.x_steps)
    }

    pub fn q_points(&self) -> Vec<f64> {
        linspace(self.q_min, self.q_max, self.q_steps)
    }
}

/// One grid cell of a convexity scan.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GridCell {
    pub x: f64,
    pub q: f64,
    pub value: f64,
}

/// Full result of a convexity scan: every `g_q''` value plus the minimum
/// and all cells below `-CONVEXITY_TOL`.
#[derive(Debug, Clone, Serialize)]
pub struct RegionReport {
    pub grid: ScanGrid,
    /// Row-major with x as the outer index: `values[ix * q_steps + iq]`.
    pub values: Vec<f64>,
    pub min_value: f64,
    pub min_x: f64,
    pub min_q: f64,
    pub violations: Vec<GridCell>,
}

/// The compact JSON summary of a [`RegionReport`].
#[derive(Debug, Clone, Serialize)]
pub struct ScanSummary {
    pub min_value: f64,
    pub min_x: f64,
    pub min_q: f64,
    pub violations: Vec<GridCell>,
}

impl RegionReport {
    pub fn is_convex(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn summary(&self) -> ScanSummary {
        ScanSummary {
            min_value: self.min_value,
            min_x: self.min_x,
            min_q: self.min_q,
            violations: self.violations.clone(),
        }
    }

    /// CSV with header `x,q,value`, one row per cell, x-major, floats with
    /// 17 significant digits.
    pub fn write_csv(&self, w: &mut impl Write) -> io::Result<()> {
        writeln!(w, "x,q,value")?;
        let xs = self.grid.x_points();
        let qs = self.grid.q_points();
        for (ix, &x) in xs.iter().enumerate() {
            for (iq, &q) in qs.iter().enumerate() {
                let v = self.values[ix * qs.len() + iq];
                writeln!(w, "{x:.16e},{q:.16e},{v:.16e}")?;
            }
        }
        Ok(())
    }
}

/// Evaluates `g_q''` over the grid. Grid rows run in parallel; the report
/// is assembled by index, so results are deterministic.
pub fn scan_convexity(grid: &ScanGrid) -> RegionReport {
    let xs = grid.x_points();
    let qs = grid.q_points();
    let q_indices: Vec<EntropicIndex> = qs
        .iter()
        .map(|&q| EntropicIndex::new(q).expect("grid validated q > 0"))
        .collect();

    let rows: Vec<Vec<f64>> = xs
        .par_iter()
        .map(|&x| {
            q_indices
                .iter()
                .map(|&q| g_q_d2(x, q).expect("grid validated x domain"))
                .collect()
        })
        .collect();

    let mut values = Vec::with_capacity(xs.len() * qs.len());
    let mut min_value = f64::INFINITY;
    let mut min_x = xs[0];
    let mut min_q = qs[0];
    let mut violations = Vec::new();
    for (ix, row) in rows.iter().enumerate() {
        for (iq, &v) in row.iter().enumerate() {
            if v < min_value {
                min_value = v;
                min_x = xs[ix];
                min_q = qs[iq];
            }
            if v < -CONVEXITY_TOL {
                violations.push(GridCell { x: xs[ix], q: qs[iq], value: v });
            }
            values.push(v);
        }
    }
    RegionReport { grid: grid.clone(), values, min_value, min_x, min_q, violations }
}

/// One sampled point of [`bq_scan`].
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BqPoint {
    pub q: f64,
    pub value: f64,
}

/// A maximal run of constant sign in a [`bq_scan`]; `sign` is −1, 0, or +1
/// (values within [`CONVEXITY_TOL`] of zero count as 0).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SignSegment {
    pub q_from: f64,
    pub q_to: f64,
    pub sign: i8,
}

/// Scan of the closed form [`b_q_at_half_sqrt2`] over `q`, with sign
/// segments and bisection-refined zero crossings.
#[derive(Debug, Clone, Serialize)]
pub struct BqScan {
    pub points: Vec<BqPoint>,
    pub zero_crossings: Vec<f64>,
    pub sign_segments: Vec<SignSegment>,
}

impl BqScan {
    /// CSV with header `q,value`, floats with 17 significant digits.
    pub fn write_csv(&self, w: &mut impl Write) -> io::Result<()> {
        writeln!(w, "q,value")?;
        for p in &self.points {
            writeln!(w, "{:.16e},{:.16e}", p.q, p.value)?;
        }
        Ok(())
    }
}

/// Samples [`b_q_at_half_sqrt2`] on `steps` points over `[q_min, q_max]`
/// (requires `1 < q_min < q_max`) and locates its zero crossings.
pub fn bq_scan(q_min: f64, q_max: f64, steps: usize) -> Result<BqScan> {
    if !(q_min.is_finite() && q_max.is_finite()) || !(q_min < q_max) {
        return Err(Error::InvalidArgument("q range must be finite and increasing".into()));
    }
    if q_min <= 1.0 {
        return Err(Error::QOutOfRange { q: q_min, allowed: "(1, ∞)".into() });
    }
    if steps < 2 {
        return Err(Error::InvalidArgument("scan needs at least 2 points".into()));
    }
    let eval = |q: f64| -> f64 {
        b_q_at_half_sqrt2(EntropicIndex::new(q).expect("q > 1")).expect("q > 1")
    };
    let points: Vec<BqPoint> = linspace(q_min, q_max, steps)
        .into_iter()
        .map(|q| BqPoint { q, value: eval(q) })
        .collect();

    let sign_of = |v: f64| -> i8 {
        if v > CONVEXITY_TOL {
            1
        } else if v < -CONVEXITY_TOL {
            -1
        } else {
            0
        }
    };

    let mut zero_crossings = Vec::new();
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        if a.value == 0.0 {
            zero_crossings.push(a.q);
        } else if a.value * b.value < 0.0 {
            zero_crossings.push(bisect_zero(&eval, a.q, b.q));
        }
    }
    if let Some(last) = points.last() {
        if last.value == 0.0 {
            zero_crossings.push(last.q);
        }
    }

    let mut sign_segments: Vec<SignSegment> = Vec::new();
    for p in &points {
        let s = sign_of(p.value);
        match sign_segments.last_mut() {
            Some(seg) if seg.sign == s => seg.q_to = p.q,
            _ => sign_segments.push(SignSegment { q_from: p.q, q_to: p.q, sign: s }),
        }
    }

    Ok(BqScan { points, zero_crossings, sign_segments })
}

fn bisect_zero(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        let fmid = f(mid);
        if fmid == 0.0 {
            return mid;
        }
        if (flo < 0.0) == (fmid < 0.0) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-13 {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// `√(1 − x²)` computed as `√((1−x)(1+x))`, accurate near x = 1.
fn sqrt_one_minus_sq(x: f64) -> f64 {
    ((1.0 - x) * (1.0 + x)).max(0.0).sqrt()
}

fn clamp_unit(v: f64, what: &str) -> Result<f64> {
    if !v.is_finite() || v < -DOMAIN_SLACK || v > 1.0 + DOMAIN_SLACK {
        return Err(Error::InvalidArgument(format!("{what} must lie in [0, 1], got {v}")));
    }
    Ok(v.clamp(0.0, 1.0))
}

fn check_deriv_domain(x: f64) -> Result<()> {
    if !x.is_finite() || x <= 0.0 || x >= 1.0 {
        return Err(Error::InvalidArgument(format!(
            "derivative domain is the open interval (0, 1), got {x}"
        )));
    }
    if 1.0 - x < DERIV_ENDPOINT_GUARD {
        return Err(Error::InvalidArgument(format!(
            "derivatives are unstable within {DERIV_ENDPOINT_GUARD} of x = 1, got {x}"
        )));
    }
    Ok(())
}

fn require_q_above_one(q: EntropicIndex, what: &str) -> Result<()> {
    if q.q() <= 1.0 {
        return Err(Error::QOutOfRange { q: q.q(), allowed: format!("(1, ∞) for {what}") });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qi(q: f64) -> EntropicIndex {
        EntropicIndex::new(q).unwrap()
    }

    #[test]
    fn integer_q_polynomials() {
        for &x in linspace(0.0, 1.0, 101).iter() {
            let g2 = g_q(x, qi(2.0)).unwrap();
            let g3 = g_q(x, qi(3.0)).unwrap();
            let g4 = g_q(x, qi(4.0)).unwrap();
            assert!((g2 - x * x / 2.0).abs() < 1e-14, "q=2, x={x}");
            assert!((g3 - 3.0 * x * x / 8.0).abs() < 1e-14, "q=3, x={x}");
            assert!((g4 - (8.0 * x * x - x.powi(4)) / 24.0).abs() < 1e-14, "q=4, x={x}");
        }
    }

    #[test]
    fn endpoints_and_monotonicity() {
        for &q in &[0.5, 1.0, 1.7, 2.0, 3.0, 4.0] {
            let g0 = g_q(0.0, qi(q)).unwrap();
            assert!(g0.abs() < 1e-15, "g_q(0) at q={q}");
            let g1v = g_q(1.0, qi(q)).unwrap();
            let expect = if (q - 1.0).abs() < 1e-12 {
                std::f64::consts::LN_2
            } else {
                (1.0 - 2f64.powf(1.0 - q)) / (q - 1.0)
            };
            assert!((g1v - expect).abs() < 1e-14, "g_q(1) at q={q}");

            let mut prev = 0.0;
            for &x in linspace(0.01, 1.0, 200).iter() {
                let g = g_q(x, qi(q)).unwrap();
                assert!(g >= prev - 1e-12, "monotone at q={q}, x={x}");
                prev = g;
            }
        }
    }

    #[test]
    fn q1_limit_is_binary_entropy_curve() {
        let e = eof_of_concurrence(0.6).unwrap();
        let expect = binary_entropy(0.9).unwrap();
        assert!((e - expect).abs() < 1e-15);
        assert_eq!(g_q(0.6, qi(1.0)).unwrap(), e);
        // continuity across the window edge
        let just_outside = g_q(0.6, qi(1.0 + 2e-6)).unwrap();
        assert!((just_outside - e).abs() < 1e-5);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let dx = 1e-5;
        for &q in &[0.7, 1.0, 1.3, 2.0, 2.6, 3.0, 4.0] {
            for &x in &[0.1, 0.3, 0.5, 0.7, 0.9] {
                let d1 = g_q_d1(x, qi(q)).unwrap();
                let fd1 = (g_q(x + dx, qi(q)).unwrap() - g_q(x - dx, qi(q)).unwrap()) / (2.0 * dx);
                assert!(
                    (d1 - fd1).abs() <= 1e-7 * d1.abs().max(1.0),
                    "d1 mismatch at x={x}, q={q}: {d1} vs {fd1}"
                );
                let d2 = g_q_d2(x, qi(q)).unwrap();
                let fd2 = (g_q(x + dx, qi(q)).unwrap() - 2.0 * g_q(x, qi(q)).unwrap()
                    + g_q(x - dx, qi(q)).unwrap())
                    / (dx * dx);
                assert!(
                    (d2 - fd2).abs() <= 1e-4 * d2.abs().max(1.0),
                    "d2 mismatch at x={x}, q={q}: {d2} vs {fd2}"
                );
            }
        }
    }

    #[test]
    fn derivative_domain_guards() {
        assert!(g_q_d1(0.0, qi(2.0)).is_err());
        assert!(g_q_d1(1.0, qi(2.0)).is_err());
        assert!(g_q_d1(1.0 - 1e-9, qi(2.0)).is_err());
        assert!(g_q_d1(1.0 - 2e-8, qi(2.0)).is_ok());
        assert!(g_q_d2(-0.1, qi(2.0)).is_err());
    }

    #[test]
    fn h_threshold_known_values() {
        // h(√3/2) = 1 + (3/2)/((3/4)(1/2)) = 5
        let x0 = 3f64.sqrt() / 2.0;
        assert!((h_threshold(x0).unwrap() - 5.0).abs() < 1e-12);
        // h(1/2) = 1 + (1 + √3/2)/((1/4)(√3/2))
        let s = (3f64).sqrt() / 2.0;
        let expect = 1.0 + (1.0 + s) / (0.25 * s);
        assert!((h_threshold(0.5).unwrap() - expect).abs() < 1e-12);
        assert!(h_threshold(0.0).is_err());
        assert!(h_threshold(1.0).is_err());
    }

    #[test]
    fn m_q_signs_and_domain() {
        // superadditive (positive gap) at q = 2.5, subadditive at q = 1.2
        let m = m_q(0.5, 0.5, qi(2.5)).unwrap();
        assert!(m > 0.0, "expected positive gap, got {m}");
        let m = m_q(0.5, 0.5, qi(1.2)).unwrap();
        assert!(m < 0.0, "expected negative gap, got {m}");
        // additive exactly at q = 2 and 3: g ∝ x²
        assert!(m_q(0.3, 0.4, qi(2.0)).unwrap().abs() < 1e-15);
        assert!(m_q(0.3, 0.4, qi(3.0)).unwrap().abs() < 1e-15);
        // domain
        assert!(m_q(0.9, 0.9, qi(2.0)).is_err());
        assert!(m_q(0.6, 0.8, qi(2.0)).unwrap().abs() < 1e-12);
    }

    #[test]
    fn n_q_constants_and_monotonicity() {
        for &t in linspace(0.01, 0.99, 50).iter() {
            assert!((n_q(t, qi(2.0)).unwrap() - 2.0).abs() < 1e-12, "t = {t}");
            assert!((n_q(t, qi(3.0)).unwrap() - 4.0).abs() < 1e-12, "t = {t}");
        }
        // Direction flips with the sign of 2(q−1) − 2^{q−1}: decreasing on
        // (1,2) ∪ (3,4), increasing on (2,3).
        for &(q, dir) in &[(1.5, -1.0), (2.5, 1.0), (3.5, -1.0), (4.0, -1.0)] {
            let mut prev = None;
            for &t in linspace(0.01, 0.99, 50).iter() {
                let v = n_q(t, qi(q)).unwrap();
                if let Some(p) = prev {
                    assert!(
                        dir * (v - p) > 0.0,
                        "n_q direction {dir} violated at q={q}, t={t}"
                    );
                }
                prev = Some(v);
            }
            // Limits t → 0 and t → 1 bracket the run.
            let qm1 = q - 1.0;
            // (1−s)^{q−1} ≈ (t²/2)^{q−1} still ~7e−11 at q = 1.5 here.
            assert!((n_q(1e-10, qi(q)).unwrap() - 2f64.powf(qm1)).abs() < 1e-9);
            assert!((n_q(1.0 - 1e-12, qi(q)).unwrap() - 2.0 * qm1).abs() < 1e-5);
        }
        assert!(n_q(0.5, qi(1.0)).is_err());
        assert!(n_q(0.0, qi(2.0)).is_err());
        assert!(n_q(1.0, qi(2.0)).is_err());
    }

    #[test]
    fn b_q_closed_form_matches_composition() {
        let a = std::f64::consts::FRAC_1_SQRT_2;
        for &q in linspace(1.01, 4.2, 97).iter() {
            let direct = b_q(a, qi(q)).unwrap();
            let closed = b_q_at_half_sqrt2(qi(q)).unwrap();
            assert!((direct - closed).abs() <= 1e-12, "q = {q}: {direct} vs {closed}");
        }
    }

    #[test]
    fn b_q_signs_and_zeros() {
        assert!(b_q_at_half_sqrt2(qi(2.0)).unwrap().abs() < 1e-15);
        assert!(b_q_at_half_sqrt2(qi(3.0)).unwrap().abs() < 1e-15);
        assert!(b_q_at_half_sqrt2(qi(1.5)).unwrap() < -1e-4);
        assert!(b_q_at_half_sqrt2(qi(2.5)).unwrap() > 1e-4);
        assert!(b_q_at_half_sqrt2(qi(3.5)).unwrap() < -1e-4);
        assert!(b_q_at_half_sqrt2(qi(1.0)).is_err());
        // endpoints of b_q in x vanish for any valid q
        assert!(b_q(0.0, qi(2.7)).unwrap().abs() < 1e-15);
        assert!(b_q(1.0, qi(2.7)).unwrap().abs() < 1e-15);
    }

    #[test]
    fn bq_scan_locates_zeros() {
        let scan = bq_scan(1.01, 4.0, 600).unwrap();
        assert_eq!(scan.points.len(), 600);
        assert_eq!(scan.zero_crossings.len(), 2);
        assert!((scan.zero_crossings[0] - 2.0).abs() < 1e-9);
        assert!((scan.zero_crossings[1] - 3.0).abs() < 1e-9);
        let signs: Vec<i8> = scan.sign_segments.iter().map(|s| s.sign).collect();
        assert!(signs.contains(&-1) && signs.contains(&1));
        assert!(bq_scan(0.9, 4.0, 10).is_err());
        assert!(bq_scan(2.0, 2.0, 10).is_err());
    }

    #[test]
    fn convexity_scan_shapes_and_violations() {
        let grid = ScanGrid::new(0.05, 0.95, 30, 1.0, 4.0, 30).unwrap();
        let report = scan_convexity(&grid);
        assert_eq!(report.values.len(), 900);
        assert!(report.is_convex(), "g_q'' should be nonnegative on q ∈ [1,4]");
        assert!(report.min_value >= -CONVEXITY_TOL);

        let grid = ScanGrid::new(0.05, 0.95, 30, 4.4, 4.5, 10).unwrap();
        let report = scan_convexity(&grid);
        assert!(!report.is_convex(), "expected violations above the threshold");
        assert!(report.min_value < -CONVEXITY_TOL);
        assert!((report.min_value
            - report.violations.iter().map(|c| c.value).fold(f64::INFINITY, f64::min))
        .abs() == 0.0);

        assert!(ScanGrid::new(0.0, 0.9, 10, 1.0, 4.0, 10).is_err());
        assert!(ScanGrid::new(0.1, 1.0, 10, 1.0, 4.0, 10).is_err());
        assert!(ScanGrid::new(0.1, 0.9, 1, 1.0, 4.0, 10).is_err());
        assert!(ScanGrid::new(0.1, 0.9, 10, -1.0, 4.0, 10).is_err());
    }

    #[test]
    fn csv_output_format() {
        let grid = ScanGrid::new(0.1, 0.9, 2, 2.0, 3.0, 2).unwrap();
        let report = scan_convexity(&grid);
        let mut buf = Vec::new();
        report.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("x,q,value"));
        let first = lines.next().unwrap();
        // {:.16e} renders the nearest-double of 0.1, hence the trailing 1.
        assert!(first.starts_with("1.0000000000000001e-1,2.0000000000000000e0,"));
        assert_eq!(text.lines().count(), 5);
    }
}
