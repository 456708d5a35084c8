//! Adaptive Gauss–Kronrod quadrature on finite intervals and boxes.
//!
//! The 1D engine is a globally adaptive 7/15-point Gauss–Kronrod scheme in
//! the style of QUADPACK's QAG: the interval with the largest error
//! estimate is bisected until the summed error drops below
//! `max(rel_tol·|I|, abs_tol)`. Everything is deterministic: no
//! randomness, and the work order only depends on the integrand values.
//!
//! Two-dimensional integrals are evaluated as iterated 1D integrals. A
//! [`SingularLocus`] describes a curve `y = y₀(x)` on which the raw
//! integrand is either `0/0` (replaced by a supplied local form inside the
//! singular window) or has a simple pole (principal value by symmetric
//! exclusion of the band `|y − y₀(x)| < η`, extrapolated in `η`).

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;
use thiserror::Error;

/// Tolerances and limits shared by the 1D and 2D integrators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    /// Relative tolerance on the integral.
    pub rel_tol: f64,
    /// Absolute error floor.
    pub abs_tol: f64,
    /// Maximum number of subintervals held by one adaptive pass.
    pub max_subdivisions: usize,
    /// Half-width of the band around a singular locus. For removable
    /// singularities it is measured in the units of the locus offset
    /// function; for poles it is measured in the inner variable.
    pub singular_window: f64,
}

impl QuadratureConfig {
    /// Defaults for one-dimensional integrals.
    pub const fn one_d() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-13,
            max_subdivisions: 2000,
            singular_window: 1e-3,
        }
    }

    /// Defaults for two-dimensional integrals.
    pub const fn two_d() -> Self {
        Self {
            rel_tol: 1e-6,
            abs_tol: 1e-10,
            max_subdivisions: 2000,
            singular_window: 1e-3,
        }
    }

    /// Same config with a different relative tolerance.
    pub const fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    /// Checks the documented invariants.
    pub fn validate(&self) -> Result<(), QuadError> {
        if !(self.rel_tol > 0.0) {
            return Err(QuadError::InvalidConfig("rel_tol must be > 0"));
        }
        if !(self.abs_tol >= 0.0) {
            return Err(QuadError::InvalidConfig("abs_tol must be >= 0"));
        }
        if self.max_subdivisions < 1 {
            return Err(QuadError::InvalidConfig("max_subdivisions must be >= 1"));
        }
        if !(self.singular_window > 0.0) {
            return Err(QuadError::InvalidConfig("singular_window must be > 0"));
        }
        Ok(())
    }
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self::one_d()
    }
}

/// A converged integral together with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    /// Integral value.
    pub value: f64,
    /// Estimated absolute error.
    pub error: f64,
    /// Number of integrand evaluations spent.
    pub evaluations: usize,
}

/// Failure modes of the integrators.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum QuadError {
    /// Subdivision budget exhausted; carries the best estimate.
    #[error("quadrature did not converge: estimate {estimate:e} with error {error:e}")]
    NotConverged {
        /// Best available value.
        estimate: f64,
        /// Its error estimate.
        error: f64,
    },
    /// The integrand returned NaN or an infinity.
    #[error("integrand is not finite at x = {x:e}, y = {y:?}")]
    NonFinite {
        /// Outer (or only) abscissa.
        x: f64,
        /// Inner abscissa for 2D integrals.
        y: Option<f64>,
    },
    /// Tolerances out of range.
    #[error("invalid quadrature config: {0}")]
    InvalidConfig(&'static str),
    /// Bounds not finite or reversed.
    #[error("invalid integration domain [{a}, {b}]")]
    InvalidDomain {
        /// Lower bound.
        a: f64,
        /// Upper bound.
        b: f64,
    },
    /// A pole was declared without asking for a principal value.
    #[error("non-removable pole without principal-value flag")]
    UnregularizedPole,
}

// 7-point Gauss / 15-point Kronrod abscissae and weights.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    abs: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    // Max-heap on error; ties go to the leftmost interval.
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

type Integrand<'f> = dyn FnMut(f64) -> Result<f64, QuadError> + 'f;

fn kronrod15(f: &mut Integrand<'_>, a: f64, b: f64) -> Result<Segment, QuadError> {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre)?;
    let mut resg = fc * WG[3];
    let mut resk = fc * WGK[7];
    let mut resabs = fc.abs() * WGK[7];
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(centre - dx)?;
        let f2 = f(centre + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let reskh = 0.5 * resk;
    let mut resasc = WGK[7] * (fc - reskh).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - reskh).abs() + (fv2[j] - reskh).abs());
    }
    let value = resk * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let mut error = ((resk - resg) * half).abs();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * resabs);
    }
    Ok(Segment {
        a,
        b,
        value,
        error,
        abs: resabs,
    })
}

fn neumaier_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Splits `[a, b]` at the breakpoints that fall strictly inside it.
fn split_at(a: f64, b: f64, breaks: &[f64]) -> Vec<(f64, f64)> {
    let mut pts: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|&p| p > a && p < b && p.is_finite())
        .collect();
    pts.sort_by(|x, y| x.total_cmp(y));
    pts.dedup();
    let mut out = Vec::with_capacity(pts.len() + 1);
    let mut left = a;
    for p in pts {
        if p - left > 0.0 {
            out.push((left, p));
            left = p;
        }
    }
    if b > left {
        out.push((left, b));
    }
    out
}

/// Removes the open windows `(c − η, c + η)` from a list of intervals.
fn exclude_windows(pieces: Vec<(f64, f64)>, centres: &[f64], eta: f64) -> Vec<(f64, f64)> {
    let mut current = pieces;
    for &c in centres {
        let (lo, hi) = (c - eta, c + eta);
        let mut next = Vec::with_capacity(current.len() + 1);
        for (a, b) in current {
            if hi <= a || lo >= b {
                next.push((a, b));
                continue;
            }
            if lo > a {
                next.push((a, lo));
            }
            if hi < b {
                next.push((hi, b));
            }
        }
        current = next;
    }
    current
}

/// Globally adaptive integration over a union of disjoint intervals.
fn adapt(
    f: &mut Integrand<'_>,
    pieces: &[(f64, f64)],
    cfg: &QuadratureConfig,
) -> Result<Estimate, QuadError> {
    let mut heap = BinaryHeap::with_capacity(cfg.max_subdivisions + pieces.len() + 1);
    let mut evaluations = 0usize;
    for &(a, b) in pieces {
        heap.push(kronrod15(f, a, b)?);
        evaluations += 15;
    }
    if heap.is_empty() {
        return Ok(Estimate {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        });
    }
    loop {
        let value = neumaier_sum(heap.iter().map(|s| s.value));
        let error: f64 = heap.iter().map(|s| s.error).sum();
        let abs: f64 = heap.iter().map(|s| s.abs).sum();
        let tol = cfg
            .abs_tol
            .max(cfg.rel_tol * value.abs())
            .max(100.0 * f64::EPSILON * abs);
        if error <= tol {
            let mut segs: Vec<Segment> = heap.into_vec();
            segs.sort_by(|x, y| x.a.total_cmp(&y.a));
            return Ok(Estimate {
                value: neumaier_sum(segs.iter().map(|s| s.value)),
                error,
                evaluations,
            });
        }
        if heap.len() >= cfg.max_subdivisions {
            return Err(QuadError::NotConverged {
                estimate: value,
                error,
            });
        }
        let worst = heap.pop().expect("heap is non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            return Err(QuadError::NotConverged {
                estimate: value,
                error,
            });
        }
        heap.push(kronrod15(f, worst.a, mid)?);
        heap.push(kronrod15(f, mid, worst.b)?);
        evaluations += 30;
    }
}

fn check_domain(a: f64, b: f64) -> Result<(), QuadError> {
    if !(a.is_finite() && b.is_finite() && a <= b) {
        return Err(QuadError::InvalidDomain { a, b });
    }
    Ok(())
}

/// Integrates `f` over `[a, b]`.
pub fn integrate_1d<F>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<Estimate, QuadError>
where
    F: Fn(f64) -> f64,
{
    integrate_1d_with_breaks(f, a, b, &[], cfg)
}

/// Integrates `f` over `[a, b]`, starting from a partition at `breaks`
/// (kinks, narrow peaks). Breakpoints outside the interval are ignored.
pub fn integrate_1d_with_breaks<F>(
    f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Estimate, QuadError>
where
    F: Fn(f64) -> f64,
{
    cfg.validate()?;
    check_domain(a, b)?;
    let mut checked = |x: f64| {
        let v = f(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(QuadError::NonFinite { x, y: None })
        }
    };
    adapt(&mut checked, &split_at(a, b, breaks), cfg)
}

/// Axis-aligned integration box `[x0, x1] × [y0, y1]`; `x` is the outer
/// variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    /// Outer range.
    pub x: (f64, f64),
    /// Inner range.
    pub y: (f64, f64),
}

impl Rect {
    /// Builds `[x0, x1] × [y0, y1]`.
    pub const fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        Self {
            x: (x0, x1),
            y: (y0, y1),
        }
    }
}

/// Inner-variable positions of a curve, as a function of the outer variable.
pub type CurveFn<'a> = &'a dyn Fn(f64) -> Vec<f64>;

/// A curve on which the raw integrand cannot be evaluated directly.
#[derive(Clone, Copy)]
pub enum SingularLocus<'a> {
    /// The integrand is a `0/0` quotient on the curve with a finite limit.
    /// Where `|offset(x, y)| < singular_window`, `replacement(x, y)` is used
    /// instead of the raw integrand.
    Removable {
        /// Locus positions `y₀(x)`, also used as inner breakpoints.
        curve: CurveFn<'a>,
        /// Signed distance from the locus in window units.
        offset: &'a dyn Fn(f64, f64) -> f64,
        /// Local series form valid inside the window.
        replacement: &'a dyn Fn(f64, f64) -> f64,
    },
    /// The integrand has a simple pole `~ 1/(y − y₀(x))` on the curve.
    SimplePole {
        /// Pole positions `y₀(x)`.
        curve: CurveFn<'a>,
        /// Must be `true`: the integral only exists as a principal value.
        principal_value: bool,
    },
}

/// Builder for iterated two-dimensional integrals.
#[derive(Clone)]
pub struct Integral2d<'a> {
    rect: Rect,
    outer_breaks: Vec<f64>,
    inner_breaks: Option<CurveFn<'a>>,
    locus: Option<SingularLocus<'a>>,
}

impl<'a> Integral2d<'a> {
    /// Integral over `rect` with no breakpoints and no singular locus.
    pub fn new(rect: Rect) -> Self {
        Self {
            rect,
            outer_breaks: Vec::new(),
            inner_breaks: None,
            locus: None,
        }
    }

    /// Fixed breakpoints for the outer variable.
    pub fn outer_breaks(mut self, breaks: &[f64]) -> Self {
        self.outer_breaks = breaks.to_vec();
        self
    }

    /// Breakpoints for the inner variable as a function of the outer one.
    pub fn inner_breaks(mut self, breaks: CurveFn<'a>) -> Self {
        self.inner_breaks = Some(breaks);
        self
    }

    /// Declares a singular locus.
    pub fn locus(mut self, locus: SingularLocus<'a>) -> Self {
        self.locus = Some(locus);
        self
    }

    /// Evaluates `∫dx ∫dy f(x, y)`.
    pub fn eval<F>(&self, f: F, cfg: &QuadratureConfig) -> Result<Estimate, QuadError>
    where
        F: Fn(f64, f64) -> f64,
    {
        cfg.validate()?;
        check_domain(self.rect.x.0, self.rect.x.1)?;
        check_domain(self.rect.y.0, self.rect.y.1)?;
        match self.locus {
            Some(SingularLocus::SimplePole {
                principal_value: false,
                ..
            }) => Err(QuadError::UnregularizedPole),
            Some(SingularLocus::SimplePole { curve, .. }) => {
                // Band exclusion is O(η); two Richardson steps in η remove
                // the linear term and estimate what is left.
                let eta = cfg.singular_window;
                let i1 = self.iterated(&f, cfg, Some((curve, eta)))?;
                let i2 = self.iterated(&f, cfg, Some((curve, 0.5 * eta)))?;
                let i3 = self.iterated(&f, cfg, Some((curve, 0.25 * eta)))?;
                let r1 = 2.0 * i2.value - i1.value;
                let r2 = 2.0 * i3.value - i2.value;
                Ok(Estimate {
                    value: r2,
                    error: (r2 - r1).abs() + i3.error + i2.error,
                    evaluations: i1.evaluations + i2.evaluations + i3.evaluations,
                })
            }
            _ => self.iterated(&f, cfg, None),
        }
    }

    fn iterated<F>(
        &self,
        f: &F,
        cfg: &QuadratureConfig,
        exclusion: Option<(CurveFn<'a>, f64)>,
    ) -> Result<Estimate, QuadError>
    where
        F: Fn(f64, f64) -> f64,
    {
        let (x0, x1) = self.rect.x;
        let (y0, y1) = self.rect.y;
        let span = (x1 - x0).max(f64::MIN_POSITIVE);
        let inner_cfg = QuadratureConfig {
            rel_tol: 0.1 * cfg.rel_tol,
            abs_tol: 0.1 * cfg.abs_tol / span,
            ..*cfg
        };
        let mut inner_evals = 0usize;
        let mut inner_err_max: f64 = 0.0;
        let window = cfg.singular_window;
        let mut outer = |x: f64| -> Result<f64, QuadError> {
            let mut breaks = match self.inner_breaks {
                Some(b) => b(x),
                None => Vec::new(),
            };
            let locus_curve = match (&self.locus, &exclusion) {
                (_, Some((curve, _))) => Some(curve(x)),
                (Some(SingularLocus::Removable { curve, .. }), None) => Some(curve(x)),
                _ => None,
            };
            if let Some(c) = &locus_curve {
                breaks.extend_from_slice(c);
            }
            let mut pieces = split_at(y0, y1, &breaks);
            if let (Some((_, eta)), Some(c)) = (&exclusion, &locus_curve) {
                pieces = exclude_windows(pieces, c, *eta);
            }
            let mut g = |y: f64| -> Result<f64, QuadError> {
                let v = match self.locus {
                    Some(SingularLocus::Removable {
                        offset,
                        replacement,
                        ..
                    }) if offset(x, y).abs() < window => replacement(x, y),
                    _ => f(x, y),
                };
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(QuadError::NonFinite { x, y: Some(y) })
                }
            };
            let est = adapt(&mut g, &pieces, &inner_cfg)?;
            inner_evals += est.evaluations;
            inner_err_max = inner_err_max.max(est.error);
            Ok(est.value)
        };
        let est = adapt(&mut outer, &split_at(x0, x1, &self.outer_breaks), cfg)?;
        Ok(Estimate {
            value: est.value,
            error: est.error + inner_err_max * span,
            evaluations: inner_evals,
        })
    }
}

/// Integrates `f(x, y)` over `rect`, honouring an optional singular locus.
pub fn integrate_2d<F>(
    f: F,
    rect: Rect,
    cfg: &QuadratureConfig,
    locus: Option<SingularLocus<'_>>,
) -> Result<Estimate, QuadError>
where
    F: Fn(f64, f64) -> f64,
{
    let mut plan = Integral2d::new(rect);
    if let Some(l) = locus {
        plan = plan.locus(l);
    }
    plan.eval(f, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use core::f64::consts::PI;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::one_d()
    }

    #[test]
    fn constant_over_full_period() {
        let est = integrate_1d(|_| 1.0, 0.0, 2.0 * PI, &cfg()).unwrap();
        assert!((est.value - 2.0 * PI).abs() < 1e-13);
    }

    #[test]
    fn cosine_over_full_period_vanishes() {
        let est = integrate_1d(|q: f64| q.cos(), -PI, PI, &cfg()).unwrap();
        assert!(est.value.abs() < 1e-12, "{}", est.value);
    }

    #[test]
    fn empty_interval_is_zero() {
        let est = integrate_1d(|x: f64| x.exp(), 1.0, 1.0, &cfg()).unwrap();
        assert_eq!(est.value, 0.0);
    }

    #[test]
    fn reversed_domain_is_rejected() {
        let err = integrate_1d(|x| x, 1.0, 0.0, &cfg()).unwrap_err();
        assert!(matches!(err, QuadError::InvalidDomain { .. }));
    }

    #[test]
    fn nan_reports_abscissa() {
        let err = integrate_1d(|x: f64| if x > 0.5 { f64::NAN } else { x }, 0.0, 1.0, &cfg())
            .unwrap_err();
        match err {
            QuadError::NonFinite { x, y: None } => assert!(x > 0.5),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn budget_exhaustion_carries_estimate() {
        let tight = QuadratureConfig {
            rel_tol: 1e-15,
            abs_tol: 0.0,
            max_subdivisions: 3,
            singular_window: 1e-3,
        };
        let err = integrate_1d(|x: f64| x.sqrt(), 0.0, 1.0, &tight).unwrap_err();
        match err {
            QuadError::NotConverged { estimate, error } => {
                assert!((estimate - 2.0 / 3.0).abs() < 1e-3);
                assert!(error > 0.0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn invalid_config_rejected() {
        let bad = QuadratureConfig {
            rel_tol: 0.0,
            ..cfg()
        };
        assert!(integrate_1d(|x| x, 0.0, 1.0, &bad).is_err());
        let bad = QuadratureConfig {
            max_subdivisions: 0,
            ..cfg()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn breakpoints_resolve_a_kink() {
        let f = |x: f64| (x - 0.3).abs();
        let est = integrate_1d_with_breaks(f, 0.0, 1.0, &[0.3], &cfg()).unwrap();
        assert!((est.value - (0.045 + 0.245)).abs() < 1e-14);
    }

    #[test]
    fn unit_square() {
        let est = integrate_2d(|_, _| 1.0, Rect::new(0.0, 1.0, 0.0, 1.0), &QuadratureConfig::two_d(), None)
            .unwrap();
        assert!((est.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pole_without_pv_flag_is_an_error() {
        let curve = |x: f64| vec![x];
        let locus = SingularLocus::SimplePole {
            curve: &curve,
            principal_value: false,
        };
        let err = integrate_2d(
            |x, y| 1.0 / (y - x),
            Rect::new(0.0, 1.0, 0.0, 1.0),
            &QuadratureConfig::two_d(),
            Some(locus),
        )
        .unwrap_err();
        assert_eq!(err, QuadError::UnregularizedPole);
    }

    #[test]
    fn principal_value_of_shifted_pole() {
        // PV ∫_0^2 dy e^y/(y − x) for x in [0.5, 1.5]; inner PV in closed form
        // is e^x [Ei(2 − x) − Ei(−x)], compared through a 1D reference.
        let curve = |x: f64| vec![x];
        let locus = SingularLocus::SimplePole {
            curve: &curve,
            principal_value: true,
        };
        let cfg2 = QuadratureConfig::two_d();
        let est = integrate_2d(
            |x, y: f64| y.exp() / (y - x),
            Rect::new(0.5, 1.5, 0.0, 2.0),
            &cfg2,
            Some(locus),
        )
        .unwrap();
        // Reference: subtract the pole analytically.
        let reference = integrate_1d(
            |x: f64| {
                let inner = integrate_1d(
                    |y: f64| {
                        if (y - x).abs() < 1e-12 {
                            x.exp()
                        } else {
                            (y.exp() - x.exp()) / (y - x)
                        }
                    },
                    0.0,
                    2.0,
                    &cfg(),
                )
                .unwrap()
                .value;
                inner + x.exp() * ((2.0 - x) / x).ln()
            },
            0.5,
            1.5,
            &cfg(),
        )
        .unwrap()
        .value;
        assert!((est.value - reference).abs() < 1e-6, "{} vs {}", est.value, reference);
    }
}
