//! General Dirichlet series `f(s) = sum a_n exp(-lambda_n s)` and their
//! typed Riesz means.
//!
//! The mean of order `k >= 0` at cutoff `x` is the strict-cutoff sum
//!
//! ```text
//! R_x^k(f)(s) = sum_{lambda_n < x} a_n exp(-lambda_n s) (1 - lambda_n / x)^k
//! ```
//!
//! `k = 0` recovers the bare partial sum; integer frequencies with
//! `k = 1` recover Cesaro averaging of a power series. An
//! [`AnalyticTarget`] bundles a series with what is known analytically
//! about its sum: a closed-form evaluation on the right half-plane, a
//! closed form on the boundary line, polynomial growth order, and the
//! boundary points where no value exists.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::frequency::{Frequency, DEFAULT_MAX_TERMS};
use crate::special;
use crate::util::KahanComplex;

pub type CoeffFn = Arc<dyn Fn(u64) -> Complex64 + Send + Sync>;
pub type EvalFn = Arc<dyn Fn(Complex64) -> Result<Complex64> + Send + Sync>;
pub type BoundaryFn = Arc<dyn Fn(f64) -> Result<Complex64> + Send + Sync>;

/// A general Dirichlet series: frequencies plus a coefficient rule.
#[derive(Clone)]
pub struct DirichletSeries {
    freq: Frequency,
    coeff: CoeffFn,
    name: String,
}

impl std::fmt::Debug for DirichletSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DirichletSeries").field("name", &self.name).finish()
    }
}

impl DirichletSeries {
    pub fn new(freq: Frequency, coeff: CoeffFn, name: impl Into<String>) -> Self {
        DirichletSeries { freq, coeff, name: name.into() }
    }

    pub fn freq(&self) -> &Frequency {
        &self.freq
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn coeff(&self, n: u64) -> Complex64 {
        (self.coeff)(n)
    }

    /// Partial sum of the first `n_terms` terms at `s`. An explicit
    /// frequency list caps the count at its length.
    pub fn eval_partial(&self, s: Complex64, n_terms: u64) -> Complex64 {
        let cap = match self.freq.kind() {
            crate::frequency::FrequencyKind::Explicit => {
                n_terms.min(self.freq.count_below(f64::INFINITY))
            }
            _ => n_terms,
        };
        let mut acc = KahanComplex::new();
        for n in 1..=cap {
            acc.add((self.coeff)(n) * (-(s * self.freq.lambda(n))).exp());
        }
        acc.value()
    }

    /// The typed Riesz mean `R_x^k(f)(s)` with strict cutoff
    /// `lambda_n < x`.
    ///
    /// Budget-checked before any work happens. The smooth weight is
    /// evaluated as `exp(k log1p(-lambda/x))` once `lambda/x` passes
    /// 0.9, avoiding the cancellation in `(1 - lambda/x)` when the
    /// cutoff is nearly reached.
    pub fn riesz_mean(&self, k: f64, x: f64, s: Complex64, max_terms: u64) -> Result<Complex64> {
        if !(k >= 0.0) {
            return Err(Error::domain(format!("Riesz order k must be >= 0, got {k}")));
        }
        if !(x > 0.0) || !x.is_finite() {
            return Err(Error::domain(format!("cutoff x must be positive and finite, got {x}")));
        }
        let required = self.freq.count_below(x);
        if required > max_terms {
            return Err(Error::TermBudgetExceeded { x, required, budget: max_terms });
        }
        // Integer k uses powi, which is both faster and exact for the
        // k = 0 / k = 1 fast paths.
        let int_k = if k.fract() == 0.0 && k <= 64.0 { Some(k as i32) } else { None };
        let mut acc = KahanComplex::new();
        for (n, lambda) in self.freq.iter_below(x) {
            let ratio = lambda / x;
            let weight = if k == 0.0 {
                1.0
            } else if ratio > 0.9 {
                (k * (-ratio).ln_1p()).exp()
            } else if let Some(ki) = int_k {
                (1.0 - ratio).powi(ki)
            } else {
                (1.0 - ratio).powf(k)
            };
            acc.add((self.coeff)(n) * (-(s * lambda)).exp() * weight);
        }
        Ok(acc.value())
    }

    /// The series of `f(s + s0)`: same frequencies, coefficients
    /// damped by `exp(-lambda_n s0)`.
    pub fn translate(&self, s0: Complex64) -> DirichletSeries {
        let freq = self.freq.clone();
        let freq_for_coeff = self.freq.clone();
        let inner = self.coeff.clone();
        DirichletSeries {
            freq,
            coeff: Arc::new(move |n| inner(n) * (-(s0 * freq_for_coeff.lambda(n))).exp()),
            name: format!("{}<<shift>>", self.name),
        }
    }
}

/// A series together with everything known about its analytic sum.
#[derive(Clone)]
pub struct AnalyticTarget {
    pub series: DirichletSeries,
    /// Polynomial growth order: the sum satisfies
    /// `|f(s)| <= C (1 + |s|)^order_ell` on `Re s > 0`.
    pub order_ell: f64,
    /// Closed-form evaluation on the open right half-plane, if known.
    pub eval: Option<EvalFn>,
    /// Closed form of the boundary function `f*(i tau)`, if known.
    pub boundary: Option<BoundaryFn>,
    /// Boundary ordinates `tau` where no boundary value exists.
    pub singular_points: Vec<f64>,
    /// Dominant oscillation scale of the boundary function, used to
    /// seed quadratures that integrate against it.
    pub boundary_osc_hint: f64,
}

impl std::fmt::Debug for AnalyticTarget {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AnalyticTarget")
            .field("series", &self.series.name)
            .field("order_ell", &self.order_ell)
            .finish()
    }
}

impl AnalyticTarget {
    /// The constant function 1: a single term at frequency 0.
    pub fn constant_one() -> Self {
        let freq = Frequency::explicit(vec![0.0]).expect("static frequency list");
        let series = DirichletSeries::new(
            freq,
            Arc::new(|_| Complex64::new(1.0, 0.0)),
            "const1",
        );
        AnalyticTarget {
            series,
            order_ell: 0.0,
            eval: Some(Arc::new(|_| Ok(Complex64::new(1.0, 0.0)))),
            boundary: Some(Arc::new(|_| Ok(Complex64::new(1.0, 0.0)))),
            singular_points: Vec::new(),
            boundary_osc_hint: 0.5,
        }
    }

    /// `zeta(1 + s)` as an ordinary Dirichlet series: `a_n = 1/n`,
    /// `lambda_n = log n`, growth order 1, pole on the boundary at 0.
    pub fn zeta_line() -> Self {
        let series = DirichletSeries::new(
            Frequency::log_integer(),
            Arc::new(|n| Complex64::new(1.0 / n as f64, 0.0)),
            "zeta-line",
        );
        AnalyticTarget {
            series,
            order_ell: 1.0,
            eval: Some(Arc::new(|s| special::zeta(s + 1.0, 1e-6))),
            boundary: Some(Arc::new(|tau| special::zeta(Complex64::new(1.0, tau), 1e-6))),
            singular_points: vec![0.0],
            boundary_osc_hint: 3.0,
        }
    }

    /// The eta function `sum (-1)^{n+1} n^{-s}`, entire, growth order
    /// declared 3/4.
    pub fn eta() -> Self {
        let series = DirichletSeries::new(
            Frequency::log_integer(),
            Arc::new(|n| {
                if n % 2 == 1 {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(-1.0, 0.0)
                }
            }),
            "eta",
        );
        AnalyticTarget {
            series,
            order_ell: 0.75,
            eval: Some(Arc::new(|s| Ok(special::eta(s)))),
            boundary: Some(Arc::new(|tau| Ok(special::eta(Complex64::new(0.0, tau))))),
            singular_points: Vec::new(),
            boundary_osc_hint: 2.0,
        }
    }

    /// Power-series case: `a_n = 1/n^2` on integer frequencies. Its
    /// boundary restriction is an absolutely convergent trigonometric
    /// series, summed directly as the reference.
    pub fn taylor_l2() -> Self {
        let series = DirichletSeries::new(
            Frequency::integer(),
            Arc::new(|n| Complex64::new(1.0 / (n as f64 * n as f64), 0.0)),
            "taylor-l2",
        );
        let direct = |s: Complex64| -> Result<Complex64> {
            if s.re < -1e-12 {
                return Err(Error::domain("taylor-l2 evaluation needs Re s >= 0"));
            }
            let mut acc = KahanComplex::new();
            for n in 1..=TAYLOR_DIRECT_TERMS {
                let nf = n as f64;
                let term = (-(s * (nf - 1.0))).exp() / (nf * nf);
                acc.add(term);
                // The exponential damping makes the tail negligible
                // long before the cap once Re s is positive.
                if s.re > 0.0 && term.norm() < 1e-18 {
                    break;
                }
            }
            Ok(acc.value())
        };
        AnalyticTarget {
            series,
            order_ell: 0.0,
            eval: Some(Arc::new(direct)),
            boundary: Some(Arc::new(move |tau| direct(Complex64::new(0.0, tau)))),
            singular_points: Vec::new(),
            boundary_osc_hint: 4.0,
        }
    }

    /// A finite Dirichlet polynomial with explicit frequencies; exact
    /// closed forms everywhere.
    pub fn polynomial(freqs: Vec<f64>, coeffs: Vec<Complex64>) -> Result<Self> {
        if freqs.len() != coeffs.len() {
            return Err(Error::domain(format!(
                "frequency/coefficient length mismatch: {} vs {}",
                freqs.len(),
                coeffs.len()
            )));
        }
        let osc = freqs.iter().cloned().fold(0.0f64, f64::max).max(0.5);
        let freq = Frequency::explicit(freqs.clone())?;
        let coeffs = Arc::new(coeffs);
        let coeffs_for_series = coeffs.clone();
        let series = DirichletSeries::new(
            freq,
            Arc::new(move |n| coeffs_for_series[(n - 1) as usize]),
            "polynomial",
        );
        let freqs = Arc::new(freqs);
        let eval_freqs = freqs.clone();
        let eval_coeffs = coeffs.clone();
        let eval = move |s: Complex64| -> Result<Complex64> {
            let mut acc = KahanComplex::new();
            for (lambda, a) in eval_freqs.iter().zip(eval_coeffs.iter()) {
                acc.add(a * (-(s * *lambda)).exp());
            }
            Ok(acc.value())
        };
        let boundary_eval = eval.clone();
        Ok(AnalyticTarget {
            series,
            order_ell: 0.0,
            eval: Some(Arc::new(eval)),
            boundary: Some(Arc::new(move |tau| boundary_eval(Complex64::new(0.0, tau)))),
            singular_points: Vec::new(),
            boundary_osc_hint: osc,
        })
    }

    /// The single-term series `exp(-lambda s)`.
    pub fn exponential(lambda: f64) -> Result<Self> {
        Self::polynomial(vec![lambda], vec![Complex64::new(1.0, 0.0)])
    }

    /// Look up a named built-in target.
    pub fn builtin(name: &str) -> Result<Self> {
        match name {
            "const1" => Ok(Self::constant_one()),
            "zeta-line" => Ok(Self::zeta_line()),
            "eta" => Ok(Self::eta()),
            "taylor-l2" => Ok(Self::taylor_l2()),
            other => Err(Error::UnknownTarget { name: other.to_string() }),
        }
    }

    /// Sampled growth ratio `|f(s)| / (1 + |s|)^ell` over a fixed grid
    /// on the right half-plane; a cheap estimate of the growth norm.
    pub fn growth_ratio_estimate(&self) -> Result<f64> {
        let eval = self.eval.as_ref().ok_or(Error::NoEvalRule)?;
        let mut sup: f64 = 0.0;
        for &sigma in &[0.1, 0.5, 1.0, 2.0, 5.0] {
            for i in 0..=20 {
                let t = -50.0 + 5.0 * i as f64;
                let s = Complex64::new(sigma, t);
                if self.singular_points.iter().any(|&p| (s - Complex64::new(0.0, p)).norm() < 0.3)
                {
                    continue;
                }
                let value = eval(s)?;
                sup = sup.max(value.norm() / (1.0 + s.norm()).powf(self.order_ell));
            }
        }
        Ok(sup)
    }
}

pub const TAYLOR_DIRECT_TERMS: u64 = 300_000;

/// Reference rule for a sweep.
#[derive(Debug, Clone, Copy)]
pub enum Reference {
    /// Use the target's boundary/eval closed form.
    ClosedForm,
    /// Compare against a long partial sum.
    PartialSum { n_terms: u64 },
    /// No reference; errors stay empty.
    None,
}

#[derive(Debug, Clone, Copy)]
pub struct SweepRecord {
    pub x: f64,
    pub point: Complex64,
    pub value: Complex64,
    pub reference: Option<Complex64>,
    pub abs_error: Option<f64>,
    /// Rounding-envelope estimate for the compensated sum.
    pub err_est: f64,
}

#[derive(Debug, Clone, Default)]
pub struct ConvergenceReport {
    /// Sorted by `x`, then by evaluation point.
    pub records: Vec<SweepRecord>,
    /// `(x, sup abs_error over points)`, sorted by `x`; present only
    /// when a reference was available.
    pub sup_error_per_x: Vec<(f64, f64)>,
}

impl ConvergenceReport {
    /// Number of adjacent increases in the per-x sup errors.
    pub fn monotonicity_violations(&self) -> usize {
        self.sup_error_per_x
            .windows(2)
            .filter(|w| w[1].1 > w[0].1)
            .count()
    }
}

/// Riesz means of a target over a grid of points and cutoffs, with
/// errors against the chosen reference.
pub fn riesz_sweep(
    target: &AnalyticTarget,
    k: f64,
    points: &[Complex64],
    xs: &[f64],
    reference: Reference,
) -> Result<ConvergenceReport> {
    use rayon::prelude::*;

    let mut xs = xs.to_vec();
    xs.sort_by(f64::total_cmp);
    let mut points = points.to_vec();
    points.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));

    // Resolve references once per point.
    let mut refs: Vec<Option<Complex64>> = Vec::with_capacity(points.len());
    for &p in &points {
        let value = match reference {
            Reference::None => None,
            Reference::PartialSum { n_terms } => Some(target.series.eval_partial(p, n_terms)),
            Reference::ClosedForm => Some(reference_value(target, p)?),
        };
        refs.push(value);
    }

    let jobs: Vec<(f64, Complex64, Option<Complex64>)> = xs
        .iter()
        .flat_map(|&x| points.iter().zip(refs.iter()).map(move |(&p, &r)| (x, p, r)))
        .collect();
    let records: Vec<SweepRecord> = jobs
        .par_iter()
        .map(|&(x, point, reference)| {
            let value = target.series.riesz_mean(k, x, point, DEFAULT_MAX_TERMS)?;
            let abs_error = reference.map(|r| (value - r).norm());
            // Crude rounding envelope: ~|value| worth of summands at
            // machine precision after compensation.
            let err_est = 4.0 * f64::EPSILON * value.norm().max(1.0);
            Ok(SweepRecord { x, point, value, reference, abs_error, err_est })
        })
        .collect::<Result<_>>()?;

    let mut sup_error_per_x = Vec::with_capacity(xs.len());
    if !matches!(reference, Reference::None) {
        for &x in &xs {
            let sup = records
                .iter()
                .filter(|r| r.x == x)
                .filter_map(|r| r.abs_error)
                .fold(0.0f64, f64::max);
            sup_error_per_x.push((x, sup));
        }
    }
    Ok(ConvergenceReport { records, sup_error_per_x })
}

fn reference_value(target: &AnalyticTarget, point: Complex64) -> Result<Complex64> {
    if point.re.abs() < 1e-14 {
        if let Some(boundary) = &target.boundary {
            return boundary(point.im);
        }
    }
    match &target.eval {
        Some(eval) if point.re > 0.0 => eval(point),
        _ => Err(Error::MissingReference),
    }
}

/// Default horizontal approach schedule `2^-3, ..., 2^-12`.
pub fn default_eps_schedule() -> Vec<f64> {
    (3..=12).map(|j| 0.5f64.powi(j)).collect()
}

#[derive(Debug, Clone, Copy)]
pub struct Extrapolation {
    pub value: Complex64,
    /// Whether successive extrapolants settled to the agreement
    /// threshold; a `false` is a usable value with a warning attached.
    pub converged: bool,
    pub last_delta: f64,
    /// True when the boundary closed form was returned directly.
    pub from_closed_form: bool,
}

// First-order elimination leaves an O(eps^2) residual, so with the
// default schedule the last extrapolants agree to ~1e-6 at best; the
// convergence bar sits just above that.
const EXTRAP_CONVERGED_REL: f64 = 1e-5;
const EXTRAP_DIVERGED_REL: f64 = 1e-3;

/// Boundary value `f*(i tau)` by closed form when available, otherwise
/// first-order Richardson extrapolation of `f(eps + i tau)` along the
/// schedule.
pub fn horizontal_limit(
    target: &AnalyticTarget,
    tau: f64,
    eps_schedule: &[f64],
) -> Result<Extrapolation> {
    if target
        .singular_points
        .iter()
        .any(|&p| (tau - p).abs() <= 1e-9 * (1.0 + p.abs()))
    {
        return Err(Error::NoEvalRule);
    }
    if let Some(boundary) = &target.boundary {
        return Ok(Extrapolation {
            value: boundary(tau)?,
            converged: true,
            last_delta: 0.0,
            from_closed_form: true,
        });
    }
    let eval = target.eval.as_ref().ok_or(Error::NoEvalRule)?;
    if eps_schedule.len() < 3 {
        return Err(Error::domain("extrapolation needs at least three epsilons"));
    }
    let mut samples = Vec::with_capacity(eps_schedule.len());
    for &eps in eps_schedule {
        samples.push((eps, eval(Complex64::new(eps, tau))?));
    }
    // First-order Richardson on consecutive pairs: eliminates the
    // linear term for any step ratio.
    let mut extrapolants = Vec::with_capacity(samples.len() - 1);
    for w in samples.windows(2) {
        let (e1, f1) = w[0];
        let (e2, f2) = w[1];
        extrapolants.push((f2 * e1 - f1 * e2) / (e1 - e2));
    }
    let last = *extrapolants.last().expect("schedule length checked");
    let prev = extrapolants[extrapolants.len() - 2];
    let delta = (last - prev).norm();
    let scale = last.norm().max(1.0);
    if delta > EXTRAP_DIVERGED_REL * scale {
        return Err(Error::ExtrapolationDiverged { last_delta: delta });
    }
    Ok(Extrapolation {
        value: last,
        converged: delta <= EXTRAP_CONVERGED_REL * scale,
        last_delta: delta,
        from_closed_form: false,
    })
}
