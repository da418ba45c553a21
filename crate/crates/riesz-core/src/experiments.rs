//! Report-producing experiments over the engine: kernel normalization
//! and tail-mass measurements, boundary-line convergence sweeps, a
//! Dini-type local integrability probe, localization tails of the
//! smoothed-kernel representation, and Monte-Carlo vertical limits
//! over random completely multiplicative characters.
//!
//! Every run is deterministic: identical configuration (seed included)
//! reproduces reports bit for bit, independent of the worker count.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernels::{self, KernelParams, SmoothedKernelGrid};
use crate::perron;
use crate::quadrature::{self, QuadratureSpec};
use crate::series::{self, AnalyticTarget, ConvergenceReport, Reference};
use crate::util::{KahanComplex, KahanSum};

/// Full description of one experiment run. The CLI reads these from
/// flat key/value files with flag overrides; library callers fill the
/// struct directly.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    /// Built-in target name; ignored when an inline polynomial is
    /// given through `freqs`/`coeffs`.
    pub target: String,
    pub freqs: Option<Vec<f64>>,
    pub coeffs: Option<Vec<Complex64>>,
    pub k: f64,
    pub ell: f64,
    /// Boundary interval `[a, b]` carrying the tau grid.
    pub interval: (f64, f64),
    pub tau_grid_size: usize,
    pub xs: Vec<f64>,
    pub delta: f64,
    pub seed: u64,
    pub quadrature: QuadratureSpec,
    pub output: Option<std::path::PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            target: "const1".to_string(),
            freqs: None,
            coeffs: None,
            k: 1.0,
            ell: 0.0,
            interval: (0.5, 5.0),
            tau_grid_size: 33,
            xs: vec![4.0, 6.0, 8.0, 10.0, 12.0, 14.0],
            delta: 0.5,
            seed: 7,
            quadrature: QuadratureSpec::default(),
            output: None,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.k > self.ell) {
            return Err(Error::domain(format!(
                "config needs k > ell, got k = {}, ell = {}",
                self.k, self.ell
            )));
        }
        if self.tau_grid_size < 2 {
            return Err(Error::domain(format!(
                "tau grid needs at least 2 points, got {}",
                self.tau_grid_size
            )));
        }
        if self.xs.is_empty() {
            return Err(Error::domain("xs list is empty".to_string()));
        }
        if self.xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::domain("xs must be strictly increasing".to_string()));
        }
        if !(self.interval.1 >= self.interval.0) {
            return Err(Error::domain(format!(
                "interval [{}, {}] is reversed",
                self.interval.0, self.interval.1
            )));
        }
        if !(self.delta > 0.0) {
            return Err(Error::domain(format!("delta must be positive, got {}", self.delta)));
        }
        Ok(())
    }

    /// The target this config names: an inline polynomial when both
    /// `freqs` and `coeffs` are set, a built-in otherwise.
    pub fn resolve_target(&self) -> Result<AnalyticTarget> {
        match (&self.freqs, &self.coeffs) {
            (Some(freqs), Some(coeffs)) => {
                AnalyticTarget::polynomial(freqs.clone(), coeffs.clone())
            }
            (None, None) => AnalyticTarget::builtin(&self.target),
            _ => Err(Error::domain(
                "inline targets need both freqs and coeffs".to_string(),
            )),
        }
    }

    /// Equally spaced points over `interval`, endpoints included.
    pub fn tau_grid(&self) -> Vec<f64> {
        let (a, b) = self.interval;
        let n = self.tau_grid_size;
        (0..n)
            .map(|j| a + (b - a) * j as f64 / (n - 1) as f64)
            .collect()
    }
}

/// Outcome of the kernel normalization check.
#[derive(Debug, Clone, Copy)]
pub struct FourierCheck {
    pub k: f64,
    pub value: Complex64,
    pub err_est: f64,
    /// `|value - 1|`.
    pub deviation: f64,
    pub window: f64,
    pub panels: usize,
}

/// `INT e^{iy} K^k(y) dy`, which equals 1 for every `k > 0`. A finite
/// window with one integration by parts at each end leaves a
/// remainder two powers below the endpoint kernel value.
pub fn kernel_fourier_check(k: f64, quad: &QuadratureSpec) -> Result<FourierCheck> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::domain(format!("kernel order must be positive, got {k}")));
    }
    let t_end = 3.0e3f64.min(quad.max_window).max(80.0);
    let count = ((2.0 * t_end / FRAC_PI_2).ceil() as usize).clamp(16, 400_000);
    let mut points = Vec::with_capacity(count + 1);
    for j in 0..count {
        points.push(-t_end + 2.0 * t_end * j as f64 / count as f64);
    }
    points.push(t_end);
    let inner = quadrature::integrate_with_breakpoints(
        |y| Complex64::cis(y) * kernels::riesz_kernel(k, y),
        &points,
        quad,
    )?;
    let edge_hi = kernels::riesz_kernel(k, t_end);
    let edge_lo = kernels::riesz_kernel(k, -t_end);
    let osc = Complex64::cis(t_end);
    let corr = Complex64::new(0.0, 1.0) * (osc * edge_hi - osc.conj() * edge_lo);
    let rem = 3.0 * (edge_hi.norm() + edge_lo.norm()) * (1.0 + k) / t_end;
    let value = inner.value + corr;
    Ok(FourierCheck {
        k,
        value,
        err_est: inner.err_est + rem,
        deviation: (value - Complex64::new(1.0, 0.0)).norm(),
        window: t_end,
        panels: inner.panels,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct TailMassRow {
    pub x: f64,
    /// Measured `INT_{|y| > delta} |R(x, y)| dy`.
    pub mass: f64,
    pub err_est: f64,
    /// `2 INT_{delta x}^{inf} (1 + t^2)^{-(1+k-ell)/2} dt`, the
    /// comparison integral whose constant multiple bounds the mass.
    pub analytic_bound: f64,
    /// `mass / analytic_bound`; bounded uniformly in `x`.
    pub ratio: f64,
}

#[derive(Debug, Clone)]
pub struct TailMassReport {
    pub k: f64,
    pub ell: f64,
    pub delta: f64,
    pub rows: Vec<TailMassRow>,
    pub strictly_decreasing: bool,
}

/// Mass of the smoothed kernel outside `[-delta, delta]` at each
/// height, with the scale-invariant comparison integral. The masses
/// shrink as the kernel concentrates with growing `x`.
pub fn kernel_tail_mass(k: f64, ell: f64, delta: f64, xs: &[f64]) -> Result<TailMassReport> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::domain(format!("delta must be positive, got {delta}")));
    }
    if xs.is_empty() || xs.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain("xs must be nonempty and strictly increasing".to_string()));
    }
    let spec = QuadratureSpec::default();
    let y_end = (delta + 40.0).max(60.0);
    let step = 0.05f64;
    let steps = ((y_end - delta) / step).ceil() as usize;
    let rows: Vec<TailMassRow> = xs
        .par_iter()
        .map(|&x| -> Result<TailMassRow> {
            let params = KernelParams::new(k, ell, x)?;
            let mut acc = KahanSum::new();
            let mut node_err = KahanSum::new();
            let mut prev = {
                let r = kernels::smoothed_kernel(&params, delta, &spec)?;
                node_err.add(r.err_est);
                r.value.norm()
            };
            let mut last = prev;
            for j in 1..=steps {
                let y = delta + step * j as f64;
                let r = kernels::smoothed_kernel(&params, y, &spec)?;
                node_err.add(r.err_est);
                last = r.value.norm();
                acc.add(0.5 * (prev + last) * step);
                prev = last;
            }
            // One side measured; conjugate symmetry doubles it.
            let mass = 2.0 * acc.value();
            let beyond = 2.0 * last * y_end / (k - ell);
            let err_est = 2.0 * node_err.value() * step + beyond;
            let analytic_bound = decay_tail_integral(1.0 + k - ell, delta * x);
            Ok(TailMassRow { x, mass, err_est, analytic_bound, ratio: mass / analytic_bound })
        })
        .collect::<Result<_>>()?;
    let strictly_decreasing = rows.windows(2).all(|w| w[1].mass < w[0].mass);
    Ok(TailMassReport { k, ell, delta, rows, strictly_decreasing })
}

/// `2 INT_A^inf (1 + t^2)^{-beta/2} dt` for `beta > 1`: quadrature on
/// `[A, 40A]` plus the pure power tail beyond.
fn decay_tail_integral(beta: f64, a: f64) -> f64 {
    let cut = 40.0 * a.max(1.0);
    let spec = QuadratureSpec::with_tols(1e-12, 1e-10);
    let finite = quadrature::integrate_finite(
        |t| Complex64::new((1.0 + t * t).powf(-0.5 * beta), 0.0),
        a,
        cut,
        &spec,
    )
    .map(|out| out.value.re)
    .unwrap_or(0.0);
    2.0 * (finite + cut.powf(1.0 - beta) / (beta - 1.0))
}

/// Riesz means of the configured target over the tau grid at each
/// cutoff, with errors against the closed-form boundary values.
pub fn boundary_sweep(config: &ExperimentConfig) -> Result<ConvergenceReport> {
    config.validate()?;
    let target = config.resolve_target()?;
    let points: Vec<Complex64> = config
        .tau_grid()
        .into_iter()
        .map(|tau| Complex64::new(0.0, tau))
        .collect();
    series::riesz_sweep(&target, config.k, &points, &config.xs, Reference::ClosedForm)
}

/// Running-sum cap past which the Dini integral is declared divergent.
pub const DINI_CAP: f64 = 1e4;

const DINI_MAX_SHELLS: usize = 200;

#[derive(Debug, Clone)]
pub struct DiniReport {
    /// Shell sum of the modulus integral; a lower bound when the scan
    /// stopped early.
    pub dini_integral: f64,
    pub err_est: f64,
    /// `(outer shell edge, shell contribution)`, outermost first.
    pub shells: Vec<(f64, f64)>,
    /// Running sum exceeded `DINI_CAP`.
    pub diverged: bool,
    /// Shell contributions decayed below the resolution floor.
    pub resolved: bool,
    /// `(x, |R_x(i tau) - f*(i tau)|)` along the requested cutoffs.
    pub riesz_errors: Vec<(f64, f64)>,
}

/// The local integrability test behind pointwise boundary summability:
///
/// ```text
/// INT_{-delta}^{delta} |f*(i(tau+y)) - f*(i tau)| / |y|^{1+k-ell} dy
/// ```
///
/// integrated over geometric shells toward the singularity, alongside
/// the Riesz-mean errors at `tau` whose convergence the finite
/// integral predicts.
pub fn dini_check(
    target: &AnalyticTarget,
    tau: f64,
    delta: f64,
    k: f64,
    ell: f64,
    xs: &[f64],
    quad: &QuadratureSpec,
) -> Result<DiniReport> {
    if !(k > ell) || !(ell >= 0.0) {
        return Err(Error::domain(format!(
            "dini check needs k > ell >= 0, got k = {k}, ell = {ell}"
        )));
    }
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::domain(format!("delta must be positive, got {delta}")));
    }
    let boundary = target.boundary.as_ref().ok_or(Error::NoBoundaryRule)?;
    let center = boundary(tau)?;
    let alpha = 1.0 + k - ell;

    // Shells closest to the singularity contribute tiny absolute
    // amounts that still decide convergence, so the absolute floor
    // has to sit well below the caller's.
    let shell_spec = QuadratureSpec::with_tols(quad.abs_tol.min(1e-13), quad.rel_tol.min(1e-8));
    let mut shells = Vec::new();
    let mut sum = KahanSum::new();
    let mut err = KahanSum::new();
    let mut diverged = false;
    let mut resolved = false;
    let mut prev_contribution = f64::INFINITY;
    for j in 0..DINI_MAX_SHELLS {
        let hi = delta * 0.5f64.powi(j as i32);
        let lo = 0.5 * hi;
        let mut failure: Option<Error> = None;
        let mut shell = 0.0;
        let mut shell_err = 0.0;
        for sign in [1.0f64, -1.0] {
            let out = quadrature::integrate_finite(
                |y| {
                    if failure.is_some() {
                        return Complex64::new(0.0, 0.0);
                    }
                    match boundary(tau + sign * y) {
                        Ok(v) => Complex64::new((v - center).norm() / y.powf(alpha), 0.0),
                        Err(e) => {
                            failure = Some(e);
                            Complex64::new(0.0, 0.0)
                        }
                    }
                },
                lo,
                hi,
                &shell_spec,
            )?;
            if let Some(e) = failure {
                return Err(e);
            }
            shell += out.value.re;
            shell_err += out.err_est;
        }
        sum.add(shell);
        err.add(shell_err);
        shells.push((hi, shell));
        if sum.value() > DINI_CAP {
            diverged = true;
            break;
        }
        if shell < 1e-12 * (1.0 + sum.value()) {
            // Remaining shells continue the observed geometric decay.
            let ratio = (shell / prev_contribution).min(0.9);
            err.add(shell * ratio / (1.0 - ratio) + shell);
            resolved = true;
            break;
        }
        prev_contribution = shell.max(1e-300);
    }

    let mut riesz_errors = Vec::with_capacity(xs.len());
    let point = Complex64::new(0.0, tau);
    for &x in xs {
        let mean = target
            .series
            .riesz_mean(k, x, point, crate::frequency::DEFAULT_MAX_TERMS)?;
        riesz_errors.push((x, (mean - center).norm()));
    }

    Ok(DiniReport {
        dini_integral: sum.value(),
        err_est: err.value(),
        shells,
        diverged,
        resolved,
        riesz_errors,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct LocalizationRow {
    pub x: f64,
    /// `|INT_{|y| >= delta} f*(iy) R(x, y) / (1+iy)^ell dy|`.
    pub tail: f64,
    pub err_est: f64,
}

#[derive(Debug, Clone)]
pub struct LocalizationReport {
    pub delta: f64,
    pub rows: Vec<LocalizationRow>,
    pub decreasing: bool,
}

/// Magnitude of the smoothed-kernel representation's tail beyond
/// `[-delta, delta]` at each height: the full-line integral (with its
/// closed-form beyond-window corrections) minus the near part. The
/// kernel's concentration drives these to zero, which is what makes
/// boundary summability a local property.
pub fn localization_tail(
    target: &AnalyticTarget,
    k: f64,
    ell: f64,
    delta: f64,
    xs: &[f64],
    quad: &QuadratureSpec,
) -> Result<LocalizationReport> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::domain(format!("delta must be positive, got {delta}")));
    }
    if xs.is_empty() || xs.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain("xs must be nonempty and strictly increasing".to_string()));
    }
    let boundary = target.boundary.as_ref().ok_or(Error::NoBoundaryRule)?;
    let rows: Vec<LocalizationRow> = xs
        .par_iter()
        .map(|&x| -> Result<LocalizationRow> {
            let params = KernelParams::new(k, ell, x)?;
            let extent = perron::outer_extent(quad);
            let grid = SmoothedKernelGrid::build(&params, extent, quad)?;
            let full = perron::boundary_integral_with_grid(target, &grid, quad)?;

            let omega = x + target.boundary_osc_hint.max(0.5);
            let step = FRAC_PI_2 / omega;
            let count = ((2.0 * delta / step).ceil() as usize).clamp(8, 400_000);
            let mut points = Vec::with_capacity(count + 1);
            for j in 0..count {
                points.push(-delta + 2.0 * delta * j as f64 / count as f64);
            }
            points.push(delta);
            let mut failure: Option<Error> = None;
            let near = quadrature::integrate_with_breakpoints(
                |y| {
                    if failure.is_some() {
                        return Complex64::new(0.0, 0.0);
                    }
                    match boundary(y) {
                        Ok(v) => {
                            let w = if ell == 0.0 {
                                Complex64::new(1.0, 0.0)
                            } else {
                                crate::util::principal_pow(Complex64::new(1.0, y), -ell)
                            };
                            v * w * grid.eval(y)
                        }
                        Err(e) => {
                            failure = Some(e);
                            Complex64::new(0.0, 0.0)
                        }
                    }
                },
                &points,
                quad,
            )?;
            if let Some(e) = failure {
                return Err(e);
            }
            let tail = (full.value - near.value).norm();
            Ok(LocalizationRow { x, tail, err_est: full.err_est + near.err_est })
        })
        .collect::<Result<_>>()?;
    let decreasing = rows.windows(2).all(|w| w[1].tail < w[0].tail);
    Ok(LocalizationReport { delta, rows, decreasing })
}

#[derive(Debug, Clone)]
pub struct TauOscillations {
    pub tau: f64,
    /// `(M, median over samples of osc(M))` for every schedule entry
    /// except the last (whose oscillation is zero by definition).
    pub median_osc: Vec<(u64, f64)>,
    /// Fraction of samples whose oscillation at the second-to-last
    /// schedule point improved on the first.
    pub improving_fraction: f64,
    /// `osc[sample][schedule index]`.
    pub per_sample: Vec<Vec<f64>>,
}

#[derive(Debug, Clone)]
pub struct VerticalMcReport {
    pub n_schedule: Vec<u64>,
    pub taus: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
    pub per_tau: Vec<TauOscillations>,
    /// Partial sums here cut off at `n <= N`, matching the vertical
    /// limit statement rather than the strict `<` of the Riesz-mean
    /// definition; for integer checkpoints the two differ by at most
    /// the single boundary term.
    pub cutoff_note: &'static str,
}

/// Tail oscillation of `S_N = SUM_{n<=N} a_n chi(n) n^{-i tau}` over
/// random completely multiplicative unit-modulus characters: chi is
/// drawn i.i.d. uniform on the circle at primes and extended by
/// multiplicativity. For square-summable coefficients the sums
/// converge for almost every character, so the per-sample oscillation
/// `osc(M) = max_{N >= M} |S_N - S_M|` should shrink along the
/// schedule for all but a vanishing fraction of draws.
pub fn vertical_limit_mc(
    coeffs: &(dyn Fn(u64) -> Complex64 + Sync),
    taus: &[f64],
    n_schedule: &[u64],
    samples: usize,
    seed: u64,
) -> Result<VerticalMcReport> {
    if n_schedule.is_empty() || n_schedule.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain(
            "schedule must be nonempty and strictly increasing".to_string(),
        ));
    }
    if n_schedule[0] == 0 {
        return Err(Error::domain("schedule entries must be >= 1".to_string()));
    }
    if samples == 0 {
        return Err(Error::domain("need at least one sample".to_string()));
    }
    if taus.is_empty() {
        return Err(Error::domain("need at least one tau".to_string()));
    }
    let n_max = *n_schedule.last().unwrap() as usize;
    let spf = smallest_prime_factors(n_max);
    let ln_n: Vec<f64> = (0..=n_max).map(|n| (n.max(1) as f64).ln()).collect();

    // osc[sample][tau][schedule index]
    let all: Vec<Vec<Vec<f64>>> = (0..samples)
        .into_par_iter()
        .map(|sample| {
            let mut rng = ChaCha8Rng::seed_from_u64(
                seed ^ (sample as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15),
            );
            let mut chi = vec![Complex64::new(0.0, 0.0); n_max + 1];
            chi[1] = Complex64::new(1.0, 0.0);
            for n in 2..=n_max {
                let p = spf[n];
                chi[n] = if p == n {
                    Complex64::cis(2.0 * PI * rng.random::<f64>())
                } else {
                    chi[n / p] * chi[p]
                };
            }
            taus.iter()
                .map(|&tau| oscillations(&chi, &ln_n, coeffs, tau, n_schedule))
                .collect()
        })
        .collect();

    let per_tau = taus
        .iter()
        .enumerate()
        .map(|(ti, &tau)| {
            let per_sample: Vec<Vec<f64>> =
                all.iter().map(|sample| sample[ti].clone()).collect();
            let mut median_osc = Vec::new();
            for (mi, &m) in n_schedule.iter().enumerate().take(n_schedule.len() - 1) {
                let mut column: Vec<f64> =
                    per_sample.iter().map(|osc| osc[mi]).collect();
                column.sort_by(f64::total_cmp);
                let mid = column.len() / 2;
                let median = if column.len() % 2 == 1 {
                    column[mid]
                } else {
                    0.5 * (column[mid - 1] + column[mid])
                };
                median_osc.push((m, median));
            }
            let improving = if n_schedule.len() >= 2 {
                let probe = n_schedule.len() - 2;
                per_sample.iter().filter(|osc| osc[probe] < osc[0]).count() as f64
                    / samples as f64
            } else {
                0.0
            };
            TauOscillations { tau, median_osc, improving_fraction: improving, per_sample }
        })
        .collect();

    Ok(VerticalMcReport {
        n_schedule: n_schedule.to_vec(),
        taus: taus.to_vec(),
        samples,
        seed,
        per_tau,
        cutoff_note: "partial sums include the boundary term n = N (cutoff <=)",
    })
}

/// Partial sums of `SUM a_n n^{-i tau}` with the trivial character at
/// the schedule checkpoints; the exceptional draw every almost-sure
/// statement excludes.
pub fn trivial_character_sums(
    coeffs: &dyn Fn(u64) -> Complex64,
    tau: f64,
    n_schedule: &[u64],
) -> Result<Vec<(u64, Complex64)>> {
    if n_schedule.is_empty() || n_schedule.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain(
            "schedule must be nonempty and strictly increasing".to_string(),
        ));
    }
    let mut out = Vec::with_capacity(n_schedule.len());
    let mut acc = KahanComplex::new();
    let mut next = 0usize;
    for n in 1..=*n_schedule.last().unwrap() {
        let rot = Complex64::cis(-tau * (n as f64).ln());
        acc.add(coeffs(n) * rot);
        if n == n_schedule[next] {
            out.push((n, acc.value()));
            next += 1;
        }
    }
    Ok(out)
}

fn oscillations(
    chi: &[Complex64],
    ln_n: &[f64],
    coeffs: &(dyn Fn(u64) -> Complex64 + Sync),
    tau: f64,
    n_schedule: &[u64],
) -> Vec<f64> {
    let mut acc = KahanComplex::new();
    let mut checkpoints = Vec::with_capacity(n_schedule.len());
    let mut next = 0usize;
    for n in 1..=*n_schedule.last().unwrap() as usize {
        let rot = Complex64::cis(-tau * ln_n[n]);
        acc.add(coeffs(n as u64) * chi[n] * rot);
        if n as u64 == n_schedule[next] {
            checkpoints.push(acc.value());
            next += 1;
        }
    }
    (0..checkpoints.len())
        .map(|i| {
            checkpoints[i..]
                .iter()
                .map(|s| (s - checkpoints[i]).norm())
                .fold(0.0f64, f64::max)
        })
        .collect()
}

/// Smallest prime factor for every index up to `n`; `spf[p] = p`
/// exactly at primes.
fn smallest_prime_factors(n: usize) -> Vec<usize> {
    let mut spf = vec![0usize; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = i;
                }
                match j.checked_add(i) {
                    Some(next) => j = next,
                    None => break,
                }
            }
        }
    }
    spf
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn c64(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn fourier_check_recovers_unit_mass() {
        let quad = QuadratureSpec::default();
        for k in [0.6, 1.0, 3.0] {
            let out = kernel_fourier_check(k, &quad).unwrap();
            assert!(
                out.deviation < 1e-6,
                "k = {k}: deviation {:.2e} (err est {:.2e})",
                out.deviation,
                out.err_est
            );
        }
    }

    #[test]
    fn fourier_check_rejects_bad_order() {
        assert!(kernel_fourier_check(0.0, &QuadratureSpec::default()).is_err());
    }

    #[test]
    fn tail_mass_shrinks_with_height() {
        let report = kernel_tail_mass(0.75, 0.0, 0.5, &[5.0, 10.0]).unwrap();
        assert!(report.strictly_decreasing, "masses {:?}", report.rows);
        for row in &report.rows {
            assert!(row.mass > 0.0 && row.mass.is_finite());
            assert!(row.ratio.is_finite() && row.ratio > 0.0);
        }
    }

    #[test]
    fn boundary_sweep_constant_is_exact() {
        let config = ExperimentConfig {
            target: "const1".to_string(),
            interval: (0.0, 1.0),
            tau_grid_size: 5,
            xs: vec![3.0, 5.0],
            ..ExperimentConfig::default()
        };
        let report = boundary_sweep(&config).unwrap();
        for (_, sup) in &report.sup_error_per_x {
            assert!(*sup < 1e-13, "sup {sup}");
        }
    }

    #[test]
    fn boundary_sweep_respects_weight_deficit_envelope() {
        // For a Dirichlet polynomial every term is summed once x
        // clears the largest frequency; the only error left is the
        // cutoff weight deficit, bounded by k lambda_max / x per term.
        let config = ExperimentConfig {
            freqs: Some(vec![0.0, 0.7, 2.1]),
            coeffs: Some(vec![c64(0.4, 0.1), c64(-0.3, 0.2), c64(0.25, -0.15)]),
            k: 1.25,
            interval: (-1.0, 1.0),
            tau_grid_size: 9,
            xs: vec![2100.0, 21000.0],
            ..ExperimentConfig::default()
        };
        let report = boundary_sweep(&config).unwrap();
        for &(x, sup) in &report.sup_error_per_x {
            let envelope = 10.0 * config.k * 2.1 / x;
            assert!(sup < envelope, "x = {x}: sup {sup:.3e} vs envelope {envelope:.3e}");
        }
    }

    #[test]
    fn boundary_sweep_rejects_bad_config() {
        let config = ExperimentConfig { xs: vec![5.0, 3.0], ..ExperimentConfig::default() };
        assert!(boundary_sweep(&config).is_err());
        let config = ExperimentConfig { tau_grid_size: 1, ..ExperimentConfig::default() };
        assert!(boundary_sweep(&config).is_err());
    }

    #[test]
    fn dini_constant_target_is_identically_zero() {
        let target = AnalyticTarget::constant_one();
        let report = dini_check(
            &target,
            0.0,
            0.5,
            1.0,
            0.0,
            &[3.0, 7.0],
            &QuadratureSpec::default(),
        )
        .unwrap();
        assert_eq!(report.dini_integral, 0.0);
        assert!(!report.diverged);
        for (_, err) in &report.riesz_errors {
            assert_eq!(*err, 0.0);
        }
    }

    #[test]
    fn dini_eta_is_finite_below_the_threshold() {
        // Analytic boundary data has modulus ~ c|y| at 0, so the
        // integral converges exactly when k - ell < 1.
        let target = AnalyticTarget::eta();
        let report = dini_check(
            &target,
            0.0,
            0.5,
            1.5,
            0.75,
            &[4.0, 8.0, 12.0],
            &QuadratureSpec::default(),
        )
        .unwrap();
        assert!(report.resolved, "shells did not resolve: {:?}", report.shells.last());
        assert!(!report.diverged);
        assert!(report.dini_integral.is_finite() && report.dini_integral > 0.0);
        let errs: Vec<f64> = report.riesz_errors.iter().map(|&(_, e)| e).collect();
        assert!(
            errs.last().unwrap() < errs.first().unwrap(),
            "riesz errors did not shrink: {errs:?}"
        );
    }

    #[test]
    fn dini_flags_synthetic_rough_modulus_as_divergent() {
        // Half-power modulus against the k = 2.5, ell = 0.75 weight:
        // the shell integrals grow geometrically toward 0 and must
        // trip the cap.
        let mut target = AnalyticTarget::constant_one();
        target.boundary = Some(Arc::new(|tau: f64| {
            Ok(Complex64::new(1.0 + tau.abs().sqrt(), 0.0))
        }));
        let report = dini_check(
            &target,
            0.0,
            0.5,
            2.5,
            0.75,
            &[],
            &QuadratureSpec::default(),
        )
        .unwrap();
        assert!(report.diverged, "integral {:.3e}", report.dini_integral);
        assert!(!report.resolved);
    }

    #[test]
    fn localization_tail_shrinks_for_constant_target() {
        let target = AnalyticTarget::constant_one();
        let report = localization_tail(
            &target,
            1.0,
            0.0,
            1.0,
            &[4.0, 8.0],
            &QuadratureSpec::default(),
        )
        .unwrap();
        assert!(report.decreasing, "tails {:?}", report.rows);
        // The full-line integral is 1 and the kernel concentrates, so
        // the tail is 1 minus the near mass, already small at x = 8.
        assert!(report.rows[1].tail < 0.15, "tail {:?}", report.rows[1]);
    }

    #[test]
    fn vertical_mc_is_deterministic_and_improves() {
        let coeffs = |n: u64| Complex64::new(1.0 / n as f64, 0.0);
        let schedule = [100, 1_000, 10_000];
        let a = vertical_limit_mc(&coeffs, &[0.0], &schedule, 8, 42).unwrap();
        let b = vertical_limit_mc(&coeffs, &[0.0], &schedule, 8, 42).unwrap();
        for (ta, tb) in a.per_tau.iter().zip(b.per_tau.iter()) {
            assert_eq!(ta.per_sample, tb.per_sample, "seeded runs must match bitwise");
        }
        assert!(a.per_tau[0].improving_fraction >= 0.75);
        let medians = &a.per_tau[0].median_osc;
        assert!(medians[1].1 < medians[0].1, "medians {medians:?}");
    }

    #[test]
    fn vertical_mc_zero_coefficients_are_silent() {
        let coeffs = |_: u64| Complex64::new(0.0, 0.0);
        let report = vertical_limit_mc(&coeffs, &[0.0, 1.0], &[10, 100], 3, 7).unwrap();
        for tau in &report.per_tau {
            for osc in &tau.per_sample {
                assert!(osc.iter().all(|&v| v == 0.0));
            }
        }
    }

    #[test]
    fn trivial_character_exhibits_harmonic_growth() {
        let coeffs = |n: u64| Complex64::new(1.0 / n as f64, 0.0);
        let sums = trivial_character_sums(&coeffs, 0.0, &[100, 10_000]).unwrap();
        let growth = (sums[1].1 - sums[0].1).norm();
        assert!(
            (growth - 100.0f64.ln()).abs() < 0.1,
            "growth {growth} vs ln 100 = {}",
            100.0f64.ln()
        );
    }

    #[test]
    fn mc_rejects_degenerate_inputs() {
        let coeffs = |n: u64| Complex64::new(1.0 / n as f64, 0.0);
        assert!(vertical_limit_mc(&coeffs, &[0.0], &[100, 100], 4, 1).is_err());
        assert!(vertical_limit_mc(&coeffs, &[0.0], &[100], 0, 1).is_err());
        assert!(vertical_limit_mc(&coeffs, &[], &[100], 4, 1).is_err());
    }
}
