//! Integral representations of Riesz means: the vertical-line
//! inversion integral, its boundary-line specialization, the smoothed
//! boundary-kernel form, the Poisson convolution identity on the
//! boundary, and the cone Laplace transform that recovers interior
//! values from means along a boundary ray.
//!
//! Every representation here computes the same object as the direct
//! weighted sum in `series`, which makes each one cross-checkable: the
//! tests drive polynomial targets through all routes and compare.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::frequency::{FrequencyKind, DEFAULT_MAX_TERMS};
use crate::kernels::{self, KernelParams, SmoothedKernelGrid};
use crate::quadrature::{self, Integral, QuadratureSpec, RealLineIntegral};
use crate::series::{self, AnalyticTarget};
use crate::special::{gamma_pos, upper_gamma};
use crate::util::principal_pow;

/// Riesz mean of `target` at `s0` as the inversion integral along the
/// vertical line `Re s = c`:
///
/// ```text
/// Gamma(1+k) x^{-k} / (2 pi i) INT_{c-i inf}^{c+i inf}
///     f(s + s0) s^{-(1+k)} e^{xs} ds
/// ```
///
/// The value is independent of `c > 0`; numerically, moderate `c`
/// keeps the `e^{xc}` prefactor and the line integral's cancellation
/// both tame.
pub fn perron_line(
    target: &AnalyticTarget,
    k: f64,
    x: f64,
    s0: Complex64,
    c: f64,
    quad: &QuadratureSpec,
) -> Result<RealLineIntegral> {
    let ell = target.order_ell;
    if !(k > ell) {
        return Err(Error::domain(format!(
            "line representation needs k > growth order, got k = {k}, ell = {ell}"
        )));
    }
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("cutoff x must be positive, got {x}")));
    }
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::domain(format!("line abscissa c must be positive, got {c}")));
    }
    if s0.re < 0.0 {
        return Err(Error::domain(format!(
            "evaluation point needs Re s0 >= 0, got {s0}"
        )));
    }
    let eval = target.eval.as_ref().ok_or(Error::NoEvalRule)?;

    let mut line_spec = *quad;
    line_spec.tail_exponent = Some(k - ell);
    line_spec.osc_hint = Some(x);

    let mut failure: Option<Error> = None;
    let g = |t: f64| -> Complex64 {
        if failure.is_some() {
            return Complex64::new(0.0, 0.0);
        }
        match eval(Complex64::new(c, t) + s0) {
            Ok(fv) => {
                fv * principal_pow(Complex64::new(c, t), -(1.0 + k)) * Complex64::cis(x * t)
            }
            Err(e) => {
                failure = Some(e);
                Complex64::new(0.0, 0.0)
            }
        }
    };
    let out = quadrature::integrate_real_line(g, &line_spec)?;
    if let Some(e) = failure {
        return Err(e);
    }

    let pref = gamma_pos(1.0 + k) * x.powf(-k) * (x * c).exp() / (2.0 * PI);
    Ok(RealLineIntegral {
        value: out.value * pref,
        err_est: out.err_est * pref,
        window: out.window,
        tail_bound: out.tail_bound * pref,
    })
}

/// The `c = 1/x` specialization of [`perron_line`] at `s0 = i tau`:
/// the prefactor and the vertical-line power collapse into the scaled
/// Riesz kernel, leaving
///
/// ```text
/// INT f(1/x + i(t + tau)) e^{ixt} K_x^k(t) dt.
/// ```
pub fn perron_boundary(
    target: &AnalyticTarget,
    k: f64,
    x: f64,
    tau: f64,
    quad: &QuadratureSpec,
) -> Result<RealLineIntegral> {
    let ell = target.order_ell;
    if !(k > ell) {
        return Err(Error::domain(format!(
            "boundary representation needs k > growth order, got k = {k}, ell = {ell}"
        )));
    }
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("cutoff x must be positive, got {x}")));
    }
    let eval = target.eval.as_ref().ok_or(Error::NoEvalRule)?;
    let u = 1.0 / x;

    let mut line_spec = *quad;
    line_spec.tail_exponent = Some(k - ell);
    line_spec.osc_hint = Some(x);

    let mut failure: Option<Error> = None;
    let g = |t: f64| -> Complex64 {
        if failure.is_some() {
            return Complex64::new(0.0, 0.0);
        }
        match eval(Complex64::new(u, t + tau)) {
            Ok(fv) => fv * Complex64::cis(x * t) * kernels::scaled_riesz_kernel(k, x, t),
            Err(e) => {
                failure = Some(e);
                Complex64::new(0.0, 0.0)
            }
        }
    };
    let out = quadrature::integrate_real_line(g, &line_spec)?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(out)
}

// Half-extent of the outer boundary-kernel integral. Beyond it the
// endpoint corrections (finite targets) or the decay bound (general
// targets) account for the rest of the line.
const OUTER_EXTENT: f64 = 220.0;
// Finite targets with more terms than this are treated as general:
// per-term endpoint corrections stop being worth their cost.
const CORRECTION_TERM_CAP: u64 = 64;

/// Riesz mean of `target` at `0` as the boundary-kernel integral
///
/// ```text
/// INT f*(iy) / (1 + iy)^ell  R(x, y) dy
/// ```
///
/// with `R` the Poisson-smoothed composite kernel. Builds a kernel
/// grid spanning the outer window and delegates to
/// [`boundary_integral_with_grid`]; callers evaluating many targets at
/// one `(k, ell, x)` should build the grid once themselves.
pub fn boundary_integral(
    target: &AnalyticTarget,
    k: f64,
    x: f64,
    quad: &QuadratureSpec,
) -> Result<RealLineIntegral> {
    let params = KernelParams::new(k, target.order_ell, x)?;
    let grid = SmoothedKernelGrid::build(&params, outer_extent(quad), quad)?;
    boundary_integral_with_grid(target, &grid, quad)
}

/// Half-extent a boundary-kernel grid should span under `quad`.
pub(crate) fn outer_extent(quad: &QuadratureSpec) -> f64 {
    OUTER_EXTENT.min(quad.max_window).max(40.0)
}

/// [`boundary_integral`] against a prebuilt kernel grid.
pub fn boundary_integral_with_grid(
    target: &AnalyticTarget,
    grid: &SmoothedKernelGrid,
    quad: &QuadratureSpec,
) -> Result<RealLineIntegral> {
    let params = *grid.params();
    let (k, ell, x) = (params.k(), params.ell(), params.x());
    if (target.order_ell - ell).abs() > 1e-12 {
        return Err(Error::domain(format!(
            "kernel grid was built for growth order {ell}, target has {}",
            target.order_ell
        )));
    }
    if target.boundary.is_none() && target.eval.is_none() {
        return Err(Error::NoBoundaryRule);
    }
    let y_max = grid.y_max();
    let eps = series::default_eps_schedule();

    // Boundary values: closed form when present, extrapolation from
    // the right half-plane otherwise. The largest extrapolation delta
    // seen is weighted by the kernel's L1 mass into the error budget.
    let mut unc_max = 0.0f64;
    let mut failure: Option<Error> = None;
    let boundary_at = |y: f64, unc: &mut f64| -> Result<Complex64> {
        if let Some(bf) = &target.boundary {
            bf(y)
        } else {
            let e = series::horizontal_limit(target, y, &eps)?;
            *unc = unc.max(e.last_delta);
            Ok(e.value)
        }
    };
    let weight_at = |y: f64| -> Complex64 {
        if ell == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            principal_pow(Complex64::new(1.0, y), -ell)
        }
    };

    // Zero-frequency boundary component. The kernel's Poisson wings
    // decay like 1/y^2 without oscillating, so a constant component of
    // the boundary data leaves real mass beyond any finite window. It
    // never needs quadrature at all: the kernel integrates against the
    // ell-weight to exactly one over the whole line (the weight is the
    // boundary trace of the function the Poisson identity reproduces),
    // so that component is split off and added back in closed form.
    let freq = target.series.freq();
    let has_first = match freq.kind() {
        FrequencyKind::Explicit => freq.count_below(f64::INFINITY) >= 1,
        _ => true,
    };
    let a0 = if has_first && freq.lambda(1).abs() < 1e-12 {
        target.series.coeff(1)
    } else {
        Complex64::new(0.0, 0.0)
    };

    let g = |y: f64| -> Complex64 {
        if failure.is_some() {
            return Complex64::new(0.0, 0.0);
        }
        match boundary_at(y, &mut unc_max) {
            Ok(bv) => (bv - a0) * weight_at(y) * grid.eval(y),
            Err(e) => {
                failure = Some(e);
                Complex64::new(0.0, 0.0)
            }
        }
    };

    // Seed the outer partition at the fastest beat between the kernel
    // carrier and the boundary oscillation.
    let omega = x + target.boundary_osc_hint.max(0.5);
    let step = FRAC_PI_2 / omega;
    let count = ((2.0 * y_max / step).ceil() as usize).clamp(16, 400_000);
    let points: Vec<f64> = (0..count)
        .map(|i| -y_max + 2.0 * y_max * i as f64 / count as f64)
        .chain(std::iter::once(y_max))
        .collect();
    let finite = quadrature::integrate_with_breakpoints(g, &points, quad)?;
    if let Some(e) = failure {
        return Err(e);
    }

    let mut value = a0 + finite.value;
    let mut err = finite.err_est;
    let mut tail_bound = 0.0f64;

    // Past the window the kernel splits into a carrier part riding
    // e^{ixy} with power-law decay and the non-oscillating Poisson
    // wing, wing_mass * P_u(y); each needs its own tail treatment.
    let p_edge = kernels::poisson(1.0 / x, y_max);
    let wing = grid.wing_mass() * p_edge;
    err += grid.wing_err() * p_edge * 4.0 * y_max;

    let terms = explicit_terms(target);
    if let Some(terms) = &terms {
        // Finite boundary sum: past the window each remaining term
        // beats against the carrier at frequency x - lambda and
        // against the wing at frequency -lambda, so one integration
        // by parts per component replaces the discarded tails with
        // closed endpoint corrections plus second-order remainders.
        // Terms whose beat is too slow for that get the exact route
        // below instead.
        let r_hi = grid.eval(y_max) - wing;
        let r_lo = grid.eval(-y_max) - wing;
        let w_hi = weight_at(y_max);
        let w_lo = weight_at(-y_max);
        for &(lambda, a) in terms {
            if lambda.abs() < 1e-12 || a.norm() == 0.0 {
                continue;
            }
            let omega_j = x - lambda;
            if omega_j.abs() < 0.8 || lambda < 0.4 {
                // Slow beat against the carrier or the wing: endpoint
                // corrections lose their powers of the frequency. But
                // a single exponential against the weighted kernel
                // has a closed full-line integral: e^(-lambda/x)
                // times the kernel transform at (x - lambda)/x, which
                // collapses to the bare Riesz weight (1 - lambda/x)^k
                // (zero past the cutoff). So this term's discarded
                // tail is that exact total minus its window part,
                // quadratured over the same grid so that node errors
                // cancel against the joint window integral.
                let exact = if lambda < x { (1.0 - lambda / x).powf(k) } else { 0.0 };
                let beat = x + lambda + 1.0;
                let step_j = FRAC_PI_2 / beat;
                let count_j = ((2.0 * y_max / step_j).ceil() as usize).clamp(16, 400_000);
                let points_j: Vec<f64> = (0..count_j)
                    .map(|i| -y_max + 2.0 * y_max * i as f64 / count_j as f64)
                    .chain(std::iter::once(y_max))
                    .collect();
                let win = quadrature::integrate_with_breakpoints(
                    |y| Complex64::cis(-lambda * y) * weight_at(y) * grid.eval(y),
                    &points_j,
                    quad,
                )?;
                value += a * (Complex64::new(exact, 0.0) - win.value);
                err += a.norm() * win.err_est;
                continue;
            }
            let rot_hi = Complex64::cis(-lambda * y_max);
            let rot_lo = Complex64::cis(lambda * y_max);
            let gj_hi = a * rot_hi * w_hi * r_hi;
            let gj_lo = a * rot_lo * w_lo * r_lo;
            value += (gj_hi - gj_lo) * Complex64::new(0.0, 1.0 / omega_j);
            tail_bound += 2.0 * (gj_hi.norm() + gj_lo.norm()) * (1.0 + k)
                / (y_max * omega_j * omega_j);
            let hj_hi = a * rot_hi * w_hi * wing;
            let hj_lo = a * rot_lo * w_lo * wing;
            value += (hj_lo - hj_hi) * Complex64::new(0.0, 1.0 / lambda);
            // Second-order remainder, plus slack for the moment
            // expansion behind the pointwise wing model.
            tail_bound += (hj_hi.norm() + hj_lo.norm())
                * (2.0 * (2.0 + ell) / (y_max * lambda * lambda) + 0.25 / lambda);
        }
    } else {
        // General target: bound the discarded tails by extending the
        // observed edge amplitude along the kernel's decay.
        let edge = |y: f64, unc: &mut f64| -> Result<f64> {
            Ok(((boundary_at(y, unc)? - a0) * weight_at(y) * grid.eval(y)).norm())
        };
        tail_bound =
            (edge(y_max, &mut unc_max)? + edge(-y_max, &mut unc_max)?) * y_max / (k - ell);
    }
    err += tail_bound;

    // Grid-induced error: node and interpolation residuals weighted by
    // the reduced boundary amplitude over the window. The split-off
    // component bypasses the grid entirely, so it contributes nothing
    // here.
    let mut b_peak = 0.0f64;
    for j in 0..=6 {
        let y = -y_max + y_max * j as f64 / 3.0;
        b_peak = b_peak.max(((boundary_at(y, &mut unc_max)? - a0) * weight_at(y)).norm());
    }
    err += (grid.node_err() + grid.interp_err()) * b_peak * 2.0 * y_max;
    err += unc_max * grid.l1_estimate();

    Ok(RealLineIntegral { value, err_est: err, window: y_max, tail_bound })
}

/// The finite frequency/coefficient list of a target whose series is
/// an explicit polynomial, when short enough for per-term tail work.
fn explicit_terms(target: &AnalyticTarget) -> Option<Vec<(f64, Complex64)>> {
    let freq = target.series.freq();
    if freq.kind() != FrequencyKind::Explicit {
        return None;
    }
    let count = freq.count_below(f64::INFINITY);
    if count == 0 || count > CORRECTION_TERM_CAP {
        return None;
    }
    Some((1..=count).map(|n| (freq.lambda(n), target.series.coeff(n))).collect())
}

/// Residual of the boundary Poisson identity
///
/// ```text
/// | f(u+it)/(1+u+it)^ell - INT f*(iy)/(1+iy)^ell P_u(t-y) dy |
/// ```
///
/// which vanishes for every target in the growth class. The window
/// truncation of the convolution side is honest but slow to shrink
/// for non-oscillating boundary data; pick `quad.max_window` to taste.
pub fn convolution_residual(
    target: &AnalyticTarget,
    u: f64,
    t: f64,
    quad: &QuadratureSpec,
) -> Result<f64> {
    if !(u > 0.0) || !u.is_finite() {
        return Err(Error::domain(format!("interior abscissa u must be positive, got {u}")));
    }
    let ell = target.order_ell;
    let eval = target.eval.as_ref().ok_or(Error::NoEvalRule)?;
    if target.boundary.is_none() && target.eval.is_none() {
        return Err(Error::NoBoundaryRule);
    }
    let eps = series::default_eps_schedule();

    let lhs_weight = if ell == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        principal_pow(Complex64::new(1.0 + u, t), -ell)
    };
    let lhs = eval(Complex64::new(u, t))? * lhs_weight;

    let mut conv_spec = *quad;
    conv_spec.tail_exponent = Some(1.0);
    conv_spec.osc_hint = Some(target.boundary_osc_hint.max(0.5));

    let mut failure: Option<Error> = None;
    let g = |y: f64| -> Complex64 {
        if failure.is_some() {
            return Complex64::new(0.0, 0.0);
        }
        let bv = if let Some(bf) = &target.boundary {
            bf(y)
        } else {
            series::horizontal_limit(target, y, &eps).map(|e| e.value)
        };
        match bv {
            Ok(b) => {
                let weight = if ell == 0.0 {
                    Complex64::new(1.0, 0.0)
                } else {
                    principal_pow(Complex64::new(1.0, y), -ell)
                };
                b * weight * kernels::poisson(u, t - y)
            }
            Err(e) => {
                failure = Some(e);
                Complex64::new(0.0, 0.0)
            }
        }
    };
    let rhs = quadrature::integrate_real_line(g, &conv_spec)?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok((lhs - rhs.value).norm())
}

// Inner-mean memo grid step for targets whose term count grows
// exponentially along the ray.
const CONE_GRID_STEP: f64 = 0.05;

/// Interior value of `target` at `iy + w` recovered from Riesz means
/// along the boundary ray:
///
/// ```text
/// w^{k+1} / Gamma(1+k) INT_0^{t_max} t^k R_t(iy) e^{-wt} dt
/// ```
///
/// plus the closed-form continuation of the integrand's tail under a
/// frozen `R`, so a constant mean recovers its value exactly for any
/// `t_max`. The residual tail (how far `R_t` may drift from its end
/// value) lands in `err_est`.
pub fn cone_laplace(
    target: &AnalyticTarget,
    k: f64,
    y: f64,
    w: Complex64,
    t_max: f64,
    quad: &QuadratureSpec,
) -> Result<Integral> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::domain(format!("cone order k must be positive, got {k}")));
    }
    if !(w.re > 0.0) || !w.is_finite() {
        return Err(Error::domain(format!("cone offset needs Re w > 0, got {w}")));
    }
    if !(t_max > 0.0) || !t_max.is_finite() {
        return Err(Error::domain(format!("ray length t_max must be positive, got {t_max}")));
    }
    let s_b = Complex64::new(0.0, y);
    let series = &target.series;

    // Inner means: exponential-cost frequencies get the memo grid with
    // linear interpolation; polynomial-cost ones are evaluated exactly
    // at every quadrature point, which keeps the constant-mean case
    // exact to quadrature precision.
    let memo: Option<(Vec<Complex64>, f64)> = if series.freq().kind() == FrequencyKind::LogInteger
    {
        let n = ((t_max / CONE_GRID_STEP).ceil() as usize).max(4);
        let step = t_max / n as f64;
        let mut nodes = Vec::with_capacity(n + 1);
        // Right-limit at the ray's foot: only frequencies at exactly 0
        // contribute, with full weight.
        nodes.push(series.riesz_mean(k, 1e-12, s_b, DEFAULT_MAX_TERMS)?);
        for j in 1..=n {
            nodes.push(series.riesz_mean(k, j as f64 * step, s_b, DEFAULT_MAX_TERMS)?);
        }
        Some((nodes, step))
    } else {
        None
    };

    let mut failure: Option<Error> = None;
    let mut max_mean = 0.0f64;
    let mut r_at = |t: f64, failure: &mut Option<Error>| -> Complex64 {
        let v = if let Some((nodes, step)) = &memo {
            let pos = t / step;
            let j = (pos.floor() as usize).min(nodes.len() - 2);
            let frac = pos - j as f64;
            nodes[j] * (1.0 - frac) + nodes[j + 1] * frac
        } else {
            match series.riesz_mean(k, t.max(1e-12), s_b, DEFAULT_MAX_TERMS) {
                Ok(v) => v,
                Err(e) => {
                    *failure = Some(e);
                    Complex64::new(0.0, 0.0)
                }
            }
        };
        max_mean = max_mean.max(v.norm());
        v
    };

    let points = cone_breakpoints(series, t_max, memo.as_ref().map(|(_, s)| *s));
    let g = |t: f64| -> Complex64 {
        r_at(t, &mut failure) * t.powf(k) * (-(w * t)).exp()
    };
    let inner = quadrature::integrate_with_breakpoints(g, &points, quad)?;
    if let Some(e) = failure {
        return Err(e);
    }

    let gamma = gamma_pos(1.0 + k);
    let pref = principal_pow(w, 1.0 + k) / gamma;
    let r_end = r_at(t_max, &mut failure);
    if let Some(e) = failure {
        return Err(e);
    }
    // Tail under frozen R: w^{k+1}/Gamma * R_end * Gamma(1+k, w t)/w^{k+1}.
    let tail_correction = r_end * upper_gamma(1.0 + k, w * t_max) / gamma;
    let value = pref * inner.value + tail_correction;

    // |R_t - R_end| <= 2 max|R| is all we claim beyond the ray.
    let cone_factor = (w.norm() / w.re).powf(1.0 + k);
    let tail_mass = upper_gamma(1.0 + k, Complex64::new(w.re * t_max, 0.0)).re / gamma;
    let mut err = inner.err_est * pref.norm() + 2.0 * max_mean * cone_factor * tail_mass;
    if let Some((nodes, _)) = &memo {
        // Linear-interpolation residual: the second difference along
        // the memo grid already carries the h^2 factor.
        let mut d2 = 0.0f64;
        for win in nodes.windows(3) {
            d2 = d2.max((win[2] - win[1] * 2.0 + win[0]).norm());
        }
        err += 0.125 * d2 * cone_factor;
    }

    Ok(Integral { value, err_est: err, panels: inner.panels, min_width: inner.min_width })
}

/// Partition of `[0, t_max]` for the ray integral: memo nodes when a
/// memo grid exists, otherwise the target's own frequencies (kinks of
/// `R_t`) plus a geometric opening for the `t^k` corner.
fn cone_breakpoints(
    series: &series::DirichletSeries,
    t_max: f64,
    memo_step: Option<f64>,
) -> Vec<f64> {
    let mut pts = vec![0.0];
    if let Some(step) = memo_step {
        let n = (t_max / step).round() as usize;
        for j in 1..n {
            pts.push(j as f64 * step);
        }
    } else {
        for v in [1e-3, 1e-2, 0.1] {
            if v < t_max {
                pts.push(v);
            }
        }
        let kinks = series.freq().count_below(t_max).min(4096);
        for n in 1..=kinks {
            let lambda = series.freq().lambda(n);
            if lambda > 0.0 && lambda < t_max {
                pts.push(lambda);
            }
        }
        let coarse = (t_max / 0.25).ceil() as usize;
        for j in 1..coarse {
            pts.push(j as f64 * 0.25);
        }
        pts.sort_by(f64::total_cmp);
        pts.dedup_by(|a, b| (*a - *b).abs() < 1e-12 * (1.0 + b.abs()));
    }
    pts.push(t_max);
    pts
}
