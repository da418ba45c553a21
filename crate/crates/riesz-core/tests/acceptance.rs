//! Release gate: twelve go/no-go checks over the whole engine, each
//! printed as a single pass/fail line with its runtime against a hard
//! budget. Exit status is nonzero if anything fails, so CI can run
//! this binary directly.
//!
//! Comparison thresholds marked `FIRST_RUN` are values measured on the
//! first calibrated run of this suite on the reference setup; the
//! checks allow 2x slack against them to absorb platform noise while
//! still catching regressions.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use riesz_core::experiments::{
    self, kernel_fourier_check, kernel_tail_mass, trivial_character_sums, vertical_limit_mc,
};
use riesz_core::kernels::{kernel_envelope, poisson, riesz_kernel, scaled_riesz_kernel, smoothed_kernel};
use riesz_core::perron::{
    boundary_integral_with_grid, cone_laplace, convolution_residual, perron_boundary, perron_line,
};
use riesz_core::quadrature::integrate_finite;
use riesz_core::{
    special, AnalyticTarget, DirichletSeries, ExperimentConfig, Frequency, KernelParams,
    QuadratureSpec, SmoothedKernelGrid, DEFAULT_MAX_TERMS,
};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::Instant;

// Measured on the first calibrated run; asserted with 2x slack.
const ZETA_SUP_X14_FIRST_RUN: f64 = 3.441e-1;
const ETA_SUP_X14_FIRST_RUN: f64 = 1.656e-2;
const LOCALIZATION_TAIL_X20_FIRST_RUN: f64 = 1.237e-2;

type Check = (&'static str, f64, fn() -> Result<String, String>);

fn main() {
    let checks: Vec<Check> = vec![
        ("kernel Fourier normalization", 1.0, c01_fourier_normalization),
        ("route equivalence on random polynomials", 30.0, c02_route_equivalence),
        ("Poisson convolution residuals", 10.0, c03_convolution_residuals),
        ("zeta boundary sweep converges", 300.0, c04_zeta_sweep),
        ("eta boundary sweeps", 300.0, c05_eta_sweeps),
        ("square-summable Taylor boundary error", 10.0, c06_taylor_l2_sweep),
        ("kernel envelope and tail masses", 120.0, c07_envelope_and_tails),
        ("localization of the boundary integral", 60.0, c08_localization),
        ("Dini integral trichotomy", 60.0, c09_dini_trichotomy),
        ("cone Laplace recovery", 120.0, c10_cone_laplace),
        ("vertical-line Monte Carlo", 120.0, c11_vertical_mc),
        ("seeded property families", 60.0, c12_property_families),
    ];

    let mut failures = 0usize;
    for (idx, (name, budget, run)) in checks.into_iter().enumerate() {
        let t0 = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panicked".to_string());
            Err(format!("panic: {msg}"))
        });
        let dt = t0.elapsed().as_secs_f64();
        let line = match outcome {
            Ok(detail) if dt <= budget => format!("pass  {detail}"),
            Ok(detail) => {
                failures += 1;
                format!("FAIL  exceeded {budget:.0}s budget; {detail}")
            }
            Err(reason) => {
                failures += 1;
                format!("FAIL  {reason}")
            }
        };
        println!("[{:>2}/12] {:<44} {:>6.1}s  {line}", idx + 1, name, dt);
    }

    if failures > 0 {
        println!("{failures} of 12 acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 12 acceptance criteria passed");
}

// ---------------------------------------------------------------------------
// Shared generators

fn unit_disc(rng: &mut ChaCha8Rng) -> Complex64 {
    loop {
        let re = 2.0 * rng.random::<f64>() - 1.0;
        let im = 2.0 * rng.random::<f64>() - 1.0;
        if re * re + im * im <= 1.0 {
            return Complex64::new(re, im);
        }
    }
}

/// Random Dirichlet polynomial with frequencies kept clear of the
/// cutoff heights used by the route checks.
fn seeded_polynomial(seed: u64) -> AnalyticTarget {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_terms = rng.random_range(3..=8usize);
    let mut freqs: Vec<f64> = Vec::with_capacity(n_terms);
    while freqs.len() < n_terms {
        let lambda = 8.0 * rng.random::<f64>();
        let clear_of_cutoffs = (lambda - 3.0).abs() > 0.2 && (lambda - 7.0).abs() > 0.2;
        let clear_of_others = freqs.iter().all(|&f| (f - lambda).abs() > 0.05);
        if clear_of_cutoffs && clear_of_others {
            freqs.push(lambda);
        }
    }
    freqs.sort_by(f64::total_cmp);
    let coeffs: Vec<Complex64> = (0..n_terms).map(|_| unit_disc(&mut rng)).collect();
    AnalyticTarget::polynomial(freqs, coeffs).unwrap()
}

fn random_freqs(rng: &mut ChaCha8Rng, n: usize, span: f64) -> Vec<f64> {
    let mut freqs: Vec<f64> = Vec::with_capacity(n);
    while freqs.len() < n {
        let f = span * rng.random::<f64>();
        if freqs.iter().all(|&g| (g - f).abs() > 1e-3) {
            freqs.push(f);
        }
    }
    freqs.sort_by(f64::total_cmp);
    freqs
}

fn sweep_config(target: &str, k: f64, interval: (f64, f64), xs: &[f64]) -> ExperimentConfig {
    ExperimentConfig {
        target: target.to_string(),
        k,
        interval,
        tau_grid_size: 33,
        xs: xs.to_vec(),
        ..ExperimentConfig::default()
    }
}

fn fmt_sups(sups: &[(f64, f64)]) -> String {
    sups.iter()
        .map(|&(x, s)| format!("{x:.0}:{s:.3e}"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// At most one upward step is tolerated in a sup sequence; a residue
/// of the boundary pole (or plain noise floor) can lift the last
/// height without contradicting convergence.
fn check_sup_decay(
    sups: &[(f64, f64)],
    violations: usize,
    frozen: f64,
    label: &str,
) -> Result<(), String> {
    if violations > 1 {
        return Err(format!(
            "{label}: {violations} non-monotone steps (allowed 1): {}",
            fmt_sups(sups)
        ));
    }
    let last = sups.last().map(|&(_, s)| s).unwrap_or(f64::NAN);
    if !(last <= 2.0 * frozen) {
        return Err(format!(
            "{label}: final sup {last:.4e} above frozen threshold {:.4e}",
            2.0 * frozen
        ));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Criteria

fn c01_fourier_normalization() -> Result<String, String> {
    let quad = QuadratureSpec::default();
    let mut worst = 0.0f64;
    for &k in &[0.6, 1.0, 3.0] {
        let check = kernel_fourier_check(k, &quad).map_err(|e| format!("k = {k}: {e}"))?;
        worst = worst.max(check.deviation);
        if check.deviation >= 1e-5 {
            return Err(format!("k = {k}: deviation {:.3e} >= 1e-5", check.deviation));
        }
    }
    Ok(format!("max deviation {worst:.3e} over k in {{0.6, 1, 3}}"))
}

fn c02_route_equivalence() -> Result<String, String> {
    // The two vertical-line routes and the boundary route only need a
    // moderate window: their integrands' algebraic tails extrapolate
    // cleanly, and the shorter window keeps ten polynomials well
    // inside the time budget on one core.
    let line_spec = QuadratureSpec { max_window: 6e3, ..QuadratureSpec::default() };
    let grid_spec = QuadratureSpec::default();
    let mut worst = 0.0f64;
    for &(k, x) in &[(0.75f64, 3.0f64), (1.5, 7.0)] {
        let params = KernelParams::new(k, 0.0, x).map_err(|e| e.to_string())?;
        let grid =
            SmoothedKernelGrid::build(&params, 220.0, &grid_spec).map_err(|e| e.to_string())?;
        for seed in 0..10u64 {
            let target = seeded_polynomial(2000 + seed);
            let origin = Complex64::new(0.0, 0.0);
            let direct = target
                .series
                .riesz_mean(k, x, origin, DEFAULT_MAX_TERMS)
                .map_err(|e| e.to_string())?;
            let mut routes: Vec<(&str, Complex64, f64)> = vec![("direct", direct, 0.0)];
            let r = perron_line(&target, k, x, origin, 1.0 / x, &line_spec)
                .map_err(|e| e.to_string())?;
            routes.push(("line c=1/x", r.value, r.err_est));
            let r = perron_line(&target, k, x, origin, 1.0, &line_spec)
                .map_err(|e| e.to_string())?;
            routes.push(("line c=1", r.value, r.err_est));
            let r = perron_boundary(&target, k, x, 0.0, &line_spec).map_err(|e| e.to_string())?;
            routes.push(("boundary", r.value, r.err_est));
            let r = boundary_integral_with_grid(&target, &grid, &grid_spec)
                .map_err(|e| e.to_string())?;
            routes.push(("smoothed", r.value, r.err_est));

            for i in 0..routes.len() {
                for j in i + 1..routes.len() {
                    let dev = (routes[i].1 - routes[j].1).norm();
                    let budget = routes[i].2 + routes[j].2 + 1e-12;
                    if dev > budget {
                        return Err(format!(
                            "(k={k}, x={x}, seed {seed}) {} vs {}: dev {dev:.3e} > combined err {budget:.3e}",
                            routes[i].0, routes[j].0
                        ));
                    }
                    if dev > 1e-5 {
                        return Err(format!(
                            "(k={k}, x={x}, seed {seed}) {} vs {}: dev {dev:.3e} > 1e-5",
                            routes[i].0, routes[j].0
                        ));
                    }
                    worst = worst.max(dev);
                }
            }
        }
    }
    Ok(format!("worst pairwise deviation {worst:.3e} over 10 polynomials x 2 setups"))
}

fn c03_convolution_residuals() -> Result<String, String> {
    // The eta boundary values get expensive at large heights, and its
    // convolution tail carries no oscillation to cancel against, so
    // that target runs with the moderate window the identity needs
    // rather than the default one.
    let eta_spec = QuadratureSpec { abs_tol: 1e-9, max_window: 1.5e3, ..QuadratureSpec::default() };
    let cases: [(AnalyticTarget, QuadratureSpec, f64, &str); 2] = [
        (
            AnalyticTarget::exponential(2.0).map_err(|e| e.to_string())?,
            QuadratureSpec::default(),
            1e-6,
            "exp(-2s)",
        ),
        (AnalyticTarget::eta(), eta_spec, 1e-5, "eta"),
    ];
    let mut detail = Vec::new();
    for (target, spec, tol, name) in &cases {
        let mut worst = 0.0f64;
        for &(u, t) in &[(1.0, 0.0), (0.5, 1.0)] {
            let res = convolution_residual(target, u, t, spec)
                .map_err(|e| format!("{name} at ({u}, {t}): {e}"))?;
            worst = worst.max(res);
            if res >= *tol {
                return Err(format!("{name} at ({u}, {t}): residual {res:.3e} >= {tol:.0e}"));
            }
        }
        detail.push(format!("{name} {worst:.2e}"));
    }
    Ok(format!("max residuals: {}", detail.join(", ")))
}

fn c04_zeta_sweep() -> Result<String, String> {
    let cfg = sweep_config("zeta-line", 1.0, (0.5, 5.0), &[4.0, 6.0, 8.0, 10.0, 12.0, 14.0]);
    let report = experiments::boundary_sweep(&cfg).map_err(|e| e.to_string())?;
    check_sup_decay(
        &report.sup_error_per_x,
        report.monotonicity_violations(),
        ZETA_SUP_X14_FIRST_RUN,
        "zeta",
    )?;
    Ok(format!(
        "sups {} ({} non-monotone step)",
        fmt_sups(&report.sup_error_per_x),
        report.monotonicity_violations()
    ))
}

fn c05_eta_sweeps() -> Result<String, String> {
    let xs = [4.0, 6.0, 8.0, 10.0, 12.0, 14.0];
    let cfg = sweep_config("eta", 0.75, (-2.0, 2.0), &xs);
    let report = experiments::boundary_sweep(&cfg).map_err(|e| e.to_string())?;
    check_sup_decay(
        &report.sup_error_per_x,
        report.monotonicity_violations(),
        ETA_SUP_X14_FIRST_RUN,
        "eta k=0.75",
    )?;
    // Below the summability threshold for this target nothing is
    // asserted; the sups are recorded to keep an eye on the behavior.
    let low = sweep_config("eta", 0.4, (-2.0, 2.0), &xs);
    let low_report = experiments::boundary_sweep(&low).map_err(|e| e.to_string())?;
    Ok(format!(
        "k=0.75 sups {} ({} step); k=0.4 recorded: {}",
        fmt_sups(&report.sup_error_per_x),
        report.monotonicity_violations(),
        fmt_sups(&low_report.sup_error_per_x)
    ))
}

fn c06_taylor_l2_sweep() -> Result<String, String> {
    let cfg = sweep_config("taylor-l2", 1.0, (0.0, std::f64::consts::TAU), &[1e4]);
    let report = experiments::boundary_sweep(&cfg).map_err(|e| e.to_string())?;
    let sup = report.sup_error_per_x.last().map(|&(_, s)| s).unwrap_or(f64::NAN);
    if !(sup < 1e-3) {
        return Err(format!("sup {sup:.4e} at x = 1e4 not below 1e-3"));
    }
    Ok(format!("sup {sup:.4e} over tau in [0, 2pi] at x = 1e4"))
}

fn peak_envelope_ratio(k: f64, ell: f64, x: f64) -> Result<f64, String> {
    let spec = QuadratureSpec::default();
    let params = KernelParams::new(k, ell, x).map_err(|e| e.to_string())?;
    let mut ratio = 0.0f64;
    for i in 0..=40 {
        let y = -10.0 + 0.5 * i as f64;
        let value = smoothed_kernel(&params, y, &spec).map_err(|e| e.to_string())?;
        let bound = kernel_envelope(&params, y).map_err(|e| e.to_string())?;
        ratio = ratio.max(value.value.norm() / bound);
    }
    Ok(ratio)
}

fn c07_envelope_and_tails() -> Result<String, String> {
    let mut ratios = Vec::new();
    for &(k, ell) in &[(0.75, 0.0), (1.5, 0.75), (2.5, 1.0)] {
        let near = peak_envelope_ratio(k, ell, 2.0)?;
        let far = peak_envelope_ratio(k, ell, 50.0)?;
        if far > 2.0 * near {
            return Err(format!(
                "(k={k}, ell={ell}): envelope ratio grew {near:.3} -> {far:.3} (over 2x)"
            ));
        }
        ratios.push(format!("(k={k},l={ell}) {near:.2}->{far:.2}"));
    }
    let tails = kernel_tail_mass(1.25, 0.5, 0.5, &[5.0, 10.0, 20.0, 40.0])
        .map_err(|e| e.to_string())?;
    if !tails.strictly_decreasing {
        let masses: Vec<String> = tails.rows.iter().map(|r| format!("{:.3e}", r.mass)).collect();
        return Err(format!("tail masses not strictly decreasing: {}", masses.join(" ")));
    }
    let first = tails.rows.first().map(|r| r.mass).unwrap_or(f64::NAN);
    let last = tails.rows.last().map(|r| r.mass).unwrap_or(f64::NAN);
    Ok(format!("ratios {}; tail mass {first:.2e} -> {last:.2e}", ratios.join(" ")))
}

fn c08_localization() -> Result<String, String> {
    let target = AnalyticTarget::eta();
    let quad = QuadratureSpec::default();
    let report = experiments::localization_tail(&target, 1.25, 0.75, 1.0, &[5.0, 10.0, 20.0], &quad)
        .map_err(|e| e.to_string())?;
    if !report.decreasing {
        let tails: Vec<String> =
            report.rows.iter().map(|r| format!("{:.3e}", r.tail)).collect();
        return Err(format!("tails not decreasing: {}", tails.join(" ")));
    }
    let last = report.rows.last().map(|r| r.tail).unwrap_or(f64::NAN);
    if !(last <= 2.0 * LOCALIZATION_TAIL_X20_FIRST_RUN) {
        return Err(format!(
            "final tail {last:.4e} above frozen threshold {:.4e}",
            2.0 * LOCALIZATION_TAIL_X20_FIRST_RUN
        ));
    }
    let tails: Vec<String> = report.rows.iter().map(|r| format!("{:.3e}", r.tail)).collect();
    Ok(format!("tails {}", tails.join(" -> ")))
}

fn c09_dini_trichotomy() -> Result<String, String> {
    let quad = QuadratureSpec::default();

    // A constant boundary function: the modulus vanishes identically.
    let flat = AnalyticTarget::constant_one();
    let zero = experiments::dini_check(&flat, 0.0, 0.5, 1.5, 0.0, &[2.0, 4.0], &quad)
        .map_err(|e| format!("constant case: {e}"))?;
    if zero.diverged || !zero.resolved || zero.dini_integral > 1e-12 {
        return Err(format!(
            "constant case: integral {:.3e}, resolved {}, diverged {}",
            zero.dini_integral, zero.resolved, zero.diverged
        ));
    }

    // A smooth point of eta: finite integral, and the means at that
    // point must actually be converging.
    let eta = AnalyticTarget::eta();
    let finite = experiments::dini_check(&eta, 0.0, 0.5, 1.5, 0.75, &[4.0, 8.0], &quad)
        .map_err(|e| format!("eta case: {e}"))?;
    if finite.diverged || !finite.resolved {
        return Err(format!(
            "eta case: expected a resolved finite integral, got diverged {} resolved {}",
            finite.diverged, finite.resolved
        ));
    }
    let errs: Vec<f64> = finite.riesz_errors.iter().map(|&(_, e)| e).collect();
    if errs.windows(2).any(|w| w[1] >= w[0]) {
        return Err(format!("eta case: Riesz errors not decreasing: {errs:?}"));
    }

    // A Hoelder-1/2 modulus against a steep exponent: the shell sums
    // must blow past the cap and get flagged.
    let mut rough = AnalyticTarget::polynomial(vec![0.0], vec![Complex64::new(1.0, 0.0)])
        .map_err(|e| e.to_string())?;
    rough.boundary =
        Some(Arc::new(|tau: f64| Ok(Complex64::new(1.0 + tau.abs().sqrt(), 0.0))));
    let divergent = experiments::dini_check(&rough, 0.0, 0.5, 2.5, 0.75, &[2.0, 4.0], &quad)
        .map_err(|e| format!("rough case: {e}"))?;
    if !divergent.diverged {
        return Err(format!(
            "rough case: integral {:.3e} failed to trip the divergence cap",
            divergent.dini_integral
        ));
    }

    Ok(format!(
        "zero/finite/divergent as expected; eta integral {:.4} with errors {:.2e} -> {:.2e}",
        finite.dini_integral, errs[0], errs[errs.len() - 1]
    ))
}

fn c10_cone_laplace() -> Result<String, String> {
    let quad = QuadratureSpec::default();

    let flat = AnalyticTarget::constant_one();
    let gamma = cone_laplace(&flat, 1.0, 0.0, Complex64::new(1.0, 0.0), 14.0, &quad)
        .map_err(|e| e.to_string())?;
    let gamma_dev = (gamma.value - 1.0).norm();
    if gamma_dev >= 1e-10 {
        return Err(format!("gamma identity off by {gamma_dev:.3e} (>= 1e-10)"));
    }

    let single = AnalyticTarget::exponential(1.0).map_err(|e| e.to_string())?;
    let w = Complex64::new(0.5, 0.0);
    let exp_out = cone_laplace(&single, 1.0, 0.0, w, 30.0, &quad).map_err(|e| e.to_string())?;
    let exp_dev = (exp_out.value - (-w).exp()).norm();
    if exp_dev >= 1e-6 {
        return Err(format!("single-term recovery off by {exp_dev:.3e} (>= 1e-6)"));
    }

    let eta = AnalyticTarget::eta();
    let w = Complex64::new(0.3, 0.1);
    let eta_out = cone_laplace(&eta, 1.0, 1.0, w, 14.0, &quad).map_err(|e| e.to_string())?;
    let eta_dev = (eta_out.value - special::eta(Complex64::new(0.3, 1.1))).norm();
    if eta_dev >= 1e-2 {
        return Err(format!("eta recovery off by {eta_dev:.3e} (>= 1e-2)"));
    }

    Ok(format!(
        "gamma {gamma_dev:.1e}, single term {exp_dev:.1e}, eta {eta_dev:.1e}"
    ))
}

fn c11_vertical_mc() -> Result<String, String> {
    let coeff = |n: u64| Complex64::new(1.0 / n as f64, 0.0);
    let schedule = [100u64, 1_000, 10_000, 100_000];
    let report = vertical_limit_mc(&coeff, &[0.0], &schedule, 200, 7).map_err(|e| e.to_string())?;
    let tau0 = &report.per_tau[0];
    if tau0.improving_fraction < 0.95 {
        return Err(format!(
            "only {:.1}% of 200 characters improved (need 95%)",
            100.0 * tau0.improving_fraction
        ));
    }
    let trivial = trivial_character_sums(&coeff, 0.0, &schedule).map_err(|e| e.to_string())?;
    let growth = trivial[2].1.norm() - trivial[0].1.norm();
    if growth < 4.0 {
        return Err(format!("trivial character grew only {growth:.3} from N=1e2 to 1e4"));
    }
    let medians: Vec<String> =
        tau0.median_osc.iter().map(|&(n, o)| format!("{n}:{o:.2e}")).collect();
    Ok(format!(
        "{:.0}% improving, medians {}, trivial growth {growth:.2}",
        100.0 * tau0.improving_fraction,
        medians.join(" ")
    ))
}

// The five property families, sized to a bit over a thousand seeded
// cases in total. Each returns the case count it ran.

fn family_frequency_monotonicity() -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(9101);
    let cases = 300;
    for case in 0..cases {
        let freq = match case % 3 {
            0 => Frequency::integer(),
            1 => Frequency::log_integer(),
            _ => Frequency::explicit(random_freqs(&mut rng, 2 + (case % 7), 20.0))
                .map_err(|e| e.to_string())?,
        };
        let n_max = match freq.kind() {
            riesz_core::FrequencyKind::Explicit => freq.count_below(f64::INFINITY),
            _ => 50,
        };
        for n in 1..n_max {
            if !(freq.lambda(n) < freq.lambda(n + 1)) {
                return Err(format!("case {case}: lambda not strictly increasing at n = {n}"));
            }
        }
        let x = 25.0 * rng.random::<f64>() + 1e-3;
        let counted = (1..=n_max).take_while(|&n| freq.lambda(n) < x).count() as u64;
        if freq.count_below(x).min(n_max) != counted {
            return Err(format!("case {case}: count_below({x}) mismatch"));
        }
    }
    Ok(cases)
}

fn family_bare_sum_consistency() -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(9202);
    let cases = 200;
    for case in 0..cases {
        let n = 2 + (case % 6);
        let freqs = random_freqs(&mut rng, n, 10.0);
        let coeffs: Vec<Complex64> = (0..n).map(|_| unit_disc(&mut rng)).collect();
        let target = AnalyticTarget::polynomial(freqs, coeffs).map_err(|e| e.to_string())?;
        let x = 12.0 * rng.random::<f64>() + 0.1;
        let s = Complex64::new(rng.random::<f64>() - 0.5, 4.0 * rng.random::<f64>() - 2.0);
        let mean = target
            .series
            .riesz_mean(0.0, x, s, DEFAULT_MAX_TERMS)
            .map_err(|e| e.to_string())?;
        let partial = target.series.eval_partial(s, target.series.freq().count_below(x));
        if mean != partial {
            return Err(format!("case {case}: k = 0 mean differs from the bare partial sum"));
        }
    }
    Ok(cases)
}

fn family_translation_identity() -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(9303);
    let cases = 200;
    for case in 0..cases {
        let n = 2 + (case % 6);
        let freqs = random_freqs(&mut rng, n, 8.0);
        let coeffs: Vec<Complex64> = (0..n).map(|_| unit_disc(&mut rng)).collect();
        let shift = Complex64::new(rng.random::<f64>() - 0.5, 3.0 * rng.random::<f64>() - 1.5);
        let base = AnalyticTarget::polynomial(freqs, coeffs).map_err(|e| e.to_string())?;
        let shifted = base.series.translate(shift);
        let x = 10.0 * rng.random::<f64>() + 0.5;
        let k = 0.2 + 2.5 * rng.random::<f64>();
        let s = Complex64::new(rng.random::<f64>() - 0.5, 2.0 * rng.random::<f64>() - 1.0);
        let a = base
            .series
            .riesz_mean(k, x, s + shift, DEFAULT_MAX_TERMS)
            .map_err(|e| e.to_string())?;
        let b = shifted.riesz_mean(k, x, s, DEFAULT_MAX_TERMS).map_err(|e| e.to_string())?;
        let scale = a.norm().max(b.norm()).max(1e-30);
        if !((a - b).norm() / scale < 1e-12) {
            return Err(format!(
                "case {case}: translation identity off by {:.3e} relative",
                (a - b).norm() / scale
            ));
        }
    }
    Ok(cases)
}

fn family_kernel_symmetry() -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(9404);
    let mut cases = 0;
    for case in 0..100 {
        let k = 0.3 + 3.0 * rng.random::<f64>();
        let y = 30.0 * rng.random::<f64>() - 15.0;
        let u = 0.05 + rng.random::<f64>();
        if riesz_kernel(k, -y) != riesz_kernel(k, y).conj() {
            return Err(format!("case {case}: bare kernel symmetry"));
        }
        if (poisson(u, y) - poisson(u, -y)).abs() > 1e-18 {
            return Err(format!("case {case}: poisson evenness"));
        }
        let x = 1.5 + 20.0 * rng.random::<f64>();
        if scaled_riesz_kernel(k, x, -y) != scaled_riesz_kernel(k, x, y).conj() {
            return Err(format!("case {case}: scaled kernel symmetry"));
        }
        let ell = k * rng.random::<f64>() * 0.9;
        let params = KernelParams::new(k, ell, x).map_err(|e| e.to_string())?;
        let env_plus = kernel_envelope(&params, y).map_err(|e| e.to_string())?;
        let env_minus = kernel_envelope(&params, -y).map_err(|e| e.to_string())?;
        if env_plus != env_minus {
            return Err(format!("case {case}: envelope evenness"));
        }
        cases += 1;
    }
    let spec = QuadratureSpec::default();
    for case in 0..20 {
        let k = 0.5 + 2.0 * (case as f64) / 20.0;
        let ell = if case % 2 == 0 { 0.0 } else { 0.4 * k };
        let x = 2.0 + case as f64;
        let y = 0.3 + 0.7 * case as f64;
        let params = KernelParams::new(k, ell, x).map_err(|e| e.to_string())?;
        let plus = smoothed_kernel(&params, y, &spec).map_err(|e| e.to_string())?;
        let minus = smoothed_kernel(&params, -y, &spec).map_err(|e| e.to_string())?;
        if minus.value != plus.value.conj() {
            return Err(format!("case {case}: composite kernel symmetry"));
        }
        cases += 1;
    }
    Ok(cases)
}

fn family_quadrature_laws() -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(9505);
    let spec = QuadratureSpec::default();
    let cases = 150;
    for case in 0..cases {
        let w1 = 6.0 * rng.random::<f64>();
        let w2 = 6.0 * rng.random::<f64>();
        let c1 = unit_disc(&mut rng);
        let c2 = unit_disc(&mut rng);
        let f = |t: f64| c1 * Complex64::cis(w1 * t) + Complex64::new(t * t * 0.1, 0.0);
        let g = |t: f64| c2 * Complex64::cis(-w2 * t) + Complex64::new(0.0, t * 0.2);
        let a = -1.0 - 2.0 * rng.random::<f64>();
        let c = 1.0 + 2.0 * rng.random::<f64>();
        let b = a + (c - a) * rng.random::<f64>();
        let alpha = unit_disc(&mut rng);
        let beta = unit_disc(&mut rng);

        let combined = integrate_finite(|t| alpha * f(t) + beta * g(t), a, c, &spec)
            .map_err(|e| e.to_string())?;
        let f_whole = integrate_finite(f, a, c, &spec).map_err(|e| e.to_string())?;
        let g_whole = integrate_finite(g, a, c, &spec).map_err(|e| e.to_string())?;
        let lin_dev = (combined.value - alpha * f_whole.value - beta * g_whole.value).norm();
        let lin_tol = combined.err_est
            + alpha.norm() * f_whole.err_est
            + beta.norm() * g_whole.err_est
            + 1e-12;
        if lin_dev > lin_tol {
            return Err(format!("case {case}: linearity off by {lin_dev:.3e}"));
        }

        let f_left = integrate_finite(f, a, b, &spec).map_err(|e| e.to_string())?;
        let f_right = integrate_finite(f, b, c, &spec).map_err(|e| e.to_string())?;
        let add_dev = (f_whole.value - f_left.value - f_right.value).norm();
        let add_tol = f_whole.err_est + f_left.err_est + f_right.err_est + 1e-12;
        if add_dev > add_tol {
            return Err(format!("case {case}: additivity off by {add_dev:.3e}"));
        }
    }
    Ok(cases)
}

fn family_weight_deficit() -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(9606);
    let cases = 50;
    for case in 0..cases {
        let n = 2 + (case % 5);
        let freqs = random_freqs(&mut rng, n, 3.0);
        let lambda_max: f64 = *freqs.last().unwrap();
        let coeffs: Vec<Complex64> = (0..n).map(|_| unit_disc(&mut rng)).collect();
        let series = DirichletSeries::new(
            Frequency::explicit(freqs.clone()).map_err(|e| e.to_string())?,
            {
                let coeffs = coeffs.clone();
                Arc::new(move |m| coeffs[(m - 1) as usize])
            },
            "deficit-probe",
        );
        let k = 0.3 + 2.2 * rng.random::<f64>();
        let x = lambda_max.max(0.1) * 1e3 * (1.0 + 9.0 * rng.random::<f64>());
        for _ in 0..5 {
            let tau = 6.0 * rng.random::<f64>() - 3.0;
            let s = Complex64::new(0.0, tau);
            let mean = series.riesz_mean(k, x, s, DEFAULT_MAX_TERMS).map_err(|e| e.to_string())?;
            let exact: Complex64 =
                freqs.iter().zip(&coeffs).map(|(&l, &a)| a * (-s * l).exp()).sum();
            let envelope = 10.0 * k * lambda_max.max(1e-30) / x;
            if !((mean - exact).norm() < envelope + 1e-14) {
                return Err(format!(
                    "case {case}: deficit {:.3e} above envelope {envelope:.3e}",
                    (mean - exact).norm()
                ));
            }
        }
    }
    Ok(cases)
}

fn c12_property_families() -> Result<String, String> {
    let mut total = 0usize;
    total += family_frequency_monotonicity().map_err(|e| format!("frequency: {e}"))?;
    total += family_bare_sum_consistency().map_err(|e| format!("bare sum: {e}"))?;
    total += family_translation_identity().map_err(|e| format!("translation: {e}"))?;
    total += family_kernel_symmetry().map_err(|e| format!("symmetry: {e}"))?;
    total += family_quadrature_laws().map_err(|e| format!("quadrature: {e}"))?;
    total += family_weight_deficit().map_err(|e| format!("deficit: {e}"))?;
    if total < 1000 {
        return Err(format!("only {total} seeded cases ran (need at least 1000)"));
    }
    Ok(format!("{total} seeded cases over six families"))
}
