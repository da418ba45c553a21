//! Scalar special functions backing the reference values: the Gamma
//! function on the positive axis, the Dirichlet eta function, and the
//! Riemann zeta function off its pole.
//!
//! Zeta is computed by two independent routes. The primary route for
//! moderate heights is the alternating (eta) series
//! `zeta(s) = eta(s) / (1 - 2^(1-s))`, with the alternating sum
//! accelerated by the Cohen-Rodriguez Villegas-Zagier scheme. The
//! fallback, used at large `|Im s|` and near the zeros of the
//! denominator `1 - 2^(1-s)`, is Euler-Maclaurin summation. The two
//! routes are cross-checked in the tests.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Points `s = 1 + 2πik/log 2` (k != 0) make the eta-route denominator
/// vanish; inside this radius the alternating route refuses to divide.
pub const DENOMINATOR_ZERO_RADIUS: f64 = 1e-6;

/// Dispatcher switches to Euler-Maclaurin this far from a denominator
/// zero, well before the hard refusal radius above.
const DENOMINATOR_GUARD: f64 = 1e-3;

/// Above this height the depth-64 accelerated alternating series loses
/// accuracy, so the dispatcher switches to Euler-Maclaurin.
const ALTERNATING_HEIGHT_LIMIT: f64 = 40.0;

const ACCELERATION_DEPTH: usize = 64;

/// Gamma on the positive real axis via the Lanczos approximation
/// (g = 7, 9 coefficients), accurate to roughly 1e-14 relative.
///
/// Panics if `a <= 0`; the callers guard their order parameters.
pub fn gamma_pos(a: f64) -> f64 {
    assert!(a > 0.0, "gamma_pos requires a positive argument, got {a}");
    const G: f64 = 7.0;
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_59,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if a < 0.5 {
        // Reflection keeps the series argument away from the poles.
        return std::f64::consts::PI / ((std::f64::consts::PI * a).sin() * gamma_pos(1.0 - a));
    }
    let z = a - 1.0;
    let mut acc = COEF[0];
    for (i, c) in COEF.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + G + 0.5;
    (2.0 * std::f64::consts::PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * acc
}

/// Upper incomplete Gamma `Γ(a, z)` for `a > 0` and `Re z > 0`.
///
/// Continued fraction (modified Lentz) when `|z|` dominates `a`, else
/// the lower-incomplete power series subtracted from `Γ(a)`. Used by
/// the Laplace-representation tail bounds, where `z = w * t_max`.
pub fn upper_gamma(a: f64, z: Complex64) -> Complex64 {
    assert!(a > 0.0, "upper_gamma requires a positive order, got {a}");
    assert!(z.re > 0.0, "upper_gamma requires Re z > 0, got {z}");
    let prefactor = (-z).exp() * z.powf(a);
    if z.norm() > a + 1.0 {
        // Γ(a,z) = e^{-z} z^a / (z+1-a - 1(1-a)/(z+3-a - 2(2-a)/(...)))
        let tiny = Complex64::new(1e-300, 0.0);
        let mut b = z + (1.0 - a);
        let mut c = Complex64::new(1e300, 0.0);
        let mut d = b.inv();
        let mut h = d;
        for i in 1..200 {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = b + an * d;
            if d.norm() < 1e-300 {
                d = tiny;
            }
            c = b + an / c;
            if c.norm() < 1e-300 {
                c = tiny;
            }
            d = d.inv();
            let delta = d * c;
            h *= delta;
            if (delta - 1.0).norm() < 1e-16 {
                break;
            }
        }
        prefactor * h
    } else {
        // Lower series: γ(a,z) = z^a e^{-z} Σ_n z^n / (a (a+1) ... (a+n)).
        let mut term = Complex64::new(1.0 / a, 0.0);
        let mut sum = term;
        let mut denom = a;
        for _ in 1..500 {
            denom += 1.0;
            term *= z / denom;
            sum += term;
            if term.norm() < 1e-18 * sum.norm() {
                break;
            }
        }
        Complex64::new(gamma_pos(a), 0.0) - prefactor * sum
    }
}

fn complex_pow_neg_s(n: u32, s: Complex64) -> Complex64 {
    // n^{-s} = exp(-s log n), principal branch on the positive reals.
    (-(s) * (n as f64).ln()).exp()
}

/// Dirichlet eta, `eta(s) = Σ (-1)^{n+1} n^{-s}`.
///
/// Entire in `s`. Accelerated alternating series up to height 40, then
/// `(1 - 2^{1-s}) zeta(s)` with zeta from Euler-Maclaurin (a product,
/// so the denominator zeros are harmless on this route).
pub fn eta(s: Complex64) -> Complex64 {
    if s.im.abs() <= ALTERNATING_HEIGHT_LIMIT {
        eta_accelerated(s)
    } else {
        (Complex64::new(1.0, 0.0) - two_pow_one_minus(s)) * zeta_euler_maclaurin(s)
    }
}

fn two_pow_one_minus(s: Complex64) -> Complex64 {
    ((Complex64::new(1.0, 0.0) - s) * std::f64::consts::LN_2).exp()
}

/// Depth-64 alternating-series acceleration, about 1.8 digits per
/// level at small height, degrading as `exp(π |Im s| / 2)` grows.
fn eta_accelerated(s: Complex64) -> Complex64 {
    let m = ACCELERATION_DEPTH;
    // d = ((3 + sqrt 8)^m + (3 - sqrt 8)^m) / 2; the second term is
    // negligible at this depth but keeps d exactly the Chebyshev value.
    let base = 3.0 + 8.0_f64.sqrt();
    let d = (base.powi(m as i32) + (3.0 - 8.0_f64.sqrt()).powi(m as i32)) / 2.0;
    let mut b = -1.0;
    let mut c = -d;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..m {
        c = b - c;
        sum += c * complex_pow_neg_s(k as u32 + 1, s);
        let kf = k as f64;
        let mf = m as f64;
        b *= (kf + mf) * (kf - mf) / ((kf + 0.5) * (kf + 1.0));
    }
    sum / d
}

/// Riemann zeta away from `s = 1`.
///
/// `pole_guard` is the refusal radius around the pole. Near the
/// eta-route denominator zeros and at large height the dispatcher uses
/// Euler-Maclaurin, so no `NearDenominatorZero` escapes this function.
pub fn zeta(s: Complex64, pole_guard: f64) -> Result<Complex64> {
    if (s - 1.0).norm() <= pole_guard {
        return Err(Error::NearPole { s, guard: pole_guard });
    }
    let denom = Complex64::new(1.0, 0.0) - two_pow_one_minus(s);
    if s.im.abs() <= ALTERNATING_HEIGHT_LIMIT && denom.norm() >= DENOMINATOR_GUARD {
        Ok(eta_accelerated(s) / denom)
    } else {
        Ok(zeta_euler_maclaurin(s))
    }
}

/// The eta-route value alone, kept public so the route cross-checks can
/// call it without the dispatcher deciding for them.
pub fn zeta_alternating_route(s: Complex64) -> Result<Complex64> {
    let denom = Complex64::new(1.0, 0.0) - two_pow_one_minus(s);
    if denom.norm() < DENOMINATOR_ZERO_RADIUS {
        return Err(Error::NearDenominatorZero { s });
    }
    Ok(eta_accelerated(s) / denom)
}

/// Bernoulli numbers B_2, B_4, ..., B_24 as exact rationals in f64.
const BERNOULLI_EVEN: [f64; 12] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
];

/// Euler-Maclaurin zeta: partial sum to N, the integral and half-term
/// corrections, then twelve Bernoulli-pair terms. N grows linearly with
/// the height so the asymptotic correction stays convergent.
pub fn zeta_euler_maclaurin(s: Complex64) -> Complex64 {
    debug_assert!((s - 1.0).norm() > 1e-12, "Euler-Maclaurin zeta called at the pole");
    let n = ((s.im.abs() + 30.0) / 4.0).ceil().max(24.0) as u32;
    let nf = n as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    for j in 1..n {
        sum += complex_pow_neg_s(j, s);
    }
    let n_pow_minus_s = complex_pow_neg_s(n, s);
    sum += n_pow_minus_s * nf / (s - 1.0); // N^{1-s}/(s-1)
    sum += n_pow_minus_s * 0.5;
    // Asymptotic terms B_{2j}/(2j)! * s(s+1)...(s+2j-2) * N^{-s-2j+1}.
    let mut pochhammer = s;
    let mut factorial = 2.0;
    let mut n_power = n_pow_minus_s / nf;
    for (j, b2j) in BERNOULLI_EVEN.iter().enumerate() {
        sum += b2j / factorial * pochhammer * n_power;
        let jf = (j + 1) as f64;
        pochhammer = pochhammer * (s + (2.0 * jf - 1.0)) * (s + 2.0 * jf);
        factorial *= (2.0 * jf + 1.0) * (2.0 * jf + 2.0);
        n_power /= nf * nf;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Independent oracle for the Gamma integral: adaptive Simpson on
    /// the defining integral, no shared code with gamma_pos.
    fn simpson_gamma(a: f64) -> f64 {
        fn simpson<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, fl: f64, fm: f64, fh: f64, eps: f64, depth: u32) -> f64 {
            let mid = 0.5 * (lo + hi);
            let lm = 0.5 * (lo + mid);
            let rm = 0.5 * (mid + hi);
            let flm = f(lm);
            let frm = f(rm);
            let h = hi - lo;
            let coarse = h / 6.0 * (fl + 4.0 * fm + fh);
            let fine = h / 12.0 * (fl + 4.0 * flm + 2.0 * fm + 4.0 * frm + fh);
            if depth == 0 || (fine - coarse).abs() < 15.0 * eps {
                fine + (fine - coarse) / 15.0
            } else {
                simpson(f, lo, mid, fl, flm, fm, eps / 2.0, depth - 1)
                    + simpson(f, mid, hi, fm, frm, fh, eps / 2.0, depth - 1)
            }
        }
        let f = move |t: f64| if t <= 0.0 { 0.0 } else { t.powf(a - 1.0) * (-t).exp() };
        let (lo, hi) = (1e-12, 80.0);
        simpson(&f, lo, hi, f(lo), f(0.5 * (lo + hi)), f(hi), 1e-12, 40)
    }

    #[test]
    fn gamma_matches_quadrature_oracle() {
        assert_abs_diff_eq!(gamma_pos(1.3), simpson_gamma(1.3), epsilon = 1e-9);
        assert_abs_diff_eq!(gamma_pos(2.5), simpson_gamma(2.5), epsilon = 1e-9);
        assert_abs_diff_eq!(gamma_pos(0.75), simpson_gamma(0.75), epsilon = 1e-9);
    }

    #[test]
    fn gamma_exact_factorials() {
        assert_abs_diff_eq!(gamma_pos(1.0), 1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(gamma_pos(2.0), 1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(gamma_pos(4.0), 6.0, epsilon = 1e-12);
        assert_abs_diff_eq!(gamma_pos(0.5), std::f64::consts::PI.sqrt(), epsilon = 1e-13);
    }

    #[test]
    #[should_panic(expected = "positive argument")]
    fn gamma_rejects_nonpositive() {
        gamma_pos(0.0);
    }

    #[test]
    fn eta_known_values() {
        // eta(1) = log 2 and eta(2) = π²/12; both sign-sensitive, the
        // (-1)^n convention would negate them.
        assert_abs_diff_eq!(eta(c(1.0, 0.0)).re, std::f64::consts::LN_2, epsilon = 1e-12);
        assert_abs_diff_eq!(eta(c(1.0, 0.0)).im, 0.0, epsilon = 1e-12);
        let pi2_12 = std::f64::consts::PI * std::f64::consts::PI / 12.0;
        assert_abs_diff_eq!(eta(c(2.0, 0.0)).re, pi2_12, epsilon = 1e-12);
        assert_abs_diff_eq!(eta(c(0.0, 0.0)).re, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn eta_matches_raw_series_where_it_converges() {
        // Direct alternating partial sums with the Cesàro pairing trick
        // converge slowly; average consecutive partial sums to kill the
        // leading oscillation, giving a ~1e-8 oracle at these points.
        for &s in &[c(2.0, 0.7), c(1.5, -1.2), c(3.0, 2.0)] {
            let mut partial = Complex64::new(0.0, 0.0);
            let mut prev = partial;
            for n in 1..400_000u32 {
                let term = complex_pow_neg_s(n, s);
                prev = partial;
                if n % 2 == 1 {
                    partial += term;
                } else {
                    partial -= term;
                }
            }
            let averaged = 0.5 * (partial + prev);
            assert!((eta(s) - averaged).norm() < 1e-6, "eta mismatch at {s}: {}", (eta(s) - averaged).norm());
        }
    }

    #[test]
    fn zeta_known_values() {
        let pi2_6 = std::f64::consts::PI * std::f64::consts::PI / 6.0;
        assert_abs_diff_eq!(zeta(c(2.0, 0.0), 1e-6).unwrap().re, pi2_6, epsilon = 1e-12);
        // zeta(3) = 1.2020569031595942854...
        assert_abs_diff_eq!(zeta(c(3.0, 0.0), 1e-6).unwrap().re, 1.202_056_903_159_594_3, epsilon = 1e-12);
        // zeta(0) = -1/2 via Euler-Maclaurin continuation.
        assert_abs_diff_eq!(zeta_euler_maclaurin(c(0.0, 0.0)).re, -0.5, epsilon = 1e-10);
    }

    #[test]
    fn zeta_two_routes_agree() {
        for &s in &[c(1.0, 1.0), c(1.0, 0.5), c(0.5, 14.0), c(2.0, 30.0), c(1.0, 5.0)] {
            let alt = zeta_alternating_route(s).unwrap();
            let em = zeta_euler_maclaurin(s);
            assert!(
                (alt - em).norm() < 1e-8,
                "route disagreement at {s}: alternating {alt}, euler-maclaurin {em}"
            );
        }
    }

    #[test]
    fn zeta_large_height_consistent_across_switch() {
        // Heights just below and above the alternating-route limit must
        // not show a seam.
        for &t in &[39.5, 39.9, 40.1, 41.0, 80.0, 250.0] {
            let s = c(1.0, t);
            let v = zeta(s, 1e-6).unwrap();
            let em = zeta_euler_maclaurin(s);
            assert!((v - em).norm() < 1e-9, "seam at height {t}");
        }
    }

    #[test]
    fn zeta_refuses_pole() {
        match zeta(c(1.0, 0.0), 1e-6) {
            Err(Error::NearPole { .. }) => {}
            other => panic!("expected NearPole, got {other:?}"),
        }
    }

    #[test]
    fn alternating_route_refuses_denominator_zero() {
        // First nontrivial zero of 1 - 2^{1-s} above the real axis.
        let s = c(1.0, 2.0 * std::f64::consts::PI / std::f64::consts::LN_2);
        match zeta_alternating_route(s) {
            Err(Error::NearDenominatorZero { .. }) => {}
            other => panic!("expected NearDenominatorZero, got {other:?}"),
        }
        // The dispatcher must still produce a value there.
        let via_dispatcher = zeta(s, 1e-6).unwrap();
        assert!((via_dispatcher - zeta_euler_maclaurin(s)).norm() < 1e-12);
    }

    #[test]
    fn eta_zeta_functional_identity() {
        for &s in &[c(1.5, 3.0), c(1.0, 1.0), c(2.0, -7.5), c(1.0, 55.0)] {
            let lhs = eta(s);
            let rhs = (c(1.0, 0.0) - two_pow_one_minus(s)) * zeta(s, 1e-6).unwrap();
            assert!((lhs - rhs).norm() < 1e-9, "identity failed at {s}");
        }
    }
}
