//! Adaptive complex-valued quadrature.
//!
//! The panel rule is the nested 7-point Gauss / 15-point Kronrod pair;
//! the panel error is the rescaled `|K15 - G7|` difference in the
//! usual QUADPACK fashion. Panels live in a worst-first priority
//! queue, so refinement is global rather than recursive.
//!
//! Integrands carrying an `exp(i omega t)` factor defeat naive
//! bisection (a panel spanning many periods can alias to a small
//! error estimate), so callers pass the dominant frequency as
//! `osc_hint` and the initial partition is seeded with panels no wider
//! than `pi / (2 omega)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::util::KahanComplex;

/// Tolerances and hints for one integration call.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureSpec {
    /// Relative tolerance on the accumulated value.
    pub rel_tol: f64,
    /// Absolute tolerance floor.
    pub abs_tol: f64,
    /// Bisection depth limit per seed panel.
    pub max_depth: u32,
    /// Tail decay exponent alpha for improper integrals, meaning
    /// `|f(t)| <= M / |t|^(1+alpha)` for large `|t|`. Required by
    /// [`integrate_real_line`], ignored by the finite-interval entry.
    pub tail_exponent: Option<f64>,
    /// Dominant oscillation frequency of the integrand, if any.
    pub osc_hint: Option<f64>,
    /// Cap on the half-window a real-line integral may choose. Slowly
    /// decaying oscillatory integrands would otherwise demand windows
    /// of 1e8 and more; the unintegrated remainder stays in `err_est`.
    pub max_window: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-8,
            abs_tol: 1e-10,
            max_depth: 40,
            tail_exponent: None,
            osc_hint: None,
            max_window: 3e4,
        }
    }
}

impl QuadratureSpec {
    pub fn with_tols(abs_tol: f64, rel_tol: f64) -> Self {
        QuadratureSpec { abs_tol, rel_tol, ..Default::default() }
    }

    pub fn tail(mut self, alpha: f64) -> Self {
        self.tail_exponent = Some(alpha);
        self
    }

    pub fn oscillation(mut self, omega: f64) -> Self {
        self.osc_hint = Some(omega);
        self
    }
}

/// Outcome of a finite-interval integration.
#[derive(Debug, Clone, Copy)]
pub struct Integral {
    pub value: Complex64,
    pub err_est: f64,
    /// Panels in the final partition.
    pub panels: usize,
    /// Width of the narrowest panel, recorded for the oscillation
    /// safety checks.
    pub min_width: f64,
}

/// Outcome of a real-line integration: the finite part plus the
/// analytic bound on the truncated tails.
#[derive(Debug, Clone, Copy)]
pub struct RealLineIntegral {
    pub value: Complex64,
    /// Quadrature error of the finite part plus `tail_bound`.
    pub err_est: f64,
    /// Half-window actually integrated.
    pub window: f64,
    /// `2 M / (alpha T^alpha)`, the mass the chosen window may have
    /// discarded. An absolute-value bound: for oscillatory integrands
    /// the true remainder is usually far smaller.
    pub tail_bound: f64,
}

// 15-point Kronrod abscissae on [-1, 1] (positive half) and weights,
// with the embedded 7-point Gauss weights.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_17,
    0.207_784_955_007_898_26,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_69,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_94,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    err: f64,
    depth: u32,
}

/// Single-panel G7/K15 value and error estimate, for callers that run
/// their own panel management (the kernel module's oscillatory pieces).
pub(crate) fn gk15_panel<F: FnMut(f64) -> Complex64>(
    f: &mut F,
    a: f64,
    b: f64,
) -> (Complex64, f64) {
    gk15(f, a, b)
}

/// Apply the G7/K15 pair to one panel.
fn gk15<F: FnMut(f64) -> Complex64>(f: &mut F, a: f64, b: f64) -> (Complex64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);
    let mut result_gauss = WG[3] * f_center;
    let mut result_kronrod = WGK[7] * f_center;
    let mut result_abs = WGK[7] * f_center.norm();
    let mut samples = [Complex64::default(); 15];
    samples[7] = f_center;
    for j in 0..7 {
        let offset = half * XGK[j];
        let above = f(center + offset);
        let below = f(center - offset);
        samples[j] = above;
        samples[14 - j] = below;
        let pair = above + below;
        result_kronrod += WGK[j] * pair;
        result_abs += WGK[j] * (above.norm() + below.norm());
        if j % 2 == 1 {
            result_gauss += WG[j / 2] * pair;
        }
    }
    let mean = result_kronrod * 0.5;
    let mut result_asc = WGK[7] * (f_center - mean).norm();
    for j in 0..7 {
        result_asc += WGK[j] * ((samples[j] - mean).norm() + (samples[14 - j] - mean).norm());
    }
    let value = result_kronrod * half;
    let raw_err = ((result_kronrod - result_gauss) * half).norm();
    let result_abs = result_abs * half.abs();
    let result_asc = result_asc * half.abs();
    // QUADPACK rescaling: sharpen the raw difference, floor at the
    // roundoff level of the absolute integral.
    let mut err = raw_err;
    if result_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / result_asc).powf(1.5);
        err = if scale < 1.0 { result_asc * scale } else { result_asc };
    }
    if result_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * result_abs);
    }
    (value, err)
}

const MAX_PANELS: usize = 2_000_000;

/// Integrate over `[a, b]`, seeding the partition from the oscillation
/// hint when present.
pub fn integrate_finite<F: FnMut(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<Integral> {
    let seeds = seed_points(a, b, spec, 8);
    integrate_with_breakpoints(f, &seeds, spec)
}

/// Build seed points for `[a, b]`: at least `min_panels` pieces, and
/// panels no wider than `pi / (2 omega)` under an oscillation hint.
fn seed_points(a: f64, b: f64, spec: &QuadratureSpec, min_panels: usize) -> Vec<f64> {
    let mut width = (b - a) / min_panels as f64;
    if let Some(omega) = spec.osc_hint {
        if omega > 0.0 {
            width = width.min(std::f64::consts::FRAC_PI_2 / omega);
        }
    }
    let count = (((b - a) / width).ceil() as usize).clamp(min_panels, MAX_PANELS / 2);
    let step = (b - a) / count as f64;
    let mut points = Vec::with_capacity(count + 1);
    for i in 0..count {
        points.push(a + step * i as f64);
    }
    points.push(b);
    points
}

/// Integrate over `[points[0], points[last]]` with the given initial
/// partition. Callers with known interior structure (kernel spikes,
/// variable-frequency phases) place their own breakpoints.
pub fn integrate_with_breakpoints<F: FnMut(f64) -> Complex64>(
    mut f: F,
    points: &[f64],
    spec: &QuadratureSpec,
) -> Result<Integral> {
    assert!(points.len() >= 2, "need at least one panel");
    debug_assert!(points.windows(2).all(|w| w[0] < w[1]), "breakpoints must increase");

    let mut panels: Vec<Panel> = Vec::with_capacity(points.len().saturating_mul(2));
    for w in points.windows(2) {
        let (value, err) = gk15(&mut f, w[0], w[1]);
        panels.push(Panel { a: w[0], b: w[1], value, err, depth: 0 });
    }

    // Worst-first heap over (err, seq); seq breaks ties so the
    // refinement order, and therefore the result, is deterministic.
    let mut heap: std::collections::BinaryHeap<HeapEntry> = panels
        .iter()
        .enumerate()
        .map(|(i, p)| HeapEntry { err: p.err, seq: i })
        .collect();

    // Running totals are updated incrementally on each split and
    // re-summed exactly every few thousand splits to stop drift.
    let (mut total, mut total_err) = totals(&panels);
    let mut splits: usize = 0;
    loop {
        let tolerance = spec.abs_tol.max(spec.rel_tol * total.norm());
        if total_err <= tolerance {
            let (value, err_est) = totals(&panels);
            return Ok(finish(panels, value, err_est));
        }
        let worst = loop {
            match heap.pop() {
                Some(entry) => {
                    // Entries may be stale after splits; skip them.
                    if entry.seq < panels.len() && panels[entry.seq].err == entry.err {
                        break Some(entry.seq);
                    }
                }
                None => break None,
            }
        };
        let Some(idx) = worst else {
            let (value, err_est) = totals(&panels);
            let out = finish(panels, value, err_est);
            return Err(Error::QuadratureFailed { value: out.value, err_est: out.err_est });
        };
        let panel = panels[idx];
        let mid = 0.5 * (panel.a + panel.b);
        let too_deep = panel.depth >= spec.max_depth;
        let too_narrow = (panel.b - panel.a) < 1e-14 * (1.0 + mid.abs());
        if too_deep || too_narrow || panels.len() + 1 > MAX_PANELS {
            // Unsplittable; leave it and stop once nothing else helps.
            continue;
        }
        let (lv, le) = gk15(&mut f, panel.a, mid);
        let (rv, re_) = gk15(&mut f, mid, panel.b);
        total += lv + rv - panel.value;
        total_err += le + re_ - panel.err;
        panels[idx] = Panel { a: panel.a, b: mid, value: lv, err: le, depth: panel.depth + 1 };
        panels.push(Panel { a: mid, b: panel.b, value: rv, err: re_, depth: panel.depth + 1 });
        heap.push(HeapEntry { err: le, seq: idx });
        heap.push(HeapEntry { err: re_, seq: panels.len() - 1 });
        splits += 1;
        if splits % 4096 == 0 {
            let (t, e) = totals(&panels);
            total = t;
            total_err = e;
        }
    }
}

struct HeapEntry {
    err: f64,
    seq: usize,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == std::cmp::Ordering::Equal
    }
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Sum panel contributions in spatial order with compensation, so the
/// result does not depend on refinement history.
fn totals(panels: &[Panel]) -> (Complex64, f64) {
    let mut order: Vec<usize> = (0..panels.len()).collect();
    order.sort_unstable_by(|&i, &j| panels[i].a.total_cmp(&panels[j].a));
    let mut value = KahanComplex::new();
    let mut err = 0.0;
    for i in order {
        value.add(panels[i].value);
        err += panels[i].err;
    }
    (value.value(), err)
}

fn finish(panels: Vec<Panel>, value: Complex64, err_est: f64) -> Integral {
    let min_width = panels
        .iter()
        .map(|p| p.b - p.a)
        .fold(f64::INFINITY, f64::min);
    Integral { value, err_est, panels: panels.len(), min_width }
}

/// Number of probe radii used to estimate the tail constant.
const PROBE_RADII: [f64; 4] = [8.0, 16.0, 32.0, 64.0];

/// Integrate over the whole real line.
///
/// Requires `tail_exponent`; the window `[-T, T]` is chosen so that
/// the analytic tail bound `2 M / (alpha T^alpha)` drops below half
/// the absolute tolerance, with `M` estimated by sampling `|f|` near
/// the probe radii. `T` is capped at `max_window` and the (possibly
/// capped) tail bound always lands in `err_est`.
pub fn integrate_real_line<F: FnMut(f64) -> Complex64>(
    mut f: F,
    spec: &QuadratureSpec,
) -> Result<RealLineIntegral> {
    let alpha = spec.tail_exponent.ok_or(Error::TailHintMissing)?;
    if alpha <= 0.0 {
        return Err(Error::domain(format!("tail exponent must be positive, got {alpha}")));
    }
    let mut big_m: f64 = 0.0;
    for radius in PROBE_RADII {
        // Three nearby samples per radius so a phase zero of an
        // oscillatory integrand cannot hide the envelope.
        for scale in [1.0, 1.043, 1.11] {
            let r = radius * scale;
            let magnitude = f(r).norm().max(f(-r).norm());
            big_m = big_m.max(magnitude * r.powf(1.0 + alpha));
        }
    }
    big_m = big_m.max(1e-300);
    let wanted = (4.0 * big_m / (alpha * spec.abs_tol)).powf(1.0 / alpha);
    let window = wanted.clamp(PROBE_RADII[3] * 1.25, spec.max_window);
    let tail_bound = 2.0 * big_m / (alpha * window.powf(alpha));
    match integrate_finite(&mut f, -window, window, spec) {
        Ok(integral) => Ok(RealLineIntegral {
            value: integral.value,
            err_est: integral.err_est + tail_bound,
            window,
            tail_bound,
        }),
        Err(Error::QuadratureFailed { value, err_est }) => {
            Err(Error::QuadratureFailed { value, err_est: err_est + tail_bound })
        }
        Err(e) => Err(e),
    }
}
