//! Special functions: log-gamma, log-beta, the Gauss hypergeometric function,
//! Student-t density and distribution function, and the gamma quantile.
//!
//! Everything here is pure and stateless apart from a process-wide counter of
//! hypergeometric clamp events (see [`ln_gauss_2f1_clamped`]).

use std::f64::consts::PI;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Lanczos coefficients for g = 607/128, 15 terms.
const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_747,
    -0.491_913_816_097_620_2,
    0.339_946_499_848_118_9e-4,
    0.465_236_289_270_485_76e-4,
    -0.983_744_753_048_795_6e-4,
    0.158_088_703_224_912_5e-3,
    -0.210_264_441_724_104_9e-3,
    0.217_439_618_115_212_64e-3,
    -0.164_318_106_536_763_9e-3,
    0.844_182_239_838_527_4e-4,
    -0.261_908_384_015_814_1e-4,
    0.368_991_826_595_316_2e-5,
];

/// Natural log of the gamma function for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::domain("log_gamma", format!("x = {x} must be finite and > 0")));
    }
    Ok(ln_gamma_pos(x))
}

pub(crate) fn ln_gamma_pos(x: f64) -> f64 {
    if x < 0.5 {
        // reflection: Γ(x)Γ(1-x) = π / sin(πx)
        return (PI / (PI * x).sin()).ln() - ln_gamma_pos(1.0 - x);
    }
    if x == 1.0 || x == 2.0 {
        return 0.0;
    }
    let z = x - 1.0;
    let mut sum = LANCZOS[0];
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        sum += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + sum.ln()
}

/// ln B(a, b).
pub fn log_beta(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::domain("log_beta", format!("a = {a}, b = {b} must be > 0")));
    }
    Ok(ln_beta_pos(a, b))
}

pub(crate) fn ln_beta_pos(a: f64, b: f64) -> f64 {
    ln_gamma_pos(a) + ln_gamma_pos(b) - ln_gamma_pos(a + b)
}

/// Parameters of ₂F₁(a, b; c; x).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyp2f1Params {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub x: f64,
}

impl Hyp2f1Params {
    pub fn new(a: f64, b: f64, c: f64, x: f64) -> Self {
        Self { a, b, c, x }
    }

    fn validate(&self) -> Result<()> {
        let Self { a, b, c, x } = *self;
        if !(a.is_finite() && b.is_finite() && c.is_finite() && x.is_finite()) {
            return Err(Error::domain("gauss_2f1", format!("non-finite parameter in {self:?}")));
        }
        if c <= 0.0 && c == c.round() {
            return Err(Error::domain("gauss_2f1", format!("c = {c} is zero or a negative integer")));
        }
        if x >= 1.0 {
            return Err(Error::domain("gauss_2f1", format!("x = {x} must be < 1")));
        }
        Ok(())
    }
}

/// Maximum number of series terms before giving up.
pub const HYP2F1_MAX_TERMS: usize = 10_000;
const HYP2F1_TOL: f64 = 1e-15;
const RESCALE_AT: f64 = 1e250;

/// A value represented as `sign * exp(log_abs)`.
#[derive(Debug, Clone, Copy)]
struct Scaled {
    mantissa: f64,
    log_scale: f64,
}

impl Scaled {
    fn ln_abs(self) -> f64 {
        self.mantissa.abs().ln() + self.log_scale
    }

    fn value(self) -> f64 {
        self.mantissa * self.log_scale.exp()
    }
}

/// Power series for 0 <= x < 1 with term-ratio stopping and overflow rescaling.
fn hyp2f1_series(a: f64, b: f64, c: f64, x: f64) -> Result<Scaled> {
    let mut sum = 1.0_f64;
    let mut term = 1.0_f64;
    let mut log_scale = 0.0_f64;
    if x == 0.0 {
        return Ok(Scaled { mantissa: 1.0, log_scale });
    }
    for k in 0..HYP2F1_MAX_TERMS {
        let kf = k as f64;
        let ratio = (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * x;
        term *= ratio;
        sum += term;
        if term == 0.0 {
            return Ok(Scaled { mantissa: sum, log_scale });
        }
        if sum.abs() > RESCALE_AT {
            sum /= RESCALE_AT;
            term /= RESCALE_AT;
            log_scale += RESCALE_AT.ln();
        }
        // geometric bound on the remaining tail
        let next = ((a + kf + 1.0) * (b + kf + 1.0) / ((c + kf + 1.0) * (kf + 2.0)) * x).abs();
        let r = next.max(x);
        if r < 1.0 && term.abs() * r / (1.0 - r) <= HYP2F1_TOL * sum.abs() {
            return Ok(Scaled { mantissa: sum, log_scale });
        }
    }
    Err(Error::numerical(
        "gauss_2f1",
        format!(
            "series did not converge in {HYP2F1_MAX_TERMS} terms (a = {a}, b = {b}, c = {c}, x = {x}, partial sum = {:e})",
            sum * log_scale.exp()
        ),
    ))
}

fn hyp2f1_scaled(p: &Hyp2f1Params) -> Result<Scaled> {
    p.validate()?;
    let Hyp2f1Params { a, b, c, x } = *p;
    if x >= 0.0 {
        hyp2f1_series(a, b, c, x)
    } else {
        // Pfaff: ₂F₁(a,b;c;x) = (1-x)^(-b) ₂F₁(c-a, b; c; x/(x-1))
        let s = hyp2f1_series(c - a, b, c, x / (x - 1.0))?;
        Ok(Scaled {
            mantissa: s.mantissa,
            log_scale: s.log_scale - b * (-x).ln_1p(),
        })
    }
}

/// Gauss hypergeometric function ₂F₁(a, b; c; x) for real x < 1.
///
/// Direct power series on [0, 1); the Pfaff transformation maps x < 0 into
/// (0, 1).
pub fn gauss_2f1(p: &Hyp2f1Params) -> Result<f64> {
    hyp2f1_scaled(p).map(Scaled::value)
}

/// ln ₂F₁(a, b; c; x); errors if the function value is not positive.
pub fn ln_gauss_2f1(p: &Hyp2f1Params) -> Result<f64> {
    let s = hyp2f1_scaled(p)?;
    if s.mantissa > 0.0 {
        Ok(s.ln_abs())
    } else {
        Err(Error::numerical(
            "ln_gauss_2f1",
            format!("non-positive value {:e} for {p:?}", s.value()),
        ))
    }
}

/// Floor applied to hypergeometric kernel values inside densities.
pub const HYP2F1_CLAMP: f64 = 1e-15;

static CLAMP_EVENTS: AtomicU64 = AtomicU64::new(0);

/// ln ₂F₁ with values below [`HYP2F1_CLAMP`] (or non-finite) replaced by the
/// clamp. Every replacement increments [`hyp2f1_clamp_events`].
pub fn ln_gauss_2f1_clamped(p: &Hyp2f1Params) -> Result<f64> {
    let s = hyp2f1_scaled(p)?;
    let ln = if s.mantissa > 0.0 { s.ln_abs() } else { f64::NAN };
    if ln.is_finite() && ln >= HYP2F1_CLAMP.ln() {
        Ok(ln)
    } else {
        CLAMP_EVENTS.fetch_add(1, Ordering::Relaxed);
        Ok(HYP2F1_CLAMP.ln())
    }
}

/// Number of times the hypergeometric clamp has fired in this process.
pub fn hyp2f1_clamp_events() -> u64 {
    CLAMP_EVENTS.load(Ordering::Relaxed)
}

fn check_df(func: &'static str, df: f64) -> Result<()> {
    if df.is_finite() && df > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(func, format!("df = {df} must be finite and > 0")))
    }
}

/// Log density of the central Student-t distribution.
pub fn student_t_logpdf(t: f64, df: f64) -> Result<f64> {
    check_df("student_t_logpdf", df)?;
    if t.is_nan() {
        return Err(Error::domain("student_t_logpdf", "t is NaN"));
    }
    Ok(t_logpdf_unchecked(t, df))
}

pub(crate) fn t_logpdf_unchecked(t: f64, df: f64) -> f64 {
    ln_gamma_pos(0.5 * (df + 1.0)) - ln_gamma_pos(0.5 * df) - 0.5 * (df * PI).ln()
        - 0.5 * (df + 1.0) * (t * t / df).ln_1p()
}

/// Lower-tail probability P(T <= t) of the central Student-t distribution.
pub fn student_t_cdf(t: f64, df: f64) -> Result<f64> {
    check_df("student_t_cdf", df)?;
    if t.is_nan() {
        return Err(Error::domain("student_t_cdf", "t is NaN"));
    }
    if t.is_infinite() {
        return Ok(if t > 0.0 { 1.0 } else { 0.0 });
    }
    let x = df / (df + t * t);
    let tail = 0.5 * reg_inc_beta(0.5 * df, 0.5, x)?;
    Ok(if t > 0.0 { 1.0 - tail } else { tail })
}

/// Two-sided p-value 2·(1 − F(|t|)).
pub fn student_t_two_sided_p(t: f64, df: f64) -> Result<f64> {
    check_df("student_t_two_sided_p", df)?;
    if t.is_infinite() {
        return Ok(0.0);
    }
    let x = df / (df + t * t);
    reg_inc_beta(0.5 * df, 0.5, x)
}

/// Regularized incomplete beta I_x(a, b).
pub fn reg_inc_beta(a: f64, b: f64, x: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::domain("reg_inc_beta", format!("a = {a}, b = {b} must be > 0")));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain("reg_inc_beta", format!("x = {x} outside [0, 1]")));
    }
    if x == 0.0 || x == 1.0 {
        return Ok(x);
    }
    let ln_front = a * x.ln() + b * (-x).ln_1p() - ln_beta_pos(a, b);
    if x < (a + 1.0) / (a + b + 2.0) {
        Ok((ln_front + betacf(a, b, x)?.ln()).exp() / a)
    } else {
        Ok(1.0 - (ln_front + betacf(b, a, 1.0 - x)?.ln()).exp() / b)
    }
}

/// Continued fraction for the incomplete beta (modified Lentz).
fn betacf(a: f64, b: f64, x: f64) -> Result<f64> {
    const TINY: f64 = 1e-300;
    const EPS: f64 = 1e-16;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=10_000 {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            return Ok(h);
        }
    }
    Err(Error::numerical(
        "reg_inc_beta",
        format!("continued fraction failed to converge (a = {a}, b = {b}, x = {x})"),
    ))
}

/// Regularized lower incomplete gamma P(a, x).
pub fn reg_lower_gamma(a: f64, x: f64) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::domain("reg_lower_gamma", format!("shape a = {a} must be > 0")));
    }
    if x.is_nan() || x < 0.0 {
        return Err(Error::domain("reg_lower_gamma", format!("x = {x} must be >= 0")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(1.0);
    }
    let ln_front = a * x.ln() - x - ln_gamma_pos(a);
    if x < a + 1.0 {
        // series
        let mut ap = a;
        let mut del = 1.0 / a;
        let mut sum = del;
        for _ in 0..100_000 {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if del.abs() < sum.abs() * 1e-17 {
                return Ok((sum.ln() + ln_front).exp().min(1.0));
            }
        }
        Err(Error::numerical("reg_lower_gamma", format!("series failed (a = {a}, x = {x})")))
    } else {
        // continued fraction for Q(a, x)
        const TINY: f64 = 1e-300;
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / TINY;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..100_000 {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < TINY {
                d = TINY;
            }
            c = b + an / c;
            if c.abs() < TINY {
                c = TINY;
            }
            d = 1.0 / d;
            let del = d * c;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                return Ok(1.0 - (ln_front + h.ln()).exp());
            }
        }
        Err(Error::numerical("reg_lower_gamma", format!("continued fraction failed (a = {a}, x = {x})")))
    }
}

/// Gamma distribution function with the given shape and scale.
pub fn gamma_cdf(x: f64, shape: f64, scale: f64) -> Result<f64> {
    if !(scale > 0.0) {
        return Err(Error::domain("gamma_cdf", format!("scale = {scale} must be > 0")));
    }
    reg_lower_gamma(shape, (x / scale).max(0.0))
}

fn gamma_ln_pdf_unit(x: f64, shape: f64) -> f64 {
    (shape - 1.0) * x.ln() - x - ln_gamma_pos(shape)
}

/// Quantile of the gamma distribution: the x solving P(shape, x/scale) = q.
///
/// Bracketed Newton iteration on the distribution function with bisection
/// fallback.
pub fn gamma_quantile(q: f64, shape: f64, scale: f64) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::domain("gamma_quantile", format!("q = {q} must lie in (0, 1)")));
    }
    if !(shape > 0.0 && shape.is_finite()) || !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::domain(
            "gamma_quantile",
            format!("shape = {shape}, scale = {scale} must be finite and > 0"),
        ));
    }
    Ok(unit_gamma_quantile(q, shape)? * scale)
}

fn unit_gamma_quantile(q: f64, shape: f64) -> Result<f64> {
    // Wilson-Hilferty starting point
    let z = normal_quantile_approx(q);
    let w = 1.0 / (9.0 * shape);
    let mut x = shape * (1.0 - w + z * w.sqrt()).powi(3);
    if !(x > 0.0) || !x.is_finite() {
        // small-x asymptote P(a,x) ~ x^a / Γ(a+1)
        x = ((q.ln() + ln_gamma_pos(shape + 1.0)) / shape).exp();
    }

    let mut lo = 0.0_f64;
    let mut hi = x.max(f64::MIN_POSITIVE);
    while reg_lower_gamma(shape, hi)? < q {
        lo = hi;
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::numerical("gamma_quantile", "failed to bracket the root"));
        }
    }
    for _ in 0..400 {
        let f = reg_lower_gamma(shape, x)? - q;
        if f == 0.0 {
            return Ok(x);
        }
        if f < 0.0 {
            lo = lo.max(x);
        } else {
            hi = hi.min(x);
        }
        let dens = gamma_ln_pdf_unit(x, shape).exp();
        let mut next = x - f / dens;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= 1e-15 * next.abs() || hi - lo <= 1e-15 * hi {
            return Ok(next);
        }
        x = next;
    }
    Err(Error::numerical(
        "gamma_quantile",
        format!("no convergence for q = {q}, shape = {shape}"),
    ))
}

/// Standard normal quantile, Acklam's rational approximation (|rel err| < 1.2e-9).
/// Only used to seed iterations.
pub(crate) fn normal_quantile_approx(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const P_LOW: f64 = 0.024_25;
    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        -normal_quantile_approx(1.0 - p)
    }
}
