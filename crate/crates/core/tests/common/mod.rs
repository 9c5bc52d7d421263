//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_2, PI};

/// Tanh-sinh quadrature on [a, b]; tolerates integrable endpoint
/// singularities. Refines the step until two levels agree to `tol`
/// (relative, with an absolute floor of `tol`).
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    let c = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let sum_at = |h: f64, offset: f64, step: usize| -> f64 {
        // nodes k = offset + j*h*step for j >= 0, mirrored
        let mut s = 0.0;
        let mut j = 0usize;
        loop {
            let k = offset + (j * step) as f64 * h;
            if k > 4.0 {
                break;
            }
            let sk = FRAC_PI_2 * k.sinh();
            let ch = sk.cosh();
            let w = half * FRAC_PI_2 * k.cosh() / (ch * ch);
            // distance from the endpoint, without cancellation
            let d = half * 2.0 / ((2.0 * sk).exp() + 1.0);
            if w < 1e-300 || d == 0.0 {
                break;
            }
            if k == 0.0 {
                s += w * f(c);
            } else {
                // nodes that round onto an endpoint are dropped
                let (hi, lo) = (b - d, a + d);
                if hi < b {
                    s += w * f(hi);
                }
                if lo > a {
                    s += w * f(lo);
                }
            }
            j += 1;
        }
        s
    };
    let mut h = 0.5;
    let mut total = sum_at(h, 0.0, 1);
    let mut est = total * h;
    for _ in 0..12 {
        h *= 0.5;
        // new nodes are the odd multiples of the halved step
        total += sum_at(h, h, 2);
        let next = total * h;
        if (next - est).abs() <= tol * next.abs().max(1.0) {
            return next;
        }
        est = next;
    }
    est
}

/// ∫ from a to ∞ via x = a + u/(1−u).
pub fn tanh_sinh_to_inf<F: Fn(f64) -> f64>(f: F, a: f64, tol: f64) -> f64 {
    tanh_sinh(
        |u| {
            let om = 1.0 - u;
            f(a + u / om) / (om * om)
        },
        0.0,
        1.0,
        tol,
    )
}

/// ln Γ(x), x > 0: recurrence up to x ≥ 15, then the Stirling series.
pub fn ln_gamma(mut x: f64) -> f64 {
    let mut shift = 0.0;
    while x < 15.0 {
        shift -= x.ln();
        x += 1.0;
    }
    let x2 = x * x;
    let series = 1.0 / (12.0 * x) - 1.0 / (360.0 * x * x2) + 1.0 / (1260.0 * x2 * x2 * x)
        - 1.0 / (1680.0 * x2 * x2 * x2 * x)
        + 1.0 / (1188.0 * x2 * x2 * x2 * x2 * x);
    shift + (x - 0.5) * x.ln() - x + 0.5 * (2.0 * PI).ln() + series
}

/// Term-by-term ₂F₁ series, |x| < 1.
/// Double-double value (hi + lo).
#[derive(Clone, Copy)]
struct Dd(f64, f64);

impl Dd {
    fn from(x: f64) -> Self {
        Dd(x, 0.0)
    }
    fn two_sum(a: f64, b: f64) -> Self {
        let s = a + b;
        let bb = s - a;
        Dd(s, (a - (s - bb)) + (b - bb))
    }
    fn add(self, o: Dd) -> Dd {
        let s = Dd::two_sum(self.0, o.0);
        let t = Dd::two_sum(self.1, o.1);
        let hi = Dd::two_sum(s.0, s.1 + t.0);
        Dd::two_sum(hi.0, hi.1 + t.1)
    }
    fn mul(self, o: Dd) -> Dd {
        let p = self.0 * o.0;
        let e = self.0.mul_add(o.0, -p);
        Dd::two_sum(p, e + self.0 * o.1 + self.1 * o.0)
    }
    fn div(self, o: Dd) -> Dd {
        let q1 = self.0 / o.0;
        let r = self.add(o.mul(Dd::from(-q1)));
        let q2 = r.0 / o.0;
        let r = r.add(o.mul(Dd::from(-q2)));
        let q3 = r.0 / o.0;
        Dd::two_sum(q1, q2).add(Dd::from(q3))
    }
}

/// Gauss series summed in double-double, so alternating cases with large
/// intermediate terms keep full double precision.
pub fn series_2f1(a: f64, b: f64, c: f64, x: f64) -> f64 {
    let mut term = Dd::from(1.0);
    let mut sum = Dd::from(1.0);
    let xd = Dd::from(x);
    for k in 0..200_000 {
        let kf = k as f64;
        let num = Dd::two_sum(a, kf).mul(Dd::two_sum(b, kf));
        let den = Dd::two_sum(c, kf).mul(Dd::from(kf + 1.0));
        term = term.mul(num.div(den)).mul(xd);
        sum = sum.add(term);
        if term.0.abs() < 1e-34 * sum.0.abs() && k > 5 {
            break;
        }
    }
    sum.0 + sum.1
}

pub fn central_t_logpdf(t: f64, df: f64) -> f64 {
    ln_gamma(0.5 * (df + 1.0)) - ln_gamma(0.5 * df) - 0.5 * (df * PI).ln()
        - 0.5 * (df + 1.0) * (t * t / df).ln_1p()
}

/// Noncentral t density by integrating over the chi variable:
/// t = (Z + δ)/√(V/df), V ~ χ²_df.
pub fn noncentral_t_pdf(t: f64, df: f64, delta: f64) -> f64 {
    let ln_chi2 = |v: f64| (0.5 * df - 1.0) * v.ln() - 0.5 * v - 0.5 * df * 2f64.ln() - ln_gamma(0.5 * df);
    let f = |v: f64| {
        if v <= 0.0 {
            return 0.0;
        }
        let s = (v / df).sqrt();
        let z = t * s - delta;
        (-0.5 * z * z - 0.5 * (2.0 * PI).ln() + ln_chi2(v)).exp() * s
    };
    let mode = (df - 2.0).max(0.0);
    let hi = mode + 60.0 * (2.0 * df).sqrt() + 60.0;
    tanh_sinh(f, 0.0, mode.max(1.0), 1e-13) + tanh_sinh(f, mode.max(1.0), hi, 1e-13)
}

/// Normal moment prior density on λ.
pub fn nm_prior_pdf(lambda: f64, tau2: f64, nu: f64) -> f64 {
    (2.0 * nu * lambda.abs().ln() - (nu + 0.5) * (2.0 * tau2).ln() - ln_gamma(nu + 0.5)
        - lambda * lambda / (2.0 * tau2))
        .exp()
}

/// Correlation of residuals of y and x after least-squares projection on
/// [1, z₁, …] (modified Gram–Schmidt).
pub fn residual_corr(y: &[f64], x: &[f64], cond: &[Vec<f64>]) -> f64 {
    let n = y.len();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut cols = vec![vec![1.0; n]];
    cols.extend(cond.iter().cloned());
    for mut v in cols {
        for q in &basis {
            let d: f64 = v.iter().zip(q).map(|(a, b)| a * b).sum();
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= d * qi;
            }
        }
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        basis.push(v.into_iter().map(|a| a / norm).collect());
    }
    let resid = |w: &[f64]| {
        let mut v = w.to_vec();
        for _ in 0..2 {
            for q in &basis {
                let d: f64 = v.iter().zip(q).map(|(a, b)| a * b).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= d * qi;
                }
            }
        }
        v
    };
    let (ey, ex) = (resid(y), resid(x));
    let sxy: f64 = ey.iter().zip(&ex).map(|(a, b)| a * b).sum();
    let sxx: f64 = ex.iter().map(|a| a * a).sum();
    let syy: f64 = ey.iter().map(|a| a * a).sum();
    sxy / (sxx * syy).sqrt()
}

/// Kolmogorov–Smirnov distance between a sample and a CDF.
pub fn ks_distance(sample: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    sample.sort_by(f64::total_cmp);
    let n = sample.len() as f64;
    sample
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// CDF of a density on (a, b) tabulated by composite Simpson on `m` panels,
/// linearly interpolated.
pub fn tabulated_cdf(pdf: impl Fn(f64) -> f64, a: f64, b: f64, m: usize) -> impl Fn(f64) -> f64 {
    let h = (b - a) / m as f64;
    let mut cum = vec![0.0; m + 1];
    for i in 0..m {
        let x0 = a + i as f64 * h;
        let s = h / 6.0 * (pdf(x0) + 4.0 * pdf(x0 + 0.5 * h) + pdf(x0 + h));
        cum[i + 1] = cum[i] + s;
    }
    move |x: f64| {
        if x <= a {
            return 0.0;
        }
        if x >= b {
            return cum[m];
        }
        let u = (x - a) / h;
        let i = (u.floor() as usize).min(m - 1);
        let frac = u - i as f64;
        cum[i] + frac * (cum[i + 1] - cum[i])
    }
}

/// Small deterministic generator for test inputs (SplitMix64).
pub struct Mix(pub u64);

impl Mix {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * ((self.next_u64() >> 11) as f64 / (1u64 << 53) as f64)
    }

    /// Box–Muller.
    pub fn normal(&mut self) -> f64 {
        let u1 = self.uniform(f64::MIN_POSITIVE, 1.0);
        let u2 = self.uniform(0.0, 1.0);
        (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
    }
}
