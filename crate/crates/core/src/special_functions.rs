//! Airy `Ai`, `Ai'`, Scorer `Hi` and the exponential integral `E1`.
//!
//! Every complex routine works on the principal branch of `z^(1/2)`,
//! `z^(3/2)` and `z^(1/4)`, and evaluates the upper half-plane only: lower
//! half-plane values come from conjugation, so `f(conj z) == conj f(z)`
//! holds bit for bit.
//!
//! Regimes for `Ai`:
//! * `|z| <= AIRY_SERIES_RADIUS`: Maclaurin series;
//! * `|z| >= AIRY_ASYMPTOTIC_RADIUS`: Poincaré expansion (with the
//!   three-term connection formula when `|arg z| > 2π/3`);
//! * in between: Taylor stepping of `y'' = z y` along the ray through `z`,
//!   inward from the asymptotic radius when `|arg z| <= π/3` (where `Ai` is
//!   recessive outward) and outward from the series radius otherwise.
//!
//! Regimes for `Hi`:
//! * `|z| <= HI_SERIES_RADIUS`: Maclaurin series of `w'' = z w + 1/π`;
//! * `|arg z| <= π/3`: the shifted integral
//!   `Hi(z) e^{-ζ} = π^{-1} ∫_{-√z}^∞ e^{-u³/3 - √z u²} du` on the path
//!   `-√z → -Re √z → +∞`;
//! * otherwise: the defining integral on a ray `t = e^{iφ} s`, with `φ`
//!   picked to keep the integrand bounded and weakly oscillating.

use std::f64::consts::{FRAC_PI_3, FRAC_PI_6, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::eval::AccuracyPolicy;
use crate::quadrature;

pub const AIRY_SERIES_RADIUS: f64 = 2.0;
pub const AIRY_ASYMPTOTIC_RADIUS: f64 = 9.0;
pub const HI_SERIES_RADIUS: f64 = 3.0;

const AI0: f64 = 0.355_028_053_887_817_239_260_063_186;
const AIP0: f64 = -0.258_819_403_792_806_798_405_183_560;
const HI0: f64 = 0.409_951_084_964_000_490_100_614_913;
const HIP0: f64 = 0.298_858_904_902_550_905_276_549_1;
const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_286_948_079_451_561;
const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082;
const LN_MAX: f64 = 709.0;

/// Complex value with an error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexEval {
    pub value: Complex64,
    pub abs_err_est: f64,
    pub rel_err_est: f64,
    pub terms: usize,
}

impl ComplexEval {
    fn new(value: Complex64, rel_err: f64, terms: usize) -> Self {
        ComplexEval {
            value,
            abs_err_est: rel_err * value.norm(),
            rel_err_est: rel_err,
            terms,
        }
    }

    fn conj(self) -> Self {
        ComplexEval {
            value: self.value.conj(),
            ..self
        }
    }
}

/// `ζ = (2/3) z^{3/2}` on the principal branch.
pub fn zeta(z: Complex64) -> Complex64 {
    z * z.sqrt() * (2.0 / 3.0)
}

fn check_finite(z: Complex64) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        domain(format!("non-finite argument {z}"))
    }
}

/// Taylor expansion of `y'' = (z0 + h) y + q` about `z0`, evaluated at `z0 + h`.
/// Returns `(y, y', terms)`; `None` if the term budget ran out.
fn taylor_step(
    z0: Complex64,
    y0: Complex64,
    yp0: Complex64,
    q: f64,
    h: Complex64,
    max_terms: usize,
) -> Option<(Complex64, Complex64, usize)> {
    // a_{n+2} = (z0 a_n + a_{n-1} + q [n = 0]) / ((n + 1)(n + 2))
    let mut a_prev2 = Complex64::new(0.0, 0.0); // a_{n-1}
    let mut a_prev = y0; // a_n
    let mut a_cur = yp0; // a_{n+1}
    let mut hp = h; // h^{n+1}
    let mut y = y0 + yp0 * h;
    let mut yp = yp0;
    let mut small = 0;
    let mut n = 0usize;
    loop {
        let mut num = z0 * a_prev + a_prev2;
        if n == 0 {
            num += q;
        }
        let a_next = num / (((n + 1) * (n + 2)) as f64);
        // contribution of a_{n+2}
        let yp_term = a_next * hp * ((n + 2) as f64);
        hp *= h;
        let y_term = a_next * hp;
        y += y_term;
        yp += yp_term;
        n += 1;
        if y_term.norm() <= 1e-17 * y.norm() && yp_term.norm() <= 1e-17 * yp.norm() {
            small += 1;
            if small >= 3 {
                return Some((y, yp, n + 2));
            }
        } else if y_term.norm() == 0.0 && yp_term.norm() == 0.0 && n > 4 {
            return Some((y, yp, n + 2));
        } else {
            small = 0;
        }
        if n + 2 > max_terms {
            return None;
        }
        a_prev2 = a_prev;
        a_prev = a_cur;
        a_cur = a_next;
    }
}

/// Integrates `y'' = z y + q` along the straight segment `from → to` in
/// steps of length at most 1/2.
fn ode_walk(
    from: Complex64,
    to: Complex64,
    mut y: Complex64,
    mut yp: Complex64,
    q: f64,
    max_terms: usize,
) -> Result<(Complex64, Complex64, usize)> {
    let dist = (to - from).norm();
    let steps = ((dist / 0.5).ceil() as usize).max(1);
    let h = (to - from) / steps as f64;
    let mut z = from;
    let mut terms = 0;
    for _ in 0..steps {
        let (ny, nyp, t) = taylor_step(z, y, yp, q, h, max_terms).ok_or_else(|| {
            Error::NonConvergence(format!("Taylor step at {z} exceeded {max_terms} terms"))
        })?;
        y = ny;
        yp = nyp;
        z += h;
        terms += t;
    }
    Ok((y, yp, terms))
}

/// Poincaré expansion, returning `(Ai(z) e^{ζ}, Ai'(z) e^{ζ}, rel_err, terms)`.
fn airy_asymptotic_scaled(z: Complex64) -> (Complex64, Complex64, f64, usize) {
    let zt = zeta(z);
    let inv = 1.0 / zt;
    let mut u = 1.0_f64;
    let mut pw = Complex64::new(1.0, 0.0);
    let mut su = Complex64::new(1.0, 0.0);
    let mut sv = Complex64::new(1.0, 0.0);
    let mut last = 1.0_f64;
    let mut k = 1usize;
    let mut err = f64::EPSILON;
    loop {
        let kf = k as f64;
        u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        let v = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u;
        pw *= -inv;
        let tu = pw * u;
        let tv = pw * v;
        let mag = tu.norm().max(tv.norm());
        if mag > last {
            err = err.max(last);
            break;
        }
        su += tu;
        sv += tv;
        last = mag;
        if mag < 1e-17 {
            break;
        }
        k += 1;
        if k > 200 {
            err = err.max(mag);
            break;
        }
    }
    let q = z.sqrt().sqrt();
    let pref = 0.5 * FRAC_1_SQRT_PI;
    (su * pref / q, -sv * pref * q, err, k)
}

/// Upper-half-plane core: `(Ai, Ai', ln-scale)` with `Ai(z) = a · e^{-s}`
/// where `s` is either `0` or `ζ(z)`.
struct AiryCore {
    ai: Complex64,
    aip: Complex64,
    /// Exponent that has been divided out (`Ai = ai * exp(-scale)`).
    scale: Complex64,
    rel_err: f64,
    terms: usize,
}

fn airy_core(z: Complex64, max_terms: usize) -> Result<AiryCore> {
    let r = z.norm();
    let zero = Complex64::new(0.0, 0.0);
    if r <= AIRY_SERIES_RADIUS {
        let (ai, aip, t) = taylor_step(zero, AI0.into(), AIP0.into(), 0.0, z, max_terms)
            .ok_or_else(|| Error::NonConvergence("Airy Maclaurin series".into()))?;
        return Ok(AiryCore { ai, aip, scale: zero, rel_err: 1e-15, terms: t });
    }
    let theta = z.arg();
    if r >= AIRY_ASYMPTOTIC_RADIUS {
        if theta.abs() <= 2.0 * FRAC_PI_3 {
            let (ai, aip, err, t) = airy_asymptotic_scaled(z);
            return Ok(AiryCore { ai, aip, scale: zeta(z), rel_err: err.max(1e-15), terms: t });
        }
        // Ai(z) = -ω Ai(ωz) - ω² Ai(ω²z),  Ai'(z) = -ω² Ai'(ωz) - ω Ai'(ω²z)
        let w1 = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
        let w2 = w1 * w1;
        let z1 = Complex64::from_polar(r, theta - 4.0 * PI / 3.0);
        let z2 = Complex64::from_polar(r, theta - 2.0 * PI / 3.0);
        let (a1, d1, e1, t1) = airy_asymptotic_scaled(z1);
        let (a2, d2, e2, t2) = airy_asymptotic_scaled(z2);
        let sz = zeta(z);
        let f1 = (sz - zeta(z1)).exp();
        let f2 = (sz - zeta(z2)).exp();
        let ai = -w1 * a1 * f1 - w2 * a2 * f2;
        let aip = -w2 * d1 * f1 - w1 * d2 * f2;
        let cancel = ((a1 * f1).norm() + (a2 * f2).norm()) / ai.norm().max(f64::MIN_POSITIVE);
        return Ok(AiryCore {
            ai,
            aip,
            scale: sz,
            rel_err: e1.max(e2).max(1e-15) * cancel.max(1.0),
            terms: t1 + t2,
        });
    }
    let dir = z / r;
    if theta.abs() <= FRAC_PI_3 {
        let start = dir * AIRY_ASYMPTOTIC_RADIUS;
        let (a, d, err, t0) = airy_asymptotic_scaled(start);
        let ez = (-zeta(start)).exp();
        let (ai, aip, t) = ode_walk(start, z, a * ez, d * ez, 0.0, max_terms)?;
        Ok(AiryCore { ai, aip, scale: zero, rel_err: err.max(1e-14), terms: t0 + t })
    } else {
        let start = dir * AIRY_SERIES_RADIUS;
        let (a, d, t0) = taylor_step(zero, AI0.into(), AIP0.into(), 0.0, start, max_terms)
            .ok_or_else(|| Error::NonConvergence("Airy Maclaurin series".into()))?;
        let (ai, aip, t) = ode_walk(start, z, a, d, 0.0, max_terms)?;
        Ok(AiryCore { ai, aip, scale: zero, rel_err: 1e-14, terms: t0 + t })
    }
}

/// `Ai(z)`, `Ai'(z)` and `ζ(z)`-scaled copies, computed once.
#[derive(Debug, Clone, Copy)]
pub struct AiryValues {
    /// `Ai(z) e^{ζ}`.
    pub ai_scaled: Complex64,
    /// `Ai'(z) e^{ζ}`.
    pub aip_scaled: Complex64,
    pub zeta: Complex64,
    pub rel_err: f64,
    pub terms: usize,
}

impl AiryValues {
    pub fn ai(&self) -> Complex64 {
        self.ai_scaled * (-self.zeta).exp()
    }
    pub fn aip(&self) -> Complex64 {
        self.aip_scaled * (-self.zeta).exp()
    }
}

/// Evaluates `Ai` and `Ai'` with the exponential factor `e^{-ζ}` split off.
pub fn airy_scaled(z: Complex64, policy: &AccuracyPolicy) -> Result<AiryValues> {
    check_finite(z)?;
    policy.validate()?;
    let flip = z.im < 0.0;
    let zu = if flip { z.conj() } else { z };
    let core = airy_core(zu, policy.max_terms)?;
    let zt = zeta(zu);
    let adj = (zt - core.scale).exp();
    let mut v = AiryValues {
        ai_scaled: core.ai * adj,
        aip_scaled: core.aip * adj,
        zeta: zt,
        rel_err: core.rel_err,
        terms: core.terms,
    };
    if flip {
        v.ai_scaled = v.ai_scaled.conj();
        v.aip_scaled = v.aip_scaled.conj();
        v.zeta = v.zeta.conj();
    }
    if z.im == 0.0 && z.re >= 0.0 {
        v.ai_scaled.im = 0.0;
        v.aip_scaled.im = 0.0;
        v.zeta.im = 0.0;
    }
    Ok(v)
}

fn airy_unscaled(z: Complex64, policy: &AccuracyPolicy, deriv: bool) -> Result<ComplexEval> {
    check_finite(z)?;
    policy.validate()?;
    let flip = z.im < 0.0;
    let zu = if flip { z.conj() } else { z };
    let core = airy_core(zu, policy.max_terms)?;
    let e = (-core.scale).exp();
    let mut value = if deriv { core.aip * e } else { core.ai * e };
    if zu.im == 0.0 {
        value.im = 0.0;
    }
    let res = ComplexEval::new(value, core.rel_err, core.terms);
    check_tolerance(&res, policy)?;
    Ok(if flip { res.conj() } else { res })
}

fn check_tolerance(res: &ComplexEval, policy: &AccuracyPolicy) -> Result<()> {
    if !res.value.re.is_finite() || !res.value.im.is_finite() {
        return Err(Error::Overflow(format!("value not representable ({})", res.value)));
    }
    if res.rel_err_est > policy.target_rel_tol && res.abs_err_est > policy.target_abs_tol {
        return Err(Error::NonConvergence(format!(
            "estimated relative error {:.3e} exceeds target {:.3e}",
            res.rel_err_est, policy.target_rel_tol
        )));
    }
    Ok(())
}

/// Airy function `Ai(z)`.
pub fn airy_ai(z: Complex64, policy: &AccuracyPolicy) -> Result<ComplexEval> {
    airy_unscaled(z, policy, false)
}

/// Derivative `Ai'(z)`.
pub fn airy_ai_prime(z: Complex64, policy: &AccuracyPolicy) -> Result<ComplexEval> {
    airy_unscaled(z, policy, true)
}

/// `Hi(z) = mantissa · exp(exponent)`.
#[derive(Debug, Clone, Copy)]
pub struct HiParts {
    pub mantissa: Complex64,
    pub exponent: Complex64,
    pub rel_err: f64,
    pub evals: usize,
}

impl HiParts {
    /// `ln |Hi(z)|`.
    pub fn ln_abs(&self) -> f64 {
        self.mantissa.norm().ln() + self.exponent.re
    }
}

/// `π^{-1} ∫_{-√z}^∞ e^{-u³/3 - √z u²} du` along `-√z → -Re√z → ∞`.
fn hi_shifted_integral(z: Complex64, rel_tol: f64, max_panels: usize) -> Result<(Complex64, f64, usize)> {
    let sz = z.sqrt();
    let rho = sz.re;
    let eta = sz.im;
    let p = |u: Complex64| (-u * u * u / 3.0 - sz * u * u).exp();
    let reference = FRAC_1_SQRT_PI * z.sqrt().sqrt().inv().norm();
    let abs_tol = 0.25 * rel_tol * reference;
    let mut total = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut evals = 0;
    // vertical piece u = -√z + i y, y ∈ [0, Im √z]
    if eta > 0.0 {
        let seg = quadrature::integrate(
            |y| p(Complex64::new(-rho, y - eta)) * Complex64::i(),
            0.0,
            eta,
            abs_tol,
            0.25 * rel_tol,
            2,
            max_panels,
        );
        if !seg.converged {
            return Err(Error::NonConvergence(format!("Hi vertical segment at z = {z}")));
        }
        total += seg.value;
        err += seg.abs_err;
        evals += seg.evals;
    }
    // real axis from -Re √z to the decay cut
    let upper = (46.0 / rho).sqrt().min(5.2);
    let width = 1.0 / rho.sqrt();
    let pieces = [(-rho, 0.0), (0.0, upper)];
    for (a, b) in pieces {
        if b <= a {
            continue;
        }
        let n0 = (((b - a) / width).ceil() as usize).clamp(1, 64);
        let seg = quadrature::integrate(
            |u| p(Complex64::new(u, 0.0)),
            a,
            b,
            abs_tol,
            0.25 * rel_tol,
            n0,
            max_panels,
        );
        if !seg.converged {
            return Err(Error::NonConvergence(format!("Hi real segment at z = {z}")));
        }
        total += seg.value;
        err += seg.abs_err;
        evals += seg.evals;
    }
    Ok((total / PI, err / PI, evals))
}

/// Rotation angle and cut length for the defining integral on a ray.
fn hi_ray_plan(z: Complex64) -> (f64, f64) {
    let r = z.norm();
    let theta = z.arg();
    let phi_max = FRAC_PI_6 - 0.02;
    let mut best: Option<(f64, f64, f64, f64)> = None; // (score, growth, phi, cut)
    for j in 0..=12 {
        let phi = phi_max * j as f64 / 12.0;
        let cubic = (3.0 * phi).cos() / 3.0;
        let lin = r * (theta + phi).cos();
        let growth = if lin > 0.0 {
            let s = (lin / (3.0 * cubic)).sqrt();
            lin * s - cubic * s * s * s
        } else {
            0.0
        };
        // cut where -cubic s^3 + lin s <= -46
        let mut cut = 1.0;
        while -cubic * cut * cut * cut + lin * cut > -46.0 {
            cut *= 1.25;
        }
        let freq = r * (theta + phi).sin().abs();
        let phase = freq * cut + (3.0 * phi).sin() * cut.powi(3) / 3.0;
        let score = phase + 200.0 * (growth - 2.0).max(0.0);
        if best.is_none_or(|b| score < b.0) {
            best = Some((score, growth, phi, cut));
        }
    }
    let (_, _, phi, cut) = best.expect("candidate set is non-empty");
    (phi, cut)
}

fn hi_ray_integral(z: Complex64, rel_tol: f64, max_panels: usize) -> Result<(Complex64, f64, usize)> {
    let (phi, cut) = hi_ray_plan(z);
    let e = Complex64::from_polar(1.0, phi);
    let n0 = ((z.norm() * cut / 6.0).ceil() as usize).clamp(2, 128);
    let seg = quadrature::integrate(
        |s| {
            let t = e * s;
            (-t * t * t / 3.0 + z * t).exp() * e
        },
        0.0,
        cut,
        1e-300,
        0.5 * rel_tol,
        n0,
        max_panels,
    );
    if !seg.converged {
        return Err(Error::NonConvergence(format!("Hi ray integral at z = {z}")));
    }
    Ok((seg.value / PI, seg.abs_err / PI, seg.evals))
}

/// `Hi(z) ~ -(πz)^{-1} Σ (3k)!/(k! (3z³)^k)` off the growth sector, used only
/// when the recessive `e^{ζ}` part is below tolerance.
fn hi_algebraic_series(z: Complex64, rel_tol: f64) -> Option<(Complex64, usize)> {
    let r = z.norm();
    if r < AIRY_ASYMPTOTIC_RADIUS || zeta(z).re + 0.75 * r.ln() + 3.0 > rel_tol.ln() {
        return None;
    }
    let w = (3.0 * z * z * z).inv();
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for k in 1..200usize {
        let k3 = 3 * k;
        let next = term * w * ((k3 - 2) * (k3 - 1) * k3) as f64 / k as f64;
        if next.norm() > term.norm() {
            return None;
        }
        term = next;
        sum += term;
        if term.norm() <= 0.1 * rel_tol * sum.norm() {
            return Some((-sum / (PI * z), k));
        }
    }
    None
}

fn hi_core(z: Complex64, policy: &AccuracyPolicy) -> Result<HiParts> {
    let zero = Complex64::new(0.0, 0.0);
    let rel_tol = policy.target_rel_tol.max(1e-14);
    let max_panels = policy.max_terms.max(64);
    if z.norm() <= HI_SERIES_RADIUS {
        let (v, _, t) = taylor_step(zero, HI0.into(), HIP0.into(), 1.0 / PI, z, policy.max_terms)
            .ok_or_else(|| Error::NonConvergence("Hi Maclaurin series".into()))?;
        return Ok(HiParts { mantissa: v, exponent: zero, rel_err: 1e-14, evals: t });
    }
    if z.arg().abs() <= FRAC_PI_3 {
        let (v, err, n) = hi_shifted_integral(z, rel_tol, max_panels)?;
        return Ok(HiParts {
            mantissa: v,
            exponent: zeta(z),
            rel_err: (err / v.norm()).max(1e-15),
            evals: n,
        });
    }
    if z.re > 0.0 {
        // Hi(z) = e^{2πi/3} Hi(z e^{2πi/3}) + 2 e^{-πi/6} Ai(z e^{-2πi/3})
        let rot = Complex64::from_polar(1.0, 2.0 * FRAC_PI_3);
        let w = hi_core((z * rot).conj(), policy)?;
        let ai = airy_scaled(z * rot.conj(), policy)?;
        let v = rot * w.mantissa.conj() + 2.0 * Complex64::from_polar(1.0, -FRAC_PI_6) * ai.ai();
        return Ok(HiParts {
            mantissa: v,
            exponent: zero,
            rel_err: w.rel_err.max(ai.rel_err),
            evals: w.evals + ai.terms,
        });
    }
    if let Some((v, n)) = hi_algebraic_series(z, rel_tol) {
        return Ok(HiParts { mantissa: v, exponent: zero, rel_err: rel_tol, evals: n });
    }
    let (v, err, n) = hi_ray_integral(z, rel_tol, max_panels)?;
    Ok(HiParts {
        mantissa: v,
        exponent: zero,
        rel_err: (err / v.norm()).max(1e-15),
        evals: n,
    })
}

/// Scorer function in the form `mantissa · exp(exponent)`; never overflows.
pub fn scorer_hi_parts(z: Complex64, policy: &AccuracyPolicy) -> Result<HiParts> {
    check_finite(z)?;
    policy.validate()?;
    let flip = z.im < 0.0;
    let zu = if flip { z.conj() } else { z };
    let mut p = hi_core(zu, policy)?;
    if flip {
        p.mantissa = p.mantissa.conj();
        p.exponent = p.exponent.conj();
    }
    if z.im == 0.0 && z.re >= 0.0 {
        p.mantissa.im = 0.0;
        p.exponent.im = 0.0;
    }
    Ok(p)
}

/// Scorer function `Hi(z) = π^{-1} ∫_0^∞ exp(-t³/3 + z t) dt`.
///
/// Fails with [`Error::Overflow`] once `|Hi(z)|` leaves the `f64` range;
/// use [`scorer_hi_parts`] or [`scorer_hi_scaled`] there.
pub fn scorer_hi(z: Complex64, policy: &AccuracyPolicy) -> Result<ComplexEval> {
    let p = scorer_hi_parts(z, policy)?;
    if p.ln_abs() > LN_MAX {
        return Err(Error::Overflow(format!(
            "Hi({z}) has magnitude e^{:.1}; use the scaled variant",
            p.ln_abs()
        )));
    }
    let mut value = p.mantissa * p.exponent.exp();
    if z.im == 0.0 {
        value.im = 0.0;
    }
    let res = ComplexEval::new(value, p.rel_err, p.evals);
    check_tolerance(&res, policy)?;
    Ok(res)
}

/// `Hi(z) e^{-ζ(z)}` for `|arg z| < π/3`.
pub fn scorer_hi_scaled(z: Complex64, policy: &AccuracyPolicy) -> Result<ComplexEval> {
    check_finite(z)?;
    if z.norm() > 0.0 && z.arg().abs() >= FRAC_PI_3 {
        return domain(format!("scaled Hi needs |arg z| < π/3, got arg = {}", z.arg()));
    }
    let p = scorer_hi_parts(z, policy)?;
    let mut value = p.mantissa * (p.exponent - zeta(z)).exp();
    if z.im == 0.0 {
        value.im = 0.0;
    }
    let res = ComplexEval::new(value, p.rel_err, p.evals);
    check_tolerance(&res, policy)?;
    Ok(res)
}

/// Leading large-`z` forms used in the asymptotic analysis.
pub mod asymptotic {
    use super::*;

    /// `½ π^{-1/2} z^{-1/4} e^{-ζ}`.
    pub fn airy_ai(z: Complex64) -> Complex64 {
        0.5 * FRAC_1_SQRT_PI / z.sqrt().sqrt() * (-zeta(z)).exp()
    }

    /// `-½ π^{-1/2} z^{1/4} e^{-ζ}`.
    pub fn airy_ai_prime(z: Complex64) -> Complex64 {
        -0.5 * FRAC_1_SQRT_PI * z.sqrt().sqrt() * (-zeta(z)).exp()
    }

    /// `π^{-1/2} z^{-1/4}`, the leading term of `Hi(z) e^{-ζ}`.
    pub fn scorer_hi_scaled(z: Complex64) -> Complex64 {
        FRAC_1_SQRT_PI / z.sqrt().sqrt()
    }
}

/// Exponential integral `E1(x) = ∫_x^∞ e^{-w}/w dw` for `x > 0`.
pub fn exp_integral_e1(x: f64) -> Result<crate::eval::EvalResult> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("E1 needs a finite x > 0, got {x}"));
    }
    if x < 1.0 {
        // -γ - ln x - Σ_{k≥1} (-x)^k / (k k!)
        let mut sum = 0.0;
        let mut term = 1.0;
        let mut k = 1;
        loop {
            term *= -x / k as f64;
            let add = term / k as f64;
            sum += add;
            if add.abs() < 1e-17 * sum.abs().max(1e-300) || k > 200 {
                break;
            }
            k += 1;
        }
        let v = -EULER_GAMMA - x.ln() - sum;
        return Ok(crate::eval::EvalResult::from_value(v, 4.0 * f64::EPSILON * v, k));
    }
    // modified Lentz on the continued fraction e^{-x} / (x + 1 - 1/(x + 3 - 4/(x + 5 - ...)))
    let tiny = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    let mut i = 1;
    loop {
        let a = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < 1e-16 || i > 500 {
            break;
        }
        i += 1;
    }
    let v = h * (-x).exp();
    Ok(crate::eval::EvalResult::from_value(v, 8.0 * f64::EPSILON * v, i))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn airy_at_origin_matches_initial_data() {
        let p = AccuracyPolicy::default();
        assert!((airy_ai(c(0.0, 0.0), &p).unwrap().value.re - 0.3550280539).abs() < 1e-10);
        assert!((airy_ai_prime(c(0.0, 0.0), &p).unwrap().value.re + 0.2588194038).abs() < 1e-10);
    }

    #[test]
    fn hi_series_center() {
        let p = AccuracyPolicy::default();
        assert!((scorer_hi(c(0.0, 0.0), &p).unwrap().value.re - 0.4099510849).abs() < 1e-10);
    }

    #[test]
    fn rejects_non_finite() {
        let p = AccuracyPolicy::default();
        assert!(matches!(airy_ai(c(f64::NAN, 0.0), &p), Err(Error::Domain(_))));
        assert!(matches!(scorer_hi(c(0.0, f64::INFINITY), &p), Err(Error::Domain(_))));
    }

    #[test]
    fn scaled_hi_rejects_outside_sector() {
        let p = AccuracyPolicy::default();
        assert!(matches!(scorer_hi_scaled(c(1.0, 2.0), &p), Err(Error::Domain(_))));
    }

    #[test]
    fn hi_overflow_is_signalled() {
        let p = AccuracyPolicy::default();
        assert!(matches!(scorer_hi(c(120.0, 0.0), &p), Err(Error::Overflow(_))));
        assert!(scorer_hi_scaled(c(120.0, 0.0), &p).is_ok());
    }

    #[test]
    fn e1_domain_and_values() {
        assert!(exp_integral_e1(0.0).is_err());
        assert!(exp_integral_e1(-1.0).is_err());
        assert!((exp_integral_e1(1.0).unwrap().value - 0.2193839344).abs() < 1e-10);
        let v = exp_integral_e1(20.0).unwrap().value;
        assert!(v <= (-20.0f64).exp() / 20.0 * 1.1);
    }

    #[test]
    fn asymptotic_forms_at_ten() {
        let p = AccuracyPolicy::default();
        let z = c(10.0, 0.0);
        let r = airy_ai(z, &p).unwrap().value / asymptotic::airy_ai(z);
        assert!((r.re - 1.0).abs() < 0.1);
        let r = airy_ai_prime(z, &p).unwrap().value / asymptotic::airy_ai_prime(z);
        assert!((r.re - 1.0).abs() < 0.1);
        assert!(airy_ai_prime(z, &p).unwrap().value.re < 0.0);
    }

    #[test]
    fn conjugate_symmetry_is_exact() {
        let p = AccuracyPolicy::default();
        let w = c(1.0, 2.0);
        assert_eq!(airy_ai(w.conj(), &p).unwrap().value, airy_ai(w, &p).unwrap().value.conj());
        let w = c(2.0, 1.0);
        assert_eq!(scorer_hi(w.conj(), &p).unwrap().value, scorer_hi(w, &p).unwrap().value.conj());
    }

    #[test]
    fn mpmath_reference_values() {
        // 25-digit references from an independent arbitrary-precision library
        let p = AccuracyPolicy::default();
        let ai_cases = [
            (c(1.0, 2.0), c(-0.219386254981427557, -0.175385911408109418), c(0.170444978178914823, 0.387622439413295090)),
            (c(3.0, -4.0), c(0.0145545466909446349, 0.0474352515154928361), c(-0.0752099611959030290, -0.0823640771555377951)),
            (c(-5.0, 0.0), c(0.350761009024114320, 0.0), c(0.327192818554443137, 0.0)),
            (c(-2.0, 3.0), c(19.4737532442669184, -1.98201173506567488), c(-19.7781161495074195, -29.6604044120751979)),
            (c(5.0, 5.0), c(0.000998835077971024617, 0.00101582421383963648), c(-0.00146978955552066609, -0.00351390171755331346)),
            (c(0.5, 7.0), c(-343.956594334980062, 232.773426544393247), c(1079.89750223625162, 156.342088195096169)),
            (c(0.0, 2.5), c(-0.902636388075986118, -1.16001891692893973), c(-0.148191096873150702, 2.22927421138622572)),
            (c(-8.5, 1.0), c(-3.05836121307934659, 0.0994336784958259802), c(0.726202018590008920, 8.85742907624087996)),
            (c(12.0, 20.0), c(0.0192557373301788884, 0.00136930816679603990), c(-0.0777857459067945449, -0.0514044823967326128)),
            (c(10.0, 0.0), c(1.10475325528986859e-10, 0.0), c(-3.52063367673892364e-10, 0.0)),
        ];
        for (z, ai, aip) in ai_cases {
            let a = airy_ai(z, &p).unwrap().value;
            let d = airy_ai_prime(z, &p).unwrap().value;
            assert!(rel(a, ai) < 1e-12, "Ai({z}) = {a}, want {ai}");
            assert!(rel(d, aip) < 1e-12, "Ai'({z}) = {d}, want {aip}");
        }
        let hi_cases = [
            (c(2.0, 1.0), c(0.622956943832399402, 2.57698551716610157)),
            (c(0.5, 0.0), c(0.609555999826597296, 0.0)),
            (c(1.0, 50.0), c(-0.000127374495274345513, 0.00636364411420281994)),
            (c(5.04, 18.25), c(-0.004477763007115425, 0.016201322913893275)),
            (c(3.0, 9.5), c(-0.009347844890585300, 0.030649172028224313)),
            (c(1.0, 10.0), c(-0.003208835549917604, 0.031489829091621189)),
            (c(8.4, 20.0), c(-0.00568294563208657801, 0.0135262058447667945)),
            (c(-3.0, 4.0), c(0.0392656817081378694, 0.0514258370159289701)),
            (c(5.0, 0.0), c(657.727124387077329, 0.0)),
            (c(-10.0, 0.0), c(0.0317685352825022727, 0.0)),
            (c(4.0, 6.0), c(1.17136918414806990, 0.0747395671636411201)),
            (c(20.0, 30.0), c(116324.568282319265, -228108.495583824532)),
            (c(3.0, 0.1), c(13.7133783281504424, 2.28261382737375026)),
            (c(30.0, 0.0), c(9.05728851215130695e46, 0.0)),
        ];
        for (z, hi) in hi_cases {
            let h = scorer_hi(z, &p).unwrap().value;
            assert!(rel(h, hi) < 1e-11, "Hi({z}) = {h}, want {hi}");
        }
    }
}
