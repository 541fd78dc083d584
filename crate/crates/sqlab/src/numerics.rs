//! Special functions and integral identities consumed by every other module.
//!
//! Polynomials are evaluated by three-term recurrences (never factorial
//! sums), factorial ratios go through log-gamma, and the recurrence order is
//! capped at [`POLY_CAP`] with an explicit error beyond it.

use crate::error::{Error, Result};
use crate::C64;

/// Largest polynomial order served by the recurrences.
pub const POLY_CAP: usize = 512;

/// Largest |z| accepted by [`erf_c`].
pub const ERF_CAP: f64 = 25.0;

// ---------------------------------------------------------------------------
// log-gamma and factorials
// ---------------------------------------------------------------------------

/// Lanczos approximation (g = 7, 9 terms), |error| < 1e-13 for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    const G: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // reflection
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = G[0];
    let t = x + 7.5;
    for (i, &g) in G.iter().enumerate().skip(1) {
        a += g / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

pub fn ln_factorial(n: usize) -> f64 {
    ln_gamma(n as f64 + 1.0)
}

// ---------------------------------------------------------------------------
// orthogonal polynomials
// ---------------------------------------------------------------------------

/// Physicists' Hermite polynomial H_n(z) by the recurrence
/// H_{n+1}(z) = 2 z H_n(z) - 2 n H_{n-1}(z).
pub fn hermite(n: usize, z: C64) -> Result<C64> {
    if n > POLY_CAP {
        return Err(Error::CapExceeded(format!("hermite order {n} > {POLY_CAP}")));
    }
    let mut prev = C64::new(1.0, 0.0);
    if n == 0 {
        return Ok(prev);
    }
    let mut cur = 2.0 * z;
    for k in 1..n {
        let next = 2.0 * z * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Associated Laguerre polynomial L_n^k(x) by the stable upward recurrence
/// (n+1) L_{n+1}^k = (2n+1+k-x) L_n^k - (n+k) L_{n-1}^k.
/// The order k may be any real, in particular -1/2.
pub fn assoc_laguerre(n: usize, k: f64, x: C64) -> Result<C64> {
    if n > POLY_CAP {
        return Err(Error::CapExceeded(format!("laguerre order {n} > {POLY_CAP}")));
    }
    let mut prev = C64::new(1.0, 0.0);
    if n == 0 {
        return Ok(prev);
    }
    let mut cur = C64::new(1.0 + k, 0.0) - x;
    for m in 1..n {
        let mf = m as f64;
        let next = ((C64::new(2.0 * mf + 1.0 + k, 0.0) - x) * cur - (mf + k) * prev) / (mf + 1.0);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Plain Laguerre polynomial L_n(x) for real argument.
pub fn laguerre(n: usize, x: f64) -> Result<f64> {
    Ok(assoc_laguerre(n, 0.0, C64::new(x, 0.0))?.re)
}

/// L_n^k(x) for real x returned as (ln |L|, sign), overflow-free for the
/// large arguments that show up in thermal photon-number sums.
pub fn assoc_laguerre_ln(n: usize, k: f64, x: f64) -> Result<(f64, f64)> {
    if n > POLY_CAP {
        return Err(Error::CapExceeded(format!("laguerre order {n} > {POLY_CAP}")));
    }
    // recurrence on rescaled values: values divided by 2^shift
    let mut shift = 0i64;
    let mut prev = 1.0f64;
    let mut cur = 1.0 + k - x;
    if n == 0 {
        return Ok((0.0, 1.0));
    }
    for m in 1..n {
        let mf = m as f64;
        let mut next = ((2.0 * mf + 1.0 + k - x) * cur - (mf + k) * prev) / (mf + 1.0);
        prev = cur;
        cur = next;
        let mag = cur.abs().max(prev.abs());
        if mag > 1e200 {
            let scale = 2f64.powi(-512);
            prev *= scale;
            cur *= scale;
            shift += 512;
            next = 0.0;
            let _ = next;
        }
    }
    if cur == 0.0 {
        return Ok((f64::NEG_INFINITY, 0.0));
    }
    Ok((cur.abs().ln() + shift as f64 * std::f64::consts::LN_2, cur.signum()))
}

// ---------------------------------------------------------------------------
// complex error function
// ---------------------------------------------------------------------------

/// Entire error function erf(z), valid for |z| <= [`ERF_CAP`].
///
/// Maclaurin series where the cancellation loss e^{2 Re(z)^2} stays small,
/// otherwise through erfc via the Laplace continued fraction of w(z)
/// (the split the real-axis integral definition does not need, but the
/// complex evaluations of the phase distributions do).
pub fn erf_c(z: C64) -> Result<C64> {
    if z.norm() > ERF_CAP {
        return Err(Error::CapExceeded(format!("|z| = {:.2} > {ERF_CAP} in erf", z.norm())));
    }
    if z.norm() == 0.0 {
        return Ok(C64::new(0.0, 0.0));
    }
    // erf(-z) = -erf(z); reduce to Re z >= 0 so the erfc route converges
    if z.re < 0.0 {
        return Ok(-erf_c(-z)?);
    }
    if z.re <= 2.6 {
        Ok(erf_series(z))
    } else {
        Ok(C64::new(1.0, 0.0) - erfc_cf(z))
    }
}

fn erf_series(z: C64) -> C64 {
    // erf(z) = (2/sqrt(pi)) sum_k (-1)^k z^(2k+1) / (k! (2k+1))
    let z2 = z * z;
    let mut term = z;
    let mut sum = z;
    for k in 1..400 {
        let kf = k as f64;
        term *= -z2 / kf;
        let add = term / (2.0 * kf + 1.0);
        sum += add;
        if add.norm() < 1e-18 * sum.norm().max(1e-300) {
            break;
        }
    }
    sum * 2.0 / std::f64::consts::PI.sqrt()
}

/// Tail of the Laplace continued fraction:
/// erfc(z) = e^{-z^2}/sqrt(pi) / (z + cf_tail(z)) for Re z > 0.
fn erfc_cf_tail(z: C64) -> C64 {
    // z + (1/2)/(z + (2/2)/(z + (3/2)/(z + ...)))
    let mut f = C64::new(0.0, 0.0);
    for k in (1..=80).rev() {
        f = (k as f64 / 2.0) / (z + f);
    }
    f
}

/// erfc(z) for Re z > 0.
fn erfc_cf(z: C64) -> C64 {
    (-z * z).exp() / std::f64::consts::PI.sqrt() / (z + erfc_cf_tail(z))
}

/// Scaled combination e^{w^2} erfc(-w) = e^{w^2} (1 + erf(w)), evaluated
/// without forming the two overflowing factors separately. This is the
/// object every radial phase-space integral produces. Valid for
/// |w| <= ERF_CAP (e^{|w|^2} stays representable).
pub fn erfcx_neg(w: C64) -> Result<C64> {
    if w.norm() > ERF_CAP {
        return Err(Error::CapExceeded(format!(
            "|w| = {:.2} > {ERF_CAP} in scaled erfc",
            w.norm()
        )));
    }
    let rt_pi = std::f64::consts::PI.sqrt();
    if w.re < -2.6 {
        // erfc(-w) directly; the e^{w^2} cancels the CF prefactor exactly
        let m = -w;
        Ok(1.0 / rt_pi / (m + erfc_cf_tail(m)))
    } else if w.re > 2.6 {
        // erfc(-w) = 2 - erfc(w)
        Ok(2.0 * (w * w).exp() - 1.0 / rt_pi / (w + erfc_cf_tail(w)))
    } else {
        // |Re w| small: series loses at most e^{2 Re(w)^2} ~ 7e5 of precision
        Ok((w * w).exp() * (1.0 + erf_series(w)))
    }
}

// ---------------------------------------------------------------------------
// Gaussian integral identity
// ---------------------------------------------------------------------------

/// Parameters of the planar Gaussian integral
/// `int exp[-B|m|^2 + (c/2) m*^2 + (c1/2) m^2 + D1 m + D m*] d^2m`.
#[derive(Debug, Clone, Copy)]
pub struct GaussianIntegralParams {
    pub b: C64,
    pub c: C64,
    pub c1: C64,
    pub d: C64,
    pub d1: C64,
}

impl GaussianIntegralParams {
    /// K = B^2 - c c1; the identity needs Re K > 0 and Re[B + (c+c1)/2] > 0.
    pub fn k(&self) -> C64 {
        self.b * self.b - self.c * self.c1
    }

    pub fn check(&self) -> Result<()> {
        let k = self.k();
        if k.re <= 0.0 {
            return Err(Error::ConvergenceViolation(format!("Re K = {:.3e} <= 0", k.re)));
        }
        let edge = self.b + (self.c + self.c1) / 2.0;
        if edge.re <= 0.0 {
            return Err(Error::ConvergenceViolation(format!(
                "Re[B + (c + c1)/2] = {:.3e} <= 0",
                edge.re
            )));
        }
        Ok(())
    }
}

/// Closed form (pi/sqrt(K)) exp{[D D1 B + D^2 c1/2 + D1^2 c/2]/K}.
pub fn gaussian_integral_2d(p: &GaussianIntegralParams) -> Result<C64> {
    p.check()?;
    let k = p.k();
    let num = p.d * p.d1 * p.b + p.d * p.d * p.c1 / 2.0 + p.d1 * p.d1 * p.c / 2.0;
    Ok(std::f64::consts::PI / k.sqrt() * (num / k).exp())
}

/// Both sides of the bilinear Laguerre identity
/// sum_m L_m^{k1}(x) L_{n-m}^{k2}(y) = L_n^{k1+k2+1}(x+y).
pub fn laguerre_sum_identity_check(
    n: usize,
    k1: f64,
    k2: f64,
    x: C64,
    y: C64,
) -> Result<(C64, C64)> {
    let mut lhs = C64::new(0.0, 0.0);
    for m in 0..=n {
        lhs += assoc_laguerre(m, k1, x)? * assoc_laguerre(n - m, k2, y)?;
    }
    let rhs = assoc_laguerre(n, k1 + k2 + 1.0, x + y)?;
    Ok((lhs, rhs))
}

/// ln of J_m(p, w2) = int L_m^{-1/2}(4u^2) e^{-2u^2} e^{-p(u-w)^2} du with
/// real w^2 = w2 (negative w2 encodes an imaginary shift) and p > 0:
/// sqrt(pi/(p+2)) e^{-2pw2/(p+2)} ((p-2)/(p+2))^m L_m^{-1/2}(4p^2w2/(p^2-4)).
/// Returned as (ln |J|, sign) so huge Gaussian offsets can be folded in by
/// the caller before exponentiating.
pub fn laguerre_gaussian_ln(m: usize, p: f64, w2: f64) -> Result<(f64, f64)> {
    let base = 0.5 * (std::f64::consts::PI / (p + 2.0)).ln() - 2.0 * p * w2 / (p + 2.0);
    if (p - 2.0).abs() < 1e-8 {
        // confluent limit of ratio^m L_m^{-1/2}(arg): (-x)^m / m! with
        // x = 4 p^2 w2 / (p+2)^2  (L_m^{-1/2} -> (-arg)^m/m! as arg blows up)
        let x = 4.0 * p * p * w2 / ((p + 2.0) * (p + 2.0));
        if x == 0.0 {
            return Ok(if m == 0 { (base, 1.0) } else { (f64::NEG_INFINITY, 0.0) });
        }
        let sign = if x > 0.0 && m % 2 == 1 { -1.0 } else { 1.0 };
        return Ok((base + m as f64 * x.abs().ln() - ln_factorial(m), sign));
    }
    let ratio = (p - 2.0) / (p + 2.0);
    let arg = 4.0 * p * p * w2 / (p * p - 4.0);
    let (ln_l, sign_l) = assoc_laguerre_ln(m, -0.5, arg)?;
    let sign_r = if ratio < 0.0 && m % 2 == 1 { -1.0 } else { 1.0 };
    Ok((base + m as f64 * ratio.abs().ln() + ln_l, sign_r * sign_l))
}

// ---------------------------------------------------------------------------
// radial Gaussian moment (shared by every phase distribution)
// ---------------------------------------------------------------------------

/// `int_0^inf u exp(-kappa u^2 + sigma u + c) du` for kappa > 0 and complex
/// sigma, c:
/// `e^c [ 1/(2 kappa) + (sigma/(4 kappa)) sqrt(pi/kappa)
///        e^{sigma^2/(4 kappa)} (1 + erf(sigma/(2 sqrt(kappa)))) ]`.
pub fn radial_gaussian_moment(kappa: f64, sigma: C64, c: C64) -> Result<C64> {
    if kappa <= 0.0 {
        return Err(Error::NumericalInstability(format!(
            "radial Gaussian with non-positive quadratic coefficient {kappa:.3e}"
        )));
    }
    let sk = sigma / (2.0 * kappa.sqrt());
    let tail = sigma / (4.0 * kappa) * (std::f64::consts::PI / kappa).sqrt() * erfcx_neg(sk)?;
    Ok(c.exp() * (1.0 / (2.0 * kappa) + tail))
}

// ---------------------------------------------------------------------------
// adaptive Gauss-Kronrod quadrature (oracle-grade)
// ---------------------------------------------------------------------------

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let fc = f(mid);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let fsum = f(mid - dx) + f(mid + dx);
        kronrod += WGK[j] * fsum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * fsum;
        }
    }
    kronrod *= half;
    gauss *= half;
    (kronrod, (kronrod - gauss).abs())
}

/// Adaptive Gauss-Kronrod integration to absolute tolerance `tol`. The
/// domain is pre-split into panels no wider than 2 so narrow displaced
/// humps cannot slip between the nodes of a single coarse rule.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    let tol = tol.max(1e-15);
    let panels = (((b - a) / 2.0).ceil() as usize).max(1);
    let step = (b - a) / panels as f64;
    let mut stack: Vec<(f64, f64, f64)> = (0..panels)
        .map(|i| (a + step * i as f64, a + step * (i + 1) as f64, tol / panels as f64))
        .collect();
    let mut total = 0.0;
    let mut depth_guard = 0usize;
    while let Some((a, b, tol)) = stack.pop() {
        depth_guard += 1;
        if depth_guard > 100_000 {
            total += gk15(&f, a, b).0;
            continue;
        }
        let (val, err) = gk15(&f, a, b);
        if err <= tol || (b - a) < 1e-13 {
            total += val;
        } else {
            let m = 0.5 * (a + b);
            stack.push((a, m, tol / 2.0));
            stack.push((m, b, tol / 2.0));
        }
    }
    total
}

/// Tensor-product 2-D adaptive quadrature over a rectangle.
pub fn integrate_2d<F: Fn(f64, f64) -> f64>(
    f: F,
    ax: f64,
    bx: f64,
    ay: f64,
    by: f64,
    tol: f64,
) -> f64 {
    integrate(|y| integrate(|x| f(x, y), ax, bx, tol / (by - ay).max(1.0)), ay, by, tol)
}
