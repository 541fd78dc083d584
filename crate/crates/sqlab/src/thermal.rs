//! Superposition of squeezed and displaced states embedded in thermal
//! noise, described by a Bose-Einstein-weighted density operator: its
//! characteristic function, quasiprobabilities, moments, photon-number
//! distribution, purity and phase distribution.

use crate::distribution::{Distribution, DistributionKind};
use crate::error::{Error, Result};
use crate::numerics::{
    assoc_laguerre, integrate_2d, laguerre_gaussian_ln, ln_factorial, radial_gaussian_moment,
};
use crate::ssdns::SsdnsSpec;
use crate::C64;

/// Thermal superposition spec: the base state's Fock index is summed over
/// with Bose-Einstein weights, so only (eps, alpha, r) of the base and the
/// mean thermal photon number matter.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermalSpec {
    pub base: SsdnsSpec,
    pub nbar: f64,
}

impl ThermalSpec {
    pub fn new(base: SsdnsSpec, nbar: f64) -> Result<Self> {
        let s = ThermalSpec { base: SsdnsSpec { n: 0, ..base }, nbar };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        if self.nbar < 0.0 || !self.nbar.is_finite() {
            return Err(Error::InvalidArgument(format!("nbar = {} out of range", self.nbar)));
        }
        Ok(())
    }

    /// Bose-Einstein quotient z = nbar/(nbar + 1) in [0, 1).
    pub fn z(&self) -> f64 {
        self.nbar / (self.nbar + 1.0)
    }
}

/// The derived quantities the characteristic function is built from.
#[derive(Debug, Clone, Copy)]
pub struct ThermalDerived {
    /// Interference suppression exponent G = 2 (1 + 2 nbar) t^2.
    pub g: f64,
    /// C = (1 + 2 nbar) alpha e^{2r} (real for real alpha).
    pub c: f64,
    /// A = nbar + (1 + 2 nbar) sinh^2 r.
    pub a: f64,
    /// E = (1 + 2 nbar) sinh r cosh r.
    pub e: f64,
}

pub fn derived(spec: &ThermalSpec) -> ThermalDerived {
    let f = 1.0 + 2.0 * spec.nbar;
    let (sh, ch) = (spec.base.r.sinh(), spec.base.r.cosh());
    let t = spec.base.t();
    ThermalDerived {
        g: 2.0 * f * t * t,
        c: f * spec.base.alpha * (2.0 * spec.base.r).exp(),
        a: spec.nbar + f * sh * sh,
        e: f * sh * ch,
    }
}

/// Normalization lambda_T = [1 + |eps|^2 + 2|eps| cos(phi) e^{-2(1+2nbar)t^2}]^-1.
pub fn thermal_normalization(spec: &ThermalSpec) -> Result<f64> {
    spec.validate()?;
    let e = spec.base.eps_abs();
    let t2 = spec.base.t() * spec.base.t();
    let inv =
        1.0 + e * e + 2.0 * e * spec.base.eps_phase().cos() * (-2.0 * (1.0 + 2.0 * spec.nbar) * t2).exp();
    if inv <= 1e-14 {
        return Err(Error::DegenerateState(format!("1/lambda_T = {inv:.3e}")));
    }
    Ok(1.0 / inv)
}

/// s-parametrized characteristic function C(zeta, s), s in {1, 0, -1}.
pub fn characteristic_function(spec: &ThermalSpec, zeta: C64, s: i8) -> Result<C64> {
    let lam = thermal_normalization(spec)?;
    let d = derived(spec);
    let e = spec.base.eps_abs();
    let phi = spec.base.eps_phase();
    let alpha = spec.base.alpha;
    let aa = d.a + 0.5 * (1.0 - s as f64);
    let quad = (-aa * zeta.norm_sqr() - 0.5 * d.e * (zeta * zeta + zeta.conj() * zeta.conj()).re).exp();
    let lin = zeta - zeta.conj();
    let cross = (zeta.conj() + zeta) * d.c;
    let bracket = (lin * alpha).exp()
        + e * e * (-lin * alpha).exp()
        + e * (C64::new(0.0, -phi) - C64::new(d.g, 0.0) - cross).exp()
        + e * (C64::new(0.0, phi) - C64::new(d.g, 0.0) + cross).exp();
    Ok(lam * quad * bracket)
}

fn quasi_denominator(d: &ThermalDerived, s: i8) -> (f64, f64) {
    let aa = d.a + 0.5 * (1.0 - s as f64);
    (aa, aa * aa - d.e * d.e)
}

/// s-parametrized quasiprobability W(beta, s); the interference phases are
/// exp(-i phi + K) and exp(+i phi + K^*).
pub fn quasiprobability_value(spec: &ThermalSpec, beta: C64, s: i8) -> Result<f64> {
    let lam = thermal_normalization(spec)?;
    let d = derived(spec);
    let (aa, den) = quasi_denominator(&d, s);
    if den <= 0.0 {
        return Err(Error::PFunctionSingular(format!(
            "(A + (1-s)/2)^2 - E^2 = {den:.3e} <= 0 at s = {s}"
        )));
    }
    let e = spec.base.eps_abs();
    let phi = spec.base.eps_phase();
    let alpha = spec.base.alpha;
    let gterm = |center: f64| -> f64 {
        let m = beta - C64::new(center, 0.0);
        ((-aa * m.norm_sqr() - 0.5 * d.e * (m * m + m.conj() * m.conj()).re) / den).exp()
    };
    let c = C64::new(d.c, 0.0);
    let k = (aa * (c - beta) * (c.conj() + beta.conj())
        - d.e
            * ((C64::new(d.c, -beta.im)).powu(2) + (C64::new(-beta.re, 0.0)).powu(2)))
        / den;
    let interference =
        e * ((C64::new(0.0, -phi) + k - d.g).exp() + (C64::new(0.0, phi) + k.conj() - d.g).exp());
    let total = gterm(alpha) + e * e * gterm(-alpha) + interference.re;
    Ok(lam / (std::f64::consts::PI * den.sqrt()) * total)
}

/// W(beta, s) over a cartesian mesh of beta = x + iy.
pub fn quasiprobability(
    spec: &ThermalSpec,
    x_grid: &[f64],
    y_grid: &[f64],
    s: i8,
) -> Result<Distribution> {
    let mut values = Vec::with_capacity(x_grid.len() * y_grid.len());
    for &y in y_grid {
        for &x in x_grid {
            values.push(quasiprobability_value(spec, C64::new(x, y), s)?);
        }
    }
    let kind = if s == -1 { DistributionKind::Q2d } else { DistributionKind::Wigner2d };
    Ok(Distribution::new_2d(kind, x_grid.to_vec(), y_grid.to_vec(), values))
}

/// <a^dag a> and <a^dag^2 a^2>.
pub fn moments(spec: &ThermalSpec) -> Result<(f64, f64)> {
    let lam = thermal_normalization(spec)?;
    let d = derived(spec);
    let e = spec.base.eps_abs();
    let cphi = spec.base.eps_phase().cos();
    let a2 = spec.base.alpha * spec.base.alpha;
    let c2 = d.c * d.c;
    let expg = (-d.g).exp();
    let mean = lam * ((d.a + a2) * (1.0 + e * e) + 2.0 * e * expg * (d.a - c2) * cphi);
    let second = lam
        * ((2.0 * d.a * d.a + 4.0 * a2 * d.a + d.e * d.e + a2 * a2 - 2.0 * d.e * a2)
            * (1.0 + e * e)
            + 2.0 * e
                * expg
                * (2.0 * d.a * d.a + d.e * d.e - 4.0 * c2 * d.a + c2 * c2 - 2.0 * d.e * c2)
                * cphi);
    Ok((mean, second))
}

pub fn g2_zero(spec: &ThermalSpec) -> Result<f64> {
    let (mean, second) = moments(spec)?;
    if mean <= 1e-12 {
        return Err(Error::DivisionByZeroIntensity(mean));
    }
    Ok(second / (mean * mean))
}

/// P(n) as the bilinear Laguerre sum over the squeezed (x) and stretched (y)
/// principal axes, assembled in log space so the thermal interference
/// exponents never overflow.
pub fn photon_probability(spec: &ThermalSpec, n: usize) -> Result<f64> {
    let lam = thermal_normalization(spec)?;
    let d = derived(spec);
    let (aa, den) = quasi_denominator(&d, 0);
    let e = spec.base.eps_abs();
    let cphi = spec.base.eps_phase().cos();
    let alpha2 = spec.base.alpha * spec.base.alpha;
    let px = 1.0 / (aa - d.e);
    let py = 1.0 / (aa + d.e);
    let ln_pref = (2.0 * lam / (std::f64::consts::PI * den.sqrt())).ln();
    let parity = if n % 2 == 0 { 1.0 } else { -1.0 };
    let mut total = 0.0;
    for m in 0..=n {
        let (lx_mix, sx_mix) = laguerre_gaussian_ln(m, px, alpha2)?;
        let (ly_mix, sy_mix) = laguerre_gaussian_ln(n - m, py, 0.0)?;
        total += (1.0 + e * e) * sx_mix * sy_mix * (ln_pref + lx_mix + ly_mix).exp();
        if e > 0.0 {
            let (lx_int, sx_int) = laguerre_gaussian_ln(m, px, 0.0)?;
            let (ly_int, sy_int) = laguerre_gaussian_ln(n - m, py, -d.c * d.c)?;
            total += 2.0
                * e
                * cphi
                * sx_int
                * sy_int
                * (ln_pref + lx_int + ly_int - d.g).exp();
        }
    }
    Ok(parity * total)
}

/// P(n) for n = 0..n_max; TailMass when the window keeps less than 1 - 1e-7.
pub fn photon_distribution(spec: &ThermalSpec, n_max: usize) -> Result<Distribution> {
    let values: Vec<f64> =
        (0..=n_max).map(|n| photon_probability(spec, n)).collect::<Result<_>>()?;
    let mass: f64 = values.iter().sum();
    if mass < 1.0 - 1e-7 {
        return Err(Error::TailMass { mass: 1.0 - mass, tol: 1e-7, dim: n_max });
    }
    let grid = (0..=n_max).map(|n| n as f64).collect();
    Ok(Distribution::new_1d(DistributionKind::PhotonNumber, grid, values))
}

/// P(n) over a plotting window without the tail gate, for figure slices
/// whose distributions extend beyond the polynomial cap.
pub fn photon_distribution_window(spec: &ThermalSpec, n_max: usize) -> Result<Distribution> {
    let values: Vec<f64> =
        (0..=n_max).map(|n| photon_probability(spec, n)).collect::<Result<_>>()?;
    let grid = (0..=n_max).map(|n| n as f64).collect();
    Ok(Distribution::new_1d(DistributionKind::PhotonNumber, grid, values))
}

/// The r -> 0 reduction of the photon-number distribution (thermal even/odd
/// coherent-state form), written with the normalization and Laguerre
/// arguments squaring against the general formula.
pub fn photon_probability_r0(spec: &ThermalSpec, n: usize) -> Result<f64> {
    let lam = thermal_normalization(spec)?;
    let e = spec.base.eps_abs();
    let cphi = spec.base.eps_phase().cos();
    let a2 = spec.base.alpha * spec.base.alpha;
    let nb = spec.nbar;
    if nb < 1e-12 {
        // pure even/odd coherent mixture limit
        let ln_p = n as f64 * a2.max(1e-300).ln() - ln_factorial(n) - a2;
        let parity = if n % 2 == 0 { 1.0 } else { -1.0 };
        let val = if a2 == 0.0 && n > 0 { 0.0 } else { ln_p.exp() };
        return Ok(lam * val * (1.0 + e * e + 2.0 * e * cphi * parity));
    }
    let z = spec.z();
    let geo = z.powi(n as i32) / (1.0 + nb);
    let t1 = (1.0 + e * e)
        * (-a2 / (1.0 + nb)).exp()
        * assoc_laguerre(n, 0.0, C64::new(-a2 / (nb * (1.0 + nb)), 0.0))?.re;
    let arg2 = (2.0 * nb + 1.0) * (2.0 * nb + 1.0) * a2 / (nb * (1.0 + nb));
    let t2 = 2.0 * e * cphi * (-(2.0 * nb + 1.0) * a2 / (1.0 + nb)).exp()
        * assoc_laguerre(n, 0.0, C64::new(arg2, 0.0))?.re;
    Ok(lam * geo * (t1 + t2))
}

/// Degree of purity Tr rho^2 = (1/pi) int |C(zeta, 0)|^2 d^2 zeta by
/// adaptive quadrature, clipped at 8 sigma of the Gaussian envelope plus the
/// interference displacement.
pub fn purity(spec: &ThermalSpec) -> Result<f64> {
    thermal_normalization(spec)?;
    let d = derived(spec);
    let (aa, _) = quasi_denominator(&d, 0);
    let lim_u = 8.0 / (2.0 * (aa - d.e)).sqrt() + d.c.abs() / (aa + d.e) + 1.0;
    let lim_v = 8.0 / (2.0 * (aa + d.e)).sqrt() + spec.base.alpha.abs() + 1.0;
    let spec2 = spec.clone();
    let val = integrate_2d(
        move |u, v| {
            characteristic_function(&spec2, C64::new(u, v), 0)
                .map(|c| c.norm_sqr())
                .unwrap_or(0.0)
        },
        -lim_u,
        lim_u,
        -lim_v,
        lim_v,
        1e-10,
    );
    Ok(val / std::f64::consts::PI)
}

/// The printed closed-form purity (|eps| = 1 only), kept behind this
/// explicit name for comparison plots; its normalization power disagrees
/// with the trace route, which is why [`purity`] integrates instead.
pub fn purity_paper_formula(spec: &ThermalSpec) -> Result<f64> {
    if (spec.base.eps_abs() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument("closed-form purity assumes |eps| = 1".into()));
    }
    let lam = thermal_normalization(spec)?;
    let phi = spec.base.eps_phase();
    let f = 2.0 * spec.nbar + 1.0;
    let e2r = (2.0 * spec.base.r).exp();
    let a2 = spec.base.alpha * spec.base.alpha;
    Ok(lam / f
        * (2.0
            + (-4.0 * e2r * a2 / f).exp()
            + 4.0 * (-e2r * a2 * (f + 1.0 / f)).exp() * phi.cos()
            + (-4.0 * e2r * a2 * f).exp() * (2.0 * phi).cos()))
}

/// Phase distribution P(theta, s) by radial integration of the
/// quasiprobability; s = -1 is the safe default, s = 0 is allowed and
/// flagged, s = 1 errors once the squeezed axis loses positivity.
pub fn phase_value(spec: &ThermalSpec, s: i8, theta: f64) -> Result<f64> {
    let lam = thermal_normalization(spec)?;
    let d = derived(spec);
    let (aa, den) = quasi_denominator(&d, s);
    if aa - d.e <= 0.0 || den <= 0.0 {
        return Err(Error::NumericalInstability(format!(
            "phase distribution denominators vanish at s = {s}"
        )));
    }
    let e = spec.base.eps_abs();
    let phi = spec.base.eps_phase();
    let alpha = spec.base.alpha;
    let (ct, st) = (theta.cos(), theta.sin());
    let kappa = ct * ct / (aa - d.e) + st * st / (aa + d.e);
    let c_mix = C64::new(-alpha * alpha / (aa - d.e), 0.0);
    let mut total = radial_gaussian_moment(kappa, C64::new(2.0 * alpha * ct / (aa - d.e), 0.0), c_mix)?
        .re;
    total += e * e
        * radial_gaussian_moment(kappa, C64::new(-2.0 * alpha * ct / (aa - d.e), 0.0), c_mix)?.re;
    if e > 0.0 {
        let sigma = C64::new(0.0, -2.0 * d.c * st / (aa + d.e));
        let off = C64::new(d.c * d.c / (aa + d.e) - d.g, 0.0);
        let v = radial_gaussian_moment(kappa, sigma, off)?;
        total += 2.0 * e * (C64::new(0.0, -phi).exp() * v).re;
    }
    Ok(lam / (std::f64::consts::PI * den.sqrt()) * total)
}

pub fn phase_distribution(spec: &ThermalSpec, s: i8, theta_grid: &[f64]) -> Result<Distribution> {
    let values: Vec<f64> =
        theta_grid.iter().map(|&th| phase_value(spec, s, th)).collect::<Result<_>>()?;
    let mut dist = Distribution::new_1d(DistributionKind::Phase, theta_grid.to_vec(), values)
        .with_meta("ordering_s", s);
    if s != -1 {
        dist = dist.with_meta("warning", "s != -1 phase distribution may lose positivity");
    }
    Ok(dist)
}
