//! Superposition of squeezed and displaced number states: normalization,
//! Fock coefficients, photon statistics, wavefunction, quasiprobabilities
//! and Pegg-Barnett phase statistics, all in closed form.
//!
//! The state is lambda_eps [D(alpha) + eps D(-alpha)] S(r)|n> with real
//! displacement alpha, squeeze parameter r >= 0 and superposition parameter
//! eps = |eps| e^{i phi}.

use crate::distribution::{Distribution, DistributionKind};
use crate::error::{Error, Result};
use crate::numerics::{assoc_laguerre, hermite, laguerre, ln_factorial, POLY_CAP};
use crate::C64;

const I: C64 = C64::new(0.0, 1.0);

/// The four parameters defining a superposition state.
#[derive(Debug, Clone, PartialEq)]
pub struct SsdnsSpec {
    /// Superposition parameter eps (any complex; the figures use 0, 1, -1, i).
    pub epsilon: C64,
    /// Real displacement.
    pub alpha: f64,
    /// Squeeze parameter, >= 0.
    pub r: f64,
    /// Fock index of the seed number state.
    pub n: usize,
}

impl SsdnsSpec {
    pub fn new(epsilon: C64, alpha: f64, r: f64, n: usize) -> Result<Self> {
        let s = SsdnsSpec { epsilon, alpha, r, n };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.r < 0.0 {
            return Err(Error::InvalidArgument(format!("squeeze parameter r = {} < 0", self.r)));
        }
        if !self.t().is_finite() {
            return Err(Error::InvalidArgument("t = alpha e^r not finite".into()));
        }
        if self.n > POLY_CAP {
            return Err(Error::CapExceeded(format!("Fock index {} > {POLY_CAP}", self.n)));
        }
        Ok(())
    }

    /// t = alpha e^r, the displacement as seen from inside the squeezer.
    pub fn t(&self) -> f64 {
        self.alpha * self.r.exp()
    }

    pub fn eps_abs(&self) -> f64 {
        self.epsilon.norm()
    }

    pub fn eps_phase(&self) -> f64 {
        if self.epsilon.norm() == 0.0 {
            0.0
        } else {
            self.epsilon.arg()
        }
    }
}

/// 1/|lambda|^2 = 1 + |eps|^2 + 2 |eps| e^{-2 t^2} L_n(4 t^2) cos(phi).
fn inv_norm_sqr(spec: &SsdnsSpec) -> Result<f64> {
    let t2 = spec.t() * spec.t();
    let e = spec.eps_abs();
    Ok(1.0 + e * e
        + 2.0 * e * (-2.0 * t2).exp() * laguerre(spec.n, 4.0 * t2)? * spec.eps_phase().cos())
}

/// Normalization constant lambda_eps, taken real positive.
pub fn normalization(spec: &SsdnsSpec) -> Result<f64> {
    spec.validate()?;
    let inv = inv_norm_sqr(spec)?;
    if inv <= 1e-14 {
        return Err(Error::DegenerateState(format!(
            "1/lambda^2 = {inv:.3e} (odd superposition at alpha -> 0)"
        )));
    }
    Ok(1.0 / inv.sqrt())
}

/// Fock amplitude C_m = <m | r, alpha, n>_eps, the inner-product closed form
/// specialized to a bare Fock bra. The half-integer powers of -tanh(r)/2 are
/// the complex roots (i sqrt(tanh r / 2))^(n-j); the r -> 0 limit is the
/// displaced-Fock bilinear form.
pub fn fock_coefficient(spec: &SsdnsSpec, m: usize) -> Result<C64> {
    let lam = normalization(spec)?;
    if m > POLY_CAP {
        return Err(Error::CapExceeded(format!("Fock index {m} > {POLY_CAP}")));
    }
    let n = spec.n;
    let eps = spec.epsilon;
    let parity: f64 = if (n + m) % 2 == 0 { 1.0 } else { -1.0 };
    if spec.r < 1e-12 {
        // displaced-Fock limit: both displacement branches merged into the
        // bracket (-1)^(n-j) + (-1)^(m-j) eps
        let a = spec.alpha;
        let mut sum = C64::new(0.0, 0.0);
        for j in 0..=n.min(m) {
            let ln_c = 0.5 * ln_factorial(n) + 0.5 * ln_factorial(m)
                - ln_factorial(j)
                - ln_factorial(n - j)
                - ln_factorial(m - j);
            let sn = if (n - j) % 2 == 0 { 1.0 } else { -1.0 };
            let sm = if (m - j) % 2 == 0 { 1.0 } else { -1.0 };
            let pow = a.powi((n + m - 2 * j) as i32);
            sum += ln_c.exp() * pow * (C64::new(sn, 0.0) + sm * eps);
        }
        return Ok(lam * (-a * a / 2.0).exp() * sum);
    }
    let t = spec.t();
    let th = spec.r.tanh();
    let sh2 = (2.0 * spec.r).sinh();
    let root = (th / 2.0).sqrt();
    let x1 = I * t * (-spec.r).exp() / sh2.sqrt();
    let x2 = C64::new(t / sh2.sqrt(), 0.0);
    let mut sum = C64::new(0.0, 0.0);
    for j in 0..=n.min(m) {
        let ln_c = 0.5 * ln_factorial(n) + 0.5 * ln_factorial(m)
            - ln_factorial(j)
            - ln_factorial(n - j)
            - ln_factorial(m - j);
        let phase = (I * root).powu((n - j) as u32);
        let ladder = (2.0 / sh2.sqrt()).powi(j as i32);
        sum += ln_c.exp() * phase * ladder * hermite(n - j, x1)? * hermite(m - j, x2)?;
    }
    let pref = lam * root.powi(m as i32) / spec.r.cosh().sqrt();
    Ok(pref * (t * t * (th - 1.0) / 2.0).exp() * sum * (C64::new(1.0, 0.0) + parity * eps))
}

/// Smallest m_max with sum |C_m|^2 >= 1 - tail.
pub fn coefficient_cutoff(spec: &SsdnsSpec, tail: f64) -> Result<usize> {
    let mut mass = 0.0;
    for m in 0..=POLY_CAP {
        mass += fock_coefficient(spec, m)?.norm_sqr();
        if mass >= 1.0 - tail {
            return Ok(m);
        }
    }
    Err(Error::TailMass { mass: 1.0 - mass, tol: tail, dim: POLY_CAP })
}

/// C_0..C_m_max; errors with TailMass when m_max leaves more than 1e-8 of
/// probability outside.
pub fn fock_coefficients(spec: &SsdnsSpec, m_max: usize) -> Result<Vec<C64>> {
    let coeffs: Vec<C64> =
        (0..=m_max).map(|m| fock_coefficient(spec, m)).collect::<Result<_>>()?;
    let mass: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
    if mass < 1.0 - 1e-8 {
        return Err(Error::TailMass { mass: 1.0 - mass, tol: 1e-8, dim: m_max });
    }
    Ok(coeffs)
}

/// P(m) = |C_m|^2 as a photon-number distribution.
pub fn photon_number_distribution(spec: &SsdnsSpec, m_max: usize) -> Result<Distribution> {
    let coeffs = fock_coefficients(spec, m_max)?;
    let grid: Vec<f64> = (0..=m_max).map(|m| m as f64).collect();
    let values: Vec<f64> = coeffs.iter().map(|c| c.norm_sqr()).collect();
    Ok(Distribution::new_1d(DistributionKind::PhotonNumber, grid, values))
}

/// Mean photon number and <a^dag^2 a^2> from the Fock expansion, carried to
/// a tail tight enough for the quadratic weights.
pub fn moments(spec: &SsdnsSpec) -> Result<(f64, f64)> {
    let cutoff = coefficient_cutoff(spec, 1e-13)?;
    let m_max = (cutoff + 24).min(POLY_CAP);
    let mut mean = 0.0;
    let mut second = 0.0;
    for m in 0..=m_max {
        let p = fock_coefficient(spec, m)?.norm_sqr();
        mean += m as f64 * p;
        second += (m * m.saturating_sub(1)) as f64 * p;
    }
    Ok((mean, second))
}

/// Normalized second-order correlation g2(0) = <a^dag^2 a^2>/<n>^2.
pub fn g2_zero(spec: &SsdnsSpec) -> Result<f64> {
    let (mean, second) = moments(spec)?;
    if mean <= 1e-12 {
        return Err(Error::DivisionByZeroIntensity(mean));
    }
    Ok(second / (mean * mean))
}

/// Position wavefunction Psi_n^(eps)(x); `omega_over_hbar` is the single
/// ratio the oscillator constants enter through (default 1 upstream).
pub fn wavefunction(spec: &SsdnsSpec, x_grid: &[f64], omega_over_hbar: f64) -> Result<Vec<C64>> {
    let lam = normalization(spec)?;
    let n = spec.n;
    let er = spec.r.exp();
    let e2r = er * er;
    let w = omega_over_hbar;
    // lambda e^{r/2} / sqrt(2^n n!) * (w/pi)^(1/4)
    let ln_pref = 0.5 * spec.r - 0.5 * (n as f64 * std::f64::consts::LN_2 + ln_factorial(n));
    let pref = lam * ln_pref.exp() * (w / std::f64::consts::PI).powf(0.25);
    let root2a = 2f64.sqrt() * spec.alpha;
    x_grid
        .iter()
        .map(|&x| {
            let xi = x * w.sqrt();
            let um = er * (xi - root2a);
            let up = er * (xi + root2a);
            let gm = (-e2r * (xi - root2a) * (xi - root2a) / 2.0).exp();
            let gp = (-e2r * (xi + root2a) * (xi + root2a) / 2.0).exp();
            let hm = hermite(n, C64::new(um, 0.0))?;
            let hp = hermite(n, C64::new(up, 0.0))?;
            Ok(pref * (gm * hm + spec.epsilon * gp * hp))
        })
        .collect()
}

/// Overlap <m, alpha_b, r_b|_eps_b | n, alpha_a, r_a>_eps_a. The closed form
/// needs R = r_a - r_b != 0 (sinh 2R denominators); equal squeezing falls
/// back to the Fock-coefficient dot product.
pub fn inner_product(ket: &SsdnsSpec, bra: &SsdnsSpec) -> Result<C64> {
    ket.validate()?;
    bra.validate()?;
    let r_diff = ket.r - bra.r;
    if r_diff.abs() < 1e-9 {
        // dot product over a shared tail
        let cut = coefficient_cutoff(ket, 1e-12)?.max(coefficient_cutoff(bra, 1e-12)?);
        let m_max = (cut + 16).min(POLY_CAP);
        let mut acc = C64::new(0.0, 0.0);
        for m in 0..=m_max {
            acc += fock_coefficient(bra, m)?.conj() * fock_coefficient(ket, m)?;
        }
        return Ok(acc);
    }
    if r_diff < 0.0 {
        return Ok(inner_product(bra, ket)?.conj());
    }
    // R > 0 branch of the closed form
    let (n, m) = (ket.n, bra.n);
    let (eps, eps_b) = (ket.epsilon, bra.epsilon);
    let lam = normalization(ket)?;
    let lam_b = normalization(bra)?;
    let rr = r_diff;
    let th = rr.tanh();
    let sh2 = (2.0 * rr).sinh();
    let root = (th / 2.0).sqrt();
    let tau1 = (ket.alpha - bra.alpha) * ket.r.exp();
    let tau2 = (ket.alpha + bra.alpha) * ket.r.exp();
    let x1 = I * tau1 * (-rr).exp() / sh2.sqrt();
    let x2 = C64::new(tau1 / sh2.sqrt(), 0.0);
    let y1 = I * tau2 * (-rr).exp() / sh2.sqrt();
    let y2 = C64::new(tau2 / sh2.sqrt(), 0.0);
    let parity: f64 = if (n + m) % 2 == 0 { 1.0 } else { -1.0 };
    let bracket1 = C64::new(1.0, 0.0) + parity * eps_b.conj() * eps;
    let bracket2 = eps_b.conj() + parity * eps;
    let g1 = (tau1 * tau1 * (th - 1.0) / 2.0).exp();
    let g2 = (tau2 * tau2 * (th - 1.0) / 2.0).exp();
    let mut sum = C64::new(0.0, 0.0);
    for j in 0..=n.min(m) {
        let ln_c = 0.5 * ln_factorial(n) + 0.5 * ln_factorial(m)
            - ln_factorial(j)
            - ln_factorial(n - j)
            - ln_factorial(m - j);
        let phase = (I * root).powu((n - j) as u32);
        let ladder = (2.0 / sh2.sqrt()).powi(j as i32);
        let t1 = g1 * hermite(n - j, x1)? * hermite(m - j, x2)? * bracket1;
        let t2 = g2 * hermite(n - j, y1)? * hermite(m - j, y2)? * bracket2;
        sum += ln_c.exp() * phase * ladder * (t1 + t2);
    }
    let pref = lam_b * lam * root.powi(m as i32) / rr.cosh().sqrt();
    Ok(pref * sum)
}

/// Closed-form Wigner value W^(eps)(x, y): two squeezed Laguerre-Gaussian
/// bells at +-alpha plus the cos(4 y alpha + phi) interference ridge.
pub fn wigner_value(spec: &SsdnsSpec, x: f64, y: f64) -> Result<f64> {
    let lam2 = normalization(spec)?.powi(2);
    let e = spec.eps_abs();
    let phi = spec.eps_phase();
    let e2r = (2.0 * spec.r).exp();
    let em2r = (-2.0 * spec.r).exp();
    let sign = if spec.n % 2 == 0 { 1.0 } else { -1.0 };
    let z1 = y * y * em2r + e2r * (x - spec.alpha) * (x - spec.alpha);
    let z2 = y * y * em2r + e2r * (x + spec.alpha) * (x + spec.alpha);
    let z3 = y * y * em2r + e2r * x * x;
    let n = spec.n;
    let val = e * e * (-2.0 * z2).exp() * laguerre(n, 4.0 * z2)?
        + (-2.0 * z1).exp() * laguerre(n, 4.0 * z1)?
        + 2.0 * e
            * (-2.0 * z3).exp()
            * laguerre(n, 4.0 * z3)?
            * (4.0 * y * spec.alpha + phi).cos();
    Ok(2.0 * sign * lam2 / std::f64::consts::PI * val)
}

/// W over a cartesian mesh.
pub fn wigner(spec: &SsdnsSpec, x_grid: &[f64], y_grid: &[f64]) -> Result<Distribution> {
    let mut values = Vec::with_capacity(x_grid.len() * y_grid.len());
    for &y in y_grid {
        for &x in x_grid {
            values.push(wigner_value(spec, x, y)?);
        }
    }
    Ok(Distribution::new_2d(DistributionKind::Wigner2d, x_grid.to_vec(), y_grid.to_vec(), values))
}

/// <beta| D(gamma) S(r) |n> for real gamma; the building block of the
/// Q-function. r = 0 uses the displaced-Fock overlap directly.
pub fn displaced_squeezed_overlap(beta: C64, gamma: f64, r: f64, n: usize) -> Result<C64> {
    let g = C64::new(gamma, 0.0);
    let mu = beta - g;
    let phase = ((g * beta.conj() - g.conj() * beta) / 2.0).exp();
    if r < 1e-12 {
        let amp = (-mu.norm_sqr() / 2.0).exp() * mu.conj().powu(n as u32)
            * (-0.5 * ln_factorial(n)).exp();
        return Ok(phase * amp);
    }
    let th = r.tanh();
    let sh2 = (2.0 * r).sinh();
    let pref = (-0.5 * ln_factorial(n)).exp() / r.cosh().sqrt();
    let herm = hermite(n, I * mu.conj() / sh2.sqrt())?;
    let gauss = (-mu.norm_sqr() / 2.0 - mu.conj() * mu.conj() * th / 2.0).exp();
    Ok(phase * pref * (-I).powu(n as u32) * (th / 2.0).powf(n as f64 / 2.0) * herm * gauss)
}

/// Q(beta) = |<beta|psi>|^2 / pi, assembled from the two displaced branches.
pub fn q_value(spec: &SsdnsSpec, beta: C64) -> Result<f64> {
    let lam = normalization(spec)?;
    let amp = displaced_squeezed_overlap(beta, spec.alpha, spec.r, spec.n)?
        + spec.epsilon * displaced_squeezed_overlap(beta, -spec.alpha, spec.r, spec.n)?;
    Ok(lam * lam * amp.norm_sqr() / std::f64::consts::PI)
}

/// Q over a cartesian mesh of beta = x + iy.
pub fn q_function(spec: &SsdnsSpec, x_grid: &[f64], y_grid: &[f64]) -> Result<Distribution> {
    let mut values = Vec::with_capacity(x_grid.len() * y_grid.len());
    for &y in y_grid {
        for &x in x_grid {
            values.push(q_value(spec, C64::new(x, y))?);
        }
    }
    Ok(Distribution::new_2d(DistributionKind::Q2d, x_grid.to_vec(), y_grid.to_vec(), values))
}

/// Truncation rule for the finite Pegg-Barnett space: the smallest s with
/// sum_{m<=s} |C_m|^2 >= 1 - 1e-10, doubled.
pub fn pegg_barnett_truncation(spec: &SsdnsSpec) -> Result<usize> {
    let s = coefficient_cutoff(spec, 1e-10)?;
    Ok((2 * s).max(8).min(POLY_CAP))
}

/// Continuum phase distribution P(Theta) = |sum_m C_m e^{-im Theta}|^2/(2 pi)
/// over the window [-pi, pi). `s_truncation` of None applies the
/// convergence rule; the value used lands in the metadata.
pub fn pegg_barnett_distribution(
    spec: &SsdnsSpec,
    s_truncation: Option<usize>,
    theta_grid: &[f64],
) -> Result<Distribution> {
    let s = match s_truncation {
        Some(s) => s,
        None => pegg_barnett_truncation(spec)?,
    };
    let coeffs = fock_coefficients(spec, s)?;
    let values: Vec<f64> = theta_grid
        .iter()
        .map(|&theta| {
            let amp: C64 = coeffs
                .iter()
                .enumerate()
                .map(|(m, c)| c * C64::from_polar(1.0, -(m as f64) * theta))
                .sum();
            amp.norm_sqr() / (2.0 * std::f64::consts::PI)
        })
        .collect();
    Ok(Distribution::new_1d(DistributionKind::Phase, theta_grid.to_vec(), values)
        .with_meta("s_truncation", s))
}

/// First and second angular moments over [-pi, pi) from the coefficient sums.
fn phase_moments(coeffs: &[C64]) -> (f64, f64) {
    let mut mean = 0.0;
    let mut second = std::f64::consts::PI * std::f64::consts::PI / 3.0;
    for m in 0..coeffs.len() {
        for mp in 0..m {
            let k = (m - mp) as f64;
            let sign = if (m - mp) % 2 == 0 { 1.0 } else { -1.0 };
            let cross = coeffs[m] * coeffs[mp].conj();
            mean += -2.0 * sign * cross.im / k;
            second += 4.0 * sign * cross.re / (k * k);
        }
    }
    (mean, second)
}

/// Pegg-Barnett phase variance; the vacuum limit is pi^2/3.
pub fn phase_variance(spec: &SsdnsSpec, s_truncation: Option<usize>) -> Result<f64> {
    let s = match s_truncation {
        Some(s) => s,
        None => pegg_barnett_truncation(spec)?,
    };
    let coeffs = fock_coefficients(spec, s)?;
    let (mean, second) = phase_moments(&coeffs);
    Ok(second - mean * mean)
}

/// Default reference angle Theta_0 of the phase window.
pub const THETA0_DEFAULT: f64 = -std::f64::consts::PI;

/// Number and phase squeezing factors (S_N, S_theta); -1 means maximal
/// squeezing. The commutator is <[n, Phi]> = i [1 - 2 pi P(Theta_0)].
pub fn number_phase_squeezing(
    spec: &SsdnsSpec,
    s_truncation: Option<usize>,
    theta0: f64,
) -> Result<(f64, f64)> {
    let s = match s_truncation {
        Some(s) => s,
        None => pegg_barnett_truncation(spec)?,
    };
    let coeffs = fock_coefficients(spec, s)?;
    let p0: f64 = {
        let amp: C64 = coeffs
            .iter()
            .enumerate()
            .map(|(m, c)| c * C64::from_polar(1.0, -(m as f64) * theta0))
            .sum();
        amp.norm_sqr() / (2.0 * std::f64::consts::PI)
    };
    let comm = (1.0 - 2.0 * std::f64::consts::PI * p0).abs();
    if comm <= 1e-12 {
        return Err(Error::DegenerateCommutator(comm));
    }
    let (mean_n, second) = moments(spec)?;
    let var_n = second + mean_n - mean_n * mean_n;
    let (mean_th, second_th) = phase_moments(&coeffs);
    let var_th = second_th - mean_th * mean_th;
    Ok((var_n / (0.5 * comm) - 1.0, var_th / (0.5 * comm) - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(eps: C64, alpha: f64, r: f64, n: usize) -> SsdnsSpec {
        SsdnsSpec::new(eps, alpha, r, n).unwrap()
    }

    #[test]
    fn normalization_trivial_values() {
        // eps = 0 -> 1
        let s = spec(C64::new(0.0, 0.0), 1.3, 0.4, 2);
        assert!((normalization(&s).unwrap() - 1.0).abs() < 1e-14);
        // eps = 1, alpha = 0 -> 1/2 for any n
        for n in 0..4 {
            let s = spec(C64::new(1.0, 0.0), 0.0, 0.7, n);
            assert!((normalization(&s).unwrap() - 0.5).abs() < 1e-14);
        }
        // eps = i -> 1/sqrt(2) regardless of alpha, r, n
        let s = spec(C64::new(0.0, 1.0), 1.7, 0.9, 3);
        assert!((normalization(&s).unwrap() - 0.5f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn normalization_degenerate_odd_state() {
        let s = SsdnsSpec { epsilon: C64::new(-1.0, 0.0), alpha: 0.0, r: 0.0, n: 0 };
        assert!(matches!(normalization(&s), Err(Error::DegenerateState(_))));
    }

    #[test]
    fn coefficients_kronecker_case() {
        // eps = 0, alpha = 0, r = 0: C_m = delta_{m,n}
        let s = spec(C64::new(0.0, 0.0), 0.0, 0.0, 3);
        for m in 0..8 {
            let c = fock_coefficient(&s, m).unwrap();
            let want = if m == 3 { 1.0 } else { 0.0 };
            assert!((c - C64::new(want, 0.0)).norm() < 1e-14, "m={m}");
        }
    }

    #[test]
    fn odd_parity_kills_even_coefficients() {
        // eps = -1, n = 0: only odd m survive
        let s = spec(C64::new(-1.0, 0.0), 1.2, 0.5, 0);
        for m in (0..12).step_by(2) {
            assert!(fock_coefficient(&s, m).unwrap().norm() < 1e-14, "m={m}");
        }
        assert!(fock_coefficient(&s, 1).unwrap().norm() > 1e-3);
    }

    #[test]
    fn coefficients_normalize() {
        for s in [
            spec(C64::new(1.0, 0.0), 1.0, 0.5, 1),
            spec(C64::new(0.0, 1.0), 2.0, 0.8, 3),
            spec(C64::new(-1.0, 0.0), 1.5, 0.0, 2),
        ] {
            let cut = coefficient_cutoff(&s, 1e-10).unwrap();
            let coeffs = fock_coefficients(&s, cut + 8).unwrap();
            let mass: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
            assert!((mass - 1.0).abs() < 1e-8, "{mass}");
        }
    }

    #[test]
    fn photon_distribution_examples() {
        // Kronecker case
        let s = spec(C64::new(0.0, 0.0), 0.0, 0.0, 2);
        let d = photon_number_distribution(&s, 8).unwrap();
        assert!((d.values[2] - 1.0).abs() < 1e-12);
        assert!(d.values[0].abs() < 1e-14);
        // interference: even case oscillates differently from the Yurke case
        let se = spec(C64::new(1.0, 0.0), 2.0, 0.8, 3);
        let sy = spec(C64::new(0.0, 1.0), 2.0, 0.8, 3);
        let de = photon_number_distribution(&se, 80).unwrap();
        let dy = photon_number_distribution(&sy, 80).unwrap();
        assert!(!de.local_minima().is_empty(), "even curve has interior minima");
        let diff = de
            .values
            .iter()
            .zip(&dy.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(diff > 1e-3, "even and Yurke curves differ");
    }

    #[test]
    fn g2_poissonian_points() {
        // Yurke-Stoler: g2 = 1
        let s = spec(C64::new(0.0, 1.0), 1.0, 0.0, 0);
        assert!((g2_zero(&s).unwrap() - 1.0).abs() < 1e-9);
        // coherent state: g2 = 1
        let s = spec(C64::new(0.0, 0.0), 1.5, 0.0, 0);
        assert!((g2_zero(&s).unwrap() - 1.0).abs() < 1e-9);
        // vacuum guards
        let s = spec(C64::new(0.0, 0.0), 0.0, 0.0, 0);
        assert!(matches!(g2_zero(&s), Err(Error::DivisionByZeroIntensity(_))));
    }

    #[test]
    fn wavefunction_ground_state_and_odd_zero() {
        // eps=0, alpha=0, r=0, n=0: Gaussian ground state (w/pi)^(1/4) e^{-w x^2/2}
        let s = spec(C64::new(0.0, 0.0), 0.0, 0.0, 0);
        let xs = [0.0, 0.5, -1.2];
        let psi = wavefunction(&s, &xs, 1.0).unwrap();
        for (&x, p) in xs.iter().zip(&psi) {
            let want = (1.0 / std::f64::consts::PI).powf(0.25) * (-x * x / 2.0).exp();
            assert!((p - C64::new(want, 0.0)).norm() < 1e-12);
        }
        // eps=-1: odd superposition vanishes at the origin
        let s = spec(C64::new(-1.0, 0.0), 1.0, 0.3, 2);
        let psi = wavefunction(&s, &[0.0], 1.0).unwrap();
        assert!(psi[0].norm() < 1e-13);
    }

    #[test]
    fn wavefunction_normalizes_by_quadrature() {
        let s = spec(C64::new(1.0, 0.0), 1.0, 0.5, 1);
        let n = 4001;
        let xs: Vec<f64> = (0..n).map(|i| -12.0 + 24.0 * i as f64 / (n - 1) as f64).collect();
        let psi = wavefunction(&s, &xs, 1.0).unwrap();
        let dens: Vec<f64> = psi.iter().map(|p| p.norm_sqr()).collect();
        let total = crate::distribution::trapezoid(&xs, &dens);
        assert!((total - 1.0).abs() < 1e-6, "{total}");
    }

    #[test]
    fn inner_product_self_overlap_and_parity() {
        let a = spec(C64::new(1.0, 0.0), 1.0, 0.5, 2);
        let v = inner_product(&a, &a).unwrap();
        assert!((v - C64::new(1.0, 0.0)).norm() < 1e-10, "{v}");
        // even vs odd subspaces are orthogonal (same n, r, alpha)
        let even = spec(C64::new(1.0, 0.0), 1.0, 0.4, 2);
        let odd = spec(C64::new(-1.0, 0.0), 1.0, 0.4, 2);
        assert!(inner_product(&even, &odd).unwrap().norm() < 1e-12);
        // hermiticity between the two closed-form branches
        let b = spec(C64::new(0.0, 1.0), 0.5, 0.9, 1);
        let ab = inner_product(&a, &b).unwrap();
        let ba = inner_product(&b, &a).unwrap();
        assert!((ab - ba.conj()).norm() < 1e-11);
    }

    #[test]
    fn wigner_known_points() {
        // vacuum: (2/pi) e^{-2(x^2+y^2)}
        let s = spec(C64::new(0.0, 0.0), 0.0, 0.0, 0);
        let w = wigner_value(&s, 0.3, -0.4).unwrap();
        let want = 2.0 / std::f64::consts::PI * (-2.0f64 * (0.09 + 0.16)).exp();
        assert!((w - want).abs() < 1e-14);
        // Fock |1>: -2/pi at the origin
        let s = spec(C64::new(0.0, 0.0), 0.0, 0.0, 1);
        assert!((wigner_value(&s, 0.0, 0.0).unwrap() + 2.0 / std::f64::consts::PI).abs() < 1e-14);
    }

    #[test]
    fn q_nonnegative_and_two_peaked() {
        let s = spec(C64::new(1.0, 0.0), 2.0, 0.0, 1);
        let xs = crate::distribution::linspace(-4.0, 4.0, 81);
        let ys = crate::distribution::linspace(-2.0, 2.0, 41);
        let q = q_function(&s, &xs, &ys).unwrap();
        assert!(q.min_value() >= -1e-12);
        // two closed top-hole peaks: along y = 0 the trace has maxima
        // on both sides of each +-alpha and a dip at +-alpha itself
        let mid = 20usize; // y = 0 row
        let row: Vec<f64> = (0..xs.len()).map(|ix| q.value_at(ix, mid)).collect();
        let maxima = crate::distribution::Distribution::new_1d(
            DistributionKind::Phase,
            xs.clone(),
            row,
        )
        .local_maxima();
        assert!(maxima.len() >= 4, "top-hole structure: got {maxima:?}");
    }

    #[test]
    fn pegg_barnett_vacuum_uniform() {
        let s = spec(C64::new(0.0, 0.0), 0.0, 0.0, 0);
        let grid = crate::distribution::linspace(-std::f64::consts::PI, std::f64::consts::PI, 33);
        let d = pegg_barnett_distribution(&s, None, &grid).unwrap();
        for v in &d.values {
            assert!((v - 1.0 / (2.0 * std::f64::consts::PI)).abs() < 1e-12);
        }
    }

    #[test]
    fn pegg_barnett_peak_count_displaced_fock() {
        // eps=0, alpha=2, n=2, r=0: n+1 = 3 peaks around Theta = 0
        let s = spec(C64::new(0.0, 0.0), 2.0, 0.0, 2);
        let grid = crate::distribution::linspace(-std::f64::consts::PI, std::f64::consts::PI, 721);
        let d = pegg_barnett_distribution(&s, None, &grid).unwrap();
        let peaks = d.local_maxima();
        let central: Vec<usize> =
            peaks.into_iter().filter(|&i| grid[i].abs() < 1.8).collect();
        assert_eq!(central.len(), 3, "peaks at {central:?}");
    }

    #[test]
    fn pegg_barnett_integrates_to_one() {
        let s = spec(C64::new(1.0, 0.0), 1.0, 0.3, 1);
        let grid = crate::distribution::linspace(-std::f64::consts::PI, std::f64::consts::PI, 2001);
        let d = pegg_barnett_distribution(&s, None, &grid).unwrap();
        assert!((d.total_mass() - 1.0).abs() < 1e-8, "{}", d.total_mass());
    }

    #[test]
    fn phase_variance_vacuum_and_large_alpha() {
        let vac = spec(C64::new(0.0, 0.0), 0.0, 0.0, 0);
        let v = phase_variance(&vac, None).unwrap();
        assert!((v - std::f64::consts::PI.powi(2) / 3.0).abs() < 1e-8);
        // large alpha: the even superposition keeps equal peaks at 0 and
        // +-pi, so the window variance tends to pi^2/2 (not back to the
        // vacuum value; the coefficient sums stay convergent here)
        let s = spec(C64::new(1.0, 0.0), 6.0, 0.0, 1);
        let v = phase_variance(&s, None).unwrap();
        assert!(v > std::f64::consts::PI.powi(2) / 3.0, "{v}");
        // closed-form variance agrees with direct moment integration of the
        // distribution
        let s = spec(C64::new(1.0, 0.0), 1.5, 0.3, 1);
        let v = phase_variance(&s, None).unwrap();
        let grid = crate::distribution::linspace(
            -std::f64::consts::PI,
            std::f64::consts::PI,
            20001,
        );
        let d = pegg_barnett_distribution(&s, None, &grid).unwrap();
        let m1: f64 = (1..grid.len())
            .map(|i| {
                0.5 * (grid[i] * d.values[i] + grid[i - 1] * d.values[i - 1])
                    * (grid[i] - grid[i - 1])
            })
            .sum();
        let m2: f64 = (1..grid.len())
            .map(|i| {
                0.5 * (grid[i] * grid[i] * d.values[i]
                    + grid[i - 1] * grid[i - 1] * d.values[i - 1])
                    * (grid[i] - grid[i - 1])
            })
            .sum();
        assert!((v - (m2 - m1 * m1)).abs() < 1e-7, "{v} vs {}", m2 - m1 * m1);
    }

    #[test]
    fn number_squeezing_at_small_alpha() {
        // eps=0, alpha -> 0: S_N -> -1 (number state)
        let s = spec(C64::new(0.0, 0.0), 1e-4, 0.0, 1);
        let (sn, _st) = number_phase_squeezing(&s, None, THETA0_DEFAULT).unwrap();
        assert!(sn < -0.999, "{sn}");
        // coherent, alpha = 4: phase squeezing (S_theta < 0)
        let s = spec(C64::new(0.0, 0.0), 4.0, 0.0, 0);
        let (_sn, st) = number_phase_squeezing(&s, None, THETA0_DEFAULT).unwrap();
        assert!(st < 0.0, "{st}");
    }

    #[test]
    fn commutator_identity_from_distribution() {
        // |<[n, Phi]>| = |1 - 2 pi P(Theta_0)| checked against the
        // distribution itself
        let s = spec(C64::new(1.0, 0.0), 1.0, 0.2, 1);
        let strunc = pegg_barnett_truncation(&s).unwrap();
        let d = pegg_barnett_distribution(&s, Some(strunc), &[THETA0_DEFAULT]).unwrap();
        let coeffs = fock_coefficients(&s, strunc).unwrap();
        let amp: C64 = coeffs
            .iter()
            .enumerate()
            .map(|(m, c)| c * C64::from_polar(1.0, -(m as f64) * THETA0_DEFAULT))
            .sum();
        let p0 = amp.norm_sqr() / (2.0 * std::f64::consts::PI);
        assert!((d.values[0] - p0).abs() < 1e-8);
    }
}
