//! Three-boson squeeze operator: Bogoliubov coefficients, photon-number
//! sum/difference variances, multimode squeezing factors, statistics of
//! squeezed coherent and squeezed number states, Cauchy-Schwarz violation
//! and quasiprobability functions.

use crate::distribution::{Distribution, DistributionKind};
use crate::error::{Error, Result};
use crate::numerics::{ln_factorial, radial_gaussian_moment};
use crate::C64;

/// Squeeze triple (r1, r2, r3); validity needs r3^2 < r1^2 + r2^2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriSqueezeParams {
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
}

impl TriSqueezeParams {
    pub fn new(r1: f64, r2: f64, r3: f64) -> Result<Self> {
        let p = TriSqueezeParams { r1, r2, r3 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.r1 < 0.0 || self.r2 < 0.0 || self.r3 < 0.0 {
            return Err(Error::InvalidArgument("squeeze parameters must be >= 0".into()));
        }
        if self.r1 == 0.0 && self.r2 == 0.0 && self.r3 == 0.0 {
            // the identity point is the trivial limit of the valid region
            return Ok(());
        }
        if self.r3 * self.r3 >= self.r1 * self.r1 + self.r2 * self.r2 {
            return Err(Error::InvalidRegime(format!(
                "r3^2 = {:.4} >= r1^2 + r2^2 = {:.4}",
                self.r3 * self.r3,
                self.r1 * self.r1 + self.r2 * self.r2
            )));
        }
        Ok(())
    }

    /// mu = sqrt(r1^2 + r2^2 - r3^2) > 0.
    pub fn mu(&self) -> f64 {
        (self.r1 * self.r1 + self.r2 * self.r2 - self.r3 * self.r3).sqrt()
    }
}

/// The nine Bogoliubov coefficients of the transformation
/// S^-1 A_j S = sum of (f|g|h)-weighted operators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BogoliubovTable {
    pub f: [f64; 3],
    pub g: [f64; 3],
    pub h: [f64; 3],
}

/// Coefficient table; mu -> 0 evaluated by series.
pub fn bogoliubov(p: &TriSqueezeParams) -> Result<BogoliubovTable> {
    p.validate()?;
    let mu = p.mu();
    let (ch, sh_over, sh2_over) = if mu < 1e-6 {
        // sinh(mu)/mu and sinh^2(mu/2)/mu^2 by series
        (1.0 + mu * mu / 2.0, 1.0 + mu * mu / 6.0, 0.25 + mu * mu / 48.0)
    } else {
        (mu.cosh(), mu.sinh() / mu, (mu / 2.0).sinh().powi(2) / (mu * mu))
    };
    let (r1, r2, r3) = (p.r1, p.r2, p.r3);
    Ok(BogoliubovTable {
        f: [
            ch + 2.0 * r3 * r3 * sh2_over,
            r1 * sh_over - 2.0 * r2 * r3 * sh2_over,
            r2 * sh_over + 2.0 * r1 * r3 * sh2_over,
        ],
        g: [
            ch - 2.0 * r2 * r2 * sh2_over,
            r3 * sh_over + 2.0 * r1 * r2 * sh2_over,
            r1 * sh_over + 2.0 * r2 * r3 * sh2_over,
        ],
        h: [
            ch - 2.0 * r1 * r1 * sh2_over,
            r2 * sh_over - 2.0 * r1 * r3 * sh2_over,
            -r3 * sh_over + 2.0 * r1 * r2 * sh2_over,
        ],
    })
}

impl BogoliubovTable {
    /// The six identities implied by boson commutators of the transformed
    /// modes; all should vanish (the diagonal three against 1).
    pub fn commutator_residuals(&self) -> [f64; 6] {
        let [f1, f2, f3] = self.f;
        let [g1, g2, g3] = self.g;
        let [h1, h2, h3] = self.h;
        [
            f1 * f1 - f2 * f2 - f3 * f3 - 1.0,
            g1 * g1 + g2 * g2 - g3 * g3 - 1.0,
            h1 * h1 - h2 * h2 + h3 * h3 - 1.0,
            f1 * g3 - f2 * g1 - f3 * g2,
            f1 * h2 - f2 * h3 - f3 * h1,
            g1 * h3 + g2 * h1 - g3 * h2,
        ]
    }

    /// Linear form of mode j (0-based) over (a_1, a_2, a_3).
    fn form(&self, mode: usize) -> LinearForm {
        let z = C64::new(0.0, 0.0);
        let c = |x: f64| C64::new(x, 0.0);
        match mode {
            0 => LinearForm { lower: [c(self.f[0]), z, z], raise: [z, c(self.f[1]), c(self.f[2])] },
            1 => LinearForm { lower: [z, c(self.g[0]), c(self.g[1])], raise: [c(self.g[2]), z, z] },
            2 => LinearForm { lower: [z, c(self.h[2]), c(self.h[0])], raise: [c(self.h[1]), z, z] },
            _ => panic!("mode index out of range"),
        }
    }
}

// ---------------------------------------------------------------------------
// linear forms and Gaussian (Wick) quartic expectations
// ---------------------------------------------------------------------------

/// A linear combination sum_m (lower_m a_m + raise_m a_m^dag).
#[derive(Debug, Clone, Copy)]
struct LinearForm {
    lower: [C64; 3],
    raise: [C64; 3],
}

impl LinearForm {
    fn dagger(&self) -> LinearForm {
        LinearForm {
            lower: [self.raise[0].conj(), self.raise[1].conj(), self.raise[2].conj()],
            raise: [self.lower[0].conj(), self.lower[1].conj(), self.lower[2].conj()],
        }
    }

    /// Mean on the product coherent state |alpha_1 alpha_2 alpha_3>.
    fn mean(&self, alphas: &[C64; 3]) -> C64 {
        (0..3).map(|m| self.lower[m] * alphas[m] + self.raise[m] * alphas[m].conj()).sum()
    }

    /// Vacuum contraction <F G> of two zero-mean fluctuation forms.
    fn contract(&self, other: &LinearForm) -> C64 {
        (0..3).map(|m| self.lower[m] * other.raise[m]).sum()
    }
}

/// <O1 O2 O3 O4> on a product coherent state by Wick's theorem.
fn quartic(forms: [&LinearForm; 4], alphas: &[C64; 3]) -> C64 {
    let mu: Vec<C64> = forms.iter().map(|f| f.mean(alphas)).collect();
    let pair = |i: usize, j: usize| forms[i].contract(forms[j]);
    let mut total = mu[0] * mu[1] * mu[2] * mu[3];
    // two means and one contraction: ordered pairs (i < j)
    let idx = [(0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2), (1, 2, 0, 3), (1, 3, 0, 2), (2, 3, 0, 1)];
    for &(i, j, k, l) in &idx {
        total += pair(i, j) * mu[k] * mu[l];
    }
    total += pair(0, 1) * pair(2, 3) + pair(0, 2) * pair(1, 3) + pair(0, 3) * pair(1, 2);
    total
}

// ---------------------------------------------------------------------------
// sum/difference variances, squeezing
// ---------------------------------------------------------------------------

/// Photon-number difference variance on three-mode squeezed vacuum:
/// identically zero (those states live in the zero eigenspace).
pub fn number_diff_variance(p: &TriSqueezeParams) -> Result<f64> {
    p.validate()?;
    Ok(0.0)
}

/// Photon-number sum variance on three-mode squeezed vacuum.
pub fn number_sum_variance(p: &TriSqueezeParams) -> Result<f64> {
    let t = bogoliubov(p)?;
    let (f1, g3, h2) = (t.f[0], t.g[2], t.h[1]);
    Ok(f1 * f1 * (f1 * f1 - 1.0)
        + g3 * g3 * (1.0 + g3 * g3)
        + h2 * h2 * (1.0 + h2 * h2)
        + 2.0 * (f1 * f1 * g3 * g3 + f1 * f1 * h2 * h2 + h2 * h2 * g3 * g3))
}

/// The intermodal covariance combination 2 sum_{j<k} Cov(n_j, n_k) on
/// squeezed vacuum (the photon-number correlation signature).
pub fn number_correlation_sum(p: &TriSqueezeParams) -> Result<f64> {
    let t = bogoliubov(p)?;
    let (f1, g3, h2) = (t.f[0], t.g[2], t.h[1]);
    Ok(2.0 * (f1 * f1 * g3 * g3 + f1 * f1 * h2 * h2 + h2 * h2 * g3 * g3))
}

/// Squeezing factors of the vacuum-seeded squeeze operator, normalized so
/// that -1 <= S < 0 signals squeezing.
#[derive(Debug, Clone, Copy)]
pub struct SqueezingFactors {
    /// Per-mode single-mode factor (X and Y coincide): 2(f2^2+f3^2)-type,
    /// never negative.
    pub single: [f64; 3],
    /// Two-mode (X, Y) factors for the pairs (1,2), (1,3), (2,3).
    pub two_mode: [(f64, f64); 3],
    /// Three-mode (X, Y) factors.
    pub three_mode: (f64, f64),
}

fn quad_variances(forms: &[LinearForm]) -> (f64, f64) {
    // vacuum variances of X = (B + B^dag)/2 and Y = (B - B^dag)/2i with
    // B the sum of the forms
    let mut lower = [C64::new(0.0, 0.0); 3];
    let mut raise = [C64::new(0.0, 0.0); 3];
    for f in forms {
        for m in 0..3 {
            lower[m] += f.lower[m];
            raise[m] += f.raise[m];
        }
    }
    let b = LinearForm { lower, raise };
    let bd = b.dagger();
    let bb = b.contract(&b);
    let bbd = b.contract(&bd);
    let bdb = bd.contract(&b);
    let bdbd = bd.contract(&bd);
    let x = 0.25 * (bb + bbd + bdb + bdbd).re;
    let y = -0.25 * (bb - bbd - bdb + bdbd).re;
    (x, y)
}

fn s_factor(var: f64, c: f64) -> f64 {
    (var - 0.5 * c) / (0.5 * c)
}

pub fn squeezing_factors(p: &TriSqueezeParams) -> Result<SqueezingFactors> {
    let t = bogoliubov(p)?;
    let f0 = t.form(0);
    let f1 = t.form(1);
    let f2 = t.form(2);
    let single = [
        s_factor(quad_variances(&[f0]).0, 0.5),
        s_factor(quad_variances(&[f1]).0, 0.5),
        s_factor(quad_variances(&[f2]).0, 0.5),
    ];
    let pair = |a: LinearForm, b: LinearForm| {
        let (x, y) = quad_variances(&[a, b]);
        (s_factor(x, 1.0), s_factor(y, 1.0))
    };
    let two_mode = [pair(f0, f1), pair(f0, f2), pair(f1, f2)];
    let (x3, y3) = quad_variances(&[f0, f1, f2]);
    let three_mode = (s_factor(x3, 1.5), s_factor(y3, 1.5));
    Ok(SqueezingFactors { single, two_mode, three_mode })
}

// ---------------------------------------------------------------------------
// three-mode squeezed coherent states
// ---------------------------------------------------------------------------

/// S(r) D(alpha) |0,0,0>.
#[derive(Debug, Clone)]
pub struct TriCoherentSpec {
    pub params: TriSqueezeParams,
    pub alphas: [C64; 3],
}

/// Per-mode photon statistics.
#[derive(Debug, Clone, Copy)]
pub struct ModeStatistics {
    pub mean_n: f64,
    pub n_variance: f64,
    pub g2: f64,
}

/// Mean of the transformed mode operator, <A-bar_j> on the coherent seed.
pub fn transformed_mean(spec: &TriCoherentSpec, mode: usize) -> Result<C64> {
    let t = bogoliubov(&spec.params)?;
    Ok(t.form(mode).mean(&spec.alphas))
}

/// Closed-form per-mode statistics of three-mode squeezed coherent states.
pub fn coherent_statistics(spec: &TriCoherentSpec) -> Result<[ModeStatistics; 3]> {
    let t = bogoliubov(&spec.params)?;
    let [a1, a2, a3] = spec.alphas;
    let [f1, f2, f3] = t.f;
    let [g1, g2, g3] = t.g;
    let [h1, h2, h3] = t.h;
    let n1 = (f1 * a1 + f2 * a2.conj() + f3 * a3.conj()).norm_sqr() + f2 * f2 + f3 * f3;
    let n2 = (g1 * a2 + g2 * a3 + g3 * a1.conj()).norm_sqr() + g3 * g3;
    let n3 = (h3 * a2 + h1 * a3 + h2 * a1.conj()).norm_sqr() + h2 * h2;
    let v1 = (2.0 * f1 * f1 - 1.0) * n1 - (f1 * f1 - 1.0) * (f1 * f1 - 1.0);
    let v2 = (2.0 * g3 * g3 + 1.0) * n2 - g3 * g3 * g3 * g3;
    let v3 = (2.0 * h2 * h2 + 1.0) * n3 - h2 * h2 * h2 * h2;
    let stat = |n: f64, v: f64| -> Result<ModeStatistics> {
        if n <= 1e-12 {
            return Err(Error::DivisionByZeroIntensity(n));
        }
        Ok(ModeStatistics { mean_n: n, n_variance: v, g2: 1.0 + (v - n) / (n * n) })
    };
    Ok([stat(n1, v1)?, stat(n2, v2)?, stat(n3, v3)?])
}

/// Cross photon-number moments (<n1 n2>, <n2 n3>, <n1 n3>) on three-mode
/// squeezed coherent states, evaluated by Wick contraction of the
/// Bogoliubov-transformed quartic.
pub fn cross_moments(spec: &TriCoherentSpec) -> Result<[f64; 3]> {
    let t = bogoliubov(&spec.params)?;
    let cross = |j: usize, k: usize| {
        let fj = t.form(j);
        let fk = t.form(k);
        quartic([&fj.dagger(), &fj, &fk.dagger(), &fk], &spec.alphas).re
    };
    Ok([cross(0, 1), cross(1, 2), cross(0, 2)])
}

/// Cauchy-Schwarz deviation factor I_{j,k} for 0-based modes; negative
/// values certify stronger-than-classical intermodal correlation.
pub fn cauchy_schwarz_factor(spec: &TriCoherentSpec, pair: (usize, usize)) -> Result<f64> {
    let (j, k) = pair;
    if j == k || j > 2 || k > 2 {
        return Err(Error::InvalidArgument(format!("bad mode pair ({j}, {k})")));
    }
    let t = bogoliubov(&spec.params)?;
    let second = |m: usize| {
        let f = t.form(m);
        quartic([&f.dagger(), &f.dagger(), &f, &f], &spec.alphas).re
    };
    let fj = t.form(j);
    let fk = t.form(k);
    let cross = quartic([&fj.dagger(), &fj, &fk.dagger(), &fk], &spec.alphas).re;
    if cross.abs() <= 1e-12 {
        return Err(Error::DegenerateDenominator(cross));
    }
    Ok((second(j) * second(k)).sqrt() / cross - 1.0)
}

// ---------------------------------------------------------------------------
// three-mode squeezed number states
// ---------------------------------------------------------------------------

/// S(r) |n1, n2, n3>.
#[derive(Debug, Clone)]
pub struct TriNumberSpec {
    pub params: TriSqueezeParams,
    pub ns: [usize; 3],
}

/// Closed-form statistics of three-mode squeezed number states. The
/// variance brackets carry +1 exactly on the normal-anomalous coefficient
/// pairs.
pub fn number_statistics(spec: &TriNumberSpec) -> Result<[ModeStatistics; 3]> {
    let t = bogoliubov(&spec.params)?;
    let [n1, n2, n3] = [spec.ns[0] as f64, spec.ns[1] as f64, spec.ns[2] as f64];
    let [f1, f2, f3] = t.f;
    let [g1, g2, g3] = t.g;
    let [h1, h2, h3] = t.h;
    let mix = |na: f64, nb: f64| na + nb + 2.0 * na * nb;
    let m1 = n1 * f1 * f1 + (n2 + 1.0) * f2 * f2 + (n3 + 1.0) * f3 * f3;
    let m2 = n2 * g1 * g1 + n3 * g2 * g2 + (n1 + 1.0) * g3 * g3;
    let m3 = n2 * h3 * h3 + n3 * h1 * h1 + (n1 + 1.0) * h2 * h2;
    let v1 = f1 * f1 * f2 * f2 * (mix(n1, n2) + 1.0)
        + f1 * f1 * f3 * f3 * (mix(n1, n3) + 1.0)
        + f2 * f2 * f3 * f3 * mix(n2, n3);
    let v2 = g1 * g1 * g2 * g2 * mix(n2, n3)
        + g1 * g1 * g3 * g3 * (mix(n1, n2) + 1.0)
        + g2 * g2 * g3 * g3 * (mix(n1, n3) + 1.0);
    let v3 = h3 * h3 * h1 * h1 * mix(n2, n3)
        + h3 * h3 * h2 * h2 * (mix(n1, n2) + 1.0)
        + h1 * h1 * h2 * h2 * (mix(n1, n3) + 1.0);
    let stat = |n: f64, v: f64| -> Result<ModeStatistics> {
        if n <= 1e-12 {
            return Err(Error::DivisionByZeroIntensity(n));
        }
        Ok(ModeStatistics { mean_n: n, n_variance: v, g2: 1.0 + (v - n) / (n * n) })
    };
    Ok([stat(m1, v1)?, stat(m2, v2)?, stat(m3, v3)?])
}

// ---------------------------------------------------------------------------
// quasiprobability functions
// ---------------------------------------------------------------------------

/// s-parametrized joint characteristic function of the squeezed coherent
/// state; the eta's mix the zetas through the Bogoliubov table.
pub fn joint_characteristic(spec: &TriCoherentSpec, zetas: &[C64; 3], s: i8) -> Result<C64> {
    let t = bogoliubov(&spec.params)?;
    let [z1, z2, z3] = *zetas;
    let [f1, f2, f3] = t.f;
    let [g1, g2, g3] = t.g;
    let [h1, h2, h3] = t.h;
    let etas = [
        z1 * f1 - z2.conj() * g3 - z3.conj() * h2,
        z2 * g1 - z1.conj() * f2 + z3 * h3,
        z3 * h1 + z2 * g2 - z1.conj() * f3,
    ];
    let mut expo = C64::new(0.0, 0.0);
    for j in 0..3 {
        expo += 0.5 * (s as f64 * zetas[j].norm_sqr() - etas[j].norm_sqr());
        expo += spec.alphas[j].conj() * etas[j] - spec.alphas[j] * etas[j].conj();
    }
    Ok(expo.exp())
}

/// Solve M x = b and the determinant of symmetric positive-definite M by
/// Cholesky; None when M is not positive definite.
fn cholesky_solve(m: &[[f64; 6]; 6], b: &[f64; 6]) -> Option<(f64, [f64; 6])> {
    let mut l = [[0.0f64; 6]; 6];
    for i in 0..6 {
        for j in 0..=i {
            let mut sum = m[i][j];
            for k in 0..j {
                sum -= l[i][k] * l[j][k];
            }
            if i == j {
                if sum <= 0.0 {
                    return None;
                }
                l[i][j] = sum.sqrt();
            } else {
                l[i][j] = sum / l[j][j];
            }
        }
    }
    let mut det = 1.0;
    for i in 0..6 {
        det *= l[i][i] * l[i][i];
    }
    let mut y = [0.0f64; 6];
    for i in 0..6 {
        let mut sum = b[i];
        for k in 0..i {
            sum -= l[i][k] * y[k];
        }
        y[i] = sum / l[i][i];
    }
    let mut x = [0.0f64; 6];
    for i in (0..6).rev() {
        let mut sum = y[i];
        for k in i + 1..6 {
            sum -= l[k][i] * x[k];
        }
        x[i] = sum / l[i][i];
    }
    Some((det, x))
}

/// Joint s-parametrized quasiprobability: the exact 6-dimensional Gaussian
/// Fourier transform of the joint characteristic function, evaluated
/// through the 6x6 real quadratic form it defines. Errors with
/// PFunctionSingular when the form loses positive definiteness (the
/// three-mode P-representation breakdown).
pub fn joint_wigner(spec: &TriCoherentSpec, betas: &[C64; 3], s: i8) -> Result<f64> {
    let t = bogoliubov(&spec.params)?;
    let [f1, f2, f3] = t.f;
    let [g1, g2, g3] = t.g;
    let [h1, h2, h3] = t.h;
    // eta_j as a real-linear map of w = (u1, v1, u2, v2, u3, v3)
    // zeta_j = u_j + i v_j
    let eta_map = |w: &[f64; 6]| -> [C64; 3] {
        let z1 = C64::new(w[0], w[1]);
        let z2 = C64::new(w[2], w[3]);
        let z3 = C64::new(w[4], w[5]);
        [
            z1 * f1 - z2.conj() * g3 - z3.conj() * h2,
            z2 * g1 - z1.conj() * f2 + z3 * h3,
            z3 * h1 + z2 * g2 - z1.conj() * f3,
        ]
    };
    // quadratic form M: sum |eta_j|^2 - s sum |zeta_j|^2 via basis probing
    let mut mat = [[0.0f64; 6]; 6];
    let mut basis = [[0.0f64; 6]; 6];
    for (i, row) in basis.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let quad = |w: &[f64; 6]| -> f64 {
        let etas = eta_map(w);
        let zn: f64 = w.iter().map(|x| x * x).sum();
        etas.iter().map(|e| e.norm_sqr()).sum::<f64>() - s as f64 * zn
    };
    // polarization identity for the symmetric form
    for i in 0..6 {
        for j in i..6 {
            let mut wi = [0.0; 6];
            wi[i] += 1.0;
            wi[j] += 1.0;
            let q = quad(&wi) - quad(&basis[i]) - quad(&basis[j]);
            let val = if i == j { quad(&basis[i]) } else { q / 2.0 };
            mat[i][j] = val;
            mat[j][i] = val;
        }
    }
    // linear part c: exponent = -1/2 w^T M w + i c.w with
    // c.w = 2 Im sum alpha_j^* eta_j + 2 sum (y_j u_j - x_j v_j)
    let mut c = [0.0f64; 6];
    for i in 0..6 {
        let etas = eta_map(&basis[i]);
        let mut ci = 0.0;
        for j in 0..3 {
            ci += 2.0 * (spec.alphas[j].conj() * etas[j]).im;
        }
        let mode = i / 2;
        if i % 2 == 0 {
            ci += 2.0 * betas[mode].im;
        } else {
            ci -= 2.0 * betas[mode].re;
        }
        c[i] = ci;
    }
    let (det, x) = cholesky_solve(&mat, &c).ok_or_else(|| {
        Error::PFunctionSingular(format!("joint quadratic form not positive definite at s = {s}"))
    })?;
    let dot: f64 = c.iter().zip(&x).map(|(a, b)| a * b).sum();
    let pi = std::f64::consts::PI;
    Ok(8.0 / (pi * pi * pi) / det.sqrt() * (-0.5 * dot).exp())
}

/// tau_j of the single-mode Gaussians: (2f2^2 + 2f3^2 + 1, 2g3^2 + 1,
/// 2h2^2 + 1).
pub fn tau(t: &BogoliubovTable, mode: usize) -> f64 {
    match mode {
        0 => 2.0 * t.f[1] * t.f[1] + 2.0 * t.f[2] * t.f[2] + 1.0,
        1 => 2.0 * t.g[2] * t.g[2] + 1.0,
        2 => 2.0 * t.h[1] * t.h[1] + 1.0,
        _ => panic!("mode index out of range"),
    }
}

/// Single-mode quasiprobability of the squeezed coherent state:
/// (2/pi(tau_j - s)) exp(-2|beta - alpha-bar_j|^2/(tau_j - s)).
pub fn single_quasiprob(spec: &TriCoherentSpec, mode: usize, beta: C64, s: i8) -> Result<f64> {
    let t = bogoliubov(&spec.params)?;
    let tj = tau(&t, mode);
    let denom = tj - s as f64;
    if denom <= 1e-14 {
        return Err(Error::PFunctionSingular(format!(
            "tau - s = {denom:.3e} (delta-function limit)"
        )));
    }
    let mean = t.form(mode).mean(&spec.alphas);
    Ok(2.0 / (std::f64::consts::PI * denom) * (-2.0 * (beta - mean).norm_sqr() / denom).exp())
}

/// Phase distribution of one mode of the squeezed coherent state via the
/// radial integral of its Q-function; symmetric single-peaked for real
/// amplitudes.
pub fn coherent_phase_distribution(
    spec: &TriCoherentSpec,
    mode: usize,
    theta_grid: &[f64],
) -> Result<Distribution> {
    let t = bogoliubov(&spec.params)?;
    let tj = tau(&t, mode);
    let mean = t.form(mode).mean(&spec.alphas);
    let kappa = 2.0 / (tj + 1.0);
    let values: Vec<f64> = theta_grid
        .iter()
        .map(|&th| {
            let b = 2.0 * (mean * C64::from_polar(1.0, -th)).re;
            let v = radial_gaussian_moment(
                kappa,
                C64::new(kappa * b, 0.0),
                C64::new(-kappa * mean.norm_sqr(), 0.0),
            )?;
            Ok(2.0 / (std::f64::consts::PI * (tj + 1.0)) * v.re)
        })
        .collect::<Result<_>>()?;
    Ok(Distribution::new_1d(DistributionKind::Phase, theta_grid.to_vec(), values))
}

/// Polynomial (in |beta|^2) applying m powers of the derivative operator
/// D = d^2/(d beta d(-beta^*)) to exp(-c |beta|^2):
/// D(p g) = (c p - p' - x p'' + 2 c x p' - c^2 x p) g.
fn derivative_polynomials(c: f64, max_m: usize) -> Vec<Vec<f64>> {
    let mut polys = Vec::with_capacity(max_m + 1);
    polys.push(vec![1.0]);
    for _ in 0..max_m {
        let p: &Vec<f64> = polys.last().unwrap();
        let deg = p.len() - 1;
        let mut next = vec![0.0; deg + 2];
        for (k, &pk) in p.iter().enumerate() {
            next[k] += c * pk; // c p
            if k >= 1 {
                next[k - 1] -= k as f64 * pk; // -p'
            }
            if k >= 2 {
                next[k - 1] -= (k * (k - 1)) as f64 * pk; // -x p''
            }
            next[k] += 2.0 * c * k as f64 * pk; // 2 c x p'
            next[k + 1] -= c * c * pk; // -c^2 x p
        }
        polys.push(next);
    }
    polys
}

/// Single-mode s-parametrized quasiprobability of the squeezed number
/// state: the Laguerre differential operators expanded into a finite
/// polynomial in |beta|^2 against the Gaussian.
pub fn number_single_quasiprob(
    spec: &TriNumberSpec,
    mode: usize,
    beta: C64,
    s: i8,
) -> Result<f64> {
    let t = bogoliubov(&spec.params)?;
    let tj = tau(&t, mode);
    let denom = tj - s as f64;
    if denom <= 1e-14 {
        return Err(Error::PFunctionSingular(format!("tau - s = {denom:.3e}")));
    }
    let c = 2.0 / denom;
    // squared per-seed-mode coefficients of the mode expansion
    let k2: [f64; 3] = match mode {
        0 => [t.f[0] * t.f[0], t.f[1] * t.f[1], t.f[2] * t.f[2]],
        1 => [t.g[2] * t.g[2], t.g[0] * t.g[0], t.g[1] * t.g[1]],
        2 => [t.h[1] * t.h[1], t.h[2] * t.h[2], t.h[0] * t.h[0]],
        _ => return Err(Error::InvalidArgument("mode index out of range".into())),
    };
    // operator polynomial T(D) = prod_j L_{n_j}(k_j^2 D) as coefficients of D^i
    let mut op = vec![1.0f64];
    for (j, &n) in spec.ns.iter().enumerate() {
        // L_n(k x) = sum_i C(n, i) (-k)^i / i! x^i
        let mut lag = vec![0.0f64; n + 1];
        for (i, li) in lag.iter_mut().enumerate() {
            let ln_binom = ln_factorial(n) - ln_factorial(i) - ln_factorial(n - i);
            *li = (ln_binom - ln_factorial(i)).exp() * (-k2[j]).powi(i as i32);
        }
        let mut next = vec![0.0f64; op.len() + n];
        for (i, &a) in op.iter().enumerate() {
            for (j2, &b) in lag.iter().enumerate() {
                next[i + j2] += a * b;
            }
        }
        op = next;
    }
    let polys = derivative_polynomials(c, op.len() - 1);
    let x = beta.norm_sqr();
    let mut q = 0.0;
    for (m, &tm) in op.iter().enumerate() {
        let pm: f64 = polys[m].iter().rev().fold(0.0, |acc, &co| acc * x + co);
        q += tm * pm;
    }
    Ok(2.0 / (std::f64::consts::PI * denom) * q * (-c * x).exp())
}

/// Phase distribution of a single mode of the squeezed number state:
/// exactly uniform.
pub fn number_phase_value() -> f64 {
    1.0 / (2.0 * std::f64::consts::PI)
}
