//! Time-dependent Heisenberg solutions for three nonlinear-coupler models
//! and the photon statistics derived from them.
//!
//! Every model reduces to a table of time-dependent coefficients expanding
//! each output mode over the input ladder operators. All statistics flow
//! from those linear forms: quadrature variances and Gaussian
//! quasiprobabilities for coherent/thermal inputs, exact ladder-string
//! expectations for Fock inputs, and two-time correlators for both.

use crate::distribution::{Distribution, DistributionKind};
use crate::error::{Error, Result};
use crate::numerics::{laguerre_gaussian_ln, ln_factorial, radial_gaussian_moment};
use crate::C64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

// ---------------------------------------------------------------------------
// configuration
// ---------------------------------------------------------------------------

/// Which coupler and its constants.
#[derive(Debug, Clone, PartialEq)]
pub enum CouplerConfig {
    /// Two waveguides with second-subharmonic generation (lambda1, lambda2),
    /// linear exchange (lambda3) and nonlinear exchange (lambda4); the
    /// detunings omega_j + mu_j/2 enter the coefficient table. The pump
    /// phase profiles are fixed to phi1 = (mu2 - mu1) t / 2 and
    /// phi2 = (mu2 + mu1) t / 2.
    NlExchange { lambdas: [f64; 4], omegas: [f64; 2], mus: [f64; 2] },
    /// Linear waveguide coupled to a nondegenerate parametric waveguide;
    /// the solved case fixes lambda2 = lambda3 = lambda1/sqrt(2).
    Asymmetric { lambda1: f64 },
    /// Two nondegenerate parametric waveguides (lambda1, lambda3) with
    /// signal beams coupled linearly (lambda2).
    Symmetric { lambdas: [f64; 3] },
}

impl CouplerConfig {
    pub fn validate(&self) -> Result<()> {
        let all_ok = match self {
            CouplerConfig::NlExchange { lambdas, omegas, mus } => {
                lambdas.iter().all(|l| *l >= 0.0 && l.is_finite())
                    && omegas.iter().chain(mus.iter()).all(|x| x.is_finite())
            }
            CouplerConfig::Asymmetric { lambda1 } => *lambda1 >= 0.0 && lambda1.is_finite(),
            CouplerConfig::Symmetric { lambdas } => {
                lambdas.iter().all(|l| *l >= 0.0 && l.is_finite())
            }
        };
        if all_ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument("coupling constants must be finite and >= 0".into()))
        }
    }

    pub fn mode_count(&self) -> usize {
        match self {
            CouplerConfig::NlExchange { .. } => 2,
            CouplerConfig::Asymmetric { .. } => 3,
            CouplerConfig::Symmetric { .. } => 4,
        }
    }

    pub fn lambda_max(&self) -> f64 {
        match self {
            CouplerConfig::NlExchange { lambdas, .. } => {
                lambdas.iter().cloned().fold(f64::MIN, f64::max)
            }
            CouplerConfig::Asymmetric { lambda1 } => *lambda1,
            CouplerConfig::Symmetric { lambdas } => lambdas.iter().cloned().fold(f64::MIN, f64::max),
        }
        .max(1e-9)
    }
}

/// Input state, one entry per mode.
#[derive(Debug, Clone, PartialEq)]
pub enum InputState {
    Coherent(Vec<C64>),
    Fock(Vec<usize>),
    Thermal(Vec<f64>),
}

impl InputState {
    pub fn mode_count(&self) -> usize {
        match self {
            InputState::Coherent(v) => v.len(),
            InputState::Fock(v) => v.len(),
            InputState::Thermal(v) => v.len(),
        }
    }

    fn check(&self, config: &CouplerConfig) -> Result<()> {
        if self.mode_count() != config.mode_count() {
            return Err(Error::InvalidArgument(format!(
                "input carries {} modes, model has {}",
                self.mode_count(),
                config.mode_count()
            )));
        }
        // thermal statistics only where the closed forms exist
        if matches!(self, InputState::Thermal(_))
            && !matches!(config, CouplerConfig::NlExchange { .. })
        {
            return Err(Error::UnsupportedInput(
                "thermal input is only solved for the nonlinear-exchange coupler".into(),
            ));
        }
        Ok(())
    }

    fn nbar(&self, mode: usize) -> f64 {
        match self {
            InputState::Coherent(_) => 0.0,
            InputState::Fock(ns) => ns[mode] as f64,
            InputState::Thermal(nb) => nb[mode],
        }
    }

    fn mean(&self, mode: usize) -> C64 {
        match self {
            InputState::Coherent(al) => al[mode],
            _ => ZERO,
        }
    }
}

// ---------------------------------------------------------------------------
// 2x2 entire matrix functions (shared by the NlExchange and Symmetric tables)
// ---------------------------------------------------------------------------

fn cos_sqrt(x: C64, t: f64) -> C64 {
    (x.sqrt() * t).cos()
}

fn sinc_sqrt(x: C64, t: f64) -> C64 {
    if x.norm() * t * t < 1e-14 {
        return C64::new(t, 0.0) * (1.0 - x.re * t * t / 6.0);
    }
    let s = x.sqrt();
    (s * t).sin() / s
}

fn dcos_sqrt(x: C64, t: f64) -> C64 {
    -0.5 * t * sinc_sqrt(x, t)
}

fn dsinc_sqrt(x: C64, t: f64) -> C64 {
    if x.norm() * t * t < 1e-10 {
        return C64::new(-t * t * t / 6.0, 0.0);
    }
    (t * cos_sqrt(x, t) - sinc_sqrt(x, t)) / (2.0 * x)
}

/// f(W) for a real 2x2 matrix W and an entire f, by Lagrange-Sylvester
/// interpolation; complex eigenvalue pairs and confluent spectra are both
/// fine (the confluent branch uses the analytic derivative).
fn matfun2(
    w: [[f64; 2]; 2],
    t: f64,
    f: impl Fn(C64, f64) -> C64,
    df: impl Fn(C64, f64) -> C64,
) -> [[f64; 2]; 2] {
    let tr = w[0][0] + w[1][1];
    let det = w[0][0] * w[1][1] - w[0][1] * w[1][0];
    let disc = C64::new(tr * tr / 4.0 - det, 0.0);
    let sq = disc.sqrt();
    let e1 = C64::new(tr / 2.0, 0.0) + sq;
    let e2 = C64::new(tr / 2.0, 0.0) - sq;
    let scale = e1.norm() + e2.norm() + 1.0;
    let mut out = [[0.0; 2]; 2];
    if (e1 - e2).norm() < 1e-9 * scale {
        let em = C64::new(tr / 2.0, 0.0);
        let f0 = f(em, t);
        let f1 = df(em, t);
        for i in 0..2 {
            for j in 0..2 {
                let idm = if i == j { 1.0 } else { 0.0 };
                out[i][j] = (f0 * idm + f1 * (w[i][j] - em.re * idm)).re;
            }
        }
    } else {
        let f1 = f(e1, t);
        let f2 = f(e2, t);
        for i in 0..2 {
            for j in 0..2 {
                let idm = if i == j { ONE } else { ZERO };
                let v = (f1 * (C64::new(w[i][j], 0.0) - e2 * idm)
                    - f2 * (C64::new(w[i][j], 0.0) - e1 * idm))
                    / (e1 - e2);
                out[i][j] = v.re;
            }
        }
    }
    out
}

fn mat2_mul(a: [[f64; 2]; 2], b: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

// ---------------------------------------------------------------------------
// coefficient tables
// ---------------------------------------------------------------------------

/// The time-dependent coefficient table of one model at one time.
#[derive(Debug, Clone)]
pub enum TimeCoefficients {
    /// a_1(t) = K1 a1 + L1 a1^dag + M1 a2 + N1 a2^dag (slowly varying frame)
    /// and the analogue for mode 2.
    NlExchange { t: f64, k1: C64, l1: C64, m1: C64, n1: C64, k2: C64, l2: C64, m2: C64, n2: C64 },
    /// Signal/idler/linear-mode tables f, g, h of the asymmetric coupler;
    /// g coincides with f.
    Asymmetric { t: f64, f: [f64; 6], g: [f64; 6], h: [f64; 6] },
    /// Tables f, g, h, l of the symmetric four-mode coupler.
    Symmetric { t: f64, f: [f64; 4], g: [f64; 4], h: [f64; 4], l: [f64; 4] },
}

/// Linear expansion of one output mode over the input ladder operators.
#[derive(Debug, Clone)]
pub struct ModeForm {
    pub lower: Vec<C64>,
    pub raise: Vec<C64>,
}

impl ModeForm {
    pub fn dagger(&self) -> ModeForm {
        ModeForm {
            lower: self.raise.iter().map(|c| c.conj()).collect(),
            raise: self.lower.iter().map(|c| c.conj()).collect(),
        }
    }

    fn mean(&self, input: &InputState) -> C64 {
        (0..self.lower.len())
            .map(|m| self.lower[m] * input.mean(m) + self.raise[m] * input.mean(m).conj())
            .sum()
    }

    /// <F G> with both factors centered, on a phase-insensitive input with
    /// per-mode occupation nbar.
    fn contract(&self, other: &ModeForm, input: &InputState) -> C64 {
        (0..self.lower.len())
            .map(|m| {
                let nb = input.nbar(m);
                self.lower[m] * other.raise[m] * (nb + 1.0) + self.raise[m] * other.lower[m] * nb
            })
            .sum()
    }
}

/// Time-dependent coefficients at time t; the t = 0 table is the identity.
pub fn coefficients(config: &CouplerConfig, t: f64) -> Result<TimeCoefficients> {
    config.validate()?;
    if t < 0.0 || !t.is_finite() {
        return Err(Error::InvalidArgument(format!("time {t} out of range")));
    }
    match config {
        CouplerConfig::NlExchange { lambdas, omegas, mus } => {
            let [l1, l2, l3, l4] = *lambdas;
            let k0 = omegas[0] + mus[0] / 2.0;
            let j0 = omegas[1] + mus[1] / 2.0;
            let (kp, km) = (k0 + 2.0 * l1, k0 - 2.0 * l1);
            let (jp, jm) = (j0 + 2.0 * l2, j0 - 2.0 * l2);
            let (lp, lm) = (l3 + l4, l3 - l4);
            // quadrature pair evolution: Qdot = Kp P, Pdot = -Km Q with
            // Q = (Q1, Q2), P = -i(A - A^dag, B - B^dag)
            let kp_m = [[km, lm], [lm, jm]];
            let km_m = [[kp, lp], [lp, jp]];
            let w = mat2_mul(kp_m, km_m);
            let wt = mat2_mul(km_m, kp_m);
            let cw = matfun2(w, t, cos_sqrt, dcos_sqrt);
            let sw = matfun2(w, t, sinc_sqrt, dsinc_sqrt);
            let cwt = matfun2(wt, t, cos_sqrt, dcos_sqrt);
            let swt = matfun2(wt, t, sinc_sqrt, dsinc_sqrt);
            let eqq = cw;
            let eqp = mat2_mul(sw, kp_m);
            let epq = {
                let m = mat2_mul(swt, km_m);
                [[-m[0][0], -m[0][1]], [-m[1][0], -m[1][1]]]
            };
            let epp = cwt;
            // E in basis (Q1, Q2, P1, P2); A = (Q1 + i P1)/2 maps the block
            // entries onto the complex coefficient table
            let half = |qq: f64, pp: f64, pq: f64, qp: f64| {
                C64::new(0.5 * (qq + pp), 0.5 * (pq - qp))
            };
            Ok(TimeCoefficients::NlExchange {
                t,
                k1: half(eqq[0][0], epp[0][0], epq[0][0], eqp[0][0]),
                l1: C64::new(0.5 * (eqq[0][0] - epp[0][0]), 0.5 * (epq[0][0] + eqp[0][0])),
                m1: half(eqq[0][1], epp[0][1], epq[0][1], eqp[0][1]),
                n1: C64::new(0.5 * (eqq[0][1] - epp[0][1]), 0.5 * (epq[0][1] + eqp[0][1])),
                k2: half(eqq[1][1], epp[1][1], epq[1][1], eqp[1][1]),
                l2: C64::new(0.5 * (eqq[1][1] - epp[1][1]), 0.5 * (epq[1][1] + eqp[1][1])),
                m2: half(eqq[1][0], epp[1][0], epq[1][0], eqp[1][0]),
                n2: C64::new(0.5 * (eqq[1][0] - epp[1][0]), 0.5 * (epq[1][0] + eqp[1][0])),
            })
        }
        CouplerConfig::Asymmetric { lambda1 } => {
            let l1 = *lambda1;
            let kb = 3f64.sqrt() / 2.0 * l1;
            let (ch, sh) = ((l1 * t).cosh(), (l1 * t).sinh());
            let (ch2, sh2) = ((l1 * t / 2.0).cosh(), (l1 * t / 2.0).sinh());
            let (c, s) = ((kb * t).cos(), (kb * t).sin());
            let rt3 = 3f64.sqrt();
            let rt23 = (2f64 / 3.0).sqrt();
            let f = [
                0.5 * (ch + ch2 * c + sh2 * s / rt3),
                0.5 * (sh - sh2 * c - ch2 * s / rt3),
                0.5 * (ch - ch2 * c - sh2 * s / rt3),
                0.5 * (sh + sh2 * c + ch2 * s / rt3),
                rt23 * ch2 * s,
                -rt23 * sh2 * s,
            ];
            let h = [
                ch2 * c - sh2 * s / rt3,
                -sh2 * c + ch2 * s / rt3,
                rt23 * ch2 * s,
                -rt23 * sh2 * s,
                rt23 * ch2 * s,
                -rt23 * sh2 * s,
            ];
            Ok(TimeCoefficients::Asymmetric { t, f, g: f, h })
        }
        CouplerConfig::Symmetric { lambdas } => {
            let [l1, l2, l3] = *lambdas;
            // real first-order system xdot = R x with x = (a1, -i a2,
            // -i a3^dag, a4^dag); exp(tR) = C(-R^2) + S(-R^2) R with -R^2
            // block-diagonal over (x1, x4) and (x2, x3)
            let r = [
                [0.0, l2, l1, 0.0],
                [-l2, 0.0, 0.0, -l3],
                [l1, 0.0, 0.0, 0.0],
                [0.0, -l3, 0.0, 0.0],
            ];
            let mut w = [[0.0f64; 4]; 4];
            for i in 0..4 {
                for j in 0..4 {
                    w[i][j] = -(0..4).map(|k| r[i][k] * r[k][j]).sum::<f64>();
                }
            }
            let mut cmat = [[0.0f64; 4]; 4];
            let mut smat = [[0.0f64; 4]; 4];
            for (i, j) in [(0usize, 3usize), (1, 2)] {
                let wb = [[w[i][i], w[i][j]], [w[j][i], w[j][j]]];
                let cb = matfun2(wb, t, cos_sqrt, dcos_sqrt);
                let sb = matfun2(wb, t, sinc_sqrt, dsinc_sqrt);
                for (bi, &a) in [i, j].iter().enumerate() {
                    for (bj, &b) in [i, j].iter().enumerate() {
                        cmat[a][b] = cb[bi][bj];
                        smat[a][b] = sb[bi][bj];
                    }
                }
            }
            let mut e = [[0.0f64; 4]; 4];
            for i in 0..4 {
                for j in 0..4 {
                    e[i][j] = cmat[i][j] + (0..4).map(|k| smat[i][k] * r[k][j]).sum::<f64>();
                }
            }
            Ok(TimeCoefficients::Symmetric {
                t,
                f: [e[0][0], -e[0][1], e[0][2], e[0][3]],
                g: [e[1][0], e[1][1], e[1][2], -e[1][3]],
                h: [e[2][0], e[2][1], e[2][2], e[2][3]],
                l: [e[3][0], -e[3][1], -e[3][2], e[3][3]],
            })
        }
    }
}

impl TimeCoefficients {
    pub fn mode_count(&self) -> usize {
        match self {
            TimeCoefficients::NlExchange { .. } => 2,
            TimeCoefficients::Asymmetric { .. } => 3,
            TimeCoefficients::Symmetric { .. } => 4,
        }
    }

    /// Expansion of output mode (0-based) over the input operators.
    pub fn form(&self, mode: usize) -> ModeForm {
        match self {
            TimeCoefficients::NlExchange { k1, l1, m1, n1, k2, l2, m2, n2, .. } => match mode {
                0 => ModeForm { lower: vec![*k1, *m1], raise: vec![*l1, *n1] },
                1 => ModeForm { lower: vec![*m2, *k2], raise: vec![*n2, *l2] },
                _ => panic!("mode out of range"),
            },
            TimeCoefficients::Asymmetric { f, g, h, .. } => {
                let c = |x: f64| C64::new(x, 0.0);
                match mode {
                    0 => ModeForm {
                        lower: vec![c(f[0]), c(-f[2]), c(-f[4])],
                        raise: vec![c(f[1]), c(-f[3]), c(-f[5])],
                    },
                    1 => ModeForm {
                        lower: vec![c(-g[2]), c(g[0]), c(-g[4])],
                        raise: vec![c(-g[3]), c(g[1]), c(-g[5])],
                    },
                    2 => ModeForm {
                        lower: vec![c(h[4]), c(h[2]), c(h[0])],
                        raise: vec![c(h[5]), c(h[3]), c(h[1])],
                    },
                    _ => panic!("mode out of range"),
                }
            }
            TimeCoefficients::Symmetric { f, g, h, l, .. } => match mode {
                0 => ModeForm {
                    lower: vec![C64::new(f[0], 0.0), I * f[1], ZERO, ZERO],
                    raise: vec![ZERO, ZERO, -I * f[2], C64::new(f[3], 0.0)],
                },
                1 => ModeForm {
                    lower: vec![I * g[0], C64::new(g[1], 0.0), ZERO, ZERO],
                    raise: vec![ZERO, ZERO, C64::new(g[2], 0.0), -I * g[3]],
                },
                2 => ModeForm {
                    lower: vec![ZERO, ZERO, C64::new(h[2], 0.0), -I * h[3]],
                    raise: vec![-I * h[0], C64::new(h[1], 0.0), ZERO, ZERO],
                },
                3 => ModeForm {
                    lower: vec![ZERO, ZERO, -I * l[2], C64::new(l[3], 0.0)],
                    raise: vec![C64::new(l[0], 0.0), -I * l[1], ZERO, ZERO],
                },
                _ => panic!("mode out of range"),
            },
        }
    }

    /// All boson-commutator residuals |[A_j, A_k^dag] - delta_jk| and
    /// |[A_j, A_k]| computed from the table.
    pub fn commutator_residuals(&self) -> Vec<f64> {
        let n = self.mode_count();
        let forms: Vec<ModeForm> = (0..n).map(|m| self.form(m)).collect();
        let mut out = Vec::new();
        for j in 0..n {
            for k in 0..n {
                // [A_j, A_k^dag] = sum_m (lower_j conj(lower_k) - raise_j conj(raise_k))
                let mut comm = ZERO;
                let mut comm2 = ZERO;
                for m in 0..n {
                    comm += forms[j].lower[m] * forms[k].lower[m].conj()
                        - forms[j].raise[m] * forms[k].raise[m].conj();
                    comm2 += forms[j].lower[m] * forms[k].raise[m]
                        - forms[j].raise[m] * forms[k].lower[m];
                }
                let delta = if j == k { ONE } else { ZERO };
                out.push((comm - delta).norm());
                out.push(comm2.norm());
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// one-time and two-time photon statistics
// ---------------------------------------------------------------------------

/// Exact expectation of an ordered product of linear forms on a Fock
/// product state: expand every form, push the ladder strings through each
/// mode.
fn fock_product_expectation(forms: &[&ModeForm], ns: &[usize]) -> C64 {
    let modes = ns.len();
    let mut total = ZERO;
    // index over one (mode, kind) pick per form
    let picks_per_form = 2 * modes;
    let nf = forms.len();
    let mut idx = vec![0usize; nf];
    'outer: loop {
        let mut coeff = ONE;
        let mut ok = true;
        for (f, &p) in idx.iter().enumerate() {
            let mode = p / 2;
            let c = if p % 2 == 0 { forms[f].lower[mode] } else { forms[f].raise[mode] };
            if c == ZERO {
                ok = false;
                break;
            }
            coeff *= c;
        }
        if ok {
            // per-mode amplitude: apply strings right-to-left
            let mut amp = 1.0f64;
            for mode in 0..modes {
                let mut k = 0i64;
                let n = ns[mode] as i64;
                for &p in idx.iter().rev() {
                    if p / 2 != mode {
                        continue;
                    }
                    if p % 2 == 0 {
                        // annihilate
                        if n + k <= 0 {
                            amp = 0.0;
                            break;
                        }
                        amp *= ((n + k) as f64).sqrt();
                        k -= 1;
                    } else {
                        amp *= ((n + k + 1) as f64).sqrt();
                        k += 1;
                    }
                }
                if k != 0 {
                    amp = 0.0;
                }
                if amp == 0.0 {
                    break;
                }
            }
            if amp != 0.0 {
                total += coeff * amp;
            }
        }
        // odometer
        for d in (0..nf).rev() {
            idx[d] += 1;
            if idx[d] < picks_per_form {
                continue 'outer;
            }
            idx[d] = 0;
        }
        break;
    }
    total
}

/// <O1 O2 O3 O4> on Gaussian inputs (coherent means + thermal/vacuum
/// fluctuations) by Wick's theorem, or exactly on Fock inputs.
fn quartic_expectation(forms: [&ModeForm; 4], input: &InputState) -> C64 {
    if let InputState::Fock(ns) = input {
        return fock_product_expectation(&forms, ns);
    }
    let mu: Vec<C64> = forms.iter().map(|f| f.mean(input)).collect();
    let pair = |i: usize, j: usize| forms[i].contract(forms[j], input);
    let mut total = mu[0] * mu[1] * mu[2] * mu[3];
    let idx = [(0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2), (1, 2, 0, 3), (1, 3, 0, 2), (2, 3, 0, 1)];
    for &(i, j, k, l) in &idx {
        total += pair(i, j) * mu[k] * mu[l];
    }
    total += pair(0, 1) * pair(2, 3) + pair(0, 2) * pair(1, 3) + pair(0, 3) * pair(1, 2);
    total
}

fn pairwise_expectation(a: &ModeForm, b: &ModeForm, input: &InputState) -> C64 {
    if let InputState::Fock(ns) = input {
        return fock_product_expectation(&[a, b], ns);
    }
    a.mean(input) * b.mean(input) + a.contract(b, input)
}

/// <n_mode(t)>.
pub fn mean_photon_number(
    config: &CouplerConfig,
    t: f64,
    input: &InputState,
    mode: usize,
) -> Result<f64> {
    input.check(config)?;
    let coeffs = coefficients(config, t)?;
    let f = coeffs.form(mode);
    Ok(pairwise_expectation(&f.dagger(), &f, input).re)
}

/// Two-time normalized intensity correlation g2(t, t + tau).
pub fn correlation_g2(
    config: &CouplerConfig,
    t: f64,
    tau: f64,
    input: &InputState,
    mode: usize,
) -> Result<f64> {
    input.check(config)?;
    if matches!(input, InputState::Thermal(_)) {
        return Err(Error::UnsupportedInput(
            "two-time correlation is only published for coherent and Fock inputs".into(),
        ));
    }
    let c_t = coefficients(config, t)?;
    let c_tau = coefficients(config, t + tau)?;
    let f_t = c_t.form(mode);
    let f_tau = c_tau.form(mode);
    let numer =
        quartic_expectation([&f_t.dagger(), &f_tau.dagger(), &f_tau, &f_t], input).re;
    let n_t = pairwise_expectation(&f_t.dagger(), &f_t, input).re;
    let n_tau = pairwise_expectation(&f_tau.dagger(), &f_tau, input).re;
    let denom = n_t * n_tau;
    if denom <= 1e-12 {
        return Err(Error::DivisionByZeroIntensity(denom));
    }
    Ok(numer / denom)
}

/// Super-Poissonian gap <(Delta n)^2> - <n> for input vacuum: equals
/// |sum_m lower_m raise_m|^2 + (sum_m |raise_m|^2)^2, which reduces to the
/// squared anomalous weights of the mode table.
pub fn vacuum_super_poisson_gap(config: &CouplerConfig, t: f64, mode: usize) -> Result<f64> {
    let coeffs = coefficients(config, t)?;
    let f = coeffs.form(mode);
    let cd: C64 = (0..f.lower.len()).map(|m| f.lower[m] * f.raise[m]).sum();
    let dd: f64 = f.raise.iter().map(|d| d.norm_sqr()).sum();
    Ok(cd.norm_sqr() + dd * dd)
}

/// Single-mode or compound quadrature squeezing factors (S, Q) normalized
/// so that -1 <= S < 0 signals squeezing below the vacuum level.
pub fn quadrature_squeezing(
    config: &CouplerConfig,
    t: f64,
    input: &InputState,
    modes: &[usize],
) -> Result<(f64, f64)> {
    if modes.is_empty() || modes.len() > config.mode_count() {
        return Err(Error::InvalidArgument("empty or oversized mode selection".into()));
    }
    if self::InputState::mode_count(input) != config.mode_count() {
        return Err(Error::InvalidArgument("input mode count mismatch".into()));
    }
    // quadratic statistics are insensitive to phase-insensitive mixtures,
    // so thermal input is legitimate for every model here
    let coeffs = coefficients(config, t)?;
    let n = config.mode_count();
    let mut lower = vec![ZERO; n];
    let mut raise = vec![ZERO; n];
    for &m in modes {
        let f = coeffs.form(m);
        for i in 0..n {
            lower[i] += f.lower[i];
            raise[i] += f.raise[i];
        }
    }
    let b = ModeForm { lower, raise };
    let bd = b.dagger();
    let bb = b.contract(&b, input);
    let bbd = b.contract(&bd, input);
    let bdb = bd.contract(&b, input);
    let bdbd = bd.contract(&bd, input);
    let var_x = 0.25 * (bb + bbd + bdb + bdbd).re;
    let var_y = -0.25 * (bb - bbd - bdb + bdbd).re;
    let c = modes.len() as f64 / 2.0;
    Ok(((var_x - 0.5 * c) / (0.5 * c), (var_y - 0.5 * c) / (0.5 * c)))
}

/// Antibunching indicator K(t) = d g2(t, t+tau)/d tau at tau = 0 by a
/// Richardson-extrapolated central difference with step 1e-4/lambda_max.
pub fn antibunching_k(
    config: &CouplerConfig,
    t: f64,
    input: &InputState,
    mode: usize,
) -> Result<f64> {
    let h = 1e-4 / config.lambda_max();
    let d = |step: f64| -> Result<f64> {
        let plus = correlation_g2(config, t, step, input, mode)?;
        let minus = correlation_g2(config, t, -step, input, mode)?;
        Ok((plus - minus) / (2.0 * step))
    };
    if t < h {
        // one-sided near t = 0
        let g0 = correlation_g2(config, t, 0.0, input, mode)?;
        let g1 = correlation_g2(config, t, h, input, mode)?;
        let g2v = correlation_g2(config, t, 2.0 * h, input, mode)?;
        return Ok((-3.0 * g0 + 4.0 * g1 - g2v) / (2.0 * h));
    }
    let full = d(h)?;
    let half = d(h / 2.0)?;
    Ok((4.0 * half - full) / 3.0)
}

/// Forward-difference variant, kept separate so tests can compare schemes.
pub fn antibunching_k_forward(
    config: &CouplerConfig,
    t: f64,
    input: &InputState,
    mode: usize,
) -> Result<f64> {
    let h = 1e-4 / config.lambda_max();
    let g0 = correlation_g2(config, t, 0.0, input, mode)?;
    let g1 = correlation_g2(config, t, h, input, mode)?;
    let g2v = correlation_g2(config, t, 2.0 * h, input, mode)?;
    Ok((-3.0 * g0 + 4.0 * g1 - g2v) / (2.0 * h))
}

// ---------------------------------------------------------------------------
// Gaussian single-mode phase-space description (coherent/thermal inputs)
// ---------------------------------------------------------------------------

/// Single-mode Gaussian description: CF = exp{-((a - s)/2)|zeta|^2
/// + Re(b-bar zeta^2) + mean^* zeta - mean zeta^*}.
#[derive(Debug, Clone, Copy)]
pub struct GaussianMode {
    pub a: f64,
    pub b: C64,
    pub mean: C64,
}

impl GaussianMode {
    /// From a mode expansion and a Gaussian input.
    pub fn from_form(form: &ModeForm, input: &InputState) -> Result<GaussianMode> {
        if matches!(input, InputState::Fock(_)) {
            return Err(Error::UnsupportedInput("Fock input is not Gaussian".into()));
        }
        let mut a = 0.0;
        let mut b = ZERO;
        for m in 0..form.lower.len() {
            let f = 2.0 * input.nbar(m) + 1.0;
            a += f * (form.lower[m].norm_sqr() + form.raise[m].norm_sqr());
            b += f * form.lower[m] * form.raise[m];
        }
        Ok(GaussianMode { a, b, mean: form.mean(input) })
    }

    /// Wigner-ellipse axes at ordering s: (broad, narrow) = (A+ - s, A- - s).
    pub fn axes(&self, s: i8) -> (f64, f64) {
        (self.a + 2.0 * self.b.norm() - s as f64, self.a - 2.0 * self.b.norm() - s as f64)
    }

    /// Orientation angle of the stretched axis.
    pub fn angle(&self) -> f64 {
        0.5 * self.b.arg()
    }

    pub fn characteristic(&self, zeta: C64, s: i8) -> C64 {
        let quad = -0.5 * (self.a - s as f64) * zeta.norm_sqr()
            + (self.b.conj() * zeta * zeta).re;
        (C64::new(quad, 0.0) + self.mean.conj() * zeta - self.mean * zeta.conj()).exp()
    }

    /// Quasiprobability value; PFunctionSingular once the narrow axis loses
    /// positivity (s = 1 squeezing regime).
    pub fn quasiprobability(&self, beta: C64, s: i8) -> Result<f64> {
        let (ap, am) = self.axes(s);
        if am <= 0.0 {
            return Err(Error::PFunctionSingular(format!(
                "narrow Wigner axis {am:.3e} <= 0 at s = {s}"
            )));
        }
        let l = (self.mean - beta) * C64::from_polar(1.0, -self.angle());
        let expo = -2.0 * l.re * l.re / ap - 2.0 * l.im * l.im / am;
        Ok(2.0 / (std::f64::consts::PI * (ap * am).sqrt()) * expo.exp())
    }

    /// Photon-number distribution by the bilinear Laguerre sum over the
    /// ellipse axes.
    pub fn photon_probability(&self, n: usize) -> Result<f64> {
        let (ap, am) = self.axes(0);
        let px = 2.0 / ap;
        let py = 2.0 / am;
        let rot = self.mean * C64::from_polar(1.0, -self.angle());
        let (x0, y0) = (rot.re, rot.im);
        let ln_pref = (2.0 / std::f64::consts::PI * 2.0 / (ap * am).sqrt()).ln();
        let parity = if n % 2 == 0 { 1.0 } else { -1.0 };
        let mut total = 0.0;
        for m in 0..=n {
            let (lx, sx) = laguerre_gaussian_ln(m, px, x0 * x0)?;
            let (ly, sy) = laguerre_gaussian_ln(n - m, py, y0 * y0)?;
            total += sx * sy * (ln_pref + lx + ly).exp();
        }
        Ok(parity * total)
    }

    /// Phase distribution by radial integration of the s = 0 Wigner
    /// function (the published route for the coupler models).
    pub fn phase_value(&self, theta: f64) -> Result<f64> {
        let (ap, am) = self.axes(0);
        let delta = self.angle();
        let thr = theta - delta;
        let rot = self.mean * C64::from_polar(1.0, -delta);
        let kappa = 2.0 * thr.cos() * thr.cos() / ap + 2.0 * thr.sin() * thr.sin() / am;
        let sigma = 4.0 * rot.re * thr.cos() / ap + 4.0 * rot.im * thr.sin() / am;
        let c = -2.0 * rot.re * rot.re / ap - 2.0 * rot.im * rot.im / am;
        let v = radial_gaussian_moment(kappa, C64::new(sigma, 0.0), C64::new(c, 0.0))?;
        Ok(2.0 / (std::f64::consts::PI * (ap * am).sqrt()) * v.re)
    }
}

/// Single-mode Gaussian description of an output mode.
pub fn gaussian_mode(
    config: &CouplerConfig,
    t: f64,
    input: &InputState,
    mode: usize,
) -> Result<GaussianMode> {
    input.check(config)?;
    let coeffs = coefficients(config, t)?;
    GaussianMode::from_form(&coeffs.form(mode), input)
}

/// Single-mode s-parametrized characteristic function for any input kind.
pub fn characteristic_value(
    config: &CouplerConfig,
    t: f64,
    input: &InputState,
    mode: usize,
    zeta: C64,
    s: i8,
) -> Result<C64> {
    input.check(config)?;
    let coeffs = coefficients(config, t)?;
    let form = coeffs.form(mode);
    match input {
        InputState::Fock(ns) => {
            // product of displaced-Fock diagonal elements over the seeds
            let mut val = C64::new(s as f64 / 2.0 * zeta.norm_sqr(), 0.0);
            let mut lag = 1.0;
            for m in 0..ns.len() {
                let gamma = zeta * form.lower[m].conj() - zeta.conj() * form.raise[m];
                val += C64::new(-gamma.norm_sqr() / 2.0, 0.0);
                lag *= crate::numerics::laguerre(ns[m], gamma.norm_sqr())?;
            }
            Ok(val.exp() * lag)
        }
        _ => Ok(GaussianMode::from_form(&form, input)?.characteristic(zeta, s)),
    }
}

/// Quasiprobability of one output mode at one point. Gaussian inputs go
/// through the closed form; Fock inputs through adaptive 2-D quadrature of
/// the characteristic function (the numerical route the model calls for).
pub fn quasiprobability_value(
    config: &CouplerConfig,
    t: f64,
    input: &InputState,
    mode: usize,
    beta: C64,
    s: i8,
) -> Result<f64> {
    input.check(config)?;
    match input {
        InputState::Fock(_) => {
            if s == 1 {
                return Err(Error::PFunctionSingular(
                    "Fock-input P-function is not an ordinary function".into(),
                ));
            }
            let lim = 7.0;
            let cfg = config.clone();
            let inp = input.clone();
            let val = crate::numerics::integrate_2d(
                move |u, v| {
                    let zeta = C64::new(u, v);
                    let c = characteristic_value(&cfg, t, &inp, mode, zeta, s).unwrap_or(ZERO);
                    (c * (beta * zeta.conj() - beta.conj() * zeta).exp()).re
                },
                -lim,
                lim,
                -lim,
                lim,
                1e-8,
            );
            Ok(val / (std::f64::consts::PI * std::f64::consts::PI))
        }
        _ => gaussian_mode(config, t, input, mode)?.quasiprobability(beta, s),
    }
}

/// Fock-input Wigner function on a square grid by a 2-D FFT of the
/// characteristic function (256^2 points, domain +-6 in zeta).
pub fn fock_wigner_grid(
    config: &CouplerConfig,
    t: f64,
    ns: &[usize],
    mode: usize,
    s: i8,
) -> Result<Distribution> {
    use rustfft::{num_complex::Complex as FftC, FftPlanner};
    let input = InputState::Fock(ns.to_vec());
    input.check(config)?;
    if s == 1 {
        return Err(Error::PFunctionSingular("P-function grid not defined".into()));
    }
    const N: usize = 256;
    const L: f64 = 6.0;
    let delta = 2.0 * L / N as f64;
    // sample C on the zeta grid
    let mut data: Vec<FftC<f64>> = Vec::with_capacity(N * N);
    for jv in 0..N {
        let v = -L + delta * jv as f64;
        for ju in 0..N {
            let u = -L + delta * ju as f64;
            let c = characteristic_value(config, t, &input, mode, C64::new(u, v), s)?;
            data.push(FftC::new(c.re, c.im));
        }
    }
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(N);
    let inv = planner.plan_fft_inverse(N);
    // over u (inner index): inverse kernel e^{+2pi i m j / N}
    let mut scratch = vec![FftC::new(0.0, 0.0); N];
    for row in 0..N {
        let slice = &mut data[row * N..(row + 1) * N];
        inv.process_with_scratch(slice, &mut scratch);
    }
    // over v (outer index): forward kernel e^{-2pi i m k / N}
    let mut col = vec![FftC::new(0.0, 0.0); N];
    for cidx in 0..N {
        for (r, c) in col.iter_mut().enumerate() {
            *c = data[r * N + cidx];
        }
        fwd.process_with_scratch(&mut col, &mut scratch);
        for (r, c) in col.iter().enumerate() {
            data[r * N + cidx] = *c;
        }
    }
    // assemble: W(x_m, y_mu) with m, mu in [-N/2, N/2): FFT index k maps to
    // frequency m with the (-1)^(m) checkerboard from the -L grid offset
    let freq = |k: usize| if k < N / 2 { k as i64 } else { k as i64 - N as i64 };
    let scale = delta * delta / (std::f64::consts::PI * std::f64::consts::PI);
    let step_out = std::f64::consts::PI / (2.0 * L);
    let mut xs = vec![0.0; N];
    let mut values = vec![0.0; N * N];
    for k in 0..N {
        xs[k] = step_out * (k as i64 - (N / 2) as i64) as f64;
    }
    for ky in 0..N {
        let my = freq(ky);
        for kx in 0..N {
            let mx = freq(kx);
            let sign = if (mx + my).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            let val = data[ky * N + kx];
            let iy = (my + (N / 2) as i64) as usize;
            let ix = (mx + (N / 2) as i64) as usize;
            values[iy * N + ix] = sign * scale * val.re;
        }
    }
    Ok(Distribution::new_2d(DistributionKind::Wigner2d, xs.clone(), xs, values)
        .with_meta("mode", mode)
        .with_meta("ordering_s", s))
}

/// Photon-number distribution of a coupler output mode for coherent input
/// (the asymmetric model's published observable).
pub fn photon_number_distribution(
    config: &CouplerConfig,
    t: f64,
    input: &InputState,
    mode: usize,
    n_max: usize,
) -> Result<Distribution> {
    if !matches!(config, CouplerConfig::Asymmetric { .. }) {
        return Err(Error::UnsupportedInput(
            "photon-number distribution is published for the asymmetric model".into(),
        ));
    }
    if !matches!(input, InputState::Coherent(_)) {
        return Err(Error::UnsupportedInput("coherent input required".into()));
    }
    let gm = gaussian_mode(config, t, input, mode)?;
    let values: Vec<f64> = (0..=n_max).map(|n| gm.photon_probability(n)).collect::<Result<_>>()?;
    let mass: f64 = values.iter().sum();
    if mass < 1.0 - 1e-6 {
        return Err(Error::TailMass { mass: 1.0 - mass, tol: 1e-6, dim: n_max });
    }
    let grid = (0..=n_max).map(|n| n as f64).collect();
    Ok(Distribution::new_1d(DistributionKind::PhotonNumber, grid, values))
}

/// Poisson reference with the same mean.
pub fn poisson_reference(mean: f64, n_max: usize) -> Distribution {
    let values: Vec<f64> = (0..=n_max)
        .map(|n| (n as f64 * mean.max(1e-300).ln() - mean - ln_factorial(n)).exp())
        .collect();
    let grid = (0..=n_max).map(|n| n as f64).collect();
    Distribution::new_1d(DistributionKind::PhotonNumber, grid, values)
}

/// Phase distribution of an output mode for coherent input (asymmetric
/// model), from the radial integral of the Wigner Gaussian.
pub fn phase_distribution(
    config: &CouplerConfig,
    t: f64,
    input: &InputState,
    mode: usize,
    theta_grid: &[f64],
) -> Result<Distribution> {
    if !matches!(config, CouplerConfig::Asymmetric { .. }) {
        return Err(Error::UnsupportedInput(
            "phase distribution is published for the asymmetric model".into(),
        ));
    }
    if !matches!(input, InputState::Coherent(_)) {
        return Err(Error::UnsupportedInput("coherent input required".into()));
    }
    let gm = gaussian_mode(config, t, input, mode)?;
    let values: Vec<f64> =
        theta_grid.iter().map(|&th| gm.phase_value(th)).collect::<Result<_>>()?;
    Ok(Distribution::new_1d(DistributionKind::Phase, theta_grid.to_vec(), values))
}

/// Squeeze time t_s = 2 pi / (sqrt(3) lambda1) of the asymmetric coupler
/// (m = 1), when the waveguides decouple.
pub fn asymmetric_squeeze_time(lambda1: f64) -> f64 {
    2.0 * std::f64::consts::PI / (3f64.sqrt() * lambda1)
}

/// Regime of the nonlinear-exchange coupler judged from the eigenvalues of
/// the quadrature normal-mode matrix: both positive means bounded
/// oscillatory switching, a negative one means hyperbolic amplification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NlxRegime {
    Oscillatory,
    Amplifying,
    MixedComplex,
}

pub fn nlx_regime(config: &CouplerConfig) -> Result<NlxRegime> {
    let CouplerConfig::NlExchange { lambdas, omegas, mus } = config else {
        return Err(Error::InvalidArgument("regime classification is for NlExchange".into()));
    };
    let [l1, l2, l3, l4] = *lambdas;
    let k0 = omegas[0] + mus[0] / 2.0;
    let j0 = omegas[1] + mus[1] / 2.0;
    let w = mat2_mul(
        [[k0 - 2.0 * l1, l3 - l4], [l3 - l4, j0 - 2.0 * l2]],
        [[k0 + 2.0 * l1, l3 + l4], [l3 + l4, j0 + 2.0 * l2]],
    );
    let tr = w[0][0] + w[1][1];
    let det = w[0][0] * w[1][1] - w[0][1] * w[1][0];
    let disc = tr * tr / 4.0 - det;
    if disc < 0.0 {
        return Ok(NlxRegime::MixedComplex);
    }
    let e1 = tr / 2.0 + disc.sqrt();
    let e2 = tr / 2.0 - disc.sqrt();
    if e1 > 0.0 && e2 > 0.0 {
        Ok(NlxRegime::Oscillatory)
    } else {
        Ok(NlxRegime::Amplifying)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::linspace;

    fn nlx(l1: f64, l2: f64, l3: f64, l4: f64) -> CouplerConfig {
        CouplerConfig::NlExchange { lambdas: [l1, l2, l3, l4], omegas: [0.0, 0.0], mus: [0.0, 0.0] }
    }

    fn fig62a() -> CouplerConfig {
        nlx(0.25, 0.25, 1.0, 0.25)
    }

    fn asym(l1: f64) -> CouplerConfig {
        CouplerConfig::Asymmetric { lambda1: l1 }
    }

    fn sym(l1: f64, l2: f64, l3: f64) -> CouplerConfig {
        CouplerConfig::Symmetric { lambdas: [l1, l2, l3] }
    }

    #[test]
    fn t_zero_is_identity_for_all_models() {
        for config in [fig62a(), asym(0.7), sym(0.1, 1.2, 0.5)] {
            let c = coefficients(&config, 0.0).unwrap();
            for m in 0..config.mode_count() {
                let f = c.form(m);
                for (i, (lo, ra)) in f.lower.iter().zip(f.raise.iter()).enumerate() {
                    let want = if i == m { ONE } else { ZERO };
                    assert!((lo - want).norm() < 1e-12, "{config:?} mode {m}");
                    assert!(ra.norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn commutators_preserved_on_sweeps() {
        let mut seed = 99u64;
        let mut rand = move || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (seed >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..200 {
            let t = 6.0 * rand();
            let configs = [
                nlx(1.2 * rand(), 1.2 * rand(), 1.2 * rand(), 1.2 * rand()),
                asym(0.1 + 1.4 * rand()),
                sym(1.5 * rand(), 1.5 * rand(), 1.5 * rand()),
            ];
            for config in configs {
                let c = coefficients(&config, t).unwrap();
                let scale: f64 = match &c {
                    TimeCoefficients::NlExchange { k1, l1, .. } => {
                        (k1.norm() + l1.norm()).max(1.0).powi(2)
                    }
                    TimeCoefficients::Asymmetric { f, .. } => {
                        f.iter().map(|x| x * x).sum::<f64>().max(1.0)
                    }
                    TimeCoefficients::Symmetric { f, g, h, l, .. } => [f, g, h, l]
                        .iter()
                        .map(|v| v.iter().map(|x| x * x).sum::<f64>())
                        .fold(1.0f64, f64::max),
                };
                for r in c.commutator_residuals() {
                    assert!(r < 1e-10 * scale.max(1.0), "{config:?} t={t}: {r:.2e}");
                }
            }
        }
    }

    #[test]
    fn asymmetric_g_equals_f_and_decoupling_at_ts() {
        let l1 = 1.0;
        let ts = asymmetric_squeeze_time(l1);
        let TimeCoefficients::Asymmetric { f, g, h, .. } =
            coefficients(&asym(l1), ts).unwrap()
        else {
            panic!()
        };
        assert_eq!(f, g);
        // f5 = f6 = h3..h6 = 0 at the squeeze time
        for v in [f[4], f[5], h[2], h[3], h[4], h[5]] {
            assert!(v.abs() < 1e-9, "{v}");
        }
    }

    #[test]
    fn asymmetric_minimum_uncertainty_product() {
        let l1 = 0.8;
        let config = asym(l1);
        let vac = InputState::Coherent(vec![ZERO; 3]);
        let kb = 3f64.sqrt() / 2.0 * l1;
        for i in 0..40 {
            let t = 10.0 * i as f64 / 39.0;
            let (s, q) = quadrature_squeezing(&config, t, &vac, &[2]).unwrap();
            // variances from factors: var = (S + 1)/4 etc.
            let vx = (s + 1.0) / 4.0;
            let vy = (q + 1.0) / 4.0;
            let want = (1.0 + 16.0 / 9.0 * (kb * t).sin().powi(4)) / 16.0;
            assert!((vx * vy - want).abs() < 1e-10, "t={t}: {} vs {want}", vx * vy);
        }
        let ts = asymmetric_squeeze_time(l1);
        let (s, q) = quadrature_squeezing(&config, ts, &vac, &[2]).unwrap();
        let prod = (s + 1.0) * (q + 1.0) / 16.0;
        assert!((prod - 1.0 / 16.0).abs() < 1e-10);
        // the squeezed variance collapses to e^{-lambda1 ts}/4 at ts
        assert!(((s + 1.0) / 4.0 - (-l1 * ts).exp() / 4.0).abs() < 1e-10);
    }

    #[test]
    fn symmetric_pairs_12_34_never_squeezed() {
        let config = sym(0.6, 2.0, 0.5);
        let coherent = InputState::Coherent(vec![C64::new(0.7, 0.2); 4]);
        for t in [0.3, 0.9, 1.7] {
            for pair in [[0usize, 1], [2, 3]] {
                let (s, q) = quadrature_squeezing(&config, t, &coherent, &pair).unwrap();
                assert!((s - q).abs() < 1e-10, "X and Y variances equal");
                assert!(s >= -1e-12, "never squeezed: {s}");
            }
        }
    }

    #[test]
    fn symmetric_14_pair_squeezes() {
        // lambda = (0.1, 1.25, 0.5): squeezing shows up in the (1,4) pair
        let config = sym(0.1, 1.25, 0.5);
        let coherent = InputState::Coherent(vec![ZERO; 4]);
        let mut best = 0.0f64;
        for i in 1..60 {
            let t = 6.0 * i as f64 / 59.0;
            let (s, q) = quadrature_squeezing(&config, t, &coherent, &[0, 3]).unwrap();
            best = best.min(s).min(q);
        }
        assert!(best < -0.05, "squeezing reached {best}");
    }

    #[test]
    fn symmetric_fock_g2_values() {
        // n1 = 4 gives g2(0) = 0.75; vacuum-gap formula matches the table
        let config = sym(0.1, 1.2, 0.5);
        let input = InputState::Fock(vec![4, 1, 1, 1]);
        let g = correlation_g2(&config, 0.0, 0.0, &input, 0).unwrap();
        assert!((g - 0.75).abs() < 1e-12, "{g}");
        let TimeCoefficients::Symmetric { f, h, .. } = coefficients(&config, 0.9).unwrap() else {
            panic!()
        };
        let gap0 = vacuum_super_poisson_gap(&config, 0.9, 0).unwrap();
        let want0 = (f[2] * f[2] + f[3] * f[3]).powi(2);
        assert!((gap0 - want0).abs() < 1e-12);
        let gap2 = vacuum_super_poisson_gap(&config, 0.9, 2).unwrap();
        let want2 = (h[0] * h[0] + h[1] * h[1]).powi(2);
        assert!((gap2 - want2).abs() < 1e-12);
        assert!(gap0 >= 0.0 && gap2 >= 0.0);
        assert!(vacuum_super_poisson_gap(&config, 0.0, 0).unwrap().abs() < 1e-14);
    }

    #[test]
    fn symmetric_coherent_band_and_t0() {
        let config = sym(0.1, 1.2, 0.5);
        let alphas: Vec<C64> = vec![
            C64::from_polar(1.0, std::f64::consts::FRAC_PI_2),
            C64::from_polar(1.0, std::f64::consts::FRAC_PI_3),
            C64::from_polar(1.0, std::f64::consts::FRAC_PI_3),
            C64::from_polar(1.0, std::f64::consts::FRAC_PI_3),
        ];
        let input = InputState::Coherent(alphas);
        for mode in 0..4 {
            let g0 = correlation_g2(&config, 0.0, 0.0, &input, mode).unwrap();
            assert!((g0 - 1.0).abs() < 1e-10, "t=0 coherent: {g0}");
        }
        for i in 1..40 {
            let t = 8.0 * i as f64 / 39.0;
            for mode in 0..4 {
                let g = correlation_g2(&config, t, 0.0, &input, mode).unwrap();
                assert!((1.0 - 1e-9..=2.0 + 1e-9).contains(&g), "t={t} mode={mode}: {g}");
            }
        }
    }

    #[test]
    fn symmetric_swap_symmetry() {
        // swapping (a1 <-> a2, a3 <-> a4, lambda1 <-> lambda3) leaves the
        // statistics invariant
        let a = sym(0.3, 0.9, 0.7);
        let b = sym(0.7, 0.9, 0.3);
        let input_a = InputState::Fock(vec![2, 1, 3, 0]);
        let input_b = InputState::Fock(vec![1, 2, 0, 3]);
        let t = 1.3;
        let map = [1usize, 0, 3, 2];
        for mode in 0..4 {
            let ga = correlation_g2(&a, t, 0.0, &input_a, mode).unwrap();
            let gb = correlation_g2(&b, t, 0.0, &input_b, map[mode]).unwrap();
            assert!((ga - gb).abs() < 1e-9, "mode {mode}: {ga} vs {gb}");
        }
    }

    #[test]
    fn nlx_regime_classification() {
        assert_eq!(nlx_regime(&fig62a()).unwrap(), NlxRegime::Oscillatory);
        // dominant parametric gain: amplifying
        assert_eq!(nlx_regime(&nlx(1.5, 1.5, 0.1, 0.0)).unwrap(), NlxRegime::Amplifying);
    }

    #[test]
    fn nlx_bounded_vs_growing() {
        let osc = fig62a();
        let mut max_norm = 0.0f64;
        for i in 0..100 {
            let t = 100.0 * i as f64 / 99.0;
            let TimeCoefficients::NlExchange { k1, l1, m1, n1, .. } =
                coefficients(&osc, t).unwrap()
            else {
                panic!()
            };
            max_norm =
                max_norm.max(k1.norm()).max(l1.norm()).max(m1.norm()).max(n1.norm());
        }
        assert!(max_norm < 10.0, "oscillatory coefficients bounded: {max_norm}");
        let amp = nlx(1.5, 1.5, 0.1, 0.0);
        let vac = InputState::Coherent(vec![ZERO; 2]);
        let mut last = 0.0;
        for i in 0..20 {
            let t = 2.0 * i as f64 / 19.0;
            let n = mean_photon_number(&amp, t, &vac, 0).unwrap();
            assert!(n >= last - 1e-9, "amplifier photon number nondecreasing");
            last = n;
        }
    }

    #[test]
    fn coherent_unbunched_at_t0() {
        let config = fig62a();
        let input = InputState::Coherent(vec![C64::new(1.0, 0.0), C64::new(0.5, 0.5)]);
        let k = antibunching_k(&config, 0.0, &input, 0).unwrap();
        assert!(k.abs() < 1e-6, "{k}");
    }

    #[test]
    fn antibunching_schemes_agree_and_oscillate() {
        let config = sym(0.1, 1.2, 0.5);
        let input = InputState::Fock(vec![4, 1, 1, 1]);
        let mut signs = Vec::new();
        for i in 1..=24 {
            let t = 6.0 * i as f64 / 24.0;
            let central = antibunching_k(&config, t, &input, 0).unwrap();
            let forward = antibunching_k_forward(&config, t, &input, 0).unwrap();
            assert!(
                (central - forward).abs() < 1e-5 * central.abs().max(1.0),
                "t={t}: {central} vs {forward}"
            );
            signs.push(central.signum());
        }
        assert!(signs.iter().any(|s| *s > 0.0) && signs.iter().any(|s| *s < 0.0));
    }

    #[test]
    fn fock_wigner_at_origin_t0() {
        // t = 0, |1,0>: W(0) = -2/pi
        let config = fig62a();
        let w = quasiprobability_value(
            &config,
            0.0,
            &InputState::Fock(vec![1, 0]),
            0,
            ZERO,
            0,
        )
        .unwrap();
        assert!((w + 2.0 / std::f64::consts::PI).abs() < 1e-4, "{w}");
    }

    #[test]
    fn fock_wigner_grid_negativity_lifecycle() {
        let config = fig62a();
        // pronounced negativity at t = pi/100
        let early = fock_wigner_grid(&config, std::f64::consts::PI / 100.0, &[1, 0], 0, 0)
            .unwrap();
        assert!(early.min_value() < -0.1, "early min {}", early.min_value());
        // negativity gone at t = pi/2
        let late =
            fock_wigner_grid(&config, std::f64::consts::FRAC_PI_2, &[1, 0], 0, 0).unwrap();
        assert!(late.min_value() > -1e-3, "late min {}", late.min_value());
    }

    #[test]
    fn fock_wigner_grid_matches_quadrature() {
        let config = fig62a();
        let t = 0.35;
        let grid = fock_wigner_grid(&config, t, &[1, 0], 0, 0).unwrap();
        let xs = grid.grid.clone();
        // probe a handful of interior grid points against direct quadrature
        for &(ix, iy) in &[(128usize, 128usize), (140, 120), (115, 135)] {
            let beta = C64::new(xs[ix], xs[iy]);
            let direct =
                quasiprobability_value(&config, t, &InputState::Fock(vec![1, 0]), 0, beta, 0)
                    .unwrap();
            let from_grid = grid.value_at(ix, iy);
            assert!((direct - from_grid).abs() < 1e-5, "{direct} vs {from_grid}");
        }
    }

    #[test]
    fn gaussian_wigner_integrates_to_one() {
        let config = fig62a();
        let input = InputState::Coherent(vec![C64::new(1.0, 0.5), C64::new(-0.4, 0.2)]);
        let gm = gaussian_mode(&config, 1.2, &input, 0).unwrap();
        let xs = linspace(-7.0, 7.0, 141);
        let mut total = 0.0;
        let step = xs[1] - xs[0];
        for &x in &xs {
            for &y in &xs {
                total += gm.quasiprobability(C64::new(x, y), 0).unwrap();
            }
        }
        total *= step * step;
        assert!((total - 1.0).abs() < 1e-5, "{total}");
    }

    #[test]
    fn asymmetric_pn_poisson_at_t0_and_tails() {
        let config = asym(0.3);
        let alpha = C64::from_polar(1.5, 0.4);
        let input = InputState::Coherent(vec![alpha, alpha, alpha]);
        let d = photon_number_distribution(&config, 0.0, &input, 0, 24).unwrap();
        let pref = poisson_reference(alpha.norm_sqr(), 24);
        for (a, b) in d.values.iter().zip(&pref.values) {
            assert!((a - b).abs() < 1e-10);
        }
        // signal mode at t = 1.5 is single-peaked and broader than Poisson
        let alpha3 = C64::from_polar(3.0, std::f64::consts::PI / 3.0);
        let input = InputState::Coherent(vec![alpha3, alpha3, alpha3]);
        let d = photon_number_distribution(&config, 1.5, &input, 0, 120).unwrap();
        assert!((d.total_mass() - 1.0).abs() < 1e-6);
        let mean: f64 = d.values.iter().enumerate().map(|(n, p)| n as f64 * p).sum();
        let second: f64 =
            d.values.iter().enumerate().map(|(n, p)| (n * n) as f64 * p).sum();
        assert!(second - mean * mean > mean, "super-Poissonian width");
        assert_eq!(d.local_maxima().len(), 1, "single peak");
    }

    #[test]
    fn asymmetric_linear_mode_oscillatory_pn() {
        let config = asym(1.0);
        let ts = asymmetric_squeeze_time(1.0);
        let alpha = C64::from_polar(0.5, std::f64::consts::PI / 3.0);
        let input = InputState::Coherent(vec![alpha, alpha, alpha]);
        let d = photon_number_distribution(&config, ts, &input, 2, 380).unwrap();
        assert!(d.local_minima().len() >= 2, "macroscopic oscillations");
    }

    #[test]
    fn asymmetric_phase_vacuum_peaks() {
        let config = asym(0.6);
        let vac = InputState::Coherent(vec![ZERO; 3]);
        let grid = linspace(-std::f64::consts::PI, std::f64::consts::PI, 1601);
        // linear mode: exactly two maxima at +-pi/2 with height
        // (1/2pi) sqrt(A-/A+)
        let d = phase_distribution(&config, 1.1, &vac, 2, &grid).unwrap();
        let peaks = d.local_maxima();
        assert_eq!(peaks.len(), 2, "{peaks:?}");
        for &p in &peaks {
            assert!((grid[p].abs() - std::f64::consts::FRAC_PI_2).abs() < 0.01);
        }
        // height (1/2pi) sqrt(A_y/A_x) with the quadrature variances of the
        // linear mode (x-squeezed, y-stretched)
        let (t2, kb) = (1.1, 3f64.sqrt() / 2.0 * 0.6);
        let (c, s2) = ((kb * t2).cos(), (kb * t2).sin());
        let ax = (-0.6 * t2).exp() * ((c + s2 / 3f64.sqrt()).powi(2) + 4.0 / 3.0 * s2 * s2);
        let ay = (0.6 * t2).exp() * ((c - s2 / 3f64.sqrt()).powi(2) + 4.0 / 3.0 * s2 * s2);
        let want = (ay / ax).sqrt() / (2.0 * std::f64::consts::PI);
        let got = d.values[peaks[0]];
        assert!((got - want).abs() < 1e-9, "{got} vs {want}");
        // t = 0: uniform
        let d0 = phase_distribution(&config, 0.0, &vac, 2, &grid).unwrap();
        for v in &d0.values {
            assert!((v - 1.0 / (2.0 * std::f64::consts::PI)).abs() < 1e-10);
        }
        assert!((d0.total_mass() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn asymmetric_phase_bifurcation() {
        let config = asym(0.6);
        let one = C64::new(1.0, 0.0);
        let input = InputState::Coherent(vec![one, one, one]);
        let grid = linspace(-std::f64::consts::PI, std::f64::consts::PI, 1601);
        let early = phase_distribution(&config, 0.4, &input, 2, &grid).unwrap();
        let late = phase_distribution(&config, 3.2, &input, 2, &grid).unwrap();
        assert_eq!(early.local_maxima().len(), 1, "single peak early");
        assert!(late.local_maxima().len() >= 2, "split later");
    }

    #[test]
    fn sub_poisson_impossible_for_symmetric_coherent() {
        let config = sym(0.4, 1.1, 0.6);
        let mut seed = 7u64;
        let mut rand = move || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (seed >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..40 {
            let t = 4.0 * rand();
            let alphas: Vec<C64> =
                (0..4).map(|_| C64::new(2.0 * rand() - 1.0, 2.0 * rand() - 1.0)).collect();
            let input = InputState::Coherent(alphas);
            for mode in 0..4 {
                if let Ok(g) = correlation_g2(&config, t, 0.0, &input, mode) {
                    assert!(g >= 1.0 - 1e-9, "t={t} mode={mode}: {g}");
                }
            }
        }
    }

    #[test]
    fn thermal_input_rules() {
        let th2 = InputState::Thermal(vec![0.5, 0.5]);
        let config = fig62a();
        // S/Q factors allowed for NlExchange thermal input
        let (s, _q) = quadrature_squeezing(&config, 0.0, &th2, &[0]).unwrap();
        assert!((s - 1.0).abs() < 1e-12, "t=0 thermal S = 2 nbar: {s}");
        // but not two-time correlation
        assert!(matches!(
            correlation_g2(&config, 0.5, 0.0, &th2, 0),
            Err(Error::UnsupportedInput(_))
        ));
        // and not for the other models at all
        assert!(matches!(
            mean_photon_number(&asym(0.5), 0.5, &InputState::Thermal(vec![0.1; 3]), 0),
            Err(Error::UnsupportedInput(_))
        ));
    }

    #[test]
    fn nlx_thermal_squeezing_reproduces_closed_form() {
        // S1(t) from the printed structure: first line at t = 0 gives 2 nbar1
        let config = fig62a();
        let th = InputState::Thermal(vec![0.5, 1.5]);
        let (s0, q0) = quadrature_squeezing(&config, 0.0, &th, &[0]).unwrap();
        assert!((s0 - 1.0).abs() < 1e-12);
        assert!((q0 - 1.0).abs() < 1e-12);
        // squeezing eventually appears for curve-C style constants
        let config_c = nlx(0.17, 0.2, 1.0, 0.2);
        let th = InputState::Thermal(vec![0.5, 0.5]);
        let mut best = f64::INFINITY;
        for i in 0..800 {
            let t = 20.0 * i as f64 / 799.0;
            let (s, _) = quadrature_squeezing(&config_c, t, &th, &[0]).unwrap();
            best = best.min(s);
        }
        assert!(best < -0.05, "thermal squeezing at large times reached {best}");
        // more thermal photons in the second guide reduce the squeezing
        let th_hot = InputState::Thermal(vec![0.5, 1.5]);
        let mut best_hot = f64::INFINITY;
        for i in 0..800 {
            let t = 20.0 * i as f64 / 799.0;
            let (s, _) = quadrature_squeezing(&config_c, t, &th_hot, &[0]).unwrap();
            best_hot = best_hot.min(s);
        }
        assert!(best_hot > best, "hotter idle guide squeezes less: {best_hot} vs {best}");
    }
}
