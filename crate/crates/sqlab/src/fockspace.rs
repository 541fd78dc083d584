//! Truncated-Fock-space brute-force oracle.
//!
//! Builds matrix representations of the displacement and squeeze operators,
//! assembles density matrices for the superposition states, and recomputes
//! every observable numerically so the closed forms elsewhere can be
//! verified against an independent route.

use crate::error::{Error, Result};
use crate::numerics::ln_factorial;
use crate::ssdns::SsdnsSpec;
use crate::thermal::ThermalSpec;
use crate::C64;

pub mod multimode;

const ZERO: C64 = C64::new(0.0, 0.0);

// ---------------------------------------------------------------------------
// dense complex matrices
// ---------------------------------------------------------------------------

/// Dense square complex matrix in row-major order. Small and boring on
/// purpose: the oracle never exceeds a few hundred rows.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    pub dim: usize,
    pub data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        CMatrix { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.data[i * n + k];
                if aik == ZERO {
                    continue;
                }
                let row = &rhs.data[k * n..(k + 1) * n];
                let orow = &mut out.data[i * n..(i + 1) * n];
                for j in 0..n {
                    orow[j] += aik * row[j];
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        let n = self.dim;
        let mut out = vec![ZERO; n];
        for i in 0..n {
            let mut acc = ZERO;
            let row = &self.data[i * n..(i + 1) * n];
            for j in 0..n {
                acc += row[j] * v[j];
            }
            out[i] = acc;
        }
        out
    }

    pub fn scale(&self, s: C64) -> Self {
        CMatrix { dim: self.dim, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        CMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        CMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        let n = self.dim;
        (0..n)
            .map(|j| (0..n).map(|i| self.data[i * n + j].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    /// Gaussian elimination with partial pivoting; the oracle only inverts
    /// the well-conditioned Pade denominators.
    pub fn solve(&self, rhs: &Self) -> Self {
        let n = self.dim;
        let mut a = self.clone();
        let mut b = rhs.clone();
        for col in 0..n {
            let mut piv = col;
            let mut best = a[(col, col)].norm();
            for r in col + 1..n {
                let v = a[(r, col)].norm();
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            if piv != col {
                for j in 0..n {
                    a.data.swap(col * n + j, piv * n + j);
                    b.data.swap(col * n + j, piv * n + j);
                }
            }
            let d = a[(col, col)];
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[(r, col)] / d;
                if f == ZERO {
                    continue;
                }
                for j in 0..n {
                    let ac = a.data[col * n + j];
                    let bc = b.data[col * n + j];
                    a.data[r * n + j] -= f * ac;
                    b.data[r * n + j] -= f * bc;
                }
            }
        }
        for r in 0..n {
            let d = a[(r, r)];
            for j in 0..n {
                b.data[r * n + j] /= d;
            }
        }
        b
    }

    /// Matrix exponential by scaling-and-squaring with the order-13 Pade
    /// approximant; the scaling count comes from the 1-norm.
    pub fn expm(&self) -> Self {
        const B: [f64; 14] = [
            64764752532480000.0,
            32382376266240000.0,
            7771770303897600.0,
            1187353796428800.0,
            129060195264000.0,
            10559470521600.0,
            670442572800.0,
            33522128640.0,
            1323241920.0,
            40840800.0,
            960960.0,
            16380.0,
            182.0,
            1.0,
        ];
        const THETA13: f64 = 5.371920351148152;
        let norm = self.norm_one();
        let s = if norm > THETA13 { (norm / THETA13).log2().ceil() as i32 } else { 0 };
        let a = self.scale(C64::new(0.5f64.powi(s), 0.0));
        let n = self.dim;
        let a2 = a.mul(&a);
        let a4 = a2.mul(&a2);
        let a6 = a4.mul(&a2);
        let ident = Self::identity(n);
        // u = A (A6 (b13 A6 + b11 A4 + b9 A2) + b7 A6 + b5 A4 + b3 A2 + b1 I)
        let w1 = a6.scale(B[13].into()).add(&a4.scale(B[11].into())).add(&a2.scale(B[9].into()));
        let w2 = a6
            .scale(B[7].into())
            .add(&a4.scale(B[5].into()))
            .add(&a2.scale(B[3].into()))
            .add(&ident.scale(B[1].into()));
        let u = a.mul(&a6.mul(&w1).add(&w2));
        // v = A6 (b12 A6 + b10 A4 + b8 A2) + b6 A6 + b4 A4 + b2 A2 + b0 I
        let z1 = a6.scale(B[12].into()).add(&a4.scale(B[10].into())).add(&a2.scale(B[8].into()));
        let z2 = a6
            .scale(B[6].into())
            .add(&a4.scale(B[4].into()))
            .add(&a2.scale(B[2].into()))
            .add(&ident.scale(B[0].into()));
        let v = a6.mul(&z1).add(&z2);
        let mut r = v.sub(&u).solve(&v.add(&u));
        for _ in 0..s {
            r = r.mul(&r);
        }
        r
    }

    /// Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations.
    pub fn eigvals_hermitian(&self) -> Vec<f64> {
        let n = self.dim;
        let mut a = self.clone();
        for _sweep in 0..60 {
            let mut off = 0.0;
            for p in 0..n {
                for q in p + 1..n {
                    off += a[(p, q)].norm_sqr();
                }
            }
            if off < 1e-26 * n as f64 {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let apq = a[(p, q)];
                    if apq.norm() < 1e-300 {
                        continue;
                    }
                    let app = a[(p, p)].re;
                    let aqq = a[(q, q)].re;
                    // phase so the pivot becomes real, then a real rotation
                    let phase = apq / apq.norm();
                    let g = apq.norm();
                    let theta = 0.5 * (2.0 * g).atan2(aqq - app);
                    let (c, s) = (theta.cos(), theta.sin());
                    // columns
                    for i in 0..n {
                        let aip = a[(i, p)];
                        let aiq = a[(i, q)];
                        a[(i, p)] = aip * c - aiq * phase.conj() * s;
                        a[(i, q)] = aip * phase * s + aiq * c;
                    }
                    // rows
                    for j in 0..n {
                        let apj = a[(p, j)];
                        let aqj = a[(q, j)];
                        a[(p, j)] = apj * c - aqj * phase * s;
                        a[(q, j)] = apj * phase.conj() * s + aqj * c;
                    }
                }
            }
        }
        let mut ev: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
        ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
        ev
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

// ---------------------------------------------------------------------------
// elementary operators
// ---------------------------------------------------------------------------

/// Annihilation operator a on the truncated space.
pub fn annihilation(dim: usize) -> CMatrix {
    let mut m = CMatrix::zeros(dim);
    for n in 1..dim {
        m[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    m
}

/// Creation operator a^dag on the truncated space.
pub fn creation(dim: usize) -> CMatrix {
    annihilation(dim).adjoint()
}

/// Matrix elements <n|D(alpha)|k> from the associated-Laguerre closed form,
/// generalized to complex alpha:
/// n >= k: sqrt(k!/n!) alpha^(n-k) e^{-|a|^2/2} L_k^{n-k}(|a|^2)
/// k >  n: sqrt(n!/k!) (-alpha^*)^(k-n) e^{-|a|^2/2} L_n^{k-n}(|a|^2)
pub fn displacement_matrix(alpha: C64, dim: usize) -> CMatrix {
    let mut m = CMatrix::zeros(dim);
    let a2 = alpha.norm_sqr();
    let gauss = (-a2 / 2.0).exp();
    // one upward Laguerre recurrence per diagonal keeps the build at
    // O(dim^2) so the Wigner oracle can afford one matrix per grid point
    for off in 0..dim {
        let nu = off as f64;
        let pow_up = if off == 0 { C64::new(1.0, 0.0) } else { alpha.powu(off as u32) };
        let pow_dn =
            if off == 0 { C64::new(1.0, 0.0) } else { (-alpha.conj()).powu(off as u32) };
        let mut prev = 1.0f64;
        let mut cur = 1.0 + nu - a2;
        for lo in 0..dim - off {
            let lag = if lo == 0 { 1.0 } else { cur };
            let lnr = 0.5 * (ln_factorial(lo) - ln_factorial(lo + off));
            let amp = lnr.exp() * gauss * lag;
            m[(lo + off, lo)] = amp * pow_up;
            if off > 0 {
                m[(lo, lo + off)] = amp * pow_dn;
            }
            if lo >= 1 {
                let j = lo as f64;
                let next = ((2.0 * j + 1.0 + nu - a2) * cur - (j + nu) * prev) / (j + 1.0);
                prev = cur;
                cur = next;
            }
        }
    }
    m
}

/// Squeeze operator with the transformation convention
/// S^dag(xi) a S(xi) = a cosh|xi| - a^dag e^{i arg xi} sinh|xi|,
/// i.e. the matrix exponential of (xi^* a^2 - xi a^dag^2)/2 on the
/// truncated space.
pub fn squeeze_matrix(xi: C64, dim: usize) -> CMatrix {
    let a = annihilation(dim);
    let a2 = a.mul(&a);
    let ad2 = a2.adjoint();
    a2.scale(xi.conj() / 2.0).sub(&ad2.scale(xi / 2.0)).expm()
}

// ---------------------------------------------------------------------------
// states
// ---------------------------------------------------------------------------

/// Density matrix on the truncated space.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    pub dim: usize,
    pub entries: CMatrix,
}

impl DensityMatrix {
    /// Hermiticity / trace / positivity checks from the type contract.
    pub fn validate(&self) -> Result<()> {
        let adj = self.entries.adjoint();
        let dev = self.entries.sub(&adj).max_abs();
        if dev > 1e-12 {
            return Err(Error::InvalidArgument(format!("density matrix not Hermitian: {dev:.2e}")));
        }
        let tr = self.entries.trace();
        if (tr.re - 1.0).abs() > 1e-6 || tr.im.abs() > 1e-10 {
            return Err(Error::InvalidArgument(format!("trace {tr} too far from 1")));
        }
        let min_ev = self.entries.eigvals_hermitian().into_iter().fold(f64::INFINITY, f64::min);
        if min_ev < -1e-9 {
            return Err(Error::InvalidArgument(format!("negative eigenvalue {min_ev:.2e}")));
        }
        Ok(())
    }
}

/// Which state the oracle should prepare.
#[derive(Debug, Clone)]
pub enum StateSpec {
    Pure(SsdnsSpec),
    Thermal(ThermalSpec),
}

/// Mixture of pure member vectors; the efficient face of the oracle.
/// The density matrix is sum_j w_j |psi_j><psi_j| with normalized members.
#[derive(Debug, Clone)]
pub struct OracleState {
    pub dim: usize,
    pub members: Vec<(f64, Vec<C64>)>,
}

/// Default truncation and the escalation step of the tail-mass rule.
pub const DEFAULT_DIM: usize = 64;
pub const ESCALATED_DIM: usize = 128;
const TAIL_TOL: f64 = 1e-8;

fn ssdns_member(spec: &SsdnsSpec, dim: usize) -> (Vec<C64>, f64) {
    let mut v = vec![ZERO; dim];
    v[spec.n] = C64::new(1.0, 0.0);
    let s = squeeze_matrix(C64::new(spec.r, 0.0), dim);
    let sv = s.matvec(&v);
    let dp = displacement_matrix(C64::new(spec.alpha, 0.0), dim);
    let dm = displacement_matrix(C64::new(-spec.alpha, 0.0), dim);
    let pv = dp.matvec(&sv);
    let mv = dm.matvec(&sv);
    let w: Vec<C64> = pv.iter().zip(&mv).map(|(p, m)| p + spec.epsilon * m).collect();
    let norm2: f64 = w.iter().map(|x| x.norm_sqr()).sum();
    (w, norm2)
}

fn tail_mass(members: &[(f64, Vec<C64>)], dim: usize) -> f64 {
    let guard = dim.saturating_sub(dim / 8).max(dim - 4);
    members
        .iter()
        .map(|(w, v)| w * v[guard..].iter().map(|x| x.norm_sqr()).sum::<f64>())
        .sum()
}

/// Build the oracle state at a fixed truncation (no tail check).
pub fn oracle_state_at(spec: &StateSpec, dim: usize) -> Result<OracleState> {
    let members = match spec {
        StateSpec::Pure(s) => {
            s.validate()?;
            let (w, norm2) = ssdns_member(s, dim);
            if norm2 < 1e-14 {
                return Err(Error::DegenerateState("superposition norm collapsed".into()));
            }
            let inv = 1.0 / norm2.sqrt();
            vec![(1.0, w.into_iter().map(|x| x * inv).collect())]
        }
        StateSpec::Thermal(t) => {
            t.validate()?;
            let z = t.z();
            let mut members = Vec::new();
            let mut weights = Vec::new();
            let mut n = 0usize;
            loop {
                let zb = if n == 0 { 1.0 } else { z.powi(n as i32) };
                // Bose-Einstein weights summed until z^n < 1e-12 (1 - z)
                if n > 0 && (zb < 1e-12 * (1.0 - z) || n >= dim) {
                    break;
                }
                let base = SsdnsSpec { n, ..t.base.clone() };
                let (w, norm2) = ssdns_member(&base, dim);
                weights.push(zb * norm2);
                members.push(w);
                if z == 0.0 {
                    break;
                }
                n += 1;
            }
            let total: f64 = weights.iter().sum();
            if total < 1e-14 {
                return Err(Error::DegenerateState("thermal mixture norm collapsed".into()));
            }
            members
                .into_iter()
                .zip(weights)
                .map(|(v, wn)| {
                    let norm2: f64 = v.iter().map(|x| x.norm_sqr()).sum();
                    let inv = 1.0 / norm2.sqrt();
                    (wn / total, v.into_iter().map(|x| x * inv).collect::<Vec<C64>>())
                })
                .collect()
        }
    };
    Ok(OracleState { dim, members })
}

/// Build the oracle state with the truncation rule: start at `dim`,
/// escalate once to [`ESCALATED_DIM`] when the tail-mass check fails, then
/// error out.
pub fn oracle_state(spec: &StateSpec, dim: usize) -> Result<OracleState> {
    let first = oracle_state_at(spec, dim)?;
    if tail_mass(&first.members, dim) < TAIL_TOL {
        return Ok(first);
    }
    let dim2 = ESCALATED_DIM.max(dim * 2);
    let second = oracle_state_at(spec, dim2)?;
    let mass = tail_mass(&second.members, dim2);
    if mass < TAIL_TOL {
        return Ok(second);
    }
    Err(Error::TailMass { mass, tol: TAIL_TOL, dim: dim2 })
}

impl OracleState {
    pub fn density_matrix(&self) -> DensityMatrix {
        let mut m = CMatrix::zeros(self.dim);
        for (w, v) in &self.members {
            for i in 0..self.dim {
                for j in 0..self.dim {
                    m[(i, j)] += *w * v[i] * v[j].conj();
                }
            }
        }
        DensityMatrix { dim: self.dim, entries: m }
    }

    pub fn photon_probability(&self, m: usize) -> f64 {
        self.members.iter().map(|(w, v)| w * v[m].norm_sqr()).sum()
    }

    pub fn mean_n(&self) -> f64 {
        self.members
            .iter()
            .map(|(w, v)| {
                w * v.iter().enumerate().map(|(n, x)| n as f64 * x.norm_sqr()).sum::<f64>()
            })
            .sum()
    }

    /// <a^dag^2 a^2> = sum n(n-1) P(n).
    pub fn second_factorial_moment(&self) -> f64 {
        self.members
            .iter()
            .map(|(w, v)| {
                w * v
                    .iter()
                    .enumerate()
                    .map(|(n, x)| (n * n.saturating_sub(1)) as f64 * x.norm_sqr())
                    .sum::<f64>()
            })
            .sum()
    }

    pub fn n_variance(&self) -> f64 {
        let n = self.mean_n();
        self.second_factorial_moment() + n - n * n
    }

    pub fn g2(&self) -> Result<f64> {
        let n = self.mean_n();
        if n <= 1e-12 {
            return Err(Error::DivisionByZeroIntensity(n));
        }
        Ok(self.second_factorial_moment() / (n * n))
    }

    /// Wigner value by the parity series W(beta) = (2/pi) sum_k (-1)^k
    /// <k| D(-beta) rho D(-beta)^dag |k>.
    pub fn wigner(&self, beta: C64) -> f64 {
        let d = displacement_matrix(-beta, self.dim);
        let mut acc = 0.0;
        for (w, v) in &self.members {
            let dv = d.matvec(v);
            let s: f64 = dv
                .iter()
                .enumerate()
                .map(|(k, x)| if k % 2 == 0 { x.norm_sqr() } else { -x.norm_sqr() })
                .sum();
            acc += w * s;
        }
        2.0 / std::f64::consts::PI * acc
    }

    /// Q(beta) = <beta| rho |beta> / pi.
    pub fn q(&self, beta: C64) -> f64 {
        let coh = coherent_vector(beta, self.dim);
        let mut acc = 0.0;
        for (w, v) in &self.members {
            let amp: C64 = coh.iter().zip(v).map(|(c, x)| c.conj() * x).sum();
            acc += w * amp.norm_sqr();
        }
        acc / std::f64::consts::PI
    }

    pub fn purity(&self) -> f64 {
        let mut acc = 0.0;
        for (wi, vi) in &self.members {
            for (wj, vj) in &self.members {
                let ov: C64 = vi.iter().zip(vj).map(|(a, b)| a.conj() * b).sum();
                acc += wi * wj * ov.norm_sqr();
            }
        }
        acc
    }

    /// Continuum Pegg-Barnett phase density at theta, built from the same
    /// finite truncation the analytic module uses (the full stored dim).
    pub fn pegg_barnett(&self, theta: f64) -> f64 {
        let mut acc = 0.0;
        for (w, v) in &self.members {
            let amp: C64 = v
                .iter()
                .enumerate()
                .map(|(m, c)| c * C64::from_polar(1.0, -(m as f64) * theta))
                .sum();
            acc += w * amp.norm_sqr();
        }
        acc / (2.0 * std::f64::consts::PI)
    }

    /// Parity expectation <Pi> = sum (-1)^n P(n).
    pub fn parity(&self) -> f64 {
        self.members
            .iter()
            .map(|(w, v)| {
                w * v
                    .iter()
                    .enumerate()
                    .map(|(n, x)| if n % 2 == 0 { x.norm_sqr() } else { -x.norm_sqr() })
                    .sum::<f64>()
            })
            .sum()
    }
}

/// Coherent state vector on the truncated space.
pub fn coherent_vector(beta: C64, dim: usize) -> Vec<C64> {
    let mut v = vec![ZERO; dim];
    let mut cur = C64::new((-beta.norm_sqr() / 2.0).exp(), 0.0);
    v[0] = cur;
    for n in 1..dim {
        cur *= beta / (n as f64).sqrt();
        v[n] = cur;
    }
    v
}

/// Observables the density-matrix face of the oracle can evaluate.
#[derive(Debug, Clone, Copy)]
pub enum Observable {
    MeanN,
    NVariance,
    G2,
    Pm(usize),
    Wigner(C64),
    Q(C64),
    Purity,
    PeggBarnett(f64),
}

/// Numeric observable from a density matrix via matrix traces.
pub fn oracle_observable(rho: &DensityMatrix, which: Observable) -> Result<f64> {
    let dim = rho.dim;
    let num = annihilation(dim).adjoint().mul(&annihilation(dim));
    match which {
        Observable::MeanN => Ok(rho.entries.mul(&num).trace().re),
        Observable::NVariance => {
            let n = rho.entries.mul(&num).trace().re;
            let n2 = rho.entries.mul(&num.mul(&num)).trace().re;
            Ok(n2 - n * n)
        }
        Observable::G2 => {
            let n = rho.entries.mul(&num).trace().re;
            if n <= 1e-12 {
                return Err(Error::DivisionByZeroIntensity(n));
            }
            let a = annihilation(dim);
            let ad = a.adjoint();
            let a2 = a.mul(&a);
            let num4 = ad.mul(&ad).mul(&a2);
            Ok(rho.entries.mul(&num4).trace().re / (n * n))
        }
        Observable::Pm(m) => Ok(rho.entries[(m, m)].re),
        Observable::Wigner(beta) => {
            let d = displacement_matrix(beta, dim);
            let rot = d.adjoint().mul(&rho.entries).mul(&d);
            let mut s = 0.0;
            for k in 0..dim {
                let v = rot[(k, k)].re;
                s += if k % 2 == 0 { v } else { -v };
            }
            Ok(2.0 / std::f64::consts::PI * s)
        }
        Observable::Q(beta) => {
            let coh = coherent_vector(beta, dim);
            let rv = rho.entries.matvec(&coh);
            let val: C64 = coh.iter().zip(&rv).map(|(c, x)| c.conj() * x).sum();
            Ok(val.re / std::f64::consts::PI)
        }
        Observable::Purity => Ok(rho.entries.mul(&rho.entries).trace().re),
        Observable::PeggBarnett(theta) => {
            let mut acc = ZERO;
            for m in 0..dim {
                for mp in 0..dim {
                    acc += rho.entries[(m, mp)] * C64::from_polar(1.0, (mp as f64 - m as f64) * theta);
                }
            }
            Ok(acc.re / (2.0 * std::f64::consts::PI))
        }
    }
}
