//! Sparse multimode oracle: product Fock spaces with operator application
//! on state vectors and Taylor-with-scaling evolution, used to cross-check
//! the three-mode squeeze operator and the coupler models without ever
//! materializing the full many-body matrices.

use crate::C64;

const ZERO: C64 = C64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    Lower,
    Raise,
}

/// One additive term of a generator: coeff times a product of ladder
/// operators, applied rightmost first.
#[derive(Debug, Clone)]
pub struct Term {
    pub coeff: C64,
    pub ops: Vec<(usize, Ladder)>,
}

#[derive(Debug, Clone)]
pub struct MultiMode {
    pub dims: Vec<usize>,
    strides: Vec<usize>,
    pub len: usize,
}

impl MultiMode {
    pub fn new(dims: &[usize]) -> Self {
        let mut strides = vec![0usize; dims.len()];
        let mut acc = 1usize;
        for (i, &d) in dims.iter().enumerate().rev() {
            strides[i] = acc;
            acc *= d;
        }
        MultiMode { dims: dims.to_vec(), strides, len: acc }
    }

    pub fn vacuum(&self) -> Vec<C64> {
        let mut v = vec![ZERO; self.len];
        v[0] = C64::new(1.0, 0.0);
        v
    }

    pub fn fock(&self, ns: &[usize]) -> Vec<C64> {
        let mut idx = 0usize;
        for (m, &n) in ns.iter().enumerate() {
            assert!(n < self.dims[m], "fock index beyond truncation");
            idx += n * self.strides[m];
        }
        let mut v = vec![ZERO; self.len];
        v[idx] = C64::new(1.0, 0.0);
        v
    }

    pub fn coherent(&self, alphas: &[C64]) -> Vec<C64> {
        let mut v = self.vacuum();
        for (m, &al) in alphas.iter().enumerate() {
            if al == ZERO {
                continue;
            }
            let mut next = vec![ZERO; self.len];
            // v <- exp(-|al|^2/2) sum_k al^k/sqrt(k!) raise^k applied modewise
            let dm = self.dims[m];
            let stride = self.strides[m];
            let gauss = (-al.norm_sqr() / 2.0).exp();
            for (idx, &amp) in v.iter().enumerate() {
                if amp == ZERO {
                    continue;
                }
                let base_n = (idx / stride) % dm;
                debug_assert_eq!(base_n, 0);
                let mut term = amp * gauss;
                let mut lnfac = 0.0f64;
                for k in 0..dm {
                    if k > 0 {
                        term *= al;
                        lnfac += (k as f64).ln();
                    }
                    next[idx + k * stride] += term * (-0.5 * lnfac).exp();
                }
            }
            v = next;
        }
        v
    }

    /// Apply annihilation on mode m.
    pub fn apply_lower(&self, m: usize, v: &[C64], out: &mut [C64]) {
        let d = self.dims[m];
        let stride = self.strides[m];
        for (idx, &amp) in v.iter().enumerate() {
            if amp == ZERO {
                continue;
            }
            let n = (idx / stride) % d;
            if n > 0 {
                out[idx - stride] += amp * (n as f64).sqrt();
            }
        }
    }

    /// Apply creation on mode m. Amplitude moving beyond the truncation is
    /// dropped; callers size `dims` so that loss stays below tolerance.
    pub fn apply_raise(&self, m: usize, v: &[C64], out: &mut [C64]) {
        let d = self.dims[m];
        let stride = self.strides[m];
        for (idx, &amp) in v.iter().enumerate() {
            if amp == ZERO {
                continue;
            }
            let n = (idx / stride) % d;
            if n + 1 < d {
                out[idx + stride] += amp * ((n + 1) as f64).sqrt();
            }
        }
    }

    pub fn apply_terms(&self, terms: &[Term], v: &[C64]) -> Vec<C64> {
        let mut out = vec![ZERO; self.len];
        let mut buf_a = vec![ZERO; self.len];
        let mut buf_b = vec![ZERO; self.len];
        for term in terms {
            buf_a.copy_from_slice(v);
            for &(mode, ladder) in term.ops.iter().rev() {
                buf_b.iter_mut().for_each(|x| *x = ZERO);
                match ladder {
                    Ladder::Lower => self.apply_lower(mode, &buf_a, &mut buf_b),
                    Ladder::Raise => self.apply_raise(mode, &buf_a, &mut buf_b),
                }
                std::mem::swap(&mut buf_a, &mut buf_b);
            }
            for (o, &x) in out.iter_mut().zip(buf_a.iter()) {
                *o += term.coeff * x;
            }
        }
        out
    }

    /// v <- exp(G) v by Taylor series with scaling: exp(G) = (exp(G/s))^s.
    pub fn expmv(&self, terms: &[Term], v: &[C64], norm_bound: f64) -> Vec<C64> {
        let steps = norm_bound.ceil().max(1.0) as usize;
        let inv = 1.0 / steps as f64;
        let mut state = v.to_vec();
        for _ in 0..steps {
            let mut acc = state.clone();
            let mut term = state.clone();
            for k in 1..=30 {
                let next = self.apply_terms(terms, &term);
                let factor = inv / k as f64;
                term = next.into_iter().map(|x| x * factor).collect();
                for (a, &t) in acc.iter_mut().zip(term.iter()) {
                    *a += t;
                }
                let tn: f64 = term.iter().map(|x| x.norm_sqr()).sum();
                if tn < 1e-34 {
                    break;
                }
            }
            state = acc;
        }
        state
    }

    pub fn mean_n(&self, m: usize, v: &[C64]) -> f64 {
        let d = self.dims[m];
        let stride = self.strides[m];
        v.iter()
            .enumerate()
            .map(|(idx, amp)| ((idx / stride) % d) as f64 * amp.norm_sqr())
            .sum()
    }

    /// <a_m^dag^2 a_m^2> = sum n(n-1) P_m(n).
    pub fn second_factorial_moment(&self, m: usize, v: &[C64]) -> f64 {
        let d = self.dims[m];
        let stride = self.strides[m];
        v.iter()
            .enumerate()
            .map(|(idx, amp)| {
                let n = (idx / stride) % d;
                (n * n.saturating_sub(1)) as f64 * amp.norm_sqr()
            })
            .sum()
    }

    /// <n_j n_k> for j != k.
    pub fn cross_number_moment(&self, j: usize, k: usize, v: &[C64]) -> f64 {
        let (dj, sk) = (self.dims[j], self.strides[k]);
        let (sj, dk) = (self.strides[j], self.dims[k]);
        v.iter()
            .enumerate()
            .map(|(idx, amp)| {
                let nj = (idx / sj) % dj;
                let nk = (idx / sk) % dk;
                (nj * nk) as f64 * amp.norm_sqr()
            })
            .sum()
    }

    /// Expectation of a Hermitian quadratic combination given as terms.
    pub fn expectation(&self, terms: &[Term], v: &[C64]) -> C64 {
        let tv = self.apply_terms(terms, v);
        v.iter().zip(tv.iter()).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn norm_sqr(&self, v: &[C64]) -> f64 {
        v.iter().map(|x| x.norm_sqr()).sum()
    }

    /// Reduced density matrix of one mode from a pure state vector.
    pub fn reduced_density(&self, mode: usize, v: &[C64]) -> crate::fockspace::CMatrix {
        let d = self.dims[mode];
        let stride = self.strides[mode];
        let mut rho = crate::fockspace::CMatrix::zeros(d);
        // indices split as idx = hi * (stride * d) + n * stride + lo
        let outer = self.len / (stride * d);
        for hi in 0..outer {
            for lo in 0..stride {
                let base = hi * stride * d + lo;
                for n in 0..d {
                    let an = v[base + n * stride];
                    if an == ZERO {
                        continue;
                    }
                    for m in 0..d {
                        let am = v[base + m * stride];
                        if am != ZERO {
                            rho[(n, m)] += an * am.conj();
                        }
                    }
                }
            }
        }
        rho
    }

    /// Apply a single-mode operator given as a dense matrix on one tensor
    /// factor.
    pub fn apply_mode_matrix(
        &self,
        mode: usize,
        mat: &crate::fockspace::CMatrix,
        v: &[C64],
    ) -> Vec<C64> {
        let d = self.dims[mode];
        assert_eq!(mat.dim, d);
        let stride = self.strides[mode];
        let outer = self.len / (stride * d);
        let mut out = vec![ZERO; self.len];
        for hi in 0..outer {
            for lo in 0..stride {
                let base = hi * stride * d + lo;
                for n in 0..d {
                    let mut acc = ZERO;
                    for m in 0..d {
                        let am = v[base + m * stride];
                        if am != ZERO {
                            acc += mat[(n, m)] * am;
                        }
                    }
                    out[base + n * stride] = acc;
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coherent_state_moments() {
        let mm = MultiMode::new(&[24, 24]);
        let al = [C64::new(1.1, 0.4), C64::new(-0.6, 0.2)];
        let v = mm.coherent(&al);
        assert!((mm.norm_sqr(&v) - 1.0).abs() < 1e-10);
        assert!((mm.mean_n(0, &v) - al[0].norm_sqr()).abs() < 1e-9);
        assert!((mm.mean_n(1, &v) - al[1].norm_sqr()).abs() < 1e-9);
        // independent modes: <n0 n1> = <n0><n1>
        let cross = mm.cross_number_moment(0, 1, &v);
        assert!((cross - al[0].norm_sqr() * al[1].norm_sqr()).abs() < 1e-8);
    }

    #[test]
    fn expmv_matches_displacement() {
        // exp(al a^dag - al^* a)|0> is the coherent state
        let mm = MultiMode::new(&[28]);
        let al = C64::new(0.9, -0.5);
        let terms = vec![
            Term { coeff: al, ops: vec![(0, Ladder::Raise)] },
            Term { coeff: -al.conj(), ops: vec![(0, Ladder::Lower)] },
        ];
        let v = mm.expmv(&terms, &mm.vacuum(), 4.0 * al.norm());
        let want = mm.coherent(&[al]);
        let err: f64 =
            v.iter().zip(&want).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
        assert!(err < 1e-10, "{err}");
    }

    #[test]
    fn two_mode_squeezer_mean_photons() {
        // exp(r(a1d a2d - a1 a2)) |00>: <n_j> = sinh^2 r
        let mm = MultiMode::new(&[20, 20]);
        let r = 0.5;
        let terms = vec![
            Term { coeff: C64::new(r, 0.0), ops: vec![(0, Ladder::Raise), (1, Ladder::Raise)] },
            Term { coeff: C64::new(-r, 0.0), ops: vec![(0, Ladder::Lower), (1, Ladder::Lower)] },
        ];
        let v = mm.expmv(&terms, &mm.vacuum(), 8.0 * r);
        let want = (r.sinh()) * (r.sinh());
        assert!((mm.mean_n(0, &v) - want).abs() < 1e-9);
        assert!((mm.mean_n(1, &v) - want).abs() < 1e-9);
    }
}
