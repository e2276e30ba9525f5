//! Truncated matrix representations of the loop algebra generators on the
//! auxiliary spaces, and of the spin-1/2 quantum space.
//!
//! Basis vectors carry a level (0 at the highest weight or Fock vacuum) and
//! every generator changes the level by at most one, so a product of `k`
//! generators is exact on the block of levels `<= cutoff - 1 - k`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::params::{qnum, qpow};
use crate::{NumericError, Result};

pub type Mat = DMatrix<Complex64>;

#[derive(Clone, Debug, PartialEq)]
pub enum RepKind {
    /// `(k+1)`-dimensional evaluation module, `mu1 - mu2 = k`.
    Finite { k: usize },
    Verma { lambda: Complex64 },
    /// q-oscillator module feeding the `a`-th Q-operator.
    Oscillator { a: usize },
}

/// Matrices of `b`, `b^dagger` and the diagonal of `q^N` on a Fock module.
#[derive(Clone, Debug)]
pub struct OscillatorOps {
    pub b: Mat,
    pub bdag: Mat,
    pub qn: Vec<Complex64>,
}

#[derive(Clone, Debug)]
pub struct Representation {
    pub kind: RepKind,
    /// `e_0`, `e_1`.
    pub e: [Mat; 2],
    /// `f_0`, `f_1`, when the module carries the full algebra.
    pub f: Option<[Mat; 2]>,
    /// `K_1 = q^w`, `K_0 = q^{-w}`.
    pub weights: Vec<Complex64>,
    pub levels: Vec<usize>,
    pub truncated: bool,
    pub oscillator: Option<OscillatorOps>,
    pub hbar: Complex64,
}

fn diag(v: &[Complex64]) -> Mat {
    Mat::from_diagonal(&nalgebra::DVector::from_column_slice(v))
}

fn qminus(h: Complex64) -> Complex64 {
    h.exp() - (-h).exp()
}

impl Representation {
    /// Highest-weight module with `K_1 v_0 = q^lambda v_0` in the balanced
    /// basis `F v_m = g_m v_{m+1}`, `E v_{m+1} = (p_m / g_m) v_m`,
    /// `p_m = [m+1][lambda-m]`, `g_m = sqrt(p_m)`. At a vanishing `p_m` the
    /// lowering entry is kept at 1 so the submodule stays attached.
    fn highest_weight(
        hbar: Complex64,
        lambda: Complex64,
        mu_sum: Complex64,
        zeta: Complex64,
        grading: [u32; 2],
        dim: usize,
        kind: RepKind,
    ) -> Self {
        let truncated = !matches!(kind, RepKind::Finite { .. });
        let one = Complex64::new(1.0, 0.0);
        let mut e = Mat::zeros(dim, dim);
        let mut f = Mat::zeros(dim, dim);
        for m in 0..dim - 1 {
            let p = qnum(hbar, (m as f64 + 1.0).into()) * qnum(hbar, lambda - m as f64);
            let g = if p.norm() > 1e-12 { p.sqrt() } else { one };
            f[(m + 1, m)] = g;
            e[(m, m + 1)] = p / g;
        }
        let z0 = zeta.powu(grading[0]);
        let z1 = zeta.powu(grading[1]);
        let qs = qpow(hbar, mu_sum);
        Representation {
            kind,
            e: [&f * (z0 * qs), &e * z1],
            f: Some([&e * (one / (z0 * qs)), &f * (one / z1)]),
            weights: (0..dim).map(|m| lambda - 2.0 * m as f64).collect(),
            levels: (0..dim).collect(),
            truncated,
            oscillator: None,
            hbar,
        }
    }

    /// Spin-1/2 quantum space at unit spectral parameter.
    pub fn spin(hbar: Complex64) -> Self {
        Self::finite(hbar, 1, 1.0.into(), 1.0.into(), [1, 1])
    }

    pub fn finite(hbar: Complex64, k: usize, mu_sum: Complex64, zeta: Complex64, grading: [u32; 2]) -> Self {
        let lambda = Complex64::new(k as f64, 0.0);
        Self::highest_weight(hbar, lambda, mu_sum, zeta, grading, k + 1, RepKind::Finite { k })
    }

    pub fn verma(
        hbar: Complex64,
        lambda: Complex64,
        mu_sum: Complex64,
        zeta: Complex64,
        grading: [u32; 2],
        cutoff: usize,
    ) -> Self {
        Self::highest_weight(hbar, lambda, mu_sum, zeta, grading, cutoff, RepKind::Verma { lambda })
    }

    /// Fock module for the `a`-th Q-operator, `a` in `{1, 2}`.
    ///
    /// `a = 2`: `b^dag w_n = w_{n+1}`, `b w_n = [n] w_{n-1}`, `q^N = q^n`, with
    /// `e_0 = b^dag`, `e_1 = -b q^N / (q - q^-1)`, `K_1 = q^{-2N}`.
    /// `a = 1`: `b w_n = w_{n+1}`, `b^dag w_n = -[n] w_{n-1}`, `q^N = q^{-n-1}`,
    /// with the roles of `e_0` and `e_1` exchanged and `K_1 = q^{2N}`.
    /// The generator matrices are written out directly; the oscillator
    /// matrices are kept alongside so the relation check compares the two.
    pub fn oscillator(hbar: Complex64, a: usize, zeta: Complex64, grading: [u32; 2], cutoff: usize) -> Result<Self> {
        if !(1..=2).contains(&a) {
            return Err(NumericError::Params(format!("oscillator index {a} not in 1..=2")));
        }
        let d = cutoff;
        let qm = qminus(hbar);
        let q = hbar.exp();
        let one = Complex64::new(1.0, 0.0);
        let qn = |n: usize| qnum(hbar, (n as f64).into());
        let (mut e0, mut e1) = (Mat::zeros(d, d), Mat::zeros(d, d));
        let (mut b, mut bdag) = (Mat::zeros(d, d), Mat::zeros(d, d));
        let mut qnd = Vec::with_capacity(d);
        let mut weights = Vec::with_capacity(d);
        for n in 0..d {
            if a == 2 {
                if n + 1 < d {
                    e0[(n + 1, n)] = one;
                    bdag[(n + 1, n)] = one;
                }
                if n >= 1 {
                    e1[(n - 1, n)] = -qn(n) * q.powi(n as i32) / qm;
                    b[(n - 1, n)] = qn(n);
                }
                qnd.push(q.powi(n as i32));
                weights.push(Complex64::new(-2.0 * n as f64, 0.0));
            } else {
                if n + 1 < d {
                    e0[(n + 1, n)] = -q.powi(-(n as i32 + 1)) / qm;
                    b[(n + 1, n)] = one;
                }
                if n >= 1 {
                    e1[(n - 1, n)] = -qn(n);
                    bdag[(n - 1, n)] = -qn(n);
                }
                qnd.push(q.powi(-(n as i32 + 1)));
                weights.push(Complex64::new(-2.0 * n as f64 - 2.0, 0.0));
            }
        }
        Ok(Representation {
            kind: RepKind::Oscillator { a },
            e: [e0 * zeta.powu(grading[0]), e1 * zeta.powu(grading[1])],
            f: None,
            weights,
            levels: (0..d).collect(),
            truncated: true,
            oscillator: Some(OscillatorOps { b, bdag, qn: qnd }),
            hbar,
        })
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    /// Diagonal of `K_i`.
    pub fn k_diag(&self, i: usize) -> Vec<Complex64> {
        let sign = if i == 1 { 1.0 } else { -1.0 };
        self.weights.iter().map(|w| qpow(self.hbar, w * sign)).collect()
    }

    /// Basis indices on which products of `depth` generators are exact.
    pub fn interior(&self, depth: usize) -> Vec<usize> {
        if !self.truncated {
            return (0..self.dim()).collect();
        }
        let top = self.dim().saturating_sub(1 + depth);
        (0..self.dim()).filter(|&i| self.levels[i] <= top).collect()
    }

    /// Relative residual of every defining relation on the interior.
    pub fn relation_residuals(&self) -> Vec<(String, f64)> {
        let h = self.hbar;
        let q = h.exp();
        let qm = qminus(h);
        let one = Complex64::new(1.0, 0.0);
        let cartan = [[2.0, -2.0], [-2.0, 2.0]];
        let k: [Mat; 2] = [diag(&self.k_diag(0)), diag(&self.k_diag(1))];
        let kinv: [Mat; 2] = [diag(&self.k_diag(1)), diag(&self.k_diag(0))];
        let mut out = Vec::new();
        let mut push = |name: String, terms: Vec<(Complex64, Mat)>, depth: usize| {
            out.push((name, residual(&terms, &self.interior(depth))));
        };
        let q3 = qnum(h, 3.0.into());
        let serre = |x: &Mat, y: &Mat| -> Vec<(Complex64, Mat)> {
            vec![
                (one, x * x * x * y),
                (-q3, x * x * y * x),
                (q3, x * y * x * x),
                (-one, y * x * x * x),
            ]
        };
        for i in 0..2 {
            for j in 0..2 {
                let c = qpow(h, cartan[i][j].into());
                push(format!("K{i} e{j} K{i}^-1"), vec![(one, &k[i] * &self.e[j] * &kinv[i]), (-c, self.e[j].clone())], 1);
                if let Some(f) = &self.f {
                    push(format!("K{i} f{j} K{i}^-1"), vec![(one, &k[i] * &f[j] * &kinv[i]), (-one / c, f[j].clone())], 1);
                    let mut t = vec![(one, &self.e[i] * &f[j]), (-one, &f[j] * &self.e[i])];
                    if i == j {
                        t.push((-one / qm, k[i].clone()));
                        t.push((one / qm, kinv[i].clone()));
                    }
                    push(format!("[e{i}, f{j}]"), t, 2);
                }
            }
        }
        push("serre e0 e1".into(), serre(&self.e[0], &self.e[1]), 4);
        push("serre e1 e0".into(), serre(&self.e[1], &self.e[0]), 4);
        if let Some(f) = &self.f {
            push("serre f0 f1".into(), serre(&f[0], &f[1]), 4);
            push("serre f1 f0".into(), serre(&f[1], &f[0]), 4);
        }
        if let (Some(o), RepKind::Oscillator { a }) = (&self.oscillator, &self.kind) {
            let qn = diag(&o.qn);
            let qninv = diag(&o.qn.iter().map(|x| one / x).collect::<Vec<_>>());
            push("b^dag b".into(), vec![(one, &o.bdag * &o.b), (-one / qm, qn.clone()), (one / qm, qninv.clone())], 2);
            push("b b^dag".into(), vec![(one, &o.b * &o.bdag), (-q / qm, qn.clone()), (one / (q * qm), qninv.clone())], 2);
            push("q^N b^dag q^-N".into(), vec![(one, &qn * &o.bdag * &qninv), (-q, o.bdag.clone())], 1);
            push("q^N b q^-N".into(), vec![(one, &qn * &o.b * &qninv), (-one / q, o.b.clone())], 1);
            // generator matrices against their oscillator images, with the
            // spectral parameter divided out via the ratio of a nonzero entry
            let (with_dag, with_b) = if *a == 2 { (0, 1) } else { (1, 0) };
            let zr = self.e[with_dag].iter().zip(o.bdag.iter()).find(|(_, y)| y.norm() > 0.0).map(|(x, y)| x / y).unwrap_or(one);
            let bq = &o.b * &qn;
            let zl = self.e[with_b].iter().zip(bq.iter()).find(|(_, y)| y.norm() > 0.0).map(|(x, y)| -x * qm / y).unwrap_or(one);
            push(format!("e{with_dag} = b^dag"), vec![(one, self.e[with_dag].clone()), (-zr, o.bdag.clone())], 1);
            push(format!("e{with_b} = -b q^N / (q - q^-1)"), vec![(one, self.e[with_b].clone()), (zl / qm, bq)], 1);
            let sign = if *a == 2 { -2.0 } else { 2.0 };
            let k2n: Vec<Complex64> = o.qn.iter().map(|x| x.powf(sign)).collect();
            push("K1 = q^{-+2N}".into(), vec![(one, k[1].clone()), (-one, diag(&k2n))], 0);
        }
        out
    }

    pub fn relation_residual(&self) -> f64 {
        self.relation_residuals().into_iter().map(|(_, r)| r).fold(0.0, f64::max)
    }

    /// Returns `self` if every relation holds to `tol`.
    pub fn checked(self, tol: f64) -> Result<Self> {
        for (name, r) in self.relation_residuals() {
            if r.is_nan() || r > tol {
                return Err(NumericError::Relation { name, residual: r, tol });
            }
        }
        Ok(self)
    }
}

/// `|| sum c_k M_k || / sum |c_k| ||M_k||` on the `idx` x `idx` block.
fn residual(terms: &[(Complex64, Mat)], idx: &[usize]) -> f64 {
    let mut total = 0.0;
    let mut scale = 0.0;
    for &r in idx {
        for &c in idx {
            let mut s = Complex64::new(0.0, 0.0);
            for (k, m) in terms {
                let v = k * m[(r, c)];
                s += v;
                scale += v.norm_sqr();
            }
            total += s.norm_sqr();
        }
    }
    let scale = scale.sqrt();
    if scale == 0.0 { 0.0 } else { total.sqrt() / scale }
}
