//! Numeric intertwiner between the coproducts on `aux (x) quantum`, solved
//! as the null vector of the linear system it satisfies on the interior.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::rep::{Mat, Representation};
use crate::{NumericError, Result};

const WEIGHT_EPS: f64 = 1e-9;
const EQUILIBRATION_PASSES: usize = 3;

/// Solution `X` on `aux (x) quantum`, indexed `aux * quantum_dim + quantum`,
/// normalized so that `X[0, 0] = 1`.
#[derive(Clone, Debug)]
pub struct Intertwiner {
    pub matrix: Mat,
    pub aux_dim: usize,
    pub quantum_dim: usize,
    pub equations: usize,
    pub unknowns: usize,
    /// Smallest and second-smallest singular values relative to the largest,
    /// after equilibration.
    pub sigma_min: f64,
    pub sigma_next: f64,
    pub residual: f64,
}

impl Intertwiner {
    /// Auxiliary-space operator `L_ij` with `X = sum_ij L_ij (x) E_ij`.
    pub fn block(&self, i: usize, j: usize) -> Mat {
        let qd = self.quantum_dim;
        Mat::from_fn(self.aux_dim, self.aux_dim, |a, b| self.matrix[(a * qd + i, b * qd + j)])
    }
}

/// The two sides of `X Delta(e_i) = Delta'(e_i) X` as matrices on the
/// product, `Delta(e) = e (x) 1 + K (x) e` and `Delta'(e) = 1 (x) e + e (x) K`.
fn coproducts(aux: &Representation, quantum: &Representation, i: usize) -> (Mat, Mat) {
    let ia = Mat::identity(aux.dim(), aux.dim());
    let iq = Mat::identity(quantum.dim(), quantum.dim());
    let ka = Mat::from_diagonal(&nalgebra::DVector::from_vec(aux.k_diag(i)));
    let kq = Mat::from_diagonal(&nalgebra::DVector::from_vec(quantum.k_diag(i)));
    let opp = ia.kronecker(&quantum.e[i]) + aux.e[i].kronecker(&kq);
    let std = aux.e[i].kronecker(&iq) + ka.kronecker(&quantum.e[i]);
    (opp, std)
}

fn equation_rows(aux: &Representation, quantum: &Representation) -> Vec<usize> {
    let inner = aux.interior(1);
    let qd = quantum.dim();
    inner.iter().flat_map(|&a| (0..qd).map(move |s| a * qd + s)).collect()
}

pub fn solve_intertwiner(aux: &Representation, quantum: &Representation) -> Result<Intertwiner> {
    let qd = quantum.dim();
    let n = aux.dim() * qd;
    let total: Vec<Complex64> = (0..n).map(|r| aux.weights[r / qd] + quantum.weights[r % qd]).collect();
    let mut index = vec![usize::MAX; n * n];
    let mut unknowns = Vec::new();
    for r in 0..n {
        for c in 0..n {
            if (total[r] - total[c]).norm() < WEIGHT_EPS {
                index[r * n + c] = unknowns.len();
                unknowns.push((r, c));
            }
        }
    }
    let inner = equation_rows(aux, quantum);
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    for i in 0..2 {
        let (a, b) = coproducts(aux, quantum, i);
        for &r in &inner {
            for &c in &inner {
                let mut row = vec![Complex64::new(0.0, 0.0); unknowns.len()];
                let mut any = false;
                for k in 0..n {
                    let (ark, bkc) = (a[(r, k)], b[(k, c)]);
                    if ark.norm() > 0.0 && index[k * n + c] != usize::MAX {
                        row[index[k * n + c]] += ark;
                        any = true;
                    }
                    if bkc.norm() > 0.0 && index[r * n + k] != usize::MAX {
                        row[index[r * n + k]] -= bkc;
                        any = true;
                    }
                }
                if any && row.iter().any(|v| v.norm() > 0.0) {
                    rows.push(row);
                }
            }
        }
    }
    // unknowns that appear in no equation lie on the truncation boundary
    let keep: Vec<usize> = (0..unknowns.len()).filter(|&j| rows.iter().any(|r| r[j].norm() > 0.0)).collect();
    let m = DMatrix::from_fn(rows.len(), keep.len(), |r, j| rows[r][keep[j]]);
    let (x, sv) = equilibrated_null_vector(&m);
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let mut sorted = sv.clone();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let (sigma_min, sigma_next) = (sorted[0] / smax, sorted.get(1).copied().unwrap_or(smax) / smax);
    if sigma_min > 1e-8 {
        return Err(NumericError::NoSolution { sigma: sigma_min });
    }
    if sigma_next < 1e-8 {
        return Err(NumericError::Degenerate { gap: sigma_next });
    }
    let mut matrix = Mat::zeros(n, n);
    for (j, &u) in keep.iter().enumerate() {
        matrix[unknowns[u]] = x[j];
    }
    let x00 = matrix[(0, 0)];
    if x00.norm() < 1e-300 {
        return Err(NumericError::Normalization);
    }
    matrix /= x00;
    let residual = intertwiner_residual(aux, quantum, &matrix);
    Ok(Intertwiner {
        matrix,
        aux_dim: aux.dim(),
        quantum_dim: qd,
        equations: rows.len(),
        unknowns: keep.len(),
        sigma_min,
        sigma_next,
        residual,
    })
}

/// Null vector of `m` after repeated column equilibration by the current
/// estimate and row normalization. Returns the vector and the singular values
/// of the final scaled system.
fn equilibrated_null_vector(m: &Mat) -> (Vec<Complex64>, Vec<f64>) {
    let (nr, nc) = m.shape();
    let mut scale = vec![1.0f64; nc];
    let mut x = vec![Complex64::new(0.0, 0.0); nc];
    let mut sv = Vec::new();
    for _ in 0..EQUILIBRATION_PASSES {
        let mut ms = Mat::zeros(nr.max(nc), nc);
        for r in 0..nr {
            let mut norm = 0.0;
            for c in 0..nc {
                let v = m[(r, c)] * scale[c];
                ms[(r, c)] = v;
                norm += v.norm_sqr();
            }
            let norm = norm.sqrt();
            for c in 0..nc {
                ms[(r, c)] /= norm;
            }
        }
        let svd = ms.svd(false, true);
        let vt = svd.v_t.expect("requested v_t");
        sv = svd.singular_values.iter().cloned().collect();
        let imin = (0..sv.len()).min_by(|&a, &b| sv[a].total_cmp(&sv[b])).expect("nonempty system");
        for c in 0..nc {
            x[c] = vt[(imin, c)].conj() * scale[c];
            scale[c] = x[c].norm().max(1e-300);
        }
    }
    (x, sv)
}

/// Largest per-equation residual on the interior, each relative to the sum
/// of the absolute values of its terms.
pub fn intertwiner_residual(aux: &Representation, quantum: &Representation, x: &Mat) -> f64 {
    let inner = equation_rows(aux, quantum);
    let n = x.nrows();
    let mut worst = 0.0f64;
    for i in 0..2 {
        let (a, b) = coproducts(aux, quantum, i);
        for &r in &inner {
            for &c in &inner {
                let mut s = Complex64::new(0.0, 0.0);
                let mut scale = 0.0;
                for k in 0..n {
                    let u = a[(r, k)] * x[(k, c)];
                    let v = x[(r, k)] * b[(k, c)];
                    s += u - v;
                    scale += u.norm() + v.norm();
                }
                if scale > 0.0 {
                    worst = worst.max(s.norm() / scale);
                }
            }
        }
    }
    worst
}
