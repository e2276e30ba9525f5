//! Twisted-trace operators on `n` spin-1/2 sites.
//!
//! `T[I, J] = tr(L_{I_n J_n} ... L_{I_1 J_1} q^{(tau/2) w})` with site 1 the
//! most significant bit of the row and column index, and bit 0 the up state.

use num_complex::Complex64;

use crate::intertwiner::{solve_intertwiner, Intertwiner};
use crate::params::{qpow, NumericParams};
use crate::rep::{Mat, Representation};
use crate::Result;

#[derive(Clone, Debug)]
pub struct ChainOperator {
    pub label: String,
    pub matrix: Mat,
    pub sites: usize,
    /// Largest contribution of the top two auxiliary levels to any entry,
    /// relative to the largest entry; zero for untruncated modules.
    pub tail: f64,
}

impl ChainOperator {
    /// Total weight of each chain basis state: `+1` per up spin, `-1` per down.
    pub fn weights(&self) -> Vec<i32> {
        chain_weights(self.sites)
    }

    /// Largest entry coupling different total weights, relative to the largest entry.
    pub fn weight_leak(&self) -> f64 {
        let w = self.weights();
        let max = self.matrix.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let mut leak = 0.0f64;
        for ((r, c), v) in self.matrix.iter().enumerate().map(|(k, v)| ((k % w.len(), k / w.len()), v)) {
            if w[r] != w[c] {
                leak = leak.max(v.norm());
            }
        }
        if max == 0.0 { 0.0 } else { leak / max }
    }
}

pub fn chain_weights(sites: usize) -> Vec<i32> {
    (0..1usize << sites).map(|i| sites as i32 - 2 * i.count_ones() as i32).collect()
}

/// Builds the twisted trace over the auxiliary space of a solved intertwiner.
pub fn trace_operator(label: &str, aux: &Representation, x: &Intertwiner, sites: usize, params: &NumericParams) -> ChainOperator {
    let qd = x.quantum_dim;
    let blocks: Vec<Vec<Mat>> = (0..qd).map(|i| (0..qd).map(|j| x.block(i, j)).collect()).collect();
    let half_tau = params.tau() / 2.0;
    let twist: Vec<Complex64> = aux.weights.iter().map(|w| qpow(params.hbar(), half_tau * w)).collect();
    // products over the first k sites, indexed (I_1..I_k, J_1..J_k)
    let mut prefix = vec![Mat::identity(x.aux_dim, x.aux_dim)];
    let mut width = 1usize;
    for _ in 0..sites {
        let next_width = width * qd;
        let mut next = vec![Mat::zeros(0, 0); next_width * next_width];
        for ii in 0..width {
            for jj in 0..width {
                let p = &prefix[ii * width + jj];
                for i in 0..qd {
                    for j in 0..qd {
                        next[(ii * qd + i) * next_width + jj * qd + j] = &blocks[i][j] * p;
                    }
                }
            }
        }
        prefix = next;
        width = next_width;
    }
    let matrix = Mat::from_fn(width, width, |r, c| {
        let p = &prefix[r * width + c];
        (0..x.aux_dim).map(|a| p[(a, a)] * twist[a]).sum()
    });
    let edge: Vec<usize> = if aux.truncated {
        (0..x.aux_dim).filter(|&a| aux.levels[a] + 2 >= x.aux_dim).collect()
    } else {
        Vec::new()
    };
    let max = matrix.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let tail = prefix
        .iter()
        .map(|p| edge.iter().map(|&a| p[(a, a)] * twist[a]).sum::<Complex64>().norm())
        .fold(0.0, f64::max);
    let tail = if max == 0.0 { 0.0 } else { tail / max };
    ChainOperator { label: label.to_string(), matrix, sites, tail }
}

/// An auxiliary module with its solved intertwiner against the spin-1/2 space.
#[derive(Clone, Debug)]
pub struct SolvedAux {
    pub label: String,
    pub rep: Representation,
    pub intertwiner: Intertwiner,
}

impl SolvedAux {
    pub fn new(label: impl Into<String>, rep: Representation, params: &NumericParams) -> Result<Self> {
        let rep = rep.checked(params.tolerances.relation)?;
        let spin = Representation::spin(params.hbar());
        let intertwiner = solve_intertwiner(&rep, &spin)?;
        Ok(SolvedAux { label: label.into(), rep, intertwiner })
    }

    pub fn operator(&self, sites: usize, params: &NumericParams) -> ChainOperator {
        trace_operator(&self.label, &self.rep, &self.intertwiner, sites, params)
    }
}

fn grading(p: &NumericParams) -> [u32; 2] {
    [p.s0, p.s1]
}

/// Verma module with highest weight `(mu1, mu2)`, giving `T~^mu(zeta)`.
pub fn verma_aux(params: &NumericParams, mu: (Complex64, Complex64), zeta: Complex64, cutoff: usize) -> Result<SolvedAux> {
    let rep = Representation::verma(params.hbar(), mu.0 - mu.1, mu.0 + mu.1, zeta, grading(params), cutoff);
    SolvedAux::new(format!("T~(mu={:.4},{:.4}; zeta={:.4})", mu.0, mu.1, zeta), rep, params)
}

/// Finite evaluation module with `mu1 - mu2 = k`, giving `T^mu(zeta)`.
pub fn finite_aux(params: &NumericParams, k: usize, mu_sum: Complex64, zeta: Complex64) -> Result<SolvedAux> {
    let rep = Representation::finite(params.hbar(), k, mu_sum, zeta, grading(params));
    SolvedAux::new(format!("T(k={k}, sum={mu_sum:.4}; zeta={zeta:.4})"), rep, params)
}

/// Fock module giving `Q_a(zeta)`.
pub fn oscillator_aux(params: &NumericParams, a: usize, zeta: Complex64, cutoff: usize) -> Result<SolvedAux> {
    let rep = Representation::oscillator(params.hbar(), a, zeta, grading(params), cutoff)?;
    SolvedAux::new(format!("Q{a}(zeta={zeta:.4})"), rep, params)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_weights_are_big_endian_spins() {
        assert_eq!(chain_weights(2), vec![2, 0, 0, -2]);
        assert_eq!(chain_weights(1), vec![1, -1]);
    }

    #[test]
    fn one_site_trace_matches_direct_sum() {
        let p = NumericParams::default();
        let aux = oscillator_aux(&p, 2, Complex64::new(0.7, 0.2), 16).unwrap();
        let t = aux.operator(1, &p);
        let twist: Vec<Complex64> = aux.rep.weights.iter().map(|w| qpow(p.hbar(), p.tau() / 2.0 * w)).collect();
        for i in 0..2 {
            for j in 0..2 {
                let l = aux.intertwiner.block(i, j);
                let direct: Complex64 = (0..16).map(|a| l[(a, a)] * twist[a]).sum();
                assert!((t.matrix[(i, j)] - direct).norm() < 1e-14 * direct.norm().max(1.0));
            }
        }
    }

    #[test]
    fn site_order_of_products() {
        // two sites: T[(I1 I2), (J1 J2)] = tr(L_{I2 J2} L_{I1 J1} twist)
        let p = NumericParams::default();
        let aux = verma_aux(&p, (Complex64::new(0.3, 0.1), Complex64::new(-0.2, 0.0)), Complex64::new(0.9, 0.1), 20).unwrap();
        let t = aux.operator(2, &p);
        let twist: Vec<Complex64> = aux.rep.weights.iter().map(|w| qpow(p.hbar(), p.tau() / 2.0 * w)).collect();
        let l = |i, j| aux.intertwiner.block(i, j);
        let (i1, i2, j1, j2) = (0, 1, 1, 0);
        let prod = l(i2, j2) * l(i1, j1);
        let direct: Complex64 = (0..20).map(|a| prod[(a, a)] * twist[a]).sum();
        let got = t.matrix[(i1 * 2 + i2, j1 * 2 + j2)];
        assert!((got - direct).norm() < 1e-13 * direct.norm());
        assert!(t.weight_leak() < 1e-14);
    }
}
