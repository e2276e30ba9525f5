//! Run parameters, loadable from TOML. Every field has a default, so an empty
//! file reproduces the standard run.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{NumericError, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub relation: f64,
    pub intertwiner: f64,
    pub commutator: f64,
    pub factorization: f64,
    pub eigenvalue: f64,
    pub bgg: f64,
    pub cutoff: f64,
    /// Entries of the right-hand side below this fraction of the largest
    /// one are skipped when forming entrywise ratios.
    pub ratio_floor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            relation: 1e-12,
            intertwiner: 1e-11,
            commutator: 1e-10,
            factorization: 1e-8,
            eigenvalue: 1e-7,
            bgg: 1e-8,
            cutoff: 1e-10,
            ratio_floor: 1e-6,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NumericParams {
    /// `q = exp(hbar)`, given as `[re, im]`.
    pub hbar: [f64; 2],
    /// Grading exponents of the two Chevalley generators.
    pub s0: u32,
    pub s1: u32,
    /// Twist, scaled by `twist_scale` before use.
    pub twist: [f64; 2],
    pub twist_scale: f64,
    /// Highest weight `(mu1, mu2)` of the Verma module, as `[re, im]` pairs.
    pub mu: [[f64; 2]; 2],
    pub fock_cutoff: usize,
    pub verma_cutoff: usize,
    pub sites: usize,
    /// Number of random spectral parameters per seed.
    pub zeta_samples: usize,
    /// Explicit spectral parameters; when non-empty they replace the random ones.
    pub zetas: Vec<[f64; 2]>,
    pub tolerances: Tolerances,
}

impl Default for NumericParams {
    fn default() -> Self {
        NumericParams {
            hbar: [0.31, 0.17],
            s0: 1,
            s1: 1,
            twist: [1.3, 0.4],
            twist_scale: 8.0,
            mu: [[0.3, 0.1], [-0.2, 0.0]],
            fock_cutoff: 24,
            verma_cutoff: 40,
            sites: 4,
            zeta_samples: 5,
            zetas: Vec::new(),
            tolerances: Tolerances::default(),
        }
    }
}

impl NumericParams {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let p: NumericParams = toml::from_str(s)?;
        p.validate()?;
        Ok(p)
    }

    pub fn hbar(&self) -> Complex64 {
        Complex64::new(self.hbar[0], self.hbar[1])
    }

    pub fn q(&self) -> Complex64 {
        self.hbar().exp()
    }

    pub fn s(&self) -> u32 {
        self.s0 + self.s1
    }

    /// The twist as it enters the trace, `q^{(tau/2) w}` on weight `w`.
    pub fn tau(&self) -> Complex64 {
        Complex64::new(self.twist[0], self.twist[1]) * self.twist_scale
    }

    pub fn mu(&self) -> (Complex64, Complex64) {
        let c = |v: [f64; 2]| Complex64::new(v[0], v[1]);
        (c(self.mu[0]), c(self.mu[1]))
    }

    /// Per-level decay of the twisted trace, `|q^{-tau}|`.
    pub fn trace_decay(&self) -> f64 {
        (-self.hbar() * self.tau()).exp().norm()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(NumericError::Params(m));
        if self.sites == 0 {
            return bad("sites must be positive".into());
        }
        if self.fock_cutoff < 8 || self.verma_cutoff < 8 {
            return bad("cutoffs must be at least 8".into());
        }
        if self.s0 == 0 || self.s1 == 0 {
            return bad("grading exponents must be positive".into());
        }
        let q = self.q();
        let top = 2 * self.fock_cutoff.max(self.verma_cutoff) + 2;
        for k in 1..=top as i32 {
            if (q.powi(k) - 1.0).norm() < 1e-6 {
                return bad(format!("q is within 1e-6 of a root of unity of order {k}"));
            }
        }
        if self.trace_decay() >= 0.9 {
            return bad(format!("twisted trace decays too slowly (ratio {:.3})", self.trace_decay()));
        }
        Ok(())
    }

    /// Spectral parameters for a run: the explicit list if given, otherwise
    /// `zeta_samples` draws with modulus in `[0.5, 1.5]` from `seed`.
    pub fn spectral_parameters(&self, seed: u64) -> Vec<Complex64> {
        if !self.zetas.is_empty() {
            return self.zetas.iter().map(|z| Complex64::new(z[0], z[1])).collect();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..self.zeta_samples)
            .map(|_| Complex64::from_polar(rng.gen_range(0.5..1.5), rng.gen_range(-PI..PI)))
            .collect()
    }
}

/// `q^x` for complex `x`, where `q = exp(h)`.
pub fn qpow(h: Complex64, x: Complex64) -> Complex64 {
    (h * x).exp()
}

/// Symmetric q-number `[x] = (q^x - q^-x) / (q - q^-1)` at complex `x`.
pub fn qnum(h: Complex64, x: Complex64) -> Complex64 {
    (qpow(h, x) - qpow(h, -x)) / (h.exp() - (-h).exp())
}
