//! Numeric checks: defining relations, intertwiner residuals, commutativity,
//! the factorization of `T~` into a product of Q-operators, the BGG relation
//! for integer highest weight, and stability under changes of cutoff.

use nalgebra::{DVector, Schur};
use num_complex::Complex64;
use qloop_core::report::VerificationReport;
use rayon::prelude::*;
use serde_json::json;

use crate::params::NumericParams;
use crate::rep::Mat;
use crate::transfer::{chain_weights, finite_aux, oscillator_aux, verma_aux, ChainOperator, SolvedAux};
use crate::Result;

/// Shifts `c_1 = 2 mu1 + 1`, `c_2 = 2 mu2 - 1` placing the Q-operators at
/// `zeta_a = q^{c_a / s} zeta`.
pub fn q_shifts(mu: (Complex64, Complex64)) -> (Complex64, Complex64) {
    (2.0 * mu.0 + 1.0, 2.0 * mu.1 - 1.0)
}

/// `log zeta_a = log zeta + hbar c_a / s`.
pub fn shifted_log(params: &NumericParams, zeta: Complex64, c: Complex64) -> Complex64 {
    zeta.ln() + params.hbar() * c / params.s() as f64
}

/// Diagonals of `C`, `R_1`, `R_2` in
/// `C T~^mu(zeta) = rho R_1 Q_1(zeta_1) R_2 Q_2(zeta_2)`.
pub fn diagonal_factors(
    params: &NumericParams,
    sites: usize,
    log_z1: Complex64,
    log_z2: Complex64,
) -> (Vec<Complex64>, Vec<Complex64>, Vec<Complex64>) {
    let h = params.hbar();
    let tau = params.tau();
    let s4 = params.s() as f64 / 4.0;
    let w: Vec<Complex64> = chain_weights(sites).into_iter().map(|w| Complex64::new(w as f64, 0.0) - tau).collect();
    let c = w.iter().map(|&w| {
        let x = (h * w / 2.0).exp();
        x / (1.0 - x * x)
    });
    let r1 = w.iter().map(|&w| (-w * s4 * log_z1).exp());
    let r2 = w.iter().map(|&w| (w * s4 * log_z2).exp());
    (c.collect(), r1.collect(), r2.collect())
}

fn scale_rows(d: &[Complex64], m: &Mat) -> Mat {
    Mat::from_fn(m.nrows(), m.ncols(), |r, c| d[r] * m[(r, c)])
}

/// Entrywise ratio `left / right` on entries of `right` above `floor` times
/// its largest entry. Returns the ratio at the largest entry and the largest
/// relative deviation from it.
pub fn ratio_spread(left: &Mat, right: &Mat, floor: f64) -> (Complex64, f64) {
    let max = right.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let (mut best, mut r0) = (0.0, Complex64::new(0.0, 0.0));
    for (l, r) in left.iter().zip(right.iter()) {
        if r.norm() > best {
            best = r.norm();
            r0 = l / r;
        }
    }
    let spread = left
        .iter()
        .zip(right.iter())
        .filter(|(_, r)| r.norm() > floor * max)
        .map(|(l, r)| (l / r - r0).norm() / r0.norm())
        .fold(0.0, f64::max);
    (r0, spread)
}

/// Eigenvalues of an operator that conserves the chain weight, computed
/// block by block.
pub fn chain_eigenvalues(m: &Mat, sites: usize) -> Vec<Complex64> {
    let w = chain_weights(sites);
    let mut out = Vec::with_capacity(m.nrows());
    for target in (-(sites as i32)..=sites as i32).step_by(2) {
        let idx: Vec<usize> = (0..w.len()).filter(|&i| w[i] == target).collect();
        let block = Mat::from_fn(idx.len(), idx.len(), |r, c| m[(idx[r], idx[c])]);
        let (_, t) = Schur::new(block).unpack();
        out.extend(t.diagonal().iter().copied());
    }
    out
}

/// Largest distance between greedily matched eigenvalues, relative to the
/// largest modulus.
pub fn eigenvalue_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    let mut a = a.to_vec();
    a.sort_by(|x, y| y.norm().total_cmp(&x.norm()));
    let mut used = vec![false; b.len()];
    let scale = a.iter().chain(b).map(|v| v.norm()).fold(0.0, f64::max);
    let mut worst = 0.0f64;
    for x in &a {
        let best = (0..b.len()).filter(|&j| !used[j]).min_by(|&i, &j| (b[i] - x).norm().total_cmp(&(b[j] - x).norm()));
        match best {
            Some(j) => {
                used[j] = true;
                worst = worst.max((b[j] - x).norm());
            }
            None => return f64::INFINITY,
        }
    }
    if scale == 0.0 { 0.0 } else { worst / scale }
}

/// `||[a, b]|| / (||a|| ||b||)`.
pub fn commutator_norm(a: &Mat, b: &Mat) -> f64 {
    (a * b - b * a).norm() / (a.norm() * b.norm())
}

/// Least-squares fit `t ~ alpha u + beta v`; returns the coefficients, the
/// relative residual, and the relative residual of the best one-term fit by `u`.
pub fn bgg_fit(t: &Mat, u: &Mat, v: &Mat) -> (Complex64, Complex64, f64, f64) {
    let n = t.len();
    let a = Mat::from_fn(n, 2, |r, c| if c == 0 { u[r] } else { v[r] });
    let rhs = DVector::from_iterator(n, t.iter().copied());
    let sol = a.clone().svd(true, true).solve(&rhs, 1e-300).expect("svd solve");
    let res = (&a * &sol - &rhs).norm() / rhs.norm();
    let uu = DVector::from_iterator(n, u.iter().copied());
    let one = uu.dotc(&rhs) / uu.dotc(&uu);
    let res1 = (&uu * one - &rhs).norm() / rhs.norm();
    (sol[0], sol[1], res, res1)
}

/// Largest relative entrywise change of an intertwiner between two cutoffs,
/// over entries whose auxiliary levels lie at least two below the smaller cutoff.
pub fn cutoff_difference(small: &SolvedAux, large: &SolvedAux) -> f64 {
    let (xs, xl) = (&small.intertwiner, &large.intertwiner);
    let qd = xs.quantum_dim;
    let top = xs.aux_dim.saturating_sub(3);
    let n = (top + 1) * qd;
    let mut worst = 0.0f64;
    for r in 0..n {
        for c in 0..n {
            let (a, b) = (xs.matrix[(r, c)], xl.matrix[(r, c)]);
            if b.norm() > 0.0 {
                worst = worst.max((a - b).norm() / b.norm());
            } else if a.norm() > 0.0 {
                worst = f64::INFINITY;
            }
        }
    }
    worst
}

/// Auxiliary modules solved at one spectral parameter.
struct ZetaRun {
    seed: u64,
    zeta: Complex64,
    verma: SolvedAux,
    q1: SolvedAux,
    q2: SolvedAux,
    q2_shifted: SolvedAux,
    log_z1: Complex64,
    log_z2: Complex64,
}

fn solve_zeta(params: &NumericParams, seed: u64, zeta: Complex64) -> Result<ZetaRun> {
    let mu = params.mu();
    let (c1, c2) = q_shifts(mu);
    let log_z1 = shifted_log(params, zeta, c1);
    let log_z2 = shifted_log(params, zeta, c2);
    // negative control: second parameter off by one unit of q^{2/s}
    let log_z2_bad = shifted_log(params, zeta, c2 + 2.0);
    Ok(ZetaRun {
        seed,
        zeta,
        verma: verma_aux(params, mu, zeta, params.verma_cutoff)?,
        q1: oscillator_aux(params, 1, log_z1.exp(), params.fock_cutoff)?,
        q2: oscillator_aux(params, 2, log_z2.exp(), params.fock_cutoff)?,
        q2_shifted: oscillator_aux(params, 2, log_z2_bad.exp(), params.fock_cutoff)?,
        log_z1,
        log_z2,
    })
}

fn max(v: impl Iterator<Item = f64>) -> f64 {
    v.fold(0.0, f64::max)
}

fn min(v: impl Iterator<Item = f64>) -> f64 {
    v.fold(f64::INFINITY, f64::min)
}

fn threshold(name: &str, value: f64, tol: f64, below: bool) -> VerificationReport {
    let mut r = VerificationReport::new(name).param("tolerance", tol).metric("value", value);
    let ok = if below { value < tol } else { value > tol };
    if !ok {
        r.fail(format!("{name}: {value:e} vs {tol:e}"));
    }
    r
}

/// Factorization of `C T~` against `R_1 Q_1 R_2 Q_2` at one spectral
/// parameter and site count.
struct Sample {
    run: usize,
    sites: usize,
    ratio: Complex64,
    spread: f64,
    eigen: f64,
    control_spread: f64,
    operators: Vec<ChainOperator>,
}

fn factorization_sample(params: &NumericParams, runs: &[ZetaRun], k: usize, sites: usize) -> Sample {
    let run = &runs[k];
    let t = run.verma.operator(sites, params);
    let q1 = run.q1.operator(sites, params);
    let q2 = run.q2.operator(sites, params);
    let q2_bad = run.q2_shifted.operator(sites, params);
    let (c, r1, r2) = diagonal_factors(params, sites, run.log_z1, run.log_z2);
    let left = scale_rows(&c, &t.matrix);
    let right = scale_rows(&r1, &q1.matrix) * scale_rows(&r2, &q2.matrix);
    let floor = params.tolerances.ratio_floor;
    let (ratio, spread) = ratio_spread(&left, &right, floor);
    let bad = scale_rows(&r1, &q1.matrix) * scale_rows(&r2, &q2_bad.matrix);
    let (_, bad_spread) = ratio_spread(&left, &bad, floor);
    let eig = eigenvalue_distance(&chain_eigenvalues(&(left / ratio), sites), &chain_eigenvalues(&right, sites));
    Sample { run: k, sites, ratio, spread, eigen: eig, control_spread: bad_spread, operators: vec![t, q1, q2] }
}

/// Runs the numeric suite over every site count up to `params.sites` and
/// the spectral parameters drawn from each seed.
pub fn run_numeric_check(params: &NumericParams, seeds: &[u64]) -> Result<VerificationReport> {
    params.validate()?;
    let tol = &params.tolerances;
    let jobs: Vec<(u64, Complex64)> =
        seeds.iter().flat_map(|&s| params.spectral_parameters(s).into_iter().map(move |z| (s, z))).collect();
    let runs: Vec<ZetaRun> = jobs.par_iter().map(|&(s, z)| solve_zeta(params, s, z)).collect::<Result<_>>()?;

    let mut report = VerificationReport::new("numeric-factorization")
        .param("sites", params.sites)
        .param("fock_cutoff", params.fock_cutoff)
        .param("verma_cutoff", params.verma_cutoff)
        .param("seeds", seeds)
        .param("hbar", params.hbar)
        .param("twist", params.twist)
        .param("twist_scale", params.twist_scale)
        .param("mu", params.mu)
        .param("grading", [params.s0, params.s1]);

    let solved: Vec<&SolvedAux> = runs.iter().flat_map(|r| [&r.verma, &r.q1, &r.q2, &r.q2_shifted]).collect();
    let relation = max(solved.iter().map(|a| a.rep.relation_residual()));
    let spin = crate::rep::Representation::spin(params.hbar()).relation_residual();
    report.push_subcheck(threshold("relations", relation.max(spin), tol.relation, true));
    report.push_subcheck(threshold("intertwiner-residual", max(solved.iter().map(|a| a.intertwiner.residual)), tol.intertwiner, true));
    // a one-dimensional solution space shows as a gap above the null vector
    report.push_subcheck(threshold("intertwiner-gap", min(solved.iter().map(|a| a.intertwiner.sigma_next)), 1e-8, false));

    let runs_ref = &runs;
    let samples: Vec<Sample> = (0..runs.len())
        .into_par_iter()
        .flat_map(|k| (1..=params.sites).into_par_iter().map(move |n| factorization_sample(params, runs_ref, k, n)))
        .collect();
    for s in &samples {
        let run = &runs[s.run];
        report.details.push(json!({
            "seed": run.seed,
            "zeta": [run.zeta.re, run.zeta.im],
            "sites": s.sites,
            "ratio": [s.ratio.re, s.ratio.im],
            "spread": s.spread,
            "eigenvalue_distance": s.eigen,
            "negative_control_spread": s.control_spread,
        }));
    }
    let leak = max(samples.iter().flat_map(|s| s.operators.iter().map(|o| o.weight_leak())));
    report.push_subcheck(threshold("weight-conservation", leak, tol.relation, true));
    let tail = max(samples.iter().flat_map(|s| s.operators.iter().map(|o| o.tail)));
    report.push_subcheck(threshold("trace-tail", tail, 1e-12, true));
    report.push_subcheck(threshold("factorization-spread", max(samples.iter().map(|s| s.spread)), tol.factorization, true));
    report.push_subcheck(threshold("eigenvalue-matching", max(samples.iter().map(|s| s.eigen)), tol.eigenvalue, true));
    report.push_subcheck(threshold("negative-control", min(samples.iter().map(|s| s.control_spread)), 1e-3, false));

    // commutators at the full site count, between neighbouring spectral parameters
    let top: Vec<&Vec<ChainOperator>> =
        samples.iter().filter(|s| s.sites == params.sites).map(|s| &s.operators).collect();
    let mut comm = 0.0f64;
    for k in 0..top.len() {
        let (a, b) = (top[k], top[(k + 1) % top.len()]);
        for x in a {
            for y in b {
                comm = comm.max(commutator_norm(&x.matrix, &y.matrix));
            }
        }
    }
    report.push_subcheck(threshold("commutators", comm, tol.commutator, true));

    report.push_subcheck(bgg_check(params, runs[0].zeta)?);
    report.push_subcheck(cutoff_check(params, runs[0].zeta)?);

    report.set_metric("samples", samples.len());
    for sub in &report.subchecks.clone() {
        if let Some(v) = sub.metrics.get("value") {
            report.metrics.insert(sub.check.clone(), v.clone());
        }
    }
    Ok(report)
}

/// `T^mu = alpha T~^mu + beta T~^{w.mu}` for `mu1 - mu2 = k`, `k = 1, 2`,
/// with `w.mu = (mu2 - 1, mu1 + 1)`.
pub fn bgg_check(params: &NumericParams, zeta: Complex64) -> Result<VerificationReport> {
    let (m1, m2) = params.mu();
    let sum = m1 + m2;
    let mut worst = 0.0f64;
    let mut single = f64::INFINITY;
    let mut details = Vec::new();
    for k in 1..=2usize {
        let mu = ((sum + k as f64) / 2.0, (sum - k as f64) / 2.0);
        let reflected = (mu.1 - 1.0, mu.0 + 1.0);
        let fin = finite_aux(params, k, sum, zeta)?.operator(params.sites, params);
        let u = verma_aux(params, mu, zeta, params.verma_cutoff)?.operator(params.sites, params);
        let v = verma_aux(params, reflected, zeta, params.verma_cutoff)?.operator(params.sites, params);
        let (a, b, res, res1) = bgg_fit(&fin.matrix, &u.matrix, &v.matrix);
        worst = worst.max(res);
        single = single.min(res1);
        details.push(json!({"k": k, "alpha": [a.re, a.im], "beta": [b.re, b.im], "residual": res, "one_term_residual": res1}));
    }
    let mut r = threshold("bgg", worst, params.tolerances.bgg, true);
    r.details = details;
    r.set_metric("one_term_residual", single);
    if single < 1e-4 {
        r.fail("finite trace is fitted by the Verma trace alone");
    }
    Ok(r)
}

/// Intertwiners and traces at the configured cutoffs against cutoffs five higher.
pub fn cutoff_check(params: &NumericParams, zeta: Complex64) -> Result<VerificationReport> {
    let mu = params.mu();
    let (c1, c2) = q_shifts(mu);
    let (dv, df) = (params.verma_cutoff, params.fock_cutoff);
    let pairs = [
        (verma_aux(params, mu, zeta, dv)?, verma_aux(params, mu, zeta, dv + 5)?),
        (
            oscillator_aux(params, 1, shifted_log(params, zeta, c1).exp(), df)?,
            oscillator_aux(params, 1, shifted_log(params, zeta, c1).exp(), df + 5)?,
        ),
        (
            oscillator_aux(params, 2, shifted_log(params, zeta, c2).exp(), df)?,
            oscillator_aux(params, 2, shifted_log(params, zeta, c2).exp(), df + 5)?,
        ),
    ];
    let entry = max(pairs.iter().map(|(a, b)| cutoff_difference(a, b)));
    let trace = max(pairs.iter().map(|(a, b)| {
        let (x, y) = (a.operator(params.sites, params).matrix, b.operator(params.sites, params).matrix);
        (x - &y).norm() / y.norm()
    }));
    let mut r = threshold("cutoff-stability", entry.max(trace), params.tolerances.cutoff, true);
    r.set_metric("intertwiner_entries", entry);
    r.set_metric("trace", trace);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_spread_of_scaled_matrix() {
        let a = Mat::from_fn(3, 3, |r, c| Complex64::new(r as f64 + 1.0, c as f64));
        let b = &a * Complex64::new(0.5, 2.0);
        let (r, s) = ratio_spread(&b, &a, 1e-6);
        assert!((r - Complex64::new(0.5, 2.0)).norm() < 1e-14);
        assert!(s < 1e-14);
        let mut c = b.clone();
        c[(1, 1)] *= 1.1;
        assert!(ratio_spread(&c, &a, 1e-6).1 > 0.09);
    }

    #[test]
    fn eigenvalue_matching_is_a_bijection() {
        let a = [Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0)];
        let b = [Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0), Complex64::new(2.0, 0.0)];
        assert!(eigenvalue_distance(&a, &b) > 0.4);
        assert!(eigenvalue_distance(&a, &a) == 0.0);
    }

    #[test]
    fn block_eigenvalues_match_direct() {
        let sites = 2;
        let w = chain_weights(sites);
        let m = Mat::from_fn(4, 4, |r, c| if w[r] == w[c] { Complex64::new((r * 3 + c) as f64, r as f64) } else { 0.0.into() });
        let mut got = chain_eigenvalues(&m, sites);
        let mut want: Vec<Complex64> = Schur::new(m).unpack().1.diagonal().iter().copied().collect();
        let key = |v: &Complex64| (v.re * 1e6).round() as i64 * 1_000_000_000 + (v.im * 1e6).round() as i64;
        got.sort_by_key(key);
        want.sort_by_key(key);
        for (x, y) in got.iter().zip(&want) {
            assert!((x - y).norm() < 1e-10);
        }
    }

    #[test]
    fn bgg_fit_recovers_coefficients() {
        let u = Mat::from_fn(3, 3, |r, c| Complex64::new((r + 2 * c) as f64, 1.0));
        let v = Mat::from_fn(3, 3, |r, c| Complex64::new(((r * c) % 3) as f64, -(r as f64)));
        let t = &u * Complex64::new(2.0, 1.0) + &v * Complex64::new(-0.5, 0.0);
        let (a, b, res, res1) = bgg_fit(&t, &u, &v);
        assert!((a - Complex64::new(2.0, 1.0)).norm() < 1e-12);
        assert!((b + 0.5).norm() < 1e-12);
        assert!(res < 1e-14 && res1 > 1e-2);
    }
}
