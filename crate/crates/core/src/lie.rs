//! Root data of `sl_{l+1}`: Cartan matrix, its inverse, positive roots in the
//! `epsilon` basis, the Weyl vector, and conversion of weights to simple-root
//! coordinates.

use num::{BigRational, One, Zero};

use crate::symbolic::{rat, ratio, AffineExponent, Weight};

/// Cartan matrix `a_ij = 2, -1, 0`.
pub fn cartan(l: usize) -> Vec<Vec<BigRational>> {
    (0..l)
        .map(|i| {
            (0..l)
                .map(|j| match i.abs_diff(j) {
                    0 => rat(2),
                    1 => rat(-1),
                    _ => BigRational::zero(),
                })
                .collect()
        })
        .collect()
}

/// Inverse Cartan matrix from the closed form `c_ij = i(l - j + 1)/(l + 1)`
/// for `i <= j` (1-based), extended symmetrically.
pub fn inverse_cartan(l: usize) -> Vec<Vec<BigRational>> {
    let n = l as i64;
    (1..=n)
        .map(|i| {
            (1..=n)
                .map(|j| {
                    let (a, b) = if i <= j { (i, j) } else { (j, i) };
                    ratio(a * (n - b + 1), n + 1)
                })
                .collect()
        })
        .collect()
}

/// Positive roots `epsilon_a - epsilon_b`, `a < b`, as vectors of length `l + 1`.
pub fn positive_roots(l: usize) -> Vec<Vec<BigRational>> {
    let mut out = Vec::new();
    for a in 0..=l {
        for b in a + 1..=l {
            let mut v = vec![BigRational::zero(); l + 1];
            v[a] = BigRational::one();
            v[b] = -BigRational::one();
            out.push(v);
        }
    }
    out
}

/// Half the sum of the positive roots, in the `epsilon` basis.
pub fn rho(l: usize) -> Vec<BigRational> {
    let mut acc = vec![BigRational::zero(); l + 1];
    for r in positive_roots(l) {
        for (x, y) in acc.iter_mut().zip(r) {
            *x += y;
        }
    }
    acc.into_iter().map(|x| x / rat(2)).collect()
}

/// Coordinates of a weight over the simple roots: `lambda = sum_j k_j alpha_j`
/// with `k_j = sum_i <lambda, alpha_i^vee> c_ij`.
pub fn root_coordinates(w: &Weight) -> Vec<AffineExponent> {
    let c = inverse_cartan(w.rank());
    (0..w.rank())
        .map(|j| {
            w.coeffs()
                .iter()
                .enumerate()
                .fold(AffineExponent::zero(), |acc, (i, x)| acc + x.scale(&c[i][j]))
        })
        .collect()
}

/// Fundamental-weight coordinates of the projection of `epsilon_a` (1-based)
/// onto the traceless part: `omega_a - omega_{a-1}`.
pub fn epsilon_projection(l: usize, a: usize) -> Weight {
    let mut v = vec![0i64; l];
    if a <= l {
        v[a - 1] += 1;
    }
    if a >= 2 {
        v[a - 2] -= 1;
    }
    Weight::from_ints(&v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matmul(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
        let n = a.len();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).fold(BigRational::zero(), |s, k| s + &a[i][k] * &b[k][j]))
                    .collect()
            })
            .collect()
    }

    #[test]
    fn inverse_cartan_is_inverse() {
        for l in 1..=4 {
            let p = matmul(&cartan(l), &inverse_cartan(l));
            for (i, row) in p.iter().enumerate() {
                for (j, x) in row.iter().enumerate() {
                    assert_eq!(*x, if i == j { rat(1) } else { rat(0) });
                }
            }
        }
        assert_eq!(inverse_cartan(1), vec![vec![ratio(1, 2)]]);
        assert_eq!(
            inverse_cartan(2),
            vec![vec![ratio(2, 3), ratio(1, 3)], vec![ratio(1, 3), ratio(2, 3)]]
        );
    }

    #[test]
    fn weyl_vector() {
        assert_eq!(rho(1), vec![ratio(1, 2), ratio(-1, 2)]);
        assert_eq!(rho(2), vec![rat(1), rat(0), rat(-1)]);
        assert_eq!(positive_roots(2).len(), 3);
    }

    #[test]
    fn simple_roots_have_unit_coordinates() {
        // alpha_1 = 2 w1 - w2, alpha_2 = -w1 + 2 w2
        let a1 = Weight::from_ints(&[2, -1]);
        let k = root_coordinates(&a1);
        assert_eq!(k, vec![AffineExponent::int(1), AffineExponent::int(0)]);
        let a = Weight::from_ints(&[2]);
        assert_eq!(root_coordinates(&a), vec![AffineExponent::int(1)]);
    }

    #[test]
    fn epsilon_projections_sum_to_zero() {
        for l in 1..=3 {
            let total = (1..=l + 1).fold(Weight::zero(l), |acc, a| &acc + &epsilon_projection(l, a));
            assert!(total.is_zero());
        }
    }
}
