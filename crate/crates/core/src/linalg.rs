//! Dense linear-algebra helpers on top of nalgebra.

use std::cmp::Ordering;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::Complex;

pub type CMatrix = DMatrix<Complex>;
pub type RMatrix = DMatrix<f64>;

pub const ZERO: Complex = Complex::new(0.0, 0.0);
pub const ONE: Complex = Complex::new(1.0, 0.0);

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// `max |U^dagger U - I|`.
pub fn unitarity_deviation(u: &CMatrix) -> f64 {
    max_abs(&(u.adjoint() * u - identity(u.nrows())))
}

/// `max |H - H^dagger|`.
pub fn hermiticity_deviation(h: &CMatrix) -> f64 {
    max_abs(&(h - h.adjoint()))
}

pub fn check_unitary(u: &CMatrix, what: &str, tol: f64) -> Result<()> {
    let deviation = unitarity_deviation(u);
    if deviation > tol {
        return Err(Error::NotUnitary { what: what.to_string(), deviation });
    }
    Ok(())
}

/// Multiply an eigenvector by the phase that makes its largest-magnitude
/// component (first one on ties) real and positive.
pub fn fix_phase(v: &mut [Complex]) {
    let mut best = 0;
    for (i, z) in v.iter().enumerate() {
        if z.norm() > v[best].norm() + 1e-12 {
            best = i;
        }
    }
    let a = v[best];
    if a.norm() == 0.0 {
        return;
    }
    let ph = a.conj() / a.norm();
    for z in v.iter_mut() {
        *z *= ph;
    }
}

fn rounded_key(v: &[Complex]) -> Vec<(i64, i64)> {
    v.iter()
        .map(|z| ((z.re * 1e9).round() as i64, (z.im * 1e9).round() as i64))
        .collect()
}

/// Eigendecomposition of a Hermitian matrix: eigenvalues in descending
/// order, eigenvectors as columns with the phase convention of
/// [`fix_phase`]. Near-degenerate eigenvalues (1e-9) are ordered by the
/// rounded eigenvector entries so the output is deterministic.
pub fn hermitian_eigen(h: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = h.nrows();
    if n == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    let eig = SymmetricEigen::new(h.clone());
    let mut pairs: Vec<(f64, Vec<Complex>)> = (0..n)
        .map(|i| {
            let mut v: Vec<Complex> = eig.eigenvectors.column(i).iter().copied().collect();
            fix_phase(&mut v);
            (eig.eigenvalues[i], v)
        })
        .collect();
    pairs.sort_by(|a, b| {
        if (a.0 - b.0).abs() > 1e-9 {
            b.0.partial_cmp(&a.0).unwrap_or(Ordering::Equal)
        } else {
            rounded_key(&b.1).cmp(&rounded_key(&a.1))
        }
    });
    let values = pairs.iter().map(|p| p.0).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| pairs[c].1[r]);
    (values, vectors)
}

/// Diagonalize a unitary: returns eigenvalues `lambda` and a unitary `Q`
/// with `U = Q diag(lambda) Q^dagger`.
///
/// The Hermitian and anti-Hermitian parts of a normal matrix commute, so a
/// generic real combination of them shares the eigenbasis of `U`. The
/// result is verified and a different combination is tried if an
/// accidental degeneracy mixed distinct eigenvectors.
pub fn unitary_eigen(u: &CMatrix) -> Result<(Vec<Complex>, CMatrix)> {
    let n = u.nrows();
    let re = (u + u.adjoint()) * Complex::new(0.5, 0.0);
    let im = (u - u.adjoint()) * Complex::new(0.0, -0.5);
    for c in [0.577_215_664_901_532_9, 1.324_717_957_244_746, -2.236_067_977_499_79, 0.381_966_011_250_105_1] {
        let mix = &re + &im * Complex::new(c, 0.0);
        let (_, q) = hermitian_eigen(&mix);
        let d = q.adjoint() * u * &q;
        let off = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|(i, j)| i != j)
            .fold(0.0f64, |acc, (i, j)| acc.max(d[(i, j)].norm()));
        if off < 1e-11 {
            let lambda = (0..n).map(|i| d[(i, i)] / d[(i, i)].norm()).collect();
            return Ok((lambda, q));
        }
    }
    Err(Error::NotUnitary { what: "matrix passed to unitary_eigen".into(), deviation: unitarity_deviation(u) })
}

/// One two-level factor: the 2x2 block `u` acting on levels `(l0, l1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoLevel {
    pub l0: usize,
    pub l1: usize,
    pub u: [[Complex; 2]; 2],
}

impl TwoLevel {
    pub fn adjoint(&self) -> Self {
        let u = self.u;
        TwoLevel { l0: self.l0, l1: self.l1, u: [[u[0][0].conj(), u[1][0].conj()], [u[0][1].conj(), u[1][1].conj()]] }
    }
}

/// Factor a unitary into a diagonal followed by two-level rotations.
///
/// Returns `(phases, rotations)` such that applying `diag(phases)` first and
/// then the rotations in order reproduces `u`. At most `n(n-1)/2` rotations
/// are produced; entries already below `1e-14` are skipped.
pub fn two_level_decomposition(u: &CMatrix) -> (Vec<Complex>, Vec<TwoLevel>) {
    let n = u.nrows();
    let mut w = u.clone();
    let mut eliminations = Vec::new();
    for c in 0..n {
        for r in (c + 1..n).rev() {
            let beta = w[(r, c)];
            if beta.norm() < 1e-14 {
                continue;
            }
            let alpha = w[(c, c)];
            let norm = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
            let g = [[alpha.conj() / norm, beta.conj() / norm], [-beta / norm, alpha / norm]];
            for col in 0..n {
                let x = w[(c, col)];
                let y = w[(r, col)];
                w[(c, col)] = g[0][0] * x + g[0][1] * y;
                w[(r, col)] = g[1][0] * x + g[1][1] * y;
            }
            eliminations.push(TwoLevel { l0: c, l1: r, u: g });
        }
    }
    let phases = (0..n).map(|i| w[(i, i)]).collect();
    let rotations = eliminations.iter().rev().map(TwoLevel::adjoint).collect();
    (phases, rotations)
}

/// `exp(i tau H)` for a real symmetric `H`.
pub fn expm_i_symmetric(h: &RMatrix, tau: f64) -> CMatrix {
    let n = h.nrows();
    if n == 0 {
        return CMatrix::zeros(0, 0);
    }
    let eig = SymmetricEigen::new(h.clone());
    let q = eig.eigenvectors.map(Complex::from);
    let mut scaled = q.clone();
    for (i, mut col) in scaled.column_iter_mut().enumerate() {
        col *= Complex::from_polar(1.0, tau * eig.eigenvalues[i]);
    }
    scaled * q.transpose()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_unitary(n: usize) -> CMatrix {
        // exp(i H) for a fixed Hermitian H
        let h = CMatrix::from_fn(n, n, |r, c| {
            let x = (r * 7 + c * 3) as f64 * 0.1;
            if r == c {
                Complex::new(x, 0.0)
            } else if r < c {
                Complex::new(x.sin(), x.cos())
            } else {
                Complex::new(((c * 7 + r * 3) as f64 * 0.1).sin(), -((c * 7 + r * 3) as f64 * 0.1).cos())
            }
        });
        let (vals, vecs) = hermitian_eigen(&h);
        let d = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            n,
            vals.iter().map(|&l| Complex::from_polar(1.0, l)),
        ));
        &vecs * d * vecs.adjoint()
    }

    #[test]
    fn two_level_round_trip() {
        let u = sample_unitary(5);
        let (phases, rots) = two_level_decomposition(&u);
        let mut m = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(phases));
        for r in &rots {
            let mut g = identity(5);
            g[(r.l0, r.l0)] = r.u[0][0];
            g[(r.l0, r.l1)] = r.u[0][1];
            g[(r.l1, r.l0)] = r.u[1][0];
            g[(r.l1, r.l1)] = r.u[1][1];
            m = g * m;
        }
        assert!(max_abs(&(m - &u)) < 1e-12);
        assert!(rots.len() <= 10);
    }

    #[test]
    fn unitary_eigen_reconstructs() {
        let u = sample_unitary(6);
        let (lam, q) = unitary_eigen(&u).unwrap();
        let d = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(lam));
        assert!(max_abs(&(&q * d * q.adjoint() - &u)) < 1e-10);
        // degenerate spectrum
        let p = CMatrix::from_fn(3, 3, |r, c| if (r + 1) % 3 == c { ONE } else { ZERO });
        let p2 = &p * &p;
        let x = identity(3) + &p2 * Complex::new(0.0, 0.0);
        let (lam, q) = unitary_eigen(&x).unwrap();
        let d = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(lam));
        assert!(max_abs(&(&q * d * q.adjoint() - &x)) < 1e-12);
    }
}
