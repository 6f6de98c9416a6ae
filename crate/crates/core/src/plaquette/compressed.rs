use nalgebra::DMatrix;

use super::OperatorMatrix;
use crate::linalg::{self, CMatrix};
use crate::qalgebra::f_symbol;
use crate::spin::{i_pow, Spin, Truncation};
use crate::Complex;

/// Compressed plaquette operator on `j_a^b` in control sector `J = J_a^t`:
/// `<j'| op |j> = (-1)^(-(j'-j)) [j 1/2 j'; j' J j]`.
pub fn box_triple_prime(big_j: Spin, trunc: Truncation) -> OperatorMatrix {
    let d = trunc.d();
    let m = CMatrix::from_fn(d, d, |r, c| {
        let (jp, j) = (Spin::from_twice(r as u32), Spin::from_twice(c as u32));
        let f = f_symbol::<f64>(j, Spin::HALF, jp, jp, big_j, j, trunc);
        if f == 0.0 {
            return Complex::new(0.0, 0.0);
        }
        i_pow::<f64>(c as i64 - r as i64) * f
    });
    if !big_j.is_integer() {
        assert!(linalg::max_abs(&m) == 0.0, "half-integer control sectors must vanish");
    }
    OperatorMatrix::hermitian(vec![d], m, "compressed plaquette operator")
        .expect("compressed plaquette operator is Hermitian")
}

/// Diagonalizing move for one control sector.
#[derive(Clone, Debug)]
pub struct GMove {
    pub control: Spin,
    /// Levels of `j_a^b` on which the compressed operator acts.
    pub active: Vec<usize>,
    /// Eigenvalues in descending order; eigenvalue `i` lands on level
    /// `active[i]` after the move.
    pub spectrum: Vec<f64>,
    /// `d x d` unitary with `G op G^dagger` diagonal, identity off the
    /// active levels.
    pub g: OperatorMatrix,
}

impl GMove {
    /// Number of active levels.
    pub fn m(&self) -> usize {
        self.active.len()
    }

    /// Diagonal operator `G op G^dagger` on all `d` levels.
    pub fn diagonal(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.g.dim()];
        for (i, &l) in self.active.iter().enumerate() {
            out[l] = self.spectrum[i];
        }
        out
    }
}

/// Eigendecomposition of [`box_triple_prime`] in an integer control sector.
///
/// The active levels are `2j` in `J..=k-J`, so `m = k + 1 - 2J`.
pub fn g_move(big_j: Spin, trunc: Truncation) -> GMove {
    assert!(big_j.is_integer(), "G-moves exist only for integer control sectors");
    let d = trunc.d();
    let j = big_j.two_j() as usize / 2;
    let active: Vec<usize> = if 2 * j <= trunc.k() as usize { (j..=trunc.k() as usize - j).collect() } else { Vec::new() };
    let op = box_triple_prime(big_j, trunc);
    let m = active.len();
    let block = CMatrix::from_fn(m, m, |r, c| op.matrix()[(active[r], active[c])]);
    let (spectrum, vecs) = linalg::hermitian_eigen(&block);
    let mut g = linalg::identity(d);
    for i in 0..m {
        for (l, &lev) in active.iter().enumerate() {
            g[(active[i], lev)] = vecs[(l, i)].conj();
        }
    }
    let g = OperatorMatrix::unitary(vec![d], g, "G-move").expect("eigenvectors are orthonormal");
    GMove { control: big_j, active, spectrum, g }
}

/// Persymmetry of every integer control sector,
/// `op[r][c] == op[k-c][k-r]`, to `1e-12`.
pub fn fhi_check(trunc: Truncation) -> bool {
    fhi_deviation(trunc) < 1e-12
}

/// Largest persymmetry violation over all integer control sectors.
pub fn fhi_deviation(trunc: Truncation) -> f64 {
    let k = trunc.k() as usize;
    let mut worst = 0.0f64;
    for big_j in trunc.spins().filter(|s| s.is_integer()) {
        let op = box_triple_prime(big_j, trunc);
        let m: &DMatrix<Complex> = op.matrix();
        for r in 0..=k {
            for c in 0..=k {
                worst = worst.max((m[(r, c)] - m[(k - c, k - r)]).norm());
            }
        }
    }
    worst
}
