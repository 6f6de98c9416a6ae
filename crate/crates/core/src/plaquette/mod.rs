//! The plaquette operator, its phased F-move diagonalization and the
//! compressed single-register operator left after the F-sequence.

mod compressed;
mod moves;
mod verify;

pub use compressed::{box_triple_prime, fhi_check, fhi_deviation, g_move, GMove};
pub use moves::{phased_f_element, FMove};
pub use verify::{verify_f_sequence, FSequenceReport, SectorCheck, VERIFY_GUARD};
pub(crate) use verify::external_sector;

use crate::error::{Error, Result};
use crate::lattice::{LinkAssignment, Register};
use crate::linalg::{self, CMatrix, RMatrix};
use crate::qalgebra::f_symbol;
use crate::spin::{Spin, Truncation};

/// Largest `k` for which the full `d^8 x d^8` matrix is assembled densely.
pub const DENSE_GUARD: u32 = 1;

/// Largest `k` for which sector blocks are assembled.
pub const BLOCK_GUARD: u32 = 4;

/// Dense complex operator over a product of registers (row-major, first
/// register most significant).
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    dims: Vec<usize>,
    data: CMatrix,
}

impl OperatorMatrix {
    pub fn new(dims: Vec<usize>, data: CMatrix) -> Self {
        let n: usize = dims.iter().product();
        assert!(data.nrows() == n && data.ncols() == n, "operator shape does not match registers");
        Self { dims, data }
    }

    /// Construct and verify Hermiticity to `1e-10`.
    pub fn hermitian(dims: Vec<usize>, data: CMatrix, what: &str) -> Result<Self> {
        let deviation = linalg::hermiticity_deviation(&data);
        if deviation > 1e-10 {
            return Err(Error::NotHermitian { what: what.to_string(), deviation });
        }
        Ok(Self::new(dims, data))
    }

    /// Construct and verify unitarity to `1e-10`.
    pub fn unitary(dims: Vec<usize>, data: CMatrix, what: &str) -> Result<Self> {
        linalg::check_unitary(&data, what, 1e-10)?;
        Ok(Self::new(dims, data))
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.data
    }

    pub fn into_matrix(self) -> CMatrix {
        self.data
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }
}

/// Trotter parameters; `tau = t / (g^2 N_T)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvolutionParams {
    pub tau: f64,
    pub g_squared: f64,
    pub n_trotter: u32,
}

impl EvolutionParams {
    /// One Trotter step with the given angle.
    pub fn with_tau(tau: f64) -> Self {
        assert!(tau.is_finite(), "Trotter angle must be finite");
        Self { tau, g_squared: 1.0, n_trotter: 1 }
    }

    pub fn from_time(t: f64, g_squared: f64, n_trotter: u32) -> Self {
        assert!(g_squared > 0.0 && n_trotter >= 1 && t.is_finite());
        Self { tau: t / (g_squared * n_trotter as f64), g_squared, n_trotter }
    }
}

/// Matrix element `<bra| plaquette |ket>`; zero unless the external links
/// agree.
pub fn plaquette_element(bra: &LinkAssignment, ket: &LinkAssignment, trunc: Truncation) -> f64 {
    use Register::*;
    if !bra.same_external(ket) {
        return 0.0;
    }
    let delta = |r: Register| bra.get(r).two_j() as i64 - ket.get(r).two_j() as i64;
    if Register::ACTIVE.iter().any(|&r| delta(r).abs() != 1) {
        return 0.0;
    }
    let two_phase = -delta(JaT) - delta(JaB) + delta(Ql) + delta(Qr);
    assert!(two_phase % 2 == 0, "plaquette phase exponent must be an integer");
    let h = Spin::HALF;
    let (u, p) = (|r: Register| ket.get(r), |r: Register| bra.get(r));
    let f = f_symbol::<f64>(u(JlT), u(JaT), u(Ql), h, p(Ql), p(JaT), trunc)
        * f_symbol::<f64>(u(JlB), u(Ql), u(JaB), h, p(JaB), p(Ql), trunc)
        * f_symbol::<f64>(u(JrT), u(Qr), u(JaT), h, p(JaT), p(Qr), trunc)
        * f_symbol::<f64>(u(JrB), u(JaB), u(Qr), h, p(Qr), p(JaB), trunc);
    if (two_phase / 2) % 2 == 0 {
        f
    } else {
        -f
    }
}

/// Nonzero entries `(row, col, value)` of the full operator, row-major.
pub fn plaquette_sparse(trunc: Truncation) -> Vec<(usize, usize, f64)> {
    let d = trunc.d();
    let n = d.pow(8);
    let mut out = Vec::new();
    for col in 0..n {
        let ket = LinkAssignment::from_basis_index(col, trunc);
        for_each_neighbour(&ket, trunc, |bra| {
            let v = plaquette_element(&bra, &ket, trunc);
            if v != 0.0 {
                out.push((bra.basis_index(trunc), col, v));
            }
        });
    }
    out.sort_by_key(|&(r, c, _)| (r, c));
    out
}

/// Dense `d^8 x d^8` operator, verified Hermitian.
pub fn plaquette_matrix(trunc: Truncation) -> Result<OperatorMatrix> {
    if trunc.k() > DENSE_GUARD {
        return Err(Error::TruncationTooLarge { k: trunc.k(), max: DENSE_GUARD, what: "dense plaquette matrix" });
    }
    let n = trunc.d().pow(8);
    let mut m = CMatrix::zeros(n, n);
    for (r, c, v) in plaquette_sparse(trunc) {
        m[(r, c)] = v.into();
    }
    OperatorMatrix::hermitian(vec![trunc.d(); 8], m, "plaquette operator")
}

/// The block of the plaquette operator in one external-link sector, over the
/// active registers `[q_l, j_a^t, j_a^b, q_r]` (row-major). The operator is
/// block diagonal over these sectors.
pub fn plaquette_block(trunc: Truncation, external: [Spin; 4]) -> Result<RMatrix> {
    if trunc.k() > BLOCK_GUARD {
        return Err(Error::TruncationTooLarge { k: trunc.k(), max: BLOCK_GUARD, what: "plaquette sector block" });
    }
    let d = trunc.d();
    let n = d.pow(4);
    let mut m = RMatrix::zeros(n, n);
    for col in 0..n {
        let ket = embed_active(col, external, trunc);
        for_each_neighbour(&ket, trunc, |bra| {
            let v = plaquette_element(&bra, &ket, trunc);
            if v != 0.0 {
                m[(active_index(&bra, trunc), col)] = v;
            }
        });
    }
    let deviation = (&m - m.transpose()).amax();
    if deviation > 1e-10 {
        return Err(Error::NotHermitian { what: format!("plaquette block {:?}", external), deviation });
    }
    Ok(m)
}

/// External links in the order `[j_l^t, j_l^b, j_r^t, j_r^b]`.
pub fn external_of(a: &LinkAssignment) -> [Spin; 4] {
    Register::EXTERNAL.map(|r| a.get(r))
}

/// Assignment with the given external links and active-register index.
pub fn embed_active(index: usize, external: [Spin; 4], trunc: Truncation) -> LinkAssignment {
    let d = trunc.d();
    let mut a = LinkAssignment::default();
    for (r, s) in Register::EXTERNAL.iter().zip(external) {
        a.set(*r, s);
    }
    let mut rest = index;
    for r in Register::ACTIVE.iter().rev() {
        a.set(*r, Spin::from_twice((rest % d) as u32));
        rest /= d;
    }
    a
}

/// Index of the active registers of `a` within its sector block.
pub fn active_index(a: &LinkAssignment, trunc: Truncation) -> usize {
    Register::ACTIVE.iter().fold(0, |acc, &r| acc * trunc.d() + a.get(r).level())
}

/// Visit every assignment reachable by changing each active link by +-1/2.
fn for_each_neighbour(ket: &LinkAssignment, trunc: Truncation, mut f: impl FnMut(LinkAssignment)) {
    for mask in 0..16u32 {
        let mut bra = *ket;
        let mut ok = true;
        for (bit, r) in Register::ACTIVE.iter().enumerate() {
            let t = ket.get(*r).two_j() as i64 + if mask >> bit & 1 == 1 { 1 } else { -1 };
            if t < 0 || t > trunc.k() as i64 {
                ok = false;
                break;
            }
            bra.set(*r, Spin::from_twice(t as u32));
        }
        if ok {
            f(bra);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_diagonal_vanishes() {
        for k in 1..4 {
            let z = LinkAssignment::default();
            assert_eq!(plaquette_element(&z, &z, Truncation::new(k)), 0.0);
        }
    }

    #[test]
    fn k0_is_zero() {
        let m = plaquette_matrix(Truncation::new(0)).unwrap();
        assert_eq!(m.dim(), 1);
        assert_eq!(m.matrix()[(0, 0)], crate::Complex::new(0.0, 0.0));
    }

    #[test]
    fn external_mismatch_vanishes() {
        let t = Truncation::new(2);
        let ket = LinkAssignment::from_twice([0, 0, 0, 0, 0, 0, 0, 0]);
        let bra = LinkAssignment::from_twice([1, 0, 1, 1, 1, 1, 0, 0]);
        assert_eq!(plaquette_element(&bra, &ket, t), 0.0);
    }

    #[test]
    fn block_index_round_trip() {
        let t = Truncation::new(2);
        let ext = [Spin::from_twice(1), Spin::ZERO, Spin::from_twice(2), Spin::HALF];
        for i in 0..81 {
            let a = embed_active(i, ext, t);
            assert_eq!(active_index(&a, t), i);
            assert_eq!(external_of(&a), ext);
        }
    }
}
