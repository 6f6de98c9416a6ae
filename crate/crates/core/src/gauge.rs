//! Counting the gauge-invariant Hilbert space of the plaquette section.
//!
//! The four active links form a closed loop of four vertices, each with one
//! external link. Summing over the external links leaves a transfer matrix
//! `A[l1][l2]` (number of admissible external spins at a vertex joining
//! active links `l1`, `l2`), and the physical dimension is `Tr[A^4]`.

use std::fmt::{Debug, Display};
use std::ops::{Div, Rem};

use num_traits::{CheckedAdd, CheckedMul, FromPrimitive, One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::LinkAssignment;
use crate::spin::{SpinTriple, Truncation};

/// Exact unsigned integer usable for dimension counting. Implemented for
/// the primitive unsigned types and for arbitrary-precision integers.
pub trait ExactCount:
    Clone
    + PartialEq
    + Debug
    + Display
    + Zero
    + One
    + CheckedAdd
    + CheckedMul
    + Rem<Output = Self>
    + Div<Output = Self>
    + FromPrimitive
    + ToPrimitive
{
}

impl<T> ExactCount for T where
    T: Clone
        + PartialEq
        + Debug
        + Display
        + Zero
        + One
        + CheckedAdd
        + CheckedMul
        + Rem<Output = T>
        + Div<Output = T>
        + FromPrimitive
        + ToPrimitive
{
}

/// Largest `k` accepted by [`enumerate_physical`].
pub const ENUMERATION_GUARD: u32 = 6;

/// Vertex transfer matrix over doubled active-link spins.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjacencyMatrix {
    k: u32,
    deformed: bool,
    entries: Vec<u64>,
}

impl AdjacencyMatrix {
    pub fn dim(&self) -> usize {
        self.k as usize + 1
    }

    pub fn deformed(&self) -> bool {
        self.deformed
    }

    pub fn get(&self, l1: usize, l2: usize) -> u64 {
        self.entries[l1 * self.dim() + l2]
    }

    pub fn row(&self, l: usize) -> &[u64] {
        let d = self.dim();
        &self.entries[l * d..(l + 1) * d]
    }

    pub fn is_symmetric(&self) -> bool {
        let d = self.dim();
        (0..d).all(|i| (0..d).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// `A[l1][l2] = A[k-l2][k-l1]`.
    pub fn is_persymmetric(&self) -> bool {
        let d = self.dim();
        let k = d - 1;
        (0..d).all(|i| (0..d).all(|j| self.get(i, j) == self.get(k - j, k - i)))
    }
}

/// Transfer matrix of the non-deformed (`deformed = false`) or deformed
/// theory.
pub fn adjacency(trunc: Truncation, deformed: bool) -> AdjacencyMatrix {
    let k = trunc.k() as i64;
    let d = trunc.d();
    let mut entries = Vec::with_capacity(d * d);
    for l1 in 0..d as i64 {
        for l2 in 0..d as i64 {
            let s = l1 + l2;
            let top = if deformed { s.min(2 * k - s) } else { s.min(k - (s + k) % 2) };
            let n = (top - (l1 - l2).abs()) / 2 + 1;
            assert!(n >= 1, "transfer matrix entry must count at least one irrep");
            entries.push(n as u64);
        }
    }
    AdjacencyMatrix { k: trunc.k(), deformed, entries }
}

/// Deformed transfer matrix rebuilt as `sum_l |l><l|` over centered blocks
/// of `l` ones whose length has the parity of `k + 1`.
pub fn rank_one_reconstruction(trunc: Truncation) -> AdjacencyMatrix {
    let d = trunc.d();
    let mut entries = vec![0u64; d * d];
    for len in (1..=d).filter(|l| l % 2 == d % 2) {
        let start = (d - len) / 2;
        for i in start..start + len {
            for j in start..start + len {
                entries[i * d + j] += 1;
            }
        }
    }
    AdjacencyMatrix { k: trunc.k(), deformed: true, entries }
}

/// `Tr[A^4]` in exact arithmetic; overflow of `T` is reported.
pub fn phys_dim<T: ExactCount>(trunc: Truncation, deformed: bool) -> Result<T> {
    trace_fourth_power(&adjacency(trunc, deformed))
}

pub fn trace_fourth_power<T: ExactCount>(a: &AdjacencyMatrix) -> Result<T> {
    let d = a.dim();
    let max = a.entries.iter().copied().max().unwrap_or(0);
    // A is symmetric, so Tr[A^4] = sum_ij (A^2)_ij^2. The squared matrix is
    // formed in u64 when its entries provably fit.
    let fits = max
        .checked_mul(max)
        .and_then(|m| m.checked_mul(d as u64))
        .is_some();
    let overflow = || Error::Overflow("Tr[A^4]");
    let mut total = T::zero();
    if fits {
        for i in 0..d {
            let ri = a.row(i);
            for j in i..d {
                let s: u64 = ri.iter().zip(a.row(j)).map(|(x, y)| x * y).sum();
                let s = T::from_u64(s).ok_or_else(overflow)?;
                let mut sq = s.checked_mul(&s).ok_or_else(overflow)?;
                if i != j {
                    sq = sq.checked_add(&sq).ok_or_else(overflow)?;
                }
                total = total.checked_add(&sq).ok_or_else(overflow)?;
            }
        }
        return Ok(total);
    }
    let conv = |x: u64| T::from_u64(x).ok_or_else(overflow);
    for i in 0..d {
        for j in i..d {
            let mut s = T::zero();
            for l in 0..d {
                let p = conv(a.get(i, l))?.checked_mul(&conv(a.get(l, j))?).ok_or_else(overflow)?;
                s = s.checked_add(&p).ok_or_else(overflow)?;
            }
            let mut sq = s.checked_mul(&s).ok_or_else(overflow)?;
            if i != j {
                sq = sq.checked_add(&sq).ok_or_else(overflow)?;
            }
            total = total.checked_add(&sq).ok_or_else(overflow)?;
        }
    }
    Ok(total)
}

/// Polynomial closed form of the deformed physical dimension.
pub fn phys_dim_closed_form<T: ExactCount>(trunc: Truncation) -> Result<T> {
    const COEFFS: [u64; 9] = [0, 1152, 2048, 2464, 2128, 1288, 532, 136, 17];
    let overflow = || Error::Overflow("closed-form dimension");
    let lift = |x: u64| T::from_u64(x).ok_or_else(overflow);
    let d = lift(trunc.d() as u64)?;
    let mut acc = T::zero();
    for &c in COEFFS.iter().rev() {
        acc = acc.checked_mul(&d).ok_or_else(overflow)?.checked_add(&lift(c)?).ok_or_else(overflow)?;
    }
    if trunc.k().is_multiple_of(2) {
        acc = acc.checked_add(&lift(315)?).ok_or_else(overflow)?;
    }
    let denom = lift(10080)?;
    let rem = acc.clone() % denom.clone();
    if !rem.is_zero() {
        return Err(Error::NonIntegral { k: trunc.k(), remainder: rem.to_string() });
    }
    Ok(acc / denom)
}

/// Fraction of the non-deformed physical space kept by the fusion rule.
pub fn retention_ratio(trunc: Truncation) -> Result<f64> {
    let q: u128 = phys_dim(trunc, true)?;
    let nq: u128 = phys_dim(trunc, false)?;
    Ok(q as f64 / nq as f64)
}

/// All physical link assignments in lexicographic order of the doubled
/// 8-tuple (register order).
pub fn enumerate_physical(trunc: Truncation, deformed: bool) -> Result<Vec<LinkAssignment>> {
    if trunc.k() > ENUMERATION_GUARD {
        return Err(Error::TruncationTooLarge {
            k: trunc.k(),
            max: ENUMERATION_GUARD,
            what: "brute-force enumeration",
        });
    }
    let k = trunc.k();
    let ok = |a: u32, b: u32, c: u32| {
        let t = SpinTriple::from_twice(a, b, c);
        if deformed {
            t.is_admissible(trunc)
        } else {
            t.is_singlet()
        }
    };
    let mut out = Vec::new();
    for jlt in 0..=k {
        for jlb in 0..=k {
            for ql in 0..=k {
                for jat in 0..=k {
                    if !ok(jlt, jat, ql) {
                        continue;
                    }
                    for jab in 0..=k {
                        if !ok(jlb, ql, jab) {
                            continue;
                        }
                        for qr in 0..=k {
                            for jrt in 0..=k {
                                if !ok(jrt, qr, jat) {
                                    continue;
                                }
                                for jrb in 0..=k {
                                    if ok(jrb, jab, qr) {
                                        out.push(LinkAssignment::from_twice([
                                            jlt, jlb, ql, jat, jab, qr, jrt, jrb,
                                        ]));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjacency_examples() {
        assert_eq!(adjacency(Truncation::new(3), false).get(3, 3), 2);
        assert_eq!(adjacency(Truncation::new(3), true).get(3, 3), 1);
        for deformed in [false, true] {
            let a = adjacency(Truncation::new(1), deformed);
            assert!((0..2).all(|i| (0..2).all(|j| a.get(i, j) == 1)));
        }
    }

    #[test]
    fn small_dimensions() {
        assert_eq!(phys_dim::<u128>(Truncation::new(0), true).unwrap(), 1);
        assert_eq!(phys_dim::<u128>(Truncation::new(1), true).unwrap(), 16);
        assert_eq!(phys_dim::<u128>(Truncation::new(2), true).unwrap(), 136);
        assert_eq!(phys_dim_closed_form::<u128>(Truncation::new(1)).unwrap(), 16);
        assert_eq!(phys_dim_closed_form::<u128>(Truncation::new(2)).unwrap(), 136);
    }

    #[test]
    fn narrow_integers_report_overflow() {
        assert!(matches!(phys_dim::<u8>(Truncation::new(3), false), Err(Error::Overflow(_))));
        assert!(matches!(phys_dim_closed_form::<u64>(Truncation::new(300)), Err(Error::Overflow(_))));
    }

    #[test]
    fn enumeration_guard() {
        assert!(enumerate_physical(Truncation::new(7), true).is_err());
        let one = enumerate_physical(Truncation::new(0), true).unwrap();
        assert_eq!(one, vec![LinkAssignment::default()]);
    }
}
