//! Circuit synthesis: control sectors, gauge-variant completion of the
//! phased F-moves, decomposition into GCX and two-level gates, and the
//! closed-form GCX resource counts.

mod emit;
mod gates;
mod gvc;

pub use emit::{
    active_level_histogram, decompose_antisym_diag, decompose_controlled, emit_parity_circuit_k1, emit_trotter_step,
    emit_trotter_step_with, Scheme,
};
pub use gates::{Gate, GateList, FORMAT_VERSION};
pub use gvc::{gvc_complete, GvcUnitary};

use std::fmt;

use crate::error::{Error, Result};
use crate::lattice::Register;
use crate::plaquette::FMove;
use crate::spin::{Spin, Truncation};

/// Which unitary a control sector belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SectorKind {
    F(FMove),
    G,
}

impl SectorKind {
    pub fn control_registers(self) -> &'static [Register] {
        match self {
            SectorKind::F(mv) => mv.controls(),
            SectorKind::G => &[Register::JaT],
        }
    }

    pub fn target(self) -> Register {
        match self {
            SectorKind::F(mv) => mv.target(),
            SectorKind::G => Register::JaB,
        }
    }

    pub fn num_controls(self) -> usize {
        self.control_registers().len()
    }
}

impl fmt::Display for SectorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SectorKind::F(mv) => write!(f, "{mv}"),
            SectorKind::G => f.write_str("G"),
        }
    }
}

/// A fixed assignment of the control registers of one move.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ControlSector {
    pub kind: SectorKind,
    /// Control spins in the order of [`SectorKind::control_registers`].
    pub controls: Vec<Spin>,
}

impl ControlSector {
    /// Build a sector, rejecting wrong arity, out-of-range spins and sectors
    /// without any physical source level.
    pub fn new(kind: SectorKind, controls: Vec<Spin>, trunc: Truncation) -> Result<Self> {
        if controls.len() != kind.num_controls() {
            return Err(Error::InvalidSector(format!("{kind} takes {} controls", kind.num_controls())));
        }
        for &s in &controls {
            trunc.check(s)?;
        }
        let sector = Self { kind, controls };
        if sector.source_levels(trunc).is_empty() {
            return Err(Error::InvalidSector(format!("{sector} has no physical source level")));
        }
        Ok(sector)
    }

    pub fn target(&self) -> Register {
        self.kind.target()
    }

    /// `(register, level)` pairs of the controls.
    pub fn control_pairs(&self) -> Vec<(Register, usize)> {
        self.kind.control_registers().iter().zip(&self.controls).map(|(&r, s)| (r, s.level())).collect()
    }

    /// Target levels carrying physical states before the move.
    pub fn source_levels(&self, trunc: Truncation) -> Vec<usize> {
        match self.kind {
            SectorKind::F(mv) => mv.source_levels(&self.controls, trunc).iter().map(|s| s.level()).collect(),
            SectorKind::G => g_levels(self.controls[0], trunc),
        }
    }

    /// Target levels carrying physical states after the move.
    pub fn target_levels(&self, trunc: Truncation) -> Vec<usize> {
        match self.kind {
            SectorKind::F(mv) => mv.target_levels(&self.controls, trunc).iter().map(|s| s.level()).collect(),
            SectorKind::G => g_levels(self.controls[0], trunc),
        }
    }
}

impl fmt::Display for ControlSector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{{", self.kind)?;
        for (i, s) in self.controls.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str("}")
    }
}

fn g_levels(big_j: Spin, trunc: Truncation) -> Vec<usize> {
    let k = trunc.k() as usize;
    let j = big_j.two_j() as usize;
    if !big_j.is_integer() || j > k {
        return Vec::new();
    }
    // 2 j_a^b in J..=k-J
    (j / 2..=k - j / 2).collect()
}

/// All valid control sectors of a move in lexicographic order of the
/// doubled control spins. G sectors are the integer `J` with at least two
/// active levels.
pub fn control_sectors(kind: SectorKind, trunc: Truncation) -> Vec<ControlSector> {
    let d = trunc.d() as u32;
    let n = kind.num_controls() as u32;
    let mut out = Vec::new();
    for index in 0..d.pow(n) {
        let controls: Vec<Spin> = (0..n).rev().map(|p| Spin::from_twice(index / d.pow(p) % d)).collect();
        let sector = ControlSector { kind, controls };
        let m = sector.source_levels(trunc).len();
        let keep = match kind {
            SectorKind::F(_) => m >= 1,
            SectorKind::G => m >= 2,
        };
        if keep {
            out.push(sector);
        }
    }
    out
}

/// `C^(4)_p`.
pub fn c4(p: i64) -> u128 {
    if p <= 0 {
        return 0;
    }
    let p = p as i128;
    let v = 8 * (p * p * p - 3 * p * p + 5 * p - 3) / 3 + if p == 1 { 1 } else { 0 };
    v as u128
}

/// `C^(3)_p`.
pub fn c3(p: i64) -> u128 {
    if p <= 0 {
        return 0;
    }
    let p = p as i128;
    (2 * p * p - 4 * p + 4 - if p == 1 { 1 } else { 0 }) as u128
}

/// Number of `m`-level unitaries among the sectors of a move with
/// `num_controls` controls (4, 3 or 1).
pub fn level_distribution(num_controls: usize, m: usize, trunc: Truncation) -> u128 {
    assert!(m >= 1, "m must be positive");
    let k = trunc.k() as i64;
    let p = k + 3 - 2 * m as i64;
    match num_controls {
        4 => c4(p),
        3 => c3(p),
        1 => {
            let m = m as i64;
            let ok = m >= 2 && m <= k + 1 && (m % 2 == 0 && k % 2 == 1 || m % 2 == 1 && k % 2 == 0);
            u128::from(ok)
        }
        _ => panic!("moves have 1, 3 or 4 controls"),
    }
}

/// Largest `m` with nonzero [`level_distribution`].
pub fn max_levels(num_controls: usize, trunc: Truncation) -> usize {
    let k = trunc.k() as usize;
    if num_controls == 1 {
        k + 1
    } else {
        (k + 2) / 2
    }
}

/// `N_l(k)`: total number of control sectors, by summation.
pub fn total_sectors(num_controls: usize, trunc: Truncation) -> u128 {
    (1..=max_levels(num_controls, trunc)).map(|m| level_distribution(num_controls, m, trunc)).sum()
}

/// `N_4(k) = (3 + 8k + 8k^2 + 4k^3 + k^4) / 3`.
pub fn n4_closed(k: u64) -> u128 {
    let k = k as u128;
    (3 + 8 * k + 8 * k * k + 4 * k.pow(3) + k.pow(4)) / 3
}

/// `N_3(k) = (3 + 5k + 3k^2 + k^3) / 3`.
pub fn n3_closed(k: u64) -> u128 {
    let k = k as u128;
    (3 + 5 * k + 3 * k * k + k.pow(3)) / 3
}

/// `N_1(k) = ceil(k / 2)`.
pub fn n1_closed(k: u64) -> u128 {
    k.div_ceil(2) as u128
}

/// One line of a resource breakdown.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResourceItem {
    pub component: &'static str,
    pub gcx: u128,
}

/// GCX budget of one Trotter step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResourceReport {
    pub scheme: Scheme,
    pub k: u32,
    pub gcx_total: u128,
    pub breakdown: Vec<ResourceItem>,
    /// GCX gates spent on centering permutations by the reduced
    /// construction, which the closed form leaves out. `None` when not
    /// evaluated (other schemes, or `k` above [`CENTERING_GUARD`]).
    pub centering_overhead: Option<u128>,
}

/// Largest `k` for which [`ResourceReport`] tallies centering gates.
pub const CENTERING_GUARD: u32 = 12;

fn reduced_f_term(num_controls: usize, trunc: Truncation) -> u128 {
    let l = num_controls as u128;
    (1..=max_levels(num_controls, trunc))
        .map(|m| (1u128 << (l - 2)) * (2 * l + 2 * (m as u128 - 1)) * level_distribution(num_controls, m, trunc))
        .sum()
}

fn reduced_box_term(trunc: Truncation) -> u128 {
    (2..=trunc.k() as usize + 1).map(|m| 2 * (m as u128 / 2) * level_distribution(1, m, trunc)).sum()
}

impl ResourceReport {
    pub fn new(scheme: Scheme, trunc: Truncation) -> Result<Self> {
        let k = trunc.k() as u128;
        let kk = trunc.k() as u64;
        let breakdown = match scheme {
            Scheme::Nondeformed => vec![ResourceItem { component: "total", gcx: k.pow(4) * (2 * (k + 1).pow(4) + 30) }],
            Scheme::Baseline => vec![
                ResourceItem { component: "F1,2", gcx: 4 * (8 + 2 * k) * n4_closed(kk) },
                ResourceItem { component: "F3", gcx: 2 * (6 + 2 * k) * n3_closed(kk) },
                ResourceItem { component: "G", gcx: 4 * k * n1_closed(kk) },
                ResourceItem { component: "box~", gcx: 2 * k * n1_closed(kk) },
            ],
            Scheme::Reduced => vec![
                ResourceItem { component: "F1,2", gcx: reduced_f_term(4, trunc) },
                ResourceItem { component: "F3", gcx: reduced_f_term(3, trunc) },
                ResourceItem { component: "box'''", gcx: reduced_box_term(trunc) },
            ],
            Scheme::ParityK1 => {
                if trunc.k() != 1 {
                    return Err(Error::UnsupportedTruncation { k: trunc.k(), reason: "the parity circuit exists only for k = 1" });
                }
                vec![
                    ResourceItem { component: "F1,2", gcx: 40 },
                    ResourceItem { component: "F3", gcx: 6 },
                    ResourceItem { component: "box'''", gcx: 2 },
                ]
            }
        };
        let centering_overhead = (scheme == Scheme::Reduced && trunc.k() <= CENTERING_GUARD).then(|| centering_count(trunc));
        Ok(Self { scheme, k: trunc.k(), gcx_total: breakdown.iter().map(|i| i.gcx).sum(), breakdown, centering_overhead })
    }

    /// Closed form plus centering gates, the count the reduced construction
    /// actually emits.
    pub fn constructed_total(&self) -> Option<u128> {
        match self.scheme {
            Scheme::Reduced => self.centering_overhead.map(|c| self.gcx_total + c),
            _ => Some(self.gcx_total),
        }
    }
}

fn centering_count(trunc: Truncation) -> u128 {
    let mut total = 0u128;
    for mv in FMove::ALL {
        // each F-move is emitted once forward and once inverted
        for s in control_sectors(SectorKind::F(mv), trunc) {
            let (src, tgt) = (s.source_levels(trunc), s.target_levels(trunc));
            total += 2 * gvc::centering_permutation(&src, &tgt, trunc.d()).1.len() as u128;
        }
    }
    total
}

/// Closed-form GCX count of one Trotter step.
pub fn gcx_count(scheme: Scheme, trunc: Truncation) -> Result<u128> {
    Ok(ResourceReport::new(scheme, trunc)?.gcx_total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinatorial_factors() {
        let c4s: Vec<u128> = (1..=9).map(c4).collect();
        assert_eq!(c4s, [1, 8, 32, 88, 192, 360, 608, 952, 1408]);
        let c3s: Vec<u128> = (1..=9).map(c3).collect();
        assert_eq!(c3s, [1, 4, 10, 20, 34, 52, 74, 100, 130]);
    }

    #[test]
    fn closed_sector_totals() {
        for k in 0..=12u32 {
            let t = Truncation::new(k);
            assert_eq!(total_sectors(4, t), n4_closed(k as u64));
            assert_eq!(total_sectors(3, t), n3_closed(k as u64));
            assert_eq!(total_sectors(1, t), n1_closed(k as u64));
        }
    }

    #[test]
    fn known_counts() {
        let t = Truncation::new(1);
        assert_eq!(gcx_count(Scheme::Nondeformed, t).unwrap(), 62);
        assert_eq!(gcx_count(Scheme::Reduced, t).unwrap(), 306);
        assert_eq!(gcx_count(Scheme::Baseline, t).unwrap(), 390);
        assert_eq!(gcx_count(Scheme::ParityK1, t).unwrap(), 48);
        assert!(gcx_count(Scheme::ParityK1, Truncation::new(2)).is_err());
    }

    #[test]
    fn sector_counts() {
        assert_eq!(control_sectors(SectorKind::F(FMove::F1), Truncation::new(1)).len(), 8);
        assert_eq!(control_sectors(SectorKind::F(FMove::F3), Truncation::new(2)).len(), 11);
        let bad = [1, 2, 3, 3].map(Spin::from_twice).to_vec();
        let t3 = Truncation::new(3);
        assert!(!control_sectors(SectorKind::F(FMove::F1), t3).iter().any(|s| s.controls == bad));
        assert!(ControlSector::new(SectorKind::F(FMove::F1), bad, t3).is_err());
    }
}
