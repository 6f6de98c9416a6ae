use std::collections::HashMap;

use super::{embed_active, plaquette_block, FMove};
use crate::error::{Error, Result};
use crate::lattice::{LinkAssignment, Register};
use crate::linalg::CMatrix;
use crate::qalgebra::f_symbol;
use crate::spin::{i_pow, Spin, SpinTriple, Truncation};
use crate::synth::{control_sectors, gvc_complete, GvcUnitary, SectorKind};
use crate::Complex;

/// Largest `k` accepted by [`verify_f_sequence`].
pub const VERIFY_GUARD: u32 = 3;

/// Outcome of one stage of the F-sequence in one external sector.
#[derive(Clone, Debug, PartialEq)]
pub struct SectorCheck {
    /// 1, 2 or 3: number of F-moves applied.
    pub stage: u8,
    /// External links `[j_l^t, j_l^b, j_r^t, j_r^b]`.
    pub external: [Spin; 4],
    /// Physical basis states of the stage compared in this sector.
    pub compared: usize,
    pub max_deviation: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FSequenceReport {
    pub k: u32,
    pub checks: Vec<SectorCheck>,
}

impl FSequenceReport {
    pub fn max_deviation(&self) -> f64 {
        self.checks.iter().fold(0.0, |a, c| a.max(c.max_deviation))
    }

    pub fn stage_max(&self, stage: u8) -> f64 {
        self.checks.iter().filter(|c| c.stage == stage).fold(0.0, |a, c| a.max(c.max_deviation))
    }

    pub fn failures(&self, tol: f64) -> Vec<&SectorCheck> {
        self.checks.iter().filter(|c| c.max_deviation.is_nan() || c.max_deviation > tol).collect()
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.failures(tol).is_empty()
    }
}

type Table = HashMap<Vec<Spin>, GvcUnitary>;

fn gvc_table(mv: FMove, trunc: Truncation) -> Table {
    control_sectors(SectorKind::F(mv), trunc)
        .into_iter()
        .map(|s| (s.controls.clone(), gvc_complete(&s, trunc).expect("valid sector")))
        .collect()
}

/// Columns of the block unitary of one F-move, as sparse `(row, value)`
/// lists over the active-register block.
fn move_columns(mv: FMove, table: &Table, external: [Spin; 4], trunc: Truncation) -> Vec<Vec<(usize, Complex)>> {
    let d = trunc.d();
    let n = d.pow(4);
    let tpos = Register::ACTIVE.iter().position(|&r| r == mv.target()).unwrap();
    let stride = d.pow(3 - tpos as u32);
    (0..n)
        .map(|x| {
            let a = embed_active(x, external, trunc);
            let key: Vec<Spin> = mv.controls().iter().map(|&r| a.get(r)).collect();
            match table.get(&key) {
                None => vec![(x, Complex::new(1.0, 0.0))],
                Some(u) => {
                    let src = a.get(mv.target()).level();
                    let base = x - src * stride;
                    (0..d)
                        .filter_map(|t| {
                            let v = u.matrix[(t, src)];
                            (v != Complex::new(0.0, 0.0)).then_some((base + t * stride, v))
                        })
                        .collect()
                }
            }
        })
        .collect()
}

/// `U M U^dagger` with `U` given by sparse columns.
fn conjugate(m: &CMatrix, u: &[Vec<(usize, Complex)>]) -> CMatrix {
    let n = m.nrows();
    let mut a = CMatrix::zeros(n, n);
    for c in 0..n {
        for x in 0..n {
            let v = m[(x, c)];
            if v == Complex::new(0.0, 0.0) {
                continue;
            }
            for &(y, w) in &u[x] {
                a[(y, c)] += w * v;
            }
        }
    }
    let mut b = CMatrix::zeros(n, n);
    for x in 0..n {
        for &(z, w) in &u[x] {
            let w = w.conj();
            for y in 0..n {
                let v = a[(y, x)];
                if v != Complex::new(0.0, 0.0) {
                    b[(y, z)] += v * w;
                }
            }
        }
    }
    b
}

fn adm(a: Spin, b: Spin, c: Spin, trunc: Truncation) -> bool {
    SpinTriple::new(a, b, c).is_admissible(trunc)
}

fn stage_physical(stage: u8, a: &LinkAssignment, trunc: Truncation) -> bool {
    use Register::*;
    let g = |r| a.get(r);
    let v = |x, y, z| adm(g(x), g(y), g(z), trunc);
    match stage {
        1 => v(JlT, JlB, Ql) && v(JaB, JaT, Ql) && v(JrT, Qr, JaT) && v(JrB, JaB, Qr),
        2 => v(JlT, JlB, Ql) && v(JaB, JaT, Ql) && v(JaT, JaB, Qr) && v(JrB, JrT, Qr),
        _ => v(JlT, JlB, Ql) && v(JrT, JrB, Qr) && v(Ql, Qr, JaT) && v(JaB, JaB, JaT),
    }
}

/// Closed-form matrix element of the conjugated operator after `stage`
/// F-moves, admissibility deltas included.
fn stage_element(stage: u8, bra: &LinkAssignment, ket: &LinkAssignment, trunc: Truncation) -> Complex {
    use Register::*;
    let zero = Complex::new(0.0, 0.0);
    let (u, p) = (|r: Register| ket.get(r), |r: Register| bra.get(r));
    let dl = |r: Register| p(r).two_j() as i64 - u(r).two_j() as i64;
    let h = Spin::HALF;
    if !bra.same_external(ket) || dl(Ql) != 0 || !adm(u(JlT), u(JlB), u(Ql), trunc) {
        return zero;
    }
    match stage {
        1 => {
            let f = f_symbol::<f64>(h, p(JaB), u(JaB), u(Ql), u(JaT), p(JaT), trunc)
                * f_symbol::<f64>(u(JrT), u(Qr), u(JaT), h, p(JaT), p(Qr), trunc)
                * f_symbol::<f64>(u(JrB), u(JaB), u(Qr), h, p(Qr), p(JaB), trunc);
            i_pow::<f64>(-dl(JaT) - dl(JaB) + dl(Qr)) * f
        }
        2 => {
            if dl(Qr) != 0 || !adm(u(JrT), u(JrB), u(Qr), trunc) {
                return zero;
            }
            let f = f_symbol::<f64>(h, p(JaB), u(JaB), u(Ql), u(JaT), p(JaT), trunc)
                * f_symbol::<f64>(h, p(JaT), u(JaT), u(Qr), u(JaB), p(JaB), trunc);
            i_pow::<f64>(-dl(JaT) - dl(JaB)) * f
        }
        _ => {
            if dl(Qr) != 0
                || dl(JaT) != 0
                || !adm(u(JrT), u(JrB), u(Qr), trunc)
                || !adm(u(Ql), u(Qr), u(JaT), trunc)
            {
                return zero;
            }
            let f = f_symbol::<f64>(u(JaB), h, p(JaB), p(JaB), u(JaT), u(JaB), trunc);
            i_pow::<f64>(-dl(JaB)) * f
        }
    }
}

/// External links for a sector index, first link most significant.
pub(crate) fn external_sector(index: usize, d: usize) -> [Spin; 4] {
    let digit = |p: u32| Spin::from_twice((index / d.pow(p) % d) as u32);
    [digit(3), digit(2), digit(1), digit(0)]
}

/// Conjugate the plaquette operator by the completed F unitaries one move at
/// a time and compare every stage with its closed form on the physical
/// subspace of that stage, external sector by external sector.
pub fn verify_f_sequence(trunc: Truncation) -> Result<FSequenceReport> {
    if trunc.k() > VERIFY_GUARD {
        return Err(Error::TruncationTooLarge { k: trunc.k(), max: VERIFY_GUARD, what: "F-sequence verification" });
    }
    let tables: Vec<Table> = FMove::ALL.iter().map(|&mv| gvc_table(mv, trunc)).collect();
    let d = trunc.d();
    let n = d.pow(4);
    let mut checks = Vec::new();
    for ext in 0..n {
        let external = external_sector(ext, d);
        let block = plaquette_block(trunc, external)?;
        let mut m = block.map(|x| Complex::new(x, 0.0));
        let states: Vec<LinkAssignment> = (0..n).map(|i| embed_active(i, external, trunc)).collect();
        for (stage, mv) in (1u8..).zip(FMove::ALL) {
            let cols = move_columns(mv, &tables[stage as usize - 1], external, trunc);
            m = conjugate(&m, &cols);
            let phys: Vec<usize> = (0..n).filter(|&i| stage_physical(stage, &states[i], trunc)).collect();
            let mut worst = 0.0f64;
            for &x in &phys {
                for &y in &phys {
                    let want = stage_element(stage, &states[y], &states[x], trunc);
                    worst = worst.max((m[(y, x)] - want).norm());
                }
            }
            checks.push(SectorCheck { stage, external, compared: phys.len(), max_deviation: worst });
        }
    }
    Ok(FSequenceReport { k: trunc.k(), checks })
}
