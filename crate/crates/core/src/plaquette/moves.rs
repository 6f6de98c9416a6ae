use std::fmt;

use crate::lattice::Register;
use crate::qalgebra::f_symbol;
use crate::spin::{i_pow, Spin, SpinTriple, Truncation};
use crate::Complex;

/// The three phased F-moves of the diagonalization sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FMove {
    F1,
    F2,
    F3,
}

impl FMove {
    pub const ALL: [FMove; 3] = [FMove::F1, FMove::F2, FMove::F3];

    /// Control registers, in the order the sector tuple is written.
    pub fn controls(self) -> &'static [Register] {
        use Register::*;
        match self {
            FMove::F1 => &[JlT, JlB, JaB, JaT],
            FMove::F2 => &[JaT, JaB, JrB, JrT],
            FMove::F3 => &[Ql, Qr, JaB],
        }
    }

    pub fn target(self) -> Register {
        match self {
            FMove::F1 => Register::Ql,
            FMove::F2 => Register::Qr,
            FMove::F3 => Register::JaT,
        }
    }

    pub fn num_controls(self) -> usize {
        self.controls().len()
    }

    /// Spins `(a, b, c, d)` of the symbol `[a b J; c d j]` for a sector.
    pub fn columns(self, sector: &[Spin]) -> [Spin; 4] {
        assert_eq!(sector.len(), self.num_controls(), "wrong number of control spins");
        match self {
            FMove::F1 | FMove::F2 => [sector[0], sector[1], sector[2], sector[3]],
            FMove::F3 => [sector[0], sector[1], sector[2], sector[2]],
        }
    }

    /// Levels `j` of the target register that are physical before the move.
    pub fn source_levels(self, sector: &[Spin], trunc: Truncation) -> Vec<Spin> {
        let [a, b, c, d] = self.columns(sector);
        trunc
            .spins()
            .filter(|&j| SpinTriple::new(a, d, j).is_admissible(trunc) && SpinTriple::new(c, b, j).is_admissible(trunc))
            .collect()
    }

    /// Levels `J` of the target register that are physical after the move.
    pub fn target_levels(self, sector: &[Spin], trunc: Truncation) -> Vec<Spin> {
        let [a, b, c, d] = self.columns(sector);
        trunc
            .spins()
            .filter(|&j| SpinTriple::new(a, b, j).is_admissible(trunc) && SpinTriple::new(c, d, j).is_admissible(trunc))
            .collect()
    }
}

impl fmt::Display for FMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FMove::F1 => "F1",
            FMove::F2 => "F2",
            FMove::F3 => "F3",
        };
        f.write_str(s)
    }
}

/// `<J| F |j>` for a phased F-move in the given control sector:
/// `(-1)^(-j-J) [a b J; c d j]` for F1 and F2, `(-1)^(j+J) [a b J; c c j]`
/// for F3.
pub fn phased_f_element(mv: FMove, sector: &[Spin], big_j: Spin, j: Spin, trunc: Truncation) -> Complex {
    let [a, b, c, d] = mv.columns(sector);
    let f = f_symbol::<f64>(a, b, big_j, c, d, j, trunc);
    if f == 0.0 {
        return Complex::new(0.0, 0.0);
    }
    let two_x = (j.two_j() + big_j.two_j()) as i64;
    let phase = match mv {
        FMove::F1 | FMove::F2 => i_pow::<f64>(-two_x),
        FMove::F3 => i_pow::<f64>(two_x),
    };
    phase * f
}
