//! Link labels, register order and vertex structure of the single-plaquette
//! lattice section.
//!
//! ```text
//!   j_l^t ---+--- j_a^t ---+--- j_r^t
//!            |             |
//!           q_l           q_r
//!            |             |
//!   j_l^b ---+--- j_a^b ---+--- j_r^b
//! ```

use std::fmt;

use crate::error::Result;
use crate::spin::{Spin, SpinTriple, Truncation};

/// The eight link registers in canonical order, followed by the auxiliary
/// register used by the synthesized circuits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Register {
    JlT = 0,
    JlB = 1,
    Ql = 2,
    JaT = 3,
    JaB = 4,
    Qr = 5,
    JrT = 6,
    JrB = 7,
    Aux = 8,
}

impl Register {
    pub const LINKS: [Register; 8] = [
        Register::JlT,
        Register::JlB,
        Register::Ql,
        Register::JaT,
        Register::JaB,
        Register::Qr,
        Register::JrT,
        Register::JrB,
    ];
    pub const EXTERNAL: [Register; 4] = [Register::JlT, Register::JlB, Register::JrT, Register::JrB];
    pub const ACTIVE: [Register; 4] = [Register::Ql, Register::JaT, Register::JaB, Register::Qr];

    pub const fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Register::JlT => "j_l^t",
            Register::JlB => "j_l^b",
            Register::Ql => "q_l",
            Register::JaT => "j_a^t",
            Register::JaB => "j_a^b",
            Register::Qr => "q_r",
            Register::JrT => "j_r^t",
            Register::JrB => "j_r^b",
            Register::Aux => "aux",
        }
    }
}

/// Dimension of the auxiliary register shared by all multi-controlled
/// decompositions.
pub const AUX_DIM: usize = 5;

/// Vertices of the original lattice as register triples.
pub const VERTICES: [[Register; 3]; 4] = [
    [Register::JlT, Register::JaT, Register::Ql],
    [Register::JlB, Register::Ql, Register::JaB],
    [Register::JrT, Register::Qr, Register::JaT],
    [Register::JrB, Register::JaB, Register::Qr],
];

/// Spins on the eight links, indexed by [`Register`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinkAssignment {
    pub links: [Spin; 8],
}

impl LinkAssignment {
    pub fn from_twice(twice: [u32; 8]) -> Self {
        Self { links: twice.map(Spin::from_twice) }
    }

    pub fn checked(self, trunc: Truncation) -> Result<Self> {
        for s in self.links {
            trunc.check(s)?;
        }
        Ok(self)
    }

    pub fn get(&self, r: Register) -> Spin {
        self.links[r.index()]
    }

    pub fn set(&mut self, r: Register, s: Spin) {
        self.links[r.index()] = s;
    }

    pub fn twice(&self) -> [u32; 8] {
        self.links.map(Spin::two_j)
    }

    pub fn vertex(&self, v: usize) -> SpinTriple {
        let [a, b, c] = VERTICES[v];
        SpinTriple::new(self.get(a), self.get(b), self.get(c))
    }

    /// Every vertex satisfies Gauss law, and the fusion rule when deformed.
    pub fn is_physical(&self, trunc: Truncation, deformed: bool) -> bool {
        (0..4).all(|v| {
            let t = self.vertex(v);
            if deformed {
                t.is_admissible(trunc)
            } else {
                t.is_singlet()
            }
        })
    }

    pub fn same_external(&self, other: &Self) -> bool {
        Register::EXTERNAL.iter().all(|&r| self.get(r) == other.get(r))
    }

    /// Row-major index over `d^8` with register 0 most significant.
    pub fn basis_index(&self, trunc: Truncation) -> usize {
        self.links.iter().fold(0, |acc, s| acc * trunc.d() + s.level())
    }

    pub fn from_basis_index(mut index: usize, trunc: Truncation) -> Self {
        let d = trunc.d();
        let mut twice = [0u32; 8];
        for slot in twice.iter_mut().rev() {
            *slot = (index % d) as u32;
            index /= d;
        }
        Self::from_twice(twice)
    }
}

impl fmt::Display for LinkAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.links.iter().map(|s| s.two_j().to_string()).collect();
        write!(f, "2{{{}}}", parts.join(","))
    }
}
