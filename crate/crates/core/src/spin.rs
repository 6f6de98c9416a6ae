//! Doubled-integer spins and the truncation level.

use std::fmt;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Local flux truncation: links carry spins `0, 1/2, ..., k/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Truncation {
    k: u32,
}

impl Truncation {
    pub const fn new(k: u32) -> Self {
        Self { k }
    }

    pub const fn k(self) -> u32 {
        self.k
    }

    /// Local register dimension `d = k + 1`.
    pub const fn d(self) -> usize {
        self.k as usize + 1
    }

    /// Deformation parameter `q = exp(2 pi i / (k + 2))`.
    pub fn q<T: Scalar>(self) -> Complex<T> {
        let angle = T::int(2) * T::PI() / T::int(self.k as i64 + 2);
        Complex::from_polar(T::one(), angle)
    }

    /// All spins allowed on a link, in increasing order.
    pub fn spins(self) -> impl DoubleEndedIterator<Item = Spin> + Clone {
        (0..=self.k).map(Spin::from_twice)
    }

    pub fn contains(self, s: Spin) -> bool {
        s.two_j() <= self.k
    }

    pub fn check(self, s: Spin) -> Result<Spin> {
        if self.contains(s) {
            Ok(s)
        } else {
            Err(Error::SpinOutOfRange { two_j: s.two_j(), k: self.k })
        }
    }
}

/// Angular momentum stored as `2j`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Spin {
    two_j: u32,
}

impl Spin {
    pub const ZERO: Spin = Spin { two_j: 0 };
    pub const HALF: Spin = Spin { two_j: 1 };

    pub const fn from_twice(two_j: u32) -> Self {
        Self { two_j }
    }

    pub const fn two_j(self) -> u32 {
        self.two_j
    }

    /// Register level holding this spin.
    pub const fn level(self) -> usize {
        self.two_j as usize
    }

    pub const fn is_integer(self) -> bool {
        self.two_j.is_multiple_of(2)
    }

    pub fn value(self) -> f64 {
        self.two_j as f64 / 2.0
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.two_j.is_multiple_of(2) {
            write!(f, "{}", self.two_j / 2)
        } else {
            write!(f, "{}/2", self.two_j)
        }
    }
}

/// Three spins meeting at a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SpinTriple {
    pub j1: Spin,
    pub j2: Spin,
    pub j3: Spin,
}

impl SpinTriple {
    pub const fn new(j1: Spin, j2: Spin, j3: Spin) -> Self {
        Self { j1, j2, j3 }
    }

    pub const fn from_twice(a: u32, b: u32, c: u32) -> Self {
        Self::new(Spin::from_twice(a), Spin::from_twice(b), Spin::from_twice(c))
    }

    /// Doubled total `2(j1 + j2 + j3)`.
    pub const fn two_sum(self) -> u32 {
        self.j1.two_j + self.j2.two_j + self.j3.two_j
    }

    /// Gauss law at the vertex: integer total and triangle inequalities.
    pub fn is_singlet(self) -> bool {
        let (a, b, c) = (self.j1.two_j, self.j2.two_j, self.j3.two_j);
        (a + b + c) % 2 == 0 && a <= b + c && b <= a + c && c <= a + b
    }

    /// Singlet condition plus the fusion constraint `j1 + j2 + j3 <= k`.
    pub fn is_admissible(self, trunc: Truncation) -> bool {
        self.is_singlet() && self.two_sum() <= 2 * trunc.k()
    }
}

/// `i^n` without rounding.
pub fn i_pow<T: Scalar>(n: i64) -> Complex<T> {
    match n.rem_euclid(4) {
        0 => Complex::new(T::one(), T::zero()),
        1 => Complex::new(T::zero(), T::one()),
        2 => Complex::new(-T::one(), T::zero()),
        _ => Complex::new(T::zero(), -T::one()),
    }
}

/// `(-1)^x` for a half-integer exponent given as `2x`.
pub fn minus_one_pow_half<T: Scalar>(two_x: i64) -> Complex<T> {
    i_pow(two_x)
}

/// `(-1)^n` for an integer exponent.
pub fn sign<T: Scalar>(n: i64) -> T {
    if n.rem_euclid(2) == 0 {
        T::one()
    } else {
        -T::one()
    }
}
