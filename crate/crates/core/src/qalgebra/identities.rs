//! Orthogonality, pentagon and column-exchange checks for [`f_symbol`].

use super::f_symbol;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::spin::{Spin, SpinTriple, Truncation};

/// Largest `k` for which [`pentagon_deviation`] walks all `d^9` tuples.
pub const PENTAGON_EXHAUSTIVE_GUARD: u32 = 4;

fn adm(a: Spin, b: Spin, c: Spin, trunc: Truncation) -> bool {
    SpinTriple::new(a, b, c).is_admissible(trunc)
}

fn f<T: Scalar>(s: [Spin; 6], trunc: Truncation) -> T {
    f_symbol(s[0], s[1], s[2], s[3], s[4], s[5], trunc)
}

/// Largest deviation of `sum_J [j1 j2 J; j3 j4 j'] [j1 j2 J; j3 j4 j]`
/// from `delta_{j j'}` over all spins.
///
/// The diagonal is only required to be one when the triads carrying `j`
/// are admissible; otherwise both F-symbols vanish identically.
pub fn orthogonality_deviation<T: Scalar>(trunc: Truncation) -> T {
    let spins: Vec<Spin> = trunc.spins().collect();
    let mut worst = T::zero();
    for &j1 in &spins {
        for &j2 in &spins {
            for &j3 in &spins {
                for &j4 in &spins {
                    for &j in &spins {
                        for &jp in &spins {
                            let sum = spins.iter().fold(T::zero(), |acc, &big| {
                                acc + f::<T>([j1, j2, big, j3, j4, jp], trunc) * f::<T>([j1, j2, big, j3, j4, j], trunc)
                            });
                            let expect = if j == jp && adm(j1, j4, j, trunc) && adm(j3, j2, j, trunc) {
                                T::one()
                            } else {
                                T::zero()
                            };
                            worst = worst.max((sum - expect).abs());
                        }
                    }
                }
            }
        }
    }
    worst
}

/// All eight triads of the two F-symbols on the right of the pentagon
/// identity are admissible.
pub fn pentagon_admissible(j: [Spin; 9], trunc: Truncation) -> bool {
    let [j1, j2, j3, j4, j5, j6, j7, j8, j9] = j;
    [
        (j1, j2, j5),
        (j1, j6, j8),
        (j9, j2, j8),
        (j9, j6, j5),
        (j6, j7, j4),
        (j6, j5, j9),
        (j3, j7, j9),
        (j3, j5, j4),
    ]
    .into_iter()
    .all(|(a, b, c)| adm(a, b, c, trunc))
}

/// `|lhs - rhs|` of the pentagon identity for `j = (j1, ..., j9)`.
pub fn pentagon_residual<T: Scalar>(j: [Spin; 9], trunc: Truncation) -> T {
    let [j1, j2, j3, j4, j5, j6, j7, j8, j9] = j;
    let lhs = trunc.spins().fold(T::zero(), |acc, big| {
        acc + f::<T>([j1, j2, j5, j3, j4, big], trunc)
            * f::<T>([j6, j7, j4, big, j1, j8], trunc)
            * f::<T>([j8, j7, big, j3, j2, j9], trunc)
    });
    let rhs = f::<T>([j1, j2, j5, j9, j6, j8], trunc) * f::<T>([j6, j7, j4, j3, j5, j9], trunc);
    (lhs - rhs).abs()
}

/// Largest pentagon residual over every admissible 9-tuple, with the
/// number of tuples checked.
pub fn pentagon_deviation<T: Scalar>(trunc: Truncation) -> Result<(T, usize)> {
    if trunc.k() > PENTAGON_EXHAUSTIVE_GUARD {
        return Err(Error::TruncationTooLarge {
            k: trunc.k(),
            max: PENTAGON_EXHAUSTIVE_GUARD,
            what: "exhaustive pentagon check",
        });
    }
    let d = trunc.d();
    let mut worst = T::zero();
    let mut count = 0;
    for code in 0..d.pow(9) {
        let mut rest = code;
        let j = std::array::from_fn(|_| {
            let s = Spin::from_twice((rest % d) as u32);
            rest /= d;
            s
        });
        if !pentagon_admissible(j, trunc) {
            continue;
        }
        count += 1;
        worst = worst.max(pentagon_residual::<T>(j, trunc));
    }
    Ok((worst, count))
}

/// Largest violation of the column swap and pairwise column inversions
/// over all spins.
pub fn column_symmetry_deviation<T: Scalar>(trunc: Truncation) -> T {
    let spins: Vec<Spin> = trunc.spins().collect();
    let mut worst = T::zero();
    for &a in &spins {
        for &b in &spins {
            for &e in &spins {
                for &c in &spins {
                    for &d in &spins {
                        for &g in &spins {
                            let base = f::<T>([a, b, e, c, d, g], trunc);
                            for alt in [
                                [b, a, e, d, c, g],
                                [c, d, e, a, b, g],
                                [c, b, g, a, d, e],
                                [a, d, g, c, b, e],
                            ] {
                                worst = worst.max((base - f::<T>(alt, trunc)).abs());
                            }
                        }
                    }
                }
            }
        }
    }
    worst
}
