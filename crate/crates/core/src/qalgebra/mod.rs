//! q-numbers, q-factorials, triangle deltas, 6j symbols and F-symbols at
//! a root of unity `q = exp(2 pi i / (k + 2))`.
//!
//! Spins are doubled integers throughout. Admissibility is decided with
//! integer arithmetic before any q-factorial is divided, so vertices that
//! violate the fusion rule give an exact zero instead of `0/0`.

use num_complex::Complex;

use crate::scalar::Scalar;
use crate::spin::{i_pow, sign, Spin, SpinTriple, Truncation};

mod identities;
pub use identities::{
    column_symmetry_deviation, orthogonality_deviation, pentagon_admissible, pentagon_deviation, pentagon_residual,
    PENTAGON_EXHAUSTIVE_GUARD,
};

/// `[n]_k = sin(pi n / (k+2)) / sin(pi / (k+2))`.
///
/// The argument is reduced onto `[0, (k+2)/2]` before the sine is taken so
/// that `[k+2] = 0` exactly and `[n] = [k+2-n]` holds bit for bit.
pub fn q_number<T: Scalar>(n: i64, trunc: Truncation) -> T {
    q_number_doubled(2 * n, trunc)
}

/// `[n/2]_k` for a doubled argument, used where half-integer q-numbers
/// appear (the deformed Casimir).
pub fn q_number_doubled<T: Scalar>(two_n: i64, trunc: Truncation) -> T {
    let p = 2 * (trunc.k() as i64 + 2);
    let mut r = two_n.rem_euclid(2 * p);
    let mut s = T::one();
    if r >= p {
        r -= p;
        s = -s;
    }
    if r == 0 {
        return T::zero();
    }
    let r = r.min(p - r);
    let p = T::int(p);
    s * (T::PI() * T::int(r) / p).sin() / (T::int(2) * T::PI() / p).sin()
}

/// `[n]! = [1][2]...[n]`, with `[0]! = 1`.
pub fn q_factorial<T: Scalar>(n: u32, trunc: Truncation) -> T {
    (1..=n as i64).fold(T::one(), |acc, m| acc * q_number::<T>(m, trunc))
}

/// Quantum dimension `D_k(j) = [2j + 1]`.
pub fn quantum_dimension<T: Scalar>(j: Spin, trunc: Truncation) -> T {
    q_number(j.two_j() as i64 + 1, trunc)
}

/// Gauss law plus fusion constraint at a vertex (integer arithmetic only).
pub fn admissible(t: SpinTriple, trunc: Truncation) -> bool {
    t.is_admissible(trunc)
}

/// q-deformed triangle coefficient; exactly zero for inadmissible triads.
pub fn triangle_delta<T: Scalar>(t: SpinTriple, trunc: Truncation) -> T {
    if !admissible(t, trunc) {
        return T::zero();
    }
    let (a, b, c) = (t.j1.two_j(), t.j2.two_j(), t.j3.two_j());
    let num = q_factorial::<T>((a + b - c) / 2, trunc)
        * q_factorial::<T>((a + c - b) / 2, trunc)
        * q_factorial::<T>((b + c - a) / 2, trunc);
    num / q_factorial::<T>(t.two_sum() / 2 + 1, trunc)
}

/// q-deformed 6j symbol `{a b e; c d f}` by the Racah sum.
///
/// The alternating sum is accumulated by term ratios, each a short product
/// of q-numbers, rather than from tabulated factorials.
#[allow(clippy::too_many_arguments)]
pub fn six_j<T: Scalar>(a: Spin, b: Spin, e: Spin, c: Spin, d: Spin, f: Spin, trunc: Truncation) -> T {
    let triads = [
        SpinTriple::new(a, b, e),
        SpinTriple::new(a, d, f),
        SpinTriple::new(c, b, f),
        SpinTriple::new(c, d, e),
    ];
    if triads.iter().any(|t| !admissible(*t, trunc)) {
        return T::zero();
    }
    let [a, b, e, c, d, f] = [a, b, e, c, d, f].map(|s| s.two_j() as i64);
    let tetrads2 = [a + b + c + d, a + c + e + f, b + d + e + f];
    let triads2 = [a + b + e, a + d + f, c + b + f, c + d + e];
    assert!(
        tetrads2.iter().chain(triads2.iter()).all(|x| x % 2 == 0),
        "Racah sum indices must be integers"
    );
    let tets = tetrads2.map(|x| x / 2);
    let tris = triads2.map(|x| x / 2);
    let j_min = *tris.iter().max().unwrap();
    let j_max = *tets.iter().min().unwrap();
    if j_min > j_max {
        return T::zero();
    }

    let fact = |n: i64| q_factorial::<T>(n as u32, trunc);
    let qn = |n: i64| q_number::<T>(n, trunc);

    let mut den = T::one();
    for t in tets {
        den = den * fact(t - j_min);
    }
    for t in tris {
        den = den * fact(j_min - t);
    }
    let mut term = sign::<T>(j_min) * fact(j_min + 1) / den;
    let mut sum = term;
    for j in j_min..j_max {
        let mut num = -qn(j + 2);
        for t in tets {
            num = num * qn(t - j);
        }
        let mut den = T::one();
        for t in tris {
            den = den * qn(j + 1 - t);
        }
        term = term * num / den;
        sum = sum + term;
    }

    let deltas = triads
        .iter()
        .fold(T::one(), |acc, t| acc * triangle_delta::<T>(*t, trunc));
    deltas.sqrt() * sum
}

/// F-symbol `[a b e; c d f] = (-1)^(a+b+c+d) sqrt(D(e) D(f)) {a b e; c d f}`.
#[allow(clippy::too_many_arguments)]
pub fn f_symbol<T: Scalar>(a: Spin, b: Spin, e: Spin, c: Spin, d: Spin, f: Spin, trunc: Truncation) -> T {
    let sixj = six_j::<T>(a, b, e, c, d, f, trunc);
    if sixj == T::zero() {
        return sixj;
    }
    let two_phase = (a.two_j() + b.two_j() + c.two_j() + d.two_j()) as i64;
    assert!(two_phase % 2 == 0, "F-symbol phase exponent must be an integer");
    let dims = quantum_dimension::<T>(e, trunc) * quantum_dimension::<T>(f, trunc);
    sign::<T>(two_phase / 2) * dims.sqrt() * sixj
}

/// [`f_symbol`] with the six spins given as doubled integers in the order
/// `a, b, e, c, d, f`.
pub fn f_symbol_twice<T: Scalar>(twice: [u32; 6], trunc: Truncation) -> T {
    let [a, b, e, c, d, f] = twice.map(Spin::from_twice);
    f_symbol(a, b, e, c, d, f, trunc)
}

/// `v_j = (-1)^(-j) sqrt(D(j))`, complex for half-integer `j`.
pub fn exchange_weight<T: Scalar>(j: Spin, trunc: Truncation) -> Complex<T> {
    i_pow::<T>(-(j.two_j() as i64)) * quantum_dimension::<T>(j, trunc).sqrt()
}

/// Right-hand side of the dimension-scaled exchange of the last column with
/// the first: `(v_e v_f)/(v_a v_c) [e b a; f d c]`, which equals
/// `[a b e; c d f]` whenever `a` and `c` have nonzero quantum dimension.
#[allow(clippy::too_many_arguments)]
pub fn f_symbol_exchanged<T: Scalar>(
    a: Spin,
    b: Spin,
    e: Spin,
    c: Spin,
    d: Spin,
    f: Spin,
    trunc: Truncation,
) -> Complex<T> {
    let scale = exchange_weight::<T>(e, trunc) * exchange_weight::<T>(f, trunc)
        / (exchange_weight::<T>(a, trunc) * exchange_weight::<T>(c, trunc));
    scale * f_symbol::<T>(e, b, a, f, d, c, trunc)
}

/// Electric Casimir `j(j+1)`, or its deformation `[j][j+1]`.
pub fn electric_casimir<T: Scalar>(j: Spin, trunc: Truncation, deformed: bool) -> T {
    let tj = j.two_j() as i64;
    if deformed {
        q_number_doubled::<T>(tj, trunc) * q_number_doubled::<T>(tj + 2, trunc)
    } else {
        T::int(tj) * T::int(tj + 2) / T::int(4)
    }
}
