//! Reference k=1 and k=2 gate tables.

use std::collections::BTreeSet;
use std::f64::consts::FRAC_1_SQRT_2;

use qdeform::plaquette::{phased_f_element, FMove};
use qdeform::synth::{control_sectors, gvc_complete, ControlSector, SectorKind};
use qdeform::{Complex, Spin, Truncation};

const R: f64 = FRAC_1_SQRT_2;

/// `(controls as doubled spins, [(2j, 2J, re, im)])`.
pub type Row = (&'static [u32], &'static [(u32, u32, f64, f64)]);

pub const K1_F4: &[Row] = &[
    (&[0, 0, 0, 0], &[(0, 0, 1.0, 0.0)]),
    (&[0, 0, 1, 1], &[(1, 0, 0.0, -1.0)]),
    (&[0, 1, 0, 1], &[(1, 1, -1.0, 0.0)]),
    (&[0, 1, 1, 0], &[(0, 1, 0.0, -1.0)]),
    (&[1, 0, 0, 1], &[(0, 1, 0.0, -1.0)]),
    (&[1, 0, 1, 0], &[(1, 1, -1.0, 0.0)]),
    (&[1, 1, 0, 0], &[(1, 0, 0.0, -1.0)]),
    (&[1, 1, 1, 1], &[(0, 0, -1.0, 0.0)]),
];

// controls listed as {a, c, d} of [a a J; c d j]
pub const K1_F3: &[Row] = &[
    (&[0, 0, 0], &[(0, 0, 1.0, 0.0)]),
    (&[0, 1, 1], &[(1, 0, 0.0, 1.0)]),
    (&[1, 0, 0], &[(1, 0, 0.0, 1.0)]),
    (&[1, 1, 1], &[(0, 0, -1.0, 0.0)]),
];

pub const K2_F4: &[Row] = &[
    (&[0, 0, 0, 0], &[(0, 0, 1.0, 0.0)]),
    (&[0, 0, 1, 1], &[(1, 0, 0.0, -1.0)]),
    (&[0, 0, 2, 2], &[(2, 0, -1.0, 0.0)]),
    (&[0, 1, 0, 1], &[(1, 1, -1.0, 0.0)]),
    (&[0, 1, 1, 0], &[(0, 1, 0.0, -1.0)]),
    (&[0, 1, 1, 2], &[(2, 1, 0.0, 1.0)]),
    (&[0, 1, 2, 1], &[(1, 1, -1.0, 0.0)]),
    (&[0, 2, 0, 2], &[(2, 2, 1.0, 0.0)]),
    (&[0, 2, 1, 1], &[(1, 2, 0.0, 1.0)]),
    (&[0, 2, 2, 0], &[(0, 2, -1.0, 0.0)]),
    (&[1, 0, 0, 1], &[(0, 1, 0.0, -1.0)]),
    (&[1, 0, 1, 0], &[(1, 1, -1.0, 0.0)]),
    (&[1, 0, 1, 2], &[(1, 1, -1.0, 0.0)]),
    (&[1, 0, 2, 1], &[(2, 1, 0.0, 1.0)]),
    (&[1, 1, 0, 0], &[(1, 0, 0.0, -1.0)]),
    (&[1, 1, 0, 2], &[(1, 2, 0.0, 1.0)]),
    (&[1, 1, 1, 1], &[(0, 0, -R, 0.0), (0, 2, -R, 0.0), (2, 0, -R, 0.0), (2, 2, R, 0.0)]),
    (&[1, 1, 2, 0], &[(1, 2, 0.0, 1.0)]),
    (&[1, 1, 2, 2], &[(1, 0, 0.0, 1.0)]),
    (&[1, 2, 0, 1], &[(2, 1, 0.0, 1.0)]),
    (&[1, 2, 1, 0], &[(1, 1, -1.0, 0.0)]),
    (&[1, 2, 1, 2], &[(1, 1, 1.0, 0.0)]),
    (&[1, 2, 2, 1], &[(0, 1, 0.0, 1.0)]),
    (&[2, 0, 0, 2], &[(0, 2, -1.0, 0.0)]),
    (&[2, 0, 1, 1], &[(1, 2, 0.0, 1.0)]),
    (&[2, 0, 2, 0], &[(2, 2, 1.0, 0.0)]),
    (&[2, 1, 0, 1], &[(1, 1, -1.0, 0.0)]),
    (&[2, 1, 1, 0], &[(2, 1, 0.0, 1.0)]),
    (&[2, 1, 1, 2], &[(0, 1, 0.0, 1.0)]),
    (&[2, 1, 2, 1], &[(1, 1, 1.0, 0.0)]),
    (&[2, 2, 0, 0], &[(2, 0, -1.0, 0.0)]),
    (&[2, 2, 1, 1], &[(1, 0, 0.0, 1.0)]),
    (&[2, 2, 2, 2], &[(0, 0, 1.0, 0.0)]),
];

pub const K2_F3: &[Row] = &[
    (&[0, 0, 0], &[(0, 0, 1.0, 0.0)]),
    (&[0, 1, 1], &[(1, 0, 0.0, 1.0)]),
    (&[0, 2, 2], &[(2, 0, -1.0, 0.0)]),
    (&[1, 0, 0], &[(1, 0, 0.0, 1.0)]),
    (&[1, 0, 2], &[(1, 2, 0.0, -1.0)]),
    (&[1, 1, 1], &[(0, 0, -R, 0.0), (2, 2, R, 0.0), (2, 0, -R, 0.0), (0, 2, -R, 0.0)]),
    (&[1, 2, 0], &[(1, 2, 0.0, -1.0)]),
    (&[1, 2, 2], &[(1, 0, 0.0, -1.0)]),
    (&[2, 0, 0], &[(2, 0, -1.0, 0.0)]),
    (&[2, 1, 1], &[(1, 0, 0.0, -1.0)]),
    (&[2, 2, 2], &[(0, 0, 1.0, 0.0)]),
];

fn spins(twice: &[u32]) -> Vec<Spin> {
    twice.iter().map(|&t| Spin::from_twice(t)).collect()
}

/// Control spins in register order for `mv`.
fn controls(mv: FMove, twice: &[u32]) -> Vec<Spin> {
    match mv {
        FMove::F1 | FMove::F2 => spins(twice),
        // {a, c, d} of [a a J; c d j] is (j_a^b, q_l, q_r)
        FMove::F3 => spins(&[twice[1], twice[2], twice[0]]),
    }
}

/// Largest deviation of the phased amplitudes and of the completed
/// unitaries from one reference table. Missing or extra sectors are errors.
pub fn check_table(mv: FMove, rows: &[Row], k: u32) -> Result<f64, String> {
    let t = Truncation::new(k);
    let mut listed = BTreeSet::new();
    let mut worst = 0.0f64;
    for (twice, entries) in rows {
        let ctrl = controls(mv, twice);
        let sector = ControlSector::new(SectorKind::F(mv), ctrl.clone(), t).map_err(|e| e.to_string())?;
        let gvc = gvc_complete(&sector, t).map_err(|e| e.to_string())?;
        for &(j, big, re, im) in *entries {
            let want = Complex::new(re, im);
            let got = phased_f_element(mv, &ctrl, Spin::from_twice(big), Spin::from_twice(j), t);
            worst = worst.max((got - want).norm());
            worst = worst.max((gvc.matrix[(big as usize, j as usize)] - want).norm());
        }
        // every physical transition of the sector is listed
        if entries.len() != gvc.source.len() * gvc.active_levels.len() {
            return Err(format!("k={k} {mv:?} {twice:?}: {} transitions listed", entries.len()));
        }
        listed.insert(ctrl);
    }
    let ours: BTreeSet<Vec<Spin>> = control_sectors(SectorKind::F(mv), t).into_iter().map(|s| s.controls).collect();
    if ours != listed {
        return Err(format!("k={k} {mv:?}: sector sets differ"));
    }
    Ok(worst)
}

/// `N_4(k)` and `N_3(k)` for `k = 0..=8`.
pub const N4: [u128; 9] = [1, 8, 33, 96, 225, 456, 833, 1408, 2241];
pub const N3: [u128; 9] = [1, 4, 11, 24, 45, 76, 119, 176, 249];
/// `C^(4)_p` and `C^(3)_p` for `p = 1..=9`.
pub const C4: [u128; 9] = [1, 8, 32, 88, 192, 360, 608, 952, 1408];
pub const C3: [u128; 9] = [1, 4, 10, 20, 34, 52, 74, 100, 130];

/// `n_1(m, k)` rows for `k = 0..=8`, `m = 2..=9`.
pub const N1_ROWS: [[u128; 8]; 9] = [
    [0, 0, 0, 0, 0, 0, 0, 0],
    [1, 0, 0, 0, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 0, 0, 0],
    [1, 0, 1, 0, 0, 0, 0, 0],
    [0, 1, 0, 1, 0, 0, 0, 0],
    [1, 0, 1, 0, 1, 0, 0, 0],
    [0, 1, 0, 1, 0, 1, 0, 0],
    [1, 0, 1, 0, 1, 0, 1, 0],
    [0, 1, 0, 1, 0, 1, 0, 1],
];
pub const N1: [u128; 9] = [0, 1, 1, 2, 2, 3, 3, 4, 4];
