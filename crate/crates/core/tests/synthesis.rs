mod common;

use common::tables::{C3, C4, N1, N1_ROWS, N3, N4};
use qdeform::plaquette::{phased_f_element, EvolutionParams, FMove};
use qdeform::synth::*;
use qdeform::{linalg, Register, Spin, Truncation};


#[test]
fn level_distribution_table() {
    for k in 0..=8u32 {
        let t = Truncation::new(k);
        for m in 1..=5usize {
            // n(m, k) = C_{k+3-2m}
            let p = k as i64 + 3 - 2 * m as i64;
            let (w4, w3) = if p >= 1 { (C4[p as usize - 1], C3[p as usize - 1]) } else { (0, 0) };
            assert_eq!(level_distribution(4, m, t), w4, "n4({m},{k})");
            assert_eq!(level_distribution(3, m, t), w3, "n3({m},{k})");
        }
        for m in 2..=9usize {
            assert_eq!(level_distribution(1, m, t), N1_ROWS[k as usize][m - 2], "n1({m},{k})");
        }
        assert_eq!(total_sectors(4, t), N4[k as usize]);
        assert_eq!(total_sectors(3, t), N3[k as usize]);
        assert_eq!(total_sectors(1, t), N1[k as usize]);
        assert_eq!(n4_closed(k as u64), N4[k as usize]);
        assert_eq!(n3_closed(k as u64), N3[k as usize]);
        assert_eq!(n1_closed(k as u64), N1[k as usize]);
    }
}

#[test]
fn closed_totals_match_summation() {
    for k in 0..=60u32 {
        let t = Truncation::new(k);
        assert_eq!(total_sectors(4, t), n4_closed(k as u64));
        assert_eq!(total_sectors(3, t), n3_closed(k as u64));
        assert_eq!(total_sectors(1, t), n1_closed(k as u64));
    }
}

#[test]
fn constructed_histograms_match_distribution() {
    for k in 1..=6u32 {
        let t = Truncation::new(k);
        for (kind, l) in [(SectorKind::F(FMove::F1), 4), (SectorKind::F(FMove::F2), 4), (SectorKind::F(FMove::F3), 3), (SectorKind::G, 1)] {
            let hist = active_level_histogram(kind, t).unwrap();
            for (m, &count) in hist.iter().enumerate().skip(1) {
                assert_eq!(count, level_distribution(l, m, t), "k={k} {kind:?} m={m}");
            }
            let total: u128 = hist.iter().sum();
            assert_eq!(total, total_sectors(l, t));
        }
    }
}

#[test]
fn completions_are_unitary_and_physical() {
    for k in 1..=4u32 {
        let t = Truncation::new(k);
        for mv in FMove::ALL {
            for sector in control_sectors(SectorKind::F(mv), t) {
                let u = gvc_complete(&sector, t).unwrap();
                assert!(linalg::unitarity_deviation(&u.matrix) < 1e-12);
                for big in 0..t.d() {
                    for &j in &u.source {
                        let want = phased_f_element(mv, &sector.controls, Spin::from_twice(big as u32), Spin::from_twice(j as u32), t);
                        assert!((u.matrix[(big, j)] - want).norm() < 1e-12, "k={k} {sector}");
                    }
                }
                assert!(u.source.len() == u.m() && u.m() <= t.d().div_ceil(2).max(1));
            }
        }
        for sector in control_sectors(SectorKind::G, t) {
            let u = gvc_complete(&sector, t).unwrap();
            assert!(linalg::unitarity_deviation(&u.matrix) < 1e-12);
        }
    }
}

#[test]
fn known_counts() {
    let t1 = Truncation::new(1);
    assert_eq!(gcx_count(Scheme::Nondeformed, t1).unwrap(), 62);
    assert_eq!(gcx_count(Scheme::Reduced, t1).unwrap(), 306);
    assert_eq!(gcx_count(Scheme::Baseline, t1).unwrap(), 390);
    assert_eq!(gcx_count(Scheme::ParityK1, t1).unwrap(), 48);
    let parity = emit_parity_circuit_k1(t1, EvolutionParams::with_tau(0.3)).unwrap();
    assert_eq!(parity.gcx_count(), 48);
    let aux = qdeform::Register::Aux.index();
    assert!(parity.gates.iter().all(|g| !g.registers().contains(&aux)), "no auxiliary register");
}

#[test]
fn emitted_counts_reconcile_with_formulas() {
    let p = EvolutionParams::with_tau(0.2);
    for k in 1..=6u32 {
        let t = Truncation::new(k);
        let base = emit_trotter_step(t, p, Scheme::Baseline).unwrap();
        assert_eq!(base.gcx_count() as u128, gcx_count(Scheme::Baseline, t).unwrap(), "baseline k={k}");
        let red = emit_trotter_step(t, p, Scheme::Reduced).unwrap();
        let report = ResourceReport::new(Scheme::Reduced, t).unwrap();
        assert_eq!(Some(red.gcx_count() as u128), report.constructed_total(), "reduced k={k}");
        assert!(red.gcx_count() < base.gcx_count());
    }
}

fn loglog_slope(scheme: Scheme, ks: &[u32]) -> f64 {
    let pts: Vec<(f64, f64)> =
        ks.iter().map(|&k| ((k as f64).ln(), (gcx_count(scheme, Truncation::new(k)).unwrap() as f64).ln())).collect();
    let n = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
    let (mx, my) = (sx / n, sy / n);
    pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>()
}

#[test]
fn reduced_scaling_exponent() {
    // subleading terms are large at moderate k; the exponent approaches 5
    // from below
    let moderate = loglog_slope(Scheme::Reduced, &[16, 32, 64, 128]);
    assert!((4.3..5.0).contains(&moderate), "{moderate}");
    let local = |k: u32| loglog_slope(Scheme::Reduced, &[k, 2 * k]);
    assert!(local(128) < local(1024) && local(1024) < local(4096));
    assert!((local(4096) - 5.0).abs() < 0.01, "{}", local(4096));
    assert!((loglog_slope(Scheme::Nondeformed, &[1024, 2048]) - 8.0).abs() < 0.01);
}

#[test]
fn baseline_and_nondeformed_scale_faster() {
    let ratio = |s| {
        gcx_count(s, Truncation::new(64)).unwrap() as f64 / gcx_count(s, Truncation::new(32)).unwrap() as f64
    };
    assert!(ratio(Scheme::Nondeformed).log2() > 7.5);
    assert!(ratio(Scheme::Reduced).log2() < 5.5);
}

#[test]
fn text_format_round_trip() {
    for (k, scheme) in [(1, Scheme::Reduced), (1, Scheme::ParityK1), (2, Scheme::Baseline), (2, Scheme::Reduced)] {
        let t = Truncation::new(k);
        let list = emit_trotter_step(t, EvolutionParams::with_tau(0.3), scheme).unwrap();
        let text = list.to_text().unwrap();
        let back = GateList::parse(&text).unwrap();
        assert_eq!(back, list, "k={k} {scheme}");
        assert_eq!(back.to_text().unwrap(), text);
    }
}

#[test]
fn emission_rejects_bad_requests() {
    let p = EvolutionParams::with_tau(0.1);
    assert!(emit_trotter_step(Truncation::new(0), p, Scheme::Reduced).is_err());
    assert!(emit_trotter_step(Truncation::new(1), p, Scheme::Nondeformed).is_err());
    assert!(emit_parity_circuit_k1(Truncation::new(2), p).is_err());
    let sector = &control_sectors(SectorKind::F(FMove::F1), Truncation::new(2))[0];
    let u = gvc_complete(sector, Truncation::new(2)).unwrap();
    assert!(decompose_controlled(&u, 4, Truncation::new(2)).is_err());
}

#[test]
fn antisymmetric_diagonal_uses_half_the_rotations() {
    let t = Truncation::new(4);
    let spectrum = [2.0, 1.0, 0.0, -1.0, -2.0];
    let levels = [0, 1, 2, 3, 4];
    let list = decompose_antisym_diag(&spectrum, &levels, (Register::JaT, 0), Register::JaB, t).unwrap();
    assert_eq!(list.gcx_count(), 2 * (5 / 2));
    assert!(decompose_antisym_diag(&[1.0, 0.5], &[0, 1], (Register::JaT, 0), Register::JaB, t).is_err());
}
