use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fmt;
use std::str::FromStr;

use super::{control_sectors, gvc_complete, ControlSector, Gate, GateList, GvcUnitary, SectorKind};
use crate::error::{Error, Result};
use crate::lattice::{Register, AUX_DIM};
use crate::linalg::{self, CMatrix};
use crate::plaquette::{g_move, EvolutionParams, FMove};
use crate::spin::Truncation;
use crate::Complex;

/// Decomposition strategy for one Trotter step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Undeformed reference; closed-form count only.
    Nondeformed,
    Baseline,
    Reduced,
    ParityK1,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [Scheme::Nondeformed, Scheme::Baseline, Scheme::Reduced, Scheme::ParityK1];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Nondeformed => "nondeformed",
            Scheme::Baseline => "baseline",
            Scheme::Reduced => "reduced",
            Scheme::ParityK1 => "parity-k1",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "nondeformed" => Ok(Scheme::Nondeformed),
            "baseline" => Ok(Scheme::Baseline),
            "reduced" => Ok(Scheme::Reduced),
            "parity-k1" | "parity_k1" => Ok(Scheme::ParityK1),
            _ => Err(format!("unknown scheme `{s}`")),
        }
    }
}

const AUX: usize = Register::Aux.index();

fn gcx(control: usize, control_level: usize, target: usize, levels: (usize, usize)) -> Gate {
    Gate::Gcx { control, control_level, target, levels }
}

/// Walks the auxiliary register from level 0 to level `l` exactly when every
/// control matches.
fn ladder(controls: &[(Register, usize)]) -> Vec<Gate> {
    controls.iter().enumerate().map(|(i, &(r, lev))| gcx(r.index(), lev, AUX, (i, i + 1))).collect()
}

fn local_u(target: usize, levels: &[usize], u: CMatrix) -> Option<Gate> {
    let n = levels.len();
    if n == 0 || linalg::max_abs(&(&u - linalg::identity(n))) == 0.0 {
        return None;
    }
    Some(Gate::LocalU { target, levels: levels.to_vec(), u })
}

/// Controlled `R_z(theta)` on a level pair: two single-register rotations
/// and two GCX.
fn controlled_rz(control: (usize, usize), target: usize, pair: (usize, usize), theta: f64) -> [Gate; 4] {
    [
        Gate::rz(target, pair, theta / 2.0),
        gcx(control.0, control.1, target, pair),
        Gate::rz(target, pair, -theta / 2.0),
        gcx(control.0, control.1, target, pair),
    ]
}

/// Controlled diagonal `exp(i betas[i])` on `levels[i]` and `exp(i phi)`
/// elsewhere, `phi` the mean of the betas: `m - 1` controlled rotations
/// pairing `levels[0]` with the others plus one phase on the control.
fn controlled_diag(control: (usize, usize), target: usize, levels: &[usize], betas: &[f64]) -> Vec<Gate> {
    let m = levels.len();
    let phi = betas.iter().sum::<f64>() / m as f64;
    let mut out = Vec::new();
    for i in 1..m {
        out.extend(controlled_rz(control, target, (levels[0], levels[i]), 2.0 * (betas[i] - phi)));
    }
    out.push(Gate::Phase1 { target: control.0, level: control.1, angle: phi });
    out
}

/// `U` on `levels` as `V^dagger Sigma V` with `Sigma` controlled.
fn controlled_unitary(control: (usize, usize), target: usize, levels: &[usize], u: &CMatrix) -> Result<Vec<Gate>> {
    let (lambda, q) = linalg::unitary_eigen(u)?;
    let betas: Vec<f64> = lambda.iter().map(|z| z.arg()).collect();
    let mut out = Vec::new();
    out.extend(local_u(target, levels, q.adjoint()));
    out.extend(controlled_diag(control, target, levels, &betas));
    out.extend(local_u(target, levels, q));
    Ok(out)
}

fn check_aux(sector: &ControlSector, aux_dim: usize) -> Result<()> {
    let need = sector.kind.num_controls() + 1;
    if aux_dim < need {
        return Err(Error::AuxTooSmall { have: aux_dim, need });
    }
    Ok(())
}

/// Multi-controlled completed move as an `m`-level unitary: control ladder
/// onto the auxiliary register, centering swaps, `V`, the controlled
/// diagonal, `V^dagger` and the ladder undone. The fragment uses
/// `2l + 2(m-1)` GCX plus one per centering swap.
pub fn decompose_controlled(u: &GvcUnitary, aux_dim: usize, trunc: Truncation) -> Result<GateList> {
    check_aux(&u.sector, aux_dim)?;
    let d = trunc.d();
    let target = u.sector.target().index();
    let controls = u.sector.control_pairs();
    let ell = controls.len();
    // the completion must act as the identity off the active levels once
    // the centering is undone
    let mut inv = vec![0; d];
    for (x, &y) in u.permutation.iter().enumerate() {
        inv[y] = x;
    }
    for c in (0..d).filter(|c| !u.active_levels.contains(c)) {
        for r in 0..d {
            let want = if r == c { linalg::ONE } else { linalg::ZERO };
            if (u.matrix[(r, inv[c])] - want).norm() > 1e-12 {
                return Err(Error::InvalidSector(format!("{} is not an m-level completion", u.sector)));
            }
        }
    }
    let mut out = layout(trunc, aux_dim);
    out.gates.extend(ladder(&controls));
    for (a, b) in u.transpositions() {
        out.push(gcx(AUX, ell, target, (a, b)));
    }
    out.gates.extend(controlled_unitary((AUX, ell), target, &u.active_levels, &u.centered_block())?);
    out.gates.extend(ladder(&controls).into_iter().rev());
    Ok(out)
}

/// Multi-controlled completed move diagonalized over all `d` levels:
/// `2l + 2(d-1)` GCX whatever the completion.
fn decompose_controlled_full(u: &GvcUnitary, aux_dim: usize, trunc: Truncation) -> Result<GateList> {
    check_aux(&u.sector, aux_dim)?;
    let target = u.sector.target().index();
    let controls = u.sector.control_pairs();
    let all: Vec<usize> = (0..trunc.d()).collect();
    let mut out = layout(trunc, aux_dim);
    out.gates.extend(ladder(&controls));
    out.gates.extend(controlled_unitary((AUX, controls.len()), target, &all, &u.matrix)?);
    out.gates.extend(ladder(&controls).into_iter().rev());
    Ok(out)
}

/// Controlled `exp(i spectrum)` for a spectrum antisymmetric about zero on
/// `levels` (descending order): one controlled rotation per pair
/// `(levels[i], levels[m-1-i])`, none for a middle zero, identity elsewhere.
pub fn decompose_antisym_diag(
    spectrum: &[f64],
    levels: &[usize],
    control: (Register, usize),
    target: Register,
    trunc: Truncation,
) -> Result<GateList> {
    let m = spectrum.len();
    assert_eq!(levels.len(), m, "one level per eigenvalue");
    let dev = (0..m).fold(0.0f64, |a, i| a.max((spectrum[i] + spectrum[m - 1 - i]).abs()));
    if dev > 1e-10 {
        return Err(Error::NotAntisymmetric(dev));
    }
    let mut out = GateList::plaquette(trunc);
    for i in 0..m / 2 {
        let beta = spectrum[i];
        if beta.abs() < 1e-15 {
            continue;
        }
        out.gates.extend(controlled_rz((control.0.index(), control.1), target.index(), (levels[i], levels[m - 1 - i]), -2.0 * beta));
    }
    Ok(out)
}

fn layout(trunc: Truncation, aux_dim: usize) -> GateList {
    let mut g = GateList::plaquette(trunc);
    *g.dims.last_mut().unwrap() = aux_dim;
    g
}

/// One Trotter step `exp(i tau box)` with canonical completions.
pub fn emit_trotter_step(trunc: Truncation, params: EvolutionParams, scheme: Scheme) -> Result<GateList> {
    emit_trotter_step_with(trunc, params, scheme, |s| gvc_complete(s, trunc))
}

/// [`emit_trotter_step`] with a caller-chosen completion of every F-move
/// sector.
pub fn emit_trotter_step_with(
    trunc: Truncation,
    params: EvolutionParams,
    scheme: Scheme,
    mut complete: impl FnMut(&ControlSector) -> Result<GvcUnitary>,
) -> Result<GateList> {
    if trunc.k() == 0 {
        return Err(Error::UnsupportedTruncation { k: 0, reason: "the plaquette operator vanishes" });
    }
    match scheme {
        Scheme::Baseline | Scheme::Reduced => {}
        Scheme::ParityK1 => return emit_parity_circuit_k1(trunc, params),
        Scheme::Nondeformed => {
            return Err(Error::UnsupportedTruncation { k: trunc.k(), reason: "the undeformed scheme is counted, not emitted" })
        }
    }
    let mut f = Vec::new();
    for mv in FMove::ALL {
        let mut frag = GateList::plaquette(trunc);
        for sector in control_sectors(SectorKind::F(mv), trunc) {
            let u = complete(&sector)?;
            frag.extend(match scheme {
                Scheme::Reduced => decompose_controlled(&u, AUX_DIM, trunc)?,
                _ => decompose_controlled_full(&u, AUX_DIM, trunc)?,
            });
        }
        f.push(frag);
    }
    let mut out = GateList::plaquette(trunc);
    for frag in &f {
        out.gates.extend(frag.gates.iter().cloned());
    }
    match scheme {
        Scheme::Reduced => out.extend(box_stage_interleaved(trunc, params.tau)?),
        _ => out.extend(box_stage_controlled(trunc, params.tau)?),
    }
    for frag in f.iter().rev() {
        out.extend(frag.inverse());
    }
    let out = out.lowered();
    out.validate()?;
    Ok(out)
}

/// Sector by sector: uncontrolled `G(J)`, the antisymmetric controlled
/// diagonal, `G(J)^dagger`.
fn box_stage_interleaved(trunc: Truncation, tau: f64) -> Result<GateList> {
    let mut out = GateList::plaquette(trunc);
    let jab = Register::JaB.index();
    for sector in control_sectors(SectorKind::G, trunc) {
        let big_j = sector.controls[0];
        let gm = g_move(big_j, trunc);
        let a = &gm.active;
        let block = CMatrix::from_fn(a.len(), a.len(), |r, c| gm.g.matrix()[(a[r], a[c])]);
        let spectrum: Vec<f64> = gm.spectrum.iter().map(|l| tau * l).collect();
        out.gates.extend(local_u(jab, a, block.clone()));
        out.extend(decompose_antisym_diag(&spectrum, a, (Register::JaT, big_j.level()), Register::JaB, trunc)?);
        out.gates.extend(local_u(jab, a, block.adjoint()));
    }
    Ok(out)
}

/// Controlled `G` for every sector, then every controlled diagonal, then
/// every controlled `G^dagger`, each over all `d` levels and controlled
/// directly on `J_a^t`.
fn box_stage_controlled(trunc: Truncation, tau: f64) -> Result<GateList> {
    let jab = Register::JaB.index();
    let all: Vec<usize> = (0..trunc.d()).collect();
    let mut cg = GateList::plaquette(trunc);
    let mut diag = GateList::plaquette(trunc);
    for sector in control_sectors(SectorKind::G, trunc) {
        let big_j = sector.controls[0];
        let control = (Register::JaT.index(), big_j.level());
        let gm = g_move(big_j, trunc);
        cg.gates.extend(controlled_unitary(control, jab, &all, gm.g.matrix())?);
        let betas: Vec<f64> = gm.diagonal().iter().map(|l| tau * l).collect();
        diag.gates.extend(controlled_diag(control, jab, &all, &betas));
    }
    let mut out = cg.clone();
    out.extend(diag);
    out.extend(cg.inverse());
    Ok(out)
}

fn cnot(c: Register, t: Register) -> Gate {
    gcx(c.index(), 1, t.index(), (0, 1))
}

fn phase(r: Register, angle: f64) -> Gate {
    Gate::Phase1 { target: r.index(), level: 1, angle }
}

/// `i X`, the special-unitary form of a bit flip.
fn flip(r: Register) -> Gate {
    let (z, i) = (Complex::new(0.0, 0.0), Complex::new(0.0, 1.0));
    Gate::Givens { target: r.index(), levels: (0, 1), u: [[z, i], [i, z]] }
}

/// Phase `-1` on `|111>` with six CNOTs.
fn ccz(a: Register, b: Register, c: Register) -> Vec<Gate> {
    vec![
        cnot(b, c),
        phase(c, -FRAC_PI_4),
        cnot(a, c),
        phase(c, FRAC_PI_4),
        cnot(b, c),
        phase(c, -FRAC_PI_4),
        cnot(a, c),
        phase(b, FRAC_PI_4),
        phase(c, FRAC_PI_4),
        cnot(a, b),
        phase(a, FRAC_PI_4),
        phase(b, -FRAC_PI_4),
        cnot(a, b),
    ]
}

/// Phase `-1` on `|000>`.
fn ccz_on_zeros(a: Register, b: Register, c: Register) -> Vec<Gate> {
    let pre = [flip(a), flip(b), flip(c)];
    let mut out = pre.to_vec();
    out.extend(ccz(a, b, c));
    out.extend(pre.iter().rev().map(Gate::dagger));
    out
}

/// Hand-optimized `k = 1` Trotter step built from parities: 48 GCX and no
/// auxiliary register.
///
/// The first two moves compute `2(b + d)` of each move and
/// `2(j_a^t + j_a^b)` into control registers, flip the target with a phase
/// on odd parity, and apply `-1` on the single even-parity sector that needs
/// it. Both moves come out as `-1` times the phased move on physical states,
/// which cancels against their inverses. The third move is realized up to a
/// phase that depends only on `q_l`, which commutes with the evolution and
/// also cancels.
pub fn emit_parity_circuit_k1(trunc: Truncation, params: EvolutionParams) -> Result<GateList> {
    use Register::*;
    if trunc.k() != 1 {
        return Err(Error::UnsupportedTruncation { k: trunc.k(), reason: "the parity circuit exists only for k = 1" });
    }
    let mut f12 = GateList::plaquette(trunc);
    let compute = [cnot(JaT, JlB), cnot(JaB, JrT), cnot(JaT, JaB)];
    f12.gates.extend(compute.iter().cloned());
    f12.gates.extend([phase(JlB, FRAC_PI_2), cnot(JlB, Ql), phase(JrT, FRAC_PI_2), cnot(JrT, Qr)]);
    f12.gates.extend(ccz_on_zeros(JlB, JaB, JlT));
    f12.gates.extend(ccz_on_zeros(JrT, JaB, JrB));
    f12.gates.extend(compute.iter().rev().cloned());

    let mut f3 = GateList::plaquette(trunc);
    f3.gates.extend([phase(JaB, FRAC_PI_2), cnot(JaB, Ql), cnot(Ql, JaT), cnot(JaB, Ql)]);

    let mut out = GateList::plaquette(trunc);
    out.extend(f12.clone());
    out.extend(f3.clone());
    out.extend(box_stage_interleaved(trunc, params.tau)?);
    out.extend(f3.inverse());
    out.extend(f12.inverse());
    let out = out.lowered();
    out.validate()?;
    Ok(out)
}

/// Number of sectors of each `m` among the canonical completions of a move.
pub fn active_level_histogram(kind: SectorKind, trunc: Truncation) -> Result<Vec<u128>> {
    let mut hist = vec![0u128; trunc.d() + 1];
    for s in control_sectors(kind, trunc) {
        hist[gvc_complete(&s, trunc)?.m()] += 1;
    }
    Ok(hist)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fragment_counts() {
        let t = Truncation::new(3);
        for s in control_sectors(SectorKind::F(FMove::F1), t) {
            let u = gvc_complete(&s, t).unwrap();
            let frag = decompose_controlled(&u, AUX_DIM, t).unwrap();
            assert_eq!(frag.gcx_count(), 8 + 2 * (u.m() - 1) + u.transpositions().len());
        }
        let s = &control_sectors(SectorKind::F(FMove::F3), t)[0];
        let u = gvc_complete(s, t).unwrap();
        assert!(matches!(decompose_controlled(&u, 3, t), Err(Error::AuxTooSmall { have: 3, need: 4 })));
    }

    #[test]
    fn antisym_fragment() {
        let t = Truncation::new(2);
        let ctl = (Register::JaT, 0);
        let g = decompose_antisym_diag(&[0.4, 0.0, -0.4], &[0, 1, 2], ctl, Register::JaB, t).unwrap();
        assert_eq!(g.gcx_count(), 2);
        assert!(decompose_antisym_diag(&[0.0, 0.0], &[0, 1], ctl, Register::JaB, t).unwrap().is_empty());
        assert!(decompose_antisym_diag(&[0.4, -0.3], &[0, 1], ctl, Register::JaB, t).is_err());
    }

    #[test]
    fn parity_count() {
        let g = emit_parity_circuit_k1(Truncation::new(1), EvolutionParams::with_tau(0.3)).unwrap();
        assert_eq!(g.gcx_count(), 48);
        assert!(g.gates.iter().all(|g| !g.registers().contains(&AUX)));
        assert!(emit_parity_circuit_k1(Truncation::new(2), EvolutionParams::with_tau(0.3)).is_err());
    }
}
