use super::{ControlSector, SectorKind};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, ZERO};
use crate::plaquette::{g_move, phased_f_element};
use crate::spin::{Spin, Truncation};

/// Unitary completion of one control sector of a move.
#[derive(Clone, Debug)]
pub struct GvcUnitary {
    pub sector: ControlSector,
    /// `d x d` unitary on the target register.
    pub matrix: CMatrix,
    /// Physical target levels before the move, sorted.
    pub source: Vec<usize>,
    /// Physical target levels after the move, sorted. These are also the
    /// levels the centered block mixes.
    pub active_levels: Vec<usize>,
    /// Centering permutation: level `x` is sent to `permutation[x]`.
    pub permutation: Vec<usize>,
}

impl GvcUnitary {
    /// Number of actively mixed levels.
    pub fn m(&self) -> usize {
        self.active_levels.len()
    }

    /// Centering as a sequence of level transpositions, in application
    /// order.
    pub fn transpositions(&self) -> Vec<(usize, usize)> {
        cycle_transpositions(&self.permutation)
    }

    /// The centered block `U P^-1` restricted to the active levels.
    pub fn centered_block(&self) -> CMatrix {
        let mut inv = vec![0; self.permutation.len()];
        for (x, &y) in self.permutation.iter().enumerate() {
            inv[y] = x;
        }
        let a = &self.active_levels;
        CMatrix::from_fn(a.len(), a.len(), |r, c| self.matrix[(a[r], inv[a[c]])])
    }

    /// Another admissible completion: `U (I_S + W)` with `W` a unitary on the
    /// levels outside the physical source set, in increasing level order.
    pub fn with_completion(&self, w: &CMatrix) -> Result<GvcUnitary> {
        let d = self.matrix.nrows();
        let rest: Vec<usize> = (0..d).filter(|l| !self.source.contains(l)).collect();
        if w.nrows() != rest.len() || w.ncols() != rest.len() {
            return Err(Error::InvalidSector(format!("completion block must be {0}x{0}", rest.len())));
        }
        linalg::check_unitary(w, "completion block", 1e-10)?;
        let mut e = linalg::identity(d);
        for (r, &lr) in rest.iter().enumerate() {
            for (c, &lc) in rest.iter().enumerate() {
                e[(lr, lc)] = w[(r, c)];
            }
        }
        Ok(GvcUnitary { matrix: &self.matrix * e, ..self.clone() })
    }
}

/// Permutation sending sorted `source` onto sorted `target` and the sorted
/// complement of `source` onto the sorted complement of `target`, together
/// with its transposition factors.
pub(crate) fn centering_permutation(source: &[usize], target: &[usize], d: usize) -> (Vec<usize>, Vec<(usize, usize)>) {
    let mut perm = vec![0; d];
    for (s, t) in source.iter().zip(target) {
        perm[*s] = *t;
    }
    let s_rest = (0..d).filter(|l| !source.contains(l));
    let t_rest = (0..d).filter(|l| !target.contains(l));
    for (s, t) in s_rest.zip(t_rest) {
        perm[s] = t;
    }
    let swaps = cycle_transpositions(&perm);
    (perm, swaps)
}

/// Transpositions whose successive application moves every level `x` to
/// `perm[x]`.
fn cycle_transpositions(perm: &[usize]) -> Vec<(usize, usize)> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut x = perm[start];
        while x != start {
            seen[x] = true;
            cycle.push(x);
            x = perm[x];
        }
        // x0 -> x1 -> ... -> x0: swapping (x0, x1), (x0, x2), ... in that
        // order realizes the cycle
        for &y in &cycle[1..] {
            out.push((start.min(y), start.max(y)));
        }
    }
    out
}

/// Canonical completion of one control sector.
///
/// Physical amplitudes are placed on `(target, source)` entries, sorted
/// source levels are paired with sorted target levels by a permutation
/// acting first, and the complement is completed by the identity. G sectors
/// return the diagonalizing move itself.
pub fn gvc_complete(sector: &ControlSector, trunc: Truncation) -> Result<GvcUnitary> {
    let d = trunc.d();
    let source = sector.source_levels(trunc);
    let target = sector.target_levels(trunc);
    if source.is_empty() || source.len() != target.len() {
        return Err(Error::InvalidSector(format!("{sector} maps {} levels onto {}", source.len(), target.len())));
    }
    let (permutation, _) = centering_permutation(&source, &target, d);
    let matrix = match sector.kind {
        SectorKind::G => g_move(sector.controls[0], trunc).g.into_matrix(),
        SectorKind::F(mv) => {
            let mut b = linalg::identity(d);
            for &t in &target {
                for (j, &s) in source.iter().enumerate() {
                    let amp = phased_f_element(mv, &sector.controls, level_spin(t), level_spin(s), trunc);
                    b[(t, target[j])] = amp;
                }
            }
            // U = B P
            let mut u = CMatrix::from_element(d, d, ZERO);
            for x in 0..d {
                for r in 0..d {
                    u[(r, x)] = b[(r, permutation[x])];
                }
            }
            u
        }
    };
    linalg::check_unitary(&matrix, "completed F-move", 1e-12)?;
    Ok(GvcUnitary { sector: sector.clone(), matrix, source, active_levels: target, permutation })
}

fn level_spin(level: usize) -> Spin {
    Spin::from_twice(level as u32)
}
