//! Dense mixed-dimension qudit simulator used as the circuit oracle.

use crate::error::{Error, Result};
use crate::gauge::enumerate_physical;
use crate::lattice::{LinkAssignment, Register};
use crate::linalg::{self, CMatrix, RMatrix, ONE, ZERO};
use crate::plaquette::{external_of, plaquette_block, EvolutionParams};
use crate::spin::{Spin, Truncation};
use crate::synth::{Gate, GateList};
use crate::Complex;

/// Largest total dimension for which [`circuit_unitary`] builds a dense
/// matrix.
pub const DENSE_GUARD: usize = 4096;

/// Ordered register dimensions; basis indices are row-major with the first
/// register most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegisterSpec {
    dims: Vec<usize>,
    strides: Vec<usize>,
}

impl RegisterSpec {
    pub fn new(dims: Vec<usize>) -> Self {
        assert!(dims.iter().all(|&d| d >= 1), "register dimensions must be positive");
        let mut strides = vec![1; dims.len()];
        for r in (0..dims.len().saturating_sub(1)).rev() {
            strides[r] = strides[r + 1] * dims[r + 1];
        }
        Self { dims, strides }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn stride(&self, r: usize) -> usize {
        self.strides[r]
    }

    pub fn digit(&self, index: usize, r: usize) -> usize {
        index / self.strides[r] % self.dims[r]
    }

    pub fn index_of(&self, digits: &[usize]) -> usize {
        assert_eq!(digits.len(), self.dims.len());
        digits.iter().zip(&self.strides).map(|(d, s)| d * s).sum()
    }
}

/// Several state vectors evolved together, stored basis-index major so a
/// gate touches each pair of rows once for all columns.
#[derive(Clone, Debug)]
pub struct StateBatch {
    spec: RegisterSpec,
    cols: usize,
    data: Vec<Complex>,
}

impl StateBatch {
    pub fn zeros(spec: RegisterSpec, cols: usize) -> Self {
        let n = spec.total();
        Self { spec, cols, data: vec![ZERO; n * cols] }
    }

    /// Column `c` is the basis state `indices[c]`.
    pub fn basis(spec: RegisterSpec, indices: &[usize]) -> Self {
        let mut b = Self::zeros(spec, indices.len());
        for (c, &i) in indices.iter().enumerate() {
            b.data[i * b.cols + c] = ONE;
        }
        b
    }

    pub fn spec(&self) -> &RegisterSpec {
        &self.spec
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn amp(&self, index: usize, col: usize) -> Complex {
        self.data[index * self.cols + col]
    }

    pub fn norm_sqr(&self, col: usize) -> f64 {
        (0..self.spec.total()).map(|i| self.amp(i, col).norm_sqr()).sum()
    }

    fn apply(&mut self, op: &Op) {
        let spec = &self.spec;
        let cols = self.cols;
        let n = spec.total();
        match op {
            Op::Swap { ctrl, t, l0, l1 } => {
                let shift = (*l1 as isize - *l0 as isize) * spec.stride(*t) as isize;
                for i in 0..n {
                    if spec.digit(i, *t) != *l0 || ctrl.is_some_and(|(c, cl)| spec.digit(i, c) != cl) {
                        continue;
                    }
                    let j = (i as isize + shift) as usize;
                    for c in 0..cols {
                        self.data.swap(i * cols + c, j * cols + c);
                    }
                }
            }
            Op::Rot { t, l0, l1, u } => {
                let shift = (*l1 as isize - *l0 as isize) * spec.stride(*t) as isize;
                for i in 0..n {
                    if spec.digit(i, *t) != *l0 {
                        continue;
                    }
                    let j = (i as isize + shift) as usize;
                    for c in 0..cols {
                        let (a, b) = (self.data[i * cols + c], self.data[j * cols + c]);
                        self.data[i * cols + c] = u[0][0] * a + u[0][1] * b;
                        self.data[j * cols + c] = u[1][0] * a + u[1][1] * b;
                    }
                }
            }
            Op::Diag { t, phases } => {
                for i in 0..n {
                    let z = phases[spec.digit(i, *t)];
                    if z != ONE {
                        for c in 0..cols {
                            self.data[i * cols + c] *= z;
                        }
                    }
                }
            }
            Op::Global(z) => {
                for v in self.data.iter_mut() {
                    *v *= z;
                }
            }
        }
    }
}

/// Gate action on a concrete layout.
#[derive(Clone, Debug)]
enum Op {
    Swap { ctrl: Option<(usize, usize)>, t: usize, l0: usize, l1: usize },
    Rot { t: usize, l0: usize, l1: usize, u: [[Complex; 2]; 2] },
    Diag { t: usize, phases: Vec<Complex> },
    Global(Complex),
}

/// Where a register of the circuit lives in the simulated layout.
#[derive(Clone, Copy, Debug)]
enum Slot {
    Live(usize),
    Fixed(usize),
}

/// Translate a gate; `None` when it cannot be applied with some registers
/// held fixed.
fn compile(gate: &Gate, slots: &[Slot]) -> Option<Vec<Op>> {
    let live = |r: usize| match slots[r] {
        Slot::Live(x) => Some(x),
        Slot::Fixed(_) => None,
    };
    Some(match gate {
        Gate::Gcx { control, control_level, target, levels } => {
            let t = live(*target)?;
            let ctrl = match slots[*control] {
                Slot::Live(c) => Some((c, *control_level)),
                Slot::Fixed(v) if v == *control_level => None,
                Slot::Fixed(_) => return Some(Vec::new()),
            };
            vec![Op::Swap { ctrl, t, l0: levels.0, l1: levels.1 }]
        }
        Gate::Givens { target, levels, u } => vec![Op::Rot { t: live(*target)?, l0: levels.0, l1: levels.1, u: *u }],
        Gate::Diag { target, phases } => {
            let z: Vec<Complex> = phases.iter().map(|&p| Complex::from_polar(1.0, p)).collect();
            match slots[*target] {
                Slot::Live(t) => vec![Op::Diag { t, phases: z }],
                Slot::Fixed(v) => vec![Op::Global(z[v])],
            }
        }
        Gate::Phase1 { target, level, angle } => {
            let z = Complex::from_polar(1.0, *angle);
            match slots[*target] {
                Slot::Live(t) => vec![Op::Diag { t, phases: phase_vector(*level, z) }],
                Slot::Fixed(v) if v == *level => vec![Op::Global(z)],
                Slot::Fixed(_) => Vec::new(),
            }
        }
        // callers lower dense blocks first
        Gate::LocalU { .. } => return None,
    })
}

// padded with ones to the register dimension by `compile_all`
fn phase_vector(level: usize, z: Complex) -> Vec<Complex> {
    let mut v = vec![ONE; level + 1];
    v[level] = z;
    v
}

fn compile_all(list: &GateList, slots: &[Slot], dims: &[usize]) -> Option<Vec<Op>> {
    let mut ops = Vec::new();
    for g in &list.gates {
        for mut op in compile(g, slots)? {
            if let Op::Diag { t, phases } = &mut op {
                phases.resize(dims[*t], ONE);
            }
            ops.push(op);
        }
    }
    Some(ops)
}

fn check_gate(gate: &Gate, dims: &[usize]) -> Result<()> {
    GateList { dims: dims.to_vec(), gates: vec![gate.clone()] }.validate()
}

/// Apply one gate to every column of the batch.
pub fn apply_gate(batch: &mut StateBatch, gate: &Gate) -> Result<()> {
    let dims = batch.spec.dims().to_vec();
    check_gate(gate, &dims)?;
    let lowered = GateList { dims: dims.clone(), gates: vec![gate.clone()] }.lowered();
    let slots: Vec<Slot> = (0..dims.len()).map(Slot::Live).collect();
    for op in compile_all(&lowered, &slots, &dims).expect("all registers live") {
        batch.apply(&op);
    }
    Ok(())
}

/// Apply a whole circuit.
pub fn apply_circuit(batch: &mut StateBatch, list: &GateList) -> Result<()> {
    if list.dims != batch.spec.dims() {
        return Err(Error::LayoutMismatch(format!("circuit {:?} vs state {:?}", list.dims, batch.spec.dims())));
    }
    list.validate()?;
    let lowered = list.lowered();
    let slots: Vec<Slot> = (0..list.dims.len()).map(Slot::Live).collect();
    for op in compile_all(&lowered, &slots, &list.dims).expect("all registers live") {
        batch.apply(&op);
    }
    Ok(())
}

/// Dense unitary of a circuit, checked unitary to `1e-10`.
pub fn circuit_unitary(list: &GateList) -> Result<CMatrix> {
    let spec = RegisterSpec::new(list.dims.clone());
    let n = spec.total();
    if n > DENSE_GUARD {
        return Err(Error::DimensionGuard { dim: n, max: DENSE_GUARD });
    }
    let idx: Vec<usize> = (0..n).collect();
    let mut batch = StateBatch::basis(spec, &idx);
    apply_circuit(&mut batch, list)?;
    let u = CMatrix::from_fn(n, n, |r, c| batch.amp(r, c));
    linalg::check_unitary(&u, "circuit", 1e-10)?;
    Ok(u)
}

/// Physical basis states of the deformed theory with the auxiliary
/// register at level 0, in lexicographic order.
#[derive(Clone, Debug)]
pub struct PhysicalProjector {
    pub trunc: Truncation,
    pub aux_dim: usize,
    pub states: Vec<LinkAssignment>,
}

impl PhysicalProjector {
    pub fn new(trunc: Truncation, aux_dim: usize) -> Result<Self> {
        Ok(Self { trunc, aux_dim, states: enumerate_physical(trunc, true)? })
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    /// Full-space basis index of every column.
    pub fn columns(&self) -> Vec<usize> {
        self.states.iter().map(|s| s.basis_index(self.trunc) * self.aux_dim).collect()
    }

    /// Dense isometry, guarded like [`circuit_unitary`].
    pub fn isometry(&self) -> Result<CMatrix> {
        let n = self.trunc.d().pow(8) * self.aux_dim;
        if n > DENSE_GUARD {
            return Err(Error::DimensionGuard { dim: n, max: DENSE_GUARD });
        }
        let mut p = CMatrix::zeros(n, self.dim());
        for (c, r) in self.columns().into_iter().enumerate() {
            p[(r, c)] = ONE;
        }
        Ok(p)
    }
}

fn sector_index(external: [Spin; 4], d: usize) -> usize {
    external.iter().fold(0, |acc, s| acc * d + s.level())
}

/// Exact `exp(i tau box)` stored block by block over the external links.
#[derive(Clone, Debug)]
pub struct ReferenceEvolution {
    pub trunc: Truncation,
    pub tau: f64,
    blocks: Vec<CMatrix>,
}

impl ReferenceEvolution {
    /// Block of one external sector, over the active registers.
    pub fn block(&self, external: [Spin; 4]) -> &CMatrix {
        &self.blocks[sector_index(external, self.trunc.d())]
    }

    /// `<bra| exp(i tau box) |ket>`.
    pub fn element(&self, bra: &LinkAssignment, ket: &LinkAssignment) -> Complex {
        if !bra.same_external(ket) {
            return ZERO;
        }
        let t = self.trunc;
        self.block(external_of(ket))[(crate::plaquette::active_index(bra, t), crate::plaquette::active_index(ket, t))]
    }

    /// Dense `d^8 x d^8` matrix, guarded like [`circuit_unitary`].
    pub fn dense(&self) -> Result<CMatrix> {
        let n = self.trunc.d().pow(8);
        if n > DENSE_GUARD {
            return Err(Error::DimensionGuard { dim: n, max: DENSE_GUARD });
        }
        let states: Vec<LinkAssignment> = (0..n).map(|i| LinkAssignment::from_basis_index(i, self.trunc)).collect();
        Ok(CMatrix::from_fn(n, n, |r, c| self.element(&states[r], &states[c])))
    }
}

/// Exact evolution by eigendecomposition of every (Hermitian-checked)
/// sector block of the plaquette operator.
pub fn reference_evolution(trunc: Truncation, params: EvolutionParams) -> Result<ReferenceEvolution> {
    let d = trunc.d();
    let blocks = (0..d.pow(4))
        .map(|i| {
            let external = crate::plaquette::external_sector(i, d);
            Ok(exp_block(&plaquette_block(trunc, external)?, external, trunc, params.tau))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ReferenceEvolution { trunc, tau: params.tau, blocks })
}

/// `exp(i tau H)` for one sector block. The operator vanishes on rows and
/// columns of unphysical states, so only the physical sub-block is
/// exponentiated when that holds.
fn exp_block(h: &RMatrix, external: [Spin; 4], trunc: Truncation, tau: f64) -> CMatrix {
    let n = h.nrows();
    let phys: Vec<usize> =
        (0..n).filter(|&i| crate::plaquette::embed_active(i, external, trunc).is_physical(trunc, true)).collect();
    let mut inside = vec![false; n];
    for &i in &phys {
        inside[i] = true;
    }
    let leaks = (0..n).any(|r| (0..n).any(|c| !(inside[r] && inside[c]) && h[(r, c)] != 0.0));
    if leaks {
        return linalg::expm_i_symmetric(h, tau);
    }
    let sub = RMatrix::from_fn(phys.len(), phys.len(), |r, c| h[(phys[r], phys[c])]);
    let e = linalg::expm_i_symmetric(&sub, tau);
    let mut out = linalg::identity(n);
    for (r, &pr) in phys.iter().enumerate() {
        for (c, &pc) in phys.iter().enumerate() {
            out[(pr, pc)] = e[(r, c)];
        }
    }
    out
}

/// Result of running a circuit on every physical basis state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Comparison {
    /// Largest column 2-norm of the difference on physical rows.
    pub max_deviation: f64,
    /// Largest population left outside auxiliary level 0.
    pub aux_leakage: f64,
    /// Largest population on unphysical link states with auxiliary level 0.
    pub unphysical_leakage: f64,
    pub columns: usize,
}

impl Comparison {
    pub fn passes(&self, tol: f64, aux_tol: f64) -> bool {
        self.max_deviation < tol && self.aux_leakage < aux_tol
    }
}

#[derive(Default)]
struct Tally {
    dev: f64,
    aux: f64,
    unphys: f64,
}

impl Tally {
    fn merge(&mut self, dev: f64, aux: f64, unphys: f64) {
        self.dev = self.dev.max(dev.sqrt());
        self.aux = self.aux.max(aux);
        self.unphys = self.unphys.max(unphys);
    }
}

/// Compare a circuit with the exact evolution on the physical subspace.
///
/// External links only ever act as controls in the schemes built here, so
/// each external sector is simulated on its own five-register block. A
/// circuit that acts on external links is simulated on the full space.
pub fn compare_on_physical(circuit: &GateList, reference: &ReferenceEvolution, trunc: Truncation) -> Result<Comparison> {
    let d = trunc.d();
    if circuit.dims.len() != 9 || circuit.dims[..8].iter().any(|&x| x != d) || reference.trunc != trunc {
        return Err(Error::LayoutMismatch(format!("circuit registers {:?} for k={}", circuit.dims, trunc.k())));
    }
    circuit.validate()?;
    let aux_dim = circuit.dims[8];
    let lowered = circuit.lowered();
    let physical = enumerate_physical(trunc, true)?;
    let mut tally = Tally::default();

    let mut by_sector: Vec<Vec<LinkAssignment>> = vec![Vec::new(); d.pow(4)];
    for s in &physical {
        by_sector[sector_index(external_of(s), d)].push(*s);
    }
    let block_dims = vec![d, d, d, d, aux_dim];
    let blocked = by_sector.iter().enumerate().all(|(i, states)| {
        states.is_empty() || compile_all(&lowered, &slots_for(crate::plaquette::external_sector(i, d)), &block_dims).is_some()
    });

    if blocked {
        for (i, states) in by_sector.iter().enumerate() {
            if states.is_empty() {
                continue;
            }
            let external = crate::plaquette::external_sector(i, d);
            let ops = compile_all(&lowered, &slots_for(external), &block_dims).expect("checked above");
            let spec = RegisterSpec::new(block_dims.clone());
            let starts: Vec<usize> = states.iter().map(|s| crate::plaquette::active_index(s, trunc) * aux_dim).collect();
            let mut batch = StateBatch::basis(spec, &starts);
            for op in &ops {
                batch.apply(op);
            }
            let block = reference.block(external);
            for (c, ket) in states.iter().enumerate() {
                let col = crate::plaquette::active_index(ket, trunc);
                let (mut dev, mut aux, mut unphys) = (0.0, 0.0, 0.0);
                for row in 0..batch.spec.total() {
                    let z = batch.amp(row, c);
                    if row % aux_dim != 0 {
                        aux += z.norm_sqr();
                        continue;
                    }
                    let a = row / aux_dim;
                    let bra = crate::plaquette::embed_active(a, external, trunc);
                    if bra.is_physical(trunc, true) {
                        dev += (z - block[(a, col)]).norm_sqr();
                    } else {
                        unphys += z.norm_sqr();
                    }
                }
                tally.merge(dev, aux, unphys);
            }
        }
    } else {
        let spec = RegisterSpec::new(circuit.dims.clone());
        let starts: Vec<usize> = physical.iter().map(|s| s.basis_index(trunc) * aux_dim).collect();
        let mut batch = StateBatch::basis(spec, &starts);
        apply_circuit(&mut batch, circuit)?;
        let n_links = d.pow(8);
        for (c, ket) in physical.iter().enumerate() {
            let (mut dev, mut aux, mut unphys) = (0.0, 0.0, 0.0);
            for link in 0..n_links {
                let bra = LinkAssignment::from_basis_index(link, trunc);
                let phys = bra.is_physical(trunc, true);
                for x in 0..aux_dim {
                    let z = batch.amp(link * aux_dim + x, c);
                    if x != 0 {
                        aux += z.norm_sqr();
                    } else if phys {
                        dev += (z - reference.element(&bra, ket)).norm_sqr();
                    } else {
                        unphys += z.norm_sqr();
                    }
                }
            }
            tally.merge(dev, aux, unphys);
        }
    }
    Ok(Comparison { max_deviation: tally.dev, aux_leakage: tally.aux, unphysical_leakage: tally.unphys, columns: physical.len() })
}

fn slots_for(external: [Spin; 4]) -> Vec<Slot> {
    let mut slots = vec![Slot::Fixed(0); 9];
    for (r, s) in Register::EXTERNAL.iter().zip(external) {
        slots[r.index()] = Slot::Fixed(s.level());
    }
    for (i, r) in Register::ACTIVE.iter().enumerate() {
        slots[r.index()] = Slot::Live(i);
    }
    slots[Register::Aux.index()] = Slot::Live(4);
    slots
}
