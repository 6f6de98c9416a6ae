use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::lattice::AUX_DIM;
use crate::linalg::{self, CMatrix};
use crate::spin::Truncation;
use crate::Complex;

/// Version written in the gate-list header.
pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    /// Swap levels `levels` of `target` when `control` is at `control_level`.
    Gcx { control: usize, control_level: usize, target: usize, levels: (usize, usize) },
    /// 2x2 unitary on levels `levels` of `target`, rows and columns in the
    /// order of the pair.
    Givens { target: usize, levels: (usize, usize), u: [[Complex; 2]; 2] },
    /// `exp(i phases[l])` on level `l`.
    Diag { target: usize, phases: Vec<f64> },
    /// Dense unitary on a subset of levels. Lowered before serialization.
    LocalU { target: usize, levels: Vec<usize>, u: CMatrix },
    /// `exp(i angle)` on one level.
    Phase1 { target: usize, level: usize, angle: f64 },
}

impl Gate {
    pub fn is_gcx(&self) -> bool {
        matches!(self, Gate::Gcx { .. })
    }

    /// `R_z(theta) = exp(-i theta Z / 2)` on a level pair.
    pub fn rz(target: usize, levels: (usize, usize), theta: f64) -> Gate {
        let z = Complex::new(0.0, 0.0);
        Gate::Givens {
            target,
            levels,
            u: [[Complex::from_polar(1.0, -theta / 2.0), z], [z, Complex::from_polar(1.0, theta / 2.0)]],
        }
    }

    pub fn dagger(&self) -> Gate {
        match self {
            Gate::Gcx { .. } => self.clone(),
            Gate::Givens { target, levels, u } => Gate::Givens {
                target: *target,
                levels: *levels,
                u: [[u[0][0].conj(), u[1][0].conj()], [u[0][1].conj(), u[1][1].conj()]],
            },
            Gate::Diag { target, phases } => Gate::Diag { target: *target, phases: phases.iter().map(|p| -p).collect() },
            Gate::LocalU { target, levels, u } => Gate::LocalU { target: *target, levels: levels.clone(), u: u.adjoint() },
            Gate::Phase1 { target, level, angle } => Gate::Phase1 { target: *target, level: *level, angle: -angle },
        }
    }

    /// Registers the gate touches.
    pub fn registers(&self) -> Vec<usize> {
        match self {
            Gate::Gcx { control, target, .. } => vec![*control, *target],
            Gate::Givens { target, .. } | Gate::Diag { target, .. } | Gate::LocalU { target, .. } | Gate::Phase1 { target, .. } => {
                vec![*target]
            }
        }
    }

    fn check(&self, dims: &[usize]) -> std::result::Result<(), String> {
        let dim = |r: usize| dims.get(r).copied().ok_or_else(|| format!("register {r} is not declared"));
        let pair = |r: usize, (a, b): (usize, usize)| -> std::result::Result<(), String> {
            let n = dim(r)?;
            if a >= n || b >= n || a == b {
                return Err(format!("level pair ({a},{b}) invalid for dimension {n}"));
            }
            Ok(())
        };
        match self {
            Gate::Gcx { control, control_level, target, levels } => {
                if control == target {
                    return Err("control and target coincide".into());
                }
                if *control_level >= dim(*control)? {
                    return Err(format!("control level {control_level} out of range"));
                }
                pair(*target, *levels)
            }
            Gate::Givens { target, levels, u } => {
                pair(*target, *levels)?;
                let m = CMatrix::from_fn(2, 2, |r, c| u[r][c]);
                if linalg::unitarity_deviation(&m) > 1e-10 {
                    return Err("Givens block is not unitary".into());
                }
                Ok(())
            }
            Gate::Diag { target, phases } => {
                if phases.len() != dim(*target)? {
                    return Err(format!("{} phases for a register of dimension {}", phases.len(), dim(*target)?));
                }
                Ok(())
            }
            Gate::LocalU { target, levels, u } => {
                let n = dim(*target)?;
                if levels.iter().any(|&l| l >= n) || u.nrows() != levels.len() || u.ncols() != levels.len() {
                    return Err("local unitary does not fit its levels".into());
                }
                if linalg::unitarity_deviation(u) > 1e-10 {
                    return Err("local unitary is not unitary".into());
                }
                Ok(())
            }
            Gate::Phase1 { target, level, .. } => {
                if *level >= dim(*target)? {
                    return Err(format!("level {level} out of range"));
                }
                Ok(())
            }
        }
    }
}

/// Ordered gate sequence over declared registers.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GateList {
    pub dims: Vec<usize>,
    pub gates: Vec<Gate>,
}

impl GateList {
    pub fn new(dims: Vec<usize>) -> Self {
        Self { dims, gates: Vec::new() }
    }

    /// Eight link registers of dimension `d` followed by the auxiliary
    /// register.
    pub fn plaquette(trunc: Truncation) -> Self {
        let mut dims = vec![trunc.d(); 8];
        dims.push(AUX_DIM);
        Self::new(dims)
    }

    pub fn push(&mut self, g: Gate) {
        self.gates.push(g);
    }

    pub fn extend(&mut self, other: GateList) {
        self.gates.extend(other.gates);
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn gcx_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_gcx()).count()
    }

    /// Reverse order, each gate replaced by its adjoint.
    pub fn inverse(&self) -> GateList {
        GateList { dims: self.dims.clone(), gates: self.gates.iter().rev().map(Gate::dagger).collect() }
    }

    pub fn validate(&self) -> Result<()> {
        for (index, g) in self.gates.iter().enumerate() {
            g.check(&self.dims).map_err(|reason| Error::InvalidGate { index, reason })?;
        }
        Ok(())
    }

    /// Replace every dense local unitary by a diagonal followed by Givens
    /// rotations. Identity pieces are dropped.
    pub fn lowered(&self) -> GateList {
        let mut out = GateList::new(self.dims.clone());
        for g in &self.gates {
            match g {
                Gate::LocalU { target, levels, u } => {
                    let (phases, rots) = linalg::two_level_decomposition(u);
                    let angles: Vec<f64> = phases.iter().map(|z| z.arg()).collect();
                    if angles.iter().any(|a| a.abs() > 1e-15) {
                        let mut full = vec![0.0; self.dims[*target]];
                        for (l, a) in levels.iter().zip(angles) {
                            full[*l] = a;
                        }
                        out.push(Gate::Diag { target: *target, phases: full });
                    }
                    for r in rots {
                        out.push(Gate::Givens { target: *target, levels: (levels[r.l0], levels[r.l1]), u: r.u });
                    }
                }
                other => out.push(other.clone()),
            }
        }
        out
    }

    /// Serialize. Dense local unitaries have no text form and must be
    /// lowered first.
    pub fn to_text(&self) -> Result<String> {
        self.validate()?;
        let mut s = String::new();
        let _ = writeln!(s, "QDEFCIRC {FORMAT_VERSION}");
        let dims: Vec<String> = self.dims.iter().map(|d| d.to_string()).collect();
        let _ = writeln!(s, "REGS {}", dims.join(" "));
        for (index, g) in self.gates.iter().enumerate() {
            match g {
                Gate::Gcx { control, control_level, target, levels } => {
                    let _ = writeln!(s, "GCX c={control} cl={control_level} t={target} x={},{}", levels.0, levels.1);
                }
                Gate::Givens { target, levels, u } => {
                    let nums: Vec<String> = u.iter().flatten().flat_map(|z| [num(z.re), num(z.im)]).collect();
                    let _ = writeln!(s, "GIVENS t={target} l={},{} u={}", levels.0, levels.1, nums.join(","));
                }
                Gate::Diag { target, phases } => {
                    let nums: Vec<String> = phases.iter().map(|&p| num(p)).collect();
                    let _ = writeln!(s, "DIAG t={target} p={}", nums.join(","));
                }
                Gate::Phase1 { target, level, angle } => {
                    let _ = writeln!(s, "PHASE1 t={target} l={level} p={}", num(*angle));
                }
                Gate::LocalU { .. } => {
                    return Err(Error::InvalidGate { index, reason: "dense local unitaries must be lowered before writing".into() })
                }
            }
        }
        Ok(s)
    }

    /// Strict parser for [`GateList::to_text`]; blank lines and `#` comments
    /// are allowed, anything else unknown is an error.
    pub fn parse(text: &str) -> Result<GateList> {
        let mut dims: Option<Vec<usize>> = None;
        let mut seen_header = false;
        let mut gates = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let err = |message: String| Error::Parse { line: line_no, message };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut words = line.split_whitespace();
            let head = words.next().unwrap_or("");
            let rest: Vec<&str> = words.collect();
            if !seen_header {
                if head != "QDEFCIRC" || rest.len() != 1 {
                    return Err(err("expected header `QDEFCIRC <version>`".into()));
                }
                let v: u32 = rest[0].parse().map_err(|_| err(format!("bad version `{}`", rest[0])))?;
                if v != FORMAT_VERSION {
                    return Err(err(format!("unsupported format version {v}")));
                }
                seen_header = true;
                continue;
            }
            if dims.is_none() {
                if head != "REGS" || rest.is_empty() {
                    return Err(err("expected `REGS <dims>`".into()));
                }
                let d = rest.iter().map(|w| w.parse::<usize>().map_err(|_| err(format!("bad dimension `{w}`"))));
                dims = Some(d.collect::<Result<Vec<_>>>()?);
                continue;
            }
            let fields = Fields::new(&rest).map_err(&err)?;
            let gate = match head {
                "GCX" => {
                    fields.expect(&["c", "cl", "t", "x"]).map_err(&err)?;
                    Gate::Gcx {
                        control: fields.usize("c").map_err(&err)?,
                        control_level: fields.usize("cl").map_err(&err)?,
                        target: fields.usize("t").map_err(&err)?,
                        levels: fields.pair("x").map_err(&err)?,
                    }
                }
                "GIVENS" => {
                    fields.expect(&["t", "l", "u"]).map_err(&err)?;
                    let v = fields.floats("u").map_err(&err)?;
                    if v.len() != 8 {
                        return Err(err(format!("GIVENS needs 8 numbers, got {}", v.len())));
                    }
                    let c = |i: usize| Complex::new(v[2 * i], v[2 * i + 1]);
                    Gate::Givens {
                        target: fields.usize("t").map_err(&err)?,
                        levels: fields.pair("l").map_err(&err)?,
                        u: [[c(0), c(1)], [c(2), c(3)]],
                    }
                }
                "DIAG" => {
                    fields.expect(&["t", "p"]).map_err(&err)?;
                    Gate::Diag { target: fields.usize("t").map_err(&err)?, phases: fields.floats("p").map_err(&err)? }
                }
                "PHASE1" => {
                    fields.expect(&["t", "l", "p"]).map_err(&err)?;
                    let p = fields.floats("p").map_err(&err)?;
                    if p.len() != 1 {
                        return Err(err("PHASE1 takes one angle".into()));
                    }
                    Gate::Phase1 { target: fields.usize("t").map_err(&err)?, level: fields.usize("l").map_err(&err)?, angle: p[0] }
                }
                other => return Err(err(format!("unknown directive `{other}`"))),
            };
            gates.push(gate);
        }
        let dims = dims.ok_or(Error::Parse { line: 0, message: "missing header or REGS line".into() })?;
        let list = GateList { dims, gates };
        list.validate()?;
        Ok(list)
    }
}

/// 17 significant digits, enough to read back the same double.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

struct Fields<'a> {
    pairs: Vec<(&'a str, &'a str)>,
}

impl<'a> Fields<'a> {
    fn new(words: &[&'a str]) -> std::result::Result<Self, String> {
        let pairs = words
            .iter()
            .map(|w| w.split_once('=').ok_or_else(|| format!("expected key=value, got `{w}`")))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(Self { pairs })
    }

    fn expect(&self, keys: &[&str]) -> std::result::Result<(), String> {
        let got: Vec<&str> = self.pairs.iter().map(|p| p.0).collect();
        if got != keys {
            return Err(format!("expected fields {keys:?}, got {got:?}"));
        }
        Ok(())
    }

    fn get(&self, key: &str) -> &'a str {
        self.pairs.iter().find(|p| p.0 == key).map(|p| p.1).unwrap_or("")
    }

    fn usize(&self, key: &str) -> std::result::Result<usize, String> {
        self.get(key).parse().map_err(|_| format!("bad integer for `{key}`"))
    }

    fn pair(&self, key: &str) -> std::result::Result<(usize, usize), String> {
        let (a, b) = self.get(key).split_once(',').ok_or_else(|| format!("`{key}` needs two levels"))?;
        let p = |s: &str| s.parse::<usize>().map_err(|_| format!("bad level in `{key}`"));
        Ok((p(a)?, p(b)?))
    }

    fn floats(&self, key: &str) -> std::result::Result<Vec<f64>, String> {
        self.get(key)
            .split(',')
            .map(|s| s.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(|| format!("bad number `{s}` in `{key}`")))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let mut g = GateList::plaquette(Truncation::new(2));
        g.push(Gate::Gcx { control: 0, control_level: 2, target: 8, levels: (0, 1) });
        g.push(Gate::rz(4, (0, 2), 0.123456789));
        g.push(Gate::Diag { target: 3, phases: vec![0.1, -2.5, std::f64::consts::PI] });
        g.push(Gate::Phase1 { target: 8, level: 4, angle: 1.0 / 3.0 });
        let text = g.to_text().unwrap();
        assert_eq!(GateList::parse(&text).unwrap(), g);
    }

    #[test]
    fn strict_parser() {
        let ok = "QDEFCIRC 1\n# comment\n\nREGS 2 2\nGCX c=0 cl=1 t=1 x=0,1  # trailing\n";
        assert_eq!(GateList::parse(ok).unwrap().gcx_count(), 1);
        for bad in [
            "QDEFCIRC 2\nREGS 2\n",
            "QDEFCIRC 1\nREGS 2 2\nCNOT c=0 t=1\n",
            "QDEFCIRC 1\nREGS 2 2\nGCX c=0 cl=1 t=1 x=0,2\n",
            "QDEFCIRC 1\nREGS 2 2\nGCX c=0 t=1 cl=1 x=0,1\n",
            "QDEFCIRC 1\nREGS 2\nPHASE1 t=0 l=0 p=nan\n",
        ] {
            assert!(GateList::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn local_unitaries_are_not_written() {
        let mut g = GateList::new(vec![3]);
        g.push(Gate::LocalU { target: 0, levels: vec![0, 2], u: linalg::identity(2) });
        assert!(g.to_text().is_err());
        assert!(g.lowered().is_empty());
    }
}
