//! Verification suites. Every check reports a status and the largest
//! deviation it saw; checks past a library guard are reported as skipped.

use std::fmt;

use qdeform::gauge::{enumerate_physical, phys_dim, phys_dim_closed_form, ENUMERATION_GUARD};
use qdeform::plaquette::{fhi_deviation, verify_f_sequence, EvolutionParams, BLOCK_GUARD, VERIFY_GUARD};
use qdeform::qalgebra::{
    column_symmetry_deviation, orthogonality_deviation, pentagon_admissible, pentagon_deviation, pentagon_residual,
    PENTAGON_EXHAUSTIVE_GUARD,
};
use qdeform::sim::{compare_on_physical, reference_evolution};
use qdeform::synth::{emit_parity_circuit_k1, emit_trotter_step, gcx_count, ResourceReport, Scheme, CENTERING_GUARD};
use qdeform::{Result, Spin, Truncation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Identity tolerance for the algebraic suites.
pub const TOL: f64 = 1e-10;

/// Orthogonality and column checks walk `d^6` or more spin tuples.
const IDENTITY_GUARD: u32 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, clap::ValueEnum)]
pub enum Suite {
    Qalgebra,
    Gauge,
    Plaquette,
    Fhi,
    Synth,
    Sim,
}

impl Suite {
    pub const ALL: [Suite; 6] = [Suite::Qalgebra, Suite::Gauge, Suite::Plaquette, Suite::Fhi, Suite::Synth, Suite::Sim];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Qalgebra => "qalgebra",
            Suite::Gauge => "gauge",
            Suite::Plaquette => "plaquette",
            Suite::Fhi => "fhi",
            Suite::Synth => "synth",
            Suite::Sim => "sim",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        })
    }
}

#[derive(Clone, Debug)]
pub struct Check {
    pub suite: Suite,
    pub check: String,
    pub status: Status,
    pub max_dev: Option<f64>,
    /// Why a check failed or was skipped.
    pub note: Option<String>,
}

#[derive(Clone, Copy, Debug)]
pub struct Options {
    pub kmax: u32,
    pub tau: f64,
    pub seed: u64,
    pub samples: usize,
}

struct Sink {
    suite: Suite,
    out: Vec<Check>,
}

impl Sink {
    fn deviation(&mut self, check: String, dev: f64, tol: f64) {
        let status = if dev <= tol { Status::Pass } else { Status::Fail };
        self.out.push(Check { suite: self.suite, check, status, max_dev: Some(dev), note: None });
    }

    fn skip(&mut self, check: String, note: String) {
        self.out.push(Check { suite: self.suite, check, status: Status::Skipped, max_dev: None, note: Some(note) });
    }

    fn error(&mut self, check: String, err: qdeform::Error) {
        self.out.push(Check { suite: self.suite, check, status: Status::Fail, max_dev: None, note: Some(err.to_string()) });
    }

    fn record(&mut self, check: String, result: Result<f64>, tol: f64) {
        match result {
            Ok(dev) => self.deviation(check, dev, tol),
            Err(e) => self.error(check, e),
        }
    }

    /// Exact comparison; the deviation is `|got - want|`.
    fn exact(&mut self, check: String, result: Result<(u128, u128)>) {
        self.record(check, result.map(|(got, want)| got.abs_diff(want) as f64), 0.0);
    }
}

/// Run the selected suites in order, k = 1..=kmax each.
pub fn run(suites: &[Suite], opts: Options) -> Vec<Check> {
    let mut all = Vec::new();
    for &suite in suites {
        let mut sink = Sink { suite, out: Vec::new() };
        for k in 1..=opts.kmax {
            let t = Truncation::new(k);
            match suite {
                Suite::Qalgebra => qalgebra(&mut sink, t, opts),
                Suite::Gauge => gauge(&mut sink, t),
                Suite::Plaquette => plaquette(&mut sink, t),
                Suite::Fhi => sink.deviation(format!("persymmetry k={k}"), fhi_deviation(t), 1e-12),
                Suite::Synth => synth(&mut sink, t, opts),
                Suite::Sim => sim(&mut sink, t, opts),
            }
        }
        all.extend(sink.out);
    }
    all
}

fn qalgebra(sink: &mut Sink, t: Truncation, opts: Options) {
    let k = t.k();
    if k <= IDENTITY_GUARD {
        sink.deviation(format!("orthogonality k={k}"), orthogonality_deviation::<f64>(t), TOL);
        sink.deviation(format!("column symmetries k={k}"), column_symmetry_deviation::<f64>(t), TOL);
    } else {
        let note = format!("k above {IDENTITY_GUARD}");
        sink.skip(format!("orthogonality k={k}"), note.clone());
        sink.skip(format!("column symmetries k={k}"), note);
    }
    if k <= PENTAGON_EXHAUSTIVE_GUARD {
        sink.record(format!("pentagon exhaustive k={k}"), pentagon_deviation::<f64>(t).map(|r| r.0), TOL);
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ k as u64);
        let mut worst = 0.0f64;
        let mut n = 0;
        while n < opts.samples {
            let j: [Spin; 9] = std::array::from_fn(|_| Spin::from_twice(rng.gen_range(0..=k)));
            if pentagon_admissible(j, t) {
                worst = worst.max(pentagon_residual::<f64>(j, t));
                n += 1;
            }
        }
        sink.deviation(format!("pentagon sampled k={k} n={}", opts.samples), worst, TOL);
    }
}

fn gauge(sink: &mut Sink, t: Truncation) {
    let k = t.k();
    sink.exact(
        format!("closed form k={k}"),
        phys_dim_closed_form::<u128>(t).and_then(|c| Ok((c, phys_dim::<u128>(t, true)?))),
    );
    for deformed in [true, false] {
        let name = format!("enumeration {} k={k}", if deformed { "deformed" } else { "nondeformed" });
        if k > ENUMERATION_GUARD {
            sink.skip(name, format!("k above {ENUMERATION_GUARD}"));
            continue;
        }
        sink.exact(
            name,
            enumerate_physical(t, deformed).and_then(|v| Ok((v.len() as u128, phys_dim::<u128>(t, deformed)?))),
        );
    }
}

fn plaquette(sink: &mut Sink, t: Truncation) {
    let k = t.k();
    let name = format!("f-sequence k={k}");
    if k > VERIFY_GUARD {
        sink.skip(name, format!("k above {VERIFY_GUARD}"));
        return;
    }
    sink.record(name, verify_f_sequence(t).map(|r| r.max_deviation()), TOL);
}

fn synth(sink: &mut Sink, t: Truncation, opts: Options) {
    let k = t.k();
    let p = EvolutionParams::with_tau(opts.tau);
    sink.exact(
        format!("baseline emitted vs formula k={k}"),
        emit_trotter_step(t, p, Scheme::Baseline)
            .and_then(|l| Ok((l.gcx_count() as u128, gcx_count(Scheme::Baseline, t)?))),
    );
    let name = format!("reduced emitted vs constructed k={k}");
    if k > CENTERING_GUARD {
        sink.skip(name, format!("k above {CENTERING_GUARD}"));
    } else {
        sink.exact(
            name,
            ResourceReport::new(Scheme::Reduced, t).and_then(|r| {
                let want = r.constructed_total().expect("centering evaluated below the guard");
                Ok((emit_trotter_step(t, p, Scheme::Reduced)?.gcx_count() as u128, want))
            }),
        );
    }
    if k == 1 {
        sink.exact(
            "parity emitted vs formula k=1".into(),
            emit_parity_circuit_k1(t, p).and_then(|l| Ok((l.gcx_count() as u128, gcx_count(Scheme::ParityK1, t)?))),
        );
    }
}

/// Largest `k` simulated by the sim suite.
const SIM_GUARD: u32 = 3;

fn sim(sink: &mut Sink, t: Truncation, opts: Options) {
    let k = t.k();
    let schemes: &[Scheme] = match k {
        1 => &[Scheme::Reduced, Scheme::Baseline, Scheme::ParityK1],
        2 => &[Scheme::Reduced, Scheme::Baseline],
        _ => &[Scheme::Reduced],
    };
    if k > SIM_GUARD.min(BLOCK_GUARD) {
        sink.skip(format!("reduced vs exact k={k}"), format!("k above {SIM_GUARD}"));
        return;
    }
    let p = EvolutionParams::with_tau(opts.tau);
    let reference = match reference_evolution(t, p) {
        Ok(r) => r,
        Err(e) => return sink.error(format!("reference k={k}"), e),
    };
    for &scheme in schemes {
        let cmp = emit_trotter_step(t, p, scheme).and_then(|c| compare_on_physical(&c, &reference, t));
        match cmp {
            Ok(c) => {
                sink.deviation(format!("{scheme} vs exact k={k}"), c.max_deviation, 1e-9);
                sink.deviation(format!("{scheme} aux leakage k={k}"), c.aux_leakage, 1e-12);
            }
            Err(e) => sink.error(format!("{scheme} vs exact k={k}"), e),
        }
    }
}
