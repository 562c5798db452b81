//! Property suites run by `codeglass check`. Each record carries its
//! residual and tolerance; a suite passes when every record does.

use codeglass_core::analysis;
use codeglass_core::codes::{checked_pow2, SectorProblem};
use codeglass_core::decoder::{nishimori_beta, sample_bits, ErrorModel};
use codeglass_core::gf2::{BinaryMatrix, BinaryVector};
use codeglass_core::montecarlo;
use codeglass_core::rng::{self, StreamRng};
use codeglass_core::wegner::{self, Budget, WegnerModel};
use codeglass_core::{Result, StabilizerCode};
use rand::Rng;
use serde::Serialize;

use crate::driver;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub suite: String,
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckRecord {
    /// Passes when `residual ≤ tolerance` (NaN fails).
    pub fn new(suite: &str, name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self { suite: suite.into(), name: name.into(), residual, tolerance, passed: residual <= tolerance }
    }
}

pub fn all_passed(records: &[CheckRecord]) -> bool {
    records.iter().all(|r| r.passed)
}

/// Which property suite to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Duality,
    SelfDual,
    Nishimori,
    Bounds,
    Expansion,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Duality, Suite::SelfDual, Suite::Nishimori, Suite::Bounds, Suite::Expansion];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Duality => "duality",
            Suite::SelfDual => "selfdual",
            Suite::Nishimori => "nishimori",
            Suite::Bounds => "bounds",
            Suite::Expansion => "expansion",
        }
    }
}

/// Inputs shared by the suites.
#[derive(Debug, Clone)]
pub struct CheckInputs<'a> {
    pub code: &'a StabilizerCode,
    pub problem: &'a SectorProblem,
    pub p_grid: &'a [f64],
    pub seed: u64,
    pub samples: u64,
    pub budget: Budget,
}

pub fn run(suite: Suite, inputs: &CheckInputs<'_>) -> Result<Vec<CheckRecord>> {
    match suite {
        Suite::Duality => duality_suite(inputs.problem, inputs.samples.max(1) as usize, inputs.seed, &inputs.budget),
        Suite::SelfDual => selfdual_suite(inputs.code, &inputs.budget),
        Suite::Nishimori => nishimori_suite(inputs.problem, inputs.p_grid, inputs.samples, inputs.seed, &inputs.budget),
        Suite::Bounds => bounds_suite(inputs.problem, inputs.p_grid, &inputs.budget),
        Suite::Expansion => expansion_suite(inputs.problem, inputs.samples.max(1) as usize, inputs.seed, &inputs.budget),
    }
}

fn random_matrix(rng: &mut StreamRng, rows: usize, cols: usize) -> BinaryMatrix {
    let vectors: Vec<BinaryVector> = (0..rows).map(|_| sample_bits(0.5, cols, rng)).collect();
    BinaryMatrix::from_rows(cols, &vectors).expect("row widths match")
}

/// Random small disordered model with non-uniform couplings.
pub fn random_model(rng: &mut StreamRng, max_spins: usize, max_bonds: usize) -> (WegnerModel, BinaryVector, f64) {
    let spins = rng.gen_range(1..=max_spins);
    let bonds = rng.gen_range(2..=max_bonds);
    let theta = random_matrix(rng, spins, bonds);
    let couplings = (0..bonds).map(|_| rng.gen_range(0.2..2.0)).collect();
    let model = WegnerModel::new(theta, couplings).expect("positive couplings");
    let e = sample_bits(0.4, bonds, rng);
    let beta = rng.gen_range(0.2..1.5);
    (model, e, beta)
}

/// `|ln LHS − ln RHS|` of the duality relation with disorder on one side
/// and the insertion on the other.
pub fn duality_residual(model: &WegnerModel, e: &BinaryVector, beta: f64, budget: &Budget) -> Result<f64> {
    let left = wegner::duality_side(model, e, None, beta, budget)?;
    let dual = wegner::dual_model(model, beta)?;
    let right = wegner::duality_side(&dual, &BinaryVector::zeros(e.len()), Some(e), 1.0, budget)?;
    Ok(if left.sign == right.sign { (left.log_abs - right.log_abs).abs() } else { f64::INFINITY })
}

pub fn duality_suite(problem: &SectorProblem, count: usize, seed: u64, budget: &Budget) -> Result<Vec<CheckRecord>> {
    let mut rng = rng::stream(seed, 0);
    let mut out = Vec::new();
    for i in 0..count {
        let (model, e, beta) = random_model(&mut rng, 8, 12);
        out.push(CheckRecord::new("duality", format!("random model {i}"), duality_residual(&model, &e, beta, budget)?, 1e-10));
    }
    let model = WegnerModel::uniform(problem.theta().clone());
    let e = sample_bits(0.2, problem.bits(), &mut rng);
    out.push(CheckRecord::new("duality", "sector model", duality_residual(&model, &e, 0.7, budget)?, 1e-10));
    Ok(out)
}

pub fn selfdual_suite(code: &StabilizerCode, budget: &Budget) -> Result<Vec<CheckRecord>> {
    code.sectors()
        .into_iter()
        .map(|s| {
            let problem = code.sector(s)?;
            Ok(CheckRecord::new("selfdual", format!("sector {s}"), analysis::clean_self_dual_check(&problem, budget)?, 1e-9))
        })
        .collect()
}

/// `|Σ_s Z_tot(s; β_p) − 1|`.
pub fn normalization_residual(problem: &SectorProblem, p: f64, budget: &Budget) -> Result<f64> {
    let beta = nishimori_beta(p)?;
    let count = checked_pow2(problem.syndrome_rank(), "syndromes")?;
    let mut sum = 0.0;
    for index in 0..count {
        let (_, e) = problem.syndrome_representative(index);
        sum += wegner::ztot(problem, &e, beta, budget)?.value();
    }
    Ok((sum - 1.0).abs())
}

/// `|Z_0(e; β_p) − Σ_g P(e + g)|` with the sum over the stabilizer group.
pub fn nishimori_map_residual(problem: &SectorProblem, e: &BinaryVector, p: f64, budget: &Budget) -> Result<f64> {
    let basis = problem.theta().row_basis();
    let errors = ErrorModel::new(p)?;
    let mut direct = 0.0;
    for mask in 0..checked_pow2(basis.rows(), "stabilizer group")? {
        let mut x = e.clone();
        for r in (0..basis.rows()).filter(|r| (mask >> r) & 1 == 1) {
            x.xor_assign(&basis.row(r));
        }
        direct += errors.log_probability(&x).exp();
    }
    let z = wegner::z0(problem, e, nishimori_beta(p)?, budget)?.value();
    Ok((z - direct).abs())
}

pub fn nishimori_suite(
    problem: &SectorProblem,
    ps: &[f64],
    samples: u64,
    seed: u64,
    budget: &Budget,
) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    let mut rng = rng::stream(seed, 1);
    for &p in ps {
        out.push(CheckRecord::new("nishimori", format!("normalization p={p}"), normalization_residual(problem, p, budget)?, 1e-10));
        let mut worst: f64 = 0.0;
        for _ in 0..samples.max(1) {
            let e = sample_bits(0.5, problem.bits(), &mut rng);
            worst = worst.max(nishimori_map_residual(problem, &e, p, budget)?);
        }
        out.push(CheckRecord::new("nishimori", format!("map p={p}"), worst, 1e-12));
        if problem.bits() <= budget.spin_log2.min(20) {
            let m = sample_bits(0.5, problem.bits(), &mut rng);
            for beta in [0.4, 1.2] {
                let r = montecarlo::nishimori_identity_exact(problem, &m, p, beta, budget)?;
                out.push(CheckRecord::new("nishimori", format!("identity p={p} beta={beta}"), r.identity_residual.abs(), 1e-10));
                out.push(CheckRecord::new("nishimori", format!("inequality p={p} beta={beta}"), (-r.inequality_margin).max(0.0), 1e-10));
            }
        }
    }
    Ok(out)
}

pub fn bounds_suite(problem: &SectorProblem, ps: &[f64], budget: &Budget) -> Result<Vec<CheckRecord>> {
    let t = driver::bound_scan(problem, ps, budget)?;
    Ok(vec![
        CheckRecord::new("bounds", "max-referenced", t.max_violations as f64, 0.0),
        CheckRecord::new("bounds", "zero-referenced", t.zero_violations as f64, 0.0),
        CheckRecord::new("bounds", "syndrome-averaged", t.averaged_violations as f64, 0.0),
    ])
}

pub fn expansion_suite(problem: &SectorProblem, count: usize, seed: u64, budget: &Budget) -> Result<Vec<CheckRecord>> {
    let mut rng = rng::stream(seed, 2);
    (0..count)
        .map(|i| {
            let e = sample_bits(0.3, problem.bits(), &mut rng);
            let m = sample_bits(0.5, problem.bits(), &mut rng);
            let (direct, expanded) = analysis::correlation_expansion(problem, &e, &m, 0.8, budget)?;
            Ok(CheckRecord::new("expansion", format!("sample {i}"), (direct - expanded).abs(), 1e-10))
        })
        .collect()
}
