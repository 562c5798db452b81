//! Single-spin-flip Metropolis sampling of Wegner models.
//!
//! The Hamiltonian is `H = −Σ_b J_b (−1)^{e_b} R_b`, so the Boltzmann weight
//! `exp(−βH)` matches the partition function of [`crate::wegner`]. Free
//! energy differences are not estimated here; only energies, specific heat
//! and bond-product correlators.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::codes::SectorProblem;
use crate::decoder::{nishimori_beta, sample_bits, ErrorModel};
use crate::error::{Error, Result};
use crate::gf2::BinaryVector;
use crate::math;
use crate::rng;
use crate::wegner::{Budget, WegnerModel};

/// Number of blocks used for error bars.
pub const BLOCKS: usize = 16;

/// Metropolis chain on one disorder realization.
#[derive(Debug, Clone)]
pub struct Metropolis<R> {
    bonds_of: Vec<Vec<usize>>,
    couplings: Vec<f64>,
    disorder: Vec<bool>,
    beta: f64,
    /// `(−1)^{e_b} R_b` per bond.
    bond_values: Vec<i8>,
    spins: Vec<i8>,
    energy: f64,
    proposed: u64,
    accepted: u64,
    rng: R,
}

impl<R: Rng> Metropolis<R> {
    /// Chain started from all spins up.
    pub fn new(model: &WegnerModel, e: &BinaryVector, beta: f64, rng: R) -> Result<Self> {
        if e.len() != model.bonds() {
            return Err(Error::DimensionMismatch { expected: model.bonds(), found: e.len() });
        }
        if !(beta >= 0.0 && beta.is_finite()) {
            return Err(Error::Domain { what: "beta", value: beta });
        }
        let theta = model.theta();
        let bonds_of = (0..model.spins()).map(|r| theta.row(r).ones().collect()).collect();
        let disorder: Vec<bool> = e.iter().collect();
        let bond_values: Vec<i8> = disorder.iter().map(|&flip| if flip { -1 } else { 1 }).collect();
        let couplings = model.couplings().to_vec();
        let energy = -bond_values.iter().zip(&couplings).map(|(&s, j)| f64::from(s) * j).sum::<f64>();
        Ok(Self {
            bonds_of,
            couplings,
            disorder,
            beta,
            bond_values,
            spins: vec![1; model.spins()],
            energy,
            proposed: 0,
            accepted: 0,
            rng,
        })
    }

    /// Draws every spin uniformly at random.
    pub fn randomize(&mut self) {
        for r in 0..self.spins.len() {
            if self.rng.gen_bool(0.5) {
                self.flip(r);
            }
        }
    }

    fn flip(&mut self, r: usize) {
        self.spins[r] = -self.spins[r];
        for &b in &self.bonds_of[r] {
            self.energy += 2.0 * self.couplings[b] * f64::from(self.bond_values[b]);
            self.bond_values[b] = -self.bond_values[b];
        }
    }

    /// One flip attempt at a uniformly chosen spin. With probability
    /// `1/(N_s+1)` the proposal is the identity, which keeps the chain
    /// aperiodic at `β = 0`.
    pub fn step(&mut self) {
        let r = self.rng.gen_range(0..=self.spins.len());
        if r == self.spins.len() {
            return;
        }
        let delta_e: f64 =
            2.0 * self.bonds_of[r].iter().map(|&b| self.couplings[b] * f64::from(self.bond_values[b])).sum::<f64>();
        self.proposed += 1;
        if delta_e <= 0.0 || self.rng.gen::<f64>() < math::exp(-self.beta * delta_e) {
            self.flip(r);
            self.accepted += 1;
        }
    }

    /// `N_s` flip attempts.
    pub fn sweep(&mut self) {
        for _ in 0..self.spins.len() {
            self.step();
        }
        #[cfg(debug_assertions)]
        self.check_cache();
    }

    #[cfg(debug_assertions)]
    fn check_cache(&self) {
        for (b, &v) in self.bond_values.iter().enumerate() {
            let r_b: i8 = self
                .bonds_of
                .iter()
                .enumerate()
                .filter(|(_, bonds)| bonds.contains(&b))
                .map(|(r, _)| self.spins[r])
                .product();
            let expected = if self.disorder[b] { -r_b } else { r_b };
            debug_assert_eq!(v, expected, "stale bond cache at {b}");
        }
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn spins(&self) -> &[i8] {
        &self.spins
    }

    pub fn bond_values(&self) -> &[i8] {
        &self.bond_values
    }

    /// `Π_b R_b^{m_b}` in the current configuration.
    pub fn bond_product(&self, m: &BinaryVector) -> f64 {
        let negative = m.ones().filter(|&b| (self.bond_values[b] < 0) != self.disorder[b]).count();
        if negative % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    pub fn acceptance_rate(&self) -> f64 {
        if self.proposed == 0 {
            0.0
        } else {
            self.accepted as f64 / self.proposed as f64
        }
    }

    /// Exchanges configurations (not temperatures) with another chain.
    pub fn swap_configuration(&mut self, other: &mut Self) {
        core::mem::swap(&mut self.spins, &mut other.spins);
        core::mem::swap(&mut self.bond_values, &mut other.bond_values);
        core::mem::swap(&mut self.energy, &mut other.energy);
    }
}

/// Mean with a blocked error bar.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    /// Integrated autocorrelation time in sweeps, from the block variance.
    pub tau: f64,
    pub sweeps: usize,
    pub burn_in: usize,
}

impl McEstimate {
    /// Statistics of a measured series split into [`BLOCKS`] blocks.
    pub fn from_series(series: &[f64], burn_in: usize) -> Self {
        let n = series.len();
        let mean = series.iter().sum::<f64>() / n as f64;
        let (stderr, tau) = blocked_error(series, mean);
        Self { mean, stderr, tau, sweeps: n, burn_in }
    }

    /// `|mean − target|` in units of the error bar (0 when both coincide exactly).
    pub fn z_score(&self, target: f64) -> f64 {
        let d = (self.mean - target).abs();
        if d == 0.0 {
            0.0
        } else {
            d / self.stderr
        }
    }
}

fn block_means(series: &[f64]) -> Vec<f64> {
    let size = series.len() / BLOCKS;
    (0..BLOCKS).map(|b| series[b * size..(b + 1) * size].iter().sum::<f64>() / size as f64).collect()
}

fn blocked_error(series: &[f64], mean: f64) -> (f64, f64) {
    let n = series.len();
    if n < BLOCKS {
        return (f64::INFINITY, f64::NAN);
    }
    let size = n / BLOCKS;
    let means = block_means(series);
    let bm = means.iter().sum::<f64>() / BLOCKS as f64;
    let block_var = means.iter().map(|m| (m - bm) * (m - bm)).sum::<f64>() / (BLOCKS - 1) as f64;
    let var = series.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1).max(1) as f64;
    let tau = if var > 0.0 { 0.5 * size as f64 * block_var / var } else { 0.0 };
    (math::sqrt(block_var / BLOCKS as f64), tau)
}

/// Sweep counts and the optional temperature ladder.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    /// Measured sweeps (after burn-in).
    pub sweeps: usize,
    /// `None` picks ten autocorrelation times from a pilot run.
    pub burn_in: Option<usize>,
    /// Extra inverse temperatures for replica exchange; empty disables it.
    pub tempering: Vec<f64>,
}

impl Schedule {
    pub fn new(sweeps: usize, burn_in: usize) -> Self {
        Self { sweeps, burn_in: Some(burn_in), tempering: Vec::new() }
    }
}

/// Measured series from one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub energy: Vec<f64>,
    pub observable: Vec<f64>,
    pub burn_in: usize,
}

/// Runs `sweeps` Metropolis sweeps, recording energy and `Π R_b^{m_b}`
/// (1 when `m` is `None`) after each sweep past `burn_in`.
pub fn metropolis_run<R: Rng>(
    model: &WegnerModel,
    e: &BinaryVector,
    m: Option<&BinaryVector>,
    beta: f64,
    sweeps: usize,
    burn_in: usize,
    rng: R,
) -> Result<Trace> {
    if sweeps <= burn_in {
        return Err(Error::Invalid("sweeps must exceed burn-in".into()));
    }
    let mut chain = Metropolis::new(model, e, beta, rng)?;
    chain.randomize();
    let mut trace = Trace { energy: Vec::new(), observable: Vec::new(), burn_in };
    for t in 0..sweeps {
        chain.sweep();
        if t >= burn_in {
            trace.energy.push(chain.energy());
            trace.observable.push(m.map_or(1.0, |m| chain.bond_product(m)));
        }
    }
    Ok(trace)
}

/// Burn-in of ten autocorrelation times, from a pilot run of `pilot` sweeps.
pub fn pilot_burn_in<R: Rng>(model: &WegnerModel, e: &BinaryVector, beta: f64, pilot: usize, rng: R) -> Result<usize> {
    let trace = metropolis_run(model, e, None, beta, pilot.max(2 * BLOCKS), 0, rng)?;
    let est = McEstimate::from_series(&trace.energy, 0);
    let tau = if est.tau.is_finite() { est.tau } else { 1.0 };
    Ok(((10.0 * tau) as usize).max(10))
}

/// Replica exchange over `betas` (sorted or not); returns the trace at `betas[target]`.
#[allow(clippy::too_many_arguments)]
pub fn tempering_run<R: Rng + Clone>(
    model: &WegnerModel,
    e: &BinaryVector,
    m: Option<&BinaryVector>,
    betas: &[f64],
    target: usize,
    sweeps: usize,
    burn_in: usize,
    mut rng: R,
) -> Result<Trace> {
    if sweeps <= burn_in {
        return Err(Error::Invalid("sweeps must exceed burn-in".into()));
    }
    let mut chains = betas
        .iter()
        .map(|&b| {
            let mut c = Metropolis::new(model, e, b, rng.clone())?;
            // Decorrelate the per-replica generators.
            for _ in 0..=c.spins.len() {
                c.rng.gen::<u64>();
            }
            c.randomize();
            rng.gen::<u64>();
            Ok(c)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut order: Vec<usize> = (0..betas.len()).collect();
    order.sort_by(|&a, &b| betas[a].total_cmp(&betas[b]));
    let mut trace = Trace { energy: Vec::new(), observable: Vec::new(), burn_in };
    for t in 0..sweeps {
        for c in &mut chains {
            c.sweep();
        }
        for w in order.windows(2) {
            let (i, j) = (w[0], w[1]);
            let arg = (betas[i] - betas[j]) * (chains[i].energy() - chains[j].energy());
            if arg >= 0.0 || rng.gen::<f64>() < math::exp(arg) {
                let (lo, hi) = if i < j { (i, j) } else { (j, i) };
                let (left, right) = chains.split_at_mut(hi);
                left[lo].swap_configuration(&mut right[0]);
            }
        }
        if t >= burn_in {
            let c = &chains[target];
            trace.energy.push(c.energy());
            trace.observable.push(m.map_or(1.0, |m| c.bond_product(m)));
        }
    }
    Ok(trace)
}

fn run_with_schedule<R: Rng + Clone>(
    model: &WegnerModel,
    e: &BinaryVector,
    m: Option<&BinaryVector>,
    beta: f64,
    schedule: &Schedule,
    mut rng: R,
) -> Result<Trace> {
    let burn_in = match schedule.burn_in {
        Some(b) => b,
        None => pilot_burn_in(model, e, beta, schedule.sweeps.clamp(2 * BLOCKS, 2000), rng.clone())?,
    };
    rng.gen::<u64>();
    let total = schedule.sweeps + burn_in;
    if schedule.tempering.is_empty() {
        metropolis_run(model, e, m, beta, total, burn_in, rng)
    } else {
        let mut betas = schedule.tempering.clone();
        betas.push(beta);
        let target = betas.len() - 1;
        tempering_run(model, e, m, &betas, target, total, burn_in, rng)
    }
}

/// Internal energy `U = ⟨E⟩` and specific heat `C = β² (⟨E²⟩ − ⟨E⟩²)`.
/// The error bar on `C` is a jackknife over the blocks.
pub fn estimate_energy_and_cv<R: Rng + Clone>(
    model: &WegnerModel,
    e: &BinaryVector,
    beta: f64,
    schedule: &Schedule,
    rng: R,
) -> Result<(McEstimate, McEstimate)> {
    let trace = run_with_schedule(model, e, None, beta, schedule, rng)?;
    let u = McEstimate::from_series(&trace.energy, trace.burn_in);
    let c = jackknife_heat(&trace.energy, beta);
    Ok((u, McEstimate { mean: c.0, stderr: c.1, tau: u.tau, sweeps: u.sweeps, burn_in: u.burn_in }))
}

fn jackknife_heat(series: &[f64], beta: f64) -> (f64, f64) {
    let heat = |xs: &mut dyn Iterator<Item = f64>| {
        let (mut n, mut s1, mut s2) = (0.0, 0.0, 0.0);
        for x in xs {
            n += 1.0;
            s1 += x;
            s2 += x * x;
        }
        let mean = s1 / n;
        beta * beta * (s2 / n - mean * mean).max(0.0)
    };
    let full = heat(&mut series.iter().copied());
    if series.len() < BLOCKS {
        return (full, f64::INFINITY);
    }
    let size = series.len() / BLOCKS;
    let used = size * BLOCKS;
    let leave_out: Vec<f64> = (0..BLOCKS)
        .map(|b| {
            heat(&mut series[..used].iter().enumerate().filter(|(i, _)| i / size != b).map(|(_, &x)| x))
        })
        .collect();
    let mean_lo = leave_out.iter().sum::<f64>() / BLOCKS as f64;
    let var = leave_out.iter().map(|c| (c - mean_lo) * (c - mean_lo)).sum::<f64>() * (BLOCKS - 1) as f64
        / BLOCKS as f64;
    (full, math::sqrt(var))
}

/// Thermal average of `Π_b R_b^{m_b}`.
pub fn estimate_correlator<R: Rng + Clone>(
    model: &WegnerModel,
    e: &BinaryVector,
    m: &BinaryVector,
    beta: f64,
    schedule: &Schedule,
    rng: R,
) -> Result<McEstimate> {
    let trace = run_with_schedule(model, e, Some(m), beta, schedule, rng)?;
    Ok(McEstimate::from_series(&trace.observable, trace.burn_in))
}

/// Disorder averages entering `[Q(β)] = [Q(β) Q(β_p)]` and `[Q(β)]² ≤ [Q(β_p)]`
/// for the all-class correlator `Q = Q_tot^m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NishimoriReport {
    pub beta: f64,
    pub beta_p: f64,
    pub samples: u64,
    /// `[Q(β)]` with its error bar.
    pub q: (f64, f64),
    /// `[Q(β) Q(β_p)]`.
    pub q_qp: (f64, f64),
    /// `[Q(β_p)]`.
    pub qp: (f64, f64),
    /// `[Q(β)] − [Q(β)Q(β_p)]`.
    pub identity_residual: f64,
    pub identity_z: f64,
    /// `[Q(β_p)] − [Q(β)]²`, nonnegative when the inequality holds.
    pub inequality_margin: f64,
    pub inequality_z: f64,
}

impl NishimoriReport {
    #[allow(clippy::too_many_arguments)]
    fn build(beta: f64, beta_p: f64, samples: u64, q: (f64, f64), q_qp: (f64, f64), qp: (f64, f64), resid_err: f64) -> Self {
        let identity_residual = q.0 - q_qp.0;
        let inequality_margin = qp.0 - q.0 * q.0;
        let margin_err = math::sqrt(qp.1 * qp.1 + 4.0 * q.0 * q.0 * q.1 * q.1);
        let z = |x: f64, err: f64| if x == 0.0 { 0.0 } else { x / err };
        Self {
            beta,
            beta_p,
            samples,
            q,
            q_qp,
            qp,
            identity_residual,
            identity_z: z(identity_residual, resid_err),
            inequality_margin,
            inequality_z: z(inequality_margin, margin_err),
        }
    }
}

/// Exact version: every disorder configuration of the sector weighted by
/// its probability, with exact correlators.
pub fn nishimori_identity_exact(
    problem: &SectorProblem,
    m: &BinaryVector,
    p: f64,
    beta: f64,
    budget: &Budget,
) -> Result<NishimoriReport> {
    let bits = problem.bits();
    if bits > budget.spin_log2 {
        return Err(Error::BudgetExceeded { what: "disorder enumeration", needed: bits, budget: budget.spin_log2 });
    }
    let beta_p = nishimori_beta(p)?;
    let model = WegnerModel::uniform(problem.total_theta().clone());
    let errors = ErrorModel::new(p)?;
    let (mut q, mut q_qp, mut qp) = (0.0, 0.0, 0.0);
    for mask in 0u64..1 << bits {
        let e = BinaryVector::from_bits((0..bits).map(|i| (mask >> i) & 1 == 1));
        let weight = math::exp(errors.log_probability(&e));
        let en = model.enumerator(&e, Some(m), budget)?;
        let (a, b) = (en.correlator(beta), en.correlator(beta_p));
        q += weight * a;
        q_qp += weight * a * b;
        qp += weight * b;
    }
    Ok(NishimoriReport::build(beta, beta_p, 1 << bits, (q, 0.0), (q_qp, 0.0), (qp, 0.0), 0.0))
}

/// One disorder sample of the Monte Carlo check: `(Q(β), Q(β_p))` on the
/// all-class model, with the disorder drawn from substream `(seed, index, 0)`.
pub fn nishimori_sample(
    problem: &SectorProblem,
    m: &BinaryVector,
    p: f64,
    beta: f64,
    schedule: &Schedule,
    seed: u64,
    index: u64,
) -> Result<(f64, f64)> {
    let beta_p = nishimori_beta(p)?;
    let model = WegnerModel::uniform(problem.total_theta().clone());
    let e = sample_bits(p, problem.bits(), &mut rng::substream(seed, index, 0));
    let a = estimate_correlator(&model, &e, m, beta, schedule, rng::substream(seed, index, 1))?.mean;
    let b = estimate_correlator(&model, &e, m, beta_p, schedule, rng::substream(seed, index, 2))?.mean;
    Ok((a, b))
}

impl NishimoriReport {
    /// Disorder averages from per-sample `(Q(β), Q(β_p))` pairs.
    pub fn from_samples(beta: f64, beta_p: f64, rows: &[(f64, f64)]) -> Result<Self> {
        if rows.len() < 2 {
            return Err(Error::Invalid("need at least two disorder samples".into()));
        }
        let stats = |f: &dyn Fn(&(f64, f64)) -> f64| mean_and_error(&rows.iter().map(f).collect::<Vec<_>>());
        let q = stats(&|r| r.0);
        let q_qp = stats(&|r| r.0 * r.1);
        let qp = stats(&|r| r.1);
        let resid = stats(&|r| r.0 - r.0 * r.1);
        Ok(Self::build(beta, beta_p, rows.len() as u64, q, q_qp, qp, resid.1))
    }
}

/// Monte Carlo version: `samples` sampled disorders, each with independent
/// chains at `β` and `β_p` (see [`nishimori_sample`]).
pub fn nishimori_identity_mc(
    problem: &SectorProblem,
    m: &BinaryVector,
    p: f64,
    beta: f64,
    samples: u64,
    schedule: &Schedule,
    seed: u64,
) -> Result<NishimoriReport> {
    let rows = (0..samples)
        .map(|i| nishimori_sample(problem, m, p, beta, schedule, seed, i))
        .collect::<Result<Vec<_>>>()?;
    NishimoriReport::from_samples(beta, nishimori_beta(p)?, &rows)
}

/// Disorder-averaged specific heat at `β_p` against its upper bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatReport {
    pub p: f64,
    pub beta_p: f64,
    pub samples: u64,
    pub mean: f64,
    pub stderr: f64,
    pub bound: f64,
}

impl HeatReport {
    pub fn from_samples(p: f64, bonds: usize, heats: &[f64]) -> Result<Self> {
        let beta_p = nishimori_beta(p)?;
        let (mean, stderr) = mean_and_error(heats);
        Ok(Self { p, beta_p, samples: heats.len() as u64, mean, stderr, bound: specific_heat_bound(bonds, beta_p) })
    }

    /// `([C] − bound) / stderr`; at most 3 counts as satisfied.
    pub fn excess_z(&self) -> f64 {
        (self.mean - self.bound) / self.stderr
    }
}

/// Specific heat of the sector model `Θ` for disorder sample `index`.
pub fn heat_sample(problem: &SectorProblem, p: f64, schedule: &Schedule, seed: u64, index: u64) -> Result<f64> {
    let beta_p = nishimori_beta(p)?;
    let model = WegnerModel::uniform(problem.theta().clone());
    let e = sample_bits(p, problem.bits(), &mut rng::substream(seed, index, 0));
    Ok(estimate_energy_and_cv(&model, &e, beta_p, schedule, rng::substream(seed, index, 1))?.1.mean)
}

pub fn specific_heat_check(
    problem: &SectorProblem,
    p: f64,
    samples: u64,
    schedule: &Schedule,
    seed: u64,
) -> Result<HeatReport> {
    let heats = (0..samples).map(|i| heat_sample(problem, p, schedule, seed, i)).collect::<Result<Vec<_>>>()?;
    HeatReport::from_samples(p, problem.bits(), &heats)
}

/// Sample mean and its standard error.
pub fn mean_and_error(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, f64::INFINITY);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, math::sqrt(var / n))
}

/// `N_b β² / cosh² β`, the bound on the disorder-averaged specific heat at `β_p`.
pub fn specific_heat_bound(bonds: usize, beta_p: f64) -> f64 {
    let c = math::cosh(beta_p);
    bonds as f64 * beta_p * beta_p / (c * c)
}
