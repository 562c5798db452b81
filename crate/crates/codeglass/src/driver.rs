//! Parallel versions of the core experiment loops. Each job draws from the
//! same random stream as its sequential counterpart and results are reduced
//! in index order, so output does not depend on the thread count.

use codeglass_core::analysis::{self, BoundTally};
use codeglass_core::codes::{checked_pow2, SectorProblem};
use codeglass_core::decoder::{
    estimate_crossing, nishimori_beta, run_trial, scan_point_seed, PsuccEstimate, SuccessCurve, ThresholdScan,
};
use codeglass_core::gf2::{BinaryVector, CosetSearch};
use codeglass_core::montecarlo::{self, HeatReport, NishimoriReport, Schedule};
use codeglass_core::wegner::Budget;
use codeglass_core::{Error, Result};
use rayon::prelude::*;

/// Runs `f` on a pool of `threads` workers (`None`: one per core).
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match threads {
        None => f(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .expect("thread pool")
            .install(f),
    }
}

/// `P_succ` at one grid point, trials in parallel.
pub fn psucc_point(
    problem: &SectorProblem,
    p: f64,
    beta: f64,
    trials: u64,
    seed: u64,
    budget: &Budget,
) -> Result<PsuccEstimate> {
    let records = (0..trials)
        .into_par_iter()
        .map(|i| run_trial(problem, p, beta, seed, i, budget))
        .collect::<Result<Vec<_>>>()?;
    PsuccEstimate::from_records(&records)
}

/// Same result as the core `threshold_scan`.
pub fn threshold_scan(
    family: &[(String, SectorProblem)],
    p_grid: &[f64],
    trials: u64,
    seed: u64,
    budget: &Budget,
) -> Result<ThresholdScan> {
    if family.len() < 2 {
        return Err(Error::Invalid("a threshold scan needs at least two codes".into()));
    }
    if trials == 0 {
        return Err(Error::Invalid("need at least one trial".into()));
    }
    let mut curves = Vec::new();
    for (ci, (label, problem)) in family.iter().enumerate() {
        let points = p_grid
            .par_iter()
            .enumerate()
            .map(|(pi, &p)| {
                let est = psucc_point(problem, p, nishimori_beta(p)?, trials, scan_point_seed(seed, ci, pi), budget)?;
                Ok((p, est))
            })
            .collect::<Result<Vec<_>>>()?;
        curves.push(SuccessCurve { label: label.clone(), points });
    }
    let (crossing, diagnostic) = estimate_crossing(&curves);
    Ok(ThresholdScan { curves, crossing, diagnostic })
}

/// Same result as `analysis::exhaustive_bound_scan`, syndromes in parallel.
pub fn bound_scan(problem: &SectorProblem, ps: &[f64], budget: &Budget) -> Result<BoundTally> {
    let distances = analysis::class_distances(problem, &CosetSearch::default())?;
    if !distances.exact {
        return Err(Error::Infeasible("class distances are not exact".into()));
    }
    let betas = ps.iter().map(|&p| nishimori_beta(p)).collect::<Result<Vec<_>>>()?;
    let count = checked_pow2(problem.syndrome_rank(), "syndromes")?;
    let tallies = (0..count)
        .into_par_iter()
        .map(|index| analysis::bound_scan_syndrome(problem, index, &distances.weights, &betas, budget))
        .collect::<Result<Vec<_>>>()?;
    let mut total = BoundTally::default();
    for t in &tallies {
        total.merge(t);
    }
    Ok(total)
}

/// Same result as `montecarlo::nishimori_identity_mc`.
pub fn nishimori_mc(
    problem: &SectorProblem,
    m: &BinaryVector,
    p: f64,
    beta: f64,
    samples: u64,
    schedule: &Schedule,
    seed: u64,
) -> Result<NishimoriReport> {
    let rows = (0..samples)
        .into_par_iter()
        .map(|i| montecarlo::nishimori_sample(problem, m, p, beta, schedule, seed, i))
        .collect::<Result<Vec<_>>>()?;
    NishimoriReport::from_samples(beta, nishimori_beta(p)?, &rows)
}

/// Same result as `montecarlo::specific_heat_check`.
pub fn specific_heat(
    problem: &SectorProblem,
    p: f64,
    samples: u64,
    schedule: &Schedule,
    seed: u64,
) -> Result<HeatReport> {
    let heats = (0..samples)
        .into_par_iter()
        .map(|i| montecarlo::heat_sample(problem, p, schedule, seed, i))
        .collect::<Result<Vec<_>>>()?;
    HeatReport::from_samples(p, problem.bits(), &heats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use codeglass_core::codes::{self, Sector};
    use codeglass_core::decoder;

    fn toric_x(l: usize) -> SectorProblem {
        codes::toric(l).unwrap().sector(Sector::X).unwrap()
    }

    #[test]
    fn scan_matches_sequential_for_any_thread_count() {
        let family = vec![("L2".to_string(), toric_x(2)), ("L3".to_string(), toric_x(3))];
        let grid = [0.05, 0.15];
        let b = Budget::default();
        let serial = decoder::threshold_scan(&family, &grid, 40, 3, &b).unwrap();
        for threads in [1, 3] {
            let par = with_threads(Some(threads), || threshold_scan(&family, &grid, 40, 3, &b)).unwrap();
            assert_eq!(par, serial);
        }
    }

    #[test]
    fn bound_scan_matches_sequential() {
        let p = toric_x(2);
        let b = Budget::default();
        assert_eq!(bound_scan(&p, &[0.1], &b).unwrap(), analysis::exhaustive_bound_scan(&p, &[0.1], &b).unwrap());
    }

    #[test]
    fn mc_drivers_match_sequential() {
        let p = toric_x(2);
        let sched = Schedule::new(200, 20);
        let m = p.dual_logicals().row(1);
        assert_eq!(
            nishimori_mc(&p, &m, 0.1, 0.5, 4, &sched, 2).unwrap(),
            montecarlo::nishimori_identity_mc(&p, &m, 0.1, 0.5, 4, &sched, 2).unwrap()
        );
        assert_eq!(
            specific_heat(&p, 0.1, 4, &sched, 2).unwrap(),
            montecarlo::specific_heat_check(&p, 0.1, 4, &sched, 2).unwrap()
        );
    }
}
