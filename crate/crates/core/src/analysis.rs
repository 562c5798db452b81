//! Defect free energies, tensions, bound checks and transition-point
//! estimates. Every free energy here comes from exact enumeration.

use alloc::vec::Vec;

use crate::codes::{checked_pow2, SectorProblem};
use crate::decoder::{nishimori_beta, sample_bits, Crossing};
use crate::error::{Error, Result};
use crate::gf2::{BinaryVector, CosetSearch};
use crate::math;
use crate::rng;
use crate::wegner::{
    class_enumerators, correlator_tot, self_dual_coupling, Budget, ClassPartition, SignedEnumerator, WegnerModel,
};

/// Minimum weight over each class `c + rowspace(Θ)`, indexed by class id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDistances {
    pub weights: Vec<usize>,
    /// False when some weight is only an upper bound.
    pub exact: bool,
}

pub fn class_distances(problem: &SectorProblem, search: &CosetSearch) -> Result<ClassDistances> {
    let count = problem.num_classes()?;
    let mut weights = Vec::with_capacity(count as usize);
    let mut exact = true;
    for c in 0..count {
        let min = problem.min_weight_representative(c, search)?;
        exact &= min.exact;
        weights.push(min.weight);
    }
    Ok(ClassDistances { weights, exact })
}

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain { what: "beta", value: beta })
    }
}

fn check_class(problem: &SectorProblem, c: u64) -> Result<()> {
    let count = problem.num_classes()?;
    if c < count {
        Ok(())
    } else {
        Err(Error::Invalid(alloc::format!("class {c} out of range 0..{count}")))
    }
}

/// `β⁻¹ ln Z_max(s) / Z_{c_max + c}(e)` from a class partition.
pub fn delta_f_max_from(cp: &ClassPartition, c: u64, beta: f64) -> f64 {
    (cp.log_max() - cp.log_z[(cp.c_max ^ c) as usize]) / beta
}

/// `β⁻¹ ln Z_0(e) / Z_c(e)` from a class partition computed at `e`.
pub fn delta_f_0_from(cp: &ClassPartition, c: u64, beta: f64) -> f64 {
    (cp.log_z[0] - cp.log_z[c as usize]) / beta
}

/// Defect free energy measured from the dominant class.
pub fn delta_f_max(problem: &SectorProblem, e: &BinaryVector, c: u64, beta: f64, budget: &Budget) -> Result<f64> {
    check_beta(beta)?;
    check_class(problem, c)?;
    Ok(delta_f_max_from(&ClassPartition::compute(problem, e, beta, budget)?, c, beta))
}

/// Defect free energy measured from the trivial class; negative when
/// another class dominates.
pub fn delta_f_0(problem: &SectorProblem, e: &BinaryVector, c: u64, beta: f64, budget: &Budget) -> Result<f64> {
    check_beta(beta)?;
    check_class(problem, c)?;
    Ok(delta_f_0_from(&ClassPartition::compute(problem, e, beta, budget)?, c, beta))
}

/// `Σ_b (Z_b/Z_tot) β⁻¹ ln Z_b/Z_{b+c}`: `ΔF^{(0)}_c` averaged over the
/// errors of one syndrome weighted by their class probability.
pub fn syndrome_avg_from(cp: &ClassPartition, c: u64, beta: f64) -> f64 {
    cp.log_z
        .iter()
        .enumerate()
        .map(|(b, &lz)| math::exp(lz - cp.log_total) * (lz - cp.log_z[b ^ c as usize]))
        .sum::<f64>()
        / beta
}

/// Syndrome-averaged defect free energy at the Nishimori temperature of `p`.
/// `s` must be a reachable syndrome.
pub fn syndrome_avg_delta_f(problem: &SectorProblem, s: &BinaryVector, c: u64, p: f64, budget: &Budget) -> Result<f64> {
    check_class(problem, c)?;
    let beta = nishimori_beta(p)?;
    let e = problem.error_for_syndrome(s)?;
    Ok(syndrome_avg_from(&ClassPartition::compute(problem, &e, beta, budget)?, c, beta))
}

/// Violation counts of `0 ≤ ΔF^max_c ≤ 2d_c`, `ΔF^{(0)}_c ≤ 2d_c` and the
/// syndrome-averaged `0 ≤ ΔF_c ≤ 2d_c`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BoundTally {
    pub syndromes: u64,
    pub checks: u64,
    pub max_violations: u64,
    pub zero_violations: u64,
    pub averaged_violations: u64,
    /// Largest excursion outside any bound (0 when none).
    pub worst_excess: f64,
}

impl BoundTally {
    pub fn violations(&self) -> u64 {
        self.max_violations + self.zero_violations + self.averaged_violations
    }

    pub fn merge(&mut self, other: &BoundTally) {
        self.syndromes += other.syndromes;
        self.checks += other.checks;
        self.max_violations += other.max_violations;
        self.zero_violations += other.zero_violations;
        self.averaged_violations += other.averaged_violations;
        self.worst_excess = self.worst_excess.max(other.worst_excess);
    }
}

/// Numerical slack for the bound checks.
pub const BOUND_TOLERANCE: f64 = 1e-9;

/// Checks every bound for one syndrome from its class enumerators, at each
/// `β` in `betas` (the averaged bound is only claimed at `β_p`, so pass
/// Nishimori temperatures).
pub fn check_bounds(enums: &[SignedEnumerator], distances: &[usize], betas: &[f64]) -> BoundTally {
    let mut tally = BoundTally { syndromes: 1, ..BoundTally::default() };
    let record = |counter: &mut u64, excess: f64, tally_worst: &mut f64| {
        if excess > BOUND_TOLERANCE {
            *counter += 1;
        }
        *tally_worst = tally_worst.max(excess.max(0.0));
    };
    for &beta in betas {
        let cp = ClassPartition::from_enumerators(enums, beta);
        for (c, &d) in distances.iter().enumerate().skip(1) {
            let c = c as u64;
            let upper = 2.0 * d as f64;
            let fmax = delta_f_max_from(&cp, c, beta);
            record(&mut tally.max_violations, (-fmax).max(fmax - upper), &mut tally.worst_excess);
            for b in 0..distances.len() {
                let f0 = (cp.log_z[b] - cp.log_z[b ^ c as usize]) / beta;
                record(&mut tally.zero_violations, f0 - upper, &mut tally.worst_excess);
            }
            let avg = syndrome_avg_from(&cp, c, beta);
            record(&mut tally.averaged_violations, (-avg).max(avg - upper), &mut tally.worst_excess);
            tally.checks += 2 + distances.len() as u64;
        }
    }
    tally
}

/// The bound checks for syndrome number `index` (see
/// [`SectorProblem::syndrome_representative`]).
pub fn bound_scan_syndrome(
    problem: &SectorProblem,
    index: u64,
    distances: &[usize],
    betas: &[f64],
    budget: &Budget,
) -> Result<BoundTally> {
    let (_, e) = problem.syndrome_representative(index);
    let enums = class_enumerators(problem, &e, None, budget)?;
    Ok(check_bounds(&enums, distances, betas))
}

/// Every syndrome and every class at the Nishimori temperatures of `ps`.
pub fn exhaustive_bound_scan(problem: &SectorProblem, ps: &[f64], budget: &Budget) -> Result<BoundTally> {
    let distances = class_distances(problem, &CosetSearch::default())?;
    if !distances.exact {
        return Err(Error::Infeasible("class distances are not exact".into()));
    }
    let betas = ps.iter().map(|&p| nishimori_beta(p)).collect::<Result<Vec<_>>>()?;
    let count = checked_pow2(problem.syndrome_rank(), "syndromes")?;
    let mut total = BoundTally::default();
    for index in 0..count {
        total.merge(&bound_scan_syndrome(problem, index, &distances.weights, &betas, budget)?);
    }
    Ok(total)
}

/// Disorder-averaged defect free energy of one class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DefectReport {
    pub class: u64,
    pub d_c: usize,
    pub d_exact: bool,
    /// `[ΔF^max_c]` and its standard error.
    pub delta_f_max: f64,
    pub stderr: f64,
    /// `λ_c = [ΔF^max_c] / d_c`.
    pub tension: f64,
}

/// Tensions of every nontrivial class plus the class average `λ̄`.
#[derive(Debug, Clone, PartialEq)]
pub struct TensionReport {
    pub p: f64,
    pub beta: f64,
    pub samples: u64,
    pub classes: Vec<DefectReport>,
    /// `λ̄` over the sector's nontrivial classes, with its error bar.
    pub mean_tension: f64,
    pub stderr: f64,
    /// `k/n`, with `k` and `n` counted in the sector.
    pub rate: f64,
    /// `β λ̄ − R ln 2`.
    pub margin: f64,
}

impl TensionReport {
    /// Margin in units of its error bar (`+∞` when exact and positive).
    pub fn margin_z(&self) -> f64 {
        let err = self.beta * self.stderr;
        if err > 0.0 {
            self.margin / err
        } else if self.margin >= 0.0 {
            f64::INFINITY
        } else {
            f64::NEG_INFINITY
        }
    }
}

/// Samples `samples` errors at rate `p` (sample `i` from stream `i` of
/// `seed`) and averages `ΔF^max_c` per class. A sector without logical
/// classes gives an empty report.
pub fn tension_report(
    problem: &SectorProblem,
    p: f64,
    beta: f64,
    samples: u64,
    seed: u64,
    budget: &Budget,
) -> Result<TensionReport> {
    check_beta(beta)?;
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain { what: "error probability", value: p });
    }
    let rate = problem.k() as f64 / problem.bits() as f64;
    let empty = |samples| TensionReport {
        p,
        beta,
        samples,
        classes: Vec::new(),
        mean_tension: 0.0,
        stderr: 0.0,
        rate,
        margin: -rate * math::ln2(),
    };
    if problem.k() == 0 {
        return Ok(empty(samples));
    }
    if samples == 0 {
        return Err(Error::Invalid("need at least one disorder sample".into()));
    }
    let needed = problem.theta().rank() + problem.k();
    if needed > budget.coset_log2 {
        return Err(Error::BudgetExceeded { what: "class enumeration", needed, budget: budget.coset_log2 });
    }
    let distances = class_distances(problem, &CosetSearch::default())?;
    let nontrivial = distances.weights.len() - 1;
    let mut sums = alloc::vec![(0.0f64, 0.0f64); nontrivial];
    let mut per_sample = Vec::with_capacity(samples as usize);
    for i in 0..samples {
        let e = sample_bits(p, problem.bits(), &mut rng::stream(seed, i));
        let cp = ClassPartition::compute(problem, &e, beta, budget)?;
        let mut lambda = 0.0;
        for (slot, c) in sums.iter_mut().zip(1u64..) {
            let f = delta_f_max_from(&cp, c, beta);
            slot.0 += f;
            slot.1 += f * f;
            lambda += f / distances.weights[c as usize] as f64;
        }
        per_sample.push(lambda / nontrivial as f64);
    }
    let n = samples as f64;
    let classes: Vec<DefectReport> = sums
        .iter()
        .zip(1u64..)
        .map(|(&(s1, s2), c)| {
            let mean = s1 / n;
            let var = if samples > 1 { ((s2 - n * mean * mean) / (n - 1.0)).max(0.0) } else { 0.0 };
            let d_c = distances.weights[c as usize];
            DefectReport {
                class: c,
                d_c,
                d_exact: distances.exact,
                delta_f_max: mean,
                stderr: math::sqrt(var / n),
                tension: mean / d_c as f64,
            }
        })
        .collect();
    let (mean_tension, stderr) = crate::montecarlo::mean_and_error(&per_sample);
    let stderr = if samples > 1 { stderr } else { 0.0 };
    Ok(TensionReport {
        classes,
        mean_tension,
        stderr,
        margin: beta * mean_tension - rate * math::ln2(),
        ..empty(samples)
    })
}

/// `|Σ_{c≠0} Z_c(0)/Z_0(0) − (√N_classes − 1)|` at `sinh 2β = 1`.
///
/// For the full model of a code `N_classes = 4^k` and the target is
/// `2^k − 1`; a CSS sector carries half of the logical pairs, so its
/// target is `2^{k/2} − 1` in terms of the code's `k`.
pub fn clean_self_dual_check(problem: &SectorProblem, budget: &Budget) -> Result<f64> {
    let beta = self_dual_coupling();
    let classes = problem.num_classes()? as f64;
    if problem.k() == 0 {
        return Ok(0.0);
    }
    let cp = ClassPartition::compute(problem, &BinaryVector::zeros(problem.bits()), beta, budget)?;
    let lhs: f64 = cp.log_z.iter().skip(1).map(|&lz| math::exp(lz - cp.log_z[0])).sum();
    Ok((lhs - (math::sqrt(classes) - 1.0)).abs())
}

/// `Q_tot^m` both directly and as `Σ_c (−1)^{c·m} Z_c Q_c^m / Z_tot`.
pub fn correlation_expansion(
    problem: &SectorProblem,
    e: &BinaryVector,
    m: &BinaryVector,
    beta: f64,
    budget: &Budget,
) -> Result<(f64, f64)> {
    let direct = correlator_tot(problem, e, m, beta, budget)?;
    let model = WegnerModel::uniform(problem.theta().clone());
    let total = WegnerModel::uniform(problem.total_theta().clone()).evaluate(e, None, beta, budget)?;
    let mut sum = 0.0;
    for c in 0..problem.num_classes()? {
        let cv = problem.class_vector(c);
        // Z_c Q_c^m is the signed partition function of the shifted disorder.
        let z = model.evaluate(&e.xor(&cv), Some(m), beta, budget)?;
        let sign = if cv.dot(m) { -1.0 } else { 1.0 };
        sum += sign * z.ratio(&total);
    }
    Ok((direct, sum))
}

/// `Q_tot^{b̃}` for each dual logical row `b̃` of the sector.
pub fn indicator_signature(problem: &SectorProblem, e: &BinaryVector, beta: f64, budget: &Budget) -> Result<Vec<f64>> {
    let dual = problem.dual_logicals();
    (0..dual.rows()).map(|i| correlator_tot(problem, e, &dual.row(i), beta, budget)).collect()
}

/// The class whose parities with the dual basis match the signs
/// (bit `i` set where entry `i` is negative).
pub fn class_from_signature(signature: &[f64]) -> u64 {
    signature.iter().enumerate().filter(|(_, &q)| q < 0.0).fold(0, |acc, (i, _)| acc | 1 << i)
}

/// `H₂(p) = −p log₂ p − (1−p) log₂(1−p)`.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain { what: "probability (need 0 < p < 1)", value: p });
    }
    Ok(-(p * math::log(p) + (1.0 - p) * math::log1p(-p)) / math::ln2())
}

fn entropy_root(target: f64) -> f64 {
    // H₂ is increasing on (0, ½].
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        let h = if mid == 0.0 { 0.0 } else { binary_entropy(mid).unwrap_or(0.0) };
        if h < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Root of `H₂(p) = ½` below `½`.
pub fn conjectured_pc() -> f64 {
    entropy_root(0.5)
}

/// Largest `p ≤ ½` with `R ≤ 1 − H₂(p)`.
pub fn shannon_p(rate: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&rate) {
        return Err(Error::Domain { what: "rate (need 0 ≤ R < 1)", value: rate });
    }
    if rate == 0.0 {
        return Ok(0.5);
    }
    Ok(entropy_root(1.0 - rate))
}

/// Predicted and measured transition points for one family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionPrediction {
    pub p_conjecture: f64,
    pub p_shannon: f64,
    /// Crossing estimate and its spread, when a scan found one.
    pub p_estimate: Option<(f64, f64)>,
}

pub fn transition_prediction(rate: f64, crossing: Option<&Crossing>) -> Result<TransitionPrediction> {
    Ok(TransitionPrediction {
        p_conjecture: conjectured_pc(),
        p_shannon: shannon_p(rate)?,
        p_estimate: crossing.map(|c| (c.median, c.spread)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{self, Sector};
    use crate::decoder::ErrorModel;
    use proptest::prelude::*;

    fn toric_x(l: usize) -> SectorProblem {
        codes::toric(l).unwrap().sector(Sector::X).unwrap()
    }

    #[test]
    fn trivial_class_costs_nothing() {
        let p = toric_x(2);
        let e = BinaryVector::from_indices(8, &[0, 5]);
        let b = Budget::default();
        assert_eq!(delta_f_max(&p, &e, 0, 0.7, &b).unwrap(), 0.0);
        assert_eq!(delta_f_0(&p, &e, 0, 0.7, &b).unwrap(), 0.0);
        let s = p.syndrome(&e).unwrap();
        assert_eq!(syndrome_avg_delta_f(&p, &s, 0, 0.1, &b).unwrap(), 0.0);
        assert!(delta_f_max(&p, &e, 4, 0.7, &b).is_err());
    }

    #[test]
    fn zero_temperature_saturates_upper_bound() {
        let p = toric_x(2);
        let d = class_distances(&p, &CosetSearch::default()).unwrap();
        let e = BinaryVector::zeros(8);
        for c in 1..4 {
            let f = delta_f_max(&p, &e, c, 1e4, &Budget::default()).unwrap();
            let ratio = f / (2.0 * d.weights[c as usize] as f64);
            assert!((ratio - 1.0).abs() < 1e-3, "class {c}: {ratio}");
        }
    }

    #[test]
    fn clean_error_has_equal_free_energies() {
        let p = toric_x(3);
        let e = BinaryVector::zeros(18);
        for c in 1..4 {
            let a = delta_f_max(&p, &e, c, 0.5, &Budget::default()).unwrap();
            let b = delta_f_0(&p, &e, c, 0.5, &Budget::default()).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn logical_disorder_makes_zero_reference_negative() {
        let p = toric_x(3);
        // A full logical line as disorder: the trivial class is now disfavoured.
        let e = p.class_vector(1);
        let f = delta_f_0(&p, &e, 1, 2.0, &Budget::default()).unwrap();
        assert!(f < 0.0, "{f}");
        assert!(f <= 2.0 * 3.0);
    }

    #[test]
    fn exhaustive_bounds_small_torus() {
        let p = toric_x(2);
        let tally = exhaustive_bound_scan(&p, &[0.05, 0.15], &Budget::default()).unwrap();
        assert_eq!(tally.syndromes, 8);
        assert_eq!(tally.violations(), 0, "{tally:?}");
    }

    #[test]
    fn averaged_free_energy_against_direct_sum() {
        // Independent evaluation: Σ over same-syndrome errors e+b with P(e+b)/P_tot weights,
        // each ΔF⁽⁰⁾ from separate single-class partition functions.
        let p = toric_x(2);
        let prob = 0.12;
        let beta = nishimori_beta(prob).unwrap();
        let budget = Budget::default();
        let (s, e) = p.syndrome_representative(5);
        let errors = ErrorModel::new(prob).unwrap();
        for c in 1..4u64 {
            let (mut num, mut den) = (0.0, 0.0);
            for b in 0..4u64 {
                let eb = e.xor(&p.class_vector(b));
                // P(e+b) summed over its stabilizer coset.
                let mut pb = 0.0;
                for g in 0..1u64 << p.theta().rows() {
                    let mut x = eb.clone();
                    for r in 0..p.theta().rows() {
                        if (g >> r) & 1 == 1 {
                            x.xor_assign(&p.theta().row(r));
                        }
                    }
                    pb += libm::exp(errors.log_probability(&x));
                }
                let z0 = crate::wegner::z0(&p, &eb, beta, &budget).unwrap().ln();
                let zc = crate::wegner::zc(&p, &eb, c, beta, &budget).unwrap().ln();
                num += pb * (z0 - zc) / beta;
                den += pb;
            }
            let got = syndrome_avg_delta_f(&p, &s, c, prob, &budget).unwrap();
            assert!((got - num / den).abs() < 1e-10, "class {c}: {got} vs {}", num / den);
        }
    }

    #[test]
    fn clean_self_dual_residual() {
        for l in [2, 3] {
            for sector in [Sector::X, Sector::Z] {
                let p = codes::toric(l).unwrap().sector(sector).unwrap();
                let r = clean_self_dual_check(&p, &Budget::default()).unwrap();
                assert!(r <= 1e-9, "L={l} {sector}: {r}");
            }
        }
        let full = codes::toric(2).unwrap().sector(Sector::Full).unwrap();
        assert!(clean_self_dual_check(&full, &Budget::default()).unwrap() <= 1e-9);
    }

    #[test]
    fn self_dual_residual_is_not_trivially_zero() {
        let p = toric_x(2);
        let cp = ClassPartition::compute(&p, &BinaryVector::zeros(8), 0.3, &Budget::default()).unwrap();
        let lhs: f64 = cp.log_z.iter().skip(1).map(|&lz| libm::exp(lz - cp.log_z[0])).sum();
        assert!((lhs - 1.0).abs() > 1e-3);
    }

    #[test]
    fn expansion_identity_small_torus() {
        let p = toric_x(2);
        let mut r = rng::stream(11, 0);
        for _ in 0..10 {
            let e = sample_bits(0.3, 8, &mut r);
            let m = sample_bits(0.5, 8, &mut r);
            let (a, b) = correlation_expansion(&p, &e, &m, 0.8, &Budget::default()).unwrap();
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn indicator_signs_identify_the_class() {
        let p = toric_x(3);
        let b = Budget::default();
        let clean = indicator_signature(&p, &BinaryVector::zeros(18), 5.0, &b).unwrap();
        assert!(clean.iter().all(|&q| (q - 1.0).abs() < 1e-6), "{clean:?}");
        for c in 1..4 {
            let sig = indicator_signature(&p, &p.class_vector(c), 5.0, &b).unwrap();
            assert_eq!(class_from_signature(&sig), c);
            assert!(sig.iter().all(|q| (q.abs() - 1.0).abs() < 1e-6));
        }
        let hot = indicator_signature(&p, &p.class_vector(1), 0.01, &b).unwrap();
        assert!(hot.iter().all(|q| q.abs() < 1e-3), "{hot:?}");
    }

    #[test]
    fn tension_report_shapes() {
        let p = toric_x(3);
        let r = tension_report(&p, 0.02, nishimori_beta(0.02).unwrap(), 20, 3, &Budget::default()).unwrap();
        assert_eq!(r.classes.len(), 3);
        for c in &r.classes {
            assert!((0.0..=2.0).contains(&c.tension), "{c:?}");
        }
        let trivial = codes::hp_code(&crate::gf2::BinaryMatrix::parse("11").unwrap(), &crate::gf2::BinaryMatrix::parse("1").unwrap())
            .unwrap();
        let tp = trivial.sector(Sector::X).unwrap();
        if tp.k() == 0 {
            assert!(tension_report(&tp, 0.1, 1.0, 5, 0, &Budget::default()).unwrap().classes.is_empty());
        }
    }

    #[test]
    fn entropy_values() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert!(binary_entropy(0.0).is_err());
        assert!(binary_entropy(1.2).is_err());
        let pc = conjectured_pc();
        assert!((pc - 0.110).abs() < 1e-3);
        assert!((binary_entropy(pc).unwrap() - 0.5).abs() < 1e-11);
        assert_eq!(shannon_p(0.0).unwrap(), 0.5);
        assert!((shannon_p(0.5).unwrap() - pc).abs() < 1e-9);
        assert!(shannon_p(1.0).is_err());
        // Same root found through the Nishimori coupling.
        assert!((nishimori_beta(pc).unwrap() - 1.045_228).abs() < 1e-6);
    }

    proptest! {
        #[test]
        fn shannon_is_decreasing(a in 0.001f64..0.99, b in 0.001f64..0.99) {
            prop_assume!((a - b).abs() > 1e-6);
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            prop_assert!(shannon_p(lo).unwrap() > shannon_p(hi).unwrap());
        }

        #[test]
        fn bounds_hold_on_random_instances(mask in 0u64..1 << 18, beta in 0.05f64..4.0) {
            let p = toric_x(3);
            let e = BinaryVector::from_bits((0..18).map(|i| (mask >> i) & 1 == 1));
            let d = class_distances(&p, &CosetSearch::default()).unwrap();
            let enums = class_enumerators(&p, &e, None, &Budget::default()).unwrap();
            let t = check_bounds(&enums, &d.weights, &[beta]);
            prop_assert_eq!(t.max_violations + t.zero_violations, 0);
        }
    }
}
