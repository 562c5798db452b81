//! Error sampling and maximum-likelihood decoding by comparing class
//! partition functions.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;

use crate::codes::SectorProblem;
use crate::error::{Error, Result};
use crate::gf2::BinaryVector;
use crate::math;
use crate::rng;
use crate::wegner::{Budget, ClassPartition};

/// `β_p` with `exp(−2β_p) = p/(1−p)`.
pub fn nishimori_beta(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 0.5) {
        return Err(Error::Domain { what: "error probability (need 0 < p < 1/2)", value: p });
    }
    Ok(0.5 * math::log((1.0 - p) / p))
}

/// Independent bit and phase flips, each with probability `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorModel {
    p: f64,
}

impl ErrorModel {
    pub fn new(p: f64) -> Result<Self> {
        if !(0.0..=0.5).contains(&p) {
            return Err(Error::Domain { what: "error probability", value: p });
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Single-qubit probabilities `(p_I, p_X, p_Y, p_Z)`.
    pub fn pauli_probabilities(&self) -> (f64, f64, f64, f64) {
        let p = self.p;
        ((1.0 - p) * (1.0 - p), p * (1.0 - p), p * p, p * (1.0 - p))
    }

    /// `P(e) = Π p^{e_i} (1−p)^{1−e_i}` in log form.
    pub fn log_probability(&self, e: &BinaryVector) -> f64 {
        let w = e.weight() as f64;
        let len = e.len() as f64;
        w * math::log(self.p) + (len - w) * math::log1p(-self.p)
    }

    pub fn nishimori_beta(&self) -> Result<f64> {
        nishimori_beta(self.p)
    }
}

/// Random `(v|u)` error on `n` qubits.
pub fn sample_error<R: Rng + ?Sized>(model: &ErrorModel, n: usize, rng: &mut R) -> BinaryVector {
    sample_bits(model.p, 2 * n, rng)
}

/// `len` independent bits, each set with probability `p`.
pub fn sample_bits<R: Rng + ?Sized>(p: f64, len: usize, rng: &mut R) -> BinaryVector {
    BinaryVector::from_bits((0..len).map(|_| rng.gen_bool(p)))
}

/// Result of decoding one syndrome.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodeOutcome {
    pub syndrome: BinaryVector,
    /// Reference error the class ids are measured from.
    pub reference: BinaryVector,
    pub c_max: u64,
    /// Known only when the actual error was supplied.
    pub success: Option<bool>,
    /// `Z_max / Z_tot`.
    pub p_succ_conditional: f64,
    pub log_z: Vec<f64>,
    pub log_total: f64,
    /// Number of classes sharing the maximum (1 when unambiguous).
    pub ties: usize,
}

impl DecodeOutcome {
    /// Correction that the decoder applies: reference plus the chosen class.
    pub fn correction(&self, problem: &SectorProblem) -> BinaryVector {
        self.reference.xor(&problem.class_vector(self.c_max))
    }
}

/// Picks the class with the largest `Z_c(s; β)`.
pub fn ml_decode(problem: &SectorProblem, s: &BinaryVector, beta: f64, budget: &Budget) -> Result<DecodeOutcome> {
    let reference = problem.error_for_syndrome(s)?;
    let cp = ClassPartition::compute(problem, &reference, beta, budget)?;
    Ok(DecodeOutcome {
        syndrome: s.clone(),
        reference,
        c_max: cp.c_max,
        success: None,
        p_succ_conditional: cp.max_fraction(),
        ties: cp.ties(),
        log_total: cp.log_total,
        log_z: cp.log_z,
    })
}

/// Decodes the syndrome of `e` and scores the result against `e`'s class.
pub fn decode_error(problem: &SectorProblem, e: &BinaryVector, beta: f64, budget: &Budget) -> Result<DecodeOutcome> {
    let s = problem.syndrome(e)?;
    let mut out = ml_decode(problem, &s, beta, budget)?;
    let actual = problem.class_of(&e.xor(&out.reference))?;
    out.success = Some(actual == out.c_max);
    Ok(out)
}

/// One sampled trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialRecord {
    pub index: u64,
    pub success: bool,
    pub log_zmax: f64,
    pub log_ztot: f64,
}

impl TrialRecord {
    pub fn max_fraction(&self) -> f64 {
        math::exp(self.log_zmax - self.log_ztot)
    }
}

/// Trial `index` of an experiment with master seed `seed`: sample, decode, score.
pub fn run_trial(
    problem: &SectorProblem,
    p: f64,
    beta: f64,
    seed: u64,
    index: u64,
    budget: &Budget,
) -> Result<TrialRecord> {
    let mut rng = rng::stream(seed, index);
    let e = sample_bits(p, problem.bits(), &mut rng);
    let out = decode_error(problem, &e, beta, budget)?;
    Ok(TrialRecord {
        index,
        success: out.success == Some(true),
        log_zmax: out.log_z[out.c_max as usize],
        log_ztot: out.log_total,
    })
}

/// Success rate with a binomial error bar, plus the mean of `Z_max/Z_tot`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsuccEstimate {
    pub trials: u64,
    pub successes: u64,
    pub mean: f64,
    pub stderr: f64,
    pub mean_max_fraction: f64,
    pub stderr_max_fraction: f64,
}

impl PsuccEstimate {
    pub fn from_records(records: &[TrialRecord]) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::Invalid("need at least one trial".into()));
        }
        let n = records.len() as f64;
        let successes = records.iter().filter(|r| r.success).count() as u64;
        let mean = successes as f64 / n;
        let fractions: Vec<f64> = records.iter().map(TrialRecord::max_fraction).collect();
        let fmean = fractions.iter().sum::<f64>() / n;
        let fvar = if records.len() > 1 {
            fractions.iter().map(|f| (f - fmean) * (f - fmean)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        Ok(Self {
            trials: records.len() as u64,
            successes,
            mean,
            stderr: math::sqrt(mean * (1.0 - mean) / n),
            mean_max_fraction: fmean,
            stderr_max_fraction: math::sqrt(fvar / n),
        })
    }
}

/// Monte Carlo estimate of the decoding success probability. Trial `i`
/// draws its error from stream `i` of `seed`.
pub fn estimate_psucc(
    problem: &SectorProblem,
    p: f64,
    beta: f64,
    trials: u64,
    seed: u64,
    budget: &Budget,
) -> Result<PsuccEstimate> {
    if trials == 0 {
        return Err(Error::Invalid("need at least one trial".into()));
    }
    let records = (0..trials)
        .map(|i| run_trial(problem, p, beta, seed, i, budget))
        .collect::<Result<Vec<_>>>()?;
    PsuccEstimate::from_records(&records)
}

/// `Σ_s Z_max(s; β)`, which at `β = β_p` is the exact success probability.
pub fn exact_psucc(problem: &SectorProblem, beta: f64, budget: &Budget) -> Result<f64> {
    let count = crate::codes::checked_pow2(problem.syndrome_rank(), "syndromes")?;
    let mut acc = math::LogSumExp::new();
    for index in 0..count {
        let (_, e) = problem.syndrome_representative(index);
        acc.push(ClassPartition::compute(problem, &e, beta, budget)?.log_max());
    }
    Ok(math::exp(acc.value()))
}

/// `Σ_e P(e) [decoding e succeeds]`, literally over all `2^bits` errors.
pub fn exhaustive_psucc(problem: &SectorProblem, p: f64, beta: f64, budget: &Budget) -> Result<f64> {
    let bits = problem.bits();
    if bits > budget.spin_log2 {
        return Err(Error::BudgetExceeded { what: "error enumeration", needed: bits, budget: budget.spin_log2 });
    }
    let model = ErrorModel::new(p)?;
    let mut decoded: BTreeMap<Vec<u64>, (BinaryVector, u64)> = BTreeMap::new();
    let mut total = 0.0;
    for mask in 0u64..1 << bits {
        let e = BinaryVector::from_bits((0..bits).map(|i| (mask >> i) & 1 == 1));
        let s = problem.syndrome(&e)?;
        let key = s.words().to_vec();
        if !decoded.contains_key(&key) {
            let out = ml_decode(problem, &s, beta, budget)?;
            decoded.insert(key.clone(), (out.reference, out.c_max));
        }
        let (reference, c_max) = &decoded[&key];
        if problem.class_of(&e.xor(reference))? == *c_max {
            total += math::exp(model.log_probability(&e));
        }
    }
    Ok(total)
}

/// One code's success curve.
#[derive(Debug, Clone, PartialEq)]
pub struct SuccessCurve {
    pub label: String,
    pub points: Vec<(f64, PsuccEstimate)>,
}

/// Crossing point of adjacent success curves.
#[derive(Debug, Clone, PartialEq)]
pub struct Crossing {
    /// Crossing of each adjacent pair that has one.
    pub pairwise: Vec<f64>,
    pub median: f64,
    /// Largest minus smallest pairwise crossing.
    pub spread: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdScan {
    pub curves: Vec<SuccessCurve>,
    pub crossing: Option<Crossing>,
    pub diagnostic: String,
}

/// Locates where the larger code stops beating the smaller one, by linear
/// interpolation of the success difference between grid points.
pub fn estimate_crossing(curves: &[SuccessCurve]) -> (Option<Crossing>, String) {
    let mut pairwise = Vec::new();
    let mut diagnostic = String::new();
    for pair in curves.windows(2) {
        let (small, large) = (&pair[0], &pair[1]);
        let diffs: Vec<(f64, f64)> = small
            .points
            .iter()
            .zip(&large.points)
            .map(|((p, a), (_, b))| (*p, b.mean - a.mean))
            .collect();
        let found = diffs.windows(2).find_map(|w| {
            let ((p0, d0), (p1, d1)) = (w[0], w[1]);
            (d0 > 0.0 && d1 <= 0.0).then(|| p0 + (p1 - p0) * d0 / (d0 - d1))
        });
        match found {
            Some(p) => pairwise.push(p),
            None => {
                diagnostic.push_str(&alloc::format!("{} and {} do not cross on the grid; ", small.label, large.label))
            }
        }
    }
    if pairwise.is_empty() {
        return (None, diagnostic);
    }
    let mut sorted = pairwise.clone();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    let median = if sorted.len() % 2 == 1 { sorted[mid] } else { 0.5 * (sorted[mid - 1] + sorted[mid]) };
    let spread = sorted[sorted.len() - 1] - sorted[0];
    (Some(Crossing { pairwise, median, spread }), diagnostic)
}

/// Success curves over `p_grid` for an ordered family (smallest first),
/// decoded at `β_p`, and their crossing.
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
        let mut points = Vec::new();
        for (pi, &p) in p_grid.iter().enumerate() {
            let est = estimate_psucc(problem, p, nishimori_beta(p)?, trials, scan_point_seed(seed, ci, pi), budget)?;
            points.push((p, est));
        }
        curves.push(SuccessCurve { label: label.clone(), points });
    }
    let (crossing, diagnostic) = estimate_crossing(&curves);
    Ok(ThresholdScan { curves, crossing, diagnostic })
}

/// Seed used by [`threshold_scan`] for code `code_index` at grid point `p_index`.
pub fn scan_point_seed(seed: u64, code_index: usize, p_index: usize) -> u64 {
    rng::splitmix64(seed ^ rng::splitmix64(((code_index as u64) << 32) | p_index as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{self, Sector, StabilizerCode};
    use crate::gf2::BinaryMatrix;
    use crate::wegner::z0;

    const B: Budget = Budget { spin_log2: 26, coset_log2: 24 };

    #[test]
    fn nishimori_beta_values() {
        assert!((nishimori_beta(0.1).unwrap() - 0.5 * libm::log(9.0)).abs() < 1e-15);
        assert!(nishimori_beta(0.5 - 1e-9).unwrap() < 1e-8);
        assert!(nishimori_beta(0.0).is_err());
        assert!(nishimori_beta(0.5).is_err());
    }

    #[test]
    fn nishimori_beta_at_half_entropy_point() {
        // Independent bisection for H2(p) = 1/2.
        let h = |p: f64| -p * libm::log2(p) - (1.0 - p) * libm::log2(1.0 - p);
        let (mut lo, mut hi) = (1e-6, 0.5);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if h(mid) < 0.5 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let b = nishimori_beta(lo).unwrap();
        assert!((lo - 0.110_028).abs() < 1e-6);
        assert!((b - 1.045_228).abs() < 1e-6, "{b}");
    }

    #[test]
    fn sampling_statistics() {
        let mut r = rng::stream(3, 0);
        let zero = ErrorModel::new(0.0).unwrap();
        assert!(sample_error(&zero, 50, &mut r).is_zero());
        let model = ErrorModel::new(0.2).unwrap();
        let draws = 100_000;
        let mut ones = 0;
        for _ in 0..draws / 10 {
            ones += sample_error(&model, 5, &mut r).weight();
        }
        let mean = ones as f64 / draws as f64;
        let sigma = libm::sqrt(0.2 * 0.8 / draws as f64);
        assert!((mean - 0.2).abs() < 3.0 * sigma);
        let a = sample_error(&model, 9, &mut rng::stream(1, 1));
        assert_eq!(a, sample_error(&model, 9, &mut rng::stream(1, 1)));
        assert!(ErrorModel::new(0.7).is_err());
    }

    #[test]
    fn zero_syndrome_decodes_to_trivial_class() {
        let p = codes::toric(2).unwrap().sector(Sector::X).unwrap();
        let beta = nishimori_beta(0.05).unwrap();
        let out = ml_decode(&p, &BinaryVector::zeros(4), beta, &B).unwrap();
        assert_eq!(out.c_max, 0);
        assert_eq!(out.ties, 1);
        assert!(out.p_succ_conditional > 0.5 && out.p_succ_conditional <= 1.0);
    }

    #[test]
    fn trivial_code_always_succeeds() {
        let code = StabilizerCode::new_css(BinaryMatrix::parse("11").unwrap(), BinaryMatrix::parse("11").unwrap()).unwrap();
        let p = code.sector(Sector::X).unwrap();
        for bits in ["00", "10", "11"] {
            let out = decode_error(&p, &BinaryVector::parse(bits).unwrap(), 1.0, &B).unwrap();
            assert_eq!(out.success, Some(true));
            assert_eq!(out.p_succ_conditional, 1.0);
        }
    }

    #[test]
    fn single_flips_on_distance_three_torus_are_corrected() {
        let code = codes::toric(3).unwrap();
        let beta = nishimori_beta(0.05).unwrap();
        for sector in [Sector::X, Sector::Z, Sector::Full] {
            let p = code.sector(sector).unwrap();
            for b in 0..p.bits() {
                let e = BinaryVector::from_indices(p.bits(), &[b]);
                assert_eq!(decode_error(&p, &e, beta, &B).unwrap().success, Some(true));
            }
        }
    }

    #[test]
    fn decoding_is_gauge_invariant() {
        let p = codes::toric(3).unwrap().sector(Sector::Z).unwrap();
        let e = BinaryVector::from_indices(18, &[1, 2, 9]);
        let a = decode_error(&p, &e, 1.2, &B).unwrap();
        let b = decode_error(&p, &e.xor(&p.theta().row(3)), 1.2, &B).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn nishimori_map_identity() {
        let p = codes::toric(2).unwrap().sector(Sector::Full).unwrap();
        let model = ErrorModel::new(0.1).unwrap();
        let beta = model.nishimori_beta().unwrap();
        let mut r = rng::stream(11, 0);
        for _ in 0..20 {
            let e = sample_bits(0.1, p.bits(), &mut r);
            // Brute-force P_0(e): sum over every combination of generator rows.
            let theta = p.theta();
            let mut brute = 0.0;
            let mut seen = alloc::collections::BTreeSet::new();
            for mask in 0u32..1 << theta.rows() {
                let sigma = BinaryVector::from_bits((0..theta.rows()).map(|i| mask >> i & 1 == 1));
                let x = e.xor(&theta.combine_rows(&sigma).unwrap());
                if seen.insert(x.words().to_vec()) {
                    brute += libm::exp(model.log_probability(&x));
                }
            }
            let z = z0(&p, &e, beta, &B).unwrap().value();
            assert!((z - brute).abs() < 1e-12 * brute);
        }
    }

    #[test]
    fn exhaustive_success_equals_summed_maxima() {
        let code = codes::toric(2).unwrap();
        for sector in [Sector::X, Sector::Full] {
            let p = code.sector(sector).unwrap();
            let beta = nishimori_beta(0.1).unwrap();
            let a = exhaustive_psucc(&p, 0.1, beta, &B).unwrap();
            let b = exact_psucc(&p, beta, &B).unwrap();
            assert!((a - b).abs() < 1e-10, "{a} {b}");
        }
    }

    #[test]
    fn low_noise_success_and_determinism() {
        let p = codes::toric(2).unwrap().sector(Sector::X).unwrap();
        let beta = nishimori_beta(0.001).unwrap();
        let est = estimate_psucc(&p, 0.001, beta, 10_000, 5, &B).unwrap();
        assert!(est.mean >= 0.99);
        assert_eq!(est, estimate_psucc(&p, 0.001, beta, 10_000, 5, &B).unwrap());
        assert!(estimate_psucc(&p, 0.001, beta, 0, 5, &B).is_err());
    }

    #[test]
    fn scan_argument_checks() {
        let p = codes::toric(2).unwrap().sector(Sector::X).unwrap();
        let one = [(String::from("L2"), p.clone())];
        assert!(threshold_scan(&one, &[0.1], 10, 1, &B).is_err());
        let two = [(String::from("L2"), p.clone()), (String::from("L2b"), p)];
        assert!(threshold_scan(&two, &[0.1], 0, 1, &B).is_err());
    }

    #[test]
    fn crossing_interpolates() {
        let est = |mean| PsuccEstimate {
            trials: 1,
            successes: 0,
            mean,
            stderr: 0.0,
            mean_max_fraction: 0.0,
            stderr_max_fraction: 0.0,
        };
        let a = SuccessCurve { label: "a".into(), points: alloc::vec![(0.1, est(0.8)), (0.2, est(0.6))] };
        let b = SuccessCurve { label: "b".into(), points: alloc::vec![(0.1, est(0.9)), (0.2, est(0.5))] };
        let (c, _) = estimate_crossing(&[a, b]);
        assert!((c.unwrap().median - 0.15).abs() < 1e-12);
    }
}
