//! Random-bond Wegner models and their exact partition functions.
//!
//! A model has `N_s` Ising spins and `N_b` bonds; bond `b` is the product of
//! the spins `r` with `Θ[r][b] = 1`. With electric disorder `e` and magnetic
//! insertion `m`,
//!
//! ```text
//! 𝒵_{e,m} = 2^{-N_g} Σ_S Π_b R_b^{m_b} exp(K_b (−1)^{e_b} R_b) / (2 cosh K_b)
//! ```
//!
//! where `N_g = N_s − rank Θ`. Each spin configuration determines a bond
//! pattern `x = σΘ` (with `R_b = (−1)^{x_b}`), and every pattern in the row
//! space of `Θ` is hit exactly `2^{N_g}` times. Summing over distinct
//! patterns instead gives the same number with no prefactor.

use alloc::vec;
use alloc::vec::Vec;

use crate::codes::SectorProblem;
use crate::error::{Error, Result};
use crate::gf2::{self, BinaryMatrix, BinaryVector};
use crate::math::{self, LogSumExp};

/// Enumeration limits, as base-2 logarithms of the number of terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub spin_log2: usize,
    pub coset_log2: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Self { spin_log2: 26, coset_log2: 24 }
    }
}

/// A real number stored as `sign · exp(log_abs)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartitionValue {
    pub log_abs: f64,
    /// `1`, `-1`, or `0` for an exact zero.
    pub sign: i8,
}

impl PartitionValue {
    pub const ZERO: PartitionValue = PartitionValue { log_abs: f64::NEG_INFINITY, sign: 0 };

    pub fn from_log(log_abs: f64) -> Self {
        Self { log_abs, sign: 1 }
    }

    pub fn value(&self) -> f64 {
        f64::from(self.sign) * math::exp(self.log_abs)
    }

    /// Natural log; only meaningful for positive values.
    pub fn ln(&self) -> f64 {
        debug_assert!(self.sign > 0);
        self.log_abs
    }

    /// `self / other` as a plain float.
    pub fn ratio(&self, other: &PartitionValue) -> f64 {
        if self.sign == 0 {
            return 0.0;
        }
        f64::from(self.sign * other.sign) * math::exp(self.log_abs - other.log_abs)
    }

    /// `a − b` for nonnegative log-magnitudes.
    fn difference(pos: f64, neg: f64) -> Self {
        if pos == neg {
            return Self::ZERO;
        }
        if pos > neg {
            Self { log_abs: pos + math::log1p(-math::exp(neg - pos)), sign: 1 }
        } else {
            Self { log_abs: neg + math::log1p(-math::exp(pos - neg)), sign: -1 }
        }
    }
}

/// Counts of bond patterns by the number of flipped bonds, split by the
/// sign `(−1)^{m·x}` of the magnetic insertion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedEnumerator {
    pub positive: Vec<u64>,
    pub negative: Vec<u64>,
}

impl SignedEnumerator {
    fn new(bonds: usize) -> Self {
        Self { positive: vec![0; bonds + 1], negative: vec![0; bonds + 1] }
    }

    pub fn bonds(&self) -> usize {
        self.positive.len() - 1
    }

    /// Logs of the positive and negative parts at uniform coupling `k`.
    pub fn log_parts(&self, k: f64) -> (f64, f64) {
        let (up, down) = math::bond_log_factors(k);
        let nb = self.bonds();
        let part = |counts: &[u64]| {
            let mut acc = LogSumExp::new();
            for (w, &c) in counts.iter().enumerate() {
                if c > 0 {
                    acc.push(math::log(c as f64) + (nb - w) as f64 * up + w as f64 * down);
                }
            }
            acc.value()
        };
        (part(&self.positive), part(&self.negative))
    }

    /// `Σ_x (−1)^{m·x} Π_b f_b` at uniform coupling `k`.
    pub fn value(&self, k: f64) -> PartitionValue {
        let (p, n) = self.log_parts(k);
        PartitionValue::difference(p, n)
    }

    /// Unsigned sum (the `m = 0` value) at uniform coupling `k`.
    pub fn unsigned_value(&self, k: f64) -> PartitionValue {
        let (p, n) = self.log_parts(k);
        let mut acc = LogSumExp::new();
        acc.push(p);
        acc.push(n);
        PartitionValue::from_log(acc.value())
    }

    /// Signed over unsigned sum, a correlator in `[-1, 1]`.
    pub fn correlator(&self, k: f64) -> f64 {
        let (p, n) = self.log_parts(k);
        if n == f64::NEG_INFINITY {
            return 1.0;
        }
        if p == f64::NEG_INFINITY {
            return -1.0;
        }
        math::tanh(0.5 * (p - n))
    }

    /// Mean and variance of `E = −Σ_b (−1)^{e_b} R_b` (unit couplings) in the
    /// `m = 0` ensemble at coupling `k`.
    pub fn energy_moments(&self, k: f64) -> (f64, f64) {
        let (up, down) = math::bond_log_factors(k);
        let nb = self.bonds();
        let logs: Vec<Option<f64>> = (0..=nb)
            .map(|w| {
                let c = self.positive[w] + self.negative[w];
                (c > 0).then(|| math::log(c as f64) + (nb - w) as f64 * up + w as f64 * down)
            })
            .collect();
        let top = logs.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max);
        let (mut z, mut e1, mut e2) = (0.0, 0.0, 0.0);
        for (w, l) in logs.iter().enumerate() {
            if let Some(l) = l {
                let t = math::exp(l - top);
                let energy = 2.0 * w as f64 - nb as f64;
                z += t;
                e1 += t * energy;
                e2 += t * energy * energy;
            }
        }
        let mean = e1 / z;
        (mean, e2 / z - mean * mean)
    }

    pub fn total_count(&self) -> u64 {
        self.positive.iter().chain(&self.negative).sum()
    }

    /// Smallest flipped-bond count that occurs.
    pub fn min_weight(&self) -> Option<usize> {
        (0..=self.bonds()).find(|&w| self.positive[w] + self.negative[w] > 0)
    }
}

/// Visits `offset + span(rows)` in Gray-code order and histograms the
/// weights. Rows from `tag_from` on also flip bits of a tag, so each tag
/// value gets its own histogram.
fn walk_patterns(
    rows: &BinaryMatrix,
    offset: &BinaryVector,
    m: Option<&BinaryVector>,
    tag_from: usize,
) -> Vec<SignedEnumerator> {
    let nb = offset.len();
    let r = rows.rows();
    let tags = 1usize << (r - tag_from);
    let stride = 2 * (nb + 1);
    let mut hist = vec![0u64; tags * stride];
    let sign_of: Vec<usize> = (0..r)
        .map(|i| m.is_some_and(|m| gf2::dot_parity(rows.row_words(i), m.words())) as usize)
        .collect();
    let tag_of: Vec<usize> = (0..r).map(|i| if i >= tag_from { 1 << (i - tag_from) } else { 0 }).collect();
    let total: u64 = 1 << r;
    if nb <= 64 {
        let words: Vec<u64> = (0..r).map(|i| rows.row_words(i).first().copied().unwrap_or(0)).collect();
        let mut x = offset.words().first().copied().unwrap_or(0);
        let (mut sign, mut tag) = (0usize, 0usize);
        hist[x.count_ones() as usize * 2] += 1;
        for i in 1..total {
            let k = i.trailing_zeros() as usize;
            x ^= words[k];
            sign ^= sign_of[k];
            tag ^= tag_of[k];
            hist[tag * stride + x.count_ones() as usize * 2 + sign] += 1;
        }
    } else {
        let mut x = offset.words().to_vec();
        let (mut sign, mut tag) = (0usize, 0usize);
        hist[gf2::popcount(&x) * 2] += 1;
        for i in 1..total {
            let k = i.trailing_zeros() as usize;
            gf2::xor_into(&mut x, rows.row_words(k));
            sign ^= sign_of[k];
            tag ^= tag_of[k];
            hist[tag * stride + gf2::popcount(&x) * 2 + sign] += 1;
        }
    }
    (0..tags)
        .map(|t| {
            let mut en = SignedEnumerator::new(nb);
            for w in 0..=nb {
                en.positive[w] = hist[t * stride + 2 * w];
                en.negative[w] = hist[t * stride + 2 * w + 1];
            }
            en
        })
        .collect()
}

/// Same walk for bond-dependent couplings; returns logs of the positive and
/// negative parts of `Σ_x (−1)^{m·x} Π_b f_b(e_b + x_b)`.
fn walk_weighted(rows: &BinaryMatrix, offset: &BinaryVector, m: Option<&BinaryVector>, ks: &[f64]) -> (f64, f64) {
    let factors: Vec<(f64, f64)> = ks.iter().map(|&k| math::bond_log_factors(k)).collect();
    let base: f64 = factors.iter().map(|f| f.0).sum();
    let delta: Vec<f64> = factors.iter().map(|f| f.1 - f.0).collect();
    let sign_of: Vec<bool> =
        (0..rows.rows()).map(|i| m.is_some_and(|m| gf2::dot_parity(rows.row_words(i), m.words()))).collect();
    let mut acc = [LogSumExp::new(), LogSumExp::new()];
    let mut x = offset.clone();
    let mut sign = false;
    let log_term = |x: &BinaryVector| base + x.ones().map(|b| delta[b]).sum::<f64>();
    acc[0].push(log_term(&x));
    for i in 1..1u64 << rows.rows() {
        let k = i.trailing_zeros() as usize;
        gf2::xor_into(x.words_mut(), rows.row_words(k));
        sign ^= sign_of[k];
        acc[sign as usize].push(log_term(&x));
    }
    (acc[0].value(), acc[1].value())
}

/// A Wegner model: bond incidence `Θ` and per-bond couplings `J_b > 0`.
/// Evaluation at inverse temperature `β` uses `K_b = β J_b`.
#[derive(Debug, Clone, PartialEq)]
pub struct WegnerModel {
    theta: BinaryMatrix,
    couplings: Vec<f64>,
    rank: usize,
}

impl WegnerModel {
    pub fn new(theta: BinaryMatrix, couplings: Vec<f64>) -> Result<Self> {
        if couplings.len() != theta.cols() {
            return Err(Error::DimensionMismatch { expected: theta.cols(), found: couplings.len() });
        }
        if let Some(&bad) = couplings.iter().find(|&&j| !(j > 0.0 && j.is_finite())) {
            return Err(Error::Domain { what: "coupling", value: bad });
        }
        let rank = theta.rank();
        Ok(Self { theta, couplings, rank })
    }

    /// All couplings equal to one.
    pub fn uniform(theta: BinaryMatrix) -> Self {
        let nb = theta.cols();
        Self::new(theta, vec![1.0; nb]).expect("unit couplings are valid")
    }

    pub fn theta(&self) -> &BinaryMatrix {
        &self.theta
    }

    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }

    pub fn spins(&self) -> usize {
        self.theta.rows()
    }

    pub fn bonds(&self) -> usize {
        self.theta.cols()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `N_g = N_s − rank Θ`; the clean model has `2^{N_g}` ground states.
    pub fn degeneracy(&self) -> usize {
        self.spins() - self.rank
    }

    pub fn is_uniform(&self) -> bool {
        self.couplings.windows(2).all(|w| w[0] == w[1])
    }

    fn check_inputs(&self, e: &BinaryVector, m: Option<&BinaryVector>, beta: f64) -> Result<()> {
        if e.len() != self.bonds() {
            return Err(Error::DimensionMismatch { expected: self.bonds(), found: e.len() });
        }
        if let Some(m) = m {
            if m.len() != self.bonds() {
                return Err(Error::DimensionMismatch { expected: self.bonds(), found: m.len() });
            }
        }
        if !(beta >= 0.0 && beta.is_finite()) {
            return Err(Error::Domain { what: "beta", value: beta });
        }
        Ok(())
    }

    fn sum(&self, rows: &BinaryMatrix, e: &BinaryVector, m: Option<&BinaryVector>, beta: f64) -> PartitionValue {
        if self.is_uniform() {
            let k = beta * self.couplings.first().copied().unwrap_or(1.0);
            walk_patterns(rows, e, m, rows.rows())[0].value(k)
        } else {
            let ks: Vec<f64> = self.couplings.iter().map(|j| beta * j).collect();
            let (p, n) = walk_weighted(rows, e, m, &ks);
            PartitionValue::difference(p, n)
        }
    }

    /// Sum over all `2^{N_s}` spin configurations, divided by `2^{N_g}`.
    pub fn eval_spin_enum(
        &self,
        e: &BinaryVector,
        m: Option<&BinaryVector>,
        beta: f64,
        budget: &Budget,
    ) -> Result<PartitionValue> {
        self.check_inputs(e, m, beta)?;
        if self.spins() > budget.spin_log2 {
            return Err(Error::BudgetExceeded {
                what: "spin enumeration",
                needed: self.spins(),
                budget: budget.spin_log2,
            });
        }
        let mut v = self.sum(&self.theta, e, m, beta);
        v.log_abs -= self.degeneracy() as f64 * math::ln2();
        Ok(v)
    }

    /// Sum over the `2^{rank Θ}` distinct bond patterns.
    pub fn eval_coset_enum(
        &self,
        e: &BinaryVector,
        m: Option<&BinaryVector>,
        beta: f64,
        budget: &Budget,
    ) -> Result<PartitionValue> {
        self.check_inputs(e, m, beta)?;
        if self.rank > budget.coset_log2 {
            return Err(Error::BudgetExceeded { what: "coset enumeration", needed: self.rank, budget: budget.coset_log2 });
        }
        Ok(self.sum(&self.theta.row_basis(), e, m, beta))
    }

    /// Whichever exact evaluation is cheaper.
    pub fn evaluate(&self, e: &BinaryVector, m: Option<&BinaryVector>, beta: f64, budget: &Budget) -> Result<PartitionValue> {
        if self.rank <= budget.coset_log2 {
            self.eval_coset_enum(e, m, beta, budget)
        } else {
            self.eval_spin_enum(e, m, beta, budget)
        }
    }

    /// Pattern counts by weight (uniform models), usable at any coupling.
    pub fn enumerator(&self, e: &BinaryVector, m: Option<&BinaryVector>, budget: &Budget) -> Result<SignedEnumerator> {
        self.check_inputs(e, m, 0.0)?;
        if self.rank > budget.coset_log2 {
            return Err(Error::BudgetExceeded { what: "coset enumeration", needed: self.rank, budget: budget.coset_log2 });
        }
        let basis = self.theta.row_basis();
        Ok(walk_patterns(&basis, e, m, basis.rows()).swap_remove(0))
    }

    /// `𝒵_{e,m} / 𝒵_{e,0}`.
    pub fn correlator(&self, e: &BinaryVector, m: &BinaryVector, beta: f64, budget: &Budget) -> Result<f64> {
        let num = self.evaluate(e, Some(m), beta, budget)?;
        let den = self.evaluate(e, None, beta, budget)?;
        if den.sign <= 0 {
            return Err(Error::Invalid("vanishing partition function".into()));
        }
        Ok(num.ratio(&den))
    }

    /// Number of spin configurations with every bond satisfied, counted by
    /// running over all `2^{N_s}` configurations.
    pub fn count_ground_states(&self, budget: &Budget) -> Result<u64> {
        if self.spins() > budget.spin_log2 {
            return Err(Error::BudgetExceeded { what: "spin enumeration", needed: self.spins(), budget: budget.spin_log2 });
        }
        let zero = BinaryVector::zeros(self.bonds());
        Ok(walk_patterns(&self.theta, &zero, None, self.spins())[0].positive[0])
    }

    /// Couplings evaluated at `beta`, i.e. the `K_b`.
    pub fn effective_couplings(&self, beta: f64) -> Vec<f64> {
        self.couplings.iter().map(|j| beta * j).collect()
    }
}

/// Dual model at `beta`: `Θ* = exact_dual(Θ)` with couplings `K*_b` given by
/// `tanh K_b = exp(−2 K*_b)`. The result is meant to be evaluated at `β = 1`.
pub fn dual_model(model: &WegnerModel, beta: f64) -> Result<WegnerModel> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::Domain { what: "beta (dual coupling undefined)", value: beta });
    }
    let dual_k = model.effective_couplings(beta).iter().map(|&k| -0.5 * math::log(math::tanh(k))).collect();
    WegnerModel::new(model.theta.exact_dual(), dual_k)
}

/// Natural log of `2^{(N_g − N_s)/2} 𝒵_{e,m}(Θ, K) / Π_b √(tanh² K_b + 1)`,
/// the quantity preserved by duality when `e` and `m` trade places.
pub fn duality_side(
    model: &WegnerModel,
    e: &BinaryVector,
    m: Option<&BinaryVector>,
    beta: f64,
    budget: &Budget,
) -> Result<PartitionValue> {
    let mut z = model.evaluate(e, m, beta, budget)?;
    let norm: f64 = model
        .effective_couplings(beta)
        .iter()
        .map(|&k| 0.5 * math::log(math::tanh(k) * math::tanh(k) + 1.0))
        .sum();
    let n = model.degeneracy() as f64 - model.spins() as f64;
    z.log_abs += 0.5 * n * math::ln2() - norm;
    Ok(z)
}

/// Coupling fixed by duality: `sinh 2K = 1`.
pub fn self_dual_coupling() -> f64 {
    0.5 * math::log(1.0 + core::f64::consts::SQRT_2)
}

/// Per-class pattern counts of a sector: entry `c` enumerates
/// `e + c + rowspace(Θ)`, with signs from `m` when given.
pub fn class_enumerators(
    problem: &SectorProblem,
    e: &BinaryVector,
    m: Option<&BinaryVector>,
    budget: &Budget,
) -> Result<Vec<SignedEnumerator>> {
    if e.len() != problem.bits() {
        return Err(Error::DimensionMismatch { expected: problem.bits(), found: e.len() });
    }
    let basis = problem.theta().row_basis();
    let needed = basis.rows() + problem.k();
    if needed > budget.coset_log2 {
        return Err(Error::BudgetExceeded { what: "class enumeration", needed, budget: budget.coset_log2 });
    }
    let rows = basis.vstack(problem.logicals())?;
    Ok(walk_patterns(&rows, e, m, basis.rows()))
}

/// Every class partition function of one syndrome at one `β`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassPartition {
    /// `ln Z_c` indexed by class id.
    pub log_z: Vec<f64>,
    pub log_total: f64,
    /// Class with the largest `Z_c`, smallest id on ties.
    pub c_max: u64,
}

impl ClassPartition {
    pub fn from_enumerators(enums: &[SignedEnumerator], beta: f64) -> Self {
        let log_z: Vec<f64> = enums.iter().map(|en| en.unsigned_value(beta).log_abs).collect();
        let mut acc = LogSumExp::new();
        let mut c_max = 0;
        for (c, &z) in log_z.iter().enumerate() {
            acc.push(z);
            if z > log_z[c_max] {
                c_max = c;
            }
        }
        Self { log_total: acc.value(), log_z, c_max: c_max as u64 }
    }

    pub fn compute(problem: &SectorProblem, e: &BinaryVector, beta: f64, budget: &Budget) -> Result<Self> {
        Ok(Self::from_enumerators(&class_enumerators(problem, e, None, budget)?, beta))
    }

    pub fn log_max(&self) -> f64 {
        self.log_z[self.c_max as usize]
    }

    /// `Z_max / Z_tot`.
    pub fn max_fraction(&self) -> f64 {
        math::exp(self.log_max() - self.log_total)
    }

    /// Classes whose `Z_c` equals the maximum exactly.
    pub fn ties(&self) -> usize {
        self.log_z.iter().filter(|&&z| z == self.log_max()).count()
    }
}

/// `Z_0(e; β)`: the degeneracy model of the sector with disorder `e`.
pub fn z0(problem: &SectorProblem, e: &BinaryVector, beta: f64, budget: &Budget) -> Result<PartitionValue> {
    WegnerModel::uniform(problem.theta().clone()).evaluate(e, None, beta, budget)
}

/// `Z_c(e; β) = Z_0(e + c; β)` for class id `class`.
pub fn zc(problem: &SectorProblem, e: &BinaryVector, class: u64, beta: f64, budget: &Budget) -> Result<PartitionValue> {
    z0(problem, &e.xor(&problem.class_vector(class)), beta, budget)
}

/// `Z_tot(s; β)`: the model on the exact dual of the checks, which sums all classes at once.
pub fn ztot(problem: &SectorProblem, e: &BinaryVector, beta: f64, budget: &Budget) -> Result<PartitionValue> {
    WegnerModel::uniform(problem.total_theta().clone()).evaluate(e, None, beta, budget)
}

/// `Z_max(s; β)` and the maximizing class.
pub fn zmax(problem: &SectorProblem, e: &BinaryVector, beta: f64, budget: &Budget) -> Result<(PartitionValue, u64)> {
    let cp = ClassPartition::compute(problem, e, beta, budget)?;
    Ok((PartitionValue::from_log(cp.log_max()), cp.c_max))
}

/// `Q_tot^m(e; β)`: insertion `m` averaged over every class.
pub fn correlator_tot(problem: &SectorProblem, e: &BinaryVector, m: &BinaryVector, beta: f64, budget: &Budget) -> Result<f64> {
    WegnerModel::uniform(problem.total_theta().clone()).correlator(e, m, beta, budget)
}

/// `Q_c^m(e; β)`: insertion `m` in the model with the class-`c` defect.
pub fn correlator_c(
    problem: &SectorProblem,
    e: &BinaryVector,
    class: u64,
    m: &BinaryVector,
    beta: f64,
    budget: &Budget,
) -> Result<f64> {
    let shifted = e.xor(&problem.class_vector(class));
    WegnerModel::uniform(problem.theta().clone()).correlator(&shifted, m, beta, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{self, Sector};

    fn m(s: &str) -> BinaryMatrix {
        BinaryMatrix::parse(s).unwrap()
    }

    const B: Budget = Budget { spin_log2: 26, coset_log2: 24 };

    #[test]
    fn single_bond_is_one() {
        let model = WegnerModel::uniform(m("1"));
        for beta in [0.0, 0.3, 2.0] {
            for e in ["0", "1"] {
                let v = model.eval_spin_enum(&BinaryVector::parse(e).unwrap(), None, beta, &B).unwrap();
                assert!((v.value() - 1.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn ising_ring_matches_transfer_matrix() {
        // Periodic 3-spin chain: Z = Tr T^3 with T = [[e^K, e^-K], [e^-K, e^K]],
        // eigenvalues 2cosh K and 2sinh K; the pattern sum halves it (N_g = 1).
        let ring = BinaryMatrix::circulant(&[true, true], 3).unwrap();
        let model = WegnerModel::uniform(ring);
        for beta in [0.1, 0.7, 1.5] {
            let (c, s) = (2.0 * libm::cosh(beta), 2.0 * libm::sinh(beta));
            let expected = (c * c * c + s * s * s) / (c * c * c) / 2.0;
            let zero = BinaryVector::zeros(3);
            let a = model.eval_spin_enum(&zero, None, beta, &B).unwrap().value();
            let b = model.eval_coset_enum(&zero, None, beta, &B).unwrap().value();
            assert!((a - expected).abs() < 1e-14 * expected);
            assert!((b - expected).abs() < 1e-14 * expected);
        }
    }

    #[test]
    fn insertion_in_kernel_is_identity() {
        let theta = m("1100;0110;0011");
        let model = WegnerModel::new(theta.clone(), vec![0.5, 1.0, 1.5, 2.0]).unwrap();
        let e = BinaryVector::parse("1010").unwrap();
        let kernel = theta.nullspace();
        let ins = kernel.row(0);
        let with = model.eval_spin_enum(&e, Some(&ins), 0.8, &B).unwrap();
        let without = model.eval_spin_enum(&e, None, 0.8, &B).unwrap();
        assert!((with.value() - without.value()).abs() < 1e-14);
    }

    #[test]
    fn gauge_shift_leaves_value_unchanged() {
        let theta = m("11010;01101;10011");
        let model = WegnerModel::uniform(theta.clone());
        let e = BinaryVector::parse("10000").unwrap();
        let shifted = e.xor(&theta.row(0)).xor(&theta.row(2));
        let a = model.eval_coset_enum(&e, None, 0.9, &B).unwrap();
        let b = model.eval_coset_enum(&shifted, None, 0.9, &B).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn low_temperature_value_increases() {
        let model = WegnerModel::uniform(BinaryMatrix::circulant(&[true, true], 5).unwrap());
        let zero = BinaryVector::zeros(5);
        let mut last = 0.0;
        for beta in [0.5, 1.0, 2.0, 4.0, 8.0] {
            let v = model.eval_coset_enum(&zero, None, beta, &B).unwrap().value();
            assert!(v > last);
            last = v;
        }
        assert!((last - 1.0).abs() < 1e-5);
    }

    #[test]
    fn self_dual_coupling_is_fixed() {
        let k = self_dual_coupling();
        assert!((libm::sinh(2.0 * k) - 1.0).abs() < 1e-15);
        let model = WegnerModel::uniform(m("1"));
        let dual = dual_model(&model, k).unwrap();
        assert_eq!(dual.spins(), 0);
        assert!((dual.couplings()[0] - k).abs() < 1e-14);
    }

    #[test]
    fn dual_rejects_zero_coupling() {
        assert!(dual_model(&WegnerModel::uniform(m("11")), 0.0).is_err());
        assert!(WegnerModel::new(m("11"), vec![1.0, 0.0]).is_err());
    }

    #[test]
    fn budget_is_enforced() {
        let model = WegnerModel::uniform(BinaryMatrix::identity(30));
        let e = BinaryVector::zeros(30);
        assert!(matches!(model.eval_spin_enum(&e, None, 1.0, &B), Err(Error::BudgetExceeded { .. })));
        assert!(matches!(model.eval_coset_enum(&e, None, 1.0, &B), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn class_sum_matches_total_model() {
        let code = codes::toric(3).unwrap();
        for sector in [Sector::X, Sector::Full] {
            let p = code.sector(sector).unwrap();
            let e = BinaryVector::from_indices(p.bits(), &[0, 4, 7]);
            let cp = ClassPartition::compute(&p, &e, 0.9, &B).unwrap();
            let total = ztot(&p, &e, 0.9, &B).unwrap();
            assert!((cp.log_total - total.log_abs).abs() < 1e-12);
            for c in 0..p.num_classes().unwrap() {
                let direct = zc(&p, &e, c, 0.9, &B).unwrap();
                assert!((cp.log_z[c as usize] - direct.log_abs).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn ground_states_of_clean_models() {
        let b = Budget::default();
        // Stripes of 110, 011, 101, 000 on the 3x6 cyclic product.
        let dt = codes::debierre_turban(3, 3, 6).unwrap();
        let (_, gz) = dt.css_parts().unwrap();
        let model = WegnerModel::uniform(gz.clone());
        assert_eq!(model.count_ground_states(&b).unwrap(), 4);
        assert_eq!(model.degeneracy(), 2);
        // 1+x+x^3 on 7 (k = 3) against 1+x on 3 (k = 1): three basis states.
        let mixed = codes::cyclic_hp(&[true, true, false, true], 7, &[true, true], 3).unwrap();
        let (_, gz) = mixed.css_parts().unwrap();
        let model = WegnerModel::uniform(gz.clone());
        assert_eq!(model.spins(), 21);
        assert_eq!(model.count_ground_states(&b).unwrap(), 8);
        // At 7x7 the count follows from the rank: 2^(3*3).
        let full = codes::cyclic_hp(&[true, true, false, true], 7, &[true, true, false, true], 7).unwrap();
        let (_, gz) = full.css_parts().unwrap();
        assert_eq!(WegnerModel::uniform(gz.clone()).degeneracy(), 9);
    }

    proptest::proptest! {
        #[test]
        fn duality_exchanges_disorder_and_insertion(
            spins in 1usize..6,
            bonds in 2usize..9,
            bits in proptest::collection::vec(proptest::bool::ANY, 64),
            ks in proptest::collection::vec(0.05f64..2.0, 8),
            beta in 0.2f64..1.5,
        ) {
            let rows: Vec<BinaryVector> = (0..spins)
                .map(|r| BinaryVector::from_bits((0..bonds).map(|b| bits[(r * bonds + b) % 64])))
                .collect();
            let theta = BinaryMatrix::from_rows(bonds, &rows).unwrap();
            let model = WegnerModel::new(theta, ks[..bonds].to_vec()).unwrap();
            let e = BinaryVector::from_bits((0..bonds).map(|b| bits[(b * 7 + 3) % 64]));
            let left = duality_side(&model, &e, None, beta, &B).unwrap();
            let dual = dual_model(&model, beta).unwrap();
            let right = duality_side(&dual, &BinaryVector::zeros(bonds), Some(&e), 1.0, &B).unwrap();
            proptest::prop_assert_eq!(left.sign, right.sign);
            proptest::prop_assert!((left.log_abs - right.log_abs).abs() < 1e-10, "{:?} vs {:?}", left, right);
        }
    }
}
