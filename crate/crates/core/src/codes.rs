//! Stabilizer and CSS codes, their constructions, and the per-sector view
//! used by the spin models and the decoder.
//!
//! Pauli errors are binary vectors `e = (v|u)` of length `2n`: `v` marks X
//! (bit flip) positions and `u` marks Z (phase flip) positions.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;

use crate::error::{Error, Result};
use crate::gf2::{self, BinaryMatrix, BinaryVector, CosetMin, CosetSearch};

/// A validated stabilizer code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerCode {
    n: usize,
    generators: BinaryMatrix,
    css: Option<(BinaryMatrix, BinaryMatrix)>,
    rank: usize,
}

/// `[[n, k, d]]` together with whether `d` is proven.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodeParams {
    pub n: usize,
    pub k: usize,
    /// `None` means infinite (the code encodes nothing).
    pub d: Option<usize>,
    pub d_exact: bool,
}

impl CodeParams {
    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }
}

impl core::fmt::Display for CodeParams {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self.d {
            Some(d) if self.d_exact => write!(f, "[[{},{},{}]]", self.n, self.k, d),
            Some(d) => write!(f, "[[{},{},<={}]]", self.n, self.k, d),
            None => write!(f, "[[{},{},inf]]", self.n, self.k),
        }
    }
}

impl StabilizerCode {
    /// Validates a general generator matrix `G = (G_X | G_Z)`.
    pub fn new_stabilizer(generators: BinaryMatrix) -> Result<Self> {
        if generators.cols() % 2 == 1 {
            return Err(Error::OddLength(generators.cols()));
        }
        let conj = generators.conjugate()?;
        let gram = generators.mul_transpose(&conj)?;
        for a in 0..gram.rows() {
            for b in a + 1..gram.cols() {
                if gram.get(a, b) {
                    return Err(Error::Anticommuting { row_a: a, row_b: b });
                }
            }
        }
        let rank = generators.rank();
        Ok(Self { n: generators.cols() / 2, generators, css: None, rank })
    }

    /// CSS code with X-type generators `gx` and Z-type generators `gz`.
    pub fn new_css(gx: BinaryMatrix, gz: BinaryMatrix) -> Result<Self> {
        if gx.cols() != gz.cols() {
            return Err(Error::DimensionMismatch { expected: gx.cols(), found: gz.cols() });
        }
        let overlap = gx.mul_transpose(&gz)?;
        for x_row in 0..overlap.rows() {
            for z_row in 0..overlap.cols() {
                if overlap.get(x_row, z_row) {
                    return Err(Error::NotOrthogonal { x_row, z_row });
                }
            }
        }
        let generators = gx.block_diag(&gz);
        let rank = gx.rank() + gz.rank();
        Ok(Self { n: gx.cols(), generators, css: Some((gx, gz)), rank })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.n - self.rank
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Number of generator rows (including redundant ones).
    pub fn num_generators(&self) -> usize {
        self.generators.rows()
    }

    /// Count of linearly dependent generator rows.
    pub fn redundancy(&self) -> usize {
        self.generators.rows() - self.rank
    }

    pub fn generators(&self) -> &BinaryMatrix {
        &self.generators
    }

    /// `G̃ = (G_Z | G_X)`: its product with `eᵀ` is the syndrome.
    pub fn conjugate_generators(&self) -> BinaryMatrix {
        self.generators.conjugate().expect("even width")
    }

    pub fn css_parts(&self) -> Option<(&BinaryMatrix, &BinaryMatrix)> {
        self.css.as_ref().map(|(x, z)| (x, z))
    }

    pub fn is_css(&self) -> bool {
        self.css.is_some()
    }

    /// `s = G̃ eᵀ`.
    pub fn syndrome(&self, e: &BinaryVector) -> Result<BinaryVector> {
        if e.len() != 2 * self.n {
            return Err(Error::DimensionMismatch { expected: 2 * self.n, found: e.len() });
        }
        self.conjugate_generators().mul_vec(e)
    }

    /// Sectors in which errors are decoded: X and Z for CSS codes, one full sector otherwise.
    pub fn sectors(&self) -> Vec<Sector> {
        if self.is_css() {
            vec![Sector::X, Sector::Z]
        } else {
            vec![Sector::Full]
        }
    }

    pub fn sector(&self, sector: Sector) -> Result<SectorProblem> {
        SectorProblem::new(self, sector)
    }

    pub fn params(&self, cap: usize) -> Result<CodeParams> {
        distance(self, cap)
    }
}

/// Hypergraph product of `h1` (`r1×n1`) and `h2` (`r2×n2`):
/// `G_X = (I_{r2}⊗H1, H2⊗I_{r1})`, `G_Z = (H2ᵀ⊗I_{n1}, I_{n2}⊗H1ᵀ)`.
pub fn hp_code(h1: &BinaryMatrix, h2: &BinaryMatrix) -> Result<StabilizerCode> {
    if h1.is_empty() || h2.is_empty() {
        return Err(Error::Invalid("hypergraph product needs nonempty matrices".into()));
    }
    let (r1, n1) = (h1.rows(), h1.cols());
    let (r2, n2) = (h2.rows(), h2.cols());
    let gx = BinaryMatrix::identity(r2).kron(h1).hstack(&h2.kron(&BinaryMatrix::identity(r1)))?;
    let gz = h2
        .transpose()
        .kron(&BinaryMatrix::identity(n1))
        .hstack(&BinaryMatrix::identity(n2).kron(&h1.transpose()))?;
    StabilizerCode::new_css(gx, gz)
}

/// Hypergraph product of two square circulants. Polynomials list
/// coefficients from degree 0 upward.
pub fn cyclic_hp(h1: &[bool], n1: usize, h2: &[bool], n2: usize) -> Result<StabilizerCode> {
    hp_code(&BinaryMatrix::circulant(h1, n1)?, &BinaryMatrix::circulant(h2, n2)?)
}

/// Toric code on an `l×l` torus, `[[2l², 2, l]]`.
pub fn toric(l: usize) -> Result<StabilizerCode> {
    cyclic_hp(&[true, true], l, &[true, true], l)
}

/// Cyclic product of `1+x` (size `n1`) with `1+x+…+x^{l-1}` (size `n2`).
pub fn debierre_turban(l: usize, n1: usize, n2: usize) -> Result<StabilizerCode> {
    cyclic_hp(&[true, true], n1, &vec![true; l], n2)
}

/// Parses a polynomial given as a bit string, lowest degree first (`"1101"` is `1+x+x³`).
pub fn parse_poly(s: &str) -> Result<Vec<bool>> {
    Ok(BinaryVector::parse(s)?.iter().collect())
}

/// Layered code built from an inner code and a ring of `layers` copies:
/// `G_X = (I⊗G, R⊗I)` and `G_Z = [[Rᵀ⊗I, I⊗Gᵀ], [I⊗G̃, 0]]` with `R` the
/// `1+x` circulant. With a toric inner code the X sector is a 3D Ising model
/// and the Z sector a 3D plaquette gauge model.
pub fn gauge_code(inner: &StabilizerCode, layers: usize) -> Result<StabilizerCode> {
    let g = inner.generators();
    let g_conj = inner.conjugate_generators();
    let ns = g.rows();
    let width = g.cols();
    let ring = BinaryMatrix::circulant(&[true, true], layers)?;
    let id_l = BinaryMatrix::identity(layers);
    let gx = id_l.kron(g).hstack(&ring.kron(&BinaryMatrix::identity(ns)))?;
    let top = ring
        .transpose()
        .kron(&BinaryMatrix::identity(width))
        .hstack(&id_l.kron(&g.transpose()))?;
    let bottom = id_l.kron(&g_conj).hstack(&BinaryMatrix::zeros(layers * ns, layers * ns))?;
    StabilizerCode::new_css(gx, top.vstack(&bottom)?)
}

/// Random biregular parity-check matrix with `row_weight` ones per row and
/// `col_weight` per column, stacked from `col_weight` column-permuted bands.
pub fn gallager_ldpc(row_weight: usize, col_weight: usize, n_c: usize, seed: u64) -> Result<BinaryMatrix> {
    if row_weight == 0 || col_weight == 0 || n_c == 0 {
        return Err(Error::Infeasible("weights and length must be positive".into()));
    }
    if row_weight >= col_weight {
        return Err(Error::Infeasible(alloc::format!(
            "row weight {row_weight} must be below column weight {col_weight}"
        )));
    }
    if !n_c.is_multiple_of(row_weight) {
        return Err(Error::Infeasible(alloc::format!("row weight {row_weight} must divide length {n_c}")));
    }
    let band = n_c / row_weight;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    const ATTEMPTS: usize = 10_000;
    for _ in 0..ATTEMPTS {
        let mut h = BinaryMatrix::zeros(band * col_weight, n_c);
        for b in 0..col_weight {
            let mut perm: Vec<usize> = (0..n_c).collect();
            if b > 0 {
                perm.shuffle(&mut rng);
            }
            for r in 0..band {
                for j in 0..row_weight {
                    h.set(b * band + r, perm[r * row_weight + j], true);
                }
            }
        }
        if has_distinct(&h.row_vectors()) && has_distinct(&h.transpose().row_vectors()) {
            return Ok(h);
        }
    }
    Err(Error::Infeasible(alloc::format!("no matrix without repeated rows or columns in {ATTEMPTS} draws")))
}

fn has_distinct(rows: &[BinaryVector]) -> bool {
    let mut sorted = rows.to_vec();
    sorted.sort_by(BinaryVector::lex_cmp);
    sorted.windows(2).all(|w| w[0] != w[1])
}

/// Which error type a spin model describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sector {
    /// X-type errors of a CSS code: degeneracy `G_X`, checks `G_Z`.
    X,
    /// Z-type errors of a CSS code: degeneracy `G_Z`, checks `G_X`.
    Z,
    /// Whole Pauli errors `(v|u)`: degeneracy `G`, checks `G̃`.
    Full,
}

impl core::fmt::Display for Sector {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            Sector::X => "X",
            Sector::Z => "Z",
            Sector::Full => "full",
        })
    }
}

impl core::str::FromStr for Sector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "x" => Ok(Sector::X),
            "z" => Ok(Sector::Z),
            "full" => Ok(Sector::Full),
            _ => Err(Error::Invalid(alloc::format!("unknown sector {s:?}"))),
        }
    }
}

/// One decoding problem: binary errors of length `bits()`, degenerate
/// modulo `theta`, with syndrome `checks · eᵀ`.
///
/// Classes of zero-syndrome vectors are numbered by `k`-bit ids: bit `i`
/// is the coefficient of `logicals` row `i`. The dual logicals are chosen
/// so that `x · dual_i` reads that coefficient off directly.
#[derive(Debug, Clone)]
pub struct SectorProblem {
    sector: Sector,
    n_qubits: usize,
    theta: BinaryMatrix,
    checks: BinaryMatrix,
    logicals: BinaryMatrix,
    dual_logicals: BinaryMatrix,
    total_theta: BinaryMatrix,
    syndrome_pivots: Vec<usize>,
    check_rank: usize,
}

impl SectorProblem {
    pub fn new(code: &StabilizerCode, sector: Sector) -> Result<Self> {
        let (theta, checks) = match (sector, code.css_parts()) {
            (Sector::X, Some((gx, gz))) => (gx.clone(), gz.clone()),
            (Sector::Z, Some((gx, gz))) => (gz.clone(), gx.clone()),
            (Sector::Full, _) => (code.generators().clone(), code.conjugate_generators()),
            (_, None) => return Err(Error::Invalid(alloc::format!("sector {sector} needs a CSS code"))),
        };
        let logicals = complement_basis(&checks.nullspace(), &theta);
        let duals = complement_basis(&theta.nullspace(), &checks);
        let pairing = logicals.mul_transpose(&duals)?;
        let inv = pairing
            .inverse()
            .ok_or_else(|| Error::Invalid("logical pairing is singular".into()))?;
        let dual_logicals = inv.transpose().mul(&duals)?;
        let rref = checks.rref();
        Ok(Self {
            sector,
            n_qubits: code.n(),
            total_theta: checks.exact_dual(),
            syndrome_pivots: rref.pivots,
            check_rank: rref.rank,
            theta,
            checks,
            logicals,
            dual_logicals,
        })
    }

    pub fn sector(&self) -> Sector {
        self.sector
    }

    /// Number of bonds (error bits).
    pub fn bits(&self) -> usize {
        self.theta.cols()
    }

    pub fn theta(&self) -> &BinaryMatrix {
        &self.theta
    }

    pub fn checks(&self) -> &BinaryMatrix {
        &self.checks
    }

    /// Basis of zero-syndrome vectors modulo degeneracy.
    pub fn logicals(&self) -> &BinaryMatrix {
        &self.logicals
    }

    /// Zero-syndrome vectors of the dual problem, paired with `logicals` as the identity.
    pub fn dual_logicals(&self) -> &BinaryMatrix {
        &self.dual_logicals
    }

    /// Bond matrix of the model that sums over every class at once.
    pub fn total_theta(&self) -> &BinaryMatrix {
        &self.total_theta
    }

    /// Number of encoded bits in this sector.
    pub fn k(&self) -> usize {
        self.logicals.rows()
    }

    pub fn num_classes(&self) -> Result<u64> {
        checked_pow2(self.k(), "codeword classes")
    }

    /// `log2` of the number of distinct syndromes.
    pub fn syndrome_rank(&self) -> usize {
        self.check_rank
    }

    pub fn syndrome(&self, e: &BinaryVector) -> Result<BinaryVector> {
        self.checks.mul_vec(e)
    }

    /// Class id of a zero-syndrome vector.
    pub fn class_of(&self, x: &BinaryVector) -> Result<u64> {
        if !self.syndrome(x)?.is_zero() {
            return Err(Error::Invalid("vector has a nonzero syndrome".into()));
        }
        Ok(self.class_bits(x))
    }

    /// Class coordinates without the syndrome check.
    pub(crate) fn class_bits(&self, x: &BinaryVector) -> u64 {
        let mut id = 0u64;
        for j in 0..self.dual_logicals.rows() {
            if gf2::dot_parity(x.words(), self.dual_logicals.row_words(j)) {
                id |= 1 << j;
            }
        }
        id
    }

    /// The combination of logical rows selected by the bits of `class`.
    pub fn class_vector(&self, class: u64) -> BinaryVector {
        let mut out = BinaryVector::zeros(self.bits());
        for i in 0..self.k() {
            if (class >> i) & 1 == 1 {
                gf2::xor_into(out.words_mut(), self.logicals.row_words(i));
            }
        }
        out
    }

    /// Minimum-weight member of a class (the lexicographically first on ties).
    pub fn min_weight_representative(&self, class: u64, search: &CosetSearch) -> Result<CosetMin> {
        gf2::coset_min_weight(&self.class_vector(class), &self.theta, None, search)
    }

    /// The `index`-th syndrome with one error producing it. Indices run over
    /// `0..2^syndrome_rank()`; the error is supported on pivot columns of the checks.
    pub fn syndrome_representative(&self, index: u64) -> (BinaryVector, BinaryVector) {
        let mut e = BinaryVector::zeros(self.bits());
        for (i, &p) in self.syndrome_pivots.iter().enumerate() {
            if (index >> i) & 1 == 1 {
                e.set(p, true);
            }
        }
        let s = self.checks.mul_vec(&e).expect("width matches");
        (s, e)
    }

    /// Some error with syndrome `s`.
    pub fn error_for_syndrome(&self, s: &BinaryVector) -> Result<BinaryVector> {
        self.checks.solve(s)?.ok_or(Error::UnreachableSyndrome)
    }

    /// Weight used for code distance: Hamming weight in CSS sectors, Pauli weight in the full one.
    pub fn operator_weight(&self, x: &BinaryVector) -> usize {
        match self.sector {
            Sector::Full => pauli_weight(x, self.n_qubits),
            _ => x.weight(),
        }
    }

    /// The sector part of a full Pauli error `(v|u)`.
    pub fn project(&self, e: &BinaryVector) -> Result<BinaryVector> {
        match self.sector {
            Sector::X => e.left_half(),
            Sector::Z => e.right_half(),
            Sector::Full => Ok(e.clone()),
        }
    }
}

/// Number of qubits acted on by `(v|u)`.
pub fn pauli_weight(e: &BinaryVector, n: usize) -> usize {
    (0..n).filter(|&q| e.get(q) || e.get(q + n)).count()
}

pub fn checked_pow2(exp: usize, what: &'static str) -> Result<u64> {
    if exp >= 63 {
        Err(Error::BudgetExceeded { what, needed: exp, budget: 62 })
    } else {
        Ok(1 << exp)
    }
}

/// Rows of `space` completing a basis of `span(space)` modulo `span(sub)`.
fn complement_basis(space: &BinaryMatrix, sub: &BinaryMatrix) -> BinaryMatrix {
    let mut acc = sub.row_basis();
    let mut chosen = Vec::new();
    let mut rank = acc.rows();
    for r in 0..space.rows() {
        let trial = acc.vstack(&space.select_rows(&[r])).expect("same width");
        let t = trial.rank();
        if t > rank {
            acc = trial;
            rank = t;
            chosen.push(r);
        }
    }
    space.select_rows(&chosen)
}

/// Per-sector class bases and optional enumerated class representatives.
#[derive(Debug, Clone)]
pub struct CodewordClasses {
    pub sectors: Vec<SectorClasses>,
}

#[derive(Debug, Clone)]
pub struct SectorClasses {
    pub sector: Sector,
    pub basis: BinaryMatrix,
    /// One representative per class id, when `2^k` fits the budget.
    pub representatives: Option<Vec<BinaryVector>>,
}

/// Class bases for every sector of `code`. Representatives are listed when
/// the sector has at most `2^budget_log2` classes.
pub fn codeword_classes(code: &StabilizerCode, budget_log2: usize) -> Result<CodewordClasses> {
    let mut sectors = Vec::new();
    for sector in code.sectors() {
        let problem = code.sector(sector)?;
        let representatives = (problem.k() <= budget_log2)
            .then(|| (0..1u64 << problem.k()).map(|c| problem.class_vector(c)).collect());
        sectors.push(SectorClasses { sector, basis: problem.logicals().clone(), representatives });
    }
    Ok(CodewordClasses { sectors })
}

/// Code parameters. Every operator of weight `≤ cap` is enumerated in each
/// sector; past that a randomized search supplies an upper bound.
pub fn distance(code: &StabilizerCode, cap: usize) -> Result<CodeParams> {
    let mut lower = usize::MAX;
    let mut upper = usize::MAX;
    if code.k() == 0 {
        return Ok(CodeParams { n: code.n(), k: 0, d: None, d_exact: true });
    }
    for sector in code.sectors() {
        let problem = code.sector(sector)?;
        match min_logical_weight_upto(&problem, cap) {
            Some(w) => {
                lower = lower.min(w);
                upper = upper.min(w);
            }
            None => {
                lower = lower.min(cap + 1);
                upper = upper.min(logical_upper_bound(&problem, &CosetSearch::default()));
            }
        }
    }
    Ok(CodeParams { n: code.n(), k: code.k(), d: Some(upper), d_exact: lower == upper })
}

/// Smallest weight of a logical operator in `problem`, searching weights `1..=cap` exhaustively.
pub fn min_logical_weight_upto(problem: &SectorProblem, cap: usize) -> Option<usize> {
    let checks_t = problem.checks().transpose();
    let bits = problem.bits();
    // Each position offers one or more column choices: the single bit in CSS
    // sectors, or X, Z, Y on a qubit in the full sector.
    let letters: Vec<Vec<Vec<usize>>> = match problem.sector() {
        Sector::Full => {
            let n = bits / 2;
            (0..n).map(|q| vec![vec![q], vec![q + n], vec![q, q + n]]).collect()
        }
        _ => (0..bits).map(|b| vec![vec![b]]).collect(),
    };
    let col_words: Vec<Vec<u64>> = (0..bits).map(|c| checks_t.row_words(c).to_vec()).collect();
    let syn_len = checks_t.row_words(0).len().max(1);
    for w in 1..=cap.min(letters.len()) {
        let mut search = WeightSearch {
            problem,
            letters: &letters,
            col_words: &col_words,
            syndrome: vec![0; syn_len],
            x: BinaryVector::zeros(bits),
        };
        if search.dfs(0, w) {
            return Some(w);
        }
    }
    None
}

struct WeightSearch<'a> {
    problem: &'a SectorProblem,
    letters: &'a [Vec<Vec<usize>>],
    col_words: &'a [Vec<u64>],
    syndrome: Vec<u64>,
    x: BinaryVector,
}

impl WeightSearch<'_> {
    fn dfs(&mut self, start: usize, remaining: usize) -> bool {
        if remaining == 0 {
            return self.syndrome.iter().all(|&s| s == 0) && self.problem.class_bits(&self.x) != 0;
        }
        for pos in start..=self.letters.len() - remaining {
            for letter in &self.letters[pos] {
                self.toggle(letter);
                let found = self.dfs(pos + 1, remaining - 1);
                self.toggle(letter);
                if found {
                    return true;
                }
            }
        }
        false
    }

    fn toggle(&mut self, cols: &[usize]) {
        for &c in cols {
            gf2::xor_into(&mut self.syndrome, &self.col_words[c]);
            self.x.flip(c);
        }
    }
}

/// Weight of the lightest logical found by random information sets on the
/// zero-syndrome space. Always an upper bound on the sector distance.
pub fn logical_upper_bound(problem: &SectorProblem, search: &CosetSearch) -> usize {
    let kernel = problem.checks().nullspace();
    let n = kernel.cols();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(search.seed);
    let mut best = usize::MAX;
    let consider = |v: &BinaryVector, best: &mut usize| {
        if problem.class_bits(v) != 0 {
            *best = (*best).min(problem.operator_weight(v));
        }
    };
    for i in 0..problem.k() {
        consider(&problem.logicals().row(i), &mut best);
    }
    let mut order: Vec<usize> = (0..n).collect();
    for _ in 0..search.isd_iterations {
        order.shuffle(&mut rng);
        let permuted = kernel.permute_columns(&order);
        let reduced = permuted.row_basis();
        let mut inverse = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            inverse[old] = new;
        }
        let rows: Vec<BinaryVector> = reduced
            .row_vectors()
            .iter()
            .map(|r| BinaryVector::from_bits((0..n).map(|old| r.get(inverse[old]))))
            .collect();
        for (i, a) in rows.iter().enumerate() {
            consider(a, &mut best);
            for b in &rows[i + 1..] {
                consider(&a.xor(b), &mut best);
            }
        }
    }
    best
}

/// Checks that `mapped` equals `original` up to reordering rows, after the
/// column permutation `perm` (column `c` of the result is column `perm[c]`).
pub fn equal_up_to_row_order(original: &BinaryMatrix, mapped: &BinaryMatrix, perm: &[usize]) -> bool {
    original.sorted_rows() == mapped.permute_columns(perm).sorted_rows()
}

/// Column permutation taking `G_Z` to `G_X` (up to row order) for a
/// cyclic hypergraph product whose two circulants are equal and of size `n`.
/// Qubits are indexed `(block, a, i)` with `a, i ∈ 0..n`; the map sends
/// block 1 of `G_Z` at `(b, j)` to block 2 of `G_X` at `(−b, −j)` and block 2
/// to block 1 likewise.
pub fn cyclic_hp_sector_permutation(n: usize) -> Vec<usize> {
    let neg = |a: usize| (n - a) % n;
    let mut perm = vec![0; 2 * n * n];
    for b in 0..n {
        for j in 0..n {
            // Column c of the permuted G_Z should be column perm[c] of G_Z.
            // Block 2 of G_X at (b, j) corresponds to block 1 of G_Z at (−b, −j).
            perm[n * n + b * n + j] = neg(b) * n + neg(j);
            perm[b * n + j] = n * n + neg(b) * n + neg(j);
        }
    }
    perm
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(s: &str) -> BinaryMatrix {
        BinaryMatrix::parse(s).unwrap()
    }

    const HAMMING: [bool; 4] = [true, true, false, true];

    #[test]
    fn new_stabilizer_examples() {
        let c = StabilizerCode::new_stabilizer(m("1100;0011")).unwrap();
        assert_eq!((c.n(), c.k()), (2, 0));
        assert!(matches!(
            StabilizerCode::new_stabilizer(m("1000;0010")),
            Err(Error::Anticommuting { row_a: 0, row_b: 1 })
        ));
        let t = toric(2).unwrap();
        let general = StabilizerCode::new_stabilizer(t.generators().clone()).unwrap();
        assert_eq!(general.k(), 2);
    }

    #[test]
    fn new_css_examples() {
        let c = StabilizerCode::new_css(m("11"), BinaryMatrix::zeros(0, 2)).unwrap();
        assert_eq!(c.k(), 1);
        let c = StabilizerCode::new_css(m("11"), m("11")).unwrap();
        assert_eq!(c.k(), 0);
        assert!(matches!(StabilizerCode::new_css(m("10"), m("11")), Err(Error::NotOrthogonal { .. })));
    }

    #[test]
    fn toric_parameters() {
        for l in 2..=4 {
            let p = toric(l).unwrap().params(l).unwrap();
            assert_eq!(p, CodeParams { n: 2 * l * l, k: 2, d: Some(l), d_exact: true });
        }
    }

    #[test]
    fn hamming_product_parameters() {
        // 1+x+x^3 on 7 has rank 4, so each factor contributes k_i = 3.
        let c = cyclic_hp(&HAMMING, 7, &HAMMING, 7).unwrap();
        assert_eq!(c.n(), 98);
        assert_eq!(c.k(), 2 * 3 * 3);
        let p = c.params(4).unwrap();
        assert_eq!((p.d, p.d_exact), (Some(4), true));
    }

    #[test]
    fn hp_dimensions_and_k_rank_formula() {
        let h1 = m("110;011");
        let h2 = m("1111");
        let c = hp_code(&h1, &h2).unwrap();
        assert_eq!(c.n(), 11);
        let (gx, gz) = c.css_parts().unwrap();
        assert_eq!(c.k(), c.n() - gx.rank() - gz.rank());
        assert_eq!(StabilizerCode::new_stabilizer(c.generators().clone()).unwrap().k(), c.k());
    }

    #[test]
    fn cyclic_sectors_related_by_permutation() {
        for (poly, n) in [(&[true, true][..], 3), (&HAMMING[..], 7), (&[true, true, true][..], 6)] {
            let c = cyclic_hp(poly, n, poly, n).unwrap();
            let (gx, gz) = c.css_parts().unwrap();
            assert!(equal_up_to_row_order(gx, gz, &cyclic_hp_sector_permutation(n)));
        }
    }

    #[test]
    fn gauge_code_shapes() {
        let inner = toric(2).unwrap();
        let g = gauge_code(&inner, 2).unwrap();
        let (gx, gz) = g.css_parts().unwrap();
        let (ns, width) = (inner.num_generators(), 2 * inner.n());
        assert_eq!((gx.rows(), gx.cols()), (2 * ns, 2 * width + 2 * ns));
        assert_eq!(gz.rows(), 2 * width + 2 * ns);
        for r in 0..gx.rows() {
            assert_eq!(gx.row_weight(r), inner.generators().row_weight(r % ns) + 2);
        }
    }

    #[test]
    fn gallager_degrees_and_determinism() {
        let h = gallager_ldpc(2, 3, 6, 1).unwrap();
        assert_eq!((h.rows(), h.cols()), (9, 6));
        assert!((0..9).all(|r| h.row_weight(r) == 2));
        assert!((0..6).all(|c| h.column_weight(c) == 3));
        assert_eq!(h, gallager_ldpc(2, 3, 6, 1).unwrap());
        assert!(gallager_ldpc(3, 2, 6, 1).is_err());
        assert!(gallager_ldpc(4, 5, 6, 1).is_err());
        let code = hp_code(&h, &h.transpose()).unwrap();
        assert!(code.k() as f64 / code.n() as f64 >= 1.0 / 13.0);
    }

    #[test]
    fn syndrome_examples() {
        let c = toric(3).unwrap();
        assert!(c.syndrome(&BinaryVector::zeros(36)).unwrap().is_zero());
        assert!(c.syndrome(&c.generators().row(4)).unwrap().is_zero());
        let e = BinaryVector::from_indices(36, &[0, 5, 20, 33]);
        let s = c.syndrome(&e).unwrap();
        for r in 0..c.num_generators() {
            assert_eq!(s.get(r), gf2::trace_inner(&c.generators().row(r), &e).unwrap());
        }
    }

    #[test]
    fn class_structure() {
        let c = toric(2).unwrap();
        let cl = codeword_classes(&c, 10).unwrap();
        for sc in &cl.sectors {
            assert_eq!(sc.representatives.as_ref().unwrap().len(), 4);
        }
        let p = c.sector(Sector::Z).unwrap();
        for class in 0..4 {
            let v = p.class_vector(class);
            assert_eq!(p.class_of(&v).unwrap(), class);
            let moved = v.xor(&p.theta().row(1));
            assert_eq!(p.class_of(&moved).unwrap(), class);
        }
        let full = c.sector(Sector::Full).unwrap();
        assert_eq!(full.k(), 4);
        let trivial = StabilizerCode::new_css(m("11"), m("11")).unwrap();
        assert_eq!(codeword_classes(&trivial, 10).unwrap().sectors[0].representatives.as_ref().unwrap().len(), 1);
        assert_eq!(distance(&trivial, 3).unwrap().d, None);
    }

    #[test]
    fn full_sector_distance_matches_css() {
        let c = toric(3).unwrap();
        let full = c.sector(Sector::Full).unwrap();
        assert_eq!(min_logical_weight_upto(&full, 3), Some(3));
        assert_eq!(min_logical_weight_upto(&full, 2), None);
        assert_eq!(logical_upper_bound(&full, &CosetSearch::default()), 3);
    }

    #[test]
    fn syndrome_representatives_are_distinct() {
        let p = toric(2).unwrap().sector(Sector::X).unwrap();
        let mut seen: Vec<BinaryVector> =
            (0..1u64 << p.syndrome_rank()).map(|i| p.syndrome_representative(i).0).collect();
        seen.sort_by(BinaryVector::lex_cmp);
        seen.dedup();
        assert_eq!(seen.len(), 1 << p.syndrome_rank());
    }

    #[test]
    fn toric_logical_has_coset_weight_two() {
        let p = toric(2).unwrap().sector(Sector::X).unwrap();
        // The basis loops have length L; their sum winds both ways and needs 2L.
        for (class, weight) in [(1, 2), (2, 2), (3, 4)] {
            let r = p.min_weight_representative(class, &CosetSearch::default()).unwrap();
            assert!(r.exact);
            assert_eq!(r.weight, weight);
        }
    }
}
