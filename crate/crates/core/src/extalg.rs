//! Sparse exterior-algebra arithmetic over exact rationals.
//!
//! A [`Space`] is a rank-`2g` lattice standing in for `H^1`; products of
//! spaces concatenate bases (first factor in the low bits). A
//! [`MultiVector`] is a sparse element of the exterior algebra on that
//! lattice: basis monomials are bitmasks, coefficients are `BigRational`,
//! zero coefficients are never stored. The orientation convention is that
//! the ascending full monomial `e_1 ∧ … ∧ e_rank` has integral 1.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::json;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("space mismatch: expected {expected}, got {got}")]
    SpaceMismatch { expected: String, got: String },
    #[error("rank {rank} is not twice the stated dimension g={g}")]
    RankMismatch { rank: usize, g: usize },
    #[error("basis mask {mask:#x} out of range for rank {rank}")]
    MaskOutOfRange { mask: u64, rank: usize },
    #[error("expected a homogeneous element")]
    NotHomogeneous,
    #[error("expected even degree, got {0}")]
    OddDegree(usize),
    #[error("expected integral coefficients")]
    NotIntegral,
    #[error("division by {n}! fails on monomial {mask:#x} with coefficient {coeff}")]
    DivisionFailure { n: u64, mask: u64, coeff: String },
    #[error("matrix shape {rows}x{cols} does not match ranks {target_rank}x{source_rank}")]
    MatrixShape {
        rows: usize,
        cols: usize,
        target_rank: usize,
        source_rank: usize,
    },
    #[error("homomorphism composition mismatch: {0}")]
    ComposeMismatch(String),
    #[error("invalid space: {0}")]
    InvalidSpace(String),
}

/// A labeled `H^1` lattice, possibly a product of factors.
///
/// `factors` lists the ranks of the factors in order; the basis of a product
/// is the concatenation, first factor in the low bit positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Space {
    label: String,
    factors: Vec<usize>,
    rank: usize,
}

impl Space {
    /// Single-factor space of the given even rank.
    pub fn new(label: &str, rank: usize) -> Result<Self, AlgebraError> {
        if rank == 0 || rank % 2 != 0 || rank > 30 {
            return Err(AlgebraError::InvalidSpace(format!(
                "rank must be even, positive and sparse-mask sized, got {rank}"
            )));
        }
        Ok(Space {
            label: label.to_string(),
            factors: vec![rank],
            rank,
        })
    }

    /// The model of `H^1(A)` for an abelian variety of dimension `g`.
    pub fn abelian(label: &str, g: usize) -> Self {
        Space::new(label, 2 * g).expect("2g is even and positive")
    }

    /// Product space: bases concatenate, `self` first.
    pub fn product(&self, other: &Space) -> Space {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        Space {
            label: format!("{}x{}", self.label, other.label),
            factors,
            rank: self.rank + other.rank,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    /// Offsets where each factor starts, plus the total rank at the end.
    pub fn factor_boundaries(&self) -> Vec<usize> {
        let mut out = vec![0];
        for f in &self.factors {
            out.push(out.last().unwrap() + f);
        }
        out
    }

    pub fn full_mask(&self) -> u64 {
        (1u64 << self.rank) - 1
    }

    fn mismatch(&self, other: &Space) -> AlgebraError {
        AlgebraError::SpaceMismatch {
            expected: self.label.clone(),
            got: other.label.clone(),
        }
    }
}

/// Koszul sign of interleaving the sorted basis monomial `s` before `t`.
/// The masks must be disjoint. Counts inversions `(a, b)` with `a ∈ s`,
/// `b ∈ t`, `a > b`.
pub(crate) fn interleave_sign(s: u64, t: u64) -> i32 {
    debug_assert_eq!(s & t, 0);
    let mut inversions = 0u32;
    let mut t_bits = t;
    while t_bits != 0 {
        let b = t_bits.trailing_zeros();
        inversions += (s >> (b + 1)).count_ones();
        t_bits &= t_bits - 1;
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// All masks over `rank` bits with the given popcount, ascending.
pub(crate) fn masks_of_degree(rank: usize, k: usize) -> Vec<u64> {
    (0..(1u64 << rank))
        .filter(|m| m.count_ones() as usize == k)
        .collect()
}

pub(crate) fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for v in 2..=n {
        acc *= BigInt::from(v);
    }
    acc
}

pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for t in 0..k {
        acc = acc * BigInt::from(n - t) / BigInt::from(t + 1);
    }
    acc
}

/// Sparse exterior-algebra element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiVector {
    space: Space,
    terms: BTreeMap<u64, BigRational>,
}

impl MultiVector {
    pub fn zero(space: Space) -> Self {
        MultiVector {
            space,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(space: Space, c: BigRational) -> Self {
        let mut mv = MultiVector::zero(space);
        if !c.is_zero() {
            mv.terms.insert(0, c);
        }
        mv
    }

    pub fn one(space: Space) -> Self {
        MultiVector::scalar(space, BigRational::one())
    }

    pub fn basis(space: Space, mask: u64) -> Result<Self, AlgebraError> {
        if mask > space.full_mask() {
            return Err(AlgebraError::MaskOutOfRange {
                mask,
                rank: space.rank,
            });
        }
        let mut mv = MultiVector::zero(space);
        mv.terms.insert(mask, BigRational::one());
        Ok(mv)
    }

    /// Top-degree monomial `e_1 ∧ … ∧ e_rank`.
    pub fn top(space: Space) -> Self {
        let mask = space.full_mask();
        let mut mv = MultiVector::zero(space);
        mv.terms.insert(mask, BigRational::one());
        mv
    }

    pub fn from_terms<I>(space: Space, terms: I) -> Result<Self, AlgebraError>
    where
        I: IntoIterator<Item = (u64, BigRational)>,
    {
        let mut mv = MultiVector::zero(space);
        for (mask, c) in terms {
            if mask > mv.space.full_mask() {
                return Err(AlgebraError::MaskOutOfRange {
                    mask,
                    rank: mv.space.rank,
                });
            }
            mv.add_term(mask, c);
        }
        Ok(mv)
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &BigRational)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, mask: u64) -> BigRational {
        self.terms.get(&mask).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// All coefficients have denominator 1.
    pub fn integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// All monomials have popcount `k`.
    pub fn homogeneous(&self, k: usize) -> bool {
        self.terms.keys().all(|m| m.count_ones() as usize == k)
    }

    /// The single degree of a nonzero homogeneous element.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys();
        let first = it.next()?.count_ones() as usize;
        it.all(|m| m.count_ones() as usize == first).then_some(first)
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut ds: Vec<usize> = self.terms.keys().map(|m| m.count_ones() as usize).collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    }

    fn add_term(&mut self, mask: u64, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mask) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &MultiVector) -> Result<MultiVector, AlgebraError> {
        if self.space != other.space {
            return Err(self.space.mismatch(&other.space));
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &MultiVector) -> Result<MultiVector, AlgebraError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MultiVector {
        let terms = self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect();
        MultiVector {
            space: self.space.clone(),
            terms,
        }
    }

    pub fn scale(&self, c: &BigRational) -> MultiVector {
        if c.is_zero() {
            return MultiVector::zero(self.space.clone());
        }
        let terms = self.terms.iter().map(|(m, v)| (*m, v * c)).collect();
        MultiVector {
            space: self.space.clone(),
            terms,
        }
    }

    pub fn scale_int(&self, c: &BigInt) -> MultiVector {
        self.scale(&BigRational::from(c.clone()))
    }

    /// Exterior product. Bilinear; on basis monomials `e_S ∧ e_T` is zero on
    /// overlap and otherwise `±e_{S∪T}` with the interleave sign.
    pub fn wedge(&self, other: &MultiVector) -> Result<MultiVector, AlgebraError> {
        if self.space != other.space {
            return Err(self.space.mismatch(&other.space));
        }
        let mut out = MultiVector::zero(self.space.clone());
        for (&s, cs) in &self.terms {
            for (&t, ct) in &other.terms {
                if s & t != 0 {
                    continue;
                }
                let mut c = cs * ct;
                if interleave_sign(s, t) < 0 {
                    c = -c;
                }
                out.add_term(s | t, c);
            }
        }
        Ok(out)
    }

    /// Degree-`k` part.
    pub fn grade(&self, k: usize) -> MultiVector {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.count_ones() as usize == k)
            .map(|(m, c)| (*m, c.clone()))
            .collect();
        MultiVector {
            space: self.space.clone(),
            terms,
        }
    }

    /// `n^*`: scales the degree-`k` part by `n^k`.
    pub fn mult_pullback(&self, n: i64) -> MultiVector {
        let mut out = MultiVector::zero(self.space.clone());
        for (&m, c) in &self.terms {
            let k = m.count_ones();
            out.add_term(m, c * BigRational::from(BigInt::from(n).pow(k)));
        }
        out
    }

    /// `n_*`: scales the degree-`k` part by `n^{2g−k}`.
    pub fn mult_pushforward(&self, n: i64, g: usize) -> Result<MultiVector, AlgebraError> {
        if self.space.rank != 2 * g {
            return Err(AlgebraError::RankMismatch {
                rank: self.space.rank,
                g,
            });
        }
        let mut out = MultiVector::zero(self.space.clone());
        for (&m, c) in &self.terms {
            let k = m.count_ones() as usize;
            let e = (2 * g - k) as u32;
            out.add_term(m, c * BigRational::from(BigInt::from(n).pow(e)));
        }
        Ok(out)
    }

    /// Coefficient of the full monomial (the trace against the orientation).
    pub fn integrate(&self) -> BigRational {
        self.coefficient(self.space.full_mask())
    }

    /// Poincaré pairing `∫ x ∧ y`.
    pub fn pd_pair(&self, other: &MultiVector) -> Result<BigRational, AlgebraError> {
        Ok(self.wedge(other)?.integrate())
    }

    /// Divided power `γ_n(x) = x^n / n!` with exact-division certification.
    ///
    /// Requires `x` homogeneous of even degree with integral coefficients;
    /// the division is then exact, and a failure signals a model violation.
    pub fn divided_power(&self, n: u64) -> Result<MultiVector, AlgebraError> {
        match self.degree() {
            None if !self.is_zero() => return Err(AlgebraError::NotHomogeneous),
            Some(d) if d % 2 != 0 => return Err(AlgebraError::OddDegree(d)),
            _ => {}
        }
        if !self.integral() {
            return Err(AlgebraError::NotIntegral);
        }
        if n == 0 {
            return Ok(MultiVector::one(self.space.clone()));
        }
        let mut power = self.clone();
        for _ in 1..n {
            power = power.wedge(self)?;
        }
        let nf = BigRational::from(factorial(n));
        let mut out = MultiVector::zero(self.space.clone());
        for (&m, c) in &power.terms {
            let q = c / &nf;
            if !q.is_integer() {
                return Err(AlgebraError::DivisionFailure {
                    n,
                    mask: m,
                    coeff: c.to_string(),
                });
            }
            out.add_term(m, q);
        }
        Ok(out)
    }

    /// `e^x = Σ_k x^k / k!` for nilpotent `x` supported in even degrees.
    /// The sum truncates once powers vanish.
    pub fn exp(&self) -> Result<MultiVector, AlgebraError> {
        if self.terms.keys().any(|m| m.count_ones() % 2 != 0) {
            return Err(AlgebraError::NotHomogeneous);
        }
        let mut acc = MultiVector::one(self.space.clone());
        let mut power = MultiVector::one(self.space.clone());
        let mut k = 1u64;
        loop {
            power = power.wedge(self)?;
            power = power.scale(&BigRational::new(BigInt::one(), BigInt::from(k)));
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power)?;
            k += 1;
        }
        Ok(acc)
    }

    /// Reinterpret on a product space with basis indices shifted by `offset`.
    pub fn embed(&self, product: &Space, offset: usize) -> Result<MultiVector, AlgebraError> {
        let mut out = MultiVector::zero(product.clone());
        for (&m, c) in &self.terms {
            let shifted = m << offset;
            if shifted > product.full_mask() || (m != 0 && shifted >> offset != m) {
                return Err(AlgebraError::MaskOutOfRange {
                    mask: m,
                    rank: product.rank,
                });
            }
            out.add_term(shifted, c.clone());
        }
        Ok(out)
    }

    /// Integrate out the bit block `[lo, lo+len)`: keep the terms where the
    /// block is completely full, delete it, and compactify the mask. The
    /// block has even size (a full factor), so no sign appears.
    pub fn integrate_out_block(
        &self,
        lo: usize,
        len: usize,
        new_space: Space,
    ) -> Result<MultiVector, AlgebraError> {
        debug_assert_eq!(len % 2, 0);
        if new_space.rank + len != self.space.rank {
            return Err(AlgebraError::InvalidSpace(format!(
                "cannot integrate block of size {len} from rank {} into rank {}",
                self.space.rank, new_space.rank
            )));
        }
        let block = ((1u64 << len) - 1) << lo;
        let low = (1u64 << lo) - 1;
        let mut out = MultiVector::zero(new_space);
        for (&m, c) in &self.terms {
            if m & block != block {
                continue;
            }
            let compact = (m & low) | ((m >> len) & !low);
            out.add_term(compact, c.clone());
        }
        Ok(out)
    }

    /// `x ⊗ y` on the product space: `y`'s basis shifted above `x`'s.
    pub fn tensor(&self, other: &MultiVector) -> MultiVector {
        let product = self.space.product(&other.space);
        let mut out = MultiVector::zero(product);
        for (&s, cs) in &self.terms {
            for (&t, ct) in &other.terms {
                out.add_term(s | (t << self.space.rank), cs * ct);
            }
        }
        out
    }

    /// JSON form: ascending list of `{mask, num, den}` with the mask in hex.
    pub fn to_json(&self) -> serde_json::Value {
        let monomials: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(m, c)| {
                json!({
                    "mask": format!("{m:#x}"),
                    "num": c.numer().to_string(),
                    "den": c.denom().to_string(),
                })
            })
            .collect();
        serde_json::Value::Array(monomials)
    }
}

impl fmt::Display for MultiVector {
    /// Canonical text form: signed sum of `c*e{i,…,j}` with ascending
    /// 1-based indices, monomials in ascending mask order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let (sign, abs) = if c.is_negative() {
                ("-", -c.clone())
            } else {
                ("+", c.clone())
            };
            if idx == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if *m == 0 {
                write!(f, "{abs}")?;
            } else {
                let indices: Vec<String> = (0..64)
                    .filter(|b| m & (1 << b) != 0)
                    .map(|b| (b + 1).to_string())
                    .collect();
                write!(f, "{abs}*e{{{}}}", indices.join(","))?;
            }
        }
        Ok(())
    }
}

/// A homomorphism of abelian varieties `f: source → target`, recorded by the
/// pullback matrix of `f^*` on `H^1` of the target: row `j` expresses
/// `f^*(e_j^target)` in the source basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homomorphism {
    source: Space,
    target: Space,
    matrix: Vec<Vec<BigInt>>,
}

impl Homomorphism {
    pub fn new(
        source: Space,
        target: Space,
        matrix: Vec<Vec<BigInt>>,
    ) -> Result<Self, AlgebraError> {
        if matrix.len() != target.rank() || matrix.iter().any(|r| r.len() != source.rank()) {
            return Err(AlgebraError::MatrixShape {
                rows: matrix.len(),
                cols: matrix.first().map_or(0, |r| r.len()),
                target_rank: target.rank(),
                source_rank: source.rank(),
            });
        }
        Ok(Homomorphism {
            source,
            target,
            matrix,
        })
    }

    pub fn identity(space: &Space) -> Self {
        Homomorphism::multiplication(space, 1)
    }

    /// Multiplication by `n` on the variety: `n^* = n·id` on `H^1`.
    pub fn multiplication(space: &Space, n: i64) -> Self {
        let r = space.rank();
        let matrix = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| if i == j { BigInt::from(n) } else { BigInt::zero() })
                    .collect()
            })
            .collect();
        Homomorphism {
            source: space.clone(),
            target: space.clone(),
            matrix,
        }
    }

    /// Group law `μ: A×A → A`; `μ^* e_j = e_j ⊗ 1 + 1 ⊗ e_j`, i.e. the
    /// block matrix `[I | I]`.
    pub fn group_law(a: &Space) -> Self {
        let r = a.rank();
        let product = a.product(a);
        let matrix = (0..r)
            .map(|i| {
                (0..2 * r)
                    .map(|j| {
                        if j == i || j == i + r {
                            BigInt::one()
                        } else {
                            BigInt::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        Homomorphism {
            source: product,
            target: a.clone(),
            matrix,
        }
    }

    /// Projection of a product onto the factor block starting at `offset`.
    pub fn projection(product: &Space, factor: &Space, offset: usize) -> Self {
        let r = factor.rank();
        let matrix = (0..r)
            .map(|i| {
                (0..product.rank())
                    .map(|j| {
                        if j == offset + i {
                            BigInt::one()
                        } else {
                            BigInt::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        Homomorphism {
            source: product.clone(),
            target: factor.clone(),
            matrix,
        }
    }

    pub fn source(&self) -> &Space {
        &self.source
    }

    pub fn target(&self) -> &Space {
        &self.target
    }

    pub fn matrix(&self) -> &[Vec<BigInt>] {
        &self.matrix
    }

    /// `self ∘ inner` as homomorphisms; pullback matrices multiply.
    pub fn compose(&self, inner: &Homomorphism) -> Result<Homomorphism, AlgebraError> {
        if self.source != inner.target {
            return Err(AlgebraError::ComposeMismatch(format!(
                "{} -> {} after {} -> {}",
                self.source.label(),
                self.target.label(),
                inner.source.label(),
                inner.target.label()
            )));
        }
        let rows = self.target.rank();
        let mid = self.source.rank();
        let cols = inner.source.rank();
        let mut matrix = vec![vec![BigInt::zero(); cols]; rows];
        #[allow(clippy::needless_range_loop)]
        for i in 0..rows {
            for k in 0..mid {
                if self.matrix[i][k].is_zero() {
                    continue;
                }
                for j in 0..cols {
                    let prod = &self.matrix[i][k] * &inner.matrix[k][j];
                    matrix[i][j] += prod;
                }
            }
        }
        Homomorphism::new(inner.source.clone(), self.target.clone(), matrix)
    }

    /// `f^*`: the ring map induced by the matrix on degree 1, extended
    /// multiplicatively with Koszul signs.
    pub fn pullback(&self, x: &MultiVector) -> Result<MultiVector, AlgebraError> {
        if *x.space() != self.target {
            return Err(self.target.mismatch(x.space()));
        }
        // Images of the degree-1 generators.
        let images: Vec<MultiVector> = (0..self.target.rank())
            .map(|j| {
                let mut mv = MultiVector::zero(self.source.clone());
                for (i, c) in self.matrix[j].iter().enumerate() {
                    if !c.is_zero() {
                        mv.add_term(1 << i, BigRational::from(c.clone()));
                    }
                }
                mv
            })
            .collect();
        let mut out = MultiVector::zero(self.source.clone());
        for (m, c) in x.terms() {
            let mut acc = MultiVector::scalar(self.source.clone(), c.clone());
            let mut bits = m;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                acc = acc.wedge(&images[b])?;
                if acc.is_zero() {
                    break;
                }
                bits &= bits - 1;
            }
            out = out.add(&acc)?;
        }
        Ok(out)
    }

    /// `f_*`: the Poincaré-duality adjoint of `f^*`, characterized by
    /// `∫_target f_*(x) ∧ η = ∫_source x ∧ f^*(η)`.
    pub fn pushforward(&self, x: &MultiVector) -> Result<MultiVector, AlgebraError> {
        if *x.space() != self.source {
            return Err(self.source.mismatch(x.space()));
        }
        let rs = self.source.rank() as i64;
        let rt = self.target.rank() as i64;
        let full_t = self.target.full_mask();
        let mut out = MultiVector::zero(self.target.clone());
        for k in x.degrees() {
            let kw = k as i64 + rt - rs;
            if kw < 0 || kw > rt {
                continue;
            }
            let part = x.grade(k);
            for w in masks_of_degree(rt as usize, kw as usize) {
                let comp = full_t ^ w;
                let pulled = self.pullback(&MultiVector::basis(self.target.clone(), comp)?)?;
                let v = part.wedge(&pulled)?.integrate();
                if v.is_zero() {
                    continue;
                }
                let c = if interleave_sign(w, comp) < 0 { -v } else { v };
                out.add_term(w, c);
            }
        }
        Ok(out)
    }
}
