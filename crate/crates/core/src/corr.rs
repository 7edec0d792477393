//! Correspondence calculus on the exterior model.
//!
//! A [`CorrClass`] is a class on a two-factor product space `A×B` acting on
//! cohomology by pull–wedge–push. The variance convention is fixed once and
//! pinned by tests: a class acts contravariantly-as-written, so the graph of
//! a homomorphism `f` acts as `f^*`, and `compose(delta, gamma)` is
//! `delta ∘ gamma` ("delta after gamma") with
//! `graph(f ∘ g) = compose(graph(g), graph(f))`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::json;
use thiserror::Error;

use crate::extalg::{
    interleave_sign, masks_of_degree, AlgebraError, Homomorphism, MultiVector, Space,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorrError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("middle spaces differ: {0} vs {1}")]
    MiddleMismatch(String, String),
    #[error("class is not homogeneous of total degree {expected}")]
    BadTotalDegree { expected: i64 },
    #[error("action does not have a uniform degree offset")]
    NonUniformOffset,
    #[error("projector index {i} out of range for g={g}")]
    IndexOutOfRange { i: i64, g: usize },
    #[error("expected integral hom blocks")]
    NotIntegral,
}

/// A correspondence class: a multivector on `source × target`, homogeneous
/// of total degree `rank(source) − offset`. Ordinary correspondences have
/// offset 0; offset-1 classes are the data of the torsion bimodule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrClass {
    source: Space,
    target: Space,
    cls: MultiVector,
    offset: i64,
}

impl CorrClass {
    pub fn new(
        source: Space,
        target: Space,
        cls: MultiVector,
        offset: i64,
    ) -> Result<Self, CorrError> {
        let product = source.product(&target);
        if *cls.space() != product {
            return Err(CorrError::Algebra(AlgebraError::SpaceMismatch {
                expected: product.label().to_string(),
                got: cls.space().label().to_string(),
            }));
        }
        let expected = source.rank() as i64 - offset;
        if !cls.is_zero() && cls.degree() != Some(expected as usize) {
            return Err(CorrError::BadTotalDegree { expected });
        }
        Ok(CorrClass {
            source,
            target,
            cls,
            offset,
        })
    }

    pub fn zero(source: Space, target: Space, offset: i64) -> Self {
        let product = source.product(&target);
        CorrClass {
            source,
            target,
            cls: MultiVector::zero(product),
            offset,
        }
    }

    pub fn source(&self) -> &Space {
        &self.source
    }

    pub fn target(&self) -> &Space {
        &self.target
    }

    pub fn cls(&self) -> &MultiVector {
        &self.cls
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn is_zero(&self) -> bool {
        self.cls.is_zero()
    }

    pub fn add(&self, other: &CorrClass) -> Result<CorrClass, CorrError> {
        if self.offset != other.offset {
            return Err(CorrError::NonUniformOffset);
        }
        Ok(CorrClass {
            source: self.source.clone(),
            target: self.target.clone(),
            cls: self.cls.add(&other.cls)?,
            offset: self.offset,
        })
    }

    pub fn sub(&self, other: &CorrClass) -> Result<CorrClass, CorrError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> CorrClass {
        CorrClass {
            source: self.source.clone(),
            target: self.target.clone(),
            cls: self.cls.neg(),
            offset: self.offset,
        }
    }

    pub fn scale_int(&self, c: &BigInt) -> CorrClass {
        CorrClass {
            source: self.source.clone(),
            target: self.target.clone(),
            cls: self.cls.scale_int(c),
            offset: self.offset,
        }
    }

    /// Action on cohomology: push `p₁^*x ∧ cls` down the second factor.
    /// Maps degree `i` to degree `i − offset`.
    pub fn act(&self, x: &MultiVector) -> Result<MultiVector, CorrError> {
        if *x.space() != self.source {
            return Err(CorrError::Algebra(AlgebraError::SpaceMismatch {
                expected: self.source.label().to_string(),
                got: x.space().label().to_string(),
            }));
        }
        let product = self.cls.space();
        let pulled = x.embed(product, 0)?;
        let wedged = pulled.wedge(&self.cls)?;
        Ok(wedged.integrate_out_block(0, self.source.rank(), self.target.clone())?)
    }

    /// `delta ∘ gamma` by the triple-product rule: extend both to
    /// `Z×Y×X`, wedge, and integrate out the middle factor.
    pub fn compose(delta: &CorrClass, gamma: &CorrClass) -> Result<CorrClass, CorrError> {
        if gamma.target != delta.source {
            return Err(CorrError::MiddleMismatch(
                gamma.target.label().to_string(),
                delta.source.label().to_string(),
            ));
        }
        let z = &gamma.source;
        let y = &gamma.target;
        let x = &delta.target;
        let triple = z.product(y).product(x);
        let g12 = gamma.cls.embed(&triple, 0)?;
        let d23 = delta.cls.embed(&triple, z.rank())?;
        let wedged = g12.wedge(&d23)?;
        let out_space = z.product(x);
        let cls = wedged.integrate_out_block(z.rank(), y.rank(), out_space)?;
        CorrClass::new(
            z.clone(),
            x.clone(),
            cls,
            gamma.offset + delta.offset,
        )
    }

    /// Factor swap with the Koszul sign: `e_U ⊗ e_V ↦ (−1)^{|U||V|} e_V ⊗ e_U`.
    pub fn transpose(&self) -> CorrClass {
        let ra = self.source.rank();
        let rb = self.target.rank();
        let swapped = self.target.product(&self.source);
        let low = (1u64 << ra) - 1;
        let terms = self.cls.terms().map(|(m, c)| {
            let u = m & low;
            let v = m >> ra;
            let mask = v | (u << rb);
            let mut c = c.clone();
            if (u.count_ones() * v.count_ones()) % 2 == 1 {
                c = -c;
            }
            (mask, c)
        });
        let cls = MultiVector::from_terms(swapped, terms).expect("swap stays in range");
        CorrClass {
            source: self.target.clone(),
            target: self.source.clone(),
            cls,
            offset: self.target.rank() as i64 - self.source.rank() as i64 + self.offset,
        }
    }

    /// Solve for the class with a prescribed linear action on basis
    /// monomials. Each unknown coefficient is pinned by exactly one
    /// action equation, so the system solves directly.
    pub fn from_action<F>(source: &Space, target: &Space, mut action: F) -> Result<Self, CorrError>
    where
        F: FnMut(u64) -> Result<MultiVector, CorrError>,
    {
        let full = source.full_mask();
        let mut offset: Option<i64> = None;
        let mut terms: Vec<(u64, BigRational)> = Vec::new();
        for s in 0..=full {
            let y = action(s)?;
            if *y.space() != *target {
                return Err(CorrError::Algebra(AlgebraError::SpaceMismatch {
                    expected: target.label().to_string(),
                    got: y.space().label().to_string(),
                }));
            }
            if y.is_zero() {
                continue;
            }
            let comp = full ^ s;
            let sgn = interleave_sign(s, comp);
            for (v, c) in y.terms() {
                let r = s.count_ones() as i64 - v.count_ones() as i64;
                match offset {
                    None => offset = Some(r),
                    Some(r0) if r0 != r => return Err(CorrError::NonUniformOffset),
                    _ => {}
                }
                let mut coeff = c.clone();
                if sgn < 0 {
                    coeff = -coeff;
                }
                terms.push((comp | (v << source.rank()), coeff));
            }
        }
        let product = source.product(target);
        let cls = MultiVector::from_terms(product, terms)?;
        CorrClass::new(source.clone(), target.clone(), cls, offset.unwrap_or(0))
    }

    /// The diagonal class: the unique correspondence acting as the identity.
    pub fn diagonal(g: usize) -> CorrClass {
        let a = Space::abelian("A", g);
        CorrClass::from_action(&a, &a, |m| {
            Ok(MultiVector::basis(a.clone(), m).expect("mask in range"))
        })
        .expect("identity action is well defined")
    }

    /// Closed product form of the diagonal, `∏_j (e_j ⊗ 1 − 1 ⊗ e_j)`,
    /// kept as an independent cross-check of the solved class.
    pub fn diagonal_product_form(g: usize) -> CorrClass {
        let a = Space::abelian("A", g);
        let product = a.product(&a);
        let mut acc = MultiVector::one(product.clone());
        for j in 0..2 * g {
            let factor = MultiVector::from_terms(
                product.clone(),
                [
                    (1u64 << j, BigRational::one()),
                    (1u64 << (j + 2 * g), -BigRational::one()),
                ],
            )
            .expect("masks in range");
            acc = acc.wedge(&factor).expect("same space");
        }
        CorrClass {
            source: a.clone(),
            target: a,
            cls: acc,
            offset: 0,
        }
    }

    /// Künneth projector `π̂^i`: the block of the diagonal whose action is
    /// projection onto degree `i`.
    pub fn kuenneth_projector(g: usize, i: i64) -> Result<CorrClass, CorrError> {
        if i < 0 || i > 2 * g as i64 {
            return Err(CorrError::IndexOutOfRange { i, g });
        }
        let diag = CorrClass::diagonal(g);
        let ra = diag.source.rank();
        let terms = diag
            .cls
            .terms()
            .filter(|(m, _)| (m >> ra).count_ones() as i64 == i)
            .map(|(m, c)| (m, c.clone()));
        let cls = MultiVector::from_terms(diag.cls.space().clone(), terms)?;
        Ok(CorrClass {
            source: diag.source.clone(),
            target: diag.target.clone(),
            cls,
            offset: 0,
        })
    }

    /// Graph of a homomorphism: the class acting as `f^*`, built by solving
    /// the defining system. Sits in `CorrClass[f.target → f.source]`.
    pub fn graph(f: &Homomorphism) -> Result<CorrClass, CorrError> {
        CorrClass::from_action(f.target(), f.source(), |m| {
            let basis = MultiVector::basis(f.target().clone(), m)?;
            Ok(f.pullback(&basis)?)
        })
    }

    /// Hom-blocks of the class: for each input degree `i`, the matrix of the
    /// action from degree `i` to degree `i − offset`, columns indexed by the
    /// ascending degree-`i` masks of the source, rows by the ascending
    /// degree-`(i−offset)` masks of the target.
    pub fn hom_blocks(&self) -> Result<BTreeMap<usize, Vec<Vec<BigRational>>>, CorrError> {
        let rs = self.source.rank();
        let rt = self.target.rank();
        let mut out = BTreeMap::new();
        for i in 0..=rs {
            let j = i as i64 - self.offset;
            if j < 0 || j > rt as i64 {
                continue;
            }
            let cols = masks_of_degree(rs, i);
            let rows = masks_of_degree(rt, j as usize);
            let mut mat = vec![vec![BigRational::zero(); cols.len()]; rows.len()];
            let mut nonzero = false;
            for (ci, &cm) in cols.iter().enumerate() {
                let y = self.act(&MultiVector::basis(self.source.clone(), cm)?)?;
                for (ri, &rm) in rows.iter().enumerate() {
                    let c = y.coefficient(rm);
                    if !c.is_zero() {
                        nonzero = true;
                        mat[ri][ci] = c;
                    }
                }
            }
            if nonzero {
                out.insert(i, mat);
            }
        }
        Ok(out)
    }

    /// Rebuild a class from hom-blocks (input degree → matrix).
    pub fn from_hom_blocks(
        source: &Space,
        target: &Space,
        offset: i64,
        blocks: &BTreeMap<usize, Vec<Vec<BigRational>>>,
    ) -> Result<CorrClass, CorrError> {
        let rs = source.rank();
        let rt = target.rank();
        let got = CorrClass::from_action(source, target, |m| {
            let i = m.count_ones() as usize;
            let j = i as i64 - offset;
            let mut y = MultiVector::zero(target.clone());
            if j < 0 || j > rt as i64 {
                return Ok(y);
            }
            if let Some(mat) = blocks.get(&i) {
                let cols = masks_of_degree(rs, i);
                let rows = masks_of_degree(rt, j as usize);
                let ci = cols.iter().position(|&c| c == m).expect("mask has degree i");
                for (ri, &rm) in rows.iter().enumerate() {
                    let c = &mat[ri][ci];
                    if !c.is_zero() {
                        y = y.add(&MultiVector::basis(target.clone(), rm)?.scale(c))?;
                    }
                }
            }
            Ok(y)
        })?;
        // from_action infers the offset from the action; force the stated one
        // (they agree whenever the blocks are nonzero).
        CorrClass::new(source.clone(), target.clone(), got.cls, offset)
    }

    /// JSON projector-table row: `{"g":…, "i":…, "class":[monomials…]}`.
    pub fn to_json_row(&self, g: usize, i: i64) -> serde_json::Value {
        json!({ "g": g, "i": i, "class": self.cls.to_json() })
    }
}
