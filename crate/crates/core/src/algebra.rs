//! Finite-dimensional algebras with involution as structure-constant tables.
//!
//! An [`InvolutiveAlgebra`] is a unital associative algebra given by sparse
//! structure constants together with the matrix of an involution. Tables are
//! validated on construction (exhaustively at small dimension, by seeded
//! sampling above), the center and the action of the involution on it are
//! computed once and cached. Isomorphism claims are carried by
//! [`IsoCertificate`] values: a concrete linear map plus machine-checked
//! evidence that it is unital, multiplicative, bijective and compatible with
//! both involutions.

use crate::clifford::{blade_mul, even_basis_masks, full_basis_masks, induced_involution_sign};
use crate::field::{FieldDescriptor, FieldScalar};
use crate::linalg;
use crate::qspace::{OrthSymmetry, QuadForm};
use crate::rng::SplitMix64;
use serde_json::json;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

/// Dimension up to which construction-time axioms are checked exhaustively;
/// larger tables are checked on a fixed-seed sample of basis triples.
const EXHAUSTIVE_VALIDATION_DIM: usize = 32;
const SAMPLED_VALIDATION_TRIPLES: usize = 4096;

pub type SparseVec = Vec<(usize, FieldScalar)>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("structure constants are not associative at basis triple ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("the designated unit does not act as a unit on basis element {0}")]
    NotUnital(usize),
    #[error("involution matrix does not square to the identity at basis {0}")]
    InvolutionNotInvolutive(usize),
    #[error("involution is not antimultiplicative at basis pair ({0}, {1})")]
    InvolutionNotAntimultiplicative(usize, usize),
    #[error("algebras live over different fields")]
    FieldMismatch,
    #[error("table shape is inconsistent")]
    ShapeMismatch,
    #[error("zero parameter where a unit of the field is required")]
    ZeroParameter,
    #[error("center has dimension {0}, expected 1 or 2")]
    CenterDimension(usize),
    #[error("involution fixes a 2-dimensional center: type is not defined here")]
    TypeUndefined,
    #[error("symmetric dimension {sym_dim} matches neither d(d+1)/2 nor d(d-1)/2 for degree {degree}")]
    SymDimMismatch { sym_dim: usize, degree: usize },
    #[error("dimension {0} is not a perfect square over the center")]
    DegreeNotIntegral(usize),
    #[error("linear map is singular, no inverse certificate")]
    Singular,
    #[error("certificates do not compose: target of the first differs from source of the second")]
    NotComposable,
}

/// Kind and type of an involution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum InvolutionKind {
    First,
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum InvolutionType {
    Orthogonal,
    Symplectic,
    Unitary,
}

impl fmt::Display for InvolutionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvolutionType::Orthogonal => write!(f, "orthogonal"),
            InvolutionType::Symplectic => write!(f, "symplectic"),
            InvolutionType::Unitary => write!(f, "unitary"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct InvolutionClass {
    pub kind: InvolutionKind,
    pub itype: InvolutionType,
    pub sym_dim: usize,
    pub degree: usize,
}

#[derive(Debug, Clone)]
pub struct InvolutiveAlgebra {
    field: FieldDescriptor,
    dim: usize,
    unit: Vec<FieldScalar>,
    /// `mul[i * dim + j]` is the sparse expansion of `basis_i * basis_j`.
    mul: Vec<SparseVec>,
    /// Involution matrix by rows: `inv(x)_r = sum_c inv[r][c] x_c`.
    inv: Vec<Vec<FieldScalar>>,
    /// Basis indices known to generate the algebra (used to cut down the
    /// center computation); empty means "use every basis element".
    generators: Vec<usize>,
    center: Vec<Vec<FieldScalar>>,
    center_fixed: bool,
    label: String,
}

impl PartialEq for InvolutiveAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.dim == other.dim
            && self.unit == other.unit
            && self.mul == other.mul
            && self.inv == other.inv
    }
}

impl Eq for InvolutiveAlgebra {}

pub fn zero_vec(dim: usize, field: &FieldDescriptor) -> Vec<FieldScalar> {
    vec![FieldScalar::zero(field); dim]
}

pub fn basis_vec(i: usize, dim: usize, field: &FieldDescriptor) -> Vec<FieldScalar> {
    let mut v = zero_vec(dim, field);
    v[i] = FieldScalar::one(field);
    v
}

pub fn add_scaled(dst: &mut [FieldScalar], src: &SparseVec, c: &FieldScalar) {
    if c.is_zero() {
        return;
    }
    for (k, v) in src {
        dst[*k] = &dst[*k] + &(v * c);
    }
}

pub fn vec_is_zero(v: &[FieldScalar]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn vec_sub(a: &[FieldScalar], b: &[FieldScalar]) -> Vec<FieldScalar> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub(crate) fn sparse_of(v: &[FieldScalar]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

/// Accumulator for sparse linear combinations; indices stay sorted and
/// cancellations are dropped.
#[derive(Debug, Default)]
pub(crate) struct SparseAcc {
    terms: std::collections::BTreeMap<usize, FieldScalar>,
}

impl SparseAcc {
    pub(crate) fn new() -> Self {
        SparseAcc::default()
    }

    pub(crate) fn add(&mut self, index: usize, value: FieldScalar) {
        if value.is_zero() {
            return;
        }
        match self.terms.entry(index) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(value);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().try_add(&value).expect("same field");
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub(crate) fn add_scaled(&mut self, src: &SparseVec, c: &FieldScalar) {
        if c.is_zero() {
            return;
        }
        for (k, v) in src {
            self.add(*k, v * c);
        }
    }

    pub(crate) fn into_sparse(self) -> SparseVec {
        self.terms.into_iter().collect()
    }
}

/// Scale a sparse vector; the result keeps the sorted-index invariant.
pub(crate) fn sparse_scaled(xs: &SparseVec, c: &FieldScalar) -> SparseVec {
    if c.is_zero() {
        return Vec::new();
    }
    xs.iter().map(|(k, v)| (*k, v * c)).collect()
}

impl InvolutiveAlgebra {
    pub fn new(
        field: FieldDescriptor,
        dim: usize,
        unit: Vec<FieldScalar>,
        mul: Vec<SparseVec>,
        inv: Vec<Vec<FieldScalar>>,
        generators: Vec<usize>,
        label: String,
    ) -> Result<Self, AlgebraError> {
        if unit.len() != dim || mul.len() != dim * dim || inv.len() != dim {
            return Err(AlgebraError::ShapeMismatch);
        }
        if inv.iter().any(|row| row.len() != dim) {
            return Err(AlgebraError::ShapeMismatch);
        }
        let mut alg = InvolutiveAlgebra {
            field,
            dim,
            unit,
            mul,
            inv,
            generators,
            center: Vec::new(),
            center_fixed: true,
            label,
        };
        alg.validate()?;
        alg.compute_center();
        Ok(alg)
    }

    fn validate(&self) -> Result<(), AlgebraError> {
        let dim = self.dim;
        let unit_sparse = sparse_of(&self.unit);
        // Unit acts as identity on both sides.
        for i in 0..dim {
            let e = vec![(i, FieldScalar::one(&self.field))];
            if self.mul_sparse(&e, &unit_sparse) != e || self.mul_sparse(&unit_sparse, &e) != e {
                return Err(AlgebraError::NotUnital(i));
            }
        }
        // Associativity.
        let expand_left = |terms: &SparseVec, k: usize| -> SparseVec {
            if let [(p, c)] = terms.as_slice() {
                return sparse_scaled(self.mul_basis(*p, k), c);
            }
            let mut acc = SparseAcc::new();
            for (p, c) in terms {
                acc.add_scaled(self.mul_basis(*p, k), c);
            }
            acc.into_sparse()
        };
        let expand_right = |i: usize, terms: &SparseVec| -> SparseVec {
            if let [(p, c)] = terms.as_slice() {
                return sparse_scaled(self.mul_basis(i, *p), c);
            }
            let mut acc = SparseAcc::new();
            for (p, c) in terms {
                acc.add_scaled(self.mul_basis(i, *p), c);
            }
            acc.into_sparse()
        };
        let check_triple = |i: usize, j: usize, k: usize| -> bool {
            let ij = self.mul_basis(i, j);
            let jk = self.mul_basis(j, k);
            // allocation-free path for single-term tables (blade algebras)
            if let ([(p, c)], [(p2, c2)]) = (ij.as_slice(), jk.as_slice()) {
                let left = self.mul_basis(*p, k);
                let right = self.mul_basis(i, *p2);
                return match (left.as_slice(), right.as_slice()) {
                    ([(r1, d1)], [(r2, d2)]) => r1 == r2 && c * d1 == c2 * d2,
                    ([], []) => true,
                    _ => expand_left(ij, k) == expand_right(i, jk),
                };
            }
            expand_left(ij, k) == expand_right(i, jk)
        };
        if dim <= EXHAUSTIVE_VALIDATION_DIM {
            for i in 0..dim {
                for j in 0..dim {
                    for k in 0..dim {
                        if !check_triple(i, j, k) {
                            return Err(AlgebraError::NotAssociative(i, j, k));
                        }
                    }
                }
            }
        } else {
            let mut rng = SplitMix64::new(0xA11E_B7A5);
            for _ in 0..SAMPLED_VALIDATION_TRIPLES {
                let (i, j, k) = (rng.below(dim), rng.below(dim), rng.below(dim));
                if !check_triple(i, j, k) {
                    return Err(AlgebraError::NotAssociative(i, j, k));
                }
            }
        }
        // Involution squares to the identity and reverses products.
        let inv_cols = self.inv_columns_sparse();
        for (i, col) in inv_cols.iter().enumerate() {
            let mut twice = SparseAcc::new();
            for (k, c) in col {
                twice.add_scaled(&inv_cols[*k], c);
            }
            if twice.into_sparse() != vec![(i, FieldScalar::one(&self.field))] {
                return Err(AlgebraError::InvolutionNotInvolutive(i));
            }
        }
        for i in 0..dim {
            for j in 0..dim {
                let lhs = if let [(k, c)] = self.mul_basis(i, j).as_slice() {
                    sparse_scaled(&inv_cols[*k], c)
                } else {
                    let mut acc = SparseAcc::new();
                    for (k, c) in self.mul_basis(i, j) {
                        acc.add_scaled(&inv_cols[*k], c);
                    }
                    acc.into_sparse()
                };
                let rhs = self.mul_sparse(&inv_cols[j], &inv_cols[i]);
                if lhs != rhs {
                    return Err(AlgebraError::InvolutionNotAntimultiplicative(i, j));
                }
            }
        }
        Ok(())
    }

    /// The involution matrix as sparse columns.
    pub(crate) fn inv_columns_sparse(&self) -> Vec<SparseVec> {
        let mut cols: Vec<SparseVec> = vec![Vec::new(); self.dim];
        for (r, row) in self.inv.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    cols[c].push((r, v.clone()));
                }
            }
        }
        cols
    }

    /// Sparse product of sparse coordinate vectors (sorted by index).
    pub fn mul_sparse(&self, xs: &SparseVec, ys: &SparseVec) -> SparseVec {
        // Single-term operands are the common case for blade tables.
        if let ([(i, xi)], [(j, yj)]) = (xs.as_slice(), ys.as_slice()) {
            return sparse_scaled(self.mul_basis(*i, *j), &(xi * yj));
        }
        let mut acc = SparseAcc::new();
        for (i, xi) in xs {
            for (j, yj) in ys {
                let c = xi * yj;
                acc.add_scaled(self.mul_basis(*i, *j), &c);
            }
        }
        acc.into_sparse()
    }

    fn compute_center(&mut self) {
        let dim = self.dim;
        let gens: Vec<usize> = if self.generators.is_empty() {
            (0..dim).collect()
        } else {
            self.generators.clone()
        };
        // x is central iff x * g = g * x for every generator g.
        let mut rows: Vec<Vec<FieldScalar>> = Vec::new();
        for &g in &gens {
            let mut block: Vec<Vec<FieldScalar>> =
                (0..dim).map(|_| zero_vec(dim, &self.field)).collect();
            for p in 0..dim {
                for (k, c) in self.mul_basis(p, g) {
                    block[*k][p] = &block[*k][p] + c;
                }
                for (k, c) in self.mul_basis(g, p) {
                    block[*k][p] = &block[*k][p] - c;
                }
            }
            rows.extend(block.into_iter().filter(|r| !vec_is_zero(r)));
        }
        self.center = linalg::kernel_basis(&rows, dim, &self.field);
        self.center_fixed = self
            .center
            .iter()
            .all(|v| self.apply_inv(v) == *v);
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> &[FieldScalar] {
        &self.unit
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> &SparseVec {
        &self.mul[i * self.dim + j]
    }

    pub fn mul_vec(&self, x: &[FieldScalar], y: &[FieldScalar]) -> Vec<FieldScalar> {
        let xs = sparse_of(x);
        let ys = sparse_of(y);
        let mut out = zero_vec(self.dim, &self.field);
        for (i, xi) in &xs {
            for (j, yj) in &ys {
                let c = xi * yj;
                add_scaled(&mut out, self.mul_basis(*i, *j), &c);
            }
        }
        out
    }

    pub fn apply_inv(&self, x: &[FieldScalar]) -> Vec<FieldScalar> {
        let mut out = zero_vec(self.dim, &self.field);
        for (c, xc) in x.iter().enumerate() {
            if xc.is_zero() {
                continue;
            }
            for r in 0..self.dim {
                if !self.inv[r][c].is_zero() {
                    out[r] = &out[r] + &(&self.inv[r][c] * xc);
                }
            }
        }
        out
    }

    pub fn inv_matrix(&self) -> &[Vec<FieldScalar>] {
        &self.inv
    }

    pub fn scalar_multiple_of_unit(&self, x: &[FieldScalar]) -> Option<FieldScalar> {
        // unit is a basis vector in every model we build, but stay general:
        // x = c * unit requires x - c*unit = 0 with c read off a pivot of unit.
        let pivot = self.unit.iter().position(|u| !u.is_zero())?;
        let c = x[pivot].try_div(&self.unit[pivot]).ok()?;
        let mut residual = x.to_vec();
        for (i, u) in self.unit.iter().enumerate() {
            residual[i] = &residual[i] - &(u * &c);
        }
        vec_is_zero(&residual).then_some(c)
    }

    pub fn center_basis(&self) -> &[Vec<FieldScalar>] {
        &self.center
    }

    pub fn center_dim(&self) -> usize {
        self.center.len()
    }

    /// Does the involution fix the center elementwise?
    pub fn center_fixed(&self) -> bool {
        self.center_fixed
    }

    /// Dimension of the symmetric subspace `{x : inv(x) = x}` over the base field.
    pub fn symmetric_dim(&self) -> usize {
        let mut rows: Vec<Vec<FieldScalar>> = self.inv.clone();
        for (r, row) in rows.iter_mut().enumerate() {
            row[r] = &row[r] - &FieldScalar::one(&self.field);
        }
        self.dim - linalg::rank(&rows, self.dim)
    }

    /// Kind and type classification per the symmetric-dimension count.
    pub fn classify(&self) -> Result<InvolutionClass, AlgebraError> {
        match self.center_dim() {
            1 => {
                let degree = int_sqrt(self.dim).ok_or(AlgebraError::DegreeNotIntegral(self.dim))?;
                let sym_dim = self.symmetric_dim();
                let itype = if sym_dim == degree * (degree + 1) / 2 {
                    InvolutionType::Orthogonal
                } else if sym_dim == degree * degree.saturating_sub(1) / 2 {
                    InvolutionType::Symplectic
                } else {
                    return Err(AlgebraError::SymDimMismatch { sym_dim, degree });
                };
                Ok(InvolutionClass {
                    kind: InvolutionKind::First,
                    itype,
                    sym_dim,
                    degree,
                })
            }
            2 => {
                if self.center_fixed {
                    return Err(AlgebraError::TypeUndefined);
                }
                let half = self.dim / 2;
                if half * 2 != self.dim {
                    return Err(AlgebraError::DegreeNotIntegral(self.dim));
                }
                let degree =
                    int_sqrt(half).ok_or(AlgebraError::DegreeNotIntegral(self.dim))?;
                Ok(InvolutionClass {
                    kind: InvolutionKind::Second,
                    itype: InvolutionType::Unitary,
                    sym_dim: self.symmetric_dim(),
                    degree,
                })
            }
            d => Err(AlgebraError::CenterDimension(d)),
        }
    }

    /// For a 2-dimensional center: the rational `lambda` with `v^2 = lambda`
    /// for the trace-zero-normalized non-unit center element `v`. Identifies
    /// the center as `F(sqrt(lambda))`.
    pub fn center_quadratic_class(&self) -> Option<FieldScalar> {
        if self.center_dim() != 2 {
            return None;
        }
        // Pick a center element independent of the unit.
        let w = self
            .center
            .iter()
            .find(|v| self.scalar_multiple_of_unit(v).is_none())?;
        let w2 = self.mul_vec(w, w);
        // Solve w^2 = alpha * 1 + beta * w, then v = w - beta/2 has v^2 scalar.
        let cols = vec![self.unit.to_vec(), w.clone()];
        let sol = linalg::solve_columns(&cols, &w2, &self.field)?;
        let (alpha, beta) = (&sol[0], &sol[1]);
        let quarter = FieldScalar::rat(1, 4).coerce_into(&self.field).ok()?;
        alpha.try_add(&quarter.try_mul(&beta.try_mul(beta).ok()?).ok()?).ok()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut triples = Vec::new();
        for i in 0..self.dim {
            for j in 0..self.dim {
                for (k, c) in self.mul_basis(i, j) {
                    triples.push(json!([i, j, k, c.to_string()]));
                }
            }
        }
        json!({
            "schema": "inv-alg/1",
            "label": self.label,
            "field": self.field.to_string(),
            "dim": self.dim,
            "unit": self.unit.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "mul": triples,
            "inv": self.inv.iter().map(|row| {
                row.iter().map(|c| c.to_string()).collect::<Vec<_>>()
            }).collect::<Vec<_>>(),
        })
    }
}

fn int_sqrt(n: usize) -> Option<usize> {
    let r = (n as f64).sqrt().round() as usize;
    for cand in r.saturating_sub(1)..=r + 1 {
        if cand * cand == n {
            return Some(cand);
        }
    }
    None
}

/// The Clifford algebra `C(V, q)` with the involution induced by `sigma`,
/// as a structure-constant table on the ascending blade basis.
pub fn from_clifford(q: &QuadForm, sigma: &OrthSymmetry) -> Result<InvolutiveAlgebra, AlgebraError> {
    assert_eq!(q.dim(), sigma.dim(), "symmetry must match the form");
    let n = q.dim();
    let masks = full_basis_masks(n);
    build_blade_algebra(q, sigma, &masks, format!("C({q}, J^{sigma})"))
}

/// The even Clifford algebra `C_0(V, q)` with the restricted involution.
pub fn from_even_clifford(
    q: &QuadForm,
    sigma: &OrthSymmetry,
) -> Result<InvolutiveAlgebra, AlgebraError> {
    assert_eq!(q.dim(), sigma.dim(), "symmetry must match the form");
    let masks = even_basis_masks(q.dim());
    build_blade_algebra(q, sigma, &masks, format!("C0({q}, J^{sigma})"))
}

fn build_blade_algebra(
    q: &QuadForm,
    sigma: &OrthSymmetry,
    masks: &[u32],
    label: String,
) -> Result<InvolutiveAlgebra, AlgebraError> {
    let field = q.field().clone();
    let dim = masks.len();
    let index_of = |mask: u32| -> usize {
        masks.binary_search(&mask).expect("product mask stays in the basis")
    };
    let mut mul = Vec::with_capacity(dim * dim);
    for &s in masks {
        for &t in masks {
            let (sign, coeff, r) = blade_mul(s, t, q);
            let c = sign.apply(&coeff);
            if c.is_zero() {
                mul.push(Vec::new());
            } else {
                mul.push(vec![(index_of(r), c)]);
            }
        }
    }
    let mut inv = vec![zero_vec(dim, &field); dim];
    for (i, &mask) in masks.iter().enumerate() {
        inv[i][i] = induced_involution_sign(mask, sigma).as_scalar(&field);
    }
    // Blades of grade 1 (full algebra) or grade 2 (even algebra) generate.
    let min_grade = if masks.iter().any(|m| m.count_ones() == 1) { 1 } else { 2 };
    let generators = masks
        .iter()
        .enumerate()
        .filter(|(_, m)| m.count_ones() == min_grade)
        .map(|(i, _)| i)
        .collect();
    InvolutiveAlgebra::new(
        field,
        dim,
        basis_vec(0, dim, q.field()),
        mul,
        inv,
        generators,
        label,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuaternionInvolution {
    /// The canonical (symplectic) involution: negates i, j, k.
    Canonical,
    /// Orthogonal involution with `J(u) = -u, J(v) = v` on the generators.
    OrthogonalUv,
    /// Orthogonal involution fixing `w = ij` and `v = j`; as a matrix on
    /// (1, i, j, k) this coincides with `OrthogonalUv`.
    OrthogonalWv,
}

impl QuaternionInvolution {
    pub fn is_symplectic(&self) -> bool {
        matches!(self, QuaternionInvolution::Canonical)
    }
}

/// The quaternion algebra `(a, b)` on the basis `(1, i, j, k)` with
/// `i^2 = a`, `j^2 = b`, `ij = -ji = k`, equipped with the requested involution.
pub fn quaternion(
    a: &FieldScalar,
    b: &FieldScalar,
    invkind: QuaternionInvolution,
) -> Result<InvolutiveAlgebra, AlgebraError> {
    if a.is_zero() || b.is_zero() {
        return Err(AlgebraError::ZeroParameter);
    }
    if a.field() != b.field() {
        return Err(AlgebraError::FieldMismatch);
    }
    let field = a.field().clone();
    let one = FieldScalar::one(&field);
    let dim = 4;
    let term = |k: usize, c: FieldScalar| -> SparseVec {
        if c.is_zero() {
            Vec::new()
        } else {
            vec![(k, c)]
        }
    };
    let ab = a.try_mul(b).unwrap();
    let mut mul = vec![Vec::new(); 16];
    // row-major (i * 4 + j); basis order (1, i, j, k)
    for x in 0..4 {
        mul[x] = term(x, one.clone()); // 1 * x
        mul[x * 4] = term(x, one.clone()); // x * 1
    }
    mul[5] = term(0, a.clone()); // i i = a
    mul[6] = term(3, one.clone()); // i j = k
    mul[7] = term(2, a.clone()); // i k = a j
    mul[9] = term(3, one.neg()); // j i = -k
    mul[10] = term(0, b.clone()); // j j = b
    mul[11] = term(1, b.neg()); // j k = -b i
    mul[13] = term(2, a.neg()); // k i = -a j
    mul[14] = term(1, b.clone()); // k j = b i
    mul[15] = term(0, ab.neg()); // k k = -a b
    let signs: [i64; 4] = match invkind {
        QuaternionInvolution::Canonical => [1, -1, -1, -1],
        QuaternionInvolution::OrthogonalUv | QuaternionInvolution::OrthogonalWv => [1, -1, 1, 1],
    };
    let mut inv = vec![zero_vec(dim, &field); dim];
    for (i, s) in signs.iter().enumerate() {
        inv[i][i] = FieldScalar::from_int(*s, &field);
    }
    let label = match invkind {
        QuaternionInvolution::Canonical => format!("({a},{b} | canonical)"),
        _ => format!("({a},{b} | orthogonal)"),
    };
    InvolutiveAlgebra::new(
        field.clone(),
        dim,
        basis_vec(0, dim, &field),
        mul,
        inv,
        vec![1, 2],
        label,
    )
}

/// Ordinary (ungraded) tensor product with the factorwise involution.
/// Basis index `p = i * dim(B) + j` for `a_i (x) b_j`.
pub fn tensor(
    a: &InvolutiveAlgebra,
    b: &InvolutiveAlgebra,
) -> Result<InvolutiveAlgebra, AlgebraError> {
    if a.field() != b.field() {
        return Err(AlgebraError::FieldMismatch);
    }
    let field = a.field().clone();
    let (da, db) = (a.dim(), b.dim());
    let dim = da * db;
    let mut unit = zero_vec(dim, &field);
    for (i, ua) in a.unit().iter().enumerate() {
        if ua.is_zero() {
            continue;
        }
        for (j, ub) in b.unit().iter().enumerate() {
            if !ub.is_zero() {
                unit[i * db + j] = ua * ub;
            }
        }
    }
    let mut mul = vec![Vec::new(); dim * dim];
    for i1 in 0..da {
        for j1 in 0..da {
            let pa = a.mul_basis(i1, j1);
            if pa.is_empty() {
                continue;
            }
            for i2 in 0..db {
                for j2 in 0..db {
                    let pb = b.mul_basis(i2, j2);
                    if pb.is_empty() {
                        continue;
                    }
                    let mut entry = Vec::with_capacity(pa.len() * pb.len());
                    for (k1, c1) in pa {
                        for (k2, c2) in pb {
                            entry.push((k1 * db + k2, c1 * c2));
                        }
                    }
                    mul[(i1 * db + i2) * dim + (j1 * db + j2)] = entry;
                }
            }
        }
    }
    let mut inv = vec![zero_vec(dim, &field); dim];
    for r1 in 0..da {
        for c1 in 0..da {
            if a.inv_matrix()[r1][c1].is_zero() {
                continue;
            }
            for r2 in 0..db {
                for c2 in 0..db {
                    if b.inv_matrix()[r2][c2].is_zero() {
                        continue;
                    }
                    inv[r1 * db + r2][c1 * db + c2] =
                        &a.inv_matrix()[r1][c1] * &b.inv_matrix()[r2][c2];
                }
            }
        }
    }
    // g (x) 1 and 1 (x) h generate, provided both units are basis vector 0.
    let unit_is_e0 = |x: &InvolutiveAlgebra| {
        x.unit()
            .iter()
            .enumerate()
            .all(|(i, c)| if i == 0 { c.is_one() } else { c.is_zero() })
    };
    let generators = if unit_is_e0(a) && unit_is_e0(b) {
        let mut g: Vec<usize> = a.generators().iter().map(|&i| i * db).collect();
        g.extend(b.generators().iter().copied());
        g
    } else {
        Vec::new()
    };
    InvolutiveAlgebra::new(
        field,
        dim,
        unit,
        mul,
        inv,
        generators,
        format!("{} (x) {}", a.label(), b.label()),
    )
}

/// A linear map between algebras given by the images of the source basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearMapTable {
    source_dim: usize,
    target_dim: usize,
    cols: Vec<Vec<FieldScalar>>,
}

impl LinearMapTable {
    pub fn from_columns(target_dim: usize, cols: Vec<Vec<FieldScalar>>) -> Self {
        for c in &cols {
            assert_eq!(c.len(), target_dim);
        }
        LinearMapTable {
            source_dim: cols.len(),
            target_dim,
            cols,
        }
    }

    pub fn identity(dim: usize, field: &FieldDescriptor) -> Self {
        LinearMapTable {
            source_dim: dim,
            target_dim: dim,
            cols: (0..dim).map(|i| basis_vec(i, dim, field)).collect(),
        }
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn column(&self, i: usize) -> &[FieldScalar] {
        &self.cols[i]
    }

    pub fn apply(&self, x: &[FieldScalar]) -> Vec<FieldScalar> {
        assert_eq!(x.len(), self.source_dim);
        let field = self.field();
        let mut out = zero_vec(self.target_dim, &field);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (r, c) in self.cols[i].iter().enumerate() {
                if !c.is_zero() {
                    out[r] = &out[r] + &(c * xi);
                }
            }
        }
        out
    }

    fn field(&self) -> FieldDescriptor {
        self.cols
            .first()
            .and_then(|c| c.first())
            .map(|x| x.field().clone())
            .unwrap_or(FieldDescriptor::Rationals)
    }

    /// `then.apply(self.apply(x))` as a single table.
    pub fn then(&self, then: &LinearMapTable) -> LinearMapTable {
        assert_eq!(self.target_dim, then.source_dim);
        LinearMapTable {
            source_dim: self.source_dim,
            target_dim: then.target_dim,
            cols: self.cols.iter().map(|c| then.apply(c)).collect(),
        }
    }

    pub fn inverse(&self) -> Option<LinearMapTable> {
        if self.source_dim != self.target_dim {
            return None;
        }
        let field = self.field();
        // rows[r][c] = cols[c][r]
        let rows: Vec<Vec<FieldScalar>> = (0..self.target_dim)
            .map(|r| (0..self.source_dim).map(|c| self.cols[c][r].clone()).collect())
            .collect();
        let inv_rows = linalg::invert(&rows, &field)?;
        let cols = (0..self.source_dim)
            .map(|c| (0..self.target_dim).map(|r| inv_rows[r][c].clone()).collect())
            .collect();
        Some(LinearMapTable {
            source_dim: self.target_dim,
            target_dim: self.source_dim,
            cols,
        })
    }

    pub fn rank(&self) -> usize {
        let rows: Vec<Vec<FieldScalar>> = (0..self.target_dim)
            .map(|r| (0..self.source_dim).map(|c| self.cols[c][r].clone()).collect())
            .collect();
        linalg::rank(&rows, self.source_dim)
    }

    /// Kronecker product; index convention `p = i * other.dim + j`.
    pub fn kron(&self, other: &LinearMapTable) -> LinearMapTable {
        let source_dim = self.source_dim * other.source_dim;
        let target_dim = self.target_dim * other.target_dim;
        let field = self.field();
        let mut cols = Vec::with_capacity(source_dim);
        for c1 in &self.cols {
            for c2 in &other.cols {
                let mut col = zero_vec(target_dim, &field);
                for (r1, v1) in c1.iter().enumerate() {
                    if v1.is_zero() {
                        continue;
                    }
                    for (r2, v2) in c2.iter().enumerate() {
                        if !v2.is_zero() {
                            col[r1 * other.target_dim + r2] = v1 * v2;
                        }
                    }
                }
                cols.push(col);
            }
        }
        LinearMapTable {
            source_dim,
            target_dim,
            cols,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "source_dim": self.source_dim,
            "target_dim": self.target_dim,
            "columns": self.cols.iter().map(|c| {
                c.iter().map(|x| x.to_string()).collect::<Vec<_>>()
            }).collect::<Vec<_>>(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckOutcome {
    Pass,
    Fail(String),
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, CheckOutcome::Pass)
    }

    pub fn witness(&self) -> Option<&str> {
        match self {
            CheckOutcome::Pass => None,
            CheckOutcome::Fail(w) => Some(w),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertChecks {
    pub unital: CheckOutcome,
    pub multiplicative: CheckOutcome,
    pub bijective: CheckOutcome,
    pub involution_compatible: CheckOutcome,
}

impl CertChecks {
    pub fn all_passed(&self) -> bool {
        self.unital.passed()
            && self.multiplicative.passed()
            && self.bijective.passed()
            && self.involution_compatible.passed()
    }
}

/// A candidate isomorphism of algebras with involution plus the evidence
/// that it is one.
#[derive(Debug, Clone)]
pub struct IsoCertificate {
    pub source: Arc<InvolutiveAlgebra>,
    pub target: Arc<InvolutiveAlgebra>,
    pub map: LinearMapTable,
    pub checks: CertChecks,
}

impl IsoCertificate {
    pub fn verified(&self) -> bool {
        self.checks.all_passed()
    }

    /// Inverse certificate: exact matrix inverse, re-verified from scratch.
    pub fn inverted(&self) -> Result<IsoCertificate, AlgebraError> {
        let inv = self.map.inverse().ok_or(AlgebraError::Singular)?;
        Ok(verify_certificate(
            self.target.clone(),
            self.source.clone(),
            inv,
        ))
    }

    /// Composition with a following certificate; the composite is re-verified.
    pub fn then(&self, next: &IsoCertificate) -> Result<IsoCertificate, AlgebraError> {
        if self.target.as_ref() != next.source.as_ref() {
            return Err(AlgebraError::NotComposable);
        }
        Ok(verify_certificate(
            self.source.clone(),
            next.target.clone(),
            self.map.then(&next.map),
        ))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let outcome = |c: &CheckOutcome| match c {
            CheckOutcome::Pass => json!({"status": "pass"}),
            CheckOutcome::Fail(w) => json!({"status": "fail", "witness": w}),
        };
        json!({
            "source": self.source.label(),
            "target": self.target.label(),
            "source_dim": self.source.dim(),
            "target_dim": self.target.dim(),
            "map": self.map.to_json(),
            "checks": {
                "unital": outcome(&self.checks.unital),
                "multiplicative": outcome(&self.checks.multiplicative),
                "bijective": outcome(&self.checks.bijective),
                "involution_compatible": outcome(&self.checks.involution_compatible),
            },
        })
    }
}

/// Run all four certificate checks for `map : source -> target`.
pub fn verify_certificate(
    source: Arc<InvolutiveAlgebra>,
    target: Arc<InvolutiveAlgebra>,
    map: LinearMapTable,
) -> IsoCertificate {
    let dim = source.dim();
    let unital = if map.apply(source.unit()) == target.unit() {
        CheckOutcome::Pass
    } else {
        CheckOutcome::Fail("map(1) != 1".to_string())
    };

    let cols: Vec<SparseVec> = (0..dim).map(|i| sparse_of(map.column(i))).collect();
    let mut multiplicative = CheckOutcome::Pass;
    'outer: for i in 0..dim {
        for j in 0..dim {
            let lhs = if let [(k, c)] = source.mul_basis(i, j).as_slice() {
                sparse_scaled(&cols[*k], c)
            } else {
                let mut acc = SparseAcc::new();
                for (k, c) in source.mul_basis(i, j) {
                    acc.add_scaled(&cols[*k], c);
                }
                acc.into_sparse()
            };
            let rhs = target.mul_sparse(&cols[i], &cols[j]);
            if lhs != rhs {
                multiplicative =
                    CheckOutcome::Fail(format!("map(e{i} e{j}) != map(e{i}) map(e{j})"));
                break 'outer;
            }
        }
    }

    let bijective = if map.source_dim() == map.target_dim() && map.rank() == dim {
        CheckOutcome::Pass
    } else {
        CheckOutcome::Fail(format!(
            "rank {} < dimension {} (or dimensions differ)",
            map.rank(),
            dim
        ))
    };

    let src_inv_cols = source.inv_columns_sparse();
    let tgt_inv_cols = target.inv_columns_sparse();
    let mut involution_compatible = CheckOutcome::Pass;
    for i in 0..dim {
        let mut lhs = SparseAcc::new();
        for (k, c) in &src_inv_cols[i] {
            lhs.add_scaled(&cols[*k], c);
        }
        let mut rhs = SparseAcc::new();
        for (k, c) in &cols[i] {
            rhs.add_scaled(&tgt_inv_cols[*k], c);
        }
        if lhs.into_sparse() != rhs.into_sparse() {
            involution_compatible = CheckOutcome::Fail(format!(
                "map(inv(e{i})) != inv(map(e{i}))"
            ));
            break;
        }
    }

    IsoCertificate {
        source,
        target,
        map,
        checks: CertChecks {
            unital,
            multiplicative,
            bijective,
            involution_compatible,
        },
    }
}
