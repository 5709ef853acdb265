//! Executable universal properties: Clifford maps into a table algebra
//! factor through `C(V, q)`, even Clifford maps factor through `C_0(V, q)`.
//!
//! A Clifford map is given by the images of the diagonal basis vectors; an
//! even Clifford map by the images of all ordered basis pairs. Both are
//! checked against their defining relations before the factoring
//! homomorphism is built, and the built map is verified to be multiplicative
//! on the whole blade basis rather than trusted.

use crate::algebra::{
    sparse_of, sparse_scaled, zero_vec, AlgebraError, InvolutiveAlgebra, LinearMapTable,
    SparseAcc, SparseVec,
};
use crate::clifford::{blade_mul, even_basis_masks, full_basis_masks};
use crate::field::FieldScalar;
use crate::qspace::QuadForm;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UniversalError {
    #[error("not an even Clifford map: {0}")]
    NotEvenCliffordMap(String),
    #[error("images do not satisfy the Clifford relations: {0}")]
    RelationFailure(String),
    #[error("built factorization fails to be a homomorphism at {0}; the input table is inconsistent")]
    HomomorphismFailure(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A bilinear map `V x V -> A` given on all ordered basis pairs.
#[derive(Debug, Clone)]
pub struct EvenMapTable {
    form: QuadForm,
    target: Arc<InvolutiveAlgebra>,
    entries: Vec<Vec<Vec<FieldScalar>>>,
}

/// Outcome of validating a candidate map against its defining relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationOutcome {
    pub pass: bool,
    pub counterexample: Option<String>,
}

impl ValidationOutcome {
    fn ok() -> Self {
        ValidationOutcome {
            pass: true,
            counterexample: None,
        }
    }

    fn fail(counterexample: String) -> Self {
        ValidationOutcome {
            pass: false,
            counterexample: Some(counterexample),
        }
    }
}

impl EvenMapTable {
    pub fn new(
        form: QuadForm,
        target: Arc<InvolutiveAlgebra>,
        entries: Vec<Vec<Vec<FieldScalar>>>,
    ) -> Self {
        let n = form.dim();
        assert_eq!(entries.len(), n);
        for row in &entries {
            assert_eq!(row.len(), n);
            for v in row {
                assert_eq!(v.len(), target.dim());
            }
        }
        EvenMapTable {
            form,
            target,
            entries,
        }
    }

    pub fn form(&self) -> &QuadForm {
        &self.form
    }

    pub fn target(&self) -> &Arc<InvolutiveAlgebra> {
        &self.target
    }

    pub fn entry(&self, i: usize, j: usize) -> &[FieldScalar] {
        &self.entries[i][j]
    }

    /// Check the even Clifford map conditions on basis tuples, together with
    /// the polarized variants that make the basis check sufficient for the
    /// bilinear extension, and the primed forms as a cross-check.
    pub fn validate(&self) -> ValidationOutcome {
        let n = self.form.dim();
        let a = &self.target;
        let field = a.field();
        let unit = a.unit();
        let scale = |v: &[FieldScalar], c: &FieldScalar| -> Vec<FieldScalar> {
            v.iter().map(|x| x.try_mul(c).unwrap()).collect()
        };
        let add = |x: &[FieldScalar], y: &[FieldScalar]| -> Vec<FieldScalar> {
            x.iter().zip(y).map(|(p, q)| p + q).collect()
        };

        // (2): psi(x, x) = q(x) on the diagonal.
        for i in 0..n {
            let expected = scale(unit, self.form.coeff(i));
            if self.entry(i, i) != expected.as_slice() {
                return ValidationOutcome::fail(format!(
                    "condition (2) fails at basis vector {i}: psi(e{0}, e{0}) != q(e{0}) * 1",
                    i + 1
                ));
            }
        }
        // (2'): psi(x, y) + psi(y, x) = 2 b(x, y); off-diagonal pairs are orthogonal.
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let sum = add(self.entry(i, j), self.entry(j, i));
                if !sum.iter().all(|c| c.is_zero()) {
                    return ValidationOutcome::fail(format!(
                        "condition (2') fails at pair ({}, {})",
                        i + 1,
                        j + 1
                    ));
                }
            }
        }
        // (1): psi(x, y) psi(y, z) = q(y) psi(x, z) on basis triples.
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let lhs = a.mul_vec(self.entry(i, j), self.entry(j, k));
                    let rhs = scale(self.entry(i, k), self.form.coeff(j));
                    if lhs != rhs {
                        return ValidationOutcome::fail(format!(
                            "condition (1) fails at triple ({}, {}, {})",
                            i + 1,
                            j + 1,
                            k + 1
                        ));
                    }
                }
            }
        }
        // Polarization of (1) in the middle slot: for j != k,
        // psi(x, e_j) psi(e_k, z) + psi(x, e_k) psi(e_j, z) = 2 b(e_j, e_k) psi(x, z) = 0.
        for i in 0..n {
            for l in 0..n {
                for j in 0..n {
                    for k in 0..j {
                        let sum = add(
                            &a.mul_vec(self.entry(i, j), self.entry(k, l)),
                            &a.mul_vec(self.entry(i, k), self.entry(j, l)),
                        );
                        if !sum.iter().all(|c| c.is_zero()) {
                            return ValidationOutcome::fail(format!(
                                "polarized condition (1) fails at (x, z, j, k) = ({}, {}, {}, {})",
                                i + 1,
                                l + 1,
                                j + 1,
                                k + 1
                            ));
                        }
                    }
                }
            }
        }
        // (1') cross-check: psi(x, y) psi(x, z) = 2 b(x, y) psi(x, z) - q(x) psi(y, z).
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let lhs = a.mul_vec(self.entry(i, j), self.entry(i, k));
                    let b = self.form.bilinear_basis(i, j);
                    let two_b = &b + &b;
                    let mut rhs = scale(self.entry(i, k), &two_b);
                    let qi_jk = scale(self.entry(j, k), self.form.coeff(i));
                    for (r, v) in qi_jk.iter().enumerate() {
                        rhs[r] = &rhs[r] - v;
                    }
                    if lhs != rhs {
                        return ValidationOutcome::fail(format!(
                            "condition (1') fails at triple ({}, {}, {})",
                            i + 1,
                            j + 1,
                            k + 1
                        ));
                    }
                }
            }
        }
        let _ = field;
        ValidationOutcome::ok()
    }
}

/// Build the canonical even Clifford map `j(x, y) = i_q(x) i_q(y)` into an
/// even-Clifford table algebra (whose basis is the even blades of `q`).
pub fn canonical_even_map(q: &QuadForm, target: &Arc<InvolutiveAlgebra>) -> EvenMapTable {
    let n = q.dim();
    let masks = even_basis_masks(n);
    let index_of = |m: u32| masks.binary_search(&m).expect("even blade");
    let mut entries = vec![vec![zero_vec(target.dim(), q.field()); n]; n];
    for i in 0..n {
        for j in 0..n {
            let (sign, coeff, mask) = blade_mul(1 << i, 1 << j, q);
            let mut v = zero_vec(target.dim(), q.field());
            v[index_of(mask)] = sign.apply(&coeff);
            entries[i][j] = v;
        }
    }
    EvenMapTable::new(q.clone(), target.clone(), entries)
}

/// Product of several target-algebra elements, left to right.
pub fn alg_product(alg: &InvolutiveAlgebra, items: &[Vec<FieldScalar>]) -> Vec<FieldScalar> {
    let mut acc = sparse_of(alg.unit());
    for item in items {
        acc = alg.mul_sparse(&acc, &sparse_of(item));
    }
    let mut out = zero_vec(alg.dim(), alg.field());
    for (k, c) in acc {
        out[k] = c;
    }
    out
}

/// Factor a validated even Clifford map through the even Clifford algebra:
/// the image of an ascending even blade is the product of the psi-values of
/// its consecutive index pairs. The returned table is verified to be an
/// algebra homomorphism with `Psi o j = psi`.
pub fn even_universal_factor(table: &EvenMapTable) -> Result<LinearMapTable, UniversalError> {
    let outcome = table.validate();
    if !outcome.pass {
        return Err(UniversalError::NotEvenCliffordMap(
            outcome.counterexample.unwrap_or_default(),
        ));
    }
    let q = table.form();
    let a = table.target();
    let n = q.dim();
    let masks = even_basis_masks(n);
    let mut cols = Vec::with_capacity(masks.len());
    for &mask in &masks {
        let mut indices = Vec::new();
        let mut m = mask;
        while m != 0 {
            indices.push(m.trailing_zeros() as usize);
            m &= m - 1;
        }
        let pairs: Vec<Vec<FieldScalar>> = indices
            .chunks(2)
            .map(|pair| table.entry(pair[0], pair[1]).to_vec())
            .collect();
        cols.push(alg_product(a, &pairs));
    }
    let map = LinearMapTable::from_columns(a.dim(), cols);

    // Verify multiplicativity on all even blade pairs.
    let cols_sparse: Vec<SparseVec> = (0..masks.len())
        .map(|i| sparse_of(map.column(i)))
        .collect();
    let index_of = |m: u32| masks.binary_search(&m).expect("even blade");
    for (iu, &u) in masks.iter().enumerate() {
        for (iv, &v) in masks.iter().enumerate() {
            let (sign, coeff, w) = blade_mul(u, v, q);
            let factor = sign.apply(&coeff);
            let expected = sparse_scaled(&cols_sparse[index_of(w)], &factor);
            let got = a.mul_sparse(&cols_sparse[iu], &cols_sparse[iv]);
            if got != expected {
                return Err(UniversalError::HomomorphismFailure(format!(
                    "even blade pair ({u:#b}, {v:#b})"
                )));
            }
        }
    }
    Ok(map)
}

/// Factor a Clifford map through `C(V, q)`: `images[i]` is the image of the
/// i-th diagonal generator. The relations `g_i^2 = a_i` and
/// `g_i g_j + g_j g_i = 0` are checked first; the extension sends an
/// ascending blade to the ordered product of its generator images and is
/// verified multiplicative on all blade pairs.
pub fn clifford_map_factor(
    q: &QuadForm,
    images: &[Vec<FieldScalar>],
    target: &Arc<InvolutiveAlgebra>,
) -> Result<LinearMapTable, UniversalError> {
    let n = q.dim();
    assert_eq!(images.len(), n);
    for g in images {
        assert_eq!(g.len(), target.dim());
    }
    // Relation prechecks (the diagonal-basis form of the defining equations).
    let images_sparse: Vec<SparseVec> = images.iter().map(|g| sparse_of(g)).collect();
    let unit_sparse = sparse_of(target.unit());
    for (i, g) in images_sparse.iter().enumerate() {
        let sq = target.mul_sparse(g, g);
        let expected = sparse_scaled(&unit_sparse, q.coeff(i));
        if sq != expected {
            return Err(UniversalError::RelationFailure(format!(
                "g{}^2 != q(e{}) * 1",
                i + 1,
                i + 1
            )));
        }
    }
    for i in 0..n {
        for j in 0..i {
            let mut anti = SparseAcc::new();
            let one = FieldScalar::one(target.field());
            anti.add_scaled(&target.mul_sparse(&images_sparse[i], &images_sparse[j]), &one);
            anti.add_scaled(&target.mul_sparse(&images_sparse[j], &images_sparse[i]), &one);
            if !anti.into_sparse().is_empty() {
                return Err(UniversalError::RelationFailure(format!(
                    "g{} and g{} do not anticommute",
                    i + 1,
                    j + 1
                )));
            }
        }
    }

    let masks = full_basis_masks(n);
    let mut cols = Vec::with_capacity(masks.len());
    for &mask in &masks {
        let mut factors = Vec::new();
        let mut m = mask;
        while m != 0 {
            factors.push(images[m.trailing_zeros() as usize].clone());
            m &= m - 1;
        }
        cols.push(alg_product(target, &factors));
    }
    let map = LinearMapTable::from_columns(target.dim(), cols);

    let cols_sparse: Vec<SparseVec> = (0..masks.len())
        .map(|i| sparse_of(map.column(i)))
        .collect();
    for (is, &s) in masks.iter().enumerate() {
        for (it, &t) in masks.iter().enumerate() {
            let (sign, coeff, r) = blade_mul(s, t, q);
            let factor = sign.apply(&coeff);
            let expected = sparse_scaled(&cols_sparse[r as usize], &factor);
            let got = target.mul_sparse(&cols_sparse[is], &cols_sparse[it]);
            if got != expected {
                return Err(UniversalError::HomomorphismFailure(format!(
                    "blade pair ({s:#b}, {t:#b})"
                )));
            }
        }
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{basis_vec, from_clifford, from_even_clifford};
    use crate::qspace::{OrthSymmetry, Sign};

    fn q(entries: &[i64]) -> QuadForm {
        QuadForm::diagonal_ints(entries).unwrap()
    }

    #[test]
    fn canonical_map_validates_and_factors_to_identity() {
        let form = q(&[2, 3, 5]);
        let even = Arc::new(from_even_clifford(&form, &OrthSymmetry::identity(3)).unwrap());
        let j = canonical_even_map(&form, &even);
        assert!(j.validate().pass);
        let psi = even_universal_factor(&j).unwrap();
        // Uniqueness forces the identity.
        assert_eq!(psi, LinearMapTable::identity(even.dim(), even.field()));
    }

    #[test]
    fn zero_map_fails_condition_two() {
        let form = q(&[1, 1]);
        let even = Arc::new(from_even_clifford(&form, &OrthSymmetry::identity(2)).unwrap());
        let entries = vec![vec![zero_vec(even.dim(), even.field()); 2]; 2];
        let table = EvenMapTable::new(form, even, entries);
        let outcome = table.validate();
        assert!(!outcome.pass);
        assert!(outcome.counterexample.unwrap().contains("condition (2)"));
    }

    #[test]
    fn bilinear_form_itself_fails_condition_one() {
        // psi(x, y) = b_q(x, y) * 1 on q = <1,1>:
        // psi(e1,e2) psi(e2,e1) = 0 but q(e2) psi(e1,e1) = 1.
        let form = q(&[1, 1]);
        let even = Arc::new(from_even_clifford(&form, &OrthSymmetry::identity(2)).unwrap());
        let mut entries = vec![vec![zero_vec(even.dim(), even.field()); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                let b = form.bilinear_basis(i, j);
                let mut v = zero_vec(even.dim(), even.field());
                v[0] = b;
                entries[i][j] = v;
            }
        }
        let table = EvenMapTable::new(form, even, entries);
        let outcome = table.validate();
        assert!(!outcome.pass);
        assert!(outcome.counterexample.unwrap().contains("condition (1)"));
    }

    #[test]
    fn isometry_twisted_map_factors() {
        // psi(x, y) = i(s(x)) i(s(y)) for the sign-vector isometry s = diag(-1, 1, -1).
        let form = q(&[2, 3, 5]);
        let even = Arc::new(from_even_clifford(&form, &OrthSymmetry::identity(3)).unwrap());
        let s = OrthSymmetry::parse("-+-", 3).unwrap();
        let canonical = canonical_even_map(&form, &even);
        let n = form.dim();
        let mut entries = vec![vec![zero_vec(even.dim(), even.field()); n]; n];
        for i in 0..n {
            for j in 0..n {
                let sign = s.sign(i).mul(s.sign(j));
                entries[i][j] = canonical
                    .entry(i, j)
                    .iter()
                    .map(|c| sign.apply(c))
                    .collect();
            }
        }
        let table = EvenMapTable::new(form.clone(), even.clone(), entries);
        let psi = even_universal_factor(&table).unwrap();
        // Psi is the even extension of s: on an even blade it multiplies by
        // the product of the signs of its indices.
        for (idx, &mask) in crate::clifford::even_basis_masks(n).iter().enumerate() {
            let mut sign = Sign::Plus;
            let mut m = mask;
            while m != 0 {
                sign = sign.mul(s.sign(m.trailing_zeros() as usize));
                m &= m - 1;
            }
            let mut expected = zero_vec(even.dim(), even.field());
            expected[idx] = sign.as_scalar(even.field());
            assert_eq!(psi.column(idx), expected.as_slice());
        }
    }

    #[test]
    fn clifford_map_factor_identity_and_gamma() {
        let form = q(&[2, 3]);
        let alg = Arc::new(from_clifford(&form, &OrthSymmetry::identity(2)).unwrap());
        let gens: Vec<Vec<FieldScalar>> = (0..2)
            .map(|i| basis_vec(1 << i, 4, alg.field()))
            .collect();
        let phi = clifford_map_factor(&form, &gens, &alg).unwrap();
        assert_eq!(phi, LinearMapTable::identity(4, alg.field()));

        // Images -e1, -e2 extend to the grade involution.
        let neg: Vec<Vec<FieldScalar>> = gens
            .iter()
            .map(|g| g.iter().map(|c| c.neg()).collect())
            .collect();
        let gamma = clifford_map_factor(&form, &neg, &alg).unwrap();
        for (mask, col) in (0..4u32).zip(0..4usize) {
            let sign = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
            assert_eq!(gamma.column(col)[mask as usize], FieldScalar::int(sign));
        }
    }

    #[test]
    fn clifford_map_factor_rejects_scaled_generators() {
        // A non-isometry diagonal map (scaling by 2) violates g^2 = q(e).
        let form = q(&[2, 3]);
        let alg = Arc::new(from_clifford(&form, &OrthSymmetry::identity(2)).unwrap());
        let gens: Vec<Vec<FieldScalar>> = (0..2)
            .map(|i| {
                let mut v = basis_vec(1 << i, 4, alg.field());
                v[1 << i] = FieldScalar::int(2);
                v
            })
            .collect();
        let err = clifford_map_factor(&form, &gens, &alg).unwrap_err();
        assert!(matches!(err, UniversalError::RelationFailure(_)));
    }
}
