//! Diagonal quadratic forms and orthogonal symmetries on an adapted basis.
//!
//! A form is its list of nonzero diagonal coefficients; an orthogonal
//! symmetry is the +-1 sign vector it acts by on the same basis. Both signed
//! discriminants live here: the discriminant of a form (an exact scalar for
//! the chosen diagonal, not a square class) and the discriminant of a
//! symmetry (a sign).

use crate::field::{FieldDescriptor, FieldError, FieldScalar};
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormError {
    #[error("diagonal coefficient {index} is zero (degenerate form)")]
    ZeroCoefficient { index: usize },
    #[error("forms live over different fields")]
    FieldMismatch,
    #[error("scaling by zero")]
    ZeroScale,
    #[error("symmetry has length {got}, form has dimension {expected}")]
    LengthMismatch { got: usize, expected: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A sign in `{+1, -1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_parity(k: usize) -> Sign {
        if k % 2 == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn mul(self, other: Sign) -> Sign {
        if self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn as_i32(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn apply(self, x: &FieldScalar) -> FieldScalar {
        match self {
            Sign::Plus => x.clone(),
            Sign::Minus => x.neg(),
        }
    }

    pub fn as_scalar(self, field: &FieldDescriptor) -> FieldScalar {
        match self {
            Sign::Plus => FieldScalar::one(field),
            Sign::Minus => FieldScalar::one(field).neg(),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Plus => write!(f, "+"),
            Sign::Minus => write!(f, "-"),
        }
    }
}

/// A nondegenerate diagonal quadratic form `<a_1, ..., a_n>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadForm {
    field: FieldDescriptor,
    coeffs: Vec<FieldScalar>,
}

impl QuadForm {
    pub fn new(field: FieldDescriptor, coeffs: Vec<FieldScalar>) -> Result<Self, FormError> {
        for (index, c) in coeffs.iter().enumerate() {
            if c.field() != &field {
                return Err(FormError::FieldMismatch);
            }
            if c.is_zero() {
                return Err(FormError::ZeroCoefficient { index });
            }
        }
        Ok(QuadForm { field, coeffs })
    }

    /// Convenience constructor over `Q` from integer diagonal entries.
    pub fn diagonal_ints(entries: &[i64]) -> Result<Self, FormError> {
        QuadForm::new(
            FieldDescriptor::Rationals,
            entries.iter().map(|&n| FieldScalar::int(n)).collect(),
        )
    }

    pub fn empty(field: FieldDescriptor) -> Self {
        QuadForm {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[FieldScalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &FieldScalar {
        &self.coeffs[i]
    }

    /// Orthogonal sum: concatenated diagonals.
    pub fn orth_sum(&self, other: &QuadForm) -> Result<QuadForm, FormError> {
        if self.field != other.field {
            return Err(FormError::FieldMismatch);
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.extend(other.coeffs.iter().cloned());
        Ok(QuadForm {
            field: self.field.clone(),
            coeffs,
        })
    }

    /// Scale every diagonal entry by a nonzero scalar.
    pub fn scale(&self, a: &FieldScalar) -> Result<QuadForm, FormError> {
        if a.is_zero() {
            return Err(FormError::ZeroScale);
        }
        if a.field() != &self.field {
            return Err(FormError::FieldMismatch);
        }
        Ok(QuadForm {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c.try_mul(a).unwrap()).collect(),
        })
    }

    /// Reorder the diagonal by `perm`: entry `i` of the result is entry
    /// `perm[i]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> QuadForm {
        assert_eq!(perm.len(), self.dim());
        QuadForm {
            field: self.field.clone(),
            coeffs: perm.iter().map(|&i| self.coeffs[i].clone()).collect(),
        }
    }

    /// Signed discriminant `(-1)^{n(n-1)/2} * prod a_i`, exact for this diagonal.
    pub fn signed_disc(&self) -> FieldScalar {
        let n = self.dim();
        let sign = Sign::from_parity(n * (n.saturating_sub(1)) / 2);
        let mut acc = FieldScalar::one(&self.field);
        for c in &self.coeffs {
            acc = acc.try_mul(c).unwrap();
        }
        sign.apply(&acc)
    }

    /// The sub-form on all coordinates except `pivot`, in original order.
    pub fn without(&self, pivot: usize) -> QuadForm {
        assert!(pivot < self.dim());
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .filter_map(|(i, c)| (i != pivot).then(|| c.clone()))
            .collect();
        QuadForm {
            field: self.field.clone(),
            coeffs,
        }
    }

    /// Evaluate `q` on a coordinate vector.
    pub fn eval(&self, x: &[FieldScalar]) -> FieldScalar {
        assert_eq!(x.len(), self.dim());
        let mut acc = FieldScalar::zero(&self.field);
        for (c, xi) in self.coeffs.iter().zip(x) {
            if !xi.is_zero() {
                acc = &acc + &(&(c * xi) * xi);
            }
        }
        acc
    }

    /// The associated bilinear form on basis vectors: `b(e_i, e_j)` is
    /// `a_i` when `i == j` and zero otherwise.
    pub fn bilinear_basis(&self, i: usize, j: usize) -> FieldScalar {
        if i == j {
            self.coeffs[i].clone()
        } else {
            FieldScalar::zero(&self.field)
        }
    }
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ">")
    }
}

/// An orthogonal symmetry adapted to the diagonal basis: a +-1 per basis vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthSymmetry {
    signs: Vec<Sign>,
}

impl OrthSymmetry {
    pub fn new(signs: Vec<Sign>) -> Self {
        OrthSymmetry { signs }
    }

    pub fn identity(n: usize) -> Self {
        OrthSymmetry {
            signs: vec![Sign::Plus; n],
        }
    }

    pub fn neg_identity(n: usize) -> Self {
        OrthSymmetry {
            signs: vec![Sign::Minus; n],
        }
    }

    /// The reflection negating exactly coordinate `at`.
    pub fn reflection(n: usize, at: usize) -> Self {
        assert!(at < n);
        let mut signs = vec![Sign::Plus; n];
        signs[at] = Sign::Minus;
        OrthSymmetry { signs }
    }

    pub fn dim(&self) -> usize {
        self.signs.len()
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn sign(&self, i: usize) -> Sign {
        self.signs[i]
    }

    /// Number of -1 entries, i.e. the dimension of the anti-symmetric subspace.
    pub fn minus_count(&self) -> usize {
        self.signs.iter().filter(|s| **s == Sign::Minus).count()
    }

    pub fn is_reflection(&self) -> bool {
        self.minus_count() == 1
    }

    pub fn det(&self) -> Sign {
        Sign::from_parity(self.minus_count())
    }

    /// Signed discriminant of the symmetry: `(-1)^{n(n-1)/2} * det`.
    pub fn disc(&self) -> Sign {
        let n = self.dim();
        Sign::from_parity(n * n.saturating_sub(1) / 2).mul(self.det())
    }

    /// Pointwise global sign change (`sigma -> eps * sigma`).
    pub fn scaled(&self, eps: Sign) -> OrthSymmetry {
        OrthSymmetry {
            signs: self.signs.iter().map(|s| s.mul(eps)).collect(),
        }
    }

    pub fn concat(&self, other: &OrthSymmetry) -> OrthSymmetry {
        let mut signs = self.signs.clone();
        signs.extend_from_slice(&other.signs);
        OrthSymmetry { signs }
    }

    pub fn permuted(&self, perm: &[usize]) -> OrthSymmetry {
        assert_eq!(perm.len(), self.dim());
        OrthSymmetry {
            signs: perm.iter().map(|&i| self.signs[i]).collect(),
        }
    }

    pub fn without(&self, pivot: usize) -> OrthSymmetry {
        assert!(pivot < self.dim());
        let signs = self
            .signs
            .iter()
            .enumerate()
            .filter_map(|(i, s)| (i != pivot).then_some(*s))
            .collect();
        OrthSymmetry { signs }
    }

    /// Parse a `+-+`-style string, checking length against `n`.
    pub fn parse(text: &str, n: usize) -> Result<Self, FormError> {
        let mut signs = Vec::with_capacity(text.len());
        for ch in text.trim().chars() {
            match ch {
                '+' => signs.push(Sign::Plus),
                '-' => signs.push(Sign::Minus),
                _ => {
                    return Err(FormError::LengthMismatch {
                        got: usize::MAX,
                        expected: n,
                    })
                }
            }
        }
        if signs.len() != n {
            return Err(FormError::LengthMismatch {
                got: signs.len(),
                expected: n,
            });
        }
        Ok(OrthSymmetry { signs })
    }

    /// Apply the symmetry to a coordinate vector.
    pub fn apply(&self, x: &[FieldScalar]) -> Vec<FieldScalar> {
        assert_eq!(x.len(), self.dim());
        self.signs.iter().zip(x).map(|(s, xi)| s.apply(xi)).collect()
    }
}

impl fmt::Display for OrthSymmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.signs {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orth_sum_concatenates() {
        let q1 = QuadForm::diagonal_ints(&[1]).unwrap();
        let q2 = QuadForm::diagonal_ints(&[2, 3]).unwrap();
        let q = q1.orth_sum(&q2).unwrap();
        assert_eq!(q, QuadForm::diagonal_ints(&[1, 2, 3]).unwrap());
        let empty = QuadForm::empty(FieldDescriptor::Rationals);
        assert_eq!(empty.orth_sum(&q2).unwrap(), q2);
    }

    #[test]
    fn scaling() {
        let q = QuadForm::diagonal_ints(&[1, 3]).unwrap();
        assert_eq!(
            q.scale(&FieldScalar::int(2)).unwrap(),
            QuadForm::diagonal_ints(&[2, 6]).unwrap()
        );
        assert_eq!(q.scale(&FieldScalar::int(1)).unwrap(), q);
        assert!(q.scale(&FieldScalar::int(0)).is_err());
    }

    #[test]
    fn signed_discriminants() {
        // n = 2: sign (-1)^1.
        assert_eq!(
            QuadForm::diagonal_ints(&[2, 3]).unwrap().signed_disc(),
            FieldScalar::int(-6)
        );
        // n = 1: sign exponent 0.
        assert_eq!(
            QuadForm::diagonal_ints(&[7]).unwrap().signed_disc(),
            FieldScalar::int(7)
        );
        // n = 3: (-1)^3 * 1.
        assert_eq!(
            QuadForm::diagonal_ints(&[1, 1, 1]).unwrap().signed_disc(),
            FieldScalar::int(-1)
        );
    }

    #[test]
    fn symmetry_discriminants() {
        assert_eq!(OrthSymmetry::identity(2).disc(), Sign::Minus);
        assert_eq!(OrthSymmetry::neg_identity(1).disc(), Sign::Minus);
        assert_eq!(OrthSymmetry::reflection(3, 0).disc(), Sign::Plus);
        // disc squared is always +1 by construction; spot check a few.
        for n in 0..6 {
            for s in [
                OrthSymmetry::identity(n),
                OrthSymmetry::neg_identity(n),
            ] {
                assert_eq!(s.disc().mul(s.disc()), Sign::Plus);
            }
        }
    }

    #[test]
    fn reflections_have_one_minus() {
        let r = OrthSymmetry::reflection(4, 2);
        assert!(r.is_reflection());
        assert_eq!(r.minus_count(), 1);
        assert!(!OrthSymmetry::identity(3).is_reflection());
    }

    #[test]
    fn degenerate_rejected() {
        assert!(matches!(
            QuadForm::diagonal_ints(&[1, 0, 2]),
            Err(FormError::ZeroCoefficient { index: 1 })
        ));
    }

    #[test]
    fn parse_symmetry() {
        let s = OrthSymmetry::parse("+-+", 3).unwrap();
        assert_eq!(s.minus_count(), 1);
        assert!(OrthSymmetry::parse("+-", 3).is_err());
        assert!(OrthSymmetry::parse("+x+", 3).is_err());
    }

    #[test]
    fn disc_of_scaled_form() {
        // signed_disc(a * q) = a^n * signed_disc(q)
        let cases = [(2i64, vec![1i64, 3]), (-3, vec![2, -1, 5]), (5, vec![1])];
        for (a, coeffs) in cases {
            let q = QuadForm::diagonal_ints(&coeffs).unwrap();
            let a = FieldScalar::int(a);
            let lhs = q.scale(&a).unwrap().signed_disc();
            let mut pow = FieldScalar::int(1);
            for _ in 0..q.dim() {
                pow = pow.try_mul(&a).unwrap();
            }
            assert_eq!(lhs, pow.try_mul(&q.signed_disc()).unwrap());
        }
    }

    #[test]
    fn disc_of_orth_sum() {
        // signed_disc(q1 _|_ q2) = (-1)^{n1 n2} signed_disc(q1) signed_disc(q2)
        let cases = [
            (vec![2i64], vec![3i64, -1]),
            (vec![1, 5], vec![2, 2, -3]),
            (vec![-2, 3, 1], vec![5]),
        ];
        for (c1, c2) in cases {
            let q1 = QuadForm::diagonal_ints(&c1).unwrap();
            let q2 = QuadForm::diagonal_ints(&c2).unwrap();
            let lhs = q1.orth_sum(&q2).unwrap().signed_disc();
            let rhs = Sign::from_parity(q1.dim() * q2.dim())
                .apply(&(&q1.signed_disc() * &q2.signed_disc()));
            assert_eq!(lhs, rhs);
        }
    }
}
