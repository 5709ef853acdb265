//! Exact scalars over the rationals and over quadratic extensions `Q(sqrt(c))`.
//!
//! Every scalar stores the field it lives in, so mixed-field arithmetic is
//! rejected instead of silently coerced. Extension scalars are kept as
//! `a + b*sqrt(c)` with both components reduced rationals; the nontrivial
//! automorphism `a + b*sqrt(c) -> a - b*sqrt(c)` is exposed as [`FieldScalar::conjugate`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("scalars live over different fields")]
    DescriptorMismatch,
    #[error("invalid extension radicand `{0}` (must be nonzero and not a rational square)")]
    InvalidRadicand(String),
    #[error("square testing is only supported over the rationals")]
    SquareTestUnsupported,
    #[error("cannot parse scalar `{text}`: {reason}")]
    Parse { text: String, reason: String },
}

/// The base field of a computation: `Q` or a quadratic extension `Q(sqrt(c))`.
#[derive(Debug, Clone, Eq)]
pub enum FieldDescriptor {
    Rationals,
    QuadExt(Arc<BigRational>),
}

impl PartialEq for FieldDescriptor {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (FieldDescriptor::Rationals, FieldDescriptor::Rationals) => true,
            (FieldDescriptor::QuadExt(c), FieldDescriptor::QuadExt(d)) => {
                Arc::ptr_eq(c, d) || c == d
            }
            _ => false,
        }
    }
}

impl FieldDescriptor {
    /// Build `Q(sqrt(c))`. The radicand must be nonzero and not a square in `Q`.
    pub fn quad_ext(c: BigRational) -> Result<Self, FieldError> {
        if c.is_zero() || rational_is_square(&c) {
            return Err(FieldError::InvalidRadicand(format_rational(&c)));
        }
        Ok(FieldDescriptor::QuadExt(Arc::new(c)))
    }

    pub fn is_extension(&self) -> bool {
        matches!(self, FieldDescriptor::QuadExt(_))
    }

    pub fn radicand(&self) -> Option<&BigRational> {
        match self {
            FieldDescriptor::Rationals => None,
            FieldDescriptor::QuadExt(c) => Some(c),
        }
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::Rationals => write!(f, "Q"),
            FieldDescriptor::QuadExt(c) => write!(f, "Q(sqrt({}))", format_rational(c)),
        }
    }
}

/// An exact element `a + b*sqrt(c)` of the ambient field. Over `Q` the
/// `b` component is identically zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldScalar {
    field: FieldDescriptor,
    a: BigRational,
    b: BigRational,
}

impl FieldScalar {
    pub fn zero(field: &FieldDescriptor) -> Self {
        FieldScalar {
            field: field.clone(),
            a: BigRational::zero(),
            b: BigRational::zero(),
        }
    }

    pub fn one(field: &FieldDescriptor) -> Self {
        FieldScalar {
            field: field.clone(),
            a: BigRational::one(),
            b: BigRational::zero(),
        }
    }

    pub fn from_rational(r: BigRational, field: &FieldDescriptor) -> Self {
        FieldScalar {
            field: field.clone(),
            a: r,
            b: BigRational::zero(),
        }
    }

    pub fn from_int(n: i64, field: &FieldDescriptor) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)), field)
    }

    /// Rational `p/q` over `Q`. Panics if `q == 0`.
    pub fn rat(p: i64, q: i64) -> Self {
        Self::from_rational(
            BigRational::new(BigInt::from(p), BigInt::from(q)),
            &FieldDescriptor::Rationals,
        )
    }

    /// Integer scalar over `Q`.
    pub fn int(n: i64) -> Self {
        Self::rat(n, 1)
    }

    /// `a + b*sqrt(c)` in the given extension field.
    pub fn in_extension(a: BigRational, b: BigRational, field: &FieldDescriptor) -> Self {
        debug_assert!(field.is_extension() || b.is_zero());
        FieldScalar {
            field: field.clone(),
            a,
            b,
        }
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn radical_part(&self) -> &BigRational {
        &self.b
    }

    /// The rational value, if this scalar has no sqrt component.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.b.is_zero() {
            Some(&self.a)
        } else {
            None
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    fn check_same(&self, rhs: &Self) -> Result<(), FieldError> {
        if self.field == rhs.field {
            Ok(())
        } else {
            Err(FieldError::DescriptorMismatch)
        }
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self, FieldError> {
        self.check_same(rhs)?;
        Ok(FieldScalar {
            field: self.field.clone(),
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
        })
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self, FieldError> {
        self.check_same(rhs)?;
        Ok(FieldScalar {
            field: self.field.clone(),
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
        })
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self, FieldError> {
        self.check_same(rhs)?;
        match &self.field {
            FieldDescriptor::Rationals => Ok(FieldScalar {
                field: self.field.clone(),
                a: &self.a * &rhs.a,
                b: BigRational::zero(),
            }),
            FieldDescriptor::QuadExt(c) => {
                // (a + b s)(a' + b' s) = (a a' + c b b') + (a b' + b a') s
                let a = &self.a * &rhs.a + c.as_ref() * &self.b * &rhs.b;
                let b = &self.a * &rhs.b + &self.b * &rhs.a;
                Ok(FieldScalar {
                    field: self.field.clone(),
                    a,
                    b,
                })
            }
        }
    }

    /// Multiplicative inverse; uses the norm `a^2 - c b^2` over an extension.
    pub fn inverse(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        match &self.field {
            FieldDescriptor::Rationals => Ok(FieldScalar {
                field: self.field.clone(),
                a: self.a.recip(),
                b: BigRational::zero(),
            }),
            FieldDescriptor::QuadExt(c) => {
                let norm = &self.a * &self.a - c.as_ref() * &self.b * &self.b;
                // c is not a square, so the norm of a nonzero element is nonzero.
                let ninv = norm.recip();
                Ok(FieldScalar {
                    field: self.field.clone(),
                    a: &self.a * &ninv,
                    b: -(&self.b * &ninv),
                })
            }
        }
    }

    pub fn try_div(&self, rhs: &Self) -> Result<Self, FieldError> {
        self.check_same(rhs)?;
        self.try_mul(&rhs.inverse()?)
    }

    /// The nontrivial automorphism of `Q(sqrt(c))/Q`; identity over `Q`.
    pub fn conjugate(&self) -> Self {
        FieldScalar {
            field: self.field.clone(),
            a: self.a.clone(),
            b: -self.b.clone(),
        }
    }

    pub fn neg(&self) -> Self {
        FieldScalar {
            field: self.field.clone(),
            a: -self.a.clone(),
            b: -self.b.clone(),
        }
    }

    /// Squareness test in `Q`. Not supported for extension scalars.
    pub fn is_square(&self) -> Result<bool, FieldError> {
        match &self.field {
            FieldDescriptor::Rationals => Ok(rational_is_square(&self.a)),
            FieldDescriptor::QuadExt(_) => Err(FieldError::SquareTestUnsupported),
        }
    }

    /// Lift into a larger field (only `Q` into `Q(sqrt(c))`, or a no-op).
    pub fn coerce_into(&self, field: &FieldDescriptor) -> Result<Self, FieldError> {
        if &self.field == field {
            return Ok(self.clone());
        }
        match (&self.field, field) {
            (FieldDescriptor::Rationals, FieldDescriptor::QuadExt(_)) => Ok(FieldScalar {
                field: field.clone(),
                a: self.a.clone(),
                b: BigRational::zero(),
            }),
            _ => Err(FieldError::DescriptorMismatch),
        }
    }

    /// Parse a scalar, inferring the field from the text. `sqrt(c)` makes the
    /// result live in `Q(sqrt(c))`; otherwise the result is rational.
    pub fn parse(text: &str) -> Result<Self, FieldError> {
        parse_scalar(text, None)
    }

    /// Parse a scalar that must land in the given field (rational literals
    /// are lifted into an extension).
    pub fn parse_in(text: &str, field: &FieldDescriptor) -> Result<Self, FieldError> {
        parse_scalar(text, Some(field))
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl std::ops::$trait for &FieldScalar {
            type Output = FieldScalar;
            fn $method(self, rhs: &FieldScalar) -> FieldScalar {
                self.$checked(rhs).expect("field mismatch in scalar arithmetic")
            }
        }
        impl std::ops::$trait for FieldScalar {
            type Output = FieldScalar;
            fn $method(self, rhs: FieldScalar) -> FieldScalar {
                (&self).$checked(&rhs).expect("field mismatch in scalar arithmetic")
            }
        }
    };
}

scalar_binop!(Add, add, try_add);
scalar_binop!(Sub, sub, try_sub);
scalar_binop!(Mul, mul, try_mul);

impl std::ops::Neg for &FieldScalar {
    type Output = FieldScalar;
    fn neg(self) -> FieldScalar {
        FieldScalar::neg(self)
    }
}

impl std::ops::Neg for FieldScalar {
    type Output = FieldScalar;
    fn neg(self) -> FieldScalar {
        FieldScalar::neg(&self)
    }
}

pub fn rational_is_square(r: &BigRational) -> bool {
    if r.is_zero() {
        return true;
    }
    if r.is_negative() {
        return false;
    }
    let n = r.numer();
    let d = r.denom();
    let sn = n.sqrt();
    let sd = d.sqrt();
    &(&sn * &sn) == n && &(&sd * &sd) == d
}

pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", format_rational(&self.a));
        }
        let c = match &self.field {
            FieldDescriptor::QuadExt(c) => format_rational(c),
            FieldDescriptor::Rationals => unreachable!("rational scalar with sqrt part"),
        };
        let sqrt_term = |b: &BigRational| -> String {
            let mag = b.abs();
            if mag.is_one() {
                format!("sqrt({c})")
            } else {
                format!("{}*sqrt({c})", format_rational(&mag))
            }
        };
        if self.a.is_zero() {
            if self.b.is_negative() {
                write!(f, "-{}", sqrt_term(&self.b))
            } else {
                write!(f, "{}", sqrt_term(&self.b))
            }
        } else if self.b.is_negative() {
            write!(f, "{}-{}", format_rational(&self.a), sqrt_term(&self.b))
        } else {
            write!(f, "{}+{}", format_rational(&self.a), sqrt_term(&self.b))
        }
    }
}

fn parse_rational(text: &str) -> Result<BigRational, String> {
    let text = text.trim();
    if text.is_empty() {
        return Err("empty numeric literal".into());
    }
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| format!("bad integer `{num}`"))?;
    let d: BigInt = den.parse().map_err(|_| format!("bad integer `{den}`"))?;
    if d.is_zero() {
        return Err("zero denominator".into());
    }
    Ok(BigRational::new(n, d))
}

/// One signed term: either a plain rational or `[coef*]sqrt(c)`.
fn parse_term(term: &str) -> Result<(BigRational, Option<(BigRational, BigRational)>), String> {
    let term = term.trim();
    if let Some(pos) = term.find("sqrt(") {
        if !term.ends_with(')') {
            return Err("missing `)` after sqrt".into());
        }
        let inner = &term[pos + 5..term.len() - 1];
        let c = parse_rational(inner)?;
        let prefix = term[..pos].trim();
        let coef = if prefix.is_empty() {
            BigRational::one()
        } else if prefix == "-" {
            -BigRational::one()
        } else {
            let prefix = prefix.strip_suffix('*').unwrap_or(prefix);
            parse_rational(prefix)?
        };
        Ok((BigRational::zero(), Some((coef, c))))
    } else {
        Ok((parse_rational(term)?, None))
    }
}

fn parse_scalar(text: &str, expect: Option<&FieldDescriptor>) -> Result<FieldScalar, FieldError> {
    let err = |reason: String| FieldError::Parse {
        text: text.to_string(),
        reason,
    };
    let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Err(err("empty input".into()));
    }
    // Split into at most two signed top-level terms (no +/- occurs inside sqrt(...)).
    let mut terms: Vec<String> = Vec::new();
    let mut current = String::new();
    let mut depth = 0usize;
    for (i, ch) in cleaned.chars().enumerate() {
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            '+' | '-' if depth == 0 && i > 0 => {
                terms.push(std::mem::take(&mut current));
                if ch == '-' {
                    current.push('-');
                }
                continue;
            }
            _ => {}
        }
        current.push(ch);
    }
    terms.push(current);
    if terms.len() > 2 {
        return Err(err("more than two terms".into()));
    }

    let mut a = BigRational::zero();
    let mut b = BigRational::zero();
    let mut radicand: Option<BigRational> = None;
    for term in &terms {
        let (ra, sq) = parse_term(term).map_err(err)?;
        a += ra;
        if let Some((coef, c)) = sq {
            if let Some(prev) = &radicand {
                if prev != &c {
                    return Err(err("mixed radicands".into()));
                }
            }
            radicand = Some(c);
            b += coef;
        }
    }

    let scalar = match (radicand, expect) {
        (None, None) => FieldScalar::from_rational(a, &FieldDescriptor::Rationals),
        (None, Some(field)) => FieldScalar::from_rational(a, field),
        (Some(c), None) => {
            let field = FieldDescriptor::quad_ext(c)
                .map_err(|e| err(e.to_string()))?;
            FieldScalar::in_extension(a, b, &field)
        }
        (Some(c), Some(field)) => match field.radicand() {
            Some(expected) if expected == &c => FieldScalar::in_extension(a, b, field),
            _ => return Err(err(format!("radicand {} does not match the ambient field {}", format_rational(&c), field))),
        },
    };
    Ok(scalar)
}

impl serde::Serialize for FieldScalar {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for FieldScalar {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        FieldScalar::parse(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qext(c: i64) -> FieldDescriptor {
        FieldDescriptor::quad_ext(BigRational::from_integer(BigInt::from(c))).unwrap()
    }

    #[test]
    fn rational_addition() {
        let x = FieldScalar::rat(1, 2);
        let y = FieldScalar::rat(1, 3);
        assert_eq!(&x + &y, FieldScalar::rat(5, 6));
    }

    #[test]
    fn norm_identity_in_sqrt2() {
        let f = qext(2);
        let one = BigRational::one();
        let x = FieldScalar::in_extension(one.clone(), one.clone(), &f);
        let y = FieldScalar::in_extension(one.clone(), -one, &f);
        assert_eq!(x.try_mul(&y).unwrap(), FieldScalar::from_int(-1, &f));
    }

    #[test]
    fn inverse_in_sqrt3() {
        // 1 / (2 + sqrt(3)) = 2 - sqrt(3), since the norm is 4 - 3 = 1.
        let f = qext(3);
        let x = FieldScalar::in_extension(
            BigRational::from_integer(2.into()),
            BigRational::one(),
            &f,
        );
        let expected = FieldScalar::in_extension(
            BigRational::from_integer(2.into()),
            -BigRational::one(),
            &f,
        );
        assert_eq!(x.inverse().unwrap(), expected);
        assert_eq!(
            FieldScalar::one(&f).try_div(&x).unwrap(),
            expected
        );
    }

    #[test]
    fn conjugation() {
        assert_eq!(FieldScalar::int(3).conjugate(), FieldScalar::int(3));
        let f = qext(5);
        let x = FieldScalar::in_extension(
            BigRational::one(),
            BigRational::from_integer(2.into()),
            &f,
        );
        let c = x.conjugate();
        assert_eq!(c.radical_part(), &-BigRational::from_integer(BigInt::from(2)));
        assert_eq!(c.conjugate(), x);
    }

    #[test]
    fn squares_in_q() {
        assert!(FieldScalar::rat(9, 4).is_square().unwrap());
        assert!(!FieldScalar::int(-1).is_square().unwrap());
        // 18/2 reduces to 9.
        assert!(FieldScalar::rat(18, 2).is_square().unwrap());
        assert!(!FieldScalar::int(2).is_square().unwrap());
        let f = qext(2);
        assert_eq!(
            FieldScalar::one(&f).is_square(),
            Err(FieldError::SquareTestUnsupported)
        );
    }

    #[test]
    fn radicand_must_not_be_square() {
        assert!(FieldDescriptor::quad_ext(BigRational::from_integer(4.into())).is_err());
        assert!(FieldDescriptor::quad_ext(BigRational::zero()).is_err());
        assert!(FieldDescriptor::quad_ext(BigRational::from_integer((-1).into())).is_ok());
    }

    #[test]
    fn mismatched_fields_rejected() {
        let x = FieldScalar::int(1);
        let y = FieldScalar::one(&qext(2));
        assert_eq!(x.try_add(&y), Err(FieldError::DescriptorMismatch));
    }

    #[test]
    fn division_by_zero() {
        let x = FieldScalar::int(1);
        assert_eq!(x.try_div(&FieldScalar::int(0)), Err(FieldError::DivisionByZero));
        let f = qext(7);
        assert_eq!(FieldScalar::zero(&f).inverse(), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn parse_and_display_round_trip() {
        for text in ["5", "-3/4", "1/2+1/3*sqrt(5)", "2-sqrt(2)", "sqrt(3)", "-sqrt(3)"] {
            let x = FieldScalar::parse(text).unwrap();
            let y = FieldScalar::parse(&x.to_string()).unwrap();
            assert_eq!(x, y, "round trip failed for `{text}`");
        }
        assert_eq!(FieldScalar::parse("1/2+1/3*sqrt(5)").unwrap().to_string(), "1/2+1/3*sqrt(5)");
        assert!(FieldScalar::parse("sqrt(4)").is_err());
        assert!(FieldScalar::parse("1+sqrt(2)+sqrt(3)").is_err());
    }
}
