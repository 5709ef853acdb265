//! Blade arithmetic in the Clifford algebra of a diagonal quadratic form.
//!
//! Basis blades are bit masks: bit `i` set means the generator `e_{i+1}`
//! occurs, and a blade is the ordered product with indices increasing. The
//! product of two blades is a single scaled blade: orthogonal generators
//! anticommute and a repeated generator contracts to its diagonal value.

use crate::field::FieldScalar;
use crate::qspace::{OrthSymmetry, QuadForm, Sign};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CliffordError {
    #[error("blade mask {mask:#x} does not fit dimension {dim}")]
    MaskOutOfRange { mask: u32, dim: usize },
    #[error("elements live over different ambient forms")]
    AmbientMismatch,
    #[error("symmetry has length {got}, ambient dimension is {expected}")]
    SymmetryMismatch { got: usize, expected: usize },
}

pub fn grade(mask: u32) -> u32 {
    mask.count_ones()
}

/// Sign of the grade involution on a blade of grade `g`: `(-1)^g`.
pub fn grade_involution_sign(g: u32) -> Sign {
    Sign::from_parity(g as usize)
}

/// Sign of reversion on a blade of grade `g`: `(-1)^{g(g-1)/2}`.
pub fn reversion_sign(g: u32) -> Sign {
    Sign::from_parity((g as usize) * (g as usize).saturating_sub(1) / 2)
}

/// `e_S * e_T = sign * coeff * e_{S xor T}`.
///
/// The sign counts the transpositions needed to interleave the two ordered
/// products; the coefficient is the product of the diagonal entries of the
/// repeated generators.
pub fn blade_mul(s: u32, t: u32, q: &QuadForm) -> (Sign, FieldScalar, u32) {
    let n = q.dim() as u32;
    debug_assert!(s < (1 << n) && t < (1 << n), "blade masks must fit the form");
    let mut swaps = 0u32;
    for j in 0..n {
        if t & (1 << j) != 0 {
            // generators of S strictly above j must move past this one
            swaps += (s >> (j + 1)).count_ones();
        }
    }
    let mut coeff = FieldScalar::one(q.field());
    let mut common = s & t;
    while common != 0 {
        let i = common.trailing_zeros();
        coeff = &coeff * q.coeff(i as usize);
        common &= common - 1;
    }
    (Sign::from_parity(swaps as usize), coeff, s ^ t)
}

/// A sparse element of `C(V, q)`; zero coefficients are never stored.
#[derive(Debug, Clone)]
pub struct CliffordElement {
    form: Arc<QuadForm>,
    terms: BTreeMap<u32, FieldScalar>,
}

impl PartialEq for CliffordElement {
    fn eq(&self, other: &Self) -> bool {
        self.same_ambient(other) && self.terms == other.terms
    }
}

impl Eq for CliffordElement {}

impl CliffordElement {
    pub fn zero(form: &Arc<QuadForm>) -> Self {
        CliffordElement {
            form: form.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(form: &Arc<QuadForm>) -> Self {
        Self::blade(form, 0, FieldScalar::one(form.field()))
    }

    pub fn scalar(form: &Arc<QuadForm>, c: FieldScalar) -> Self {
        Self::blade(form, 0, c)
    }

    /// The generator `e_{i+1}`.
    pub fn generator(form: &Arc<QuadForm>, i: usize) -> Self {
        assert!(i < form.dim());
        Self::blade(form, 1 << i, FieldScalar::one(form.field()))
    }

    pub fn blade(form: &Arc<QuadForm>, mask: u32, coeff: FieldScalar) -> Self {
        assert!(
            (mask as u64) < (1u64 << form.dim()),
            "blade mask out of range"
        );
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(mask, coeff);
        }
        CliffordElement {
            form: form.clone(),
            terms,
        }
    }

    /// The image of a coordinate vector of `V` under the canonical injection.
    pub fn vector(form: &Arc<QuadForm>, coords: &[FieldScalar]) -> Self {
        assert_eq!(coords.len(), form.dim());
        let mut out = Self::zero(form);
        for (i, c) in coords.iter().enumerate() {
            out.add_term(1 << i, c.clone());
        }
        out
    }

    pub fn form(&self) -> &Arc<QuadForm> {
        &self.form
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &FieldScalar)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn coeff(&self, mask: u32) -> FieldScalar {
        self.terms
            .get(&mask)
            .cloned()
            .unwrap_or_else(|| FieldScalar::zero(self.form.field()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn same_ambient(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.form, &other.form) || self.form == other.form
    }

    fn add_term(&mut self, mask: u32, coeff: FieldScalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(mask) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().try_add(&coeff).expect("same ambient field");
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self, CliffordError> {
        if !self.same_ambient(rhs) {
            return Err(CliffordError::AmbientMismatch);
        }
        let mut out = self.clone();
        for (mask, c) in &rhs.terms {
            out.add_term(*mask, c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self, CliffordError> {
        self.checked_add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        CliffordElement {
            form: self.form.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, c.neg()))
                .collect(),
        }
    }

    pub fn scaled(&self, c: &FieldScalar) -> Self {
        if c.is_zero() {
            return Self::zero(&self.form);
        }
        CliffordElement {
            form: self.form.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, x)| (*m, x.try_mul(c).expect("same ambient field")))
                .collect(),
        }
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self, CliffordError> {
        if !self.same_ambient(rhs) {
            return Err(CliffordError::AmbientMismatch);
        }
        let mut out = Self::zero(&self.form);
        for (&s, cs) in &self.terms {
            for (&t, ct) in &rhs.terms {
                let (sign, coeff, r) = blade_mul(s, t, &self.form);
                let c = sign.apply(&(&(cs * ct) * &coeff));
                out.add_term(r, c);
            }
        }
        Ok(out)
    }

    /// Grade involution: `e_S -> (-1)^{|S|} e_S`.
    pub fn grade_involution(&self) -> Self {
        self.map_blades(|mask| grade_involution_sign(grade(mask)))
    }

    /// Reversion: `e_S -> (-1)^{g(g-1)/2} e_S`.
    pub fn reversion(&self) -> Self {
        self.map_blades(|mask| reversion_sign(grade(mask)))
    }

    /// The involution induced by an orthogonal symmetry:
    /// `e_S -> (prod of signs over S) * (-1)^{g(g-1)/2} e_S`.
    pub fn induced_involution(&self, sigma: &OrthSymmetry) -> Result<Self, CliffordError> {
        if sigma.dim() != self.form.dim() {
            return Err(CliffordError::SymmetryMismatch {
                got: sigma.dim(),
                expected: self.form.dim(),
            });
        }
        Ok(self.map_blades(|mask| induced_involution_sign(mask, sigma)))
    }

    /// Even and odd parts under the grade involution.
    pub fn even_part(&self) -> Self {
        self.filter_blades(|mask| grade(mask) % 2 == 0)
    }

    pub fn odd_part(&self) -> Self {
        self.filter_blades(|mask| grade(mask) % 2 == 1)
    }

    fn map_blades(&self, sign_of: impl Fn(u32) -> Sign) -> Self {
        CliffordElement {
            form: self.form.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, sign_of(*m).apply(c)))
                .collect(),
        }
    }

    fn filter_blades(&self, keep: impl Fn(u32) -> bool) -> Self {
        CliffordElement {
            form: self.form.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(**m))
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    pub fn commutes_with(&self, rhs: &Self) -> bool {
        let xy = self.checked_mul(rhs).expect("same ambient");
        let yx = rhs.checked_mul(self).expect("same ambient");
        xy == yx
    }

    pub fn anticommutes_with(&self, rhs: &Self) -> bool {
        let xy = self.checked_mul(rhs).expect("same ambient");
        let yx = rhs.checked_mul(self).expect("same ambient");
        xy == yx.neg()
    }
}

/// Sign of `J_q^sigma` on a blade.
pub fn induced_involution_sign(mask: u32, sigma: &OrthSymmetry) -> Sign {
    let mut sign = reversion_sign(grade(mask));
    let mut m = mask;
    while m != 0 {
        let i = m.trailing_zeros() as usize;
        sign = sign.mul(sigma.sign(i));
        m &= m - 1;
    }
    sign
}

/// The adapted volume element `z`: the product of the fixed-space basis
/// vectors first, then the negated-space ones, expressed on the canonical
/// ascending blade.
pub fn z_element(sigma: &OrthSymmetry, form: &Arc<QuadForm>) -> CliffordElement {
    assert_eq!(sigma.dim(), form.dim());
    let n = form.dim();
    let plus: Vec<usize> = (0..n).filter(|&i| sigma.sign(i) == Sign::Plus).collect();
    let minus: Vec<usize> = (0..n).filter(|&i| sigma.sign(i) == Sign::Minus).collect();
    // Count inversions of (plus..., minus...) against the ascending order.
    let mut inversions = 0usize;
    for &p in &plus {
        for &m in &minus {
            if p > m {
                inversions += 1;
            }
        }
    }
    let full: u32 = if n == 0 { 0 } else { (1u32 << n) - 1 };
    let coeff = Sign::from_parity(inversions).as_scalar(form.field());
    CliffordElement::blade(form, full, coeff)
}

/// A basis of the center of `C(V, q)`, computed by the commutation
/// constraints against every generator. On blades those constraints are
/// diagonal, so the center is spanned by the blades commuting with all
/// generators: dimension 1 for even `n`, 2 for odd `n`.
pub fn center_basis(form: &Arc<QuadForm>) -> Vec<CliffordElement> {
    let n = form.dim();
    let dim = 1usize << n;
    let mut basis = Vec::new();
    'blades: for mask in 0..dim as u32 {
        for i in 0..n {
            let (s1, c1, r1) = blade_mul(mask, 1 << i, form);
            let (s2, c2, r2) = blade_mul(1 << i, mask, form);
            debug_assert_eq!(r1, r2);
            let diff = &s1.apply(&c1) - &s2.apply(&c2);
            if !diff.is_zero() {
                continue 'blades;
            }
        }
        basis.push(CliffordElement::blade(
            form,
            mask,
            FieldScalar::one(form.field()),
        ));
    }
    basis
}

/// Masks of the even-grade blades in ascending order: the basis of `C_0`.
pub fn even_basis_masks(n: usize) -> Vec<u32> {
    (0..(1u32 << n)).filter(|m| grade(*m) % 2 == 0).collect()
}

/// All blade masks in ascending order: the basis of the full algebra.
pub fn full_basis_masks(n: usize) -> Vec<u32> {
    (0..(1u32 << n)).collect()
}

pub fn blade_name(mask: u32) -> String {
    if mask == 0 {
        return "e0".to_string();
    }
    let mut parts = Vec::new();
    let mut m = mask;
    while m != 0 {
        let i = m.trailing_zeros();
        parts.push(format!("e{}", i + 1));
        m &= m - 1;
    }
    parts.join("^")
}

impl fmt::Display for CliffordElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&mask, coeff) in &self.terms {
            let (sign_str, mag) = match coeff.as_rational() {
                Some(r) if r < &num_rational::BigRational::from_integer(0.into()) => {
                    ("-", coeff.neg())
                }
                _ => ("+", coeff.clone()),
            };
            if first {
                if sign_str == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sign_str} ")?;
            }
            let coeff_str = if mag.as_rational().is_some() || mask == 0 {
                format!("{mag}")
            } else {
                format!("({mag})")
            };
            if mask == 0 {
                write!(f, "{coeff_str}")?;
            } else if mag.is_one() {
                write!(f, "{}", blade_name(mask))?;
            } else {
                write!(f, "{} {}", coeff_str, blade_name(mask))?;
            }
        }
        Ok(())
    }
}

/// Parse an element in the `-6 + 2 e1^e3` syntax used for output.
pub fn parse_element(text: &str, form: &Arc<QuadForm>) -> Result<CliffordElement, String> {
    let mut out = CliffordElement::zero(form);
    // Split into signed terms at top level (outside parentheses).
    let mut terms: Vec<(Sign, String)> = Vec::new();
    let mut current = String::new();
    let mut sign = Sign::Plus;
    let mut depth = 0usize;
    for ch in text.chars() {
        match ch {
            '(' => {
                depth += 1;
                current.push(ch);
            }
            ')' => {
                depth = depth.saturating_sub(1);
                current.push(ch);
            }
            '+' | '-' if depth == 0 => {
                if current.trim().is_empty() && ch == '-' {
                    sign = sign.flip();
                } else if current.trim().is_empty() {
                    // leading plus
                } else {
                    terms.push((sign, std::mem::take(&mut current)));
                    sign = if ch == '-' { Sign::Minus } else { Sign::Plus };
                }
            }
            _ => current.push(ch),
        }
    }
    if !current.trim().is_empty() {
        terms.push((sign, current));
    }
    if terms.is_empty() {
        return Err("empty element".to_string());
    }
    for (sign, term) in terms {
        let term = term.trim();
        // Split into an optional coefficient and an optional blade part.
        let (coeff_text, blade_text) = match term.find('e') {
            Some(pos) if is_blade_start(term, pos) => {
                (term[..pos].trim().trim_end_matches('*').trim(), term[pos..].trim())
            }
            _ => (term, ""),
        };
        let coeff = if coeff_text.is_empty() {
            FieldScalar::one(form.field())
        } else {
            let stripped = coeff_text
                .strip_prefix('(')
                .and_then(|s| s.strip_suffix(')'))
                .unwrap_or(coeff_text);
            FieldScalar::parse_in(stripped, form.field()).map_err(|e| e.to_string())?
        };
        let mask = if blade_text.is_empty() {
            0u32
        } else {
            parse_blade(blade_text, form.dim())?
        };
        out.add_term(mask, sign.apply(&coeff));
    }
    Ok(out)
}

fn is_blade_start(term: &str, pos: usize) -> bool {
    // `e` must begin a blade factor like e2 or e0, not appear inside sqrt(...)
    let before = &term[..pos];
    let open = before.matches('(').count();
    let close = before.matches(')').count();
    open == close && term[pos + 1..].starts_with(|c: char| c.is_ascii_digit())
}

fn parse_blade(text: &str, dim: usize) -> Result<u32, String> {
    let mut mask = 0u32;
    for part in text.split('^') {
        let part = part.trim();
        let idx: usize = part
            .strip_prefix('e')
            .ok_or_else(|| format!("bad blade factor `{part}`"))?
            .parse()
            .map_err(|_| format!("bad blade factor `{part}`"))?;
        if idx == 0 {
            continue; // e0 is the unit
        }
        if idx > dim {
            return Err(format!("generator e{idx} exceeds dimension {dim}"));
        }
        let bit = 1u32 << (idx - 1);
        if mask & bit != 0 {
            return Err(format!("repeated generator e{idx} in blade"));
        }
        mask |= bit;
    }
    Ok(mask)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldDescriptor;

    fn form(entries: &[i64]) -> Arc<QuadForm> {
        Arc::new(QuadForm::diagonal_ints(entries).unwrap())
    }

    #[test]
    fn generator_squares_to_diagonal() {
        let q = form(&[5, 3]);
        let e1 = CliffordElement::generator(&q, 0);
        assert_eq!(
            e1.checked_mul(&e1).unwrap(),
            CliffordElement::scalar(&q, FieldScalar::int(5))
        );
    }

    #[test]
    fn generators_anticommute() {
        let q = form(&[2, 3]);
        let (sign, coeff, mask) = blade_mul(0b10, 0b01, &q);
        assert_eq!(sign, Sign::Minus);
        assert!(coeff.is_one());
        assert_eq!(mask, 0b11);
    }

    #[test]
    fn volume_blade_squares_to_disc() {
        let q = form(&[2, 3]);
        let e12 = CliffordElement::blade(&q, 0b11, FieldScalar::int(1));
        assert_eq!(
            e12.checked_mul(&e12).unwrap(),
            CliffordElement::scalar(&q, FieldScalar::int(-6))
        );
    }

    #[test]
    fn sum_of_generators_squares_to_sum() {
        let q = form(&[2, 7]);
        let x = CliffordElement::vector(&q, &[FieldScalar::int(1), FieldScalar::int(1)]);
        assert_eq!(
            x.checked_mul(&x).unwrap(),
            CliffordElement::scalar(&q, FieldScalar::int(9))
        );
    }

    #[test]
    fn involution_signs() {
        let q = form(&[1, 1, 1]);
        let e1 = CliffordElement::generator(&q, 0);
        assert_eq!(e1.grade_involution(), e1.neg());
        assert_eq!(e1.reversion(), e1);
        let e12 = CliffordElement::blade(&q, 0b011, FieldScalar::int(1));
        assert_eq!(e12.grade_involution(), e12);
        assert_eq!(e12.reversion(), e12.neg());
        let e123 = CliffordElement::blade(&q, 0b111, FieldScalar::int(1));
        assert_eq!(e123.reversion(), e123.neg());
    }

    #[test]
    fn induced_involution_on_blades() {
        let q = form(&[1, 1]);
        let tau = OrthSymmetry::parse("-+", 2).unwrap();
        let e12 = CliffordElement::blade(&q, 0b11, FieldScalar::int(1));
        // product of signs is -1, reversion sign is -1: total +1
        assert_eq!(e12.induced_involution(&tau).unwrap(), e12);
        let neg = OrthSymmetry::neg_identity(2);
        let e1 = CliffordElement::generator(&q, 0);
        assert_eq!(e1.induced_involution(&neg).unwrap(), e1.neg());
        let one = CliffordElement::one(&q);
        assert_eq!(one.induced_involution(&neg).unwrap(), one);
    }

    #[test]
    fn z_element_basics() {
        let q = form(&[2, 3]);
        let sigma = OrthSymmetry::identity(2);
        let z = z_element(&sigma, &q);
        let z2 = z.checked_mul(&z).unwrap();
        assert_eq!(z2, CliffordElement::scalar(&q, FieldScalar::int(-6)));

        // n = 3, sigma = id: z commutes with every generator.
        let q3 = form(&[2, 3, 5]);
        let z3 = z_element(&OrthSymmetry::identity(3), &q3);
        for i in 0..3 {
            let e = CliffordElement::generator(&q3, i);
            assert!(z3.commutes_with(&e));
        }
        // n = 2: z anticommutes with the generators.
        let z2e = z_element(&OrthSymmetry::identity(2), &q);
        for i in 0..2 {
            let e = CliffordElement::generator(&q, i);
            assert!(z2e.anticommutes_with(&e));
        }
    }

    #[test]
    fn z_respects_adapted_ordering() {
        // sigma = (-, +): V+ basis is e2, V- basis is e1, so z = e2 e1 = -e1^e2.
        let q = form(&[1, 1]);
        let sigma = OrthSymmetry::parse("-+", 2).unwrap();
        let z = z_element(&sigma, &q);
        assert_eq!(z.coeff(0b11), FieldScalar::int(-1));
    }

    #[test]
    fn center_dimensions() {
        assert_eq!(center_basis(&form(&[1, 1])).len(), 1);
        let c3 = center_basis(&form(&[1, 1, 1]));
        assert_eq!(c3.len(), 2);
        assert_eq!(c3[0].coeff(0), FieldScalar::int(1));
        assert_eq!(c3[1].coeff(0b111), FieldScalar::int(1));
        let empty = Arc::new(QuadForm::empty(FieldDescriptor::Rationals));
        assert_eq!(center_basis(&empty).len(), 1);
    }

    #[test]
    fn display_and_parse() {
        let q = form(&[2, 3, 5]);
        let mut x = CliffordElement::scalar(&q, FieldScalar::int(-6));
        x = x
            .checked_add(&CliffordElement::blade(&q, 0b101, FieldScalar::int(2)))
            .unwrap();
        assert_eq!(x.to_string(), "-6 + 2 e1^e3");
        let parsed = parse_element("-6 + 2 e1^e3", &q).unwrap();
        assert_eq!(parsed, x);
        let y = parse_element("e0", &q).unwrap();
        assert_eq!(y, CliffordElement::one(&q));
        let z = parse_element("1/2 e1 - e2^e3", &q).unwrap();
        assert_eq!(z.coeff(0b001), FieldScalar::rat(1, 2));
        assert_eq!(z.coeff(0b110), FieldScalar::int(-1));
    }

    #[test]
    fn eq2_polarization() {
        // i(x)i(y) + i(y)i(x) = 2 b_q(x, y) for a few vectors.
        let q = form(&[2, -3, 5]);
        let x = CliffordElement::vector(
            &q,
            &[FieldScalar::int(1), FieldScalar::int(2), FieldScalar::int(0)],
        );
        let y = CliffordElement::vector(
            &q,
            &[FieldScalar::int(3), FieldScalar::int(-1), FieldScalar::int(1)],
        );
        let lhs = x
            .checked_mul(&y)
            .unwrap()
            .checked_add(&y.checked_mul(&x).unwrap())
            .unwrap();
        // b_q(x, y) = sum a_i x_i y_i = 2*3 + (-3)*(-2) + 0 = 12; 2 b = 24.
        assert_eq!(lhs, CliffordElement::scalar(&q, FieldScalar::int(24)));
    }
}
