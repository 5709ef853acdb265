//! A workspace for building certificate chains on iterated tensor products.
//!
//! The workspace tracks an ordered list of tensor factors together with the
//! current whole algebra (their fold-left tensor product, which in the flat
//! index convention is independent of the association). Sub-certificates
//! acting on a contiguous factor range are lifted by Kronecker products with
//! identities, re-verified on the whole algebra, and appended to the chain.

use super::{
    compose_full, permute_clifford_certificate, realize_quaternion, CertChain, RealizationMode,
    StructureError,
};
use crate::algebra::{
    basis_vec, tensor, verify_certificate, InvolutiveAlgebra, IsoCertificate, LinearMapTable,
};
use crate::qspace::{OrthSymmetry, QuadForm};
use std::sync::Arc;

#[derive(Debug, Clone)]
pub enum FactorMeta {
    /// A standard quaternion model `(a, b)` with one of the stock involutions.
    StdQuaternion,
    /// A Clifford model `C(form, J^sym)`.
    Clifford { form: QuadForm, sym: OrthSymmetry },
    /// An even Clifford model `C0(form, J~^sym)`.
    EvenClifford { form: QuadForm, sym: OrthSymmetry },
    /// Anything else.
    Plain,
}

#[derive(Debug, Clone)]
pub struct Factor {
    pub alg: Arc<InvolutiveAlgebra>,
    pub meta: FactorMeta,
}

impl Factor {
    pub fn clifford(alg: Arc<InvolutiveAlgebra>, form: QuadForm, sym: OrthSymmetry) -> Self {
        Factor {
            alg,
            meta: FactorMeta::Clifford { form, sym },
        }
    }
}

#[derive(Debug, Clone)]
pub struct TensorWorkspace {
    factors: Vec<Factor>,
    current: Arc<InvolutiveAlgebra>,
    chain: CertChain,
}

fn fold_factors(factors: &[Factor]) -> Result<Arc<InvolutiveAlgebra>, StructureError> {
    assert!(!factors.is_empty(), "workspace needs at least one factor");
    let mut acc = factors[0].alg.clone();
    for f in &factors[1..] {
        acc = Arc::new(tensor(&acc, &f.alg)?);
    }
    Ok(acc)
}

impl TensorWorkspace {
    pub fn new(factors: Vec<Factor>) -> Result<Self, StructureError> {
        let current = fold_factors(&factors)?;
        Ok(TensorWorkspace {
            factors,
            current,
            chain: CertChain::new(),
        })
    }

    pub fn current(&self) -> &Arc<InvolutiveAlgebra> {
        &self.current
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn into_chain(self) -> CertChain {
        self.chain
    }

    pub fn chain(&self) -> &CertChain {
        &self.chain
    }

    pub fn clifford_meta(&self, i: usize) -> (&QuadForm, &OrthSymmetry) {
        match &self.factors[i].meta {
            FactorMeta::Clifford { form, sym } => (form, sym),
            other => panic!("factor {i} is not a Clifford block: {other:?}"),
        }
    }

    /// Lift a certificate acting on factors `lo..hi` to the whole algebra,
    /// verify it there, splice in the replacement factors, and record it.
    pub fn apply_to_range(
        &mut self,
        lo: usize,
        hi: usize,
        cert: IsoCertificate,
        replacement: Vec<Factor>,
        description: impl Into<String>,
    ) -> Result<(), StructureError> {
        assert!(lo < hi && hi <= self.factors.len());
        let pre_dim: usize = self.factors[..lo].iter().map(|f| f.alg.dim()).product();
        let suf_dim: usize = self.factors[hi..].iter().map(|f| f.alg.dim()).product();
        let field = self.current.field();
        let mut lifted = cert.map.clone();
        if suf_dim > 1 {
            lifted = lifted.kron(&LinearMapTable::identity(suf_dim, field));
        }
        if pre_dim > 1 {
            lifted = LinearMapTable::identity(pre_dim, field).kron(&lifted);
        }
        let mut new_factors = self.factors[..lo].to_vec();
        new_factors.extend(replacement);
        new_factors.extend_from_slice(&self.factors[hi..]);
        let new_current = fold_factors(&new_factors)?;
        let whole = verify_certificate(self.current.clone(), new_current.clone(), lifted);
        if !whole.verified() {
            return Err(StructureError::CertificateFailed(format!(
                "lifted step `{}`",
                description.into()
            )));
        }
        self.chain.push(description, whole)?;
        self.factors = new_factors;
        self.current = new_current;
        Ok(())
    }

    /// Reorder the tensor factors: new factor `i` is old factor `perm[i]`.
    pub fn permute_factors(
        &mut self,
        perm: &[usize],
        description: impl Into<String>,
    ) -> Result<(), StructureError> {
        assert_eq!(perm.len(), self.factors.len());
        if perm.iter().enumerate().all(|(i, &p)| i == p) {
            return Ok(());
        }
        let old_dims: Vec<usize> = self.factors.iter().map(|f| f.alg.dim()).collect();
        let new_factors: Vec<Factor> = perm.iter().map(|&p| self.factors[p].clone()).collect();
        let new_dims: Vec<usize> = new_factors.iter().map(|f| f.alg.dim()).collect();
        let total: usize = old_dims.iter().product();
        let field = self.current.field();
        let mut cols = Vec::with_capacity(total);
        for p in 0..total {
            // digits of p in the old mixed radix, most significant first
            let mut digits = vec![0usize; old_dims.len()];
            let mut rest = p;
            for (k, &d) in old_dims.iter().enumerate().rev() {
                digits[k] = rest % d;
                rest /= d;
            }
            let mut idx = 0usize;
            for (i, &d) in new_dims.iter().enumerate() {
                idx = idx * d + digits[perm[i]];
            }
            cols.push(basis_vec(idx, total, field));
        }
        let map = LinearMapTable::from_columns(total, cols);
        let new_current = fold_factors(&new_factors)?;
        let cert = verify_certificate(self.current.clone(), new_current.clone(), map);
        if !cert.verified() {
            return Err(StructureError::CertificateFailed(
                "tensor factor permutation".to_string(),
            ));
        }
        self.chain.push(description, cert)?;
        self.factors = new_factors;
        self.current = new_current;
        Ok(())
    }

    /// Replace a standard quaternion factor by its Clifford realization.
    pub fn realize_std(
        &mut self,
        i: usize,
        a: &crate::field::FieldScalar,
        b: &crate::field::FieldScalar,
        mode: RealizationMode,
    ) -> Result<(), StructureError> {
        let realization = realize_quaternion(a, b, mode)?;
        let target = realization.cert.target.clone();
        let desc = format!(
            "realize factor {} as {}",
            i + 1,
            target.label()
        );
        self.apply_to_range(
            i,
            i + 1,
            realization.cert,
            vec![Factor::clifford(target, realization.form, realization.symmetry)],
            desc,
        )
    }

    /// Combine adjacent Clifford factors `i` and `i+1` via the composition
    /// isomorphism (the first factor must have even dimension).
    pub fn merge_pair(&mut self, i: usize) -> Result<(), StructureError> {
        let (q0, s0) = {
            let (f, s) = self.clifford_meta(i);
            (f.clone(), s.clone())
        };
        let (q, s) = {
            let (f, s) = self.clifford_meta(i + 1);
            (f.clone(), s.clone())
        };
        let outcome = compose_full(&q0, &s0, &q, &s)?;
        let target = outcome.cert.target.clone();
        let desc = format!(
            "combine factors {} and {} into {}",
            i + 1,
            i + 2,
            target.label()
        );
        self.apply_to_range(
            i,
            i + 2,
            outcome.cert,
            vec![Factor::clifford(
                target,
                outcome.combined_form,
                outcome.combined_symmetry,
            )],
            desc,
        )
    }

    /// Split the Clifford factor `i` at coordinate `first_len` via the
    /// decomposition isomorphism (`first_len` must be even).
    pub fn split_factor(&mut self, i: usize, first_len: usize) -> Result<(), StructureError> {
        let (form, sym) = {
            let (f, s) = self.clifford_meta(i);
            (f.clone(), s.clone())
        };
        let field = form.field().clone();
        let q0 = QuadForm::new(field.clone(), form.coeffs()[..first_len].to_vec())?;
        let s0 = OrthSymmetry::new(sym.signs()[..first_len].to_vec());
        let q = QuadForm::new(field, form.coeffs()[first_len..].to_vec())?;
        let s = OrthSymmetry::new(sym.signs()[first_len..].to_vec());
        let outcome = super::decompose_full(&q0, &s0, &q, &s)?;
        let first = Arc::new(crate::algebra::from_clifford(&q0, &s0)?);
        let second = Arc::new(crate::algebra::from_clifford(
            &outcome.second_form,
            &outcome.second_symmetry,
        )?);
        let desc = format!(
            "split factor {} into {} and {}",
            i + 1,
            first.label(),
            second.label()
        );
        self.apply_to_range(
            i,
            i + 1,
            outcome.cert,
            vec![
                Factor::clifford(first, q0, s0),
                Factor::clifford(second, outcome.second_form, outcome.second_symmetry),
            ],
            desc,
        )
    }

    /// Reorder the coordinates of the Clifford factor `i`.
    pub fn permute_within(&mut self, i: usize, perm: &[usize]) -> Result<(), StructureError> {
        let (form, sym) = {
            let (f, s) = self.clifford_meta(i);
            (f.clone(), s.clone())
        };
        let (new_form, new_sym, cert) = permute_clifford_certificate(&form, &sym, perm)?;
        let target = cert.target.clone();
        let desc = format!("reorder coordinates of factor {}", i + 1);
        self.apply_to_range(
            i,
            i + 1,
            cert,
            vec![Factor::clifford(target, new_form, new_sym)],
            desc,
        )
    }
}
