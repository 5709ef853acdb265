//! Involutions of the second kind: quaternion algebras over a quadratic
//! extension with unitary involutions, realized as Clifford algebras of
//! forms over the fixed field, and the general unitary tensor synthesis.
//!
//! Everything is carried out over the fixed field: the extension
//! `K = Q(sqrt(c))` enters as the two-dimensional algebra `C(<c>)` with its
//! conjugation involution `J^{-}`, and the quadratic extension reappears as
//! the two-dimensional center of every stage, conjugated by the involution.

use super::machine::{Factor, FactorMeta, TensorWorkspace};
use super::synthesize::{fold_alternating, Flavor};
use super::{
    reflection_identity_swap, even_reduce, scale_square_certificate, CertChain, RealizationMode,
    StructureError,
};
use crate::algebra::{
    from_clifford, from_even_clifford, quaternion, InvolutionClass, InvolutionKind,
    InvolutiveAlgebra, QuaternionInvolution,
};
use crate::field::FieldScalar;
use crate::qspace::{FormError, OrthSymmetry, QuadForm};
use std::sync::Arc;

/// Classification of one chain stage against the expected extension.
#[derive(Debug, Clone)]
pub struct StageCheck {
    pub description: String,
    pub class: Option<InvolutionClass>,
    /// second kind with a conjugated 2-dimensional center
    pub unitary: bool,
    /// the center is `Q(sqrt(c))` up to squares
    pub center_matches: bool,
}

fn classify_stage(
    description: &str,
    alg: &Arc<InvolutiveAlgebra>,
    c: &FieldScalar,
) -> StageCheck {
    let class = alg.classify().ok();
    let unitary = class
        .map(|cl| cl.kind == InvolutionKind::Second)
        .unwrap_or(false)
        && !alg.center_fixed()
        && alg.center_dim() == 2;
    let center_matches = alg
        .center_quadratic_class()
        .and_then(|lam| lam.try_mul(c).ok())
        .and_then(|prod| prod.is_square().ok())
        .unwrap_or(false);
    StageCheck {
        description: description.to_string(),
        class,
        unitary,
        center_matches,
    }
}

fn stage_checks(chain: &CertChain, c: &FieldScalar) -> Vec<StageCheck> {
    chain
        .steps()
        .iter()
        .map(|s| classify_stage(&s.description, &s.cert.target, c))
        .collect()
}

/// The extension `K = Q(sqrt(c))` with its conjugation, as the Clifford
/// algebra of the 1-dimensional form `<c>` with the `-id` symmetry.
fn extension_factor(c: &FieldScalar) -> Result<Factor, StructureError> {
    if c.is_square().unwrap_or(false) {
        return Err(StructureError::RadicandIsSquare);
    }
    let form = QuadForm::new(c.field().clone(), vec![c.clone()])?;
    let sym = OrthSymmetry::neg_identity(1);
    let alg = Arc::new(from_clifford(&form, &sym)?);
    Ok(Factor::clifford(alg, form, sym))
}

/// Rewrite the pair (symplectic Clifford block at `i`, extension block at
/// `i+1`) into (orthogonal `J^{id}` block, extension block): the canonical
/// involution twisted by the conjugation trades for an orthogonal one.
/// Returns the concrete parameters `(d, e)` of the orthogonal block.
fn albert_rewrite_pair(
    ws: &mut TensorWorkspace,
    i: usize,
) -> Result<(FieldScalar, FieldScalar), StructureError> {
    let (p, psym) = {
        let (f, s) = ws.clifford_meta(i);
        (f.clone(), s.clone())
    };
    assert_eq!(p.dim(), 2);
    assert_eq!(psym.minus_count(), 2, "expected a symplectic block");
    let (kform, _) = {
        let (f, s) = ws.clifford_meta(i + 1);
        (f.clone(), s.clone())
    };
    assert_eq!(kform.dim(), 1);
    let x = p.coeff(0).clone();
    let y = p.coeff(1).clone();
    let c = kform.coeff(0).clone();

    // C(<x,y,-xyc>, J^{--+})
    ws.merge_pair(i)?;
    // bring the first coordinate to the back: <y, -xyc, x>, J^{-+-}
    ws.permute_within(i, &[1, 2, 0])?;
    // split off the reflection block: C(<y,-xyc>, J^{-+}) (x) C(<x^2 y^2 c>, J^-)
    ws.split_factor(i, 2)?;
    // rescale the second factor back to <c>
    let kform_sym = OrthSymmetry::neg_identity(1);
    let kform_c = QuadForm::new(c.field().clone(), vec![c.clone()])?;
    let lambda = x.try_mul(&y).map_err(FormError::Field)?;
    let rescale = scale_square_certificate(&kform_c, &kform_sym, &lambda)?;
    let target = rescale.target.clone();
    ws.apply_to_range(
        i + 1,
        i + 2,
        rescale,
        vec![Factor::clifford(target, kform_c, kform_sym)],
        "rescale the extension factor back to <c>",
    )?;
    // swap the reflection block to the identity symmetry
    let minus_xyc = lambda.try_mul(&c).map_err(FormError::Field)?.neg();
    let swap = reflection_identity_swap(&y, &minus_xyc)?;
    let d = swap.d.clone();
    let e = swap.e.clone();
    let target = swap.cert.target.clone();
    let form = swap.target_form.clone();
    ws.apply_to_range(
        i,
        i + 1,
        swap.cert,
        vec![Factor::clifford(target, form, OrthSymmetry::identity(2))],
        "trade the reflection model for the identity-symmetry model",
    )?;
    Ok((d, e))
}

#[derive(Debug)]
pub struct SecondKindOutcome {
    /// The starting model `(Q0 (x) K, gamma (x) conj)` over the fixed field.
    pub start: Arc<InvolutiveAlgebra>,
    /// Chain from the start down to `C(<-dec, d, e>, J^{+++})`.
    pub chain: CertChain,
    pub d: FieldScalar,
    pub e: FieldScalar,
    /// The 3-dimensional form of the final full-Clifford model.
    pub realized_form: QuadForm,
    pub realized_symmetry: OrthSymmetry,
    /// The intermediate orthogonal-factor model
    /// `(C(<y,-xyc>), J^{-+}) (x) (C(<c>), J^-)`.
    pub orthogonal_factor_model: Arc<InvolutiveAlgebra>,
    /// Kind/type and center checks for every stage of the chain.
    pub stages: Vec<StageCheck>,
}

/// Realize `(Q0 (x) K, gamma (x) conj)` for `Q0 = (a, b)` over `Q` and
/// `K = Q(sqrt(c))` as the Clifford algebra of a 3-dimensional form over `Q`
/// with the reversion involution, through a chain with explicit
/// intermediate witnesses.
pub fn second_kind_realize(
    a: &FieldScalar,
    b: &FieldScalar,
    c: &FieldScalar,
) -> Result<SecondKindOutcome, StructureError> {
    let q0 = Arc::new(quaternion(a, b, QuaternionInvolution::Canonical)?);
    let kfactor = extension_factor(c)?;
    let mut ws = TensorWorkspace::new(vec![
        Factor {
            alg: q0,
            meta: FactorMeta::StdQuaternion,
        },
        kfactor,
    ])?;
    let start = ws.current().clone();
    ws.realize_std(0, a, b, RealizationMode::Symplectic)?;
    let (d, e) = albert_rewrite_pair(&mut ws, 0)?;
    // The stage before the reflection-identity swap is the model with an orthogonal
    // reflection factor; the one after it has the identity-symmetry factor.
    let orthogonal_factor_model = ws
        .chain()
        .steps()
        .iter()
        .rev()
        .nth(1)
        .map(|s| s.cert.target.clone())
        .expect("albert rewrite pushes at least two steps");
    // combine: C(<d,e>, J^{++}) (x) C(<c>, J^-) = C(<d,e,-dec>, J^{+++})
    ws.merge_pair(0)?;
    // reorder to <-dec, d, e>
    ws.permute_within(0, &[2, 0, 1])?;
    let (realized_form, realized_symmetry) = {
        let (f, s) = ws.clifford_meta(0);
        (f.clone(), s.clone())
    };
    let chain = ws.into_chain();
    let stages = stage_checks(&chain, c);
    Ok(SecondKindOutcome {
        start,
        chain,
        d,
        e,
        realized_form,
        realized_symmetry,
        orthogonal_factor_model,
        stages,
    })
}

#[derive(Debug)]
pub struct UnitaryOutcome {
    /// The starting model `Q_1 (x) ... (x) Q_n (x) K` with canonical
    /// involutions on the quaternion factors and conjugation on `K`.
    pub start: Arc<InvolutiveAlgebra>,
    /// The odd realization: a form of dimension `2n+1` over the fixed field.
    pub odd_form: QuadForm,
    pub odd_symmetry: OrthSymmetry,
    pub odd_chain: CertChain,
    /// The discriminant of the odd form is nontrivial and matches `c`.
    pub disc_nontrivial: bool,
    pub disc_matches_extension: bool,
    /// Even model `C0` with the restricted reversion (`n` even), dim `2n+2`.
    pub even_model: Option<(QuadForm, OrthSymmetry, CertChain)>,
    /// Even model with an orthogonal-symmetry involution (`n` odd), dim `2n+2`.
    pub even_reflection_model: Option<(QuadForm, OrthSymmetry, CertChain)>,
    pub stages: Vec<StageCheck>,
}

/// Realize a tensor product of quaternion algebras with canonical
/// involutions, tensored with `(K, conj)`, as Clifford data over the fixed
/// field: an odd-dimensional full model with nontrivial discriminant, plus
/// an even model whose shape depends on the parity of the factor count.
pub fn unitary_synthesize(
    factors: &[(FieldScalar, FieldScalar)],
    c: &FieldScalar,
) -> Result<UnitaryOutcome, StructureError> {
    if factors.is_empty() {
        return Err(StructureError::EmptyFactors);
    }
    let n = factors.len();
    let mut ws_factors: Vec<Factor> = Vec::with_capacity(n + 1);
    for (a, b) in factors {
        ws_factors.push(Factor {
            alg: Arc::new(quaternion(a, b, QuaternionInvolution::Canonical)?),
            meta: FactorMeta::StdQuaternion,
        });
    }
    ws_factors.push(extension_factor(c)?);
    let mut ws = TensorWorkspace::new(ws_factors)?;
    let start = ws.current().clone();

    // The -id realization of the quaternion part needs a symplectic flavor
    // multiset when n = 1, 2 mod 4 and an orthogonal one when n = 0, 3; one
    // factor is traded through the extension when the parities disagree.
    let needs_albert = matches!(n % 4, 2 | 3);
    let mut order: Vec<usize> = (1..n).collect();
    if needs_albert {
        order.push(0);
        order.push(n);
        ws.permute_factors(&order, "move the first factor next to the extension")?;
        let (a0, b0) = &factors[0];
        ws.realize_std(n - 1, a0, b0, RealizationMode::Symplectic)?;
        albert_rewrite_pair(&mut ws, n - 1)?;
        // realize the untouched factors
        for (pos, idx) in (0..n - 1).zip(1..n) {
            let (a, b) = &factors[idx];
            ws.realize_std(pos, a, b, RealizationMode::Symplectic)?;
        }
    } else {
        for (pos, (a, b)) in factors.iter().enumerate() {
            ws.realize_std(pos, a, b, RealizationMode::Symplectic)?;
        }
    }
    // Fold the 2n-dimensional quaternion part down to J^{-id}: an odd
    // number of blocks ends on the base state (symplectic base), an even
    // number flips it (orthogonal base).
    let base = if n % 2 == 1 {
        Flavor::Symplectic
    } else {
        Flavor::Orthogonal
    };
    fold_alternating(&mut ws, 0, n, base)?;
    {
        let (_, sym) = ws.clifford_meta(0);
        assert_eq!(sym.minus_count(), sym.dim(), "expected a -id realization");
    }
    // Branch point: [C(q_{2n}, J^{-id}), C(<c>, J^{-})].
    let branch = ws.clone();

    // Absorb the extension: J^{-id + eps} on a (2n+1)-dimensional form.
    ws.merge_pair(0)?;
    let (odd_form, odd_symmetry, odd_chain) = if n % 2 == 1 {
        // the trailing block carries (-, +): trade it for (+, +) and reattach
        let (f0, s0) = {
            let (f, s) = ws.clifford_meta(0);
            (f.clone(), s.clone())
        };
        let m = f0.dim();
        debug_assert_eq!(s0.sign(m - 1), crate::qspace::Sign::Plus);
        let mut perm: Vec<usize> = vec![m - 2, m - 1];
        perm.extend(0..m - 2);
        ws.permute_within(0, &perm)?;
        ws.split_factor(0, 2)?;
        // swap the (-,+) block to (+,+)
        let (bform, bsym) = {
            let (f, s) = ws.clifford_meta(0);
            (f.clone(), s.clone())
        };
        assert!(bsym.is_reflection());
        let swap = reflection_identity_swap(bform.coeff(0), bform.coeff(1))?;
        let target = swap.cert.target.clone();
        let form = swap.target_form.clone();
        ws.apply_to_range(
            0,
            1,
            swap.cert,
            vec![Factor::clifford(target, form, OrthSymmetry::identity(2))],
            "trade the reflection block for the identity-symmetry model",
        )?;
        ws.merge_pair(0)?;
        let (f, s) = {
            let (f, s) = ws.clifford_meta(0);
            (f.clone(), s.clone())
        };
        assert_eq!(s.minus_count(), 0, "odd factor count lands on J^{{id}}");
        (f, s, ws.clone())
    } else {
        // even factor count: the absorbed model already carries J^{-id},
        // which is the unitary-compatible symmetry in this parity.
        let (f, s) = {
            let (f, s) = ws.clifford_meta(0);
            (f.clone(), s.clone())
        };
        assert_eq!(s.minus_count(), s.dim());
        (f, s, ws.clone())
    };

    let disc = odd_form.signed_disc();
    let disc_nontrivial = !disc.is_square().unwrap_or(true);
    let disc_matches_extension = disc
        .try_mul(c)
        .ok()
        .and_then(|p| p.is_square().ok())
        .unwrap_or(false);

    // Even factor count: bridge the -id block to an even model and absorb
    // the extension with the even composition isomorphism.
    let mut even_model = None;
    let mut even_reflection_model = None;
    if n % 2 == 0 {
        let mut wse = branch;
        let (q2n, _) = {
            let (f, s) = wse.clifford_meta(0);
            (f.clone(), s.clone())
        };
        let field = q2n.field().clone();
        let minus_one = FieldScalar::one(&field).neg();
        let bridge_form = QuadForm::new(field.clone(), vec![minus_one])?.orth_sum(&q2n)?;
        let bridge_sym = OrthSymmetry::identity(bridge_form.dim());
        let reduce = even_reduce(&bridge_form, &bridge_sym, 0)?;
        let even_alg = reduce.forward.target.clone();
        wse.apply_to_range(
            0,
            1,
            reduce.forward,
            vec![Factor {
                alg: even_alg,
                meta: FactorMeta::EvenClifford {
                    form: bridge_form.clone(),
                    sym: bridge_sym.clone(),
                },
            }],
            "bridge the -id model into the even Clifford algebra of <-1> _|_ q",
        )?;
        let kform = QuadForm::new(field, vec![c.clone()])?;
        let compose = super::compose_even(
            &bridge_form,
            &bridge_sym,
            &kform,
            &OrthSymmetry::neg_identity(1),
        )?;
        let even_alg = Arc::new(from_even_clifford(
            &compose.combined_form,
            &compose.combined_symmetry,
        )?);
        wse.apply_to_range(
            0,
            2,
            compose.cert,
            vec![Factor {
                alg: even_alg,
                meta: FactorMeta::EvenClifford {
                    form: compose.combined_form.clone(),
                    sym: compose.combined_symmetry.clone(),
                },
            }],
            "absorb the extension into the even model",
        )?;
        even_model = Some((
            compose.combined_form,
            compose.combined_symmetry,
            wse.into_chain(),
        ));
    } else {
        // Odd factor count: the J^{id} model bridges to an even model with
        // a reflection via the even reduction at an adjoined <-1>.
        let mut wsv = odd_chain.clone();
        let field = odd_form.field().clone();
        let minus_one = FieldScalar::one(&field).neg();
        let vform = QuadForm::new(field, vec![minus_one])?.orth_sum(&odd_form)?;
        let vsym = OrthSymmetry::reflection(vform.dim(), 0);
        let reduce = even_reduce(&vform, &vsym, 0)?;
        let even_alg = reduce.forward.target.clone();
        wsv.apply_to_range(
            0,
            1,
            reduce.forward,
            vec![Factor {
                alg: even_alg,
                meta: FactorMeta::EvenClifford {
                    form: vform.clone(),
                    sym: vsym.clone(),
                },
            }],
            "bridge the J^id model into an even model with a reflection",
        )?;
        even_reflection_model = Some((vform, vsym, wsv.into_chain()));
    }

    let odd_chain = odd_chain.into_chain();
    let stages = stage_checks(&odd_chain, c);
    Ok(UnitaryOutcome {
        start,
        odd_form,
        odd_symmetry,
        odd_chain,
        disc_nontrivial,
        disc_matches_extension,
        even_model,
        even_reflection_model,
        stages,
    })
}
