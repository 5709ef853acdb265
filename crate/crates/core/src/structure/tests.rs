use super::*;
use crate::algebra::InvolutionKind;
use crate::field::FieldScalar;
use crate::qspace::Sign;

fn q(entries: &[i64]) -> QuadForm {
    QuadForm::diagonal_ints(entries).unwrap()
}

fn sym(text: &str) -> OrthSymmetry {
    OrthSymmetry::parse(text, text.len()).unwrap()
}

#[test]
fn decompose_full_basic() {
    // q0 = <1,1>, sigma0 = id (s = 0), q = <3>, sigma = id:
    // C(<1,1,3>) = C(<1,1>) (x) C(<-3>) with J^{id} (x) J^{-id}.
    let out = decompose_full(&q(&[1, 1]), &sym("++"), &q(&[3]), &sym("+")).unwrap();
    assert!(out.cert.verified());
    assert!(out.disc_sign_consistent);
    assert_eq!(out.second_form, q(&[-3]));
    assert_eq!(out.second_symmetry, OrthSymmetry::neg_identity(1));
    assert_eq!(out.cert.source.dim(), 8);
    assert_eq!(out.cert.target.dim(), 8);
}

#[test]
fn decompose_full_empty_second_form() {
    let empty = QuadForm::empty(crate::field::FieldDescriptor::Rationals);
    let out = decompose_full(&q(&[2, 3]), &sym("-+"), &empty, &OrthSymmetry::identity(0)).unwrap();
    assert!(out.cert.verified());
    assert_eq!(out.cert.source.dim(), 4);
    assert_eq!(out.cert.target.dim(), 4);
}

#[test]
fn decompose_full_rejects_odd_first_form() {
    let err = decompose_full(&q(&[1]), &sym("+"), &q(&[1]), &sym("+")).unwrap_err();
    assert!(matches!(err, StructureError::ExpectedEvenDimension(1)));
}

#[test]
fn decompose_full_all_sign_vectors_small() {
    for bits0 in 0..4u32 {
        for bits in 0..2u32 {
            let s0 = OrthSymmetry::new(
                (0..2)
                    .map(|i| if bits0 & (1 << i) != 0 { Sign::Minus } else { Sign::Plus })
                    .collect(),
            );
            let s1 = OrthSymmetry::new(vec![if bits & 1 != 0 { Sign::Minus } else { Sign::Plus }]);
            let out = decompose_full(&q(&[2, -3]), &s0, &q(&[5]), &s1).unwrap();
            assert!(out.cert.verified(), "failed for {s0} {s1}");
            assert!(out.disc_sign_consistent);
        }
    }
}

#[test]
fn compose_full_reflection_specialization() {
    // A reflection first symmetry keeps the appended symmetry unchanged
    // in dimension 2 mod 4.
    let out = compose_full(&q(&[2, 3]), &sym("-+"), &q(&[1, 5]), &sym("+-")).unwrap();
    assert!(out.cert.verified());
    // d(q0) = -6, so the combined form is <2,3> _|_ -6*<1,5>.
    assert_eq!(out.combined_form, q(&[2, 3, -6, -30]));
    // d(sigma0) = +1 for a 2-dim reflection: tau + sigma unchanged.
    assert_eq!(out.combined_symmetry, sym("-++-"));
    // source is the tensor, target the combined Clifford algebra
    assert_eq!(out.cert.source.dim(), 16);
    assert_eq!(out.cert.target.dim(), 16);
}

#[test]
fn compose_then_decompose_round_trip() {
    let out = compose_full(&q(&[1, 2]), &sym("--"), &q(&[3]), &sym("-")).unwrap();
    assert!(out.cert.verified());
    let back = out.cert.inverted().unwrap();
    assert!(back.verified());
    let round = out.cert.then(&back).unwrap();
    assert!(round.verified());
}

#[test]
fn decompose_even_c0c_id_instance() {
    // (C0(<-1> _|_ q), J~^{-id}) = (C(q), J^{-id})
    let out = decompose_even(&q(&[-1]), &sym("-"), &q(&[2, 3]), &sym("--")).unwrap();
    assert!(out.cert.verified());
    assert!(out.disc_sign_consistent);
    assert_eq!(out.second_form, q(&[2, 3]));
    assert_eq!(out.second_symmetry, OrthSymmetry::neg_identity(2));
    // C0(<-1>) is 1-dimensional, so the target is just C(q).
    assert_eq!(out.cert.target.dim(), 4);
}

#[test]
fn decompose_even_c0cid_instance() {
    // tau = -id + id on <-d> _|_ q gives (C(d q), J^{id}); here d = 2, q = <1,3>.
    let out = decompose_even(&q(&[-2]), &sym("-"), &q(&[1, 3]), &sym("++")).unwrap();
    assert!(out.cert.verified());
    assert_eq!(out.second_form, q(&[2, 6]));
    assert_eq!(out.second_symmetry, OrthSymmetry::identity(2));
}

#[test]
fn decompose_even_dimension_bookkeeping() {
    let out = decompose_even(&q(&[1, 1, 1]), &sym("+-+"), &q(&[2, 5]), &sym("-+")).unwrap();
    assert!(out.cert.verified());
    assert!(out.disc_sign_consistent);
    // 2^{(3+2)-1} = 16 on both sides.
    assert_eq!(out.cert.source.dim(), 16);
    assert_eq!(out.cert.target.dim(), 16);
}

#[test]
fn compose_even_round_trip() {
    let out = compose_even(&q(&[3]), &sym("+"), &q(&[1, 2]), &sym("+-")).unwrap();
    assert!(out.cert.verified());
    // combined form is <3> _|_ -3 * <1,2>
    assert_eq!(out.combined_form, q(&[3, -3, -6]));
    let dec = decompose_even(
        &q(&[3]),
        &sym("+"),
        &out.combined_form.without(0),
        &OrthSymmetry::new(out.combined_symmetry.signs()[1..].to_vec()),
    )
    .unwrap();
    assert!(dec.cert.verified());
}

#[test]
fn even_reduce_quaternion_example() {
    // C0(<1,1,1>, J~^{id}) = C(<-1,-1>, J^{-id}): the (-1,-1) quaternion
    // with its canonical involution.
    let out = even_reduce(&q(&[1, 1, 1]), &sym("+++"), 0).unwrap();
    assert!(out.cert.verified());
    assert!(out.forward.verified());
    assert_eq!(out.reduced_form, q(&[-1, -1]));
    assert_eq!(out.reduced_symmetry, OrthSymmetry::neg_identity(2));
    assert_eq!(out.cert.source.dim(), out.cert.target.dim());
    assert_eq!(out.cert.target.symmetric_dim(), 1);
}

#[test]
fn even_reduce_at_interior_pivot() {
    let out = even_reduce(&q(&[2, 5, -3]), &sym("+-+"), 1).unwrap();
    assert!(out.cert.verified());
    // d = 5, eps = -1: reduced form -5 * <2,-3>, symmetry +(+,+).
    assert_eq!(out.reduced_form, q(&[-10, 15]));
    assert_eq!(out.reduced_symmetry, sym("++"));
}

#[test]
fn even_scaling_invariance() {
    let chain = even_scaling_chain(&q(&[1, 3]), &sym("++"), &FieldScalar::int(2), 0).unwrap();
    assert!(chain.verified());
    assert_eq!(chain.steps().len(), 3);
    let end = chain.end_to_end().unwrap();
    assert!(end.verified());
    // target is C0(<2,6>)
    assert_eq!(chain.target().unwrap().dim(), 2);
}

#[test]
fn quaternion_realizations() {
    let a = FieldScalar::int(2);
    let b = FieldScalar::int(3);
    let sympl = realize_quaternion(&a, &b, RealizationMode::Symplectic).unwrap();
    assert!(sympl.cert.verified());
    assert_eq!(sympl.form, q(&[2, 3]));
    assert_eq!(sympl.symmetry, OrthSymmetry::neg_identity(2));
    assert_eq!(sympl.cert.target.symmetric_dim(), 1);

    let orth_id = realize_quaternion(&a, &b, RealizationMode::OrthogonalId).unwrap();
    assert!(orth_id.cert.verified());
    assert_eq!(orth_id.form, q(&[-6, 3]));
    assert_eq!(orth_id.symmetry, OrthSymmetry::identity(2));
    assert_eq!(orth_id.cert.target.symmetric_dim(), 3);

    let refl = realize_quaternion(&a, &b, RealizationMode::OrthogonalReflection).unwrap();
    assert!(refl.cert.verified());
    assert_eq!(refl.symmetry, OrthSymmetry::reflection(2, 0));
    assert_eq!(refl.cert.target.symmetric_dim(), 3);
}

#[test]
fn reflection_identity_swap_verifies() {
    let out = reflection_identity_swap(&FieldScalar::int(2), &FieldScalar::int(3)).unwrap();
    assert!(out.cert.verified());
    assert_eq!(out.target_form, q(&[-6, 3]));
    assert_eq!(out.d, FieldScalar::int(-6));
    assert_eq!(out.e, FieldScalar::int(3));
}

#[test]
fn permutation_and_rescale_certificates() {
    let (pform, psym, cert) =
        permute_clifford_certificate(&q(&[2, 3, 5]), &sym("+-+"), &[2, 0, 1]).unwrap();
    assert!(cert.verified());
    assert_eq!(pform, q(&[5, 2, 3]));
    assert_eq!(psym, sym("++-"));

    let cert = scale_square_certificate(&q(&[3, -1]), &sym("-+"), &FieldScalar::int(2)).unwrap();
    assert!(cert.verified());
    assert_eq!(cert.source.dim(), 4);
}

#[test]
fn predict_type_tables() {
    use InvolutionType::{Orthogonal, Symplectic};
    assert_eq!(predict_type(2, 0).unwrap(), Orthogonal);
    assert_eq!(predict_type(2, 2).unwrap(), Symplectic);
    assert_eq!(predict_type(4, 1).unwrap(), Orthogonal);
    assert_eq!(predict_type(6, 3).unwrap(), Orthogonal);
    assert!(predict_type(3, 1).is_err());
    assert!(predict_type(2, 3).is_err());

    // Identity/negation table for n = 2, 4, 6, 8 (mod 8 pattern).
    let expected = [
        (2, Orthogonal, Symplectic),
        (4, Symplectic, Symplectic),
        (6, Symplectic, Orthogonal),
        (8, Orthogonal, Orthogonal),
    ];
    for (n, id_type, neg_type) in expected {
        assert_eq!(predict_identity_type(n, false).unwrap(), id_type);
        assert_eq!(predict_identity_type(n, true).unwrap(), neg_type);
    }
    // Reflection table.
    assert_eq!(predict_reflection_type(2).unwrap(), Orthogonal);
    assert_eq!(predict_reflection_type(4).unwrap(), Orthogonal);
    assert_eq!(predict_reflection_type(6).unwrap(), Symplectic);
    assert_eq!(predict_reflection_type(8).unwrap(), Symplectic);
    // Even-algebra identity involution for odd n.
    assert_eq!(predict_even_identity_type(1).unwrap(), Orthogonal);
    assert_eq!(predict_even_identity_type(3).unwrap(), Symplectic);
    assert_eq!(predict_even_identity_type(5).unwrap(), Symplectic);
    assert_eq!(predict_even_identity_type(7).unwrap(), Orthogonal);
}

fn qf(a: i64, b: i64, invkind: crate::algebra::QuaternionInvolution) -> QuatFactor {
    QuatFactor {
        a: FieldScalar::int(a),
        b: FieldScalar::int(b),
        invkind,
    }
}

#[test]
fn synthesize_single_factor() {
    use crate::algebra::QuaternionInvolution::*;
    let out = synthesize_multiquaternion(&[qf(2, 3, Canonical)]).unwrap();
    assert!(out.chain.verified());
    assert_eq!(out.form.dim(), 2);
    assert_eq!(out.symmetry, OrthSymmetry::neg_identity(2));
    assert!(out.types_match);

    let out = synthesize_multiquaternion(&[qf(2, 3, OrthogonalUv)]).unwrap();
    assert_eq!(out.symmetry, OrthSymmetry::identity(2));
    assert!(out.types_match);
}

#[test]
fn synthesize_mixed_pair_gives_both_identities() {
    use crate::algebra::QuaternionInvolution::*;
    // one symplectic + one orthogonal: type symplectic, both +-id realizable
    let out = synthesize_multiquaternion(&[qf(2, 3, Canonical), qf(1, 1, OrthogonalUv)]).unwrap();
    assert_eq!(out.classification.itype, InvolutionType::Symplectic);
    assert!(out.chain.verified());
    assert_eq!(out.form.dim(), 4);
    assert_eq!(out.symmetry, OrthSymmetry::identity(4));
    let (aform, asym, achain) = out.alternate.as_ref().unwrap();
    assert_eq!(aform.dim(), 4);
    assert_eq!(*asym, OrthSymmetry::neg_identity(4));
    assert!(achain.verified());
    assert!(out.types_match);
}

#[test]
fn synthesize_two_orthogonal_gives_reflection() {
    use crate::algebra::QuaternionInvolution::*;
    let out =
        synthesize_multiquaternion(&[qf(2, 3, OrthogonalUv), qf(1, 5, OrthogonalWv)]).unwrap();
    assert_eq!(out.classification.itype, InvolutionType::Orthogonal);
    assert!(out.chain.verified());
    assert!(out.symmetry.is_reflection());
    assert_eq!(out.form.dim(), 4);
    assert!(out.alternate.is_none());
    assert!(out.types_match);
}

#[test]
fn synthesize_two_symplectic_gives_reflection() {
    use crate::algebra::QuaternionInvolution::*;
    let out = synthesize_multiquaternion(&[qf(2, 3, Canonical), qf(1, 5, Canonical)]).unwrap();
    assert_eq!(out.classification.itype, InvolutionType::Orthogonal);
    assert!(out.symmetry.is_reflection());
    assert!(out.chain.verified());
}

#[test]
fn synthesize_three_factors() {
    use crate::algebra::QuaternionInvolution::*;
    // all symplectic: type symplectic, n = 3 mod 4 gives +id
    let out = synthesize_multiquaternion(&[
        qf(2, 3, Canonical),
        qf(1, 5, Canonical),
        qf(-1, 2, Canonical),
    ])
    .unwrap();
    assert_eq!(out.form.dim(), 6);
    assert_eq!(out.symmetry, OrthSymmetry::identity(6));
    assert!(out.chain.verified());
    assert!(out.types_match);

    // two symplectic + one orthogonal: type orthogonal, n = 3 gives -id
    let out = synthesize_multiquaternion(&[
        qf(2, 3, Canonical),
        qf(1, 5, OrthogonalUv),
        qf(-1, 2, Canonical),
    ])
    .unwrap();
    assert_eq!(out.symmetry, OrthSymmetry::neg_identity(6));
    assert!(out.chain.verified());
    assert!(out.types_match);
}

#[test]
fn biquaternion_equivalence_chains() {
    let (a1, b1) = (FieldScalar::int(2), FieldScalar::int(3));
    let (a2, b2) = (FieldScalar::int(1), FieldScalar::int(5));
    let eq = biquaternion_equivalences(&a1, &b1, &a2, &b2).unwrap();
    assert!(eq.orthogonal_to_symplectic.verified());
    assert!(eq.orthogonal_to_reflection.verified());
    assert!(eq.symplectic_to_reflection.verified());
    // (i) -> (ii) really ends at a tensor of two canonical models.
    let end = eq.orthogonal_to_symplectic.target().unwrap();
    assert_eq!(end.dim(), 16);
    assert_eq!(
        end.classify().unwrap().itype,
        InvolutionType::Orthogonal
    );
}

#[test]
fn second_kind_realize_example() {
    let out = second_kind_realize(
        &FieldScalar::int(-1),
        &FieldScalar::int(-1),
        &FieldScalar::int(2),
    )
    .unwrap();
    assert!(out.chain.verified());
    assert_eq!(out.realized_form.dim(), 3);
    assert_eq!(out.realized_symmetry, OrthSymmetry::identity(3));
    // every stage is unitary with center Q(sqrt(2))
    for stage in &out.stages {
        assert!(stage.unitary, "stage `{}` is not unitary", stage.description);
        assert!(
            stage.center_matches,
            "stage `{}` center is not Q(sqrt(2))",
            stage.description
        );
    }
    // the signed discriminant of the output form is c modulo squares
    let disc = out.realized_form.signed_disc();
    assert!(!disc.is_square().unwrap());
    assert!(disc
        .try_mul(&FieldScalar::int(2))
        .unwrap()
        .is_square()
        .unwrap());
    // dimension bookkeeping: 8 = 4 * 2 at every stage
    for step in out.chain.steps() {
        assert_eq!(step.cert.source.dim(), 8);
        assert_eq!(step.cert.target.dim(), 8);
    }
    // the byproduct model with an orthogonal reflection factor classifies unitary
    assert_eq!(
        out.orthogonal_factor_model.classify().unwrap().kind,
        InvolutionKind::Second
    );
}

#[test]
fn unitary_synthesize_single_factor() {
    let out = unitary_synthesize(
        &[(FieldScalar::int(-1), FieldScalar::int(-1))],
        &FieldScalar::int(2),
    )
    .unwrap();
    assert!(out.odd_chain.verified());
    assert_eq!(out.odd_form.dim(), 3);
    assert_eq!(out.odd_symmetry, OrthSymmetry::identity(3));
    assert!(out.disc_nontrivial);
    assert!(out.disc_matches_extension);
    assert!(out.even_model.is_none());
    let (vform, vsym, vchain) = out.even_reflection_model.as_ref().unwrap();
    assert_eq!(vform.dim(), 4);
    assert!(vsym.is_reflection());
    assert!(vchain.verified());
    for stage in &out.stages {
        assert!(stage.unitary && stage.center_matches, "{}", stage.description);
    }
}

#[test]
fn unitary_synthesize_two_factors() {
    let out = unitary_synthesize(
        &[
            (FieldScalar::int(-1), FieldScalar::int(-1)),
            (FieldScalar::int(-1), FieldScalar::int(-3)),
        ],
        &FieldScalar::int(5),
    )
    .unwrap();
    assert!(out.odd_chain.verified());
    assert_eq!(out.odd_form.dim(), 5);
    assert!(out.disc_nontrivial);
    assert!(out.disc_matches_extension);
    let (qform, qsym, qchain) = out.even_model.as_ref().unwrap();
    assert_eq!(qform.dim(), 6);
    assert_eq!(qsym.minus_count(), 0);
    assert!(qchain.verified());
    assert!(out.even_reflection_model.is_none());
    for stage in &out.stages {
        assert!(stage.unitary && stage.center_matches, "{}", stage.description);
    }
}

#[test]
fn certificates_catch_wrong_involutions() {
    // The same underlying algebra map against a target with the wrong
    // involution must fail exactly the involution-compatibility check.
    let out = decompose_full(&q(&[1, 1]), &sym("++"), &q(&[3]), &sym("+")).unwrap();
    assert!(out.cert.verified());
    let first = crate::algebra::from_clifford(&q(&[1, 1]), &sym("++")).unwrap();
    // correct second symmetry is -id; flip it to +id
    let wrong_second =
        crate::algebra::from_clifford(&out.second_form, &OrthSymmetry::identity(1)).unwrap();
    let wrong_target = std::sync::Arc::new(
        crate::algebra::tensor(&first, &wrong_second).unwrap(),
    );
    let cert = crate::algebra::verify_certificate(
        out.cert.source.clone(),
        wrong_target,
        out.cert.map.clone(),
    );
    assert!(cert.checks.unital.passed());
    assert!(cert.checks.multiplicative.passed());
    assert!(cert.checks.bijective.passed());
    assert!(!cert.checks.involution_compatible.passed());
}

#[test]
fn certificates_catch_wrong_maps() {
    // Perturbing one generator image breaks multiplicativity.
    let out = decompose_full(&q(&[2, 3]), &sym("-+"), &q(&[5]), &sym("-")).unwrap();
    let mut cols: Vec<Vec<crate::field::FieldScalar>> = (0..out.cert.map.source_dim())
        .map(|i| out.cert.map.column(i).to_vec())
        .collect();
    for v in cols[1].iter_mut() {
        if !v.is_zero() {
            *v = v.try_mul(&FieldScalar::int(2)).unwrap();
        }
    }
    let tampered = crate::algebra::LinearMapTable::from_columns(out.cert.map.target_dim(), cols);
    let cert = crate::algebra::verify_certificate(
        out.cert.source.clone(),
        out.cert.target.clone(),
        tampered,
    );
    assert!(!cert.checks.multiplicative.passed());
    assert!(cert.checks.multiplicative.witness().is_some());

    // A rank-deficient map fails bijectivity.
    let zero_cols: Vec<Vec<crate::field::FieldScalar>> = (0..out.cert.map.source_dim())
        .map(|_| crate::algebra::zero_vec(out.cert.map.target_dim(), out.cert.source.field()))
        .collect();
    let collapsed =
        crate::algebra::LinearMapTable::from_columns(out.cert.map.target_dim(), zero_cols);
    let cert = crate::algebra::verify_certificate(
        out.cert.source.clone(),
        out.cert.target.clone(),
        collapsed,
    );
    assert!(!cert.checks.unital.passed());
    assert!(!cert.checks.bijective.passed());
}

#[test]
fn chain_rejects_non_composable_steps() {
    let out1 = decompose_full(&q(&[1, 1]), &sym("++"), &q(&[3]), &sym("+")).unwrap();
    let out2 = decompose_full(&q(&[2, 3]), &sym("-+"), &q(&[5]), &sym("-")).unwrap();
    let mut chain = CertChain::new();
    chain.push("first", out1.cert).unwrap();
    let err = chain.push("mismatched", out2.cert).unwrap_err();
    assert!(matches!(err, StructureError::ChainBroken(1)));
}
