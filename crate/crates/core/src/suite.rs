//! The full verification battery: every structural law the crate implements,
//! run deterministically from a seed, one result per criterion.
//!
//! Coefficients are drawn from the documented pool `{±1, ±2, ±3, ±5}`.
//! Each criterion draws from its own seeded stream, so results do not
//! depend on the order in which criteria run.

use crate::algebra::{
    from_clifford, from_even_clifford, InvolutionKind, LinearMapTable, QuaternionInvolution,
};
use crate::clifford::{blade_mul, even_basis_masks, z_element, CliffordElement};
use crate::field::{FieldDescriptor, FieldScalar};
use crate::qspace::{OrthSymmetry, QuadForm, Sign};
use crate::report::{Check, Report};
use crate::rng::SplitMix64;
use crate::structure::{
    biquaternion_equivalences, reflection_identity_swap, decompose_even, decompose_full, even_reduce,
    predict_even_identity_type, predict_identity_type, predict_reflection_type, predict_type,
    realize_quaternion, second_kind_realize, synthesize_multiquaternion, unitary_synthesize,
    QuatFactor, RealizationMode,
};
use crate::universal::{clifford_map_factor, even_universal_factor, EvenMapTable};
use serde_json::json;
use std::sync::Arc;
use std::time::Instant;

pub const COEFF_POOL: [i64; 8] = [1, -1, 2, -2, 3, -3, 5, -5];

#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub name: &'static str,
    pub checks: usize,
    pub failures: Vec<String>,
    pub elapsed_ms: u64,
}

impl CriterionResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "name": self.name,
            "checks": self.checks,
            "failures": self.failures,
            "status": if self.passed() { "pass" } else { "fail" },
            "elapsed_ms": self.elapsed_ms,
        })
    }
}

struct Tally {
    name: &'static str,
    checks: usize,
    failures: Vec<String>,
    started: Instant,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            checks: 0,
            failures: Vec::new(),
            started: Instant::now(),
        }
    }

    fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(witness());
        }
    }

    fn finish(self) -> CriterionResult {
        CriterionResult {
            name: self.name,
            checks: self.checks,
            failures: self.failures,
            elapsed_ms: self.started.elapsed().as_millis() as u64,
        }
    }
}

pub fn draw_coeff(rng: &mut SplitMix64) -> FieldScalar {
    FieldScalar::int(*rng.pick(&COEFF_POOL))
}

pub fn draw_form(rng: &mut SplitMix64, n: usize) -> QuadForm {
    QuadForm::new(
        FieldDescriptor::Rationals,
        (0..n).map(|_| draw_coeff(rng)).collect(),
    )
    .expect("pool coefficients are nonzero")
}

pub fn sym_from_bits(n: usize, bits: u32) -> OrthSymmetry {
    OrthSymmetry::new(
        (0..n)
            .map(|i| {
                if bits & (1 << i) != 0 {
                    Sign::Minus
                } else {
                    Sign::Plus
                }
            })
            .collect(),
    )
}

/// A random symmetry with exactly `s` negated coordinates.
pub fn draw_sym_with_s(rng: &mut SplitMix64, n: usize, s: usize) -> OrthSymmetry {
    let mut idx: Vec<usize> = (0..n).collect();
    // Fisher-Yates on the index list, take the first s as the minus set.
    for i in (1..n).rev() {
        let j = rng.below(i + 1);
        idx.swap(i, j);
    }
    let mut signs = vec![Sign::Plus; n];
    for &i in idx.iter().take(s) {
        signs[i] = Sign::Minus;
    }
    OrthSymmetry::new(signs)
}

/// Laws of the adapted volume element: the involution sign, the square, and
/// the (anti)commutation parity, exhaustively over sign vectors for n <= 6.
pub fn criterion_volume_element(seed: u64) -> CriterionResult {
    let mut t = Tally::new("volume-element-laws");
    let mut rng = SplitMix64::new(seed ^ 0xC1);
    for n in 1..=6usize {
        for bits in 0..(1u32 << n) {
            for _draw in 0..3 {
                let form = Arc::new(draw_form(&mut rng, n));
                let sigma = sym_from_bits(n, bits);
                let s = sigma.minus_count();
                let z = z_element(&sigma, &form);

                let jz = z.induced_involution(&sigma).unwrap();
                let expected_sign = Sign::from_parity(s + n * (n - 1) / 2);
                let expected = match expected_sign {
                    Sign::Plus => z.clone(),
                    Sign::Minus => z.neg(),
                };
                t.check(jz == expected, || {
                    format!("involution sign of z fails for {form} sigma={sigma}")
                });

                let z2 = z.checked_mul(&z).unwrap();
                let disc = CliffordElement::scalar(&form, form.signed_disc());
                t.check(z2 == disc, || {
                    format!("z^2 != signed disc for {form} sigma={sigma}")
                });

                for i in 0..n {
                    let e = CliffordElement::generator(&form, i);
                    let ok = if n % 2 == 0 {
                        z.anticommutes_with(&e)
                    } else {
                        z.commutes_with(&e)
                    };
                    t.check(ok, || {
                        format!("commutation parity fails for {form} sigma={sigma} e{}", i + 1)
                    });
                }

                // Reflection special case, valid for odd n.
                if s == 1 && n % 2 == 1 {
                    let refl_sign = Sign::from_parity(n * (n + 1) / 2);
                    t.check(expected_sign == refl_sign, || {
                        format!("reflection sign shortcut fails for odd n={n}")
                    });
                }
            }
        }
    }
    t.finish()
}

/// The trace-mod-8 type rule matches the classified type of the table
/// algebra for every even dimension up to 8 and every anti-symmetric
/// dimension.
pub fn criterion_type_oracle(seed: u64) -> CriterionResult {
    let mut t = Tally::new("type-oracle");
    let mut rng = SplitMix64::new(seed ^ 0xC2);
    for n in [2usize, 4, 6, 8] {
        for s in 0..=n {
            for _draw in 0..3 {
                let form = draw_form(&mut rng, n);
                let sigma = draw_sym_with_s(&mut rng, n, s);
                let predicted = predict_type(n, s).unwrap();
                let alg = from_clifford(&form, &sigma).unwrap();
                match alg.classify() {
                    Ok(class) => {
                        t.check(class.kind == InvolutionKind::First, || {
                            format!("kind should be first for {form} {sigma}")
                        });
                        t.check(class.itype == predicted, || {
                            format!(
                                "type mismatch for n={n} s={s} {form}: predicted {predicted}, classified {}",
                                class.itype
                            )
                        });
                    }
                    Err(e) => t.check(false, || format!("classification failed: {e}")),
                }
            }
        }
    }
    t.finish()
}

/// The named involution-type tables: identity and negated-identity symmetry
/// for even dimensions, reflections for even dimensions, and the restricted
/// involution on the even algebra for odd dimensions (via even reduction).
pub fn criterion_type_tables(seed: u64) -> CriterionResult {
    let mut t = Tally::new("type-tables");
    let mut rng = SplitMix64::new(seed ^ 0xC3);
    for n in [2usize, 4, 6, 8] {
        for negated in [false, true] {
            for _draw in 0..2 {
                let form = draw_form(&mut rng, n);
                let sigma = if negated {
                    OrthSymmetry::neg_identity(n)
                } else {
                    OrthSymmetry::identity(n)
                };
                let expected = predict_identity_type(n, negated).unwrap();
                let class = from_clifford(&form, &sigma).unwrap().classify().unwrap();
                t.check(class.itype == expected, || {
                    format!("identity-table mismatch at n={n} negated={negated}")
                });
            }
        }
        for _draw in 0..2 {
            let form = draw_form(&mut rng, n);
            let at = rng.below(n);
            let sigma = OrthSymmetry::reflection(n, at);
            let expected = predict_reflection_type(n).unwrap();
            let class = from_clifford(&form, &sigma).unwrap().classify().unwrap();
            t.check(class.itype == expected, || {
                format!("reflection-table mismatch at n={n}")
            });
        }
    }
    for n in [1usize, 3, 5, 7] {
        for _draw in 0..2 {
            let form = draw_form(&mut rng, n);
            let sigma = OrthSymmetry::identity(n);
            let expected = predict_even_identity_type(n).unwrap();
            let even_class = from_even_clifford(&form, &sigma)
                .unwrap()
                .classify()
                .unwrap();
            t.check(even_class.itype == expected, || {
                format!("even-table mismatch at n={n} (direct)")
            });
            let reduce = even_reduce(&form, &sigma, 0).unwrap();
            let via_reduce = reduce.cert.target.classify().unwrap();
            t.check(via_reduce.itype == expected, || {
                format!("even-table mismatch at n={n} (via reduction)")
            });
        }
    }
    t.finish()
}

/// Both decomposition isomorphisms across dimensions and all adapted sign
/// vectors: every certificate passes all four checks and the case-split
/// symmetry sign agrees with the symmetry discriminant.
pub fn criterion_decompositions(seed: u64) -> CriterionResult {
    let mut t = Tally::new("decomposition-certificates");
    let mut rng = SplitMix64::new(seed ^ 0xC4);
    for n0 in [2usize, 4] {
        for m in 0..=3usize {
            for bits0 in 0..(1u32 << n0) {
                for bits in 0..(1u32 << m) {
                    let q0 = draw_form(&mut rng, n0);
                    let q = draw_form(&mut rng, m);
                    let s0 = sym_from_bits(n0, bits0);
                    let s = sym_from_bits(m, bits);
                    match decompose_full(&q0, &s0, &q, &s) {
                        Ok(out) => {
                            t.check(out.cert.verified(), || {
                                format!("full decomposition fails for {q0} {s0} | {q} {s}")
                            });
                            t.check(out.disc_sign_consistent, || {
                                format!("sign cross-check fails for {q0} {s0}")
                            });
                        }
                        Err(e) => t.check(false, || format!("full decomposition error: {e}")),
                    }
                }
            }
        }
    }
    for n1 in [1usize, 3] {
        for m in 0..=2usize {
            for bits1 in 0..(1u32 << n1) {
                for bits in 0..(1u32 << m) {
                    let q1 = draw_form(&mut rng, n1);
                    let q = draw_form(&mut rng, m);
                    let s1 = sym_from_bits(n1, bits1);
                    let s = sym_from_bits(m, bits);
                    match decompose_even(&q1, &s1, &q, &s) {
                        Ok(out) => {
                            t.check(out.cert.verified(), || {
                                format!("even decomposition fails for {q1} {s1} | {q} {s}")
                            });
                            t.check(out.disc_sign_consistent, || {
                                format!("even sign cross-check fails for {q1} {s1}")
                            });
                        }
                        Err(e) => t.check(false, || format!("even decomposition error: {e}")),
                    }
                }
            }
        }
    }
    t.finish()
}

/// Build the second factorization `F o G^{-1}` through the reduced Clifford
/// algebra at pivot 0 and compare with the direct pairwise-product
/// factorization.
fn second_factorization(
    q: &QuadForm,
    table: &EvenMapTable,
) -> Result<(LinearMapTable, bool), String> {
    let sigma = OrthSymmetry::identity(q.dim());
    let reduce = even_reduce(q, &sigma, 0).map_err(|e| e.to_string())?;
    let g_bijective = reduce.forward.verified();
    let images: Vec<Vec<FieldScalar>> = (1..q.dim())
        .map(|j| table.entry(0, j).to_vec())
        .collect();
    let f = clifford_map_factor(&reduce.reduced_form, &images, table.target())
        .map_err(|e| e.to_string())?;
    let g_inv = reduce
        .forward
        .map
        .inverse()
        .ok_or_else(|| "G is singular".to_string())?;
    Ok((g_inv.then(&f), g_bijective))
}

/// The even universal property: seeded even Clifford maps validate, factor
/// through the even algebra with a verified homomorphism, and agree with the
/// independent factorization through the reduced algebra at the first pivot.
pub fn criterion_universal_property(seed: u64) -> CriterionResult {
    let mut t = Tally::new("even-universal-property");
    let mut rng = SplitMix64::new(seed ^ 0xC5);
    for n in [2usize, 3, 4] {
        for draw in 0..5 {
            let form = draw_form(&mut rng, n);
            let even = Arc::new(from_even_clifford(&form, &OrthSymmetry::identity(n)).unwrap());
            let masks = even_basis_masks(n);
            let even_index = |m: u32| masks.binary_search(&m).unwrap();

            let (table, expected): (EvenMapTable, Option<LinearMapTable>) = if draw < 3 {
                // isometry-twisted canonical map
                let s = sym_from_bits(n, (rng.next_u64() % (1 << n)) as u32);
                let mut entries =
                    vec![vec![crate::algebra::zero_vec(even.dim(), even.field()); n]; n];
                for i in 0..n {
                    for j in 0..n {
                        let (sgn, coeff, mask) = blade_mul(1 << i, 1 << j, &form);
                        let twist = s.sign(i).mul(s.sign(j));
                        let mut v = crate::algebra::zero_vec(even.dim(), even.field());
                        v[even_index(mask)] = sgn.mul(twist).apply(&coeff);
                        entries[i][j] = v;
                    }
                }
                (EvenMapTable::new(form.clone(), even.clone(), entries), None)
            } else {
                // the even-reduction data at pivot e1
                let reduce = even_reduce(&form, &OrthSymmetry::identity(n), 0).unwrap();
                let target = reduce.cert.target.clone();
                let mut entries =
                    vec![vec![crate::algebra::zero_vec(target.dim(), target.field()); n]; n];
                for i in 0..n {
                    for j in 0..n {
                        let (sgn, coeff, mask) = blade_mul(1 << i, 1 << j, &form);
                        let col = reduce.cert.map.column(even_index(mask));
                        entries[i][j] = col
                            .iter()
                            .map(|c| sgn.apply(&c.try_mul(&coeff).unwrap()))
                            .collect();
                    }
                }
                let expected = reduce.cert.map.clone();
                (
                    EvenMapTable::new(form.clone(), target, entries),
                    Some(expected),
                )
            };

            let outcome = table.validate();
            t.check(outcome.pass, || {
                format!(
                    "even map fails validation for {form}: {:?}",
                    outcome.counterexample
                )
            });
            match even_universal_factor(&table) {
                Ok(psi) => {
                    if let Some(expected) = expected {
                        t.check(psi == expected, || {
                            format!("factorization differs from the reduction map for {form}")
                        });
                    }
                    match second_factorization(&form, &table) {
                        Ok((psi2, g_ok)) => {
                            t.check(g_ok, || {
                                format!("pivot map G not bijective for {form}")
                            });
                            t.check(psi == psi2, || {
                                format!("two factorizations disagree for {form}")
                            });
                        }
                        Err(e) => t.check(false, || format!("second factorization: {e}")),
                    }
                }
                Err(e) => t.check(false, || format!("factorization failed for {form}: {e}")),
            }
        }
    }
    t.finish()
}

/// Quaternion realizations in all three modes, symmetric dimensions, and the
/// reflection-to-identity rewrite, on seeded parameter pairs.
pub fn criterion_quaternion_realizations(seed: u64) -> CriterionResult {
    let mut t = Tally::new("quaternion-realizations");
    let mut rng = SplitMix64::new(seed ^ 0xC6);
    for _ in 0..10 {
        let a = draw_coeff(&mut rng);
        let b = draw_coeff(&mut rng);
        let sympl = realize_quaternion(&a, &b, RealizationMode::Symplectic);
        match sympl {
            Ok(r) => {
                t.check(r.cert.verified(), || format!("symplectic realization ({a},{b})"));
                t.check(r.cert.target.symmetric_dim() == 1, || {
                    format!("symplectic sym_dim != 1 for ({a},{b})")
                });
            }
            Err(e) => t.check(false, || format!("symplectic realization error: {e}")),
        }
        for mode in [RealizationMode::OrthogonalId, RealizationMode::OrthogonalReflection] {
            match realize_quaternion(&a, &b, mode) {
                Ok(r) => {
                    t.check(r.cert.verified(), || {
                        format!("orthogonal realization ({a},{b}) {mode:?}")
                    });
                    t.check(r.cert.target.symmetric_dim() == 3, || {
                        format!("orthogonal sym_dim != 3 for ({a},{b})")
                    });
                }
                Err(e) => t.check(false, || format!("orthogonal realization error: {e}")),
            }
        }
        match reflection_identity_swap(&a, &b) {
            Ok(s) => t.check(s.cert.verified(), || format!("swap fails for ({a},{b})")),
            Err(e) => t.check(false, || format!("swap error: {e}")),
        }
    }
    t.finish()
}

fn all_modes() -> [QuaternionInvolution; 3] {
    [
        QuaternionInvolution::Canonical,
        QuaternionInvolution::OrthogonalUv,
        QuaternionInvolution::OrthogonalWv,
    ]
}

fn check_synthesis(t: &mut Tally, factors: &[QuatFactor]) {
    match synthesize_multiquaternion(factors) {
        Ok(out) => {
            let label = format!(
                "{} factors, type {}",
                factors.len(),
                out.classification.itype
            );
            t.check(out.chain.verified(), || format!("chain fails: {label}"));
            t.check(out.form.dim() == 2 * factors.len(), || {
                format!("dimension wrong: {label}")
            });
            t.check(out.types_match, || format!("type mismatch: {label}"));
            let normalized = out.symmetry.minus_count() == 0
                || out.symmetry.minus_count() == out.symmetry.dim()
                || out.symmetry.is_reflection();
            t.check(normalized, || format!("symmetry not normalized: {label}"));
            if let Some((aform, asym, achain)) = &out.alternate {
                t.check(achain.verified(), || format!("alternate chain fails: {label}"));
                t.check(aform.dim() == 2 * factors.len(), || {
                    format!("alternate dimension wrong: {label}")
                });
                t.check(
                    asym.minus_count() == asym.dim() || asym.minus_count() == 0,
                    || format!("alternate symmetry not +-id: {label}"),
                );
            }
        }
        Err(e) => t.check(false, || format!("synthesis error: {e}")),
    }
}

/// Multiquaternion synthesis across all involution-mode mixes for up to
/// three factors, seeded mixes for four, plus the degree-4 equivalences.
pub fn criterion_multiquaternion_synthesis(seed: u64) -> CriterionResult {
    let mut t = Tally::new("multiquaternion-synthesis");
    let mut rng = SplitMix64::new(seed ^ 0xC7);
    let factor = |rng: &mut SplitMix64, invkind| QuatFactor {
        a: draw_coeff(rng),
        b: draw_coeff(rng),
        invkind,
    };
    for mode in all_modes() {
        let f = factor(&mut rng, mode);
        check_synthesis(&mut t, &[f]);
    }
    for m1 in all_modes() {
        for m2 in all_modes() {
            let fs = [factor(&mut rng, m1), factor(&mut rng, m2)];
            check_synthesis(&mut t, &fs);
        }
    }
    for m1 in all_modes() {
        for m2 in all_modes() {
            for m3 in all_modes() {
                let fs = [
                    factor(&mut rng, m1),
                    factor(&mut rng, m2),
                    factor(&mut rng, m3),
                ];
                check_synthesis(&mut t, &fs);
            }
        }
    }
    // Four factors: one seeded mix per first-kind case (orthogonal type with
    // an even number of canonical factors; symplectic type with an odd one).
    let orth_mix = [
        factor(&mut rng, QuaternionInvolution::Canonical),
        factor(&mut rng, QuaternionInvolution::OrthogonalUv),
        factor(&mut rng, QuaternionInvolution::Canonical),
        factor(&mut rng, QuaternionInvolution::OrthogonalWv),
    ];
    check_synthesis(&mut t, &orth_mix);
    let sympl_mix = [
        factor(&mut rng, QuaternionInvolution::Canonical),
        factor(&mut rng, QuaternionInvolution::OrthogonalUv),
        factor(&mut rng, QuaternionInvolution::OrthogonalWv),
        factor(&mut rng, QuaternionInvolution::Canonical),
    ];
    check_synthesis(&mut t, &sympl_mix);

    // Degree-4 equivalence chains.
    let (a1, b1, a2, b2) = (
        draw_coeff(&mut rng),
        draw_coeff(&mut rng),
        draw_coeff(&mut rng),
        draw_coeff(&mut rng),
    );
    match biquaternion_equivalences(&a1, &b1, &a2, &b2) {
        Ok(eq) => {
            t.check(eq.orthogonal_to_symplectic.verified(), || {
                "orthogonal-to-symplectic chain fails".to_string()
            });
            t.check(eq.orthogonal_to_reflection.verified(), || {
                "orthogonal-to-reflection chain fails".to_string()
            });
            t.check(eq.symplectic_to_reflection.verified(), || {
                "symplectic-to-reflection chain fails".to_string()
            });
        }
        Err(e) => t.check(false, || format!("equivalence error: {e}")),
    }
    t.finish()
}

/// Second-kind chains: the quaternion-over-extension realization with
/// unitary kind and matching center at every stage, and the unitary tensor
/// synthesis for one and two factors.
pub fn criterion_second_kind(seed: u64) -> CriterionResult {
    let mut t = Tally::new("second-kind-chains");
    let mut rng = SplitMix64::new(seed ^ 0xC8);
    let radicands = [2i64, 3, 5];
    for _ in 0..5 {
        let a = draw_coeff(&mut rng);
        let b = draw_coeff(&mut rng);
        let c = FieldScalar::int(*rng.pick(&radicands));
        match second_kind_realize(&a, &b, &c) {
            Ok(out) => {
                t.check(out.chain.verified(), || {
                    format!("chain fails for ({a},{b},{c})")
                });
                for stage in &out.stages {
                    t.check(stage.unitary, || {
                        format!("stage `{}` not unitary for ({a},{b},{c})", stage.description)
                    });
                    t.check(stage.center_matches, || {
                        format!(
                            "stage `{}` center differs from the extension for ({a},{b},{c})",
                            stage.description
                        )
                    });
                }
                let disc = out.realized_form.signed_disc();
                let matches = disc
                    .try_mul(&c)
                    .ok()
                    .and_then(|p| p.is_square().ok())
                    .unwrap_or(false);
                t.check(matches, || {
                    format!("discriminant class mismatch for ({a},{b},{c})")
                });
                for step in out.chain.steps() {
                    t.check(step.cert.source.dim() == 8 && step.cert.target.dim() == 8, || {
                        "dimension drift in the second-kind chain".to_string()
                    });
                }
            }
            Err(e) => t.check(false, || format!("second-kind error: {e}")),
        }
    }
    // unitary synthesis, one factor: the even model carries a reflection
    {
        let a = draw_coeff(&mut rng);
        let b = draw_coeff(&mut rng);
        let c = FieldScalar::int(*rng.pick(&radicands));
        match unitary_synthesize(&[(a.clone(), b.clone())], &c) {
            Ok(out) => {
                t.check(out.odd_chain.verified(), || "unitary n=1 chain".to_string());
                t.check(out.disc_nontrivial && out.disc_matches_extension, || {
                    "unitary n=1 discriminant".to_string()
                });
                match &out.even_reflection_model {
                    Some((vform, vsym, vchain)) => {
                        t.check(
                            vform.dim() == 4 && vsym.is_reflection() && vchain.verified(),
                            || "unitary n=1 even model".to_string(),
                        );
                    }
                    None => t.check(false, || "unitary n=1 missing the even model".to_string()),
                }
            }
            Err(e) => t.check(false, || format!("unitary n=1 error: {e}")),
        }
    }
    // unitary synthesis, two factors: odd model + the even restricted model
    {
        let fs = [
            (draw_coeff(&mut rng), draw_coeff(&mut rng)),
            (draw_coeff(&mut rng), draw_coeff(&mut rng)),
        ];
        let c = FieldScalar::int(*rng.pick(&radicands));
        match unitary_synthesize(&fs, &c) {
            Ok(out) => {
                t.check(out.odd_chain.verified(), || "unitary n=2 chain".to_string());
                t.check(out.odd_form.dim() == 5, || "unitary n=2 dimension".to_string());
                t.check(out.disc_nontrivial, || {
                    "unitary n=2 discriminant trivial".to_string()
                });
                t.check(out.disc_matches_extension, || {
                    "unitary n=2 discriminant class".to_string()
                });
                match &out.even_model {
                    Some((qform, qsym, qchain)) => {
                        t.check(
                            qform.dim() == 6 && qsym.minus_count() == 0 && qchain.verified(),
                            || "unitary n=2 even model".to_string(),
                        );
                    }
                    None => t.check(false, || "unitary n=2 missing the even model".to_string()),
                }
                for stage in &out.stages {
                    t.check(stage.unitary && stage.center_matches, || {
                        format!("unitary n=2 stage `{}`", stage.description)
                    });
                }
            }
            Err(e) => t.check(false, || format!("unitary n=2 error: {e}")),
        }
    }
    t.finish()
}

/// The structure-constant tables agree with direct blade multiplication on
/// every basis pair, exhaustively for n <= 5.
pub fn criterion_table_oracle(seed: u64) -> CriterionResult {
    let mut t = Tally::new("table-blade-oracle");
    let mut rng = SplitMix64::new(seed ^ 0xC9);
    for n in 0..=5usize {
        let form = Arc::new(draw_form(&mut rng, n));
        let s_count = rng.below(n + 1);
        let sigma = draw_sym_with_s(&mut rng, n, s_count);
        let alg = from_clifford(&form, &sigma).unwrap();
        let dim = 1usize << n;
        for s in 0..dim as u32 {
            for u in 0..dim as u32 {
                let x = CliffordElement::blade(&form, s, FieldScalar::int(1));
                let y = CliffordElement::blade(&form, u, FieldScalar::int(1));
                let prod = x.checked_mul(&y).unwrap();
                let terms: Vec<(usize, FieldScalar)> =
                    prod.terms().map(|(m, c)| (m as usize, c.clone())).collect();
                t.check(alg.mul_basis(s as usize, u as usize) == &terms, || {
                    format!("table/blade mismatch at n={n} pair ({s:#b},{u:#b})")
                });
            }
        }
    }
    t.finish()
}

/// Run the whole battery.
pub fn run_suite(seed: u64) -> Vec<CriterionResult> {
    vec![
        criterion_volume_element(seed),
        criterion_type_oracle(seed),
        criterion_type_tables(seed),
        criterion_decompositions(seed),
        criterion_universal_property(seed),
        criterion_quaternion_realizations(seed),
        criterion_multiquaternion_synthesis(seed),
        criterion_second_kind(seed),
        criterion_table_oracle(seed),
    ]
}

/// Package a full suite run as a report.
pub fn suite_report(seed: u64) -> Report {
    let started = Instant::now();
    let results = run_suite(seed);
    let mut report = Report::new("suite");
    report.seed = seed;
    report.inputs = json!({ "seed": seed });
    report.outputs = json!({
        "criteria": results.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
        "coefficient_pool": COEFF_POOL,
    });
    for r in &results {
        if r.passed() {
            report.checks.push(Check::pass(r.name));
        } else {
            report
                .checks
                .push(Check::fail(r.name, r.failures.join("; ")));
        }
    }
    report.elapsed_ms = started.elapsed().as_millis() as u64;
    report
}
