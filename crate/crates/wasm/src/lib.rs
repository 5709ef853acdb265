//! Browser bindings: three interactive views over the exact engine.
//!
//! Every function takes plain strings (the same syntax the CLI uses) and
//! returns a JSON string, so the page stays a single static file with no
//! framework. Errors come back as `{"error": "..."}` rather than thrown
//! exceptions.

use cliffinv::clifford::{parse_element, z_element, CliffordElement};
use cliffinv::field::{FieldDescriptor, FieldScalar};
use cliffinv::qspace::{OrthSymmetry, QuadForm, Sign};
use cliffinv::structure::{predict_type, synthesize_multiquaternion, QuatFactor};
use cliffinv::QuaternionInvolution;
use serde_json::json;
use std::sync::Arc;
use wasm_bindgen::prelude::wasm_bindgen;

fn parse_form(text: &str) -> Result<QuadForm, String> {
    let mut scalars = Vec::new();
    for (i, piece) in text.split(',').enumerate() {
        let scalar =
            FieldScalar::parse(piece).map_err(|e| format!("coefficient {}: {e}", i + 1))?;
        if scalar.is_zero() {
            return Err(format!("coefficient {} is zero", i + 1));
        }
        scalars.push(scalar);
    }
    let field = scalars
        .iter()
        .map(|s| s.field().clone())
        .find(|f| f.is_extension())
        .unwrap_or(FieldDescriptor::Rationals);
    let mut coerced = Vec::with_capacity(scalars.len());
    for s in &scalars {
        coerced.push(s.coerce_into(&field).map_err(|e| e.to_string())?);
    }
    QuadForm::new(field, coerced).map_err(|e| e.to_string())
}

fn err_json(message: String) -> String {
    json!({ "error": message }).to_string()
}

/// Multiply two elements of `C(V, q)` and show the three canonical
/// involution images of the product.
#[wasm_bindgen]
pub fn clifford_calc(form: &str, x: &str, y: &str) -> String {
    let inner = || -> Result<serde_json::Value, String> {
        let q = Arc::new(parse_form(form)?);
        if q.dim() > 10 {
            return Err("keep the dimension at 10 or below for the demo".into());
        }
        let xe = parse_element(x, &q)?;
        let ye = parse_element(y, &q)?;
        let prod = xe.checked_mul(&ye).map_err(|e| e.to_string())?;
        Ok(json!({
            "form": q.to_string(),
            "x": xe.to_string(),
            "y": ye.to_string(),
            "product": prod.to_string(),
            "grade_involution": prod.grade_involution().to_string(),
            "reversion": prod.reversion().to_string(),
        }))
    };
    match inner() {
        Ok(v) => v.to_string(),
        Err(e) => err_json(e),
    }
}

/// The adapted volume element of `(q, sigma)`: its square against the
/// signed discriminant, its involution image, and the commutation pattern.
#[wasm_bindgen]
pub fn volume_report(form: &str, sym: &str) -> String {
    let inner = || -> Result<serde_json::Value, String> {
        let q = Arc::new(parse_form(form)?);
        if q.dim() > 10 {
            return Err("keep the dimension at 10 or below for the demo".into());
        }
        let sigma = OrthSymmetry::parse(sym, q.dim()).map_err(|e| e.to_string())?;
        let z = z_element(&sigma, &q);
        let z2 = z.checked_mul(&z).map_err(|e| e.to_string())?;
        let jz = z.induced_involution(&sigma).map_err(|e| e.to_string())?;
        let disc = q.signed_disc();
        let n = q.dim();
        let s = sigma.minus_count();
        let sign = Sign::from_parity(s + n * n.saturating_sub(1) / 2);
        let commutation: Vec<serde_json::Value> = (0..n)
            .map(|i| {
                let e = CliffordElement::generator(&q, i);
                json!({
                    "generator": format!("e{}", i + 1),
                    "relation": if z.commutes_with(&e) { "commutes" } else { "anticommutes" },
                })
            })
            .collect();
        Ok(json!({
            "form": q.to_string(),
            "sym": sigma.to_string(),
            "z": z.to_string(),
            "z_squared": z2.to_string(),
            "signed_disc": disc.to_string(),
            "square_matches_disc": z2 == CliffordElement::scalar(&q, disc),
            "involution_of_z": jz.to_string(),
            "involution_sign": sign.as_i32(),
            "commutation": commutation,
        }))
    };
    match inner() {
        Ok(v) => v.to_string(),
        Err(e) => err_json(e),
    }
}

/// Classify the induced involution on `C(q)` and compare with the trace rule.
#[wasm_bindgen]
pub fn involution_type(form: &str, sym: &str) -> String {
    let inner = || -> Result<serde_json::Value, String> {
        let q = parse_form(form)?;
        if q.dim() > 8 {
            return Err("keep the dimension at 8 or below for the demo".into());
        }
        let sigma = OrthSymmetry::parse(sym, q.dim()).map_err(|e| e.to_string())?;
        let alg = cliffinv::from_clifford(&q, &sigma).map_err(|e| e.to_string())?;
        let class = alg.classify().map_err(|e| e.to_string())?;
        let predicted = if q.dim() % 2 == 0 {
            Some(predict_type(q.dim(), sigma.minus_count()).map_err(|e| e.to_string())?)
        } else {
            None
        };
        Ok(json!({
            "form": q.to_string(),
            "sym": sigma.to_string(),
            "kind": format!("{:?}", class.kind).to_lowercase(),
            "type": class.itype.to_string(),
            "sym_dim": class.sym_dim,
            "degree": class.degree,
            "predicted": predicted.map(|t| t.to_string()),
            "trace": q.dim() as i64 - 2 * sigma.minus_count() as i64,
        }))
    };
    match inner() {
        Ok(v) => v.to_string(),
        Err(e) => err_json(e),
    }
}

/// The full type table over `(n, s)` for even `n` up to `n_max`.
#[wasm_bindgen]
pub fn type_grid(n_max: usize) -> String {
    let n_max = n_max.clamp(2, 16);
    let mut rows = Vec::new();
    for n in (2..=n_max).step_by(2) {
        let mut cells = Vec::new();
        for s in 0..=n {
            let t = predict_type(n, s).expect("n is even and s <= n");
            cells.push(json!({
                "s": s,
                "trace": n as i64 - 2 * s as i64,
                "type": t.to_string(),
            }));
        }
        rows.push(json!({ "n": n, "cells": cells }));
    }
    json!({ "rows": rows }).to_string()
}

/// Realize a small tensor product of quaternion algebras with involution as
/// a single Clifford model, reporting the normalized symmetry and the chain.
#[wasm_bindgen]
pub fn synthesize(factors: &str) -> String {
    let inner = || -> Result<serde_json::Value, String> {
        let mut parsed = Vec::new();
        for (i, piece) in factors.split(';').enumerate() {
            let parts: Vec<&str> = piece.split(',').collect();
            if parts.len() != 3 {
                return Err(format!("factor {}: expected `a,b,mode`", i + 1));
            }
            let invkind = match parts[2].trim() {
                "canonical" | "c" => QuaternionInvolution::Canonical,
                "orthogonal" | "o" => QuaternionInvolution::OrthogonalUv,
                other => return Err(format!("unknown mode `{other}`")),
            };
            parsed.push(QuatFactor {
                a: FieldScalar::parse(parts[0]).map_err(|e| e.to_string())?,
                b: FieldScalar::parse(parts[1]).map_err(|e| e.to_string())?,
                invkind,
            });
        }
        if parsed.len() > 3 {
            return Err("keep the demo at 3 factors or fewer".into());
        }
        let out = synthesize_multiquaternion(&parsed).map_err(|e| e.to_string())?;
        Ok(json!({
            "form": out.form.to_string(),
            "sym": out.symmetry.to_string(),
            "type": out.classification.itype.to_string(),
            "verified": out.chain.verified(),
            "steps": out.chain.steps().iter().map(|s| json!({
                "description": s.description,
                "verified": s.cert.verified(),
            })).collect::<Vec<_>>(),
            "alternate": out.alternate.as_ref().map(|(f, s, ch)| json!({
                "form": f.to_string(),
                "sym": s.to_string(),
                "verified": ch.verified(),
            })),
        }))
    };
    match inner() {
        Ok(v) => v.to_string(),
        Err(e) => err_json(e),
    }
}
