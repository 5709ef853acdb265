//! Command-line front end: parse forms, symmetries and factor lists, run any
//! engine operation or the full verification suite, and emit human-readable
//! text or versioned JSON reports. Exit status is 0 exactly when every check
//! in the report passed, 1 when some check failed, 2 on a domain error.

use clap::{Parser, Subcommand, ValueEnum};
use cliffinv::algebra::QuaternionInvolution;
use cliffinv::clifford::{parse_element, z_element, CliffordElement};
use cliffinv::field::{FieldDescriptor, FieldScalar};
use cliffinv::qspace::{OrthSymmetry, QuadForm};
use cliffinv::report::{Check, Report};
use cliffinv::structure::{
    compose_even, compose_full, decompose_even, decompose_full, even_reduce, predict_type,
    realize_quaternion, second_kind_realize, synthesize_multiquaternion, unitary_synthesize,
    CertChain, QuatFactor, RealizationMode,
};
use cliffinv::suite::suite_report;
use cliffinv::IsoCertificate;
use serde_json::json;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "cliffinv", version, about = "Exact Clifford algebras with involutions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit the versioned JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Also write the report to a file.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<std::path::PathBuf>,
    /// Seed for the randomized draws of `suite`.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Cap on the algebra dimension 2^n (raise to accept longer runtimes).
    #[arg(long, global = true, default_value_t = 256)]
    max_dim: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum InvolveKind {
    Sigma,
    Gamma,
    Reversion,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Symplectic,
    OrthogonalId,
    OrthogonalReflection,
}

#[derive(Subcommand)]
enum Command {
    /// Multiply two elements of C(V, q).
    Mul {
        #[arg(long, allow_hyphen_values = true)]
        form: String,
        #[arg(long, value_name = "ELEMENT", allow_hyphen_values = true)]
        x: String,
        #[arg(long, value_name = "ELEMENT", allow_hyphen_values = true)]
        y: String,
    },
    /// Apply an involution (induced, grade, or reversion) to an element.
    Involve {
        #[arg(long, allow_hyphen_values = true)]
        form: String,
        #[arg(long, allow_hyphen_values = true)]
        sym: Option<String>,
        #[arg(long, value_name = "ELEMENT", allow_hyphen_values = true)]
        x: String,
        #[arg(long, value_enum, default_value_t = InvolveKind::Sigma)]
        which: InvolveKind,
    },
    /// The adapted volume element: its square, involution image, and
    /// commutation with the generators.
    Z {
        #[arg(long, allow_hyphen_values = true)]
        form: String,
        #[arg(long, allow_hyphen_values = true)]
        sym: String,
    },
    /// Classify the induced involution on the full Clifford algebra.
    Type {
        #[arg(long, allow_hyphen_values = true)]
        form: String,
        #[arg(long, allow_hyphen_values = true)]
        sym: String,
    },
    /// Predict the involution type from the trace rule (n even).
    Predict {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        s: usize,
    },
    /// Realize a quaternion algebra with involution as a Clifford model.
    Realize {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, value_enum, default_value_t = Mode::Symplectic)]
        mode: Mode,
    },
    /// Split C(q _|_ q2) (even first form) or C0(q _|_ q2) (odd first form)
    /// into a tensor product, with a verified certificate.
    Decompose {
        #[arg(long, allow_hyphen_values = true)]
        form: String,
        #[arg(long, allow_hyphen_values = true)]
        sym: String,
        #[arg(long, allow_hyphen_values = true)]
        form2: String,
        #[arg(long, allow_hyphen_values = true)]
        sym2: String,
    },
    /// Combine a tensor product into a single (even) Clifford algebra.
    Compose {
        #[arg(long, allow_hyphen_values = true)]
        form: String,
        #[arg(long, allow_hyphen_values = true)]
        sym: String,
        #[arg(long, allow_hyphen_values = true)]
        form2: String,
        #[arg(long, allow_hyphen_values = true)]
        sym2: String,
    },
    /// Identify C0(q) with the Clifford algebra of the reduced form at a pivot.
    EvenReduce {
        #[arg(long, allow_hyphen_values = true)]
        form: String,
        #[arg(long, allow_hyphen_values = true)]
        sym: String,
        /// 1-based pivot coordinate.
        #[arg(long, default_value_t = 1)]
        pivot: usize,
    },
    /// Realize a tensor product of quaternion algebras with involution.
    Synth {
        /// Semicolon-separated factors `a,b,mode` with mode one of
        /// canonical | orthogonal-uv | orthogonal-wv.
        #[arg(long, allow_hyphen_values = true)]
        factors: String,
    },
    /// Realize a quaternion algebra over Q(sqrt(c)) with its unitary involution.
    SecondKind {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        c: String,
    },
    /// Realize a tensor of quaternions over Q(sqrt(c)) with unitary involution.
    UnitarySynth {
        /// Semicolon-separated factors `a,b`.
        #[arg(long, allow_hyphen_values = true)]
        factors: String,
        #[arg(long, allow_hyphen_values = true)]
        c: String,
    },
    /// Run the full verification battery.
    Suite,
}

fn parse_form_spec(text: &str) -> Result<QuadForm, String> {
    let mut scalars = Vec::new();
    for (i, piece) in text.split(',').enumerate() {
        let scalar = FieldScalar::parse(piece)
            .map_err(|e| format!("coefficient {}: {e}", i + 1))?;
        if scalar.is_zero() {
            return Err(format!("coefficient {} is zero: the form must be nondegenerate", i + 1));
        }
        scalars.push(scalar);
    }
    // Unify the field: lift rationals into the extension if one appears.
    let field = scalars
        .iter()
        .map(|s| s.field().clone())
        .find(|f| f.is_extension())
        .unwrap_or(FieldDescriptor::Rationals);
    let mut coerced = Vec::with_capacity(scalars.len());
    for (i, s) in scalars.iter().enumerate() {
        coerced.push(
            s.coerce_into(&field)
                .map_err(|_| format!("coefficient {} lives in a different extension", i + 1))?,
        );
    }
    QuadForm::new(field, coerced).map_err(|e| e.to_string())
}

fn parse_sym_spec(text: &str, n: usize) -> Result<OrthSymmetry, String> {
    OrthSymmetry::parse(text, n).map_err(|e| e.to_string())
}

fn parse_scalar(text: &str) -> Result<FieldScalar, String> {
    FieldScalar::parse(text).map_err(|e| e.to_string())
}

fn check_dim(dim: usize, max_dim: usize) -> Result<(), String> {
    if dim > max_dim {
        Err(format!(
            "algebra dimension {dim} exceeds --max-dim {max_dim}; raise the cap to accept the runtime"
        ))
    } else {
        Ok(())
    }
}

fn cert_checks(prefix: &str, cert: &IsoCertificate, checks: &mut Vec<Check>) {
    let named = [
        ("unital", &cert.checks.unital),
        ("multiplicative", &cert.checks.multiplicative),
        ("bijective", &cert.checks.bijective),
        ("involution-compatible", &cert.checks.involution_compatible),
    ];
    for (name, outcome) in named {
        let full = format!("{prefix}{name}");
        match outcome.witness() {
            None => checks.push(Check::pass(full)),
            Some(w) => checks.push(Check::fail(full, w)),
        }
    }
}

fn chain_checks(prefix: &str, chain: &CertChain, checks: &mut Vec<Check>) {
    for (i, step) in chain.steps().iter().enumerate() {
        let name = format!("{prefix}step-{}", i + 1);
        if step.cert.verified() {
            checks.push(Check::pass(name));
        } else {
            checks.push(Check::fail(name, step.description.clone()));
        }
    }
}

fn chain_json(chain: &CertChain, include_maps: bool) -> serde_json::Value {
    if include_maps {
        chain.to_json()
    } else {
        json!({
            "schema": "cert-chain/1",
            "steps": chain
                .steps()
                .iter()
                .map(|s| json!({
                    "description": s.description,
                    "source": s.cert.source.label(),
                    "target": s.cert.target.label(),
                    "verified": s.cert.verified(),
                }))
                .collect::<Vec<_>>(),
        })
    }
}

fn run(cli: &Cli) -> Result<Report, String> {
    let started = Instant::now();
    let mut report = match &cli.command {
        Command::Mul { form, x, y } => {
            let q = Arc::new(parse_form_spec(form)?);
            check_dim(1usize << q.dim(), cli.max_dim)?;
            let xe = parse_element(x, &q)?;
            let ye = parse_element(y, &q)?;
            let prod = xe.checked_mul(&ye).map_err(|e| e.to_string())?;
            let mut report = Report::new("mul");
            report.inputs = json!({"form": q.to_string(), "x": xe.to_string(), "y": ye.to_string()});
            report.outputs = json!({"product": prod.to_string()});
            report
        }
        Command::Involve { form, sym, x, which } => {
            let q = Arc::new(parse_form_spec(form)?);
            check_dim(1usize << q.dim(), cli.max_dim)?;
            let xe = parse_element(x, &q)?;
            let (name, image) = match which {
                InvolveKind::Gamma => ("gamma", xe.grade_involution()),
                InvolveKind::Reversion => ("reversion", xe.reversion()),
                InvolveKind::Sigma => {
                    let sym = sym
                        .as_deref()
                        .ok_or_else(|| "--sym is required for the induced involution".to_string())?;
                    let sigma = parse_sym_spec(sym, q.dim())?;
                    (
                        "induced",
                        xe.induced_involution(&sigma).map_err(|e| e.to_string())?,
                    )
                }
            };
            let twice = match which {
                InvolveKind::Gamma => image.grade_involution(),
                InvolveKind::Reversion => image.reversion(),
                InvolveKind::Sigma => {
                    let sigma = parse_sym_spec(sym.as_deref().unwrap(), q.dim())?;
                    image.induced_involution(&sigma).map_err(|e| e.to_string())?
                }
            };
            let mut report = Report::new("involve");
            report.inputs = json!({"form": q.to_string(), "x": xe.to_string(), "which": name});
            report.outputs = json!({"image": image.to_string()});
            report.checks.push(if twice == xe {
                Check::pass("involutive")
            } else {
                Check::fail("involutive", "applying the map twice does not return the input")
            });
            report
        }
        Command::Z { form, sym } => {
            let q = Arc::new(parse_form_spec(form)?);
            check_dim(1usize << q.dim(), cli.max_dim)?;
            let sigma = parse_sym_spec(sym, q.dim())?;
            let z = z_element(&sigma, &q);
            let z2 = z.checked_mul(&z).map_err(|e| e.to_string())?;
            let jz = z.induced_involution(&sigma).map_err(|e| e.to_string())?;
            let disc = q.signed_disc();
            let mut report = Report::new("z");
            let n = q.dim();
            let commutation: Vec<String> = (0..n)
                .map(|i| {
                    let e = CliffordElement::generator(&q, i);
                    let rel = if z.commutes_with(&e) {
                        "commutes"
                    } else if z.anticommutes_with(&e) {
                        "anticommutes"
                    } else {
                        "neither"
                    };
                    format!("e{}: {rel}", i + 1)
                })
                .collect();
            report.inputs = json!({"form": q.to_string(), "sym": sigma.to_string()});
            report.outputs = json!({
                "z": z.to_string(),
                "z_squared": z2.to_string(),
                "involution_of_z": jz.to_string(),
                "signed_disc": disc.to_string(),
                "commutation": commutation,
            });
            report.checks.push(
                if z2 == CliffordElement::scalar(&q, disc.clone()) {
                    Check::pass("z-squared-is-signed-disc")
                } else {
                    Check::fail("z-squared-is-signed-disc", format!("z^2 = {z2}"))
                },
            );
            let s = sigma.minus_count();
            let expected = match cliffinv::qspace::Sign::from_parity(s + n * (n.saturating_sub(1)) / 2) {
                cliffinv::qspace::Sign::Plus => z.clone(),
                cliffinv::qspace::Sign::Minus => z.neg(),
            };
            report.checks.push(if jz == expected {
                Check::pass("involution-sign")
            } else {
                Check::fail("involution-sign", format!("J(z) = {jz}"))
            });
            let parity_ok = (0..n).all(|i| {
                let e = CliffordElement::generator(&q, i);
                if n % 2 == 0 {
                    z.anticommutes_with(&e)
                } else {
                    z.commutes_with(&e)
                }
            });
            report.checks.push(if parity_ok {
                Check::pass("commutation-parity")
            } else {
                Check::fail("commutation-parity", "z does not (anti)commute as expected")
            });
            report
        }
        Command::Type { form, sym } => {
            let q = parse_form_spec(form)?;
            check_dim(1usize << q.dim(), cli.max_dim)?;
            let sigma = parse_sym_spec(sym, q.dim())?;
            let alg = cliffinv::from_clifford(&q, &sigma).map_err(|e| e.to_string())?;
            let class = alg.classify().map_err(|e| e.to_string())?;
            let mut report = Report::new("type");
            report.inputs = json!({"form": q.to_string(), "sym": sigma.to_string()});
            report.outputs = json!({
                "kind": format!("{:?}", class.kind).to_lowercase(),
                "type": class.itype.to_string(),
                "sym_dim": class.sym_dim,
                "degree": class.degree,
                "algebra": if cli.json { alg.to_json() } else { json!(alg.label()) },
            });
            if q.dim() % 2 == 0 {
                let predicted = predict_type(q.dim(), sigma.minus_count()).map_err(|e| e.to_string())?;
                report.checks.push(if predicted == class.itype {
                    Check::pass("matches-trace-rule")
                } else {
                    Check::fail(
                        "matches-trace-rule",
                        format!("predicted {predicted}, classified {}", class.itype),
                    )
                });
            }
            report
        }
        Command::Predict { n, s } => {
            let t = predict_type(*n, *s).map_err(|e| e.to_string())?;
            let mut report = Report::new("predict");
            report.inputs = json!({"n": n, "s": s});
            report.outputs = json!({"type": t.to_string(), "trace": *n as i64 - 2 * *s as i64});
            report
        }
        Command::Realize { a, b, mode } => {
            let a = parse_scalar(a)?;
            let b = parse_scalar(b)?;
            let mode = match mode {
                Mode::Symplectic => RealizationMode::Symplectic,
                Mode::OrthogonalId => RealizationMode::OrthogonalId,
                Mode::OrthogonalReflection => RealizationMode::OrthogonalReflection,
            };
            let r = realize_quaternion(&a, &b, mode).map_err(|e| e.to_string())?;
            let swap = cliffinv::structure::reflection_identity_swap(&a, &b).map_err(|e| e.to_string())?;
            let mut report = Report::new("realize");
            report.inputs = json!({"a": a.to_string(), "b": b.to_string(), "mode": format!("{mode:?}")});
            report.outputs = json!({
                "form": r.form.to_string(),
                "sym": r.symmetry.to_string(),
                "sym_dim": r.cert.target.symmetric_dim(),
                "certificate": if cli.json { r.cert.to_json() } else { json!(r.cert.verified()) },
                "reflection_identity_swap": json!({
                    "source_form": format!("<{},{}>", a, b),
                    "source_sym": "-+",
                    "target_form": swap.target_form.to_string(),
                    "target_sym": "++",
                }),
            });
            cert_checks("", &r.cert, &mut report.checks);
            report.checks.push(if swap.cert.verified() {
                Check::pass("reflection-identity-swap")
            } else {
                Check::fail("reflection-identity-swap", "swap certificate failed")
            });
            report
        }
        Command::Decompose { form, sym, form2, sym2 } => {
            let q1 = parse_form_spec(form)?;
            let s1 = parse_sym_spec(sym, q1.dim())?;
            let q2 = parse_form_spec(form2)?;
            let s2 = parse_sym_spec(sym2, q2.dim())?;
            check_dim(1usize << (q1.dim() + q2.dim()), cli.max_dim)?;
            let mut report = Report::new("decompose");
            report.inputs = json!({
                "form": q1.to_string(), "sym": s1.to_string(),
                "form2": q2.to_string(), "sym2": s2.to_string(),
            });
            let (cert, second_form, second_sym, disc_sign_ok, variant) = if q1.dim() % 2 == 0 {
                let out = decompose_full(&q1, &s1, &q2, &s2).map_err(|e| e.to_string())?;
                (out.cert, out.second_form, out.second_symmetry, out.disc_sign_consistent, "full")
            } else {
                let out = decompose_even(&q1, &s1, &q2, &s2).map_err(|e| e.to_string())?;
                (out.cert, out.second_form, out.second_symmetry, out.disc_sign_consistent, "even")
            };
            report.outputs = json!({
                "variant": variant,
                "second_form": second_form.to_string(),
                "second_sym": second_sym.to_string(),
                "source": cert.source.label(),
                "target": cert.target.label(),
                "certificate": if cli.json { cert.to_json() } else { json!(cert.verified()) },
            });
            cert_checks("", &cert, &mut report.checks);
            report.checks.push(if disc_sign_ok {
                Check::pass("discriminant-sign-crosscheck")
            } else {
                Check::fail("discriminant-sign-crosscheck", "case sign differs")
            });
            report
        }
        Command::Compose { form, sym, form2, sym2 } => {
            let q1 = parse_form_spec(form)?;
            let s1 = parse_sym_spec(sym, q1.dim())?;
            let q2 = parse_form_spec(form2)?;
            let s2 = parse_sym_spec(sym2, q2.dim())?;
            check_dim(1usize << (q1.dim() + q2.dim()), cli.max_dim)?;
            let mut report = Report::new("compose");
            report.inputs = json!({
                "form": q1.to_string(), "sym": s1.to_string(),
                "form2": q2.to_string(), "sym2": s2.to_string(),
            });
            let (cert, cform, csym, variant) = if q1.dim() % 2 == 0 {
                let out = compose_full(&q1, &s1, &q2, &s2).map_err(|e| e.to_string())?;
                (out.cert, out.combined_form, out.combined_symmetry, "full")
            } else {
                let out = compose_even(&q1, &s1, &q2, &s2).map_err(|e| e.to_string())?;
                (out.cert, out.combined_form, out.combined_symmetry, "even")
            };
            report.outputs = json!({
                "variant": variant,
                "combined_form": cform.to_string(),
                "combined_sym": csym.to_string(),
                "source": cert.source.label(),
                "target": cert.target.label(),
                "certificate": if cli.json { cert.to_json() } else { json!(cert.verified()) },
            });
            cert_checks("", &cert, &mut report.checks);
            report
        }
        Command::EvenReduce { form, sym, pivot } => {
            let q = parse_form_spec(form)?;
            check_dim(1usize << q.dim(), cli.max_dim)?;
            let sigma = parse_sym_spec(sym, q.dim())?;
            if *pivot == 0 || *pivot > q.dim() {
                return Err(format!("--pivot must be between 1 and {}", q.dim()));
            }
            let out = even_reduce(&q, &sigma, pivot - 1).map_err(|e| e.to_string())?;
            let mut report = Report::new("even-reduce");
            report.inputs = json!({"form": q.to_string(), "sym": sigma.to_string(), "pivot": pivot});
            report.outputs = json!({
                "reduced_form": out.reduced_form.to_string(),
                "reduced_sym": out.reduced_symmetry.to_string(),
                "source": out.cert.source.label(),
                "target": out.cert.target.label(),
                "certificate": if cli.json { out.cert.to_json() } else { json!(out.cert.verified()) },
            });
            cert_checks("", &out.cert, &mut report.checks);
            report.checks.push(if out.forward.verified() {
                Check::pass("pivot-map-bijective")
            } else {
                Check::fail("pivot-map-bijective", "forward generator map fails")
            });
            report
        }
        Command::Synth { factors } => {
            let parsed = parse_factors(factors)?;
            check_dim(1usize << (2 * parsed.len()), cli.max_dim)?;
            let out = synthesize_multiquaternion(&parsed).map_err(|e| e.to_string())?;
            let mut report = Report::new("synth");
            report.inputs = json!({"factors": factors});
            report.outputs = json!({
                "form": out.form.to_string(),
                "sym": out.symmetry.to_string(),
                "type": out.classification.itype.to_string(),
                "alternate": out.alternate.as_ref().map(|(f, s, _)| json!({
                    "form": f.to_string(), "sym": s.to_string(),
                })),
                "chain": chain_json(&out.chain, cli.json),
            });
            chain_checks("chain-", &out.chain, &mut report.checks);
            if let Some((_, _, achain)) = &out.alternate {
                chain_checks("alternate-", achain, &mut report.checks);
            }
            report.checks.push(if out.types_match {
                Check::pass("type-matches-tensor-model")
            } else {
                Check::fail("type-matches-tensor-model", "classification differs")
            });
            report
        }
        Command::SecondKind { a, b, c } => {
            let a = parse_scalar(a)?;
            let b = parse_scalar(b)?;
            let c = parse_scalar(c)?;
            let out = second_kind_realize(&a, &b, &c).map_err(|e| e.to_string())?;
            let mut report = Report::new("second-kind");
            report.inputs = json!({"a": a.to_string(), "b": b.to_string(), "c": c.to_string()});
            report.outputs = json!({
                "d": out.d.to_string(),
                "e": out.e.to_string(),
                "realized_form": out.realized_form.to_string(),
                "realized_sym": out.realized_symmetry.to_string(),
                "chain": chain_json(&out.chain, cli.json),
            });
            chain_checks("chain-", &out.chain, &mut report.checks);
            for stage in &out.stages {
                let name = format!("unitary[{}]", stage.description);
                report.checks.push(if stage.unitary && stage.center_matches {
                    Check::pass(name)
                } else {
                    Check::fail(name, "stage is not unitary with the expected center")
                });
            }
            report
        }
        Command::UnitarySynth { factors, c } => {
            let pairs = parse_pairs(factors)?;
            let c = parse_scalar(c)?;
            check_dim(1usize << (2 * pairs.len() + 1), cli.max_dim)?;
            let out = unitary_synthesize(&pairs, &c).map_err(|e| e.to_string())?;
            let mut report = Report::new("unitary-synth");
            report.inputs = json!({"factors": factors, "c": c.to_string()});
            report.outputs = json!({
                "odd_form": out.odd_form.to_string(),
                "odd_sym": out.odd_symmetry.to_string(),
                "even_model": out.even_model.as_ref().map(|(f, s, _)| json!({
                    "form": f.to_string(), "sym": s.to_string(),
                })),
                "even_reflection_model": out.even_reflection_model.as_ref().map(|(f, s, _)| json!({
                    "form": f.to_string(), "sym": s.to_string(),
                })),
                "chain": chain_json(&out.odd_chain, cli.json),
            });
            chain_checks("chain-", &out.odd_chain, &mut report.checks);
            report.checks.push(if out.disc_nontrivial {
                Check::pass("odd-form-disc-nontrivial")
            } else {
                Check::fail("odd-form-disc-nontrivial", "discriminant is a square")
            });
            report.checks.push(if out.disc_matches_extension {
                Check::pass("odd-form-disc-matches-extension")
            } else {
                Check::fail("odd-form-disc-matches-extension", "discriminant class differs")
            });
            if let Some((_, _, chain)) = &out.even_model {
                chain_checks("even-model-", chain, &mut report.checks);
            }
            if let Some((_, _, chain)) = &out.even_reflection_model {
                chain_checks("even-model-", chain, &mut report.checks);
            }
            report
        }
        Command::Suite => suite_report(cli.seed),
    };
    report.seed = cli.seed;
    if report.elapsed_ms == 0 {
        report.elapsed_ms = started.elapsed().as_millis() as u64;
    }
    Ok(report)
}

fn parse_quat_mode(text: &str) -> Result<QuaternionInvolution, String> {
    match text.trim() {
        "canonical" | "c" | "symplectic" => Ok(QuaternionInvolution::Canonical),
        "orthogonal-uv" | "uv" | "o" => Ok(QuaternionInvolution::OrthogonalUv),
        "orthogonal-wv" | "wv" => Ok(QuaternionInvolution::OrthogonalWv),
        other => Err(format!("unknown involution mode `{other}`")),
    }
}

fn parse_factors(text: &str) -> Result<Vec<QuatFactor>, String> {
    let mut out = Vec::new();
    for (i, piece) in text.split(';').enumerate() {
        let parts: Vec<&str> = piece.split(',').collect();
        if parts.len() != 3 {
            return Err(format!("factor {}: expected `a,b,mode`", i + 1));
        }
        out.push(QuatFactor {
            a: parse_scalar(parts[0])?,
            b: parse_scalar(parts[1])?,
            invkind: parse_quat_mode(parts[2])?,
        });
    }
    Ok(out)
}

fn parse_pairs(text: &str) -> Result<Vec<(FieldScalar, FieldScalar)>, String> {
    let mut out = Vec::new();
    for (i, piece) in text.split(';').enumerate() {
        let parts: Vec<&str> = piece.split(',').collect();
        if parts.len() != 2 {
            return Err(format!("factor {}: expected `a,b`", i + 1));
        }
        out.push((parse_scalar(parts[0])?, parse_scalar(parts[1])?));
    }
    Ok(out)
}

fn print_text(report: &Report) {
    println!("== {} ==", report.command);
    if let Some(obj) = report.inputs.as_object() {
        for (k, v) in obj {
            println!("input  {k} = {}", flat(v));
        }
    }
    if let Some(obj) = report.outputs.as_object() {
        for (k, v) in obj {
            println!("output {k} = {}", flat(v));
        }
    }
    for check in &report.checks {
        match &check.witness {
            None => println!("check  {:<40} {}", check.name, check.status),
            Some(w) => println!("check  {:<40} {} ({w})", check.name, check.status),
        }
    }
    println!(
        "result {} ({} ms)",
        if report.passed() { "PASS" } else { "FAIL" },
        report.elapsed_ms
    );
}

fn flat(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let rendered = if cli.json {
                report.to_json_string()
            } else {
                String::new()
            };
            if cli.json {
                println!("{rendered}");
            } else {
                print_text(&report);
            }
            if let Some(path) = &cli.out {
                let payload = if cli.json {
                    rendered
                } else {
                    report.to_json_string()
                };
                if let Err(e) = std::fs::write(path, payload) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
