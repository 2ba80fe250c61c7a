//! Command line front end. Every subcommand reads JSON input files, runs
//! one check or construction from the library, and emits a certificate
//! that can be re-derived byte for byte: same inputs, same flags, same
//! bytes. Certificates carry the tool version, the resolved caps, a
//! sha256 of every file read, the verdict, and enough witness data to
//! re-check the claim; they never carry timestamps.
//!
//! Exit codes: 0 the verdict holds or the object was constructed, 1 the
//! verdict fails and the certificate names a witness, 2 the step budget
//! ran out before a verdict, 3 an input failed to parse or validate.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use difib_core::bundle::{
    build_tcp, classify, enumerate_twistings, normalize_atlas, regularize, tautological_atlas,
    transformation_elements, twisting_classes, twisting_equivalent, wbar, Atlas, BundleError,
    GroupAction, TwistingFunction,
};
use difib_core::diagram::{compute_basis, Diagram, DiagramMap};
use difib_core::io::{
    components_doc, diagram_doc, load_bundle, load_diagram, load_diagram_map, load_diagram_raw,
    load_group, presentation_doc, twisting_doc, BundleInput, FileRegistry, IoError,
};
use difib_core::minimal::{extract_minimal, MinimalError};
use difib_core::simplicial::is_kan_fibration_upto;
use difib_core::{Budget, SearchOutcome};

#[derive(Parser)]
#[command(
    name = "difib",
    version,
    about = "Checks and constructions for diagrams of truncated simplicial sets"
)]
struct Cli {
    /// Certificate format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Also write the certificate to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check that a diagram file is functorial and levelwise simplicial.
    ValidateDiagram { input: PathBuf },
    /// Compute a free basis of a diagram, or refute freeness.
    Basis {
        input: PathBuf,
        /// Step budget for the decomposition search.
        #[arg(long)]
        budget: u64,
    },
    /// Check the horn lifting property of a diagram map up to a dimension.
    FibrationCheck {
        input: PathBuf,
        /// Largest simplex dimension to examine.
        #[arg(long)]
        dim: usize,
        /// Step budget for the lift searches.
        #[arg(long)]
        budget: u64,
    },
    /// Extract and certify a minimal model of a fibration.
    MinimalModel {
        input: PathBuf,
        /// Dimension cap of the model.
        #[arg(long)]
        dim: usize,
        /// Step budget shared by every subsearch.
        #[arg(long)]
        budget: u64,
    },
    /// Build the twisted cartesian product of a bundle file.
    TcpBuild { input: PathBuf },
    /// Check the face and degeneracy identities of a declared twisting.
    TwistingVerify { input: PathBuf },
    /// Enumerate all twistings on the base and group them up to equivalence.
    TwistingClassify {
        input: PathBuf,
        /// Truncation to classify at.
        #[arg(long)]
        dim: usize,
        /// Step budget for the equivalence searches.
        #[arg(long)]
        budget: u64,
    },
    /// Build the classifying complex of a simplicial group.
    Wbar {
        input: PathBuf,
        /// Truncation of the complex.
        #[arg(long)]
        dim: usize,
    },
    /// Rebuild the degenerate charts of the bundle's atlas.
    AtlasNormalize { input: PathBuf },
    /// Regularize the bundle's atlas and read off its twisting.
    AtlasRegularize {
        input: PathBuf,
        /// Step budget for the rewrite and the equivalence check.
        #[arg(long)]
        budget: u64,
    },
    /// Match twisting classes with homotopy classes of classifying maps.
    ClassifyBundles {
        input: PathBuf,
        /// Truncation to classify at.
        #[arg(long)]
        dim: usize,
        /// Step budget shared by both sides.
        #[arg(long)]
        budget: u64,
    },
}

impl Cmd {
    fn name(&self) -> &'static str {
        match self {
            Cmd::ValidateDiagram { .. } => "validate-diagram",
            Cmd::Basis { .. } => "basis",
            Cmd::FibrationCheck { .. } => "fibration-check",
            Cmd::MinimalModel { .. } => "minimal-model",
            Cmd::TcpBuild { .. } => "tcp-build",
            Cmd::TwistingVerify { .. } => "twisting-verify",
            Cmd::TwistingClassify { .. } => "twisting-classify",
            Cmd::Wbar { .. } => "wbar",
            Cmd::AtlasNormalize { .. } => "atlas-normalize",
            Cmd::AtlasRegularize { .. } => "atlas-regularize",
            Cmd::ClassifyBundles { .. } => "classify-bundles",
        }
    }

    fn caps(&self) -> Value {
        match self {
            Cmd::ValidateDiagram { .. }
            | Cmd::TcpBuild { .. }
            | Cmd::TwistingVerify { .. }
            | Cmd::AtlasNormalize { .. } => json!({}),
            Cmd::Basis { budget, .. } | Cmd::AtlasRegularize { budget, .. } => {
                json!({ "budget": budget })
            }
            Cmd::Wbar { dim, .. } => json!({ "dim": dim }),
            Cmd::FibrationCheck { dim, budget, .. }
            | Cmd::MinimalModel { dim, budget, .. }
            | Cmd::TwistingClassify { dim, budget, .. }
            | Cmd::ClassifyBundles { dim, budget, .. } => {
                json!({ "dim": dim, "budget": budget })
            }
        }
    }
}

/// A finished run: exit code, one line verdict, witness details.
struct Done {
    exit: u8,
    verdict: String,
    details: Value,
}

fn done(exit: u8, verdict: impl Into<String>, details: Value) -> Done {
    Done { exit, verdict: verdict.into(), details }
}

fn bad_input(msg: impl Into<String>) -> Done {
    done(3, "input invalid", json!({ "error": msg.into() }))
}

fn out_of_budget(details: Value) -> Done {
    done(2, "budget exhausted before a verdict", details)
}

impl From<IoError> for Done {
    fn from(e: IoError) -> Self {
        bad_input(e.to_string())
    }
}

/// Errors raised while assembling the objects a command runs on: the
/// declared ingredients do not fit together, so the input is at fault.
fn construction_err(e: BundleError) -> Done {
    match e {
        BundleError::Budget => out_of_budget(json!({})),
        other => bad_input(other.to_string()),
    }
}

/// Errors raised while checking an already assembled atlas: chart solving
/// and group membership failures are verdicts, not input problems.
fn atlas_err(e: BundleError) -> Done {
    match e {
        BundleError::Budget => out_of_budget(json!({})),
        BundleError::Mismatch | BundleError::Truncation { .. } => bad_input(e.to_string()),
        other => done(1, "atlas check failed", json!({ "witness": other.to_string() })),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut reg = FileRegistry::new();
    let outcome = match run(&cli.command, &mut reg) {
        Ok(d) | Err(d) => d,
    };
    let cert = json!({
        "tool": { "name": "difib", "version": env!("CARGO_PKG_VERSION") },
        "command": cli.command.name(),
        "caps": cli.command.caps(),
        "inputs": reg.hashes,
        "verdict": outcome.verdict,
        "details": outcome.details,
    });
    let rendered = match cli.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&cert).expect("certificate serializes");
            s.push('\n');
            s
        }
        Format::Text => render_text(&cert),
    };
    print!("{rendered}");
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, &rendered) {
            eprintln!("cannot write {}: {e}", path.display());
            return ExitCode::from(3);
        }
    }
    ExitCode::from(outcome.exit)
}

fn render_text(cert: &Value) -> String {
    let mut s = String::new();
    s.push_str(&format!("command: {}\n", cert["command"].as_str().unwrap_or("")));
    s.push_str(&format!("verdict: {}\n", cert["verdict"].as_str().unwrap_or("")));
    if let Some(inputs) = cert["inputs"].as_object() {
        for (path, hash) in inputs {
            s.push_str(&format!("input: {path} sha256:{}\n", hash.as_str().unwrap_or("")));
        }
    }
    s.push_str("details: ");
    s.push_str(&serde_json::to_string_pretty(&cert["details"]).expect("details serialize"));
    s.push('\n');
    s
}

fn run(cmd: &Cmd, reg: &mut FileRegistry) -> Result<Done, Done> {
    match cmd {
        Cmd::ValidateDiagram { input } => {
            let d = load_diagram_raw(input, reg)?;
            match d.validate() {
                Ok(()) => Ok(done(
                    0,
                    "diagram is functorial and levelwise simplicial",
                    json!({
                        "objects": d.cat.object_count(),
                        "morphisms": d.cat.morphism_count(),
                        "generator_counts": generator_counts(&d),
                    }),
                )),
                Err(e) => Ok(done(
                    1,
                    "diagram fails validation",
                    json!({ "witness": e.to_string() }),
                )),
            }
        }
        Cmd::Basis { input, budget } => {
            let d = load_diagram(input, reg)?;
            let mut b = Budget::limited(*budget);
            match compute_basis(&d, &mut b) {
                SearchOutcome::Found(basis) => {
                    let cells: Vec<Value> = basis
                        .cells()
                        .into_iter()
                        .map(|os| {
                            json!({
                                "object": d.cat.object_name(os.obj),
                                "simplex": d.value(os.obj).display_ref(&os.simplex),
                            })
                        })
                        .collect();
                    Ok(done(
                        0,
                        "diagram is free on the listed basis",
                        json!({ "cells": cells, "steps_used": b.used() }),
                    ))
                }
                SearchOutcome::Refuted => Ok(done(
                    1,
                    "diagram is not free",
                    json!({ "steps_used": b.used() }),
                )),
                SearchOutcome::Exhausted => Ok(out_of_budget(json!({ "steps_used": b.used() }))),
            }
        }
        Cmd::FibrationCheck { input, dim, budget } => {
            let p = load_diagram_map(input, reg)?;
            let mut b = Budget::limited(*budget);
            let mut instances = 0u64;
            let mut dim_checked = usize::MAX;
            for (c, comp) in p.components.iter().enumerate() {
                let r = match is_kan_fibration_upto(comp, *dim, &mut b) {
                    Ok(r) => r,
                    Err(_) => {
                        return Ok(out_of_budget(json!({
                            "instances": instances,
                            "steps_used": b.used(),
                        })))
                    }
                };
                instances += r.instances;
                dim_checked = dim_checked.min(r.dim_checked);
                if let Some(f) = r.failure {
                    let faces: Vec<Value> = f
                        .faces
                        .iter()
                        .map(|o| match o {
                            Some(r) => json!(comp.source.display_ref(r)),
                            None => Value::Null,
                        })
                        .collect();
                    return Ok(done(
                        1,
                        "a horn over a base filler has no lift",
                        json!({
                            "object": p.source.cat.object_name(c),
                            "dim": f.n,
                            "horn": f.k,
                            "faces": faces,
                            "base_filler": comp.target.display_ref(&f.base_filler),
                        }),
                    ));
                }
            }
            if dim_checked == usize::MAX {
                dim_checked = 0;
            }
            Ok(done(
                0,
                "every horn lifting problem has a solution",
                json!({
                    "dim_checked": dim_checked,
                    "instances": instances,
                    "steps_used": b.used(),
                }),
            ))
        }
        Cmd::MinimalModel { input, dim, budget } => {
            let p = load_diagram_map(input, reg)?;
            let mut b = Budget::limited(*budget);
            let model = match extract_minimal(&p, *dim, &mut b) {
                Ok(m) => m,
                Err(MinimalError::Exhausted(stage)) => {
                    return Ok(out_of_budget(json!({ "stage": stage, "steps_used": b.used() })))
                }
                Err(e @ MinimalError::Truncation { .. }) => return Err(bad_input(e.to_string())),
                Err(e) => {
                    return Ok(done(
                        1,
                        "no certified minimal model",
                        json!({ "witness": e.to_string() }),
                    ))
                }
            };
            if let Err(e) = model.validate() {
                return Ok(done(
                    1,
                    "assembled model failed re-validation",
                    json!({ "witness": e.to_string() }),
                ));
            }
            let rep = &model.report;
            let cert = &rep.certification;
            let ambient = &model.total_projection.source;
            let selected: Vec<Value> = rep
                .selected
                .iter()
                .map(|os| {
                    json!({
                        "object": ambient.cat.object_name(os.obj),
                        "simplex": ambient.value(os.obj).display_ref(&os.simplex),
                    })
                })
                .collect();
            let details = json!({
                "dim_cap": rep.dim_cap,
                "ambient_basis": rep.basis_size,
                "selected": selected,
                "retracted": rep.retracted,
                "unknown_pairs": rep.unknown_pairs,
                "minimality": cert.verdict(),
                "model": diagram_doc(&model.sub.diagram),
                "steps_used": b.used(),
            });
            if !cert.violations.is_empty() {
                Ok(done(1, "extracted model failed the independent minimality check", details))
            } else if !cert.unknown.is_empty() || rep.unknown_pairs > 0 {
                Ok(out_of_budget(details))
            } else {
                Ok(done(0, "minimal model extracted and certified", details))
            }
        }
        Cmd::TcpBuild { input } => {
            let bundle = load_bundle(input, reg)?;
            let (_, action, t) = bundle_tcp_parts(&bundle)?;
            let tcp = build_tcp(&t, &action).map_err(construction_err)?;
            Ok(done(
                0,
                "twisted cartesian product constructed",
                json!({
                    "total": diagram_doc(&tcp.total),
                    "projection": components_doc(&tcp.projection),
                }),
            ))
        }
        Cmd::TwistingVerify { input } => {
            let bundle = load_bundle(input, reg)?;
            let values = bundle.raw_twisting()?;
            match values.build() {
                Ok(t) => Ok(done(
                    0,
                    "twisting satisfies all face and degeneracy identities",
                    json!({ "twisting": twisting_doc(&t) }),
                )),
                Err(BundleError::Twisting { family, simplex }) => Ok(done(
                    1,
                    "a twisting identity fails",
                    json!({ "family": family, "simplex": simplex }),
                )),
                Err(e) => Err(bad_input(e.to_string())),
            }
        }
        Cmd::TwistingClassify { input, dim, budget } => {
            let bundle = load_bundle(input, reg)?;
            let declared = bundle.need_base()?;
            let group = bundle.need_group()?;
            if declared.truncation() < *dim {
                return Err(bad_input(format!(
                    "base truncated at {}, need {dim}",
                    declared.truncation()
                )));
            }
            if group.truncation() + 1 < *dim {
                return Err(bad_input(format!(
                    "group truncated at {}, need {}",
                    group.truncation(),
                    dim.saturating_sub(1)
                )));
            }
            let base = if declared.truncation() == *dim {
                declared.clone()
            } else {
                Arc::new(declared.truncate(*dim))
            };
            let mut b = Budget::limited(*budget);
            let all = match enumerate_twistings(&base, group, &mut b) {
                SearchOutcome::Found(v) => v,
                _ => return Ok(out_of_budget(json!({ "steps_used": b.used() }))),
            };
            let classes = match twisting_classes(&all, &mut b) {
                Ok(SearchOutcome::Found(c)) => c,
                Ok(_) => {
                    return Ok(out_of_budget(json!({
                        "twistings": all.len(),
                        "steps_used": b.used(),
                    })))
                }
                Err(e) => return Err(bad_input(e.to_string())),
            };
            let representatives: Vec<Value> =
                classes.iter().map(|c| twisting_doc(&all[c[0]])).collect();
            Ok(done(
                0,
                "twistings enumerated and grouped up to equivalence",
                json!({
                    "twistings": all.len(),
                    "classes": classes.len(),
                    "members": classes,
                    "representatives": representatives,
                    "steps_used": b.used(),
                }),
            ))
        }
        Cmd::Wbar { input, dim } => {
            let group = load_group(input, reg)?;
            let w = wbar(&group, *dim).map_err(construction_err)?;
            let t = match w.universal_twisting() {
                Ok(t) => t,
                Err(e) => {
                    return Ok(done(
                        1,
                        "classifying complex failed its self-check",
                        json!({ "witness": e.to_string() }),
                    ))
                }
            };
            Ok(done(
                0,
                "classifying complex constructed and self-checked",
                json!({
                    "simplex_counts": w.space.generator_counts(),
                    "space": presentation_doc(&w.space),
                    "universal_twisting": twisting_doc(&t),
                }),
            ))
        }
        Cmd::AtlasNormalize { input } => {
            let bundle = load_bundle(input, reg)?;
            let (atlas, _, _) = perturbed_atlas(&bundle)?;
            let was_normal = atlas.is_normal();
            let out = normalize_atlas(&atlas).map_err(atlas_err)?;
            let base = &atlas.base;
            let mut rebuilt = Vec::new();
            for n in 0..=base.truncation() {
                for v in base.simplices(n) {
                    if v.is_degenerate() && !out.chart(&v).same_assignment(atlas.chart(&v)) {
                        rebuilt.push(base.display_ref(&v));
                    }
                }
            }
            Ok(done(
                0,
                "atlas charts over degenerate base simplices rebuilt from below",
                json!({ "was_normal": was_normal, "charts_rebuilt": rebuilt }),
            ))
        }
        Cmd::AtlasRegularize { input, budget } => {
            let bundle = load_bundle(input, reg)?;
            let (atlas, action, declared) = perturbed_atlas(&bundle)?;
            let atlas =
                if atlas.is_normal() { atlas } else { normalize_atlas(&atlas).map_err(atlas_err)? };
            let elements = transformation_elements(&atlas, &action).map_err(atlas_err)?;
            let was_regular = elements.is_regular();
            let mut b = Budget::limited(*budget);
            let out = regularize(&atlas, &action, &mut b).map_err(atlas_err)?;
            let out_elements = transformation_elements(&out, &action).map_err(atlas_err)?;
            let recovered = out_elements.twisting(&atlas.base).map_err(atlas_err)?;
            let equivalent = match twisting_equivalent(&declared, &recovered, &mut b) {
                Ok(SearchOutcome::Found(_)) => true,
                Ok(SearchOutcome::Refuted) => false,
                Ok(SearchOutcome::Exhausted) => {
                    return Ok(out_of_budget(json!({
                        "recovered_twisting": twisting_doc(&recovered),
                        "steps_used": b.used(),
                    })))
                }
                Err(e) => return Ok(atlas_err(e)),
            };
            let details = json!({
                "was_regular": was_regular,
                "recovered_twisting": twisting_doc(&recovered),
                "equivalent_to_declared": equivalent,
                "steps_used": b.used(),
            });
            if equivalent {
                Ok(done(0, "atlas regularized; zeroth face elements form the recovered twisting", details))
            } else {
                Ok(done(1, "recovered twisting is not equivalent to the declared one", details))
            }
        }
        Cmd::ClassifyBundles { input, dim, budget } => {
            let bundle = load_bundle(input, reg)?;
            let base = bundle.need_base()?;
            let (group, action) = bundle.action_at(*dim)?;
            let mut b = Budget::limited(*budget);
            let r = match classify(base, &group, &action, *dim, &mut b) {
                Ok(r) => r,
                Err(BundleError::Budget) => {
                    return Ok(out_of_budget(json!({ "steps_used": b.used() })))
                }
                Err(
                    e @ (BundleError::TooLarge(_)
                    | BundleError::Truncation { .. }
                    | BundleError::Mismatch),
                ) => return Err(bad_input(e.to_string())),
                Err(e) => {
                    return Ok(done(
                        1,
                        "classification failed",
                        json!({ "witness": e.to_string() }),
                    ))
                }
            };
            let details = json!({
                "twistings": r.twisting_count,
                "twisting_classes": r.twisting_classes,
                "maps": r.map_count,
                "map_classes": r.map_classes,
                "assignment": r.assignment,
                "bijection": r.bijection,
                "steps_used": b.used(),
            });
            if r.bijection {
                Ok(done(
                    0,
                    "twisting classes match homotopy classes of classifying maps one to one",
                    details,
                ))
            } else {
                Ok(done(1, "the two classifications do not match", details))
            }
        }
    }
}

fn generator_counts(d: &Diagram) -> Value {
    let mut m = serde_json::Map::new();
    for o in 0..d.cat.object_count() {
        m.insert(d.cat.object_name(o).to_string(), json!(d.value(o).generator_counts()));
    }
    Value::Object(m)
}

/// The group, action and twisting of a bundle file, re-rooted onto the
/// action's own group so every later identity check compares like with
/// like. The twisting identity check runs here; bundle commands other
/// than twisting-verify treat its failure as an input problem.
fn bundle_tcp_parts(
    bundle: &BundleInput,
) -> Result<(Arc<difib_core::bundle::SimplicialGroup>, GroupAction, TwistingFunction), Done> {
    let base = bundle.need_base()?;
    let t = bundle.need_twisting()?;
    let (group, action) = bundle.action_at(base.truncation())?;
    let t = t.with_group(action.group.clone()).map_err(construction_err)?;
    Ok((group, action, t))
}

/// The tautological atlas of the bundle's twisted product, with any
/// declared perturbation applied: each named chart is precomposed with
/// the fibrewise action of the named group element.
fn perturbed_atlas(bundle: &BundleInput) -> Result<(Atlas, GroupAction, TwistingFunction), Done> {
    let (_, action, t) = bundle_tcp_parts(bundle)?;
    let tcp = build_tcp(&t, &action).map_err(construction_err)?;
    let atlas = tautological_atlas(&tcp).map_err(construction_err)?;
    if bundle.perturbation.is_empty() {
        return Ok((atlas, action, t));
    }
    let base = atlas.base.clone();
    let trunc = base.truncation();
    let mut charts: Vec<Vec<DiagramMap>> = (0..=trunc)
        .map(|n| base.simplices(n).iter().map(|v| atlas.chart(v).clone()).collect())
        .collect();
    for (v, &g) in &bundle.perturbation {
        let n = v.dim();
        let pos = base
            .simplices(n)
            .iter()
            .position(|x| x == v)
            .expect("perturbation refs checked at load");
        let rho = action.rho_endo(atlas.cylinder(n), n, g);
        charts[n][pos] = rho.then(&charts[n][pos]);
    }
    let atlas = Atlas::new(tcp.projection.clone(), action.space.clone(), charts)
        .map_err(construction_err)?;
    Ok((atlas, action, t))
}
