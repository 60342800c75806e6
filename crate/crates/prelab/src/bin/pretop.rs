//! Command-line front door: verify structure documents, derive
//! constructions, run counterexample hunts, and pretty-print certificates.
//!
//! Exit codes: 0 every axiom passes, 2 an axiom or replay fails (the
//! report lists witnesses), 1 an I/O or format problem.

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use prelab::groups;
use prelab::interchange::{self, Body, Envelope, InterchangeError, Loaded, Structure};
use prelab::metrics;
use prelab::preprox::{self, PreProximity};
use prelab::pretop::{self, PreTopology, SeparationProfile};
use prelab::preunif::{self, AxiomReport, AxiomWitness, PreUniformity, UniversalOutcome};
use prelab::relcore::{Relation, Subset};
use prelab::search::{self, HuntOutcome, SearchKind, SearchSpec};

#[derive(Parser)]
#[command(
    name = "pretop",
    version,
    about = "Finite-model laboratory for pre-uniform spaces",
    long_about = "Verify the axioms of finite pre-topologies, entourage families, \
pseudometrics, nearness structures, and pre-topological groups; derive the induced \
constructions; hunt for counterexamples with replayable certificates."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Check every axiom of a structure document and report witnesses
    Verify {
        /// Structure document (or certificate / exhaustion record)
        file: PathBuf,
        /// Expected document kind; a mismatch is a format error
        #[arg(long)]
        kind: Option<String>,
        /// Write the report here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Apply a construction and write the derived document
    ///
    /// Constructions: tau, delta, mu_delta, coreflection,
    /// chain-pseudometric, product (two files), sup (any number of files),
    /// universal, separation-profile.
    Derive {
        construction: String,
        /// Input document(s)
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Basis-size bound for `universal` (default 4)
        #[arg(long)]
        bound: Option<usize>,
        /// Write the derived document here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run a hunt from a search-spec file (kind, bounds, target expression)
    Search {
        /// JSON spec: {"kind", "carrier_bound", "size_bound", "target"}
        specfile: PathBuf,
        /// Override the spec's carrier bound
        #[arg(long)]
        bound: Option<usize>,
        /// Run one contiguous shard of the canonical order, e.g. 0/3
        #[arg(long)]
        shard: Option<String>,
        /// Write the certificate or exhaustion record here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        /// json emits the canonical record; text pretty-prints it
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Pretty-print a certificate, exhaustion record, or structure; replay certificates
    Explain {
        file: PathBuf,
    },
}

/// A failed command: the exit code plus the message for stderr.
struct Failure {
    exit: u8,
    message: String,
}

impl Failure {
    fn format(message: impl Into<String>) -> Failure {
        Failure { exit: 1, message: message.into() }
    }

    fn axiom(message: impl Into<String>) -> Failure {
        Failure { exit: 2, message: message.into() }
    }
}

type CliResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Verify { file, kind, out, format } => cmd_verify(&file, kind.as_deref(), out.as_deref(), format),
        Command::Derive { construction, files, bound, out, format } => {
            cmd_derive(&construction, &files, bound, out.as_deref(), format)
        }
        Command::Search { specfile, bound, shard, out, format } => {
            cmd_search(&specfile, bound, shard.as_deref(), out.as_deref(), format)
        }
        Command::Explain { file } => cmd_explain(&file),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("pretop: {}", f.message);
            ExitCode::from(f.exit)
        }
    }
}

// ---- shared plumbing ----

fn read_to_string(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::format(format!("cannot read {}: {e}", path.display())))
}

fn parse_envelope(path: &Path, text: &str) -> Result<Envelope, Failure> {
    serde_json::from_str(text)
        .map_err(|e| Failure::format(format!("{}: invalid document: {e}", path.display())))
}

/// Decodes a structure document; format problems exit 1, constructor-level
/// axiom failures exit 2 with the witness in the message.
fn load_structure(path: &Path, env: &Envelope) -> Result<Loaded, Failure> {
    interchange::load(env).map_err(|e| from_interchange(path, e))
}

fn from_interchange(path: &Path, e: InterchangeError) -> Failure {
    if e.is_format() {
        Failure::format(format!("{}: {e}", path.display()))
    } else {
        Failure::axiom(format!("{}: axiom failure at load: {e}", path.display()))
    }
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::format(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn fmt_subset(s: &Subset, labels: &[String]) -> String {
    let names: Vec<&str> = s.points().map(|p| labels[p].as_str()).collect();
    format!("{{{}}}", names.join(","))
}

fn fmt_relation(r: &Relation, labels: &[String]) -> String {
    let pairs: Vec<String> = r
        .pairs()
        .map(|(x, y)| format!("({},{})", labels[x], labels[y]))
        .collect();
    format!("[{}]", pairs.join(" "))
}

fn subset_json(s: &Subset, labels: &[String]) -> serde_json::Value {
    serde_json::Value::Array(
        s.points().map(|p| serde_json::Value::String(labels[p].clone())).collect(),
    )
}

fn relation_json(r: &Relation, labels: &[String]) -> serde_json::Value {
    serde_json::Value::Array(
        r.pairs()
            .map(|(x, y)| serde_json::json!([labels[x], labels[y]]))
            .collect(),
    )
}

#[derive(Serialize)]
struct ProfileJson {
    t0: bool,
    t1: bool,
    t2: bool,
    regular: bool,
    completely_regular: bool,
    normal: bool,
}

impl From<SeparationProfile> for ProfileJson {
    fn from(p: SeparationProfile) -> ProfileJson {
        ProfileJson {
            t0: p.t0,
            t1: p.t1,
            t2: p.t2,
            regular: p.regular,
            completely_regular: p.completely_regular,
            normal: p.normal,
        }
    }
}

fn profile_line(p: &SeparationProfile) -> String {
    let yn = |b: bool| if b { "yes" } else { "no" };
    format!(
        "T0 {}, T1 {}, T2 {}, regular {}, completely regular {}, normal {}",
        yn(p.t0),
        yn(p.t1),
        yn(p.t2),
        yn(p.regular),
        yn(p.completely_regular),
        yn(p.normal)
    )
}

fn opens_lists(tau: &PreTopology, labels: &[String]) -> Vec<Vec<String>> {
    tau.opens()
        .map(|o| o.points().map(|p| labels[p].clone()).collect())
        .collect()
}

// ---- verify ----

#[derive(Serialize)]
struct CheckJson {
    name: String,
    holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<serde_json::Value>,
    /// informational checks classify but do not fail verification
    informational: bool,
}

#[derive(Serialize)]
struct VerifyReport {
    file: String,
    kind: String,
    valid: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    warnings: Vec<String>,
    checks: Vec<CheckJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    classification: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    induced_opens: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    separation_profile: Option<ProfileJson>,
}

impl VerifyReport {
    fn render_text(&self) -> String {
        let mut lines = Vec::new();
        lines.push(format!("file: {}", self.file));
        lines.push(format!("kind: {}", self.kind));
        for w in &self.warnings {
            lines.push(format!("warning: {w}"));
        }
        for c in &self.checks {
            let verdict = if c.holds { "pass" } else { "FAIL" };
            let mut line = format!("{}: {verdict}", c.name);
            if let Some(w) = &c.witness {
                line.push_str(&format!(" — witness {w}"));
            }
            if c.informational {
                line.push_str(" (informational)");
            }
            lines.push(line);
        }
        if let Some(c) = &self.classification {
            lines.push(format!("classification: {c}"));
        }
        if let Some(opens) = &self.induced_opens {
            let shown: Vec<String> =
                opens.iter().map(|o| format!("{{{}}}", o.join(","))).collect();
            lines.push(format!("induced opens: {}", shown.join(" ")));
        }
        if let Some(p) = &self.separation_profile {
            lines.push(format!(
                "separation profile: {}",
                profile_line(&SeparationProfile {
                    t0: p.t0,
                    t1: p.t1,
                    t2: p.t2,
                    regular: p.regular,
                    completely_regular: p.completely_regular,
                    normal: p.normal,
                })
            ));
        }
        let failed: Vec<&str> = self
            .checks
            .iter()
            .filter(|c| !c.holds && !c.informational)
            .map(|c| c.name.as_str())
            .collect();
        if self.valid {
            lines.push("verdict: VALID".to_string());
        } else {
            lines.push(format!("verdict: INVALID ({})", failed.join(", ")));
        }
        lines.join("\n") + "\n"
    }
}

fn axiom_witness_json(w: &AxiomWitness, labels: &[String]) -> serde_json::Value {
    match w {
        AxiomWitness::MissingDiagonal { member, at } => serde_json::json!({
            "member": relation_json(member, labels),
            "missing_diagonal_at": labels[*at],
        }),
        AxiomWitness::NoInverseBelow { member } => serde_json::json!({
            "member": relation_json(member, labels),
            "no_member_below_its_inverse": true,
        }),
        AxiomWitness::NoCompositionBelow { member, compositions } => serde_json::json!({
            "member": relation_json(member, labels),
            "compositions": compositions
                .iter()
                .map(|r| relation_json(r, labels))
                .collect::<Vec<_>>(),
        }),
        AxiomWitness::IntersectionTooBig { pair } => serde_json::json!({
            "off_diagonal_pair": [labels[pair.0], labels[pair.1]],
        }),
        AxiomWitness::NoIntersectionBelow { left, right } => serde_json::json!({
            "left": relation_json(left, labels),
            "right": relation_json(right, labels),
        }),
        AxiomWitness::NoSymmetricBelow { member } => serde_json::json!({
            "member": relation_json(member, labels),
        }),
        AxiomWitness::NoSquareBelow { member } => serde_json::json!({
            "member": relation_json(member, labels),
        }),
    }
}

fn unif_checks(report: &AxiomReport, labels: &[String]) -> Vec<CheckJson> {
    let mut out = Vec::new();
    for (name, verdict, informational) in [
        ("U1", &report.u1, false),
        ("U2", &report.u2, false),
        ("U3", &report.u3, false),
        ("U4", &report.u4, false),
        ("U5", &report.u5, false),
        ("U6", &report.u6, true),
        ("U2'", &report.u2_prime, true),
        ("U3'", &report.u3_prime, true),
    ] {
        out.push(CheckJson {
            name: name.to_string(),
            holds: verdict.holds,
            witness: verdict.witness.as_ref().map(|w| axiom_witness_json(w, labels)),
            informational,
        });
    }
    out
}

fn pp_checks(delta: &PreProximity, labels: &[String]) -> (Vec<CheckJson>, bool, bool) {
    let report = preprox::check_pp_axioms(delta);
    let sub = |s: &Subset| subset_json(s, labels);
    let mut checks = Vec::new();
    let mut push = |name: &str, holds: bool, witness: Option<serde_json::Value>, info: bool| {
        checks.push(CheckJson { name: name.to_string(), holds, witness, informational: info });
    };
    push("PP1", report.pp1.is_ok(), report.pp1.as_ref().err().map(|(a, b)| {
        serde_json::json!({"near": [sub(a), sub(b)], "mirror_far": true})
    }), false);
    push("PP2", report.pp2.is_ok(), report.pp2.as_ref().err().map(|(a, b, c)| {
        serde_json::json!({"near": [sub(a), sub(b)], "far_superset": sub(c)})
    }), false);
    push("PP3", report.pp3.is_ok(), report.pp3.as_ref().err().map(|&(x, y)| {
        serde_json::json!([labels[x], labels[y]])
    }), false);
    push("PP4", report.pp4, None, false);
    push("PP5", report.pp5.is_ok(), report.pp5.as_ref().err().map(|(a, b)| {
        serde_json::json!({"far_pair_without_split": [sub(a), sub(b)]})
    }), false);
    push("PP6", report.pp6.is_ok(), report.pp6.as_ref().err().map(|(a, b, c)| {
        serde_json::json!({"near_union": [sub(a), sub(b), sub(c)]})
    }), true);
    let cls = report.classification();
    (checks, cls.preproximity, cls.proximity)
}

fn cmd_verify(path: &Path, kind: Option<&str>, out: Option<&Path>, format: Format) -> CliResult {
    let text = read_to_string(path)?;
    let env = parse_envelope(path, &text)?;
    if let Some(expected) = kind {
        if env.body.kind_name() != expected {
            return Err(Failure::format(format!(
                "{}: expected a {expected} document, found {}",
                path.display(),
                env.body.kind_name()
            )));
        }
    }
    match &env.body {
        Body::Certificate { target, canonical_id, .. } => {
            let ok = match search::verify_certificate(&env) {
                Ok(v) => v,
                Err(search::SearchError::Interchange(e)) if e.is_format() => {
                    return Err(Failure::format(format!("{}: {e}", path.display())))
                }
                Err(search::SearchError::MalformedCertificate(m)) => {
                    return Err(Failure::format(format!("{}: {m}", path.display())))
                }
                Err(_) => false,
            };
            let report = serde_json::json!({
                "file": path.display().to_string(),
                "kind": "certificate",
                "target": target,
                "canonical_id": canonical_id,
                "replay_ok": ok,
            });
            let rendered = match format {
                Format::Json => serde_json::to_string_pretty(&report).expect("serializable") + "\n",
                Format::Text => format!(
                    "file: {}\nkind: certificate\ntarget: {target}\nreplay: {}\n",
                    path.display(),
                    if ok { "OK" } else { "FAILED" }
                ),
            };
            write_output(out, &rendered)?;
            Ok(if ok { 0 } else { 2 })
        }
        Body::Exhaustion { target, structure_kind, carrier_bound, size_bound, examined } => {
            let spec_kind = SearchKind::from_str(structure_kind).ok_or_else(|| {
                Failure::format(format!("unknown structure kind {structure_kind:?}"))
            })?;
            let spec = SearchSpec {
                kind: spec_kind,
                carrier_bound: *carrier_bound,
                size_bound: *size_bound,
                target: target.clone(),
            };
            let outcome = search::hunt(&spec).map_err(|e| Failure::format(e.to_string()))?;
            let ok = interchange::save(&outcome.to_envelope()) == interchange::save(&env);
            let matched = match &outcome {
                HuntOutcome::Exhausted(e) => format!("re-ran: examined {}", e.examined),
                HuntOutcome::Found(_) => "re-ran: found a certificate instead".to_string(),
            };
            let report = serde_json::json!({
                "file": path.display().to_string(),
                "kind": "exhaustion",
                "target": target,
                "examined": examined,
                "replay_ok": ok,
                "note": matched,
            });
            let rendered = match format {
                Format::Json => serde_json::to_string_pretty(&report).expect("serializable") + "\n",
                Format::Text => format!(
                    "file: {}\nkind: exhaustion\ntarget: {target}\nreplay: {}\n",
                    path.display(),
                    if ok { "OK" } else { "FAILED" }
                ),
            };
            write_output(out, &rendered)?;
            Ok(if ok { 0 } else { 2 })
        }
        _ => {
            let loaded = load_structure(path, &env)?;
            let report = structure_report(path, &loaded);
            let rendered = match format {
                Format::Json => serde_json::to_string_pretty(&report).expect("serializable") + "\n",
                Format::Text => report.render_text(),
            };
            write_output(out, &rendered)?;
            Ok(if report.valid { 0 } else { 2 })
        }
    }
}

fn structure_report(path: &Path, loaded: &Loaded) -> VerifyReport {
    let labels = &loaded.labels;
    let mut report = VerifyReport {
        file: path.display().to_string(),
        kind: loaded.structure.kind_name().to_string(),
        valid: true,
        warnings: loaded.warnings.clone(),
        checks: Vec::new(),
        classification: None,
        induced_opens: None,
        separation_profile: None,
    };
    let attach_tau = |report: &mut VerifyReport, tau: &PreTopology| {
        report.induced_opens = Some(opens_lists(tau, labels));
        report.separation_profile = Some(tau.separation_profile().into());
    };
    match &loaded.structure {
        Structure::Pretopology(tau) => {
            report.checks.push(CheckJson {
                name: "union-closed, empty set present, carrier covered".to_string(),
                holds: true,
                witness: None,
                informational: false,
            });
            attach_tau(&mut report, tau);
        }
        Structure::PreuniformityBasis(basis) => {
            let axioms = preunif::check_axioms(basis);
            report.checks = unif_checks(&axioms, labels);
            report.valid = axioms.failed_core_axioms().is_empty();
            let cls = axioms.classification;
            report.classification = Some(serde_json::json!({
                "preuniformity": cls.preuniformity,
                "symmetric": cls.symmetric,
                "strong": cls.strong,
                "almost_uniform": cls.almost_uniform,
                "uniform": cls.uniform,
            }));
            attach_tau(&mut report, &basis.induced_pretopology());
        }
        Structure::Pseudometric(rho) => {
            report.checks.push(CheckJson {
                name: "zero diagonal, symmetry, triangle inequality".to_string(),
                holds: true,
                witness: None,
                informational: false,
            });
            if let Ok(mu) = metrics::induced_from_pseudometric(rho) {
                attach_tau(&mut report, &mu.induced_pretopology());
            }
        }
        Structure::EntourageChain(_) => {
            report.checks.push(CheckJson {
                name: "diagonal members, triple-composition nesting".to_string(),
                holds: true,
                witness: None,
                informational: false,
            });
        }
        Structure::Preproximity(delta) => {
            let (checks, preproximity, proximity) = pp_checks(delta, labels);
            report.checks = checks;
            report.valid = preproximity;
            report.classification = Some(serde_json::json!({
                "preproximity": preproximity,
                "proximity": proximity,
            }));
            if let Ok(tau) = delta.induced_pretopology() {
                attach_tau(&mut report, &tau);
            }
        }
        Structure::Pretopgroup { group, tau, prebase } => {
            report.checks.push(CheckJson {
                name: "group axioms (identity, inverses, associativity)".to_string(),
                holds: true,
                witness: None,
                informational: false,
            });
            let pretopological =
                groups::is_pretopological_group(group, tau).expect("same carrier");
            report.checks.push(CheckJson {
                name: "multiplication and inversion pre-continuous".to_string(),
                holds: pretopological,
                witness: None,
                informational: false,
            });
            report.valid = pretopological;
            if let Some(b_e) = prebase {
                let block_check = groups::validate_prebase(group, tau, b_e);
                report.checks.push(CheckJson {
                    name: "pre-base blocks open and containing the identity".to_string(),
                    holds: block_check.is_ok(),
                    witness: block_check
                        .as_ref()
                        .err()
                        .map(|e| serde_json::Value::String(e.to_string())),
                    informational: false,
                });
                if block_check.is_ok() {
                    let strong = groups::is_strongly_pretopological_group(group, tau, b_e)
                        .expect("validated pre-base");
                    report.checks.push(CheckJson {
                        name: "symmetric squaring pre-base at the identity".to_string(),
                        holds: strong,
                        witness: None,
                        informational: true,
                    });
                } else {
                    report.valid = false;
                }
            }
            attach_tau(&mut report, tau);
        }
    }
    report
}

// ---- derive ----

#[derive(Serialize)]
struct DeriveNote {
    construction: String,
    inputs: Vec<String>,
    output_kind: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    notes: Vec<String>,
}

fn tau_from(path: &Path, structure: &Structure) -> Result<PreTopology, Failure> {
    match structure {
        Structure::Pretopology(t) => Ok(t.clone()),
        Structure::PreuniformityBasis(b) => Ok(b.induced_pretopology()),
        Structure::Preproximity(d) => d.induced_pretopology().map_err(|e| {
            Failure::axiom(format!(
                "{}: nearness closure does not induce a pre-topology: {e}",
                path.display()
            ))
        }),
        Structure::Pseudometric(rho) => {
            let mu = metrics::induced_from_pseudometric(rho)
                .map_err(|e| Failure::axiom(format!("{}: {e}", path.display())))?;
            Ok(mu.induced_pretopology())
        }
        Structure::Pretopgroup { tau, .. } => Ok(tau.clone()),
        Structure::EntourageChain(_) => Err(Failure::format(format!(
            "{}: entourage-chain documents have no induced pre-topology; derive \
             chain-pseudometric first",
            path.display()
        ))),
    }
}

fn validated_preuniformity(path: &Path, structure: &Structure) -> Result<PreUniformity, Failure> {
    match structure {
        Structure::PreuniformityBasis(b) => PreUniformity::new(b.clone()).map_err(|e| {
            Failure::axiom(format!("{}: validity axioms fail: {e}", path.display()))
        }),
        other => Err(Failure::format(format!(
            "{}: expected a preuniformity-basis document, found {}",
            path.display(),
            other.kind_name()
        ))),
    }
}

fn expect_kind<'a, T>(
    path: &Path,
    found: Option<T>,
    kind_name: &str,
    actual: &'a Structure,
) -> Result<T, Failure> {
    found.ok_or_else(|| {
        Failure::format(format!(
            "{}: expected a {kind_name} document, found {}",
            path.display(),
            actual.kind_name()
        ))
    })
}

fn cmd_derive(
    construction: &str,
    files: &[PathBuf],
    bound: Option<usize>,
    out: Option<&Path>,
    format: Format,
) -> CliResult {
    let name = construction.replace('_', "-");
    let mut loaded = Vec::new();
    for path in files {
        let text = read_to_string(path)?;
        let env = parse_envelope(path, &text)?;
        loaded.push((path.as_path(), load_structure(path, &env)?));
    }
    let arity_one = || -> Result<(&Path, &Loaded), Failure> {
        match loaded.len() {
            1 => Ok((loaded[0].0, &loaded[0].1)),
            k => Err(Failure::format(format!("{name} takes exactly one input file, got {k}"))),
        }
    };
    let mut notes: Vec<String> = Vec::new();
    let derived: Option<(Envelope, &'static str)> = match name.as_str() {
        "tau" => {
            let (path, l) = arity_one()?;
            let tau = tau_from(path, &l.structure)?;
            notes.push(format!("{} opens", tau.open_count()));
            notes.push(format!("separation profile: {}", profile_line(&tau.separation_profile())));
            Some((interchange::pretopology_doc(&tau, &l.labels), "pretopology"))
        }
        "delta" => {
            let (path, l) = arity_one()?;
            let delta = match &l.structure {
                Structure::Pseudometric(rho) => {
                    let mu = metrics::induced_from_pseudometric(rho)
                        .map_err(|e| Failure::axiom(format!("{}: {e}", path.display())))?;
                    preprox::delta_from_preuniformity(&mu)
                }
                _ => {
                    let mu = validated_preuniformity(path, &l.structure)?;
                    preprox::delta_from_preuniformity(&mu)
                }
            }
            .map_err(|e| Failure::axiom(format!("{}: {e}", path.display())))?;
            Some((interchange::preproximity_doc(&delta, &l.labels), "preproximity"))
        }
        "mu-delta" => {
            let (path, l) = arity_one()?;
            let delta = expect_kind(
                path,
                match &l.structure {
                    Structure::Preproximity(d) => Some(d),
                    _ => None,
                },
                "preproximity",
                &l.structure,
            )?;
            let mu = preprox::mu_delta(delta)
                .map_err(|e| Failure::axiom(format!("{}: {e}", path.display())))?;
            notes.push(format!("{} basis members", mu.basis().len()));
            Some((interchange::basis_doc(mu.basis(), &l.labels), "preuniformity-basis"))
        }
        "coreflection" => {
            let (path, l) = arity_one()?;
            let mu = validated_preuniformity(path, &l.structure)?;
            let star = preunif::coreflection(&mu);
            let cls = star.classification();
            notes.push(format!("uniform: {}", cls.uniform));
            Some((interchange::basis_doc(star.basis(), &l.labels), "preuniformity-basis"))
        }
        "chain-pseudometric" => {
            let (path, l) = arity_one()?;
            let chain = expect_kind(
                path,
                match &l.structure {
                    Structure::EntourageChain(c) => Some(c),
                    _ => None,
                },
                "entourage-chain",
                &l.structure,
            )?;
            let rho = metrics::chain_pseudometric(chain);
            notes.push(format!("sandwich holds: {}", metrics::sandwich_holds(chain, &rho)));
            Some((interchange::pseudometric_doc(&rho, &l.labels), "pseudometric"))
        }
        "product" => {
            if loaded.len() != 2 {
                return Err(Failure::format(format!(
                    "product takes exactly two input files, got {}",
                    loaded.len()
                )));
            }
            let (p1, l1) = (loaded[0].0, &loaded[0].1);
            let (p2, l2) = (loaded[1].0, &loaded[1].1);
            let combined: Vec<String> = l1
                .labels
                .iter()
                .flat_map(|a| l2.labels.iter().map(move |b| format!("{a}.{b}")))
                .collect();
            match (&l1.structure, &l2.structure) {
                (Structure::Pretopology(t1), Structure::Pretopology(t2)) => {
                    let prod = pretop::product_pretopology(t1, t2)
                        .map_err(|e| Failure::axiom(e.to_string()))?;
                    notes.push(format!("{} opens", prod.open_count()));
                    Some((interchange::pretopology_doc(&prod, &combined), "pretopology"))
                }
                (Structure::PreuniformityBasis(_), Structure::PreuniformityBasis(_)) => {
                    let mu1 = validated_preuniformity(p1, &l1.structure)?;
                    let mu2 = validated_preuniformity(p2, &l2.structure)?;
                    let result = preunif::product(&mu1, &mu2)
                        .map_err(|e| Failure::axiom(e.to_string()))?;
                    notes.push(format!(
                        "projections pre-uniformly continuous: {} and {}",
                        result.projections_continuous.0, result.projections_continuous.1
                    ));
                    notes.push(format!(
                        "coreflection matches lifted coreflections: {}",
                        result.coreflection_matches
                    ));
                    Some((
                        interchange::basis_doc(result.product.basis(), &combined),
                        "preuniformity-basis",
                    ))
                }
                _ => {
                    return Err(Failure::format(
                        "product needs two pretopology or two preuniformity-basis documents"
                            .to_string(),
                    ))
                }
            }
        }
        "sup" => {
            let first = &loaded[0].1.structure;
            match first {
                Structure::PreuniformityBasis(_) => {
                    let mus = loaded
                        .iter()
                        .map(|(p, l)| validated_preuniformity(p, &l.structure))
                        .collect::<Result<Vec<_>, _>>()?;
                    let sup = preunif::sup(&mus).map_err(|e| Failure::axiom(e.to_string()))?;
                    notes.push(format!("{} basis members", sup.basis().len()));
                    Some((
                        interchange::basis_doc(sup.basis(), &loaded[0].1.labels),
                        "preuniformity-basis",
                    ))
                }
                Structure::Preproximity(_) => {
                    let deltas = loaded
                        .iter()
                        .map(|(p, l)| {
                            expect_kind(
                                p,
                                match &l.structure {
                                    Structure::Preproximity(d) => Some(d.clone()),
                                    _ => None,
                                },
                                "preproximity",
                                &l.structure,
                            )
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    let sup = preprox::sup_preproximities(&deltas)
                        .map_err(|e| Failure::axiom(e.to_string()))?;
                    Some((
                        interchange::preproximity_doc(&sup, &loaded[0].1.labels),
                        "preproximity",
                    ))
                }
                other => {
                    return Err(Failure::format(format!(
                        "sup needs preuniformity-basis or preproximity documents, found {}",
                        other.kind_name()
                    )))
                }
            }
        }
        "universal" => {
            let (path, l) = arity_one()?;
            let tau = expect_kind(
                path,
                match &l.structure {
                    Structure::Pretopology(t) => Some(t),
                    _ => None,
                },
                "pretopology",
                &l.structure,
            )?;
            let size_bound = bound.unwrap_or(4);
            match preunif::universal_preuniformity(tau, size_bound) {
                UniversalOutcome::NotT0 => {
                    return Err(Failure::axiom(format!(
                        "{}: the opens are not T0, so no compatible family exists",
                        path.display()
                    )))
                }
                UniversalOutcome::NoneFound { complete } => {
                    return Err(Failure::axiom(format!(
                        "{}: no compatible family found up to basis size {size_bound} \
                         (sweep complete: {complete})",
                        path.display()
                    )))
                }
                UniversalOutcome::Found { mu, complete } => {
                    notes.push(format!("sweep complete up to size {size_bound}: {complete}"));
                    Some((interchange::basis_doc(mu.basis(), &l.labels), "preuniformity-basis"))
                }
            }
        }
        "separation-profile" => {
            let (path, l) = arity_one()?;
            let tau = tau_from(path, &l.structure)?;
            let profile = tau.separation_profile();
            let rendered = match format {
                Format::Json => {
                    serde_json::to_string_pretty(&ProfileJson::from(profile)).expect("serializable")
                        + "\n"
                }
                Format::Text => profile_line(&profile) + "\n",
            };
            write_output(out, &rendered)?;
            return Ok(0);
        }
        other => {
            return Err(Failure::format(format!(
                "unknown construction {other:?}; expected tau, delta, mu_delta, coreflection, \
                 chain-pseudometric, product, sup, universal, or separation-profile"
            )))
        }
    };
    let (doc, output_kind) = derived.expect("every structure branch produces a document");
    let text = interchange::save(&doc);
    let note = DeriveNote {
        construction: name.clone(),
        inputs: files.iter().map(|p| p.display().to_string()).collect(),
        output_kind: output_kind.to_string(),
        notes,
    };
    match out {
        Some(path) => {
            write_output(Some(path), &text)?;
            let rendered = match format {
                Format::Json => serde_json::to_string_pretty(&note).expect("serializable") + "\n",
                Format::Text => {
                    let mut lines = vec![format!(
                        "derived {} from {} → {}",
                        note.construction,
                        note.inputs.join(", "),
                        path.display()
                    )];
                    lines.extend(note.notes.iter().cloned());
                    lines.join("\n") + "\n"
                }
            };
            print!("{rendered}");
        }
        None => {
            print!("{text}");
            for n in &note.notes {
                eprintln!("pretop: {n}");
            }
        }
    }
    Ok(0)
}

// ---- search ----

fn default_size_bound() -> usize {
    usize::MAX >> 1
}

#[derive(Deserialize)]
struct SpecFile {
    kind: String,
    carrier_bound: usize,
    #[serde(default = "default_size_bound")]
    size_bound: usize,
    target: String,
}

fn parse_shard(text: &str) -> Result<(usize, usize), Failure> {
    let parts: Vec<&str> = text.split('/').collect();
    let bad = || Failure::format(format!("bad shard {text:?}; expected INDEX/COUNT like 0/3"));
    if parts.len() != 2 {
        return Err(bad());
    }
    let index: usize = parts[0].parse().map_err(|_| bad())?;
    let count: usize = parts[1].parse().map_err(|_| bad())?;
    if count == 0 || index >= count {
        return Err(bad());
    }
    Ok((index, count))
}

fn cmd_search(
    specfile: &Path,
    bound: Option<usize>,
    shard: Option<&str>,
    out: Option<&Path>,
    format: Format,
) -> CliResult {
    let text = read_to_string(specfile)?;
    let parsed: SpecFile = serde_json::from_str(&text)
        .map_err(|e| Failure::format(format!("{}: invalid spec: {e}", specfile.display())))?;
    let kind = SearchKind::from_str(&parsed.kind).ok_or_else(|| {
        Failure::format(format!(
            "{}: unknown kind {:?}; expected pretopology, preuniformity-basis, preproximity, \
             or pretopgroup",
            specfile.display(),
            parsed.kind
        ))
    })?;
    let spec = SearchSpec {
        kind,
        carrier_bound: bound.unwrap_or(parsed.carrier_bound),
        size_bound: parsed.size_bound,
        target: parsed.target,
    };
    let outcome = match shard {
        None => search::hunt(&spec),
        Some(text) => {
            let (index, count) = parse_shard(text)?;
            search::hunt_shard(&spec, index, count)
        }
    }
    .map_err(|e| Failure::format(format!("{}: {e}", specfile.display())))?;
    let env = outcome.to_envelope();
    match format {
        Format::Json => write_output(out, &interchange::save(&env))?,
        Format::Text => {
            if let Some(path) = out {
                write_output(Some(path), &interchange::save(&env))?;
            }
            let mut lines = Vec::new();
            render_outcome(&env, &mut lines)?;
            println!("{}", lines.join("\n"));
        }
    }
    Ok(0)
}

// ---- explain ----

fn describe_structure(loaded: &Loaded, lines: &mut Vec<String>) {
    let labels = &loaded.labels;
    match &loaded.structure {
        Structure::Pretopology(tau) => {
            lines.push(format!(
                "pre-topology on {} points, {} opens:",
                tau.n(),
                tau.open_count()
            ));
            for o in tau.opens() {
                lines.push(format!("  {}", fmt_subset(&o, labels)));
            }
        }
        Structure::PreuniformityBasis(basis) => {
            lines.push(format!(
                "entourage basis on {} points, {} members:",
                basis.n(),
                basis.len()
            ));
            for r in basis.members() {
                lines.push(format!("  {}", fmt_relation(r, labels)));
            }
        }
        Structure::Pseudometric(rho) => {
            lines.push(format!("pseudometric on {} points:", rho.n()));
            for x in 0..rho.n() {
                let row: Vec<String> =
                    (0..rho.n()).map(|y| rho.dist(x, y).to_string()).collect();
                lines.push(format!("  d({},·) = {}", labels[x], row.join(", ")));
            }
        }
        Structure::EntourageChain(chain) => {
            lines.push(format!(
                "entourage chain on {} points, {} links:",
                chain.n(),
                chain.links().len()
            ));
            for r in chain.links() {
                lines.push(format!("  {}", fmt_relation(r, labels)));
            }
        }
        Structure::Preproximity(delta) => {
            let n = delta.n();
            lines.push(format!("nearness structure on {n} points; near disjoint pairs:"));
            let full = (1u128 << n) - 1;
            let mut any = false;
            for a in 1..=full {
                for b in 1..=full {
                    if a & b == 0 && a <= b && delta.near_masks(a, b) {
                        any = true;
                        lines.push(format!(
                            "  {} δ {}",
                            fmt_subset(&Subset::from_bits(n, a), labels),
                            fmt_subset(&Subset::from_bits(n, b), labels)
                        ));
                    }
                }
            }
            if !any {
                lines.push("  (none beyond overlapping pairs)".to_string());
            }
        }
        Structure::Pretopgroup { group, tau, prebase } => {
            lines.push(format!("group of order {} with opens:", group.n()));
            for x in 0..group.n() {
                let row: Vec<&str> =
                    (0..group.n()).map(|y| labels[group.op(x, y)].as_str()).collect();
                lines.push(format!("  {} · — = {}", labels[x], row.join(", ")));
            }
            for o in tau.opens() {
                lines.push(format!("  open {}", fmt_subset(&o, labels)));
            }
            if let Some(b_e) = prebase {
                for v in b_e {
                    lines.push(format!("  pre-base block {}", fmt_subset(v, labels)));
                }
            }
        }
    }
}

/// Pretty-prints a certificate or exhaustion envelope; returns the exit
/// code (certificate replay failures exit 2).
fn render_outcome(env: &Envelope, lines: &mut Vec<String>) -> Result<u8, Failure> {
    match &env.body {
        Body::Certificate { target, canonical_id, structure, trace } => {
            lines.push("certificate".to_string());
            lines.push(format!("  target: {target}"));
            lines.push(format!("  canonical id: {canonical_id}"));
            lines.push("  trace:".to_string());
            for t in trace {
                lines.push(format!("    {} = {}", t.atom, t.value));
            }
            let loaded = interchange::load(structure)
                .map_err(|e| Failure::axiom(format!("embedded structure: {e}")))?;
            let mut body = Vec::new();
            describe_structure(&loaded, &mut body);
            for line in body {
                lines.push(format!("  {line}"));
            }
            let ok = matches!(search::verify_certificate(env), Ok(true));
            lines.push(format!("  replay: {}", if ok { "OK" } else { "FAILED" }));
            Ok(if ok { 0 } else { 2 })
        }
        Body::Exhaustion { target, structure_kind, carrier_bound, size_bound, examined } => {
            lines.push("exhaustion".to_string());
            lines.push(format!("  target: {target}"));
            lines.push(format!("  kind: {structure_kind}"));
            lines.push(format!(
                "  searched every class up to {carrier_bound} points (size bound {size_bound})"
            ));
            lines.push(format!("  examined: {examined}, found: none"));
            Ok(0)
        }
        _ => {
            let loaded = interchange::load(env).map_err(|e| from_interchange(Path::new("-"), e))?;
            describe_structure(&loaded, lines);
            Ok(0)
        }
    }
}

fn cmd_explain(path: &Path) -> CliResult {
    let text = read_to_string(path)?;
    let env = parse_envelope(path, &text)?;
    let mut lines = Vec::new();
    let code = render_outcome(&env, &mut lines)?;
    println!("{}", lines.join("\n"));
    Ok(code)
}
