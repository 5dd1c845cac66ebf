//! Command-line front end for the toric toolkit.
//!
//! Inputs are file paths (fan or presentation files, recognized by leading
//! keyword) or built-in example names. Exit codes follow the decision
//! semantics of each command: 0 for yes/success, 1 for a refuted or failed
//! claim, 2 for unknown or bound-exhausted outcomes, 3 for unusable input.

mod artifact;
mod report;

use artifact::{verify_artifact, Artifact};
use clap::{Parser, Subcommand};
use report::{set_str, vec_str, Format, Report};
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use toric::akset::{ak_analysis, FiniteSpace, OpenFamily};
use toric::conoid::{
    build_ample_group, cox_presentation, normalize_certificates, section_semigroup, MergePolicy,
};
use toric::corpus;
use toric::divisor::{
    class_group, is_divisorial, k_divisorial_status, DivisorError, KDivCertificate,
    KDivisorialStatus,
};
use toric::embed::{
    build_embedding, is_separated, validate_presentation, EmbedError, QuotientPresentation,
    Separatedness,
};
use toric::fan::{Fan, ValidatedFan};
use toric::files;
use toric::lattice::FinAbGroup;

/// Exact computations with toric varieties: chart-divisor certificates,
/// quotient presentations, embeddings into smooth quotients, and orbit-space
/// analysis.
#[derive(Parser)]
#[command(name = "toric", version)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate an input, reporting its basic invariants.
    Check {
        /// File path or built-in example name.
        input: String,
    },
    /// Divisor class group of a fan, with the class of every ray divisor.
    Classgroup {
        input: String,
    },
    /// Present a fan's variety as a quotient of affine space by the group
    /// dual to its class group.
    Cox {
        input: String,
        /// Write the result as a JSON artifact.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Decide whether every k points lie in a common affine chart.
    Divisorial {
        input: String,
        /// Tuple size.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
        /// Coefficient bound for the ample-divisor search.
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
        bound: u32,
        /// Write the result as a JSON artifact.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Merge chart certificates into a trivializing divisor group and
    /// enumerate the graded section semigroup over the variety.
    Conoid {
        input: String,
        /// Layer bound for the generator enumeration.
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..))]
        bound: u32,
        /// Write the result as a JSON artifact.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Embed the variety as a closed subvariety of a smooth quotient whose
    /// chart family covers k-tuples of orbits.
    Embed {
        input: String,
        /// Tuple size the ambient chart family should cover.
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(2..))]
        k: u32,
        /// Layer bound for the section generator enumeration.
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..))]
        bound: u32,
        /// Write the result as a JSON artifact.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Analyze which orbit subsets keep the common-chart property for
    /// k-tuples, and find the maximal ones.
    Aksets {
        input: String,
        /// Tuple size.
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
        /// Write the result as a JSON artifact.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Re-check an emitted artifact offline.
    Verify {
        artifact: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let failed = e.use_stderr();
            let _ = e.print();
            // Keep exit code 2 reserved for "unknown" outcomes; usage
            // problems are input errors.
            return if failed { ExitCode::from(3) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok((report, code)) => {
            report.print(cli.format);
            ExitCode::from(code)
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(cmd: Command) -> Result<(Report, u8), String> {
    match cmd {
        Command::Check { input } => cmd_check(&input),
        Command::Classgroup { input } => cmd_classgroup(&input),
        Command::Cox { input, emit } => cmd_cox(&input, emit.as_deref()),
        Command::Divisorial { input, k, bound, emit } => {
            cmd_divisorial(&input, k, bound, emit.as_deref())
        }
        Command::Conoid { input, bound, emit } => cmd_conoid(&input, bound, emit.as_deref()),
        Command::Embed { input, k, bound, emit } => cmd_embed(&input, k, bound, emit.as_deref()),
        Command::Aksets { input, k, emit } => cmd_aksets(&input, k, emit.as_deref()),
        Command::Verify { artifact } => cmd_verify(&artifact),
    }
}

enum Input {
    Fan(Fan),
    Presentation(QuotientPresentation),
}

/// Resolves an input argument: an existing file is parsed by its leading
/// keyword (`rank` opens a fan, `coordinates` a presentation); anything else
/// must be a built-in example name.
fn load_input(arg: &str) -> Result<Input, String> {
    let path = Path::new(arg);
    if path.exists() {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{arg}: {e}"))?;
        let first = text
            .lines()
            .map(str::trim)
            .find(|l| !l.is_empty() && !l.starts_with('#'))
            .unwrap_or("");
        if first.starts_with("coordinates") {
            Ok(Input::Presentation(
                files::parse_presentation(&text).map_err(|e| format!("{arg}: {e}"))?,
            ))
        } else {
            Ok(Input::Fan(files::parse_fan(&text).map_err(|e| format!("{arg}: {e}"))?))
        }
    } else if let Some(f) = corpus::fan_by_name(arg) {
        Ok(Input::Fan(f))
    } else if let Some(qp) = corpus::presentation_by_name(arg) {
        Ok(Input::Presentation(qp))
    } else {
        Err(format!("{arg}: no such file, and not a built-in example name"))
    }
}

fn load_fan(arg: &str) -> Result<Fan, String> {
    match load_input(arg)? {
        Input::Fan(f) => Ok(f),
        Input::Presentation(_) => Err(format!("{arg}: this command needs a fan input")),
    }
}

fn validated(arg: &str) -> Result<(Fan, ValidatedFan), String> {
    let fan = load_fan(arg)?;
    let v = fan.clone().validate().map_err(|e| format!("{arg}: invalid fan: {e}"))?;
    Ok((fan, v))
}

fn emit(art: &Artifact, path: &Path, report: &mut Report) -> Result<(), String> {
    let json =
        serde_json::to_string_pretty(art).map_err(|e| format!("serializing artifact: {e}"))?;
    std::fs::write(path, json + "\n").map_err(|e| format!("{}: {e}", path.display()))?;
    report.line(format!("artifact written to {}", path.display()));
    Ok(())
}

fn torsion_suffix(g: &FinAbGroup) -> String {
    if g.torsion.is_empty() {
        String::new()
    } else {
        format!(", torsion {}", vec_str(&g.torsion))
    }
}

fn cmd_check(input: &str) -> Result<(Report, u8), String> {
    let mut r = Report::new("check", input);
    match load_input(input)? {
        Input::Fan(fan) => {
            r.param("kind", "fan");
            match fan.validate() {
                Ok(v) => {
                    let p = v.props();
                    r.status = "valid".into();
                    r.line(format!("rank: {}", v.rank()));
                    r.line(format!("rays: {}", v.n_rays()));
                    r.line(format!("maximal cones: {}", v.n_max_cones()));
                    r.line(format!("orbits: {}", v.orbits().len()));
                    r.line(format!("complete: {}", p.complete));
                    r.line(format!("smooth: {}", p.smooth));
                    r.line(format!("simplicial: {}", p.simplicial));
                    r.payload = json!({
                        "kind": "fan",
                        "valid": true,
                        "rank": v.rank(),
                        "rays": v.n_rays(),
                        "max_cones": v.n_max_cones(),
                        "orbits": v.orbits().len(),
                        "complete": p.complete,
                        "smooth": p.smooth,
                        "simplicial": p.simplicial,
                    });
                    Ok((r, 0))
                }
                Err(e) => {
                    r.status = "invalid".into();
                    r.line(format!("problem: {e}"));
                    r.payload = json!({"kind": "fan", "valid": false, "problem": e.to_string()});
                    Ok((r, 1))
                }
            }
        }
        Input::Presentation(qp) => {
            r.param("kind", "presentation");
            match validate_presentation(&qp) {
                Ok(()) => {
                    let separated = matches!(is_separated(&qp), Separatedness::Separated);
                    r.status = "valid".into();
                    r.line(format!("coordinates: {}", qp.n));
                    r.line(format!(
                        "class group: free rank {}{}",
                        qp.class_group.free_rank,
                        torsion_suffix(&qp.class_group)
                    ));
                    r.line(format!("quotient rank: {}", qp.rank()));
                    r.line(format!("charts: {}", qp.cones.len()));
                    r.line(format!("separated: {separated}"));
                    r.payload = json!({
                        "kind": "presentation",
                        "valid": true,
                        "coordinates": qp.n,
                        "class_free_rank": qp.class_group.free_rank,
                        "quotient_rank": qp.rank(),
                        "charts": qp.cones.len(),
                        "separated": separated,
                    });
                    Ok((r, 0))
                }
                Err(e) => {
                    r.status = "invalid".into();
                    r.line(format!("problem: {e}"));
                    r.payload =
                        json!({"kind": "presentation", "valid": false, "problem": e.to_string()});
                    Ok((r, 1))
                }
            }
        }
    }
}

fn cmd_classgroup(input: &str) -> Result<(Report, u8), String> {
    let (_, v) = validated(input)?;
    let cl = class_group(&v).map_err(|e| format!("{input}: {e}"))?;
    let mut r = Report::new("classgroup", input);
    r.status = "computed".into();
    r.line(format!(
        "class group: free rank {}{}",
        cl.group.free_rank,
        torsion_suffix(&cl.group)
    ));
    let classes = cl.ray_classes();
    for (i, c) in classes.iter().enumerate() {
        r.line(format!("ray {i} class: {}", vec_str(c)));
    }
    r.payload = json!({
        "free_rank": cl.group.free_rank,
        "torsion": cl.group.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
        "ray_classes": classes
            .iter()
            .map(|c| c.iter().map(|x| x.to_string()).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    });
    Ok((r, 0))
}

fn cmd_cox(input: &str, emit_path: Option<&Path>) -> Result<(Report, u8), String> {
    let (fan, v) = validated(input)?;
    let mut r = Report::new("cox", input);
    let (cp, lifted) = match cox_presentation(&v) {
        Ok(x) => x,
        Err(e) => {
            r.status = "FAILED".into();
            r.line(format!("problem: {e}"));
            r.payload = json!({"problem": e.to_string()});
            return Ok((r, 1));
        }
    };
    r.status = "presented".into();
    r.line(format!("variables: {}", cp.variables));
    r.line(format!(
        "class group: free rank {}{}",
        cp.class_group.free_rank,
        torsion_suffix(&cp.class_group)
    ));
    for (i, c) in cp.coordinates.iter().enumerate() {
        r.line(format!("coordinate {i}: exponent {} degree {}", vec_str(&c.exponent), vec_str(&c.degree)));
    }
    for ch in &cp.charts {
        let stab = match &ch.stabilizer_order {
            Some(t) => t.to_string(),
            None => "infinite".to_string(),
        };
        r.line(format!(
            "chart {}: vanishing {} stabilizer {stab}",
            ch.cone,
            set_str(&ch.vanishing)
        ));
    }
    r.line(format!("free action: {}", cp.free));
    r.line(format!(
        "lifted fan: {} rays, {} maximal cones",
        lifted.rays.len(),
        lifted.max_cones.len()
    ));
    r.payload = json!({
        "variables": cp.variables,
        "class_free_rank": cp.class_group.free_rank,
        "charts": cp.charts.len(),
        "free": cp.free,
    });
    if let Some(p) = emit_path {
        emit(&Artifact::Cox { fan, presentation: cp, lifted }, p, &mut r)?;
    }
    Ok((r, 0))
}

fn cmd_divisorial(
    input: &str,
    k: u32,
    bound: u32,
    emit_path: Option<&Path>,
) -> Result<(Report, u8), String> {
    let (fan, v) = validated(input)?;
    let status = k_divisorial_status(&v, k as usize, bound);
    let mut r = Report::new("divisorial", input);
    r.param("k", k);
    r.param("bound", bound);
    let code = match &status {
        KDivisorialStatus::Yes(cert) => {
            r.status = "YES".into();
            match cert {
                KDivCertificate::Affine => {
                    r.line("certificate: the variety is affine");
                }
                KDivCertificate::Simplicial => {
                    r.line("certificate: simplicial fan, pairs always share a chart");
                }
                KDivCertificate::Divisorial(cs) => {
                    r.line(format!("certificate: {} chart divisors", cs.len()));
                    for c in cs {
                        r.line(format!(
                            "cone {}: divisor {}",
                            c.target_cone,
                            vec_str(&c.cartier.coeffs)
                        ));
                    }
                }
                KDivCertificate::Ample { cartier, demonstrations } => {
                    r.line(format!("certificate: ample divisor {}", vec_str(&cartier.coeffs)));
                    r.line(format!("demonstration sections: {}", demonstrations.len()));
                }
            }
            0
        }
        KDivisorialStatus::No { witness_cone } => {
            r.status = "NO".into();
            r.line(format!("witness: chart system of maximal cone {witness_cone} is infeasible"));
            1
        }
        KDivisorialStatus::Unknown => {
            r.status = "UNKNOWN".into();
            r.line("bounded search exhausted without a certificate");
            2
        }
    };
    r.payload = serde_json::to_value(&status).map_err(|e| e.to_string())?;
    if let Some(p) = emit_path {
        emit(&Artifact::Divisorial { fan, k: k as usize, bound, status }, p, &mut r)?;
    }
    Ok((r, code))
}

fn cmd_conoid(input: &str, bound: u32, emit_path: Option<&Path>) -> Result<(Report, u8), String> {
    let (fan, v) = validated(input)?;
    let mut r = Report::new("conoid", input);
    r.param("bound", bound);
    let certs = match is_divisorial(&v) {
        Ok(c) => c,
        Err(DivisorError::NotDivisorial(t)) => {
            r.status = "NOT_DIVISORIAL".into();
            r.line(format!("chart system of maximal cone {t} is infeasible"));
            r.payload = json!({"witness_cone": t});
            return Ok((r, 1));
        }
        Err(e) => return Err(format!("{input}: {e}")),
    };
    let certs = normalize_certificates(&v, &certs).map_err(|e| e.to_string())?;
    let group = build_ample_group(&v, &certs, MergePolicy::MinimalRank)
        .map_err(|e| e.to_string())?;
    let sections = match section_semigroup(&v, &group, bound) {
        Ok(s) => s,
        Err(e) => {
            r.status = "FAILED".into();
            r.line(format!("problem: {e}"));
            r.payload = json!({"problem": e.to_string()});
            return Ok((r, 1));
        }
    };
    r.status = if sections.complete { "COMPLETE".into() } else { "BOUND_EXHAUSTED".into() };
    r.line(format!("grading rank: {}", group.rank()));
    for (i, b) in group.basis.iter().enumerate() {
        r.line(format!(
            "basis divisor {i}: {} (degree {})",
            vec_str(&b.coeffs),
            vec_str(&group.degrees[i])
        ));
    }
    for cs in &group.cover {
        r.line(format!(
            "cover section for chart {}: numerator {} lambda {}",
            cs.cone,
            vec_str(&cs.numerator),
            vec_str(&cs.lambda)
        ));
    }
    r.line(format!("semigroup generators: {}", sections.generators.len()));
    for g in &sections.generators {
        r.line(format!("  {}", vec_str(g)));
    }
    if !sections.complete {
        r.line("generator list may be incomplete; raise the bound");
    }
    r.payload = json!({
        "grading_rank": group.rank(),
        "generators": sections.generators.len(),
        "complete": sections.complete,
    });
    let code = if sections.complete { 0 } else { 2 };
    if let Some(p) = emit_path {
        emit(&Artifact::Conoid { fan, certificates: certs, group, sections }, p, &mut r)?;
    }
    Ok((r, code))
}

fn cmd_embed(
    input: &str,
    k: u32,
    bound: u32,
    emit_path: Option<&Path>,
) -> Result<(Report, u8), String> {
    let (_, v) = validated(input)?;
    let mut r = Report::new("embed", input);
    r.param("k", k);
    r.param("bound", bound);
    match build_embedding(&v, k, bound) {
        Ok(art) => {
            r.status = if art.separated { "EMBEDDED".into() } else { "UNSEPARATED".into() };
            r.line(format!("ambient coordinates: {}", art.ambient.n));
            r.line(format!("grading rank: {}", art.group.rank()));
            for (j, g) in art.generators.iter().enumerate() {
                r.line(format!(
                    "generator {j}: {} (degree {})",
                    vec_str(g),
                    vec_str(&art.ambient.degrees[j])
                ));
            }
            r.line(format!("ambient charts: {}", art.ambient.cones.len()));
            r.line(format!("separated: {}", art.separated));
            r.line(format!("k-tuple charts: {}", art.a_k_charted));
            r.line(format!("transcript: {} chart checks", art.transcript.len()));
            r.payload = json!({
                "ambient_coordinates": art.ambient.n,
                "charts": art.ambient.cones.len(),
                "separated": art.separated,
                "a_k_charted": art.a_k_charted,
            });
            let code = if art.separated { 0 } else { 2 };
            if let Some(p) = emit_path {
                emit(&Artifact::Embedding { embedding: art }, p, &mut r)?;
            }
            Ok((r, code))
        }
        Err(EmbedError::BoundExhausted) => {
            r.status = "BOUND_EXHAUSTED".into();
            r.line("section generators incomplete at this bound; raise it");
            r.payload = json!({"problem": "bound exhausted"});
            Ok((r, 2))
        }
        Err(EmbedError::Divisor(DivisorError::NotDivisorial(t))) => {
            r.status = "NOT_DIVISORIAL".into();
            r.line(format!("chart system of maximal cone {t} is infeasible"));
            r.payload = json!({"witness_cone": t});
            Ok((r, 1))
        }
        Err(e) => {
            r.status = "FAILED".into();
            r.line(format!("problem: {e}"));
            r.payload = json!({"problem": e.to_string()});
            Ok((r, 1))
        }
    }
}

fn cmd_aksets(input: &str, k: u32, emit_path: Option<&Path>) -> Result<(Report, u8), String> {
    let mut r = Report::new("aksets", input);
    r.param("k", k);
    let (space, labels) = match load_input(input)? {
        Input::Fan(fan) => {
            let v = fan.validate().map_err(|e| format!("{input}: invalid fan: {e}"))?;
            let labels: Vec<String> = v
                .orbits()
                .iter()
                .map(|o| format!("orbit of the cone with rays {}", set_str(&o.rays)))
                .collect();
            (FiniteSpace::from_fan(&v), labels)
        }
        Input::Presentation(qp) => {
            validate_presentation(&qp).map_err(|e| format!("{input}: invalid presentation: {e}"))?;
            let labels: Vec<String> =
                qp.cones.iter().map(|f| format!("chart face {}", set_str(f))).collect();
            let space =
                FiniteSpace::from_faces(&qp.cones).map_err(|e| format!("{input}: {e}"))?;
            (space, labels)
        }
    };
    let family = OpenFamily::invariant_charts(&space);
    let analysis = ak_analysis(&space, &family, k);
    r.status = "analyzed".into();
    r.line(format!("points: {}", space.n_points()));
    for (i, label) in labels.iter().enumerate() {
        r.line(format!("point {i}: {label}"));
    }
    r.line(format!("complement components: {}", analysis.components.len()));
    for comp in &analysis.components {
        let tuple = comp.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        r.line(format!("  generic tuple: ({tuple})"));
    }
    r.line(format!(
        "maximal subsets with the {k}-tuple property: {}",
        analysis.maximal.len()
    ));
    for m in &analysis.maximal {
        r.line(format!("  {}", set_str(m)));
    }
    r.payload = json!({
        "points": space.n_points(),
        "components": analysis.components,
        "maximal": analysis
            .maximal
            .iter()
            .map(|m| m.iter().copied().collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    });
    if let Some(p) = emit_path {
        emit(&Artifact::Aksets { space, family, analysis }, p, &mut r)?;
    }
    Ok((r, 0))
}

fn cmd_verify(path: &Path) -> Result<(Report, u8), String> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| format!("{shown}: {e}"))?;
    let art: Artifact =
        serde_json::from_str(&text).map_err(|e| format!("{shown}: not an artifact: {e}"))?;
    let mut r = Report::new("verify", &shown);
    r.param("kind", art.kind());
    match verify_artifact(&art) {
        Ok(summary) => {
            r.status = "PASS".into();
            r.line(summary.clone());
            r.payload = json!({"pass": true, "summary": summary});
            Ok((r, 0))
        }
        Err(reason) => {
            r.status = "FAIL".into();
            r.line(reason.clone());
            r.payload = json!({"pass": false, "reason": reason});
            Ok((r, 1))
        }
    }
}
