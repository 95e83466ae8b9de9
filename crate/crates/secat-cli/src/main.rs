//! `secat` — sectional-category invariants of Sullivan models.
//!
//! Reads a model file, runs one invariant computation and prints a report to
//! stdout (text by default, stable JSON with `--json`). Exit codes: 0 for a
//! determinate answer, 1 for input errors, 2 for refusals (hypothesis
//! failures such as a non-PD input), 3 for results undetermined at the cap.

mod parse;
mod report;

use clap::{Parser, Subcommand};
use report::{value_status, Report};
use secat_core::cohomology::algebra_cohomology;
use secat_core::dga::SullivanSlice;
use secat_core::invariants::{
    self, htc, inequality_audit, mtc_attempt_with, toomer_e0, verify_theorem, DiagonalData,
    MtcAttempt, TheoremVerdict, Witness,
};
use secat_core::model::SullivanModel;
use secat_core::poincare::detect_pd;
use std::sync::Arc;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "secat", version, about = "Sectional-category invariants of Sullivan models")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Degree cap (default: 6 × the maximal generator degree).
    #[arg(long, global = true)]
    cap: Option<i64>,

    /// Emit the machine-readable JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Maximal n for the htc/mtc sweeps (default: 2 × the formal dimension).
    #[arg(long, global = true)]
    budget: Option<u32>,

    /// Permit degree-1 generators in the model file.
    #[arg(long = "flag-degree-one", global = true)]
    flag_degree_one: bool,

    /// Include the wall-clock measurement in the JSON output (off by
    /// default so identical runs produce identical bytes).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Betti numbers of the model up to the cap.
    Cohomology { model: String },
    /// Detect Poincaré duality of the model's cohomology.
    PdCheck { model: String },
    /// nil ker ∪, the zero-divisor cup length of the diagonal.
    CupLength { model: String },
    /// Toomer invariant e₀ via word-length quotients.
    E0 { model: String },
    /// Least n with H(pₙ) injective.
    Htc { model: String },
    /// Least n with a verified module homotopy retraction for pₙ.
    Mtc { model: String },
    /// Check htc = (least n with a retraction) with machine-checked
    /// witnesses.
    VerifyTheorem { model: String },
    /// Attempt the retraction for pₙ at one fixed n.
    Retract {
        model: String,
        #[arg(long)]
        n: u32,
    },
    /// Audit of the inequality chain nil ker ∪ ≤ htc ≤ 2·e₀.
    Audit { model: String },
}

fn main() {
    let cli = Cli::parse();
    let started = Instant::now();
    match run(&cli) {
        Ok(report) => {
            let elapsed = started.elapsed().as_millis();
            if cli.json {
                print!("{}", report.to_json(cli.timing.then_some(elapsed)));
            } else {
                print!("{}", report.to_text(elapsed));
            }
            std::process::exit(report.exit_code);
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            std::process::exit(1);
        }
    }
}

fn model_path(cmd: &Command) -> &str {
    match cmd {
        Command::Cohomology { model }
        | Command::PdCheck { model }
        | Command::CupLength { model }
        | Command::E0 { model }
        | Command::Htc { model }
        | Command::Mtc { model }
        | Command::VerifyTheorem { model }
        | Command::Retract { model, .. }
        | Command::Audit { model } => model,
    }
}

fn run(cli: &Cli) -> Result<Report, String> {
    let path = model_path(&cli.command);
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?;
    let model = parse::parse_model(&text, cli.flag_degree_one).map_err(|e| e.to_string())?;
    let cap = cli.cap.unwrap_or(6 * model.max_generator_degree().max(1));

    let report = match &cli.command {
        Command::Cohomology { .. } => cohomology_report(&model, path, cap),
        Command::PdCheck { .. } => pd_check_report(&model, path, cap),
        Command::CupLength { .. } => cup_length_report(&model, path, cap),
        Command::E0 { .. } => e0_report(&model, path, cap),
        Command::Htc { .. } => htc_report(&model, path, cap, cli.budget),
        Command::Mtc { .. } => mtc_report(&model, path, cap, cli.budget),
        Command::VerifyTheorem { .. } => theorem_report(&model, path, cap, cli.budget),
        Command::Retract { n, .. } => retract_report(&model, path, cap, *n),
        Command::Audit { .. } => audit_report(&model, path, cap),
    };
    report.map_err(|e| e.to_string())
}

type CmdResult = Result<Report, secat_core::Error>;

fn cohomology_report(model: &Arc<SullivanModel>, path: &str, cap: i64) -> CmdResult {
    let betti = invariants::betti_numbers(model, cap)?;
    let witnesses: Vec<Witness> = betti
        .iter()
        .map(|(deg, dim)| Witness {
            kind: "betti".into(),
            degree: Some(*deg),
            detail: dim.to_string(),
        })
        .collect();
    let summary: Vec<String> = betti.iter().map(|(_, d)| d.to_string()).collect();
    Ok(Report {
        command: "cohomology".into(),
        model: path.into(),
        cap,
        complete: true,
        value: None,
        status: "ok".into(),
        witnesses,
        headline: format!("betti (degrees 0..{cap}) = ({})", summary.join(", ")),
        exit_code: 0,
    })
}

fn pd_check_report(model: &Arc<SullivanModel>, path: &str, cap: i64) -> CmdResult {
    let slice = SullivanSlice::new(Arc::clone(model), cap);
    let h = algebra_cohomology(slice.as_ref())?;
    match detect_pd(slice.as_ref(), &h) {
        Ok(cert) => Ok(Report {
            command: "pd-check".into(),
            model: path.into(),
            cap,
            complete: h.vanishes_above(cert.formal_dim),
            value: Some(cert.formal_dim as u32),
            status: "ok".into(),
            witnesses: vec![Witness {
                kind: "fundamental_class".into(),
                degree: Some(cert.formal_dim),
                detail: format!(
                    "H^{} is one-dimensional and all pairings are nonsingular (verified to cap {cap})",
                    cert.formal_dim
                ),
            }],
            headline: format!("Poincaré duality of formal dimension {}", cert.formal_dim),
            exit_code: 0,
        }),
        Err(fail) => Ok(Report {
            command: "pd-check".into(),
            model: path.into(),
            cap,
            complete: false,
            value: None,
            status: "refused".into(),
            witnesses: vec![Witness {
                kind: "pd_failure".into(),
                degree: None,
                detail: fail.describe(),
            }],
            headline: format!("not a Poincaré duality algebra: {}", fail.describe()),
            exit_code: 2,
        }),
    }
}

fn cup_length_report(model: &Arc<SullivanModel>, path: &str, cap: i64) -> CmdResult {
    let dd = DiagonalData::new(model, cap)?;
    let nk = invariants::nil_ker_of_model(&dd)?;
    let mut witnesses = Vec::new();
    if let Some((deg, label)) = &nk.witness {
        witnesses.push(Witness {
            kind: "nonzero_product".into(),
            degree: Some(*deg),
            detail: format!("a {}-fold kernel product survives: {label}", nk.value),
        });
    }
    for w in dd.truncation_warnings() {
        eprintln!("warning: {w}");
    }
    Ok(Report {
        command: "cup-length".into(),
        model: path.into(),
        cap,
        complete: nk.complete,
        value: Some(nk.value),
        status: "ok".into(),
        witnesses,
        headline: format!("nil ker ∪ = {}", nk.value),
        exit_code: 0,
    })
}

fn e0_report(model: &Arc<SullivanModel>, path: &str, cap: i64) -> CmdResult {
    let rep = toomer_e0(model, cap)?;
    let (value, status, exit_code) = value_status(&rep.value);
    let headline = match value {
        Some(v) => format!("e₀ = {v}"),
        None => "e₀ undetermined at this cap".into(),
    };
    Ok(Report {
        command: "e0".into(),
        model: path.into(),
        cap,
        complete: rep.complete,
        value,
        status,
        witnesses: rep.witnesses,
        headline,
        exit_code,
    })
}

fn htc_report(model: &Arc<SullivanModel>, path: &str, cap: i64, budget: Option<u32>) -> CmdResult {
    for w in DiagonalData::new(model, cap)?.truncation_warnings() {
        eprintln!("warning: {w}");
    }
    let out = htc(model, cap, budget)?;
    let (value, status, exit_code) = value_status(&out.report.value);
    let headline = match value {
        Some(v) if status == "ok" => format!("htc = {v}"),
        Some(v) => format!("htc ≥ {v} (budget exhausted)"),
        None => "htc undetermined".into(),
    };
    Ok(Report {
        command: "htc".into(),
        model: path.into(),
        cap,
        complete: out.report.complete,
        value,
        status,
        witnesses: out.report.witnesses,
        headline,
        exit_code,
    })
}

fn mtc_report(model: &Arc<SullivanModel>, path: &str, cap: i64, budget: Option<u32>) -> CmdResult {
    let dd = DiagonalData::new(model, cap)?;
    for w in dd.truncation_warnings() {
        eprintln!("warning: {w}");
    }
    let budget = budget.unwrap_or_else(|| match dd.base_formal_dim() {
        Some(n) => (2 * n).max(1) as u32,
        None => cap.max(1) as u32,
    });
    let mut witnesses = Vec::new();
    for n in 0..=budget {
        match mtc_attempt_with(&dd, n)? {
            MtcAttempt::Built {
                witness,
                verification_passed,
            } => {
                let status = if verification_passed { "ok" } else { "witness_failed" };
                witnesses.push(Witness {
                    kind: "retraction".into(),
                    degree: None,
                    detail: format!(
                        "verified retraction for p_{n} (semifree generators: {})",
                        witness.module.generators().len()
                    ),
                });
                return Ok(Report {
                    command: "mtc".into(),
                    model: path.into(),
                    cap,
                    complete: dd.injectivity_complete(),
                    value: Some(n),
                    status: status.into(),
                    witnesses,
                    headline: format!("mtc★ = {n} (retraction built and verified)"),
                    exit_code: if verification_passed { 0 } else { 2 },
                });
            }
            MtcAttempt::NoRetraction { degree, detail } => {
                witnesses.push(Witness {
                    kind: "no_retraction".into(),
                    degree: Some(degree),
                    detail: format!("n = {n}: {detail}"),
                });
            }
            MtcAttempt::NotPd { reason } => {
                return Ok(Report {
                    command: "mtc".into(),
                    model: path.into(),
                    cap,
                    complete: false,
                    value: None,
                    status: "refused".into(),
                    witnesses: vec![Witness {
                        kind: "pd_failure".into(),
                        degree: None,
                        detail: reason.clone(),
                    }],
                    headline: format!("refused: {reason}"),
                    exit_code: 2,
                });
            }
            MtcAttempt::Undetermined { detail } => {
                witnesses.push(Witness {
                    kind: "undetermined".into(),
                    degree: None,
                    detail: format!("n = {n}: {detail}"),
                });
                return Ok(Report {
                    command: "mtc".into(),
                    model: path.into(),
                    cap,
                    complete: false,
                    value: None,
                    status: "undetermined_at_cap".into(),
                    witnesses,
                    headline: format!("mtc undetermined at cap {cap} (lift inconsistent at n = {n})"),
                    exit_code: 3,
                });
            }
        }
    }
    Ok(Report {
        command: "mtc".into(),
        model: path.into(),
        cap,
        complete: false,
        value: Some(budget + 1),
        status: "lower_bound_undetermined".into(),
        witnesses,
        headline: format!("no retraction found for n ≤ {budget}: mtc ≥ {}", budget + 1),
        exit_code: 3,
    })
}

fn theorem_report(
    model: &Arc<SullivanModel>,
    path: &str,
    cap: i64,
    budget: Option<u32>,
) -> CmdResult {
    let rep = verify_theorem(model, cap, budget)?;
    for w in &rep.warnings {
        eprintln!("warning: {w}");
    }
    let mut witnesses = rep.witnesses;
    if let Some(htc_out) = &rep.htc {
        witnesses.extend(htc_out.report.witnesses.iter().cloned());
    }
    let (value, status, headline, exit_code) = match rep.verdict {
        TheoremVerdict::Verified { value } => (
            Some(value),
            "verified".to_string(),
            format!("htc = mtc★ = {value}: VERIFIED"),
            0,
        ),
        TheoremVerdict::Refused { reason } => (
            None,
            "refused".to_string(),
            format!("refused: {reason}"),
            2,
        ),
        TheoremVerdict::Inconclusive { detail } => (
            None,
            "undetermined_at_cap".to_string(),
            format!("inconclusive: {detail}"),
            3,
        ),
        TheoremVerdict::Violated { htc, mtc_star } => (
            None,
            "violated".to_string(),
            format!("VIOLATION: htc = {htc} but mtc★ = {mtc_star}"),
            2,
        ),
    };
    Ok(Report {
        command: "verify-theorem".into(),
        model: path.into(),
        cap,
        complete: rep.complete,
        value,
        status,
        witnesses,
        headline,
        exit_code,
    })
}

fn retract_report(model: &Arc<SullivanModel>, path: &str, cap: i64, n: u32) -> CmdResult {
    let dd = DiagonalData::new(model, cap)?;
    let (witnesses, value, status, headline, exit_code) = match mtc_attempt_with(&dd, n)? {
        MtcAttempt::Built {
            witness,
            verification_passed,
        } => {
            let detail = format!(
                "P has {} semifree generators over {} stages; all witness identities verified: {}",
                witness.module.generators().len(),
                witness.semifree_stages,
                verification_passed
            );
            (
                vec![Witness {
                    kind: "retraction".into(),
                    degree: None,
                    detail,
                }],
                Some(n),
                if verification_passed { "ok" } else { "witness_failed" }.to_string(),
                format!("retraction built for p_{n}"),
                if verification_passed { 0 } else { 2 },
            )
        }
        MtcAttempt::NoRetraction { degree, detail } => (
            vec![Witness {
                kind: "no_retraction".into(),
                degree: Some(degree),
                detail: detail.clone(),
            }],
            None,
            "no_retraction".to_string(),
            format!("no retraction for p_{n}: {detail}"),
            0,
        ),
        MtcAttempt::NotPd { reason } => (
            vec![Witness {
                kind: "pd_failure".into(),
                degree: None,
                detail: reason.clone(),
            }],
            None,
            "refused".to_string(),
            format!("refused: {reason}"),
            2,
        ),
        MtcAttempt::Undetermined { detail } => (
            vec![Witness {
                kind: "undetermined".into(),
                degree: None,
                detail: detail.clone(),
            }],
            None,
            "undetermined_at_cap".to_string(),
            format!("undetermined at cap: {detail}"),
            3,
        ),
    };
    Ok(Report {
        command: "retract".into(),
        model: path.into(),
        cap,
        complete: dd.injectivity_complete(),
        value,
        status,
        witnesses,
        headline,
        exit_code,
    })
}

fn audit_report(model: &Arc<SullivanModel>, path: &str, cap: i64) -> CmdResult {
    let audit = inequality_audit(model, cap)?;
    let witnesses: Vec<Witness> = audit
        .lines
        .iter()
        .map(|l| Witness {
            kind: if l.holds { "inequality_holds" } else { "inequality_violated" }.into(),
            degree: None,
            detail: l.description.clone(),
        })
        .collect();
    let all = audit.all_hold();
    Ok(Report {
        command: "audit".into(),
        model: path.into(),
        cap,
        complete: true,
        value: audit.htc,
        status: if all { "ok" } else { "violated" }.into(),
        witnesses,
        headline: if all {
            format!(
                "nil ker ∪ = {} ≤ htc = {} ≤ 2·e₀ = {}",
                audit.nil_ker,
                audit.htc.map_or("?".into(), |v| v.to_string()),
                audit.e0.map_or("?".into(), |v| (2 * v).to_string()),
            )
        } else {
            "inequality audit VIOLATED".into()
        },
        exit_code: if all { 0 } else { 2 },
    })
}
