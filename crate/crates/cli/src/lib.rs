//! Command implementations for the `ctlab` binary.
//!
//! Every command computes a report, writes it (atomically when a path is
//! given) and returns whether its pass criteria hold.

mod args;
pub mod coarse;
pub mod draw;
mod error;
pub mod ladder;
pub mod leaves;
pub mod output;
pub mod poles;

pub use args::{
    CoarseArgs, CoarseCommand, Cli, Command, CtDrawArgs, LadderAuditArgs, LamPolesArgs,
    VerifyLeavesArgs,
};
pub use error::{CliError, EXIT_FAIL, EXIT_INPUT, EXIT_NUMERICAL};

use ctlab_core::coarse::parse_graph;
use ctlab_core::ladder::{SeparationBounds, SplitSpec};
use serde_json::json;

use output::{emit, ensure_dir, read_input, render_json, write_atomic};

/// Runs one command; `Ok(true)` when its pass criteria hold.
pub fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::CtDraw(a) => ct_draw(a),
        Command::VerifyLeaves(a) => verify_leaves(a),
        Command::Coarse(a) => coarse(a),
        Command::LadderAudit(a) => ladder_audit(a),
        Command::LamPoles(a) => lam_poles(a),
    }
}

fn ct_draw(a: CtDrawArgs) -> Result<bool, CliError> {
    let points = draw::sample_curve(&draw::DrawConfig {
        monodromy: a.monodromy,
        samples: a.samples,
        depth: a.depth,
        tol: a.tol,
        seed: a.seed,
    })?;
    emit(a.out.as_deref(), &draw::to_csv(&points))?;
    if let Some(svg) = &a.svg {
        write_atomic(svg, &draw::to_svg(&points))?;
    }
    let converged = points.iter().filter(|p| p.converged).count();
    eprintln!(
        "{converged} of {} samples converged within {:e}",
        points.len(),
        a.tol
    );
    Ok(points.iter().all(|p| p.estimate.is_finite()))
}

fn verify_leaves(a: VerifyLeavesArgs) -> Result<bool, CliError> {
    let report = leaves::verify_leaves(&leaves::VerifyConfig {
        monodromy: a.monodromy,
        leaves: a.leaves,
        depth: a.depth,
        baseline_depth: a.baseline_depth,
        tol: a.tol,
        ratio: a.ratio,
        seed: a.seed,
    })?;
    emit(a.out.as_deref(), &render_json(&report))?;
    Ok(report.pass)
}

fn coarse(a: CoarseArgs) -> Result<bool, CliError> {
    let file = parse_graph(&read_input(&a.graph)?)?;
    let op = match a.operation {
        CoarseCommand::Delta => coarse::CoarseOp::Delta,
        CoarseCommand::Electrocute => coarse::CoarseOp::Electrocute,
        CoarseCommand::Track => coarse::CoarseOp::Track,
    };
    let sampling = match (a.samples, a.seed) {
        (Some(n), Some(s)) => Some((n, s)),
        (Some(_), None) => return Err(CliError::Input("--samples needs --seed".into())),
        _ => None,
    };
    let (report, pass) = coarse::run_coarse(op, &file, sampling)?;
    emit(a.out.as_deref(), &render_json(&report))?;
    Ok(pass)
}

fn ladder_audit(a: LadderAuditArgs) -> Result<bool, CliError> {
    let spec = SplitSpec::parse(&read_input(&a.spec)?)?;
    let suite = ladder::audit_suite(
        &spec,
        &ladder::SuiteConfig {
            samples: a.samples,
            seed: a.seed,
            exhaustive: a.exhaustive,
            thresholds: ladder::Thresholds {
                lipschitz: a.lipschitz_bound,
                quasiconvexity: a.quasiconvexity_bound,
                separation: SeparationBounds {
                    c1: a.c1_bound,
                    k1: a.k1_bound,
                },
                component: a.component_bound,
            },
        },
    )?;
    match &a.out {
        Some(dir) => {
            ensure_dir(dir)?;
            for r in &suite.reports {
                write_atomic(&dir.join(format!("{}.json", r.audit)), &render_json(r))?;
            }
            write_atomic(&dir.join("summary.json"), &render_json(&suite.summary))?;
        }
        None => emit(
            None,
            &render_json(&json!({"reports": suite.reports, "summary": suite.summary})),
        )?,
    }
    for r in &suite.reports {
        eprintln!("{:<22} {}", r.audit, if r.pass { "pass" } else { "FAIL" });
    }
    Ok(suite.summary.pass)
}

fn lam_poles(a: LamPolesArgs) -> Result<bool, CliError> {
    let report = poles::lam_poles(&poles::PolesConfig {
        monodromy: a.monodromy,
        leaves: a.leaves,
        depth: a.depth,
        seed: a.seed,
    })?;
    emit(a.out.as_deref(), &render_json(&report))?;
    eprintln!("{}", report.message);
    Ok(report.pole_found)
}
