//! Sampling the boundary curve and writing it as CSV or SVG.

use std::fmt::Write;

use ctlab_core::kleinian::{ct_batch, solve_fiber_representation, CtStatus, Monodromy, SolverOptions};
use ctlab_core::words::{word_at_parameter, BoundaryWord};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::CliError;

/// Each sample sits at a random point of its own slot `[k/K, (k+1)/K)`,
/// resolved to this many sub-steps.
const SLOT_STEPS: u64 = 1 << 20;
/// Stereographic coordinates are clipped to this box in the SVG.
const SVG_EXTENT: f64 = 4.0;

pub const CSV_HEADER: &str = "t,x,y,z,estimate";

#[derive(Clone, Debug, PartialEq)]
pub struct DrawConfig {
    pub monodromy: Monodromy,
    pub samples: usize,
    pub depth: usize,
    pub tol: f64,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvePoint {
    /// Boundary parameter in `[0, 1)`.
    pub t: f64,
    pub point: [f64; 3],
    pub estimate: f64,
    pub converged: bool,
}

/// Boundary samples in increasing parameter order with their images.
pub fn sample_curve(cfg: &DrawConfig) -> Result<Vec<CurvePoint>, CliError> {
    if cfg.depth == 0 {
        return Err(CliError::Input("depth must be positive".into()));
    }
    if cfg.samples == 0 {
        return Ok(Vec::new());
    }
    let rep = solve_fiber_representation(&cfg.monodromy, &SolverOptions::default())?;
    let den = (cfg.samples as u64)
        .checked_mul(SLOT_STEPS)
        .ok_or_else(|| CliError::Input(format!("{} samples is too many", cfg.samples)))?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let nums: Vec<u64> = (0..cfg.samples as u64)
        .map(|k| k * SLOT_STEPS + rng.gen_range(0..SLOT_STEPS))
        .collect();
    let words = nums
        .iter()
        .map(|&n| word_at_parameter(n, den, cfg.depth).map(BoundaryWord::stored))
        .collect::<Result<Vec<_>, _>>()?;
    let images = ct_batch(&rep, &words, cfg.depth, cfg.tol);
    nums.iter()
        .zip(images)
        .map(|(&n, s)| {
            let s = s?;
            Ok(CurvePoint {
                t: n as f64 / den as f64,
                point: s.approximant.coords(),
                estimate: s.estimate,
                converged: s.status == CtStatus::Converged,
            })
        })
        .collect()
}

pub fn to_csv(points: &[CurvePoint]) -> String {
    let mut out = String::with_capacity(96 * (points.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for p in points {
        let [x, y, z] = p.point;
        writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            p.t, x, y, z, p.estimate
        )
        .expect("writing to a string");
    }
    out
}

/// Stereographic projection from the north pole; `None` outside the box.
fn project(p: [f64; 3]) -> Option<(f64, f64)> {
    let [x, y, z] = p;
    let d = 1.0 - z;
    if d <= 0.0 {
        return None;
    }
    let (u, v) = (x / d, y / d);
    (u.abs() <= SVG_EXTENT && v.abs() <= SVG_EXTENT).then_some((u, -v))
}

/// One polyline per run of consecutive points inside the box.
pub fn to_svg(points: &[CurvePoint]) -> String {
    let e = SVG_EXTENT;
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="800" height="800">"#,
        -e,
        -e,
        2.0 * e,
        2.0 * e
    )
    .expect("writing to a string");
    let mut runs: Vec<Vec<(f64, f64)>> = vec![Vec::new()];
    for p in points {
        match project(p.point) {
            Some(q) => runs.last_mut().expect("nonempty").push(q),
            None => runs.push(Vec::new()),
        }
    }
    for run in runs.iter().filter(|r| r.len() > 1) {
        out.push_str(r#"<polyline fill="none" stroke="black" stroke-width="0.004" points=""#);
        for (i, (u, v)) in run.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            write!(out, "{u:.6},{v:.6}").expect("writing to a string");
        }
        out.push_str("\"/>\n");
    }
    out.push_str("</svg>\n");
    out
}
