//! Leaf classes through transversal lifts and their pole witnesses.

use ctlab_core::kleinian::Monodromy;
use ctlab_core::lamination::{
    leaf_class_partition, sample_leaves, stable_slope, LeafClassPartition, Transversal,
};
use serde::Serialize;

use crate::CliError;

#[derive(Clone, Debug, PartialEq)]
pub struct PolesConfig {
    pub monodromy: Monodromy,
    pub leaves: usize,
    pub depth: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolesReport {
    pub monodromy: String,
    pub slope: String,
    pub seed: u64,
    pub intercepts: Vec<String>,
    pub partition: LeafClassPartition,
    pub pole_found: bool,
    pub message: String,
}

pub fn lam_poles(cfg: &PolesConfig) -> Result<PolesReport, CliError> {
    let slope = stable_slope(&cfg.monodromy);
    let leaves = sample_leaves(&slope, cfg.leaves, cfg.seed)?;
    let partition = leaf_class_partition(&leaves, &Transversal::standard(), cfg.depth)?;
    let pole_found = partition.pole_found();
    let message = if pole_found {
        format!("pole witness found at depth {}", cfg.depth)
    } else {
        format!("not found at depth {}", cfg.depth)
    };
    Ok(PolesReport {
        monodromy: cfg.monodromy.to_string(),
        slope: slope.to_string(),
        seed: cfg.seed,
        intercepts: leaves.iter().map(|l| l.intercept().to_string()).collect(),
        partition,
        pole_found,
        message,
    })
}
