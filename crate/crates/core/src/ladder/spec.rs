//! The split-spec text format: `key=value` lines, `#` comments.
//!
//! ```text
//! blocks=4
//! radius=5
//! kinds=split            # one value for every block, or a comma list
//! components=2           # tubes started in each split block
//! component_radius=1     # tube cross-sections are balls of this radius
//! tube_span_min=1
//! tube_span_max=2
//! monodromy=2,1,1,1
//! seed=7
//! ```

use std::str::FromStr;

use serde::Serialize;

use super::LadderError;
use crate::kleinian::Monodromy;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockKind {
    /// Glued by the identity, no tubes.
    Thick,
    /// Glued by the monodromy automorphism, with tubes.
    Split,
}

impl FromStr for BlockKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "thick" => Ok(BlockKind::Thick),
            "split" => Ok(BlockKind::Split),
            other => Err(format!("unknown block kind {other:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitSpec {
    pub blocks: usize,
    pub radius: usize,
    pub kinds: Vec<BlockKind>,
    pub components: usize,
    pub component_radius: usize,
    /// Inclusive bounds on the number of blocks a tube spans.
    pub tube_span: (usize, usize),
    pub monodromy: Monodromy,
    pub seed: u64,
}

impl SplitSpec {
    /// All blocks thick: sheets glued by the identity, nothing coned off.
    pub fn identity_stack(blocks: usize, radius: usize) -> Self {
        SplitSpec {
            blocks,
            radius,
            kinds: vec![BlockKind::Thick; blocks],
            components: 0,
            component_radius: 1,
            tube_span: (1, 1),
            monodromy: Monodromy::figure_eight(),
            seed: 0,
        }
    }

    /// All blocks split by the figure-eight monodromy, two tubes per block.
    pub fn monodromy_stack(blocks: usize, radius: usize, seed: u64) -> Self {
        SplitSpec {
            blocks,
            radius,
            kinds: vec![BlockKind::Split; blocks],
            components: 2,
            component_radius: 1,
            tube_span: (1, 2),
            monodromy: Monodromy::figure_eight(),
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), LadderError> {
        let fail = |m: String| Err(LadderError::Infeasible(m));
        if self.radius < 2 {
            return fail(format!("radius {} < 2", self.radius));
        }
        if self.blocks < 1 {
            return fail("at least one block is required".into());
        }
        if self.kinds.len() != self.blocks {
            return fail(format!(
                "{} block kinds given for {} blocks",
                self.kinds.len(),
                self.blocks
            ));
        }
        let has_split = self.kinds.contains(&BlockKind::Split);
        if has_split && self.components == 0 {
            return fail("every split block needs at least one tube".into());
        }
        if self.component_radius > self.radius {
            return fail(format!(
                "component radius {} exceeds sheet radius {}",
                self.component_radius, self.radius
            ));
        }
        let (lo, hi) = self.tube_span;
        if lo < 1 || lo > hi {
            return fail(format!("tube span bounds {lo}..{hi} are empty"));
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self, LadderError> {
        let mut spec = SplitSpec::identity_stack(1, 3);
        let mut kinds: Option<(usize, Vec<BlockKind>)> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |message: String| LadderError::Spec { line, message };
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| err(format!("expected key=value, got {content:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            let num = |v: &str| -> Result<u64, LadderError> {
                v.parse()
                    .map_err(|_| err(format!("{key}: invalid number {v:?}")))
            };
            match key {
                "blocks" => spec.blocks = num(value)? as usize,
                "radius" => spec.radius = num(value)? as usize,
                "components" => spec.components = num(value)? as usize,
                "component_radius" => spec.component_radius = num(value)? as usize,
                "tube_span_min" => spec.tube_span.0 = num(value)? as usize,
                "tube_span_max" => spec.tube_span.1 = num(value)? as usize,
                "seed" => spec.seed = num(value)?,
                "monodromy" => {
                    spec.monodromy = value.parse().map_err(|e| err(format!("{e}")))?;
                }
                "kinds" => {
                    let ks = value
                        .split(',')
                        .map(BlockKind::from_str)
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(err)?;
                    kinds = Some((line, ks));
                }
                other => return Err(err(format!("unknown key {other:?}"))),
            }
        }
        spec.kinds = match kinds {
            None => vec![BlockKind::Thick; spec.blocks],
            Some((_, ks)) if ks.len() == 1 => vec![ks[0]; spec.blocks],
            Some((line, ks)) if ks.len() != spec.blocks => {
                return Err(LadderError::Spec {
                    line,
                    message: format!("{} kinds given for {} blocks", ks.len(), spec.blocks),
                })
            }
            Some((_, ks)) => ks,
        };
        Ok(spec)
    }
}
