//! The full chain from a formula to a G3GLext proof:
//! CSGL search, end-activation, linearization, normal form, GLseq, G3GLext.

use thiserror::Error;

use crate::check::{check_proof, CheckReport};
use crate::formula::Formula;
use crate::oracle::OracleVerdict;
use crate::proof::{AnyProof, Calculus};
use crate::search::{prove_formula, FormulaOutcome, SearchConfig, SearchError};
use crate::transform::{run_pass, Pass, PassReport, TransformError};

/// One proof produced along the way, with its checker verdict.
#[derive(Clone, Debug)]
pub struct Stage {
    pub name: &'static str,
    pub proof: AnyProof,
    pub report: Option<PassReport>,
    pub check: CheckReport,
}

impl Stage {
    pub fn file_name(&self, index: usize) -> String {
        format!("{}-{}.glp", index + 1, self.name)
    }
}

#[derive(Clone, Debug, Error)]
pub enum PipelineError {
    #[error("not provable; saturated sequent {saturated}")]
    NotProved {
        saturated: String,
        hint: Option<OracleVerdict>,
    },
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error("{stage}: {error}")]
    Transform { stage: &'static str, error: TransformError },
    #[error("{stage}: output rejected by its checker")]
    Rejected { stage: &'static str, check: CheckReport },
}

pub const STAGES: [&str; 6] = ["csgl", "end-active", "lngl", "normal", "glseq", "g3gl"];

const PASSES: [(Pass, &str); 5] = [
    (Pass::EndActive, "end-active"),
    (Pass::Linearize, "lngl"),
    (Pass::Normalize, "normal"),
    (Pass::ToGlseq, "glseq"),
    (Pass::ToG3gl, "g3gl"),
];

/// Runs every stage, stopping at the first failure. Each stage output is
/// checked before the next pass consumes it.
pub fn run_pipeline(f: &Formula, cfg: SearchConfig) -> Result<Vec<Stage>, PipelineError> {
    let proof = match prove_formula(f, Calculus::CSGL, cfg)? {
        FormulaOutcome::Proved(p) => p,
        FormulaOutcome::NotProved { saturated, hint } => {
            return Err(PipelineError::NotProved { saturated, hint })
        }
    };
    let first = Stage {
        name: STAGES[0],
        check: check_proof(&proof),
        proof,
        report: None,
    };
    if !first.check.accepted {
        return Err(PipelineError::Rejected { stage: first.name, check: first.check });
    }
    let mut stages = vec![first];
    for (pass, name) in PASSES {
        let input = &stages.last().expect("at least one stage").proof;
        let (proof, report) =
            run_pass(pass, input).map_err(|error| PipelineError::Transform { stage: name, error })?;
        let check = check_proof(&proof);
        if !check.accepted {
            return Err(PipelineError::Rejected { stage: name, check });
        }
        stages.push(Stage {
            name,
            proof,
            report: Some(report),
            check,
        });
    }
    Ok(stages)
}
