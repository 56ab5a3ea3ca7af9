//! Proof transformations: admissible-rule constructions, rule permutation,
//! end-activation, linearization into LNGL, normalization, and translations
//! between the calculi.
//!
//! Every pass is a pure function from a checked proof to a new proof; the
//! output is expected to pass the target calculus' checker, which the tests
//! verify rather than assume.

mod admit;
mod cyclic;
mod end_active;
mod linearize;
mod normalize;
mod translate;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::proof::{AnyProof, Calculus};

pub use admit::{
    admit, admit_contract, admit_substitution, admit_weaken, admit_weaken_gentzen,
    admit_weaken_nested, apply_inverse, prove_general_id, prove_general_id_gentzen, AdmittedRule,
};
pub use cyclic::unfold_glcirc;
pub use end_active::{permute_down, to_end_active, to_end_active_with_report};
pub use linearize::linearize;
pub use normalize::normalize_lngl;
pub use translate::{csgl_to_g3gl_embed, glseq_to_g3gl, lngl_to_glseq};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("shape violation: {0}")]
    ShapeViolation(String),
    #[error("not permutable: {0}")]
    NotPermutable(String),
    #[error("no fixpoint after {0} steps")]
    InternalNonTermination(usize),
    #[error("not end-active: {0}")]
    NotEndActive(String),
    #[error("not in normal form: {0}")]
    NotNormalForm(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl TransformError {
    /// Stable name of the error kind, used as the reason code in reports.
    pub fn code(&self) -> &'static str {
        match self {
            TransformError::NotApplicable(_) => "NotApplicable",
            TransformError::ShapeViolation(_) => "ShapeViolation",
            TransformError::NotPermutable(_) => "NotPermutable",
            TransformError::InternalNonTermination(_) => "InternalNonTermination",
            TransformError::NotEndActive(_) => "NotEndActive",
            TransformError::NotNormalForm(_) => "NotNormalForm",
            TransformError::Unsupported(_) => "Unsupported",
        }
    }
}

/// Statistics for one pass over one proof.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PassReport {
    pub pass: String,
    pub input: String,
    pub output: String,
    pub nodes_in: usize,
    pub nodes_out: usize,
    pub height_in: usize,
    pub height_out: usize,
    pub permutations: usize,
}

impl PassReport {
    pub fn new(pass: Pass, input: &AnyProof, output: &AnyProof, permutations: usize) -> PassReport {
        PassReport {
            pass: pass.name().to_string(),
            input: input.conclusion_text(),
            output: output.conclusion_text(),
            nodes_in: input.size(),
            nodes_out: output.size(),
            height_in: input.height(),
            height_out: output.height(),
            permutations,
        }
    }
}

impl fmt::Display for PassReport {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            out,
            "{}\tnodes {} -> {}\theight {} -> {}\tpermutations {}\t{}",
            self.pass,
            self.nodes_in,
            self.nodes_out,
            self.height_in,
            self.height_out,
            self.permutations,
            self.output
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pass {
    EndActive,
    Linearize,
    Normalize,
    ToGlseq,
    ToG3gl,
    Embed,
}

impl Pass {
    pub const ALL: [Pass; 6] = [
        Pass::EndActive,
        Pass::Linearize,
        Pass::Normalize,
        Pass::ToGlseq,
        Pass::ToG3gl,
        Pass::Embed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Pass::EndActive => "end-active",
            Pass::Linearize => "linearize",
            Pass::Normalize => "normalize",
            Pass::ToGlseq => "to-glseq",
            Pass::ToG3gl => "to-g3gl",
            Pass::Embed => "embed",
        }
    }

    /// The calculus of the proofs this pass accepts.
    pub fn source(self) -> Calculus {
        match self {
            Pass::EndActive | Pass::Linearize | Pass::Embed => Calculus::CSGL,
            Pass::Normalize | Pass::ToGlseq => Calculus::LNGL,
            Pass::ToG3gl => Calculus::GLseq,
        }
    }
}

impl std::str::FromStr for Pass {
    type Err = String;

    fn from_str(s: &str) -> Result<Pass, String> {
        Pass::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| format!("unknown pass '{s}'"))
    }
}

/// Runs one pass on a proof of the matching kind.
pub fn run_pass(pass: Pass, input: &AnyProof) -> Result<(AnyProof, PassReport), TransformError> {
    if input.calculus() != pass.source() {
        return Err(TransformError::NotApplicable(format!(
            "{} expects a {} proof, got {}",
            pass.name(),
            pass.source(),
            input.calculus()
        )));
    }
    let mut permutations = 0;
    let output: AnyProof = match (pass, input) {
        (Pass::EndActive, AnyProof::Labeled(p)) => {
            let (q, n) = to_end_active_with_report(p)?;
            permutations = n;
            q.into()
        }
        (Pass::Linearize, AnyProof::Labeled(p)) => linearize(p)?.0.into(),
        (Pass::Embed, AnyProof::Labeled(p)) => csgl_to_g3gl_embed(p).into(),
        (Pass::Normalize, AnyProof::Nested(p)) => normalize_lngl(p)?.into(),
        (Pass::ToGlseq, AnyProof::Nested(p)) => lngl_to_glseq(p)?.into(),
        (Pass::ToG3gl, AnyProof::Gentzen(p)) => glseq_to_g3gl(p)?.into(),
        _ => unreachable!("calculus tags determine the sequent kind"),
    };
    let report = PassReport::new(pass, input, &output, permutations);
    Ok((output, report))
}
