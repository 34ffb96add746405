use std::path::Path;
use std::thread;

use lcbayes_core::decision::{FiniteProblem, Procedure};
use lcbayes_core::parametric::{bernoulli_boundary_report, normal_location_report};
use lcbayes_core::synthesis::{classify, game_lp, synthesize_prior, verify_epsilon_bayes};
use lcbayes_core::{lc, LcNumber};

use crate::error::{CliError, CliResult};
use crate::format::{read_problem, read_procedures, LpJson};
use crate::report::{BernoulliJson, ClassificationJson, LcEvalJson, NormalLocationJson, SynthesisJson};

/// Classifies each procedure; procedures run on scoped threads and the
/// reports come back in input order.
pub fn classify_all(p: &FiniteProblem, ds: &[Procedure]) -> CliResult<Vec<ClassificationJson>> {
    let workers = thread::available_parallelism().map_or(1, |n| n.get());
    let mut out = Vec::with_capacity(ds.len());
    for (chunk_no, chunk) in ds.chunks(workers.max(1)).enumerate() {
        let base = chunk_no * workers.max(1);
        let results: Vec<_> = thread::scope(|s| {
            let handles: Vec<_> = chunk.iter().map(|d| s.spawn(move || classify(p, d))).collect();
            handles.into_iter().map(|h| h.join().expect("classification thread panicked")).collect()
        });
        for (i, (d, r)) in chunk.iter().zip(results).enumerate() {
            out.push(ClassificationJson::new(base + i, d, &r?));
        }
    }
    Ok(out)
}

pub fn finite_classify(problem: &Path, procedures: &Path) -> CliResult<Vec<ClassificationJson>> {
    let p = read_problem(problem)?;
    let ds = read_procedures(procedures, &p)?;
    classify_all(&p, &ds)
}

pub fn finite_synthesize(problem: &Path, procedures: &Path, index: usize, emit_lp: bool) -> CliResult<SynthesisJson> {
    let p = read_problem(problem)?;
    let ds = read_procedures(procedures, &p)?;
    let d = ds
        .get(index)
        .ok_or_else(|| CliError::Usage(format!("procedure index {index} out of range ({} procedures)", ds.len())))?;
    let g = synthesize_prior(&p, d)?;
    let verified = verify_epsilon_bayes(&p, d, &g.witness_prior, &g.slack)?;
    if !verified {
        return Err(lcbayes_core::Error::CertificateFailure("witness prior does not certify the slack".into()).into());
    }
    let mut out = SynthesisJson::new(index, &g, verified);
    if emit_lp {
        out.lp = Some(LpJson::from(&game_lp(&p, d)?));
    }
    Ok(out)
}

pub fn example_normal_location(dim: usize, order: u32) -> CliResult<NormalLocationJson> {
    let r = normal_location_report(dim, &LcNumber::infinite_unit(), order)?;
    Ok(NormalLocationJson::new(&r, order))
}

pub fn example_bernoulli_boundary() -> CliResult<BernoulliJson> {
    Ok((&bernoulli_boundary_report()?).into())
}

pub fn lc_eval(expr: &str, order: u32) -> CliResult<LcEvalJson> {
    let parsed = lc::parse_expr(expr).map_err(|e| CliError::Schema(format!("parse error: {e}")))?;
    let x = parsed.eval(order)?;
    Ok(LcEvalJson::new(expr, order, &x))
}
