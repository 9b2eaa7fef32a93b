//! One function per subcommand. Each returns what to print, the report
//! payload, and an optional failure to signal after printing.

use std::path::Path;

use mgs_core::layering::level_chains;
use mgs_core::{
    enumerate_contiguous_paths, enumerate_full_shuffles, export_dot, to_matrix, verdict, verify_theorem_a,
    verify_theorem_b, word_to_path, Certificate, ContiguousPath, ExchangeMatrix, Layering, LayeringMode,
    MutationSequence, ReducedWord,
};
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::input::{load_eta, load_matrix, load_quiver, parse_seq};

pub struct Output {
    pub text: String,
    pub inputs: Value,
    pub payload: Value,
    pub failure: Option<CliError>,
}

impl Output {
    fn ok(text: String, inputs: Value, payload: Value) -> Output {
        Output {
            text,
            inputs,
            payload,
            failure: None,
        }
    }
}

pub enum MutateTarget {
    At(String),
    Seq(String),
}

pub fn mutate(matrix: &Path, target: &MutateTarget) -> CliResult<Output> {
    let b = load_matrix(matrix)?;
    let seq = match target {
        MutateTarget::At(k) => {
            let seq = parse_seq(k)?;
            if seq.len() != 1 {
                return Err(CliError::Parse(format!("--at expects one label, got {k:?}")));
            }
            seq
        }
        MutateTarget::Seq(s) => parse_seq(s)?,
    };
    let inputs = json!({ "matrix": b, "seq": seq });
    let out = b.mutate_seq(&seq).map_err(|e| CliError::from_core(e, inputs.clone()))?;
    let payload = serde_json::to_value(&out).expect("matrix serialization cannot fail");
    Ok(Output::ok(out.to_json(), inputs, payload))
}

pub fn check_green(matrix: &Path, seq: &str) -> CliResult<Output> {
    let b = load_matrix(matrix)?;
    let seq = parse_seq(seq)?;
    let inputs = json!({ "matrix": b, "seq": seq });
    let report = verdict(&b, &seq).map_err(|e| CliError::from_core(e, inputs.clone()))?;
    let payload = serde_json::to_value(&report).expect("verdict serialization cannot fail");
    Ok(Output::ok(report.to_string(), inputs, payload))
}

/// Failure to attach to a certificate: a counterexample is internal, unmet
/// hypotheses or a non-maximal verdict are precondition failures.
fn judge(cert: &Certificate) -> Option<CliError> {
    if cert.is_counterexample {
        return Some(CliError::Internal {
            message: format!("hypotheses hold but the verdict is {}", cert.verdict),
            repro: serde_json::to_value(&cert.instance).expect("instance serialization cannot fail"),
        });
    }
    if !cert.hypotheses_hold {
        let why = match (cert.first_layered_violation(), &cert.fullness) {
            (Some(v), _) => format!("layered check failed: {v}"),
            (None, Some(f)) => format!("sequence is not full: {f}"),
            (None, None) => "hypotheses do not hold".to_string(),
        };
        return Some(CliError::Domain(format!("{why}; verdict {}", cert.verdict)));
    }
    if !cert.truncations_pass() {
        return Some(CliError::Internal {
            message: "truncation check failed on a certified run".to_string(),
            repro: serde_json::to_value(&cert.instance).expect("instance serialization cannot fail"),
        });
    }
    None
}

fn exchange_eta(b: &ExchangeMatrix, eta_path: &Path) -> CliResult<Layering> {
    let eta = load_eta(eta_path, LayeringMode::ExchangeOnly)?;
    let eta = match eta.mode() {
        LayeringMode::ExchangeOnly => eta,
        LayeringMode::Full => eta.restrict_to_exchangeable(),
    };
    if let Some(v) = b.ex().iter().find(|&&v| !eta.contains(v)) {
        return Err(CliError::Parse(format!("{}: no level for vertex {v}", eta_path.display())));
    }
    Ok(eta)
}

pub enum TsystemSource {
    Seq(String),
    Enumerate { limit: usize },
}

pub fn tsystem(matrix: &Path, eta_path: &Path, source: &TsystemSource) -> CliResult<Output> {
    let b = load_matrix(matrix)?;
    let eta = exchange_eta(&b, eta_path)?;
    let seqs: Vec<MutationSequence> = match source {
        TsystemSource::Seq(s) => vec![parse_seq(s)?],
        TsystemSource::Enumerate { limit } => enumerate_full_shuffles(&eta, *limit),
    };
    let inputs = json!({ "matrix": b, "eta": eta });
    let mut certs = Vec::with_capacity(seqs.len());
    let mut failure = None;
    for seq in &seqs {
        let repro = json!({ "matrix": b, "eta": eta, "seq": seq });
        let cert = verify_theorem_b(&b, &eta, seq).map_err(|e| CliError::from_core(e, repro))?;
        if failure.is_none() {
            failure = judge(&cert);
        }
        certs.push(cert);
    }
    let payload = serde_json::to_value(&certs).expect("certificate serialization cannot fail");
    let text = match source {
        TsystemSource::Seq(_) => certs[0].to_json_pretty(),
        TsystemSource::Enumerate { .. } => serde_json::to_string_pretty(&payload).expect("valid JSON"),
    };
    log::info!("{} certificate(s)", certs.len());
    Ok(Output {
        text,
        inputs,
        payload,
        failure,
    })
}

pub fn paths(n: usize, limit: usize, words: bool) -> CliResult<Output> {
    if n == 0 {
        return Err(CliError::Domain("--n must be at least 1".to_string()));
    }
    let paths = enumerate_contiguous_paths(n, limit);
    let lines: Vec<String> = paths
        .iter()
        .map(|p| {
            if words {
                word_line(&p.word())
            } else {
                p.perms().iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" -> ")
            }
        })
        .collect();
    let inputs = json!({ "n": n, "limit": limit, "words": words });
    Ok(Output::ok(lines.join("\n"), inputs, json!(lines)))
}

fn word_line(w: &ReducedWord) -> String {
    w.0.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

pub enum PathChoice {
    Index(usize),
    Word(String),
}

pub fn theorem_a(eta_path: &Path, choice: &PathChoice, matrix: Option<&Path>) -> CliResult<Output> {
    let eta = load_eta(eta_path, LayeringMode::Full)?;
    if eta.mode() != LayeringMode::Full {
        return Err(CliError::Domain(format!("{}: layering must be in full mode", eta_path.display())));
    }
    let n = eta.domain().len();
    let path: ContiguousPath = match choice {
        PathChoice::Index(i) => enumerate_contiguous_paths(n, i.saturating_add(1))
            .into_iter()
            .nth(*i)
            .ok_or_else(|| CliError::Index(format!("path index {i} out of range for N = {n}")))?,
        PathChoice::Word(w) => {
            let word = ReducedWord::parse(w).map_err(CliError::Parse)?;
            word_to_path(n, &word).map_err(|e| CliError::from_core(e, json!({ "n": n, "word": word })))?
        }
    };
    let b = match matrix {
        Some(p) => load_matrix(p)?,
        None => to_matrix(&level_chains(&eta)).map_err(|e| CliError::from_core(e, json!({ "eta": eta })))?,
    };
    let inputs = json!({ "matrix": b, "eta": eta, "word": path.word() });
    let cert = verify_theorem_a(&b, &eta, &path).map_err(|e| CliError::from_core(e, inputs.clone()))?;
    let failure = judge(&cert);
    let payload = serde_json::to_value(&cert).expect("certificate serialization cannot fail");
    Ok(Output {
        text: cert.to_json_pretty(),
        inputs,
        payload,
        failure,
    })
}

pub fn export(file: &Path, eta_path: Option<&Path>) -> CliResult<Output> {
    let q = load_quiver(file)?;
    let eta = eta_path.map(|p| load_eta(p, LayeringMode::Full)).transpose()?;
    let dot = export_dot(&q, eta.as_ref());
    let inputs = json!({ "quiver": q, "eta": eta });
    let text = dot.trim_end().to_string();
    Ok(Output::ok(text, inputs, Value::String(dot)))
}
