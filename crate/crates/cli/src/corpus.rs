//! Corpus layout: `<dir>/<family>/<digest>.json`, one entry per file.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use mgs_core::{generate, Certificate, FamilyKind, Instance, InstanceFamily};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::commands::Output;
use crate::error::{CliError, CliResult};

#[derive(Debug, Serialize, Deserialize)]
pub struct CorpusEntry {
    /// Whether every layered check passed when the instance was generated.
    pub trial_passed: bool,
    pub instance: Instance,
}

pub struct GenerateOptions {
    pub seed: u64,
    pub count: usize,
    pub max_n: usize,
    pub families: Vec<FamilyKind>,
}

fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for mut rest in compositions(n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

pub fn families(opts: &GenerateOptions) -> Vec<InstanceFamily> {
    let mut out = Vec::new();
    for kind in &opts.families {
        match kind {
            FamilyKind::DisjointChains => {
                out.extend(compositions(opts.max_n).into_iter().map(|sizes| InstanceFamily::DisjointChains {
                    sizes,
                    limit: opts.count,
                }))
            }
            FamilyKind::AcyclicFinest => out.push(InstanceFamily::AcyclicFinest {
                max_n: opts.max_n + 2,
                count: opts.count,
                max_label: 3,
                density: 0.5,
                seed: opts.seed,
            }),
            FamilyKind::RandomLayered => {
                for (i, sizes) in [vec![2, 2], vec![2, 1, 2], vec![3, 2]].into_iter().enumerate() {
                    out.push(InstanceFamily::RandomLayered {
                        sizes,
                        count: opts.count,
                        max_label: 3,
                        density: 0.4,
                        seed: opts.seed.wrapping_add(i as u64),
                    });
                }
            }
            FamilyKind::PathDerived => out.push(InstanceFamily::PathDerived {
                n: opts.max_n,
                path_limit: 4,
            }),
            FamilyKind::Manual => {}
        }
    }
    out
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Parse(format!("{}: {e}", path.display()))
}

pub fn generate_corpus(dir: &Path, opts: &GenerateOptions) -> CliResult<Output> {
    let mut counts: BTreeMap<&'static str, usize> = BTreeMap::new();
    let specs = families(opts);
    for family in &specs {
        let sub = dir.join(family.kind().dir_name());
        fs::create_dir_all(&sub).map_err(|e| io_err(&sub, e))?;
        for g in generate(family) {
            let entry = CorpusEntry {
                trial_passed: g.trial_passed,
                instance: g.instance,
            };
            let path = sub.join(format!("{}.json", entry.instance.digest()));
            let text = serde_json::to_string_pretty(&entry).expect("entry serialization cannot fail");
            fs::write(&path, text + "\n").map_err(|e| io_err(&path, e))?;
            *counts.entry(family.kind().dir_name()).or_default() += 1;
        }
    }
    let lines: Vec<String> = counts.iter().map(|(k, n)| format!("{k} {n}")).collect();
    let inputs = json!({
        "seed": opts.seed,
        "count": opts.count,
        "max_n": opts.max_n,
        "families": specs,
    });
    Ok(Output {
        text: lines.join("\n"),
        inputs,
        payload: json!(counts),
        failure: None,
    })
}

enum Outcome {
    Certified(Box<Certificate>),
    Negative(Box<Certificate>),
    Failure(String),
    Counterexample { message: String, instance: Box<Instance> },
}

fn corpus_files(dir: &Path) -> CliResult<Vec<PathBuf>> {
    let mut files = Vec::new();
    let top = fs::read_dir(dir).map_err(|e| io_err(dir, e))?;
    for sub in top {
        let sub = sub.map_err(|e| io_err(dir, e))?.path();
        if !sub.is_dir() {
            continue;
        }
        for f in fs::read_dir(&sub).map_err(|e| io_err(&sub, e))? {
            let f = f.map_err(|e| io_err(&sub, e))?.path();
            if f.extension().is_some_and(|x| x == "json") {
                files.push(f);
            }
        }
    }
    files.sort();
    Ok(files)
}

fn check(path: &Path, entry: CorpusEntry) -> Outcome {
    let digest = entry.instance.digest();
    if path.file_stem().and_then(|s| s.to_str()) != Some(digest.as_str()) {
        return Outcome::Failure(format!("digest mismatch, contents hash to {digest}"));
    }
    let cert = match entry.instance.certify() {
        Ok(c) => c,
        Err(e) if e.is_internal() => {
            return Outcome::Counterexample {
                message: e.to_string(),
                instance: Box::new(entry.instance),
            }
        }
        Err(e) => return Outcome::Failure(e.to_string()),
    };
    if cert.is_counterexample {
        return Outcome::Counterexample {
            message: format!("hypotheses hold but the verdict is {}", cert.verdict),
            instance: Box::new(entry.instance),
        };
    }
    if entry.trial_passed {
        if !cert.hypotheses_hold {
            return Outcome::Failure("hypotheses no longer hold".to_string());
        }
        if !cert.truncations_pass() {
            return Outcome::Counterexample {
                message: "truncation check failed".to_string(),
                instance: Box::new(entry.instance),
            };
        }
        Outcome::Certified(Box::new(cert))
    } else if cert.first_layered_violation().is_none() {
        Outcome::Failure("marked as failing the layered checks, but none fails".to_string())
    } else {
        Outcome::Negative(Box::new(cert))
    }
}

#[derive(Default, Serialize)]
struct Tally {
    instances: usize,
    certified: usize,
    negative: usize,
    failures: usize,
}

pub fn verify_corpus(dir: &Path, jobs: usize, certificates: Option<&Path>) -> CliResult<Output> {
    let files = corpus_files(dir)?;
    let mut entries = Vec::with_capacity(files.len());
    for f in files {
        let text = fs::read_to_string(&f).map_err(|e| io_err(&f, e))?;
        let entry: CorpusEntry =
            serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", f.display())))?;
        entries.push((f, entry));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Domain(format!("cannot start {jobs} workers: {e}")))?;
    let outcomes: Vec<(PathBuf, FamilyKind, Outcome)> = pool.install(|| {
        entries
            .into_par_iter()
            .map(|(f, entry)| {
                let family = entry.instance.family;
                let outcome = check(&f, entry);
                (f, family, outcome)
            })
            .collect()
    });

    if let Some(out) = certificates {
        fs::create_dir_all(out).map_err(|e| io_err(out, e))?;
    }
    let mut tallies: BTreeMap<&'static str, Tally> = BTreeMap::new();
    let mut failures = Vec::new();
    let mut counterexample = None;
    for (f, family, outcome) in &outcomes {
        let t = tallies.entry(family.dir_name()).or_default();
        t.instances += 1;
        match outcome {
            Outcome::Certified(cert) | Outcome::Negative(cert) => {
                if matches!(outcome, Outcome::Certified(_)) {
                    t.certified += 1;
                } else {
                    t.negative += 1;
                }
                if let Some(out) = certificates {
                    let p = out.join(format!("{}.json", cert.digest));
                    fs::write(&p, cert.to_json_pretty() + "\n").map_err(|e| io_err(&p, e))?;
                }
            }
            Outcome::Failure(why) => {
                t.failures += 1;
                failures.push(format!("{}: {why}", f.display()));
            }
            Outcome::Counterexample { message, instance } => {
                t.failures += 1;
                failures.push(format!("{}: {message}", f.display()));
                if counterexample.is_none() {
                    counterexample = Some((message.clone(), instance.clone()));
                }
            }
        }
    }

    let mut lines: Vec<String> = tallies
        .iter()
        .map(|(k, t)| {
            format!(
                "{k} instances={} certified={} negative={} failures={}",
                t.instances, t.certified, t.negative, t.failures
            )
        })
        .collect();
    lines.extend(failures.iter().map(|f| format!("FAIL {f}")));
    lines.push(format!("corpus: {} instances, {} failures", outcomes.len(), failures.len()));

    let failure = match counterexample {
        Some((message, instance)) => Some(CliError::Internal {
            message,
            repro: serde_json::to_value(&*instance).expect("instance serialization cannot fail"),
        }),
        None if !failures.is_empty() => Some(CliError::Domain(format!("{} corpus entries failed", failures.len()))),
        None => None,
    };
    Ok(Output {
        text: lines.join("\n"),
        inputs: json!({ "dir": dir.display().to_string() }),
        payload: json!({ "tallies": tallies, "failures": failures }),
        failure,
    })
}
