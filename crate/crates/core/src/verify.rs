//! Certified runs of layered T-systems.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::exchange::{
    run_sequence, verdict_of, Color, ExchangeMatrix, FramedState, MutationSequence, VerdictReport,
};
use crate::layering::{
    chain_quiver, check_layered_step, expected_length, is_full, FullnessViolation, LayeredViolation,
    Layering, LayeringMode,
};
use crate::permpath::{seq_from_path, word_to_path, ContiguousPath, ReducedWord};
use crate::quiver::{
    framed_quiver, is_path_orientation, mutate_quiver, to_matrix, to_quiver, truncate, ValuedIceQuiver,
};
use crate::vertex::VertexId;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    DisjointChains,
    AcyclicFinest,
    RandomLayered,
    PathDerived,
    Manual,
}

impl FamilyKind {
    pub fn dir_name(self) -> &'static str {
        match self {
            FamilyKind::DisjointChains => "disjoint_chains",
            FamilyKind::AcyclicFinest => "acyclic_finest",
            FamilyKind::RandomLayered => "random_layered",
            FamilyKind::PathDerived => "path_derived",
            FamilyKind::Manual => "manual",
        }
    }
}

/// A matrix, a layering and a sequence. With `path` set, `eta` is a full
/// layering on `[1, N]` and `seq` is the sequence of the path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub family: FamilyKind,
    pub matrix: ExchangeMatrix,
    pub eta: Layering,
    pub seq: MutationSequence,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<ReducedWord>,
}

impl Instance {
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("instance serialization cannot fail")
    }

    /// Hex SHA-256 of [`Instance::canonical_json`].
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_json().as_bytes()))
    }

    pub fn certify(&self) -> Result<Certificate> {
        let mut cert = match &self.path {
            Some(word) => {
                let n = self.eta.domain().len();
                let path = word_to_path(n, word)?;
                verify_theorem_a(&self.matrix, &self.eta, &path)?
            }
            None => verify_theorem_b(&self.matrix, &self.eta, &self.seq)?,
        };
        cert.instance.family = self.family;
        cert.digest = cert.instance.digest();
        Ok(cert)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: usize,
    pub vertex: VertexId,
    pub color: Color,
    pub layered: Option<LayeredViolation>,
}

/// Truncation checks after the first `prefix` mutations, for one level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationRecord {
    pub prefix: usize,
    pub level: i64,
    /// No arrows between this level's primed copies and other levels.
    pub no_cross_arrows: bool,
    /// Arrows between the level and its primed copies match the framed chain.
    pub frozen_arrows_match: bool,
    /// The whole truncation matches the mutated framed chain.
    pub isomorphic: bool,
}

impl TruncationRecord {
    pub fn passed(&self) -> bool {
        self.no_cross_arrows && self.frozen_arrows_match && self.isomorphic
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema_version: u32,
    pub digest: String,
    pub instance: Instance,
    pub steps: Vec<StepRecord>,
    pub fullness: Option<FullnessViolation>,
    pub truncations: Vec<TruncationRecord>,
    pub verdict: VerdictReport,
    /// Every layered check and the fullness check passed.
    pub hypotheses_hold: bool,
    /// The hypotheses hold but the verdict is not maximal green.
    pub is_counterexample: bool,
}

impl Certificate {
    pub fn first_layered_violation(&self) -> Option<&LayeredViolation> {
        self.steps.iter().find_map(|s| s.layered.as_ref())
    }

    pub fn truncations_pass(&self) -> bool {
        self.truncations.iter().all(TruncationRecord::passed)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serialization cannot fail")
    }
}

fn check_domain(b: &ExchangeMatrix, eta: &Layering) -> Result<()> {
    if eta.mode() != LayeringMode::ExchangeOnly {
        return Err(Error::WrongMode("exchange"));
    }
    if let Some(&v) = b.ex().iter().find(|&&v| !eta.contains(v)) {
        return Err(Error::MissingLevel(v));
    }
    if let Some(v) = eta.domain().into_iter().find(|&v| !b.is_exchangeable(v)) {
        return Err(Error::UnknownVertex(v));
    }
    Ok(())
}

/// Runs `seq` on the framed matrix, checking the layered conditions on the
/// principal part before each step, fullness of `seq`, and the truncation
/// properties at every prefix.
pub fn verify_theorem_b(b: &ExchangeMatrix, eta: &Layering, seq: &MutationSequence) -> Result<Certificate> {
    check_domain(b, eta)?;
    let traj = run_sequence(b, seq)?;
    let mut steps = Vec::with_capacity(seq.len());
    for (i, &k) in seq.iter().enumerate() {
        let state = &traj[i];
        let color = state.classify(k).map_err(|e| e.at_step(i + 1, k))?;
        let layered = check_layered_step(&to_quiver(&state.principal()), k, eta)
            .err()
            .map(|mut v| {
                v.step = Some(i + 1);
                v
            });
        steps.push(StepRecord {
            step: i + 1,
            vertex: k,
            color,
            layered,
        });
    }
    let fullness = is_full(seq, eta).err();
    let truncations = truncation_records(&traj, eta, seq)?;
    let verdict = verdict_of(&traj, seq)?;
    let hypotheses_hold = fullness.is_none() && steps.iter().all(|s| s.layered.is_none());
    let instance = Instance {
        family: FamilyKind::Manual,
        matrix: b.clone(),
        eta: eta.clone(),
        seq: seq.clone(),
        path: None,
    };
    let is_counterexample = hypotheses_hold && !verdict.is_maximal_green();
    if is_counterexample {
        log::error!("counterexample: {} for instance {}", verdict, instance.canonical_json());
    }
    Ok(Certificate {
        schema_version: SCHEMA_VERSION,
        digest: instance.digest(),
        instance,
        steps,
        fullness,
        truncations,
        verdict,
        hypotheses_hold,
        is_counterexample,
    })
}

fn truncation_records(
    traj: &[FramedState],
    eta: &Layering,
    seq: &MutationSequence,
) -> Result<Vec<TruncationRecord>> {
    let levels = eta.levels();
    let mut chains = Vec::with_capacity(levels.len());
    for &t in &levels {
        chains.push(framed_quiver(&chain_quiver(&eta.members(t)))?);
    }
    let mut out = Vec::new();
    for (prefix, state) in traj.iter().enumerate() {
        let q = to_quiver(state.bhat());
        for (li, &t) in levels.iter().enumerate() {
            let crosses = |u: VertexId, w: VertexId| {
                !u.is_primed() && w.is_primed() && eta.level(w.base()) == Some(t) && eta.level(u) != Some(t)
            };
            let no_cross_arrows = q.arrows().all(|a| !crosses(a.src, a.dst) && !crosses(a.dst, a.src));
            let chain = &mut chains[li];
            if prefix > 0 && eta.level(seq[prefix - 1]) == Some(t) {
                *chain = mutate_quiver(chain, seq[prefix - 1])?;
            }
            let trunc = truncate(&q, eta, t)?;
            let frozen_part = |x: &ValuedIceQuiver| {
                x.arrows()
                    .filter(|a| a.src.is_primed() != a.dst.is_primed())
                    .collect::<Vec<_>>()
            };
            out.push(TruncationRecord {
                prefix,
                level: t,
                no_cross_arrows,
                frozen_arrows_match: frozen_part(&trunc) == frozen_part(chain),
                isomorphic: trunc.same_up_to_order(chain),
            });
        }
    }
    Ok(out)
}

/// Truncation checks alone, one record per prefix and level.
pub fn verify_truncations(
    b: &ExchangeMatrix,
    eta: &Layering,
    seq: &MutationSequence,
) -> Result<Vec<TruncationRecord>> {
    check_domain(b, eta)?;
    let traj = run_sequence(b, seq)?;
    truncation_records(&traj, eta, seq)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum AnLemmaOutcome {
    /// Every intermediate quiver is a path orientation, every mutation is at
    /// a sink, and the framed run is maximal green.
    Pass { verdict: VerdictReport },
    /// `seq` is not a full shuffle for the constant layering.
    Rejected { violation: FullnessViolation },
    Fail { step: usize, reason: String },
}

impl AnLemmaOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, AnLemmaOutcome::Pass { .. })
    }
}

/// Sink mutations along a full shuffle of `1 <- 2 <- … <- n`.
pub fn verify_an_lemma(n: usize, seq: &MutationSequence) -> Result<AnLemmaOutcome> {
    let labels: Vec<u32> = (1..=n as u32).collect();
    let eta = Layering::constant(LayeringMode::ExchangeOnly, &labels);
    if let Err(violation) = is_full(seq, &eta) {
        return Ok(AnLemmaOutcome::Rejected { violation });
    }
    let order = crate::vertex::vertices(&labels);
    let mut q = chain_quiver(&order);
    for (i, &k) in seq.iter().enumerate() {
        if !is_path_orientation(&q, &order) {
            return Ok(AnLemmaOutcome::Fail {
                step: i + 1,
                reason: "quiver is not an orientation of the path".into(),
            });
        }
        if !q.outgoing(k).is_empty() {
            return Ok(AnLemmaOutcome::Fail {
                step: i + 1,
                reason: format!("{k} is not a sink"),
            });
        }
        q = mutate_quiver(&q, k)?;
    }
    if !is_path_orientation(&q, &order) {
        return Ok(AnLemmaOutcome::Fail {
            step: seq.len() + 1,
            reason: "final quiver is not an orientation of the path".into(),
        });
    }
    let b = to_matrix(&chain_quiver(&order))?;
    let verdict = crate::exchange::verdict(&b, seq)?;
    if !verdict.is_maximal_green() {
        return Ok(AnLemmaOutcome::Fail {
            step: seq.len(),
            reason: format!("framed run ends with {verdict}"),
        });
    }
    Ok(AnLemmaOutcome::Pass { verdict })
}

/// `seq_from_path` on a full layering, then [`verify_theorem_b`] with the
/// exchangeable restriction. `b` is indexed by the non-maximal vertices.
pub fn verify_theorem_a(b: &ExchangeMatrix, eta: &Layering, path: &ContiguousPath) -> Result<Certificate> {
    if eta.mode() != LayeringMode::Full {
        return Err(Error::WrongMode("full"));
    }
    let n = path.n();
    let expected_domain: Vec<VertexId> = (1..=n as u32).map(VertexId::new).collect();
    if eta.domain() != expected_domain {
        return Err(Error::InvalidLayering(format!("domain is not [1,{n}]")));
    }
    let seq = seq_from_path(path, eta)?;
    let ex_eta = eta.restrict_to_exchangeable();
    if let Err(v) = is_full(&seq, &ex_eta) {
        return Err(Error::Invariant(format!("path sequence {seq} is not full: {v}")));
    }
    let choose2: usize = eta
        .levels()
        .into_iter()
        .map(|t| {
            let l = eta.members(t).len();
            l * l.saturating_sub(1) / 2
        })
        .sum();
    if seq.len() != choose2 || seq.len() != expected_length(&ex_eta) {
        return Err(Error::Invariant(format!(
            "path sequence has length {}, expected {choose2}",
            seq.len()
        )));
    }
    let mut cert = verify_theorem_b(b, &ex_eta, &seq)?;
    cert.instance.family = FamilyKind::PathDerived;
    cert.instance.eta = eta.clone();
    cert.instance.path = Some(path.word());
    cert.digest = cert.instance.digest();
    Ok(cert)
}
