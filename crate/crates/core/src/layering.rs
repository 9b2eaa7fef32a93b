//! Level functions, layered T-system checks and full shuffles.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exchange::MutationSequence;
use crate::quiver::{ValuedArrow, ValuedIceQuiver};
use crate::vertex::VertexId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LayeringMode {
    /// `η` is defined on the exchangeable vertices only.
    #[serde(rename = "exchange")]
    ExchangeOnly,
    /// `η` is defined on `[1, N]`; the maximum of each level is frozen.
    #[serde(rename = "full")]
    Full,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelData {
    pub t: i64,
    pub members: Vec<VertexId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layering {
    mode: LayeringMode,
    eta: BTreeMap<VertexId, i64>,
}

impl Layering {
    pub fn from_map(mode: LayeringMode, eta: BTreeMap<VertexId, i64>) -> Result<Self> {
        if let Some(v) = eta.keys().find(|v| v.is_primed()) {
            return Err(Error::InvalidLayering(format!("primed vertex {v} in the domain")));
        }
        Ok(Layering { mode, eta })
    }

    pub fn new(mode: LayeringMode, pairs: &[(u32, i64)]) -> Result<Self> {
        let mut eta = BTreeMap::new();
        for &(l, t) in pairs {
            let v = VertexId::new(l);
            if eta.insert(v, t).is_some() {
                return Err(Error::DuplicateVertex(v));
            }
        }
        Layering::from_map(mode, eta)
    }

    /// Every vertex on level 0.
    pub fn constant(mode: LayeringMode, labels: &[u32]) -> Self {
        Layering {
            mode,
            eta: labels.iter().map(|&l| (VertexId::new(l), 0)).collect(),
        }
    }

    /// Level `i` for the `i`-th vertex.
    pub fn finest(mode: LayeringMode, labels: &[u32]) -> Self {
        Layering {
            mode,
            eta: labels
                .iter()
                .enumerate()
                .map(|(i, &l)| (VertexId::new(l), i as i64))
                .collect(),
        }
    }

    pub fn mode(&self) -> LayeringMode {
        self.mode
    }

    pub fn domain(&self) -> Vec<VertexId> {
        self.eta.keys().copied().collect()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.eta.contains_key(&v)
    }

    pub fn level(&self, v: VertexId) -> Option<i64> {
        self.eta.get(&v).copied()
    }

    pub fn eta(&self) -> &BTreeMap<VertexId, i64> {
        &self.eta
    }

    /// The distinct levels, ascending.
    pub fn levels(&self) -> Vec<i64> {
        let mut ts: Vec<i64> = self.eta.values().copied().collect();
        ts.sort_unstable();
        ts.dedup();
        ts
    }

    /// Members of level `t`, ascending.
    pub fn members(&self, t: i64) -> Vec<VertexId> {
        self.eta
            .iter()
            .filter(|(_, &s)| s == t)
            .map(|(&v, _)| v)
            .collect()
    }

    pub fn level_data(&self) -> Vec<LevelData> {
        self.levels()
            .into_iter()
            .map(|t| LevelData {
                t,
                members: self.members(t),
            })
            .collect()
    }

    /// `k[-1]`; `None` stands for `-∞`, also when `k` is outside the domain.
    pub fn pred(&self, k: VertexId) -> Option<VertexId> {
        let t = self.level(k)?;
        self.eta
            .range(..k)
            .rev()
            .find(|(_, &s)| s == t)
            .map(|(&v, _)| v)
    }

    /// `k[1]`; `None` stands for `+∞`.
    pub fn succ(&self, k: VertexId) -> Option<VertexId> {
        let t = self.level(k)?;
        self.eta
            .range(k..)
            .skip(1)
            .find(|(_, &s)| s == t)
            .map(|(&v, _)| v)
    }

    /// Number of same-level vertices above `k`.
    pub fn order_plus(&self, k: VertexId) -> usize {
        match self.level(k) {
            Some(t) => self.eta.range(k..).skip(1).filter(|(_, &s)| s == t).count(),
            None => 0,
        }
    }

    /// Number of same-level vertices below `k`.
    pub fn order_minus(&self, k: VertexId) -> usize {
        match self.level(k) {
            Some(t) => self.eta.range(..k).filter(|(_, &s)| s == t).count(),
            None => 0,
        }
    }

    /// Per-level maxima, ascending by label.
    pub fn frozen_set(&self) -> Result<Vec<VertexId>> {
        if self.mode != LayeringMode::Full {
            return Err(Error::WrongMode("full"));
        }
        Ok(self
            .eta
            .keys()
            .copied()
            .filter(|&v| self.succ(v).is_none())
            .collect())
    }

    pub fn is_exchangeable(&self, v: VertexId) -> bool {
        match self.mode {
            LayeringMode::ExchangeOnly => self.contains(v),
            LayeringMode::Full => self.contains(v) && self.succ(v).is_some(),
        }
    }

    pub fn exchangeable(&self) -> Vec<VertexId> {
        self.eta
            .keys()
            .copied()
            .filter(|&v| self.is_exchangeable(v))
            .collect()
    }

    pub fn exchangeable_members(&self, t: i64) -> Vec<VertexId> {
        self.members(t)
            .into_iter()
            .filter(|&v| self.is_exchangeable(v))
            .collect()
    }

    /// The ExchangeOnly layering obtained by dropping the frozen vertices.
    pub fn restrict_to_exchangeable(&self) -> Layering {
        Layering {
            mode: LayeringMode::ExchangeOnly,
            eta: self
                .eta
                .iter()
                .filter(|(&v, _)| self.is_exchangeable(v))
                .map(|(&v, &t)| (v, t))
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("layering serialization cannot fail")
    }

    pub fn from_json(s: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

impl Serialize for Layering {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        // numeric key order, not string order
        use serde::ser::SerializeMap;
        struct Eta<'a>(&'a BTreeMap<VertexId, i64>);
        impl Serialize for Eta<'_> {
            fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut m = s.serialize_map(Some(self.0.len()))?;
                for (v, t) in self.0 {
                    m.serialize_entry(&v.to_string(), t)?;
                }
                m.end()
            }
        }
        #[derive(Serialize)]
        struct Out<'a> {
            mode: LayeringMode,
            eta: Eta<'a>,
        }
        Out {
            mode: self.mode,
            eta: Eta(&self.eta),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Layering {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Doc {
            mode: LayeringMode,
            eta: BTreeMap<String, i64>,
        }
        let doc = Doc::deserialize(d)?;
        let mut eta = BTreeMap::new();
        for (k, t) in doc.eta {
            let v: VertexId = k.parse().map_err(serde::de::Error::custom)?;
            if eta.insert(v, t).is_some() {
                return Err(serde::de::Error::custom(format!("duplicate vertex {v}")));
            }
        }
        Layering::from_map(doc.mode, eta).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ViolationKind {
    /// An incoming arrow from a vertex other than `k[-1]` or `k[1]`.
    BadIncomingSource,
    /// An incoming arrow from `k[±1]` with labels other than `(1,1)`.
    NonSimpleIncoming,
    /// An outgoing arrow to a vertex on the same level.
    SameLevelOutgoing,
    /// A finite `k[±1]` without an incoming arrow. Only the strict reading
    /// of the condition rejects this.
    MissingIncoming,
}

impl ViolationKind {
    /// False for violations that a lenient ("at most one arrow") reading accepts.
    pub fn is_strict_only(self) -> bool {
        self == ViolationKind::MissingIncoming
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayeredViolation {
    pub step: Option<usize>,
    pub vertex: VertexId,
    pub kind: ViolationKind,
    /// The offending arrow; for `MissingIncoming` the expected one.
    pub arrow: Option<ValuedArrow>,
}

impl fmt::Display for LayeredViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(s) = self.step {
            write!(f, "step {s}: ")?;
        }
        write!(f, "{:?} at {}", self.kind, self.vertex)?;
        if let Some(a) = &self.arrow {
            write!(f, " (arrow {} -> {} ({},{}))", a.src, a.dst, a.labels.0, a.labels.1)?;
        }
        Ok(())
    }
}

/// The two layered T-system conditions at `k`, strict reading: the incoming
/// arrows are exactly one simple arrow from each finite `k[±1]`, and no
/// outgoing arrow stays on `k`'s level. Checks run in the order of
/// [`ViolationKind`] and the first failure is returned.
pub fn check_layered_step(
    q: &ValuedIceQuiver,
    k: VertexId,
    eta: &Layering,
) -> std::result::Result<(), LayeredViolation> {
    let viol = |kind, arrow| LayeredViolation {
        step: None,
        vertex: k,
        kind,
        arrow,
    };
    let t = match eta.level(k) {
        Some(t) => t,
        None => return Ok(()),
    };
    let (p, s) = (eta.pred(k), eta.succ(k));
    let neighbours = [p, s];
    let incoming = q.incoming(k);
    if let Some(a) = incoming.iter().find(|a| !neighbours.contains(&Some(a.src))) {
        return Err(viol(ViolationKind::BadIncomingSource, Some(a.clone())));
    }
    if let Some(a) = incoming.iter().find(|a| !a.is_simple()) {
        return Err(viol(ViolationKind::NonSimpleIncoming, Some(a.clone())));
    }
    if let Some(a) = q
        .outgoing(k)
        .into_iter()
        .find(|a| eta.level(a.dst) == Some(t))
    {
        return Err(viol(ViolationKind::SameLevelOutgoing, Some(a)));
    }
    for n in neighbours.into_iter().flatten() {
        if !incoming.iter().any(|a| a.src == n) {
            return Err(viol(ViolationKind::MissingIncoming, Some(ValuedArrow::simple(n, k))));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum FullnessViolation {
    /// `vertex` is not an exchangeable vertex of the layering.
    NotExchangeable { position: usize, vertex: VertexId },
    /// `vertex` occurs `found` times instead of `expected`.
    Count {
        vertex: VertexId,
        expected: usize,
        found: usize,
    },
    /// The `occurrence`-th `vertex` comes before the `(occurrence-1)`-th
    /// occurrence of the next member `after`.
    CrossRow {
        vertex: VertexId,
        occurrence: usize,
        after: VertexId,
    },
    /// The `occurrence`-th `vertex` comes after the `occurrence`-th
    /// occurrence of the next member `next`.
    RowOrder {
        vertex: VertexId,
        occurrence: usize,
        next: VertexId,
    },
}

impl fmt::Display for FullnessViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FullnessViolation::NotExchangeable { position, vertex } => {
                write!(f, "position {position}: {vertex} is not exchangeable in the layering")
            }
            FullnessViolation::Count {
                vertex,
                expected,
                found,
            } => write!(f, "{vertex} occurs {found} times, expected {expected}"),
            FullnessViolation::CrossRow {
                vertex,
                occurrence,
                after,
            } => write!(
                f,
                "occurrence {occurrence} of {vertex} precedes occurrence {} of {after}",
                occurrence - 1
            ),
            FullnessViolation::RowOrder {
                vertex,
                occurrence,
                next,
            } => write!(
                f,
                "occurrence {occurrence} of {vertex} follows occurrence {occurrence} of {next}"
            ),
        }
    }
}

/// Checks that `seq` is a full shuffle for `eta`: per level with exchangeable
/// members `j_1 < … < j_ℓ`, `j_i` occurs `ℓ+1-i` times, each row `j_1 … j_{ℓ-n+1}`
/// of `n`-th occurrences is in increasing order, and the `n`-th `j_i` follows
/// the `(n-1)`-th `j_{i+1}`.
pub fn is_full(seq: &MutationSequence, eta: &Layering) -> std::result::Result<(), FullnessViolation> {
    for (position, &v) in seq.iter().enumerate() {
        if !eta.is_exchangeable(v) {
            return Err(FullnessViolation::NotExchangeable {
                position: position + 1,
                vertex: v,
            });
        }
    }
    let mut occ: BTreeMap<VertexId, Vec<usize>> = BTreeMap::new();
    for (pos, &v) in seq.iter().enumerate() {
        occ.entry(v).or_default().push(pos);
    }
    let levels: Vec<Vec<VertexId>> = eta
        .levels()
        .into_iter()
        .map(|t| eta.exchangeable_members(t))
        .collect();
    for js in &levels {
        let l = js.len();
        for (i, &j) in js.iter().enumerate() {
            let expected = l - i;
            let found = occ.get(&j).map_or(0, Vec::len);
            if found != expected {
                return Err(FullnessViolation::Count {
                    vertex: j,
                    expected,
                    found,
                });
            }
        }
    }
    for js in &levels {
        let l = js.len();
        for n in 2..=l {
            for i in 0..=(l - n) {
                let here = occ[&js[i]][n - 1];
                let there = occ[&js[i + 1]][n - 2];
                if here < there {
                    return Err(FullnessViolation::CrossRow {
                        vertex: js[i],
                        occurrence: n,
                        after: js[i + 1],
                    });
                }
            }
        }
    }
    for js in &levels {
        let l = js.len();
        for n in 1..l {
            for i in 0..(l - n) {
                if occ[&js[i]][n - 1] > occ[&js[i + 1]][n - 1] {
                    return Err(FullnessViolation::RowOrder {
                        vertex: js[i],
                        occurrence: n,
                        next: js[i + 1],
                    });
                }
            }
        }
    }
    Ok(())
}

/// `Σ_t ℓ_ex(t)(ℓ_ex(t)+1)/2`.
pub fn expected_length(eta: &Layering) -> usize {
    eta.levels()
        .into_iter()
        .map(|t| {
            let l = eta.exchangeable_members(t).len();
            l * (l + 1) / 2
        })
        .sum()
}

/// `s_1 <- s_2 <- … <- s_n` with simple arrows.
pub fn chain_quiver(s: &[VertexId]) -> ValuedIceQuiver {
    let arrows = s.windows(2).map(|w| ValuedArrow::simple(w[1], w[0])).collect();
    ValuedIceQuiver::new(s.to_vec(), Vec::new(), arrows).expect("a chain is a valid quiver")
}

/// Disjoint union of the level chains on the exchangeable members.
pub fn level_chains(eta: &Layering) -> ValuedIceQuiver {
    let mut arrows = Vec::new();
    for t in eta.levels() {
        let js = eta.exchangeable_members(t);
        arrows.extend(js.windows(2).map(|w| ValuedArrow::simple(w[1], w[0])));
    }
    ValuedIceQuiver::new(eta.exchangeable(), Vec::new(), arrows)
        .expect("disjoint chains form a valid quiver")
}

#[derive(Debug, Clone)]
struct Cell {
    vertex: VertexId,
    /// index of the previous and next member on the same level
    prev: Option<usize>,
    next: Option<usize>,
    quota: usize,
}

/// Lexicographic backtracking over full shuffles.
#[derive(Debug, Clone)]
pub struct FullShuffles {
    cells: Vec<Cell>,
    placed: Vec<usize>,
    seq: Vec<usize>,
    cursor: Vec<usize>,
    total: usize,
    emitted: bool,
    done: bool,
}

impl FullShuffles {
    pub fn new(eta: &Layering) -> Self {
        let ex = eta.exchangeable();
        let index = |v: VertexId| ex.iter().position(|&u| u == v);
        let mut cells = Vec::with_capacity(ex.len());
        for &v in &ex {
            let t = eta.level(v).expect("exchangeable vertices have a level");
            let js = eta.exchangeable_members(t);
            let i = js.iter().position(|&u| u == v).unwrap();
            cells.push(Cell {
                vertex: v,
                prev: i.checked_sub(1).and_then(|p| index(js[p])),
                next: js.get(i + 1).and_then(|&u| index(u)),
                quota: js.len() - i,
            });
        }
        let total = cells.iter().map(|c| c.quota).sum();
        FullShuffles {
            placed: vec![0; cells.len()],
            cells,
            seq: Vec::with_capacity(total),
            cursor: vec![0; total + 1],
            total,
            emitted: false,
            done: false,
        }
    }

    fn allowed(&self, c: usize) -> bool {
        let cell = &self.cells[c];
        let n = self.placed[c] + 1;
        if n > cell.quota {
            return false;
        }
        if let Some(p) = cell.prev {
            if self.placed[p] < n {
                return false;
            }
        }
        if n >= 2 {
            let nx = cell.next.expect("a repeated member has a successor");
            if self.placed[nx] < n - 1 {
                return false;
            }
        }
        true
    }

    fn pop(&mut self) -> bool {
        match self.seq.pop() {
            Some(c) => {
                self.placed[c] -= 1;
                true
            }
            None => false,
        }
    }

    fn current(&self) -> MutationSequence {
        self.seq.iter().map(|&c| self.cells[c].vertex).collect()
    }
}

impl Iterator for FullShuffles {
    type Item = MutationSequence;

    fn next(&mut self) -> Option<MutationSequence> {
        if self.done {
            return None;
        }
        if self.emitted {
            self.emitted = false;
            if !self.pop() {
                self.done = true;
                return None;
            }
        }
        loop {
            let depth = self.seq.len();
            if depth == self.total {
                self.emitted = true;
                return Some(self.current());
            }
            let found = (self.cursor[depth]..self.cells.len()).find(|&c| self.allowed(c));
            match found {
                Some(c) => {
                    self.cursor[depth] = c + 1;
                    self.placed[c] += 1;
                    self.seq.push(c);
                    self.cursor[depth + 1] = 0;
                }
                None => {
                    self.cursor[depth] = 0;
                    if !self.pop() {
                        self.done = true;
                        return None;
                    }
                }
            }
        }
    }
}

/// At most `limit` full shuffles in lexicographic order of labels.
pub fn enumerate_full_shuffles(eta: &Layering, limit: usize) -> Vec<MutationSequence> {
    FullShuffles::new(eta).take(limit).collect()
}
