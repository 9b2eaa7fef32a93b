//! Valued ice quivers.
//!
//! Encoding: an arrow `i -> j` carries labels `(v_ij, v_ji) = (|b_ij|, |b_ji|)`
//! and is present exactly when `b_ij < 0`, i.e. negative entries in column `k`
//! are the arrows coming into `k`. With this orientation the framed matrix
//! `[B; Id]` is the quiver with one arrow `i -> i'` per exchangeable vertex
//! and a vertex is green while its arrows to the primed copies point outward.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exchange::ExchangeMatrix;
use crate::layering::Layering;
use crate::vertex::{bigint_json, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValuedArrow {
    pub src: VertexId,
    pub dst: VertexId,
    #[serde(rename = "v", with = "bigint_json::pair")]
    pub labels: (BigInt, BigInt),
}

impl ValuedArrow {
    pub fn new(src: VertexId, dst: VertexId, a: i64, b: i64) -> ValuedArrow {
        ValuedArrow {
            src,
            dst,
            labels: (BigInt::from(a), BigInt::from(b)),
        }
    }

    pub fn simple(src: VertexId, dst: VertexId) -> ValuedArrow {
        ValuedArrow::new(src, dst, 1, 1)
    }

    pub fn is_simple(&self) -> bool {
        self.labels.0.is_one() && self.labels.1.is_one()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuedIceQuiver {
    ex: Vec<VertexId>,
    fr: Vec<VertexId>,
    arrows: BTreeMap<(VertexId, VertexId), (BigInt, BigInt)>,
}

impl ValuedIceQuiver {
    /// Validates the arrow set. Arrows between two frozen vertices are dropped
    /// with a logged warning.
    pub fn new(ex: Vec<VertexId>, fr: Vec<VertexId>, arrows: Vec<ValuedArrow>) -> Result<Self> {
        let q = Self::unchecked(ex, fr, arrows)?;
        q.matrix().map_err(|e| match e {
            Error::NotSkewSymmetrizable(i, j) => Error::InvalidQuiver(format!(
                "no symmetrizer fits the labels around {i} and {j}"
            )),
            other => other,
        })?;
        Ok(q)
    }

    fn unchecked(ex: Vec<VertexId>, fr: Vec<VertexId>, arrows: Vec<ValuedArrow>) -> Result<Self> {
        let mut seen = HashSet::new();
        for &v in ex.iter().chain(fr.iter()) {
            if !seen.insert(v) {
                return Err(Error::DuplicateVertex(v));
            }
        }
        let frozen: HashSet<VertexId> = fr.iter().copied().collect();
        let mut map = BTreeMap::new();
        for a in arrows {
            for v in [a.src, a.dst] {
                if !seen.contains(&v) {
                    return Err(Error::UnknownVertex(v));
                }
            }
            if a.src == a.dst {
                return Err(Error::InvalidQuiver(format!("loop at {}", a.src)));
            }
            if !a.labels.0.is_positive() || !a.labels.1.is_positive() {
                return Err(Error::InvalidQuiver(format!(
                    "arrow {} -> {} has a nonpositive label",
                    a.src, a.dst
                )));
            }
            let src_frozen = frozen.contains(&a.src);
            let dst_frozen = frozen.contains(&a.dst);
            if src_frozen && dst_frozen {
                log::warn!("dropping arrow {} -> {} between frozen vertices", a.src, a.dst);
                continue;
            }
            if (src_frozen || dst_frozen) && a.labels.0 != a.labels.1 {
                return Err(Error::InvalidQuiver(format!(
                    "arrow {} -> {} touches a frozen vertex but has unequal labels",
                    a.src, a.dst
                )));
            }
            if map.contains_key(&(a.src, a.dst)) || map.contains_key(&(a.dst, a.src)) {
                return Err(Error::InvalidQuiver(format!(
                    "more than one arrow between {} and {}",
                    a.src, a.dst
                )));
            }
            map.insert((a.src, a.dst), a.labels);
        }
        Ok(ValuedIceQuiver { ex, fr, arrows: map })
    }

    pub fn ex(&self) -> &[VertexId] {
        &self.ex
    }

    pub fn fr(&self) -> &[VertexId] {
        &self.fr
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.ex.iter().chain(self.fr.iter()).copied()
    }

    pub fn is_frozen(&self, v: VertexId) -> bool {
        self.fr.contains(&v)
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn arrows(&self) -> impl Iterator<Item = ValuedArrow> + '_ {
        self.arrows.iter().map(|(&(src, dst), l)| ValuedArrow {
            src,
            dst,
            labels: l.clone(),
        })
    }

    /// Labels of the arrow `src -> dst`, if present.
    pub fn arrow(&self, src: VertexId, dst: VertexId) -> Option<&(BigInt, BigInt)> {
        self.arrows.get(&(src, dst))
    }

    pub fn incoming(&self, k: VertexId) -> Vec<ValuedArrow> {
        self.arrows().filter(|a| a.dst == k).collect()
    }

    pub fn outgoing(&self, k: VertexId) -> Vec<ValuedArrow> {
        self.arrows().filter(|a| a.src == k).collect()
    }

    fn matrix(&self) -> Result<ExchangeMatrix> {
        let n = self.ex.len();
        let labels: Vec<VertexId> = self.vertices().collect();
        let mut rows = vec![vec![BigInt::zero(); n]; labels.len()];
        let row = |v: VertexId| labels.iter().position(|&u| u == v).unwrap();
        let col = |v: VertexId| self.ex.iter().position(|&u| u == v);
        for (&(src, dst), (a, b)) in &self.arrows {
            if let Some(c) = col(dst) {
                rows[row(src)][c] = -a;
            }
            if let Some(c) = col(src) {
                rows[row(dst)][c] = b.clone();
            }
        }
        ExchangeMatrix::new(self.ex.clone(), self.fr.clone(), rows)
    }

    /// Equality of vertex sets and arrows, ignoring the order of `ex` and `fr`.
    pub fn same_up_to_order(&self, other: &ValuedIceQuiver) -> bool {
        let set = |v: &[VertexId]| v.iter().copied().collect::<BTreeSet<_>>();
        set(&self.ex) == set(&other.ex) && set(&self.fr) == set(&other.fr) && self.arrows == other.arrows
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("quiver serialization cannot fail")
    }

    pub fn from_json(s: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

impl Serialize for ValuedIceQuiver {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Doc<'a> {
            ex: &'a [VertexId],
            fr: &'a [VertexId],
            arrows: Vec<ValuedArrow>,
        }
        Doc {
            ex: &self.ex,
            fr: &self.fr,
            arrows: self.arrows().collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ValuedIceQuiver {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Doc {
            ex: Vec<VertexId>,
            #[serde(default)]
            fr: Vec<VertexId>,
            #[serde(default)]
            arrows: Vec<ValuedArrow>,
        }
        let doc = Doc::deserialize(d)?;
        ValuedIceQuiver::new(doc.ex, doc.fr, doc.arrows).map_err(serde::de::Error::custom)
    }
}

/// The valued ice quiver of an exchange matrix. For a frozen row `i` the
/// missing entry `b_ji` is read as `-b_ij`.
pub fn to_quiver(b: &ExchangeMatrix) -> ValuedIceQuiver {
    let ex = b.ex();
    let mut arrows = BTreeMap::new();
    for (r, (i, row)) in b.row_labels().zip(b.rows()).enumerate() {
        let frozen_row = r >= ex.len();
        for (c, &j) in ex.iter().enumerate() {
            let bij = &row[c];
            if i == j || bij.is_zero() {
                continue;
            }
            if frozen_row {
                let m = bij.abs();
                if bij.is_negative() {
                    arrows.insert((i, j), (m.clone(), m));
                } else {
                    arrows.insert((j, i), (m.clone(), m));
                }
            } else if bij.is_negative() {
                let bji = &b.rows()[c][r];
                arrows.insert((i, j), (bij.abs(), bji.abs()));
            }
        }
    }
    ValuedIceQuiver {
        ex: ex.to_vec(),
        fr: b.fr().to_vec(),
        arrows,
    }
}

/// Left inverse of [`to_quiver`].
pub fn to_matrix(q: &ValuedIceQuiver) -> Result<ExchangeMatrix> {
    q.matrix().map_err(|e| match e {
        Error::NotSkewSymmetrizable(i, j) => Error::InvalidQuiver(format!(
            "no symmetrizer fits the labels around {i} and {j}"
        )),
        other => other,
    })
}

/// Three-step quiver mutation: reverse the arrows at `k`, complete every
/// 2-path `i -> k -> j` with at least one exchangeable end, then cancel
/// opposite arrows. Completion adds `(v_ik·v_kj, v_ki·v_jk)` to the `i -> j`
/// direction; when an end is frozen only that end's matrix row is updated and
/// the opposite label is taken equal to it.
pub fn mutate_quiver(q: &ValuedIceQuiver, k: VertexId) -> Result<ValuedIceQuiver> {
    if q.is_frozen(k) {
        return Err(Error::FrozenMutation(k));
    }
    if !q.ex.contains(&k) {
        return Err(Error::UnknownVertex(k));
    }
    let ins: Vec<(VertexId, (BigInt, BigInt))> = q
        .arrows
        .iter()
        .filter(|((_, d), _)| *d == k)
        .map(|(&(s, _), l)| (s, l.clone()))
        .collect();
    let outs: Vec<(VertexId, (BigInt, BigInt))> = q
        .arrows
        .iter()
        .filter(|((s, _), _)| *s == k)
        .map(|(&(_, d), l)| (d, l.clone()))
        .collect();

    // step 1
    let mut arrows: BTreeMap<(VertexId, VertexId), (BigInt, BigInt)> = q
        .arrows
        .iter()
        .map(|(&(s, d), (a, b))| {
            if s == k || d == k {
                ((d, s), (b.clone(), a.clone()))
            } else {
                ((s, d), (a.clone(), b.clone()))
            }
        })
        .collect();

    // steps 2 and 3
    for (i, (v_ik, v_ki)) in &ins {
        for (j, (v_kj, v_jk)) in &outs {
            let (fi, fj) = (q.is_frozen(*i), q.is_frozen(*j));
            if fi && fj {
                continue;
            }
            let p = v_ik * v_kj;
            let qq = v_ki * v_jk;
            // signed entries (x_ij, x_ji) in matrix form: an arrow i -> j is (-a, b)
            let (mut x_ij, mut x_ji) = match (arrows.remove(&(*i, *j)), arrows.remove(&(*j, *i))) {
                (Some((a, b)), None) => (-a, b),
                (None, Some((a, b))) => (b, -a),
                (None, None) => (BigInt::zero(), BigInt::zero()),
                (Some(_), Some(_)) => {
                    return Err(Error::Invariant(format!("2-cycle between {i} and {j}")))
                }
            };
            if fi {
                x_ij -= p;
                x_ji = -x_ij.clone();
            } else if fj {
                x_ji += qq;
                x_ij = -x_ji.clone();
            } else {
                x_ij -= p;
                x_ji += qq;
            }
            if x_ij.is_negative() {
                arrows.insert((*i, *j), (-x_ij, x_ji));
            } else if x_ij.is_positive() {
                arrows.insert((*j, *i), (-x_ji, x_ij));
            } else if !x_ji.is_zero() {
                return Err(Error::Invariant(format!(
                    "cancellation between {i} and {j} left a one-sided label"
                )));
            }
        }
    }

    Ok(ValuedIceQuiver {
        ex: q.ex.clone(),
        fr: q.fr.clone(),
        arrows,
    })
}

/// Full valued subquiver on the level-`t` vertices together with the primed
/// copies of those vertices that are present in `q`. Vertices outside the
/// layering's domain are dropped.
pub fn truncate(q: &ValuedIceQuiver, eta: &Layering, t: i64) -> Result<ValuedIceQuiver> {
    if !eta.levels().contains(&t) {
        return Err(Error::UnknownLevel(t));
    }
    let keep = |v: VertexId| eta.level(v.base()) == Some(t);
    let ex: Vec<VertexId> = q.ex.iter().copied().filter(|&v| keep(v)).collect();
    let fr: Vec<VertexId> = q.fr.iter().copied().filter(|&v| keep(v)).collect();
    let arrows = q
        .arrows
        .iter()
        .filter(|((s, d), _)| keep(*s) && keep(*d))
        .map(|(k, l)| (*k, l.clone()))
        .collect();
    Ok(ValuedIceQuiver { ex, fr, arrows })
}

/// Deterministic DOT rendering. Frozen vertices are boxes; labels other than
/// `(1,1)` are printed on the edge. With a layering, nodes are ordered by
/// `(level, label)` and carry `pos` hints with `x` = label and `y` = level.
pub fn export_dot(q: &ValuedIceQuiver, layout: Option<&Layering>) -> String {
    let level = |v: VertexId| layout.and_then(|eta| eta.level(v.base()));
    let mut nodes: Vec<VertexId> = q.vertices().collect();
    nodes.sort_by_key(|&v| (level(v), v));

    let mut out = String::new();
    out.push_str("digraph Q {\n");
    out.push_str("  node [shape=circle];\n");
    for &v in &nodes {
        let mut attrs = Vec::new();
        if q.is_frozen(v) {
            attrs.push("shape=box".to_string());
        }
        if let Some(t) = level(v) {
            let y = if v.is_primed() { 2 * t - 1 } else { 2 * t };
            attrs.push(format!("pos=\"{},{}!\"", v.label(), y));
        }
        if attrs.is_empty() {
            let _ = writeln!(out, "  \"{v}\";");
        } else {
            let _ = writeln!(out, "  \"{v}\" [{}];", attrs.join(", "));
        }
    }
    let order: BTreeMap<VertexId, usize> = nodes.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut edges: Vec<ValuedArrow> = q.arrows().collect();
    edges.sort_by_key(|a| (order[&a.src], order[&a.dst]));
    for a in edges {
        if a.is_simple() {
            let _ = writeln!(out, "  \"{}\" -> \"{}\";", a.src, a.dst);
        } else {
            let _ = writeln!(
                out,
                "  \"{}\" -> \"{}\" [label=\"({},{})\"];",
                a.src, a.dst, a.labels.0, a.labels.1
            );
        }
    }
    out.push_str("}\n");
    out
}

/// The framed quiver: one frozen copy `i'` per exchangeable vertex and an
/// arrow `i -> i'`.
pub fn framed_quiver(q: &ValuedIceQuiver) -> Result<ValuedIceQuiver> {
    if !q.fr.is_empty() {
        return Err(Error::HasFrozen);
    }
    let mut arrows = q.arrows.clone();
    for &v in &q.ex {
        arrows.insert((v, v.primed()), (BigInt::one(), BigInt::one()));
    }
    Ok(ValuedIceQuiver {
        ex: q.ex.clone(),
        fr: q.ex.iter().map(|v| v.primed()).collect(),
        arrows,
    })
}

/// True when the arrows form an orientation of the path graph on `order`
/// with simple labels.
pub fn is_path_orientation(q: &ValuedIceQuiver, order: &[VertexId]) -> bool {
    let expected: BTreeSet<(VertexId, VertexId)> = order
        .windows(2)
        .map(|w| (w[0].min(w[1]), w[0].max(w[1])))
        .collect();
    let actual: BTreeSet<(VertexId, VertexId)> = q
        .arrows
        .keys()
        .map(|&(s, d)| (s.min(d), s.max(d)))
        .collect();
    expected == actual && q.arrows().all(|a| a.is_simple())
}
