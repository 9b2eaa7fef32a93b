//! Exchange matrices, matrix mutation, framing with principal coefficients,
//! c-vectors and green/red verdicts.
//!
//! All entries are arbitrary-precision integers. Rows are indexed by
//! `ex ⊔ fr`, columns by `ex`, both in their stored order; vertex labels are
//! carried through every mutation unchanged.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::vertex::{bigint_json, VertexId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExchangeMatrix {
    ex: Vec<VertexId>,
    fr: Vec<VertexId>,
    /// `ex` rows first, then `fr` rows; each row has one entry per `ex` column.
    rows: Vec<Vec<BigInt>>,
}

impl ExchangeMatrix {
    /// Builds and validates a matrix. `rows` lists the `ex` rows followed by the
    /// `fr` rows.
    pub fn new(ex: Vec<VertexId>, fr: Vec<VertexId>, rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let mut seen = HashSet::new();
        for &v in ex.iter().chain(fr.iter()) {
            if !seen.insert(v) {
                return Err(Error::DuplicateVertex(v));
            }
        }
        let labels: Vec<VertexId> = ex.iter().chain(fr.iter()).copied().collect();
        if rows.len() != labels.len() {
            let missing = labels.get(rows.len()).copied().unwrap_or(VertexId::new(1));
            return Err(Error::MissingRow(missing));
        }
        for (row, &v) in rows.iter().zip(labels.iter()) {
            if row.len() != ex.len() {
                return Err(Error::RowLength {
                    row: v,
                    expected: ex.len(),
                    found: row.len(),
                });
            }
        }
        for (i, &v) in ex.iter().enumerate() {
            if !rows[i][i].is_zero() {
                return Err(Error::NonzeroDiagonal(v));
            }
        }
        let m = ExchangeMatrix { ex, fr, rows };
        m.symmetrizer()?;
        Ok(m)
    }

    /// Convenience constructor from machine integers and plain labels.
    pub fn from_i64(ex: &[u32], fr: &[u32], rows: &[&[i64]]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        ExchangeMatrix::new(
            crate::vertex::vertices(ex),
            crate::vertex::vertices(fr),
            rows,
        )
    }

    /// Square matrix on `ex = labels`, no frozen rows.
    pub fn square(labels: &[u32], rows: &[&[i64]]) -> Result<Self> {
        ExchangeMatrix::from_i64(labels, &[], rows)
    }

    pub fn ex(&self) -> &[VertexId] {
        &self.ex
    }

    pub fn fr(&self) -> &[VertexId] {
        &self.fr
    }

    /// All row labels, `ex` then `fr`.
    pub fn row_labels(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.ex.iter().chain(self.fr.iter()).copied()
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn is_exchangeable(&self, v: VertexId) -> bool {
        self.ex.contains(&v)
    }

    pub fn is_frozen(&self, v: VertexId) -> bool {
        self.fr.contains(&v)
    }

    pub(crate) fn col_index(&self, v: VertexId) -> Option<usize> {
        self.ex.iter().position(|&e| e == v)
    }

    pub(crate) fn row_index(&self, v: VertexId) -> Option<usize> {
        self.col_index(v)
            .or_else(|| self.fr.iter().position(|&f| f == v).map(|p| p + self.ex.len()))
    }

    /// Entry `b_ij` for a row label `i` and an exchangeable column label `j`.
    pub fn entry(&self, i: VertexId, j: VertexId) -> Result<&BigInt> {
        let r = self.row_index(i).ok_or(Error::UnknownVertex(i))?;
        let c = self.col_index(j).ok_or(Error::UnknownVertex(j))?;
        Ok(&self.rows[r][c])
    }

    /// The `ex × ex` block as a matrix without frozen rows.
    pub fn principal_part(&self) -> ExchangeMatrix {
        ExchangeMatrix {
            ex: self.ex.clone(),
            fr: Vec::new(),
            rows: self.rows[..self.ex.len()].to_vec(),
        }
    }

    pub fn symmetrizer(&self) -> Result<Symmetrizer> {
        compute_symmetrizer(self)
    }

    /// Matrix mutation at an exchangeable index `k`.
    pub fn mutate(&self, k: VertexId) -> Result<ExchangeMatrix> {
        let kc = match self.col_index(k) {
            Some(c) => c,
            None if self.fr.contains(&k) => return Err(Error::FrozenMutation(k)),
            None => return Err(Error::UnknownVertex(k)),
        };
        let krow = &self.rows[kc];
        let rows = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, b)| {
                        if i == kc || j == kc {
                            -b
                        } else {
                            b + mutation_increment(&row[kc], &krow[j])
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(ExchangeMatrix {
            ex: self.ex.clone(),
            fr: self.fr.clone(),
            rows,
        })
    }

    /// Applies `seq` left to right; errors carry the 1-based failing step.
    pub fn mutate_seq(&self, seq: &MutationSequence) -> Result<ExchangeMatrix> {
        let mut m = self.clone();
        for (i, &k) in seq.iter().enumerate() {
            m = m.mutate(k).map_err(|e| e.at_step(i + 1, k))?;
        }
        Ok(m)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matrix serialization cannot fail")
    }

    pub fn from_json(s: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

/// `(|a|·b + a·|b|) / 2`: `a·b` when both are positive, `-a·b` when both are
/// negative, zero otherwise.
fn mutation_increment(a: &BigInt, b: &BigInt) -> BigInt {
    if a.is_positive() && b.is_positive() {
        a * b
    } else if a.is_negative() && b.is_negative() {
        -(a * b)
    } else {
        BigInt::zero()
    }
}

impl fmt::Display for ExchangeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (v, row) in self.row_labels().zip(self.rows.iter()) {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(f, "{v:>4} | {}", cells.join(" "))?;
        }
        Ok(())
    }
}

impl Serialize for ExchangeMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Rows<'a>(&'a ExchangeMatrix);
        impl Serialize for Rows<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut map = s.serialize_map(Some(self.0.rows.len()))?;
                for (v, row) in self.0.row_labels().zip(self.0.rows.iter()) {
                    let vals: Vec<serde_json::Value> =
                        row.iter().map(bigint_json::to_value).collect();
                    map.serialize_entry(&v.to_string(), &vals)?;
                }
                map.end()
            }
        }

        #[derive(Serialize)]
        struct Doc<'a> {
            ex: &'a [VertexId],
            fr: &'a [VertexId],
            rows: Rows<'a>,
        }
        Doc {
            ex: &self.ex,
            fr: &self.fr,
            rows: Rows(self),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExchangeMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Doc {
            ex: Vec<VertexId>,
            #[serde(default)]
            fr: Vec<VertexId>,
            rows: BTreeMap<String, Vec<serde_json::Value>>,
        }
        let doc = Doc::deserialize(d)?;
        let mut keyed = BTreeMap::new();
        for (k, vals) in doc.rows {
            let v: VertexId = k.parse().map_err(D::Error::custom)?;
            let row = vals
                .iter()
                .map(bigint_json::from_value)
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(D::Error::custom)?;
            if keyed.insert(v, row).is_some() {
                return Err(D::Error::custom(format!("duplicate row {v}")));
            }
        }
        let mut rows = Vec::new();
        for v in doc.ex.iter().chain(doc.fr.iter()) {
            match keyed.remove(v) {
                Some(r) => rows.push(r),
                None => return Err(D::Error::custom(Error::MissingRow(*v))),
            }
        }
        if let Some(extra) = keyed.keys().next() {
            return Err(D::Error::custom(format!("row {extra} is not in ex or fr")));
        }
        ExchangeMatrix::new(doc.ex, doc.fr, rows).map_err(D::Error::custom)
    }
}

/// Positive diagonal `d` with `d_i·b_ij = -d_j·b_ji` on `ex × ex`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Symmetrizer {
    entries: Vec<(VertexId, BigInt)>,
}

impl Symmetrizer {
    pub fn get(&self, v: VertexId) -> Option<&BigInt> {
        self.entries.iter().find(|(u, _)| *u == v).map(|(_, d)| d)
    }

    pub fn values(&self) -> Vec<BigInt> {
        self.entries.iter().map(|(_, d)| d.clone()).collect()
    }

    pub fn entries(&self) -> &[(VertexId, BigInt)] {
        &self.entries
    }
}

/// Minimal symmetrizer of the principal part, solved per connected component
/// of the nonzero pattern and reduced to gcd 1 on each component.
pub fn compute_symmetrizer(b: &ExchangeMatrix) -> Result<Symmetrizer> {
    let n = b.ex.len();
    let at = |i: usize, j: usize| &b.rows[i][j];

    for i in 0..n {
        for j in (i + 1)..n {
            let (bij, bji) = (at(i, j), at(j, i));
            let ok = (bij.is_zero() && bji.is_zero())
                || (bij.is_positive() && bji.is_negative())
                || (bij.is_negative() && bji.is_positive());
            if !ok {
                return Err(Error::NotSkewSymmetrizable(b.ex[i], b.ex[j]));
            }
        }
    }

    // d as reduced fractions num/den, propagated along edges: d_j = d_i·|b_ij| / |b_ji|.
    let mut frac: Vec<Option<(BigInt, BigInt)>> = vec![None; n];
    let mut component = vec![usize::MAX; n];
    let mut ncomp = 0;
    for start in 0..n {
        if frac[start].is_some() {
            continue;
        }
        frac[start] = Some((BigInt::one(), BigInt::one()));
        component[start] = ncomp;
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            let (ni, di) = frac[i].clone().unwrap();
            for j in 0..n {
                if i == j || at(i, j).is_zero() {
                    continue;
                }
                let num = &ni * at(i, j).abs();
                let den = &di * at(j, i).abs();
                let g = num.gcd(&den);
                let cand = (num / &g, den / &g);
                match &frac[j] {
                    None => {
                        frac[j] = Some(cand);
                        component[j] = ncomp;
                        queue.push_back(j);
                    }
                    Some(existing) if *existing != cand => {
                        return Err(Error::NotSkewSymmetrizable(b.ex[i], b.ex[j]));
                    }
                    Some(_) => {}
                }
            }
        }
        ncomp += 1;
    }

    let mut d = vec![BigInt::zero(); n];
    for c in 0..ncomp {
        let members: Vec<usize> = (0..n).filter(|&i| component[i] == c).collect();
        let lcm = members
            .iter()
            .fold(BigInt::one(), |acc, &i| acc.lcm(&frac[i].as_ref().unwrap().1));
        let scaled: Vec<BigInt> = members
            .iter()
            .map(|&i| {
                let (num, den) = frac[i].as_ref().unwrap();
                num * (&lcm / den)
            })
            .collect();
        let g = scaled.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        for (&i, x) in members.iter().zip(scaled) {
            d[i] = x / &g;
        }
    }

    Ok(Symmetrizer {
        entries: b.ex.iter().copied().zip(d).collect(),
    })
}

/// Searches for a bijection `π` of `a.ex()` onto `b.ex()` with
/// `b[π i][π j] = a[i][j]` on the principal parts. Returns the pairs `(i, π i)`.
pub fn permutation_equivalent(
    a: &ExchangeMatrix,
    b: &ExchangeMatrix,
) -> Option<Vec<(VertexId, VertexId)>> {
    let n = a.ex.len();
    if b.ex.len() != n {
        return None;
    }
    let pa = &a.rows[..n];
    let pb = &b.rows[..n];
    // Row signatures prune the search: sorted multiset of (out, in) entry pairs.
    let sig = |m: &[Vec<BigInt>], i: usize| {
        let mut s: Vec<(BigInt, BigInt)> =
            (0..n).map(|j| (m[i][j].clone(), m[j][i].clone())).collect();
        s.sort();
        s
    };
    let sa: Vec<_> = (0..n).map(|i| sig(pa, i)).collect();
    let sb: Vec<_> = (0..n).map(|i| sig(pb, i)).collect();

    fn extend(
        i: usize,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        pa: &[Vec<BigInt>],
        pb: &[Vec<BigInt>],
        sa: &[Vec<(BigInt, BigInt)>],
        sb: &[Vec<(BigInt, BigInt)>],
    ) -> bool {
        let n = pa.len();
        if i == n {
            return true;
        }
        for cand in 0..n {
            if used[cand] || sa[i] != sb[cand] {
                continue;
            }
            let consistent = (0..i).all(|p| {
                pa[i][p] == pb[cand][map[p]] && pa[p][i] == pb[map[p]][cand]
            });
            if !consistent {
                continue;
            }
            used[cand] = true;
            map.push(cand);
            if extend(i + 1, map, used, pa, pb, sa, sb) {
                return true;
            }
            map.pop();
            used[cand] = false;
        }
        false
    }

    let mut map = Vec::with_capacity(n);
    let mut used = vec![false; n];
    if extend(0, &mut map, &mut used, pa, pb, &sa, &sb) {
        Some(
            map.iter()
                .enumerate()
                .map(|(i, &j)| (a.ex[i], b.ex[j]))
                .collect(),
        )
    } else {
        None
    }
}

/// Finite list of exchangeable labels, applied left to right.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MutationSequence(Vec<VertexId>);

impl MutationSequence {
    pub fn new(steps: Vec<VertexId>) -> Self {
        MutationSequence(steps)
    }

    pub fn from_labels(labels: &[u32]) -> Self {
        MutationSequence(crate::vertex::vertices(labels))
    }

    /// Parses `"1,2,1"` or `"1 2 1"`; the empty string is the empty sequence.
    pub fn parse(s: &str) -> std::result::Result<Self, String> {
        s.split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<VertexId>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(MutationSequence)
    }

    pub fn steps(&self) -> &[VertexId] {
        &self.0
    }

    pub fn into_steps(self) -> Vec<VertexId> {
        self.0
    }

    pub fn push(&mut self, v: VertexId) {
        self.0.push(v);
    }

    /// Subsequence of steps whose vertex satisfies `keep`.
    pub fn filtered(&self, mut keep: impl FnMut(VertexId) -> bool) -> MutationSequence {
        MutationSequence(self.0.iter().copied().filter(|&v| keep(v)).collect())
    }
}

impl std::ops::Deref for MutationSequence {
    type Target = [VertexId];
    fn deref(&self) -> &[VertexId] {
        &self.0
    }
}

impl FromIterator<VertexId> for MutationSequence {
    fn from_iter<T: IntoIterator<Item = VertexId>>(iter: T) -> Self {
        MutationSequence(iter.into_iter().collect())
    }
}

impl fmt::Display for MutationSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Color {
    Green,
    Red,
}

/// Coordinates of a c-vector, indexed by `ex'` in the order of `ex`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CVector {
    pub coords: Vec<BigInt>,
}

impl CVector {
    pub fn is_nonnegative(&self) -> bool {
        self.coords.iter().all(|c| !c.is_negative())
    }

    pub fn is_nonpositive(&self) -> bool {
        self.coords.iter().all(|c| !c.is_positive())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn to_i64(&self) -> Option<Vec<i64>> {
        use num_traits::ToPrimitive;
        self.coords.iter().map(|c| c.to_i64()).collect()
    }
}

/// A matrix stacked over the identity block on `ex'`, with the mutations
/// applied to it so far.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FramedState {
    bhat: ExchangeMatrix,
    history: Vec<VertexId>,
    origin: Arc<ExchangeMatrix>,
}

/// Framing with principal coefficients. The input must have no frozen rows.
pub fn frame(b: &ExchangeMatrix) -> Result<FramedState> {
    if !b.fr.is_empty() {
        return Err(Error::HasFrozen);
    }
    let n = b.ex.len();
    let mut rows = b.rows.clone();
    for i in 0..n {
        rows.push(
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect(),
        );
    }
    let bhat = ExchangeMatrix {
        ex: b.ex.clone(),
        fr: b.ex.iter().map(|v| v.primed()).collect(),
        rows,
    };
    Ok(FramedState {
        bhat,
        history: Vec::new(),
        origin: Arc::new(b.clone()),
    })
}

impl FramedState {
    pub fn bhat(&self) -> &ExchangeMatrix {
        &self.bhat
    }

    pub fn history(&self) -> &[VertexId] {
        &self.history
    }

    pub fn origin(&self) -> &ExchangeMatrix {
        &self.origin
    }

    /// Top block: the current mutated principal part.
    pub fn principal(&self) -> ExchangeMatrix {
        self.bhat.principal_part()
    }

    pub fn c_vector(&self, j: VertexId) -> Result<CVector> {
        let c = self.bhat.col_index(j).ok_or(Error::UnknownVertex(j))?;
        let n = self.bhat.ex.len();
        Ok(CVector {
            coords: self.bhat.rows[n..].iter().map(|r| r[c].clone()).collect(),
        })
    }

    pub fn classify(&self, j: VertexId) -> Result<Color> {
        let c = self.c_vector(j)?;
        if c.is_zero() {
            Err(Error::ZeroCVector { vertex: j })
        } else if c.is_nonnegative() {
            Ok(Color::Green)
        } else if c.is_nonpositive() {
            Ok(Color::Red)
        } else {
            Err(Error::SignIncoherent { vertex: j })
        }
    }

    /// Colors of every exchangeable vertex in `ex` order.
    pub fn colors(&self) -> Result<Vec<(VertexId, Color)>> {
        self.bhat
            .ex
            .iter()
            .map(|&v| self.classify(v).map(|c| (v, c)))
            .collect()
    }

    pub fn all_red(&self) -> Result<bool> {
        Ok(self.colors()?.iter().all(|(_, c)| *c == Color::Red))
    }

    /// Mutates at `k` and checks sign coherence of every c-vector.
    pub fn mutate(&self, k: VertexId) -> Result<FramedState> {
        let bhat = self.bhat.mutate(k)?;
        let mut history = self.history.clone();
        history.push(k);
        let next = FramedState {
            bhat,
            history,
            origin: Arc::clone(&self.origin),
        };
        next.colors()?;
        Ok(next)
    }
}

pub type Trajectory = Vec<FramedState>;

/// `frame(b)` followed by every step of `seq`; element `i` is the state before
/// step `i + 1`.
pub fn run_sequence(b: &ExchangeMatrix, seq: &MutationSequence) -> Result<Trajectory> {
    let mut traj = vec![frame(b)?];
    for (i, &k) in seq.iter().enumerate() {
        let next = traj[i].mutate(k).map_err(|e| e.at_step(i + 1, k))?;
        traj.push(next);
    }
    Ok(traj)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Verdict {
    /// Every step green and every vertex red at the end.
    MaximalGreen,
    /// A nonempty green sequence after which `vertex` is still green.
    GreenSeq { vertex: VertexId },
    /// Ends all red, but `step` (1-based) mutated the red vertex `vertex`.
    Reddening { step: usize, vertex: VertexId },
    /// Step `step` (1-based) mutated the red vertex `vertex` and the end state
    /// is not all red.
    NotGreen { step: usize, vertex: VertexId },
    /// The empty sequence on a nonempty `ex`; `vertex` is the first green one.
    NotReddening { vertex: VertexId },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub verdict: Verdict,
    pub length: usize,
}

impl VerdictReport {
    pub fn is_maximal_green(&self) -> bool {
        self.verdict == Verdict::MaximalGreen
    }

    pub fn is_reddening(&self) -> bool {
        matches!(self.verdict, Verdict::MaximalGreen | Verdict::Reddening { .. })
    }
}

impl fmt::Display for VerdictReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.verdict {
            Verdict::MaximalGreen => write!(f, "MAXIMAL_GREEN length={}", self.length),
            Verdict::GreenSeq { vertex } => {
                write!(f, "GREEN_SEQ length={} green_vertex={vertex}", self.length)
            }
            Verdict::Reddening { step, vertex } => write!(
                f,
                "REDDENING length={} first_red_step={step} vertex={vertex}",
                self.length
            ),
            Verdict::NotGreen { step, vertex } => {
                write!(f, "NOT_GREEN step={step} vertex={vertex}")
            }
            Verdict::NotReddening { vertex } => write!(f, "NOT_REDDENING green_vertex={vertex}"),
        }
    }
}

/// Verdict for a trajectory produced by [`run_sequence`] on `seq`.
pub fn verdict_of(traj: &[FramedState], seq: &MutationSequence) -> Result<VerdictReport> {
    assert_eq!(traj.len(), seq.len() + 1, "trajectory does not match sequence");
    let mut first_red = None;
    for (i, &k) in seq.iter().enumerate() {
        if traj[i].classify(k)? == Color::Red {
            first_red = Some((i + 1, k));
            break;
        }
    }
    let last = traj.last().expect("trajectory is never empty");
    let still_green = last
        .colors()?
        .into_iter()
        .find(|(_, c)| *c == Color::Green)
        .map(|(v, _)| v);
    let verdict = match (first_red, still_green) {
        (None, None) => Verdict::MaximalGreen,
        (Some((step, vertex)), None) => Verdict::Reddening { step, vertex },
        (Some((step, vertex)), Some(_)) => Verdict::NotGreen { step, vertex },
        (None, Some(vertex)) if seq.is_empty() => Verdict::NotReddening { vertex },
        (None, Some(vertex)) => Verdict::GreenSeq { vertex },
    };
    Ok(VerdictReport {
        verdict,
        length: seq.len(),
    })
}

pub fn verdict(b: &ExchangeMatrix, seq: &MutationSequence) -> Result<VerdictReport> {
    let traj = run_sequence(b, seq)?;
    verdict_of(&traj, seq)
}
