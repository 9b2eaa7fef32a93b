//! Permutations in one-line notation, the set `Ξ_N` of permutations mapping
//! every initial interval to an interval, contiguous paths from the identity
//! to the longest element, and the mutation sequences they induce.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exchange::MutationSequence;
use crate::layering::{Layering, LayeringMode};
use crate::vertex::VertexId;

/// A permutation of `[1, N]`; entry `i - 1` is the image of `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn new(oneline: Vec<u32>) -> Result<Self> {
        let n = oneline.len();
        let mut seen = vec![false; n + 1];
        for &x in &oneline {
            let i = x as usize;
            if i == 0 || i > n || seen[i] {
                return Err(Error::InvalidPermutation(format!(
                    "{oneline:?} is not a permutation of [1,{n}]"
                )));
            }
            seen[i] = true;
        }
        Ok(Permutation(oneline))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((1..=n as u32).collect())
    }

    /// `w_0 = [N … 1]`.
    pub fn longest(n: usize) -> Self {
        Permutation((1..=n as u32).rev().collect())
    }

    /// The simple transposition `s_p = (p p+1)`.
    pub fn simple(n: usize, p: usize) -> Self {
        Permutation::identity(n).times_simple(p)
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn oneline(&self) -> &[u32] {
        &self.0
    }

    /// `σ(k)` for 1-based `k`.
    pub fn apply(&self, k: usize) -> u32 {
        self.0[k - 1]
    }

    /// The 1-based position of `value` in the one-line notation.
    pub fn position_of(&self, value: u32) -> usize {
        self.0.iter().position(|&x| x == value).expect("value in range") + 1
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.n(), other.n(), "composing permutations of different sizes");
        Permutation(other.0.iter().map(|&x| self.apply(x as usize)).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.n()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize - 1] = i as u32 + 1;
        }
        Permutation(inv)
    }

    /// `σ s_p`: swaps the entries in positions `p` and `p + 1`.
    pub fn times_simple(&self, p: usize) -> Permutation {
        let mut v = self.0.clone();
        v.swap(p - 1, p);
        Permutation(v)
    }

    /// Number of inversions.
    pub fn length(&self) -> usize {
        let mut count = 0;
        for i in 0..self.n() {
            for j in (i + 1)..self.n() {
                if self.0[i] > self.0[j] {
                    count += 1;
                }
            }
        }
        count
    }

    /// The cycle `(a a+1 … b)`.
    pub fn cycle(n: usize, a: usize, b: usize) -> Permutation {
        let mut v: Vec<u32> = (1..=n as u32).collect();
        for i in a..b {
            v[i - 1] = i as u32 + 1;
        }
        if a < b {
            v[b - 1] = a as u32;
        }
        Permutation(v)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<u32>::deserialize(d)?;
        Permutation::new(v).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// True when `σ([1, k])` is an interval for every `k`.
pub fn xi_contains(sigma: &Permutation) -> bool {
    let (mut lo, mut hi) = (u32::MAX, 0);
    for (k, &x) in sigma.0.iter().enumerate() {
        lo = lo.min(x);
        hi = hi.max(x);
        if (hi - lo) as usize != k {
            return false;
        }
    }
    true
}

/// All of `Ξ_N` in lexicographic order. Each element is grown from its first
/// entry by appending either `max + 1` or `min - 1`.
pub fn enumerate_xi(n: usize) -> Vec<Permutation> {
    fn grow(n: u32, cur: &mut Vec<u32>, lo: u32, hi: u32, out: &mut Vec<Permutation>) {
        if cur.len() == n as usize {
            out.push(Permutation(cur.clone()));
            return;
        }
        if lo > 1 {
            cur.push(lo - 1);
            grow(n, cur, lo - 1, hi, out);
            cur.pop();
        }
        if hi < n {
            cur.push(hi + 1);
            grow(n, cur, lo, hi + 1, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        out.push(Permutation(Vec::new()));
        return out;
    }
    for first in 1..=n as u32 {
        grow(n as u32, &mut vec![first], first, first, &mut out);
    }
    out
}

/// `τ_{(j_k, …, j_1)}`, stored as `js[m - 1] = j_m`, so `js` is weakly
/// decreasing with `js.len() < js[k - 1]` and `js[0] ≤ N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TauPresentation {
    js: Vec<u32>,
}

impl TauPresentation {
    pub fn new(js: Vec<u32>, n: usize) -> Result<Self> {
        let k = js.len();
        if k > 0 && k >= n {
            return Err(Error::InvalidPresentation(format!("k = {k} must be below N = {n}")));
        }
        if js.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPresentation(format!("{js:?} is not weakly decreasing")));
        }
        if let Some(&last) = js.last() {
            if last as usize <= k {
                return Err(Error::InvalidPresentation(format!("j_k = {last} must exceed k = {k}")));
            }
        }
        if let Some(&first) = js.first() {
            if first as usize > n {
                return Err(Error::InvalidPresentation(format!("j_1 = {first} exceeds N = {n}")));
            }
        }
        Ok(TauPresentation { js })
    }

    pub fn empty() -> Self {
        TauPresentation { js: Vec::new() }
    }

    pub fn k(&self) -> usize {
        self.js.len()
    }

    /// `j_m` for `1 ≤ m ≤ k`.
    pub fn j(&self, m: usize) -> u32 {
        self.js[m - 1]
    }

    pub fn js(&self) -> &[u32] {
        &self.js
    }
}

impl fmt::Display for TauPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.js.iter().rev().map(|x| x.to_string()).collect();
        write!(f, "tau({})", parts.join(","))
    }
}

/// Integers `m ≤ k` sit at positions `j_m - m + 1`; `k+1, …, N` fill the
/// remaining positions in increasing order.
pub fn tau_from_presentation(tp: &TauPresentation, n: usize) -> Result<Permutation> {
    let tp = TauPresentation::new(tp.js.clone(), n)?;
    let mut v = vec![0u32; n];
    for m in 1..=tp.k() {
        v[(tp.j(m) as usize - m + 1) - 1] = m as u32;
    }
    for (next, x) in (tp.k() as u32 + 1..).zip(v.iter_mut().filter(|x| **x == 0)) {
        *x = next;
    }
    Permutation::new(v)
}

pub fn tau_to_presentation(sigma: &Permutation) -> Result<TauPresentation> {
    if !xi_contains(sigma) {
        return Err(Error::NotInXi(sigma.to_string()));
    }
    let n = sigma.n();
    let increasing_from = |k: usize| {
        ((k + 1)..n).all(|v| sigma.position_of(v as u32) < sigma.position_of(v as u32 + 1))
    };
    let k = (0..n).find(|&k| increasing_from(k)).unwrap_or(n);
    let js: Vec<u32> = (1..=k)
        .map(|m| (sigma.position_of(m as u32) + m - 1) as u32)
        .collect();
    let tp = TauPresentation::new(js, n).map_err(|e| Error::Invariant(e.to_string()))?;
    if &tau_from_presentation(&tp, n)? != sigma {
        return Err(Error::Invariant(format!("presentation of {sigma} does not round trip")));
    }
    Ok(tp)
}

/// The level-preserving permutation sending `τ(k_i)` to the `i`-th smallest
/// member of its level, where `k_1 < k_2 < …` are the positions holding that
/// level's values.
pub fn tau_bullet(tau: &Permutation, eta: &Layering) -> Result<Permutation> {
    let n = tau.n();
    let mut by_level: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for k in 1..=n {
        let v = VertexId::new(tau.apply(k));
        let t = eta.level(v).ok_or(Error::MissingLevel(v))?;
        by_level.entry(t).or_default().push(k);
    }
    let mut out = vec![0u32; n];
    for (t, positions) in by_level {
        let members = eta.members(t);
        for (i, &k) in positions.iter().enumerate() {
            out[tau.apply(k) as usize - 1] = members[i].label();
        }
    }
    Permutation::new(out)
}

/// One step `ν_{i+1} = ν_i s_p`, swapping `m = ν_i(p) < n = ν_i(p+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathStep {
    pub p: usize,
    pub m: u32,
    pub n: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ReducedWord(pub Vec<usize>);

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl ReducedWord {
    pub fn parse(s: &str) -> std::result::Result<Self, String> {
        s.split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<usize>().map_err(|_| format!("invalid position {t:?}")))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(ReducedWord)
    }
}

/// `id = ν_1 → ν_2 → … → ν_{M+1} = w_0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContiguousPath {
    perms: Vec<Permutation>,
    steps: Vec<PathStep>,
}

impl ContiguousPath {
    pub fn n(&self) -> usize {
        self.perms[0].n()
    }

    pub fn perms(&self) -> &[Permutation] {
        &self.perms
    }

    pub fn steps(&self) -> &[PathStep] {
        &self.steps
    }

    pub fn word(&self) -> ReducedWord {
        path_to_word(self)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("path serialization cannot fail")
    }

    pub fn from_json(s: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

impl Serialize for ContiguousPath {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Doc<'a> {
            words: Vec<usize>,
            perms: &'a [Permutation],
        }
        Doc {
            words: self.steps.iter().map(|st| st.p).collect(),
            perms: &self.perms,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ContiguousPath {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Doc {
            words: Vec<usize>,
            perms: Vec<Permutation>,
        }
        let doc = Doc::deserialize(d)?;
        let n = doc
            .perms
            .first()
            .map(Permutation::n)
            .ok_or_else(|| serde::de::Error::custom("a path has at least one permutation"))?;
        let path = word_to_path(n, &ReducedWord(doc.words)).map_err(serde::de::Error::custom)?;
        if path.perms != doc.perms {
            return Err(serde::de::Error::custom("perms do not match the word"));
        }
        Ok(path)
    }
}

pub fn path_to_word(path: &ContiguousPath) -> ReducedWord {
    ReducedWord(path.steps.iter().map(|s| s.p).collect())
}

/// The path of prefixes of `word`. Rejects words that are not reduced
/// expressions of `w_0` or that leave `Ξ_N`.
pub fn word_to_path(n: usize, word: &ReducedWord) -> Result<ContiguousPath> {
    let m_total = n * n.saturating_sub(1) / 2;
    let fail = |prefix: usize, reason: String| Error::NotContiguous { prefix, reason };
    let mut perms = vec![Permutation::identity(n)];
    let mut steps = Vec::with_capacity(word.0.len());
    for (i, &p) in word.0.iter().enumerate() {
        if p == 0 || p >= n {
            return Err(fail(i + 1, format!("position {p} outside [1,{}]", n.saturating_sub(1))));
        }
        let cur = perms.last().unwrap();
        let (m, nn) = (cur.apply(p), cur.apply(p + 1));
        if m > nn {
            return Err(fail(i + 1, format!("s_{p} is a descent, the word is not reduced")));
        }
        let next = cur.times_simple(p);
        if !xi_contains(&next) {
            return Err(fail(i + 1, format!("{next} is not in Xi_{n}")));
        }
        steps.push(PathStep { p, m, n: nn });
        perms.push(next);
    }
    if word.0.len() != m_total {
        return Err(fail(
            word.0.len(),
            format!("length {} instead of {m_total}", word.0.len()),
        ));
    }
    Ok(ContiguousPath { perms, steps })
}

/// `[1 … N] → … → w_0`, pulling 1 to the far right, then 2, and so on.
pub fn simplest_path(n: usize) -> ContiguousPath {
    let word: Vec<usize> = (1..n).rev().flat_map(|top| 1..=top).collect();
    word_to_path(n, &ReducedWord(word)).expect("the simplest path is contiguous")
}

/// Depth-first enumeration of contiguous paths, lexicographic in the word.
#[derive(Debug, Clone)]
pub struct ContiguousPaths {
    n: usize,
    stack: Vec<(Permutation, usize)>,
    word: Vec<usize>,
    total: usize,
}

impl ContiguousPaths {
    pub fn new(n: usize) -> Self {
        ContiguousPaths {
            n,
            stack: vec![(Permutation::identity(n), 1)],
            word: Vec::new(),
            total: n * n.saturating_sub(1) / 2,
        }
    }
}

impl Iterator for ContiguousPaths {
    type Item = ContiguousPath;

    fn next(&mut self) -> Option<ContiguousPath> {
        while let Some((perm, next_p)) = self.stack.last_mut() {
            if self.word.len() == self.total {
                let path = word_to_path(self.n, &ReducedWord(self.word.clone()))
                    .expect("enumerated words are contiguous");
                self.stack.pop();
                self.word.pop();
                return Some(path);
            }
            let found = (*next_p..self.n).find(|&p| {
                perm.apply(p) < perm.apply(p + 1) && xi_contains(&perm.times_simple(p))
            });
            match found {
                Some(p) => {
                    *next_p = p + 1;
                    let child = perm.times_simple(p);
                    self.stack.push((child, 1));
                    self.word.push(p);
                }
                None => {
                    self.stack.pop();
                    self.word.pop();
                }
            }
        }
        None
    }
}

pub fn enumerate_contiguous_paths(n: usize, limit: usize) -> Vec<ContiguousPath> {
    ContiguousPaths::new(n).take(limit).collect()
}

/// The mutation sequence of a contiguous path: a step swapping two values on
/// the same level contributes `(ν_{i+1})_•(ν_{i+1}(p_i))`, other steps
/// contribute nothing. The same index computed from `ν_i` is asserted equal.
pub fn seq_from_path(path: &ContiguousPath, eta: &Layering) -> Result<MutationSequence> {
    if eta.mode() != LayeringMode::Full {
        return Err(Error::WrongMode("full"));
    }
    let mut out = MutationSequence::default();
    for (i, st) in path.steps.iter().enumerate() {
        let (vm, vn) = (VertexId::new(st.m), VertexId::new(st.n));
        let tm = eta.level(vm).ok_or(Error::MissingLevel(vm))?;
        let tn = eta.level(vn).ok_or(Error::MissingLevel(vn))?;
        if tm != tn {
            continue;
        }
        let (before, after) = (&path.perms[i], &path.perms[i + 1]);
        let later = tau_bullet(after, eta)?.apply(after.apply(st.p) as usize);
        let earlier = tau_bullet(before, eta)?.apply(before.apply(st.p) as usize);
        if later != earlier {
            return Err(Error::Invariant(format!(
                "step {}: index {later} from the later permutation, {earlier} from the earlier one",
                i + 1
            )));
        }
        let v = VertexId::new(later);
        if !eta.is_exchangeable(v) {
            return Err(Error::Invariant(format!("step {}: emitted frozen index {v}", i + 1)));
        }
        out.push(v);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layering::{expected_length, is_full};
    use proptest::prelude::*;

    fn perm(v: &[u32]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    fn six() -> Layering {
        Layering::new(
            LayeringMode::Full,
            &[(1, 1), (2, 2), (3, 3), (4, 1), (5, 2), (6, 1)],
        )
        .unwrap()
    }

    /// All permutations of `[1, n]`.
    fn all_perms(n: usize) -> Vec<Permutation> {
        fn rec(rest: &mut Vec<u32>, cur: &mut Vec<u32>, out: &mut Vec<Permutation>) {
            if rest.is_empty() {
                out.push(Permutation(cur.clone()));
                return;
            }
            for i in 0..rest.len() {
                let x = rest.remove(i);
                cur.push(x);
                rec(rest, cur, out);
                cur.pop();
                rest.insert(i, x);
            }
        }
        let mut out = Vec::new();
        rec(&mut (1..=n as u32).collect(), &mut Vec::new(), &mut out);
        out
    }

    #[test]
    fn composition_order() {
        // (1 2) ∘ (2 3): 1 -> 1 -> 2, 2 -> 3 -> 3, 3 -> 2 -> 1
        let a = perm(&[2, 1, 3]);
        let b = perm(&[1, 3, 2]);
        assert_eq!(a.compose(&b), perm(&[2, 3, 1]));
        assert_eq!(perm(&[3, 1, 2]).times_simple(1), perm(&[1, 3, 2]));
        assert_eq!(perm(&[3, 1, 2]).compose(&Permutation::simple(3, 1)), perm(&[1, 3, 2]));
        assert_eq!(Permutation::cycle(3, 1, 3), perm(&[2, 3, 1]));
        assert!(Permutation::new(vec![1, 1]).is_err());
        assert!(Permutation::new(vec![0, 1]).is_err());
    }

    #[test]
    fn xi_examples() {
        assert!(xi_contains(&Permutation::identity(5)));
        assert!(xi_contains(&Permutation::longest(5)));
        assert!(!xi_contains(&perm(&[1, 3, 2])));
        assert!(xi_contains(&perm(&[3, 4, 2, 5, 1, 6])));
        assert_eq!(enumerate_xi(2), vec![perm(&[1, 2]), perm(&[2, 1])]);
        assert_eq!(
            enumerate_xi(3),
            vec![perm(&[1, 2, 3]), perm(&[2, 1, 3]), perm(&[2, 3, 1]), perm(&[3, 2, 1])]
        );
    }

    #[test]
    fn xi_matches_brute_force() {
        for n in 1..=7 {
            let brute: Vec<Permutation> = all_perms(n).into_iter().filter(xi_contains).collect();
            let mut sorted = brute.clone();
            sorted.sort();
            assert_eq!(enumerate_xi(n), sorted, "n = {n}");
            assert_eq!(brute.len(), 1 << (n - 1));
        }
        for n in 8..=10 {
            assert_eq!(enumerate_xi(n).len(), 1 << (n - 1));
        }
    }

    #[test]
    fn tau_presentations() {
        assert_eq!(tau_from_presentation(&TauPresentation::empty(), 4).unwrap(), Permutation::identity(4));
        let tp = TauPresentation::new(vec![3], 3).unwrap();
        assert_eq!(tau_from_presentation(&tp, 3).unwrap(), perm(&[2, 3, 1]));
        for n in 2..=6 {
            let w0 = TauPresentation::new(vec![n as u32; n - 1], n).unwrap();
            assert_eq!(tau_from_presentation(&w0, n).unwrap(), Permutation::longest(n));
            assert_eq!(tau_to_presentation(&Permutation::longest(n)).unwrap(), w0);
        }
        assert!(matches!(tau_to_presentation(&perm(&[1, 3, 2])), Err(Error::NotInXi(_))));
        assert!(TauPresentation::new(vec![2, 3], 4).is_err());
        assert!(TauPresentation::new(vec![1], 4).is_err());
        assert!(TauPresentation::new(vec![5], 4).is_err());
    }

    /// The cycle product with the rightmost cycle applied first agrees with
    /// the positional description.
    #[test]
    fn presentation_matches_cycle_product() {
        for n in 1..=7 {
            for sigma in enumerate_xi(n) {
                let tp = tau_to_presentation(&sigma).unwrap();
                let mut prod = Permutation::identity(n);
                for m in 1..=tp.k() {
                    prod = Permutation::cycle(n, m, tp.j(m) as usize).compose(&prod);
                }
                assert_eq!(prod, sigma);
                assert_eq!(tau_from_presentation(&tp, n).unwrap(), sigma);
            }
        }
    }

    #[test]
    fn tau_bullet_examples() {
        let tb = tau_bullet(&perm(&[3, 4, 2, 5, 1, 6]), &six()).unwrap();
        assert_eq!(tb.apply(4), 1);
        assert_eq!(tb.apply(1), 4);
        assert_eq!(tb.apply(6), 6);
        for k in [2, 3, 5] {
            assert_eq!(tb.apply(k), k as u32);
        }
        assert_eq!(tau_bullet(&Permutation::identity(6), &six()).unwrap(), Permutation::identity(6));
        let c3 = Layering::constant(LayeringMode::Full, &[1, 2, 3]);
        assert_eq!(tau_bullet(&Permutation::longest(3), &c3).unwrap(), Permutation::longest(3));
    }

    #[test]
    fn paths_for_small_n() {
        let p3 = enumerate_contiguous_paths(3, 10);
        assert_eq!(p3.len(), 1);
        assert_eq!(p3[0].word(), ReducedWord(vec![1, 2, 1]));
        assert_eq!(
            p3[0].perms(),
            &[perm(&[1, 2, 3]), perm(&[2, 1, 3]), perm(&[2, 3, 1]), perm(&[3, 2, 1])][..]
        );
        assert_eq!(p3[0], simplest_path(3));
        let p2 = enumerate_contiguous_paths(2, 10);
        assert_eq!(p2.len(), 1);
        assert_eq!(p2[0].steps().len(), 1);
        assert!(matches!(
            word_to_path(3, &ReducedWord(vec![2, 1, 2])),
            Err(Error::NotContiguous { prefix: 1, .. })
        ));
        assert!(matches!(
            word_to_path(3, &ReducedWord(vec![1, 1])),
            Err(Error::NotContiguous { prefix: 2, .. })
        ));
        assert!(matches!(
            word_to_path(3, &ReducedWord(vec![1, 2])),
            Err(Error::NotContiguous { .. })
        ));
    }

    /// Pull-rule oracle: when `m` moves right past `n > m`, every `j < m` is
    /// already to the right of `m`.
    fn obeys_pull_rule(path: &ContiguousPath) -> bool {
        path.steps().iter().zip(path.perms()).all(|(st, before)| {
            let pos = before.position_of(st.m);
            (1..st.m).all(|j| before.position_of(j) > pos)
        })
    }

    /// Simulated pulls: every ascent whose moving value has all smaller values
    /// to its right.
    fn paths_by_pulling(n: usize) -> Vec<Vec<usize>> {
        fn rec(n: usize, cur: &Permutation, word: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if *cur == Permutation::longest(n) {
                out.push(word.clone());
                return;
            }
            for p in 1..n {
                let (m, k) = (cur.apply(p), cur.apply(p + 1));
                if m < k && (1..m).all(|j| cur.position_of(j) > p) {
                    word.push(p);
                    rec(n, &cur.times_simple(p), word, out);
                    word.pop();
                }
            }
        }
        let mut out = Vec::new();
        rec(n, &Permutation::identity(n), &mut Vec::new(), &mut out);
        out
    }

    #[test]
    fn enumeration_matches_pull_simulation() {
        for n in 2..=5 {
            let words: Vec<Vec<usize>> = ContiguousPaths::new(n).map(|p| p.word().0).collect();
            assert_eq!(words, paths_by_pulling(n), "n = {n}");
            for p in ContiguousPaths::new(n) {
                assert!(obeys_pull_rule(&p));
                assert!(p.perms().iter().all(xi_contains));
                assert_eq!(p.steps().len(), n * (n - 1) / 2);
                assert_eq!(word_to_path(n, &path_to_word(&p)).unwrap(), p);
            }
        }
    }

    #[test]
    fn seq_examples() {
        let c3 = Layering::constant(LayeringMode::Full, &[1, 2, 3]);
        let path = simplest_path(3);
        assert_eq!(seq_from_path(&path, &c3).unwrap(), MutationSequence::from_labels(&[1, 2, 1]));
        let fine = Layering::finest(LayeringMode::Full, &[1, 2, 3, 4]);
        assert!(seq_from_path(&simplest_path(4), &fine).unwrap().is_empty());
        let ex = Layering::constant(LayeringMode::ExchangeOnly, &[1, 2, 3]);
        assert_eq!(seq_from_path(&path, &ex), Err(Error::WrongMode("full")));
    }

    #[test]
    fn json_forms() {
        let path = simplest_path(3);
        let s = path.to_json();
        assert_eq!(s, r#"{"words":[1,2,1],"perms":[[1,2,3],[2,1,3],[2,3,1],[3,2,1]]}"#);
        assert_eq!(ContiguousPath::from_json(&s).unwrap(), path);
        assert!(ContiguousPath::from_json(r#"{"words":[2,1,2],"perms":[[1,2,3]]}"#).is_err());
        let p: Permutation = serde_json::from_str("[2,1,3]").unwrap();
        assert_eq!(p, perm(&[2, 1, 3]));
        assert!(serde_json::from_str::<Permutation>("[2,2]").is_err());
    }

    fn arb_full_layering(n: usize) -> impl Strategy<Value = Layering> {
        prop::collection::vec(0i64..3, n).prop_map(|levels| {
            let pairs: Vec<(u32, i64)> = levels
                .iter()
                .enumerate()
                .map(|(i, &t)| (i as u32 + 1, t))
                .collect();
            Layering::new(LayeringMode::Full, &pairs).unwrap()
        })
    }

    proptest! {
        #[test]
        fn seq_is_full_and_exchangeable(
            (eta, idx) in (2usize..6).prop_flat_map(|n| (arb_full_layering(n), 0usize..64))
        ) {
            let n = eta.domain().len();
            let paths = enumerate_contiguous_paths(n, 64);
            let path = &paths[idx % paths.len()];
            let seq = seq_from_path(path, &eta).unwrap();
            let ex_eta = eta.restrict_to_exchangeable();
            prop_assert_eq!(is_full(&seq, &ex_eta), Ok(()));
            prop_assert_eq!(seq.len(), expected_length(&eta));
            let fr = eta.frozen_set().unwrap();
            prop_assert!(seq.iter().all(|v| !fr.contains(v)));
        }

        #[test]
        fn presentation_round_trip(idx in 0usize..64, n in 1usize..8) {
            let xi = enumerate_xi(n);
            let sigma = &xi[idx % xi.len()];
            let tp = tau_to_presentation(sigma).unwrap();
            prop_assert_eq!(&tau_from_presentation(&tp, n).unwrap(), sigma);
        }
    }
}
