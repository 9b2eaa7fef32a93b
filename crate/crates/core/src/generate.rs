//! Reproducible instance families.

use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::exchange::{ExchangeMatrix, MutationSequence};
use crate::layering::{check_layered_step, enumerate_full_shuffles, level_chains, Layering, LayeringMode};
use crate::permpath::ContiguousPaths;
use crate::quiver::{to_matrix, to_quiver, ValuedArrow, ValuedIceQuiver};
use crate::verify::{FamilyKind, Instance};
use crate::vertex::VertexId;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InstanceFamily {
    /// Chains `←A` on consecutive labels, one per entry of `sizes`, with up
    /// to `limit` full shuffles.
    DisjointChains { sizes: Vec<usize>, limit: usize },
    /// Random acyclic valued quivers on at most `max_n` vertices with the
    /// finest layering and a source-first order.
    AcyclicFinest {
        max_n: usize,
        count: usize,
        max_label: i64,
        density: f64,
        seed: u64,
    },
    /// Level chains plus random valued arrows between levels.
    RandomLayered {
        sizes: Vec<usize>,
        count: usize,
        max_label: i64,
        density: f64,
        seed: u64,
    },
    /// Every set partition of `[1, n]` with up to `path_limit` contiguous
    /// paths and the level-chain matrix.
    PathDerived { n: usize, path_limit: usize },
}

impl InstanceFamily {
    pub fn kind(&self) -> FamilyKind {
        match self {
            InstanceFamily::DisjointChains { .. } => FamilyKind::DisjointChains,
            InstanceFamily::AcyclicFinest { .. } => FamilyKind::AcyclicFinest,
            InstanceFamily::RandomLayered { .. } => FamilyKind::RandomLayered,
            InstanceFamily::PathDerived { .. } => FamilyKind::PathDerived,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generated {
    pub instance: Instance,
    /// Every layered check passed during a trial run.
    pub trial_passed: bool,
}

/// Block index of each element of `[1, n]`, one vector per set partition,
/// as restricted growth strings in lexicographic order.
pub fn set_partitions(n: usize) -> Vec<Vec<i64>> {
    fn rec(n: usize, cur: &mut Vec<i64>, max: i64, out: &mut Vec<Vec<i64>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..=max + 1 {
            cur.push(b);
            rec(n, cur, max.max(b), out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        out.push(Vec::new());
    } else {
        rec(n, &mut vec![0], 0, &mut out);
    }
    out
}

fn layering_from_blocks(mode: LayeringMode, blocks: &[i64]) -> Layering {
    let pairs: Vec<(u32, i64)> = blocks
        .iter()
        .enumerate()
        .map(|(i, &t)| (i as u32 + 1, t))
        .collect();
    Layering::new(mode, &pairs).expect("labels are distinct")
}

fn sizes_layering(sizes: &[usize]) -> Layering {
    let blocks: Vec<i64> = sizes
        .iter()
        .enumerate()
        .flat_map(|(t, &s)| std::iter::repeat_n(t as i64, s))
        .collect();
    layering_from_blocks(LayeringMode::ExchangeOnly, &blocks)
}

/// Arrow `i -> j` between vertices with symmetrizer entries `di`, `dj`:
/// labels `(m·l/di, m·l/dj)` with `l = lcm(di, dj)`.
fn symmetrizable_arrow(i: VertexId, j: VertexId, di: i64, dj: i64, m: i64) -> ValuedArrow {
    let l = di.lcm(&dj);
    ValuedArrow::new(i, j, m * l / di, m * l / dj)
}

fn trial_passes(b: &ExchangeMatrix, eta: &Layering, seq: &MutationSequence) -> bool {
    let mut cur = b.clone();
    for &k in seq.iter() {
        if check_layered_step(&to_quiver(&cur), k, eta).is_err() {
            return false;
        }
        match cur.mutate(k) {
            Ok(next) => cur = next,
            Err(_) => return false,
        }
    }
    true
}

fn generated(family: FamilyKind, matrix: ExchangeMatrix, eta: Layering, seq: MutationSequence) -> Generated {
    let trial_passed = trial_passes(&matrix, &eta, &seq);
    Generated {
        instance: Instance {
            family,
            matrix,
            eta,
            seq,
            path: None,
        },
        trial_passed,
    }
}

pub fn generate(family: &InstanceFamily) -> Vec<Generated> {
    match family {
        InstanceFamily::DisjointChains { sizes, limit } => {
            let eta = sizes_layering(sizes);
            let b = to_matrix(&level_chains(&eta)).expect("chains are symmetrizable");
            enumerate_full_shuffles(&eta, *limit)
                .into_iter()
                .map(|seq| generated(FamilyKind::DisjointChains, b.clone(), eta.clone(), seq))
                .collect()
        }
        InstanceFamily::AcyclicFinest {
            max_n,
            count,
            max_label,
            density,
            seed,
        } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            (0..*count)
                .map(|_| {
                    let n = rng.random_range(1..=(*max_n).max(1));
                    let (b, order) = random_acyclic(&mut rng, n, *max_label, *density);
                    let labels: Vec<u32> = (1..=n as u32).collect();
                    let eta = Layering::finest(LayeringMode::ExchangeOnly, &labels);
                    generated(FamilyKind::AcyclicFinest, b, eta, order)
                })
                .collect()
        }
        InstanceFamily::RandomLayered {
            sizes,
            count,
            max_label,
            density,
            seed,
        } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let eta = sizes_layering(sizes);
            let shuffles = enumerate_full_shuffles(&eta, 256);
            (0..*count)
                .map(|_| {
                    let b = random_layered(&mut rng, &eta, *max_label, *density);
                    let seq = shuffles[rng.random_range(0..shuffles.len())].clone();
                    generated(FamilyKind::RandomLayered, b, eta.clone(), seq)
                })
                .collect()
        }
        InstanceFamily::PathDerived { n, path_limit } => {
            let paths: Vec<_> = ContiguousPaths::new(*n).take(*path_limit).collect();
            let mut out = Vec::new();
            for blocks in set_partitions(*n) {
                let eta = layering_from_blocks(LayeringMode::Full, &blocks);
                let b = to_matrix(&level_chains(&eta)).expect("chains are symmetrizable");
                for path in &paths {
                    let seq = crate::permpath::seq_from_path(path, &eta)
                        .expect("level-chain paths produce sequences");
                    let trial_passed = trial_passes(&b, &eta.restrict_to_exchangeable(), &seq);
                    out.push(Generated {
                        instance: Instance {
                            family: FamilyKind::PathDerived,
                            matrix: b.clone(),
                            eta: eta.clone(),
                            seq,
                            path: Some(path.word()),
                        },
                        trial_passed,
                    });
                }
            }
            out
        }
    }
}

/// A random acyclic valued quiver on `[1, n]` and a source-first order of
/// its vertices. Arrows go from earlier to later vertices of a random order.
pub fn random_acyclic<R: Rng>(rng: &mut R, n: usize, max_label: i64, density: f64) -> (ExchangeMatrix, MutationSequence) {
    let max_label = max_label.max(1);
    let d: Vec<i64> = (0..n).map(|_| rng.random_range(1..=max_label)).collect();
    let mut order: Vec<u32> = (1..=n as u32).collect();
    order.shuffle(rng);
    let mut arrows = Vec::new();
    for a in 0..n {
        for c in (a + 1)..n {
            if !rng.random_bool(density.clamp(0.0, 1.0)) {
                continue;
            }
            let (i, j) = (order[a], order[c]);
            let (di, dj) = (d[i as usize - 1], d[j as usize - 1]);
            let l = di.lcm(&dj);
            let room = max_label / (l / di).max(l / dj);
            if room < 1 {
                continue;
            }
            let m = rng.random_range(1..=room);
            arrows.push(symmetrizable_arrow(VertexId::new(i), VertexId::new(j), di, dj, m));
        }
    }
    let ex: Vec<VertexId> = (1..=n as u32).map(VertexId::new).collect();
    let q = ValuedIceQuiver::new(ex, Vec::new(), arrows).expect("generated quiver is valid");
    let b = to_matrix(&q).expect("generated quiver is symmetrizable");
    (b, MutationSequence::from_labels(&order))
}

/// Level chains with one symmetrizer value per level, plus random valued
/// arrows between distinct levels.
pub fn random_layered<R: Rng>(rng: &mut R, eta: &Layering, max_label: i64, density: f64) -> ExchangeMatrix {
    let max_label = max_label.max(1);
    let levels = eta.levels();
    let dl: Vec<i64> = levels.iter().map(|_| rng.random_range(1..=max_label)).collect();
    let d = |v: VertexId| dl[levels.iter().position(|&t| Some(t) == eta.level(v)).unwrap()];
    let mut arrows: Vec<ValuedArrow> = level_chains(eta).arrows().collect();
    let ex = eta.exchangeable();
    for (a, &u) in ex.iter().enumerate() {
        for &w in &ex[a + 1..] {
            if eta.level(u) == eta.level(w) || !rng.random_bool(density.clamp(0.0, 1.0)) {
                continue;
            }
            let (du, dw) = (d(u), d(w));
            let l = du.lcm(&dw);
            let room = max_label / (l / du).max(l / dw);
            if room < 1 {
                continue;
            }
            let m = rng.random_range(1..=room);
            let (i, j, di, dj) = if rng.random_bool(0.5) { (u, w, du, dw) } else { (w, u, dw, du) };
            arrows.push(symmetrizable_arrow(i, j, di, dj, m));
        }
    }
    let q = ValuedIceQuiver::new(ex, Vec::new(), arrows).expect("generated quiver is valid");
    to_matrix(&q).expect("generated quiver is symmetrizable")
}

/// A random skew-symmetrizable matrix with `n` exchangeable and `m` frozen
/// rows, entries bounded by `bound` in absolute value.
pub fn random_exchange_matrix<R: Rng>(rng: &mut R, n: usize, m: usize, bound: i64) -> ExchangeMatrix {
    let bound = bound.max(1);
    let d: Vec<i64> = (0..n).map(|_| rng.random_range(1..=bound.min(3))).collect();
    let mut rows = vec![vec![0i64; n]; n + m];
    for i in 0..n {
        for j in (i + 1)..n {
            let l = d[i].lcm(&d[j]);
            let room = bound / (l / d[i]).max(l / d[j]);
            if room < 1 {
                continue;
            }
            let x = rng.random_range(-room..=room);
            rows[i][j] = x * l / d[i];
            rows[j][i] = -x * l / d[j];
        }
    }
    for row in rows.iter_mut().skip(n) {
        for x in row.iter_mut() {
            *x = rng.random_range(-bound..=bound);
        }
    }
    let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
    let ex: Vec<u32> = (1..=n as u32).collect();
    let fr: Vec<u32> = (n as u32 + 1..=(n + m) as u32).collect();
    ExchangeMatrix::from_i64(&ex, &fr, &refs).expect("generated matrix is skew-symmetrizable")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(labels: &[u32]) -> MutationSequence {
        MutationSequence::from_labels(labels)
    }

    #[test]
    fn bell_numbers() {
        let counts: Vec<usize> = (0..=6).map(|n| set_partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 15, 52, 203]);
    }

    #[test]
    fn disjoint_chain_sizes_two_and_one() {
        let gen = generate(&InstanceFamily::DisjointChains {
            sizes: vec![2, 1],
            limit: 100,
        });
        let seqs: Vec<MutationSequence> = gen.iter().map(|g| g.instance.seq.clone()).collect();
        assert_eq!(
            seqs,
            vec![seq(&[1, 2, 1, 3]), seq(&[1, 2, 3, 1]), seq(&[1, 3, 2, 1]), seq(&[3, 1, 2, 1])]
        );
        assert!(gen.iter().all(|g| g.trial_passed));
        let b = &gen[0].instance.matrix;
        assert_eq!(to_quiver(b).arrow_count(), 1);
    }

    #[test]
    fn two_vertex_acyclic() {
        let q = ValuedIceQuiver::new(
            vec![VertexId::new(1), VertexId::new(2)],
            vec![],
            vec![ValuedArrow::simple(VertexId::new(1), VertexId::new(2))],
        )
        .unwrap();
        let b = to_matrix(&q).unwrap();
        let eta = Layering::finest(LayeringMode::ExchangeOnly, &[1, 2]);
        let cert = crate::verify::verify_theorem_b(&b, &eta, &seq(&[1, 2])).unwrap();
        assert!(cert.hypotheses_hold);
        assert!(cert.verdict.is_maximal_green());
    }

    #[test]
    fn zero_density_matches_chains() {
        let chains = generate(&InstanceFamily::DisjointChains {
            sizes: vec![2, 2],
            limit: 1,
        });
        let random = generate(&InstanceFamily::RandomLayered {
            sizes: vec![2, 2],
            count: 3,
            max_label: 1,
            density: 0.0,
            seed: 9,
        });
        for g in &random {
            assert_eq!(g.instance.matrix, chains[0].instance.matrix);
            assert!(g.trial_passed);
        }
    }

    #[test]
    fn reproducible() {
        let fam = InstanceFamily::AcyclicFinest {
            max_n: 6,
            count: 5,
            max_label: 3,
            density: 0.5,
            seed: 42,
        };
        assert_eq!(generate(&fam), generate(&fam));
        let other = InstanceFamily::AcyclicFinest {
            max_n: 6,
            count: 5,
            max_label: 3,
            density: 0.5,
            seed: 43,
        };
        assert_ne!(generate(&fam), generate(&other));
    }

    #[test]
    fn acyclic_labels_bounded() {
        let gen = generate(&InstanceFamily::AcyclicFinest {
            max_n: 7,
            count: 50,
            max_label: 3,
            density: 0.6,
            seed: 1,
        });
        for g in gen {
            let q = to_quiver(&g.instance.matrix);
            for a in q.arrows() {
                assert!(a.labels.0 <= 3.into() && a.labels.1 <= 3.into());
            }
            assert!(g.trial_passed);
        }
    }

    #[test]
    fn random_matrices_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let b = random_exchange_matrix(&mut rng, 4, 2, 4);
            assert!(b.symmetrizer().is_ok());
        }
    }
}
