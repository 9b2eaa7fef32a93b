use mgs_core::{generate, Certificate, InstanceFamily};

fn certify_all(family: &InstanceFamily) -> Vec<(Certificate, bool)> {
    generate(family)
        .into_iter()
        .map(|g| (g.instance.certify().expect("run succeeds"), g.trial_passed))
        .collect()
}

#[test]
fn random_layered_soundness() {
    let mut held = 0;
    let mut failed = 0;
    for (seed, sizes) in [(1u64, vec![2, 2]), (2, vec![3, 1]), (3, vec![2, 1, 2]), (4, vec![1, 1, 1, 1])] {
        let family = InstanceFamily::RandomLayered {
            sizes,
            count: 40,
            max_label: 3,
            density: 0.4,
            seed,
        };
        for (cert, trial) in certify_all(&family) {
            let layered_ok = cert.first_layered_violation().is_none();
            assert_eq!(trial, layered_ok, "trial flag disagrees with certificate");
            assert!(!cert.is_counterexample, "counterexample {}", cert.instance.canonical_json());
            if cert.hypotheses_hold {
                assert!(cert.verdict.is_maximal_green());
                assert!(cert.truncations_pass());
                held += 1;
            } else {
                failed += 1;
            }
        }
    }
    assert!(held > 0, "no instance satisfied the layered conditions");
    assert!(failed > 0, "no negative controls were produced");
}

#[test]
fn certified_families_satisfy_truncations() {
    let families = [
        InstanceFamily::DisjointChains {
            sizes: vec![3, 2],
            limit: 200,
        },
        InstanceFamily::AcyclicFinest {
            max_n: 6,
            count: 60,
            max_label: 3,
            density: 0.5,
            seed: 11,
        },
        InstanceFamily::PathDerived { n: 4, path_limit: 10 },
    ];
    for family in &families {
        for (cert, trial) in certify_all(family) {
            assert!(trial);
            assert!(cert.hypotheses_hold, "{}", cert.instance.canonical_json());
            assert!(cert.verdict.is_maximal_green());
            assert!(cert.truncations_pass(), "{}", cert.instance.canonical_json());
        }
    }
}

#[test]
fn certificates_are_reproducible() {
    let family = InstanceFamily::AcyclicFinest {
        max_n: 5,
        count: 10,
        max_label: 2,
        density: 0.5,
        seed: 3,
    };
    let a: Vec<String> = certify_all(&family).into_iter().map(|(c, _)| c.to_json_pretty()).collect();
    let b: Vec<String> = certify_all(&family).into_iter().map(|(c, _)| c.to_json_pretty()).collect();
    assert_eq!(a, b);
}
