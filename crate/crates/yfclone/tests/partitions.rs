use yfclone::partitions::*;
use yfclone::words::{enumerate_level, fibonacci, w};

fn example() -> SetPartition {
    "135|29|4|678".parse().unwrap()
}

fn catalan(n: u64) -> u64 {
    (0..n).fold(1u64, |c, k| c * 2 * (2 * k + 1) / (k + 2))
}

#[test]
fn counts() {
    assert_eq!(enumerate_partitions(1).count(), 1);
    assert_eq!(enumerate_noncrossing(5).count(), 42);
    let bell = [1, 1, 2, 5, 15, 52, 203, 877, 4140];
    for (n, &b) in bell.iter().enumerate() {
        assert_eq!(enumerate_partitions(n).count(), b, "n={n}");
    }
    for n in 1..=9u64 {
        assert_eq!(enumerate_noncrossing(n as usize).count() as u64, catalan(n));
    }
}

#[test]
fn canonical_form_and_parse() {
    let pi: SetPartition = "678|4|29|531".parse().unwrap();
    assert_eq!(pi, example());
    assert_eq!(pi.to_string(), "135|29|4|678");
    assert!("12|2".parse::<SetPartition>().is_err());
    let big: SetPartition = "1,10|2,3,4,5,6,7,8,9".parse().unwrap();
    assert_eq!(big.n(), 10);
    assert_eq!(big.to_string(), "1,10|2,3,4,5,6,7,8,9");
}

#[test]
fn example_roles_and_gammas() {
    let pi = example();
    let sw = pi.sweep();
    let by_role = |r: Role| -> Vec<usize> { (1..=9).filter(|&i| sw.roles[i - 1] == r).collect() };
    assert_eq!(by_role(Role::Opener), vec![1, 2, 6]);
    assert_eq!(by_role(Role::Closer), vec![5, 8, 9]);
    assert_eq!(by_role(Role::Singleton), vec![4]);
    assert_eq!(by_role(Role::Transient), vec![3, 7]);
    let gammas: Vec<(usize, usize)> = (1..=9).filter_map(|i| sw.gamma[i - 1].map(|g| (i, g))).collect();
    assert_eq!(gammas, vec![(3, 1), (5, 2), (7, 2), (8, 2), (9, 1)]);
    assert_eq!(pi.gamma_set(3), vec![1, 2]);
    assert_eq!(pi.gamma_set(5), vec![2, 3]);
    assert_eq!(pi.gamma_set(7), vec![2, 6]);
    assert_eq!(pi.gamma_set(8), vec![2, 7]);
    assert_eq!(pi.gamma_set(9), vec![2]);
    assert_eq!(pi.gamma_set(4), vec![2, 3]);
    assert!(pi.gamma_set(1).is_empty());
    assert!(!pi.is_noncrossing());
    assert!("19|235|4|678".parse::<SetPartition>().unwrap().is_noncrossing());
}

#[test]
fn example_stats() {
    let st = example().stats();
    assert_eq!(st.ell, vec![1, 3, 5]);
    assert_eq!(st.g, vec![2, 3]);
    assert_eq!(st.nest, 3);
    assert_eq!(example().nest_direct(), 3);
    assert_eq!(st.area, 3 + 10);
    assert_eq!((st.gbar1, st.blocks_star, st.singletons, st.blocks), (1, 3, 1, 4));
}

#[test]
fn example_histoire() {
    let h = histoire(&example());
    assert_eq!(h.to_string(), "UUF1F0D2UF2D2D1");
    assert_eq!(histoire_inverse(&h).unwrap(), example());
    let flat = histoire(&SetPartition::singletons(4));
    assert_eq!(flat.to_string(), "F0F0F0F0");
}

#[test]
fn malformed_histoires_rejected() {
    for bad in ["D1", "U", "UF2D1", "UD0", "UUD3D1D1", "X", "UF"] {
        assert!(bad.parse::<Histoire>().is_err(), "{bad}");
    }
}

#[test]
fn histoire_round_trip_pi8() {
    let mut seen = std::collections::HashSet::new();
    for pi in enumerate_partitions(8) {
        let h = histoire(&pi);
        let s = h.to_string();
        assert_eq!(s.parse::<Histoire>().unwrap(), h);
        assert_eq!(histoire_inverse(&h).unwrap(), pi);
        assert!(seen.insert(s));
    }
    assert_eq!(seen.len(), 4140);
}

#[test]
fn stats_invariants_pi9() {
    for pi in enumerate_partitions(9) {
        let st = pi.stats();
        let h = histoire(&pi);
        assert_eq!(st.ell.iter().sum::<usize>(), 9);
        let ct = pi.sweep().gamma.iter().filter(|g| g.is_some()).count();
        assert_eq!(st.g.iter().sum::<usize>(), ct);
        assert!(st.ell[0] >= 1);
        // γ_i ≤ #Γ_i only bounds g_m by the visits at heights ≥ m
        for m in 1..st.ell.len() {
            assert!(st.ell[m..].iter().sum::<usize>() >= st.g_at(m));
        }
        assert_eq!(st.nest, pi.nest_direct(), "{pi}");
        let area: usize = st.ell.iter().enumerate().map(|(k, l)| k * l).sum();
        assert_eq!(st.area, area);
        assert_eq!(h.area().unwrap(), area);
        // ℓ is a Fibonacci composition
        assert!(yfclone::words::is_fibonacci_composition(&st.ell), "{pi}");
        // non-crossing iff all colors are 0 or the height
        let hs = h.heights().unwrap();
        let nc_colors = h.steps.iter().zip(&hs).all(|(s, &ht)| match *s {
            Step::Flat(c) => c == 0 || c == ht,
            Step::Down(c) => c == ht,
            Step::Up => true,
        });
        assert_eq!(nc_colors, pi.is_noncrossing());
    }
}

#[test]
fn levelwise_inequality_fails_off_nc() {
    let pi: SetPartition = "14|25|36".parse().unwrap();
    let st = pi.stats();
    assert_eq!(st.ell, vec![1, 2, 2, 1]);
    assert_eq!(st.g, vec![3, 0, 0]);
    assert!(st.ell[1] < st.g[0]);
}

#[test]
fn noncrossing_level_inequalities() {
    for n in 1..=10 {
        for pi in enumerate_noncrossing(n) {
            let st = pi.stats();
            let p = st.ell.len() - 1;
            assert_eq!(st.g.len(), p);
            for k in 1..p {
                assert!(st.ell[k] > st.g[k - 1] && st.g[k - 1] >= 1, "{pi}");
            }
            if p >= 1 {
                assert!(st.ell[p] >= st.g[p - 1] && st.g[p - 1] >= 1);
            }
        }
    }
}

#[test]
fn split_small_cases() {
    let s = split(&[3, 2]).unwrap();
    assert_eq!((s.a.clone(), s.b.clone()), (vec![3, 2], vec![3, 2]));
    let s = split(&[2, 3, 4]).unwrap();
    assert_eq!(s.a, vec![2, 7]);
    assert_eq!(s.b, vec![6, 3]);
    let s = split(&[1, 2, 1, 1, 3]).unwrap();
    assert_eq!(s.a, vec![1, 3, 4]);
    assert_eq!(s.b, vec![4, 3, 1]);
    assert_eq!(s.dep_b, vec![2, 1]);
    assert!(split(&[]).is_err());
    assert_eq!(depletion(&[5]).unwrap(), Vec::<usize>::new());
    assert_eq!(depletion(&[1, 3, 4, 2]).unwrap(), vec![2, 3, 2]);
}

#[test]
fn split_parts_are_fibonacci_compositions() {
    for n in 1..=12 {
        for kappa in compositions(n) {
            let s = split(&kappa).unwrap();
            assert_eq!(s.a.iter().sum::<usize>(), n);
            assert_eq!(s.b.iter().sum::<usize>(), n, "{kappa:?}");
            assert_eq!(s.u.weight(), n);
            assert_eq!(s.v.weight(), n);
        }
    }
}

#[test]
fn lemma_ell_g_from_z_nc8() {
    for pi in enumerate_noncrossing(8) {
        let st = pi.stats();
        let z = z_map(&pi).unwrap();
        assert_eq!(z.iter().sum::<usize>(), 8);
        let s = split(&z).unwrap();
        assert_eq!(s.a, st.ell, "{pi}");
        assert_eq!(s.dep_b, st.g, "{pi}");
    }
    assert!(z_map(&example()).is_err());
}

#[test]
fn z_map_surjective_with_witness() {
    for n in 1..=10 {
        let mult = composition_multiplicities(n);
        assert_eq!(mult.len(), 1 << (n - 1));
        for kappa in compositions(n) {
            let pi = z_witness(&kappa).unwrap();
            assert!(pi.is_noncrossing());
            assert_eq!(z_map(&pi).unwrap(), kappa);
        }
    }
}

#[test]
fn split_injective() {
    for n in 1..=12 {
        assert!(split_is_injective(n).unwrap(), "n={n}");
    }
}

#[test]
fn multiplicity_matrix_n5() {
    let m = multiplicity_matrix(5).unwrap();
    let order = ["221", "212", "2111", "122", "1211", "1121", "1112", "11111"];
    assert_eq!(m.words, order.iter().map(|s| w(s)).collect::<Vec<_>>());
    let table: [[u64; 8]; 8] = [
        [1, 0, 0, 1, 0, 0, 0, 0],
        [0, 2, 0, 2, 0, 0, 0, 0],
        [0, 0, 1, 0, 3, 3, 1, 0],
        [0, 0, 0, 2, 0, 0, 0, 0],
        [0, 0, 0, 0, 4, 6, 2, 0],
        [0, 0, 0, 0, 0, 6, 3, 0],
        [0, 0, 0, 0, 0, 0, 4, 0],
        [0, 0, 0, 0, 0, 0, 0, 1],
    ];
    for i in 0..8 {
        assert_eq!(m.entries[i], table[i].to_vec(), "row {}", order[i]);
    }
    assert_eq!(m.total(), 42);
    assert_eq!(m.nonzero(), 16);
}

#[test]
fn multiplicity_matrix_shape() {
    for n in 1..=9 {
        let m = multiplicity_matrix(n).unwrap();
        assert_eq!(m.words.len() as u64, fibonacci(n));
        assert_eq!(m.words, enumerate_level(n));
        assert_eq!(m.total(), catalan(n as u64));
        assert_eq!(m.nonzero(), 1 << (n - 1));
        for i in 0..m.words.len() {
            assert!(m.entries[i][i] > 0, "n={n} diag {}", m.words[i]);
        }
    }
}

#[test]
fn triangularity_probe_report() {
    for n in 1..=9 {
        let r = triangularity_probe(&multiplicity_matrix(n).unwrap());
        println!(
            "n={n}: upper-triangular={} dominance={} equal-hike={} violations={}",
            r.upper_triangular,
            r.dominance,
            r.equal_hike,
            r.violations.len()
        );
    }
}
