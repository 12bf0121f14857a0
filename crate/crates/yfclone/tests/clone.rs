mod common;

use common::*;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use yfclone::clone::*;
use yfclone::words::{covers_up, dim, enumerate_level, w, FibWord};
use yfclone::{q, qi, specs, Scalar, Xy, Q};

fn plancherel(k: usize) -> Xy<Q> {
    Xy::from_fn(k, |i| (qi(i as i64), qi(i as i64)))
}

fn a_matrix(l: usize, m: usize, xy: &Xy<Q>) -> Vec<Vec<Q>> {
    let mut a = vec![vec![Q::zero(); l]; l];
    for i in 0..l {
        a[i][i] = xy.x(m + i + 1);
        if i + 1 < l {
            a[i][i + 1] = xy.y(m + i + 1);
            a[i + 1][i] = Q::one();
        }
    }
    a
}

fn b_matrix(k: usize, m: usize, xy: &Xy<Q>) -> Vec<Vec<Q>> {
    let n = k + 1;
    let mut b = vec![vec![Q::zero(); n]; n];
    b[0][0] = xy.y(m + 1);
    if n > 1 {
        b[0][1] = xy.x(m + 1) * xy.y(m + 2);
    }
    for i in 1..n {
        b[i][i - 1] = Q::one();
        b[i][i] = xy.x(m + i + 2);
        if i + 1 < n {
            b[i][i + 1] = xy.y(m + i + 2);
        }
    }
    b
}

#[test]
fn determinants_match_cofactor_expansion() {
    for seed in 0..4 {
        let xy = rand_xy(seed, 16);
        for m in 0..4 {
            for l in 0..=6 {
                assert_eq!(det_a(l, m, &xy), naive_det(&a_matrix(l, m, &xy)), "A_{l}({m})");
            }
            for k in 0..=6 {
                assert_eq!(det_b(k, m, &xy), naive_det(&b_matrix(k, m, &xy)), "B_{k}({m})");
            }
        }
    }
}

#[test]
fn plancherel_determinants() {
    let xy = plancherel(30);
    for l in 0..12 {
        assert_eq!(det_a(l, 0, &xy), Q::one());
    }
    for r in 0..8 {
        for l in 1..8 {
            assert_eq!(det_b(l - 1, r, &xy), qi(r as i64 + 1));
        }
    }
}

#[test]
fn shifted_plancherel_determinants() {
    // x_k = y_k = k + γ
    for gamma in [q(1, 1), q(1, 2), q(5, 3)] {
        let xy = Xy::from_fn(30, |k| (qi(k as i64) + gamma.clone(), qi(k as i64) + gamma.clone()));
        let mut poch = Q::one();
        let mut sum = Q::one();
        for k in 0..10 {
            assert_eq!(det_a(k, 0, &xy), sum);
            poch = poch * (gamma.clone() + qi(k as i64));
            sum = sum + poch.clone();
        }
        for k in 0..8 {
            for m in 0..8 {
                assert_eq!(det_b(k, m, &xy), qi(m as i64 + 1) + gamma.clone());
            }
        }
    }
}

#[test]
fn clone_schur_small_cases() {
    // x = (1,2,3,…), y = (1,1,1,…): s_212 = y_4 · (x_3 y_1 − x_1 y_2) = 2
    let xy = Xy::from_fn(10, |k| (qi(k as i64), Q::one()));
    assert_eq!(clone_schur(&w("212"), &xy), qi(2));
    let g = rand_xy(7, 12);
    let by_hand = det_b(0, 3, &g) * det_b(1, 0, &g);
    assert_eq!(clone_schur(&w("212"), &g), by_hand);
    assert_eq!(clone_schur(&w("1121"), &g), det_b(2, 1, &g) * det_a(1, 0, &g));
    assert_eq!(clone_schur(&FibWord::empty(), &g), Q::one());
}

#[test]
fn plancherel_schur_is_dim() {
    let xy = plancherel(12);
    for n in 0..=10 {
        for v in enumerate_level(n) {
            assert_eq!(clone_schur(&v, &xy), Q::from_integer(BigInt::from(dim(&v))), "{v:?}");
        }
    }
}

#[test]
fn pieri_rule() {
    for seed in 10..14 {
        let xy = rand_xy(seed, 12);
        for n in 0..=8 {
            for v in enumerate_level(n) {
                let lhs = xy.x(n + 1) * clone_schur(&v, &xy);
                let rhs: Q = covers_up(&v).iter().map(|u| clone_schur(u, &xy)).fold(Q::zero(), |a, b| a + b);
                assert_eq!(lhs, rhs, "{v:?}");
            }
        }
    }
}

#[test]
fn harmonic_branching() {
    let mut r = rng(3);
    for _ in 0..3 {
        let xy = Xy::from_fn(12, |_| (rand_q(&mut r), rand_q(&mut r)));
        for n in 0..=8 {
            for v in enumerate_level(n) {
                let up: Q = covers_up(&v).iter().map(|u| harmonic_phi(u, &xy).unwrap()).fold(Q::zero(), |a, b| a + b);
                assert_eq!(up, harmonic_phi(&v, &xy).unwrap());
            }
        }
    }
    assert_eq!(harmonic_phi(&FibWord::empty(), &plancherel(2)).unwrap(), Q::one());
    let pl = plancherel(8);
    let fact = (1..=6).fold(Q::one(), |a, k| a * qi(k));
    for v in enumerate_level(6) {
        let d = Q::from_integer(BigInt::from(dim(&v)));
        assert_eq!(harmonic_phi(&v, &pl).unwrap(), d / fact.clone());
    }
    let bad = Xy::from_fn(4, |k| (if k == 2 { Q::zero() } else { Q::one() }, Q::one()));
    assert!(harmonic_phi(&w("11"), &bad).is_err());
}

#[test]
fn scaling_and_action() {
    let mut r = rng(21);
    let xy = rand_xy(22, 12);
    let gamma = rand_q(&mut r);
    let scaled = Xy::from_fn(12, |k| (gamma.clone() * xy.x(k), gamma.clone() * gamma.clone() * xy.y(k)));
    for n in 0..=8 {
        for v in enumerate_level(n) {
            assert_eq!(clone_schur(&v, &scaled), gamma.pow(n as i32) * clone_schur(&v, &xy));
        }
    }
    let g: Vec<Q> = (0..14).map(|_| rand_q(&mut r)).collect();
    let acted = Xy::from_fn(12, |k| (g[k - 1].clone() * xy.x(k), g[k - 1].clone() * g[k].clone() * xy.y(k)));
    for n in 0..=7 {
        let prod = g[..n].iter().fold(Q::one(), |a, b| a * b.clone());
        for v in enumerate_level(n) {
            assert_eq!(clone_schur(&v, &acted), prod.clone() * clone_schur(&v, &xy));
        }
    }
}

#[test]
fn homogeneous_functions() {
    let xy = rand_xy(5, 10);
    assert_eq!(clone_homogeneous(&FibWord::empty(), &xy), Q::one());
    assert_eq!(clone_homogeneous(&w("21"), &xy), xy.x(1) * xy.y(2));
    let prod = (1..=6).fold(Q::one(), |a, k| a * xy.x(k));
    assert_eq!(clone_homogeneous(&FibWord::ones(6), &xy), prod);
}

#[test]
fn normalization_identity() {
    for seed in 30..33 {
        let xy = rand_xy(seed, 14);
        for n in 0usize..=10 {
            let mut lhs = clone_schur(&FibWord::ones(n), &xy);
            let mut xprod = Q::one();
            for m in 0..n.saturating_sub(1) {
                if m > 0 {
                    xprod = xprod * xy.x(m);
                }
                let word: FibWord = format!("{}2", "1".repeat(n - m - 2)).parse().unwrap();
                lhs = lhs + qi(m as i64 + 1) * xprod.clone() * clone_schur(&word, &xy.shifted(m));
            }
            let rhs = (1..=n).fold(Q::one(), |a, k| a * xy.x(k));
            assert_eq!(lhs, rhs, "n = {n}");
        }
    }
}

#[test]
fn t_form_identity() {
    let mut r = rng(40);
    for _ in 0..3 {
        let t: Vec<Q> = (0..16).map(|_| rand_q(&mut r)).collect();
        let tk = |k: usize| if k == 0 { Q::zero() } else { t[k - 1].clone() };
        let xy = Xy::from_fn(15, |k| (Q::one() + tk(k - 1), tk(k)));
        for n in 0usize..=10 {
            let mut lhs = Q::one();
            for m in 0..n.saturating_sub(1) {
                let prod = (0..m).fold(Q::one(), |a, k| a * (Q::one() + tk(k)));
                lhs = lhs + qi(m as i64 + 1) * det_b(n - m - 2, m, &xy) * prod;
            }
            let rhs = (0..n).fold(Q::one(), |a, k| a * (Q::one() + tk(k)));
            assert_eq!(lhs, rhs, "n = {n}");
        }
    }
}

#[test]
fn kostka_matrices() {
    let k2i = kostka_inverse(2);
    assert_eq!(k2i, vec![vec![qi(1), qi(-1)], vec![qi(0), qi(1)]]);
    for n in 0..=8 {
        let k = kostka(n);
        let inv = kostka_inverse(n);
        let m = k.words.len();
        let ones = FibWord::ones(n);
        for i in 0..m {
            for j in 0..m {
                let s: Q = (0..m).fold(Q::zero(), |a, l| a + Q::from_integer(k.entries[i][l].clone()) * inv[l][j].clone());
                assert_eq!(s, if i == j { Q::one() } else { Q::zero() });
                assert!(!k.entries[i][j].is_negative());
                if i > j {
                    assert!(k.entries[i][j].is_zero());
                }
            }
            assert_eq!(inv[i][i], Q::one());
            assert_eq!(k.get(&k.words[i], &ones), BigInt::from(dim(&k.words[i])));
        }
    }
}

#[test]
fn homogeneous_expands_in_schur() {
    let xy = rand_xy(50, 10);
    for n in 0..=7 {
        let k = kostka(n);
        for v in &k.words {
            let rhs = k.words.iter().fold(Q::zero(), |a, u| a + Q::from_integer(k.get(u, v)) * clone_schur(u, &xy));
            assert_eq!(clone_homogeneous(v, &xy), rhs, "{v:?}");
        }
    }
}

#[test]
fn epsilon_expansion_is_positive() {
    assert_eq!(epsilon_expansion(&FibWord::ones(4)).unwrap(), yfclone::poly::MPoly::one());
    let s2 = epsilon_expansion(&w("2")).unwrap();
    assert_eq!(s2, yfclone::poly::MPoly::one() + yfclone::poly::MPoly::var(1));
    for n in 0..=7 {
        for v in enumerate_level(n) {
            let p = epsilon_expansion(&v).unwrap();
            assert!(!p.terms().is_empty());
            assert!(p.terms().values().all(|c| c.is_positive()), "{v:?}: {p:?}");
        }
    }
    let p = epsilon_expansion(&w("221")).unwrap();
    assert!(p.terms().values().all(|c| c.is_positive()));
    // at ε = 0 the expansion is the Plancherel value dim(w)
    assert_eq!(p.constant_term(), BigInt::from(dim(&w("221"))));
    assert!(epsilon_expansion(&FibWord::ones(9)).is_err());
}

#[test]
fn scalar_to_f64_handles_huge_values() {
    let big = specs::qint(&q(3, 1), 800);
    let v = Scalar::to_f64(&(big.clone() / (big + Q::one())));
    assert!((v - 1.0).abs() < 1e-12);
}
