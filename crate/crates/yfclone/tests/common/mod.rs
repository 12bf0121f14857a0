#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use yfclone::{q, Q, Xy};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random positive rational with small numerator and denominator.
pub fn rand_q(r: &mut ChaCha8Rng) -> Q {
    q(r.random_range(1..=9), r.random_range(1..=5))
}

/// Random rational, possibly negative.
pub fn rand_q_signed(r: &mut ChaCha8Rng) -> Q {
    q(r.random_range(-7..=9), r.random_range(1..=5))
}

pub fn rand_xy(seed: u64, k: usize) -> Xy<Q> {
    let mut r = rng(seed);
    Xy::from_fn(k, |_| (rand_q_signed(&mut r), rand_q_signed(&mut r)))
}

/// Naive Laplace expansion along the first row.
pub fn naive_det(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    if n == 0 {
        return q(1, 1);
    }
    let mut acc = q(0, 1);
    for j in 0..n {
        if m[0][j] == q(0, 1) {
            continue;
        }
        let minor: Vec<Vec<Q>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| v.clone()).collect()).collect();
        let term = m[0][j].clone() * naive_det(&minor);
        acc = if j % 2 == 0 { acc + term } else { acc - term };
    }
    acc
}
