//! Clone Schur and clone homogeneous functions, Kostka matrices, harmonic normalization.

use crate::error::{Error, Result};
use crate::poly::MPoly;
use crate::scalar::{Ring, Scalar, Q};
use crate::specs::Xy;
use crate::words::{covers_up, enumerate_level, FibWord};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

pub use crate::poly::Poly as TauPolynomial;

/// A_ℓ(m) = x_{m+ℓ} A_{ℓ-1} − y_{m+ℓ-1} A_{ℓ-2}, A_0 = 1.
pub fn det_a<S: Ring>(l: usize, m: usize, xy: &Xy<S>) -> S {
    det_a_all(l, m, xy).pop().unwrap()
}

/// A_0(m), …, A_ℓ(m).
pub fn det_a_all<S: Ring>(l: usize, m: usize, xy: &Xy<S>) -> Vec<S> {
    let mut out = vec![S::one()];
    if l >= 1 {
        out.push(xy.x(m + 1));
    }
    for j in 2..=l {
        let v = xy.x(m + j) * out[j - 1].clone() - xy.y(m + j - 1) * out[j - 2].clone();
        out.push(v);
    }
    out
}

/// B_k(m): B_0 = y_{m+1}, B_1 = x_{m+3}y_{m+1} − x_{m+1}y_{m+2},
/// B_k = x_{m+k+2} B_{k-1} − y_{m+k+1} B_{k-2}.
pub fn det_b<S: Ring>(k: usize, m: usize, xy: &Xy<S>) -> S {
    det_b_all(k, m, xy).pop().unwrap()
}

/// B_0(m), …, B_k(m).
pub fn det_b_all<S: Ring>(k: usize, m: usize, xy: &Xy<S>) -> Vec<S> {
    let mut out = vec![xy.y(m + 1)];
    if k >= 1 {
        out.push(xy.x(m + 3) * xy.y(m + 1) - xy.x(m + 1) * xy.y(m + 2));
    }
    for j in 2..=k {
        let v = xy.x(m + j + 2) * out[j - 1].clone() - xy.y(m + j + 1) * out[j - 2].clone();
        out.push(v);
    }
    out
}

/// s_{1^k} = A_k(0); s_{1^k 2 u} = B_k(|u|) s_u.
pub fn clone_schur<S: Ring>(w: &FibWord, xy: &Xy<S>) -> S {
    let d = w.digits();
    let mut acc = S::one();
    let mut i = 0;
    loop {
        let k = d[i..].iter().take_while(|&&c| c == 1).count();
        if i + k == d.len() {
            return acc * det_a(k, 0, xy);
        }
        let rest: usize = d[i + k + 1..].iter().map(|&c| c as usize).sum();
        acc = acc * det_b(k, rest, xy);
        i += k + 1;
    }
}

/// Product of x_{|v|+1} (digit 1) or y_{|v|+1} (digit 2) over factorizations w = d v.
pub fn clone_homogeneous<S: Ring>(w: &FibWord, xy: &Xy<S>) -> S {
    let mut acc = S::one();
    let mut suffix = 0;
    for &d in w.digits().iter().rev() {
        acc = acc * if d == 1 { xy.x(suffix + 1) } else { xy.y(suffix + 1) };
        suffix += d as usize;
    }
    acc
}

/// φ(w) = s_w / (x_1⋯x_{|w|}).
pub fn harmonic_phi<S: Scalar>(w: &FibWord, xy: &Xy<S>) -> Result<S> {
    let mut den = S::one();
    for i in 1..=w.weight() {
        let xi = xy.x(i);
        if xi.is_zero() {
            return Err(Error::ZeroAt(i));
        }
        den = den * xi;
    }
    Ok(clone_schur(w, xy) / den)
}

/// Clone Kostka matrix over YF_n × YF_n in lex order.
#[derive(Clone, Debug, PartialEq)]
pub struct KostkaMatrix {
    pub words: Vec<FibWord>,
    pub entries: Vec<Vec<BigInt>>,
}

impl KostkaMatrix {
    pub fn index(&self, w: &FibWord) -> Option<usize> {
        self.words.binary_search(w).ok()
    }

    pub fn get(&self, u: &FibWord, v: &FibWord) -> BigInt {
        self.entries[self.index(u).unwrap()][self.index(v).unwrap()].clone()
    }
}

fn kostka_cache() -> &'static RwLock<HashMap<usize, Arc<KostkaMatrix>>> {
    static CACHE: OnceLock<RwLock<HashMap<usize, Arc<KostkaMatrix>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// K_n from the four recursions
/// K_{2u,2v} = K_{u,v}, K_{2u,1v} = Σ_{u↗w} K_{w,v}, K_{1u,2v} = 0, K_{1u,1v} = K_{u,v}.
pub fn kostka(n: usize) -> Arc<KostkaMatrix> {
    if let Some(k) = kostka_cache().read().unwrap().get(&n) {
        return k.clone();
    }
    let words = enumerate_level(n);
    let m = words.len();
    let mut entries = vec![vec![BigInt::zero(); m]; m];
    if n <= 1 {
        entries[0][0] = BigInt::one();
    } else {
        let k2 = kostka(n - 2);
        let k1 = kostka(n - 1);
        for (i, u) in words.iter().enumerate() {
            for (j, v) in words.iter().enumerate() {
                let (ut, vt) = (u.tail(), v.tail());
                entries[i][j] = match (u.first(), v.first()) {
                    (Some(2), Some(2)) => k2.get(&ut, &vt),
                    (Some(2), Some(1)) => covers_up(&ut).iter().map(|x| k1.get(x, &vt)).sum(),
                    (Some(1), Some(2)) => BigInt::zero(),
                    _ => k1.get(&ut, &vt),
                };
            }
        }
    }
    let k = Arc::new(KostkaMatrix { words, entries });
    kostka_cache().write().unwrap().insert(n, k.clone());
    k
}

/// K_n^{-1} by back-substitution (K_n is upper unitriangular in lex order).
pub fn kostka_inverse(n: usize) -> Vec<Vec<Q>> {
    let k = kostka(n);
    let m = k.words.len();
    let mut inv = vec![vec![BigInt::zero(); m]; m];
    for col in 0..m {
        for i in (0..m).rev() {
            let mut v = if i == col { BigInt::one() } else { BigInt::zero() };
            for j in i + 1..m {
                v -= &k.entries[i][j] * &inv[j][col];
            }
            inv[i][col] = v;
        }
    }
    inv.into_iter().map(|r| r.into_iter().map(Q::from_integer).collect()).collect()
}

/// s_w(u|t) with t_k = k + ε_1+⋯+ε_k and u_k = 1 + t_{k-1}.
pub fn epsilon_expansion(w: &FibWord) -> Result<MPoly> {
    let n = w.weight();
    if n > 8 {
        return Err(Error::Range(format!("epsilon expansion limited to |w| <= 8, got {n}")));
    }
    let t = |k: usize| -> MPoly { (1..=k).fold(MPoly::from_int(k as i64), |acc, i| acc + MPoly::var(i)) };
    let xy = Xy::from_fn(n + 1, |k| {
        let tp = if k == 1 { MPoly::zero() } else { t(k - 1) };
        (MPoly::one() + tp, t(k))
    });
    Ok(clone_schur(w, &xy))
}
