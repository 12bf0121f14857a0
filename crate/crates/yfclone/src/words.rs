//! Fibonacci words and the Young–Fibonacci lattice.

use crate::error::{Error, Result};
use num_bigint::BigUint;
use num_traits::One;
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

/// A finite word over {1,2}, stored prefix first.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct FibWord {
    digits: Vec<u8>,
}

impl FibWord {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_digits(digits: Vec<u8>) -> Result<Self> {
        if let Some(p) = digits.iter().position(|&d| d != 1 && d != 2) {
            return Err(Error::Parse { pos: p, msg: format!("digit {} not in {{1,2}}", digits[p]) });
        }
        Ok(Self { digits })
    }

    pub fn ones(n: usize) -> Self {
        Self { digits: vec![1; n] }
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.digits.iter().map(|&d| d as usize).sum()
    }

    /// `d` followed by `self`.
    pub fn prepend(&self, d: u8) -> Self {
        let mut digits = Vec::with_capacity(self.digits.len() + 1);
        digits.push(d);
        digits.extend_from_slice(&self.digits);
        Self { digits }
    }

    pub fn tail(&self) -> Self {
        Self { digits: self.digits[1..].to_vec() }
    }

    pub fn first(&self) -> Option<u8> {
        self.digits.first().copied()
    }

    /// Number of leading 2s.
    pub fn leading_twos(&self) -> usize {
        self.digits.iter().take_while(|&&d| d == 2).count()
    }

    pub fn leading_ones(&self) -> usize {
        self.digits.iter().take_while(|&&d| d == 1).count()
    }

    pub fn is_all_ones(&self) -> bool {
        self.digits.iter().all(|&d| d == 1)
    }
}

impl Ord for FibWord {
    // 2 sorts before 1
    fn cmp(&self, other: &Self) -> Ordering {
        let a = self.digits.iter().map(|d| 3 - d);
        let b = other.digits.iter().map(|d| 3 - d);
        a.cmp(b)
    }
}

impl PartialOrd for FibWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for FibWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.digits {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for FibWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.digits.is_empty() {
            write!(f, "∅")
        } else {
            write!(f, "{self}")
        }
    }
}

impl FromStr for FibWord {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "empty" || s == "∅" {
            return Ok(Self::empty());
        }
        let mut digits = Vec::with_capacity(s.len());
        for (pos, ch) in s.chars().enumerate() {
            match ch {
                '1' => digits.push(1),
                '2' => digits.push(2),
                _ => return Err(Error::Parse { pos, msg: format!("unexpected '{ch}'") }),
            }
        }
        Ok(Self { digits })
    }
}

/// Shorthand for tests and examples; panics on bad input.
pub fn w(s: &str) -> FibWord {
    s.parse().expect("valid Fibonacci word")
}

/// Words covering `v`, in lex order.
pub fn covers_up(v: &FibWord) -> Vec<FibWord> {
    let d = v.digits();
    let k = v.leading_twos();
    let mut out = vec![v.prepend(1)];
    // F2: 2^k 1 u -> 2^{k+1} u
    if d.get(k) == Some(&1) {
        let mut nd = vec![2; k + 1];
        nd.extend_from_slice(&d[k + 1..]);
        out.push(FibWord { digits: nd });
    }
    // F3: 2^k u -> 2^l 1 2^{k-l} u
    for l in 1..=k {
        let mut nd = d.to_vec();
        nd.insert(l, 1);
        out.push(FibWord { digits: nd });
    }
    out.sort();
    out.dedup();
    out
}

/// Words covered by `v`, in lex order.
pub fn covers_down(v: &FibWord) -> Vec<FibWord> {
    let d = v.digits();
    let mut cands = Vec::new();
    for i in 0..d.len() {
        let mut nd = d.to_vec();
        if d[i] == 1 {
            nd.remove(i);
        } else {
            nd[i] = 1;
        }
        cands.push(FibWord { digits: nd });
    }
    cands.sort();
    cands.dedup();
    cands.retain(|u| covers_up(u).contains(v));
    cands
}

/// Number of saturated chains from ∅ to `v`.
pub fn dim(v: &FibWord) -> BigUint {
    let mut acc = BigUint::one();
    let mut suffix = 0usize;
    for &d in v.digits().iter().rev() {
        if d == 2 {
            acc *= BigUint::from(suffix + 1);
        }
        suffix += d as usize;
    }
    acc
}

/// All of YF_n in lex order.
pub fn enumerate_level(n: usize) -> Vec<FibWord> {
    let mut levels: Vec<Vec<FibWord>> = vec![vec![FibWord::empty()], vec![w("1")]];
    for m in 2..=n {
        let mut cur: Vec<FibWord> = levels[m - 2].iter().map(|u| u.prepend(2)).collect();
        cur.extend(levels[m - 1].iter().map(|u| u.prepend(1)));
        levels.push(cur);
    }
    levels.swap_remove(n)
}

/// Runs, hikes and their tilde variants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunsHikes {
    pub runs: Vec<usize>,
    pub hikes: Vec<usize>,
    pub runs_tilde: Vec<usize>,
    pub hikes_tilde: Vec<usize>,
}

pub fn runs_hikes(v: &FibWord) -> RunsHikes {
    let s = v.to_string();
    let runs: Vec<usize> = s.split('2').map(str::len).collect();
    let hikes: Vec<usize> = s.split('1').map(str::len).collect();
    let p = runs.len();
    let runs_tilde = runs.iter().enumerate().map(|(i, &r)| if i + 1 < p { r + 2 } else { r }).collect();
    let m = hikes.len();
    let hikes_tilde = hikes.iter().enumerate().map(|(i, &h)| if i + 1 < m { 2 * h + 1 } else { 2 * h }).collect();
    RunsHikes { runs, hikes, runs_tilde, hikes_tilde }
}

/// Row lengths of the ribbon of `v`.
pub fn ribbon(v: &FibWord) -> Vec<usize> {
    if v.is_empty() {
        return vec![];
    }
    let r = runs_hikes(v).runs;
    let p = r.len();
    if p == 1 {
        return vec![r[0]];
    }
    r.iter()
        .enumerate()
        .map(|(i, &x)| if i == 0 || i + 1 == p { x + 1 } else { x + 2 })
        .collect()
}

pub fn is_fibonacci_composition(c: &[usize]) -> bool {
    let p = c.len();
    c.iter().all(|&x| x >= 1) && (p < 3 || c[1..p - 1].iter().all(|&x| x > 1))
}

/// Inverse of [`ribbon`].
pub fn fib_of(c: &[usize]) -> Result<FibWord> {
    if !is_fibonacci_composition(c) {
        return Err(Error::NotFibonacci(c.to_vec()));
    }
    let p = c.len();
    if p == 0 {
        return Ok(FibWord::empty());
    }
    if p == 1 {
        return Ok(FibWord::ones(c[0]));
    }
    let mut digits = Vec::new();
    for (i, &x) in c.iter().enumerate() {
        let r = if i == 0 || i + 1 == p { x - 1 } else { x - 2 };
        digits.extend(std::iter::repeat_n(1u8, r));
        if i + 1 < p {
            digits.push(2);
        }
    }
    Ok(FibWord { digits })
}

/// Dominance order on words read as compositions.
pub fn dominance(u: &FibWord, v: &FibWord) -> bool {
    let (mut su, mut sv) = (0usize, 0usize);
    for (a, b) in u.digits().iter().zip(v.digits()) {
        su += *a as usize;
        sv += *b as usize;
        if su < sv {
            return false;
        }
    }
    true
}

pub fn total_hike(v: &FibWord) -> usize {
    v.digits().iter().filter(|&&d| d == 2).count()
}

pub fn total_run(v: &FibWord) -> usize {
    v.digits().iter().filter(|&&d| d == 1).count()
}

/// F_n with F_0 = F_1 = 1.
pub fn fibonacci(n: usize) -> u64 {
    let (mut a, mut b) = (1u64, 1u64);
    for _ in 0..n {
        (a, b) = (b, a + b);
    }
    a
}
