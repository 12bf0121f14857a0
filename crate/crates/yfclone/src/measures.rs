//! Clone coherent measures M_n(w) = dim(w)·φ(w), run and hike laws,
//! word samplers, limit laws and Type-I boundary masses.

use crate::clone::{det_a, det_b, harmonic_phi};
use crate::error::{Error, Result};
use crate::scalar::{Scalar, Q};
use crate::specs::{b_inf, classify, Specialization, Verdict, Xy};
use crate::words::{covers_up, dim, enumerate_level, FibWord};
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeMap;

/// Largest level that is materialized exactly.
pub const MAX_EXACT_LEVEL: usize = 14;
/// Hard cap of the generic forward walk.
pub const MAX_WALK_LEVEL: usize = 500;

// ---------------------------------------------------------------- rng

/// Stream `stream` of the ChaCha8 generator keyed by `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Splits `total` samples over `streams` streams; stream i gets the first
/// `total % streams` extra samples.
pub fn shard_sizes(total: usize, streams: usize) -> Vec<usize> {
    let s = streams.max(1);
    (0..s).map(|i| total / s + usize::from(i < total % s)).collect()
}

/// Runs `f(stream_rng(seed, i), size_i)` on every stream in parallel and
/// concatenates the results in stream order.
pub fn run_streams<T: Send>(
    seed: u64,
    streams: usize,
    total: usize,
    f: impl Fn(&mut ChaCha8Rng, usize) -> Vec<T> + Sync,
) -> Vec<T> {
    let sizes = shard_sizes(total, streams);
    let parts: Vec<Vec<T>> = std::thread::scope(|sc| {
        let handles: Vec<_> = sizes
            .iter()
            .enumerate()
            .map(|(i, &sz)| {
                let f = &f;
                sc.spawn(move || f(&mut stream_rng(seed, i as u64), sz))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("sampling thread panicked")).collect()
    });
    parts.into_iter().flatten().collect()
}

// ---------------------------------------------------------------- exact measure

/// M_n over YF_n, exact.
#[derive(Clone, Debug)]
pub struct CoherentMeasure {
    pub n: usize,
    pub spec: String,
    pub words: Vec<FibWord>,
    pub probs: Vec<Q>,
}

fn dim_q(w: &FibWord) -> Q {
    Q::from_integer(BigInt::from(dim(w)))
}

impl CoherentMeasure {
    pub fn from_xy(xy: &Xy<Q>, n: usize, label: &str) -> Result<Self> {
        if n > MAX_EXACT_LEVEL {
            return Err(Error::Range(format!("exact measures are materialized for n ≤ {MAX_EXACT_LEVEL}, got {n}")));
        }
        let words = enumerate_level(n);
        let probs = words.iter().map(|w| Ok(dim_q(w) * harmonic_phi(w, xy)?)).collect::<Result<Vec<_>>>()?;
        Ok(Self { n, spec: label.to_string(), words, probs })
    }

    pub fn prob(&self, w: &FibWord) -> Q {
        match self.words.binary_search(w) {
            Ok(i) => self.probs[i].clone(),
            Err(_) => Q::zero(),
        }
    }

    pub fn total(&self) -> Q {
        self.probs.iter().fold(Q::zero(), |a, b| a + b)
    }

    pub fn event(&self, pred: impl Fn(&FibWord) -> bool) -> Q {
        self.words.iter().zip(&self.probs).filter(|(w, _)| pred(w)).fold(Q::zero(), |a, (_, p)| a + p)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.probs.iter().all(|p| !p.is_negative())
    }

    /// Words with M_n(w) ≠ Σ_{w'∈covers_up(w)} M_{n+1}(w')·dim(w)/dim(w').
    pub fn coherence_failures(&self, upper: &CoherentMeasure) -> Vec<FibWord> {
        assert_eq!(upper.n, self.n + 1);
        self.words
            .iter()
            .zip(&self.probs)
            .filter(|(w, p)| {
                let d = dim_q(w);
                let s = covers_up(w).iter().fold(Q::zero(), |a, u| a + upper.prob(u) * d.clone() / dim_q(u));
                s != **p
            })
            .map(|(w, _)| w.clone())
            .collect()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.probs.iter().map(Scalar::to_f64).collect()
    }
}

pub fn measure_level(spec: &Specialization, n: usize) -> Result<CoherentMeasure> {
    let xy = spec.xy_exact(n + 2)?;
    CoherentMeasure::from_xy(&xy, n, &spec.label())
}

/// Checks M_n against M_{n+1}.
pub fn verify_coherence(spec: &Specialization, n: usize) -> Result<Vec<FibWord>> {
    Ok(measure_level(spec, n)?.coherence_failures(&measure_level(spec, n + 1)?))
}

// ---------------------------------------------------------------- run and hike laws

fn need(xy_len: usize, n: usize) -> Result<()> {
    if xy_len < n + 1 {
        return Err(Error::Range(format!("need x_k, y_k up to k = {}, have {xy_len}", n + 1)));
    }
    Ok(())
}

/// M_n(r_1(w) = r_1, …, r_k(w) = r_k): the event w = 1^{r_1}2⋯1^{r_k}2u.
pub fn runs_law<S: Scalar>(xy: &Xy<S>, n: usize, r: &[usize]) -> Result<S> {
    let weight: usize = r.iter().map(|x| x + 2).sum();
    if r.is_empty() || n < weight {
        return Err(Error::Range(format!("runs {r:?} need n ≥ {weight}, got n = {n}")));
    }
    need(xy.len(), n)?;
    let mut acc = S::one();
    let mut nj = n;
    for &rj in r {
        let m = nj - rj - 2;
        let mut den = S::one();
        for i in (nj - rj - 1)..=nj {
            let xi = xy.x(i);
            if xi.is_zero() {
                return Err(Error::ZeroAt(i));
            }
            den = den * xi;
        }
        acc = acc * S::from_usize(m + 1) * det_b(rj, m, xy) / den;
        nj = m;
    }
    Ok(acc)
}

/// d_j = n − h̃_{[1,j)} and the run counters c_j for j = 1..=h.len().
pub fn hike_sequences(n: usize, h: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
    let mut d = Vec::with_capacity(h.len());
    let mut c = Vec::with_capacity(h.len());
    let mut cur = n;
    for j in 0..h.len() {
        if j > 0 {
            let step = 2 * h[j - 1] + 1;
            cur = cur.checked_sub(step).ok_or_else(|| Error::Range(format!("hikes {h:?} exceed n = {n}")))?;
        }
        d.push(cur);
        c.push(match j {
            0 => 0,
            _ if h[j - 1] == 0 => c[j - 1] + 1,
            _ => 1,
        });
    }
    Ok((d, c))
}

/// M_n(h_1(w) = h_1, …, h_k(w) = h_k, h_{k+1}(w) > 0).
pub fn hikes_law<S: Scalar>(xy: &Xy<S>, n: usize, h: &[usize]) -> Result<S> {
    let big_h: usize = h.iter().map(|x| 2 * x + 1).sum();
    if h.is_empty() || n < big_h + 2 {
        return Err(Error::Range(format!("hikes {h:?} need n ≥ {}, got n = {n}", big_h + 2)));
    }
    need(xy.len(), n)?;
    let k = h.len();
    let mut ext = h.to_vec();
    ext.push(0);
    let (d, c) = hike_sequences(n, &ext)?;
    let mut acc = S::one();
    for i in 0..=big_h + 1 {
        let xi = xy.x(n - i);
        if xi.is_zero() {
            return Err(Error::ZeroAt(n - i));
        }
        acc = acc / xi;
    }
    for i in 0..k {
        for j in 2..=h[i] {
            let idx = d[i] - 2 * j + 1;
            acc = acc * S::from_usize(idx) * xy.y(idx);
        }
    }
    for j in 0..=k {
        let num = S::from_usize(d[j] - 1) * det_b(c[j], d[j] - 2, xy);
        let den = if j > 0 && d[j] + 1 == d[j - 1] {
            S::from_usize(d[j]) * det_b(c[j - 1], d[j] - 1, xy)
        } else {
            S::one()
        };
        if den.is_zero() {
            return Err(Error::ZeroAt(d[j]));
        }
        acc = acc * num / den;
    }
    Ok(acc)
}

/// M_n(h_1(w) = 0) = 1 − (n−1)y_{n−1}/(x_{n−1}x_n).
pub fn first_hike_zero<S: Scalar>(xy: &Xy<S>, n: usize) -> Result<S> {
    if n < 2 {
        return Err(Error::Range(format!("first hike law needs n ≥ 2, got {n}")));
    }
    need(xy.len(), n)?;
    let den = xy.x(n - 1) * xy.x(n);
    if den.is_zero() {
        return Err(Error::ZeroAt(n));
    }
    Ok(S::one() - S::from_usize(n - 1) * xy.y(n - 1) / den)
}

/// M_n(1^n) = A_n(0)/(x_1⋯x_n).
pub fn all_ones_mass<S: Scalar>(xy: &Xy<S>, n: usize) -> Result<S> {
    need(xy.len(), n)?;
    let mut den = S::one();
    for i in 1..=n {
        den = den * xy.x(i);
    }
    if den.is_zero() {
        return Err(Error::ZeroAt(n));
    }
    Ok(det_a(n, 0, xy) / den)
}

/// Law of the first run at weight m: entries r = 0..m−2 from the run law, plus
/// M_m(1^m) placed at r = m−1.
pub fn first_run_law<S: Scalar>(xy: &Xy<S>, m: usize) -> Result<Vec<S>> {
    let mut out = Vec::with_capacity(m);
    for r in 0..m.saturating_sub(1) {
        out.push(runs_law(xy, m, &[r])?);
    }
    out.push(all_ones_mass(xy, m)?);
    Ok(out)
}

// ---------------------------------------------------------------- samplers

/// log|s_w| and its sign, by renormalized determinant recurrences.
pub fn log_clone_schur(w: &FibWord, xy: &Xy<f64>) -> (f64, f64) {
    let d = w.digits();
    let (mut log, mut sign) = (0.0, 1.0);
    let mut i = 0;
    loop {
        let k = d[i..].iter().take_while(|&&c| c == 1).count();
        let (l, s) = if i + k == d.len() {
            log_det_a(k, xy)
        } else {
            let rest: usize = d[i + k + 1..].iter().map(|&c| c as usize).sum();
            log_det_b(k, rest, xy)
        };
        log += l;
        sign *= s;
        if i + k == d.len() {
            return (log, sign);
        }
        i += k + 1;
    }
}

fn log_rec(mut prev: f64, mut cur: f64, steps: impl Iterator<Item = (f64, f64)>) -> (f64, f64) {
    let mut scale = 0.0;
    for (a, b) in steps {
        let next = a * cur - b * prev;
        prev = cur;
        cur = next;
        let m = cur.abs().max(prev.abs());
        if m > 1e100 || (m < 1e-100 && m > 0.0) {
            prev /= m;
            cur /= m;
            scale += m.ln();
        }
    }
    (scale + cur.abs().ln(), cur.signum())
}

fn log_det_a(l: usize, xy: &Xy<f64>) -> (f64, f64) {
    if l == 0 {
        return (0.0, 1.0);
    }
    log_rec(1.0, xy.x(1), (2..=l).map(|j| (xy.x(j), xy.y(j - 1))))
}

fn log_det_b(k: usize, m: usize, xy: &Xy<f64>) -> (f64, f64) {
    let b0 = xy.y(m + 1);
    if k == 0 {
        return (b0.abs().ln(), b0.signum());
    }
    let b1 = xy.x(m + 3) * xy.y(m + 1) - xy.x(m + 1) * xy.y(m + 2);
    log_rec(b0, b1, (2..=k).map(|j| (xy.x(m + j + 2), xy.y(m + j + 1))))
}

/// Forward walk ∅ ↗ v_1 ↗ ⋯ ↗ v_n with steps P(v → w) = φ(w)/φ(v).
pub fn sample_word<R: Rng>(xy: &Xy<f64>, n: usize, rng: &mut R) -> Result<FibWord> {
    if n > MAX_WALK_LEVEL {
        return Err(Error::Range(format!("generic walk is capped at n = {MAX_WALK_LEVEL}, got {n}")));
    }
    need(xy.len(), n + 2)?;
    let mut v = FibWord::empty();
    for _ in 0..n {
        let ups = covers_up(&v);
        let mut logs = Vec::with_capacity(ups.len());
        for u in &ups {
            let (l, s) = log_clone_schur(u, xy);
            if s < 0.0 && l.is_finite() {
                return Err(Error::Requires(format!("nonnegative s_w; s_{u} < 0")));
            }
            logs.push(l);
        }
        let base = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let weights: Vec<f64> = logs.iter().map(|l| (l - base).exp()).collect();
        let total: f64 = weights.iter().sum();
        let mut u = rng.random::<f64>() * total;
        let mut pick = weights.len() - 1;
        for (i, w) in weights.iter().enumerate() {
            if u < *w {
                pick = i;
                break;
            }
            u -= w;
        }
        v = ups[pick].clone();
    }
    Ok(v)
}

/// Sequential probabilities P(r_1 = 0), P(r_1 = 1), … of the first run at weight m ≥ 2.
/// The remainder after 1^r 2 is again distributed as the measure at weight m − r − 2.
pub trait RunChain {
    type Terms<'a>: Iterator<Item = f64>
    where
        Self: 'a;
    fn terms(&self, m: usize) -> Self::Terms<'_>;
}

/// Charlier(ρ): P(r) = K(s)·[ρ(1−ρ)R(s) + (s+1)²ρ^{r+1}s!/(m−1)!] with s = m−r−2,
/// K(s) = Γ(m)Γ(s+ρ)/(Γ(m+ρ)Γ(s+1)) and R(s) = Σ_{j=s+3}^{m} ρ^{m−j}Γ(j)/Γ(m).
#[derive(Clone, Copy, Debug)]
pub struct CharlierRuns {
    pub rho: f64,
}

pub struct CharlierTerms {
    rho: f64,
    m: usize,
    r: usize,
    k: f64,
    f: f64,
    big_r: f64,
    q_next: f64,
}

impl Iterator for CharlierTerms {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let (rho, m, r) = (self.rho, self.m, self.r);
        if r + 2 > m {
            return None;
        }
        let s = (m - 2 - r) as f64;
        let p = self.k * (rho * (1.0 - rho) * self.big_r + (s + 1.0) * (s + 1.0) * self.f);
        // advance to r + 1
        self.big_r += self.q_next;
        self.q_next *= rho / ((m - r) as f64 - 1.0).max(1.0);
        if s > 0.0 {
            self.k *= s / (s - 1.0 + rho);
            self.f *= rho / s;
        }
        self.r += 1;
        Some(p.max(0.0))
    }
}

impl RunChain for CharlierRuns {
    type Terms<'a> = CharlierTerms;

    fn terms(&self, m: usize) -> CharlierTerms {
        let (rho, mf) = (self.rho, m as f64);
        CharlierTerms {
            rho,
            m,
            r: 0,
            k: (mf - 1.0) / ((mf + rho - 2.0) * (mf + rho - 1.0)),
            f: rho / (mf - 1.0),
            big_r: 0.0,
            q_next: 1.0,
        }
    }
}

/// Shifted Plancherel(σ), x_1 = σ: B_k(m) = m + σ, so
/// P(r) = (m−r−1)(m−r−2+σ)/∏_{i=m−r−1}^{m}(i+σ−1).
#[derive(Clone, Copy, Debug)]
pub struct ShiftedPlancherelRuns {
    pub sigma: f64,
}

pub struct ShiftedPlancherelTerms {
    sigma: f64,
    m: usize,
    r: usize,
    inv: f64,
}

impl Iterator for ShiftedPlancherelTerms {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        if self.r + 2 > self.m {
            return None;
        }
        let s = (self.m - 2 - self.r) as f64;
        let p = (s + 1.0) * (s + self.sigma) * self.inv;
        self.inv /= s + self.sigma - 1.0;
        self.r += 1;
        Some(p)
    }
}

impl RunChain for ShiftedPlancherelRuns {
    type Terms<'a> = ShiftedPlancherelTerms;

    fn terms(&self, m: usize) -> ShiftedPlancherelTerms {
        let (sg, mf) = (self.sigma, m as f64);
        ShiftedPlancherelTerms { sigma: sg, m, r: 0, inv: 1.0 / ((mf + sg - 1.0) * (mf + sg - 2.0)) }
    }
}

/// Appends the digits of a weight-n word drawn run by run; the leftover mass
/// is the all-ones tail.
pub fn sample_digits_by_runs<C: RunChain, R: Rng>(chain: &C, n: usize, rng: &mut R, digits: &mut Vec<u8>) {
    let mut m = n;
    'outer: while m > 0 {
        let u = rng.random::<f64>();
        let mut acc = 0.0;
        for (r, p) in chain.terms(m).enumerate() {
            acc += p;
            if u < acc {
                digits.extend(std::iter::repeat_n(1u8, r));
                digits.push(2);
                m -= r + 2;
                continue 'outer;
            }
        }
        digits.extend(std::iter::repeat_n(1u8, m));
        break;
    }
}

pub fn sample_by_runs<C: RunChain, R: Rng>(chain: &C, n: usize, rng: &mut R) -> FibWord {
    let mut digits = Vec::with_capacity(n);
    sample_digits_by_runs(chain, n, rng, &mut digits);
    FibWord::from_digits(digits).expect("digits are 1 or 2")
}

pub fn sample_runs_charlier<R: Rng>(rho: f64, n: usize, rng: &mut R) -> FibWord {
    sample_by_runs(&CharlierRuns { rho }, n, rng)
}

pub fn sample_hikes_shifted_plancherel<R: Rng>(sigma: f64, n: usize, rng: &mut R) -> FibWord {
    sample_by_runs(&ShiftedPlancherelRuns { sigma }, n, rng)
}

/// Total-variation distance between an empirical sample and an exact measure.
pub fn total_variation(measure: &CoherentMeasure, samples: &[FibWord]) -> f64 {
    let mut counts: BTreeMap<&FibWord, usize> = BTreeMap::new();
    for s in samples {
        *counts.entry(s).or_default() += 1;
    }
    let n = samples.len() as f64;
    let mut tv = 0.0;
    for (w, p) in measure.words.iter().zip(measure.to_f64()) {
        let e = counts.remove(w).unwrap_or(0) as f64 / n;
        tv += (e - p).abs();
    }
    tv += counts.values().map(|&c| c as f64 / n).sum::<f64>();
    tv / 2.0
}

// ---------------------------------------------------------------- limit laws

/// beta(1, θ) via u ↦ 1 − (1−u)^{1/θ}.
pub fn sample_beta1<R: Rng>(theta: f64, rng: &mut R) -> f64 {
    1.0 - (1.0 - rng.random::<f64>()).powf(1.0 / theta)
}

pub fn beta1_cdf(theta: f64, a: f64) -> f64 {
    if a <= 0.0 {
        0.0
    } else if a >= 1.0 {
        1.0
    } else {
        1.0 - (1.0 - a).powf(theta)
    }
}

/// η_ρ: atom ρ at 0 plus (1−ρ)·beta(1, ρ).
pub fn eta_cdf(rho: f64, a: f64) -> f64 {
    if a < 0.0 {
        0.0
    } else {
        rho + (1.0 - rho) * beta1_cdf(rho, a)
    }
}

/// Marginal of ξ_{σ;k}: (1 − σ^{1−k})δ_0 + σ^{1−k}·beta(1, σ/2).
pub fn xi_marginal_cdf(sigma: f64, k: usize, a: f64) -> f64 {
    if a < 0.0 {
        return 0.0;
    }
    let w = sigma.powi(1 - k as i32);
    (1.0 - w) + w * beta1_cdf(sigma / 2.0, a)
}

/// F_n^{(σ)}(α_1, …, α_n).
pub fn xi_joint_cdf(sigma: f64, a: &[f64]) -> f64 {
    let n = a.len() as i32;
    let g: Vec<f64> = a.iter().map(|&x| beta1_cdf(sigma / 2.0, x)).collect();
    let mut out = sigma.powi(1 - n) * g.iter().product::<f64>();
    for j in 1..n {
        out += (sigma - 1.0) * sigma.powi(j - n) * g[..(n - j) as usize].iter().product::<f64>();
    }
    out
}

/// Law of N = #{k : ξ_{σ;k} > 0} implied by F^{(σ)}: P(N ≥ n) = σ^{1−n},
/// so P(N = n) = σ^{1−n}(1 − σ^{−1}).
pub fn xi_count_law(sigma: f64, n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    sigma.powi(1 - n as i32) * (1.0 - 1.0 / sigma)
}

/// The coin law with success probabilities 1, σ^{−1}, σ^{−2}, …:
/// P(N = n) = σ^{−C(n,2)}(1 − σ^{−n}). It does not reproduce F^{(σ)} for n ≥ 3.
pub fn xi_count_law_coins(sigma: f64, n: usize) -> f64 {
    let c2 = (n * n.saturating_sub(1) / 2) as f64;
    sigma.powf(-c2) * (1.0 - sigma.powi(-(n as i32)))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "law", rename_all = "kebab-case")]
pub enum LimitLaw {
    Gem { theta: f64 },
    Eta { rho: f64 },
    Xi { sigma: f64 },
}

impl LimitLaw {
    /// The first `k` stick fractions U_1, …, U_k.
    pub fn fractions<R: Rng>(&self, k: usize, rng: &mut R) -> Vec<f64> {
        match *self {
            LimitLaw::Gem { theta } => (0..k).map(|_| sample_beta1(theta, rng)).collect(),
            LimitLaw::Eta { rho } => (0..k)
                .map(|_| if rng.random::<f64>() < rho { 0.0 } else { sample_beta1(rho, rng) })
                .collect(),
            LimitLaw::Xi { sigma } => {
                // after the first coin every coin succeeds with probability 1/σ
                let mut out = Vec::with_capacity(k);
                let mut alive = true;
                for i in 0..k {
                    if alive && i > 0 && rng.random::<f64>() >= 1.0 / sigma {
                        alive = false;
                    }
                    out.push(if alive { sample_beta1(sigma / 2.0, rng) } else { 0.0 });
                }
                out
            }
        }
    }

    /// X_1 = U_1, X_k = (1−U_1)⋯(1−U_{k−1})U_k.
    pub fn sticks<R: Rng>(&self, k: usize, rng: &mut R) -> Vec<f64> {
        stick_breaking(&self.fractions(k, rng))
    }
}

pub fn stick_breaking(u: &[f64]) -> Vec<f64> {
    let mut rest = 1.0;
    u.iter()
        .map(|&x| {
            let v = rest * x;
            rest *= 1.0 - x;
            v
        })
        .collect()
}

/// Sample N for the ξ_σ construction (σ > 1).
pub fn sample_xi_count<R: Rng>(sigma: f64, rng: &mut R) -> usize {
    let mut n = 1;
    while rng.random::<f64>() < 1.0 / sigma {
        n += 1;
    }
    n
}

/// Both sides of (1/2)E[Σ X_j] ≤ 1/(σ+1) for the ξ_σ sticks.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ExpectationCompare {
    pub sigma: f64,
    /// 1/(σ+1).
    pub rhs: f64,
    /// 1/2 − (1/2)Σ_m P(N=m)(σ/(2+σ))^m with the coin law of N.
    pub lhs_coins: f64,
    /// The same sum with the law of N implied by F^{(σ)}.
    pub lhs: f64,
}

impl ExpectationCompare {
    pub fn gap_coins(&self) -> f64 {
        self.rhs - self.lhs_coins
    }
}

pub fn expectation_compare(sigma: f64) -> ExpectationCompare {
    let r = sigma / (2.0 + sigma);
    let sum = |law: fn(f64, usize) -> f64| {
        if sigma <= 1.0 {
            // N = ∞ almost surely and the product of (1 − ξ) vanishes
            return 0.0;
        }
        let mut e = 0.0;
        for m in 1..2000 {
            let t = law(sigma, m) * r.powi(m as i32);
            e += t;
            if t < 1e-18 * e {
                break;
            }
        }
        e
    };
    ExpectationCompare {
        sigma,
        rhs: 1.0 / (sigma + 1.0),
        lhs_coins: 0.5 - 0.5 * sum(xi_count_law_coins),
        lhs: 0.5 - 0.5 * sum(xi_count_law),
    }
}

// ---------------------------------------------------------------- scaling verification

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum ScalingFamily {
    Charlier { rho: f64 },
    ShiftedPlancherel { sigma: f64 },
    Plancherel,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub target: f64,
    pub tol: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(name: &str, value: f64, target: f64, tol: f64) -> Self {
        Self { name: name.into(), value, target, tol, pass: (value - target).abs() <= tol }
    }

    /// value ≤ tol.
    pub fn at_most(name: &str, value: f64, tol: f64) -> Self {
        Self { name: name.into(), value, target: 0.0, tol, pass: value <= tol }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ScalingReport {
    pub family: ScalingFamily,
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub streams: usize,
    /// DKW radius at confidence 1 − 10⁻³.
    pub dkw: f64,
    pub statistics: BTreeMap<String, f64>,
    pub checks: Vec<Check>,
}

impl ScalingReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// sup_α |F_emp(α) − F(α)| for a cdf F continuous except possibly at 0.
pub fn sup_distance(values: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut v: Vec<f64> = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < v.len() {
        let x = v[i];
        let mut j = i;
        while j < v.len() && v[j] == x {
            j += 1;
        }
        let below = i as f64 / n;
        let upto = j as f64 / n;
        // the only atom sits at 0
        let f_left = if x > 0.0 { cdf(x) } else { cdf(x - 1.0) };
        d = d.max((upto - cdf(x)).abs()).max((below - f_left).abs());
        i = j;
    }
    d
}

/// Dvoretzky–Kiefer–Wolfowitz radius sqrt(ln(2/δ)/(2N)).
pub fn dkw_radius(samples: usize, delta: f64) -> f64 {
    ((2.0 / delta).ln() / (2.0 * samples as f64)).sqrt()
}

/// Binomial radius z·sqrt(p(1−p)/N) with z = 3.29 (two-sided 10⁻³).
pub fn binomial_radius(p: f64, samples: usize) -> f64 {
    3.29 * (p * (1.0 - p) / samples as f64).sqrt()
}

/// Run-based statistics r_j/n_j and hike-based statistics 2h_j/d_j, j ≤ depth.
/// 2h_j and h̃_j differ by at most 1, and 2h_j puts zero hikes on the atom.
#[derive(Clone, Debug, Default)]
struct Scaled {
    runs: Vec<Vec<f64>>,
    hikes: Vec<Vec<f64>>,
    hikes_positive: Vec<usize>,
}

impl Scaled {
    fn new(depth: usize) -> Self {
        Self { runs: vec![vec![]; depth], hikes: vec![vec![]; depth], hikes_positive: vec![0; depth] }
    }

    fn push(&mut self, d: &[u8]) {
        let depth = self.runs.len();
        let n: usize = d.iter().map(|&x| x as usize).sum();
        let blocks = |sep: u8| {
            let mut out = vec![0usize];
            for &x in d {
                if x == sep {
                    out.push(0);
                } else {
                    *out.last_mut().unwrap() += 1;
                }
            }
            out
        };
        let runs = blocks(2);
        let mut nj = n;
        for j in 0..depth.min(runs.len()) {
            if nj == 0 {
                break;
            }
            self.runs[j].push(runs[j] as f64 / nj as f64);
            nj -= if j + 1 < runs.len() { runs[j] + 2 } else { runs[j] };
        }
        let hikes = blocks(1);
        let mut dj = n;
        for j in 0..depth.min(hikes.len()) {
            if dj == 0 {
                break;
            }
            self.hikes[j].push(2.0 * hikes[j] as f64 / dj as f64);
            dj -= if j + 1 < hikes.len() { 2 * hikes[j] + 1 } else { 2 * hikes[j] };
        }
        let pos = hikes.iter().take_while(|&&h| h > 0).count();
        for k in 0..depth.min(pos) {
            self.hikes_positive[k] += 1;
        }
    }

    fn merge(mut self, other: Scaled) -> Scaled {
        for (a, b) in self.runs.iter_mut().zip(other.runs) {
            a.extend(b);
        }
        for (a, b) in self.hikes.iter_mut().zip(other.hikes) {
            a.extend(b);
        }
        for (a, b) in self.hikes_positive.iter_mut().zip(other.hikes_positive) {
            *a += b;
        }
        self
    }
}

fn scaled_stream<C: RunChain, R: Rng>(chain: &C, n: usize, k: usize, depth: usize, rng: &mut R) -> Scaled {
    let mut sc = Scaled::new(depth);
    let mut buf = Vec::with_capacity(n);
    for _ in 0..k {
        buf.clear();
        sample_digits_by_runs(chain, n, rng, &mut buf);
        sc.push(&buf);
    }
    sc
}

/// Monte Carlo comparison of scaled runs or hikes with their limit laws.
pub fn verify_scaling(family: ScalingFamily, n: usize, samples: usize, seed: u64, streams: usize) -> ScalingReport {
    const DEPTH: usize = 3;
    let parts: Vec<Scaled> = run_streams(seed, streams, samples, |rng, k| {
        vec![match family {
            ScalingFamily::Charlier { rho } => scaled_stream(&CharlierRuns { rho }, n, k, DEPTH, rng),
            ScalingFamily::ShiftedPlancherel { sigma } => {
                scaled_stream(&ShiftedPlancherelRuns { sigma }, n, k, DEPTH, rng)
            }
            ScalingFamily::Plancherel => scaled_stream(&CharlierRuns { rho: 1.0 }, n, k, DEPTH, rng),
        }]
    });
    let sc = parts.into_iter().fold(Scaled::new(DEPTH), Scaled::merge);
    let dkw = dkw_radius(samples, 1e-3);
    let nf = samples as f64;
    let mut st = BTreeMap::new();
    let mut checks = vec![];
    match family {
        ScalingFamily::Charlier { rho } => {
            let p0 = sc.runs[0].iter().filter(|&&x| x == 0.0).count() as f64 / nf;
            let nn = n as f64;
            let exact0 = (nn - 1.0).powi(2) * rho / ((nn + rho - 2.0) * (nn + rho - 1.0));
            st.insert("p_r1_zero".into(), p0);
            st.insert("p_r1_zero_exact_n".into(), exact0);
            checks.push(Check::new("P(r_1 = 0) vs rho", p0, rho, 0.01));
            for j in 0..DEPTH {
                let d = sup_distance(&sc.runs[j], |a| eta_cdf(rho, a));
                st.insert(format!("sup_r{}_eta", j + 1), d);
                st.insert(format!("count_r{}", j + 1), sc.runs[j].len() as f64);
            }
            checks.push(Check::at_most("sup |F(r_1/n) - F_eta|", st["sup_r1_eta"], 0.02));
        }
        ScalingFamily::ShiftedPlancherel { sigma } => {
            for k in 0..DEPTH {
                let p = sc.hikes_positive[k] as f64 / nf;
                st.insert(format!("p_first_{}_hikes_positive", k + 1), p);
                st.insert(format!("p_first_{}_hikes_positive_limit", k + 1), sigma.powi(-(k as i32)));
            }
            for j in 0..DEPTH {
                let d = sup_distance(&sc.hikes[j], |a| xi_marginal_cdf(sigma, j + 1, a));
                st.insert(format!("sup_h{}_xi", j + 1), d);
            }
            let fz = first_hike_zero_shifted_plancherel(sigma, n);
            st.insert("p_h1_zero_exact_n".into(), fz);
            checks.push(Check::new(
                "P(h_1 > 0, h_2 > 0) vs sigma^-1",
                st["p_first_2_hikes_positive"],
                1.0 / sigma,
                0.01,
            ));
            checks.push(Check::at_most("sup |F(h~_1/n) - F_xi1|", st["sup_h1_xi"], 0.02));
        }
        ScalingFamily::Plancherel => {
            for j in 0..DEPTH {
                let d = sup_distance(&sc.hikes[j], |a| beta1_cdf(0.5, a));
                st.insert(format!("sup_h{}_beta_half", j + 1), d);
            }
            checks.push(Check::at_most("sup |F(h~_1/n) - F_beta(1,1/2)|", st["sup_h1_beta_half"], 0.02));
        }
    }
    ScalingReport { family, n, samples, seed, streams, dkw, statistics: st, checks }
}

fn first_hike_zero_shifted_plancherel(sigma: f64, n: usize) -> f64 {
    1.0 - (n as f64 - 1.0) / (n as f64 + sigma - 1.0)
}

// ---------------------------------------------------------------- Type-I masses

#[derive(Clone, Debug, Serialize)]
pub struct TypeIMass {
    pub spec: String,
    /// μ_I(1^∞).
    pub all_ones: f64,
    /// Estimated error of the truncated infinite product.
    pub all_ones_error: f64,
    /// Σ_{|u| = m} μ_I(1^∞2u) for m = 0..=cap.
    pub by_weight: Vec<f64>,
    /// Individual masses μ_I(1^∞2u) for |u| ≤ min(cap, 8).
    pub words: Vec<(String, f64)>,
    /// μ_I(1^∞) + Σ_{m ≤ cap} by_weight[m].
    pub partial_sum: f64,
    /// Why the masses vanish, when they do.
    pub certificate: Option<String>,
}

/// Truncation horizon of the infinite products.
const PRODUCT_HORIZON: usize = 200_000;

/// Σ_{i≥1} ln(1+t_i) with an Euler–Maclaurin tail for t_i ≈ C·i^{−α}.
/// Returns (sum, tail estimate, fitted α).
fn log_product(t: &[f64]) -> (f64, f64, f64) {
    let k = t.len();
    let head: f64 = t.iter().map(|x| x.ln_1p()).sum();
    let (a, b) = (t[k / 2 - 1], t[k - 1]);
    if b <= 0.0 {
        return (head, 0.0, f64::INFINITY);
    }
    let alpha = (a / b).ln() / ((k as f64) / (k as f64 / 2.0)).ln();
    if alpha <= 1.0 + 1e-3 {
        return (f64::INFINITY, f64::INFINITY, alpha);
    }
    let kf = k as f64;
    // Σ_{i>K} C i^{−α} ≈ ∫_K^∞ − f(K)/2 − f'(K)/12
    let tail = b * kf / (alpha - 1.0) - b / 2.0 + alpha * b / (12.0 * kf);
    (head + tail, b * b * kf + alpha * b / (12.0 * kf), alpha)
}

/// Type-I masses up to suffix weight `cap`.
pub fn type_i(spec: &Specialization, cap: usize) -> Result<TypeIMass> {
    let verdict = classify(spec, 64, 1e-12);
    let label = spec.label();
    let zero = |why: String| TypeIMass {
        spec: label.clone(),
        all_ones: 0.0,
        all_ones_error: 0.0,
        by_weight: vec![0.0; cap + 1],
        words: vec![],
        partial_sum: 0.0,
        certificate: Some(why),
    };
    match verdict.verdict {
        Verdict::Divergent => {
            return Ok(zero("divergent type: A_inf(1) = 1 + t_1 + t_1 t_2 + ... diverges, so prod (1+t_i) diverges".into()))
        }
        Verdict::Rejected => return Err(Error::Requires(format!("Fibonacci-positive specialization; {label} is rejected"))),
        _ => {}
    }
    let (_, t) = spec.ct_f64(PRODUCT_HORIZON)?;
    let (log_p, err, alpha) = log_product(&t);
    if !log_p.is_finite() {
        return Ok(zero(format!("sum t_i diverges (t_k ~ k^-{alpha:.3}), so prod (1+t_i)^-1 = 0")));
    }
    let all_ones = (-log_p).exp();
    let mut by_weight = Vec::with_capacity(cap + 1);
    let mut prefix = 1.0; // ∏_{i<m}(1+t_i)
    for m in 0..=cap {
        if m >= 2 {
            prefix *= 1.0 + t[m - 2];
        }
        let b = b_inf(m, &t, PRODUCT_HORIZON / 2, 1e-16)?;
        by_weight.push((m as f64 + 1.0) * b.value * prefix * all_ones);
    }
    let xy = spec.xy_f64(cap.min(8) + 2)?;
    let mut words = vec![];
    let mut prefix = 1.0;
    for m in 0..=cap.min(8) {
        if m >= 2 {
            prefix *= 1.0 + t[m - 2];
        }
        let b = b_inf(m, &t, PRODUCT_HORIZON / 2, 1e-16)?;
        for u in enumerate_level(m) {
            let mu = (m as f64 + 1.0) * harmonic_phi(&u, &xy)? * dim(&u).to_f64().unwrap_or(f64::INFINITY);
            words.push((format!("1^inf 2{u}"), prefix * mu * b.value * all_ones));
        }
    }
    let partial_sum = all_ones + by_weight.iter().sum::<f64>();
    Ok(TypeIMass { spec: label, all_ones, all_ones_error: all_ones * err, by_weight, words, partial_sum, certificate: None })
}

/// M_{n+m+2}(1^n 2 YF_m) for m = 0..=m_max, exact.
pub fn type_i_run_masses(xy: &Xy<Q>, n: usize, m_max: usize) -> Result<Vec<Q>> {
    (0..=m_max).map(|m| runs_law(xy, n + m + 2, &[n])).collect()
}

/// (m+1)q(q−1)²q^{−m−3}.
pub fn chihara_type_i_limit(q: &Q, m: usize) -> Q {
    let qm = crate::scalar::Ring::pow(q, m + 3);
    Q::from_integer(BigInt::from(m + 1)) * q.clone() * (q.clone() - Q::one()) * (q.clone() - Q::one()) / qm
}
