//! Stieltjes moments by several independent routes, orthogonal polynomials,
//! shifted-Charlier series and Toda residuals.

use crate::error::{Error, Result};
use crate::partitions::{composition_multiplicities, enumerate_noncrossing, enumerate_partitions, split};
use crate::poly::Poly;
use crate::scalar::{Ring, Scalar, Q};
use crate::specs::{Specialization, Xy};
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Route {
    Motzkin,
    JFraction,
    Nc,
    AllPartitions,
    Compressed,
    Recurrence,
    Series,
    Combinatorial,
}

impl Route {
    pub const ALL: [Route; 8] = [
        Route::Motzkin,
        Route::JFraction,
        Route::Nc,
        Route::AllPartitions,
        Route::Compressed,
        Route::Recurrence,
        Route::Series,
        Route::Combinatorial,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Route::Motzkin => "motzkin",
            Route::JFraction => "jfraction",
            Route::Nc => "nc",
            Route::AllPartitions => "all-partitions",
            Route::Compressed => "compressed",
            Route::Recurrence => "recurrence",
            Route::Series => "series",
            Route::Combinatorial => "combinatorial",
        }
    }

    pub fn parse(s: &str) -> Result<Route> {
        Route::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::Parse { pos: 0, msg: format!("unknown route '{s}'") })
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MomentSequence<S> {
    /// a_0..a_N
    pub a: Vec<S>,
    pub route: Route,
}

fn need<S: Ring>(xy: &Xy<S>, k: usize) -> Result<()> {
    if xy.len() < k {
        return Err(Error::Range(format!("need x,y up to index {k}, have {}", xy.len())));
    }
    Ok(())
}

/// Motzkin-path sums by transfer matrix. Flat steps at height h weigh
/// x_{h+1}; an up step from h weighs y_{h+1}.
pub fn motzkin<S: Ring>(xy: &Xy<S>, n: usize) -> Result<Vec<S>> {
    let top = n / 2;
    need(xy, top + 1)?;
    let mut v = vec![S::zero(); top + 1];
    v[0] = S::one();
    let mut out = vec![S::one()];
    for _ in 0..n {
        let mut next = vec![S::zero(); top + 1];
        for h in 0..=top {
            if v[h].is_zero() {
                continue;
            }
            next[h] = next[h].clone() + v[h].clone() * xy.x(h + 1);
            if h < top {
                next[h + 1] = next[h + 1].clone() + v[h].clone() * xy.y(h + 1);
            }
            if h > 0 {
                next[h - 1] = next[h - 1].clone() + v[h].clone();
            }
        }
        v = next;
        out.push(v[0].clone());
    }
    Ok(out)
}

/// All Motzkin paths of length `n` as step lists in {+1, 0, -1}.
pub fn motzkin_paths(n: usize) -> Vec<Vec<i8>> {
    fn go(left: usize, h: usize, cur: &mut Vec<i8>, out: &mut Vec<Vec<i8>>) {
        if left == 0 {
            if h == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if h > left {
            return;
        }
        for s in [1i8, 0, -1] {
            if s == -1 && h == 0 {
                continue;
            }
            cur.push(s);
            go(left - 1, (h as isize + s as isize) as usize, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, 0, &mut Vec::new(), &mut out);
    out
}

pub fn path_weight<S: Ring>(path: &[i8], xy: &Xy<S>) -> S {
    let mut h = 0usize;
    let mut w = S::one();
    for &s in path {
        match s {
            1 => {
                w = w * xy.y(h + 1);
                h += 1;
            }
            0 => w = w * xy.x(h + 1),
            _ => h -= 1,
        }
    }
    w
}

/// Exhaustive path enumeration; practical for n ≤ 14.
pub fn motzkin_exhaustive<S: Ring>(xy: &Xy<S>, n: usize) -> Result<Vec<S>> {
    need(xy, n / 2 + 1)?;
    Ok((0..=n)
        .map(|m| motzkin_paths(m).iter().fold(S::zero(), |acc, p| acc + path_weight(p, xy)))
        .collect())
}

fn series_mul<S: Ring>(a: &[S], b: &[S], n: usize) -> Vec<S> {
    let mut out = vec![S::zero(); n + 1];
    for (i, ai) in a.iter().enumerate().take(n + 1) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(n + 1 - i) {
            out[i + j] = out[i + j].clone() + ai.clone() * bj.clone();
        }
    }
    out
}

/// 1/f mod z^{n+1} for f with constant term 1.
fn series_inv_unit<S: Ring>(f: &[S], n: usize) -> Vec<S> {
    let mut g = vec![S::zero(); n + 1];
    g[0] = S::one();
    for k in 1..=n {
        let mut acc = S::zero();
        for j in 1..=k.min(f.len() - 1) {
            acc = acc + f[j].clone() * g[k - j].clone();
        }
        g[k] = -acc;
    }
    g
}

/// Coefficients of the J-fraction 1/(1 - x_1 z - y_1 z²/(1 - x_2 z - ⋯)),
/// truncated after N+1 levels.
pub fn jfraction<S: Ring>(xy: &Xy<S>, n: usize) -> Result<Vec<S>> {
    let depth = n + 1;
    need(xy, depth)?;
    let mut f = vec![S::one()];
    for k in (1..=depth).rev() {
        // 1 - x_k z - y_k z² f
        let mut den = vec![S::zero(); n + 1];
        den[0] = S::one();
        if n >= 1 {
            den[1] = -xy.x(k);
        }
        if k < depth {
            let yf = f.iter().map(|c| c.clone() * xy.y(k)).collect::<Vec<_>>();
            for (i, c) in yf.into_iter().enumerate() {
                if i + 2 <= n {
                    den[i + 2] = den[i + 2].clone() - c;
                }
            }
        }
        f = series_inv_unit(&den, n);
    }
    Ok(f)
}

/// Stat profile `(ℓ, g) -> count` over NC(n) or Π(n).
fn profiles(n: usize, nc: bool) -> HashMap<(Vec<usize>, Vec<usize>), u64> {
    let mut out = HashMap::new();
    let it: Box<dyn Iterator<Item = _>> =
        if nc { Box::new(enumerate_noncrossing(n)) } else { Box::new(enumerate_partitions(n)) };
    for pi in it {
        let st = pi.stats();
        *out.entry((st.ell, st.g)).or_insert(0) += 1;
    }
    out
}

fn mono<S: Ring>(base: &[S], exps: &[usize]) -> S {
    exps.iter().enumerate().fold(S::one(), |acc, (k, &e)| acc * base[k].pow(e))
}

fn ct_need<S>(c: &[S], t: &[S], n: usize) -> Result<()> {
    let k = n / 2 + 1;
    if c.len() < k || t.len() < k.saturating_sub(1) {
        return Err(Error::Range(format!("need c,t up to index {k}")));
    }
    Ok(())
}

/// Σ_{π ∈ NC(n)} ∏ c_k^{ℓ_{k-1}} t_k^{g_k}; `c`, `t` are 1-based.
pub fn nc<S: Ring>(c: &[S], t: &[S], n: usize) -> Result<Vec<S>> {
    ct_need(c, t, n)?;
    let mut out = vec![S::one()];
    for m in 1..=n {
        let mut a = S::zero();
        for ((ell, g), cnt) in profiles(m, true) {
            a = a + S::from_int(cnt as i64) * mono(c, &ell) * mono(t, &g);
        }
        out.push(a);
    }
    Ok(out)
}

/// ε_k = t_k - t_{k-1} - 1 for k ≤ `k_max`, rejecting negative values.
pub fn epsilons(t: &[Q], k_max: usize) -> Result<Vec<Q>> {
    let mut eps = Vec::with_capacity(k_max);
    let mut prev = Q::zero();
    for (k, tk) in t.iter().take(k_max).enumerate() {
        let e = tk - &prev - Q::one();
        if e < Q::zero() {
            return Err(Error::Requires(format!(
                "divergent type; ε_{} = {} < 0",
                k + 1,
                crate::scalar::fmt_q(&e)
            )));
        }
        prev = tk.clone();
        eps.push(e);
    }
    Ok(eps)
}

/// Σ_{π ∈ Π(n)} ∏ c_k^{ℓ_{k-1}} (1+ε_k)^{g_k}, for divergent type only.
pub fn all_partitions(c: &[Q], t: &[Q], n: usize) -> Result<Vec<Q>> {
    ct_need(c, t, n)?;
    let eps = epsilons(t, n / 2)?;
    let onep: Vec<Q> = eps.iter().map(|e| e + Q::one()).collect();
    let mut out = vec![Q::one()];
    for m in 1..=n {
        let mut a = Q::zero();
        for ((ell, g), cnt) in profiles(m, false) {
            a += Q::from_integer(cnt.into()) * mono(c, &ell) * mono(&onep, &g);
        }
        out.push(a);
    }
    Ok(out)
}

/// Σ_{ϰ ⊨ n} N(ϰ) c^{A(ϰ)} t^{dep B(ϰ)}.
pub fn compressed<S: Ring>(c: &[S], t: &[S], n: usize) -> Result<Vec<S>> {
    ct_need(c, t, n)?;
    let mut out = vec![S::one()];
    for m in 1..=n {
        let mut a = S::zero();
        for (kappa, cnt) in composition_multiplicities(m) {
            let s = split(&kappa)?;
            a = a + S::from_int(cnt as i64) * mono(c, &s.a) * mono(t, &s.dep_b);
        }
        out.push(a);
    }
    Ok(out)
}

/// Exact moments of a rational specialization along one route.
pub fn moments_exact(spec: &Specialization, n: usize, route: Route) -> Result<MomentSequence<Q>> {
    let a = match route {
        Route::Motzkin => motzkin(&spec.xy_exact(n / 2 + 1)?, n)?,
        Route::JFraction => jfraction(&spec.xy_exact(n + 1)?, n)?,
        Route::Nc | Route::AllPartitions | Route::Compressed => {
            let (c, t) = spec.ct_exact(n / 2 + 1)?;
            match route {
                Route::Nc => nc(&c, &t, n)?,
                Route::AllPartitions => all_partitions(&c, &t, n)?,
                _ => compressed(&c, &t, n)?,
            }
        }
        Route::Recurrence | Route::Series | Route::Combinatorial => {
            let (rho, sigma) = shifted_charlier_params(spec)?;
            match route {
                Route::Recurrence => shifted_charlier_moments(&rho, &sigma, n),
                Route::Series => mgf_series(&rho, &sigma, n),
                _ => combinatorial(&rho, &sigma, n),
            }
        }
    };
    Ok(MomentSequence { a, route })
}

/// Float moments (transfer matrix), for specializations without rational data.
pub fn moments_f64(spec: &Specialization, n: usize) -> Result<MomentSequence<f64>> {
    Ok(MomentSequence { a: motzkin(&spec.xy_f64(n / 2 + 1)?, n)?, route: Route::Motzkin })
}

fn shifted_charlier_params(spec: &Specialization) -> Result<(Q, Q)> {
    let lookup = |k: &str| spec.params.iter().find(|(n, _)| n == k).and_then(|(_, v)| crate::scalar::parse_q(v));
    match spec.name.as_str() {
        "shifted-charlier" => Ok((
            lookup("rho").ok_or_else(|| Error::Requires("rational rho".into()))?,
            lookup("sigma").ok_or_else(|| Error::Requires("rational sigma".into()))?,
        )),
        "shifted-plancherel" => Ok((Q::one(), lookup("sigma").ok_or_else(|| Error::Requires("rational sigma".into()))?)),
        "charlier" => Ok((lookup("rho").ok_or_else(|| Error::Requires("rational rho".into()))?, Q::one())),
        other => Err(Error::Requires(format!("a shifted Charlier specialization, got {other}"))),
    }
}

/// Monic P_0..P_N from P_{k+1} = (t - x_{k+1}) P_k - y_k P_{k-1}.
pub fn orthopoly<S: Scalar>(xy: &Xy<S>, n: usize) -> Result<Vec<Poly<S>>> {
    need(xy, n.max(1))?;
    let mut ps = vec![Poly::one()];
    if n == 0 {
        return Ok(ps);
    }
    ps.push(Poly::var() - Poly::constant(xy.x(1)));
    for k in 1..n {
        let next = (Poly::var() - Poly::constant(xy.x(k + 1))) * ps[k].clone() - ps[k - 1].scale(&xy.y(k));
        ps.push(next);
    }
    Ok(ps)
}

/// L[p] = Σ p_i a_i.
pub fn functional<S: Scalar>(p: &Poly<S>, a: &[S]) -> S {
    p.coef().iter().zip(a).fold(S::zero(), |acc, (c, m)| acc + c.clone() * m.clone())
}

/// Exact determinant by Gaussian elimination.
pub fn det_exact(mut m: Vec<Vec<Q>>) -> Q {
    let n = m.len();
    let mut det = Q::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Q::zero();
        };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &p;
            for c in col..n {
                let v = &f * &m[col][c];
                m[r][c] -= v;
            }
        }
    }
    det
}

/// Leading Hankel determinants Δ_1..Δ_k of a_0, a_1, ….
pub fn hankel_dets(a: &[Q], k: usize) -> Result<Vec<Q>> {
    if a.len() < 2 * k - 1 {
        return Err(Error::Range(format!("need a_0..a_{}", 2 * k - 2)));
    }
    Ok((1..=k)
        .map(|j| det_exact((0..j).map(|r| (0..j).map(|c| a[r + c].clone()).collect()).collect()))
        .collect())
}

/// a_{n+1}(σ) = (σ+ρ-1) a_n(σ) + ρσ Σ_k a_k(σ) a_{n-k-1}(σ+1), memoized over σ-shifts.
pub fn shifted_charlier_moments<S: Scalar>(rho: &S, sigma: &S, n: usize) -> Vec<S> {
    // table[j][m] = a_m(ρ, σ+j), needed for m ≤ n - j
    let mut table: Vec<Vec<S>> = vec![Vec::new(); n + 1];
    for j in (0..=n).rev() {
        let s = sigma.clone() + S::from_usize(j);
        let mut row = vec![S::one()];
        for m in 0..n - j {
            let mut acc = (s.clone() + rho.clone() - S::one()) * row[m].clone();
            let mut conv = S::zero();
            for k in 0..m {
                conv = conv + row[k].clone() * table[j + 1][m - k - 1].clone();
            }
            acc = acc + rho.clone() * s.clone() * conv;
            row.push(acc);
        }
        table[j] = row;
    }
    table.swap_remove(0)
}

/// Σ_r (a)_r ρ^r z^r / (r! ∏_{j<r} (1-(σ+j)z)) mod z^{n+1}, the series of
/// ₁F₁(a; σ - 1/z; -ρ).
fn f11_series<S: Scalar>(a: &S, rho: &S, sigma: &S, n: usize) -> Vec<S> {
    let mut out = vec![S::zero(); n + 1];
    out[0] = S::one();
    // term_r as a series: coefficient × z^r × ∏ 1/(1-(σ+j)z)
    let mut prod = vec![S::one()];
    let mut coef = S::one();
    for r in 1..=n {
        let j = S::from_usize(r - 1);
        coef = coef * (a.clone() + j.clone()) * rho.clone() / S::from_usize(r);
        let root = sigma.clone() + j;
        let geo: Vec<S> = (0..=n - r).map(|i| root.pow(i)).collect();
        prod = series_mul(&prod, &geo, n - r);
        for (i, p) in prod.iter().enumerate() {
            out[r + i] = out[r + i].clone() + coef.clone() * p.clone();
        }
    }
    out
}

/// Moment generating function coefficients from the rational series
/// M = F(σ) / (F(σ-1) - (σ-1) z F(σ)), F(a) = ₁F₁(a; σ-1/z; -ρ).
pub fn mgf_series<S: Scalar>(rho: &S, sigma: &S, n: usize) -> Vec<S> {
    let f_s = f11_series(sigma, rho, sigma, n);
    let f_s1 = f11_series(&(sigma.clone() - S::one()), rho, sigma, n);
    let mut den = f_s1;
    let sm1 = sigma.clone() - S::one();
    for i in 0..n {
        den[i + 1] = den[i + 1].clone() - sm1.clone() * f_s[i].clone();
    }
    series_mul(&f_s, &series_inv_unit(&den, n), n)
}

/// Σ_{π ∈ Π(n)} ρ^{#blocks*} σ^{ḡ_1} (ρ+σ-1)^{#S}.
pub fn combinatorial<S: Scalar>(rho: &S, sigma: &S, n: usize) -> Vec<S> {
    let flat = rho.clone() + sigma.clone() - S::one();
    (0..=n)
        .map(|m| {
            let mut prof: HashMap<(usize, usize, usize), u64> = HashMap::new();
            for pi in enumerate_partitions(m) {
                let st = pi.stats();
                *prof.entry((st.blocks_star, st.gbar1, st.singletons)).or_insert(0) += 1;
            }
            prof.into_iter().fold(S::zero(), |acc, ((b, g, s), cnt)| {
                acc + S::from_usize(cnt as usize) * rho.pow(b) * sigma.pow(g) * flat.pow(s)
            })
        })
        .collect()
}

/// One Toda residual sample.
#[derive(Clone, Debug, PartialEq)]
pub struct TodaSample {
    pub n: usize,
    pub varrho: f64,
    /// |x_n' - (y_n - y_{n-1})|
    pub r1: f64,
    /// |y_n' - y_n (x_{n+1} - x_n)|
    pub r2: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TodaReport {
    pub samples: Vec<TodaSample>,
    pub max: f64,
}

/// Toda chain residuals for a family `(n, ϱ) -> (x_n, y_n)` (with y_0 = 0),
/// derivatives by a five-point central stencil of step `h`.
pub fn toda_residual(family: &dyn Fn(usize, f64) -> (f64, f64), grid: &[f64], n_max: usize, h: f64) -> TodaReport {
    let d = |f: &dyn Fn(f64) -> f64, r: f64| {
        (-f(r + 2.0 * h) + 8.0 * f(r + h) - 8.0 * f(r - h) + f(r - 2.0 * h)) / (12.0 * h)
    };
    let y = |n: usize, r: f64| if n == 0 { 0.0 } else { family(n, r).1 };
    let mut samples = Vec::new();
    let mut max = 0.0f64;
    for &r in grid {
        for n in 1..=n_max {
            let dx = d(&|s| family(n, s).0, r);
            let dy = d(&|s| family(n, s).1, r);
            let (xn, yn) = family(n, r);
            let xn1 = family(n + 1, r).0;
            let r1 = (dx - (yn - y(n - 1, r))).abs();
            let r2 = (dy - yn * (xn1 - xn)).abs();
            max = max.max(r1).max(r2);
            samples.push(TodaSample { n, varrho: r, r1, r2 });
        }
    }
    TodaReport { samples, max }
}

/// x_n = n + e^ϱ - 1, y_n = e^ϱ n.
pub fn charlier_toda_family(n: usize, r: f64) -> (f64, f64) {
    let rho = r.exp();
    (n as f64 + rho - 1.0, rho * n as f64)
}

/// x_n = ρ + σ + n - 2, y_n = ρ(σ + n - 1) with ρ = e^ϱ.
pub fn shifted_charlier_toda_family(sigma: f64) -> impl Fn(usize, f64) -> (f64, f64) {
    move |n, r| {
        let rho = r.exp();
        (rho + sigma + n as f64 - 2.0, rho * (sigma + n as f64 - 1.0))
    }
}
