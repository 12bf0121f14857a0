//! Clone Cauchy identities as banded determinants, and the two-cycle
//! statistics of random involutions built on them.

use crate::clone::{clone_homogeneous, clone_schur, harmonic_phi};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{Ring, Scalar, Q};
use crate::specs::{Specialization, Xy};
use crate::words::{dim, enumerate_level, FibWord};
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Exact τ-polynomials are produced up to this level.
pub const MAX_POLY_LEVEL: usize = 400;
/// Brute-force sums over YF_n are capped here.
pub const MAX_BRUTE_LEVEL: usize = 16;

/// Quadridiagonal matrix with unit subdiagonal. Row k (1-based) carries
/// a_k on the diagonal, b_k at column k+1 and c_k at column k+2.
#[derive(Clone, Debug)]
pub struct BandedSpec<R> {
    pub a: Vec<R>,
    pub b: Vec<R>,
    pub c: Vec<R>,
}

impl<R: Ring> BandedSpec<R> {
    /// Rows 1..=n from closures in k.
    pub fn from_fn(n: usize, a: impl Fn(usize) -> R, b: impl Fn(usize) -> R, c: impl Fn(usize) -> R) -> Self {
        Self { a: (1..=n).map(a).collect(), b: (1..=n).map(b).collect(), c: (1..=n).map(c).collect() }
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    /// Dense n×n matrix, for cross-checks.
    pub fn dense(&self, n: usize) -> Vec<Vec<R>> {
        let mut m = vec![vec![R::zero(); n]; n];
        for i in 0..n {
            m[i][i] = self.a[i].clone();
            if i + 1 < n {
                m[i][i + 1] = self.b[i].clone();
                m[i + 1][i] = R::one();
            }
            if i + 2 < n {
                m[i][i + 2] = self.c[i].clone();
            }
        }
        m
    }
}

/// D_0..=D_n with D_n = a_n D_{n-1} − b_{n-1} D_{n-2} + c_{n-2} D_{n-3}.
pub fn banded_dets<R: Ring>(band: &BandedSpec<R>, n: usize) -> Vec<R> {
    assert!(n <= band.len(), "band has {} rows, need {n}", band.len());
    let mut d = Vec::with_capacity(n + 1);
    d.push(R::one());
    for k in 1..=n {
        let mut v = band.a[k - 1].clone() * d[k - 1].clone();
        if k >= 2 {
            v = v - band.b[k - 2].clone() * d[k - 2].clone();
        }
        if k >= 3 {
            v = v + band.c[k - 3].clone() * d[k - 3].clone();
        }
        d.push(v);
    }
    d
}

pub fn banded_det<R: Ring>(band: &BandedSpec<R>, n: usize) -> R {
    banded_dets(band, n).pop().expect("D_0 always present")
}

/// Band of Σ h_w(p|q) s_w(x|y): a = p_k x_k, b = y_k(p_k p_{k+1} − q_k),
/// c = −q_k x_k y_{k+1} p_{k+2}.
pub fn first_band<R: Ring>(n: usize, pq: &Xy<R>, xy: &Xy<R>) -> BandedSpec<R> {
    BandedSpec::from_fn(
        n,
        |k| pq.x(k) * xy.x(k),
        |k| if k < n { xy.y(k) * (pq.x(k) * pq.x(k + 1) - pq.y(k)) } else { R::zero() },
        |k| if k + 2 <= n { -(pq.y(k) * xy.x(k) * xy.y(k + 1) * pq.x(k + 2)) } else { R::zero() },
    )
}

/// Band of Σ s_w(p|q) s_w(x|y): a = p_k x_k,
/// b = q_k(x_k x_{k+1} − y_k) + y_k(p_k p_{k+1} − q_k), c = p_k x_k q_{k+1} y_{k+1}.
pub fn second_band<R: Ring>(n: usize, pq: &Xy<R>, xy: &Xy<R>) -> BandedSpec<R> {
    BandedSpec::from_fn(
        n,
        |k| pq.x(k) * xy.x(k),
        |k| {
            if k < n {
                pq.y(k) * (xy.x(k) * xy.x(k + 1) - xy.y(k)) + xy.y(k) * (pq.x(k) * pq.x(k + 1) - pq.y(k))
            } else {
                R::zero()
            }
        },
        |k| if k + 2 <= n { pq.x(k) * xy.x(k) * pq.y(k + 1) * xy.y(k + 1) } else { R::zero() },
    )
}

/// Determinant side of the first identity.
pub fn cauchy_first<R: Ring>(n: usize, pq: &Xy<R>, xy: &Xy<R>) -> R {
    banded_det(&first_band(n, pq, xy), n)
}

/// Determinant side of the second identity.
pub fn cauchy_second<R: Ring>(n: usize, pq: &Xy<R>, xy: &Xy<R>) -> R {
    banded_det(&second_band(n, pq, xy), n)
}

fn check_brute(n: usize) -> Result<()> {
    if n > MAX_BRUTE_LEVEL {
        return Err(Error::Requires(format!("n <= {MAX_BRUTE_LEVEL} for sums over YF_n, got {n}")));
    }
    Ok(())
}

/// Σ_{|w|=n} h_w(p|q) s_w(x|y) by enumeration. Needs prefixes of length n+1.
pub fn cauchy_first_brute<R: Ring>(n: usize, pq: &Xy<R>, xy: &Xy<R>) -> Result<R> {
    check_brute(n)?;
    Ok(enumerate_level(n)
        .iter()
        .fold(R::zero(), |acc, w| acc + clone_homogeneous(w, pq) * clone_schur(w, xy)))
}

/// Σ_{|w|=n} s_w(p|q) s_w(x|y) by enumeration. Needs prefixes of length n+1.
pub fn cauchy_second_brute<R: Ring>(n: usize, pq: &Xy<R>, xy: &Xy<R>) -> Result<R> {
    check_brute(n)?;
    Ok(enumerate_level(n).iter().fold(R::zero(), |acc, w| acc + clone_schur(w, pq) * clone_schur(w, xy)))
}

// ---------------------------------------------------------------- involutions

fn hikes(w: &FibWord) -> usize {
    w.digits().iter().filter(|&&d| d == 2).count()
}

/// Band of x_1⋯x_n · E[τ^h]: a = x_k, b = (1 − kτ)y_k, c = −kτ x_k y_{k+1}.
pub fn involution_band<S: Scalar>(n: usize, xy: &Xy<S>) -> BandedSpec<Poly<S>> {
    let tau = Poly::<S>::var();
    let one = Poly::<S>::one();
    BandedSpec::from_fn(
        n,
        |k| Poly::constant(xy.x(k)),
        |k| {
            if k < n {
                (one.clone() - tau.scale(&S::from_usize(k))).scale(&xy.y(k))
            } else {
                Poly::zero()
            }
        },
        |k| if k + 2 <= n { tau.scale(&-(S::from_usize(k) * xy.x(k) * xy.y(k + 1))) } else { Poly::zero() },
    )
}

fn x_product<S: Scalar>(n: usize, xy: &Xy<S>) -> Result<S> {
    let mut p = S::one();
    for k in 1..=n {
        let x = xy.x(k);
        if x.is_zero() {
            return Err(Error::ZeroAt(k));
        }
        p = p * x;
    }
    Ok(p)
}

/// E[τ^{#two-cycles}] under ν_n, as a polynomial in τ.
pub fn involution_mgf_xy<S: Scalar>(xy: &Xy<S>, n: usize) -> Result<Poly<S>> {
    if n > MAX_POLY_LEVEL {
        return Err(Error::Requires(format!("n <= {MAX_POLY_LEVEL} for exact τ-polynomials, got {n}")));
    }
    let den = x_product(n, xy)?;
    Ok(banded_det(&involution_band(n, xy), n).scale(&(S::one() / den)))
}

pub fn involution_mgf(spec: &Specialization, n: usize) -> Result<Poly<Q>> {
    involution_mgf_xy(&spec.xy_exact(n.max(1))?, n)
}

/// Point evaluation of E[τ^{#two-cycles}], any n. Rows are renormalized by
/// x_k so that the recurrence stays bounded in floating point.
pub fn involution_mgf_at<S: Scalar>(xy: &Xy<S>, n: usize, tau: &S) -> Result<S> {
    x_product(n, xy)?;
    // E_k = D_k / (x_1⋯x_k)
    let mut e: Vec<S> = vec![S::one()];
    for k in 1..=n {
        let mut v = e[k - 1].clone();
        if k >= 2 {
            let b = (S::one() - S::from_usize(k - 1) * tau.clone()) * xy.y(k - 1);
            v = v - b * e[k - 2].clone() / (xy.x(k - 1) * xy.x(k));
        }
        if k >= 3 {
            let c = -(S::from_usize(k - 2) * tau.clone() * xy.x(k - 2) * xy.y(k - 1));
            v = v + c * e[k - 3].clone() / (xy.x(k - 2) * xy.x(k - 1) * xy.x(k));
        }
        e.push(v);
    }
    Ok(e.pop().expect("E_0 always present"))
}

/// Σ_{|w|=n} dim(w) φ(w) τ^{h(w)} by enumeration.
pub fn involution_mgf_brute(xy: &Xy<Q>, n: usize) -> Result<Poly<Q>> {
    check_brute(n)?;
    let mut coef = vec![Q::zero(); n / 2 + 1];
    for w in enumerate_level(n) {
        let d = Q::from_integer(BigInt::from(dim(&w)));
        coef[hikes(&w)] += d * harmonic_phi(&w, xy)?;
    }
    Ok(Poly::new(coef))
}

// ---------------------------------------------------------------- shifted Plancherel

/// x_k = y_k = k+σ−1 (true) or the same with x_1 = 1 (fake, ρ = 1).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    True,
    Fake,
}

impl Variant {
    /// Inhomogeneous term of the H-recurrence at step n ≥ 2.
    fn source<R: Ring>(self, sigma: &R, tau: &R) -> R {
        let s1 = sigma.clone() - R::one();
        match self {
            Variant::True => s1,
            Variant::Fake => s1 * tau.clone(),
        }
    }
}

/// H_0..=H_N as τ-polynomials:
/// (n+σ−1)H_n = H_{n-1} + τ(n−1)H_{n-2} + f_n, H_0 = H_1 = 1,
/// with f_n = σ−1 (true) or (σ−1)τ (fake).
pub fn two_cycle_polys(sigma: &Q, big_n: usize, variant: Variant) -> Result<Vec<Poly<Q>>> {
    if big_n > MAX_POLY_LEVEL {
        return Err(Error::Requires(format!("N <= {MAX_POLY_LEVEL} for exact τ-polynomials, got {big_n}")));
    }
    let tau = Poly::<Q>::var();
    let sig = Poly::constant(sigma.clone());
    let mut h = vec![Poly::<Q>::one(); big_n.min(1) + 1];
    for n in 2..=big_n {
        let nn = Q::from_integer(BigInt::from(n));
        let lead = nn.clone() + sigma.clone() - Q::one();
        if lead.is_zero() {
            return Err(Error::ZeroAt(n));
        }
        let rhs = h[n - 1].clone()
            + (tau.clone() * h[n - 2].clone()).scale(&(nn - Q::one()))
            + variant.source(&sig, &tau);
        h.push(rhs.scale(&(Q::one() / lead)));
    }
    Ok(h)
}

/// G_n = ∂_τ H_n at τ = 1, n = 0..=N:
/// (n+σ−1)G_n = G_{n-1} + (n−1)G_{n-2} + (n−1) [+ (σ−1) for the fake variant].
pub fn two_cycle_means<S: Scalar>(sigma: &S, big_n: usize, variant: Variant) -> Vec<S> {
    let mut g = vec![S::zero(); big_n.min(1) + 1];
    for n in 2..=big_n {
        let n1 = S::from_usize(n - 1);
        let mut rhs = g[n - 1].clone() + n1.clone() * g[n - 2].clone() + n1.clone();
        if variant == Variant::Fake {
            rhs = rhs + sigma.clone() - S::one();
        }
        g.push(rhs / (n1 + sigma.clone()));
    }
    g
}

/// G_N / N, the expected fraction of two-cycles per unit size.
pub fn two_cycle_fraction(sigma: f64, big_n: usize, variant: Variant) -> f64 {
    two_cycle_means(&sigma, big_n, variant)[big_n] / big_n as f64
}

/// The (x,y) prefix matching a variant, for cross-checks against [`involution_mgf_xy`].
pub fn shifted_plancherel_xy<S: Scalar>(sigma: &S, k_max: usize, variant: Variant) -> Xy<S> {
    Xy::from_fn(k_max, |k| {
        let v = S::from_usize(k) + sigma.clone() - S::one();
        let x = if k == 1 && variant == Variant::Fake { S::one() } else { v.clone() };
        (x, v)
    })
}
