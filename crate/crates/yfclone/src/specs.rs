//! Specializations, the (c,t) reparametrization and the positivity classifier.

use crate::error::{Error, Result};
use crate::scalar::{fmt_q, parse_q, Ring, Scalar, Q};
use num_traits::{One, Zero};
use std::fmt;
use std::sync::Arc;

/// Prefixes x_1..x_K, y_1..y_K. Index 0 holds a zero placeholder.
#[derive(Clone, Debug)]
pub struct Xy<S> {
    x: Vec<S>,
    y: Vec<S>,
}

impl<S: Ring> Xy<S> {
    pub fn new(x: Vec<S>, y: Vec<S>) -> Self {
        assert_eq!(x.len(), y.len(), "x and y prefixes must have equal length");
        let mut xx = vec![S::zero()];
        xx.extend(x);
        let mut yy = vec![S::zero()];
        yy.extend(y);
        Self { x: xx, y: yy }
    }

    pub fn from_fn(k_max: usize, f: impl FnMut(usize) -> (S, S)) -> Self {
        let (x, y) = (1..=k_max).map(f).unzip();
        Self::new(x, y)
    }

    /// Largest available index.
    pub fn len(&self) -> usize {
        self.x.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn x(&self, k: usize) -> S {
        assert!(k >= 1 && k <= self.len(), "x_{k} outside prefix 1..={}", self.len());
        self.x[k].clone()
    }

    pub fn y(&self, k: usize) -> S {
        assert!(k >= 1 && k <= self.len(), "y_{k} outside prefix 1..={}", self.len());
        self.y[k].clone()
    }

    /// (x_{k+m}, y_{k+m}).
    pub fn shifted(&self, m: usize) -> Self {
        Self { x: [vec![S::zero()], self.x[1 + m..].to_vec()].concat(), y: [vec![S::zero()], self.y[1 + m..].to_vec()].concat() }
    }

    /// x_k = c_k(1+t_{k-1}), y_k = c_k c_{k+1} t_k with t_0 = 0; c and t are 1-based slices
    /// (c needs one more entry than t).
    pub fn from_ct(c: &[S], t: &[S]) -> Self {
        let k_max = t.len().min(c.len().saturating_sub(1));
        Self::from_fn(k_max, |k| {
            let tp = if k == 1 { S::zero() } else { t[k - 2].clone() };
            (c[k - 1].clone() * (S::one() + tp), c[k - 1].clone() * c[k].clone() * t[k - 1].clone())
        })
    }

    pub fn map<T: Ring>(&self, f: impl Fn(&S) -> T) -> Xy<T> {
        Xy { x: self.x.iter().map(&f).collect(), y: self.y.iter().map(&f).collect() }
    }
}

type Gen<S> = Arc<dyn Fn(usize) -> Option<(S, S)> + Send + Sync>;

/// A named or explicit generator of (x_k, y_k), optionally with closed-form (c_k, t_k).
#[derive(Clone)]
pub struct Specialization {
    pub name: String,
    pub params: Vec<(String, String)>,
    xy_q: Option<Gen<Q>>,
    xy_f: Gen<f64>,
    ct_q: Option<Gen<Q>>,
    ct_f: Option<Gen<f64>>,
}

impl fmt::Debug for Specialization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

fn lift<S: Scalar>(f: impl Fn(usize) -> (S, S) + Send + Sync + 'static) -> Gen<S> {
    Arc::new(move |k| Some(f(k)))
}

impl Specialization {
    pub fn label(&self) -> String {
        if self.params.is_empty() {
            self.name.clone()
        } else {
            let p: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            format!("{}:{}", self.name, p.join(","))
        }
    }

    pub fn is_exact(&self) -> bool {
        self.xy_q.is_some()
    }

    pub fn xy_exact(&self, k_max: usize) -> Result<Xy<Q>> {
        let g = self.xy_q.as_ref().ok_or_else(|| Error::Requires(format!("rational parameters for {}", self.label())))?;
        collect(g, k_max)
    }

    pub fn xy_f64(&self, k_max: usize) -> Result<Xy<f64>> {
        collect(&self.xy_f, k_max)
    }

    /// (c_1..c_K, t_1..t_K), closed form when the family has one.
    pub fn ct_exact(&self, k_max: usize) -> Result<(Vec<Q>, Vec<Q>)> {
        if let Some(g) = &self.ct_q {
            let xy = collect(g, k_max)?;
            return Ok(((1..=k_max).map(|k| xy.x(k)).collect(), (1..=k_max).map(|k| xy.y(k)).collect()));
        }
        ct_from_xy(&self.xy_exact(k_max + 1)?, k_max)
    }

    pub fn ct_f64(&self, k_max: usize) -> Result<(Vec<f64>, Vec<f64>)> {
        if let Some(g) = &self.ct_f {
            let xy = collect(g, k_max)?;
            return Ok(((1..=k_max).map(|k| xy.x(k)).collect(), (1..=k_max).map(|k| xy.y(k)).collect()));
        }
        ct_from_xy(&self.xy_f64(k_max + 1)?, k_max)
    }

    fn build(name: &str, params: Vec<(String, String)>, xy_q: Option<Gen<Q>>, xy_f: Gen<f64>) -> Self {
        Self { name: name.into(), params, xy_q, xy_f, ct_q: None, ct_f: None }
    }

    fn with_ct(mut self, ct_q: Option<Gen<Q>>, ct_f: Gen<f64>) -> Self {
        self.ct_q = ct_q;
        self.ct_f = Some(ct_f);
        self
    }

    /// The closed (c,t) form divides by some parameters; without it (c,t)
    /// comes from the ratio recurrence, which reports the vanishing index.
    fn with_ct_if(self, ok: bool, ct_q: Option<Gen<Q>>, ct_f: Gen<f64>) -> Self {
        if ok {
            self.with_ct(ct_q, ct_f)
        } else {
            self
        }
    }

    /// Explicit finite prefixes of x and y.
    pub fn explicit_xy(x: Vec<Q>, y: Vec<Q>) -> Self {
        let n = x.len().min(y.len());
        let (xf, yf): (Vec<f64>, Vec<f64>) = (x.iter().map(Scalar::to_f64).collect(), y.iter().map(Scalar::to_f64).collect());
        let (x2, y2) = (x.clone(), y.clone());
        let gq: Gen<Q> = Arc::new(move |k| (k >= 1 && k <= n).then(|| (x2[k - 1].clone(), y2[k - 1].clone())));
        let gf: Gen<f64> = Arc::new(move |k| (k >= 1 && k <= n).then(|| (xf[k - 1], yf[k - 1])));
        Self::build("explicit-xy", vec![("len".into(), n.to_string())], Some(gq), gf)
    }

    /// Explicit finite prefixes of c and t; x,y are available one index short of c.
    pub fn explicit_ct(c: Vec<Q>, t: Vec<Q>) -> Self {
        let xy = Xy::from_ct(&c, &t);
        let k = xy.len();
        let s = Self::explicit_xy((1..=k).map(|i| xy.x(i)).collect(), (1..=k).map(|i| xy.y(i)).collect());
        let n = c.len().min(t.len());
        let (cq, tq) = (c.clone(), t.clone());
        let (cf, tf): (Vec<f64>, Vec<f64>) = (c.iter().map(Scalar::to_f64).collect(), t.iter().map(Scalar::to_f64).collect());
        let gq: Gen<Q> = Arc::new(move |k| (k >= 1 && k <= n).then(|| (cq[k - 1].clone(), tq[k - 1].clone())));
        let gf: Gen<f64> = Arc::new(move |k| (k >= 1 && k <= n).then(|| (cf[k - 1], tf[k - 1])));
        let mut s = s.with_ct(Some(gq), gf);
        s.name = "explicit-ct".into();
        s
    }

    /// Float-only specialization from closures for (x,y) and optionally (c,t).
    pub fn from_fn_f64(
        name: &str,
        xy: impl Fn(usize) -> (f64, f64) + Send + Sync + 'static,
        ct: Option<Arc<dyn Fn(usize) -> (f64, f64) + Send + Sync>>,
    ) -> Self {
        let s = Self::build(name, vec![], None, lift(xy));
        match ct {
            Some(f) => s.with_ct(None, Arc::new(move |k| Some(f(k)))),
            None => s,
        }
    }

    /// Generic (c,t) family evaluated in both modes.
    fn from_ct_family<F>(name: &str, params: Vec<(String, String)>, exact: bool, f: F) -> Self
    where
        F: CtFamily + Send + Sync + 'static,
    {
        let f = Arc::new(f);
        let (f1, f2, f3, f4) = (f.clone(), f.clone(), f.clone(), f);
        let xy_q: Option<Gen<Q>> = exact.then(|| lift(move |k| xy_of_ct::<Q, _>(&*f1, k)));
        let ct_q: Option<Gen<Q>> = exact.then(|| lift(move |k| f2.ct_q(k)));
        let xy_f = lift(move |k| xy_of_ct::<f64, _>(&*f3, k));
        let ct_f = lift(move |k| f4.ct_f(k));
        Self::build(name, params, xy_q, xy_f).with_ct(ct_q, ct_f)
    }

    /// x'_k = x_{k+r}, y'_k = y_{k+r}.
    pub fn left_shift(&self, r: usize) -> Self {
        let fq = self.xy_q.clone();
        let ff = self.xy_f.clone();
        let mut params = self.params.clone();
        params.push(("shift".into(), r.to_string()));
        Self::build(
            &format!("{}+left", self.name),
            params,
            fq.map(|g| -> Gen<Q> { Arc::new(move |k| g(k + r)) }),
            Arc::new(move |k| ff(k + r)),
        )
    }

    /// T_1 given, T_k = σ + t_{k-1} for k ≥ 2, c_k = 1; materialized to `k_max` terms.
    pub fn right_shift_divergent(&self, sigma: &Q, t1: &Q, k_max: usize) -> Result<Self> {
        let (_, t) = self.ct_exact(k_max)?;
        let mut tt = vec![t1.clone()];
        tt.extend(t.iter().take(k_max - 1).map(|v| sigma.clone() + v.clone()));
        let mut s = Self::explicit_ct(vec![Q::one(); k_max + 1], tt);
        s.name = format!("{}+right", self.name);
        s.params = self.params.clone();
        s.params.push(("sigma".into(), fmt_q(sigma)));
        s.params.push(("T1".into(), fmt_q(t1)));
        Ok(s)
    }

    /// x_k = ρ + t_{k-1}, y_k = ρ t_k; materialized to `k_max` terms.
    pub fn rho_scaling(&self, rho: &Q, k_max: usize) -> Result<Self> {
        let (_, t) = self.ct_exact(k_max + 1)?;
        let x = (1..=k_max).map(|k| rho.clone() + if k == 1 { Q::zero() } else { t[k - 2].clone() }).collect();
        let y = (1..=k_max).map(|k| rho.clone() * t[k - 1].clone()).collect();
        let mut s = Self::explicit_xy(x, y);
        s.name = format!("{}+scaled", self.name);
        s.params = self.params.clone();
        s.params.push(("scale".into(), fmt_q(rho)));
        Ok(s)
    }
}

fn collect<S: Scalar>(g: &Gen<S>, k_max: usize) -> Result<Xy<S>> {
    let mut x = Vec::with_capacity(k_max);
    let mut y = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let (a, b) = g(k).ok_or_else(|| Error::Range(format!("parameter index {k} beyond the supplied prefix")))?;
        x.push(a);
        y.push(b);
    }
    Ok(Xy::new(x, y))
}

trait CtFamily {
    fn ct_q(&self, k: usize) -> (Q, Q);
    fn ct_f(&self, k: usize) -> (f64, f64);
}

trait CtPick<S> {
    fn pick(&self, k: usize) -> (S, S);
}

impl<F: CtFamily> CtPick<Q> for F {
    fn pick(&self, k: usize) -> (Q, Q) {
        self.ct_q(k)
    }
}

impl<F: CtFamily> CtPick<f64> for F {
    fn pick(&self, k: usize) -> (f64, f64) {
        self.ct_f(k)
    }
}

fn xy_of_ct<S: Scalar, F: CtPick<S> + ?Sized>(f: &F, k: usize) -> (S, S) {
    let (c, t) = f.pick(k);
    let (c1, _) = f.pick(k + 1);
    let tp = if k == 1 { S::zero() } else { f.pick(k - 1).1 };
    (c.clone() * (S::one() + tp), c * c1 * t)
}

/// [k]_q = 1 + q + … + q^{k-1}.
pub fn qint<S: Scalar>(q: &S, k: usize) -> S {
    let mut acc = S::zero();
    let mut p = S::one();
    for _ in 0..k {
        acc = acc + p.clone();
        p = p * q.clone();
    }
    acc
}

/// (c_1..c_K, t_1..t_K) from x,y via c_k = A_k/A_{k-1}, t_k = y_k A_{k-1}/A_{k+1}.
///
/// Works with ratios r_k = A_k/A_{k-1} so that the float path does not overflow.
pub fn ct_from_xy<S: Scalar>(xy: &Xy<S>, k_max: usize) -> Result<(Vec<S>, Vec<S>)> {
    if xy.len() < k_max + 1 {
        return Err(Error::Range(format!("need x,y up to {}", k_max + 1)));
    }
    let mut r = vec![S::one()];
    for k in 1..=k_max + 1 {
        let v = if k == 1 { xy.x(1) } else { xy.x(k) - xy.y(k - 1) / r[k - 1].clone() };
        if v.is_zero() {
            return Err(Error::VanishingA(k));
        }
        r.push(v);
    }
    let c = (1..=k_max).map(|k| r[k].clone()).collect();
    let t = (1..=k_max).map(|k| xy.y(k) / (r[k].clone() * r[k + 1].clone())).collect();
    Ok((c, t))
}

// ---------------------------------------------------------------- builtins

#[derive(Clone, Debug)]
enum P {
    Exact(Q),
    Float(f64),
}

impl P {
    fn f(&self) -> f64 {
        match self {
            P::Exact(q) => Scalar::to_f64(q),
            P::Float(v) => *v,
        }
    }
    fn q(&self) -> Option<Q> {
        match self {
            P::Exact(q) => Some(q.clone()),
            P::Float(_) => None,
        }
    }
}

/// Real root of z^3 = z^2 + 1.
pub fn cigler_zeng_q0() -> f64 {
    let (mut lo, mut hi) = (1.0f64, 2.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid * mid * mid - mid * mid - 1.0 < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub const BUILTINS: &[&str] = &[
    "plancherel",
    "charlier",
    "al-salam-carlitz",
    "al-salam-chihara",
    "q-charlier",
    "cigler-zeng",
    "alt-q-charlier",
    "fake-shifted-charlier",
    "shifted-charlier",
    "shifted-plancherel",
    "power",
    "laguerre",
    "meixner",
];

macro_rules! both {
    // Builds the (exact?, float) pair of generators from one generic body.
    ($exact:expr, |$k:ident, $($p:ident),*| $body:expr, $($v:expr),*) => {{
        #[allow(clippy::redundant_clone)]
        fn body<S: Scalar>($k: usize, ps: &[S]) -> (S, S) {
            let [$($p),*] = ps else { unreachable!() };
            $body
        }
        let fq: Option<Gen<Q>> = if $exact {
            let vals: Vec<Q> = vec![$($v.q().unwrap()),*];
            Some(Arc::new(move |k| Some(body::<Q>(k, &vals))))
        } else {
            None
        };
        let vals_f: Vec<f64> = vec![$($v.f()),*];
        let ff: Gen<f64> = Arc::new(move |k| Some(body::<f64>(k, &vals_f)));
        (fq, ff)
    }};
}

fn nat<S: Scalar>(k: usize) -> S {
    S::from_usize(k)
}

fn pw<S: Scalar>(q: &S, e: isize) -> S {
    if e >= 0 {
        q.pow(e as usize)
    } else {
        S::one() / q.pow((-e) as usize)
    }
}

/// Build a builtin from its name and parameters (given as literal strings).
/// Out-of-range parameters are accepted so that the classifier can be exercised on them.
pub fn builtin(name: &str, params: &[(&str, &str)]) -> Result<Specialization> {
    let get = |key: &str, default: Option<&str>| -> Result<P> {
        let raw = params.iter().find(|(k, _)| *k == key).map(|(_, v)| *v).or(default);
        let raw = raw.ok_or_else(|| Error::Requires(format!("parameter '{key}' for {name}")))?;
        if raw == "q0" {
            return Ok(P::Float(cigler_zeng_q0()));
        }
        if let Some(v) = parse_q(raw) {
            return Ok(P::Exact(v));
        }
        raw.parse::<f64>().map(P::Float).map_err(|_| Error::Parse { pos: 0, msg: format!("bad value '{raw}' for {key}") })
    };
    let echo = |ps: &[(&str, &P)]| -> Vec<(String, String)> {
        ps.iter()
            .map(|(k, v)| {
                let s = match v {
                    P::Exact(q) => fmt_q(q),
                    P::Float(f) => format!("{f}"),
                };
                (k.to_string(), s)
            })
            .collect()
    };
    let all_exact = |ps: &[&P]| ps.iter().all(|p| matches!(p, P::Exact(_)));
    let nonzero = |ps: &[&P]| ps.iter().all(|p| p.f() != 0.0);
    let forbid = |p: &P, bad: f64, what: &str| -> Result<()> {
        if p.f() == bad {
            return Err(Error::Requires(format!("{what} for {name}")));
        }
        Ok(())
    };

    let spec = match name {
        "plancherel" => {
            let (fq, ff) = both!(true, |k, | (nat::<S>(k), nat::<S>(k)), );
            let (cq, cf) = both!(true, |k, | (S::one(), nat::<S>(k)), );
            Specialization::build(name, vec![], fq, ff).with_ct(cq, cf)
        }
        "charlier" => {
            let rho = get("rho", None)?;
            let ex = all_exact(&[&rho]);
            let (fq, ff) = both!(ex, |k, rho| (nat::<S>(k) + rho.clone() - S::one(), nat::<S>(k) * rho.clone()), rho);
            let (cq, cf) = both!(ex, |k, rho| (rho.clone(), nat::<S>(k) / rho.clone()), rho);
            Specialization::build(name, echo(&[("rho", &rho)]), fq, ff).with_ct_if(nonzero(&[&rho]), cq, cf)
        }
        "al-salam-carlitz" => {
            let (rho, q) = (get("rho", None)?, get("q", None)?);
            let ex = all_exact(&[&rho, &q]);
            let (fq, ff) = both!(
                ex,
                |k, rho, q| (
                    rho.clone() * q.pow(k - 1) + qint(q, k - 1),
                    rho.clone() * q.pow(k - 1) * qint(q, k)
                ),
                rho,
                q
            );
            let (cq, cf) = both!(
                ex,
                |k, rho, q| (rho.clone() * q.pow(k - 1), qint(q, k) / (rho.clone() * q.pow(k))),
                rho,
                q
            );
            Specialization::build(name, echo(&[("rho", &rho), ("q", &q)]), fq, ff).with_ct_if(nonzero(&[&rho, &q]), cq, cf)
        }
        "al-salam-chihara" => {
            let (rho, q) = (get("rho", None)?, get("q", None)?);
            let ex = all_exact(&[&rho, &q]);
            let (fq, ff) = both!(ex, |k, rho, q| (rho.clone() + qint(q, k - 1), rho.clone() * qint(q, k)), rho, q);
            let (cq, cf) = both!(ex, |k, rho, q| (rho.clone(), qint(q, k) / rho.clone()), rho, q);
            Specialization::build(name, echo(&[("rho", &rho), ("q", &q)]), fq, ff).with_ct_if(nonzero(&[&rho]), cq, cf)
        }
        "q-charlier" => {
            let (rho, q) = (get("rho", None)?, get("q", None)?);
            forbid(&q, 0.0, "q != 0")?;
            let ex = all_exact(&[&rho, &q]);
            let (fq, ff) = both!(
                ex,
                |k, rho, q| {
                    let ki = k as isize;
                    let corr = S::one() + rho.clone() * (q.clone() - S::one()) * pw(q, ki - 2);
                    let x = rho.clone() * pw(q, 2 * ki - 2) + if k == 1 { S::zero() } else { qint(q, k - 1) * corr };
                    let y = rho.clone()
                        * pw(q, 2 * ki - 2)
                        * qint(q, k)
                        * (S::one() + rho.clone() * (q.clone() - S::one()) * pw(q, ki - 1));
                    (x, y)
                },
                rho,
                q
            );
            let (cq, cf) = both!(
                ex,
                |k, rho, q| {
                    let ki = k as isize;
                    let c = rho.clone() * pw(q, 2 * ki - 2);
                    let t = qint(q, k) * (S::one() + rho.clone() * (q.clone() - S::one()) * pw(q, ki - 1))
                        / (rho.clone() * pw(q, 2 * ki));
                    (c, t)
                },
                rho,
                q
            );
            Specialization::build(name, echo(&[("rho", &rho), ("q", &q)]), fq, ff).with_ct_if(nonzero(&[&rho, &q]), cq, cf)
        }
        "cigler-zeng" => {
            let (q, rho) = (get("q", None)?, get("rho", Some("1"))?);
            let ex = all_exact(&[&q, &rho]);
            let (fq, ff) = both!(
                ex,
                |k, q, rho| (q.pow(k - 1) + rho.clone() - S::one(), rho.clone() * (q.pow(k) - S::one())),
                q,
                rho
            );
            let (cq, cf) = both!(ex, |k, q, rho| (rho.clone(), (q.pow(k) - S::one()) / rho.clone()), q, rho);
            Specialization::build(name, echo(&[("q", &q), ("rho", &rho)]), fq, ff).with_ct_if(nonzero(&[&rho]), cq, cf)
        }
        "alt-q-charlier" => {
            let (rho, q) = (get("rho", None)?, get("q", None)?);
            let ex = all_exact(&[&rho, &q]);
            struct Alt {
                rho: P,
                q: P,
            }
            fn ct<S: Scalar>(k: usize, rho: &S, q: &S) -> (S, S) {
                let ki = k as isize;
                let one = S::one();
                let c = pw(q, ki - 1) * (one.clone() + rho.clone() * pw(q, ki - 1))
                    / ((one.clone() + rho.clone() * pw(q, 2 * ki - 1)) * (one.clone() + rho.clone() * pw(q, 2 * ki - 2)));
                let t = rho.clone() * pw(q, ki - 1) * (one.clone() - q.pow(k)) * (one.clone() + rho.clone() * pw(q, 2 * ki + 1))
                    / ((one.clone() + rho.clone() * pw(q, ki)) * (one + rho.clone() * pw(q, 2 * ki - 1)));
                (c, t)
            }
            impl CtFamily for Alt {
                fn ct_q(&self, k: usize) -> (Q, Q) {
                    ct(k, &self.rho.q().unwrap(), &self.q.q().unwrap())
                }
                fn ct_f(&self, k: usize) -> (f64, f64) {
                    ct(k, &self.rho.f(), &self.q.f())
                }
            }
            let ps = echo(&[("rho", &rho), ("q", &q)]);
            Specialization::from_ct_family(name, ps, ex, Alt { rho, q })
        }
        "fake-shifted-charlier" => {
            let (rho, sigma) = (get("rho", Some("1"))?, get("sigma", None)?);
            let ex = all_exact(&[&rho, &sigma]);
            let (fq, ff) = both!(
                ex,
                |k, rho, sigma| {
                    let x = if k == 1 { rho.clone() } else { nat::<S>(k) + rho.clone() + sigma.clone() - S::from_i64(2) };
                    (x, rho.clone() * (nat::<S>(k) + sigma.clone() - S::one()))
                },
                rho,
                sigma
            );
            let (cq, cf) = both!(
                ex,
                |k, rho, sigma| (rho.clone(), (sigma.clone() + nat::<S>(k) - S::one()) / rho.clone()),
                rho,
                sigma
            );
            Specialization::build(name, echo(&[("rho", &rho), ("sigma", &sigma)]), fq, ff).with_ct_if(nonzero(&[&rho]), cq, cf)
        }
        "shifted-charlier" | "shifted-plancherel" => {
            let rho = if name == "shifted-plancherel" { P::Exact(Q::one()) } else { get("rho", None)? };
            let sigma = get("sigma", None)?;
            let ex = all_exact(&[&rho, &sigma]);
            let (fq, ff) = both!(
                ex,
                |k, rho, sigma| (
                    nat::<S>(k) + rho.clone() + sigma.clone() - S::from_i64(2),
                    (nat::<S>(k) + sigma.clone() - S::one()) * rho.clone()
                ),
                rho,
                sigma
            );
            let ps = if name == "shifted-plancherel" {
                echo(&[("sigma", &sigma)])
            } else {
                echo(&[("rho", &rho), ("sigma", &sigma)])
            };
            Specialization::build(name, ps, fq, ff)
        }
        "power" => {
            let (alpha, kappa) = (get("alpha", None)?, get("kappa", None)?);
            let int_alpha = alpha.q().filter(|a| a.is_integer() && !a.is_negative());
            let ex = int_alpha.is_some() && kappa.q().is_some();
            struct Power {
                alpha: f64,
                alpha_int: Option<usize>,
                kappa: P,
            }
            impl CtFamily for Power {
                fn ct_q(&self, k: usize) -> (Q, Q) {
                    let a = self.alpha_int.unwrap();
                    (Q::one(), self.kappa.q().unwrap() / Ring::pow(&<Q as Scalar>::from_usize(k), a))
                }
                fn ct_f(&self, k: usize) -> (f64, f64) {
                    (1.0, self.kappa.f() / (k as f64).powf(self.alpha))
                }
            }
            let alpha_int = int_alpha.map(|a| num_traits::ToPrimitive::to_usize(&a.to_integer()).unwrap());
            let ps = echo(&[("alpha", &alpha), ("kappa", &kappa)]);
            Specialization::from_ct_family(name, ps, ex, Power { alpha: alpha.f(), alpha_int, kappa })
        }
        "laguerre" => {
            let alpha = get("alpha", None)?;
            let ex = all_exact(&[&alpha]);
            let (fq, ff) = both!(
                ex,
                |k, alpha| (
                    S::from_i64(2) * nat::<S>(k) + alpha.clone() - S::one(),
                    nat::<S>(k) * (nat::<S>(k) + alpha.clone())
                ),
                alpha
            );
            Specialization::build(name, echo(&[("alpha", &alpha)]), fq, ff)
        }
        "meixner" => {
            let (beta, c) = (get("beta", None)?, get("c", None)?);
            forbid(&c, 1.0, "c != 1")?;
            let ex = all_exact(&[&beta, &c]);
            let (fq, ff) = both!(
                ex,
                |k, beta, c| {
                    let one = S::one();
                    let km = nat::<S>(k) - one.clone();
                    let x = (beta.clone() * c.clone() + km.clone() * (c.clone() + one.clone())) / (one.clone() - c.clone());
                    let y = nat::<S>(k) * (km + beta.clone()) * c.clone() / (one.clone() - c.clone()).pow(2);
                    (x, y)
                },
                beta,
                c
            );
            Specialization::build(name, echo(&[("beta", &beta), ("c", &c)]), fq, ff)
        }
        _ => {
            return Err(Error::UnknownBuiltin { name: name.into(), known: suggestions(name) });
        }
    };
    Ok(spec)
}

fn suggestions(name: &str) -> String {
    let close: Vec<&str> = BUILTINS
        .iter()
        .copied()
        .filter(|b| b.contains(name) || name.contains(b) || b.starts_with(&name[..name.len().min(3)]))
        .collect();
    if close.is_empty() {
        BUILTINS.join(", ")
    } else {
        close.join(", ")
    }
}

/// Parse "name" or "name:key=value,key=value".
pub fn parse_spec(s: &str) -> Result<Specialization> {
    let (name, rest) = s.split_once(':').unwrap_or((s, ""));
    let mut params = Vec::new();
    let mut pos = name.len() + 1;
    for part in rest.split(',').filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse { pos, msg: format!("expected key=value, got '{part}'") })?;
        params.push((k.trim(), v.trim()));
        pos += part.len() + 1;
    }
    builtin(name.trim(), &params)
}

// ---------------------------------------------------------------- (u|t) forms

/// A_ℓ(m) in (u|t) form: 1 + Σ_{r=1}^{ℓ} t_m⋯t_{m+r-1}, with t_0 = 0.
/// `t` is 1-based (t[0] = t_1).
pub fn a_ut<S: Scalar>(l: usize, m: usize, t: &[S]) -> S {
    let tk = |k: usize| if k == 0 { S::zero() } else { t[k - 1].clone() };
    let mut acc = S::one();
    let mut prod = S::one();
    for r in 0..l {
        prod = prod * tk(m + r);
        acc = acc + prod.clone();
    }
    acc
}

/// B_k(m) in (u|t) form: t_{m+1} − (1+t_m−t_{m+1}) t_{m+2} A_{k-1}(m+3).
pub fn b_ut<S: Scalar>(k: usize, m: usize, t: &[S]) -> S {
    let tk = |i: usize| if i == 0 { S::zero() } else { t[i - 1].clone() };
    if k == 0 {
        return tk(m + 1);
    }
    tk(m + 1) - (S::one() + tk(m) - tk(m + 1)) * tk(m + 2) * a_ut(k - 1, m + 3, t)
}

/// Truncated A_∞(m) with an estimated tail bound.
#[derive(Clone, Debug, PartialEq)]
pub struct Truncated {
    pub value: f64,
    pub tail: f64,
    pub terms: usize,
}

/// A_∞(m) = 1 + t_m + t_m t_{m+1} + …, summed until the next term is below
/// `tol`·partial and t < 1 so that a geometric tail bound applies.
pub fn a_inf(m: usize, t: &[f64], horizon: usize, tol: f64) -> Result<Truncated> {
    let tk = |k: usize| if k == 0 { 0.0 } else { t[k - 1] };
    let mut acc = 1.0;
    let mut prod = 1.0;
    let limit = (m + horizon).min(t.len());
    let mut k = m;
    while k <= limit {
        prod *= tk(k);
        acc += prod;
        if prod == 0.0 {
            return Ok(Truncated { value: acc, tail: 0.0, terms: k - m + 1 });
        }
        let next_t = if k < t.len() { tk(k + 1) } else { f64::INFINITY };
        if prod.abs() < tol * acc.abs() && next_t < 1.0 {
            let tail = prod * next_t / (1.0 - next_t);
            return Ok(Truncated { value: acc, tail, terms: k - m + 1 });
        }
        if !acc.is_finite() {
            break;
        }
        k += 1;
    }
    Err(Error::Requires(format!("convergence of A_inf({m}) within horizon {horizon}")))
}

/// B_∞(m) = t_{m+1} + (t_{m+1} − t_m − 1) t_{m+2} A_∞(m+3).
pub fn b_inf(m: usize, t: &[f64], horizon: usize, tol: f64) -> Result<Truncated> {
    let tk = |k: usize| if k == 0 { 0.0 } else { t[k - 1] };
    let a = a_inf(m + 3, t, horizon, tol)?;
    let f = (tk(m + 1) - tk(m) - 1.0) * tk(m + 2);
    Ok(Truncated { value: tk(m + 1) + f * a.value, tail: (f * a.tail).abs(), terms: a.terms })
}

// ---------------------------------------------------------------- classifier

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Divergent,
    Convergent,
    Rejected,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Divergent => "divergent",
            Verdict::Convergent => "convergent",
            Verdict::Rejected => "rejected",
            Verdict::Inconclusive => "inconclusive",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug)]
pub struct PositivityVerdict {
    pub verdict: Verdict,
    /// Failing inequalities (rejected) or the checks that were performed.
    pub witness: Vec<String>,
    pub horizon: usize,
}

impl PositivityVerdict {
    fn new(verdict: Verdict, witness: Vec<String>, horizon: usize) -> Self {
        Self { verdict, witness, horizon }
    }
}

/// Classify a specialization as divergent, convergent or rejected.
///
/// Rejection witnesses: a non-positive A_k, negative B_k(m) (first per shift m,
/// exact values when the parameters are rational), a valley t_m ≥ t_{m+1} ≤ t_{m+2},
/// or a violated t_{m+1} ≥ 1 + t_m while A_∞ diverges.
pub fn classify(spec: &Specialization, horizon: usize, tol: f64) -> PositivityVerdict {
    let h = horizon.max(8);
    let k_max = 4 * h + 8;

    // forward ratio recurrences lose all precision on divergent data, so use exact (c,t) when possible
    let ct = if spec.is_exact() {
        spec.ct_exact(k_max).map(|(c, t)| (c.iter().map(Scalar::to_f64).collect(), t.iter().map(Scalar::to_f64).collect()))
    } else {
        spec.ct_f64(k_max)
    };
    let (c, t): (Vec<f64>, Vec<f64>) = match ct {
        Ok(ct) => ct,
        Err(Error::VanishingA(k)) => return PositivityVerdict::new(Verdict::Rejected, vec![format!("A_{k} = 0")], h),
        Err(e) => return PositivityVerdict::new(Verdict::Inconclusive, vec![e.to_string()], h),
    };
    if let Some(k) = c.iter().position(|&v| v <= 0.0) {
        return PositivityVerdict::new(Verdict::Rejected, vec![format!("A_{}/A_{} = {:.6e} <= 0", k + 1, k, c[k])], h);
    }
    // B_k(m) ≥ 0 for k, m ≤ H: a float scan in (u|t) form locates candidates,
    // exact (x|y) values decide them when the parameters are rational
    let exact_xy = if spec.is_exact() { spec.xy_exact(2 * h + 4).ok() } else { None };
    let mut wit = Vec::new();
    for m in 0..=h {
        let mut exact_col: Option<Vec<Q>> = None;
        for k in 0..=h {
            let bf = b_ut(k, m, &t);
            if bf >= 1e-9 * (1.0 + t[m].abs()) {
                continue;
            }
            match &exact_xy {
                Some(xy) => {
                    let col = exact_col.get_or_insert_with(|| crate::clone::det_b_all(h, m, xy));
                    if col[k].is_negative() {
                        wit.push(format!("B_{k}({m}) = {}", fmt_q(&col[k])));
                        break;
                    }
                }
                None if bf < -tol => {
                    wit.push(format!("B_{k}({m}) = {bf:.6e}"));
                    break;
                }
                None => {}
            }
        }
    }
    if !wit.is_empty() {
        return PositivityVerdict::new(Verdict::Rejected, wit, h);
    }
    let tk = |k: usize| if k == 0 { 0.0 } else { t[k - 1] };

    // valley test
    for m in 1..=h {
        if tk(m) >= tk(m + 1) && tk(m + 1) <= tk(m + 2) {
            return PositivityVerdict::new(
                Verdict::Rejected,
                vec![format!("valley t_{m} = {:.6e} >= t_{} = {:.6e} <= t_{}", tk(m), m + 1, tk(m + 1), m + 2)],
                h,
            );
        }
    }

    // divergent type
    let gap_fail = divergent_gap(spec, &t, h, tol);
    if gap_fail.is_none() {
        return PositivityVerdict::new(
            Verdict::Divergent,
            vec![format!("t_(m+1) - t_m - 1 >= 0 for m <= {h}")],
            h,
        );
    }
    let a_diverges = (h..=2 * h).all(|k| tk(k) >= 1.0);
    if a_diverges {
        let (m, v) = gap_fail.unwrap();
        return PositivityVerdict::new(
            Verdict::Rejected,
            vec![format!("t_{} - t_{m} - 1 = {v:.6e} < 0 while A_inf diverges", m + 1)],
            h,
        );
    }

    // convergent type
    let mut checks = Vec::new();
    for m in 0..=h {
        match b_inf(m, &t, 2 * h, tol) {
            Ok(b) if b.value < -1e-10 => {
                return PositivityVerdict::new(Verdict::Rejected, vec![format!("B_inf({m}) = {:.6e}", b.value)], h);
            }
            Ok(_) => {}
            Err(e) => return PositivityVerdict::new(Verdict::Inconclusive, vec![e.to_string()], h),
        }
    }
    checks.push(format!("A_inf(m) stabilized and B_inf(m) >= -1e-10 for m <= {h}"));
    PositivityVerdict::new(Verdict::Convergent, checks, h)
}

fn divergent_gap(spec: &Specialization, t: &[f64], h: usize, tol: f64) -> Option<(usize, f64)> {
    if spec.is_exact() {
        if let Ok((_, tq)) = spec.ct_exact(h + 1) {
            for m in 0..=h {
                let prev = if m == 0 { Q::zero() } else { tq[m - 1].clone() };
                let g = tq[m].clone() - prev - Q::one();
                if g.is_negative() {
                    return Some((m, Scalar::to_f64(&g)));
                }
            }
            return None;
        }
    }
    let tk = |k: usize| if k == 0 { 0.0 } else { t[k - 1] };
    (0..=h).map(|m| (m, tk(m + 1) - tk(m) - 1.0)).find(|(_, g)| *g < -tol)
}

/// Smallest κ with B_∞(1) < 0 for power(α, κ), found by bisection.
pub fn power_kappa_threshold(alpha: f64, lo: f64, hi: f64) -> f64 {
    let b1 = |kappa: f64| {
        let t: Vec<f64> = (1..=400).map(|k| kappa / (k as f64).powf(alpha)).collect();
        b_inf(1, &t, 300, 1e-16).map(|b| b.value).unwrap_or(f64::NAN)
    };
    let (mut lo, mut hi) = (lo, hi);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if b1(mid) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
