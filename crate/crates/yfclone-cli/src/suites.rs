//! `verify` suites. Each suite is exact (rational identities, checked with
//! equality) or statistical (tolerances). Only exact failures set the exit code.

use crate::commands::scaling_family;
use crate::report::{Failure, Outcome, Table};
use crate::Common;
use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};
use yfclone::cauchy::{cauchy_first, cauchy_first_brute, cauchy_second, cauchy_second_brute, MAX_BRUTE_LEVEL};
use yfclone::clone::{clone_homogeneous, clone_schur, harmonic_phi, kostka, kostka_inverse};
use yfclone::measures::{chihara_type_i_limit, stream_rng, type_i, verify_coherence, verify_scaling};
use yfclone::moments::{moments_exact, Route};
use yfclone::specs::{classify, parse_spec, Verdict};
use yfclone::words::{covers_up, dim, enumerate_level};
use yfclone::{q, qi, FibWord, Scalar, Xy, Q};

pub const SUITES: &[&str] =
    &["pieri", "cauchy1", "cauchy2", "kostka", "moments5way", "coherence", "scaling", "typeI-normalization"];

/// Exact specializations used when --spec is absent.
const CATALOG: &[&str] = &[
    "plancherel",
    "charlier:rho=1/2",
    "al-salam-carlitz:rho=1/2,q=1/3",
    "al-salam-chihara:rho=1/2,q=2",
    "q-charlier:rho=1/2,q=1/2",
    "cigler-zeng:q=2",
    "shifted-charlier:rho=1/2,sigma=2",
    "shifted-plancherel:sigma=2",
    "fake-shifted-charlier:sigma=3",
    "power:alpha=2,kappa=1",
];

#[derive(Debug, Serialize)]
struct Suite {
    suite: &'static str,
    exact: bool,
    pass: bool,
    checks: usize,
    failures: Vec<String>,
    detail: Value,
}

impl Suite {
    fn new(suite: &'static str, exact: bool) -> Self {
        Self { suite, exact, pass: true, checks: 0, failures: Vec::new(), detail: Value::Null }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.pass = false;
            if self.failures.len() < 20 {
                self.failures.push(what());
            }
        }
    }
}

fn rand_q<R: Rng>(r: &mut R) -> Q {
    q(r.random_range(-7..=9), r.random_range(1..=5))
}

fn rand_pos<R: Rng>(r: &mut R) -> Q {
    q(r.random_range(1..=9), r.random_range(1..=5))
}

fn rand_xy<R: Rng>(r: &mut R, k: usize, positive: bool) -> Xy<Q> {
    Xy::from_fn(k, |_| if positive { (rand_pos(r), rand_pos(r)) } else { (rand_q(r), rand_q(r)) })
}

fn specs_of(c: &Common) -> Result<Vec<yfclone::Specialization>, Failure> {
    match &c.spec {
        Some(s) => Ok(vec![parse_spec(s)?]),
        None => CATALOG.iter().map(|s| parse_spec(s).map_err(Failure::from)).collect(),
    }
}

fn level(c: &Common, default: usize, max: usize) -> usize {
    c.n.unwrap_or(default).min(max)
}

fn pieri(c: &Common, trials: usize) -> Suite {
    let mut s = Suite::new("pieri", true);
    let n_max = level(c, 8, 12);
    let mut r = stream_rng(c.seed(), 0);
    for t in 0..trials {
        let xy = rand_xy(&mut r, n_max + 3, false);
        let pos = rand_xy(&mut r, n_max + 3, true);
        for n in 0..=n_max {
            for v in enumerate_level(n) {
                let up = covers_up(&v);
                let rhs = up.iter().fold(Q::zero(), |a, u| a + clone_schur(u, &xy));
                s.check(xy.x(n + 1) * clone_schur(&v, &xy) == rhs, || format!("trial {t}: x_{} s_{v} != sum over covers", n + 1));
                let phi = harmonic_phi(&v, &pos);
                let up_sum = up.iter().map(|u| harmonic_phi(u, &pos)).try_fold(Q::zero(), |a, b| b.map(|b| a + b));
                s.check(matches!((&phi, &up_sum), (Ok(a), Ok(b)) if a == b), || format!("trial {t}: phi not harmonic at {v}"));
            }
        }
    }
    s.detail = json!({ "n_max": n_max, "trials": trials });
    s
}

fn cauchy(c: &Common, trials: usize, second: bool) -> Suite {
    let mut s = Suite::new(if second { "cauchy2" } else { "cauchy1" }, true);
    let n_max = level(c, 9, MAX_BRUTE_LEVEL.min(11));
    let mut r = stream_rng(c.seed(), 1 + second as u64);
    for t in 0..trials {
        let pq = rand_xy(&mut r, n_max + 3, false);
        let xy = rand_xy(&mut r, n_max + 3, false);
        for n in 0..=n_max {
            let (det, brute) = if second {
                (cauchy_second(n, &pq, &xy), cauchy_second_brute(n, &pq, &xy))
            } else {
                (cauchy_first(n, &pq, &xy), cauchy_first_brute(n, &pq, &xy))
            };
            s.check(brute.as_ref().is_ok_and(|b| *b == det), || format!("trial {t}, n={n}: determinant != sum over YF_n"));
        }
    }
    s.detail = json!({ "n_max": n_max, "trials": trials });
    s
}

fn kostka_suite(c: &Common) -> Suite {
    let mut s = Suite::new("kostka", true);
    let n_max = level(c, 8, 12);
    let mut r = stream_rng(c.seed(), 3);
    for n in 0..=n_max {
        let k = kostka(n);
        let inv = kostka_inverse(n);
        let m = k.words.len();
        for i in 0..m {
            for j in 0..m {
                let e = (0..m).fold(Q::zero(), |a, l| a + Q::from_integer(k.entries[i][l].clone()) * inv[l][j].clone());
                s.check(e == if i == j { Q::one() } else { Q::zero() }, || format!("n={n}: (K K^-1)[{i}][{j}] = {e}"));
            }
            let w = &k.words[i];
            s.check(k.get(w, &FibWord::ones(n)) == dim(w).into(), || format!("K({w}, 1^{n}) != dim"));
        }
        if n <= 7 {
            let xy = rand_xy(&mut r, n + 3, false);
            for v in &k.words {
                let rhs = k.words.iter().fold(Q::zero(), |a, u| a + Q::from_integer(k.get(u, v)) * clone_schur(u, &xy));
                s.check(clone_homogeneous(v, &xy) == rhs, || format!("h_{v} != sum K s"));
            }
        }
    }
    s.detail = json!({ "n_max": n_max });
    s
}

fn moments5(c: &Common) -> Result<Suite, Failure> {
    let mut s = Suite::new("moments5way", true);
    let n = level(c, 9, 12);
    let mut per_spec = Vec::new();
    for sp in specs_of(c)? {
        if !sp.is_exact() {
            continue;
        }
        let mut routes = vec![Route::Motzkin, Route::JFraction, Route::Nc, Route::Compressed];
        if classify(&sp, 64, 1e-12).verdict == Verdict::Divergent {
            routes.push(Route::AllPartitions);
        }
        let mut seqs: Vec<(Route, Vec<Q>)> = Vec::new();
        for r in &routes {
            match moments_exact(&sp, n, *r) {
                Ok(m) => seqs.push((*r, m.a)),
                Err(e) => s.check(false, || format!("{}: {r} failed: {e}", sp.label())),
            }
        }
        for (r, a) in seqs.iter().skip(1) {
            s.check(*a == seqs[0].1, || format!("{}: {r} disagrees with {}", sp.label(), seqs[0].0));
        }
        per_spec.push(json!({ "spec": sp.label(), "routes": routes.iter().map(|r| r.name()).collect::<Vec<_>>() }));
    }
    s.detail = json!({ "n": n, "specs": per_spec });
    Ok(s)
}

fn coherence(c: &Common) -> Result<Suite, Failure> {
    let mut s = Suite::new("coherence", true);
    let n_max = level(c, 8, 12);
    for sp in specs_of(c)? {
        if !sp.is_exact() {
            continue;
        }
        for n in 0..=n_max {
            match verify_coherence(&sp, n) {
                Ok(bad) => s.check(bad.is_empty(), || format!("{} n={n}: incoherent at {bad:?}", sp.label())),
                Err(e) => s.check(false, || format!("{} n={n}: {e}", sp.label())),
            }
        }
    }
    s.detail = json!({ "n_max": n_max });
    Ok(s)
}

/// Uses --level for the word length (default 4000) and --samples (default 100000).
fn scaling(c: &Common) -> Result<Suite, Failure> {
    let mut s = Suite::new("scaling", false);
    let n = c.level.unwrap_or(4000);
    let samples = c.samples.unwrap_or(100_000);
    let streams = c.streams.unwrap_or(4).max(1);
    let mut reports = Vec::new();
    for label in ["charlier:rho=1/2", "shifted-plancherel:sigma=2", "plancherel"] {
        let rep = verify_scaling(scaling_family(&parse_spec(label)?)?, n, samples, c.seed(), streams);
        for ch in &rep.checks {
            s.check(ch.pass, || format!("{label}: {} = {} (target {} ± {})", ch.name, ch.value, ch.target, ch.tol));
        }
        reports.push(serde_json::to_value(&rep).expect("report serializes"));
    }
    s.detail = json!({ "n": n, "samples": samples, "reports": reports });
    Ok(s)
}

fn type_i_norm() -> Result<Suite, Failure> {
    let mut s = Suite::new("typeI-normalization", false);
    let t = type_i(&parse_spec("power:alpha=2,kappa=1")?, 25)?;
    let pi = std::f64::consts::PI;
    let target = pi / pi.sinh();
    s.check((t.all_ones - target).abs() < 1e-8, || format!("mu(1^inf) = {} vs pi/sinh(pi) = {target}", t.all_ones));
    s.check(t.partial_sum >= 0.999, || format!("power alpha=2 kappa=1: partial sum to weight 25 is {}", t.partial_sum));
    let qq = qi(2);
    let chihara = (0..=200).fold(Q::zero(), |a, m| a + chihara_type_i_limit(&qq, m));
    let gap = (Q::one() - chihara).to_f64().abs();
    s.check(gap < 1e-50, || format!("chihara q=2 masses sum to 1 - {gap:e}"));
    s.detail = json!({ "all_ones": t.all_ones, "pi_over_sinh_pi": target, "partial_sum_25": t.partial_sum, "chihara_gap": gap });
    Ok(s)
}

pub fn verify(c: &Common, names: &[String], trials: usize) -> Result<Outcome, Failure> {
    let mut chosen: Vec<&str> = Vec::new();
    for n in names {
        match n.as_str() {
            "all" => chosen.extend(SUITES),
            other => match SUITES.iter().find(|s| s.eq_ignore_ascii_case(other)) {
                Some(s) => chosen.push(s),
                None => return Err(Failure::usage(format!("unknown suite '{other}'; known: {}", SUITES.join(", ")))),
            },
        }
    }
    chosen.dedup();
    let mut out = Vec::new();
    for name in chosen {
        out.push(match name {
            "pieri" => pieri(c, trials),
            "cauchy1" => cauchy(c, trials, false),
            "cauchy2" => cauchy(c, trials, true),
            "kostka" => kostka_suite(c),
            "moments5way" => moments5(c)?,
            "coherence" => coherence(c)?,
            "scaling" => scaling(c)?,
            _ => type_i_norm()?,
        });
    }
    let mut table = Table::new(&["suite", "exact", "pass", "checks", "failures"]);
    for s in &out {
        table.push(vec![s.suite.into(), s.exact.to_string(), s.pass.to_string(), s.checks.to_string(), s.failures.join("; ")]);
    }
    let pass = out.iter().all(|s| s.pass);
    let failed_exact = out.iter().any(|s| s.exact && !s.pass);
    let mut o = Outcome::new("verify", json!({ "pass": pass, "suites": out }), table);
    o.failed_exact = failed_exact;
    Ok(o)
}
