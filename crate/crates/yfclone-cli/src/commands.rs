use crate::report::{fmt_f, Failure, Num, Outcome, Table};
use crate::Common;
use clap::ValueEnum;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use yfclone::clone::{clone_homogeneous, clone_schur, harmonic_phi};
use yfclone::measures::{
    run_streams, sample_by_runs, sample_word, type_i as type_i_masses, verify_scaling, CharlierRuns, ScalingFamily,
    ShiftedPlancherelRuns,
};
use yfclone::moments::{moments_exact, moments_f64, Route};
use yfclone::rs::{chain_of_q, fixed_points, fmt_perm, inverse, parse_perm, random_involution, random_permutation, rs as rs_pair, two_cycles, Harmonic};
use yfclone::scalar::parse_q;
use yfclone::specs::{classify as classify_spec, parse_spec, Specialization};
use yfclone::words::{dim, enumerate_level};
use yfclone::{FibWord, Scalar, Q};

pub fn need_spec(c: &Common) -> Result<Specialization, Failure> {
    let s = c.spec.as_deref().ok_or_else(|| Failure::usage("--spec is required"))?;
    Ok(parse_spec(s)?)
}

fn param_f64(spec: &Specialization, key: &str) -> Result<f64, Failure> {
    spec.params
        .iter()
        .find(|(k, _)| k == key)
        .and_then(|(_, v)| parse_q(v).map(|q| q.to_f64()).or_else(|| v.parse().ok()))
        .ok_or_else(|| Failure::usage(format!("{} needs numeric {key}", spec.name)))
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum What {
    Dim,
    Schur,
    Homogeneous,
    Phi,
    Measure,
}

impl What {
    fn name(self) -> &'static str {
        match self {
            What::Dim => "dim",
            What::Schur => "schur",
            What::Homogeneous => "homogeneous",
            What::Phi => "phi",
            What::Measure => "measure",
        }
    }
}

fn words_of(c: &Common) -> Result<Vec<FibWord>, Failure> {
    if !c.word.is_empty() {
        return c.word.iter().map(|s| if s.trim().is_empty() { Ok(FibWord::empty()) } else { s.parse() }).collect::<Result<_, _>>().map_err(Failure::from);
    }
    match c.level {
        Some(n) => Ok(enumerate_level(n)),
        None => Err(Failure::usage("give --word or --level")),
    }
}

pub fn eval(c: &Common, what: &[What]) -> Result<Outcome, Failure> {
    let spec = need_spec(c)?;
    let words = words_of(c)?;
    let k = words.iter().map(FibWord::weight).max().unwrap_or(0) + 2;
    let exact = spec.is_exact();
    let (qxy, fxy) = if exact { (Some(spec.xy_exact(k)?), None) } else { (None, Some(spec.xy_f64(k)?)) };
    let mut header = vec!["word"];
    header.extend(what.iter().map(|w| w.name()));
    let mut table = Table::new(&header);
    let mut rows = Vec::new();
    let mut total = Num::Exact(Q::from_integer(0.into()));
    for w in &words {
        let d = dim(w);
        let value = |kind: What| -> Result<Num, Failure> {
            Ok(match (kind, &qxy, &fxy) {
                (What::Dim, _, _) => Num::Exact(Q::from_integer(d.clone().into())),
                (What::Schur, Some(x), _) => Num::Exact(clone_schur(w, x)),
                (What::Schur, _, Some(x)) => Num::Float(clone_schur(w, x)),
                (What::Homogeneous, Some(x), _) => Num::Exact(clone_homogeneous(w, x)),
                (What::Homogeneous, _, Some(x)) => Num::Float(clone_homogeneous(w, x)),
                (What::Phi, Some(x), _) => Num::Exact(harmonic_phi(w, x)?),
                (What::Phi, _, Some(x)) => Num::Float(harmonic_phi(w, x)?),
                (What::Measure, Some(x), _) => Num::Exact(Q::from_integer(d.clone().into()) * harmonic_phi(w, x)?),
                (What::Measure, _, Some(x)) => Num::Float(d.to_string().parse::<f64>().unwrap_or(f64::NAN) * harmonic_phi(w, x)?),
                _ => unreachable!("one prefix is present"),
            })
        };
        let label = if w.is_empty() { "∅".to_string() } else { w.to_string() };
        let mut obj = serde_json::Map::new();
        obj.insert("word".into(), json!(label));
        let mut row = vec![label];
        for &kind in what {
            let v = value(kind)?;
            if kind == What::Measure {
                total = match (total, &v) {
                    (Num::Exact(a), Num::Exact(b)) => Num::Exact(a + b),
                    (Num::Exact(a), Num::Float(b)) => Num::Float(a.to_f64() + b),
                    (Num::Float(a), Num::Float(b)) => Num::Float(a + b),
                    (Num::Float(a), Num::Exact(b)) => Num::Float(a + b.to_f64()),
                };
            }
            obj.insert(kind.name().into(), v.json());
            row.push(v.cell());
        }
        rows.push(Value::Object(obj));
        table.push(row);
    }
    let mut result = json!({ "spec": spec.label(), "exact": exact, "words": rows });
    if what.contains(&What::Measure) {
        result["total_measure"] = total.json();
    }
    Ok(Outcome::new("eval", result, table))
}

pub fn classify(c: &Common) -> Result<Outcome, Failure> {
    let spec = need_spec(c)?;
    let horizon = c.horizon.unwrap_or(64);
    let v = classify_spec(&spec, horizon, c.tol.unwrap_or(1e-12));
    let mut table = Table::new(&["spec", "verdict", "witness", "horizon"]);
    table.push(vec![spec.label(), v.verdict.to_string(), v.witness.join("; "), v.horizon.to_string()]);
    let result = json!({
        "spec": spec.label(),
        "verdict": v.verdict.to_string(),
        "witness": v.witness,
        "horizon": v.horizon,
    });
    Ok(Outcome::new("classify", result, table))
}

pub fn moments(c: &Common, routes: &[String]) -> Result<Outcome, Failure> {
    let spec = need_spec(c)?;
    let n = c.n.unwrap_or(8);
    let mut table = Table::new(&["route", "k", "a_k"]);
    let mut out = Vec::new();
    let mut skipped = Vec::new();
    if !spec.is_exact() {
        let m = moments_f64(&spec, n)?;
        for (k, a) in m.a.iter().enumerate() {
            table.push(vec![m.route.to_string(), k.to_string(), fmt_f(*a)]);
        }
        out.push(json!({ "route": m.route.to_string(), "a": m.a }));
        let result = json!({ "spec": spec.label(), "exact": false, "n": n, "routes": out, "skipped": skipped, "agree": true });
        return Ok(Outcome::new("moments", result, table));
    }
    let chosen: Vec<Route> = if routes.is_empty() {
        Route::ALL.to_vec()
    } else {
        routes.iter().map(|r| Route::parse(r)).collect::<Result<_, _>>()?
    };
    let mut seqs: Vec<Vec<Q>> = Vec::new();
    for r in chosen {
        match moments_exact(&spec, n, r) {
            Ok(m) => {
                for (k, a) in m.a.iter().enumerate() {
                    table.push(vec![r.to_string(), k.to_string(), Num::Exact(a.clone()).cell()]);
                }
                out.push(json!({ "route": r.to_string(), "a": m.a.iter().map(|a| Num::Exact(a.clone()).json()).collect::<Vec<_>>() }));
                seqs.push(m.a);
            }
            Err(e) => skipped.push(json!({ "route": r.to_string(), "reason": e.to_string() })),
        }
    }
    let agree = seqs.windows(2).all(|p| p[0] == p[1]);
    let result = json!({ "spec": spec.label(), "exact": true, "n": n, "routes": out, "skipped": skipped, "agree": agree });
    Ok(Outcome::new("moments", result, table))
}

pub fn scaling_family(spec: &Specialization) -> Result<ScalingFamily, Failure> {
    match spec.name.as_str() {
        "charlier" => Ok(ScalingFamily::Charlier { rho: param_f64(spec, "rho")? }),
        "shifted-plancherel" => Ok(ScalingFamily::ShiftedPlancherel { sigma: param_f64(spec, "sigma")? }),
        "plancherel" => Ok(ScalingFamily::Plancherel),
        other => Err(Failure::usage(format!(
            "scaling reports exist for charlier, shifted-plancherel and plancherel, not {other}; use --raw"
        ))),
    }
}

pub fn sample(c: &Common, family: Option<&str>, raw: bool) -> Result<Outcome, Failure> {
    let label = family.or(c.spec.as_deref()).ok_or_else(|| Failure::usage("--family or --spec is required"))?;
    let spec = parse_spec(label)?;
    let seed = c.seed();
    let streams = c.streams.unwrap_or(4).max(1);
    if !raw {
        let fam = scaling_family(&spec)?;
        let n = c.n.unwrap_or(4000);
        let samples = c.samples.unwrap_or(100_000);
        let rep = verify_scaling(fam, n, samples, seed, streams);
        let mut table = Table::new(&["kind", "name", "value", "target", "tol", "pass"]);
        for (k, v) in &rep.statistics {
            table.push(vec!["statistic".into(), k.clone(), fmt_f(*v), String::new(), String::new(), String::new()]);
        }
        for ch in &rep.checks {
            table.push(vec!["check".into(), ch.name.clone(), fmt_f(ch.value), fmt_f(ch.target), fmt_f(ch.tol), ch.pass.to_string()]);
        }
        let mut result = serde_json::to_value(&rep).expect("report serializes");
        result["pass"] = json!(rep.pass());
        return Ok(Outcome::new("sample", result, table));
    }
    let n = c.n.unwrap_or(20);
    let samples = c.samples.unwrap_or(10);
    let words: Vec<String> = match spec.name.as_str() {
        "charlier" if param_f64(&spec, "rho")? <= 1.0 => {
            let chain = CharlierRuns { rho: param_f64(&spec, "rho")? };
            run_streams(seed, streams, samples, |rng, k| (0..k).map(|_| sample_by_runs(&chain, n, rng).to_string()).collect())
        }
        "shifted-plancherel" => {
            let chain = ShiftedPlancherelRuns { sigma: param_f64(&spec, "sigma")? };
            run_streams(seed, streams, samples, |rng, k| (0..k).map(|_| sample_by_runs(&chain, n, rng).to_string()).collect())
        }
        _ => {
            let xy = spec.xy_f64(n + 3)?;
            let res: Vec<Result<String, yfclone::Error>> =
                run_streams(seed, streams, samples, |rng, k| (0..k).map(|_| sample_word(&xy, n, rng).map(|w| w.to_string())).collect());
            res.into_iter().collect::<Result<_, _>>()?
        }
    };
    let mut table = Table::new(&["index", "word"]);
    for (i, w) in words.iter().enumerate() {
        table.push(vec![i.to_string(), w.clone()]);
    }
    let result = json!({ "spec": spec.label(), "n": n, "samples": samples, "seed": seed, "streams": streams, "words": words });
    Ok(Outcome::new("sample", result, table))
}

pub fn type_i(c: &Common) -> Result<Outcome, Failure> {
    let spec = need_spec(c)?;
    let cap = c.level.unwrap_or(25);
    let m = type_i_masses(&spec, cap)?;
    let mut table = Table::new(&["kind", "label", "mass"]);
    table.push(vec!["all-ones".into(), "1^inf".into(), fmt_f(m.all_ones)]);
    for (k, v) in m.by_weight.iter().enumerate() {
        table.push(vec!["weight".into(), k.to_string(), fmt_f(*v)]);
    }
    for (l, v) in &m.words {
        table.push(vec!["word".into(), l.clone(), fmt_f(*v)]);
    }
    table.push(vec!["partial-sum".into(), cap.to_string(), fmt_f(m.partial_sum)]);
    let mut result = serde_json::to_value(&m).expect("masses serialize");
    result["cap"] = json!(cap);
    Ok(Outcome::new("typeI", result, table))
}

pub fn rs(c: &Common, perm: Option<&str>, random: bool, phi: &str, psi: &str, involution: bool) -> Result<Outcome, Failure> {
    if let Some(p) = perm {
        let s = parse_perm(p)?;
        let (pt, qt) = rs_pair(&s)?;
        let is_inv = inverse(&s) == s;
        let chain = chain_of_q(&s)?;
        let mut result = json!({
            "perm": fmt_perm(&s),
            "P": pt.to_string(),
            "Q": qt.to_string(),
            "shape": pt.shape().to_string(),
            "chain_of_Q": chain.to_string(),
            "involution": is_inv,
        });
        if is_inv {
            result["two_cycles"] = json!(two_cycles(&s));
            result["fixed_points"] = json!(fixed_points(&s));
        }
        let mut table = Table::new(&["field", "value"]);
        if let Value::Object(m) = &result {
            for (k, v) in m {
                table.push(vec![k.clone(), v.as_str().map(str::to_string).unwrap_or_else(|| v.to_string())]);
            }
        }
        return Ok(Outcome::new("rs", result, table));
    }
    if !random {
        return Err(Failure::usage("give --perm or --random"));
    }
    let n = c.n.ok_or_else(|| Failure::usage("--n is required with --random"))?;
    let samples = c.samples.unwrap_or(1000);
    let (seed, streams) = (c.seed(), c.streams.unwrap_or(4).max(1));
    let pi_spec = parse_spec(c.spec.as_deref().unwrap_or("plancherel"))?;
    let pi = Harmonic::new(&pi_spec, n)?;
    let hphi = Harmonic::new(&parse_spec(phi)?, n)?;
    let hpsi = Harmonic::new(&parse_spec(psi)?, n)?;
    let draws: Vec<Result<Vec<usize>, yfclone::Error>> = run_streams(seed, streams, samples, |rng, k| {
        (0..k)
            .map(|_| if involution { random_involution(n, &pi, &hphi, rng) } else { random_permutation(n, &pi, &hphi, &hpsi, rng) })
            .collect()
    });
    let perms: Vec<Vec<usize>> = draws.into_iter().collect::<Result<_, _>>()?;
    let mut freq: BTreeMap<String, usize> = BTreeMap::new();
    let mut table = Table::new(&["index", "perm", "shape"]);
    for (i, p) in perms.iter().enumerate() {
        *freq.entry(fmt_perm(p)).or_default() += 1;
        table.push(vec![i.to_string(), fmt_perm(p), rs_pair(p)?.0.shape().to_string()]);
    }
    let mut result = json!({
        "n": n,
        "pi": pi.label,
        "phi": hphi.label,
        "model": if involution { "involution" } else { "permutation" },
        "samples": samples,
        "seed": seed,
        "streams": streams,
        "perms": perms.iter().map(|p| fmt_perm(p)).collect::<Vec<_>>(),
        "frequencies": freq,
    });
    if involution {
        let total: usize = perms.iter().map(|p| two_cycles(p)).sum();
        result["mean_two_cycles"] = json!(if perms.is_empty() { 0.0 } else { total as f64 / perms.len() as f64 });
    } else {
        result["psi"] = json!(hpsi.label);
    }
    Ok(Outcome::new("rs", result, table))
}
