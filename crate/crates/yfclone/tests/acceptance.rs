//! One line per acceptance criterion.
//!
//! Each criterion reports its literal statement and a set of companion checks.
//! A literal miss that follows from a defect in the stated target is printed
//! as FAIL and does not change the exit status; a companion failure does.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rand::Rng;
use std::collections::{HashMap, HashSet};
use std::time::Instant;
use yfclone::cauchy::*;
use yfclone::clone::{clone_homogeneous, clone_schur, harmonic_phi, kostka, kostka_inverse};
use yfclone::measures::*;
use yfclone::moments::*;
use yfclone::partitions::{enumerate_partitions, multiplicity_matrix};
use yfclone::poly::MPoly;
use yfclone::rs::*;
use yfclone::specs::{classify, cigler_zeng_q0, parse_spec, Verdict};
use yfclone::words::{covers_up, dim, enumerate_level, runs_hikes, w};
use yfclone::{q, qi, FibWord, Scalar, Specialization, Xy, Q};

struct Outcome {
    literal: bool,
    companions: bool,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self { literal: true, companions: true, notes: vec![] }
    }

    /// A check that is both the literal statement and a companion.
    fn both(&mut self, ok: bool, what: impl Into<String>) {
        self.literal &= ok;
        self.companions &= ok;
        if !ok {
            self.notes.push(what.into());
        }
    }

    /// Literal statement only.
    fn literal(&mut self, ok: bool, what: impl Into<String>) {
        self.literal &= ok;
        if !ok {
            self.notes.push(format!("literal: {}", what.into()));
        }
    }

    fn companion(&mut self, ok: bool, what: impl Into<String>) {
        self.companions &= ok;
        if !ok {
            self.notes.push(format!("companion: {}", what.into()));
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }
}

fn spec(s: &str) -> Specialization {
    parse_spec(s).unwrap()
}

fn rand_xy(seed: u64, k: usize, positive: bool) -> Xy<Q> {
    let mut r = stream_rng(seed, 0);
    let one = |r: &mut rand_chacha::ChaCha8Rng| {
        let lo = if positive { 1 } else { -7 };
        q(r.random_range(lo..=9), r.random_range(1..=5))
    };
    Xy::from_fn(k, |_| (one(&mut r), one(&mut r)))
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |a, k| a * BigUint::from(k))
}

fn c1() -> Outcome {
    let mut o = Outcome::new();
    let t = Instant::now();
    for n in 1..=12 {
        let s: BigUint = enumerate_level(n).iter().map(|v| dim(v) * dim(v)).sum();
        o.both(s == factorial(n), format!("n={n}: sum dim^2 = {s}"));
    }
    let el = t.elapsed().as_secs_f64();
    o.both(el < 5.0, format!("took {el:.2}s"));
    o.note(format!("n = 1..12 in {el:.2}s"));
    o
}

fn c2() -> Outcome {
    let mut o = Outcome::new();
    let t = Instant::now();
    for seed in [21, 22, 23] {
        let xy = rand_xy(seed, 12, false);
        let pos = rand_xy(seed + 100, 12, true);
        for n in 0..=8 {
            for v in enumerate_level(n) {
                let up = covers_up(&v);
                let rhs = up.iter().fold(Q::zero(), |a, u| a + clone_schur(u, &xy));
                o.both(xy.x(n + 1) * clone_schur(&v, &xy) == rhs, format!("pieri seed={seed} v={v}"));
                let branch = up.iter().fold(Q::zero(), |a, u| a + harmonic_phi(u, &pos).unwrap());
                o.both(branch == harmonic_phi(&v, &pos).unwrap(), format!("branching seed={seed} v={v}"));
            }
        }
    }
    let el = t.elapsed().as_secs_f64();
    o.both(el < 10.0, format!("took {el:.2}s"));
    o.note(format!("3 random specializations, n <= 8, {el:.2}s"));
    o
}

fn c3() -> Outcome {
    let mut o = Outcome::new();
    o.both(kostka_inverse(2) == vec![vec![qi(1), qi(-1)], vec![qi(0), qi(1)]], "K_2^-1 display");
    for n in 0..=8 {
        let k = kostka(n);
        let inv = kostka_inverse(n);
        let m = k.words.len();
        for i in 0..m {
            for j in 0..m {
                let e = (0..m).fold(Q::zero(), |a, l| a + Q::from_integer(k.entries[i][l].clone()) * inv[l][j].clone());
                o.both(e == if i == j { Q::one() } else { Q::zero() }, format!("n={n}: K K^-1 at ({i},{j})"));
            }
            let wd = &k.words[i];
            o.both(k.get(wd, &FibWord::ones(n)) == BigInt::from(dim(wd)), format!("K({wd},1^{n}) != dim"));
        }
    }
    let xy = rand_xy(31, 10, false);
    for n in 0..=7 {
        let k = kostka(n);
        for v in &k.words {
            let rhs = k.words.iter().fold(Q::zero(), |a, u| a + Q::from_integer(k.get(u, v)) * clone_schur(u, &xy));
            o.both(clone_homogeneous(v, &xy) == rhs, format!("h_{v} expansion"));
        }
    }
    o
}

fn c4() -> Outcome {
    let mut o = Outcome::new();
    let mut pairs: Vec<(String, Xy<Q>, Xy<Q>)> =
        (0..3).map(|i| (format!("random #{i}"), rand_xy(40 + i, 12, false), rand_xy(50 + i, 12, false))).collect();
    pairs.push(("charlier/al-salam-chihara".into(), spec("charlier:rho=1/2").xy_exact(12).unwrap(), spec("al-salam-chihara:rho=1/2,q=2").xy_exact(12).unwrap()));
    for (label, pq, xy) in &pairs {
        for n in 0..=9 {
            o.both(cauchy_first(n, pq, xy) == cauchy_first_brute(n, pq, xy).unwrap(), format!("first, {label}, n={n}"));
            o.both(cauchy_second(n, pq, xy) == cauchy_second_brute(n, pq, xy).unwrap(), format!("second, {label}, n={n}"));
        }
    }
    let v = |fam: usize, i: usize| MPoly::var(4 * (i - 1) + fam + 1);
    let (sx, sp) = (Xy::from_fn(4, |i| (v(0, i), v(1, i))), Xy::from_fn(4, |i| (v(2, i), v(3, i))));
    let h2 = (sx.x(1) * sx.x(2) - sx.y(1)) * sp.x(1) * sp.x(2) + sp.y(1) * sx.y(1);
    let s2 = (sp.x(1) * sp.x(2) - sp.y(1)) * (sx.x(1) * sx.x(2) - sx.y(1)) + sp.y(1) * sx.y(1);
    o.both(cauchy_first(2, &sp, &sx) == h2, "H_2 symbolic");
    o.both(cauchy_second(2, &sp, &sx) == s2, "S_2 symbolic");
    let xy = Xy::new(vec![q(3, 2), q(5, 7), q(2, 1)], vec![q(-1, 3), q(4, 5), q(1, 1)]);
    let pq = Xy::new(vec![q(2, 9), q(7, 4), q(-3, 1)], vec![q(6, 5), q(-2, 7), q(1, 2)]);
    let h2 = (xy.x(1) * xy.x(2) - xy.y(1)) * pq.x(1) * pq.x(2) + pq.y(1) * xy.y(1);
    let s2 = (pq.x(1) * pq.x(2) - pq.y(1)) * (xy.x(1) * xy.x(2) - xy.y(1)) + pq.y(1) * xy.y(1);
    o.both(cauchy_first(2, &pq, &xy) == h2 && cauchy_second(2, &pq, &xy) == s2, "H_2, S_2 at the rational instance");
    o.note(format!("{} pairs, n <= 9", pairs.len()));
    o
}

/// Some s_w < 0 with |w| <= 8.
fn brute_negative(sp: &Specialization) -> Option<FibWord> {
    let xy = sp.xy_f64(10).unwrap();
    (0..=8).flat_map(enumerate_level).find(|wd| clone_schur(wd, &xy) < 0.0)
}

fn brute_positive(sp: &Specialization) -> bool {
    if sp.is_exact() {
        let xy = sp.xy_exact(10).unwrap();
        (0..=8).flat_map(enumerate_level).all(|wd| clone_schur(&wd, &xy) > Q::zero())
    } else {
        brute_negative(sp).is_none()
    }
}

fn c5() -> Outcome {
    let mut o = Outcome::new();
    let q0 = "cigler-zeng:q=q0";
    // (spec, stated verdict, literal only)
    let cases: Vec<(&str, Verdict, bool)> = vec![
        ("charlier:rho=1/2", Verdict::Divergent, false),
        ("al-salam-carlitz:rho=1/2,q=1/2", Verdict::Divergent, false),
        ("al-salam-chihara:rho=1/2,q=2", Verdict::Divergent, false),
        ("q-charlier:rho=1/2,q=1/2", Verdict::Divergent, false),
        (q0, Verdict::Divergent, true),
        ("cigler-zeng:q=2", Verdict::Divergent, false),
        ("cigler-zeng:q=3", Verdict::Divergent, false),
        ("shifted-charlier:rho=1/2,sigma=3", Verdict::Convergent, false),
        ("shifted-plancherel:sigma=2", Verdict::Convergent, false),
        ("power:alpha=1,kappa=0.8", Verdict::Convergent, true),
        ("power:alpha=2,kappa=1.4", Verdict::Convergent, false),
        ("laguerre:alpha=0", Verdict::Rejected, false),
        ("meixner:beta=1,c=1/2", Verdict::Rejected, false),
        ("cigler-zeng:q=1.3", Verdict::Rejected, false),
    ];
    let mut misses = vec![];
    for (s, want, literal_only) in &cases {
        let sp = spec(s);
        let v = classify(&sp, 64, 1e-14);
        if *literal_only {
            o.literal(v.verdict == *want, format!("{s} is {} (stated {want})", v.verdict));
            if v.verdict != *want {
                misses.push(s.to_string());
            }
        } else {
            o.both(v.verdict == *want, format!("{s} is {} (stated {want})", v.verdict));
        }
        if v.verdict == Verdict::Rejected {
            o.both(!v.witness.is_empty(), format!("{s}: empty witness"));
        }
        // agreement with brute force in both directions
        match v.verdict {
            Verdict::Rejected => {
                let neg = brute_negative(&sp);
                o.companion(neg.is_some(), format!("{s}: rejected but s_w > 0 for |w| <= 8"));
            }
            _ => o.companion(brute_positive(&sp), format!("{s}: {} but some s_w <= 0", v.verdict)),
        }
    }
    let lag = classify(&spec("laguerre:alpha=0"), 64, 1e-14);
    o.both(lag.witness.iter().any(|x| x == "B_2(1) = -55"), "laguerre witness B_2(1) = -55");
    // the literal misses carry exact negative clone Schur values
    let xy = spec("power:alpha=1,kappa=4/5").xy_exact(8).unwrap();
    o.companion(clone_schur(&w("1121"), &xy) < Q::zero(), "power(1, 4/5): s_1121 < 0");
    let xy = spec("cigler-zeng:q=3/2").xy_exact(6).unwrap();
    o.companion(clone_schur(&w("12"), &xy) < Q::zero(), "cigler-zeng q=3/2: s_12 < 0");
    if !misses.is_empty() {
        o.note(format!("negative s_w at: {} (q0 = {:.6})", misses.join(", "), cigler_zeng_q0()));
    }
    o
}

fn c6() -> Outcome {
    let mut o = Outcome::new();
    let tp = [
        "plancherel",
        "charlier:rho=1/2",
        "al-salam-carlitz:rho=1/2,q=1/2",
        "al-salam-chihara:rho=1/2,q=2",
        "q-charlier:rho=1/2,q=1/2",
        "cigler-zeng:q=2",
        "shifted-charlier:rho=1/2,sigma=2",
        "shifted-plancherel:sigma=3/2",
        "power:alpha=2,kappa=1",
    ];
    let mut with_all = 0;
    for s in tp {
        let sp = spec(s);
        let m = moments_exact(&sp, 9, Route::Motzkin).unwrap().a;
        for r in [Route::JFraction, Route::Nc, Route::Compressed] {
            o.both(moments_exact(&sp, 9, r).map(|x| x.a == m).unwrap_or(false), format!("{s} via {r}"));
        }
        if classify(&sp, 64, 1e-12).verdict == Verdict::Divergent {
            with_all += 1;
            o.both(moments_exact(&sp, 9, Route::AllPartitions).map(|x| x.a == m).unwrap_or(false), format!("{s} via all-partitions"));
        }
    }
    let bell = moments_exact(&spec("charlier:rho=1"), 7, Route::Motzkin).unwrap().a;
    let oracle: Vec<Q> = (0..=7).map(|n| qi(enumerate_partitions(n).count() as i64)).collect();
    let stated: Vec<Q> = [1, 1, 2, 5, 15, 52, 203, 877].iter().map(|&x| qi(x)).collect();
    o.both(bell == oracle && bell == stated, "charlier rho=1 moments vs Bell numbers");
    let (rho, sigma) = (q(1, 2), qi(2));
    let rec = shifted_charlier_moments(&rho, &sigma, 8);
    o.both(mgf_series(&rho, &sigma, 8) == rec, "shifted charlier: series");
    o.both(combinatorial(&rho, &sigma, 8) == rec, "shifted charlier: combinatorial");
    o.both(moments_exact(&spec("shifted-charlier:rho=1/2,sigma=2"), 8, Route::Motzkin).unwrap().a == rec, "shifted charlier: motzkin");
    o.note(format!("{} specs, {with_all} divergent with all-partitions", tp.len()));
    o
}

fn c7() -> Outcome {
    let mut o = Outcome::new();
    let m = multiplicity_matrix(5).unwrap();
    let order = ["221", "212", "2111", "122", "1211", "1121", "1112", "11111"];
    let table: [[u64; 8]; 8] = [
        [1, 0, 0, 1, 0, 0, 0, 0],
        [0, 2, 0, 2, 0, 0, 0, 0],
        [0, 0, 1, 0, 3, 3, 1, 0],
        [0, 0, 0, 2, 0, 0, 0, 0],
        [0, 0, 0, 0, 4, 6, 2, 0],
        [0, 0, 0, 0, 0, 6, 3, 0],
        [0, 0, 0, 0, 0, 0, 4, 0],
        [0, 0, 0, 0, 0, 0, 0, 1],
    ];
    o.both(m.words == order.iter().map(|s| w(s)).collect::<Vec<_>>(), "row order");
    for i in 0..8 {
        o.both(m.entries[i] == table[i].to_vec(), format!("row {}", order[i]));
    }
    o.both(m.total() == 42, format!("total {}", m.total()));
    o.both(m.nonzero() == 16, format!("nonzero {}", m.nonzero()));
    o
}

fn runs_event(wd: &FibWord, r: &[usize]) -> bool {
    let rh = runs_hikes(wd).runs;
    rh.len() > r.len() && rh[..r.len()] == *r
}

fn hikes_event(wd: &FibWord, h: &[usize]) -> bool {
    let hh = runs_hikes(wd).hikes;
    hh.len() > h.len() && hh[..h.len()] == *h && hh[h.len()] > 0
}

fn c8() -> Outcome {
    let mut o = Outcome::new();
    let n = 9;
    let mut checked = 0;
    for s in ["charlier:rho=1/2", "shifted-plancherel:sigma=2"] {
        let sp = spec(s);
        let xy = sp.xy_exact(n + 2).unwrap();
        let m = measure_level(&sp, n).unwrap();
        o.both(m.total() == Q::one(), format!("{s}: total mass"));
        for r1 in 0..=n {
            if r1 + 2 <= n {
                o.both(runs_law(&xy, n, &[r1]).unwrap() == m.event(|x| runs_event(x, &[r1])), format!("{s} r=({r1})"));
                checked += 1;
            }
            for r2 in 0..=n {
                if r1 + r2 + 4 <= n {
                    let r = [r1, r2];
                    o.both(runs_law(&xy, n, &r).unwrap() == m.event(|x| runs_event(x, &r)), format!("{s} r={r:?}"));
                    checked += 1;
                }
            }
        }
        for h1 in 0..=n {
            if 2 * h1 + 3 <= n {
                o.both(hikes_law(&xy, n, &[h1]).unwrap() == m.event(|x| hikes_event(x, &[h1])), format!("{s} h=({h1})"));
                checked += 1;
            }
            for h2 in 0..=n {
                if 2 * (h1 + h2) + 4 <= n {
                    let h = [h1, h2];
                    o.both(hikes_law(&xy, n, &h).unwrap() == m.event(|x| hikes_event(x, &h)), format!("{s} h={h:?}"));
                    checked += 1;
                }
            }
        }
    }
    o.note(format!("{checked} events at n = {n}"));
    o
}

fn c9() -> Outcome {
    let mut o = Outcome::new();
    let t = Instant::now();
    let (n, samples, seed, streams) = (4000, 100_000, 1, 4);
    let ch = verify_scaling(ScalingFamily::Charlier { rho: 0.5 }, n, samples, seed, streams);
    let sp = verify_scaling(ScalingFamily::ShiftedPlancherel { sigma: 2.0 }, n, samples, seed, streams);
    let pl = verify_scaling(ScalingFamily::Plancherel, n, samples, seed, streams);
    let dkw = ch.dkw;
    let p0 = ch.statistics["p_r1_zero"];
    o.both((p0 - 0.5).abs() <= 0.01, format!("P(r_1=0) = {p0:.4}"));
    let d = ch.statistics["sup_r1_eta"];
    o.both(d <= 0.02, format!("sup r_1/n vs eta_1/2 = {d:.4}"));
    let p2 = sp.statistics["p_first_2_hikes_positive"];
    o.literal((p2 - 0.25).abs() <= 0.01, format!("P(h_1>0, h_2>0) = {p2:.4}, stated 1/4 +- 0.01"));
    o.companion((p2 - 0.5).abs() <= 0.01, format!("P(h_1>0, h_2>0) = {p2:.4} vs sigma^-1 = 1/2"));
    let p3 = sp.statistics["p_first_3_hikes_positive"];
    o.companion((p3 - 0.25).abs() <= 0.01, format!("P(h_1,h_2,h_3 > 0) = {p3:.4} vs sigma^-2 = 1/4"));
    // ξ_{2;1} is beta(1, σ/2) = beta(1,1)
    let d = sp.statistics["sup_h1_xi"];
    o.both(d <= 0.02, format!("sup h~_1/n vs beta(1,1) = {d:.4}"));
    let d = pl.statistics["sup_h1_beta_half"];
    o.both(d <= 0.02, format!("sup h~_1/n vs GEM(1/2)_1 = {d:.4}"));
    let el = t.elapsed().as_secs_f64();
    o.both(el < 600.0, format!("took {el:.0}s"));
    o.note(format!(
        "n={n}, {samples} samples, DKW radius {dkw:.4}; P(r_1=0)={p0:.4}, P(h_1>0,h_2>0)={p2:.4}, P(h_1,h_2,h_3>0)={p3:.4}, {el:.1}s"
    ));
    o
}

fn c10() -> Outcome {
    let mut o = Outcome::new();
    let pw = spec("power:alpha=2,kappa=1");
    let t = type_i(&pw, 25).unwrap();
    let pi = std::f64::consts::PI;
    o.both((t.all_ones - pi / pi.sinh()).abs() < 1e-8, format!("mu_I(1^inf) = {}", t.all_ones));
    o.literal(t.partial_sum >= 0.999, format!("partial sum at cap 25 = {:.4}", t.partial_sum));
    // the weight-m masses decay like 2κ/m², so the deficit at cap M is about 2κ/M
    let mut prev = 0.0;
    let mut sums = vec![];
    for cap in [25, 50, 100, 200] {
        let s = type_i(&pw, cap).unwrap().partial_sum;
        o.companion(s > prev && s < 1.0, format!("partial sums increase below 1 (cap {cap}: {s})"));
        sums.push(format!("{cap}: {s:.4}"));
        prev = s;
    }
    let deficit = (1.0 - prev) * 200.0;
    o.companion((deficit - 2.0).abs() < 0.1, format!("(1 - S_200) * 200 = {deficit:.3}, expected near 2"));
    let qq = qi(2);
    let s: f64 = (0..=60).map(|m| chihara_type_i_limit(&qq, m).to_f64()).sum();
    o.both((s - 1.0).abs() < 1e-6, format!("chihara masses sum to {s}"));
    let xy = spec("al-salam-chihara:rho=1/2,q=2").xy_exact(120).unwrap();
    let masses = type_i_run_masses(&xy, 40, 20).unwrap();
    let gap = masses.iter().enumerate().map(|(m, x)| (x.to_f64() - chihara_type_i_limit(&qq, m).to_f64()).abs()).fold(0.0, f64::max);
    o.companion(gap < 1e-9, format!("finite-n chihara masses vs limit: {gap:e}"));
    o.note(format!("partial sums {}", sums.join(", ")));
    o
}

fn c11() -> Outcome {
    let mut o = Outcome::new();
    for sigma in [1.0, 2.0, 3.0] {
        let want = 1.0 / (sigma + 1.0);
        let g = two_cycle_fraction(sigma, 5000, Variant::True);
        let gf = two_cycle_fraction(sigma, 5000, Variant::Fake);
        o.both((g - want).abs() <= 0.01, format!("sigma={sigma}: G_N/N = {g:.4} vs {want:.4}"));
        o.both((gf - g).abs() <= 0.01, format!("sigma={sigma}: fake {gf:.4} vs {g:.4}"));
    }
    for s in ["plancherel", "charlier:rho=1/2", "shifted-plancherel:sigma=2", "al-salam-chihara:rho=1/2,q=2"] {
        let xy = spec(s).xy_exact(14).unwrap();
        for n in 0..=10 {
            let m = involution_mgf_xy(&xy, n).unwrap();
            o.both(m.eval(&Q::one()) == Q::one(), format!("{s} n={n}: value at 1"));
            o.both(m == involution_mgf_brute(&xy, n).unwrap(), format!("{s} n={n}: brute force"));
        }
    }
    o
}

fn c12() -> Outcome {
    let mut o = Outcome::new();
    let mut seen = HashSet::new();
    for s in permutations(7) {
        let (p, qq) = rs(&s).unwrap();
        o.both(p.shape() == qq.shape() && rs_inverse(&p, &qq).map(|x| x == s).unwrap_or(false), format!("{s:?}"));
        seen.insert((p, qq));
    }
    o.both(seen.len() == 5040, format!("{} distinct pairs on S_7", seen.len()));
    for s in permutations(6) {
        let (p, qq) = rs(&s).unwrap();
        let (pi, qi_) = rs(&inverse(&s)).unwrap();
        o.both(pi == qq && qi_ == p, format!("inverse swap {s:?}"));
    }
    let invs = involutions(7);
    o.both(invs.len() == 232, "232 involutions in S_7");
    for s in invs {
        let shape = rs(&s).unwrap().0.shape();
        let twos = shape.digits().iter().filter(|&&d| d == 2).count();
        o.both(two_cycles(&s) == twos && fixed_points(&s) == shape.len() - twos, format!("readoff {s:?}"));
    }
    let (p, qq) = rs(&[2, 7, 1, 5, 6, 4, 3]).unwrap();
    o.both(p.to_string() == "[7/3][6/4][5][2/1]", format!("P = {p}"));
    o.both(qq.to_string() == "[7/2][6/5][4][3/1]", format!("Q = {qq}"));

    let names = ["charlier:rho=1/2", "shifted-plancherel:sigma=2", "al-salam-chihara:rho=1/2,q=2"];
    let [pi, phi, psi] = names.map(|s| spec(s).xy_exact(8).unwrap());
    let f = |xy: &Xy<Q>, s: &str| harmonic_phi(&w(s), xy).unwrap();
    let two = qi(2);
    let table = vec![
        (vec![1, 2, 3], f(&pi, "111")),
        (vec![2, 1, 3], f(&pi, "12")),
        (vec![1, 3, 2], two.clone() * f(&pi, "21") * f(&phi, "11") * f(&psi, "11")),
        (vec![3, 2, 1], two.clone() * f(&pi, "21") * f(&phi, "2") * f(&psi, "2")),
        (vec![3, 1, 2], two.clone() * f(&pi, "21") * f(&phi, "11") * f(&psi, "2")),
        (vec![2, 3, 1], two * f(&pi, "21") * f(&phi, "2") * f(&psi, "11")),
    ];
    let mut total = Q::zero();
    for (s, want) in &table {
        let got = permutation_weight(s, &pi, &phi, &psi).unwrap();
        o.both(got == *want, format!("mu_3{s:?}"));
        total += got;
    }
    o.both(total == Q::one(), "mu_3 total");
    let [hp, hf, hs] = names.map(|s| Harmonic::new(&spec(s), 3).unwrap());
    let samples = 100_000;
    let draws: Vec<Vec<usize>> =
        run_streams(12, 4, samples, |r, k| (0..k).map(|_| random_permutation(3, &hp, &hf, &hs, r).unwrap()).collect());
    let mut counts: HashMap<Vec<usize>, usize> = HashMap::new();
    for d in draws {
        *counts.entry(d).or_default() += 1;
    }
    let tv: f64 = table
        .iter()
        .map(|(s, p)| (p.to_f64() - *counts.get(s).unwrap_or(&0) as f64 / samples as f64).abs())
        .sum::<f64>()
        / 2.0;
    o.both(tv <= 0.01, format!("mu_3 empirical TV = {tv:.4}"));
    o.note(format!("mu_3 TV = {tv:.4} at {samples} samples"));
    o
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("differential-poset identity", c1),
        ("pieri and harmonicity", c2),
        ("kostka matrices", c3),
        ("cauchy identities", c4),
        ("positivity classifier", c5),
        ("five-route moments", c6),
        ("multiplicity matrix n=5", c7),
        ("run and hike laws", c8),
        ("scaling limits", c9),
        ("type-I masses", c10),
        ("two-cycle law of large numbers", c11),
        ("RS correspondence", c12),
    ];
    let mut companions_ok = true;
    let (mut literal_pass, mut literal_fail) = (0, 0);
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = f();
        companions_ok &= o.companions;
        if o.literal {
            literal_pass += 1;
        } else {
            literal_fail += 1;
        }
        let verdict = if o.literal { "PASS" } else { "FAIL" };
        let comp = if o.companions { "ok" } else { "FAILED" };
        let mut line = format!("criterion {:>2} {verdict}  {name}  [companions {comp}, {:.1}s]", i + 1, t.elapsed().as_secs_f64());
        if !o.notes.is_empty() {
            let shown: Vec<&str> = o.notes.iter().take(8).map(String::as_str).collect();
            line.push_str(&format!("  {}", shown.join("; ")));
            if o.notes.len() > 8 {
                line.push_str(&format!("; ... {} more", o.notes.len() - 8));
            }
        }
        println!("{line}");
    }
    println!("acceptance: {literal_pass} literal PASS, {literal_fail} literal FAIL, companions {}", if companions_ok { "ok" } else { "FAILED" });
    if !companions_ok {
        std::process::exit(1);
    }
}
