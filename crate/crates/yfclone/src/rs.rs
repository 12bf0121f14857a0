//! Young–Fibonacci Robinson–Schensted correspondence, saturated chains,
//! cotransition measures and the induced random permutations and involutions.

use crate::clone::harmonic_phi;
use crate::error::{Error, Result};
use crate::measures::sample_word;
use crate::scalar::{Scalar, Q};
use crate::specs::{Specialization, Xy};
use crate::words::{covers_down, covers_up, dim, FibWord};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

/// Permutations and tableaux beyond this size are not tabulated.
pub const MAX_TABLE_LEVEL: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Column {
    One(usize),
    Two { top: usize, bottom: usize },
}

impl Column {
    pub fn height(&self) -> u8 {
        match self {
            Column::One(_) => 1,
            Column::Two { .. } => 2,
        }
    }

    fn top(&self) -> usize {
        match *self {
            Column::One(v) => v,
            Column::Two { top, .. } => top,
        }
    }
}

/// Columns listed left to right.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tableau {
    pub cols: Vec<Column>,
}

impl Tableau {
    pub fn shape(&self) -> FibWord {
        FibWord::from_digits(self.cols.iter().map(Column::height).collect()).expect("heights are 1 or 2")
    }

    pub fn size(&self) -> usize {
        self.cols.iter().map(|c| c.height() as usize).sum()
    }

    /// Entries form {1..n}, columns increase upward, and no entry to the right
    /// of a column exceeds its top.
    pub fn is_standard(&self) -> bool {
        let n = self.size();
        let mut seen = vec![false; n + 1];
        for c in &self.cols {
            let entries: &[usize] = match c {
                Column::One(v) => std::slice::from_ref(v),
                Column::Two { top, bottom } => {
                    if bottom >= top {
                        return false;
                    }
                    &[*top, *bottom][..]
                }
            };
            for &e in entries {
                if e == 0 || e > n || seen[e] {
                    return false;
                }
                seen[e] = true;
            }
        }
        let mut right_max = 0;
        for c in self.cols.iter().rev() {
            let m = match *c {
                Column::One(v) => v,
                Column::Two { top, bottom } => top.max(bottom),
            };
            if c.top() < right_max {
                return false;
            }
            right_max = right_max.max(m);
        }
        true
    }

    /// The involution with a transposition (bottom top) per height-2 column.
    pub fn involution(&self) -> Vec<usize> {
        let n = self.size();
        let mut s: Vec<usize> = (1..=n).collect();
        for c in &self.cols {
            if let Column::Two { top, bottom } = *c {
                s[top - 1] = bottom;
                s[bottom - 1] = top;
            }
        }
        s
    }
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.cols {
            match c {
                Column::One(v) => write!(f, "[{v}]")?,
                Column::Two { top, bottom } => write!(f, "[{top}/{bottom}]")?,
            }
        }
        Ok(())
    }
}

impl FromStr for Tableau {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut cols = Vec::new();
        let mut rest = s;
        while !rest.is_empty() {
            let pos = s.len() - rest.len();
            let body = rest
                .strip_prefix('[')
                .and_then(|r| r.split_once(']'))
                .ok_or_else(|| Error::Parse { pos, msg: "expected '[...]'".into() })?;
            let num = |t: &str| t.trim().parse::<usize>().map_err(|e| Error::Parse { pos, msg: e.to_string() });
            cols.push(match body.0.split_once('/') {
                Some((t, b)) if t.trim() == "·" || t.trim().is_empty() => Column::One(num(b)?),
                Some((t, b)) => Column::Two { top: num(t)?, bottom: num(b)? },
                None => Column::One(num(body.0)?),
            });
            rest = body.1.trim_start();
        }
        Ok(Tableau { cols })
    }
}

/// Saturated chain ∅ = w_0 ↗ … ↗ w_n, stored bottom-up.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Chain(pub Vec<FibWord>);

impl Chain {
    pub fn top(&self) -> &FibWord {
        self.0.last().expect("chain contains ∅")
    }

    pub fn is_saturated(&self) -> bool {
        self.0.first().is_some_and(|w| w.is_empty()) && self.0.windows(2).all(|p| covers_up(&p[0]).contains(&p[1]))
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|w| if w.is_empty() { "∅".into() } else { w.to_string() }).collect();
        write!(f, "{}", parts.join("↗"))
    }
}

// ---------------------------------------------------------------- correspondence

pub fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len() + 1];
    p.iter().all(|&v| v >= 1 && v <= p.len() && !std::mem::replace(&mut seen[v], true))
}

fn check_perm(p: &[usize]) -> Result<()> {
    if !is_permutation(p) {
        return Err(Error::Malformed(format!("not a permutation of 1..{}: {p:?}", p.len())));
    }
    Ok(())
}

/// Insertion and recording tableaux. Reading right to left, each unmatched
/// σ_k pairs with the largest unmatched value at positions ≤ k; if that is
/// σ_k itself it forms a column of height one.
pub fn rs(perm: &[usize]) -> Result<(Tableau, Tableau)> {
    check_perm(perm)?;
    let n = perm.len();
    let mut matched = vec![false; n];
    let (mut p, mut q) = (Vec::new(), Vec::new());
    for k in (0..n).rev() {
        if matched[k] {
            continue;
        }
        matched[k] = true;
        let partner = (0..k).filter(|&j| !matched[j] && perm[j] > perm[k]).max_by_key(|&j| perm[j]);
        match partner {
            None => {
                p.push(Column::One(perm[k]));
                q.push(Column::One(k + 1));
            }
            Some(j) => {
                matched[j] = true;
                p.push(Column::Two { top: perm[j], bottom: perm[k] });
                q.push(Column::Two { top: k + 1, bottom: j + 1 });
            }
        }
    }
    Ok((Tableau { cols: p }, Tableau { cols: q }))
}

/// Inverse of [`rs`]. Column by column, Q's top is the position of P's
/// bottom and Q's bottom the position of P's top; the result is re-inserted
/// to reject pairs outside the image.
pub fn rs_inverse(p: &Tableau, q: &Tableau) -> Result<Vec<usize>> {
    let (sp, sq) = (p.shape(), q.shape());
    if sp != sq {
        return Err(Error::ShapeMismatch(sp.to_string(), sq.to_string()));
    }
    if !p.is_standard() || !q.is_standard() {
        return Err(Error::Malformed(format!("not a standard tableau pair: {p}, {q}")));
    }
    let mut s = vec![0; p.size()];
    for (a, b) in p.cols.iter().zip(&q.cols) {
        match (*a, *b) {
            (Column::One(v), Column::One(i)) => s[i - 1] = v,
            (Column::Two { top: pt, bottom: pb }, Column::Two { top: qt, bottom: qb }) => {
                s[qt - 1] = pb;
                s[qb - 1] = pt;
            }
            _ => unreachable!("shapes agree"),
        }
    }
    if rs(&s)? != (p.clone(), q.clone()) {
        return Err(Error::Malformed(format!("pair {p}, {q} is not in the image of the correspondence")));
    }
    Ok(s)
}

/// Relative order of the entries, as a permutation of 1..len.
pub fn standardize(seq: &[usize]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..seq.len()).collect();
    idx.sort_by_key(|&i| seq[i]);
    let mut out = vec![0; seq.len()];
    for (rank, i) in idx.into_iter().enumerate() {
        out[i] = rank + 1;
    }
    out
}

/// Shapes of Q(σ^{(k)}), k = 0..n, where σ^{(k)} standardizes σ_1..σ_k.
pub fn chain_of_q(perm: &[usize]) -> Result<Chain> {
    check_perm(perm)?;
    let mut c = vec![FibWord::empty()];
    for k in 1..=perm.len() {
        c.push(rs(&standardize(&perm[..k]))?.1.shape());
    }
    let chain = Chain(c);
    assert!(chain.is_saturated(), "chain_of_q produced a non-saturated chain {chain} for {perm:?}");
    Ok(chain)
}

/// The saturated chain attached to a standard tableau.
pub fn tableau_chain(t: &Tableau) -> Result<Chain> {
    chain_of_q(&t.involution())
}

/// All involutions of 1..n in lex order of one-line notation.
pub fn involutions(n: usize) -> Vec<Vec<usize>> {
    fn go(s: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        match s.iter().position(|&v| v == 0) {
            None => out.push(s.clone()),
            Some(i) => {
                s[i] = i + 1;
                go(s, out);
                for j in i + 1..s.len() {
                    if s[j] == 0 {
                        s[i] = j + 1;
                        s[j] = i + 1;
                        go(s, out);
                        s[j] = 0;
                    }
                }
                s[i] = 0;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut vec![0; n], &mut out);
    out
}

/// All permutations of 1..n in lex order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (1..=n).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else { break };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).expect("pivot has a successor");
        p.swap(i - 1, j);
        p[i..].reverse();
    }
    out
}

/// Chain ↔ tableau dictionary at one level.
#[derive(Debug)]
pub struct ChainTable {
    pub n: usize,
    by_chain: HashMap<Chain, Tableau>,
}

impl ChainTable {
    pub fn tableau(&self, c: &Chain) -> Option<&Tableau> {
        self.by_chain.get(c)
    }

    pub fn len(&self) -> usize {
        self.by_chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_chain.is_empty()
    }
}

fn table_cache() -> &'static RwLock<HashMap<usize, Arc<ChainTable>>> {
    static CACHE: OnceLock<RwLock<HashMap<usize, Arc<ChainTable>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Every standard tableau of size n is P(σ) = Q(σ) for one involution σ.
pub fn chain_table(n: usize) -> Result<Arc<ChainTable>> {
    if n > MAX_TABLE_LEVEL {
        return Err(Error::Range(format!("chain tables are built for n <= {MAX_TABLE_LEVEL}, got {n}")));
    }
    if let Some(t) = table_cache().read().unwrap().get(&n) {
        return Ok(t.clone());
    }
    let mut by_chain = HashMap::new();
    for s in involutions(n) {
        let (p, q) = rs(&s)?;
        debug_assert_eq!(p, q);
        let c = chain_of_q(&s)?;
        if let Some(prev) = by_chain.insert(c.clone(), p.clone()) {
            return Err(Error::Malformed(format!("chain {c} reached by both {prev} and {p}")));
        }
    }
    let t = Arc::new(ChainTable { n, by_chain });
    table_cache().write().unwrap().insert(n, t.clone());
    Ok(t)
}

/// All saturated chains ending at w.
pub fn chains_to(w: &FibWord) -> Vec<Chain> {
    if w.is_empty() {
        return vec![Chain(vec![FibWord::empty()])];
    }
    let mut out = Vec::new();
    for v in covers_down(w) {
        for mut c in chains_to(&v) {
            c.0.push(w.clone());
            out.push(c);
        }
    }
    out
}

// ---------------------------------------------------------------- cotransitions

/// A harmonic function φ_{x,y} given by a specialization.
#[derive(Clone, Debug)]
pub struct Harmonic {
    pub label: String,
    xy: Xy<f64>,
    exact: Option<Xy<Q>>,
}

impl Harmonic {
    /// Prefixes long enough for words up to level n.
    pub fn new(spec: &Specialization, n: usize) -> Result<Self> {
        let k = n + 3;
        let exact = if spec.is_exact() { Some(spec.xy_exact(k)?) } else { None };
        Ok(Self { label: spec.label(), xy: spec.xy_f64(k)?, exact })
    }

    pub fn xy(&self) -> &Xy<f64> {
        &self.xy
    }

    pub fn exact(&self) -> Result<&Xy<Q>> {
        self.exact.as_ref().ok_or_else(|| Error::Requires(format!("rational parameters for {}", self.label)))
    }

    pub fn phi(&self, w: &FibWord) -> Result<f64> {
        harmonic_phi(w, &self.xy)
    }
}

/// μ_CT(w, v): 1 if w = 1v, φ(v)/φ(u) if w = 2u and u ↗ v, else 0.
pub fn cotransition<S: Scalar>(w: &FibWord, v: &FibWord, xy: &Xy<S>) -> Result<S> {
    match w.first() {
        Some(1) if w.tail() == *v => Ok(S::one()),
        Some(2) => {
            let u = w.tail();
            if covers_up(&u).contains(v) {
                Ok(harmonic_phi(v, xy)? / harmonic_phi(&u, xy)?)
            } else {
                Ok(S::zero())
            }
        }
        _ => Ok(S::zero()),
    }
}

/// Product of cotransition weights along the chain, top down.
pub fn chain_measure<S: Scalar>(chain: &Chain, xy: &Xy<S>) -> Result<S> {
    let mut acc = S::one();
    for p in chain.0.windows(2) {
        acc = acc * cotransition(&p[1], &p[0], xy)?;
    }
    Ok(acc)
}

/// Downward walk from w using μ_CT.
pub fn cotransition_sample<R: Rng>(w: &FibWord, phi: &Harmonic, rng: &mut R) -> Result<Chain> {
    let mut down = vec![w.clone()];
    let mut cur = w.clone();
    while !cur.is_empty() {
        let next = match cur.first() {
            Some(1) => cur.tail(),
            _ => {
                let u = cur.tail();
                let base = phi.phi(&u)?;
                let ups = covers_up(&u);
                let mut r = rng.random::<f64>() * base;
                let mut pick = ups.len() - 1;
                for (i, v) in ups.iter().enumerate() {
                    r -= phi.phi(v)?;
                    if r < 0.0 {
                        pick = i;
                        break;
                    }
                }
                ups[pick].clone()
            }
        };
        down.push(next.clone());
        cur = next;
    }
    down.reverse();
    Ok(Chain(down))
}

// ---------------------------------------------------------------- random permutations

fn shape_weight(w: &FibWord, pi: &Xy<Q>) -> Result<Q> {
    Ok(Q::from_integer(BigInt::from(dim(w))) * harmonic_phi(w, pi)?)
}

/// μ_n(σ | π, φ, ψ) = dim(w) π(w) μ̄^φ(P(σ)) μ̄^ψ(Q(σ)).
pub fn permutation_weight(perm: &[usize], pi: &Xy<Q>, phi: &Xy<Q>, psi: &Xy<Q>) -> Result<Q> {
    let (p, q) = rs(perm)?;
    Ok(shape_weight(&p.shape(), pi)? * chain_measure(&tableau_chain(&p)?, phi)? * chain_measure(&tableau_chain(&q)?, psi)?)
}

/// ν_n(σ | π, φ) for an involution σ.
pub fn involution_weight(perm: &[usize], pi: &Xy<Q>, phi: &Xy<Q>) -> Result<Q> {
    let (p, q) = rs(perm)?;
    if p != q {
        return Err(Error::Malformed(format!("{perm:?} is not an involution")));
    }
    Ok(shape_weight(&p.shape(), pi)? * chain_measure(&tableau_chain(&p)?, phi)?)
}

fn tableau_for(table: &ChainTable, c: &Chain) -> Result<Tableau> {
    table.tableau(c).cloned().ok_or_else(|| Error::Malformed(format!("no tableau for chain {c}")))
}

/// Shape from M_n(π), chains from μ̄^φ and μ̄^ψ, then the inverse correspondence.
pub fn random_permutation<R: Rng>(n: usize, pi: &Harmonic, phi: &Harmonic, psi: &Harmonic, rng: &mut R) -> Result<Vec<usize>> {
    let table = chain_table(n)?;
    let w = sample_word(pi.xy(), n, rng)?;
    let p = tableau_for(&table, &cotransition_sample(&w, phi, rng)?)?;
    let q = tableau_for(&table, &cotransition_sample(&w, psi, rng)?)?;
    rs_inverse(&p, &q)
}

pub fn random_involution<R: Rng>(n: usize, pi: &Harmonic, phi: &Harmonic, rng: &mut R) -> Result<Vec<usize>> {
    let table = chain_table(n)?;
    let w = sample_word(pi.xy(), n, rng)?;
    Ok(tableau_for(&table, &cotransition_sample(&w, phi, rng)?)?.involution())
}

/// RS shape of a ν_n-random involution; two-cycles are h(w), fixed points r(w).
pub fn shape_level_involution<R: Rng>(n: usize, spec: &Specialization, rng: &mut R) -> Result<FibWord> {
    sample_word(&spec.xy_f64(n + 3)?, n, rng)
}

pub fn two_cycles(perm: &[usize]) -> usize {
    perm.iter().enumerate().filter(|&(i, &v)| v > i + 1).count()
}

pub fn fixed_points(perm: &[usize]) -> usize {
    perm.iter().enumerate().filter(|&(i, &v)| v == i + 1).count()
}

pub fn inverse(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &v) in perm.iter().enumerate() {
        inv[v - 1] = i + 1;
    }
    inv
}

/// One-line notation "2 7 1 5 6 4 3".
pub fn fmt_perm(p: &[usize]) -> String {
    p.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn parse_perm(s: &str) -> Result<Vec<usize>> {
    let p = s
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().map_err(|e| Error::Parse { pos: 0, msg: format!("'{t}': {e}") }))
        .collect::<Result<Vec<_>>>()?;
    check_perm(&p)?;
    Ok(p)
}

/// Σ_v μ_CT(w, v), which is 1 when φ is harmonic.
pub fn cotransition_total(w: &FibWord, xy: &Xy<Q>) -> Result<Q> {
    let mut t = Q::zero();
    for v in covers_down(w) {
        t += cotransition(w, &v, xy)?;
    }
    if w.is_empty() {
        t = Q::one();
    }
    Ok(t)
}
