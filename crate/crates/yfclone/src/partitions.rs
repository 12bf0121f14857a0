//! Set partitions, Charlier histoires, composition splitting and the
//! multiplicity matrix.

use crate::error::{Error, Result};
use crate::words::{enumerate_level, fib_of, dominance, total_hike, FibWord};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    Opener,
    Closer,
    Singleton,
    Transient,
}

/// A set partition of {1..n}. Blocks are sorted internally and ordered by
/// their minima.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SetPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

/// Per-element data from the left-to-right sweep. Index 0 is element 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sweep {
    pub roles: Vec<Role>,
    /// `#Γ_i`
    pub height: Vec<usize>,
    /// `γ_i`, defined on closers and transients.
    pub gamma: Vec<Option<usize>>,
}

impl SetPartition {
    pub fn from_blocks(mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        let n: usize = blocks.iter().map(|b| b.len()).sum();
        let mut seen = vec![false; n + 1];
        for b in &mut blocks {
            if b.is_empty() {
                return Err(Error::Malformed("empty block".into()));
            }
            b.sort_unstable();
            for &x in b.iter() {
                if x == 0 || x > n || seen[x] {
                    return Err(Error::Malformed(format!("element {x} is repeated or out of 1..{n}")));
                }
                seen[x] = true;
            }
        }
        blocks.sort_by_key(|b| b[0]);
        Ok(Self { n, blocks })
    }

    /// From a restricted-growth string with labels starting at 0.
    pub fn from_rgs(rgs: &[usize]) -> Result<Self> {
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (i, &r) in rgs.iter().enumerate() {
            if r == blocks.len() {
                blocks.push(vec![i + 1]);
            } else if r < blocks.len() {
                blocks[r].push(i + 1);
            } else {
                return Err(Error::Malformed(format!("not a restricted growth string at {i}")));
            }
        }
        Ok(Self { n: rgs.len(), blocks })
    }

    pub fn singletons(n: usize) -> Self {
        Self { n, blocks: (1..=n).map(|i| vec![i]).collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn rgs(&self) -> Vec<usize> {
        let mut r = vec![0; self.n];
        for (j, b) in self.blocks.iter().enumerate() {
            for &x in b {
                r[x - 1] = j;
            }
        }
        r
    }

    /// `succ[i]` is the next element of the block of `i` (1-based, 0 if none).
    fn links(&self) -> (Vec<usize>, Vec<usize>) {
        let mut pred = vec![0; self.n + 1];
        let mut succ = vec![0; self.n + 1];
        for b in &self.blocks {
            for w in b.windows(2) {
                succ[w[0]] = w[1];
                pred[w[1]] = w[0];
            }
        }
        (pred, succ)
    }

    pub fn pred(&self, i: usize) -> Option<usize> {
        let (pred, _) = self.links();
        Some(pred[i]).filter(|&p| p > 0)
    }

    pub fn succ(&self, i: usize) -> Option<usize> {
        let (_, succ) = self.links();
        Some(succ[i]).filter(|&s| s > 0)
    }

    /// Arcs `(a, b)` with `a` preceding `b`.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        self.blocks.iter().flat_map(|b| b.windows(2).map(|w| (w[0], w[1]))).collect()
    }

    pub fn role(&self, i: usize) -> Role {
        let (pred, succ) = self.links();
        role_of(pred[i] > 0, succ[i] > 0)
    }

    /// `Γ_i`: openers or transients `a < i` whose successor is `≥ i`.
    pub fn gamma_set(&self, i: usize) -> Vec<usize> {
        let (_, succ) = self.links();
        (1..i).filter(|&a| succ[a] >= i).collect()
    }

    pub fn sweep(&self) -> Sweep {
        let (pred, succ) = self.links();
        let mut open: Vec<usize> = Vec::new();
        let mut roles = Vec::with_capacity(self.n);
        let mut height = Vec::with_capacity(self.n);
        let mut gamma = Vec::with_capacity(self.n);
        for i in 1..=self.n {
            roles.push(role_of(pred[i] > 0, succ[i] > 0));
            height.push(open.len());
            if pred[i] > 0 {
                let pos = open.iter().position(|&a| a == pred[i]).expect("predecessor is open");
                gamma.push(Some(pos + 1));
                open.remove(pos);
            } else {
                gamma.push(None);
            }
            if succ[i] > 0 {
                open.push(i);
            }
        }
        Sweep { roles, height, gamma }
    }

    pub fn is_noncrossing(&self) -> bool {
        let arcs = self.arcs();
        for (x, &(a, b)) in arcs.iter().enumerate() {
            for &(c, d) in &arcs[x + 1..] {
                if (a < c && c < b && b < d) || (c < a && a < d && d < b) {
                    return false;
                }
            }
        }
        true
    }

    /// Nesting pairs counted directly over arc pairs.
    pub fn nest_direct(&self) -> usize {
        let arcs = self.arcs();
        let mut count = 0;
        for &(a, b) in &arcs {
            for &(c, d) in &arcs {
                if a < c && d < b {
                    count += 1;
                }
            }
        }
        count
    }

    pub fn stats(&self) -> PartitionStats {
        stats(self)
    }
}

fn role_of(has_pred: bool, has_succ: bool) -> Role {
    match (has_pred, has_succ) {
        (false, false) => Role::Singleton,
        (false, true) => Role::Opener,
        (true, false) => Role::Closer,
        (true, true) => Role::Transient,
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.n >= 10 { "," } else { "" };
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep))
            .collect();
        write!(f, "{}", parts.join("|"))
    }
}

impl fmt::Debug for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Parses "135|29|4|678". Blocks containing a comma are read as
/// comma-separated integers, otherwise one digit per element.
impl FromStr for SetPartition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "empty" {
            return Ok(Self::singletons(0));
        }
        let mut blocks = Vec::new();
        let mut pos = 0;
        for part in s.split('|') {
            let part = part.trim();
            let mut b = Vec::new();
            if part.contains(',') {
                for tok in part.split(',') {
                    let x = tok.trim().parse::<usize>().map_err(|e| Error::Parse { pos, msg: e.to_string() })?;
                    b.push(x);
                }
            } else {
                for (k, ch) in part.chars().enumerate() {
                    let x = ch.to_digit(10).ok_or_else(|| Error::Parse { pos: pos + k, msg: format!("unexpected '{ch}'") })?;
                    b.push(x as usize);
                }
            }
            pos += part.len() + 1;
            blocks.push(b);
        }
        Self::from_blocks(blocks)
    }
}

/// Restricted-growth-string enumeration of Π(n).
pub struct Partitions {
    rgs: Vec<usize>,
    maxes: Vec<usize>,
    done: bool,
}

impl Iterator for Partitions {
    type Item = SetPartition;
    fn next(&mut self) -> Option<SetPartition> {
        if self.done {
            return None;
        }
        let out = SetPartition::from_rgs(&self.rgs).expect("valid rgs");
        // advance: rightmost position that can still grow
        let n = self.rgs.len();
        let mut i = n;
        loop {
            if i <= 1 {
                self.done = true;
                break;
            }
            i -= 1;
            let bound = self.maxes[i - 1] + 1;
            if self.rgs[i] < bound {
                self.rgs[i] += 1;
                self.maxes[i] = self.maxes[i - 1].max(self.rgs[i]);
                for j in i + 1..n {
                    self.rgs[j] = 0;
                    self.maxes[j] = self.maxes[i];
                }
                break;
            }
        }
        Some(out)
    }
}

pub fn enumerate_partitions(n: usize) -> Partitions {
    Partitions { rgs: vec![0; n], maxes: vec![0; n], done: false }
}

pub fn enumerate_noncrossing(n: usize) -> impl Iterator<Item = SetPartition> {
    enumerate_partitions(n).filter(|p| p.is_noncrossing())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionStats {
    /// `ℓ_0..ℓ_p`
    pub ell: Vec<usize>,
    /// `g_1..g_p` stored at `g[0..p]`.
    pub g: Vec<usize>,
    pub gbar1: usize,
    pub nest: usize,
    pub area: usize,
    pub blocks: usize,
    pub blocks_star: usize,
    pub singletons: usize,
}

impl PartitionStats {
    /// `g_m` for `m ≥ 1`, zero past the end.
    pub fn g_at(&self, m: usize) -> usize {
        if m == 0 {
            0
        } else {
            self.g.get(m - 1).copied().unwrap_or(0)
        }
    }

    pub fn ell_at(&self, k: usize) -> usize {
        self.ell.get(k).copied().unwrap_or(0)
    }
}

pub fn stats(pi: &SetPartition) -> PartitionStats {
    let sw = pi.sweep();
    let p = sw.height.iter().copied().max().unwrap_or(0);
    let mut ell = vec![0; p + 1];
    let mut g = vec![0; p];
    let mut gbar1 = 0;
    for i in 0..pi.n {
        ell[sw.height[i]] += 1;
        if let Some(m) = sw.gamma[i] {
            g[m - 1] += 1;
            if m == 1 && sw.roles[i] == Role::Closer {
                gbar1 += 1;
            }
        }
    }
    if pi.n == 0 {
        ell.clear();
    }
    let nest = g.iter().enumerate().map(|(k, &gk)| k * gk).sum();
    let area = sw.height.iter().sum();
    let blocks = pi.blocks.len();
    let singletons = pi.blocks.iter().filter(|b| b.len() == 1).count();
    PartitionStats { ell, g, gbar1, nest, area, blocks, blocks_star: blocks - singletons, singletons }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Step {
    Up,
    Flat(usize),
    Down(usize),
}

/// A colored Motzkin path.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Histoire {
    pub steps: Vec<Step>,
}

impl Histoire {
    /// Starting height of every step; checks colors and endpoints.
    pub fn heights(&self) -> Result<Vec<usize>> {
        let mut h = 0usize;
        let mut out = Vec::with_capacity(self.steps.len());
        for (i, s) in self.steps.iter().enumerate() {
            out.push(h);
            match *s {
                Step::Up => h += 1,
                Step::Flat(c) => {
                    if c > h {
                        return Err(Error::Malformed(format!("flat step {} at height {h} has color {c}", i + 1)));
                    }
                }
                Step::Down(c) => {
                    if h == 0 {
                        return Err(Error::Malformed(format!("down step {} below the axis", i + 1)));
                    }
                    if c == 0 || c > h {
                        return Err(Error::Malformed(format!("down step {} at height {h} has color {c}", i + 1)));
                    }
                    h -= 1;
                }
            }
        }
        if h != 0 {
            return Err(Error::Malformed(format!("path ends at height {h}")));
        }
        Ok(out)
    }

    /// Euclidean area under the uncolored path.
    pub fn area(&self) -> Result<usize> {
        let hs = self.heights()?;
        // twice the trapezoid sum, halved at the end
        let mut twice = 0;
        for (s, &h) in self.steps.iter().zip(&hs) {
            twice += match s {
                Step::Up => 2 * h + 1,
                Step::Flat(_) => 2 * h,
                Step::Down(_) => 2 * h - 1,
            };
        }
        Ok(twice / 2)
    }
}

impl fmt::Display for Histoire {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            match s {
                Step::Up => write!(f, "U")?,
                Step::Flat(c) => write!(f, "F{c}")?,
                Step::Down(c) => write!(f, "D{c}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Histoire {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Histoire {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let chars: Vec<char> = s.trim().chars().collect();
        let mut steps = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let kind = chars[i];
            let start = i;
            i += 1;
            if kind == 'U' {
                steps.push(Step::Up);
                continue;
            }
            if kind != 'F' && kind != 'D' {
                return Err(Error::Parse { pos: start, msg: format!("unexpected '{kind}'") });
            }
            let mut c = String::new();
            while i < chars.len() && chars[i].is_ascii_digit() {
                c.push(chars[i]);
                i += 1;
            }
            let c: usize = c.parse().map_err(|_| Error::Parse { pos: start + 1, msg: "missing color".into() })?;
            steps.push(if kind == 'F' { Step::Flat(c) } else { Step::Down(c) });
        }
        let h = Histoire { steps };
        h.heights()?;
        Ok(h)
    }
}

pub fn histoire(pi: &SetPartition) -> Histoire {
    let sw = pi.sweep();
    let steps = (0..pi.n)
        .map(|i| match sw.roles[i] {
            Role::Opener => Step::Up,
            Role::Singleton => Step::Flat(0),
            Role::Transient => Step::Flat(sw.gamma[i].unwrap()),
            Role::Closer => Step::Down(sw.gamma[i].unwrap()),
        })
        .collect();
    Histoire { steps }
}

pub fn histoire_inverse(h: &Histoire) -> Result<SetPartition> {
    h.heights()?;
    let n = h.steps.len();
    let mut block_of = vec![usize::MAX; n + 1];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut open: Vec<usize> = Vec::new();
    for (k, s) in h.steps.iter().enumerate() {
        let i = k + 1;
        match *s {
            Step::Up => {
                block_of[i] = blocks.len();
                blocks.push(vec![i]);
                open.push(i);
            }
            Step::Flat(0) => {
                block_of[i] = blocks.len();
                blocks.push(vec![i]);
            }
            Step::Flat(c) | Step::Down(c) => {
                let a = open.remove(c - 1);
                block_of[i] = block_of[a];
                blocks[block_of[a]].push(i);
                if matches!(s, Step::Flat(_)) {
                    open.push(i);
                }
            }
        }
    }
    SetPartition::from_blocks(blocks)
}

/// All compositions of `n`, in lexicographic order of parts.
pub fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for mut rest in compositions(n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositionSplit {
    pub kappa: Vec<usize>,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub dep_b: Vec<usize>,
    pub u: FibWord,
    pub v: FibWord,
}

fn check_composition(c: &[usize]) -> Result<()> {
    if c.is_empty() || c.contains(&0) {
        return Err(Error::Malformed(format!("not a composition: {c:?}")));
    }
    Ok(())
}

/// `A(ϰ)` and `B(ϰ)`. For odd `m ≥ 5` the first part of `B` also collects
/// the last part of `ϰ`, which keeps `B` a composition of `n` and agrees
/// with the `m = 3` case.
pub fn split_parts(kappa: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
    check_composition(kappa)?;
    let m = kappa.len();
    let k = |i: usize| kappa[i - 1];
    if m <= 2 {
        return Ok((kappa.to_vec(), kappa.to_vec()));
    }
    if m == 3 {
        return Ok((vec![k(1), k(2) + k(3)], vec![k(1) + k(3), k(2)]));
    }
    let p = m / 2;
    let mut a = vec![k(1)];
    for j in 2..=p {
        a.push(k(2 * j - 2) + k(2 * j - 1));
    }
    a.push(if m == 2 * p { k(2 * p) } else { k(2 * p) + k(2 * p + 1) });
    let odd_sum: usize = (1..=m).step_by(2).map(k).sum();
    let mut b = vec![odd_sum + 1 - p];
    for j in 2..=p {
        b.push(1 + k(2 * j - 2));
    }
    b.push(k(2 * p));
    Ok((a, b))
}

pub fn split(kappa: &[usize]) -> Result<CompositionSplit> {
    let (a, b) = split_parts(kappa)?;
    let dep_b = depletion(&b)?;
    let u = fib_of(&a)?;
    let v = fib_of(&b)?;
    Ok(CompositionSplit { kappa: kappa.to_vec(), a, b, dep_b, u, v })
}

pub fn depletion(s: &[usize]) -> Result<Vec<usize>> {
    check_composition(s)?;
    let p = s.len();
    if p == 1 {
        return Ok(vec![]);
    }
    let mut d: Vec<usize> = s[1..p - 1].iter().map(|&x| x - 1).collect();
    d.push(s[p - 1]);
    if d.contains(&0) {
        return Err(Error::NotFibonacci(s.to_vec()));
    }
    Ok(d)
}

/// The even-odd composition `z(π)` of a non-crossing partition.
pub fn z_map(pi: &SetPartition) -> Result<Vec<usize>> {
    if !pi.is_noncrossing() {
        return Err(Error::Requires(format!("a non-crossing partition, got {pi}")));
    }
    Ok(z_of_stats(&pi.stats()))
}

pub(crate) fn z_of_stats(st: &PartitionStats) -> Vec<usize> {
    let p = st.ell.len() - 1;
    let mut z = vec![st.ell[0]];
    for k in 1..=p {
        z.push(st.g[k - 1]);
        z.push(st.ell[k] - st.g[k - 1]);
    }
    if z.last() == Some(&0) {
        z.pop();
    }
    z
}

/// A non-crossing partition with `z(π) = ϰ`, built from the deterministic
/// step inventory.
pub fn z_witness(kappa: &[usize]) -> Result<SetPartition> {
    let (ell, b) = split_parts(kappa)?;
    let g = depletion(&b)?;
    let n: usize = kappa.iter().sum();
    let p = ell.len() - 1;
    if p == 0 {
        return Ok(SetPartition::singletons(n));
    }
    let gk = |k: usize| if k == 0 { 0 } else { g[k - 1] };
    // up[k]: steps from k-1 to k; down[k]: steps from k+1 to k
    let mut up = vec![0usize; p + 2];
    let mut down = vec![0usize; p + 2];
    let mut single = vec![0usize; p + 1];
    let mut trans = vec![0usize; p + 1];
    for k in (1..=p).rev() {
        let avail = ell[k - 1].checked_sub(gk(k - 1)).ok_or_else(|| Error::Malformed(format!("{kappa:?}")))?;
        let d = gk(k).min(avail);
        up[k] = d;
        down[k - 1] = d;
        trans[k] = gk(k) - d;
        single[k] = ell[k]
            .checked_sub(gk(k) + down[k])
            .ok_or_else(|| Error::Malformed(format!("inventory underflow for {kappa:?}")))?;
    }
    single[0] = ell[0] - down[0];

    let mut steps = Vec::with_capacity(n);
    let mut h = 0usize;
    loop {
        if up[h + 1] > 0 {
            up[h + 1] -= 1;
            steps.push(Step::Up);
            h += 1;
            continue;
        }
        steps.extend(std::iter::repeat_n(Step::Flat(0), single[h]));
        single[h] = 0;
        steps.extend(std::iter::repeat_n(Step::Flat(h), trans[h]));
        trans[h] = 0;
        if h == 0 {
            break;
        }
        down[h - 1] -= 1;
        steps.push(Step::Down(h));
        h -= 1;
    }
    if steps.len() != n {
        return Err(Error::Malformed(format!("inventory for {kappa:?} does not close")));
    }
    histoire_inverse(&Histoire { steps })
}

/// `N(ϰ)`: the number of `π ∈ NC(n)` with `z(π) = ϰ`.
pub fn composition_multiplicities(n: usize) -> BTreeMap<Vec<usize>, u64> {
    let mut out = BTreeMap::new();
    for pi in enumerate_noncrossing(n) {
        *out.entry(z_of_stats(&pi.stats())).or_insert(0) += 1;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityMatrix {
    pub words: Vec<FibWord>,
    pub entries: Vec<Vec<u64>>,
}

impl MultiplicityMatrix {
    pub fn index(&self, w: &FibWord) -> Option<usize> {
        self.words.binary_search(w).ok()
    }

    pub fn get(&self, u: &FibWord, v: &FibWord) -> u64 {
        match (self.index(u), self.index(v)) {
            (Some(i), Some(j)) => self.entries[i][j],
            _ => 0,
        }
    }

    pub fn total(&self) -> u64 {
        self.entries.iter().flatten().sum()
    }

    pub fn nonzero(&self) -> usize {
        self.entries.iter().flatten().filter(|&&x| x > 0).count()
    }
}

pub fn multiplicity_matrix(n: usize) -> Result<MultiplicityMatrix> {
    let words = enumerate_level(n);
    let idx: HashMap<FibWord, usize> = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    let mut entries = vec![vec![0u64; words.len()]; words.len()];
    for (kappa, count) in composition_multiplicities(n) {
        let s = split(&kappa)?;
        entries[idx[&s.u]][idx[&s.v]] += count;
    }
    Ok(MultiplicityMatrix { words, entries })
}

/// Whether `ϰ ↦ (u(ϰ), v(ϰ))` is injective on compositions of `n`.
pub fn split_is_injective(n: usize) -> Result<bool> {
    let mut seen = std::collections::HashSet::new();
    for kappa in compositions(n) {
        let s = split(&kappa)?;
        if !seen.insert((s.u, s.v)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Outcome of the upper-triangularity probe on `N_n`.
#[derive(Clone, Debug, Default)]
pub struct TriangularityProbe {
    pub upper_triangular: bool,
    pub dominance: bool,
    pub equal_hike: bool,
    pub violations: Vec<(FibWord, FibWord)>,
}

pub fn triangularity_probe(m: &MultiplicityMatrix) -> TriangularityProbe {
    let mut r = TriangularityProbe { upper_triangular: true, dominance: true, equal_hike: true, violations: vec![] };
    for (i, u) in m.words.iter().enumerate() {
        for (j, v) in m.words.iter().enumerate() {
            if m.entries[i][j] == 0 {
                continue;
            }
            let tri = i <= j;
            let dom = dominance(u, v);
            let hike = total_hike(u) == total_hike(v);
            r.upper_triangular &= tri;
            r.dominance &= dom;
            r.equal_hike &= hike;
            if !(tri && dom && hike) {
                r.violations.push((u.clone(), v.clone()));
            }
        }
    }
    r
}
