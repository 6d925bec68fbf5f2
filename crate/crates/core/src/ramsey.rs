//! Arrays indexed by m-element subsets of `[N]`, homogeneous-set extraction
//! and finite R-limit / iterated-limit estimates.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial, colex, colex_rank, colex_within, is_strictly_increasing, IndexSet};
use crate::error::{Error, Result};
use crate::exact::ratio_str;

/// Default node budget for the exact homogeneous-set search.
pub const DEFAULT_BUDGET: u64 = 1_000_000;
/// Largest number of entries a [`SimplexArray`] may hold.
pub const MAX_SIMPLEX_ENTRIES: u128 = 10_000_000;
/// Default stabilization window for iterated limits.
pub const DEFAULT_WINDOW: usize = 3;

fn check_shape(m: usize, n: usize) -> Result<usize> {
    if m == 0 || n == 0 {
        return Err(Error::Precondition("m and N must be positive".into()));
    }
    if m > n {
        return Err(Error::Precondition(format!("m = {m} exceeds N = {n}")));
    }
    let size = binomial(n, m);
    if size > MAX_SIMPLEX_ENTRIES {
        return Err(Error::Guard {
            guard: "simplex array entries",
            requested: size,
            limit: MAX_SIMPLEX_ENTRIES,
        });
    }
    Ok(size as usize)
}

fn check_subset(set: &[usize], n: usize) -> Result<()> {
    if !is_strictly_increasing(set) || set.iter().any(|&k| k == 0 || k > n) {
        return Err(Error::InvalidIndexSet(format!(
            "expected a strictly increasing subset of 1..={n}"
        )));
    }
    Ok(())
}

/// `(x_α)_{α ∈ [N]^{(m)}}`, stored by colex rank.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawArray", into = "RawArray")]
pub struct SimplexArray {
    m: usize,
    n: usize,
    values: Vec<BigRational>,
}

#[derive(Serialize, Deserialize)]
struct RawEntry {
    alpha: IndexSet,
    #[serde(with = "ratio_str")]
    x: BigRational,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawArray {
    m: usize,
    #[serde(rename = "N")]
    n: usize,
    values: Vec<RawEntry>,
}

impl TryFrom<RawArray> for SimplexArray {
    type Error = Error;

    fn try_from(raw: RawArray) -> Result<Self> {
        let size = check_shape(raw.m, raw.n)?;
        if raw.values.len() != size {
            return Err(Error::Precondition(format!(
                "expected {size} entries, got {}",
                raw.values.len()
            )));
        }
        let mut values: Vec<Option<BigRational>> = vec![None; size];
        for e in raw.values {
            if e.alpha.len() != raw.m {
                return Err(Error::InvalidIndexSet(format!("{:?} is not an {}-set", e.alpha, raw.m)));
            }
            check_subset(&e.alpha, raw.n)?;
            let slot = &mut values[colex_rank(&e.alpha)];
            if slot.is_some() {
                return Err(Error::InvalidIndexSet(format!("duplicate entry {:?}", e.alpha)));
            }
            *slot = Some(e.x);
        }
        Ok(Self {
            m: raw.m,
            n: raw.n,
            values: values.into_iter().map(|v| v.expect("all ranks filled")).collect(),
        })
    }
}

impl From<SimplexArray> for RawArray {
    fn from(a: SimplexArray) -> Self {
        let values = colex(a.n, a.m)
            .zip(a.values)
            .map(|(alpha, x)| RawEntry { alpha, x })
            .collect();
        RawArray { m: a.m, n: a.n, values }
    }
}

impl SimplexArray {
    pub fn from_fn(m: usize, n: usize, mut f: impl FnMut(&[usize]) -> Result<BigRational>) -> Result<Self> {
        check_shape(m, n)?;
        let values = colex(n, m).map(|a| f(&a)).collect::<Result<Vec<_>>>()?;
        Ok(Self { m, n, values })
    }

    pub fn constant(m: usize, n: usize, c: BigRational) -> Result<Self> {
        Self::from_fn(m, n, |_| Ok(c.clone()))
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `x_α` for a sorted α.
    pub fn get(&self, alpha: &[usize]) -> &BigRational {
        debug_assert!(alpha.len() == self.m && is_strictly_increasing(alpha));
        &self.values[colex_rank(alpha)]
    }

    pub fn entries(&self) -> impl Iterator<Item = (IndexSet, &BigRational)> {
        colex(self.n, self.m).zip(&self.values)
    }

    /// The entries over `S^{(m)}`, relabelled onto `[|S|]`.
    pub fn restrict(&self, set: &[usize]) -> Result<SimplexArray> {
        check_subset(set, self.n)?;
        check_shape(self.m, set.len())?;
        let values = colex_within(set, self.m).map(|a| self.get(&a).clone()).collect();
        Ok(SimplexArray {
            m: self.m,
            n: set.len(),
            values,
        })
    }

    /// `α ↦ x_{{k} ∪ α}` for `α ⊆ ground ∩ (k, N]`, relabelled; returns the
    /// ground elements used and the order-`(m−1)` array.
    pub fn slice(&self, k: usize, ground: &[usize]) -> Result<(Vec<usize>, SimplexArray)> {
        if self.m < 2 {
            return Err(Error::Precondition("slicing needs order at least 2".into()));
        }
        check_subset(ground, self.n)?;
        let above: Vec<usize> = ground.iter().copied().filter(|&j| j > k).collect();
        if above.len() < self.m - 1 {
            return Err(Error::Precondition(format!(
                "slice at {k} has {} elements above it, need {}",
                above.len(),
                self.m - 1
            )));
        }
        let mut buf = Vec::with_capacity(self.m);
        let values = colex_within(&above, self.m - 1)
            .map(|a| {
                buf.clear();
                buf.push(k);
                buf.extend_from_slice(&a);
                self.get(&buf).clone()
            })
            .collect();
        let arr = SimplexArray {
            m: self.m - 1,
            n: above.len(),
            values,
        };
        Ok((above, arr))
    }
}

/// A colouring of `[N]^{(m)}` with colours `0..r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    m: usize,
    #[serde(rename = "N")]
    n: usize,
    r: u32,
    colors: Vec<u32>,
}

impl Coloring {
    pub fn from_fn(m: usize, n: usize, mut f: impl FnMut(&[usize]) -> u32) -> Result<Self> {
        check_shape(m, n)?;
        let colors: Vec<u32> = colex(n, m).map(|a| f(&a)).collect();
        let r = colors.iter().max().map_or(0, |&c| c + 1);
        Ok(Self { m, n, r, colors })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn colors(&self) -> u32 {
        self.r
    }

    pub fn color(&self, alpha: &[usize]) -> u32 {
        self.colors[colex_rank(alpha)]
    }
}

/// A colouring by quantization cells, with `cells[id]` the cell index of colour `id`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quantized {
    pub coloring: Coloring,
    pub cells: Vec<BigInt>,
}

/// Colours `α` by the half-open cell `[cε, (c+1)ε)` containing `x_α`, so an
/// exact multiple `x = cε` lands in cell `c`. Colour ids rank the occupied
/// cells in ascending order.
pub fn color_quantize(arr: &SimplexArray, epsilon: &BigRational) -> Result<Quantized> {
    if !epsilon.is_positive() {
        return Err(Error::Precondition("ε must be positive".into()));
    }
    let cell_of = |x: &BigRational| -> BigInt {
        let q = x / epsilon;
        q.numer().div_floor(q.denom())
    };
    let raw: Vec<BigInt> = arr.values.iter().map(cell_of).collect();
    let mut cells = raw.clone();
    cells.sort();
    cells.dedup();
    let colors = raw
        .iter()
        .map(|c| cells.binary_search(c).expect("present") as u32)
        .collect();
    Ok(Quantized {
        coloring: Coloring {
            m: arr.m,
            n: arr.n,
            r: cells.len() as u32,
            colors,
        },
        cells,
    })
}

/// `S` with `S^{(m)}` inside one colour class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomogeneousCert {
    pub set: Vec<usize>,
    pub color: u32,
    pub size: usize,
}

impl HomogeneousCert {
    /// Exhaustive re-check over `S^{(m)}`.
    pub fn verify(&self, col: &Coloring) -> bool {
        self.size == self.set.len()
            && check_subset(&self.set, col.n).is_ok()
            && colex_within(&self.set, col.m).all(|a| col.color(&a) == self.color)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomogeneousSearch {
    pub cert: HomogeneousCert,
    /// The branch-and-bound finished, so `cert.size` is the maximum.
    pub exact: bool,
    pub nodes: u64,
    pub target_met: bool,
}

/// Orders candidates: larger size first, then lex-smaller set, then smaller colour.
fn better(a: &HomogeneousCert, b: &HomogeneousCert) -> bool {
    (a.size, &b.set, b.color) > (b.size, &a.set, a.color)
}

struct Search<'a> {
    col: &'a Coloring,
    color: u32,
    budget: u64,
    nodes: u64,
    best: Option<HomogeneousCert>,
    found_here: bool,
    buf: Vec<usize>,
}

impl Search<'_> {
    /// Whether `y` stays a candidate after `x` joins `set`: every `(m−2)`-subset
    /// `γ` of `set` gives `γ ∪ {x, y}` the search colour.
    fn compatible(&mut self, set: &[usize], x: usize, y: usize) -> bool {
        let m = self.col.m;
        if m == 1 {
            return true;
        }
        for gamma in colex_within(set, m - 2) {
            self.buf.clear();
            self.buf.extend_from_slice(&gamma);
            self.buf.push(x);
            self.buf.push(y);
            if self.col.color(&self.buf) != self.color {
                return false;
            }
        }
        true
    }

    fn record(&mut self, set: &[usize]) {
        let cand = HomogeneousCert {
            set: set.to_vec(),
            color: self.color,
            size: set.len(),
        };
        if self.best.as_ref().is_none_or(|b| better(&cand, b)) {
            self.best = Some(cand);
            self.found_here = true;
        }
    }

    fn pruned(&self, reach: usize) -> bool {
        match &self.best {
            None => false,
            Some(b) => reach < b.size || (reach == b.size && self.found_here),
        }
    }

    /// Depth-first over increasing extensions; false when the budget ran out.
    fn dfs(&mut self, set: &mut Vec<usize>, cands: &[usize]) -> bool {
        if set.len() >= self.col.m {
            self.record(set);
        }
        for (i, &x) in cands.iter().enumerate() {
            if self.pruned(set.len() + cands.len() - i) {
                break;
            }
            if self.nodes >= self.budget {
                return false;
            }
            self.nodes += 1;
            let next: Vec<usize> = cands[i + 1..]
                .iter()
                .copied()
                .filter(|&y| self.compatible(set, x, y))
                .collect();
            set.push(x);
            let done = self.dfs(set, &next);
            set.pop();
            if !done {
                return false;
            }
        }
        true
    }
}

fn extends(col: &Coloring, set: &[usize], x: usize, color: u32) -> bool {
    let mut buf = Vec::with_capacity(col.m);
    colex_within(set, col.m - 1).all(|beta| {
        buf.clear();
        buf.extend_from_slice(&beta);
        let pos = buf.partition_point(|&b| b < x);
        buf.insert(pos, x);
        col.color(&buf) == color
    })
}

/// Greedy ascending extension from every start element and every colour.
fn greedy(col: &Coloring) -> HomogeneousCert {
    let mut best: Option<HomogeneousCert> = None;
    for color in 0..col.r {
        for start in 1..=col.n {
            let mut set = vec![start];
            for x in 1..=col.n {
                if x != start && extends(col, &set, x, color) {
                    let pos = set.partition_point(|&s| s < x);
                    set.insert(pos, x);
                }
            }
            if set.len() < col.m || !colex_within(&set, col.m).all(|a| col.color(&a) == color) {
                continue;
            }
            let cand = HomogeneousCert {
                size: set.len(),
                set,
                color,
            };
            if best.as_ref().is_none_or(|b| better(&cand, b)) {
                best = Some(cand);
            }
        }
    }
    best.unwrap_or_else(|| {
        let set: Vec<usize> = (1..=col.m).collect();
        HomogeneousCert {
            color: col.color(&set),
            size: set.len(),
            set,
        }
    })
}

/// Largest homogeneous set found, lex-smallest among equal sizes.
///
/// Runs the exact branch-and-bound (colours in order, sharing `budget` node
/// expansions) when `C(N, m) ≤ budget`; if that does not finish, the greedy
/// result is merged in. The certificate is always re-verified.
pub fn find_homogeneous(col: &Coloring, target: usize, budget: u64) -> Result<HomogeneousSearch> {
    if target < col.m {
        return Err(Error::Precondition(format!("target {target} < m = {}", col.m)));
    }
    let mut nodes = 0u64;
    let mut exact = false;
    let mut best: Option<HomogeneousCert> = None;
    if binomial(col.n, col.m) <= budget as u128 {
        exact = true;
        for color in 0..col.r {
            let cands: Vec<usize> = if col.m == 1 {
                (1..=col.n).filter(|&k| col.color(&[k]) == color).collect()
            } else {
                (1..=col.n).collect()
            };
            let mut s = Search {
                col,
                color,
                budget: budget - nodes,
                nodes: 0,
                best: best.take(),
                found_here: false,
                buf: Vec::with_capacity(col.m),
            };
            let done = s.dfs(&mut Vec::new(), &cands);
            nodes += s.nodes;
            best = s.best;
            if !done {
                exact = false;
                break;
            }
        }
    }
    if !exact {
        let g = greedy(col);
        if best.as_ref().is_none_or(|b| better(&g, b)) {
            best = Some(g);
        }
    }
    let cert = best.expect("every m-set is homogeneous");
    if !cert.verify(col) {
        return Err(Error::Precondition("homogeneous certificate failed re-verification".into()));
    }
    Ok(HomogeneousSearch {
        target_met: cert.size >= target,
        cert,
        exact,
        nodes,
    })
}

/// A finite R-limit estimate: `|x_α − value| ≤ max_deviation ≤ ε` on `S^{(m)}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RLimitEstimate {
    pub set: Vec<usize>,
    #[serde(with = "ratio_str")]
    pub value: BigRational,
    #[serde(with = "ratio_str")]
    pub epsilon: BigRational,
    #[serde(with = "ratio_str")]
    pub max_deviation: BigRational,
    /// The search proved `|S|` maximal for the quantized colouring.
    pub exact: bool,
}

impl RLimitEstimate {
    pub fn size(&self) -> usize {
        self.set.len()
    }

    /// Exhaustive re-check over `S^{(m)}`.
    pub fn verify(&self, arr: &SimplexArray) -> bool {
        if check_subset(&self.set, arr.n).is_err() || self.set.len() < arr.m || self.max_deviation > self.epsilon {
            return false;
        }
        let worst = colex_within(&self.set, arr.m)
            .map(|a| (arr.get(&a) - &self.value).abs())
            .max()
            .expect("non-empty");
        worst == self.max_deviation
    }
}

/// Quantizes at `ε/2`, extracts the largest homogeneous set and reports the
/// midpoint of the values it carries.
pub fn rlimit_estimate(arr: &SimplexArray, epsilon: &BigRational, budget: u64) -> Result<RLimitEstimate> {
    let half = epsilon / BigRational::from_integer(2.into());
    let q = color_quantize(arr, &half)?;
    let search = find_homogeneous(&q.coloring, arr.m, budget)?;
    let set = search.cert.set;
    let mut lo: Option<&BigRational> = None;
    let mut hi: Option<&BigRational> = None;
    for a in colex_within(&set, arr.m) {
        let x = arr.get(&a);
        if lo.is_none_or(|l| x < l) {
            lo = Some(x);
        }
        if hi.is_none_or(|h| x > h) {
            hi = Some(x);
        }
    }
    let (lo, hi) = (lo.expect("non-empty"), hi.expect("non-empty"));
    let two = BigRational::from_integer(2.into());
    let est = RLimitEstimate {
        value: (lo + hi) / &two,
        max_deviation: (hi - lo) / &two,
        epsilon: epsilon.clone(),
        exact: search.exact,
        set,
    };
    debug_assert!(est.verify(arr));
    Ok(est)
}

/// One level of an iterated limit, outermost first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelReport {
    pub depth: usize,
    /// Largest `max − min` over the last `w` values, across nodes at this depth.
    #[serde(with = "ratio_str")]
    pub spread: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IteratedLimit {
    pub window: usize,
    #[serde(with = "ratio_str")]
    pub value: BigRational,
    pub levels: Vec<LevelReport>,
    pub rlimit: RLimitEstimate,
    #[serde(with = "ratio_str")]
    pub tolerance: BigRational,
    pub agrees: bool,
}

struct Iterated<'a> {
    arr: &'a SimplexArray,
    set: &'a [usize],
    w: usize,
    spreads: Vec<BigRational>,
}

impl Iterated<'_> {
    /// `lim_{j→∞} f(prefix ∪ {j})`, estimated by the last candidate `j`.
    fn level(&mut self, prefix: &mut Vec<usize>, start: usize) -> BigRational {
        let depth = prefix.len();
        if depth == self.arr.m {
            return self.arr.get(prefix).clone();
        }
        let remaining = self.arr.m - depth - 1;
        let end = self.set.len() - remaining;
        let from = start.max(end.saturating_sub(self.w));
        let mut vals = Vec::with_capacity(end - from);
        for pos in from..end {
            prefix.push(self.set[pos]);
            vals.push(self.level(prefix, pos + 1));
            prefix.pop();
        }
        let lo = vals.iter().min().expect("non-empty");
        let hi = vals.iter().max().expect("non-empty");
        let spread = hi - lo;
        if spread > self.spreads[depth] {
            self.spreads[depth] = spread;
        }
        vals.pop().expect("non-empty")
    }
}

/// `lim_{j_1} ⋯ lim_{j_m} x_{{j_1,…,j_m}}` along `S`, each limit read off the
/// last `w` admissible indices, compared with the R-limit estimate on `S`.
pub fn iterated_limit(
    arr: &SimplexArray,
    set: &[usize],
    tolerance: &BigRational,
    window: usize,
    budget: u64,
) -> Result<IteratedLimit> {
    check_subset(set, arr.n)?;
    if window == 0 {
        return Err(Error::Precondition("window must be positive".into()));
    }
    if set.len() < arr.m + window {
        return Err(Error::Precondition(format!(
            "|S| = {} < m + w = {}",
            set.len(),
            arr.m + window
        )));
    }
    let mut it = Iterated {
        arr,
        set,
        w: window,
        spreads: vec![BigRational::zero(); arr.m],
    };
    let value = it.level(&mut Vec::with_capacity(arr.m), 0);
    let levels = it
        .spreads
        .into_iter()
        .enumerate()
        .map(|(depth, spread)| LevelReport { depth, spread })
        .collect();
    let restricted = arr.restrict(set)?;
    let mut rlimit = rlimit_estimate(&restricted, tolerance, budget)?;
    rlimit.set = rlimit.set.iter().map(|&p| set[p - 1]).collect();
    let agrees = (&value - &rlimit.value).abs() <= *tolerance;
    Ok(IteratedLimit {
        window,
        value,
        levels,
        rlimit,
        tolerance: tolerance.clone(),
        agrees,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceRow {
    pub k: usize,
    #[serde(with = "ratio_str")]
    pub y: BigRational,
    pub support: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecomposeReport {
    pub global: RLimitEstimate,
    pub slices: Vec<SliceRow>,
    pub window: usize,
    pub pass: bool,
}

/// Slice-then-global check for an order-`(m+1)` array: `y_k` is the R-limit
/// estimate of `α ↦ x_{{k}∪α}` for `k` in the first half of `S`; passes when
/// the last `w` of them lie within `2ε` of the global estimate on `S`.
pub fn decompose_verify(
    arr: &SimplexArray,
    set: &[usize],
    epsilon: &BigRational,
    window: usize,
    budget: u64,
) -> Result<DecomposeReport> {
    check_subset(set, arr.n)?;
    if arr.m < 2 {
        return Err(Error::Precondition("decomposition needs order at least 2".into()));
    }
    if window == 0 {
        return Err(Error::Precondition("window must be positive".into()));
    }
    let half = set.len().div_ceil(2);
    if half < window {
        return Err(Error::Precondition(format!(
            "first half of S has {half} elements, window needs {window}"
        )));
    }
    let restricted = arr.restrict(set)?;
    let mut global = rlimit_estimate(&restricted, epsilon, budget)?;
    global.set = global.set.iter().map(|&p| set[p - 1]).collect();
    let mut slices = Vec::with_capacity(half);
    for &k in &set[..half] {
        let (ground, slice) = arr.slice(k, set)?;
        let y = rlimit_estimate(&slice, epsilon, budget)?.value;
        slices.push(SliceRow {
            k,
            y,
            support: ground.len(),
        });
    }
    let bound = epsilon * BigRational::from_integer(2.into());
    let pass = slices[half - window..]
        .iter()
        .all(|r| (&r.y - &global.value).abs() <= bound);
    Ok(DecomposeReport {
        global,
        slices,
        window,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    fn inv(k: usize) -> BigRational {
        ratio(1, k as i64)
    }

    #[test]
    fn quantize_examples() {
        let c = SimplexArray::constant(2, 5, ratio(1, 3)).unwrap();
        assert_eq!(color_quantize(&c, &ratio(1, 4)).unwrap().coloring.colors(), 1);
        let vals = [ratio(0, 1), ratio(1, 4), ratio(1, 2)];
        let arr = SimplexArray::from_fn(1, 3, |a| Ok(vals[a[0] - 1].clone())).unwrap();
        let q = color_quantize(&arr, &ratio(1, 4)).unwrap();
        assert_eq!((1..=3).map(|k| q.coloring.color(&[k])).collect::<Vec<_>>(), vec![0, 1, 2]);
        let vals = [ratio(1, 8), ratio(3, 8)];
        let arr = SimplexArray::from_fn(1, 2, |a| Ok(vals[a[0] - 1].clone())).unwrap();
        let q = color_quantize(&arr, &ratio(1, 4)).unwrap();
        assert_eq!(q.cells, vec![BigInt::from(0), BigInt::from(1)]);
        assert!(color_quantize(&arr, &ratio(0, 1)).is_err());
    }

    #[test]
    fn negative_values_floor_down() {
        let arr = SimplexArray::from_fn(1, 2, |a| Ok(if a[0] == 1 { ratio(-1, 8) } else { ratio(1, 8) })).unwrap();
        let q = color_quantize(&arr, &ratio(1, 4)).unwrap();
        assert_eq!(q.cells, vec![BigInt::from(-1), BigInt::from(0)]);
    }

    #[test]
    fn homogeneous_examples() {
        let mono = Coloring::from_fn(2, 5, |_| 0).unwrap();
        let r = find_homogeneous(&mono, 5, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.cert.set, vec![1, 2, 3, 4, 5]);
        assert!(r.exact && r.target_met);
        // Pentagon: edges of the 5-cycle get colour 0, diagonals colour 1.
        let pent = Coloring::from_fn(2, 5, |a| u32::from(!matches!(a[1] - a[0], 1 | 4))).unwrap();
        let r = find_homogeneous(&pent, 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.cert.size, 2);
        assert!(r.exact && !r.target_met);
        assert_eq!(r.cert.set, vec![1, 2]);
        assert!(find_homogeneous(&pent, 1, DEFAULT_BUDGET).is_err());
    }

    #[test]
    fn lex_smallest_among_maxima() {
        // Colour 1 only on {3,4}, {3,5}, {4,5}: the triangles {1,2,x} are
        // colour 0 for every x, so {1,2,3} beats {3,4,5}.
        let col = Coloring::from_fn(2, 5, |a| u32::from(a[0] >= 3)).unwrap();
        let r = find_homogeneous(&col, 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.cert.set, vec![1, 2, 3, 4, 5][..r.cert.size].to_vec());
        let swapped = Coloring::from_fn(2, 5, |a| u32::from(a[0] < 3)).unwrap();
        let s = find_homogeneous(&swapped, 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(s.cert.size, r.cert.size);
        assert_eq!(s.cert.set, r.cert.set);
    }

    #[test]
    fn greedy_fallback_is_sound() {
        let col = Coloring::from_fn(3, 9, |a| ((a[0] + a[1] * a[2]) % 2) as u32).unwrap();
        let small = find_homogeneous(&col, 3, 10).unwrap();
        assert!(!small.exact);
        assert!(small.cert.verify(&col));
        let full = find_homogeneous(&col, 3, DEFAULT_BUDGET).unwrap();
        assert!(full.exact);
        assert!(full.cert.size >= small.cert.size);
    }

    #[test]
    fn rlimit_examples() {
        let c = SimplexArray::constant(2, 10, ratio(3, 7)).unwrap();
        let e = rlimit_estimate(&c, &ratio(1, 10), DEFAULT_BUDGET).unwrap();
        assert_eq!(e.set, (1..=10).collect::<Vec<_>>());
        assert_eq!(e.value, ratio(3, 7));
        assert!(e.max_deviation.is_zero());

        let arr = SimplexArray::from_fn(2, 32, |a| Ok(inv(a[0]))).unwrap();
        let eps = ratio(1, 8);
        let e = rlimit_estimate(&arr, &eps, DEFAULT_BUDGET).unwrap();
        assert!(e.set.iter().all(|&k| k >= 8));
        assert!(e.value.abs() <= eps);
        assert!(e.verify(&arr));
    }

    #[test]
    fn rlimit_verify_rejects_tampering() {
        let arr = SimplexArray::from_fn(2, 12, |a| Ok(inv(a[0] + a[1]))).unwrap();
        let mut e = rlimit_estimate(&arr, &ratio(1, 20), DEFAULT_BUDGET).unwrap();
        assert!(e.verify(&arr));
        e.value += ratio(1, 1000);
        assert!(!e.verify(&arr));
    }

    #[test]
    fn iterated_examples() {
        let c = SimplexArray::constant(2, 8, ratio(1, 4)).unwrap();
        let set: Vec<usize> = (1..=8).collect();
        let r = iterated_limit(&c, &set, &ratio(1, 100), DEFAULT_WINDOW, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.value, ratio(1, 4));
        assert!(r.levels.iter().all(|l| l.spread.is_zero()));
        assert!(r.agrees);

        let n = 40;
        let arr = SimplexArray::from_fn(2, n, |a| Ok(inv(a[0]) + inv(a[1]))).unwrap();
        let set: Vec<usize> = (1..=n).collect();
        let r = iterated_limit(&arr, &set, &ratio(1, 10), DEFAULT_WINDOW, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.value, inv(n - 1) + inv(n));
        assert_eq!(r.levels[1].spread, inv(n - 2) - inv(n));
        assert!(r.agrees);
        assert!(iterated_limit(&arr, &[1, 2, 3, 4], &ratio(1, 10), 3, DEFAULT_BUDGET).is_err());
    }

    #[test]
    fn decompose_examples() {
        let set: Vec<usize> = (1..=14).collect();
        let c = SimplexArray::constant(3, 14, ratio(1, 2)).unwrap();
        assert!(decompose_verify(&c, &set, &ratio(1, 10), 3, DEFAULT_BUDGET).unwrap().pass);

        let n = 24;
        let set: Vec<usize> = (1..=n).collect();
        let arr = SimplexArray::from_fn(2, n, |a| Ok(inv(a[0]))).unwrap();
        let r = decompose_verify(&arr, &set, &ratio(1, 8), 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.slices[0].y, ratio(1, 1));
        assert_eq!(r.slices.last().unwrap().y, inv(12));
        assert!(r.pass);

        let outlier = SimplexArray::from_fn(2, n, |a| Ok(ratio(i64::from(a[0] == 1), 1))).unwrap();
        let r = decompose_verify(&outlier, &set, &ratio(1, 10), 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.slices[0].y, ratio(1, 1));
        assert!(r.global.value.is_zero());
        assert!(r.pass);
    }

    #[test]
    fn array_json_round_trip() {
        let arr = SimplexArray::from_fn(2, 3, |a| Ok(ratio(a[0] as i64, a[1] as i64))).unwrap();
        let json = serde_json::to_string(&arr).unwrap();
        assert_eq!(
            json,
            r#"{"m":2,"N":3,"values":[{"alpha":[1,2],"x":"1/2"},{"alpha":[1,3],"x":"1/3"},{"alpha":[2,3],"x":"2/3"}]}"#
        );
        let back: SimplexArray = serde_json::from_str(&json).unwrap();
        assert_eq!(back, arr);
        let short = r#"{"m":2,"N":3,"values":[{"alpha":[1,2],"x":"1/2"}]}"#;
        assert!(serde_json::from_str::<SimplexArray>(short).is_err());
        let dup = r#"{"m":1,"N":2,"values":[{"alpha":[1],"x":"0"},{"alpha":[1],"x":"0"}]}"#;
        assert!(serde_json::from_str::<SimplexArray>(dup).is_err());
    }

    #[test]
    fn restrict_and_slice() {
        let arr = SimplexArray::from_fn(2, 6, |a| Ok(ratio((10 * a[0] + a[1]) as i64, 1))).unwrap();
        let r = arr.restrict(&[2, 4, 6]).unwrap();
        assert_eq!(r.get(&[1, 3]), &ratio(26, 1));
        let (ground, s) = arr.slice(3, &[1, 3, 5, 6]).unwrap();
        assert_eq!(ground, vec![5, 6]);
        assert_eq!(s.get(&[2]), &ratio(36, 1));
        assert!(arr.slice(6, &[6]).is_err());
    }
}
