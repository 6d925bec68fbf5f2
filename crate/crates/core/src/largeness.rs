//! Σ_m / tilde-Σ_m / IP generators, finite-scale Σ*- and IP*-certificates,
//! Følner densities, admissible subgroups and the small combinatorial
//! fixtures (sum-free sets, polynomial paths).
//!
//! "Escaping to infinity" is proxied by strictly increasing escape norm along
//! the finite horizon. No routine here claims Σ_m* membership; certificates
//! report battery-wide evidence or a fully enumerated refutation.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics::{colex, is_strictly_increasing, IndexSet};
use crate::error::{Error, Result};
use crate::exact::ratio_str;
use crate::group::{FolnerFamily, GroupCtx, GroupElement};

/// Largest horizon accepted by [`FsFamily::enumerate`].
pub const MAX_FS_HORIZON: usize = 20;
pub const MAX_SUM_FREE_VALUES: usize = 100_000;
pub const MAX_POLYNOMIAL_WINDOW: u64 = 1_000_000;

/// The generating array `g^{(j)}_{k,t}` of a tilde-Σ_m set in `G^d`:
/// component `j ∈ [d]`, summand `t ∈ [m]`, sequence index `k ∈ [K]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSeed")]
pub struct SeedMatrix {
    group: GroupCtx,
    m: usize,
    d: usize,
    /// `columns[j][t][k-1]`.
    columns: Vec<Vec<Vec<GroupElement>>>,
}

#[derive(Deserialize)]
struct RawSeed {
    group: GroupCtx,
    m: usize,
    d: usize,
    columns: Vec<Vec<Vec<GroupElement>>>,
}

impl TryFrom<RawSeed> for SeedMatrix {
    type Error = Error;

    fn try_from(r: RawSeed) -> Result<Self> {
        SeedMatrix::new(r.group, r.m, r.d, r.columns)
    }
}

/// One element `g_α = (g_α^{(1)}, …, g_α^{(d)})` of a generated set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaPoint {
    pub alpha: IndexSet,
    pub tuple: Vec<GroupElement>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SeedViolation {
    /// `escape_norm(g^{(j)}_{k,t}) ≤ escape_norm(g^{(j)}_{k-1,t})`.
    NotEscaping { component: usize, summand: usize, k: usize },
    /// The components `j < j'` of summand `t` fail to grow apart at `k`.
    NotGrowingApart {
        components: (usize, usize),
        summand: usize,
        k: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeedCheck {
    Pass,
    Fail(SeedViolation),
}

impl SeedCheck {
    pub fn passed(&self) -> bool {
        matches!(self, SeedCheck::Pass)
    }
}

/// First `k` (1-based, ≥ 2) where the norm sequence fails to strictly increase.
fn first_non_increase(norms: &[BigUint]) -> Option<usize> {
    norms.windows(2).position(|w| w[1] <= w[0]).map(|i| i + 2)
}

impl SeedMatrix {
    pub fn new(group: GroupCtx, m: usize, d: usize, columns: Vec<Vec<Vec<GroupElement>>>) -> Result<Self> {
        if m == 0 || d == 0 {
            return Err(Error::InvalidSeed("m and d must be positive".into()));
        }
        if columns.len() != d || columns.iter().any(|c| c.len() != m) {
            return Err(Error::InvalidSeed(format!("expected {d} components of {m} summand columns")));
        }
        let horizon = columns[0][0].len();
        for col in columns.iter().flatten() {
            if col.len() != horizon {
                return Err(Error::InvalidSeed("columns have different horizons".into()));
            }
            for g in col {
                group.check(g)?;
            }
        }
        if horizon < m {
            return Err(Error::InvalidSeed(format!("horizon {horizon} is smaller than m = {m}")));
        }
        Ok(Self { group, m, d, columns })
    }

    /// Builds a seed from `f(j, t, k)` with 0-based `j`, `t` and 1-based `k`.
    pub fn from_fn(
        group: GroupCtx,
        m: usize,
        d: usize,
        horizon: usize,
        mut f: impl FnMut(usize, usize, usize) -> Result<GroupElement>,
    ) -> Result<Self> {
        let mut columns = Vec::with_capacity(d);
        for j in 0..d {
            let mut comp = Vec::with_capacity(m);
            for t in 0..m {
                comp.push((1..=horizon).map(|k| f(j, t, k)).collect::<Result<Vec<_>>>()?);
            }
            columns.push(comp);
        }
        Self::new(group, m, d, columns)
    }

    pub fn group(&self) -> &GroupCtx {
        &self.group
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn horizon(&self) -> usize {
        self.columns[0][0].len()
    }

    /// `g^{(j)}_{k,t}` with 0-based `j`, `t` and 1-based `k`.
    pub fn entry(&self, j: usize, t: usize, k: usize) -> &GroupElement {
        &self.columns[j][t][k - 1]
    }

    fn check_alpha(&self, alpha: &[usize]) -> Result<()> {
        if alpha.len() != self.m {
            return Err(Error::InvalidIndexSet(format!(
                "expected {} indices, got {}",
                self.m,
                alpha.len()
            )));
        }
        if alpha.iter().any(|&k| k == 0 || k > self.horizon()) {
            return Err(Error::InvalidIndexSet(format!(
                "indices must lie in 1..={}",
                self.horizon()
            )));
        }
        let mut sorted = alpha.to_vec();
        sorted.sort_unstable();
        if !is_strictly_increasing(&sorted) {
            return Err(Error::InvalidIndexSet("repeated index".into()));
        }
        Ok(())
    }

    /// `g^{(j)}_{k_1,1} + … + g^{(j)}_{k_m,m}` for `α = {k_1 < … < k_m}` (`j` 0-based).
    pub fn seed_sum(&self, j: usize, alpha: &[usize]) -> Result<GroupElement> {
        self.check_alpha(alpha)?;
        if j >= self.d {
            return Err(Error::InvalidIndexSet(format!("component {j} out of range")));
        }
        let mut sorted = alpha.to_vec();
        sorted.sort_unstable();
        self.group
            .sum(sorted.iter().enumerate().map(|(t, &k)| self.entry(j, t, k)))
    }

    pub fn tuple_at(&self, alpha: &[usize]) -> Result<Vec<GroupElement>> {
        (0..self.d).map(|j| self.seed_sum(j, alpha)).collect()
    }

    /// Checks the non-degeneracy and growing-apart proxies.
    pub fn validate(&self) -> SeedCheck {
        let norms = |col: &[GroupElement]| -> Vec<BigUint> {
            col.iter()
                .map(|g| self.group.escape_norm(g).expect("validated at construction"))
                .collect()
        };
        for j in 0..self.d {
            for t in 0..self.m {
                if let Some(k) = first_non_increase(&norms(&self.columns[j][t])) {
                    return SeedCheck::Fail(SeedViolation::NotEscaping {
                        component: j + 1,
                        summand: t + 1,
                        k,
                    });
                }
            }
        }
        for t in 0..self.m {
            for j in 0..self.d {
                for j2 in j + 1..self.d {
                    let diffs: Vec<GroupElement> = self.columns[j][t]
                        .iter()
                        .zip(&self.columns[j2][t])
                        .map(|(a, b)| self.group.sub(a, b).expect("same group"))
                        .collect();
                    if let Some(k) = first_non_increase(&norms(&diffs)) {
                        return SeedCheck::Fail(SeedViolation::NotGrowingApart {
                            components: (j + 1, j2 + 1),
                            summand: t + 1,
                            k,
                        });
                    }
                }
            }
        }
        SeedCheck::Pass
    }

    /// All `C(K, m)` points of the generated set, α in colex order.
    pub fn enumerate_sigma(&self) -> Vec<SigmaPoint> {
        colex(self.horizon(), self.m)
            .map(|alpha| {
                let tuple = self.tuple_at(&alpha).expect("colex yields valid index sets");
                SigmaPoint { alpha, tuple }
            })
            .collect()
    }
}

/// Generators `(g^{(j)}_k)` of an IP set in `G^d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FsFamily {
    group: GroupCtx,
    d: usize,
    /// `generators[j][k-1]`.
    generators: Vec<Vec<GroupElement>>,
}

impl FsFamily {
    pub fn new(group: GroupCtx, generators: Vec<Vec<GroupElement>>) -> Result<Self> {
        let d = generators.len();
        if d == 0 || generators[0].is_empty() {
            return Err(Error::InvalidSeed("empty generator family".into()));
        }
        let horizon = generators[0].len();
        for comp in &generators {
            if comp.len() != horizon {
                return Err(Error::InvalidSeed("components have different horizons".into()));
            }
            for g in comp {
                group.check(g)?;
            }
        }
        Ok(Self { group, d, generators })
    }

    /// A family in `G` (d = 1).
    pub fn scalar(group: GroupCtx, generators: Vec<GroupElement>) -> Result<Self> {
        Self::new(group, vec![generators])
    }

    pub fn group(&self) -> &GroupCtx {
        &self.group
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn horizon(&self) -> usize {
        self.generators[0].len()
    }

    pub fn generators(&self) -> &[Vec<GroupElement>] {
        &self.generators
    }

    /// Escape proxies as for [`SeedMatrix::validate`], with a single summand.
    pub fn validate(&self) -> SeedCheck {
        let seed = SeedMatrix {
            group: self.group.clone(),
            m: 1,
            d: self.d,
            columns: self.generators.iter().map(|g| vec![g.clone()]).collect(),
        };
        seed.validate()
    }

    /// `g_α = Σ_{k∈α} g_k` per component, for a non-empty α ⊆ [K].
    pub fn fs_sum(&self, alpha: &[usize]) -> Result<Vec<GroupElement>> {
        if alpha.is_empty() || alpha.iter().any(|&k| k == 0 || k > self.horizon()) {
            return Err(Error::InvalidIndexSet("α must be a non-empty subset of [K]".into()));
        }
        let set: BTreeSet<_> = alpha.iter().collect();
        if set.len() != alpha.len() {
            return Err(Error::InvalidIndexSet("repeated index".into()));
        }
        self.generators
            .iter()
            .map(|comp| self.group.sum(set.iter().map(|&&k| &comp[k - 1])))
            .collect()
    }

    /// All `2^K − 1` finite sums, α in colex order (binary counting).
    pub fn enumerate(&self) -> Result<Vec<SigmaPoint>> {
        let k = self.horizon();
        if k > MAX_FS_HORIZON {
            return Err(Error::Guard {
                guard: "FS horizon",
                requested: k as u128,
                limit: MAX_FS_HORIZON as u128,
            });
        }
        (1u32..(1u32 << k))
            .map(|mask| {
                let alpha: IndexSet = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect();
                let tuple = self.fs_sum(&alpha)?;
                Ok(SigmaPoint { alpha, tuple })
            })
            .collect()
    }
}

/// The tilde-Σ_m seed inside an IP family: every summand column is the
/// generator sequence itself, so `g_α` for `|α| = m` is an FS value.
pub fn sigma_from_ip(fam: &FsFamily, m: usize) -> Result<SeedMatrix> {
    if m == 0 || fam.horizon() < m {
        return Err(Error::InvalidSeed(format!(
            "need 1 <= m <= K, got m = {m}, K = {}",
            fam.horizon()
        )));
    }
    let seed = SeedMatrix::new(
        fam.group.clone(),
        m,
        fam.d,
        fam.generators.iter().map(|g| vec![g.clone(); m]).collect(),
    )?;
    for p in seed.enumerate_sigma() {
        debug_assert_eq!(p.tuple, fam.fs_sum(&p.alpha)?);
    }
    Ok(seed)
}

/// A witness that one seed (or family) of a battery meets the target set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatteryWitness {
    pub index: usize,
    pub alpha: IndexSet,
    pub tuple: Vec<GroupElement>,
}

/// Finite-scale largeness certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum LargenessCert {
    /// Every seed of the battery generates a point satisfying the predicate.
    EvidenceSigmaStar {
        m: usize,
        battery_size: usize,
        witnesses: Vec<BatteryWitness>,
    },
    /// The embedded seed generates a set entirely outside the predicate.
    RefutesSigmaStar {
        m: usize,
        index: usize,
        seed: SeedMatrix,
        enumerated: Vec<SigmaPoint>,
    },
    EvidenceIpStar {
        battery_size: usize,
        witnesses: Vec<BatteryWitness>,
    },
    RefutesIpStar {
        index: usize,
        family: FsFamily,
        enumerated: Vec<SigmaPoint>,
    },
}

impl LargenessCert {
    pub fn is_evidence(&self) -> bool {
        matches!(
            self,
            LargenessCert::EvidenceSigmaStar { .. } | LargenessCert::EvidenceIpStar { .. }
        )
    }

    /// Re-checks a Σ-certificate from raw predicate evaluations.
    pub fn verify_sigma<P>(&self, pred: P, battery: &[SeedMatrix]) -> bool
    where
        P: Fn(&[GroupElement]) -> bool,
    {
        match self {
            LargenessCert::EvidenceSigmaStar {
                battery_size,
                witnesses,
                ..
            } => {
                *battery_size == battery.len()
                    && witnesses.len() == battery.len()
                    && witnesses.iter().enumerate().all(|(i, w)| {
                        w.index == i
                            && battery[i].tuple_at(&w.alpha).is_ok_and(|t| t == w.tuple)
                            && pred(&w.tuple)
                    })
            }
            LargenessCert::RefutesSigmaStar {
                index,
                seed,
                enumerated,
                ..
            } => {
                battery.get(*index) == Some(seed)
                    && seed.validate().passed()
                    && &seed.enumerate_sigma() == enumerated
                    && enumerated.iter().all(|p| !pred(&p.tuple))
            }
            _ => false,
        }
    }

    /// Re-checks an IP-certificate from raw predicate evaluations.
    pub fn verify_ip<P>(&self, pred: P, families: &[FsFamily]) -> bool
    where
        P: Fn(&[GroupElement]) -> bool,
    {
        match self {
            LargenessCert::EvidenceIpStar {
                battery_size,
                witnesses,
            } => {
                *battery_size == families.len()
                    && witnesses.len() == families.len()
                    && witnesses.iter().enumerate().all(|(i, w)| {
                        w.index == i
                            && families[i].fs_sum(&w.alpha).is_ok_and(|t| t == w.tuple)
                            && pred(&w.tuple)
                    })
            }
            LargenessCert::RefutesIpStar {
                index,
                family,
                enumerated,
            } => {
                families.get(*index) == Some(family)
                    && family.enumerate().is_ok_and(|e| &e == enumerated)
                    && enumerated.iter().all(|p| !pred(&p.tuple))
            }
            _ => false,
        }
    }
}

/// Searches every seed of the battery for a point of the predicate.
///
/// Returns evidence when all seeds have a witness (colex-minimal α), and
/// otherwise a refutation built from the first witness-free seed.
pub fn sigma_star_evidence<P>(pred: P, battery: &[SeedMatrix]) -> Result<LargenessCert>
where
    P: Fn(&[GroupElement]) -> bool,
{
    let m = battery
        .first()
        .ok_or_else(|| Error::Precondition("empty battery".into()))?
        .m;
    let mut witnesses = Vec::with_capacity(battery.len());
    for (index, seed) in battery.iter().enumerate() {
        if seed.m != m {
            return Err(Error::Precondition("battery seeds must share m".into()));
        }
        if let SeedCheck::Fail(v) = seed.validate() {
            return Err(Error::InvalidSeed(format!("battery seed {index}: {v:?}")));
        }
        let points = seed.enumerate_sigma();
        match points.iter().find(|p| pred(&p.tuple)) {
            Some(p) => witnesses.push(BatteryWitness {
                index,
                alpha: p.alpha.clone(),
                tuple: p.tuple.clone(),
            }),
            None => {
                return Ok(LargenessCert::RefutesSigmaStar {
                    m,
                    index,
                    seed: seed.clone(),
                    enumerated: points,
                })
            }
        }
    }
    Ok(LargenessCert::EvidenceSigmaStar {
        m,
        battery_size: battery.len(),
        witnesses,
    })
}

/// IP analogue of [`sigma_star_evidence`] over truncated FS sets.
pub fn ip_star_evidence<P>(pred: P, families: &[FsFamily]) -> Result<LargenessCert>
where
    P: Fn(&[GroupElement]) -> bool,
{
    if families.is_empty() {
        return Err(Error::Precondition("empty battery".into()));
    }
    let mut witnesses = Vec::with_capacity(families.len());
    for (index, fam) in families.iter().enumerate() {
        if let SeedCheck::Fail(v) = fam.validate() {
            return Err(Error::InvalidSeed(format!("family {index}: {v:?}")));
        }
        let points = fam.enumerate()?;
        match points.iter().find(|p| pred(&p.tuple)) {
            Some(p) => witnesses.push(BatteryWitness {
                index,
                alpha: p.alpha.clone(),
                tuple: p.tuple.clone(),
            }),
            None => {
                return Ok(LargenessCert::RefutesIpStar {
                    index,
                    family: fam.clone(),
                    enumerated: points,
                })
            }
        }
    }
    Ok(LargenessCert::EvidenceIpStar {
        battery_size: families.len(),
        witnesses,
    })
}

/// Default Σ_m / tilde-Σ_m battery on `G^d`: linear, geometric,
/// factorial-gap and sign-interleaved seeds.
///
/// Component `j` is `(j+1)·b(k,t)` placed in coordinate `j mod rank`, which
/// keeps components growing apart.
pub fn default_battery(group: &GroupCtx, m: usize, d: usize, horizon: usize) -> Result<Vec<SeedMatrix>> {
    type Base = fn(usize, usize, usize) -> BigInt;
    let bases: [Base; 4] = [
        |k, t, m| BigInt::from(m * k + t),
        |k, t, _| (BigInt::one() << k) + t,
        |k, t, _| (1..=k).fold(BigInt::one(), |acc, i| acc * i) + t,
        |k, t, m| {
            let v = BigInt::from(m * k + t);
            if (k + t) % 2 == 0 {
                v
            } else {
                -v
            }
        },
    ];
    let slots = group.rank().unwrap_or(d.max(1));
    bases
        .iter()
        .map(|base| {
            SeedMatrix::from_fn(group.clone(), m, d, horizon, |j, t, k| {
                let value = base(k, t, m) * BigInt::from(j + 1);
                let mut coords = vec![BigInt::zero(); group.rank().unwrap_or(j % slots + 1)];
                coords[j % slots] = value;
                group.element(coords)
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DensityVerdict {
    TendsToOne,
    TendsToZero,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityRatio {
    pub k: usize,
    #[serde(with = "ratio_str")]
    pub ratio: BigRational,
}

/// Exact ratios `|E ∩ F_k| / |F_k|` and the declared verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityReport {
    pub family: FolnerFamily,
    pub ratios: Vec<DensityRatio>,
    pub verdict: DensityVerdict,
    #[serde(with = "ratio_str")]
    pub delta: BigRational,
}

impl DensityReport {
    pub fn last(&self) -> Option<&BigRational> {
        self.ratios.last().map(|r| &r.ratio)
    }
}

/// Default threshold δ for the density verdict.
pub fn default_density_delta() -> BigRational {
    BigRational::new(1.into(), 20.into())
}

/// Evaluates `f` once on `F_{k_max}` and buckets by escape norm; the
/// canonical windows are exactly the norm balls, so `F_k` is a prefix sum.
fn bucket_by_norm<T>(
    fam: &FolnerFamily,
    k_max: usize,
    mut f: impl FnMut(&GroupElement) -> Result<T>,
) -> Result<Vec<Vec<T>>> {
    let window = fam.window(k_max)?;
    let mut buckets: Vec<Vec<T>> = (0..=k_max).map(|_| Vec::new()).collect();
    for g in &window {
        let norm = fam
            .group()
            .escape_norm(g)?
            .to_usize()
            .expect("inside F_k_max");
        buckets[norm].push(f(g)?);
    }
    Ok(buckets)
}

/// Upper-density profile of `E = {g : pred(g)}` along the Følner family.
///
/// Verdict: `TendsToOne` if the last three ratios exceed `1 − δ`,
/// `TendsToZero` if they are below `δ`, otherwise `Inconclusive`.
pub fn folner_density<P>(pred: P, fam: &FolnerFamily, k_max: usize, delta: &BigRational) -> Result<DensityReport>
where
    P: Fn(&GroupElement) -> Result<bool>,
{
    let buckets = bucket_by_norm(fam, k_max, |g| pred(g))?;
    let mut hits = 0usize;
    let mut total = 0usize;
    let mut ratios = Vec::with_capacity(k_max);
    for (k, bucket) in buckets.iter().enumerate() {
        hits += bucket.iter().filter(|&&b| b).count();
        total += bucket.len();
        if k >= 1 {
            ratios.push(DensityRatio {
                k,
                ratio: BigRational::new(hits.into(), total.into()),
            });
        }
    }
    let tail: Vec<_> = ratios.iter().rev().take(3).map(|r| &r.ratio).collect();
    let one_minus = BigRational::one() - delta;
    let verdict = if tail.len() < 3 {
        DensityVerdict::Inconclusive
    } else if tail.iter().all(|&r| r > &one_minus) {
        DensityVerdict::TendsToOne
    } else if tail.iter().all(|&r| r < delta) {
        DensityVerdict::TendsToZero
    } else {
        DensityVerdict::Inconclusive
    };
    Ok(DensityReport {
        family: fam.clone(),
        ratios,
        verdict,
        delta: delta.clone(),
    })
}

/// Cesàro averages `(1/|F_k|) Σ_{g∈F_k} f(g)` for `k = 1..=k_max`.
pub fn folner_averages<F>(f: F, fam: &FolnerFamily, k_max: usize) -> Result<Vec<DensityRatio>>
where
    F: Fn(&GroupElement) -> Result<BigRational>,
{
    let buckets = bucket_by_norm(fam, k_max, |g| f(g))?;
    let mut acc = BigRational::zero();
    let mut total = 0usize;
    let mut out = Vec::with_capacity(k_max);
    for (k, bucket) in buckets.into_iter().enumerate() {
        total += bucket.len();
        for v in bucket {
            acc += v;
        }
        if k >= 1 {
            out.push(DensityRatio {
                k,
                ratio: &acc / BigRational::from_integer(total.into()),
            });
        }
    }
    Ok(out)
}

/// A linear functional on `G^d`: a coordinate projection or a difference of two.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Functional {
    /// `π_j` (1-based).
    Projection { j: usize },
    /// `π_j − π_i` (1-based).
    Difference { j: usize, i: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionalCheck {
    pub functional: Functional,
    /// Index of a generator with nonzero image, if any.
    pub witness: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibleReport {
    pub admissible: bool,
    pub checks: Vec<FunctionalCheck>,
}

impl AdmissibleReport {
    /// The first functional vanishing on H, if any.
    pub fn vanishing(&self) -> Option<Functional> {
        self.checks.iter().find(|c| c.witness.is_none()).map(|c| c.functional)
    }
}

/// Admissibility of the lattice subgroup `H ≤ G^d` spanned by `generators`.
///
/// A subgroup of a lattice has infinite image under a homomorphism iff the
/// image is nonzero, so each functional only needs one generator it does
/// not annihilate.
pub fn admissible_check(group: &GroupCtx, generators: &[Vec<GroupElement>]) -> Result<AdmissibleReport> {
    if !group.is_lattice() {
        return Err(Error::Precondition("admissibility is decided for Z and Z^d only".into()));
    }
    let d = generators
        .first()
        .ok_or_else(|| Error::Precondition("empty generator list".into()))?
        .len();
    if d == 0 {
        return Err(Error::Precondition("generators must be non-empty tuples".into()));
    }
    for tuple in generators {
        if tuple.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: tuple.len(),
            });
        }
        for g in tuple {
            group.check(g)?;
        }
    }
    let zero = group.zero();
    let mut checks = Vec::new();
    for j in 0..d {
        let witness = generators.iter().position(|t| t[j] != zero);
        checks.push(FunctionalCheck {
            functional: Functional::Projection { j: j + 1 },
            witness,
        });
    }
    for i in 0..d {
        for j in 0..d {
            if i == j {
                continue;
            }
            let witness = generators.iter().position(|t| t[j] != t[i]);
            checks.push(FunctionalCheck {
                functional: Functional::Difference { j: j + 1, i: i + 1 },
                witness,
            });
        }
    }
    Ok(AdmissibleReport {
        admissible: checks.iter().all(|c| c.witness.is_some()),
        checks,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SumFreeReport {
    pub sum_free: bool,
    pub witness: Option<SumWitness>,
}

/// `a + b = c` with `a ≤ b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SumWitness {
    #[serde(with = "crate::group::int_json")]
    pub a: BigInt,
    #[serde(with = "crate::group::int_json")]
    pub b: BigInt,
    #[serde(with = "crate::group::int_json")]
    pub c: BigInt,
}

/// Whether no `a, b, c` in `values` (a = b allowed) satisfy `a + b = c`.
///
/// The witness reported is the one with the largest `c`, then smallest `a`.
pub fn sum_free_check(values: &[BigInt]) -> Result<SumFreeReport> {
    if values.len() > MAX_SUM_FREE_VALUES {
        return Err(Error::Guard {
            guard: "sum-free input size",
            requested: values.len() as u128,
            limit: MAX_SUM_FREE_VALUES as u128,
        });
    }
    let set: BTreeSet<&BigInt> = values.iter().collect();
    let sorted: Vec<&BigInt> = set.iter().copied().collect();
    for &c in sorted.iter().rev() {
        for &a in &sorted {
            let b = c - a;
            if &b < a {
                break;
            }
            if set.contains(&b) {
                return Ok(SumFreeReport {
                    sum_free: false,
                    witness: Some(SumWitness {
                        a: a.clone(),
                        b,
                        c: c.clone(),
                    }),
                });
            }
        }
    }
    Ok(SumFreeReport {
        sum_free: true,
        witness: None,
    })
}

/// An integer polynomial, coefficients in ascending degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "GroupElement", into = "GroupElement")]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl From<GroupElement> for IntPolynomial {
    fn from(g: GroupElement) -> Self {
        Self::new(g.into_coords())
    }
}

impl From<IntPolynomial> for GroupElement {
    fn from(p: IntPolynomial) -> Self {
        GroupElement::from_coords(p.coeffs)
    }
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| c.into()).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }
}

/// A finite shadow of a Σ₂ configuration inside `{p(i)}`: for each `n`,
/// both `a + n` and `b + n` are values of `p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sigma2Witness {
    pub a: i64,
    pub b: i64,
    pub ns: Vec<i64>,
}

/// Looks for `a < b` and `repeats` distinct `n` with `a + n, b + n ∈ V`,
/// where `V = {p(i) : |p(i)| ≤ window}`.
///
/// Only the difference `c = b − a` matters: the `n` are `v − a` for the
/// values `v` with `v + c ∈ V`. The reported witness takes the smallest such
/// `c`, `a = 0`, and the smallest admissible `n`.
pub fn polynomial_sigma2_search(p: &IntPolynomial, window: u64, repeats: usize) -> Result<Option<Sigma2Witness>> {
    let deg = p.degree().unwrap_or(0);
    if deg < 2 {
        return Err(Error::Precondition(format!("polynomial degree {deg} < 2")));
    }
    if window > MAX_POLYNOMIAL_WINDOW {
        return Err(Error::Guard {
            guard: "polynomial window",
            requested: window as u128,
            limit: MAX_POLYNOMIAL_WINDOW as u128,
        });
    }
    if repeats == 0 {
        return Err(Error::Precondition("repeats must be positive".into()));
    }
    let lead = p.coeffs[deg].magnitude().clone();
    let lower: BigUint = p.coeffs[..deg].iter().map(|c| c.magnitude().clone()).sum();
    // For |i| > bound, |p(i)| ≥ |i|^{deg-1} (|lead|·|i| − lower) > window.
    let bound = ((BigUint::from(window) + lower) / lead + 1u32)
        .to_i64()
        .filter(|&b| b <= 10 * MAX_POLYNOMIAL_WINDOW as i64)
        .ok_or(Error::Guard {
            guard: "polynomial argument range",
            requested: u128::MAX,
            limit: 10 * MAX_POLYNOMIAL_WINDOW as u128,
        })?;
    let w = BigInt::from(window);
    let mut values: BTreeSet<i64> = BTreeSet::new();
    for i in -bound..=bound {
        let v = p.eval(&BigInt::from(i));
        if v.abs() <= w {
            values.insert(v.to_i64().expect("bounded by window"));
        }
    }
    let values: Vec<i64> = values.into_iter().collect();
    let mut counts: HashMap<i64, usize> = HashMap::new();
    let mut best: Option<i64> = None;
    for (idx, &x) in values.iter().enumerate() {
        for &y in &values[idx + 1..] {
            let c = y - x;
            let e = counts.entry(c).or_insert(0);
            *e += 1;
            if *e >= repeats && best.is_none_or(|b| c < b) {
                best = Some(c);
            }
        }
    }
    let Some(c) = best else {
        return Ok(None);
    };
    let present: HashSet<i64> = values.iter().copied().collect();
    let ns: Vec<i64> = values
        .iter()
        .copied()
        .filter(|v| present.contains(&(v + c)))
        .take(repeats)
        .collect();
    Ok(Some(Sigma2Witness { a: 0, b: c, ns }))
}

/// Groups every FS point by its tuple, for set-inclusion checks.
pub fn fs_values_by_size(fam: &FsFamily, size: usize) -> Result<BTreeMap<Vec<GroupElement>, IndexSet>> {
    Ok(fam
        .enumerate()?
        .into_iter()
        .filter(|p| p.alpha.len() == size)
        .map(|p| (p.tuple, p.alpha))
        .collect())
}
