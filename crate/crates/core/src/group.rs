//! Effective countable abelian groups: ℤ, ℤ^d and ⊕_{k∈ℕ} ℤ, with homomorphisms
//! between them and the canonical Følner windows used as the finite proxy
//! for "escaping to infinity".

use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest Følner window that will be materialized.
pub const MAX_WINDOW_SIZE: u128 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum GroupKind {
    Int,
    IntVec { d: usize },
    FinSupportIntSeq,
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupKind::Int => f.write_str("Z"),
            GroupKind::IntVec { d } => write!(f, "Z^{d}"),
            GroupKind::FinSupportIntSeq => f.write_str("⊕Z"),
        }
    }
}

#[derive(Deserialize)]
struct RawGroupCtx {
    #[serde(flatten)]
    kind: GroupKind,
    #[serde(default)]
    label: String,
}

/// A group together with a descriptive label. Equality ignores the label.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawGroupCtx")]
pub struct GroupCtx {
    #[serde(flatten)]
    kind: GroupKind,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    label: String,
}

impl TryFrom<RawGroupCtx> for GroupCtx {
    type Error = Error;

    fn try_from(raw: RawGroupCtx) -> Result<Self> {
        Ok(Self::new(raw.kind)?.with_label(raw.label))
    }
}

impl PartialEq for GroupCtx {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Eq for GroupCtx {}

impl Hash for GroupCtx {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.kind.hash(state)
    }
}

impl fmt::Display for GroupCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.label.is_empty() {
            write!(f, "{}", self.kind)
        } else {
            write!(f, "{} ({})", self.kind, self.label)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupOp {
    Add,
    Sub,
}

/// An element of one of the supported groups, stored as its integer coordinates.
///
/// Elements of ⊕ℤ are kept with trailing zeros removed so that structural and
/// group equality agree. The ordering is lexicographic on coordinates.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement(Vec<BigInt>);

impl GroupElement {
    /// Wraps raw coordinates without any canonicalization.
    pub fn from_coords(coords: Vec<BigInt>) -> Self {
        Self(coords)
    }

    pub fn from_i64s(coords: &[i64]) -> Self {
        Self(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn int(n: impl Into<BigInt>) -> Self {
        Self(vec![n.into()])
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.0
    }

    fn trimmed(mut coords: Vec<BigInt>) -> Self {
        while coords.last().is_some_and(|c| c.is_zero()) {
            coords.pop();
        }
        Self(coords)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

// JSON form: an array of integers. Coordinates beyond i64 fall back to strings.
impl Serialize for GroupElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for c in &self.0 {
            if let Some(v) = c.to_i64() {
                seq.serialize_element(&v)?;
            } else {
                seq.serialize_element(&c.to_string())?;
            }
        }
        seq.end()
    }
}

struct CoordVisitor;

impl<'de> Visitor<'de> for CoordVisitor {
    type Value = BigInt;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or a decimal integer string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<BigInt, E> {
        Ok(v.into())
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<BigInt, E> {
        Ok(v.into())
    }

    fn visit_i128<E: de::Error>(self, v: i128) -> std::result::Result<BigInt, E> {
        Ok(v.into())
    }

    fn visit_u128<E: de::Error>(self, v: u128) -> std::result::Result<BigInt, E> {
        Ok(v.into())
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<BigInt, E> {
        v.parse().map_err(|_| E::custom(format!("bad integer {v:?}")))
    }
}

struct Coord(BigInt);

impl<'de> Deserialize<'de> for Coord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        d.deserialize_any(CoordVisitor).map(Coord)
    }
}

/// Serde adapter for a single integer in the same JSON form as a coordinate.
pub(crate) mod int_json {
    use super::*;

    pub fn serialize<S: Serializer>(c: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
        if let Some(v) = c.to_i64() {
            s.serialize_i64(v)
        } else {
            s.serialize_str(&c.to_string())
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigInt, D::Error> {
        Coord::deserialize(d).map(|c| c.0)
    }
}

impl<'de> Deserialize<'de> for GroupElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct SeqV;
        impl<'de> Visitor<'de> for SeqV {
            type Value = GroupElement;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an array of integers")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut a: A) -> std::result::Result<GroupElement, A::Error> {
                let mut out = Vec::new();
                while let Some(Coord(c)) = a.next_element()? {
                    out.push(c);
                }
                Ok(GroupElement(out))
            }
        }
        d.deserialize_seq(SeqV)
    }
}

impl GroupCtx {
    pub fn new(kind: GroupKind) -> Result<Self> {
        if let GroupKind::IntVec { d: 0 } = kind {
            return Err(Error::InvalidGroup("Z^d requires d >= 1".into()));
        }
        Ok(Self {
            kind,
            label: String::new(),
        })
    }

    pub fn int() -> Self {
        Self {
            kind: GroupKind::Int,
            label: String::new(),
        }
    }

    pub fn int_vec(d: usize) -> Result<Self> {
        Self::new(GroupKind::IntVec { d })
    }

    pub fn fin_support() -> Self {
        Self {
            kind: GroupKind::FinSupportIntSeq,
            label: String::new(),
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Number of coordinates for the lattice kinds, `None` for ⊕ℤ.
    pub fn rank(&self) -> Option<usize> {
        match self.kind {
            GroupKind::Int => Some(1),
            GroupKind::IntVec { d } => Some(d),
            GroupKind::FinSupportIntSeq => None,
        }
    }

    pub fn is_lattice(&self) -> bool {
        self.rank().is_some()
    }

    pub fn zero(&self) -> GroupElement {
        match self.rank() {
            Some(d) => GroupElement(vec![BigInt::zero(); d]),
            None => GroupElement(Vec::new()),
        }
    }

    /// The `i`-th standard basis vector (0-based).
    pub fn basis(&self, i: usize) -> Result<GroupElement> {
        if let Some(d) = self.rank() {
            if i >= d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: i + 1,
                });
            }
        }
        let len = self.rank().unwrap_or(i + 1);
        let mut coords = vec![BigInt::zero(); len];
        coords[i] = BigInt::one();
        Ok(GroupElement(coords))
    }

    /// Builds an element from coordinates, canonicalizing ⊕ℤ elements.
    pub fn element(&self, coords: Vec<BigInt>) -> Result<GroupElement> {
        match self.rank() {
            Some(d) if coords.len() != d => Err(Error::DimensionMismatch {
                expected: d,
                found: coords.len(),
            }),
            Some(_) => Ok(GroupElement(coords)),
            None => Ok(GroupElement::trimmed(coords)),
        }
    }

    pub fn element_i64(&self, coords: &[i64]) -> Result<GroupElement> {
        self.element(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        match self.rank() {
            Some(d) => g.0.len() == d,
            None => !g.0.last().is_some_and(|c| c.is_zero()),
        }
    }

    pub fn check(&self, g: &GroupElement) -> Result<()> {
        if self.contains(g) {
            return Ok(());
        }
        match self.rank() {
            Some(d) => Err(Error::DimensionMismatch {
                expected: d,
                found: g.0.len(),
            }),
            None => Err(Error::NotInGroup {
                group: self.to_string(),
                element: g.to_string(),
            }),
        }
    }

    pub fn op(&self, a: &GroupElement, b: &GroupElement, mode: GroupOp) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        let len = a.0.len().max(b.0.len());
        let zero = BigInt::zero();
        let coords = (0..len)
            .map(|i| {
                let x = a.0.get(i).unwrap_or(&zero);
                let y = b.0.get(i).unwrap_or(&zero);
                match mode {
                    GroupOp::Add => x + y,
                    GroupOp::Sub => x - y,
                }
            })
            .collect();
        self.element(coords)
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.op(a, b, GroupOp::Add)
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.op(a, b, GroupOp::Sub)
    }

    pub fn neg(&self, g: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        Ok(GroupElement(g.0.iter().map(|c| -c).collect()))
    }

    pub fn scale(&self, n: &BigInt, g: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        self.element(g.0.iter().map(|c| c * n).collect())
    }

    pub fn sum<'a>(&self, items: impl IntoIterator<Item = &'a GroupElement>) -> Result<GroupElement> {
        items
            .into_iter()
            .try_fold(self.zero(), |acc, g| self.add(&acc, g))
    }

    /// Least k with `g ∈ F_k` for the canonical Følner family of the group:
    /// the max-norm on lattices, and `max(support length, max |entry|)` on ⊕ℤ.
    pub fn escape_norm(&self, g: &GroupElement) -> Result<BigUint> {
        self.check(g)?;
        let entry = g
            .0
            .iter()
            .map(|c| c.magnitude().clone())
            .max()
            .unwrap_or_default();
        Ok(match self.kind {
            GroupKind::FinSupportIntSeq => entry.max(BigUint::from(g.0.len())),
            _ => entry,
        })
    }

    pub fn canonical_folner(&self, max_index: usize) -> FolnerFamily {
        FolnerFamily::new(self.clone(), max_index)
    }
}

/// Homomorphisms between the supported groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HomKind {
    /// `g ↦ a·g`, on any of the groups.
    Scale(BigInt),
    /// `g ↦ M g` on ℤ^d, with `M` given row by row.
    Matrix(Vec<Vec<BigInt>>),
    /// `(a₁, a₂, …) ↦ (0, a₁, 0, a₂, …)` on ⊕ℤ.
    Interleave,
    /// `(a₁, a₂, …) ↦ (a₂, a₄, …)` on ⊕ℤ; a left inverse of `Interleave`.
    Deinterleave,
    /// `(a₁, a₂, …) ↦ (a_p, a_{p²}, a_{p³}, …)` on ⊕ℤ.
    PrimeSelect(u64),
    /// `outer ∘ inner`.
    Compose(Box<Homomorphism>, Box<Homomorphism>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homomorphism {
    kind: HomKind,
    source: GroupCtx,
    target: GroupCtx,
}

/// Outcome of the finite-kernel test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KernelCertificate {
    /// Lattice map of full rank over ℚ.
    FullRank { rank: usize },
    /// A nonzero element of the kernel; in a torsion-free group this spans an
    /// infinite subgroup of the kernel.
    KernelVector { vector: GroupElement },
    /// Structural argument for the ⊕ℤ maps.
    Analytic { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelReport {
    pub finite: bool,
    pub certificate: KernelCertificate,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut i = 2u64;
    while i.saturating_mul(i) <= p {
        if p.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

impl Homomorphism {
    pub fn scale(group: GroupCtx, a: impl Into<BigInt>) -> Self {
        Self {
            kind: HomKind::Scale(a.into()),
            source: group.clone(),
            target: group,
        }
    }

    pub fn matrix(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let d = rows.len();
        if d == 0 || rows.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidHomomorphism("matrix must be square and non-empty".into()));
        }
        let group = GroupCtx::int_vec(d)?;
        Ok(Self {
            kind: HomKind::Matrix(rows),
            source: group.clone(),
            target: group,
        })
    }

    pub fn matrix_i64(rows: &[Vec<i64>]) -> Result<Self> {
        Self::matrix(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn interleave() -> Self {
        Self {
            kind: HomKind::Interleave,
            source: GroupCtx::fin_support(),
            target: GroupCtx::fin_support(),
        }
    }

    pub fn deinterleave() -> Self {
        Self {
            kind: HomKind::Deinterleave,
            source: GroupCtx::fin_support(),
            target: GroupCtx::fin_support(),
        }
    }

    pub fn prime_select(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidHomomorphism(format!("{p} is not prime")));
        }
        Ok(Self {
            kind: HomKind::PrimeSelect(p),
            source: GroupCtx::fin_support(),
            target: GroupCtx::fin_support(),
        })
    }

    /// `outer ∘ inner`.
    pub fn compose(outer: Homomorphism, inner: Homomorphism) -> Result<Self> {
        if inner.target != outer.source {
            return Err(Error::GroupMismatch {
                expected: outer.source.to_string(),
                found: inner.target.to_string(),
            });
        }
        Ok(Self {
            source: inner.source.clone(),
            target: outer.target.clone(),
            kind: HomKind::Compose(Box::new(outer), Box::new(inner)),
        })
    }

    pub fn kind(&self) -> &HomKind {
        &self.kind
    }

    pub fn source(&self) -> &GroupCtx {
        &self.source
    }

    pub fn target(&self) -> &GroupCtx {
        &self.target
    }

    pub fn apply(&self, g: &GroupElement) -> Result<GroupElement> {
        self.source.check(g).map_err(|_| Error::GroupMismatch {
            expected: self.source.to_string(),
            found: g.to_string(),
        })?;
        let c = &g.0;
        match &self.kind {
            HomKind::Scale(a) => self.target.scale(a, g),
            HomKind::Matrix(rows) => self.target.element(
                rows.iter()
                    .map(|row| row.iter().zip(c).map(|(m, x)| m * x).sum())
                    .collect(),
            ),
            HomKind::Interleave => self.target.element(
                c.iter()
                    .flat_map(|x| [BigInt::zero(), x.clone()])
                    .collect(),
            ),
            HomKind::Deinterleave => {
                self.target.element(c.iter().skip(1).step_by(2).cloned().collect())
            }
            HomKind::PrimeSelect(p) => {
                let mut out = Vec::new();
                let mut pos = *p as usize;
                while pos <= c.len() {
                    out.push(c[pos - 1].clone());
                    match pos.checked_mul(*p as usize) {
                        Some(next) => pos = next,
                        None => break,
                    }
                }
                self.target.element(out)
            }
            HomKind::Compose(outer, inner) => outer.apply(&inner.apply(g)?),
        }
    }

    /// Integer matrix of a lattice homomorphism.
    fn lattice_matrix(&self) -> Option<Vec<Vec<BigInt>>> {
        let d = self.source.rank()?;
        match &self.kind {
            HomKind::Scale(a) => Some(
                (0..d)
                    .map(|i| {
                        (0..d)
                            .map(|j| if i == j { a.clone() } else { BigInt::zero() })
                            .collect()
                    })
                    .collect(),
            ),
            HomKind::Matrix(rows) => Some(rows.clone()),
            HomKind::Compose(outer, inner) => {
                let a = outer.lattice_matrix()?;
                let b = inner.lattice_matrix()?;
                Some(
                    (0..d)
                        .map(|i| {
                            (0..d)
                                .map(|j| (0..d).map(|k| &a[i][k] * &b[k][j]).sum())
                                .collect()
                        })
                        .collect(),
                )
            }
            _ => None,
        }
    }

    /// Decides whether `ker φ` is finite. In the torsion-free groups handled
    /// here a finite kernel is a trivial kernel.
    pub fn kernel_finite(&self) -> Result<KernelReport> {
        if let Some(m) = self.lattice_matrix() {
            return Ok(match integer_kernel_vector(&m) {
                None => KernelReport {
                    finite: true,
                    certificate: KernelCertificate::FullRank { rank: m.len() },
                },
                Some(v) => KernelReport {
                    finite: false,
                    certificate: KernelCertificate::KernelVector {
                        vector: self.source.element(v)?,
                    },
                },
            });
        }
        let e1 = self.source.basis(0)?;
        let infinite = |v: GroupElement| KernelReport {
            finite: false,
            certificate: KernelCertificate::KernelVector { vector: v },
        };
        let analytic = |reason: &str| KernelReport {
            finite: true,
            certificate: KernelCertificate::Analytic {
                reason: reason.to_string(),
            },
        };
        match &self.kind {
            HomKind::Scale(a) if a.is_zero() => Ok(infinite(e1)),
            HomKind::Scale(_) => Ok(analytic("multiplication by a nonzero integer on a torsion-free group")),
            HomKind::Interleave => Ok(analytic("coordinates are relocated to even positions, none discarded")),
            // Position 1 is never read by either map.
            HomKind::Deinterleave | HomKind::PrimeSelect(_) => Ok(infinite(e1)),
            HomKind::Compose(outer, inner) => {
                let ri = inner.kernel_finite()?;
                if !ri.finite {
                    return Ok(ri);
                }
                if outer.kernel_finite()?.finite {
                    return Ok(analytic("composition of injective maps"));
                }
                // All ⊕ℤ maps here send basis vectors to multiples of basis
                // vectors, so injectivity reduces to the basis images.
                let mut seen = std::collections::BTreeSet::new();
                for i in 0..PROBE_BASIS {
                    let e = self.source.basis(i)?;
                    let img = self.apply(&e)?;
                    if img.0.is_empty() {
                        return Ok(infinite(e));
                    }
                    if img.0.iter().filter(|c| !c.is_zero()).count() != 1 || !seen.insert(img.0.len()) {
                        return Err(Error::InvalidHomomorphism(
                            "composite is not a coordinate relocation".into(),
                        ));
                    }
                }
                Ok(analytic("basis images are nonzero and pairwise disjoint on the probed prefix"))
            }
            HomKind::Matrix(_) => unreachable!("matrix maps are lattice maps"),
        }
    }
}

const PROBE_BASIS: usize = 64;

/// A nonzero integer vector in the kernel of `m`, or `None` when `m` has full
/// column rank over ℚ. The vector is primitive with a positive leading entry.
fn integer_kernel_vector(m: &[Vec<BigInt>]) -> Option<Vec<BigInt>> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let free = (0..cols).find(|c| !pivot_cols.contains(c))?;
    let mut v = vec![BigRational::zero(); cols];
    v[free] = BigRational::one();
    for (i, &pc) in pivot_cols.iter().enumerate() {
        v[pc] = -a[i][free].clone();
    }
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| num_integer::Integer::lcm(&acc, x.denom()));
    let mut ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let g = ints
        .iter()
        .fold(BigInt::zero(), |acc, x| num_integer::Integer::gcd(&acc, x));
    if !g.is_zero() {
        for x in ints.iter_mut() {
            *x = &*x / &g;
        }
    }
    if ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        for x in ints.iter_mut() {
            *x = -&*x;
        }
    }
    Some(ints)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FolnerKind {
    /// Cubes `[-k, k]^d` in ℤ or ℤ^d.
    Boxes,
    /// Sequences supported on the first k coordinates with entries in `[-k, k]`.
    SupportBoxes,
}

/// The canonical nested Følner family `F_1 ⊆ F_2 ⊆ … ⊆ F_K` of a group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FolnerFamily {
    group: GroupCtx,
    kind: FolnerKind,
    max_index: usize,
}

impl FolnerFamily {
    pub fn new(group: GroupCtx, max_index: usize) -> Self {
        let kind = if group.is_lattice() {
            FolnerKind::Boxes
        } else {
            FolnerKind::SupportBoxes
        };
        Self {
            group,
            kind,
            max_index,
        }
    }

    pub fn group(&self) -> &GroupCtx {
        &self.group
    }

    pub fn kind(&self) -> FolnerKind {
        self.kind
    }

    pub fn max_index(&self) -> usize {
        self.max_index
    }

    fn check_index(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.max_index {
            return Err(Error::WindowIndex {
                k,
                max: self.max_index,
            });
        }
        Ok(())
    }

    /// `|F_k|`, saturating.
    pub fn window_size(&self, k: usize) -> u128 {
        let side = 2 * k as u128 + 1;
        let dims = self.group.rank().unwrap_or(k) as u32;
        side.checked_pow(dims).unwrap_or(u128::MAX)
    }

    pub fn contains(&self, k: usize, g: &GroupElement) -> Result<bool> {
        Ok(self.group.escape_norm(g)? <= BigUint::from(k))
    }

    /// Exact lexicographically ordered enumeration of `F_k`.
    pub fn window(&self, k: usize) -> Result<Vec<GroupElement>> {
        self.check_index(k)?;
        let size = self.window_size(k);
        if size > MAX_WINDOW_SIZE {
            return Err(Error::Guard {
                guard: "folner window size",
                requested: size,
                limit: MAX_WINDOW_SIZE,
            });
        }
        let dims = self.group.rank().unwrap_or(k);
        let k = k as i64;
        let mut out = Vec::with_capacity(size as usize);
        let mut cur = vec![-k; dims];
        loop {
            out.push(self.group.element_i64(&cur)?);
            let mut i = dims;
            loop {
                if i == 0 {
                    out.sort();
                    return Ok(out);
                }
                i -= 1;
                if cur[i] < k {
                    cur[i] += 1;
                    for c in cur.iter_mut().skip(i + 1) {
                        *c = -k;
                    }
                    break;
                }
            }
        }
    }

    /// Empirical Følner ratio `|(g + F_k) ∩ F_k| / |F_k|`.
    pub fn ratio(&self, k: usize, g: &GroupElement) -> Result<BigRational> {
        let window = self.window(k)?;
        let mut hits = 0usize;
        for f in &window {
            if self.contains(k, &self.group.add(g, f)?)? {
                hits += 1;
            }
        }
        Ok(BigRational::new(hits.into(), window.len().into()))
    }
}
