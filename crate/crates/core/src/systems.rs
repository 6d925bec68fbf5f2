//! Measure-preserving shift systems whose multicorrelations are exactly
//! computable on cylinder events.
//!
//! The shift acts by `(T_g x)(h) = x(h + g)` and `T_g A` denotes the preimage
//! `{x : T_g x ∈ A}`, so a constraint at coordinate `s` moves to `s + g`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{format_ratio, ExactMeasure};
use crate::gf2::{Echelon, Insertion, SparsePoly};
use crate::group::{GroupCtx, GroupElement, Homomorphism};

/// A finite set of coordinate constraints `x(s) = sym`; empty means the full space.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPattern", into = "RawPattern")]
pub struct CylinderPattern {
    constraints: BTreeMap<GroupElement, u32>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct RawConstraint {
    coord: GroupElement,
    sym: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct RawPattern {
    constraints: Vec<RawConstraint>,
}

impl TryFrom<RawPattern> for CylinderPattern {
    type Error = Error;

    fn try_from(raw: RawPattern) -> Result<Self> {
        Self::new(raw.constraints.into_iter().map(|c| (c.coord, c.sym)))
    }
}

impl From<CylinderPattern> for RawPattern {
    fn from(p: CylinderPattern) -> Self {
        RawPattern {
            constraints: p
                .constraints
                .into_iter()
                .map(|(coord, sym)| RawConstraint { coord, sym })
                .collect(),
        }
    }
}

impl CylinderPattern {
    /// The whole space `X`.
    pub fn full() -> Self {
        Self::default()
    }

    /// Rejects repeated coordinates, even with equal symbols.
    pub fn new(constraints: impl IntoIterator<Item = (GroupElement, u32)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (coord, sym) in constraints {
            if map.contains_key(&coord) {
                return Err(Error::DuplicateCoordinate(coord.to_string()));
            }
            map.insert(coord, sym);
        }
        Ok(Self { constraints: map })
    }

    pub fn single(coord: GroupElement, sym: u32) -> Self {
        Self {
            constraints: BTreeMap::from([(coord, sym)]),
        }
    }

    pub fn constraints(&self) -> &BTreeMap<GroupElement, u32> {
        &self.constraints
    }

    pub fn is_full(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = &GroupElement> {
        self.constraints.keys()
    }
}

/// The systems supported by [`System::measure`] and [`System::correlate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum System {
    /// Product measure on `{0..q-1}^G` with the shift action.
    Bernoulli {
        group: GroupCtx,
        probs: Vec<BigRational>,
    },
    /// Haar measure on the Ledrappier subgroup of `GF(2)^{ℤ²}`.
    Ledrappier,
    /// `T'_g = T_{φ(g)}` on the base system.
    PulledBack {
        base: Box<System>,
        hom: Homomorphism,
    },
}

/// Result of one term list, for callers that tabulate correlations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GapRow {
    pub g: GroupElement,
    pub correlation: ExactMeasure,
    pub gap: ExactMeasure,
}

/// Finite-horizon evidence for the pair mixing property along a list of group elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MixingEvidence {
    #[serde(with = "crate::exact::ratio_str")]
    pub epsilon: BigRational,
    pub rows: Vec<GapRow>,
    /// Number of rows with gap `< ε`.
    pub within: usize,
    /// Index into `rows` of the largest gap `≥ ε` (first on ties).
    pub worst: Option<usize>,
}

impl MixingEvidence {
    pub fn all_within(&self) -> bool {
        self.within == self.rows.len()
    }
}

impl System {
    pub fn bernoulli(group: GroupCtx, probs: Vec<BigRational>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidSystem("empty alphabet".into()));
        }
        if probs.iter().any(|p| p.is_negative()) {
            return Err(Error::InvalidSystem("negative symbol probability".into()));
        }
        let total: BigRational = probs.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidSystem(format!(
                "symbol probabilities sum to {}",
                format_ratio(&total)
            )));
        }
        Ok(System::Bernoulli { group, probs })
    }

    /// The `(1/2, 1/2)` Bernoulli shift.
    pub fn fair_coin(group: GroupCtx) -> Self {
        let half = BigRational::new(BigInt::one(), 2.into());
        System::Bernoulli {
            group,
            probs: vec![half.clone(), half],
        }
    }

    pub fn ledrappier() -> Self {
        System::Ledrappier
    }

    pub fn pulled_back(base: System, hom: Homomorphism) -> Result<Self> {
        if hom.target() != &base.acting_group() {
            return Err(Error::GroupMismatch {
                expected: base.acting_group().to_string(),
                found: hom.target().to_string(),
            });
        }
        Ok(System::PulledBack {
            base: Box::new(base),
            hom,
        })
    }

    pub fn acting_group(&self) -> GroupCtx {
        match self {
            System::Bernoulli { group, .. } => group.clone(),
            System::Ledrappier => ledrappier_group(),
            System::PulledBack { hom, .. } => hom.source().clone(),
        }
    }

    /// The group indexing the coordinates of the underlying shift space.
    pub fn coordinate_group(&self) -> GroupCtx {
        match self {
            System::Bernoulli { group, .. } => group.clone(),
            System::Ledrappier => ledrappier_group(),
            System::PulledBack { base, .. } => base.coordinate_group(),
        }
    }

    pub fn alphabet_size(&self) -> usize {
        match self {
            System::Bernoulli { probs, .. } => probs.len(),
            System::Ledrappier => 2,
            System::PulledBack { base, .. } => base.alphabet_size(),
        }
    }

    pub fn validate_pattern(&self, a: &CylinderPattern) -> Result<()> {
        let coords = self.coordinate_group();
        let q = self.alphabet_size();
        for (s, &sym) in &a.constraints {
            coords.check(s)?;
            if sym as usize >= q {
                return Err(Error::InvalidSymbol { sym, alphabet: q });
            }
        }
        Ok(())
    }

    /// The coordinate displacement produced by `T_g`.
    pub fn coordinate_shift(&self, g: &GroupElement) -> Result<GroupElement> {
        match self {
            System::PulledBack { base, hom } => base.coordinate_shift(&hom.apply(g)?),
            _ => {
                let group = self.acting_group();
                group.check(g).map_err(|_| Error::GroupMismatch {
                    expected: group.to_string(),
                    found: g.to_string(),
                })?;
                Ok(g.clone())
            }
        }
    }

    /// The pattern of `T_g A`.
    pub fn translate(&self, g: &GroupElement, a: &CylinderPattern) -> Result<CylinderPattern> {
        self.validate_pattern(a)?;
        let shift = self.coordinate_shift(g)?;
        let coords = self.coordinate_group();
        let mut out = BTreeMap::new();
        for (s, &sym) in &a.constraints {
            out.insert(coords.add(s, &shift)?, sym);
        }
        Ok(CylinderPattern { constraints: out })
    }

    pub fn measure(&self, a: &CylinderPattern) -> Result<ExactMeasure> {
        self.validate_pattern(a)?;
        match self {
            System::Bernoulli { probs, .. } => ExactMeasure::new(
                a.constraints
                    .values()
                    .fold(BigRational::one(), |acc, &s| acc * &probs[s as usize]),
            ),
            System::Ledrappier => ledrappier_measure(a),
            System::PulledBack { base, .. } => base.measure(a),
        }
    }

    /// `μ(T_{g_1}A_1 ∩ … ∩ T_{g_r}A_r)`.
    pub fn correlate(&self, terms: &[(GroupElement, CylinderPattern)]) -> Result<ExactMeasure> {
        if terms.is_empty() {
            return Err(Error::Precondition("correlate needs at least one term".into()));
        }
        let mut merged: BTreeMap<GroupElement, u32> = BTreeMap::new();
        for (g, a) in terms {
            for (s, sym) in self.translate(g, a)?.constraints {
                match merged.get(&s) {
                    Some(&prev) if prev != sym => return Ok(ExactMeasure::zero()),
                    Some(_) => {}
                    None => {
                        merged.insert(s, sym);
                    }
                }
            }
        }
        self.measure(&CylinderPattern { constraints: merged })
    }

    /// `|μ(∩ T_{g_j}A_j) − Π μ(A_j)|`.
    pub fn mixing_gap(&self, terms: &[(GroupElement, CylinderPattern)]) -> Result<ExactMeasure> {
        let joint = self.correlate(terms)?;
        let marginals = terms
            .iter()
            .map(|(_, a)| self.measure(a))
            .collect::<Result<Vec<_>>>()?;
        Ok(joint.distance(&ExactMeasure::product(&marginals)))
    }

    /// Gap table of `μ(A_0 ∩ T_g A_1)` against `μ(A_0)μ(A_1)` over `gs`.
    pub fn mixing_evidence(
        &self,
        a0: &CylinderPattern,
        a1: &CylinderPattern,
        gs: &[GroupElement],
        epsilon: &BigRational,
    ) -> Result<MixingEvidence> {
        let distinct: std::collections::BTreeSet<_> = gs.iter().collect();
        if distinct.len() != gs.len() {
            return Err(Error::Precondition("mixing evidence needs distinct group elements".into()));
        }
        let zero = self.acting_group().zero();
        let m0 = self.measure(a0)?;
        let m1 = self.measure(a1)?;
        let product = ExactMeasure::product([&m0, &m1]);
        let mut rows: Vec<GapRow> = Vec::with_capacity(gs.len());
        let mut within = 0;
        let mut worst: Option<usize> = None;
        for g in gs {
            let correlation = self.correlate(&[(zero.clone(), a0.clone()), (g.clone(), a1.clone())])?;
            let gap = correlation.distance(&product);
            if gap.value() < epsilon {
                within += 1;
            } else if worst.is_none_or(|w: usize| gap > rows[w].gap) {
                worst = Some(rows.len());
            }
            rows.push(GapRow {
                g: g.clone(),
                correlation,
                gap,
            });
        }
        Ok(MixingEvidence {
            epsilon: epsilon.clone(),
            rows,
            within,
            worst,
        })
    }
}

fn ledrappier_group() -> GroupCtx {
    GroupCtx::int_vec(2)
        .expect("d = 2 is valid")
        .with_label("Ledrappier lattice")
}

/// Haar measure of a Ledrappier cylinder: `2^{-rank}` when the assigned bits
/// respect every dependency among the constrained coordinates, else 0.
fn ledrappier_measure(a: &CylinderPattern) -> Result<ExactMeasure> {
    if a.is_full() {
        return Ok(ExactMeasure::one());
    }
    let min_axis = |i: usize| -> BigInt {
        a.constraints
            .keys()
            .map(|s| s.coords()[i].clone())
            .min()
            .expect("non-empty")
    };
    let (min_u, min_v) = (min_axis(0), min_axis(1));
    let to_exp = |x: BigInt| -> Result<u128> {
        x.to_u128().filter(|&e| e < (1u128 << 126)).ok_or(Error::Guard {
            guard: "Ledrappier coordinate span",
            requested: u128::MAX,
            limit: 1u128 << 126,
        })
    };
    let mut echelon = Echelon::new();
    for (s, &sym) in &a.constraints {
        let du = to_exp(&s.coords()[0] - &min_u)?;
        let dv = to_exp(&s.coords()[1] - &min_v)?;
        let row = SparsePoly::shifted_binomial(du, dv)?;
        if echelon.insert(row, sym == 1) == Insertion::Inconsistent {
            return Ok(ExactMeasure::zero());
        }
    }
    Ok(ExactMeasure::dyadic(echelon.rank()))
}
