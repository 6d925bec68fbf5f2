//! Experiment configurations: a scenario id plus its typed parameters.

use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use mixlab_core::exact::{ratio, ratio_str};
use mixlab_core::ramsey::DEFAULT_BUDGET;
use mixlab_core::{CylinderPattern, GroupCtx, GroupElement, System};

use crate::LabError;

pub const SCENARIOS: [&str; 12] = [
    "ledrappier_counterexample",
    "ledrappier_sigma2_evidence",
    "bernoulli_rlimit",
    "diagonal_Z",
    "pullback_nonmixing",
    "prime_select_nonsigma",
    "density_one",
    "cesaro_weakmixing",
    "ip_truncated",
    "polynomial_paths",
    "ramsey_selftest",
    "sumfree_selftest",
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scenario", content = "params", rename_all = "snake_case")]
pub enum ExperimentConfig {
    LedrappierCounterexample(LedrappierParams),
    #[serde(rename = "ledrappier_sigma2_evidence")]
    LedrappierSigma2Evidence(Sigma2EvidenceParams),
    BernoulliRlimit(RLimitParams),
    #[serde(rename = "diagonal_Z")]
    DiagonalZ(DiagonalParams),
    PullbackNonmixing(PullbackParams),
    PrimeSelectNonsigma(PrimeSelectParams),
    DensityOne(DensityOneParams),
    CesaroWeakmixing(CesaroParams),
    IpTruncated(IpParams),
    PolynomialPaths(PolynomialParams),
    RamseySelftest(RamseyParams),
    SumfreeSelftest(SumFreeParams),
}

fn half_pattern(coord: GroupElement) -> CylinderPattern {
    CylinderPattern::single(coord, 0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LedrappierParams {
    pub n_max: u32,
    pub window_radius: i64,
    pub pattern: CylinderPattern,
}

impl Default for LedrappierParams {
    fn default() -> Self {
        Self {
            n_max: 10,
            window_radius: 8,
            pattern: half_pattern(GroupElement::from_i64s(&[0, 0])),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Sigma2EvidenceParams {
    pub horizon: usize,
    #[serde(with = "ratio_str")]
    pub epsilon: BigRational,
    pub pattern: CylinderPattern,
}

impl Default for Sigma2EvidenceParams {
    fn default() -> Self {
        Self {
            horizon: 8,
            epsilon: ratio(1, 16),
            pattern: half_pattern(GroupElement::from_i64s(&[0, 0])),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RLimitParams {
    pub ell: usize,
    pub horizon: usize,
    #[serde(with = "ratio_str")]
    pub epsilon: BigRational,
    /// Multiplier separating the seed columns; should exceed the pattern diameters.
    pub spacing: i64,
    /// `A_0, …, A_ℓ`; defaults to `ℓ + 1` copies of `{x(0) = 0}`.
    pub patterns: Option<Vec<CylinderPattern>>,
    pub window: usize,
    pub budget: u64,
}

impl Default for RLimitParams {
    fn default() -> Self {
        Self {
            ell: 2,
            horizon: 14,
            epsilon: ratio(1, 100),
            spacing: 10,
            patterns: None,
            window: 3,
            budget: DEFAULT_BUDGET,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DiagonalParams {
    pub coefficients: Vec<i64>,
    #[serde(with = "ratio_str")]
    pub epsilon: BigRational,
    pub k_max: usize,
    #[serde(with = "ratio_str")]
    pub delta: BigRational,
    pub seed_horizon: usize,
    pub patterns: Option<Vec<CylinderPattern>>,
}

impl Default for DiagonalParams {
    fn default() -> Self {
        Self {
            coefficients: vec![1, 2],
            epsilon: ratio(1, 100),
            k_max: 100,
            delta: ratio(1, 20),
            seed_horizon: 8,
            patterns: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PullbackParams {
    pub k_max: usize,
    pub seed_horizon: usize,
}

impl Default for PullbackParams {
    fn default() -> Self {
        Self {
            k_max: 10,
            seed_horizon: 6,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PrimeSelectParams {
    pub primes: Vec<u64>,
    pub horizon: usize,
    #[serde(with = "ratio_str")]
    pub epsilon: BigRational,
}

impl Default for PrimeSelectParams {
    fn default() -> Self {
        Self {
            primes: vec![2, 3],
            horizon: 6,
            epsilon: ratio(1, 16),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DensityOneParams {
    #[serde(with = "ratio_str")]
    pub epsilon: BigRational,
    pub k_max: usize,
    pub cesaro_coefficients: Vec<i64>,
}

impl Default for DensityOneParams {
    fn default() -> Self {
        Self {
            epsilon: ratio(1, 100),
            k_max: 200,
            cesaro_coefficients: vec![1, 2],
        }
    }
}

/// A measure-preserving system by name.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SystemSpec {
    Bernoulli {
        group: GroupCtx,
        #[serde(default = "fair_probs", with = "ratio_vec")]
        probs: Vec<BigRational>,
    },
    Ledrappier,
}

fn fair_probs() -> Vec<BigRational> {
    vec![ratio(1, 2), ratio(1, 2)]
}

mod ratio_vec {
    use mixlab_core::exact::{format_ratio, parse_ratio};
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(format_ratio))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| parse_ratio(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

impl SystemSpec {
    pub fn build(&self) -> Result<System, LabError> {
        Ok(match self {
            SystemSpec::Bernoulli { group, probs } => System::bernoulli(group.clone(), probs.clone())?,
            SystemSpec::Ledrappier => System::ledrappier(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CesaroParams {
    pub system: SystemSpec,
    #[serde(with = "ratio_str")]
    pub epsilon: BigRational,
    pub k_max: usize,
    #[serde(with = "ratio_str")]
    pub delta: BigRational,
    /// `A_0, A_1`; defaults to `{x(0) = 0}` twice.
    pub patterns: Option<Vec<CylinderPattern>>,
}

impl Default for CesaroParams {
    fn default() -> Self {
        Self {
            system: SystemSpec::Ledrappier,
            epsilon: ratio(1, 100),
            k_max: 30,
            delta: ratio(1, 20),
            patterns: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IpParams {
    pub system: SystemSpec,
    pub generators: Vec<GroupElement>,
    pub thresholds: Vec<usize>,
    #[serde(with = "ratio_str")]
    pub epsilon: BigRational,
    pub patterns: Option<Vec<CylinderPattern>>,
}

impl Default for IpParams {
    fn default() -> Self {
        Self {
            system: SystemSpec::Bernoulli {
                group: GroupCtx::int(),
                probs: fair_probs(),
            },
            generators: (1..=10).map(|k| GroupElement::int(1i64 << k)).collect(),
            thresholds: vec![0, 2, 4, 6],
            epsilon: ratio(1, 100),
            patterns: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PolynomialParams {
    /// Coefficients in ascending degree.
    pub coefficients: Vec<i64>,
    pub window: u64,
    pub repeats: usize,
}

impl Default for PolynomialParams {
    fn default() -> Self {
        Self {
            coefficients: vec![0, 0, 1],
            window: 1_000_000,
            repeats: 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RamseyParams {
    pub budget: u64,
}

impl Default for RamseyParams {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SumFreeParams {
    pub base: u32,
    pub k_max: u32,
}

impl Default for SumFreeParams {
    fn default() -> Self {
        Self { base: 3, k_max: 12 }
    }
}

fn guard(name: &'static str, requested: u128, limit: u128) -> Result<(), LabError> {
    if requested > limit {
        return Err(LabError::Guard {
            guard: name,
            requested,
            limit,
        });
    }
    Ok(())
}

fn positive(name: &str, eps: &BigRational) -> Result<(), LabError> {
    if !eps.is_positive() {
        return Err(LabError::Schema(format!("{name} must be positive")));
    }
    Ok(())
}

fn below_one(name: &str, delta: &BigRational) -> Result<(), LabError> {
    positive(name, delta)?;
    if delta >= &BigRational::one() {
        return Err(LabError::Schema(format!("{name} must be below 1")));
    }
    Ok(())
}

impl ExperimentConfig {
    /// Parses a config, treating a missing `params` object as all defaults.
    pub fn from_json(text: &str) -> Result<Self, LabError> {
        let mut value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| LabError::Schema(e.to_string()))?;
        if let Some(obj) = value.as_object_mut() {
            obj.entry("params").or_insert_with(|| serde_json::json!({}));
        }
        let cfg: Self = serde_json::from_value(value).map_err(|e| LabError::Schema(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn scenario(&self) -> &'static str {
        use ExperimentConfig::*;
        let i = match self {
            LedrappierCounterexample(_) => 0,
            LedrappierSigma2Evidence(_) => 1,
            BernoulliRlimit(_) => 2,
            DiagonalZ(_) => 3,
            PullbackNonmixing(_) => 4,
            PrimeSelectNonsigma(_) => 5,
            DensityOne(_) => 6,
            CesaroWeakmixing(_) => 7,
            IpTruncated(_) => 8,
            PolynomialPaths(_) => 9,
            RamseySelftest(_) => 10,
            SumfreeSelftest(_) => 11,
        };
        SCENARIOS[i]
    }

    /// The default config of a scenario.
    pub fn default_for(scenario: &str) -> Result<Self, LabError> {
        Self::from_json(&format!(r#"{{"scenario":{scenario:?}}}"#))
    }

    /// Overrides the Ramsey search budget where the scenario has one.
    pub fn set_budget(&mut self, budget: u64) {
        match self {
            ExperimentConfig::BernoulliRlimit(p) => p.budget = budget,
            ExperimentConfig::RamseySelftest(p) => p.budget = budget,
            _ => {}
        }
    }

    pub fn validate(&self) -> Result<(), LabError> {
        use ExperimentConfig::*;
        match self {
            LedrappierCounterexample(p) => {
                guard("ledrappier n_max", p.n_max as u128, 100)?;
                guard("ledrappier window radius", p.window_radius.unsigned_abs() as u128, 50)?;
                if p.n_max == 0 || p.window_radius < 1 {
                    return Err(LabError::Schema("n_max and window_radius must be positive".into()));
                }
            }
            LedrappierSigma2Evidence(p) => {
                guard("seed horizon", p.horizon as u128, 16)?;
                if p.horizon < 2 {
                    return Err(LabError::Schema("horizon must be at least 2".into()));
                }
                positive("epsilon", &p.epsilon)?;
            }
            BernoulliRlimit(p) => {
                positive("epsilon", &p.epsilon)?;
                guard("ell", p.ell as u128, 4)?;
                guard("seed horizon", p.horizon as u128, 40)?;
                if p.ell == 0 || p.horizon < p.ell + p.window || p.spacing <= 0 || p.window == 0 {
                    return Err(LabError::Schema(
                        "need ell >= 1, window >= 1, horizon >= ell + window and spacing > 0".into(),
                    ));
                }
                if let Some(ps) = &p.patterns {
                    if ps.len() != p.ell + 1 {
                        return Err(LabError::Schema(format!("expected {} patterns", p.ell + 1)));
                    }
                }
            }
            DiagonalZ(p) => {
                positive("epsilon", &p.epsilon)?;
                below_one("delta", &p.delta)?;
                guard("Følner k_max", p.k_max as u128, 5000)?;
                guard("seed horizon", p.seed_horizon as u128, 16)?;
                guard("ell", p.coefficients.len() as u128, 4)?;
                if p.coefficients.is_empty() || p.k_max == 0 || p.seed_horizon < p.coefficients.len() {
                    return Err(LabError::Schema(
                        "need at least one coefficient, k_max >= 1 and seed_horizon >= ell".into(),
                    ));
                }
                if let Some(ps) = &p.patterns {
                    if ps.len() != p.coefficients.len() + 1 {
                        return Err(LabError::Schema(format!("expected {} patterns", p.coefficients.len() + 1)));
                    }
                }
            }
            PullbackNonmixing(p) => {
                guard("k_max", p.k_max as u128, 1000)?;
                guard("seed horizon", p.seed_horizon as u128, 16)?;
                if p.k_max == 0 || p.seed_horizon < 2 {
                    return Err(LabError::Schema("need k_max >= 1 and seed_horizon >= 2".into()));
                }
            }
            PrimeSelectNonsigma(p) => {
                positive("epsilon", &p.epsilon)?;
                guard("seed horizon", p.horizon as u128, 16)?;
                guard("ell", p.primes.len() as u128, 4)?;
                if p.primes.is_empty() || p.horizon < p.primes.len() {
                    return Err(LabError::Schema("need at least one prime and horizon >= ell".into()));
                }
            }
            DensityOne(p) => {
                positive("epsilon", &p.epsilon)?;
                guard("Følner k_max", p.k_max as u128, 5000)?;
                guard("ell", p.cesaro_coefficients.len() as u128, 4)?;
                if p.k_max == 0 || p.cesaro_coefficients.is_empty() {
                    return Err(LabError::Schema("need k_max >= 1 and a coefficient".into()));
                }
            }
            CesaroWeakmixing(p) => {
                positive("epsilon", &p.epsilon)?;
                below_one("delta", &p.delta)?;
                if p.k_max == 0 {
                    return Err(LabError::Schema("k_max must be positive".into()));
                }
                let fam = p.system.build()?.acting_group().canonical_folner(p.k_max);
                guard("Følner window size", fam.window_size(p.k_max), 1_000_000)?;
                if let Some(ps) = &p.patterns {
                    if ps.len() != 2 {
                        return Err(LabError::Schema("expected 2 patterns".into()));
                    }
                }
            }
            IpTruncated(p) => {
                positive("epsilon", &p.epsilon)?;
                guard("FS horizon", p.generators.len() as u128, 20)?;
                if p.generators.is_empty() || p.thresholds.is_empty() {
                    return Err(LabError::Schema("need generators and thresholds".into()));
                }
                if p.thresholds.iter().any(|&t| t >= p.generators.len()) {
                    return Err(LabError::Schema("every threshold must be below the horizon".into()));
                }
                if let Some(ps) = &p.patterns {
                    if ps.len() != 2 {
                        return Err(LabError::Schema("expected 2 patterns".into()));
                    }
                }
            }
            PolynomialPaths(p) => {
                guard("polynomial window", p.window as u128, 1_000_000)?;
                if p.repeats == 0 {
                    return Err(LabError::Schema("repeats must be positive".into()));
                }
            }
            RamseySelftest(_) => {}
            SumfreeSelftest(p) => {
                guard("sum-free exponent", p.k_max as u128, 40)?;
                if p.base < 2 {
                    return Err(LabError::Schema("base must be at least 2".into()));
                }
            }
        }
        Ok(())
    }
}
