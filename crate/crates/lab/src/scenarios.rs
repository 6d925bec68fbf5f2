//! The twelve desk-scale scenarios.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use mixlab_core::combinatorics::colex;
use mixlab_core::exact::{format_ratio, ratio};
use mixlab_core::largeness::{
    default_battery, folner_averages, folner_density, ip_star_evidence, polynomial_sigma2_search, sigma_from_ip,
    sigma_star_evidence, sum_free_check, DensityVerdict, FsFamily, IntPolynomial, LargenessCert, SeedMatrix,
};
use mixlab_core::ramsey::{find_homogeneous, iterated_limit, rlimit_estimate, Coloring, SimplexArray};
use mixlab_core::{CylinderPattern, ExactMeasure, GroupCtx, GroupElement, Homomorphism, System};

use crate::config::*;
use crate::report::{Certificate, Report, Table, Verdict};
use crate::LabError;

type Res<T> = Result<T, LabError>;

struct Outcome {
    tables: Vec<Table>,
    certificates: Vec<Certificate>,
    verdict: Verdict,
}

fn verdict(pass: bool, line: impl Into<String>) -> Verdict {
    Verdict { pass, line: line.into() }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Res<Report> {
    cfg.validate()?;
    let start = Instant::now();
    use ExperimentConfig::*;
    let out = match cfg {
        LedrappierCounterexample(p) => ledrappier_counterexample(p)?,
        LedrappierSigma2Evidence(p) => ledrappier_sigma2_evidence(p)?,
        BernoulliRlimit(p) => bernoulli_rlimit(p)?,
        DiagonalZ(p) => diagonal_z(p)?,
        PullbackNonmixing(p) => pullback_nonmixing(p)?,
        PrimeSelectNonsigma(p) => prime_select_nonsigma(p)?,
        DensityOne(p) => density_one(p)?,
        CesaroWeakmixing(p) => cesaro_weakmixing(p)?,
        IpTruncated(p) => ip_truncated(p)?,
        PolynomialPaths(p) => polynomial_paths(p)?,
        RamseySelftest(p) => ramsey_selftest(p)?,
        SumfreeSelftest(p) => sumfree_selftest(p)?,
    };
    let inputs = serde_json::to_value(cfg).map_err(|e| LabError::Schema(e.to_string()))?["params"].take();
    Ok(Report {
        scenario: cfg.scenario().to_string(),
        inputs,
        tables: out.tables,
        certificates: out.certificates,
        verdict: out.verdict,
        wall_time_us: start.elapsed().as_micros() as u64,
    })
}

/// Collects the first error raised inside a `bool` predicate.
struct Trap(RefCell<Option<mixlab_core::Error>>);

impl Trap {
    fn new() -> Self {
        Trap(RefCell::new(None))
    }

    fn run(&self, f: impl FnOnce() -> mixlab_core::Result<bool>) -> bool {
        match f() {
            Ok(b) => b,
            Err(e) => {
                self.0.borrow_mut().get_or_insert(e);
                false
            }
        }
    }

    fn finish(self) -> Res<()> {
        match self.0.into_inner() {
            Some(e) => Err(e.into()),
            None => Ok(()),
        }
    }
}

fn tuple_str(t: &[GroupElement]) -> String {
    let parts: Vec<String> = t.iter().map(|g| g.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn alpha_str(a: &[usize]) -> String {
    let parts: Vec<String> = a.iter().map(|k| k.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

fn zero_pattern(sys: &System) -> CylinderPattern {
    CylinderPattern::single(sys.coordinate_group().zero(), 0)
}

fn product_of(sys: &System, patterns: &[CylinderPattern]) -> Res<BigRational> {
    let ms = patterns.iter().map(|a| sys.measure(a)).collect::<mixlab_core::Result<Vec<_>>>()?;
    Ok(ExactMeasure::product(&ms).into_inner())
}

/// `μ(A_0 ∩ T_{g_1}A_1 ∩ … ∩ T_{g_r}A_r)` for `g_0 = 0`.
fn diagonal_terms(sys: &System, gs: &[GroupElement], patterns: &[CylinderPattern]) -> Vec<(GroupElement, CylinderPattern)> {
    std::iter::once(sys.acting_group().zero())
        .chain(gs.iter().cloned())
        .zip(patterns.iter().cloned())
        .collect()
}

fn ledrappier_counterexample(p: &LedrappierParams) -> Res<Outcome> {
    let sys = System::ledrappier();
    let a = &p.pattern;
    sys.validate_pattern(a)?;
    let z2 = sys.acting_group();
    let mut triple = Table::new("triple", &["n", "correlation", "gap"]);
    let mut triple_gaps = Vec::new();
    for n in 1..=p.n_max {
        let big = BigInt::one() << n;
        let g1 = z2.element(vec![big.clone(), BigInt::zero()])?;
        let g2 = z2.element(vec![BigInt::zero(), big])?;
        let terms = diagonal_terms(&sys, &[g1, g2], &[a.clone(), a.clone(), a.clone()]);
        let c = sys.correlate(&terms)?;
        let gap = sys.mixing_gap(&terms)?;
        triple.push(vec![n.to_string(), c.to_string(), gap.to_string()]);
        triple_gaps.push(gap);
    }
    let mut pairs = Table::new("pairs", &["g", "correlation", "gap"]);
    let mut pair_max = ExactMeasure::zero();
    let r = p.window_radius;
    for u in -r..=r {
        for v in -r..=r {
            if (u, v) == (0, 0) {
                continue;
            }
            let g = z2.element_i64(&[u, v])?;
            let terms = diagonal_terms(&sys, std::slice::from_ref(&g), &[a.clone(), a.clone()]);
            let c = sys.correlate(&terms)?;
            let gap = sys.mixing_gap(&terms)?;
            pairs.push(vec![g.to_string(), c.to_string(), gap.to_string()]);
            pair_max = pair_max.max(gap);
        }
    }
    let persistent = triple_gaps.windows(2).all(|w| w[0] == w[1]) && !triple_gaps[0].is_zero();
    let pass = pair_max.is_zero() && persistent;
    let line = if pass {
        "2-mixing pair gaps all 0; triple gap persistent".to_string()
    } else {
        format!(
            "largest pair gap {pair_max}; triple gaps {}",
            if persistent { "persistent" } else { "not persistent" }
        )
    };
    Ok(Outcome {
        tables: vec![triple, pairs],
        certificates: vec![],
        verdict: verdict(pass, line),
    })
}

/// `(2^k, 0), (0, 2^k)` for `k = 1..=horizon`.
pub fn powers_of_two_family(horizon: usize) -> Res<FsFamily> {
    let z2 = GroupCtx::int_vec(2)?;
    let col = |axis: usize| -> Res<Vec<GroupElement>> {
        (1..=horizon)
            .map(|k| {
                let mut c = vec![BigInt::zero(); 2];
                c[axis] = BigInt::one() << k;
                Ok(z2.element(c)?)
            })
            .collect()
    };
    Ok(FsFamily::new(z2.clone(), vec![col(0)?, col(1)?])?)
}

fn ledrappier_sigma2_evidence(p: &Sigma2EvidenceParams) -> Res<Outcome> {
    let sys = System::ledrappier();
    let a = &p.pattern;
    sys.validate_pattern(a)?;
    let pats = [a.clone(), a.clone(), a.clone()];
    let gap = |t: &[GroupElement]| sys.mixing_gap(&diagonal_terms(&sys, t, &pats));
    let trap = Trap::new();
    let pred = |t: &[GroupElement]| trap.run(|| Ok(gap(t)?.value() < &p.epsilon));

    let fam = powers_of_two_family(p.horizon)?;
    let m1 = sigma_from_ip(&fam, 1)?;
    let sigma2 = sigma_from_ip(&fam, 2)?;
    let mut battery = vec![sigma2.clone()];
    battery.extend(default_battery(&GroupCtx::int_vec(2)?, 2, 2, p.horizon)?);

    let refute = sigma_star_evidence(pred, std::slice::from_ref(&m1))?;
    let evidence = sigma_star_evidence(pred, &battery)?;
    let refute_ok = matches!(refute, LargenessCert::RefutesSigmaStar { .. })
        && refute.verify_sigma(pred, std::slice::from_ref(&m1));
    let evidence_ok = matches!(evidence, LargenessCert::EvidenceSigmaStar { .. }) && evidence.verify_sigma(pred, &battery);
    trap.finish()?;

    let mut t2 = Table::new("sigma2", &["alpha", "g1", "g2", "correlation", "gap"]);
    for pt in sigma2.enumerate_sigma() {
        let terms = diagonal_terms(&sys, &pt.tuple, &pats);
        t2.push(vec![
            alpha_str(&pt.alpha),
            pt.tuple[0].to_string(),
            pt.tuple[1].to_string(),
            sys.correlate(&terms)?.to_string(),
            sys.mixing_gap(&terms)?.to_string(),
        ]);
    }
    let mut t1 = Table::new("m1", &["k", "g1", "g2", "correlation", "gap"]);
    for pt in m1.enumerate_sigma() {
        let terms = diagonal_terms(&sys, &pt.tuple, &pats);
        t1.push(vec![
            pt.alpha[0].to_string(),
            pt.tuple[0].to_string(),
            pt.tuple[1].to_string(),
            sys.correlate(&terms)?.to_string(),
            sys.mixing_gap(&terms)?.to_string(),
        ]);
    }
    let mut tb = Table::new("battery", &["seed", "alpha", "tuple", "gap"]);
    if let LargenessCert::EvidenceSigmaStar { witnesses, .. } = &evidence {
        for w in witnesses {
            tb.push(vec![
                w.index.to_string(),
                alpha_str(&w.alpha),
                tuple_str(&w.tuple),
                gap(&w.tuple)?.to_string(),
            ]);
        }
    }
    let pass = refute_ok && evidence_ok;
    let line = format!(
        "m=1 powers-of-two seed {}; tilde-Sigma_2 battery of {} seeds {}",
        if refute_ok { "refutes Sigma_1*" } else { "does not refute" },
        battery.len(),
        if evidence_ok { "all meet R_eps" } else { "not all meet R_eps" }
    );
    Ok(Outcome {
        tables: vec![t2, t1, tb],
        certificates: vec![
            Certificate::Largeness {
                label: "m1_refutation".into(),
                cert: refute,
            },
            Certificate::Largeness {
                label: "sigma2_evidence".into(),
                cert: evidence,
            },
        ],
        verdict: verdict(pass, line),
    })
}

/// The separated tilde-Σ_ℓ seed `g^{(j)}_{k,t} = (j+1)·spacing·(ℓ(k−1) + t + 1)` on ℤ.
pub fn separated_seed(ell: usize, horizon: usize, spacing: i64) -> Res<SeedMatrix> {
    let z = GroupCtx::int();
    Ok(SeedMatrix::from_fn(z, ell, ell, horizon, |j, t, k| {
        Ok(GroupElement::int(
            (j as i64 + 1) * spacing * (ell as i64 * (k as i64 - 1) + t as i64 + 1),
        ))
    })?)
}

fn bernoulli_rlimit(p: &RLimitParams) -> Res<Outcome> {
    let sys = System::fair_coin(GroupCtx::int());
    let patterns = p
        .patterns
        .clone()
        .unwrap_or_else(|| vec![zero_pattern(&sys); p.ell + 1]);
    let seed = separated_seed(p.ell, p.horizon, p.spacing)?;
    if let mixlab_core::largeness::SeedCheck::Fail(v) = seed.validate() {
        return Err(LabError::Schema(format!("seed fails validation: {v:?}")));
    }
    let mut table = Table::new("array", &["alpha", "tuple", "correlation"]);
    let arr = SimplexArray::from_fn(p.ell, p.horizon, |alpha| {
        let tuple = seed.tuple_at(alpha)?;
        let c = sys.correlate(&diagonal_terms(&sys, &tuple, &patterns))?;
        table.push(vec![alpha_str(alpha), tuple_str(&tuple), c.to_string()]);
        Ok(c.into_inner())
    })?;
    let product = product_of(&sys, &patterns)?;
    let est = rlimit_estimate(&arr, &p.epsilon, p.budget)?;
    let full: Vec<usize> = (1..=p.horizon).collect();
    let it = iterated_limit(&arr, &full, &p.epsilon, p.window, p.budget)?;
    let mut summary = Table::new("rlimit", &["value", "size", "min_s", "max_deviation", "exact", "iterated", "agrees"]);
    summary.push(vec![
        format_ratio(&est.value),
        est.size().to_string(),
        est.set[0].to_string(),
        format_ratio(&est.max_deviation),
        est.exact.to_string(),
        format_ratio(&it.value),
        it.agrees.to_string(),
    ]);
    let mut levels = Table::new("levels", &["depth", "spread"]);
    for l in &it.levels {
        levels.push(vec![l.depth.to_string(), format_ratio(&l.spread)]);
    }
    let pass = est.verify(&arr) && est.value == product && est.set == full && it.agrees;
    let line = format!(
        "R-limit {} over |S| = {} of N = {} (product {})",
        format_ratio(&est.value),
        est.size(),
        p.horizon,
        format_ratio(&product)
    );
    Ok(Outcome {
        tables: vec![table, summary, levels],
        certificates: vec![Certificate::Rlimit {
            label: "rlimit".into(),
            cert: est,
        }],
        verdict: verdict(pass, line),
    })
}

fn scaled(n: &BigInt, coeffs: &[i64]) -> Vec<GroupElement> {
    coeffs.iter().map(|&a| GroupElement::int(n * a)).collect()
}

fn diagonal_z(p: &DiagonalParams) -> Res<Outcome> {
    let z = GroupCtx::int();
    let sys = System::fair_coin(z.clone());
    let ell = p.coefficients.len();
    let patterns = p
        .patterns
        .clone()
        .unwrap_or_else(|| vec![zero_pattern(&sys); ell + 1]);
    let product = product_of(&sys, &patterns)?;
    let corr = |n: &BigInt| sys.correlate(&diagonal_terms(&sys, &scaled(n, &p.coefficients), &patterns));
    let in_r = |c: &ExactMeasure| (c.value() - &product).abs() < p.epsilon;

    let fam = z.canonical_folner(p.k_max);
    let mut diag = Table::new("diagonal", &["n", "correlation", "gap", "in_r"]);
    let mut memo: BTreeMap<BigInt, bool> = BTreeMap::new();
    for g in fam.window(p.k_max)? {
        let n = &g.coords()[0];
        let c = corr(n)?;
        let gap = (c.value() - &product).abs();
        diag.push(vec![n.to_string(), c.to_string(), format_ratio(&gap), in_r(&c).to_string()]);
        memo.insert(n.clone(), in_r(&c));
    }
    let density = folner_density(|g| Ok(memo[&g.coords()[0]]), &fam, p.k_max, &p.delta)?;
    let mut dens = Table::new("density", &["k", "density"]);
    for r in &density.ratios {
        dens.push(vec![r.k.to_string(), format_ratio(&r.ratio)]);
    }

    let trap = Trap::new();
    let pred = |t: &[GroupElement]| trap.run(|| Ok(in_r(&corr(&t[0].coords()[0])?)));
    let battery = default_battery(&z, ell, 1, p.seed_horizon)?;
    let cert = sigma_star_evidence(pred, &battery)?;
    let sigma_ok = cert.is_evidence() && cert.verify_sigma(pred, &battery);
    trap.finish()?;

    let mut tables = vec![dens, diag];
    let mut sanity_ok = true;
    if ell == 1 && p.coefficients[0] != 0 {
        let ns: Vec<BigInt> = memo.keys().cloned().collect();
        let gs: Vec<GroupElement> = ns.iter().map(|n| GroupElement::int(n * p.coefficients[0])).collect();
        let ev = sys.mixing_evidence(&patterns[0], &patterns[1], &gs, &p.epsilon)?;
        let mut sanity = Table::new("pair_sanity", &["n", "in_r", "mixing_within"]);
        for (n, row) in ns.iter().zip(&ev.rows) {
            let within = row.gap.value() < &p.epsilon;
            sanity_ok &= within == memo[n];
            sanity.push(vec![n.to_string(), memo[n].to_string(), within.to_string()]);
        }
        tables.push(sanity);
    }
    let pass = density.verdict == DensityVerdict::TendsToOne && sigma_ok && sanity_ok;
    let line = format!(
        "R_eps density {} at k = {} ({:?}); Sigma_{ell} battery {}",
        format_ratio(density.last().expect("k_max >= 1")),
        p.k_max,
        density.verdict,
        if sigma_ok { "all meet R_eps" } else { "has a miss" }
    );
    Ok(Outcome {
        tables,
        certificates: vec![Certificate::Largeness {
            label: "sigma_star".into(),
            cert,
        }],
        verdict: verdict(pass, line),
    })
}

fn pullback_nonmixing(p: &PullbackParams) -> Res<Outcome> {
    let fs = GroupCtx::fin_support();
    let sys = System::pulled_back(System::fair_coin(fs.clone()), Homomorphism::deinterleave())?;
    let a = zero_pattern(&sys);
    let mu = sys.measure(&a)?.into_inner();
    let expected_pair_gap = &mu - &mu * &mu;

    let mut pairs = Table::new("pairs", &["k", "g", "correlation", "gap"]);
    let mut pair_ok = true;
    for k in 1..=p.k_max {
        let g = fs.element_i64(&[k as i64])?;
        let terms = diagonal_terms(&sys, std::slice::from_ref(&g), &[a.clone(), a.clone()]);
        let c = sys.correlate(&terms)?;
        let gap = sys.mixing_gap(&terms)?;
        pair_ok &= gap.value() == &expected_pair_gap;
        pairs.push(vec![k.to_string(), g.to_string(), c.to_string(), gap.to_string()]);
    }

    let phi1 = Homomorphism::interleave();
    let phi2 = Homomorphism::compose(Homomorphism::scale(fs.clone(), 2), Homomorphism::interleave())?;
    let mut diag = Table::new("diagonal", &["seed", "alpha", "g", "correlation", "gap"]);
    let mut diag_ok = true;
    let mut count = 0;
    for (i, seed) in default_battery(&fs, 2, 1, p.seed_horizon)?.iter().enumerate() {
        for pt in seed.enumerate_sigma() {
            let g = &pt.tuple[0];
            let gs = [phi1.apply(g)?, phi2.apply(g)?];
            let terms = diagonal_terms(&sys, &gs, &[a.clone(), a.clone(), a.clone()]);
            let c = sys.correlate(&terms)?;
            let gap = sys.mixing_gap(&terms)?;
            diag_ok &= gap.is_zero();
            count += 1;
            diag.push(vec![i.to_string(), alpha_str(&pt.alpha), g.to_string(), c.to_string(), gap.to_string()]);
        }
    }
    let k1 = phi1.kernel_finite()?;
    let k2 = phi2.kernel_finite()?;
    let kernels_ok = k1.finite && k2.finite;
    let pass = pair_ok && diag_ok && kernels_ok;
    let line = format!(
        "pair gap {} along (k,0,0,...) for k = 1..{}: {}; phi-diagonal triple gaps 0 at {} seed sums: {}",
        format_ratio(&expected_pair_gap),
        p.k_max,
        if pair_ok { "not mixing" } else { "unexpected gap" },
        count,
        if diag_ok { "yes" } else { "no" }
    );
    Ok(Outcome {
        tables: vec![pairs, diag],
        certificates: vec![
            Certificate::Kernel {
                label: "phi1".into(),
                report: k1,
            },
            Certificate::Kernel {
                label: "phi2".into(),
                report: k2,
            },
        ],
        verdict: verdict(pass, line),
    })
}

fn prime_select_nonsigma(p: &PrimeSelectParams) -> Res<Outcome> {
    let fs = GroupCtx::fin_support();
    let sys = System::fair_coin(fs.clone());
    let ell = p.primes.len();
    let phis = p
        .primes
        .iter()
        .map(|&q| Homomorphism::prime_select(q))
        .collect::<mixlab_core::Result<Vec<_>>>()?;
    let a = zero_pattern(&sys);
    let patterns = vec![a.clone(); ell + 1];
    let mu = sys.measure(&a)?.into_inner();
    let product = product_of(&sys, &patterns)?;
    let corr = |g: &GroupElement| -> mixlab_core::Result<ExactMeasure> {
        let gs = phis.iter().map(|phi| phi.apply(g)).collect::<mixlab_core::Result<Vec<_>>>()?;
        sys.correlate(&diagonal_terms(&sys, &gs, &patterns))
    };
    let trap = Trap::new();
    let pred = |t: &[GroupElement]| trap.run(|| Ok((corr(&t[0])?.value() - &product).abs() < p.epsilon));
    let seed = SeedMatrix::from_fn(fs.clone(), ell, 1, p.horizon, |_, t, k| {
        fs.element_i64(&[(ell * k + t) as i64])
    })?;
    let cert = sigma_star_evidence(pred, std::slice::from_ref(&seed))?;
    let refuted =
        matches!(cert, LargenessCert::RefutesSigmaStar { .. }) && cert.verify_sigma(pred, std::slice::from_ref(&seed));
    trap.finish()?;

    let mut table = Table::new("kernel_sums", &["alpha", "g", "correlation", "gap"]);
    let mut all_mu = true;
    for pt in seed.enumerate_sigma() {
        let c = corr(&pt.tuple[0])?;
        all_mu &= c.value() == &mu;
        table.push(vec![
            alpha_str(&pt.alpha),
            pt.tuple[0].to_string(),
            c.to_string(),
            format_ratio(&(c.value() - &product).abs()),
        ]);
    }
    let mut certificates = vec![Certificate::Largeness {
        label: "sigma_refutation".into(),
        cert,
    }];
    for (q, phi) in p.primes.iter().zip(&phis) {
        certificates.push(Certificate::Kernel {
            label: format!("prime_select_{q}"),
            report: phi.kernel_finite()?,
        });
    }
    let pass = refuted && all_mu;
    let line = format!(
        "diagonal correlation {} = mu(A) on all {} kernel sums (product {}): {}",
        format_ratio(&mu),
        table.rows.len(),
        format_ratio(&product),
        if refuted { "Sigma_ell* refuted" } else { "not refuted" }
    );
    Ok(Outcome {
        tables: vec![table],
        certificates,
        verdict: verdict(pass, line),
    })
}

fn density_one(p: &DensityOneParams) -> Res<Outcome> {
    let z = GroupCtx::int();
    let sys = System::fair_coin(z.clone());
    let a = zero_pattern(&sys);
    let pair = [a.clone(), a.clone()];
    let pair_product = product_of(&sys, &pair)?;
    let diag_patterns = vec![a.clone(); p.cesaro_coefficients.len() + 1];
    let diag_product = product_of(&sys, &diag_patterns)?;
    let fam = z.canonical_folner(p.k_max);

    let complement = folner_density(
        |g| {
            let c = sys.correlate(&diagonal_terms(&sys, std::slice::from_ref(g), &pair))?;
            Ok((c.value() - &pair_product).abs() >= p.epsilon)
        },
        &fam,
        p.k_max,
        &ratio(1, 20),
    )?;
    let cesaro = folner_averages(
        |g| {
            let gs = scaled(&g.coords()[0], &p.cesaro_coefficients);
            let c = sys.correlate(&diagonal_terms(&sys, &gs, &diag_patterns))?;
            Ok((c.value() - &diag_product).abs())
        },
        &fam,
        p.k_max,
    )?;
    let mut table = Table::new("density", &["k", "complement_density", "cesaro_average"]);
    for (d, c) in complement.ratios.iter().zip(&cesaro) {
        table.push(vec![d.k.to_string(), format_ratio(&d.ratio), format_ratio(&c.ratio)]);
    }
    let last_d = complement.last().expect("k_max >= 1");
    let last_c = &cesaro.last().expect("k_max >= 1").ratio;
    let bound = ratio(1, 2 * p.k_max as i64 + 1);
    let pass = last_d <= &bound && last_c <= &p.epsilon;
    let line = format!(
        "complement of R_eps has density {} <= {} at k = {}; Cesaro gap average {} vs eps {}",
        format_ratio(last_d),
        format_ratio(&bound),
        p.k_max,
        format_ratio(last_c),
        format_ratio(&p.epsilon)
    );
    Ok(Outcome {
        tables: vec![table],
        certificates: vec![],
        verdict: verdict(pass, line),
    })
}

fn cesaro_weakmixing(p: &CesaroParams) -> Res<Outcome> {
    let sys = p.system.build()?;
    let patterns = p.patterns.clone().unwrap_or_else(|| vec![zero_pattern(&sys); 2]);
    let product = product_of(&sys, &patterns)?;
    let group = sys.acting_group();
    let fam = group.canonical_folner(p.k_max);
    let mut gaps: BTreeMap<GroupElement, BigRational> = BTreeMap::new();
    for g in fam.window(p.k_max)? {
        let c = sys.correlate(&diagonal_terms(&sys, std::slice::from_ref(&g), &patterns))?;
        gaps.insert(g, (c.value() - &product).abs());
    }
    let averages = folner_averages(|g| Ok(gaps[g].clone()), &fam, p.k_max)?;
    let density = folner_density(|g| Ok(gaps[g] < p.epsilon), &fam, p.k_max, &p.delta)?;
    let mut table = Table::new("cesaro", &["k", "gap_average", "r_eps_density"]);
    for (a, d) in averages.iter().zip(&density.ratios) {
        table.push(vec![a.k.to_string(), format_ratio(&a.ratio), format_ratio(&d.ratio)]);
    }
    let last = &averages.last().expect("k_max >= 1").ratio;
    let pass = last <= &p.epsilon && density.verdict == DensityVerdict::TendsToOne;
    let line = format!(
        "Cesaro gap average {} at k = {}; R_eps density {:?}",
        format_ratio(last),
        p.k_max,
        density.verdict
    );
    Ok(Outcome {
        tables: vec![table],
        certificates: vec![],
        verdict: verdict(pass, line),
    })
}

fn ip_truncated(p: &IpParams) -> Res<Outcome> {
    let sys = p.system.build()?;
    let patterns = p.patterns.clone().unwrap_or_else(|| vec![zero_pattern(&sys); 2]);
    let product = product_of(&sys, &patterns)?;
    let fam = FsFamily::scalar(sys.acting_group(), p.generators.clone())?;
    if let mixlab_core::largeness::SeedCheck::Fail(v) = fam.validate() {
        return Err(LabError::Schema(format!("generators fail validation: {v:?}")));
    }
    let corr = |g: &GroupElement| sys.correlate(&diagonal_terms(&sys, std::slice::from_ref(g), &patterns));
    let mut values = Vec::new();
    for pt in fam.enumerate()? {
        let c = corr(&pt.tuple[0])?.into_inner();
        values.push((pt.alpha[0], c));
    }
    let mut table = Table::new("fs_limit", &["threshold", "count", "min", "max", "spread", "max_gap"]);
    let mut last = (BigRational::zero(), BigRational::zero());
    for &t in &p.thresholds {
        let tail: Vec<&BigRational> = values.iter().filter(|(m, _)| *m > t).map(|(_, c)| c).collect();
        let lo = tail.iter().copied().min().expect("threshold below horizon");
        let hi = tail.iter().copied().max().expect("threshold below horizon");
        let max_gap = tail.iter().map(|c| (*c - &product).abs()).max().expect("non-empty");
        table.push(vec![
            t.to_string(),
            tail.len().to_string(),
            format_ratio(lo),
            format_ratio(hi),
            format_ratio(&(hi - lo)),
            format_ratio(&max_gap),
        ]);
        last = (hi - lo, max_gap);
    }
    let trap = Trap::new();
    let pred = |t: &[GroupElement]| trap.run(|| Ok((corr(&t[0])?.value() - &product).abs() < p.epsilon));
    let cert = ip_star_evidence(pred, std::slice::from_ref(&fam))?;
    let cert_ok = cert.is_evidence() && cert.verify_ip(pred, std::slice::from_ref(&fam));
    trap.finish()?;
    let pass = last.0 <= p.epsilon && last.1 < p.epsilon && cert_ok;
    let line = format!(
        "FS spread {} and max gap {} beyond threshold {}; IP* evidence: {}",
        format_ratio(&last.0),
        format_ratio(&last.1),
        p.thresholds.last().expect("non-empty"),
        cert_ok
    );
    Ok(Outcome {
        tables: vec![table],
        certificates: vec![Certificate::Largeness {
            label: "ip_star".into(),
            cert,
        }],
        verdict: verdict(pass, line),
    })
}

fn polynomial_paths(p: &PolynomialParams) -> Res<Outcome> {
    let poly = IntPolynomial::from_i64s(&p.coefficients);
    let found = polynomial_sigma2_search(&poly, p.window, p.repeats)?;
    let mut table = Table::new("witness", &["a", "b", "n"]);
    if let Some(w) = &found {
        for n in &w.ns {
            table.push(vec![w.a.to_string(), w.b.to_string(), n.to_string()]);
        }
    }
    let line = match &found {
        None => format!(
            "no a < b with {} shifts n placing a+n and b+n among the values up to {}",
            p.repeats, p.window
        ),
        Some(w) => format!(
            "a = {}, b = {} with n in {:?} puts a+n and b+n among the values up to {}",
            w.a, w.b, w.ns, p.window
        ),
    };
    Ok(Outcome {
        tables: vec![table],
        certificates: vec![],
        verdict: verdict(found.is_none(), line),
    })
}

fn ramsey_selftest(p: &RamseyParams) -> Res<Outcome> {
    let edges: Vec<Vec<usize>> = colex(6, 2).collect();
    let total = 1u32 << edges.len();
    let mut hits = 0u32;
    for mask in 0..total {
        let col = Coloring::from_fn(2, 6, |a| {
            let i = edges.iter().position(|e| e == a).expect("edge");
            mask >> i & 1
        })?;
        let r = find_homogeneous(&col, 3, p.budget)?;
        if r.target_met && r.cert.verify(&col) {
            hits += 1;
        }
    }
    let pent = Coloring::from_fn(2, 5, |a| u32::from(!matches!(a[1] - a[0], 1 | 4)))?;
    let best = find_homogeneous(&pent, 3, p.budget)?;
    let mut table = Table::new("checks", &["check", "cases", "result"]);
    table.push(vec![
        "2-colourings of [6]^(2) with a homogeneous 3-set".into(),
        total.to_string(),
        hits.to_string(),
    ]);
    table.push(vec![
        "maximum homogeneous set, pentagon colouring of [5]^(2)".into(),
        "1".into(),
        best.cert.size.to_string(),
    ]);
    let pass = hits == total && best.exact && best.cert.size == 2 && best.cert.verify(&pent);
    let line = format!(
        "all {total} colorings of [6]^(2) admit size-3 homogeneous set: {}",
        if pass { "pass" } else { "fail" }
    );
    Ok(Outcome {
        tables: vec![table],
        certificates: vec![Certificate::Homogeneous {
            label: "pentagon".into(),
            cert: best.cert,
        }],
        verdict: verdict(pass, line),
    })
}

fn sumfree_selftest(p: &SumFreeParams) -> Res<Outcome> {
    let base = BigInt::from(p.base);
    let pow = |k: u32| num_traits::pow(base.clone(), k as usize);
    let mut values = Vec::new();
    for k2 in 1..=p.k_max {
        for k1 in 1..k2 {
            values.push(pow(k1) + pow(k2));
        }
    }
    let main = sum_free_check(&values)?;
    let control_values: Vec<BigInt> = [1, 2, 3].into_iter().map(BigInt::from).collect();
    let control = sum_free_check(&control_values)?;
    let witness = |r: &mixlab_core::largeness::SumFreeReport| {
        r.witness
            .as_ref()
            .map_or(String::new(), |w| format!("{} + {} = {}", w.a, w.b, w.c))
    };
    let mut table = Table::new("checks", &["set", "size", "sum_free", "witness"]);
    table.push(vec![
        format!("{}^k1 + {}^k2, 1 <= k1 < k2 <= {}", p.base, p.base, p.k_max),
        values.len().to_string(),
        main.sum_free.to_string(),
        witness(&main),
    ]);
    table.push(vec!["{1,2,3}".into(), "3".into(), control.sum_free.to_string(), witness(&control)]);
    let pass = main.sum_free && !control.sum_free;
    let line = format!(
        "{} pairwise sums of powers of {}: {}",
        values.len(),
        p.base,
        if main.sum_free { "sum-free" } else { "not sum-free" }
    );
    Ok(Outcome {
        tables: vec![table],
        certificates: vec![],
        verdict: verdict(pass, line),
    })
}
