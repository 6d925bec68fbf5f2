//! Acceptance suite: one PASS/FAIL line per criterion, with its runtime and limit.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use mixlab::report::Certificate;
use mixlab::{run_experiment, ExperimentConfig, Report};
use mixlab_core::combinatorics::colex;
use mixlab_core::exact::{format_ratio, ratio};
use mixlab_core::largeness::{
    admissible_check, polynomial_sigma2_search, sum_free_check, Functional, IntPolynomial, LargenessCert,
};
use mixlab_core::ramsey::{find_homogeneous, Coloring, DEFAULT_BUDGET};
use mixlab_core::{CylinderPattern, GroupCtx, GroupElement, System};

type Check = Result<(), String>;
type Criterion = (&'static str, Duration, fn() -> Check);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn run(name: &str) -> Result<Report, String> {
    let cfg = ExperimentConfig::default_for(name).map_err(|e| e.to_string())?;
    run_experiment(&cfg).map_err(|e| e.to_string())
}

fn column<'a>(rep: &'a Report, table: &str, col: &str) -> Result<Vec<&'a str>, String> {
    let t = rep.table(table).ok_or_else(|| format!("{} has no table {table}", rep.scenario))?;
    let i = t.columns.iter().position(|c| c == col).ok_or_else(|| format!("no column {col}"))?;
    Ok(t.rows.iter().map(|r| r[i].as_str()).collect())
}

fn ledrappier_non_three_mixing() -> Check {
    let rep = run("ledrappier_counterexample")?;
    let corr = column(&rep, "triple", "correlation")?;
    let gaps = column(&rep, "triple", "gap")?;
    ensure(corr.len() == 10 && corr.iter().all(|c| *c == "1/4"), || format!("triple correlations {corr:?}"))?;
    ensure(gaps.iter().all(|g| *g == "1/8"), || format!("triple gaps {gaps:?}"))?;
    let pair = column(&rep, "pairs", "gap")?;
    ensure(pair.len() == 17 * 17 - 1 && pair.iter().all(|g| *g == "0/1"), || {
        "nonzero pair gap in the 17x17 window".into()
    })?;
    // μ(A) = 1/2 so the gap is 1/4 − 1/8.
    let sys = System::ledrappier();
    let a = CylinderPattern::single(GroupElement::from_i64s(&[0, 0]), 0);
    ensure(sys.measure(&a).map_err(|e| e.to_string())?.value() == &ratio(1, 2), || "mu(A) != 1/2".into())?;
    ensure(rep.verdict.pass, || rep.verdict.line.clone())
}

fn ledrappier_dichotomy() -> Check {
    let rep = run("ledrappier_sigma2_evidence")?;
    let mut refuted = false;
    let mut evidence = false;
    for c in &rep.certificates {
        if let Certificate::Largeness { cert, .. } = c {
            match cert {
                LargenessCert::RefutesSigmaStar { m: 1, .. } => refuted = true,
                LargenessCert::EvidenceSigmaStar { .. } => evidence = true,
                _ => {}
            }
        }
    }
    ensure(refuted, || "no refutation for the m=1 seed".into())?;
    ensure(evidence, || "no evidence for the tilde-Sigma_2 battery".into())?;
    let m1 = column(&rep, "m1", "gap")?;
    ensure(m1.len() == 8 && m1.iter().all(|g| *g == "1/8"), || format!("m=1 gaps {m1:?}"))?;
    let sys = System::ledrappier();
    let a = CylinderPattern::single(GroupElement::from_i64s(&[0, 0]), 0);
    for k2 in 2..=8u32 {
        for k1 in 1..k2 {
            let s = (BigInt::one() << k1) + (BigInt::one() << k2);
            let terms = [
                (GroupElement::from_i64s(&[0, 0]), a.clone()),
                (GroupElement::from_coords(vec![s.clone(), BigInt::zero()]), a.clone()),
                (GroupElement::from_coords(vec![BigInt::zero(), s]), a.clone()),
            ];
            let c = sys.correlate(&terms).map_err(|e| e.to_string())?;
            ensure(c.value() == &ratio(1, 8), || format!("spot value {c} at k = ({k1},{k2})"))?;
        }
    }
    ensure(rep.verdict.pass, || rep.verdict.line.clone())
}

fn bernoulli_rlimit() -> Check {
    let rep = run("bernoulli_rlimit")?;
    let xs = column(&rep, "array", "correlation")?;
    ensure(xs.len() == 91 && xs.iter().all(|x| *x == "1/8"), || "array is not constantly 1/8".into())?;
    let est = rep
        .certificates
        .iter()
        .find_map(|c| match c {
            Certificate::Rlimit { cert, .. } => Some(cert),
            _ => None,
        })
        .ok_or("no R-limit certificate")?;
    ensure(est.value == ratio(1, 8), || format!("v = {}", format_ratio(&est.value)))?;
    ensure(est.set == (1..=14).collect::<Vec<_>>(), || format!("S = {:?}", est.set))?;
    ensure(rep.verdict.pass, || rep.verdict.line.clone())
}

/// All 0/1 arrays on the 4x4 window satisfying every relation that fits inside it.
fn window_solutions() -> Vec<u16> {
    let bit = |x: u32, a: usize, b: usize| (x >> (b * 4 + a)) & 1;
    (0u32..1 << 16)
        .filter(|&x| (0..3).all(|a| (0..3).all(|b| bit(x, a, b) ^ bit(x, a + 1, b) ^ bit(x, a, b + 1) == 0)))
        .map(|x| x as u16)
        .collect()
}

fn ledrappier_oracle() -> Check {
    let sols = window_solutions();
    ensure(sols.len() == 128, || format!("{} window solutions", sols.len()))?;
    let sys = System::ledrappier();
    let mut patterns = 0u32;
    for size in 0..=5 {
        for cells in colex(16, size) {
            let mask: u16 = cells.iter().map(|&c| 1u16 << (c - 1)).sum();
            for syms in 0u32..1 << size {
                let want: u16 = cells
                    .iter()
                    .enumerate()
                    .filter(|(t, _)| syms >> t & 1 == 1)
                    .map(|(_, &c)| 1u16 << (c - 1))
                    .sum();
                let hits = sols.iter().filter(|&&x| x & mask == want).count();
                let pattern = CylinderPattern::new(cells.iter().enumerate().map(|(t, &c)| {
                    let (a, b) = ((c - 1) % 4, (c - 1) / 4);
                    (GroupElement::from_i64s(&[a as i64, b as i64]), syms >> t & 1)
                }))
                .map_err(|e| e.to_string())?;
                let m = sys.measure(&pattern).map_err(|e| e.to_string())?;
                ensure(m.value() == &ratio(hits as i64, 128), || format!("{pattern:?}: {m} vs {hits}/128"))?;
                patterns += 1;
            }
        }
    }
    ensure(patterns == 173_889, || format!("{patterns} patterns"))
}

fn ramsey_selftest() -> Check {
    let edges: Vec<Vec<usize>> = colex(6, 2).collect();
    for mask in 0u32..1 << 15 {
        let col = Coloring::from_fn(2, 6, |a| mask >> edges.iter().position(|e| e == a).unwrap() & 1)
            .map_err(|e| e.to_string())?;
        let r = find_homogeneous(&col, 3, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        ensure(r.cert.size >= 3 && r.cert.verify(&col), || format!("colouring {mask:#x}"))?;
    }
    let pent = Coloring::from_fn(2, 5, |a| u32::from(!matches!(a[1] - a[0], 1 | 4))).map_err(|e| e.to_string())?;
    let r = find_homogeneous(&pent, 3, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    ensure(r.exact && r.cert.size == 2, || format!("pentagon maximum {}", r.cert.size))?;
    let rep = run("ramsey_selftest")?;
    ensure(rep.verdict.pass, || rep.verdict.line.clone())
}

fn pullback_counterexamples() -> Check {
    let rep = run("pullback_nonmixing")?;
    let gaps = column(&rep, "pairs", "gap")?;
    ensure(!gaps.is_empty() && gaps.iter().all(|g| *g == "1/4"), || format!("pair gaps {gaps:?}"))?;
    ensure(rep.verdict.pass, || rep.verdict.line.clone())?;
    let rep = run("prime_select_nonsigma")?;
    let corr = column(&rep, "kernel_sums", "correlation")?;
    ensure(!corr.is_empty() && corr.iter().all(|c| *c == "1/2"), || format!("kernel-sum correlations {corr:?}"))?;
    let refuted = rep.certificates.iter().any(|c| {
        matches!(
            c,
            Certificate::Largeness {
                cert: LargenessCert::RefutesSigmaStar { .. },
                ..
            }
        )
    });
    ensure(refuted, || "no Sigma_ell* refutation".into())?;
    ensure(rep.verdict.pass, || rep.verdict.line.clone())
}

fn density_one() -> Check {
    let rep = run("density_one")?;
    let t = rep.table("density").ok_or("no density table")?;
    let last = t.rows.last().ok_or("empty density table")?;
    ensure(last[0] == "200", || format!("last k = {}", last[0]))?;
    let d = mixlab_core::parse_ratio(&last[1]).map_err(|e| e.to_string())?;
    let c = mixlab_core::parse_ratio(&last[2]).map_err(|e| e.to_string())?;
    ensure(d <= ratio(1, 401), || format!("complement density {d}"))?;
    ensure(c <= ratio(1, 100), || format!("Cesaro average {c}"))?;
    ensure(rep.verdict.pass, || rep.verdict.line.clone())
}

fn combinatorial_fixtures() -> Check {
    let mut failures = Vec::new();
    let pow3 = |k: u32| BigInt::from(3u32).pow(k);
    let values: Vec<BigInt> = (2..=12u32).flat_map(|k2| (1..k2).map(move |k1| pow3(k1) + pow3(k2))).collect();
    if !sum_free_check(&values).map_err(|e| e.to_string())?.sum_free {
        failures.push("sum_free_check rejects {3^k1 + 3^k2}".to_string());
    }

    let squares = IntPolynomial::from_i64s(&[0, 0, 1]);
    if let Some(w) = polynomial_sigma2_search(&squares, 1_000_000, 3).map_err(|e| e.to_string())? {
        failures.push(format!(
            "polynomial_sigma2_search(n^2, 10^6, 3) found a = {}, b = {}, n in {:?}",
            w.a, w.b, w.ns
        ));
    }

    let z = GroupCtx::int();
    let tuple = |xs: &[i64]| xs.iter().map(|&x| GroupElement::int(x)).collect::<Vec<_>>();
    let diag = admissible_check(&z, &[tuple(&[1, 2, 3])]).map_err(|e| e.to_string())?;
    if !diag.admissible {
        failures.push("span{(1,2,3)} not admissible".into());
    }
    let plane = admissible_check(&z, &[tuple(&[1, 0, 0]), tuple(&[0, 1, 0])]).map_err(|e| e.to_string())?;
    if plane.admissible || plane.vanishing() != Some(Functional::Projection { j: 3 }) {
        failures.push("span{(1,0,0),(0,1,0)} not rejected by pi_3".into());
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(failures.join("; "))
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 Ledrappier non-3-mixing", Duration::from_secs(10), ledrappier_non_three_mixing),
        ("2 Ledrappier largeness dichotomy", Duration::from_secs(30), ledrappier_dichotomy),
        ("3 Bernoulli R-limit", Duration::from_secs(5), bernoulli_rlimit),
        ("4 Ledrappier oracle equivalence", Duration::from_secs(60), ledrappier_oracle),
        ("5 Ramsey self-test", Duration::from_secs(30), ramsey_selftest),
        ("6 pullback counterexamples", Duration::from_secs(10), pullback_counterexamples),
        ("7 density-one battery", Duration::from_secs(20), density_one),
        ("8 combinatorial fixtures", Duration::from_secs(60), combinatorial_fixtures),
    ];
    let mut failed = 0;
    for (name, limit, check) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let result = result.and_then(|()| {
            ensure(elapsed <= limit, || format!("took {elapsed:.2?}, limit {limit:?}"))
        });
        match result {
            Ok(()) => println!("PASS  criterion {name} ({elapsed:.2?} <= {limit:?})"),
            Err(why) => {
                failed += 1;
                println!("FAIL  criterion {name} ({elapsed:.2?}): {why}");
            }
        }
    }
    println!("{} of 8 criteria pass", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
