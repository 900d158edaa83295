//! One line per acceptance criterion; exits nonzero if any fails.

mod common;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use acceptcert_core::certsuite::{self, params, random, Params, RunConfig, RunResult, Verdicts};
use acceptcert_core::homcheck::{abelian_weight_oracle, decide_global};
use acceptcert_core::report::Report;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn run_one(id: &str, p: Params) -> Result<(RunResult, Duration), String> {
    let cert = certsuite::find(id).ok_or(format!("{id} missing from registry"))?;
    certsuite::run(&cert, &p, &RunConfig::default()).map_err(|e| e.to_string())
}

fn within(d: Duration, limit_s: f64, what: &str) -> Result<(), String> {
    if d.as_secs_f64() < limit_s {
        Ok(())
    } else {
        Err(format!("{what} took {:.2}s, limit {limit_s}s", d.as_secs_f64()))
    }
}

fn ec_not_gc(id: &str, p: Params, limit_s: f64) -> Outcome {
    let label = format!("{id} {p:?}");
    let (r, d) = run_one(id, p)?;
    if !r.pass {
        return Err(format!("{label}: mismatches {:?}", r.mismatches));
    }
    let Some(Verdicts::Pair { element_conjugate: true, globally_conjugate: false, first_failure: None, .. }) = r.verdicts
    else {
        return Err(format!("{label}: unexpected verdicts {:?}", r.verdicts));
    };
    within(d, limit_s, &label)?;
    Ok(format!("|Γ|={} |Z|={} twists={} in {:.0?}", r.counts.source_order.unwrap(), r.counts.z_order.unwrap(), r.counts.twists_examined.unwrap(), d))
}

fn criterion_1() -> Outcome {
    let (r, _) = run_one("su4_mod_center", Params::new())?;
    if r.counts.source_order != Some(16) || r.counts.twists_examined.is_none_or(|t| t > 4) {
        return Err(format!("counts {:?}", r.counts));
    }
    ec_not_gc("su4_mod_center", Params::new(), 1.0)
}

fn criterion_2() -> Outcome {
    let mut n = 0;
    for m in 3..=8 {
        for eps in [1, -1] {
            ec_not_gc("sp1_diag", params([("m", m.into()), ("eps", eps.into())]), 2.0)?;
            n += 1;
        }
    }
    Ok(format!("{n}/12 runs EC true, GC false"))
}

fn criterion_3() -> Outcome {
    let (r, d) = run_one("crit_3a1", Params::new())?;
    within(d, 10.0, "crit_3a1")?;
    let Some(Verdicts::Criterion { report, example_character_used, witness_element_conjugate, witness_globally_conjugate }) =
        r.verdicts
    else {
        return Err(format!("no criterion verdict: {:?}", r.mismatches));
    };
    let got = (
        report.zbar_centralizer_order,
        report.pi_centralizer_order,
        report.x_order,
        report.gamma_bar_quotient_order,
        report.y_order,
        report.phi_injective,
        report.phi_surjective,
    );
    if got != (8, 1, 8, 16, 16, true, false) {
        return Err(format!("report {got:?}"));
    }
    if !(example_character_used && witness_element_conjugate && !witness_globally_conjugate) {
        return Err("witness pair not EC-true/GC-false".into());
    }
    Ok(format!("|X|=8 |Y|=16, witness EC true GC false in {d:.1?}"))
}

fn criterion_4() -> Outcome {
    let a = ec_not_gc("psu_odd_prime", params([("p", 3.into()), ("block", 1.into())]), 30.0)?;
    let b = ec_not_gc("psu_odd_prime", params([("p", 5.into()), ("block", 1.into())]), 30.0)?;
    Ok(format!("p=3: {a}; p=5: {b}"))
}

fn criterion_5() -> Outcome {
    let a = ec_not_gc("su4_power_d4", params([("k", 1.into())]), 10.0)?;
    let b = ec_not_gc("su4_power_d4", params([("k", 2.into())]), 10.0)?;
    Ok(format!("k=1: {a}; k=2: {b}"))
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    for (id, expect) in [("scf_o_odd", vec![(1, 4), (3, 4)]), ("scf_so_odd", vec![])] {
        for n in 1..=2 {
            let (r, _) = run_one(id, params([("n", n.into()), ("denominators", "4,6,8".into())]))?;
            let Some(Verdicts::Scan { failing_angles, undecided, .. }) = r.verdicts else {
                return Err(format!("{id} n={n}: {:?}", r.mismatches));
            };
            if failing_angles != expect || undecided != 0 {
                return Err(format!("{id} n={n}: failing {failing_angles:?}, undecided {undecided}"));
            }
        }
    }
    within(start.elapsed(), 30.0, "scans")?;
    Ok(format!("o-odd fails at exactly π/2, 3π/2; so-odd never; 0 undecided in {:.0?}", start.elapsed()))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut agree, mut gc) = (0, 0);
    for k in 0..200 {
        let pair = if k % 2 == 0 {
            random::random_su4_diag_pair(&mut rng)
        } else {
            random::random_sp1_cube_diag_pair(&mut rng)
        }
        .map_err(|e| e.to_string())?;
        let decided = decide_global(&pair).map_err(|e| e.to_string())?.is_conjugate();
        let oracle = abelian_weight_oracle(&pair).map_err(|e| e.to_string())?;
        if decided != oracle {
            return Err(format!("pair {k}: decide_global {decided}, oracle {oracle}"));
        }
        agree += 1;
        gc += decided as usize;
    }
    Ok(format!("{agree}/200 agree ({gc} globally conjugate)"))
}

fn criterion_8() -> Outcome {
    let mut parts = Vec::new();
    for group in ["su4", "sp1x3"] {
        let (r, _) = run_one(
            "sanity_acceptable",
            params([("group", group.into()), ("seed", 8.into()), ("count", 50.into())]),
        )?;
        let Some(Verdicts::Sanity { pairs, globally_conjugate }) = r.verdicts else {
            return Err(format!("{group}: {:?}", r.mismatches));
        };
        if pairs != 50 || globally_conjugate != 50 {
            return Err(format!("{group}: {globally_conjugate}/{pairs}"));
        }
        parts.push(format!("{group} 50/50"));
    }
    Ok(parts.join(", "))
}

fn criterion_9() -> Outcome {
    let seeds = [1u64, 2, 3, 5, 8];
    for seed in seeds {
        for (name, r) in common::property_suite(seed, 64) {
            r.map_err(|e| format!("seed {seed}, {name}: {e}"))?;
        }
    }
    Ok(format!("0 failures across {} seeds", seeds.len()))
}

fn criterion_10() -> Outcome {
    let report = || -> Result<String, String> {
        let start = Instant::now();
        let runs = certsuite::run_all(None, &BTreeMap::new(), &RunConfig::default()).map_err(|e| e.to_string())?;
        Ok(Report::new(vec!["run-all".into()], runs, start.elapsed()).without_timing().to_json())
    };
    let (a, b) = (report()?, report()?);
    if a != b {
        return Err("reports differ outside timing".into());
    }
    let parsed: Report = serde_json::from_str(&a).map_err(|e| e.to_string())?;
    if !parsed.passed() {
        return Err(format!("{} certificate runs failed", parsed.summary.failed));
    }
    Ok(format!("{} bytes identical, {} runs all pass", a.len(), parsed.summary.total))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("su4_mod_center EC true, GC false", criterion_1),
        ("sp1_diag m=3..8, eps=±1", criterion_2),
        ("crit_3a1 X/Y criterion and witness", criterion_3),
        ("psu_odd_prime p=3,5", criterion_4),
        ("su4_power_d4 k=1,2", criterion_5),
        ("SCF scans", criterion_6),
        ("oracle equivalence on 200 diagonal pairs", criterion_7),
        ("acceptability sanity", criterion_8),
        ("exact-arithmetic properties", criterion_9),
        ("determinism of run_all", criterion_10),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
