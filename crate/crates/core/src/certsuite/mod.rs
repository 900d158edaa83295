//! Registry of parameterized certificates, each rebuilding one construction and
//! checking its expected outcome.

pub mod random;

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{GroupError, GroupResult};
use crate::exactalg::{CycNum, ExactMatrix};
use crate::fingrp::{formal_group, FinGroup, FormalElem, FormalGroupSpec, DEFAULT_CLOSURE_CAP};
use crate::grpcore::{make_group_with_cap, quot, AmbientElement, FactorKind, GroupSpec, Quat};
use crate::homcheck::{abelian_weight_oracle, decide_global_with_cap, is_element_conjugate, HomPair};
use crate::scfcheck::{scan_angles, FamilyKind, ScanTable, SymPairFamily};
use crate::so3crit::{self, CriterionOutcome, CriterionReport};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Int(i64),
    Text(String),
}

impl From<i64> for ParamValue {
    fn from(v: i64) -> Self {
        ParamValue::Int(v)
    }
}

impl From<&str> for ParamValue {
    fn from(v: &str) -> Self {
        ParamValue::Text(v.to_string())
    }
}

impl std::fmt::Display for ParamValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParamValue::Int(v) => write!(f, "{v}"),
            ParamValue::Text(s) => write!(f, "{s}"),
        }
    }
}

pub type Params = BTreeMap<String, ParamValue>;

pub fn params<const N: usize>(kv: [(&str, ParamValue); N]) -> Params {
    kv.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Expected {
    /// Element-conjugate and not globally conjugate.
    ElementNotGlobal,
    Criterion {
        zbar_centralizer_order: usize,
        pi_centralizer_order: usize,
        x_order: usize,
        gamma_bar_quotient_order: usize,
        y_order: usize,
        phi_surjective: bool,
    },
    /// Reduced angles `2πk/m` at which the condition fails.
    ScfFailures { angles: Vec<(i64, u32)> },
    /// Every sampled pair globally conjugate.
    AllGlobal,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdicts {
    Pair {
        element_conjugate: bool,
        first_failure: Option<FormalElem>,
        globally_conjugate: bool,
        kernel_mismatch: bool,
        /// Decision with the two homomorphisms exchanged.
        swapped_globally_conjugate: bool,
        /// The diagonal-weight decision, where it applies.
        oracle_globally_conjugate: Option<bool>,
    },
    Criterion {
        report: CriterionReport,
        example_character_used: bool,
        witness_element_conjugate: bool,
        witness_globally_conjugate: bool,
    },
    Scan {
        tables: Vec<ScanTable>,
        failing_angles: Vec<(i64, u32)>,
        undecided: usize,
    },
    Sanity {
        pairs: usize,
        globally_conjugate: usize,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub source_order: Option<usize>,
    pub z_order: Option<usize>,
    pub twists_examined: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunResult {
    pub id: String,
    pub params: Params,
    pub anchor: String,
    pub expected: Expected,
    pub verdicts: Option<Verdicts>,
    pub counts: Counts,
    pub pass: bool,
    /// Sub-verdicts that disagree with the expectation, or the error raised.
    pub mismatches: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub max_closure: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { max_closure: DEFAULT_CLOSURE_CAP }
    }
}

type Runner = fn(&Params, &RunConfig) -> GroupResult<(Verdicts, Counts)>;

#[derive(Clone)]
pub struct Certificate {
    pub id: &'static str,
    pub anchor: &'static str,
    pub summary: &'static str,
    /// Parameter names with their defaults.
    pub defaults: Params,
    pub grid: Vec<Params>,
    expected: fn(&Params) -> Expected,
    runner: Runner,
}

impl std::fmt::Debug for Certificate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Certificate").field("id", &self.id).field("grid", &self.grid).finish()
    }
}

impl Certificate {
    pub fn expected(&self, p: &Params) -> Expected {
        (self.expected)(p)
    }

    /// Defaults overridden by `overrides`; unknown keys are rejected.
    pub fn resolve(&self, overrides: &Params) -> GroupResult<Params> {
        let mut p = self.defaults.clone();
        for (k, v) in overrides {
            match p.get_mut(k) {
                Some(slot) => *slot = v.clone(),
                None => {
                    return Err(GroupError::Precondition(format!("unknown parameter '{k}' for {}", self.id)))
                }
            }
        }
        Ok(p)
    }
}

fn int(p: &Params, key: &str) -> GroupResult<i64> {
    match p.get(key) {
        Some(ParamValue::Int(v)) => Ok(*v),
        Some(ParamValue::Text(s)) => {
            s.parse().map_err(|_| GroupError::Precondition(format!("parameter '{key}' must be an integer")))
        }
        None => Err(GroupError::Precondition(format!("missing parameter '{key}'"))),
    }
}

fn int_in(p: &Params, key: &str, lo: i64, hi: i64) -> GroupResult<i64> {
    let v = int(p, key)?;
    if v < lo || v > hi {
        return Err(GroupError::Precondition(format!("parameter '{key}' = {v} outside {lo}..={hi}")));
    }
    Ok(v)
}

fn sign(p: &Params, key: &str) -> GroupResult<i64> {
    let v = int(p, key)?;
    if v != 1 && v != -1 {
        return Err(GroupError::Precondition(format!("parameter '{key}' must be 1 or -1")));
    }
    Ok(v)
}

fn text(p: &Params, key: &str) -> GroupResult<String> {
    match p.get(key) {
        Some(v) => Ok(v.to_string()),
        None => Err(GroupError::Precondition(format!("missing parameter '{key}'"))),
    }
}

fn is_prime(p: i64) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn cyclic_source(orders: Vec<u32>) -> Arc<FinGroup<FormalElem>> {
    Arc::new(formal_group(&FormalGroupSpec::CyclicProduct(orders)).expect("positive orders"))
}

fn diag_roots(n: u32, exps: &[i64]) -> ExactMatrix {
    let e: Vec<CycNum> = exps.iter().map(|&k| CycNum::root_of_unity(n, k)).collect();
    ExactMatrix::diag(&e)
}

fn decide_pair(p: &HomPair<FormalElem>, cfg: &RunConfig, oracle: bool) -> GroupResult<(Verdicts, Counts)> {
    let ec = is_element_conjugate(p);
    let gv = decide_global_with_cap(p, cfg.max_closure)?;
    let sv = decide_global_with_cap(&p.swapped(), cfg.max_closure)?;
    let kernel_mismatch = matches!(gv, crate::homcheck::GlobalVerdict::NotGloballyConjugate { kernel_mismatch: true, .. });
    let oracle_globally_conjugate = if oracle { Some(abelian_weight_oracle(p)?) } else { None };
    let counts = Counts {
        source_order: Some(p.source().order()),
        z_order: Some(p.target().z_order()),
        twists_examined: Some(gv.twists_examined()),
    };
    let v = Verdicts::Pair {
        element_conjugate: ec.holds,
        first_failure: ec.first_failure.map(|x| p.source().element(x).clone()),
        globally_conjugate: gv.is_conjugate(),
        kernel_mismatch,
        swapped_globally_conjugate: sv.is_conjugate(),
        oracle_globally_conjugate,
    };
    Ok((v, counts))
}

/// `SU(4)/⟨−I⟩` with `φ(γ₁) = diag(1,1,i,−i)`, `φ(γ₂) = diag(1,i,1,−i)`, `φ′ = φ̄`.
pub fn su4_mod_center_pair(cap: usize) -> GroupResult<HomPair<FormalElem>> {
    su4_power_pair(1, cap)
}

/// The same images repeated in `SU(4)^k/⟨(−I,…,−I)⟩`.
pub fn su4_power_pair(k: usize, cap: usize) -> GroupResult<HomPair<FormalElem>> {
    let kinds = vec![FactorKind::SU(4); k];
    let minus = ExactMatrix::scalar(4, &CycNum::from_i64(-1));
    let z = AmbientElement::new(vec![crate::grpcore::FactorElem::SU(minus); k])?;
    let g = make_group_with_cap(kinds, vec![z], cap)?;
    let a = diag_roots(4, &[0, 0, 1, 3]);
    let b = diag_roots(4, &[0, 1, 0, 3]);
    let rep = |m: &ExactMatrix| AmbientElement::new(vec![crate::grpcore::FactorElem::SU(m.clone()); k]);
    let phi = vec![rep(&a)?, rep(&b)?];
    let phi2 = vec![rep(&a.conj())?, rep(&b.conj())?];
    let src = cyclic_source(vec![4, 4]);
    let gens = src.generators().to_vec();
    HomPair::from_generator_images(src, g, &gens, &phi, &phi2)
}

/// `Sp(1)^m/⟨(−1,…,−1)⟩` with `φ(γ₁) = (1,…,1,i,i)`, `φ(γ₂) = (i,…,i,1,i)` and
/// `φ′(γ₂) = (εi,…,εi,1,−i)`.
pub fn sp1_diag_pair(m: usize, eps: i64, cap: usize) -> GroupResult<HomPair<FormalElem>> {
    if m < 3 {
        return Err(GroupError::Precondition("m must be at least 3".into()));
    }
    let g = make_group_with_cap(
        vec![FactorKind::Sp1; m],
        vec![AmbientElement::sp1s(&vec![Quat::minus_one(); m])?],
        cap,
    )?;
    let (o, i) = (Quat::one(), Quat::i());
    let ei = if eps == 1 { i.clone() } else { -&i };
    let mut a1 = vec![o.clone(); m - 2];
    a1.extend([i.clone(), i.clone()]);
    let mut a2 = vec![i.clone(); m - 2];
    a2.extend([o.clone(), i.clone()]);
    let mut b2 = vec![ei; m - 2];
    b2.extend([o, -&i]);
    let phi = vec![AmbientElement::sp1s(&a1)?, AmbientElement::sp1s(&a2)?];
    let phi2 = vec![AmbientElement::sp1s(&a1)?, AmbientElement::sp1s(&b2)?];
    let src = cyclic_source(vec![4, 4]);
    let gens = src.generators().to_vec();
    HomPair::from_generator_images(src, g, &gens, &phi, &phi2)
}

/// `SU(n)/μ_p` (`n = p·block`) with `ρ(γ₁) = ρ′(γ₁) = [A_p]`, `ρ(γ₂) = [B_p]`,
/// `ρ′(γ₂) = [B_p²]`.
pub fn psu_odd_prime_pair(p: u32, block: usize, cap: usize) -> GroupResult<HomPair<FormalElem>> {
    if p.is_multiple_of(2) || !is_prime(p as i64) {
        return Err(GroupError::Precondition("p must be an odd prime".into()));
    }
    let pu = p as usize;
    let n = pu * block;
    let mut shift = ExactMatrix::zeros(pu, pu);
    for r in 0..pu {
        shift.set(r, (r + 1) % pu, CycNum::one());
    }
    let a = shift.kron(&ExactMatrix::identity(block));
    let exps: Vec<i64> = (0..n).map(|x| (x / block) as i64).collect();
    let b = diag_roots(p, &exps);
    let omega = ExactMatrix::scalar(n, &CycNum::root_of_unity(p, 1));
    let g = make_group_with_cap(vec![FactorKind::SU(n)], vec![AmbientElement::su(omega)?], cap)?;
    let phi = vec![AmbientElement::su(a.clone())?, AmbientElement::su(b.clone())?];
    let phi2 = vec![AmbientElement::su(a)?, AmbientElement::su(&b * &b)?];
    let src = cyclic_source(vec![p, p]);
    let gens = src.generators().to_vec();
    HomPair::from_generator_images(src, g, &gens, &phi, &phi2)
}

fn run_su4_mod_center(_: &Params, cfg: &RunConfig) -> GroupResult<(Verdicts, Counts)> {
    decide_pair(&su4_mod_center_pair(cfg.max_closure)?, cfg, true)
}

fn run_sp1_diag(p: &Params, cfg: &RunConfig) -> GroupResult<(Verdicts, Counts)> {
    let m = int_in(p, "m", 3, 12)? as usize;
    let eps = sign(p, "eps")?;
    decide_pair(&sp1_diag_pair(m, eps, cfg.max_closure)?, cfg, true)
}

fn run_psp3(p: &Params, cfg: &RunConfig) -> GroupResult<(Verdicts, Counts)> {
    let eps = sign(p, "eps")?;
    decide_pair(&sp1_diag_pair(3, eps, cfg.max_closure)?, cfg, true)
}

fn run_psu(p: &Params, cfg: &RunConfig) -> GroupResult<(Verdicts, Counts)> {
    let prime = int_in(p, "p", 3, 13)? as u32;
    let block = int_in(p, "block", 1, 4)? as usize;
    decide_pair(&psu_odd_prime_pair(prime, block, cfg.max_closure)?, cfg, false)
}

fn run_su4_power(p: &Params, cfg: &RunConfig) -> GroupResult<(Verdicts, Counts)> {
    let k = int_in(p, "k", 1, 3)? as usize;
    decide_pair(&su4_power_pair(k, cfg.max_closure)?, cfg, true)
}

fn run_crit_3a1(_: &Params, cfg: &RunConfig) -> GroupResult<(Verdicts, Counts)> {
    let g = so3crit::target_group();
    let gens = so3crit::example_generators();
    let crit = match so3crit::decide_criterion_with_cap(&g, &gens, cfg.max_closure)? {
        CriterionOutcome::Decided(c) => c,
        CriterionOutcome::NotApplicable { factor } => {
            return Err(GroupError::Precondition(format!("criterion not applicable: factor {factor}")))
        }
    };
    // The example's character: nontrivial on (i,i,i) only.
    let gamma0 = quot(&g, &gens[3])?;
    let values: Vec<bool> = crit.gamma().generators().iter().map(|&x| *crit.gamma().element(x) == gamma0).collect();
    let chi = crit.character_index(&values).filter(|&k| !crit.in_image(k));
    let pair = crit.build_witness_pair(chi)?;
    let ec = is_element_conjugate(&pair);
    let gv = decide_global_with_cap(&pair, cfg.max_closure)?;
    let counts = Counts {
        source_order: Some(pair.source().order()),
        z_order: Some(g.z_order()),
        twists_examined: Some(gv.twists_examined()),
    };
    let v = Verdicts::Criterion {
        report: crit.report().clone(),
        example_character_used: chi.is_some(),
        witness_element_conjugate: ec.holds,
        witness_globally_conjugate: gv.is_conjugate(),
    };
    Ok((v, counts))
}

fn denominators(p: &Params) -> GroupResult<Vec<u32>> {
    let s = text(p, "denominators")?;
    let v: Result<Vec<u32>, _> = s.split(',').map(|x| x.trim().parse::<u32>()).collect();
    match v {
        Ok(v) if !v.is_empty() && v.iter().all(|&m| (1..=48).contains(&m)) => Ok(v),
        _ => Err(GroupError::Precondition("denominators must be a comma-separated list in 1..=48".into())),
    }
}

fn run_scf(kind: FamilyKind, p: &Params) -> GroupResult<(Verdicts, Counts)> {
    let n = int_in(p, "n", 1, 4)? as usize;
    let fam = SymPairFamily::new(kind, n)?;
    let table = scan_angles(&fam, &denominators(p)?)?;
    let v = Verdicts::Scan { failing_angles: table.failing_angles(), undecided: table.undecided(), tables: vec![table] };
    Ok((v, Counts::default()))
}

fn run_scf_o_odd(p: &Params, _: &RunConfig) -> GroupResult<(Verdicts, Counts)> {
    run_scf(FamilyKind::OOddInSoEven, p)
}

fn run_scf_so_odd(p: &Params, _: &RunConfig) -> GroupResult<(Verdicts, Counts)> {
    run_scf(FamilyKind::SoOddInSoEven, p)
}

fn run_sanity(p: &Params, cfg: &RunConfig) -> GroupResult<(Verdicts, Counts)> {
    let group = text(p, "group")?;
    let seed = int(p, "seed")? as u64;
    let count = int_in(p, "count", 1, 1000)? as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut good = 0;
    let mut z_order = None;
    for _ in 0..count {
        let pair = match group.as_str() {
            "su4" => random::random_conjugated_su4_pair(&mut rng)?,
            "sp1x3" => random::random_conjugated_sp1_cube_pair(&mut rng)?,
            _ => return Err(GroupError::Precondition("group must be 'su4' or 'sp1x3'".into())),
        };
        z_order = Some(pair.target().z_order());
        if decide_global_with_cap(&pair, cfg.max_closure)?.is_conjugate() {
            good += 1;
        }
    }
    let counts = Counts { source_order: Some(16), z_order, twists_examined: None };
    Ok((Verdicts::Sanity { pairs: count, globally_conjugate: good }, counts))
}

fn expect_ec_not_gc(_: &Params) -> Expected {
    Expected::ElementNotGlobal
}

fn expect_criterion(_: &Params) -> Expected {
    Expected::Criterion {
        zbar_centralizer_order: 8,
        pi_centralizer_order: 1,
        x_order: 8,
        gamma_bar_quotient_order: 16,
        y_order: 16,
        phi_surjective: false,
    }
}

fn expect_o_odd(_: &Params) -> Expected {
    Expected::ScfFailures { angles: vec![(1, 4), (3, 4)] }
}

fn expect_so_odd(_: &Params) -> Expected {
    Expected::ScfFailures { angles: vec![] }
}

fn expect_all_global(_: &Params) -> Expected {
    Expected::AllGlobal
}

/// Every certificate, in a fixed order.
pub fn registry() -> Vec<Certificate> {
    let scf_defaults = params([("n", 1.into()), ("denominators", "4,6,8".into())]);
    let scf_grid: Vec<Params> =
        (1..=2).map(|n| params([("n", n.into()), ("denominators", "4,6,8".into())])).collect();
    vec![
        Certificate {
            id: "su4_mod_center",
            anchor: "Example E:SU4",
            summary: "SU(4)/<-I>, (C4)^2 diagonal images and their conjugates",
            defaults: Params::new(),
            grid: vec![Params::new()],
            expected: expect_ec_not_gc,
            runner: run_su4_mod_center,
        },
        Certificate {
            id: "sp1_diag",
            anchor: "Example E:Sp3-2",
            summary: "Sp(1)^m/<(-1,...,-1)> for m >= 3 and eps = +-1",
            defaults: params([("m", 3.into()), ("eps", 1.into())]),
            grid: (3..=8)
                .flat_map(|m| [1, -1].map(|e| params([("m", m.into()), ("eps", e.into())])))
                .collect(),
            expected: expect_ec_not_gc,
            runner: run_sp1_diag,
        },
        Certificate {
            id: "psp3_via_sp1",
            anchor: "Example E:Sp3",
            summary: "Sp(1)^3/<(-1,-1,-1)>, the centralizer inside PSp(3)",
            defaults: params([("eps", 1.into())]),
            grid: vec![params([("eps", 1.into())]), params([("eps", (-1).into())])],
            expected: expect_ec_not_gc,
            runner: run_psp3,
        },
        Certificate {
            id: "psu_odd_prime",
            anchor: "Theorem T:unacceptable1(1)",
            summary: "SU(p*block)/mu_p with the shift and clock matrices",
            defaults: params([("p", 3.into()), ("block", 1.into())]),
            grid: [3, 5].map(|p| params([("p", p.into()), ("block", 1.into())])).to_vec(),
            expected: expect_ec_not_gc,
            runner: run_psu,
        },
        Certificate {
            id: "su4_power_d4",
            anchor: "Theorem T:unacceptable3",
            summary: "SU(4)^k/<(-I,...,-I)> with diagonally repeated images",
            defaults: params([("k", 1.into())]),
            grid: [1, 2].map(|k| params([("k", k.into())])).to_vec(),
            expected: expect_ec_not_gc,
            runner: run_su4_power,
        },
        Certificate {
            id: "crit_3a1",
            anchor: "Lemma L:3A1-4, Theorem T:3A1, Example E:3A1",
            summary: "X/Y criterion for Sp(1)^3/<(1,-1,-1),(-1,1,-1)> and its witness pair",
            defaults: Params::new(),
            grid: vec![Params::new()],
            expected: expect_criterion,
            runner: run_crit_3a1,
        },
        Certificate {
            id: "scf_o_odd",
            anchor: "Proposition P:O(2n+1)-1",
            summary: "O(2n+1) in SO(2n+2): condition fails exactly at pi/2 and 3pi/2",
            defaults: scf_defaults.clone(),
            grid: scf_grid.clone(),
            expected: expect_o_odd,
            runner: run_scf_o_odd,
        },
        Certificate {
            id: "scf_so_odd",
            anchor: "Proposition P:O(2n+1)-2",
            summary: "SO(2n+1) in SO(2n+2): condition holds at every angle",
            defaults: scf_defaults,
            grid: scf_grid,
            expected: expect_so_odd,
            runner: run_scf_so_odd,
        },
        Certificate {
            id: "sanity_acceptable",
            anchor: "Theorem T:acceptable1",
            summary: "random conjugated pairs in SU(4) and Sp(1)^3 are globally conjugate",
            defaults: params([("group", "su4".into()), ("seed", 1.into()), ("count", 50.into())]),
            grid: ["su4", "sp1x3"]
                .map(|g| params([("group", g.into()), ("seed", 1.into()), ("count", 50.into())]))
                .to_vec(),
            expected: expect_all_global,
            runner: run_sanity,
        },
    ]
}

pub fn find(id: &str) -> Option<Certificate> {
    registry().into_iter().find(|c| c.id == id)
}

fn compare(expected: &Expected, v: &Verdicts) -> Vec<String> {
    let mut out = Vec::new();
    let mut check = |name: &str, ok: bool| {
        if !ok {
            out.push(name.to_string());
        }
    };
    match (expected, v) {
        (
            Expected::ElementNotGlobal,
            Verdicts::Pair {
                element_conjugate,
                globally_conjugate,
                swapped_globally_conjugate,
                oracle_globally_conjugate,
                ..
            },
        ) => {
            check("element_conjugate", *element_conjugate);
            check("globally_conjugate", !*globally_conjugate);
            check("swapped_globally_conjugate", !*swapped_globally_conjugate);
            check("oracle_globally_conjugate", *oracle_globally_conjugate != Some(true));
        }
        (
            Expected::Criterion {
                zbar_centralizer_order,
                pi_centralizer_order,
                x_order,
                gamma_bar_quotient_order,
                y_order,
                phi_surjective,
            },
            Verdicts::Criterion { report, example_character_used, witness_element_conjugate, witness_globally_conjugate },
        ) => {
            check("zbar_centralizer_order", report.zbar_centralizer_order == *zbar_centralizer_order);
            check("pi_centralizer_order", report.pi_centralizer_order == *pi_centralizer_order);
            check("x_order", report.x_order == *x_order);
            check("gamma_bar_quotient_order", report.gamma_bar_quotient_order == *gamma_bar_quotient_order);
            check("y_order", report.y_order == *y_order);
            check("phi_injective", report.phi_injective);
            check("phi_surjective", report.phi_surjective == *phi_surjective);
            check("example_character_used", *example_character_used);
            check("witness_element_conjugate", *witness_element_conjugate);
            check("witness_globally_conjugate", !*witness_globally_conjugate);
        }
        (Expected::ScfFailures { angles }, Verdicts::Scan { failing_angles, undecided, .. }) => {
            check("failing_angles", failing_angles == angles);
            check("undecided", *undecided == 0);
        }
        (Expected::AllGlobal, Verdicts::Sanity { pairs, globally_conjugate }) => {
            check("globally_conjugate", pairs == globally_conjugate);
        }
        _ => out.push("verdict kind".into()),
    }
    out
}

/// Runs one certificate at explicit parameters, with its wall time.
pub fn run(cert: &Certificate, overrides: &Params, cfg: &RunConfig) -> GroupResult<(RunResult, Duration)> {
    let p = cert.resolve(overrides)?;
    let expected = cert.expected(&p);
    let start = Instant::now();
    let outcome = (cert.runner)(&p, cfg);
    let elapsed = start.elapsed();
    let (verdicts, counts, mismatches) = match outcome {
        Ok((v, c)) => {
            let m = compare(&expected, &v);
            (Some(v), c, m)
        }
        Err(GroupError::Precondition(msg)) if msg.starts_with("parameter") || msg.starts_with("unknown parameter") => {
            return Err(GroupError::Precondition(msg))
        }
        Err(e) => (None, Counts::default(), vec![format!("error: {e}")]),
    };
    let result = RunResult {
        id: cert.id.to_string(),
        params: p,
        anchor: cert.anchor.to_string(),
        expected,
        pass: mismatches.is_empty(),
        verdicts,
        counts,
        mismatches,
    };
    Ok((result, elapsed))
}

/// Certificates whose id matches the glob `filter` (all when `None`), each at
/// its default grid unless `grids` supplies one; results in registry order.
pub fn run_all(
    filter: Option<&str>,
    grids: &BTreeMap<String, Vec<Params>>,
    cfg: &RunConfig,
) -> GroupResult<Vec<(RunResult, Duration)>> {
    let pattern = match filter {
        Some(f) => Some(glob::Pattern::new(f).map_err(|e| GroupError::Precondition(format!("bad filter: {e}")))?),
        None => None,
    };
    let reg = registry();
    for id in grids.keys() {
        if !reg.iter().any(|c| c.id == id) {
            return Err(GroupError::Precondition(format!("unknown certificate '{id}' in parameter grid")));
        }
    }
    let mut jobs: Vec<(Certificate, Params)> = Vec::new();
    for cert in reg {
        if pattern.as_ref().is_some_and(|p| !p.matches(cert.id)) {
            continue;
        }
        let grid = grids.get(cert.id).cloned().unwrap_or_else(|| cert.grid.clone());
        for p in grid {
            cert.resolve(&p)?;
            jobs.push((cert.clone(), p));
        }
    }
    let next = AtomicUsize::new(0);
    let workers = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1).min(jobs.len().max(1));
    let mut slots: Vec<Option<GroupResult<(RunResult, Duration)>>> = (0..jobs.len()).map(|_| None).collect();
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|_| {
                s.spawn(|| {
                    let mut done = Vec::new();
                    loop {
                        let i = next.fetch_add(1, Ordering::Relaxed);
                        if i >= jobs.len() {
                            break;
                        }
                        let (c, p) = &jobs[i];
                        done.push((i, run(c, p, cfg)));
                    }
                    done
                })
            })
            .collect();
        for h in handles {
            for (i, r) in h.join().expect("certificate worker panicked") {
                slots[i] = Some(r);
            }
        }
    });
    slots.into_iter().map(|r| r.expect("every job ran")).collect()
}

/// Which target groups the registry covers, for documentation.
pub fn group_of(cert: &Certificate) -> Option<Arc<GroupSpec>> {
    match cert.id {
        "su4_mod_center" => Some(random::su4_mod_minus_one()),
        "crit_3a1" => Some(so3crit::target_group()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_ids_unique() {
        let reg = registry();
        let mut ids: Vec<&str> = reg.iter().map(|c| c.id).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), reg.len());
        assert!(find("su4_mod_center").is_some());
        assert!(find("crit_3a1").is_some());
    }

    #[test]
    fn su4_passes() {
        let c = find("su4_mod_center").unwrap();
        let (r, _) = run(&c, &Params::new(), &RunConfig::default()).unwrap();
        assert!(r.pass, "{:?}", r.mismatches);
        assert_eq!(r.counts.twists_examined, Some(4));
    }

    #[test]
    fn sp1_diag_five() {
        let c = find("sp1_diag").unwrap();
        let (r, _) = run(&c, &params([("m", 5.into()), ("eps", 1.into())]), &RunConfig::default()).unwrap();
        assert!(r.pass, "{:?}", r.mismatches);
    }

    #[test]
    fn parameter_errors() {
        let c = find("sp1_diag").unwrap();
        assert!(run(&c, &params([("m", 2.into())]), &RunConfig::default()).is_err());
        assert!(run(&c, &params([("eps", 0.into())]), &RunConfig::default()).is_err());
        assert!(run(&c, &params([("q", 1.into())]), &RunConfig::default()).is_err());
    }

    #[test]
    fn filter_selects() {
        let r = run_all(Some("scf_*"), &BTreeMap::new(), &RunConfig::default()).unwrap();
        assert_eq!(r.len(), 4);
        assert!(r.iter().all(|(x, _)| x.id.starts_with("scf_") && x.pass));
    }

    #[test]
    fn sanity_su4() {
        let c = find("sanity_acceptable").unwrap();
        let (r, _) = run(&c, &params([("count", 5.into())]), &RunConfig::default()).unwrap();
        assert!(r.pass, "{:?}", r.mismatches);
    }
}
