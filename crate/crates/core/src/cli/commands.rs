use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use super::render::{csv, table, verdict};
use super::RunConfig;
use crate::homology::{
    homology_dims, koszul_check, r_ranks_stacked, run_wall_trials, verify_complex_splitting, HomologyError,
    VModuleSpec, WallTrial,
};
use crate::kernel::{
    check_m2_recurrences, dimension_count, hilbert_check, kernel_dims_recurrence, verify_decomposition,
    verify_generator_examples, KernelTower,
};
use crate::tensor::RankMode;
use crate::ybop::{check_bracket_recursions, check_phi_formula, check_ybe, YBData};

/// A rendered report plus the names of failing checks, in run order.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub report: Value,
    pub csv: String,
    pub table: String,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
struct NamedCheck {
    name: String,
    ok: bool,
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn yb_for(config: &RunConfig, m: usize) -> Result<YBData, String> {
    YBData::with_mode(m, config.rank_mode).map_err(err)
}

/// Appends the rank cross-check verdict when running in `both` mode.
fn rank_check(yb: &YBData, config: &RunConfig, checks: &mut Vec<NamedCheck>) -> Value {
    let stats = yb.ranker().stats();
    let mut mismatches: Vec<String> = stats.mismatches.iter().map(|m| m.label.clone()).collect();
    mismatches.sort();
    if config.rank_mode == RankMode::Both {
        checks.push(NamedCheck { name: "rank_cross_check".into(), ok: mismatches.is_empty() });
    }
    json!({ "rank_mode": config.rank_mode, "disagreements": mismatches })
}

fn check_csv(checks: &[NamedCheck]) -> String {
    let rows: Vec<Vec<String>> = checks.iter().map(|c| vec![c.name.clone(), c.ok.to_string()]).collect();
    csv(&["check", "ok"], &rows)
}

fn failures(checks: &[NamedCheck]) -> Vec<String> {
    checks.iter().filter(|c| !c.ok).map(|c| c.name.clone()).collect()
}

/// YBE, then per degree the σ identities, bracket recursions, φ formula and
/// eigenspace decomposition, then randomized wall-condition trials.
pub fn cmd_check(config: &RunConfig) -> Result<Outcome, String> {
    let m = config.m;
    let yb = yb_for(config, m)?;
    let mut checks = Vec::new();
    checks.push(NamedCheck { name: "ybe".into(), ok: check_ybe(yb.r()).map_err(err)? });
    for n in 1..=config.n_max {
        if n >= 2 {
            let rep = yb.check_sigma_identities(n).map_err(err)?;
            checks.push(NamedCheck { name: format!("sigma_identities n={n}"), ok: rep.ok() });
            checks.push(NamedCheck { name: format!("bracket_recursions n={n}"), ok: check_bracket_recursions(m, n) });
        }
        let phi = check_phi_formula(&yb, n).map_err(err)?;
        checks.push(NamedCheck { name: format!("phi_formula n={n}"), ok: phi.ok(m) });
        let dec = verify_decomposition(&yb, n).map_err(err)?;
        checks.push(NamedCheck { name: format!("decomposition n={n}"), ok: dec.ok() });
    }
    if config.n_max >= 2 {
        let trials = run_wall_trials(&yb, 10, config.seed).map_err(err)?;
        checks.push(NamedCheck {
            name: format!("wall_iff_commuting seed={}", config.seed),
            ok: trials.iter().all(WallTrial::agree),
        });
    }
    let ranks = rank_check(&yb, config, &mut checks);
    let fails = failures(&checks);
    let rows: Vec<Vec<String>> = checks.iter().map(|c| vec![c.name.clone(), verdict(c.ok)]).collect();
    let report = json!({
        "command": "check",
        "m": m,
        "n_max": config.n_max,
        "checks": checks,
        "ranks": ranks,
        "passed": fails.is_empty(),
    });
    Ok(Outcome {
        report,
        csv: check_csv(&checks),
        table: table(&format!("check m={m} n_max={}", config.n_max), &["check", "result"], &rows),
        failures: fails,
    })
}

#[derive(Clone, Debug, Serialize)]
struct DecompEntry {
    k: usize,
    dim: usize,
    eigenvalue: String,
}

#[derive(Clone, Debug, Serialize)]
struct KernelDegree {
    n: usize,
    #[serde(rename = "M")]
    m_dim: usize,
    #[serde(rename = "M_recurrence")]
    m_recurrence: i128,
    tilde_dim: usize,
    decomposition: Vec<DecompEntry>,
    checks: BTreeMap<String, bool>,
}

/// `M(n)` directly and by recurrence, tilde complements, decompositions, the
/// Hilbert identity and, where available, the explicit generators.
pub fn cmd_kernel(config: &RunConfig) -> Result<Outcome, String> {
    let m = config.m;
    let n_max = config.n_max;
    let yb = yb_for(config, m)?;
    let series_len = n_max.max(8);
    let rec = kernel_dims_recurrence(m, series_len).map_err(err)?;
    let tower = KernelTower::build(&yb, n_max).map_err(err)?;
    let mut degrees = Vec::new();
    let mut checks = Vec::new();
    for deg in tower.degrees() {
        let n = deg.n;
        let mut c = BTreeMap::new();
        c.insert("matches_recurrence".to_string(), deg.m_dim() as i128 == rec[n]);
        c.insert("direct_sum".to_string(), tower.direct_sum_ok(n).map_err(err)?);
        c.insert("tilde_dim".to_string(), deg.b() == KernelTower::expected_tilde_dim(m, n));
        if n > m + 1 {
            c.insert("generated_in_low_degree".to_string(), tower.check_kernel_vanishing(n).map_err(err)?);
        }
        let mut decomposition = Vec::new();
        if n >= 1 {
            let rep = verify_decomposition(&yb, n).map_err(err)?;
            c.insert("decomposition".to_string(), rep.ok());
            decomposition = rep
                .parts
                .iter()
                .map(|p| DecompEntry { k: p.k, dim: p.dim, eigenvalue: p.eigenvalue.clone() })
                .collect();
        }
        for (name, ok) in &c {
            checks.push(NamedCheck { name: format!("{name} n={n}"), ok: *ok });
        }
        degrees.push(KernelDegree {
            n,
            m_dim: deg.m_dim(),
            m_recurrence: rec[n],
            tilde_dim: deg.b(),
            decomposition,
            checks: c,
        });
    }
    let hilbert = hilbert_check(m, series_len).map_err(err)?;
    checks.push(NamedCheck { name: "hilbert_identity".into(), ok: hilbert.identity_ok });
    checks.push(NamedCheck { name: "hilbert_inverse".into(), ok: hilbert.inverse_matches_m });
    checks.push(NamedCheck { name: "dimension_count".into(), ok: dimension_count(m, &rec) });
    let m2 = if m == 2 {
        let r = check_m2_recurrences(&rec);
        checks.push(NamedCheck { name: "m2_recurrences".into(), ok: r.all() });
        Some(r)
    } else {
        None
    };
    let generators = match m {
        2 | 3 => {
            let top = n_max.min(if m == 2 { 5 } else { 4 });
            let rep = verify_generator_examples(&yb, top).map_err(err)?;
            checks.push(NamedCheck { name: format!("generators n<={top}"), ok: rep.ok() });
            Some(rep)
        }
        _ => None,
    };
    let ranks = rank_check(&yb, config, &mut checks);
    let fails = failures(&checks);
    let rows: Vec<Vec<String>> = degrees
        .iter()
        .map(|d| {
            vec![
                d.n.to_string(),
                d.m_dim.to_string(),
                d.m_recurrence.to_string(),
                d.tilde_dim.to_string(),
                d.decomposition.iter().map(|p| p.dim.to_string()).collect::<Vec<_>>().join(" "),
                verdict(d.checks.values().all(|&b| b)),
            ]
        })
        .collect();
    let b: Vec<i128> = hilbert.b.clone();
    let report = json!({
        "command": "kernel",
        "m": m,
        "n_max": n_max,
        "degrees": degrees,
        "b": b,
        "hilbert": hilbert,
        "m2_recurrences": m2,
        "generators": generators,
        "ranks": ranks,
        "checks": checks,
        "passed": fails.is_empty(),
    });
    let mut text = table(
        &format!("kernel m={m} n_max={n_max}"),
        &["n", "M", "M_rec", "tilde", "parts", "checks"],
        &rows,
    );
    let b_text: Vec<String> = b.iter().map(i128::to_string).collect();
    text.push_str(&format!("b = {}\n", b_text.join(", ")));
    for c in checks.iter().filter(|c| !c.name.contains(" n=")) {
        text.push_str(&format!("{}: {}\n", c.name, verdict(c.ok)));
    }
    Ok(Outcome {
        report,
        csv: csv(&["n", "M", "M_recurrence", "tilde_dim", "checks_ok"], &rows_for_csv(&degrees)),
        table: text,
        failures: fails,
    })
}

fn rows_for_csv(degrees: &[KernelDegree]) -> Vec<Vec<String>> {
    degrees
        .iter()
        .map(|d| {
            vec![
                d.n.to_string(),
                d.m_dim.to_string(),
                d.m_recurrence.to_string(),
                d.tilde_dim.to_string(),
                d.checks.values().all(|&b| b).to_string(),
            ]
        })
        .collect()
}

/// Homology errors that are verdicts rather than input problems.
fn module_failure(e: HomologyError) -> Result<Vec<String>, String> {
    match e {
        HomologyError::WallCondition { i, j } => Ok(vec![format!("wall condition fails for the pair ({i},{j})")]),
        other => Err(other.to_string()),
    }
}

fn wall_failure_outcome(command: &str, fails: Vec<String>) -> Outcome {
    let report = json!({ "command": command, "passed": false, "failures": fails });
    Outcome {
        report,
        csv: String::new(),
        table: format!("{command}: {}\n", fails.join("; ")),
        failures: fails,
    }
}

/// Per-degree homology with the Betti, splitting and Koszul verdicts.
pub fn cmd_homology(config: &RunConfig) -> Result<Outcome, String> {
    let spec = config.load_module()?;
    let m = spec.m();
    let yb = yb_for(config, m)?;
    let report = match homology_dims(&spec, &yb, config.n_max) {
        Ok(r) => r,
        Err(e) => return Ok(wall_failure_outcome("homology", module_failure(e)?)),
    };
    let mut checks: Vec<NamedCheck> =
        report.failed_checks().into_iter().map(|name| NamedCheck { name, ok: false }).collect();
    checks.push(NamedCheck { name: "homology_records".into(), ok: report.ok() });
    let mut r_stacked = None;
    if let (VModuleSpec::Finite { .. }, Some(r)) = (&spec, &report.r) {
        let st = r_ranks_stacked(&spec, &yb).map_err(err)?;
        checks.push(NamedCheck { name: "r_stacked_matches".into(), ok: st == *r });
        r_stacked = Some(st);
    }
    let top = match spec.truncation() {
        Some(t) => config.n_max.min(t),
        None => config.n_max,
    };
    let mut splitting = Vec::new();
    for n in 0..=top {
        let rep = verify_complex_splitting(&spec, &yb, n).map_err(err)?;
        checks.push(NamedCheck { name: format!("splitting n={n}"), ok: rep.ok() });
        splitting.push(json!({ "n": n, "ok": rep.ok() }));
    }
    let koszul = koszul_check(&spec, &yb).map_err(err)?;
    checks.push(NamedCheck { name: "koszul".into(), ok: koszul.ok() });
    let ranks = rank_check(&yb, config, &mut checks);
    let fails = failures(&checks);
    let rows: Vec<Vec<String>> = report
        .records
        .iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                r.module_degree.to_string(),
                r.dim_c.to_string(),
                r.rank_out.to_string(),
                r.rank_in.to_string(),
                r.dim_h.to_string(),
                r.betti_formula.map(|b| b.to_string()).unwrap_or_else(|| "-".into()),
                verdict(r.checks.values().all(|&b| b)),
            ]
        })
        .collect();
    let mut text = table(
        &format!("homology ({}, m={m})", report.kind),
        &["n", "deg", "dim C", "rank out", "rank in", "dim H", "formula", "checks"],
        &rows,
    );
    if let Some(r) = &report.r {
        text.push_str(&format!("r = {:?}, stacked = {:?}\n", r, r_stacked.clone().unwrap_or_default()));
    }
    for c in checks.iter().filter(|c| c.name == "koszul" || c.name.starts_with("splitting")) {
        text.push_str(&format!("{}: {}\n", c.name, verdict(c.ok)));
    }
    let json_report = json!({
        "command": "homology",
        "module": spec.to_json(),
        "homology": report,
        "r_stacked": r_stacked,
        "splitting": splitting,
        "koszul": koszul,
        "ranks": ranks,
        "checks": checks,
        "passed": fails.is_empty(),
    });
    Ok(Outcome { report: json_report, csv: report.to_csv(), table: text, failures: fails })
}

/// One `DecompositionReport` at degree `--n`.
pub fn cmd_decompose(config: &RunConfig) -> Result<Outcome, String> {
    let n = config.n.unwrap_or(config.n_max);
    if n == 0 {
        return Err("decompose needs n >= 1".into());
    }
    let yb = yb_for(config, config.m)?;
    let rep = verify_decomposition(&yb, n).map_err(err)?;
    let mut checks = vec![NamedCheck { name: format!("decomposition n={n}"), ok: rep.ok() }];
    let ranks = rank_check(&yb, config, &mut checks);
    let rows: Vec<Vec<String>> = rep
        .parts
        .iter()
        .map(|p| vec![p.k.to_string(), p.dim.to_string(), p.eigenvalue.clone(), verdict(p.eigen_ok)])
        .collect();
    let mut text = table(&format!("decomposition m={} n={n}", config.m), &["k", "dim", "eigenvalue", "eigen"], &rows);
    text.push_str(&format!(
        "dims sum {} of {}; pairwise {}; direct sum {}\n",
        rep.dims_sum,
        yb.dim(n),
        verdict(rep.pairwise_ok),
        verdict(rep.direct_sum_ok)
    ));
    let csv_rows: Vec<Vec<String>> = rep
        .parts
        .iter()
        .map(|p| vec![p.k.to_string(), p.dim.to_string(), p.eigenvalue.clone(), p.eigen_ok.to_string()])
        .collect();
    let fails = failures(&checks);
    let report = json!({ "command": "decompose", "report": rep, "ranks": ranks, "passed": fails.is_empty() });
    Ok(Outcome { report, csv: csv(&["k", "dim", "eigenvalue", "eigen_ok"], &csv_rows), table: text, failures: fails })
}

/// Koszul comparison squares and, for the free module, δ-exactness.
pub fn cmd_koszul(config: &RunConfig) -> Result<Outcome, String> {
    let spec = config.load_module()?;
    let yb = yb_for(config, spec.m())?;
    let rep = match koszul_check(&spec, &yb) {
        Ok(r) => r,
        Err(e) => return Ok(wall_failure_outcome("koszul", module_failure(e)?)),
    };
    let mut checks = Vec::new();
    for s in &rep.squares {
        checks.push(NamedCheck { name: format!("square k={} deg={}", s.k, s.module_degree), ok: s.commutes });
    }
    for d in &rep.delta {
        checks.push(NamedCheck {
            name: format!("delta exact k={} total={}", d.k, d.total_degree),
            ok: d.exact && d.squared_zero,
        });
    }
    let ranks = rank_check(&yb, config, &mut checks);
    let fails = failures(&checks);
    let rows: Vec<Vec<String>> = checks.iter().map(|c| vec![c.name.clone(), verdict(c.ok)]).collect();
    let report = json!({ "command": "koszul", "report": rep, "ranks": ranks, "passed": fails.is_empty() });
    Ok(Outcome {
        report,
        csv: check_csv(&checks),
        table: table(&format!("koszul (m={})", spec.m()), &["check", "result"], &rows),
        failures: fails,
    })
}
