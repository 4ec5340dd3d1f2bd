//! One function per subcommand: run the library and shape the results into
//! a JSON report plus plot-ready tables.

use randfourier::coefficients::{CoefficientSequence, ConditionVerdict};
use randfourier::counterexample::{
    default_cutoffs, dirichlet_integral, dirichlet_table, divergence_profile, l2_identity_check, l2_identity_exact,
    CounterexampleConfig,
};
use randfourier::engine::{
    banded_alphas, bound_ratio_profile, cauchy_diagnostic, l2_growth_profile, normalized_sup_stat, ratio_flatness_slope,
    running_ratio, SeriesRealization, SupStatGrid,
};
use randfourier::hypotheses::{check_h, check_hprime, check_hsecond, Hypothesis};
use randfourier::{Error, Result};
use serde_json::json;

use crate::artifact::{num, Outcome, Table};
use crate::config::{
    BoundScanConfig, ConditionsConfig, CounterexampleCliConfig, HypothesisConfig, SimulateConfig, SupStatConfig,
};

pub fn simulate(c: &SimulateConfig, seed: u64) -> Result<Outcome> {
    let r = SeriesRealization::new(seed, c.family.clone(), c.coefficients.clone(), c.function.clone())?;
    let d = cauchy_diagnostic(&r, &c.window, &c.checkpoints, c.centered)?;
    let mut cauchy = Table::new("", vec!["n", "m", "sup", "guard", "alpha"]);
    for e in &d.cauchy_profile {
        cauchy.push(vec![e.n.to_string(), e.m.to_string(), num(e.sup), num(e.guard), num(e.alpha)]);
    }
    let mut tables = vec![cauchy];
    let mut l2 = None;
    if let Some(cfg) = &c.l2 {
        let n = *c.checkpoints.last().expect("validated");
        let profile = l2_growth_profile(&r, n, &cfg.ts, cfg.points_per_unit)?;
        let mut t = Table::new("l2", vec!["t", "normalized_l2"]);
        for &(x, v) in &profile {
            t.push(vec![num(x), num(v)]);
        }
        tables.push(t);
        l2 = Some(json!({ "n": n, "profile": profile }));
    }
    Ok(Outcome { result: json!({ "diagnostics": d, "l2_growth": l2 }), tables })
}

pub fn check_conditions(c: &ConditionsConfig) -> Result<Outcome> {
    let a = &c.coefficients;
    let verdict = a.check_condition(&c.regime, c.horizon)?;
    // A divergent condition series has no partial sums to report; the
    // verdict already records the failure.
    let partial = match a.condition_partial_sums(&c.regime, c.horizon) {
        Ok(v) => Some(v),
        Err(Error::Divergent(_)) if matches!(verdict, ConditionVerdict::Fails { .. }) => None,
        Err(e) => return Err(e),
    };
    let variation = a.total_variation(c.horizon)?;
    let block = match &c.block_family {
        Some(p) => Some(a.check_block_criterion(
            &c.regime,
            |n| {
                let n = u64::try_from(n).map_err(|_| Error::InvalidParameter(format!("Φ_β({n}) is out of range")))?;
                p.moment_bound(n)
            },
            c.block_k_max,
        )?),
        None => None,
    };
    let mut t = Table::new("", vec!["n", "partial_sum"]);
    for &(n, s) in partial.iter().flatten() {
        t.push(vec![n.to_string(), num(s)]);
    }
    let mut tables = vec![t];
    if let Some(terms) = &block {
        let mut b = Table::new("blocks", vec!["k", "term"]);
        for (k, v) in terms.iter().enumerate() {
            b.push(vec![k.to_string(), num(*v)]);
        }
        tables.push(b);
    }
    let result = json!({
        "condition": verdict,
        "partial_sums": partial,
        "total_variation": variation,
        "block_terms": block,
    });
    Ok(Outcome { result, tables })
}

pub fn check_hypothesis(c: &HypothesisConfig) -> Result<Outcome> {
    let report = match c.which {
        Hypothesis::H => check_h(&c.coefficients, &c.family, &c.window, &c.starts(), c.m_cap, &c.options)?,
        Hypothesis::Hprime => check_hprime(&c.family, &c.window, c.n_max, &c.options)?,
        Hypothesis::Hsecond => check_hsecond(&c.family, &c.window, &c.starts(), c.m_cap, &c.options)?,
    };
    let mut t = Table::new("", vec!["N", "sup"]);
    for &(n, s) in &report.tail_profile {
        t.push(vec![n.to_string(), num(s)]);
    }
    let mut b = Table::new("blocks", vec!["N", "sup"]);
    for &(n, s) in &report.block_profile {
        b.push(vec![n.to_string(), num(s)]);
    }
    let result = serde_json::to_value(&report).expect("serializable");
    Ok(Outcome { result, tables: vec![t, b] })
}

pub fn counterexample(c: &CounterexampleCliConfig, seed: u64) -> Result<Outcome> {
    let core = CounterexampleConfig { a: c.a.clone(), k_max: c.k_max, quadrature_points: c.quadrature_points };
    core.validate()?;
    let ks: Vec<u64> = (1..=c.k_max).collect();
    let integrals = match c.quadrature_points {
        Some(p) => ks.iter().map(|&k| Ok((k, dirichlet_integral(k, p)?))).collect::<Result<Vec<_>>>()?,
        None => dirichlet_table(&ks)?,
    };
    let mut it = Table::new("integrals", vec!["k", "i_k"]);
    for &(k, v) in &integrals {
        it.push(vec![k.to_string(), num(v)]);
    }
    let cutoffs = default_cutoffs(c.k_max);
    let mut l2 = Vec::with_capacity(cutoffs.len());
    let mut lt = Table::new("l2", vec!["k_max", "lhs", "rhs", "exact"]);
    for &k in &cutoffs {
        let sub = CounterexampleConfig { k_max: k, ..core.clone() };
        let id = l2_identity_check(&sub, seed)?;
        let exact = l2_identity_exact(&c.a, k);
        lt.push(vec![k.to_string(), num(id.lhs), num(id.rhs), num(exact)]);
        l2.push(json!({ "k_max": k, "lhs": id.lhs, "rhs": id.rhs, "exact": exact }));
    }
    let mut tables = vec![it, lt];
    let mut median = None;
    if c.seeds > 1 {
        let seeds = seeds_from(seed, c.seeds);
        let profile = divergence_profile(&core, &cutoffs, &seeds)?;
        let mut dt = Table::new("divergence", vec!["k_max", "median_lhs"]);
        for &(k, v) in &profile {
            dt.push(vec![k.to_string(), num(v)]);
        }
        tables.push(dt);
        median = Some(profile);
    }
    let result = json!({ "integrals": integrals, "l2": l2, "median_lhs": median });
    Ok(Outcome { result, tables })
}

pub fn bound_scan(c: &BoundScanConfig, seed: u64) -> Result<Outcome> {
    let r = SeriesRealization::new(seed, c.family.clone(), c.coefficients.clone(), c.function.clone())?;
    let alphas = banded_alphas(c.alpha_max, c.per_band);
    let profile = bound_ratio_profile(&r, &alphas, c.n)?;
    let mut cutoffs: Vec<f64> =
        std::iter::successors(Some(1.0f64), |&a| Some(2.0 * a)).take_while(|&a| a < c.alpha_max).collect();
    cutoffs.push(c.alpha_max);
    let running = running_ratio(&profile, &cutoffs);
    let slope = ratio_flatness_slope(&running);
    let max = profile.iter().map(|p| p.1).fold(0.0, f64::max);
    let mut t = Table::new("", vec!["alpha", "ratio"]);
    for &(a, v) in &profile {
        t.push(vec![num(a), num(v)]);
    }
    let mut rt = Table::new("running", vec!["alpha_cutoff", "running_max"]);
    for &(a, v) in &running {
        rt.push(vec![num(a), num(v)]);
    }
    let result = json!({ "n": c.n, "log_bound_ratio": max, "running": running, "flatness_slope": slope });
    Ok(Outcome { result, tables: vec![t, rt] })
}

fn seeds_from(seed: u64, count: u64) -> Vec<u64> {
    (0..count).map(|i| seed.wrapping_add(i)).collect()
}

pub fn sup_stat(c: &SupStatConfig, seed: u64) -> Result<Outcome> {
    let seeds = seeds_from(seed, c.seeds);
    let grid = SupStatGrid::geometric(c.cap, c.density, c.j_max, c.alpha_points);
    let a: &CoefficientSequence = &c.coefficients;
    let stat = normalized_sup_stat(&c.family, a, c.m, &grid, &seeds)?;
    let mut t = Table::new("", vec!["seed", "value"]);
    for (s, v) in seeds.iter().zip(&stat.per_seed) {
        t.push(vec![s.to_string(), num(*v)]);
    }
    let mut tables = vec![t];
    let mut doubled = None;
    if c.doubled {
        let fine = normalized_sup_stat(&c.family, a, c.m, &grid.doubled(c.cap, c.density), &seeds)?;
        let change = (fine.value - stat.value).abs() / stat.value;
        let mut dt = Table::new("doubled", vec!["seed", "value"]);
        for (s, v) in seeds.iter().zip(&fine.per_seed) {
            dt.push(vec![s.to_string(), num(*v)]);
        }
        tables.push(dt);
        doubled = Some(json!({ "stat": fine, "relative_change": change }));
    }
    let result = json!({ "stat": stat, "pairs": grid.pairs.len(), "doubled": doubled });
    Ok(Outcome { result, tables })
}
