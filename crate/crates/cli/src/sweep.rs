//! Grid evaluation and CSV/JSON serialization.
//!
//! A sweep walks the (strategy, threshold, femto delay, velocity) grid in
//! that nesting order. Coverage is velocity-independent, so each analytic
//! coverage integral is computed once per (strategy, threshold) cell and the
//! Monte Carlo pass (when enabled) scores the whole strategy-by-threshold
//! grid on one shared set of realizations.

use std::io::Write;

use hoskip_analytic::throughput::ThroughputModel;
use hoskip_model::MobilityProfile;
use hoskip_sim::stationary::{coverage_grid, McConfig};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunPlan;
use crate::CliError;

/// One evaluated grid point.
#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub strategy: &'static str,
    pub ic: bool,
    pub theta_db: f64,
    pub v_kmh: f64,
    pub d_f_s: f64,
    pub coverage_analytic: f64,
    /// Empirical coverage; absent when `mc_samples = 0`.
    pub coverage_mc: Option<f64>,
    /// 95% half-width (1.96 binomial standard errors) of `coverage_mc`.
    pub mc_ci: Option<f64>,
    /// Fraction of time lost to handovers, clamped to 1.
    pub d_ho: f64,
    /// Spectral efficiency `ln(1 + theta) * coverage`, nats/s/Hz.
    pub rate_nats_hz: f64,
    /// Average throughput `w_hz * rate_nats_hz * (1 - d_ho)`, nats/s.
    pub at_nats_s: f64,
    pub config_hash: String,
}

/// Rows in grid order plus any strict-mode findings.
#[derive(Debug)]
pub struct Sweep {
    pub rows: Vec<Row>,
    /// One message per tolerance or finiteness violation; `run --strict`
    /// exits with status 2 when this is non-empty.
    pub violations: Vec<String>,
}

/// Monte Carlo deviations beyond `max(0.01, 3 standard errors)` count as
/// violations; the floor absorbs the small bias of a finite sampling window.
fn mc_tolerance(std_error: f64) -> f64 {
    (3.0 * std_error).max(0.01)
}

pub fn run_sweep(plan: &RunPlan) -> Result<Sweep, CliError> {
    // one cached model per threshold; warm the coverage caches in parallel
    let mut models = plan
        .theta_linear
        .iter()
        .map(|&t| ThroughputModel::new(plan.params, t, plan.bandwidth_hz))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Config(e.to_string()))?;
    models
        .par_iter_mut()
        .try_for_each(|m| {
            plan.choices
                .iter()
                .try_for_each(|&c| m.coverage(c).map(drop))
        })
        .map_err(|e| CliError::Numeric(e.to_string()))?;

    let mc = match plan.mc_samples {
        0 => None,
        n => Some(
            coverage_grid(
                &plan.params,
                &plan.choices,
                &plan.theta_linear,
                &McConfig::new(n, plan.seed),
            )
            .map_err(|e| CliError::Numeric(e.to_string()))?,
        ),
    };

    let cells = plan.choices.len() * plan.theta_db.len();
    let mut rows =
        Vec::with_capacity(cells * plan.femto_delays_s.len() * plan.velocities_kmh.len());
    let mut violations = Vec::new();
    for (ci, &choice) in plan.choices.iter().enumerate() {
        for (ti, &theta_db) in plan.theta_db.iter().enumerate() {
            let est = mc.as_ref().map(|g| g.estimates[ci][ti]);
            if let Some(e) = est {
                // the cache is warm, so this lookup is free
                let analytic = models[ti]
                    .coverage(choice)
                    .map_err(|e| CliError::Numeric(e.to_string()))?
                    .value;
                let diff = (analytic - e.probability).abs();
                let tol = mc_tolerance(e.std_error);
                if diff > tol {
                    violations.push(format!(
                        "{} theta={theta_db} dB: analytic coverage {analytic:.6} vs Monte \
                         Carlo {:.6} differs by {diff:.4} > {tol:.4}",
                        choice.tag(),
                        e.probability
                    ));
                }
            }
            for &d_f in &plan.femto_delays_s {
                for &v in &plan.velocities_kmh {
                    let mobility = MobilityProfile::new(v, plan.macro_delay_s, d_f);
                    let t = models[ti]
                        .throughput(choice, &mobility)
                        .map_err(|e| CliError::Numeric(e.to_string()))?;
                    let row = Row {
                        strategy: choice.strategy.tag(),
                        ic: choice.ic,
                        theta_db,
                        v_kmh: v,
                        d_f_s: d_f,
                        coverage_analytic: t.coverage,
                        coverage_mc: est.map(|e| e.probability),
                        mc_ci: est.map(|e| 1.96 * e.std_error),
                        d_ho: t.handover_fraction,
                        rate_nats_hz: t.rate_nats_hz,
                        at_nats_s: plan.bandwidth_hz
                            * t.rate_nats_hz
                            * (1.0 - t.handover_fraction),
                        config_hash: plan.hash.clone(),
                    };
                    if let Some(msg) = check_row_finite(&row) {
                        violations.push(msg);
                    }
                    rows.push(row);
                }
            }
        }
    }
    Ok(Sweep { rows, violations })
}

fn check_row_finite(row: &Row) -> Option<String> {
    let named = [
        ("coverage_analytic", Some(row.coverage_analytic)),
        ("coverage_mc", row.coverage_mc),
        ("mc_ci", row.mc_ci),
        ("d_ho", Some(row.d_ho)),
        ("rate_nats_hz", Some(row.rate_nats_hz)),
        ("at_nats_s", Some(row.at_nats_s)),
    ];
    for (name, value) in named {
        if let Some(v) = value {
            if !v.is_finite() {
                return Some(format!(
                    "{} theta={} dB v={} d_f={}: {name} is not finite ({v})",
                    row.strategy, row.theta_db, row.v_kmh, row.d_f_s
                ));
            }
        }
    }
    let c = row.coverage_analytic;
    (!(-1e-9..=1.0 + 1e-9).contains(&c)).then(|| {
        format!(
            "{} theta={} dB: coverage_analytic {c} outside [0, 1]",
            row.strategy, row.theta_db
        )
    })
}

pub const COLUMNS: [&str; 12] = [
    "strategy",
    "ic",
    "theta_db",
    "v_kmh",
    "d_f_s",
    "coverage_analytic",
    "coverage_mc",
    "mc_ci",
    "d_ho",
    "rate_nats_hz",
    "at_nats_s",
    "config_hash",
];

/// Writes the sweep as CSV: `#` comment header, column row, one record per
/// grid point. Floats use shortest round-trip formatting, so the bytes are
/// identical across runs for a fixed configuration and seed.
pub fn write_csv<W: Write>(mut out: W, plan: &RunPlan, rows: &[Row]) -> Result<(), CliError> {
    let header = format!(
        "# two-tier handover-skipping sweep; one row per (strategy, theta, d_f, v) grid point\n\
         # columns: {}\n\
         # coverage_mc and mc_ci are empty when mc_samples = 0; mc_ci is the 95% half-width\n\
         # at_nats_s = w_hz * rate_nats_hz * (1 - d_ho); divide by ln(2) for bits/s\n\
         # config: {}\n\
         # config_hash: {}\n",
        COLUMNS.join(","),
        plan.canonical.replace('\n', " "),
        plan.hash,
    );
    out.write_all(header.as_bytes()).map_err(io_err)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COLUMNS).map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.strategy.to_string(),
            r.ic.to_string(),
            r.theta_db.to_string(),
            r.v_kmh.to_string(),
            r.d_f_s.to_string(),
            r.coverage_analytic.to_string(),
            opt(r.coverage_mc),
            opt(r.mc_ci),
            r.d_ho.to_string(),
            r.rate_nats_hz.to_string(),
            r.at_nats_s.to_string(),
            r.config_hash.clone(),
        ])
        .map_err(csv_err)?;
    }
    w.into_inner()
        .map_err(|e| CliError::Config(format!("output: {e}")))?
        .flush()
        .map_err(io_err)
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

#[derive(Serialize)]
struct JsonReport<'a> {
    config_hash: &'a str,
    config: &'a crate::config::RawConfig,
    rows: &'a [Row],
}

/// Writes the sweep as a JSON object mirroring the CSV rows; disabled Monte
/// Carlo columns serialize as `null`.
pub fn write_json<W: Write>(mut out: W, plan: &RunPlan, rows: &[Row]) -> Result<(), CliError> {
    let report = JsonReport {
        config_hash: &plan.hash,
        config: &plan.echo,
        rows,
    };
    serde_json::to_writer_pretty(&mut out, &report)
        .map_err(|e| CliError::Config(format!("output: {e}")))?;
    out.write_all(b"\n").map_err(io_err)
}

fn io_err(e: std::io::Error) -> CliError {
    CliError::Config(format!("output: {e}"))
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Config(format!("output: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse;

    fn plan(extra: &str) -> RunPlan {
        let text = format!(
            r#"
            lambda_macro_per_km2 = 30.0
            lambda_femto_per_km2 = 70.0
            p_macro_watt = 1.0
            p_femto_watt = 0.1
            eta = 4.0
            theta_db = 6.0
            w_hz = 1e7
            v_kmh_grid = [0.0, 120.0]
            d_m_s = 0.35
            d_f_s = 0.7
            strategies = ["bc"]
            {extra}
            "#
        );
        parse(&text).unwrap().resolve().unwrap()
    }

    #[test]
    fn rows_follow_grid_order_and_the_throughput_identity() {
        let p = plan("");
        let sweep = run_sweep(&p).unwrap();
        assert_eq!(sweep.rows.len(), 2);
        assert!(sweep.violations.is_empty());
        let (r0, r1) = (&sweep.rows[0], &sweep.rows[1]);
        assert_eq!((r0.v_kmh, r1.v_kmh), (0.0, 120.0));
        // velocity only enters through the handover discount
        assert_eq!(r0.coverage_analytic, r1.coverage_analytic);
        assert_eq!(r0.d_ho, 0.0);
        assert!(r1.d_ho > 0.0);
        for r in &sweep.rows {
            assert!((r.coverage_analytic - 0.311803).abs() < 5e-6);
            let at = 1e7 * r.rate_nats_hz * (1.0 - r.d_ho);
            assert_eq!(r.at_nats_s, at);
            assert!(r.coverage_mc.is_none());
            assert_eq!(r.config_hash, p.hash);
        }
    }

    #[test]
    fn monte_carlo_columns_appear_and_agree() {
        let p = plan("mc_samples = 4000\nseed = 11");
        let sweep = run_sweep(&p).unwrap();
        assert!(
            sweep.violations.is_empty(),
            "violations: {:?}",
            sweep.violations
        );
        let r = &sweep.rows[0];
        let mc = r.coverage_mc.unwrap();
        let ci = r.mc_ci.unwrap();
        assert!(ci > 0.0 && ci < 0.05);
        assert!((mc - r.coverage_analytic).abs() < 0.04);
    }

    #[test]
    fn csv_output_is_byte_stable_and_commented() {
        let p = plan("mc_samples = 500\nseed = 3");
        let sweep = run_sweep(&p).unwrap();
        let mut a = Vec::new();
        write_csv(&mut a, &p, &sweep.rows).unwrap();
        let sweep2 = run_sweep(&p).unwrap();
        let mut b = Vec::new();
        write_csv(&mut b, &p, &sweep2.rows).unwrap();
        assert_eq!(a, b);
        let text = String::from_utf8(a).unwrap();
        assert!(text.starts_with("# two-tier handover-skipping sweep"));
        assert!(text.contains(&format!("# config_hash: {}", p.hash)));
        // comment block, column row, one record per grid point
        assert_eq!(text.lines().count(), 6 + 1 + 2);
        let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(data[0], COLUMNS.join(","));
        assert_eq!(data[1].split(',').count(), COLUMNS.len());
    }

    #[test]
    fn json_output_mirrors_rows() {
        let p = plan("");
        let sweep = run_sweep(&p).unwrap();
        let mut buf = Vec::new();
        write_json(&mut buf, &p, &sweep.rows).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["config_hash"], serde_json::json!(p.hash));
        assert_eq!(v["rows"].as_array().unwrap().len(), 2);
        assert!(v["rows"][0]["coverage_mc"].is_null());
        assert_eq!(v["config"]["eta"], serde_json::json!(4.0));
        assert_eq!(
            v["rows"][0]["coverage_analytic"],
            serde_json::json!(sweep.rows[0].coverage_analytic)
        );
    }
}
