//! JSON reports for a function's graph distribution.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::Result;
use crate::funcspec::Instance;
use crate::graphdist::{coset_histogram, spread_criterion, uniformity};
use crate::sidon::{ExcludeDistribution, Histogram};

/// Schema the reports validate against.
pub const REPORT_SCHEMA: &str = include_str!("../../../schemas/report.schema.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Walsh,
    Bruteforce,
}

#[derive(Clone, Debug, Serialize)]
pub struct CosetEntry {
    pub a: String,
    pub histogram: BTreeMap<String, u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DistReport {
    pub function_spec: String,
    pub n: u32,
    pub modulus: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parameter: Option<String>,
    pub method: Method,
    pub histogram: BTreeMap<String, u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_coset: Option<Vec<CosetEntry>>,
    #[serde(rename = "uniform_Q")]
    pub uniform_q: bool,
    #[serde(rename = "uniform_Qstar")]
    pub uniform_qstar: bool,
    pub maximal: bool,
    pub e_min: u32,
    pub e_max: u32,
    pub theorem_checks: BTreeMap<String, bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
}

/// Histogram keyed by decimal strings, as JSON objects require.
pub fn histogram_json(h: &Histogram) -> BTreeMap<String, u64> {
    h.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ReportOptions {
    pub per_coset: bool,
}

pub fn build_report(
    inst: &Instance,
    dist: &ExcludeDistribution,
    method: Method,
    opts: ReportOptions,
) -> Result<DistReport> {
    let f = &inst.table;
    let (uniform_q, uniform_qstar) = uniformity(f, dist)?;
    let per_coset = opts.per_coset.then(|| {
        (0..f.len() as u32)
            .map(|a| CosetEntry {
                a: format!("{a:#x}"),
                histogram: histogram_json(&coset_histogram(f, dist, a)),
            })
            .collect()
    });
    let mut checks = BTreeMap::new();
    let mass: u128 = dist
        .histogram()
        .iter()
        .map(|(&k, &c)| k as u128 * c as u128)
        .sum();
    checks.insert(
        "conservation".to_string(),
        mass == crate::sidon::choose3(dist.set().len() as u64),
    );
    checks.insert("inequality_chain".to_string(), dist.inequality_chain_holds());
    checks.insert("spread_criterion".to_string(), spread_criterion(f, dist)?);
    checks.insert(
        "uniform_Q_implies_maximal".to_string(),
        !uniform_q || dist.is_maximal(),
    );
    Ok(DistReport {
        function_spec: inst.label.clone(),
        n: inst.n,
        modulus: format!("{:#x}", inst.field.modulus()),
        parameter: inst.param.map(|p| format!("{p:#x}")),
        method,
        histogram: histogram_json(dist.histogram()),
        per_coset,
        uniform_q,
        uniform_qstar,
        maximal: dist.is_maximal(),
        e_min: dist.e_min(),
        e_max: dist.e_max(),
        theorem_checks: checks,
        timings: None,
    })
}
