use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use serde_json::{json, Value};
use sidon_core::cache::Cache;
use sidon_core::funcspec::{parse_uint, FieldConfig, FunctionSpec, Instance};
use sidon_core::graphdist::{
    conjecture_uniform_implies_maximal, coset_histogram, dillon_dproperty,
    dproperty_from_distribution, exclude_dist_bruteforce, exclude_dist_walsh, first_disagreement,
    integrality, permutation_local_equiv_all, plateaued_identity_witness, spread_criterion,
    uniformity, verify_carlet_cases, verify_gold_kasami, walsh_bound_criterion, zero_flat_witness,
    HYPERPLANE_MAX_N,
};
use sidon_core::report::{build_report, histogram_json, Method, ReportOptions};
use sidon_core::sidon::{
    ed_equivalent, exclude_distribution, is_sidon, random_sidon, ExcludeDistribution, PointSet,
};
use sidon_core::table3;
use sidon_core::vbf::{
    algebraic_degree, components_all_unbalanced_walsh, cyclotomic_equivalent,
    cyclotomic_residues, graph_of, inverse_coset, is_ab_walsh, is_apn, is_plateaued_walsh,
    walsh_full,
};
use sidon_core::viz::{render_svg, render_text, SvgOptions};
use sidon_core::{Error, Result};

use crate::{Command, EquivKind, FieldArgs, Format, OutputArgs, RenderFormat, SetAction, Theorem};

pub enum Outcome {
    Holds,
    Fails,
}

impl From<bool> for Outcome {
    fn from(b: bool) -> Self {
        if b {
            Outcome::Holds
        } else {
            Outcome::Fails
        }
    }
}

pub fn run(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Dist {
            spec,
            field,
            output,
            oracle,
            per_coset,
            timings,
            cache_dir,
        } => cmd_dist(&spec, &field, &output, oracle, per_coset, timings, cache_dir.as_deref()),
        Command::Check { spec, field, output } => cmd_check(&spec, &field, &output),
        Command::Uniform { spec, field, output } => cmd_uniform(&spec, &field, &output),
        Command::Table3 { include_n10, output } => cmd_table3(include_n10, &output),
        Command::Verify {
            theorem,
            spec,
            field,
            output,
        } => cmd_verify(theorem, spec.as_deref(), &field, &output),
        Command::Render {
            spec,
            set,
            field,
            format,
            out,
            cell_size,
            no_labels,
        } => cmd_render(
            spec.as_deref(),
            set.as_deref(),
            &field,
            format,
            out.as_deref(),
            SvgOptions {
                cell_size,
                labels: !no_labels,
            },
        ),
        Command::Equiv { kind } => cmd_equiv(kind),
        Command::Set { action } => cmd_set(action),
    }
}

fn instantiate(spec: &str, args: &FieldArgs) -> Result<Instance> {
    let spec = FunctionSpec::parse(spec)?;
    let n = spec.resolve_n(args.n)?;
    let mut config = match &args.config {
        Some(path) => FieldConfig::load(path)?,
        None => FieldConfig::default(),
    };
    if let Some(m) = &args.modulus {
        let m = u32::try_from(parse_uint(m)?)
            .map_err(|_| Error::Validation(format!("modulus {m} out of range")))?;
        config = config.with_modulus(n, m);
    }
    spec.instantiate(Some(n), &config)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Io {
            path: path.to_path_buf(),
            source: e,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn hist_text(dist: &ExcludeDistribution) -> String {
    dist.histogram()
        .iter()
        .map(|(k, c)| format!("{k}:{c}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn require_apn(inst: &Instance) -> Result<()> {
    if is_apn(&inst.table) {
        Ok(())
    } else {
        Err(Error::Validation(format!("{} is not APN", inst.label)))
    }
}

fn distribution(inst: &Instance, cache: Option<&Cache>) -> Result<ExcludeDistribution> {
    require_apn(inst)?;
    let modulus = inst.field.modulus();
    if let Some(cache) = cache.filter(|_| inst.cacheable) {
        let graph = graph_of(&inst.table);
        if let Some(d) = cache.load(&inst.label, modulus, &graph)? {
            return Ok(d);
        }
        let d = exclude_dist_walsh(&inst.table)?;
        cache.store(&inst.label, modulus, &d)?;
        return Ok(d);
    }
    exclude_dist_walsh(&inst.table)
}

fn cmd_dist(
    spec: &str,
    field: &FieldArgs,
    output: &OutputArgs,
    oracle: bool,
    per_coset: bool,
    timings: bool,
    cache_dir: Option<&Path>,
) -> Result<Outcome> {
    let inst = instantiate(spec, field)?;
    require_apn(&inst)?;
    let start = Instant::now();
    let (dist, method) = if oracle {
        let brute = exclude_dist_bruteforce(&inst.table)?;
        let walsh = exclude_dist_walsh(&inst.table)?;
        if let Some((p, x, y)) = first_disagreement(&brute, &walsh) {
            return Err(Error::Invariant(format!(
                "brute force and Walsh disagree at {p:#x}: {x} vs {y}"
            )));
        }
        (brute, Method::Bruteforce)
    } else {
        (distribution(&inst, Cache::resolve(cache_dir).as_ref())?, Method::Walsh)
    };
    let elapsed = start.elapsed().as_secs_f64();
    let mut report = build_report(&inst, &dist, method, ReportOptions { per_coset })?;
    if timings {
        report.timings = Some([("distribution_s".to_string(), elapsed)].into());
    }
    let text = match output.format {
        Format::Json => pretty(&report),
        Format::Csv => dist.to_csv(),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "function       {}", report.function_spec);
            let _ = writeln!(s, "modulus        {}", report.modulus);
            if let Some(p) = &report.parameter {
                let _ = writeln!(s, "parameter      {p}");
            }
            let _ = writeln!(s, "method         {}", if oracle { "bruteforce (Walsh agrees)" } else { "walsh" });
            let _ = writeln!(s, "histogram      {}", hist_text(&dist));
            let _ = writeln!(s, "e_min e_max    {} {}", report.e_min, report.e_max);
            let _ = writeln!(s, "maximal        {}", report.maximal);
            let _ = writeln!(s, "uniform Q      {}", report.uniform_q);
            let _ = writeln!(s, "uniform Q*     {}", report.uniform_qstar);
            if let Some(cosets) = &report.per_coset {
                for c in cosets {
                    let h: Vec<_> = c.histogram.iter().map(|(k, v)| format!("{k}:{v}")).collect();
                    let _ = writeln!(s, "coset {:<8} {}", c.a, h.join(" "));
                }
            }
            if let Some(t) = &report.timings {
                let _ = writeln!(s, "time           {:.3} s", t["distribution_s"]);
            }
            s
        }
    };
    emit(output.out.as_deref(), &text)?;
    Ok(Outcome::Holds)
}

fn cmd_check(spec: &str, field: &FieldArgs, output: &OutputArgs) -> Result<Outcome> {
    let inst = instantiate(spec, field)?;
    let f = &inst.table;
    let w = walsh_full(f);
    let props = json!({
        "function_spec": inst.label,
        "modulus": format!("{:#x}", inst.field.modulus()),
        "apn": is_apn(f),
        "ab": is_ab_walsh(&w),
        "plateaued": is_plateaued_walsh(&w),
        "unbalanced_components": components_all_unbalanced_walsh(&w),
        "algebraic_degree": algebraic_degree(f),
        "permutation": f.is_permutation(),
    });
    emit(output.out.as_deref(), &render_value(&props, output.format))?;
    Ok(Outcome::Holds)
}

fn cmd_uniform(spec: &str, field: &FieldArgs, output: &OutputArgs) -> Result<Outcome> {
    let inst = instantiate(spec, field)?;
    let dist = distribution(&inst, Cache::resolve(None).as_ref())?;
    let (q, qstar) = uniformity(&inst.table, &dist)?;
    let coset0 = histogram_json(&coset_histogram(&inst.table, &dist, 0));
    let v = json!({
        "function_spec": inst.label,
        "uniform_Q": q,
        "uniform_Qstar": qstar,
        "maximal": dist.is_maximal(),
        "coset_0": coset0,
    });
    emit(output.out.as_deref(), &render_value(&v, output.format))?;
    Ok(Outcome::Holds)
}

fn cmd_table3(include_large: bool, output: &OutputArgs) -> Result<Outcome> {
    let rows = table3::run(include_large)?;
    let text = match output.format {
        Format::Json => pretty(&rows),
        Format::Text => table3::render_text(&rows),
        Format::Csv => {
            let mut s = String::from("n,function,parameter,uniform_Q,uniform_Qstar,expected_Q,expected_Qstar\n");
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{}",
                    r.n,
                    r.function,
                    r.parameter.as_deref().unwrap_or(""),
                    r.uniform_q,
                    r.uniform_qstar,
                    r.expected_q,
                    r.expected_qstar
                );
            }
            s
        }
    };
    emit(output.out.as_deref(), &text)?;
    Ok(rows.iter().all(|r| r.matches).into())
}

/// Flat JSON objects as `key value` lines; nested values inline as JSON.
fn render_value(v: &Value, format: Format) -> String {
    match format {
        Format::Json => pretty(v),
        Format::Text | Format::Csv => {
            let Value::Object(map) = v else {
                return format!("{v}\n");
            };
            let width = map.keys().map(String::len).max().unwrap_or(0);
            let mut s = String::new();
            if format == Format::Csv {
                s.push_str("key,value\n");
            }
            for (k, val) in map {
                let shown = match val {
                    Value::String(x) => x.clone(),
                    other => other.to_string(),
                };
                if format == Format::Csv {
                    let _ = writeln!(s, "{k},\"{}\"", shown.replace('"', "\"\""));
                } else {
                    let _ = writeln!(s, "{k:<width$}  {shown}");
                }
            }
            s
        }
    }
}

fn cmd_verify(
    theorem: Theorem,
    spec: Option<&str>,
    field: &FieldArgs,
    output: &OutputArgs,
) -> Result<Outcome> {
    let need_spec = || spec.ok_or_else(|| Error::Validation("this check needs a function spec".into()));
    let (holds, mut details) = match theorem {
        Theorem::Integrality => {
            let ns: Vec<u32> = match field.n {
                Some(n) => vec![n],
                None => (2..=16).step_by(2).collect(),
            };
            let mut rows = Vec::new();
            let mut all = true;
            for n in ns {
                let (plus_half, plus_twice) = integrality(n)?;
                let ok = plus_half == (n % 4 == 0) && plus_twice == (n % 4 == 2);
                all &= ok;
                rows.push(json!({"n": n, "half_integral": plus_half, "twice_integral": plus_twice, "matches_rule": ok}));
            }
            (all, json!({ "rows": rows }))
        }
        Theorem::GoldKasami => {
            let inst = instantiate(spec.unwrap_or("gold:k=1"), field)?;
            let dist = distribution(&inst, None)?;
            let r = verify_gold_kasami(&inst.table, &dist)?;
            (r.ok, with_spec(&inst, serde_json::to_value(&r).expect("serializable")))
        }
        Theorem::Carlet => {
            let inst = instantiate(spec.unwrap_or("gold:k=1"), field)?;
            let r = verify_carlet_cases(&inst.table, &inst.field)?;
            (r.ok, with_spec(&inst, serde_json::to_value(&r).expect("serializable")))
        }
        Theorem::ZeroFlat => {
            let inst = instantiate(need_spec()?, field)?;
            let dist = distribution(&inst, None)?;
            let w = zero_flat_witness(&inst.table, &dist)?;
            let witness = w.map(|(a, b, k)| json!({"a": format!("{a:#x}"), "b": format!("{b:#x}"), "d": k}));
            (w.is_none(), with_spec(&inst, json!({ "target": ((1u64 << inst.n) - 2) / 6, "witness": witness })))
        }
        Theorem::UniformMaximal => {
            let inst = instantiate(need_spec()?, field)?;
            let dist = distribution(&inst, None)?;
            let (q, _) = uniformity(&inst.table, &dist)?;
            let ok = conjecture_uniform_implies_maximal(&inst.table, &dist)?;
            (ok, with_spec(&inst, json!({ "uniform_Q": q, "maximal": dist.is_maximal() })))
        }
        Theorem::Dproperty => {
            let inst = instantiate(need_spec()?, field)?;
            let direct = dillon_dproperty(&inst.table);
            let via_dist = if is_apn(&inst.table) {
                let dist = distribution(&inst, None)?;
                Some(dproperty_from_distribution(&inst.table, &dist))
            } else {
                None
            };
            if via_dist.is_some_and(|v| v != direct) {
                return Err(Error::Invariant("the two D-property computations disagree".into()));
            }
            (direct, with_spec(&inst, json!({ "apn": via_dist.is_some(), "direct": direct, "from_distribution": via_dist })))
        }
        Theorem::WalshBound => {
            let inst = instantiate(need_spec()?, field)?;
            let dist = distribution(&inst, None)?;
            let spread = spread_criterion(&inst.table, &dist)?;
            let hyper = if inst.n <= HYPERPLANE_MAX_N {
                Some(walsh_bound_criterion(&inst.table)?)
            } else {
                None
            };
            if hyper.is_some_and(|h| h != spread) {
                return Err(Error::Invariant("hyperplane and spread forms disagree".into()));
            }
            (spread, with_spec(&inst, json!({
                "e_min": dist.e_min(),
                "e_max": dist.e_max(),
                "spread_form": spread,
                "hyperplane_form": hyper,
                "maximal": dist.is_maximal(),
            })))
        }
        Theorem::PlateauedIdentity => {
            let inst = instantiate(need_spec()?, field)?;
            let dist = distribution(&inst, None)?;
            let w = plateaued_identity_witness(&inst.table, &dist);
            let witness = w.map(|(a, b)| json!({"a": format!("{a:#x}"), "b": format!("{b:#x}")}));
            (w.is_none(), with_spec(&inst, json!({ "witness": witness })))
        }
        Theorem::LocalEquiv => {
            let inst = instantiate(need_spec()?, field)?;
            let dist = distribution(&inst, None)?;
            let w = permutation_local_equiv_all(&inst.table, &dist);
            let witness = w.map(|(alpha, b)| json!({"a": "0x0", "alpha": format!("{alpha:#x}"), "b": format!("{b:#x}")}));
            (w.is_none(), with_spec(&inst, json!({ "witness": witness })))
        }
        Theorem::AbConstant => {
            let inst = instantiate(need_spec()?, field)?;
            if inst.n % 2 == 0 {
                return Err(Error::Domain("AB functions exist only for odd n".into()));
            }
            let dist = distribution(&inst, None)?;
            let ab = is_ab_walsh(&walsh_full(&inst.table));
            let target = ((1u32 << inst.n) - 2) / 6;
            let constant = dist.k_cover_value() == Some(target);
            (ab == constant, with_spec(&inst, json!({ "ab": ab, "constant": constant, "target": target })))
        }
    };
    if let Value::Object(map) = &mut details {
        map.insert("holds".into(), Value::Bool(holds));
    }
    emit(output.out.as_deref(), &render_value(&details, output.format))?;
    Ok(holds.into())
}

fn with_spec(inst: &Instance, mut v: Value) -> Value {
    if let Value::Object(map) = &mut v {
        map.insert("function_spec".into(), Value::String(inst.label.clone()));
        map.insert("modulus".into(), Value::String(format!("{:#x}", inst.field.modulus())));
    }
    v
}

fn sidon_dist(set: &PointSet) -> Result<ExcludeDistribution> {
    if !is_sidon(set) {
        return Err(Error::Validation("point set is not a Sidon set".into()));
    }
    exclude_distribution(set)
}

fn read_set(path: &Path) -> Result<PointSet> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    PointSet::parse(&text)
}

fn cmd_render(
    spec: Option<&str>,
    set: Option<&Path>,
    field: &FieldArgs,
    format: RenderFormat,
    out: Option<&Path>,
    opts: SvgOptions,
) -> Result<Outcome> {
    let dist = match (spec, set) {
        (Some(spec), None) => distribution(&instantiate(spec, field)?, None)?,
        (None, Some(path)) => sidon_dist(&read_set(path)?)?,
        _ => return Err(Error::Validation("give a function spec or --set".into())),
    };
    let text = match format {
        RenderFormat::Text => render_text(dist.set(), Some(&dist))?,
        RenderFormat::Svg => render_svg(dist.set(), Some(&dist), opts)?,
    };
    emit(out, &text)?;
    Ok(Outcome::Holds)
}

fn cmd_equiv(kind: EquivKind) -> Result<Outcome> {
    match kind {
        EquivKind::Ed { a, b, output } => {
            let da = sidon_dist(&read_set(&a)?)?;
            let db = sidon_dist(&read_set(&b)?)?;
            let eq = ed_equivalent(&da, &db)?;
            let v = json!({
                "equivalent": eq,
                "histogram_a": histogram_json(da.histogram()),
                "histogram_b": histogram_json(db.histogram()),
            });
            emit(output.out.as_deref(), &render_value(&v, output.format))?;
            Ok(eq.into())
        }
        EquivKind::Cyclotomic { n, d, d2, output } => {
            if n == 0 || n > 32 {
                return Err(Error::Validation(format!("n = {n} out of range")));
            }
            let eq = cyclotomic_equivalent(n, d, d2);
            let v = json!({
                "n": n,
                "d": d,
                "d2": d2,
                "equivalent": eq,
                "residues": cyclotomic_residues(n, d2),
                "coset_of_inverse": inverse_coset(n, d2),
            });
            emit(output.out.as_deref(), &render_value(&v, output.format))?;
            Ok(eq.into())
        }
    }
}

fn cmd_set(action: SetAction) -> Result<Outcome> {
    match action {
        SetAction::Random { m, seed, out } => {
            let set = random_sidon(m, seed)?;
            emit(out.as_deref(), &set.to_text())?;
        }
        SetAction::Dist { path, output } => {
            let dist = sidon_dist(&read_set(&path)?)?;
            let text = match output.format {
                Format::Json => pretty(&dist.to_json(true)),
                Format::Csv => dist.to_csv(),
                Format::Text => format!(
                    "size           {}\nhistogram      {}\ne_min e_max    {} {}\nmaximal        {}\n",
                    dist.set().len(),
                    hist_text(&dist),
                    dist.e_min(),
                    dist.e_max(),
                    dist.is_maximal()
                ),
            };
            emit(output.out.as_deref(), &text)?;
        }
    }
    Ok(Outcome::Holds)
}
