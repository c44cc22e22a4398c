use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde_json::json;
use subdiv::analysis::{
    contraction_report, delta_bar_scan, gradient_tables, rho, smoothness_estimate, DataClass,
    DifferenceScheme,
};
use subdiv::experiments::{
    approximation_table, circle_outcome, circle_points, conic_reproduction, default_arcs, f1, f2,
    monotone_data1, monotone_data2, monotone_experiment, ExperimentRecord, F1_INTERVAL, F2_INTERVAL,
};
use subdiv::sequence::forward_difference;
use subdiv::{
    BranchStats, EpsilonParameter, FrequencyParameter, RefinableSequence, SchemeDescriptor,
    SubdivError, TieMode,
};

use crate::args::{
    AnalyzeArgs, DataClassArg, ExperimentArgs, ExperimentName, ExportArgs, Format, GammaKind,
    RefineArgs, SchemeArgs, SchemeName, TopologyArg,
};
use crate::io::{append_jsonl, read_csv, svg_path, write_csv, write_rows, Table};

/// Circle runs count as reproduced below this radial deviation.
const CIRCLE_TOL: f64 = 1e-9;

pub const RECORDS_FILE: &str = "records.jsonl";

fn epsilon(value: f64) -> Result<EpsilonParameter> {
    let eps = EpsilonParameter::new(value)?;
    if let Some(w) = eps.warning() {
        eprintln!("warning: {w}");
    }
    Ok(eps)
}

fn gamma(args: &SchemeArgs) -> Result<FrequencyParameter> {
    let mag = || {
        args.gamma_mag
            .ok_or_else(|| anyhow!("--gamma-mag is required with --gamma-kind hyper or trig"))
    };
    Ok(match args.gamma_kind {
        GammaKind::Zero => FrequencyParameter::Zero,
        GammaKind::Hyper => FrequencyParameter::hyperbolic(mag()?)?,
        GammaKind::Trig => FrequencyParameter::trigonometric(mag()?)?,
    })
}

pub fn scheme(args: &SchemeArgs) -> Result<SchemeDescriptor> {
    Ok(match args.scheme {
        SchemeName::SEps => SchemeDescriptor::SEps {
            eps: epsilon(args.eps)?,
            tie: TieMode::Exact,
        },
        SchemeName::TGamma => SchemeDescriptor::TGamma(gamma(args)?),
        SchemeName::TwoPointGamma => SchemeDescriptor::TwoPoint(gamma(args)?),
        SchemeName::T11 => SchemeDescriptor::t11(),
        SchemeName::T22 => SchemeDescriptor::t22(),
        SchemeName::RRule => SchemeDescriptor::RRule,
    })
}

fn sequence(values: Vec<f64>, topology: TopologyArg, h: f64) -> Result<RefinableSequence> {
    Ok(match topology {
        TopologyArg::Open => RefinableSequence::open(values, h)?,
        TopologyArg::Periodic => RefinableSequence::periodic(values, h)?,
    })
}

/// Refine level by level so counts and branch statistics can be reported.
fn refine_levels(
    scheme: &SchemeDescriptor,
    seq: RefinableSequence,
    levels: u32,
) -> Result<(RefinableSequence, Vec<usize>, Vec<BranchStats>)> {
    let mut counts = vec![seq.len()];
    let mut stats = Vec::new();
    let mut current = seq;
    for _ in 0..levels {
        let (next, s) = scheme.refine_once(&current).map_err(|e| match e {
            SubdivError::InsufficientData { .. } => SubdivError::Exhausted {
                level: current.level(),
            },
            other => other,
        })?;
        counts.push(next.len());
        stats.extend(s);
        current = next;
    }
    Ok((current, counts, stats))
}

fn report_stats(label: &str, stats: &[BranchStats]) {
    for (k, s) in stats.iter().enumerate() {
        eprintln!(
            "{label}level {}: exponential {}, tie {}, fallback {}",
            k + 1,
            s.exponential,
            s.tie,
            s.fallback
        );
    }
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "output".into())
}

pub fn refine(args: &RefineArgs) -> Result<()> {
    let table = read_csv(&args.input)?;
    let scheme = scheme(&args.scheme)?;
    let mut record = ExperimentRecord::new("refine", args.seed)
        .param("input", args.input.display().to_string())
        .param("scheme", &scheme)
        .param("levels", args.levels)
        .param("h", args.h)
        .param("topology", format!("{:?}", args.topology).to_lowercase());

    let (refined, counts) = match table {
        Table::Values(v) => {
            let (out, counts, stats) = refine_levels(&scheme, sequence(v, args.topology, args.h)?, args.levels)?;
            report_stats("", &stats);
            record.output("branch_stats", &stats);
            (Table::Values(out.into_values()), counts)
        }
        Table::Points(x, y) => {
            let (ox, counts, sx) = refine_levels(&scheme, sequence(x, args.topology, args.h)?, args.levels)?;
            let (oy, _, sy) = refine_levels(&scheme, sequence(y, args.topology, args.h)?, args.levels)?;
            report_stats("x ", &sx);
            report_stats("y ", &sy);
            record.output("branch_stats_x", &sx);
            record.output("branch_stats_y", &sy);
            (Table::Points(ox.into_values(), oy.into_values()), counts)
        }
    };
    eprintln!(
        "points per level: {}",
        counts.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" -> ")
    );
    record.output("points_per_level", &counts);

    let header = match refined {
        Table::Values(_) => "value",
        Table::Points(..) => "x,y",
    };
    let Some(dir) = &args.out_dir else {
        if args.format.iter().any(|f| *f != Format::Csv) {
            bail!("svg and jsonl output need --out-dir");
        }
        print!("{}", write_csv(&refined, Some(header)));
        return Ok(());
    };
    fs::create_dir_all(dir)?;
    let base = dir.join(format!("{}.refined", stem(&args.input)));
    for format in &args.format {
        match format {
            Format::Csv => {
                let path = base.with_extension("refined.csv");
                fs::write(&path, write_csv(&refined, Some(header)))?;
                log::info!("wrote {}", path.display());
                record.output("csv", path.display().to_string());
            }
            Format::Svg => {
                let Table::Points(x, y) = &refined else {
                    bail!("svg needs two-column point data; one-column results are written as CSV");
                };
                let path = base.with_extension("refined.svg");
                let closed = args.topology == TopologyArg::Periodic;
                fs::write(&path, svg_path(x, y, closed, "black")?)?;
                record.output("svg", path.display().to_string());
            }
            Format::Jsonl => {}
        }
    }
    if args.format.contains(&Format::Jsonl) {
        append_jsonl(&dir.join(RECORDS_FILE), &record)?;
    }
    Ok(())
}

pub fn export_svg(args: &ExportArgs) -> Result<()> {
    let Table::Points(x, y) = read_csv(&args.input)? else {
        bail!(
            "{} has a single column; export-svg draws x,y points (use `subdiv refine` for one-column CSV output)",
            args.input.display()
        );
    };
    let svg = svg_path(&x, &y, args.topology == TopologyArg::Periodic, &args.stroke)?;
    match &args.output {
        Some(path) => fs::write(path, svg).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{svg}"),
    }
    Ok(())
}

pub fn analyze(args: &AnalyzeArgs) -> Result<()> {
    let scheme = scheme(&args.scheme)?;
    let columns = match read_csv(&args.input)? {
        Table::Values(v) => vec![("value", v)],
        Table::Points(x, y) => vec![("x", x), ("y", y)],
    };
    let mut record = ExperimentRecord::new("analyze", args.seed)
        .param("input", args.input.display().to_string())
        .param("scheme", &scheme)
        .param("levels", args.levels)
        .param("difference_order", args.order);
    for (name, values) in columns {
        let seq = sequence(values, args.topology, args.h)?;
        let report = smoothness_estimate(&scheme, &seq, args.order, args.levels)?;
        let rho_d = forward_difference(&seq).ok().and_then(|d| rho(&d).as_f64());
        record.output(
            name,
            json!({
                "alpha": report.estimated_alpha,
                "alpha_trace": report.alpha_trace,
                "rho_of_differences": rho_d,
                "notes": report.notes,
            }),
        );
    }
    println!("{}", serde_json::to_string_pretty(&record)?);
    if let Some(dir) = &args.out_dir {
        fs::create_dir_all(dir)?;
        append_jsonl(&dir.join(RECORDS_FILE), &record)?;
    }
    Ok(())
}

/// Record plus optional CSV table produced by one experiment.
struct Outcome {
    records: Vec<ExperimentRecord>,
    table: Option<String>,
}

pub fn experiment(args: &ExperimentArgs) -> Result<()> {
    let eps = epsilon(args.eps)?;
    let outcome = match args.name {
        ExperimentName::Circle => circle(args, eps)?,
        ExperimentName::Conics => conics(args, eps)?,
        ExperimentName::Monotone => monotone(args, eps)?,
        ExperimentName::ApproxTable => approx(args, eps)?,
        ExperimentName::DeltaBar => delta_bar(args)?,
        ExperimentName::GradientTables => gradients(args)?,
        ExperimentName::Contraction => contraction(args, eps)?,
    };
    let name = format!("{:?}", args.name);
    fs::create_dir_all(&args.out_dir)?;
    if args.format.contains(&Format::Jsonl) {
        for r in &outcome.records {
            append_jsonl(&args.out_dir.join(RECORDS_FILE), r)?;
        }
    }
    if let (true, Some(table)) = (args.format.contains(&Format::Csv), &outcome.table) {
        let path: PathBuf = args.out_dir.join(format!("{}.csv", kebab(&name)));
        fs::write(&path, table)?;
        log::info!("wrote {}", path.display());
    }
    for r in &outcome.records {
        println!("{}", serde_json::to_string(r)?);
    }
    Ok(())
}

fn kebab(camel: &str) -> String {
    let mut out = String::new();
    for (i, c) in camel.chars().enumerate() {
        if c.is_uppercase() && i > 0 {
            out.push('-');
        }
        out.push(c.to_ascii_lowercase());
    }
    out
}

fn circle(args: &ExperimentArgs, eps: EpsilonParameter) -> Result<Outcome> {
    let levels = args.levels.unwrap_or(7);
    let o = circle_outcome(args.n, args.u, eps, levels)?;
    let reproduced = o.max_radial_deviation <= CIRCLE_TOL;
    let mut r = ExperimentRecord::new("circle", args.seed)
        .param("n", args.n)
        .param("u", args.u)
        .param("eps", eps.value())
        .param("levels", levels);
    r.output("max_radial_deviation", o.max_radial_deviation);
    r.output("points", o.points);
    r.output("reproduced", reproduced);
    r.output("failure", !reproduced);
    r.output("branch_stats_x", o.x_stats);
    r.output("branch_stats_y", o.y_stats);
    let (x, y) = circle_points(args.n, args.u);
    Ok(Outcome {
        records: vec![r],
        table: Some(write_csv(&Table::Points(x, y), Some("x,y"))),
    })
}

fn conics(args: &ExperimentArgs, eps: EpsilonParameter) -> Result<Outcome> {
    let levels = args.levels.unwrap_or(7);
    let arcs = default_arcs();
    let errors = conic_reproduction(&arcs, eps, levels)?;
    let mut r = ExperimentRecord::new("conics", args.seed)
        .param("arcs", &arcs)
        .param("eps", eps.value())
        .param("levels", levels);
    r.output("errors", &errors);
    let rows: Vec<Vec<String>> = errors
        .iter()
        .map(|e| vec![e.arc.name().to_string(), format!("{:e}", e.s_eps_error), format!("{:e}", e.t22_error)])
        .collect();
    Ok(Outcome {
        records: vec![r],
        table: Some(write_rows(&["arc", "s_eps_error", "t22_error"], &rows)),
    })
}

fn monotone(args: &ExperimentArgs, eps: EpsilonParameter) -> Result<Outcome> {
    let levels = args.levels.unwrap_or(10);
    let mut records = Vec::new();
    for (label, data) in [("data1", monotone_data1()), ("data2", monotone_data2())] {
        let seq = RefinableSequence::open(data, 1.0)?;
        let mut r = monotone_experiment(&seq, eps, levels)?;
        r.seed = args.seed;
        records.push(r.param("dataset", label));
    }
    Ok(Outcome { records, table: None })
}

fn approx(args: &ExperimentArgs, eps: EpsilonParameter) -> Result<Outcome> {
    let levels = args.levels.unwrap_or(7);
    let mut rows = Vec::new();
    let mut r = ExperimentRecord::new("approx-table", args.seed)
        .param("eps", eps.value())
        .param("refine_levels", levels)
        .param("k_range", [0, 3]);
    for (label, func, interval) in [("F1", f1(), F1_INTERVAL), ("F2", f2(), F2_INTERVAL)] {
        let table = approximation_table(&func, interval, 0..=3, levels, eps)?;
        for row in &table {
            rows.push(vec![
                label.to_string(),
                row.k.to_string(),
                format!("{:.4e}", row.error),
                row.order.map(|o| format!("{o:.4}")).unwrap_or_default(),
            ]);
        }
        r.output(label, &table);
    }
    Ok(Outcome {
        records: vec![r],
        table: Some(write_rows(&["function", "k", "error", "order"], &rows)),
    })
}

fn delta_bar(args: &ExperimentArgs) -> Result<Outcome> {
    let value = delta_bar_scan(args.resolution, args.delta_max)?;
    let mut r = ExperimentRecord::new("delta-bar", args.seed)
        .param("resolution", args.resolution)
        .param("delta_max", args.delta_max);
    r.output("delta_bar", value);
    Ok(Outcome { records: vec![r], table: None })
}

fn gradients(args: &ExperimentArgs) -> Result<Outcome> {
    let report = gradient_tables()?;
    let mut r = ExperimentRecord::new("gradient-tables", args.seed);
    let rows: Vec<Vec<String>> = report
        .gradient_norm_table
        .iter()
        .map(|(k, e)| vec![k.clone(), format!("{:.6}", e.norm)])
        .collect();
    let norms: std::collections::BTreeMap<_, _> =
        report.gradient_norm_table.iter().map(|(k, e)| (k.clone(), e.norm)).collect();
    r.output("norms", norms);
    r.output("gradients", &report.gradient_norm_table);
    Ok(Outcome {
        records: vec![r],
        table: Some(write_rows(&["function", "gradient_1_norm"], &rows)),
    })
}

fn contraction(args: &ExperimentArgs, eps: EpsilonParameter) -> Result<Outcome> {
    let levels = args.levels.unwrap_or(1) as usize;
    let class = match args.class {
        DataClassArg::General => DataClass::General,
        DataClassArg::Positive => DataClass::StrictlyPositive,
        DataClassArg::NearConstant => DataClass::NearConstantPositive {
            rho_bound: args.rho_bound,
        },
    };
    let report = contraction_report(DifferenceScheme::SEps(eps), args.trials, levels, class, args.seed)?;
    let mut r = ExperimentRecord::new("contraction", args.seed)
        .param("eps", eps.value())
        .param("trials", args.trials)
        .param("levels", levels)
        .param("class", class);
    r.output("contraction_factors", &report.contraction_factors);
    r.output("rho_trace", &report.rho_trace);
    r.output("bound", 0.5 + 2.0 * eps.m_eps());
    let rows: Vec<Vec<String>> = report
        .contraction_factors
        .iter()
        .enumerate()
        .map(|(l, c)| vec![(l + 1).to_string(), format!("{c:?}")])
        .collect();
    Ok(Outcome {
        records: vec![r],
        table: Some(write_rows(&["level", "contraction_factor"], &rows)),
    })
}
