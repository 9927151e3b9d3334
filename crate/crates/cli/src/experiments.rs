//! `gen` and `sweep`.

use std::fmt::Write as _;
use std::io::Write as _;
use std::str::FromStr;

use anyhow::Result;
use clap::{Args, ValueEnum};
use serde_json::{json, Map, Value};

use secretary_core::generators::generate;
use secretary_core::simulate::{self, ExperimentConfig, SweepResult};
use secretary_core::{ErrorRule, GeneratorKind, GeneratorSpec};

use crate::svg::LineChart;
use crate::{usage, Context};

/// clap adapter for the library's `FromStr` impls.
pub fn parse_core<T>(s: &str) -> Result<T, String>
where
    T: FromStr<Err = secretary_core::Error>,
{
    s.parse().map_err(|e: secretary_core::Error| e.to_string())
}

#[derive(Args, Debug)]
pub struct GenArgs {
    /// uniform, adversarial or almost-constant.
    #[arg(long, value_parser = parse_core::<GeneratorKind>)]
    generator: GeneratorKind,

    /// Target prediction error; repeat for several levels.
    #[arg(long, required = true)]
    epsilon: Vec<f64>,

    #[arg(long, default_value_t = 100)]
    n: usize,

    #[arg(long, default_value_t = 1)]
    k: usize,

    /// Datasets per level, with seeds `seed, seed + 1, ...`.
    #[arg(long, default_value_t = 1)]
    count: u64,
}

pub fn gen(ctx: &mut Context, args: &GenArgs) -> Result<()> {
    let base = ctx.seed.unwrap_or(0);
    let specs: Vec<GeneratorSpec> = args
        .epsilon
        .iter()
        .flat_map(|&epsilon| {
            (0..args.count).map(move |i| GeneratorSpec {
                kind: args.generator,
                n: args.n,
                k: args.k,
                epsilon,
                seed: base.wrapping_add(i),
            })
        })
        .collect();
    for spec in &specs {
        spec.validate()?;
    }
    for spec in &specs {
        let instance = generate(spec)?;
        let path = ctx.write(&spec.file_name(), &(instance.to_json()? + "\n"))?;
        println!("{}", path.display());
    }
    let config = json!({
        "generator": args.generator,
        "epsilons": args.epsilon,
        "n": args.n,
        "k": args.k,
        "count": args.count,
    });
    ctx.finish("gen", Some(base), config)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum AlgorithmName {
    Dynkin,
    LearnedDynkin,
    Kleinberg,
    LearnedKleinberg,
    TopK,
    ProphetThreshold,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Start from the reference protocol (also the default without --config).
    #[arg(long)]
    reference: bool,

    /// Print the cell plan and exit.
    #[arg(long)]
    dry_run: bool,

    #[arg(long, value_parser = parse_core::<GeneratorKind>)]
    generator: Vec<GeneratorKind>,

    #[arg(long)]
    epsilon: Vec<f64>,

    #[arg(long)]
    k: Vec<usize>,

    #[arg(long)]
    n: Option<usize>,

    /// Datasets per cell.
    #[arg(long)]
    datasets: Option<usize>,

    /// Schedules per dataset.
    #[arg(long)]
    trials: Option<usize>,

    /// Replaces the configured algorithm list; repeat for several.
    #[arg(long, value_enum)]
    algorithm: Vec<AlgorithmName>,

    #[arg(long)]
    tau: Vec<f64>,

    #[arg(long)]
    theta: Vec<f64>,

    #[arg(long, value_parser = parse_core::<ErrorRule>)]
    switch_rule: Option<ErrorRule>,

    /// Prophet threshold half-width as a fraction of the largest prediction.
    #[arg(long)]
    spread: Vec<f64>,
}

fn algorithm_entry(name: AlgorithmName, args: &SweepArgs) -> Result<Value> {
    let id = name.to_possible_value().expect("no skipped variants").get_name().to_string();
    let mut entry = Map::new();
    entry.insert("name".into(), Value::String(id));
    let rule = args.switch_rule.map(serde_json::to_value).transpose()?;
    let mut set = |key: &str, value: Option<Value>| {
        if let Some(v) = value {
            entry.insert(key.into(), v);
        }
    };
    let list = |v: &[f64]| (!v.is_empty()).then(|| json!(v));
    match name {
        AlgorithmName::Dynkin => set("tau", list(&args.tau)),
        AlgorithmName::LearnedDynkin => {
            set("tau", list(&args.tau));
            set("theta", list(&args.theta));
            set("rule", rule);
        }
        AlgorithmName::LearnedKleinberg => {
            set("theta", list(&args.theta));
            set("rule", rule);
        }
        AlgorithmName::ProphetThreshold => {
            set("spread", Some(list(&args.spread).unwrap_or_else(|| json!([0.5]))));
        }
        AlgorithmName::Kleinberg | AlgorithmName::TopK => {}
    }
    Ok(Value::Object(entry))
}

/// A sweep config, or the `config` field of a manifest.
fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut value: Value = serde_json::from_str(text).map_err(|e| usage(format!("config is not JSON: {e}")))?;
    if let Some(inner) = value.get_mut("config") {
        value = inner.take();
    }
    serde_json::from_value(value).map_err(|e| usage(format!("bad sweep config: {e}")))
}

fn build_config(ctx: &Context, args: &SweepArgs) -> Result<ExperimentConfig> {
    let mut config = match ctx.read_config()? {
        Some(_) if args.reference => return Err(usage("--reference and --config are exclusive")),
        Some(text) => parse_config(&text)?,
        None => ExperimentConfig::reference(),
    };
    if !args.generator.is_empty() {
        config.generators = args.generator.clone();
    }
    if !args.epsilon.is_empty() {
        config.epsilons = args.epsilon.clone();
    }
    if !args.k.is_empty() {
        config.ks = args.k.clone();
    }
    if let Some(n) = args.n {
        config.n = n;
    }
    if let Some(d) = args.datasets {
        config.datasets_per_cell = d;
    }
    if let Some(t) = args.trials {
        config.trials_per_dataset = t;
    }
    if let Some(seed) = ctx.seed {
        config.master_seed = seed;
    }
    let tuned = !args.tau.is_empty() || !args.theta.is_empty() || !args.spread.is_empty() || args.switch_rule.is_some();
    if !args.algorithm.is_empty() {
        let entries = args.algorithm.iter().map(|&a| algorithm_entry(a, args)).collect::<Result<Vec<_>>>()?;
        config.algorithms =
            serde_json::from_value(Value::Array(entries)).map_err(|e| usage(format!("bad algorithm flags: {e}")))?;
    } else if tuned {
        return Err(usage("--tau, --theta, --spread and --switch-rule need --algorithm"));
    }
    config.validate()?;
    Ok(config)
}

fn print_plan(config: &ExperimentConfig) -> Result<()> {
    let plan = simulate::plan(config)?;
    let settings = config.expand_algorithms()?.len();
    let mut out = format!(
        "plan: {} cells, {} skipped, {settings} algorithm settings, {} datasets x {} trials per cell, n = {}\n",
        plan.cells.len(),
        plan.skipped.len(),
        config.datasets_per_cell,
        config.trials_per_dataset,
        config.n
    );
    for c in &plan.cells {
        let _ = writeln!(out, "cell {} k={} epsilon={}", c.generator, c.k, c.epsilon);
    }
    for s in &plan.skipped {
        let _ = writeln!(out, "skip {} k={} epsilon={}: {}", s.cell.generator, s.cell.k, s.cell.epsilon, s.reason);
    }
    // A closed pipe (`| head`) is not an error.
    match std::io::stdout().lock().write_all(out.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn datasets_csv(result: &SweepResult) -> String {
    let mut out =
        String::from("generator,k,epsilon,dataset,seed,epsilon_hat,algorithm,params,trials,mean_ratio,std_error\n");
    for d in &result.datasets {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            d.cell.generator,
            d.cell.k,
            d.cell.epsilon,
            d.dataset,
            d.seed,
            d.epsilon_hat,
            d.algorithm,
            d.params,
            d.estimate.trials,
            d.estimate.mean,
            d.estimate.std_error
        );
    }
    out
}

/// One chart per (generator, k): mean ratio against epsilon, one line per setting.
fn charts(result: &SweepResult) -> Vec<(String, LineChart)> {
    let mut out: Vec<((GeneratorKind, usize), LineChart)> = Vec::new();
    for row in &result.rows {
        let key = (row.cell.generator, row.cell.k);
        let pos = match out.iter().position(|(k, _)| *k == key) {
            Some(p) => p,
            None => {
                let title = format!("{} datasets, k = {}", key.0, key.1);
                out.push((key, LineChart::new(title, "epsilon", "competitive ratio")));
                out.len() - 1
            }
        };
        let chart = &mut out[pos].1;
        let label =
            if row.params.is_empty() { row.algorithm.clone() } else { format!("{} {}", row.algorithm, row.params) };
        let point = (row.cell.epsilon, row.estimate.mean);
        match chart.series.iter_mut().find(|s| s.name == label) {
            Some(s) => s.points.push(point),
            None => chart.push(label, vec![point]),
        }
    }
    out.into_iter().map(|((g, k), c)| (format!("sweep_{g}_k{k}.svg"), c)).collect()
}

pub fn sweep(ctx: &mut Context, args: &SweepArgs) -> Result<()> {
    let config = build_config(ctx, args)?;
    if args.dry_run {
        return print_plan(&config);
    }
    let result = simulate::sweep(&config)?;
    let csv = ctx.write("sweep.csv", &result.to_csv())?;
    ctx.write("datasets.csv", &datasets_csv(&result))?;
    let charts = charts(&result);
    for (name, chart) in &charts {
        ctx.write(name, &chart.render())?;
    }
    println!("{} rows, {} skipped cells -> {}", result.rows.len(), result.skipped.len(), csv.display());
    println!("{} charts in {}", charts.len(), ctx.out_dir.display());
    ctx.finish("sweep", Some(config.master_seed), serde_json::to_value(&config)?)
}
