//! `analyze gridsearch | bounds | agkk-curves`.

use std::fmt::Write as _;

use anyhow::Result;
use clap::{Args, Subcommand};
use serde::Serialize;

use secretary_core::analysis::{
    case_bound, comparison_curves, grid_points, grid_search, Case, CaseBoundInput, CaseTable, DEFAULT_M_MAX,
};

use crate::svg::LineChart;
use crate::{trim_float, usage, Context};

#[derive(Subcommand, Debug)]
pub enum AnalyzeCommand {
    /// Maximise the worst-case bound over a (theta, tau) grid.
    Gridsearch(GridArgs),
    /// Print the six case bounds at one (theta, tau, m).
    Bounds(BoundsArgs),
    /// Comparison ratio curves against the learned Dynkin guarantee.
    AgkkCurves(CurveArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct GridArgs {
    #[arg(long, default_value_t = 0.01)]
    step: f64,
    #[arg(long, default_value_t = 0.0)]
    theta_min: f64,
    #[arg(long, default_value_t = 1.0)]
    theta_max: f64,
    #[arg(long, default_value_t = 0.01)]
    tau_min: f64,
    #[arg(long, default_value_t = 0.99)]
    tau_max: f64,
    /// Largest number of candidates above the top prediction considered.
    #[arg(long, default_value_t = DEFAULT_M_MAX)]
    m_max: usize,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    #[arg(long)]
    theta: f64,
    #[arg(long)]
    tau: f64,
    #[arg(long, default_value_t = 1)]
    m: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct CurveArgs {
    /// Robustness parameter; repeat for one chart per value.
    #[arg(long = "c", default_values_t = [1.0, 1.71, 3.0])]
    c: Vec<f64>,
    /// Error tolerance relative to the maximum value; repeat for several curves.
    #[arg(long, default_values_t = [0.0, 0.1, 0.25, 0.5])]
    lambda: Vec<f64>,
    /// Epsilon grid points on [0, 1].
    #[arg(long, default_value_t = 101)]
    points: usize,
}

pub fn run(ctx: &mut Context, cmd: &AnalyzeCommand) -> Result<()> {
    match cmd {
        AnalyzeCommand::Gridsearch(a) => gridsearch(ctx, a),
        AnalyzeCommand::Bounds(a) => bounds(a),
        AnalyzeCommand::AgkkCurves(a) => curves(ctx, a),
    }
}

fn gridsearch(ctx: &mut Context, a: &GridArgs) -> Result<()> {
    let best = grid_search((a.theta_min, a.theta_max), (a.tau_min, a.tau_max), a.step, a.m_max)?;
    println!("theta* = {}", trim_float(best.theta, 9));
    println!("tau* = {}", trim_float(best.tau, 9));
    println!("bound* = {:.6}", best.bound);

    ctx.write("gridsearch.csv", &format!("theta,tau,bound\n{},{},{}\n", best.theta, best.tau, best.bound))?;
    let table = CaseTable::new(best.tau, a.m_max)?;
    let profile: Vec<(f64, f64)> =
        grid_points((a.theta_min, a.theta_max), a.step)?.into_iter().map(|t| (t, table.overall(t))).collect();
    let mut csv = String::from("theta,bound\n");
    for (t, b) in &profile {
        let _ = writeln!(csv, "{t},{b}");
    }
    ctx.write("gridsearch_profile.csv", &csv)?;
    let mut chart = LineChart::new(format!("worst-case bound at tau = {}", best.tau), "theta", "bound");
    chart.push("bound", profile);
    ctx.write("gridsearch_profile.svg", &chart.render())?;
    ctx.finish("analyze gridsearch", None, serde_json::to_value(a)?)
}

fn bounds(a: &BoundsArgs) -> Result<()> {
    let input = CaseBoundInput { tau: a.tau, theta: a.theta, m: a.m };
    input.validate()?;
    println!("theta = {}, tau = {}, m = {}", a.theta, a.tau, a.m);
    for case in Case::ALL {
        println!("case {:<4}{:.6}", case.as_str(), case_bound(case, input)?);
    }
    Ok(())
}

fn curves(ctx: &mut Context, a: &CurveArgs) -> Result<()> {
    if a.points < 2 {
        return Err(usage("--points must be at least 2"));
    }
    let grid: Vec<f64> = (0..a.points).map(|i| i as f64 / (a.points - 1) as f64).collect();
    let rows = comparison_curves(&a.c, &a.lambda, &grid)?;
    let mut csv = String::from("c,lambda,epsilon,agkk,learned_dynkin\n");
    for r in &rows {
        let _ = writeln!(csv, "{},{},{},{},{}", r.c, r.lambda, r.epsilon, r.agkk, r.learned_dynkin);
    }
    ctx.write("agkk_curves.csv", &csv)?;
    for &c in &a.c {
        let mut chart = LineChart::new(format!("c = {c}"), "epsilon", "competitive ratio");
        for &lambda in &a.lambda {
            let pts = rows.iter().filter(|r| r.c == c && r.lambda == lambda).map(|r| (r.epsilon, r.agkk)).collect();
            chart.push(format!("AGKK lambda = {lambda}"), pts);
        }
        let ours = rows.iter().filter(|r| r.c == c && r.lambda == a.lambda[0]).map(|r| (r.epsilon, r.learned_dynkin));
        chart.push("learned Dynkin", ours.collect());
        let path = ctx.write(&format!("agkk_c{c}.svg"), &chart.render())?;
        println!("{}", path.display());
    }
    println!("{} rows -> {}", rows.len(), ctx.out_dir.join("agkk_curves.csv").display());
    ctx.finish("analyze agkk-curves", None, serde_json::to_value(a)?)
}
