//! `lp build | solve | export | certify`.

use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{Context as _, Result};
use clap::{Args, Subcommand};
use serde_json::json;

use secretary_core::hardness::{
    build_lp, error_set_members, error_sets, exact_policy_value, export_lp, import_lp, policy_from_lp, solve_lp,
    HardnessLp, MAX_N, MIN_N,
};
use secretary_core::lp::parse_solution;

use crate::{trim_float, usage, Context};

#[derive(Subcommand, Debug)]
pub enum LpCommand {
    /// Build the model and print its size.
    Build(SizeArg),
    /// Solve with the embedded simplex (n <= 5) and write the solution vector.
    Solve(SizeArg),
    /// Write the model in LP text format for an external solver.
    Export(ExportArgs),
    /// Rebuild the policy from a solution and evaluate it exactly for every error set.
    Certify(CertifyArgs),
}

#[derive(Args, Debug)]
pub struct SizeArg {
    #[arg(long)]
    n: usize,
}

#[derive(Args, Debug)]
pub struct ExportArgs {
    #[arg(long)]
    n: usize,
    /// Target file (default: hardness_n{n}.lp in the output directory).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    #[arg(long)]
    n: usize,
    /// Model file to certify against instead of rebuilding it.
    #[arg(long)]
    lp: Option<PathBuf>,
    /// `variable value` lines, e.g. from an external solver. Without it the
    /// embedded solver is used.
    #[arg(long)]
    solution: Option<PathBuf>,
}

pub fn run(ctx: &mut Context, cmd: &LpCommand) -> Result<()> {
    match cmd {
        LpCommand::Build(a) => build(a.n),
        LpCommand::Solve(a) => solve(ctx, a.n),
        LpCommand::Export(a) => export(ctx, a),
        LpCommand::Certify(a) => certify(a),
    }
}

fn build(n: usize) -> Result<()> {
    let model = build_lp(n)?;
    println!("n = {n}");
    println!("partial permutations = {}", model.sigma().len());
    println!("variables = {}", model.lp().num_variables());
    println!("constraints = {}", model.lp().constraints.len());
    println!("relevant variables = {}", model.num_relevant());
    Ok(())
}

fn solve(ctx: &mut Context, n: usize) -> Result<()> {
    let model = build_lp(n)?;
    let sol = solve_lp(&model)?;
    println!("z* = {}", trim_float(sol.z, 9));
    println!("residual = {:.2e}", sol.residual.max(0.0));
    println!("iterations = {}", sol.iterations);
    println!("reduced size = {} variables, {} constraints", sol.reduced_variables, sol.reduced_constraints);

    let mut text = format!("\\ z* = {}\n", sol.z);
    for (j, &v) in sol.values.iter().enumerate() {
        if v != 0.0 {
            let _ = writeln!(text, "{} {v}", model.lp().var_name(j));
        }
    }
    let path = ctx.write(&format!("hardness_n{n}.sol"), &text)?;
    println!("solution -> {}", path.display());
    ctx.finish("lp solve", None, json!({ "n": n }))
}

fn export(ctx: &mut Context, a: &ExportArgs) -> Result<()> {
    let model = build_lp(a.n)?;
    let mut buf = Vec::new();
    export_lp(&model, &mut buf)?;
    let text = String::from_utf8(buf).context("LP text is not UTF-8")?;
    let path = match &a.output {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            std::fs::write(p, &text).with_context(|| format!("writing {}", p.display()))?;
            p.clone()
        }
        None => ctx.write(&format!("hardness_n{}.lp", a.n), &text)?,
    };
    println!(
        "{} variables, {} constraints -> {}",
        model.lp().num_variables(),
        model.lp().constraints.len(),
        path.display()
    );
    if a.output.is_none() {
        ctx.finish("lp export", None, json!({ "n": a.n }))?;
    }
    Ok(())
}

fn load_model(a: &CertifyArgs) -> Result<HardnessLp> {
    if !(MIN_N..=MAX_N).contains(&a.n) {
        // Let the library report the size error (exit code 3).
        return Ok(build_lp(a.n)?);
    }
    let Some(path) = &a.lp else { return Ok(build_lp(a.n)?) };
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let model = import_lp(&text)?;
    if model.n() != a.n {
        return Err(usage(format!("{} holds the n = {} model, not n = {}", path.display(), model.n(), a.n)));
    }
    Ok(model)
}

fn certify(a: &CertifyArgs) -> Result<()> {
    let model = load_model(a)?;
    let values = match &a.solution {
        Some(path) => {
            let text =
                std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
            parse_solution(&text, model.lp())?
        }
        None => solve_lp(&model)?.values,
    };
    let z = values[HardnessLp::Z];
    let policy = policy_from_lp(&model, &values)?;
    println!("n = {}", a.n);
    let mut min = f64::INFINITY;
    for e in error_sets(a.n) {
        let v = exact_policy_value(&policy, e);
        min = min.min(v);
        let members: Vec<String> = error_set_members(e).iter().map(|i| i.to_string()).collect();
        println!("E = {{{}}} value = {v:.12}", members.join(","));
    }
    println!("min = {min:.12}");
    println!("z* = {z:.12}");
    println!("gap = {:.3e}", (min - z).abs());
    Ok(())
}
