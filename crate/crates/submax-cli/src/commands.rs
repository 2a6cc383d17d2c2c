use std::fs;
use std::path::Path;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use rayon::prelude::*;

use submax::analysis::build_certificate;
use submax::instances::{generate, CoverageInstance, GeneratorParams};
use submax::setfn::{
    check_monotone, check_monotone_sampled, check_submodular, check_submodular_sampled,
    Oracle,
};
use submax::solvers::{
    solve_em, solve_exact, solve_greedy, solve_sem, SolveResult, SolverConfig,
};

use crate::{CheckArgs, GenArgs, OutputFormat, SolveArgs, SolverKind, SweepArgs, TraceArgs};

pub fn solve(args: SolveArgs) -> Result<()> {
    let inst = CoverageInstance::load(&args.instance)?;
    let g = inst.objective();
    let f = inst.constraint();
    let cfg = SolverConfig::new(args.budget).with_max_iterations(args.max_iters);
    let result = run_solver(args.solver, &g, &f, &cfg)?;
    let certificate = if args.budget > 0.0 {
        match build_certificate(&g, &f, args.budget) {
            Ok(cert) => cert.to_string(),
            Err(error) => format!("unavailable ({error})"),
        }
    } else {
        "unavailable (budget must be positive)".to_string()
    };

    let mut out = String::new();
    match args.format {
        OutputFormat::Text => {
            out.push_str(&format!(
                "instance: {} ({} items, {} elements)\n",
                args.instance.display(),
                inst.n_items(),
                inst.n_elements()
            ));
            out.push_str(&format!("solver: {}\n", args.solver));
            out.push_str(&format!("budget: {}\n", args.budget));
            out.push_str(&format!("solution: {}\n", result.solution));
            out.push_str(&format!("g: {}\n", result.g_value));
            out.push_str(&format!("f: {}\n", result.f_value));
            out.push_str(&format!("iterations: {}\n", result.iterations));
            out.push_str(&format!("converged: {}\n", result.converged));
            out.push_str(&format!("oracle calls: {}\n", result.oracle_calls));
            out.push_str(&format!("repairs: {}\n", result.repairs));
            out.push_str(&format!("certificate: {certificate}\n"));
        }
        OutputFormat::Csv => {
            out.push_str(
                "solver,budget,g,f,iterations,converged,oracle_calls,repairs,solution\n",
            );
            let members: Vec<String> =
                result.solution.iter().map(|j| j.to_string()).collect();
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                args.solver,
                args.budget,
                result.g_value,
                result.f_value,
                result.iterations,
                result.converged,
                result.oracle_calls,
                result.repairs,
                members.join(";")
            ));
        }
    }
    emit(args.output.as_deref(), &out)
}

pub fn sweep(args: SweepArgs) -> Result<()> {
    let inst = sweep_instance(&args)?;
    let budgets = match &args.bounds {
        Some(spec) => parse_bounds(spec)?,
        None => default_bounds(inst.n_elements()),
    };
    if args.solvers.is_empty() {
        bail!("at least one solver is required");
    }

    let cells: Vec<(usize, f64, SolverKind)> = budgets
        .iter()
        .enumerate()
        .flat_map(|(bi, &b)| args.solvers.iter().map(move |&s| (bi, b, s)))
        .collect();
    let run_cells = || -> Result<Vec<CellRow>> {
        cells
            .par_iter()
            .map(|&(_, budget, solver)| run_cell(&inst, solver, budget, args.max_iters))
            .collect()
    };
    let rows = match thread_pool()? {
        Some(pool) => pool.install(run_cells),
        None => run_cells(),
    }?;

    let optima: Option<Vec<f64>> = if args.with_opt {
        let g = inst.objective();
        let f = inst.constraint();
        Some(
            budgets
                .iter()
                .map(|&b| {
                    let cfg = SolverConfig::new(b);
                    Ok(solve_exact(&g, &f, &cfg)?.g_value)
                })
                .collect::<Result<_>>()?,
        )
    } else {
        None
    };

    let mut out = String::from("bound,solver,g,f,iterations,oracle_calls,wall_ms,repairs");
    if optima.is_some() {
        out.push_str(",opt");
    }
    out.push('\n');
    for (&(bi, budget, solver), row) in cells.iter().zip(&rows) {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}",
            budget,
            solver,
            row.g_value,
            row.f_value,
            row.iterations,
            row.oracle_calls,
            row.wall_ms,
            row.repairs
        ));
        if let Some(optima) = &optima {
            out.push_str(&format!(",{}", optima[bi]));
        }
        out.push('\n');
    }
    emit(args.output.as_deref(), &out)
}

pub fn trace(args: TraceArgs) -> Result<()> {
    if !matches!(args.solver, SolverKind::Em | SolverKind::Sem) {
        bail!("trace requires a variational solver (em or sem)");
    }
    let inst = CoverageInstance::load(&args.instance)?;
    let g = inst.objective();
    let f = inst.constraint();
    let cfg = SolverConfig::new(args.budget).with_max_iterations(args.max_iters);
    let result = run_solver(args.solver, &g, &f, &cfg)?;

    let mut out = String::from("t,g,f,ghat,x_size,theta_size\n");
    for entry in &result.trace {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            entry.t,
            entry.g_value,
            entry.f_value,
            entry.ghat_value,
            entry.set.len(),
            entry.theta_hat.len()
        ));
    }
    emit(args.output.as_deref(), &out)
}

pub fn gen(args: GenArgs) -> Result<()> {
    let params = build_params(
        args.items,
        args.elements,
        args.seed,
        args.degree,
        args.value_range,
    );
    let inst = generate(&params)?;
    inst.save(&args.output)?;
    println!(
        "wrote {}: {} items, {} elements, total value {}",
        args.output.display(),
        inst.n_items(),
        inst.n_elements(),
        inst.value_sum()
    );
    Ok(())
}

pub fn check(args: CheckArgs) -> Result<()> {
    let inst = CoverageInstance::load(&args.instance)?;
    let n = inst.n_items();
    let exhaustive = n <= args.limit.min(25);
    println!(
        "instance: {} ({} items, {} elements, {})",
        args.instance.display(),
        n,
        inst.n_elements(),
        if inst.labels().is_some() { "labeled" } else { "unlabeled" }
    );
    println!(
        "mode: {}",
        if exhaustive {
            "exhaustive".to_string()
        } else {
            format!("sampled ({} samples, seed {})", args.samples, args.seed)
        }
    );

    let mut failures = 0;
    for (name, oracle) in [("objective", inst.objective()), ("constraint", inst.constraint())] {
        let monotone = if exhaustive {
            let r = check_monotone(&oracle, 25).expect("size checked above");
            (r.checks, r.violations.len())
        } else {
            let r = check_monotone_sampled(&oracle, args.samples, args.seed);
            (r.checks, r.violations.len())
        };
        failures += report_property(name, "monotone", monotone);
        let submodular = if exhaustive {
            let r = check_submodular(&oracle, 25).expect("size checked above");
            (r.checks, r.violations.len())
        } else {
            let r = check_submodular_sampled(&oracle, args.samples, args.seed);
            (r.checks, r.violations.len())
        };
        failures += report_property(name, "submodular", submodular);
    }
    if failures > 0 {
        bail!("{failures} property check(s) failed");
    }
    Ok(())
}

fn report_property(oracle_name: &str, property: &str, (checks, violations): (u64, usize)) -> usize {
    if violations == 0 {
        println!("{oracle_name} {property}: ok ({checks} checks)");
        0
    } else {
        println!("{oracle_name} {property}: FAILED ({violations} of {checks} checks)");
        1
    }
}

struct CellRow {
    g_value: f64,
    f_value: f64,
    iterations: usize,
    oracle_calls: u64,
    wall_ms: u128,
    repairs: usize,
}

fn run_cell(
    inst: &CoverageInstance,
    solver: SolverKind,
    budget: f64,
    max_iters: usize,
) -> Result<CellRow> {
    // Fresh oracles per cell keep memo tables and call counts independent.
    let g = inst.objective();
    let f = inst.constraint();
    let cfg = SolverConfig::new(budget).with_max_iterations(max_iters);
    let start = Instant::now();
    let result = run_solver(solver, &g, &f, &cfg)?;
    Ok(CellRow {
        g_value: result.g_value,
        f_value: result.f_value,
        iterations: result.iterations,
        oracle_calls: result.oracle_calls,
        wall_ms: start.elapsed().as_millis(),
        repairs: result.repairs,
    })
}

fn run_solver(
    solver: SolverKind,
    g: &Oracle,
    f: &Oracle,
    cfg: &SolverConfig,
) -> Result<SolveResult> {
    let result = match solver {
        SolverKind::Em => solve_em(g, f, cfg),
        SolverKind::Sem => solve_sem(g, f, cfg),
        SolverKind::Greedy => solve_greedy(g, f, cfg),
        SolverKind::Exact => solve_exact(g, f, cfg),
    }?;
    Ok(result)
}

fn sweep_instance(args: &SweepArgs) -> Result<CoverageInstance> {
    match (&args.instance, args.items, args.elements) {
        (Some(path), None, None) => Ok(CoverageInstance::load(path)?),
        (None, Some(items), Some(elements)) => Ok(generate(&build_params(
            items,
            elements,
            args.seed,
            args.degree,
            args.value_range,
        ))?),
        (None, _, _) => bail!("provide either --instance or both --items and --elements"),
        (Some(_), _, _) => bail!("--instance conflicts with generator flags"),
    }
}

fn build_params(
    items: usize,
    elements: usize,
    seed: u64,
    degree: Option<(usize, usize)>,
    value_range: Option<(u64, u64)>,
) -> GeneratorParams {
    let mut params = GeneratorParams::new(items, elements, seed);
    if let Some((lo, hi)) = degree {
        params = params.with_coverage_degree(lo, hi);
    }
    if let Some((lo, hi)) = value_range {
        params = params.with_value_range(lo, hi);
    }
    params
}

/// 11 budgets evenly spaced over [0.4, 0.9] of the element count, rounded
/// to integers.
fn default_bounds(n_elements: usize) -> Vec<f64> {
    let m = n_elements as f64;
    (0..11)
        .map(|k| (m * (0.4 + 0.05 * k as f64)).round().max(1.0))
        .collect()
}

fn parse_bounds(spec: &str) -> Result<Vec<f64>> {
    let trimmed = spec.trim();
    if trimmed.is_empty() {
        bail!("bound list is empty");
    }
    if trimmed.contains(':') {
        let parts: Vec<&str> = trimmed.split(':').collect();
        if parts.len() != 3 {
            bail!("bound range must be LO:HI:STEP, got {spec:?}");
        }
        let lo: f64 = parse_number(parts[0])?;
        let hi: f64 = parse_number(parts[1])?;
        let step: f64 = parse_number(parts[2])?;
        if step <= 0.0 || hi < lo {
            bail!("bound range {spec:?} is empty or has a nonpositive step");
        }
        let mut bounds = Vec::new();
        let mut k = 0;
        loop {
            let b = lo + step * k as f64;
            if b > hi + 1e-9 {
                break;
            }
            bounds.push(b);
            k += 1;
        }
        Ok(bounds)
    } else {
        trimmed
            .split(',')
            .map(parse_number)
            .collect::<Result<Vec<f64>>>()
            .context("bound list must be comma-separated numbers")
    }
}

fn parse_number(raw: &str) -> Result<f64> {
    let value: f64 = raw
        .trim()
        .parse()
        .map_err(|_| anyhow!("{raw:?} is not a number"))?;
    if !value.is_finite() {
        bail!("{raw:?} is not a finite number");
    }
    Ok(value)
}

pub fn parse_usize_range(raw: &str) -> std::result::Result<(usize, usize), String> {
    let (lo, hi) = split_range(raw)?;
    let lo = lo.parse().map_err(|_| format!("{raw:?}: bad lower bound"))?;
    let hi = hi.parse().map_err(|_| format!("{raw:?}: bad upper bound"))?;
    Ok((lo, hi))
}

pub fn parse_u64_range(raw: &str) -> std::result::Result<(u64, u64), String> {
    let (lo, hi) = split_range(raw)?;
    let lo = lo.parse().map_err(|_| format!("{raw:?}: bad lower bound"))?;
    let hi = hi.parse().map_err(|_| format!("{raw:?}: bad upper bound"))?;
    Ok((lo, hi))
}

fn split_range(raw: &str) -> std::result::Result<(&str, &str), String> {
    raw.split_once(':')
        .map(|(lo, hi)| (lo.trim(), hi.trim()))
        .ok_or_else(|| format!("{raw:?} must be LO:HI"))
}

fn thread_pool() -> Result<Option<rayon::ThreadPool>> {
    let raw = match std::env::var("SUBMAX_THREADS") {
        Err(_) => return Ok(None),
        Ok(raw) => raw,
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&k| k >= 1)
        .ok_or_else(|| anyhow!("SUBMAX_THREADS must be a positive integer, got {raw:?}"))?;
    Ok(Some(rayon::ThreadPoolBuilder::new().num_threads(threads).build()?))
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text)
            .with_context(|| format!("cannot write {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
