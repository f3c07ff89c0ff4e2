use std::ops::ControlFlow;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use cubesolve::kan::all_contortions;
use cubesolve::syntax::Expect;
use cubesolve::{
    check, default_theory, parse_cube, print_agda, solve, CubeFile, Goal, SolveError, SolverConfig, Stats, Theory,
};

#[derive(Parser)]
#[command(name = "cubesolve", version, about = "Solve boundary problems in cubical type theory")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve the goals of a .cube file
    Solve {
        file: PathBuf,
        /// Only this goal
        #[arg(long)]
        goal: Option<String>,
        #[arg(long)]
        theory: Option<Theory>,
        #[arg(long)]
        depth: Option<usize>,
        /// Seconds per goal
        #[arg(long)]
        timeout: Option<f64>,
        /// List every contortion instead of the first solution
        #[arg(long)]
        all: bool,
        #[arg(long)]
        stats: bool,
        #[arg(long, value_enum, default_value_t = Format::Agda)]
        format: Format,
    },
    /// Check the solutions written in a .cube file
    Check { file: PathBuf },
    /// Solve every goal of every .cube file in a directory
    Bench {
        dir: PathBuf,
        #[arg(long)]
        timeout: Option<f64>,
    },
    /// Encode a group presentation as a .cube context
    GenGroup {
        /// Presentation file, or `-` for stdin
        presentation: PathBuf,
        /// Word equations to turn into goals, `lhs = rhs`
        #[arg(long = "goal")]
        goals: Vec<String>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Agda,
    Internal,
    Json,
}

struct Overrides {
    theory: Option<Theory>,
    depth: Option<usize>,
    timeout: Option<f64>,
}

fn config(goal: &Goal, o: &Overrides) -> (Theory, SolverConfig) {
    let theory = o
        .theory
        .or(goal.options.theory)
        .unwrap_or_else(|| default_theory(&goal.dims));
    let mut cfg = SolverConfig {
        theory: Some(theory),
        ..SolverConfig::default()
    };
    if let Some(d) = o.depth.or(goal.options.depth) {
        cfg.max_depth = d;
    }
    if let Some(t) = o.timeout.or(goal.options.timeout) {
        cfg.timeout = (t > 0.0).then(|| Duration::from_secs_f64(t));
    }
    (theory, cfg)
}

fn read_cube(path: &Path) -> Result<CubeFile> {
    let src = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_cube(&src).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
}

fn stats_json(s: &Stats) -> serde_json::Value {
    json!({
        "maps_unfolded": s.maps_unfolded,
        "csp_branches": s.csp_branches,
        "depth_reached": s.depth_reached,
        "warnings": s.warnings,
    })
}

fn status(e: &SolveError) -> &'static str {
    match e {
        SolveError::Timeout => "timeout",
        SolveError::Unsolvable | SolveError::DepthExhausted(_) => "unsolved",
    }
}

fn threads() -> usize {
    std::env::var("CUBESOLVE_THREADS")
        .ok()
        .and_then(|s| s.parse().ok())
        .filter(|&n| n > 0)
        .unwrap_or(1)
}

fn cmd_solve(file: &Path, only: Option<&str>, o: &Overrides, all: bool, show_stats: bool, format: Format) -> Result<bool> {
    let f = read_cube(file)?;
    let goals: Vec<&Goal> = match only {
        Some(n) => vec![f.goal(n).with_context(|| format!("no goal named `{n}`"))?],
        None => f.goals.iter().collect(),
    };
    let mut ok = true;
    for goal in goals {
        let (theory, cfg) = config(goal, o);
        let start = Instant::now();
        if all {
            let mut cells = Vec::new();
            let r = all_contortions(&f.ctx, &goal.dims, &goal.boundary, theory, cfg.timeout, |c| {
                cells.push(c);
                ControlFlow::Continue(())
            });
            ok &= r.is_ok() && !cells.is_empty();
            if format == Format::Json {
                let v = json!({
                    "goal": &*goal.name,
                    "status": match &r { Ok(_) if !cells.is_empty() => "solved", Ok(_) => "unsolved", Err(e) => status(e) },
                    "terms": cells.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                    "stats": r.as_ref().map(stats_json).unwrap_or(serde_json::Value::Null),
                });
                println!("{v}");
            } else {
                println!("{}: {} contortion(s)", goal.name, cells.len());
                for c in &cells {
                    println!("  {c}");
                }
                if let Err(e) = &r {
                    println!("  stopped: {e}");
                }
            }
            continue;
        }
        let r = solve(&f.ctx, &goal.dims, &goal.boundary, &cfg);
        let elapsed = start.elapsed();
        match &r {
            Ok(sol) => {
                let agda = print_agda(&f.ctx, &goal.dims, &sol.cell, &goal.boundary)?;
                match format {
                    Format::Json => {
                        let v = json!({
                            "goal": &*goal.name,
                            "status": "solved",
                            "term": sol.cell.to_string(),
                            "agda": agda,
                            "depth": sol.depth,
                            "open_sides": sol.open_sides.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                            "seconds": elapsed.as_secs_f64(),
                            "stats": stats_json(&sol.stats),
                        });
                        println!("{v}");
                    }
                    Format::Agda => println!("{} = {agda}\n", goal.name),
                    Format::Internal => println!("{} := {}", goal.name, sol.cell),
                }
                if show_stats && format != Format::Json {
                    let open: Vec<String> = sol.open_sides.iter().map(|s| s.to_string()).collect();
                    eprintln!(
                        "{}: depth {} open [{}] maps {} branches {} in {:.3}s",
                        goal.name,
                        sol.depth,
                        open.join(", "),
                        sol.stats.maps_unfolded,
                        sol.stats.csp_branches,
                        elapsed.as_secs_f64()
                    );
                }
                for w in &sol.stats.warnings {
                    eprintln!("warning: {w}");
                }
            }
            Err(e) => {
                ok = false;
                if format == Format::Json {
                    let v = json!({
                        "goal": &*goal.name,
                        "status": status(e),
                        "term": null,
                        "agda": null,
                        "seconds": elapsed.as_secs_f64(),
                        "error": e.to_string(),
                    });
                    println!("{v}");
                } else {
                    println!("{}: {e}", goal.name);
                }
            }
        }
    }
    Ok(ok)
}

fn cmd_check(file: &Path) -> Result<bool> {
    let f = read_cube(file)?;
    let mut ok = true;
    for goal in &f.goals {
        match &goal.solution {
            None => println!("{}: no solution given", goal.name),
            Some(t) => match check(&f.ctx, &goal.dims, t, &goal.boundary) {
                Ok(()) => println!("{}: ok", goal.name),
                Err(e) => {
                    ok = false;
                    println!("{}: {e}", goal.name);
                }
            },
        }
    }
    Ok(ok)
}

struct Row {
    file: String,
    goal: String,
    status: &'static str,
    expected: bool,
    seconds: f64,
    depth: Option<usize>,
    maps: u64,
}

fn cmd_bench(dir: &Path, timeout: Option<f64>) -> Result<bool> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "cube"))
        .collect();
    files.sort();
    let mut jobs = Vec::new();
    for p in &files {
        let f = read_cube(p)?;
        let stem = p.file_stem().unwrap().to_string_lossy().into_owned();
        for g in f.goals.clone() {
            jobs.push((stem.clone(), f.ctx.clone(), g));
        }
    }
    let o = Overrides {
        theory: None,
        depth: None,
        timeout,
    };
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads()).build()?;
    let rows: Vec<Row> = pool.install(|| {
        jobs.par_iter()
            .map(|(file, ctx, goal)| {
                let (_, cfg) = config(goal, &o);
                let start = Instant::now();
                let r = solve(ctx, &goal.dims, &goal.boundary, &cfg);
                let seconds = start.elapsed().as_secs_f64();
                let (status, depth, maps) = match &r {
                    Ok(s) => ("solved", Some(s.depth), s.stats.maps_unfolded),
                    Err(e) => (status(e), None, 0),
                };
                let want_solved = goal.options.expect != Some(Expect::Unsolved);
                Row {
                    file: file.clone(),
                    goal: goal.name.to_string(),
                    status,
                    expected: (status == "solved") == want_solved,
                    seconds,
                    depth,
                    maps,
                }
            })
            .collect()
    });
    println!("{:<20} {:<16} {:<9} {:>6} {:>9} {:>10}  ok", "file", "goal", "status", "depth", "seconds", "maps");
    for r in &rows {
        println!(
            "{:<20} {:<16} {:<9} {:>6} {:>9.3} {:>10}  {}",
            r.file,
            r.goal,
            r.status,
            r.depth.map_or("-".into(), |d| d.to_string()),
            r.seconds,
            r.maps,
            if r.expected { "yes" } else { "NO" }
        );
    }
    Ok(rows.iter().all(|r| r.expected))
}

fn cmd_gen_group(path: &Path, goals: &[String]) -> Result<bool> {
    let src = if path == Path::new("-") {
        std::io::read_to_string(std::io::stdin())?
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    let pres = cubesolve::group::Presentation::parse(&src)?;
    let mut eqs = Vec::new();
    for g in goals {
        let Some((l, r)) = g.split_once('=') else {
            bail!("goal `{g}` is not of the form `lhs = rhs`");
        };
        eqs.push((pres.parse_word(l)?, pres.parse_word(r)?));
    }
    print!("{}", cubesolve::group::emit_cube(&pres, &eqs)?);
    Ok(true)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Solve {
            file,
            goal,
            theory,
            depth,
            timeout,
            all,
            stats,
            format,
        } => cmd_solve(&file, goal.as_deref(), &Overrides { theory, depth, timeout }, all, stats, format),
        Cmd::Check { file } => cmd_check(&file),
        Cmd::Bench { dir, timeout } => cmd_bench(&dir, timeout),
        Cmd::GenGroup { presentation, goals } => cmd_gen_group(&presentation, &goals),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
