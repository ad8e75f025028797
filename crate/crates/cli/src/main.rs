mod args;
mod cache;
mod commands;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use serde_json::json;
use slopecert_core::modsym::ModSymCaps;
use slopecert_core::slopes::{canonical_json, EngineCaps};
use slopecert_core::ENGINE_VERSION;

use args::{Cli, Command, Format};
use cache::Cache;
use commands::{Context, Outcome};
use error::{CliError, CliResult};

fn default_cache_dir() -> Option<PathBuf> {
    let base = std::env::var_os("XDG_CACHE_HOME")
        .map(PathBuf::from)
        .or_else(|| std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache")))?;
    Some(base.join("slopecert"))
}

fn run(cli: &Cli) -> CliResult<Outcome> {
    let g = &cli.global;
    if let Some(n) = g.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    if g.max_generators == 0 || g.max_trace_terms == 0 {
        return Err(CliError::Usage("caps must be positive".into()));
    }
    let cache = match (&g.cache_dir, g.no_cache) {
        (_, true) => Cache::disabled(),
        (Some(dir), false) => Cache::at(dir),
        (None, false) => default_cache_dir().map_or_else(Cache::disabled, Cache::at),
    };
    let caps = EngineCaps { modsym: ModSymCaps { max_generators: g.max_generators, ..ModSymCaps::default() }, ..EngineCaps::default() };
    let ctx = Context { cache, caps, max_trace_terms: g.max_trace_terms };
    match &cli.command {
        Command::Trace { level, k, n, modulus } => commands::trace(&ctx, *level, *k, *n, modulus.as_deref()),
        Command::Slopes { p, level, k } => commands::slopes(&ctx, *p, *level, *k),
        Command::Compare { p, level, k1, k2, alpha, alpha_min, alpha_max, out } => {
            commands::compare(&ctx, *p, *level, *k1, *k2, alpha, alpha_min, alpha_max, out.as_deref())
        }
        Command::Theorem1 { depth, out } => commands::theorem1(&ctx, *depth, out),
        Command::Theorem2 { nmax, out_dir } => commands::theorem2(&ctx, *nmax, out_dir.as_deref()),
        Command::Verify { certificate } => commands::verify(certificate),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json_output = cli.global.json || cli.global.format == Format::Json;
    let start = Instant::now();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let timing = cli.global.timing.then(|| json!({ "wall_seconds": start.elapsed().as_secs_f64() }));
    if json_output {
        let report = json!({
            "engine_version": ENGINE_VERSION,
            "command": outcome.command,
            "params": outcome.params,
            "results": outcome.results,
            "timing": timing,
        });
        match canonical_json(&report) {
            Ok(text) => println!("{text}"),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
        }
    } else {
        print!("{}", outcome.table);
        if let Some(t) = timing {
            println!("wall time: {:.3} s", t["wall_seconds"].as_f64().unwrap_or(0.0));
        }
    }
    match outcome.failure {
        None => ExitCode::SUCCESS,
        Some(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
