mod args;
mod commands;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Result};
use clap::Parser;

use umps_core::exact_algebra::RankMode;
use umps_core::span_character::SpanEngine;
use umps_core::{Exec, ResourceCaps};

use args::{Cli, Command, Format, Global, Mode};
use commands::Report;

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE_CAP: u8 = 3;

fn exec_for(threads: usize) -> Result<Exec> {
    if threads == 0 {
        bail!("--threads must be at least 1");
    }
    if threads == 1 {
        return Ok(Exec::Sequential);
    }
    #[cfg(feature = "parallel")]
    {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
        Ok(Exec::Parallel)
    }
    #[cfg(not(feature = "parallel"))]
    {
        eprintln!("built without the parallel feature; running sequentially");
        Ok(Exec::Sequential)
    }
}

fn rank_mode(g: &Global) -> RankMode {
    match g.mode {
        Mode::Exact => RankMode::Exact,
        Mode::Modular => RankMode::Modular {
            prime_bits: g.prime_bits,
        },
    }
}

fn run(cli: &Cli) -> Result<Report> {
    let g = &cli.global;
    let caps = ResourceCaps {
        max_trace_param_length: g.max_length,
        max_rows: g.max_rows,
        max_symbolic_size: g.max_symbolic_size,
        ..ResourceCaps::default()
    };
    let engine = SpanEngine::new(caps, exec_for(g.threads)?);
    let mode = rank_mode(g);
    match &cli.command {
        Command::Count { n, d, w } => commands::count(*n, *d, w.as_deref()),
        Command::Enumerate { n, d, w, kind } => commands::enumerate(*n, *d, w.as_deref(), *kind),
        Command::Character {
            d,
            m,
            n,
            source,
            all_weights,
            max_weight,
        } => commands::character(&engine, mode, *m, *n, *d, *source, *all_weights, *max_weight),
        Command::Ideal { d, k, max_weight } => commands::ideal(&engine, mode, *d, *k, *max_weight),
        Command::VerifyCh {
            m,
            ell,
            example,
            check,
            trials,
            seed,
            perturb,
        } => commands::verify_ch(&engine, *m, *ell, *example, *check, *trials, *seed, *perturb),
        Command::Substitute { rel } => commands::substitute(rel),
        Command::Certify { rel, d, ambient } => commands::certify(&engine, mode, rel, *d, *ambient),
        Command::Conjecture { d } => commands::conjecture(&engine, mode, d),
        Command::DumpTraceParam { d, matrix_market } => commands::dump_trace_param(&engine, mode, *d, *matrix_market),
    }
}

fn render(report: &Report, format: Format) -> Result<String> {
    Ok(match format {
        Format::Text => report.text.clone(),
        Format::Csv => report.csv.clone(),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report.json)?;
            s.push('\n');
            s
        }
    })
}

fn emit(out: &str, path: Option<&std::path::Path>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, out)?,
        None => std::io::stdout().lock().write_all(out.as_bytes())?,
    }
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<umps_core::Error>() {
        Some(umps_core::Error::ResourceCap { .. }) => EXIT_RESOURCE_CAP,
        _ => EXIT_USAGE,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = run(&cli).and_then(|r| {
        let s = render(&r, cli.global.format)?;
        emit(&s, cli.global.out.as_deref())?;
        Ok(r.ok)
    });
    if cli.global.timing {
        eprintln!("elapsed: {:.3} s", start.elapsed().as_secs_f64());
    }
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_CHECK_FAILED),
        Err(e) => {
            eprintln!("error: {e:#}");
            if exit_code(&e) == EXIT_RESOURCE_CAP {
                eprintln!("raise the matching --max-* limit to run it anyway");
            }
            ExitCode::from(exit_code(&e))
        }
    }
}
