use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use heiscay::cli::{
    budget_from_env, build, plan, run_pipeline, CertifyOptions, PipelineError, DEFAULT_GROUP_CAP,
};
use heiscay::digraph::{export, ExportFormat};
use heiscay::OrientationKind;

#[derive(Parser)]
#[command(name = "heiscay", version, about = "Build and certify arc-transitive digraphs with blocks of a given size")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the digraph and write it as an edge list or DOT.
    Build {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        output: Output,
    },
    /// Build, certify every property and print the JSON report.
    Certify {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        output: Output,
        /// Also write the report to this path.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Largest digraph handed to the automorphism search.
        #[arg(long, default_value_t = heiscay::autsearch::DEFAULT_VERTEX_CAP)]
        aut_cap: usize,
        /// Largest group order enumerated by the closure.
        #[arg(long, default_value_t = DEFAULT_GROUP_CAP)]
        group_cap: u64,
    },
    /// Print the construction plan.
    Plan {
        #[command(flatten)]
        target: Target,
    },
}

#[derive(Args)]
struct Target {
    #[arg(long)]
    k: u64,
    #[arg(long)]
    m: u64,
    #[arg(long, value_enum)]
    kind: KindArg,
    /// Force the prime valency of the base.
    #[arg(long)]
    base_prime: Option<u64>,
}

#[derive(Args)]
struct Output {
    /// Write the digraph here instead of stdout (build) or not at all (certify).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Edgelist)]
    format: FormatArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Graph,
    Oriented,
}

impl From<KindArg> for OrientationKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Graph => OrientationKind::Graph,
            KindArg::Oriented => OrientationKind::Oriented,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Dot,
    Edgelist,
}

impl From<FormatArg> for ExportFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Dot => ExportFormat::Dot,
            FormatArg::Edgelist => ExportFormat::EdgeList,
        }
    }
}

fn fail(e: &PipelineError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(if e.is_usage() { 2 } else { 1 })
}

fn write_or_print(path: Option<&PathBuf>, text: &str) -> Result<(), ExitCode> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| {
            eprintln!("error: cannot write {}: {e}", p.display());
            ExitCode::from(2)
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), ExitCode> {
    let budget = budget_from_env();
    match cli.command {
        Command::Plan { target } => {
            let p = plan(target.k, target.m, target.kind.into(), target.base_prime)
                .map_err(|e| fail(&e))?;
            println!("{}", serde_json::to_string_pretty(&serde_json::to_value(p).unwrap()).unwrap());
        }
        Command::Build { target, output } => {
            let p = plan(target.k, target.m, target.kind.into(), target.base_prime)
                .map_err(|e| fail(&e))?;
            let out = build(&p, budget).map_err(|e| fail(&e))?;
            let text = export(&out.digraph, output.format.into(), p.k, p.m);
            write_or_print(output.out.as_ref(), &text)?;
        }
        Command::Certify {
            target,
            output,
            json,
            aut_cap,
            group_cap,
        } => {
            let opts = CertifyOptions {
                budget,
                group_cap,
                aut_cap,
            };
            let result = run_pipeline(target.k, target.m, target.kind.into(), target.base_prime, &opts);
            let (report, failure) = match result {
                Ok((out, report)) => {
                    if let Some(path) = &output.out {
                        let text = export(&out.digraph, output.format.into(), target.k, target.m);
                        write_or_print(Some(path), &text)?;
                    }
                    (report, None)
                }
                Err(PipelineError::CertificationFailed { property, report }) => {
                    (*report, Some(property))
                }
                Err(e) => return Err(fail(&e)),
            };
            let text = report.to_json();
            if let Some(path) = &json {
                write_or_print(Some(path), &text)?;
            }
            print!("{text}");
            if let Some(property) = failure {
                eprintln!("certification failed: {property}");
                return Err(ExitCode::from(1));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(code) => code,
    }
}
