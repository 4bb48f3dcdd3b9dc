use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use hartogs_cli::{run_str, Format, Report, RunConfig, Status};

#[derive(Debug, Parser)]
#[command(name = "hartogs", about = "Run one hartogs computation from a JSON config")]
struct Args {
    #[arg(long)]
    config: PathBuf,
    /// Defaults to the config's `output`, then stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Defaults to the config's `format`, then json.
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let text = match fs::read_to_string(&args.config) {
        Ok(t) => t,
        Err(e) => {
            let r = Report::error("", &format!("cannot read {}: {e}", args.config.display()));
            eprint!("{}", r.render(args.format.unwrap_or(Format::Json)));
            return ExitCode::from(2);
        }
    };
    let parsed = RunConfig::from_json_str(&text).ok();
    let out = args.out.or_else(|| parsed.as_ref().and_then(|c| c.output.clone()));
    let format = args
        .format
        .or_else(|| parsed.as_ref().and_then(|c| c.format))
        .unwrap_or(Format::Json);
    let report = run_str(&text, args.seed);
    let body = report.render(format);
    match out {
        Some(path) => {
            if let Err(e) = fs::write(&path, &body) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{body}"),
    }
    if report.status == Status::InputError {
        eprintln!("{}", report.summary["error"].as_str().unwrap_or("input error"));
    }
    ExitCode::from(report.status.code() as u8)
}
