use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use wahlkit::config::{load, ConfigFile};
use wahlkit::geometry::Configuration;
use wahlkit::report::{self, Outcome};
use wahlkit::swcert::DEFAULT_BOUND;

#[derive(Parser)]
#[command(name = "wahlkit", version, about = "Verify and search rational blow-down constructions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full verification pipeline on a configuration.
    Verify {
        file: PathBuf,
        /// Also write the machine-readable report here.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Add decimal approximations to the text output.
        #[arg(long)]
        approx: bool,
    },
    /// Search the declared curves for Wahl subchains and disjoint pairs.
    SearchChains {
        file: PathBuf,
        #[arg(long, default_value_t = 100)]
        max_pairs: usize,
    },
    /// Search for a chamber certificate orthogonal to the contracted chains.
    FindCertificate {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: i64,
    },
}

fn open(path: &Path) -> Result<(ConfigFile, Configuration), Outcome> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        Outcome::Parse
    })?;
    load(&text).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        if e.is_syntax() {
            Outcome::Parse
        } else {
            Outcome::Validation
        }
    })
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Verify { file, json, approx } => {
            let (file_cfg, cfg) = match open(&file) {
                Ok(x) => x,
                Err(o) => return o,
            };
            let r = report::verify(&file_cfg, &cfg);
            if let Some(path) = json {
                if let Err(e) = std::fs::write(&path, report::to_json(&r)) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                }
            }
            print!("{}", report::render_verify(&r, approx));
            r.outcome
        }
        Command::SearchChains { file, max_pairs } => {
            let (_, cfg) = match open(&file) {
                Ok(x) => x,
                Err(o) => return o,
            };
            match report::search_chains(&cfg, max_pairs) {
                Ok(r) => {
                    print!("{}", report::render_chain_search(&r));
                    Outcome::Ok
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    Outcome::CheckFailure
                }
            }
        }
        Command::FindCertificate { file, bound } => {
            let (file_cfg, cfg) = match open(&file) {
                Ok(x) => x,
                Err(o) => return o,
            };
            let r = report::find_certificate(&file_cfg, &cfg, bound);
            print!("{}", report::render_certificate(&r));
            r.outcome
        }
    }
}

fn main() -> ExitCode {
    ExitCode::from(run(Cli::parse()).code() as u8)
}
