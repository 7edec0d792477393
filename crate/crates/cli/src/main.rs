//! Batch verifier front end.
//!
//! Subcommands: `numerology`, `projectors`, `lift`, `verify`, `bound`.
//! Reports are deterministic given (seed, config); exit status is 0 when
//! every check passes, 1 on a check failure (the report is still emitted),
//! and 2 on invalid configuration. `MOTIVIC_ABACUS_THREADS` caps the
//! parallelism of trial batches.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use motivic_abacus::beaufourier::{scholl_projectors, suh_projectors, PolarizedModel, SuhVariant};
use motivic_abacus::corr::CorrClass;
use motivic_abacus::numerology;
use motivic_abacus::report::SuiteReport;
use motivic_abacus::suites::{self, Suite};

#[derive(Parser)]
#[command(
    name = "motivic-abacus",
    version,
    about = "Exact verifier for the exterior-algebra model of abelian-variety cohomology"
)]
struct Cli {
    /// Write the report to this path instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Report format.
    #[arg(long, global = true, default_value = "json", value_parser = ["json", "table"])]
    format: String,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Universal gcds w_{i,j} and the range lcm, with certification.
    Numerology {
        /// Compute w_{I,J} (certified).
        #[arg(long, num_args = 2, value_names = ["I", "J"], allow_negative_numbers = true)]
        w: Option<Vec<i64>>,
        /// Compute R^& = lcm{1..R}.
        #[arg(long, value_name = "R")]
        lcm_sharp: Option<i64>,
    },
    /// Emit a projector table.
    Projectors {
        /// Dimension of the abelian variety.
        #[arg(long, default_value_t = 2)]
        g: usize,
        /// Which formula to evaluate.
        #[arg(long, default_value = "kuenneth", value_parser = ["kuenneth", "scholl", "suh", "suh2"])]
        formula: String,
    },
    /// Run the torsion-lifting battery and report per-check results.
    Lift {
        #[arg(long, default_value_t = 2)]
        g: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
    /// Run a named identity suite.
    Verify {
        /// One of: divided-powers, fourier, scholl, suh, lifting,
        /// hochschild, all.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 2)]
        g: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
    /// Abelian-scheme bounds M and N_i.
    Bound {
        /// Compute M(G, CD).
        #[arg(long = "bound-m", num_args = 2, value_names = ["G", "CD"])]
        m: Option<Vec<i64>>,
        /// Compute N_I(I, G, CD).
        #[arg(long = "bound-n", num_args = 3, value_names = ["I", "G", "CD"])]
        n: Option<Vec<i64>>,
    },
}

fn thread_cap() -> Result<usize, String> {
    match std::env::var("MOTIVIC_ABACUS_THREADS") {
        Err(_) => Ok(std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)),
        Ok(v) => v
            .parse::<usize>()
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| format!("MOTIVIC_ABACUS_THREADS must be a positive integer, got {v:?}")),
    }
}

fn emit(cli: &Cli, body: &str) -> Result<(), String> {
    match &cli.output {
        None => {
            println!("{body}");
            Ok(())
        }
        Some(path) => {
            let mut f = std::fs::File::create(path).map_err(|e| e.to_string())?;
            writeln!(f, "{body}").map_err(|e| e.to_string())
        }
    }
}

fn suite_table(r: &SuiteReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "suite {} (g={}, seed={}, trials={})\n",
        r.suite, r.g, r.seed, r.trials
    ));
    for c in &r.checks {
        out.push_str(&format!(
            "{} {} [g={}]\n",
            if c.pass { "PASS" } else { "FAIL" },
            c.identity,
            c.g
        ));
    }
    out.push_str(if r.pass {
        "all checks passed"
    } else {
        "FAILURES present"
    });
    out
}

fn emit_suite(cli: &Cli, r: &SuiteReport) -> Result<bool, String> {
    let body = if cli.format == "table" {
        suite_table(r)
    } else {
        serde_json::to_string_pretty(r).map_err(|e| e.to_string())?
    };
    emit(cli, &body)?;
    Ok(r.pass)
}

fn json_or_table(cli: &Cli, doc: &serde_json::Value) -> Result<String, String> {
    if cli.format == "table" {
        Ok(doc
            .as_object()
            .unwrap()
            .iter()
            .map(|(k, v)| format!("{k}: {v}"))
            .collect::<Vec<_>>()
            .join("\n"))
    } else {
        serde_json::to_string_pretty(doc).map_err(|e| e.to_string())
    }
}

fn validate_run(g: usize, trials: usize, max_g: usize) -> Result<(), String> {
    if g < 1 || g > max_g {
        return Err(format!("--g must be between 1 and {max_g}, got {g}"));
    }
    if trials < 1 {
        return Err("--trials must be at least 1".into());
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<bool, String> {
    let threads = thread_cap()?;
    match &cli.command {
        Command::Numerology { w, lcm_sharp } => {
            let doc = match (w, lcm_sharp) {
                (Some(ij), None) => {
                    let r = numerology::w_certified(ij[0], ij[1]).map_err(|e| e.to_string())?;
                    let valuations: serde_json::Map<String, serde_json::Value> = r
                        .prime_valuations
                        .iter()
                        .map(|(l, (lo, hi))| (l.to_string(), json!([lo, hi])))
                        .collect();
                    json!({
                        "schema": "1",
                        "i": r.i,
                        "j": r.j,
                        "value": r.value.to_string(),
                        "certified": r.certified,
                        "valuations": valuations,
                    })
                }
                (None, Some(r)) => {
                    let v = numerology::lcm_sharp(*r).map_err(|e| e.to_string())?;
                    json!({ "schema": "1", "r": r, "lcm_sharp": v.to_string() })
                }
                _ => {
                    return Err("numerology needs exactly one of --w I J or --lcm-sharp R".into())
                }
            };
            emit(cli, &json_or_table(cli, &doc)?)?;
            Ok(true)
        }
        Command::Projectors { g, formula } => {
            if !(1..=3).contains(g) {
                return Err(format!("projector tables support 1 <= g <= 3, got {g}"));
            }
            let projs: Vec<CorrClass> = match formula.as_str() {
                "kuenneth" => (0..=2 * *g as i64)
                    .map(|i| CorrClass::kuenneth_projector(*g, i))
                    .collect::<Result<_, _>>()
                    .map_err(|e| e.to_string())?,
                "scholl" => scholl_projectors(&PolarizedModel::principal(*g))
                    .map_err(|e| e.to_string())?,
                "suh" => suh_projectors(&PolarizedModel::principal(*g), SuhVariant::Expanded)
                    .map_err(|e| e.to_string())?,
                "suh2" => {
                    suh_projectors(&PolarizedModel::principal(*g), SuhVariant::ChuVandermonde)
                        .map_err(|e| e.to_string())?
                }
                other => return Err(format!("unknown formula {other}")),
            };
            let rows: Vec<serde_json::Value> = projs
                .iter()
                .enumerate()
                .map(|(i, p)| p.to_json_row(*g, i as i64))
                .collect();
            let body = if cli.format == "table" {
                projs
                    .iter()
                    .enumerate()
                    .map(|(i, p)| format!("pi^{i} = {}", p.cls()))
                    .collect::<Vec<_>>()
                    .join("\n")
            } else {
                let doc =
                    json!({ "schema": "1", "g": g, "formula": formula, "projectors": rows });
                serde_json::to_string_pretty(&doc).map_err(|e| e.to_string())?
            };
            emit(cli, &body)?;
            Ok(true)
        }
        Command::Lift { g, seed, trials } => {
            validate_run(*g, *trials, 3)?;
            let r = suites::lifting_suite(*g, *seed, *trials, threads);
            emit_suite(cli, &r)
        }
        Command::Verify {
            suite,
            g,
            seed,
            trials,
        } => {
            let s = Suite::parse(suite)
                .ok_or_else(|| format!("unknown suite {suite}; see --help for the list"))?;
            // The divided-power battery runs up to rank 8; the
            // correspondence-heavy suites stay at desk scale g ≤ 3.
            let max_g = if s == Suite::DividedPowers { 4 } else { 3 };
            validate_run(*g, *trials, max_g)?;
            let r = suites::run_suite(s, *g, *seed, *trials, threads);
            emit_suite(cli, &r)
        }
        Command::Bound { m, n } => {
            let doc = match (m, n) {
                (Some(gc), None) => {
                    let v = numerology::bound_m(gc[0], gc[1]).map_err(|e| e.to_string())?;
                    json!({ "schema": "1", "g": gc[0], "cd": gc[1], "M": v.to_string() })
                }
                (None, Some(igc)) => {
                    let b =
                        numerology::bound_n(igc[0], igc[1], igc[2]).map_err(|e| e.to_string())?;
                    json!({
                        "schema": "1",
                        "i": igc[0],
                        "g": igc[1],
                        "cd": igc[2],
                        "N": b.value.to_string(),
                        "certified": b.certified,
                    })
                }
                _ => {
                    return Err(
                        "bound needs exactly one of --bound-m G CD or --bound-n I G CD".into()
                    )
                }
            };
            emit(cli, &json_or_table(cli, &doc)?)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
