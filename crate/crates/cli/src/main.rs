use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qres::{run, GermSpec, JobConfig, JobInput, Mode, ProjPoint};

#[derive(Parser)]
#[command(name = "qres", version, about = "Embedded Q-resolutions and monodromy of curve and surface germs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Resolve a plane curve germ h(x, y) at the origin.
    Curve {
        poly: String,
        /// Blow-up weights in processing order, e.g. "2,3;1,1".
        #[arg(long)]
        weights: Option<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Resolve a superisolated or Yomdin-Le surface germ f(x, y, z).
    Surface {
        /// Full polynomial; omit when passing --germ.
        poly: Option<String>,
        /// Singular point of the tangent cone, e.g. "0:0:1"; repeatable.
        #[arg(long)]
        sing: Vec<String>,
        /// Local germ h(x, y) of the tangent cone at a singular point; repeatable.
        #[arg(long, requires_all = ["m", "k"], conflicts_with_all = ["poly", "sing"])]
        germ: Vec<String>,
        /// Milnor number of the matching --germ.
        #[arg(long)]
        mu: Vec<u64>,
        /// Order of the tangent cone, with --germ.
        #[arg(long)]
        m: Option<u64>,
        /// Gap to the next nonzero homogeneous part, with --germ.
        #[arg(long)]
        k: Option<u64>,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args)]
#[group(multiple = false)]
struct Format {
    /// Full result document as JSON.
    #[arg(long)]
    json: bool,
    /// Dual graphs in Graphviz format.
    #[arg(long)]
    dot: bool,
    /// Only Δ as a product of (t^m - 1) factors.
    #[arg(long)]
    factored: bool,
    /// Only Δ as an expanded polynomial.
    #[arg(long)]
    expanded: bool,
}

#[derive(Args)]
struct Output {
    /// Run the oracle and chart-replay checks; exit code 3 on a mismatch.
    #[arg(long)]
    verify: bool,
    #[command(flatten)]
    format: Format,
}

fn parse_weights(s: &str) -> Result<Vec<(i64, i64)>, String> {
    s.split(';')
        .map(|pair| {
            let (p, q) = pair.split_once(',').ok_or_else(|| format!("bad weight pair '{pair}'"))?;
            let p = p.trim().parse().map_err(|_| format!("bad weight '{p}'"))?;
            let q = q.trim().parse().map_err(|_| format!("bad weight '{q}'"))?;
            Ok((p, q))
        })
        .collect()
}

fn build(cli: Cli) -> Result<(JobConfig, Output), String> {
    match cli.command {
        Command::Curve { poly, weights, out } => {
            let weights = weights.as_deref().map(parse_weights).transpose()?;
            let job = JobConfig { weights, verify: out.verify, ..JobConfig::curve(&poly) };
            Ok((job, out))
        }
        Command::Surface { poly, sing, germ, mu, m, k, out } => {
            let input = match (poly, germ.is_empty()) {
                (Some(p), true) => JobInput::Polynomial(p),
                (None, false) => {
                    if !mu.is_empty() && mu.len() != germ.len() {
                        return Err("pass one --mu per --germ, or none".into());
                    }
                    let germs = germ
                        .into_iter()
                        .enumerate()
                        .map(|(i, g)| GermSpec { germ: g, mu: mu.get(i).copied() })
                        .collect();
                    JobInput::Germs { m: m.expect("required by clap"), k: k.expect("required by clap"), germs }
                }
                _ => return Err("pass either a polynomial or --germ data".into()),
            };
            let sing = sing.iter().map(|s| s.parse::<ProjPoint>()).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
            let job = JobConfig { mode: Mode::Surface, input, sing, weights: None, verify: out.verify };
            Ok((job, out))
        }
    }
}

fn main() -> ExitCode {
    let (job, out) = match build(Cli::parse()) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let doc = match run(&job) {
        Ok(doc) => doc,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let f = &out.format;
    let body = if f.json {
        serde_json::to_string_pretty(&doc).expect("document serializes") + "\n"
    } else if f.dot {
        doc.to_dot()
    } else if f.factored {
        format!("{}\n", doc.delta_factored)
    } else if f.expanded {
        format!("{}\n", doc.delta_expanded)
    } else {
        doc.to_text()
    };
    // A closed pipe is not an error worth reporting.
    let _ = std::io::stdout().lock().write_all(body.as_bytes());
    if doc.verification_failed() {
        if !f.json && f.dot | f.factored | f.expanded {
            eprint!("{}", doc.to_text());
        }
        return ExitCode::from(3);
    }
    ExitCode::SUCCESS
}
