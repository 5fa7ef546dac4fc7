use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use debell::asymptotics::{bell_asymptotic_estimate, AsymptoticEstimate};
use debell::bell::{bell_egf_series, bell_value, omega, omega_egf, BellRoute};
use debell::derangements::{DerangementQuery, DerangementRoute};
use debell::enumerate::{EnumQuery, Enumerator, Family};
use debell::stirling::{stirling_egf, stirling_rec};
use debell::verify::{self, emit_report, GridOverrides};
use debell::{format_rational, parse_rational, Error, Execution, ParamSet, Rational};

#[derive(Parser)]
#[command(
    name = "debell",
    version,
    about = "Exact higher-order r-deranged Bell numbers and identity checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generalized Stirling number S(n, k; alpha, beta, gamma).
    Stirling {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = StirlingRoute::Rec)]
        route: StirlingRoute,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// r-derangement number d_{k,r}.
    Rderange {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        r: usize,
        /// Recurrence pivot, 1 <= s <= r.
        #[arg(long)]
        s: Option<usize>,
        #[arg(long, value_enum, default_value_t = RderangeRoute::Egf)]
        route: RderangeRoute,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Higher-order r-deranged Bell number B^{r,x}_{n,lambda}(alpha, beta, gamma).
    Bell {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = BellRouteArg::Egf)]
        route: BellRouteArg,
        /// Series order for the generating-function route (default n + 2).
        #[arg(long)]
        order: Option<usize>,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Omega polynomial value.
    Omega {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = OmegaRoute::Sum)]
        route: OmegaRoute,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Brute-force count (or listing) of a combinatorial family.
    Enumerate {
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 0)]
        n: usize,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 0)]
        r: usize,
        #[arg(long, default_value_t = 1)]
        lambda: usize,
        /// Print every arrangement, one per line, instead of the count.
        #[arg(long)]
        list: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Convergence table of the large-lambda estimate.
    Asymp {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, value_delimiter = ',', default_value = "100,1000,10000")]
        deltas: Vec<usize>,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate registered claims over their grids.
    Verify {
        /// Comma-separated claim ids (default: all).
        #[arg(long, value_delimiter = ',')]
        claims: Vec<String>,
        #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
        format: ReportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        n_max: Option<usize>,
        /// Evaluate on one thread.
        #[arg(long)]
        sequential: bool,
    },
    /// CSV of B^{r,x}_{n,lambda} for n = 0 ..= max-n.
    Table {
        #[arg(long)]
        max_n: usize,
        /// Series order (default max-n + 2).
        #[arg(long)]
        order: Option<usize>,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long, default_value = "0", value_parser = rational, allow_hyphen_values = true)]
    alpha: Rational,
    #[arg(long, default_value = "1", value_parser = rational, allow_hyphen_values = true)]
    beta: Rational,
    #[arg(long, default_value = "0", value_parser = rational, allow_hyphen_values = true)]
    gamma: Rational,
    #[arg(long, default_value = "1", value_parser = rational, allow_hyphen_values = true)]
    x: Rational,
    #[arg(long, default_value_t = 1)]
    lambda: usize,
    #[arg(long, default_value_t = 0)]
    r: usize,
}

impl ParamArgs {
    fn params(&self) -> ParamSet {
        ParamSet::new(
            self.alpha.clone(),
            self.beta.clone(),
            self.gamma.clone(),
            self.x.clone(),
            self.lambda,
            self.r,
        )
    }
}

#[derive(Args)]
struct OutArgs {
    #[arg(long, value_enum, default_value_t = ValueFormat::Plain)]
    format: ValueFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ValueFormat {
    Plain,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Json,
    Csv,
    Markdown,
}

#[derive(Clone, Copy, ValueEnum)]
enum StirlingRoute {
    Rec,
    Egf,
}

#[derive(Clone, Copy, ValueEnum)]
enum RderangeRoute {
    Closed,
    Egf,
    Rec,
}

#[derive(Clone, Copy, ValueEnum)]
enum BellRouteArg {
    Egf,
    Lambda1,
    General,
    Convolution,
    Classic,
}

#[derive(Clone, Copy, ValueEnum)]
enum OmegaRoute {
    Sum,
    Egf,
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// A failure and the exit code it maps to.
enum Failure {
    Usage(String),
    Compute(Error),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self::Compute(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e)
    }
}

fn write_out(out: &Option<PathBuf>, bytes: &[u8]) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, bytes)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn emit_value(command: &str, params: Value, value: &str, out: &OutArgs) -> Result<(), Failure> {
    let text = match out.format {
        ValueFormat::Plain => format!("{value}\n"),
        ValueFormat::Json => {
            let doc = json!({ "command": command, "params": params, "value": value });
            format!("{}\n", serde_json::to_string(&doc).expect("json values serialize"))
        }
        ValueFormat::Csv => format!("value\n{value}\n"),
    };
    write_out(&out.out, text.as_bytes())
}

fn params_json(p: &ParamSet) -> Value {
    serde_json::to_value(p).expect("params serialize")
}

fn check_order(order: Option<usize>, n: usize) -> Result<usize, Failure> {
    let order = order.unwrap_or(n + 2);
    if order <= n {
        return Err(Failure::Usage(format!("--order must exceed {n}, got {order}")));
    }
    Ok(order)
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Stirling {
            n,
            k,
            route,
            params,
            out,
        } => {
            let p = params.params();
            let v = match route {
                StirlingRoute::Rec => stirling_rec(n, k, &p.alpha, &p.beta, &p.gamma),
                StirlingRoute::Egf => stirling_egf(n, k, &p.alpha, &p.beta, &p.gamma, n)?,
            };
            let args = json!({ "n": n, "k": k, "alpha": format_rational(&p.alpha),
                "beta": format_rational(&p.beta), "gamma": format_rational(&p.gamma) });
            emit_value("stirling", args, &format_rational(&v), &out)?;
        }
        Command::Rderange { k, r, s, route, out } => {
            let query = DerangementQuery::new(k, r, s).map_err(|e| Failure::Usage(e.to_string()))?;
            let route = match route {
                RderangeRoute::Closed => DerangementRoute::ClosedForm,
                RderangeRoute::Egf => DerangementRoute::Egf,
                RderangeRoute::Rec => DerangementRoute::Recurrence,
            };
            let v = query.evaluate(route)?;
            emit_value("rderange", json!({ "k": k, "r": r, "s": s }), &v.to_string(), &out)?;
        }
        Command::Bell {
            n,
            route,
            order,
            params,
            out,
        } => {
            let p = params.params();
            let v = match route {
                BellRouteArg::Egf => {
                    let order = check_order(order, n)?;
                    bell_egf_series(&p, order)?.egf_coeff(n)?
                }
                other => {
                    let route = match other {
                        BellRouteArg::Lambda1 => BellRoute::Lambda1Closed,
                        BellRouteArg::General => BellRoute::GeneralClosed,
                        BellRouteArg::Convolution => BellRoute::Convolution,
                        _ => BellRoute::ClassicSpecialization,
                    };
                    bell_value(n, &p, route)?.value
                }
            };
            let mut args = params_json(&p);
            args["n"] = json!(n);
            emit_value("bell", args, &format_rational(&v), &out)?;
        }
        Command::Omega { n, route, params, out } => {
            let p = params.params();
            let v = match route {
                OmegaRoute::Sum => omega(n, &p),
                OmegaRoute::Egf => omega_egf(n, &p)?.swap_remove(n),
            };
            let mut args = params_json(&p);
            args["n"] = json!(n);
            emit_value("omega", args, &format_rational(&v), &out)?;
        }
        Command::Enumerate {
            family,
            n,
            k,
            r,
            lambda,
            list,
            out,
        } => {
            let family: Family = family.parse().map_err(|e: Error| Failure::Usage(e.to_string()))?;
            let query = EnumQuery { n, k, r, lambda };
            let e = Enumerator::from_env();
            if list {
                let mut text = String::new();
                for line in e.list(family, &query)? {
                    text.push_str(&line);
                    text.push('\n');
                }
                write_out(&out.out, text.as_bytes())?;
            } else {
                let tally = e.tally(family, &query)?;
                let mut args = serde_json::to_value(query).expect("query serializes");
                args["family"] = json!(family.name());
                emit_value("enumerate", args, &tally.count.to_string(), &out)?;
            }
        }
        Command::Asymp {
            n,
            m,
            deltas,
            params,
            format,
            out,
        } => {
            let p = params.params();
            let rows: Vec<AsymptoticEstimate> = deltas
                .iter()
                .map(|&d| bell_asymptotic_estimate(n, m, d, &p))
                .collect::<debell::Result<_>>()?;
            let text = match format {
                TableFormat::Json => {
                    let doc = json!({ "params": params_json(&p), "rows": rows });
                    format!("{}\n", serde_json::to_string_pretty(&doc).expect("rows serialize"))
                }
                TableFormat::Csv => {
                    let mut t = String::from("delta,estimate,exact,rel_error\n");
                    for row in &rows {
                        let err = row
                            .rel_error
                            .as_ref()
                            .map(format_rational)
                            .unwrap_or_else(|| "exact-zero".into());
                        t.push_str(&format!(
                            "{},{},{},{}\n",
                            row.delta,
                            format_rational(&row.estimate),
                            format_rational(&row.exact),
                            err
                        ));
                    }
                    t
                }
            };
            write_out(&out, text.as_bytes())?;
        }
        Command::Verify {
            claims,
            format,
            out,
            n_max,
            sequential,
        } => {
            let ids: Vec<&str> = if claims.is_empty() {
                verify::claim_ids()
            } else {
                claims.iter().map(String::as_str).collect()
            };
            for id in &ids {
                verify::find_claim(id).map_err(|e| Failure::Usage(e.to_string()))?;
            }
            let overrides = GridOverrides {
                n_max,
                ..Default::default()
            };
            let mode = if sequential {
                Execution::Sequential
            } else {
                Execution::default()
            };
            let report = verify::run_claims(&ids, &overrides, mode)?;
            let format = match format {
                ReportFormat::Json => verify::Format::Json,
                ReportFormat::Csv => verify::Format::Csv,
                ReportFormat::Markdown => verify::Format::Markdown,
            };
            write_out(&out, &emit_report(&report, format)?)?;
            if !report.passed() {
                for row in report.failures() {
                    eprintln!("strict failure: {} at {}", row.claim, row.point);
                }
                return Ok(ExitCode::from(1));
            }
        }
        Command::Table {
            max_n,
            order,
            params,
            out,
        } => {
            let p = params.params();
            let order = check_order(order, max_n)?;
            let coeffs = bell_egf_series(&p, order)?.egf_coeffs();
            let mut text = String::from("n,value\n");
            for (n, v) in coeffs.iter().take(max_n + 1).enumerate() {
                text.push_str(&format!("{n},{}\n", format_rational(v)));
            }
            write_out(&out, text.as_bytes())?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
