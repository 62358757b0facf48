use std::io::Read;
use std::panic;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use critcenter::sugawara::check_row_property;
use critcenter::{
    conductor_irregularity_report, miura, ss_operator_act, ss_vectors, vanishing_report, Case, Connection,
    CyclicVector, Error, Laurent, Oper, Scalar,
};
use serde::Deserialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "critcenter", version, about = "Segal-Sugawara vectors, opers and root modules at the critical level")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Segal-Sugawara vectors S_1..S_n and their Cartan images.
    Ss {
        #[arg(long)]
        n: usize,
    },
    /// The images omega_l and the check hc(S_l) = omega_l.
    Hc {
        #[arg(long)]
        n: usize,
    },
    /// Miura transform of a list of Laurent series (E_11(t), ..., E_nn(t)).
    Miura { input: String },
    /// Irregularity of an oper.
    Irr { input: String },
    /// Search for a cyclic vector of a connection.
    Cyclic {
        input: String,
        /// Largest polynomial degree tried per component.
        #[arg(long, default_value_t = 3)]
        degree_bound: u32,
    },
    /// Oper of a connection with respect to a cyclic vector (default e_1).
    Oper {
        input: String,
        /// Inline JSON or path: a list of series, or the output of `cyclic`.
        #[arg(long)]
        vector: Option<String>,
    },
    /// S_{l,[N]} applied to the highest vector of a root module.
    #[command(allow_negative_numbers = true)]
    Act {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        case: CaseArgs,
        #[arg(long)]
        ell: usize,
        #[arg(long = "N")]
        big_n: i64,
    },
    /// Vanishing report for every l.
    Verify {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        case: CaseArgs,
        /// Scan this many values of N on each side of the threshold.
        #[arg(long, default_value_t = 1)]
        window: i64,
    },
    /// Conductor to irregularity report for the km0 module.
    Report {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: i64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CaseKind {
    Congruence,
    Km0,
    Moyprasad,
}

#[derive(clap::Args)]
struct CaseArgs {
    #[arg(long = "case", value_enum)]
    kind: CaseKind,
    /// Depth for congruence and km0.
    #[arg(long)]
    m: Option<i64>,
    /// Moy-Prasad point, comma separated rationals.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    x: Vec<String>,
    /// Moy-Prasad depth.
    #[arg(long)]
    r: Option<String>,
}

enum Failure {
    Validation { kind: &'static str, message: String },
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let kind = match &e {
            Error::UndeterminedResidue { .. }
            | Error::UndeterminedValuation { .. }
            | Error::UndeterminedCoefficient { .. }
            | Error::PrecisionExhausted { .. } => "precision",
            Error::ZeroDivisor => "zero_divisor",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::NotCyclic | Error::CyclicVectorNotFound { .. } => "not_cyclic",
            Error::Domain(_) => "domain",
            Error::InvalidRootFunction(_) => "invalid_root_function",
            Error::Parse(_) => "parse",
        };
        Failure::Validation { kind, message: e.to_string() }
    }
}

fn invalid(kind: &'static str, message: impl Into<String>) -> Failure {
    Failure::Validation { kind, message: message.into() }
}

/// Text for humans, value for `--json`.
struct Rendered {
    text: String,
    value: Value,
}

fn read_payload<T: for<'de> Deserialize<'de>>(input: &str) -> Result<T, Failure> {
    let trimmed = input.trim_start();
    let raw = if trimmed.starts_with('{') || trimmed.starts_with('[') {
        input.to_owned()
    } else if input == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf).map_err(|e| invalid("io", e.to_string()))?;
        buf
    } else {
        std::fs::read_to_string(input).map_err(|e| invalid("io", format!("{input}: {e}")))?
    };
    serde_json::from_str(&raw).map_err(|e| invalid("parse", e.to_string()))
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn check_rank(n: usize) -> Result<(), Failure> {
    if n == 0 {
        return Err(invalid("domain", "rank must be at least 1"));
    }
    Ok(())
}

fn parse_scalar(s: &str) -> Result<Scalar, Failure> {
    s.trim().parse().map_err(|e: critcenter::ParseError| invalid("parse", e.to_string()))
}

impl CaseArgs {
    fn to_case(&self, n: usize) -> Result<Case, Failure> {
        let need_m = || self.m.ok_or_else(|| invalid("usage", "--m is required for this case"));
        Ok(match self.kind {
            CaseKind::Congruence => Case::Congruence { m: need_m()? },
            CaseKind::Km0 => Case::Km0 { m: need_m()? },
            CaseKind::Moyprasad => {
                let x = if self.x.is_empty() {
                    vec![Scalar::zero(); n]
                } else {
                    self.x.iter().map(|s| parse_scalar(s)).collect::<Result<_, _>>()?
                };
                let r = match (&self.r, self.m) {
                    (Some(r), _) => parse_scalar(r)?,
                    (None, Some(m)) => Scalar::from_int(m - 1),
                    (None, None) => return Err(invalid("usage", "--r (or --m) is required for moyprasad")),
                };
                Case::MoyPrasad { x, r }
            }
        })
    }
}

fn run(command: Command) -> Result<Rendered, Failure> {
    match command {
        Command::Ss { n } => {
            check_rank(n)?;
            let fam = ss_vectors(n);
            let rows: Vec<bool> = (1..=n).map(|l| check_row_property(fam.s(l), n).holds).collect();
            let mut text = String::new();
            for l in 1..=n {
                text += &format!("S_{l} = {}\n", fam.s(l));
            }
            for l in 1..=n {
                text += &format!("omega_{l} = {}\n", fam.omega(l));
            }
            text += &format!("row property: {rows:?}");
            let mut value = to_value(&fam);
            value["row_property"] = json!(rows);
            Ok(Rendered { text, value })
        }
        Command::Hc { n } => {
            check_rank(n)?;
            let fam = ss_vectors(n);
            let mut matches = Vec::with_capacity(n);
            let mut text = String::new();
            for l in 1..=n {
                let ok = &fam.s(l).hc_project()? == fam.omega(l);
                matches.push(ok);
                text += &format!("omega_{l} = {}   hc(S_{l}) = omega_{l}: {ok}\n", fam.omega(l));
            }
            let value = json!({ "n": n, "omega": to_value(&fam.omega), "hc_matches": matches });
            Ok(Rendered { text: text.trim_end().to_owned(), value })
        }
        Command::Miura { input } => {
            let h: Vec<Laurent> = read_payload(&input)?;
            let chi = miura(&h)?;
            Ok(Rendered { text: chi.to_string(), value: to_value(&chi) })
        }
        Command::Irr { input } => {
            let chi: Oper = read_payload(&input)?;
            let irr = chi.irregularity()?;
            Ok(Rendered { text: format!("irregularity: {irr}"), value: json!({ "irregularity": irr }) })
        }
        Command::Cyclic { input, degree_bound } => {
            let conn: Connection = read_payload(&input)?;
            let v = conn.find_cyclic_vector(degree_bound)?;
            let comps: Vec<String> = v.components().iter().map(|c| c.to_string()).collect();
            let text = format!("v = ({})\ncertificate = {}", comps.join(", "), v.certificate());
            Ok(Rendered { text, value: to_value(&v) })
        }
        Command::Oper { input, vector } => {
            let conn: Connection = read_payload(&input)?;
            let v = match vector {
                None => CyclicVector::basis(&conn, 0)?,
                Some(src) => {
                    #[derive(Deserialize)]
                    #[serde(untagged)]
                    enum VectorInput {
                        Certified(CyclicVector),
                        Bare(Vec<Laurent>),
                    }
                    let comps = match read_payload::<VectorInput>(&src)? {
                        VectorInput::Certified(c) => c.components().to_vec(),
                        VectorInput::Bare(v) => v,
                    };
                    CyclicVector::certify(&conn, comps)?
                }
            };
            let chi = conn.to_oper(&v)?;
            Ok(Rendered { text: chi.to_string(), value: to_value(&chi) })
        }
        Command::Act { n, case, ell, big_n } => {
            check_rank(n)?;
            if ell == 0 || ell > n {
                return Err(invalid("domain", format!("ell must lie in 1..={n}, got {ell}")));
            }
            let rf = case.to_case(n)?.root_function(n)?;
            let v = ss_operator_act(n, ell, big_n, &rf)?;
            Ok(Rendered { text: v.to_string(), value: to_value(&v) })
        }
        Command::Verify { n, case, window } => {
            check_rank(n)?;
            if window < 0 {
                return Err(invalid("domain", "window must be nonnegative"));
            }
            let report = vanishing_report(n, &case.to_case(n)?, window)?;
            let mut text = format!("{}, n = {}, r = {}\n", report.case, n, report.root_function);
            text += "ell  threshold  observed  certified  verified\n";
            for k in 0..n {
                text += &format!(
                    "{:<4} {:<10} {:<9} {:<10} {}\n",
                    k + 1,
                    report.thresholds_theoretical[k],
                    report.observed_min_vanishing[k],
                    report.certified_bounds[k],
                    report.threshold_verified[k]
                );
            }
            for w in report.witnesses.iter().flatten() {
                text += &format!("witness S_{},[{}] v0 = {}\n", w.ell, w.big_n, w.vector);
            }
            if let Some(k) = report.irregularity_bound {
                text += &format!("irregularity bound: {k}\n");
            }
            text += &format!("all verified: {}", report.all_verified());
            Ok(Rendered { text, value: to_value(&report) })
        }
        Command::Report { n, m } => {
            check_rank(n)?;
            let report = conductor_irregularity_report(n, m)?;
            let text = format!(
                "km0 module n = {n}, m = {m}\nthresholds verified: {}\npole bounds: {:?}\n\
                 irregularity bound: {}\nwitness oper:\n{}\nwitness irregularity: {}",
                report.vanishing.all_verified(),
                report.pole_bounds,
                report.irregularity_bound,
                report.witness_oper,
                report.witness_irregularity
            );
            Ok(Rendered { text, value: to_value(&report) })
        }
    }
}

fn workers() -> Result<Option<usize>, Failure> {
    match std::env::var("CRITCENTER_WORKERS") {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(k) if k > 0 => Ok(Some(k)),
            _ => Err(invalid("usage", format!("CRITCENTER_WORKERS must be a positive integer, got `{s}`"))),
        },
    }
}

fn execute(command: Command) -> Result<Rendered, Failure> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(k) = workers()? {
        builder = builder.num_threads(k);
    }
    let pool = builder.build().map_err(|e| Failure::Internal(e.to_string()))?;
    pool.install(|| run(command))
}

fn report_error(kind: &str, message: &str) {
    eprintln!("{}", json!({ "error": { "kind": kind, "message": message } }));
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            report_error("usage", e.to_string().trim_end());
            return ExitCode::from(2);
        }
    };
    panic::set_hook(Box::new(|_| {}));
    let json = cli.json;
    let outcome = panic::catch_unwind(|| execute(cli.command)).unwrap_or_else(|payload| {
        let msg = payload
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        Err(Failure::Internal(msg))
    });
    match outcome {
        Ok(r) => {
            if json {
                println!("{}", r.value);
            } else {
                println!("{}", r.text);
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Validation { kind, message }) => {
            report_error(kind, &message);
            ExitCode::from(2)
        }
        Err(Failure::Internal(message)) => {
            report_error("internal", &message);
            ExitCode::from(1)
        }
    }
}
