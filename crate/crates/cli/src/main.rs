mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use output::{render, Rendered};

#[derive(Parser, Debug)]
#[command(name = "hkm", version, about = "Weakly holomorphic forms, Borcherds products and Kac-Moody root data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format; csv is available for tabular commands only.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Plain => "plain",
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct Disc {
    /// Fundamental discriminant N of the real quadratic field.
    #[arg(long)]
    pub disc: u64,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// The form f_m with principal part q^-m/s(m).
    Basis {
        #[command(flatten)]
        d: Disc,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        prec: Option<i64>,
    },
    /// Which f_m exist for 1 ≤ m ≤ max.
    Existence {
        #[command(flatten)]
        d: Disc,
        #[arg(long)]
        max: Option<u64>,
    },
    /// Integrality of s(n)a(n) for f_1 through an eta multiplier and the Sturm bound.
    Sturm {
        #[command(flatten)]
        d: Disc,
        #[arg(long)]
        prec: Option<i64>,
    },
    /// E^ε* and the constant-term duality for every f_m with m ≤ N.
    Eisenstein {
        #[command(flatten)]
        d: Disc,
        /// Number of coefficients of E^ε* to print.
        #[arg(long)]
        len: Option<usize>,
    },
    /// Indices, dimensions and the Sturm bound at weight k with character χ_N.
    Dim {
        #[command(flatten)]
        d: Disc,
        #[arg(long)]
        weight: i64,
    },
    /// Relations of the Weil representation of 𝔡⁻¹/O_F.
    Weilrep {
        #[command(flatten)]
        d: Disc,
    },
    /// Walls, Weyl chamber and Weyl vector of f_m.
    Weyl {
        #[command(flatten)]
        d: Disc,
        #[arg(long)]
        m: Option<u64>,
        #[arg(long)]
        prec: Option<i64>,
    },
    /// Expansion of the Borcherds product of f_m up to a grade bound.
    Borcherds {
        #[command(flatten)]
        d: Disc,
        #[arg(long)]
        m: Option<u64>,
        #[arg(long)]
        prec: Option<i64>,
        /// Rational bound on t(μ) = μ + ε₀μ′; computed from the Weyl orbit of ρ when omitted.
        #[arg(long)]
        grade_bound: Option<String>,
    },
    /// Imaginary root multiplicities read off from f_1.
    Multtable {
        #[command(flatten)]
        d: Disc,
        #[arg(long)]
        prec: Option<i64>,
        #[arg(long)]
        grade_bound: Option<String>,
    },
    /// Main terms of the circle method against exact coefficients.
    Asympt {
        #[command(flatten)]
        d: Disc,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        from: Option<i64>,
        #[arg(long)]
        to: Option<i64>,
        /// Also check a(n) ≥ 0 on the range.
        #[arg(long)]
        positivity: bool,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Basis { .. } => "basis",
            Command::Existence { .. } => "existence",
            Command::Sturm { .. } => "sturm",
            Command::Eisenstein { .. } => "eisenstein",
            Command::Dim { .. } => "dim",
            Command::Weilrep { .. } => "weilrep",
            Command::Weyl { .. } => "weyl",
            Command::Borcherds { .. } => "borcherds",
            Command::Multtable { .. } => "multtable",
            Command::Asympt { .. } => "asympt",
        }
    }
}

/// A failure before any computation starts.
pub struct ConfigError(pub String);

fn error_json(code: &str, message: &str, meta: Option<Value>) -> Value {
    let mut m = Map::new();
    m.insert("error".into(), json!({ "code": code, "message": message }));
    if let Some(meta) = meta {
        m.insert("metadata".into(), meta);
    }
    Value::Object(m)
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn threads() -> Result<(), ConfigError> {
    let Ok(s) = std::env::var("FORGE_THREADS") else { return Ok(()) };
    let n: usize = s
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| ConfigError(format!("FORGE_THREADS must be a positive integer, got {:?}", s)))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| ConfigError(format!("cannot start {} threads: {}", n, e)))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{}", e);
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.render().to_string();
            print_json(&error_json("config", msg.trim(), None));
            return ExitCode::from(2);
        }
    };
    if let Err(ConfigError(msg)) = threads() {
        print_json(&error_json("config", &msg, None));
        return ExitCode::from(2);
    }
    let format = cli.format.unwrap_or(Format::Json);
    let plan = match commands::plan(&cli.command, format) {
        Ok(p) => p,
        Err(ConfigError(msg)) => {
            print_json(&error_json("config", &msg, None));
            return ExitCode::from(2);
        }
    };
    let mut meta = plan.metadata();
    meta.insert("format".into(), json!(format.name()));
    if cli.format.is_none() {
        if let Some(Value::Array(d)) = meta.get_mut("defaulted") {
            d.push(json!("format"));
        }
    }
    let out = match commands::run(&plan) {
        Ok(out) => out,
        Err(e) => {
            print_json(&error_json(e.code(), &e.to_string(), Some(Value::Object(meta))));
            return ExitCode::from(1);
        }
    };
    if let Some(Value::Object(params)) = meta.get_mut("parameters") {
        for (k, v) in out.extra_metadata.clone() {
            params.insert(k, v);
        }
    }
    let text = match render(&out, Value::Object(meta), format) {
        Rendered::Text(t) => t,
        Rendered::Failed(msg) => {
            print_json(&error_json("output", &msg, None));
            return ExitCode::from(1);
        }
    };
    match &cli.output {
        None => print!("{}", text),
        Some(p) => {
            if let Err(e) = std::fs::write(p, text) {
                print_json(&error_json("output", &format!("cannot write {}: {}", p.display(), e), None));
                return ExitCode::from(1);
            }
        }
    }
    ExitCode::SUCCESS
}
