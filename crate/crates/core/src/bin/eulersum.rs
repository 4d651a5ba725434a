use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use eulersum::contour::{f_at_nonpositive_integer, f_auto, f_hankel, f_real_axis, FValue};
use eulersum::error::{Error, Result};
use eulersum::euler_sum::{h_auto, h_continued, h_series};
use eulersum::precision::{format_float, PrecReal};
use eulersum::rational::parse_rational;
use eulersum::verify::{emit_tables, verify_named, OutputFormat, Run, RunConfig, Table, TableKind};

#[derive(Parser)]
#[command(name = "eulersum", version, about = "Euler sums, Bernoulli convolutions and their identities")]
struct Cli {
    /// Significant digits.
    #[arg(long = "prec", global = true, default_value_t = 50)]
    prec: u32,
    /// Numeric checks pass when |lhs - rhs| <= 10^-TOL_EXP.
    #[arg(long = "tol-exp", global = true, default_value_t = 30)]
    tol_exp: u32,
    #[arg(long = "max-n", global = true, default_value_t = 20)]
    max_n: usize,
    #[arg(long = "max-m", global = true, default_value_t = 3)]
    max_m: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Where `verify` stores its run and `report` reads it back.
    #[arg(long = "last-run", global = true, default_value = "eulersum-last-run.json")]
    last_run: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Json => OutputFormat::Json,
            Format::Csv => OutputFormat::Csv,
            Format::Table => OutputFormat::Table,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Regime {
    Auto,
    Circle,
    RealAxis,
    Hankel,
}

#[derive(Clone, Copy, ValueEnum)]
enum HMethod {
    Auto,
    Series,
    Continued,
}

#[derive(Subcommand)]
enum Command {
    /// Table of A_1..A_{max-n} as exact rationals, or h(-2m) with --negative-h.
    A {
        #[arg(long = "negative-h")]
        negative_h: bool,
    },
    /// Evaluate h(s).
    H {
        #[arg(allow_hyphen_values = true)]
        s: String,
        #[arg(long, value_enum, default_value_t = HMethod::Auto)]
        method: HMethod,
    },
    /// Evaluate F(s).
    #[command(name = "F")]
    F {
        #[arg(allow_hyphen_values = true)]
        s: String,
        #[arg(long, value_enum, default_value_t = Regime::Auto)]
        regime: Regime,
    },
    /// Laurent coefficients of h at 0 or a negative odd integer.
    Laurent {
        #[arg(allow_hyphen_values = true)]
        center: String,
        #[arg(long = "n-coeffs", default_value_t = 2)]
        n_coeffs: usize,
    },
    /// Run one identity id, a group (theorem, cor1, cor2, cor3, regimes, mellin) or all.
    Verify { identity: String },
    /// Re-emit the last verify run.
    Report,
}

fn config(cli: &Cli) -> RunConfig {
    RunConfig {
        precision: cli.prec,
        tolerance_exponent: cli.tol_exp,
        max_n: cli.max_n,
        max_m: cli.max_m,
        format: cli.format.into(),
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(Error::from),
        None => {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
            Ok(())
        }
    }
}

fn value_table(label: &str, s: &str, value: &PrecReal, extra: &[(&str, String)]) -> Table {
    let mut header = vec!["s".to_string(), label.to_string(), "digits".to_string()];
    let mut row = vec![
        s.to_string(),
        value.to_decimal(value.digits() as usize),
        value.digits().to_string(),
    ];
    for (k, v) in extra {
        header.push(k.to_string());
        row.push(v.clone());
    }
    Table {
        header,
        rows: vec![row],
    }
}

fn f_value(s: &PrecReal, regime: Regime, digits: u32) -> Result<FValue> {
    match regime {
        Regime::Auto => f_auto(s, digits),
        Regime::RealAxis => f_real_axis(s, digits),
        Regime::Hankel => f_hankel(s, digits),
        Regime::Circle => {
            if !s.is_integer() || *s.value() > 0 {
                return Err(Error::InvalidInput(
                    "the circle-only form needs s = 0, -1, -2, ...".into(),
                ));
            }
            f_at_nonpositive_integer((1 - s.to_f64() as i64) as usize, digits)
        }
    }
}

fn run(cli: &Cli) -> Result<bool> {
    let cfg = config(cli);
    let fmt = cfg.format;
    let out = cli.out.as_deref();
    match &cli.command {
        Command::A { negative_h } => {
            let kind = if *negative_h {
                TableKind::HNegative { max_m: cfg.max_m }
            } else {
                TableKind::ANumbers { max_n: cfg.max_n }
            };
            emit(&emit_tables(&kind, &cfg)?.render(fmt)?, out)?;
        }
        Command::H { s, method } => {
            let sp = PrecReal::parse(s, cfg.precision)?;
            let h = match method {
                HMethod::Auto => h_auto(&sp, cfg.precision)?,
                HMethod::Series => h_series(&sp, cfg.precision)?,
                HMethod::Continued => h_continued(&sp, cfg.precision)?,
            };
            emit(&value_table("h(s)", s, &h, &[]).render(fmt)?, out)?;
        }
        Command::F { s, regime } => {
            let sp = PrecReal::parse(s, cfg.precision)?;
            let f = f_value(&sp, *regime, cfg.precision)?;
            let extra = [
                ("error_estimate", format_float(&f.error_estimate, 3)),
                ("imag_residual", format_float(&f.imag_residual, 3)),
            ];
            emit(&value_table("F(s)", s, &f.value, &extra).render(fmt)?, out)?;
        }
        Command::Laurent { center, n_coeffs } => {
            let c = parse_rational(center)
                .ok_or_else(|| Error::InvalidInput(format!("bad center '{center}'")))?;
            let kind = TableKind::Laurent {
                center: c,
                n_coeffs: *n_coeffs,
            };
            emit(&emit_tables(&kind, &cfg)?.render(fmt)?, out)?;
        }
        Command::Verify { identity } => {
            let reports = verify_named(identity, &cfg)?;
            let run = Run {
                config: cfg.clone(),
                reports,
            };
            fs::write(&cli.last_run, run.to_json()?)?;
            emit(&run.render(fmt)?, out)?;
            return Ok(run.all_passed());
        }
        Command::Report => {
            let text = fs::read_to_string(&cli.last_run).map_err(|e| {
                Error::Io(format!("cannot read {}: {e}", cli.last_run.display()))
            })?;
            let run = Run::from_json(&text)?;
            emit(&run.render(fmt)?, out)?;
            return Ok(run.all_passed());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
