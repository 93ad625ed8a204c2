use std::io::{self, Write};
use std::ops::RangeInclusive;
use std::process::ExitCode;

use anyhow::{bail, Context as _, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use qforms_core::identities::{self, Entry, RhoVariant, SumRange, DECOMPOSITION_K};
use qforms_core::{Context, Error, Identity, IdentityReport, LomadzeSum, DEFAULT_PRECISION};

#[derive(Parser, Debug)]
#[command(
    name = "qforms",
    version,
    about = "Exact representation numbers, lattice sums and identity checks for sums of x^2+xy+y^2"
)]
struct Cli {
    /// Number of q-expansion coefficients to work with.
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION)]
    precision: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum S2kMethod {
    Bruteforce,
    Formula,
    Decomposition,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TauMethod {
    Eta,
    PaperFormula,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Number of representations of n by F_k.
    S2k {
        #[arg(long)]
        k: u32,
        /// A single n or an inclusive range such as 1..10.
        #[arg(long, value_parser = parse_range)]
        n: RangeInclusive<usize>,
        #[arg(long, value_enum, default_value_t = S2kMethod::Bruteforce)]
        method: S2kMethod,
        /// Use rho* exactly as printed in the odd-weight closed forms.
        #[arg(long)]
        printed_rho: bool,
    },
    /// Ramanujan tau function.
    Tau {
        #[arg(long, value_parser = parse_range)]
        n: RangeInclusive<usize>,
        #[arg(long, value_enum, default_value_t = TauMethod::Eta)]
        method: TauMethod,
    },
    /// A named lattice sum, e.g. L_6_2 or Lcal_4.
    Lsum {
        name: String,
        #[arg(long, value_parser = parse_range)]
        n: RangeInclusive<usize>,
    },
    /// Check identities exactly over n = 1..=nmax.
    Verify {
        #[arg(long, conflicts_with = "identity", required_unless_present = "identity")]
        all: bool,
        /// Identity name; may be repeated.
        #[arg(long)]
        identity: Vec<String>,
        /// Defaults to the working precision.
        #[arg(long)]
        nmax: Option<usize>,
        /// Fail on documented discrepancies too.
        #[arg(long)]
        strict: bool,
    },
    /// rho* as printed against the value brute force requires, l = 6, 8, 10.
    RhoTable {
        #[arg(long, default_value_t = 50)]
        nmax: usize,
    },
    /// List identity and lattice sum names.
    List,
}

fn parse_range(s: &str) -> std::result::Result<RangeInclusive<usize>, String> {
    let num = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|e| format!("`{t}`: {e}"))
    };
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let v = num(s)?;
            (v, v)
        }
    };
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok(a..=b)
}

fn ensure_within(n_max: usize, precision: usize) -> Result<()> {
    if n_max > precision {
        return Err(Error::PrecisionTooLow {
            requested: n_max,
            available: precision,
        }
        .into());
    }
    Ok(())
}

fn context(precision: usize) -> Result<Context> {
    Context::new(precision).context("building coefficient tables")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let mut out = io::stdout().lock();
    match &cli.command {
        Command::S2k {
            k,
            n,
            method,
            printed_rho,
        } => {
            let k = *k;
            match method {
                S2kMethod::Bruteforce if !(1..=14).contains(&k) => {
                    return Err(Error::UnsupportedK {
                        k,
                        valid: (1..=14).collect(),
                    }
                    .into())
                }
                S2kMethod::Formula | S2kMethod::Decomposition if !DECOMPOSITION_K.contains(&k) => {
                    return Err(Error::UnsupportedK {
                        k,
                        valid: DECOMPOSITION_K.to_vec(),
                    }
                    .into())
                }
                _ => {}
            }
            ensure_within(*n.end(), cli.precision)?;
            let ctx = context(cli.precision)?;
            let variant = if *printed_rho {
                RhoVariant::Printed
            } else {
                RhoVariant::Eisenstein
            };
            let rows = n
                .clone()
                .map(|n| {
                    let v = match method {
                        S2kMethod::Bruteforce => ctx.s2k_bruteforce(k, n)?.to_string(),
                        S2kMethod::Formula => ctx.s2k_formula(k, n, variant)?.to_string(),
                        S2kMethod::Decomposition => ctx.s2k_decomposition(k, n)?.to_string(),
                    };
                    Ok((n, v))
                })
                .collect::<Result<Vec<_>>>()?;
            write_values(&mut out, cli.format, &rows)?;
        }
        Command::Tau { n, method } => {
            if *n.start() == 0 {
                bail!("tau is defined for n >= 1");
            }
            ensure_within(*n.end(), cli.precision)?;
            let ctx = context(cli.precision)?;
            let rows = n
                .clone()
                .map(|n| {
                    let v = match method {
                        TauMethod::Eta => ctx.tau(n)?.to_string(),
                        TauMethod::PaperFormula => ctx.tau_via_lattice_sums(n)?.to_string(),
                    };
                    Ok((n, v))
                })
                .collect::<Result<Vec<_>>>()?;
            write_values(&mut out, cli.format, &rows)?;
        }
        Command::Lsum { name, n } => {
            let sum: LomadzeSum = name.parse()?;
            ensure_within(*n.end(), cli.precision)?;
            let ctx = context(cli.precision)?;
            let rows = n
                .clone()
                .map(|n| Ok((n, ctx.lomadze(sum, n)?.to_string())))
                .collect::<Result<Vec<_>>>()?;
            write_values(&mut out, cli.format, &rows)?;
        }
        Command::Verify {
            all,
            identity,
            nmax,
            strict,
        } => {
            let selection: Vec<Identity> = if *all {
                Identity::ALL.to_vec()
            } else {
                identity
                    .iter()
                    .map(|s| s.parse())
                    .collect::<std::result::Result<_, _>>()?
            };
            let n_max = nmax.unwrap_or(cli.precision);
            ensure_within(n_max, cli.precision)?;
            let ctx = context(cli.precision)?;
            let reports = ctx.verify_all(n_max, &selection)?;
            write_reports(&mut out, cli.format, &ctx, &selection, &reports, *strict)?;
            out.flush()?;
            if identities::any_failure(&reports, *strict) {
                let failed: Vec<&str> = reports
                    .iter()
                    .filter(|r| r.fails(*strict))
                    .map(|r| r.name.as_str())
                    .collect();
                eprintln!("failed: {}", failed.join(", "));
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::RhoTable { nmax } => {
            ensure_within(*nmax, cli.precision)?;
            let ctx = context(cli.precision)?;
            let rows = ctx.rho_star_table(*nmax)?;
            match cli.format {
                Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&rows)?)?,
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(&mut out);
                    w.write_record(["ell", "n", "printed", "implied", "difference", "eisenstein_closed_form"])?;
                    for r in &rows {
                        w.write_record([
                            r.ell.to_string(),
                            r.n.to_string(),
                            r.printed.to_string(),
                            r.implied.to_string(),
                            r.difference.to_string(),
                            r.eisenstein_closed_form.to_string(),
                        ])?;
                    }
                    w.flush()?;
                }
                Format::Table => {
                    writeln!(
                        out,
                        "{:>3} {:>4} {:>22} {:>22} {:>22}  closed form",
                        "l", "n", "printed", "implied", "difference"
                    )?;
                    for r in &rows {
                        writeln!(
                            out,
                            "{:>3} {:>4} {:>22} {:>22} {:>22}  {}",
                            r.ell,
                            r.n,
                            r.printed,
                            r.implied,
                            r.difference,
                            if r.eisenstein_closed_form { "yes" } else { "no" }
                        )?;
                    }
                }
            }
        }
        Command::List => {
            writeln!(out, "identities:")?;
            for id in Identity::ALL {
                writeln!(out, "  {id}")?;
            }
            writeln!(out, "lattice sums:")?;
            for s in LomadzeSum::ALL {
                writeln!(out, "  {s}")?;
            }
        }
    }
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn write_values(out: &mut impl Write, format: Format, rows: &[(usize, String)]) -> Result<()> {
    match format {
        Format::Json => {
            let arr: Vec<_> = rows.iter().map(|(n, v)| json!({ "n": n, "value": v })).collect();
            writeln!(out, "{}", serde_json::to_string_pretty(&arr)?)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["n", "value"])?;
            for (n, v) in rows {
                w.write_record([n.to_string(), v.clone()])?;
            }
            w.flush()?;
        }
        Format::Table if rows.len() == 1 => writeln!(out, "{}", rows[0].1)?,
        Format::Table => {
            let width = rows.last().map_or(1, |(n, _)| n.to_string().len());
            for (n, v) in rows {
                writeln!(out, "{n:>width$}  {v}")?;
            }
        }
    }
    Ok(())
}

fn write_reports(
    out: &mut impl Write,
    format: Format,
    ctx: &Context,
    selection: &[Identity],
    reports: &[IdentityReport],
    strict: bool,
) -> Result<()> {
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(reports)?)?,
        Format::Csv => {
            let multi = reports.len() > 1;
            let mut w = csv::Writer::from_writer(out);
            if multi {
                w.write_record(["identity", "n", "lhs", "rhs", "match"])?;
            } else {
                w.write_record(["n", "lhs", "rhs", "match"])?;
            }
            for (&id, report) in selection.iter().zip(reports) {
                let range = report.convention.unwrap_or(SumRange::Positive);
                for entry in report.entries() {
                    let (n, lhs, rhs, ok) = match entry {
                        Entry::Match(n) => {
                            let (l, r) = ctx.sides_in(id, n, range)?;
                            (n, l, r, true)
                        }
                        Entry::Mismatch(m) => (m.n, m.lhs.clone(), m.rhs.clone(), false),
                    };
                    let mut rec = Vec::with_capacity(5);
                    if multi {
                        rec.push(report.name.clone());
                    }
                    rec.extend([n.to_string(), lhs.to_string(), rhs.to_string(), ok.to_string()]);
                    w.write_record(&rec)?;
                }
            }
            w.flush()?;
        }
        Format::Table => {
            let width = reports.iter().map(|r| r.name.len()).max().unwrap_or(0);
            for r in reports {
                let mut line = format!(
                    "{:<width$}  {:<10}  n={}..{}  {}/{} match",
                    r.name,
                    r.status.to_string(),
                    r.n_min,
                    r.n_max,
                    (r.n_max + 1).saturating_sub(r.n_min) - r.mismatches.len(),
                    (r.n_max + 1).saturating_sub(r.n_min),
                );
                if let Some(c) = &r.convention {
                    line.push_str(&format!("  [{c}]"));
                }
                if let Some(c) = &r.constant_term {
                    line.push_str(&format!("  q^0 {}", if c.matches { "ok" } else { "differs" }));
                }
                if let Some(m) = r.first_mismatch() {
                    line.push_str(&format!("  first n={}: {} vs {}", m.n, m.lhs, m.rhs));
                }
                writeln!(out, "{line}")?;
                if let Some(note) = &r.note {
                    writeln!(out, "{:<width$}  note: {note}", "")?;
                }
            }
            let failing = reports.iter().filter(|r| r.fails(strict)).count();
            writeln!(
                out,
                "{} checked, {} failing{}",
                reports.len(),
                failing,
                if strict { " (strict)" } else { "" }
            )?;
        }
    }
    Ok(())
}
