//! Command-line front end. [`run`] parses arguments, executes one subcommand against a fixture,
//! writes a text or JSON report, and returns the process exit code: 0 when everything passes,
//! 1 when a check fails, 2 for unreadable input.

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fixture::{bundled, Fixture, BUNDLED};
use crate::gamma::Gamma;
use crate::grassmann::GrassmannAlgebra;
use crate::hcp::{centralizer_pair, normalizer_pair, SubPairKind, SubPairResult};
use crate::linalg::Matrix;
use crate::report::Report;
use crate::suites;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "supergroup", version, about = "Supergroups from Harish-Chandra pairs: checks and functor-point arithmetic")]
pub struct Cli {
    /// Fixture file, or the name of a bundled fixture.
    #[arg(long, global = true, default_value = "osp12")]
    pub fixture: String,
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Number of Grassmann generators; defaults to the fixture's value.
    #[arg(long = "grassmann-n", global = true)]
    pub grassmann_n: Option<u32>,
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every structural condition suite, a seeded group-law sample and the duality suite.
    Check {
        /// Random triples for the group-law sample.
        #[arg(long, default_value_t = 50)]
        triples: usize,
    },
    /// Multiply two serialized elements `{"g": [[..]], "a": [..]}`.
    Mul { left: String, right: String },
    /// Invert a serialized element.
    Inv { element: String },
    /// Normalizer of a named sub-pair, with witness log.
    Normalizer {
        #[arg(long)]
        sub: String,
    },
    /// Centralizer of a named sub-pair, with witness log.
    Centralizer {
        #[arg(long)]
        sub: String,
    },
    /// Center of the pair, with witness log.
    Center,
    /// Rebuild the pair from the supergroup and compare.
    Roundtrip,
    /// Gram matrices of the exterior pairing under both sign conventions.
    PairingTable {
        #[arg(long, default_value_t = 2)]
        rank: usize,
    },
    /// Compare rewriting with the pair model on all words up to a length.
    Oracle {
        #[arg(long = "max-len", default_value_t = 3)]
        max_len: usize,
    },
    /// List the bundled fixtures.
    Fixtures,
}

/// Loads `source` as a file if it exists, otherwise as a bundled fixture name.
pub fn load_fixture(source: &str) -> Result<Fixture> {
    if Path::new(source).exists() {
        Fixture::load(source)
    } else if BUNDLED.iter().any(|(n, _)| *n == source) {
        bundled(source)
    } else {
        Err(Error::Parse(format!("'{source}' is neither a file nor a bundled fixture")))
    }
}

struct Output {
    text: String,
    json: Value,
    ok: bool,
}

fn report_output(title: String, report: Report, extra: Value) -> Output {
    let text = format!("{title}\n{report}");
    let mut json = json!({ "title": title, "report": report.to_json() });
    if let (Value::Object(j), Value::Object(e)) = (&mut json, extra) {
        j.extend(e);
    }
    Output { text, json, ok: report.is_ok() }
}

fn parse_json(text: &str) -> Result<Value> {
    let t = if Path::new(text).exists() {
        std::fs::read_to_string(text).map_err(|e| Error::Parse(format!("{text}: {e}")))?
    } else {
        text.to_string()
    };
    serde_json::from_str(&t).map_err(|e| Error::Parse(format!("element JSON: {e}")))
}

fn format_span(fx: &Fixture, rows: &Matrix, odd: bool) -> Vec<String> {
    let names = if odd { fx.pair.odd_names() } else { fx.pair.even_names() };
    rows.iter().map(|v| crate::liesuper::format_combination(v, |i| names[i].clone())).collect()
}

fn sub_pair_output(fx: &Fixture, gamma: &Gamma, alg: GrassmannAlgebra, sub_name: Option<&str>, kind: SubPairKind) -> Result<Output> {
    let (result, witness, label): (SubPairResult, Report, String) = match sub_name {
        None => {
            let (res, rep) = suites::center_report(fx, gamma, alg)?;
            (res, rep, "center".to_string())
        }
        Some(name) => {
            let sub = fx.sub_pair(name).ok_or_else(|| Error::Parse(format!("fixture has no sub-pair '{name}'")))?;
            let res = match kind {
                SubPairKind::Normalizer => normalizer_pair(&fx.pair, sub)?,
                SubPairKind::Centralizer => centralizer_pair(&fx.pair, sub)?,
            };
            let rep = suites::witness_report(gamma, sub, kind, &res, alg)?;
            (res, rep, format!("{kind} of {name}"))
        }
    };
    let lie = format_span(fx, &result.lie_basis, false);
    let odd = format_span(fx, &result.odd_basis, true);
    let inv = format_span(fx, &result.invariant_part, true);
    let tr = format_span(fx, &result.transporter_part, true);
    let title = format!(
        "{label} in {}\nLie part (dim {}): {}\nodd part (dim {}): {}\ninvariant part: {}\ntransporter part: {}\nwitness log:",
        fx.name(),
        lie.len(),
        brace(&lie),
        odd.len(),
        brace(&odd),
        brace(&inv),
        brace(&tr)
    );
    let extra = json!({
        "lie_dim": lie.len(), "lie_basis": lie,
        "odd_dim": odd.len(), "odd_basis": odd,
        "invariant_part": inv, "transporter_part": tr,
    });
    Ok(report_output(title, witness, extra))
}

fn brace(items: &[String]) -> String {
    format!("span{{{}}}", items.join(", "))
}

fn execute(cli: &Cli) -> Result<Output> {
    if let Command::Fixtures = cli.command {
        let names: Vec<&str> = BUNDLED.iter().map(|(n, _)| *n).collect();
        return Ok(Output { text: names.join("\n"), json: json!({ "fixtures": names }), ok: true });
    }
    if let Command::PairingTable { rank } = cli.command {
        if rank > 6 {
            return Err(Error::Parse(format!("rank {rank} is too large for a printed table")));
        }
        let fx = load_fixture(&cli.fixture)?;
        let tables = suites::pairing_tables(fx.field(), rank);
        let mut text = String::new();
        let mut js = serde_json::Map::new();
        for (conv, m) in &tables {
            text.push_str(&format!("{conv} convention, rank {rank}:\n"));
            let rows: Vec<Vec<String>> = m.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
            for r in &rows {
                text.push_str(&format!("  [{}]\n", r.join(", ")));
            }
            js.insert(conv.clone(), json!(rows));
        }
        return Ok(Output { text, json: json!({ "rank": rank, "tables": js }), ok: true });
    }

    let fx = load_fixture(&cli.fixture)?;
    let n = cli.grassmann_n.unwrap_or(fx.grassmann_n());
    if n > 20 {
        return Err(Error::Parse(format!("--grassmann-n {n} exceeds the supported 20 generators")));
    }
    let alg = GrassmannAlgebra::new(n, fx.field())?;
    let gamma = Gamma::new(fx.pair.clone())?;
    match &cli.command {
        Command::Check { triples } => {
            let mut r = suites::condition_suite(&fx, &gamma, alg);
            r.merge(suites::group_law_suite(&gamma, alg, *triples, cli.seed));
            r.merge(suites::duality_suite()?);
            Ok(report_output(format!("check {} (seed {})", fx.name(), cli.seed), r, json!({})))
        }
        Command::Mul { left, right } => {
            let p = gamma.element_from_json(alg, &parse_json(left)?)?;
            let q = gamma.element_from_json(alg, &parse_json(right)?)?;
            let out = gamma.mul(&p, &q)?;
            Ok(Output { text: out.to_json().to_string(), json: json!({ "product": out.to_json() }), ok: true })
        }
        Command::Inv { element } => {
            let p = gamma.element_from_json(alg, &parse_json(element)?)?;
            let out = gamma.inv(&p)?;
            Ok(Output { text: out.to_json().to_string(), json: json!({ "inverse": out.to_json() }), ok: true })
        }
        Command::Normalizer { sub } => sub_pair_output(&fx, &gamma, alg, Some(sub), SubPairKind::Normalizer),
        Command::Centralizer { sub } => sub_pair_output(&fx, &gamma, alg, Some(sub), SubPairKind::Centralizer),
        Command::Center => sub_pair_output(&fx, &gamma, alg, None, SubPairKind::Centralizer),
        Command::Roundtrip => {
            let r = gamma.roundtrip_check(&fx.pair, alg);
            Ok(report_output(format!("roundtrip {}", fx.name()), r, json!({})))
        }
        Command::Oracle { max_len } => {
            if *max_len > 6 {
                return Err(Error::Parse(format!("--max-len {max_len} is too large")));
            }
            let r = suites::oracle_suite(&fx, &gamma, alg, *max_len)?;
            Ok(report_output(format!("oracle {} (words up to length {max_len})", fx.name()), r, json!({})))
        }
        Command::PairingTable { .. } | Command::Fixtures => unreachable!("handled above"),
    }
}

/// Runs the command line and returns the exit code. Output goes to `out`.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(out, "{}", e.render());
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(o) => {
            let body = if cli.json { serde_json::to_string_pretty(&o.json).unwrap_or_default() } else { o.text };
            let _ = writeln!(out, "{}", body.trim_end());
            if o.ok {
                EXIT_OK
            } else {
                EXIT_FAILED
            }
        }
        Err(e) => {
            if cli.json {
                let _ = writeln!(out, "{}", json!({ "error": e.to_string() }));
            } else {
                let _ = writeln!(out, "error: {e}");
            }
            EXIT_INPUT
        }
    }
}

#[cfg(test)]
mod tests;
