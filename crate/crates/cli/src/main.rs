//! `latol`: checks 2-uniform tolerances on finite lattices.
//!
//! Inputs are given as `key=value` arguments, e.g.
//! `latol permutes lattice=c4.lat T=a.tol S=b.tol`.
//!
//! Exit status: 0 on success, 1 when a check comes out negative or a
//! verification run finds violations, 2 on bad input.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use latol_core::amicability::{amicability_violations, classify, two_fold_roles, ClassifiedTolerance};
use latol_core::canon::canonical_hex;
use latol_core::enumerate::{enumerate_lattices, DEFAULT_CEILING};
use latol_core::format::{parse_lattice, parse_relation, to_dot};
use latol_core::tolerance::{
    blocks, compatibility_failure, enumerate_two_uniform, permutes, require_two_uniform,
};
use latol_core::verify::{run_catalog, VerifyOptions};
use latol_core::witness::WitnessBuilder;
use latol_core::{BinaryRelation, Error, Lattice};

#[derive(Parser)]
#[command(name = "latol", version, about = "Tolerances, amicability and permutability on finite lattices")]
struct Cli {
    /// Also write the standard output to this file.
    #[arg(long, global = true, value_name = "PATH")]
    report: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Is T a tolerance, and is it 2-uniform? (lattice= T=)
    CheckTolerance(Inputs),
    /// Maximal blocks of a tolerance. (lattice= T=)
    Blocks(Inputs),
    /// Neighbour roles of T, or two-fold roles of the pair T, S. (lattice= T= [S=])
    Classify(Inputs),
    /// Checks the amicability conditions. (lattice= T= S=)
    Amicable(Inputs),
    /// Checks T∘S = S∘T and amicability. (lattice= T= S=)
    Permutes(Inputs),
    /// Builds d with (a,d) ∈ S and (d,b) ∈ T. (lattice= T= S= a= b=)
    Witness {
        #[command(flatten)]
        inputs: Inputs,
        /// Run the construction from every middle element u.
        #[arg(long)]
        all_u: bool,
    },
    /// All 2-uniform tolerances of a lattice. (lattice=)
    EnumerateTolerances(Inputs),
    /// All lattices of a given size up to isomorphism, as canonical hex. (n=)
    EnumerateLattices(Inputs),
    /// Exhaustive check over every lattice with 2..=max-n elements.
    Verify {
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        /// Run the witness construction from every middle element u.
        #[arg(long)]
        all_u: bool,
    },
    /// Graphviz drawing of the Hasse diagram with T and S blocks. (lattice= [T=] [S=])
    ExportDot(Inputs),
}

#[derive(Args)]
struct Inputs {
    #[arg(value_name = "KEY=VALUE")]
    args: Vec<String>,
}

/// Bad flags, unreadable files or malformed input.
struct Failure(String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

struct Outcome {
    text: String,
    negative: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, negative: false }
    }
}

struct Params {
    values: BTreeMap<String, String>,
}

impl Params {
    fn parse(inputs: &Inputs, required: &[&str], optional: &[&str]) -> Result<Self, Failure> {
        let mut values = BTreeMap::new();
        for arg in &inputs.args {
            let Some((key, value)) = arg.split_once('=') else {
                return Err(Failure(format!("expected key=value, found {arg:?}")));
            };
            if !required.contains(&key) && !optional.contains(&key) {
                return Err(Failure(format!("unknown key {key:?}")));
            }
            if values.insert(key.to_string(), value.to_string()).is_some() {
                return Err(Failure(format!("key {key:?} given twice")));
            }
        }
        if let Some(missing) = required.iter().find(|k| !values.contains_key(**k)) {
            return Err(Failure(format!("missing {missing}=<value>")));
        }
        Ok(Params { values })
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    fn number(&self, key: &str) -> Result<Option<usize>, Failure> {
        self.get(key)
            .map(|v| v.parse().map_err(|_| Failure(format!("{key}={v}: not a non-negative integer"))))
            .transpose()
    }

    fn read(&self, key: &str) -> Result<Option<(String, String)>, Failure> {
        let Some(path) = self.get(key) else { return Ok(None) };
        let text = fs::read_to_string(path).map_err(|e| Failure(format!("{path}: {e}")))?;
        Ok(Some((path.to_string(), text)))
    }

    fn lattice(&self) -> Result<Lattice, Failure> {
        let (path, text) = self.read("lattice")?.expect("lattice is a required key");
        parse_lattice(&text).map_err(|e| Failure(format!("{path}: {e}")))
    }

    fn relation(&self, key: &str, lattice: &Lattice) -> Result<Option<BinaryRelation>, Failure> {
        let Some((path, text)) = self.read(key)? else { return Ok(None) };
        parse_relation(&text, lattice.len()).map(Some).map_err(|e| Failure(format!("{path}: {e}")))
    }

    /// Reads a relation that must be a 2-uniform tolerance on `lattice`.
    fn two_uniform(&self, key: &str, lattice: &Lattice) -> Result<Option<BinaryRelation>, Failure> {
        let Some(rel) = self.relation(key, lattice)? else { return Ok(None) };
        require_two_uniform(lattice, &rel).map_err(|e| Failure(format!("{key}: {e}")))?;
        Ok(Some(rel))
    }
}

fn check_tolerance(p: &Params) -> Result<Outcome, Failure> {
    let l = p.lattice()?;
    let t = p.relation("T", &l)?.expect("T is required");
    if let Some(failure) = compatibility_failure(&l, &t)? {
        return Ok(Outcome { text: format!("NOT A TOLERANCE\n{failure}\n"), negative: true });
    }
    let mut text = String::from("TOLERANCE\n");
    let bs = blocks(&l, &t)?;
    match bs.iter().find(|b| b.len() != 2) {
        None => {
            text.push_str("2-UNIFORM\n");
            Ok(Outcome::ok(text))
        }
        Some(bad) => {
            let _ = writeln!(text, "NOT 2-UNIFORM\nblock {bad} has {} elements", bad.len());
            Ok(Outcome { text, negative: true })
        }
    }
}

fn blocks_cmd(p: &Params) -> Result<Outcome, Failure> {
    let l = p.lattice()?;
    let t = p.relation("T", &l)?.expect("T is required");
    let bs: Vec<String> = blocks(&l, &t)?.iter().map(ToString::to_string).collect();
    Ok(Outcome::ok(format!("{}\n", bs.join(" "))))
}

fn classify_cmd(p: &Params) -> Result<Outcome, Failure> {
    let l = p.lattice()?;
    let t = p.two_uniform("T", &l)?.expect("T is required");
    let mut text = String::new();
    match p.two_uniform("S", &l)? {
        None => {
            for role in classify(&l, &t)? {
                let _ = writeln!(text, "{role}");
            }
        }
        Some(s) => {
            for role in two_fold_roles(&l, &t, &s)? {
                let _ = writeln!(text, "{role}");
            }
        }
    }
    Ok(Outcome::ok(text))
}

fn amicability_lines(
    l: &Lattice,
    t: &BinaryRelation,
    s: &BinaryRelation,
    text: &mut String,
) -> Result<bool, Failure> {
    let violations = amicability_violations(l, t, s)?;
    if violations.is_empty() {
        text.push_str("AMICABLE\n");
        return Ok(true);
    }
    text.push_str("NOT AMICABLE\n");
    for v in &violations {
        let _ = writeln!(text, "{v}");
    }
    Ok(false)
}

fn amicable_cmd(p: &Params) -> Result<Outcome, Failure> {
    let l = p.lattice()?;
    let t = p.two_uniform("T", &l)?.expect("T is required");
    let s = p.two_uniform("S", &l)?.expect("S is required");
    let mut text = String::new();
    let ok = amicability_lines(&l, &t, &s, &mut text)?;
    Ok(Outcome { text, negative: !ok })
}

fn permutes_cmd(p: &Params) -> Result<Outcome, Failure> {
    let l = p.lattice()?;
    let t = p.two_uniform("T", &l)?.expect("T is required");
    let s = p.two_uniform("S", &l)?.expect("S is required");
    let mut text = String::new();
    let commute = permutes(&t, &s)?;
    if commute {
        text.push_str("PERMUTING\n");
    } else {
        text.push_str("NOT PERMUTING\n");
        let ts = t.compose(&s)?;
        let st = s.compose(&t)?;
        for (a, b) in ts.difference(&st) {
            let _ = writeln!(text, "({a},{b}) in T∘S but not in S∘T");
        }
        for (a, b) in st.difference(&ts) {
            let _ = writeln!(text, "({a},{b}) in S∘T but not in T∘S");
        }
    }
    let amicable = amicability_lines(&l, &t, &s, &mut text)?;
    Ok(Outcome { text, negative: !(commute && amicable) })
}

fn witness_cmd(p: &Params, all_u: bool) -> Result<Outcome, Failure> {
    let l = p.lattice()?;
    let t = p.two_uniform("T", &l)?.expect("T is required");
    let s = p.two_uniform("S", &l)?.expect("S is required");
    let a = p.number("a")?.expect("a is required");
    let b = p.number("b")?.expect("b is required");
    for (key, x) in [("a", a), ("b", b)] {
        if x >= l.len() {
            return Err(Failure(format!("{key}={x}: out of range for {} elements", l.len())));
        }
    }
    let ct = ClassifiedTolerance::new(&l, &t)?;
    let cs = ClassifiedTolerance::new(&l, &s)?;
    let mut builder = WitnessBuilder::new(&l, &ct, &cs);
    let traces = if all_u { builder.construct_all(a, b) } else { builder.construct(a, b).map(|w| vec![w]) };
    match traces {
        Ok(traces) => {
            let mut text = String::new();
            for w in traces {
                let _ = writeln!(text, "{w}");
            }
            Ok(Outcome::ok(text))
        }
        Err(e @ Error::NotInProduct(..)) => Err(e.into()),
        Err(e @ (Error::NotAmicable(_) | Error::ProofStep(_))) => {
            let mut text = format!("NO WITNESS\n{e}\n");
            amicability_lines(&l, &t, &s, &mut text)?;
            Ok(Outcome { text, negative: true })
        }
        Err(e) => Err(e.into()),
    }
}

fn enumerate_tolerances_cmd(p: &Params) -> Result<Outcome, Failure> {
    let l = p.lattice()?;
    let tols = enumerate_two_uniform(&l);
    let mut text = String::new();
    for t in &tols {
        let _ = writeln!(text, "{t}");
    }
    let _ = writeln!(text, "tolerances={}", tols.len());
    Ok(Outcome::ok(text))
}

fn enumerate_lattices_cmd(p: &Params) -> Result<Outcome, Failure> {
    let n = p.number("n")?.expect("n is required");
    if !(1..=DEFAULT_CEILING).contains(&n) {
        return Err(Failure(format!("n={n}: supported sizes are 1..={DEFAULT_CEILING}")));
    }
    let lattices = enumerate_lattices(n)?;
    let mut text = String::new();
    for l in &lattices {
        let _ = writeln!(text, "{}", canonical_hex(l));
    }
    let _ = writeln!(text, "lattices={}", lattices.len());
    Ok(Outcome::ok(text))
}

fn verify_cmd(max_n: usize, all_u: bool) -> Result<Outcome, Failure> {
    if !(2..=DEFAULT_CEILING).contains(&max_n) {
        return Err(Failure(format!("--max-n {max_n}: supported range is 2..={DEFAULT_CEILING}")));
    }
    let report = run_catalog(max_n, VerifyOptions { all_u })?;
    Ok(Outcome { text: report.to_string(), negative: !report.is_clean() })
}

fn export_dot_cmd(p: &Params) -> Result<Outcome, Failure> {
    let l = p.lattice()?;
    let t = p.two_uniform("T", &l)?;
    let s = p.two_uniform("S", &l)?;
    Ok(Outcome::ok(to_dot(&l, t.as_ref(), s.as_ref())))
}

fn run(command: &Command) -> Result<Outcome, Failure> {
    match command {
        Command::CheckTolerance(i) => check_tolerance(&Params::parse(i, &["lattice", "T"], &[])?),
        Command::Blocks(i) => blocks_cmd(&Params::parse(i, &["lattice", "T"], &[])?),
        Command::Classify(i) => classify_cmd(&Params::parse(i, &["lattice", "T"], &["S"])?),
        Command::Amicable(i) => amicable_cmd(&Params::parse(i, &["lattice", "T", "S"], &[])?),
        Command::Permutes(i) => permutes_cmd(&Params::parse(i, &["lattice", "T", "S"], &[])?),
        Command::Witness { inputs, all_u } => {
            witness_cmd(&Params::parse(inputs, &["lattice", "T", "S", "a", "b"], &[])?, *all_u)
        }
        Command::EnumerateTolerances(i) => enumerate_tolerances_cmd(&Params::parse(i, &["lattice"], &[])?),
        Command::EnumerateLattices(i) => enumerate_lattices_cmd(&Params::parse(i, &["n"], &[])?),
        Command::Verify { max_n, all_u } => verify_cmd(*max_n, *all_u),
        Command::ExportDot(i) => export_dot_cmd(&Params::parse(i, &["lattice"], &["T", "S"])?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(outcome) => {
            print!("{}", outcome.text);
            if let Some(path) = &cli.report {
                if let Err(e) = fs::write(path, &outcome.text) {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            ExitCode::from(u8::from(outcome.negative))
        }
        Err(Failure(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
