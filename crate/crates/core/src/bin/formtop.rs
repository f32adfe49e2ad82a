use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use formtop::forcing::{check_derivation, force, parse_formula, Env, ForceVerdict};
use formtop::io::{read_json, RelationDoc, Report, SpaceDoc, TruncatedDoc};
use formtop::rules::{bar_rule, continuity_rule, fan_rule, RelationTable};
use formtop::site::Fuel;
use formtop::spaces::{Bar, BarDoc, SpaceKind};
use formtop::suites::{run_suite, SUITES};
use formtop::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "formtop", version, about = "Forcing, rule extraction and invariant checks over truncated formal spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a formula at a basic open.
    Force(ForceArgs),
    /// Extract a uniform bound from a decidable bar over Cantor space.
    Fan(BarArgs),
    /// Conclude the root from an inductive monotone bar over Baire space.
    Bar(BarArgs),
    /// Extract a continuous function and modulus from a relation table.
    Continuity(ContinuityArgs),
    /// Run a seeded invariant suite, or `all` of them.
    Check(CheckArgs),
}

#[derive(Args, Debug, Serialize)]
struct Common {
    #[arg(long, default_value_t = 50_000_000)]
    fuel: usize,
    /// Write the JSON report here and a summary to stdout.
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct ForceArgs {
    /// Space document; defaults to the double of Cantor space of `--depth`.
    #[arg(long)]
    space: Option<PathBuf>,
    /// A formula file, or the formula itself.
    #[arg(long)]
    formula: String,
    /// Label of the basic open; defaults to the top element.
    #[arg(long)]
    at: Option<String>,
    #[arg(long, default_value_t = 3)]
    depth: usize,
    #[arg(long, default_value_t = 8)]
    nmax: u32,
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

#[derive(Args, Debug, Serialize)]
struct BarArgs {
    #[arg(long)]
    bar: PathBuf,
    /// Re-truncate the bar's space at this depth.
    #[arg(long)]
    depth: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

#[derive(Args, Debug, Serialize)]
struct ContinuityArgs {
    /// `shift`, `identity`, or a relation document.
    #[arg(long)]
    relation: String,
    #[arg(long, default_value_t = 2)]
    branch: u32,
    /// Length of the image sequences for the built-in tables.
    #[arg(long, default_value_t = 2)]
    depth: usize,
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

#[derive(Args, Debug, Serialize)]
struct CheckArgs {
    /// One of the suite names, or `all`.
    suite: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, out) = match &cli.command {
        Command::Force(a) => ("force", &a.common.out),
        Command::Fan(a) => ("fan", &a.common.out),
        Command::Bar(a) => ("bar", &a.common.out),
        Command::Continuity(a) => ("continuity", &a.common.out),
        Command::Check(a) => ("check", &a.out),
    };
    let result = match &cli.command {
        Command::Force(a) => run_force(a),
        Command::Fan(a) => run_fan(a),
        Command::Bar(a) => run_bar(a),
        Command::Continuity(a) => run_continuity(a),
        Command::Check(a) => run_check(a),
    };
    let (report, summary, code) = match result {
        Ok((r, s)) => {
            let code = if r.passed() { 0 } else { 1 };
            (r, s, code)
        }
        Err(e) => {
            let mut r = match &cli.command {
                Command::Force(a) => Report::new(name, a),
                Command::Fan(a) | Command::Bar(a) => Report::new(name, a),
                Command::Continuity(a) => Report::new(name, a),
                Command::Check(a) => Report::new(name, a),
            };
            r.verdict("error", false, e.to_string());
            (r, format!("error: {e}"), 2)
        }
    };
    let json = report.to_json();
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &json) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
            let _ = writeln!(std::io::stdout(), "{summary}");
        }
        None => {
            let _ = std::io::stdout().write_all(json.as_bytes());
            let _ = writeln!(std::io::stderr(), "{summary}");
        }
    }
    ExitCode::from(code)
}

type Outcome = Result<(Report, String)>;

fn formula_text(arg: &str) -> Result<String> {
    let p = Path::new(arg);
    if p.is_file() {
        std::fs::read_to_string(p).map_err(|e| Error::Input(format!("{}: {e}", p.display())))
    } else {
        Ok(arg.to_string())
    }
}

fn run_force(a: &ForceArgs) -> Outcome {
    let doc = match &a.space {
        Some(p) => read_json::<SpaceDoc>(p)?,
        None => SpaceDoc::Truncated(TruncatedDoc {
            kind: SpaceKind::Cantor,
            branch: 2,
            depth: a.depth,
            double: true,
            points: None,
        }),
    };
    let space = doc.load()?;
    let ctx = space.forcing_context(a.nmax)?;
    let phi = parse_formula(formula_text(&a.formula)?.trim())?;
    let at = match &a.at {
        Some(l) => space.element(l)?,
        None => ctx
            .space()
            .basis()
            .elems()
            .find(|&e| ctx.space().basis().up(e).len() == 1)
            .ok_or_else(|| Error::Input("no top element".into()))?,
    };
    let label = match ctx.space().basis().label(at) {
        "" => "⟨⟩".to_string(),
        l => l.to_string(),
    };
    let verdict = force(&ctx, at, &phi, &Env::new(), Fuel(a.common.fuel))?;
    let mut r = Report::new("force", a);
    let summary = match &verdict {
        ForceVerdict::Holds(d) => {
            let ok = check_derivation(&ctx, at, &phi, &Env::new(), d);
            r.verdict("derivation rechecks", ok, format!("{} nodes", d.size()));
            format!("{label} forces {phi}")
        }
        ForceVerdict::FailsWithinFuel { exhausted } => {
            r.verdict(
                "decided within fuel",
                !exhausted,
                if *exhausted { "fuel exhausted" } else { "not forced" },
            );
            format!("{label} does not force {phi} (FailsWithinFuel, exhausted: {exhausted})")
        }
    };
    r.witness(&serde_json::json!({"at": label, "formula": phi.to_string(), "verdict": verdict}));
    Ok((r, summary))
}

fn load_bar(a: &BarArgs) -> Result<Bar> {
    let mut doc: BarDoc = read_json(&a.bar)?;
    if let Some(d) = a.depth {
        doc.depth = d;
    }
    Bar::from_document(&doc)
}

fn run_fan(a: &BarArgs) -> Outcome {
    let bar = load_bar(a)?;
    let (n, t) = fan_rule(&bar, Fuel(a.common.fuel))?;
    let mut r = Report::new("fan", a);
    let failures = t.recheck(&bar);
    r.verdict("transcript rechecks", failures.is_empty(), failures.join("; "));
    let holds = bar.space().level(n).iter().all(|v| bar.holds(v));
    r.verdict("phi holds on every sequence of length n", holds, format!("n={n}"));
    r.witness(&t);
    let stages: Vec<String> = t
        .stages
        .iter()
        .map(|s| format!("  {} via {} at {}", s.v, s.witness, s.point))
        .collect();
    Ok((r, format!("n={n}\ncover depth {}\n{}", t.cover_depth, stages.join("\n"))))
}

fn run_bar(a: &BarArgs) -> Outcome {
    let bar = load_bar(a)?;
    let t = bar_rule(&bar, Fuel(a.common.fuel))?;
    let mut r = Report::new("bar", a);
    let failures = t.recheck(&bar);
    r.verdict("transcript rechecks", failures.is_empty(), failures.join("; "));
    r.verdict("phi holds at the root", t.conclusion, "");
    r.witness(&t);
    Ok((
        r,
        format!(
            "phi(<>) = {}\ncover of {} pieces, {} induction steps",
            t.conclusion,
            t.cover.len(),
            t.induction.steps.len()
        ),
    ))
}

fn run_continuity(a: &ContinuityArgs) -> Outcome {
    let table = match a.relation.as_str() {
        "shift" => RelationTable::shift(a.branch, a.depth),
        "identity" => RelationTable::identity(a.branch, a.depth),
        path => read_json::<RelationDoc>(Path::new(path))?.to_table()?,
    };
    let t = continuity_rule(&table, Fuel(a.common.fuel))?;
    let mut r = Report::new("continuity", a);
    let failures = t.recheck(&table, Fuel(a.common.fuel));
    r.verdict("transcript rechecks", failures.is_empty(), failures.join("; "));
    let ok = t.points.iter().all(|o| o.rel_holds && o.modulus_valid);
    r.verdict("f satisfies the table with a valid modulus", ok, format!("{} points", t.points.len()));
    r.witness(&t);
    let lines: Vec<String> = t
        .points
        .iter()
        .map(|o| format!("  f({}) = {:?}, modulus {:?}", o.point, o.f, o.modulus))
        .collect();
    Ok((r, format!("{}\n{}", table.name(), lines.join("\n"))))
}

fn run_check(a: &CheckArgs) -> Outcome {
    let names: Vec<&str> = if a.suite == "all" {
        SUITES.to_vec()
    } else {
        vec![a.suite.as_str()]
    };
    let mut r = Report::new("check", a);
    let mut lines = Vec::new();
    for name in names {
        let sub = run_suite(name, a.seed, a.samples)?;
        for v in sub.verdicts {
            lines.push(format!("{} {name}: {}", if v.pass { "PASS" } else { "FAIL" }, v.name));
            r.verdict(&format!("{name}: {}", v.name), v.pass, v.detail);
        }
        r.witnesses.extend(sub.witnesses);
    }
    Ok((r, lines.join("\n")))
}
