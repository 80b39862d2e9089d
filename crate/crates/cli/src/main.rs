//! `forcekit`: batch driver over the forcekit library.
//!
//! Exit codes: 0 success (a false verdict is still success), 2 input error,
//! 3 precondition violation with a witness, 4 oracle contract violation.

mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use forcekit::boolalg::{parse_subset, AlgebraDoc};
use forcekit::cohen::{run_demo, CohenError, DemoConfig};
use forcekit::laws::{check_all, LawReport};
use forcekit::logic::{self, bval, forces, models, Formula, LogicError, NameContext, TransitiveModel};
use forcekit::names::{NameDoc, NameTable};
use forcekit::order::{
    build_generic, is_dense, ro_completion, DenseOracle, ExplicitDense, FinPoset, GenericError, NonzeroAlgebra,
    OrderError,
};
use forcekit::{Element, FinBoolAlg};
use serde::Deserialize;

use report::{command_line, Inputs, Report};

#[derive(Parser, Debug)]
#[command(name = "forcekit", version, about = "Finite-scale forcing toolkit")]
struct Cli {
    /// Emit the structured report as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Run the boolean-algebra law suite on a powerset algebra.
    Laws {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
        atoms: u8,
        /// JSON list of element literals forming an ideal, e.g. `[[], ["a"]]`.
        #[arg(long)]
        quotient: Option<PathBuf>,
    },
    /// Regular-open completion of a finite poset.
    Complete {
        #[arg(long)]
        poset: PathBuf,
    },
    /// Build a generic filter against an explicit list of dense sets.
    Generic {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        dense: PathBuf,
        /// Starting condition: `1` or an element literal.
        #[arg(long, default_value = "1")]
        start: String,
    },
    /// Cohen chain construction and slice matrix.
    CohenDemo {
        #[arg(long)]
        config: PathBuf,
    },
    /// Classical satisfaction over a transitive model. `@name` selects an axiom.
    Eval {
        #[arg(long)]
        model: PathBuf,
        formula: String,
    },
    /// Boolean truth value of a formula over a name table.
    Bval {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        names: PathBuf,
        formula: String,
    },
    /// Whether a condition forces a formula.
    Force {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        names: PathBuf,
        #[arg(long)]
        cond: String,
        formula: String,
    },
}

enum Failure {
    Input(String),
    Precondition(Box<Report>, String),
    Oracle(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Precondition(..) => 3,
            Failure::Oracle(_) => 4,
        }
    }
}

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

fn read(path: &Path, label: &str, inputs: &mut Inputs) -> Result<String, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    inputs.add(label, text.as_bytes());
    Ok(text)
}

fn load_algebra(path: &Path, inputs: &mut Inputs) -> Result<FinBoolAlg, Failure> {
    let text = read(path, "algebra", inputs)?;
    AlgebraDoc::from_json(&text).and_then(|d| d.build()).map_err(input)
}

fn load_names(path: &Path, alg: &FinBoolAlg, inputs: &mut Inputs) -> Result<NameTable<FinBoolAlg>, Failure> {
    let text = read(path, "names", inputs)?;
    NameDoc::from_json(&text).and_then(|d| d.build(alg)).map_err(input)
}

/// Renders a syntax error with a caret under the offending offset.
fn formula_error(src: &str, e: LogicError) -> Failure {
    match e {
        LogicError::Syntax { pos, msg } => {
            let col = src[..pos.min(src.len())].chars().count();
            Failure::Input(format!("syntax error at offset {pos}: {msg}\n  {src}\n  {}^", " ".repeat(col)))
        }
        other => input(other),
    }
}

fn parse_formula(src: &str, inputs: &mut Inputs) -> Result<Formula, Failure> {
    inputs.add("formula", src.as_bytes());
    if let Some(name) = src.strip_prefix('@') {
        return logic::axiom(name.trim()).map_err(input);
    }
    match logic::parse(src) {
        Ok(f) => Ok(f),
        Err(e) => {
            // `[[φ]]` is accepted as a spelling of `φ`
            let t = src.trim();
            if let Some(inner) = t.strip_prefix("[[").and_then(|s| s.strip_suffix("]]")) {
                if let Ok(f) = logic::parse(inner) {
                    return Ok(f);
                }
            }
            Err(formula_error(src, e))
        }
    }
}

fn law_checks(report: &mut Report, prefix: &str, laws: &LawReport) {
    for r in &laws.results {
        let mut detail = format!("{} cases", r.cases);
        if let Some(first) = &r.first_failure {
            detail.push_str(&format!(", {} failures, first {first}", r.failures));
        }
        report.check(format!("{prefix}{}", r.law), r.passed(), detail);
    }
}

fn cmd_laws(report: &mut Report, atoms: u8, quotient: Option<&Path>, inputs: &mut Inputs) -> Result<(), Failure> {
    let b = FinBoolAlg::standard(atoms as usize).map_err(input)?;
    report.line(format!("algebra: {} atoms {:?}, {} elements", atoms, b.atom_labels(), b.size()));
    report.value("atoms", b.atom_labels());
    report.value("size", b.size());
    law_checks(report, "", &check_all(&b));
    if let Some(path) = quotient {
        let text = read(path, "ideal", inputs)?;
        let lits: Vec<Vec<String>> = serde_json::from_str(&text).map_err(input)?;
        let ideal = parse_subset(&b, &lits).map_err(input)?;
        let q = b.quotient(&ideal).map_err(input)?;
        report.line(format!(
            "quotient by {}: {} elements, atoms {:?}",
            ideal.literals().join(" "),
            q.algebra.size(),
            q.algebra.atom_labels()
        ));
        for class in &q.classes {
            let members: Vec<String> = class.iter().map(|x| b.display(*x)).collect();
            report.line(format!("  class {{{}}}", members.join(", ")));
        }
        report.value("quotient_size", q.algebra.size());
        report.value("quotient_atoms", q.algebra.atom_labels());
        law_checks(report, "quotient/", &check_all(&q.class_structure()));
        report.check("quotient/projection_homomorphism", q.projection.is_homomorphism(), "");
        report.check("quotient/kernel_is_ideal", q.projection.kernel() == ideal, "");
    }
    Ok(())
}

fn cmd_complete(report: &mut Report, path: &Path, inputs: &mut Inputs) -> Result<(), Failure> {
    let text = read(path, "poset", inputs)?;
    let poset = FinPoset::from_json(&text).map_err(input)?;
    match ro_completion(&poset) {
        Ok(c) => {
            report.line(format!(
                "poset: {} elements; completion: {} elements, {} atoms",
                poset.len(),
                c.algebra.size(),
                c.algebra.atom_count()
            ));
            report.value("size", c.algebra.size());
            report.value("atoms", c.algebra.atom_labels());
            let mut table = Vec::new();
            for (i, e) in c.embedding.iter().enumerate() {
                report.line(format!("  e({}) = {}", poset.label(i), c.algebra.display(*e)));
                table.push((poset.label(i).to_string(), c.algebra.display(*e)));
            }
            report.value("embedding", table);
            for (name, ok) in c.check_embedding().named() {
                report.check(format!("embedding {name}"), ok, "");
            }
            let laws = check_all(&c.algebra);
            report.check(
                "boolean laws",
                laws.all_pass(),
                format!("{} laws, {} failures", laws.results.len(), laws.total_failures()),
            );
            Ok(())
        }
        Err(OrderError::NotSeparative { x, y, failing }) => {
            report.status = "precondition-violation";
            report.line(format!("not separative: witness ({x},{y})"));
            report.line(format!("  {x} is not above {y}, and every z <= {y} is compatible with {x}"));
            report.value("witness", [&x, &y]);
            report.value("failing_properties", &failing);
            for f in &failing {
                report.check(format!("embedding {f}"), false, "");
            }
            let msg = format!("poset is not separative: witness ({x},{y})");
            Err(Failure::Precondition(Box::new(report.clone()), msg))
        }
        Err(e) => Err(input(e)),
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum DenseEntry {
    Labelled { label: String, members: Vec<Vec<String>> },
    Bare(Vec<Vec<String>>),
}

fn cmd_generic(
    report: &mut Report,
    alg_path: &Path,
    dense_path: &Path,
    start: &str,
    inputs: &mut Inputs,
) -> Result<(), Failure> {
    let b = load_algebra(alg_path, inputs)?;
    let text = read(dense_path, "dense", inputs)?;
    inputs.add("start", start.as_bytes());
    let entries: Vec<DenseEntry> = serde_json::from_str(&text).map_err(input)?;
    let nz = NonzeroAlgebra::new(&b).map_err(input)?;
    let start = b.parse_element(start).map_err(input)?;
    let mut oracles: Vec<ExplicitDense<NonzeroAlgebra>> = Vec::new();
    for (i, entry) in entries.iter().enumerate() {
        let (label, lits) = match entry {
            DenseEntry::Labelled { label, members } => (label.clone(), members),
            DenseEntry::Bare(members) => (format!("D{i}"), members),
        };
        let members: Vec<Element> =
            lits.iter().map(|l| b.element_from_labels(l)).collect::<Result<_, _>>().map_err(input)?;
        report.check(format!("{label} is dense"), is_dense(&nz, &members), "");
        oracles.push(ExplicitDense::new(&nz, label, members));
    }
    let boxed: Vec<Box<dyn DenseOracle<Element> + '_>> =
        oracles.iter().map(|o| Box::new(o.clone()) as Box<dyn DenseOracle<Element>>).collect();
    let g = build_generic(&nz, start, &boxed).map_err(|e| match e {
        GenericError::InvalidStart(_) => input(e),
        GenericError::OracleContract { .. } => Failure::Oracle(e.to_string()),
    })?;
    report.line(format!("start: {}", b.display(start)));
    for (i, step) in g.steps().iter().enumerate() {
        report.line(format!("  p{i} = {} via {}", b.display(step.condition), step.oracle));
    }
    let chain: Vec<String> = g.chain().iter().map(|p| b.display(*p)).collect();
    report.line(format!("chain: [{}]", chain.join(", ")));
    let filter = g.to_subset();
    report.line(format!("G = {{{}}}", filter.iter().map(|x| b.display(x)).collect::<Vec<_>>().join(", ")));
    report.value("chain", &chain);
    report.value("filter", filter.iter().map(|x| b.display(x)).collect::<Vec<_>>());
    report.check("G is a filter", filter.is_filter(), "");
    report.check("G is an ultrafilter", filter.is_ultrafilter(), "");
    for o in &oracles {
        report.check(format!("G meets {}", o.label()), g.meets(o), "");
    }
    Ok(())
}

fn cmd_cohen(report: &mut Report, path: &Path, inputs: &mut Inputs) -> Result<(), Failure> {
    let text = read(path, "config", inputs)?;
    let cfg = DemoConfig::from_json(&text).map_err(input)?;
    let demo = run_demo(&cfg).map_err(|e| match e {
        CohenError::Generic(g @ GenericError::OracleContract { .. }) => Failure::Oracle(g.to_string()),
        other => input(other),
    })?;
    report.line(format!("kappa = {}, columns = {}, {} refinement steps", demo.kappa, demo.columns, demo.steps.len()));
    for (i, (oracle, cond)) in demo.steps.iter().enumerate() {
        report.line(format!("  step {i}: {oracle} -> {} cells", cond.len()));
    }
    let rows: Vec<String> = demo
        .matrix
        .iter()
        .map(|r| {
            r.iter()
                .map(|c| match c {
                    Some(true) => '1',
                    Some(false) => '0',
                    None => '?',
                })
                .collect()
        })
        .collect();
    report.line("slices:");
    for (x, r) in rows.iter().enumerate() {
        report.line(format!("  G_{x} = {r}"));
    }
    report.value("slices", &rows);
    report.value("generic", demo.generic.to_string());
    for (x, y, col) in &demo.separations {
        let detail = col.map(|c| format!("differ at column {c}")).unwrap_or_default();
        report.check(format!("rows {x},{y} distinct"), col.is_some(), detail);
    }
    for v in &demo.avoid {
        let detail = v.differs_at.map(|c| format!("differs at column {c}")).unwrap_or_default();
        report.check(format!("row {} avoids F={}", v.row, v.real), v.differs_at.is_some(), detail);
    }
    report.check("pairwise distinct", demo.pairwise_distinct(), "");
    Ok(())
}

fn cmd_eval(report: &mut Report, path: &Path, src: &str, inputs: &mut Inputs) -> Result<(), Failure> {
    let text = read(path, "model", inputs)?;
    let m = TransitiveModel::from_json(&text).map_err(input)?;
    let phi = parse_formula(src, inputs)?;
    let verdict = models(&m, &phi).map_err(input)?;
    report.line(format!("M = {{{}}}", m.elements().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")));
    report.line(format!("phi = {phi}"));
    report.line(verdict.to_string());
    report.value("formula", phi.to_string());
    report.value("verdict", verdict);
    Ok(())
}

fn cmd_bval(report: &mut Report, alg: &Path, names: &Path, src: &str, inputs: &mut Inputs) -> Result<(), Failure> {
    let b = load_algebra(alg, inputs)?;
    let table = load_names(names, &b, inputs)?;
    let phi = parse_formula(src, inputs)?;
    let ctx = NameContext::labelled(&table);
    let v = bval(&phi, &table, &ctx).map_err(input)?;
    report.line(format!("phi = {phi}"));
    report.value("formula", phi.to_string());
    report.line(b.display(v));
    report.value("value", b.display(v));
    Ok(())
}

fn cmd_force(
    report: &mut Report,
    alg: &Path,
    names: &Path,
    cond: &str,
    src: &str,
    inputs: &mut Inputs,
) -> Result<(), Failure> {
    let b = load_algebra(alg, inputs)?;
    let table = load_names(names, &b, inputs)?;
    inputs.add("cond", cond.as_bytes());
    let p = b.parse_element(cond).map_err(input)?;
    let phi = parse_formula(src, inputs)?;
    let ctx = NameContext::labelled(&table);
    let verdict = forces(p, &phi, &table, &ctx).map_err(input)?;
    let v = bval(&phi, &table, &ctx).map_err(input)?;
    report.line(format!("phi = {phi}"));
    report.line(format!("[[phi]] = {}", b.display(v)));
    report.line(verdict.to_string());
    report.value("formula", phi.to_string());
    report.value("condition", b.display(p));
    report.value("value", b.display(v));
    report.value("verdict", verdict);
    Ok(())
}

fn run(cli: &Cli, report: &mut Report, inputs: &mut Inputs) -> Result<(), Failure> {
    match &cli.cmd {
        Cmd::Laws { atoms, quotient } => {
            inputs.add("atoms", atoms.to_string());
            cmd_laws(report, *atoms, quotient.as_deref(), inputs)
        }
        Cmd::Complete { poset } => cmd_complete(report, poset, inputs),
        Cmd::Generic { algebra, dense, start } => cmd_generic(report, algebra, dense, start, inputs),
        Cmd::CohenDemo { config } => cmd_cohen(report, config, inputs),
        Cmd::Eval { model, formula } => cmd_eval(report, model, formula, inputs),
        Cmd::Bval { algebra, names, formula } => cmd_bval(report, algebra, names, formula, inputs),
        Cmd::Force { algebra, names, cond, formula } => cmd_force(report, algebra, names, cond, formula, inputs),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = command_line(std::env::args().skip(1));
    let mut inputs = Inputs::default();
    let mut report = Report::new(command.clone(), &inputs);
    let outcome = run(&cli, &mut report, &mut inputs);
    report.inputs_digest = inputs.digest();
    match outcome {
        Ok(()) => {
            print!("{}", report.render(cli.json));
            ExitCode::SUCCESS
        }
        Err(f) => {
            let code = f.code();
            match f {
                Failure::Precondition(r, msg) => {
                    let mut r = *r;
                    r.inputs_digest = inputs.digest();
                    print!("{}", r.render(cli.json));
                    eprintln!("error: {msg}");
                }
                Failure::Input(msg) | Failure::Oracle(msg) => eprintln!("error: {msg}"),
            }
            ExitCode::from(code)
        }
    }
}
