use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use delannoy_core::delannic::{profile, DelannicProfile, DelannicType};
use delannoy_core::functor::{CheckReport, TensorFunctor};
use delannoy_core::linear::hom_dim;
use delannoy_core::measure::{check_measure_axioms, MeasureSpec};
use delannoy_core::orbit::GSet;
use delannoy_core::order::OrderExpr;
use delannoy_core::scenarios::{self, Report};
use delannoy_core::{serial, Error, Field};

#[derive(Parser)]
#[command(name = "delannoy", version, about = "Workbench for the Delannoy categories and their tensor functors")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Scalar field (`Q` or `F<p>`); defaults to DELANNOY_FIELD, then Q.
    #[arg(long, global = true)]
    field: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Values of the four measures on p_{1,1}, p_{2,1}, p_{2,2}.
    MeasureTable,
    /// Dimension of Hom(C(R^(n)), C(R^(m))).
    HomDim {
        #[arg(long = "cat")]
        cat: usize,
        n: usize,
        m: usize,
    },
    /// Composite A ∘ B of two morphism files (B is applied first).
    Compose {
        #[arg(long = "cat")]
        cat: usize,
        a: PathBuf,
        b: PathBuf,
    },
    /// Ordered G-sets.
    Order {
        #[command(subcommand)]
        command: OrderCommand,
    },
    /// Dimension, gamma values and type of an ordered expression.
    Profile {
        #[arg(long)]
        ambient: String,
        expr: String,
    },
    /// Tensor functors out of a Delannoy category.
    Functor {
        #[command(subcommand)]
        command: FunctorCommand,
    },
    /// Left inverses of the images of one map under two functors.
    EnvelopeSeparation,
    /// Run a named scenario.
    Scenario { name: String },
    /// Run every invariant suite.
    Selftest {
        #[arg(long, default_value_t = 2)]
        depth: usize,
    },
}

#[derive(Subcommand)]
enum OrderCommand {
    /// Evaluate a constructor expression.
    Eval {
        expr: String,
        /// Number of factors of the group; defaults to the largest factor used.
        #[arg(long)]
        shape: Option<usize>,
    },
}

#[derive(Subcommand)]
enum FunctorCommand {
    /// Functor C_i -> target with the given generator.
    Build {
        #[arg(long)]
        source: u8,
        #[arg(long)]
        target: String,
        expr: String,
    },
    /// Image of an object R^(n) or of a morphism file.
    Apply {
        functor: PathBuf,
        #[arg(long, conflicts_with = "morphism", required_unless_present = "morphism")]
        object: Option<usize>,
        #[arg(long)]
        morphism: Option<PathBuf>,
    },
    /// Functoriality, monoidality, measure compatibility and faithfulness.
    Check {
        functor: PathBuf,
        #[arg(long, default_value_t = 2)]
        bound: usize,
    },
}

/// Outcome of a command: rendered output and whether every check passed.
struct Outcome {
    text: String,
    json: Value,
    passed: bool,
}

impl Outcome {
    fn ok(text: String, json: Value) -> Self {
        Outcome { text, json, passed: true }
    }

    fn reports(reports: &[Report]) -> Self {
        Outcome {
            text: reports.iter().map(Report::to_string).collect::<Vec<_>>().join("\n"),
            json: serde_json::to_value(reports).expect("reports serialize"),
            passed: reports.iter().all(Report::passed),
        }
    }
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

fn category(cat: usize, field: Field) -> Result<MeasureSpec, Error> {
    MeasureSpec::single(cat, field)
}

fn type_name(t: DelannicType) -> String {
    match t {
        DelannicType::NotDelannic => "NOT_DELANNIC".into(),
        DelannicType::Zero => "0 (zero algebra, types 2 and 3)".into(),
        t => t.indices()[0].to_string(),
    }
}

fn gamma_text(p: &DelannicProfile, i: usize) -> String {
    match p.gamma(i) {
        Some(g) => g.to_string(),
        None => {
            let v = if i == 1 { &p.gamma1 } else { &p.gamma2 };
            format!("[{}]", v.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" "))
        }
    }
}

fn check_outcome(reports: &[CheckReport], extra: Vec<(String, bool)>) -> Outcome {
    let mut text: Vec<String> = reports.iter().map(|r| r.to_string()).collect();
    text.extend(extra.iter().map(|(n, ok)| format!("{n}: {}", if *ok { "PASS" } else { "FAIL" })));
    let json = json!({
        "checks": reports.iter().map(|r| json!({"name": r.name, "checked": r.checked, "failures": r.failures})).collect::<Vec<_>>(),
        "verdicts": extra.iter().map(|(n, ok)| json!({"name": n, "passed": ok})).collect::<Vec<_>>(),
    });
    let passed = reports.iter().all(CheckReport::passed) && extra.iter().all(|(_, ok)| *ok);
    Outcome { text: text.join("\n"), json, passed }
}

fn run(cli: &Cli, field: Field) -> Result<Outcome, Error> {
    Ok(match &cli.command {
        Command::MeasureTable => {
            let t = scenarios::measure_table()?;
            let mut text = String::from("      p11 p21 p22\n");
            for (k, row) in t.iter().enumerate() {
                text += &format!("mu{}  {:>3} {:>3} {:>3}\n", k + 1, row[0], row[1], row[2]);
            }
            Outcome::ok(text.trim_end().to_string(), json!({"p11_p21_p22": t}))
        }
        Command::HomDim { cat, n, m } => {
            category(*cat, field)?;
            let d = hom_dim(&GSet::power(*n), &GSet::power(*m));
            Outcome::ok(d.to_string(), json!({"dim": d}))
        }
        Command::Compose { cat, a, b } => {
            let spec = category(*cat, field)?;
            let (fa, fb) = (serial::morphism_from_json(&read(a)?)?, serial::morphism_from_json(&read(b)?)?);
            for f in [&fa, &fb] {
                if f.measure() != &spec {
                    return Err(Error::MorphismMismatch(format!("morphism lives in {}, not {spec}", f.measure())));
                }
            }
            let c = fa.compose(&fb)?;
            let j = serial::morphism_to_json(&c);
            Outcome::ok(serde_json::to_string_pretty(&j).expect("json"), j)
        }
        Command::Order { command: OrderCommand::Eval { expr, shape } } => {
            let e = OrderExpr::parse(expr)?;
            let shape = shape.unwrap_or_else(|| e.max_factor().map_or(1, |t| t + 1));
            let o = e.evaluate(shape)?;
            let length = e.chain_length().map_or("infinite".to_string(), |n| n.to_string());
            let text = format!("{o}\norbits {}; longest chain {length}", o.carrier().len());
            Outcome::ok(text, serial::ordered_to_json(&o))
        }
        Command::Profile { ambient, expr } => {
            let spec = MeasureSpec::parse(ambient, field)?;
            let o = OrderExpr::parse(expr)?.evaluate(spec.shape())?;
            let p = profile(&o, &spec)?;
            let text =
                format!("type {}, dim {}, gamma ({}, {})", type_name(p.kind), p.dim, gamma_text(&p, 1), gamma_text(&p, 2));
            Outcome::ok(text, serial::profile_to_json(&p))
        }
        Command::Functor { command } => match command {
            FunctorCommand::Build { source, target, expr } => {
                let target = MeasureSpec::parse(target, field)?;
                let f = TensorFunctor::build(*source, &target, &OrderExpr::parse(expr)?)?;
                let j = serial::functor_to_json(&f);
                Outcome::ok(serde_json::to_string_pretty(&j).expect("json"), j)
            }
            FunctorCommand::Apply { functor, object, morphism } => {
                let f = serial::functor_from_json(&read(functor)?)?;
                match (object, morphism) {
                    (Some(n), _) => {
                        let x = f.apply_object(&GSet::power(*n))?;
                        Outcome::ok(x.to_string(), serial::gset_to_json(&x))
                    }
                    (None, Some(path)) => {
                        let m = serial::morphism_from_json(&read(path)?)?;
                        let j = serial::morphism_to_json(&f.apply_morphism(&m)?);
                        Outcome::ok(serde_json::to_string_pretty(&j).expect("json"), j)
                    }
                    (None, None) => return Err(Error::Invalid("give --object or --morphism".into())),
                }
            }
            FunctorCommand::Check { functor, bound } => {
                let f = serial::functor_from_json(&read(functor)?)?;
                let reports = [
                    f.check_functoriality(*bound),
                    f.check_monoidality(*bound),
                    f.check_measure_compat(*bound),
                    f.check_generating_maps(),
                ];
                check_outcome(&reports, vec![("faithful".into(), f.faithful())])
            }
        },
        Command::EnvelopeSeparation => Outcome::reports(&[scenarios::two_envelopes(field)?]),
        Command::Scenario { name } => match scenarios::scenario(name, field)? {
            Some(r) => Outcome::reports(&[r]),
            None => {
                return Err(Error::Invalid(format!(
                    "unknown scenario {name:?}; expected one of {}",
                    scenarios::SCENARIOS.join(", ")
                )))
            }
        },
        Command::Selftest { depth } => Outcome::reports(&scenarios::selftest(*depth, field)?),
    })
}

/// The measures must satisfy their axioms on small arities before anything else runs.
fn startup_check(field: Field) -> Result<(), String> {
    for k in 1..=4 {
        let spec = MeasureSpec::single(k, field).map_err(|e| e.to_string())?;
        if let Some(f) = check_measure_axioms(&spec, 2).failure {
            return Err(format!("{spec}: {f}"));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let field = match cli.field.as_deref().map_or_else(Field::from_env, Field::parse) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = startup_check(field) {
        eprintln!("measure axioms fail: {e}");
        return ExitCode::from(1);
    }
    match run(&cli, field) {
        Ok(out) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("json"));
            } else {
                println!("{}", out.text);
            }
            ExitCode::from(if out.passed { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
