use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use homlie::cocycle::{self, anchors as cocycle_anchors};
use homlie::pipeline::{self, ProbeOptions};
use homlie::report::Failure;
use homlie::{connection, forms, homlie as hl, io, killing, zoo, CheckReport, Error, Result};

#[derive(Parser)]
#[command(name = "homlie", version, about = "Exact checks for Hom-Lie structures on quadratic central extensions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the defining identities of an object.
    Validate {
        #[command(subcommand)]
        what: ValidateCmd,
    },
    /// Basis of the derivation algebra, or of the skew derivations for a form.
    Derivations {
        algebra: PathBuf,
        /// Restrict to derivations skew for this form.
        #[arg(long)]
        skew: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// 2-cocycle operations.
    Cocycle {
        #[command(subcommand)]
        what: CocycleCmd,
    },
    /// Central extension of g0 by a cocycle.
    Extend {
        g0: PathBuf,
        theta: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build a Hom-Lie structure from a bundle.
    Homlie {
        bundle: PathBuf,
        #[arg(long, value_enum, default_value_t = Variant::Alpha)]
        variant: Variant,
        /// Write the structure here; the check report goes to stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Twisted Killing form and classification flags.
    Killing { homlie: PathBuf, lie: PathBuf },
    /// Connection product on g and on g0, with their identity reports.
    Connection { bundle: PathBuf },
    /// Multiplication-algebra simplicity certificate.
    Gsimple {
        /// An algebra file, or a bundle file with --bundle.
        input: PathBuf,
        /// Treat the input as a bundle and test the unital algebra built on it.
        #[arg(long)]
        bundle: bool,
        #[command(flatten)]
        probe: ProbeArgs,
    },
    /// Write a fixture's files to a directory.
    Zoo {
        name: String,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Run every stage on a bundle.
    Report {
        bundle: PathBuf,
        #[command(flatten)]
        probe: ProbeArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ValidateCmd {
    /// Jacobi identity, and invariance and non-degeneracy of an optional form.
    Lie {
        algebra: PathBuf,
        #[arg(long)]
        form: Option<PathBuf>,
    },
    /// All conditions on a bundle.
    Bundle { bundle: PathBuf },
    /// Twisted Jacobi identity.
    Homlie { homlie: PathBuf },
}

#[derive(Subcommand)]
enum CocycleCmd {
    Check { g0: PathBuf, theta: PathBuf },
    FromDerivations {
        g0: PathBuf,
        b0: PathBuf,
        derivations: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    Coboundary { g0: PathBuf, theta: PathBuf },
    Radicals { g0: PathBuf, theta: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Alpha,
    AlphaPrime,
    Restricted,
}

#[derive(clap::Args)]
struct ProbeArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    probes: usize,
    #[arg(long, default_value_t = 9)]
    bound: i64,
}

impl From<&ProbeArgs> for ProbeOptions {
    fn from(a: &ProbeArgs) -> Self {
        ProbeOptions {
            seed: a.seed,
            probes: a.probes,
            bound: a.bound,
        }
    }
}

/// Whether the mathematical checks of a command passed.
enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

fn emit(text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(p) => io::write_text(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_value(v: &Value, output: Option<&Path>) -> Result<()> {
    emit(&io::to_canonical_string(v), output)
}

fn report_value(rep: &CheckReport) -> Value {
    serde_json::to_value(rep).expect("serializable")
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Validate { what } => validate(what),
        Command::Derivations { algebra, skew, output } => {
            let alg = io::read_algebra(&algebra)?;
            let basis = match skew {
                Some(f) => forms::skew_derivation_space(&alg, &io::read_form(&f)?)?,
                None => forms::derivation_space(&alg),
            };
            let inner: Vec<bool> = basis.iter().map(|d| forms::is_inner(&alg, d).is_some()).collect();
            match output {
                Some(p) => {
                    io::write_text(&p, &io::serialize_matrices(&basis))?;
                    emit_value(&json!({ "dim": basis.len(), "inner": inner }), None)?;
                }
                None => emit_value(
                    &json!({
                        "dim": basis.len(),
                        "basis": basis.iter().map(io::matrix_to_value).collect::<Vec<_>>(),
                        "inner": inner,
                    }),
                    None,
                )?,
            }
            Ok(Outcome::Pass)
        }
        Command::Cocycle { what } => cocycle_cmd(what),
        Command::Extend { g0, theta, output } => {
            let g0 = io::read_algebra(&g0)?;
            let theta = io::read_cocycle(&theta, g0.names())?;
            let g = cocycle::central_extend(&g0, &theta)?;
            emit(&io::serialize_algebra(&g), output.as_deref())?;
            Ok(Outcome::Pass)
        }
        Command::Homlie { bundle, variant, output } => {
            let bundle = io::read_bundle(&bundle)?;
            let pair = hl::compute_hk(&bundle)?;
            let structure = match variant {
                Variant::Alpha => hl::build_alpha(&bundle, &pair)?,
                Variant::AlphaPrime => hl::build_alpha_prime(&bundle, &pair)?,
                Variant::Restricted => hl::restrict_homlie(&bundle, &pair)?,
            };
            let rep = hl::construction_report(&bundle, &pair)?;
            match output {
                Some(p) => {
                    io::write_text(&p, &io::serialize_homlie(&structure))?;
                    emit_value(&report_value(&rep), None)?;
                }
                None => emit(&io::serialize_homlie(&structure), None)?,
            }
            Ok(Outcome::from_bool(rep.all_pass()))
        }
        Command::Killing { homlie, lie } => {
            let structure = io::read_homlie(&homlie)?;
            let lie = io::read_algebra(&lie)?;
            let rep = killing::classify(&structure, &lie)?;
            emit(&io::to_canonical_string(&rep), None)?;
            Ok(Outcome::from_bool(rep.checks.all_pass()))
        }
        Command::Connection { bundle } => {
            let bundle = io::read_bundle(&bundle)?;
            let pair = hl::compute_hk(&bundle)?;
            let prime = hl::build_alpha_prime(&bundle, &pair)?;
            let conn = connection::connection_product(&bundle.b, &prime)?;
            let rep = connection::connection_report(&bundle, &pair, &conn, &prime, &prime.alpha)?;
            let (dot, dot_rep) = connection::g0_connection(&bundle, &pair, &conn)?;
            emit_value(
                &json!({
                    "product": io::algebra_to_value(&conn),
                    "report": report_value(&rep),
                    "g0_product": io::algebra_to_value(&dot),
                    "g0_report": report_value(&dot_rep),
                }),
                None,
            )?;
            Ok(Outcome::from_bool(rep.all_pass() && dot_rep.all_pass()))
        }
        Command::Gsimple { input, bundle, probe } => {
            let alg = if bundle {
                let bundle = io::read_bundle(&input)?;
                let pair = hl::compute_hk(&bundle)?;
                let prime = hl::build_alpha_prime(&bundle, &pair)?;
                let conn = connection::connection_product(&bundle.b, &prime)?;
                connection::build_g(&bundle.b, &prime, &conn)?.base
            } else {
                io::read_algebra(&input)?
            };
            let rep = connection::burnside_simplicity(&alg, probe.probes, probe.seed, probe.bound)?;
            emit_value(
                &json!({
                    "dim": rep.dim,
                    "mult_algebra_dim": rep.mult_algebra_dim,
                    "absolutely_simple": rep.absolutely_simple,
                    "verdict": rep.verdict,
                    "probe_failures": rep.probe.failures,
                }),
                None,
            )?;
            Ok(Outcome::Pass)
        }
        Command::Zoo { name, output } => {
            write_zoo(&name, &output)?;
            Ok(Outcome::Pass)
        }
        Command::Report { bundle, probe, output } => {
            let bundle = io::read_bundle(&bundle)?;
            let rep = pipeline::run_report(&bundle, (&probe).into())?;
            emit(&io::to_canonical_string(&rep), output.as_deref())?;
            eprint!("{}", pipeline::summary(&rep));
            Ok(Outcome::from_bool(rep.all_pass))
        }
    }
}

fn validate(what: ValidateCmd) -> Result<Outcome> {
    let rep = match what {
        ValidateCmd::Lie { algebra, form } => {
            let alg = io::read_algebra(&algebra)?;
            let mut rep = CheckReport::new();
            let jac = alg
                .jacobi_defect()?
                .into_iter()
                .map(|t| Failure::new(vec![t.i, t.j, t.k], &t.residual))
                .collect();
            rep.check(cocycle_anchors::JACOBI_G, jac);
            if let Some(f) = form {
                let form = io::read_form(&f)?;
                rep.check_bool(cocycle_anchors::METRIC_B, form.symmetric && form.is_nondegenerate(), || {
                    format!("symmetric: {}, det = {}", form.symmetric, homlie::linalg::format_scalar(&form.det()))
                });
                let inv = forms::check_invariant(&alg, &form)?
                    .into_iter()
                    .map(|t| Failure::scalar(vec![t.i, t.j, t.k], &t.residual))
                    .collect();
                rep.check(cocycle_anchors::INVARIANT_B, inv);
            }
            rep
        }
        ValidateCmd::Bundle { bundle } => match io::read_bundle(&bundle) {
            Ok(b) => cocycle::validation_report(&b.g0, &b.b0, &b.theta, &b.g, &b.b)?,
            Err(Error::Validation { anchor, detail }) => {
                let mut rep = CheckReport::new();
                rep.check(anchor, vec![Failure::note(detail)]);
                rep
            }
            Err(e) => return Err(e),
        },
        ValidateCmd::Homlie { homlie } => {
            let structure = io::read_homlie(&homlie)?;
            let mut rep = CheckReport::new();
            let defect = hl::check_twisted_jacobi(&structure)
                .into_iter()
                .map(|t| Failure::new(vec![t.i, t.j, t.k], &t.residual))
                .collect();
            rep.check(hl::anchors::TWISTED_JACOBI, defect);
            rep
        }
    };
    emit_value(&report_value(&rep), None)?;
    Ok(Outcome::from_bool(rep.all_pass()))
}

fn cocycle_cmd(what: CocycleCmd) -> Result<Outcome> {
    match what {
        CocycleCmd::Check { g0, theta } => {
            let g0 = io::read_algebra(&g0)?;
            let theta = io::read_cocycle(&theta, g0.names())?;
            let mut rep = CheckReport::new();
            let defect = cocycle::check_cocycle(&g0, &theta)?
                .into_iter()
                .map(|t| Failure::new(vec![t.i, t.j, t.k], &t.residual))
                .collect();
            rep.check(cocycle_anchors::COCYCLE, defect);
            emit_value(&report_value(&rep), None)?;
            Ok(Outcome::from_bool(rep.all_pass()))
        }
        CocycleCmd::FromDerivations { g0, b0, derivations, output } => {
            let g0 = io::read_algebra(&g0)?;
            let b0 = io::read_form(&b0)?;
            let ds = io::read_matrices(&derivations)?;
            let theta = cocycle::cocycle_from_derivations(&g0, &b0, &ds)?;
            emit(&io::serialize_cocycle(&theta, g0.names()), output.as_deref())?;
            Ok(Outcome::Pass)
        }
        CocycleCmd::Coboundary { g0, theta } => {
            let g0 = io::read_algebra(&g0)?;
            let theta = io::read_cocycle(&theta, g0.names())?;
            let tau = cocycle::is_coboundary(&g0, &theta)?;
            emit_value(
                &json!({
                    "coboundary": tau.is_some(),
                    "tau": tau.as_ref().map(io::matrix_to_value),
                }),
                None,
            )?;
            Ok(Outcome::Pass)
        }
        CocycleCmd::Radicals { g0, theta } => {
            let g0 = io::read_algebra(&g0)?;
            let theta = io::read_cocycle(&theta, g0.names())?;
            let (each, joint) = cocycle::cocycle_radicals(&g0, &theta)?;
            emit_value(&json!({ "radicals": each, "joint": joint }), None)?;
            Ok(Outcome::Pass)
        }
    }
}

fn write_zoo(name: &str, dir: &Path) -> Result<()> {
    match zoo::stock(name)? {
        zoo::ZooItem::Bundle(b) => {
            io::write_bundle(dir, &b)?;
        }
        zoo::ZooItem::Algebra { alg, form } => {
            std::fs::create_dir_all(dir).map_err(|source| Error::Io {
                context: format!("creating {}", dir.display()),
                source,
            })?;
            io::write_text(&dir.join("algebra.json"), &io::serialize_algebra(&alg))?;
            if let Some(f) = form {
                io::write_text(&dir.join("form.json"), &io::serialize_form(&f))?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input_error() { 2 } else { 1 })
        }
    }
}
