use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qcliff::cells::projector;
use qcliff::dirac::{self, CliffordPolynomial, DiracKind, MonogenicSystem};
use qcliff::groups;
use qcliff::lie::{self, AlgebraTag};
use qcliff::verify::{self, Format, SuiteOptions, TableKind};
use qcliff::witt;
use qcliff::{Error, Multivector, Result};
use serde_json::json;

#[derive(Parser)]
#[command(name = "qcliff", version, about = "Exact computations in the quaternionic Clifford setting")]
struct Cli {
    /// Write output to this file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Text,
    Json,
    Latex,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Self {
        match f {
            OutFormat::Text => Format::Text,
            OutFormat::Json => Format::Json,
            OutFormat::Latex => Format::Latex,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SpinName {
    #[value(name = "sI")]
    SI,
    #[value(name = "sJ")]
    SJ,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpinShow {
    Matrix,
    Bivector,
    Multivector,
}

#[derive(Subcommand)]
enum Cmd {
    /// Monomial basis of the homogeneous spinor space of degree r
    SpinorBasis {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: OutFormat,
    },
    /// Triangular scheme of symplectic cells
    Cells {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long, value_enum, default_value = "text")]
        format: OutFormat,
        /// Include bases in text output
        #[arg(long)]
        bases: bool,
    },
    /// Apply the cell projector to a spinor read from JSON
    Project {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        input: PathBuf,
    },
    /// Show s_I or s_J
    Spin {
        #[arg(long)]
        p: usize,
        #[arg(long, value_enum)]
        element: SpinName,
        #[arg(long, value_enum, default_value = "multivector")]
        show: SpinShow,
    },
    /// Basis of a Lie algebra realized by bivectors
    Liealg {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        algebra: AlgebraTag,
        #[arg(long, value_enum, default_value = "json")]
        format: OutFormat,
    },
    /// Highest weight vectors of the cells in the middle and upper degrees
    VerifyWeights {
        #[arg(long)]
        p: usize,
    },
    /// Apply one of the Dirac operators to a polynomial read from JSON
    Dirac {
        #[arg(long)]
        kind: DiracKind,
        #[arg(long)]
        input: PathBuf,
    },
    /// Monogenicity verdict with a witness
    Monogenic {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        system: MonogenicSystem,
        #[arg(long)]
        input: PathBuf,
    },
    /// Run the verification suite
    Verify {
        /// Largest p to check
        #[arg(long, default_value_t = 2)]
        p: usize,
        /// Allow p = 4 and the slow p = 3 checks
        #[arg(long)]
        deep: bool,
        #[arg(long, default_value_t = verify::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: OutFormat,
        #[arg(long)]
        filter: Option<String>,
    },
    /// Emit a table
    Table {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        what: TableKind,
        #[arg(long, value_enum, default_value = "text")]
        format: OutFormat,
    },
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T> {
    let raw = fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&raw).map_err(|e| Error::Parse(e.to_string()))
}

fn pretty<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn run(cmd: Cmd) -> Result<(String, bool)> {
    let ok = |s: String| Ok((s, true));
    match cmd {
        Cmd::SpinorBasis { p, r, format } => {
            let sub = witt::spinor_basis(p, r)?;
            let sets = witt::subsets(2 * p, r);
            match format {
                OutFormat::Json => ok(pretty(&sub.basis)),
                _ => ok(sets.iter().map(|&s| witt::monomial_label(s) + "\n").collect()),
            }
        }
        Cmd::Cells { p, r, format, bases } => ok(verify::cell_table(p, r, format.into(), bases)?),
        Cmd::Project { p, r, s, input } => {
            let x: Multivector = read_json(&input)?;
            let y = projector(p, r, s)?.apply(&x)?;
            ok(pretty(&y))
        }
        Cmd::Spin { p, element, show } => {
            let (s, sigma) = match element {
                SpinName::SI => (groups::spin_s_i(p)?, groups::sigma_i(p)),
                SpinName::SJ => (groups::spin_s_j(p)?, groups::sigma_j(p)),
            };
            match show {
                SpinShow::Matrix => ok(pretty(&groups::double_cover_matrix(&s)?.to_rows())),
                SpinShow::Bivector => ok(pretty(&json!({"pi_over_4": sigma.terms, "over_pi": sigma.over_pi(4 * p)?}))),
                SpinShow::Multivector => ok(pretty(s.value())),
            }
        }
        Cmd::Liealg { p, algebra, format } => {
            let b = lie::algebra_basis(p, algebra)?;
            match format {
                OutFormat::Json => ok(pretty(&b)),
                _ => ok(b.labels.iter().map(|l| l.clone() + "\n").collect()),
            }
        }
        Cmd::VerifyWeights { p } => {
            let mut out = String::new();
            let mut all = true;
            for r in 0..=p {
                for rep in lie::highest_weight_cell_check(p, r)? {
                    all &= rep.ok();
                    let tag = if rep.ok() { "PASS" } else { "FAIL" };
                    out += &format!("{tag} r={r} a={} b={} sl_p weight {}\n", rep.a, rep.b, rep.weight);
                }
            }
            Ok((out, all))
        }
        Cmd::Dirac { kind, input } => {
            let f: CliffordPolynomial = read_json(&input)?;
            ok(pretty(&dirac::apply_dirac(kind, &f)?))
        }
        Cmd::Monogenic { p, system, input } => {
            let f: CliffordPolynomial = read_json(&input)?;
            if f.p() != p {
                return Err(Error::InvalidArgument(format!("polynomial has p = {}, expected {p}", f.p())));
            }
            ok(pretty(&dirac::is_monogenic(&f, system)?))
        }
        Cmd::Verify { p, deep, seed, format, filter } => {
            let report = verify::run_suite(&SuiteOptions { p_max: p, deep, seed, filter })?;
            eprintln!("elapsed {:.2?}", report.elapsed);
            let text = match format {
                OutFormat::Json => pretty(&report),
                _ => report.to_text(),
            };
            Ok((text, report.all_passed()))
        }
        Cmd::Table { p, what, format } => ok(verify::emit_table(p, what, format.into())?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok((text, passed)) => {
            let written = match &cli.out {
                Some(path) => fs::write(path, text.as_bytes()),
                None => std::io::stdout().write_all(text.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
