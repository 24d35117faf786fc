use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use jacobi_forms::arith::{fmt_rational, rat};
use jacobi_forms::codec::LatticeJson;
use jacobi_forms::formlang::{eval_str, parse_form, Evaluator};
use jacobi_forms::hecke::{conductor_data, lift_table};
use jacobi_forms::lattice::{root, Lattice};
use jacobi_forms::series::FourierSeries;
use jacobi_forms::verify;
use jacobi_forms::weil::{eigenspaces_json, joint_eigenvectors, weil_matrices};
use jacobi_forms::Error;

const EXIT_VERIFY: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_PRECISION: u8 = 3;

/// Exact Fourier expansions of lattice Jacobi forms.
#[derive(Parser)]
#[command(name = "jacobi", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Args)]
struct Prec {
    /// Precision as a bound on 24 n
    #[arg(long, env = "JACOBI_PREC")]
    prec: i64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the truncated Fourier expansion
    Expand {
        expr: String,
        #[command(flatten)]
        prec: Prec,
        #[arg(long)]
        json: bool,
    },
    /// Print min (2nt - (l,l)) over the support
    Ord {
        expr: String,
        #[command(flatten)]
        prec: Prec,
    },
    /// Print singular, cusp, holomorphic or non-holomorphic
    Classify {
        expr: String,
        #[command(flatten)]
        prec: Prec,
    },
    /// Print the Fourier-Jacobi coefficients of the additive lift
    Lift {
        expr: String,
        #[arg(long, default_value_t = 1)]
        mu: i64,
        #[arg(long)]
        bound: i64,
        #[arg(long)]
        json: bool,
    },
    /// Print U(T), U(S) and the joint eigenspaces for a root lattice name
    /// such as D4 or E6, or a lattice JSON file
    Weil {
        lattice: String,
        #[arg(long)]
        json: bool,
    },
    /// Run the acceptance corpus
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Split an index 1 form into theta components
    Decompose {
        expr: String,
        #[command(flatten)]
        prec: Prec,
    },
}

enum Failure {
    Usage(String),
    Engine(Error),
    Verify,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Engine(e)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } | Error::Decode(_) => EXIT_USAGE,
        Error::Precision { .. } | Error::ZeroSeries(_) => EXIT_PRECISION,
        _ => EXIT_VERIFY,
    }
}

fn key_text(s: &FourierSeries, n24: i64, w: &[i64]) -> String {
    let l: Vec<String> = w.iter().map(|x| fmt_rational(&rat(*x, s.den))).collect();
    format!("n={} l=({})", fmt_rational(&rat(n24, 24)), l.join(","))
}

fn expand_text(s: &FourierSeries) -> String {
    let sh = &s.shape;
    let mut out = format!(
        "lattice {} t={} 2k={} D={} prec={}\n",
        sh.lattice.name,
        fmt_rational(&sh.t),
        sh.k2,
        sh.d,
        fmt_rational(&rat(s.prec, 24))
    );
    for ((n, w), c) in &s.terms {
        writeln!(out, "{} c={}", key_text(s, *n, w), fmt_rational(c)).unwrap();
    }
    out
}

fn load_lattice(arg: &str) -> Result<Lattice, Failure> {
    let b = arg.as_bytes();
    if b.len() >= 2 && b"ADE".contains(&b[0]) && arg[1..].bytes().all(|c| c.is_ascii_digit()) {
        let m: usize = arg[1..].parse().map_err(|_| Failure::Usage(format!("bad rank in {arg}")))?;
        return Ok(root(b[0] as char, m)?);
    }
    let text = std::fs::read_to_string(arg).map_err(|e| Failure::Usage(format!("{arg}: {e}")))?;
    let j: LatticeJson = serde_json::from_str(&text).map_err(|e| Error::Decode(e.to_string()))?;
    Ok(j.into_lattice()?)
}

fn weil_text(lat: &Lattice) -> Result<String, Failure> {
    let w = weil_matrices(lat)?;
    let spaces = joint_eigenvectors(&w)?;
    let mut out = format!("lattice {} |D|={} N={}\n", w.lattice, w.dabs, w.n);
    writeln!(out, "labels {}", w.labels.join(" ")).unwrap();
    let ut: Vec<String> = w.ut_exp.iter().map(|k| k.to_string()).collect();
    writeln!(out, "U(T) = diag(zeta_{}^k), k = {}", w.n, ut.join(" ")).unwrap();
    writeln!(out, "U(S) = zeta_8^{} |D|^(-1/2) (zeta_{}^k), k =", w.scalar_zeta8, w.n).unwrap();
    for row in &w.us_exp {
        let r: Vec<String> = row.iter().map(|k| k.to_string()).collect();
        writeln!(out, "  {}", r.join(" ")).unwrap();
    }
    for s in &spaces {
        writeln!(out, "eigenspace lambda_T=zeta_{n}^{} lambda_S=zeta_{n}^{} dim={}", s.lambda_t, s.lambda_s, s.dim(), n = w.n)
            .unwrap();
        for v in &s.basis {
            let v: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            writeln!(out, "  ({})", v.join(", ")).unwrap();
        }
    }
    Ok(out)
}

fn run(cmd: Cmd) -> Result<String, Failure> {
    Ok(match cmd {
        Cmd::Expand { expr, prec, json } => {
            let s = eval_str(&expr, prec.prec)?;
            if json {
                s.to_json_pretty() + "\n"
            } else {
                expand_text(&s)
            }
        }
        Cmd::Ord { expr, prec } => fmt_rational(&eval_str(&expr, prec.prec)?.ord()?) + "\n",
        Cmd::Classify { expr, prec } => eval_str(&expr, prec.prec)?.classify()?.as_str().to_string() + "\n",
        Cmd::Lift { expr, mu, bound, json } => {
            let e = parse_form(&expr)?;
            let mut ev = Evaluator::new();
            let (d, _) = conductor_data(ev.eval(&e, 0)?.shape.d)?;
            // coefficients up to n m D <= D B
            let s = ev.eval(&e, d * bound.max(0))?;
            let t = lift_table(&s, mu, bound)?;
            if json {
                t.to_json_pretty() + "\n"
            } else {
                let mut out = format!("mu={} Q={} k={} bound={}\n", t.mu, t.q, fmt_rational(&rat(t.k2, 2)), t.bound);
                for ((n, w, m), c) in &t.entries {
                    let l: Vec<String> = w.iter().map(|x| fmt_rational(&rat(*x, t.den))).collect();
                    writeln!(out, "n={n} l=({}) m={m} c={}", l.join(","), fmt_rational(c)).unwrap();
                }
                out
            }
        }
        Cmd::Weil { lattice, json } => {
            let lat = load_lattice(&lattice)?;
            if json {
                let w = weil_matrices(&lat)?;
                let spaces = joint_eigenvectors(&w)?;
                serde_json::to_string_pretty(&eigenspaces_json(&w, &spaces)).unwrap() + "\n"
            } else {
                weil_text(&lat)?
            }
        }
        Cmd::Verify { suite } => {
            let ids = verify::suite(&suite).ok_or_else(|| {
                let names: Vec<&str> = verify::SUITES.iter().map(|(n, _)| *n).collect();
                Failure::Usage(format!("unknown suite {suite:?}; known: {}", names.join(", ")))
            })?;
            let outcomes = verify::run_ids(ids);
            for o in &outcomes {
                println!("{}", o.line());
            }
            if outcomes.iter().all(|o| o.pass) {
                String::new()
            } else {
                return Err(Failure::Verify);
            }
        }
        Cmd::Decompose { expr, prec } => {
            let d = eval_str(&expr, prec.prec)?.theta_decompose()?;
            let mut out = String::new();
            for (label, q) in d.labels.iter().zip(&d.components) {
                let terms: Vec<String> =
                    q.terms.iter().map(|(h, c)| format!("{} q^{}", fmt_rational(c), fmt_rational(&rat(*h, 24)))).collect();
                let body = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
                writeln!(out, "{label}: {body} + O(q^{})", fmt_rational(&rat(q.prec + 1, 24))).unwrap();
            }
            out
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Verify) => ExitCode::from(EXIT_VERIFY),
        Err(Failure::Engine(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
