use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use tropicert::certify::{certify, Conclusion};
use tropicert::fan::{
    is_balanced, is_connected_codim1, is_locally_extremal, is_nondegenerate, is_unimodular, validate_fan, WeightedFan,
};
use tropicert::graph::{balance_coefficients, graph_of_fan, identity_order, tropical_laplacian};
use tropicert::inertia::inertia_both;
use tropicert::io::{parse_fan, parse_fan_unchecked, parse_order, parse_vcomplex, print_fan, LoadError};
use tropicert::paper::paper_k44;
use tropicert::recession::recession_fan;
use tropicert::surgery::{negative_edges, op_minus, op_plus, tilde};

#[derive(Parser)]
#[command(name = "tropicert", version, about = "Exact checks on weighted rational fans and tropical Laplacians")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validity, balancing and extremality report.
    Check { fan: PathBuf },
    /// Print the tropical Laplacian of G(F).
    Laplacian {
        fan: PathBuf,
        /// JSON array of ray indices or ray vectors.
        #[arg(long)]
        order: Option<PathBuf>,
    },
    /// Print "n+ n- n0" of the tropical Laplacian.
    Signature { fan: PathBuf },
    /// Subdivide edge (i, j) at u_i + u_j.
    Plus {
        fan: PathBuf,
        #[arg(short)]
        i: usize,
        #[arg(short)]
        j: usize,
    },
    /// Replace edge (i, j) by three cones through -u_i, -u_j.
    Minus {
        fan: PathBuf,
        #[arg(short)]
        i: usize,
        #[arg(short)]
        j: usize,
    },
    /// Apply the minus surgery to every negative edge.
    Tilde { fan: PathBuf },
    /// Print the built-in K_{4,4} fan.
    PaperExample {
        #[arg(long)]
        tilde: bool,
    },
    /// Print the recession fan of a V-complex over SIGMA.
    Recession {
        vcomplex: PathBuf,
        #[arg(long)]
        sigma: PathBuf,
    },
    /// Run the full certification pipeline.
    Certify {
        fan: PathBuf,
        #[arg(short)]
        o: Option<PathBuf>,
    },
}

/// Exit code and message for a failed command.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn check(message: impl ToString) -> Self {
        Failure { code: 1, message: message.to_string() }
    }

    fn usage(message: impl ToString) -> Self {
        Failure { code: 2, message: message.to_string() }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<WeightedFan, Failure> {
    parse_fan(&read(path)?).map_err(|e| match e {
        LoadError::Parse(p) => Failure::usage(format!("{}: {p}", path.display())),
        v @ LoadError::Validation(_) => Failure::check(format!("{}: {v}", path.display())),
    })
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn run(cli: Cli) -> Result<(String, u8), Failure> {
    match cli.command {
        Command::Check { fan } => {
            let text = read(&fan)?;
            let f = parse_fan_unchecked(&text).map_err(|e| Failure::usage(format!("{}: {e}", fan.display())))?;
            let valid = validate_fan(&f).is_valid();
            let balanced = is_balanced(&f).is_balanced();
            let local = is_locally_extremal(&f);
            let connected = is_connected_codim1(&f);
            let mut out = String::new();
            out += &format!("valid {}\n", verdict(valid));
            out += &format!("balanced {}\n", verdict(balanced));
            out += &format!("locally_extremal {}\n", verdict(local));
            out += &format!("connected_codim1 {}\n", verdict(connected));
            out += &format!("note unimodular {}\n", is_unimodular(&f));
            out += &format!("note nondegenerate {}\n", is_nondegenerate(&f));
            out += &format!("note positive {}\n", f.is_positive());
            let ok = valid && balanced && local && connected;
            Ok((out, if ok { 0 } else { 1 }))
        }
        Command::Laplacian { fan, order } => {
            let f = load(&fan)?;
            let b = graph_of_fan(&f).and_then(|g| balance_coefficients(&g)).map_err(Failure::check)?;
            let order = match order {
                Some(p) => parse_order(&read(&p)?, &f).map_err(|e| Failure::usage(format!("{}: {e}", p.display())))?,
                None => identity_order(f.rays().len()),
            };
            let lap = tropical_laplacian(&b, &order).map_err(Failure::usage)?;
            Ok((lap.matrix().to_string(), 0))
        }
        Command::Signature { fan } => {
            let f = load(&fan)?;
            let b = graph_of_fan(&f).and_then(|g| balance_coefficients(&g)).map_err(Failure::check)?;
            let lap = tropical_laplacian(&b, &identity_order(f.rays().len())).map_err(Failure::check)?;
            let (a, c) = inertia_both(lap.matrix()).map_err(Failure::check)?;
            if a != c {
                return Err(Failure::check(format!("inertia algorithms disagree: ({a}) vs ({c})")));
            }
            Ok((format!("{a}\n"), 0))
        }
        Command::Plus { fan, i, j } => {
            let out = op_plus(&load(&fan)?, i, j).map_err(Failure::check)?;
            Ok((print_fan(&out), 0))
        }
        Command::Minus { fan, i, j } => {
            let out = op_minus(&load(&fan)?, i, j).map_err(Failure::check)?;
            Ok((print_fan(&out), 0))
        }
        Command::Tilde { fan } => {
            let f = load(&fan)?;
            let out = tilde(&f).map_err(Failure::check)?;
            if !negative_edges(&out).is_empty() {
                return Err(Failure::check("tilde left negative edges"));
            }
            Ok((print_fan(&out), 0))
        }
        Command::PaperExample { tilde: t } => {
            let f = paper_k44();
            let f = if t { tilde(&f).expect("K44 satisfies the tilde hypotheses") } else { f };
            Ok((print_fan(&f), 0))
        }
        Command::Recession { vcomplex, sigma } => {
            let c = parse_vcomplex(&read(&vcomplex)?).map_err(|e| Failure::usage(format!("{}: {e}", vcomplex.display())))?;
            let s = load(&sigma)?;
            let r = recession_fan(&c, &s).map_err(Failure::check)?;
            if !r.lower_dimensional.is_empty() {
                eprintln!("cells with lower-dimensional recession cone (excluded): {:?}", r.lower_dimensional);
            }
            Ok((print_fan(&r.fan), 0))
        }
        Command::Certify { fan, o } => {
            let f = load(&fan)?;
            let (cert, aborted) = match certify(&f) {
                Ok(cert) => (cert, None),
                Err(e) => (*e.partial.clone(), Some(e.to_string())),
            };
            let json = cert.to_json();
            let stdout = match &o {
                Some(path) => {
                    fs::write(path, &json).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
                    format!("{}\n", cert.conclusion)
                }
                None => json,
            };
            if let Some(msg) = aborted {
                print!("{stdout}");
                return Err(Failure::check(msg));
            }
            let ok = cert.conclusion == Conclusion::CounterexampleWitness || cert.plain_checks_pass();
            Ok((stdout, if ok { 0 } else { 1 }))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
