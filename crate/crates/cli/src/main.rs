use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use kanquillen::bisimplicial::{const_geo, diag_extend, diag_restrict, serial as bserial};
use kanquillen::harness::{corpus, run_all, Config, Profile, ScenarioId};
use kanquillen::homotopy::homology;
use kanquillen::lifting::problem::to_terminal;
use kanquillen::lifting::{find_lift, has_rlp, kan_check, soa_factorize, GeneratingSet, LiftingProblem};
use kanquillen::sset::colimit::pushout;
use kanquillen::sset::product::product;
use kanquillen::sset::serial;
use kanquillen::sset::standard::{boundary_inclusion, horn_inclusion};
use kanquillen::subdivision::{sd, ExComplex};
use kanquillen::SimplicialSet;

#[derive(Parser)]
#[command(name = "kq", about = "Finite simplicial sets, Ex, lifting problems and the verification scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum BiForm {
    /// `const(K)`, constant in the vertical direction.
    Const,
    /// `diag_!(K)`.
    Diag,
}

#[derive(Clone, Copy, ValueEnum)]
enum MapOp {
    /// `sd K` (one SSX file).
    Sd,
    /// `Ex K` truncated at `--trunc` (one SSX file).
    Ex,
    /// `diag^* X` (one BSSX file).
    Diag,
    /// `diag_! K` (one SSX file).
    Extend,
    /// The counit `diag_! K -> const K` (one SSX file).
    Counit,
    /// `K × L` (two SSX files).
    Product,
    /// The pushout of two maps out of the same source (two SSX map files).
    Pushout,
}

#[derive(Clone, Copy, ValueEnum)]
enum SetName {
    I,
    J,
}

#[derive(Subcommand)]
enum Command {
    /// Print a named complex (`simplex:n`, `boundary:n`, `horn:n:i`, `sphere:n`, `point`, `empty`) as SSX.
    Build {
        name: String,
        /// Emit a bisimplicial set as BSSX instead.
        #[arg(long, value_enum)]
        bi: Option<BiForm>,
    },
    /// Print `∂Δ^n -> Δ^n`, `Λ^n_i -> Δ^n`, or with `--terminal` the map from a named complex to `Δ^0`, as an SSX map.
    Inclusion {
        name: String,
        #[arg(long)]
        terminal: bool,
    },
    /// Apply a construction to files (`-` reads standard input).
    Map {
        #[arg(value_enum)]
        op: MapOp,
        inputs: Vec<PathBuf>,
        #[arg(long, default_value_t = 2)]
        trunc: usize,
    },
    /// Solve the square given by four SSX map files.
    Lift { left: PathBuf, right: PathBuf, top: PathBuf, bottom: PathBuf },
    /// Factor a map with the small object argument.
    Soa {
        map: PathBuf,
        #[arg(long, value_enum, default_value = "j")]
        set: SetName,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 3)]
        rounds: usize,
        /// Also certify the input map against the generating set.
        #[arg(long)]
        rlp: bool,
    },
    /// Integral homology of an SSX file.
    Homology {
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Horn fillers of an SSX file up to `--dim`.
    Kan {
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        dim: usize,
    },
    /// Run the verification scenarios.
    Verify {
        #[arg(long = "scenario")]
        scenarios: Vec<String>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, conflicts_with = "text")]
        json: bool,
        #[arg(long)]
        text: bool,
        /// Write the JSON report here as well.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// An error in the input rather than in the computation.
#[derive(Debug)]
struct InputError(anyhow::Error);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:#}", self.0)
    }
}

impl std::error::Error for InputError {}

fn input<T>(r: anyhow::Result<T>) -> anyhow::Result<T> {
    r.map_err(|e| InputError(e).into())
}

fn read(path: &PathBuf) -> anyhow::Result<String> {
    input(if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map(|_| s).context("reading standard input")
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    })
}

fn load_set(path: &PathBuf) -> anyhow::Result<Arc<SimplicialSet>> {
    let text = read(path)?;
    input(serial::from_str(&text).map(Arc::new).with_context(|| format!("parsing {}", path.display())))
}

fn load_map(path: &PathBuf) -> anyhow::Result<kanquillen::SimplicialMap> {
    let text = read(path)?;
    input(serial::map_from_str(&text).with_context(|| format!("parsing {}", path.display())))
}

fn arity(inputs: &[PathBuf], n: usize) -> anyhow::Result<()> {
    if inputs.len() != n {
        return input(Err(anyhow!("expected {n} input file(s), got {}", inputs.len())));
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Build { name, bi } => {
            let k = input(corpus::named(&name).map_err(Into::into))?;
            match bi {
                None => println!("{}", serial::to_string(&k)),
                Some(BiForm::Const) => println!("{}", bserial::to_string(&const_geo(&k))),
                Some(BiForm::Diag) => println!("{}", bserial::to_string(&diag_extend(&Arc::new(k))?.object)),
            }
            Ok(0)
        }
        Command::Inclusion { name, terminal } => {
            let m = if terminal {
                to_terminal(&Arc::new(input(corpus::named(&name).map_err(Into::into))?))
            } else {
                let parts: Vec<&str> = name.split(':').collect();
                let num = |i: usize| -> anyhow::Result<usize> {
                    input(parts.get(i).and_then(|p| p.parse().ok()).ok_or_else(|| anyhow!("cannot read {name:?}")))
                };
                match parts[0] {
                    "boundary" if parts.len() == 2 => boundary_inclusion(num(1)?),
                    "horn" if parts.len() == 3 => input(horn_inclusion(num(1)?, num(2)?).map_err(Into::into))?,
                    _ => return input(Err(anyhow!("expected boundary:n or horn:n:i, got {name:?}"))),
                }
            };
            println!("{}", serial::map_to_string(&m));
            Ok(0)
        }
        Command::Map { op, inputs, trunc } => {
            match op {
                MapOp::Sd => {
                    arity(&inputs, 1)?;
                    let (s, _) = sd(&load_set(&inputs[0])?);
                    println!("{}", serial::to_string(&s));
                }
                MapOp::Ex => {
                    arity(&inputs, 1)?;
                    let e = ExComplex::new(&load_set(&inputs[0])?, trunc)?;
                    println!("{}", serial::to_string(e.object()));
                }
                MapOp::Diag => {
                    arity(&inputs, 1)?;
                    let text = read(&inputs[0])?;
                    let x = input(bserial::from_str(&text).map_err(Into::into))?;
                    println!("{}", serial::to_string(&diag_restrict(&Arc::new(x)).object));
                }
                MapOp::Extend => {
                    arity(&inputs, 1)?;
                    println!("{}", bserial::to_string(&diag_extend(&load_set(&inputs[0])?)?.object));
                }
                MapOp::Counit => {
                    arity(&inputs, 1)?;
                    let k = load_set(&inputs[0])?;
                    let ext = diag_extend(&k)?;
                    let counit = ext.counit_map(&Arc::new(const_geo(&k)));
                    println!("{}", bserial::map_to_string(&counit));
                }
                MapOp::Product => {
                    arity(&inputs, 2)?;
                    let p = product(&load_set(&inputs[0])?, &load_set(&inputs[1])?)?;
                    println!("{}", serial::to_string(&p.object));
                }
                MapOp::Pushout => {
                    arity(&inputs, 2)?;
                    let (f, g) = (load_map(&inputs[0])?, load_map(&inputs[1])?);
                    if !f.source().same_structure(g.source()) {
                        return input(Err(anyhow!("the two maps must share their source")));
                    }
                    let g = kanquillen::SimplicialMap::new(f.source().clone(), g.target().clone(), g.assignment().to_vec())?;
                    println!("{}", serial::to_string(&pushout(&f, &g)?.object));
                }
            }
            Ok(0)
        }
        Command::Lift { left, right, top, bottom } => {
            let (l, r, t, b) = (load_map(&left)?, load_map(&right)?, load_map(&top)?, load_map(&bottom)?);
            let p = input(LiftingProblem::new(l, r, t, b).map_err(Into::into))?;
            match find_lift(&p) {
                Some(h) => {
                    println!("{}", serial::map_to_string(&h));
                    Ok(0)
                }
                None => {
                    eprintln!("no lift exists");
                    Ok(1)
                }
            }
        }
        Command::Soa { map, set, dim, rounds, rlp } => {
            let f = load_map(&map)?;
            let g = match set {
                SetName::I => GeneratingSet::i_kq(dim),
                SetName::J => GeneratingSet::j_kq(dim),
            };
            if rlp {
                let c = has_rlp(&f, &g)?;
                println!("input has rlp against {}≤{dim}: {} ({} squares)", g.name, c.holds, c.squares_checked);
            }
            let fac = soa_factorize(&f, &g, rounds)?;
            let out = serde_json::json!({
                "rounds_used": fac.rounds_used,
                "fixed_point": fac.reached_fixed_point(),
                "unsolved_per_round": fac.trace.iter().map(|t| t.unsolved).collect::<Vec<_>>(),
                "residual_count": fac.residual_count,
                "middle_counts": fac.middle.counts(),
                "attachments": fac.attachments.len(),
                "first": serial::map_to_json(&fac.first),
                "second": serial::map_to_json(&fac.second),
            });
            println!("{}", serde_json::to_string_pretty(&out)?);
            Ok(if fac.reached_fixed_point() { 0 } else { 3 })
        }
        Command::Homology { input: path, json } => {
            let h = homology(&*load_set(&path)?)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&h)?);
            } else {
                println!("{h}");
            }
            Ok(0)
        }
        Command::Kan { input: path, dim } => {
            let r = kan_check(&load_set(&path)?, dim)?;
            for c in &r.counts {
                println!("Λ^{}_{}: {} horn(s), {} without a filler", c.n, c.i, c.horns, c.unfilled);
            }
            println!("Kan up to dimension {dim}: {}", r.kan_up_to());
            Ok(if r.kan_up_to() { 0 } else { 1 })
        }
        Command::Verify { scenarios, config, json, text: _, out } => {
            let profile = input(Profile::from_env().map_err(Into::into))?;
            let mut cfg = match &config {
                Some(path) => {
                    let text = read(path)?;
                    input(Config::parse(&text, profile).with_context(|| format!("in {}", path.display())))?
                }
                None => Config::for_profile(profile),
            };
            if !scenarios.is_empty() {
                let mut ids = Vec::new();
                for s in &scenarios {
                    let id: ScenarioId = input(s.parse().map_err(|e: String| anyhow!(e)))?;
                    ids.push(id);
                }
                cfg.scenarios.retain(|s| ids.contains(s));
                if cfg.scenarios.is_empty() {
                    bail!(InputError(anyhow!("none of the requested scenarios is enabled by the configuration")));
                }
            }
            let report = run_all(&cfg);
            if let Some(path) = out {
                fs::write(&path, report.to_json()).with_context(|| format!("writing {}", path.display()))?;
            }
            if json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            Ok(report.exit_code() as u8)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let is_input = e.chain().any(|c| c.is::<InputError>())
                || e.chain().any(|c| {
                    c.downcast_ref::<kanquillen::Error>().is_some_and(|k| {
                        matches!(
                            k,
                            kanquillen::Error::Config { .. }
                                | kanquillen::Error::Serialization(_)
                                | kanquillen::Error::InvalidMap(_)
                                | kanquillen::Error::InvalidSimplex(_)
                                | kanquillen::Error::NonCommutingSquare(_)
                        )
                    })
                });
            if is_input {
                ExitCode::from(2)
            } else if e.chain().any(|c| c.downcast_ref::<kanquillen::Error>().is_some_and(|k| k.is_resource_cap())) {
                ExitCode::from(3)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
