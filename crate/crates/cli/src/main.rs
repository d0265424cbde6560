//! `arboreal`: command-line front end for the ramification toolkit.

mod render;
mod report;
mod selftest;

use std::path::PathBuf;
use std::process::ExitCode;

use arboreal_core::arith::{fmt_rat, parse_rat};
use arboreal_core::dynamics::{bad_directions, reduced_tree};
use arboreal_core::finitefield::{reduce_rat, FieldTower, FqElem};
use arboreal_core::newton::NewtonPolygon;
use arboreal_core::ramify::{certify_wild_with, disc_valuation, monomial_conjugate, newton_tower};
use arboreal_core::{ExtVal, Prime, QPoly, Rat};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use report::{DiscRow, DiscValReport, DumpTowerReport, Input, ModulusLine, NewtonReport, Report, RootVal, TowerCmdReport};

const CACHE_ENV: &str = "ARBOREAL_TOWER_CACHE";

#[derive(Parser)]
#[command(name = "arboreal", version, about = "Ramification in iterated preimage towers over Q_p")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Seed for randomized subcommands.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Newton polygon and root valuations of --poly.
    Newton(PolyPrime),
    /// v(Disc(g(f^n))) for n = 0..=depth.
    DiscVal {
        #[command(flatten)]
        pp: PolyPrime,
        /// Outer polynomial g; defaults to z.
        #[arg(long, value_parser = parse_poly)]
        outer: Option<QPoly>,
        #[arg(long, default_value_t = 4, value_parser = positive)]
        depth: usize,
    },
    /// Perturbation threshold and bad residue directions.
    BadDirs(PolyPrime),
    /// Residue-level preimage tree of the reduced base point.
    ReducedTree {
        #[command(flatten)]
        pp: PolyPrime,
        #[command(flatten)]
        base: BasePoint,
        #[arg(long, default_value_t = 4, value_parser = positive)]
        depth: usize,
    },
    /// Newton valuation tower of the monomial conjugate at --base-point.
    Tower {
        #[command(flatten)]
        pp: PolyPrime,
        #[command(flatten)]
        base: BasePoint,
        #[arg(long, default_value_t = 4, value_parser = positive)]
        depth: usize,
        /// v(beta_0) after conjugation; `inf` follows the base point itself.
        #[arg(long, default_value = "inf", value_parser = parse_extval)]
        start_val: ExtVal,
    },
    /// Full hypothesis check and wild-ramification certificate.
    Certify {
        #[command(flatten)]
        pp: PolyPrime,
        #[command(flatten)]
        base: BasePoint,
        #[arg(long, default_value_t = 4, value_parser = positive)]
        depth: usize,
        #[arg(long, default_value_t = 8, value_parser = positive)]
        horizon: usize,
    },
    /// Deterministic residue-field moduli for levels 1..=depth.
    DumpTower {
        #[arg(long, value_parser = parse_prime)]
        prime: Prime,
        #[arg(long, default_value_t = 4, value_parser = positive)]
        depth: usize,
    },
    /// Randomized consistency checks driven by --seed.
    Selftest {
        #[arg(long, default_value_t = 40, value_parser = positive)]
        cases: usize,
    },
}

#[derive(Args)]
struct PolyPrime {
    /// Ascending coefficient list ("0,-2,0,0,1") or expression in z.
    #[arg(long, value_parser = parse_poly)]
    poly: QPoly,
    #[arg(long, value_parser = parse_prime)]
    prime: Prime,
}

#[derive(Args)]
struct BasePoint {
    #[arg(long, default_value = "0", value_parser = parse_base, allow_hyphen_values = true)]
    base_point: Rat,
}

fn parse_poly(s: &str) -> Result<QPoly, String> {
    s.parse::<QPoly>().map_err(|e| e.to_string())
}

fn parse_prime(s: &str) -> Result<Prime, String> {
    let n: u64 = s.trim().parse().map_err(|e| format!("parse error at position 0: {e}"))?;
    Prime::new(n).map_err(|e| e.to_string())
}

fn parse_base(s: &str) -> Result<Rat, String> {
    parse_rat(s).map_err(|e| format!("parse error at position 0: {e}"))
}

fn parse_extval(s: &str) -> Result<ExtVal, String> {
    s.parse::<ExtVal>().map_err(|e| format!("parse error at position 0: {e}"))
}

fn positive(s: &str) -> Result<usize, String> {
    match s.trim().parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(format!("parse error at position 0: {e}")),
    }
}

/// Prime recorded in a cache file's `# p = N` header.
fn cached_prime(text: &str) -> Option<u64> {
    text.lines().find_map(|l| l.trim().strip_prefix("# p =")).and_then(|v| v.trim().parse().ok())
}

/// Residue tower for `p`, seeded from the cache file when one is configured
/// for the same prime. A cache for another prime is left alone.
fn load_tower(p: Prime) -> Result<(FieldTower, bool), String> {
    let fresh = |writable| FieldTower::new(p).map(|t| (t, writable)).map_err(|e| format!("--prime: {e}"));
    let Some(path) = std::env::var_os(CACHE_ENV).map(PathBuf::from) else {
        return fresh(false);
    };
    match std::fs::read_to_string(&path) {
        Ok(text) if cached_prime(&text).is_some_and(|q| q != p.get()) => fresh(false),
        Ok(text) => FieldTower::from_table(p, &text)
            .map(|t| (t, true))
            .map_err(|e| format!("{CACHE_ENV}={}: {e}", path.display())),
        Err(_) => fresh(true),
    }
}

fn save_tower(tower: &FieldTower, writable: bool) -> Result<(), String> {
    if !writable {
        return Ok(());
    }
    if let Some(path) = std::env::var_os(CACHE_ENV).map(PathBuf::from) {
        std::fs::write(&path, tower.dump()).map_err(|e| format!("{CACHE_ENV}={}: {e}", path.display()))?;
    }
    Ok(())
}

fn emit<T: Serialize>(value: &T, format: Format) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(value).expect("reports serialize")),
        Format::Text => {
            let v = serde_json::to_value(value).expect("reports serialize");
            print!("{}", render::text(&v));
        }
    }
}

fn input(pp: &PolyPrime) -> Input {
    Input { poly: pp.poly.to_string(), prime: pp.prime.get(), ..Input::default() }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    let format = cli.format;
    match cli.cmd {
        Cmd::Newton(pp) => {
            let outcome = NewtonPolygon::build(&pp.poly, pp.prime).map(|np| NewtonReport {
                root_valuations: np.root_valuations().into_iter().map(|(val, mult)| RootVal { val, mult }).collect(),
                ram_denominator: np.ram_denominator().to_string(),
                polygon: np,
            });
            emit(&Report::new("newton", input(&pp), outcome), format);
        }
        Cmd::DiscVal { pp, outer, depth } => {
            let g = outer.unwrap_or_else(QPoly::z);
            let rows = (0..=depth)
                .map(|n| disc_valuation(&pp.poly, &g, n, pp.prime).map(|disc_val| DiscRow { n, disc_val }))
                .collect::<Result<Vec<_>, _>>();
            let inp = Input { depth: Some(depth), ..input(&pp) };
            let outcome = rows.map(|rows| DiscValReport { outer: g.to_string(), rows });
            emit(&Report::new("disc-val", inp, outcome), format);
        }
        Cmd::BadDirs(pp) => {
            let (mut tower, writable) = load_tower(pp.prime)?;
            let outcome = bad_directions(&pp.poly, pp.prime, &mut tower);
            save_tower(&tower, writable)?;
            emit(&Report::new("bad-dirs", input(&pp), outcome), format);
        }
        Cmd::ReducedTree { pp, base, depth } => {
            let (mut tower, writable) = load_tower(pp.prime)?;
            let inp = Input { base_point: Some(fmt_rat(&base.base_point)), depth: Some(depth), ..input(&pp) };
            let outcome = match reduce_rat(&base.base_point, pp.prime) {
                Some(r) => reduced_tree(&pp.poly, pp.prime, &FqElem::from_fp(r), depth, &mut tower).map_err(|e| e.to_string()),
                None => Err("base point is not integral at p".to_string()),
            };
            save_tower(&tower, writable)?;
            emit(&Report::new("reduced-tree", inp, outcome), format);
        }
        Cmd::Tower { pp, base, depth, start_val } => {
            let inp = Input { base_point: Some(fmt_rat(&base.base_point)), depth: Some(depth), ..input(&pp) };
            let outcome = monomial_conjugate(&pp.poly, pp.prime, &base.base_point).and_then(|g| {
                newton_tower(&g, pp.prime, &start_val, depth).map(|tower| TowerCmdReport {
                    g: g.to_string(),
                    start_val: start_val.clone(),
                    tower,
                })
            });
            emit(&Report::new("tower", inp, outcome), format);
        }
        Cmd::Certify { pp, base, depth, horizon } => {
            let (mut tower, writable) = load_tower(pp.prime)?;
            let cert = certify_wild_with(&pp.poly, &base.base_point, depth, horizon, &mut tower);
            save_tower(&tower, writable)?;
            emit(&cert, format);
        }
        Cmd::DumpTower { prime, depth } => {
            let (mut tower, writable) = load_tower(prime)?;
            for m in 1..=depth {
                tower.ensure_level(m);
            }
            save_tower(&tower, writable)?;
            match format {
                Format::Text => print!("{}", tower.dump()),
                Format::Json => {
                    let levels = (1..=depth)
                        .map(|m| ModulusLine { degree: m, coeffs: tower.modulus(m).expect("level built").to_vec() })
                        .collect();
                    emit(&DumpTowerReport { prime: prime.get(), levels }, format);
                }
            }
        }
        Cmd::Selftest { cases } => {
            let summary = selftest::run(cli.seed, cases);
            emit(&summary, format);
            if !summary.ok {
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
