//! `belyi`: compute and verify genus-0 Belyi maps with prescribed monodromy.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand};
use num_complex::Complex64;

use belyi_cli::formats::{
    as_rational_map, parse_profile, read_map, write_map_finite, write_map_numberfield,
    write_map_rational, write_triple, MapFile,
};
use belyi_core::galois::{
    conclude_monodromy, frobenius_sample, indecomposability_test, twotrans_obstruction,
    Decomposability, MonodromyEvidence,
};
use belyi_core::map::{check_belyi, Value};
use belyi_core::monodromy::numerical_monodromy_rational;
use belyi_core::numfield::{reduce_map_mod_prime, PrimeIdealSpec};
use belyi_core::perm::{group_order, is_primitive, parse_triple};
use belyi_core::ring::PrimeField;
use belyi_core::solve::{conformal_stage, solve_triple, SolveConfig, SolvedMap};

#[derive(Parser)]
#[command(name = "belyi", version, about = "Genus-0 Belyi maps with prescribed monodromy")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Seed for all randomized steps; identical invocations with the same
    /// seed produce byte-identical reports.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Parallelism hint (currently advisory; the pipeline is sequential).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Combinatorial analysis of a permutation triple file.
    Analyze { triple: PathBuf },
    /// Solve a triple file to an exact map via conformal gluing and Newton.
    Solve {
        triple: PathBuf,
        /// Write the map file here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Working decimal digits (alias for --target-digits when that flag
        /// is absent).
        #[arg(long)]
        digits: Option<u32>,
        /// Decimal digits targeted by Newton refinement.
        #[arg(long)]
        target_digits: Option<u32>,
        /// Maximum algebraic degree tried for coefficient recognition.
        #[arg(long, default_value_t = 6)]
        max_alg_degree: usize,
        /// Write a planar-complex geometry dump (kites, edges, pairing,
        /// tree coordinates) to this path.
        #[arg(long)]
        dump_geometry: Option<PathBuf>,
    },
    /// Check a map file against an expected ramification profile.
    Verify {
        map: PathBuf,
        /// Expected profile, e.g. "7^38 | 2^128.1^10 | 3^87.1^5".
        #[arg(long)]
        profile: String,
    },
    /// Monodromy-group evidence for a map over a prime field.
    Attest {
        map: PathBuf,
        /// Specializations used by the 2-transitivity obstruction.
        #[arg(long, default_value_t = 12)]
        samples: usize,
        /// Largest factor-family degree searched for.
        #[arg(long, default_value_t = 11)]
        max_factor_degree: usize,
        /// Frobenius cycle-type samples.
        #[arg(long, default_value_t = 8)]
        frobenius_samples: usize,
    },
    /// Reduce a map over a number field at a degree-one prime ideal.
    Reduce {
        map: PathBuf,
        #[arg(long)]
        prime: u64,
        /// Residue of the field generator modulo the prime.
        #[arg(long)]
        root: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Numerical monodromy triple of a map over Q.
    Monodromy {
        map: PathBuf,
        /// Decimal digits of working precision for path continuation.
        #[arg(long, default_value_t = 12)]
        digits: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Errors that should exit with the usage code 2 rather than 1.
#[derive(Debug)]
struct UsageError(anyhow::Error);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:#}", self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage<T>(r: Result<T>) -> Result<T> {
    r.map_err(|e| anyhow!(UsageError(e)))
}

fn read_input(path: &Path) -> Result<String> {
    usage(fs::read_to_string(path).with_context(|| format!("reading {}", path.display())))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.cmd {
        Cmd::Analyze { triple } => analyze(&triple),
        Cmd::Solve { triple, out, digits, target_digits, max_alg_degree, dump_geometry } => {
            solve(&triple, &out, digits, target_digits, max_alg_degree, &dump_geometry)
        }
        Cmd::Verify { map, profile } => verify(&map, &profile),
        Cmd::Attest { map, samples, max_factor_degree, frobenius_samples } => {
            attest(&map, samples, max_factor_degree, frobenius_samples, cli.seed)
        }
        Cmd::Reduce { map, prime, root, out } => reduce(&map, prime, root, &out),
        Cmd::Monodromy { map, digits, out } => monodromy(&map, digits, &out),
    }
}

fn analyze(path: &Path) -> Result<u8> {
    let t = usage(parse_triple(&read_input(path)?).map_err(|e| anyhow!("{e}")))?;
    println!("degree: {}", t.degree());
    println!("types: {} | {} | {}", t.x.cycle_type(), t.y.cycle_type(), t.z.cycle_type());
    let transitive = t.is_transitive();
    println!("transitive: {}", if transitive { "yes" } else { "no" });
    if !transitive {
        println!("genus: n/a (intransitive)");
        println!("primitive: n/a");
        println!("order: n/a");
        return Ok(0);
    }
    println!("genus: {}", t.genus().map_err(|e| anyhow!("{e}"))?);
    let gens = [t.x.clone(), t.y.clone()];
    let primitive = is_primitive(&gens).map_err(|e| anyhow!("{e}"))?;
    println!("primitive: {}", if primitive { "yes" } else { "no" });
    println!("order: {}", group_order(&gens).map_err(|e| anyhow!("{e}"))?);
    Ok(0)
}

fn dump_geometry_file(t: &belyi_core::perm::PermutationTriple, cfg: &SolveConfig) -> Result<String> {
    let stage = conformal_stage(t, cfg).map_err(|e| anyhow!("conformal stage: {e:?}"))?;
    let dom = &stage.domain;
    let mut s = String::new();
    let _ = writeln!(s, "orders: {} {} {}", stage.orders.0, stage.orders.1, stage.orders.2);
    let _ = writeln!(s, "kites: {}", dom.kite_count());
    for (i, v) in dom.vertices.iter().enumerate() {
        let vs: Vec<String> = v.iter().map(|z| format!("{},{}", z.re, z.im)).collect();
        let _ = writeln!(s, "kite {i}: {}", vs.join(" "));
    }
    for (j, e) in dom.boundary.iter().enumerate() {
        let _ = writeln!(s, "boundary {j}: kite {} side {} pairs {}", e.kite, e.side, dom.pairing[j]);
    }
    for (tag, fiber) in [
        ("over0", &stage.preimages.over0),
        ("over1", &stage.preimages.over1),
        ("over-inf", &stage.preimages.over_inf),
    ] {
        for (k, (v, mult)) in fiber.iter().enumerate() {
            match v {
                Value::Finite(z) => {
                    let _ = writeln!(s, "tree {tag} {k}: {},{} mult {mult}", z.re, z.im);
                }
                Value::Infinity => {
                    let _ = writeln!(s, "tree {tag} {k}: inf mult {mult}");
                }
            }
        }
    }
    let _ = writeln!(s, "welding-residual: {:e}", stage.welding_residual);
    let _ = writeln!(s, "correspondence-drift: {:e}", stage.correspondence_drift);
    Ok(s)
}

fn solve(
    path: &Path,
    out: &Option<PathBuf>,
    digits: Option<u32>,
    target_digits: Option<u32>,
    max_alg_degree: usize,
    dump_geometry: &Option<PathBuf>,
) -> Result<u8> {
    let t = usage(parse_triple(&read_input(path)?).map_err(|e| anyhow!("{e}")))?;
    let cfg = SolveConfig {
        target_digits: target_digits.or(digits).unwrap_or(48),
        max_alg_degree,
        ..SolveConfig::default()
    };
    if let Some(dump_path) = dump_geometry {
        fs::write(dump_path, dump_geometry_file(&t, &cfg)?)
            .with_context(|| format!("writing {}", dump_path.display()))?;
    }
    let solved = solve_triple(&t, &cfg).map_err(|e| anyhow!("solve failed: {e:?}"))?;
    let text = match &solved {
        SolvedMap::Rational(m) => {
            eprintln!("solved: degree {} over Q", m.degree());
            write_map_rational(m)
        }
        SolvedMap::NumberField(k, m) => {
            eprintln!("solved: degree {} over a degree-{} field", m.degree(), k.degree());
            write_map_numberfield(k, m)
        }
    };
    emit(out, &text)?;
    Ok(0)
}

fn verify(path: &Path, profile: &str) -> Result<u8> {
    let expected = usage(parse_profile(profile))?;
    let report = match usage(read_map(&read_input(path)?))? {
        MapFile::Finite { p, map } => {
            let fp = PrimeField::new(p);
            check_belyi(&fp, &map, &expected).map_err(|e| anyhow!("{e}"))?
        }
        MapFile::NumberField { field, map } => {
            let ring = field.ring();
            check_belyi(&ring, &map, &expected).map_err(|e| anyhow!("{e}"))?
        }
    };
    print!("{report}");
    Ok(if report.all_pass() { 0 } else { 1 })
}

fn attest(
    path: &Path,
    samples: usize,
    max_factor_degree: usize,
    frobenius_samples: usize,
    seed: u64,
) -> Result<u8> {
    let (p, map) = match usage(read_map(&read_input(path)?))? {
        MapFile::Finite { p, map } => (p, map),
        _ => return usage(Err(anyhow!("attest needs a map over a prime field"))),
    };
    let fp = PrimeField::new(p);
    let degree = map.degree();
    let mut fail = false;
    let mut notes = Vec::new();

    let decomp = indecomposability_test(&fp, &map, seed).map_err(|e| anyhow!("{e}"))?;
    let primitive = match &decomp {
        Decomposability::Indecomposable => {
            println!("CHECK indecomposable: PASS — exhaustive block search found no decomposition");
            Some(true)
        }
        d if d.is_decomposable() => {
            println!("CHECK indecomposable: FAIL — decomposition certificate found");
            fail = true;
            Some(false)
        }
        Decomposability::Unresolved { inner_degrees } => {
            println!(
                "CHECK indecomposable: SKIP — search budget exhausted for inner degrees {inner_degrees:?}"
            );
            None
        }
        _ => unreachable!(),
    };

    let obstruction_degree = if degree >= 3 {
        let rep = twotrans_obstruction(&fp, &map, max_factor_degree, samples, seed)
            .map_err(|e| anyhow!("{e}"))?;
        for d in &rep.diagnostics {
            notes.push(d.clone());
        }
        match &rep.family {
            Some(fam) => {
                println!(
                    "CHECK obstruction: PASS — degree-{} factor family over {} specializations",
                    fam.degree_x(),
                    rep.samples.len()
                );
                Some(fam.degree_x())
            }
            None => {
                let with_low = rep
                    .samples
                    .iter()
                    .filter(|(_, degs)| degs.iter().any(|&d| d > 1 && d <= max_factor_degree))
                    .count();
                println!(
                    "CHECK obstruction: SKIP — no family interpolated; {with_low}/{} specializations show a low-degree factor",
                    rep.samples.len()
                );
                None
            }
        }
    } else {
        println!("CHECK obstruction: SKIP — degree below 3");
        None
    };

    let frob =
        frobenius_sample(&fp, &map, frobenius_samples, seed.wrapping_add(1)).map_err(|e| anyhow!("{e}"))?;
    let ok = frob.types.iter().all(|t| t.degree() == degree);
    println!(
        "CHECK frobenius: {} — {} sampled cycle types, {} skipped",
        if ok { "PASS" } else { "FAIL" },
        frob.types.len(),
        frob.skipped
    );
    fail |= !ok;

    let ev = MonodromyEvidence {
        degree,
        primitive,
        primitive_provenance: String::from("indecomposability of the map (Ritt)"),
        obstruction_degree,
        frobenius_types: frob.types,
        notes,
    };
    println!("{}", conclude_monodromy(&ev));
    Ok(if fail { 1 } else { 0 })
}

fn reduce(path: &Path, prime: u64, root: u64, out: &Option<PathBuf>) -> Result<u8> {
    let (field, map) = match usage(read_map(&read_input(path)?))? {
        MapFile::NumberField { field, map } => (field, map),
        _ => return usage(Err(anyhow!("reduce needs a map over a number field"))),
    };
    let spec = usage(PrimeIdealSpec::new(&field, prime, root).map_err(|e| anyhow!("{e}")))?;
    let ring = field.ring();
    let reduced = reduce_map_mod_prime(&ring, &map, &spec).map_err(|e| anyhow!("{e}"))?;
    emit(out, &write_map_finite(prime, &reduced))?;
    Ok(0)
}

fn monodromy(path: &Path, digits: u32, out: &Option<PathBuf>) -> Result<u8> {
    let m = match usage(read_map(&read_input(path)?))? {
        MapFile::NumberField { field, map } => match as_rational_map(&field, &map) {
            Some(m) => m,
            None => {
                return usage(Err(anyhow!(
                    "numerical monodromy needs a map over Q (field degree 1)"
                )))
            }
        },
        MapFile::Finite { .. } => {
            return usage(Err(anyhow!("numerical monodromy needs a map over Q")))
        }
    };
    let base = Complex64::new(0.5, 0.5);
    let t = numerical_monodromy_rational(&m, digits, base).map_err(|e| anyhow!("{e:?}"))?;
    emit(out, &write_triple(&t))?;
    Ok(0)
}
