//! Command-line surface for the exact computer-algebra toolkit: one subcommand
//! per computation, with human-readable output by default, byte-stable
//! canonical JSON on `--json`, and a lossy CSV projection on `--csv`. Every
//! JSON result embeds a run manifest (command, parameters, tool version,
//! presentation hashes, bounds) so results are reproducible from the output
//! alone. Conjecture subcommands exit 0 when the claim holds, 1 when it fails,
//! and 2 when a window was exhausted before a certificate was obtained; hard
//! computational errors exit 3.

use clap::{Parser, Subcommand, ValueEnum};
use cuspalg::conjectures::{
    check_flatness, check_grm, check_planar, check_sp_points, check_toric, exit_code,
    reference_betti_row, ConjectureReport,
};
use cuspalg::gradedquot::{betti_from_model, filtration_table, GradedQuotient};
use cuspalg::jets::Convention;
use cuspalg::oracles::{catalan_count, dyck_poly};
use cuspalg::presentations::{build_io, build_toric_equations, IdealPresentation};
use cuspalg::semigroups::{enumerate_modules, NumericalSemigroup};
use serde::Serialize;
use serde_json::{json, Map, Value};
use std::path::PathBuf;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "cuspalg",
    version,
    about = "Exact invariants of plane-curve cusp singularities and their compactified Jacobians"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit the result as canonical JSON on stdout (byte-stable across reruns)
    #[arg(long, global = true)]
    json: bool,
    /// Emit the result as a CSV table on stdout (lossy projection of the JSON)
    #[arg(long, global = true, conflicts_with = "json")]
    csv: bool,
    /// Directory for the degreewise dimension cache (or env CUSPALG_CACHE_DIR)
    #[arg(long, global = true, value_name = "DIR")]
    cache_dir: Option<PathBuf>,
    /// Worker threads for degree-parallel computations (default: all cores)
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
    /// Seed recorded in the manifest for randomized property-test replay; all
    /// computations here are deterministic and ignore it
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Hilbert function of the Artinian moduli ring of the (p, q) cusp
    Hilbert {
        #[arg(short)]
        p: u32,
        #[arg(short)]
        q: u32,
        /// Top degree to report (default: twice the genus, the full support)
        #[arg(long)]
        maxdeg: Option<i64>,
    },
    /// Even Betti numbers of the compactified Jacobian from the graded model
    Betti {
        #[arg(short)]
        p: u32,
        #[arg(short)]
        q: u32,
    },
    /// Double-filtration table refining the Betti numbers
    Filtration {
        #[arg(short)]
        p: u32,
        #[arg(short)]
        q: u32,
    },
    /// m-adic associated graded of the moduli ring, checked against the Betti row
    Grm {
        #[arg(short)]
        p: u32,
        #[arg(short)]
        q: u32,
    },
    /// Toric fixed-point equations: quotient dimension vs module count
    Toric {
        /// Semigroup generators, comma separated, e.g. 4,6,7
        #[arg(long, value_delimiter = ',', required = true)]
        gens: Vec<u32>,
        /// Equation degree bound (default: 2*max generator + conductor)
        #[arg(long)]
        bound: Option<u32>,
    },
    /// Jet-space local ring of t -> (t^4, t^(2q) + t^s) vs the reference Betti row
    Planar {
        /// Curve family selector; only "4,2q,s" is available
        #[arg(long, default_value = "4,2q,s")]
        family: String,
        #[arg(short)]
        q: u32,
        #[arg(short)]
        s: u32,
        #[arg(long, value_enum, default_value_t = ConventionArg::Strict)]
        convention: ConventionArg,
        /// Override the jet precision (default: certified automatically)
        #[arg(long)]
        ceiling: Option<i64>,
    },
    /// Slotwise flatness probe of the two-parameter family
    Flatness {
        #[arg(short)]
        p: u32,
        #[arg(short)]
        q: u32,
        /// Bidegree window "A,B" (default: 2*genus+2 in both directions)
        #[arg(long, value_parser = parse_window)]
        window: Option<(i64, i64)>,
    },
    /// Zero set of the parabolic fixed-point equations vs the flag tuples
    SpPoints {
        #[arg(short)]
        p: u32,
        #[arg(short)]
        q: u32,
    },
    /// Semigroup modules (torus fixed points) of the (p, q) cusp
    Modules {
        #[arg(short)]
        p: u32,
        #[arg(short)]
        q: u32,
    },
    /// Dyck-path area polynomial and the rational Catalan number
    Dyck {
        #[arg(short)]
        p: u32,
        #[arg(short)]
        q: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    Pinned,
    Strict,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Convention {
        match c {
            ConventionArg::Pinned => Convention::Pinned,
            ConventionArg::Strict => Convention::Strict,
        }
    }
}

fn parse_window(s: &str) -> Result<(i64, i64), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err("expected two comma-separated integers, e.g. 8,8".into());
    }
    let a = parts[0].trim().parse().map_err(|e| format!("{e}"))?;
    let b = parts[1].trim().parse().map_err(|e| format!("{e}"))?;
    Ok((a, b))
}

/// Reproducibility record embedded in every JSON result.
#[derive(Serialize)]
struct RunManifest<'a> {
    command: &'a str,
    parameters: &'a Value,
    version: &'a str,
    presentation_hashes: &'a [String],
    bounds: &'a Value,
    output: &'a str,
    cache_dir: Option<String>,
    jobs: Option<usize>,
    seed: Option<u64>,
}

/// Everything a subcommand produces, before the output format is chosen.
struct CommandOutput {
    name: &'static str,
    parameters: Value,
    result: Map<String, Value>,
    hashes: Vec<String>,
    bounds: Value,
    human: String,
    csv: String,
    code: i32,
}

fn main() {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global();
    }
    let t0 = Instant::now();
    let code = match run(&cli) {
        Ok(out) => emit(&cli, out),
        Err(e) => {
            eprintln!("error: {e}");
            3
        }
    };
    if !cli.json && !cli.csv {
        eprintln!("wall time: {} ms", t0.elapsed().as_millis());
    }
    std::process::exit(code);
}

fn emit(cli: &Cli, out: CommandOutput) -> i32 {
    if cli.json {
        let mut map = out.result;
        let manifest = RunManifest {
            command: out.name,
            parameters: &out.parameters,
            version: env!("CARGO_PKG_VERSION"),
            presentation_hashes: &out.hashes,
            bounds: &out.bounds,
            output: "stdout",
            cache_dir: effective_cache_dir(cli).map(|p| p.display().to_string()),
            jobs: cli.jobs,
            seed: cli.seed,
        };
        map.insert(
            "manifest".into(),
            serde_json::to_value(&manifest).expect("manifest serialization"),
        );
        println!(
            "{}",
            serde_json::to_string(&Value::Object(map)).expect("result serialization")
        );
    } else if cli.csv {
        print!("{}", out.csv);
    } else {
        println!("{}", out.human.trim_end());
    }
    out.code
}

fn effective_cache_dir(cli: &Cli) -> Option<PathBuf> {
    cli.cache_dir
        .clone()
        .or_else(|| std::env::var_os("CUSPALG_CACHE_DIR").map(PathBuf::from))
}

fn quotient(cli: &Cli, pres: &IdealPresentation) -> cuspalg::Result<GradedQuotient> {
    match effective_cache_dir(cli) {
        Some(dir) => GradedQuotient::with_cache(pres, &dir),
        None => GradedQuotient::new(pres),
    }
}

/// Render a dimension vector as a polynomial in t, e.g. [1, 2, 0, 1] ->
/// "1 + 2t + t^3".
fn poly_string(coeffs: &[u64]) -> String {
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(k, &c)| match (k, c) {
            (0, c) => format!("{c}"),
            (1, 1) => "t".into(),
            (1, c) => format!("{c}t"),
            (k, 1) => format!("t^{k}"),
            (k, c) => format!("{c}t^{k}"),
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

fn join(v: &[u64]) -> String {
    v.iter().map(u64::to_string).collect::<Vec<_>>().join(", ")
}

fn u64s(v: &Value) -> Vec<u64> {
    v.as_array()
        .map(|a| a.iter().filter_map(Value::as_u64).collect())
        .unwrap_or_default()
}

/// CSV projection of a conjecture report: the identifying line plus one row
/// per entry of a chosen vector pair from the evidence.
fn report_result(report: &ConjectureReport) -> Map<String, Value> {
    let mut map = Map::new();
    map.insert(
        "verdict".into(),
        serde_json::to_value(report.verdict).expect("verdict serialization"),
    );
    map.insert(
        "report".into(),
        serde_json::to_value(report.clone().without_walltime()).expect("report serialization"),
    );
    map
}

fn run(cli: &Cli) -> cuspalg::Result<CommandOutput> {
    match &cli.command {
        Command::Hilbert { p, q, maxdeg } => {
            let gamma = NumericalSemigroup::from_pair(*p, *q)?;
            let md = maxdeg.unwrap_or(2 * gamma.delta() as i64);
            let pres = build_io(*p, *q)?;
            let quot = quotient(cli, &pres)?;
            let h = quot.hilbert_function(md)?;
            let mut csv = String::from("degree,dimension\n");
            for (d, v) in h.iter().enumerate() {
                csv.push_str(&format!("{d},{v}\n"));
            }
            Ok(CommandOutput {
                name: "hilbert",
                parameters: json!({ "p": p, "q": q, "maxdeg": md }),
                result: [
                    ("hilbert".into(), json!(h)),
                    ("series".into(), json!(poly_string(&h))),
                ]
                .into_iter()
                .collect(),
                hashes: vec![pres.content_hash()],
                bounds: json!({ "maxdeg": md }),
                human: format!(
                    "Hilbert function of the ({p}, {q}) moduli ring, degrees 0..={md}:\n  {}\n  series: {}",
                    join(&h),
                    poly_string(&h)
                ),
                csv,
                code: 0,
            })
        }
        Command::Betti { p, q } => {
            let b = betti_from_model(*p, *q)?;
            let total: u64 = b.iter().sum();
            let mut csv = String::from("i,b_2i\n");
            for (i, v) in b.iter().enumerate() {
                csv.push_str(&format!("{i},{v}\n"));
            }
            Ok(CommandOutput {
                name: "betti",
                parameters: json!({ "p": p, "q": q }),
                result: [
                    ("betti".into(), json!(b)),
                    ("total".into(), json!(total)),
                ]
                .into_iter()
                .collect(),
                hashes: vec![],
                bounds: json!({}),
                human: format!(
                    "Betti numbers b_0, b_2, .., b_{} of the ({p}, {q}) compactified Jacobian:\n  {}\n  total: {total}",
                    2 * (b.len().max(1) - 1),
                    join(&b)
                ),
                csv,
                code: 0,
            })
        }
        Command::Filtration { p, q } => {
            let t = filtration_table(*p, *q, None)?;
            let delta = t.delta;
            let mut csv = String::from("i,j,dim\n");
            for e in &t.entries {
                csv.push_str(&format!("{},{},{}\n", e.i, e.j, e.dim));
            }
            let mut grid = String::new();
            grid.push_str("        ");
            for j in 0..=2 * delta {
                grid.push_str(&format!("{j:>4}"));
            }
            grid.push('\n');
            for i in 0..=delta {
                grid.push_str(&format!("  i={i:<3} "));
                for j in 0..=2 * delta {
                    let d = t.get(i, j);
                    if d == 0 {
                        grid.push_str("   .");
                    } else {
                        grid.push_str(&format!("{d:>4}"));
                    }
                }
                grid.push('\n');
            }
            let human = format!(
                "Double-filtration table for ({p}, {q}), rows i (first filtration level), columns j (second):\n{grid}  row sums: {}\n  col sums: {}",
                join(&t.row_sums()),
                join(&t.col_sums())
            );
            Ok(CommandOutput {
                name: "filtration",
                parameters: json!({ "p": p, "q": q }),
                result: [
                    ("filtration".into(), serde_json::to_value(&t)?),
                    ("row_sums".into(), json!(t.row_sums())),
                    ("col_sums".into(), json!(t.col_sums())),
                ]
                .into_iter()
                .collect(),
                hashes: vec![],
                bounds: json!({}),
                human,
                csv,
                code: 0,
            })
        }
        Command::Grm { p, q } => {
            let rep = check_grm(*p, *q)?;
            let grm = u64s(&rep.evidence["grm"]);
            let betti = u64s(&rep.evidence["betti"]);
            let rev = u64s(&rep.evidence["grm_reversed"]);
            let n = grm.len().max(betti.len());
            let mut csv = String::from("i,grm_top_down,betti\n");
            for i in 0..n {
                let a = rev.get(i).map(u64::to_string).unwrap_or_default();
                let b = betti.get(i).map(u64::to_string).unwrap_or_default();
                csv.push_str(&format!("{i},{a},{b}\n"));
            }
            let verdict = serde_json::to_value(rep.verdict)?;
            let human = format!(
                "grm-betti check for ({p}, {q}): {}\n  m-adic series of the moduli ring: {}\n  read top-down: {}\n  Betti row:     {}",
                verdict.as_str().unwrap_or("?"),
                poly_string(&grm),
                join(&rev),
                join(&betti)
            );
            let code = exit_code(std::slice::from_ref(&rep));
            Ok(CommandOutput {
                name: "grm",
                parameters: rep.parameters.clone(),
                result: report_result(&rep),
                hashes: vec![build_io(*p, *q)?.content_hash()],
                bounds: rep.bounds.clone(),
                human,
                csv,
                code,
            })
        }
        Command::Toric { gens, bound } => {
            let rep = check_toric(gens, *bound)?;
            let verdict = serde_json::to_value(rep.verdict)?;
            let human = format!(
                "toric-count check for <{}>: {}\n  semigroup modules: {}\n  quotient dimension: {} (stable: {})",
                gens.iter().map(u32::to_string).collect::<Vec<_>>().join(", "),
                verdict.as_str().unwrap_or("?"),
                rep.evidence["module_count"],
                rep.evidence["quotient_dimension"],
                rep.evidence["stable"]
            );
            let csv = format!(
                "generators,module_count,quotient_dimension,stable,verdict\n\"{}\",{},{},{},{}\n",
                gens.iter().map(u32::to_string).collect::<Vec<_>>().join(","),
                rep.evidence["module_count"],
                rep.evidence["quotient_dimension"],
                rep.evidence["stable"],
                verdict.as_str().unwrap_or("?")
            );
            let code = exit_code(std::slice::from_ref(&rep));
            let hash = build_toric_equations(gens, *bound)?.content_hash();
            Ok(CommandOutput {
                name: "toric",
                parameters: rep.parameters.clone(),
                result: report_result(&rep),
                hashes: vec![hash],
                bounds: rep.bounds.clone(),
                human,
                csv,
                code,
            })
        }
        Command::Planar {
            family,
            q,
            s,
            convention,
            ceiling,
        } => {
            if family != "4,2q,s" {
                return Err(cuspalg::Error::BadParameter(format!(
                    "unknown curve family {family:?}; only \"4,2q,s\" is available"
                )));
            }
            let reference = reference_betti_row(*q, *s).ok_or_else(|| {
                cuspalg::Error::BadParameter(format!(
                    "no reference Betti row shipped for (q, s) = ({q}, {s}); available: (3, 7) and (3, 9)"
                ))
            })?;
            let rep = check_planar(*q, *s, (*convention).into(), *ceiling, &reference)?;
            let row = u64s(&rep.evidence["row"]);
            let verdict = serde_json::to_value(rep.verdict)?;
            let strict = rep.evidence["strict_positions"].clone();
            let human = format!(
                "planar-dominance check for (q={q}, s={s}): {}\n  fake row:  {}\n  reference: {}\n  strict at positions: {}\n  total jet dimension: {}",
                verdict.as_str().unwrap_or("?"),
                join(&row),
                join(&reference),
                strict,
                rep.evidence["total"]
            );
            let mut csv = String::from("position,row,reference\n");
            for (i, (a, b)) in row.iter().zip(&reference).enumerate() {
                csv.push_str(&format!("{i},{a},{b}\n"));
            }
            let code = exit_code(std::slice::from_ref(&rep));
            Ok(CommandOutput {
                name: "planar",
                parameters: rep.parameters.clone(),
                result: report_result(&rep),
                hashes: vec![],
                bounds: rep.bounds.clone(),
                human,
                csv,
                code,
            })
        }
        Command::Flatness { p, q, window } => {
            let rep = check_flatness(*p, *q, *window)?;
            let verdict = serde_json::to_value(rep.verdict)?;
            let human = format!(
                "flatness-window check for ({p}, {q}): {}\n  slots checked: {}\n  strict slots: {}",
                verdict.as_str().unwrap_or("?"),
                rep.evidence["slots_checked"],
                rep.evidence["strict_slots"]
            );
            let mut csv = String::from("a,b,saturated,filtered\n");
            if let Some(slots) = rep.evidence["probe"]["slots"].as_array() {
                for s in slots {
                    csv.push_str(&format!(
                        "{},{},{},{}\n",
                        s["a"], s["b"], s["saturated"], s["filtered"]
                    ));
                }
            }
            let code = exit_code(std::slice::from_ref(&rep));
            Ok(CommandOutput {
                name: "flatness",
                parameters: rep.parameters.clone(),
                result: report_result(&rep),
                hashes: vec![],
                bounds: rep.bounds.clone(),
                human,
                csv,
                code,
            })
        }
        Command::SpPoints { p, q } => {
            let rep = check_sp_points(*p, *q)?;
            let verdict = serde_json::to_value(rep.verdict)?;
            let human = format!(
                "parabolic-points check for ({p}, {q}): {}\n  flag tuples: {}\n  zeros found in search box: {}",
                verdict.as_str().unwrap_or("?"),
                rep.evidence["tuple_count"],
                rep.evidence["box_zero_count"]
            );
            let mut csv = String::new();
            csv.push_str(&(1..=*p).map(|i| format!("d{i}")).collect::<Vec<_>>().join(","));
            csv.push('\n');
            if let Some(tuples) = rep.evidence["tuples"].as_array() {
                for t in tuples {
                    if let Some(entries) = t.as_array() {
                        csv.push_str(
                            &entries
                                .iter()
                                .map(Value::to_string)
                                .collect::<Vec<_>>()
                                .join(","),
                        );
                        csv.push('\n');
                    }
                }
            }
            let code = exit_code(std::slice::from_ref(&rep));
            Ok(CommandOutput {
                name: "sp-points",
                parameters: rep.parameters.clone(),
                result: report_result(&rep),
                hashes: vec![],
                bounds: rep.bounds.clone(),
                human,
                csv,
                code,
            })
        }
        Command::Modules { p, q } => {
            let gamma = NumericalSemigroup::from_pair(*p, *q)?;
            let mods = enumerate_modules(&gamma);
            let catalan = catalan_count(*p, *q)?;
            let lists: Vec<Vec<u32>> = mods.iter().map(|m| m.adjoined_gaps().to_vec()).collect();
            let mut csv = String::from("index,adjoined_gaps\n");
            for (i, l) in lists.iter().enumerate() {
                let joined = l.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
                csv.push_str(&format!("{i},\"{joined}\"\n"));
            }
            let mut human = format!(
                "{} semigroup modules for ({p}, {q}); rational Catalan number {catalan}\n",
                mods.len()
            );
            for l in &lists {
                let joined = l.iter().map(u32::to_string).collect::<Vec<_>>().join(", ");
                human.push_str(&format!("  {{{joined}}}\n"));
            }
            Ok(CommandOutput {
                name: "modules",
                parameters: json!({ "p": p, "q": q }),
                result: [
                    ("count".into(), json!(mods.len())),
                    ("catalan".into(), json!(catalan.to_string())),
                    ("modules".into(), json!(lists)),
                ]
                .into_iter()
                .collect(),
                hashes: vec![],
                bounds: json!({}),
                human,
                csv,
                code: 0,
            })
        }
        Command::Dyck { p, q } => {
            let d = dyck_poly(*p, *q)?;
            let catalan = catalan_count(*p, *q)?;
            let total: u64 = d.iter().sum();
            let mut csv = String::from("area,count\n");
            for (k, v) in d.iter().enumerate() {
                csv.push_str(&format!("{k},{v}\n"));
            }
            Ok(CommandOutput {
                name: "dyck",
                parameters: json!({ "p": p, "q": q }),
                result: [
                    ("dyck".into(), json!(d)),
                    ("total".into(), json!(total)),
                    ("catalan".into(), json!(catalan.to_string())),
                ]
                .into_iter()
                .collect(),
                hashes: vec![],
                bounds: json!({}),
                human: format!(
                    "Dyck-path area polynomial for ({p}, {q}):\n  {}\n  total: {total} (Catalan number {catalan})",
                    poly_string(&d)
                ),
                csv,
                code: 0,
            })
        }
    }
}
