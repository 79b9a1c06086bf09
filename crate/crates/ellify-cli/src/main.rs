//! Command-line front end: build structured strong l-ifications, verify
//! candidates exactly, build sparse variants, recover the target from a
//! middle block, run the quartic refutation, and replay the bundled demos.
//!
//! Exit codes: 0 on success or a verified claim, 1 when a verification
//! fails, 2 on usage or input errors.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ellify::conditions::PlacementPlan;
use ellify::demos;
use ellify::json;
use ellify::lification::{build_structured, recover_target};
use ellify::matpoly::StarFlavor;
use ellify::mobius::MobiusMatrix;
use ellify::plans::PlanRegistry;
use ellify::refuter::{self, RefuteOptions};
use ellify::structure::{StructureKind, StructureTag};
use ellify::verify::{
    certify_lification, measure_minimal_indices, sparsity_census, structure_survey, NullSide,
};
use ellify::Error;

#[derive(Parser)]
#[command(
    name = "ellify",
    about = "Structure-preserving strong l-ifications of matrix polynomials, with exact verification",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct StructureArgs {
    /// Structure class: sym | skew | even | odd | palin | antipalin
    #[arg(long)]
    structure: String,
    /// Star flavor: t (transpose) | h (conjugate transpose)
    #[arg(long, default_value = "t")]
    star: String,
}

impl StructureArgs {
    fn tag(&self) -> Result<StructureTag, Error> {
        let kind = StructureKind::parse(&self.structure)?;
        let flavor = match self.star.as_str() {
            "t" => StarFlavor::Transpose,
            "h" => StarFlavor::ConjugateTranspose,
            other => return Err(Error::Parse(format!("unknown star flavor `{other}`"))),
        };
        Ok(StructureTag::new(kind, flavor))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build a structure-preserving strong l-ification from a placement plan
    Build {
        /// Input polynomial (JSON)
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        structure: StructureArgs,
        /// Degree of the construction; must divide the grade with odd quotient
        #[arg(long)]
        ell: usize,
        /// Registered plan name (stacked | sparse | reference) or a plan file
        #[arg(long, default_value = "stacked")]
        plan: String,
        /// Output path for the assembled polynomial (JSON)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the block layout with provenance labels
        #[arg(long)]
        pretty: bool,
    },
    /// Certify that a candidate is a (strong) l-ification of a polynomial
    Verify {
        /// Candidate polynomial (JSON, block metadata optional)
        #[arg(long)]
        lification: PathBuf,
        /// Target polynomial (JSON)
        #[arg(long)]
        poly: PathBuf,
        /// Degree of the candidate (defaults to its declared grade)
        #[arg(long)]
        ell: Option<usize>,
        /// Write the full report (JSON)
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Build with the sparse plan and report the block census
    Sparse {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        structure: StructureArgs,
        #[arg(long)]
        ell: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        pretty: bool,
    },
    /// Recover the target polynomial from a middle block
    Recover {
        /// Middle block (JSON with block_size metadata)
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        structure: StructureArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply a Mobius transform to a polynomial at its declared grade
    Mobius {
        /// Input polynomial (JSON)
        #[arg(long)]
        input: PathBuf,
        /// A1 | A2 | A3 | cayley+1 | cayley-1 | "a,b,c,d" (scalar text entries)
        #[arg(long, default_value = "A1")]
        matrix: String,
        /// Transform the negated polynomial instead
        #[arg(long)]
        minus: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive companion-quadratification search over a scalar grid
    RefuteQuartic {
        #[command(flatten)]
        structure: StructureArgs,
        /// Comma-separated nonzero rationals
        #[arg(long, default_value = "1,-1,2,-2,1/2,-1/2")]
        grid: String,
        /// Also allow product slots on the middle diagonal entries
        #[arg(long)]
        allow_products: bool,
        /// Permutation seed for the enumeration order
        #[arg(long)]
        seed: Option<u64>,
        /// Write the search report (JSON)
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Replay a bundled self-verifying scenario
    Demo {
        /// examduplic | quartic | cayley
        which: String,
        /// Seed for the randomized inputs (echoed in the output)
        #[arg(long, default_value_t = 20240801)]
        seed: u64,
        #[arg(long)]
        pretty: bool,
    },
}

fn read_to_string(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

fn write_output(path: &Path, content: &str) -> Result<(), Error> {
    fs::write(path, content)
        .map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display())))
}

fn resolve_plan(
    registry: &PlanRegistry,
    name: &str,
    tag: StructureTag,
    d: usize,
    ell: usize,
) -> Result<PlacementPlan, Error> {
    if registry.get(name).is_some() {
        return registry.build(name, tag, d, ell);
    }
    let path = Path::new(name);
    if path.exists() {
        let text = read_to_string(path)?;
        return serde_json::from_str(&text)
            .map_err(|e| Error::Parse(format!("bad plan JSON: {e}")));
    }
    Err(Error::UnknownPlan(name.to_string()))
}

fn split_grade(grade: usize, ell: usize) -> Result<usize, Error> {
    if ell == 0 || grade % ell != 0 || (grade / ell) % 2 == 0 {
        return Err(Error::GradeNotOddMultiple { grade, ell });
    }
    Ok((grade / ell - 1) / 2)
}

fn run_build(
    input: &Path,
    structure: &StructureArgs,
    ell: usize,
    plan_name: &str,
    out: Option<&Path>,
    pretty: bool,
) -> Result<bool, Error> {
    let tag = structure.tag()?;
    let p = json::matpoly_from_str(&read_to_string(input)?)?;
    let d = split_grade(p.grade(), ell)?;
    let registry = PlanRegistry::default();
    let plan = resolve_plan(&registry, plan_name, tag, d, ell)?;
    let result = build_structured(&p, tag, ell, &plan)?;
    println!(
        "built {} degree-{} construction: size {}, grid {}x{} blocks of {}, plan {}, shift {}",
        tag,
        ell,
        result.l.base().rows(),
        result.l.block_rows(),
        result.l.block_cols(),
        result.n,
        plan.name,
        result.shift
    );
    let census = sparsity_census(&result.l, result.d, result.ell, Some(tag.kind));
    println!(
        "nonzero blocks: {} (family minimum {}{})",
        census.nonzero_blocks,
        census.family_minimum,
        census
            .structured_floor
            .map(|f| format!(", structured floor {f}"))
            .unwrap_or_default()
    );
    if pretty {
        print!("{}", result.l.pretty());
    }
    if let Some(path) = out {
        write_output(path, &json::block_to_string(&result.l))?;
        println!("wrote {}", path.display());
    }
    Ok(true)
}

fn run_verify(
    lification: &Path,
    poly: &Path,
    ell: Option<usize>,
    report_path: Option<&Path>,
) -> Result<bool, Error> {
    let (l, block) = json::matpoly_or_block_from_str(&read_to_string(lification)?)?;
    let p = json::matpoly_from_str(&read_to_string(poly)?)?;
    let ell = ell.unwrap_or(l.grade());
    let report = certify_lification(&l, &p, ell, p.grade())?;
    let mut indices = json::IndexSets::default();
    let p_singular = p.det_poly().map(|d| d.is_zero()).unwrap_or(false);
    if p_singular {
        indices.right_p = measure_minimal_indices(&p, NullSide::Right)?;
        indices.left_p = measure_minimal_indices(&p, NullSide::Left)?;
        if l.det_poly().map(|d| d.is_zero()).unwrap_or(false) {
            indices.right_l = measure_minimal_indices(&l, NullSide::Right)?;
            indices.left_l = measure_minimal_indices(&l, NullSide::Left)?;
        }
    }
    let mut checks: BTreeMap<String, bool> = BTreeMap::new();
    for (key, value) in structure_survey(&p) {
        checks.insert(format!("p:{key}"), value);
    }
    for (key, value) in structure_survey(&l) {
        checks.insert(format!("l:{key}"), value);
    }
    let census = block.as_ref().map(|b| b.nonzero_block_count());
    let dto = json::report_to_dto(&report, Some(&indices), checks, census);
    let text = serde_json::to_string_pretty(&dto).expect("serializable");
    match report_path {
        Some(path) => {
            write_output(path, &text)?;
            println!("wrote {}", path.display());
        }
        None => println!("{text}"),
    }
    println!(
        "is_lification: {}, is_strong: {}, s = {}",
        report.is_lification, report.is_strong, report.padding
    );
    Ok(report.is_strong)
}

fn run_recover(input: &Path, structure: &StructureArgs, out: Option<&Path>) -> Result<bool, Error> {
    let tag = structure.tag()?;
    let block = json::block_from_str(&read_to_string(input)?)?;
    if block.block_rows() != block.block_cols() {
        return Err(Error::ShapeMismatch("middle block grid must be square".into()));
    }
    let d = block.block_rows() - 1;
    let ell = block.grade();
    let n = block.block_size();
    let a = MobiusMatrix::named(tag.mobius_name(), block.base().backend());
    let recovered = recover_target(block.base(), &a, tag.sign(), d, ell, n)?;
    let sign_text = match recovered.sign {
        ellify::Sign::Plus => "+",
        ellify::Sign::Minus => "-",
    };
    println!(
        "recovered grade-{} target ({}x{}), triple product equals {}P",
        (2 * d + 1) * ell,
        n,
        n,
        sign_text
    );
    let target = recovered.polynomial();
    if let Some(path) = out {
        write_output(path, &json::matpoly_to_string(&target))?;
        println!("wrote {}", path.display());
    }
    Ok(true)
}

fn parse_mobius_matrix(text: &str, backend: ellify::Backend) -> Result<MobiusMatrix, Error> {
    use ellify::NamedMobius;
    match text {
        "A1" => Ok(MobiusMatrix::named(NamedMobius::A1, backend)),
        "A2" => Ok(MobiusMatrix::named(NamedMobius::A2, backend)),
        "A3" => Ok(MobiusMatrix::named(NamedMobius::A3, backend)),
        "cayley+1" => Ok(MobiusMatrix::cayley_plus(backend)),
        "cayley-1" => Ok(MobiusMatrix::cayley_minus(backend)),
        other => {
            let entries: Vec<&str> = other.split(',').map(str::trim).collect();
            if entries.len() != 4 {
                return Err(Error::Parse(format!(
                    "matrix must be a named one or four comma-separated entries, got `{other}`"
                )));
            }
            let mut parsed = entries
                .iter()
                .map(|e| ellify::parse_scalar(e, backend))
                .collect::<Result<Vec<_>, _>>()?;
            let d = parsed.pop().expect("four entries");
            let c = parsed.pop().expect("four entries");
            let b = parsed.pop().expect("four entries");
            let a = parsed.pop().expect("four entries");
            MobiusMatrix::new(a, b, c, d)
        }
    }
}

fn run_mobius(
    input: &Path,
    matrix: &str,
    minus: bool,
    out: Option<&Path>,
) -> Result<bool, Error> {
    let p = json::matpoly_from_str(&read_to_string(input)?)?;
    let a = parse_mobius_matrix(matrix, p.backend())?;
    let sign = if minus { ellify::Sign::Minus } else { ellify::Sign::Plus };
    let image = ellify::mobius::mobius(&a, &p, sign)?;
    println!(
        "transformed grade-{} polynomial with {}{}",
        p.grade(),
        matrix,
        if minus { " (negated input)" } else { "" }
    );
    match out {
        Some(path) => {
            write_output(path, &json::matpoly_to_string(&image))?;
            println!("wrote {}", path.display());
        }
        None => println!("{}", json::matpoly_to_string(&image)),
    }
    Ok(true)
}

fn run_refute(
    structure: &StructureArgs,
    grid_text: &str,
    allow_products: bool,
    seed: Option<u64>,
    report_path: Option<&Path>,
) -> Result<bool, Error> {
    let tag = structure.tag()?;
    let grid: Vec<refuter::Frac> = grid_text
        .split(',')
        .map(|s| s.trim().parse())
        .collect::<Result<_, _>>()?;
    let mut opts = RefuteOptions::new(tag.kind, tag.flavor, grid);
    opts.allow_products = allow_products;
    opts.permute_seed = seed;
    let report = refuter::refute(&opts)?;
    println!(
        "template space: {} candidates; staged nodes: {}; full identity checks: {}",
        report.templates_total, report.nodes_explored, report.full_checks
    );
    println!("satisfying templates: {}", report.satisfying_count);
    for w in &report.witnesses {
        println!("  witness: {w}");
    }
    if report.satisfying_count > 0 && !allow_products {
        println!(
            "NOTE: a companion template satisfied the identity; this contradicts the expected refutation"
        );
    }
    if let Some(path) = report_path {
        let value = serde_json::json!({
            "structure": structure.structure,
            "star": structure.star,
            "allow_products": allow_products,
            "templates_total": report.templates_total.to_string(),
            "nodes_explored": report.nodes_explored,
            "full_checks": report.full_checks,
            "satisfying_count": report.satisfying_count,
            "witnesses": report.witnesses,
            "seed": seed,
        });
        write_output(path, &serde_json::to_string_pretty(&value).expect("serializable"))?;
        println!("wrote {}", path.display());
    }
    Ok(true)
}

fn run_demo(which: &str, seed: u64, pretty: bool) -> Result<bool, Error> {
    let outcome = match which {
        "examduplic" => demos::demo_grade10(pretty)?,
        "quartic" => demos::demo_quartic_witness(seed, pretty)?,
        "cayley" => demos::demo_cayley_counterexample(seed, pretty)?,
        other => {
            return Err(Error::Parse(format!(
                "unknown demo `{other}` (expected examduplic, quartic, or cayley)"
            )))
        }
    };
    for line in &outcome.lines {
        println!("{line}");
    }
    for block in &outcome.pretty {
        println!("{block}");
    }
    println!("demo {}: {}", which, if outcome.passed { "ok" } else { "FAILED" });
    Ok(outcome.passed)
}

fn dispatch(cli: Cli) -> Result<bool, Error> {
    match &cli.command {
        Command::Build { input, structure, ell, plan, out, pretty } => {
            run_build(input, structure, *ell, plan, out.as_deref(), *pretty)
        }
        Command::Verify { lification, poly, ell, report } => {
            run_verify(lification, poly, *ell, report.as_deref())
        }
        Command::Sparse { input, structure, ell, out, pretty } => {
            run_build(input, structure, *ell, "sparse", out.as_deref(), *pretty)
        }
        Command::Recover { input, structure, out } => {
            run_recover(input, structure, out.as_deref())
        }
        Command::Mobius { input, matrix, minus, out } => {
            run_mobius(input, matrix, *minus, out.as_deref())
        }
        Command::RefuteQuartic { structure, grid, allow_products, seed, report } => {
            run_refute(structure, grid, *allow_products, *seed, report.as_deref())
        }
        Command::Demo { which, seed, pretty } => run_demo(which, *seed, *pretty),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e @ (Error::Parse(_) | Error::Schema(_) | Error::UnknownPlan(_))) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
