use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use osalg_core::algebra::{support_label, word};
use osalg_core::arrangement::Arrangement;
use osalg_core::linalg::{format_scalar, int};
use osalg_core::residue::alternating_boundary_sum;
use osalg_core::{
    check_diagonal_basis, dimensions, iterated_residue, parse_arrangement, parse_basis,
    parse_matroid, reduce_to_nbc, verify_exact_sequence, verify_uc, AlgebraConfig, AlgebraElement,
    ChiKind, ChiMap, DiagonalBasisCandidate, DualBasis, ElementSet, Matroid, OrderedTuple,
};
use serde_json::{json, Value};

const DEFAULT_MAX_N: usize = 12;

#[derive(Parser)]
#[command(
    name = "osalg",
    version,
    about = "Exact χ-algebras of matroids and arrangements"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the NBC sets, one per line
    Nbc {
        #[command(flatten)]
        input: Input,
        /// Only this degree
        #[arg(long)]
        level: Option<usize>,
    },
    /// Print the graded dimensions dim A_0, dim A_1, ...
    Dims {
        #[command(flatten)]
        input: Input,
    },
    /// Expand a monomial in a diagonal basis (default: NBC)
    Expand {
        #[command(flatten)]
        input: Input,
        /// Comma-separated word, e.g. 2,3,5
        #[arg(long)]
        monomial: String,
        /// Diagonal basis file
        #[arg(long)]
        basis: Option<PathBuf>,
    },
    /// Evaluate the iterated residue along --order on a monomial
    Residue {
        #[command(flatten)]
        input: Input,
        /// Comma-separated ordered independent set
        #[arg(long)]
        order: String,
        #[arg(long)]
        monomial: String,
    },
    /// Check that a basis file describes a diagonal basis
    CheckDiagonal {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        basis: PathBuf,
    },
    /// Run a verification suite
    Verify {
        #[command(flatten)]
        input: Input,
        /// UC1 and UC2 for the χ map
        #[arg(long, group = "suite")]
        chi: bool,
        /// The deletion/contraction sequence for element X
        #[arg(long, value_name = "X", group = "suite")]
        exact_sequence: Option<usize>,
        /// Coefficient sums of top-degree monomials in a diagonal basis
        #[arg(long, group = "suite")]
        sum_residues: bool,
        /// Diagonal basis for --sum-residues (default: NBC)
        #[arg(long)]
        basis: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Input {
    /// Matroid file {"n": .., "circuits": [[..], ..]}
    #[arg(
        long,
        conflicts_with = "arrangement",
        required_unless_present = "arrangement"
    )]
    matroid: Option<PathBuf>,
    /// Arrangement file {"d": .., "vectors": [[..], ..]}
    #[arg(long)]
    arrangement: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Algebra::Os)]
    algebra: Algebra,
    /// Overrides of the commutation table, {"beta": {"1,2": "-1", ..}}
    #[arg(long)]
    config: Option<PathBuf>,
    /// Machine-readable output
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algebra {
    Os,
    Ot,
    Sign,
}

/// Bad input (exit 2) versus a verification that ran and failed (exit 1).
enum Failure {
    Input(anyhow::Error),
    Verification,
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

type Outcome = Result<(), Failure>;

struct Loaded {
    matroid: Matroid,
    arrangement: Option<Arrangement>,
    chi: ChiMap,
    json: bool,
}

fn read(path: &Path, flag: &str) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("{flag}: cannot read {}", path.display()))
}

fn max_n() -> anyhow::Result<usize> {
    match std::env::var("OSALG_MAX_N") {
        Ok(v) => v
            .parse()
            .map_err(|_| anyhow!("OSALG_MAX_N: expected a size, got {v:?}")),
        Err(_) => Ok(DEFAULT_MAX_N),
    }
}

fn load(input: &Input) -> anyhow::Result<Loaded> {
    let (matroid, arrangement): (Matroid, Option<Arrangement>) =
        match (&input.matroid, &input.arrangement) {
            (Some(p), None) => {
                let m = parse_matroid(&read(p, "--matroid")?)
                    .with_context(|| format!("--matroid {}", p.display()))?;
                (m, None)
            }
            (None, Some(p)) => {
                let a = parse_arrangement(&read(p, "--arrangement")?)
                    .with_context(|| format!("--arrangement {}", p.display()))?;
                (a.matroid(), Some(a))
            }
            _ => bail!("exactly one of --matroid and --arrangement is required"),
        };
    let cap = max_n()?;
    if matroid.size() > cap {
        bail!(
            "{} elements exceed the enumeration cap of {cap}; raise OSALG_MAX_N to allow it",
            matroid.size()
        );
    }
    let chi = match (input.algebra, &arrangement) {
        (Algebra::Os, _) => ChiMap::orlik_solomon(&matroid),
        (Algebra::Ot, Some(a)) => ChiMap::orlik_terao(a)?,
        (Algebra::Sign, Some(a)) => ChiMap::oriented_sign(a)?,
        (Algebra::Ot | Algebra::Sign, None) => {
            bail!(
                "--algebra {} requires --arrangement",
                algebra_name(input.algebra)
            )
        }
    };
    let chi = match &input.config {
        Some(p) => {
            let config = AlgebraConfig::parse(&read(p, "--config")?)
                .with_context(|| format!("--config {}", p.display()))?;
            let beta = config.apply(chi.beta().clone()).context("--config")?;
            chi.with_beta(beta)
        }
        None => chi,
    };
    Ok(Loaded {
        matroid,
        arrangement,
        chi,
        json: input.json,
    })
}

fn algebra_name(a: Algebra) -> &'static str {
    match a {
        Algebra::Os => ChiKind::OrlikSolomon.name(),
        Algebra::Ot => ChiKind::OrlikTerao.name(),
        Algebra::Sign => ChiKind::OrientedSign.name(),
    }
}

fn parse_list(text: &str, flag: &str) -> anyhow::Result<Vec<usize>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<usize>()
                .map_err(|_| anyhow!("{flag}: {s:?} is not an element label"))
        })
        .collect()
}

fn parse_tuple(text: &str, flag: &str, m: &Matroid) -> anyhow::Result<OrderedTuple> {
    let t = OrderedTuple::new(parse_list(text, flag)?).map_err(|e| anyhow!("{flag}: {e}"))?;
    if !t.support().is_subset(m.ground()) {
        bail!(
            "{flag}: {} is not in the ground set {}",
            t.support(),
            m.ground()
        );
    }
    Ok(t)
}

fn set_json(s: ElementSet) -> Value {
    json!(s.to_vec())
}

fn human(a: &AlgebraElement) -> String {
    if a.is_zero() {
        return "0".into();
    }
    a.iter()
        .map(|(s, c)| format!("e[{}]: {}", support_label(s), format_scalar(c)))
        .collect::<Vec<_>>()
        .join("  ")
}

fn load_basis(path: &Path, m: &Matroid) -> anyhow::Result<DiagonalBasisCandidate> {
    let cand = parse_basis(&read(path, "--basis")?)
        .with_context(|| format!("--basis {}", path.display()))?;
    for t in &cand.elements {
        if !t.support().is_subset(m.ground()) {
            bail!("--basis: {t:?} is not in the ground set {}", m.ground());
        }
    }
    Ok(cand)
}

fn nbc(input: &Input, level: Option<usize>) -> Outcome {
    let l = load(input)?;
    let levels: Vec<usize> = match level {
        Some(k) => vec![k],
        None => (0..=l.matroid.full_rank()).collect(),
    };
    if l.json {
        let mut out = serde_json::Map::new();
        for k in &levels {
            let sets: Vec<Value> = l.matroid.nbc_sets(*k).into_iter().map(set_json).collect();
            out.insert(k.to_string(), Value::Array(sets));
        }
        println!("{}", Value::Object(out));
        return Ok(());
    }
    for k in levels {
        for s in l.matroid.nbc_sets(k) {
            if level.is_some() {
                println!("{s}");
            } else {
                println!("{k}: {s}");
            }
        }
    }
    Ok(())
}

fn dims(input: &Input) -> Outcome {
    let l = load(input)?;
    let d = dimensions(&l.matroid);
    if l.json {
        println!("{}", json!({ "dims": d }));
    } else {
        println!(
            "{}",
            d.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        );
    }
    Ok(())
}

fn expand(input: &Input, monomial: &str, basis: Option<&Path>) -> Outcome {
    let l = load(input)?;
    let w = parse_tuple(monomial, "--monomial", &l.matroid)?;
    let cand = match basis {
        Some(p) => load_basis(p, &l.matroid)?,
        None => DiagonalBasisCandidate::nbc(&l.matroid, w.len()),
    };
    if cand.level != w.len() {
        return Err(anyhow!(
            "--basis has level {} but --monomial has degree {}",
            cand.level,
            w.len()
        )
        .into());
    }
    let dual = DualBasis::new(&l.chi, &cand).context("--basis")?;
    let element = word(&l.chi, &w);
    let coords = dual.expand(&element).map_err(anyhow::Error::from)?;
    if l.json {
        println!("{}", coords.to_json());
    } else {
        println!("{}", human(&coords));
    }
    Ok(())
}

fn residue(input: &Input, order: &str, monomial: &str) -> Outcome {
    let l = load(input)?;
    let order = parse_tuple(order, "--order", &l.matroid)?;
    let w = parse_tuple(monomial, "--monomial", &l.matroid)?;
    if order.len() != w.len() {
        return Err(anyhow!(
            "--order has {} entries but --monomial has degree {}",
            order.len(),
            w.len()
        )
        .into());
    }
    if !l
        .matroid
        .is_independent(order.support())
        .map_err(anyhow::Error::from)?
    {
        return Err(anyhow!("--order: {} is dependent", order.support()).into());
    }
    let v = iterated_residue(&l.chi, &order, &word(&l.chi, &w)).map_err(anyhow::Error::from)?;
    if l.json {
        println!("{}", json!({ "value": format_scalar(&v) }));
    } else {
        println!("{}", format_scalar(&v));
    }
    Ok(())
}

fn check_diagonal(input: &Input, basis: &Path) -> Outcome {
    let l = load(input)?;
    let cand = load_basis(basis, &l.matroid)?;
    let verdict = check_diagonal_basis(&l.matroid, &cand);
    if l.json {
        let reason = verdict.as_ref().err().map(|f| f.to_string());
        println!(
            "{}",
            json!({ "diagonal": verdict.is_ok(), "reason": reason })
        );
    } else {
        match &verdict {
            Ok(()) => println!(
                "diagonal basis of degree {} ({} elements)",
                cand.level,
                cand.elements.len()
            ),
            Err(f) => println!("not a diagonal basis: {f}"),
        }
    }
    verdict.map_err(|_| Failure::Verification)
}

fn verify_chi(l: &Loaded) -> Outcome {
    let r = verify_uc(&l.chi);
    if l.json {
        let uc1: Vec<Value> = r
            .uc1
            .iter()
            .map(|v| json!({ "set": set_json(v.set), "independent": v.independent, "value": format_scalar(&v.value) }))
            .collect();
        let uc2: Vec<Value> = r
            .uc2
            .iter()
            .map(|v| json!({ "outer": set_json(v.outer), "inner": set_json(v.inner) }))
            .collect();
        println!(
            "{}",
            json!({ "ok": r.is_ok(), "subsets": r.subsets_checked, "pairs": r.pairs_checked, "uc1": uc1, "uc2": uc2 })
        );
    } else {
        for v in &r.uc1 {
            let state = if v.independent {
                "independent"
            } else {
                "dependent"
            };
            println!(
                "UC1 violation: {state} {} has value {}",
                v.set,
                format_scalar(&v.value)
            );
        }
        for v in &r.uc2 {
            println!(
                "UC2 violation: ∂e{} is not proportional to ∂e{} · e{}",
                v.outer,
                v.inner,
                v.outer.difference(v.inner)
            );
        }
        let status = |ok: bool| if ok { "ok" } else { "FAILED" };
        println!(
            "UC1: {} ({} subsets)",
            status(r.uc1.is_empty()),
            r.subsets_checked
        );
        println!(
            "UC2: {} ({} pairs)",
            status(r.uc2.is_empty()),
            r.pairs_checked
        );
    }
    if r.is_ok() {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn verify_sequence(l: &Loaded, x: usize) -> Outcome {
    if !l.matroid.ground().contains(x) {
        return Err(anyhow!(
            "--exact-sequence: {x} is not in the ground set {}",
            l.matroid.ground()
        )
        .into());
    }
    if l.matroid.is_loop(x) {
        return Err(anyhow!("--exact-sequence: {x} is a loop").into());
    }
    let r = verify_exact_sequence(&l.chi, x).map_err(anyhow::Error::from)?;
    if !r.simple {
        eprintln!(
            "warning: the matroid is not simple; exactness is only expected for simple matroids"
        );
    }
    if l.json {
        let degrees: Vec<Value> = r
            .degrees
            .iter()
            .map(|d| {
                json!({
                    "level": d.level,
                    "dim": d.dim,
                    "dim_deletion": d.dim_deletion,
                    "dim_contraction": d.dim_contraction,
                    "dims_add_up": d.dims_add_up,
                    "residue_kills_inclusion": d.residue_kills_inclusion,
                    "section_is_right_inverse": d.section_is_right_inverse,
                    "inclusion_injective": d.inclusion_injective,
                    "residue_kills_ideal": d.residue_kills_ideal,
                    "ok": d.passed(),
                })
            })
            .collect();
        println!(
            "{}",
            json!({ "element": x, "simple": r.simple, "ok": r.passed(), "degrees": degrees })
        );
    } else {
        for d in &r.degrees {
            let mark = |b: bool| if b { "ok" } else { "FAILED" };
            println!(
                "degree {}: {} = {} + {} {}; p∘i = 0 {}; section {}; injective {}; ideal {}",
                d.level,
                d.dim,
                d.dim_deletion,
                d.dim_contraction,
                mark(d.dims_add_up),
                mark(d.residue_kills_inclusion),
                mark(d.section_is_right_inverse),
                mark(d.inclusion_injective),
                mark(d.residue_kills_ideal)
            );
        }
        println!(
            "exact sequence for {x}: {}",
            if r.passed() { "ok" } else { "FAILED" }
        );
    }
    if r.passed() {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn verify_sums(l: &Loaded, basis: Option<&Path>) -> Outcome {
    if l.chi.kind() != ChiKind::OrlikTerao {
        eprintln!("warning: the sum rule is only expected for the Orlik-Terao algebra");
    } else if l.arrangement.as_ref().is_some_and(|a| !a.is_affine()) {
        eprintln!(
            "warning: the vectors are not affine (last coordinate 1); the sum rule is not expected"
        );
    }
    let top = l.matroid.full_rank();
    let cand = match basis {
        Some(p) => load_basis(p, &l.matroid)?,
        None => DiagonalBasisCandidate::nbc(&l.matroid, top),
    };
    if cand.level != top {
        return Err(anyhow!("--basis has level {} but the rank is {top}", cand.level).into());
    }
    let dual = DualBasis::new(&l.chi, &cand).context("--basis")?;
    let mut bad = Vec::new();
    let mut checked = 0;
    for j in l.matroid.independent_sets(top) {
        let e = AlgebraElement::monomial(j);
        if reduce_to_nbc(&l.chi, &e).is_zero() {
            continue;
        }
        checked += 1;
        let sum = dual
            .expand(&e)
            .map_err(anyhow::Error::from)?
            .coefficient_sum();
        if sum != int(1) {
            bad.push((j, sum));
        }
    }
    let mut flat_failures = Vec::new();
    let mut flat_checked = 0;
    let m = &l.matroid;
    for f in m
        .ground()
        .subsets()
        .filter(|f| !f.is_empty() && m.is_flat(*f).unwrap_or(false))
    {
        let r = m.rank(f).map_err(anyhow::Error::from)?;
        for u in f.combinations(r + 1) {
            flat_checked += 1;
            let s = alternating_boundary_sum(&l.chi, u);
            if s != int(0) {
                flat_failures.push((u, s));
            }
        }
    }
    let ok = bad.is_empty() && flat_failures.is_empty();
    if l.json {
        let bad: Vec<Value> = bad
            .iter()
            .map(|(j, s)| json!({ "set": set_json(*j), "sum": format_scalar(s) }))
            .collect();
        let flats: Vec<Value> = flat_failures
            .iter()
            .map(|(u, s)| json!({ "set": set_json(*u), "sum": format_scalar(s) }))
            .collect();
        println!(
            "{}",
            json!({ "ok": ok, "monomials": checked, "sum_failures": bad, "subsets": flat_checked, "alternating_failures": flats })
        );
    } else {
        for (j, s) in &bad {
            println!(
                "coefficients of e[{}] sum to {}",
                support_label(*j),
                format_scalar(s)
            );
        }
        for (u, s) in &flat_failures {
            println!("alternating sum over {u} is {}", format_scalar(s));
        }
        println!(
            "sum of residues: {} ({checked} monomials)",
            if bad.is_empty() { "ok" } else { "FAILED" }
        );
        println!(
            "alternating sums: {} ({flat_checked} subsets)",
            if flat_failures.is_empty() {
                "ok"
            } else {
                "FAILED"
            }
        );
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Nbc { input, level } => nbc(&input, level),
        Command::Dims { input } => dims(&input),
        Command::Expand {
            input,
            monomial,
            basis,
        } => expand(&input, &monomial, basis.as_deref()),
        Command::Residue {
            input,
            order,
            monomial,
        } => residue(&input, &order, &monomial),
        Command::CheckDiagonal { input, basis } => check_diagonal(&input, &basis),
        Command::Verify {
            input,
            chi,
            exact_sequence,
            sum_residues,
            basis,
        } => {
            let l = load(&input)?;
            if chi {
                verify_chi(&l)
            } else if let Some(x) = exact_sequence {
                verify_sequence(&l, x)
            } else if sum_residues {
                verify_sums(&l, basis.as_deref())
            } else {
                Err(anyhow!("verify needs one of --chi, --exact-sequence X, --sum-residues").into())
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
