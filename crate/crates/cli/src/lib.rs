//! The `necklace` command line: enumeration, single maps, correspondence
//! tables, Gleason data, counts and the verification suites.
//!
//! Every command builds a [`Report`] holding the same content as JSON and as
//! a table, so the three output formats never drift apart.

pub mod emit;
pub mod verify;

use std::fmt;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use necklace_core::bijections::{
    a_of_sigma, enumerate_cup, itinerary, lambda, phi, psi_plus, theta_plus, wr_phi, wr_psi, xi,
    xi_inv,
};
use necklace_core::counting::{count_report, gamma};
use necklace_core::gf2::{enumerate_irreducibles, reutenauer, IrreducibleSet};
use necklace_core::gleason::{
    assemble_row, enumerate_dbar, gleason, gleason_mod2, kneading_angle, kneading_sequence,
    real_roots, squarefree_certificate, DEFAULT_PRECISION, MAX_INT_N,
};
use necklace_core::shiftdyn::{omega, twisted_shift};
use necklace_core::words::enumerate_set;
use necklace_core::{
    BitString, CorrespondenceRow, CyclicUnimodalPermutation, Error, Gf2Poly, Gf2nField,
    InversionClass, Necklace, NecklaceSet, NormalBasis, Symbol,
};

pub use emit::{Format, Report, Table};
pub use verify::{run_verify, Check, Suite};

#[derive(Parser, Debug, Clone)]
#[command(
    name = "necklace",
    version,
    about = "Necklaces, unimodal cycles and real Gleason roots"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(clap::Args, Debug, Clone, Default)]
pub struct Options {
    /// String length / period.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Largest n for `count` and `verify`; also the size budget for `table`.
    #[arg(long, global = true)]
    pub max_n: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    pub format: Format,
    /// Field modulus as hex bits, e.g. 0x13 for x^4+x+1.
    #[arg(long, global = true)]
    pub modulus: Option<String>,
    /// Use β = α^k as the normal basis generator.
    #[arg(long, global = true)]
    pub beta_exp: Option<u64>,
    /// Target bracket width for real roots.
    #[arg(long, global = true)]
    pub precision: Option<f64>,
    /// Worker threads for `verify` (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Comma-separated verify suites.
    #[arg(long, global = true, value_delimiter = ',')]
    pub suites: Option<Vec<Suite>>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// List a set: N-, N+, Nt+, Nbar, Nbar1, Nbar2, CUP, I-, It+, Dbar or centers.
    Enumerate { set: String },
    /// Apply one map to one value.
    Map {
        /// One of the map names, e.g. xi, lambda or reutenauer.
        name: String,
        /// A bit string, a necklace `[...]`, a cycle `(...)` or a kneading sequence.
        input: String,
    },
    /// One correspondence row per real center of period n.
    Table,
    /// Gₙ, its reduction mod 2 and its certified real roots.
    Gleason,
    /// Closed-form counts and their identities.
    Count,
    /// Run the verification suites.
    Verify,
}

/// Largest `n` accepted by `table` unless `--max-n` raises it.
pub const DEFAULT_TABLE_BUDGET: usize = 10;
pub const DEFAULT_COUNT_MAX_N: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Bad input or an unmet precondition; exit status 2.
    Usage(String),
    /// An internal consistency check failed; exit status 1.
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failed(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Failed(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Consistency { .. } | Error::Isolation { .. } => CliError::Failed(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub fn run(cli: &Cli) -> CliResult<Report> {
    let o = &cli.opts;
    match &cli.command {
        Command::Enumerate { set } => run_enumerate(set, require_n(o)?, o),
        Command::Map { name, input } => run_map(name, input, o),
        Command::Table => run_table(require_n(o)?, o),
        Command::Gleason => run_gleason(require_n(o)?, o),
        Command::Count => run_count(o),
        Command::Verify => run_verify(o),
    }
}

fn require_n(o: &Options) -> CliResult<usize> {
    match o.n {
        Some(0) => Err(usage("--n must be at least 1")),
        Some(n) => Ok(n),
        None => Err(usage("this command needs --n")),
    }
}

fn precision(o: &Options) -> CliResult<f64> {
    match o.precision {
        None => Ok(DEFAULT_PRECISION),
        Some(p) if p > 0.0 && p < 1.0 => Ok(p),
        Some(p) => Err(usage(format!("--precision {p} must lie in (0, 1)"))),
    }
}

/// The default basis for `n`, or the one given by `--modulus` / `--beta-exp`.
pub fn basis_for(n: usize, o: &Options) -> CliResult<NormalBasis> {
    let field = match &o.modulus {
        None => Gf2nField::default_for(n)?,
        Some(hex) => {
            let m = Gf2Poly::from_hex(hex)?;
            if m.degree() != Some(n) {
                return Err(usage(format!(
                    "--modulus {m} has degree {:?}, expected {n}",
                    m.degree()
                )));
            }
            Gf2nField::new(m)?
        }
    };
    let hint = match (o.beta_exp, &o.modulus) {
        (Some(k), _) => Some(k),
        (None, None) => necklace_core::gf2::default_beta_exponent(n),
        (None, Some(_)) => None,
    };
    Ok(NormalBasis::find(&field, hint)?)
}

fn list_report(set: &str, n: usize, members: Vec<String>) -> Report {
    let mut table = Table::new([set]);
    for m in &members {
        table.push(vec![m.clone()]);
    }
    Report::new(
        json!({ "set": set, "n": n, "count": members.len(), "members": members }),
        table,
    )
}

pub fn run_enumerate(set: &str, n: usize, o: &Options) -> CliResult<Report> {
    let members: Vec<String> = match set {
        "CUP" | "cup" => enumerate_cup(n)?.iter().map(|s| s.to_string()).collect(),
        "Dbar" | "dbar" => enumerate_dbar(n)?
            .iter()
            .map(|d| {
                let cycles: Vec<String> = d
                    .cycles
                    .iter()
                    .map(|c| {
                        let pts: Vec<String> = c.points.iter().map(|p| p.to_string()).collect();
                        format!("({})", pts.join(" "))
                    })
                    .collect();
                format!("{} {} -> {}", d.tag(), cycles.join(" "), d.class)
            })
            .collect(),
        "centers" | "M1" => real_roots(n, precision(o)?)?
            .iter()
            .map(|c| format!("{:.15} {}", c.value, c.bracket))
            .collect(),
        other => match other.parse::<IrreducibleSet>() {
            Ok(kind) => enumerate_irreducibles(kind, n)?
                .iter()
                .map(|f| f.to_string())
                .collect(),
            Err(_) => {
                let family: NecklaceSet = other.parse().map_err(|_| {
                    usage(format!(
                        "unknown set {other:?}; expected N-, N+, Nt+, Nbar, Nbar1, Nbar2, CUP, I-, It+, Dbar or centers"
                    ))
                })?;
                enumerate_set(family, n)?.render()
            }
        },
    };
    Ok(list_report(set, n, members))
}

/// Names accepted by `map`.
pub const MAP_NAMES: [&str; 15] = [
    "xi",
    "xi_inv",
    "psi_plus",
    "theta_plus",
    "phi",
    "lambda",
    "wr_phi",
    "wr_psi",
    "reutenauer",
    "itinerary",
    "a_of_sigma",
    "twisted_shift",
    "omega",
    "kneading_sequence",
    "kneading_angle",
];

fn parse_kappa(text: &str) -> CliResult<Vec<Symbol>> {
    text.trim()
        .chars()
        .map(|ch| match ch {
            '+' => Ok(Symbol::Plus),
            '-' | '−' => Ok(Symbol::Minus),
            '*' | '⋆' => Ok(Symbol::Star),
            other => Err(usage(format!("bad itinerary symbol {other:?} in {text:?}"))),
        })
        .collect()
}

pub fn run_map(name: &str, input: &str, o: &Options) -> CliResult<Report> {
    let bits = || input.parse::<BitString>();
    let necklace = || input.parse::<Necklace>();
    let class = || input.parse::<InversionClass>();
    let cup = || input.parse::<CyclicUnimodalPermutation>();
    let output = match name {
        "xi" => xi(&bits()?).to_string(),
        "xi_inv" => xi_inv(&bits()?).to_string(),
        "psi_plus" => psi_plus(&necklace()?)?.to_string(),
        "theta_plus" => theta_plus(&class()?)?.to_string(),
        "phi" => phi(&cup()?).to_string(),
        "lambda" => lambda(&class()?)?.to_string(),
        "wr_phi" => wr_phi(&necklace()?)?.to_string(),
        "wr_psi" => wr_psi(&cup()?).to_string(),
        "reutenauer" => {
            let x = necklace()?;
            let n = o.n.unwrap_or(x.len());
            reutenauer(&x, &basis_for(n, o)?)?.to_string()
        }
        "itinerary" => itinerary(&cup()?).to_string(),
        "a_of_sigma" => a_of_sigma(&cup()?).to_string(),
        "twisted_shift" => twisted_shift(&bits()?).to_string(),
        "omega" => omega(&bits()?).to_string(),
        "kneading_sequence" => kneading_sequence(&parse_kappa(input)?)?.to_string(),
        "kneading_angle" => kneading_angle(&bits()?)?.to_string(),
        other => {
            return Err(usage(format!(
                "unknown map {other:?}; expected one of {}",
                MAP_NAMES.join(", ")
            )))
        }
    };
    let mut table = Table::new(["output"]);
    table.push(vec![output.clone()]);
    Ok(Report::new(
        json!({ "map": name, "input": input, "output": output }),
        table,
    ))
}

/// Column names of the correspondence table.
pub const TABLE_COLUMNS: [&str; 7] = ["M1", "M2", "D1", "P1", "N1", "N2", "N3"];

/// Rows for every real center of period `n`, in ascending `c`.
pub fn table_rows(n: usize, o: &Options) -> CliResult<Vec<CorrespondenceRow>> {
    let budget = o.max_n.unwrap_or(DEFAULT_TABLE_BUDGET);
    if n > budget {
        return Err(usage(format!(
            "table --n {n} exceeds the budget {budget}; raise --max-n"
        )));
    }
    if n > MAX_INT_N {
        return Err(usage(format!("table supports n ≤ {MAX_INT_N}")));
    }
    let basis = basis_for(n, o)?;
    real_roots(n, precision(o)?)?
        .iter()
        .map(|c| assemble_row(n, c, &basis).map_err(CliError::from))
        .collect()
}

pub fn run_table(n: usize, o: &Options) -> CliResult<Report> {
    let rows = table_rows(n, o)?;
    let mut table = Table::new(TABLE_COLUMNS);
    let mut json_rows = Vec::new();
    for row in &rows {
        table.push(row.cells().to_vec());
        let mut v = serde_json::to_value(row).expect("rows serialize");
        v["m1"] = Value::String(row.m1_cell());
        json_rows.push(v);
    }
    Ok(Report::new(json!({ "n": n, "rows": json_rows }), table))
}

pub fn run_gleason(n: usize, o: &Options) -> CliResult<Report> {
    if n > MAX_INT_N {
        return Err(usage(format!("gleason supports n ≤ {MAX_INT_N}")));
    }
    let g = gleason(n)?;
    let gbar = gleason_mod2(n)?;
    let factors = gbar.factor()?;
    let cert = squarefree_certificate(n)?;
    let roots = real_roots(n, precision(o)?)?;
    let gamma_n = gamma(n as u64)?;
    let counts_match = roots.len() == factors.len() && gamma_n == roots.len().into();

    let mut table = Table::new(["c", "bracket", "kneading", "angle", "permutation"]);
    for c in &roots {
        table.push(vec![
            format!("{:.15}", c.value),
            c.bracket.to_string(),
            c.kneading.to_string(),
            c.kneading_angle.to_string(),
            c.orbit_permutation.to_string(),
        ]);
    }
    let json = json!({
        "n": n,
        "degree": g.degree(),
        "polynomial": g.to_string(),
        "coefficients": g.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "mod2": gbar.to_string(),
        "factors": factors.iter().map(|(f, e)| json!({
            "poly": f.to_string(),
            "degree": f.degree(),
            "multiplicity": e,
            "centered": f.is_centered(),
        })).collect::<Vec<_>>(),
        "squarefree_prime": cert.prime,
        "gamma": gamma_n.to_string(),
        "roots": roots.iter().map(|c| json!({
            "c": c.value,
            "bracket": c.bracket,
            "kneading": c.kneading.to_string(),
            "angle": c.kneading_angle,
            "permutation": c.orbit_permutation.to_string(),
            "itinerary": c.itinerary.to_string(),
        })).collect::<Vec<_>>(),
        "counts_match": counts_match,
    });
    let mut report = Report::new(json, table);
    report.success = counts_match;
    Ok(report)
}

pub fn run_count(o: &Options) -> CliResult<Report> {
    let ns: Vec<u64> = match (o.n, o.max_n) {
        (Some(0), _) | (None, Some(0)) => return Err(usage("n must be at least 1")),
        (Some(n), _) => vec![n as u64],
        (None, m) => (1..=m.unwrap_or(DEFAULT_COUNT_MAX_N) as u64).collect(),
    };
    let reports = ns
        .iter()
        .map(|&n| count_report(n).map_err(CliError::from))
        .collect::<CliResult<Vec<_>>>()?;
    let mut table = Table::new([
        "n", "gamma", "p", "c", "xi", "epsilon", "delta", "s0", "s1", "t_minus", "holds",
    ]);
    for r in &reports {
        let a = &r.appendix;
        let sub = |f: &dyn Fn(&necklace_core::counting::SubsetSumCounts) -> String| {
            r.subset_sums.as_ref().map(f).unwrap_or_else(|| "-".into())
        };
        table.push(vec![
            a.n.to_string(),
            a.gamma.to_string(),
            a.p.to_string(),
            a.c.to_string(),
            a.xi.to_string(),
            a.epsilon.to_string(),
            a.delta.to_string(),
            sub(&|s| s.s0.to_string()),
            sub(&|s| s.s1.to_string()),
            sub(&|s| s.t_minus.to_string()),
            r.all_verdicts_hold().to_string(),
        ]);
    }
    let holds = reports.iter().all(|r| r.all_verdicts_hold());
    let mut report = Report::new(json!({ "reports": reports, "all_hold": holds }), table);
    report.success = holds;
    Ok(report)
}
