mod output;

use std::collections::BTreeSet;
use std::fs::{File, OpenOptions};
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use sumlab::formula::{self, KnownValue};
use sumlab::harness::{
    find_claim, list_claims, read_records, run_claim, settled_keys, summarize, write_summary,
    ClaimRecord, RangeSpec, RunConfig, Status, SummaryRow,
};
use sumlab::search::{
    self, classify_witness, critical_number, critical_sigma, critical_span, min_dilated_norm,
    min_size, CriticalOutcome, Filter, SearchConfig, SearchTask, Target, WitnessClassification,
    DEFAULT_BUDGET, DEFAULT_WITNESS_CAP,
};
use sumlab::sumset::{self, signed_view};
use sumlab::{ElementSet, Error, GroupSpec, SumsetKind};

use output::{Format, Report};

#[derive(Parser)]
#[command(name = "sumlab", version, about = "Sumset sizes and critical numbers in finite abelian groups")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args)]
struct Global {
    /// Group as invariant factors, e.g. 12, 2x6, 3x3.
    #[arg(long, global = true)]
    group: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t)]
    format: Format,
    /// Worker threads.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Output file (for verify, the record stream).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Skip points already recorded in the --out stream.
    #[arg(long, global = true)]
    resume: bool,
    /// Largest estimated orbit count a search may enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Fold,
    Restricted,
    Signed,
}

impl From<Kind> for SumsetKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Fold => SumsetKind::Fold,
            Kind::Restricted => SumsetKind::Restricted,
            Kind::Signed => SumsetKind::Signed,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FilterArg {
    All,
    Sym,
    Nsym,
    Asym,
}

impl From<FilterArg> for Filter {
    fn from(f: FilterArg) -> Self {
        match f {
            FilterArg::All => Filter::All,
            FilterArg::Sym => Filter::Symmetric,
            FilterArg::Nsym => Filter::NearSymmetric,
            FilterArg::Asym => Filter::Asymmetric,
        }
    }
}

/// Number of summands: a fixed `h`, or unbounded.
#[derive(Args, Clone, Copy)]
#[group(required = true, multiple = false)]
struct Terms {
    #[arg(long)]
    h: Option<u64>,
    /// Any number of terms, the empty sum included.
    #[arg(long = "N0")]
    n0: bool,
    /// Any positive number of terms.
    #[arg(long = "N")]
    n_pos: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "UPPER")]
enum Builder {
    #[value(alias = "a")]
    A,
    #[value(alias = "b")]
    B,
    #[value(alias = "c")]
    C,
}

#[derive(Subcommand)]
enum Command {
    /// Describe a group.
    Group {
        /// List every element.
        #[arg(long)]
        elements: bool,
    },
    /// Compute a sumset of a given set.
    Sumset {
        #[arg(long, num_args = 1.., required = true)]
        set: Vec<String>,
        #[command(flatten)]
        terms: Terms,
        #[arg(long, value_enum, default_value = "fold")]
        kind: Kind,
    },
    /// Exhaustive minimum sumset size over m-subsets, with formula values.
    Min {
        #[arg(long)]
        m: u64,
        #[command(flatten)]
        terms: Terms,
        #[arg(long, value_enum, default_value = "fold")]
        kind: Kind,
        #[arg(long, value_enum, default_value = "all")]
        filter: FilterArg,
        /// Witnesses to print.
        #[arg(long, default_value_t = 10)]
        show: usize,
    },
    /// Exhaustive critical number, with the closed form when one is known.
    Critical {
        #[command(flatten)]
        terms: Terms,
        #[arg(long, value_enum, default_value = "fold")]
        kind: Kind,
        /// Draw subsets from G minus {0}.
        #[arg(long)]
        exclude_zero: bool,
    },
    /// Build an extremal construction in Z_n.
    Construct {
        #[arg(value_enum)]
        builder: Builder,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        k1: Option<u64>,
        #[arg(long)]
        k2: Option<u64>,
        #[arg(long)]
        j0: Option<u64>,
        #[arg(long = "step")]
        g: Option<u64>,
        /// Also report the restricted h-fold sumset size.
        #[arg(long)]
        h: Option<u64>,
    },
    /// Run a registered claim over its parameter grid.
    Verify {
        claim: String,
        #[arg(long)]
        min_order: Option<u64>,
        #[arg(long)]
        max_order: Option<u64>,
        #[arg(long)]
        max_h: Option<u64>,
        /// Alias for --max-order on claims over prime orders.
        #[arg(long, conflicts_with = "max_order")]
        primes_to: Option<u64>,
    },
    /// List registered claims.
    List,
    /// Report the structure of a set.
    Classify {
        #[arg(long, num_args = 1.., required = true)]
        set: Vec<String>,
    },
    /// Summarize record streams as CSV.
    Summarize {
        #[arg(required = true)]
        streams: Vec<PathBuf>,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Lib(Error),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Lib(Error::TheoremFailure { .. }) => 1,
            _ => 2,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(s) => write!(f, "{s}"),
            Failure::Lib(Error::BudgetExceeded { estimate, budget }) => write!(
                f,
                "refused: estimated {estimate} orbits exceeds budget {budget} (raise --budget)"
            ),
            Failure::Lib(e) => write!(f, "{e}"),
            Failure::Io(e) => write!(f, "I/O error: {e}"),
        }
    }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        // The reader went away (e.g. piped into head); nothing left to report.
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: Cli) -> CmdResult {
    let g = &cli.global;
    let cfg = SearchConfig {
        budget: g.budget,
        witness_cap: DEFAULT_WITNESS_CAP,
        jobs: g.jobs.max(1),
    };
    match &cli.cmd {
        Command::Group { elements } => emit(g, cmd_group(&group(g)?, *elements)),
        Command::Sumset { set, terms, kind } => emit(g, cmd_sumset(&group(g)?, set, *terms, *kind)?),
        Command::Min {
            m,
            terms,
            kind,
            filter,
            show,
        } => emit(g, cmd_min(&group(g)?, *m, *terms, *kind, *filter, *show, &cfg)?),
        Command::Critical {
            terms,
            kind,
            exclude_zero,
        } => emit(g, cmd_critical(&group(g)?, *terms, *kind, *exclude_zero, &cfg)?),
        Command::Construct {
            builder,
            n,
            m,
            d,
            k1,
            k2,
            j0,
            g: step,
            h,
        } => {
            let params = [*k1, *k2, *j0, *step];
            emit(g, cmd_construct(*builder, *n, *m, *d, params, *h)?)
        }
        Command::Verify {
            claim,
            min_order,
            max_order,
            max_h,
            primes_to,
        } => {
            let range = RangeSpec {
                min_order: *min_order,
                max_order: max_order.or(*primes_to),
                max_h: *max_h,
            };
            cmd_verify(g, claim, &range)
        }
        Command::List => cmd_list(g),
        Command::Classify { set } => emit(g, cmd_classify(&group(g)?, set)?),
        Command::Summarize { streams } => cmd_summarize(g, streams),
    }
}

fn group(g: &Global) -> Result<GroupSpec, Failure> {
    let s = g
        .group
        .as_deref()
        .ok_or_else(|| Failure::Usage("--group is required".into()))?;
    Ok(GroupSpec::parse(s)?)
}

/// Accepts `{0,5,10}` as one argument or brace-expanded by a shell into
/// separate words.
fn parse_set(g: &GroupSpec, words: &[String]) -> Result<ElementSet, Failure> {
    let literal = match words {
        [one] if one.trim_start().starts_with('{') => one.clone(),
        _ => format!("{{{}}}", words.join(",")),
    };
    Ok(g.parse_set(&literal)?)
}

fn sink(g: &Global) -> io::Result<Box<dyn Write>> {
    Ok(match &g.out {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout().lock()),
    })
}

fn emit(g: &Global, report: Report) -> CmdResult {
    let mut out = sink(g)?;
    report.write(g.format, &mut out)?;
    out.flush()?;
    Ok(0)
}

fn known(k: &KnownValue) -> Value {
    json!({ "status": k.status, "value": k.value })
}

fn target_for(terms: Terms, kind: Kind) -> Target {
    match (terms.h, kind) {
        (Some(h), k) => Target::Sumset { kind: k.into(), h },
        (None, Kind::Restricted) => Target::Sigma {
            include_empty: terms.n0,
        },
        (None, _) => Target::Span,
    }
}

fn target_name(t: Target) -> String {
    match t {
        Target::Sumset { kind, h } => format!("{} h={h}", kind.name()),
        Target::Sigma { include_empty: true } => "subset sums (N0)".into(),
        Target::Sigma { include_empty: false } => "nonempty subset sums (N)".into(),
        Target::Span => "span".into(),
    }
}

fn cmd_group(g: &GroupSpec, elements: bool) -> Report {
    let mut r = Report::new()
        .field("group", g.to_string())
        .field("factors", g.factors().to_vec())
        .field("order", g.order())
        .field("rank", g.rank())
        .field("exponent", g.exponent())
        .field("smallest_prime", g.smallest_prime())
        .field("cyclic", g.is_cyclic())
        .field("involutions", g.involution_count());
    if elements {
        let all: Vec<String> = (0..g.n()).map(|x| g.format_element(x)).collect();
        r = r.field("elements", all);
    }
    r
}

fn cmd_sumset(g: &GroupSpec, words: &[String], terms: Terms, kind: Kind) -> Result<Report, Failure> {
    let a = parse_set(g, words)?;
    let target = target_for(terms, kind);
    let s = match target {
        Target::Sumset { kind, h } => sumset::sumset(g, &a, h, kind)?,
        Target::Sigma { include_empty } => sumset::sigma(g, &a, include_empty),
        Target::Span => sumset::span(g, &a),
    };
    Ok(Report::new()
        .field("group", g.to_string())
        .field("set", g.format_set(&a))
        .field("target", target_name(target))
        .field("result", g.format_set(&s))
        .field("size", s.len()))
}

/// Closed-form and conjectured values for the minimum, with the name of
/// the one the oracle is compared against.
fn formula_values(g: &GroupSpec, m: u64, target: Target, filter: Filter) -> (Vec<(&'static str, Option<u64>)>, Option<&'static str>) {
    let n = g.order();
    let mut out = Vec::new();
    let mut reference = None;
    match target {
        Target::Sumset { kind: SumsetKind::Fold, h } if filter == Filter::All => {
            out.push(("u", formula::u(n, m, h).ok()));
            reference = Some("u");
        }
        Target::Sumset { kind: SumsetKind::Restricted, h } if filter == Filter::All => {
            if g.is_cyclic() {
                out.push(("u_hat", formula::u_hat(n, m, h).ok()));
                out.push(("w_hat", formula::w_hat(n, m, h).ok().and_then(|k| k.value)));
                out.push(("conjectured", formula::rho_hat_conjectured(n, m, h).ok()));
                reference = Some("conjectured");
                if h == 2 {
                    out.push(("h2_conjectured", formula::rho_hat2_conjectured(n, m).ok()));
                }
            }
            if let Ok(v) = formula::rho_hat_prime(n, m, h) {
                out.push(("prime", Some(v)));
                reference = Some("prime");
            }
            if h == 2 {
                if let Ok(b) = formula::rho_hat2_bounds(g, m) {
                    out.push(("upper_bound", Some(b.upper)));
                    out.push(("lower_bound", b.lower.value));
                    out.push(("lev_lower_bound", Some(b.lev_lower)));
                    reference = reference.or(Some("upper_bound"));
                }
            }
        }
        Target::Sumset { kind: SumsetKind::Signed, h } if filter == Filter::All => {
            out.push(("u_pm", formula::u_pm(g, m, h).ok()));
            out.push(("rho", formula::u(n, m, h).ok()));
            if let Ok(v) = formula::rho_pm_conjectured(g, m, h) {
                out.push(("conjectured", Some(v)));
                reference = Some("conjectured");
            }
        }
        Target::Sigma { include_empty } if g.is_cyclic() => {
            if filter == Filter::All && include_empty {
                out.push(("u_sigma", formula::u_sigma(n, m).ok()));
                reference = Some("u_sigma");
            }
            if filter == Filter::Asymmetric {
                if let Ok((full, nonempty)) = formula::balandraud(n, m) {
                    out.push(("asymmetric", Some(if include_empty { full } else { nonempty })));
                    reference = Some("asymmetric");
                }
            }
        }
        Target::Span if filter == Filter::All => {
            out.push(("u_span", formula::rho_span(n, m).ok()));
            reference = Some("u_span");
        }
        _ => {}
    }
    (out, reference)
}

fn structure_label(c: &WitnessClassification) -> String {
    if c.is_ap {
        return "progression".into();
    }
    if c.is_cube {
        return "cube".into();
    }
    if c.in_prime_coset {
        return "prime coset".into();
    }
    match c.coset_union_profile {
        Some(p) => format!(
            "{} full + {} partial cosets of order {}",
            p.full_cosets, p.partial_cosets, p.d
        ),
        None => "other".into(),
    }
}

fn cmd_min(
    g: &GroupSpec,
    m: u64,
    terms: Terms,
    kind: Kind,
    filter: FilterArg,
    show: usize,
    cfg: &SearchConfig,
) -> Result<Report, Failure> {
    let target = target_for(terms, kind);
    let filter: Filter = filter.into();
    let task = SearchTask::new(g.clone(), m, target).with_filter(filter);
    let out = min_size(&task, cfg)?;
    let (formulas, reference) = formula_values(g, m, target, filter);
    let diff = reference
        .and_then(|name| formulas.iter().find(|(k, _)| *k == name))
        .and_then(|(_, v)| *v)
        .map(|v| out.value as i64 - v as i64);
    let classes: BTreeSet<String> = out
        .witnesses
        .iter()
        .map(|w| structure_label(&classify_witness(g, w)))
        .collect();
    let formula_obj: serde_json::Map<String, Value> = formulas
        .iter()
        .map(|(k, v)| (k.to_string(), json!(v)))
        .collect();
    let shown: Vec<String> = out.witnesses.iter().take(show).map(|w| g.format_set(w)).collect();
    Ok(Report::new()
        .field("group", g.to_string())
        .field("m", m)
        .field("target", target_name(target))
        .field("filter", format!("{filter:?}").to_lowercase())
        .field("oracle", out.value)
        .field("formulas", Value::Object(formula_obj))
        .field("reference", reference)
        .field("difference", diff)
        .field("witness_classes", classes.into_iter().collect::<Vec<_>>())
        .field("witness_count", out.witnesses.len())
        .field("truncated", out.truncated)
        .field("witnesses", shown))
}

fn cmd_critical(
    g: &GroupSpec,
    terms: Terms,
    kind: Kind,
    exclude_zero: bool,
    cfg: &SearchConfig,
) -> Result<Report, Failure> {
    let target = target_for(terms, kind);
    if exclude_zero && !matches!(target, Target::Sigma { .. }) {
        return Err(Failure::Usage("--exclude-zero applies to --N0 --kind restricted".into()));
    }
    let (out, formula): (CriticalOutcome, Option<KnownValue>) = match target {
        Target::Sumset { kind, h } => {
            let out = critical_number(g, h, kind, cfg)?;
            let f = match kind {
                SumsetKind::Fold => Some(KnownValue::exact(formula::chi(g, h), "CHI-EQ-V")),
                SumsetKind::Restricted => Some(formula::chi_hat_known(g, h)),
                SumsetKind::Signed => None,
            };
            (out, f)
        }
        Target::Sigma { include_empty: false } => {
            return Err(Failure::Usage("critical numbers of subset sums take --N0".into()))
        }
        Target::Sigma { include_empty: true } => {
            let out = critical_sigma(g, exclude_zero, cfg)?;
            let f = match (exclude_zero, formula::chi_hat_sigma(g)) {
                (false, Ok(v)) => Some(KnownValue::exact(v, "CHI-HAT-SIGMA")),
                _ => None,
            };
            (out, f)
        }
        Target::Span => (
            critical_span(g, cfg)?,
            Some(KnownValue::exact(formula::chi_span(g), "CHI-SPAN")),
        ),
    };
    let value: Value = match out.value {
        Some(v) => v.into(),
        None => "undefined".into(),
    };
    Ok(Report::new()
        .field("group", g.to_string())
        .field("target", target_name(target))
        .field("exclude_zero", exclude_zero)
        .field("critical", value)
        .field("formula", formula.as_ref().map(known))
        .field("noncovering_witness", out.witness.map(|w| g.format_set(&w))))
}

fn cmd_construct(
    builder: Builder,
    n: u64,
    m: u64,
    d: u64,
    [k1, k2, j0, step]: [Option<u64>; 4],
    h: Option<u64>,
) -> Result<Report, Failure> {
    let set = match builder {
        Builder::A => formula::construct_a(n, m, d)?,
        Builder::C => formula::construct_c(n, m, d)?,
        Builder::B => {
            let params = match (k1, k2, j0, step) {
                (Some(k1), Some(k2), Some(j0), Some(g)) => formula::BParams { k1, k2, j0, g },
                (None, None, None, None) => *formula::b_params(n, m, d).first().ok_or_else(|| {
                    Failure::Usage(format!("no valid B parameters for n={n}, m={m}, d={d}"))
                })?,
                _ => return Err(Failure::Usage("give all of --k1 --k2 --j0 --step or none".into())),
            };
            formula::construct_b(n, m, d, &params)?
        }
    };
    let g = GroupSpec::cyclic(n)?;
    let mut r = Report::new()
        .field("group", g.to_string())
        .field("builder", format!("{builder:?}"))
        .field("d", d)
        .field("set", g.format_set(&set))
        .field("size", set.len());
    if let Some(h) = h {
        r = r.field("restricted_sumset_size", sumset::restricted_sumset(&g, &set, h).len());
    }
    if builder == Builder::C {
        r = r.field("subset_sums_size", sumset::sigma(&g, &set, true).len());
    }
    Ok(r)
}

fn cmd_classify(g: &GroupSpec, words: &[String]) -> Result<Report, Failure> {
    let a = parse_set(g, words)?;
    let c = classify_witness(g, &a);
    let profile = c.coset_union_profile.map(|p| {
        json!({ "d": p.d, "full_cosets": p.full_cosets, "partial_cosets": p.partial_cosets })
    });
    let mut r = Report::new()
        .field("group", g.to_string())
        .field("set", g.format_set(&a))
        .field("size", a.len())
        .field("structure", structure_label(&c))
        .field("is_ap", c.is_ap)
        .field("ap_step", search::ap_step(g, &a).map(|s| g.format_element(s)))
        .field("in_prime_coset", c.in_prime_coset)
        .field("coset_union_profile", profile)
        .field("is_cube", c.is_cube)
        .field("symmetry", c.symmetry.name());
    if g.is_cyclic() && signed_view(g.order(), &a).is_ok() {
        let (norm, b) = min_dilated_norm(g.order(), &a)?;
        r = r
            .field("norm", signed_view(g.order(), &a)?.norm)
            .field("min_dilated_norm", norm)
            .field("min_norm_multiplier", b);
    }
    Ok(r)
}

fn cmd_list(g: &Global) -> CmdResult {
    let mut out = sink(g)?;
    match g.format {
        Format::Text => {
            for c in list_claims() {
                writeln!(out, "{:<22} {:<10} {}", c.id, c.kind.name(), c.statement)?;
            }
        }
        Format::Json => {
            writeln!(out, "{}", json!({ "claims": list_claims() }))?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(["id", "kind", "statement", "domain", "min_order", "max_order", "max_h"])
                .map_err(io::Error::from)?;
            for c in list_claims() {
                w.write_record([
                    c.id.to_string(),
                    c.kind.name().to_string(),
                    c.statement.to_string(),
                    c.domain.to_string(),
                    c.defaults.min_order.to_string(),
                    c.defaults.max_order.to_string(),
                    c.defaults.max_h.to_string(),
                ])
                .map_err(io::Error::from)?;
            }
            w.flush()?;
        }
    }
    out.flush()?;
    Ok(0)
}

fn read_stream(path: &Path) -> Result<Vec<ClaimRecord>, Failure> {
    Ok(read_records(BufReader::new(File::open(path)?))?)
}

fn summary_path(stream: &Path) -> PathBuf {
    let mut name = stream.as_os_str().to_owned();
    name.push(".summary.csv");
    PathBuf::from(name)
}

fn totals<'a>(rows: impl Iterator<Item = &'a SummaryRow>) -> SummaryRow {
    rows.fold(SummaryRow::default(), |mut t, r| {
        t.points += r.points;
        t.matches += r.matches;
        t.discrepancies += r.discrepancies;
        t.refused += r.refused;
        t.undefined += r.undefined;
        t.max_gap = t.max_gap.max(r.max_gap);
        t
    })
}

/// A record without its timing, for reproducible console output.
fn record_json(r: &ClaimRecord) -> Value {
    json!({
        "group": r.group,
        "m": r.m,
        "h": r.h,
        "expected": r.expected,
        "observed": r.observed,
        "witness": r.witness,
    })
}

fn cmd_verify(g: &Global, id: &str, range: &RangeSpec) -> CmdResult {
    let claim = find_claim(id)?;
    if g.resume && g.out.is_none() {
        return Err(Failure::Usage("--resume needs --out".into()));
    }
    let cfg = RunConfig {
        jobs: g.jobs.max(1),
        budget: g.budget,
        witness_cap: DEFAULT_WITNESS_CAP,
    };
    let mut buffer = Vec::new();
    let (result, records) = match &g.out {
        Some(path) => {
            let settled = if g.resume && path.exists() {
                settled_keys(&read_stream(path)?)
            } else {
                Default::default()
            };
            let mut file = OpenOptions::new()
                .create(true)
                .append(g.resume)
                .write(true)
                .truncate(!g.resume)
                .open(path)?;
            let result = run_claim(claim, range, &cfg, &settled, &mut file);
            drop(file);
            (result, read_stream(path)?)
        }
        None => {
            let result = run_claim(claim, range, &cfg, &Default::default(), &mut buffer);
            (result, read_records(buffer.as_slice())?)
        }
    };
    let records: Vec<ClaimRecord> = records.into_iter().filter(|r| r.claim_id == claim.id).collect();
    let rows = summarize(&records)?;
    if let Some(path) = &g.out {
        write_summary(&rows, File::create(summary_path(path))?)?;
    }
    match &result {
        Ok(s) => eprintln!("{}: {} points evaluated, {} resumed", claim.id, s.points, s.skipped),
        Err(e) => eprintln!("{}: {e}", claim.id),
    }
    let t = totals(rows.values());
    let discrepancies: Vec<&ClaimRecord> = records
        .iter()
        .filter(|r| r.status == Status::Discrepancy)
        .collect();

    let mut out = io::stdout().lock();
    match g.format {
        Format::Csv => write_summary(&rows, &mut out)?,
        Format::Json => {
            let doc = json!({
                "claim": claim.id,
                "kind": claim.kind,
                "points": t.points,
                "match": t.matches,
                "discrepancy": t.discrepancies,
                "refused": t.refused,
                "undefined": t.undefined,
                "max_gap": t.max_gap,
                "discrepancies": discrepancies.iter().map(|r| record_json(r)).collect::<Vec<_>>(),
            });
            writeln!(out, "{doc}")?;
        }
        Format::Text => {
            writeln!(out, "claim: {} ({})", claim.id, claim.kind.name())?;
            writeln!(
                out,
                "points: {}  match: {}  discrepancy: {}  refused: {}  undefined: {}",
                t.points, t.matches, t.discrepancies, t.refused, t.undefined
            )?;
            for r in &discrepancies {
                writeln!(out, "discrepancy: {}", record_json(r))?;
            }
        }
    }
    out.flush()?;
    result?;
    Ok(if t.discrepancies > 0 { 3 } else { 0 })
}

fn cmd_summarize(g: &Global, streams: &[PathBuf]) -> CmdResult {
    let mut records = Vec::new();
    for path in streams {
        records.extend(read_stream(path)?);
    }
    let rows = summarize(&records)?;
    let mut out = sink(g)?;
    match g.format {
        Format::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|((claim, order), r)| {
                    json!({
                        "claim": claim,
                        "group_order": order,
                        "points": r.points,
                        "match": r.matches,
                        "discrepancy": r.discrepancies,
                        "refused": r.refused,
                        "undefined": r.undefined,
                        "max_gap": r.max_gap,
                    })
                })
                .collect();
            writeln!(out, "{}", json!({ "rows": rows }))?;
        }
        _ => write_summary(&rows, &mut out)?,
    }
    out.flush()?;
    Ok(0)
}
