//! `lalg`: command-line front end for the finite L-algebra toolkit.
//!
//! Exit status: 0 on success, 1 when a checked property is falsified, 2 on
//! malformed input, 3 when a search or word budget runs out.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use lalg::families::{
    conjecture_search, run_enumeration, ClassFilter, SweepConfig, DEFAULT_NODE_BUDGET,
    DEFAULT_TIME_BUDGET,
};
use lalg::ideals::{all_ideals, is_ideal, spectrum};
use lalg::products::{semidirect, symmetric_ideal_bijection, symmetric_semidirect, ActionMap, ProductAlgebra};
use lalg::suite::{check_product_theory, seed_from_env, verify_all, VerifyConfig};
use lalg::words::{
    approx_equiv, is_self_similar, words_up_to, Equivalence, Word, DEFAULT_CONTEXT_DEPTH,
    DEFAULT_WORD_BUDGET,
};
use lalg::{validate, AlgebraTable, ElemSet, LalgError, Property};

#[derive(Parser)]
#[command(name = "lalg", version, about = "Finite L-algebras: classification, ideals, products, words, enumeration")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    global: Global,
}

#[derive(Args)]
struct Global {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    workers: Option<u64>,

    /// Search-node budget per enumerated size.
    #[arg(long, global = true, default_value_t = DEFAULT_NODE_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
    budget_nodes: u64,

    /// Wall-clock budget in seconds per enumerated size.
    #[arg(long, global = true, default_value_t = DEFAULT_TIME_BUDGET.as_secs(), value_parser = clap::value_parser!(u64).range(1..))]
    budget_seconds: u64,

    /// Write the report here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Class {
    L,
    Kl,
    Ckl,
    Hilbert,
    Linear,
}

impl From<Class> for ClassFilter {
    fn from(c: Class) -> Self {
        match c {
            Class::L => ClassFilter::L,
            Class::Kl => ClassFilter::Kl,
            Class::Ckl => ClassFilter::Ckl,
            Class::Hilbert => ClassFilter::Hilbert,
            Class::Linear => ClassFilter::Linear,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Classify a table: L, KL, CKL, Hilbert, linear, bounded, simple.
    Check { file: PathBuf },
    /// List the ideals, or test one subset with `--subset`.
    Ideals {
        file: PathBuf,
        /// Space-separated element indices.
        #[arg(long)]
        subset: Option<String>,
    },
    /// Prime ideals and the basic open sets of the spectrum.
    Spectrum { file: PathBuf },
    /// Semidirect product of an action file, with the product ideal checks.
    Semidirect { file: PathBuf },
    /// Symmetric semidirect product of an action file (CKL operations only).
    Symmetric { file: PathBuf },
    /// Bounded word equivalence in the self-similar closure.
    Closure {
        file: PathBuf,
        /// Compare this word with `--right` instead of listing classes.
        #[arg(long, requires = "right", allow_hyphen_values = true)]
        left: Option<String>,
        #[arg(long, requires = "left", allow_hyphen_values = true)]
        right: Option<String>,
        /// Longest word listed when grouping into classes.
        #[arg(long, default_value_t = 2)]
        max_len: usize,
        #[command(flatten)]
        words: WordBudget,
    },
    /// Enumerate algebras up to isomorphism, one size or every size up to `--max-n`.
    Enumerate {
        #[arg(long, default_value_t = 4)]
        max_n: usize,
        /// Only this size.
        #[arg(long, short)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value_t = Class::L)]
        class: Class,
        /// Keep only simple algebras.
        #[arg(long)]
        simple: bool,
    },
    /// Search for nonlinear simple CKL-algebras.
    Conjecture {
        #[arg(long, default_value_t = 5)]
        max_n: usize,
    },
    /// Run every sweep and emit one consolidated report.
    VerifyAll {
        /// Caps every sweep size.
        #[arg(long)]
        max_n: Option<usize>,
        /// Random word triples per corpus algebra.
        #[arg(long)]
        triples: Option<usize>,
        #[command(flatten)]
        words: WordBudget,
    },
}

#[derive(Args)]
struct WordBudget {
    /// Longest separating context tried.
    #[arg(long, default_value_t = DEFAULT_CONTEXT_DEPTH)]
    depth: usize,
    /// Longest intermediate word allowed.
    #[arg(long, default_value_t = DEFAULT_WORD_BUDGET, value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..))]
    word_budget: usize,
}

/// Exit status and report of one command.
struct Outcome {
    status: u8,
    text: String,
    json: Value,
}

impl Outcome {
    fn ok(text: String, json: Value) -> Self {
        Outcome { status: 0, text, json }
    }

    fn status_if(mut self, cond: bool, status: u8) -> Self {
        if cond {
            self.status = status;
        }
        self
    }
}

fn exit_status(e: &LalgError) -> u8 {
    match e {
        LalgError::Falsified { .. } | LalgError::CongruenceUndefined(_) => 1,
        LalgError::ResourceBound { .. } | LalgError::BudgetExceeded { .. } => 3,
        _ => 2,
    }
}

fn read_input(path: &Path) -> lalg::Result<String> {
    let read = if path == Path::new("-") {
        std::io::read_to_string(std::io::stdin())
    } else {
        std::fs::read_to_string(path)
    };
    read.map_err(|e| LalgError::Parse(format!("{}: {e}", path.display())))
}

fn read_table(path: &Path) -> lalg::Result<AlgebraTable> {
    AlgebraTable::parse_any(&read_input(path)?)
}

fn read_action(path: &Path) -> lalg::Result<ActionMap> {
    ActionMap::parse(&read_input(path)?)
}

fn parse_set(t: &AlgebraTable, text: &str) -> lalg::Result<ElemSet> {
    let mut s = ElemSet::default();
    for tok in text.split(|c: char| c.is_whitespace() || c == ',') {
        if tok.is_empty() {
            continue;
        }
        let x: usize = tok.parse().map_err(|_| LalgError::Parse(format!("bad element `{tok}`")))?;
        t.check_index(x)?;
        s.insert(x);
    }
    Ok(s)
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn check(file: &Path) -> lalg::Result<Outcome> {
    let t = read_table(file)?;
    let r = validate(&t);
    let mut text = format!("size {}\n", r.n);
    let flags: Vec<String> = r.flags().iter().map(|p| json!(p).as_str().unwrap_or_default().to_string()).collect();
    writeln!(text, "flags {}", flags.join(" ")).unwrap();
    // A flag that failed only because L failed repeats the L witness.
    let l_witness = r.witnesses.get(&Property::L);
    for (p, w) in &r.witnesses {
        if *p != Property::L && Some(w) == l_witness {
            continue;
        }
        writeln!(text, "not {}: {:?} at {:?}", json!(p).as_str().unwrap_or_default(), w.axiom, w.elements).unwrap();
    }
    Ok(Outcome::ok(text, json!(r)))
}

fn ideals(file: &Path, subset: Option<&str>) -> lalg::Result<Outcome> {
    let t = read_table(file)?;
    if let Some(s) = subset {
        let s = parse_set(&t, s)?;
        let c = is_ideal(&t, &s)?;
        let text = match &c.violation {
            None => format!("{s:?} is an ideal\n"),
            Some(v) => format!("{s:?} is not an ideal: {:?} fails at {:?}\n", v.condition, v.elements),
        };
        return Ok(Outcome::ok(text, json!({ "subset": s, "check": c })));
    }
    let lat = all_ideals(&t)?;
    let distributive = lat.distributivity_violation();
    let mut text = format!("{} ideals\n", lat.len());
    for i in &lat.ideals {
        writeln!(text, "{i:?}").unwrap();
    }
    writeln!(text, "principal").unwrap();
    for (x, p) in lat.principal.iter().enumerate() {
        writeln!(text, "<{x}> = {p:?}").unwrap();
    }
    writeln!(text, "distributive {}", yes(distributive.is_none())).unwrap();
    let json = json!({
        "ideals": lat.ideals,
        "principal": lat.principal,
        "product": lat.product,
        "join": lat.join,
        "distributivity_violation": distributive,
    });
    Ok(Outcome::ok(text, json).status_if(distributive.is_some(), 1))
}

fn spectrum_cmd(file: &Path) -> lalg::Result<Outcome> {
    let t = read_table(file)?;
    let lat = all_ideals(&t)?;
    let s = spectrum(&t)?;
    let mut text = format!("{} primes\n", s.len());
    for p in &s.primes {
        writeln!(text, "{p:?}").unwrap();
    }
    writeln!(text, "basic open sets").unwrap();
    for (i, open) in s.basis.iter().enumerate() {
        let primes: Vec<ElemSet> = open.iter().map(|&p| s.primes[p]).collect();
        writeln!(text, "U{:?} = {primes:?}", lat.ideals[i]).unwrap();
    }
    Ok(Outcome::ok(text, json!({ "ideals": lat.ideals, "spectrum": s })))
}

fn product_text(p: &ProductAlgebra) -> String {
    let mut text = format!("{} elements\n", p.carrier.len());
    for (i, (x, u)) in p.carrier.iter().enumerate() {
        writeln!(text, "{i} = ({x}, {u})").unwrap();
    }
    writeln!(text, "table").unwrap();
    text.push_str(&p.algebra.to_text());
    text
}

fn product_json(p: &ProductAlgebra) -> Value {
    json!({ "carrier": p.carrier, "table": p.algebra.rows() })
}

fn semidirect_cmd(file: &Path) -> lalg::Result<Outcome> {
    let a = read_action(file)?;
    let p = semidirect(&a)?;
    let lat = all_ideals(&p.algebra)?;
    let r = check_product_theory(&a);
    let mut text = product_text(&p);
    writeln!(text, "{} ideals", lat.len()).unwrap();
    for k in &lat.ideals {
        let (kx, ky) = p.components(k);
        writeln!(text, "{k:?} = {kx:?} x {ky:?}").unwrap();
    }
    writeln!(text, "kernels that are not ideals {}", r.kernel_not_ideal).unwrap();
    writeln!(text, "failures {}", r.failures.len()).unwrap();
    for f in &r.failures {
        writeln!(text, "  {f}").unwrap();
    }
    let mut json = product_json(&p);
    json["ideals"] = json!(lat.ideals);
    json["checks"] = json!(r);
    Ok(Outcome::ok(text, json).status_if(!r.passed(), 1))
}

fn symmetric_cmd(file: &Path) -> lalg::Result<Outcome> {
    let a = read_action(file)?;
    let p = symmetric_semidirect(&a)?;
    let r = symmetric_ideal_bijection(&a)?;
    let mut text = product_text(&p);
    writeln!(text, "{} ideals, {} in the semidirect product", r.symmetric_ideals, r.semidirect_ideals).unwrap();
    for f in &r.failures {
        writeln!(text, "  {f}").unwrap();
    }
    let mut json = product_json(&p);
    json["bijection"] = json!(r);
    Ok(Outcome::ok(text, json).status_if(!r.passed(), 1))
}

fn show_word(w: &[usize]) -> String {
    if w.is_empty() {
        "ε".into()
    } else {
        w.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
    }
}

fn closure(file: &Path, pair: Option<(&str, &str)>, max_len: usize, wb: &WordBudget) -> lalg::Result<Outcome> {
    let t = Arc::new(read_table(file)?);
    let self_similar = is_self_similar(&t)?;
    let mut text = format!("self-similar {}\n", yes(self_similar));
    if let Some((l, r)) = pair {
        let (a, b) = (Word::parse(&t, l)?, Word::parse(&t, r)?);
        let e = approx_equiv(&a, &b, wb.depth, wb.word_budget)?;
        match &e {
            Equivalence::Equivalent { depth } => writeln!(text, "equivalent up to depth {depth}"),
            Equivalence::Distinguished { c, d, left, right } => writeln!(
                text,
                "distinguished by c = {}, d = {}: {} vs {}",
                show_word(c),
                show_word(d),
                show_word(left),
                show_word(right)
            ),
            Equivalence::BudgetExceeded { depth, skipped } => {
                writeln!(text, "undecided up to depth {depth}: {skipped} contexts over budget")
            }
        }
        .unwrap();
        let over = matches!(e, Equivalence::BudgetExceeded { .. });
        return Ok(Outcome::ok(text, json!({ "self_similar": self_similar, "result": e })).status_if(over, 3));
    }
    // Greedy grouping: a word joins the first class whose representative it
    // is bounded-equivalent to.
    let words = words_up_to(t.size(), max_len);
    let mut classes: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut undecided = 0;
    for w in words {
        let a = Word::new(&t, w.clone())?;
        let mut home = None;
        for (k, class) in classes.iter().enumerate() {
            match approx_equiv(&a, &Word::new(&t, class[0].clone())?, wb.depth, wb.word_budget)? {
                Equivalence::Equivalent { .. } => {
                    home = Some(k);
                    break;
                }
                Equivalence::BudgetExceeded { .. } => undecided += 1,
                Equivalence::Distinguished { .. } => {}
            }
        }
        match home {
            Some(k) => classes[k].push(w),
            None => classes.push(vec![w]),
        }
    }
    writeln!(text, "{} classes of words up to length {max_len}", classes.len()).unwrap();
    for c in &classes {
        writeln!(text, "{}", c.iter().map(|w| show_word(w)).collect::<Vec<_>>().join(" | ")).unwrap();
    }
    writeln!(text, "undecided comparisons {undecided}").unwrap();
    let json = json!({
        "self_similar": self_similar,
        "depth": wb.depth,
        "word_budget": wb.word_budget,
        "classes": classes,
        "undecided": undecided,
    });
    Ok(Outcome::ok(text, json))
}

fn enumerate_cmd(sizes: Vec<usize>, class: ClassFilter, simple: bool, cfg: &SweepConfig) -> lalg::Result<Outcome> {
    let mut text = String::new();
    let mut counts = Vec::new();
    let mut tables = Vec::new();
    let mut complete = true;
    for n in sizes {
        let start = Instant::now();
        let out = run_enumeration(&cfg.task(n, class).simple(simple))?;
        eprintln!("n = {n}: {} tables, {} nodes, {:.2?}", out.tables.len(), out.nodes, start.elapsed());
        counts.push(json!({ "n": n, "count": out.tables.len(), "nodes": out.nodes, "complete": out.complete }));
        for t in &out.tables {
            if !text.is_empty() {
                text.push('\n');
            }
            text.push_str(&t.to_text());
            tables.push(t.rows());
        }
        if !out.complete {
            complete = false;
            break;
        }
    }
    let json = json!({ "class": class, "simple": simple, "sizes": counts, "tables": tables });
    Ok(Outcome::ok(text, json).status_if(!complete, 3))
}

fn conjecture(max_n: usize, cfg: &SweepConfig) -> lalg::Result<Outcome> {
    let r = conjecture_search(max_n, cfg)?;
    let mut text = String::new();
    for s in &r.sizes {
        writeln!(text, "n = {}: {} simple CKL, {} linear, {} nonlinear", s.n, s.simple_ckl, s.linear, s.nonlinear).unwrap();
    }
    writeln!(text, "counterexamples {}", r.counterexamples.len()).unwrap();
    for t in &r.counterexamples {
        text.push_str(&t.to_text());
    }
    if let Some(n) = r.frontier {
        writeln!(text, "budget exhausted at n = {n}").unwrap();
    }
    let stopped = r.frontier.is_some();
    Ok(Outcome::ok(text, json!(r)).status_if(stopped, 3))
}

fn verify(max_n: Option<usize>, triples: Option<usize>, wb: &WordBudget, sweep: SweepConfig) -> lalg::Result<Outcome> {
    let mut cfg = VerifyConfig {
        sweep,
        word_budget: wb.word_budget,
        seed: seed_from_env(),
        ..VerifyConfig::default()
    };
    if let Some(m) = max_n {
        cfg = cfg.capped(m);
    }
    if let Some(k) = triples {
        cfg.word_triples = k;
    }
    let r = verify_all(&cfg)?;
    let failed = r.failed_sections();
    let mut text = String::new();
    for (name, ok) in [
        ("examples", r.examples.passed()),
        ("families", r.families.passed()),
        ("products", r.products.passed()),
        ("lattices", r.lattices.passed()),
        ("simple_linear", r.simple_linear.passed()),
        ("tail_plus", r.tail_plus.passed()),
        ("ckl_structure", r.ckl_structure.passed()),
        ("hilbert", r.hilbert.passed()),
        ("words", r.words.passed()),
    ] {
        writeln!(text, "{name} {}", if ok { "ok" } else { "FAILED" }).unwrap();
    }
    writeln!(text, "conjecture counterexamples {}", r.conjecture.counterexamples.len()).unwrap();
    writeln!(text, "kernels that are not ideals {}", r.products.kernel_not_ideal).unwrap();
    writeln!(text, "undefined congruences {}", r.lattices.congruence_undefined).unwrap();
    writeln!(text, "word budget exceeded rate {:.4}", r.words.budget_exceeded_rate()).unwrap();
    Ok(Outcome::ok(text, json!(r)).status_if(!failed.is_empty(), 1))
}

fn run(cli: Cli) -> lalg::Result<Outcome> {
    let g = &cli.global;
    let sweep = SweepConfig {
        node_budget: g.budget_nodes,
        time_budget_secs: g.budget_seconds,
        workers: g.workers.map(|w| w as usize),
    };
    match &cli.command {
        Command::Check { file } => check(file),
        Command::Ideals { file, subset } => ideals(file, subset.as_deref()),
        Command::Spectrum { file } => spectrum_cmd(file),
        Command::Semidirect { file } => semidirect_cmd(file),
        Command::Symmetric { file } => symmetric_cmd(file),
        Command::Closure { file, left, right, max_len, words } => {
            closure(file, left.as_deref().zip(right.as_deref()), *max_len, words)
        }
        Command::Enumerate { max_n, n, class, simple } => {
            let sizes = match n {
                Some(n) => vec![*n],
                None => (1..=*max_n).collect(),
            };
            enumerate_cmd(sizes, (*class).into(), *simple, &sweep)
        }
        Command::Conjecture { max_n } => conjecture(*max_n, &sweep),
        Command::VerifyAll { max_n, triples, words } => verify(*max_n, *triples, words, sweep),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(w) = cli.global.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w as usize).build_global() {
            eprintln!("lalg: worker pool: {e}");
        }
    }
    let format = cli.global.format;
    let output = cli.global.output.clone();
    let (status, body) = match run(cli) {
        Ok(o) => (
            o.status,
            match format {
                Format::Text => o.text,
                Format::Json => format!("{:#}\n", o.json),
            },
        ),
        Err(e) => {
            let status = exit_status(&e);
            eprintln!("lalg: {e}");
            let body = match format {
                Format::Text => String::new(),
                Format::Json => format!("{:#}\n", json!({ "error": e.to_string(), "status": status })),
            };
            (status, body)
        }
    };
    let written = match &output {
        Some(path) => std::fs::write(path, &body),
        None => {
            print!("{body}");
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("lalg: writing report: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(status)
}
