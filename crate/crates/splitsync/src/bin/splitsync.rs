//! Command-line front end: directing word computation, splits, class
//! detection, symbol graphs, inverse splits, the census, and the catalog.
//!
//! Exit codes: 0 success; 1 not directing (for `d3` and `verify`);
//! 2 input or parse error; 3 resource budget exceeded; 4 missing catalog
//! data.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use splitsync::classes::{best_bound, Certificate, Verdict};
use splitsync::critical::{
    catalog, census, census_extended, inverse_split_enumerate, symbol_graph, CensusReport,
    Provenance,
};
use splitsync::directing::{
    d3_implicit_with, d3_oracle, d3_via_split_with, verify_d3, DirectingReport,
};
use splitsync::io::{
    parse, persist_census, serialize, AutomatonDoc, BoundDoc, CensusClassDoc, CensusDoc,
    CertificateDoc, ClassDoc, GraphDoc, ResultDocument,
};
use splitsync::split::{full_split_with, split_at};
use splitsync::{Budget, Error};

#[derive(Parser)]
#[command(
    name = "splitsync",
    about = "Synchronization of complete nondeterministic finite automata",
    version
)]
struct Cli {
    /// Emit a machine-readable JSON document instead of the human table.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Shortest directing word length of a CNFA.
    D3(D3Args),
    /// Split a CNFA into the equivalent DFA (fully, or one step with --at).
    Split(SplitArgs),
    /// Detect structural classes and report directing-length bounds.
    Classify(FileArg),
    /// Symbol graph of a DFA.
    Graph(FileArg),
    /// All merged CNFAs that split back to the given DFA.
    InverseSplit(FileArg),
    /// Census of basic critical CNFAs on a given number of states.
    Census(CensusArgs),
    /// Look up a named automaton from the catalog.
    Catalog(CatalogArgs),
    /// Verify a candidate directing word.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct FileArg {
    /// Automaton file in the text format.
    file: PathBuf,
}

#[derive(Args)]
struct D3Args {
    file: PathBuf,
    /// Engine: the implicit subset walk (default), the materialized split,
    /// or the definition-level check (at most 4 states).
    #[arg(long, default_value = "implicit", value_parser = ["implicit", "split", "oracle"])]
    engine: String,
    /// Also report a shortest directing word.
    #[arg(long)]
    witness: bool,
}

#[derive(Args)]
struct SplitArgs {
    file: PathBuf,
    /// Write the resulting automaton to this file instead of stdout.
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Apply a single split step at `<state> <symbol>` instead of the full
    /// transformation.
    #[arg(long, num_args = 2, value_names = ["STATE", "SYMBOL"])]
    at: Option<Vec<String>>,
}

#[derive(Args)]
struct CensusArgs {
    /// Number of states (2 to 6).
    #[arg(long)]
    states: usize,
    /// Worker count; accepted for compatibility, results never depend on it.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Persist the census (member files, index, checkpoints) here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// `extended` re-derives the 4-state classes by exhaustive search
    /// (hours; checkpointed under --out).
    #[arg(long, value_parser = ["default", "extended"], default_value = "default")]
    tier: String,
}

#[derive(Args)]
struct CatalogArgs {
    /// Entry name: cerny, cerny-cnfa, a3, a4, c4, t42, roman, kari.
    name: String,
    /// State count for the parametric families.
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    file: PathBuf,
    /// Comma-separated symbol names, e.g. `a,a,b,b`.
    #[arg(long)]
    word: String,
}

fn main() -> ExitCode {
    // die quietly when the consumer closes the pipe, like other filters
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli) {
        Ok(code) => code,
        Err(e) => fail(&e, json),
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded { .. } => 3,
        Error::MissingData(_) | Error::CatalogVerification { .. } => 4,
        _ => 2,
    }
}

fn fail(e: &Error, json: bool) -> ExitCode {
    if json {
        let mut doc = ResultDocument::new("error");
        doc.error = Some(e.to_string());
        println!("{}", doc.to_json());
    }
    eprintln!("error: {e}");
    ExitCode::from(exit_code_for(e))
}

fn load(path: &PathBuf) -> Result<AutomatonDoc, Error> {
    let text = std::fs::read_to_string(path).map_err(|io| {
        Error::Unsupported(format!("cannot read {}: {io}", path.display()))
    })?;
    parse(&text)
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    let budget = Budget::from_env();
    match cli.command {
        Command::D3(args) => cmd_d3(args, &budget, cli.json),
        Command::Split(args) => cmd_split(args, &budget, cli.json),
        Command::Classify(args) => cmd_classify(args, cli.json),
        Command::Graph(args) => cmd_graph(args, cli.json),
        Command::InverseSplit(args) => cmd_inverse_split(args, cli.json),
        Command::Census(args) => cmd_census(args, cli.json),
        Command::Catalog(args) => cmd_catalog(args, cli.json),
        Command::Verify(args) => cmd_verify(args, cli.json),
    }
}

fn cmd_d3(args: D3Args, budget: &Budget, json: bool) -> Result<ExitCode, Error> {
    let doc = load(&args.file)?;
    let a = doc.automaton();
    let report: DirectingReport = match args.engine.as_str() {
        "implicit" => d3_implicit_with(a, budget)?,
        "split" => d3_via_split_with(a, budget)?,
        "oracle" => d3_oracle(a)?,
        _ => unreachable!("clap validates the engine"),
    };
    let mut out = ResultDocument::new("d3");
    out.n = Some(a.n());
    out.engine = Some(report.engine.as_str().to_string());
    out.directing = Some(report.directing);
    out.length = report.length;
    out.sync_state = report.sync_state;
    if args.witness {
        out.witness = report.witness.as_ref().map(|w| doc.word_names(w));
    }
    if json {
        println!("{}", out.to_json());
    } else if report.directing {
        println!("directing: yes");
        println!("length:    {}", report.length.unwrap_or(0));
        if let Some(q) = report.sync_state {
            println!("state:     {q}");
        }
        println!("engine:    {}", report.engine.as_str());
        if args.witness {
            if let Some(w) = &report.witness {
                println!("witness:   {}", doc.word_names(w).join(","));
            }
        }
    } else {
        println!("directing: no");
        println!("engine:    {}", report.engine.as_str());
    }
    Ok(if report.directing {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_split(args: SplitArgs, budget: &Budget, json: bool) -> Result<ExitCode, Error> {
    let doc = load(&args.file)?;
    let a = doc.automaton();
    let produced = match &args.at {
        Some(pair) => {
            let state: usize = pair[0]
                .parse()
                .map_err(|_| Error::Unsupported(format!("invalid state `{}`", pair[0])))?;
            let symbol = doc
                .index_of(&pair[1])
                .ok_or_else(|| Error::Unsupported(format!("unknown symbol `{}`", pair[1])))?;
            split_at(a, state, symbol)?
        }
        None => full_split_with(a, budget)?.automaton,
    };
    let text = serialize(&AutomatonDoc::from_automaton(&produced));
    let mut out = ResultDocument::new("split");
    out.n = Some(produced.n());
    out.automaton = Some(text.clone());
    match &args.out {
        Some(path) => std::fs::write(path, &text)?,
        None if !json => print!("{text}"),
        None => {}
    }
    if json {
        println!("{}", out.to_json());
    } else {
        eprintln!(
            "{} symbols in, {} symbols out{}",
            a.symbol_count(),
            produced.symbol_count(),
            args.out
                .as_ref()
                .map(|p| format!(", written to {}", p.display()))
                .unwrap_or_default()
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn certificate_doc(doc: &AutomatonDoc, cert: &Certificate) -> CertificateDoc {
    match cert {
        Certificate::Cyclic { symbol, order } => CertificateDoc::Cyclic {
            symbol: doc.name_of(*symbol).to_string(),
            order: order.clone(),
        },
        Certificate::OneCluster { symbol, state } => CertificateDoc::OneCluster {
            symbol: doc.name_of(*symbol).to_string(),
            state: *state,
        },
        Certificate::Monotonic { order } => CertificateDoc::Monotonic {
            order: order.clone(),
        },
        Certificate::Orientable { order } => CertificateDoc::Orientable {
            order: order.clone(),
        },
        Certificate::StronglyEulerian { degrees } => CertificateDoc::StronglyEulerian {
            degrees: degrees.clone(),
        },
        Certificate::Focusing {
            monoid_size,
            strongly_connected,
        } => CertificateDoc::Focusing {
            monoid_size: *monoid_size,
            strongly_connected: *strongly_connected,
        },
    }
}

fn cmd_classify(args: FileArg, json: bool) -> Result<ExitCode, Error> {
    let doc = load(&args.file)?;
    let report = best_bound(doc.automaton());
    let mut out = ResultDocument::new("classify");
    out.n = Some(doc.automaton().n());
    out.classes = Some(
        report
            .verdicts
            .iter()
            .map(|v| ClassDoc {
                class: v.class.as_str().to_string(),
                verdict: match v.verdict {
                    Verdict::Member => "member",
                    Verdict::NonMember => "non-member",
                    Verdict::Undecided => "undecided",
                }
                .to_string(),
                certificate: v.certificate.as_ref().map(|c| certificate_doc(&doc, c)),
                note: v.note.clone(),
            })
            .collect(),
    );
    out.bounds = Some(
        report
            .bounds
            .iter()
            .map(|b| BoundDoc {
                name: b.name.to_string(),
                value: b.value,
            })
            .collect(),
    );
    out.tightest = Some(BoundDoc {
        name: report.tightest.name.to_string(),
        value: report.tightest.value,
    });
    if json {
        println!("{}", out.to_json());
    } else {
        println!("{:<18} verdict", "class");
        for v in &report.verdicts {
            let verdict = match v.verdict {
                Verdict::Member => "member",
                Verdict::NonMember => "non-member",
                Verdict::Undecided => "undecided",
            };
            println!("{:<18} {}", v.class.as_str(), verdict);
        }
        println!();
        println!("{:<28} value", "bound");
        for b in &report.bounds {
            println!("{:<28} {}", b.name, b.value);
        }
        println!("tightest: {} ({})", report.tightest.value, report.tightest.name);
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_graph(args: FileArg, json: bool) -> Result<ExitCode, Error> {
    let doc = load(&args.file)?;
    let graph = symbol_graph(doc.automaton())?;
    let edges: Vec<(String, String)> = graph
        .edges
        .iter()
        .map(|&(i, j)| (doc.name_of(i).to_string(), doc.name_of(j).to_string()))
        .collect();
    let mut out = ResultDocument::new("graph");
    out.n = Some(doc.automaton().n());
    out.graph = Some(GraphDoc {
        nodes: doc.names().to_vec(),
        edges: edges.clone(),
    });
    out.complete = Some(!splitsync::critical::has_short_cycle(&graph));
    if json {
        println!("{}", out.to_json());
    } else {
        println!("nodes: {}", doc.names().join(" "));
        if edges.is_empty() {
            println!("edges: (none)");
        } else {
            println!("edges:");
            for (a, b) in &edges {
                println!("  {{{a},{b}}}");
            }
        }
        println!(
            "short cycles (3 or 4): {}",
            if splitsync::critical::has_short_cycle(&graph) {
                "yes"
            } else {
                "no"
            }
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_inverse_split(args: FileArg, json: bool) -> Result<ExitCode, Error> {
    let doc = load(&args.file)?;
    let inv = inverse_split_enumerate(doc.automaton())?;
    let texts: Vec<String> = inv
        .automata
        .iter()
        .map(|a| serialize(&AutomatonDoc::from_automaton(a)))
        .collect();
    let mut out = ResultDocument::new("inverse-split");
    out.n = Some(doc.automaton().n());
    out.complete = Some(inv.complete);
    out.automata = Some(texts.clone());
    if json {
        println!("{}", out.to_json());
    } else {
        println!(
            "{} merged automata; enumeration {}",
            texts.len(),
            if inv.complete {
                "is complete"
            } else {
                "may be incomplete (symbol graph has a 3- or 4-cycle)"
            }
        );
        for text in &texts {
            println!();
            print!("{text}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn census_doc(report: &CensusReport) -> CensusDoc {
    CensusDoc {
        n: report.n,
        target: report.target,
        counts_labeled: report.labeled_total,
        counts_iso: report.iso_total,
        verified: report.verified,
        classes: report
            .classes
            .iter()
            .map(|c| CensusClassDoc {
                symbols: c.dfa.symbol_count(),
                orbit: c.orbit_size,
                edges: c.edge_count,
                complete: c.complete,
                cnfas: c.cnfas.len(),
            })
            .collect(),
    }
}

fn cmd_census(args: CensusArgs, json: bool) -> Result<ExitCode, Error> {
    if args.jobs == 0 {
        return Err(Error::Unsupported("--jobs must be at least 1".into()));
    }
    let report = if args.tier == "extended" {
        let checkpoint = args.out.as_ref().map(|dir| {
            std::fs::create_dir_all(dir).ok();
            dir.join("search.ckpt")
        });
        census_extended(args.states, checkpoint.as_deref(), !json)?
    } else {
        census(args.states)?
    };
    if let Some(dir) = &args.out {
        persist_census(&report, dir)?;
    }
    let mut out = ResultDocument::new("census");
    out.n = Some(report.n);
    out.counts_labeled = Some(report.labeled_total);
    out.counts_iso = Some(report.iso_total);
    out.census = Some(census_doc(&report));
    if json {
        println!("{}", out.to_json());
    } else {
        println!(
            "{:<8} {:<7} {:<7} {:<9} critical cnfas",
            "class", "symbols", "orbit", "graph"
        );
        for (i, c) in report.classes.iter().enumerate() {
            println!(
                "{:<8} {:<7} {:<7} {:<9} {}",
                i,
                c.dfa.symbol_count(),
                c.orbit_size,
                format!("{} edges", c.edge_count),
                c.cnfas.len()
            );
        }
        println!();
        println!("labeled: {}", report.labeled_total);
        println!("up to isomorphism: {}", report.iso_total);
        println!(
            "verification: {}",
            if report.verified { "ok" } else { "FAILED" }
        );
        if let Some(dir) = &args.out {
            println!("persisted to {}", dir.display());
        }
    }
    Ok(if report.verified {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn cmd_catalog(args: CatalogArgs, json: bool) -> Result<ExitCode, Error> {
    let entry = catalog(&args.name, args.n)?;
    let text = serialize(&AutomatonDoc::from_automaton(&entry.automaton));
    let mut out = ResultDocument::new("catalog");
    out.n = Some(entry.automaton.n());
    out.catalog_name = Some(entry.name.clone());
    out.expected_length = Some(entry.expected_length);
    out.provenance = Some(
        match entry.provenance {
            Provenance::Builtin => "builtin",
            Provenance::DerivedBySearch => "derived-by-search",
            Provenance::ExternalData => "external-data",
        }
        .to_string(),
    );
    out.automaton = Some(text.clone());
    if json {
        println!("{}", out.to_json());
    } else {
        print!("{text}");
        eprintln!(
            "# {}: verified shortest directing length {}",
            entry.name, entry.expected_length
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs, json: bool) -> Result<ExitCode, Error> {
    let doc = load(&args.file)?;
    let word: Vec<usize> = args
        .word
        .split(',')
        .map(|name| {
            let name = name.trim();
            doc.index_of(name)
                .ok_or_else(|| Error::Unsupported(format!("unknown symbol `{name}`")))
        })
        .collect::<Result<_, _>>()?;
    let v = verify_d3(doc.automaton(), &word)?;
    let mut out = ResultDocument::new("verify");
    out.n = Some(doc.automaton().n());
    out.accepted = Some(v.accepted);
    out.sync_states = Some(v.sync_states.iter().collect());
    if json {
        println!("{}", out.to_json());
    } else if v.accepted {
        println!("accepted: yes");
        println!(
            "sync states: {}",
            v.sync_states
                .iter()
                .map(|q| q.to_string())
                .collect::<Vec<_>>()
                .join(",")
        );
    } else {
        println!("accepted: no");
    }
    Ok(if v.accepted {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
