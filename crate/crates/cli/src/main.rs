mod bench;

use std::fmt::Display;
use std::io::Read;
use std::num::NonZeroUsize;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use syncword::generate::{generate, Family, GenSpec};
use syncword::monoid::{is_aperiodic, is_strongly_connected, sinks, DEFAULT_MONOID_CAP};
use syncword::oracle::{shortest_sync_word, DEFAULT_ORACLE_CAP};
use syncword::pair_graph::{has_pair_sink, DEFAULT_PAIR_CAP};
use syncword::synth::{greedy_merge, synchronize_aperiodic, SyncCertificate, SynthError, SynthOptions};
use syncword::{parse_dfa, serialize_dfa, Dfa, Word};

#[derive(Parser, Debug)]
#[command(name = "syncword", version, about = "Synchronizing words for deterministic finite automata")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Largest transition monoid to enumerate.
    #[arg(long, global = true, default_value_t = NonZeroUsize::new(DEFAULT_MONOID_CAP).unwrap())]
    pub monoid_cap: NonZeroUsize,
    /// Largest pair graph (in vertices) to build.
    #[arg(long, global = true, default_value_t = NonZeroUsize::new(DEFAULT_PAIR_CAP).unwrap())]
    pub pair_cap: NonZeroUsize,
    /// Largest automaton (in states) handed to the exhaustive shortest-word search.
    #[arg(long, global = true, default_value_t = NonZeroUsize::new(DEFAULT_ORACLE_CAP).unwrap())]
    pub oracle_cap: NonZeroUsize,
    /// Seed for generators and benchmarks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Human,
    Tsv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sinks, synchronizability and aperiodicity of an automaton.
    Analyze { input: String },
    /// Build a synchronizing word with a length certificate.
    Synthesize { input: String },
    /// Shortest synchronizing word by exhaustive search.
    Shortest { input: String },
    /// Whether a word synchronizes the automaton.
    Check { input: String, word: String },
    /// Print a generated automaton.
    Gen {
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 1000)]
        max_tries: usize,
    },
    /// Evaluate a batch of generated automata and print one TSV row each.
    Bench(bench::BenchArgs),
}

pub enum Failure {
    /// The automaton or word lacks the property asked about.
    Property(Option<String>),
    Input(String),
    Cap(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Property(_) => 1,
            Failure::Input(_) => 2,
            Failure::Cap(_) => 3,
        }
    }
}

pub fn cap(e: impl Display) -> Failure {
    Failure::Cap(e.to_string())
}

struct Printer(Format);

impl Printer {
    fn field(&self, key: &str, value: impl Display) {
        match self.0 {
            Format::Human => println!("{key}: {value}"),
            Format::Tsv => println!("{key}\t{value}"),
        }
    }

    fn key_values(&self, text: &str) {
        for line in text.lines() {
            let (key, value) = line.split_once('=').unwrap_or((line, ""));
            self.field(key, value);
        }
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn read_dfa(input: &str) -> Result<Dfa, Failure> {
    let text = if input == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Input(format!("standard input: {e}")))?;
        s
    } else {
        std::fs::read_to_string(input).map_err(|e| Failure::Input(format!("{input}: {e}")))?
    };
    parse_dfa(&text).map_err(|e| Failure::Input(format!("{input}: {e}")))
}

pub enum Synthesis {
    Certified(SyncCertificate),
    /// The construction failed; `cert` is the greedy fallback if it exists.
    Fallback { reason: SynthError, cert: Option<SyncCertificate> },
    NotSynchronizable,
}

pub fn synthesize(dfa: &Dfa, pair_cap: usize) -> Result<Synthesis, Failure> {
    let opts = SynthOptions { pair_cap };
    if sinks(dfa).is_empty() {
        return Ok(Synthesis::NotSynchronizable);
    }
    match synchronize_aperiodic(dfa, &opts) {
        Ok(cert) => Ok(Synthesis::Certified(cert)),
        Err(SynthError::PairGraph(e)) => Err(cap(e)),
        Err(reason) => match greedy_merge(dfa, &opts) {
            Ok(Some(cert)) => Ok(Synthesis::Fallback { reason, cert: Some(cert) }),
            Ok(None) => Ok(Synthesis::NotSynchronizable),
            Err(SynthError::PairGraph(e)) => Err(cap(e)),
            Err(e) => Ok(Synthesis::Fallback {
                reason: e,
                cert: None,
            }),
        },
    }
}

fn cmd_analyze(g: &Global, input: &str) -> Result<(), Failure> {
    let dfa = read_dfa(input)?;
    let out = Printer(g.format);
    out.field("n", dfa.num_states());
    out.field("k", dfa.num_letters());
    out.field("sinks", sinks(&dfa));
    out.field("strongly_connected", yes_no(is_strongly_connected(&dfa)));
    let sync = has_pair_sink(&dfa, g.pair_cap.get()).map_err(cap)?;
    out.field("synchronizable", yes_no(sync));
    match is_aperiodic(&dfa, g.monoid_cap.get()) {
        Ok(ap) => {
            match &ap.witness {
                None => out.field("aperiodic", "yes"),
                Some(w) => {
                    out.field("aperiodic", "no");
                    out.field("witness", w.word.render(dfa.num_letters()));
                    out.field("period", w.index_period.period);
                }
            }
            out.field("monoid_size", ap.monoid_size);
            Ok(())
        }
        Err(e) => {
            out.field("aperiodic", "unknown");
            out.field("monoid_size", "capped");
            Err(cap(e))
        }
    }
}

fn cmd_synthesize(g: &Global, input: &str) -> Result<(), Failure> {
    let dfa = read_dfa(input)?;
    let out = Printer(g.format);
    let k = dfa.num_letters();
    match synthesize(&dfa, g.pair_cap.get())? {
        Synthesis::NotSynchronizable => {
            println!("not synchronizable");
            Err(Failure::Property(None))
        }
        Synthesis::Certified(cert) => {
            out.key_values(&cert.to_key_values(k));
            if cert.verified && cert.bound_ok == Some(true) {
                Ok(())
            } else {
                Err(Failure::Property(Some("certificate failed verification".into())))
            }
        }
        Synthesis::Fallback { reason, cert } => {
            if let SynthError::TCycle { level, cycle } = &reason {
                let states: Vec<String> = cycle.states().iter().map(|q| q.to_string()).collect();
                out.field("t_cycle", states.join(" "));
                out.field("t_cycle_level", level);
            }
            out.field("fallback_reason", &reason);
            if let Some(cert) = cert {
                out.key_values(&cert.to_key_values(k));
            }
            Err(Failure::Property(Some(format!("construction not applicable: {reason}"))))
        }
    }
}

fn cmd_shortest(g: &Global, input: &str) -> Result<(), Failure> {
    let dfa = read_dfa(input)?;
    let out = Printer(g.format);
    let res = shortest_sync_word(&dfa, g.oracle_cap.get()).map_err(cap)?;
    match res.word {
        Some(w) => {
            out.field("word", w.render(dfa.num_letters()));
            out.field("length", w.len());
            out.field("explored", res.explored);
            Ok(())
        }
        None => {
            println!("not synchronizable");
            Err(Failure::Property(None))
        }
    }
}

fn cmd_check(input: &str, word: &str) -> Result<(), Failure> {
    let dfa = read_dfa(input)?;
    let w = Word::parse(word, dfa.num_letters()).map_err(|e| Failure::Input(format!("word {word:?}: {e}")))?;
    if dfa.is_synchronizing_word(&w) {
        println!("synchronizes");
        Ok(())
    } else {
        println!("does not synchronize");
        Err(Failure::Property(None))
    }
}

pub fn gen_spec(family: Family, n: usize, k: usize, seed: u64, max_tries: usize) -> Result<GenSpec, Failure> {
    let min_n = if family == Family::Cerny { 2 } else { 1 };
    if n < min_n {
        return Err(Failure::Input(format!("{family} automata need n >= {min_n}")));
    }
    if k == 0 {
        return Err(Failure::Input("k must be positive".into()));
    }
    Ok(GenSpec {
        max_tries,
        ..GenSpec::new(family, n, k, seed)
    })
}

fn cmd_gen(g: &Global, family: Family, n: usize, k: usize, max_tries: usize) -> Result<(), Failure> {
    let spec = gen_spec(family, n, k, g.seed, max_tries)?;
    let dfa = generate(&spec).ok_or_else(|| Failure::Cap(format!("no aperiodic automaton within {max_tries} tries")))?;
    print!("{}", serialize_dfa(&dfa));
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = &cli.global;
    let result = match &cli.command {
        Command::Analyze { input } => cmd_analyze(g, input),
        Command::Synthesize { input } => cmd_synthesize(g, input),
        Command::Shortest { input } => cmd_shortest(g, input),
        Command::Check { input, word } => cmd_check(input, word),
        Command::Gen { family, n, k, max_tries } => cmd_gen(g, *family, *n, *k, *max_tries),
        Command::Bench(args) => bench::run(g, args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Property(Some(msg)) => eprintln!("syncword: {msg}"),
                Failure::Property(None) => {}
                Failure::Input(msg) => eprintln!("syncword: input error: {msg}"),
                Failure::Cap(msg) => eprintln!("syncword: cap exceeded: {msg}"),
            }
            ExitCode::from(f.exit_code())
        }
    }
}
