//! Batch evaluation. Sample `i` uses seed `--seed + i`; its size cycles
//! through the `n` range fastest, then the `k` range.

use clap::Args;
use rayon::prelude::*;

use syncword::generate::{generate, Family};
use syncword::monoid::is_aperiodic;
use syncword::oracle::shortest_sync_word;
use syncword::pair_graph::has_pair_sink;

use crate::{gen_spec, synthesize, Failure, Global, Synthesis};

pub const HEADER: &str = "seed\tn\tk\taperiodic\tsynchronizable\toracle_len\tsynth_len\tbound\tbound_ok";

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long, default_value = "monotone")]
    family: Family,
    #[arg(long, default_value_t = 100)]
    count: usize,
    #[arg(long, default_value_t = 2)]
    n_min: usize,
    #[arg(long, default_value_t = 8)]
    n_max: usize,
    #[arg(long, default_value_t = 2)]
    k_min: usize,
    #[arg(long, default_value_t = 2)]
    k_max: usize,
    #[arg(long, default_value_t = 1000)]
    max_tries: usize,
}

struct Sample {
    seed: u64,
    n: usize,
    k: usize,
}

fn row(g: &Global, args: &BenchArgs, s: &Sample) -> String {
    let spec = match gen_spec(args.family, s.n, s.k, s.seed, args.max_tries) {
        Ok(spec) => spec,
        Err(_) => unreachable!("ranges are validated before sampling"),
    };
    let cols = |rest: &str| format!("{}\t{}\t{}\t{rest}", s.seed, s.n, s.k);
    let Some(dfa) = generate(&spec) else {
        return cols("none\tnone\t-1\t-1\tnone\tskipped");
    };
    let aperiodic = match is_aperiodic(&dfa, g.monoid_cap.get()) {
        Ok(a) => a.is_aperiodic().to_string(),
        Err(_) => "capped".into(),
    };
    let sync = match has_pair_sink(&dfa, g.pair_cap.get()) {
        Ok(b) => b.to_string(),
        Err(_) => "capped".into(),
    };
    let oracle_len = match shortest_sync_word(&dfa, g.oracle_cap.get()) {
        Ok(r) => r.word.map_or(-1, |w| w.len() as i64),
        Err(_) => -1,
    };
    let cert = match synthesize(&dfa, g.pair_cap.get()) {
        Ok(Synthesis::Certified(c)) => Some(c),
        Ok(Synthesis::Fallback { cert, .. }) => cert,
        _ => None,
    };
    let (synth_len, bound, bound_ok) = match cert {
        Some(c) => (
            c.word.len() as i64,
            c.bound.map_or("none".into(), |b| b.to_string()),
            c.bound_ok.map_or("skipped".into(), |b| b.to_string()),
        ),
        None => (-1, "none".to_string(), "skipped".to_string()),
    };
    cols(&format!("{aperiodic}\t{sync}\t{oracle_len}\t{synth_len}\t{bound}\t{bound_ok}"))
}

pub fn run(g: &Global, args: &BenchArgs) -> Result<(), Failure> {
    if args.n_min > args.n_max || args.k_min > args.k_max {
        return Err(Failure::Input("empty size range".into()));
    }
    gen_spec(args.family, args.n_min, args.k_min, 0, args.max_tries)?;
    let n_span = args.n_max - args.n_min + 1;
    let k_span = args.k_max - args.k_min + 1;
    let samples: Vec<Sample> = (0..args.count)
        .map(|i| Sample {
            seed: g.seed.wrapping_add(i as u64),
            n: args.n_min + i % n_span,
            k: args.k_min + (i / n_span) % k_span,
        })
        .collect();
    let rows: Vec<String> = samples.par_iter().map(|s| row(g, args, s)).collect();
    println!("{HEADER}");
    for r in rows {
        println!("{r}");
    }
    Ok(())
}
