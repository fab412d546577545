use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use srgg_core::data::{load_matrix_csv, standardize, subsample_rows, IngestConfig};
use srgg_core::io::{
    graphical_model_csv, graphical_model_dot, graphical_model_graphml, trace_csv, write_atomic, write_json,
};
use srgg_core::mcmc::{
    build_graphical_model, run_two_block_chain, ChainStats, EdgeMarginalMatrix, GraphicalModel, McmcConfig, SOFT_MAX_P,
};
use srgg_core::posterior::{CorrelationLikelihood, MarginalPosteriorConfig};

use crate::args::{Format, LearnArgs, LikelihoodArg};
use crate::manifest::{unix_now, Manifest};
use crate::CliError;

/// Sidecar written next to each trace; `distance` reads `n_burnin` from it.
#[derive(Debug, Serialize, Deserialize)]
pub struct LearnMeta {
    pub labels: Vec<String>,
    pub n_rows: usize,
    pub n_burnin: usize,
    pub config: McmcConfig,
    pub stats: ChainStats,
    pub marginals: EdgeMarginalMatrix,
    pub graph: GraphicalModel,
}

pub fn trace_path(out_dir: &Path, prefix: &str) -> PathBuf {
    out_dir.join(format!("{prefix}.trace.csv"))
}

/// `X.trace.csv` pairs with `X.meta.json`.
pub fn sidecar_for(trace: &Path) -> PathBuf {
    let name = trace.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let stem = name.strip_suffix(".trace.csv").or_else(|| name.strip_suffix(".csv")).unwrap_or(&name);
    trace.with_file_name(format!("{stem}.meta.json"))
}

fn config_from(args: &LearnArgs) -> McmcConfig {
    let likelihood = match args.likelihood {
        LikelihoodArg::Auto => CorrelationLikelihood::Auto,
        LikelihoodArg::Marginalized => CorrelationLikelihood::Marginalized,
        LikelihoodArg::IndependentRows => CorrelationLikelihood::IndependentRows,
    };
    let cfg = McmcConfig {
        n_iter: args.iters,
        n_burnin: args.burnin,
        sigma0: args.sigma0,
        w: args.w,
        tau: args.tau,
        seed: args.seed,
        normalization: MarginalPosteriorConfig {
            use_normalization: args.normalization,
            replicates: args.replicates,
            replicate_rows: args.replicate_rows,
            seed: args.seed,
            measurement_noise: args.noise_sd.clone(),
        },
        likelihood,
        graph_hastings: args.graph_hastings,
        ..McmcConfig::default()
    };
    if args.plain_metropolis {
        cfg.plain_metropolis()
    } else {
        cfg
    }
}

pub fn run(args: &LearnArgs) -> Result<Vec<PathBuf>, CliError> {
    let started = unix_now();
    let mut manifest = Manifest::new("learn", args, started);
    manifest.add_input(&args.input)?;

    let raw = load_matrix_csv::<f64>(&args.input, &IngestConfig::default())?;
    let raw = match args.rows {
        Some(n) => subsample_rows(&raw, n, args.subsample_seed.unwrap_or(args.seed))?,
        None => raw,
    };
    let data = standardize(&raw)?;
    if data.p() > SOFT_MAX_P {
        log::warn!("p = {} exceeds {SOFT_MAX_P}; the sampler will mix slowly", data.p());
    }
    let cfg = config_from(args);
    if cfg.n_iter > cfg.n_burnin && cfg.n_post() == 1 {
        log::warn!("only one post-burn-in sample; edge frequencies will be 0 or 1");
    }
    let chain = run_two_block_chain(&data, &cfg)?;
    log::info!(
        "acceptance: correlation {:.3}, graph {:.3}; ridge events {}",
        chain.stats.accept_rate_corr,
        chain.stats.accept_rate_graph,
        chain.stats.ridge_events
    );

    let labels = data.column_names.clone();
    let graph = build_graphical_model(&chain.marginals, &labels, cfg.tau);
    let prefix = args
        .prefix
        .clone()
        .unwrap_or_else(|| args.input.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or("srgg".into()));
    let dir = &args.out_dir;
    let mut outputs = Vec::new();

    let tp = trace_path(dir, &prefix);
    write_atomic(&tp, trace_csv(&chain.trace).as_bytes())?;
    outputs.push(tp);

    for f in &args.format {
        let (path, body) = match f {
            Format::Dot => (dir.join(format!("{prefix}.dot")), graphical_model_dot(&graph)),
            Format::Graphml => (dir.join(format!("{prefix}.graphml")), graphical_model_graphml(&graph)),
            Format::Csv => (dir.join(format!("{prefix}.edges.csv")), graphical_model_csv(&graph)),
            Format::Json => {
                let p = dir.join(format!("{prefix}.graph.json"));
                write_json(&p, &graph)?;
                outputs.push(p);
                continue;
            }
        };
        write_atomic(&path, body.as_bytes())?;
        outputs.push(path);
    }

    let meta = LearnMeta {
        labels,
        n_rows: data.n(),
        n_burnin: cfg.n_burnin,
        config: cfg,
        stats: chain.stats,
        marginals: chain.marginals,
        graph,
    };
    let mp = dir.join(format!("{prefix}.meta.json"));
    write_json(&mp, &meta)?;
    outputs.push(mp);

    manifest.outputs = outputs.clone();
    outputs.push(manifest.write(dir)?);
    Ok(outputs)
}
