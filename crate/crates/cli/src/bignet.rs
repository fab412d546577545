use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};

use serde::Serialize;
use srgg_core::bignet::{
    build_from_ranked, build_large_network, class_variance_ratio, prune_zero_degree, ClassStats, LargeNetwork,
};
use srgg_core::data::{load_matrix_csv, load_npmi_triples, IngestConfig, MissingPolicy, PreRanked};
use srgg_core::io::{network_edges_csv, network_graphml, write_atomic, write_json};
use srgg_core::linalg::Matrix;
use srgg_core::Scalar;

use crate::args::{BignetArgs, MissingArg};
use crate::manifest::{unix_now, Manifest};
use crate::CliError;

#[derive(Debug, Serialize)]
pub struct BignetStats {
    pub tau: f64,
    pub nodes: usize,
    pub connected_nodes: usize,
    pub edges: usize,
    pub dropped_constant_rows: Vec<String>,
    pub average_degree: f64,
    pub average_degree_connected: f64,
    pub degree_histogram: BTreeMap<usize, usize>,
    pub classes: Option<ClassStats>,
}

/// `label,class` lines; a first line of `label,class` is treated as a header.
pub fn load_classes(path: &Path, labels: &[String]) -> Result<Vec<Option<String>>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let mut map: HashMap<&str, String> = HashMap::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (k == 0 && line.eq_ignore_ascii_case("label,class")) {
            continue;
        }
        let sep = if line.contains('\t') { '\t' } else { ',' };
        let (label, class) = line
            .split_once(sep)
            .ok_or_else(|| CliError::Input(format!("{}, line {}: expected label{sep}class", path.display(), k + 1)))?;
        map.insert(label.trim(), class.trim().to_string());
    }
    let out: Vec<Option<String>> = labels.iter().map(|l| map.get(l.as_str()).cloned()).collect();
    let matched = out.iter().filter(|c| c.is_some()).count();
    if matched < map.len() {
        log::warn!("{} class entries name no node", map.len() - matched);
    }
    Ok(out)
}

struct Built {
    net: LargeNetwork,
    dropped: Vec<String>,
    classes: Option<ClassStats>,
}

fn build_npmi<T: Scalar>(path: &Path, args: &BignetArgs) -> Result<Built, CliError> {
    let policy = match args.missing {
        MissingArg::Zero => MissingPolicy::Zero,
        MissingArg::Bottom => MissingPolicy::Bottom,
    };
    let table = load_npmi_triples::<T>(path, policy)?;
    let s = &table.scores;
    let mut keep = Vec::new();
    let mut dropped = Vec::new();
    for i in 0..s.rows() {
        let row = s.row(i);
        if row.iter().all(|&v| v == row[0]) {
            dropped.push(table.row_labels[i].clone());
        } else {
            keep.push(i);
        }
    }
    if !dropped.is_empty() {
        log::warn!("dropping {} rows with constant scores", dropped.len());
    }
    let scores = Matrix::from_fn(keep.len(), s.cols(), |r, c| s[(keep[r], c)]);
    let labels: Vec<String> = keep.iter().map(|&i| table.row_labels[i].clone()).collect();
    let ranked = PreRanked::from_rows(&scores)?;
    let net = build_from_ranked(&ranked, args.tau, &labels)?;
    let classes = match &args.classes {
        Some(cp) => {
            let cl = load_classes(cp, &labels)?;
            Some(class_variance_ratio(labels.len(), |i, j| ranked.correlation(i, j).to_f64_lossy(), &cl)?)
        }
        None => None,
    };
    Ok(Built { net, dropped, classes })
}

fn build_corr<T: Scalar>(path: &Path, args: &BignetArgs) -> Result<Built, CliError> {
    let raw = load_matrix_csv::<T>(path, &IngestConfig::default())?;
    let corr = &raw.values;
    if corr.rows() != corr.cols() {
        return Err(CliError::Shape(format!("correlation matrix is {}x{}", corr.rows(), corr.cols())));
    }
    let labels = raw.column_names.clone();
    let net = build_large_network(corr, args.tau, &labels)?;
    let classes = match &args.classes {
        Some(cp) => {
            let cl = load_classes(cp, &labels)?;
            Some(class_variance_ratio(labels.len(), |i, j| corr[(i, j)].to_f64_lossy(), &cl)?)
        }
        None => None,
    };
    Ok(Built { net, dropped: Vec::new(), classes })
}

fn build<T: Scalar>(args: &BignetArgs) -> Result<Built, CliError> {
    match (&args.npmi, &args.corr) {
        (Some(p), _) => build_npmi::<T>(p, args),
        (None, Some(p)) => build_corr::<T>(p, args),
        (None, None) => Err(CliError::Input("one of --npmi or --corr is required".into())),
    }
}

pub fn run(args: &BignetArgs) -> Result<(BignetStats, Vec<PathBuf>), CliError> {
    let started = unix_now();
    let input = args.npmi.as_ref().or(args.corr.as_ref()).cloned().unwrap_or_default();
    let mut manifest = Manifest::new("bignet", args, started);
    manifest.add_input(&input)?;
    if let Some(c) = &args.classes {
        manifest.add_input(c)?;
    }

    let built = if args.f32 { build::<f32>(args)? } else { build::<f64>(args)? };
    let net = built.net;
    let connected = prune_zero_degree(&net);
    let class_vec = match &args.classes {
        Some(cp) => Some(load_classes(cp, &net.labels)?),
        None => None,
    };
    let stats = BignetStats {
        tau: args.tau,
        nodes: net.nodes.len(),
        connected_nodes: connected.nodes.len(),
        edges: net.edges.len(),
        dropped_constant_rows: built.dropped,
        average_degree: net.average_degree(),
        average_degree_connected: connected.average_degree(),
        degree_histogram: connected.degree_histogram(),
        classes: built.classes,
    };

    let prefix = args
        .prefix
        .clone()
        .unwrap_or_else(|| input.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or("network".into()));
    let dir = &args.out_dir;
    let edges_path = dir.join(format!("{prefix}.edges.csv"));
    write_atomic(&edges_path, network_edges_csv(&net).as_bytes())?;
    let graphml_path = dir.join(format!("{prefix}.graphml"));
    write_atomic(&graphml_path, network_graphml(&connected, class_vec.as_deref()).as_bytes())?;
    let stats_path = dir.join(format!("{prefix}.stats.json"));
    write_json(&stats_path, &stats)?;

    let mut outputs = vec![edges_path, graphml_path, stats_path];
    manifest.outputs = outputs.clone();
    outputs.push(manifest.write(dir)?);
    Ok((stats, outputs))
}
