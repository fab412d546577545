use std::path::{Path, PathBuf};

use serde::Serialize;
use srgg_core::distance::{distance_report, network_hellinger, Alignment, DistanceOptions, DistanceReport, ScaleMode};
use srgg_core::io::{read_trace_csv, write_json, TraceTable};
use srgg_core::linalg::Matrix;
use srgg_core::posterior::pair_count;

use crate::args::{DistanceArgs, ScaleModeArg};
use crate::learn::sidecar_for;
use crate::manifest::{unix_now, Manifest};
use crate::CliError;

#[derive(Debug, Serialize)]
pub struct DistanceOutput {
    pub burnin: [usize; 2],
    pub report: DistanceReport,
    /// Hellinger distance between the two edge-frequency matrices, when both
    /// traces cover the same variable pairs.
    pub network_hellinger: Option<f64>,
}

fn sidecar_burnin(trace: &Path) -> Result<usize, CliError> {
    let side = sidecar_for(trace);
    let text = std::fs::read_to_string(&side)
        .map_err(|e| CliError::Input(format!("no --burnin given and sidecar {} is unreadable: {e}", side.display())))?;
    let v: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", side.display())))?;
    v.get("n_burnin")
        .and_then(|b| b.as_u64())
        .map(|b| b as usize)
        .ok_or_else(|| CliError::Input(format!("{} has no n_burnin", side.display())))
}

/// Post-burn-in edge frequencies from a parsed trace, as a symmetric matrix.
pub fn trace_marginals(tt: &TraceTable, burnin: usize) -> Option<Matrix<f64>> {
    let m = tt.pair_columns.len();
    let p = (0..=m + 1).find(|&p| pair_count(p) == m)?;
    let len = tt.log_u.len();
    if burnin + 1 >= len {
        return None;
    }
    let mut counts = vec![0usize; m];
    for t in (burnin + 1)..len {
        for (c, &e) in counts.iter_mut().zip(&tt.edges[t * m..(t + 1) * m]) {
            *c += usize::from(e);
        }
    }
    let n_post = (len - 1 - burnin) as f64;
    let mut out = Matrix::zeros(p, p);
    let mut k = 0;
    for i in 0..p {
        for j in (i + 1)..p {
            out[(i, j)] = counts[k] as f64 / n_post;
            out[(j, i)] = out[(i, j)];
            k += 1;
        }
    }
    Some(out)
}

pub fn run(args: &DistanceArgs) -> Result<(DistanceOutput, Option<PathBuf>), CliError> {
    let started = unix_now();
    let t1 = read_trace_csv(&args.trace1)?;
    let t2 = read_trace_csv(&args.trace2)?;
    let b1 = match args.burnin {
        Some(b) => b,
        None => sidecar_burnin(&args.trace1)?,
    };
    let b2 = match args.burnin {
        Some(b) => b,
        None => sidecar_burnin(&args.trace2)?,
    };
    let scale_mode = match args.scale_mode {
        ScaleModeArg::Auto => ScaleMode::Auto,
        ScaleModeArg::Divide => ScaleMode::Divide,
        ScaleModeArg::Shift => ScaleMode::Shift,
    };
    let alignment = if args.truncate_min { Alignment::TruncateMin } else { Alignment::Strict };
    let report = distance_report(&t1.log_u, b1, &t2.log_u, b2, DistanceOptions { scale_mode, alignment })?;
    if report.n_post == 1 {
        log::warn!("only one aligned post-burn-in sample");
    }
    let network_hellinger = if t1.pair_columns == t2.pair_columns {
        match (trace_marginals(&t1, b1), trace_marginals(&t2, b2)) {
            (Some(m1), Some(m2)) => network_hellinger(&m1, &m2).ok(),
            _ => None,
        }
    } else {
        log::warn!("traces cover different variable pairs; skipping network comparison");
        None
    };
    let out = DistanceOutput { burnin: [b1, b2], report, network_hellinger };

    let mut manifest_path = None;
    if let Some(path) = &args.out {
        write_json(path, &out)?;
        let mut manifest = Manifest::new("distance", args, started);
        manifest.add_input(&args.trace1)?;
        manifest.add_input(&args.trace2)?;
        manifest.outputs.push(path.clone());
        let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
        manifest_path = Some(manifest.write(dir)?);
    }
    Ok((out, manifest_path))
}
