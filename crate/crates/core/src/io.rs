//! Graph, trace and metadata serialization. Every file is written to a
//! temporary sibling and renamed into place.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use crate::bignet::LargeNetwork;
use crate::mcmc::{ChainTrace, GraphicalModel};
use crate::posterior::pairs;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{path}, line {line}: {msg}")]
    Malformed { path: PathBuf, line: usize, msg: String },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> IoError + '_ {
    move |source| IoError::Io { path: path.to_path_buf(), source }
}

/// Writes `bytes` to `path` via a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), IoError> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    {
        let mut f = std::fs::File::create(&tmp).map_err(io_err(&tmp))?;
        f.write_all(bytes).map_err(io_err(&tmp))?;
        f.sync_all().map_err(io_err(&tmp))?;
    }
    std::fs::rename(&tmp, path).map_err(io_err(path))
}

pub fn write_json<S: Serialize>(path: &Path, value: &S) -> Result<(), IoError> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    write_atomic(path, s.as_bytes())
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Undirected DOT with each edge labelled by its posterior frequency.
pub fn graphical_model_dot(gm: &GraphicalModel) -> String {
    let mut s = String::from("graph srgg {\n");
    let _ = writeln!(s, "  // tau = {}", gm.tau);
    for (i, l) in gm.labels.iter().enumerate() {
        let _ = writeln!(s, "  n{i} [label=\"{}\"];", dot_escape(l));
    }
    for e in &gm.edges {
        let _ = writeln!(s, "  n{} -- n{} [label=\"{:.4}\", weight={}];", e.i, e.j, e.weight, e.weight);
    }
    s.push_str("}\n");
    s
}

const PALETTE: [&str; 20] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
    "#aec7e8", "#ffbb78", "#98df8a", "#ff9896", "#c5b0d5", "#c49c94", "#f7b6d2", "#c7c7c7", "#dbdb8d", "#9edae5",
];

/// Stable class → colour map over the sorted distinct class names.
pub fn class_colors(classes: &[Option<String>]) -> Vec<Option<&'static str>> {
    let mut names: Vec<&String> = classes.iter().flatten().collect();
    names.sort();
    names.dedup();
    classes
        .iter()
        .map(|c| c.as_ref().map(|c| PALETTE[names.binary_search(&c).expect("present") % PALETTE.len()]))
        .collect()
}

struct GraphmlNode<'a> {
    id: usize,
    label: &'a str,
    class: Option<&'a str>,
    color: Option<&'static str>,
}

fn graphml(nodes: &[GraphmlNode<'_>], edges: &[(usize, usize, f64)]) -> String {
    let mut s = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    s.push_str("<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n");
    s.push_str("  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n");
    s.push_str("  <key id=\"class\" for=\"node\" attr.name=\"class\" attr.type=\"string\"/>\n");
    s.push_str("  <key id=\"color\" for=\"node\" attr.name=\"color\" attr.type=\"string\"/>\n");
    s.push_str("  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n");
    s.push_str("  <graph id=\"srgg\" edgedefault=\"undirected\">\n");
    for n in nodes {
        let _ = write!(s, "    <node id=\"n{}\"><data key=\"label\">{}</data>", n.id, xml_escape(n.label));
        if let Some(c) = n.class {
            let _ = write!(s, "<data key=\"class\">{}</data>", xml_escape(c));
        }
        if let Some(c) = n.color {
            let _ = write!(s, "<data key=\"color\">{c}</data>");
        }
        s.push_str("</node>\n");
    }
    for (k, &(i, j, w)) in edges.iter().enumerate() {
        let _ =
            writeln!(s, "    <edge id=\"e{k}\" source=\"n{i}\" target=\"n{j}\"><data key=\"weight\">{w}</data></edge>");
    }
    s.push_str("  </graph>\n</graphml>\n");
    s
}

pub fn graphical_model_graphml(gm: &GraphicalModel) -> String {
    let nodes: Vec<GraphmlNode<'_>> =
        gm.labels.iter().enumerate().map(|(id, l)| GraphmlNode { id, label: l, class: None, color: None }).collect();
    let edges: Vec<_> = gm.edges.iter().map(|e| (e.i, e.j, e.weight)).collect();
    graphml(&nodes, &edges)
}

pub fn network_graphml(net: &LargeNetwork, classes: Option<&[Option<String>]>) -> String {
    let colors = classes.map(class_colors);
    let nodes: Vec<GraphmlNode<'_>> = net
        .nodes
        .iter()
        .map(|&id| GraphmlNode {
            id,
            label: &net.labels[id],
            class: classes.and_then(|c| c[id].as_deref()),
            color: colors.as_ref().and_then(|c| c[id]),
        })
        .collect();
    let edges: Vec<_> = net.edges.iter().map(|e| (e.i, e.j, e.marginal)).collect();
    graphml(&nodes, &edges)
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

pub fn graphical_model_csv(gm: &GraphicalModel) -> String {
    let mut s = String::from("i,j,label_i,label_j,n_ij\n");
    for e in &gm.edges {
        let _ =
            writeln!(s, "{},{},{},{},{}", e.i, e.j, csv_field(&gm.labels[e.i]), csv_field(&gm.labels[e.j]), e.weight);
    }
    s
}

pub fn network_edges_csv(net: &LargeNetwork) -> String {
    let mut s = String::from("i,j,m_ij\n");
    for e in &net.edges {
        let _ = writeln!(s, "{},{},{}", e.i, e.j, e.marginal);
    }
    s
}

/// Columns `t, log_u, accept_corr, accept_graph, g_i_j...` for `i < j`.
pub fn trace_csv(trace: &ChainTrace) -> String {
    let mut s = String::from("t,log_u,accept_corr,accept_graph");
    for (i, j) in pairs(trace.p) {
        let _ = write!(s, ",g_{i}_{j}");
    }
    s.push('\n');
    for (t, row) in trace.rows.iter().enumerate() {
        let _ = write!(s, "{},{},{},{}", row.t, row.log_u, u8::from(row.accept_corr), u8::from(row.accept_graph));
        for &e in trace.edges_at(t) {
            s.push_str(if e { ",1" } else { ",0" });
        }
        s.push('\n');
    }
    s
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceTable {
    pub t: Vec<usize>,
    pub log_u: Vec<f64>,
    pub accept_corr: Vec<bool>,
    pub accept_graph: Vec<bool>,
    pub pair_columns: Vec<String>,
    /// Packed per row, `pair_columns.len()` entries each.
    pub edges: Vec<bool>,
}

pub fn read_trace_csv(path: &Path) -> Result<TraceTable, IoError> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    parse_trace_csv(&text, path)
}

pub fn parse_trace_csv(text: &str, path: &Path) -> Result<TraceTable, IoError> {
    let bad = |line: usize, msg: String| IoError::Malformed { path: path.to_path_buf(), line, msg };
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| bad(1, "empty file".into()))?;
    let cols: Vec<&str> = header.split(',').collect();
    if cols.len() < 4 || cols[..4] != ["t", "log_u", "accept_corr", "accept_graph"] {
        return Err(bad(1, "expected header t,log_u,accept_corr,accept_graph,...".into()));
    }
    let pair_columns: Vec<String> = cols[4..].iter().map(|s| s.to_string()).collect();
    let mut tt = TraceTable {
        t: Vec::new(),
        log_u: Vec::new(),
        accept_corr: Vec::new(),
        accept_graph: Vec::new(),
        pair_columns,
        edges: Vec::new(),
    };
    let flag = |s: &str, line: usize| match s {
        "0" => Ok(false),
        "1" => Ok(true),
        _ => Err(bad(line, format!("expected 0/1, got {s:?}"))),
    };
    for (k, l) in lines.enumerate() {
        let line = k + 2;
        if l.is_empty() {
            continue;
        }
        let f: Vec<&str> = l.split(',').collect();
        if f.len() != cols.len() {
            return Err(bad(line, format!("{} fields, expected {}", f.len(), cols.len())));
        }
        tt.t.push(f[0].parse().map_err(|_| bad(line, format!("bad t {:?}", f[0])))?);
        tt.log_u.push(f[1].parse().map_err(|_| bad(line, format!("bad log_u {:?}", f[1])))?);
        tt.accept_corr.push(flag(f[2], line)?);
        tt.accept_graph.push(flag(f[3], line)?);
        for c in &f[4..] {
            tt.edges.push(flag(c, line)?);
        }
    }
    if tt.log_u.is_empty() {
        return Err(bad(2, "no trace rows".into()));
    }
    Ok(tt)
}
