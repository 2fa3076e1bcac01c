//! Text formats: whitespace edge lists, CSV distance matrices and JSON payloads.
//!
//! Floats are emitted with Rust's shortest round-trip representation, so
//! parse → emit → parse is bit-exact.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::network::{EdgeListGraph, NetworkPayload, TransportationNetwork};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    EdgeList,
    MatrixCsv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "edge-list" => Ok(Format::EdgeList),
            "matrix-csv" => Ok(Format::MatrixCsv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format {other}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Parsed {
    Graph(EdgeListGraph),
    Network(TransportationNetwork),
}

impl Parsed {
    /// Edge lists are completed by metric closure; matrices are taken as-is.
    pub fn into_network(self) -> Result<TransportationNetwork> {
        match self {
            Parsed::Graph(g) => crate::network::metric_closure(&g),
            Parsed::Network(n) => Ok(n),
        }
    }
}

pub fn parse_network(text: &str, format: Format) -> Result<Parsed> {
    match format {
        Format::EdgeList => parse_edge_list(text).map(Parsed::Graph),
        Format::MatrixCsv => parse_matrix_csv(text).map(Parsed::Network),
        Format::Json => parse_json(text).map(Parsed::Network),
    }
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Splits on whitespace, keeping each token's 1-based column.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (pos, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(pos),
            (true, Some(s)) => {
                out.push((s + 1, &line[s..pos]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

pub fn parse_edge_list(text: &str) -> Result<EdgeListGraph> {
    let mut edges: Vec<(String, String, f64)> = Vec::new();
    let mut lines = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = raw.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let toks = tokens(raw);
        if toks.len() != 3 {
            let col = toks.get(3).map_or(raw.len() + 1, |t| t.0);
            return Err(parse_error(
                line_no,
                col,
                format!("expected `U V W`, found {} fields", toks.len()),
            ));
        }
        let (wcol, wtok) = toks[2];
        let w: f64 = wtok
            .parse()
            .map_err(|_| parse_error(line_no, wcol, format!("non-numeric weight `{wtok}`")))?;
        if !(w > 0.0 && w.is_finite()) {
            return Err(parse_error(line_no, wcol, format!("weight must be positive, got `{wtok}`")));
        }
        edges.push((toks[0].1.to_string(), toks[1].1.to_string(), w));
        lines.push(line_no);
    }
    if edges.is_empty() {
        return Err(parse_error(1, 1, "no edges"));
    }
    EdgeListGraph::from_labelled_edges(&edges).map_err(|e| match e {
        // report the source line rather than the edge ordinal
        Error::DuplicateEdge { u, v, line } => Error::DuplicateEdge {
            u,
            v,
            line: lines[line - 1],
        },
        other => other,
    })
}

pub fn parse_matrix_csv(text: &str) -> Result<TransportationNetwork> {
    let mut rows: Vec<(usize, Vec<(usize, &str)>)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        if raw.trim().is_empty() {
            continue;
        }
        let mut fields = Vec::new();
        let mut col = 1;
        for f in raw.split(',') {
            let lead = f.len() - f.trim_start().len();
            fields.push((col + lead, f.trim()));
            col += f.len() + 1;
        }
        rows.push((idx + 1, fields));
    }
    if rows.is_empty() {
        return Err(parse_error(1, 1, "empty matrix"));
    }
    // numeric labels such as `1,2,3` are recognised by the extra row
    let header_present = rows[0].1.iter().any(|(_, f)| f.parse::<f64>().is_err())
        || rows.len() == rows[0].1.len() + 1;
    let labels: Vec<String> = if header_present {
        rows[0].1.iter().map(|(_, f)| f.to_string()).collect()
    } else {
        (1..=rows[0].1.len()).map(|i| i.to_string()).collect()
    };
    let body = if header_present { &rows[1..] } else { &rows[..] };
    let n = labels.len();
    if body.len() != n {
        return Err(Error::NotSquare(format!("{} columns but {} rows", n, body.len())));
    }
    let mut matrix = Vec::with_capacity(n);
    for (line_no, fields) in body {
        if fields.len() != n {
            return Err(Error::NotSquare(format!(
                "line {} has {} fields, expected {}",
                line_no,
                fields.len(),
                n
            )));
        }
        let row = fields
            .iter()
            .map(|(col, f)| {
                f.parse::<f64>()
                    .map_err(|_| parse_error(*line_no, *col, format!("non-numeric entry `{f}`")))
            })
            .collect::<Result<Vec<f64>>>()?;
        matrix.push(row);
    }
    TransportationNetwork::new(labels, matrix)
}

pub fn parse_json(text: &str) -> Result<TransportationNetwork> {
    let payload: NetworkPayload = serde_json::from_str(text)
        .map_err(|e| parse_error(e.line(), e.column(), e.to_string()))?;
    payload.to_network()
}

pub fn emit_edge_list(g: &EdgeListGraph) -> String {
    let mut out = String::new();
    for e in g.edges() {
        let _ = writeln!(out, "{} {} {}", g.labels()[e.u], g.labels()[e.v], e.w);
    }
    out
}

/// Upper-triangle edge list of a complete network.
pub fn emit_network_edge_list(net: &TransportationNetwork) -> String {
    let mut out = String::new();
    for i in 0..net.n() {
        for j in i + 1..net.n() {
            let _ = writeln!(out, "{} {} {}", net.label(i), net.label(j), net.d(i, j));
        }
    }
    out
}

pub fn emit_matrix_csv(net: &TransportationNetwork) -> String {
    let mut out = net.labels().join(",");
    out.push('\n');
    for i in 0..net.n() {
        let row: Vec<String> = net.row(i).iter().map(|d| d.to_string()).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn emit_json(net: &TransportationNetwork) -> String {
    serde_json::to_string_pretty(&net.to_payload()).expect("payload serializes")
}

/// `%g`-style formatting with `digits` significant digits and a `.` decimal point.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        let m = trim_zeros(mantissa);
        return format!("{m}e{exp}");
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, x)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
