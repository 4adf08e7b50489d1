//! Text formats for instances, solutions, vertex mappings and incidence
//! matrices.
//!
//! Instance files carry a header `p awecp <n> <m> <k>`, one `e <u> <v> <w>`
//! line per edge and one `a <u> <c>` line per annotated vertex. Solution
//! files carry `s awecp <count>` followed by `c <v...>` lines, or the
//! single line `s awecp NO`. Vertex ids are 1-based in files and 0-based
//! in memory. `#` starts a comment line; blank lines are ignored.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::fpp::FppPlane;
use crate::kernel::LiftMap;
use crate::model::{AwecpInstance, CliquePartition};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

fn significant_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_number<T: std::str::FromStr>(
    token: &str,
    line: usize,
    what: &str,
) -> Result<T, ParseError> {
    token
        .parse()
        .map_err(|_| err(line, format!("invalid {what}: {token}")))
}

fn parse_vertex(token: &str, n: usize, line: usize) -> Result<usize, ParseError> {
    let id: usize = parse_number(token, line, "vertex id")?;
    if id == 0 || id > n {
        return Err(err(line, format!("vertex id {id} outside 1..={n}")));
    }
    Ok(id - 1)
}

/// A solution file's payload: a partition or a proven NO.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolutionRecord {
    Partition(CliquePartition),
    No,
}

pub fn parse_instance(text: &str) -> Result<AwecpInstance, ParseError> {
    let mut lines = significant_lines(text);
    let (header_line, header) = lines.next().ok_or_else(|| err(0, "empty instance file"))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 5 || tokens[0] != "p" || tokens[1] != "awecp" {
        return Err(err(header_line, "expected header `p awecp <n> <m> <k>`"));
    }
    let n: usize = parse_number(tokens[2], header_line, "vertex count")?;
    let m: usize = parse_number(tokens[3], header_line, "edge count")?;
    let k: usize = parse_number(tokens[4], header_line, "budget")?;
    let mut edges: Vec<(usize, usize, u32)> = Vec::with_capacity(m);
    let mut seen_edges = std::collections::HashSet::new();
    let mut annotations: BTreeMap<usize, u32> = BTreeMap::new();
    for (line_no, line) in lines {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.first() {
            Some(&"e") => {
                if tokens.len() != 4 {
                    return Err(err(line_no, "expected `e <u> <v> <w>`"));
                }
                let u = parse_vertex(tokens[1], n, line_no)?;
                let v = parse_vertex(tokens[2], n, line_no)?;
                if u == v {
                    return Err(err(line_no, format!("self-loop at vertex {}", u + 1)));
                }
                let w: u32 = parse_number(tokens[3], line_no, "edge weight")?;
                if w == 0 {
                    return Err(err(line_no, "edge weight must be at least 1"));
                }
                if !seen_edges.insert((u.min(v), u.max(v))) {
                    return Err(err(
                        line_no,
                        format!("duplicate edge {}-{}", u.min(v) + 1, u.max(v) + 1),
                    ));
                }
                edges.push((u, v, w));
            }
            Some(&"a") => {
                if tokens.len() != 3 {
                    return Err(err(line_no, "expected `a <u> <c>`"));
                }
                let u = parse_vertex(tokens[1], n, line_no)?;
                let c: u32 = parse_number(tokens[2], line_no, "vertex weight")?;
                if annotations.insert(u, c).is_some() {
                    return Err(err(line_no, format!("duplicate annotation for vertex {}", u + 1)));
                }
            }
            _ => return Err(err(line_no, format!("unrecognised line: {line}"))),
        }
    }
    if edges.len() != m {
        return Err(err(
            0,
            format!("header declares {m} edges, found {}", edges.len()),
        ));
    }
    AwecpInstance::new(n, edges, annotations, k).map_err(|e| err(0, e.to_string()))
}

pub fn print_instance(inst: &AwecpInstance) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "p awecp {} {} {}",
        inst.vertex_count(),
        inst.edge_count(),
        inst.budget()
    )
    .unwrap();
    for &(u, v, w) in inst.edges() {
        writeln!(out, "e {} {} {}", u + 1, v + 1, w).unwrap();
    }
    for (&v, &c) in inst.annotations() {
        writeln!(out, "a {} {}", v + 1, c).unwrap();
    }
    out
}

pub fn parse_solution(text: &str, n: usize) -> Result<SolutionRecord, ParseError> {
    let mut lines = significant_lines(text);
    let (header_line, header) = lines.next().ok_or_else(|| err(0, "empty solution file"))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 3 || tokens[0] != "s" || tokens[1] != "awecp" {
        return Err(err(header_line, "expected header `s awecp <count>` or `s awecp NO`"));
    }
    if tokens[2] == "NO" {
        if let Some((line_no, _)) = lines.next() {
            return Err(err(line_no, "unexpected content after NO"));
        }
        return Ok(SolutionRecord::No);
    }
    let count: usize = parse_number(tokens[2], header_line, "clique count")?;
    let mut cliques = Vec::with_capacity(count);
    for (line_no, line) in lines {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.first() != Some(&"c") {
            return Err(err(line_no, format!("unrecognised line: {line}")));
        }
        let mut clique = Vec::with_capacity(tokens.len() - 1);
        for token in &tokens[1..] {
            clique.push(parse_vertex(token, n, line_no)?);
        }
        cliques.push(clique);
    }
    if cliques.len() != count {
        return Err(err(
            0,
            format!("header declares {count} cliques, found {}", cliques.len()),
        ));
    }
    CliquePartition::new(cliques)
        .map(SolutionRecord::Partition)
        .map_err(|e| err(0, e.to_string()))
}

pub fn print_solution(record: &SolutionRecord) -> String {
    match record {
        SolutionRecord::No => "s awecp NO\n".to_string(),
        SolutionRecord::Partition(partition) => {
            let mut out = String::new();
            writeln!(out, "s awecp {}", partition.len()).unwrap();
            for clique in partition.cliques() {
                out.push('c');
                for &v in clique {
                    write!(out, " {}", v + 1).unwrap();
                }
                out.push('\n');
            }
            out
        }
    }
}

/// One `m <original> <kernel>` line per vertex, 1-based; kernel id 0
/// marks a removed vertex whose solution row is all zeros.
pub fn print_mapping(lift: &LiftMap) -> String {
    let mut out = String::new();
    for v in 0..lift.original_n() {
        let target = lift.target(v).map_or(0, |t| t + 1);
        writeln!(out, "m {} {}", v + 1, target).unwrap();
    }
    out
}

pub fn parse_mapping(text: &str, kernel_n: usize) -> Result<LiftMap, ParseError> {
    let mut targets = Vec::new();
    for (line_no, line) in significant_lines(text) {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 3 || tokens[0] != "m" {
            return Err(err(line_no, "expected `m <original> <kernel>`"));
        }
        let original: usize = parse_number(tokens[1], line_no, "vertex id")?;
        if original != targets.len() + 1 {
            return Err(err(line_no, format!("expected vertex {}", targets.len() + 1)));
        }
        let kernel: usize = parse_number(tokens[2], line_no, "kernel vertex id")?;
        if kernel > kernel_n {
            return Err(err(line_no, format!("kernel id {kernel} outside 0..={kernel_n}")));
        }
        targets.push(kernel.checked_sub(1));
    }
    Ok(LiftMap::new(kernel_n, targets))
}

/// Header `p fpp <order> <size>` followed by the incidence matrix as
/// rows of 0/1 characters, points by sets.
pub fn print_plane(plane: &FppPlane) -> String {
    let size = plane.size();
    let mut out = String::new();
    writeln!(out, "p fpp {} {}", plane.order(), size).unwrap();
    for p in 0..size {
        for s in 0..size {
            out.push(if plane.incident(p, s) { '1' } else { '0' });
        }
        out.push('\n');
    }
    out
}
