// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Text formats.
//!
//! Edge list: one `u v w` record per line, fields separated by whitespace or
//! commas. Blank lines and lines starting with `#` or `%` are skipped, and a
//! first record that does not parse as numbers is taken as a header.
//!
//! Community file: one `node community` record per line, same lexical rules.

use std::collections::HashMap;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::WeightedGraph;
use crate::error::{Error, Result};

struct Record<'a> {
    line: usize,
    fields: Vec<&'a str>,
}

fn records(text: &str) -> impl Iterator<Item = Record<'_>> {
    text.lines().enumerate().filter_map(|(idx, raw)| {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('%') {
            return None;
        }
        let fields = line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|f| !f.is_empty())
            .collect();
        Some(Record {
            line: idx + 1,
            fields,
        })
    })
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn looks_like_header(fields: &[&str]) -> bool {
    fields.iter().any(|f| f.parse::<f64>().is_err())
}

/// Loads a weighted edge list. Node labels are compacted to `0..n` in order of
/// first appearance.
pub fn load_edge_list(path: impl AsRef<Path>) -> Result<WeightedGraph> {
    let path = path.as_ref();
    let text = read(path)?;
    let parse_err = |line: usize, msg: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        msg,
    };

    let mut ids: HashMap<u64, usize> = HashMap::new();
    let mut labels = Vec::new();
    let mut edges = Vec::new();
    let mut intern = |label: u64| {
        *ids.entry(label).or_insert_with(|| {
            labels.push(label);
            labels.len() - 1
        })
    };

    for (k, rec) in records(&text).enumerate() {
        if k == 0 && looks_like_header(&rec.fields) {
            continue;
        }
        if rec.fields.len() != 3 {
            return Err(parse_err(
                rec.line,
                format!("expected `u v w`, found {} fields", rec.fields.len()),
            ));
        }
        let node = |s: &str| {
            s.parse::<u64>()
                .map_err(|_| parse_err(rec.line, format!("invalid node id `{s}`")))
        };
        let u = node(rec.fields[0])?;
        let v = node(rec.fields[1])?;
        let w: f64 = rec.fields[2]
            .parse()
            .map_err(|_| parse_err(rec.line, format!("invalid weight `{}`", rec.fields[2])))?;
        let (a, b) = (intern(u), intern(v));
        edges.push((a, b, w));
    }
    WeightedGraph::from_labeled_edges(labels, edges)
}

/// Attaches communities read from `path` to `g`. Node ids in the file are the
/// labels `g` was loaded with.
pub fn load_communities(path: impl AsRef<Path>, g: WeightedGraph) -> Result<WeightedGraph> {
    let path = path.as_ref();
    let text = read(path)?;
    let index: HashMap<u64, usize> = g
        .labels()
        .iter()
        .enumerate()
        .map(|(i, &l)| (l, i))
        .collect();
    let mut assigned: Vec<Option<usize>> = vec![None; g.node_count()];

    for (k, rec) in records(&text).enumerate() {
        if k == 0 && looks_like_header(&rec.fields) {
            continue;
        }
        let parse_err = |msg: String| Error::Parse {
            path: path.to_path_buf(),
            line: rec.line,
            msg,
        };
        if rec.fields.len() != 2 {
            return Err(parse_err(format!(
                "expected `node community`, found {} fields",
                rec.fields.len()
            )));
        }
        let label: u64 = rec.fields[0]
            .parse()
            .map_err(|_| parse_err(format!("invalid node id `{}`", rec.fields[0])))?;
        let community: usize = rec.fields[1]
            .parse()
            .map_err(|_| parse_err(format!("invalid community id `{}`", rec.fields[1])))?;
        let Some(&node) = index.get(&label) else {
            return Err(Error::Communities(format!("unknown node {label}")));
        };
        if assigned[node].replace(community).is_some() {
            return Err(Error::Communities(format!(
                "node {label} is listed more than once"
            )));
        }
    }

    let missing: Vec<String> = assigned
        .iter()
        .enumerate()
        .filter(|(_, c)| c.is_none())
        .map(|(i, _)| g.labels()[i].to_string())
        .collect();
    match missing.len() {
        0 => {}
        1 => {
            return Err(Error::Communities(format!(
                "node {} has no community",
                missing[0]
            )))
        }
        _ => {
            return Err(Error::Communities(format!(
                "nodes {} have no community",
                missing.join(", ")
            )))
        }
    }
    g.with_communities(assigned.into_iter().map(Option::unwrap).collect())
}

fn write_with(path: &Path, body: impl FnOnce(&mut dyn Write) -> std::io::Result<()>) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    body(&mut out)
        .and_then(|_| out.flush())
        .map_err(|e| Error::io(path, e))
}

/// Writes `u v w` lines with `u < v`. Weights use the shortest decimal form
/// that parses back to the same `f64`.
pub fn save_edge_list(g: &WeightedGraph, path: impl AsRef<Path>) -> Result<()> {
    write_with(path.as_ref(), |out| {
        let labels = g.labels();
        for e in g.edges() {
            writeln!(out, "{} {} {}", labels[e.u], labels[e.v], e.weight)?;
        }
        Ok(())
    })
}

/// Writes `node community` lines. A graph without communities produces an
/// error rather than an empty file.
pub fn save_communities(g: &WeightedGraph, path: impl AsRef<Path>) -> Result<()> {
    let communities = g
        .communities()
        .ok_or_else(|| Error::Communities("graph has no communities to save".into()))?;
    write_with(path.as_ref(), |out| {
        for (label, c) in g.labels().iter().zip(communities) {
            writeln!(out, "{label} {c}")?;
        }
        Ok(())
    })
}
