//! Graphviz export of a Markoff map on a ball of the tree.
//!
//! One node per tree vertex, labelled with its three regions and their
//! values, one line per region: `p/q: value`. Each tree edge becomes a
//! directed edge following its arrow; ties become a pair of opposite edges.

use std::collections::HashMap;
use std::fmt::Write;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::farey::{ball, Color, Slope, Triangle};
use crate::io::{format_complex, parse_complex};
use crate::markoff::{Arrow, MarkoffMap};
use crate::scalar::MapScalar;

pub fn to_dot<S: MapScalar>(map: &MarkoffMap<S>, center: &Triangle, radius: usize) -> Result<String> {
    let vertices = ball(center, radius)?;
    let index: HashMap<Triangle, usize> = vertices.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let mut out = String::from("digraph markoff {\n  node [shape=box];\n");
    for (i, v) in vertices.iter().enumerate() {
        let lines: Vec<String> = v
            .regions()
            .iter()
            .map(|s| Ok(format!("{s}: {}", format_complex(map.region_value(s)?))))
            .collect::<Result<_>>()?;
        writeln!(out, "  v{i} [label=\"{}\"];", lines.join("\\n")).expect("write to string");
    }
    for (i, v) in vertices.iter().enumerate() {
        for c in Color::ALL {
            let n = v.neighbor(c)?;
            let Some(&j) = index.get(&n) else { continue };
            if j < i {
                continue;
            }
            let e = v.edge(c)?;
            let heads: &[usize] = match map.orient_edge(&e)? {
                Arrow::Toward(s) if v.contains(&s) => &[i],
                Arrow::Toward(_) => &[j],
                Arrow::Both => &[i, j],
            };
            for &h in heads {
                let t = if h == i { j } else { i };
                writeln!(out, "  v{t} -> v{h};").expect("write to string");
            }
        }
    }
    out.push_str("}\n");
    Ok(out)
}

/// Parses a node label back into `(slope, value)` pairs.
pub fn parse_label(label: &str) -> Result<Vec<(Slope, Complex64)>> {
    label
        .split("\\n")
        .map(|line| {
            let (s, v) = line
                .split_once(": ")
                .ok_or_else(|| Error::Parse(format!("label line '{line}' is not 'slope: value'")))?;
            Ok((s.parse()?, parse_complex(v)?))
        })
        .collect()
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct DotGraph {
    pub nodes: Vec<(String, Vec<(Slope, Complex64)>)>,
    pub edges: Vec<(String, String)>,
}

/// Reads back the output of [`to_dot`]; not a general DOT parser.
pub fn parse_dot(text: &str) -> Result<DotGraph> {
    let mut g = DotGraph::default();
    for line in text.lines().map(str::trim) {
        if let Some((tail, head)) = line.strip_suffix(';').and_then(|l| l.split_once(" -> ")) {
            g.edges.push((tail.to_string(), head.to_string()));
        } else if let Some((id, rest)) = line.split_once(" [label=\"") {
            let label = rest
                .strip_suffix("\"];")
                .ok_or_else(|| Error::Parse(format!("unterminated label in '{line}'")))?;
            g.nodes.push((id.to_string(), parse_label(label)?));
        }
    }
    Ok(g)
}
