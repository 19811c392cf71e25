//! Point files (input) and tree files (output of `build`, input of `query`).
//!
//! Point files have no header: one point per line, `k` comma-separated
//! decimals, optionally followed by an integer payload column. Tree files start
//! with a header `coord_0,...,coord_{k-1}[,split_dim],payload` and list nodes in
//! level order. Scalars are written in shortest round-trip form.

use std::fmt::Write as _;

use anyhow::{anyhow, bail, Context, Result};
use lbkd::verify::check_valid;
use lbkd::{KdTree, Points};

pub fn parse_points(text: &str, dims: usize, with_payload: bool) -> Result<Points> {
    let expected = dims + usize::from(with_payload);
    let mut points = Points::new(dims)?;
    let mut row = Vec::with_capacity(dims);
    for (line_no, line) in data_lines(text) {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != expected {
            bail!(
                "line {line_no}: expected {expected} fields, found {}",
                fields.len()
            );
        }
        row.clear();
        for (d, field) in fields[..dims].iter().enumerate() {
            row.push(parse_scalar(field, line_no, d)?);
        }
        let payload = if with_payload {
            fields[dims]
                .parse::<u64>()
                .with_context(|| format!("line {line_no}: bad payload `{}`", fields[dims]))?
        } else {
            points.len() as u64
        };
        points.push(&row, payload)?;
    }
    Ok(points)
}

/// Parses the scalar tuple given on the command line, e.g. `"45,40"`.
pub fn parse_tuple(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .enumerate()
        .map(|(d, f)| parse_scalar(f.trim(), 1, d))
        .collect()
}

fn parse_scalar(field: &str, line_no: usize, dim: usize) -> Result<f64> {
    let value: f64 = field
        .parse()
        .with_context(|| format!("line {line_no}: field {dim} `{field}` is not a decimal"))?;
    if !value.is_finite() {
        bail!("line {line_no}: field {dim} `{field}` is not finite");
    }
    Ok(value)
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

pub fn tree_header(dims: usize, widest: bool) -> String {
    let mut header: Vec<String> = (0..dims).map(|d| format!("coord_{d}")).collect();
    if widest {
        header.push("split_dim".into());
    }
    header.push("payload".into());
    header.join(",")
}

pub fn write_tree(tree: &KdTree) -> String {
    let dims = tree.dims();
    let split_dims = tree.split_dims();
    let mut out = tree_header(dims, split_dims.is_some());
    out.push('\n');
    for (s, (p, payload)) in tree.points().iter().enumerate() {
        for (d, c) in p.iter().enumerate() {
            if d > 0 {
                out.push(',');
            }
            write!(out, "{c}").unwrap();
        }
        if let Some(split) = split_dims {
            write!(out, ",{}", split[s]).unwrap();
        }
        writeln!(out, ",{payload}").unwrap();
    }
    out
}

/// Reads a tree file and checks that it really is a k-d tree.
pub fn read_tree(text: &str) -> Result<KdTree> {
    let mut lines = data_lines(text);
    let (_, header) = lines
        .next()
        .ok_or_else(|| anyhow!("tree file is empty (no header)"))?;
    let columns: Vec<&str> = header.split(',').map(str::trim).collect();
    let dims = columns
        .iter()
        .take_while(|c| c.starts_with("coord_"))
        .count();
    let widest = columns.get(dims) == Some(&"split_dim");
    if dims == 0 || columns != tree_header(dims, widest).split(',').collect::<Vec<_>>() {
        bail!("malformed tree header `{header}`");
    }
    let mut points = Points::new(dims)?;
    let mut split_dims = Vec::new();
    for (line_no, line) in lines {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != columns.len() {
            bail!(
                "line {line_no}: expected {} fields, found {}",
                columns.len(),
                fields.len()
            );
        }
        let row = fields[..dims]
            .iter()
            .enumerate()
            .map(|(d, f)| parse_scalar(f, line_no, d))
            .collect::<Result<Vec<f64>>>()?;
        if widest {
            split_dims.push(fields[dims].parse::<u8>().with_context(|| {
                format!("line {line_no}: bad split dimension `{}`", fields[dims])
            })?);
        }
        let payload = fields[columns.len() - 1]
            .parse::<u64>()
            .with_context(|| format!("line {line_no}: bad payload"))?;
        points.push(&row, payload)?;
    }
    let tree = KdTree::from_parts(points, widest.then_some(split_dims))?;
    if let Some(v) = check_valid(&tree).violation {
        bail!(
            "tree file is not a valid k-d tree: node {} and descendant {} disagree in dimension {}",
            v.node,
            v.descendant,
            v.dim
        );
    }
    Ok(tree)
}
