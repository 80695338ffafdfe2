//! Text formats: fan files, V-complex files, vertex-order files.
//!
//! All three are JSON. Weights and vertex coordinates are exact rationals
//! written as strings `"p"` or `"p/q"`; JSON numbers and decimals are rejected
//! there so that no floating-point value can enter.

use std::fmt::Write as _;

use serde::Deserialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::fan::{validate_fan, FanError, ValidityReport, WeightedCone, WeightedFan};
use crate::lattice::{Int, IntVector, Rat};
use crate::recession::{RecessionError, VPolyhedron, WeightedVComplex};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{field}: {message}")]
    Field { field: String, message: String },
    #[error("{0}")]
    Fan(#[from] FanError),
    #[error("{0}")]
    Complex(#[from] RecessionError),
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("not a fan: {} overlapping cone pairs, {} non-simplicial cones", .0.violations.len(), .0.non_simplicial.len())]
    Validation(ValidityReport),
}

impl From<serde_json::Error> for ParseError {
    fn from(e: serde_json::Error) -> Self {
        let message = e.to_string();
        let message = match message.rfind(" at line ") {
            Some(k) => message[..k].to_string(),
            None => message,
        };
        ParseError::Syntax { line: e.line(), column: e.column(), message }
    }
}

/// Parses `"p"` or `"p/q"` with decimal digits and an optional leading minus.
pub fn parse_rational(s: &str) -> Option<Rat> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    let unsigned = num.strip_prefix('-').unwrap_or(num);
    if !digits(unsigned) || !den.is_none_or(digits) {
        return None;
    }
    let n: Int = num.parse().ok()?;
    let d: Int = match den {
        Some(d) => d.parse().ok()?,
        None => Int::from(1),
    };
    if d == Int::from(0) {
        return None;
    }
    Some(Rat::new(n, d))
}

fn field_rational(field: String, s: &str) -> Result<Rat, ParseError> {
    parse_rational(s).ok_or_else(|| ParseError::Field {
        field,
        message: format!("expected an exact rational \"p\" or \"p/q\", got {s:?}"),
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCone {
    rays: Vec<usize>,
    weight: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFan {
    ambient_dim: usize,
    dim: usize,
    rays: Vec<Vec<i64>>,
    cones: Vec<RawCone>,
    #[serde(default)]
    isolated_rays: bool,
}

/// Structural parse; does not run [`validate_fan`].
pub fn parse_fan_unchecked(text: &str) -> Result<WeightedFan, ParseError> {
    let raw: RawFan = serde_json::from_str(text)?;
    let rays = raw.rays.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect();
    let cones = raw
        .cones
        .iter()
        .enumerate()
        .map(|(k, c)| Ok(WeightedCone::new(c.rays.clone(), field_rational(format!("cones[{k}].weight"), &c.weight)?)))
        .collect::<Result<Vec<_>, ParseError>>()?;
    let fan = if raw.isolated_rays {
        WeightedFan::with_isolated_rays(raw.ambient_dim, raw.dim, rays, cones)
    } else {
        WeightedFan::new(raw.ambient_dim, raw.dim, rays, cones)
    }?;
    Ok(fan)
}

/// Parses and checks that the cones form a fan.
pub fn parse_fan(text: &str) -> Result<WeightedFan, LoadError> {
    let fan = parse_fan_unchecked(text)?;
    let report = validate_fan(&fan);
    if !report.is_valid() {
        return Err(LoadError::Validation(report));
    }
    Ok(fan)
}

fn int_list(v: &[Int]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(", "))
}

/// Deterministic fan-file text, one ray or cone per line.
pub fn print_fan(fan: &WeightedFan) -> String {
    let mut s = String::new();
    s.push_str("{\n");
    writeln!(s, "  \"ambient_dim\": {},", fan.ambient_dim()).unwrap();
    writeln!(s, "  \"dim\": {},", fan.dim()).unwrap();
    if fan.isolated_rays_allowed() {
        s.push_str("  \"isolated_rays\": true,\n");
    }
    s.push_str("  \"rays\": [");
    for (k, r) in fan.rays().iter().enumerate() {
        s.push_str(if k == 0 { "\n" } else { ",\n" });
        write!(s, "    {}", int_list(r.coords())).unwrap();
    }
    s.push_str(if fan.rays().is_empty() { "],\n" } else { "\n  ],\n" });
    s.push_str("  \"cones\": [");
    for (k, c) in fan.cones().iter().enumerate() {
        s.push_str(if k == 0 { "\n" } else { ",\n" });
        let idx: Vec<String> = c.rays().iter().map(ToString::to_string).collect();
        write!(s, "    {{\"rays\": [{}], \"weight\": \"{}\"}}", idx.join(", "), c.weight).unwrap();
    }
    s.push_str(if fan.cones().is_empty() { "]\n" } else { "\n  ]\n" });
    s.push_str("}\n");
    s
}

/// Relabeling-invariant text: rays sorted, cones remapped and sorted.
pub fn canonical_form(fan: &WeightedFan) -> String {
    let mut order: Vec<usize> = (0..fan.rays().len()).collect();
    order.sort_by(|&a, &b| fan.ray(a).cmp(fan.ray(b)));
    let mut perm = vec![0; order.len()];
    for (new, &old) in order.iter().enumerate() {
        perm[old] = new;
    }
    let mut cones: Vec<(Vec<usize>, String)> = fan
        .cones()
        .iter()
        .map(|c| {
            let mut r: Vec<usize> = c.rays().iter().map(|&i| perm[i]).collect();
            r.sort_unstable();
            (r, c.weight.to_string())
        })
        .collect();
    cones.sort();
    let mut s = format!("{} {} {}\n", fan.ambient_dim(), fan.dim(), fan.isolated_rays_allowed());
    for &old in &order {
        s.push_str(&int_list(fan.ray(old)));
        s.push('\n');
    }
    for (r, w) in cones {
        writeln!(s, "{r:?} {w}").unwrap();
    }
    s
}

/// Hex SHA-256 of [`canonical_form`].
pub fn fingerprint(fan: &WeightedFan) -> String {
    hex::encode(Sha256::digest(canonical_form(fan).as_bytes()))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCell {
    vertices: Vec<Vec<String>>,
    #[serde(default)]
    rays: Vec<Vec<i64>>,
    weight: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawComplex {
    ambient_dim: usize,
    dim: usize,
    cells: Vec<RawCell>,
}

pub fn parse_vcomplex(text: &str) -> Result<WeightedVComplex, ParseError> {
    let raw: RawComplex = serde_json::from_str(text)?;
    let mut cells = Vec::with_capacity(raw.cells.len());
    for (k, c) in raw.cells.iter().enumerate() {
        let vertices = c
            .vertices
            .iter()
            .enumerate()
            .map(|(v, coords)| {
                coords
                    .iter()
                    .enumerate()
                    .map(|(i, x)| field_rational(format!("cells[{k}].vertices[{v}][{i}]"), x))
                    .collect::<Result<Vec<Rat>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let rays: Vec<IntVector> = c.rays.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect();
        let weight = field_rational(format!("cells[{k}].weight"), &c.weight)?;
        let p = VPolyhedron::new(vertices, rays).map_err(|e| ParseError::Field {
            field: format!("cells[{k}]"),
            message: e.to_string(),
        })?;
        cells.push((p, weight));
    }
    Ok(WeightedVComplex::new(raw.ambient_dim, raw.dim, cells)?)
}

pub fn print_vcomplex(c: &WeightedVComplex) -> String {
    let mut s = String::new();
    s.push_str("{\n");
    writeln!(s, "  \"ambient_dim\": {},", c.ambient_dim()).unwrap();
    writeln!(s, "  \"dim\": {},", c.dim()).unwrap();
    s.push_str("  \"cells\": [");
    for (k, (p, w)) in c.cells().iter().enumerate() {
        s.push_str(if k == 0 { "\n" } else { ",\n" });
        let verts: Vec<String> = p
            .vertices()
            .iter()
            .map(|v| {
                let xs: Vec<String> = v.iter().map(|x| format!("\"{x}\"")).collect();
                format!("[{}]", xs.join(", "))
            })
            .collect();
        let rays: Vec<String> = p.rays().iter().map(|r| int_list(r)).collect();
        write!(
            s,
            "    {{\"vertices\": [{}], \"rays\": [{}], \"weight\": \"{}\"}}",
            verts.join(", "),
            rays.join(", "),
            w
        )
        .unwrap();
    }
    s.push_str(if c.cells().is_empty() { "]\n" } else { "\n  ]\n" });
    s.push_str("}\n");
    s
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OrderEntry {
    Index(usize),
    Vector(Vec<i64>),
}

/// A JSON array whose entries are ray indices or ray coordinate vectors.
pub fn parse_order(text: &str, fan: &WeightedFan) -> Result<Vec<usize>, ParseError> {
    let raw: Vec<OrderEntry> = serde_json::from_str(text)?;
    raw.into_iter()
        .enumerate()
        .map(|(k, e)| match e {
            OrderEntry::Index(i) => Ok(i),
            OrderEntry::Vector(v) => {
                let v: IntVector = v.into_iter().map(Int::from).collect();
                fan.find_ray(&v).ok_or_else(|| ParseError::Field {
                    field: format!("order[{k}]"),
                    message: format!("{} is not a ray of the fan", int_list(&v)),
                })
            }
        })
        .collect()
}
