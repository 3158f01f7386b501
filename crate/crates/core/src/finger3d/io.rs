//! Point cloud files: ASCII PLY and plain XYZ.
//!
//! XYZ files carry one point per line as `x y z` or `x y z nx ny nz`;
//! blank lines and lines starting with `#` are ignored. PLY files must be
//! `format ascii 1.0` with a `vertex` element providing `x`, `y`, `z` and
//! optionally `nx`, `ny`, `nz`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use nalgebra::Vector3;

use super::{FingerPointCloud, GeometryError};

fn parse_err(path: &str, line: usize, msg: impl Into<String>) -> GeometryError {
    GeometryError::Parse {
        path: path.to_string(),
        line,
        msg: msg.into(),
    }
}

fn parse_floats(tokens: &[&str], path: &str, line: usize) -> Result<Vec<f64>, GeometryError> {
    tokens
        .iter()
        .map(|t| t.parse::<f64>().map_err(|e| parse_err(path, line, format!("{t:?}: {e}"))))
        .collect()
}

fn assemble(
    points: Vec<Vector3<f64>>,
    normals: Vec<Vector3<f64>>,
) -> Result<FingerPointCloud, GeometryError> {
    if !normals.is_empty() && normals.len() == points.len() {
        FingerPointCloud::with_normals(points, normals)
    } else {
        FingerPointCloud::new(points)
    }
}

pub fn parse_xyz(text: &str, path: &str) -> Result<FingerPointCloud, GeometryError> {
    let mut points = Vec::new();
    let mut normals = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()).collect();
        match tokens.len() {
            3 | 6 => {}
            n => return Err(parse_err(path, i + 1, format!("expected 3 or 6 values, found {n}"))),
        }
        let v = parse_floats(&tokens, path, i + 1)?;
        points.push(Vector3::new(v[0], v[1], v[2]));
        if v.len() == 6 {
            normals.push(Vector3::new(v[3], v[4], v[5]));
        } else if !normals.is_empty() {
            return Err(parse_err(path, i + 1, "normals present on some lines only"));
        }
    }
    if !normals.is_empty() && normals.len() != points.len() {
        return Err(parse_err(path, 0, "normals present on some lines only"));
    }
    assemble(points, normals)
}

pub fn parse_ply(text: &str, path: &str) -> Result<FingerPointCloud, GeometryError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, l)) if l.trim() == "ply" => {}
        _ => return Err(parse_err(path, 1, "missing 'ply' magic")),
    }
    let mut vertex_count = None;
    let mut in_vertex = false;
    let mut props: Vec<String> = Vec::new();
    // elements declared before `vertex` would have to be skipped
    let mut leading_lines = 0usize;
    let mut end_line = 0;
    for (i, raw) in lines.by_ref() {
        let tokens: Vec<&str> = raw.split_whitespace().collect();
        match tokens.as_slice() {
            ["format", "ascii", _] => {}
            ["format", other, ..] => {
                return Err(parse_err(path, i + 1, format!("unsupported PLY format {other}")))
            }
            ["comment", ..] | ["obj_info", ..] | [] => {}
            ["element", "vertex", n] => {
                vertex_count = Some(n.parse::<usize>().map_err(|e| parse_err(path, i + 1, e.to_string()))?);
                in_vertex = true;
            }
            ["element", _, n] => {
                if vertex_count.is_none() {
                    leading_lines += n.parse::<usize>().map_err(|e| parse_err(path, i + 1, e.to_string()))?;
                }
                in_vertex = false;
            }
            ["property", "list", ..] if in_vertex => {
                return Err(parse_err(path, i + 1, "list properties on vertices are not supported"))
            }
            ["property", _, name] => {
                if in_vertex {
                    props.push(name.to_string());
                }
            }
            ["property", ..] => {}
            ["end_header"] => {
                end_line = i + 1;
                break;
            }
            _ => return Err(parse_err(path, i + 1, format!("unexpected header line {raw:?}"))),
        }
    }
    if end_line == 0 {
        return Err(parse_err(path, 0, "missing end_header"));
    }
    let count = vertex_count.ok_or_else(|| parse_err(path, end_line, "no vertex element"))?;
    let find = |name: &str| props.iter().position(|p| p == name);
    let (ix, iy, iz) = match (find("x"), find("y"), find("z")) {
        (Some(a), Some(b), Some(c)) => (a, b, c),
        _ => return Err(parse_err(path, end_line, "vertex element lacks x/y/z")),
    };
    let normal_idx = match (find("nx"), find("ny"), find("nz")) {
        (Some(a), Some(b), Some(c)) => Some((a, b, c)),
        _ => None,
    };
    let mut points = Vec::with_capacity(count);
    let mut normals = Vec::new();
    let mut body = lines.filter(|(_, l)| !l.trim().is_empty()).skip(leading_lines);
    for _ in 0..count {
        let (i, raw) = body
            .next()
            .ok_or_else(|| parse_err(path, 0, format!("expected {count} vertices")))?;
        let tokens: Vec<&str> = raw.split_whitespace().collect();
        if tokens.len() < props.len() {
            return Err(parse_err(path, i + 1, format!("expected {} values", props.len())));
        }
        let v = parse_floats(&tokens[..props.len()], path, i + 1)?;
        points.push(Vector3::new(v[ix], v[iy], v[iz]));
        if let Some((a, b, c)) = normal_idx {
            normals.push(Vector3::new(v[a], v[b], v[c]));
        }
    }
    assemble(points, normals)
}

/// Reads a cloud, choosing the parser from the file extension (`.ply`,
/// anything else is treated as XYZ).
pub fn read_cloud(path: impl AsRef<Path>) -> Result<FingerPointCloud, GeometryError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| GeometryError::io(path, e))?;
    let name = path.display().to_string();
    let is_ply = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("ply"));
    if is_ply {
        parse_ply(&text, &name)
    } else {
        parse_xyz(&text, &name)
    }
}

pub fn format_xyz(cloud: &FingerPointCloud) -> String {
    let mut out = String::with_capacity(cloud.len() * 40);
    for (i, p) in cloud.points().iter().enumerate() {
        match cloud.normals() {
            Some(ns) => {
                let n = ns[i];
                let _ = writeln!(out, "{} {} {} {} {} {}", p.x, p.y, p.z, n.x, n.y, n.z);
            }
            None => {
                let _ = writeln!(out, "{} {} {}", p.x, p.y, p.z);
            }
        }
    }
    out
}

pub fn format_ply(cloud: &FingerPointCloud) -> String {
    let mut out = String::with_capacity(cloud.len() * 40 + 200);
    out.push_str("ply\nformat ascii 1.0\n");
    let _ = writeln!(out, "element vertex {}", cloud.len());
    out.push_str("property double x\nproperty double y\nproperty double z\n");
    if cloud.normals().is_some() {
        out.push_str("property double nx\nproperty double ny\nproperty double nz\n");
    }
    out.push_str("end_header\n");
    out.push_str(&format_xyz(cloud));
    out
}

/// Writes PLY for a `.ply` path and XYZ otherwise.
pub fn write_cloud(path: impl AsRef<Path>, cloud: &FingerPointCloud) -> Result<(), GeometryError> {
    let path = path.as_ref();
    let is_ply = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("ply"));
    let text = if is_ply { format_ply(cloud) } else { format_xyz(cloud) };
    fs::write(path, text).map_err(|e| GeometryError::io(path, e))?;
    Ok(())
}
