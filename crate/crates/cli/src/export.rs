//! `alphaflow export`: embeds a snapshot as a closed polyline (circle) or a
//! triangulated surface (sphere).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use alphaflow::{Resolution, Snapshot, SupportField};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    PolylineCsv,
    Obj,
}

impl ExportFormat {
    pub fn name(self) -> &'static str {
        match self {
            ExportFormat::PolylineCsv => "polyline-csv",
            ExportFormat::Obj => "obj",
        }
    }

    fn extension(self) -> &'static str {
        match self {
            ExportFormat::PolylineCsv => "csv",
            ExportFormat::Obj => "obj",
        }
    }
}

/// `x,y` header then one row per node in θ order. The first point is not
/// repeated; the polyline closes implicitly.
pub fn polyline_csv(body: &SupportField) -> String {
    let mut out = String::from("x,y\n");
    for p in body.embed() {
        writeln!(out, "{:e},{:e}", p[0], p[1]).expect("writing to a String");
    }
    out
}

/// Wavefront OBJ with one vertex per node (1-based, node-index order), quads
/// between neighbouring rings and triangle fans closing each polar cap. All
/// faces are oriented with outward normals.
pub fn obj(body: &SupportField) -> Option<String> {
    let Resolution::Sphere { n_theta, n_phi } = body.grid().resolution() else {
        return None;
    };
    let mut out = String::new();
    for p in body.embed() {
        writeln!(out, "v {:e} {:e} {:e}", p[0], p[1], p[2]).expect("writing to a String");
    }
    let v = |j: usize, k: usize| j * n_phi + (k % n_phi) + 1;
    for k in 1..n_phi - 1 {
        writeln!(out, "f {} {} {}", v(0, 0), v(0, k), v(0, k + 1)).expect("writing to a String");
    }
    for j in 0..n_theta - 1 {
        for k in 0..n_phi {
            writeln!(out, "f {} {} {} {}", v(j, k), v(j + 1, k), v(j + 1, k + 1), v(j, k + 1))
                .expect("writing to a String");
        }
    }
    let s = n_theta - 1;
    for k in 1..n_phi - 1 {
        writeln!(out, "f {} {} {}", v(s, 0), v(s, k + 1), v(s, k)).expect("writing to a String");
    }
    Some(out)
}

/// Writes the export next to the snapshot (same stem, new extension) unless
/// `output` is given. Returns the written path.
pub fn cmd_export(snapshot: &Path, format: ExportFormat, output: Option<&Path>) -> Result<PathBuf, CliError> {
    let body = Snapshot::read(snapshot)?.to_field()?;
    let text = match format {
        ExportFormat::PolylineCsv if body.dim() == 1 => polyline_csv(&body),
        ExportFormat::Obj => obj(&body).ok_or(CliError::FormatMismatch {
            format: format.name(),
            dim: body.dim(),
        })?,
        ExportFormat::PolylineCsv => {
            return Err(CliError::FormatMismatch {
                format: format.name(),
                dim: body.dim(),
            })
        }
    };
    let path = output.map_or_else(|| snapshot.with_extension(format.extension()), Path::to_path_buf);
    std::fs::write(&path, text).map_err(CliError::io(format!("cannot write {}", path.display())))?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alphaflow::body::{make_body, BodySpec};
    use alphaflow::SphereGrid;
    use std::collections::HashSet;
    use std::sync::Arc;

    fn sphere_body(spec: BodySpec) -> SupportField {
        make_body(&spec, Arc::new(SphereGrid::sphere(8, 16).unwrap())).unwrap()
    }

    #[test]
    fn obj_is_a_closed_oriented_surface() {
        let body = sphere_body(BodySpec::Sphere { radius: 1.0 });
        let text = obj(&body).unwrap();
        let vertices = text.lines().filter(|l| l.starts_with("v ")).count();
        let faces: Vec<Vec<usize>> = text
            .lines()
            .filter_map(|l| l.strip_prefix("f "))
            .map(|l| l.split(' ').map(|i| i.parse().unwrap()).collect())
            .collect();
        // Every directed edge appears exactly once and its reverse exists.
        let mut edges = HashSet::new();
        for f in &faces {
            for i in 0..f.len() {
                assert!(edges.insert((f[i], f[(i + 1) % f.len()])));
            }
        }
        assert!(edges.iter().all(|&(a, b)| edges.contains(&(b, a))));
        let chi = vertices as i64 - (edges.len() / 2) as i64 + faces.len() as i64;
        assert_eq!(chi, 2);
        assert!(obj(&make_body(&BodySpec::Sphere { radius: 1.0 }, Arc::new(SphereGrid::circle(16).unwrap())).unwrap()).is_none());
    }

    #[test]
    fn polyline_has_one_row_per_node() {
        let body = make_body(&BodySpec::Sphere { radius: 2.0 }, Arc::new(SphereGrid::circle(32).unwrap())).unwrap();
        let text = polyline_csv(&body);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("x,y"));
        let rows: Vec<(f64, f64)> = lines
            .map(|l| {
                let (x, y) = l.split_once(',').unwrap();
                (x.parse().unwrap(), y.parse().unwrap())
            })
            .collect();
        assert_eq!(rows.len(), 32);
        assert!(rows.iter().all(|(x, y)| (x.hypot(*y) - 2.0).abs() < 1e-12));
    }
}
