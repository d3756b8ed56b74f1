//! File formats: point-cloud CSV, contour / surface / plane JSON.

use std::path::Path;

use cauchylab::clifford_analysis::{DiscreteSurface, FacetSpec};
use cauchylab::complex_planes::PlaneBasis;
use cauchylab::contours::{Contour, ContourSegment, RayLength, SegmentKind};
use cauchylab::fixtures::PointCloud;
use cauchylab::measures::DiscreteMeasure;
use num_complex::Complex64;
use serde_json::Value;

use crate::error::CliError;
use crate::report::format_float;

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io {
        path: path.display().to_string(),
        source: e,
    }
}

#[derive(Debug, Clone)]
pub struct PointCloudFile {
    pub measure: DiscreteMeasure,
    /// Data rows read, before merging duplicates.
    pub rows: usize,
    pub merged: usize,
}

/// Reads a CSV with header `x1,...,xm` and an optional trailing `w`
/// column (weights default to 1).
pub fn parse_pointcloud(path: &Path) -> Result<PointCloudFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    parse_pointcloud_str(&text, &path.display().to_string())
}

pub fn parse_pointcloud_str(text: &str, origin: &str) -> Result<PointCloudFile, CliError> {
    let parse_err = |line: usize, message: String| CliError::Parse {
        path: origin.to_string(),
        line,
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| parse_err(1, e.to_string()))?.clone();
    let names: Vec<&str> = header.iter().collect();
    let weighted = names.last() == Some(&"w");
    let m = names.len() - usize::from(weighted);
    if m == 0 {
        return Err(parse_err(1, "header names no coordinate columns".into()));
    }
    for (k, name) in names[..m].iter().enumerate() {
        if *name != format!("x{}", k + 1) {
            return Err(parse_err(1, format!("expected column `x{}`, found `{name}`", k + 1)));
        }
    }

    let mut points = Vec::new();
    let mut weights = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
            parse_err(line, e.to_string())
        })?;
        let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
        if record.len() != names.len() {
            return Err(parse_err(line, format!("expected {} fields, found {}", names.len(), record.len())));
        }
        let mut values = Vec::with_capacity(record.len());
        for field in record.iter() {
            let v: f64 = field
                .parse()
                .map_err(|_| parse_err(line, format!("`{field}` is not a number")))?;
            if !v.is_finite() {
                return Err(parse_err(line, format!("`{field}` is not a finite number")));
            }
            values.push(v);
        }
        let w = if weighted { values.pop().expect("weight column") } else { 1.0 };
        if !(w > 0.0) {
            return Err(CliError::Validation(format!("{origin}, line {line}: weight {w} is not positive")));
        }
        points.push(values);
        weights.push(w);
    }
    let rows = points.len();
    let measure = DiscreteMeasure::new(m, &points, &weights)?;
    let merged = measure.merged_count();
    Ok(PointCloudFile { measure, rows, merged })
}

pub fn pointcloud_csv(cloud: &PointCloud) -> String {
    let mut out = String::new();
    let header: Vec<String> = (1..=cloud.m).map(|k| format!("x{k}")).chain(["w".to_string()]).collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for (p, w) in cloud.points.iter().zip(&cloud.weights) {
        let fields: Vec<String> = p.iter().chain([w]).map(|x| format_float(*x)).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| io_error(path, e))
}

fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse {
        path: path.display().to_string(),
        line: e.line(),
        message: e.to_string(),
    })
}

struct Fields<'a> {
    path: &'a Path,
}

impl Fields<'_> {
    fn err(&self, message: String) -> CliError {
        CliError::Format {
            path: self.path.display().to_string(),
            message,
        }
    }

    fn get<'v>(&self, obj: &'v Value, key: &str, ctx: &str) -> Result<&'v Value, CliError> {
        obj.get(key).ok_or_else(|| self.err(format!("{ctx}: missing `{key}`")))
    }

    fn num(&self, obj: &Value, key: &str, ctx: &str) -> Result<f64, CliError> {
        self.get(obj, key, ctx)?
            .as_f64()
            .ok_or_else(|| self.err(format!("{ctx}: `{key}` must be a number")))
    }

    fn num_or(&self, obj: &Value, key: &str, default: f64, ctx: &str) -> Result<f64, CliError> {
        match obj.get(key) {
            None | Some(Value::Null) => Ok(default),
            Some(_) => self.num(obj, key, ctx),
        }
    }

    fn reals(&self, v: &Value, ctx: &str) -> Result<Vec<f64>, CliError> {
        v.as_array()
            .ok_or_else(|| self.err(format!("{ctx}: expected an array of numbers")))?
            .iter()
            .map(|x| x.as_f64().ok_or_else(|| self.err(format!("{ctx}: expected a number"))))
            .collect()
    }

    fn complex(&self, v: &Value, ctx: &str) -> Result<Complex64, CliError> {
        match self.reals(v, ctx)?.as_slice() {
            [re, im] => Ok(Complex64::new(*re, *im)),
            _ => Err(self.err(format!("{ctx}: expected a [re, im] pair"))),
        }
    }

    fn array<'v>(&self, obj: &'v Value, key: &str, ctx: &str) -> Result<&'v Vec<Value>, CliError> {
        self.get(obj, key, ctx)?
            .as_array()
            .ok_or_else(|| self.err(format!("{ctx}: `{key}` must be an array")))
    }
}

#[derive(Debug, Clone)]
pub struct ContourFile {
    pub contour: Contour,
    /// Evaluation points.
    pub points: Vec<Complex64>,
}

/// `{"closed": bool, "segments": [...], "points": [[re, im], ...]}` with
/// segments `{"kind": "line", "a", "b"}`, `{"kind": "arc", "center",
/// "radius", "theta0", "theta1"}` or `{"kind": "ray", "origin",
/// "direction", "length"}` (`length` null or absent for an infinite ray),
/// each with an optional `density` (default 1).
pub fn parse_contour(path: &Path) -> Result<ContourFile, CliError> {
    let doc = read_json(path)?;
    let f = Fields { path };
    let closed = doc.get("closed").and_then(Value::as_bool).unwrap_or(false);
    let mut segments = Vec::new();
    for (k, s) in f.array(&doc, "segments", "contour")?.iter().enumerate() {
        let ctx = format!("segment {k}");
        let kind = f
            .get(s, "kind", &ctx)?
            .as_str()
            .ok_or_else(|| f.err(format!("{ctx}: `kind` must be a string")))?;
        let kind = match kind {
            "line" => SegmentKind::Line {
                a: f.complex(f.get(s, "a", &ctx)?, &ctx)?,
                b: f.complex(f.get(s, "b", &ctx)?, &ctx)?,
            },
            "arc" => SegmentKind::Arc {
                center: f.complex(f.get(s, "center", &ctx)?, &ctx)?,
                radius: f.num(s, "radius", &ctx)?,
                theta0: f.num(s, "theta0", &ctx)?,
                theta1: f.num(s, "theta1", &ctx)?,
            },
            "ray" => SegmentKind::Ray {
                origin: f.complex(f.get(s, "origin", &ctx)?, &ctx)?,
                direction: f.complex(f.get(s, "direction", &ctx)?, &ctx)?,
                length: match s.get("length") {
                    None | Some(Value::Null) => RayLength::Infinite,
                    Some(_) => RayLength::Finite(f.num(s, "length", &ctx)?),
                },
            },
            other => return Err(f.err(format!("{ctx}: unknown kind `{other}`"))),
        };
        let density = f.num_or(s, "density", 1.0, &ctx)?;
        segments.push(ContourSegment::new(kind, density)?);
    }
    let contour = Contour::new(segments, closed)?;
    let points = match doc.get("points") {
        None => Vec::new(),
        Some(v) => v
            .as_array()
            .ok_or_else(|| f.err("`points` must be an array".into()))?
            .iter()
            .map(|p| f.complex(p, "points"))
            .collect::<Result<_, _>>()?,
    };
    Ok(ContourFile { contour, points })
}

#[derive(Debug, Clone)]
pub struct SurfaceFile {
    pub surface: DiscreteSurface,
    pub points: Vec<Vec<f64>>,
}

/// `{"n": int, "closed": bool, "facets": [{"centroid", "normal", "area",
/// "density"}], "points": [[...]]}`.
pub fn parse_surface(path: &Path) -> Result<SurfaceFile, CliError> {
    let doc = read_json(path)?;
    let f = Fields { path };
    let n = f.num(&doc, "n", "surface")?;
    if n.fract() != 0.0 || n < 2.0 {
        return Err(f.err(format!("surface: `n` must be an integer ≥ 2, got {n}")));
    }
    let closed = doc.get("closed").and_then(Value::as_bool).unwrap_or(false);
    let mut facets = Vec::new();
    for (k, s) in f.array(&doc, "facets", "surface")?.iter().enumerate() {
        let ctx = format!("facet {k}");
        facets.push(FacetSpec {
            centroid: f.reals(f.get(s, "centroid", &ctx)?, &ctx)?,
            normal: f.reals(f.get(s, "normal", &ctx)?, &ctx)?,
            area: f.num(s, "area", &ctx)?,
            density: f.num_or(s, "density", 1.0, &ctx)?,
            diameter: s.get("diameter").and_then(Value::as_f64),
        });
    }
    let surface = DiscreteSurface::new(n as usize, facets, closed)?;
    let points = match doc.get("points") {
        None => Vec::new(),
        Some(v) => v
            .as_array()
            .ok_or_else(|| f.err("`points` must be an array".into()))?
            .iter()
            .map(|p| f.reals(p, "points"))
            .collect::<Result<_, _>>()?,
    };
    Ok(SurfaceFile { surface, points })
}

pub fn surface_json(s: &DiscreteSurface) -> String {
    let vec = |v: &[f64]| format!("[{}]", v.iter().map(|x| format_float(*x)).collect::<Vec<_>>().join(","));
    let facets: Vec<String> = s
        .facets()
        .map(|f| {
            format!(
                "{{\"area\":{},\"centroid\":{},\"density\":{},\"normal\":{}}}",
                format_float(f.area),
                vec(f.centroid),
                format_float(f.density),
                vec(f.normal)
            )
        })
        .collect();
    format!(
        "{{\"closed\":{},\"facets\":[{}],\"n\":{}}}\n",
        s.is_closed(),
        facets.join(","),
        s.n()
    )
}

/// `{"m": int, "vectors": [[[re, im], ...], ...]}`.
pub fn parse_plane(path: &Path) -> Result<PlaneBasis, CliError> {
    let doc = read_json(path)?;
    let f = Fields { path };
    let m = f.num(&doc, "m", "plane")?;
    let vectors: Vec<Vec<Complex64>> = f
        .array(&doc, "vectors", "plane")?
        .iter()
        .enumerate()
        .map(|(k, v)| {
            let ctx = format!("vector {k}");
            v.as_array()
                .ok_or_else(|| f.err(format!("{ctx}: expected an array of [re, im] pairs")))?
                .iter()
                .map(|z| f.complex(z, &ctx))
                .collect()
        })
        .collect::<Result<_, _>>()?;
    if m.fract() != 0.0 || m as usize != vectors.len() {
        return Err(f.err(format!("plane: `m` = {m} but {} vectors given", vectors.len())));
    }
    Ok(PlaneBasis::new(vectors)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pointcloud_with_weights() {
        let f = parse_pointcloud_str("x1,x2,w\n0,0,1\n1,0,2\n0,1,0.5\n", "t.csv").unwrap();
        assert_eq!((f.rows, f.merged, f.measure.len()), (3, 0, 3));
        assert_eq!(f.measure.total_mass(), 3.5);
    }

    #[test]
    fn pointcloud_duplicates_merge() {
        let f = parse_pointcloud_str("x1,x2\n0,0\n1,0\n0,0\n", "t.csv").unwrap();
        assert_eq!((f.rows, f.merged, f.measure.len()), (3, 1, 2));
        assert_eq!(f.measure.weights(), &[2.0, 1.0]);
    }

    #[test]
    fn pointcloud_errors_name_the_line() {
        let e = parse_pointcloud_str("x1,x2\n0,0\n1,NaN\n", "t.csv").unwrap_err();
        assert!(matches!(e, CliError::Parse { line: 3, .. }), "{e}");
        let e = parse_pointcloud_str("x1,x2\n0,0\n1\n", "t.csv").unwrap_err();
        assert!(matches!(e, CliError::Parse { line: 3, .. }), "{e}");
        let e = parse_pointcloud_str("x1,x2\n0,abc\n", "t.csv").unwrap_err();
        assert!(matches!(e, CliError::Parse { line: 2, .. }), "{e}");
        let e = parse_pointcloud_str("x1,x2,w\n0,0,0\n", "t.csv").unwrap_err();
        assert!(matches!(e, CliError::Validation(_)), "{e}");
        assert!(parse_pointcloud_str("a,b\n0,0\n", "t.csv").is_err());
    }
}
