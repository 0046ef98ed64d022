//! Point-set file formats and JSON schemas for alpha tables and weight
//! measures.

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::cubes::{AlphaTable, SignVector, WeightMeasure};
use crate::error::{Error, Result};
use crate::points::PointSet;

#[derive(Debug, Serialize, Deserialize)]
struct PointSetJson {
    dim: usize,
    points: Vec<Vec<f64>>,
}

/// Parses `{"dim": N, "points": [[...], ...]}`.
pub fn point_set_from_json(text: &str) -> Result<PointSet> {
    let raw: PointSetJson =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    PointSet::new(raw.dim, raw.points)
}

/// Parses one point per row, `N` columns; a leading non-numeric row is
/// treated as a header.
pub fn point_set_from_csv(text: &str) -> Result<PointSet> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, _> =
            line.split(',').map(|c| c.trim().parse::<f64>()).collect();
        match parsed {
            Ok(row) => rows.push(row),
            Err(e) => {
                if lineno == 0 && rows.is_empty() {
                    continue; // header
                }
                return Err(Error::Parse(format!("line {}: {e}", lineno + 1)));
            }
        }
    }
    let dim = rows.first().map(|r| r.len()).unwrap_or(0);
    PointSet::new(dim, rows)
}

/// Dispatches on content: JSON if the text starts with `{`, CSV otherwise.
pub fn point_set_from_str(text: &str) -> Result<PointSet> {
    if text.trim_start().starts_with('{') {
        point_set_from_json(text)
    } else {
        point_set_from_csv(text)
    }
}

pub fn point_set_to_json(f: &PointSet) -> String {
    serde_json::to_string_pretty(&PointSetJson {
        dim: f.dim(),
        points: f.points().to_vec(),
    })
    .expect("point set serializes")
}

/// `{"r": .., "order": [[point, [s..]], ..], "alpha": [..], "system": .., "residual": ..}`
pub fn alpha_table_to_json(t: &AlphaTable) -> String {
    let dim = t.spec().base().dim();
    let m = t.spec().base().len();
    let order: Vec<_> = (0..m)
        .flat_map(|p| {
            SignVector::all(dim).map(move |s| {
                json!([p, s.entries().iter().map(|&x| x as i32).collect::<Vec<_>>()])
            })
        })
        .collect();
    serde_json::to_string_pretty(&json!({
        "r": t.spec().radius(),
        "order": order,
        "alpha": t.values(),
        "system": t.system_used().as_str(),
        "residual": t.residual(),
        "cross_residual": t.cross_residual(),
    }))
    .expect("alpha table serializes")
}

/// CSV rows `point_index,s1..sN,alpha`, one per coefficient.
pub fn alpha_table_to_csv(t: &AlphaTable) -> String {
    let dim = t.spec().base().dim();
    let header: String = (1..=dim).map(|k| format!("s{k},")).collect();
    let mut out = format!("point_index,{header}alpha\n");
    let mut values = t.values().iter();
    for p in 0..t.spec().base().len() {
        for s in SignVector::all(dim) {
            let signs: String = s.entries().iter().map(|&x| format!("{x},")).collect();
            out.push_str(&format!("{p},{signs}{}\n", values.next().unwrap()));
        }
    }
    out
}

pub fn weight_measure_to_json(w: &WeightMeasure) -> String {
    let spec = w.spec();
    serde_json::to_string_pretty(&json!({
        "lebesgue": {
            "coefficient": w.lebesgue_coefficient(),
            "centers": spec.base().points(),
            "radius": spec.radius(),
            "total_mass": w.lebesgue_total_mass(),
        },
        "dirac": w.dirac_corrections().iter().map(|d| json!({
            "at": d.at,
            "coefficient": d.coefficient,
        })).collect::<Vec<_>>(),
        "total_mass": w.total_mass(),
    }))
    .expect("weight measure serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let f = PointSet::new(2, vec![vec![0.0, 0.0], vec![4.0, 8.0], vec![7.0, 3.0]]).unwrap();
        let text = point_set_to_json(&f);
        let g = point_set_from_json(&text).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn csv_with_and_without_header() {
        let f = point_set_from_csv("x,y\n0,0\n4,8\n7,3\n").unwrap();
        let g = point_set_from_csv("0, 0\n4, 8\n7, 3").unwrap();
        assert_eq!(f, g);
        assert_eq!(f.len(), 3);
        assert_eq!(f.point(1), &[4.0, 8.0]);
    }

    #[test]
    fn csv_errors() {
        assert!(point_set_from_csv("0,0\nbroken,row\n").is_err());
        assert!(matches!(
            point_set_from_csv("1,2\n1,2\n"),
            Err(Error::DuplicatePoint { .. })
        ));
        assert!(point_set_from_csv("").is_err());
    }

    #[test]
    fn content_dispatch() {
        assert!(point_set_from_str("  {\"dim\":1,\"points\":[[0]]}").is_ok());
        assert!(point_set_from_str("0,1\n2,3\n").is_ok());
    }

    #[test]
    fn alpha_table_serialization() {
        let f = PointSet::new(1, vec![vec![0.0], vec![5.0]]).unwrap();
        let spec = crate::cubes::CubeUnionSpec::new(f, 0.5).unwrap();
        let t = crate::cubes::alphas(&spec, crate::cubes::AlphaMethod::Vertex).unwrap();
        let v: serde_json::Value = serde_json::from_str(&alpha_table_to_json(&t)).unwrap();
        assert_eq!(v["system"], "vertex");
        assert_eq!(v["alpha"].as_array().unwrap().len(), 4);
        assert_eq!(v["order"][0], serde_json::json!([0, [-1]]));
        let csv = alpha_table_to_csv(&t);
        assert!(csv.starts_with("point_index,s1,alpha\n"));
        assert_eq!(csv.lines().count(), 5);
    }
}
