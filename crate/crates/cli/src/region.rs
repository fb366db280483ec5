use bcmsr::bounds::{inner1_rows, inner2_rows, nofeedback_rows, outer_rows, PmfSpec, RateRows};
use bcmsr::channels::*;
use serde::Serialize;

use crate::config::{Example, RunConfig};
use crate::render::{self, num};
use crate::CliError;

pub const NAMES: [&str; 4] = ["nofeedback", "inner1", "inner2", "outer"];

#[derive(Debug, Serialize)]
pub struct NamedRegion {
    pub name: String,
    pub rows: RateRows,
    pub vertices: Vec<(f64, f64)>,
}

#[derive(Debug, Serialize)]
pub struct RegionSet {
    pub source: String,
    pub params: serde_json::Value,
    pub regions: Vec<NamedRegion>,
}

fn assemble(source: String, params: serde_json::Value, rows: [RateRows; 4]) -> Result<RegionSet, CliError> {
    let regions = NAMES
        .iter()
        .zip(rows)
        .map(|(n, r)| {
            let vertices = r.system().vertices2d().map_err(crate::usage)?.vertices;
            Ok(NamedRegion { name: n.to_string(), rows: r, vertices })
        })
        .collect::<Result<_, CliError>>()?;
    Ok(RegionSet { source, params, regions })
}

pub fn from_example(cfg: &RunConfig) -> Result<RegionSet, CliError> {
    let u = crate::usage;
    match cfg.example() {
        Example::Blackwell => {
            let b = cfg.blackwell()?;
            let rows = [
                blackwell_closed_nofeedback_rows(&b).map_err(u)?,
                blackwell_closed_inner1_rows(&b).map_err(u)?,
                blackwell_closed_inner2_rows(&b).map_err(u)?,
                blackwell_closed_outer_rows(&b).map_err(u)?,
            ];
            assemble("blackwell".into(), serde_json::to_value(b).expect("params"), rows)
        }
        _ => {
            let d = cfg.dueck()?;
            let rows = [
                dueck_closed_nofeedback_rows(&d).map_err(u)?,
                dueck_closed_inner1_rows(&d).map_err(u)?,
                dueck_closed_inner2_rows(&d).map_err(u)?,
                dueck_closed_outer_rows(&d).map_err(u)?,
            ];
            assemble(format!("dueck{}", d.case.index()), serde_json::to_value(d).expect("params"), rows)
        }
    }
}

/// Generic evaluators on a SchemeDistribution file. A 6-variable file gets a
/// constant (V0, V1, V2) extension for the hybrid bound.
pub fn from_file(path: &str) -> Result<RegionSet, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?;
    let spec: PmfSpec = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{path}: {e}")))?;
    let u = |e: bcmsr::bounds::BoundsError| CliError::Usage(format!("{path}: {e}"));
    let dist = spec.to_scheme().map_err(u)?;
    let ext = if dist.extended.is_some() { dist.clone() } else { dist.constant_extension().map_err(u)? };
    let rows = [
        nofeedback_rows(&dist).map_err(u)?,
        inner1_rows(&dist).map_err(u)?,
        inner2_rows(&ext).map_err(u)?,
        outer_rows(&dist).map_err(u)?,
    ];
    assemble(path.to_string(), serde_json::Value::Null, rows)
}

/// `region,kind,label,a,b,c`: vertex rows carry (R1, R2); inequality rows
/// carry the coefficients of R1 and R2 and the right-hand side.
pub fn csv(set: &RegionSet) -> String {
    let mut s = String::from("region,kind,label,a,b,c\n");
    for r in &set.regions {
        for row in &r.rows.0 {
            s.push_str(&format!("{},row,{},{},{},{}\n", r.name, row.label, row.r1, row.r2, num(row.rhs)));
        }
        for (i, v) in r.vertices.iter().enumerate() {
            s.push_str(&format!("{},vertex,v{i},{},{},\n", r.name, num(v.0), num(v.1)));
        }
    }
    s
}

pub fn svg(set: &RegionSet) -> String {
    let all = set.regions.iter().flat_map(|r| r.vertices.iter());
    let (xmax, ymax) = all.fold((0.0f64, 0.0f64), |m, v| (m.0.max(v.0), m.1.max(v.1)));
    let frame = render::Frame::new(xmax, ymax);
    let mut s = render::open(&frame, "R1 (bits)", "R2 (bits)", &set.source);
    // outermost first so inner regions stay visible
    for (i, r) in set.regions.iter().enumerate().rev() {
        render::polygon(&mut s, &frame, &r.vertices, render::COLORS[i]);
    }
    render::legend(&mut s, &NAMES);
    render::close(s)
}
