//! Deterministic CSV and JSON table writers for plot data.
//!
//! CSV files carry their metadata as `# key = value` comment lines before
//! the header row; JSON files carry the same metadata in a `metadata`
//! object. Degenerate samples are written as the literal token `NaN` in CSV
//! and as `null` in JSON, never as zeros.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde_json::{json, Map, Number, Value};

use crate::config::OutputFormat;
use crate::dressed::DressedCurves;
use crate::error::{Error, Result};
use crate::roots::DetuningBranches;
use crate::scan::{AbsorptionProfile, ChiMap};

/// A column-ordered numeric table with metadata, ready to serialize.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub kind: &'static str,
    pub meta: Vec<(String, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn write(&self, path: &Path, format: OutputFormat) -> Result<()> {
        if let Some(parent) = path.parent() {
            if !parent.as_os_str().is_empty() {
                fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
            }
        }
        let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
        let mut writer = BufWriter::new(file);
        match format {
            OutputFormat::Csv => self.write_csv(&mut writer).map_err(|e| Error::io(path, e)),
            OutputFormat::Json => self.write_json(&mut writer).map_err(|e| Error::io(path, e)),
        }
    }

    fn write_csv<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "# tool = atomloc {}", crate::VERSION)?;
        writeln!(w, "# kind = {}", self.kind)?;
        writeln!(
            w,
            "# units = rates and detunings in gamma1, kx in rad, chi per prefactor"
        )?;
        for (key, value) in &self.meta {
            writeln!(w, "# {key} = {value}")?;
        }
        writeln!(w, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let mut first = true;
            for value in row {
                if !first {
                    write!(w, ",")?;
                }
                first = false;
                write!(w, "{value}")?;
            }
            writeln!(w)?;
        }
        Ok(())
    }

    fn write_json<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        let mut meta = Map::new();
        meta.insert("tool".into(), json!(format!("atomloc {}", crate::VERSION)));
        meta.insert("kind".into(), json!(self.kind));
        for (key, value) in &self.meta {
            meta.insert(key.clone(), json!(value));
        }
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                Value::Array(
                    row.iter()
                        .map(|v| {
                            Number::from_f64(*v)
                                .map(Value::Number)
                                .unwrap_or(Value::Null)
                        })
                        .collect(),
                )
            })
            .collect();
        let doc = json!({
            "metadata": Value::Object(meta),
            "columns": self.columns,
            "rows": rows,
        });
        serde_json::to_writer_pretty(&mut *w, &doc)?;
        writeln!(w)
    }
}

/// Fixed column order: kx, chi_im, chi_re.
pub fn profile_table(profile: &AbsorptionProfile, extra_meta: &[(String, String)]) -> Table {
    let mut meta = params_meta(&profile.params);
    meta.push(("delta".into(), profile.delta.to_string()));
    meta.push(("grid".into(), profile.kx.len().to_string()));
    meta.push((
        "degenerate_points".into(),
        profile.degenerate_points.to_string(),
    ));
    meta.extend(extra_meta.iter().cloned());
    let rows = (0..profile.kx.len())
        .map(|i| vec![profile.kx[i], profile.chi_im[i], profile.chi_re[i]])
        .collect();
    Table {
        kind: "chi-profile",
        meta,
        columns: vec!["kx", "chi_im", "chi_re"],
        rows,
    }
}

/// Columns: kx, then the five branch detunings.
pub fn branches_table(
    branches: &DetuningBranches,
    delta_markers: &[f64],
    extra_meta: &[(String, String)],
) -> Table {
    let mut meta = extra_meta.to_vec();
    meta.push((
        "delta_markers".into(),
        delta_markers
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join(", "),
    ));
    let rows = (0..branches.kx.len())
        .map(|i| {
            vec![
                branches.kx[i],
                branches.delta1[i],
                branches.delta2[i],
                branches.delta3[i],
                branches.delta4[i],
                branches.delta5[i],
            ]
        })
        .collect();
    Table {
        kind: "detuning-branches",
        meta,
        columns: vec!["kx", "delta1", "delta2", "delta3", "delta4", "delta5"],
        rows,
    }
}

/// Columns: kx, branch eigenvalues, branch decay rates.
pub fn dressed_table(curves: &DressedCurves, extra_meta: &[(String, String)]) -> Table {
    let rows = (0..curves.kx.len())
        .map(|i| {
            vec![
                curves.kx[i],
                curves.lambda3[i],
                curves.lambda4[i],
                curves.lambda5[i],
                curves.decay3[i],
                curves.decay4[i],
                curves.decay5[i],
            ]
        })
        .collect();
    Table {
        kind: "dressed-spectrum",
        meta: extra_meta.to_vec(),
        columns: vec![
            "kx", "lambda3", "lambda4", "lambda5", "decay3", "decay4", "decay5",
        ],
        rows,
    }
}

/// Long-format 2D map rows: delta, kx, chi_im.
pub fn chi_map_table(map: &ChiMap, extra_meta: &[(String, String)]) -> Table {
    let mut meta = params_meta(&map.params);
    meta.push((
        "degenerate_points".into(),
        map.degenerate_points.to_string(),
    ));
    meta.extend(extra_meta.iter().cloned());
    let mut rows = Vec::with_capacity(map.deltas.len() * map.kx.len());
    for (di, &delta) in map.deltas.iter().enumerate() {
        for (ki, &kx) in map.kx.iter().enumerate() {
            rows.push(vec![delta, kx, map.chi_im[di][ki]]);
        }
    }
    Table {
        kind: "chi-map",
        meta,
        columns: vec!["delta", "kx", "chi_im"],
        rows,
    }
}

fn params_meta(params: &crate::params::ModelParams) -> Vec<(String, String)> {
    vec![
        ("omega1".into(), params.omega1.to_string()),
        ("omega2".into(), params.omega2.to_string()),
        ("omega3".into(), params.omega3.to_string()),
        ("phi".into(), params.phi.to_string()),
        ("gamma1".into(), params.gamma1.to_string()),
        ("gamma2".into(), params.gamma2.to_string()),
        ("prefactor".into(), params.prefactor.to_string()),
    ]
}

/// Write plain text (the verification report).
pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
    }
    fs::write(path, text).map_err(|e| Error::io(path, e))
}
