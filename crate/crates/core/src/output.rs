//! Dataset files: CSV with `# key=value` metadata, or the equivalent JSON.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use crate::distributions::{NumberDistribution, PhaseDistribution};
use crate::error::Result;

pub const FORMAT_TAG: &str = "spinphase v1";

/// Values in `[-CLIP, 0)` are written as zero.
const CLIP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// A table of numbers with sorted metadata and a closing sum/integral line.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub meta: BTreeMap<String, String>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
    pub footer: (&'static str, f64),
}

fn clip(p: f64) -> f64 {
    if (-CLIP..0.0).contains(&p) {
        0.0
    } else {
        p
    }
}

pub fn number_dataset(dist: &NumberDistribution, meta: &BTreeMap<String, String>) -> Dataset {
    let j = dist.j();
    let rows = dist
        .probabilities()
        .iter()
        .enumerate()
        .map(|(k, p)| vec![j.level_at(k).value(), clip(*p)])
        .collect();
    Dataset {
        meta: meta.clone(),
        columns: vec!["m", "p_m"],
        rows,
        footer: ("sum", dist.total()),
    }
}

pub fn phase_dataset(dist: &PhaseDistribution, meta: &BTreeMap<String, String>) -> Dataset {
    let rows = dist
        .grid_phi()
        .iter()
        .zip(dist.grid_p())
        .map(|(phi, p)| vec![*phi, phi / std::f64::consts::PI, clip(*p)])
        .collect();
    Dataset {
        meta: meta.clone(),
        columns: vec!["phi", "phi_over_pi", "p_phi"],
        rows,
        footer: ("integral", dist.integral()),
    }
}

fn format_value(column: &str, v: f64) -> String {
    if column == "m" {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

pub fn render_csv(data: &Dataset) -> String {
    let mut out = format!("# {FORMAT_TAG}\n");
    for (k, v) in &data.meta {
        out.push_str(&format!("# {k}={v}\n"));
    }
    out.push_str(&data.columns.join(","));
    out.push('\n');
    for row in &data.rows {
        let cells: Vec<String> = data
            .columns
            .iter()
            .zip(row)
            .map(|(c, v)| format_value(c, *v))
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out.push_str(&format!("# {}={:e}\n", data.footer.0, data.footer.1));
    out
}

pub fn render_json(data: &Dataset) -> String {
    let mut meta: Map<String, Value> = data
        .meta
        .iter()
        .map(|(k, v)| (k.clone(), Value::String(v.clone())))
        .collect();
    meta.insert("format".into(), Value::String(FORMAT_TAG.into()));
    let rows: Vec<Value> = data
        .rows
        .iter()
        .map(|row| {
            let obj: Map<String, Value> = data
                .columns
                .iter()
                .zip(row)
                .map(|(c, v)| (c.to_string(), json!(v)))
                .collect();
            Value::Object(obj)
        })
        .collect();
    let doc = json!({
        "meta": meta,
        "rows": rows,
        "footer": { data.footer.0: data.footer.1 },
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("dataset serializes");
    text.push('\n');
    text
}

pub fn render(data: &Dataset, format: Format) -> String {
    match format {
        Format::Csv => render_csv(data),
        Format::Json => render_json(data),
    }
}

/// Writes via a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Renders and writes `<dir>/<stem>.<ext>`, returning the path.
pub fn write_dataset(dir: &Path, stem: &str, data: &Dataset, format: Format) -> Result<PathBuf> {
    let path = dir.join(format!("{stem}.{}", format.extension()));
    write_atomic(&path, &render(data, format))?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{number_distribution, phase_distribution};
    use crate::spin::SpinJ;
    use crate::states::{coherent_state, density_of};

    fn meta() -> BTreeMap<String, String> {
        [("state", "coherent"), ("j", "1")]
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect()
    }

    #[test]
    fn csv_layout() {
        let j = SpinJ::integer(1);
        let rho = density_of(&coherent_state(j, 0.0, 0.0).unwrap());
        let text = render_csv(&number_dataset(
            &number_distribution(&rho).unwrap(),
            &meta(),
        ));
        let want =
            "# spinphase v1\n# j=1\n# state=coherent\nm,p_m\n-1,1e0\n0,0e0\n1,0e0\n# sum=1e0\n";
        assert_eq!(text, want);
    }

    #[test]
    fn clipping_only_in_output() {
        assert_eq!(clip(-5e-13), 0.0);
        assert_eq!(clip(-2e-12), -2e-12);
        assert_eq!(clip(3e-20), 3e-20);
    }

    #[test]
    fn json_mirrors_csv() {
        let j = SpinJ::integer(1);
        let rho = density_of(&coherent_state(j, 1.0, 0.0).unwrap());
        let data = phase_dataset(&phase_distribution(&rho, 8).unwrap(), &meta());
        let v: Value = serde_json::from_str(&render_json(&data)).unwrap();
        assert_eq!(v["rows"].as_array().unwrap().len(), 8);
        assert_eq!(v["meta"]["state"], "coherent");
        assert_eq!(v["rows"][0]["phi_over_pi"], json!(-1.0));
        assert!((v["footer"]["integral"].as_f64().unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.csv");
        write_atomic(&path, "a").unwrap();
        write_atomic(&path, "b").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "b");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
