//! File formats: JSON chain models and CSV tables for schedules, Bode data
//! and trajectories.
//!
//! Floating-point columns are written with 17 significant digits so that
//! every value re-parses to the same `f64`. Metadata that is not part of the
//! table (lumped parameters, estimate flags, error summaries) is carried in
//! `#`-prefixed `key=value` comment lines.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::chain::{ChainModel, FrequencyGrid};
use crate::error::{Error, Result};
use crate::fractional::ComplexOrder;
use crate::oracle::Trajectory;
use crate::reduction::ReductionResult;
use crate::sysid::{BodeDataset, BodePoint, IdentifiedModel};

fn default_force_dof() -> usize {
    1
}

fn default_active() -> Vec<usize> {
    vec![1]
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    masses: Vec<f64>,
    stiffnesses: Vec<f64>,
    dampers: Vec<f64>,
    #[serde(default = "default_force_dof")]
    force_dof: usize,
    #[serde(default = "default_active")]
    active_dofs: Vec<usize>,
}

/// Contents of a JSON model file.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelFile {
    pub model: ChainModel,
    /// 1-based DOF carrying the load.
    pub force_dof: usize,
    /// 1-based DOFs retained by a reduction, strictly increasing.
    pub active_dofs: Vec<usize>,
}

fn invalid(field: &str, message: impl Into<String>) -> Error {
    Error::Validation {
        field: field.into(),
        message: message.into(),
    }
}

/// Parses a model from JSON text of the form
/// `{"masses": [...], "stiffnesses": [...], "dampers": [...],
///   "force_dof": 1, "active_dofs": [1]}`.
///
/// Unknown or duplicate keys are parse errors; inconsistent values are
/// validation errors naming the offending field.
pub fn parse_model_str(text: &str) -> Result<ModelFile> {
    let raw: RawModel = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    for (field, v) in [("masses", &raw.masses), ("stiffnesses", &raw.stiffnesses), ("dampers", &raw.dampers)] {
        if v.is_empty() {
            return Err(invalid(field, "must not be empty"));
        }
    }
    let model = ChainModel::new(raw.masses, raw.stiffnesses, raw.dampers).map_err(|e| match e {
        Error::NonPositiveParameter { name, index, value } => {
            invalid(name, format!("entry {index} = {value} is not admissible"))
        }
        Error::LengthMismatch { .. } => invalid("stiffnesses", e.to_string()),
        other => other,
    })?;
    let dofs = model.dofs();
    if raw.force_dof == 0 || raw.force_dof > dofs {
        return Err(invalid("force_dof", format!("{} is outside 1..={dofs}", raw.force_dof)));
    }
    if raw.active_dofs.is_empty() {
        return Err(invalid("active_dofs", "must not be empty"));
    }
    if let Some(a) = raw.active_dofs.iter().find(|&&a| a == 0 || a > dofs) {
        return Err(invalid("active_dofs", format!("{a} is outside 1..={dofs}")));
    }
    if raw.active_dofs.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("active_dofs", "must be strictly increasing"));
    }
    Ok(ModelFile {
        model,
        force_dof: raw.force_dof,
        active_dofs: raw.active_dofs,
    })
}

pub fn parse_model_file(path: impl AsRef<Path>) -> Result<ModelFile> {
    parse_model_str(&std::fs::read_to_string(path)?)
}

/// Pretty-printed JSON for a model file.
pub fn model_to_json(file: &ModelFile) -> String {
    let raw = RawModel {
        masses: file.model.masses().to_vec(),
        stiffnesses: file.model.stiffnesses().to_vec(),
        dampers: file.model.dampers().to_vec(),
        force_dof: file.force_dof,
        active_dofs: file.active_dofs.clone(),
    };
    serde_json::to_string_pretty(&raw).expect("plain data serializes") + "\n"
}

/// Formats a value with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn join(values: &[f64]) -> String {
    values.iter().map(|v| fmt_f64(*v)).collect::<Vec<_>>().join(" ")
}

fn schedule_header(dofs: usize) -> String {
    let mut h = String::from("omega,re_alpha,im_alpha");
    for j in 1..dofs {
        write!(h, ",re_beta{j},im_beta{j}").unwrap();
    }
    h.push_str(",residual,converged");
    h
}

fn write_schedule(out: &mut String, r: &ReductionResult) {
    writeln!(out, "# masses={}", join(&r.masses)).unwrap();
    writeln!(out, "# k_bar={}", fmt_f64(r.k_bar)).unwrap();
    writeln!(out, "# forced_dof={}", r.forced_dof).unwrap();
    writeln!(out, "{}", schedule_header(r.dofs())).unwrap();
    for i in 0..r.len() {
        let mut row = vec![fmt_f64(r.grid.omegas()[i]), fmt_f64(r.alphas[i].a), fmt_f64(r.alphas[i].b)];
        for j in 0..r.dofs() - 1 {
            let b = r.betas[i].get(j).copied().unwrap_or(Complex64::new(f64::NAN, f64::NAN));
            row.push(fmt_f64(b.re));
            row.push(fmt_f64(b.im));
        }
        row.push(fmt_f64(r.residuals[i]));
        row.push(r.converged[i].to_string());
        writeln!(out, "{}", row.join(",")).unwrap();
    }
}

/// CSV table of a reduction schedule:
/// `omega,re_alpha,im_alpha[,re_beta1,im_beta1,...],residual,converged`.
pub fn reduction_to_csv(r: &ReductionResult) -> String {
    let mut out = String::new();
    write_schedule(&mut out, r);
    out
}

/// Identified schedule in the reduction layout, plus the `k̄` estimate flag
/// and a `# max_reconstruction_error=...` footer.
pub fn identified_to_csv(m: &IdentifiedModel) -> String {
    let mut out = String::new();
    writeln!(out, "# k_bar_estimated={}", m.k_bar_estimated).unwrap();
    write_schedule(&mut out, &m.schedule);
    writeln!(out, "# max_reconstruction_error={}", fmt_f64(m.max_reconstruction_error)).unwrap();
    out
}

/// Table rows and `# key=value` metadata of a CSV document.
struct Table {
    meta: BTreeMap<String, (usize, String)>,
    header: Vec<String>,
    rows: Vec<(usize, Vec<String>)>,
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn read_table(text: &str) -> Result<Table> {
    let mut meta = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        if let Some(rest) = line.strip_prefix('#') {
            if let Some((k, v)) = rest.trim().split_once('=') {
                meta.insert(k.trim().to_string(), (i + 1, v.trim().to_string()));
            }
        }
    }
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let csv_err = |e: csv::Error| {
        let line = e.position().map_or(0, |p| p.line() as usize);
        parse_error(line, 1, e.to_string())
    };
    let header = reader.headers().map_err(csv_err)?.iter().map(String::from).collect();
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(csv_err)?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        rows.push((line, rec.iter().map(String::from).collect()));
    }
    Ok(Table { meta, header, rows })
}

fn field_column(row: &[String], j: usize) -> usize {
    row[..j].iter().map(|f| f.len() + 1).sum::<usize>() + 1
}

fn parse_f64(line: usize, row: &[String], j: usize) -> Result<f64> {
    row[j]
        .parse()
        .map_err(|_| parse_error(line, field_column(row, j), format!("`{}` is not a number", row[j])))
}

fn meta_value<T: std::str::FromStr>(t: &Table, key: &str) -> Result<T> {
    let (line, v) = t
        .meta
        .get(key)
        .ok_or_else(|| parse_error(0, 0, format!("missing `# {key}=` metadata line")))?;
    v.parse()
        .map_err(|_| parse_error(*line, 1, format!("bad value `{v}` for `{key}`")))
}

fn parse_schedule(t: &Table) -> Result<ReductionResult> {
    let masses: Vec<f64> = {
        let (line, v) = t
            .meta
            .get("masses")
            .ok_or_else(|| parse_error(0, 0, "missing `# masses=` metadata line"))?;
        v.split_whitespace()
            .map(|s| s.parse().map_err(|_| parse_error(*line, 1, format!("bad mass `{s}`"))))
            .collect::<Result<_>>()?
    };
    if masses.is_empty() {
        return Err(parse_error(0, 0, "no masses in metadata"));
    }
    let k_bar: f64 = meta_value(t, "k_bar")?;
    let forced_dof: usize = meta_value(t, "forced_dof")?;
    let n = masses.len();
    let expected = schedule_header(n);
    if t.header.join(",") != expected {
        return Err(parse_error(1, 1, format!("expected header `{expected}`")));
    }
    let width = 2 * n + 3;
    let (mut omegas, mut alphas, mut betas, mut residuals, mut converged) = (vec![], vec![], vec![], vec![], vec![]);
    for (line, row) in &t.rows {
        let line = *line;
        if row.len() != width {
            return Err(parse_error(line, 1, format!("expected {width} fields, found {}", row.len())));
        }
        omegas.push(parse_f64(line, row, 0)?);
        alphas.push(ComplexOrder::new(parse_f64(line, row, 1)?, parse_f64(line, row, 2)?));
        let mut b = Vec::with_capacity(n - 1);
        for j in 0..n - 1 {
            b.push(Complex64::new(parse_f64(line, row, 3 + 2 * j)?, parse_f64(line, row, 4 + 2 * j)?));
        }
        betas.push(b);
        residuals.push(parse_f64(line, row, width - 2)?);
        converged.push(row[width - 1].parse().map_err(|_| {
            parse_error(line, field_column(row, width - 1), format!("`{}` is not true/false", row[width - 1]))
        })?);
    }
    let grid = FrequencyGrid::new(omegas).map_err(|e| parse_error(0, 0, e.to_string()))?;
    Ok(ReductionResult {
        grid,
        masses,
        k_bar,
        forced_dof,
        alphas,
        betas,
        residuals,
        converged,
    })
}

/// Parses [`reduction_to_csv`] output.
pub fn reduction_from_csv(text: &str) -> Result<ReductionResult> {
    parse_schedule(&read_table(text)?)
}

/// Parses [`identified_to_csv`] output.
pub fn identified_from_csv(text: &str) -> Result<IdentifiedModel> {
    let t = read_table(text)?;
    Ok(IdentifiedModel {
        schedule: parse_schedule(&t)?,
        k_bar_estimated: meta_value(&t, "k_bar_estimated")?,
        max_reconstruction_error: meta_value(&t, "max_reconstruction_error")?,
    })
}

/// Bode CSV with header `omega,magnitude,phase_rad`.
pub fn bode_to_csv(d: &BodeDataset) -> String {
    let mut out = String::from("omega,magnitude,phase_rad\n");
    for p in d.points() {
        writeln!(out, "{},{},{}", fmt_f64(p.omega), fmt_f64(p.magnitude), fmt_f64(p.phase)).unwrap();
    }
    out
}

/// Parses Bode CSV; the third column is `phase_rad` or `phase_deg`.
pub fn bode_from_csv(text: &str) -> Result<BodeDataset> {
    let t = read_table(text)?;
    let degrees = match t.header.iter().map(String::as_str).collect::<Vec<_>>()[..] {
        ["omega", "magnitude", "phase_rad"] => false,
        ["omega", "magnitude", "phase_deg"] => true,
        _ => {
            return Err(parse_error(1, 1, "expected header `omega,magnitude,phase_rad` or `omega,magnitude,phase_deg`"));
        }
    };
    let mut points = Vec::with_capacity(t.rows.len());
    for (line, row) in &t.rows {
        if row.len() != 3 {
            return Err(parse_error(*line, 1, format!("expected 3 fields, found {}", row.len())));
        }
        let phase = parse_f64(*line, row, 2)?;
        points.push(BodePoint {
            omega: parse_f64(*line, row, 0)?,
            magnitude: parse_f64(*line, row, 1)?,
            phase: if degrees { phase.to_radians() } else { phase },
        });
    }
    BodeDataset::new(points)
}

pub fn read_bode_file(path: impl AsRef<Path>) -> Result<BodeDataset> {
    bode_from_csv(&std::fs::read_to_string(path)?)
}

/// Trajectory CSV `t,x1,...,xM,v1,...,vM`.
pub fn trajectory_to_csv(tr: &Trajectory) -> String {
    let m = tr.dofs();
    let mut out = String::from("t");
    for prefix in ["x", "v"] {
        for j in 1..=m {
            write!(out, ",{prefix}{j}").unwrap();
        }
    }
    out.push('\n');
    for (t, s) in tr.times.iter().zip(&tr.states) {
        out.push_str(&fmt_f64(*t));
        for offset in [0, 1] {
            for j in 0..m {
                out.push(',');
                out.push_str(&fmt_f64(s[2 * j + offset]));
            }
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::build_chain;
    use crate::reduction::sweep_fsdof;

    const REFERENCE: &str = r#"{
  "masses": [1, 2, 1, 2],
  "stiffnesses": [1, 2, 1, 2],
  "dampers": [1, 2, 1, 2],
  "force_dof": 1,
  "active_dofs": [1, 3]
}"#;

    #[test]
    fn parses_model() {
        let f = parse_model_str(REFERENCE).unwrap();
        assert_eq!(f.model.dofs(), 4);
        assert_eq!(f.active_dofs, vec![1, 3]);
        let again = parse_model_str(&model_to_json(&f)).unwrap();
        assert_eq!(again, f);
    }

    #[test]
    fn defaults_apply() {
        let f = parse_model_str(r#"{"masses":[2],"stiffnesses":[10],"dampers":[1]}"#).unwrap();
        assert_eq!((f.force_dof, f.active_dofs), (1, vec![1]));
    }

    #[test]
    fn duplicate_key_is_a_parse_error() {
        let text = "{\n  \"masses\": [1],\n  \"masses\": [2],\n  \"stiffnesses\": [1], \"dampers\": [0]\n}";
        match parse_model_str(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_key_is_a_parse_error() {
        let text = r#"{"masses":[1],"stiffnesses":[1],"dampers":[0],"colour":"red"}"#;
        assert!(matches!(parse_model_str(text), Err(Error::Parse { .. })));
    }

    #[test]
    fn validation_names_the_field() {
        let cases = [
            (r#"{"masses":[],"stiffnesses":[],"dampers":[]}"#, "masses"),
            (r#"{"masses":[1],"stiffnesses":[-1],"dampers":[0]}"#, "stiffnesses"),
            (r#"{"masses":[1],"stiffnesses":[1],"dampers":[-1]}"#, "dampers"),
            (r#"{"masses":[1],"stiffnesses":[1],"dampers":[0],"force_dof":2}"#, "force_dof"),
            (r#"{"masses":[1,1],"stiffnesses":[1,1],"dampers":[0,0],"active_dofs":[2,1]}"#, "active_dofs"),
        ];
        for (text, want) in cases {
            match parse_model_str(text) {
                Err(Error::Validation { field, .. }) => assert_eq!(field, want, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn reduction_csv_round_trip_is_exact() {
        let model = build_chain(&[1.0, 2.0, 1.0, 2.0], &[1.0, 2.0, 1.0, 2.0], &[1.0, 2.0, 1.0, 2.0]).unwrap();
        let r = sweep_fsdof(&model, 1, 1, &FrequencyGrid::log(0.01, 100.0, 17).unwrap()).unwrap();
        let text = reduction_to_csv(&r);
        assert!(text.contains("\nomega,re_alpha,im_alpha,residual,converged\n"));
        assert_eq!(reduction_from_csv(&text).unwrap(), r);
    }

    #[test]
    fn schedule_with_betas_and_nan_round_trips() {
        let r = ReductionResult {
            grid: FrequencyGrid::new(vec![0.5, 1.0]).unwrap(),
            masses: vec![3.0, 3.0],
            k_bar: 1.0 / 3.0,
            forced_dof: 1,
            alphas: vec![ComplexOrder::new(1.5, 0.5), ComplexOrder::new(f64::NAN, f64::NAN)],
            betas: vec![vec![Complex64::new(1.5, 1.0)], vec![Complex64::new(f64::NAN, f64::NAN)]],
            residuals: vec![1e-14, f64::INFINITY],
            converged: vec![true, false],
        };
        let m = IdentifiedModel {
            schedule: r,
            k_bar_estimated: true,
            max_reconstruction_error: 3e-11,
        };
        let text = identified_to_csv(&m);
        assert!(text.trim_end().ends_with("# max_reconstruction_error=3.0000000000000000e-11"));
        let back = identified_from_csv(&text).unwrap();
        assert_eq!(back.schedule.alphas[0], m.schedule.alphas[0]);
        assert!(back.schedule.alphas[1].a.is_nan());
        assert_eq!(back.schedule.residuals[1], f64::INFINITY);
        assert_eq!(back.schedule.converged, vec![true, false]);
        assert!(back.k_bar_estimated);
        assert_eq!(back.max_reconstruction_error, 3e-11);
    }

    #[test]
    fn bad_number_reports_position() {
        let text = "# masses=1\n# k_bar=1\n# forced_dof=1\nomega,re_alpha,im_alpha,residual,converged\n1,2,x,0,true\n";
        match reduction_from_csv(text) {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (5, 5)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bode_round_trip_and_degrees() {
        let d = BodeDataset::new(vec![
            BodePoint { omega: 0.1, magnitude: 2.0, phase: -0.25 },
            BodePoint { omega: 1.0, magnitude: 0.5, phase: -3.0 },
        ])
        .unwrap();
        assert_eq!(bode_from_csv(&bode_to_csv(&d)).unwrap(), d);
        let deg = bode_from_csv("omega,magnitude,phase_deg\n1,1,-90\n").unwrap();
        assert!((deg.points()[0].phase + std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert!(bode_from_csv("omega,magnitude,phase\n1,1,0\n").is_err());
        assert!(matches!(bode_from_csv("omega,magnitude,phase_rad\n2,1,0\n1,1,0\n"), Err(Error::Validation { .. })));
    }

    #[test]
    fn trajectory_header() {
        let tr = Trajectory {
            times: vec![0.0, 0.1],
            states: vec![vec![0.0, 1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0, 7.0]],
        };
        let text = trajectory_to_csv(&tr);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("t,x1,x2,v1,v2"));
        let row: Vec<f64> = lines.nth(1).unwrap().split(',').map(|s| s.parse().unwrap()).collect();
        assert_eq!(row, vec![0.1, 4.0, 6.0, 5.0, 7.0]);
    }
}
