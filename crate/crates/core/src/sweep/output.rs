use std::io::Write;
use std::path::Path;

use super::SweepResult;
use crate::atomic::AtomicParams;
use crate::error::{Error, Result};

/// Twelve significant digits in scientific notation; fixed width helps diffs.
pub fn format_float(x: f64) -> String {
    format!("{x:.11e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(format_float).unwrap_or_default()
}

fn params(prefix: &str, p: Option<AtomicParams>, out: &mut Vec<(String, String)>) {
    let p = p.map(|p| p.canonical());
    out.push((format!("{prefix}_xi"), opt(p.map(|p| p.xi))));
    out.push((format!("{prefix}_theta"), opt(p.map(|p| p.theta))));
    out.push((format!("{prefix}_phi"), opt(p.map(|p| p.phi_pulse))));
}

fn record(row: &SweepResult) -> Vec<(String, String)> {
    let mut out = vec![
        ("sigma".to_string(), format_float(row.sigma)),
        ("p_helstrom".into(), opt(row.p_helstrom)),
        ("p_atomic_opt".into(), opt(row.p_atomic_opt)),
        ("i_atomic_opt".into(), opt(row.i_atomic_opt)),
        ("i_accessible".into(), opt(row.i_accessible)),
    ];
    for r in &row.pnr {
        out.push((format!("p_pnr_{}", r.label), format_float(r.p_error)));
        out.push((format!("i_pnr_{}", r.label), format_float(r.i_mutual)));
    }
    params("atomic_err", row.atomic_params, &mut out);
    params("atomic_info", row.atomic_info_params, &mut out);
    for r in &row.pnr {
        out.push((format!("beta_err_{}", r.label), format_float(r.beta_error)));
        out.push((format!("beta_info_{}", r.label), format_float(r.beta_information)));
    }
    let d = &row.diagnostics;
    out.push(("cutoff".into(), d.cutoff.to_string()));
    out.push(("ascent_residual".into(), opt(d.ascent_residual)));
    out.push((
        "ascent_converged".into(),
        d.ascent_converged.map(|c| c.to_string()).unwrap_or_default(),
    ));
    out.push((
        "ascent_iterations".into(),
        d.ascent_iterations.map(|c| c.to_string()).unwrap_or_default(),
    ));
    out.push(("ascent_restart_spread".into(), opt(d.ascent_restart_spread)));
    out.push(("atomic_start_spread".into(), opt(d.atomic_start_spread)));
    out
}

pub fn write_csv<W: Write>(rows: &[SweepResult], sink: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(sink);
    let mut header: Option<Vec<String>> = None;
    for row in rows {
        let rec = record(row);
        let names: Vec<String> = rec.iter().map(|(k, _)| k.clone()).collect();
        match &header {
            None => {
                w.write_record(&names)?;
                header = Some(names);
            }
            Some(h) if *h != names => {
                return Err(Error::Config(format!("row at sigma {} has a different column set", row.sigma)));
            }
            Some(_) => {}
        }
        w.write_record(rec.iter().map(|(_, v)| v))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(rows: &[SweepResult], mut sink: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut sink, rows)?;
    sink.write_all(b"\n")?;
    Ok(())
}

fn create(path: &Path) -> Result<std::io::BufWriter<std::fs::File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    Ok(std::io::BufWriter::new(std::fs::File::create(path)?))
}

/// Writes whichever of the two files is requested, creating parent
/// directories as needed.
pub fn write_outputs(rows: &[SweepResult], csv_path: Option<&Path>, json_path: Option<&Path>) -> Result<()> {
    if let Some(p) = csv_path {
        write_csv(rows, create(p)?)?;
    }
    if let Some(p) = json_path {
        write_json(rows, create(p)?)?;
    }
    Ok(())
}

/// Named numeric columns of a sweep CSV. Empty cells read as NaN.
pub fn read_csv_columns(path: &Path, names: &[&str]) -> Result<Vec<Vec<f64>>> {
    let mut r = csv::Reader::from_path(path)?;
    let header = r.headers()?.clone();
    let idx: Vec<usize> = names
        .iter()
        .map(|n| {
            header
                .iter()
                .position(|h| h == *n)
                .ok_or_else(|| Error::Config(format!("column {n} not in {}", path.display())))
        })
        .collect::<Result<_>>()?;
    let mut cols = vec![Vec::new(); names.len()];
    for rec in r.records() {
        let rec = rec?;
        for (c, &i) in idx.iter().enumerate() {
            let cell = rec.get(i).unwrap_or("");
            let v = if cell.is_empty() {
                f64::NAN
            } else {
                cell.parse()
                    .map_err(|_| Error::Config(format!("column {}: cannot parse {cell:?}", names[c])))?
            };
            cols[c].push(v);
        }
    }
    Ok(cols)
}
