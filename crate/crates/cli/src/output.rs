use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use combplan::metrics::BlockCost;
use combplan::planner::{LightSource, PlanResult};
use combplan::study::{CostRecord, MetricsRecord};
use combplan::txmodel::TxCurve;
use serde::Serialize;

/// Opens `path` for writing and puts the `# config:` line on top.
pub fn create(path: &Path, config_json: &str) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    }
    let f = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    let mut w = BufWriter::new(f);
    write_comment(&mut w, config_json)?;
    Ok(w)
}

pub fn write_comment<W: Write>(w: &mut W, config_json: &str) -> Result<()> {
    writeln!(w, "# config: {config_json}")?;
    Ok(())
}

pub fn write_metrics<W: Write>(w: W, rows: &[MetricsRecord]) -> Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    for r in rows {
        csv.serialize(r)?;
    }
    csv.flush()?;
    Ok(())
}

pub fn read_metrics(path: &Path) -> Result<Vec<MetricsRecord>> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)
        .with_context(|| format!("cannot open {}", path.display()))?;
    rdr.deserialize()
        .collect::<std::result::Result<Vec<MetricsRecord>, _>>()
        .with_context(|| format!("malformed metrics table {}", path.display()))
}

#[derive(Serialize)]
struct TxRow<'a> {
    x_variable: &'a str,
    x_value: f64,
    architecture: &'a str,
    n_lines: u32,
    osnr_tx_db: f64,
    clamped: bool,
}

pub fn write_txosnr<W: Write>(w: W, variable: &str, curves: &[TxCurve]) -> Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    for c in curves {
        for p in &c.points {
            csv.serialize(TxRow {
                x_variable: variable,
                x_value: p.x,
                architecture: c.kind.label(),
                n_lines: c.n_lines,
                osnr_tx_db: p.osnr_tx_db,
                clamped: p.clamped,
            })?;
        }
    }
    csv.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct CostRow<'a> {
    s: f64,
    topology: &'a str,
    n_lines: u32,
    penalty_db: f64,
    max_block_cost_multiple: String,
    band_min: Option<f64>,
    band_max: Option<f64>,
    points: usize,
}

pub fn write_cost<W: Write>(w: W, rows: &[CostRecord]) -> Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    for r in rows {
        let multiple = match r.max_block_cost {
            BlockCost::Viable(m) => m.to_string(),
            BlockCost::NeverViable => "never_viable".to_string(),
        };
        csv.serialize(CostRow {
            s: r.s,
            topology: &r.topology,
            n_lines: r.n_lines,
            penalty_db: r.penalty_db,
            max_block_cost_multiple: multiple,
            band_min: r.band_min,
            band_max: r.band_max,
            points: r.points,
        })?;
    }
    csv.flush()?;
    Ok(())
}

/// Lightpath-level dump of one plan.
pub fn write_lightpaths<W: Write>(w: W, plan: &PlanResult) -> Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record([
        "lp_id",
        "demand",
        "terminal",
        "route",
        "length_km",
        "config",
        "data_rate_gbps",
        "slot_start",
        "slot_width",
        "source",
        "mws_id",
        "line",
        "snr_db",
        "required_snr_db",
    ])?;
    for lp in &plan.lightpaths {
        let route = lp
            .route
            .nodes
            .iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join("-");
        let (source, mws, line) = match lp.source {
            LightSource::Sws => ("sws", String::new(), String::new()),
            LightSource::Mws { id, line } => ("mws", id.to_string(), line.to_string()),
        };
        csv.write_record([
            lp.id.to_string(),
            lp.demand.to_string(),
            lp.terminal.to_string(),
            route,
            lp.route.total_length_km.to_string(),
            lp.config.label(),
            lp.data_rate_gbps.to_string(),
            lp.block.start.to_string(),
            lp.block.width.to_string(),
            source.to_string(),
            mws,
            line,
            lp.snr.snr_total_db.to_string(),
            lp.config.required_snr_db.to_string(),
        ])?;
    }
    csv.flush()?;
    Ok(())
}
