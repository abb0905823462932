//! CSV ingestion: event streams, intensities, pair lists and u-values.

use std::path::Path;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::CliError;
use crate::measure::{NullIntensity, ObservationWindow, PointPattern};

/// One row of an event file.
#[derive(Debug, Clone, PartialEq)]
pub struct EventRecord {
    pub time: f64,
    pub stream: Option<String>,
    pub payload: Option<String>,
    /// 1-based line in the source file.
    pub line: u64,
}

/// Sorted events of one stream with payloads aligned to the times.
#[derive(Debug, Clone, PartialEq)]
pub struct EventStream {
    pub name: String,
    pub pattern: PointPattern,
    pub payloads: Vec<Option<String>>,
}

/// Streams in order of first appearance.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EventTable {
    pub streams: Vec<EventStream>,
}

impl EventTable {
    pub fn get(&self, name: &str) -> Option<&EventStream> {
        self.streams.iter().find(|s| s.name == name)
    }

    /// The named stream, or the only stream when `name` is `None`.
    pub fn select(&self, name: Option<&str>, path: &Path) -> Result<&EventStream, CliError> {
        match name {
            Some(n) => self
                .get(n)
                .ok_or_else(|| CliError::Usage(format!("{}: no stream named `{n}`", path.display()))),
            None if self.streams.len() == 1 => Ok(&self.streams[0]),
            None => Err(CliError::Usage(format!(
                "{}: {} streams present; choose one",
                path.display(),
                self.streams.len()
            ))),
        }
    }

    /// Earliest event across all streams.
    pub fn earliest(&self) -> Option<f64> {
        self.streams.iter().filter_map(|s| s.pattern.first()).min_by(f64::total_cmp)
    }
}

/// Tie-breaking for duplicate times: each tied event moves by a uniform
/// offset in `(-eps, eps)`, drawn from a generator seeded with `seed`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jitter {
    pub eps: f64,
    pub seed: u64,
}

fn input_err(path: &Path, line: u64, message: impl Into<String>) -> CliError {
    CliError::Input { path: path.into(), line, message: message.into() }
}

fn reader(path: &Path) -> Result<csv::Reader<std::fs::File>, CliError> {
    csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)
        .map_err(|e| csv_err(path, e))
}

fn csv_err(path: &Path, e: csv::Error) -> CliError {
    let line = e.position().map_or(0, |p| p.line());
    match e.into_kind() {
        csv::ErrorKind::Io(source) => CliError::Io { path: path.into(), source },
        kind => input_err(path, line, format!("{kind:?}")),
    }
}

fn column(headers: &csv::StringRecord, name: &str) -> Option<usize> {
    headers.iter().position(|h| h.eq_ignore_ascii_case(name))
}

fn required_column(headers: &csv::StringRecord, name: &str, path: &Path) -> Result<usize, CliError> {
    column(headers, name).ok_or_else(|| input_err(path, 1, format!("missing `{name}` column")))
}

fn parse_number(field: Option<&str>, name: &str, path: &Path, line: u64) -> Result<f64, CliError> {
    let raw = field.ok_or_else(|| input_err(path, line, format!("missing {name}")))?;
    match raw.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(input_err(path, line, format!("invalid {name} `{raw}`"))),
    }
}

/// Reads the rows of an event file (`time[,stream][,payload]`) in file order.
pub fn read_event_records(path: &Path) -> Result<Vec<EventRecord>, CliError> {
    let mut rdr = reader(path)?;
    let headers = rdr.headers().map_err(|e| csv_err(path, e))?.clone();
    let time_col = required_column(&headers, "time", path)?;
    let stream_col = column(&headers, "stream");
    let payload_col = column(&headers, "payload");
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_err(path, e))?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.iter().all(str::is_empty) {
            continue;
        }
        let text = |c: Option<usize>| c.and_then(|c| rec.get(c)).filter(|s| !s.is_empty()).map(str::to_string);
        out.push(EventRecord {
            time: parse_number(rec.get(time_col), "time", path, line)?,
            stream: text(stream_col),
            payload: text(payload_col),
            line,
        });
    }
    Ok(out)
}

/// Reads an event file and splits it into sorted per-stream patterns.
///
/// Duplicate times within a stream are an error naming both rows unless
/// `jitter` is given.
pub fn parse_events(path: &Path, jitter: Option<Jitter>) -> Result<EventTable, CliError> {
    group_records(read_event_records(path)?, jitter, path)
}

/// Groups parsed rows into streams; see [`parse_events`].
pub fn group_records(records: Vec<EventRecord>, jitter: Option<Jitter>, path: &Path) -> Result<EventTable, CliError> {
    let mut groups: Vec<(String, Vec<EventRecord>)> = Vec::new();
    for r in records {
        let name = r.stream.clone().unwrap_or_default();
        match groups.iter_mut().find(|g| g.0 == name) {
            Some(g) => g.1.push(r),
            None => groups.push((name, vec![r])),
        }
    }
    let streams = groups
        .into_iter()
        .enumerate()
        .map(|(index, (name, mut rows))| {
            rows.sort_by(|a, b| a.time.total_cmp(&b.time));
            if let Some(j) = jitter {
                if !(j.eps > 0.0 && j.eps.is_finite()) {
                    return Err(CliError::Usage(format!("jitter must be positive, got {}", j.eps)));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(j.seed);
                rng.set_stream(index as u64);
                let tied: Vec<bool> = (0..rows.len())
                    .map(|i| {
                        (i > 0 && rows[i - 1].time == rows[i].time)
                            || (i + 1 < rows.len() && rows[i + 1].time == rows[i].time)
                    })
                    .collect();
                for (row, tie) in rows.iter_mut().zip(tied) {
                    if tie {
                        row.time += j.eps * (2.0 * rng.random::<f64>() - 1.0);
                    }
                }
                rows.sort_by(|a, b| a.time.total_cmp(&b.time));
            }
            if let Some(w) = rows.windows(2).find(|w| w[0].time == w[1].time) {
                let hint = if jitter.is_some() { "; try a larger jitter" } else { "; use --jitter to break ties" };
                return Err(input_err(
                    path,
                    w[1].line,
                    format!("duplicate time {} in stream `{name}` (also line {}){hint}", w[1].time, w[0].line),
                ));
            }
            let payloads = rows.iter().map(|r| r.payload.clone()).collect();
            let pattern = PointPattern::new(rows.iter().map(|r| r.time).collect())?;
            Ok(EventStream { name, pattern, payloads })
        })
        .collect::<Result<_, CliError>>()?;
    Ok(EventTable { streams })
}

/// Reads a piecewise-constant intensity (`breakpoint,density`). The last row
/// holds the window end; its density is ignored.
pub fn parse_intensity(path: &Path) -> Result<NullIntensity, CliError> {
    let mut rdr = reader(path)?;
    let headers = rdr.headers().map_err(|e| csv_err(path, e))?.clone();
    let bp_col = required_column(&headers, "breakpoint", path)?;
    let dens_col = required_column(&headers, "density", path)?;
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_err(path, e))?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.iter().all(str::is_empty) {
            continue;
        }
        let bp = parse_number(rec.get(bp_col), "breakpoint", path, line)?;
        let dens = rec.get(dens_col).filter(|s| !s.is_empty()).map(str::to_string);
        rows.push((bp, dens, line));
    }
    if rows.len() < 2 {
        return Err(input_err(path, 1, "need at least two breakpoints"));
    }
    let breakpoints: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let densities = rows[..rows.len() - 1]
        .iter()
        .map(|(_, d, line)| parse_number(d.as_deref(), "density", path, *line))
        .collect::<Result<Vec<f64>, _>>()?;
    let window = ObservationWindow::new(breakpoints[0], breakpoints[breakpoints.len() - 1])?;
    Ok(NullIntensity::build(&breakpoints, &densities, window)?)
}

/// Reads a `source,target` pair list.
pub fn parse_pairs(path: &Path) -> Result<Vec<(String, String)>, CliError> {
    let mut rdr = reader(path)?;
    let headers = rdr.headers().map_err(|e| csv_err(path, e))?.clone();
    let s_col = required_column(&headers, "source", path)?;
    let t_col = required_column(&headers, "target", path)?;
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_err(path, e))?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.iter().all(str::is_empty) {
            continue;
        }
        match (rec.get(s_col), rec.get(t_col)) {
            (Some(s), Some(t)) if !s.is_empty() && !t.is_empty() => out.push((s.to_string(), t.to_string())),
            _ => return Err(input_err(path, line, "expected source and target")),
        }
    }
    Ok(out)
}

/// Reads one numeric column (`u` or `p`, say) from a CSV file.
pub fn parse_column(path: &Path, name: &str) -> Result<Vec<f64>, CliError> {
    let mut rdr = reader(path)?;
    let headers = rdr.headers().map_err(|e| csv_err(path, e))?.clone();
    let col = required_column(&headers, name, path)?;
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_err(path, e))?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.iter().all(str::is_empty) {
            continue;
        }
        out.push(parse_number(rec.get(col), name, path, line)?);
    }
    Ok(out)
}
