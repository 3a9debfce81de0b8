use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::experiment::{OutputFormat, TrialStats};
use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "strategy,c,trials,min_error,mean_error,max_error,bound_thm41,bound_thm42";

/// Writes one row per `(strategy, c)` cell. Floats use `{:.16e}`, which
/// round-trips exactly; undefined bounds are written as `inf`.
pub fn write_csv(stats: &[TrialStats], mut out: impl Write) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for s in stats {
        writeln!(
            out,
            "{},{},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            s.strategy,
            s.c,
            s.trials,
            s.min_error,
            s.mean_error,
            s.max_error,
            s.bound_thm41,
            s.bound_thm42
        )?;
    }
    Ok(())
}

pub fn write_json(stats: &[TrialStats], mut out: impl Write) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, stats)?;
    writeln!(out)?;
    Ok(())
}

pub fn emit_results(stats: &[TrialStats], format: OutputFormat, out: impl Write) -> Result<()> {
    match format {
        OutputFormat::Csv => write_csv(stats, out),
        OutputFormat::Json => write_json(stats, out),
    }
}

pub fn emit_results_to_path(
    stats: &[TrialStats],
    format: OutputFormat,
    path: impl AsRef<Path>,
) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    emit_results(stats, format, &mut w)?;
    w.flush()?;
    Ok(())
}

/// Parses output of [`write_csv`].
pub fn parse_results_csv(text: &str) -> Result<Vec<TrialStats>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    if header.join(",") != CSV_HEADER {
        return Err(Error::Parse {
            line: 1,
            msg: format!("unexpected header {:?}", header.join(",")),
        });
    }
    let mut out = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        let field = |k: usize| rec.get(k).unwrap_or("");
        let float = |k: usize| -> Result<f64> {
            field(k).parse().map_err(|_| Error::Parse {
                line,
                msg: format!("bad number {:?}", field(k)),
            })
        };
        let int = |k: usize| -> Result<usize> {
            field(k).parse().map_err(|_| Error::Parse {
                line,
                msg: format!("bad integer {:?}", field(k)),
            })
        };
        out.push(TrialStats {
            strategy: field(0).to_string(),
            c: int(1)?,
            trials: int(2)?,
            min_error: float(3)?,
            mean_error: float(4)?,
            max_error: float(5)?,
            bound_thm41: float(6)?,
            bound_thm42: float(7)?,
            empirical_success_rate: None,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Vec<TrialStats> {
        vec![
            TrialStats {
                strategy: "optimal".into(),
                c: 4,
                trials: 10,
                min_error: 0.1,
                mean_error: 1.0 / 3.0,
                max_error: 0.9,
                bound_thm41: 2.5,
                bound_thm42: f64::INFINITY,
                empirical_success_rate: None,
            },
            TrialStats {
                strategy: "nearly-optimal:0.5".into(),
                c: 8,
                trials: 10,
                min_error: 1e-17,
                mean_error: 0.2,
                max_error: 0.3,
                bound_thm41: 1.0,
                bound_thm42: 0.7,
                empirical_success_rate: None,
            },
        ]
    }

    #[test]
    fn csv_round_trip() {
        let mut buf = Vec::new();
        write_csv(&sample(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with(CSV_HEADER));
        assert_eq!(parse_results_csv(&text).unwrap(), sample());
    }

    #[test]
    fn json_round_trip() {
        let mut buf = Vec::new();
        write_json(&sample(), &mut buf).unwrap();
        let back: Vec<TrialStats> = serde_json::from_slice(&buf).unwrap();
        assert_eq!(back, sample());
    }

    #[test]
    fn wrong_header_rejected() {
        assert!(parse_results_csv("a,b\n1,2\n").is_err());
    }
}
