//! CSV serialization of [`TraceRow`]s.
//!
//! Columns: `solver,game_seed,iteration,cumulative_weight,wall_time_ns,
//! exploitability,eps_p0,eps_p1,...`. Reals use 17 significant digits so a
//! round trip is exact.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::solvers::TraceRow;

const FIXED_COLUMNS: [&str; 6] =
    ["solver", "game_seed", "iteration", "cumulative_weight", "wall_time_ns", "exploitability"];

fn real(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_trace<W: Write>(out: W, rows: &[TraceRow]) -> Result<()> {
    let players = rows.iter().map(|r| r.eps_per_player.len()).max().unwrap_or(2);
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let mut header: Vec<String> = FIXED_COLUMNS.iter().map(|s| s.to_string()).collect();
    header.extend((0..players).map(|p| format!("eps_p{p}")));
    w.write_record(&header)?;
    for r in rows {
        let mut record = vec![
            r.solver.to_string(),
            r.game_seed.to_string(),
            r.iteration.to_string(),
            real(r.cumulative_weight),
            r.wall_time_ns.to_string(),
            real(r.exploitability),
        ];
        record.extend(r.eps_per_player.iter().map(|&e| real(e)));
        record.resize(header.len(), String::new());
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_trace_file(path: &Path, rows: &[TraceRow]) -> Result<()> {
    write_trace(std::io::BufWriter::new(File::create(path)?), rows)
}

pub fn read_trace<R: Read>(input: R) -> Result<Vec<TraceRow>> {
    let mut reader = csv::Reader::from_reader(input);
    let header = reader.headers()?.clone();
    if header.len() < FIXED_COLUMNS.len()
        || header.iter().zip(FIXED_COLUMNS).any(|(a, b)| a != b)
    {
        return Err(Error::Parse("unexpected trace header".into()));
    }
    let mut rows = Vec::new();
    for (n, record) in reader.records().enumerate() {
        let record = record?;
        let line = n + 2;
        let field = |i: usize| record.get(i).unwrap_or("");
        let num = |i: usize| -> Result<f64> {
            field(i)
                .parse()
                .map_err(|_| Error::Parse(format!("line {line}: bad number `{}`", field(i))))
        };
        let int = |i: usize| -> Result<u64> {
            field(i)
                .parse()
                .map_err(|_| Error::Parse(format!("line {line}: bad integer `{}`", field(i))))
        };
        rows.push(TraceRow {
            solver: field(0).parse()?,
            game_seed: int(1)?,
            iteration: int(2)?,
            cumulative_weight: num(3)?,
            wall_time_ns: int(4)?,
            exploitability: num(5)?,
            eps_per_player: (FIXED_COLUMNS.len()..record.len())
                .filter(|&i| !field(i).is_empty())
                .map(num)
                .collect::<Result<_>>()?,
        });
    }
    Ok(rows)
}

pub fn read_trace_file(path: &Path) -> Result<Vec<TraceRow>> {
    read_trace(File::open(path)?)
}
