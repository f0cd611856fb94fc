use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use super::lpoly::{Coeffs, NormedEulerFactor};
use crate::error::{Error, Result};

/// Reads an L-polynomial CSV (`norm,c1` or `norm,c1,c2`). Lines starting with `#`
/// are comments. Rows must be sorted by norm; equal norms are allowed.
pub fn ingest_lpoly_file(path: impl AsRef<Path>) -> Result<Vec<NormedEulerFactor>> {
    ingest_lpoly_reader(File::open(path)?)
}

pub fn ingest_lpoly_reader<R: Read>(reader: R) -> Result<Vec<NormedEulerFactor>> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    let genus = match header.iter().map(String::as_str).collect::<Vec<_>>()[..] {
        ["norm", "c1"] => 1,
        ["norm", "c1", "c2"] => 2,
        _ => {
            return Err(Error::parse(
                Some(1),
                format!("expected header norm,c1 or norm,c1,c2, got {}", header.join(",")),
            ))
        }
    };
    let mut out = Vec::new();
    let mut prev: Option<u64> = None;
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map(|p| p.line() as usize);
        let field = |i: usize| -> Result<i64> {
            rec.get(i)
                .ok_or_else(|| Error::parse(line, format!("missing column {}", i + 1)))?
                .parse::<i64>()
                .map_err(|e| Error::parse(line, format!("column {}: {e}", i + 1)))
        };
        let norm = field(0)?;
        if norm < 2 {
            return Err(Error::parse(line, format!("norm {norm} must be at least 2")));
        }
        let norm = norm as u64;
        if let Some(p) = prev {
            if norm < p {
                return Err(Error::Order { prev: p, next: norm });
            }
        }
        prev = Some(norm);
        let coeffs = if genus == 1 {
            Coeffs::G1 { a: field(1)? }
        } else {
            Coeffs::G2 {
                c1: field(1)?,
                c2: field(2)?,
            }
        };
        out.push(NormedEulerFactor::new(norm, coeffs)?);
    }
    Ok(out)
}

/// Writes factors in the ingestion schema, preceded by optional `#` comment lines.
pub fn write_lpoly_csv<W: Write>(
    mut w: W,
    comments: &[String],
    factors: &[NormedEulerFactor],
) -> Result<()> {
    for c in comments {
        writeln!(w, "# {c}")?;
    }
    let genus = factors.first().map(|f| f.genus()).unwrap_or(1);
    writeln!(w, "{}", if genus == 1 { "norm,c1" } else { "norm,c1,c2" })?;
    for f in factors {
        match f.coeffs {
            Coeffs::G1 { a } => writeln!(w, "{},{a}", f.norm)?,
            Coeffs::G2 { c1, c2 } => writeln!(w, "{},{c1},{c2}", f.norm)?,
        }
    }
    Ok(())
}
