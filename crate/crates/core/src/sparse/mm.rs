//! MatrixMarket coordinate I/O for cross-checking operators externally.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

use super::CsrMatrix;

pub const MM_HEADER: &str = "%%MatrixMarket matrix coordinate real general";

pub fn to_matrix_market(a: &CsrMatrix) -> String {
    let mut s = String::new();
    writeln!(s, "{MM_HEADER}").unwrap();
    writeln!(s, "{} {} {}", a.n_rows(), a.n_cols(), a.nnz()).unwrap();
    for (i, j, v) in a.triplets() {
        writeln!(s, "{} {} {:.17e}", i + 1, j + 1, v).unwrap();
    }
    s
}

pub fn write_matrix_market<W: Write>(a: &CsrMatrix, mut w: W) -> Result<()> {
    w.write_all(to_matrix_market(a).as_bytes())?;
    Ok(())
}

pub fn read_matrix_market<R: BufRead>(r: R) -> Result<CsrMatrix> {
    let mut lines = r.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::InvalidInput("empty MatrixMarket stream".into()))??;
    if header.trim() != MM_HEADER {
        return Err(Error::Unsupported(format!("MatrixMarket header `{header}`")));
    }
    let bad = |what: &str| Error::InvalidInput(format!("malformed MatrixMarket {what}"));
    let mut size: Option<(usize, usize, usize)> = None;
    let mut trip = Vec::new();
    for line in lines {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        let f: Vec<&str> = t.split_whitespace().collect();
        if size.is_none() {
            if f.len() != 3 {
                return Err(bad("size line"));
            }
            let p = |s: &str| s.parse::<usize>().map_err(|_| bad("size line"));
            size = Some((p(f[0])?, p(f[1])?, p(f[2])?));
            continue;
        }
        if f.len() != 3 {
            return Err(bad("entry"));
        }
        let i: usize = f[0].parse().map_err(|_| bad("row index"))?;
        let j: usize = f[1].parse().map_err(|_| bad("column index"))?;
        let v: f64 = f[2].parse().map_err(|_| bad("value"))?;
        if i == 0 || j == 0 {
            return Err(bad("index (indices are 1-based)"));
        }
        trip.push((i - 1, j - 1, v));
    }
    let (n, m, nnz) = size.ok_or_else(|| bad("size line"))?;
    if trip.len() != nnz {
        return Err(Error::dim("MatrixMarket entry count", nnz, trip.len()));
    }
    CsrMatrix::from_triplets(n, m, trip)
}
