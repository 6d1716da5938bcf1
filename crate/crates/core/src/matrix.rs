//! Minimal row-major f32 matrix used for features and weights.

use crate::error::{Error, Result};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f32>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<f32>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        let mut data = Vec::with_capacity(r * c);
        for row in &rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        Matrix { rows: r, cols: c, data }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> f32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut f32 {
        &mut self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[f32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Parse the dense ASCII format: first line `rows cols`, then row-major
    /// reals, whitespace separated, arbitrary line breaks. `#` starts a comment.
    pub fn read_ascii<R: std::io::Read>(input: R, what: &str) -> Result<Matrix> {
        let reader = BufReader::new(input);
        let mut tokens: Vec<String> = Vec::new();
        for line in reader.lines() {
            let line = line?;
            let line = line.split('#').next().unwrap_or("");
            tokens.extend(line.split_whitespace().map(|s| s.to_string()));
        }
        if tokens.len() < 2 {
            return Err(Error::MalformedGraph(format!("{what}: missing `rows cols` header")));
        }
        let rows: usize = tokens[0]
            .parse()
            .map_err(|_| Error::MalformedGraph(format!("{what}: bad row count `{}`", tokens[0])))?;
        let cols: usize = tokens[1]
            .parse()
            .map_err(|_| Error::MalformedGraph(format!("{what}: bad col count `{}`", tokens[1])))?;
        let expect = rows * cols;
        let got = tokens.len() - 2;
        if got != expect {
            return Err(Error::MalformedGraph(format!(
                "{what}: header says {rows}x{cols} = {expect} values, found {got}"
            )));
        }
        let mut data = Vec::with_capacity(expect);
        for t in &tokens[2..] {
            let v: f32 = t
                .parse()
                .map_err(|_| Error::MalformedGraph(format!("{what}: bad value `{t}`")))?;
            data.push(v);
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn read_file(path: &Path) -> Result<Matrix> {
        let f = std::fs::File::open(path)?;
        Matrix::read_ascii(f, &path.display().to_string())
    }

    pub fn write_file(&self, path: &Path) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(f, "{} {}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|v| format!("{v}")).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ascii_round_trip_preserves_bits() {
        let m = Matrix::from_rows(vec![
            vec![1.5, -2.25, 3.0e-7],
            vec![0.1, f32::MIN_POSITIVE, 1024.5],
        ]);
        let mut buf = Vec::new();
        writeln!(buf, "{} {}", m.rows, m.cols).unwrap();
        for r in 0..m.rows {
            let row: Vec<String> = m.row(r).iter().map(|v| format!("{v}")).collect();
            writeln!(buf, "{}", row.join(" ")).unwrap();
        }
        let back = Matrix::read_ascii(&buf[..], "test").unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn header_mismatch_is_error() {
        let r = Matrix::read_ascii("2 2\n1 2 3\n".as_bytes(), "test");
        assert!(r.is_err());
    }
}
