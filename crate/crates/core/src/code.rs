//! Sparse parity-check matrices, the alist file format, syndromes and the
//! binary/bipolar word maps.
//!
//! Indices are 0-based everywhere inside the crate; the 1-based alist
//! convention is handled only by [`parse_alist`] and [`write_alist`].

use std::fmt::Write as _;

use crate::error::{Error, Result};

/// A sparse binary parity-check matrix with both adjacency views.
///
/// `rows[i]` lists the variables taking part in check `i`, and `cols[j]`
/// lists the checks variable `j` takes part in. Both are sorted and the
/// two views always describe the same set of ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityCheckMatrix {
    m: usize,
    n: usize,
    rows: Vec<Vec<usize>>,
    cols: Vec<Vec<usize>>,
}

impl ParityCheckMatrix {
    /// Builds a matrix from its check rows.
    pub fn from_rows(n: usize, rows: Vec<Vec<usize>>) -> Result<Self> {
        let m = rows.len();
        if m == 0 || n == 0 {
            return Err(Error::InvalidMatrix(format!("empty dimensions {m}x{n}")));
        }
        let mut rows = rows;
        let mut cols = vec![Vec::new(); n];
        for (i, row) in rows.iter_mut().enumerate() {
            row.sort_unstable();
            if row.is_empty() {
                return Err(Error::InvalidMatrix(format!("row {i} is empty")));
            }
            if row.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidMatrix(format!("row {i} has a duplicate index")));
            }
            for &j in row.iter() {
                if j >= n {
                    return Err(Error::InvalidMatrix(format!(
                        "row {i} references column {j} >= {n}"
                    )));
                }
                cols[j].push(i);
            }
        }
        if let Some(j) = cols.iter().position(Vec::is_empty) {
            return Err(Error::InvalidMatrix(format!("column {j} is empty")));
        }
        Ok(Self { m, n, rows, cols })
    }

    /// Builds a matrix from a dense 0/1 description, one slice per row.
    pub fn from_dense(dense: &[&[u8]]) -> Result<Self> {
        let n = dense.first().map_or(0, |r| r.len());
        let mut rows = Vec::with_capacity(dense.len());
        for (i, r) in dense.iter().enumerate() {
            if r.len() != n {
                return Err(Error::InvalidMatrix(format!("dense row {i} has wrong width")));
            }
            rows.push(r.iter().enumerate().filter(|(_, &b)| b != 0).map(|(j, _)| j).collect());
        }
        Self::from_rows(n, rows)
    }

    /// Number of checks.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Code length.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Variables of check `i`.
    pub fn row(&self, i: usize) -> &[usize] {
        &self.rows[i]
    }

    /// Checks of variable `j`.
    pub fn col(&self, j: usize) -> &[usize] {
        &self.cols[j]
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn cols(&self) -> &[Vec<usize>] {
        &self.cols
    }

    /// Number of ones in the matrix (edges of the Tanner graph).
    pub fn num_ones(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn max_row_degree(&self) -> usize {
        self.rows.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn max_col_degree(&self) -> usize {
        self.cols.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `true` when entry `(i, j)` is one.
    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.rows[i].binary_search(&j).is_ok()
    }

    /// Design rate `1 - m/n`.
    pub fn design_rate(&self) -> f64 {
        1.0 - self.m as f64 / self.n as f64
    }
}

/// A word over GF(2), one byte (0 or 1) per bit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryWord(pub Vec<u8>);

impl BinaryWord {
    pub fn zeros(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    /// Number of positions where the two words differ.
    pub fn hamming_distance(&self, other: &BinaryWord) -> usize {
        self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count()
    }
}

/// A word over {+1, -1}.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BipolarWord(Vec<i8>);

impl BipolarWord {
    pub fn symbols(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The symbols as reals, ready to be transmitted or used as a state.
    pub fn to_real(&self) -> Vec<f64> {
        self.0.iter().map(|&s| f64::from(s)).collect()
    }

    /// Inverse of [`binary_to_bipolar`].
    pub fn to_binary(&self) -> BinaryWord {
        BinaryWord(self.0.iter().map(|&s| u8::from(s < 0)).collect())
    }
}

/// Maps 0 to +1 and 1 to -1.
pub fn binary_to_bipolar(b: &BinaryWord) -> BipolarWord {
    BipolarWord(b.0.iter().map(|&bit| if bit & 1 == 0 { 1 } else { -1 }).collect())
}

/// Sign decision: `x_j >= 0` gives bit 0, `x_j < 0` gives bit 1.
pub fn hard_decision(x: &[f64]) -> Result<BinaryWord> {
    if let Some(k) = x.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(k));
    }
    Ok(hard_decision_unchecked(x))
}

pub(crate) fn hard_decision_unchecked(x: &[f64]) -> BinaryWord {
    // -0.0 >= 0.0 holds, so negative zero also maps to bit 0.
    BinaryWord(x.iter().map(|&v| u8::from(v < 0.0)).collect())
}

/// `H b` over GF(2).
pub fn syndrome(h: &ParityCheckMatrix, b: &BinaryWord) -> Result<Vec<u8>> {
    if b.len() != h.n() {
        return Err(Error::LengthMismatch { expected: h.n(), got: b.len() });
    }
    Ok(syndrome_unchecked(h, b.bits()))
}

pub(crate) fn syndrome_unchecked(h: &ParityCheckMatrix, bits: &[u8]) -> Vec<u8> {
    h.rows().iter().map(|row| row.iter().fold(0u8, |acc, &j| acc ^ (bits[j] & 1))).collect()
}

/// `true` when every check is satisfied.
pub(crate) fn is_codeword(h: &ParityCheckMatrix, bits: &[u8]) -> bool {
    h.rows().iter().all(|row| row.iter().fold(0u8, |acc, &j| acc ^ (bits[j] & 1)) == 0)
}

struct LineTokens<'a> {
    lines: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
}

impl<'a> LineTokens<'a> {
    fn new(text: &'a str) -> Self {
        Self { lines: text.lines().enumerate().peekable() }
    }

    /// Next non-blank line as integers, with its 1-based line number.
    fn next_line(&mut self, what: &str) -> Result<(usize, Vec<usize>)> {
        for (idx, line) in self.lines.by_ref() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let lineno = idx + 1;
            let vals = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>().map_err(|_| Error::Alist {
                        line: lineno,
                        msg: format!("expected a non-negative integer, found {tok:?}"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok((lineno, vals));
        }
        Err(Error::Alist { line: 0, msg: format!("unexpected end of input while reading {what}") })
    }

    fn trailing(&mut self) -> Option<usize> {
        self.lines.find(|(_, l)| !l.trim().is_empty()).map(|(i, _)| i + 1)
    }
}

fn expect_len(line: usize, vals: &[usize], len: usize, what: &str) -> Result<()> {
    if vals.len() != len {
        return Err(Error::Alist {
            line,
            msg: format!("{what}: expected {len} values, found {}", vals.len()),
        });
    }
    Ok(())
}

/// Reads one adjacency list line: strips zero padding, converts to 0-based
/// and checks range, count and duplicates.
fn adjacency_line(
    line: usize,
    vals: &[usize],
    degree: usize,
    bound: usize,
    what: &str,
) -> Result<Vec<usize>> {
    let mut out: Vec<usize> = vals.iter().filter(|&&v| v != 0).map(|&v| v - 1).collect();
    if out.len() != degree {
        return Err(Error::Alist {
            line,
            msg: format!("{what}: degree is {degree} but {} entries listed", out.len()),
        });
    }
    if let Some(&bad) = out.iter().find(|&&v| v >= bound) {
        return Err(Error::Alist {
            line,
            msg: format!("{what}: index {} out of range 1..={bound}", bad + 1),
        });
    }
    out.sort_unstable();
    if out.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Alist { line, msg: format!("{what}: duplicate index") });
    }
    Ok(out)
}

/// Parses a matrix in alist format.
pub fn parse_alist(text: &str) -> Result<ParityCheckMatrix> {
    let mut toks = LineTokens::new(text);

    let (l1, header) = toks.next_line("header")?;
    expect_len(l1, &header, 2, "header \"n m\"")?;
    let (n, m) = (header[0], header[1]);
    if n == 0 || m == 0 {
        return Err(Error::Alist { line: l1, msg: format!("empty dimensions n={n} m={m}") });
    }

    let (l2, maxes) = toks.next_line("maximum degrees")?;
    expect_len(l2, &maxes, 2, "maximum degrees")?;
    let (max_col, max_row) = (maxes[0], maxes[1]);

    let (l3, col_deg) = toks.next_line("column degrees")?;
    expect_len(l3, &col_deg, n, "column degrees")?;
    let (l4, row_deg) = toks.next_line("row degrees")?;
    expect_len(l4, &row_deg, m, "row degrees")?;

    if let Some(&d) = col_deg.iter().find(|&&d| d > max_col || d == 0) {
        return Err(Error::Alist {
            line: l3,
            msg: format!("column degree {d} outside 1..={max_col}"),
        });
    }
    if let Some(&d) = row_deg.iter().find(|&&d| d > max_row || d == 0) {
        return Err(Error::Alist { line: l4, msg: format!("row degree {d} outside 1..={max_row}") });
    }
    let ones_by_col: usize = col_deg.iter().sum();
    let ones_by_row: usize = row_deg.iter().sum();
    if ones_by_col != ones_by_row {
        return Err(Error::Alist {
            line: l4,
            msg: format!("column degrees sum to {ones_by_col} but row degrees to {ones_by_row}"),
        });
    }

    let mut cols = Vec::with_capacity(n);
    for (j, &d) in col_deg.iter().enumerate() {
        let (l, vals) = toks.next_line("column lists")?;
        cols.push(adjacency_line(l, &vals, d, m, &format!("column {}", j + 1))?);
    }
    let mut rows = Vec::with_capacity(m);
    let mut row_lines = Vec::with_capacity(m);
    for (i, &d) in row_deg.iter().enumerate() {
        let (l, vals) = toks.next_line("row lists")?;
        rows.push(adjacency_line(l, &vals, d, n, &format!("row {}", i + 1))?);
        row_lines.push(l);
    }
    if let Some(l) = toks.trailing() {
        return Err(Error::Alist { line: l, msg: "trailing data after row lists".into() });
    }

    // Duality: each row entry must appear in the matching column list.
    for (i, row) in rows.iter().enumerate() {
        for &j in row {
            if cols[j].binary_search(&i).is_err() {
                return Err(Error::Alist {
                    line: row_lines[i],
                    msg: format!(
                        "row {} lists column {} but column {} does not list row {}",
                        i + 1,
                        j + 1,
                        j + 1,
                        i + 1
                    ),
                });
            }
        }
    }

    let h = ParityCheckMatrix::from_rows(n, rows)?;
    debug_assert_eq!(h.cols(), &cols[..]);
    Ok(h)
}

/// Writes a matrix in alist format without zero padding.
pub fn write_alist(h: &ParityCheckMatrix) -> String {
    fn join(it: impl Iterator<Item = usize>) -> String {
        it.map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
    }
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", h.n(), h.m());
    let _ = writeln!(out, "{} {}", h.max_col_degree(), h.max_row_degree());
    let _ = writeln!(out, "{}", join(h.cols().iter().map(Vec::len)));
    let _ = writeln!(out, "{}", join(h.rows().iter().map(Vec::len)));
    for col in h.cols() {
        let _ = writeln!(out, "{}", join(col.iter().map(|i| i + 1)));
    }
    for row in h.rows() {
        let _ = writeln!(out, "{}", join(row.iter().map(|j| j + 1)));
    }
    out
}

/// Loads an alist file from disk.
pub fn read_alist_file(path: impl AsRef<std::path::Path>) -> Result<ParityCheckMatrix> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_alist(&text)
}
