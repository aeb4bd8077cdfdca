//! Dense matrices over a finite field: products, elimination, kernels and the
//! `GFMAT v1` text format.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Elem, Field, FieldSpec, QuadraticExtension};

#[derive(Clone)]
pub struct Matrix {
    field: Arc<Field>,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl PartialEq for Matrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.field == other.field
            && self.data == other.data
    }
}

impl Eq for Matrix {}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{}x{} over GF({})",
            self.rows,
            self.cols,
            self.field.order()
        )?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

/// Row-reduced echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn new(field: Arc<Field>, rows: usize, cols: usize, data: Vec<Elem>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        for &x in &data {
            field.check(x)?;
        }
        Ok(Self {
            field,
            rows,
            cols,
            data,
        })
    }

    pub fn from_rows(field: Arc<Field>, rows: &[Vec<Elem>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Self::new(field, rows.len(), cols, rows.concat())
    }

    pub fn zeros(field: Arc<Field>, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: Arc<Field>, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Elem] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, x: Elem) {
        self.data[r * self.cols + c] = x;
    }

    pub fn row(&self, r: usize) -> &[Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Elem> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    fn same_field(&self, other: &Matrix) -> Result<()> {
        if Arc::ptr_eq(&self.field, &other.field) || self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field.clone(), self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        self.same_field(other)?;
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Matrix::zeros(f.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let cur = out.get(i, j);
                    out.set(i, j, f.add(cur, f.mul(a, other.get(l, j))));
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: Elem) -> Matrix {
        let f = &self.field;
        Matrix {
            data: self.data.iter().map(|&x| f.mul(s, x)).collect(),
            ..self.clone()
        }
    }

    pub fn neg(&self) -> Matrix {
        self.scale(self.field.neg(1))
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.same_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape("addends differ in shape".into()));
        }
        let f = &self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Ok(Matrix {
            data,
            ..self.clone()
        })
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.field.clone(), self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                out.set(r, j, self.get(r, c));
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        let data = rows
            .iter()
            .flat_map(|&r| self.row(r).iter().copied())
            .collect();
        Matrix {
            field: self.field.clone(),
            rows: rows.len(),
            cols: self.cols,
            data,
        }
    }

    pub fn hstack(&self, other: &Matrix) -> Result<Matrix> {
        self.same_field(other)?;
        if self.rows != other.rows {
            return Err(Error::Shape("hstack needs equal row counts".into()));
        }
        let mut data = Vec::with_capacity(self.rows * (self.cols + other.cols));
        for r in 0..self.rows {
            data.extend_from_slice(self.row(r));
            data.extend_from_slice(other.row(r));
        }
        Ok(Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols + other.cols,
            data,
        })
    }

    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        self.same_field(other)?;
        if self.cols != other.cols {
            return Err(Error::Shape("vstack needs equal column counts".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix {
            field: self.field.clone(),
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn rref(&self) -> Echelon {
        let mut m = self.clone();
        let pivots = eliminate(&self.field, &mut m.data, m.rows, m.cols, true);
        Echelon { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        let mut buf = self.data.clone();
        eliminate(&self.field, &mut buf, self.rows, self.cols, false).len()
    }

    pub fn det(&self) -> Result<Elem> {
        if !self.is_square() {
            return Err(Error::Shape(format!(
                "determinant of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        Ok(det_in_place(&self.field, &mut self.data.clone(), self.rows))
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::Shape("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let aug = self.hstack(&Matrix::identity(self.field.clone(), n))?;
        let e = aug.rref();
        if e.pivots.len() < n || e.pivots[n - 1] >= n {
            return Err(Error::DivisionByZero);
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        Ok(e.matrix.select_columns(&cols))
    }

    /// Basis (as rows) of `{x : self * x = 0}`.
    pub fn right_kernel(&self) -> Matrix {
        let f = &self.field;
        let e = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !e.pivots.contains(c)).collect();
        let mut k = Matrix::zeros(f.clone(), free.len(), self.cols);
        for (i, &fc) in free.iter().enumerate() {
            k.set(i, fc, 1);
            for (r, &pc) in e.pivots.iter().enumerate() {
                k.set(i, pc, f.neg(e.matrix.get(r, fc)));
            }
        }
        k
    }

    /// Entrywise Frobenius conjugate.
    pub fn conj(&self, ext: &QuadraticExtension) -> Result<Matrix> {
        if **ext.ext() != *self.field {
            return Err(Error::NotExtension(self.field.order()));
        }
        Ok(Matrix {
            data: self.data.iter().map(|&x| ext.conj(x)).collect(),
            ..self.clone()
        })
    }

    pub fn conj_transpose(&self, ext: &QuadraticExtension) -> Result<Matrix> {
        Ok(self.conj(ext)?.transpose())
    }

    /// Rank of the submatrix on `cols`, using `buf` as scratch space.
    pub fn column_rank(&self, cols: &[usize], buf: &mut Vec<Elem>) -> usize {
        buf.clear();
        for r in 0..self.rows {
            for &c in cols {
                buf.push(self.get(r, c));
            }
        }
        eliminate(&self.field, buf, self.rows, cols.len(), false).len()
    }

    pub fn to_gfmat(&self) -> String {
        let spec = self.field.spec();
        let modulus: Vec<String> = spec.modulus.iter().map(u32::to_string).collect();
        let mut s = format!(
            "GFMAT v1\n{} {} {} {} {}\n",
            spec.p,
            spec.m,
            modulus.join(","),
            self.rows,
            self.cols
        );
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(u32::to_string).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn from_gfmat(text: &str) -> Result<Matrix> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        if lines.next() != Some("GFMAT v1") {
            return Err(Error::Parse("missing `GFMAT v1` header".into()));
        }
        let header: Vec<&str> = lines
            .next()
            .ok_or_else(|| Error::Parse("missing dimension line".into()))?
            .split_whitespace()
            .collect();
        if header.len() != 5 {
            return Err(Error::Parse(
                "dimension line must read `p m modulus rows cols`".into(),
            ));
        }
        let num = |s: &str| {
            s.parse::<u32>()
                .map_err(|e| Error::Parse(format!("{s:?}: {e}")))
        };
        let p = num(header[0])?;
        let m = num(header[1])?;
        let modulus = header[2].split(',').map(num).collect::<Result<Vec<_>>>()?;
        let rows = num(header[3])? as usize;
        let cols = num(header[4])? as usize;
        let field = Field::from_spec(&FieldSpec { p, m, modulus })?;
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("missing row {r}")))?;
            let row = line
                .split_whitespace()
                .map(num)
                .collect::<Result<Vec<_>>>()?;
            if row.len() != cols {
                return Err(Error::Parse(format!(
                    "row {r} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        if lines.next().is_some() {
            return Err(Error::Parse(
                "trailing rows after the declared matrix".into(),
            ));
        }
        Matrix::new(field, rows, cols, data)
    }
}

/// Gauss-Jordan (or plain forward elimination when `reduce` is false) on a
/// row-major buffer. Pivots are the first nonzero entries in column order.
fn eliminate(f: &Field, buf: &mut [Elem], rows: usize, cols: usize, reduce: bool) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| buf[i * cols + c] != 0) else {
            continue;
        };
        if pr != r {
            for j in 0..cols {
                buf.swap(pr * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(buf[r * cols + c]).expect("pivot is nonzero");
        if reduce {
            for j in c..cols {
                buf[r * cols + j] = f.mul(buf[r * cols + j], inv);
            }
        }
        let start = if reduce { 0 } else { r + 1 };
        for i in start..rows {
            if i == r {
                continue;
            }
            let x = buf[i * cols + c];
            if x == 0 {
                continue;
            }
            let factor = if reduce { x } else { f.mul(x, inv) };
            for j in c..cols {
                let v = f.sub(buf[i * cols + j], f.mul(factor, buf[r * cols + j]));
                buf[i * cols + j] = v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn det_in_place(f: &Field, buf: &mut [Elem], n: usize) -> Elem {
    let mut det = 1;
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| buf[i * n + c] != 0) else {
            return 0;
        };
        if pr != c {
            for j in 0..n {
                buf.swap(pr * n + j, c * n + j);
            }
            det = f.neg(det);
        }
        let pivot = buf[c * n + c];
        det = f.mul(det, pivot);
        let inv = f.inv(pivot).expect("pivot is nonzero");
        for i in c + 1..n {
            let x = buf[i * n + c];
            if x == 0 {
                continue;
            }
            let factor = f.mul(x, inv);
            for j in c..n {
                buf[i * n + j] = f.sub(buf[i * n + j], f.mul(factor, buf[c * n + j]));
            }
        }
    }
    det
}
