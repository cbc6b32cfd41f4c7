//! Dense matrices over `Q` and over rational functions.

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{parse_err, Error, Result};
use crate::rational::{parse_q, q_to_string, Q};
use crate::ratfunc::RatFunc;

/// A dense matrix of exact rationals, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMat {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl QMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMat {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn identity(r: usize) -> Self {
        let mut m = QMat::zeros(r, r);
        for i in 0..r {
            m.data[i * r + i] = Q::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(QMat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> QMat {
        let mut t = QMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn add(&self, other: &QMat) -> Result<QMat> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Shape(format!("{}x{} + {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        Ok(QMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &QMat) -> Result<QMat> {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> QMat {
        QMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, other: &QMat) -> Result<QMat> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!("{}x{} * {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let mut out = QMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn kron(&self, other: &QMat) -> QMat {
        let mut out = QMat::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.set(i * other.rows + k, j * other.cols + l, a * other.get(k, l));
                    }
                }
            }
        }
        out
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (QMat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            for j in 0..m.cols {
                m.data.swap(p * m.cols + j, row * m.cols + j);
            }
            let inv = m.get(row, col).recip();
            for j in 0..m.cols {
                let v = m.get(row, j) * &inv;
                m.set(row, j, v);
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let f = m.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..m.cols {
                    let v = m.get(r, j) - &f * m.get(row, j);
                    m.set(r, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// A basis of the right null space, as columns of the returned matrix.
    pub fn kernel(&self) -> QMat {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = QMat::zeros(self.cols, free.len());
        for (idx, &f) in free.iter().enumerate() {
            k.set(f, idx, Q::one());
            for (prow, &pc) in pivots.iter().enumerate() {
                k.set(pc, idx, -r.get(prow, f).clone());
            }
        }
        k
    }

    /// Solves `self * x = b` for a matrix right-hand side; `None` if inconsistent
    /// or not unique.
    pub fn solve(&self, b: &QMat) -> Option<QMat> {
        if b.rows != self.rows {
            return None;
        }
        let mut aug = QMat::zeros(self.rows, self.cols + b.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            for j in 0..b.cols {
                aug.set(i, self.cols + j, b.get(i, j).clone());
            }
        }
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) || pivots.len() != self.cols {
            return None;
        }
        let mut x = QMat::zeros(self.cols, b.cols);
        for (row, &pc) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(pc, j, r.get(row, self.cols + j).clone());
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<QMat> {
        if self.rows != self.cols {
            return None;
        }
        self.solve(&QMat::identity(self.rows))
    }

    pub fn to_rat(&self, n: usize) -> Mat {
        Mat {
            n,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|c| RatFunc::constant(n, c.clone())).collect(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!((0..self.rows)
            .map(|i| (0..self.cols).map(|j| q_to_string(self.get(i, j))).collect::<Vec<_>>())
            .collect::<Vec<_>>())
    }

    pub fn from_json(v: &Value, path: &str) -> Result<QMat> {
        let rows = v.as_array().ok_or_else(|| parse_err(path, "expected an array of rows"))?;
        let mut out = Vec::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_array().ok_or_else(|| parse_err(format!("{path}[{i}]"), "expected a row"))?;
            let mut r = Vec::with_capacity(row.len());
            for (j, x) in row.iter().enumerate() {
                let p = format!("{path}[{i}][{j}]");
                let s = x.as_str().ok_or_else(|| parse_err(&p, "expected a rational string"))?;
                r.push(parse_q(s).map_err(|_| parse_err(&p, format!("not an exact rational: {s}")))?);
            }
            out.push(r);
        }
        QMat::from_rows(out).map_err(|e| parse_err(path, e.to_string()))
    }
}

/// A dense matrix of rational functions in `n` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat {
    n: usize,
    rows: usize,
    cols: usize,
    data: Vec<RatFunc>,
}

impl Mat {
    pub fn zeros(n: usize, rows: usize, cols: usize) -> Self {
        Mat {
            n,
            rows,
            cols,
            data: vec![RatFunc::zero(n); rows * cols],
        }
    }

    pub fn identity(n: usize, r: usize) -> Self {
        QMat::identity(r).to_rat(n)
    }

    /// `f * Id`
    pub fn scalar(r: usize, f: &RatFunc) -> Self {
        let mut m = Mat::zeros(f.n_vars(), r, r);
        for i in 0..r {
            m.set(i, i, f.clone());
        }
        m
    }

    pub fn from_rows(n: usize, rows: Vec<Vec<RatFunc>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        if rows.iter().flatten().any(|f| f.n_vars() != n) {
            return Err(Error::Shape("entries over different variable counts".into()));
        }
        Ok(Mat {
            n,
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn n_vars(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &RatFunc {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RatFunc) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> impl Iterator<Item = &RatFunc> {
        self.data.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(RatFunc::is_zero)
    }

    /// The constant matrix, if every entry is constant.
    pub fn as_constant(&self) -> Option<QMat> {
        let mut out = QMat::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).as_constant()?);
            }
        }
        Some(out)
    }

    pub fn map(&self, f: impl Fn(&RatFunc) -> RatFunc) -> Mat {
        Mat {
            n: self.n,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map(&self, f: impl Fn(&RatFunc) -> Result<RatFunc>) -> Result<Mat> {
        let data = self.data.iter().map(f).collect::<Result<Vec<_>>>()?;
        let n = data.first().map_or(self.n, RatFunc::n_vars);
        Ok(Mat {
            n,
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    fn same_shape(&self, other: &Mat) -> Result<()> {
        if (self.n, self.rows, self.cols) != (other.n, other.rows, other.cols) {
            return Err(Error::Shape(format!(
                "{}x{} over {} vs {}x{} over {}",
                self.rows, self.cols, self.n, other.rows, other.cols, other.n
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Mat) -> Result<Mat> {
        self.same_shape(other)?;
        Ok(Mat {
            n: self.n,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Mat) -> Result<Mat> {
        self.same_shape(other)?;
        Ok(Mat {
            n: self.n,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn scale(&self, c: &Q) -> Mat {
        self.map(|f| f.scale(c))
    }

    pub fn scale_by(&self, g: &RatFunc) -> Mat {
        self.map(|f| f * g)
    }

    pub fn mul(&self, other: &Mat) -> Result<Mat> {
        if self.cols != other.rows || self.n != other.n {
            return Err(Error::Shape(format!("{}x{} * {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let mut out = Mat::zeros(self.n, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    out.data[idx] = &out.data[idx] + &(a * b);
                }
            }
        }
        Ok(out)
    }

    /// `[A, B] = AB - BA`
    pub fn commutator(&self, other: &Mat) -> Result<Mat> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    pub fn kron(&self, other: &Mat) -> Result<Mat> {
        if self.n != other.n {
            return Err(Error::VarCountMismatch(self.n, other.n));
        }
        let mut out = Mat::zeros(self.n, self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.set(i * other.rows + k, j * other.cols + l, a * other.get(k, l));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.n, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn partial(&self, i: usize) -> Result<Mat> {
        self.try_map(|f| f.partial(i))
    }

    pub fn relabel(&self, map: &[usize], m: usize) -> Result<Mat> {
        self.try_map(|f| f.relabel(map, m))
    }

    /// Cofactor-expansion determinant; meant for small sizes.
    pub fn determinant(&self) -> Result<RatFunc> {
        if self.rows != self.cols {
            return Err(Error::Shape("determinant of a non-square matrix".into()));
        }
        Ok(self.det_minor(&(0..self.rows).collect::<Vec<_>>(), 0))
    }

    fn det_minor(&self, cols: &[usize], row: usize) -> RatFunc {
        if cols.is_empty() {
            return RatFunc::one(self.n);
        }
        let mut acc = RatFunc::zero(self.n);
        for (k, &c) in cols.iter().enumerate() {
            let a = self.get(row, c);
            if a.is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let term = a * &self.det_minor(&rest, row + 1);
            acc = if k % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }

    /// Inverse in the ring: Gauss-Jordan with unit pivots, falling back to the
    /// adjugate for small sizes when the determinant is a unit.
    pub fn inverse(&self) -> Result<Mat> {
        if self.rows != self.cols {
            return Err(Error::NotInvertible);
        }
        if let Some(inv) = self.gauss_jordan() {
            return Ok(inv);
        }
        if self.rows > 6 {
            return Err(Error::NotInvertible);
        }
        let det = self.determinant()?;
        let det_inv = det.inverse().ok_or(Error::NotInvertible)?;
        let r = self.rows;
        let mut adj = Mat::zeros(self.n, r, r);
        for i in 0..r {
            for j in 0..r {
                let minor = self.without(i, j);
                let mut c = minor.determinant()?;
                if (i + j) % 2 == 1 {
                    c = -&c;
                }
                adj.set(j, i, &c * &det_inv);
            }
        }
        Ok(adj)
    }

    fn without(&self, row: usize, col: usize) -> Mat {
        let mut out = Mat::zeros(self.n, self.rows - 1, self.cols - 1);
        for (ni, i) in (0..self.rows).filter(|&i| i != row).enumerate() {
            for (nj, j) in (0..self.cols).filter(|&j| j != col).enumerate() {
                out.set(ni, nj, self.get(i, j).clone());
            }
        }
        out
    }

    fn gauss_jordan(&self) -> Option<Mat> {
        let r = self.rows;
        let mut a = self.clone();
        let mut b = Mat::identity(self.n, r);
        for col in 0..r {
            let p = (col..r).find(|&i| a.get(i, col).is_unit())?;
            if p != col {
                for j in 0..r {
                    a.data.swap(p * r + j, col * r + j);
                    b.data.swap(p * r + j, col * r + j);
                }
            }
            let inv = a.get(col, col).inverse()?;
            for j in 0..r {
                let x = a.get(col, j) * &inv;
                a.set(col, j, x);
                let y = b.get(col, j) * &inv;
                b.set(col, j, y);
            }
            for i in 0..r {
                if i == col || a.get(i, col).is_zero() {
                    continue;
                }
                let f = a.get(i, col).clone();
                for j in 0..r {
                    let x = a.get(i, j) - &(&f * a.get(col, j));
                    a.set(i, j, x);
                    let y = b.get(i, j) - &(&f * b.get(col, j));
                    b.set(i, j, y);
                }
            }
        }
        Some(b)
    }

    pub fn to_json(&self) -> Value {
        json!((0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_json()).collect::<Vec<_>>())
            .collect::<Vec<_>>())
    }

    pub fn from_json(v: &Value, n: usize, path: &str) -> Result<Mat> {
        let rows = v.as_array().ok_or_else(|| parse_err(path, "expected an array of rows"))?;
        let mut out = Vec::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_array().ok_or_else(|| parse_err(format!("{path}[{i}]"), "expected a row"))?;
            let mut r = Vec::with_capacity(row.len());
            for (j, x) in row.iter().enumerate() {
                let p = format!("{path}[{i}][{j}]");
                let f = RatFunc::from_json(x, &p)?;
                if f.n_vars() != n {
                    return Err(parse_err(&p, format!("expected {n} variables, found {}", f.n_vars())));
                }
                r.push(f);
            }
            out.push(r);
        }
        Mat::from_rows(n, out).map_err(|e| parse_err(path, e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    #[test]
    fn q_inverse_and_kernel() {
        let a = QMat::from_rows(vec![vec![q(2), q(1)], vec![q(1), q(1)]]).unwrap();
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), QMat::identity(2));
        let s = QMat::from_rows(vec![vec![q(1), q(2)], vec![q(2), q(4)]]).unwrap();
        assert!(s.inverse().is_none());
        let k = s.kernel();
        assert_eq!(k.cols(), 1);
        assert!(s.mul(&k).unwrap().is_zero());
        assert_eq!(s.rank(), 1);
    }

    #[test]
    fn kron_shape() {
        let a = QMat::identity(2);
        let b = QMat::from_rows(vec![vec![q(1), qf(1, 2)]]).unwrap();
        let k = a.kron(&b);
        assert_eq!((k.rows(), k.cols()), (2, 4));
        assert_eq!(k.get(1, 3), &qf(1, 2));
    }

    #[test]
    fn ring_inverse() {
        let n = 2;
        let u = RatFunc::diff_pow(n, 0, 1, 1).unwrap();
        let x = RatFunc::var(n, 0);
        let m = Mat::from_rows(n, vec![vec![u.clone(), x], vec![RatFunc::zero(n), RatFunc::one(n)]]).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Mat::identity(n, 2));
        let sing = Mat::scalar(2, &x_plus_one(n));
        assert!(matches!(sing.inverse(), Err(Error::NotInvertible)));
    }

    fn x_plus_one(n: usize) -> RatFunc {
        &RatFunc::var(n, 0) + &RatFunc::one(n)
    }

    #[test]
    fn json_round_trip() {
        let m = Mat::scalar(2, &RatFunc::diff_pow(2, 0, 1, -1).unwrap());
        assert_eq!(Mat::from_json(&m.to_json(), 2, "$").unwrap(), m);
        let qm = QMat::from_rows(vec![vec![qf(-3, 4)]]).unwrap();
        assert_eq!(QMat::from_json(&qm.to_json(), "$").unwrap(), qm);
    }
}
