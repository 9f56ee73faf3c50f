use crate::error::{Error, Result};

/// Row-major `n × p` matrix of finite reals; one observation per row.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    n: usize,
    p: usize,
    values: Vec<f64>,
}

impl DataMatrix {
    /// Build from a flat row-major buffer.
    pub fn from_flat(n: usize, p: usize, values: Vec<f64>) -> Result<Self> {
        if n == 0 || p == 0 {
            return Err(Error::InvalidParameter(format!(
                "data matrix must be at least 1x1, got {n}x{p}"
            )));
        }
        if values.len() != n * p {
            return Err(Error::DimensionMismatch {
                expected: n * p,
                actual: values.len(),
                context: "flat matrix buffer",
            });
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        Ok(DataMatrix { n, p, values })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let p = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let mut values = Vec::with_capacity(rows.len() * p);
        for row in rows {
            let row = row.as_ref();
            if row.len() != p {
                return Err(Error::DimensionMismatch {
                    expected: p,
                    actual: row.len(),
                    context: "row length",
                });
            }
            values.extend_from_slice(row);
        }
        DataMatrix::from_flat(rows.len(), p, values)
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.p
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.p..(i + 1) * self.p]
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.p + j]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.values.chunks_exact(self.p)
    }

    pub fn column(&self, j: usize) -> impl ExactSizeIterator<Item = f64> + '_ {
        self.values.iter().skip(j).step_by(self.p).copied()
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.values
    }

    pub fn into_flat(self) -> Vec<f64> {
        self.values
    }

    /// Column-wise arithmetic mean.
    pub fn column_means(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.p];
        for row in self.rows() {
            for (s, &x) in sums.iter_mut().zip(row) {
                *s += x;
            }
        }
        sums.iter().map(|s| s / self.n as f64).collect()
    }

    /// New matrix with rows taken in the given order.
    pub fn select_rows(&self, order: &[usize]) -> DataMatrix {
        let mut values = Vec::with_capacity(order.len() * self.p);
        for &i in order {
            values.extend_from_slice(self.row(i));
        }
        DataMatrix {
            n: order.len(),
            p: self.p,
            values,
        }
    }
}
