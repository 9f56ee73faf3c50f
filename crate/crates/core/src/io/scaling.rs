use crate::error::{Error, Result};
use crate::matrix::DataMatrix;

/// Per-column divisors applied by [`scale_by_std`].
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnScaling {
    pub stds: Vec<f64>,
}

impl ColumnScaling {
    /// Multiply each column back by its divisor.
    pub fn unscale(&self, data: &DataMatrix) -> Result<DataMatrix> {
        if data.ncols() != self.stds.len() {
            return Err(Error::DimensionMismatch {
                expected: self.stds.len(),
                actual: data.ncols(),
                context: "scaled matrix width",
            });
        }
        let values = data
            .rows()
            .flat_map(|r| r.iter().zip(&self.stds).map(|(x, s)| x * s))
            .collect();
        DataMatrix::from_flat(data.nrows(), data.ncols(), values)
    }
}

/// Divide every column by its sample standard deviation (denominator `n − 1`).
pub fn scale_by_std(data: &DataMatrix) -> Result<(DataMatrix, ColumnScaling)> {
    let n = data.nrows();
    let means = data.column_means();
    let mut stds = Vec::with_capacity(data.ncols());
    for (j, mean) in means.iter().enumerate() {
        let ss: f64 = data.column(j).map(|x| (x - mean) * (x - mean)).sum();
        let std = if n > 1 {
            (ss / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        if !(std > 0.0) {
            return Err(Error::ZeroVariance { column: j });
        }
        stds.push(std);
    }
    let values = data
        .rows()
        .flat_map(|r| r.iter().zip(&stds).map(|(x, s)| x / s))
        .collect();
    let scaled = DataMatrix::from_flat(n, data.ncols(), values)?;
    Ok((scaled, ColumnScaling { stds }))
}
