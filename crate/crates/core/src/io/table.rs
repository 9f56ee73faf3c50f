use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use crate::clustering::Membership;
use crate::error::{Error, Result};
use crate::matrix::DataMatrix;

/// Read a comma-delimited numeric matrix, optionally skipping one header row.
pub fn read_csv_matrix(path: impl AsRef<Path>, has_header: bool) -> Result<DataMatrix> {
    let path = path.as_ref();
    parse_csv_matrix(File::open(path)?, has_header, path)
}

/// Parse CSV from any reader. `source` names the input in error messages.
/// Row numbers in errors are 1-based file lines.
pub fn parse_csv_matrix<R: Read>(
    reader: R,
    has_header: bool,
    source: impl AsRef<Path>,
) -> Result<DataMatrix> {
    let source: PathBuf = source.as_ref().to_path_buf();
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut values = Vec::new();
    let mut width = None;
    let mut rows = 0;
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(rows + 1, |p| p.line() as usize);
        let expected = *width.get_or_insert(record.len());
        if record.len() != expected {
            return Err(Error::RaggedRow {
                path: source,
                row: line,
                expected,
                actual: record.len(),
            });
        }
        for (column, cell) in record.iter().enumerate() {
            match cell.parse::<f64>() {
                Ok(v) if v.is_finite() => values.push(v),
                _ => {
                    return Err(Error::ParseCell {
                        path: source,
                        row: line,
                        column: column + 1,
                        cell: cell.to_string(),
                    })
                }
            }
        }
        rows += 1;
    }
    match width {
        Some(p) if rows > 0 && p > 0 => DataMatrix::from_flat(rows, p, values),
        _ => Err(Error::EmptyFile { path: source }),
    }
}

/// Write rows of reals as CSV. Values use the shortest representation that parses back exactly.
pub fn write_rows_csv<R: AsRef<[f64]>>(
    path: impl AsRef<Path>,
    header: Option<&[&str]>,
    rows: impl IntoIterator<Item = R>,
) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    if let Some(names) = header {
        writeln!(out, "{}", names.join(","))?;
    }
    for row in rows {
        let mut first = true;
        for v in row.as_ref() {
            if !first {
                out.write_all(b",")?;
            }
            write!(out, "{v}")?;
            first = false;
        }
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_matrix_csv(path: impl AsRef<Path>, data: &DataMatrix) -> Result<()> {
    write_rows_csv(path, None, data.rows())
}

/// One label per line, each followed by a newline.
pub fn write_labels_csv(path: impl AsRef<Path>, membership: &Membership) -> Result<()> {
    if membership.is_empty() {
        return Err(Error::InvalidParameter(
            "cannot write an empty membership".into(),
        ));
    }
    let mut out = BufWriter::new(File::create(path)?);
    for label in membership.labels() {
        writeln!(out, "{label}")?;
    }
    out.flush()?;
    Ok(())
}

/// Read one nonnegative integer label per line. Blank lines are skipped and
/// `k` is inferred from the largest label, so unused ids are allowed.
pub fn read_labels_csv(path: impl AsRef<Path>) -> Result<Membership> {
    let path = path.as_ref();
    let reader = BufReader::new(File::open(path)?);
    let mut labels = Vec::new();
    for (index, line) in reader.lines().enumerate() {
        let line = line?;
        let cell = line.trim();
        if cell.is_empty() {
            continue;
        }
        let label = cell.parse::<usize>().map_err(|_| Error::ParseCell {
            path: path.to_path_buf(),
            row: index + 1,
            column: 1,
            cell: cell.to_string(),
        })?;
        labels.push(label);
    }
    if labels.is_empty() {
        return Err(Error::EmptyFile {
            path: path.to_path_buf(),
        });
    }
    Ok(Membership::from_labels(labels))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str, header: bool) -> Result<DataMatrix> {
        parse_csv_matrix(text.as_bytes(), header, "inline.csv")
    }

    #[test]
    fn parses_plain_and_header() {
        let m = parse("1,2\n3,4\n", false).unwrap();
        assert_eq!(m, DataMatrix::from_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap());
        let m = parse("a,b\n1,2\n", true).unwrap();
        assert_eq!(m, DataMatrix::from_rows(&[[1.0, 2.0]]).unwrap());
    }

    #[test]
    fn ragged_row_names_row() {
        match parse("1,2\n3\n", false) {
            Err(Error::RaggedRow { row, .. }) => assert_eq!(row, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bad_cell_names_row_and_column() {
        match parse("1,2\n3,x\n", false) {
            Err(Error::ParseCell { row, column, .. }) => assert_eq!((row, column), (2, 2)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse("1,NaN\n", false),
            Err(Error::ParseCell { .. })
        ));
    }

    #[test]
    fn empty_input_is_rejected() {
        assert!(matches!(parse("", false), Err(Error::EmptyFile { .. })));
        assert!(matches!(parse("a,b\n", true), Err(Error::EmptyFile { .. })));
    }

    #[test]
    fn labels_round_trip_and_format() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("labels.csv");
        write_labels_csv(&path, &Membership::from_labels(vec![0, 1, 0])).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "0\n1\n0\n");
        assert_eq!(read_labels_csv(&path).unwrap().labels(), &[0, 1, 0]);
    }

    #[test]
    fn labels_with_gap_infer_k() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("labels.csv");
        std::fs::write(&path, "0\n2\n").unwrap();
        let m = read_labels_csv(&path).unwrap();
        assert_eq!(m.k(), 3);
        assert_eq!(m.cluster_sizes(), vec![1, 0, 1]);
    }

    #[test]
    fn labels_reject_bad_input() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("labels.csv");
        assert!(write_labels_csv(&path, &Membership::from_labels(vec![])).is_err());
        for bad in ["0\n-1\n", "0\n1.5\n", ""] {
            std::fs::write(&path, bad).unwrap();
            assert!(read_labels_csv(&path).is_err(), "{bad:?}");
        }
    }
}
