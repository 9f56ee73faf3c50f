//! The `--tau` argument grammar.
//!
//! - `s:0.3` one level for every cluster and dimension
//! - `d:0.1,0.8,0.9` one level per dimension
//! - `c:0.2,0.7` one level per cluster
//! - `m:@levels.csv` a `K × p` matrix file, one cluster per row

use std::path::Path;

use anyhow::{bail, Context, Result};
use kexpectile::clustering::{TauMatrix, TauSpec};
use kexpectile::io::read_csv_matrix;

fn parse_list(body: &str) -> Result<Vec<f64>> {
    body.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .with_context(|| format!("invalid tau value {s:?}"))
        })
        .collect()
}

pub fn parse_tau_spec(spec: &str) -> Result<TauSpec> {
    let Some((kind, body)) = spec.split_once(':') else {
        bail!("tau spec {spec:?} must start with s:, d:, c: or m:@");
    };
    let parsed = match kind {
        "s" => {
            let v = parse_list(body)?;
            if v.len() != 1 {
                bail!("s: takes exactly one value, got {}", v.len());
            }
            TauSpec::scalar(v[0])?
        }
        "d" => TauSpec::per_dimension(&parse_list(body)?)?,
        "c" => TauSpec::per_cluster(&parse_list(body)?)?,
        "m" => {
            let Some(path) = body.strip_prefix('@') else {
                bail!("m: expects a file reference like m:@levels.csv");
            };
            load_matrix(Path::new(path))?
        }
        other => bail!("unknown tau spec kind {other:?} (expected s, d, c or m)"),
    };
    Ok(parsed)
}

fn load_matrix(path: &Path) -> Result<TauSpec> {
    let m = read_csv_matrix(path, false)
        .with_context(|| format!("reading tau matrix {}", path.display()))?;
    let rows: Vec<&[f64]> = m.rows().collect();
    let matrix =
        TauMatrix::from_rows(&rows).with_context(|| format!("tau matrix {}", path.display()))?;
    Ok(TauSpec::Full(matrix))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammar() {
        assert!(matches!(
            parse_tau_spec("s:0.3").unwrap(),
            TauSpec::Scalar(_)
        ));
        match parse_tau_spec("d:0.1,0.8,0.9").unwrap() {
            TauSpec::PerDimension(v) => assert_eq!(v.len(), 3),
            other => panic!("{other:?}"),
        }
        match parse_tau_spec("c:0.2, 0.7,0.1,0.9").unwrap() {
            TauSpec::PerCluster(v) => assert_eq!(v[1].value(), 0.7),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_malformed() {
        for bad in [
            "0.3",
            "s:",
            "s:0.2,0.3",
            "s:1.0",
            "d:0.1,x",
            "x:0.5",
            "m:levels.csv",
        ] {
            assert!(parse_tau_spec(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn matrix_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        std::fs::write(&path, "0.2,0.3\n0.7,0.8\n").unwrap();
        let spec = parse_tau_spec(&format!("m:@{}", path.display())).unwrap();
        let m = spec.resolve(2, 2).unwrap();
        assert_eq!(m.to_rows(), vec![vec![0.2, 0.3], vec![0.7, 0.8]]);
        std::fs::write(&path, "0.2,1.5\n").unwrap();
        assert!(parse_tau_spec(&format!("m:@{}", path.display())).is_err());
    }
}
