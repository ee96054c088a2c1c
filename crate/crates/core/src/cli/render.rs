//! Text renderings of bound tables and plot data.

use std::fmt::Write;

use serde::Serialize;

use crate::bounds::{bounds_report, upper_bound_loose, upper_bound_tight, BoundsReport};
use crate::error::{Error, Result};

pub const BOUNDS_CSV_HEADER: &str = "d,m,lower,q,upper_tight_real,upper_tight,upper_loose,solver_residual";

pub fn bounds_rows(ds: &[u32], ms: &[u64]) -> Result<Vec<BoundsReport>> {
    let mut rows = Vec::with_capacity(ds.len() * ms.len());
    for &d in ds {
        for &m in ms {
            rows.push(bounds_report(d, m)?);
        }
    }
    Ok(rows)
}

pub fn bounds_table(rows: &[BoundsReport]) -> String {
    let mut s = format!(
        "{:>3} {:>8} {:>8} {:>12} {:>16} {:>10} {:>16} {:>10}\n",
        "d", "m", "lower", "q", "tight", "tight_int", "loose", "residual"
    );
    for r in rows {
        let _ = writeln!(
            s,
            "{:>3} {:>8} {:>8} {:>12} {:>16.4} {:>10} {:>16.4} {:>10.1e}",
            r.d, r.m, r.lower, r.q, r.upper_tight_real, r.upper_tight, r.upper_loose, r.solver_residual
        );
    }
    s
}

pub fn bounds_csv(rows: &[BoundsReport]) -> String {
    let mut s = format!("{BOUNDS_CSV_HEADER}\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{:e}",
            r.d, r.m, r.lower, r.q, r.upper_tight_real, r.upper_tight, r.upper_loose, r.solver_residual
        );
    }
    s
}

#[derive(Serialize)]
struct BoundsJson<'a> {
    schema_version: u32,
    rows: &'a [BoundsReport],
}

pub fn bounds_json(rows: &[BoundsReport]) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&BoundsJson { schema_version: 1, rows })
        .map_err(|e| Error::Serialization(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Columns `m` then `tight_d{d},loose_d{d},ratio_d{d}` for each `d`.
pub fn plot_data_csv(ds: &[u32], ms: &[u64]) -> Result<String> {
    let mut s = String::from("m");
    for d in ds {
        let _ = write!(s, ",tight_d{d},loose_d{d},ratio_d{d}");
    }
    s.push('\n');
    for &m in ms {
        let _ = write!(s, "{m}");
        for &d in ds {
            let tight = upper_bound_tight(d, m)?.real;
            let loose = upper_bound_loose(d, m)?;
            let _ = write!(s, ",{tight},{loose},{}", loose / tight);
        }
        s.push('\n');
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_one_row_per_pair() {
        let rows = bounds_rows(&[2, 3], &[3, 4, 5]).unwrap();
        let csv = bounds_csv(&rows);
        assert_eq!(csv.lines().count(), 7);
        assert!(csv.starts_with(BOUNDS_CSV_HEADER));
        assert!(csv.lines().nth(1).unwrap().starts_with("2,3,6,9,55.04"));
    }

    #[test]
    fn plot_columns() {
        let csv = plot_data_csv(&[2, 3], &[3, 4]).unwrap();
        let header = csv.lines().next().unwrap();
        assert_eq!(header, "m,tight_d2,loose_d2,ratio_d2,tight_d3,loose_d3,ratio_d3");
        for line in csv.lines().skip(1) {
            let v: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
            assert!(v[3] >= 1.0 && v[6] >= 1.0);
        }
    }
}
