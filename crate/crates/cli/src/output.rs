//! CSV tables and all-or-nothing file output.

use std::fs;
use std::path::{Path, PathBuf};

use qwalk_core::observables::DensityProfile;
use qwalk_core::{ScalarLattice, SpinorLattice};

use crate::CliError;

/// Every density column must integrate to one within this before it is written.
pub const NORM_TOLERANCE: f64 = 1e-6;

/// Twelve significant digits in scientific notation.
pub fn fmt(v: f64) -> String {
    format!("{v:.11e}")
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.iter().map(|v| fmt(*v)).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out
    }

    pub fn spinor(state: &SpinorLattice) -> Self {
        let mut t = Table::new(&["position", "rho", "re_up", "im_up", "re_dn", "im_dn"]);
        for n in state.sites() {
            let [u, d] = state.get(n).unwrap();
            t.push(vec![state.position(n), u.norm_sqr() + d.norm_sqr(), u.re, u.im, d.re, d.im]);
        }
        t
    }

    pub fn scalar(state: &ScalarLattice) -> Self {
        let mut t = Table::new(&["position", "rho", "re", "im"]);
        for n in state.sites() {
            let v = state.get(n).unwrap();
            t.push(vec![n as f64, v.norm_sqr(), v.re, v.im]);
        }
        t
    }

    /// Densities sharing one set of positions, one column each.
    pub fn densities(columns: &[(&str, &DensityProfile)]) -> Result<Self, CliError> {
        let first = columns.first().expect("at least one density column").1;
        let mut header = vec!["position"];
        header.extend(columns.iter().map(|(name, _)| *name));
        for (name, p) in columns {
            if p.positions != first.positions {
                return Err(CliError::Check(format!("column {name} is on a different grid")));
            }
        }
        let mut t = Table::new(&header);
        for (i, x) in first.positions.iter().enumerate() {
            let mut row = vec![*x];
            row.extend(columns.iter().map(|(_, p)| p.rho[i]));
            t.push(row);
        }
        Ok(t)
    }
}

/// Refuses densities whose total weight strays from one.
pub fn check_normalized(name: &str, profile: &DensityProfile) -> Result<(), CliError> {
    let total = profile.total();
    if (total - 1.0).abs() > NORM_TOLERANCE {
        return Err(CliError::Check(format!(
            "density {name} integrates to {total:.9}, not 1 within {NORM_TOLERANCE:e}; widen the lattice"
        )));
    }
    Ok(())
}

/// Files written so far by one command; removed again unless committed.
#[derive(Debug, Default)]
pub struct Outputs {
    written: Vec<PathBuf>,
    committed: bool,
}

impl Outputs {
    pub fn write(&mut self, path: &Path, table: &Table) -> Result<(), CliError> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        }
        self.written.push(path.to_path_buf());
        fs::write(path, table.render()).map_err(|e| CliError::io(path, e))
    }

    pub fn commit(mut self) -> Vec<PathBuf> {
        self.committed = true;
        std::mem::take(&mut self.written)
    }
}

impl Drop for Outputs {
    fn drop(&mut self) {
        if !self.committed {
            for p in &self.written {
                let _ = fs::remove_file(p);
            }
        }
    }
}
