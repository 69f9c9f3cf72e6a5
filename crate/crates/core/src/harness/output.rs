use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use crate::error::HarnessError;
use crate::gaussian::{widths, TrajectorySample};
use crate::grid::{GridSample, GridSpec};

use super::compare::ComparisonRow;

/// Formats with 17 significant digits, enough to round-trip an `f64`.
pub fn number(v: f64) -> String {
    format!("{v:.16e}")
}

fn optional(v: Option<f64>) -> String {
    v.map(number).unwrap_or_default()
}

/// Writes `contents` through a temporary file in the same directory, then
/// renames it into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), HarnessError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| HarnessError::io(dir, e))?;
    tmp.write_all(contents.as_bytes())
        .map_err(|e| HarnessError::io(tmp.path(), e))?;
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        // Temporary files are created owner-only.
        std::fs::set_permissions(tmp.path(), std::fs::Permissions::from_mode(0o644))
            .map_err(|e| HarnessError::io(tmp.path(), e))?;
    }
    tmp.persist(path)
        .map_err(|e| HarnessError::io(path, e.error))?;
    Ok(())
}

fn push_row(out: &mut String, values: impl IntoIterator<Item = String>) {
    let mut first = true;
    for v in values {
        if !first {
            out.push(',');
        }
        out.push_str(&v);
        first = false;
    }
    out.push('\n');
}

pub const TRAJECTORY_HEADER: &str = "z,q,p,re_b,im_b,norm,alpha,delta_q,delta_p";
pub const OBSERVABLES_HEADER: &str = "z,norm,mean_q,mean_p,delta_q,edge_mass";
pub const COMPARISON_HEADER: &str = "z,q_candidate,q_reference,q_error,norm_candidate,norm_reference,norm_rel_error,intensity_l2";

pub fn trajectory_csv(samples: &[TrajectorySample]) -> String {
    let mut out = String::from(TRAJECTORY_HEADER);
    out.push('\n');
    for s in samples {
        let p = &s.params;
        let (dq, dp) = widths(p).unwrap_or((f64::NAN, f64::NAN));
        push_row(
            &mut out,
            [s.z, p.q, p.p, p.b.re, p.b.im, p.norm, p.alpha, dq, dp].map(number),
        );
    }
    out
}

pub fn observables_csv(samples: &[GridSample]) -> String {
    let mut out = String::from(OBSERVABLES_HEADER);
    out.push('\n');
    for s in samples {
        let o = &s.observables;
        push_row(
            &mut out,
            [s.z, o.norm, o.mean_q, o.mean_p, o.delta_q, o.edge_mass].map(number),
        );
    }
    out
}

pub fn comparison_csv(rows: &[ComparisonRow]) -> String {
    let mut out = String::from(COMPARISON_HEADER);
    out.push('\n');
    for r in rows {
        let mut cells: Vec<String> = [
            r.z,
            r.q_candidate,
            r.q_reference,
            r.q_error,
            r.norm_candidate,
            r.norm_reference,
            r.norm_rel_error,
        ]
        .map(number)
        .to_vec();
        cells.push(optional(r.intensity_l2));
        push_row(&mut out, cells);
    }
    out
}

/// Intensity matrix: a header row `z,x_0,x_k,..`, then one row per sample
/// starting with its `z`. Only every `column_stride`-th grid point is kept.
pub fn heatmap_csv(spec: &GridSpec, zs: &[f64], rows: &[Vec<f64>], column_stride: usize) -> String {
    let stride = column_stride.max(1);
    let mut out = String::from("z");
    for j in (0..spec.n_points()).step_by(stride) {
        let _ = write!(out, ",{}", number(spec.x(j)));
    }
    out.push('\n');
    for (z, row) in zs.iter().zip(rows) {
        push_row(
            &mut out,
            std::iter::once(number(*z)).chain(row.iter().step_by(stride).map(|v| number(*v))),
        );
    }
    out
}

/// Collects written paths for the run summary.
#[derive(Debug, Default)]
pub(crate) struct Writer {
    pub dir: PathBuf,
    pub files: Vec<PathBuf>,
}

impl Writer {
    pub fn new(dir: PathBuf) -> Self {
        Self {
            dir,
            files: Vec::new(),
        }
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<(), HarnessError> {
        let path = self.dir.join(name);
        write_atomic(&path, contents)?;
        self.files.push(path);
        Ok(())
    }
}
