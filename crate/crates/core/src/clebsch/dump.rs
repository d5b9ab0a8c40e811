//! Plain-text field dump: `key = value` header lines, a column banner, then
//! `nz·nr` rows `z r phi G` (z outer, r inner) with 17 significant digits.

use std::fmt::Write as _;
use std::path::Path;

use ndarray::Array2;

use super::{ClebschField, HalfPlaneGrid};
use crate::error::{Error, Result};
use crate::fields::FieldParams;

const BANNER: &str = "# z r phi G";

pub fn write_dump_string(field: &ClebschField, params: &FieldParams) -> String {
    let g = field.grid();
    let mut s = String::with_capacity(80 * g.nz() * g.nr() + 256);
    s.push_str("# forcefree field dump\n");
    let _ = writeln!(s, "z_min = {:.16e}", g.z_min());
    let _ = writeln!(s, "z_max = {:.16e}", g.z_max());
    let _ = writeln!(s, "r_max = {:.16e}", g.r_max());
    let _ = writeln!(s, "nz = {}", g.nz());
    let _ = writeln!(s, "nr = {}", g.nr());
    let _ = writeln!(s, "W = {:.16e}", params.w);
    let _ = writeln!(s, "lambda = {:.16e}", params.lambda);
    let _ = writeln!(s, "gamma = {:.16e}", params.gamma);
    s.push_str(BANNER);
    s.push('\n');
    for i in 0..g.nz() {
        for j in 0..g.nr() {
            let _ = writeln!(
                s,
                "{:.16e} {:.16e} {:.16e} {:.16e}",
                g.z(i),
                g.r(j),
                field.phi()[[i, j]],
                field.g()[[i, j]]
            );
        }
    }
    s
}

pub fn write_dump(path: impl AsRef<Path>, field: &ClebschField, params: &FieldParams) -> Result<()> {
    std::fs::write(path, write_dump_string(field, params))?;
    Ok(())
}

pub fn read_dump(path: impl AsRef<Path>) -> Result<(ClebschField, FieldParams)> {
    read_dump_str(&std::fs::read_to_string(path)?)
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

#[derive(Default)]
struct Header {
    z_min: Option<f64>,
    z_max: Option<f64>,
    r_max: Option<f64>,
    nz: Option<usize>,
    nr: Option<usize>,
    w: Option<f64>,
    lambda: Option<f64>,
    gamma: Option<f64>,
}

fn num<T: std::str::FromStr>(line: usize, key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| perr(line, format!("bad value for {key}: {v:?}")))
}

pub fn read_dump_str(text: &str) -> Result<(ClebschField, FieldParams)> {
    let mut h = Header::default();
    let mut lines = text.lines().enumerate().map(|(k, l)| (k + 1, l.trim()));
    let mut banner_line = 0;
    for (ln, line) in lines.by_ref() {
        if line == BANNER {
            banner_line = ln;
            break;
        }
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| perr(ln, format!("expected `key = value`, got {line:?}")))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "z_min" => h.z_min = Some(num(ln, key, value)?),
            "z_max" => h.z_max = Some(num(ln, key, value)?),
            "r_max" => h.r_max = Some(num(ln, key, value)?),
            "nz" => h.nz = Some(num(ln, key, value)?),
            "nr" => h.nr = Some(num(ln, key, value)?),
            "W" => h.w = Some(num(ln, key, value)?),
            "lambda" => h.lambda = Some(num(ln, key, value)?),
            "gamma" => h.gamma = Some(num(ln, key, value)?),
            _ => return Err(perr(ln, format!("unknown header key {key:?}"))),
        }
    }
    if banner_line == 0 {
        return Err(perr(text.lines().count() + 1, "missing column banner `# z r phi G`"));
    }
    let missing = |k: &str| perr(banner_line, format!("header is missing {k}"));
    let grid = HalfPlaneGrid::new(
        h.z_min.ok_or_else(|| missing("z_min"))?,
        h.z_max.ok_or_else(|| missing("z_max"))?,
        h.r_max.ok_or_else(|| missing("r_max"))?,
        h.nz.ok_or_else(|| missing("nz"))?,
        h.nr.ok_or_else(|| missing("nr"))?,
    )
    .map_err(|e| perr(banner_line, e.to_string()))?;
    let params = FieldParams::new(
        h.w.ok_or_else(|| missing("W"))?,
        h.lambda.ok_or_else(|| missing("lambda"))?,
        h.gamma.ok_or_else(|| missing("gamma"))?,
    )
    .map_err(|e| perr(banner_line, e.to_string()))?;

    let (nz, nr) = grid.shape();
    let mut phi = Array2::zeros((nz, nr));
    let mut g = Array2::zeros((nz, nr));
    let tol = 1e-9 * (grid.z_max().abs().max(grid.z_min().abs()) + grid.r_max());
    let mut k = 0usize;
    let mut last = banner_line;
    for (ln, line) in lines {
        last = ln;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if k == nz * nr {
            return Err(perr(ln, format!("more than {} data rows", nz * nr)));
        }
        let vals: Vec<f64> = line
            .split_whitespace()
            .map(|t| t.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| perr(ln, format!("non-numeric data row {line:?}")))?;
        if vals.len() != 4 {
            return Err(perr(ln, format!("expected 4 columns, found {}", vals.len())));
        }
        let (i, j) = (k / nr, k % nr);
        if (vals[0] - grid.z(i)).abs() > tol || (vals[1] - grid.r(j)).abs() > tol {
            return Err(perr(
                ln,
                format!("node ({}, {}) does not match grid node ({i}, {j})", vals[0], vals[1]),
            ));
        }
        if !vals[2].is_finite() || !vals[3].is_finite() {
            return Err(perr(ln, "non-finite potential"));
        }
        if j == 0 && (vals[2] != 0.0 || vals[3] != 0.0) {
            return Err(perr(ln, "potentials must vanish on the axis"));
        }
        phi[[i, j]] = vals[2];
        g[[i, j]] = vals[3];
        k += 1;
    }
    if k != nz * nr {
        return Err(perr(last + 1, format!("expected {} data rows, found {k}", nz * nr)));
    }
    let field = ClebschField::from_samples(grid, phi, g).map_err(|e| perr(last, e.to_string()))?;
    Ok((field, params))
}
