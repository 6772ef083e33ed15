//! Writers for sweep artifacts: CSV tables, PGM/SVG heatmaps and the
//! summary text.
//!
//! Numbers are written with Rust's shortest round-trip formatting, so the
//! output never depends on locale. Missing values (gaps from failed
//! parameter values) are empty fields; infinite deaths are the literal
//! `inf`.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use crate::crocker::{CrockerMatrix, Partition};
use crate::persistence::{Barcode, Interval};
use crate::pointcloud::PointCloud;
use crate::sweep::{argmax, changepoint_score, SweepResult};

fn fmt_f(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{v}")
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn ms(d: std::time::Duration) -> String {
    format!("{:.3}", d.as_secs_f64() * 1e3)
}

/// `epsilon,<p_1>,…,<p_T>` then one row per ε with the column counts.
pub fn write_crocker_csv<W: Write>(mut w: W, cm: &CrockerMatrix) -> io::Result<()> {
    write!(w, "epsilon")?;
    for p in &cm.param_values {
        write!(w, ",{}", fmt_f(*p))?;
    }
    writeln!(w)?;
    for (i, eps) in cm.partition.values().iter().enumerate() {
        write!(w, "{}", fmt_f(*eps))?;
        for j in 0..cm.n_params() {
            write!(w, ",{}", opt(cm.get(i, j)))?;
        }
        writeln!(w)?;
    }
    Ok(())
}

fn bad_data(msg: impl Into<String>) -> io::Error {
    io::Error::new(io::ErrorKind::InvalidData, msg.into())
}

/// Parses the format of [`write_crocker_csv`]; the dimension is not stored
/// in the file and must be supplied.
pub fn read_crocker_csv(text: &str, dimension: usize) -> io::Result<CrockerMatrix> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| bad_data("empty file"))?;
    let mut head = header.split(',');
    if head.next() != Some("epsilon") {
        return Err(bad_data("header must start with `epsilon`"));
    }
    let param_values = head
        .map(|s| s.parse::<f64>().map_err(|e| bad_data(format!("param `{s}`: {e}"))))
        .collect::<io::Result<Vec<_>>>()?;
    let mut eps = Vec::new();
    let mut columns: Vec<Option<Vec<u32>>> = vec![Some(Vec::new()); param_values.len()];
    for line in lines.filter(|l| !l.is_empty()) {
        let mut cells = line.split(',');
        let e = cells.next().unwrap_or_default();
        eps.push(
            e.parse::<f64>()
                .map_err(|err| bad_data(format!("epsilon `{e}`: {err}")))?,
        );
        let cells: Vec<&str> = cells.collect();
        if cells.len() != param_values.len() {
            return Err(bad_data(format!(
                "row has {} cells, expected {}",
                cells.len(),
                param_values.len()
            )));
        }
        for (col, cell) in columns.iter_mut().zip(cells) {
            if cell.is_empty() {
                *col = None;
            } else if let Some(c) = col.as_mut() {
                c.push(cell.parse().map_err(|err| bad_data(format!("count `{cell}`: {err}")))?);
            }
        }
    }
    let partition = Partition::new(eps).map_err(|e| bad_data(e.to_string()))?;
    Ok(CrockerMatrix {
        dimension,
        partition,
        param_values,
        columns,
    })
}

/// Columns `dimension,birth,death`, one interval per row.
pub fn write_barcodes_csv<W: Write>(mut w: W, barcodes: &[Barcode]) -> io::Result<()> {
    writeln!(w, "dimension,birth,death")?;
    for bc in barcodes {
        for iv in &bc.intervals {
            writeln!(w, "{},{},{}", bc.dimension, fmt_f(iv.birth), fmt_f(iv.death))?;
        }
    }
    Ok(())
}

pub fn read_barcodes_csv(text: &str) -> io::Result<Vec<Barcode>> {
    let mut lines = text.lines();
    if lines.next() != Some("dimension,birth,death") {
        return Err(bad_data("expected header `dimension,birth,death`"));
    }
    let mut by_dim: Vec<(usize, Vec<Interval>)> = Vec::new();
    for line in lines.filter(|l| !l.is_empty()) {
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 3 {
            return Err(bad_data(format!("bad row `{line}`")));
        }
        let dim: usize = f[0]
            .parse()
            .map_err(|_| bad_data(format!("bad dimension `{}`", f[0])))?;
        let num = |s: &str| -> io::Result<f64> {
            if s == "inf" {
                Ok(f64::INFINITY)
            } else {
                s.parse().map_err(|_| bad_data(format!("bad number `{s}`")))
            }
        };
        let iv = Interval::new(num(f[1])?, num(f[2])?);
        match by_dim.iter_mut().find(|(d, _)| *d == dim) {
            Some((_, v)) => v.push(iv),
            None => by_dim.push((dim, vec![iv])),
        }
    }
    Ok(by_dim.into_iter().map(|(d, v)| Barcode::new(d, v)).collect())
}

/// `source_index,x0,x1,…`, one point per row.
pub fn write_pointcloud_csv<W: Write>(mut w: W, cloud: &PointCloud) -> io::Result<()> {
    write!(w, "source_index")?;
    for c in 0..cloud.dim() {
        write!(w, ",x{c}")?;
    }
    writeln!(w)?;
    for (p, src) in cloud.points().zip(cloud.source_indices()) {
        write!(w, "{src}")?;
        for v in p {
            write!(w, ",{}", fmt_f(*v))?;
        }
        writeln!(w)?;
    }
    Ok(())
}

pub fn write_l1_csv<W: Write>(mut w: W, r: &SweepResult) -> io::Result<()> {
    write!(w, "param")?;
    for d in &r.dimensions {
        write!(w, ",l1_dim{d}")?;
    }
    writeln!(w)?;
    for (j, p) in r.param_values.iter().enumerate() {
        write!(w, "{}", fmt_f(*p))?;
        for curve in &r.l1_curves {
            write!(w, ",{}", opt(curve[j]))?;
        }
        writeln!(w)?;
    }
    Ok(())
}

pub fn write_lyapunov_csv<W: Write>(mut w: W, r: &SweepResult) -> io::Result<()> {
    writeln!(w, "param,lambda,converged_flag")?;
    let Some(curve) = &r.lyapunov else {
        return Ok(());
    };
    for (p, est) in r.param_values.iter().zip(curve) {
        match est {
            Some(e) => writeln!(w, "{},{},{}", fmt_f(*p), fmt_f(e.lambda), e.converged())?,
            None => writeln!(w, "{},,", fmt_f(*p))?,
        }
    }
    Ok(())
}

pub fn write_bifurcation_csv<W: Write>(mut w: W, r: &SweepResult) -> io::Result<()> {
    writeln!(w, "param,value")?;
    for (p, maxima) in r.param_values.iter().zip(&r.bifurcation) {
        for v in maxima.iter().flatten() {
            writeln!(w, "{},{}", fmt_f(*p), fmt_f(*v))?;
        }
    }
    Ok(())
}

/// Milliseconds per stage and parameter value.
pub fn write_timings_csv<W: Write>(mut w: W, r: &SweepResult) -> io::Result<()> {
    write!(w, "param,integrate_ms,subsample_ms,distances_ms")?;
    for d in &r.dimensions {
        write!(w, ",persistence_dim{d}_ms")?;
    }
    for d in &r.dimensions {
        write!(w, ",betti_dim{d}_ms")?;
    }
    writeln!(w, ",bifurcation_ms,lyapunov_ms")?;
    for (p, t) in r.param_values.iter().zip(&r.timings) {
        let Some(t) = t else {
            writeln!(w, "{}{}", fmt_f(*p), ",".repeat(5 + 2 * r.dimensions.len()))?;
            continue;
        };
        write!(
            w,
            "{},{},{},{}",
            fmt_f(*p),
            ms(t.integrate),
            ms(t.subsample),
            ms(t.distances)
        )?;
        for k in 0..r.dimensions.len() {
            write!(w, ",{}", ms(t.persistence.get(k).copied().unwrap_or_default()))?;
        }
        for k in 0..r.dimensions.len() {
            write!(w, ",{}", ms(t.betti.get(k).copied().unwrap_or_default()))?;
        }
        writeln!(w, ",{},{}", ms(t.bifurcation), opt(t.lyapunov.map(ms)))?;
    }
    Ok(())
}

/// Human-readable summary: grid metadata, correlations, change points and
/// gaps. Contains no timings, so repeat runs produce identical text.
pub fn summary_text(r: &SweepResult) -> String {
    let mut s = String::new();
    let n = r.param_values.len();
    let _ = writeln!(s, "system: {}", r.system);
    let _ = writeln!(s, "control_param: {}", r.control_param);
    let _ = writeln!(
        s,
        "param_grid: {}..{} ({} values)",
        fmt_f(r.param_values[0]),
        fmt_f(r.param_values[n - 1]),
        n
    );
    for cm in &r.crocker {
        let v = cm.partition.values();
        let _ = writeln!(
            s,
            "epsilon_grid_dim{}: 0..{} ({} values)",
            cm.dimension,
            fmt_f(v[v.len() - 1]),
            v.len()
        );
    }
    for cm in &r.crocker {
        let scores = changepoint_score(cm);
        if let Some(j) = argmax(&scores) {
            let _ = writeln!(
                s,
                "changepoint_peak_dim{}: {} (score {})",
                cm.dimension,
                fmt_f(r.param_values[j]),
                scores[j]
            );
        }
    }
    for (d, c) in r.correlations() {
        match c {
            Ok(v) => {
                let _ = writeln!(s, "pearson_lambda_l1_dim{d}: {v:.6}");
            }
            Err(e) => {
                let _ = writeln!(s, "pearson_lambda_l1_dim{d}: unavailable ({e})");
            }
        }
    }
    if let Some(curve) = &r.lyapunov {
        let flagged = curve.iter().flatten().filter(|e| !e.converged()).count();
        let _ = writeln!(s, "lyapunov_non_convergent: {flagged}");
    }
    let _ = writeln!(s, "gaps: {}", r.gap_count());
    for (p, f) in r.param_values.iter().zip(&r.failures) {
        if let Some(f) = f {
            let _ = writeln!(s, "  gap at {}: {f}", fmt_f(*p));
        }
    }
    s
}

/// Counts rescaled linearly so that `max_count` maps to 255. The top image
/// row is the largest ε; gap columns are black.
pub fn write_crocker_pgm<W: Write>(mut w: W, cm: &CrockerMatrix) -> io::Result<()> {
    let rows = cm.partition.len();
    let cols = cm.n_params();
    let max = cm.max_count().max(1) as f64;
    write!(w, "P5\n{cols} {rows}\n255\n")?;
    let mut buf = Vec::with_capacity(rows * cols);
    for i in (0..rows).rev() {
        for j in 0..cols {
            let v = cm.get(i, j).unwrap_or(0) as f64;
            buf.push((v / max * 255.0).round() as u8);
        }
    }
    w.write_all(&buf)
}

/// Sidecar for [`write_crocker_pgm`] recording the intensity scale.
pub fn pgm_scale_text(cm: &CrockerMatrix) -> String {
    let v = cm.partition.values();
    let gaps: Vec<String> = cm
        .columns
        .iter()
        .zip(&cm.param_values)
        .filter(|(c, _)| c.is_none())
        .map(|(_, p)| fmt_f(*p))
        .collect();
    format!(
        "dimension: {}\nmax_count: {}\ngray = round(count / max_count * 255)\n\
         rows: epsilon from {} (top) down to {} (bottom), {} values\n\
         columns: {} from {} (left) to {} (right), {} values\ngap_columns: [{}]\n",
        cm.dimension,
        cm.max_count(),
        fmt_f(v[v.len() - 1]),
        fmt_f(v[0]),
        v.len(),
        "param",
        fmt_f(cm.param_values[0]),
        fmt_f(*cm.param_values.last().unwrap()),
        cm.param_values.len(),
        gaps.join(", ")
    )
}

/// Grayscale SVG heatmap with ε and parameter axes.
pub fn crocker_svg(cm: &CrockerMatrix, param_name: &str) -> String {
    const W: f64 = 600.0;
    const H: f64 = 400.0;
    const LEFT: f64 = 70.0;
    const TOP: f64 = 30.0;
    const BOTTOM: f64 = 50.0;
    const RIGHT: f64 = 90.0;
    let rows = cm.partition.len();
    let cols = cm.n_params();
    let cw = W / cols as f64;
    let ch = H / rows as f64;
    let max = cm.max_count().max(1) as f64;
    let eps = cm.partition.values();

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" font-family="sans-serif" font-size="11">"#,
        LEFT + W + RIGHT,
        TOP + H + BOTTOM
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="18" text-anchor="middle" font-size="13">CROCKER plot, dimension {}</text>"#,
        LEFT + W / 2.0,
        cm.dimension
    );
    for j in 0..cols {
        for i in 0..rows {
            let fill = match cm.get(i, j) {
                Some(v) => {
                    let g = 255 - (v as f64 / max * 255.0).round() as u8;
                    format!("rgb({g},{g},{g})")
                }
                None => "rgb(200,60,60)".into(),
            };
            let y = TOP + H - (i + 1) as f64 * ch;
            let _ = writeln!(
                s,
                r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="{fill}"/>"#,
                LEFT + j as f64 * cw,
                y,
                cw + 0.05,
                ch + 0.05
            );
        }
    }
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{W}" height="{H}" fill="none" stroke="black"/>"#
    );
    for t in 0..=4 {
        let f = t as f64 / 4.0;
        let x = LEFT + f * W;
        let pj = ((cols - 1) as f64 * f).round() as usize;
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{0}" x2="{x:.2}" y2="{1}" stroke="black"/><text x="{x:.2}" y="{2}" text-anchor="middle">{3:.4}</text>"#,
            TOP + H,
            TOP + H + 5.0,
            TOP + H + 18.0,
            cm.param_values[pj]
        );
        let y = TOP + H - f * H;
        let ei = ((rows - 1) as f64 * f).round() as usize;
        let _ = writeln!(
            s,
            r#"<line x1="{0}" y1="{y:.2}" x2="{LEFT}" y2="{y:.2}" stroke="black"/><text x="{1}" y="{2:.2}" text-anchor="end">{3:.3}</text>"#,
            LEFT - 5.0,
            LEFT - 8.0,
            y + 4.0,
            eps[ei]
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{param_name}</text>"#,
        LEFT + W / 2.0,
        TOP + H + 38.0
    );
    let _ = writeln!(
        s,
        r#"<text x="18" y="{0}" text-anchor="middle" transform="rotate(-90 18 {0})">epsilon</text>"#,
        TOP + H / 2.0
    );
    // Color bar.
    let bx = LEFT + W + 25.0;
    for k in 0..50 {
        let g = 255 - (k as f64 / 49.0 * 255.0).round() as u8;
        let _ = writeln!(
            s,
            r#"<rect x="{bx}" y="{:.2}" width="15" height="{:.2}" fill="rgb({g},{g},{g})"/>"#,
            TOP + H - (k + 1) as f64 * H / 50.0,
            H / 50.0 + 0.05
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{0}" y="{1}">{2}</text><text x="{0}" y="{3}">0</text>"#,
        bx + 20.0,
        TOP + 8.0,
        cm.max_count(),
        TOP + H
    );
    s.push_str("</svg>\n");
    s
}

fn write_file(dir: &Path, name: &str, bytes: &[u8], out: &mut Vec<PathBuf>) -> io::Result<()> {
    let path = dir.join(name);
    fs::write(&path, bytes)?;
    out.push(path);
    Ok(())
}

fn render(f: impl FnOnce(&mut Vec<u8>) -> io::Result<()>) -> io::Result<Vec<u8>> {
    let mut buf = Vec::new();
    f(&mut buf)?;
    Ok(buf)
}

/// Writes every sweep artifact into `dir` (created if missing) and returns
/// the written paths in a fixed order.
pub fn write_sweep_dir(r: &SweepResult, dir: &Path) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut out = Vec::new();
    for cm in &r.crocker {
        let d = cm.dimension;
        write_file(
            dir,
            &format!("crocker_dim{d}.csv"),
            &render(|b| write_crocker_csv(b, cm))?,
            &mut out,
        )?;
    }
    write_file(dir, "l1_curves.csv", &render(|b| write_l1_csv(b, r))?, &mut out)?;
    write_file(dir, "lyapunov.csv", &render(|b| write_lyapunov_csv(b, r))?, &mut out)?;
    write_file(
        dir,
        "bifurcation.csv",
        &render(|b| write_bifurcation_csv(b, r))?,
        &mut out,
    )?;
    write_file(dir, "timings.csv", &render(|b| write_timings_csv(b, r))?, &mut out)?;
    write_file(dir, "summary.txt", summary_text(r).as_bytes(), &mut out)?;
    for cm in &r.crocker {
        let d = cm.dimension;
        write_file(
            dir,
            &format!("crocker_dim{d}.pgm"),
            &render(|b| write_crocker_pgm(b, cm))?,
            &mut out,
        )?;
        write_file(
            dir,
            &format!("crocker_dim{d}.pgm.txt"),
            pgm_scale_text(cm).as_bytes(),
            &mut out,
        )?;
        write_file(
            dir,
            &format!("crocker_dim{d}.svg"),
            crocker_svg(cm, &r.control_param).as_bytes(),
            &mut out,
        )?;
    }
    Ok(out)
}
