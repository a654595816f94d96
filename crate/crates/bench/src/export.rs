//! CSV tables and static SVG scatter plots of a campaign.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

use crate::campaign::ExperimentSummary;

pub const SUMMARY_HEADER: [&str; 6] = [
    "algo",
    "iter_mean",
    "feval_mean",
    "time_ms_mean",
    "stepsize_mean",
    "failures",
];

pub const RAW_HEADER: [&str; 9] = [
    "trial",
    "algo",
    "x0_hash",
    "status",
    "iters",
    "feval",
    "time_ms",
    "stepsize_mean",
    "dual_warnings",
];

/// Columns that depend on the machine rather than the seed.
pub const TIME_COLUMNS: [&str; 2] = ["time_ms_mean", "time_ms"];

#[derive(Debug, Clone, Default)]
pub struct Exported {
    pub files: Vec<PathBuf>,
    /// Things the user should know, e.g. why a plot was skipped.
    pub notices: Vec<String>,
}

fn num(v: f64) -> String {
    if v.is_nan() {
        String::new()
    } else {
        format!("{v}")
    }
}

fn write_csv(path: &Path, header: &[String], rows: &[Vec<String>]) -> Result<()> {
    let mut w =
        csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    w.write_record(header)
        .and_then(|_| rows.iter().try_for_each(|r| w.write_record(r)))
        .and_then(|_| w.flush().map_err(csv::Error::from))
        .with_context(|| format!("writing {}", path.display()))
}

pub fn export_results(summary: &ExperimentSummary, dir: &Path) -> Result<Exported> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut out = Exported::default();
    let strings = |h: &[&str]| h.iter().map(|s| s.to_string()).collect::<Vec<_>>();

    let path = dir.join("summary.csv");
    let rows: Vec<Vec<String>> = summary
        .rows
        .iter()
        .map(|r| {
            vec![
                r.algo.clone(),
                num(r.iter_mean),
                num(r.feval_mean),
                num(r.time_ms_mean),
                num(r.stepsize_mean),
                r.failures.to_string(),
            ]
        })
        .collect();
    write_csv(&path, &strings(&SUMMARY_HEADER), &rows)?;
    out.files.push(path);

    let path = dir.join("raw.csv");
    let rows: Vec<Vec<String>> = summary
        .raw
        .iter()
        .map(|r| {
            vec![
                r.trial.to_string(),
                r.algo.clone(),
                r.x0_hash.clone(),
                r.status.as_str().to_string(),
                r.iters.to_string(),
                r.feval.to_string(),
                num(r.time_ms),
                r.stepsize_mean.map(num).unwrap_or_default(),
                r.dual_warnings.to_string(),
            ]
        })
        .collect();
    write_csv(&path, &strings(&RAW_HEADER), &rows)?;
    out.files.push(path);

    let path = dir.join("pareto.csv");
    let mut header = strings(&["trial", "algo", "status"]);
    header.extend((1..=summary.m).map(|i| format!("F{i}")));
    header.extend((1..=summary.n).map(|j| format!("x{j}")));
    let rows: Vec<Vec<String>> = summary
        .raw
        .iter()
        .map(|r| {
            let mut row = vec![
                r.trial.to_string(),
                r.algo.clone(),
                r.status.as_str().to_string(),
            ];
            row.extend(r.final_f.iter().map(|&v| num(v)));
            row.extend(r.final_x.iter().map(|&v| num(v)));
            row
        })
        .collect();
    write_csv(&path, &header, &rows)?;
    out.files.push(path);

    let algos: Vec<&str> = summary.rows.iter().map(|r| r.algo.as_str()).collect();
    let series = |pick: &dyn Fn(&crate::campaign::RawRow) -> (f64, f64)| -> Vec<Series> {
        algos
            .iter()
            .map(|&a| Series {
                name: a.to_string(),
                points: summary
                    .raw
                    .iter()
                    .filter(|r| r.algo == a)
                    .map(pick)
                    .collect(),
            })
            .collect()
    };
    if summary.m == 2 {
        let svg = scatter_svg(
            &format!("{}: final objective values", summary.problem),
            "F1",
            "F2",
            &series(&|r| (r.final_f[0], r.final_f[1])),
        );
        let path = dir.join("pareto_values.svg");
        fs::write(&path, svg).with_context(|| format!("writing {}", path.display()))?;
        out.files.push(path);
    } else {
        out.notices.push(format!(
            "{} has m = {} objectives; value-space scatter is only drawn for m = 2, see pareto.csv",
            summary.problem, summary.m
        ));
    }
    if summary.n == 2 {
        let svg = scatter_svg(
            &format!("{}: final points", summary.problem),
            "x1",
            "x2",
            &series(&|r| (r.final_x[0], r.final_x[1])),
        );
        let path = dir.join("pareto_variables.svg");
        fs::write(&path, svg).with_context(|| format!("writing {}", path.display()))?;
        out.files.push(path);
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| {
            (l.min(v), h.max(v))
        });
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    let pad = if hi > lo {
        0.05 * (hi - lo)
    } else {
        0.5 * lo.abs().max(1.0)
    };
    (lo - pad, hi + pad)
}

/// Scatter plot with axes, five ticks per axis and a legend.
pub fn scatter_svg(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    const W: f64 = 640.0;
    const H: f64 = 480.0;
    const LEFT: f64 = 80.0;
    const RIGHT: f64 = 150.0;
    const TOP: f64 = 40.0;
    const BOTTOM: f64 = 60.0;
    let all = || series.iter().flat_map(|s| s.points.iter());
    let (x0, x1) = range(all().map(|p| p.0));
    let (y0, y1) = range(all().map(|p| p.1));
    let pw = W - LEFT - RIGHT;
    let ph = H - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| TOP + ph - (y - y0) / (y1 - y0) * ph;

    let mut s = String::new();
    s.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" font-family=\"sans-serif\" font-size=\"12\">\n"
    ));
    s.push_str(&format!(
        "<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>\n"
    ));
    s.push_str(&format!(
        "<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
        LEFT + pw / 2.0,
        escape(title)
    ));
    s.push_str(&format!(
        "<rect x=\"{LEFT}\" y=\"{TOP}\" width=\"{pw}\" height=\"{ph}\" fill=\"none\" stroke=\"black\"/>\n"
    ));
    for k in 0..=4 {
        let f = k as f64 / 4.0;
        let (xv, yv) = (x0 + f * (x1 - x0), y0 + f * (y1 - y0));
        let (px, py) = (sx(xv), sy(yv));
        s.push_str(&format!(
            "<line x1=\"{px:.2}\" y1=\"{b}\" x2=\"{px:.2}\" y2=\"{b2}\" stroke=\"black\"/>\n\
             <text x=\"{px:.2}\" y=\"{t}\" text-anchor=\"middle\">{xv:.3e}</text>\n",
            b = TOP + ph,
            b2 = TOP + ph + 5.0,
            t = TOP + ph + 20.0,
        ));
        s.push_str(&format!(
            "<line x1=\"{l}\" y1=\"{py:.2}\" x2=\"{LEFT}\" y2=\"{py:.2}\" stroke=\"black\"/>\n\
             <text x=\"{t}\" y=\"{py:.2}\" text-anchor=\"end\" dominant-baseline=\"middle\">{yv:.3e}</text>\n",
            l = LEFT - 5.0,
            t = LEFT - 8.0,
        ));
    }
    s.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
        LEFT + pw / 2.0,
        H - 15.0,
        escape(x_label)
    ));
    s.push_str(&format!(
        "<text x=\"18\" y=\"{y}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {y})\">{}</text>\n",
        escape(y_label),
        y = TOP + ph / 2.0,
    ));
    for (k, ser) in series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        s.push_str(&format!("<g fill=\"{color}\" fill-opacity=\"0.7\">\n"));
        for &(x, y) in ser
            .points
            .iter()
            .filter(|p| p.0.is_finite() && p.1.is_finite())
        {
            s.push_str(&format!(
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\"/>\n",
                sx(x),
                sy(y)
            ));
        }
        s.push_str("</g>\n");
        let ly = TOP + 10.0 + 20.0 * k as f64;
        let lx = W - RIGHT + 15.0;
        s.push_str(&format!(
            "<circle cx=\"{lx}\" cy=\"{ly}\" r=\"4\" fill=\"{color}\"/>\n\
             <text x=\"{}\" y=\"{ly}\" dominant-baseline=\"middle\">{}</text>\n",
            lx + 10.0,
            escape(&ser.name)
        ));
    }
    s.push_str("</svg>\n");
    s
}
