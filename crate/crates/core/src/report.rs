//! Result tables (markdown, CSV) and bar charts (SVG) for benchmark reports.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::regress::{EvalReport, MetricBlock};

pub const TABLE_COLUMNS: [&str; 10] = [
    "Algorithm",
    "TT",
    "R²(Train)",
    "MAE(Train)",
    "MSE(Train)",
    "MAPE(Train)",
    "R²(Val)",
    "MAE(Val)",
    "MSE(Val)",
    "MAPE(Val)",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Md,
    Csv,
    Svg,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "md" => Ok(Format::Md),
            "csv" => Ok(Format::Csv),
            "svg" => Ok(Format::Svg),
            _ => Err(Error::config(
                "format",
                format!("expected md, csv or svg, got `{s}`"),
            )),
        }
    }
}

/// The nine numeric cells of a row; `None` where a metric is undefined.
pub fn row_values(r: &EvalReport) -> [Option<f64>; 9] {
    let block = |m: &MetricBlock| [m.r2, Some(m.mae), Some(m.mse), m.mape_pct];
    let [a, b, c, d] = block(&r.train);
    let [e, f, g, h] = block(&r.val);
    [Some(r.training_time_s), a, b, c, d, e, f, g, h]
}

fn cell(v: Option<f64>, decimals: usize) -> String {
    match v {
        Some(v) => format!("{v:.decimals$}"),
        None => "n/a".to_string(),
    }
}

pub fn to_markdown(reports: &[EvalReport]) -> String {
    let mut s = String::new();
    if let Some(r) = reports.first() {
        let _ = writeln!(
            s,
            "Target: `{}`, validation fraction {}, seed {}\n",
            r.target, r.split.val_fraction, r.split.seed
        );
    }
    let _ = writeln!(s, "| {} |", TABLE_COLUMNS.join(" | "));
    let _ = writeln!(s, "|{}", "---|".repeat(TABLE_COLUMNS.len()));
    for r in reports {
        let cells: Vec<String> = row_values(r).iter().map(|v| cell(*v, 3)).collect();
        let _ = writeln!(s, "| {} | {} |", r.algorithm, cells.join(" | "));
    }
    let excluded: Vec<String> = reports
        .iter()
        .filter(|r| r.train.mape_excluded + r.val.mape_excluded > 0)
        .map(|r| {
            format!(
                "{} ({} train, {} val)",
                r.algorithm, r.train.mape_excluded, r.val.mape_excluded
            )
        })
        .collect();
    if !excluded.is_empty() {
        let _ = writeln!(
            s,
            "\nMAPE skips rows whose target is 0: {}.",
            excluded.join(", ")
        );
    }
    s
}

/// Numeric cells of every table row in a markdown report, keyed by algorithm.
pub fn parse_markdown(md: &str) -> Result<Vec<(String, Vec<Option<f64>>)>> {
    let mut out = Vec::new();
    for line in md.lines().filter(|l| l.starts_with('|')) {
        let cells: Vec<&str> = line.trim_matches('|').split('|').map(str::trim).collect();
        if cells[0] == TABLE_COLUMNS[0] || cells[0].starts_with("---") {
            continue;
        }
        if cells.len() != TABLE_COLUMNS.len() {
            return Err(Error::Csv(format!(
                "table row has {} cells: {line}",
                cells.len()
            )));
        }
        let values = cells[1..]
            .iter()
            .map(|c| match *c {
                "n/a" => Ok(None),
                c => c
                    .parse::<f64>()
                    .map(Some)
                    .map_err(|e| Error::Csv(format!("`{c}`: {e}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        out.push((cells[0].to_string(), values));
    }
    Ok(out)
}

pub fn to_csv(reports: &[EvalReport]) -> String {
    let mut s = TABLE_COLUMNS.join(",");
    s.push('\n');
    for r in reports {
        s.push_str(&r.algorithm);
        for v in row_values(r) {
            s.push(',');
            if let Some(v) = v {
                s.push_str(&v.to_string());
            }
        }
        s.push('\n');
    }
    s
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 360.0;
const MARGIN: (f64, f64, f64, f64) = (60.0, 20.0, 40.0, 50.0); // left, right, top, bottom
const COLORS: [&str; 2] = ["#4e79a7", "#f28e2b"];

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Grouped bar chart: one group per category, one bar per series.
pub fn bar_chart(title: &str, categories: &[String], series: &[(&str, Vec<f64>)]) -> String {
    let values = series.iter().flat_map(|(_, v)| v.iter().copied());
    let (lo, hi) = values.fold((0.0f64, 0.0f64), |(a, b), v| (a.min(v), b.max(v)));
    let hi = if hi <= lo { lo + 1.0 } else { hi };
    let (ml, mr, mt, mb) = MARGIN;
    let plot_w = WIDTH - ml - mr;
    let plot_h = HEIGHT - mt - mb;
    let y_of = |v: f64| mt + plot_h * (hi - v) / (hi - lo);
    let group_w = plot_w / categories.len().max(1) as f64;
    let bar_w = group_w * 0.8 / series.len().max(1) as f64;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        xml_escape(title)
    );
    let zero = y_of(0.0);
    let _ = writeln!(
        s,
        r#"<line x1="{ml}" y1="{zero:.2}" x2="{:.2}" y2="{zero:.2}" stroke="black"/>"#,
        WIDTH - mr
    );
    let _ = writeln!(
        s,
        r#"<line x1="{ml}" y1="{mt}" x2="{ml}" y2="{:.2}" stroke="black"/>"#,
        mt + plot_h
    );
    for k in 0..=4 {
        let v = lo + (hi - lo) * k as f64 / 4.0;
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{v:.3}</text>"#,
            ml - 5.0,
            y_of(v) + 4.0
        );
    }
    for (c, name) in categories.iter().enumerate() {
        let gx = ml + group_w * c as f64 + group_w * 0.1;
        for (k, (_, vals)) in series.iter().enumerate() {
            let v = vals[c];
            let (top, bottom) = (y_of(v.max(0.0)), y_of(v.min(0.0)));
            let _ = writeln!(
                s,
                r#"<rect x="{:.2}" y="{top:.2}" width="{bar_w:.2}" height="{:.2}" fill="{}"><title>{} {v}</title></rect>"#,
                gx + bar_w * k as f64,
                bottom - top,
                COLORS[k % COLORS.len()],
                xml_escape(name)
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            ml + group_w * (c as f64 + 0.5),
            mt + plot_h + 18.0,
            xml_escape(name)
        );
    }
    for (k, (label, _)) in series.iter().enumerate() {
        let x = ml + 10.0 + 110.0 * k as f64;
        let y = HEIGHT - 12.0;
        let _ = writeln!(
            s,
            r#"<rect x="{x}" y="{}" width="10" height="10" fill="{}"/>"#,
            y - 9.0,
            COLORS[k % COLORS.len()]
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{y}">{}</text>"#,
            x + 14.0,
            xml_escape(label)
        );
    }
    s.push_str("</svg>\n");
    s
}

pub fn r2_chart(reports: &[EvalReport]) -> String {
    let cats: Vec<String> = reports.iter().map(|r| r.algorithm.clone()).collect();
    let train = reports.iter().map(|r| r.train.r2.unwrap_or(0.0)).collect();
    let val = reports.iter().map(|r| r.val.r2.unwrap_or(0.0)).collect();
    bar_chart(
        "R² by algorithm",
        &cats,
        &[("train", train), ("validation", val)],
    )
}

pub fn time_chart(reports: &[EvalReport]) -> String {
    let cats: Vec<String> = reports.iter().map(|r| r.algorithm.clone()).collect();
    let tt = reports.iter().map(|r| r.training_time_s).collect();
    bar_chart("Training time (s)", &cats, &[("training time", tt)])
}

fn write(path: PathBuf, contents: &str) -> Result<PathBuf> {
    std::fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

/// Write the report in `format`. `out` is the file path for md/csv; for svg
/// it is a stem, and `<stem>_r2.svg` plus `<stem>_time.svg` are written.
pub fn render(reports: &[EvalReport], format: Format, out: &Path) -> Result<Vec<PathBuf>> {
    if reports.is_empty() {
        return Err(Error::config("report", "no results to render"));
    }
    match format {
        Format::Md => Ok(vec![write(out.to_path_buf(), &to_markdown(reports))?]),
        Format::Csv => Ok(vec![write(out.to_path_buf(), &to_csv(reports))?]),
        Format::Svg => {
            let stem = out.with_extension("");
            let stem = stem.to_string_lossy();
            Ok(vec![
                write(PathBuf::from(format!("{stem}_r2.svg")), &r2_chart(reports))?,
                write(
                    PathBuf::from(format!("{stem}_time.svg")),
                    &time_chart(reports),
                )?,
            ])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataprep::Weighting;
    use crate::regress::{RegressorSpec, SplitInfo};

    fn block(r2: Option<f64>, mae: f64) -> MetricBlock {
        MetricBlock {
            n: 10,
            r2,
            mae,
            mse: mae * mae,
            rmse: mae,
            mape_pct: Some(mae * 10.0),
            mape_excluded: 0,
        }
    }

    fn report(alg: &str, r2: f64) -> EvalReport {
        EvalReport {
            algorithm: alg.to_string(),
            spec: RegressorSpec::ols(),
            target: "infected".into(),
            training_time_s: 0.0123,
            train: block(Some(r2), 0.5),
            val: block(Some(r2 - 0.01), 0.75),
            split: SplitInfo {
                val_fraction: 0.2,
                seed: 1,
                n_train: 8,
                n_val: 2,
                weighting: Weighting::None,
                features: vec!["a".into()],
            },
            cv: None,
        }
    }

    #[test]
    fn markdown_round_trips() {
        let mut rs = vec![report("RF", 0.99), report("DT", 1.0), report("KNN", 0.94)];
        rs[2].val.r2 = None;
        let md = to_markdown(&rs);
        let parsed = parse_markdown(&md).unwrap();
        assert_eq!(parsed.len(), 3);
        for ((alg, vals), r) in parsed.iter().zip(&rs) {
            assert_eq!(alg, &r.algorithm);
            for (got, want) in vals.iter().zip(row_values(r)) {
                match (got, want) {
                    (Some(g), Some(w)) => assert!((g - w).abs() <= 5e-4, "{g} vs {w}"),
                    (None, None) => {}
                    other => panic!("{other:?}"),
                }
            }
        }
    }

    #[test]
    fn header_order() {
        let md = to_markdown(&[report("LiR", 0.5)]);
        assert!(md.contains(
            "| Algorithm | TT | R²(Train) | MAE(Train) | MSE(Train) | MAPE(Train) | R²(Val) |"
        ));
        let csv = to_csv(&[report("LiR", 0.5)]);
        assert!(csv.starts_with("Algorithm,TT,R²(Train),MAE(Train)"));
        assert_eq!(csv.lines().count(), 2);
    }

    #[test]
    fn one_bar_per_model_per_series() {
        let svg = r2_chart(&[report("RF", 0.9)]);
        assert_eq!(svg.matches("<rect").count(), 2 + 2); // two bars plus two legend swatches
        let svg = time_chart(&[report("RF", 0.9)]);
        assert_eq!(svg.matches("<rect").count(), 1 + 1);
    }

    #[test]
    fn bars_follow_input_order() {
        let rs: Vec<EvalReport> = [("a", 0.99), ("b", 1.0), ("c", 1.0), ("d", 0.94)]
            .iter()
            .map(|(n, r)| report(n, *r))
            .collect();
        let svg = r2_chart(&rs);
        let pos: Vec<usize> = ["<title>a ", "<title>b ", "<title>c ", "<title>d "]
            .iter()
            .map(|t| svg.find(t).unwrap())
            .collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn mape_exclusions_noted() {
        let mut r = report("LiR", 0.5);
        r.val.mape_excluded = 3;
        assert!(to_markdown(&[r]).contains("LiR (0 train, 3 val)"));
    }
}
