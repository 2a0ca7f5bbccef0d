//! Report artifacts: every visualization is a CSV of the plotted numbers
//! plus a self-contained SVG drawing of them.

use std::fmt::Write as _;

pub const VISUALIZATIONS: &[&str] = &["entropy_curve", "entanglement_histogram", "distribution_overlay"];

const W: f64 = 720.0;
const H: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 180.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;
const PALETTE: &[&str] = &[
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn header(title: &str, xlabel: &str, ylabel: &str) -> String {
    let mut s = String::new();
    let _ = write!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">
<rect width="100%" height="100%" fill="white"/>
<text x="{}" y="22" text-anchor="middle" font-size="15">{}</text>
<line x1="{LEFT}" y1="{}" x2="{}" y2="{}" stroke="black"/>
<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{}" stroke="black"/>
<text x="{}" y="{}" text-anchor="middle">{}</text>
<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>
"#,
        (LEFT + W - RIGHT) / 2.0,
        esc(title),
        H - BOTTOM,
        W - RIGHT,
        H - BOTTOM,
        H - BOTTOM,
        (LEFT + W - RIGHT) / 2.0,
        H - 12.0,
        esc(xlabel),
        (TOP + H - BOTTOM) / 2.0,
        (TOP + H - BOTTOM) / 2.0,
        esc(ylabel),
    );
    s
}

fn y_ticks(s: &mut String, lo: f64, hi: f64) {
    for i in 0..=4 {
        let v = lo + (hi - lo) * i as f64 / 4.0;
        let y = H - BOTTOM - (H - TOP - BOTTOM) * i as f64 / 4.0;
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{:.1}" text-anchor="end">{}</text>"#,
            LEFT - 6.0,
            y + 4.0,
            fmt_tick(v)
        );
    }
}

fn fmt_tick(v: f64) -> String {
    if v == 0.0 || (v.abs() >= 0.01 && v.abs() < 1e4) {
        format!("{v:.3}")
            .trim_end_matches('0')
            .trim_end_matches('.')
            .to_string()
    } else {
        format!("{v:.2e}")
    }
}

fn legend(s: &mut String, labels: &[String]) {
    for (i, label) in labels.iter().enumerate().take(20) {
        let y = TOP + 16.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<rect x="{}" y="{}" width="10" height="10" fill="{}"/><text x="{}" y="{}">{}</text>"#,
            W - RIGHT + 12.0,
            y,
            PALETTE[i % PALETTE.len()],
            W - RIGHT + 26.0,
            y + 9.0,
            esc(label)
        );
    }
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if hi > lo {
        (lo, hi)
    } else {
        (lo - 0.5, hi + 0.5)
    }
}

/// Polyline chart, one series per label.
pub fn line_chart(title: &str, xlabel: &str, ylabel: &str, series: &[(String, Vec<(f64, f64)>)]) -> String {
    let mut s = header(title, xlabel, ylabel);
    let (x0, x1) = bounds(series.iter().flat_map(|(_, p)| p.iter().map(|q| q.0)));
    let (y0, y1) = bounds(series.iter().flat_map(|(_, p)| p.iter().map(|q| q.1)));
    let (y0, y1) = (y0.min(0.0), y1);
    y_ticks(&mut s, y0, y1);
    let _ = writeln!(s, r#"<text x="{LEFT}" y="{}" text-anchor="middle">{}</text>"#, H - BOTTOM + 16.0, fmt_tick(x0));
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        W - RIGHT,
        H - BOTTOM + 16.0,
        fmt_tick(x1)
    );
    let px = |x: f64| LEFT + (x - x0) / (x1 - x0) * (W - LEFT - RIGHT);
    let py = |y: f64| H - BOTTOM - (y - y0) / (y1 - y0) * (H - TOP - BOTTOM);
    for (i, (_, pts)) in series.iter().enumerate() {
        let path: Vec<String> = pts
            .iter()
            .filter(|(_, y)| y.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{}" stroke-width="1.5" points="{}"/>"#,
            PALETTE[i % PALETTE.len()],
            path.join(" ")
        );
    }
    legend(&mut s, &series.iter().map(|(l, _)| l.clone()).collect::<Vec<_>>());
    s.push_str("</svg>\n");
    s
}

/// Grouped bar chart: `categories` along x, one bar per series in each group.
pub fn bar_chart(
    title: &str,
    xlabel: &str,
    ylabel: &str,
    categories: &[String],
    series: &[(String, Vec<f64>)],
) -> String {
    let mut s = header(title, xlabel, ylabel);
    let (_, y1) = bounds(series.iter().flat_map(|(_, v)| v.iter().copied()));
    let y1 = y1.max(f64::MIN_POSITIVE);
    y_ticks(&mut s, 0.0, y1);
    let n = categories.len().max(1) as f64;
    let group_w = (W - LEFT - RIGHT) / n;
    let bar_w = group_w * 0.8 / series.len().max(1) as f64;
    let label_every = (categories.len() / 16).max(1);
    for (c, cat) in categories.iter().enumerate() {
        let gx = LEFT + group_w * c as f64 + group_w * 0.1;
        for (k, (_, values)) in series.iter().enumerate() {
            let v = values.get(c).copied().unwrap_or(0.0).max(0.0);
            let h = v / y1 * (H - TOP - BOTTOM);
            let _ = writeln!(
                s,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{}" fill-opacity="0.85"/>"#,
                gx + bar_w * k as f64,
                H - BOTTOM - h,
                bar_w,
                h,
                PALETTE[k % PALETTE.len()]
            );
        }
        if c % label_every == 0 {
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{}" text-anchor="middle" font-size="10">{}</text>"#,
                gx + group_w * 0.4,
                H - BOTTOM + 14.0,
                esc(cat)
            );
        }
    }
    legend(&mut s, &series.iter().map(|(l, _)| l.clone()).collect::<Vec<_>>());
    s.push_str("</svg>\n");
    s
}

/// Mean relative-entropy curve of one spec across its runs.
#[derive(Clone, Debug, PartialEq)]
pub struct EntropySeries {
    pub spec_id: String,
    pub label: String,
    pub runs: Vec<Vec<f64>>,
}

impl EntropySeries {
    /// Per-epoch mean over the runs that reached that epoch, with the count.
    pub fn mean_curve(&self) -> Vec<(f64, usize)> {
        let len = self.runs.iter().map(Vec::len).max().unwrap_or(0);
        (0..len)
            .map(|e| {
                let vals: Vec<f64> = self.runs.iter().filter_map(|r| r.get(e).copied()).collect();
                (vals.iter().sum::<f64>() / vals.len() as f64, vals.len())
            })
            .collect()
    }
}

pub fn entropy_curve(series: &[EntropySeries]) -> (String, String) {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["spec_id", "label", "epoch", "mean_relative_entropy", "runs"]).expect("in-memory");
    let mut lines = Vec::new();
    for s in series {
        let curve = s.mean_curve();
        for (e, (m, n)) in curve.iter().enumerate() {
            w.serialize((&s.spec_id, &s.label, e, m, n)).expect("in-memory");
        }
        lines.push((
            s.label.clone(),
            curve.iter().enumerate().map(|(e, (m, _))| (e as f64, *m)).collect(),
        ));
    }
    let csv = String::from_utf8(w.into_inner().expect("in-memory")).expect("UTF-8");
    (csv, line_chart("Relative entropy during training", "epoch", "relative entropy", &lines))
}

#[derive(Clone, Debug, PartialEq)]
pub struct CapabilityRow {
    pub family: String,
    pub num_qubits: usize,
    pub repetitions: usize,
    pub capability: f64,
}

pub fn entanglement_histogram(rows: &[CapabilityRow]) -> (String, String) {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["family", "num_qubits", "repetitions", "entangling_capability"]).expect("in-memory");
    for r in rows {
        w.serialize((&r.family, r.num_qubits, r.repetitions, r.capability)).expect("in-memory");
    }
    let csv = String::from_utf8(w.into_inner().expect("in-memory")).expect("UTF-8");
    // one group per (N, k), one bar per family
    let mut families: Vec<String> = rows.iter().map(|r| r.family.clone()).collect();
    families.dedup();
    families.sort();
    families.dedup();
    let mut cats: Vec<(usize, usize)> = rows.iter().map(|r| (r.num_qubits, r.repetitions)).collect();
    cats.sort_unstable();
    cats.dedup();
    let series: Vec<(String, Vec<f64>)> = families
        .iter()
        .map(|f| {
            let v = cats
                .iter()
                .map(|&(n, k)| {
                    rows.iter()
                        .find(|r| &r.family == f && r.num_qubits == n && r.repetitions == k)
                        .map_or(0.0, |r| r.capability)
                })
                .collect();
            (f.clone(), v)
        })
        .collect();
    let labels: Vec<String> = cats.iter().map(|(n, k)| format!("N{n} k{k}")).collect();
    let svg = bar_chart("Entangling capability", "qubits / repetitions", "Meyer-Wallach Q", &labels, &series);
    (csv, svg)
}

pub fn distribution_overlay(range: (f64, f64), target: &[f64], generated: &[f64]) -> (String, String) {
    let n = target.len().max(generated.len());
    let width = (range.1 - range.0) / n.max(1) as f64;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["bin", "x_start", "x_end", "target", "generated"]).expect("in-memory");
    for i in 0..n {
        let a = range.0 + width * i as f64;
        w.serialize((
            i,
            a,
            a + width,
            target.get(i).copied().unwrap_or(0.0),
            generated.get(i).copied().unwrap_or(0.0),
        ))
        .expect("in-memory");
    }
    let csv = String::from_utf8(w.into_inner().expect("in-memory")).expect("UTF-8");
    let labels: Vec<String> = (0..n).map(|i| fmt_tick(range.0 + width * i as f64)).collect();
    let svg = bar_chart(
        "Target vs generated distribution",
        "value",
        "probability",
        &labels,
        &[("target".into(), target.to_vec()), ("generated".into(), generated.to_vec())],
    );
    (csv, svg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_curve_handles_ragged_runs() {
        let s = EntropySeries {
            spec_id: "x".into(),
            label: "x".into(),
            runs: vec![vec![1.0, 2.0, 3.0], vec![3.0]],
        };
        assert_eq!(s.mean_curve(), vec![(2.0, 2), (2.0, 1), (3.0, 1)]);
    }

    #[test]
    fn entropy_csv_one_row_per_epoch() {
        let s = EntropySeries {
            spec_id: "abc".into(),
            label: "zoufal".into(),
            runs: vec![vec![0.5, 0.25]],
        };
        let (csv, svg) = entropy_curve(&[s]);
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.lines().nth(2).unwrap().starts_with("abc,zoufal,1,0.25,1"));
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("<polyline"));
    }

    #[test]
    fn overlay_rows_cover_range() {
        let (csv, svg) = distribution_overlay((0.0, 4.0), &[0.5, 0.5], &[0.25, 0.75]);
        let rows: Vec<&str> = csv.lines().collect();
        assert_eq!(rows[1], "0,0.0,2.0,0.5,0.25");
        assert_eq!(rows[2], "1,2.0,4.0,0.5,0.75");
        assert_eq!(svg.matches("<rect x=").count(), 4 + 2);
    }

    #[test]
    fn labels_are_escaped() {
        let svg = line_chart("a<b", "x", "y", &[("s&t".into(), vec![(0.0, 1.0), (1.0, 2.0)])]);
        assert!(svg.contains("a&lt;b") && svg.contains("s&amp;t"));
    }

    #[test]
    fn histogram_groups() {
        let rows = vec![
            CapabilityRow { family: "zoufal".into(), num_qubits: 2, repetitions: 1, capability: 0.3 },
            CapabilityRow { family: "herr_1".into(), num_qubits: 2, repetitions: 1, capability: 0.5 },
        ];
        let (csv, svg) = entanglement_histogram(&rows);
        assert_eq!(csv.lines().count(), 3);
        assert!(svg.contains("N2 k1"));
    }
}
