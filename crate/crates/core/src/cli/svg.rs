use std::fmt::Write;

use super::Output;
use crate::protocols::Series;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

/// Standalone SVG chart of a result's series: a log-log line chart for
/// rotation sweeps, a line chart for one-angle searches and a heatmap for
/// two-angle searches. `None` when there is nothing to draw.
pub fn render_plot(output: &Output) -> Option<String> {
    let Output::Result(r) = output else { return None };
    let series = r.series.as_ref()?;
    match r.name.as_str() {
        "rotate_sweep" => {
            let x = series.column("n")?;
            let y = series.column("infidelity")?;
            Some(line_chart("Infidelity after N sequential ancillas", "N", "1 - F", &x, &y, true))
        }
        "fermion_sweep" if series.columns.len() == 2 => {
            let x = series.column("theta_1")?;
            let y = series.column("concurrence")?;
            Some(line_chart("Target concurrence versus mixing angle", "theta (rad)", "concurrence", &x, &y, false))
        }
        "fermion_sweep" if series.columns.len() == 3 => heatmap(series),
        _ => None,
    }
}

fn num(x: f64) -> String {
    let s = format!("{x:.2}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

fn header(title: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#,
        w = WIDTH,
        h = HEIGHT
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#, num(WIDTH / 2.0), escape(title));
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn tick_label(v: f64, log: bool) -> String {
    if log {
        format!("1e{}", v.round() as i64)
    } else {
        let s = format!("{v:.3}");
        s.trim_end_matches('0').trim_end_matches('.').to_owned()
    }
}

fn ticks(lo: f64, hi: f64, log: bool) -> Vec<f64> {
    if log {
        (lo.ceil() as i64..=hi.floor() as i64).map(|e| e as f64).collect()
    } else {
        (0..=5).map(|k| lo + (hi - lo) * k as f64 / 5.0).collect()
    }
}

fn range(v: &[f64]) -> (f64, f64) {
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi - lo < 1e-300 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

fn line_chart(title: &str, xlabel: &str, ylabel: &str, x: &[f64], y: &[f64], log: bool) -> String {
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(a, b)| !log || (**a > 0.0 && **b > 0.0))
        .map(|(a, b)| if log { (a.log10(), b.log10()) } else { (*a, *b) })
        .collect();
    let (xs, ys): (Vec<f64>, Vec<f64>) = pts.iter().copied().unzip();
    let (mut x0, mut x1) = range(&xs);
    let (mut y0, mut y1) = range(&ys);
    if log {
        (x0, x1, y0, y1) = (x0.floor(), x1.ceil(), y0.floor(), y1.ceil());
        if x1 == x0 {
            x1 += 1.0;
        }
        if y1 == y0 {
            y1 += 1.0;
        }
    }
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let sx = |v: f64| LEFT + (v - x0) / (x1 - x0) * pw;
    let sy = |v: f64| TOP + ph - (v - y0) / (y1 - y0) * ph;

    let mut s = header(title);
    let _ = writeln!(s, r#"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="black"/>"#, num(LEFT), num(TOP), num(pw), num(ph));
    for t in ticks(x0, x1, log) {
        let px = num(sx(t));
        let _ = writeln!(s, r##"<line x1="{px}" y1="{}" x2="{px}" y2="{}" stroke="#ddd"/>"##, num(TOP), num(TOP + ph));
        let _ = writeln!(s, r#"<text x="{px}" y="{}" text-anchor="middle">{}</text>"#, num(TOP + ph + 18.0), tick_label(t, log));
    }
    for t in ticks(y0, y1, log) {
        let py = num(sy(t));
        let _ = writeln!(s, r##"<line x1="{}" y1="{py}" x2="{}" y2="{py}" stroke="#ddd"/>"##, num(LEFT), num(LEFT + pw));
        let _ = writeln!(s, r#"<text x="{}" y="{py}" text-anchor="end" dominant-baseline="middle">{}</text>"#, num(LEFT - 6.0), tick_label(t, log));
    }
    let path: Vec<String> = pts.iter().map(|(a, b)| format!("{},{}", num(sx(*a)), num(sy(*b)))).collect();
    let _ = writeln!(s, r##"<polyline points="{}" fill="none" stroke="#1f77b4" stroke-width="2"/>"##, path.join(" "));
    for (a, b) in &pts {
        let _ = writeln!(s, r##"<circle cx="{}" cy="{}" r="3" fill="#1f77b4"/>"##, num(sx(*a)), num(sy(*b)));
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, num(LEFT + pw / 2.0), num(HEIGHT - 16.0), escape(xlabel));
    let _ = writeln!(
        s,
        r#"<text x="18" y="{y}" text-anchor="middle" transform="rotate(-90 18 {y})">{}</text>"#,
        escape(ylabel),
        y = num(TOP + ph / 2.0)
    );
    s.push_str("</svg>\n");
    s
}

/// Linear blend through a dark-blue, teal, yellow palette for t ∈ [0, 1].
fn color(t: f64) -> String {
    const STOPS: [(f64, [f64; 3]); 3] = [(0.0, [68.0, 1.0, 84.0]), (0.5, [33.0, 145.0, 140.0]), (1.0, [253.0, 231.0, 37.0])];
    let t = t.clamp(0.0, 1.0);
    let (a, b) = if t <= 0.5 { (STOPS[0], STOPS[1]) } else { (STOPS[1], STOPS[2]) };
    let u = (t - a.0) / (b.0 - a.0);
    let c: Vec<u8> = (0..3).map(|i| (a.1[i] + u * (b.1[i] - a.1[i])).round() as u8).collect();
    format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
}

fn heatmap(series: &Series) -> Option<String> {
    let t1 = series.column("theta_1")?;
    let t2 = series.column("theta_2")?;
    let c = series.column("concurrence")?;
    let n = (t1.len() as f64).sqrt().round() as usize;
    if n * n != t1.len() || n < 2 {
        return None;
    }
    let (c0, c1) = range(&c);
    let side = (HEIGHT - TOP - BOTTOM).min(WIDTH - LEFT - RIGHT - 90.0);
    let cell = side / n as f64;
    let (x0, x1) = range(&t1);
    let (y0, y1) = range(&t2);

    let mut s = header("Target concurrence over two mixing angles");
    // Rows are ordered with theta_1 slowest, so index i*n + j is (theta_1 = i, theta_2 = j).
    for i in 0..n {
        for j in 0..n {
            let v = c[i * n + j];
            let x = LEFT + i as f64 * cell;
            let y = TOP + side - (j + 1) as f64 * cell;
            let _ = writeln!(
                s,
                r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{}"/>"#,
                num(x),
                num(y),
                num(cell + 0.05),
                num(cell + 0.05),
                color((v - c0) / (c1 - c0))
            );
        }
    }
    let _ = writeln!(s, r#"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="black"/>"#, num(LEFT), num(TOP), num(side), num(side));
    for k in 0..=4 {
        let f = k as f64 / 4.0;
        let px = num(LEFT + f * side);
        let py = num(TOP + side - f * side);
        let _ = writeln!(s, r#"<text x="{px}" y="{}" text-anchor="middle">{}</text>"#, num(TOP + side + 18.0), tick_label(x0 + f * (x1 - x0), false));
        let _ = writeln!(s, r#"<text x="{}" y="{py}" text-anchor="end" dominant-baseline="middle">{}</text>"#, num(LEFT - 6.0), tick_label(y0 + f * (y1 - y0), false));
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">theta_1 (rad)</text>"#, num(LEFT + side / 2.0), num(HEIGHT - 16.0));
    let _ = writeln!(
        s,
        r#"<text x="18" y="{y}" text-anchor="middle" transform="rotate(-90 18 {y})">theta_2 (rad)</text>"#,
        y = num(TOP + side / 2.0)
    );
    let bar_x = LEFT + side + 30.0;
    let steps = 50;
    for k in 0..steps {
        let f = k as f64 / steps as f64;
        let h = side / steps as f64;
        let _ = writeln!(
            s,
            r#"<rect x="{}" y="{}" width="18" height="{}" fill="{}"/>"#,
            num(bar_x),
            num(TOP + side - (k + 1) as f64 * h),
            num(h + 0.05),
            color(f + 0.5 / steps as f64)
        );
    }
    for (f, v) in [(0.0, c0), (1.0, c1)] {
        let _ = writeln!(s, r#"<text x="{}" y="{}" dominant-baseline="middle">{}</text>"#, num(bar_x + 24.0), num(TOP + side - f * side), tick_label(v, false));
    }
    s.push_str("</svg>\n");
    Some(s)
}
