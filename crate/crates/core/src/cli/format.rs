use std::fmt::Write;

use super::{Output, OutputFormat, SIG_DIGITS};
use crate::protocols::ExperimentResult;

/// `x` with exactly [`SIG_DIGITS`] significant digits, like C's `%.12g`
/// but keeping trailing zeros. Fixed notation is used for decimal exponents
/// in [−5, 12), scientific notation otherwise.
pub fn format_sig(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return format!("{:.*}", SIG_DIGITS - 1, 0.0);
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..SIG_DIGITS as i32).contains(&exp) {
        let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{mantissa}e{exp}")
    }
}

/// Renders a run's output in the chosen format. The text always ends with a
/// newline.
pub fn render_output(output: &Output, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(output).expect("outputs serialize");
            s.push('\n');
            s
        }
        OutputFormat::Csv => match output {
            Output::Result(r) => result_csv(r),
            Output::Table1(t) => {
                let mut s = String::from("particle,concurrence,repetitions,rotation_fidelity\n");
                for row in &t.rows {
                    let fid = row.rotation_fidelity.map(format_sig).unwrap_or_default();
                    let _ = writeln!(s, "{},{},{},{}", row.particle.label(), format_sig(row.concurrence), row.repetitions, fid);
                }
                s
            }
        },
        OutputFormat::Table => match output {
            Output::Result(r) => result_table(r),
            Output::Table1(t) => {
                let header = ["Particle".to_owned(), "Concurrence".into(), "Repetitions".into(), "Rotation fidelity".into()];
                let rows: Vec<[String; 4]> = t
                    .rows
                    .iter()
                    .map(|r| {
                        [
                            r.particle.label().to_owned(),
                            trimmed(r.concurrence),
                            r.repetitions.to_owned(),
                            r.rotation_fidelity.map(trimmed).unwrap_or_else(|| "-".into()),
                        ]
                    })
                    .collect();
                let mut s = format!("table1 (N = {})\n", t.n);
                s.push_str(&aligned(&header, &rows));
                s
            }
        },
    }
}

/// [`format_sig`] without trailing zeros, for human-readable tables.
fn trimmed(x: f64) -> String {
    let s = format_sig(x);
    match s.split_once('e') {
        Some((m, e)) if m.contains('.') => format!("{}e{e}", m.trim_end_matches('0').trim_end_matches('.')),
        None if s.contains('.') => s.trim_end_matches('0').trim_end_matches('.').to_owned(),
        _ => s,
    }
}

fn result_csv(r: &ExperimentResult) -> String {
    let mut s = String::new();
    if let Some(series) = &r.series {
        s.push_str(&series.columns.join(","));
        s.push('\n');
        for row in &series.rows {
            s.push_str(&row.iter().map(|v| format_sig(*v)).collect::<Vec<_>>().join(","));
            s.push('\n');
        }
        return s;
    }
    s.push_str("quantity,value\n");
    for (k, v) in &r.scalars {
        let _ = writeln!(s, "{k},{}", format_sig(*v));
    }
    for (k, v) in &r.flags {
        let _ = writeln!(s, "{k},{v}");
    }
    s
}

fn result_table(r: &ExperimentResult) -> String {
    let mut s = format!("{}\n", r.name);
    for (k, v) in &r.params {
        let _ = writeln!(s, "  {k} = {v}");
    }
    for (k, v) in &r.scalars {
        let _ = writeln!(s, "  {k} = {}", trimmed(*v));
    }
    for (k, v) in &r.flags {
        let _ = writeln!(s, "  {k} = {v}");
    }
    if let Some(series) = &r.series {
        let rows: Vec<Vec<String>> = series.rows.iter().map(|row| row.iter().map(|v| trimmed(*v)).collect()).collect();
        s.push_str(&aligned(&series.columns, &rows));
    }
    s
}

fn aligned<H: AsRef<str>, C: AsRef<[String]>>(header: &[H], rows: &[C]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.as_ref().chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row.as_ref()) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
            .collect();
        format!("{}\n", padded.join("  ").trim_end())
    };
    let mut s = line(header.iter().map(AsRef::as_ref).collect());
    for row in rows {
        s.push_str(&line(row.as_ref().iter().map(String::as_str).collect()));
    }
    s
}
