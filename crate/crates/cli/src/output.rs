use std::fmt::Write;

use serde::Serialize;

use crate::commands::{ConvergenceTable, MatrixResult, Payload, ResultBody, C};
use crate::config::OutputFormat;
use crate::CliError;

/// Full-precision real: 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn pair(z: C) -> String {
    format!("({}, {})", num(z.re), num(z.im))
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_else(|| "-".into())
}

pub fn render(p: &Payload, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => json(p),
        OutputFormat::Csv => match &p.result {
            ResultBody::Matrix(m) => matrix_csv(m),
            ResultBody::Table(t) => table_csv(t),
            ResultBody::Checks(c) => {
                let mut s = String::from("check,value,tolerance,pass\n");
                for k in c {
                    let _ = writeln!(s, "{},{},{},{}", k.name, opt(k.value), num(k.tolerance), k.pass);
                }
                s
            }
        },
        OutputFormat::Text => match &p.result {
            ResultBody::Matrix(m) => matrix_text(m),
            ResultBody::Table(t) => table_text(t),
            ResultBody::Checks(c) => {
                let mut s = String::new();
                for k in c {
                    let verdict = if k.pass { "PASS" } else { "FAIL" };
                    let _ = write!(s, "{verdict} {} {} (tolerance {})", k.name, opt(k.value), num(k.tolerance));
                    if let Some(d) = &k.detail {
                        let _ = write!(s, ": {d}");
                    }
                    s.push('\n');
                }
                s
            }
        },
    }
}

pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).unwrap_or_else(|e| format!("{{\"error\": \"{e}\"}}"));
    s.push('\n');
    s
}

fn matrix_csv(m: &MatrixResult) -> String {
    let mut s = String::new();
    match &m.values_a {
        Some(_) => s.push_str("i,j,re,im,re_a,im_a\n"),
        None => s.push_str("i,j,re,im\n"),
    }
    for (i, row) in m.values.iter().enumerate() {
        for (j, z) in row.iter().enumerate() {
            let _ = write!(s, "{i},{j},{},{}", num(z.re), num(z.im));
            if let Some(a) = &m.values_a {
                let _ = write!(s, ",{},{}", num(a[i][j].re), num(a[i][j].im));
            }
            s.push('\n');
        }
    }
    s
}

fn matrix_text(m: &MatrixResult) -> String {
    let mut s = String::new();
    let block = |s: &mut String, title: &str, values: &[Vec<C>]| {
        let _ = writeln!(s, "{title}");
        for row in values {
            let cells: Vec<String> = row.iter().map(|&z| pair(z)).collect();
            let _ = writeln!(s, "{}", cells.join("  "));
        }
    };
    let title = match m.values_a {
        Some(_) => format!("G (N = {}, method B)", m.n),
        None => format!("G (N = {}, method {:?})", m.n, m.method),
    };
    block(&mut s, &title, &m.values);
    if let Some(a) = &m.values_a {
        block(&mut s, &format!("G (N = {}, method A)", m.n), a);
    }
    if let Some(r) = m.ratio {
        let _ = writeln!(s, "tail ratio {}", pair(r));
    }
    if let Some(d) = m.deviation {
        let _ = writeln!(s, "max relative deviation A vs B {}", num(d));
    }
    s
}

const DIVERGED: &str = "diverged";

fn table_csv(t: &ConvergenceTable) -> String {
    let mut s = String::from("n");
    for v in &t.variants {
        let _ = write!(s, ",{0}_re,{0}_im", v.name);
    }
    s.push('\n');
    let depth = t.variants.first().map_or(0, |v| v.rows.len());
    for k in 0..depth {
        let _ = write!(s, "{}", k + 1);
        for v in &t.variants {
            let r = &v.rows[k];
            match (r.re, r.im) {
                (Some(re), Some(im)) => {
                    let _ = write!(s, ",{},{}", num(re), num(im));
                }
                _ => {
                    let _ = write!(s, ",{DIVERGED},{DIVERGED}");
                }
            }
        }
        s.push('\n');
    }
    if let Some(e) = t.exact {
        let _ = write!(s, "exact");
        for _ in &t.variants {
            let _ = write!(s, ",{},{}", num(e.re), num(e.im));
        }
        s.push('\n');
    }
    s
}

fn table_text(t: &ConvergenceTable) -> String {
    let width = 2 * 24 + 4;
    let mut s = format!("{:>5}", "n");
    for v in &t.variants {
        let _ = write!(s, "  {:>width$}", v.name);
    }
    s.push('\n');
    let depth = t.variants.first().map_or(0, |v| v.rows.len());
    for k in 0..depth {
        let _ = write!(s, "{:>5}", k + 1);
        for v in &t.variants {
            let r = &v.rows[k];
            let cell = match (r.re, r.im) {
                (Some(re), Some(im)) => pair(C { re, im }),
                _ => DIVERGED.to_string(),
            };
            let _ = write!(s, "  {cell:>width$}");
        }
        s.push('\n');
    }
    for v in &t.variants {
        let _ = write!(s, "{}: {}", v.name, v.status);
        if let Some(n) = v.n_used {
            let _ = write!(s, " (n = {n})");
        }
        if let Some(r) = &v.reason {
            let _ = write!(s, ": {r}");
        }
        s.push('\n');
    }
    if let Some(e) = t.exact {
        let _ = writeln!(s, "exact {}", pair(e));
    }
    s
}

#[derive(Serialize)]
struct ErrorRecord<'a> {
    kind: &'static str,
    message: String,
    exit_code: u8,
    #[serde(skip_serializing_if = "Option::is_none")]
    pivot: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    terms: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    energy: Option<C>,
    #[serde(skip_serializing_if = "Option::is_none")]
    config: Option<&'a crate::config::RunConfig>,
}

pub fn error_record(e: &CliError, config: Option<&crate::config::RunConfig>) -> String {
    use jacobi_green::Error as E;
    let (mut pivot, mut terms, mut energy) = (None, None, None);
    if let CliError::Numeric(inner) = e {
        match inner {
            E::SingularMatrix { pivot: p } => pivot = Some(*p),
            E::NonConvergence { terms: t, .. } => terms = Some(*t),
            E::SingularEnergy(z) => energy = Some(C::from(*z)),
            _ => {}
        }
    }
    #[derive(Serialize)]
    struct Wrapper<'a> {
        error: ErrorRecord<'a>,
    }
    json(&Wrapper {
        error: ErrorRecord {
            kind: e.kind(),
            message: e.to_string(),
            exit_code: e.exit_code(),
            pivot,
            terms,
            energy,
            config,
        },
    })
}
