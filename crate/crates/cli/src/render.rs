use std::fmt::Write;

use crate::config::Format;
use crate::error::CliError;
use crate::run::{LevelTable, Outcome, Report, TauReport};

/// `v` with 12 significant digits, positional unless very large or small.
pub fn sig12(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{v:.11e}");
    let exp: i32 = sci[sci.find('e').expect("exponent") + 1..]
        .parse()
        .expect("integer exponent");
    if !(-6..=15).contains(&exp) {
        return sci;
    }
    format!("{v:.*}", (11 - exp).max(0) as usize)
}

fn short(v: f64) -> String {
    format!("{v:.3e}")
}

fn opt(v: Option<f64>, f: impl Fn(f64) -> String) -> String {
    v.map_or_else(|| "-".into(), f)
}

/// Left-aligned columns separated by two spaces.
fn grid(header: Vec<String>, rows: Vec<Vec<String>>) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    for row in std::iter::once(&header).chain(&rows) {
        let mut line = String::new();
        for (i, cell) in row.iter().enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            line.push_str(cell);
            let pad = widths[i].saturating_sub(cell.chars().count());
            line.extend(std::iter::repeat_n(' ', pad));
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn kappa_name(k: i32) -> String {
    if k > 0 {
        format!("kappa=+{k}")
    } else {
        format!("kappa={k}")
    }
}

fn level_table_text(table: &LevelTable, compare: bool) -> String {
    let mut header = vec!["level".to_string()];
    for c in &table.columns {
        header.push(if compare {
            format!("{} {}", c.scheme, kappa_name(c.kappa))
        } else {
            kappa_name(c.kappa)
        });
    }
    header.push("reference".into());
    header.push("label".into());
    let rows = table
        .rows
        .iter()
        .map(|r| {
            let mut line = vec![r.level.map_or_else(|| "=>".to_string(), |l| l.to_string())];
            line.extend(r.cells.iter().map(|c| opt(c.map(|c| c.binding), sig12)));
            line.push(match (r.level, r.reference) {
                (None, _) => "spurious".into(),
                (Some(_), v) => opt(v, sig12),
            });
            let mut label = r.label.as_str().to_string();
            if r.coincidence {
                label.push_str(" (coincidence)");
            }
            line.push(label);
            line
        })
        .collect();
    let mut out = grid(header, rows);
    let spurious: usize = table
        .columns
        .iter()
        .map(|c| c.entries.iter().filter(|e| e.label.is_spurious()).count())
        .sum();
    let _ = writeln!(
        out,
        "\ninterleaved spurious rows: {}\nspurious values: {spurious}\ncoincidence: {}",
        table.interleaved_rows(),
        if table.coincidence { "yes" } else { "no" }
    );
    out
}

fn level_table_csv(table: &LevelTable, compare: bool) -> String {
    let mut out = String::new();
    if compare {
        out.push_str("scheme,");
    }
    out.push_str("level,kappa,binding,reference,rel_error,label\n");
    for row in &table.rows {
        for (col, cell) in table.columns.iter().zip(&row.cells) {
            let Some(cell) = cell else { continue };
            if compare {
                let _ = write!(out, "{},", col.scheme);
            }
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                row.level.map_or_else(String::new, |l| l.to_string()),
                col.kappa,
                cell.binding,
                row.reference.map_or_else(String::new, |v| v.to_string()),
                cell.rel_error.map_or_else(String::new, |v| v.to_string()),
                cell.label
            );
        }
    }
    out
}

fn tau_text(report: &TauReport) -> String {
    let header = [
        "node", "h_j", "h_j+1", "tau", "balance", "gap(tau)", "gap(0)",
    ]
    .map(String::from)
    .to_vec();
    let rows = report
        .rows
        .iter()
        .map(|r| {
            vec![
                r.node.to_string(),
                short(r.h_j),
                short(r.h_next),
                short(r.tau),
                short(r.balance_residual),
                if r.lambda1_real {
                    short(r.gap_tau)
                } else {
                    format!("{} (imag)", short(r.gap_tau))
                },
                short(r.gap_zero),
            ]
        })
        .collect();
    let mut out = grid(header, rows);
    let _ = writeln!(
        out,
        "\nc = {}\nmax relative balance residual: {}\nnodes where tau narrows the gap: {} of {}",
        sig12(report.c),
        short(report.max_balance_residual),
        report.improved,
        report.rows.len()
    );
    out
}

fn text(report: &Report) -> String {
    let cfg = &report.config;
    let mut out = format!(
        "# Z = {}, c = {}, scheme = {}, n = {}, a = {}, b = {}, mesh-gamma = {}\n",
        cfg.z, cfg.c, cfg.scheme, cfg.n, cfg.a, cfg.b, cfg.mesh_gamma
    );
    match &report.result {
        Outcome::Solve(t) => out.push_str(&level_table_text(t, false)),
        Outcome::CompareSchemes(t) => out.push_str(&level_table_text(t, true)),
        Outcome::Convergence(studies) => {
            for (i, kc) in studies.iter().enumerate() {
                if i > 0 {
                    out.push('\n');
                }
                let s = &kc.study;
                let _ = writeln!(out, "{} {}", kappa_name(kc.kappa), s.scheme);
                let mut header = vec!["level".to_string(), "reference".into()];
                header.extend(s.n_values.iter().map(|n| format!("n={n}")));
                header.push("order".into());
                let mut rows: Vec<Vec<String>> = s
                    .reference
                    .iter()
                    .enumerate()
                    .map(|(l, r)| {
                        let mut line = vec![(l + 1).to_string(), sig12(r.binding)];
                        line.extend(s.errors.iter().map(|row| opt(row[l], short)));
                        line.push(opt(s.orders[l], |p| format!("{p:.3}")));
                        line
                    })
                    .collect();
                let mut spurious = vec!["spurious".to_string(), String::new()];
                spurious.extend(s.spurious.iter().map(|c| c.to_string()));
                rows.push(spurious);
                out.push_str(&grid(header, rows));
            }
        }
        Outcome::Coincidence(c) => {
            let header = vec![
                "level".to_string(),
                kappa_name(c.positive_kappa),
                kappa_name(c.negative_kappa),
                "rel_gap".into(),
                "coincide".into(),
            ];
            let rows = c
                .report
                .pairs
                .iter()
                .map(|p| {
                    vec![
                        p.level.to_string(),
                        sig12(p.positive),
                        sig12(p.negative),
                        short(p.rel_gap),
                        if p.coincide { "yes" } else { "no" }.into(),
                    ]
                })
                .collect();
            out.push_str(&grid(header, rows));
            let _ = writeln!(
                out,
                "\ncoincidence: {}",
                if c.report.present { "yes" } else { "no" }
            );
        }
        Outcome::VerifyTau(t) => out.push_str(&tau_text(t)),
    }
    out
}

fn csv(report: &Report) -> String {
    match &report.result {
        Outcome::Solve(t) => level_table_csv(t, false),
        Outcome::CompareSchemes(t) => level_table_csv(t, true),
        Outcome::Convergence(studies) => {
            let mut out = String::from("kappa,level,n,reference,rel_error\n");
            for kc in studies {
                let s = &kc.study;
                for (l, r) in s.reference.iter().enumerate() {
                    for (n, row) in s.n_values.iter().zip(&s.errors) {
                        let _ = writeln!(
                            out,
                            "{},{},{n},{},{}",
                            kc.kappa,
                            l + 1,
                            r.binding,
                            row[l].map_or_else(String::new, |e| e.to_string())
                        );
                    }
                }
            }
            out
        }
        Outcome::Coincidence(c) => {
            let mut out = String::from("level,positive,negative,rel_gap,coincide\n");
            for p in &c.report.pairs {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    p.level, p.positive, p.negative, p.rel_gap, p.coincide
                );
            }
            out
        }
        Outcome::VerifyTau(t) => {
            let mut out = String::from(
                "node,h_j,h_next,tau,balance_residual,gap_tau,gap_zero,lambda1_real\n",
            );
            for r in &t.rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{}",
                    r.node,
                    r.h_j,
                    r.h_next,
                    r.tau,
                    r.balance_residual,
                    r.gap_tau,
                    r.gap_zero,
                    r.lambda1_real
                );
            }
            out
        }
    }
}

pub fn render(report: &Report) -> Result<String, CliError> {
    Ok(match report.config.format {
        Format::Table => text(report),
        Format::Csv => csv(report),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report)
                .map_err(|e| CliError::Output(e.to_string()))?;
            s.push('\n');
            s
        }
    })
}
