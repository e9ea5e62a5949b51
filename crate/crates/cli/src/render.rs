use std::fmt::Write as _;

use anyhow::Result;
use eqrobin::coverage::CoverageReport;
use eqrobin::experiment::{DiversityReport, ResilienceReport};
use eqrobin::formats::SelectionJson;
use eqrobin::TestSuite;

fn tf(b: bool) -> &'static str {
    if b {
        "T"
    } else {
        "F"
    }
}

/// Plain text table with right-aligned columns.
pub fn table(header: &[String], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(String::len).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.len());
        }
    }
    let mut out = String::new();
    let line = |cells: &[String], out: &mut String| {
        let parts: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect();
        out.push_str(parts.join("  ").trim_end());
        out.push('\n');
    };
    line(header, &mut out);
    for r in rows {
        line(r, &mut out);
    }
    out
}

fn suite_rows(s: &TestSuite) -> (Vec<String>, Vec<Vec<String>>) {
    let mut header = vec!["Test Case".to_string()];
    header.extend(s.conditions.labels());
    header.push("Result".into());
    let rows = (0..s.size())
        .map(|i| {
            let mut r = vec![(i + 1).to_string()];
            r.extend(s.literal_row(i).into_iter().map(|b| tf(b).to_string()));
            r.push(tf(s.tests[i].outcome).to_string());
            r
        })
        .collect();
    (header, rows)
}

pub fn suite_table(s: &TestSuite) -> String {
    let (h, r) = suite_rows(s);
    format!("{}\n{}", s.expression, table(&h, &r))
}

pub fn suite_csv(s: &TestSuite) -> Result<String> {
    let (h, r) = suite_rows(s);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&h)?;
    for row in r {
        w.write_record(&row)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn coverage_table(r: &CoverageReport) -> String {
    let rows: Vec<Vec<String>> = r
        .conditions
        .iter()
        .map(|c| {
            let pair = c.pair.as_ref().map_or_else(
                || "-".to_string(),
                |p| {
                    let (i, j) = p.test_cases();
                    format!("({i}, {j})")
                },
            );
            vec![c.condition.label(), pair]
        })
        .collect();
    let mut out = table(&["Condition".into(), "Pair".into()], &rows);
    let _ = writeln!(
        out,
        "coverage: {}/{} ({:.1}%) {}",
        r.covered,
        r.total,
        r.percentage(),
        if r.pass() { "PASS" } else { "FAIL" }
    );
    out
}

pub fn coverage_csv(r: &CoverageReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["label", "first", "second"])?;
    for c in &r.conditions {
        let (i, j) = c
            .pair
            .as_ref()
            .map(|p| p.test_cases())
            .map_or((String::new(), String::new()), |(i, j)| {
                (i.to_string(), j.to_string())
            });
        w.write_record([c.condition.label(), i, j])?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn selection_table(s: &SelectionJson) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{}: {} variants, {} distinct suites, {} discarded, rationale {}",
        s.expression,
        s.variant_count,
        s.distinct_suites,
        s.discarded.len(),
        s.rationale.as_str()
    );
    let rows: Vec<Vec<String>> = s
        .ranking
        .iter()
        .map(|r| {
            vec![
                r.variant.to_string(),
                format!("{:.6}", r.cost),
                r.expression.clone(),
            ]
        })
        .collect();
    out.push_str(&table(
        &["Variant".into(), "Cost".into(), "Expression".into()],
        &rows,
    ));
    for d in &s.discarded {
        let cases: Vec<String> = d
            .offending_test_cases
            .iter()
            .map(usize::to_string)
            .collect();
        let _ = writeln!(
            out,
            "discarded variant {} ({}): illegal test cases {}",
            d.variant,
            d.expression,
            cases.join(", ")
        );
    }
    match &s.selected {
        Some(sel) => {
            let _ = writeln!(
                out,
                "selected variant {} (cost {:.6})",
                sel.variant, sel.cost
            );
        }
        None => out.push_str("no valid suite\n"),
    }
    out
}

pub fn selection_csv(s: &SelectionJson) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "variant",
        "expression",
        "status",
        "cost",
        "offending_test_cases",
    ])?;
    let selected = s.selected.as_ref().map(|x| x.variant);
    for r in &s.ranking {
        let status = if Some(r.variant) == selected {
            "selected"
        } else {
            "valid"
        };
        w.write_record([
            r.variant.to_string(),
            r.expression.clone(),
            status.into(),
            format!("{:.6}", r.cost),
            String::new(),
        ])?;
    }
    for d in &s.discarded {
        let cases: Vec<String> = d
            .offending_test_cases
            .iter()
            .map(usize::to_string)
            .collect();
        w.write_record([
            d.variant.to_string(),
            d.expression.clone(),
            "discarded".into(),
            String::new(),
            cases.join(" "),
        ])?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn rq1_rows(r: &DiversityReport) -> (Vec<String>, Vec<Vec<String>>) {
    let header = [
        "name",
        "n",
        "variants",
        "space_size",
        "truncated",
        "distinct_suites",
    ]
    .map(String::from)
    .to_vec();
    let rows = r
        .entries
        .iter()
        .map(|e| {
            vec![
                e.name.clone(),
                e.n.to_string(),
                e.variants.to_string(),
                e.space_size.to_string(),
                e.truncated.to_string(),
                e.distinct_suites.to_string(),
            ]
        })
        .collect();
    (header, rows)
}

pub fn rq2_summary_rows(r: &ResilienceReport) -> (Vec<String>, Vec<Vec<String>>) {
    let header = [
        "name",
        "n",
        "variants",
        "distinct_suites",
        "trials",
        "successes",
        "success_rate",
    ]
    .map(String::from)
    .to_vec();
    let rows = r
        .entries
        .iter()
        .map(|e| {
            vec![
                e.name.clone(),
                e.n.to_string(),
                e.variants.to_string(),
                e.distinct_suites.to_string(),
                e.trials.to_string(),
                e.successes.to_string(),
                format!("{:.6}", e.success_rate),
            ]
        })
        .collect();
    (header, rows)
}

/// One row per (entry, trial).
pub fn rq2_csv(r: &ResilienceReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "name",
        "n",
        "trials",
        "successes",
        "success_rate",
        "trial",
        "illegal_test_case",
        "success",
        "witness_variant",
    ])?;
    for e in &r.entries {
        for t in &e.records {
            w.write_record([
                e.name.clone(),
                e.n.to_string(),
                e.trials.to_string(),
                e.successes.to_string(),
                format!("{:.6}", e.success_rate),
                t.trial.to_string(),
                t.illegal_test_case.to_string(),
                t.success.to_string(),
                t.witness_variant
                    .map_or_else(String::new, |v| v.to_string()),
            ])?;
        }
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn csv_of(header: &[String], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}
