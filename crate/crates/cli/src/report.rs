//! Plain-text and JSON rendering. Everything here is a pure function of its
//! input, so reports are byte-identical across runs.

use bifree::{Coefficient, PairDistribution, Series1, Series2, UTGammaSeries};
use serde_json::{json, Value};

pub fn grid_text(rows: &[Vec<String>]) -> String {
    let width = rows
        .iter()
        .flatten()
        .map(|s| s.chars().count())
        .max()
        .unwrap_or(1);
    let mut out = String::new();
    let header: Vec<String> = (0..rows.first().map_or(0, Vec::len))
        .map(|k| format!("{k:>width$}"))
        .collect();
    out.push_str(&format!("    {}\n", header.join("  ")));
    for (j, row) in rows.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        out.push_str(&format!("{j:>3} {}\n", cells.join("  ")));
    }
    out
}

pub fn table_text<C: Coefficient>(title: &str, p: &PairDistribution<C>) -> String {
    let rows: Vec<Vec<String>> = p
        .table()
        .iter()
        .map(|r| r.iter().map(C::render).collect())
        .collect();
    format!("{title}\n{}", grid_text(&rows))
}

pub fn table_json<C: Coefficient>(p: &PairDistribution<C>) -> Value {
    p.to_json()
}

pub fn series2_text<C: Coefficient>(title: &str, s: &Series2<C>) -> String {
    let n = s.order();
    let rows: Vec<Vec<String>> = (0..=n)
        .map(|j| (0..=n).map(|k| s.coeff(j, k).render()).collect())
        .collect();
    format!("{title}\n{}", grid_text(&rows))
}

pub fn series2_json<C: Coefficient>(s: &Series2<C>) -> Value {
    let n = s.order();
    Value::Array(
        (0..=n)
            .map(|j| Value::Array((0..=n).map(|k| s.coeff(j, k).to_json()).collect()))
            .collect(),
    )
}

pub fn series1_text<C: Coefficient>(name: &str, s: &Series1<C>) -> String {
    let cells: Vec<String> = s.coeffs().iter().map(C::render).collect();
    format!("{name}: {}\n", cells.join(", "))
}

pub fn series1_json<C: Coefficient>(s: &Series1<C>) -> Value {
    Value::Array(s.coeffs().iter().map(C::to_json).collect())
}

pub fn ut_json<C: Coefficient>(m: &UTGammaSeries<C>) -> Value {
    json!({
        "d1": series2_json(&m.d1),
        "off": series2_json(&m.off),
        "d2": series2_json(&m.d2),
    })
}

/// `0` for an exact zero, otherwise scientific notation.
pub fn residual(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else {
        format!("{x:.3e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_right_aligned() {
        let rows = vec![
            vec!["1".to_string(), "1/2".into()],
            vec!["-3".into(), "0".into()],
        ];
        assert_eq!(
            grid_text(&rows),
            "      0    1\n  0   1  1/2\n  1  -3    0\n"
        );
    }

    #[test]
    fn residual_format() {
        assert_eq!(residual(0.0), "0");
        assert_eq!(residual(1.5e-12), "1.500e-12");
    }
}
