//! Plain-text summary table.

use rankga_core::experiment::SummaryRow;

const HEADERS: [&str; 8] = [
    "Problem",
    "Approach",
    "Pop",
    "Avg generations",
    "Avg lowest cost",
    "Optimum hits",
    "Max generations",
    "Optimum %",
];

fn cost(v: f64) -> String {
    if v != 0.0 && v.abs() < 1e-3 {
        format!("{v:.3e}")
    } else {
        format!("{v:.4}")
    }
}

pub fn render(rows: &[SummaryRow]) -> String {
    let cells: Vec<[String; 8]> = rows
        .iter()
        .map(|r| {
            [
                r.problem.clone(),
                r.approach.clone(),
                r.population_size.to_string(),
                format!("{:.2}", r.avg_generations),
                cost(r.avg_lowest_cost),
                format!("{}/{}", r.optimum_count, r.trials),
                r.max_generations.to_string(),
                format!("{:.1}%", r.optimum_pct),
            ]
        })
        .collect();
    let mut widths = HEADERS.map(str::len);
    for row in &cells {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cols: &[String]| {
        let parts: Vec<String> = cols
            .iter()
            .zip(widths)
            .enumerate()
            .map(|(i, (c, w))| if i < 2 { format!("{c:<w$}") } else { format!("{c:>w$}") })
            .collect();
        parts.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(&HEADERS.map(String::from));
    out += &line(&widths.map(|w| "-".repeat(w)));
    for row in &cells {
        out += &line(row);
    }
    out
}
