use super::metrics::{reduction_pct, shifted_geomean};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt::Write as _;
use std::io::{Read, Write};

/// Shift for tree-size means.
pub const TREE_SHIFT: f64 = 100.0;
/// Shift for gap-remaining means.
pub const GAP_SHIFT: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Optimal,
    NodeLimit,
    Infeasible,
    Error,
}

impl RowStatus {
    pub fn solved(self) -> bool {
        matches!(self, RowStatus::Optimal | RowStatus::Infeasible)
    }
}

/// One run. `gap` is empty when no initial primal bound was given and
/// `wall_time` is empty unless timing was requested.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub instance: String,
    pub rule: String,
    pub gap: Option<f64>,
    pub seed: u64,
    pub status: RowStatus,
    pub tree_size: usize,
    pub gap_remaining: f64,
    pub wall_time: Option<f64>,
}

/// Absent gaps sort after every finite gap.
pub fn cmp_gap(a: Option<f64>, b: Option<f64>) -> Ordering {
    a.unwrap_or(f64::INFINITY).total_cmp(&b.unwrap_or(f64::INFINITY))
}

pub fn row_order(a: &ResultRow, b: &ResultRow) -> Ordering {
    a.instance
        .cmp(&b.instance)
        .then_with(|| a.rule.cmp(&b.rule))
        .then_with(|| cmp_gap(a.gap, b.gap))
        .then_with(|| a.seed.cmp(&b.seed))
}

pub fn write_results_csv(rows: &[ResultRow], out: impl Write) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_results_csv(input: impl Read) -> Result<Vec<ResultRow>, csv::Error> {
    csv::Reader::from_reader(input).deserialize().collect()
}

/// Aggregates for one (rule, gap) pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cell {
    pub rule: String,
    pub gap: Option<f64>,
    pub solved: usize,
    pub unsolved: usize,
    pub errors: usize,
    pub tree_mean: Option<f64>,
    pub gap_mean: Option<f64>,
}

/// Groups rows by (rule, gap) in first-appearance order of rules and
/// ascending gap order.
pub fn aggregate(rows: &[ResultRow]) -> Vec<Cell> {
    let mut rules: Vec<&str> = Vec::new();
    let mut gaps: Vec<Option<f64>> = Vec::new();
    for r in rows {
        if !rules.contains(&r.rule.as_str()) {
            rules.push(&r.rule);
        }
        if !gaps.iter().any(|g| cmp_gap(*g, r.gap).is_eq()) {
            gaps.push(r.gap);
        }
    }
    gaps.sort_by(|a, b| cmp_gap(*a, *b));
    let mut cells = Vec::new();
    for &gap in &gaps {
        for &rule in &rules {
            let cell_rows: Vec<&ResultRow> =
                rows.iter().filter(|r| r.rule == rule && cmp_gap(r.gap, gap).is_eq()).collect();
            if cell_rows.is_empty() {
                continue;
            }
            let trees: Vec<f64> = cell_rows.iter().filter(|r| r.status.solved()).map(|r| r.tree_size as f64).collect();
            let gaps_left: Vec<f64> =
                cell_rows.iter().filter(|r| r.status == RowStatus::NodeLimit).map(|r| r.gap_remaining).collect();
            cells.push(Cell {
                rule: rule.to_string(),
                gap,
                solved: trees.len(),
                unsolved: gaps_left.len(),
                errors: cell_rows.iter().filter(|r| r.status == RowStatus::Error).count(),
                tree_mean: shifted_geomean(&trees, TREE_SHIFT),
                gap_mean: shifted_geomean(&gaps_left, GAP_SHIFT),
            });
        }
    }
    cells
}

fn gap_label(gap: Option<f64>) -> String {
    match gap {
        Some(g) => format!("{}%", g * 100.0),
        None => "none".to_string(),
    }
}

/// Markdown tables, one per primal gap. With a baseline rule, a column gives
/// each rule's tree-size reduction against it.
pub fn summary_markdown(cells: &[Cell], baseline: Option<&str>) -> String {
    let mut s = String::from("# Campaign summary\n\n");
    let _ = writeln!(
        s,
        "Tree sizes are shifted geometric means (shift {TREE_SHIFT}) over solved runs; \
         gap remaining is the shifted geometric mean (shift {GAP_SHIFT}) over runs stopped by the node limit.\n"
    );
    let mut gaps: Vec<Option<f64>> = Vec::new();
    for c in cells {
        if !gaps.iter().any(|g| cmp_gap(*g, c.gap).is_eq()) {
            gaps.push(c.gap);
        }
    }
    for gap in gaps {
        let _ = writeln!(s, "## Initial primal gap: {}\n", gap_label(gap));
        let row: Vec<&Cell> = cells.iter().filter(|c| cmp_gap(c.gap, gap).is_eq()).collect();
        let base = baseline.and_then(|b| row.iter().find(|c| c.rule == b)).and_then(|c| c.tree_mean);
        s.push_str("| rule | solved | tree size | reduction | unsolved | gap remaining | errors |\n");
        s.push_str("|---|---:|---:|---:|---:|---:|---:|\n");
        for c in row {
            let tree = c.tree_mean.map_or("-".into(), |t| format!("{t:.1}"));
            let red = match (base, c.tree_mean) {
                (Some(b), Some(t)) if b > 0.0 => format!("{:.1}%", reduction_pct(b, t)),
                _ => "-".into(),
            };
            let gl = c.gap_mean.map_or("-".into(), |g| format!("{:.2}%", 100.0 * g));
            let _ =
                writeln!(s, "| {} | {} | {tree} | {red} | {} | {gl} | {} |", c.rule, c.solved, c.unsolved, c.errors);
        }
        s.push('\n');
    }
    s
}
