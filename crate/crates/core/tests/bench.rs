use branchlab::bench::{aggregate, read_results_csv, run_campaign, write_results_csv, Campaign, RowStatus};

fn campaign(extra: &str) -> Campaign {
    Campaign::from_json(&format!(
        r#"{{"instances":[{{"kind":"mdk_large","seed":1,"overrides":{{"n":20,"m":10}}}},
                         {{"kind":"set_packing","seed":2,"overrides":{{"n":30,"m":50}}}}],
            "rules":["def-sb","eff-sb-37"],"baseline":"def-sb"{extra}}}"#
    ))
    .unwrap()
}

#[test]
fn cardinality_of_rows() {
    let c = campaign(r#","primal_gaps":[0.0]"#);
    let r = run_campaign(&c, 2).unwrap();
    assert_eq!(r.rows.len(), 4);
    assert!(r.rows.iter().all(|row| row.status == RowStatus::Optimal && row.gap_remaining == 0.0));
    assert_eq!(r.optima.len(), 2);
}

#[test]
fn thread_count_does_not_change_results() {
    let c = campaign(r#","primal_gaps":[0.0,0.1,null],"seeds":[0,1],"node_limit":7"#);
    let a = run_campaign(&c, 1).unwrap();
    let b = run_campaign(&c, 4).unwrap();
    assert_eq!(a.rows, b.rows);
    let (mut x, mut y) = (Vec::new(), Vec::new());
    write_results_csv(&a.rows, &mut x).unwrap();
    write_results_csv(&b.rows, &mut y).unwrap();
    assert_eq!(x, y);
    assert!(a.rows.iter().any(|r| r.status == RowStatus::NodeLimit));
    for r in &a.rows {
        assert!((0.0..=1.0).contains(&r.gap_remaining));
        if r.status != RowStatus::NodeLimit {
            assert_eq!(r.gap_remaining, 0.0);
        }
    }
}

#[test]
fn tables_recomputed_from_csv_agree() {
    let c = campaign(r#","primal_gaps":[0.05,null],"node_limit":9"#);
    let r = run_campaign(&c, 3).unwrap();
    let mut buf = Vec::new();
    write_results_csv(&r.rows, &mut buf).unwrap();
    let back = read_results_csv(&buf[..]).unwrap();
    let cells = aggregate(&back);
    assert_eq!(cells.len(), r.cells.len());
    for (a, b) in cells.iter().zip(&r.cells) {
        assert_eq!((&a.rule, a.gap, a.solved, a.unsolved), (&b.rule, b.gap, b.solved, b.unsolved));
        for (u, v) in [(a.tree_mean, b.tree_mean), (a.gap_mean, b.gap_mean)] {
            match (u, v) {
                (Some(u), Some(v)) => assert!((u - v).abs() <= 1e-9),
                (u, v) => assert_eq!(u, v),
            }
        }
    }
    assert!(r.summary(Some("def-sb")).contains("| eff-sb-37 |"));
}

#[test]
fn failures_become_error_rows() {
    let c = Campaign::from_json(
        r#"{"instances":["/nonexistent/x.json",{"kind":"mdk_small","seed":0,"overrides":{"n":8,"m":3}}],
            "rules":["def-sb"],"primal_gaps":[null]}"#,
    )
    .unwrap();
    let r = run_campaign(&c, 1).unwrap();
    assert_eq!(r.rows.len(), 2);
    assert_eq!(r.rows.iter().filter(|x| x.status == RowStatus::Error).count(), 1);
}
