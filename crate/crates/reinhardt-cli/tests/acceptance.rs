//! The eleven acceptance criteria, one line each. Run with `--nocapture` to see the table.

use reinhardt_cli::audit::{run_all, CRITERIA};

#[test]
fn acceptance() {
    let results = run_all(0, true);
    assert_eq!(results.len(), CRITERIA.len());
    for r in &results {
        println!("{}", r.line());
    }
    let failed: Vec<u8> = results
        .iter()
        .filter(|r| !r.passed())
        .map(|r| r.id)
        .collect();
    println!(
        "{}/{} criteria passed",
        results.len() - failed.len(),
        results.len()
    );
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
