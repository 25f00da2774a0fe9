//! Runs the nine acceptance criteria and prints one line per criterion.

use brauer_core::acceptance::run_all;

#[test]
fn acceptance_criteria() {
    let results = run_all();
    for r in &results {
        println!("{r}");
    }
    let failed: Vec<u8> = results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    assert_eq!(results.len(), 9);
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
