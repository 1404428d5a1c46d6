use alpha_core::gallery::{run, DEFAULT_SEED};

#[test]
fn acceptance() {
    let mut rows = run(&[], DEFAULT_SEED);
    rows.sort_by_key(|r| r.id);
    assert_eq!(rows.len(), 11);
    for r in &rows {
        println!("criterion {:>2} [{}] {}: {} ({:.2?})", r.id, if r.pass { "PASS" } else { "FAIL" }, r.key, r.observed, r.elapsed);
    }
    let failed: Vec<&str> = rows.iter().filter(|r| !r.pass).map(|r| r.key.as_str()).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
