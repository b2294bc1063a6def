use std::io::Write;

use witt_parshin::selftest::{Options, CRITERIA};

#[test]
fn acceptance() {
    let opts = Options::default();
    let mut failed = Vec::new();
    let mut err = std::io::stderr();
    for criterion in CRITERIA {
        let report = criterion(&opts);
        writeln!(err, "{report}").unwrap();
        if !report.passed() {
            failed.push(report.id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
