//! End-to-end verification matrix: one line per criterion, asserted green.
//!
//! Run with `cargo test --release -p painleve-core --test acceptance`
//! (the 5-second symbolic-tower budget assumes an optimized build).

use painleve_core::acceptance::run_all;

#[test]
fn acceptance_matrix() {
    let rows = run_all(false).expect("matrix evaluation must not error");
    let mut all = true;
    for r in &rows {
        println!("{}", r.line());
        all &= r.pass;
    }
    assert_eq!(rows.len(), 16, "every criterion reports exactly one row");
    assert!(all, "acceptance criteria failed; see rows above");
}

#[test]
fn quick_subset() {
    let rows = run_all(true).expect("quick subset must not error");
    for r in &rows {
        println!("{}", r.line());
        assert!(r.pass, "quick-row {} failed", r.id);
    }
    assert_eq!(rows.len(), 3);
}
