//! Stored reference outputs. Regenerate with `SOAG_BLESS_GOLDEN=1 cargo test --test golden`.

mod common;

#[test]
fn golden_files_match() {
    let outputs = common::golden_outputs();
    if let Err(e) = common::check_golden(&outputs) {
        panic!("{e}; rerun with {}=1 after an intended change", common::BLESS_ENV);
    }
}

#[test]
fn outputs_are_deterministic() {
    let (a, b) = (common::golden_outputs(), common::golden_outputs());
    for ((name, x), (_, y)) in a.iter().zip(&b) {
        assert!(x == y, "{name} differs between runs");
    }
}
