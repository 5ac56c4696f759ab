//! Scratch: run full_report over every fixture × documented subset lists.
use replacer_core::corpus::{fixture, fixture_names};
use replacer_core::structure::full_report;
use replacer_core::DEFAULT_TOL;

fn main() {
    for name in fixture_names() {
        let f = fixture(name).unwrap();
        println!("== {name}");
        for (list, want) in [(&f.expected_correctable, true), (&f.expected_uncorrectable, false)] {
            for subset in list.iter() {
                let report = full_report(&f.code, subset, None, DEFAULT_TOL, 42).unwrap();
                let got = report.is_correctable();
                let mark = if got == want { "ok  " } else { "MISMATCH" };
                println!("  {mark} E={:?} want {want} got {:?}", subset.indices(), report.overall);
            }
        }
    }
}
