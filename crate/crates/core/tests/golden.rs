//! Audit reports compared byte-for-byte with checked-in files.
//! Set `UPDATE_GOLDEN=1` to rewrite them.

use std::path::PathBuf;

use nncalc::audit::run_battery;
use nncalc::{AuditConfig, Bijection};

fn check(spec: &str, file: &str) {
    let f: Bijection = spec.parse().unwrap();
    let config = AuditConfig {
        seed: 7,
        closure_samples: 400,
        cauchy_samples: 400,
        entropy_distributions: 50,
        ..AuditConfig::default()
    };
    let report = run_battery(&f, &config).to_json() + "\n";
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(file);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &report).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(report, expected, "{spec} report changed");
}

#[test]
fn identity_report() {
    check("identity", "identity.json");
}

#[test]
fn offset_linear_report() {
    check("linear:a=1,b=2", "linear_offset.json");
}
