use crate::VerifyArgs;
use treecut::oracle::{run_verification, VerifyConfig};

/// Prints one line per check and every failing instance; true iff all pass.
pub fn run(a: &VerifyArgs) -> bool {
    let cfg = VerifyConfig {
        seed: a.seed,
        instances: a.instances,
        cap: a.cap,
        mutate_penalty: a.mutate_penalty,
        ..VerifyConfig::default()
    };
    let mut ok = true;
    for c in run_verification(&cfg) {
        let status = if c.ok() { "PASS" } else { "FAIL" };
        println!(
            "{status} {}: {} passed, {} failed, {} skipped",
            c.name, c.passed, c.failed, c.skipped
        );
        for n in &c.notices {
            println!("  note: {n}");
        }
        for f in &c.failures {
            println!("  {f}");
        }
        ok &= c.ok();
    }
    ok
}
