//! Acceptance run: one PASS/FAIL line per criterion. Always exits 0; the
//! lines are the result.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use ordab::intlin::oracle::{hilbert_disagreement, minor_gcd_invariant_factors};
use ordab::intlin::{smith_normal_form, IntMatrix};
use ordab::sweep::{
    factorization_suite, ff_free_check, ff_sweep, h_rali_sweep, jee_sweep, random_finite_monotone,
    random_free_monotone, v_conservative_sweep, FiniteUniverse,
};
use ordab::vgroups::{all_quantales, v_universal_sweep, vab_lax_preproto_sweep};
use ordab::Budget;
use ordab_cli::report::{Item, Outcome};
use ordab_cli::suite;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

struct Judged {
    ok: bool,
    detail: String,
}

fn verdict(ok: bool, detail: impl Into<String>) -> Judged {
    Judged { ok, detail: detail.into() }
}

fn all_yes(items: &[Item]) -> (bool, String) {
    let bad: Vec<&str> = items.iter().filter(|i| i.verdict != Outcome::Yes).map(|i| i.id.as_str()).collect();
    let detail = if bad.is_empty() { format!("{} items yes", items.len()) } else { format!("not yes: {}", bad.join(", ")) };
    (bad.is_empty(), detail)
}

fn find<'a>(items: &'a [Item], id: &str) -> &'a Item {
    items.iter().find(|i| i.id == id).unwrap_or_else(|| panic!("no item {}", id))
}

fn run(n: u32, title: &str, limit: Option<Duration>, body: impl FnOnce() -> Judged) {
    let start = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(body));
    let elapsed = start.elapsed();
    let (mut ok, mut detail) = match result {
        Ok(o) => (o.ok, o.detail),
        Err(e) => {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            (false, format!("panicked: {}", msg.unwrap_or_default()))
        }
    };
    if let Some(l) = limit {
        if elapsed > l {
            ok = false;
            detail.push_str(&format!("; over the {:?} limit", l));
        }
    }
    println!("{} criterion {}: {} ({}; {:.1?})", if ok { "PASS" } else { "FAIL" }, n, title, detail, elapsed);
}

fn order8() -> &'static FiniteUniverse {
    static U: std::sync::OnceLock<FiniteUniverse> = std::sync::OnceLock::new();
    U.get_or_init(|| FiniteUniverse::new(8))
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, lo: i64, hi: i64) -> IntMatrix {
    let data: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(lo..=hi)).collect()).collect();
    let refs: Vec<&[i64]> = data.iter().map(Vec::as_slice).collect();
    IntMatrix::from_i64(&refs)
}

fn ordab_report(args: &[&str]) -> (Option<i32>, Value) {
    let defs = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../defs/order.defs");
    let out = Command::new(env!("CARGO_BIN_EXE_ordab"))
        .arg("-w")
        .arg(defs)
        .args(args)
        .output()
        .expect("binary runs");
    (out.status.code(), serde_json::from_slice(&out.stdout).expect("JSON report"))
}

fn main() {
    let b = Budget::default();
    let secs = Duration::from_secs;

    run(1, "identity precomma cone, projections ordered, pair not ordered", Some(secs(1)), || {
        let (ok, detail) = all_yes(&suite::c3_failure(&b));
        verdict(ok, detail)
    });

    run(2, "colax example squares", Some(secs(1)), || {
        let (ok, detail) = all_yes(&suite::colax_failure(&b));
        verdict(ok, detail)
    });

    run(3, "vertical change of base reflects isos, order <= 8", Some(secs(600)), || {
        let r = v_conservative_sweep(order8(), 16, 100_003, &b).expect("sweep runs");
        verdict(
            r.passed() && r.v_iso > 0 && r.cross_checked > 0,
            format!(
                "{} instances, {} iso, {} violations, {} inverse failures, {}/{} cross-check disagreements",
                r.instances, r.v_iso, r.violations, r.inverse_failures, r.cross_disagreements, r.cross_checked
            ),
        )
    });

    run(4, "jointly extremally epi decision vs brute force, order <= 12", Some(secs(600)), || {
        let u = FiniteUniverse::new(12);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let r = jee_sweep(&u, 12, 6, 7, 8, &mut rng, &b).expect("sweep runs");
        verdict(
            r.passed() && r.instances >= 500 && r.precomma_pairs > 0,
            format!(
                "{} pairs ({} yes), {} disagreements, {} unknown; {} precomma pairs, {} not yes",
                r.instances, r.yes, r.disagreements, r.unknown, r.precomma_pairs, r.precomma_failures
            ),
        )
    });

    run(5, "factorization systems, fills, non-stability", Some(secs(120)), || {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let maps: Vec<_> = (0..50)
            .map(|i| if i % 2 == 0 { random_free_monotone(&mut rng) } else { random_finite_monotone(order8(), &mut rng) })
            .collect::<Result<_, _>>()
            .expect("maps build");
        let r = factorization_suite(&maps, &b).expect("suite runs");
        let items = suite::factorizations(&b);
        let stable = find(&items, "left-classes-not-stable");
        verdict(
            r.passed() && r.morphisms == 50 && stable.verdict == Outcome::Yes,
            format!(
                "{} maps, {} certified factorizations, {}/{} unique fills, {} failures; non-stability {:?}",
                r.morphisms,
                r.certified,
                r.unique_fills,
                r.squares,
                r.failures.len(),
                stable.verdict
            ),
        )
    });

    run(6, "horizontal change of base witness on rali points", Some(secs(120)), || {
        let r = h_rali_sweep(order8(), 8, 2000, &b).expect("sweep runs");
        verdict(
            r.passed() && r.h_iso > 0 && r.witnesses > 0,
            format!(
                "{} instances, {} rali, {} iso, {} witnesses, {} failures, {}/{} cross-check disagreements",
                r.instances, r.rali_instances, r.h_iso, r.witnesses, r.failures, r.cross_disagreements, r.cross_checked
            ),
        )
    });

    run(7, "Hilbert bases and Smith forms against brute-force oracles", Some(secs(120)), || {
        let mut systems = 0;
        let mut bad = Vec::new();
        for vars in 1..=4u32 {
            for code in 0..7i64.pow(vars) {
                let row: Vec<i64> = (0..vars).map(|k| (code / 7i64.pow(k)) % 7 - 3).collect();
                let a = IntMatrix::from_i64(&[&row]);
                systems += 1;
                if let Some(d) = hilbert_disagreement(&a, &[0], 6, &b).expect("basis computes") {
                    bad.push(format!("{:?}: {}", row, d));
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let (rows, vars) = (rng.gen_range(2..=3), rng.gen_range(2..=4));
            let a = random_matrix(&mut rng, rows, vars, -3, 3);
            systems += 1;
            if let Some(d) = hilbert_disagreement(&a, &vec![0; rows], 6, &b).expect("basis computes") {
                bad.push(format!("{:?}: {}", a.to_rows(), d));
            }
        }
        let mut snf_bad = 0;
        for _ in 0..200 {
            let (rows, cols) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
            let m = random_matrix(&mut rng, rows, cols, -6, 6);
            let got: Vec<_> = smith_normal_form(&m).invariant_factors();
            if got != minor_gcd_invariant_factors(&m) {
                snf_bad += 1;
            }
        }
        verdict(
            bad.is_empty() && snf_bad == 0,
            format!(
                "{} systems, {} basis disagreements{}; 200 matrices, {} invariant-factor mismatches",
                systems,
                bad.len(),
                bad.first().map(|d| format!(" (first {})", d)).unwrap_or_default(),
                snf_bad
            ),
        )
    });

    run(8, "V-groups: boolean encoding, universality, lax preprotomodularity", Some(secs(300)), || {
        let items = suite::vgroups(&b);
        let encoding = find(&items, "vab-boolean-encoding").verdict == Outcome::Yes;
        let qs3: Vec<_> = all_quantales(3).into_iter().map(Arc::new).collect();
        let u = v_universal_sweep(&qs3, 3, 2);
        let qs4: Vec<_> = all_quantales(4).into_iter().map(Arc::new).collect();
        let r = vab_lax_preproto_sweep(&qs4, 4, 8);
        let non_integral: u64 = r.per_quantale.iter().filter(|t| !t.integral).map(|t| t.violations).sum();
        verdict(
            encoding && u.passed() && r.passed(),
            format!(
                "encoding {}; universality {} ({} lax pairs, {} missing, {} ambiguous); preprotomodularity over {} quantales: \
                 {} instances, {} violations ({} on integral quantales, {} on non-integral ones), first: {}",
                if encoding { "agrees" } else { "disagrees" },
                if u.passed() { "holds" } else { "fails" },
                u.lax_pairs,
                u.missing,
                u.ambiguous,
                r.quantales,
                r.instances,
                r.violations,
                r.integral_violations(),
                non_integral,
                r.first_violation.as_deref().unwrap_or("none")
            ),
        )
    });

    run(9, "fully faithful decision vs brute force", None, || {
        let r = ff_sweep(order8(), &b).expect("sweep runs");
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut free_bad = 0;
        for _ in 0..100 {
            let f = random_free_monotone(&mut rng).expect("map builds");
            if !ff_free_check(&f, 3, &b).expect("check runs") {
                free_bad += 1;
            }
        }
        verdict(
            r.passed() && r.instances >= 300 && free_bad == 0,
            format!(
                "{} finite maps ({} yes), {} disagreements, {} unknown; 100 free maps, {} disagreements",
                r.instances, r.yes, r.disagreements, r.unknown, free_bad
            ),
        )
    });

    run(10, "rali reading discrepancy pinned as an open question", None, || {
        let items = suite::change_of_base(&b);
        let item = find(&items, "precomma-projection-rali");
        let suite_ok = item.verdict == Outcome::Yes
            && item.kind == ordab_cli::report::ItemKind::OpenQuestion
            && item.witness.as_ref().map(|w| w["difference"] == serde_json::json!([1, 0])).unwrap_or(false);
        let (code, lit) = ordab_report(&["check", "rali", "pi2-point"]);
        let (acode, amb) = ordab_report(&["check", "rali", "pi2-point", "--ambient-order"]);
        let cli_ok = code == Some(1)
            && lit["items"][0]["verdict"] == "no"
            && lit["items"][0]["witness"]["difference"] == serde_json::json!([1, 0])
            && lit["items"][0]["note"].as_str().is_some_and(|n| n.contains("open question"))
            && acode == Some(0)
            && amb["items"][0]["verdict"] == "yes";
        verdict(
            suite_ok && cli_ok,
            format!(
                "suite item {}, literal {} with difference {}, ambient {}",
                if suite_ok { "pinned" } else { "off golden" },
                lit["items"][0]["verdict"],
                lit["items"][0]["witness"]["difference"],
                amb["items"][0]["verdict"]
            ),
        )
    });
}
