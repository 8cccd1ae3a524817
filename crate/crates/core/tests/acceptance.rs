//! Acceptance run: one PASS/FAIL line per criterion. Each criterion is a list
//! of named sub-items; the test asserts that the failing sub-items are exactly
//! the documented deviations in `KNOWN_DEVIATIONS`, so a regression and an
//! unexplained improvement both fail it.

use std::collections::BTreeSet;
use std::io::Write;
use std::sync::Arc;
use std::time::{Duration, Instant};

use qhf::catalog::{build_scenario, compare_b3_table, Params, Run, RunOptions};
use qhf::group::{abelian_dual_with_basis, build_family, Family, GroupAutomorphism};
use qhf::hypergroup::delsart_expectation;
use qhf::kac::{dual_idempotents, group_kac};
use qhf::report::Status;
use qhf::twist::{
    admissible_automorphism, classify_cocycle, gauge_unitary, lift_cocycle, twist_bundle, BundleAutomorphism,
    CocycleClass, CocycleTable,
};
use qhf::Complex64;

/// Residual bound for bundle axioms and the coefficient tables.
const TOL: f64 = 1e-9;
/// Bound for the controls, which must be exact up to rounding.
const CONTROL_TOL: f64 = 1e-12;
/// Runtime limits in seconds.
const QN_SECONDS: f64 = 10.0;
const S4_SECONDS: f64 = 30.0;
const A5_SECONDS: f64 = 120.0;
/// Complete positivity must be evaluated up to this dim A.
const CP_DIM: usize = 24;

/// Sub-items that fail for reasons analyzed in the decision ledger.
const KNOWN_DEVIATIONS: &[(u8, &str)] = &[
    // Q2 = Kac-Paljutkin: the twisted coproduct comes out cocommutative.
    (1, "Q2 non-cocommutative"),
    (1, "Q2 symmetry witness"),
    (2, "non-symmetric"),
    // The induced coproduct is symmetric for p = n - 1.
    (4, "D(4,3) symmetry witness"),
    (4, "D(6,5) symmetry witness"),
    // (6,7) satisfies every parameter rule and is accepted.
    (4, "D(6,7) rejected"),
    // Conjugation by (12) does not preserve the twisted coproduct of A5.
    (6, "A5 route cocycle_criterion"),
    (6, "A5 non-symmetric"),
    (6, "A5 witness at (345)"),
];

struct Criterion {
    id: u8,
    title: &'static str,
    items: Vec<(String, bool)>,
}

impl Criterion {
    fn new(id: u8, title: &'static str) -> Self {
        Criterion { id, title, items: Vec::new() }
    }

    fn item(&mut self, name: impl Into<String>, ok: bool) {
        self.items.push((name.into(), ok));
    }

    fn failures(&self) -> Vec<&str> {
        self.items.iter().filter(|(_, ok)| !ok).map(|(n, _)| n.as_str()).collect()
    }

    fn line(&self) -> String {
        let failed = self.failures();
        let status = if failed.is_empty() { "PASS" } else { "FAIL" };
        let mut line = format!("criterion {:>2} {status}  {} ({} items", self.id, self.title, self.items.len());
        if failed.is_empty() {
            line.push(')');
        } else {
            line.push_str(&format!(", failed: {})", failed.join("; ")));
        }
        line
    }
}

struct Timed {
    label: String,
    run: Run,
    elapsed: Duration,
}

fn params(pairs: &[(&str, usize)]) -> Params {
    pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
}

fn run(runs: &mut Vec<Timed>, label: &str, scenario: &str, p: &[(&str, usize)]) -> usize {
    let start = Instant::now();
    let r = build_scenario(scenario, &params(p), &RunOptions::default())
        .unwrap_or_else(|e| panic!("{label}: {e}"));
    runs.push(Timed { label: label.to_string(), run: r, elapsed: start.elapsed() });
    runs.len() - 1
}

fn check_passes(r: &Run, name: &str) -> bool {
    r.report.checks.get(name).is_some_and(|c| c.status == Status::Pass)
}

/// As [`check_passes`], also looking in the diagnostics, where a
/// counterexample scenario files its hypergroup checks.
fn recorded_pass(r: &Run, name: &str) -> bool {
    check_passes(r, name) || r.report.diagnostics.get(name).is_some_and(|c| c.status == Status::Pass)
}

fn expectation_passes(r: &Run, quantity: &str) -> bool {
    r.report.expectation(quantity).is_some_and(|e| e.status == Status::Pass)
}

fn class_is(v: &Option<serde_json::Value>, name: &str) -> bool {
    v.as_ref().and_then(|v| v.as_str()) == Some(name)
}

fn bundle_within(r: &Run, tol: f64) -> bool {
    let bundle: Vec<_> = r.report.checks.checks().iter().filter(|c| c.name.starts_with("bundle.")).collect();
    !bundle.is_empty()
        && bundle.iter().all(|c| c.status == Status::Pass)
        && bundle.iter().filter(|c| c.name != "bundle.haar_faithful").all(|c| c.residual < tol)
}

/// Blocks of the quasiquaternion hypergroup: `1^(n+2) 2^((n-1)/2)` for odd
/// `n`, `1^(n+4) 2^((n-2)/2)` for even `n`.
fn qn_blocks(n: usize) -> Vec<usize> {
    let (ones, twos) = if n % 2 == 1 { (n + 2, (n - 1) / 2) } else { (n + 4, (n - 2) / 2) };
    let mut b = vec![1; ones];
    b.extend(vec![2; twos]);
    b
}

fn criterion_1(runs: &mut Vec<Timed>) -> Criterion {
    let mut c = Criterion::new(1, "quasiquaternion n = 2..6");
    for n in 2..=6 {
        let i = run(runs, &format!("Q{n}"), "quasiquaternion", &[("n", n)]);
        let t = &runs[i];
        let (r, k) = (&t.run, &t.run.report.computed);
        c.item(format!("Q{n} pseudo_cocycle"), class_is(&k.cocycle_class, "pseudo_cocycle"));
        c.item(format!("Q{n} pseudo_coinvolutive"), class_is(&k.coinvolutivity_class, "pseudo_coinvolutive"));
        c.item(format!("Q{n} twisted bundle axioms"), bundle_within(r, TOL));
        c.item(format!("Q{n} non-cocommutative"), k.twisted_cocommutative == Some(false));
        c.item(format!("Q{n} route gauged"), class_is(&k.route, "gauged"));
        let z = r.report.diagnostics.get("gamma0.gauged.z_commutant").map_or(f64::INFINITY, |c| c.residual);
        c.item(format!("Q{n} Z in commutant"), z <= TOL);
        c.item(format!("Q{n} u² = λ(b²)"), check_passes(r, "gauge.square_is_lambda_b2"));
        c.item(format!("Q{n} dim B = 3n"), k.dim_b == Some(3 * n));
        c.item(format!("Q{n} blocks"), k.blocks.as_deref() == Some(qn_blocks(n).as_slice()));
        c.item(format!("Q{n} symmetry witness"), k.witness.is_some());
        c.item(format!("Q{n} runtime"), t.elapsed.as_secs_f64() <= QN_SECONDS);
    }
    c
}

fn criterion_2(runs: &mut Vec<Timed>) -> Criterion {
    let mut c = Criterion::new(2, "Kac-Paljutkin control");
    let i = run(runs, "KP", "kac_paljutkin", &[]);
    let k = &runs[i].run.report.computed;
    c.item("commutative", k.commutative == Some(true));
    c.item("dim B = 6", k.dim_b == Some(6));
    c.item("non-symmetric", k.symmetric == Some(false));
    c
}

fn criterion_3(runs: &[Timed]) -> Criterion {
    let mut c = Criterion::new(3, "B3 table");
    let q3 = &runs.iter().find(|t| t.label == "Q3").expect("Q3 ran").run;
    match compare_b3_table(&q3.hypergroup) {
        Ok(cmp) => {
            c.item("nine expansions reproduced", cmp.total_terms > 0 && cmp.mismatched_terms == 0);
            c.item("residual within tolerance", cmp.max_residual <= TOL);
            c.item("mismatches itemized", cmp.mismatches.len() == cmp.mismatched_terms);
        }
        Err(e) => c.item(format!("comparison ran ({e})"), false),
    }
    for check in [
        "hypergroup.coassociativity",
        "hypergroup.counit",
        "hypergroup.complete_positivity_violations",
        "hypergroup.haar_unique",
        "hypergroup.strong_invariance",
    ] {
        c.item(check, check_passes(q3, check));
    }
    c
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn criterion_4(runs: &mut Vec<Timed>) -> Criterion {
    let mut c = Criterion::new(4, "dihedral family");
    for (n, p) in [(4usize, 3usize), (6, 5), (6, 7), (8, 3), (9, 8)] {
        let m = 2 * n;
        let label = format!("D({n},{p})");
        // Parameter rule, restated independently of the library.
        let valid = n >= 4 && 1 < p && p < m - 1 && gcd(p, m) == 1 && (p * p) % m == 1;
        let spec_rejects = (n, p) == (6, 7);
        let start = Instant::now();
        let built = build_scenario("dihedral", &params(&[("n", n), ("p", p)]), &RunOptions::default());
        if !valid || spec_rejects {
            c.item(format!("{label} rejected"), built.is_err());
        }
        let Ok(r) = built else { continue };
        runs.push(Timed { label: label.clone(), run: r, elapsed: start.elapsed() });
        let k = &runs.last().expect("pushed").run.report.computed;
        let r_count = (0..m).filter(|x| (x * (p - 1)) % m == 0).count();
        c.item(format!("{label} strict cocycle"), class_is(&k.cocycle_class, "cocycle"));
        c.item(format!("{label} strongly coinvolutive"), class_is(&k.coinvolutivity_class, "strong"));
        c.item(format!("{label} dim B = 2n + r"), k.dim_b == Some(m + r_count));
        if (n, p) == (4, 3) {
            c.item(format!("{label} blocks"), k.blocks.as_deref() == Some(&[1, 1, 1, 1, 1, 1, 2][..]));
        }
        c.item(format!("{label} symmetry witness"), k.witness.is_some());
    }
    c
}

fn criterion_5(runs: &mut Vec<Timed>) -> Criterion {
    let mut c = Criterion::new(5, "symmetric group n = 4");
    let i = run(runs, "S4", "symmetric", &[("n", 4)]);
    let t = &runs[i];
    let k = &t.run.report.computed;
    c.item("dim B = 14", k.dim_b == Some(14));
    c.item("noncommutative", k.blocks.as_ref().is_some_and(|b| b.iter().any(|&s| s > 1)));
    c.item("symmetry witness", k.witness.is_some());
    c.item("witness at c = (2341)", expectation_passes(&t.run, "named_witness_nonzero"));
    c.item("runtime", t.elapsed.as_secs_f64() <= S4_SECONDS);
    c
}

fn criterion_6(runs: &mut Vec<Timed>) -> Criterion {
    let mut c = Criterion::new(6, "alternating groups");
    let i = run(runs, "A4", "alternating", &[("n", 4)]);
    let k = &runs[i].run.report.computed;
    c.item("A4 dim B = 7", k.dim_b == Some(7));
    c.item("A4 route cocycle_criterion", class_is(&k.route, "cocycle_criterion"));
    let i = run(runs, "A5", "alternating", &[("n", 5)]);
    let t = &runs[i];
    let k = &t.run.report.computed;
    c.item("A5 dim B = 33", k.dim_b == Some(33));
    c.item("A5 route cocycle_criterion", class_is(&k.route, "cocycle_criterion"));
    c.item("A5 non-symmetric", k.symmetric == Some(false));
    c.item("A5 witness at (345)", expectation_passes(&t.run, "named_witness_nonzero"));
    c.item("A5 runtime", t.elapsed.as_secs_f64() <= A5_SECONDS);
    c
}

fn criterion_7(runs: &mut Vec<Timed>) -> Criterion {
    let mut c = Criterion::new(7, "Z_m^2 x| Z_2");
    let i = run(runs, "zm2(3,2)", "zm2", &[("m", 3), ("r", 2)]);
    let r = &runs[i].run;
    let k = &r.report.computed;
    c.item("m=3 dim B = 10", k.dim_b == Some(10));
    c.item("m=3 witness at P(λ(as))", expectation_passes(r, "named_witness_nonzero"));
    c.item("m=3 cocycle", class_is(&k.cocycle_class, "cocycle"));
    c.item("m=3 counital", expectation_passes(r, "counital"));
    let i = run(runs, "zm2(5,4)", "zm2", &[("m", 5), ("r", 4)]);
    let k = &runs[i].run.report.computed;
    c.item("m=5 dim B = 26", k.dim_b == Some(26));
    c.item("m=5 non-symmetric", k.symmetric == Some(false));
    c
}

fn criterion_8(runs: &mut Vec<Timed>) -> Criterion {
    let mut c = Criterion::new(8, "Z6 orbital counterexample");
    let i = run(runs, "z6_orbital", "z6_orbital", &[]);
    let r = &runs[i].run;
    for q in ["kernel_coideal", "kernel_witness", "coassociative", "djs_nonnegative", "djs_neutral", "dual_pushforward"] {
        c.item(q, expectation_passes(r, q));
    }
    c.item("report", r.report.passed());
    c
}

fn criterion_9(runs: &mut Vec<Timed>) -> Criterion {
    let mut c = Criterion::new(9, "controls, Haar uniqueness, complete positivity");
    for family in ["dihedral", "quasiquaternion"] {
        let opts = RunOptions::default();
        let p: Params = [("family", family), ("n", "2")].iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        let start = Instant::now();
        let r = build_scenario("trivial_twist", &p, &opts).expect("control runs");
        for check in ["control.expectation_is_identity", "control.coproduct_unchanged"] {
            let ok = r.report.checks.get(check).is_some_and(|c| c.status == Status::Pass && c.residual <= CONTROL_TOL);
            c.item(format!("trivial {family} {check}"), ok);
        }
        runs.push(Timed { label: format!("trivial {family}"), run: r, elapsed: start.elapsed() });
    }
    let i = run(runs, "z6_delsart", "z6_delsart", &[]);
    c.item("z6_delsart matches the average", check_passes(&runs[i].run, "matches_delsart"));
    for t in runs.iter() {
        c.item(format!("{} Haar unique", t.label), recorded_pass(&t.run, "hypergroup.haar_unique"));
        c.item(format!("{} Haar = μ", t.label), recorded_pass(&t.run, "hypergroup.haar_matches_mu"));
        if t.run.base.order() <= CP_DIM {
            c.item(format!("{} Choi PSD", t.label), recorded_pass(&t.run, "hypergroup.complete_positivity_violations"));
        }
    }
    c
}

fn criterion_10() -> Criterion {
    let mut c = Criterion::new(10, "hypothesis falsification");
    let i = Complex64::new(0.0, 1.0);
    let base = group_kac(build_family(Family::Quasiquaternion(3)).expect("Q3"));
    let g = Arc::clone(base.group());
    let b = g.find("b").expect("b");
    let fam = dual_idempotents(&base, &abelian_dual_with_basis(&g, &[b]).expect("dual"));
    let table = CocycleTable::conjugate_symmetric(4, &[(1, 2, i), (2, 3, i), (3, 1, i)]);

    let refused = |t: &CocycleTable| {
        let omega = lift_cocycle(t, &fam).expect("lift");
        let class = classify_cocycle(&omega, &base, TOL).class;
        let u = gauge_unitary(&omega, &base);
        (class == CocycleClass::Invalid, twist_bundle(&base, &omega, &u, TOL).is_err())
    };
    let (invalid, refuses) = refused(&table);
    c.item("unperturbed ω accepted", !invalid && !refuses);

    let mut off_circle = table.clone();
    off_circle.set(1, 2, table.get(1, 2) * 1.1);
    let (invalid, refuses) = refused(&off_circle);
    c.item("off unit circle: invalid", invalid);
    c.item("off unit circle: twist refused", refuses);

    // Unit modulus, but ω(1,1) = e^{0.7i} breaks both cocycle identities.
    let mut broken = table.clone();
    broken.set(1, 1, Complex64::from_polar(1.0, 0.7));
    c.item("broken cocycle: unit modulus", broken.unit_deviation() < CONTROL_TOL);
    let (invalid, refuses) = refused(&broken);
    c.item("broken cocycle: invalid", invalid);
    c.item("broken cocycle: twist refused", refuses);

    let omega = lift_cocycle(&table, &fam).expect("lift");
    let twisted = twist_bundle(&base, &omega, &gauge_unitary(&omega, &base), TOL).expect("twist");
    let a = g.find("a").expect("a");
    let alpha = GroupAutomorphism::from_images(&g, &[a, b], &[a, g.pow(b, 3)]).expect("α");
    let certified = admissible_automorphism(&alpha, &twisted, TOL);
    c.item("certified γ accepted", certified.certified() && delsart_expectation(&twisted, &[certified], TOL).is_ok());
    let raw = BundleAutomorphism::uncertified(&alpha, &twisted);
    c.item("uncertified γ refused", delsart_expectation(&twisted, &[raw], TOL).is_err());
    c
}

#[test]
fn acceptance_criteria() {
    let mut runs = Vec::new();
    let mut criteria = vec![criterion_1(&mut runs), criterion_2(&mut runs)];
    criteria.push(criterion_3(&runs));
    criteria.push(criterion_4(&mut runs));
    criteria.push(criterion_5(&mut runs));
    criteria.push(criterion_6(&mut runs));
    criteria.push(criterion_7(&mut runs));
    criteria.push(criterion_8(&mut runs));
    criteria.push(criterion_9(&mut runs));
    criteria.push(criterion_10());

    // Written to stderr directly so the lines show without --nocapture.
    let mut err = std::io::stderr().lock();
    writeln!(err).expect("stderr");
    for c in &criteria {
        writeln!(err, "{}", c.line()).expect("stderr");
    }
    drop(err);
    let failed: BTreeSet<(u8, String)> =
        criteria.iter().flat_map(|c| c.failures().into_iter().map(|f| (c.id, f.to_string()))).collect();
    let known: BTreeSet<(u8, String)> = KNOWN_DEVIATIONS.iter().map(|(i, s)| (*i, s.to_string())).collect();
    let unexpected: Vec<_> = failed.difference(&known).collect();
    let resolved: Vec<_> = known.difference(&failed).collect();
    assert!(unexpected.is_empty(), "undocumented failures: {unexpected:?}");
    assert!(resolved.is_empty(), "documented deviations now pass, update the ledger: {resolved:?}");
}
