//! Acceptance suite: one test per release criterion, each printing a single
//! PASS/FAIL line (visible under `--nocapture`) and enforcing its time
//! budget.  Shared eigenform fixtures are built once and excluded from the
//! timed sections.

use std::process::Command;
use std::sync::OnceLock;
use std::time::Instant;

use num_bigint::BigInt;

use symzero::arith::{gcd, primes_up_to};
use symzero::hecke_forms::{eigenform_numeric, hecke_eigenform, Eigenform, SatakeParams};
use symzero::lvalue::{
    self, kernel_closed_form, kernel_quadrature, kernel_tail_bound, KernelSpec,
};
use symzero::sym_power::DirichletSeries;
use symzero::{archimedean, auxiliary, decomposition};

const DIM_ONE_WEIGHTS: [u32; 6] = [12, 16, 18, 20, 22, 26];

static DELTA: OnceLock<Eigenform> = OnceLock::new();

/// The discriminant form with coefficients through 10^5.
fn delta() -> &'static Eigenform {
    DELTA.get_or_init(|| hecke_eigenform(12, 100_000).expect("Delta"))
}

static FORMS: OnceLock<Vec<Eigenform>> = OnceLock::new();

/// The six one-dimensional-space eigenforms with coefficients through
/// 2 * 10^4.
fn forms() -> &'static [Eigenform] {
    FORMS.get_or_init(|| {
        DIM_ONE_WEIGHTS
            .iter()
            .map(|&k| hecke_eigenform(k, 20_000).expect("dim-1 eigenform"))
            .collect()
    })
}

/// Prints the criterion verdict line, then enforces it and the budget.
fn finish(id: u32, label: &str, pass: bool, detail: &str, t0: Instant, budget: Option<f64>) {
    let dt = t0.elapsed().as_secs_f64();
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("acceptance {id:02} {label}: {verdict} ({detail}; {dt:.2}s)");
    assert!(pass, "{label}: {detail}");
    if let Some(b) = budget {
        assert!(dt < b, "{label} exceeded time budget: {dt:.2}s >= {b}s");
    }
}

#[test]
fn c01_multiset_identity_exhaustive() {
    let t0 = Instant::now();
    let sweep = decomposition::verify_multiset_identity(20, 20);
    let pass = sweep.pass && sweep.cases == 420;
    finish(
        1,
        "pairing multiset identity, exhaustive 20x20",
        pass,
        &format!("{} exact cases", sweep.cases),
        t0,
        Some(1.0),
    );
}

#[test]
fn c02_induction_step_recursions() {
    let t0 = Instant::now();
    let mut cases = 0u32;
    let mut pass = true;
    for n in 1..=19 {
        for r in 0..=20 {
            cases += 1;
            if !decomposition::a_recursion_holds(n, r) || !decomposition::b_recursion_holds(n, r)
            {
                pass = false;
            }
        }
    }
    finish(
        2,
        "A/B induction-step recursions, n <= 19, r <= 20",
        pass,
        &format!("{cases} exact cases"),
        t0,
        Some(1.0),
    );
}

#[test]
fn c03_global_decomposition_on_delta() {
    let f = delta();
    let t0 = Instant::now();
    let mut worst = 0.0f64;
    let mut pass = true;
    for n in 1..=3 {
        for r in 0..=2 {
            let cell = decomposition::verify_global_identity(n, r, f, 2000, 1e-8)
                .expect("global identity");
            worst = worst.max(cell.max_deviation);
            pass &= cell.pass;
        }
    }
    finish(
        3,
        "global decomposition, coefficients to 2000",
        pass,
        &format!("9 cells, max deviation {worst:.2e}"),
        t0,
        Some(30.0),
    );
}

#[test]
fn c04_auxiliary_coefficient_positivity() {
    let weight16 = &forms()[1];
    let f12 = delta();
    let t0 = Instant::now();
    let mut worst = f64::INFINITY;
    let mut pass = true;
    for f in [f12, weight16] {
        for n in 1..=6 {
            let series = auxiliary::expand_coeffs(n, f, 10_000).expect("D expansion");
            let (argmin, min) = series.min_coeff();
            worst = worst.min(min);
            if min < -1e-9 {
                pass = false;
                eprintln!("lambda_D({argmin}) = {min:.3e} at n = {n}, k = {}", f.weight());
            }
        }
    }
    finish(
        4,
        "auxiliary D coefficients nonnegative to 10^4",
        pass,
        &format!("n <= 6, two forms, min coefficient {worst:.3e}"),
        t0,
        Some(60.0),
    );
}

#[test]
fn c05_degree_and_pole_bookkeeping() {
    let t0 = Instant::now();
    let mut pass = true;
    for n in 1..=100u32 {
        let fm = auxiliary::factor_multiset(n).expect("factor multiset");
        let expected = if n % 2 == 0 {
            (u64::from(n) + 2).pow(2)
        } else {
            (2 * u64::from(n) + 4).pow(2)
        };
        pass &= fm.total_degree() == expected;
        pass &= auxiliary::target_multiplicity(n) > auxiliary::pole_order(n);
        if n % 2 == 0 {
            pass &= fm.factor_count() == n + 4;
        }
    }
    finish(
        5,
        "D degree, pole order, and factor count",
        pass,
        "n <= 100 exact",
        t0,
        Some(1.0),
    );
}

#[test]
fn c06_deligne_bound_exact() {
    let forms = forms();
    let t0 = Instant::now();
    let primes = primes_up_to(10_000);
    let mut checked = 0u64;
    let mut pass = true;
    for f in forms {
        let coeffs = f.exact_coeffs().expect("exact coefficients");
        let k = f.weight();
        for &p in &primes {
            let ap = &coeffs[p as usize];
            let lhs = ap * ap;
            let rhs = BigInt::from(4) * BigInt::from(p).pow(k - 1);
            if lhs > rhs {
                pass = false;
                eprintln!("a_{}({p})^2 > 4 p^{}", f.weight(), k - 1);
            }
            checked += 1;
        }
    }
    finish(
        6,
        "Deligne bound a(p)^2 <= 4 p^(k-1), exact",
        pass,
        &format!("{checked} prime checks across six weights"),
        t0,
        Some(30.0),
    );
}

#[test]
fn c07_hecke_multiplicativity() {
    let forms = forms();
    let t0 = Instant::now();
    let mut exact_pairs = 0u64;
    let mut pass = true;
    for f in forms {
        let coeffs = f.exact_coeffs().expect("exact coefficients");
        for a in 2usize..=5000 {
            for b in (a + 1)..=(10_000 / a) {
                if gcd(a as u64, b as u64) != 1 {
                    continue;
                }
                if &coeffs[a] * &coeffs[b] != coeffs[a * b] {
                    pass = false;
                }
                exact_pairs += 1;
            }
        }
    }

    // two-dimensional space: numeric eigenforms, floating-point tolerance
    let mut numeric_worst = 0.0f64;
    for index in 0..2 {
        let f = eigenform_numeric(24, index, 10_000, 1e-9).expect("k = 24 eigenform");
        for a in 2usize..=100 {
            for b in (a + 1)..=(10_000 / a) {
                if gcd(a as u64, b as u64) != 1 {
                    continue;
                }
                let gap = (f.lambda(a) * f.lambda(b) - f.lambda(a * b)).abs();
                numeric_worst = numeric_worst.max(gap);
            }
        }
    }
    pass &= numeric_worst < 1e-8;
    finish(
        7,
        "Hecke multiplicativity",
        pass,
        &format!("{exact_pairs} exact coprime pairs; numeric k=24 worst gap {numeric_worst:.2e}"),
        t0,
        None,
    );
}

#[test]
fn c08_kernel_identity_and_ladder() {
    let t0 = Instant::now();
    let mut pass = true;
    let mut worst_ratio = 0.0f64;
    for r in 1..=3u32 {
        for x in [0.5, 2.0, std::f64::consts::E, 10.0] {
            let spec = KernelSpec::new(r, x).expect("kernel spec");
            let closed = kernel_closed_form(&spec);
            let quad = kernel_quadrature(&spec, 1e4, 4096).expect("quadrature");
            let err = (quad.value - closed).abs();
            if err >= quad.tail_bound {
                pass = false;
                eprintln!("r={r} x={x}: error {err:.2e} >= tail {:.2e}", quad.tail_bound);
            }
            worst_ratio = worst_ratio.max(err / quad.tail_bound);
        }
    }

    // doubling the height must at least halve the error for r = 2 (or push
    // it below the rigorous tail bound at the doubled height)
    let spec = KernelSpec::new(2, 2.0).expect("kernel spec");
    let closed = kernel_closed_form(&spec);
    let e1 = (kernel_quadrature(&spec, 1e4, 4096).expect("T").value - closed).abs();
    let e2 = (kernel_quadrature(&spec, 2e4, 4096).expect("2T").value - closed).abs();
    let halves = e2 <= (e1 / 2.0).max(kernel_tail_bound(&spec, 2e4));
    pass &= halves;
    finish(
        8,
        "Mellin kernel quadrature vs closed form",
        pass,
        &format!("12 cells, worst error/tail {worst_ratio:.2e}; halving at r=2: {halves}"),
        t0,
        Some(10.0),
    );
}

#[test]
fn c09_log_coefficient_range() {
    let f = delta();
    let t0 = Instant::now();
    let primes = primes_up_to(1000);
    let mut checked = 0u64;
    let mut pass = true;
    for n in 1..=10u32 {
        let ceiling = 2.0 * f64::from(n + 1) + 1e-9;
        for &p in &primes {
            let sp = SatakeParams::of(f, p).expect("satake");
            for m in 1..=20u32 {
                let c = lvalue::log_coeff(n, &sp, m).expect("log coefficient");
                if !(-1e-9..=ceiling).contains(&c) {
                    pass = false;
                    eprintln!("log coeff out of range: n={n} p={p} m={m} c={c}");
                }
                checked += 1;
            }
        }
    }
    finish(
        9,
        "log-derivative coefficients in [0, 2(n+1)]",
        pass,
        &format!("{checked} evaluations"),
        t0,
        Some(10.0),
    );
}

#[test]
fn c10_l_value_consistency() {
    let f = delta();
    let t0 = Instant::now();
    let mut pass = true;
    let mut detail = String::new();
    for n in 1..=2u32 {
        let s = lvalue::l_value_at_1(n, f, 100_000, f64::INFINITY).expect("smoothed");
        let e = lvalue::l_value_euler(n, f, 100_000).expect("euler");
        let gap = (s.value - e.value).abs();
        let budget = s.error_bound + e.error_bound;
        if gap > budget {
            pass = false;
        }
        detail.push_str(&format!("n={n}: gap {gap:.1e} vs budget {budget:.1e}; "));
    }

    let ones = DirichletSeries::ones(1_000_000, "zeta");
    let anchor = lvalue::smoothed_dirichlet_value(&ones, 2.0, None);
    let zeta2 = std::f64::consts::PI * std::f64::consts::PI / 6.0;
    let anchor_ok = (anchor - zeta2).abs() < 1e-5;
    pass &= anchor_ok;
    detail.push_str(&format!("zeta(2) anchor off by {:.1e}", (anchor - zeta2).abs()));
    finish(
        10,
        "smoothed vs Euler L(1) and zeta(2) anchor",
        pass,
        &detail,
        t0,
        None,
    );
}

#[test]
fn c11_lower_bound_margins() {
    let forms = forms();
    let t0 = Instant::now();
    let mut pass = true;
    let mut min_ratio = f64::INFINITY;
    for f in forms {
        for n in 1..=3u32 {
            let report = lvalue::check_bound(n, f, 0.1, 1.0, 20_000).expect("bound report");
            pass &= report.pass;
            min_ratio = min_ratio.min(report.ratio);
            if !report.pass {
                eprintln!(
                    "L(1) below bound at n={n}, k={}: value {} vs bound {}",
                    f.weight(),
                    report.value,
                    report.bound
                );
            }
        }
    }
    finish(
        11,
        "L(1) exceeds the lower bound, C=1, eps=0.1",
        pass,
        &format!("18 cells, smallest value/bound margin {min_ratio:.2}"),
        t0,
        None,
    );
}

#[test]
fn c12_no_sign_change_near_one() {
    let f = delta();
    let t0 = Instant::now();
    let mut pass = true;
    let mut detail = String::new();
    for n in 1..=2u32 {
        let a = archimedean::zero_free_endpoint(n, 12, 1.0)
            .expect("endpoint")
            .left_endpoint;
        let scan = lvalue::zero_scan(n, f, a, 100, 100_000).expect("scan");
        pass &= scan.sign_changes == 0 && scan.heuristic;
        let floor = scan.min_value.unwrap_or(f64::NAN);
        detail.push_str(&format!(
            "n={n}: ({a:.4}, 1), min value {floor:.3e}, {} sign changes; ",
            scan.sign_changes
        ));
    }
    finish(
        12,
        "heuristic scan finds no sign change near s = 1",
        pass,
        detail.trim_end_matches("; "),
        t0,
        None,
    );
}

#[test]
fn c13_sweep_determinism_across_workers() {
    let t0 = Instant::now();
    let mut path = std::env::temp_dir();
    path.push(format!("symzero-acceptance-{}.jsonl", std::process::id()));
    let run = |workers: &str| {
        let status = Command::new(env!("CARGO_BIN_EXE_symzero"))
            .args([
                "sweep",
                "--n-max",
                "12",
                "--k-max",
                "60",
                "--workers",
                workers,
                "--out",
                path.to_str().expect("utf-8 temp path"),
            ])
            .status()
            .expect("sweep runs");
        assert!(status.success());
        std::fs::read(&path).expect("sweep artifact")
    };
    let serial = run("1");
    let parallel = run("8");
    let pass = serial == parallel;
    std::fs::remove_file(&path).ok();
    finish(
        13,
        "sweep artifacts bit-identical for 1 and 8 workers",
        pass,
        &format!("{} bytes compared", serial.len()),
        t0,
        None,
    );
}
