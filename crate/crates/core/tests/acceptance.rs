//! Acceptance gate: one test per criterion, each printing a pass/fail line
//! (run with `--nocapture` to see them) and enforcing its runtime budget.

use std::time::{Duration, Instant};

use framebound::{
    analyze, check_hilbert_chain, check_mixed_norm_bound, check_one_sided_bounds,
    check_product_bound, check_transfer_inequalities, dft_pair, dirac_comb, in_domain,
    is_reconstructing, min_support_product, random_reconstructing_pair, random_vectors,
    synthesize, unbounded_diagonal, Exponent, Field, FrameSystem, IndexSet, Scalar,
    TailDescriptor, Vector, DEFAULT_SUPPORT_TOL,
};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = DEFAULT_SUPPORT_TOL;
const P1: Exponent = Exponent::Finite(1.0);

fn conclude(criterion: usize, ok: bool, detail: &str, start: Instant, budget: Duration) {
    let elapsed = start.elapsed();
    let verdict = if ok && elapsed <= budget { "PASS" } else { "FAIL" };
    println!("criterion {criterion}: {verdict} - {detail} in {elapsed:.2?} (budget {budget:?})");
    assert!(ok, "criterion {criterion}: {detail}");
    assert!(
        elapsed <= budget,
        "criterion {criterion} exceeded its budget: {elapsed:.2?} > {budget:?}"
    );
}

#[test]
fn criterion_1_comb_equality_at_square_dimensions() {
    let start = Instant::now();
    let mut ok = true;
    let mut detail = String::new();
    for n in [4usize, 9, 16] {
        let (id, dft) = dft_pair(n, P1).expect("dft");
        let comb = dirac_comb(n).expect("square");
        let report = check_product_bound(&id, &dft, &comb, P1, TOL).expect("check");
        let tight = (report.lhs - n as f64).abs() <= 1e-9
            && (report.rhs - n as f64).abs() <= 1e-9
            && report.slack.abs() <= 1e-9
            && report.equality;
        let chain = check_hilbert_chain(&id, &dft, &comb, TOL).expect("check");
        let links = chain.report.equality && chain.amgm_equality && chain.end_equality;
        ok &= tight && links;
        detail.push_str(&format!(
            "n={n} lhs={} rhs={:.3} links={} ",
            report.lhs, report.rhs, links
        ));
    }
    conclude(1, ok, detail.trim(), start, Duration::from_secs(1));
}

#[test]
fn criterion_2_universal_validity_sweep() {
    let start = Instant::now();
    let mixed_ps = [
        Exponent::Finite(1.5),
        Exponent::Finite(2.0),
        Exponent::Finite(3.0),
    ];
    let mut checked = 0u64;
    let mut violations = 0u64;
    for seed in 0..500u64 {
        let n = 2 + (seed as usize) % 7;
        let (f, g) = random_reconstructing_pair(n, Field::Complex, P1, seed).expect("pair");
        for x in random_vectors(IndexSet::finite(n), Field::Complex, 500, seed ^ 0xC0FFEE) {
            let mut reports = Vec::with_capacity(13);
            for p in [P1, Exponent::Infinity] {
                reports.push(check_product_bound(&f, &g, &x, p, TOL).expect("check"));
                let (a, b) = check_one_sided_bounds(&f, &g, &x, p, TOL).expect("check");
                reports.extend([a, b]);
                let (a, b) = check_transfer_inequalities(&f, &g, &x, p, TOL).expect("check");
                reports.extend([a, b]);
            }
            for p in mixed_ps {
                let (a, b) = check_mixed_norm_bound(&f, &g, &x, p, TOL).expect("check");
                reports.extend([a, b]);
            }
            for r in reports {
                checked += 1;
                if !(r.slack >= -1e-12) {
                    violations += 1;
                }
            }
        }
    }
    conclude(
        2,
        violations == 0,
        &format!("{checked} reports over 500 pairs x 500 vectors, {violations} violations"),
        start,
        Duration::from_secs(120),
    );
}

#[test]
fn criterion_3_oracle_dominance() {
    let start = Instant::now();
    let mut ok = true;
    let mut worst = f64::INFINITY;
    for seed in 0..200u64 {
        let n = 3 + (seed as usize) % 4;
        let (f, g) = random_reconstructing_pair(n, Field::Complex, P1, seed).expect("pair");
        match min_support_product(&f, &g, TOL) {
            Ok(result) => {
                worst = worst.min(result.minimum - result.bound);
                if result.minimum < result.bound - 1e-12 {
                    ok = false;
                }
            }
            Err(err) => {
                println!("seed {seed}: {err}");
                ok = false;
            }
        }
    }
    let (id, dft) = dft_pair(4, P1).expect("dft");
    let exact = min_support_product(&id, &dft, TOL).expect("small");
    let ratio_exact = exact.ratio == 1.0;
    conclude(
        3,
        ok && ratio_exact,
        &format!(
            "200 pairs dominate the bound (worst margin {worst:.3e}); identity/DFT n=4 ratio {}",
            exact.ratio
        ),
        start,
        Duration::from_secs(300),
    );
}

#[test]
fn criterion_4_unbounded_diagonal_fidelity() {
    let start = Instant::now();
    let n_max = 1000usize;
    let sys = unbounded_diagonal(n_max, 1.0, Field::Real, P1).expect("diagonal");

    fn ulp_distance(a: f64, b: f64) -> u64 {
        if a == b {
            return 0;
        }
        if a.signum() != b.signum() {
            return u64::MAX;
        }
        a.to_bits().abs_diff(b.to_bits())
    }

    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut worst_ulp = 0u64;
    for _ in 0..1000 {
        let support_size = rng.random_range(1..=20usize);
        let entries: Vec<(usize, Scalar)> = (0..support_size)
            .map(|_| {
                let idx = rng.random_range(1..=n_max);
                let value: f64 = rng.sample(rand_distr::StandardNormal);
                (idx, Scalar::new(value, 0.0))
            })
            .collect();
        let x = Vector::new(IndexSet::sequence(n_max), entries).expect("in range");
        let coeffs = analyze(&sys, &x, 0.0).expect("analyze");
        let back = synthesize(&sys, &coeffs).expect("synthesize");
        for (idx, original) in x.entries() {
            let round_trip = back.get(idx);
            worst_ulp = worst_ulp
                .max(ulp_distance(original.re, round_trip.re))
                .max(ulp_distance(original.im, round_trip.im));
        }
        for (idx, value) in back.entries() {
            if x.get(idx) == Scalar::ZERO {
                assert_eq!(value, Scalar::ZERO, "spurious entry at {idx}");
            }
        }
    }

    let domain_ok = in_domain(&sys, &TailDescriptor::power_law(1.0, 3.0, 1).expect("tail"))
        .expect("diagonal")
        && !in_domain(&sys, &TailDescriptor::power_law(1.0, 1.5, 1).expect("tail"))
            .expect("diagonal")
        && in_domain(&sys, &TailDescriptor::FiniteSupport).expect("diagonal")
        && {
            let sup_sys = unbounded_diagonal(n_max, 1.0, Field::Real, Exponent::Infinity)
                .expect("diagonal");
            in_domain(&sup_sys, &TailDescriptor::FiniteSupport).expect("diagonal")
        };

    conclude(
        4,
        worst_ulp <= 2 && domain_ok,
        &format!("1000 round trips, worst error {worst_ulp} ulp; domain checks {domain_ok}"),
        start,
        Duration::from_secs(30),
    );
}

#[test]
fn criterion_5_reweighted_measures() {
    let start = Instant::now();
    let n = 8usize;
    let (id, dft) = dft_pair(n, P1).expect("dft");
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let mut draw = |count: usize| -> Vec<f64> {
        (0..count).map(|_| rng.random_range(0.1..=10.0)).collect()
    };
    let f = FrameSystem::reweighted(&id, draw(n)).expect("reweight");
    let g = FrameSystem::reweighted(&dft, draw(n)).expect("reweight");

    let dev_f = is_reconstructing(&f, 1e-9).expect("dense");
    let dev_g = is_reconstructing(&g, 1e-9).expect("dense");

    let mut violations = 0u64;
    for x in random_vectors(IndexSet::finite(n), Field::Complex, 10_000, 506) {
        let report = check_product_bound(&f, &g, &x, P1, TOL).expect("check");
        if !report.holds {
            violations += 1;
        }
    }
    conclude(
        5,
        dev_f.holds && dev_g.holds && violations == 0,
        &format!(
            "reconstruction deviations {:.2e}/{:.2e}; {violations} violations over 10000 vectors",
            dev_f.deviation, dev_g.deviation
        ),
        start,
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_6_scaling_invariance() {
    let start = Instant::now();
    let scalars = [
        Scalar::new(1e-6, 0.0),
        Scalar::new(1.0, 0.0),
        Scalar::new(1e6, 0.0),
        Scalar::new(0.0, 1.0),
    ];
    let mut ok = true;
    let mut triples = 0u64;
    'outer: for seed in 0..250u64 {
        let n = 3 + (seed as usize) % 5;
        let (f, g) = random_reconstructing_pair(n, Field::Complex, P1, seed).expect("pair");
        let x = &random_vectors(IndexSet::finite(n), Field::Complex, 1, seed + 42)[0];
        let base: Vec<_> = collect_reports(&f, &g, x);
        for c in scalars {
            triples += 1;
            let scaled = x.scaled(c);
            let got = collect_reports(&f, &g, &scaled);
            for (a, b) in base.iter().zip(&got) {
                if a.lhs != b.lhs || a.rhs != b.rhs || a.holds != b.holds || a.equality != b.equality
                {
                    ok = false;
                    println!("seed {seed} scalar {c}: {a:?} vs {b:?}");
                    break 'outer;
                }
            }
        }
    }
    conclude(
        6,
        ok && triples == 1000,
        &format!("{triples} scaled comparisons bit-identical"),
        start,
        Duration::from_secs(60),
    );
}

fn collect_reports(
    f: &FrameSystem,
    g: &FrameSystem,
    x: &Vector,
) -> Vec<framebound::BoundReport> {
    let mut reports = Vec::new();
    for p in [P1, Exponent::Infinity] {
        reports.push(check_product_bound(f, g, x, p, TOL).expect("check"));
        let (a, b) = check_one_sided_bounds(f, g, x, p, TOL).expect("check");
        reports.extend([a, b]);
    }
    let (a, b) = check_mixed_norm_bound(f, g, x, Exponent::Finite(2.0), TOL).expect("check");
    reports.extend([a, b]);
    reports
}
