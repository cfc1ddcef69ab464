//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured quantities (visible with `--nocapture`). Run with
//! `cargo test --test acceptance`.

use num_rational::BigRational;
use num_traits::Signed;
use qroots_core::amplify::{run_search, AmplifySpec, GroverRotation};
use qroots_core::fixedpoint::{encode, FixedFormat, ResultFormat};
use qroots_core::gradient::{
    gradient_error_bound, jordan_gradient, jordan_gradient_fn, refine, GradientConfig,
    GradientSource,
};
use qroots_core::marking::{
    faithful_basis_outcome, mark_collapsed, mark_faithful, marked_mask, variable_layout,
    MarkingSpec,
};
use qroots_core::polysys::{parse_system, PolynomialSystem, EXAMPLE_TERNARY};
use qroots_core::rational::{parse_decimal, to_f64};
use qroots_core::resources::{
    ceil_sqrt_pow2, estimate_operations, estimate_qubits, newton_cost, ResourceParams,
};
use qroots_core::statesim::init_uniform;
use qroots_core::{baseline, statesim};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand::Rng;
use std::time::Instant;

fn rat(s: &str) -> BigRational {
    parse_decimal(s).unwrap()
}

fn ternary() -> PolynomialSystem {
    parse_system(EXAMPLE_TERNARY).unwrap().system
}

/// N=6, m=3 variable format with τ = 2 (threshold_log2 = 1).
fn ternary_spec() -> MarkingSpec {
    let vf = FixedFormat::unsigned(6, 3).unwrap();
    let rf = ResultFormat::for_system(&ternary(), vf, None).unwrap();
    MarkingSpec::from_threshold_log2(1, vf, rf).unwrap()
}

const REFERENCE_ROOT: [&str; 3] = ["2.7689", "3.2834", "3.1370"];

#[test]
fn criterion_1_end_to_end_reproduction() {
    let started = Instant::now();
    let system = ternary();
    let spec = ternary_spec();
    let amplify = AmplifySpec { seed: 1, ..Default::default() };
    let outcome = run_search(&system, &spec, &amplify, 8).expect("search succeeds");
    assert!(outcome.report.marked_count >= 1);

    // deduplicate sampled candidates and refine each with analytic gradients
    let mut candidates: Vec<Vec<BigRational>> = Vec::new();
    for sample in &outcome.samples {
        let point: Vec<BigRational> = sample.iter().map(|w| w.decode()).collect();
        if !candidates.contains(&point) {
            candidates.push(point);
        }
    }
    let tol = rat("0.0005");
    let target: Vec<BigRational> = REFERENCE_ROOT.iter().map(|s| rat(s)).collect();
    let mut hit = None;
    for candidate in &candidates {
        let config = GradientConfig::auto(&system, candidate, 3);
        let (solution, trace) =
            refine(&system, candidate, &config, GradientSource::Analytic).expect("refine runs");
        let ok = solution
            .iter()
            .zip(&target)
            .all(|(s, t)| (s - t).abs() < tol);
        if ok {
            hit = Some((solution, trace));
            break;
        }
    }
    let (solution, _) = hit.expect("a refined root within 5e-4 of the reference solution");
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 30, "pipeline took {elapsed:?}");
    println!(
        "criterion 1 PASS: solve pipeline refined ({}, {}, {}) in {:?}",
        to_f64(&solution[0]),
        to_f64(&solution[1]),
        to_f64(&solution[2]),
        elapsed
    );
}

#[test]
fn criterion_2_walkthrough_fidelity() {
    let system = ternary();
    let spec = ternary_spec();
    let vf = spec.variable_format();
    let raws = [
        encode(&rat("3.25"), vf).unwrap().raw(),
        encode(&rat("2.25"), vf).unwrap().raw(),
        encode(&rat("3.125"), vf).unwrap().raw(),
    ];
    let out = faithful_basis_outcome(&system, &spec, &raws).unwrap();
    assert_eq!(out.control_basis, 0b111, "controls must read |111>");
    let on_111 = out.control_amps[0b111].norm();
    assert!((on_111 - 1.0).abs() < 1e-12, "|111> amplitude {on_111}");
    for (value, amp) in out.control_amps.iter().enumerate() {
        if value != 0b111 {
            assert!(amp.norm() < 1e-12, "stray amplitude at {value:#b}");
        }
    }
    println!("criterion 2 PASS: non-solution basis state maps to |111> with amplitude {on_111}");
}

/// Deterministic generator of small random systems (n ≤ 2, N ≤ 4, degree ≤ 3)
/// together with a valid marking spec.
fn random_instance(rng: &mut ChaCha8Rng) -> Option<(PolynomialSystem, MarkingSpec)> {
    use qroots_core::polysys::{Polynomial, Term};
    let n = rng.random_range(1..=2usize);
    let total_bits = rng.random_range(2..=4u32);
    let int_bits = rng.random_range(1..=2u32.min(total_bits));
    let mut equations = Vec::with_capacity(n);
    for _ in 0..n {
        let n_terms = rng.random_range(1..=3usize);
        let mut terms = Vec::new();
        for _ in 0..n_terms {
            let coeff_num = rng.random_range(-3i64..=3);
            let coeff_den = if rng.random_bool(0.3) { 2 } else { 1 };
            let mut exponents = vec![0u32; n];
            let mut budget = 3u32;
            for e in exponents.iter_mut() {
                *e = rng.random_range(0..=budget.min(2));
                budget -= *e;
            }
            terms.push(Term {
                coefficient: BigRational::new(coeff_num.into(), coeff_den.into()),
                exponents,
            });
        }
        // constant term keeps roots off the trivial origin
        terms.push(Term {
            coefficient: BigRational::new(rng.random_range(-6i64..=6).into(), 1.into()),
            exponents: vec![0; n],
        });
        equations.push(Polynomial::new(n, terms).ok()?);
    }
    let system = PolynomialSystem::new(equations).ok()?;
    if system.degree_stats().0 == 0 {
        return None;
    }
    let vf = FixedFormat::unsigned(total_bits, int_bits).ok()?;
    let rf = ResultFormat::for_system(&system, vf, None).ok()?;
    let rho = rng.random_range(-(rf.format().fractional_bits() as i32)..=2);
    let spec = MarkingSpec::from_threshold_log2(rho, vf, rf).ok()?;
    Some((system, spec))
}

#[test]
fn criterion_3_exact_projection_property() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut instances = 0;
    let mut compared_states = 0;
    while instances < 200 {
        let Some((system, spec)) = random_instance(&mut rng) else {
            continue;
        };
        instances += 1;
        let n = system.n();
        let width = spec.variable_format().width();
        let dim = 1usize << (width * n as u32);
        // every post-Hadamard control amplitude on |0…0⟩ is 0 or 1
        for idx in 0..dim {
            let raws: Vec<u64> = (0..n)
                .map(|j| ((idx as u64) >> (width * (n - 1 - j) as u32)) & ((1u64 << width) - 1))
                .collect();
            let out = faithful_basis_outcome(&system, &spec, &raws).unwrap();
            let a = out.amp_on_zero.norm();
            assert!(
                a < 1e-12 || (a - 1.0).abs() < 1e-12,
                "projector amplitude {a} is neither 0 nor 1"
            );
        }
        // faithful == collapsed as state vectors (when the branch is nonempty)
        let layout = variable_layout(&system, spec.variable_format()).unwrap();
        let names: Vec<String> = layout.registers().map(|(r, _)| r.to_string()).collect();
        let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let uniform = init_uniform(&layout, &name_refs).unwrap();
        match (
            mark_collapsed(&uniform, &system, &spec),
            mark_faithful(&uniform, &system, &spec),
        ) {
            (Ok((collapsed, cr)), Ok((faithful, fr, _))) => {
                assert!(collapsed.max_amp_distance(&faithful) < 1e-12);
                assert_eq!(cr.marked_count, fr.marked_count);
                compared_states += 1;
            }
            (Err(_), Err(_)) => {} // both agree the marked set is empty
            (a, b) => panic!(
                "faithful and collapsed disagree on emptiness: {:?} vs {:?}",
                a.is_ok(),
                b.is_ok()
            ),
        }
    }
    println!(
        "criterion 3 PASS: 200 random systems, {compared_states} with nonempty marked branch, \
         all projector amplitudes exactly 0/1 within 1e-12"
    );
}

#[test]
fn criterion_4_marked_set_oracle_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(4096);
    let mut instances = 0;
    while instances < 200 {
        let Some((system, spec)) = random_instance(&mut rng) else {
            continue;
        };
        instances += 1;
        let mask = marked_mask(&system, &spec).unwrap();
        let layout = variable_layout(&system, spec.variable_format()).unwrap();
        let names: Vec<String> = layout.registers().map(|(r, _)| r.to_string()).collect();
        let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let uniform = init_uniform(&layout, &name_refs).unwrap();
        match mark_collapsed(&uniform, &system, &spec) {
            Ok((state, report)) => {
                let support: Vec<bool> =
                    state.amplitudes().iter().map(|a| a.norm_sqr() > 1e-20).collect();
                assert_eq!(support, mask, "support differs from brute-force marked set");
                assert_eq!(report.marked_count as usize, mask.iter().filter(|&&m| m).count());
            }
            Err(_) => {
                assert!(mask.iter().all(|&m| !m), "collapsed errored on nonempty set");
            }
        }
    }
    println!("criterion 4 PASS: collapsed support equals brute-force marked set on 200 systems");
}

#[test]
fn criterion_5_grover_closed_form() {
    for t_bits in [3u32, 6, 10] {
        let total = 1u64 << t_bits;
        for m in [1u64, 2, total / 4] {
            let layout = statesim::RegisterLayout::new(&[("x0", t_bits)]).unwrap();
            let reference = init_uniform(&layout, &["x0"]).unwrap();
            let mut state = reference.clone();
            let marked: Vec<bool> = (0..total).map(|i| i < m).collect();
            let theta = ((m as f64 / total as f64).sqrt()).asin();
            let k_opt =
                qroots_core::amplify::optimal_iterations(m, total).expect("m >= 1");
            let mut rotation = GroverRotation::new(m, total);
            for k in 0..=(2 * k_opt) {
                let mass: f64 = state
                    .amplitudes()
                    .iter()
                    .zip(&marked)
                    .filter(|(_, &mk)| mk)
                    .map(|(a, _)| a.norm_sqr())
                    .sum();
                let expect = ((2 * k + 1) as f64 * theta).sin().powi(2);
                assert!(
                    (mass - expect).abs() < 1e-10,
                    "T={total} M={m} k={k}: {mass} vs {expect}"
                );
                assert!((mass - rotation.marked_probability()).abs() < 1e-10);
                qroots_core::amplify::grover_step(&mut state, &marked, &reference);
                rotation.step();
            }
        }
    }
    println!("criterion 5 PASS: simulated success probabilities match sin²((2k+1)θ) to 1e-10");
}

#[test]
fn criterion_6_gradient_fidelity() {
    let system = ternary();
    let center = [rat("2.75"), rat("3.25"), rat("3.125")];
    // defaults: g = 6, window one coarse cell, s from the interval bound
    let config = GradientConfig::auto(&system, &center, 3);
    assert_eq!(config.grid_bits, 6);
    let est = jordan_gradient(&system, &center, &config).unwrap();
    assert!(!est.scale_warning, "default s must satisfy the derivative bound");
    let truth = system.grad_sum_of_squares(&center).unwrap();
    let bound = gradient_error_bound(&system, &center, &config);
    let mut worst: f64 = 0.0;
    for (e, t) in est.components.iter().zip(&truth) {
        let err = (to_f64(e) - to_f64(t)).abs();
        worst = worst.max(err);
        assert!(err <= bound, "component error {err} exceeds bound {bound}");
    }

    // affine constructions decode exactly with modal probability 1
    let affine_cfg = GradientConfig {
        grid_bits: 6,
        window: rat("0.25"),
        derivative_bound: rat("16"),
        ..GradientConfig::auto(&system, &center, 3)
    };
    let est = jordan_gradient_fn(
        |p| 3.0 * p[0] - 2.5 * p[1] + 0.75 * p[2] + 11.0,
        3,
        &[rat("0"), rat("0"), rat("0")],
        &affine_cfg,
    )
    .unwrap();
    assert_eq!(est.components, vec![rat("3"), rat("-2.5"), rat("0.75")]);
    for p in &est.modal_probabilities {
        assert!((p - 1.0).abs() < 1e-10);
    }
    println!(
        "criterion 6 PASS: worst component error {worst:.3} within bound {bound:.3}; \
         affine modal outcomes exact"
    );
}

#[test]
fn criterion_7_baseline_agreement() {
    let system = ternary();
    let candidate = [rat("2.75"), rat("3.25"), rat("3.125")];
    let newton =
        baseline::newton_solve(&system, &candidate, &baseline::NewtonConfig::default()).unwrap();
    let target: Vec<f64> = REFERENCE_ROOT.iter().map(|s| s.parse().unwrap()).collect();
    for (s, t) in newton.solution.iter().zip(&target) {
        assert!((s - t).abs() < 5e-5, "newton {s} vs {t}");
    }
    // quadratic convergence: log residual at least doubles until float floor
    let logs: Vec<f64> = newton
        .trace
        .iter()
        .map(|s| s.max_residual.max(1e-300).log10())
        .collect();
    assert!(logs.len() >= 3, "trace too short to witness quadratic convergence");
    for w in logs.windows(2) {
        if w[1] > -13.0 {
            assert!(w[1] <= 2.0 * w[0] + 0.5, "not quadratic: {logs:?}");
        }
    }
    // agreement with gradient refinement within 1e-3
    let config = GradientConfig::auto(&system, &candidate, 3);
    let (refined, _) = refine(&system, &candidate, &config, GradientSource::Analytic).unwrap();
    for (r, s) in refined.iter().zip(&newton.solution) {
        let err = (to_f64(r) - s).abs();
        assert!(err < 1e-3, "refine vs newton differ by {err}");
    }
    println!(
        "criterion 7 PASS: Newton root ({:.5}, {:.5}, {:.5}) quadratic, refine agrees to 1e-3",
        newton.solution[0], newton.solution[1], newton.solution[2]
    );
}

#[test]
fn criterion_8_resource_formulas() {
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    for _ in 0..50 {
        let p = ResourceParams {
            n: rng.random_range(1..=12),
            t: rng.random_range(1..=9),
            h: rng.random_range(1..=6),
            bits: rng.random_range(1..=24),
            int_bits: rng.random_range(1..=8),
            accuracy_bits: rng.random_range(0..=20),
            lambda: rng.random_range(0..=24),
            iterations: rng.random_range(1..=64),
        };
        let est = estimate_operations(&p).unwrap();
        // independent recomputation of the documented closed forms
        let lm = (p.accuracy_bits + p.int_bits) as u128;
        let search = ceil_sqrt_pow2(p.lambda)
            * p.n as u128
            * p.t as u128
            * p.h as u128
            * (p.bits as u128 * p.bits as u128);
        let refine_ops =
            p.iterations as u128 * p.n as u128 * p.t as u128 * p.h as u128 * lm * lm;
        assert_eq!(est.search_ops, search);
        assert_eq!(est.refine_ops, refine_ops);
        assert_eq!(est.total_ops, search + refine_ops);
        let qubits =
            2 * p.n as u128 * lm + 4 * p.h as u128 * lm + p.h as u128 * p.bits as u128
                + p.n as u128
                + 1;
        assert_eq!(estimate_qubits(&p).unwrap(), qubits);
        assert_eq!(
            newton_cost(&p).unwrap(),
            p.h as u128 * p.t as u128 * (p.n as u128).pow(3) * lm * lm
        );
        // linearity in n at fixed (t, h, N, λ)
        let e1 = estimate_operations(&ResourceParams { n: 1, ..p }).unwrap();
        assert_eq!(est.search_ops, p.n as u128 * e1.search_ops);
        assert_eq!(
            est.search_ops / (p.n as u128 * p.t as u128 * p.h as u128 * (p.bits * p.bits) as u128),
            ceil_sqrt_pow2(p.lambda)
        );
    }
    println!("criterion 8 PASS: closed forms exact on 50 random tuples, linear in n");
}
