//! Property tests for the exact-arithmetic invariants: parser/printer round
//! trips, evaluation linearity, analytic-vs-finite-difference gradients,
//! encode/decode contracts and the reflection isometry.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use qroots_core::amplify::grover_step;
use qroots_core::fixedpoint::{encode, eval_oracle, FixedFormat, OracleMode, ResultFormat};
use qroots_core::polysys::{parse_system, Polynomial, PolynomialSystem, Term};
use qroots_core::rational::pow2;
use qroots_core::statesim::{init_uniform, RegisterLayout};

/// Rational with a 2^a·5^b denominator, so it prints exactly.
fn decimal_rational() -> impl Strategy<Value = BigRational> {
    (-40i64..=40, 0u32..=2, 0u32..=2).prop_map(|(num, twos, fives)| {
        BigRational::new(
            BigInt::from(num),
            BigInt::from(2u64.pow(twos) * 5u64.pow(fives)),
        )
    })
}

fn term(n: usize, max_degree: u32) -> impl Strategy<Value = Term> {
    (
        decimal_rational().prop_filter("nonzero", |c| !c.is_zero()),
        proptest::collection::vec(0u32..=max_degree, n),
    )
        .prop_map(move |(coefficient, mut exponents)| {
            // keep the total degree within the limit
            let mut budget = max_degree;
            for e in exponents.iter_mut() {
                *e = (*e).min(budget);
                budget -= *e;
            }
            Term { coefficient, exponents }
        })
}

fn polynomial(n: usize, max_degree: u32) -> impl Strategy<Value = Polynomial> {
    proptest::collection::vec(term(n, max_degree), 1..=4)
        .prop_map(move |terms| Polynomial::new(n, terms).unwrap())
}

fn system(n: usize, max_degree: u32) -> impl Strategy<Value = PolynomialSystem> {
    proptest::collection::vec(polynomial(n, max_degree), n..=n)
        .prop_map(|eqs| PolynomialSystem::new(eqs).unwrap())
}

fn rational_point(n: usize) -> impl Strategy<Value = Vec<BigRational>> {
    proptest::collection::vec(
        (-24i64..=24, 1u32..=4).prop_map(|(p, q)| BigRational::new(p.into(), (1i64 << q).into())),
        n,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn print_parse_round_trip(sys in (1usize..=3).prop_flat_map(|n| system(n, 3))) {
        let printed = sys.print_canonical().unwrap();
        let reparsed = parse_system(&printed).unwrap().system;
        prop_assert_eq!(reparsed, sys);
    }

    #[test]
    fn evaluation_is_linear_in_coefficients(
        (f, g, point, a, b) in (1usize..=3).prop_flat_map(|n| (
            polynomial(n, 3),
            polynomial(n, 3),
            rational_point(n),
            decimal_rational(),
            decimal_rational(),
        ))
    ) {
        // a·f + b·g as a term list
        let mut terms: Vec<Term> = Vec::new();
        for t in f.terms() {
            terms.push(Term { coefficient: &a * &t.coefficient, exponents: t.exponents.clone() });
        }
        for t in g.terms() {
            terms.push(Term { coefficient: &b * &t.coefficient, exponents: t.exponents.clone() });
        }
        let combo = Polynomial::new(f.n_vars(), terms).unwrap();
        let lhs = combo.eval(&point);
        let rhs = &a * f.eval(&point) + &b * g.eval(&point);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn gradient_matches_central_differences(
        (sys, point) in (1usize..=4).prop_flat_map(|n| (system(n, 4), rational_point(n)))
    ) {
        let n = sys.n();
        let grad = sys.grad_sum_of_squares(&point).unwrap();
        let step = pow2(-20);
        let two_step = &step * BigRational::from_integer(2.into());
        for j in 0..n {
            let mut hi = point.clone();
            let mut lo = point.clone();
            hi[j] += &step;
            lo[j] -= &step;
            let diff = (sys.sum_of_squares(&hi) - sys.sum_of_squares(&lo)) / &two_step;
            let tol = pow2(-13).max(&grad[j].abs() * BigRational::new(1.into(), 10_000.into()));
            prop_assert!(
                (&diff - &grad[j]).abs() <= tol,
                "component {}: fd {} vs analytic {}", j, diff, grad[j]
            );
        }
    }

    #[test]
    fn planted_rational_roots_evaluate_to_zero(
        (roots, degrees) in (1usize..=3).prop_flat_map(|n| (
            proptest::collection::vec(
                (1i64..=12, 1u32..=3).prop_map(|(p, q)| BigRational::new(p.into(), (1i64 << q).into())),
                n,
            ),
            proptest::collection::vec(1u32..=3, n),
        ))
    ) {
        // fᵢ = xᵢ^dᵢ − rᵢ^dᵢ has the planted root, exactly
        let n = roots.len();
        let mut eqs = Vec::with_capacity(n);
        for i in 0..n {
            let mut exps = vec![0u32; n];
            exps[i] = degrees[i];
            let mut rd = BigRational::from_integer(1.into());
            for _ in 0..degrees[i] {
                rd *= &roots[i];
            }
            eqs.push(Polynomial::new(n, vec![
                Term { coefficient: BigRational::from_integer(1.into()), exponents: exps },
                Term { coefficient: -rd, exponents: vec![0; n] },
            ]).unwrap());
        }
        let sys = PolynomialSystem::new(eqs).unwrap();
        for i in 0..n {
            prop_assert_eq!(sys.evaluate(i, &roots).unwrap(), BigRational::zero());
        }
        prop_assert_eq!(sys.sum_of_squares(&roots), BigRational::zero());
    }

    #[test]
    fn encode_decode_contract(
        (total, int_extra, signed, num) in (1u32..=10).prop_flat_map(|total| (
            Just(total),
            0u32..total,
            proptest::bool::ANY,
            -4000i64..=4000,
        ))
    ) {
        let int_bits = total - int_extra;
        let format = FixedFormat::new(total, int_bits, signed).unwrap();
        let value = BigRational::new(num.into(), 64.into());
        let (lo, hi) = format.range();
        prop_assume!(value >= lo && value < hi);
        let word = encode(&value, format).unwrap();
        let decoded = word.decode();
        // truncation stays within one grid cell, below or at the value
        prop_assert!(decoded <= value);
        prop_assert!(&value - &decoded < format.resolution());
        // re-encoding the decoded value is the identity
        prop_assert_eq!(encode(&decoded, format).unwrap(), word);
    }

    #[test]
    fn exact_oracle_equals_reference_evaluation(
        (sys, raws) in (1usize..=2).prop_flat_map(|n| (
            system(n, 2),
            proptest::collection::vec(0u64..16, n),
        ))
    ) {
        let vf = FixedFormat::unsigned(4, 2).unwrap();
        let rf = match ResultFormat::for_system(&sys, vf, Some(6)) {
            Ok(rf) => rf.format(),
            Err(_) => return Ok(()),
        };
        let words: Vec<_> = raws.iter()
            .map(|&r| qroots_core::fixedpoint::BitWord::from_raw(r, vf).unwrap())
            .collect();
        let point: Vec<BigRational> = words.iter().map(|w| w.decode()).collect();
        for i in 0..sys.n() {
            let via_oracle = eval_oracle(&sys, i, &words, rf, OracleMode::Exact).unwrap();
            let reference = encode(&sys.evaluate(i, &point).unwrap(), rf).unwrap();
            prop_assert_eq!(via_oracle, reference);
        }
    }

    #[test]
    fn grover_step_is_an_isometry(
        (qubits, mark_bits) in (2u32..=6).prop_flat_map(|q| (
            Just(q),
            proptest::collection::vec(proptest::bool::ANY, 1usize << q),
        ))
    ) {
        let layout = RegisterLayout::new(&[("x0", qubits)]).unwrap();
        let reference = init_uniform(&layout, &["x0"]).unwrap();
        let mut state = reference.clone();
        for _ in 0..4 {
            grover_step(&mut state, &mark_bits, &reference);
            prop_assert!((state.norm_sq() - 1.0).abs() < 1e-12);
        }
    }
}
