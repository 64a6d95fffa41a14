use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use redei::approx::{self, error_exact};
use redei::arith::{self, int, rat, Rational, SqrtModP};
use redei::contfrac::{self, PartialQuotient, RationalCF};
use redei::padic::{self, PadicSqrtContext, RootChoice};
use redei::redei::{self as rd, RedeiParams};

fn nonsquare() -> impl Strategy<Value = i64> {
    (2i64..1_000_000).prop_filter("nonsquare", |d| !arith::is_square(&BigInt::from(*d)))
}

fn nonzero_z() -> impl Strategy<Value = i64> {
    (-1000i64..=1000).prop_filter("nonzero", |z| *z != 0)
}

fn small_prime() -> impl Strategy<Value = u64> {
    (3u64..500).prop_filter("odd prime", |p| arith::is_prime(*p))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn valuation_is_a_valuation(
        a in -10_000i64..10_000, b in 1i64..10_000,
        c in -10_000i64..10_000, e in 1i64..10_000,
        p in prop::sample::select(vec![2u64, 3, 5, 7, 229]),
    ) {
        prop_assume!(a != 0 && c != 0);
        let (x, y) = (rat(a, b), rat(c, e));
        let (vx, vy) = (arith::vp(&x, p).unwrap(), arith::vp(&y, p).unwrap());
        prop_assert_eq!(arith::vp(&(&x * &y), p).unwrap(), vx + vy);
        let sum = &x + &y;
        if !sum.is_zero() {
            let vs = arith::vp(&sum, p).unwrap();
            prop_assert!(vs >= vx.min(vy));
            if vx != vy {
                prop_assert_eq!(vs, vx.min(vy));
            }
        }
    }

    #[test]
    fn sqrt_mod_matches_enumeration(p in small_prime(), d in 1u64..100_000) {
        prop_assume!(d % p != 0);
        let squares: Vec<u64> = (1..p).filter(|x| x * x % p == d % p).collect();
        match arith::sqrt_mod_p(&BigInt::from(d), p).unwrap() {
            SqrtModP::Roots(a, b) => {
                prop_assert_eq!(a + b, p);
                prop_assert_eq!(squares, vec![a, b]);
                prop_assert_eq!(arith::legendre(d % p, p), 1);
            }
            SqrtModP::NonResidue => {
                prop_assert!(squares.is_empty());
                prop_assert_eq!(arith::legendre(d % p, p), -1);
            }
        }
    }

    #[test]
    fn hensel_truncations_square_to_d(p in small_prime(), d in nonsquare(), prec in 1usize..15) {
        prop_assume!(d as u64 % p != 0);
        let d = BigInt::from(d);
        if let SqrtModP::Roots(z, _) = arith::sqrt_mod_p(&d, p).unwrap() {
            let e = arith::hensel_digits(&d, p, z, prec).unwrap();
            prop_assert_eq!(e.digits[0], z);
            prop_assert!(e.digits.iter().all(|&b| b < p));
            let pb = BigInt::from(p);
            for (n, a) in e.truncations().iter().enumerate() {
                prop_assert!((a * a - &d).is_multiple_of(&pb.pow(n as u32 + 1)));
            }
        }
    }

    #[test]
    fn three_evaluators_agree(d in nonsquare(), z in nonzero_z(), n in 0u64..200) {
        let params = RedeiParams::new(d, z, n).unwrap();
        let binomial = rd::redei_binomial(&params);
        let matrix = rd::redei_matrix_pow(&params);
        let seq = rd::redei_sequence(&params.d, &params.z, n as usize + 1).unwrap();
        prop_assert_eq!(&binomial, &matrix);
        prop_assert_eq!(&binomial, &seq[n as usize]);
        prop_assert!(rd::norm_check(&binomial).is_ok());
    }

    #[test]
    fn rational_cf_tracks_agree(
        terms in prop::collection::vec((-20i64..=20, (-20i64..=20).prop_filter("b≠0", |b| *b != 0)), 1..40)
    ) {
        let cf = RationalCF::finite(
            terms.iter().map(|&(a, b)| PartialQuotient::new(a, b).unwrap()).collect()
        ).unwrap();
        let k = terms.len();
        match (contfrac::convergents_direct(&cf, k), contfrac::convergents_lemma(&cf, k)) {
            (Ok(direct), Ok(lemma)) => {
                for (x, rec) in direct.iter().zip(&lemma) {
                    prop_assert_eq!(x, &rec.value);
                    let b0 = &terms[0].1;
                    let pn = Rational::new(rec.s.clone(), &rec.u * BigInt::from(*b0));
                    let qn = Rational::new(rec.t.clone(), rec.u.clone());
                    prop_assert_eq!(&(pn / qn), x);
                }
            }
            // both tracks hit the same zero denominator
            (Err(a), Err(b)) => prop_assert_eq!(a, b),
            (a, b) => prop_assert!(false, "tracks disagree: {:?} vs {:?}", a.is_ok(), b.is_ok()),
        }
    }

    #[test]
    fn newton_is_redei_at_powers_of_two(d in 2i64..5000, z in 1i64..100, k in 0usize..8) {
        prop_assume!(!arith::is_square(&BigInt::from(d)));
        let (d, z) = (BigInt::from(d), BigInt::from(z));
        let xs = approx::newton_sqrt(&d, &z, k).unwrap();
        for (n, x) in xs.iter().enumerate() {
            let q = rd::q(&RedeiParams::new(d.clone(), z.clone(), 1 << n).unwrap()).unwrap();
            prop_assert_eq!(x, &q);
            prop_assert_eq!(x, &approx::newton_direct(&d, &z, n as u32).unwrap());
        }
    }

    #[test]
    fn error_times_denominator_squared(d in nonsquare(), z in 1i64..1000, n in 1u64..60) {
        let params = RedeiParams::new(d, z, n).unwrap();
        let pair = rd::redei_binomial(&params);
        let err = error_exact(&params.d, &params.z, n).unwrap();
        let lhs = err * Rational::from_integer(&pair.denom * &pair.denom);
        prop_assert_eq!(lhs, Rational::from_integer(params.norm_base().abs().pow(n as u32)));
    }

    #[test]
    fn padic_norm_valuation_law(p in small_prime(), d in nonsquare(), n in 1u64..100) {
        prop_assume!(d as u64 % p != 0);
        let d = BigInt::from(d);
        if let Ok(ctx) = PadicSqrtContext::new(&d, p, &RootChoice::Smaller, 1) {
            let order = padic::padic_order(&ctx, n).unwrap();
            prop_assert_eq!(order.norm, n as i64 * ctx.base_valuation());
            prop_assert_eq!(order.q, order.norm);
            let pair = rd::redei_matrix_pow(&RedeiParams::new(d.clone(), ctx.z.clone(), n).unwrap());
            prop_assert!(!pair.denom.is_multiple_of(&BigInt::from(p)));
        }
    }
}

#[test]
fn composition_law() {
    for (d, z) in [(2, 1), (3, 2), (10, 3), (26, 22), (7, -4), (13, 5), (101, 1)] {
        let base = RedeiParams::new(d, z, 1).unwrap();
        for m in 1..=12u64 {
            for n in 1..=12u64 {
                let inner = rd::q(&base.with_index(n)).unwrap();
                let outer = rd::q_rational(&base.d, &inner, m).unwrap();
                assert_eq!(outer, rd::q(&base.with_index(m * n)).unwrap(), "d={d} z={z} m={m} n={n}");
            }
        }
    }
}

/// `D_n(d, z)` has degree exactly `n - 1` in `z`: its `(n-1)`-th forward
/// difference over `z = 1, 2, …` is the constant `n · (n-1)!` and the
/// `n`-th difference vanishes.
#[test]
fn denominator_degree_by_finite_differences() {
    for d in [2i64, 10, 26] {
        for n in 1..=10u64 {
            let mut values: Vec<BigInt> = (1..=n as i64 + 2)
                .map(|z| rd::redei_binomial(&RedeiParams::new(d, z, n).unwrap()).denom)
                .collect();
            for _ in 0..n - 1 {
                values = values.windows(2).map(|w| &w[1] - &w[0]).collect();
            }
            let factorial: BigInt = (1..n).map(BigInt::from).product();
            assert!(values.iter().all(|v| *v == BigInt::from(n) * &factorial));
        }
    }
}

#[test]
fn numerator_parity_in_z() {
    for n in 0..15u64 {
        let a = rd::redei_binomial(&RedeiParams::new(11, 4, n).unwrap());
        let b = rd::redei_binomial(&RedeiParams::new(11, -4, n).unwrap());
        assert_eq!(a.numer == b.numer, n % 2 == 0);
    }
}

#[test]
fn sqrt_cf_is_classical_when_gap_is_one() {
    for m in 1..20i64 {
        let d = BigInt::from(m * m + 1);
        let cf = contfrac::sqrt_cf(&d, &BigInt::from(m)).unwrap();
        for i in 1..10 {
            assert_eq!(cf.term(i).unwrap().value(), int(2 * m));
        }
        let classical = contfrac::classical_sqrt_cf(&d).unwrap().to_rational_cf();
        assert_eq!(
            contfrac::convergents_direct(&cf, 12).unwrap(),
            contfrac::convergents_direct(&classical, 12).unwrap()
        );
    }
}

#[test]
fn convergents_reach_any_tolerance() {
    for (d, z) in [(2i64, 1i64), (10, 3), (26, 22), (7, 1), (999_999, 990)] {
        let cf = contfrac::sqrt_cf(&BigInt::from(d), &BigInt::from(z)).unwrap();
        let conv = contfrac::convergents_direct(&cf, 400).unwrap();
        for t in [1u32, 10, 30, 50] {
            let tol = Rational::new(BigInt::one(), BigInt::from(10).pow(t));
            let hit = conv
                .iter()
                .any(|c| (c * c - int(d)).abs() < tol);
            assert!(hit, "d={d} z={z} t={t}");
        }
    }
}

#[test]
fn pade_contact_grid() {
    for z in 1..=10i64 {
        for r in 0..=8u64 {
            let c = approx::pade_contact_order(&BigInt::from(z), 2 * r + 1).unwrap();
            assert_eq!(c.contact as u64, 2 * r, "z={z} r={r}");
            assert_eq!((c.numer_degree as u64, c.denom_degree as u64), (r, r));
        }
    }
}

#[test]
fn padic_digit_chain() {
    for (d, p) in [(26i64, 229u64), (7, 3), (2, 7), (11, 5), (3, 13)] {
        let d = BigInt::from(d);
        for choice in [RootChoice::Smaller, RootChoice::Larger] {
            let ctx = PadicSqrtContext::new(&d, p, &choice, 16).unwrap();
            let a = ctx.truncations(15).unwrap();
            let pb = BigInt::from(p);
            for n in 0..15 {
                assert!((&a[n + 1] - &a[n]).is_multiple_of(&pb.pow(n as u32 + 1)));
            }
            assert!(padic::check_linear_padic(&ctx, 15).unwrap());
            assert!(padic::check_newton_padic(&ctx, 6).unwrap());
        }
    }
}

#[test]
fn permutation_small_primes_exhaustive() {
    for p in (3u64..=47).filter(|&p| arith::is_prime(p)) {
        let d = (2..p).find(|&d| arith::legendre(d, p) == -1).unwrap();
        for n in 1..=12u64 {
            let observed = rd::permutation_exhaustive(p, &BigInt::from(d), n).unwrap();
            assert_eq!(observed, n.gcd(&(p + 1)) == 1, "p={p} d={d} n={n}");
        }
    }
}
