//! Cross-checks against independent references: exact rational arithmetic,
//! closed-form classical families, and frozen moment values.

// frozen reference constants keep their guard digits
#![allow(clippy::excessive_precision)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use ggexp::quadrature::{gauss_jacobi_rule, integrate, jacobi_moments, QuadratureRule};
use ggexp::special::{gen_gegenbauer_eval, jacobi_eval, orthonormal_gg_eval};
use ggexp::{BasisParams64, JacobiParams64};

/// Rounds a big rational to the nearest f64 by scaling the quotient into a
/// 56-bit window first; plain numer/denom conversion overflows long before
/// the degrees used here.
fn ratio_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let neg = r.is_negative();
    let mut num = r.numer().abs();
    let mut den = r.denom().abs();
    let shift = num.bits() as i64 - den.bits() as i64 - 56;
    if shift >= 0 {
        den <<= shift as usize;
    } else {
        num <<= (-shift) as usize;
    }
    let q = (num / den).to_f64().expect("56-bit quotient");
    let v = q * (shift as f64).exp2();
    if neg {
        -v
    } else {
        v
    }
}

fn int(k: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(k))
}

fn poch(x: &BigRational, m: usize) -> BigRational {
    let mut acc = BigRational::one();
    for j in 0..m {
        acc *= x + int(j as i64);
    }
    acc
}

fn binom(n: usize, m: usize) -> BigRational {
    let mut acc = BigInt::one();
    for j in 0..m {
        acc *= BigInt::from((n - j) as i64);
    }
    let mut fact = BigInt::one();
    for j in 1..=m {
        fact *= BigInt::from(j as i64);
    }
    BigRational::new(acc, fact)
}

/// Degree-n Jacobi value from the hypergeometric series about t = 1, in
/// exact arithmetic on the binary values of the inputs.
fn jacobi_series(alpha: f64, beta: f64, n: usize, t: f64) -> f64 {
    let a = BigRational::from_float(alpha).unwrap();
    let b = BigRational::from_float(beta).unwrap();
    let z = (BigRational::from_float(t).unwrap() - BigRational::one()) / int(2);
    let nab1 = &a + &b + int(n as i64 + 1);
    let mut fact_n = BigInt::one();
    for j in 1..=n {
        fact_n *= BigInt::from(j as i64);
    }
    let mut sum = BigRational::zero();
    for m in 0..=n {
        let tail = &a + int(m as i64 + 1);
        let c = binom(n, m) * poch(&nab1, m) * poch(&tail, n - m)
            / BigRational::from_integer(fact_n.clone());
        sum += c * z.pow(m as i32);
    }
    ratio_to_f64(&sum)
}

#[test]
fn jacobi_recurrence_matches_exact_series() {
    for &(alpha, beta) in &[(0.0, 0.0), (1.2, -0.3), (3.0, 0.5), (-0.49, 1.0)] {
        let p = JacobiParams64::new(alpha, beta).unwrap();
        for n in 0..=30 {
            for &t in &[-1.0, -0.5, 0.0, 0.5, 1.0] {
                let got = jacobi_eval(p, n, t).unwrap();
                let want = jacobi_series(alpha, beta, n, t);
                assert!(
                    (got - want).abs() <= 1e-11 * (1.0 + want.abs()),
                    "({alpha}, {beta}), n = {n}, t = {t}: {got} vs {want}"
                );
            }
        }
    }
}

/// Moments of (1-t)^1.2 (1+t)^-0.3 for t^0 .. t^39, computed once with
/// 60-digit working precision and rounded to nearest.
const MOMENTS_A12_BM03: [f64; 40] = [
    2.9209962691004691,
    -1.5108601391898977,
    1.3300734558680297,
    -1.0238429514656817,
    0.93660759233942565,
    -0.79714249193795144,
    0.74414578476000701,
    -0.66281726165929429,
    0.62659054402111015,
    -0.57269944122073573,
    0.54608101327908361,
    -0.50745084745162657,
    0.48691132498182443,
    -0.45770316489209768,
    0.44128314289948831,
    -0.41832952797861538,
    0.40484589024917585,
    -0.38627202555722804,
    0.37496422977747897,
    -0.35958578012901068,
    0.34994059524957155,
    -0.33697058932116030,
    0.32862796586706035,
    -0.31752188409100872,
    0.31022108266713904,
    -0.30058947368717166,
    0.29413660491789368,
    -0.28569312191153300,
    0.27994073630937889,
    -0.27246985495103535,
    0.26730364060810473,
    -0.26063985135085768,
    0.25596969427367354,
    -0.24998366145094430,
    0.24573747641246917,
    -0.24032657734284038,
    0.23644595093537418,
    -0.2315276532325274,
    0.22796470336986556,
    -0.22347183075527723,
];

#[test]
fn moment_recurrence_matches_frozen_values() {
    let p = JacobiParams64::new(1.2, -0.3).unwrap();
    let m = jacobi_moments(p, 39);
    assert_eq!(m.len(), 40);
    for (k, (&got, &want)) in m.iter().zip(&MOMENTS_A12_BM03).enumerate() {
        assert!(
            (got - want).abs() <= 1e-12 * want.abs(),
            "k = {k}: {got} vs {want}"
        );
    }
}

#[test]
fn rule_node_sums_match_frozen_moments() {
    // 20 points integrate t^k exactly through k = 39
    let p = JacobiParams64::new(1.2, -0.3).unwrap();
    let rule = gauss_jacobi_rule(p, 20).unwrap();
    assert_eq!(rule.exactness_degree(), 39);
    for (k, &want) in MOMENTS_A12_BM03.iter().enumerate() {
        let got = integrate(&*rule, |t: f64| t.powi(k as i32)).unwrap();
        assert!(
            (got - want).abs() <= 1e-12 * want.abs().max(1.0),
            "k = {k}: {got} vs {want}"
        );
    }
}

#[test]
fn legendre_orthonormal_values_at_one() {
    // lambda = 1/2, mu = 0 is the unit weight, so the orthonormal family
    // is sqrt(n + 1/2) P_n and P_n(1) = 1
    let b = BasisParams64::new(0.5, 0.0).unwrap();
    for n in 0..=10 {
        let got = orthonormal_gg_eval(b, n, 1.0).unwrap();
        let want = (n as f64 + 0.5).sqrt();
        assert!(
            (got - want).abs() <= 1e-12 * want,
            "n = {n}: {got} vs {want}"
        );
    }
}

#[test]
fn chebyshev_u_orthonormal_values() {
    // lambda = 1, mu = 0: orthonormal family is sqrt(2/pi) U_n
    let b = BasisParams64::new(1.0, 0.0).unwrap();
    let scale = (2.0 / std::f64::consts::PI).sqrt();
    for &t in &[-0.8_f64, -0.25, 0.3, 0.9] {
        let theta = t.acos();
        for n in 0..=12 {
            let got = orthonormal_gg_eval(b, n, t).unwrap();
            let want = scale * ((n as f64 + 1.0) * theta).sin() / theta.sin();
            assert!(
                (got - want).abs() <= 1e-12 * (1.0 + want.abs()),
                "n = {n}, t = {t}: {got} vs {want}"
            );
        }
    }
}

#[test]
fn hand_derived_point_values() {
    // lambda = 3/2, mu = 1/2: the degree-4 member is 3 P_2^{(1,0)}(2t^2-1)
    // and the degree-3 member is 3 t P_1^{(1,1)}(2t^2-1) = 6 t (2t^2-1)
    let b = BasisParams64::new(1.5, 0.5).unwrap();
    let v4 = gen_gegenbauer_eval(b, 4, 0.3).unwrap();
    assert!((v4 - 1.083).abs() < 1e-13, "got {v4}");
    let v3 = gen_gegenbauer_eval(b, 3, 0.3).unwrap();
    assert!((v3 + 1.476).abs() < 1e-13, "got {v3}");
}
