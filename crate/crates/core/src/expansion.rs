//! Forward and inverse transforms against the orthonormal basis, weighted
//! L_p norms, Parseval checks, and the sup-norm estimator.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::extremum::{chebyshev_grid, grid_refined_max};
use crate::quadrature::{gen_gegenbauer_rule, integrate_converged, QuadratureRule};
use crate::scalar::Real;
use crate::special::{check_t, BasisParams, OrthonormalBasis};

// Relative tolerance handed to converged quadrature by the transform path;
// one order tighter than the 1e-10 checks built on top of it. Transform
// integrands of polynomial inputs are themselves polynomials, so the ladder
// ends at the exactness degree and the value is rounding-limited.
const TRANSFORM_REL_TOL: f64 = 1e-11;

// Relative tolerance for L_p norms. |f|^p with fractional p is algebraically
// singular at every root of f and converges like a low power of the rule
// size, so tightening this buys digits at a steep cost. Even integer powers
// still end at the exactness degree and come out rounding-limited.
const NORM_REL_TOL: f64 = 1e-7;

// Sampling resolution of the p = infinity norm for functions that carry no
// degree information.
const RESOLUTION_FALLBACK: usize = 4096;

/// Expansion coefficients against the orthonormal basis, indexed by degree.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientVector<T> {
    params: BasisParams<T>,
    coeffs: Vec<T>,
}

impl<T: Real> CoefficientVector<T> {
    /// Requires a nonempty list of finite entries.
    pub fn new(params: BasisParams<T>, coeffs: Vec<T>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::invalid("coefficient vector must not be empty"));
        }
        if let Some(bad) = coeffs.iter().find(|c| !c.is_finite()) {
            return Err(Error::invalid(format!(
                "coefficient vector contains a non-finite entry {bad}"
            )));
        }
        Ok(Self { params, coeffs })
    }

    /// The basis vector with 1 at degree `n`.
    pub fn unit(params: BasisParams<T>, n: usize) -> Self {
        let mut coeffs = vec![T::zero(); n + 1];
        coeffs[n] = T::one();
        Self { params, coeffs }
    }

    pub fn params(&self) -> BasisParams<T> {
        self.params
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Highest represented degree.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Plain Euclidean norm of the entries.
    pub fn l2_norm(&self) -> T {
        self.coeffs
            .iter()
            .map(|&c| c * c)
            .fold(T::zero(), |a, b| a + b)
            .sqrt()
    }
}

/// Integrand of the verification machinery: either a polynomial with known
/// coefficients (monomial or orthonormal basis) or an arbitrary pointwise
/// function, finite on `[-1,1]` away from 0.
#[derive(Clone)]
pub enum TestFunction<T> {
    /// Polynomial given against the orthonormal basis.
    OrthonormalPoly(CoefficientVector<T>),
    /// Polynomial `c_0 + c_1 t + c_2 t^2 + ...`; an empty list is the zero
    /// function.
    MonomialPoly(Vec<T>),
    /// Pointwise function.
    Callable(Arc<dyn Fn(T) -> T + Send + Sync>),
}

impl<T: Real> fmt::Debug for TestFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::OrthonormalPoly(cv) => write!(f, "OrthonormalPoly(degree {})", cv.degree()),
            Self::MonomialPoly(c) => write!(f, "MonomialPoly(len {})", c.len()),
            Self::Callable(_) => write!(f, "Callable"),
        }
    }
}

fn horner<T: Real>(coeffs: &[T], t: T) -> T {
    let mut acc = T::zero();
    for &c in coeffs.iter().rev() {
        acc = acc * t + c;
    }
    acc
}

impl<T: Real> TestFunction<T> {
    pub fn callable(f: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        Self::Callable(Arc::new(f))
    }

    pub fn monomial(coeffs: Vec<T>) -> Self {
        Self::MonomialPoly(coeffs)
    }

    /// Degree bound when the function is a known polynomial.
    pub fn polynomial_degree(&self) -> Option<usize> {
        match self {
            Self::OrthonormalPoly(cv) => Some(cv.degree()),
            Self::MonomialPoly(c) => Some(c.len().saturating_sub(1)),
            Self::Callable(_) => None,
        }
    }

    /// Self-contained evaluation closure. Polynomial variants precompute
    /// their basis data once, so the closure is cheap per point. Callers
    /// keep arguments within `[-1, 1]`.
    pub fn evaluator(&self) -> Box<dyn Fn(T) -> T + Send + Sync> {
        match self {
            Self::OrthonormalPoly(cv) => {
                let basis = OrthonormalBasis::new(cv.params(), cv.degree());
                let coeffs = cv.coeffs().to_vec();
                Box::new(move |t| basis.weighted_value(&coeffs, t))
            }
            Self::MonomialPoly(c) => {
                let coeffs = c.clone();
                Box::new(move |t| horner(&coeffs, t))
            }
            Self::Callable(f) => {
                let f = Arc::clone(f);
                Box::new(move |t| f(t))
            }
        }
    }
}

/// Coefficients `f_hat_n = integral(f Ctilde_n v)`, `n = 0..=degree`.
///
/// Polynomial inputs use one shared rule sized for exact integration of
/// every coefficient integrand; general inputs use converged quadrature
/// per coefficient.
pub fn forward_transform<T: Real>(
    bp: BasisParams<T>,
    f: &TestFunction<T>,
    degree: usize,
) -> Result<CoefficientVector<T>> {
    let basis = OrthonormalBasis::new(bp, degree);
    let eval = f.evaluator();
    match f.polynomial_degree() {
        Some(fdeg) => {
            let exactness = (fdeg + degree).max(2 * degree + 1);
            let n_rule = (exactness + 1).div_ceil(4).max(1);
            let rule = gen_gegenbauer_rule(bp, n_rule)?;
            let mut acc = vec![T::zero(); degree + 1];
            let mut row = Vec::new();
            for (&t, &w) in rule.nodes().iter().zip(rule.weights()) {
                let fv = eval(t);
                if !fv.is_finite() {
                    return Err(Error::NonFiniteEvaluation { node: t.as_f64() });
                }
                basis.eval_batch_into(t, &mut row)?;
                let wf = w * fv;
                for (a, &bv) in acc.iter_mut().zip(&row) {
                    *a += wf * bv;
                }
            }
            CoefficientVector::new(bp, acc)
        }
        None => {
            let tol = T::of(TRANSFORM_REL_TOL);
            let mut acc = Vec::with_capacity(degree + 1);
            for n in 0..=degree {
                let (v, _) = integrate_converged(bp, |t| eval(t) * basis.degree_value(n, t), tol)?;
                acc.push(v);
            }
            CoefficientVector::new(bp, acc)
        }
    }
}

/// `sum_n coeffs_n Ctilde_n(t)` through the batched evaluator.
///
/// Builds the basis constants on each call; loops that evaluate the same
/// vector densely should go through [`TestFunction::evaluator`] instead.
pub fn partial_sum_eval<T: Real>(cv: &CoefficientVector<T>, t: T) -> Result<T> {
    check_t(t)?;
    let basis = OrthonormalBasis::new(cv.params(), cv.degree());
    Ok(basis.weighted_value(cv.coeffs(), t))
}

/// Weighted norm `(integral |f|^p v)^{1/p}`, or the sup-norm sampling
/// estimate for `p = infinity`.
///
/// Finite-p values are resolved to roughly seven digits; even integer
/// powers of polynomials integrate exactly and are rounding-limited.
pub fn lp_norm<T: Real>(bp: BasisParams<T>, f: &TestFunction<T>, p: T) -> Result<T> {
    if p.is_nan() || p < T::one() {
        return Err(Error::invalid(format!(
            "L_p norms are defined here for p in [1, inf], got p = {p}"
        )));
    }
    let eval = f.evaluator();
    if p == T::infinity() {
        let points = match f.polynomial_degree() {
            Some(d) => sup_grid_size(d),
            None => RESOLUTION_FALLBACK,
        };
        return Ok(sup_on_interval(
            |t| eval(t).abs(),
            T::of(-1.0),
            T::one(),
            points,
        ));
    }
    lp_norm_with_tol(bp, f, p, T::of(NORM_REL_TOL))
}

/// Finite-p norm at a caller-chosen quadrature tolerance. Scan paths that
/// only feed coarse ratio checks use this to stop the doubling ladder
/// before the singular-integrand tail gets expensive.
pub(crate) fn lp_norm_with_tol<T: Real>(
    bp: BasisParams<T>,
    f: &TestFunction<T>,
    p: T,
    rel_tol: T,
) -> Result<T> {
    let eval = f.evaluator();
    let (v, _) = integrate_converged(bp, |t| eval(t).abs().powf(p), rel_tol)?;
    Ok(v.powf(p.recip()))
}

/// `(lhs, rhs) = (L_2(v) norm of f, Euclidean norm of the transform)`.
/// For a polynomial `f` of degree at most `degree` the two agree.
pub fn parseval_check<T: Real>(
    bp: BasisParams<T>,
    f: &TestFunction<T>,
    degree: usize,
) -> Result<(T, T)> {
    let lhs = lp_norm(bp, f, T::of(2.0))?;
    let rhs = forward_transform(bp, f, degree)?.l2_norm();
    Ok((lhs, rhs))
}

pub(crate) fn sup_grid_size(degree: usize) -> usize {
    4096usize.max(32 * (degree + 1))
}

fn sup_on_interval<T: Real, F: Fn(T) -> T>(f: F, lo: T, hi: T, points: usize) -> T {
    let grid = chebyshev_grid(lo, hi, points);
    grid_refined_max(f, &grid)
}

/// Estimate of `max |Ctilde_n|` over `[-1, 1]`: Chebyshev grid of size
/// `max(4096, 32 (n+1))`, each local maximum refined by golden section.
/// The result is an attained value, hence a lower bound on the true sup.
pub fn sup_norm_estimate<T: Real>(bp: BasisParams<T>, n: usize) -> T {
    sup_norm_estimate_interval(bp, n, T::of(-1.0), T::one())
}

pub(crate) fn sup_norm_estimate_interval<T: Real>(bp: BasisParams<T>, n: usize, lo: T, hi: T) -> T {
    let f = TestFunction::OrthonormalPoly(CoefficientVector::unit(bp, n));
    let eval = f.evaluator();
    sup_on_interval(|t| eval(t).abs(), lo, hi, sup_grid_size(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{orthonormal_coefficient, orthonormal_gg_eval};

    fn bp(l: f64, m: f64) -> BasisParams<f64> {
        BasisParams::new(l, m).unwrap()
    }

    // deterministic coefficient noise for the self-consistency tests
    fn wobble(i: usize) -> f64 {
        let x = ((i * 2654435761) % 1000) as f64;
        x / 500.0 - 1.0
    }

    #[test]
    fn coefficient_vector_validation() {
        let b = bp(1.0, 0.5);
        assert!(CoefficientVector::new(b, vec![]).is_err());
        assert!(CoefficientVector::new(b, vec![1.0, f64::NAN]).is_err());
        let u = CoefficientVector::unit(b, 4);
        assert_eq!(u.degree(), 4);
        assert_eq!(u.coeffs(), &[0.0, 0.0, 0.0, 0.0, 1.0]);
        assert_eq!(u.l2_norm(), 1.0);
    }

    #[test]
    fn partial_sum_of_zero_vector() {
        let cv = CoefficientVector::new(bp(0.5, 0.0), vec![0.0; 8]).unwrap();
        assert_eq!(partial_sum_eval(&cv, 0.37).unwrap(), 0.0);
    }

    #[test]
    fn partial_sum_of_unit_vector_matches_single_eval_bits() {
        let b = bp(1.5, 0.5);
        for n in 0..=9 {
            let cv = CoefficientVector::unit(b, n);
            for &t in &[-1.0, -0.41, 0.0, 0.7, 1.0] {
                let via_sum = partial_sum_eval(&cv, t).unwrap();
                let direct = orthonormal_gg_eval(b, n, t).unwrap();
                if direct == 0.0 {
                    // only the sign of an exact zero may differ between paths
                    assert_eq!(via_sum, direct, "n = {n}, t = {t}");
                } else {
                    assert_eq!(via_sum.to_bits(), direct.to_bits(), "n = {n}, t = {t}");
                }
            }
        }
    }

    #[test]
    fn partial_sum_is_linear() {
        let b = bp(0.5, 0.25);
        let u: Vec<f64> = (0..12).map(wobble).collect();
        let v: Vec<f64> = (0..12).map(|i| wobble(i + 100)).collect();
        let (a, c) = (0.7, -1.3);
        let combo: Vec<f64> = u.iter().zip(&v).map(|(&x, &y)| a * x + c * y).collect();
        let cu = CoefficientVector::new(b, u).unwrap();
        let cv = CoefficientVector::new(b, v).unwrap();
        let cc = CoefficientVector::new(b, combo).unwrap();
        for &t in &[-0.9, -0.2, 0.1, 0.8] {
            let lhs = partial_sum_eval(&cc, t).unwrap();
            let rhs = a * partial_sum_eval(&cu, t).unwrap() + c * partial_sum_eval(&cv, t).unwrap();
            assert!((lhs - rhs).abs() < 1e-12 * (1.0 + lhs.abs()), "t = {t}");
        }
    }

    #[test]
    fn partial_sum_rejects_outside_domain() {
        let cv = CoefficientVector::unit(bp(0.5, 0.0), 2);
        assert!(partial_sum_eval(&cv, 1.01).is_err());
    }

    #[test]
    fn transform_recovers_unit_vector() {
        let b = bp(-0.4, 1.0);
        let f = TestFunction::OrthonormalPoly(CoefficientVector::unit(b, 3));
        let got = forward_transform(b, &f, 6).unwrap();
        for (n, &c) in got.coeffs().iter().enumerate() {
            let want = if n == 3 { 1.0 } else { 0.0 };
            assert!((c - want).abs() < 1e-11, "n = {n}: {c}");
        }
    }

    #[test]
    fn transform_of_constant_hits_only_degree_zero() {
        let b = bp(3.0, 0.25);
        let f = TestFunction::monomial(vec![1.0]);
        let got = forward_transform(b, &f, 5).unwrap();
        let want0 = 1.0 / orthonormal_coefficient(b, 0);
        assert!(((got.coeffs()[0] - want0) / want0).abs() < 1e-12);
        for &c in &got.coeffs()[1..] {
            assert!(c.abs() < 1e-12, "tail entry {c:e}");
        }
    }

    #[test]
    fn transform_round_trips_monomial_polynomial() {
        let b = bp(0.5, 1.0);
        let coeffs: Vec<f64> = (0..13).map(wobble).collect();
        let f = TestFunction::monomial(coeffs.clone());
        let cv = forward_transform(b, &f, 12).unwrap();
        let grid = chebyshev_grid(-1.0, 1.0, 64);
        let sup = grid
            .iter()
            .map(|&t| horner(&coeffs, t).abs())
            .fold(0.0f64, f64::max);
        for &t in &grid {
            let got = partial_sum_eval(&cv, t).unwrap();
            let want = horner(&coeffs, t);
            assert!(
                (got - want).abs() < 1e-10 * (1.0 + sup),
                "t = {t}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn transform_is_linear_entrywise() {
        let b = bp(1.5, 2.5);
        let u: Vec<f64> = (0..11).map(wobble).collect();
        let v: Vec<f64> = (0..11).map(|i| wobble(i + 31)).collect();
        let (a, c) = (0.7, -1.3);
        let combo: Vec<f64> = u.iter().zip(&v).map(|(&x, &y)| a * x + c * y).collect();
        let tu = forward_transform(b, &TestFunction::monomial(u), 10).unwrap();
        let tv = forward_transform(b, &TestFunction::monomial(v), 10).unwrap();
        let tc = forward_transform(b, &TestFunction::monomial(combo), 10).unwrap();
        for n in 0..=10 {
            let want = a * tu.coeffs()[n] + c * tv.coeffs()[n];
            let got = tc.coeffs()[n];
            assert!((got - want).abs() < 1e-11 * (1.0 + want.abs()), "n = {n}");
        }
    }

    #[test]
    fn callable_transform_matches_polynomial_path() {
        let b = bp(1.5, 0.5);
        let poly = TestFunction::monomial(vec![0.5, 0.0, -1.0, 0.25]);
        let call = TestFunction::callable(|t: f64| 0.5 - t * t + 0.25 * t * t * t);
        let tp = forward_transform(b, &poly, 8).unwrap();
        let tc = forward_transform(b, &call, 8).unwrap();
        for n in 0..=8 {
            let (a, c) = (tp.coeffs()[n], tc.coeffs()[n]);
            assert!(
                (a - c).abs() < 1e-9 * (1.0 + a.abs()),
                "n = {n}: {a} vs {c}"
            );
        }
    }

    #[test]
    fn lp_norm_of_constant() {
        let b = bp(1.0, 1.0);
        let mass = gen_gegenbauer_rule(b, 4).unwrap().mass();
        let f = TestFunction::monomial(vec![-2.5]);
        for &p in &[1.0, 2.0, 3.7] {
            let want = 2.5 * mass.powf(1.0 / p);
            let got = lp_norm(b, &f, p).unwrap();
            assert!(
                ((got - want) / want).abs() < 1e-11,
                "p = {p}: {got} vs {want}"
            );
        }
        assert!((lp_norm(b, &f, f64::INFINITY).unwrap() - 2.5).abs() < 1e-12);
    }

    #[test]
    fn lp_norm_of_orthonormal_basis_vector_is_one() {
        let b = bp(-0.4, 2.5);
        let f = TestFunction::OrthonormalPoly(CoefficientVector::unit(b, 6));
        let got = lp_norm(b, &f, 2.0).unwrap();
        assert!((got - 1.0).abs() < 1e-10, "got {got}");
    }

    #[test]
    fn lp_norm_rejects_bad_exponents() {
        let b = bp(0.5, 0.0);
        let f = TestFunction::monomial(vec![1.0]);
        assert!(lp_norm(b, &f, 0.5).is_err());
        assert!(lp_norm(b, &f, f64::NAN).is_err());
    }

    #[test]
    fn sup_norm_of_low_degrees_is_exact() {
        let b = bp(1.5, 0.5);
        // constant: attained everywhere; linear: attained at the endpoints,
        // which the grid contains exactly
        assert_eq!(sup_norm_estimate(b, 0), orthonormal_coefficient(b, 0));
        assert_eq!(sup_norm_estimate(b, 1), orthonormal_coefficient(b, 1));
    }

    #[test]
    fn lp_infinity_matches_sup_estimate_bitwise() {
        let b = bp(1.5, 0.5);
        let f = TestFunction::OrthonormalPoly(CoefficientVector::unit(b, 7));
        let via_norm = lp_norm(b, &f, f64::INFINITY).unwrap();
        let via_sup = sup_norm_estimate(b, 7);
        assert_eq!(via_norm.to_bits(), via_sup.to_bits());
    }

    #[test]
    fn sup_norm_halves_agree_by_parity() {
        let b = bp(0.5, 1.0);
        let left = sup_norm_estimate_interval(b, 9, -1.0, 0.0);
        let right = sup_norm_estimate_interval(b, 9, 0.0, 1.0);
        assert!(
            (left - right).abs() < 1e-10 * (1.0 + right.abs()),
            "{left} vs {right}"
        );
    }

    #[test]
    fn parseval_of_basis_vector() {
        let b = bp(0.0, 0.5);
        let f = TestFunction::OrthonormalPoly(CoefficientVector::unit(b, 5));
        let (lhs, rhs) = parseval_check(b, &f, 5).unwrap();
        assert!((lhs - 1.0).abs() < 1e-10, "lhs {lhs}");
        assert!((rhs - 1.0).abs() < 1e-12, "rhs {rhs}");
    }

    #[test]
    fn parseval_of_zero_function() {
        let b = bp(0.5, 0.0);
        let f = TestFunction::monomial(vec![0.0]);
        let (lhs, rhs) = parseval_check(b, &f, 3).unwrap();
        assert_eq!(lhs, 0.0);
        assert_eq!(rhs, 0.0);
    }
}
