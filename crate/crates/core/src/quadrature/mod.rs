//! Gaussian quadrature for Jacobi weights and for the generalized weight
//! `v(t) = |t|^(2 mu) (1 - t^2)^(lambda - 1/2)`.
//!
//! Jacobi rules come from the Golub-Welsch eigenproblem. The generalized
//! rule maps an N-point Jacobi rule in `s = 2 t^2 - 1` onto signed nodes
//! `t = +-sqrt((1 + s) / 2)`, which doubles the effective exactness to
//! `4N - 1` and keeps every node away from the origin.
//!
//! Rules are immutable, cached per `(scalar, params, size)`, and shared as
//! `Arc`s; verification workloads rebuild the same rules constantly.

mod tridiag;

use std::any::{Any, TypeId};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::gamma::ln_beta;
use crate::scalar::{Kahan, Real};
use crate::special::{BasisParams, JacobiParams};

/// Shared surface of the two rule types: node/weight access plus the
/// declared polynomial exactness degree.
pub trait QuadratureRule<T: Real>: Send + Sync {
    fn nodes(&self) -> &[T];
    fn weights(&self) -> &[T];
    /// Largest k with `integral(t^k)` reproduced exactly.
    fn exactness_degree(&self) -> usize;
    /// Total weight mass, from the Beta closed form (not a node sum).
    fn mass(&self) -> T;
}

/// Gauss rule for the Jacobi weight `(1-t)^alpha (1+t)^beta`.
#[derive(Clone, Debug)]
pub struct GaussJacobiRule<T> {
    params: JacobiParams<T>,
    nodes: Vec<T>,
    weights: Vec<T>,
    mass: T,
}

/// Gauss-type rule for the generalized weight; `2 n_points` signed nodes,
/// symmetric about 0, none equal to 0.
#[derive(Clone, Debug)]
pub struct GenGegenbauerRule<T> {
    params: BasisParams<T>,
    nodes: Vec<T>,
    weights: Vec<T>,
    mass: T,
}

/// Monic-recurrence tridiagonal data for the Jacobi weight, plus the mass.
///
/// The generic closed forms have removable 0/0 points at `alpha + beta = 0`
/// (the k = 0 diagonal) and `alpha + beta = -1` (the k = 1 off-diagonal);
/// both use the cancelled expressions instead.
fn recurrence_arrays<T: Real>(p: JacobiParams<T>, n: usize) -> (Vec<T>, Vec<T>, T) {
    let (a, b) = (p.alpha(), p.beta());
    let one = T::one();
    let two = T::of(2.0);
    let four = T::of(4.0);

    let mut diag = Vec::with_capacity(n);
    diag.push((b - a) / (a + b + two));
    for k in 1..n {
        let c = two * T::of(k as f64) + a + b;
        diag.push((b * b - a * a) / (c * (c + two)));
    }

    let mut off = vec![T::zero(); n];
    if n >= 2 {
        let s = a + b + two;
        off[0] = (four * (a + one) * (b + one) / (s * s * (s + one))).sqrt();
    }
    for k in 2..n {
        let kf = T::of(k as f64);
        let c = two * kf + a + b;
        let num = four * kf * (kf + a) * (kf + b) * (kf + a + b);
        let den = c * c * (c + one) * (c - one);
        off[k - 1] = (num / den).sqrt();
    }

    let mass = (T::LN_2() * (a + b + one)
        + ln_beta(a + one, b + one).expect("alpha, beta > -1 keeps Beta arguments positive"))
    .exp();
    (diag, off, mass)
}

/// Monomial moments `M_k = integral(t^k w_{alpha,beta})`, `k = 0..=max_power`.
///
/// Computed by the integration-by-parts recurrence
/// `M_{k+1} = ((beta - alpha) M_k + k M_{k-1}) / (alpha + beta + 2 + k)`,
/// which only averages previous values with positive, growing denominators.
pub fn jacobi_moments<T: Real>(p: JacobiParams<T>, max_power: usize) -> Vec<T> {
    let (a, b) = (p.alpha(), p.beta());
    let m0 = (T::LN_2() * (a + b + T::one())
        + ln_beta(a + T::one(), b + T::one()).expect("Beta arguments positive"))
    .exp();
    let mut out = Vec::with_capacity(max_power + 1);
    out.push(m0);
    for k in 0..max_power {
        let kf = T::of(k as f64);
        let prev = if k == 0 { T::zero() } else { kf * out[k - 1] };
        let next = ((b - a) * out[k] + prev) / (a + b + T::of(2.0) + kf);
        out.push(next);
    }
    out
}

/// Worst relative monomial residual of a rule against reference moments.
fn certify_against<T: Real>(nodes: &[T], weights: &[T], moments: &[T]) -> T {
    let mut powers = vec![T::one(); nodes.len()];
    let mut worst = T::zero();
    for m in moments {
        let mut quad = Kahan::new();
        let mut scale = Kahan::new();
        for ((p, &w), &t) in powers.iter_mut().zip(weights).zip(nodes) {
            quad.add(w * *p);
            scale.add(w * p.abs());
            *p *= t;
        }
        let denom = if scale.value() > T::zero() {
            scale.value()
        } else {
            T::one()
        };
        let resid = (quad.value() - *m).abs() / denom;
        if resid > worst {
            worst = resid;
        }
    }
    worst
}

// Certification tolerance for the constructor's debug-mode check, scaled
// from the f64 contract to the active scalar's precision.
fn debug_certify_tol<T: Real>() -> f64 {
    1e-12_f64.max(1e-12 * T::epsilon().as_f64() / f64::EPSILON)
}

impl<T: Real> GaussJacobiRule<T> {
    fn build(params: JacobiParams<T>, n_points: usize) -> Result<Self> {
        if n_points == 0 {
            return Err(Error::invalid("a quadrature rule needs at least one point"));
        }
        let (mut d, mut e, mass) = recurrence_arrays(params, n_points);
        let z = tridiag::eigen_first_components(&mut d, &mut e)?;
        let weights: Vec<T> = z.iter().map(|&zi| mass * zi * zi).collect();
        let rule = Self {
            params,
            nodes: d,
            weights,
            mass,
        };
        #[cfg(debug_assertions)]
        if n_points <= 64 {
            let resid = rule.certify();
            assert!(
                resid.as_f64() <= debug_certify_tol::<T>(),
                "Gauss-Jacobi rule failed exactness certification: residual {resid:e}"
            );
        }
        Ok(rule)
    }

    pub fn params(&self) -> JacobiParams<T> {
        self.params
    }

    /// Worst relative monomial residual up to the exactness degree.
    pub fn certify(&self) -> T {
        let moments = jacobi_moments(self.params, self.exactness_degree());
        certify_against(&self.nodes, &self.weights, &moments)
    }
}

impl<T: Real> QuadratureRule<T> for GaussJacobiRule<T> {
    fn nodes(&self) -> &[T] {
        &self.nodes
    }

    fn weights(&self) -> &[T] {
        &self.weights
    }

    fn exactness_degree(&self) -> usize {
        2 * self.nodes.len() - 1
    }

    fn mass(&self) -> T {
        self.mass
    }
}

impl<T: Real> GenGegenbauerRule<T> {
    fn build(params: BasisParams<T>, n_points: usize) -> Result<Self> {
        let base = gauss_jacobi_rule(params.even_jacobi(), n_points)?;
        let half = T::of(0.5);
        // d t-weight = 2^{-(lambda+mu)} / 2 * s-weight, per signed node
        let scale = (-(params.lambda() + params.mu()) * T::LN_2()).exp() * half;
        let n = n_points;
        let mut nodes = Vec::with_capacity(2 * n);
        let mut weights = Vec::with_capacity(2 * n);
        for i in (0..n).rev() {
            let t = ((T::one() + base.nodes()[i]) * half).sqrt();
            nodes.push(-t);
            weights.push(scale * base.weights()[i]);
        }
        for i in 0..n {
            let t = ((T::one() + base.nodes()[i]) * half).sqrt();
            nodes.push(t);
            weights.push(scale * base.weights()[i]);
        }
        let mass = ln_beta(params.mu() + half, params.lambda() + half)
            .expect("validated parameters keep Beta arguments positive")
            .exp();
        let rule = Self {
            params,
            nodes,
            weights,
            mass,
        };
        #[cfg(debug_assertions)]
        if n_points <= 64 {
            let resid = rule.certify();
            assert!(
                resid.as_f64() <= debug_certify_tol::<T>(),
                "generalized rule failed exactness certification: residual {resid:e}"
            );
        }
        Ok(rule)
    }

    pub fn params(&self) -> BasisParams<T> {
        self.params
    }

    /// Worst relative monomial residual up to the exactness degree.
    /// Odd moments are 0 by symmetry; even ones are Beta values.
    pub fn certify(&self) -> T {
        let half = T::of(0.5);
        let kmax = self.exactness_degree();
        let mut moments = Vec::with_capacity(kmax + 1);
        for k in 0..=kmax {
            if k % 2 == 1 {
                moments.push(T::zero());
            } else {
                let j = T::of((k / 2) as f64);
                let m = ln_beta(j + self.params.mu() + half, self.params.lambda() + half)
                    .expect("Beta arguments positive")
                    .exp();
                moments.push(m);
            }
        }
        certify_against(&self.nodes, &self.weights, &moments)
    }
}

impl<T: Real> QuadratureRule<T> for GenGegenbauerRule<T> {
    fn nodes(&self) -> &[T] {
        &self.nodes
    }

    fn weights(&self) -> &[T] {
        &self.weights
    }

    fn exactness_degree(&self) -> usize {
        2 * self.nodes.len() - 1
    }

    fn mass(&self) -> T {
        self.mass
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct RuleKey {
    ty: TypeId,
    p0: u64,
    p1: u64,
    n: usize,
}

type CacheMap = HashMap<RuleKey, Arc<dyn Any + Send + Sync>>;

static RULE_CACHE: OnceLock<Mutex<CacheMap>> = OnceLock::new();

fn cache() -> &'static Mutex<CacheMap> {
    RULE_CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cache_get<R: Any + Send + Sync>(key: &RuleKey) -> Option<Arc<R>> {
    let map = cache().lock().expect("rule cache poisoned");
    map.get(key).map(|a| {
        a.clone()
            .downcast::<R>()
            .expect("key pins the concrete type")
    })
}

fn cache_put<R: Any + Send + Sync>(key: RuleKey, rule: Arc<R>) -> Arc<R> {
    let mut map = cache().lock().expect("rule cache poisoned");
    let slot = map
        .entry(key)
        .or_insert_with(|| rule as Arc<dyn Any + Send + Sync>);
    slot.clone()
        .downcast::<R>()
        .expect("key pins the concrete type")
}

/// Cached Golub-Welsch rule for the Jacobi weight. `n_points >= 1`.
pub fn gauss_jacobi_rule<T: Real>(
    p: JacobiParams<T>,
    n_points: usize,
) -> Result<Arc<GaussJacobiRule<T>>> {
    if n_points == 0 {
        return Err(Error::invalid("a quadrature rule needs at least one point"));
    }
    let key = RuleKey {
        ty: TypeId::of::<GaussJacobiRule<T>>(),
        p0: p.alpha().as_f64().to_bits(),
        p1: p.beta().as_f64().to_bits(),
        n: n_points,
    };
    if let Some(hit) = cache_get(&key) {
        return Ok(hit);
    }
    let rule = Arc::new(GaussJacobiRule::build(p, n_points)?);
    Ok(cache_put(key, rule))
}

/// Cached rule for the generalized weight; `2 n_points` signed nodes and
/// exactness degree `4 n_points - 1`.
pub fn gen_gegenbauer_rule<T: Real>(
    bp: BasisParams<T>,
    n_points: usize,
) -> Result<Arc<GenGegenbauerRule<T>>> {
    if n_points == 0 {
        return Err(Error::invalid("a quadrature rule needs at least one point"));
    }
    let key = RuleKey {
        ty: TypeId::of::<GenGegenbauerRule<T>>(),
        p0: bp.lambda().as_f64().to_bits(),
        p1: bp.mu().as_f64().to_bits(),
        n: n_points,
    };
    if let Some(hit) = cache_get(&key) {
        return Ok(hit);
    }
    let rule = Arc::new(GenGegenbauerRule::build(bp, n_points)?);
    Ok(cache_put(key, rule))
}

/// Weighted node sum `sum_i w_i f(t_i)`, compensated.
///
/// Errors if `f` returns a non-finite value at any node; the error carries
/// the offending node.
pub fn integrate<T, R, F>(rule: &R, f: F) -> Result<T>
where
    T: Real,
    R: QuadratureRule<T> + ?Sized,
    F: Fn(T) -> T,
{
    let mut acc = Kahan::new();
    for (&t, &w) in rule.nodes().iter().zip(rule.weights()) {
        let v = f(t);
        if !v.is_finite() {
            return Err(Error::NonFiniteEvaluation { node: t.as_f64() });
        }
        acc.add(w * v);
    }
    Ok(acc.value())
}

const CONVERGE_START: usize = 64;
const CONVERGE_MAX: usize = 1 << 16;

/// Integrates `f` against the generalized weight with rules of doubling
/// size until two successive values agree to `rel_tol` (absolute floor
/// 1e-14). Returns the value and the signed-node count of the final rule.
///
/// `rel_tol >= 1e-13`; tighter requests are rejected rather than looped on.
pub fn integrate_converged<T: Real, F: Fn(T) -> T>(
    bp: BasisParams<T>,
    f: F,
    rel_tol: T,
) -> Result<(T, usize)> {
    if rel_tol.is_nan() || rel_tol < T::of(1e-13) {
        return Err(Error::invalid(format!(
            "rel_tol must be at least 1e-13, got {rel_tol:e}"
        )));
    }
    let floor = T::of(1e-14);
    let mut prev: Option<T> = None;
    let mut n = CONVERGE_START;
    loop {
        let rule = gen_gegenbauer_rule(bp, n)?;
        let value = integrate(&*rule, &f)?;
        if let Some(p) = prev {
            if (value - p).abs() <= (rel_tol * value.abs()).max(floor) {
                return Ok((value, rule.nodes().len()));
            }
            if n == CONVERGE_MAX {
                return Err(Error::QuadratureDivergence {
                    max_points: rule.nodes().len(),
                    previous: p.as_f64(),
                    last: value.as_f64(),
                });
            }
        }
        prev = Some(value);
        n *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn jp(a: f64, b: f64) -> JacobiParams<f64> {
        JacobiParams::new(a, b).unwrap()
    }

    fn bp(l: f64, m: f64) -> BasisParams<f64> {
        BasisParams::new(l, m).unwrap()
    }

    #[test]
    fn rejects_zero_points() {
        assert!(gauss_jacobi_rule(jp(0.0, 0.0), 0).is_err());
        assert!(gen_gegenbauer_rule(bp(0.5, 0.0), 0).is_err());
    }

    #[test]
    fn legendre_one_point() {
        let r = gauss_jacobi_rule(jp(0.0, 0.0), 1).unwrap();
        assert_eq!(r.nodes(), &[0.0]);
        assert!((r.weights()[0] - 2.0).abs() < 1e-14);
        assert_eq!(r.exactness_degree(), 1);
    }

    #[test]
    fn legendre_two_points() {
        let r = gauss_jacobi_rule(jp(0.0, 0.0), 2).unwrap();
        let x = (1.0f64 / 3.0).sqrt();
        assert!((r.nodes()[0] + x).abs() < 1e-15);
        assert!((r.nodes()[1] - x).abs() < 1e-15);
        assert!((r.weights()[0] - 1.0).abs() < 1e-14);
        assert!((r.weights()[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn legendre_five_points_even_power() {
        let r = gauss_jacobi_rule(jp(0.0, 0.0), 5).unwrap();
        let v = integrate(&*r, |t: f64| t.powi(8)).unwrap();
        assert!((v - 2.0 / 9.0).abs() < 1e-15, "got {v}");
    }

    #[test]
    fn moments_match_legendre_closed_form() {
        // the mass passes through exp(ln_beta), good to a few ulps only
        let m = jacobi_moments(jp(0.0, 0.0), 12);
        for (k, &mk) in m.iter().enumerate() {
            let want = if k % 2 == 0 {
                2.0 / (k as f64 + 1.0)
            } else {
                0.0
            };
            assert!((mk - want).abs() < 1e-14, "k = {k}: {mk} vs {want}");
        }
    }

    #[test]
    fn moments_match_direct_integral_for_linear_weight() {
        // alpha = 1, beta = 0: M_0 = 2, M_1 = -2/3, M_2 = 2/3
        let m = jacobi_moments(jp(1.0, 0.0), 2);
        assert!((m[0] - 2.0).abs() < 1e-14);
        assert!((m[1] + 2.0 / 3.0).abs() < 1e-14);
        assert!((m[2] - 2.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn certification_passes_across_parameters() {
        for &(a, b, n) in &[
            (0.0, 0.0, 8),
            (1.2, -0.3, 20),
            (-0.49, 3.0, 16),
            (2.5, 2.5, 33),
            (-0.5, -0.5, 10),
        ] {
            let r = gauss_jacobi_rule(jp(a, b), n).unwrap();
            let resid = r.certify();
            assert!(resid <= 1e-12, "({a}, {b}, {n}): residual {resid:e}");
        }
    }

    #[test]
    fn nodes_strictly_inside_and_increasing() {
        let r = gauss_jacobi_rule(jp(1.2, -0.3), 40).unwrap();
        for w in r.nodes().windows(2) {
            assert!(w[0] < w[1]);
        }
        assert!(r.nodes()[0] > -1.0 && *r.nodes().last().unwrap() < 1.0);
        assert!(r.weights().iter().all(|&w| w > 0.0));
    }

    #[test]
    fn mass_matches_node_sum() {
        let r = gauss_jacobi_rule(jp(0.7, 1.9), 25).unwrap();
        let total: f64 = r.weights().iter().sum();
        assert!(((total - r.mass()) / r.mass()).abs() < 1e-13);
    }

    #[test]
    fn generalized_rule_shape() {
        let r = gen_gegenbauer_rule(bp(1.5, 0.5), 12).unwrap();
        assert_eq!(r.nodes().len(), 24);
        assert_eq!(r.exactness_degree(), 47);
        for w in r.nodes().windows(2) {
            assert!(w[0] < w[1]);
        }
        for i in 0..12 {
            let lo = r.nodes()[i];
            let hi = r.nodes()[23 - i];
            assert_eq!((-lo).to_bits(), hi.to_bits(), "node symmetry at {i}");
            assert_eq!(
                r.weights()[i].to_bits(),
                r.weights()[23 - i].to_bits(),
                "weight symmetry at {i}"
            );
            assert!(lo != 0.0 && hi != 0.0);
        }
    }

    #[test]
    fn generalized_mass_examples() {
        // v_{0.5, 0} is the Lebesgue weight: mass 2
        let r = gen_gegenbauer_rule(bp(0.5, 0.0), 10).unwrap();
        let total: f64 = r.weights().iter().sum();
        assert!((total - 2.0).abs() < 1e-13, "got {total}");
        // B(1, 2) = 1/2
        let r2 = gen_gegenbauer_rule(bp(1.5, 0.5), 10).unwrap();
        let total2: f64 = r2.weights().iter().sum();
        assert!((total2 - 0.5).abs() < 1e-14, "got {total2}");
    }

    #[test]
    fn generalized_even_moment_is_beta_value() {
        // integral of t^2 v_{1,1} = B(5/2, 3/2)
        let r = gen_gegenbauer_rule(bp(1.0, 1.0), 6).unwrap();
        let v = integrate(&*r, |t: f64| t * t).unwrap();
        let want = ln_beta(2.5f64, 1.5).unwrap().exp();
        assert!(((v - want) / want).abs() < 1e-13, "{v} vs {want}");
    }

    #[test]
    fn generalized_certification() {
        for &(l, m, n) in &[(0.5, 0.0, 16), (-0.4, 2.5, 12), (3.0, 0.25, 20)] {
            let r = gen_gegenbauer_rule(bp(l, m), n).unwrap();
            let resid = r.certify();
            assert!(resid <= 1e-12, "({l}, {m}, {n}): residual {resid:e}");
        }
    }

    #[test]
    fn odd_integrands_vanish() {
        let r = gen_gegenbauer_rule(bp(0.8, 1.3), 14).unwrap();
        let v = integrate(&*r, |t: f64| t * t * t).unwrap();
        assert!(v.abs() < 1e-16, "got {v:e}");
    }

    #[test]
    fn integrate_flags_non_finite_values() {
        let r = gauss_jacobi_rule(jp(0.0, 0.0), 8).unwrap();
        let err = integrate(&*r, |t: f64| if t > 0.9 { f64::NAN } else { 1.0 }).unwrap_err();
        match err {
            Error::NonFiniteEvaluation { node } => assert!(node > 0.9),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn cache_returns_shared_rule() {
        let a = gauss_jacobi_rule(jp(0.31, 0.77), 9).unwrap();
        let b = gauss_jacobi_rule(jp(0.31, 0.77), 9).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
        let c = gen_gegenbauer_rule(bp(0.31, 0.77), 9).unwrap();
        let d = gen_gegenbauer_rule(bp(0.31, 0.77), 9).unwrap();
        assert!(Arc::ptr_eq(&c, &d));
    }

    #[test]
    fn converged_integration_of_smooth_function() {
        // integral of exp(t) dt = e - 1/e under the Lebesgue case
        let (v, pts) = integrate_converged(bp(0.5, 0.0), |t: f64| t.exp(), 1e-13).unwrap();
        let want = 1.0f64.exp() - (-1.0f64).exp();
        assert!(((v - want) / want).abs() < 1e-12, "{v} vs {want}");
        assert!(pts >= 128);
    }

    #[test]
    fn converged_integration_of_abs() {
        // |t| converges only algebraically, so ask for a modest tolerance
        let (v, _) = integrate_converged(bp(0.5, 0.0), |t: f64| t.abs(), 1e-6).unwrap();
        assert!((v - 1.0).abs() < 1e-5, "got {v}");
    }

    #[test]
    fn converged_integration_of_polynomial_stops_early() {
        let b = bp(1.5, 0.5);
        let f = |t: f64| {
            let t2 = t * t;
            1.0 + 3.0 * t2 + t2 * t2 * t2
        };
        let (v, pts) = integrate_converged(b, f, 1e-13).unwrap();
        assert_eq!(pts, 256);
        let direct = integrate(&*gen_gegenbauer_rule(b, 64).unwrap(), f).unwrap();
        assert!(((v - direct) / direct).abs() < 1e-14);
    }

    #[test]
    fn rejects_too_tight_tolerance() {
        let err = integrate_converged(bp(0.5, 0.0), |t: f64| t, 1e-14).unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(_)));
    }

    #[test]
    fn f32_rule_smoke() {
        let p = JacobiParams::<f32>::new(0.0, 0.0).unwrap();
        let r = gauss_jacobi_rule(p, 8).unwrap();
        let v = integrate(&*r, |t: f32| t * t).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-5);
    }
}
