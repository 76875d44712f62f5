//! Parameter types and stable evaluation of the polynomial families.
//!
//! Degrees split by parity: with `s = 2 t^2 - 1`,
//!
//! ```text
//! C_{2m}(t)   = a_{2m}   * P_m^{(lambda - 1/2, mu - 1/2)}(s)
//! C_{2m+1}(t) = a_{2m+1} * t * P_m^{(lambda - 1/2, mu + 1/2)}(s)
//! ```
//!
//! where `a_n` is a ratio of Pochhammer symbols and `P` are Jacobi
//! polynomials. The orthonormal family replaces `a_n` with the constant
//! `atilde_n` that normalizes in `L_2(v)`.

use crate::error::{Error, Result};
use crate::gamma::log_gamma_ratio;
use crate::scalar::Real;

/// Parameters `(lambda, mu)` of the weight
/// `v(t) = |t|^(2 mu) * (1 - t^2)^(lambda - 1/2)` on `[-1, 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BasisParams<T> {
    lambda: T,
    mu: T,
}

impl<T: Real> BasisParams<T> {
    /// Requires `lambda > -1/2` and `mu >= 0`.
    pub fn new(lambda: T, mu: T) -> Result<Self> {
        let ok = lambda.is_finite() && mu.is_finite() && lambda > T::of(-0.5) && mu >= T::zero();
        if !ok {
            return Err(Error::domain(format!(
                "basis parameters require lambda > -1/2 and mu >= 0, got lambda = {lambda}, mu = {mu}"
            )));
        }
        Ok(Self { lambda, mu })
    }

    pub fn lambda(&self) -> T {
        self.lambda
    }

    pub fn mu(&self) -> T {
        self.mu
    }

    /// `sigma = max(lambda, mu)`, the growth exponent of the sup norms.
    pub fn sigma(&self) -> T {
        self.lambda.max(self.mu)
    }

    /// Jacobi parameters governing even degrees: `(lambda - 1/2, mu - 1/2)`.
    pub fn even_jacobi(&self) -> JacobiParams<T> {
        JacobiParams {
            alpha: self.lambda - T::of(0.5),
            beta: self.mu - T::of(0.5),
        }
    }

    /// Jacobi parameters governing odd degrees: `(lambda - 1/2, mu + 1/2)`.
    pub fn odd_jacobi(&self) -> JacobiParams<T> {
        JacobiParams {
            alpha: self.lambda - T::of(0.5),
            beta: self.mu + T::of(0.5),
        }
    }

    /// Errors unless `mu > 0`. The sup-norm growth law and the connection
    /// integral are stated only for strictly positive `mu`.
    pub fn require_positive_mu(&self) -> Result<()> {
        if self.mu > T::zero() {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "this operation requires mu > 0, got mu = {}",
                self.mu
            )))
        }
    }
}

/// Parameters `(alpha, beta)` of the Jacobi weight
/// `w(t) = (1 - t)^alpha * (1 + t)^beta`, both `> -1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JacobiParams<T> {
    alpha: T,
    beta: T,
}

impl<T: Real> JacobiParams<T> {
    /// Requires `alpha > -1` and `beta > -1`.
    pub fn new(alpha: T, beta: T) -> Result<Self> {
        let neg_one = T::of(-1.0);
        let ok = alpha.is_finite() && beta.is_finite() && alpha > neg_one && beta > neg_one;
        if !ok {
            return Err(Error::domain(format!(
                "Jacobi parameters require alpha > -1 and beta > -1, got alpha = {alpha}, beta = {beta}"
            )));
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn beta(&self) -> T {
        self.beta
    }
}

/// Rising factorial `(x)_n = x (x+1) ... (x+n-1)`, `(x)_0 = 1`.
///
/// Exact product evaluation; `x` may be any real, including non-positive
/// values where gamma-ratio shortcuts would be invalid.
pub fn pochhammer<T: Real>(x: T, n: usize) -> T {
    let mut acc = T::one();
    let mut k = T::zero();
    for _ in 0..n {
        acc *= x + k;
        k += T::one();
    }
    acc
}

pub(crate) fn check_t<T: Real>(t: T) -> Result<()> {
    if t.abs() <= T::one() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "argument must satisfy |t| <= 1, got t = {t}"
        )))
    }
}

/// Forward three-term recurrence; invokes `sink(k, P_k)` for `k = 0..=n`.
///
/// The recurrence denominators are strictly positive for `alpha, beta > -1`,
/// so the forward direction is safe for every degree.
fn jacobi_recurrence<T: Real, F: FnMut(usize, T)>(p: JacobiParams<T>, n: usize, t: T, mut sink: F) {
    let (a, b) = (p.alpha, p.beta);
    let two = T::of(2.0);
    let one = T::one();
    let mut prev = T::one();
    sink(0, prev);
    if n == 0 {
        return;
    }
    let mut cur = (a - b) / two + (a + b + two) / two * t;
    sink(1, cur);
    for k in 1..n {
        let kf = T::of(k as f64);
        let c = two * kf + a + b;
        let denom = two * (kf + one) * (kf + a + b + one) * c;
        let c1 = (c + one) * (c + two) * c / denom;
        let c2 = (c + one) * (a * a - b * b) / denom;
        let c3 = two * (kf + a) * (kf + b) * (c + two) / denom;
        let next = (c1 * t + c2) * cur - c3 * prev;
        prev = cur;
        cur = next;
        sink(k + 1, cur);
    }
}

/// Jacobi polynomial `P_n^{(alpha, beta)}(t)` for `|t| <= 1`.
pub fn jacobi_eval<T: Real>(p: JacobiParams<T>, n: usize, t: T) -> Result<T> {
    check_t(t)?;
    Ok(jacobi_value(p, n, t))
}

pub(crate) fn jacobi_value<T: Real>(p: JacobiParams<T>, n: usize, t: T) -> T {
    let mut out = T::zero();
    jacobi_recurrence(p, n, t, |_, v| out = v);
    out
}

/// Jacobi values `P_0 .. P_n` at one point, in a single recurrence pass.
pub fn jacobi_eval_batch<T: Real>(p: JacobiParams<T>, n: usize, t: T) -> Result<Vec<T>> {
    check_t(t)?;
    let mut out = Vec::with_capacity(n + 1);
    jacobi_recurrence(p, n, t, |_, v| out.push(v));
    Ok(out)
}

/// Integral of `P_n^2` against the Jacobi weight over `[-1, 1]`:
///
/// ```text
/// 2^(alpha+beta+1) Gamma(n+alpha+1) Gamma(n+beta+1)
/// -------------------------------------------------
/// (2n+alpha+beta+1) Gamma(n+1) Gamma(n+alpha+beta+1)
/// ```
///
/// At `n = 0` the factor `(alpha+beta+1) Gamma(alpha+beta+1)` is rewritten
/// as `Gamma(alpha+beta+2)`, which stays valid when `alpha+beta+1 <= 0`.
pub fn jacobi_squared_norm<T: Real>(p: JacobiParams<T>, n: usize) -> T {
    let (a, b) = (p.alpha, p.beta);
    let one = T::one();
    let two = T::of(2.0);
    if n == 0 {
        let lg = log_gamma_ratio(&[a + one, b + one], &[a + b + two])
            .expect("arguments positive for alpha, beta > -1");
        return (T::LN_2() * (a + b + one) + lg).exp();
    }
    let nf = T::of(n as f64);
    let lg = log_gamma_ratio(&[nf + a + one, nf + b + one], &[nf + one, nf + a + b + one])
        .expect("arguments positive for alpha, beta > -1 and n >= 1");
    (T::LN_2() * (a + b + one) + lg).exp() / (two * nf + a + b + one)
}

/// Gegenbauer polynomial `C_n^lambda(t)` for `lambda > -1/2`.
///
/// Identically zero for `n >= 1` when `lambda = 0` (the raw family
/// degenerates there; the orthonormal one does not).
pub fn gegenbauer_eval<T: Real>(lambda: T, n: usize, t: T) -> Result<T> {
    if !lambda.is_finite() || lambda <= T::of(-0.5) {
        return Err(Error::domain(format!(
            "Gegenbauer index requires lambda > -1/2, got {lambda}"
        )));
    }
    check_t(t)?;
    Ok(gegenbauer_value(lambda, n, t))
}

/// Unchecked core of [`gegenbauer_eval`]; caller guarantees the domain.
pub(crate) fn gegenbauer_value<T: Real>(lambda: T, n: usize, t: T) -> T {
    let half = T::of(0.5);
    let p = JacobiParams {
        alpha: lambda - half,
        beta: lambda - half,
    };
    // (2 lambda)_n / (lambda + 1/2)_n as a term-wise product; the factored
    // form stays finite where the individual Pochhammer values overflow.
    let mut ratio = T::one();
    for k in 0..n {
        let kf = T::of(k as f64);
        ratio = ratio * (lambda + lambda + kf) / (lambda + half + kf);
    }
    ratio * jacobi_value(p, n, t)
}

/// Leading ratio `a_n = (lambda+mu)_m / (mu+1/2)_m` with `m = ceil(n/2)`.
///
/// Negative when `lambda + mu < 0`, zero for `n >= 1` when `lambda+mu = 0`.
fn gen_coefficient<T: Real>(bp: BasisParams<T>, n: usize) -> T {
    let m = n.div_ceil(2);
    let num = bp.lambda + bp.mu;
    let den = bp.mu + T::of(0.5);
    let mut acc = T::one();
    for k in 0..m {
        let kf = T::of(k as f64);
        acc = acc * (num + kf) / (den + kf);
    }
    acc
}

/// Raw generalized Gegenbauer polynomial `C_n^{(lambda, mu)}(t)`.
pub fn gen_gegenbauer_eval<T: Real>(bp: BasisParams<T>, n: usize, t: T) -> Result<T> {
    check_t(t)?;
    let s = T::of(2.0) * t * t - T::one();
    let coeff = gen_coefficient(bp, n);
    if n % 2 == 0 {
        Ok(coeff * jacobi_value(bp.even_jacobi(), n / 2, s))
    } else {
        Ok(coeff * t * jacobi_value(bp.odd_jacobi(), n / 2, s))
    }
}

/// Normalization constant `atilde_n` of the orthonormal family:
///
/// ```text
/// atilde_{2m}^2   = (2m+lambda+mu)   Gamma(m+1) Gamma(m+lambda+mu)
///                   / (Gamma(m+lambda+1/2) Gamma(m+mu+1/2))
/// atilde_{2m+1}^2 = (2m+lambda+mu+1) Gamma(m+1) Gamma(m+lambda+mu+1)
///                   / (Gamma(m+lambda+1/2) Gamma(m+mu+3/2))
/// ```
///
/// For `n = 0` the product `(lambda+mu) Gamma(lambda+mu)` is rewritten as
/// `Gamma(lambda+mu+1)`, which covers `lambda+mu` in `(-1/2, 0]`.
pub fn orthonormal_coefficient<T: Real>(bp: BasisParams<T>, n: usize) -> T {
    let (l, mu) = (bp.lambda, bp.mu);
    let half = T::of(0.5);
    let one = T::one();
    let two = T::of(2.0);
    let m = T::of((n / 2) as f64);
    let (front, lg) = if n % 2 == 0 {
        if n == 0 {
            let lg = log_gamma_ratio(&[l + mu + one], &[l + half, mu + half]);
            (one, lg)
        } else {
            let lg = log_gamma_ratio(&[m + one, m + l + mu], &[m + l + half, m + mu + half]);
            (two * m + l + mu, lg)
        }
    } else {
        let lg = log_gamma_ratio(
            &[m + one, m + l + mu + one],
            &[m + l + half, m + mu + one + half],
        );
        (two * m + l + mu + one, lg)
    };
    let lg = lg.expect("arguments positive under the parameter invariants");
    front.sqrt() * (half * lg).exp()
}

fn orthonormal_combine<T: Real>(odd: bool, atilde: T, t: T, pval: T) -> T {
    if odd {
        atilde * t * pval
    } else {
        atilde * pval
    }
}

/// Orthonormal polynomial value `Ctilde_n(t)`.
pub fn orthonormal_gg_eval<T: Real>(bp: BasisParams<T>, n: usize, t: T) -> Result<T> {
    check_t(t)?;
    let s = T::of(2.0) * t * t - T::one();
    let a = orthonormal_coefficient(bp, n);
    let pv = if n % 2 == 0 {
        jacobi_value(bp.even_jacobi(), n / 2, s)
    } else {
        jacobi_value(bp.odd_jacobi(), n / 2, s)
    };
    Ok(orthonormal_combine(n % 2 == 1, a, t, pv))
}

/// Orthonormal values `Ctilde_0 .. Ctilde_n` at one point, using one
/// recurrence pass per parity. Agrees bit-for-bit with the single-degree
/// evaluator.
pub fn orthonormal_gg_eval_batch<T: Real>(bp: BasisParams<T>, n: usize, t: T) -> Result<Vec<T>> {
    let basis = OrthonormalBasis::new(bp, n);
    basis.eval_batch(t)
}

/// Precomputed orthonormal evaluator: the constants `atilde_0 .. atilde_d`
/// are computed once so repeated evaluation pays only the recurrences.
#[derive(Clone, Debug)]
pub struct OrthonormalBasis<T> {
    params: BasisParams<T>,
    atilde: Vec<T>,
}

impl<T: Real> OrthonormalBasis<T> {
    /// Prepares degrees `0..=degree`.
    pub fn new(params: BasisParams<T>, degree: usize) -> Self {
        let atilde = (0..=degree)
            .map(|k| orthonormal_coefficient(params, k))
            .collect();
        Self { params, atilde }
    }

    pub fn params(&self) -> BasisParams<T> {
        self.params
    }

    /// Highest prepared degree.
    pub fn degree(&self) -> usize {
        self.atilde.len() - 1
    }

    /// The constant `atilde_n`, `n <= degree()`.
    pub fn coefficient(&self, n: usize) -> T {
        self.atilde[n]
    }

    /// `Ctilde_n(t)` for one prepared degree.
    pub fn eval_degree(&self, n: usize, t: T) -> Result<T> {
        check_t(t)?;
        Ok(self.degree_value(n, t))
    }

    /// Unchecked single-degree value; caller guarantees `|t| <= 1`.
    pub(crate) fn degree_value(&self, n: usize, t: T) -> T {
        let s = T::of(2.0) * t * t - T::one();
        let pv = if n % 2 == 0 {
            jacobi_value(self.params.even_jacobi(), n / 2, s)
        } else {
            jacobi_value(self.params.odd_jacobi(), n / 2, s)
        };
        orthonormal_combine(n % 2 == 1, self.atilde[n], t, pv)
    }

    /// All prepared degrees at one point, reusing `out`.
    pub fn eval_batch_into(&self, t: T, out: &mut Vec<T>) -> Result<()> {
        check_t(t)?;
        let n = self.degree();
        let s = T::of(2.0) * t * t - T::one();
        out.clear();
        out.resize(n + 1, T::zero());
        {
            let slot: &mut Vec<T> = out;
            let mut k = 0usize;
            jacobi_recurrence(self.params.even_jacobi(), n / 2, s, |_, v| {
                slot[k] = orthonormal_combine(false, self.atilde[k], t, v);
                k += 2;
            });
        }
        if n >= 1 {
            let slot: &mut Vec<T> = out;
            let mut k = 1usize;
            jacobi_recurrence(self.params.odd_jacobi(), (n - 1) / 2, s, |_, v| {
                slot[k] = orthonormal_combine(true, self.atilde[k], t, v);
                k += 2;
            });
        }
        Ok(())
    }

    /// All prepared degrees at one point.
    pub fn eval_batch(&self, t: T) -> Result<Vec<T>> {
        let mut out = Vec::new();
        self.eval_batch_into(t, &mut out)?;
        Ok(out)
    }

    /// `sum_k coeffs[k] Ctilde_k(t)` in one recurrence pass per parity.
    ///
    /// Each term is formed exactly as the single-degree evaluator forms it,
    /// so a unit coefficient vector reproduces `degree_value` bit-for-bit
    /// apart from the sign of an exact zero.
    /// Caller guarantees `|t| <= 1` and `coeffs.len() == degree() + 1`.
    pub(crate) fn weighted_value(&self, coeffs: &[T], t: T) -> T {
        debug_assert_eq!(coeffs.len(), self.atilde.len());
        let n = self.degree();
        let s = T::of(2.0) * t * t - T::one();
        let mut even = T::zero();
        {
            let mut k = 0usize;
            jacobi_recurrence(self.params.even_jacobi(), n / 2, s, |_, v| {
                even += coeffs[k] * orthonormal_combine(false, self.atilde[k], t, v);
                k += 2;
            });
        }
        let mut odd = T::zero();
        if n >= 1 {
            let mut k = 1usize;
            jacobi_recurrence(self.params.odd_jacobi(), (n - 1) / 2, s, |_, v| {
                odd += coeffs[k] * orthonormal_combine(true, self.atilde[k], t, v);
                k += 2;
            });
        }
        even + odd
    }
}
