//! Weighted coefficient functionals and the verification procedures for
//! the coefficient inequalities (both directions) plus the connection
//! integral.
//!
//! With `sigma = max(lambda, mu)` and conjugate exponents `1/p + 1/p' = 1`,
//! the three functional patterns on a coefficient sequence `c` are
//!
//! ```text
//! HL:      ( sum ((n+1)^{(1/p'-1/p)(sigma+1)} |c_n|)^p  )^{1/p}
//! HY:      ( sum ((n+1)^{(1/p'-1/p) sigma    } |c_n|)^p' )^{1/p'}
//! unified: ( sum ((n+1)^{(1/s-1/p) sigma + (1/p'-1/s)(sigma+1)} |c_n|)^s )^{1/s}
//! ```
//!
//! for `p <= s <= p'`. At `s = p` the unified pattern IS the first, at
//! `s = p'` the second; the collapse is arithmetic identity, not an
//! approximation, and the code keeps it exact in floating point.
//!
//! The empirical constants reported by the scans estimate the unspecified
//! constants of the inequalities; there is no ground truth to compare
//! against, only stability under growing degree caps.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expansion::{
    forward_transform, lp_norm, lp_norm_with_tol, CoefficientVector, TestFunction,
};
use crate::gamma::ln_beta;
use crate::quadrature::{gauss_jacobi_rule, integrate};
use crate::scalar::Real;
use crate::special::{check_t, gegenbauer_value, gen_gegenbauer_eval, BasisParams, JacobiParams};

// Parseval endpoint: every p = 2 (or q = 2) ratio must sit this close to 1.
const ENDPOINT_RATIO_TOL: f64 = 1e-8;

// Norm tolerance for scan trials with fractional p. |f|^p is algebraically
// singular at every root of f, and a draw at the high degree cap has over a
// hundred of them, so converged quadrature slows to a crawl past five
// digits; the ratios only feed growth checks with tolerance near 2. The
// endpoint p = 2 keeps the default path: |f|^2 is a polynomial, integrates
// exactly, and the endpoint ratio check needs that accuracy.
const SCAN_NORM_REL_TOL: f64 = 1e-5;

/// `p'` with `1/p + 1/p' = 1`, for `p` strictly between 1 and infinity.
pub fn conjugate_exponent<T: Real>(p: T) -> Result<T> {
    if !p.is_finite() || p <= T::one() {
        return Err(Error::domain(format!(
            "conjugate exponent needs p in (1, inf), got p = {p}"
        )));
    }
    Ok(p / (p - T::one()))
}

/// A power-weighted sequence norm: the outer exponent and the power of
/// `(n+1)` applied to each entry.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeqNormSpec<T> {
    outer_exponent: T,
    weight_power: T,
}

impl<T: Real> SeqNormSpec<T> {
    /// Requires `outer_exponent >= 1`.
    pub fn new(outer_exponent: T, weight_power: T) -> Result<Self> {
        if !outer_exponent.is_finite() || outer_exponent < T::one() || !weight_power.is_finite() {
            return Err(Error::invalid(format!(
                "sequence norm needs a finite outer exponent >= 1 and finite weight power, \
                 got outer = {outer_exponent}, weight = {weight_power}"
            )));
        }
        Ok(Self {
            outer_exponent,
            weight_power,
        })
    }

    pub fn outer_exponent(&self) -> T {
        self.outer_exponent
    }

    pub fn weight_power(&self) -> T {
        self.weight_power
    }
}

/// `( sum_n ((n+1)^weight |c_n|)^outer )^{1/outer}`.
pub fn seq_functional<T: Real>(spec: SeqNormSpec<T>, cv: &CoefficientVector<T>) -> T {
    let outer = spec.outer_exponent;
    let mut acc = T::zero();
    for (n, &c) in cv.coeffs().iter().enumerate() {
        let w = T::of(n as f64 + 1.0).powf(spec.weight_power);
        acc += (w * c.abs()).powf(outer);
    }
    acc.powf(outer.recip())
}

/// Theorem family selector for the scan and reconstruction drivers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TheoremId {
    #[serde(rename = "HL")]
    Hl,
    #[serde(rename = "HY")]
    Hy,
    #[serde(rename = "UNIFIED")]
    Unified,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Direction {
    #[serde(rename = "forward")]
    Forward,
    #[serde(rename = "converse")]
    Converse,
}

fn check_forward_p<T: Real>(p: T) -> Result<()> {
    if p > T::one() && p <= T::of(2.0) {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "forward inequalities need p in (1, 2], got p = {p}"
        )))
    }
}

/// Functional pattern of the forward inequality for one theorem.
/// `s` is consumed only by the unified pattern and must lie in `[p, p']`.
pub fn forward_spec<T: Real>(
    theorem: TheoremId,
    bp: BasisParams<T>,
    p: T,
    s: Option<T>,
) -> Result<SeqNormSpec<T>> {
    check_forward_p(p)?;
    let sigma = bp.sigma();
    let one = T::one();
    let pc = conjugate_exponent(p)?;
    let gap = pc.recip() - p.recip();
    match theorem {
        TheoremId::Hl => SeqNormSpec::new(p, gap * (sigma + one)),
        TheoremId::Hy => SeqNormSpec::new(pc, gap * sigma),
        TheoremId::Unified => {
            let s = s.ok_or_else(|| {
                Error::invalid("the unified inequality needs the intermediate exponent s")
            })?;
            if !(s >= p && s <= pc) {
                return Err(Error::domain(format!(
                    "the unified inequality needs p <= s <= p', got p = {p}, s = {s}"
                )));
            }
            let w = (s.recip() - p.recip()) * sigma + (pc.recip() - s.recip()) * (sigma + one);
            SeqNormSpec::new(s, w)
        }
    }
}

/// Functional pattern of the converse bound for one theorem, `q >= 2`.
/// `r` is consumed only by the unified pattern and must lie in `[q', q]`.
pub fn converse_spec<T: Real>(
    theorem: TheoremId,
    bp: BasisParams<T>,
    q: T,
    r: Option<T>,
) -> Result<SeqNormSpec<T>> {
    if !q.is_finite() || q < T::of(2.0) {
        return Err(Error::domain(format!(
            "converse bounds need q in [2, inf), got q = {q}"
        )));
    }
    let sigma = bp.sigma();
    let one = T::one();
    let qc = conjugate_exponent(q)?;
    let gap = qc.recip() - q.recip();
    match theorem {
        TheoremId::Hl => SeqNormSpec::new(q, gap * (sigma + one)),
        TheoremId::Hy => SeqNormSpec::new(qc, gap * sigma),
        TheoremId::Unified => {
            let r = r.ok_or_else(|| {
                Error::invalid("the unified converse needs the intermediate exponent r")
            })?;
            if !(r >= qc && r <= q) {
                return Err(Error::domain(format!(
                    "the unified converse needs q' <= r <= q, got q = {q}, r = {r}"
                )));
            }
            let rc = conjugate_exponent(r)?;
            let w = (qc.recip() - r.recip()) * sigma + (r.recip() - q.recip()) * (sigma + one);
            SeqNormSpec::new(rc, w)
        }
    }
}

/// The Hardy-Littlewood-type weighted functional, `1 < p <= 2`.
pub fn hl_functional<T: Real>(bp: BasisParams<T>, p: T, cv: &CoefficientVector<T>) -> Result<T> {
    Ok(seq_functional(
        forward_spec(TheoremId::Hl, bp, p, None)?,
        cv,
    ))
}

/// The Hausdorff-Young-type weighted functional, `1 < p <= 2`.
pub fn hy_functional<T: Real>(bp: BasisParams<T>, p: T, cv: &CoefficientVector<T>) -> Result<T> {
    Ok(seq_functional(
        forward_spec(TheoremId::Hy, bp, p, None)?,
        cv,
    ))
}

/// The unified weighted functional, `1 < p <= 2`, `p <= s <= p'`.
pub fn unified_functional<T: Real>(
    bp: BasisParams<T>,
    p: T,
    s: T,
    cv: &CoefficientVector<T>,
) -> Result<T> {
    Ok(seq_functional(
        forward_spec(TheoremId::Unified, bp, p, Some(s))?,
        cv,
    ))
}

/// Coefficient decay shape of the random test-function families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecayProfile {
    Flat,
    InverseLinear,
    InverseSquare,
    SingleMode,
    /// Support on degrees 0, 1, 2, 4, 8, ...; exploratory profile.
    Lacunary,
}

/// Seeded generator of random coefficient polynomials: a decay profile and
/// a degree cap. The drawn degree is uniform on `0..=max_degree`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct FunctionFamily {
    pub profile: DecayProfile,
    pub max_degree: usize,
}

impl FunctionFamily {
    /// Deterministic draw: the same `(family, seed)` always yields the same
    /// coefficient vector.
    pub fn sample<T: Real>(&self, bp: BasisParams<T>, seed: u64) -> CoefficientVector<T> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let degree = rng.gen_range(0..=self.max_degree);
        let mut c = vec![T::zero(); degree + 1];
        match self.profile {
            DecayProfile::Flat => {
                for v in c.iter_mut() {
                    *v = T::of(rng.gen_range(-1.0..=1.0));
                }
            }
            DecayProfile::InverseLinear => {
                for (n, v) in c.iter_mut().enumerate() {
                    *v = T::of(rng.gen_range(-1.0..=1.0) / (n as f64 + 1.0));
                }
            }
            DecayProfile::InverseSquare => {
                for (n, v) in c.iter_mut().enumerate() {
                    let d = (n as f64 + 1.0) * (n as f64 + 1.0);
                    *v = T::of(rng.gen_range(-1.0..=1.0) / d);
                }
            }
            DecayProfile::SingleMode => {
                c[degree] = T::one();
            }
            DecayProfile::Lacunary => {
                c[0] = T::of(rng.gen_range(-1.0..=1.0));
                let mut k = 1usize;
                while k <= degree {
                    c[k] = T::of(rng.gen_range(-1.0..=1.0));
                    k *= 2;
                }
            }
        }
        CoefficientVector::new(bp, c).expect("sampled coefficients are finite")
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-trial sub-seed; a fixed splitting rule keeps concurrent trials
/// deterministic regardless of scheduling.
pub(crate) fn trial_seed(seed: u64, index: usize) -> u64 {
    splitmix64(seed ^ (index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct WeightParams {
    pub lambda: f64,
    pub mu: f64,
}

/// One scan draw: the sub-seed it used and both sides of the inequality.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct TrialRecord {
    pub seed: u64,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ExponentPair {
    pub p: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
}

/// Scan outcome: per-trial records plus the empirical constant (the max
/// ratio). `pass` demands finite ratios, and the Parseval `1 +- 1e-8`
/// equality when the exponent sits at 2.
#[derive(Clone, Debug, Serialize)]
pub struct InequalityReport {
    pub theorem_id: TheoremId,
    pub direction: Direction,
    pub params: WeightParams,
    pub exponents: ExponentPair,
    pub trials: Vec<TrialRecord>,
    pub empirical_constant: f64,
    pub pass: bool,
}

impl InequalityReport {
    /// Per-trial records as "seed,lhs,rhs,ratio" CSV.
    pub fn trials_csv(&self) -> String {
        use crate::io::format_float;
        let mut out = String::from("seed,lhs,rhs,ratio\n");
        for t in &self.trials {
            out.push_str(&format!(
                "{},{},{},{}\n",
                t.seed,
                format_float(t.lhs),
                format_float(t.rhs),
                format_float(t.ratio)
            ));
        }
        out
    }
}

/// Draws `trials` random polynomials from `family` and reports the ratio
/// `functional(coefficients) / L_p(v) norm` for each.
///
/// Fractional-p norms are resolved to about five digits, which is far
/// inside the growth tolerances the ratios feed; the endpoint p = 2
/// integrates exactly.
pub fn forward_inequality_scan<T: Real>(
    theorem: TheoremId,
    bp: BasisParams<T>,
    p: T,
    s: Option<T>,
    family: FunctionFamily,
    trials: usize,
    seed: u64,
) -> Result<InequalityReport> {
    if trials == 0 {
        return Err(Error::invalid("the scan needs at least one trial"));
    }
    let spec = forward_spec(theorem, bp, p, s)?;
    let records = (0..trials)
        .into_par_iter()
        .map(|i| {
            let sub = trial_seed(seed, i);
            let cv = family.sample(bp, sub);
            let lhs = seq_functional(spec, &cv);
            let f = TestFunction::OrthonormalPoly(cv);
            let rhs = if p == T::of(2.0) {
                lp_norm(bp, &f, p)
            } else {
                lp_norm_with_tol(bp, &f, p, T::of(SCAN_NORM_REL_TOL))
            }
            .map_err(|e| e.in_trial(i))?;
            let ratio = lhs / rhs;
            Ok(TrialRecord {
                seed: sub,
                lhs: lhs.as_f64(),
                rhs: rhs.as_f64(),
                ratio: ratio.as_f64(),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut empirical = f64::NEG_INFINITY;
    for r in &records {
        if r.ratio.is_nan() {
            empirical = f64::NAN;
            break;
        }
        empirical = empirical.max(r.ratio);
    }
    let all_finite = records.iter().all(|r| r.ratio.is_finite());
    let at_endpoint = p.as_f64() == 2.0;
    let endpoint_ok = !at_endpoint
        || records
            .iter()
            .all(|r| (r.ratio - 1.0).abs() <= ENDPOINT_RATIO_TOL);
    Ok(InequalityReport {
        theorem_id: theorem,
        direction: Direction::Forward,
        params: WeightParams {
            lambda: bp.lambda().as_f64(),
            mu: bp.mu().as_f64(),
        },
        exponents: ExponentPair {
            p: p.as_f64(),
            s: s.map(Real::as_f64),
        },
        trials: records,
        empirical_constant: empirical,
        pass: all_finite && endpoint_ok,
    })
}

/// Outcome of a converse reconstruction run.
///
/// `limit_check` is the largest `L_q(v)` distance between partial sums at
/// consecutive checkpoints past the end of `phi` (eventually-constant
/// sequence, so the honest expectation is 0). `coeff_recovery_error` is
/// the worst recovered-coefficient deviation, and `norm_bound_ratio`
/// divides the limit's `L_q(v)` norm by the theorem's weighted functional
/// of `phi`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ConverseReport {
    pub limit_check: f64,
    pub coeff_recovery_error: f64,
    pub norm_bound_ratio: f64,
}

/// Builds the partial sums `Phi_N` of a finite coefficient sequence at
/// each checkpoint, checks they stabilize in `L_q(v)`, recovers the
/// coefficients from the limit, and reports the norm-to-functional ratio.
pub fn converse_reconstruction<T: Real>(
    theorem: TheoremId,
    bp: BasisParams<T>,
    q: T,
    r: Option<T>,
    phi: &CoefficientVector<T>,
    checkpoints: &[usize],
) -> Result<ConverseReport> {
    let spec = converse_spec(theorem, bp, q, r)?;
    if checkpoints.is_empty() {
        return Err(Error::invalid("at least one checkpoint is required"));
    }
    if checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("checkpoints must be strictly increasing"));
    }

    let truncate = |cap: usize| -> CoefficientVector<T> {
        let upto = (cap + 1).min(phi.coeffs().len());
        CoefficientVector::new(bp, phi.coeffs()[..upto].to_vec())
            .expect("truncation of a valid vector stays valid")
    };

    // stabilization past the end of the sequence
    let mut limit_check = T::zero();
    for pair in checkpoints.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        if a < phi.coeffs().len() {
            continue;
        }
        let pa = truncate(a);
        let pb = truncate(b);
        let len = pa.coeffs().len().max(pb.coeffs().len());
        let mut diff = vec![T::zero(); len];
        for (i, d) in diff.iter_mut().enumerate() {
            let ca = pa.coeffs().get(i).copied().unwrap_or_else(T::zero);
            let cb = pb.coeffs().get(i).copied().unwrap_or_else(T::zero);
            *d = ca - cb;
        }
        let diff_fn = TestFunction::OrthonormalPoly(CoefficientVector::new(bp, diff)?);
        let dist = lp_norm(bp, &diff_fn, q)?;
        if dist > limit_check {
            limit_check = dist;
        }
    }

    let final_sum = truncate(*checkpoints.last().expect("nonempty"));
    let final_fn = TestFunction::OrthonormalPoly(final_sum);

    let recovered = forward_transform(bp, &final_fn, phi.degree())?;
    let mut recovery = T::zero();
    for (got, want) in recovered.coeffs().iter().zip(phi.coeffs()) {
        let dev = (*got - *want).abs();
        if dev > recovery {
            recovery = dev;
        }
    }

    let norm = lp_norm(bp, &final_fn, q)?;
    let functional = seq_functional(spec, phi);
    Ok(ConverseReport {
        limit_check: limit_check.as_f64(),
        coeff_recovery_error: recovery.as_f64(),
        norm_bound_ratio: (norm / functional).as_f64(),
    })
}

/// Right-hand side of the connection identity at one point: the weighted
/// integral of the plain Gegenbauer polynomial of index `lambda + mu`,
/// normalized by `1 / B(1/2, mu)`. Requires `mu > 0`.
pub fn connection_rhs<T: Real>(bp: BasisParams<T>, n: usize, t: T) -> Result<T> {
    bp.require_positive_mu()?;
    check_t(t)?;
    let one = T::one();
    let index = bp.lambda() + bp.mu();
    // x-integral against (1-x^2)^{mu-1}; the (1+x) factor rides along in
    // the integrand, degree n+1, well inside the rule's exactness
    let jp = JacobiParams::new(bp.mu() - one, bp.mu() - one)?;
    let rule = gauss_jacobi_rule(jp, n / 2 + 2)?;
    let integral = integrate(&*rule, |x| gegenbauer_value(index, n, t * x) * (one + x))?;
    let c_mu_inv = ln_beta(T::of(0.5), bp.mu())?.exp();
    Ok(integral / c_mu_inv)
}

/// Max absolute discrepancy of the connection identity over a grid of
/// evaluation points. Requires `mu > 0`.
pub fn connection_check<T: Real>(bp: BasisParams<T>, n: usize, t_grid: &[T]) -> Result<T> {
    bp.require_positive_mu()?;
    let mut worst = T::zero();
    for &t in t_grid {
        let lhs = gen_gegenbauer_eval(bp, n, t)?;
        let rhs = connection_rhs(bp, n, t)?;
        let dev = (lhs - rhs).abs();
        if dev > worst {
            worst = dev;
        }
    }
    Ok(worst)
}
