//! Concrete f64 verification harnesses.
//!
//! Each check packages one verifiable statement about the basis into a
//! serializable report with an explicit tolerance and a `pass` flag. The
//! command-line front end and the integration suite both run through
//! these, so a report printed by the binary and a result asserted in a
//! test are the same computation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expansion::{
    forward_transform, parseval_check, sup_norm_estimate, CoefficientVector, TestFunction,
};
use crate::extremum::chebyshev_grid;
use crate::inequalities::{
    conjugate_exponent, connection_check, connection_rhs, converse_reconstruction,
    forward_inequality_scan, hl_functional, hy_functional, trial_seed, unified_functional,
    DecayProfile, FunctionFamily, InequalityReport, TheoremId,
};
use crate::quadrature::QuadratureRule;
use crate::special::{BasisParams, OrthonormalBasis};

/// Lambda values of the standard verification grid.
pub const GRID_LAMBDAS: [f64; 5] = [-0.4, 0.0, 0.5, 1.5, 3.0];
/// Mu values of the standard verification grid.
pub const GRID_MUS: [f64; 5] = [0.0, 0.25, 0.5, 1.0, 2.5];

/// The 25-cell parameter grid the verification suites sweep.
pub fn parameter_grid() -> Vec<BasisParams<f64>> {
    let mut cells = Vec::with_capacity(GRID_LAMBDAS.len() * GRID_MUS.len());
    for &l in &GRID_LAMBDAS {
        for &m in &GRID_MUS {
            cells.push(BasisParams::new(l, m).expect("grid cells are valid parameters"));
        }
    }
    cells
}

/// Worst entrywise deviation of the Gram matrix of `Ctilde_0..Ctilde_n_max`
/// from the identity, plus the per-degree worst deviation for plotting.
#[derive(Clone, Debug, Serialize)]
pub struct GramCheck {
    pub lambda: f64,
    pub mu: f64,
    pub n_max: usize,
    pub degree_deviation: Vec<f64>,
    pub max_deviation: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Integrates every pairwise product against the weight with a rule exact
/// through degree `2 n_max` and compares with the identity matrix.
pub fn orthonormality_check(bp: BasisParams<f64>, n_max: usize, tol: f64) -> Result<GramCheck> {
    let basis = OrthonormalBasis::new(bp, n_max);
    let m = n_max + 1;
    let rule = crate::quadrature::gen_gegenbauer_rule(bp, (2 * n_max + 1).div_ceil(4) + 1)?;
    let mut gram = vec![0.0f64; m * m];
    let mut row = Vec::new();
    for (&t, &w) in rule.nodes().iter().zip(rule.weights()) {
        basis.eval_batch_into(t, &mut row)?;
        for j in 0..m {
            let wj = w * row[j];
            for k in j..m {
                gram[j * m + k] += wj * row[k];
            }
        }
    }
    let mut degree_deviation = vec![0.0f64; m];
    for j in 0..m {
        for k in j..m {
            let want = if j == k { 1.0 } else { 0.0 };
            let dev = (gram[j * m + k] - want).abs();
            degree_deviation[j] = degree_deviation[j].max(dev);
            degree_deviation[k] = degree_deviation[k].max(dev);
        }
    }
    let max_deviation = degree_deviation.iter().copied().fold(0.0f64, f64::max);
    Ok(GramCheck {
        lambda: bp.lambda(),
        mu: bp.mu(),
        n_max,
        degree_deviation,
        max_deviation,
        tol,
        pass: max_deviation < tol,
    })
}

/// Per-trial `L_2(v)`-to-coefficient-norm ratios over seeded random
/// polynomials; exact Parseval equality puts every ratio at 1.
#[derive(Clone, Debug, Serialize)]
pub struct ParsevalCheck {
    pub lambda: f64,
    pub mu: f64,
    pub degree_cap: usize,
    pub trials: usize,
    pub ratios: Vec<f64>,
    pub max_rel_deviation: f64,
    pub tol: f64,
    pub pass: bool,
}

pub fn parseval_harness(
    bp: BasisParams<f64>,
    degree_cap: usize,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<ParsevalCheck> {
    if trials == 0 {
        return Err(Error::invalid("at least one trial is required"));
    }
    let family = FunctionFamily {
        profile: DecayProfile::Flat,
        max_degree: degree_cap,
    };
    let ratios = (0..trials)
        .into_par_iter()
        .map(|i| {
            let cv = family.sample(bp, trial_seed(seed, i));
            let degree = cv.degree();
            let f = TestFunction::OrthonormalPoly(cv);
            let (lhs, rhs) = parseval_check(bp, &f, degree).map_err(|e| e.in_trial(i))?;
            Ok(lhs / rhs)
        })
        .collect::<Result<Vec<f64>>>()?;
    let max_rel = ratios
        .iter()
        .map(|r| (r - 1.0).abs())
        .fold(0.0f64, f64::max);
    Ok(ParsevalCheck {
        lambda: bp.lambda(),
        mu: bp.mu(),
        degree_cap,
        trials,
        ratios,
        max_rel_deviation: max_rel,
        tol,
        pass: max_rel.is_finite() && max_rel < tol,
    })
}

/// Worst grid error of transform-then-evaluate against direct evaluation,
/// scaled by `1 + sup |p|`.
#[derive(Clone, Debug, Serialize)]
pub struct RoundTripCheck {
    pub lambda: f64,
    pub mu: f64,
    pub degree_cap: usize,
    pub trials: usize,
    pub max_scaled_error: f64,
    pub tol: f64,
    pub pass: bool,
}

const ROUNDTRIP_GRID: usize = 512;

pub fn roundtrip_check(
    bp: BasisParams<f64>,
    degree_cap: usize,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<RoundTripCheck> {
    if trials == 0 {
        return Err(Error::invalid("at least one trial is required"));
    }
    let grid: Vec<f64> = (0..ROUNDTRIP_GRID)
        .map(|i| -1.0 + 2.0 * i as f64 / (ROUNDTRIP_GRID - 1) as f64)
        .collect();
    let errs = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, i));
            let degree = rng.gen_range(0..=degree_cap);
            let coeffs: Vec<f64> = (0..=degree).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            let f = TestFunction::monomial(coeffs);
            let cv = forward_transform(bp, &f, degree).map_err(|e| e.in_trial(i))?;
            let direct = f.evaluator();
            let summed = TestFunction::OrthonormalPoly(cv).evaluator();
            let mut err = 0.0f64;
            let mut sup = 0.0f64;
            for &t in &grid {
                let pv = direct(t);
                err = err.max((pv - summed(t)).abs());
                sup = sup.max(pv.abs());
            }
            Ok(err / (1.0 + sup))
        })
        .collect::<Result<Vec<f64>>>()?;
    let worst = errs.iter().copied().fold(0.0f64, f64::max);
    Ok(RoundTripCheck {
        lambda: bp.lambda(),
        mu: bp.mu(),
        degree_cap,
        trials,
        max_scaled_error: worst,
        tol,
        pass: worst.is_finite() && worst < tol,
    })
}

/// Growth diagnostics of `sup |Ctilde_n|` against `n^{max(lambda, mu)}`:
/// the ratio sequence over doubling degrees, its max/min spread, and the
/// slope of its log-log linear fit.
#[derive(Clone, Debug, Serialize)]
pub struct SupnormRatioCheck {
    pub lambda: f64,
    pub mu: f64,
    pub degrees: Vec<usize>,
    pub ratios: Vec<f64>,
    pub spread: f64,
    pub slope: f64,
    pub spread_tol: f64,
    pub slope_tol: f64,
    pub pass: bool,
}

pub fn supnorm_ratio_check(
    bp: BasisParams<f64>,
    n_min: usize,
    n_max: usize,
    spread_tol: f64,
    slope_tol: f64,
) -> Result<SupnormRatioCheck> {
    if n_min < 1 || n_max < n_min {
        return Err(Error::invalid(format!(
            "degree range needs 1 <= n_min <= n_max, got {n_min}..={n_max}"
        )));
    }
    let mut degrees = Vec::new();
    let mut n = n_min;
    while n <= n_max {
        degrees.push(n);
        n *= 2;
    }
    let sigma = bp.sigma();
    let ratios: Vec<f64> = degrees
        .par_iter()
        .map(|&n| sup_norm_estimate(bp, n) / (n as f64).powf(sigma))
        .collect();

    let hi = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let spread = hi / lo;
    let slope = if degrees.len() < 2 {
        0.0
    } else {
        let xs: Vec<f64> = degrees.iter().map(|&n| (n as f64).ln()).collect();
        let ys: Vec<f64> = ratios.iter().map(|&r| r.ln()).collect();
        let xm = xs.iter().sum::<f64>() / xs.len() as f64;
        let ym = ys.iter().sum::<f64>() / ys.len() as f64;
        let mut num = 0.0;
        let mut den = 0.0;
        for (x, y) in xs.iter().zip(&ys) {
            num += (x - xm) * (y - ym);
            den += (x - xm) * (x - xm);
        }
        num / den
    };
    let pass =
        spread.is_finite() && spread < spread_tol && slope.is_finite() && slope.abs() < slope_tol;
    Ok(SupnormRatioCheck {
        lambda: bp.lambda(),
        mu: bp.mu(),
        degrees,
        ratios,
        spread,
        slope,
        spread_tol,
        slope_tol,
        pass,
    })
}

/// Worst relative gap between the unified functional at its endpoints and
/// the two specialized functionals, over random draws that cycle through
/// the parameter grid and a spread of exponents.
#[derive(Clone, Debug, Serialize)]
pub struct EndpointCollapseCheck {
    pub trials: usize,
    pub max_rel_deviation: f64,
    pub tol: f64,
    pub pass: bool,
}

const COLLAPSE_EXPONENTS: [f64; 4] = [1.25, 1.5, 1.75, 2.0];
const COLLAPSE_DEGREE_CAP: usize = 24;

pub fn endpoint_collapse_check(
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<EndpointCollapseCheck> {
    if trials == 0 {
        return Err(Error::invalid("at least one trial is required"));
    }
    let grid = parameter_grid();
    let rel = |a: f64, b: f64| if a == b { 0.0 } else { (a - b).abs() / b.abs() };
    let mut worst = 0.0f64;
    for i in 0..trials {
        let bp = grid[i % grid.len()];
        let p = COLLAPSE_EXPONENTS[(i / grid.len()) % COLLAPSE_EXPONENTS.len()];
        let pc = conjugate_exponent(p)?;
        let family = FunctionFamily {
            profile: DecayProfile::Flat,
            max_degree: COLLAPSE_DEGREE_CAP,
        };
        let cv = family.sample(bp, trial_seed(seed, i));
        let hl = hl_functional(bp, p, &cv)?;
        let hy = hy_functional(bp, p, &cv)?;
        worst = worst.max(rel(unified_functional(bp, p, p, &cv)?, hl));
        worst = worst.max(rel(unified_functional(bp, p, pc, &cv)?, hy));
    }
    Ok(EndpointCollapseCheck {
        trials,
        max_rel_deviation: worst,
        tol,
        pass: worst.is_finite() && worst < tol,
    })
}

/// Stability of a forward scan's empirical constant under a doubled degree
/// cap. The two underlying reports must themselves pass and are embedded
/// in full.
#[derive(Clone, Debug, Serialize)]
pub struct ScanStabilityCheck {
    pub theorem_id: TheoremId,
    pub lambda: f64,
    pub mu: f64,
    pub p: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    pub degree_lo: usize,
    pub degree_hi: usize,
    pub constant_lo: f64,
    pub constant_hi: f64,
    pub growth_ratio: f64,
    pub growth_tol: f64,
    pub report_lo: InequalityReport,
    pub report_hi: InequalityReport,
    pub pass: bool,
}

pub const SCAN_DEGREE_LO: usize = 64;
pub const SCAN_DEGREE_HI: usize = 128;

/// Unified scans take `s` at the midpoint of `[p, p']`.
pub fn scan_midpoint(theorem: TheoremId, p: f64) -> Result<Option<f64>> {
    Ok(match theorem {
        TheoremId::Unified => Some((p + conjugate_exponent(p)?) / 2.0),
        _ => None,
    })
}

/// `s_override` picks the unified scan's intermediate exponent; the
/// default is the midpoint of `[p, p']`. The two specialized scans take
/// no `s`.
pub fn scan_stability_check(
    bp: BasisParams<f64>,
    theorem: TheoremId,
    p: f64,
    s_override: Option<f64>,
    trials: usize,
    seed: u64,
    growth_tol: f64,
) -> Result<ScanStabilityCheck> {
    if s_override.is_some() && theorem != TheoremId::Unified {
        return Err(Error::invalid(
            "the intermediate exponent s applies only to the unified scan",
        ));
    }
    let s = match s_override {
        Some(s) => Some(s),
        None => scan_midpoint(theorem, p)?,
    };
    let scan = |cap: usize| {
        let family = FunctionFamily {
            profile: DecayProfile::Flat,
            max_degree: cap,
        };
        forward_inequality_scan(theorem, bp, p, s, family, trials, seed)
    };
    let lo = scan(SCAN_DEGREE_LO)?;
    let hi = scan(SCAN_DEGREE_HI)?;
    let growth = hi.empirical_constant / lo.empirical_constant;
    let pass = growth.is_finite() && growth < growth_tol && lo.pass && hi.pass;
    Ok(ScanStabilityCheck {
        theorem_id: theorem,
        lambda: bp.lambda(),
        mu: bp.mu(),
        p,
        s,
        degree_lo: SCAN_DEGREE_LO,
        degree_hi: SCAN_DEGREE_HI,
        constant_lo: lo.empirical_constant,
        constant_hi: hi.empirical_constant,
        growth_ratio: growth,
        growth_tol,
        report_lo: lo,
        report_hi: hi,
        pass,
    })
}

/// Converse reconstruction for one random finite sequence: partial sums
/// stabilize, coefficients are recovered, and the norm stays under the
/// functional bound with a finite ratio.
#[derive(Clone, Debug, Serialize)]
pub struct ConverseCheck {
    pub theorem_id: TheoremId,
    pub lambda: f64,
    pub mu: f64,
    pub q: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    pub phi_len: usize,
    pub checkpoints: Vec<usize>,
    pub limit_check: f64,
    pub coeff_recovery_error: f64,
    pub norm_bound_ratio: f64,
    pub limit_tol: f64,
    pub recovery_tol: f64,
    pub pass: bool,
}

const ENDPOINT_RATIO_TOL: f64 = 1e-8;

/// Unified converse runs take `r` at the midpoint of `[q', q]`.
pub fn converse_midpoint(theorem: TheoremId, q: f64) -> Result<Option<f64>> {
    Ok(match theorem {
        TheoremId::Unified => Some((conjugate_exponent(q)? + q) / 2.0),
        _ => None,
    })
}

/// `r_override` picks the unified converse's intermediate exponent; the
/// default is the midpoint of `[q', q]`.
#[allow(clippy::too_many_arguments)]
pub fn converse_check(
    bp: BasisParams<f64>,
    theorem: TheoremId,
    q: f64,
    r_override: Option<f64>,
    phi_len: usize,
    seed: u64,
    limit_tol: f64,
    recovery_tol: f64,
) -> Result<ConverseCheck> {
    if phi_len == 0 {
        return Err(Error::invalid("the sequence needs at least one entry"));
    }
    if r_override.is_some() && theorem != TheoremId::Unified {
        return Err(Error::invalid(
            "the intermediate exponent r applies only to the unified converse",
        ));
    }
    let r = match r_override {
        Some(r) => Some(r),
        None => converse_midpoint(theorem, q)?,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs: Vec<f64> = (0..phi_len).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    let phi = CoefficientVector::new(bp, coeffs)?;
    // checkpoints sit at and past the sequence length, where the partial
    // sums are already constant
    let checkpoints = vec![
        phi_len,
        phi_len + (phi_len / 4).max(1),
        phi_len + (phi_len / 2).max(2),
    ];
    let rep = converse_reconstruction(theorem, bp, q, r, &phi, &checkpoints)?;
    let endpoint_ok = q != 2.0 || (rep.norm_bound_ratio - 1.0).abs() <= ENDPOINT_RATIO_TOL;
    let pass = rep.limit_check <= limit_tol
        && rep.coeff_recovery_error < recovery_tol
        && rep.norm_bound_ratio.is_finite()
        && endpoint_ok;
    Ok(ConverseCheck {
        theorem_id: theorem,
        lambda: bp.lambda(),
        mu: bp.mu(),
        q,
        r,
        phi_len,
        checkpoints,
        limit_check: rep.limit_check,
        coeff_recovery_error: rep.coeff_recovery_error,
        norm_bound_ratio: rep.norm_bound_ratio,
        limit_tol,
        recovery_tol,
        pass,
    })
}

/// Connection-integral agreement through degree `n_max`, plus the degree-1
/// closed form `(lambda + mu) / (mu + 1/2)`. `errors[n]` is the worst grid
/// discrepancy at degree `n`.
#[derive(Clone, Debug, Serialize)]
pub struct ConnectionCheckReport {
    pub lambda: f64,
    pub mu: f64,
    pub n_max: usize,
    pub grid_points: usize,
    pub errors: Vec<f64>,
    pub max_error: f64,
    pub coeff_deviation: f64,
    pub error_tol: f64,
    pub coeff_tol: f64,
    pub pass: bool,
}

pub fn connection_harness(
    bp: BasisParams<f64>,
    n_max: usize,
    grid_points: usize,
    error_tol: f64,
    coeff_tol: f64,
) -> Result<ConnectionCheckReport> {
    if grid_points < 2 {
        return Err(Error::invalid(
            "the evaluation grid needs at least 2 points",
        ));
    }
    let grid = chebyshev_grid(-1.0f64, 1.0, grid_points);
    let errors = (0..=n_max)
        .into_par_iter()
        .map(|n| connection_check(bp, n, &grid))
        .collect::<Result<Vec<f64>>>()?;
    let max_error = errors.iter().copied().fold(0.0f64, f64::max);
    let coeff = connection_rhs(bp, 1, 1.0)?;
    let want = (bp.lambda() + bp.mu()) / (bp.mu() + 0.5);
    let coeff_deviation = (coeff - want).abs();
    Ok(ConnectionCheckReport {
        lambda: bp.lambda(),
        mu: bp.mu(),
        n_max,
        grid_points,
        errors,
        max_error,
        coeff_deviation,
        error_tol,
        coeff_tol,
        pass: max_error < error_tol && coeff_deviation < coeff_tol,
    })
}
