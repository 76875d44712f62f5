use std::fmt::Write as _;

use serde::Serialize;

use ggexp::expansion::{forward_transform, CoefficientVector, TestFunction};
use ggexp::inequalities::{DecayProfile, FunctionFamily};
use ggexp::io::{format_float, plot_csv, to_json_string};
use ggexp::quadrature::{gen_gegenbauer_rule, QuadratureRule};
use ggexp::special::{gen_gegenbauer_eval, orthonormal_gg_eval, BasisParams};
use ggexp::verify;
use ggexp::{Error, Result};

use crate::args::{
    Cli, Command, ConnectionArgs, ConverseArgs, EvalArgs, OrthonormalityArgs, OutputFormat,
    ParamArgs, ParsevalArgs, QuadArgs, ReportArgs, ScanArgs, SupnormArgs, TransformArgs,
    VerifyCommand,
};
use crate::output::{emit, write_atomic};
use crate::report;

/// 0 = pass, 1 = a verification reported `pass = false`, 2 = usage or
/// domain error, 3 = numerical failure.
pub fn run(cli: Cli) -> i32 {
    match execute(cli) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(err: &Error) -> i32 {
    match err.root_cause() {
        Error::Domain(_) | Error::InvalidArgument(_) => 2,
        _ => 3,
    }
}

fn execute(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Eval(a) => eval_cmd(a),
        Command::Quad(a) => quad_cmd(a),
        Command::Transform(a) => transform_cmd(a),
        Command::Verify(v) => verify_cmd(v),
    }
}

fn params(p: &ParamArgs) -> Result<BasisParams<f64>> {
    BasisParams::new(p.lambda, p.mu)
}

fn eval_cmd(a: EvalArgs) -> Result<bool> {
    let bp = params(&a.params)?;
    let value = if a.orthonormal {
        orthonormal_gg_eval(bp, a.n, a.t)?
    } else {
        gen_gegenbauer_eval(bp, a.n, a.t)?
    };
    println!("{}", format_float(value));
    Ok(true)
}

fn quad_cmd(a: QuadArgs) -> Result<bool> {
    let bp = params(&a.params)?;
    let rule = gen_gegenbauer_rule(bp, a.points)?;
    let mut text = String::from("node,weight\n");
    for (&t, &w) in rule.nodes().iter().zip(rule.weights()) {
        let _ = writeln!(text, "{},{}", format_float(t), format_float(w));
    }
    emit(a.out.as_deref(), &text)?;
    Ok(true)
}

#[derive(Serialize)]
struct TransformDocument {
    schema: u32,
    lambda: f64,
    mu: f64,
    basis: &'static str,
    coefficients: Vec<f64>,
}

fn transform_cmd(a: TransformArgs) -> Result<bool> {
    let bp = params(&a.params)?;
    let f = parse_poly_input(bp, &a.input)?;
    let cv = forward_transform(bp, &f, a.degree)?;
    let text = match a.format {
        OutputFormat::Csv => {
            let mut text = String::from("n,coefficient\n");
            for (n, &c) in cv.coeffs().iter().enumerate() {
                let _ = writeln!(text, "{n},{}", format_float(c));
            }
            text
        }
        OutputFormat::Json => {
            let doc = TransformDocument {
                schema: 1,
                lambda: bp.lambda(),
                mu: bp.mu(),
                basis: "orthonormal",
                coefficients: cv.coeffs().to_vec(),
            };
            let mut text = to_json_string(&doc)?;
            text.push('\n');
            text
        }
    };
    emit(a.out.as_deref(), &text)?;
    Ok(true)
}

/// Either a built-in family draw `family:PROFILE:CAP:SEED` or a path to a
/// coefficient file with a `# basis: monomial|orthonormal` header.
fn parse_poly_input(bp: BasisParams<f64>, spec: &str) -> Result<TestFunction<f64>> {
    if let Some(rest) = spec.strip_prefix("family:") {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::invalid(
                "family input takes the form family:PROFILE:CAP:SEED",
            ));
        }
        let profile = match parts[0] {
            "flat" => DecayProfile::Flat,
            "inverse-linear" => DecayProfile::InverseLinear,
            "inverse-square" => DecayProfile::InverseSquare,
            "single-mode" => DecayProfile::SingleMode,
            "lacunary" => DecayProfile::Lacunary,
            other => {
                return Err(Error::invalid(format!(
                    "unknown profile {other:?}; expected flat, inverse-linear, \
                     inverse-square, single-mode, or lacunary"
                )))
            }
        };
        let max_degree: usize = parts[1]
            .parse()
            .map_err(|e| Error::invalid(format!("bad degree cap {:?}: {e}", parts[1])))?;
        let seed: u64 = parts[2]
            .parse()
            .map_err(|e| Error::invalid(format!("bad seed {:?}: {e}", parts[2])))?;
        let family = FunctionFamily {
            profile,
            max_degree,
        };
        return Ok(TestFunction::OrthonormalPoly(family.sample(bp, seed)));
    }
    let text = std::fs::read_to_string(spec)
        .map_err(|e| Error::invalid(format!("cannot read {spec}: {e}")))?;
    parse_coefficient_file(bp, &text)
}

fn parse_coefficient_file(bp: BasisParams<f64>, text: &str) -> Result<TestFunction<f64>> {
    let mut basis: Option<String> = None;
    let mut coeffs: Vec<f64> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(value) = comment.trim().strip_prefix("basis:") {
                basis = Some(value.trim().to_string());
            }
            continue;
        }
        let v: f64 = line.parse().map_err(|e| {
            Error::invalid(format!("line {}: bad coefficient {line:?}: {e}", idx + 1))
        })?;
        coeffs.push(v);
    }
    match basis.as_deref() {
        Some("monomial") => Ok(TestFunction::monomial(coeffs)),
        Some("orthonormal") => Ok(TestFunction::OrthonormalPoly(CoefficientVector::new(
            bp, coeffs,
        )?)),
        Some(other) => Err(Error::invalid(format!(
            "unknown basis {other:?}; expected monomial or orthonormal"
        ))),
        None => Err(Error::invalid(
            "missing '# basis: monomial|orthonormal' header line",
        )),
    }
}

fn finish<C: Serialize, R: Serialize>(
    command: &str,
    config: &C,
    result: &R,
    pass: bool,
    dest: &ReportArgs,
    plot_header: &str,
    plot_points: &[(f64, f64)],
) -> Result<bool> {
    let rendered = report::render(command, config, result)?;
    emit(dest.out.as_deref(), &rendered.text)?;
    if let Some(path) = &dest.plot {
        write_atomic(path, &plot_csv(plot_header, plot_points))?;
    }
    Ok(pass)
}

fn verify_cmd(cmd: VerifyCommand) -> Result<bool> {
    match cmd {
        VerifyCommand::Orthonormality(a) => orthonormality_cmd(a),
        VerifyCommand::Supnorm(a) => supnorm_cmd(a),
        VerifyCommand::Parseval(a) => parseval_cmd(a),
        VerifyCommand::HardyLittlewood(a) => scan_cmd(
            "verify hardy-littlewood",
            ggexp::inequalities::TheoremId::Hl,
            a,
        ),
        VerifyCommand::HausdorffYoung(a) => scan_cmd(
            "verify hausdorff-young",
            ggexp::inequalities::TheoremId::Hy,
            a,
        ),
        VerifyCommand::Unified(a) => {
            scan_cmd("verify unified", ggexp::inequalities::TheoremId::Unified, a)
        }
        VerifyCommand::Connection(a) => connection_cmd(a),
        VerifyCommand::Converse(a) => converse_cmd(a),
    }
}

fn orthonormality_cmd(a: OrthonormalityArgs) -> Result<bool> {
    let bp = params(&a.params)?;
    let rep = verify::orthonormality_check(bp, a.nmax, a.tol)?;
    let points: Vec<(f64, f64)> = rep
        .degree_deviation
        .iter()
        .enumerate()
        .map(|(n, &d)| (n as f64, d))
        .collect();
    finish(
        "verify orthonormality",
        &a,
        &rep,
        rep.pass,
        &a.report,
        "n,deviation",
        &points,
    )
}

fn supnorm_cmd(a: SupnormArgs) -> Result<bool> {
    let bp = params(&a.params)?;
    let rep = verify::supnorm_ratio_check(bp, a.nmin, a.nmax, a.spread_tol, a.slope_tol)?;
    let points: Vec<(f64, f64)> = rep
        .degrees
        .iter()
        .zip(&rep.ratios)
        .map(|(&n, &r)| (n as f64, r))
        .collect();
    finish(
        "verify supnorm",
        &a,
        &rep,
        rep.pass,
        &a.report,
        "n,ratio",
        &points,
    )
}

fn parseval_cmd(a: ParsevalArgs) -> Result<bool> {
    let bp = params(&a.params)?;
    let rep = verify::parseval_harness(bp, a.nmax, a.trials, a.seed, a.tol)?;
    let points: Vec<(f64, f64)> = rep
        .ratios
        .iter()
        .enumerate()
        .map(|(i, &r)| (i as f64, r))
        .collect();
    finish(
        "verify parseval",
        &a,
        &rep,
        rep.pass,
        &a.report,
        "trial,ratio",
        &points,
    )
}

fn scan_cmd(command: &str, theorem: ggexp::inequalities::TheoremId, a: ScanArgs) -> Result<bool> {
    let bp = params(&a.params)?;
    let rep = verify::scan_stability_check(bp, theorem, a.p, a.s, a.trials, a.seed, a.growth_tol)?;
    if let Some(path) = &a.trials_csv {
        write_atomic(path, &rep.report_hi.trials_csv())?;
    }
    let points: Vec<(f64, f64)> = rep
        .report_hi
        .trials
        .iter()
        .enumerate()
        .map(|(i, t)| (i as f64, t.ratio))
        .collect();
    finish(
        command,
        &a,
        &rep,
        rep.pass,
        &a.report,
        "trial,ratio",
        &points,
    )
}

fn connection_cmd(a: ConnectionArgs) -> Result<bool> {
    let bp = params(&a.params)?;
    let rep = verify::connection_harness(bp, a.nmax, a.grid, a.tol, a.coeff_tol)?;
    let points: Vec<(f64, f64)> = rep
        .errors
        .iter()
        .enumerate()
        .map(|(n, &e)| (n as f64, e))
        .collect();
    finish(
        "verify connection",
        &a,
        &rep,
        rep.pass,
        &a.report,
        "n,error",
        &points,
    )
}

fn converse_cmd(a: ConverseArgs) -> Result<bool> {
    let bp = params(&a.params)?;
    let rep = verify::converse_check(
        bp,
        a.theorem.id(),
        a.q,
        a.r,
        a.len,
        a.seed,
        a.limit_tol,
        a.recovery_tol,
    )?;
    let points = [(rep.q, rep.norm_bound_ratio)];
    finish(
        "verify converse",
        &a,
        &rep,
        rep.pass,
        &a.report,
        "q,ratio",
        &points,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bp() -> BasisParams<f64> {
        BasisParams::new(1.0, 0.5).unwrap()
    }

    #[test]
    fn family_spec_parses() {
        let f = parse_poly_input(bp(), "family:flat:8:3").unwrap();
        match f {
            TestFunction::OrthonormalPoly(cv) => assert!(cv.degree() <= 8),
            other => panic!("unexpected variant {other:?}"),
        }
        assert!(parse_poly_input(bp(), "family:flat:8").is_err());
        assert!(parse_poly_input(bp(), "family:banana:8:3").is_err());
        assert!(parse_poly_input(bp(), "family:flat:x:3").is_err());
    }

    #[test]
    fn coefficient_file_parses_both_bases() {
        let mono = "# basis: monomial\n1.0\n0.0\n-2.5\n";
        match parse_coefficient_file(bp(), mono).unwrap() {
            TestFunction::MonomialPoly(c) => assert_eq!(c, vec![1.0, 0.0, -2.5]),
            other => panic!("unexpected variant {other:?}"),
        }
        let ortho = "# basis: orthonormal\n\n# a comment\n0.5\n1.5\n";
        match parse_coefficient_file(bp(), ortho).unwrap() {
            TestFunction::OrthonormalPoly(cv) => assert_eq!(cv.coeffs(), &[0.5, 1.5]),
            other => panic!("unexpected variant {other:?}"),
        }
    }

    #[test]
    fn coefficient_file_rejects_bad_input() {
        assert!(parse_coefficient_file(bp(), "1.0\n2.0\n").is_err());
        assert!(parse_coefficient_file(bp(), "# basis: fourier\n1.0\n").is_err());
        assert!(parse_coefficient_file(bp(), "# basis: monomial\nants\n").is_err());
    }

    #[test]
    fn exit_codes_follow_error_class() {
        assert_eq!(exit_code(&Error::domain("x")), 2);
        assert_eq!(exit_code(&Error::invalid("x")), 2);
        assert_eq!(exit_code(&Error::NonFiniteEvaluation { node: 0.5 }), 3);
        assert_eq!(exit_code(&Error::EigenFailure { size: 4 }.in_trial(7)), 3);
    }
}
