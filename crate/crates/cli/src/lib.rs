//! Command implementations behind the `eulerfit` binary. Each command maps a
//! configuration to an [`OutputRecord`] and an exit code.

pub mod config;
pub mod record;

use eulerfit_core::charpoly::{charpoly_motive, cross_check, CharPolyResult};
use eulerfit_core::drinfeld::ReducedDrinfeldModule;
use eulerfit_core::euler::{dirichlet_agreement, pv_at_idempotent, theta_truncated, verify_cyclotomic, verify_synthetic, PvEvaluator};
use eulerfit_core::field::Fq;
use eulerfit_core::newton::{newton_polygon, unit_root_factor, Place};
use eulerfit_core::poly::PolyRing;
use eulerfit_core::ring::Ring;
use eulerfit_core::suites::{run_all, Scale};
use eulerfit_core::Error;

use config::{Instance, InstanceKind};
use record::*;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_HYPOTHESIS: i32 = 3;
pub const EXIT_CROSS_CHECK: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error in `{field}`: {message}")]
    Config { field: String, message: String },
    #[error("hypothesis violation ({kind}): {message}")]
    Hypothesis { kind: String, message: String, classification: Option<Box<ClassificationRec>> },
    #[error("cross-check failure ({kind}): {message}")]
    CrossCheck { kind: String, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } => EXIT_CONFIG,
            CliError::Hypothesis { .. } => EXIT_HYPOTHESIS,
            CliError::CrossCheck { .. } => EXIT_CROSS_CHECK,
        }
    }

    /// Route a core error to its exit-code class.
    pub fn from_core(e: Error) -> CliError {
        let kind = error_kind(&e).to_string();
        let message = e.to_string();
        match e {
            Error::BadReduction | Error::WildRamification { .. } | Error::WildPrime => {
                CliError::Hypothesis { kind, message, classification: None }
            }
            Error::InvalidField(_) | Error::InvalidArgument(_) | Error::ParameterMismatch(_) => {
                CliError::Config { field: "<instance>".into(), message }
            }
            _ => CliError::CrossCheck { kind, message },
        }
    }

    pub fn record(&self) -> OutputRecord {
        let (kind, message, field, classification) = match self {
            CliError::Config { field, message } => ("ConfigError".to_string(), message.clone(), Some(field.clone()), None),
            CliError::Hypothesis { kind, message, classification } => (kind.clone(), message.clone(), None, classification.as_deref().cloned()),
            CliError::CrossCheck { kind, message } => (kind.clone(), message.clone(), None, None),
        };
        OutputRecord::Error(ErrorRecord { schema_version: SCHEMA_VERSION, exit_code: self.exit_code(), kind, message, field, classification })
    }
}

pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::InvalidField(_) => "InvalidField",
        Error::NonMonicDivisor => "NonMonicDivisor",
        Error::NonUnit => "NonUnit",
        Error::NonSquare { .. } => "NonSquare",
        Error::InexactDivision(_) => "InexactDivision",
        Error::InvalidArgument(_) => "InvalidArgument",
        Error::BadReduction => "BadReduction",
        Error::DegreeMismatch(_) => "DegreeMismatch",
        Error::Internal(_) => "Internal",
        Error::CoefficientNotRational(_) => "CoefficientNotRational",
        Error::DegreeBoundViolation(_) => "DegreeBoundViolation",
        Error::SplittingFieldTooLarge { .. } => "SplittingFieldTooLarge",
        Error::InsufficientModuli(_) => "InsufficientModuli",
        Error::OracleMismatch(_) => "OracleMismatch",
        Error::WildRamification { .. } => "WildRamification",
        Error::WildPrime => "WildPrime",
        Error::ParameterMismatch(_) => "ParameterMismatch",
        Error::NotFree => "NotFree",
        Error::NotFreeProbably => "NotFreeProbably",
        Error::PresentationTooLarge(_) => "PresentationTooLarge",
        Error::AmbientMismatch => "AmbientMismatch",
    }
}

/// A finished command: the document to emit and the process exit code.
#[derive(Debug)]
pub struct Outcome {
    pub record: OutputRecord,
    pub exit_code: i32,
}

impl Outcome {
    fn ok(record: OutputRecord) -> Self {
        Outcome { record, exit_code: EXIT_OK }
    }

    pub fn from_result(r: Result<Outcome, CliError>) -> Self {
        r.unwrap_or_else(|e| Outcome { record: e.record(), exit_code: e.exit_code() })
    }
}

pub fn load(text: &str) -> Result<Instance, CliError> {
    config::resolve(config::parse(text)?)
}

fn core<T>(r: eulerfit_core::Result<T>) -> Result<T, CliError> {
    r.map_err(CliError::from_core)
}

// ---------------------------------------------------------------------------
// charpoly

fn reduced_module(inst: &Instance) -> Result<ReducedDrinfeldModule, CliError> {
    match &inst.kind {
        InstanceKind::Synthetic(s) => Ok(s.reduced.clone()),
        InstanceKind::Cyclotomic(c) => {
            let v = c.prime()?;
            let n_v = c.n_v.unwrap_or(v.len() - 1);
            core(c.drinfeld.reduce_mod(v, n_v))
        }
    }
}

pub fn cmd_charpoly(text: &str, unit_root: Option<usize>) -> Result<Outcome, CliError> {
    let inst = load(text)?;
    let fq = &inst.fq;
    let red = reduced_module(&inst)?;
    let cp = core(charpoly_motive(&red))?;
    core(cp.check_degree_bounds(fq))?;
    let unit_root = match unit_root {
        None => None,
        Some(0) => return Err(CliError::Config { field: "--unit-root".into(), message: "precision must be positive".into() }),
        Some(n) => Some(unit_root_rec(fq, &cp, n)?),
    };
    let oracle = match &inst.config.oracle_primes {
        None => None,
        Some(ps) => {
            let primes = ps
                .iter()
                .enumerate()
                .map(|(i, p)| config::monic_irreducible(fq, p, &format!("oracle_primes[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            let status = match cross_check(&red, &cp, &primes, None) {
                Ok(()) => "agree".to_string(),
                Err(Error::SplittingFieldTooLarge { cap }) => format!("skipped: splitting field degree exceeds {cap}"),
                Err(e) => return Err(CliError::from_core(e)),
            };
            Some(OracleRec { primes: primes.iter().map(|p| poly_rec(fq, p)).collect(), status })
        }
    };
    let rec = CharpolyRecord {
        schema_version: SCHEMA_VERSION,
        field: field_rec(fq),
        w0: poly_rec(fq, &cp.w0),
        n_v: cp.n_v,
        rank: cp.r,
        p_v: charpoly_coeffs(fq, &cp),
        rho: fq_rec(fq, cp.rho),
        height: cp.height,
        newton_infinity: segments(&core(newton_polygon(fq, &cp.coeffs, &Place::Infinity))?),
        newton_w0: segments(&core(newton_polygon(fq, &cp.coeffs, &Place::Finite(cp.w0.clone())))?),
        unit_root,
        oracle,
    };
    Ok(Outcome::ok(OutputRecord::Charpoly(rec)))
}

fn unit_root_rec(fq: &Fq, cp: &CharPolyResult, n: usize) -> Result<UnitRootRec, CliError> {
    let g = core(unit_root_factor(fq, cp, n))?;
    let modulus = PolyRing::new(fq.clone()).pow(&cp.w0, n as u64);
    Ok(UnitRootRec {
        precision: n,
        modulus: poly_rec(fq, &modulus),
        g: g.g.iter().map(|c| poly_rec(fq, c)).collect(),
        degree: g.g.len() - 1,
        divides: g.divides(cp),
    })
}

// ---------------------------------------------------------------------------
// euler-check

pub fn cmd_euler_check(text: &str) -> Result<Outcome, CliError> {
    euler_check_with(text, pv_at_idempotent)
}

/// `euler-check` with an explicit evaluator for `P_v(e_v sigma_v)`.
pub fn euler_check_with(text: &str, eval: PvEvaluator) -> Result<Outcome, CliError> {
    let inst = load(text)?;
    let fq = &inst.fq;
    let (seed, prec) = (inst.config.seed, inst.config.precision);
    let rec = match &inst.kind {
        InstanceKind::Synthetic(s) => {
            let d = s.datum(inst.config.synthetic.as_ref().expect("synthetic section"))?;
            let report = core(verify_synthetic(&d, eval, seed, prec))?;
            euler_record(fq, d.group(), "synthetic", None, &report)
        }
        InstanceKind::Cyclotomic(c) => {
            let k = c.field(fq)?;
            let v = c.prime()?;
            let class = core(k.classify(&c.drinfeld, v))?;
            let crec = classification_rec(fq, k.group(), &class);
            let report = verify_cyclotomic(&k, &c.drinfeld, v, eval, seed, prec).map_err(|e| match CliError::from_core(e) {
                CliError::Hypothesis { kind, message, .. } => CliError::Hypothesis { kind, message, classification: Some(Box::new(crec.clone())) },
                other => other,
            })?;
            euler_record(fq, k.group(), "cyclotomic", Some(crec), &report)
        }
    };
    let exit_code = if rec.verdicts.all_pass { EXIT_OK } else { EXIT_CROSS_CHECK };
    Ok(Outcome { record: OutputRecord::EulerCheck(rec), exit_code })
}

// ---------------------------------------------------------------------------
// theta

pub fn cmd_theta(text: &str, dirichlet: bool) -> Result<Outcome, CliError> {
    let inst = load(text)?;
    let fq = &inst.fq;
    let InstanceKind::Cyclotomic(c) = &inst.kind else {
        return Err(CliError::Config { field: "model".into(), message: "theta requires the cyclotomic model".into() });
    };
    let k = c.field(fq)?;
    let d = inst.config.degree_bound.ok_or_else(|| CliError::Config { field: "degree_bound".into(), message: "required for theta".into() })?;
    let n = inst.config.precision;
    let th = core(theta_truncated(&k, &c.drinfeld, d, n))?;
    let mut exit_code = EXIT_OK;
    let drec = if dirichlet {
        if k.group().size() != 1 {
            return Err(CliError::Config { field: "conductor".into(), message: "--dirichlet-check needs a trivial group (A/f)^x".into() });
        }
        if c.drinfeld.coeffs() != eulerfit_core::drinfeld::DrinfeldModule::carlitz(fq).coeffs() {
            return Err(CliError::Config { field: "drinfeld".into(), message: "--dirichlet-check applies to the Carlitz module".into() });
        }
        let agreement = core(dirichlet_agreement(&th, fq))?;
        let required = n.min(d);
        let pass = agreement.is_some_and(|a| a >= required);
        if !pass {
            exit_code = EXIT_CROSS_CHECK;
        }
        Some(DirichletRec { agreement, required, pass })
    } else {
        None
    };
    Ok(Outcome { record: OutputRecord::Theta(theta_record(fq, k.group(), &th, drec)), exit_code })
}

// ---------------------------------------------------------------------------
// selftest

pub fn cmd_selftest(scale: Scale, seed: u64) -> Outcome {
    let results = run_all(scale, seed);
    let all_pass = results.iter().all(|r| r.ok());
    let rec = SelftestRecord {
        schema_version: SCHEMA_VERSION,
        scale: match scale {
            Scale::Quick => "quick",
            Scale::Full => "full",
        }
        .into(),
        seed,
        suites: results.iter().map(suite_rec).collect(),
        all_pass,
    };
    Outcome { record: OutputRecord::Selftest(rec), exit_code: if all_pass { EXIT_OK } else { EXIT_CROSS_CHECK } }
}

