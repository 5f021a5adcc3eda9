//! Instance configuration: one JSON document per run.
//!
//! Elements of `F_q` are written either as base-`p` digit arrays (length
//! `deg`, constant digit first) or, as a shorthand, as their integer index.
//! Polynomials over `F_q` are dense constant-first arrays of such elements.
//! Elements of `F_{q^n_v}` are constant-first coordinate arrays over the
//! default tower modulus of degree `n_v`.

use serde::Deserialize;

use eulerfit_core::cyclotomic::CyclotomicField;
use eulerfit_core::drinfeld::{DrinfeldModule, ReducedDrinfeldModule};
use eulerfit_core::field::{field_tower, is_irreducible, Fq, FqConfig, ResidueRing};
use eulerfit_core::galois::GaloisDatum;
use eulerfit_core::group::AbelianGroup;
use eulerfit_core::poly::PolyRing;
use eulerfit_core::Error;

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum FqElem {
    Index(u32),
    Digits(Vec<u32>),
}

#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct FieldConfig {
    pub p: u32,
    #[serde(default = "one")]
    pub deg: usize,
    #[serde(default)]
    pub modulus: Option<Vec<u32>>,
}

fn one() -> usize {
    1
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Synthetic,
    Cyclotomic,
}

#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct SyntheticConfig {
    pub n_v: usize,
    /// `e_0, ..., e_r` in `F_{q^n_v}`
    pub coefficients: Vec<Vec<FqElem>>,
    /// cyclic orders of `G`
    #[serde(default)]
    pub group: Option<Vec<u64>>,
    #[serde(default)]
    pub sigma: Option<Vec<u64>>,
    #[serde(default)]
    pub gamma: Option<Vec<u64>>,
    /// optional assertions on the derived ramification data
    #[serde(default)]
    pub e: Option<u64>,
    #[serde(default)]
    pub f: Option<u64>,
}

#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct InstanceConfig {
    #[serde(default)]
    pub schema_version: Option<u32>,
    pub field: FieldConfig,
    pub model: Model,
    /// global coefficients `e_0 = t, e_1, ..., e_r` over `A`
    #[serde(default)]
    pub drinfeld: Option<Vec<Vec<FqElem>>>,
    #[serde(default)]
    pub synthetic: Option<SyntheticConfig>,
    /// reduction prime (`w_0` and `v` are synonyms)
    #[serde(default, alias = "w0")]
    pub v: Option<Vec<FqElem>>,
    /// `[L_1 : F_q]`; defaults to `deg v`
    #[serde(default)]
    pub n_v: Option<usize>,
    #[serde(default)]
    pub conductor: Option<Vec<FqElem>>,
    #[serde(default = "default_precision")]
    pub precision: usize,
    #[serde(default)]
    pub degree_bound: Option<usize>,
    #[serde(default)]
    pub oracle_primes: Option<Vec<Vec<FqElem>>>,
    #[serde(default)]
    pub seed: u64,
}

fn default_precision() -> usize {
    8
}

fn cfg_err(field: &str, message: impl std::fmt::Display) -> CliError {
    CliError::Config { field: field.into(), message: message.to_string() }
}

pub fn parse(text: &str) -> Result<InstanceConfig, CliError> {
    let cfg: InstanceConfig = serde_json::from_str(text).map_err(|e| cfg_err("<document>", e))?;
    if let Some(v) = cfg.schema_version {
        if v != SCHEMA_VERSION {
            return Err(cfg_err("schema_version", format!("unsupported version {v}, expected {SCHEMA_VERSION}")));
        }
    }
    Ok(cfg)
}

pub fn build_field(c: &FieldConfig) -> Result<Fq, CliError> {
    let name = if c.modulus.is_some() { "field.modulus" } else { "field" };
    Fq::new(&FqConfig { p: c.p, deg: c.deg, modulus: c.modulus.clone() }).map_err(|e| cfg_err(name, e))
}

pub fn fq_elem(fq: &Fq, e: &FqElem, field: &str) -> Result<u32, CliError> {
    match e {
        FqElem::Index(i) if *i < fq.q() => Ok(*i),
        FqElem::Index(i) => Err(cfg_err(field, format!("element index {i} out of range for q = {}", fq.q()))),
        FqElem::Digits(d) => fq.from_digits(d).map_err(|e| cfg_err(field, e)),
    }
}

pub fn poly(fq: &Fq, p: &[FqElem], field: &str) -> Result<Vec<u32>, CliError> {
    let coeffs = p.iter().map(|e| fq_elem(fq, e, field)).collect::<Result<Vec<_>, _>>()?;
    Ok(PolyRing::new(fq.clone()).normalize(coeffs))
}

pub fn monic_irreducible(fq: &Fq, p: &[FqElem], field: &str) -> Result<Vec<u32>, CliError> {
    let v = poly(fq, p, field)?;
    if v.len() < 2 || v.last() != Some(&1) || !is_irreducible(fq, &v) {
        return Err(cfg_err(field, "expected a monic irreducible polynomial"));
    }
    Ok(v)
}

fn require<'a, T>(x: &'a Option<T>, field: &str) -> Result<&'a T, CliError> {
    x.as_ref().ok_or_else(|| cfg_err(field, "required for this model"))
}

/// Parsed and validated instance, ready for computation.
pub struct Instance {
    pub config: InstanceConfig,
    pub fq: Fq,
    pub kind: InstanceKind,
}

pub enum InstanceKind {
    Synthetic(SyntheticInstance),
    Cyclotomic(CyclotomicInstance),
}

pub struct SyntheticInstance {
    pub tower: ResidueRing,
    pub reduced: ReducedDrinfeldModule,
    pub group: Option<(AbelianGroup, Vec<u64>, Vec<u64>)>,
}

pub struct CyclotomicInstance {
    pub drinfeld: DrinfeldModule,
    pub v: Option<Vec<u32>>,
    pub n_v: Option<usize>,
    pub conductor: Option<Vec<u32>>,
}

pub fn resolve(config: InstanceConfig) -> Result<Instance, CliError> {
    let fq = build_field(&config.field)?;
    let kind = match config.model {
        Model::Synthetic => InstanceKind::Synthetic(resolve_synthetic(&fq, require(&config.synthetic, "synthetic")?, config.v.as_deref())?),
        Model::Cyclotomic => {
            let coeffs = require(&config.drinfeld, "drinfeld")?
                .iter()
                .enumerate()
                .map(|(i, c)| poly(&fq, c, &format!("drinfeld[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            let drinfeld = DrinfeldModule::new(&fq, coeffs).map_err(|e| cfg_err("drinfeld", e))?;
            let v = config.v.as_ref().map(|v| monic_irreducible(&fq, v, "v")).transpose()?;
            let conductor = config.conductor.as_ref().map(|c| poly(&fq, c, "conductor")).transpose()?;
            if let Some(n) = config.n_v {
                let dv = v.as_ref().map_or(1, |v| v.len() - 1);
                if n == 0 || n % dv != 0 {
                    return Err(cfg_err("n_v", format!("must be a positive multiple of deg v = {dv}")));
                }
            }
            InstanceKind::Cyclotomic(CyclotomicInstance { drinfeld, v, n_v: config.n_v, conductor })
        }
    };
    Ok(Instance { config, fq, kind })
}

fn resolve_synthetic(fq: &Fq, s: &SyntheticConfig, w0: Option<&[FqElem]>) -> Result<SyntheticInstance, CliError> {
    if s.n_v == 0 {
        return Err(cfg_err("synthetic.n_v", "must be positive"));
    }
    let tower = field_tower(fq, s.n_v).map_err(|e| cfg_err("synthetic.n_v", e))?;
    let coeffs = s
        .coefficients
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let name = format!("synthetic.coefficients[{i}]");
            if c.len() > s.n_v {
                return Err(cfg_err(&name, format!("at most n_v = {} coordinates", s.n_v)));
            }
            let coords = c.iter().map(|e| fq_elem(fq, e, &name)).collect::<Result<Vec<_>, _>>()?;
            Ok(tower.reduce(&coords))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let reduced = match ReducedDrinfeldModule::from_residue_coeffs(&tower, coeffs) {
        Err(Error::BadReduction) => return Err(CliError::from_core(Error::BadReduction)),
        r => r.map_err(|e| cfg_err("synthetic.coefficients", e))?,
    };
    if let Some(w) = w0 {
        if monic_irreducible(fq, w, "v")? != reduced.w0() {
            return Err(cfg_err("v", format!("does not match the minimal polynomial {:?} of e_0", reduced.w0())));
        }
    }
    let group = match (&s.group, &s.sigma, &s.gamma) {
        (None, None, None) => None,
        (Some(g), Some(sig), Some(gam)) => {
            let group = AbelianGroup::new(g).map_err(|e| cfg_err("synthetic.group", e))?;
            for (name, x) in [("synthetic.sigma", sig), ("synthetic.gamma", gam)] {
                if !group.is_valid(x) {
                    return Err(cfg_err(name, "not an element of G"));
                }
            }
            Some((group, sig.clone(), gam.clone()))
        }
        _ => return Err(cfg_err("synthetic.group", "group, sigma and gamma must be given together")),
    };
    Ok(SyntheticInstance { tower, reduced, group })
}

impl SyntheticInstance {
    pub fn datum(&self, s: &SyntheticConfig) -> Result<GaloisDatum, CliError> {
        let (g, sig, gam) = self.group.as_ref().ok_or_else(|| cfg_err("synthetic.group", "required for euler-check"))?;
        let d = GaloisDatum::new(g, sig, gam, &self.reduced).map_err(|e| match e {
            Error::ParameterMismatch(m) => cfg_err("synthetic", m),
            Error::InvalidArgument(m) => cfg_err("synthetic", m),
            other => CliError::from_core(other),
        })?;
        if s.e.is_some_and(|e| e != d.e()) {
            return Err(cfg_err("synthetic.e", format!("derived inertia order is {}", d.e())));
        }
        if s.f.is_some_and(|f| f != d.f()) {
            return Err(cfg_err("synthetic.f", format!("derived residue degree is {}", d.f())));
        }
        Ok(d)
    }
}

impl CyclotomicInstance {
    pub fn field(&self, fq: &Fq) -> Result<CyclotomicField, CliError> {
        let f = require(&self.conductor, "conductor")?;
        CyclotomicField::new(fq, f).map_err(|e| cfg_err("conductor", e))
    }

    pub fn prime(&self) -> Result<&[u32], CliError> {
        require(&self.v, "v").map(|v| v.as_slice())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_field_is_named() {
        let e = parse(r#"{"field": {"p": 2}, "model": "synthetic", "bogus": 1}"#).unwrap_err();
        assert!(e.to_string().contains("bogus"), "{e}");
    }

    #[test]
    fn malformed_modulus() {
        let cfg = parse(r#"{"field": {"p": 2, "deg": 2, "modulus": [1, 0, 1]}, "model": "synthetic"}"#).unwrap();
        match build_field(&cfg.field) {
            Err(CliError::Config { field, .. }) => assert_eq!(field, "field.modulus"),
            other => panic!("{:?}", other.err()),
        }
    }

    #[test]
    fn element_forms() {
        let f4 = Fq::new(&FqConfig { p: 2, deg: 2, modulus: None }).unwrap();
        assert_eq!(fq_elem(&f4, &FqElem::Digits(vec![0, 1]), "x").unwrap(), 2);
        assert_eq!(fq_elem(&f4, &FqElem::Index(3), "x").unwrap(), 3);
        assert!(fq_elem(&f4, &FqElem::Index(4), "x").is_err());
        assert!(fq_elem(&f4, &FqElem::Digits(vec![1]), "x").is_err());
    }
}
