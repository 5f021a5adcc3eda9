//! Output documents. Every record is one JSON object carrying
//! `schema_version` and a `command` tag.
//!
//! Encodings: `F_q` elements are base-`p` digit arrays; polynomials are dense
//! constant-first arrays; group elements are exponent vectors; elements of
//! `F_q[G]` are `[exponent-vector, scalar]` pairs sorted lexicographically
//! with zero terms omitted.

use serde::{Deserialize, Serialize};

use eulerfit_core::charpoly::CharPolyResult;
use eulerfit_core::cyclotomic::{PrimeClassification, PrimeKind};
use eulerfit_core::euler::{EulerFactorReport, ThetaTruncation};
use eulerfit_core::field::Fq;
use eulerfit_core::group::AbelianGroup;
use eulerfit_core::newton::NewtonPolygon;
use eulerfit_core::suites::SuiteResult;

pub use crate::config::SCHEMA_VERSION;

pub type FqRec = Vec<u32>;
pub type PolyRec = Vec<FqRec>;
pub type GroupElemRec = Vec<(Vec<u64>, FqRec)>;
pub type GroupPolyRec = Vec<GroupElemRec>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum OutputRecord {
    Charpoly(CharpolyRecord),
    EulerCheck(EulerRecord),
    Theta(ThetaRecord),
    Selftest(SelftestRecord),
    Error(ErrorRecord),
}

impl OutputRecord {
    pub fn to_json(&self, pretty: bool) -> String {
        let s = if pretty { serde_json::to_string_pretty(self) } else { serde_json::to_string(self) };
        s.expect("records serialize")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldRec {
    pub p: u32,
    pub deg: usize,
    pub modulus: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentRec {
    /// `[numerator, denominator]`
    pub slope: [i64; 2],
    pub length: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitRootRec {
    pub precision: usize,
    /// `w0^N`
    pub modulus: PolyRec,
    /// coefficients in `A / w0^N`, constant first
    pub g: Vec<PolyRec>,
    pub degree: usize,
    pub divides: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleRec {
    pub primes: Vec<PolyRec>,
    /// `agree` or `skipped: <reason>`
    pub status: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharpolyRecord {
    pub schema_version: u32,
    pub field: FieldRec,
    pub w0: PolyRec,
    pub n_v: usize,
    pub rank: usize,
    pub p_v: Vec<PolyRec>,
    pub rho: FqRec,
    pub height: usize,
    pub newton_infinity: Vec<SegmentRec>,
    pub newton_w0: Vec<SegmentRec>,
    pub unit_root: Option<UnitRootRec>,
    pub oracle: Option<OracleRec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationRec {
    pub v: PolyRec,
    pub kind: String,
    pub sigma: Option<Vec<u64>>,
    pub inertia: Vec<Vec<u64>>,
    pub e: u64,
    pub f: u64,
    pub n_v: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictRec {
    pub unit_identity: bool,
    pub norm_identity: bool,
    pub monic_degree: bool,
    pub series_identity: bool,
    pub all_pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerRecord {
    pub schema_version: u32,
    pub field: FieldRec,
    pub model: String,
    pub group: Vec<u64>,
    pub classification: Option<ClassificationRec>,
    pub p_v: Vec<PolyRec>,
    pub rho: FqRec,
    pub nv: PolyRec,
    pub e_v: GroupElemRec,
    pub sigma_v: Vec<u64>,
    pub lhs_unit: GroupPolyRec,
    pub rhs_unit: GroupPolyRec,
    pub lhs_norm: GroupPolyRec,
    pub rhs_norm: GroupPolyRec,
    pub series_precision: usize,
    pub verdicts: VerdictRec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExcludedRec {
    pub v: PolyRec,
    pub kind: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirichletRec {
    /// largest `k` with coefficients of `t^0 .. t^-k` equal
    pub agreement: Option<usize>,
    pub required: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaRecord {
    pub schema_version: u32,
    pub field: FieldRec,
    pub conductor: PolyRec,
    pub group: Vec<u64>,
    pub degree_bound: usize,
    pub requested_precision: usize,
    pub guaranteed_precision: usize,
    /// coefficients of `t^0, t^-1, ...`
    pub value: GroupPolyRec,
    pub factors: Vec<PolyRec>,
    pub excluded: Vec<ExcludedRec>,
    pub dirichlet: Option<DirichletRec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteRec {
    pub name: String,
    pub passed: usize,
    pub total: usize,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelftestRecord {
    pub schema_version: u32,
    pub scale: String,
    pub seed: u64,
    pub suites: Vec<SuiteRec>,
    pub all_pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub schema_version: u32,
    pub exit_code: i32,
    pub kind: String,
    pub message: String,
    pub field: Option<String>,
    pub classification: Option<ClassificationRec>,
}

// ---------------------------------------------------------------------------
// encoders

pub fn field_rec(fq: &Fq) -> FieldRec {
    let c = fq.config();
    FieldRec { p: c.p, deg: c.deg, modulus: c.modulus.unwrap_or_default() }
}

pub fn fq_rec(fq: &Fq, a: u32) -> FqRec {
    fq.digits(a)
}

pub fn poly_rec(fq: &Fq, p: &[u32]) -> PolyRec {
    let mut p = p.to_vec();
    while p.last() == Some(&0) {
        p.pop();
    }
    p.iter().map(|&c| fq_rec(fq, c)).collect()
}

pub fn group_elem_rec(fq: &Fq, group: &AbelianGroup, a: &[u32]) -> GroupElemRec {
    let mut out: GroupElemRec = a
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| (group.element(i), fq_rec(fq, c)))
        .collect();
    out.sort();
    out
}

pub fn group_poly_rec(fq: &Fq, group: &AbelianGroup, p: &[Vec<u32>]) -> GroupPolyRec {
    p.iter().map(|c| group_elem_rec(fq, group, c)).collect()
}

pub fn segments(np: &NewtonPolygon) -> Vec<SegmentRec> {
    np.segments.iter().map(|s| SegmentRec { slope: [*s.slope.numer(), *s.slope.denom()], length: s.length }).collect()
}

pub fn kind_name(k: PrimeKind) -> &'static str {
    match k {
        PrimeKind::Unramified => "unramified",
        PrimeKind::Tame => "tame",
        PrimeKind::Wild => "wild",
        PrimeKind::Bad => "bad",
    }
}

pub fn classification_rec(fq: &Fq, group: &AbelianGroup, c: &PrimeClassification) -> ClassificationRec {
    ClassificationRec {
        v: poly_rec(fq, &c.v),
        kind: kind_name(c.kind).into(),
        sigma: c.sigma.clone(),
        inertia: c.inertia.iter().map(|&i| group.element(i)).collect(),
        e: c.e,
        f: c.f,
        n_v: c.n_v,
    }
}

pub fn charpoly_coeffs(fq: &Fq, cp: &CharPolyResult) -> Vec<PolyRec> {
    cp.coeffs.iter().map(|c| poly_rec(fq, c)).collect()
}

pub fn euler_record(fq: &Fq, group: &AbelianGroup, model: &str, classification: Option<ClassificationRec>, r: &EulerFactorReport) -> EulerRecord {
    EulerRecord {
        schema_version: SCHEMA_VERSION,
        field: field_rec(fq),
        model: model.into(),
        group: group.orders().to_vec(),
        classification,
        p_v: charpoly_coeffs(fq, &r.p_v),
        rho: fq_rec(fq, r.rho),
        nv: poly_rec(fq, &r.nv),
        e_v: group_elem_rec(fq, group, &r.e_v),
        sigma_v: r.sigma_v.clone(),
        lhs_unit: group_poly_rec(fq, group, &r.lhs_unit),
        rhs_unit: group_poly_rec(fq, group, &r.rhs_unit),
        lhs_norm: group_poly_rec(fq, group, &r.lhs_norm),
        rhs_norm: group_poly_rec(fq, group, &r.rhs_norm),
        series_precision: r.series_precision,
        verdicts: VerdictRec {
            unit_identity: r.unit_identity,
            norm_identity: r.norm_identity,
            monic_degree: r.monic_degree,
            series_identity: r.series_identity,
            all_pass: r.all_pass(),
        },
    }
}

pub fn theta_record(fq: &Fq, group: &AbelianGroup, th: &ThetaTruncation, dirichlet: Option<DirichletRec>) -> ThetaRecord {
    ThetaRecord {
        schema_version: SCHEMA_VERSION,
        field: field_rec(fq),
        conductor: poly_rec(fq, &th.conductor),
        group: group.orders().to_vec(),
        degree_bound: th.degree_bound,
        requested_precision: th.requested_precision,
        guaranteed_precision: th.guaranteed_precision,
        value: group_poly_rec(fq, group, &th.value.coeffs),
        factors: th.factors.iter().map(|v| poly_rec(fq, v)).collect(),
        excluded: th.excluded.iter().map(|(v, k)| ExcludedRec { v: poly_rec(fq, v), kind: kind_name(*k).into() }).collect(),
        dirichlet,
    }
}

pub fn suite_rec(r: &SuiteResult) -> SuiteRec {
    SuiteRec { name: r.name.clone(), passed: r.passed, total: r.total, failures: r.failures.clone() }
}
