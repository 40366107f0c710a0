//! JSON input and output documents. Rationals travel as strings ("a/b" or
//! plain integers), never as floats, to preserve exactness; all maps are
//! ordered so identical runs emit byte-identical JSON.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use looseedge::algebra::{FieldElement, FieldSpec, UPoly};
use looseedge::lifting::{Face, FactorizationResult, Split, SplitOrigin, TraceEntry};
use looseedge::polyhedron::{EdgeFrame, NewtonPolyhedron};
use looseedge::series::{ExponentVector, Series, Truncation, Valuation};

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "kind")]
pub enum FieldSpecDoc {
    Rationals,
    PrimeField { p: u64 },
}

impl FieldSpecDoc {
    pub fn to_spec(self) -> Result<FieldSpec, String> {
        let spec = match self {
            FieldSpecDoc::Rationals => FieldSpec::Rationals,
            FieldSpecDoc::PrimeField { p } => FieldSpec::PrimeField(p),
        };
        spec.validate().map_err(|e| e.to_string())?;
        Ok(spec)
    }

    pub fn from_spec(spec: FieldSpec) -> Self {
        match spec {
            FieldSpec::Rationals => FieldSpecDoc::Rationals,
            FieldSpec::PrimeField(p) => FieldSpecDoc::PrimeField { p },
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TermDoc {
    pub exp: Vec<u64>,
    pub coeff: String,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum SourceDoc {
    Expression { expression: String },
    Terms { terms: Vec<TermDoc> },
}

/// Command-specific settings carried in the input file; command-line flags
/// take precedence over these.
#[derive(Clone, Debug, Default, Deserialize)]
pub struct OptionsDoc {
    pub edge: Option<String>,
    pub target: Option<String>,
    pub split: Option<String>,
    pub order: Option<u64>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct InputDocument {
    pub field: FieldSpecDoc,
    pub vars: Vec<String>,
    pub source: SourceDoc,
    #[serde(default)]
    pub options: OptionsDoc,
}

pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(text: &str) -> Result<BigRational, String> {
    let trimmed = text.trim();
    match trimmed.split_once('/') {
        None => trimmed
            .parse::<BigInt>()
            .map(BigRational::from_integer)
            .map_err(|e| format!("invalid rational '{trimmed}': {e}")),
        Some((n, d)) => {
            let numer: BigInt = n
                .trim()
                .parse()
                .map_err(|e| format!("invalid numerator '{n}': {e}"))?;
            let denom: BigInt = d
                .trim()
                .parse()
                .map_err(|e| format!("invalid denominator '{d}': {e}"))?;
            if denom == BigInt::from(0) {
                return Err(format!("zero denominator in '{trimmed}'"));
            }
            Ok(BigRational::new(numer, denom))
        }
    }
}

pub fn format_coeff(c: &FieldElement) -> String {
    match c {
        FieldElement::Rational(r) => format_rational(r),
        FieldElement::Prime { val, .. } => val.to_string(),
    }
}

pub fn parse_coeff(text: &str, field: FieldSpec) -> Result<FieldElement, String> {
    let r = parse_rational(text)?;
    FieldElement::from_ratio(field, r.numer(), r.denom()).map_err(|e| e.to_string())
}

pub fn format_valuation(v: &Valuation) -> String {
    match v {
        Valuation::Finite(r) => format_rational(r),
        Valuation::Infinite => "inf".to_string(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TruncationDoc {
    pub form: Vec<String>,
    pub cutoff: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SeriesDoc {
    pub terms: Vec<TermDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncation: Option<TruncationDoc>,
}

pub fn series_doc(s: &Series) -> SeriesDoc {
    SeriesDoc {
        terms: s
            .terms()
            .map(|(e, c)| TermDoc {
                exp: e.0.clone(),
                coeff: format_coeff(c),
            })
            .collect(),
        truncation: s.truncation().map(truncation_doc),
    }
}

fn truncation_doc(t: &Truncation) -> TruncationDoc {
    TruncationDoc {
        form: t.form.coefficients().iter().map(format_rational).collect(),
        cutoff: format_rational(&t.cutoff),
    }
}

/// Rebuilds a series from a term-list document.
pub fn series_from_terms(
    n: usize,
    field: FieldSpec,
    terms: &[TermDoc],
) -> Result<Series, String> {
    let mut s = Series::zero(n, field);
    for t in terms {
        if t.exp.len() != n {
            return Err(format!(
                "term exponent {:?} has {} entries, expected {n}",
                t.exp,
                t.exp.len()
            ));
        }
        let c = parse_coeff(&t.coeff, field)?;
        s.add_term(ExponentVector(t.exp.clone()), c)
            .map_err(|e| e.to_string())?;
    }
    Ok(s)
}

#[derive(Clone, Debug, Serialize)]
pub struct EdgeDoc {
    pub index: usize,
    pub alpha: Vec<u64>,
    pub beta: Vec<u64>,
    pub direction: Vec<i64>,
    pub lattice_length: u64,
    pub witness: Vec<String>,
    pub level: String,
    pub loose: bool,
    pub descendant: bool,
}

pub fn edge_doc(index: usize, e: &EdgeFrame) -> EdgeDoc {
    EdgeDoc {
        index,
        alpha: e.alpha.0.clone(),
        beta: e.beta.0.clone(),
        direction: e.direction.clone(),
        lattice_length: e.lattice_length,
        witness: e
            .witness
            .coefficients()
            .iter()
            .map(format_rational)
            .collect(),
        level: format_rational(&e.level()),
        loose: e.loose,
        descendant: e.is_descendant(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PolyhedronDoc {
    pub vertices: Vec<Vec<u64>>,
    pub edges: Vec<EdgeDoc>,
}

pub fn polyhedron_doc(np: &NewtonPolyhedron) -> PolyhedronDoc {
    PolyhedronDoc {
        vertices: np.vertices().iter().map(|v| v.0.clone()).collect(),
        edges: np
            .edges()
            .iter()
            .enumerate()
            .map(|(i, e)| edge_doc(i, e))
            .collect(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FaceDoc {
    pub kind: &'static str,
    pub ends: Vec<Vec<u64>>,
}

pub fn face_doc(face: &Face) -> FaceDoc {
    match face {
        Face::Vertex(v) => FaceDoc {
            kind: "vertex",
            ends: vec![v.0.clone()],
        },
        Face::Edge { alpha, beta } => FaceDoc {
            kind: "edge",
            ends: vec![alpha.0.clone(), beta.0.clone()],
        },
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SplitDoc {
    /// Ascending coefficients of the first factor.
    pub p1: Vec<String>,
    pub p2: Vec<String>,
    pub origin: &'static str,
}

pub fn split_doc(s: &Split) -> SplitDoc {
    let coeffs = |p: &UPoly| p.coeffs().iter().map(format_coeff).collect();
    SplitDoc {
        p1: coeffs(&s.p1),
        p2: coeffs(&s.p2),
        origin: match s.origin {
            SplitOrigin::Auto => "auto",
            SplitOrigin::User => "user",
        },
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceDoc {
    pub iteration: u64,
    pub level: String,
    pub bezout_solves: u64,
}

fn trace_doc(t: &TraceEntry) -> TraceDoc {
    TraceDoc {
        iteration: t.iteration,
        level: format_rational(&t.level),
        bezout_solves: t.bezout_solves,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorizationDoc {
    pub g: SeriesDoc,
    pub h: SeriesDoc,
    pub initial_g: SeriesDoc,
    pub initial_h: SeriesDoc,
    pub e1: FaceDoc,
    pub e2: FaceDoc,
    #[serde(rename = "residualValuation")]
    pub residual_valuation: String,
    pub target: String,
    pub trace: Vec<TraceDoc>,
    pub forced_non_loose: bool,
}

pub fn factorization_doc(r: &FactorizationResult) -> FactorizationDoc {
    FactorizationDoc {
        g: series_doc(&r.g),
        h: series_doc(&r.h),
        initial_g: series_doc(&r.initial_g),
        initial_h: series_doc(&r.initial_h),
        e1: face_doc(&r.e1),
        e2: face_doc(&r.e2),
        residual_valuation: format_valuation(&r.residual_valuation),
        target: format_rational(&r.target),
        trace: r.trace.iter().map(trace_doc).collect(),
        forced_non_loose: r.forced_non_loose,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerdictDoc {
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edge_index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub split: Option<SplitDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<FactorizationDoc>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OutputDocument {
    pub command: String,
    pub field: FieldSpecDoc,
    pub vars: Vec<String>,
    pub input: SeriesDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub polyhedron: Option<PolyhedronDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edge: Option<EdgeDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial_form: Option<SeriesDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub split: Option<SplitDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factorization: Option<FactorizationDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<VerdictDoc>,
}

impl OutputDocument {
    pub fn new(command: &str, field: FieldSpec, vars: &[String], input: &Series) -> Self {
        OutputDocument {
            command: command.to_string(),
            field: FieldSpecDoc::from_spec(field),
            vars: vars.to_vec(),
            input: series_doc(input),
            polyhedron: None,
            edge: None,
            initial_form: None,
            split: None,
            factorization: None,
            verdict: None,
        }
    }
}

/// Human-readable series rendering: terms in lexicographic order with
/// explicit signs, using the declared variable names.
pub fn format_series(s: &Series, vars: &[String]) -> String {
    if s.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (exp, coeff)) in s.terms().enumerate() {
        let text = format_coeff(coeff);
        let (sign, magnitude) = match text.strip_prefix('-') {
            Some(rest) => ("-", rest.to_string()),
            None => ("+", text),
        };
        if k == 0 {
            if sign == "-" {
                out.push_str("-");
            }
        } else {
            out.push_str(&format!(" {sign} "));
        }
        let mut parts: Vec<String> = Vec::new();
        let is_constant = exp.is_zero();
        if magnitude != "1" || is_constant {
            parts.push(magnitude);
        }
        for (i, &e) in exp.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(vars[i].clone()),
                _ => parts.push(format!("{}^{}", vars[i], e)),
            }
        }
        out.push_str(&parts.join("*"));
    }
    out
}
