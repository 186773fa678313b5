//! JSON documents for fields, matrices, isopairs, certificates and Wall
//! invariants. Scalars are written as integers over F_p and as "n/d"
//! strings over ℚ; both forms are accepted on input.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::factorize::Certificate;
use crate::field::{BaseField, FieldDescriptor, PrimeField, Rationals};
use crate::isopair::{Epsilon, Isopair};
use crate::matrix::Matrix;
use crate::wall::{is_hyperbolic_hermitian, is_hyperbolic_symmetric, FormKind, WallInvariants};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn field_to_json(d: FieldDescriptor) -> Value {
    match d {
        FieldDescriptor::Prime(p) => json!({"kind": "prime", "p": p}),
        FieldDescriptor::Rational => json!({"kind": "rational"}),
    }
}

pub fn field_from_json(v: &Value) -> Result<FieldDescriptor> {
    match v.get("kind").and_then(Value::as_str) {
        Some("prime") => {
            let p = v
                .get("p")
                .and_then(Value::as_u64)
                .ok_or_else(|| parse_err("prime field needs an integer \"p\""))?;
            FieldDescriptor::prime(p)
        }
        Some("rational") => Ok(FieldDescriptor::Rational),
        _ => Err(parse_err("field kind must be \"prime\" or \"rational\"")),
    }
}

pub fn scalar_to_json<F: BaseField>(f: &F, a: &F::Elem) -> Value {
    let s = f.format(a);
    match f.descriptor() {
        FieldDescriptor::Prime(_) => s.parse::<u64>().map(Value::from).unwrap_or(Value::String(s)),
        FieldDescriptor::Rational => Value::String(s.strip_suffix("/1").map(str::to_string).unwrap_or(s)),
    }
}

pub fn scalar_from_json<F: BaseField>(f: &F, v: &Value) -> Result<F::Elem> {
    match v {
        Value::Number(n) => f.parse(&n.to_string()),
        Value::String(s) => f.parse(s),
        _ => Err(parse_err(format!("not a scalar: {v}"))),
    }
}

pub fn matrix_to_json<F: BaseField>(m: &Matrix<F>) -> Value {
    let f = m.field();
    Value::Array(
        m.to_rows()
            .iter()
            .map(|r| Value::Array(r.iter().map(|a| scalar_to_json(f, a)).collect()))
            .collect(),
    )
}

pub fn matrix_from_json<F: BaseField>(f: &F, v: &Value) -> Result<Matrix<F>> {
    let rows = v.as_array().ok_or_else(|| parse_err("matrix must be an array of rows"))?;
    let rows = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| parse_err("matrix row must be an array"))?
                .iter()
                .map(|a| scalar_from_json(f, a))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    if rows.is_empty() {
        return Ok(Matrix::zeros(f, 0, 0));
    }
    Matrix::from_rows(f, rows)
}

fn get<'a>(doc: &'a Value, key: &str) -> Result<&'a Value> {
    doc.get(key).ok_or_else(|| parse_err(format!("missing \"{key}\"")))
}

pub fn epsilon_from_json(v: &Value) -> Result<Epsilon> {
    v.as_i64()
        .ok_or_else(|| parse_err("epsilon must be 1 or -1"))
        .and_then(Epsilon::from_i64)
}

/// Field descriptor of any document carrying a "field" entry.
pub fn document_field(doc: &Value) -> Result<FieldDescriptor> {
    field_from_json(get(doc, "field")?)
}

/// {"field", "epsilon", "gram", "u"}, validated.
pub fn isopair_from_json<F: BaseField>(f: &F, doc: &Value) -> Result<Isopair<F>> {
    let eps = epsilon_from_json(get(doc, "epsilon")?)?;
    let gram = matrix_from_json(f, get(doc, "gram")?)?;
    let u = matrix_from_json(f, get(doc, "u")?)?;
    let report = crate::isopair::validate(eps, &gram, &u);
    if !report.is_valid() {
        return Err(Error::Precondition(report.failures.join("; ")));
    }
    Ok(Isopair::new_unchecked(eps, gram, u))
}

pub fn isopair_to_json<F: BaseField>(p: &Isopair<F>) -> Value {
    json!({
        "field": field_to_json(p.field().descriptor()),
        "epsilon": p.epsilon().as_i64(),
        "gram": matrix_to_json(p.gram()),
        "u": matrix_to_json(p.u()),
    })
}

/// A bare matrix: "u" or "matrix".
pub fn matrix_document<F: BaseField>(f: &F, doc: &Value) -> Result<Matrix<F>> {
    let m = doc
        .get("u")
        .or_else(|| doc.get("matrix"))
        .ok_or_else(|| parse_err("missing \"u\" or \"matrix\""))?;
    matrix_from_json(f, m)
}

pub fn certificate_to_json<F: BaseField>(c: &Certificate<F>, verified: bool) -> Value {
    let mut m = Map::new();
    m.insert("group".into(), json!(c.group.to_string()));
    m.insert("s1".into(), matrix_to_json(&c.s1));
    m.insert("s2".into(), matrix_to_json(&c.s2));
    if let Some(g) = &c.gram {
        m.insert("gram".into(), matrix_to_json(g));
    }
    m.insert("verified".into(), json!(verified));
    m.insert("seed".into(), json!(c.seed));
    Value::Object(m)
}

/// Reads "s1", "s2" and, when present, "gram" and "group".
pub fn certificate_from_json<F: BaseField>(f: &F, doc: &Value) -> Result<Certificate<F>> {
    use crate::factorize::Group;
    let gram = doc.get("gram").map(|g| matrix_from_json(f, g)).transpose()?;
    let group = match doc.get("group").and_then(Value::as_str) {
        Some("gl") => Group::GL,
        Some("o") => Group::O,
        Some("sp") => Group::Sp,
        None if gram.is_none() => Group::GL,
        _ => return Err(parse_err("group must be gl, o or sp")),
    };
    Ok(Certificate {
        s1: matrix_from_json(f, get(doc, "s1")?)?,
        s2: matrix_from_json(f, get(doc, "s2")?)?,
        group,
        gram,
        seed: doc.get("seed").and_then(Value::as_u64).unwrap_or(0),
    })
}

/// Jordan numbers as {poly, r, n}; forms as Gram arrays. Entries of
/// Hermitian forms are coefficient arrays in the basis 1, t̄, …, t̄^{2d−1}.
pub fn wall_to_json<F: BaseField>(f: &F, w: &WallInvariants<F>) -> Value {
    let jordan: Vec<Value> = w
        .jordan
        .iter()
        .map(|((p, r), n)| json!({"poly": p.to_string(), "r": r, "n": n}))
        .collect();
    let hermitian: Vec<Value> = w
        .hermitian
        .iter()
        .map(|((p, r), h)| {
            let gram: Vec<Value> = h
                .gram
                .to_rows()
                .iter()
                .map(|row| {
                    Value::Array(
                        row.iter()
                            .map(|e| Value::Array(e.iter().map(|a| scalar_to_json(f, a)).collect()))
                            .collect(),
                    )
                })
                .collect();
            json!({
                "poly": p.to_string(),
                "r": r,
                "extension": {"modulus": p.to_string(), "basis": "1, t, ..., t^(deg-1)"},
                "kind": match h.kind { FormKind::Hermitian => "hermitian", FormKind::Skew => "skew-hermitian" },
                "dim": h.dim(),
                "gram": gram,
                "hyperbolic": is_hyperbolic_hermitian(h).ok(),
            })
        })
        .collect();
    let quadratic: Vec<Value> = w
        .quadratic
        .iter()
        .map(|((eta, r), g)| {
            let poly = if *eta == Epsilon::Plus { "t-1" } else { "t+1" };
            json!({
                "poly": poly,
                "eta": eta.as_i64(),
                "r": r,
                "gram": matrix_to_json(g),
                "hyperbolic": is_hyperbolic_symmetric(g).ok(),
            })
        })
        .collect();
    json!({
        "field": field_to_json(f.descriptor()),
        "epsilon": w.epsilon.as_i64(),
        "jordan": jordan,
        "hermitian": hermitian,
        "quadratic": quadratic,
    })
}

/// An isopair over whichever base field its document names.
#[derive(Clone, Debug)]
pub enum AnyIsopair {
    Prime(Isopair<PrimeField>),
    Rational(Isopair<Rationals>),
}

impl AnyIsopair {
    pub fn from_json(doc: &Value) -> Result<Self> {
        match document_field(doc)? {
            FieldDescriptor::Prime(p) => Ok(AnyIsopair::Prime(isopair_from_json(&PrimeField::new(p)?, doc)?)),
            FieldDescriptor::Rational => Ok(AnyIsopair::Rational(isopair_from_json(&Rationals, doc)?)),
        }
    }
}
