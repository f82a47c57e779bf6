//! JSON forms of exponential sums, decompositions and charts. Rationals are strings `"p/q"`;
//! floating coefficients are tagged with `"mode": "float"`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::circuits::Circuit;
use crate::error::{Result, SoncError};
use crate::expsum::{assemble, Agiform, Coeffs, ExponentialSum, Locus, SoncDecomposition, ToricPoint};
use crate::geometry::SupportSet;
use crate::rat::{fmt_rat, serde_rat, Rat};
use crate::subdivision::WeightVector;

fn parse<T: for<'de> Deserialize<'de>>(v: Value) -> Result<T> {
    serde_json::from_value(v).map_err(|e| SoncError::Parse(e.to_string()))
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| SoncError::Parse(e.to_string()))
}

pub fn support_from_json(v: Value) -> Result<SupportSet> {
    parse(v)
}

pub fn weights_from_json(v: Value) -> Result<WeightVector> {
    parse(v)
}

pub fn rats_from_json(v: Value) -> Result<Vec<Rat>> {
    let raw: Vec<Value> = parse(v)?;
    raw.iter().map(serde_rat::from_value).collect()
}

pub fn toric_point_from_json(v: Value) -> Result<ToricPoint> {
    ToricPoint::new(rats_from_json(v)?)
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    circuit: Vec<usize>,
    #[serde(with = "serde_rat")]
    t: Rat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    z: Option<Vec<Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    w: Option<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct DecompositionJson {
    terms: Vec<TermJson>,
    #[serde(default)]
    monomials: Vec<(usize, Value)>,
}

/// `{"terms": [{"circuit": [i, …], "t": "p/q", "z": ["p/q", …]}], "monomials": [[i, "p/q"], …]}`;
/// a term may give a log-space locus `"w": [x, …]` instead of `"z"`.
pub fn decomposition_from_json(a: &SupportSet, v: Value) -> Result<SoncDecomposition> {
    let d: DecompositionJson = parse(v)?;
    let mut out = SoncDecomposition::default();
    for t in d.terms {
        let mut support = t.circuit.clone();
        support.sort_unstable();
        if support.iter().any(|&i| i >= a.len()) {
            return Err(SoncError::LengthMismatch { expected: a.len(), got: support.iter().max().unwrap() + 1 });
        }
        let circuit = Circuit::from_support(a, &support)
            .ok_or_else(|| SoncError::InvalidSupport(format!("{:?} is not a circuit", t.circuit)))?;
        let locus = match (t.z, t.w) {
            (Some(z), None) => {
                let z: Vec<Rat> = z.iter().map(serde_rat::from_value).collect::<Result<_>>()?;
                if z.len() != a.n() {
                    return Err(SoncError::InvalidToricPoint(a.n()));
                }
                Locus::Toric(ToricPoint::new(z)?)
            }
            (None, Some(w)) if w.len() == a.n() => Locus::Log(w),
            (None, Some(_)) => return Err(SoncError::InvalidToricPoint(a.n())),
            _ => return Err(SoncError::Parse("each term needs exactly one of \"z\" or \"w\"".into())),
        };
        out.agiform_terms.push(Agiform { circuit, t: t.t, locus });
    }
    for (i, c) in d.monomials {
        out.monomial_terms.push((i, serde_rat::from_value(&c)?));
    }
    out.validate()?;
    Ok(out)
}

pub fn decomposition_to_json(dec: &SoncDecomposition) -> Value {
    let terms: Vec<TermJson> = dec
        .agiform_terms
        .iter()
        .map(|g| {
            let (z, w) = match &g.locus {
                Locus::Toric(p) => (Some(p.z.iter().map(|x| Value::String(fmt_rat(x))).collect()), None),
                Locus::Log(w) => (None, Some(w.clone())),
            };
            TermJson { circuit: g.circuit.support.clone(), t: g.t.clone(), z, w }
        })
        .collect();
    let monomials = dec.monomial_terms.iter().map(|(i, c)| (*i, Value::String(fmt_rat(c)))).collect();
    serde_json::to_value(DecompositionJson { terms, monomials }).expect("decompositions serialize")
}

/// Reads `{"support": …, "coeffs": […]}` (with `"mode": "float"` for floating coefficients)
/// or `{"support": …, "terms": …, "monomials": …}`.
pub fn sum_from_json(v: Value) -> Result<ExponentialSum> {
    let obj = v.as_object().ok_or_else(|| SoncError::Parse("expected a JSON object".into()))?;
    let support = Arc::new(support_from_json(
        obj.get("support").cloned().ok_or_else(|| SoncError::Parse("missing \"support\"".into()))?,
    )?);
    if obj.contains_key("terms") {
        let dec = decomposition_from_json(&support, v)?;
        return assemble(&support, &dec);
    }
    let coeffs = obj.get("coeffs").cloned().ok_or_else(|| SoncError::Parse("missing \"coeffs\"".into()))?;
    match obj.get("mode").and_then(Value::as_str) {
        Some("float") => ExponentialSum::float(support, parse(coeffs)?),
        None | Some("exact") => ExponentialSum::exact(support, rats_from_json(coeffs)?),
        Some(other) => Err(SoncError::Parse(format!("unknown mode {other:?}"))),
    }
}

pub fn sum_to_json(f: &ExponentialSum) -> Value {
    let support = serde_json::to_value(&*f.support).expect("supports serialize");
    match &f.coeffs {
        Coeffs::Exact(c) => json!({ "support": support, "coeffs": rats_to_json(c) }),
        Coeffs::Float(c) => json!({ "support": support, "mode": "float", "coeffs": c }),
    }
}

pub fn rats_to_json(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(fmt_rat(x))).collect())
}

/// A regular subdivision named by its support and lifting weights.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartSpec {
    pub support: SupportSet,
    pub weights: WeightVector,
}

impl ChartSpec {
    pub fn from_json(v: Value) -> Result<Self> {
        let c: ChartSpec = parse(v)?;
        if c.weights.len() != c.support.len() {
            return Err(SoncError::LengthMismatch { expected: c.support.len(), got: c.weights.len() });
        }
        Ok(c)
    }
}

pub fn to_pretty<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("values serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rat::{int, ints, rat};

    #[test]
    fn support_round_trip() {
        let a = fixtures::planar_six();
        let v = serde_json::to_value(&a).unwrap();
        assert_eq!(v["points"][1], json!(["2", "0"]));
        assert_eq!(support_from_json(v).unwrap(), a);
        let parsed = support_from_json(json!({"n": 1, "points": [[0], ["1/2"], [1]]})).unwrap();
        assert_eq!(parsed.point(1), &vec![rat(1, 2)]);
        assert!(support_from_json(json!({"n": 1, "points": [[0], [0]]})).is_err());
    }

    #[test]
    fn decomposition_round_trip() {
        let a = Arc::new(SupportSet::univariate(&[0, 2, 3]).unwrap());
        let v = json!({"terms": [{"circuit": [0, 1, 2], "t": "1", "z": ["1"]}], "monomials": [[1, "1/2"]]});
        let dec = decomposition_from_json(&a, v.clone()).unwrap();
        assert_eq!(decomposition_to_json(&dec), v);
        let f = assemble(&a, &dec).unwrap();
        assert_eq!(f.exact_coeffs().unwrap(), &[int(1), rat(-5, 2), int(2)][..]);
    }

    #[test]
    fn decomposition_errors() {
        let a = SupportSet::univariate(&[0, 1, 2, 3]).unwrap();
        let neg = json!({"terms": [{"circuit": [0, 1, 2], "t": "-1", "z": ["1"]}]});
        assert_eq!(decomposition_from_json(&a, neg).unwrap_err(), SoncError::NegativeScale);
        let neither = json!({"terms": [{"circuit": [0, 1, 2], "t": "1"}]});
        assert!(matches!(decomposition_from_json(&a, neither).unwrap_err(), SoncError::Parse(_)));
        let wrong = json!({"terms": [{"circuit": [0, 9], "t": "1", "z": ["1"]}]});
        assert!(decomposition_from_json(&a, wrong).is_err());
    }

    #[test]
    fn sums_round_trip() {
        let a = Arc::new(fixtures::motzkin());
        let f = ExponentialSum::exact(a.clone(), ints(&[1, 1, 1, -3])).unwrap();
        assert_eq!(sum_from_json(sum_to_json(&f)).unwrap(), f);
        let g = ExponentialSum::float(a, vec![1.0, 1.0, 1.0, -2.5]).unwrap();
        let v = sum_to_json(&g);
        assert_eq!(v["mode"], "float");
        assert_eq!(sum_from_json(v).unwrap(), g);
    }

    #[test]
    fn sum_from_terms() {
        let v = json!({
            "support": {"n": 1, "points": [[0], [2], [3]]},
            "terms": [{"circuit": [0, 1, 2], "t": "1", "w": [0.0]}]
        });
        let f = sum_from_json(v).unwrap();
        let c = f.coeffs.to_f64();
        assert!((c[1] + 3.0).abs() < 1e-12);
    }

    #[test]
    fn chart_spec() {
        let v = json!({"support": serde_json::to_value(fixtures::planar_six()).unwrap(), "weights": ["0", "1", "1", "0", "0", "0"]});
        let c = ChartSpec::from_json(v).unwrap();
        assert_eq!(c.weights, WeightVector::from_ints(&[0, 1, 1, 0, 0, 0]));
        let short = json!({"support": serde_json::to_value(fixtures::motzkin()).unwrap(), "weights": [0]});
        assert!(ChartSpec::from_json(short).is_err());
    }
}
