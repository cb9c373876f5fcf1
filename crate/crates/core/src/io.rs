//! JSON for forms and structures.
//!
//! A form is `{"dim": 6, "degree": 3, "coeffs": {"124": "3/2", ...}}` with
//! 1-based digit strings; rationals are `"p/q"` strings, floats are plain
//! numbers. `dim` may be omitted and is then the largest index used.

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::exterior::{Form, MultiIndex};
use crate::scalar::{Scalar, Q};

/// Scalars with a JSON representation.
pub trait JsonScalar: Scalar {
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Option<Self>;
}

impl JsonScalar for Q {
    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }

    fn from_json(v: &Value) -> Option<Self> {
        match v {
            Value::String(s) => Q::from_str(s.trim()).ok(),
            Value::Number(n) => n.as_i64().map(Q::from_i64),
            _ => None,
        }
    }
}

impl JsonScalar for f64 {
    fn to_json(&self) -> Value {
        serde_json::Number::from_f64(*self).map_or(Value::Null, Value::Number)
    }

    fn from_json(v: &Value) -> Option<Self> {
        match v {
            Value::Number(n) => n.as_f64(),
            Value::String(s) => Q::from_str(s.trim())
                .ok()
                .map(|q| q.to_f64())
                .or_else(|| s.trim().parse().ok()),
            _ => None,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct FormRepr {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dim: Option<usize>,
    degree: usize,
    coeffs: BTreeMap<String, Value>,
}

impl<S: JsonScalar> Serialize for Form<S> {
    fn serialize<Z: Serializer>(&self, ser: Z) -> Result<Z::Ok, Z::Error> {
        let coeffs = self.terms().map(|(m, c)| (m.digits(), c.to_json())).collect();
        FormRepr {
            dim: Some(self.dim()),
            degree: self.degree(),
            coeffs,
        }
        .serialize(ser)
    }
}

impl<'de, S: JsonScalar> Deserialize<'de> for Form<S> {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let r = FormRepr::deserialize(de)?;
        let mut terms = Vec::new();
        let mut top = r.degree;
        for (k, v) in &r.coeffs {
            let (m, sign) = MultiIndex::parse_digits(k).ok_or_else(|| D::Error::custom(format!("bad multi-index {k:?}")))?;
            if m.degree() != r.degree {
                return Err(D::Error::custom(format!("{k:?} is not of degree {}", r.degree)));
            }
            let c = S::from_json(v).ok_or_else(|| D::Error::custom(format!("bad coefficient for {k:?}")))?;
            top = top.max(m.indices().last().map_or(0, |i| i + 1));
            terms.push((m, if sign > 0 { c } else { -c }));
        }
        let dim = r.dim.unwrap_or(top);
        if dim < top || dim > crate::exterior::MAX_DIM {
            return Err(D::Error::custom(format!("dimension {dim} does not fit the indices")));
        }
        let mut f = Form::zero(dim, r.degree);
        for (m, c) in terms {
            f.add_term(m.0, c);
        }
        Ok(f)
    }
}

/// `{"omega": Form, "psiPlus": Form}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: JsonScalar")]
pub struct Su3Json<S> {
    pub omega: Form<S>,
    #[serde(rename = "psiPlus")]
    pub psi_plus: Form<S>,
}

/// `{"alpha", "omega1", "omega2", "omega3"}` with optional `t` and `phi`
/// describing a circle bundle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: JsonScalar")]
pub struct Su2Json<S> {
    pub alpha: Form<S>,
    pub omega1: Form<S>,
    pub omega2: Form<S>,
    pub omega3: Form<S>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_scalar")]
    pub t: Option<S>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<Form<S>>,
}

impl<S: JsonScalar> Su2Json<S> {
    pub fn new(alpha: &Form<S>, omega: &[Form<S>; 3]) -> Self {
        Su2Json {
            alpha: alpha.clone(),
            omega1: omega[0].clone(),
            omega2: omega[1].clone(),
            omega3: omega[2].clone(),
            t: None,
            phi: None,
        }
    }

    pub fn omega(&self) -> [Form<S>; 3] {
        [self.omega1.clone(), self.omega2.clone(), self.omega3.clone()]
    }
}

mod opt_scalar {
    use super::*;

    pub fn serialize<S: JsonScalar, Z: Serializer>(v: &Option<S>, ser: Z) -> Result<Z::Ok, Z::Error> {
        v.as_ref().map(JsonScalar::to_json).serialize(ser)
    }

    pub fn deserialize<'de, S: JsonScalar, D: Deserializer<'de>>(de: D) -> Result<Option<S>, D::Error> {
        let v = Option::<Value>::deserialize(de)?;
        match v {
            None | Some(Value::Null) => Ok(None),
            Some(v) => S::from_json(&v)
                .map(Some)
                .ok_or_else(|| D::Error::custom("bad scalar")),
        }
    }
}

/// Parses a scalar given on the command line or in JSON (`"3/2"`, `1.5`).
pub fn parse_scalar<S: JsonScalar>(s: &str) -> Option<S> {
    S::from_json(&Value::String(s.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    #[test]
    fn rational_form_round_trip() {
        let f: Form<Q> = Form::from_rational_digits(6, &[(q(3, 2), "124"), (q(-1, 1), "356")]);
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"dim":6,"degree":3,"coeffs":{"124":"3/2","356":"-1"}}"#);
        assert_eq!(serde_json::from_str::<Form<Q>>(&s).unwrap(), f);
    }

    #[test]
    fn dimension_is_inferred_and_unsorted_indices_carry_sign() {
        let f: Form<Q> = serde_json::from_str(r#"{"degree":2,"coeffs":{"21":"1/3"}}"#).unwrap();
        assert_eq!(f.dim(), 2);
        assert_eq!(f, Form::from_rational_digits(2, &[(q(-1, 3), "12")]));
        assert!(serde_json::from_str::<Form<Q>>(r#"{"degree":2,"coeffs":{"1":"1"}}"#).is_err());
    }

    #[test]
    fn floats_are_numbers() {
        let f: Form<f64> = Form::from_digits(3, &[(2, "13")]);
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"dim":3,"degree":2,"coeffs":{"13":2.0}}"#);
        let g: Form<f64> = serde_json::from_str(r#"{"degree":2,"coeffs":{"13":"1/4"}}"#).unwrap();
        assert_eq!(g.coeff(0b101), 0.25);
    }

    #[test]
    fn su2_json_with_bundle_data() {
        let (a, w) = crate::stable::standard_su2::<Q>();
        let mut j = Su2Json::new(&a, &w);
        j.t = Some(q(2, 1));
        let s = serde_json::to_string(&j).unwrap();
        let back: Su2Json<Q> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, j);
        assert!(s.contains(r#""t":"2""#));
    }
}
