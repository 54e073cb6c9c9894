//! JSON formats for states and measurements, plus a deterministic writer.
//!
//! States:
//!
//! ```json
//! {"a": {"re": [1, 0], "im": [0, 0]}, "b": {"re": [0.6, 0.8]}}
//! {"canonical": {"alpha1": 0.5, "alpha2": 0.5}}
//! {"mixed": {"p1": 0, "p2": 0, "alpha1": 0.6, "alpha2": 0.6, "beta1": 0.4, "beta2": 0.4}}
//! ```
//!
//! Vector amplitudes are normalized on input; `im` may be omitted. A
//! `canonical` entry stands for the state
//! `(sqrt(1-alpha1), sqrt(alpha1)) (x) (sqrt(1-alpha2), sqrt(alpha2))`, so
//! `{"alpha1": 0, "alpha2": 0}` is `|0>|0>`. A `mixed` entry describes a
//! pair; in the first slot it yields `rho1`, in the second `rho2`.
//!
//! Measurements:
//!
//! ```json
//! {"effects": [{"matrix": {"re": [[...]], "im": [[...]]},
//!               "certificate": {"T": {...}, "Tprime": {...}}}]}
//! ```
//!
//! Output is emitted with sorted keys and every float printed with 17
//! significant digits, so files are byte-stable and parse back to the same
//! binary values.

use std::io;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::{json, Map, Value};

use crate::cone::DecompositionCertificate;
use crate::discrimination::{Effect, Measurement};
use crate::error::{Error, Result};
use crate::linalg::{c, HermitianMatrix, C64};
use crate::states::{ProductMixedState, PureProductState, PureState};

fn jerr(msg: impl Into<String>) -> Error {
    Error::Json(msg.into())
}

#[derive(Clone, Debug, PartialEq)]
pub enum StateSpec {
    Product(PureProductState),
    Canonical { alpha1: f64, alpha2: f64 },
    Mixed(ProductMixedState),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    First,
    Second,
}

impl StateSpec {
    /// Pure product form, when there is one.
    pub fn product(&self) -> Result<Option<PureProductState>> {
        match self {
            StateSpec::Product(p) => Ok(Some(p.clone())),
            StateSpec::Canonical { alpha1, alpha2 } => {
                let side = |a: f64| PureState::from_real(&[(1.0 - a).sqrt(), a.sqrt()]);
                Ok(Some(PureProductState::new(side(*alpha1)?, side(*alpha2)?)))
            }
            StateSpec::Mixed(_) => Ok(None),
        }
    }

    pub fn density(&self, slot: Slot) -> Result<HermitianMatrix> {
        match self {
            StateSpec::Mixed(m) => {
                let (r1, r2) = m.densities();
                Ok(if slot == Slot::First { r1 } else { r2 })
            }
            other => Ok(other.product()?.expect("pure form").density()),
        }
    }
}

fn number(v: &Value, what: &str) -> Result<f64> {
    v.as_f64().ok_or_else(|| jerr(format!("{what}: expected a number")))
}

fn field(obj: &Map<String, Value>, key: &str) -> Result<f64> {
    number(obj.get(key).ok_or_else(|| jerr(format!("missing field `{key}`")))?, key)
}

fn real_list(v: &Value, what: &str) -> Result<Vec<f64>> {
    v.as_array()
        .ok_or_else(|| jerr(format!("{what}: expected an array")))?
        .iter()
        .map(|x| number(x, what))
        .collect()
}

fn complex_vector(v: &Value) -> Result<Vec<C64>> {
    let obj = v.as_object().ok_or_else(|| jerr("vector: expected {\"re\": [...], \"im\": [...]}"))?;
    let re = real_list(obj.get("re").ok_or_else(|| jerr("vector: missing `re`"))?, "re")?;
    let im = match obj.get("im") {
        Some(x) => real_list(x, "im")?,
        None => vec![0.0; re.len()],
    };
    if im.len() != re.len() {
        return Err(jerr("vector: `re` and `im` lengths differ"));
    }
    Ok(re.into_iter().zip(im).map(|(a, b)| c(a, b)).collect())
}

pub fn parse_state(v: &Value) -> Result<StateSpec> {
    let obj = v.as_object().ok_or_else(|| jerr("state: expected an object"))?;
    if let Some(cn) = obj.get("canonical") {
        let cn = cn.as_object().ok_or_else(|| jerr("canonical: expected an object"))?;
        let (alpha1, alpha2) = (field(cn, "alpha1")?, field(cn, "alpha2")?);
        for (name, a) in [("alpha1", alpha1), ("alpha2", alpha2)] {
            if !(0.0..=1.0).contains(&a) {
                return Err(Error::Domain { name, value: a });
            }
        }
        return Ok(StateSpec::Canonical { alpha1, alpha2 });
    }
    if let Some(mx) = obj.get("mixed") {
        let mx = mx.as_object().ok_or_else(|| jerr("mixed: expected an object"))?;
        let m = ProductMixedState::new(
            field(mx, "p1")?,
            field(mx, "p2")?,
            field(mx, "alpha1")?,
            field(mx, "alpha2")?,
            field(mx, "beta1")?,
            field(mx, "beta2")?,
        )?;
        return Ok(StateSpec::Mixed(m));
    }
    let a = obj.get("a").ok_or_else(|| jerr("state: expected `a`/`b`, `canonical` or `mixed`"))?;
    let b = obj.get("b").ok_or_else(|| jerr("state: missing `b`"))?;
    Ok(StateSpec::Product(PureProductState::new(
        PureState::normalized(complex_vector(a)?)?,
        PureState::normalized(complex_vector(b)?)?,
    )))
}

pub fn parse_state_str(s: &str) -> Result<StateSpec> {
    let v: Value = serde_json::from_str(s).map_err(|e| jerr(e.to_string()))?;
    parse_state(&v)
}

pub fn vector_to_json(v: &[C64]) -> Value {
    json!({
        "re": v.iter().map(|z| z.re).collect::<Vec<_>>(),
        "im": v.iter().map(|z| z.im).collect::<Vec<_>>(),
    })
}

pub fn product_state_to_json(s: &PureProductState) -> Value {
    json!({ "a": vector_to_json(s.a.amplitudes()), "b": vector_to_json(s.b.amplitudes()) })
}

pub fn matrix_to_json(m: &HermitianMatrix) -> Value {
    let n = m.dim();
    let rows = |f: fn(&C64) -> f64| -> Vec<Vec<f64>> {
        (0..n).map(|i| (0..n).map(|j| f(&m.get(i, j))).collect()).collect()
    };
    // `+ 0.0` folds negative zero so output does not depend on rounding noise.
    json!({ "re": rows(|z| z.re + 0.0), "im": rows(|z| z.im + 0.0) })
}

fn real_grid(v: &Value, what: &str) -> Result<Vec<Vec<f64>>> {
    v.as_array()
        .ok_or_else(|| jerr(format!("{what}: expected an array of rows")))?
        .iter()
        .map(|row| real_list(row, what))
        .collect()
}

pub fn matrix_from_json(v: &Value) -> Result<HermitianMatrix> {
    let obj = v.as_object().ok_or_else(|| jerr("matrix: expected {\"re\": [[...]], \"im\": [[...]]}"))?;
    let re = real_grid(obj.get("re").ok_or_else(|| jerr("matrix: missing `re`"))?, "re")?;
    let n = re.len();
    let im = match obj.get("im") {
        Some(x) => real_grid(x, "im")?,
        None => vec![vec![0.0; n]; n],
    };
    if im.len() != n || re.iter().chain(&im).any(|r| r.len() != n) {
        return Err(jerr("matrix: `re` and `im` must both be square of equal size"));
    }
    let data = re.iter().flatten().zip(im.iter().flatten()).map(|(&a, &b)| c(a, b)).collect();
    HermitianMatrix::new(n, data)
}

pub fn measurement_to_json(m: &Measurement) -> Value {
    let effects: Vec<Value> = m
        .effects
        .iter()
        .map(|e| {
            let mut obj = Map::new();
            obj.insert("matrix".into(), matrix_to_json(&e.matrix));
            if let Some(cert) = &e.certificate {
                obj.insert(
                    "certificate".into(),
                    json!({ "T": matrix_to_json(&cert.t), "Tprime": matrix_to_json(&cert.t_prime) }),
                );
            }
            Value::Object(obj)
        })
        .collect();
    json!({ "effects": effects })
}

pub fn measurement_from_json(v: &Value) -> Result<Measurement> {
    let effects = v
        .get("effects")
        .and_then(Value::as_array)
        .ok_or_else(|| jerr("measurement: missing `effects` array"))?;
    let effects = effects
        .iter()
        .map(|e| {
            let matrix = matrix_from_json(e.get("matrix").ok_or_else(|| jerr("effect: missing `matrix`"))?)?;
            let certificate = match e.get("certificate") {
                None | Some(Value::Null) => None,
                Some(cert) => Some(DecompositionCertificate {
                    t: matrix_from_json(cert.get("T").ok_or_else(|| jerr("certificate: missing `T`"))?)?,
                    t_prime: matrix_from_json(cert.get("Tprime").ok_or_else(|| jerr("certificate: missing `Tprime`"))?)?,
                }),
            };
            Ok(Effect { matrix, certificate })
        })
        .collect::<Result<Vec<_>>>()?;
    Measurement::new(effects)
}

/// Pretty printing with floats at 17 significant digits.
struct SeventeenDigits<'a> {
    pretty: PrettyFormatter<'a>,
}

macro_rules! delegate {
    ($($name:ident),*) => {$(
        fn $name<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
            self.pretty.$name(w)
        }
    )*};
}

macro_rules! delegate_first {
    ($($name:ident),*) => {$(
        fn $name<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
            self.pretty.$name(w, first)
        }
    )*};
}

impl Formatter for SeventeenDigits<'_> {
    delegate!(begin_array, end_array, end_array_value, begin_object, end_object, begin_object_value, end_object_value);
    delegate_first!(begin_array_value, begin_object_key);

    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{:.16e}", value)
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }
}

/// Deterministic serialization: sorted keys, 17 significant digits,
/// two-space indentation, trailing newline.
pub fn to_canonical_string<T: Serialize + ?Sized>(value: &T) -> String {
    // Going through `Value` sorts object keys.
    let value = serde_json::to_value(value).expect("serializable");
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SeventeenDigits { pretty: PrettyFormatter::new() });
    value.serialize(&mut ser).expect("writing to a Vec cannot fail");
    out.push(b'\n');
    String::from_utf8(out).expect("JSON is UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discrimination::construct_measurement;
    use crate::states::CanonicalPair;
    use proptest::prelude::*;

    #[test]
    fn parses_all_state_forms() {
        let p = parse_state_str(r#"{"a": {"re": [1, 1]}, "b": {"re": [0, 0], "im": [1, 0]}}"#).unwrap();
        let StateSpec::Product(s) = &p else { panic!() };
        assert!((s.a.amplitudes()[0].re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert_eq!(s.b.amplitudes()[0], c(0.0, 1.0));

        let cn = parse_state_str(r#"{"canonical": {"alpha1": 0.5, "alpha2": 0.25}}"#).unwrap();
        assert_eq!(cn, StateSpec::Canonical { alpha1: 0.5, alpha2: 0.25 });
        let prod = cn.product().unwrap().unwrap();
        assert!((prod.b.amplitudes()[1].re - 0.5).abs() < 1e-15);

        let mx = parse_state_str(
            r#"{"mixed": {"p1": 0.1, "p2": 0, "alpha1": 0.5, "alpha2": 0.5, "beta1": 0.5, "beta2": 0.2}}"#,
        )
        .unwrap();
        assert!(matches!(mx, StateSpec::Mixed(_)));
        assert_eq!(mx.density(Slot::First).unwrap().get(0, 0).re, 0.9);
    }

    #[test]
    fn rejects_malformed_states() {
        for bad in [
            "[]",
            r#"{"a": {"re": [1]}}"#,
            r#"{"a": {"re": [0, 0]}, "b": {"re": [1]}}"#,
            r#"{"a": {"re": [1, 0], "im": [0]}, "b": {"re": [1]}}"#,
            r#"{"canonical": {"alpha1": 1.5, "alpha2": 0}}"#,
            r#"{"mixed": {"p1": 0}}"#,
            "not json",
        ] {
            assert!(parse_state_str(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn measurement_file_round_trips_exactly() {
        let m = construct_measurement(&CanonicalPair::from_alphas(0.6, 0.7).unwrap()).unwrap();
        let text = to_canonical_string(&measurement_to_json(&m));
        let back = measurement_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        for (a, b) in m.effects.iter().zip(&back.effects) {
            assert_eq!(a.matrix.entries(), b.matrix.entries());
            let (ca, cb) = (a.certificate.as_ref().unwrap(), b.certificate.as_ref().unwrap());
            assert_eq!(ca.t.entries(), cb.t.entries());
        }
        assert_eq!(to_canonical_string(&measurement_to_json(&back)), text);
    }

    #[test]
    fn canonical_output_shape() {
        let s = to_canonical_string(&json!({"b": 0.5, "a": [1.0, 2u32]}));
        assert_eq!(s, "{\n  \"a\": [\n    1.0000000000000000e0,\n    2\n  ],\n  \"b\": 5.0000000000000000e-1\n}\n");
    }

    proptest! {
        #[test]
        fn floats_round_trip_bit_exact(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
            let text = to_canonical_string(&json!({ "x": x }));
            let v: Value = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(v["x"].as_f64().unwrap().to_bits(), x.to_bits());
        }
    }
}
