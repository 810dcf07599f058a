//! Report records and number formatting shared by every output.
//!
//! JSON numbers carry 17 significant digits, CSV numbers 12. Non-finite
//! values are written as the strings `inf`, `-inf` and `nan`.

use std::collections::BTreeMap;
use std::io;

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::Value;

use crate::{Result, NORMALIZATION_NOTE, VERSION};

/// `%.{digits}g`-style formatting: shortest of positional and scientific, trailing zeros trimmed.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("LowerExp has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        format!("{}e{}", trim_zeros(mantissa), exp)
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// CSV cell for a float: 12 significant digits.
pub fn csv_f64(x: f64) -> String {
    fmt_sig(x, 12)
}

/// Serde adapter for `f64` fields that may be infinite.
pub mod ext_f64 {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else {
            s.serialize_str(&super::fmt_sig(*x, 1))
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(x),
            Raw::Text(t) => match t.trim() {
                "inf" | "+inf" | "∞" | "infinity" => Ok(f64::INFINITY),
                "-inf" | "-∞" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => other.parse().map_err(serde::de::Error::custom),
            },
        }
    }
}

/// A JSON value for a float, with non-finite values as strings.
pub fn json_f64(x: f64) -> Value {
    if x.is_finite() {
        Value::from(x)
    } else {
        Value::String(fmt_sig(x, 1))
    }
}

/// Pretty printer that writes floats with 17 significant digits.
struct SigFormatter<'a> {
    inner: PrettyFormatter<'a>,
}

macro_rules! delegate {
    ($($name:ident($($arg:ident: $ty:ty),*)),* $(,)?) => {
        $(
            fn $name<W: ?Sized + io::Write>(&mut self, w: &mut W $(, $arg: $ty)*) -> io::Result<()> {
                self.inner.$name(w $(, $arg)*)
            }
        )*
    };
}

impl Formatter for SigFormatter<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        let mut s = fmt_sig(value, 17);
        if !s.contains(['.', 'e']) {
            s.push_str(".0");
        }
        w.write_all(s.as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }

    delegate! {
        begin_array(),
        end_array(),
        begin_array_value(first: bool),
        end_array_value(),
        begin_object(),
        end_object(),
        begin_object_key(first: bool),
        begin_object_value(),
        end_object_value(),
    }
}

/// Serializes to pretty JSON with 17-digit floats and a trailing newline.
pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let fmt = SigFormatter { inner: PrettyFormatter::with_indent(b"  ") };
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, fmt);
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

/// Size and seed of the instance a report was computed on.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Instance {
    pub x_size: usize,
    pub y_size: usize,
    pub seed: Option<u64>,
    pub draw: Option<usize>,
}

/// Result of one inequality or identity probe.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ProbeReport {
    pub probe: String,
    pub params: BTreeMap<String, Value>,
    pub instance: Instance,
    #[serde(with = "ext_f64")]
    pub lhs: f64,
    #[serde(with = "ext_f64")]
    pub rhs: f64,
    /// `lhs / rhs`; `0/0` is reported as 1 and flagged `degenerate`.
    #[serde(with = "ext_f64")]
    pub ratio: f64,
    /// Which comparison is under test, e.g. `lhs <~ rhs`.
    pub claim: String,
    pub method: String,
    pub flags: Vec<String>,
    pub discretization: BTreeMap<String, Value>,
    pub normalization: String,
    pub version: String,
}

impl ProbeReport {
    pub fn new(probe: &str, lhs: f64, rhs: f64) -> Self {
        let (ratio, degenerate) = ratio_of(lhs, rhs);
        let mut flags = Vec::new();
        if degenerate {
            flags.push("degenerate".to_string());
        }
        Self {
            probe: probe.to_string(),
            params: BTreeMap::new(),
            instance: Instance::default(),
            lhs,
            rhs,
            ratio,
            claim: String::new(),
            method: "exact".to_string(),
            flags,
            discretization: BTreeMap::new(),
            normalization: NORMALIZATION_NOTE.to_string(),
            version: VERSION.to_string(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn param_f64(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), json_f64(value));
        self
    }

    pub fn flag(mut self, flag: &str) -> Self {
        if !self.flags.iter().any(|f| f == flag) {
            self.flags.push(flag.to_string());
        }
        self
    }

    pub fn is_degenerate(&self) -> bool {
        self.flags.iter().any(|f| f == "degenerate")
    }

    pub const CSV_HEADER: [&'static str; 11] =
        ["probe", "xSize", "ySize", "seed", "draw", "lhs", "rhs", "ratio", "claim", "method", "flags"];

    pub fn csv_record(&self) -> Vec<String> {
        let opt = |o: Option<String>| o.unwrap_or_default();
        vec![
            self.probe.clone(),
            self.instance.x_size.to_string(),
            self.instance.y_size.to_string(),
            opt(self.instance.seed.map(|s| s.to_string())),
            opt(self.instance.draw.map(|d| d.to_string())),
            csv_f64(self.lhs),
            csv_f64(self.rhs),
            csv_f64(self.ratio),
            self.claim.clone(),
            self.method.clone(),
            self.flags.join(";"),
        ]
    }
}

/// `lhs / rhs` with `0/0 = 1`; the flag reports whether the convention was used.
pub fn ratio_of(lhs: f64, rhs: f64) -> (f64, bool) {
    if lhs == 0.0 && rhs == 0.0 {
        (1.0, true)
    } else {
        (lhs / rhs, false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(fmt_sig(0.1, 17), "0.10000000000000001");
        assert_eq!(fmt_sig(0.1, 12), "0.1");
        assert_eq!(fmt_sig(1.0, 12), "1");
        assert_eq!(fmt_sig(123456789012345.0, 12), "1.23456789012e14");
        assert_eq!(fmt_sig(1.5e-7, 12), "1.5e-7");
        assert_eq!(fmt_sig(-2.5e-3, 12), "-0.0025");
        assert_eq!(fmt_sig(f64::INFINITY, 12), "inf");
        assert_eq!(fmt_sig(2.0f64.sqrt(), 17).parse::<f64>().unwrap(), 2.0f64.sqrt());
    }

    #[test]
    fn json_uses_seventeen_digits_and_parses_back() {
        let r = ProbeReport::new("t", 1.0 / 3.0, f64::INFINITY).param_f64("p", 2.0);
        let text = to_json_string(&r).unwrap();
        assert!(text.contains("0.33333333333333331"), "{text}");
        assert!(text.contains("\"inf\""));
        let back: ProbeReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back.lhs, 1.0 / 3.0);
        assert!(back.rhs.is_infinite());
    }

    #[test]
    fn zero_over_zero_is_flagged() {
        let r = ProbeReport::new("t", 0.0, 0.0);
        assert_eq!(r.ratio, 1.0);
        assert!(r.is_degenerate());
    }
}
