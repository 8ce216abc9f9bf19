//! Serialization helpers shared by report types.

/// Serializes `f64` as a JSON number, or as `"inf"`, `"-inf"`, `"nan"` when
/// non-finite. Deserialization accepts both forms.
pub mod serde_extended_f64 {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else {
            s.serialize_str(to_token(*x))
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(x),
            Repr::Str(s) => {
                from_token(&s).ok_or_else(|| de::Error::custom(format!("expected number or inf, got {s:?}")))
            }
        }
    }

    pub fn to_token(x: f64) -> &'static str {
        if x.is_nan() {
            "nan"
        } else if x > 0.0 {
            "inf"
        } else {
            "-inf"
        }
    }

    pub fn from_token(s: &str) -> Option<f64> {
        match s {
            "inf" | "+inf" | "Infinity" => Some(f64::INFINITY),
            "-inf" | "-Infinity" => Some(f64::NEG_INFINITY),
            "nan" | "NaN" => Some(f64::NAN),
            _ => s.parse().ok(),
        }
    }
}

/// Formats a float for CSV output; non-finite values use the JSON tokens.
pub fn csv_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x}")
    } else {
        serde_extended_f64::to_token(x).to_string()
    }
}
