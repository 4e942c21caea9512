//! Scalar field abstraction.
//!
//! Every computation in this crate is generic over [`Scalar`], which is
//! implemented for `f64` and [`num_complex::Complex64`]. The field is chosen
//! once per run (see [`Field`]); individual values never switch field.

use std::fmt::{Debug, Display};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex64;
use serde_json::Value;

/// Run-level scalar field selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Field {
    #[serde(rename = "real")]
    Real,
    #[serde(rename = "complex")]
    Complex,
}

impl Display for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Field::Real => write!(f, "real"),
            Field::Complex => write!(f, "complex"),
        }
    }
}

impl std::str::FromStr for Field {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "real" => Ok(Field::Real),
            "complex" => Ok(Field::Complex),
            other => Err(format!("unknown field {other:?}, expected \"real\" or \"complex\"")),
        }
    }
}

/// A field element: real or complex double-precision value.
///
/// Conjugation and modulus are part of the trait so that the sesquilinear
/// inner product and pivoted elimination can be written once for both fields.
pub trait Scalar:
    Copy
    + PartialEq
    + Debug
    + Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + Send
    + Sync
    + 'static
{
    const FIELD: Field;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_f64(x: f64) -> Self;

    /// Complex conjugate (identity for reals).
    fn conj(self) -> Self;
    /// Modulus |x| as a nonnegative real.
    fn modulus(self) -> f64;
    /// Squared modulus, avoiding the square root.
    fn modulus_sq(self) -> f64;
    /// Integer power.
    fn powi(self, n: i32) -> Self;
    fn is_finite(self) -> bool;

    /// Text form with 17 significant digits, invertible by [`Scalar::parse`].
    fn format_full(self) -> String;
    /// Parse the CSV component form: a float, or `a+bi` / `a-bi` / `bi` when complex.
    fn parse(text: &str) -> Option<Self>;

    /// JSON encoding: a number for reals, a `[re, im]` pair for complex values.
    fn to_json(self) -> Value;
    fn from_json(value: &Value) -> Option<Self>;
}

/// 17-significant-digit rendering of a double; round-trips exactly.
pub(crate) fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn json_number(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

impl Scalar for f64 {
    const FIELD: Field = Field::Real;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_f64(x: f64) -> Self {
        x
    }
    fn conj(self) -> Self {
        self
    }
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn modulus_sq(self) -> f64 {
        self * self
    }
    fn powi(self, n: i32) -> Self {
        f64::powi(self, n)
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }

    fn format_full(self) -> String {
        format_f64(self)
    }

    fn parse(text: &str) -> Option<Self> {
        text.trim().parse::<f64>().ok()
    }

    fn to_json(self) -> Value {
        json_number(self)
    }

    fn from_json(value: &Value) -> Option<Self> {
        value.as_f64()
    }
}

impl Scalar for Complex64 {
    const FIELD: Field = Field::Complex;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_f64(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn modulus_sq(self) -> f64 {
        self.norm_sqr()
    }
    fn powi(self, n: i32) -> Self {
        Complex64::powi(&self, n)
    }
    fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    fn format_full(self) -> String {
        if self.im == 0.0 {
            format_f64(self.re)
        } else if self.im < 0.0 {
            format!("{}-{}i", format_f64(self.re), format_f64(-self.im))
        } else {
            format!("{}+{}i", format_f64(self.re), format_f64(self.im))
        }
    }

    fn parse(text: &str) -> Option<Self> {
        parse_complex(text.trim())
    }

    fn to_json(self) -> Value {
        Value::Array(vec![json_number(self.re), json_number(self.im)])
    }

    fn from_json(value: &Value) -> Option<Self> {
        match value {
            Value::Array(parts) if parts.len() == 2 => {
                Some(Complex64::new(parts[0].as_f64()?, parts[1].as_f64()?))
            }
            // Plain numbers are accepted as real values in complex mode.
            other => other.as_f64().map(|re| Complex64::new(re, 0.0)),
        }
    }
}

/// Parse `a+bi`, `a-bi`, `bi`, or a plain real component.
fn parse_complex(text: &str) -> Option<Complex64> {
    if text.is_empty() {
        return None;
    }
    if let Some(body) = text.strip_suffix(['i', 'I']) {
        // Split at the last +/- that is not an exponent sign and not leading.
        let bytes = body.as_bytes();
        let mut split = None;
        for pos in (1..bytes.len()).rev() {
            let c = bytes[pos] as char;
            if (c == '+' || c == '-') && !matches!(bytes[pos - 1] as char, 'e' | 'E') {
                split = Some(pos);
                break;
            }
        }
        match split {
            Some(pos) => {
                let re = body[..pos].trim().parse::<f64>().ok()?;
                let sign = if bytes[pos] as char == '-' { -1.0 } else { 1.0 };
                let imag_text = body[pos + 1..].trim();
                let im = if imag_text.is_empty() {
                    1.0
                } else {
                    imag_text.parse::<f64>().ok()?
                };
                Some(Complex64::new(re, sign * im))
            }
            None => {
                let body = body.trim();
                let im = match body {
                    "" | "+" => 1.0,
                    "-" => -1.0,
                    other => other.parse::<f64>().ok()?,
                };
                Some(Complex64::new(0.0, im))
            }
        }
    } else {
        text.parse::<f64>().ok().map(|re| Complex64::new(re, 0.0))
    }
}
