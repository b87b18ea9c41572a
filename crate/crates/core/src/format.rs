//! Fixed-width float formatting for tables and reports.

use std::io;

use serde::Serialize;
use serde_json::ser::{CompactFormatter, Formatter, Serializer};

/// Formats `x` with 17 significant digits.
///
/// Magnitudes in `[1e-5, 1e16)` use positional notation, everything else
/// scientific. Zero prints as `0`. Output round-trips through `str::parse`.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "NaN".to_string()
        } else if x > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        };
    }
    let sci = format!("{:.16e}", x);
    let exp: i32 = sci[sci.find('e').expect("exponent marker") + 1..]
        .parse()
        .expect("integer exponent");
    if (-5..16).contains(&exp) {
        let decimals = (16 - exp) as usize;
        format!("{:.*}", decimals, x)
    } else {
        sci
    }
}

/// Formats an optional value, leaving absent values empty.
pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

/// Compact JSON formatter that writes floats with [`fmt_f64`].
#[derive(Clone, Copy, Debug, Default)]
pub struct SignificantFormatter;

impl Formatter for SignificantFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            writer.write_all(fmt_f64(value).as_bytes())
        } else {
            CompactFormatter.write_null(writer)
        }
    }
}

/// Serializes `value` as compact JSON with 17-significant-digit floats.
pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = Serializer::with_formatter(&mut out, SignificantFormatter);
    value.serialize(&mut ser).expect("in-memory serialization");
    String::from_utf8(out).expect("JSON is UTF-8")
}
