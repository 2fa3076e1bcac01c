//! Numeric output at 12 significant digits.

use netaccess::io::format_sig;
use serde_json::Value;

pub const DIGITS: usize = 12;

pub fn sig(x: f64) -> String {
    format_sig(x, DIGITS)
}

/// JSON number carrying exactly the digits `sig` prints.
pub fn num(x: f64) -> Value {
    let rounded: f64 = sig(x).parse().unwrap_or(x);
    serde_json::Number::from_f64(rounded).map_or(Value::Null, Value::Number)
}
