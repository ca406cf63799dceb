//! JSON output with every float written to 17 significant digits.

use std::io;

use serde::Serialize;
use serde_json::ser::Formatter;

/// Compact output except for floats.
struct SeventeenDigits;

impl Formatter for SeventeenDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

/// Serializes `value` as one line of JSON. Non-finite floats become `null`.
pub fn to_string<T: Serialize + ?Sized>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SeventeenDigits);
    value.serialize(&mut ser).expect("in-memory JSON serialization cannot fail");
    String::from_utf8(out).expect("serde_json writes UTF-8")
}
