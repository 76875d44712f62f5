//! Report formatting: every emitted number carries 17 significant digits,
//! enough to reconstruct the exact f64 bit pattern, and serialization is
//! deterministic so identical runs produce identical bytes.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter, Serializer};

use crate::error::{Error, Result};

/// Fixed-width scientific form with 17 significant digits.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

struct ReportFormatter {
    pretty: PrettyFormatter<'static>,
}

impl ReportFormatter {
    fn new() -> Self {
        Self {
            pretty: PrettyFormatter::new(),
        }
    }
}

impl Formatter for ReportFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_float(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        writer.write_all(format!("{value:.8e}").as_bytes())
    }

    fn begin_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.begin_array(writer)
    }

    fn end_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.pretty.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.begin_object(writer)
    }

    fn end_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.pretty.begin_object_key(writer, first)
    }

    fn end_object_key<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.end_object_key(writer)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.end_object_value(writer)
    }
}

/// Pretty-printed JSON with full-precision floats. Non-finite floats
/// become `null` (JSON has no other spelling for them).
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = Serializer::with_formatter(&mut out, ReportFormatter::new());
    value
        .serialize(&mut ser)
        .map_err(|e| Error::invalid(format!("serialization failed: {e}")))?;
    Ok(String::from_utf8(out).expect("serde_json emits UTF-8"))
}

/// Two-column CSV of plot-ready points under a fixed header line.
pub fn plot_csv(header: &str, points: &[(f64, f64)]) -> String {
    let mut out = String::with_capacity(header.len() + 1 + 48 * points.len());
    out.push_str(header);
    out.push('\n');
    for &(x, y) in points {
        out.push_str(&format_float(x));
        out.push(',');
        out.push_str(&format_float(y));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_is_full_precision() {
        assert_eq!(format_float(1.5), "1.5000000000000000e0");
        assert_eq!(format_float(0.25), "2.5000000000000000e-1");
        assert_eq!(format_float(-3.0), "-3.0000000000000000e0");
        let awkward = 0.1 + 0.2;
        let back: f64 = format_float(awkward).parse().unwrap();
        assert_eq!(back.to_bits(), awkward.to_bits());
    }

    #[derive(Serialize)]
    struct Sample {
        name: &'static str,
        value: f64,
        flags: Vec<bool>,
    }

    #[test]
    fn json_floats_use_full_precision() {
        let s = Sample {
            name: "x",
            value: 0.1,
            flags: vec![true, false],
        };
        let text = to_json_string(&s).unwrap();
        assert!(text.contains("1.0000000000000001e-1"), "{text}");
        assert!(text.contains("\"name\": \"x\""), "{text}");
    }

    #[test]
    fn json_output_is_deterministic() {
        let s = Sample {
            name: "repeat",
            value: std::f64::consts::PI,
            flags: vec![],
        };
        assert_eq!(to_json_string(&s).unwrap(), to_json_string(&s).unwrap());
    }

    #[test]
    fn non_finite_becomes_null() {
        #[derive(Serialize)]
        struct Bad {
            value: f64,
        }
        let text = to_json_string(&Bad { value: f64::NAN }).unwrap();
        assert!(text.contains("null"), "{text}");
    }

    #[test]
    fn plot_csv_layout() {
        let text = plot_csv("n,ratio", &[(1.0, 2.0), (2.0, 2.5)]);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], "n,ratio");
        assert_eq!(lines[1], "1.0000000000000000e0,2.0000000000000000e0");
    }
}
