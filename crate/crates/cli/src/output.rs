//! Fixed-precision JSON and flat CSV rendering.

use std::io;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::{Map, Value};

/// Decimal places carried by every floating-point number in the output.
pub const DECIMALS: usize = 4;

/// Formats a float with [`DECIMALS`] places, folding `-0.0000` into `0.0000`.
pub fn fixed(v: f64) -> String {
    let s = format!("{v:.DECIMALS$}");
    if s.starts_with('-') && s[1..].bytes().all(|b| b == b'0' || b == b'.') {
        s[1..].to_owned()
    } else {
        s
    }
}

struct FixedFormatter<'a>(PrettyFormatter<'a>);

impl Formatter for FixedFormatter<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(fixed(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value.into())
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Pretty-printed JSON with fixed-precision floats and a trailing newline.
/// Non-finite floats become `null`.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedFormatter(PrettyFormatter::new()));
    value.serialize(&mut ser).expect("payload types serialize infallibly");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

fn cell(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some(String::new()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) if n.is_f64() => n.as_f64().map(fixed),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(_) | Value::Object(_) => None,
    }
}

fn flat_row(obj: &Map<String, Value>) -> Option<Vec<String>> {
    obj.values().map(cell).collect()
}

fn leaves(prefix: &str, v: &Value, out: &mut Vec<[String; 2]>) {
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_owned()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                leaves(&join(&i.to_string()), item, out);
            }
        }
        Value::Object(map) => {
            for (k, item) in map {
                leaves(&join(k), item, out);
            }
        }
        scalar => out.push([prefix.to_owned(), cell(scalar).unwrap_or_default()]),
    }
}

fn write_rows<I, R>(header: I, rows: impl IntoIterator<Item = R>) -> String
where
    I: IntoIterator,
    I::Item: AsRef<[u8]>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("writing to memory");
    for r in rows {
        w.write_record(r).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("CSV of UTF-8 fields")
}

/// CSV view of a payload.
///
/// A flat object becomes one row and an array of flat objects one row per
/// element. Anything nested falls back to `field,value` rows keyed by a
/// dotted path.
pub fn to_csv<T: Serialize + ?Sized>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("payload types serialize infallibly");
    match &v {
        Value::Object(obj) => {
            if let Some(row) = flat_row(obj) {
                return write_rows(obj.keys(), [row]);
            }
        }
        Value::Array(items) => {
            let objs: Option<Vec<_>> = items.iter().map(Value::as_object).collect();
            if let Some(objs) = objs.filter(|o| !o.is_empty()) {
                let header: Vec<&String> = objs[0].keys().collect();
                let same_shape = objs.iter().all(|o| o.keys().eq(header.iter().copied()));
                let rows: Option<Vec<_>> = objs.iter().map(|o| flat_row(o)).collect();
                if let (true, Some(rows)) = (same_shape, rows) {
                    return write_rows(header, rows);
                }
            }
        }
        _ => {}
    }
    let mut out = Vec::new();
    leaves("", &v, &mut out);
    write_rows(["field", "value"], out)
}
