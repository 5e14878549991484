use std::io::Write;

use decnet::scalar::format_fixed;
use decnet::Error;
use serde_json::Value;

/// Process exit code for a library error.
pub fn exit_code(error: &Error) -> i32 {
    match error {
        Error::Parse { .. } | Error::Invalid(_) | Error::Cycle(_) | Error::EmptyValueTable => 2,
        Error::ImpossibleEvidence => 3,
        Error::NoAcceptedSamples { .. } => 4,
        Error::UnknownNode(_)
        | Error::UnknownState { .. }
        | Error::DuplicateBinding(_)
        | Error::TargetInEvidence(_)
        | Error::Usage(_) => 1,
    }
}

/// The printed form of a probability or value.
pub fn fixed(x: f64) -> String {
    format_fixed(x)
}

/// JSON number carrying exactly the printed value.
pub fn num(x: f64) -> Value {
    let printed: f64 = fixed(x).parse().expect("formatted number parses");
    serde_json::Number::from_f64(printed).map_or(Value::Null, Value::Number)
}

/// Text and JSON renderings of one result.
pub struct Output {
    pub text: String,
    pub json: Value,
    pub code: i32,
}

impl Output {
    pub fn ok(text: String, json: Value) -> Self {
        Self { text, json, code: 0 }
    }

    pub fn emit<W: Write>(&self, json: bool, out: &mut W) -> i32 {
        let _ = if json {
            writeln!(out, "{}", self.json)
        } else {
            out.write_all(self.text.as_bytes())
        };
        self.code
    }
}
