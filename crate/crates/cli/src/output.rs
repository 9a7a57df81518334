//! Number formatting and the JSON result envelope.
//!
//! Text output uses Rust's shortest round-trip formatting, so every printed
//! number parses back to the identical `f64`. Nothing time-dependent is ever
//! written to stdout.

use serde::Serialize;
use serde_json::{json, Value};
use su4euler::linalg::Complex64;
use su4euler::Mat4;

pub fn num(x: f64) -> String {
    if x == 0.0 {
        // also normalises −0
        return "0".into();
    }
    if (1e-4..1e16).contains(&x.abs()) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn complex(z: Complex64) -> String {
    match (z.re == 0.0, z.im == 0.0) {
        (_, true) => num(z.re),
        (true, false) => format!("{}i", num(z.im)),
        (false, false) => {
            let im = num(z.im);
            let sign = if im.starts_with('-') { "" } else { "+" };
            format!("{}{sign}{im}i", num(z.re))
        }
    }
}

pub fn list(xs: &[f64]) -> String {
    xs.iter().map(|&x| num(x)).collect::<Vec<_>>().join(", ")
}

pub fn matrix_text(m: &Mat4) -> String {
    let mut out = String::new();
    for i in 0..4 {
        let row: Vec<String> = (0..4).map(|j| complex(m[(i, j)])).collect();
        out.push_str("  [");
        out.push_str(&row.join(", "));
        out.push_str("]\n");
    }
    out
}

pub fn matrix_json(m: &Mat4) -> Value {
    let part = |f: fn(&Complex64) -> f64| -> Vec<Vec<f64>> {
        (0..4)
            .map(|i| (0..4).map(|j| f(&m[(i, j)])).collect())
            .collect()
    };
    json!({ "re": part(|z| z.re), "im": part(|z| z.im) })
}

#[derive(Serialize)]
pub struct Envelope<'a, C: Serialize, P: Serialize> {
    pub command: &'a str,
    pub version: &'a str,
    pub config: C,
    pub payload: P,
}

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn envelope<C: Serialize, P: Serialize>(command: &str, config: C, payload: P) -> String {
    let env = Envelope {
        command,
        version: VERSION,
        config,
        payload,
    };
    let mut s = serde_json::to_string_pretty(&env).expect("envelope serializes");
    s.push('\n');
    s
}
