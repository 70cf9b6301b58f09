//! Certificates: query results wrapped with the scenario hash, the tool
//! version and the steps needed to replay them. Serialization is
//! deterministic: keys are sorted and no clock or host data is included.

use serde_json::{json, Value};

use crate::scenario::Scenario;

pub const TOOL_NAME: &str = "mwl";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

fn replay_steps(command: &str) -> Vec<String> {
    let mut steps = vec![
        "check that the sha256 of the scenario file equals scenario.sha256".to_string(),
        format!("re-run `{TOOL_NAME} {command} --format json` on the scenario and compare the output byte for byte"),
    ];
    let extra: &[&str] = match command {
        "fibers" => &["check that the Euler numbers of the listed fibers add up to 12 chi"],
        "height" => &["check that each height equals 2 chi + 2 (P.O) minus the listed contributions"],
        "dup" => &["substitute the doubled point into the Weierstrass equation"],
        "divide" | "certify-pair" => &[
            "for each exists verdict, recompute [p] of the divisor section and compare it with the combination of the sections",
            "for each not_exists verdict, check that no multiplier vector in [1, p-1]^n annihilates the coordinates mod p",
            "check det(gram) against |tors|^2 / prod det(-A_v) over the reducible fibers",
        ],
        _ => &[],
    };
    steps.extend(extra.iter().map(|s| s.to_string()));
    steps
}

/// The certificate for one command run on `scn`.
pub fn envelope(scn: &Scenario, command: &str, results: Value) -> Value {
    json!({
        "tool": { "name": TOOL_NAME, "version": TOOL_VERSION },
        "scenario": { "name": scn.name(), "sha256": scn.hash },
        "command": command,
        "results": results,
        "replay": replay_steps(command),
    })
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(&sort_keys(v)).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn sort_keys(v: &Value) -> Value {
    match v {
        Value::Object(m) => {
            let mut entries: Vec<(&String, &Value)> = m.iter().collect();
            entries.sort_by(|a, b| a.0.cmp(b.0));
            Value::Object(entries.into_iter().map(|(k, v)| (k.clone(), sort_keys(v))).collect())
        }
        Value::Array(a) => Value::Array(a.iter().map(sort_keys).collect()),
        _ => v.clone(),
    }
}
