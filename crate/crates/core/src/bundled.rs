//! Scenario files shipped with the library.

use crate::error::{CoreError, Result};
use crate::scenario::Scenario;

/// `(file name, contents)` in a fixed order.
pub const BUNDLED: &[(&str, &str)] = &[
    ("line-conic-1.toml", include_str!("../scenarios/line-conic-1.toml")),
    ("line-conic-2a.toml", include_str!("../scenarios/line-conic-2a.toml")),
    ("line-conic-2b.toml", include_str!("../scenarios/line-conic-2b.toml")),
    ("line-conic-2c.toml", include_str!("../scenarios/line-conic-2c.toml")),
    ("eg-3.toml", include_str!("../scenarios/eg-3.toml")),
    ("smooth.toml", include_str!("../scenarios/smooth.toml")),
];

/// Text of a bundled scenario, by file name with or without `.toml`.
pub fn text(name: &str) -> Result<&'static str> {
    let file = if name.ends_with(".toml") { name.to_string() } else { format!("{name}.toml") };
    BUNDLED
        .iter()
        .find(|(f, _)| *f == file)
        .map(|(_, t)| *t)
        .ok_or_else(|| CoreError::Scenario(format!("no bundled scenario named {name:?}")))
}

pub fn load(name: &str) -> Result<Scenario> {
    Scenario::parse(text(name)?)
}
