//! Shared input resolution and error-to-exit-code mapping.

use std::fmt;
use std::io::Read;

use quasitree::families::{make_family, FamilyId};
use quasitree::ribbon::{parse_signed_rotation, Bouquet, EdgeLabel, RibbonGraph};

use crate::InputArgs;

#[derive(Debug)]
pub enum CliError {
    /// Unparsable or inconsistent input (exit 2).
    Input(String),
    /// A requested method refuses the instance (exit 3).
    Refusal(String),
    /// Enumeration would exceed the resource guard (exit 4).
    Guard(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Refusal(_) => 3,
            CliError::Guard(_) => 4,
        }
    }

    pub fn input(err: impl fmt::Display) -> CliError {
        CliError::Input(err.to_string())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Refusal(m) | CliError::Guard(m) => write!(f, "{m}"),
        }
    }
}

/// What the user asked to operate on, echoed back into reports.
pub enum ResolvedInput {
    Rotation(String),
    Family(FamilyId, u64),
}

impl ResolvedInput {
    pub fn describe(&self) -> String {
        match self {
            ResolvedInput::Rotation(s) => format!("rotation {s}"),
            ResolvedInput::Family(id, n) => format!("family {id} n={n}"),
        }
    }

    pub fn json(&self) -> serde_json::Value {
        match self {
            ResolvedInput::Rotation(s) => serde_json::json!({"kind": "rotation", "rotation": s}),
            ResolvedInput::Family(id, n) => {
                serde_json::json!({"kind": "family", "family": id.to_string(), "n": n})
            }
        }
    }
}

/// Bouquet from `--rotation` or `--family/--n`.
pub fn resolve_bouquet(input: &InputArgs) -> Result<(Bouquet, ResolvedInput), CliError> {
    match (&input.rotation, &input.family, input.n) {
        (Some(rot), None, None) => {
            let b = parse_signed_rotation(rot).map_err(CliError::input)?;
            Ok((b, ResolvedInput::Rotation(rot.clone())))
        }
        (None, Some(fam), Some(n)) => {
            let id: FamilyId = fam.parse().map_err(CliError::input)?;
            let b = make_family(id, n).map_err(CliError::input)?;
            Ok((b, ResolvedInput::Family(id, n)))
        }
        _ => Err(CliError::Input(
            "provide either --rotation or --family with --n".into(),
        )),
    }
}

pub fn read_source(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(CliError::input)?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {path}: {e}")))
    }
}

pub fn parse_labels(s: &str) -> Result<Vec<EdgeLabel>, CliError> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map(EdgeLabel)
                .map_err(|_| CliError::Input(format!("bad edge label {t:?}")))
        })
        .collect()
}

pub const BRUTE_FORCE_EDGE_GUARD: usize = 24;

pub fn guard_enumeration(g: &RibbonGraph, force: bool) -> Result<(), CliError> {
    if g.n_edges() > BRUTE_FORCE_EDGE_GUARD && !force {
        return Err(CliError::Guard(format!(
            "brute-force enumeration over 2^{} subsets exceeds the {}-edge guard; pass --force to run anyway",
            g.n_edges(),
            BRUTE_FORCE_EDGE_GUARD
        )));
    }
    Ok(())
}
