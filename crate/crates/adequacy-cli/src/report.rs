//! Serializable report shapes shared by every subcommand. Each report is
//! wrapped in an envelope carrying the tool version and the effective
//! configuration so a saved report is self-describing and a rerun with the
//! same configuration reproduces it byte for byte.

use crate::scenario::ScenarioSpec;
use adequacy_core::constructions::{ObstructionCertificate, TaylorOutcome};
use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Debug, Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

impl ToolInfo {
    pub fn current() -> ToolInfo {
        ToolInfo {
            name: "adequacy",
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

/// The configuration a run actually used, after flag / scenario / default
/// resolution.
#[derive(Clone, Debug, Serialize)]
pub struct EffectiveConfig {
    pub subcommand: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scenario: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_max: Option<u64>,
    pub seed: u64,
    pub cap: u64,
    pub threads: usize,
    pub format: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cache_dir: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct Envelope<T: Serialize> {
    pub tool: ToolInfo,
    pub config: EffectiveConfig,
    pub result: T,
}

/// Construction results, tagged by family so JSON consumers can dispatch.
#[derive(Debug, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ConstructOut {
    InducedSemidirect {
        group_order: u64,
        module_dim: usize,
        base_size: u64,
        character: Vec<u64>,
        obstructed_cosets: Vec<CosetOut>,
        certificate: ObstructionCertificate,
    },
    WreathExplicit {
        group_order: u64,
        module_dim: usize,
        copies: u64,
        inducing_subgroup_order: u64,
        faithful: bool,
        absolutely_irreducible: bool,
        full_span: usize,
        p_regular_span: usize,
        certificate: ObstructionCertificate,
    },
    WreathImplicit {
        base_order: u64,
        copies: u64,
        top_order: u64,
        certificate: ObstructionCertificate,
    },
    Taylor(TaylorOutcome),
    Psl2Scan {
        records: Vec<FamilyRecordOut>,
    },
    /// The requested construction is provably unavailable for these inputs
    /// (for example, every coset of the chosen subgroup contains an element
    /// of order prime to p). This is a computed answer, not an error.
    Refused {
        reason: String,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct CosetOut {
    pub representative_index: u32,
    pub member_indices: Vec<u32>,
    pub member_orders: Vec<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyRecordOut {
    pub q: u64,
    pub outcome: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<ObstructionCertificate>,
}

#[derive(Debug, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum CosetSearchResult {
    Witness(WitnessOut),
    Absent {
        cosets_scanned: usize,
        explanation: String,
    },
}

#[derive(Debug, Serialize)]
pub struct WitnessOut {
    pub group_order: u64,
    pub subgroup_order: u64,
    pub representative_index: u32,
    pub representative: String,
    pub member_indices: Vec<u32>,
    pub member_orders: Vec<u64>,
    pub members: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct H1Out {
    pub group_order: u64,
    pub p: u64,
    pub z1: usize,
    pub b1: usize,
    pub h1: usize,
}

#[derive(Debug, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum CensusOut {
    Literal {
        p_regular_count: u64,
        dim: u64,
        flagged: bool,
    },
    Catalog {
        rows: Vec<CensusRow>,
    },
}

#[derive(Debug, Serialize)]
pub struct CensusRow {
    pub name: String,
    pub order: u64,
    pub p: u64,
    pub p_regular_count: u64,
    /// The smallest module dimension the counting screen would flag: any
    /// dimension d with d^2 > p_regular_count cannot be spanned.
    pub min_flagged_dim: u64,
}

pub fn effective_config(
    subcommand: &str,
    scenario_path: Option<&std::path::Path>,
    scenario: Option<&ScenarioSpec>,
    p: Option<u64>,
    q_max: Option<u64>,
    seed: u64,
    cap: u64,
    threads: usize,
    format: &str,
    cache_dir: Option<&std::path::Path>,
) -> EffectiveConfig {
    EffectiveConfig {
        subcommand: subcommand.to_string(),
        scenario: scenario_path.map(|p| p.display().to_string()),
        kind: scenario.map(|s| s.kind.as_str().to_string()),
        p,
        q_max,
        seed,
        cap,
        threads,
        format: format.to_string(),
        cache_dir: cache_dir.map(|p| p.display().to_string()),
    }
}

/// Render a report as indented `path: value` lines. The walk is driven by
/// the serialized JSON, so text output always agrees with the JSON output;
/// it is meant for human eyes, not for parsing.
pub fn render_text<T: Serialize>(envelope: &Envelope<T>) -> String {
    let value = serde_json::to_value(envelope).expect("report serialization cannot fail");
    let mut lines = Vec::new();
    walk("", &value, &mut lines);
    let mut out = lines.join("\n");
    out.push('\n');
    out
}

fn walk(path: &str, value: &Value, lines: &mut Vec<String>) {
    match value {
        Value::Object(map) => {
            for (key, child) in map {
                let next = if path.is_empty() {
                    key.clone()
                } else {
                    format!("{path}.{key}")
                };
                walk(&next, child, lines);
            }
        }
        Value::Array(items) if items.is_empty() => lines.push(format!("{path}: []")),
        Value::Array(items) => {
            for (i, child) in items.iter().enumerate() {
                walk(&format!("{path}[{i}]"), child, lines);
            }
        }
        Value::Null => lines.push(format!("{path}: null")),
        Value::Bool(b) => lines.push(format!("{path}: {b}")),
        Value::Number(n) => lines.push(format!("{path}: {n}")),
        Value::String(s) => lines.push(format!("{path}: {s}")),
    }
}
