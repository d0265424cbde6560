//! Report envelopes shared by the non-certificate subcommands.

use std::fmt::Display;

use arboreal_core::newton::NewtonPolygon;
use arboreal_core::ramify::NewtonTower;
use arboreal_core::ExtVal;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Input {
    pub poly: String,
    pub prime: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_point: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
}

/// Exactly one of `result` and `error` is present.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome<T> {
    #[serde(rename = "result")]
    Ok(T),
    #[serde(rename = "error")]
    Err(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report<T> {
    pub command: String,
    pub input: Input,
    #[serde(flatten)]
    pub outcome: Outcome<T>,
}

impl<T> Report<T> {
    pub fn new<E: Display>(command: &str, input: Input, outcome: Result<T, E>) -> Self {
        let outcome = match outcome {
            Ok(t) => Outcome::Ok(t),
            Err(e) => Outcome::Err(e.to_string()),
        };
        Report { command: command.to_string(), input, outcome }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootVal {
    pub val: ExtVal,
    pub mult: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewtonReport {
    #[serde(flatten)]
    pub polygon: NewtonPolygon,
    pub root_valuations: Vec<RootVal>,
    pub ram_denominator: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscRow {
    pub n: usize,
    pub disc_val: ExtVal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscValReport {
    pub outer: String,
    pub rows: Vec<DiscRow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerCmdReport {
    /// Conjugate of the input map with reduction `z^d`.
    pub g: String,
    pub start_val: ExtVal,
    #[serde(flatten)]
    pub tower: NewtonTower,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModulusLine {
    pub degree: usize,
    pub coeffs: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DumpTowerReport {
    pub prime: u64,
    pub levels: Vec<ModulusLine>,
}
