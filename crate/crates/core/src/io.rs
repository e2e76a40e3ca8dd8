//! JSON documents: partitions, integer functions, certificates and
//! enumeration streams. Every document carries `"format_version": 1`.
//!
//! A cell is stored as lowercase hex with `ceil(q^n / 4)` digits; digit `k`
//! (counting from the left) holds vertices `4k..4k+3`, vertex `4k + j` in bit
//! `j` of the digit.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bitset::Bitset;
use crate::construct::{is_induced_cycle, CycleVerdict};
use crate::eigen::{ClassifiedForm, IntFunction, Lambda1Form};
use crate::error::{Error, Result};
use crate::hamming::{Automorphism, GraphParams};
use crate::partition::{
    eigenvalue_indices, equitable_check, essential_coordinates, orthogonal_array_check, predicted_cell_size,
    quotient_eigenvalues, spectral_check, Equitability, OaVerdict, QuotientMatrix, SpectralVerdict, TwoPartition,
};
use crate::search::{Enumeration, Theorem5Tag};

pub const FORMAT_VERSION: u32 = 1;

fn check_version(v: u32) -> Result<()> {
    if v != FORMAT_VERSION {
        return Err(Error::Format(format!("unsupported format_version {v}, expected {FORMAT_VERSION}")));
    }
    Ok(())
}

/// A 2-partition given by its first cell. Input may use `vertices` (a list of
/// tuples) instead of `cell`; output always uses `cell`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionDocument {
    pub format_version: u32,
    pub n: usize,
    pub q: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cell: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Vec<usize>>>,
}

impl PartitionDocument {
    pub fn from_partition(p: &TwoPartition) -> Self {
        PartitionDocument {
            format_version: FORMAT_VERSION,
            n: p.params().n(),
            q: p.params().q(),
            cell: Some(p.cell().to_hex()),
            vertices: None,
        }
    }

    pub fn to_partition(&self) -> Result<TwoPartition> {
        check_version(self.format_version)?;
        let params = GraphParams::new(self.n, self.q)?;
        match (&self.cell, &self.vertices) {
            (Some(hex), None) => TwoPartition::new(params.clone(), Bitset::from_hex(params.vertex_count(), hex)?),
            (None, Some(tuples)) => TwoPartition::from_tuples(params, tuples),
            _ => Err(Error::Format("a partition document needs exactly one of \"cell\" and \"vertices\"".into())),
        }
    }
}

pub fn parse_partition(json: &str) -> Result<TwoPartition> {
    let doc: PartitionDocument =
        serde_json::from_str(json).map_err(|e| Error::Format(format!("partition document: {e}")))?;
    doc.to_partition()
}

pub fn serialize_partition(p: &TwoPartition) -> String {
    serde_json::to_string(&PartitionDocument::from_partition(p)).expect("serializable")
}

/// An integer-valued function, `values[v]` at vertex `v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionDocument {
    pub format_version: u32,
    pub n: usize,
    pub q: usize,
    pub values: Vec<i64>,
}

impl FunctionDocument {
    pub fn from_function(f: &IntFunction) -> Self {
        FunctionDocument {
            format_version: FORMAT_VERSION,
            n: f.params().n(),
            q: f.params().q(),
            values: f.values().to_vec(),
        }
    }

    pub fn to_function(&self) -> Result<IntFunction> {
        check_version(self.format_version)?;
        IntFunction::new(GraphParams::new(self.n, self.q)?, self.values.clone())
    }
}

pub fn parse_function(json: &str) -> Result<IntFunction> {
    let doc: FunctionDocument =
        serde_json::from_str(json).map_err(|e| Error::Format(format!("function document: {e}")))?;
    doc.to_function()
}

pub fn serialize_function(f: &IntFunction) -> String {
    serde_json::to_string(&FunctionDocument::from_function(f)).expect("serializable")
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "fail"
    }
}

fn partition_value(p: &TwoPartition) -> Value {
    serde_json::to_value(PartitionDocument::from_partition(p)).expect("serializable")
}

fn automorphism_value(g: &Automorphism) -> Value {
    json!({ "coord_perm": g.coord_perm(), "symbol_perms": g.symbol_perms() })
}

/// The equitability certificate and, if equitable, its quotient matrix.
pub fn equitable_certificate(p: &TwoPartition) -> Result<(Value, Option<QuotientMatrix>)> {
    let params = p.params();
    Ok(match equitable_check(p) {
        Equitability::Equitable(s) => {
            let (top, second) = quotient_eigenvalues(&s, params)?;
            let indices: Vec<usize> = eigenvalue_indices(&s, params).into_iter().collect();
            let size = predicted_cell_size(&s, params)?;
            let cert = json!({
                "kind": "equitable",
                "verdict": "pass",
                "quotient": s.rows(),
                "eigenvalues": [top, second],
                "eigenvalue_indices": indices,
                "second_eigenvalue_index": params.eigenvalue_index(second),
                "cell_size": p.size(),
                "predicted_cell_size": size.to_string(),
            });
            (cert, Some(s))
        }
        Equitability::NotEquitable { witness, target_cell } => (
            json!({
                "kind": "equitable",
                "verdict": "fail",
                "witness": { "vertices": [witness.0, witness.1], "target_cell": target_cell },
            }),
            None,
        ),
    })
}

/// Certificates for `verify`: equitability, spectral and orthogonal-array
/// checks, essential coordinates and the induced-cycle test on both cells.
/// The flag is true when every certificate passes.
pub fn verify_report(p: &TwoPartition) -> Result<(Value, bool)> {
    let params = p.params();
    let (eq_cert, quotient) = equitable_certificate(p)?;
    let mut certificates = vec![eq_cert];
    let mut ok = quotient.is_some();
    if let Some(s) = &quotient {
        let lambda = s.get(0, 0) - s.get(1, 0);
        let spectral = match spectral_check(p, lambda) {
            SpectralVerdict::Pass { value } => json!({
                "kind": "spectral", "verdict": "pass", "eigenvalue": lambda, "constant": value,
            }),
            SpectralVerdict::Fail { witness } => {
                ok = false;
                json!({
                    "kind": "spectral", "verdict": "fail", "eigenvalue": lambda,
                    "witness": [witness.0, witness.1],
                })
            }
        };
        certificates.push(spectral);
        // the fiber count only applies to the second eigenvalue
        if params.eigenvalue_index(lambda) == Some(2) {
            let oa = match orthogonal_array_check(p, s)? {
                OaVerdict::Pass { count } => json!({
                    "kind": "oa", "verdict": "pass", "fiber_count": count.to_string(),
                }),
                OaVerdict::Fail { coordinate, symbol, count, expected } => {
                    ok = false;
                    json!({
                        "kind": "oa", "verdict": "fail",
                        "witness": { "coordinate": coordinate, "symbol": symbol, "count": count, "expected": expected.to_string() },
                    })
                }
            };
            certificates.push(oa);
        }
    }
    let essential: Vec<usize> = essential_coordinates(p).into_iter().collect();
    let cycle = |part: &TwoPartition| match is_induced_cycle(params, &part.vertices()) {
        CycleVerdict::Pass { length } => json!({ "verdict": "pass", "length": length }),
        CycleVerdict::Fail => json!({ "verdict": "fail" }),
    };
    let report = json!({
        "format_version": FORMAT_VERSION,
        "partition": partition_value(p),
        "certificates": certificates,
        "essential_coordinates": essential,
        "reduced": essential.len() == params.n(),
        "cells": [
            { "cell": 0, "size": p.size(), "induced_cycle": cycle(p) },
            { "cell": 1, "size": params.vertex_count() - p.size(), "induced_cycle": cycle(&p.complement()) },
        ],
    });
    Ok((report, ok))
}

/// The `theorem5` certificate; fails only for `Unclassified`.
pub fn theorem5_certificate(p: &TwoPartition, tag: &Theorem5Tag) -> Value {
    let mut cert = json!({
        "format_version": FORMAT_VERSION,
        "kind": "theorem5",
        "verdict": verdict(*tag != Theorem5Tag::Unclassified),
        "tag": tag.name(),
        "partition": partition_value(p),
    });
    let extra = match tag {
        Theorem5Tag::SmallBase { secondary } => json!({
            "n": p.params().n(),
            "secondary": secondary.as_ref().map(|m| json!({
                "tag": "construction_a",
                "blocks": crate::construct::format_blocks(m.blocks.blocks()),
                "base": partition_value(&m.base),
                "automorphism": automorphism_value(&m.automorphism),
            })),
        }),
        Theorem5Tag::ConstructionB(m) => json!({
            "split": m.split,
            "cycle_pair": partition_value(&m.cycle_pair),
            "automorphism": automorphism_value(&m.automorphism),
        }),
        Theorem5Tag::ConstructionA(m) => json!({
            "blocks": crate::construct::format_blocks(m.blocks.blocks()),
            "base": partition_value(&m.base),
            "automorphism": automorphism_value(&m.automorphism),
        }),
        Theorem5Tag::Unclassified => json!({}),
    };
    if let (Value::Object(c), Value::Object(e)) = (&mut cert, extra) {
        c.extend(e);
    }
    cert
}

/// The `classification` certificate for a ternary function.
pub fn classification_certificate(f: &IntFunction, form: &ClassifiedForm, lambda1: &Lambda1Form) -> Value {
    json!({
        "format_version": FORMAT_VERSION,
        "kind": "classification",
        "verdict": verdict(*form != ClassifiedForm::NotMember),
        "u0u1": form,
        "lambda1": lambda1,
        "function": FunctionDocument::from_function(f),
    })
}

/// Trailing record of an enumeration stream.
pub fn enumeration_summary(e: &Enumeration) -> Value {
    let quotients: Vec<Value> =
        e.quotients.iter().map(|(s, c)| json!({ "quotient": s.rows(), "count": c })).collect();
    json!({
        "format_version": FORMAT_VERSION,
        "kind": "summary",
        "count": e.count,
        "count_up_to_iso": e.count_up_to_iso,
        "quotients": quotients,
    })
}

/// JSON lines: one partition document per result, then the summary.
pub fn enumeration_lines(e: &Enumeration) -> Vec<String> {
    let mut lines: Vec<String> = e.partitions.iter().map(serialize_partition).collect();
    lines.push(enumeration_summary(e).to_string());
    lines
}
