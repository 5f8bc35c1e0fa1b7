//! Report JSON. Keys are sorted, indentation is two spaces and the text ends
//! with a newline, so equal reports give identical bytes.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::compliance::{
    CandidatePair, ComplianceMode, ComplianceReport, Conflict, ConflictReason,
};
use crate::model::Ident;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("malformed report JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid report: {0}")]
    Invalid(String),
}

// Field order is alphabetical: serde emits struct fields in declaration order.

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct ReportDto {
    compliant: bool,
    conflicts: Vec<ConflictDto>,
    covered_classes: Vec<String>,
    mode: String,
    raw_compliant: bool,
    uncovered_classes: Vec<String>,
    uncovered_nodes: Vec<String>,
    undecided: bool,
    witness: Vec<PairDto>,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct ConflictDto {
    class_arc: String,
    dst_pair: PairDto,
    reason: String,
    src_pair: PairDto,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PairDto {
    class: String,
    node: String,
}

const NO_FULL_MEMBER_ARC: &str = "noFullMemberArc";

impl From<&CandidatePair> for PairDto {
    fn from(p: &CandidatePair) -> Self {
        PairDto {
            class: p.class.to_string(),
            node: p.node.to_string(),
        }
    }
}

fn ids(list: &[Ident]) -> Vec<String> {
    list.iter().map(Ident::to_string).collect()
}

pub fn emit_report(report: &ComplianceReport) -> String {
    let dto = ReportDto {
        compliant: report.compliant,
        conflicts: report
            .conflicts
            .iter()
            .map(|c| ConflictDto {
                class_arc: c.class_arc.to_string(),
                dst_pair: (&c.dst_pair).into(),
                reason: match c.reason {
                    ConflictReason::NoFullMemberArc => NO_FULL_MEMBER_ARC.to_owned(),
                },
                src_pair: (&c.src_pair).into(),
            })
            .collect(),
        covered_classes: ids(&report.covered_classes),
        mode: report.mode.to_string(),
        raw_compliant: report.raw_compliant,
        uncovered_classes: ids(&report.uncovered_classes),
        uncovered_nodes: ids(&report.uncovered_nodes),
        undecided: report.undecided,
        witness: report.witness.iter().map(PairDto::from).collect(),
    };
    let mut out = serde_json::to_string_pretty(&dto).expect("report DTO always serializes");
    out.push('\n');
    out
}

fn ident(s: String) -> Result<Ident, ReportError> {
    Ident::new(s).map_err(|e| ReportError::Invalid(e.to_string()))
}

fn idents(list: Vec<String>) -> Result<Vec<Ident>, ReportError> {
    list.into_iter().map(ident).collect()
}

fn pair(p: PairDto) -> Result<CandidatePair, ReportError> {
    Ok(CandidatePair::new(ident(p.node)?, ident(p.class)?))
}

/// Parses and validates report JSON as written by [`emit_report`].
pub fn parse_report(json: &str) -> Result<ComplianceReport, ReportError> {
    let dto: ReportDto = serde_json::from_str(json)?;
    let mode: ComplianceMode = dto.mode.parse().map_err(ReportError::Invalid)?;
    let conflicts = dto
        .conflicts
        .into_iter()
        .map(|c| {
            if c.reason != NO_FULL_MEMBER_ARC {
                return Err(ReportError::Invalid(format!("unknown conflict reason `{}`", c.reason)));
            }
            Ok(Conflict {
                class_arc: ident(c.class_arc)?,
                src_pair: pair(c.src_pair)?,
                dst_pair: pair(c.dst_pair)?,
                reason: ConflictReason::NoFullMemberArc,
            })
        })
        .collect::<Result<_, _>>()?;
    Ok(ComplianceReport {
        mode,
        compliant: dto.compliant,
        raw_compliant: dto.raw_compliant,
        undecided: dto.undecided,
        witness: dto.witness.into_iter().map(pair).collect::<Result<_, _>>()?,
        covered_classes: idents(dto.covered_classes)?,
        uncovered_classes: idents(dto.uncovered_classes)?,
        uncovered_nodes: idents(dto.uncovered_nodes)?,
        conflicts,
    })
}
