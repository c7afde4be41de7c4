//! Machine-readable report structure. The JSON rendering is deterministic
//! (fixed field order, ordered collections, exact values as strings) and
//! round-trips: parsing an emitted report and emitting it again is the
//! identity.

use serde::{Deserialize, Serialize};
use toristack_core::diagnostics::ValidationReport;
use toristack_core::exactalg::{FinAbGroup, IntMatrix};
use toristack_core::fan::ZeroPattern;
use toristack_core::feasibility::Certificate;
use toristack_core::linalg::RatMatrix;
use toristack_core::momentred::FeasibilityResult;
use toristack_core::morita::MoritaCertificate;
use toristack_core::stackbuild::{DiagGroupPresentation, Flavor};
use toristack_core::Rat;

use crate::input::{InputDocument, JsonInt, JsonRat};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub passed: bool,
    pub input: InputDocument,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub validation: Option<ValidationSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fan: Option<FanSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub groups: Option<GroupsSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub charts: Option<ChartsSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub isotropy: Option<IsotropySection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moment: Option<MomentSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateSection>,
}

impl Report {
    pub fn new(command: &str, input: &InputDocument) -> Self {
        Self {
            command: command.to_string(),
            passed: false,
            input: input.clone(),
            validation: None,
            fan: None,
            groups: None,
            charts: None,
            isotropy: None,
            moment: None,
            certificate: None,
        }
    }

    /// Canonical machine rendering.
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckDto {
    pub check: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationSection {
    pub valid: bool,
    pub checks: Vec<CheckDto>,
}

impl ValidationSection {
    pub fn from_core(report: &ValidationReport) -> Self {
        Self {
            valid: report.is_valid(),
            checks: report
                .items
                .iter()
                .map(|d| CheckDto {
                    check: d.check.clone(),
                    passed: d.passed,
                    detail: d.detail.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FanSection {
    pub dim: usize,
    pub rays: Vec<Vec<JsonInt>>,
    /// One-based ray indices, one entry per maximal cone.
    pub max_cones: Vec<Vec<usize>>,
    pub labels: Vec<u32>,
    /// The ray map `beta` as rows.
    pub beta: Vec<Vec<JsonInt>>,
    pub completeness: String,
    pub valid: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupDesc {
    pub name: String,
    pub free_rank: usize,
    pub torsion: Vec<JsonInt>,
}

impl GroupDesc {
    pub fn from_core(group: &FinAbGroup) -> Self {
        Self {
            name: group.to_string(),
            free_rank: group.free_rank(),
            torsion: group.torsion().iter().cloned().map(JsonInt).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PresentationDto {
    pub flavor: String,
    pub group: GroupDesc,
    /// One row per ambient coordinate; free generator columns first, then
    /// torsion generator columns (read modulo their order).
    pub exponents: Vec<Vec<JsonInt>>,
    pub injective: bool,
}

impl PresentationDto {
    pub fn from_core(p: &DiagGroupPresentation) -> Self {
        Self {
            flavor: match p.flavor {
                Flavor::Algebraic => "algebraic".to_string(),
                Flavor::Compact => "compact".to_string(),
            },
            group: GroupDesc::from_core(&p.group()),
            exponents: int_matrix_rows(&p.exponents),
            injective: p.embedding_is_injective(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplittingDto {
    pub free_rank: usize,
    pub torsion: Vec<JsonInt>,
    pub scaling_exponents: Vec<Vec<JsonInt>>,
    pub exhausts: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupsSection {
    pub algebraic: PresentationDto,
    pub compact: PresentationDto,
    /// Data identity between the two presentations (the lemma both sides
    /// hinge on).
    pub same_data: bool,
    pub finite_extension: GroupDesc,
    pub splitting: SplittingDto,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChartRow {
    /// One-based ray indices of the maximal cone.
    pub cone: Vec<usize>,
    pub order: JsonInt,
    pub chart_group: GroupDesc,
    pub label_part: GroupDesc,
    pub unlabelled_part: GroupDesc,
    /// `|chart| = |labels| * |unlabelled|`.
    pub multiplicative: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChartsSection {
    pub rows: Vec<ChartRow>,
    pub all_multiplicative: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsotropyRowDto {
    /// One-based coordinate indices that vanish.
    pub pattern: Vec<usize>,
    pub admissible: bool,
    pub symplectic: GroupDesc,
    pub complex: GroupDesc,
    pub matched: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsotropySection {
    pub rows: Vec<IsotropyRowDto>,
    pub all_matched: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentSection {
    pub iota_star: Vec<Vec<JsonRat>>,
    pub xi: Vec<JsonRat>,
    pub regular: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub irregular_pattern: Option<Vec<usize>>,
    pub level_in_admissible_locus: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub violating_pattern: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityDto {
    pub pattern: Vec<usize>,
    pub strict: bool,
    pub feasible: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<JsonRat>>,
    /// Infeasibility certificate: multipliers on the level-system rows.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Vec<(usize, JsonRat)>>,
}

impl FeasibilityDto {
    pub fn from_core(r: &FeasibilityResult) -> Self {
        Self {
            pattern: pattern_dto(&r.pattern),
            strict: r.strict,
            feasible: r.feasible,
            witness: r
                .witness
                .as_ref()
                .map(|w| w.iter().cloned().map(JsonRat).collect()),
            certificate: r.certificate.as_ref().map(certificate_dto),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct M1RowDto {
    pub pattern: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<JsonRat>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jacobian_det: Option<JsonRat>,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct M2RowDto {
    pub feasibility: FeasibilityDto,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateSection {
    pub splitting: SplittingDto,
    pub mu_independent: bool,
    pub m1_prime_passed: bool,
    pub m1_rows: Vec<M1RowDto>,
    pub m2_passed: bool,
    pub m2_rows: Vec<M2RowDto>,
    pub level_inclusion_passed: bool,
    pub level_rows: Vec<FeasibilityDto>,
    pub isotropy: Vec<IsotropyRowDto>,
    pub verdict: bool,
}

pub fn pattern_dto(p: &ZeroPattern) -> Vec<usize> {
    p.iter().map(|i| i + 1).collect()
}

pub fn int_matrix_rows(m: &IntMatrix) -> Vec<Vec<JsonInt>> {
    m.row_vecs()
        .map(|row| row.iter().cloned().map(JsonInt).collect())
        .collect()
}

pub fn rat_matrix_rows(m: &RatMatrix) -> Vec<Vec<JsonRat>> {
    m.row_vecs()
        .map(|row| row.iter().cloned().map(JsonRat).collect())
        .collect()
}

pub fn rat_vec(v: &[Rat]) -> Vec<JsonRat> {
    v.iter().cloned().map(JsonRat).collect()
}

fn certificate_dto(c: &Certificate) -> Vec<(usize, JsonRat)> {
    c.multipliers
        .iter()
        .map(|(i, m)| (*i, JsonRat(m.clone())))
        .collect()
}

pub fn splitting_dto(s: &toristack_core::morita::SplittingData) -> SplittingDto {
    SplittingDto {
        free_rank: s.free_rank,
        torsion: s.torsion.iter().cloned().map(JsonInt).collect(),
        scaling_exponents: int_matrix_rows(&s.scaling_exponents),
        exhausts: s.exhausts,
    }
}

pub fn certificate_section(cert: &MoritaCertificate) -> CertificateSection {
    CertificateSection {
        splitting: splitting_dto(&cert.splitting),
        mu_independent: cert.mu_independent,
        m1_prime_passed: cert.m1_prime.passed,
        m1_rows: cert
            .m1_prime
            .rows
            .iter()
            .map(|r| M1RowDto {
                pattern: pattern_dto(&r.pattern),
                witness: r
                    .witness
                    .as_ref()
                    .map(|w| w.iter().cloned().map(JsonRat).collect()),
                jacobian_det: r.jacobian_det.clone().map(JsonRat),
                ok: r.ok,
            })
            .collect(),
        m2_passed: cert.m2.passed,
        m2_rows: cert
            .m2
            .rows
            .iter()
            .map(|r| M2RowDto {
                feasibility: FeasibilityDto::from_core(&r.result),
                ok: r.ok,
            })
            .collect(),
        level_inclusion_passed: cert.level_in_v.passed,
        level_rows: cert
            .level_in_v
            .rows
            .iter()
            .map(FeasibilityDto::from_core)
            .collect(),
        isotropy: cert
            .isotropy_table
            .iter()
            .map(|r| IsotropyRowDto {
                pattern: pattern_dto(&r.pattern),
                admissible: true,
                symplectic: GroupDesc::from_core(&r.symplectic),
                complex: GroupDesc::from_core(&r.complex),
                matched: r.matched,
            })
            .collect(),
        verdict: cert.verdict,
    }
}
