//! Serializable pipeline reports.
//!
//! Sheets, components, loops and branch points are numbered from 1.
//! Complex numbers are `[re, im]` pairs.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: &str = "1.0";

pub type C = [f64; 2];

pub fn c2(z: Complex64) -> C {
    [z.re, z.im]
}

pub fn c3(x: &[Complex64; 3]) -> [C; 3] {
    [c2(x[0]), c2(x[1]), c2(x[2])]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveSummary {
    pub degree: u32,
    pub degrees: Vec<u32>,
    pub components: usize,
    /// Components that are lines.
    pub lines: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PencilReport {
    /// Base point `Q` and the frame points `P0`, `P1`, exact.
    pub base_point: [String; 3],
    pub p0: [String; 3],
    pub p1: [String; 3],
    pub s0: C,
    pub discriminant_degree: usize,
    pub distinct_roots: usize,
    pub rejected_frames: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BranchPointReport {
    pub index: usize,
    pub s: C,
    pub kind: String,
    /// Multiplicity as a root of the discriminant.
    pub multiplicity: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<[C; 3]>,
    /// `[r, s]` of the branches at `point`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub branches: Vec<[u32; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LoopReport {
    pub target: usize,
    pub radius: f64,
    pub detours: usize,
    pub points: Vec<C>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorReport {
    #[serde(rename = "loop")]
    pub loop_index: usize,
    pub branch_point: usize,
    pub kind: String,
    pub permutation: Vec<usize>,
    pub cycle_type: Vec<usize>,
    pub steps: usize,
    pub rejected_steps: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupReport {
    /// Decimal string; group orders overflow machine integers quickly.
    pub order: String,
    pub orbits: Vec<Vec<usize>>,
    /// Thickest partition `J` with `Σ_J ⊆ G`.
    pub j_g: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checks {
    pub line_sheets_fixed: bool,
    pub partition_invariant: bool,
    pub petal_product_identity: bool,
    pub singular_lines_trivial: bool,
    pub dual_tangents_transpositions: bool,
    pub cycle_types_match_branches: bool,
    pub labels_stable: bool,
    pub j_g_matches_components: bool,
    /// Permutations unchanged after doubling the loop samples, when run.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_doubling: Option<bool>,
}

impl Checks {
    pub fn all(&self) -> bool {
        self.line_sheets_fixed
            && self.partition_invariant
            && self.petal_product_identity
            && self.singular_lines_trivial
            && self.dual_tangents_transpositions
            && self.cycle_types_match_branches
            && self.labels_stable
            && self.sample_doubling != Some(false)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalDegreeSummary {
    pub near_q: Vec<usize>,
    pub on_fiber: Vec<usize>,
    pub near_section: Vec<usize>,
    pub passes: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalRow {
    /// `singular`, `flex` or `point`.
    pub kind: String,
    pub point: [C; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<[String; 3]>,
    pub component: usize,
    /// Index of the branch among those at the point.
    pub branch: usize,
    pub r: u32,
    pub s: u32,
    pub tangent: [C; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub local_degree: Option<LocalDegreeSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualParamSummary {
    pub points: usize,
    pub samples: usize,
    pub max_incidence: f64,
    pub max_tangency: f64,
    pub max_discriminant: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RConditions {
    pub r0: bool,
    pub r1: bool,
    pub r2: bool,
    /// Tangency generators act as transpositions.
    pub r3: bool,
    pub dual_lines: Vec<[C; 3]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycleReport {
    pub cycle: Vec<usize>,
    pub partition: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub block: Option<Vec<usize>>,
    pub invariant: bool,
    pub cond_i: bool,
    pub cond_ii: bool,
    pub cond_iii: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaSummary {
    pub sigma: Vec<usize>,
    pub hypotheses_hold: bool,
    pub j_h: Vec<Vec<usize>>,
    pub order_h: String,
    pub conclusion_holds: bool,
    pub cycles: Vec<CycleReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CandidateSummary {
    pub partition: Vec<Vec<usize>>,
    pub invariant: bool,
    pub transitive_on_blocks: bool,
    pub equals_j_g: bool,
    pub order_matches: bool,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropositionSummary {
    pub transpositions: usize,
    pub lemmas: Vec<LemmaSummary>,
    pub hypotheses_hold: bool,
    pub j_g: Vec<Vec<usize>>,
    pub order_g: String,
    pub conclusion_holds: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub candidate: Option<CandidateSummary>,
    pub passes: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Conditions {
    pub r_conditions: RConditions,
    pub proposition: PropositionSummary,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub local_ms: f64,
    pub pencil_ms: f64,
    pub tracking_ms: f64,
    pub group_ms: f64,
    pub total_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub schema_version: String,
    pub seed: u64,
    pub tolerance: f64,
    pub curve: CurveSummary,
    pub pencil: PencilReport,
    pub branch_points: Vec<BranchPointReport>,
    pub loops: Vec<LoopReport>,
    pub start_fiber: Vec<C>,
    /// Component of each sheet of the start fiber.
    pub sheet_components: Vec<usize>,
    pub component_partition: Vec<Vec<usize>>,
    pub generators: Vec<GeneratorReport>,
    pub group: GroupReport,
    pub checks: Checks,
    pub local: Vec<LocalRow>,
    pub dual_parametrization: DualParamSummary,
    pub conditions: Conditions,
    pub verdict: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

impl PipelineReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    /// Verdict and every consistency check.
    pub fn passes(&self) -> bool {
        self.verdict && self.checks.all()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonodromyCertificate {
    pub schema_version: String,
    pub seed: u64,
    pub pair: [usize; 2],
    pub component: usize,
    /// Signed 1-based loop letters; a negative letter runs the loop backwards.
    pub word: Vec<i32>,
    pub polyline: Vec<C>,
    pub validated: bool,
    pub permutation: Vec<usize>,
}
