//! JSON run records and the polyhedral verification report.

use eqcol_core::oracle::Oracle;
use eqcol_core::text::row_to_text;
use eqcol_core::verify::Audit;
use eqcol_core::{CutRow, EquitableColoring, Graph, Vars};
use serde::{Deserialize, Serialize};

use crate::engine::{SolveStats, SolverConfig};

/// Value of the `schema` field of every [`RunRecord`].
pub const RUN_SCHEMA: &str = "eqcol-run/1";

/// One `solve` or `verify` invocation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub schema: String,
    pub command: String,
    pub instance: String,
    pub n: usize,
    pub edges: usize,
    /// Set for generated instances.
    pub density: Option<f64>,
    pub seed: Option<u64>,
    pub config: Option<SolverConfig>,
    pub stats: Option<SolveStats>,
    /// `χ_eq` when proven.
    pub optimum: Option<usize>,
    /// Best coloring found, one color per vertex.
    pub coloring: Option<Vec<usize>>,
    pub checks: Option<SolveChecks>,
    pub verification: Option<VerifyReport>,
}

impl RunRecord {
    pub fn new(command: &str, instance: &str, g: &Graph) -> Self {
        Self {
            schema: RUN_SCHEMA.into(),
            command: command.into(),
            instance: instance.into(),
            n: g.n(),
            edges: g.num_edges(),
            density: None,
            seed: None,
            config: None,
            stats: None,
            optimum: None,
            coloring: None,
            checks: None,
            verification: None,
        }
    }
}

/// Independent checks of a solver result.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveChecks {
    /// The returned coloring is a proper equitable coloring.
    pub coloring_valid: bool,
    /// `χ_eq` by enumeration, when `n` is within the oracle cap.
    pub oracle_chi_eq: Option<usize>,
}

impl SolveChecks {
    pub fn run(g: &Graph, coloring: &EquitableColoring, oracle_cap: usize) -> Self {
        let coloring_valid = EquitableColoring::new(g, coloring.colors().collect()).is_ok();
        let oracle_chi_eq = (g.n() <= oracle_cap).then(|| Oracle::with_cap(oracle_cap).chi_eq_exact(g).ok()).flatten();
        Self { coloring_valid, oracle_chi_eq }
    }

    pub fn agree(&self, stats: &SolveStats) -> bool {
        self.coloring_valid && self.oracle_chi_eq.is_none_or(|k| !stats.proven_optimal || k == stats.best_k)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BulletVerdict {
    pub label: String,
    pub holds: bool,
    /// False for a bullet that is one of several alternatives.
    pub required: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowVerdict {
    /// One-line text form of the row.
    pub row: String,
    pub family: String,
    pub valid: bool,
    /// Dimension of the face where the row is tight; valid rows only.
    pub face_dimension: Option<isize>,
    pub facet: Option<bool>,
    /// Whether the family's sufficient facet conditions all hold; `None`
    /// when the family has none.
    pub conditions_hold: Option<bool>,
    pub bullets: Vec<BulletVerdict>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    /// Number of equitable colorings of the graph.
    pub eqcols: usize,
    pub chi_eq: usize,
    /// `A(G)`.
    pub infeasible_k: Vec<usize>,
    pub standing_assumption: bool,
    pub dimension: isize,
    /// `n² − (|A(G)| + 2)`.
    pub predicted_dimension: isize,
    pub rows: Vec<RowVerdict>,
}

/// Audits `rows` on `g` by full enumeration.
pub fn verify(g: &Graph, rows: &[CutRow], oracle_cap: usize) -> eqcol_core::Result<VerifyReport> {
    let audit = Audit::new(g, &Oracle::with_cap(oracle_cap))?;
    let vars = Vars::new(g.n());
    let rows = rows
        .iter()
        .map(|row| {
            let valid = audit.catalog().is_valid(row);
            let face = if valid { audit.face_dimension(row).ok() } else { None };
            let conditions = audit.check_sufficient_conditions(row).ok();
            let bullets = conditions
                .iter()
                .flat_map(|c| {
                    let req = c.required.iter().map(|b| (b, true));
                    req.chain(c.alternatives.iter().map(|b| (b, false)))
                })
                .map(|(b, required)| BulletVerdict { label: b.label.into(), holds: b.holds, required })
                .collect();
            RowVerdict {
                row: row_to_text(row, vars),
                family: row.family.kind().into(),
                valid,
                face_dimension: face.as_ref().map(|f| f.affine_dim),
                facet: face.map(|f| f.affine_dim == audit.ecp_dimension().affine_dim - 1),
                conditions_hold: conditions.filter(|c| !(c.required.is_empty() && c.alternatives.is_empty())).map(|c| c.all_hold()),
                bullets,
            }
        })
        .collect();
    Ok(VerifyReport {
        eqcols: audit.catalog().len(),
        chi_eq: audit.catalog().chi_eq(),
        infeasible_k: audit.infeasible_k_set().iter().copied().collect(),
        standing_assumption: audit.meets_standing_assumption(),
        dimension: audit.ecp_dimension().affine_dim,
        predicted_dimension: audit.predicted_dimension(),
        rows,
    })
}
