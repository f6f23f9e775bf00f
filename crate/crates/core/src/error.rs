use thiserror::Error;

use crate::geom::GeneralPositionReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("need at least two distinct sites, found {found}")]
    TooFewSites { found: usize },

    #[error("site {index} has a non-finite coordinate")]
    NonFiniteCoordinate { index: usize },

    #[error("points are collinear (orientation determinant {det:e})")]
    CollinearInput { det: f64 },

    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),

    #[error("sites are not in general position: {} co-circular hull quadruple(s)", .0.violations.len())]
    GeneralPositionViolation(GeneralPositionReport),

    /// The weight point sits on a hull vertex. Every point of that vertex's
    /// farthest cell is then optimal; the cell is described by the boundary
    /// edges that carry the site.
    #[error("weight point coincides with hull vertex {site}")]
    VertexCoincidence { site: usize, cell_edges: Vec<usize> },

    #[error("not applicable: {0}")]
    NotApplicable(&'static str),

    #[error("depth {depth} out of range 0..={max}")]
    DepthOutOfRange { depth: usize, max: usize },

    #[error("rotation angle is zero; the displacement field is a constant translation")]
    ZeroRotation,

    #[error("displacement budget {budget} outside (0, {limit}]")]
    BudgetOutOfRange { budget: f64, limit: f64 },
}
