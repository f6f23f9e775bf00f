//! Minimum enclosing circle with a dynamic weight point.
//!
//! Given static sites `S` and a weight point `p`, find the center `x`
//! maximizing `‖x − p‖ / max_i ‖x − x_i‖`. The maximizer lies on the
//! farthest-point Voronoi boundary of `S`; each boundary edge has a closed
//! form optimum, and re-rooting the boundary at the minimum enclosing
//! circle's center organizes the plane of weight points into arc-bounded
//! regions. The same machinery answers the worst-case target displacement
//! of a 2D rigid registration whose fiducials may each move at most `C`.

pub mod center;
pub mod division;
pub mod edge;
pub mod error;
pub mod fpvd;
pub mod geom;
pub mod oracle;
pub mod rigid;

#[cfg(test)]
pub(crate) mod test_support;

pub use center::{
    enumerate_regions, solve, solve_by_descent, solve_by_traversal, BoundaryPiece, CenterFunction, DescentStats, Locus,
    PlaneDivision, Region, RegionLabel, Solution,
};
pub use division::{build_division_tree, DivisionTree, DvEdge, DvNode, EdgeEnd, RootKind};
pub use edge::{
    arch_contains, Arch, BoundedRegion, EdgeCoefficients, EdgeFrame, EdgeOptimum, EdgeSolution, UnboundedRegion,
};
pub use error::{Error, Result};
pub use fpvd::{
    build_fvb, build_fvb_with_seed, compute_mec, node_inverse_region, CenterLocation, EdgeId, FvbEdge, FvbGraph,
    FvbNode, NodeId, NodePosition, NodeRegion,
};
pub use geom::{
    check_general_position, circumcenter, convex_hull, evaluate_objective, Circle, ConvexHull, GeneralPositionReport,
    Point, Similarity, SiteSet, DISTANCE_TOL, PREDICATE_TOL,
};
pub use oracle::{oracle_rigid_max, oracle_solve, OracleConfig, OracleSolution, RigidOracleResult};
pub use rigid::{max_displacement, rigid_constraint_check, tre, DisplacementBound, RigidMotion, TreContour};
