//! Minimal spanning trees, Steiner minimal trees and Steiner ratios on the Euclidean
//! plane, on flat cones and on the surface of an isosceles tetrahedron.
//!
//! Cones of angle `2π/k` and the tetrahedron surface are branched-covered by the plane;
//! Steiner trees there are found by lifting the terminals to the plane sheet by sheet,
//! solving in the plane and projecting the shortest tree back.

pub mod cli;
pub mod covering;
pub mod error;
pub mod quotient;
pub mod ratio;
pub mod space;
pub mod spanning;
pub mod steiner;

pub use covering::{verify_covering, CoveringMap, CoveringReport, DeckElement};
pub use error::{Error, Result};
pub use ratio::{search_inf, steiner_ratio, verify_theorem, RatioReport, SmtKind};
pub use quotient::{smt_quotient, smt_upper_star, QuotientSmt, SheetAssignment};
pub use space::{Cone, ConeAngle, Disphenoid, Space, SurfacePoint, Vec2};
pub use spanning::{mst, Role, Tree, TreeVertex};
pub use steiner::{enumerate_full_topologies, optimize_fixed_topology, smt_plane, Topology};
