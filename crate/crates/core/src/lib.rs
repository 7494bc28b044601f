//! Exact computation of Euler series of restricted Chow varieties for smooth
//! complete toric varieties.
//!
//! The pipeline runs from fan data to generating functions:
//!
//! * [`fan`] parses and validates a simplicial fan and enumerates its cones.
//! * [`polyring`] provides sparse polynomials over `Q` with a Buchberger
//!   implementation and graded normal forms.
//! * [`cohomology`] builds the Stanley–Reisner presentation of the cohomology
//!   ring, assigns every torus orbit closure its class and groups orbits by
//!   class.
//! * [`series`] implements the convolution ring on the class monoid: the
//!   product formula `E_p = ∏ 1/(1 - e_v)`, weight-truncated expansions, the
//!   equivariant series and the pushforward `J`.
//! * [`builtins`] constructs the standard example fans.
//!
//! All arithmetic is exact.

pub mod builtins;
pub mod cohomology;
pub mod fan;
mod feasibility;
mod linalg;
pub mod polyring;
pub mod series;

pub use cohomology::{ClassVector, CohomologyError, CohomologyPresentation, OrbitClassTable};
pub use fan::{Cone, Fan, FanError, RayVector, ValidationReport};
pub use polyring::{GroebnerBasis, Monomial, PolyError, Polynomial};
pub use series::{
    FiniteSupportFunction, MonoidElement, RationalSeriesExpr, SeriesError, TruncatedSeries,
    WeightFunctional,
};
