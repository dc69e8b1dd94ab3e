//! Geometry of alpha and L_p normed planes: metric circles, common external
//! tangents, homothety centers and Monge lines.
//!
//! Every computation is generic over [`geom::Scalar`], implemented by exact
//! [`geom::Rational`] and by `f64`.

pub mod circles;
pub mod fuzz;
pub mod geom;
pub mod instance;
pub mod metrics;
pub mod monge;
pub mod render;
pub mod tangents;

pub use circles::{Boundary, Circle, Position};
pub use geom::{HPoint, Line, Point, Rational, Scalar, ScalarMode};
pub use metrics::{Exponent, Metric};
pub use monge::{verify_monge, MongeReport};
