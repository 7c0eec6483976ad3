//! Nonlocal curvature flow on Cartesian grids.
//!
//! Sets evolve by the minimizing-movement scheme: each time step minimizes the
//! nonlocal perimeter of a candidate set minus `1/h` times the integral of the
//! signed distance to the current set. On a grid this energy is a
//! pairwise-submodular pseudo-boolean function, so every step is solved exactly
//! by a single max-flow computation, and both the inclusion-minimal and the
//! inclusion-maximal minimizers are recovered from the residual network.
//!
//! The same machinery certifies outward minimality of a set (no enlargement
//! inside a region lowers the localized perimeter), measures the strong
//! minimality constant, and reports nonlocal mean convexity of a set and of its
//! dilations.
//!
//! Module map:
//!
//! * [`kernel`]: interaction tables built from radial kernels.
//! * [`gridset`]: grid geometry, discrete sets, signed distance, dilation.
//! * [`energy`]: nonlocal perimeter, curvature, the `J_K` functional and its
//!   layer-cake decomposition.
//! * [`mincut`]: exact minimization of the cut energies.
//! * [`atw`]: one minimizing-movement step, flows, arrival times, level functions.
//! * [`minimality`]: outward-minimality certificates and convexity reports.
//! * [`oracle`]: brute-force references used by the test suites.
//! * [`scenario`]: config-driven experiment runner behind the `nlflow` binary.

pub mod atw;
pub mod energy;
pub mod error;
pub mod gridset;
pub mod kernel;
pub mod mincut;
pub mod minimality;
pub mod oracle;
pub mod quadrature;
pub mod scenario;
pub mod shapes;

pub use error::{Error, Result};
pub use gridset::{DiscreteSet, GridGeometry, ScalarField};
pub use kernel::{InteractionTable, KernelKind, Offset, RadialProfile};
