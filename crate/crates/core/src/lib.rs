//! Iterated logarithmic Lipschitz spaces on finite truncations of rooted
//! trees, and the multiplication operators between them.
//!
//! The modules build on each other bottom-up:
//!
//! * [`tree`]: vertex addressing, spheres, parent links, distance.
//! * [`weights`]: the iterated logarithms `ℓ_j` and weights `Λ_k`.
//! * [`spaces`]: functions on a truncation, derivatives, `‖·‖_k`.
//! * [`expr`] and [`symbols`]: the radial expression language and symbols `ψ`.
//! * [`testfns`]: the extremal test functions used in the boundedness,
//!   compactness and isometry arguments.
//! * [`analysis`]: `μ`/`ν` profiles, operator norm bounds, tail diagnostics,
//!   isometry defect.
//! * [`exact`]: the exact operator norm on a truncation, with witness and a
//!   random-search oracle.
//! * [`verify`]: property suites shared by the CLI and the acceptance tests.

pub mod analysis;
pub mod exact;
pub mod expr;
pub mod num17;
pub mod spaces;
pub mod symbols;
pub mod testfns;
pub mod tree;
pub mod verify;
pub mod weights;

pub use num_complex::Complex64;
pub use spaces::{NormReport, TreeFunction};
pub use symbols::Symbol;
pub use tree::{TreeShape, TreeTruncation, VertexId};
