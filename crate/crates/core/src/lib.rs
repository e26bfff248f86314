//! Decide whether a triangulated surface admits an acyclic uniform oriented
//! matroid compatible with a polyhedral embedding (or immersion) in R^3.
//!
//! The question is reduced to propositional satisfiability ([`encode`]),
//! solved by a built-in CDCL solver or an external one ([`solve`]), and any
//! satisfying assignment is decoded to a chirotope and re-checked by the
//! independent axiom, acyclicity and admissibility tests in [`chirotope`].
//! An unsatisfiable instance proves the surface has no polyhedral embedding.
//!
//! ```
//! use chirosat::complex::{Mode, Triangulation};
//! use chirosat::solve::{decide, DecideOptions, SatStatus};
//!
//! let octahedron = Triangulation::parse("1 3 5 1 3 6 1 4 5 1 4 6 2 3 5 2 3 6 2 4 5 2 4 6").unwrap();
//! let report = decide(&octahedron, Mode::Embedding, &DecideOptions::default()).unwrap();
//! assert_eq!(report.status, SatStatus::Sat);
//! assert!(report.certificate.unwrap().ok());
//! ```

pub mod chirotope;
pub mod combinatorics;
pub mod complex;
pub mod corpus;
pub mod encode;
pub mod error;
pub mod solve;

pub use chirotope::{Basis, Chirotope, PointConfiguration, SignedCircuit};
pub use complex::{Mode, SimplexPair, SurfaceReport, Triangulation};
pub use encode::{encode_instance, CnfFormula, EncodeOptions, Encoding, EncodingStats, VarMap};
pub use error::{ChirotopeError, ComplexError, EncodeError, SolveError};
pub use solve::{decide, Backend, DecideOptions, DecisionReport, SatStatus};
