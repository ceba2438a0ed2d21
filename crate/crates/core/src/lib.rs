//! Divisor theory, Jacobians, harmonic morphisms, harmonic 1-forms and
//! hyperelliptic graphs on finite connected multigraphs.
//!
//! Everything is exact: divisors are integer vectors, Jacobian orders and
//! invariant factors are big integers, and 1-forms carry big rationals.
//! Graphs are loopless, connected, and may have parallel edges; vertices and
//! edges are dense indices (`0..n` and `0..m`), and the order in which edges
//! are given fixes their ids.
//!
//! The heavy enumerations (rank searches, pair scans, the multigraph
//! classification scan) accept an [`Exec`] mode. With the `parallel` feature
//! (on by default) [`Exec::Parallel`] fans out over rayon; without it every
//! mode runs sequentially. Results never depend on the mode.

pub mod automorphism;
pub mod divisor;
pub mod enumerate;
mod error;
pub mod exec;
pub mod forms;
pub mod graph;
pub mod hyperelliptic;
pub mod io;
pub mod jacobian;
pub mod linalg;
pub mod morphism;

pub use automorphism::Automorphism;
pub use divisor::{Divisor, ReducedDivisor, VertexFunction};
pub use error::{Error, Result};
pub use exec::Exec;
pub use forms::{FlowBasis, Hyperplane, OneForm};
pub use graph::{Cut, DirectedEdge, EdgeId, Multigraph, VertexId};
pub use hyperelliptic::{HyperellipticWitness, WeierstrassClass};
pub use jacobian::{DivisorClass, HalfIntegerFlow, JacobianStructure};
pub use morphism::{EdgeImage, GraphMorphism, HarmonicCertificate, HarmonicMorphism};
