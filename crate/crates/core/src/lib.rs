//! Exact decision engine for fractional revival on quasi-abelian Cayley
//! graphs.
//!
//! The pipeline: build a finite group ([`group`]), compute its exact
//! character table ([`chartab`], [`dixon`]) over cyclotomic integers
//! ([`cyclotomic`]), derive the graph spectrum per character ([`cayley`]),
//! run the revival decision with its gcd time lattice ([`revival`]), and
//! independently verify every witness through two constructions of the
//! transition matrix ([`oracle`]). [`catalog`] scans families of groups and
//! connection sets; [`report`] assembles deterministic JSON reports.
//!
//! Exact data lives in integers and `Z[zeta_m]`; the floating-point side is
//! generic over the scalar (f32/f64) via [`scalar::Real`], with `f64`
//! aliases below used by the reports and the CLI.

pub mod catalog;
pub mod cayley;
pub mod chartab;
pub mod cyclotomic;
pub mod dixon;
pub mod error;
pub mod group;
pub mod jacobi;
pub mod linalg;
pub mod oracle;
pub mod report;
pub mod revival;
pub mod scalar;

pub use cayley::{CayleyGraph, CharacterSpectrum, ConnectionInput, ConnectionSet};
pub use chartab::{CharacterRow, CharacterTable};
pub use cyclotomic::Cyclotomic;
pub use error::{Error, Result};
pub use group::{ClassPartition, GroupSpec, GroupTable};
pub use report::{analyze, AnalysisInput, AnalysisReport, AnalyzeOptions};
pub use revival::{CharacterSplit, RevivalWitness, WitnessKind};
pub use scalar::Real;

/// `f64` instantiations of the scalar-generic numeric types.
pub type Mat64 = linalg::Mat<f64>;
pub type CMat64 = linalg::CMat<f64>;
pub type SymmetricEigen64 = jacobi::SymmetricEigen<f64>;
pub type TransitionMatrix64 = oracle::TransitionMatrix<f64>;
pub type RevivalShape64 = oracle::RevivalShape<f64>;
