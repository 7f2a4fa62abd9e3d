//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed group specification: {0}")]
    MalformedSpec(String),

    #[error("row {row} of the multiplication table is not a permutation of 0..{order}")]
    RowNotPermutation { row: usize, order: usize },

    #[error("column {col} of the multiplication table is not a permutation of 0..{order}")]
    ColNotPermutation { col: usize, order: usize },

    #[error("no identity element in the multiplication table")]
    NoIdentity,

    #[error("element {element} has no inverse")]
    NoInverse { element: usize },

    #[error("associativity fails at triple ({x}, {y}, {z})")]
    AssociativityFailure { x: usize, y: usize, z: usize },

    #[error("generated group exceeds the size cap {cap}")]
    SizeCapExceeded { cap: usize },

    #[error("unknown element {0:?}")]
    UnknownElement(String),

    #[error("connection set is empty")]
    EmptyConnectionSet,

    #[error("connection set contains the identity")]
    IdentityInConnectionSet,

    #[error("connection set is not inverse-closed: missing inverse of element {element}")]
    NotInverseClosed { element: usize },

    #[error(
        "connection set is not a union of conjugacy classes: element {element} \
         requires the whole class of size {class_size}"
    )]
    NotClassClosed { element: usize, class_size: usize },

    #[error("group is not abelian")]
    NotAbelian,

    #[error("group was not built as dihedral({n})")]
    DihedralMismatch { n: usize },

    #[error("group does not match the supplied moduli {moduli:?}")]
    ModuliMismatch { moduli: Vec<u64> },

    #[error("no prime p = 1 (mod {m}) with p > {lower} below 2^20")]
    NoSuitablePrime { m: u64, lower: u64 },

    #[error("character table inconsistency: {0}")]
    TableInconsistency(String),

    #[error("spectrum is not integral; eigenvalue index {row} has no exact integer value")]
    NonIntegralSpectrum { row: usize },

    #[error("element {element} is not a central involution")]
    NotCentralInvolution { element: usize },

    #[error("character {row} has value incompatible with a central involution")]
    SplitContradiction { row: usize },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps")]
    JacobiNoConvergence { sweeps: usize },

    #[error("graph is disconnected: the connection set does not generate the group")]
    Disconnected,

    #[error("order {order} exceeds the numeric-oracle cap {cap}")]
    OracleCapExceeded { order: usize, cap: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("internal error: {0}")]
    Internal(String),
}
