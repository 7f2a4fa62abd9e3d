//! Independent verification of revival witnesses through the transition
//! matrix `H(t) = exp(itA)`.
//!
//! `H(t)` is built twice: from the character data (one translated row) and
//! from a Jacobi eigendecomposition of the adjacency matrix. A witness is
//! accepted only if the two constructions agree entrywise and the matrix
//! has the revival shape `alpha*I + beta*Q` with `Q` the involution pairing
//! `u <-> a*u`.

use num_complex::Complex;

use crate::cayley::{CayleyGraph, CharacterSpectrum, NUMERIC_ORACLE_CAP};
use crate::chartab::CharacterTable;
use crate::error::{Error, Result};
use crate::group::GroupTable;
use crate::jacobi::{symmetric_eigen, SymmetricEigen};
use crate::linalg::{CMat, Mat};
use crate::revival::RevivalWitness;
use crate::scalar::Real;

/// Default entrywise acceptance tolerance.
pub const ACCEPT_TOL: f64 = 1e-8;
/// Off-diagonal support-detection threshold, two orders above acceptance.
pub const SUPPORT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransitionSource {
    CharacterSum,
    Eigensolver,
}

/// Dense `H(t)` in double (or single) precision.
#[derive(Debug, Clone)]
pub struct TransitionMatrix<R> {
    pub time: R,
    pub entries: CMat<R>,
    pub source: TransitionSource,
}

fn expi<R: Real>(theta: R) -> Complex<R> {
    Complex::new(theta.cos(), theta.sin())
}

/// Entry `H(t)_{u,v} = (1/|G|) sum_chi d_chi chi(u v^{-1}) exp(it lambda_chi)`.
pub fn transition_entry<R: Real>(
    u: usize,
    v: usize,
    t: R,
    g: &GroupTable,
    table: &CharacterTable,
    spectrum: &CharacterSpectrum,
) -> Complex<R> {
    let class = table.classes.class_of[g.mul(u, g.inv(v))];
    let mut acc = Complex::new(R::zero(), R::zero());
    for (row, srow) in table.rows.iter().zip(&spectrum.rows) {
        let chi: Complex<R> = row.values[class].numeric_eval();
        let phase = expi(t * R::from_f64_lossy(srow.lambda_num));
        acc += chi * phase * R::from_f64_lossy(row.degree as f64);
    }
    acc / R::from_f64_lossy(g.order() as f64)
}

/// Full `H(t)` from the character sum, using translation invariance: the
/// entry depends only on the class of `u v^{-1}`, so one value per element
/// suffices.
pub fn transition_matrix_character<R: Real>(
    t: R,
    g: &GroupTable,
    table: &CharacterTable,
    spectrum: &CharacterSpectrum,
) -> TransitionMatrix<R> {
    let n = g.order();
    let mut class_value = vec![Complex::new(R::zero(), R::zero()); table.classes.len()];
    for (c, value) in class_value.iter_mut().enumerate() {
        let mut acc = Complex::new(R::zero(), R::zero());
        for (row, srow) in table.rows.iter().zip(&spectrum.rows) {
            let chi: Complex<R> = row.values[c].numeric_eval();
            let phase = expi(t * R::from_f64_lossy(srow.lambda_num));
            acc += chi * phase * R::from_f64_lossy(row.degree as f64);
        }
        *value = acc / R::from_f64_lossy(n as f64);
    }
    let mut entries = CMat::zeros(n);
    for u in 0..n {
        for v in 0..n {
            entries[(u, v)] = class_value[table.classes.class_of[g.mul(u, g.inv(v))]];
        }
    }
    TransitionMatrix {
        time: t,
        entries,
        source: TransitionSource::CharacterSum,
    }
}

/// Eigendecomposition of the adjacency matrix, reusable across times.
pub fn graph_eigen<R: Real>(graph: &CayleyGraph) -> Result<SymmetricEigen<R>> {
    if graph.order > NUMERIC_ORACLE_CAP {
        return Err(Error::OracleCapExceeded {
            order: graph.order,
            cap: NUMERIC_ORACLE_CAP,
        });
    }
    let n = graph.order;
    let mut a = Mat::zeros(n);
    for u in 0..n {
        for v in 0..n {
            if graph.adjacent(u, v) {
                a[(u, v)] = R::one();
            }
        }
    }
    symmetric_eigen(&a)
}

/// `H(t) = V exp(it Lambda) V^T` from a precomputed eigendecomposition.
pub fn transition_matrix_from_eigen<R: Real>(
    t: R,
    eigen: &SymmetricEigen<R>,
) -> TransitionMatrix<R> {
    let n = eigen.values.len();
    let phases: Vec<Complex<R>> = eigen.values.iter().map(|&l| expi(t * l)).collect();
    let mut entries = CMat::zeros(n);
    for u in 0..n {
        for k in 0..n {
            let w = phases[k] * eigen.vectors[(u, k)];
            for v in 0..n {
                entries[(u, v)] += w * eigen.vectors[(v, k)];
            }
        }
    }
    TransitionMatrix {
        time: t,
        entries,
        source: TransitionSource::Eigensolver,
    }
}

/// Full `H(t)` from a fresh Jacobi eigendecomposition of the adjacency.
pub fn transition_matrix_numeric<R: Real>(
    t: R,
    graph: &CayleyGraph,
) -> Result<TransitionMatrix<R>> {
    Ok(transition_matrix_from_eigen(t, &graph_eigen(graph)?))
}

/// The revival shape `H = alpha*I + beta*Q` when present.
#[derive(Debug, Clone)]
pub struct RevivalShape<R> {
    pub alpha: Complex<R>,
    pub beta: Complex<R>,
    /// `pairing[u]` is the unique partner of `u`; a fixed-point-free
    /// involution.
    pub pairing: Vec<usize>,
}

/// Test whether `H` is `alpha*I + beta*Q` for a symmetric zero-diagonal
/// permutation `Q`.
///
/// Diagonal entries must share a common `alpha` within `accept_tol`; each
/// row must carry exactly one off-diagonal entry above `support_tol`, all
/// equal to a common `beta` within `accept_tol`; everything else must be
/// below `accept_tol`; and `(alpha, beta)` must satisfy the unitarity
/// identities. Absence means "no revival at this time".
pub fn check_revival_shape<R: Real>(
    h: &TransitionMatrix<R>,
    accept_tol: R,
    support_tol: R,
) -> Option<RevivalShape<R>> {
    let n = h.entries.dim();
    let alpha = h.entries[(0, 0)];
    for u in 0..n {
        if (h.entries[(u, u)] - alpha).norm() > accept_tol {
            return None;
        }
    }
    let mut pairing = vec![usize::MAX; n];
    let mut beta = Complex::new(R::zero(), R::zero());
    for u in 0..n {
        let mut partner = None;
        for v in 0..n {
            if v == u {
                continue;
            }
            if h.entries[(u, v)].norm() > support_tol {
                if partner.is_some() {
                    return None; // two large off-diagonal entries in a row
                }
                partner = Some(v);
            }
        }
        let v = partner?;
        pairing[u] = v;
        if u == 0 {
            beta = h.entries[(0, v)];
        } else if (h.entries[(u, v)] - beta).norm() > accept_tol {
            return None;
        }
    }
    for u in 0..n {
        let v = pairing[u];
        if v == u || pairing[v] != u {
            return None;
        }
        for w in 0..n {
            if w != u && w != v && h.entries[(u, w)].norm() > accept_tol {
                return None;
            }
        }
    }
    let one = R::one();
    if ((alpha.norm_sqr() + beta.norm_sqr()) - one).abs() > accept_tol {
        return None;
    }
    let cross = alpha.conj() * beta + alpha * beta.conj();
    if cross.norm() > accept_tol {
        return None;
    }
    Some(RevivalShape {
        alpha,
        beta,
        pairing,
    })
}

/// Outcome of the two-construction witness check.
#[derive(Debug, Clone)]
pub struct WitnessVerification {
    /// Worst entrywise disagreement between the two constructions.
    pub cross_construction_dev: f64,
    pub alpha_dev: f64,
    pub beta_dev: f64,
    /// The shape pairing matches `u -> a*u` everywhere.
    pub pairing_ok: bool,
    pub shape_found: bool,
    pub pass: bool,
}

impl WitnessVerification {
    fn failed(cross_dev: f64) -> Self {
        WitnessVerification {
            cross_construction_dev: cross_dev,
            alpha_dev: f64::INFINITY,
            beta_dev: f64::INFINITY,
            pairing_ok: false,
            shape_found: false,
            pass: false,
        }
    }
}

/// Verify a witness at tolerance `tol`: build `H(t)` both ways, demand
/// cross-agreement, then demand the revival shape with the witness's
/// `alpha`, `beta` and the pairing `u <-> a*u`.
pub fn verify_witness(
    w: &RevivalWitness,
    g: &GroupTable,
    graph: &CayleyGraph,
    table: &CharacterTable,
    spectrum: &CharacterSpectrum,
    tol: f64,
) -> Result<WitnessVerification> {
    let eigen = graph_eigen::<f64>(graph)?;
    Ok(verify_witness_with_eigen(w, g, &eigen, table, spectrum, tol))
}

/// Same as [`verify_witness`] with a reusable eigendecomposition (one per
/// graph is enough for any number of witnesses and times).
pub fn verify_witness_with_eigen(
    w: &RevivalWitness,
    g: &GroupTable,
    eigen: &SymmetricEigen<f64>,
    table: &CharacterTable,
    spectrum: &CharacterSpectrum,
    tol: f64,
) -> WitnessVerification {
    let t = w.time();
    let h_char = transition_matrix_character(t, g, table, spectrum);
    let h_num = transition_matrix_from_eigen(t, eigen);
    let cross_dev = h_char.entries.max_abs_diff(&h_num.entries);
    if cross_dev >= tol {
        return WitnessVerification::failed(cross_dev);
    }
    let support = SUPPORT_TOL.max(tol * 1e2);
    let Some(shape) = check_revival_shape(&h_num, tol, support) else {
        return WitnessVerification::failed(cross_dev);
    };
    let alpha_dev = (shape.alpha - w.alpha).norm();
    let beta_dev = (shape.beta - w.beta).norm();
    let pairing_ok = (0..g.order()).all(|u| shape.pairing[u] == g.mul(w.involution, u));
    WitnessVerification {
        cross_construction_dev: cross_dev,
        alpha_dev,
        beta_dev,
        pairing_ok,
        shape_found: true,
        pass: cross_dev < tol && alpha_dev < tol && beta_dev < tol && pairing_ok,
    }
}
