//! Connection sets, Cayley graphs, and their exact spectra via characters.

use num_complex::Complex64;

use crate::chartab::CharacterTable;
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::group::{ClassPartition, GroupTable};
use crate::jacobi::symmetric_eigen;
use crate::linalg::Mat;

/// Cap on the order handled by the dense numeric paths.
pub const NUMERIC_ORACLE_CAP: usize = 512;

/// A validated quasi-abelian connection set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectionSet {
    /// Sorted element indices.
    pub elements: Vec<usize>,
    /// Sorted indices of the conjugacy classes the set unites.
    pub class_ids: Vec<usize>,
}

impl ConnectionSet {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }
}

/// How the caller describes a connection set before validation.
#[derive(Debug, Clone)]
pub enum ConnectionInput {
    /// Explicit element list; must be exactly a union of classes.
    Elements(Vec<usize>),
    /// Class representatives; each is expanded to its whole class.
    ClassRepresentatives(Vec<usize>),
}

/// Validate a connection set: no identity, inverse-closed, and a union of
/// conjugacy classes (the quasi-abelian condition).
pub fn validate_connection_set(
    g: &GroupTable,
    classes: &ClassPartition,
    input: &ConnectionInput,
) -> Result<ConnectionSet> {
    let elements: Vec<usize> = match input {
        ConnectionInput::Elements(raw) => {
            let mut v = raw.clone();
            v.sort_unstable();
            v.dedup();
            v
        }
        ConnectionInput::ClassRepresentatives(reps) => {
            let mut v: Vec<usize> = reps
                .iter()
                .flat_map(|&rep| classes.classes[classes.class_of[rep]].iter().copied())
                .collect();
            v.sort_unstable();
            v.dedup();
            v
        }
    };
    if elements.is_empty() {
        return Err(Error::EmptyConnectionSet);
    }
    for &x in &elements {
        if x >= g.order() {
            return Err(Error::UnknownElement(x.to_string()));
        }
    }
    if elements.binary_search(&g.identity()).is_ok() {
        return Err(Error::IdentityInConnectionSet);
    }
    for &x in &elements {
        if elements.binary_search(&g.inv(x)).is_err() {
            return Err(Error::NotInverseClosed { element: x });
        }
    }
    let mut class_ids: Vec<usize> = elements.iter().map(|&x| classes.class_of[x]).collect();
    class_ids.sort_unstable();
    class_ids.dedup();
    for &c in &class_ids {
        for &member in &classes.classes[c] {
            if elements.binary_search(&member).is_err() {
                return Err(Error::NotClassClosed {
                    element: member,
                    class_size: classes.size(c),
                });
            }
        }
    }
    Ok(ConnectionSet {
        elements,
        class_ids,
    })
}

/// True iff the connection set generates the whole group (breadth-first
/// closure from the identity).
pub fn is_connected(g: &GroupTable, s: &ConnectionSet) -> bool {
    let n = g.order();
    let mut seen = vec![false; n];
    seen[g.identity()] = true;
    let mut stack = vec![g.identity()];
    let mut count = 1usize;
    while let Some(x) = stack.pop() {
        for &s_el in &s.elements {
            let y = g.mul(s_el, x);
            if !seen[y] {
                seen[y] = true;
                count += 1;
                stack.push(y);
            }
        }
    }
    count == n
}

/// The Cayley graph as a dense adjacency matrix.
#[derive(Debug, Clone)]
pub struct CayleyGraph {
    pub order: usize,
    pub degree: usize,
    adjacency: Vec<u8>,
}

impl CayleyGraph {
    pub fn new(g: &GroupTable, s: &ConnectionSet) -> Self {
        let n = g.order();
        let mut adjacency = vec![0u8; n * n];
        for x in 0..n {
            for &s_el in &s.elements {
                adjacency[g.mul(s_el, x) * n + x] = 1;
            }
        }
        CayleyGraph {
            order: n,
            degree: s.len(),
            adjacency,
        }
    }

    #[inline]
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adjacency[u * self.order + v] == 1
    }

    pub fn adjacency_matrix(&self) -> Mat<f64> {
        let n = self.order;
        let mut m = Mat::zeros(n);
        for u in 0..n {
            for v in 0..n {
                if self.adjacent(u, v) {
                    m[(u, v)] = 1.0;
                }
            }
        }
        m
    }
}

/// One eigenvalue of the graph, attached to its character.
#[derive(Debug, Clone)]
pub struct SpectrumRow {
    pub degree: u64,
    /// Multiplicity `degree^2`.
    pub multiplicity: u64,
    /// Exact `degree * lambda = sum_{g in S} chi(g)`.
    pub char_sum: Cyclotomic,
    /// `lambda` as an integer when the exact sum is a rational integer
    /// divisible by the degree.
    pub lambda_int: Option<i64>,
    pub lambda_num: f64,
}

/// Per-character spectrum of a quasi-abelian Cayley graph.
#[derive(Debug, Clone)]
pub struct CharacterSpectrum {
    /// Rows aligned with the character-table rows.
    pub rows: Vec<SpectrumRow>,
    pub connection_size: usize,
    pub trivial_row: usize,
}

impl CharacterSpectrum {
    pub fn all_integral(&self) -> bool {
        self.rows.iter().all(|r| r.lambda_int.is_some())
    }

    /// Zero-trace identity `sum_chi d^2 lambda = 0`: exact when the spectrum
    /// is integral, within `1e-8 * order` numerically otherwise.
    pub fn trace_is_zero(&self) -> bool {
        let order: u64 = self.rows.iter().map(|r| r.multiplicity).sum();
        if self.all_integral() {
            self.rows
                .iter()
                .map(|r| r.multiplicity as i64 * r.lambda_int.unwrap())
                .sum::<i64>()
                == 0
        } else {
            let trace: f64 = self
                .rows
                .iter()
                .map(|r| r.multiplicity as f64 * r.lambda_num)
                .sum();
            trace.abs() <= 1e-8 * order as f64
        }
    }
}

/// Eigenvalues `lambda_chi = (1/d_chi) sum_{g in S} chi(g)`, computed as
/// class-weighted exact character sums.
pub fn spectrum_by_character(s: &ConnectionSet, table: &CharacterTable) -> CharacterSpectrum {
    let m = table.root_order;
    let rows = table
        .rows
        .iter()
        .map(|row| {
            let mut sum = Cyclotomic::zero(m);
            for &c in &s.class_ids {
                sum = sum.add(&row.values[c].scale(table.classes.size(c) as i64));
            }
            let d = row.degree as i64;
            let lambda_int = sum.is_rational_integer().and_then(|r| {
                if r % d == 0 {
                    Some(r / d)
                } else {
                    None
                }
            });
            let value: Complex64 = sum.numeric_eval();
            SpectrumRow {
                degree: row.degree,
                multiplicity: row.degree * row.degree,
                char_sum: sum,
                lambda_int,
                lambda_num: value.re / d as f64,
            }
        })
        .collect();
    CharacterSpectrum {
        rows,
        connection_size: s.len(),
        trivial_row: table.trivial_row(),
    }
}

/// Outcome of comparing the character-side spectrum against a direct
/// Jacobi diagonalization of the adjacency matrix.
#[derive(Debug, Clone)]
pub struct SpectrumCrossCheck {
    pub max_diff: f64,
    pub pass: bool,
}

/// Diagonalize the adjacency matrix numerically and compare eigenvalue
/// multisets (characters expanded with multiplicity `d^2`).
pub fn numeric_spectrum_crosscheck(
    graph: &CayleyGraph,
    spectrum: &CharacterSpectrum,
) -> Result<SpectrumCrossCheck> {
    if graph.order > NUMERIC_ORACLE_CAP {
        return Err(Error::OracleCapExceeded {
            order: graph.order,
            cap: NUMERIC_ORACLE_CAP,
        });
    }
    let eig = symmetric_eigen(&graph.adjacency_matrix())?;
    let numeric = eig.sorted_values();
    let mut character_side: Vec<f64> = Vec::with_capacity(graph.order);
    for row in &spectrum.rows {
        for _ in 0..row.multiplicity {
            character_side.push(row.lambda_num);
        }
    }
    character_side.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    if character_side.len() != numeric.len() {
        return Err(Error::Internal(format!(
            "character side lists {} eigenvalues for a graph of order {}",
            character_side.len(),
            numeric.len()
        )));
    }
    let max_diff = character_side
        .iter()
        .zip(&numeric)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    Ok(SpectrumCrossCheck {
        max_diff,
        pass: max_diff < 1e-7,
    })
}
