//! The analyze pipeline and machine-readable reports.
//!
//! Reports are fully reproducible: all orderings are deterministic and
//! floating-point values are rounded to 12 significant digits before
//! serialization, so re-running on the same input yields byte-identical
//! JSON. Wall-clock timings are therefore opt-in (`include_timings`) and
//! excluded by default.

use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::catalog::{Family, ScanReport};
use crate::cayley::{
    is_connected, numeric_spectrum_crosscheck, spectrum_by_character, validate_connection_set,
    CayleyGraph, CharacterSpectrum, ConnectionInput, ConnectionSet, NUMERIC_ORACLE_CAP,
};
use crate::chartab::{
    abelian_character_table, dihedral_character_table, verify_table, CharacterTable,
};
use crate::dixon::generic_character_table;
use crate::error::{Error, Result};
use crate::group::{
    build_group_with_cap, center_elements, central_involutions, conjugacy_classes, ClassPartition,
    GroupSpec, GroupTable, DEFAULT_SIZE_CAP,
};
use crate::oracle::{
    check_revival_shape, graph_eigen, transition_matrix_character, transition_matrix_from_eigen,
    verify_witness_with_eigen, ACCEPT_TOL, SUPPORT_TOL,
};
use crate::revival::{decide_fractional_revival, divisor_certificate, RevivalWitness};

pub const SCHEMA: &str = "frevival/1";

/// f64 wrapper serialized at 12 significant digits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct F12(pub f64);

fn round_sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return 0.0;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

impl F12 {
    /// For amplitude components: snap sub-representable noise to zero.
    fn amplitude(x: f64) -> F12 {
        F12(if x.abs() < 1e-12 { 0.0 } else { x })
    }
}

impl Serialize for F12 {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_f64(round_sig12(self.0))
    }
}

fn complex_json(z: Complex64) -> [F12; 2] {
    [F12::amplitude(z.re), F12::amplitude(z.im)]
}

// ---------------------------------------------------------------------------
// input documents
// ---------------------------------------------------------------------------

/// An element reference in input JSON: index, label, or label tuple.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(untagged)]
pub enum ElementRef {
    Index(usize),
    Label(String),
    Tuple(Vec<serde_json::Value>),
}

fn tuple_to_label(parts: &[serde_json::Value]) -> String {
    let rendered: Vec<String> = parts
        .iter()
        .map(|v| match v {
            serde_json::Value::String(s) => s.clone(),
            other => other.to_string(),
        })
        .collect();
    format!("({})", rendered.join(","))
}

fn resolve_element(g: &GroupTable, r: &ElementRef) -> Result<usize> {
    match r {
        ElementRef::Index(i) => {
            if *i < g.order() {
                Ok(*i)
            } else {
                Err(Error::UnknownElement(i.to_string()))
            }
        }
        ElementRef::Label(l) => g
            .element_by_label(l)
            .ok_or_else(|| Error::UnknownElement(l.clone())),
        ElementRef::Tuple(parts) => {
            let label = tuple_to_label(parts);
            g.element_by_label(&label)
                .ok_or(Error::UnknownElement(label))
        }
    }
}

/// Connection set as given in input JSON: explicit elements or class
/// representatives (the canonical form for quasi-abelian sets).
#[derive(Debug, Clone, Deserialize, Serialize)]
pub struct ConnectionJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<ElementRef>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classes: Option<Vec<ElementRef>>,
}

/// A full analysis input document.
#[derive(Debug, Clone, Deserialize, Serialize)]
pub struct AnalysisInput {
    #[serde(default)]
    pub schema: Option<String>,
    pub group: GroupSpec,
    pub connection: ConnectionJson,
}

pub fn resolve_connection(
    g: &GroupTable,
    classes: &ClassPartition,
    conn: &ConnectionJson,
) -> Result<ConnectionSet> {
    let input = match (&conn.elements, &conn.classes) {
        (Some(els), None) => ConnectionInput::Elements(
            els.iter()
                .map(|r| resolve_element(g, r))
                .collect::<Result<Vec<_>>>()?,
        ),
        (None, Some(reps)) => ConnectionInput::ClassRepresentatives(
            reps.iter()
                .map(|r| resolve_element(g, r))
                .collect::<Result<Vec<_>>>()?,
        ),
        _ => {
            return Err(Error::InvalidInput(
                "connection must have exactly one of 'elements' or 'classes'".into(),
            ))
        }
    };
    validate_connection_set(g, classes, &input)
}

// ---------------------------------------------------------------------------
// report documents
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct ElementSummary {
    pub index: usize,
    pub label: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupSummary {
    pub order: usize,
    pub abelian: bool,
    pub exponent: u64,
    pub center_size: usize,
    pub central_involutions: Vec<ElementSummary>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassSummary {
    pub class: usize,
    pub size: usize,
    pub representative: ElementSummary,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConnectionSummary {
    pub degree: usize,
    pub quasi_abelian: bool,
    pub connected: bool,
    pub classes_united: Vec<ClassSummary>,
    pub elements: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumRowJson {
    pub degree: u64,
    pub multiplicity: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_exact: Option<i64>,
    pub lambda_numeric: F12,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumSummary {
    pub integral: bool,
    pub eigenvalues: Vec<SpectrumRowJson>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DivisorCertJson {
    pub modulus_at_least_two: bool,
    pub divides_order: bool,
    pub unit_root_ok: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleCertJson {
    pub cross_construction_dev: F12,
    pub alpha_dev: F12,
    pub beta_dev: F12,
    pub pairing_ok: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificatesJson {
    /// Absent for order-2 groups (the divisor argument needs order >= 3).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub divisor: Option<DivisorCertJson>,
    /// Absent when the order exceeds the numeric-oracle cap.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleCertJson>,
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessJson {
    pub involution: usize,
    pub involution_label: String,
    pub u: usize,
    pub v: usize,
    #[serde(rename = "M")]
    pub modulus: u64,
    pub k: u64,
    pub t: F12,
    pub alpha: [F12; 2],
    pub beta: [F12; 2],
    pub kind: &'static str,
    pub minimal_time: bool,
    pub parametric_family: bool,
    pub certificates: CertificatesJson,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtraTimeJson {
    pub t: F12,
    pub revival_shape: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<[F12; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<[F12; 2]>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TimingsJson {
    pub build_ms: F12,
    pub table_ms: F12,
    pub decide_ms: F12,
    pub verify_ms: F12,
    pub total_ms: F12,
}

/// Input echo: enough to re-run the analysis from the report alone.
#[derive(Debug, Clone, Serialize)]
pub struct InputEcho {
    pub group: GroupSpec,
    pub connection_classes: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub schema: &'static str,
    pub input: InputEcho,
    pub group: GroupSummary,
    pub connection: ConnectionSummary,
    pub spectrum: SpectrumSummary,
    pub table_verification_pass: bool,
    pub witnesses: Vec<WitnessJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub no_witness_reason: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub extra_times: Vec<ExtraTimeJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<TimingsJson>,
}

impl AnalysisReport {
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }

    pub fn has_witnesses(&self) -> bool {
        !self.witnesses.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct AnalyzeOptions {
    pub size_cap: usize,
    pub tolerance: f64,
    pub extra_times: Vec<f64>,
    pub include_timings: bool,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            size_cap: DEFAULT_SIZE_CAP,
            tolerance: ACCEPT_TOL,
            extra_times: Vec::new(),
            include_timings: false,
        }
    }
}

/// Pick the cheapest correct table construction for the given spec.
pub fn character_table_for_spec(spec: &GroupSpec, g: &GroupTable) -> Result<CharacterTable> {
    if let Some(moduli) = spec.abelian_moduli() {
        return abelian_character_table(g, &moduli);
    }
    if let GroupSpec::Dihedral { n } = spec {
        return dihedral_character_table(g, *n);
    }
    generic_character_table(g)
}

/// The full pipeline: build, validate, table, spectrum, decide, verify.
pub fn analyze(input: &AnalysisInput, opts: &AnalyzeOptions) -> Result<AnalysisReport> {
    let t0 = Instant::now();
    let g = build_group_with_cap(&input.group, opts.size_cap)?;
    let classes = conjugacy_classes(&g);
    let s = resolve_connection(&g, &classes, &input.connection)?;
    let t_build = t0.elapsed();

    let table = character_table_for_spec(&input.group, &g)?;
    let table_verification = verify_table(&table);
    if !table_verification.pass() {
        return Err(Error::TableInconsistency(format!(
            "table failed verification: {table_verification:?}"
        )));
    }
    let spectrum = spectrum_by_character(&s, &table);
    if !spectrum.trace_is_zero() {
        return Err(Error::Internal(
            "adjacency trace identity sum d^2 lambda = 0 fails".into(),
        ));
    }
    let t_table = t0.elapsed();

    let connected = is_connected(&g, &s);
    let witnesses = if connected {
        decide_fractional_revival(&g, &s, &table, &spectrum)?
    } else {
        Vec::new()
    };
    let t_decide = t0.elapsed();

    let graph = CayleyGraph::new(&g, &s);
    let oracle_available = g.order() <= NUMERIC_ORACLE_CAP;
    let eigen = if oracle_available {
        Some(graph_eigen::<f64>(&graph)?)
    } else {
        None
    };
    if oracle_available {
        // standing crosscheck on every analyzed graph
        let check = numeric_spectrum_crosscheck(&graph, &spectrum)?;
        if !check.pass {
            return Err(Error::Internal(format!(
                "character and numeric spectra disagree: max diff {}",
                check.max_diff
            )));
        }
    }

    let witness_json: Vec<WitnessJson> = witnesses
        .iter()
        .map(|w| {
            let divisor = if g.order() >= 3 {
                let cert = divisor_certificate(w, &g);
                Some(DivisorCertJson {
                    modulus_at_least_two: cert.modulus_at_least_two,
                    divides_order: cert.divides_order,
                    unit_root_ok: cert.unit_root_ok,
                    pass: cert.pass(),
                })
            } else {
                None
            };
            let oracle = eigen.as_ref().map(|eigen| {
                let v = verify_witness_with_eigen(w, &g, eigen, &table, &spectrum, opts.tolerance);
                OracleCertJson {
                    cross_construction_dev: F12(v.cross_construction_dev),
                    alpha_dev: F12(v.alpha_dev),
                    beta_dev: F12(v.beta_dev),
                    pairing_ok: v.pairing_ok,
                    pass: v.pass,
                }
            });
            witness_to_json(w, &g, CertificatesJson { divisor, oracle })
        })
        .collect();
    let t_verify = t0.elapsed();

    let extra_times: Vec<ExtraTimeJson> = opts
        .extra_times
        .iter()
        .map(|&t| {
            let h = match &eigen {
                Some(eigen) => transition_matrix_from_eigen(t, eigen),
                None => transition_matrix_character(t, &g, &table, &spectrum),
            };
            let shape = check_revival_shape(&h, opts.tolerance, SUPPORT_TOL);
            ExtraTimeJson {
                t: F12(t),
                revival_shape: shape.is_some(),
                alpha: shape.as_ref().map(|s| complex_json(s.alpha)),
                beta: shape.as_ref().map(|s| complex_json(s.beta)),
            }
        })
        .collect();

    let no_witness_reason = if witnesses.is_empty() {
        Some(if !connected {
            "graph is disconnected".to_string()
        } else if central_involutions(&g).is_empty() {
            "no central involution".to_string()
        } else if !spectrum.all_integral() {
            "spectrum not integral".to_string()
        } else {
            "no candidate time produces a revival".to_string()
        })
    } else {
        None
    };

    let total = t0.elapsed();
    let timings = opts.include_timings.then(|| TimingsJson {
        build_ms: F12(t_build.as_secs_f64() * 1e3),
        table_ms: F12((t_table - t_build).as_secs_f64() * 1e3),
        decide_ms: F12((t_decide - t_table).as_secs_f64() * 1e3),
        verify_ms: F12((t_verify - t_decide).as_secs_f64() * 1e3),
        total_ms: F12(total.as_secs_f64() * 1e3),
    });

    Ok(AnalysisReport {
        schema: SCHEMA,
        input: InputEcho {
            group: input.group.clone(),
            connection_classes: s.class_ids.clone(),
        },
        group: group_summary(&g, &classes),
        connection: connection_summary(&g, &classes, &s, connected),
        spectrum: spectrum_summary(&spectrum),
        table_verification_pass: table_verification.pass(),
        witnesses: witness_json,
        no_witness_reason,
        extra_times,
        timings,
    })
}

fn group_summary(g: &GroupTable, _classes: &ClassPartition) -> GroupSummary {
    GroupSummary {
        order: g.order(),
        abelian: g.is_abelian(),
        exponent: crate::group::exponent(g),
        center_size: center_elements(g).len(),
        central_involutions: central_involutions(g)
            .into_iter()
            .map(|a| ElementSummary {
                index: a,
                label: g.label(a).to_string(),
            })
            .collect(),
    }
}

fn connection_summary(
    g: &GroupTable,
    classes: &ClassPartition,
    s: &ConnectionSet,
    connected: bool,
) -> ConnectionSummary {
    ConnectionSummary {
        degree: s.len(),
        quasi_abelian: true,
        connected,
        classes_united: s
            .class_ids
            .iter()
            .map(|&c| ClassSummary {
                class: c,
                size: classes.size(c),
                representative: ElementSummary {
                    index: classes.representatives[c],
                    label: g.label(classes.representatives[c]).to_string(),
                },
            })
            .collect(),
        elements: s.elements.iter().map(|&x| g.label(x).to_string()).collect(),
    }
}

fn spectrum_summary(spectrum: &CharacterSpectrum) -> SpectrumSummary {
    SpectrumSummary {
        integral: spectrum.all_integral(),
        eigenvalues: spectrum
            .rows
            .iter()
            .map(|r| SpectrumRowJson {
                degree: r.degree,
                multiplicity: r.multiplicity,
                lambda_exact: r.lambda_int,
                lambda_numeric: F12(r.lambda_num),
            })
            .collect(),
    }
}

fn witness_to_json(
    w: &RevivalWitness,
    g: &GroupTable,
    certificates: CertificatesJson,
) -> WitnessJson {
    WitnessJson {
        involution: w.involution,
        involution_label: g.label(w.involution).to_string(),
        u: w.source,
        v: w.target,
        modulus: w.modulus,
        k: w.step,
        t: F12(w.time()),
        alpha: complex_json(w.alpha),
        beta: complex_json(w.beta),
        kind: w.kind.as_str(),
        minimal_time: w.minimal_time,
        parametric_family: w.parametric_family,
        certificates,
    }
}

// ---------------------------------------------------------------------------
// character-table and spectrum documents (thin CLI wrappers)
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct TableValueJson {
    pub class: usize,
    pub coeffs: Vec<i64>,
    pub numeric: [F12; 2],
}

#[derive(Debug, Clone, Serialize)]
pub struct TableRowJson {
    pub degree: u64,
    pub values: Vec<TableValueJson>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CharacterTableJson {
    pub schema: &'static str,
    pub order: usize,
    pub root_order: u64,
    pub classes: Vec<ClassSummary>,
    pub rows: Vec<TableRowJson>,
    pub verification_pass: bool,
}

pub fn character_table_json(g: &GroupTable, table: &CharacterTable) -> CharacterTableJson {
    CharacterTableJson {
        schema: SCHEMA,
        order: table.order,
        root_order: table.root_order,
        classes: (0..table.classes.len())
            .map(|c| ClassSummary {
                class: c,
                size: table.classes.size(c),
                representative: ElementSummary {
                    index: table.classes.representatives[c],
                    label: g.label(table.classes.representatives[c]).to_string(),
                },
            })
            .collect(),
        rows: table
            .rows
            .iter()
            .map(|r| TableRowJson {
                degree: r.degree,
                values: r
                    .values
                    .iter()
                    .enumerate()
                    .map(|(c, v)| {
                        let z: Complex64 = v.numeric_eval();
                        TableValueJson {
                            class: c,
                            coeffs: v.coeffs().to_vec(),
                            numeric: [F12(z.re), F12(z.im)],
                        }
                    })
                    .collect(),
            })
            .collect(),
        verification_pass: verify_table(table).pass(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumDocJson {
    pub schema: &'static str,
    pub graph: GraphSummaryJson,
    pub spectrum: Vec<SpectrumRowJson>,
    pub integral: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphSummaryJson {
    pub order: usize,
    pub degree: usize,
    pub connected: bool,
    pub quasi_abelian: bool,
}

pub fn spectrum_document(
    g: &GroupTable,
    s: &ConnectionSet,
    spectrum: &CharacterSpectrum,
) -> SpectrumDocJson {
    SpectrumDocJson {
        schema: SCHEMA,
        graph: GraphSummaryJson {
            order: g.order(),
            degree: s.len(),
            connected: is_connected(g, s),
            quasi_abelian: true,
        },
        spectrum: spectrum
            .rows
            .iter()
            .map(|r| SpectrumRowJson {
                degree: r.degree,
                multiplicity: r.multiplicity,
                lambda_exact: r.lambda_int,
                lambda_numeric: F12(r.lambda_num),
            })
            .collect(),
        integral: spectrum.all_integral(),
    }
}

// ---------------------------------------------------------------------------
// scan document
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct ScanGroupJson {
    pub group: String,
    pub graphs: usize,
    pub connected: usize,
    pub integral: usize,
    pub with_witnesses: usize,
    pub fr_proper: usize,
    pub pst: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanDocJson {
    pub schema: &'static str,
    pub seed: u64,
    pub tolerance: F12,
    pub families: Vec<Family>,
    pub max_order: usize,
    pub groups: Vec<ScanGroupJson>,
    pub total_graphs: usize,
    pub total_connected: usize,
    pub total_with_witnesses: usize,
    pub violations: Vec<String>,
}

pub fn scan_document(
    report: &ScanReport,
    families: &[Family],
    max_order: usize,
) -> ScanDocJson {
    let mut by_group: Vec<ScanGroupJson> = Vec::new();
    for rec in &report.records {
        if by_group.last().map(|g| g.group.as_str()) != Some(rec.group_name.as_str()) {
            by_group.push(ScanGroupJson {
                group: rec.group_name.clone(),
                graphs: 0,
                connected: 0,
                integral: 0,
                with_witnesses: 0,
                fr_proper: 0,
                pst: 0,
            });
        }
        let entry = by_group.last_mut().unwrap();
        entry.graphs += 1;
        if rec.connected {
            entry.connected += 1;
        }
        if rec.integral {
            entry.integral += 1;
        }
        if !rec.witnesses.is_empty() {
            entry.with_witnesses += 1;
        }
        for w in &rec.witnesses {
            match w.kind {
                crate::revival::WitnessKind::FrProper => entry.fr_proper += 1,
                crate::revival::WitnessKind::Pst => entry.pst += 1,
            }
        }
    }
    ScanDocJson {
        schema: SCHEMA,
        seed: report.seed,
        tolerance: F12(report.tolerance),
        families: families.to_vec(),
        max_order,
        groups: by_group,
        total_graphs: report.records.len(),
        total_connected: report.connected_count(),
        total_with_witnesses: report
            .records
            .iter()
            .filter(|r| !r.witnesses.is_empty())
            .count(),
        violations: report.violations(),
    }
}
