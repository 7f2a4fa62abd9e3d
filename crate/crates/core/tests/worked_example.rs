//! The order-36 worked example (Z6 x D3 with a 10-element class-union
//! connection set), pinned in detail: split structure, time lattice,
//! transition entries, and the revival shape.
//!
//! Expected eigenvalues come from an independent closed form: every
//! irreducible character is a product character, so each eigenvalue is
//! `(phi(1) + phi(5)) * (sum over the five D3-side elements of psi) / d_psi`
//! with `phi` over the sixth-root characters and `psi` over the three
//! D3 characters.

use num_complex::Complex64;

use frevival_core::cayley::{
    numeric_spectrum_crosscheck, spectrum_by_character, validate_connection_set, CayleyGraph,
    ConnectionInput,
};
use frevival_core::dixon::generic_character_table;
use frevival_core::group::{build_group, central_involutions, conjugacy_classes, GroupSpec};
use frevival_core::oracle::{
    check_revival_shape, transition_entry, transition_matrix_character, ACCEPT_TOL, SUPPORT_TOL,
};
use frevival_core::revival::{
    candidate_time_modulus, decide_fractional_revival, divisor_certificate, split_characters,
};

fn setup() -> (
    frevival_core::GroupTable,
    frevival_core::ConnectionSet,
    frevival_core::CharacterTable,
    frevival_core::CharacterSpectrum,
) {
    let g = build_group(&GroupSpec::DirectProduct {
        factors: vec![GroupSpec::Cyclic { n: 6 }, GroupSpec::Dihedral { n: 3 }],
    })
    .unwrap();
    let classes = conjugacy_classes(&g);
    let reps: Vec<usize> = ["(1,a)", "(5,a)", "(1,b)", "(5,b)"]
        .iter()
        .map(|l| g.element_by_label(l).unwrap())
        .collect();
    let s =
        validate_connection_set(&g, &classes, &ConnectionInput::ClassRepresentatives(reps))
            .unwrap();
    assert_eq!(s.len(), 10);
    let table = generic_character_table(&g).unwrap();
    let spectrum = spectrum_by_character(&s, &table);
    (g, s, table, spectrum)
}

/// `(degree, lambda)` multiset from the product-character closed form.
fn expected_eigenvalues() -> Vec<(u64, i64)> {
    // phi_g(1) + phi_g(5) = 2*cos(pi*g/3) for g = 0..5
    let phi_sums: [i64; 6] = [2, 1, -1, -2, -1, 1];
    // (sum of psi over {a, a^2, b, ba, ba^2}) / d_psi for psi_1, psi_2, psi_3
    let psi_values: [(u64, i64); 3] = [(1, 5), (1, -1), (2, -1)];
    let mut out = Vec::new();
    for &c in &phi_sums {
        for &(d, v) in &psi_values {
            out.push((d, c * v));
        }
    }
    out.sort_unstable();
    out
}

#[test]
fn spectrum_matches_product_closed_form() {
    let (g, s, _, spectrum) = setup();
    let mut got: Vec<(u64, i64)> = spectrum
        .rows
        .iter()
        .map(|r| (r.degree, r.lambda_int.expect("integral spectrum")))
        .collect();
    got.sort_unstable();
    assert_eq!(got, expected_eigenvalues());
    // the two spot values: a degree-2 row at -2 and a degree-1 row at 5
    assert!(got.contains(&(2, -2)));
    assert!(got.contains(&(1, 5)));
    // all 36 numeric eigenvalues agree with the Jacobi side
    let graph = CayleyGraph::new(&g, &s);
    let check = numeric_spectrum_crosscheck(&graph, &spectrum).unwrap();
    assert!(check.pass, "max diff {}", check.max_diff);
}

#[test]
fn split_at_the_central_involution() {
    let (g, _, table, spectrum) = setup();
    let a = g.element_by_label("(3,e)").unwrap();
    assert_eq!(central_involutions(&g), vec![a]);
    let split = split_characters(&g, &table, a).unwrap();
    assert_eq!(split.plus_rows.len(), 9);
    assert_eq!(split.minus_rows.len(), 9);

    let side = |rows: &[usize]| -> Vec<(u64, i64)> {
        let mut v: Vec<(u64, i64)> = rows
            .iter()
            .map(|&r| (spectrum.rows[r].degree, spectrum.rows[r].lambda_int.unwrap()))
            .collect();
        v.sort_unstable();
        v
    };
    // plus side: phi in {0, 2, 4} gives coefficients {2, -1, -1}
    let mut plus_expected = vec![
        (1, 10),
        (1, -2),
        (2, -2),
        (1, -5),
        (1, 1),
        (2, 1),
        (1, -5),
        (1, 1),
        (2, 1),
    ];
    plus_expected.sort_unstable();
    assert_eq!(side(&split.plus_rows), plus_expected);
    // minus side: phi in {1, 3, 5} gives coefficients {1, -2, 1}
    let mut minus_expected = vec![
        (1, 5),
        (1, -1),
        (2, -1),
        (1, -10),
        (1, 2),
        (2, 2),
        (1, 5),
        (1, -1),
        (2, -1),
    ];
    minus_expected.sort_unstable();
    assert_eq!(side(&split.minus_rows), minus_expected);

    let modulus = candidate_time_modulus(&spectrum, &split).unwrap();
    assert_eq!(modulus, Some(3));
}

#[test]
fn witnesses_and_certificates() {
    let (g, s, table, spectrum) = setup();
    let ws = decide_fractional_revival(&g, &s, &table, &spectrum).unwrap();
    assert_eq!(ws.len(), 2);
    let w = &ws[0];
    assert!(w.minimal_time);
    assert_eq!(g.label(w.involution), "(3,e)");
    assert_eq!((w.modulus, w.step), (3, 1));
    let t = 2.0 * std::f64::consts::PI / 3.0;
    assert!((w.time() - t).abs() < 1e-12);
    assert!((w.alpha - Complex64::new(-0.5, 0.0)).norm() < 1e-12);
    assert!((w.beta - Complex64::new(0.0, t.sin())).norm() < 1e-12);
    let cert = divisor_certificate(w, &g);
    assert!(cert.pass()); // M = 3 divides 36
}

#[test]
fn transition_entry_and_shape_at_the_witness_time() {
    let (g, _, table, spectrum) = setup();
    let t = 2.0 * std::f64::consts::PI / 3.0;
    let u = g.element_by_label("(0,e)").unwrap();
    let v = g.element_by_label("(3,e)").unwrap();
    let entry = transition_entry(u, v, t, &g, &table, &spectrum);
    assert!(
        (entry - Complex64::new(0.0, t.sin())).norm() < 1e-9,
        "H(t)_{{u,v}} = {entry}"
    );
    let diag = transition_entry(u, u, t, &g, &table, &spectrum);
    assert!((diag - Complex64::new(-0.5, 0.0)).norm() < 1e-9);

    let h = transition_matrix_character(t, &g, &table, &spectrum);
    let shape = check_revival_shape(&h, ACCEPT_TOL, SUPPORT_TOL).expect("revival shape");
    assert!((shape.alpha - Complex64::new(-0.5, 0.0)).norm() < 1e-9);
    assert!((shape.beta - Complex64::new(0.0, t.sin())).norm() < 1e-9);
    for x in 0..g.order() {
        assert_eq!(shape.pairing[x], g.mul(v, x), "pairing at vertex {x}");
    }
}
