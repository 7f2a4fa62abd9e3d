//! The fractional-revival decision procedure.
//!
//! For a connected quasi-abelian Cayley graph with a fully integral
//! character spectrum, revival can only pair a vertex `u` with `v = a*u`
//! for a central involution `a`, and only at times `t = 2*pi*k/M` where `M`
//! is the gcd of the eigenvalue differences within the character split
//! induced by `a`. Each candidate `k` either produces a witness (the two
//! split phases differ) or provably cannot (the transition matrix is a
//! scalar multiple of the identity at that time).

use num_complex::Complex64;

use crate::cayley::{is_connected, CharacterSpectrum, ConnectionSet};
use crate::chartab::CharacterTable;
use crate::cyclotomic::{gcd_u64, lcm_u64, Cyclotomic};
use crate::error::{Error, Result};
use crate::group::GroupTable;

/// Character rows split by the sign of `chi(a) = ±d_chi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterSplit {
    pub involution: usize,
    /// Rows with `chi(a) = +d` (always contains the trivial character).
    pub plus_rows: Vec<usize>,
    /// Rows with `chi(a) = -d`.
    pub minus_rows: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessKind {
    /// Proper fractional revival: both amplitudes nonzero.
    FrProper,
    /// Perfect state transfer: the diagonal amplitude vanishes.
    Pst,
}

impl WitnessKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            WitnessKind::FrProper => "fr-proper",
            WitnessKind::Pst => "pst",
        }
    }
}

/// A concrete revival event `H(t) e_u = alpha e_u + beta e_v`.
#[derive(Debug, Clone)]
pub struct RevivalWitness {
    /// The central involution pairing the vertices.
    pub involution: usize,
    /// Representative source vertex (the identity).
    pub source: usize,
    /// Representative target vertex `a * u = a`.
    pub target: usize,
    /// Time-lattice modulus `M`.
    pub modulus: u64,
    /// Lattice step `k` in `1..M`; the witness time is `2*pi*k/M`.
    pub step: u64,
    /// Exact phase `exp(it*lambda)` common to the plus rows.
    pub z_plus: Cyclotomic,
    /// Exact phase common to the minus rows.
    pub z_minus: Cyclotomic,
    pub alpha: Complex64,
    pub beta: Complex64,
    pub kind: WitnessKind,
    /// Set on the witness with the smallest time.
    pub minimal_time: bool,
    /// Order-2 groups admit revival at every `t` not a multiple of pi;
    /// such a witness is a canonical representative (`t = pi/2`) of that
    /// family rather than a point of the gcd time lattice.
    pub parametric_family: bool,
}

impl RevivalWitness {
    pub fn time(&self) -> f64 {
        std::f64::consts::TAU * self.step as f64 / self.modulus as f64
    }

    /// Expand the representative pair to every pair it implies: revival
    /// occurs between `u` and `a*u` for every vertex `u` at the same time.
    pub fn vertex_pairs(&self, g: &GroupTable) -> Vec<(usize, usize)> {
        (0..g.order())
            .map(|u| (u, g.mul(self.involution, u)))
            .collect()
    }
}

/// Split the character rows by the exact sign of `chi(a)/d_chi`.
///
/// Fails if `a` is not a central involution, or if any row has a value
/// other than `±d` (impossible for a central involution, so it indicates a
/// corrupted table).
pub fn split_characters(
    g: &GroupTable,
    table: &CharacterTable,
    a: usize,
) -> Result<CharacterSplit> {
    if a == g.identity()
        || g.mul(a, a) != g.identity()
        || table.classes.size(table.classes.class_of[a]) != 1
    {
        return Err(Error::NotCentralInvolution { element: a });
    }
    let mut plus_rows = Vec::new();
    let mut minus_rows = Vec::new();
    for row in 0..table.rows.len() {
        match table.scalar_sign_at(row, a) {
            Some(1) => plus_rows.push(row),
            Some(-1) => minus_rows.push(row),
            _ => return Err(Error::SplitContradiction { row }),
        }
    }
    let half = table.order as u64 / 2;
    let sq = |rows: &[usize]| -> u64 {
        rows.iter()
            .map(|&r| table.rows[r].degree * table.rows[r].degree)
            .sum()
    };
    if sq(&plus_rows) != half || sq(&minus_rows) != half {
        return Err(Error::Internal(format!(
            "degree-square split {} / {} does not halve the order {}",
            sq(&plus_rows),
            sq(&minus_rows),
            table.order
        )));
    }
    Ok(CharacterSplit {
        involution: a,
        plus_rows,
        minus_rows,
    })
}

/// The gcd `M` of `{|S| - lambda : chi in plus} U {lambda' - lambda : chi in
/// minus}`, with `chi'` the minimal-index minus row. `None` when every
/// member is zero (the graph then has exactly two eigenvalues, which forces
/// order 2).
pub fn candidate_time_modulus(
    spectrum: &CharacterSpectrum,
    split: &CharacterSplit,
) -> Result<Option<u64>> {
    let lambda = |row: usize| -> Result<i64> {
        spectrum.rows[row]
            .lambda_int
            .ok_or(Error::NonIntegralSpectrum { row })
    };
    let s_size = spectrum.connection_size as i64;
    let lambda_ref = lambda(split.minus_rows[0])?;
    let mut acc = 0u64;
    for &row in &split.plus_rows {
        acc = gcd_u64(acc, (s_size - lambda(row)?).unsigned_abs());
    }
    for &row in &split.minus_rows {
        acc = gcd_u64(acc, (lambda_ref - lambda(row)?).unsigned_abs());
    }
    Ok(if acc == 0 { None } else { Some(acc) })
}

fn phase_root(group_order: usize, modulus: u64, exponent: u64) -> Cyclotomic {
    let n = group_order as u64;
    let order = if n % modulus == 0 { n } else { lcm_u64(n, modulus) };
    Cyclotomic::root_pow(order, (exponent * (order / modulus)) as i64)
}

/// Build the witness for lattice point `(a, M, k)` with split phases
/// `zeta_M^{e_plus}` and `zeta_M^{e_minus}`.
fn assemble_witness(
    g: &GroupTable,
    a: usize,
    modulus: u64,
    step: u64,
    e_plus: u64,
    e_minus: u64,
    parametric_family: bool,
) -> RevivalWitness {
    let z_plus = phase_root(g.order(), modulus, e_plus);
    let z_minus = phase_root(g.order(), modulus, e_minus);
    let zp: Complex64 = z_plus.numeric_eval();
    let zm: Complex64 = z_minus.numeric_eval();
    let alpha = (zp + zm) / 2.0;
    let beta = (zp - zm) / 2.0;
    let kind = if modulus % 2 == 0 && (e_plus + modulus / 2) % modulus == e_minus {
        WitnessKind::Pst
    } else {
        WitnessKind::FrProper
    };
    RevivalWitness {
        involution: a,
        source: g.identity(),
        target: g.mul(a, g.identity()),
        modulus,
        step,
        z_plus,
        z_minus,
        alpha,
        beta,
        kind,
        minimal_time: false,
        parametric_family,
    }
}

fn order_two_witness(g: &GroupTable) -> Vec<RevivalWitness> {
    let a = (0..g.order())
        .find(|&x| x != g.identity())
        .expect("order-2 group has a non-identity element");
    // representative t = pi/2 of the parametric family, i.e. (M, k) = (4, 1)
    // with phases exp(+i pi/2) on the plus row and exp(-i pi/2) on the minus
    vec![assemble_witness(g, a, 4, 1, 1, 3, true)]
}

fn flag_minimal_time(witnesses: &mut [RevivalWitness]) {
    if witnesses.is_empty() {
        return;
    }
    let mut best = 0usize;
    for i in 1..witnesses.len() {
        // k_i / M_i < k_best / M_best, by cross-multiplication
        if witnesses[i].step * witnesses[best].modulus
            < witnesses[best].step * witnesses[i].modulus
        {
            best = i;
        }
    }
    witnesses[best].minimal_time = true;
}

/// Decide whether the graph admits fractional revival and list every
/// lattice witness, sorted by `(involution, k)`, with the minimal-time one
/// flagged.
pub fn decide_fractional_revival(
    g: &GroupTable,
    s: &ConnectionSet,
    table: &CharacterTable,
    spectrum: &CharacterSpectrum,
) -> Result<Vec<RevivalWitness>> {
    if !is_connected(g, s) {
        return Err(Error::Disconnected);
    }
    if g.order() == 2 {
        let mut w = order_two_witness(g);
        flag_minimal_time(&mut w);
        return Ok(w);
    }
    let involutions = crate::group::central_involutions(g);
    if involutions.is_empty() || !spectrum.all_integral() {
        return Ok(Vec::new());
    }
    let s_size = spectrum.connection_size as i64;
    let mut witnesses = Vec::new();
    for a in involutions {
        let split = split_characters(g, table, a)?;
        let Some(modulus) = candidate_time_modulus(spectrum, &split)? else {
            // two-eigenvalue spectra force order 2, handled above
            continue;
        };
        let lambda_ref = spectrum.rows[split.minus_rows[0]]
            .lambda_int
            .expect("integrality checked");
        let m = modulus as i64;
        let e_plus_base = s_size.rem_euclid(m) as u64;
        let e_minus_base = lambda_ref.rem_euclid(m) as u64;
        for k in 1..modulus {
            let e_plus = k * e_plus_base % modulus;
            let e_minus = k * e_minus_base % modulus;
            if e_plus == e_minus {
                continue; // beta would vanish
            }
            witnesses.push(assemble_witness(g, a, modulus, k, e_plus, e_minus, false));
        }
    }
    flag_minimal_time(&mut witnesses);
    Ok(witnesses)
}

/// The abelian closed-form route to the same witness list.
///
/// Works directly from the moduli presentation: `chi_g(x) =
/// zeta_m^{sum_i (m/n_i) g_i x_i}`, the element split `G_0/G_1` under
/// `chi_g(a) = ±1`, and the same gcd lattice. Exists to cross-validate the
/// generic engine; shares only the final witness assembly with it.
pub fn abelian_fast_path(
    g: &GroupTable,
    s: &ConnectionSet,
    moduli: &[u64],
) -> Result<Vec<RevivalWitness>> {
    if !g.is_abelian() {
        return Err(Error::NotAbelian);
    }
    let order: u64 = moduli.iter().product();
    if order as usize != g.order() {
        return Err(Error::ModuliMismatch {
            moduli: moduli.to_vec(),
        });
    }
    if !is_connected(g, s) {
        return Err(Error::Disconnected);
    }
    if g.order() == 2 {
        let mut w = order_two_witness(g);
        flag_minimal_time(&mut w);
        return Ok(w);
    }
    let n = g.order();
    let m = moduli.iter().fold(1u64, |acc, &v| lcm_u64(acc, v));
    let r = moduli.len();
    let to_tuple = |mut idx: usize| -> Vec<u64> {
        let mut t = vec![0u64; r];
        for i in (0..r).rev() {
            t[i] = (idx as u64) % moduli[i];
            idx /= moduli[i] as usize;
        }
        t
    };
    let pairing = |gi: &[u64], x: usize| -> u64 {
        let tx = to_tuple(x);
        let mut e = 0u64;
        for i in 0..r {
            e = (e + (m / moduli[i]) * ((gi[i] * tx[i]) % moduli[i])) % m;
        }
        e
    };

    // eigenvalues as exact root-of-unity sums, one per element
    let mut lambdas: Vec<Option<i64>> = Vec::with_capacity(n);
    for gi in 0..n {
        let tg = to_tuple(gi);
        let mut coeffs = vec![0i64; m as usize];
        for &x in &s.elements {
            coeffs[pairing(&tg, x) as usize] += 1;
        }
        lambdas.push(Cyclotomic::from_coeffs(m, coeffs).is_rational_integer());
    }
    let involutions: Vec<usize> = (0..n)
        .filter(|&x| x != g.identity() && g.mul(x, x) == g.identity())
        .collect();
    if involutions.is_empty() || lambdas.iter().any(|l| l.is_none()) {
        return Ok(Vec::new());
    }
    let lambdas: Vec<i64> = lambdas.into_iter().map(|l| l.unwrap()).collect();
    let s_size = s.len() as i64;
    let mut witnesses = Vec::new();
    for a in involutions {
        // split the dual group by chi_g(a) = ±1
        let mut plus = Vec::new();
        let mut minus = Vec::new();
        for gi in 0..n {
            let e = pairing(&to_tuple(gi), a);
            if e == 0 {
                plus.push(gi);
            } else if 2 * e == m {
                minus.push(gi);
            } else {
                return Err(Error::Internal(format!(
                    "chi_{gi}(a) is not ±1 for an involution a = {a}"
                )));
            }
        }
        let lambda_ref = lambdas[minus[0]];
        let mut acc = 0u64;
        for &gi in &plus {
            acc = gcd_u64(acc, (s_size - lambdas[gi]).unsigned_abs());
        }
        for &gi in &minus {
            acc = gcd_u64(acc, (lambda_ref - lambdas[gi]).unsigned_abs());
        }
        if acc == 0 {
            continue;
        }
        let modulus = acc;
        let e_plus_base = s_size.rem_euclid(modulus as i64) as u64;
        let e_minus_base = lambda_ref.rem_euclid(modulus as i64) as u64;
        for k in 1..modulus {
            let e_plus = k * e_plus_base % modulus;
            let e_minus = k * e_minus_base % modulus;
            if e_plus == e_minus {
                continue;
            }
            witnesses.push(assemble_witness(g, a, modulus, k, e_plus, e_minus, false));
        }
    }
    flag_minimal_time(&mut witnesses);
    Ok(witnesses)
}

/// Arithmetic certificate for a witness of a graph of order at least 3.
#[derive(Debug, Clone, Copy)]
pub struct DivisorCertificate {
    pub modulus_at_least_two: bool,
    pub divides_order: bool,
    /// `exp(it)^|G| = 1` within 1e-9.
    pub unit_root_ok: bool,
}

impl DivisorCertificate {
    pub fn pass(&self) -> bool {
        self.modulus_at_least_two && self.divides_order && self.unit_root_ok
    }
}

pub fn divisor_certificate(w: &RevivalWitness, g: &GroupTable) -> DivisorCertificate {
    let n = g.order() as u64;
    let phase = Complex64::from_polar(1.0, w.time() * n as f64);
    DivisorCertificate {
        modulus_at_least_two: w.modulus >= 2,
        divides_order: n % w.modulus == 0,
        unit_root_ok: (phase - Complex64::new(1.0, 0.0)).norm() < 1e-9,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::{spectrum_by_character, validate_connection_set, ConnectionInput};
    use crate::chartab::abelian_character_table;
    use crate::group::{build_group, conjugacy_classes, GroupSpec};

    fn abelian_setup(
        moduli: &[u64],
        elements: Vec<usize>,
    ) -> (GroupTable, ConnectionSet, CharacterTable, CharacterSpectrum) {
        let g = build_group(&GroupSpec::AbelianSum {
            moduli: moduli.to_vec(),
        })
        .unwrap();
        let classes = conjugacy_classes(&g);
        let s = validate_connection_set(&g, &classes, &ConnectionInput::Elements(elements)).unwrap();
        let table = abelian_character_table(&g, moduli).unwrap();
        let spectrum = spectrum_by_character(&s, &table);
        (g, s, table, spectrum)
    }

    #[test]
    fn z4_split() {
        let (g, _, table, _) = abelian_setup(&[4], vec![1, 3]);
        let split = split_characters(&g, &table, 2).unwrap();
        assert_eq!(split.plus_rows, vec![0, 2]);
        assert_eq!(split.minus_rows, vec![1, 3]);
    }

    #[test]
    fn z2_split() {
        let (g, _, table, _) = abelian_setup(&[2], vec![1]);
        let split = split_characters(&g, &table, 1).unwrap();
        assert_eq!(split.plus_rows, vec![0]);
        assert_eq!(split.minus_rows, vec![1]);
    }

    #[test]
    fn split_rejects_non_involution() {
        let (g, _, table, _) = abelian_setup(&[4], vec![1, 3]);
        assert!(matches!(
            split_characters(&g, &table, 1),
            Err(Error::NotCentralInvolution { element: 1 })
        ));
    }

    #[test]
    fn z4_modulus_is_four() {
        let (g, _, table, spectrum) = abelian_setup(&[4], vec![1, 3]);
        let split = split_characters(&g, &table, 2).unwrap();
        assert_eq!(candidate_time_modulus(&spectrum, &split).unwrap(), Some(4));
    }

    #[test]
    fn k2_modulus_is_undefined() {
        let (g, _, table, spectrum) = abelian_setup(&[2], vec![1]);
        let split = split_characters(&g, &table, 1).unwrap();
        assert_eq!(candidate_time_modulus(&spectrum, &split).unwrap(), None);
    }

    #[test]
    fn modulus_is_independent_of_reference_row() {
        let (g, _, table, spectrum) = abelian_setup(&[4], vec![1, 3]);
        let split = split_characters(&g, &table, 2).unwrap();
        let base = candidate_time_modulus(&spectrum, &split).unwrap();
        for &alt in &split.minus_rows {
            let mut reordered = split.clone();
            reordered.minus_rows.retain(|&r| r != alt);
            reordered.minus_rows.insert(0, alt);
            assert_eq!(candidate_time_modulus(&spectrum, &reordered).unwrap(), base);
        }
    }

    #[test]
    fn z4_cycle_has_pst_witness() {
        let (g, s, table, spectrum) = abelian_setup(&[4], vec![1, 3]);
        let ws = decide_fractional_revival(&g, &s, &table, &spectrum).unwrap();
        assert_eq!(ws.len(), 2); // k = 1 and k = 3
        let w = &ws[0];
        assert!(w.minimal_time);
        assert_eq!((w.involution, w.modulus, w.step), (2, 4, 1));
        assert_eq!(w.kind, WitnessKind::Pst);
        assert!((w.time() - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        assert!(w.alpha.norm() < 1e-12);
        assert!((w.beta - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
        let cert = divisor_certificate(w, &g);
        assert!(cert.pass());
    }

    #[test]
    fn witness_pairs_expand_by_translation() {
        let (g, s, table, spectrum) = abelian_setup(&[4], vec![1, 3]);
        let ws = decide_fractional_revival(&g, &s, &table, &spectrum).unwrap();
        let pairs = ws[0].vertex_pairs(&g);
        assert_eq!(pairs, vec![(0, 2), (1, 3), (2, 0), (3, 1)]);
    }

    #[test]
    fn odd_cycle_has_no_witnesses() {
        let (g, s, table, spectrum) = abelian_setup(&[3], vec![1, 2]);
        let ws = decide_fractional_revival(&g, &s, &table, &spectrum).unwrap();
        assert!(ws.is_empty());
    }

    #[test]
    fn non_integral_graph_has_no_witnesses() {
        // C6 with nearest neighbors: eigenvalues 2cos(pi g/3) are integers;
        // pick Z8 nearest-neighbor instead, whose eigenvalues include sqrt 2
        let (g, s, table, spectrum) = abelian_setup(&[8], vec![1, 7]);
        assert!(!spectrum.all_integral());
        let ws = decide_fractional_revival(&g, &s, &table, &spectrum).unwrap();
        assert!(ws.is_empty());
    }

    #[test]
    fn k2_parametric_family() {
        let (g, s, table, spectrum) = abelian_setup(&[2], vec![1]);
        let ws = decide_fractional_revival(&g, &s, &table, &spectrum).unwrap();
        assert_eq!(ws.len(), 1);
        let w = &ws[0];
        assert!(w.parametric_family);
        assert_eq!(w.kind, WitnessKind::Pst);
        assert!((w.time() - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        assert!((w.beta - Complex64::new(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn disconnected_input_is_an_error() {
        let g = build_group(&GroupSpec::Cyclic { n: 4 }).unwrap();
        let classes = conjugacy_classes(&g);
        let s =
            validate_connection_set(&g, &classes, &ConnectionInput::Elements(vec![2])).unwrap();
        let table = abelian_character_table(&g, &[4]).unwrap();
        let spectrum = spectrum_by_character(&s, &table);
        assert!(matches!(
            decide_fractional_revival(&g, &s, &table, &spectrum),
            Err(Error::Disconnected)
        ));
    }

    #[test]
    fn fast_path_matches_generic_on_z4() {
        let (g, s, table, spectrum) = abelian_setup(&[4], vec![1, 3]);
        let generic = decide_fractional_revival(&g, &s, &table, &spectrum).unwrap();
        let fast = abelian_fast_path(&g, &s, &[4]).unwrap();
        let key = |ws: &[RevivalWitness]| -> Vec<(usize, u64, u64)> {
            ws.iter().map(|w| (w.involution, w.modulus, w.step)).collect()
        };
        assert_eq!(key(&generic), key(&fast));
    }

    #[test]
    fn fast_path_matches_generic_on_z2xz2() {
        let g = build_group(&GroupSpec::AbelianSum { moduli: vec![2, 2] }).unwrap();
        let classes = conjugacy_classes(&g);
        let s = validate_connection_set(&g, &classes, &ConnectionInput::Elements(vec![1, 2]))
            .unwrap();
        let table = abelian_character_table(&g, &[2, 2]).unwrap();
        let spectrum = spectrum_by_character(&s, &table);
        let generic = decide_fractional_revival(&g, &s, &table, &spectrum).unwrap();
        let fast = abelian_fast_path(&g, &s, &[2, 2]).unwrap();
        let key = |ws: &[RevivalWitness]| -> Vec<(usize, u64, u64)> {
            ws.iter().map(|w| (w.involution, w.modulus, w.step)).collect()
        };
        assert_eq!(key(&generic), key(&fast));
        assert!(!generic.is_empty());
    }

    #[test]
    fn fast_path_empty_on_odd_order() {
        let g = build_group(&GroupSpec::Cyclic { n: 3 }).unwrap();
        let classes = conjugacy_classes(&g);
        let s =
            validate_connection_set(&g, &classes, &ConnectionInput::Elements(vec![1, 2])).unwrap();
        assert!(abelian_fast_path(&g, &s, &[3]).unwrap().is_empty());
    }

    #[test]
    fn fast_path_rejects_nonabelian() {
        let g = build_group(&GroupSpec::Dihedral { n: 3 }).unwrap();
        let classes = conjugacy_classes(&g);
        let s = validate_connection_set(&g, &classes, &ConnectionInput::ClassRepresentatives(vec![3]))
            .unwrap();
        assert!(matches!(
            abelian_fast_path(&g, &s, &[6]),
            Err(Error::NotAbelian)
        ));
    }

    #[test]
    fn fake_witness_fails_divisor_certificate() {
        let (g, s, table, spectrum) = abelian_setup(&[4], vec![1, 3]);
        let mut w = decide_fractional_revival(&g, &s, &table, &spectrum)
            .unwrap()
            .remove(0);
        w.modulus = 5;
        let cert = divisor_certificate(&w, &g);
        assert!(!cert.divides_order);
        assert!(!cert.pass());
    }
}
