//! Exact character tables.
//!
//! Values are stored per conjugacy class as elements of `Z[zeta_m]`, with
//! `m` the group exponent. Every construction path stores a character value
//! as the *eigenvalue-exponent multiset* of the underlying representation
//! matrix: nonnegative coefficients summing to the degree. That convention
//! makes the two tests the revival engine needs exact and trivial:
//! `chi(a) = +d` iff the vector is `d` at exponent 0, and `chi(a) = -d` iff
//! it is `d` at exponent `m/2` (a unitary matrix with trace of maximal
//! modulus is scalar, so the multiset is then unique).

use num_complex::Complex64;

use crate::cyclotomic::{lcm_u64, Cyclotomic};
use crate::error::{Error, Result};
use crate::group::{conjugacy_classes, exponent, ClassPartition, GroupTable};

/// One irreducible character: degree plus per-class exact values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterRow {
    pub degree: u64,
    pub values: Vec<Cyclotomic>,
}

/// Exact character table of a finite group.
#[derive(Debug, Clone)]
pub struct CharacterTable {
    pub order: usize,
    /// Root-of-unity order for all stored values (the group exponent).
    pub root_order: u64,
    pub classes: ClassPartition,
    pub rows: Vec<CharacterRow>,
}

impl CharacterTable {
    /// Value of row `chi` on the class of element `x`.
    pub fn value_at_element(&self, row: usize, x: usize) -> &Cyclotomic {
        &self.rows[row].values[self.classes.class_of[x]]
    }

    /// Index of the trivial character (degree 1, value 1 everywhere).
    pub fn trivial_row(&self) -> usize {
        let one = Cyclotomic::integer(self.root_order, 1);
        self.rows
            .iter()
            .position(|r| r.degree == 1 && r.values.iter().all(|v| *v == one))
            .expect("every character table contains the trivial character")
    }

    /// Exact test for `chi(x) = +degree` / `chi(x) = -degree`.
    ///
    /// Relies on the exponent-multiset storage convention; returns `None`
    /// when the value is anything else.
    pub fn scalar_sign_at(&self, row: usize, x: usize) -> Option<i8> {
        let v = self.value_at_element(row, x);
        let d = self.rows[row].degree as i64;
        let m = self.root_order;
        let coeffs = v.coeffs();
        if coeffs[0] == d && coeffs.iter().skip(1).all(|&c| c == 0) {
            return Some(1);
        }
        if m % 2 == 0 {
            let half = (m / 2) as usize;
            if coeffs[half] == d
                && coeffs
                    .iter()
                    .enumerate()
                    .all(|(j, &c)| j == half || c == 0)
            {
                return Some(-1);
            }
        }
        None
    }
}

/// Character table of an abelian group presented by its moduli:
/// `chi_g(x) = prod_i zeta_{n_i}^{g_i x_i}`, one row per group element `g`.
pub fn abelian_character_table(g: &GroupTable, moduli: &[u64]) -> Result<CharacterTable> {
    let order: u64 = moduli.iter().product();
    if order as usize != g.order() {
        return Err(Error::ModuliMismatch {
            moduli: moduli.to_vec(),
        });
    }
    if !g.is_abelian() {
        return Err(Error::NotAbelian);
    }
    let m = moduli.iter().fold(1u64, |acc, &n| lcm_u64(acc, n));
    let classes = conjugacy_classes(g);
    if classes.len() != g.order() {
        return Err(Error::NotAbelian);
    }
    let r = moduli.len();
    let to_tuple = |mut idx: usize| -> Vec<u64> {
        let mut t = vec![0u64; r];
        for i in (0..r).rev() {
            t[i] = (idx as u64) % moduli[i];
            idx /= moduli[i] as usize;
        }
        t
    };
    // class c is the singleton of its representative element
    let exponent_of = |gi: &[u64], x: usize| -> i64 {
        let tx = to_tuple(x);
        let mut e = 0u64;
        for i in 0..r {
            e = (e + (m / moduli[i]) * ((gi[i] * tx[i]) % moduli[i])) % m;
        }
        e as i64
    };
    let rows = (0..g.order())
        .map(|gi| {
            let tg = to_tuple(gi);
            let values = classes
                .representatives
                .iter()
                .map(|&x| Cyclotomic::root_pow(m, exponent_of(&tg, x)))
                .collect();
            CharacterRow { degree: 1, values }
        })
        .collect();
    Ok(CharacterTable {
        order: g.order(),
        root_order: m,
        classes,
        rows,
    })
}

/// Closed-form character table of the dihedral group of order `2n`.
pub fn dihedral_character_table(g: &GroupTable, n: u64) -> Result<CharacterTable> {
    if g.order() != (2 * n) as usize {
        return Err(Error::DihedralMismatch { n: n as usize });
    }
    // spot-check the presentation this crate builds: rotations first
    let a = if n > 1 { 1 } else { g.identity() };
    if n > 1 && g.element_order(a) != n {
        return Err(Error::DihedralMismatch { n: n as usize });
    }
    let m = exponent(g); // lcm(n, 2)
    let classes = conjugacy_classes(g);
    let nc = classes.len();
    let n_us = n as usize;

    // exponent-multiset value of a character on the class representative
    let rot_power = |x: usize| -> Option<u64> {
        if x < n_us {
            Some(x as u64)
        } else {
            None // reflection b a^(x-n)
        }
    };
    let half = (m / 2) as i64;
    let sign_value = |positive: bool| -> Cyclotomic {
        if positive {
            Cyclotomic::integer(m, 1)
        } else {
            Cyclotomic::root_pow(m, half)
        }
    };

    let mut rows: Vec<CharacterRow> = Vec::new();
    // trivial
    rows.push(CharacterRow {
        degree: 1,
        values: vec![Cyclotomic::integer(m, 1); nc],
    });
    // sign on reflections
    rows.push(CharacterRow {
        degree: 1,
        values: classes
            .representatives
            .iter()
            .map(|&x| sign_value(rot_power(x).is_some()))
            .collect(),
    });
    if n % 2 == 0 {
        // two extra linear characters: a -> -1, with b -> +1 and b -> -1
        for b_sign in [true, false] {
            let values = classes
                .representatives
                .iter()
                .map(|&x| match rot_power(x) {
                    Some(k) => sign_value(k % 2 == 0),
                    None => {
                        let k = (x - n_us) as u64;
                        sign_value((k % 2 == 0) == b_sign)
                    }
                })
                .collect();
            rows.push(CharacterRow { degree: 1, values });
        }
    }
    // two-dimensional characters psi_j, 1 <= j < n/2
    let stride = (m / n) as i64;
    let mut j = 1u64;
    while 2 * j < n {
        let values = classes
            .representatives
            .iter()
            .map(|&x| match rot_power(x) {
                Some(k) => {
                    let e = (j * k) as i64 * stride;
                    Cyclotomic::root_pow(m, e).add(&Cyclotomic::root_pow(m, -e))
                }
                None => Cyclotomic::root_pow(m, 0).add(&Cyclotomic::root_pow(m, half)),
            })
            .collect();
        rows.push(CharacterRow { degree: 2, values });
        j += 1;
    }
    Ok(CharacterTable {
        order: g.order(),
        root_order: m,
        classes,
        rows,
    })
}

/// Numeric verification report for a character table.
#[derive(Debug, Clone)]
pub struct TableVerification {
    /// `sum of degree^2 == |G|`, checked exactly.
    pub degree_sum_ok: bool,
    /// `chi(1) = degree * zeta^0` exactly, per row.
    pub identity_column_ok: bool,
    /// Worst deviation of row inner products from `delta_{chi,psi}`.
    pub first_orthogonality_dev: f64,
    /// Worst deviation of `sum_chi d_chi conj(chi(w))` from 0 over `w != 1`.
    pub second_orthogonality_dev: f64,
    /// First offending row pair, if any inner product is off by more than 1e-9.
    pub failing_pair: Option<(usize, usize)>,
}

impl TableVerification {
    pub fn pass(&self) -> bool {
        self.degree_sum_ok
            && self.identity_column_ok
            && self.first_orthogonality_dev < 1e-9
            && self.second_orthogonality_dev < 1e-9
    }
}

/// Check degree sums, the identity column, and both orthogonality relations.
pub fn verify_table(t: &CharacterTable) -> TableVerification {
    let order = t.order as f64;
    let degree_sum_ok =
        t.rows.iter().map(|r| r.degree * r.degree).sum::<u64>() == t.order as u64;
    let identity_column_ok = t.rows.iter().all(|r| {
        let v = &r.values[0];
        v.coeffs()[0] == r.degree as i64 && v.coeffs().iter().skip(1).all(|&c| c == 0)
    });

    let numeric: Vec<Vec<Complex64>> = t
        .rows
        .iter()
        .map(|r| r.values.iter().map(|v| v.numeric_eval()).collect())
        .collect();
    let sizes: Vec<f64> = t.classes.classes.iter().map(|c| c.len() as f64).collect();

    let mut first_dev = 0.0f64;
    let mut failing_pair = None;
    for i in 0..t.rows.len() {
        for j in i..t.rows.len() {
            let mut acc = Complex64::new(0.0, 0.0);
            for c in 0..t.classes.len() {
                acc += sizes[c] * numeric[i][c] * numeric[j][c].conj();
            }
            acc /= order;
            let target = if i == j { 1.0 } else { 0.0 };
            let dev = (acc - Complex64::new(target, 0.0)).norm();
            if dev > first_dev {
                first_dev = dev;
            }
            if dev > 1e-9 && failing_pair.is_none() {
                failing_pair = Some((i, j));
            }
        }
    }

    let mut second_dev = 0.0f64;
    for c in 1..t.classes.len() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, row) in t.rows.iter().enumerate() {
            acc += (row.degree as f64) * numeric[i][c].conj();
        }
        second_dev = second_dev.max(acc.norm());
    }

    TableVerification {
        degree_sum_ok,
        identity_column_ok,
        first_orthogonality_dev: first_dev,
        second_orthogonality_dev: second_dev,
        failing_pair,
    }
}

/// Compare two tables of isomorphic groups up to row (and class) reorder.
///
/// Each row is reduced to the multiset of `(class size, value)` pairs
/// together with the degree; tables agree when the row multisets match
/// exactly in cyclotomic representation.
pub fn tables_equal_up_to_row_order(a: &CharacterTable, b: &CharacterTable) -> bool {
    if a.order != b.order || a.rows.len() != b.rows.len() || a.root_order != b.root_order {
        return false;
    }
    let canon = |t: &CharacterTable| -> Vec<(u64, Vec<(usize, Vec<i64>)>)> {
        let mut rows: Vec<(u64, Vec<(usize, Vec<i64>)>)> = t
            .rows
            .iter()
            .map(|r| {
                let mut vals: Vec<(usize, Vec<i64>)> = r
                    .values
                    .iter()
                    .enumerate()
                    .map(|(c, v)| (t.classes.size(c), v.coeffs().to_vec()))
                    .collect();
                vals.sort();
                (r.degree, vals)
            })
            .collect();
        rows.sort();
        rows
    };
    canon(a) == canon(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_group, GroupSpec};

    #[test]
    fn abelian_z2() {
        let g = build_group(&GroupSpec::Cyclic { n: 2 }).unwrap();
        let t = abelian_character_table(&g, &[2]).unwrap();
        assert_eq!(t.rows.len(), 2);
        assert_eq!(t.rows[0].values[1], Cyclotomic::integer(2, 1));
        assert_eq!(t.rows[1].values[1], Cyclotomic::root_pow(2, 1));
        assert!(verify_table(&t).pass());
    }

    #[test]
    fn abelian_z6_matches_sixth_roots() {
        let g = build_group(&GroupSpec::Cyclic { n: 6 }).unwrap();
        let t = abelian_character_table(&g, &[6]).unwrap();
        // row g=1 at x=1 is exp(pi*i/3)
        let v: Complex64 = t.rows[1].values[1].numeric_eval();
        assert!((v - Complex64::new(0.5, 0.75f64.sqrt())).norm() < 1e-12);
        // row g=3 alternates +1, -1
        for x in 0..6 {
            let expect = Cyclotomic::root_pow(6, (3 * x as i64) % 6);
            assert_eq!(t.rows[3].values[x], expect);
        }
        assert!(verify_table(&t).pass());
    }

    #[test]
    fn abelian_rejects_nonabelian_group() {
        let g = build_group(&GroupSpec::Dihedral { n: 3 }).unwrap();
        assert!(abelian_character_table(&g, &[6]).is_err());
    }

    #[test]
    fn dihedral_three_table() {
        let g = build_group(&GroupSpec::Dihedral { n: 3 }).unwrap();
        let t = dihedral_character_table(&g, 3).unwrap();
        let degrees: Vec<u64> = t.rows.iter().map(|r| r.degree).collect();
        assert_eq!(degrees, vec![1, 1, 2]);
        // psi_2 on the reflection class is -1
        assert_eq!(t.rows[1].values[2], Cyclotomic::root_pow(6, 3));
        // psi_3 on {a, a^2} is zeta_3 + zeta_3^2 = -1
        let v = &t.rows[2].values[1];
        assert_eq!(v.is_rational_integer(), Some(-1));
        // psi_3 on reflections is 0 as the multiset {+1, -1}
        let refl = &t.rows[2].values[2];
        assert_eq!(refl.coeffs(), &[1, 0, 0, 1, 0, 0]);
        assert!(verify_table(&t).pass());
    }

    #[test]
    fn dihedral_even_case_has_four_linears() {
        let g = build_group(&GroupSpec::Dihedral { n: 4 }).unwrap();
        let t = dihedral_character_table(&g, 4).unwrap();
        let mut degrees: Vec<u64> = t.rows.iter().map(|r| r.degree).collect();
        degrees.sort_unstable();
        assert_eq!(degrees, vec![1, 1, 1, 1, 2]);
        assert!(verify_table(&t).pass());
    }

    #[test]
    fn degenerate_dihedral_orders() {
        // D1 = Z2 and D2 = Klein four-group
        let d1 = build_group(&GroupSpec::Dihedral { n: 1 }).unwrap();
        let t1 = dihedral_character_table(&d1, 1).unwrap();
        assert_eq!(t1.rows.len(), 2);
        assert!(verify_table(&t1).pass());
        let d2 = build_group(&GroupSpec::Dihedral { n: 2 }).unwrap();
        let t2 = dihedral_character_table(&d2, 2).unwrap();
        assert_eq!(t2.rows.len(), 4);
        assert!(t2.rows.iter().all(|r| r.degree == 1));
        assert!(verify_table(&t2).pass());
    }

    #[test]
    fn dihedral_six_verifies() {
        let g = build_group(&GroupSpec::Dihedral { n: 6 }).unwrap();
        let t = dihedral_character_table(&g, 6).unwrap();
        assert_eq!(t.rows.len(), t.classes.len());
        assert!(verify_table(&t).pass());
    }

    #[test]
    fn corrupted_table_fails_verification() {
        let g = build_group(&GroupSpec::Dihedral { n: 3 }).unwrap();
        let mut t = dihedral_character_table(&g, 3).unwrap();
        t.rows[1].values[2] = Cyclotomic::integer(6, 1); // negate the sign character on reflections
        let report = verify_table(&t);
        assert!(!report.pass());
        assert!(report.second_orthogonality_dev > 1e-9 || report.failing_pair.is_some());
    }

    #[test]
    fn scalar_sign_detection() {
        let g = build_group(&GroupSpec::Cyclic { n: 4 }).unwrap();
        let t = abelian_character_table(&g, &[4]).unwrap();
        // chi_g(2) = i^{2g} = (-1)^g
        assert_eq!(t.scalar_sign_at(0, 2), Some(1));
        assert_eq!(t.scalar_sign_at(1, 2), Some(-1));
        assert_eq!(t.scalar_sign_at(2, 2), Some(1));
        assert_eq!(t.scalar_sign_at(3, 2), Some(-1));
        // chi_1(1) = i is neither +1 nor -1
        assert_eq!(t.scalar_sign_at(1, 1), None);
    }

    #[test]
    fn trivial_row_is_found() {
        let g = build_group(&GroupSpec::Dihedral { n: 5 }).unwrap();
        let t = dihedral_character_table(&g, 5).unwrap();
        assert_eq!(t.trivial_row(), 0);
    }
}
