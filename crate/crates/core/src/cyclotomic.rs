//! Exact arithmetic for integer combinations of roots of unity.
//!
//! A [`Cyclotomic`] stores `sum_j c_j * zeta_m^j` as the integer coefficient
//! vector `(c_0, ..., c_{m-1})`, where `zeta_m = exp(2*pi*i/m)`. The basis is
//! deliberately non-canonical (all `m` powers, no reduction modulo the
//! cyclotomic polynomial): sums, products, conjugates and the rationality
//! test below need no polynomial reduction, and equality-to-integer is the
//! only equality the rest of the crate relies on.

use num_complex::Complex;

use crate::scalar::Real;

/// An element of `Z[zeta_m]` as coefficients on `zeta_m^0 .. zeta_m^{m-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cyclotomic {
    order: u64,
    coeffs: Vec<i64>,
}

impl Cyclotomic {
    pub fn zero(order: u64) -> Self {
        assert!(order >= 1, "root order must be positive");
        Cyclotomic {
            order,
            coeffs: vec![0; order as usize],
        }
    }

    /// The rational integer `k` as `k * zeta^0`.
    pub fn integer(order: u64, k: i64) -> Self {
        let mut v = Cyclotomic::zero(order);
        v.coeffs[0] = k;
        v
    }

    /// `zeta_m^e` (exponent taken modulo `m`).
    pub fn root_pow(order: u64, e: i64) -> Self {
        let mut v = Cyclotomic::zero(order);
        let e = e.rem_euclid(order as i64) as usize;
        v.coeffs[e] = 1;
        v
    }

    pub fn from_coeffs(order: u64, coeffs: Vec<i64>) -> Self {
        assert_eq!(coeffs.len(), order as usize);
        Cyclotomic { order, coeffs }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// Re-express in `Z[zeta_n]` for a multiple `n` of the current order.
    pub fn to_order(&self, n: u64) -> Self {
        assert!(
            n % self.order == 0,
            "target order {n} is not a multiple of {}",
            self.order
        );
        let stride = (n / self.order) as usize;
        let mut out = Cyclotomic::zero(n);
        for (j, &c) in self.coeffs.iter().enumerate() {
            out.coeffs[j * stride] = c;
        }
        out
    }

    fn common_order(a: &Self, b: &Self) -> u64 {
        lcm_u64(a.order, b.order)
    }

    pub fn add(&self, other: &Self) -> Self {
        let m = Self::common_order(self, other);
        let (a, b) = (self.to_order(m), other.to_order(m));
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| x + y)
            .collect();
        Cyclotomic { order: m, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, k: i64) -> Self {
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    /// Product: cyclic convolution of the coefficient vectors.
    pub fn mul(&self, other: &Self) -> Self {
        let m = Self::common_order(self, other);
        let (a, b) = (self.to_order(m), other.to_order(m));
        let n = m as usize;
        let mut coeffs = vec![0i64; n];
        for (i, &ci) in a.coeffs.iter().enumerate() {
            if ci == 0 {
                continue;
            }
            for (j, &cj) in b.coeffs.iter().enumerate() {
                if cj == 0 {
                    continue;
                }
                let k = (i + j) % n;
                coeffs[k] += ci * cj;
            }
        }
        Cyclotomic { order: m, coeffs }
    }

    /// Complex conjugate: `zeta^j -> zeta^{m-j}`.
    pub fn conjugate(&self) -> Self {
        let n = self.order as usize;
        let mut coeffs = vec![0i64; n];
        for (j, &c) in self.coeffs.iter().enumerate() {
            coeffs[(n - j) % n] = c;
        }
        Cyclotomic {
            order: self.order,
            coeffs,
        }
    }

    /// `sum_j c_j * exp(2*pi*i*j/m)` in floating point.
    pub fn numeric_eval<R: Real>(&self) -> Complex<R> {
        let m = self.order as f64;
        let mut acc = Complex::new(R::zero(), R::zero());
        for (j, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let theta = std::f64::consts::TAU * (j as f64) / m;
            let w = Complex::new(
                R::from_f64_lossy(theta.cos()),
                R::from_f64_lossy(theta.sin()),
            );
            acc += w * R::from_f64_lossy(c as f64);
        }
        acc
    }

    /// Exact rationality test.
    ///
    /// The value is fixed by every automorphism `zeta -> zeta^k` (k coprime
    /// to m) whenever the coefficients are constant on the orbits of the
    /// unit-group action `j -> j*k mod m`; those orbits are exactly the sets
    /// `{j : gcd(j, m) = d}`. A fixed value is rational, and since it is an
    /// algebraic integer it is a rational integer, so rounding the numeric
    /// evaluation is exact. Non-constant coefficient vectors are reported as
    /// "not an integer" even when the underlying value happens to be one;
    /// the values this crate feeds through here are eigenvalue-exponent
    /// multisets of power-closed connection sets, for which constancy is
    /// also necessary.
    pub fn is_rational_integer(&self) -> Option<i64> {
        let m = self.order;
        let mut class_value: Vec<Option<i64>> = vec![None; (m + 1) as usize];
        for (j, &c) in self.coeffs.iter().enumerate() {
            let d = gcd_u64(j as u64, m); // gcd(0, m) = m: the identity orbit
            match class_value[d as usize] {
                None => class_value[d as usize] = Some(c),
                Some(prev) => {
                    if prev != c {
                        return None;
                    }
                }
            }
        }
        let value: Complex<f64> = self.numeric_eval();
        debug_assert!(value.im.abs() < 1e-6 * self.magnitude_bound().max(1.0));
        let rounded = value.re.round();
        debug_assert!((value.re - rounded).abs() < 1e-6 * self.magnitude_bound().max(1.0));
        Some(rounded as i64)
    }

    fn magnitude_bound(&self) -> f64 {
        self.coeffs.iter().map(|c| c.unsigned_abs() as f64).sum()
    }
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    a / gcd_u64(a, b) * b
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn add_cancels_conjugate_roots() {
        // i + (-i) = 0
        let v = Cyclotomic::root_pow(4, 1).add(&Cyclotomic::root_pow(4, 3));
        assert_eq!(v.coeffs(), &[0, 1, 0, 1]);
        assert!(close(v.numeric_eval(), Complex64::new(0.0, 0.0), 1e-12));
    }

    #[test]
    fn add_integers() {
        let v = Cyclotomic::integer(1, 1).add(&Cyclotomic::integer(1, 1));
        assert_eq!(v.coeffs(), &[2]);
    }

    #[test]
    fn add_sixth_roots_gives_one() {
        // 2*cos(pi/3) = 1
        let v = Cyclotomic::root_pow(6, 1).add(&Cyclotomic::root_pow(6, 5));
        assert!(close(v.numeric_eval(), Complex64::new(1.0, 0.0), 1e-12));
        assert_eq!(v.is_rational_integer(), Some(1));
    }

    #[test]
    fn mul_fourth_roots() {
        // i * i = -1
        let v = Cyclotomic::root_pow(4, 1).mul(&Cyclotomic::root_pow(4, 1));
        assert_eq!(v.coeffs(), &[0, 0, 1, 0]);
        assert!(close(v.numeric_eval(), Complex64::new(-1.0, 0.0), 1e-12));
    }

    #[test]
    fn mul_wraps_exponents() {
        let v = Cyclotomic::root_pow(6, 2).mul(&Cyclotomic::root_pow(6, 4));
        assert_eq!(v.coeffs(), &[1, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn square_of_primitive_cube_sum() {
        // (zeta_3 + zeta_3^2)^2 = 2 + zeta_3 + zeta_3^2, numerically 1
        let s = Cyclotomic::root_pow(3, 1).add(&Cyclotomic::root_pow(3, 2));
        let sq = s.mul(&s);
        assert_eq!(sq.coeffs(), &[2, 1, 1]);
        assert!(close(sq.numeric_eval(), Complex64::new(1.0, 0.0), 1e-12));
        assert_eq!(sq.is_rational_integer(), Some(1));
    }

    #[test]
    fn rationality_plain_integer() {
        assert_eq!(Cyclotomic::integer(12, 3).is_rational_integer(), Some(3));
    }

    #[test]
    fn rationality_rejects_lone_fifth_root() {
        assert_eq!(Cyclotomic::root_pow(5, 1).is_rational_integer(), None);
    }

    #[test]
    fn rationality_half_turn_is_minus_one() {
        // zeta_4^2 = -1 sits alone in its gcd class
        assert_eq!(Cyclotomic::root_pow(4, 2).is_rational_integer(), Some(-1));
    }

    #[test]
    fn numeric_eval_matches_table_entry() {
        // zeta_6 = exp(pi*i/3)
        let v: Complex64 = Cyclotomic::root_pow(6, 1).numeric_eval();
        assert!(close(v, Complex64::new(0.5, 0.75f64.sqrt()), 1e-12));
        let z: Complex64 = Cyclotomic::zero(6).numeric_eval();
        assert_eq!(z, Complex64::new(0.0, 0.0));
        let m1: Complex64 = Cyclotomic::root_pow(2, 1).numeric_eval();
        assert!(close(m1, Complex64::new(-1.0, 0.0), 1e-12));
    }

    #[test]
    fn numeric_eval_is_stable_at_large_orders() {
        // forward evaluation against a reverse-order recomputation, m = 120
        let m = 120u64;
        let coeffs: Vec<i64> = (0..m as i64).map(|j| (j * j % 7) - 3).collect();
        let v = Cyclotomic::from_coeffs(m, coeffs.clone());
        let forward: Complex64 = v.numeric_eval();
        let mut reverse = Complex64::new(0.0, 0.0);
        for j in (0..m as usize).rev() {
            let theta = std::f64::consts::TAU * j as f64 / m as f64;
            reverse += Complex64::new(theta.cos(), theta.sin()) * coeffs[j] as f64;
        }
        assert!((forward - reverse).norm() <= 1e-12 * (1.0 + reverse.norm()));
    }

    #[test]
    fn to_order_preserves_value() {
        let v = Cyclotomic::root_pow(3, 1);
        let w = v.to_order(12);
        assert!(close(v.numeric_eval(), w.numeric_eval(), 1e-12));
    }

    fn arb_cyclotomic(max_m: u64) -> impl Strategy<Value = Cyclotomic> {
        (2..=max_m).prop_flat_map(|m| {
            proptest::collection::vec(-5i64..=5, m as usize)
                .prop_map(move |coeffs| Cyclotomic::from_coeffs(m, coeffs))
        })
    }

    proptest! {
        #[test]
        fn mul_agrees_with_numeric_product(a in arb_cyclotomic(24), b in arb_cyclotomic(24)) {
            let prod: Complex64 = a.mul(&b).numeric_eval();
            let direct = a.numeric_eval::<f64>() * b.numeric_eval::<f64>();
            prop_assert!((prod - direct).norm() < 1e-9 * (1.0 + direct.norm()));
        }

        #[test]
        fn conjugate_is_involutive(a in arb_cyclotomic(24)) {
            prop_assert_eq!(a.conjugate().conjugate(), a.clone());
            let lhs: Complex64 = a.conjugate().numeric_eval();
            let rhs = a.numeric_eval::<f64>().conj();
            prop_assert!((lhs - rhs).norm() < 1e-12 * (1.0 + rhs.norm()));
        }

        #[test]
        fn rational_integer_is_never_far_from_integers(a in arb_cyclotomic(24)) {
            if let Some(k) = a.is_rational_integer() {
                let v: Complex64 = a.numeric_eval();
                prop_assert!((v.re - k as f64).abs() < 1e-6);
                prop_assert!(v.im.abs() < 1e-6);
            }
        }

        #[test]
        fn add_matches_numeric_sum(a in arb_cyclotomic(24), b in arb_cyclotomic(24)) {
            let sum: Complex64 = a.add(&b).numeric_eval();
            let direct = a.numeric_eval::<f64>() + b.numeric_eval::<f64>();
            prop_assert!((sum - direct).norm() < 1e-9 * (1.0 + direct.norm()));
        }
    }
}
