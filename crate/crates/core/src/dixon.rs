//! Generic exact character tables from a bare multiplication table.
//!
//! The classic modular approach: build the class-multiplication constants,
//! simultaneously diagonalize the class matrices over a prime field
//! `F_p` with `p = 1 (mod m)` (`m` the group exponent), read off central
//! characters and degrees, then lift each value to an exact element of
//! `Z[zeta_m]` by recovering the multiset of eigenvalue exponents of
//! `rho(g)` with a discrete Fourier sum over the powers `g^s`.
//!
//! The prime is chosen larger than both `2*sqrt(|G|)` (so degrees are
//! determined by their squares mod p) and `|G|` itself (so interpolation
//! nodes and inverse DFT divisions always exist).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chartab::{CharacterRow, CharacterTable};
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::group::{conjugacy_classes, exponent, GroupTable};

const PRIME_CEILING: u64 = 1 << 20;

// ---------------------------------------------------------------------------
// arithmetic in F_p
// ---------------------------------------------------------------------------

#[inline]
fn addp(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
fn subp(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

#[inline]
fn mulp(a: u64, b: u64, p: u64) -> u64 {
    a * b % p
}

fn powp(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulp(acc, base, p);
        }
        base = mulp(base, base, p);
        e >>= 1;
    }
    acc
}

fn invp(a: u64, p: u64) -> u64 {
    powp(a, p - 2, p)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Smallest prime `p = 1 (mod m)` with `p > lower`, below 2^20.
fn find_prime(m: u64, lower: u64) -> Result<u64> {
    let mut p = lower / m * m + 1;
    while p <= lower {
        p += m;
    }
    while p < PRIME_CEILING {
        if is_prime(p) {
            return Ok(p);
        }
        p += m;
    }
    Err(Error::NoSuitablePrime { m, lower })
}

/// An element of multiplicative order exactly `m` in `F_p` (needs `m | p-1`).
fn element_of_order(m: u64, p: u64) -> Result<u64> {
    let mut factors = Vec::new();
    let mut rest = p - 1;
    let mut d = 2u64;
    while d * d <= rest {
        if rest % d == 0 {
            factors.push(d);
            while rest % d == 0 {
                rest /= d;
            }
        }
        d += 1;
    }
    if rest > 1 {
        factors.push(rest);
    }
    for h in 2..p {
        if factors.iter().all(|&q| powp(h, (p - 1) / q, p) != 1) {
            return Ok(powp(h, (p - 1) / m, p));
        }
    }
    Err(Error::Internal(format!("no primitive root mod {p}")))
}

// ---------------------------------------------------------------------------
// polynomials over F_p (ascending coefficients)
// ---------------------------------------------------------------------------

fn poly_trim(a: &mut Vec<u64>) {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
}

fn poly_deg(a: &[u64]) -> usize {
    a.len() - 1
}

fn poly_is_zero(a: &[u64]) -> bool {
    a.iter().all(|&c| c == 0)
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = addp(out[i + j], mulp(ai, bj, p), p);
        }
    }
    poly_trim(&mut out);
    out
}

fn poly_rem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let df = poly_deg(f);
    let lead_inv = invp(f[df], p);
    while !poly_is_zero(&r) && poly_deg(&r) >= df {
        let dr = poly_deg(&r);
        let c = mulp(r[dr], lead_inv, p);
        let shift = dr - df;
        for (i, &fi) in f.iter().enumerate() {
            r[shift + i] = subp(r[shift + i], mulp(c, fi, p), p);
        }
        poly_trim(&mut r);
    }
    r
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut x, mut y) = (a.to_vec(), b.to_vec());
    poly_trim(&mut x);
    poly_trim(&mut y);
    while !poly_is_zero(&y) {
        let r = poly_rem(&x, &y, p);
        x = y;
        y = r;
    }
    // normalize monic
    if !poly_is_zero(&x) {
        let inv = invp(*x.last().unwrap(), p);
        for c in &mut x {
            *c = mulp(*c, inv, p);
        }
    }
    x
}

fn poly_powmod(base: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = poly_rem(base, f, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_rem(&poly_mul(&acc, &b, p), f, p);
        }
        b = poly_rem(&poly_mul(&b, &b, p), f, p);
        e >>= 1;
    }
    acc
}

/// Distinct roots in `F_p` of a polynomial all of whose roots lie in `F_p`.
fn distinct_roots(f: &[u64], p: u64, rng: &mut ChaCha8Rng) -> Vec<u64> {
    let mut f = f.to_vec();
    poly_trim(&mut f);
    // keep only distinct linear factors: gcd(f, x^p - x)
    let xp = poly_powmod(&[0, 1], p, &f, p);
    let mut xp_minus_x = xp;
    if xp_minus_x.len() < 2 {
        xp_minus_x.resize(2, 0);
    }
    xp_minus_x[1] = subp(xp_minus_x[1], 1, p);
    let mut g = poly_gcd(&f, &xp_minus_x, p);
    let mut roots = Vec::new();
    // strip a root at zero
    if g.len() > 1 && g[0] == 0 {
        roots.push(0);
        g.remove(0);
    }
    let mut stack = vec![g];
    while let Some(h) = stack.pop() {
        if poly_deg(&h) == 0 {
            continue;
        }
        if poly_deg(&h) == 1 {
            roots.push(mulp(subp(0, h[0], p), invp(h[1], p), p));
            continue;
        }
        // equal-degree splitting by random quadratic residues
        loop {
            let a = rng.gen_range(0..p);
            let t = poly_powmod(&[a, 1], (p - 1) / 2, &h, p);
            let mut t1 = t;
            if t1.is_empty() {
                t1 = vec![0];
            }
            t1[0] = subp(t1[0], 1, p);
            let d = poly_gcd(&h, &t1, p);
            let dd = if poly_is_zero(&d) { 0 } else { poly_deg(&d) };
            if dd > 0 && dd < poly_deg(&h) {
                let quot = poly_quotient(&h, &d, p);
                stack.push(d);
                stack.push(quot);
                break;
            }
        }
    }
    roots.sort_unstable();
    roots
}

fn poly_quotient(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let df = poly_deg(f);
    let mut q = vec![0u64; r.len().saturating_sub(df)];
    let lead_inv = invp(f[df], p);
    while !poly_is_zero(&r) && poly_deg(&r) >= df {
        let dr = poly_deg(&r);
        let c = mulp(r[dr], lead_inv, p);
        q[dr - df] = c;
        for (i, &fi) in f.iter().enumerate() {
            r[dr - df + i] = subp(r[dr - df + i], mulp(c, fi, p), p);
        }
        poly_trim(&mut r);
    }
    if q.is_empty() {
        q.push(0);
    }
    q
}

// ---------------------------------------------------------------------------
// dense matrices over F_p (rows of u64)
// ---------------------------------------------------------------------------

type PMat = Vec<Vec<u64>>;

fn mat_vec(a: &PMat, v: &[u64], p: u64) -> Vec<u64> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(0u64, |acc, (&x, &y)| addp(acc, mulp(x, y, p), p))
        })
        .collect()
}

fn determinant(a: &PMat, p: u64) -> u64 {
    let n = a.len();
    let mut m = a.clone();
    let mut det = 1u64;
    for col in 0..n {
        let pivot = (col..n).find(|&r| m[r][col] != 0);
        let Some(pr) = pivot else {
            return 0;
        };
        if pr != col {
            m.swap(pr, col);
            det = subp(0, det, p);
        }
        det = mulp(det, m[col][col], p);
        let inv = invp(m[col][col], p);
        for r in (col + 1)..n {
            if m[r][col] == 0 {
                continue;
            }
            let factor = mulp(m[r][col], inv, p);
            for c in col..n {
                let sub = mulp(factor, m[col][c], p);
                m[r][c] = subp(m[r][c], sub, p);
            }
        }
    }
    det
}

/// Characteristic polynomial `det(xI - A)` by evaluation at `d+1` nodes and
/// Lagrange interpolation (requires `p > d`).
fn charpoly(a: &PMat, p: u64) -> Vec<u64> {
    let d = a.len();
    let nodes: Vec<u64> = (0..=d as u64).collect();
    let evals: Vec<u64> = nodes
        .iter()
        .map(|&x| {
            let mut m = a.clone();
            for (i, row) in m.iter_mut().enumerate() {
                for (j, v) in row.iter_mut().enumerate() {
                    *v = if i == j { subp(x, *v, p) } else { subp(0, *v, p) };
                }
            }
            determinant(&m, p)
        })
        .collect();
    // Lagrange basis accumulation
    let mut poly = vec![0u64; d + 1];
    for (i, &xi) in nodes.iter().enumerate() {
        // numerator prod_{j != i} (x - x_j), denominator prod (x_i - x_j)
        let mut num = vec![1u64];
        let mut den = 1u64;
        for (j, &xj) in nodes.iter().enumerate() {
            if i == j {
                continue;
            }
            num = poly_mul(&num, &[subp(0, xj, p), 1], p);
            den = mulp(den, subp(xi, xj, p), p);
        }
        let w = mulp(evals[i], invp(den, p), p);
        for (k, &c) in num.iter().enumerate() {
            poly[k] = addp(poly[k], mulp(w, c, p), p);
        }
    }
    poly_trim(&mut poly);
    poly
}

/// Reduced row echelon form in place; returns pivot column indices.
fn rref(m: &mut PMat, p: u64) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut row = 0usize;
    for col in 0..cols {
        if row >= rows {
            break;
        }
        let Some(pr) = (row..rows).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(pr, row);
        let inv = invp(m[row][col], p);
        for c in col..cols {
            m[row][c] = mulp(m[row][c], inv, p);
        }
        for r in 0..rows {
            if r != row && m[r][col] != 0 {
                let f = m[r][col];
                for c in col..cols {
                    let sub = mulp(f, m[row][c], p);
                    m[r][c] = subp(m[r][c], sub, p);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Basis (as columns) of the kernel of a square matrix.
fn kernel_basis(a: &PMat, p: u64) -> Vec<Vec<u64>> {
    let d = a.len();
    let mut m = a.clone();
    let pivots = rref(&mut m, p);
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..d {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![0u64; d];
        v[free] = 1;
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = subp(0, m[row][free], p);
        }
        basis.push(v);
    }
    basis
}

/// Solve `B * R = Y` for `R` where the columns of `Y` lie in the column span
/// of `B` (the subspace is invariant).
fn restrict_to_span(b_cols: &[Vec<u64>], y_cols: &[Vec<u64>], p: u64) -> Result<PMat> {
    let ambient = b_cols[0].len();
    let d = b_cols.len();
    let dy = y_cols.len();
    let mut aug: PMat = (0..ambient)
        .map(|r| {
            let mut row = Vec::with_capacity(d + dy);
            for col in b_cols {
                row.push(col[r]);
            }
            for col in y_cols {
                row.push(col[r]);
            }
            row
        })
        .collect();
    let pivots = rref(&mut aug, p);
    if pivots.len() != d || pivots.iter().any(|&c| c >= d) {
        return Err(Error::Internal(
            "subspace basis is rank-deficient or not invariant".into(),
        ));
    }
    // R[i][j] = coefficient of basis vector i in the expansion of y_j
    let mut r_mat = vec![vec![0u64; dy]; d];
    for (row, &pc) in pivots.iter().enumerate() {
        for j in 0..dy {
            r_mat[pc][j] = aug[row][d + j];
        }
    }
    // consistency: rows below the pivots must be all zero
    for row in aug.iter().skip(pivots.len()) {
        if row.iter().any(|&v| v != 0) {
            return Err(Error::Internal("subspace is not invariant".into()));
        }
    }
    Ok(r_mat)
}

// ---------------------------------------------------------------------------
// the table computation
// ---------------------------------------------------------------------------

/// Exact character table of any group given by its multiplication table.
pub fn generic_character_table(g: &GroupTable) -> Result<CharacterTable> {
    let classes = conjugacy_classes(g);
    let r = classes.len();
    let n = g.order();
    let m = exponent(g);
    let p = find_prime(m, (n as u64).max(3))?;
    let z = element_of_order(m, p)?;

    // class-multiplication matrix for one class: entry [k][j] counts the
    // factorizations z_k = x * y with x in C_i, y in C_j; built on demand to
    // keep memory at O(r^2)
    let class_matrix = |i: usize| -> PMat {
        let mut mat = vec![vec![0u64; r]; r];
        for (k, row) in mat.iter_mut().enumerate() {
            let zk = classes.representatives[k];
            for &x in &classes.classes[i] {
                let j = classes.class_of[g.mul(g.inv(x), zk)];
                row[j] = addp(row[j], 1, p);
            }
        }
        mat
    };

    // simultaneous diagonalization by eigenspace refinement
    let mut rng = ChaCha8Rng::seed_from_u64(0xd1c5_0e1f);
    let mut spaces: Vec<Vec<Vec<u64>>> = vec![(0..r)
        .map(|i| {
            let mut e = vec![0u64; r];
            e[i] = 1;
            e
        })
        .collect()];
    for i in 1..r {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let class_mat = &class_matrix(i);
        let mut next = Vec::with_capacity(spaces.len());
        for basis in spaces {
            if basis.len() == 1 {
                next.push(basis);
                continue;
            }
            let y_cols: Vec<Vec<u64>> = basis.iter().map(|b| mat_vec(class_mat, b, p)).collect();
            let restricted = restrict_to_span(&basis, &y_cols, p)?;
            let f = charpoly(&restricted, p);
            let roots = distinct_roots(&f, p, &mut rng);
            let mut covered = 0usize;
            for lambda in roots {
                let mut shifted = restricted.clone();
                for (diag, row) in shifted.iter_mut().enumerate() {
                    row[diag] = subp(row[diag], lambda, p);
                }
                let ker = kernel_basis(&shifted, p);
                if ker.is_empty() {
                    continue;
                }
                covered += ker.len();
                // each eigenspace stays one subspace so later class matrices
                // keep refining it jointly
                let eigenspace: Vec<Vec<u64>> = ker
                    .iter()
                    .map(|kvec| {
                        let mut ambient = vec![0u64; r];
                        for (bi, bcol) in basis.iter().enumerate() {
                            if kvec[bi] == 0 {
                                continue;
                            }
                            for (row, &bv) in bcol.iter().enumerate() {
                                ambient[row] = addp(ambient[row], mulp(kvec[bi], bv, p), p);
                            }
                        }
                        ambient
                    })
                    .collect();
                next.push(eigenspace);
            }
            if covered != basis.len() {
                return Err(Error::Internal(
                    "class matrix is not diagonalizable over F_p".into(),
                ));
            }
        }
        spaces = next;
    }
    if spaces.iter().any(|s| s.len() != 1) {
        return Err(Error::Internal(
            "class matrices failed to separate all central characters".into(),
        ));
    }

    let inverse_class: Vec<usize> = (0..r)
        .map(|i| classes.class_of[g.inv(classes.representatives[i])])
        .collect();
    let sizes: Vec<u64> = (0..r).map(|i| classes.size(i) as u64 % p).collect();

    // central characters from the normalized eigenvectors; the identity row
    // of L_i reads (L_i v)[0] = |C_i| * v[i'] since x*y = 1 forces y = x^{-1}
    let central: Vec<Vec<u64>> = spaces
        .iter()
        .map(|space| {
            let v = &space[0];
            if v[0] == 0 {
                return Err(Error::Internal(
                    "central-character eigenvector vanishes at the identity class".into(),
                ));
            }
            let scale = invp(v[0], p);
            Ok((0..r)
                .map(|i| mulp(sizes[i], mulp(v[inverse_class[i]], scale, p), p))
                .collect())
        })
        .collect::<Result<_>>()?;

    // degrees from column orthogonality: d^2 = |G| / sum_i w_i w_{i'} / |C_i|
    let np = (n as u64) % p;
    let max_degree = (n as f64).sqrt().floor() as u64;
    let mut degrees = Vec::with_capacity(r);
    for omegas in &central {
        let mut s = 0u64;
        for i in 0..r {
            let term = mulp(
                mulp(omegas[i], omegas[inverse_class[i]], p),
                invp(sizes[i], p),
                p,
            );
            s = addp(s, term, p);
        }
        let dsq = mulp(np, invp(s, p), p);
        let d = (1..=max_degree)
            .find(|&d| mulp(d % p, d % p, p) == dsq)
            .ok_or_else(|| Error::Internal("no integer degree matches its square mod p".into()))?;
        degrees.push(d);
    }
    let degree_sq_sum: u64 = degrees.iter().map(|d| d * d).sum();
    if degree_sq_sum != n as u64 {
        return Err(Error::TableInconsistency(format!(
            "degrees {degrees:?} have square sum {degree_sq_sum}, expected {n}"
        )));
    }

    // character values mod p: chi_i = d * omega_i / |C_i|
    let values_modp: Vec<Vec<u64>> = central
        .iter()
        .zip(&degrees)
        .map(|(omegas, &d)| {
            (0..r)
                .map(|i| mulp(mulp(d % p, omegas[i], p), invp(sizes[i], p), p))
                .collect()
        })
        .collect();

    // exact first orthogonality in F_p before lifting
    for s in 0..r {
        for t in 0..r {
            let mut acc = 0u64;
            for i in 0..r {
                let term = mulp(
                    mulp(sizes[i], values_modp[s][i], p),
                    values_modp[t][inverse_class[i]],
                    p,
                );
                acc = addp(acc, term, p);
            }
            let expect = if s == t { np } else { 0 };
            if acc != expect {
                return Err(Error::TableInconsistency(format!(
                    "first orthogonality fails mod p for rows ({s}, {t})"
                )));
            }
        }
    }

    // lift each value to the exact eigenvalue-exponent multiset
    let mut rows: Vec<CharacterRow> = Vec::with_capacity(r);
    for (chi, &d) in values_modp.iter().zip(&degrees) {
        let mut values = Vec::with_capacity(r);
        for i in 0..r {
            let x = classes.representatives[i];
            let ng = g.element_order(x);
            let w_inv = invp(powp(z, m / ng, p), p);
            // chi(x^s) for s mod ng
            let mut powers = Vec::with_capacity(ng as usize);
            let mut acc = g.identity();
            for _ in 0..ng {
                powers.push(chi[classes.class_of[acc]]);
                acc = g.mul(acc, x);
            }
            let ng_inv = invp(ng % p, p);
            let mut coeffs = vec![0i64; m as usize];
            let mut total = 0u64;
            for f in 0..ng {
                let wf = powp(w_inv, f, p);
                let mut cur = 1u64;
                let mut s_acc = 0u64;
                for &c in &powers {
                    s_acc = addp(s_acc, mulp(c, cur, p), p);
                    cur = mulp(cur, wf, p);
                }
                let mu = mulp(s_acc, ng_inv, p);
                if mu > d {
                    return Err(Error::TableInconsistency(format!(
                        "eigenvalue multiplicity {mu} exceeds degree {d} at class {i}"
                    )));
                }
                coeffs[(f * (m / ng)) as usize] += mu as i64;
                total += mu;
            }
            if total != d {
                return Err(Error::TableInconsistency(format!(
                    "eigenvalue multiplicities sum to {total}, expected degree {d}"
                )));
            }
            values.push(Cyclotomic::from_coeffs(m, coeffs));
        }
        rows.push(CharacterRow { degree: d, values });
    }

    // deterministic row order: ascending degree, then lexicographic values
    rows.sort_by(|a, b| {
        a.degree.cmp(&b.degree).then_with(|| {
            for (va, vb) in a.values.iter().zip(&b.values) {
                match va.coeffs().cmp(vb.coeffs()) {
                    std::cmp::Ordering::Equal => continue,
                    other => return other,
                }
            }
            std::cmp::Ordering::Equal
        })
    });

    Ok(CharacterTable {
        order: n,
        root_order: m,
        classes,
        rows,
    })
}
