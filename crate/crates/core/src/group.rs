//! Finite groups as indexed multiplication tables, plus the structural
//! queries (conjugacy classes, center, involutions, exponent) every
//! downstream module needs.
//!
//! Elements are dense indices `0..n-1`; labels are carried separately and
//! all math works on indices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::lcm_u64;
use crate::error::{Error, Result};

/// Default cap on group order (|S7|).
pub const DEFAULT_SIZE_CAP: usize = 5040;

const EXHAUSTIVE_ASSOC_LIMIT: usize = 128;
const SAMPLED_ASSOC_TRIPLES: usize = 10_000;

/// How a group is described on input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GroupSpec {
    Cyclic {
        n: u64,
    },
    AbelianSum {
        moduli: Vec<u64>,
    },
    Dihedral {
        n: u64,
    },
    Symmetric {
        n: u64,
    },
    DirectProduct {
        factors: Vec<GroupSpec>,
    },
    ExplicitTable {
        table: Vec<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
    },
    PermutationGenerators {
        generators: Vec<Vec<usize>>,
    },
}

impl GroupSpec {
    /// Moduli of the cyclic decomposition when the spec is visibly abelian
    /// (cyclic, abelian-sum, or a direct product of such).
    pub fn abelian_moduli(&self) -> Option<Vec<u64>> {
        match self {
            GroupSpec::Cyclic { n } => Some(vec![*n]),
            GroupSpec::AbelianSum { moduli } => Some(moduli.clone()),
            GroupSpec::DirectProduct { factors } => {
                let mut all = Vec::new();
                for f in factors {
                    all.extend(f.abelian_moduli()?);
                }
                Some(all)
            }
            _ => None,
        }
    }
}

/// A finite group as a dense multiplication table.
#[derive(Debug, Clone)]
pub struct GroupTable {
    order: usize,
    mult: Vec<u32>,
    identity: usize,
    inv: Vec<usize>,
    labels: Vec<String>,
}

impl GroupTable {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    /// Product `x * y`.
    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.mult[x * self.order + y] as usize
    }

    #[inline]
    pub fn inv(&self, x: usize) -> usize {
        self.inv[x]
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn element_by_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn power(&self, x: usize, k: u64) -> usize {
        let mut acc = self.identity;
        for _ in 0..k {
            acc = self.mul(acc, x);
        }
        acc
    }

    pub fn element_order(&self, x: usize) -> u64 {
        let mut acc = x;
        let mut k = 1u64;
        while acc != self.identity {
            acc = self.mul(acc, x);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|x| (x..self.order).all(|y| self.mul(x, y) == self.mul(y, x)))
    }
}

/// Conjugacy classes as a partition of the element indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassPartition {
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    pub representatives: Vec<usize>,
}

impl ClassPartition {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn size(&self, class: usize) -> usize {
        self.classes[class].len()
    }
}

/// Build a group from its specification with the default size cap.
pub fn build_group(spec: &GroupSpec) -> Result<GroupTable> {
    build_group_with_cap(spec, DEFAULT_SIZE_CAP)
}

pub fn build_group_with_cap(spec: &GroupSpec, cap: usize) -> Result<GroupTable> {
    let table = match spec {
        GroupSpec::Cyclic { n } => build_abelian(&[*n], cap)?,
        GroupSpec::AbelianSum { moduli } => build_abelian(moduli, cap)?,
        GroupSpec::Dihedral { n } => build_dihedral(*n, cap)?,
        GroupSpec::Symmetric { n } => build_symmetric(*n, cap)?,
        GroupSpec::DirectProduct { factors } => {
            if factors.is_empty() {
                return Err(Error::MalformedSpec(
                    "direct-product needs at least one factor".into(),
                ));
            }
            let parts = factors
                .iter()
                .map(|f| build_group_with_cap(f, cap))
                .collect::<Result<Vec<_>>>()?;
            build_direct_product(&parts, cap)?
        }
        GroupSpec::ExplicitTable { table, labels } => {
            build_explicit(table, labels.as_deref(), cap)?
        }
        GroupSpec::PermutationGenerators { generators } => build_permutation_group(generators, cap)?,
    };
    validate_group_table(&table)?;
    Ok(table)
}

fn check_cap(order: usize, cap: usize) -> Result<()> {
    if order > cap {
        Err(Error::SizeCapExceeded { cap })
    } else {
        Ok(())
    }
}

fn build_abelian(moduli: &[u64], cap: usize) -> Result<GroupTable> {
    if moduli.is_empty() || moduli.iter().any(|&m| m < 1) {
        return Err(Error::MalformedSpec("moduli must all be >= 1".into()));
    }
    let order: u64 = moduli.iter().product();
    check_cap(order as usize, cap)?;
    let n = order as usize;
    let r = moduli.len();

    let to_tuple = |mut idx: usize| -> Vec<u64> {
        let mut t = vec![0u64; r];
        for i in (0..r).rev() {
            t[i] = (idx as u64) % moduli[i];
            idx /= moduli[i] as usize;
        }
        t
    };
    let to_index = |t: &[u64]| -> usize {
        let mut idx = 0usize;
        for i in 0..r {
            idx = idx * moduli[i] as usize + t[i] as usize;
        }
        idx
    };

    let mut mult = vec![0u32; n * n];
    for x in 0..n {
        let tx = to_tuple(x);
        for y in 0..n {
            let ty = to_tuple(y);
            let sum: Vec<u64> = (0..r).map(|i| (tx[i] + ty[i]) % moduli[i]).collect();
            mult[x * n + y] = to_index(&sum) as u32;
        }
    }
    let labels = (0..n)
        .map(|x| {
            let t = to_tuple(x);
            if r == 1 {
                format!("{}", t[0])
            } else {
                format!(
                    "({})",
                    t.iter()
                        .map(|c| c.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                )
            }
        })
        .collect();
    finish_table(n, mult, labels)
}

fn rotation_label(prefix: &str, i: u64) -> String {
    match i {
        0 => {
            if prefix.is_empty() {
                "e".to_string()
            } else {
                prefix.to_string()
            }
        }
        1 => format!("{prefix}a"),
        _ => format!("{prefix}a^{i}"),
    }
}

fn build_dihedral(nrot: u64, cap: usize) -> Result<GroupTable> {
    if nrot < 1 {
        return Err(Error::MalformedSpec("dihedral n must be >= 1".into()));
    }
    let n = (2 * nrot) as usize;
    check_cap(n, cap)?;
    let nr = nrot as i64;
    // index s*nrot + r encodes b^s a^r
    let idx = |s: i64, r: i64| -> usize { (s.rem_euclid(2) * nr + r.rem_euclid(nr)) as usize };
    let mut mult = vec![0u32; n * n];
    for s1 in 0..2i64 {
        for r1 in 0..nr {
            for s2 in 0..2i64 {
                for r2 in 0..nr {
                    // b^s1 a^r1 * b^s2 a^r2 = b^(s1+s2) a^(r2 + (-1)^s2 r1)
                    let r = if s2 == 1 { r2 - r1 } else { r1 + r2 };
                    mult[idx(s1, r1) * n + idx(s2, r2)] = idx(s1 + s2, r) as u32;
                }
            }
        }
    }
    let mut labels = Vec::with_capacity(n);
    for i in 0..nrot {
        labels.push(rotation_label("", i));
    }
    for i in 0..nrot {
        labels.push(rotation_label("b", i));
    }
    finish_table(n, mult, labels)
}

fn perm_label(p: &[usize]) -> String {
    p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("")
}

fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    // (p*q)(x) = p(q(x))
    q.iter().map(|&x| p[x]).collect()
}

fn build_symmetric(n_points: u64, cap: usize) -> Result<GroupTable> {
    if n_points < 1 {
        return Err(Error::MalformedSpec("symmetric n must be >= 1".into()));
    }
    let mut order = 1usize;
    for k in 1..=n_points as usize {
        order = order.saturating_mul(k);
        check_cap(order, cap)?;
    }
    let mut perms: Vec<Vec<usize>> = vec![(0..n_points as usize).collect()];
    // lexicographic enumeration via next-permutation
    loop {
        let mut next = perms.last().unwrap().clone();
        if !next_permutation(&mut next) {
            break;
        }
        perms.push(next);
    }
    table_from_permutations(perms)
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn table_from_permutations(mut perms: Vec<Vec<usize>>) -> Result<GroupTable> {
    perms.sort();
    perms.dedup();
    let n = perms.len();
    let index_of = |p: &[usize]| -> Result<usize> {
        perms
            .binary_search_by(|q| q.as_slice().cmp(p))
            .map_err(|_| Error::Internal("permutation set is not closed under products".into()))
    };
    let mut mult = vec![0u32; n * n];
    for x in 0..n {
        for y in 0..n {
            mult[x * n + y] = index_of(&compose(&perms[x], &perms[y]))? as u32;
        }
    }
    let labels = perms.iter().map(|p| perm_label(p)).collect();
    finish_table(n, mult, labels)
}

fn build_permutation_group(generators: &[Vec<usize>], cap: usize) -> Result<GroupTable> {
    if generators.is_empty() {
        return Err(Error::MalformedSpec("no generators given".into()));
    }
    let deg = generators[0].len();
    for g in generators {
        if g.len() != deg || !is_permutation(g) {
            return Err(Error::MalformedSpec(format!(
                "generator {g:?} is not a permutation of 0..{deg}"
            )));
        }
    }
    let identity: Vec<usize> = (0..deg).collect();
    let mut seen = std::collections::BTreeSet::new();
    seen.insert(identity.clone());
    let mut queue = std::collections::VecDeque::from([identity]);
    while let Some(p) = queue.pop_front() {
        for g in generators {
            let q = compose(g, &p);
            if seen.insert(q.clone()) {
                if seen.len() > cap {
                    return Err(Error::SizeCapExceeded { cap });
                }
                queue.push_back(q);
            }
        }
    }
    table_from_permutations(seen.into_iter().collect())
}

fn is_permutation(p: &[usize]) -> bool {
    let n = p.len();
    let mut seen = vec![false; n];
    p.iter().all(|&x| {
        if x < n && !seen[x] {
            seen[x] = true;
            true
        } else {
            false
        }
    })
}

fn build_direct_product(parts: &[GroupTable], cap: usize) -> Result<GroupTable> {
    let mut order = 1usize;
    for p in parts {
        order = order.saturating_mul(p.order());
        check_cap(order, cap)?;
    }
    let n = order;
    let r = parts.len();
    let to_tuple = |mut idx: usize| -> Vec<usize> {
        let mut t = vec![0usize; r];
        for i in (0..r).rev() {
            t[i] = idx % parts[i].order();
            idx /= parts[i].order();
        }
        t
    };
    let to_index = |t: &[usize]| -> usize {
        let mut idx = 0usize;
        for i in 0..r {
            idx = idx * parts[i].order() + t[i];
        }
        idx
    };
    let mut mult = vec![0u32; n * n];
    for x in 0..n {
        let tx = to_tuple(x);
        for y in 0..n {
            let ty = to_tuple(y);
            let prod: Vec<usize> = (0..r).map(|i| parts[i].mul(tx[i], ty[i])).collect();
            mult[x * n + y] = to_index(&prod) as u32;
        }
    }
    let labels = (0..n)
        .map(|x| {
            let t = to_tuple(x);
            if r == 1 {
                parts[0].label(t[0]).to_string()
            } else {
                format!(
                    "({})",
                    t.iter()
                        .enumerate()
                        .map(|(i, &c)| parts[i].label(c).to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                )
            }
        })
        .collect();
    finish_table(n, mult, labels)
}

fn build_explicit(table: &[Vec<usize>], labels: Option<&[String]>, cap: usize) -> Result<GroupTable> {
    let n = table.len();
    if n == 0 {
        return Err(Error::MalformedSpec("empty multiplication table".into()));
    }
    check_cap(n, cap)?;
    if table.iter().any(|row| row.len() != n) {
        return Err(Error::MalformedSpec(
            "multiplication table is not square".into(),
        ));
    }
    let mut mult = vec![0u32; n * n];
    for (x, row) in table.iter().enumerate() {
        for (y, &v) in row.iter().enumerate() {
            if v >= n {
                return Err(Error::MalformedSpec(format!(
                    "entry table[{x}][{y}] = {v} out of range"
                )));
            }
            mult[x * n + y] = v as u32;
        }
    }
    let labels: Vec<String> = match labels {
        Some(ls) => {
            if ls.len() != n {
                return Err(Error::MalformedSpec("labels length mismatch".into()));
            }
            ls.to_vec()
        }
        None => (0..n).map(|x| x.to_string()).collect(),
    };
    finish_table(n, mult, labels)
}

/// Locate identity and inverses; the caller validates the rest.
fn finish_table(n: usize, mult: Vec<u32>, labels: Vec<String>) -> Result<GroupTable> {
    let identity = (0..n)
        .find(|&e| (0..n).all(|x| mult[e * n + x] as usize == x && mult[x * n + e] as usize == x))
        .ok_or(Error::NoIdentity)?;
    let mut inv = vec![usize::MAX; n];
    for x in 0..n {
        inv[x] = (0..n)
            .find(|&y| mult[x * n + y] as usize == identity)
            .ok_or(Error::NoInverse { element: x })?;
    }
    Ok(GroupTable {
        order: n,
        mult,
        identity,
        inv,
        labels,
    })
}

/// Check the table invariants: Latin square, identity, inverses, and
/// associativity (exhaustive up to order 128, 10,000 sampled triples above).
pub fn validate_group_table(g: &GroupTable) -> Result<()> {
    let n = g.order;
    for x in 0..n {
        let mut row_seen = vec![false; n];
        let mut col_seen = vec![false; n];
        for y in 0..n {
            let r = g.mul(x, y);
            let c = g.mul(y, x);
            if row_seen[r] {
                return Err(Error::RowNotPermutation { row: x, order: n });
            }
            if col_seen[c] {
                return Err(Error::ColNotPermutation { col: x, order: n });
            }
            row_seen[r] = true;
            col_seen[c] = true;
        }
    }
    for x in 0..n {
        if g.mul(g.identity, x) != x || g.mul(x, g.identity) != x {
            return Err(Error::NoIdentity);
        }
        if g.mul(x, g.inv(x)) != g.identity {
            return Err(Error::NoInverse { element: x });
        }
    }
    let assoc = |x: usize, y: usize, z: usize| g.mul(g.mul(x, y), z) == g.mul(x, g.mul(y, z));
    if n <= EXHAUSTIVE_ASSOC_LIMIT {
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if !assoc(x, y, z) {
                        return Err(Error::AssociativityFailure { x, y, z });
                    }
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_a550);
        for _ in 0..SAMPLED_ASSOC_TRIPLES {
            let (x, y, z) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
            if !assoc(x, y, z) {
                return Err(Error::AssociativityFailure { x, y, z });
            }
        }
    }
    Ok(())
}

/// Conjugacy classes by full orbit closure, ordered with the identity class
/// first and the rest by minimal element index.
pub fn conjugacy_classes(g: &GroupTable) -> ClassPartition {
    let n = g.order();
    let mut class_of = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for x in 0..n {
        if class_of[x] != usize::MAX {
            continue;
        }
        let mut orbit = std::collections::BTreeSet::new();
        for t in 0..n {
            orbit.insert(g.mul(g.mul(t, x), g.inv(t)));
        }
        let members: Vec<usize> = orbit.into_iter().collect();
        let id = classes.len();
        for &m in &members {
            class_of[m] = id;
        }
        classes.push(members);
    }
    let mut order: Vec<usize> = (0..classes.len()).collect();
    let id_class = class_of[g.identity()];
    order.sort_by_key(|&c| (c != id_class, classes[c][0]));
    let classes: Vec<Vec<usize>> = order.iter().map(|&c| classes[c].clone()).collect();
    let mut class_of = vec![usize::MAX; n];
    for (i, members) in classes.iter().enumerate() {
        for &m in members {
            class_of[m] = i;
        }
    }
    let representatives = classes.iter().map(|c| c[0]).collect();
    ClassPartition {
        classes,
        class_of,
        representatives,
    }
}

/// Elements whose conjugacy class is a singleton.
pub fn center_elements(g: &GroupTable) -> Vec<usize> {
    let classes = conjugacy_classes(g);
    let mut out: Vec<usize> = classes
        .classes
        .iter()
        .filter(|c| c.len() == 1)
        .map(|c| c[0])
        .collect();
    out.sort_unstable();
    out
}

/// Central elements `a != 1` with `a * a = 1`.
pub fn central_involutions(g: &GroupTable) -> Vec<usize> {
    center_elements(g)
        .into_iter()
        .filter(|&a| a != g.identity() && g.mul(a, a) == g.identity())
        .collect()
}

/// Least common multiple of the element orders.
pub fn exponent(g: &GroupTable) -> u64 {
    (0..g.order()).fold(1u64, |acc, x| lcm_u64(acc, g.element_order(x)))
}
