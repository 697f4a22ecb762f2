//! Combinatorics of the root set `Phi(n)`: basic/regular/d-subregular
//! subsets, decorated subsets `(D, phi)`, the D-regular roots `R(D)`, the
//! minor index sets `R_D(i, j)`, and the exponents `m_D` appearing in
//! character values.

use std::collections::BTreeSet;
use std::fmt;

use crate::field::{Field, Fq};
use crate::matrix::{NilpotentMatrix, UnipotentMatrix};
use crate::{Error, Result};

/// A pair `(i, j)` with `1 <= j < i <= n`, indexing a strictly-lower matrix
/// position. Ordered by level `i - j`, then by column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Root {
    pub i: usize,
    pub j: usize,
}

impl Root {
    pub fn new(i: usize, j: usize) -> Root {
        Root { i, j }
    }

    pub fn level(self) -> usize {
        self.i - self.j
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.i, self.j)
    }
}

impl Ord for Root {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.level(), self.j).cmp(&(other.level(), other.j))
    }
}

impl PartialOrd for Root {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

pub fn root_count(n: usize) -> usize {
    n * (n - 1) / 2
}

/// All roots of `Phi(n)` in the complete order (level, then column).
pub fn phi_n(n: usize) -> Vec<Root> {
    let mut out = Vec::with_capacity(root_count(n));
    for u in 1..n {
        for j in 1..=n - u {
            out.push(Root::new(j + u, j));
        }
    }
    out
}

/// Position of a root in the `phi_n` order; this is also the coordinate
/// slot used by matrices, forms and the packed enumeration.
#[inline]
pub fn slot(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(1 <= j && j < i && i <= n);
    let u = i - j;
    (u - 1) * (2 * n - u) / 2 + (j - 1)
}

pub fn in_phi(n: usize, i: usize, j: usize) -> bool {
    1 <= j && j < i && i <= n
}

fn check_subset(n: usize, set: &BTreeSet<Root>) -> Result<()> {
    for r in set {
        if !in_phi(n, r.i, r.j) {
            return Err(Error::InvalidArgument(format!(
                "root {r} lies outside Phi({n})"
            )));
        }
    }
    Ok(())
}

/// At most one root per row and per column.
pub fn is_basic(set: &BTreeSet<Root>) -> bool {
    let mut rows = BTreeSet::new();
    let mut cols = BTreeSet::new();
    set.iter()
        .all(|r| rows.insert(r.i) && cols.insert(r.j))
}

/// Basic and every root of the antidiagonal form `(n - j + 1, j)`.
pub fn is_regular_set(n: usize, set: &BTreeSet<Root>) -> bool {
    set.iter().all(|r| r.i == n - r.j + 1)
}

/// `R(D)`: roots with no D-root strictly between them in their row or column.
pub fn regular_roots(n: usize, set: &BTreeSet<Root>) -> BTreeSet<Root> {
    phi_n(n)
        .into_iter()
        .filter(|r| {
            !set.iter().any(|d| {
                (d.i == r.i && r.j < d.j && d.j < r.i) || (d.j == r.j && r.j < d.i && d.i < r.i)
            })
        })
        .collect()
}

/// `R_D(i, j) = {(i, j)} union {(k, l) in D : l > j and k < i}`, the index
/// set fed to the sorted minor `Delta^X`.
pub fn r_d_of(set: &BTreeSet<Root>, root: Root) -> BTreeSet<Root> {
    let mut out: BTreeSet<Root> = set
        .iter()
        .copied()
        .filter(|d| d.j > root.j && d.i < root.i)
        .collect();
    out.insert(root);
    out
}

/// `Phi_reg = {(i, j) : i > n - j + 1}`.
pub fn phi_reg(n: usize) -> BTreeSet<Root> {
    phi_n(n)
        .into_iter()
        .filter(|r| r.i > n - r.j + 1)
        .collect()
}

/// `Phi_d`: the regular region with rows and columns near `d` removed.
pub fn phi_d_set(n: usize, d: usize) -> BTreeSet<Root> {
    phi_n(n)
        .into_iter()
        .filter(|r| {
            r.i > n - r.j + 1
                && r.j != d
                && r.j != n - d
                && r.i != n - d + 1
                && r.i != n - d
        })
        .collect()
}

/// Kind of a subset of `Phi(n)`, recomputed from the set itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubsetKind {
    Regular,
    DSubregular { d: usize, variant: DVariant },
    Basic,
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DVariant {
    D0,
    D1,
}

/// Values of `d` for which d-subregular subsets are defined: `1 <= d < n_1`,
/// plus `d = n_1` for even `n` (the third-type regime).
pub fn subregular_ds(n: usize) -> Vec<usize> {
    let n1 = (n - 1) / 2;
    let mut ds: Vec<usize> = (1..n1).collect();
    if n % 2 == 0 && n1 >= 1 {
        ds.push(n1);
    }
    ds
}

/// The five `D_0(d)` candidates and the two `D_1(d)` candidates.
pub fn subregular_sets(n: usize, d: usize) -> Result<(Vec<BTreeSet<Root>>, Vec<BTreeSet<Root>>)> {
    if !subregular_ds(n).contains(&d) {
        return Err(Error::InvalidArgument(format!(
            "d = {d} out of range for n = {n}"
        )));
    }
    let a = Root::new(n - d + 1, d);
    let b = Root::new(n - d, d);
    let c = Root::new(n - d + 1, d + 1);
    let lo = Root::new(d + 1, d);
    let hi = Root::new(n - d + 1, n - d);
    let d0 = vec![
        BTreeSet::new(),
        [a].into_iter().collect(),
        [b].into_iter().collect(),
        [c].into_iter().collect(),
        [b, c].into_iter().collect(),
    ];
    let d1 = vec![
        [lo, hi].into_iter().collect(),
        [lo, hi, b, c].into_iter().collect(),
    ];
    Ok((d0, d1))
}

/// Is `rest` an admissible `D'` for parameter `d`: regular, avoiding
/// `(n-d+1, d)` and `(n-d+1, d+1)`, and avoiding the column-(d+1) root
/// `(n-d, d+1)`. The last exclusion is forced by `x_D(phi)` satisfying its
/// own class equations: with `(n-d, d+1)` present, the quadratic
/// `alpha_{n-d,d+1}` evaluates to a product of two units at `x_D(phi)`.
fn admissible_d_prime(n: usize, d: usize, rest: &BTreeSet<Root>) -> bool {
    is_regular_set(n, rest)
        && !rest.contains(&Root::new(n - d + 1, d))
        && !rest.contains(&Root::new(n - d + 1, d + 1))
        && !rest.contains(&Root::new(n - d, d + 1))
}

/// Classify a subset of `Phi(n)`, most specific kind first.
pub fn classify_subset(n: usize, set: &BTreeSet<Root>) -> SubsetKind {
    if is_regular_set(n, set) {
        return SubsetKind::Regular;
    }
    for d in subregular_ds(n) {
        let Ok((d0s, d1s)) = subregular_sets(n, d) else {
            continue;
        };
        for cand in &d1s {
            if cand.is_subset(set) {
                let rest: BTreeSet<Root> = set.difference(cand).copied().collect();
                if admissible_d_prime(n, d, &rest) {
                    return SubsetKind::DSubregular {
                        d,
                        variant: DVariant::D1,
                    };
                }
            }
        }
        for cand in &d0s {
            if cand.is_empty() || !cand.is_subset(set) {
                continue;
            }
            let rest: BTreeSet<Root> = set.difference(cand).copied().collect();
            if admissible_d_prime(n, d, &rest) && is_basic(set) {
                return SubsetKind::DSubregular {
                    d,
                    variant: DVariant::D0,
                };
            }
        }
    }
    if is_basic(set) {
        return SubsetKind::Basic;
    }
    SubsetKind::Other
}

/// A subset `D` of `Phi(n)` decorated with a map `phi: D -> F_q^*`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecoratedSubset {
    n: usize,
    entries: std::collections::BTreeMap<Root, Fq>,
}

impl DecoratedSubset {
    pub fn new(n: usize, entries: Vec<(Root, Fq)>) -> Result<DecoratedSubset> {
        let mut map = std::collections::BTreeMap::new();
        for (r, v) in entries {
            if !in_phi(n, r.i, r.j) {
                return Err(Error::InvalidArgument(format!(
                    "root {r} lies outside Phi({n})"
                )));
            }
            if v.is_zero() {
                return Err(Error::InvalidArgument(format!(
                    "phi({r}) must be a unit"
                )));
            }
            if map.insert(r, v).is_some() {
                return Err(Error::InvalidArgument(format!("duplicate root {r}")));
            }
        }
        Ok(DecoratedSubset { n, entries: map })
    }

    pub fn empty(n: usize) -> DecoratedSubset {
        DecoratedSubset {
            n,
            entries: Default::default(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn roots(&self) -> BTreeSet<Root> {
        self.entries.keys().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Root, Fq)> + '_ {
        self.entries.iter().map(|(&r, &v)| (r, v))
    }

    pub fn value(&self, r: Root) -> Option<Fq> {
        self.entries.get(&r).copied()
    }

    pub fn kind(&self) -> SubsetKind {
        classify_subset(self.n, &self.roots())
    }

    /// `x_D(phi) = 1 + sum of phi(i, j) e_{ij}` over the decorated roots.
    pub fn x_of(&self, field: &Field) -> UnipotentMatrix {
        let mut g = UnipotentMatrix::identity(self.n);
        for (r, v) in self.iter() {
            g.set(r.i, r.j, v);
        }
        let _ = field;
        g
    }

    /// `e_D(phi) = x_D(phi) - 1`.
    pub fn e_of(&self, field: &Field) -> NilpotentMatrix {
        let mut x = NilpotentMatrix::zero(self.n);
        for (r, v) in self.iter() {
            x.set(r.i, r.j, v);
        }
        let _ = field;
        x
    }
}

/// `m_D` for a regular subset: `|R(D) ∩ Phi_reg|`.
pub fn m_regular(n: usize, set: &BTreeSet<Root>) -> Result<usize> {
    check_subset(n, set)?;
    if !is_regular_set(n, set) {
        return Err(Error::WrongKind("m_regular requires a regular subset".into()));
    }
    let r = regular_roots(n, set);
    Ok(r.intersection(&phi_reg(n)).count())
}

/// The split `D = D^- ⊔ D_1(d) ⊔ D^+` of a d-subregular subset containing
/// `D_1(d)`, together with `D'`, `D''` and `m = max column of D^+`.
#[derive(Debug, Clone)]
pub struct SubregularSplit {
    pub d: usize,
    pub d_minus: BTreeSet<Root>,
    pub d_plus: BTreeSet<Root>,
    pub d_one: BTreeSet<Root>,
    pub d_prime: BTreeSet<Root>,
    pub d_second: BTreeSet<Root>,
    pub m: Option<usize>,
}

pub fn split_subregular(n: usize, set: &BTreeSet<Root>) -> Result<SubregularSplit> {
    check_subset(n, set)?;
    let SubsetKind::DSubregular {
        d,
        variant: DVariant::D1,
    } = classify_subset(n, set)
    else {
        return Err(Error::WrongKind(
            "split requires a d-subregular subset containing D_1(d)".into(),
        ));
    };
    split_with_d(n, set, d)
}

/// Split with the parameter `d` already known (used where the classifier
/// has run once and the kind is trusted).
pub fn split_with_d(n: usize, set: &BTreeSet<Root>, d: usize) -> Result<SubregularSplit> {
    let (_, d1s) = subregular_sets(n, d)?;
    let d_one: BTreeSet<Root> = d1s
        .into_iter()
        .rev()
        .find(|cand| cand.is_subset(set))
        .ok_or_else(|| Error::WrongKind("subset does not contain D_1(d)".into()))?;
    let rest: BTreeSet<Root> = set.difference(&d_one).copied().collect();
    if !admissible_d_prime(n, d, &rest) {
        return Err(Error::WrongKind(
            "regular part has roots in forbidden positions".into(),
        ));
    }
    let d_minus: BTreeSet<Root> = rest.iter().copied().filter(|r| r.j < d).collect();
    let d_plus: BTreeSet<Root> = rest
        .iter()
        .copied()
        .filter(|r| d < r.j && r.j < n - d)
        .collect();
    if d_minus.len() + d_plus.len() != rest.len() {
        return Err(Error::WrongKind(
            "regular part has roots in forbidden columns".into(),
        ));
    }
    let d_prime: BTreeSet<Root> = d_minus.union(&d_plus).copied().collect();
    let dropped = [Root::new(n - d, d), Root::new(n - d + 1, d + 1)];
    let d_second: BTreeSet<Root> = set
        .iter()
        .copied()
        .filter(|r| !dropped.contains(r))
        .collect();
    let m = d_plus.iter().map(|r| r.j).max();
    Ok(SubregularSplit {
        d,
        d_minus,
        d_plus,
        d_one,
        d_prime,
        d_second,
        m,
    })
}

/// `m_D` for a d-subregular subset.
///
/// In the `D_1` case the paper's `R(D)` is evaluated on the basic part
/// `D''`; the two decorated variants that carry the same defining equations
/// would otherwise disagree.
pub fn m_subregular(n: usize, set: &BTreeSet<Root>) -> Result<usize> {
    check_subset(n, set)?;
    let kind = classify_subset(n, set);
    let (d, variant) = match kind {
        SubsetKind::DSubregular { d, variant } => (d, variant),
        SubsetKind::Regular => {
            // a regular subset is d-subregular with D_0(d) = empty; the
            // caller supplies which d through m_subregular_d0
            return Err(Error::WrongKind(
                "regular subset: use m_subregular_d0".into(),
            ));
        }
        _ => {
            return Err(Error::WrongKind(format!(
                "m_subregular requires a d-subregular subset, got {kind:?}"
            )))
        }
    };
    match variant {
        DVariant::D0 => Ok(m_subregular_d0(n, set)),
        DVariant::D1 => {
            let split = split_with_d(n, set, d)?;
            Ok(m_subregular_d1(n, d, &split.d_second))
        }
    }
}

/// `|R(D) ∩ Phi_reg| - 1`, the D_0-case exponent (valid for basic `D`).
pub fn m_subregular_d0(n: usize, set: &BTreeSet<Root>) -> usize {
    regular_roots(n, set).intersection(&phi_reg(n)).count() - 1
}

/// `|R(D'') ∩ Phi_d| + n - 2d - 1`, the D_1-case exponent.
pub fn m_subregular_d1(n: usize, d: usize, d_second: &BTreeSet<Root>) -> usize {
    regular_roots(n, d_second)
        .intersection(&phi_d_set(n, d))
        .count()
        + n
        - 2 * d
        - 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(roots: &[(usize, usize)]) -> BTreeSet<Root> {
        roots.iter().map(|&(i, j)| Root::new(i, j)).collect()
    }

    #[test]
    fn phi_order_matches_level_then_column() {
        assert_eq!(phi_n(2), vec![Root::new(2, 1)]);
        assert_eq!(
            phi_n(3),
            vec![Root::new(2, 1), Root::new(3, 2), Root::new(3, 1)]
        );
        assert_eq!(phi_n(6).len(), 15);
        // slots agree with positions, and the order is total
        for n in 2..=8 {
            let roots = phi_n(n);
            for (t, r) in roots.iter().enumerate() {
                assert_eq!(slot(n, r.i, r.j), t);
            }
            for w in roots.windows(2) {
                assert!(w[0] < w[1]);
            }
        }
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify_subset(6, &set(&[(6, 1), (4, 3)])), SubsetKind::Regular);
        assert_eq!(
            classify_subset(5, &set(&[(2, 1), (5, 4)])),
            SubsetKind::DSubregular {
                d: 1,
                variant: DVariant::D1
            }
        );
        assert_eq!(classify_subset(5, &BTreeSet::new()), SubsetKind::Regular);
        // basic but neither regular nor subregular
        assert_eq!(classify_subset(5, &set(&[(3, 1)])), SubsetKind::Basic);
        // two roots in one row: not basic
        assert_eq!(classify_subset(5, &set(&[(4, 1), (4, 2)])), SubsetKind::Other);
        // the full subdiagonal contains the D_1(1) roots but its regular
        // part sits in column d+1, so it stays plain basic
        assert_eq!(
            classify_subset(4, &set(&[(2, 1), (3, 2), (4, 3)])),
            SubsetKind::Basic
        );
    }

    #[test]
    fn regular_roots_of_the_worked_example() {
        // n = 6, D = {(3,2), (5,4)}: the figure's grayed complement
        let d = set(&[(3, 2), (5, 4)]);
        let r = regular_roots(6, &d);
        assert_eq!(
            r,
            set(&[(2, 1), (3, 2), (4, 1), (4, 3), (5, 4), (6, 1), (6, 3), (6, 5)])
        );
        let complement: BTreeSet<Root> = phi_n(6)
            .into_iter()
            .filter(|x| !r.contains(x))
            .collect();
        assert_eq!(
            complement,
            set(&[(3, 1), (4, 2), (5, 1), (5, 2), (5, 3), (6, 2), (6, 4)])
        );
    }

    #[test]
    fn regular_roots_of_the_d1_subset() {
        let d = set(&[(2, 1), (5, 4)]);
        assert_eq!(
            regular_roots(5, &d),
            set(&[(2, 1), (3, 2), (4, 2), (4, 3), (5, 4)])
        );
        assert_eq!(regular_roots(5, &BTreeSet::new()), phi_n(5).into_iter().collect());
    }

    #[test]
    fn r_d_of_scans() {
        assert_eq!(
            r_d_of(&BTreeSet::new(), Root::new(3, 1)),
            set(&[(3, 1)])
        );
        let dsec = set(&[(2, 1), (5, 4)]);
        assert_eq!(r_d_of(&dsec, Root::new(3, 2)), set(&[(3, 2)]));
        assert_eq!(r_d_of(&dsec, Root::new(4, 2)), set(&[(4, 2)]));
        assert_eq!(r_d_of(&dsec, Root::new(2, 1)), set(&[(2, 1)]));
    }

    #[test]
    fn basic_subsets_are_their_own_witnesses() {
        // R(D) contains D for every basic D, n <= 5, |D| <= 2
        for n in 2..=5 {
            let roots = phi_n(n);
            for a in 0..roots.len() {
                for b in a..roots.len() {
                    let d: BTreeSet<Root> = if a == b {
                        [roots[a]].into_iter().collect()
                    } else {
                        [roots[a], roots[b]].into_iter().collect()
                    };
                    if is_basic(&d) {
                        assert!(d.is_subset(&regular_roots(n, &d)));
                    }
                }
            }
        }
    }

    #[test]
    fn phi_reg_and_mu() {
        assert_eq!(
            phi_reg(6),
            set(&[(6, 2), (5, 3), (6, 3), (5, 4), (6, 4), (6, 5)])
        );
        for n in 2usize..=10 {
            let mu: usize = (1..)
                .map(|k| n.saturating_sub(2 * k))
                .take_while(|&v| v >= 1)
                .sum();
            assert_eq!(phi_reg(n).len(), mu, "n = {n}");
        }
    }

    #[test]
    fn m_regular_bounds() {
        for n in 2..=6 {
            let mu = phi_reg(n).len();
            assert_eq!(m_regular(n, &BTreeSet::new()).unwrap(), mu);
            // m_D <= mu over all regular subsets; the corner root (n, 1)
            // kills nothing, so the bound is attained off D = empty too
            let antidiag: Vec<Root> = (1..=n / 2)
                .map(|j| Root::new(n - j + 1, j))
                .filter(|r| r.i > r.j)
                .collect();
            for mask in 1u32..(1 << antidiag.len()) {
                let d: BTreeSet<Root> = antidiag
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask >> k & 1 == 1)
                    .map(|(_, &r)| r)
                    .collect();
                let m = m_regular(n, &d).unwrap();
                assert!(m <= mu);
                let untouched = phi_reg(n).is_subset(&regular_roots(n, &d));
                assert_eq!(m == mu, untouched);
            }
            if n >= 4 {
                let corner: BTreeSet<Root> = [Root::new(n, 1)].into_iter().collect();
                assert_eq!(m_regular(n, &corner).unwrap(), mu);
            }
        }
    }

    #[test]
    fn subregular_set_candidates() {
        let (d0, d1) = subregular_sets(5, 1).unwrap();
        assert_eq!(d0.len() + d1.len(), 7);
        assert_eq!(d1[0], set(&[(2, 1), (5, 4)]));
        let (d0, _) = subregular_sets(8, 2).unwrap();
        assert_eq!(d0[3], set(&[(7, 3)]));
        assert!(subregular_sets(5, 2).is_err());
    }

    #[test]
    fn classify_accepts_every_emitted_candidate() {
        for n in [5usize, 6] {
            for d in subregular_ds(n) {
                let (d0s, d1s) = subregular_sets(n, d).unwrap();
                for cand in d1s {
                    assert_eq!(
                        classify_subset(n, &cand),
                        SubsetKind::DSubregular {
                            d,
                            variant: DVariant::D1
                        },
                        "n = {n}, d = {d}"
                    );
                }
                for cand in d0s.into_iter().skip(1) {
                    let kind = classify_subset(n, &cand);
                    let ok = kind
                        == SubsetKind::DSubregular {
                            d,
                            variant: DVariant::D0,
                        }
                        || kind == SubsetKind::Regular;
                    assert!(ok, "n = {n}, d = {d}, kind = {kind:?}");
                }
            }
        }
    }

    #[test]
    fn phi_d_and_m_subregular() {
        assert!(phi_d_set(5, 1).is_empty());
        let d = set(&[(2, 1), (5, 4)]);
        assert_eq!(m_subregular(5, &d).unwrap(), 2);
        // D_0 case with D = {(5,1)} (the (n-d+1, d) variant) at n = 5
        assert_eq!(m_subregular_d0(5, &BTreeSet::new()), 3);
        assert_eq!(m_subregular_d0(5, &set(&[(5, 1)])), 3);
    }

    #[test]
    fn split_examples() {
        let s = split_subregular(5, &set(&[(2, 1), (5, 4)])).unwrap();
        assert_eq!(s.d, 1);
        assert!(s.d_minus.is_empty() && s.d_plus.is_empty() && s.d_prime.is_empty());
        assert_eq!(s.d_second, set(&[(2, 1), (5, 4)]));
        assert_eq!(s.m, None);

        let s = split_subregular(6, &set(&[(2, 1), (6, 5), (4, 3)])).unwrap();
        assert_eq!(s.d, 1);
        assert_eq!(s.d_plus, set(&[(4, 3)]));
        assert_eq!(s.m, Some(3));
        assert_eq!(s.d_second, set(&[(2, 1), (6, 5), (4, 3)]));

        // (5,1) and (6,2) are exactly the extra roots of the four-element
        // D_1(1) variant at n = 6, so this decomposes with D+ = {(4,3)}
        let s = split_subregular(6, &set(&[(2, 1), (6, 5), (5, 1), (6, 2), (4, 3)])).unwrap();
        assert_eq!(s.d, 1);
        assert_eq!(s.d_one, set(&[(2, 1), (6, 5), (5, 1), (6, 2)]));
        assert_eq!(s.d_plus, set(&[(4, 3)]));
        assert_eq!(s.d_second, set(&[(2, 1), (6, 5), (4, 3)]));

        // (4,1) is not of antidiagonal form and is no D_1 extra: rejected
        assert!(split_subregular(6, &set(&[(2, 1), (6, 5), (4, 1)])).is_err());
    }

    #[test]
    fn decorated_subset_validation() {
        let f = Field::new(5, 1, 5).unwrap();
        assert!(DecoratedSubset::new(5, vec![(Root::new(2, 1), Fq(0))]).is_err());
        assert!(DecoratedSubset::new(5, vec![(Root::new(1, 2), Fq(1))]).is_err());
        let d = DecoratedSubset::new(
            5,
            vec![(Root::new(2, 1), Fq(3)), (Root::new(5, 4), Fq(2))],
        )
        .unwrap();
        let x = d.x_of(&f);
        assert_eq!(x.get(2, 1), Fq(3));
        assert_eq!(x.get(5, 4), Fq(2));
        assert_eq!(x.get(3, 1), Fq(0));
        let e = d.e_of(&f);
        for r in phi_n(5) {
            assert_eq!(x.get(r.i, r.j), e.get(r.i, r.j));
        }
        assert_eq!(DecoratedSubset::empty(5).x_of(&f), UnipotentMatrix::identity(5));
    }
}
