//! Conjugacy classes `K_D(phi)`: minor equations for basic subsets, the
//! quadratic ideal generators for subregular subsets containing `D_1(d)`,
//! centralizer equations and label sets, class sizes, and brute-force
//! conjugation oracles.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::field::{Field, Fq};
use crate::matrix::{conjugate, delta_x, random_unipotent, UnipotentMatrix};
use crate::orbits::{bfs_closure, conjugate_step, PackedSpace};
use crate::roots::{
    classify_subset, r_d_of, regular_roots, root_count, split_with_d, DVariant, DecoratedSubset,
    Root, SubsetKind, SubregularSplit,
};
use crate::{Error, Result};

fn pairs(set: &BTreeSet<Root>) -> Vec<(usize, usize)> {
    set.iter().map(|r| (r.i, r.j)).collect()
}

/// A basic-subset class with its frozen minor targets.
#[derive(Debug, Clone)]
pub struct BasicClass {
    pub subset: DecoratedSubset,
    /// one equation per root of R(D): the index set of the minor and the
    /// value it takes on the whole class
    pub equations: Vec<(Root, Vec<(usize, usize)>, Fq)>,
    pub size: u64,
}

/// Build the defining equations of `K_D(phi)` for a basic subset.
pub fn basic_class(field: &Field, subset: &DecoratedSubset) -> Result<BasicClass> {
    let n = subset.n();
    let set = subset.roots();
    if !crate::roots::is_basic(&set) {
        return Err(Error::WrongKind(
            "class equations by minors require a basic subset".into(),
        ));
    }
    let x = subset.x_of(field);
    let r_d = regular_roots(n, &set);
    let mut equations = Vec::with_capacity(r_d.len());
    for root in &r_d {
        let idx = pairs(&r_d_of(&set, *root));
        let target = delta_x(field, &x, &idx)?;
        equations.push((*root, idx, target));
    }
    let size = field.q().pow((root_count(n) - r_d.len()) as u32);
    Ok(BasicClass {
        subset: subset.clone(),
        equations,
        size,
    })
}

impl BasicClass {
    pub fn contains(&self, field: &Field, g: &UnipotentMatrix) -> Result<bool> {
        if g.n() != self.subset.n() {
            return Err(Error::DimensionMismatch("degree mismatch".into()));
        }
        for (_, idx, target) in &self.equations {
            if delta_x(field, g, idx)? != *target {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Membership in `K_D(phi)` for basic `D` via the minor equations.
pub fn basic_class_membership(
    field: &Field,
    g: &UnipotentMatrix,
    subset: &DecoratedSubset,
) -> Result<bool> {
    basic_class(field, subset)?.contains(field, g)
}

/// Values of the quadratic polynomials attached to a d-subregular subset:
/// `alpha_{ij}` and `beta_{ij}` for each root of `D^+`, and `gamma`.
pub fn sreg_polynomials(
    field: &Field,
    g: &UnipotentMatrix,
    d: usize,
    d_plus: &BTreeSet<Root>,
    m: Option<usize>,
) -> (Vec<(Root, Fq)>, Vec<(Root, Fq)>, Fq) {
    let n = g.n();
    let mut alphas = Vec::new();
    let mut betas = Vec::new();
    if let Some(m) = m {
        for root in d_plus {
            let mut a = Fq(0);
            for l in n - m + 1..=n - d {
                a = field.addf(a, field.mulf(g.get(n - d + 1, l), g.get(l, root.j)));
            }
            alphas.push((*root, a));
            let mut b = Fq(0);
            for l in d + 1..=m {
                b = field.addf(b, field.mulf(g.get(root.i, l), g.get(l, d)));
            }
            betas.push((*root, b));
        }
    }
    let mut gamma = Fq(0);
    for l in d + 1..=n - d {
        gamma = field.addf(gamma, field.mulf(g.get(n - d + 1, l), g.get(l, d)));
    }
    (alphas, betas, gamma)
}

/// `gamma(g)` alone.
pub fn gamma_value(field: &Field, g: &UnipotentMatrix, d: usize) -> Fq {
    sreg_polynomials(field, g, d, &BTreeSet::new(), None).2
}

/// The constants pinned at `x_D(phi)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SregConstants {
    pub c_alpha: Fq,
    pub c_beta: Fq,
    pub c0: Fq,
    /// `c_ij` for the roots of `D'`, keyed in root order.
    pub c_minors: Vec<(Root, Fq)>,
}

pub fn sreg_constants(field: &Field, subset: &DecoratedSubset) -> Result<SregConstants> {
    let n = subset.n();
    let set = subset.roots();
    let SubsetKind::DSubregular {
        d,
        variant: DVariant::D1,
    } = classify_subset(n, &set)
    else {
        return Err(Error::WrongKind(
            "constants require a d-subregular subset containing D_1(d)".into(),
        ));
    };
    let split = split_with_d(n, &set, d)?;
    let x = subset.x_of(field);
    let c_alpha = subset
        .value(Root::new(n - d + 1, n - d))
        .expect("D contains (n-d+1, n-d)");
    let c_beta = subset
        .value(Root::new(d + 1, d))
        .expect("D contains (d+1, d)");
    let c0 = gamma_value(field, &x, d);
    let mut c_minors = Vec::new();
    for root in &split.d_prime {
        let idx = pairs(&r_d_of(&split.d_second, *root));
        c_minors.push((*root, delta_x(field, &x, &idx)?));
    }
    Ok(SregConstants {
        c_alpha,
        c_beta,
        c0,
        c_minors,
    })
}

/// A subregular class with its frozen equation system.
#[derive(Debug, Clone)]
pub struct SregClass {
    pub n: usize,
    pub d: usize,
    /// a decorated representative; `x_of` gives a class representative
    pub rep: DecoratedSubset,
    pub split: SubregularSplit,
    pub constants: SregConstants,
    /// `Delta_{ij} = 0` for the roots of `R(D'') \ D''`
    pub zero_minors: Vec<(Root, Vec<(usize, usize)>)>,
    /// `Delta_{ij} = c_ij` index sets for the roots of `D'`
    pub pinned_minors: Vec<(Root, Vec<(usize, usize)>, Fq)>,
    /// whether `gamma - c_0` is part of the ideal (see `sreg_class`)
    pub gamma_in_ideal: bool,
    pub label_a: Vec<Root>,
    pub label_b: Vec<Root>,
    pub size: u64,
}

/// Build the class descriptor of `x_D(phi)` for `D` containing `D_1(d)`.
///
/// `gamma_in_ideal` is always set: dropping `gamma - c_0` provably enlarges
/// the variety (see the `third_type_class_needs_gamma` test at n = 4), so
/// the generator is kept for every d, including `d = n_1` at even `n`.
pub fn sreg_class(field: &Field, subset: &DecoratedSubset) -> Result<SregClass> {
    let n = subset.n();
    let set = subset.roots();
    let SubsetKind::DSubregular {
        d,
        variant: DVariant::D1,
    } = classify_subset(n, &set)
    else {
        return Err(Error::WrongKind(
            "subregular class equations require D containing D_1(d)".into(),
        ));
    };
    let split = split_with_d(n, &set, d)?;
    let constants = sreg_constants(field, subset)?;
    let r_dsec = regular_roots(n, &split.d_second);
    let mut zero_minors = Vec::new();
    for root in r_dsec.difference(&split.d_second) {
        zero_minors.push((*root, pairs(&r_d_of(&split.d_second, *root))));
    }
    let mut pinned_minors = Vec::new();
    for (root, c) in &constants.c_minors {
        pinned_minors.push((*root, pairs(&r_d_of(&split.d_second, *root)), *c));
    }
    // size from the label sets of the four-root variant, which stay
    // nondegenerate even when this subset is the two-root one
    let mut big = split.d_second.clone();
    big.insert(Root::new(n - d, d));
    big.insert(Root::new(n - d + 1, d + 1));
    let (label_a, label_b) = class_label_sets_for(n, d, &split, &big)?;
    let size = field.q().pow(label_a.len() as u32);
    Ok(SregClass {
        n,
        d,
        rep: subset.clone(),
        split,
        constants,
        zero_minors,
        pinned_minors,
        gamma_in_ideal: true,
        label_a,
        label_b,
        size,
    })
}

impl SregClass {
    /// Evaluate the defining equations at `g`.
    pub fn contains(&self, field: &Field, g: &UnipotentMatrix) -> Result<bool> {
        if g.n() != self.n {
            return Err(Error::DimensionMismatch("degree mismatch".into()));
        }
        let (n, d) = (self.n, self.d);
        if g.get(d + 1, d) != self.constants.c_beta {
            return Ok(false);
        }
        if g.get(n - d + 1, n - d) != self.constants.c_alpha {
            return Ok(false);
        }
        let (alphas, betas, gamma) =
            sreg_polynomials(field, g, d, &self.split.d_plus, self.split.m);
        if self.gamma_in_ideal && gamma != self.constants.c0 {
            return Ok(false);
        }
        if alphas.iter().any(|(_, v)| !v.is_zero()) || betas.iter().any(|(_, v)| !v.is_zero()) {
            return Ok(false);
        }
        for (_, idx, c) in &self.pinned_minors {
            if delta_x(field, g, idx)? != *c {
                return Ok(false);
            }
        }
        for (_, idx) in &self.zero_minors {
            if !delta_x(field, g, idx)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// All generator values at `g`, in a fixed order, for invariance checks.
    pub fn generator_values(&self, field: &Field, g: &UnipotentMatrix) -> Result<Vec<Fq>> {
        let (n, d) = (self.n, self.d);
        let mut out = vec![g.get(n - d + 1, n - d), g.get(d + 1, d)];
        let (alphas, betas, gamma) =
            sreg_polynomials(field, g, d, &self.split.d_plus, self.split.m);
        out.push(gamma);
        out.extend(alphas.into_iter().map(|(_, v)| v));
        out.extend(betas.into_iter().map(|(_, v)| v));
        for (_, idx, _) in &self.pinned_minors {
            out.push(delta_x(field, g, idx)?);
        }
        for (_, idx) in &self.zero_minors {
            out.push(delta_x(field, g, idx)?);
        }
        Ok(out)
    }
}

/// Membership in `K_D(phi)` for `D` containing `D_1(d)`.
pub fn sreg_class_membership(
    field: &Field,
    g: &UnipotentMatrix,
    class: &SregClass,
) -> Result<bool> {
    class.contains(field, g)
}

/// The label sets `A` (centralizer equations) and `B` (ideal generators).
/// Returns an error when `|A| + |B|` fails to exhaust `Phi(n)`.
pub fn class_label_sets(n: usize, set: &BTreeSet<Root>) -> Result<(Vec<Root>, Vec<Root>)> {
    let SubsetKind::DSubregular {
        d,
        variant: DVariant::D1,
    } = classify_subset(n, set)
    else {
        return Err(Error::WrongKind(
            "label sets require D containing D_1(d)".into(),
        ));
    };
    let split = split_with_d(n, set, d)?;
    class_label_sets_for(n, d, &split, set)
}

fn class_label_sets_for(
    n: usize,
    d: usize,
    split: &SubregularSplit,
    set: &BTreeSet<Root>,
) -> Result<(Vec<Root>, Vec<Root>)> {
    let mut a: Vec<Root> = Vec::new();
    // Phi_alpha and Phi_beta, labelled by the D^+ roots
    for root in &split.d_plus {
        a.push(Root::new(n - d + 1, root.i));
    }
    for root in &split.d_plus {
        a.push(Root::new(root.i, d + 1));
    }
    // tilde families
    for j in 1..d {
        a.push(Root::new(n - d + 1, j));
    }
    for i in n - d + 2..=n {
        a.push(Root::new(i, d));
    }
    a.push(Root::new(n - d, d));
    // Phi_delta: roots in column i or row j of some (i, j) in D, kept
    // when they are D-regular and outside D
    let r_d = regular_roots(n, set);
    let mut delta: BTreeSet<Root> = BTreeSet::new();
    for x in set {
        for k in x.i + 1..=n {
            delta.insert(Root::new(k, x.i));
        }
        for l in 1..x.j {
            delta.insert(Root::new(x.j, l));
        }
    }
    for root in delta {
        if r_d.contains(&root) && !set.contains(&root) {
            a.push(root);
        }
    }
    let mut b: Vec<Root> = vec![
        Root::new(n - d + 1, n - d),
        Root::new(d + 1, d),
        Root::new(n - d + 1, d + 1),
    ];
    for root in &split.d_plus {
        b.push(Root::new(n - d + 1, root.i));
    }
    for root in &split.d_plus {
        b.push(Root::new(root.i, d + 1));
    }
    b.extend(split.d_prime.iter().copied());
    let r_dsec = regular_roots(n, &split.d_second);
    b.extend(r_dsec.difference(&split.d_second).copied());

    let distinct_a: BTreeSet<Root> = a.iter().copied().collect();
    let distinct_b: BTreeSet<Root> = b.iter().copied().collect();
    if distinct_a.len() != a.len() || distinct_b.len() != b.len() {
        return Err(Error::InvalidArgument(
            "label families are not disjoint".into(),
        ));
    }
    if a.len() + b.len() != root_count(n) {
        return Err(Error::InvalidArgument(format!(
            "|A| + |B| = {} + {} does not exhaust Phi({n})",
            a.len(),
            b.len()
        )));
    }
    a.sort();
    b.sort();
    Ok((a, b))
}

/// Evaluate the six centralizer equation families of `x_D(phi)` at `g`.
pub fn centralizer_check(
    field: &Field,
    g: &UnipotentMatrix,
    subset: &DecoratedSubset,
) -> Result<bool> {
    let n = subset.n();
    if g.n() != n {
        return Err(Error::DimensionMismatch("degree mismatch".into()));
    }
    let set = subset.roots();
    let SubsetKind::DSubregular {
        d,
        variant: DVariant::D1,
    } = classify_subset(n, &set)
    else {
        return Err(Error::WrongKind(
            "centralizer equations require D containing D_1(d)".into(),
        ));
    };
    let split = split_with_d(n, &set, d)?;
    let av = |i: usize, j: usize| subset.value(Root::new(i, j)).unwrap_or(Fq(0));
    let y = |i: usize, j: usize| g.get(i, j);
    // (alpha) and (beta), one pair per root of D^+
    for root in &split.d_plus {
        let (i, j) = (root.i, root.j);
        let lhs = field.mulf(y(n - d + 1, i), av(i, j));
        let rhs = field.mulf(av(n - d + 1, n - d), y(n - d, j));
        if lhs != rhs {
            return Ok(false);
        }
        let lhs = field.mulf(y(i, d + 1), av(d + 1, d));
        let rhs = field.mulf(av(i, j), y(j, d));
        if lhs != rhs {
            return Ok(false);
        }
    }
    // (tilde alpha): j < d
    for j in 1..d {
        let v = field.addf(
            field.mulf(av(n - d + 1, n - d), y(n - d, j)),
            field.mulf(av(n - d + 1, d + 1), y(d + 1, j)),
        );
        if !v.is_zero() {
            return Ok(false);
        }
    }
    // (tilde beta): i > n - d + 1
    for i in n - d + 2..=n {
        let v = field.addf(
            field.mulf(y(i, d + 1), av(d + 1, d)),
            field.mulf(y(i, n - d), av(n - d, d)),
        );
        if !v.is_zero() {
            return Ok(false);
        }
    }
    // (gamma)
    let lhs = field.addf(
        field.mulf(y(n - d + 1, n - d), av(n - d, d)),
        field.mulf(y(n - d + 1, d + 1), av(d + 1, d)),
    );
    let rhs = field.addf(
        field.mulf(av(n - d + 1, n - d), y(n - d, d)),
        field.mulf(av(n - d + 1, d + 1), y(d + 1, d)),
    );
    if lhs != rhs {
        return Ok(false);
    }
    // (delta)
    let r_d = regular_roots(n, &set);
    let mut delta: BTreeSet<Root> = BTreeSet::new();
    for x in &set {
        for k in x.i + 1..=n {
            delta.insert(Root::new(k, x.i));
        }
        for l in 1..x.j {
            delta.insert(Root::new(x.j, l));
        }
    }
    for root in delta {
        if r_d.contains(&root) && !set.contains(&root) && !y(root.i, root.j).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Does `g` commute with `x_D(phi)`, by direct multiplication.
pub fn commutes_with(field: &Field, g: &UnipotentMatrix, subset: &DecoratedSubset) -> Result<bool> {
    let x = subset.x_of(field);
    Ok(crate::matrix::group_mul(field, g, &x)? == crate::matrix::group_mul(field, &x, g)?)
}

/// A conjugacy class materialized by BFS: flat member coordinates.
#[derive(Debug, Clone)]
pub struct ClassData {
    pub n: usize,
    pub dim_coords: usize,
    pub members: Vec<u8>,
    pub min_index: u64,
}

impl ClassData {
    pub fn size(&self) -> u64 {
        (self.members.len() / self.dim_coords) as u64
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u8]> {
        self.members.chunks_exact(self.dim_coords)
    }
}

/// The conjugacy class of `x` as an explicit element set.
pub fn class_bfs(field: &Field, x: &UnipotentMatrix, budget: u64) -> Result<ClassData> {
    let n = x.n();
    let space = PackedSpace::new(field, n)?;
    let coords: Vec<u8> = x.coords().iter().map(|e| e.0 as u8).collect();
    let start = space.pack(&coords);
    let (members, min_index) = bfs_closure(&space, n, start, budget, |r, s, lam, c| {
        conjugate_step(field, n, r, s, lam, c)
    })?;
    Ok(ClassData {
        n,
        dim_coords: space.dim(),
        members,
        min_index,
    })
}

pub fn matrix_from_coords(n: usize, coords: &[u8]) -> UnipotentMatrix {
    UnipotentMatrix::from_coords(n, coords.iter().map(|&c| Fq(c as u16)).collect())
        .expect("coordinate stride matches the degree")
}

/// One conjugacy class of the full partition: the minimal-index element is
/// the canonical representative.
#[derive(Debug, Clone)]
pub struct GroupClass {
    pub n: usize,
    pub rep: UnipotentMatrix,
    pub size: u64,
    pub min_index: u64,
}

/// Partition the whole group into conjugacy classes (desk scale only).
pub fn enumerate_all_classes(field: &Field, n: usize, budget: u64) -> Result<Vec<GroupClass>> {
    let space = PackedSpace::new(field, n)?;
    if space.total() > budget {
        return Err(Error::BudgetExceeded(format!(
            "group of {} elements exceeds the budget of {budget}",
            space.total()
        )));
    }
    let mut visited = vec![0u64; (space.total() as usize + 63) / 64];
    let mut out = Vec::new();
    let mut coords = vec![0u8; space.dim()];
    for start in 0..space.total() {
        if visited[(start >> 6) as usize] >> (start & 63) & 1 == 1 {
            continue;
        }
        let (members, min_index) = bfs_closure(&space, n, start, budget, |r, s, lam, c| {
            conjugate_step(field, n, r, s, lam, c)
        })?;
        let size = (members.len() / space.dim()) as u64;
        for chunk in members.chunks_exact(space.dim()) {
            let idx = space.pack(chunk);
            visited[(idx >> 6) as usize] |= 1 << (idx & 63);
        }
        space.unpack(min_index, &mut coords);
        out.push(GroupClass {
            n,
            rep: matrix_from_coords(n, &coords),
            size,
            min_index,
        });
    }
    Ok(out)
}

/// Report of the conjugation-invariance suite.
#[derive(Debug, Clone)]
pub struct InvarianceReport {
    pub trials: usize,
    pub membership_failures: usize,
    pub generator_failures: usize,
}

impl InvarianceReport {
    pub fn clean(&self) -> bool {
        self.membership_failures == 0 && self.generator_failures == 0
    }
}

/// Conjugate random class elements by random group elements and check that
/// membership and every individual generator value are preserved.
pub fn invariance_suite(
    field: &Field,
    subset: &DecoratedSubset,
    trials: usize,
    seed: u64,
) -> Result<InvarianceReport> {
    let class = sreg_class(field, subset)?;
    let n = subset.n();
    let x0 = subset.x_of(field);
    let base_values = class.generator_values(field, &x0)?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut membership_failures = 0;
    let mut generator_failures = 0;
    for _ in 0..trials {
        let into_class = random_unipotent(field, n, &mut rng);
        let g = conjugate(field, &into_class, &x0)?;
        let h = random_unipotent(field, n, &mut rng);
        let conj = conjugate(field, &h, &g)?;
        if !class.contains(field, &conj)? {
            membership_failures += 1;
        }
        if class.generator_values(field, &conj)? != base_values {
            generator_failures += 1;
        }
    }
    Ok(InvarianceReport {
        trials,
        membership_failures,
        generator_failures,
    })
}
