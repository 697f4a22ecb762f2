//! Coadjoint orbits: breadth-first closure under the elementary coadjoint
//! action, the full orbit partition at desk scale, canonical forms of
//! regular and subregular orbits, and the corner-minor invariants.

use std::collections::HashSet;

use crate::field::{Field, Fq};
use crate::matrix::{delta_d_form, LinearForm};
use crate::roots::{phi_n, root_count, slot, Root};
use crate::{Error, Result};

/// `mu(n) = (n-2) + (n-4) + ...` down to 1 or 2.
pub fn mu(n: usize) -> usize {
    (1..)
        .map(|k| n.saturating_sub(2 * k))
        .take_while(|&v| v >= 1)
        .sum()
}

/// `(n_0, n_1) = ([n/2], [(n-1)/2])`, so `n = n_0 + n_1 + 1`.
pub fn n0_n1(n: usize) -> (usize, usize) {
    (n / 2, (n - 1) / 2)
}

/// Mixed-radix packing of coordinate vectors into integers, used for
/// visited sets on both the form side and the group side.
#[derive(Debug, Clone)]
pub struct PackedSpace {
    q: u64,
    dim: usize,
    total: u64,
}

impl PackedSpace {
    pub fn new(field: &Field, n: usize) -> Result<PackedSpace> {
        let dim = root_count(n);
        let q = field.q();
        if q > 255 {
            return Err(Error::BudgetExceeded(
                "packed enumeration supports q <= 255".into(),
            ));
        }
        let mut total: u64 = 1;
        for _ in 0..dim {
            total = total
                .checked_mul(q)
                .ok_or_else(|| Error::BudgetExceeded("q^dim overflows u64".into()))?;
        }
        Ok(PackedSpace { q, dim, total })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    #[inline]
    pub fn pack(&self, coords: &[u8]) -> u64 {
        let mut acc = 0u64;
        for &c in coords.iter().rev() {
            acc = acc * self.q + c as u64;
        }
        acc
    }

    #[inline]
    pub fn unpack(&self, mut idx: u64, coords: &mut [u8]) {
        for c in coords.iter_mut() {
            *c = (idx % self.q) as u8;
            idx /= self.q;
        }
    }
}

enum Visited {
    Bits(Vec<u64>),
    Hash(HashSet<u64>),
}

impl Visited {
    fn with_capacity(total: u64) -> Visited {
        // a bitset over the whole space, when affordable
        if total <= 1 << 31 {
            Visited::Bits(vec![0u64; (total as usize + 63) / 64])
        } else {
            Visited::Hash(HashSet::new())
        }
    }

    #[inline]
    fn insert(&mut self, idx: u64) -> bool {
        match self {
            Visited::Bits(words) => {
                let w = &mut words[(idx >> 6) as usize];
                let bit = 1u64 << (idx & 63);
                if *w & bit != 0 {
                    false
                } else {
                    *w |= bit;
                    true
                }
            }
            Visited::Hash(set) => set.insert(idx),
        }
    }

    #[inline]
    fn contains(&self, idx: u64) -> bool {
        match self {
            Visited::Bits(words) => words[(idx >> 6) as usize] >> (idx & 63) & 1 == 1,
            Visited::Hash(set) => set.contains(&idx),
        }
    }
}

/// In-place coadjoint action of the elementary `x_{rs}(lambda)` on the
/// coordinates of a form.
#[inline]
pub fn coadjoint_step(field: &Field, n: usize, r: usize, s: usize, lambda: Fq, coords: &mut [u8]) {
    // row r of the upper embedding picks up lambda * row s
    for b in r + 1..=n {
        let src = coords[slot(n, b, s)];
        if src != 0 {
            let dst = &mut coords[slot(n, b, r)];
            let prod = field.mulf(lambda, Fq(src as u16));
            *dst = field.addf(Fq(*dst as u16), prod).0 as u8;
        }
    }
    // column s loses lambda * column r
    for a in 1..s {
        let src = coords[slot(n, r, a)];
        if src != 0 {
            let dst = &mut coords[slot(n, s, a)];
            let prod = field.mulf(lambda, Fq(src as u16));
            *dst = field.subf(Fq(*dst as u16), prod).0 as u8;
        }
    }
}

/// In-place conjugation of a unipotent element by `x_{rs}(lambda)`.
#[inline]
pub fn conjugate_step(field: &Field, n: usize, r: usize, s: usize, lambda: Fq, coords: &mut [u8]) {
    for b in 1..s {
        let src = coords[slot(n, s, b)];
        if src != 0 {
            let dst = &mut coords[slot(n, r, b)];
            let prod = field.mulf(lambda, Fq(src as u16));
            *dst = field.addf(Fq(*dst as u16), prod).0 as u8;
        }
    }
    for a in r + 1..=n {
        let src = coords[slot(n, a, r)];
        if src != 0 {
            let dst = &mut coords[slot(n, a, s)];
            let prod = field.mulf(lambda, Fq(src as u16));
            *dst = field.subf(Fq(*dst as u16), prod).0 as u8;
        }
    }
}

/// Closure of a starting point under all elementary generator steps.
/// Members come back as flat coordinate bytes with stride `dim`.
pub(crate) fn bfs_closure<F>(
    space: &PackedSpace,
    n: usize,
    start: u64,
    budget: u64,
    mut step: F,
) -> Result<(Vec<u8>, u64)>
where
    F: FnMut(usize, usize, Fq, &mut [u8]),
{
    let dim = space.dim();
    let roots = phi_n(n);
    let q = space.q;
    let mut visited = Visited::with_capacity(space.total());
    let mut frontier: Vec<u64> = vec![start];
    visited.insert(start);
    let mut members: Vec<u8> = Vec::new();
    let mut min_index = start;
    let mut base = vec![0u8; dim];
    let mut scratch = vec![0u8; dim];
    let mut count: u64 = 0;
    while let Some(idx) = frontier.pop() {
        count += 1;
        if count > budget {
            return Err(Error::BudgetExceeded(format!(
                "closure exceeded the budget of {budget} elements"
            )));
        }
        min_index = min_index.min(idx);
        space.unpack(idx, &mut base);
        members.extend_from_slice(&base);
        for root in &roots {
            for lam in 1..q {
                scratch.copy_from_slice(&base);
                step(root.i, root.j, Fq(lam as u16), &mut scratch);
                let packed = space.pack(&scratch);
                if !visited.contains(packed) {
                    visited.insert(packed);
                    frontier.push(packed);
                }
            }
        }
    }
    Ok((members, min_index))
}

/// A materialized orbit: flat member coordinates with stride `dim_coords`.
#[derive(Debug, Clone)]
pub struct OrbitData {
    pub n: usize,
    pub dim_coords: usize,
    pub members: Vec<u8>,
    pub min_index: u64,
}

impl OrbitData {
    pub fn size(&self) -> u64 {
        (self.members.len() / self.dim_coords) as u64
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u8]> {
        self.members.chunks_exact(self.dim_coords)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubregularShape {
    Type1 { d: usize },
    Type2,
    Type3A,
    Type3B,
}

impl SubregularShape {
    pub fn d(&self, n: usize) -> usize {
        match self {
            SubregularShape::Type1 { d } => *d,
            _ => (n - 1) / 2,
        }
    }

    pub fn type_number(&self) -> u8 {
        match self {
            SubregularShape::Type1 { .. } => 1,
            SubregularShape::Type2 => 2,
            SubregularShape::Type3A | SubregularShape::Type3B => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitKind {
    Regular,
    Subregular(SubregularShape),
    Other,
}

#[derive(Debug, Clone)]
pub struct OrbitDescriptor {
    pub n: usize,
    pub size: u64,
    pub dim: u32,
    pub kind: OrbitKind,
    /// `Delta_d` of the transpose of any member, `d = 1..n_0`.
    pub invariants: Vec<Fq>,
    pub canonical_form: Option<LinearForm>,
    pub min_index: u64,
    pub data: Option<OrbitData>,
}

impl OrbitDescriptor {
    pub fn data(&self) -> Result<&OrbitData> {
        self.data
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("orbit is not materialized".into()))
    }
}

pub fn form_from_coords(n: usize, coords: &[u8]) -> LinearForm {
    let mut f = LinearForm::zero(n);
    for (t, r) in phi_n(n).iter().enumerate() {
        f.set(r.i, r.j, Fq(coords[t] as u16));
    }
    f
}

pub fn form_coords(f: &LinearForm) -> Vec<u8> {
    f.coords().iter().map(|e| e.0 as u8).collect()
}

fn exact_log_q(q: u64, size: u64) -> u32 {
    let mut e = 0;
    let mut v = size;
    while v > 1 {
        assert!(v % q == 0, "orbit size must be a power of q");
        v /= q;
        e += 1;
    }
    e
}

fn describe(field: &Field, data: OrbitData, keep_members: bool) -> OrbitDescriptor {
    let n = data.n;
    let size = data.size();
    let dim = exact_log_q(field.q(), size);
    assert!(dim % 2 == 0, "orbits are even-dimensional");
    let (n0, _) = n0_n1(n);
    let sample = form_from_coords(n, data.iter().next().expect("orbit is nonempty"));
    let invariants: Vec<Fq> = (1..=n0).map(|d| delta_d_form(field, &sample, d)).collect();
    let two_mu = 2 * mu(n) as u32;
    let mut canonical = None;
    let mut kind = OrbitKind::Other;
    if dim == two_mu || dim + 2 == two_mu {
        for coords in data.iter() {
            let f = form_from_coords(n, coords);
            let hit = if dim == two_mu {
                is_regular_canonical(field, &f).map(|_| OrbitKind::Regular)
            } else {
                is_subregular_canonical(field, &f).map(OrbitKind::Subregular)
            };
            if let Some(k) = hit {
                assert!(canonical.is_none(), "canonical form on an orbit is unique");
                canonical = Some(f);
                kind = k;
            }
        }
    }
    OrbitDescriptor {
        n,
        size,
        dim,
        kind,
        invariants,
        canonical_form: canonical,
        min_index: data.min_index,
        data: keep_members.then_some(data),
    }
}

/// BFS closure of a single form under the coadjoint action; the result is
/// always materialized.
pub fn orbit_of(field: &Field, f: &LinearForm, budget: u64) -> Result<OrbitDescriptor> {
    let n = f.n();
    let space = PackedSpace::new(field, n)?;
    let start = space.pack(&form_coords(f));
    let (members, min_index) = bfs_closure(&space, n, start, budget, |r, s, lam, coords| {
        coadjoint_step(field, n, r, s, lam, coords)
    })?;
    let data = OrbitData {
        n,
        dim_coords: space.dim(),
        members,
        min_index,
    };
    Ok(describe(field, data, true))
}

/// Partition the whole dual space into orbits, ordered by (dim descending,
/// invariants, min index). Members are retained only when `materialize`
/// is set.
pub fn enumerate_all_orbits(
    field: &Field,
    n: usize,
    budget: u64,
    materialize: bool,
) -> Result<Vec<OrbitDescriptor>> {
    let space = PackedSpace::new(field, n)?;
    if space.total() > budget {
        return Err(Error::BudgetExceeded(format!(
            "space of {} forms exceeds the budget of {budget}",
            space.total()
        )));
    }
    let mut visited = Visited::with_capacity(space.total());
    let mut out = Vec::new();
    for start in 0..space.total() {
        if visited.contains(start) {
            continue;
        }
        let (members, min_index) = bfs_closure(&space, n, start, budget, |r, s, lam, coords| {
            coadjoint_step(field, n, r, s, lam, coords)
        })?;
        for chunk in members.chunks_exact(space.dim()) {
            visited.insert(space.pack(chunk));
        }
        let data = OrbitData {
            n,
            dim_coords: space.dim(),
            members,
            min_index,
        };
        out.push(describe(field, data, materialize));
    }
    out.sort_by(|a, b| {
        b.dim
            .cmp(&a.dim)
            .then_with(|| a.invariants.cmp(&b.invariants))
            .then_with(|| a.min_index.cmp(&b.min_index))
    });
    Ok(out)
}

/// The antidiagonal canonical form of a regular orbit: `xi_{1,n} = beta_1`,
/// `xi_{d,n-d+1} = beta_d / beta_{d-1}`.
pub fn regular_canonical_form(field: &Field, n: usize, betas: &[Fq]) -> Result<LinearForm> {
    let (n0, _) = n0_n1(n);
    if betas.len() != n0 {
        return Err(Error::InvalidArgument(format!(
            "expected {n0} beta values, got {}",
            betas.len()
        )));
    }
    for (k, b) in betas.iter().enumerate() {
        let d = k + 1;
        let required = d < n0 || n % 2 == 1;
        if required && b.is_zero() {
            return Err(Error::InvalidArgument(format!("beta_{d} must be a unit")));
        }
    }
    let mut f = LinearForm::zero(n);
    let mut prev = field.one();
    for (k, &b) in betas.iter().enumerate() {
        let d = k + 1;
        if b.is_zero() {
            // only the last slot of an even-degree group may vanish
            break;
        }
        let entry = field.divf(b, prev)?;
        f.set_xi(d, n - d + 1, entry);
        prev = b;
    }
    Ok(f)
}

/// Recognize an antidiagonal canonical form and recover its beta vector by
/// telescoping the entries.
pub fn is_regular_canonical(field: &Field, f: &LinearForm) -> Option<Vec<Fq>> {
    let n = f.n();
    let (n0, _) = n0_n1(n);
    let antidiag: Vec<Root> = (1..=n0).map(|j| Root::new(n - j + 1, j)).collect();
    for r in f.support() {
        if !antidiag.contains(&r) {
            return None;
        }
    }
    let mut betas = Vec::with_capacity(n0);
    let mut acc = field.one();
    let mut seen_zero = false;
    for j in 1..=n0 {
        let entry = f.xi(j, n - j + 1);
        if entry.is_zero() {
            seen_zero = true;
            betas.push(Fq(0));
            continue;
        }
        if seen_zero {
            // a unit after a vanished slot cannot telescope
            return None;
        }
        acc = field.mulf(acc, entry);
        betas.push(acc);
    }
    for (k, b) in betas.iter().enumerate() {
        let d = k + 1;
        let required = d < n0 || n % 2 == 1;
        if required && b.is_zero() {
            return None;
        }
    }
    Some(betas)
}

/// Positions of a subregular shape as form-matrix coordinates `(a, b)`,
/// `a < b`: the entries that must be units, the entries that are free,
/// and their union.
fn shape_positions(
    n: usize,
    shape: SubregularShape,
) -> (
    Vec<(usize, usize)>,
    Vec<(usize, usize)>,
    Vec<(usize, usize)>,
) {
    let (n0, n1) = n0_n1(n);
    let antidiag = |hi: usize| -> Vec<(usize, usize)> { (1..=hi).map(|j| (j, n - j + 1)).collect() };
    let (required, optional) = match shape {
        SubregularShape::Type1 { d } => {
            let mut required: Vec<(usize, usize)> =
                (1..d).map(|j| (j, n - j + 1)).collect();
            required.push((d, n - d));
            required.push((d + 1, n - d + 1));
            let mut optional = vec![(n - d, n - d + 1)];
            for j in d + 2..=n0 {
                let pos = (j, n - j + 1);
                if j < n0 || n % 2 == 1 {
                    required.push(pos);
                } else {
                    optional.push(pos);
                }
            }
            (required, optional)
        }
        SubregularShape::Type2 => (antidiag(n1 - 1), vec![(n1, n0 + 1), (n1 + 1, n0 + 2)]),
        SubregularShape::Type3A => {
            let mut required = antidiag(n1 - 1);
            required.push((n1, n0 + 1));
            (required, vec![(n1 + 1, n0 + 2), (n1 + 2, n0 + 2)])
        }
        SubregularShape::Type3B => {
            let mut required = antidiag(n1 - 1);
            required.push((n1 + 1, n0 + 2));
            (required, vec![(n1, n0)])
        }
    };
    let allowed = required.iter().chain(&optional).copied().collect();
    (required, optional, allowed)
}

fn matches_shape(f: &LinearForm, n: usize, shape: SubregularShape) -> bool {
    let (required, _, allowed) = shape_positions(n, shape);
    for r in f.support() {
        if !allowed.contains(&(r.j, r.i)) {
            return false;
        }
    }
    required.iter().all(|&(a, b)| !f.xi(a, b).is_zero())
}

/// Recognize a canonical form of a subregular orbit and report its shape.
pub fn is_subregular_canonical(field: &Field, f: &LinearForm) -> Option<SubregularShape> {
    let _ = field;
    let n = f.n();
    if n < 3 {
        return None;
    }
    let (_, n1) = n0_n1(n);
    for d in 1..n1 {
        let shape = SubregularShape::Type1 { d };
        if matches_shape(f, n, shape) {
            return Some(shape);
        }
    }
    if n % 2 == 1 && n1 >= 1 && matches_shape(f, n, SubregularShape::Type2) {
        return Some(SubregularShape::Type2);
    }
    if n % 2 == 0 && n1 >= 1 {
        for shape in [SubregularShape::Type3A, SubregularShape::Type3B] {
            if matches_shape(f, n, shape) {
                return Some(shape);
            }
        }
    }
    None
}

/// Every canonical subregular form for the given degree, with its shape,
/// in a deterministic order.
pub fn subregular_canonical_forms(field: &Field, n: usize) -> Vec<(LinearForm, SubregularShape)> {
    let mut out = Vec::new();
    if n < 3 {
        return out;
    }
    let (_, n1) = n0_n1(n);
    let mut shapes: Vec<SubregularShape> = (1..n1).map(|d| SubregularShape::Type1 { d }).collect();
    if n % 2 == 1 && n1 >= 1 {
        shapes.push(SubregularShape::Type2);
    }
    if n % 2 == 0 && n1 >= 1 {
        shapes.push(SubregularShape::Type3A);
        shapes.push(SubregularShape::Type3B);
    }
    for shape in shapes {
        let (required, optional, _) = shape_positions(n, shape);
        let positions: Vec<(usize, usize)> = required.iter().chain(&optional).copied().collect();
        let unit_flags: Vec<bool> = required
            .iter()
            .map(|_| true)
            .chain(optional.iter().map(|_| false))
            .collect();
        let mut values = vec![0u64; positions.len()];
        loop {
            if values
                .iter()
                .zip(&unit_flags)
                .all(|(&v, &must)| !must || v != 0)
            {
                let mut f = LinearForm::zero(n);
                for (&(a, b), &v) in positions.iter().zip(&values) {
                    f.set_xi(a, b, Fq(v as u16));
                }
                debug_assert_eq!(is_subregular_canonical(field, &f), Some(shape));
                out.push((f, shape));
            }
            let mut k = 0;
            loop {
                if k == values.len() {
                    break;
                }
                values[k] += 1;
                if values[k] < field.q() {
                    break;
                }
                values[k] = 0;
                k += 1;
            }
            if k == values.len() {
                break;
            }
        }
    }
    out
}

/// The unique canonical member of a materialized regular or subregular orbit.
pub fn canonical_form_of(field: &Field, orbit: &OrbitDescriptor) -> Result<LinearForm> {
    let data = orbit.data()?;
    let mut found: Option<LinearForm> = None;
    for coords in data.iter() {
        let f = form_from_coords(orbit.n, coords);
        let hit = is_regular_canonical(field, &f).is_some()
            || is_subregular_canonical(field, &f).is_some();
        if hit {
            if found.is_some() {
                return Err(Error::NoCanonicalForm(
                    "orbit contains more than one canonical member".into(),
                ));
            }
            found = Some(f);
        }
    }
    found.ok_or_else(|| {
        Error::NoCanonicalForm("orbit has no regular or subregular canonical member".into())
    })
}
