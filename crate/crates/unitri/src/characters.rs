//! Character evaluation by three independent routes: exact Kirillov orbit
//! sums, the closed-form regular character, and the closed-form subregular
//! character with its support classification, plus the induced-character
//! oracle over the semidirect decomposition and class-function utilities.

use rayon::prelude::*;

use crate::classes::{
    basic_class, enumerate_all_classes, sreg_class, BasicClass, GroupClass, SregClass,
};
use crate::cyclo::CycloValue;
use crate::field::{Field, Fq};
use crate::matrix::{
    eval_form, group_inv, group_mul, log_unipotent, theta_f, LinearForm, UnipotentMatrix,
};
use crate::orbits::{
    enumerate_all_orbits, is_regular_canonical, is_subregular_canonical, mu, n0_n1,
    OrbitDescriptor, SubregularShape,
};
use crate::roots::{
    m_subregular_d0, m_subregular_d1, phi_reg, regular_roots, DecoratedSubset, Root,
};
use crate::{Error, Result};

/// Kirillov's exponential sum: `q^{-dim/2} * sum over the orbit of
/// theta(f'(log g))`, evaluated exactly.
pub fn kirillov_value(
    field: &Field,
    orbit: &OrbitDescriptor,
    g: &UnipotentMatrix,
) -> Result<CycloValue> {
    let data = orbit.data()?;
    if g.n() != orbit.n {
        return Err(Error::DimensionMismatch("degree mismatch".into()));
    }
    let a = log_unipotent(field, g)?;
    let p = field.p();
    let q = field.q();
    // per-coordinate multiplication tables against the fixed argument
    let acoords = a.coords();
    let active: Vec<(usize, Vec<u16>)> = acoords
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(t, &c)| {
            let lut: Vec<u16> = (0..q).map(|v| field.mulf(c, Fq(v as u16)).0).collect();
            (t, lut)
        })
        .collect();
    let mut counts = vec![0i64; p as usize];
    if field.r() == 1 {
        // prime field: accumulate integer sums, reduce once per member
        for member in data.iter() {
            let mut acc: u32 = 0;
            for (t, lut) in &active {
                acc += lut[member[*t] as usize] as u32;
            }
            counts[(acc % p as u32) as usize] += 1;
        }
    } else {
        for member in data.iter() {
            let mut acc = Fq(0);
            for (t, lut) in &active {
                acc = field.addf(acc, Fq(lut[member[*t] as usize]));
            }
            counts[field.trace(acc) as usize] += 1;
        }
    }
    let sum = CycloValue::from_exponent_counts(p, q, &counts);
    Ok(sum.scale_q_pow(-(orbit.dim as i32) / 2))
}

/// The decorated regular subsets and their frozen class equations; the
/// support of every regular character.
pub struct RegularSupport {
    pub n: usize,
    pub classes: Vec<(DecoratedSubset, BasicClass, usize)>,
}

/// Enumerate all decorated regular subsets of `Phi(n)` with their class
/// equations and exponents `m_D`.
pub fn regular_support(field: &Field, n: usize) -> Result<RegularSupport> {
    let (n0, _) = n0_n1(n);
    let antidiag: Vec<Root> = (1..=n0).map(|j| Root::new(n - j + 1, j)).collect();
    let mut classes = Vec::new();
    for mask in 0u32..(1 << antidiag.len()) {
        let chosen: Vec<Root> = antidiag
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, &r)| r)
            .collect();
        let m_d = {
            let set = chosen.iter().copied().collect();
            regular_roots(n, &set).intersection(&phi_reg(n)).count()
        };
        let mut values = vec![1u64; chosen.len()];
        loop {
            let subset = DecoratedSubset::new(
                n,
                chosen
                    .iter()
                    .zip(&values)
                    .map(|(&r, &v)| (r, Fq(v as u16)))
                    .collect(),
            )?;
            classes.push((subset.clone(), basic_class(field, &subset)?, m_d));
            let mut k = 0;
            while k < values.len() {
                values[k] += 1;
                if values[k] < field.q() {
                    break;
                }
                values[k] = 1;
                k += 1;
            }
            if k == values.len() || values.is_empty() {
                break;
            }
        }
    }
    Ok(RegularSupport { n, classes })
}

impl RegularSupport {
    /// Index of the unique class of the regular support containing `g`.
    pub fn classify(&self, field: &Field, g: &UnipotentMatrix) -> Result<Option<usize>> {
        for (k, (_, class, _)) in self.classes.iter().enumerate() {
            if class.contains(field, g)? {
                return Ok(Some(k));
            }
        }
        Ok(None)
    }
}

/// Closed-form value of the regular character attached to a canonical
/// regular form: `q^{m_D} * theta_f(e_D(phi))` on `K_D(phi)`, zero off the
/// regular support.
pub fn regular_value(field: &Field, f: &LinearForm, g: &UnipotentMatrix) -> Result<CycloValue> {
    if is_regular_canonical(field, f).is_none() {
        return Err(Error::InvalidArgument(
            "the form is not a canonical regular form".into(),
        ));
    }
    let support = regular_support(field, f.n())?;
    regular_value_with(field, &support, f, g)
}

/// As `regular_value`, with the support enumeration shared across calls.
pub fn regular_value_with(
    field: &Field,
    support: &RegularSupport,
    f: &LinearForm,
    g: &UnipotentMatrix,
) -> Result<CycloValue> {
    match support.classify(field, g)? {
        None => Ok(CycloValue::zero(field.p(), field.q())),
        Some(k) => {
            let (subset, _, m_d) = &support.classes[k];
            let root = theta_f(field, f, &subset.e_of(field))?;
            Ok(root.scale_q_pow(*m_d as i32))
        }
    }
}

/// One conjugacy class of a subregular support, with the character value
/// the main theorem assigns to it.
pub enum SupportClass {
    Basic {
        class: BasicClass,
        m_d: usize,
    },
    Subregular {
        class: SregClass,
        m_d: usize,
    },
}

impl SupportClass {
    pub fn rep_subset(&self) -> &DecoratedSubset {
        match self {
            SupportClass::Basic { class, .. } => &class.subset,
            SupportClass::Subregular { class, .. } => &class.rep,
        }
    }

    pub fn m_d(&self) -> usize {
        match self {
            SupportClass::Basic { m_d, .. } => *m_d,
            SupportClass::Subregular { m_d, .. } => *m_d,
        }
    }

    pub fn size(&self) -> u64 {
        match self {
            SupportClass::Basic { class, .. } => class.size,
            SupportClass::Subregular { class, .. } => class.size,
        }
    }

    pub fn contains(&self, field: &Field, g: &UnipotentMatrix) -> Result<bool> {
        match self {
            SupportClass::Basic { class, .. } => class.contains(field, g),
            SupportClass::Subregular { class, .. } => class.contains(field, g),
        }
    }
}

/// The support `K_f` of a subregular character: the union of the classes
/// `K_D(phi)` over d-subregular decorated subsets bounded by the support
/// of `f`, with the `D_1` side filtered by the compatibility condition
/// `xi_{d,n-d} phi(d+1,d) = xi_{d+1,n-d+1} phi(n-d+1,n-d)`.
pub struct SubregularSupport {
    pub n: usize,
    pub d: usize,
    pub form: LinearForm,
    pub classes: Vec<(SupportClass, CycloValue)>,
}

fn require_closed_form_shape(field: &Field, f: &LinearForm) -> Result<SubregularShape> {
    match is_subregular_canonical(field, f) {
        Some(shape @ SubregularShape::Type1 { .. }) => Ok(shape),
        Some(shape @ SubregularShape::Type3A) => Ok(shape),
        Some(SubregularShape::Type2) | Some(SubregularShape::Type3B) => {
            Err(Error::RouteUnavailable(
                "second-type and vanishing third-type forms are basic-supported".into(),
            ))
        }
        None => Err(Error::InvalidArgument(
            "the form is not a canonical subregular form".into(),
        )),
    }
}

pub fn subregular_support(field: &Field, f: &LinearForm) -> Result<SubregularSupport> {
    let shape = require_closed_form_shape(field, f)?;
    let n = f.n();
    let d = shape.d(n);
    let (n0, _) = n0_n1(n);
    let q = field.q();

    // antidiagonal roots available to D', read off the support of f
    let antidiag_allowed: Vec<Root> = (1..=n0)
        .filter(|&j| j != d && j != d + 1)
        .map(|j| Root::new(n - j + 1, j))
        .filter(|r| !f.xi(r.j, r.i).is_zero())
        .collect();

    // D_0(d) candidates available under the support bound; (n-d+1, d) is
    // always among the permitted extras
    let b_root = Root::new(n - d, d);
    let c_root = Root::new(n - d + 1, d + 1);
    let b_ok = !f.xi(d, n - d).is_zero();
    let c_ok = !f.xi(d + 1, n - d + 1).is_zero();
    let mut d0_variants: Vec<Vec<Root>> = vec![vec![], vec![Root::new(n - d + 1, d)]];
    if b_ok {
        d0_variants.push(vec![b_root]);
    }
    if c_ok {
        d0_variants.push(vec![c_root]);
    }
    if b_ok && c_ok {
        d0_variants.push(vec![b_root, c_root]);
    }

    let mut classes: Vec<(SupportClass, CycloValue)> = Vec::new();
    let push_value = |f: &LinearForm, subset: &DecoratedSubset, m_d: usize| -> Result<CycloValue> {
        let root = theta_f(field, f, &subset.e_of(field))?;
        Ok(root.scale_q_pow(m_d as i32))
    };

    // D_0 side: basic classes over every decoration
    for dprime_mask in 0u32..(1 << antidiag_allowed.len()) {
        let dprime: Vec<Root> = antidiag_allowed
            .iter()
            .enumerate()
            .filter(|(k, _)| dprime_mask >> k & 1 == 1)
            .map(|(_, &r)| r)
            .collect();
        for variant in &d0_variants {
            let all_roots: Vec<Root> = dprime.iter().chain(variant).copied().collect();
            let set: std::collections::BTreeSet<Root> = all_roots.iter().copied().collect();
            let m_d = m_subregular_d0(n, &set);
            let mut values = vec![1u64; all_roots.len()];
            loop {
                let subset = DecoratedSubset::new(
                    n,
                    all_roots
                        .iter()
                        .zip(&values)
                        .map(|(&r, &v)| (r, Fq(v as u16)))
                        .collect(),
                )?;
                let value = push_value(f, &subset, m_d)?;
                classes.push((
                    SupportClass::Basic {
                        class: basic_class(field, &subset)?,
                        m_d,
                    },
                    value,
                ));
                let mut k = 0;
                while k < values.len() {
                    values[k] += 1;
                    if values[k] < q {
                        break;
                    }
                    values[k] = 1;
                    k += 1;
                }
                if k == values.len() || values.is_empty() {
                    break;
                }
            }
        }
    }

    // D_1 side: classes keyed by (D', phi', c_beta, c_alpha, c_0), with
    // c_alpha pinned by the compatibility condition
    let xi_a = f.xi(d, n - d);
    let xi_b = f.xi(d + 1, n - d + 1);
    if !xi_b.is_zero() {
        for dprime_mask in 0u32..(1 << antidiag_allowed.len()) {
            let dprime: Vec<Root> = antidiag_allowed
                .iter()
                .enumerate()
                .filter(|(k, _)| dprime_mask >> k & 1 == 1)
                .map(|(_, &r)| r)
                .collect();
            let mut values = vec![1u64; dprime.len()];
            loop {
                for cb in 1..q {
                    let c_beta = Fq(cb as u16);
                    let c_alpha = field.divf(field.mulf(xi_a, c_beta), xi_b)?;
                    for c0 in 0..q {
                        let c0 = Fq(c0 as u16);
                        let mut entries: Vec<(Root, Fq)> = dprime
                            .iter()
                            .zip(&values)
                            .map(|(&r, &v)| (r, Fq(v as u16)))
                            .collect();
                        entries.push((Root::new(d + 1, d), c_beta));
                        entries.push((Root::new(n - d + 1, n - d), c_alpha));
                        if !c0.is_zero() {
                            // realize gamma = c0 on the four-root variant:
                            // u c_beta + v c_alpha = c0 with units u, v
                            let (u, v) = (1..q)
                                .find_map(|u| {
                                    let u = Fq(u as u16);
                                    let v = field
                                        .divf(field.subf(c0, field.mulf(u, c_beta)), c_alpha)
                                        .ok()?;
                                    (!v.is_zero()).then_some((u, v))
                                })
                                .expect("q > 2 realizes every constant");
                            entries.push((c_root, u));
                            entries.push((b_root, v));
                        }
                        let subset = DecoratedSubset::new(n, entries)?;
                        let class = sreg_class(field, &subset)?;
                        debug_assert_eq!(class.constants.c0, c0);
                        let m_d = m_subregular_d1(n, d, &class.split.d_second);
                        let value = push_value(f, &subset, m_d)?;
                        classes.push((SupportClass::Subregular { class, m_d }, value));
                    }
                }
                let mut k = 0;
                while k < values.len() {
                    values[k] += 1;
                    if values[k] < q {
                        break;
                    }
                    values[k] = 1;
                    k += 1;
                }
                if k == values.len() || values.is_empty() {
                    break;
                }
            }
        }
    }

    Ok(SubregularSupport {
        n,
        d,
        form: f.clone(),
        classes,
    })
}

impl SubregularSupport {
    /// Index of the class containing `g`, if any.
    pub fn classify(&self, field: &Field, g: &UnipotentMatrix) -> Result<Option<usize>> {
        for (k, (class, _)) in self.classes.iter().enumerate() {
            if class.contains(field, g)? {
                return Ok(Some(k));
            }
        }
        Ok(None)
    }

    pub fn value_at(&self, field: &Field, g: &UnipotentMatrix) -> Result<CycloValue> {
        match self.classify(field, g)? {
            None => Ok(CycloValue::zero(field.p(), field.q())),
            Some(k) => Ok(self.classes[k].1.clone()),
        }
    }

    /// `sum of |K| * q^{2 m_D}` over the support, which must equal `|G_n|`
    /// for the closed form to be a unit-norm class function.
    pub fn norm_census(&self, field: &Field) -> u128 {
        self.classes
            .iter()
            .map(|(c, _)| c.size() as u128 * (field.q() as u128).pow(2 * c.m_d() as u32))
            .sum()
    }
}

/// Closed-form value of the subregular character of a canonical form of
/// the first type (or third type with nonvanishing middle entry).
pub fn subregular_value(field: &Field, f: &LinearForm, g: &UnipotentMatrix) -> Result<CycloValue> {
    subregular_support(field, f)?.value_at(field, g)
}

fn restrict_matrix(g: &UnipotentMatrix, idx: &[usize]) -> UnipotentMatrix {
    let mut out = UnipotentMatrix::identity(idx.len());
    for (a, &ia) in idx.iter().enumerate() {
        for (b, &ib) in idx.iter().enumerate() {
            if a > b {
                out.set(a + 1, b + 1, g.get(ia, ib));
            }
        }
    }
    out
}

fn restrict_form(f: &LinearForm, idx: &[usize]) -> LinearForm {
    let mut out = LinearForm::zero(idx.len());
    for (a, &ia) in idx.iter().enumerate() {
        for (b, &ib) in idx.iter().enumerate() {
            if a < b {
                out.set_xi(a + 1, b + 1, f.xi(ia, ib));
            }
        }
    }
    out
}

/// Induced-character evaluation over the semidirect decomposition
/// `G_n = P_n x| G_{n-1}`: an oracle for subregular values that never
/// touches the subregular closed form.
///
/// For `d = 1` the inducing subgroup is `P_n x| (G_{n-2} x F_q)` and the
/// inner factor is a regular character of `G_{n-2}`; for `d > 1` the
/// construction recurses into `G_{n-2}` with `d - 1`.
pub fn mackey_value(field: &Field, f: &LinearForm, g: &UnipotentMatrix) -> Result<CycloValue> {
    let shape = require_closed_form_shape(field, f)?;
    let n = f.n();
    if g.n() != n {
        return Err(Error::DimensionMismatch("degree mismatch".into()));
    }
    let d = shape.d(n);
    let p = field.p();
    let q = field.q();
    let mut total = CycloValue::zero(p, q);
    if d == 1 {
        if n < 4 {
            return Err(Error::RouteUnavailable(
                "induction base requires degree at least 4".into(),
            ));
        }
        // coset representatives: row n-1 entries at columns 2..n-2
        let free_cols: Vec<usize> = (2..=n - 2).collect();
        let idx: Vec<usize> = (2..=n - 2).chain([n]).collect();
        let inner_form = restrict_form(f, &idx);
        if is_regular_canonical(field, &inner_form).is_none() {
            return Err(Error::RouteUnavailable(
                "restriction is not a canonical regular form".into(),
            ));
        }
        let inner_support = regular_support(field, n - 2)?;
        let s_low = f.xi(1, n - 1);
        let s_high = f.xi(n - 1, n);
        let mut t = vec![0u64; free_cols.len()];
        loop {
            let mut h = UnipotentMatrix::identity(n);
            for (&col, &tv) in free_cols.iter().zip(&t) {
                h.set(n - 1, col, Fq(tv as u16));
            }
            let x = group_mul(field, &group_inv(field, &h), &group_mul(field, g, &h)?)?;
            if free_cols.iter().all(|&col| x.get(n - 1, col).is_zero()) {
                let theta_low = crate::cyclo::theta(field, field.mulf(s_low, x.get(n - 1, 1)));
                let theta_high = crate::cyclo::theta(field, field.mulf(s_high, x.get(n, n - 1)));
                let inner =
                    regular_value_with(field, &inner_support, &inner_form, &restrict_matrix(&x, &idx))?;
                total = total.add(&theta_low.mul(&theta_high)?.mul(&inner)?)?;
            }
            let mut k = 0;
            while k < t.len() {
                t[k] += 1;
                if t[k] < q {
                    break;
                }
                t[k] = 0;
                k += 1;
            }
            if k == t.len() {
                break;
            }
        }
    } else {
        // coset representatives: row n entries at columns 2..n-1
        let free_cols: Vec<usize> = (2..=n - 1).collect();
        let idx: Vec<usize> = (2..=n - 1).collect();
        let inner_form = restrict_form(f, &idx);
        let s_n = f.xi(1, n);
        let mut t = vec![0u64; free_cols.len()];
        loop {
            let mut h = UnipotentMatrix::identity(n);
            for (&col, &tv) in free_cols.iter().zip(&t) {
                h.set(n, col, Fq(tv as u16));
            }
            let x = group_mul(field, &group_inv(field, &h), &group_mul(field, g, &h)?)?;
            if free_cols.iter().all(|&col| x.get(n, col).is_zero()) {
                let theta_top = crate::cyclo::theta(field, field.mulf(s_n, x.get(n, 1)));
                let inner = mackey_value(field, &inner_form, &restrict_matrix(&x, &idx))?;
                total = total.add(&theta_top.mul(&inner)?)?;
            }
            let mut k = 0;
            while k < t.len() {
                t[k] += 1;
                if t[k] < q {
                    break;
                }
                t[k] = 0;
                k += 1;
            }
            if k == t.len() {
                break;
            }
        }
    }
    Ok(total)
}

/// A full character table built from the orbit method.
pub struct CharacterTable {
    pub n: usize,
    pub p: u64,
    pub r: u32,
    pub classes: Vec<GroupClass>,
    pub rows: Vec<(OrbitDescriptor, Vec<CycloValue>)>,
}

/// Enumerate all orbits and all conjugacy classes and evaluate the
/// Kirillov sum of every orbit on every class representative.
pub fn character_table(field: &Field, n: usize, budget: u64) -> Result<CharacterTable> {
    let classes = enumerate_all_classes(field, n, budget)?;
    let orbits = enumerate_all_orbits(field, n, budget, true)?;
    if classes.len() != orbits.len() {
        return Err(Error::InvalidArgument(format!(
            "orbit count {} disagrees with class count {}",
            orbits.len(),
            classes.len()
        )));
    }
    let rows: Result<Vec<_>> = orbits
        .into_par_iter()
        .map(|orbit| {
            let values: Result<Vec<CycloValue>> = classes
                .iter()
                .map(|c| kirillov_value(field, &orbit, &c.rep))
                .collect();
            Ok((orbit, values?))
        })
        .collect();
    let mut rows = rows?;
    // drop members after evaluation; the table itself is value data
    for (orbit, _) in rows.iter_mut() {
        orbit.data = None;
    }
    Ok(CharacterTable {
        n,
        p: field.p(),
        r: field.r(),
        classes,
        rows,
    })
}

/// `(1/|G|) * sum over classes of |K| u(K) conj(v(K))`, computed exactly;
/// `|G|` is a power of q, so the division is a q-exponent shift.
pub fn inner_product(
    field: &Field,
    classes: &[GroupClass],
    u: &[CycloValue],
    v: &[CycloValue],
) -> Result<CycloValue> {
    if u.len() != classes.len() || v.len() != classes.len() {
        return Err(Error::DimensionMismatch(
            "class function length mismatch".into(),
        ));
    }
    let p = field.p();
    let q = field.q();
    let mut acc = CycloValue::zero(p, q);
    for ((class, a), b) in classes.iter().zip(u).zip(v) {
        let term = a.mul(&b.conj())?;
        let weighted = term
            .mul(&CycloValue::from_integer(p, q, class.size as i64))?;
        acc = acc.add(&weighted)?;
    }
    let n = classes[0].n;
    let order_exp = (n * (n - 1) / 2) as i32;
    Ok(acc.scale_q_pow(-order_exp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::random_unipotent;
    use crate::orbits::{orbit_of, regular_canonical_form, subregular_canonical_forms};
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn f5() -> Field {
        Field::new(5, 1, 5).unwrap()
    }

    fn decorated(n: usize, entries: &[(usize, usize, u16)]) -> DecoratedSubset {
        DecoratedSubset::new(
            n,
            entries
                .iter()
                .map(|&(i, j, v)| (Root::new(i, j), Fq(v)))
                .collect(),
        )
        .unwrap()
    }

    fn type1_form(field: &Field, bp: u16, bpp: u16, b: u16) -> LinearForm {
        let mut f = LinearForm::zero(5);
        f.set_xi(1, 4, Fq(bp));
        f.set_xi(2, 5, Fq(bpp));
        f.set_xi(4, 5, Fq(b));
        let _ = field;
        f
    }

    #[test]
    fn kirillov_identity_degree() {
        let f = f5();
        let form = regular_canonical_form(&f, 4, &[Fq(1), Fq(1)]).unwrap();
        let orbit = orbit_of(&f, &form, 1 << 20).unwrap();
        let id = UnipotentMatrix::identity(4);
        assert_eq!(
            kirillov_value(&f, &orbit, &id).unwrap(),
            CycloValue::q_power(5, 5, 2)
        );
        // the zero orbit carries the trivial character
        let zero = orbit_of(&f, &LinearForm::zero(4), 1 << 20).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        for _ in 0..10 {
            let g = random_unipotent(&f, 4, &mut rng);
            assert_eq!(
                kirillov_value(&f, &zero, &g).unwrap(),
                CycloValue::one(5, 5)
            );
        }
    }

    #[test]
    fn regular_value_against_kirillov_n4() {
        // exact agreement of the closed form with the orbit sum on every
        // conjugacy class, for a couple of regular forms
        let f = f5();
        let classes = enumerate_all_classes(&f, 4, 1 << 21).unwrap();
        let support = regular_support(&f, 4).unwrap();
        for betas in [[Fq(1), Fq(1)], [Fq(2), Fq(0)], [Fq(3), Fq(4)]] {
            let form = regular_canonical_form(&f, 4, &betas).unwrap();
            let orbit = orbit_of(&f, &form, 1 << 20).unwrap();
            for class in &classes {
                let brute = kirillov_value(&f, &orbit, &class.rep).unwrap();
                let closed = regular_value_with(&f, &support, &form, &class.rep).unwrap();
                assert_eq!(brute, closed, "class at {}", class.min_index);
            }
        }
    }

    #[test]
    fn regular_value_identity_and_central_values() {
        let f = f5();
        let form = regular_canonical_form(&f, 4, &[Fq(1), Fq(1)]).unwrap();
        let id = UnipotentMatrix::identity(4);
        assert_eq!(
            regular_value(&f, &form, &id).unwrap(),
            CycloValue::q_power(5, 5, 2)
        );
        // g = x_D(phi) for D = {(4,1)}: value q^2 zeta^c
        for c in 1..5u16 {
            let d = decorated(4, &[(4, 1, c)]);
            let expect = CycloValue::root_of_unity(5, 5, c as i64).scale_q_pow(2);
            assert_eq!(regular_value(&f, &form, &d.x_of(&f)).unwrap(), expect);
        }
    }

    #[test]
    fn subregular_support_structure_n5() {
        let f = f5();
        let form = type1_form(&f, 1, 1, 0);
        let support = subregular_support(&f, &form).unwrap();
        // 29 basic classes (1 + 4 + 4 + 4 + 16) and 20 subregular classes
        let basics = support
            .classes
            .iter()
            .filter(|(c, _)| matches!(c, SupportClass::Basic { .. }))
            .count();
        let sregs = support.classes.len() - basics;
        assert_eq!(basics, 29);
        assert_eq!(sregs, 20);
        // identity element lies in the D = empty class
        let id = UnipotentMatrix::identity(5);
        let k = support.classify(&f, &id).unwrap().unwrap();
        assert!(support.classes[k].0.rep_subset().is_empty());
        assert_eq!(
            support.value_at(&f, &id).unwrap(),
            CycloValue::q_power(5, 5, 3)
        );
        // the compatibility condition ties phi(2,1) = phi(5,4) here
        for (class, _) in &support.classes {
            if let SupportClass::Subregular { class, .. } = class {
                assert_eq!(class.constants.c_beta, class.constants.c_alpha);
            }
        }
        // norm: sum |K| q^{2 m_D} = |G_5|
        assert_eq!(support.norm_census(&f), 5u128.pow(10));
    }

    #[test]
    fn subregular_value_on_d1_classes() {
        let f = f5();
        for b in 0..5u16 {
            let form = type1_form(&f, 1, 1, b);
            let support = subregular_support(&f, &form).unwrap();
            for phi in 1..5u16 {
                let d = decorated(5, &[(2, 1, phi), (5, 4, phi)]);
                let got = support.value_at(&f, &d.x_of(&f)).unwrap();
                let expect = CycloValue::root_of_unity(5, 5, (b * phi) as i64).scale_q_pow(2);
                assert_eq!(got, expect, "b = {b}, phi = {phi}");
            }
            // mismatched decorations are off the support
            let d = decorated(5, &[(2, 1, 1), (5, 4, 2)]);
            assert!(support.value_at(&f, &d.x_of(&f)).unwrap().is_zero());
        }
    }

    #[test]
    fn subregular_against_kirillov_sampled_n5() {
        let f = f5();
        let form = type1_form(&f, 1, 1, 2);
        let orbit = orbit_of(&f, &form, 1 << 21).unwrap();
        assert_eq!(orbit.size, 5u64.pow(6));
        let support = subregular_support(&f, &form).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        // identity, class representatives, and random elements
        let mut samples = vec![UnipotentMatrix::identity(5)];
        for (class, _) in support.classes.iter().step_by(7) {
            samples.push(class.rep_subset().x_of(&f));
        }
        for _ in 0..25 {
            samples.push(random_unipotent(&f, 5, &mut rng));
        }
        for g in samples {
            let brute = kirillov_value(&f, &orbit, &g).unwrap();
            let closed = support.value_at(&f, &g).unwrap();
            assert_eq!(brute, closed);
        }
    }

    #[test]
    fn mackey_agrees_with_closed_form_n5() {
        let f = f5();
        let form = type1_form(&f, 1, 2, 3);
        let support = subregular_support(&f, &form).unwrap();
        // degree at the identity
        let id = UnipotentMatrix::identity(5);
        assert_eq!(
            mackey_value(&f, &form, &id).unwrap(),
            CycloValue::q_power(5, 5, 3)
        );
        // representatives of support classes and random elements
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        let mut samples: Vec<UnipotentMatrix> = support
            .classes
            .iter()
            .step_by(5)
            .map(|(c, _)| c.rep_subset().x_of(&f))
            .collect();
        for _ in 0..40 {
            samples.push(random_unipotent(&f, 5, &mut rng));
        }
        for g in samples {
            assert_eq!(
                mackey_value(&f, &form, &g).unwrap(),
                support.value_at(&f, &g).unwrap()
            );
        }
    }

    #[test]
    fn mackey_supports_third_type_forms() {
        // n = 6 third-type form with nonzero middle entry: the recursion
        // goes through d = n_1 = 2 and bottoms out in G_2 characters
        let f = f5();
        let mut form = LinearForm::zero(6);
        form.set_xi(1, 6, Fq(1)); // beta_1
        form.set_xi(2, 4, Fq(2)); // beta at (n_1, n_0 + 1)
        form.set_xi(3, 5, Fq(1)); // beta' at (n_1 + 1, n_0 + 2)
        form.set_xi(4, 5, Fq(3)); // beta'' at (n_1 + 2, n_0 + 2)
        assert_eq!(
            is_subregular_canonical(&f, &form),
            Some(SubregularShape::Type3A)
        );
        let support = subregular_support(&f, &form).unwrap();
        assert_eq!(support.norm_census(&f), 5u128.pow(15));
        let id = UnipotentMatrix::identity(6);
        assert_eq!(
            mackey_value(&f, &form, &id).unwrap(),
            CycloValue::q_power(5, 5, mu(6) as i32 - 1)
        );
        let mut rng = ChaCha12Rng::seed_from_u64(13);
        let mut samples: Vec<UnipotentMatrix> = support
            .classes
            .iter()
            .step_by(11)
            .map(|(c, _)| c.rep_subset().x_of(&f))
            .collect();
        for _ in 0..10 {
            samples.push(random_unipotent(&f, 6, &mut rng));
        }
        for g in samples {
            assert_eq!(
                mackey_value(&f, &form, &g).unwrap(),
                support.value_at(&f, &g).unwrap()
            );
        }
    }

    #[test]
    fn norm_census_across_degrees() {
        // the exact norm identity over the enumerated support, for every
        // closed-form shape at several degrees and fields
        for (pval, n) in [(5u64, 5usize), (5, 6), (7, 6), (7, 7), (11, 8)] {
            let field = Field::new(pval, 1, n).unwrap();
            let expected = (field.q() as u128).pow((n * (n - 1) / 2) as u32);
            for (form, _) in subregular_canonical_forms(&field, n)
                .into_iter()
                .step_by(17)
            {
                match subregular_support(&field, &form) {
                    Ok(support) => {
                        assert_eq!(
                            support.norm_census(&field),
                            expected,
                            "p = {pval}, n = {n}, form = {:?}",
                            form.support()
                        );
                    }
                    Err(Error::RouteUnavailable(_)) => continue,
                    Err(e) => panic!("unexpected error: {e}"),
                }
            }
        }
    }

    #[test]
    fn small_table_is_orthonormal() {
        let f = f5();
        let table = character_table(&f, 3, 1 << 20).unwrap();
        assert_eq!(table.rows.len(), 29);
        let degrees: Vec<&CycloValue> = table
            .rows
            .iter()
            .map(|(_, values)| &values[0])
            .collect();
        // sum of squared degrees is |G|; class 0 is the identity class
        assert_eq!(table.classes[0].size, 1);
        let mut sum = CycloValue::zero(5, 5);
        for d in &degrees {
            sum = sum.add(&d.mul(d).unwrap()).unwrap();
        }
        assert_eq!(sum, CycloValue::q_power(5, 5, 3));
        for i in 0..29 {
            for j in i..29 {
                let ip = inner_product(&f, &table.classes, &table.rows[i].1, &table.rows[j].1)
                    .unwrap();
                let expect = if i == j {
                    CycloValue::one(5, 5)
                } else {
                    CycloValue::zero(5, 5)
                };
                assert_eq!(ip, expect, "rows {i}, {j}");
            }
        }
    }
}
