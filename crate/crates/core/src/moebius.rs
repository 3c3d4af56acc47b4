//! Moebius transformations z -> (az+b)/(cz+d) over any scalar field, with
//! the conjugation algorithms that bring finite subgroups of PGL_2 to their
//! normal forms: diagonal for odd prime order, delta/z for involutions, and
//! V_delta = {z, -z, delta/z, -delta/z} for Klein four-groups.

use crate::error::{Error, Result};
use crate::field::{primitive_root_of_unity, FieldElement, Scalar};
use crate::ratfunc::KElem;
use std::fmt;

/// A point of the projective line over the scalar domain C.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum P1<C: Scalar> {
    Finite(C),
    Infinity,
}

impl<C: Scalar + fmt::Display> fmt::Display for P1<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            P1::Finite(c) => write!(f, "{c}"),
            P1::Infinity => write!(f, "oo"),
        }
    }
}

/// An element of PGL_2: entries [a, b, c, d] scaled so the first nonzero
/// entry is 1, making structural equality projective equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MoebiusElt<C: Scalar> {
    entries: [C; 4],
}

impl<C: Scalar> MoebiusElt<C> {
    /// z -> (az + b)/(cz + d); fails when ad - bc = 0.
    pub fn new(a: C, b: C, c: C, d: C) -> Result<Self> {
        let det = a.mul(&d).sub(&b.mul(&c));
        if det.is_zero() {
            return Err(Error::InvalidInput("matrix is singular".into()));
        }
        Ok(Self::normalize([a, b, c, d]))
    }

    fn normalize(entries: [C; 4]) -> Self {
        let scale = entries
            .iter()
            .find(|e| !e.is_zero())
            .expect("nonsingular matrix has a nonzero entry")
            .inv()
            .expect("nonzero scalar is invertible");
        let [a, b, c, d] = entries;
        MoebiusElt {
            entries: [a.mul(&scale), b.mul(&scale), c.mul(&scale), d.mul(&scale)],
        }
    }

    pub fn identity_like(witness: &C) -> Self {
        let one = witness.one_like();
        let zero = witness.zero_like();
        MoebiusElt { entries: [one.clone(), zero.clone(), zero, one] }
    }

    /// z -> lambda * z.
    pub fn scaling(lambda: C) -> Result<Self> {
        let one = lambda.one_like();
        let zero = lambda.zero_like();
        Self::new(lambda, zero.clone(), zero, one)
    }

    /// z -> delta / z.
    pub fn antidiagonal(delta: C) -> Result<Self> {
        let one = delta.one_like();
        let zero = delta.zero_like();
        Self::new(zero.clone(), delta, one, zero)
    }

    /// z -> -z.
    pub fn negation(witness: &C) -> Self {
        let one = witness.one_like();
        let zero = witness.zero_like();
        MoebiusElt { entries: [one.clone(), zero.clone(), zero, one.neg()] }
    }

    pub fn entries(&self) -> &[C; 4] {
        &self.entries
    }

    pub fn det(&self) -> C {
        let [a, b, c, d] = &self.entries;
        a.mul(d).sub(&b.mul(c))
    }

    pub fn trace(&self) -> C {
        self.entries[0].add(&self.entries[3])
    }

    pub fn is_identity(&self) -> bool {
        let [a, b, c, d] = &self.entries;
        b.is_zero() && c.is_zero() && a == d && !a.is_zero()
    }

    pub fn is_diagonal(&self) -> bool {
        self.entries[1].is_zero() && self.entries[2].is_zero()
    }

    pub fn is_antidiagonal(&self) -> bool {
        self.entries[0].is_zero() && self.entries[3].is_zero()
    }

    /// For a diagonal map z -> lambda z, the ratio a/d.
    pub fn diagonal_ratio(&self) -> Option<C> {
        if !self.is_diagonal() {
            return None;
        }
        Some(self.entries[0].mul(&self.entries[3].inv()?))
    }

    /// For an antidiagonal map z -> delta/z, the ratio b/c.
    pub fn antidiagonal_ratio(&self) -> Option<C> {
        if !self.is_antidiagonal() {
            return None;
        }
        Some(self.entries[1].mul(&self.entries[2].inv()?))
    }

    /// self after rhs (matrix product).
    pub fn compose(&self, rhs: &Self) -> Self {
        let [a, b, c, d] = &self.entries;
        let [e, f, g, h] = &rhs.entries;
        Self::normalize([
            a.mul(e).add(&b.mul(g)),
            a.mul(f).add(&b.mul(h)),
            c.mul(e).add(&d.mul(g)),
            c.mul(f).add(&d.mul(h)),
        ])
    }

    pub fn inverse(&self) -> Self {
        let [a, b, c, d] = &self.entries;
        Self::normalize([d.clone(), b.neg(), c.neg(), a.clone()])
    }

    /// g self g^{-1}.
    pub fn conjugate_by(&self, g: &Self) -> Self {
        g.compose(self).compose(&g.inverse())
    }

    pub fn apply(&self, p: &P1<C>) -> P1<C> {
        let [a, b, c, d] = &self.entries;
        match p {
            P1::Finite(z) => {
                let den = c.mul(z).add(d);
                match den.inv() {
                    Some(di) => P1::Finite(a.mul(z).add(b).mul(&di)),
                    None => P1::Infinity,
                }
            }
            P1::Infinity => match c.inv() {
                Some(ci) => P1::Finite(a.mul(&ci)),
                None => P1::Infinity,
            },
        }
    }

    /// Raw k-th matrix power of the normalized representative (not
    /// re-normalized), used to read off the scalar in A^k = delta * I.
    pub fn power_raw(&self, k: u32) -> [C; 4] {
        let one = self.entries[0].one_like();
        let zero = self.entries[0].zero_like();
        let mut acc = [one.clone(), zero.clone(), zero.clone(), one];
        for _ in 0..k {
            let [a, b, c, d] = acc;
            let [e, f, g, h] = &self.entries;
            acc = [
                a.mul(e).add(&b.mul(g)),
                a.mul(f).add(&b.mul(h)),
                c.mul(e).add(&d.mul(g)),
                c.mul(f).add(&d.mul(h)),
            ];
        }
        acc
    }

    /// Smallest k in 1..=bound with self^k = id, projectively.
    pub fn projective_order(&self, bound: u32) -> Option<u32> {
        let mut acc = self.clone();
        for k in 1..=bound {
            if acc.is_identity() {
                return Some(k);
            }
            acc = acc.compose(self);
        }
        None
    }

    pub fn is_involution(&self) -> bool {
        !self.is_identity() && self.compose(self).is_identity()
    }

    pub fn map_entries<D: Scalar>(&self, f: &impl Fn(&C) -> D) -> Result<MoebiusElt<D>> {
        let [a, b, c, d] = &self.entries;
        MoebiusElt::new(f(a), f(b), f(c), f(d))
    }
}

impl MoebiusElt<KElem> {
    /// Embed a constant-coefficient Moebius map into PGL_2(k(t)).
    pub fn from_base(m: &MoebiusElt<FieldElement>) -> Self {
        m.map_entries(&|e| KElem::constant(e.clone()))
            .expect("embedding preserves the determinant")
    }

    /// Back to PGL_2(k) when all entries are constants.
    pub fn to_base(&self) -> Option<MoebiusElt<FieldElement>> {
        let [a, b, c, d] = &self.entries;
        MoebiusElt::new(
            a.as_constant()?,
            b.as_constant()?,
            c.as_constant()?,
            d.as_constant()?,
        )
        .ok()
    }
}

/// The unique Moebius map sending the three distinct points `from` to the
/// three distinct points `to`, by interpolation through (0, 1, oo).
pub fn moebius_through<C: Scalar>(
    from: &[P1<C>; 3],
    to: &[P1<C>; 3],
    witness: &C,
) -> Result<MoebiusElt<C>> {
    let m_from = to_standard_triple(from, witness)?;
    let m_to = to_standard_triple(to, witness)?;
    Ok(m_to.inverse().compose(&m_from))
}

/// The Moebius map sending (p0, p1, p2) to (0, 1, oo).
fn to_standard_triple<C: Scalar>(p: &[P1<C>; 3], witness: &C) -> Result<MoebiusElt<C>> {
    let one = witness.one_like();
    let zero = witness.zero_like();
    let dup = || Error::InvalidInput("interpolation points must be distinct".into());
    match (&p[0], &p[1], &p[2]) {
        (P1::Finite(p0), P1::Finite(p1), P1::Finite(p2)) => {
            let u = p1.sub(p2);
            let v = p1.sub(p0);
            if u.is_zero() || v.is_zero() || p0 == p2 {
                return Err(dup());
            }
            MoebiusElt::new(u.clone(), p0.mul(&u).neg(), v.clone(), p2.mul(&v).neg())
        }
        (P1::Infinity, P1::Finite(p1), P1::Finite(p2)) => {
            let u = p1.sub(p2);
            if u.is_zero() {
                return Err(dup());
            }
            MoebiusElt::new(zero.clone(), u, one, p2.neg())
        }
        (P1::Finite(p0), P1::Infinity, P1::Finite(p2)) => {
            if p0 == p2 {
                return Err(dup());
            }
            MoebiusElt::new(one.clone(), p0.neg(), one, p2.neg())
        }
        (P1::Finite(p0), P1::Finite(p1), P1::Infinity) => {
            let v = p1.sub(p0);
            if v.is_zero() {
                return Err(dup());
            }
            MoebiusElt::new(one, p0.neg(), zero, v)
        }
        _ => Err(dup()),
    }
}

// ---------------------------------------------------------------------------
// normal forms of finite-order elements and Klein subgroups of PGL_2(k(t))
// ---------------------------------------------------------------------------

/// Conjugates an element of odd prime projective order p to z -> lambda z:
/// returns (g, lambda) with g a g^{-1} = scaling(lambda) and lambda a
/// primitive p-th root of unity of the base field.
pub fn conjugate_to_cp(a: &MoebiusElt<KElem>, p: u32) -> Result<(MoebiusElt<KElem>, FieldElement)> {
    let kind = a.entries()[0]
        .witness()
        .kind();
    if a.projective_order(p) != Some(p) {
        return Err(Error::WrongProjectiveOrder(p as u64));
    }
    // already diagonal: read off the ratio
    if let Some(lambda) = a.diagonal_ratio() {
        let lam = lambda
            .as_constant()
            .ok_or_else(|| Error::BadGroupShape("diagonal ratio of a finite-order map must be constant".into()))?;
        return Ok((MoebiusElt::identity_like(&a.entries()[0]), lam));
    }
    // The eigenvalue ratio rho of an order-p element is a primitive p-th
    // root of unity, pinned down by (1 + rho)^2 det = rho tr^2. Both
    // eigenvalues tr rho/(1+rho) and tr/(1+rho) then lie in k(t), so no
    // root extraction from the matrix scale is ever needed.
    let [ba, bb, bc, bd] = a.entries().clone();
    let tr = ba.add(&bd);
    let det = ba.mul(&bd).sub(&bb.mul(&bc));
    let zeta = primitive_root_of_unity(&kind, p as u64)
        .map_err(|_| Error::FieldExtensionRequired(format!("needs a primitive {p}-th root of unity")))?;
    let one = ba.one_like();
    let mut ratio = None;
    let mut zp = zeta.clone();
    for _ in 1..p {
        let cand = KElem::constant(zp.clone());
        let lhs = cand.add(&one).mul(&cand.add(&one)).mul(&det);
        let rhs = cand.mul(&tr).mul(&tr);
        if lhs == rhs {
            ratio = Some(zp.clone());
            break;
        }
        zp = zp.checked_mul(&zeta)?;
    }
    let rho = ratio.ok_or_else(|| {
        Error::FieldExtensionRequired(
            "eigenvalues are not p-th roots of unity over this field".into(),
        )
    })?;
    let rho_k = KElem::constant(rho.clone());
    let denom_inv = rho_k.add(&one).inv().expect("p is odd, so the ratio is not -1");
    let mu1 = tr.mul(&rho_k).mul(&denom_inv);
    let mu2 = tr.mul(&denom_inv);
    let eigenvector = |mu: &KElem| -> (KElem, KElem) {
        // (A - mu) v = 0: v = (b, mu - a) or (mu - d, c)
        let v1 = (bb.clone(), mu.sub(&ba));
        if !v1.0.is_zero() || !v1.1.is_zero() {
            v1
        } else {
            (mu.sub(&bd), bc.clone())
        }
    };
    let v1 = eigenvector(&mu1);
    let v2 = eigenvector(&mu2);
    // g = P^{-1} where P = [v1 | v2]
    let g = MoebiusElt::new(v1.0.clone(), v2.0.clone(), v1.1.clone(), v2.1.clone())?.inverse();
    debug_assert_eq!(
        a.conjugate_by(&g),
        MoebiusElt::scaling(KElem::constant(rho.clone()))?
    );
    Ok((g, rho))
}

/// Conjugates an involution to z -> delta/z: returns (g, delta) where delta
/// is the antidiagonal ratio of g a g^{-1} (so an input already of that form
/// gets g = id and its own ratio back).
pub fn conjugate_to_inversion(a: &MoebiusElt<KElem>) -> Result<(MoebiusElt<KElem>, KElem)> {
    if !a.is_involution() {
        return Err(Error::NotInvolution);
    }
    let w = &a.entries()[0];
    // already z -> delta/z: keep it, reporting its own ratio
    if let Some(delta) = a.antidiagonal_ratio() {
        return Ok((MoebiusElt::identity_like(w), delta));
    }
    let one = w.one_like();
    let zero = w.zero_like();
    // pick v with (v, Av) a basis
    let candidates = [
        (one.clone(), zero.clone()),
        (zero.clone(), one.clone()),
        (one.clone(), one.clone()),
    ];
    let [ea, eb, ec, ed] = a.entries();
    for (x, y) in candidates {
        let ax = ea.mul(&x).add(&eb.mul(&y));
        let ay = ec.mul(&x).add(&ed.mul(&y));
        let det = x.mul(&ay).sub(&y.mul(&ax));
        if det.is_zero() {
            continue;
        }
        // P = [v | Av]; g = P^{-1}
        let g = MoebiusElt::new(x, ax, y, ay)?.inverse();
        let conj = a.conjugate_by(&g);
        let delta = conj
            .antidiagonal_ratio()
            .expect("conjugate in the (v, Av) basis is antidiagonal");
        return Ok((g, delta));
    }
    unreachable!("an involution cannot fix three independent directions")
}

/// Conjugates a Klein four-subgroup of PGL_2(k(t)) to V_delta =
/// {id, -z, delta/z, -delta/z}: returns (g, delta). Inputs already in
/// V_delta shape come back with g = id and delta read from the first
/// antidiagonal element in input order.
pub fn klein_to_vdelta(group: &[MoebiusElt<KElem>]) -> Result<(MoebiusElt<KElem>, KElem)> {
    validate_klein(group)?;
    let w = group[0].entries()[0].clone();
    let identity = MoebiusElt::identity_like(&w);
    // fast path: {id, -z, delta/z, -delta/z} stays put
    if let Some(delta) = vdelta_shape(group) {
        return Ok((identity, delta));
    }
    // involutions in input order; delta-classes delta_i = -det
    let involutions: Vec<&MoebiusElt<KElem>> =
        group.iter().filter(|m| !m.is_identity()).collect();
    let chosen = involutions
        .iter()
        .find(|x| x.det().neg().is_square())
        .ok_or_else(|| {
            Error::FieldExtensionRequired(
                "no involution in the group has a square discriminant class".into(),
            )
        })?;
    // step 1: x -> delta_x / z. The ratio delta_x agrees with -det only up
    // to the square of a representative rescaling, so take the root of the
    // ratio itself (same square class, hence guaranteed to exist).
    let (g1, delta_x) = conjugate_to_inversion(chosen)?;
    let s = delta_x.sqrt().ok_or_else(|| {
        Error::FieldExtensionRequired(
            "no involution in the group has a square discriminant class".into(),
        )
    })?;
    // step 2: scale to 1/z via z -> z/s
    let g2 = MoebiusElt::new(w.one_like(), w.zero_like(), w.zero_like(), s)?;
    // step 3: 1/z -> -z via z -> (z-1)/(z+1)
    let g3 = MoebiusElt::new(
        w.one_like(),
        w.one_like().neg(),
        w.one_like(),
        w.one_like(),
    )?;
    let g = g3.compose(&g2).compose(&g1);
    let conjugated: Vec<MoebiusElt<KElem>> = group.iter().map(|m| m.conjugate_by(&g)).collect();
    let delta = conjugated
        .iter()
        .find_map(|m| m.antidiagonal_ratio())
        .ok_or_else(|| Error::BadGroupShape("conjugated group has no antidiagonal element".into()))?;
    match vdelta_shape(&conjugated) {
        Some(d) if d == delta => Ok((g, delta)),
        _ => Err(Error::BadGroupShape("conjugation did not produce V_delta".into())),
    }
}

/// If the set is exactly {id, -z, d/z, -d/z}, returns d (from the first
/// antidiagonal element in input order).
fn vdelta_shape(group: &[MoebiusElt<KElem>]) -> Option<KElem> {
    let w = group[0].entries()[0].clone();
    let mut delta: Option<KElem> = None;
    let mut seen_id = false;
    let mut seen_neg = false;
    let mut anti: Vec<KElem> = Vec::new();
    for m in group {
        if m.is_identity() {
            seen_id = true;
        } else if m.is_diagonal() {
            if m.diagonal_ratio()? != w.one_like().neg() {
                return None;
            }
            seen_neg = true;
        } else if m.is_antidiagonal() {
            let r = m.antidiagonal_ratio()?;
            if delta.is_none() {
                delta = Some(r.clone());
            }
            anti.push(r);
        } else {
            return None;
        }
    }
    let d = delta?;
    if !seen_id || !seen_neg || anti.len() != 2 {
        return None;
    }
    if anti[0] != anti[1].neg() {
        return None;
    }
    Some(d)
}

fn validate_klein(group: &[MoebiusElt<KElem>]) -> Result<()> {
    if group.len() != 4 {
        return Err(Error::BadGroupShape("a Klein four-group has 4 elements".into()));
    }
    for (i, m) in group.iter().enumerate() {
        for n in group.iter().skip(i + 1) {
            if m == n {
                return Err(Error::BadGroupShape("elements are not distinct".into()));
            }
        }
    }
    if !group.iter().any(|m| m.is_identity()) {
        return Err(Error::BadGroupShape("the identity is missing".into()));
    }
    for m in group {
        if m.is_identity() {
            continue;
        }
        if !m.is_involution() {
            return Err(Error::BadGroupShape("a non-identity element is not an involution".into()));
        }
    }
    for m in group {
        for n in group {
            let prod = m.compose(n);
            if !group.contains(&prod) {
                return Err(Error::BadGroupShape("the set is not closed under composition".into()));
            }
            if m.compose(n) != n.compose(m) {
                return Err(Error::BadGroupShape("the group is not abelian".into()));
            }
        }
    }
    Ok(())
}

// base-field versions, used to normalize the action on the base curve

/// `conjugate_to_cp` for a constant-coefficient map, staying in PGL_2(k).
pub fn conjugate_to_cp_base(
    a: &MoebiusElt<FieldElement>,
    p: u32,
) -> Result<(MoebiusElt<FieldElement>, FieldElement)> {
    let (g, lambda) = conjugate_to_cp(&MoebiusElt::from_base(a), p)?;
    let gb = g
        .to_base()
        .expect("conjugator of a constant matrix is constant");
    Ok((gb, lambda))
}

/// `klein_to_vdelta` for constant-coefficient maps, staying in PGL_2(k).
pub fn klein_to_vdelta_base(
    group: &[MoebiusElt<FieldElement>],
) -> Result<(MoebiusElt<FieldElement>, FieldElement)> {
    let lifted: Vec<MoebiusElt<KElem>> = group.iter().map(MoebiusElt::from_base).collect();
    let (g, delta) = klein_to_vdelta(&lifted)?;
    let gb = g
        .to_base()
        .expect("conjugator of constant matrices is constant");
    let db = delta
        .as_constant()
        .expect("delta of a constant group is constant");
    Ok((gb, db))
}

/// Builds V_delta as an ordered list (id, -z, delta/z, -delta/z).
pub fn vdelta_group<C: Scalar>(delta: &C) -> Result<Vec<MoebiusElt<C>>> {
    Ok(vec![
        MoebiusElt::identity_like(delta),
        MoebiusElt::negation(delta),
        MoebiusElt::antidiagonal(delta.clone())?,
        MoebiusElt::antidiagonal(delta.neg())?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldKind;

    fn qel(n: i64) -> FieldElement {
        FieldElement::from_integer(&FieldKind::Rationals, n)
    }

    fn kconst(n: i64) -> KElem {
        KElem::constant(qel(n))
    }

    fn kt() -> KElem {
        KElem::var_like(&qel(0))
    }

    fn kmap(a: i64, b: i64, c: i64, d: i64) -> MoebiusElt<KElem> {
        MoebiusElt::new(kconst(a), kconst(b), kconst(c), kconst(d)).unwrap()
    }

    #[test]
    fn apply_and_infinity() {
        // z -> (z+1)/(z-1)
        let m = kmap(1, 1, 1, -1);
        assert_eq!(m.apply(&P1::Finite(kconst(0))), P1::Finite(kconst(-1)));
        assert_eq!(m.apply(&P1::Finite(kconst(1))), P1::Infinity);
        assert_eq!(m.apply(&P1::Infinity), P1::Finite(kconst(1)));
    }

    #[test]
    fn compose_inverse_roundtrip() {
        let m = kmap(2, 1, 1, 1);
        let n = kmap(0, 1, 1, 0);
        let id = MoebiusElt::identity_like(&kconst(0));
        assert_eq!(m.compose(&m.inverse()), id);
        assert_eq!(m.compose(&n).compose(&n.inverse()), m);
        assert!(m.compose(&n) != n.compose(&m));
    }

    #[test]
    fn projective_orders() {
        assert_eq!(MoebiusElt::negation(&kconst(0)).projective_order(5), Some(2));
        assert_eq!(kmap(1, 1, 0, 1).projective_order(5), None);
        let k3 = FieldKind::cyclotomic(3).unwrap();
        let z = FieldElement::zeta(&k3).unwrap();
        let m = MoebiusElt::scaling(KElem::constant(z)).unwrap();
        assert_eq!(m.projective_order(7), Some(3));
    }

    #[test]
    fn interpolation() {
        // (1, 0, oo) -> (0, 1, oo) is z -> 1 - z
        let w = kconst(0);
        let m = moebius_through(
            &[P1::Finite(kconst(1)), P1::Finite(kconst(0)), P1::Infinity],
            &[P1::Finite(kconst(0)), P1::Finite(kconst(1)), P1::Infinity],
            &w,
        )
        .unwrap();
        assert_eq!(m.apply(&P1::Finite(kconst(1))), P1::Finite(kconst(0)));
        assert_eq!(m.apply(&P1::Finite(kconst(0))), P1::Finite(kconst(1)));
        assert_eq!(m.apply(&P1::Infinity), P1::Infinity);
        // a triple involving oo in the target
        let m2 = moebius_through(
            &[P1::Finite(kconst(2)), P1::Finite(kconst(3)), P1::Finite(kconst(5))],
            &[P1::Finite(kconst(0)), P1::Infinity, P1::Finite(kconst(1))],
            &w,
        )
        .unwrap();
        assert_eq!(m2.apply(&P1::Finite(kconst(2))), P1::Finite(kconst(0)));
        assert_eq!(m2.apply(&P1::Finite(kconst(3))), P1::Infinity);
        assert_eq!(m2.apply(&P1::Finite(kconst(5))), P1::Finite(kconst(1)));
    }

    #[test]
    fn cp_normalization_fast_path() {
        let k3 = FieldKind::cyclotomic(3).unwrap();
        let z = FieldElement::zeta(&k3).unwrap();
        let m = MoebiusElt::scaling(KElem::constant(z.clone())).unwrap();
        let (g, lambda) = conjugate_to_cp(&m, 3).unwrap();
        assert!(g.is_identity());
        assert_eq!(lambda, z);
    }

    #[test]
    fn cp_normalization_of_conjugate() {
        let k3 = FieldKind::cyclotomic(3).unwrap();
        let z = FieldElement::zeta(&k3).unwrap();
        let one = FieldElement::one(&k3);
        let c = |e: &FieldElement| KElem::constant(e.clone());
        let d = MoebiusElt::scaling(c(&z)).unwrap();
        // conjugate by z -> (z+1)/(z-1)
        let h = MoebiusElt::new(c(&one), c(&one), c(&one), c(&one).neg()).unwrap();
        let a = d.conjugate_by(&h);
        assert!(!a.is_diagonal());
        let (g, lambda) = conjugate_to_cp(&a, 3).unwrap();
        assert_eq!(
            a.conjugate_by(&g),
            MoebiusElt::scaling(KElem::constant(lambda.clone())).unwrap()
        );
        assert_eq!(lambda.checked_pow(3).unwrap(), FieldElement::one(&k3));
        assert!(!lambda.is_one());
    }

    #[test]
    fn cp_wrong_order_rejected() {
        let m = kmap(0, 1, 1, 0); // involution
        assert!(matches!(conjugate_to_cp(&m, 3), Err(Error::WrongProjectiveOrder(3))));
    }

    #[test]
    fn inversion_normalization_fast_path() {
        // z -> t/z comes back unchanged with delta = t
        let t = kt();
        let m = MoebiusElt::antidiagonal(t.clone()).unwrap();
        let (g, delta) = conjugate_to_inversion(&m).unwrap();
        assert!(g.is_identity());
        assert_eq!(delta, t);
    }

    #[test]
    fn inversion_normalization_general() {
        // involution z -> (z - 2)/(z - 1): trace zero
        let m = kmap(1, -2, 1, -1);
        assert!(m.is_involution());
        let (g, delta) = conjugate_to_inversion(&m).unwrap();
        let conj = m.conjugate_by(&g);
        assert_eq!(conj, MoebiusElt::antidiagonal(delta).unwrap());
    }

    #[test]
    fn klein_fast_path_returns_input_delta() {
        let t = kt();
        let group = vdelta_group(&t).unwrap();
        let (g, delta) = klein_to_vdelta(&group).unwrap();
        assert!(g.is_identity());
        assert_eq!(delta, t);
    }

    #[test]
    fn klein_conjugate_recovers_vdelta_shape() {
        let t = kt();
        let group = vdelta_group(&t).unwrap();
        // conjugate everything by z -> (t z + 1)/(z + 1)
        let h = MoebiusElt::new(t.clone(), kconst(1), kconst(1), kconst(1)).unwrap();
        let moved: Vec<_> = group.iter().map(|m| m.conjugate_by(&h)).collect();
        let (g, delta) = klein_to_vdelta(&moved).unwrap();
        let back: Vec<_> = moved.iter().map(|m| m.conjugate_by(&g)).collect();
        let expect = vdelta_group(&delta).unwrap();
        for m in &back {
            assert!(expect.contains(m));
        }
        // the recovered delta differs from t by a square in k(t)
        assert!(delta.mul(&t.inv().unwrap()).is_square());
    }

    #[test]
    fn klein_without_square_class_needs_extension() {
        // X: z -> 2/z, Y: z -> (z - 2)/(z - 1); classes {2, -1, -2}: no squares
        let x = kmap(0, 2, 1, 0);
        let y = kmap(1, -2, 1, -1);
        assert_eq!(x.compose(&y), y.compose(&x));
        let id = MoebiusElt::identity_like(&kconst(0));
        let group = vec![id, x.clone(), y.clone(), x.compose(&y)];
        assert!(matches!(
            klein_to_vdelta(&group),
            Err(Error::FieldExtensionRequired(_))
        ));
    }

    #[test]
    fn klein_base_field_version() {
        let k = FieldKind::prime(7).unwrap();
        let two = FieldElement::from_integer(&k, 2);
        let group = vdelta_group(&two).unwrap();
        let h = MoebiusElt::new(
            FieldElement::from_integer(&k, 1),
            FieldElement::from_integer(&k, 3),
            FieldElement::from_integer(&k, 1),
            FieldElement::from_integer(&k, 5),
        )
        .unwrap();
        let moved: Vec<_> = group.iter().map(|m| m.conjugate_by(&h)).collect();
        let (g, delta) = klein_to_vdelta_base(&moved).unwrap();
        let back: Vec<_> = moved.iter().map(|m| m.conjugate_by(&g)).collect();
        let expect = vdelta_group(&delta).unwrap();
        for m in &back {
            assert!(expect.contains(m));
        }
    }

    #[test]
    fn klein_validation_rejects_junk() {
        let id = MoebiusElt::identity_like(&kconst(0));
        // not four elements
        assert!(klein_to_vdelta(&[id.clone()]).is_err());
        // contains a non-involution
        let bad = vec![
            id.clone(),
            kmap(1, 1, 0, 1),
            kmap(0, 1, 1, 0),
            kmap(1, 1, 0, 1).compose(&kmap(0, 1, 1, 0)),
        ];
        assert!(klein_to_vdelta(&bad).is_err());
    }
}
