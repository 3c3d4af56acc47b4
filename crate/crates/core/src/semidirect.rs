//! The semidirect product PGL_2(k(t)) x| PGL_2(k): fiberwise Moebius maps
//! twisted by base automorphisms. Contains the multiplicative Hilbert-90
//! resolvent construction, Klein-cocycle trivialization over k(t), and the
//! two structure normalizations (odd-prime rank 2 and p = 2 rank 4).

use crate::error::{Error, Result};
use crate::field::{field_sqrt, FieldElement, FieldKind, Scalar};
use crate::moebius::{
    conjugate_to_cp, conjugate_to_cp_base, klein_to_vdelta, klein_to_vdelta_base, vdelta_group,
    MoebiusElt,
};
use crate::ratfunc::KElem;
use std::collections::HashSet;

/// The base automorphism gamma acting on k(t): f -> f o gamma^{-1}.
/// This is a left action: act(g h, f) = act(g, act(h, f)).
pub fn act_base(gamma: &MoebiusElt<FieldElement>, f: &KElem) -> KElem {
    let inv = gamma.inverse();
    let [a, b, c, d] = inv.entries();
    f.substitute_fractional(a, b, c, d)
        .expect("base automorphisms are invertible")
}

/// Entry-wise action of gamma on a fiberwise Moebius map.
pub fn act_on_matrix(gamma: &MoebiusElt<FieldElement>, m: &MoebiusElt<KElem>) -> MoebiusElt<KElem> {
    m.map_entries(&|e| act_base(gamma, e))
        .expect("the action preserves invertibility")
}

/// An element (M, gamma): z -> M(z) fiberwise, t -> gamma(t) on the base.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SemidirectElt {
    pub m: MoebiusElt<KElem>,
    pub gamma: MoebiusElt<FieldElement>,
}

impl SemidirectElt {
    pub fn new(m: MoebiusElt<KElem>, gamma: MoebiusElt<FieldElement>) -> Self {
        SemidirectElt { m, gamma }
    }

    pub fn identity(kind: &FieldKind) -> Self {
        let w = KElem::constant(FieldElement::one(kind));
        SemidirectElt {
            m: MoebiusElt::identity_like(&w),
            gamma: MoebiusElt::identity_like(&FieldElement::one(kind)),
        }
    }

    /// A purely fiberwise element (M, id).
    pub fn fiberwise(m: MoebiusElt<KElem>, kind: &FieldKind) -> Self {
        SemidirectElt { m, gamma: MoebiusElt::identity_like(&FieldElement::one(kind)) }
    }

    /// A purely base element (id, gamma).
    pub fn basewise(gamma: MoebiusElt<FieldElement>) -> Self {
        let kind = gamma.entries()[0].kind();
        let w = KElem::constant(FieldElement::one(&kind));
        SemidirectElt { m: MoebiusElt::identity_like(&w), gamma }
    }

    pub fn is_identity(&self) -> bool {
        self.m.is_identity() && self.gamma.is_identity()
    }

    /// (M1, g1) * (M2, g2) = (M1 * act(g1, M2), g1 g2).
    pub fn compose(&self, rhs: &Self) -> Self {
        SemidirectElt {
            m: self.m.compose(&act_on_matrix(&self.gamma, &rhs.m)),
            gamma: self.gamma.compose(&rhs.gamma),
        }
    }

    pub fn inverse(&self) -> Self {
        let ginv = self.gamma.inverse();
        SemidirectElt { m: act_on_matrix(&ginv, &self.m.inverse()), gamma: ginv }
    }

    /// g self g^{-1}.
    pub fn conjugate_by(&self, g: &Self) -> Self {
        g.compose(self).compose(&g.inverse())
    }

    /// Smallest k in 1..=bound with self^k = id.
    pub fn order(&self, bound: u32) -> Option<u32> {
        let mut acc = self.clone();
        for k in 1..=bound {
            if acc.is_identity() {
                return Some(k);
            }
            acc = acc.compose(self);
        }
        None
    }
}

/// Conjugates every element of a list by g.
pub fn conjugate_all(group: &[SemidirectElt], g: &SemidirectElt) -> Vec<SemidirectElt> {
    group.iter().map(|e| e.conjugate_by(g)).collect()
}

// ---------------------------------------------------------------------------
// Hilbert 90 for cyclic actions on k(t)
// ---------------------------------------------------------------------------

/// For gamma of order p acting on k(t) and lambda of norm 1, finds mu with
/// lambda = mu^{-1} * act(gamma, mu), via additive resolvents over the
/// candidates t^(step*j). Fails with `NormNotOne` for bad input and
/// `ResolventBound` if every candidate resolvent vanishes.
pub fn hilbert90_cyclic(
    lambda: &KElem,
    gamma: &MoebiusElt<FieldElement>,
    p: u32,
) -> Result<KElem> {
    hilbert90_with_step(lambda, gamma, p, 1)
}

pub(crate) fn hilbert90_with_step(
    lambda: &KElem,
    gamma: &MoebiusElt<FieldElement>,
    p: u32,
    step: usize,
) -> Result<KElem> {
    let one = lambda.one_like();
    if *lambda == one {
        return Ok(one);
    }
    // partial products b_i = prod_{j<i} sigma^j(lambda); b_p is the norm
    let mut partials: Vec<KElem> = Vec::with_capacity(p as usize);
    let mut acc = one.clone();
    let mut twisted = lambda.clone();
    for _ in 0..p {
        partials.push(acc.clone());
        acc = acc.mul(&twisted);
        twisted = act_base(gamma, &twisted);
    }
    // recompute the norm directly: prod sigma^i(lambda)
    let mut norm = one.clone();
    let mut cur = lambda.clone();
    for _ in 0..p {
        norm = norm.mul(&cur);
        cur = act_base(gamma, &cur);
    }
    if norm != one {
        return Err(Error::NormNotOne);
    }
    let bound = 4 * (lambda.map_degree() + 1) + 4;
    let t = KElem::var_like(lambda.witness());
    for j in 0..=bound {
        let mut c = one.clone();
        for _ in 0..(step * j) {
            c = c.mul(&t);
        }
        // resolvent sum_i b_i sigma^i(c)
        let mut res = lambda.zero_like();
        let mut sc = c.clone();
        for b in &partials {
            res = res.add(&b.mul(&sc));
            sc = act_base(gamma, &sc);
        }
        if res.is_zero() {
            continue;
        }
        let mu = res.inv().expect("nonzero resolvent");
        // verify lambda = mu^{-1} sigma(mu)
        let check = mu.inv().unwrap().mul(&act_base(gamma, &mu));
        if check == *lambda {
            return Ok(mu);
        }
    }
    Err(Error::ResolventBound(bound))
}

// ---------------------------------------------------------------------------
// the Klein group V_1 acting on the base and its cocycles
// ---------------------------------------------------------------------------

/// The four base automorphisms t, -t, 1/t, -1/t.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum V1Elem {
    Id,
    Neg,
    Inv,
    NegInv,
}

impl V1Elem {
    pub const ALL: [V1Elem; 4] = [V1Elem::Id, V1Elem::Neg, V1Elem::Inv, V1Elem::NegInv];

    pub fn index(self) -> usize {
        match self {
            V1Elem::Id => 0,
            V1Elem::Neg => 1,
            V1Elem::Inv => 2,
            V1Elem::NegInv => 3,
        }
    }

    pub fn compose(self, rhs: V1Elem) -> V1Elem {
        use V1Elem::*;
        match (self, rhs) {
            (Id, x) | (x, Id) => x,
            (Neg, Neg) | (Inv, Inv) | (NegInv, NegInv) => Id,
            (Neg, Inv) | (Inv, Neg) => NegInv,
            (Neg, NegInv) | (NegInv, Neg) => Inv,
            (Inv, NegInv) | (NegInv, Inv) => Neg,
        }
    }

    pub fn as_moebius(self, kind: &FieldKind) -> MoebiusElt<FieldElement> {
        let one = FieldElement::one(kind);
        match self {
            V1Elem::Id => MoebiusElt::identity_like(&one),
            V1Elem::Neg => MoebiusElt::negation(&one),
            V1Elem::Inv => MoebiusElt::antidiagonal(one).unwrap(),
            V1Elem::NegInv => MoebiusElt::antidiagonal(one.negated()).unwrap(),
        }
    }

    /// Which V_1 element a base automorphism is, if any.
    pub fn identify(gamma: &MoebiusElt<FieldElement>) -> Option<V1Elem> {
        let kind = gamma.entries()[0].kind();
        V1Elem::ALL.into_iter().find(|v| v.as_moebius(&kind) == *gamma)
    }

    pub fn act(self, f: &KElem) -> KElem {
        let kind = f.witness().kind();
        act_base(&self.as_moebius(&kind), f)
    }
}

/// A function V_1 -> k(t)^*, lambda_id = 1, satisfying the cocycle identity
/// lambda_{s u} = lambda_s * s(lambda_u).
#[derive(Debug, Clone, PartialEq)]
pub struct CocycleV1 {
    values: [KElem; 4],
}

impl CocycleV1 {
    pub fn new(values: [KElem; 4]) -> Result<Self> {
        let c = CocycleV1 { values };
        c.validate()?;
        Ok(c)
    }

    pub fn value(&self, s: V1Elem) -> &KElem {
        &self.values[s.index()]
    }

    fn validate(&self) -> Result<()> {
        let one = self.values[0].one_like();
        if self.values[0] != one {
            return Err(Error::NotACocycle);
        }
        for s in V1Elem::ALL {
            for u in V1Elem::ALL {
                let lhs = self.value(s.compose(u)).clone();
                let rhs = self.value(s).mul(&s.act(self.value(u)));
                if lhs != rhs {
                    return Err(Error::NotACocycle);
                }
            }
        }
        Ok(())
    }

    /// The coboundary of mu: s -> mu^{-1} s(mu).
    pub fn coboundary(mu: &KElem) -> Result<Self> {
        let mu_inv = mu.inv().ok_or(Error::DivisionByZero)?;
        let values = V1Elem::ALL.map(|s| mu_inv.mul(&s.act(mu)));
        Self::new(values)
    }
}

/// Finds mu in k(t)^* with lambda_s = mu^{-1} s(mu) for every s in V_1:
/// first a Hilbert-90 step along t -> -t, then one along t -> 1/t with
/// candidates in the fixed field k(t^2).
pub fn trivialize_cocycle_v1(cocycle: &CocycleV1) -> Result<KElem> {
    let kind = cocycle.values[0].witness().kind();
    let s1 = V1Elem::Neg.as_moebius(&kind);
    let s2 = V1Elem::Inv.as_moebius(&kind);
    // step 1: kill lambda_{s1}
    let mu1 = hilbert90_cyclic(cocycle.value(V1Elem::Neg), &s1, 2)?;
    // corrected cocycle lambda'_s = lambda_s * (mu1^{-1} s(mu1))^{-1}
    let mu1_inv = mu1.inv().unwrap();
    let corrected = |s: V1Elem, lam: &KElem| -> KElem {
        lam.mul(&mu1.mul(&s.act(&mu1_inv)))
    };
    let lam2 = corrected(V1Elem::Inv, cocycle.value(V1Elem::Inv));
    // lambda'_{s2} is s1-invariant, so candidates in k(t^2) suffice and the
    // resulting mu2 stays s1-invariant
    debug_assert_eq!(V1Elem::Neg.act(&lam2), lam2);
    let mu2 = hilbert90_with_step(&lam2, &s2, 2, 2)?;
    let mu = mu1.mul(&mu2);
    // verify all four
    let check = CocycleV1::coboundary(&mu)?;
    if check != *cocycle {
        return Err(Error::NotACocycle);
    }
    Ok(mu)
}

// ---------------------------------------------------------------------------
// structure normalizations
// ---------------------------------------------------------------------------

/// Result of normalizing a rank-2 group for odd p: after conjugating by
/// `conjugator`, the group is exactly {(z -> zeta^a z, t -> beta^b t)}.
#[derive(Debug, Clone)]
pub struct Rank2Normalization {
    pub conjugator: SemidirectElt,
    pub zeta: FieldElement,
    pub beta: FieldElement,
}

/// Result of normalizing a rank-4 group for p = 2: after conjugating by
/// `conjugator`, the group is exactly V_delta x V_1.
#[derive(Debug, Clone)]
pub struct Rank4Normalization {
    pub conjugator: SemidirectElt,
    pub delta: KElem,
}

fn validate_elementary(group: &[SemidirectElt], p: u32, expected: usize) -> Result<()> {
    if group.len() != expected {
        return Err(Error::BadGroupShape(format!(
            "expected {expected} elements, got {}",
            group.len()
        )));
    }
    let mut seen: HashSet<&SemidirectElt> = HashSet::new();
    for e in group {
        if !seen.insert(e) {
            return Err(Error::BadGroupShape("elements are not distinct".into()));
        }
    }
    if !group.iter().any(|e| e.is_identity()) {
        return Err(Error::BadGroupShape("the identity is missing".into()));
    }
    for (i, e) in group.iter().enumerate() {
        if e.is_identity() {
            continue;
        }
        if e.order(p) != Some(p) {
            return Err(Error::WrongOrder { index: i, p: p as u64 });
        }
    }
    // one compose per ordered pair suffices: once ab = ba is known, closure
    // of the products with i <= j covers every ordered product
    for (i, a) in group.iter().enumerate() {
        for (j, b) in group.iter().enumerate().skip(i) {
            let ab = a.compose(b);
            if i != j && ab != b.compose(a) {
                return Err(Error::NonCommuting(i, j));
            }
            if !group.contains(&ab) {
                return Err(Error::BadGroupShape("the set is not closed under composition".into()));
            }
        }
    }
    Ok(())
}

/// The toral subgroup G' = G ∩ PGL_2(k(t)) (gamma = id), in input order.
pub fn fiber_subgroup(group: &[SemidirectElt]) -> Vec<SemidirectElt> {
    group.iter().filter(|e| e.gamma.is_identity()).cloned().collect()
}

/// The image of G in PGL_2(k), deduplicated in input order.
pub fn base_image(group: &[SemidirectElt]) -> Vec<MoebiusElt<FieldElement>> {
    let mut out: Vec<MoebiusElt<FieldElement>> = Vec::new();
    for e in group {
        if !out.contains(&e.gamma) {
            out.push(e.gamma.clone());
        }
    }
    out
}

/// Normalizes an elementary abelian group of order p^2 (p an odd prime)
/// whose toral part and base image both have order p, to the standard
/// diagonal form {(zeta^a z, beta^b t)}.
pub fn normalize_rank2_odd(group: &[SemidirectElt], p: u32) -> Result<Rank2Normalization> {
    if p < 3 || p % 2 == 0 {
        return Err(Error::InvalidInput("p must be an odd prime".into()));
    }
    validate_elementary(group, p, (p * p) as usize)?;
    let kind = group[0].gamma.entries()[0].kind();
    let torus = fiber_subgroup(group);
    let base = base_image(group);
    if torus.len() != p as usize || base.len() != p as usize {
        return Err(Error::BadGroupShape(format!(
            "need toral part and base image of order {p}"
        )));
    }

    // stage 1: make the toral part diagonal
    let t_gen = torus
        .iter()
        .find(|e| !e.is_identity())
        .expect("toral part has order p > 1");
    let (g0, zeta) = conjugate_to_cp(&t_gen.m, p)?;
    let stage1 = SemidirectElt::fiberwise(g0, &kind);
    let group1 = conjugate_all(group, &stage1);

    // stage 2: make the base image diagonal
    let b_gen = group1
        .iter()
        .find(|e| !e.gamma.is_identity())
        .expect("base image has order p > 1");
    let (h, beta) = conjugate_to_cp_base(&b_gen.gamma, p)?;
    let stage2 = SemidirectElt::basewise(h);
    let group2 = conjugate_all(&group1, &stage2);

    // stage 3: the chosen lift is (lambda z, t -> beta^b t); untwist lambda
    let u = group2
        .iter()
        .find(|e| !e.gamma.is_identity())
        .expect("base image is nontrivial");
    if !u.m.is_diagonal() {
        return Err(Error::BadGroupShape(
            "a lift of a base generator does not commute with the diagonal torus".into(),
        ));
    }
    let lambda = u
        .m
        .diagonal_ratio()
        .expect("diagonal map has a ratio");
    let mu = hilbert90_cyclic(&lambda, &u.gamma, p)?;
    let scale = MoebiusElt::scaling(mu).expect("mu is nonzero");
    let stage3 = SemidirectElt::fiberwise(scale, &kind);
    let group3 = conjugate_all(&group2, &stage3);

    // verify: the result must be exactly {(zeta^a z, beta^b t)}
    let mut expect: Vec<SemidirectElt> = Vec::new();
    for a in 0..p {
        for b in 0..p {
            let za = KElem::constant(zeta.checked_pow(a as i64)?);
            let bb = beta.checked_pow(b as i64)?;
            expect.push(SemidirectElt::new(
                MoebiusElt::scaling(za).expect("root of unity is nonzero"),
                MoebiusElt::scaling(bb).expect("root of unity is nonzero"),
            ));
        }
    }
    for e in &group3 {
        if !expect.contains(e) {
            return Err(Error::BadGroupShape(
                "normalization did not reach the standard diagonal form".into(),
            ));
        }
    }
    let conjugator = stage3.compose(&stage2).compose(&stage1);
    Ok(Rank2Normalization { conjugator, zeta, beta })
}

/// Normalizes an elementary abelian 2-group of order 16 whose toral part and
/// base image are both Klein four-groups, to V_delta x V_1.
pub fn normalize_rank4_two(group: &[SemidirectElt]) -> Result<Rank4Normalization> {
    validate_elementary(group, 2, 16)?;
    let kind = group[0].gamma.entries()[0].kind();
    let torus = fiber_subgroup(group);
    let base = base_image(group);
    if torus.len() != 4 || base.len() != 4 {
        return Err(Error::BadGroupShape(
            "need toral part and base image to be Klein four-groups".into(),
        ));
    }

    // stage 1: bring the base image to V_1 = {t, -t, 1/t, -1/t}. The group
    // contains both +-delta_k/t, so a square root of either sign works.
    let (h0, delta_k) = klein_to_vdelta_base(&base)?;
    let s = field_sqrt(&delta_k)
        .or_else(|| field_sqrt(&delta_k.negated()))
        .ok_or_else(|| {
            Error::FieldExtensionRequired(
                "the base Klein group needs a square discriminant to reach V_1".into(),
            )
        })?;
    // scale t -> t/s: V_{s^2} becomes V_1
    let h1 = MoebiusElt::new(
        FieldElement::one(&kind),
        FieldElement::zero(&kind),
        FieldElement::zero(&kind),
        s,
    )?;
    let stage1 = SemidirectElt::basewise(h1.compose(&h0));
    let group1 = conjugate_all(group, &stage1);
    {
        let base1 = base_image(&group1);
        let v1: Vec<MoebiusElt<FieldElement>> =
            V1Elem::ALL.iter().map(|v| v.as_moebius(&kind)).collect();
        for g in &base1 {
            if !v1.contains(g) {
                return Err(Error::BadGroupShape("base image did not reach V_1".into()));
            }
        }
    }

    // stage 2: bring the toral part to V_zeta
    let torus1: Vec<MoebiusElt<KElem>> =
        fiber_subgroup(&group1).iter().map(|e| e.m.clone()).collect();
    let (g1, zeta) = klein_to_vdelta(&torus1)?;
    let stage2 = SemidirectElt::fiberwise(g1, &kind);
    let group2 = conjugate_all(&group1, &stage2);

    // stage 3: choose diagonal lifts of s1 = (t -> -t) and s2 = (t -> 1/t),
    // read off the cocycle, and untwist it
    let lift_of = |v: V1Elem| -> Result<SemidirectElt> {
        let target = v.as_moebius(&kind);
        group2
            .iter()
            .find(|e| e.gamma == target && e.m.is_diagonal())
            .cloned()
            .ok_or_else(|| Error::BadGroupShape(format!("no diagonal lift of {v:?} exists")))
    };
    let g_s1 = lift_of(V1Elem::Neg)?;
    let g_s2 = lift_of(V1Elem::Inv)?;
    let g_s12 = g_s1.compose(&g_s2);
    let ratio = |e: &SemidirectElt| -> Result<KElem> {
        e.m.diagonal_ratio()
            .ok_or_else(|| Error::BadGroupShape("lift is not diagonal".into()))
    };
    let one = KElem::constant(FieldElement::one(&kind));
    let cocycle = CocycleV1::new([
        one.clone(),
        ratio(&g_s1)?,
        ratio(&g_s2)?,
        ratio(&g_s12)?,
    ])?;
    let mu = trivialize_cocycle_v1(&cocycle)?;
    let scale = MoebiusElt::scaling(mu.clone()).expect("mu is nonzero");
    let stage3 = SemidirectElt::fiberwise(scale, &kind);
    let group3 = conjugate_all(&group2, &stage3);

    // delta = zeta * mu^2; it is V_1-invariant for any valid input group
    let delta = zeta.mul(&mu.mul(&mu));
    for v in [V1Elem::Neg, V1Elem::Inv] {
        if v.act(&delta) != delta {
            return Err(Error::BadGroupShape(
                "the normalized delta is not invariant under the base action".into(),
            ));
        }
    }
    // verify: the result must be exactly V_delta x V_1
    let vdelta = vdelta_group(&delta.one_like().mul(&delta))?;
    let mut expect: Vec<SemidirectElt> = Vec::new();
    for v in &vdelta {
        for s in V1Elem::ALL {
            expect.push(SemidirectElt::new(v.clone(), s.as_moebius(&kind)));
        }
    }
    for e in &group3 {
        if !expect.contains(e) {
            return Err(Error::BadGroupShape(
                "normalization did not reach V_delta x V_1".into(),
            ));
        }
    }
    let conjugator = stage3.compose(&stage2).compose(&stage1);
    Ok(Rank4Normalization { conjugator, delta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn qel(n: i64) -> FieldElement {
        FieldElement::from_integer(&FieldKind::Rationals, n)
    }

    fn kconst(n: i64) -> KElem {
        KElem::constant(qel(n))
    }

    fn kt() -> KElem {
        KElem::var_like(&qel(0))
    }

    #[test]
    fn action_is_a_left_action() {
        // gamma: t -> t + 1, rho: t -> 2t
        let gamma = MoebiusElt::new(qel(1), qel(1), qel(0), qel(1)).unwrap();
        let rho = MoebiusElt::new(qel(2), qel(0), qel(0), qel(1)).unwrap();
        let f = kt().mul(&kt()).add(&kconst(1)); // t^2 + 1
        let lhs = act_base(&gamma.compose(&rho), &f);
        let rhs = act_base(&gamma, &act_base(&rho, &f));
        assert_eq!(lhs, rhs);
        // act(gamma, f) = f o gamma^{-1}: for gamma: t -> t+1, f = t^2 + 1,
        // we get (t-1)^2 + 1
        let expect = kt().sub(&kconst(1)).mul(&kt().sub(&kconst(1))).add(&kconst(1));
        assert_eq!(act_base(&gamma, &f), expect);
    }

    #[test]
    fn compose_and_inverse() {
        let gamma = MoebiusElt::new(qel(0), qel(1), qel(1), qel(0)).unwrap(); // t -> 1/t
        let m = MoebiusElt::scaling(kt()).unwrap(); // z -> t z
        let e = SemidirectElt::new(m, gamma);
        let id = SemidirectElt::identity(&FieldKind::Rationals);
        assert_eq!(e.compose(&e.inverse()), id);
        assert_eq!(e.inverse().compose(&e), id);
    }

    #[test]
    fn hilbert90_fast_path_and_oracle() {
        // lambda = 1 -> mu = 1
        let one = kconst(1);
        let inv = MoebiusElt::new(qel(0), qel(1), qel(1), qel(0)).unwrap();
        assert_eq!(hilbert90_cyclic(&one, &inv, 2).unwrap(), one);
        // lambda = 1/t^2 with sigma: t -> 1/t has norm 1 and mu = t^2/(t^2+1)
        let t = kt();
        let lambda = t.mul(&t).inv().unwrap();
        let mu = hilbert90_cyclic(&lambda, &inv, 2).unwrap();
        let expected = {
            let t2 = t.mul(&t);
            t2.mul(&t2.add(&kconst(1)).inv().unwrap())
        };
        assert_eq!(mu, expected);
        // defining property
        let check = mu.inv().unwrap().mul(&act_base(&inv, &mu));
        assert_eq!(check, lambda);
    }

    #[test]
    fn hilbert90_rejects_bad_norm() {
        // lambda = t^2 with sigma: t -> 1/t has norm t^2 * (1/t^2) = 1... use
        // sigma: t -> -t instead: norm of t is t * (-t) = -t^2, not 1
        let neg = MoebiusElt::new(qel(-1), qel(0), qel(0), qel(1)).unwrap();
        assert!(matches!(hilbert90_cyclic(&kt(), &neg, 2), Err(Error::NormNotOne)));
    }

    #[test]
    fn v1_group_table() {
        for a in V1Elem::ALL {
            assert_eq!(a.compose(a), V1Elem::Id);
            for b in V1Elem::ALL {
                assert_eq!(a.compose(b), b.compose(a));
            }
        }
        // action sanity: Inv sends t^2 to 1/t^2
        let t2 = kt().mul(&kt());
        assert_eq!(V1Elem::Inv.act(&t2), t2.inv().unwrap());
        assert_eq!(V1Elem::Neg.act(&t2), t2);
    }

    #[test]
    fn cocycle_validation_and_trivialization() {
        // coboundary of mu = t: lambda_neg = -1, lambda_inv = 1/t^2
        let t = kt();
        let cocycle = CocycleV1::coboundary(&t).unwrap();
        assert_eq!(*cocycle.value(V1Elem::Neg), kconst(-1));
        let mu = trivialize_cocycle_v1(&cocycle).unwrap();
        assert_eq!(CocycleV1::coboundary(&mu).unwrap(), cocycle);
        // a non-cocycle is rejected
        let bad = CocycleV1::new([kconst(1), kconst(2), kconst(1), kconst(1)]);
        assert!(matches!(bad, Err(Error::NotACocycle)));
    }

    #[test]
    fn rank2_normalization_roundtrip() {
        // standard group over Q(zeta_3), conjugated by a twist
        let kind = FieldKind::cyclotomic(3).unwrap();
        let zeta = FieldElement::zeta(&kind).unwrap();
        let mut group: Vec<SemidirectElt> = Vec::new();
        for a in 0..3i64 {
            for b in 0..3i64 {
                group.push(SemidirectElt::new(
                    MoebiusElt::scaling(KElem::constant(zeta.checked_pow(a).unwrap())).unwrap(),
                    MoebiusElt::scaling(zeta.checked_pow(b).unwrap()).unwrap(),
                ));
            }
        }
        let one = FieldElement::one(&kind);
        let tvar = KElem::var_like(&one);
        // twist by (z -> (z + t)/(z - 1), t -> (t+1)/(t-1))
        let g = MoebiusElt::new(
            KElem::constant(one.clone()),
            tvar.clone(),
            KElem::constant(one.clone()),
            KElem::constant(one.negated()),
        )
        .unwrap();
        let h = MoebiusElt::new(one.clone(), one.clone(), one.clone(), one.negated()).unwrap();
        let twist = SemidirectElt::new(g, h);
        let moved = conjugate_all(&group, &twist);
        let norm = normalize_rank2_odd(&moved, 3).unwrap();
        // internal verification passed; double-check one element lands right
        let back = conjugate_all(&moved, &norm.conjugator);
        assert!(back.iter().any(|e| {
            e.m == MoebiusElt::scaling(KElem::constant(norm.zeta.clone())).unwrap()
                && e.gamma.is_identity()
        }));
        assert_eq!(norm.zeta.checked_pow(3).unwrap(), FieldElement::one(&kind));
        assert!(!norm.zeta.is_one());
        assert_eq!(norm.beta.checked_pow(3).unwrap(), FieldElement::one(&kind));
    }

    #[test]
    fn rank2_rejects_wrong_shapes() {
        let kind = FieldKind::cyclotomic(3).unwrap();
        let id = SemidirectElt::identity(&kind);
        assert!(normalize_rank2_odd(&[id], 3).is_err());
        assert!(normalize_rank2_odd(&[], 4).is_err());
    }

    #[test]
    fn rank4_normalization_roundtrip() {
        // V_delta x V_1 over Q with delta = t^2 + 1/t^2, twisted
        let kind = FieldKind::Rationals;
        let t = kt();
        let delta = t.mul(&t).add(&t.mul(&t).inv().unwrap());
        let vdelta = vdelta_group(&delta).unwrap();
        let mut group: Vec<SemidirectElt> = Vec::new();
        for v in &vdelta {
            for s in V1Elem::ALL {
                group.push(SemidirectElt::new(v.clone(), s.as_moebius(&kind)));
            }
        }
        // twist by (z -> t z + 1, t -> 2t)
        let g = MoebiusElt::new(t.clone(), kconst(1), kconst(0), kconst(1)).unwrap();
        let h = MoebiusElt::new(qel(2), qel(0), qel(0), qel(1)).unwrap();
        let twist = SemidirectElt::new(g, h);
        let moved = conjugate_all(&group, &twist);
        let norm = normalize_rank4_two(&moved).unwrap();
        // the normalized delta is V_1-invariant by construction; the internal
        // set verification already ran. sanity-check the conjugated group.
        let back = conjugate_all(&moved, &norm.conjugator);
        let vd = vdelta_group(&norm.delta).unwrap();
        for e in &back {
            assert!(vd.contains(&e.m));
            assert!(V1Elem::identify(&e.gamma).is_some());
        }
    }

    #[test]
    fn rank4_fast_path_is_stable() {
        // an already-standard group normalizes with delta unchanged
        let kind = FieldKind::Rationals;
        let t = kt();
        let delta = t.mul(&t).add(&t.mul(&t).inv().unwrap());
        let vdelta = vdelta_group(&delta).unwrap();
        let mut group: Vec<SemidirectElt> = Vec::new();
        for v in &vdelta {
            for s in V1Elem::ALL {
                group.push(SemidirectElt::new(v.clone(), s.as_moebius(&kind)));
            }
        }
        let norm = normalize_rank4_two(&group).unwrap();
        assert_eq!(norm.delta, delta);
        let back = conjugate_all(&group, &norm.conjugator);
        for e in &back {
            assert!(group.contains(e));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn action_homomorphism_property(
            a1 in -3i64..4, b1 in -3i64..4, c1 in -3i64..4, d1 in -3i64..4,
            a2 in -3i64..4, b2 in -3i64..4, c2 in -3i64..4, d2 in -3i64..4,
            coeffs in proptest::collection::vec(-3i64..4, 1..4)) {
            let det1 = a1 * d1 - b1 * c1;
            let det2 = a2 * d2 - b2 * c2;
            prop_assume!(det1 != 0 && det2 != 0);
            let g1 = MoebiusElt::new(qel(a1), qel(b1), qel(c1), qel(d1)).unwrap();
            let g2 = MoebiusElt::new(qel(a2), qel(b2), qel(c2), qel(d2)).unwrap();
            let f = crate::poly::Poly::from_coeffs(
                coeffs.iter().map(|&c| qel(c)).collect::<Vec<_>>());
            prop_assume!(!f.is_zero());
            let f = KElem::from_poly(f);
            prop_assert_eq!(
                act_base(&g1.compose(&g2), &f),
                act_base(&g1, &act_base(&g2, &f)));
        }

        #[test]
        fn semidirect_associativity(
            s in -2i64..3, u in -2i64..3, v in -2i64..3) {
            prop_assume!(s != 0 && u != 0 && v != 0);
            let kind = FieldKind::Rationals;
            let e1 = SemidirectElt::new(
                MoebiusElt::scaling(kt()).unwrap(),
                MoebiusElt::scaling(qel(s)).unwrap());
            let e2 = SemidirectElt::new(
                MoebiusElt::new(kconst(1), kconst(u), kconst(0), kconst(1)).unwrap(),
                MoebiusElt::new(qel(0), qel(1), qel(1), qel(0)).unwrap());
            let e3 = SemidirectElt::new(
                MoebiusElt::antidiagonal(kconst(v)).unwrap(),
                MoebiusElt::scaling(qel(2)).unwrap());
            let _ = &kind;
            prop_assert_eq!(
                e1.compose(&e2).compose(&e3),
                e1.compose(&e2.compose(&e3)));
        }
    }
}
