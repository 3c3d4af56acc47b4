//! Plane maps of de Jonquieres form (x, y) -> (gamma(x), M(x)(y)): a Moebius
//! map on the base composed with a fiberwise Moebius map whose entries are
//! rational in the base coordinate. Provides group closure for elementary
//! abelian subgroups and the fixed-curve data of involutions.

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldKind, Scalar};
use crate::intfactor::is_prime_u64;
use crate::moebius::{MoebiusElt, P1};
use crate::poly::Poly;
use crate::ratfunc::KElem;
use crate::semidirect::{act_on_matrix, SemidirectElt};
use std::collections::HashSet;

/// The map (x, y) -> (gamma(x), m(x)(y)); `m` depends on the source x.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlaneMap {
    pub gamma: MoebiusElt<FieldElement>,
    pub m: MoebiusElt<KElem>,
}

impl PlaneMap {
    pub fn new(gamma: MoebiusElt<FieldElement>, m: MoebiusElt<KElem>) -> Self {
        PlaneMap { gamma, m }
    }

    pub fn identity(kind: &FieldKind) -> Self {
        let one = FieldElement::one(kind);
        PlaneMap {
            gamma: MoebiusElt::identity_like(&one),
            m: MoebiusElt::identity_like(&KElem::constant(one)),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.gamma.is_identity() && self.m.is_identity()
    }

    pub fn field_kind(&self) -> FieldKind {
        self.gamma.entries()[0].kind()
    }

    /// (f . g)(x, y) = f(g(x, y)): gamma_f o gamma_g and M_f(gamma_g(x)) M_g(x).
    pub fn compose(&self, rhs: &Self) -> Self {
        let twisted = act_on_matrix(&rhs.gamma.inverse(), &self.m);
        PlaneMap {
            gamma: self.gamma.compose(&rhs.gamma),
            m: twisted.compose(&rhs.m),
        }
    }

    pub fn inverse(&self) -> Self {
        let ginv = self.gamma.inverse();
        PlaneMap {
            gamma: ginv.clone(),
            m: act_on_matrix(&ginv.inverse(), &self.m.inverse()),
        }
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

    /// The same map as a group-theoretic pair (M, gamma) with M = m o gamma^{-1}.
    pub fn to_semidirect(&self) -> SemidirectElt {
        SemidirectElt::new(act_on_matrix(&self.gamma, &self.m), self.gamma.clone())
    }

    pub fn from_semidirect(e: &SemidirectElt) -> Self {
        PlaneMap {
            gamma: e.gamma.clone(),
            m: act_on_matrix(&e.gamma.inverse(), &e.m),
        }
    }

    /// Evaluates the map at a point with both coordinates finite, when the
    /// fiberwise matrix is regular there.
    pub fn apply_affine(
        &self,
        x: &FieldElement,
        y: &FieldElement,
    ) -> Option<(FieldElement, FieldElement)> {
        let gx = match self.gamma.apply(&P1::Finite(x.clone())) {
            P1::Finite(v) => v,
            P1::Infinity => return None,
        };
        let [a, b, c, d] = self.m.entries();
        let ev = |e: &KElem| e.eval(x);
        let mx = MoebiusElt::new(ev(a)?, ev(b)?, ev(c)?, ev(d)?).ok()?;
        match mx.apply(&P1::Finite(y.clone())) {
            P1::Finite(v) => Some((gx, v)),
            P1::Infinity => None,
        }
    }
}

/// (x, y) -> (x, f(x^p) y): commutes with every map (beta x, zeta y) whose
/// base factor is a p-th root of unity.
pub fn scaling_in_pth_powers(f: &KElem, p: u32) -> Result<PlaneMap> {
    if f.is_zero() {
        return Err(Error::InvalidInput("the scaling factor must be nonzero".into()));
    }
    let kind = f.witness().kind();
    let xp = KElem::from_poly_with(
        Poly::monomial(FieldElement::one(&kind), p as usize),
        f.witness(),
    );
    let fxp = f.compose(&xp)?;
    Ok(PlaneMap {
        gamma: MoebiusElt::identity_like(&FieldElement::one(&kind)),
        m: MoebiusElt::scaling(fxp)?,
    })
}

/// True when every element is (beta x, zeta y) with constant beta, zeta.
pub fn is_diagonal_torus_shape(elements: &[PlaneMap]) -> bool {
    elements.iter().all(|e| {
        e.gamma.is_diagonal()
            && e.m.is_diagonal()
            && e.m.diagonal_ratio().map_or(false, |r| r.is_constant())
    })
}

/// An elementary abelian group (Z/p)^rank of plane maps, with its chosen
/// independent generators and all p^rank elements in exponent-lex order.
#[derive(Debug, Clone)]
pub struct ElementaryGroup {
    pub p: u32,
    pub rank: usize,
    pub generators: Vec<PlaneMap>,
    pub elements: Vec<PlaneMap>,
}

impl ElementaryGroup {
    pub fn contains(&self, g: &PlaneMap) -> bool {
        self.elements.contains(g)
    }
}

/// Closes commuting order-p generators into an elementary abelian group.
/// Fails with `WrongOrder` if a generator's order is not exactly p,
/// `NonCommuting` for a non-commuting pair, and `ClosureExceeded` if more
/// than `max_rank` independent generators appear.
pub fn closure(generators: &[PlaneMap], p: u32, max_rank: usize) -> Result<ElementaryGroup> {
    if !is_prime_u64(p as u64) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    if generators.is_empty() {
        return Err(Error::InvalidInput("need at least one generator".into()));
    }
    for (i, g) in generators.iter().enumerate() {
        if g.order(p) != Some(p) {
            return Err(Error::WrongOrder { index: i, p: p as u64 });
        }
    }
    for (i, a) in generators.iter().enumerate() {
        for (j, b) in generators.iter().enumerate().skip(i + 1) {
            if a.compose(b) != b.compose(a) {
                return Err(Error::NonCommuting(i, j));
            }
        }
    }
    let kind = generators[0].field_kind();
    let mut basis: Vec<PlaneMap> = Vec::new();
    let mut elements: Vec<PlaneMap> = vec![PlaneMap::identity(&kind)];
    for g in generators {
        if elements.contains(g) {
            continue;
        }
        if basis.len() == max_rank {
            return Err(Error::ClosureExceeded { max_rank: max_rank as u32 });
        }
        basis.push(g.clone());
        let mut extended = Vec::with_capacity(elements.len() * p as usize);
        for e in &elements {
            let mut acc = e.clone();
            extended.push(acc.clone());
            for _ in 1..p {
                acc = acc.compose(g);
                extended.push(acc.clone());
            }
        }
        elements = extended;
    }
    let distinct: HashSet<&PlaneMap> = elements.iter().collect();
    if distinct.len() != elements.len() {
        return Err(Error::BadGroupShape(
            "generators do not span an elementary abelian group".into(),
        ));
    }
    Ok(ElementaryGroup { p, rank: basis.len(), generators: basis, elements })
}

/// The fixed-curve data of an involution: either no component of positive
/// genus, or a hyperelliptic double cover y^2 = (unit) * branch(x).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NFData {
    Empty,
    Hyperelliptic {
        /// monic squarefree branch polynomial (its unit factor is dropped)
        branch: Poly<FieldElement>,
        /// whether the cover is also branched over x = infinity
        infinity_branched: bool,
        genus: usize,
    },
}

impl NFData {
    pub fn genus(&self) -> usize {
        match self {
            NFData::Empty => 0,
            NFData::Hyperelliptic { genus, .. } => *genus,
        }
    }
}

/// Computes the normalized fixed-curve data of an involution. Maps moving
/// the base, and fiberwise fixed loci that split into rational sections,
/// give `Empty`.
pub fn fixed_curve(involution: &PlaneMap) -> Result<NFData> {
    if involution.order(2) != Some(2) {
        return Err(Error::NotInvolution);
    }
    if !involution.gamma.is_identity() {
        return Ok(NFData::Empty);
    }
    let [a, b, c, d] = involution.m.entries();
    if c.is_zero() {
        // the fixed locus is a pair of sections
        return Ok(NFData::Empty);
    }
    // fixed points of (ay+b)/(cy+d) over k(x): cy^2 + (d-a)y - b = 0, a
    // double cover y^2 = b/c + (d-a)^2/(4c^2)
    let four = KElem::constant(FieldElement::from_integer(&involution.field_kind(), 4));
    let diff = d.sub(a);
    let disc = b.mul(&c.inv().ok_or(Error::DivisionByZero)?).add(
        &diff
            .mul(&diff)
            .mul(&four.mul(&c.mul(c)).inv().ok_or(Error::DivisionByZero)?),
    );
    if disc.is_zero() {
        return Ok(NFData::Empty);
    }
    // the odd-multiplicity part of num * den is the branch polynomial
    let prod = disc.num().mul(disc.den());
    let (_unit, factors) = prod.squarefree_decomposition()?;
    let mut branch = Poly::constant(FieldElement::one(&involution.field_kind()));
    for (f, mult) in &factors {
        if mult % 2 == 1 {
            branch = branch.mul(f);
        }
    }
    let deg = branch.degree().unwrap_or(0);
    if deg == 0 {
        return Ok(NFData::Empty);
    }
    let points = deg + deg % 2;
    let genus = points / 2 - 1;
    if genus == 0 {
        return Ok(NFData::Empty);
    }
    Ok(NFData::Hyperelliptic { branch, infinity_branched: deg % 2 == 1, genus })
}

/// Fixed-curve data for every non-identity element of an exponent-2 group,
/// in the group's element order.
pub fn nf_profile(group: &ElementaryGroup) -> Result<Vec<NFData>> {
    if group.p != 2 {
        return Err(Error::InvalidInput(
            "fixed-curve profiles are defined for exponent-2 groups".into(),
        ));
    }
    group
        .elements
        .iter()
        .filter(|e| !e.is_identity())
        .map(fixed_curve)
        .collect()
}
