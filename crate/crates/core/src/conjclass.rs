//! Conjugacy-class data for the order-16 family: each finite parameter set
//! I (avoiding +-2) determines a group G_I generated by (-x, y), (1/x, y),
//! (x, -y), (x, P(x)/y) with P(x) = prod_{a in I} (x^2 + x^{-2} - a). Two
//! such groups are conjugate exactly when their parameter sets agree up to
//! the six Moebius maps permuting {2, -2, oo}.

use crate::birmap::{closure, nf_profile, ElementaryGroup, NFData, PlaneMap};
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldKind, Scalar};
use crate::moebius::{moebius_through, MoebiusElt, P1};
use crate::poly::Poly;
use crate::ratfunc::KElem;

/// A finite set of branch parameters in k \ {2, -2}, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IndexSet {
    kind: FieldKind,
    elems: Vec<FieldElement>,
}

impl IndexSet {
    pub fn new(kind: FieldKind, mut elems: Vec<FieldElement>) -> Result<Self> {
        let two = FieldElement::from_integer(&kind, 2);
        let neg_two = two.negated();
        for e in &elems {
            if e.kind() != kind {
                return Err(Error::KindMismatch(kind, e.kind()));
            }
            if *e == two || *e == neg_two {
                return Err(Error::InvalidInput(
                    "branch parameters 2 and -2 are degenerate".into(),
                ));
            }
        }
        elems.sort_by(FieldElement::cmp_total);
        for w in elems.windows(2) {
            if w[0] == w[1] {
                return Err(Error::InvalidInput("branch parameters must be distinct".into()));
            }
        }
        Ok(IndexSet { kind, elems })
    }

    pub fn kind(&self) -> &FieldKind {
        &self.kind
    }

    pub fn elems(&self) -> &[FieldElement] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// prod_{a in I} (x^2 + x^{-2} - a) as a rational function of x.
    pub fn branch_scaling(&self) -> KElem {
        let one = FieldElement::one(&self.kind);
        let x = KElem::var_like(&one);
        let x2 = x.mul(&x);
        let core = x2.add(&x2.inv().expect("x^2 is nonzero"));
        let mut out = KElem::constant(one);
        for a in &self.elems {
            out = out.mul(&core.sub(&KElem::constant(a.clone())));
        }
        out
    }
}

/// The group G_I of order 16 attached to a parameter set.
pub fn build_gi(index: &IndexSet) -> Result<ElementaryGroup> {
    let kind = index.kind().clone();
    let one = FieldElement::one(&kind);
    let base_id = MoebiusElt::identity_like(&one);
    let fiber_id = MoebiusElt::identity_like(&KElem::constant(one.clone()));
    let gens = vec![
        PlaneMap::new(MoebiusElt::negation(&one), fiber_id.clone()),
        PlaneMap::new(MoebiusElt::antidiagonal(one.clone())?, fiber_id),
        PlaneMap::new(base_id.clone(), MoebiusElt::negation(&KElem::constant(one))),
        PlaneMap::new(base_id, MoebiusElt::antidiagonal(index.branch_scaling())?),
    ];
    closure(&gens, 2, 4)
}

/// The six Moebius maps of the parameter line permuting {2, -2, oo}, in a
/// fixed deterministic order (identity first).
pub fn s3_elements(kind: &FieldKind) -> Vec<MoebiusElt<FieldElement>> {
    let two = FieldElement::from_integer(kind, 2);
    let neg_two = two.negated();
    let pts = [
        P1::Finite(two.clone()),
        P1::Finite(neg_two.clone()),
        P1::Infinity,
    ];
    let perms: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    perms
        .iter()
        .map(|perm| {
            let to = [
                pts[perm[0]].clone(),
                pts[perm[1]].clone(),
                pts[perm[2]].clone(),
            ];
            moebius_through(&pts, &to, &two).expect("the three points are distinct")
        })
        .collect()
}

fn cmp_sorted_lists(a: &[FieldElement], b: &[FieldElement]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        let ord = x.cmp_total(y);
        if ord != std::cmp::Ordering::Equal {
            return ord;
        }
    }
    a.len().cmp(&b.len())
}

/// The orbit of a parameter set under the six permuting maps: distinct
/// images, sorted lexicographically. Its size always divides 6.
pub fn s3_orbit(index: &IndexSet) -> Vec<IndexSet> {
    let mut orbit: Vec<IndexSet> = Vec::with_capacity(6);
    for s in s3_elements(index.kind()) {
        let mut image: Vec<FieldElement> = index
            .elems()
            .iter()
            .map(|a| match s.apply(&P1::Finite(a.clone())) {
                P1::Finite(v) => v,
                P1::Infinity => unreachable!("parameters avoid 2, -2, and oo"),
            })
            .collect();
        image.sort_by(FieldElement::cmp_total);
        orbit.push(IndexSet {
            kind: index.kind().clone(),
            elems: image,
        });
    }
    orbit.sort_by(|a, b| cmp_sorted_lists(a.elems(), b.elems()));
    orbit.dedup();
    orbit
}

/// The canonical representative of a parameter set under the S_3 action:
/// the orbit element least in sorted lexicographic order.
pub fn canonicalize(index: &IndexSet) -> IndexSet {
    s3_orbit(index).remove(0)
}

/// A conjugacy class of the order-16 family: the canonical parameter set and
/// its full orbit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjClassC1 {
    pub canonical: IndexSet,
    pub orbit: Vec<IndexSet>,
}

/// The conjugacy class of the group attached to a parameter set.
pub fn conj_class(index: &IndexSet) -> ConjClassC1 {
    let orbit = s3_orbit(index);
    ConjClassC1 {
        canonical: orbit[0].clone(),
        orbit,
    }
}

/// Recovers the canonical parameter set of a group presented in the standard
/// coordinates of the order-16 family, from the branch polynomial of its
/// positive-genus involutions.
pub fn recover_i(group: &ElementaryGroup) -> Result<IndexSet> {
    if group.p != 2 || group.rank != 4 {
        return Err(Error::BadGroupShape(
            "this family consists of groups (Z/2)^4".into(),
        ));
    }
    let profile = nf_profile(group)?;
    let branches: Vec<&Poly<FieldElement>> = profile
        .iter()
        .filter_map(|d| match d {
            NFData::Hyperelliptic { branch, .. } => Some(branch),
            NFData::Empty => None,
        })
        .collect();
    if branches.is_empty() {
        // the empty parameter set: no element fixes a positive-genus curve
        let kind = group.elements[0].field_kind();
        return Ok(canonicalize(&IndexSet::new(kind, Vec::new())?));
    }
    if branches.len() != 2 || branches[0] != branches[1] {
        return Err(Error::BadGroupShape(
            "expected exactly two positive-genus involutions with equal branch data".into(),
        ));
    }
    let r = branches[0];
    let kind = r
        .kind()
        .ok_or_else(|| Error::BadGroupShape("branch polynomial is constant".into()))?;
    if !r.is_self_reciprocal() {
        return Err(Error::BadGroupShape(
            "the branch polynomial is not self-reciprocal".into(),
        ));
    }
    let q = r.even_part().ok_or_else(|| {
        Error::BadGroupShape("the branch polynomial is not even".into())
    })?;
    let t = q.palindromic_reduce()?;
    let (roots, cofactor) = t.roots_in_field();
    if cofactor.degree().unwrap_or(0) > 0 {
        return Err(Error::FieldExtensionRequired(
            "the branch parameters generate a proper field extension".into(),
        ));
    }
    let mut elems = Vec::with_capacity(roots.len());
    for (root, mult) in roots {
        if mult != 1 {
            return Err(Error::BadGroupShape(
                "the branch parameters must be simple roots".into(),
            ));
        }
        elems.push(root);
    }
    let index = IndexSet::new(kind, elems)?;
    Ok(canonicalize(&index))
}

/// Whether two parameter sets give conjugate groups: their canonical
/// representatives must coincide.
pub fn are_conjugate_c1(i1: &IndexSet, i2: &IndexSet) -> bool {
    canonicalize(i1) == canonicalize(i2)
}

/// Whether two groups of the order-16 family, each in standard coordinates,
/// are conjugate: their recovered canonical parameter sets must coincide.
pub fn are_conjugate_groups(g1: &ElementaryGroup, g2: &ElementaryGroup) -> Result<bool> {
    Ok(recover_i(g1)? == recover_i(g2)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::birmap::fixed_curve;

    fn qel(n: i64) -> FieldElement {
        FieldElement::from_integer(&FieldKind::Rationals, n)
    }

    fn qset(vals: &[i64]) -> IndexSet {
        IndexSet::new(FieldKind::Rationals, vals.iter().map(|&v| qel(v)).collect()).unwrap()
    }

    #[test]
    fn index_set_validation() {
        assert!(IndexSet::new(FieldKind::Rationals, vec![qel(2)]).is_err());
        assert!(IndexSet::new(FieldKind::Rationals, vec![qel(-2)]).is_err());
        assert!(IndexSet::new(FieldKind::Rationals, vec![qel(3), qel(3)]).is_err());
        let s = qset(&[5, -1, 3]);
        assert_eq!(s.elems(), &[qel(-1), qel(3), qel(5)]);
    }

    #[test]
    fn gi_is_elementary_of_rank_four() {
        let group = build_gi(&qset(&[1])).unwrap();
        assert_eq!(group.p, 2);
        assert_eq!(group.rank, 4);
        assert_eq!(group.elements.len(), 16);
    }

    #[test]
    fn gi_profile_has_two_curves_of_odd_genus() {
        // |I| = 1: genus 1; |I| = 2: genus 3
        for (vals, genus) in [(vec![1i64], 1usize), (vec![1, 3], 3)] {
            let idx = IndexSet::new(
                FieldKind::Rationals,
                vals.iter().map(|&v| qel(v)).collect(),
            )
            .unwrap();
            let group = build_gi(&idx).unwrap();
            let profile = nf_profile(&group).unwrap();
            let curves: Vec<&NFData> = profile
                .iter()
                .filter(|d| !matches!(d, NFData::Empty))
                .collect();
            assert_eq!(curves.len(), 2);
            for c in curves {
                assert_eq!(c.genus(), genus);
                assert_eq!(c.genus(), 2 * idx.len() - 1);
            }
        }
    }

    #[test]
    fn single_parameter_branch_curve() {
        // sigma_+ for I = {a} fixes y^2 = x^4 - a x^2 + 1
        let idx = qset(&[7]);
        let group = build_gi(&idx).unwrap();
        let expected = Poly::from_coeffs(vec![qel(1), qel(0), qel(-7), qel(0), qel(1)]);
        let found = group
            .elements
            .iter()
            .filter(|e| !e.is_identity())
            .filter_map(|e| match fixed_curve(e).unwrap() {
                NFData::Hyperelliptic { branch, .. } => Some(branch),
                NFData::Empty => None,
            })
            .next()
            .unwrap();
        assert_eq!(found, expected);
    }

    #[test]
    fn s3_orbit_of_zero() {
        // the orbit of {0} is {{0}, {-6}, {6}} and the canonical form is {-6}
        let idx = qset(&[0]);
        let maps = s3_elements(&FieldKind::Rationals);
        assert_eq!(maps.len(), 6);
        let mut orbit: Vec<FieldElement> = maps
            .iter()
            .map(|s| match s.apply(&P1::Finite(qel(0))) {
                P1::Finite(v) => v,
                P1::Infinity => panic!("0 must not map to infinity"),
            })
            .collect();
        orbit.sort_by(FieldElement::cmp_total);
        orbit.dedup();
        assert_eq!(orbit, vec![qel(-6), qel(0), qel(6)]);
        assert_eq!(canonicalize(&idx).elems(), &[qel(-6)]);
    }

    #[test]
    fn s3_maps_fix_the_degenerate_points() {
        let maps = s3_elements(&FieldKind::Rationals);
        let special = [P1::Finite(qel(2)), P1::Finite(qel(-2)), P1::Infinity];
        for s in &maps {
            for p in &special {
                assert!(special.contains(&s.apply(p)));
            }
        }
        // the six maps are pairwise distinct and closed under composition
        for (i, a) in maps.iter().enumerate() {
            for (j, b) in maps.iter().enumerate() {
                if i != j {
                    assert_ne!(a, b);
                }
                assert!(maps.contains(&a.compose(b)));
            }
        }
        // two distinguished members: u -> -u and u -> (2u - 12)/(u + 2)
        assert!(maps.contains(&MoebiusElt::negation(&qel(1))));
        assert!(maps.contains(&MoebiusElt::new(qel(2), qel(-12), qel(1), qel(2)).unwrap()));
    }

    #[test]
    fn recover_roundtrip_and_conjugacy() {
        let idx = qset(&[0]);
        let group = build_gi(&idx).unwrap();
        let recovered = recover_i(&group).unwrap();
        assert_eq!(recovered, canonicalize(&idx));
        // an S_3-equivalent parameter gives a conjugate group
        let other = build_gi(&qset(&[6])).unwrap();
        assert!(are_conjugate_groups(&group, &other).unwrap());
        assert!(are_conjugate_c1(&qset(&[0]), &qset(&[6])));
        // a genuinely different parameter does not
        let third = build_gi(&qset(&[1])).unwrap();
        assert!(!are_conjugate_groups(&group, &third).unwrap());
        assert!(!are_conjugate_c1(&qset(&[0]), &qset(&[1])));
    }

    #[test]
    fn empty_parameter_set() {
        let empty = IndexSet::new(FieldKind::Rationals, Vec::new()).unwrap();
        let group = build_gi(&empty).unwrap();
        assert_eq!(group.elements.len(), 16);
        assert_eq!(group.rank, 4);
        // no positive-genus fixed curves at all
        let profile = nf_profile(&group).unwrap();
        assert!(profile.iter().all(|d| matches!(d, NFData::Empty)));
        assert_eq!(recover_i(&group).unwrap(), empty);
        let class = conj_class(&empty);
        assert_eq!(class.canonical, empty);
        assert_eq!(class.orbit.len(), 1);
    }

    #[test]
    fn orbit_sizes_divide_six() {
        for vals in [vec![], vec![0i64], vec![1], vec![3, -5], vec![0, 6], vec![0, 6, -6]] {
            let idx = IndexSet::new(
                FieldKind::Rationals,
                vals.iter().map(|&v| qel(v)).collect(),
            )
            .unwrap();
            let class = conj_class(&idx);
            assert!(6 % class.orbit.len() == 0, "orbit size {}", class.orbit.len());
            assert!(class.orbit.contains(&class.canonical));
            assert!(class.orbit.contains(&canonicalize(&idx)));
            // every orbit member has the same class
            for member in &class.orbit {
                assert!(are_conjugate_c1(member, &idx));
            }
        }
    }

    #[test]
    fn recover_survives_square_rescalings() {
        // conjugating by (x, (x + 1/x) y) multiplies the branch data by a
        // square and leaves the recovered parameters unchanged
        let idx = qset(&[3, -5]);
        let group = build_gi(&idx).unwrap();
        let one = qel(1);
        let x = KElem::var_like(&one);
        for sign in [1i64, -1] {
            let u = x.add(&x.inv().unwrap().mul(&KElem::constant(qel(sign))));
            let rho = PlaneMap::new(
                MoebiusElt::identity_like(&one),
                MoebiusElt::scaling(u).unwrap(),
            );
            let rho_inv = rho.inverse();
            let moved: Vec<PlaneMap> = group
                .elements
                .iter()
                .map(|e| rho.compose(e).compose(&rho_inv))
                .collect();
            let regrouped = closure(
                &moved.iter().filter(|e| !e.is_identity()).cloned().collect::<Vec<_>>(),
                2,
                4,
            )
            .unwrap();
            assert_eq!(recover_i(&regrouped).unwrap(), recover_i(&group).unwrap());
        }
    }

    #[test]
    fn recover_reports_irrational_parameters() {
        // branch parameters +-sqrt(2): T(w) = w^2 - 2 has no rational roots.
        // P = (x^2 + x^{-2})^2 - 2 gives R = x^8 + 1 ... build G_I directly
        // from the rational function with irrational parameter set
        let one = qel(1);
        let x = KElem::var_like(&one);
        let x2 = x.mul(&x);
        let core = x2.add(&x2.inv().unwrap());
        let p_scaling = core.mul(&core).sub(&KElem::constant(qel(2)));
        let base_id = MoebiusElt::identity_like(&one);
        let fiber_id = MoebiusElt::identity_like(&KElem::constant(one.clone()));
        let gens = vec![
            PlaneMap::new(MoebiusElt::negation(&one), fiber_id.clone()),
            PlaneMap::new(MoebiusElt::antidiagonal(one.clone()).unwrap(), fiber_id),
            PlaneMap::new(
                base_id.clone(),
                MoebiusElt::negation(&KElem::constant(one.clone())),
            ),
            PlaneMap::new(base_id, MoebiusElt::antidiagonal(p_scaling).unwrap()),
        ];
        let group = closure(&gens, 2, 4).unwrap();
        assert!(matches!(
            recover_i(&group),
            Err(Error::FieldExtensionRequired(_))
        ));
    }
}
