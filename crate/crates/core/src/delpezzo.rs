//! Quartic surfaces cut out by two diagonal quadrics in P^4, their canonical
//! group of 16 diagonal involutions, and the j-invariant bookkeeping that
//! separates them: branch j-values of four-point subsets, the five-component
//! J map with its Jacobian identity, and the exhaustive finite-field fiber
//! experiment. Also hosts the divisibility tables (Weyl orders, genus bound)
//! and the two character-decomposition counts used by the rank bounds.

use crate::birmap::{fixed_curve, NFData, PlaneMap};
use crate::error::{Error, Result};
use crate::field::{primitive_root_of_unity, FieldElement, FieldKind, Scalar};
use crate::intfactor::{is_prime_u64, valuation};
use crate::moebius::{MoebiusElt, P1};
use crate::poly::Poly;
use crate::ratfunc::KElem;
use std::collections::{HashMap, HashSet};

/// A smooth intersection of the two diagonal quadrics sum X_i^2 = 0 and
/// sum lambda_i X_i^2 = 0: encoded by five pairwise-distinct parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuarticDP {
    lambdas: [FieldElement; 5],
}

impl QuarticDP {
    pub fn new(lambdas: [FieldElement; 5]) -> Result<Self> {
        let kind = lambdas[0].kind();
        for l in &lambdas {
            if l.kind() != kind {
                return Err(Error::KindMismatch(kind, l.kind()));
            }
        }
        for i in 0..5 {
            for j in (i + 1)..5 {
                if lambdas[i] == lambdas[j] {
                    return Err(Error::InvalidInput(
                        "repeated pencil parameter: the surface is singular".into(),
                    ));
                }
            }
        }
        Ok(QuarticDP { lambdas })
    }

    pub fn lambdas(&self) -> &[FieldElement; 5] {
        &self.lambdas
    }

    pub fn kind(&self) -> FieldKind {
        self.lambdas[0].kind()
    }
}

// ---------------------------------------------------------------------------
// the j-function and cross-ratios
// ---------------------------------------------------------------------------

/// 2^8 (x^2 - x + 1)^3 / (x^2 (x - 1)^2) as an exact rational function.
pub fn j_ratfunc(kind: &FieldKind) -> KElem {
    let one = FieldElement::one(kind);
    let num_core = Poly::from_coeffs(vec![
        one.clone(),
        one.negated(),
        one.clone(),
    ]); // x^2 - x + 1
    let num = num_core
        .pow(3)
        .mul_scalar(&FieldElement::from_integer(kind, 256));
    let den_core = Poly::from_coeffs(vec![FieldElement::zero(kind), one.clone()])
        .mul(&Poly::from_coeffs(vec![one.negated(), one])); // x (x - 1)
    let den = den_core.mul(&den_core);
    KElem::new(num, den).expect("denominator is nonzero")
}

/// Exact evaluation of the j-function; infinite exactly on {0, 1, oo}.
pub fn jfun(x: &P1<FieldElement>) -> P1<FieldElement> {
    match x {
        P1::Infinity => P1::Infinity,
        P1::Finite(v) => {
            let j = j_ratfunc(&v.kind());
            match j.eval(v) {
                Some(val) => P1::Finite(val),
                None => P1::Infinity,
            }
        }
    }
}

/// The cross-ratio ((a-c)(b-d)) / ((a-d)(b-c)) of four distinct points,
/// with the usual limits when one point is infinite. Distinctness makes the
/// value finite and different from 0 and 1.
pub fn cross_ratio(points: &[P1<FieldElement>; 4]) -> Result<FieldElement> {
    for i in 0..4 {
        for j in (i + 1)..4 {
            if points[i] == points[j] {
                return Err(Error::InvalidInput(
                    "cross-ratio requires four distinct points".into(),
                ));
            }
        }
    }
    let fin = |p: &P1<FieldElement>| match p {
        P1::Finite(v) => v.clone(),
        P1::Infinity => unreachable!("handled by case split"),
    };
    let value = match points {
        [P1::Infinity, b, c, d] => {
            let (b, c, d) = (fin(b), fin(c), fin(d));
            b.sub(&d).checked_div(&b.sub(&c))?
        }
        [a, P1::Infinity, c, d] => {
            let (a, c, d) = (fin(a), fin(c), fin(d));
            a.sub(&c).checked_div(&a.sub(&d))?
        }
        [a, b, P1::Infinity, d] => {
            let (a, b, d) = (fin(a), fin(b), fin(d));
            b.sub(&d).checked_div(&a.sub(&d))?
        }
        [a, b, c, P1::Infinity] => {
            let (a, b, c) = (fin(a), fin(b), fin(c));
            a.sub(&c).checked_div(&b.sub(&c))?
        }
        [a, b, c, d] => {
            let (a, b, c, d) = (fin(a), fin(b), fin(c), fin(d));
            let num = a.sub(&c).checked_mul(&b.sub(&d))?;
            let den = a.sub(&d).checked_mul(&b.sub(&c))?;
            num.checked_div(&den)?
        }
    };
    Ok(value)
}

/// j-invariant of the double cover of P^1 branched at four of five points:
/// jfun of the cross-ratio of the points other than slot l.
pub fn branch_j_points(points: &[P1<FieldElement>; 5], l: usize) -> Result<FieldElement> {
    if l > 4 {
        return Err(Error::InvalidInput("slot index must be 0..=4".into()));
    }
    let mut rest: Vec<P1<FieldElement>> = Vec::with_capacity(4);
    for (i, p) in points.iter().enumerate() {
        if i != l {
            rest.push(p.clone());
        }
    }
    let quad: [P1<FieldElement>; 4] = [
        rest[0].clone(),
        rest[1].clone(),
        rest[2].clone(),
        rest[3].clone(),
    ];
    let cr = cross_ratio(&quad)?;
    match jfun(&P1::Finite(cr)) {
        P1::Finite(v) => Ok(v),
        P1::Infinity => Err(Error::InvalidInput(
            "degenerate cross-ratio in branch data".into(),
        )),
    }
}

/// branch_j_points on the surface's own parameter list.
pub fn branch_j(s: &QuarticDP, l: usize) -> Result<FieldElement> {
    let points: [P1<FieldElement>; 5] = [
        P1::Finite(s.lambdas[0].clone()),
        P1::Finite(s.lambdas[1].clone()),
        P1::Finite(s.lambdas[2].clone()),
        P1::Finite(s.lambdas[3].clone()),
        P1::Finite(s.lambdas[4].clone()),
    ];
    branch_j_points(&points, l)
}

/// The multiset of the five branch j-values, sorted into canonical order.
pub fn jbar(s: &QuarticDP) -> Result<Vec<FieldElement>> {
    let mut out = Vec::with_capacity(5);
    for l in 0..5 {
        out.push(branch_j(s, l)?);
    }
    out.sort_by(FieldElement::cmp_total);
    Ok(out)
}

/// The five j-values attached to the normalized parameter tuple
/// (lambda, mu, 1, 0, oo).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct JTuple(pub [FieldElement; 5]);

impl JTuple {
    /// The underlying multiset, sorted.
    pub fn sorted(&self) -> Vec<FieldElement> {
        let mut v = self.0.to_vec();
        v.sort_by(FieldElement::cmp_total);
        v
    }
}

/// J(lambda, mu) = (j(mu), j(lambda), j(lambda/mu), j((lambda-1)/(mu-1)),
/// j(lambda(mu-1)/(mu(lambda-1)))), for lambda, mu outside {0, 1} and
/// distinct. All five coordinates are finite.
pub fn jmap(lambda: &FieldElement, mu: &FieldElement) -> Result<JTuple> {
    let kind = lambda.kind();
    let zero = FieldElement::zero(&kind);
    let one = FieldElement::one(&kind);
    if *lambda == zero || *lambda == one || *mu == zero || *mu == one || lambda == mu {
        return Err(Error::InvalidInput(
            "J is defined for lambda, mu outside {0, 1} and distinct".into(),
        ));
    }
    let jv = |x: FieldElement| -> Result<FieldElement> {
        match jfun(&P1::Finite(x)) {
            P1::Finite(v) => Ok(v),
            P1::Infinity => Err(Error::InvalidInput("J coordinate degenerated".into())),
        }
    };
    let lm = lambda.checked_div(mu)?;
    let l1m1 = lambda.sub(&one).checked_div(&mu.sub(&one))?;
    let last = lambda
        .checked_mul(&mu.sub(&one))?
        .checked_div(&mu.checked_mul(&lambda.sub(&one))?)?;
    Ok(JTuple([
        jv(mu.clone())?,
        jv(lambda.clone())?,
        jv(lm)?,
        jv(l1m1)?,
        jv(last)?,
    ]))
}

// ---------------------------------------------------------------------------
// the Jacobian identity of the J map
// ---------------------------------------------------------------------------

/// A polynomial in two variables: the coefficients are rational functions of
/// the first variable (kept polynomial by construction), the polynomial
/// variable is the second.
pub type BiPoly = Poly<KElem>;

/// A formal fraction of bivariate polynomials. No reduction is attempted;
/// equality of fractions is decided by cross-multiplication, which stays
/// exact while avoiding gcd blow-up in the function field.
#[derive(Debug, Clone)]
pub struct BiFrac {
    pub num: BiPoly,
    pub den: BiPoly,
}

impl BiFrac {
    /// Equality as rational functions: num1 den2 = num2 den1.
    pub fn equivalent(&self, rhs: &BiFrac) -> bool {
        !self.den.is_zero()
            && !rhs.den.is_zero()
            && self.num.mul(&rhs.den) == rhs.num.mul(&self.den)
    }

    /// Exact evaluation at a point; None where the denominator vanishes.
    pub fn eval(&self, lambda0: &FieldElement, mu0: &FieldElement) -> Option<FieldElement> {
        let mu = KElem::constant(mu0.clone());
        let n = self.num.eval(&mu).eval(lambda0)?;
        let d = self.den.eval(&mu).eval(lambda0)?;
        if d.is_zero() {
            None
        } else {
            n.checked_div(&d).ok()
        }
    }
}

/// den^deg * p(num/den) for a clearing exponent deg >= deg p.
fn subst_cleared(
    p: &Poly<FieldElement>,
    num: &BiPoly,
    den: &BiPoly,
    deg: usize,
) -> BiPoly {
    let mut acc = BiPoly::zero();
    for (i, c) in p.coeffs().iter().enumerate() {
        let term = num
            .pow(i as u32)
            .mul(&den.pow((deg - i) as u32))
            .mul_scalar(&KElem::constant(c.clone()));
        acc = acc.add(&term);
    }
    acc
}

/// d/d(first variable), coefficient-wise.
fn d_first(p: &BiPoly) -> BiPoly {
    p.map_coeffs(&|c: &KElem| c.derivative())
}

/// Quotient-rule partials of a formal fraction: numerators over den^2.
fn partials(f: &BiFrac) -> (BiPoly, BiPoly, BiPoly) {
    let n_first = d_first(&f.num)
        .mul(&f.den)
        .sub(&f.num.mul(&d_first(&f.den)));
    let n_second = f
        .num
        .derivative()
        .mul(&f.den)
        .sub(&f.num.mul(&f.den.derivative()));
    let den2 = f.den.mul(&f.den);
    (n_first, n_second, den2)
}

/// Both sides of the Jacobian identity for (j(lambda/mu), j((lambda-1)/(mu-1))):
/// the 2x2 Jacobian determinant with respect to (lambda, mu) on the left, and
/// j'(lambda/mu) j'((lambda-1)/(mu-1)) (mu - lambda) / (mu^2 (mu-1)^2) on the
/// right — as exact formal fractions in the two variables.
pub fn jacobian_sides(kind: &FieldKind) -> (BiFrac, BiFrac) {
    let one = FieldElement::one(kind);
    let j = j_ratfunc(kind);
    let (jn, jd) = (j.num().clone(), j.den().clone());
    // numerator and denominator of j' by the quotient rule, unreduced
    let dn = jn.derivative().mul(&jd).sub(&jn.mul(&jd.derivative()));
    let dd = jd.mul(&jd);
    // the two arguments as bivariate fractions
    let lam = KElem::var_like(&one);
    let u_num = BiPoly::constant(lam.clone());
    let u_den = BiPoly::monomial(KElem::constant(one.clone()), 1);
    let v_num = BiPoly::constant(lam.sub(&KElem::constant(one.clone())));
    let v_den = BiPoly::from_coeffs(vec![
        KElem::constant(one.negated()),
        KElem::constant(one.clone()),
    ]);
    let f = BiFrac {
        num: subst_cleared(&jn, &u_num, &u_den, 6),
        den: subst_cleared(&jd, &u_num, &u_den, 6),
    };
    let g = BiFrac {
        num: subst_cleared(&jn, &v_num, &v_den, 6),
        den: subst_cleared(&jd, &v_num, &v_den, 6),
    };
    let (f_l, f_m, f_d2) = partials(&f);
    let (g_l, g_m, g_d2) = partials(&g);
    let lhs = BiFrac {
        num: f_l.mul(&g_m).sub(&f_m.mul(&g_l)),
        den: f_d2.mul(&g_d2),
    };
    // j'(u), j'(v) with denominators cleared to degree 9
    let ju = BiFrac {
        num: subst_cleared(&dn, &u_num, &u_den, 9),
        den: subst_cleared(&dd, &u_num, &u_den, 9),
    };
    let jv = BiFrac {
        num: subst_cleared(&dn, &v_num, &v_den, 9),
        den: subst_cleared(&dd, &v_num, &v_den, 9),
    };
    let mu_minus_lambda = BiPoly::from_coeffs(vec![
        lam.neg(),
        KElem::constant(one.clone()),
    ]);
    let mu2 = BiPoly::monomial(KElem::constant(one.clone()), 2);
    let mu_minus_one_sq = v_den.mul(&v_den);
    let rhs = BiFrac {
        num: ju.num.mul(&jv.num).mul(&mu_minus_lambda),
        den: ju.den.mul(&jv.den).mul(&mu2).mul(&mu_minus_one_sq),
    };
    (lhs, rhs)
}

/// Verifies the Jacobian identity exactly, by cross-multiplication.
pub fn jacobian_identity_check(kind: &FieldKind) -> bool {
    let (lhs, rhs) = jacobian_sides(kind);
    lhs.equivalent(&rhs)
}

// ---------------------------------------------------------------------------
// the fiber experiment over F_q
// ---------------------------------------------------------------------------

/// The smallest residue zeta in F_q with zeta^3 = -1 and zeta != -1 (a
/// primitive 6th root of unity); needs q = 1 mod 6.
pub fn choose_zeta(q: u64) -> Result<FieldElement> {
    let kind = FieldKind::prime(q)?;
    if q % 6 != 1 {
        return Err(Error::MissingRootOfUnity { order: 6, kind });
    }
    let minus_one = FieldElement::one(&kind).negated();
    for r in 2..q {
        let z = FieldElement::from_integer(&kind, r as i64);
        if z != minus_one && z.checked_pow(3)? == minus_one {
            return Ok(z);
        }
    }
    Err(Error::MissingRootOfUnity { order: 6, kind })
}

/// The exhaustive fiber of J through (alpha, zeta) over F_q.
#[derive(Debug, Clone)]
pub struct FiberOutcome {
    pub zeta: FieldElement,
    pub matches: Vec<(FieldElement, FieldElement)>,
}

fn valid_pairs(q: u64) -> Result<Vec<(FieldElement, FieldElement)>> {
    let kind = FieldKind::prime(q)?;
    let mut points: Vec<FieldElement> = Vec::new();
    for r in 2..q {
        points.push(FieldElement::from_integer(&kind, r as i64));
    }
    let mut out = Vec::new();
    for l in &points {
        for m in &points {
            if l != m {
                out.push((l.clone(), m.clone()));
            }
        }
    }
    Ok(out)
}

/// Lists every (lambda, mu) over F_q with J(lambda, mu) = J(alpha, zeta),
/// where zeta is the canonical primitive 6th root.
pub fn fiber_search(alpha: &FieldElement, q: u64) -> Result<FiberOutcome> {
    let zeta = choose_zeta(q)?;
    let target = jmap(alpha, &zeta)?;
    let mut matches = Vec::new();
    for (l, m) in valid_pairs(q)? {
        if jmap(&l, &m)? == target {
            matches.push((l, m));
        }
    }
    Ok(FiberOutcome { zeta, matches })
}

/// Singleton-fiber statistics over all admissible alpha in F_q.
#[derive(Debug, Clone)]
pub struct FiberStats {
    pub zeta: FieldElement,
    pub total: usize,
    pub singletons: usize,
    pub first_singleton: Option<FieldElement>,
}

pub fn fiber_statistics(q: u64) -> Result<FiberStats> {
    let zeta = choose_zeta(q)?;
    let mut counts: HashMap<JTuple, usize> = HashMap::new();
    let pairs = valid_pairs(q)?;
    for (l, m) in &pairs {
        *counts.entry(jmap(l, m)?).or_insert(0) += 1;
    }
    let kind = FieldKind::prime(q)?;
    let mut total = 0usize;
    let mut singletons = 0usize;
    let mut first_singleton = None;
    for r in 2..q {
        let alpha = FieldElement::from_integer(&kind, r as i64);
        if alpha == zeta {
            continue;
        }
        total += 1;
        if counts[&jmap(&alpha, &zeta)?] == 1 {
            singletons += 1;
            if first_singleton.is_none() {
                first_singleton = Some(alpha);
            }
        }
    }
    Ok(FiberStats { zeta, total, singletons, first_singleton })
}

// ---------------------------------------------------------------------------
// the pencil of quadrics and its singular members
// ---------------------------------------------------------------------------

/// Determinant by cofactor expansion along the first row.
fn det_poly(m: &[Vec<Poly<FieldElement>>]) -> Poly<FieldElement> {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = Poly::zero();
    for (j, entry) in m[0].iter().enumerate() {
        if entry.is_zero() {
            continue;
        }
        let minor: Vec<Vec<Poly<FieldElement>>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != j)
                    .map(|(_, e)| e.clone())
                    .collect()
            })
            .collect();
        let term = entry.mul(&det_poly(&minor));
        acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

/// det(q0 - s qoo) of the diagonal pencil, computed by honest cofactor
/// expansion; equals prod_i (lambda_i - s).
pub fn pencil_det(s: &QuarticDP) -> Poly<FieldElement> {
    let kind = s.kind();
    let neg_s = Poly::from_coeffs(vec![
        FieldElement::zero(&kind),
        FieldElement::one(&kind).negated(),
    ]);
    let m: Vec<Vec<Poly<FieldElement>>> = (0..5)
        .map(|i| {
            (0..5)
                .map(|j| {
                    if i == j {
                        Poly::constant(s.lambdas[i].clone()).add(&neg_s)
                    } else {
                        Poly::zero()
                    }
                })
                .collect()
        })
        .collect();
    det_poly(&m)
}

/// Number of nonzero diagonal entries of the member at parameter t.
pub fn pencil_rank(s: &QuarticDP, t: &FieldElement) -> usize {
    s.lambdas.iter().filter(|l| *l != t).count()
}

/// A singular member of the pencil: its parameter, its unique singular
/// point, and its rank.
#[derive(Debug, Clone)]
pub struct SingularMember {
    pub param: FieldElement,
    pub point: [FieldElement; 5],
    pub rank: usize,
}

/// The five singular members: parameters are exactly the lambda_i, each of
/// rank 4 with singular point the i-th coordinate point; the five points
/// span P^4 (checked by determinant).
pub fn pencil_singular(s: &QuarticDP) -> Result<Vec<SingularMember>> {
    let kind = s.kind();
    let det = pencil_det(s);
    let (roots, cofactor) = det.roots_in_field();
    if !cofactor.is_constant() || roots.len() != 5 {
        return Err(Error::InvalidInput(
            "pencil determinant must split into the five parameters".into(),
        ));
    }
    for (root, mult) in &roots {
        if *mult != 1 || !s.lambdas.contains(root) {
            return Err(Error::InvalidInput(
                "pencil determinant roots must be the five simple parameters".into(),
            ));
        }
    }
    let mut members = Vec::with_capacity(5);
    for (l, param) in s.lambdas.iter().enumerate() {
        let rank = pencil_rank(s, param);
        if rank != 4 {
            return Err(Error::InvalidInput("singular member must have rank 4".into()));
        }
        // the kernel of diag(lambda_i - param) is the l-th coordinate axis
        let mut point = [
            FieldElement::zero(&kind),
            FieldElement::zero(&kind),
            FieldElement::zero(&kind),
            FieldElement::zero(&kind),
            FieldElement::zero(&kind),
        ];
        point[l] = FieldElement::one(&kind);
        for (i, li) in s.lambdas.iter().enumerate() {
            // the member diag(lambda_i - param) must kill the point, and no
            // other coordinate axis may lie in its kernel
            let entry = li.sub(param).checked_mul(&point[i])?;
            if !entry.is_zero() || (i != l && li.sub(param).is_zero()) {
                return Err(Error::InvalidInput("kernel verification failed".into()));
            }
        }
        members.push(SingularMember { param: param.clone(), point, rank });
    }
    // the five singular points span P^4
    let span: Vec<Vec<Poly<FieldElement>>> = members
        .iter()
        .map(|mb| mb.point.iter().map(|c| Poly::constant(c.clone())).collect())
        .collect();
    if det_poly(&span).is_zero() {
        return Err(Error::InvalidInput("singular points do not span".into()));
    }
    Ok(members)
}

// ---------------------------------------------------------------------------
// the group of diagonal involutions
// ---------------------------------------------------------------------------

/// A diagonal sign involution of P^4, i.e. a vector in {+-1}^5 modulo global
/// sign, stored canonically with + in slot 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DiagInvolution {
    mask: u8, // bit i set = sign -1 at slot i; bit 0 always clear
}

impl DiagInvolution {
    pub fn from_mask(raw: u8) -> Self {
        let mut mask = raw & 0b11111;
        if mask & 1 == 1 {
            mask ^= 0b11111;
        }
        DiagInvolution { mask }
    }

    pub fn identity() -> Self {
        DiagInvolution { mask: 0 }
    }

    /// The involution with a single -1 in slot l (up to global sign).
    pub fn sigma(l: usize) -> Self {
        Self::from_mask(1u8 << l)
    }

    pub fn is_identity(self) -> bool {
        self.mask == 0
    }

    pub fn mul(self, rhs: Self) -> Self {
        Self::from_mask(self.mask ^ rhs.mask)
    }

    /// +1 or -1 at a slot, in the canonical representative.
    pub fn sign_at(self, i: usize) -> i8 {
        if self.mask >> i & 1 == 1 {
            -1
        } else {
            1
        }
    }

    /// Dimensions (as vector spaces) of the +1 and -1 eigenspaces of the
    /// canonical representative.
    pub fn eigen_split(self) -> (usize, usize) {
        let minus = (self.mask.count_ones()) as usize;
        (5 - minus, minus)
    }

    /// Whether the fixed locus is a point plus a hyperplane (1+4 split).
    pub fn is_hyperplane_fixer(self) -> bool {
        let (p, m) = self.eigen_split();
        p.min(m) == 1
    }

    /// For a hyperplane fixer, the slot of the isolated fixed point.
    pub fn fixed_point_slot(self) -> Option<usize> {
        let (p, m) = self.eigen_split();
        if p.min(m) != 1 {
            return None;
        }
        let minority: i8 = if m == 1 { -1 } else { 1 };
        (0..5).find(|&i| self.sign_at(i) == minority)
    }
}

/// All 16 diagonal involutions in a fixed order (identity first).
pub fn gs_group() -> Vec<DiagInvolution> {
    (0..16u8).map(|m| DiagInvolution::from_mask(m << 1)).collect()
}

/// Verification report for the diagonal involution group of a surface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GsReport {
    pub order: usize,
    pub hyperplane_fixers: usize,
    pub mixed_split: usize,
    pub quadrics_preserved: bool,
    pub sigma_loci_verified: bool,
}

/// Checks the group structure against the surface: all 16 elements preserve
/// both quadrics, the five sigma_l are exactly the hyperplane fixers (fixed
/// point in slot l), and the ten others have a (3, 2) eigenspace split whose
/// pieces meet the surface in finitely many points.
pub fn gs_verify(s: &QuarticDP) -> Result<GsReport> {
    let kind = s.kind();
    let one = FieldElement::one(&kind);
    let group = gs_group();
    if group.len() != 16 {
        return Err(Error::BadGroupShape("expected 16 sign classes".into()));
    }
    let distinct: HashSet<DiagInvolution> = group.iter().copied().collect();
    if distinct.len() != 16 {
        return Err(Error::BadGroupShape("sign classes are not distinct".into()));
    }
    for a in &group {
        if !a.is_identity() && !a.mul(*a).is_identity() {
            return Err(Error::BadGroupShape("element is not an involution".into()));
        }
        for b in &group {
            if a.mul(*b) != b.mul(*a) || !distinct.contains(&a.mul(*b)) {
                return Err(Error::BadGroupShape("not an abelian group".into()));
            }
        }
    }
    // both diagonal quadrics are preserved: coefficients pick up sign^2 = 1
    let mut quadrics_preserved = true;
    let quadrics: [[FieldElement; 5]; 2] = [
        [one.clone(), one.clone(), one.clone(), one.clone(), one.clone()],
        s.lambdas.clone(),
    ];
    for g in &group {
        for q in &quadrics {
            for (i, c) in q.iter().enumerate() {
                let sign = FieldElement::from_integer(&kind, g.sign_at(i) as i64);
                let transformed = c.checked_mul(&sign.checked_mul(&sign)?)?;
                if transformed != *c {
                    quadrics_preserved = false;
                }
            }
        }
    }
    // the hyperplane fixers are exactly sigma_0..sigma_4
    let fixers: Vec<DiagInvolution> =
        group.iter().copied().filter(|g| g.is_hyperplane_fixer()).collect();
    let mut sigma_loci_verified = fixers.len() == 5;
    for l in 0..5 {
        let s_l = DiagInvolution::sigma(l);
        if !fixers.contains(&s_l) || s_l.fixed_point_slot() != Some(l) {
            sigma_loci_verified = false;
        }
    }
    let mut mixed_split = 0usize;
    for g in &group {
        if g.is_identity() || g.is_hyperplane_fixer() {
            continue;
        }
        let (p, m) = g.eigen_split();
        if p.min(m) != 2 {
            return Err(Error::BadGroupShape(
                "unexpected eigenspace split in the sign group".into(),
            ));
        }
        // each eigenspace meets the surface in finitely many points: the two
        // restricted diagonal quadrics must be non-proportional there
        for target in [1i8, -1] {
            let slots: Vec<usize> = (0..5).filter(|&i| g.sign_at(i) == target).collect();
            let mut pairwise_distinct = true;
            for a in &slots {
                for b in &slots {
                    if a < b && s.lambdas[*a] == s.lambdas[*b] {
                        pairwise_distinct = false;
                    }
                }
            }
            if !pairwise_distinct {
                return Err(Error::InvalidInput(
                    "restricted quadrics are proportional".into(),
                ));
            }
        }
        mixed_split += 1;
    }
    Ok(GsReport {
        order: group.len(),
        hyperplane_fixers: fixers.len(),
        mixed_split,
        quadrics_preserved,
        sigma_loci_verified,
    })
}

/// Fixed-curve data of the 15 non-identity diagonal involutions, in group
/// order: each hyperplane fixer sigma_l fixes the genus-1 double cover
/// branched at the other four parameters, realized by its standard fiberwise
/// normal form (x, P_l(x)/y) with P_l = prod_{i != l}(x - lambda_i); the ten
/// (3, 2)-split elements fix no curve on the surface.
pub fn gs_chart_profile(s: &QuarticDP) -> Result<Vec<NFData>> {
    gs_verify(s)?;
    let kind = s.kind();
    let one = FieldElement::one(&kind);
    let mut out = Vec::with_capacity(15);
    for g in gs_group() {
        if g.is_identity() {
            continue;
        }
        match g.fixed_point_slot() {
            Some(l) => {
                let mut p = Poly::constant(one.clone());
                for (i, li) in s.lambdas.iter().enumerate() {
                    if i != l {
                        p = p.mul(&Poly::from_coeffs(vec![li.negated(), one.clone()]));
                    }
                }
                let inv = PlaneMap::new(
                    MoebiusElt::identity_like(&one),
                    MoebiusElt::antidiagonal(KElem::from_poly(p))?,
                );
                out.push(fixed_curve(&inv)?);
            }
            None => out.push(NFData::Empty),
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// character decompositions
// ---------------------------------------------------------------------------

/// Brute-force decomposition of degree-3 forms in 4 variables under the
/// diagonal cube-root group of order 27.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FermatReport {
    pub group_order: usize,
    pub all_nonidentity_order_three: bool,
    pub preserves_cubic: bool,
    pub smooth: bool,
    pub monomial_count: usize,
    pub invariant_monomials: usize,
    pub semi_invariant_lines: usize,
    pub characters_distinct: bool,
}

pub fn fermat_cubic_check(kind: &FieldKind) -> Result<FermatReport> {
    let zeta = primitive_root_of_unity(kind, 3)?;
    // group elements diag(1, zeta^a1, zeta^a2, zeta^a3)
    let mut elements: Vec<[u32; 4]> = Vec::with_capacity(27);
    for a1 in 0..3 {
        for a2 in 0..3 {
            for a3 in 0..3 {
                elements.push([0, a1, a2, a3]);
            }
        }
    }
    let all_nonidentity_order_three = elements.iter().all(|a| {
        if a.iter().all(|&x| x == 0) {
            return true;
        }
        let double = a.map(|x| (2 * x) % 3);
        let triple = a.map(|x| (3 * x) % 3);
        double != [0; 4] && triple == [0; 4]
    });
    // the cubic sum X_i^3 is preserved: each monomial scales by zeta^{3 a_i}
    let mut preserves_cubic = true;
    for a in &elements {
        for &ai in a {
            let factor = zeta.checked_pow((3 * ai) as i64)?;
            if !factor.is_one() {
                preserves_cubic = false;
            }
        }
    }
    // gradient components 3 X_i^2: each involves a single variable with a
    // nonzero coefficient, so the only common zero is the origin
    let three = FieldElement::from_integer(kind, 3);
    let smooth = !three.is_zero();
    // all degree-3 monomials in 4 variables
    let mut monomials: Vec<[u32; 4]> = Vec::new();
    for e0 in 0..=3u32 {
        for e1 in 0..=3 - e0 {
            for e2 in 0..=3 - e0 - e1 {
                monomials.push([e0, e1, e2, 3 - e0 - e1 - e2]);
            }
        }
    }
    // character of a monomial: its eigenvalue exponent on each group element
    let character = |e: &[u32; 4]| -> Result<Vec<u32>> {
        let mut vals = Vec::with_capacity(elements.len());
        for a in &elements {
            let exp: u32 = e.iter().zip(a.iter()).map(|(x, y)| x * y).sum();
            // honest evaluation through the field element
            let eigen = zeta.checked_pow(exp as i64)?;
            let reduced = exp % 3;
            debug_assert_eq!(eigen, zeta.checked_pow(reduced as i64)?);
            vals.push(reduced);
        }
        Ok(vals)
    };
    let mut invariant = 0usize;
    let mut lines: Vec<Vec<u32>> = Vec::new();
    for e in &monomials {
        let chi = character(e)?;
        if chi.iter().all(|&c| c == 0) {
            invariant += 1;
        } else {
            lines.push(chi);
        }
    }
    let semi_invariant_lines = lines.len();
    let distinct: HashSet<Vec<u32>> = lines.iter().cloned().collect();
    Ok(FermatReport {
        group_order: elements.len(),
        all_nonidentity_order_three,
        preserves_cubic,
        smooth,
        monomial_count: monomials.len(),
        invariant_monomials: invariant,
        semi_invariant_lines,
        characters_distinct: distinct.len() == semi_invariant_lines,
    })
}

/// Brute-force decomposition of degree-2 forms in 5 variables under all 32
/// diagonal sign changes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadricReport {
    pub group_order: usize,
    pub monomial_count: usize,
    pub invariant_monomials: usize,
    pub semi_invariant_lines: usize,
    pub pair_characters_ok: bool,
}

pub fn quadric_character_check(kind: &FieldKind) -> Result<QuadricReport> {
    let one = FieldElement::one(kind);
    let minus_one = one.negated();
    let elements: Vec<u8> = (0..32u8).collect(); // bit i = sign -1 at slot i
    let mut monomials: Vec<[u32; 5]> = Vec::new();
    for i in 0..5 {
        for j in i..5 {
            let mut e = [0u32; 5];
            e[i] += 1;
            e[j] += 1;
            monomials.push(e);
        }
    }
    let scale = |mask: u8, e: &[u32; 5]| -> Result<FieldElement> {
        let mut f = one.clone();
        for (i, &ei) in e.iter().enumerate() {
            let s = if mask >> i & 1 == 1 { &minus_one } else { &one };
            f = f.checked_mul(&s.checked_pow(ei as i64)?)?;
        }
        Ok(f)
    };
    let mut invariant = 0usize;
    let mut semi = 0usize;
    let mut pair_characters_ok = true;
    for e in &monomials {
        let fixed_by_all = {
            let mut all = true;
            for &m in &elements {
                if !scale(m, e)?.is_one() {
                    all = false;
                }
            }
            all
        };
        if fixed_by_all {
            invariant += 1;
        } else {
            semi += 1;
            // the character must be sensitive to exactly the two slots of the
            // mixed monomial: flipping a single slot changes the sign exactly
            // when that slot carries an odd exponent
            let sensitive: Vec<usize> = (0..5)
                .filter(|&i| {
                    let single = 1u8 << i;
                    scale(single, e).map(|f| f == minus_one).unwrap_or(false)
                })
                .collect();
            if sensitive.len() != 2 {
                pair_characters_ok = false;
            }
            let odd_slots: Vec<usize> =
                (0..5).filter(|&i| e[i] % 2 == 1).collect();
            if sensitive != odd_slots {
                pair_characters_ok = false;
            }
        }
    }
    Ok(QuadricReport {
        group_order: elements.len(),
        monomial_count: monomials.len(),
        invariant_monomials: invariant,
        semi_invariant_lines: semi,
        pair_characters_ok,
    })
}

// ---------------------------------------------------------------------------
// divisibility tables
// ---------------------------------------------------------------------------

/// Largest r such that p^(r-1) divides 2g - 2, for g >= 2.
pub fn hurwitz_max_rank(g: u64, p: u64) -> Result<u32> {
    if g < 2 {
        return Err(Error::InvalidInput("the genus bound needs g >= 2".into()));
    }
    if !is_prime_u64(p) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    Ok(valuation(2 * g - 2, p) + 1)
}

/// One row of the Weyl-order table for blow-ups of 4..=8 points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylEntry {
    pub ell: u32,
    pub root_system: &'static str,
    pub order: u64,
    pub factorization: &'static [(u64, u32)],
}

/// The table of Weyl group orders, with their prime factorizations.
pub fn weyl_table() -> Vec<WeylEntry> {
    vec![
        WeylEntry { ell: 4, root_system: "A4", order: 120, factorization: &[(2, 3), (3, 1), (5, 1)] },
        WeylEntry { ell: 5, root_system: "D5", order: 1920, factorization: &[(2, 7), (3, 1), (5, 1)] },
        WeylEntry { ell: 6, root_system: "E6", order: 51840, factorization: &[(2, 7), (3, 4), (5, 1)] },
        WeylEntry {
            ell: 7,
            root_system: "E7",
            order: 2903040,
            factorization: &[(2, 10), (3, 4), (5, 1), (7, 1)],
        },
        WeylEntry {
            ell: 8,
            root_system: "E8",
            order: 696729600,
            factorization: &[(2, 14), (3, 5), (5, 2), (7, 1)],
        },
    ]
}

/// Whether p^r divides the Weyl group order for the given number of blown-up
/// points (4 <= ell <= 8).
pub fn weyl_table_query(ell: u32, p: u64, r: u32) -> Result<bool> {
    let table = weyl_table();
    let entry = table
        .iter()
        .find(|e| e.ell == ell)
        .ok_or_else(|| Error::InvalidInput("the table covers 4 <= ell <= 8".into()))?;
    let vp = entry
        .factorization
        .iter()
        .find(|(q, _)| *q == p)
        .map(|(_, e)| *e)
        .unwrap_or(0);
    Ok(vp >= r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qel(n: i64) -> FieldElement {
        FieldElement::from_integer(&FieldKind::Rationals, n)
    }

    fn qdp(vals: [i64; 5]) -> QuarticDP {
        QuarticDP::new(vals.map(qel)).unwrap()
    }

    #[test]
    fn jfun_oracles() {
        assert_eq!(jfun(&P1::Finite(qel(-1))), P1::Finite(qel(1728)));
        assert_eq!(jfun(&P1::Finite(qel(2))), P1::Finite(qel(1728)));
        assert_eq!(jfun(&P1::Finite(qel(0))), P1::Infinity);
        assert_eq!(jfun(&P1::Finite(qel(1))), P1::Infinity);
        assert_eq!(jfun(&P1::Infinity), P1::Infinity);
        // over F_7 the primitive 6th roots kill the numerator
        let f7 = FieldKind::prime(7).unwrap();
        let three = FieldElement::from_integer(&f7, 3);
        assert_eq!(jfun(&P1::Finite(three)), P1::Finite(FieldElement::zero(&f7)));
    }

    #[test]
    fn jfun_six_symmetries() {
        // jfun o sigma = jfun for the six homographies of the cross-ratio
        // group, as exact identities in k(x)
        let kind = FieldKind::Rationals;
        let j = j_ratfunc(&kind);
        let x = KElem::var_like(&qel(0));
        let one = KElem::constant(qel(1));
        let args = [
            x.clone(),
            x.inv().unwrap(),
            one.sub(&x),
            one.sub(&x).inv().unwrap(),
            x.sub(&one).mul(&x.inv().unwrap()),
            x.mul(&x.sub(&one).inv().unwrap()),
        ];
        for a in &args {
            assert_eq!(j.compose(a).unwrap(), j, "failed at {a:?}");
        }
    }

    #[test]
    fn cross_ratio_convention() {
        // (x, 1, 0, oo) -> x under the fixed convention
        let pts = [
            P1::Finite(qel(5)),
            P1::Finite(qel(1)),
            P1::Finite(qel(0)),
            P1::Infinity,
        ];
        assert_eq!(cross_ratio(&pts).unwrap(), qel(5));
        // swap law: (1,0,oo,x) and (0,1,oo,x) give reciprocal values
        let a = cross_ratio(&[
            P1::Finite(qel(1)),
            P1::Finite(qel(0)),
            P1::Infinity,
            P1::Finite(qel(5)),
        ])
        .unwrap();
        let b = cross_ratio(&[
            P1::Finite(qel(0)),
            P1::Finite(qel(1)),
            P1::Infinity,
            P1::Finite(qel(5)),
        ])
        .unwrap();
        assert_eq!(a.checked_mul(&b).unwrap(), qel(1));
        // repeated points are rejected
        assert!(cross_ratio(&[
            P1::Finite(qel(1)),
            P1::Finite(qel(1)),
            P1::Infinity,
            P1::Finite(qel(5)),
        ])
        .is_err());
    }

    #[test]
    fn cross_ratio_permutations_fix_jfun() {
        let pts = [qel(3), qel(7), qel(-2), qel(11)];
        let base = jfun(&P1::Finite(
            cross_ratio(&pts.clone().map(P1::Finite)).unwrap(),
        ));
        // all 24 orderings give the same j
        let mut idx = [0usize, 1, 2, 3];
        let mut orderings = Vec::new();
        permutations(&mut idx, 0, &mut orderings);
        assert_eq!(orderings.len(), 24);
        for ord in orderings {
            let arranged = [
                P1::Finite(pts[ord[0]].clone()),
                P1::Finite(pts[ord[1]].clone()),
                P1::Finite(pts[ord[2]].clone()),
                P1::Finite(pts[ord[3]].clone()),
            ];
            assert_eq!(jfun(&P1::Finite(cross_ratio(&arranged).unwrap())), base);
        }
    }

    fn permutations(idx: &mut [usize; 4], k: usize, out: &mut Vec<[usize; 4]>) {
        if k == 4 {
            out.push(*idx);
            return;
        }
        for i in k..4 {
            idx.swap(k, i);
            permutations(idx, k + 1, out);
            idx.swap(k, i);
        }
    }

    #[test]
    fn branch_j_oracles() {
        // harmonic quadruple (0, 1, 2, 2/3) has cross-ratio -1, hence j = 1728
        let two_thirds = qel(2).checked_div(&qel(3)).unwrap();
        let pts = [
            P1::Finite(qel(0)),
            P1::Finite(qel(1)),
            P1::Finite(qel(2)),
            P1::Finite(two_thirds),
        ];
        assert_eq!(cross_ratio(&pts).unwrap(), qel(-1));
        let five = [
            P1::Finite(qel(0)),
            P1::Finite(qel(1)),
            P1::Finite(qel(2)),
            P1::Finite(qel(2).checked_div(&qel(3)).unwrap()),
            P1::Finite(qel(9)),
        ];
        assert_eq!(branch_j_points(&five, 4).unwrap(), qel(1728));
        // two evaluation routes agree on a concrete surface
        let s = qdp([0, 1, 2, 3, 4]);
        for l in 0..5 {
            let direct = branch_j(&s, l).unwrap();
            // reorder the remaining points: j must be unchanged
            let mut rest: Vec<P1<FieldElement>> = (0..5)
                .filter(|&i| i != l)
                .map(|i| P1::Finite(s.lambdas()[i].clone()))
                .collect();
            rest.rotate_left(2);
            rest.swap(0, 1);
            let quad = [rest[0].clone(), rest[1].clone(), rest[2].clone(), rest[3].clone()];
            assert_eq!(
                jfun(&P1::Finite(cross_ratio(&quad).unwrap())),
                P1::Finite(direct)
            );
        }
    }

    #[test]
    fn jmap_matches_branch_j_slotwise() {
        let lambda = qel(3);
        let mu = qel(7);
        let tuple = jmap(&lambda, &mu).unwrap();
        let pts = [
            P1::Finite(lambda.clone()),
            P1::Finite(mu.clone()),
            P1::Finite(qel(1)),
            P1::Finite(qel(0)),
            P1::Infinity,
        ];
        for l in 0..5 {
            assert_eq!(tuple.0[l], branch_j_points(&pts, l).unwrap(), "slot {l}");
        }
        // swapping the arguments swaps the first two coordinates
        let swapped = jmap(&mu, &lambda).unwrap();
        assert_eq!(swapped.0[0], tuple.0[1]);
        assert_eq!(swapped.0[1], tuple.0[0]);
        assert_eq!(swapped.0[2], tuple.0[2]);
        assert_eq!(swapped.0[3], tuple.0[3]);
        assert_eq!(swapped.0[4], tuple.0[4]);
        // preconditions
        assert!(jmap(&qel(0), &mu).is_err());
        assert!(jmap(&lambda, &qel(1)).is_err());
        assert!(jmap(&lambda, &lambda).is_err());
    }

    #[test]
    fn jacobian_identity_holds_and_mutates_false() {
        let kind = FieldKind::Rationals;
        assert!(jacobian_identity_check(&kind));
        let (lhs, rhs) = jacobian_sides(&kind);
        let two = KElem::constant(qel(2));
        let doubled = BiFrac { num: rhs.num.mul_scalar(&two), den: rhs.den.clone() };
        assert!(!lhs.equivalent(&doubled));
    }

    #[test]
    fn jacobian_sides_agree_pointwise_over_prime_field() {
        let kind = FieldKind::prime(101).unwrap();
        let (lhs, rhs) = jacobian_sides(&kind);
        let mut checked = 0;
        for a in 2..40u64 {
            for b in 2..12u64 {
                let l0 = FieldElement::from_integer(&kind, a as i64);
                let m0 = FieldElement::from_integer(&kind, b as i64);
                if l0 == m0 {
                    continue;
                }
                if let (Some(x), Some(y)) = (lhs.eval(&l0, &m0), rhs.eval(&l0, &m0)) {
                    assert_eq!(x, y);
                    checked += 1;
                }
            }
        }
        assert!(checked > 200, "only {checked} pole-free points");
    }

    #[test]
    fn zeta_selection_and_fiber_contains_base_point() {
        let zeta = choose_zeta(31).unwrap();
        let kind = FieldKind::prime(31).unwrap();
        let minus_one = FieldElement::one(&kind).negated();
        assert_eq!(zeta.checked_pow(3).unwrap(), minus_one);
        assert_ne!(zeta, minus_one);
        // q = 31: zeta must be the smallest such residue
        for r in 2..31u64 {
            let z = FieldElement::from_integer(&kind, r as i64);
            if z.checked_pow(3).unwrap() == minus_one && z != minus_one {
                assert_eq!(z, zeta);
                break;
            }
        }
        assert!(choose_zeta(11).is_err()); // 11 % 6 != 1
        let alpha = FieldElement::from_integer(&kind, 5);
        let fiber = fiber_search(&alpha, 31).unwrap();
        assert!(fiber.matches.contains(&(alpha, fiber.zeta.clone())));
    }

    #[test]
    fn fiber_statistics_find_singletons_over_f31() {
        let stats = fiber_statistics(31).unwrap();
        assert!(stats.first_singleton.is_some());
        assert!(stats.singletons >= 1, "{stats:?}");
        // the reported singleton really is one
        let alpha = stats.first_singleton.clone().unwrap();
        let fiber = fiber_search(&alpha, 31).unwrap();
        assert_eq!(fiber.matches.len(), 1);
    }

    #[test]
    fn pencil_singular_members() {
        let s = qdp([0, 1, 2, 3, 4]);
        // dual-route determinant: cofactor expansion equals the product form
        let det = pencil_det(&s);
        let kind = FieldKind::Rationals;
        let one = FieldElement::one(&kind);
        let mut product = Poly::constant(one.clone());
        for l in s.lambdas() {
            product = product.mul(&Poly::from_coeffs(vec![l.clone(), one.negated()]));
        }
        assert_eq!(det, product);
        let members = pencil_singular(&s).unwrap();
        assert_eq!(members.len(), 5);
        for (l, m) in members.iter().enumerate() {
            assert_eq!(m.param, s.lambdas()[l]);
            assert_eq!(m.rank, 4);
            for (i, c) in m.point.iter().enumerate() {
                assert_eq!(c.is_zero(), i != l);
            }
        }
        // generic parameter: rank 5
        assert_eq!(pencil_rank(&s, &qel(7)), 5);
        assert_eq!(pencil_rank(&s, &qel(2)), 4);
    }

    #[test]
    fn gs_group_structure() {
        let s = qdp([0, 1, 2, 3, 4]);
        let report = gs_verify(&s).unwrap();
        assert_eq!(
            report,
            GsReport {
                order: 16,
                hyperplane_fixers: 5,
                mixed_split: 10,
                quadrics_preserved: true,
                sigma_loci_verified: true,
            }
        );
        // canonical representatives: slot 0 is always +
        for g in gs_group() {
            assert_eq!(g.sign_at(0), 1);
        }
        // sigma_0 is the global-sign flip of (-,+,+,+,+)
        assert_eq!(DiagInvolution::sigma(0).eigen_split(), (1, 4));
        assert_eq!(DiagInvolution::sigma(2).eigen_split(), (4, 1));
        assert_eq!(DiagInvolution::sigma(0).fixed_point_slot(), Some(0));
        assert_eq!(DiagInvolution::sigma(3).fixed_point_slot(), Some(3));
        // product of all five sigmas is the identity in PGL_5
        let prod = (0..5).fold(DiagInvolution::identity(), |acc, l| {
            acc.mul(DiagInvolution::sigma(l))
        });
        assert!(prod.is_identity());
    }

    #[test]
    fn gs_chart_profile_has_five_elliptic_entries() {
        let s = qdp([0, 1, 2, 3, 4]);
        let profile = gs_chart_profile(&s).unwrap();
        assert_eq!(profile.len(), 15);
        let curves: Vec<&NFData> =
            profile.iter().filter(|d| !matches!(d, NFData::Empty)).collect();
        assert_eq!(curves.len(), 5);
        for c in curves {
            assert_eq!(c.genus(), 1);
        }
    }

    #[test]
    fn jbar_invariance() {
        let s = qdp([0, 1, 2, 3, 4]);
        let base = jbar(&s).unwrap();
        // a Moebius move on all five parameters
        let moved: Vec<FieldElement> = s
            .lambdas()
            .iter()
            .map(|l| {
                // l -> (2l + 1)/(l + 7): no parameter hits the pole
                let num = qel(2).checked_mul(l).unwrap().add(&qel(1));
                let den = l.add(&qel(7));
                num.checked_div(&den).unwrap()
            })
            .collect();
        let s2 = QuarticDP::new([
            moved[0].clone(),
            moved[1].clone(),
            moved[2].clone(),
            moved[3].clone(),
            moved[4].clone(),
        ])
        .unwrap();
        assert_eq!(jbar(&s2).unwrap(), base);
        // permutations do not change the multiset
        let s3 = qdp([4, 2, 0, 3, 1]);
        assert_eq!(jbar(&s3).unwrap(), base);
        // a genuinely different surface separates
        let s4 = qdp([0, 1, 2, 3, 5]);
        assert_ne!(jbar(&s4).unwrap(), base);
    }

    #[test]
    fn fermat_cubic_report() {
        for kind in [FieldKind::cyclotomic(3).unwrap(), FieldKind::prime(7).unwrap()] {
            let report = fermat_cubic_check(&kind).unwrap();
            assert_eq!(
                report,
                FermatReport {
                    group_order: 27,
                    all_nonidentity_order_three: true,
                    preserves_cubic: true,
                    smooth: true,
                    monomial_count: 20,
                    invariant_monomials: 4,
                    semi_invariant_lines: 16,
                    characters_distinct: true,
                }
            );
        }
        // fields without a cube root are rejected
        assert!(fermat_cubic_check(&FieldKind::Rationals).is_err());
    }

    #[test]
    fn quadric_character_report() {
        let report = quadric_character_check(&FieldKind::Rationals).unwrap();
        assert_eq!(
            report,
            QuadricReport {
                group_order: 32,
                monomial_count: 15,
                invariant_monomials: 5,
                semi_invariant_lines: 10,
                pair_characters_ok: true,
            }
        );
    }

    #[test]
    fn hurwitz_bounds() {
        assert_eq!(hurwitz_max_rank(3, 2).unwrap(), 3);
        assert_eq!(hurwitz_max_rank(4, 3).unwrap(), 2);
        for p in [5, 7, 11] {
            assert_eq!(hurwitz_max_rank(4, p).unwrap(), 1);
        }
        assert!(hurwitz_max_rank(1, 2).is_err());
        assert!(hurwitz_max_rank(3, 4).is_err());
        // always at least 1, and exactly 1 once p exceeds 2g - 2
        for g in 2..12u64 {
            for p in [2u64, 3, 5, 7, 11, 13, 23] {
                let r = hurwitz_max_rank(g, p).unwrap();
                assert!(r >= 1);
                if p > 2 * g - 2 {
                    assert_eq!(r, 1);
                }
            }
        }
    }

    #[test]
    fn weyl_orders_and_queries() {
        for entry in weyl_table() {
            let recomputed: u64 = entry
                .factorization
                .iter()
                .map(|(p, e)| p.pow(*e))
                .product();
            assert_eq!(recomputed, entry.order, "{}", entry.root_system);
        }
        assert_eq!(weyl_table()[2].order, 51840);
        assert!(weyl_table_query(8, 5, 2).unwrap());
        for ell in 4..=7 {
            assert!(!weyl_table_query(ell, 5, 2).unwrap());
        }
        assert!(!weyl_table_query(4, 2, 4).unwrap());
        assert!(weyl_table_query(4, 2, 3).unwrap());
        assert!(weyl_table_query(3, 2, 1).is_err());
    }

    #[test]
    fn quartic_dp_validation() {
        assert!(QuarticDP::new([qel(0), qel(1), qel(2), qel(3), qel(3)]).is_err());
    }
}
