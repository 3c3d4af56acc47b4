//! Dense univariate polynomials over any `Scalar`, plus exact root finding
//! over the supported base fields.
//!
//! Coefficients are stored ascending with a nonzero leading coefficient;
//! the empty vector is the zero polynomial.

use crate::error::{Error, Result};
use crate::field::{field_sqrt, FieldElement, FieldKind, Scalar};
use crate::intfactor;
use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{Signed, Zero};
use std::fmt;

/// `c * k` for a small nonnegative integer `k`, by double-and-add.
pub(crate) fn int_mul<C: Scalar>(c: &C, k: u64) -> C {
    let mut acc = c.zero_like();
    let mut step = c.clone();
    let mut k = k;
    while k > 0 {
        if k & 1 == 1 {
            acc = acc.add(&step);
        }
        step = step.add(&step.clone());
        k >>= 1;
    }
    acc
}

/// A univariate polynomial with exact coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly<C: Scalar> {
    coeffs: Vec<C>,
}

impl<C: Scalar> Poly<C> {
    pub fn from_coeffs(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: C) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The monomial `c * x^k`.
    pub fn monomial(c: C, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![c.zero_like(); k + 1];
        coeffs[k] = c;
        Poly { coeffs }
    }

    /// The variable itself, with coefficient context taken from `witness`.
    pub fn var_like(witness: &C) -> Self {
        Poly { coeffs: vec![witness.zero_like(), witness.one_like()] }
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&C> {
        self.coeffs.last()
    }

    pub fn coeff_cloned(&self, i: usize) -> Option<C> {
        self.coeffs.get(i).cloned()
    }

    /// Coefficient of x^i, with a zero manufactured from `witness` when the
    /// index is beyond the degree.
    pub fn coeff_or_zero(&self, i: usize, witness: &C) -> C {
        self.coeffs.get(i).cloned().unwrap_or_else(|| witness.zero_like())
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = Vec::with_capacity(self.coeffs.len().max(rhs.coeffs.len()));
        for i in 0..self.coeffs.len().max(rhs.coeffs.len()) {
            let t = match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                (Some(a), Some(b)) => a.add(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            };
            out.push(t);
        }
        Self::from_coeffs(out)
    }

    pub fn neg(&self) -> Self {
        Poly { coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let zero = self.coeffs[0].zero_like();
        let mut out = vec![zero; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::from_coeffs(out)
    }

    pub fn mul_scalar(&self, c: &C) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    /// Multiply by x^k.
    pub fn mul_xpow(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![self.coeffs[0].zero_like(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    pub fn pow(&self, e: u32) -> Self {
        if e == 0 {
            let one = self
                .coeffs
                .first()
                .map(|c| c.one_like())
                .expect("cannot take zero-th power of zero polynomial without context");
            return Self::constant(one);
        }
        let mut acc = self.clone();
        for _ in 1..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Euclidean division: `self = q * den + r`, deg r < deg den.
    pub fn divmod(&self, den: &Self) -> Result<(Self, Self)> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let dd = den.coeffs.len() - 1;
        let lead_inv = den.coeffs[dd].inv().expect("leading coefficient is invertible");
        let mut rem = self.clone();
        if rem.coeffs.len() <= dd {
            return Ok((Self::zero(), rem));
        }
        let zero = den.coeffs[dd].zero_like();
        let mut quo = vec![zero; rem.coeffs.len() - dd];
        while rem.coeffs.len() > dd {
            let k = rem.coeffs.len() - 1 - dd;
            let c = rem.coeffs.last().unwrap().mul(&lead_inv);
            for (i, dc) in den.coeffs.iter().enumerate() {
                let t = dc.mul(&c);
                rem.coeffs[k + i] = rem.coeffs[k + i].sub(&t);
            }
            while rem.coeffs.last().is_some_and(|c| c.is_zero()) {
                rem.coeffs.pop();
            }
            quo[k] = c;
            if rem.coeffs.len() <= dd {
                break;
            }
        }
        Ok((Self::from_coeffs(quo), rem))
    }

    /// Exact division; error if the remainder is nonzero.
    pub fn div_exact(&self, den: &Self) -> Result<Self> {
        let (q, r) = self.divmod(den)?;
        if !r.is_zero() {
            return Err(Error::InvalidInput("polynomial division is not exact".into()));
        }
        Ok(q)
    }

    pub fn monic(&self) -> Option<Self> {
        let lc = self.leading_coeff()?;
        let inv = lc.inv()?;
        Some(self.mul_scalar(&inv))
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, rhs: &Self) -> Self {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let (_, r) = a.divmod(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic().unwrap_or(a)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let out: Vec<C> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| int_mul(c, i as u64))
            .collect();
        Self::from_coeffs(out)
    }

    pub fn eval(&self, x: &C) -> C {
        let mut acc = x.zero_like();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// Map coefficients into another scalar domain and evaluate there
    /// (Horner). The zero of the target domain is taken from `x`.
    pub fn eval_map<D: Scalar>(&self, embed: &impl Fn(&C) -> D, x: &D) -> D {
        let mut acc = x.zero_like();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(&embed(c));
        }
        acc
    }

    pub fn map_coeffs<D: Scalar>(&self, embed: &impl Fn(&C) -> D) -> Poly<D> {
        Poly::from_coeffs(self.coeffs.iter().map(embed).collect())
    }

    /// The reciprocal polynomial x^deg * f(1/x).
    pub fn reverse(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Self::from_coeffs(coeffs)
    }

    /// f is self-reciprocal when x^deg * f(1/x) = f.
    pub fn is_self_reciprocal(&self) -> bool {
        !self.is_zero() && *self == self.reverse()
    }

    /// Multiplicity of the root 0.
    pub fn trailing_zero_count(&self) -> usize {
        self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0)
    }

    /// Exact division by x^k.
    pub fn shift_down(&self, k: usize) -> Self {
        assert!(self.trailing_zero_count() >= k || self.is_zero());
        Poly { coeffs: self.coeffs.iter().skip(k).cloned().collect() }
    }

    /// If only even powers occur, the polynomial g with f(x) = g(x^2).
    pub fn even_part(&self) -> Option<Self> {
        if self.coeffs.iter().enumerate().any(|(i, c)| i % 2 == 1 && !c.is_zero()) {
            return None;
        }
        Some(Self::from_coeffs(self.coeffs.iter().step_by(2).cloned().collect()))
    }

    /// Squarefree decomposition (Yun): returns the leading unit and monic
    /// factors with multiplicities, sorted by multiplicity. The product is
    /// verified; in small positive characteristic the recurrence can break
    /// down and this reports `CharacteristicTooSmall` instead of lying.
    pub fn squarefree_decomposition(&self) -> Result<(C, Vec<(Self, u32)>)> {
        if self.is_zero() {
            return Err(Error::InvalidInput("zero polynomial has no squarefree decomposition".into()));
        }
        let unit = self.leading_coeff().unwrap().clone();
        let f = self.monic().expect("field coefficients");
        if f.is_constant() {
            return Ok((unit, Vec::new()));
        }
        let too_small = || Error::CharacteristicTooSmall { needed: self.degree().unwrap_or(0) as u64 };
        let fp = f.derivative();
        if fp.is_zero() {
            return Err(too_small());
        }
        let a0 = f.gcd(&fp);
        let mut b = f.div_exact(&a0).map_err(|_| too_small())?;
        let mut d = fp.div_exact(&a0).map_err(|_| too_small())?.sub(&b.derivative());
        let mut factors: Vec<(Self, u32)> = Vec::new();
        let mut i = 1u32;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&d);
            let bn = b.div_exact(&a).map_err(|_| too_small())?;
            let c = d.div_exact(&a).map_err(|_| too_small())?;
            d = c.sub(&bn.derivative());
            b = bn;
            if a.degree().unwrap_or(0) > 0 {
                factors.push((a, i));
            }
            i += 1;
            if i > self.degree().unwrap_or(0) as u32 + 1 {
                return Err(too_small());
            }
        }
        // verify: unit * prod a_i^i == self
        let mut check = Self::constant(unit.clone());
        for (a, m) in &factors {
            check = check.mul(&a.pow(*m));
        }
        if check != *self {
            return Err(too_small());
        }
        Ok((unit, factors))
    }

    /// For a self-reciprocal f of even degree 2m, the unique T of degree m
    /// with f(x) = x^m * T(x + 1/x).
    ///
    /// Uses s_m + sum s_{m+i} (x^i + x^-i) and the recursion
    /// p_1 = w, p_2 = w^2 - 2, p_{i+1} = w * p_i - p_{i-1} for x^i + x^-i.
    pub fn palindromic_reduce(&self) -> Result<Self> {
        if !self.is_self_reciprocal() || self.degree().unwrap_or(1) % 2 != 0 {
            return Err(Error::NotSelfReciprocal);
        }
        let m = self.degree().unwrap() / 2;
        let witness = &self.coeffs[0];
        let w = Self::var_like(witness);
        let two = Self::constant(int_mul(&witness.one_like(), 2));
        let mut acc = Self::constant(self.coeff_or_zero(m, witness));
        let mut p_prev = two; // p_0 = 2
        let mut p_cur = w.clone(); // p_1 = w
        for i in 1..=m {
            let s = self.coeff_or_zero(m + i, witness);
            acc = acc.add(&p_cur.mul_scalar(&s));
            let next = w.mul(&p_cur).sub(&p_prev);
            p_prev = p_cur;
            p_cur = next;
        }
        Ok(acc)
    }
}

// ---------------------------------------------------------------------------
// exact roots over the supported base fields
// ---------------------------------------------------------------------------

impl Poly<FieldElement> {
    /// The common base field of the coefficients, if any coefficient exists.
    pub fn kind(&self) -> Option<FieldKind> {
        self.coeffs.first().map(|c| c.kind())
    }

    fn deflate_at(&self, root: &FieldElement) -> Option<Self> {
        let lin = Poly::from_coeffs(vec![root.negated(), root.one_like()]);
        let (q, r) = self.divmod(&lin).ok()?;
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    fn extract_root(&mut self, root: &FieldElement, out: &mut Vec<(FieldElement, u32)>) {
        let mut mult = 0u32;
        while let Some(q) = self.deflate_at(root) {
            *self = q;
            mult += 1;
        }
        if mult > 0 {
            out.push((root.clone(), mult));
        }
    }

    /// All roots in the base field, with multiplicities, and the rootless
    /// cofactor (a constant exactly when the polynomial splits).
    ///
    /// Complete over Q (rational root theorem with full integer
    /// factorization) and over F_q (exhaustive scan). Over cyclotomic fields
    /// it finds rational roots, roots of the form r*zeta^j, and solves the
    /// residual quadratic when the discriminant has a constructible square
    /// root; anything further is left in the cofactor.
    pub fn roots_in_field(&self) -> (Vec<(FieldElement, u32)>, Self) {
        let mut out: Vec<(FieldElement, u32)> = Vec::new();
        if self.is_zero() || self.is_constant() {
            return (out, self.clone());
        }
        let kind = self.kind().unwrap();
        let mut f = self.clone();
        // root 0 first
        let zero = FieldElement::zero(&kind);
        f.extract_root(&zero, &mut out);
        match kind {
            FieldKind::Rationals => {
                for cand in rational_root_candidates(&f) {
                    if f.is_constant() {
                        break;
                    }
                    f.extract_root(&cand, &mut out);
                }
            }
            FieldKind::Prime(q) => {
                for x in 0..q {
                    if f.is_constant() {
                        break;
                    }
                    f.extract_root(&FieldElement::Prime { q, val: x }, &mut out);
                }
            }
            FieldKind::Cyclotomic(n) => {
                // rational candidates common to all coordinate polynomials
                for cand in cyclotomic_rational_candidates(&f) {
                    if f.is_constant() {
                        break;
                    }
                    f.extract_root(&cand, &mut out);
                }
                // monomial roots +- r * zeta^j with the same rational candidates
                let zeta = FieldElement::zeta(&kind).unwrap();
                let mut pw = FieldElement::one(&kind);
                for _ in 0..n {
                    pw = pw.checked_mul(&zeta).unwrap();
                    if f.is_constant() {
                        break;
                    }
                    let twisted: Vec<FieldElement> = cyclotomic_rational_candidates(&twist_by(&f, &pw));
                    for r in twisted {
                        let cand = r.checked_mul(&pw).unwrap();
                        f.extract_root(&cand, &mut out);
                    }
                }
                // residual quadratics and linears via closed forms
                loop {
                    match f.degree() {
                        Some(1) => {
                            let root = f.coeffs[0].negated().checked_div(&f.coeffs[1]).unwrap();
                            f.extract_root(&root, &mut out);
                        }
                        Some(2) => {
                            let (a, b, c) = (f.coeffs[2].clone(), f.coeffs[1].clone(), f.coeffs[0].clone());
                            let four_ac = int_mul(&a.checked_mul(&c).unwrap(), 4);
                            let disc = b.checked_mul(&b).unwrap().checked_sub(&four_ac).unwrap();
                            match field_sqrt(&disc) {
                                Some(s) => {
                                    let two_a = int_mul(&a, 2);
                                    let r1 = b.negated().checked_add(&s).unwrap().checked_div(&two_a).unwrap();
                                    f.extract_root(&r1, &mut out);
                                    if let Some(1) = f.degree() {
                                        continue;
                                    }
                                    break;
                                }
                                None => break,
                            }
                        }
                        _ => break,
                    }
                }
            }
        }
        out.sort_by(|a, b| a.0.cmp_total(&b.0));
        (out, f)
    }
}

/// Candidate rational roots of a polynomial over Q, by the rational root
/// theorem applied to the integer-cleared form.
fn rational_root_candidates(f: &Poly<FieldElement>) -> Vec<FieldElement> {
    let mut lcm = BigInt::from(1);
    for c in f.coeffs() {
        if let FieldElement::Rational(r) = c {
            lcm = num::integer::lcm(lcm, r.denom().clone());
        }
    }
    let ints: Vec<BigInt> = f
        .coeffs()
        .iter()
        .map(|c| match c {
            FieldElement::Rational(r) => {
                (r * BigRational::from(lcm.clone())).to_integer()
            }
            _ => unreachable!(),
        })
        .collect();
    let a0 = ints.iter().find(|c| !c.is_zero());
    let an = ints.last();
    let (a0, an) = match (a0, an) {
        (Some(a), Some(b)) => (a.clone(), b.clone()),
        _ => return Vec::new(),
    };
    let mut cands = Vec::new();
    for p in intfactor::divisors(&a0) {
        for q in intfactor::divisors(&an) {
            let r = BigRational::new(BigInt::from(p.clone()), BigInt::from(q.clone()));
            cands.push(FieldElement::Rational(r.clone()));
            cands.push(FieldElement::Rational(-r));
        }
    }
    cands.sort();
    cands.dedup();
    cands
}

/// Rational values r that could be roots of a cyclotomic-coefficient
/// polynomial: roots of the gcd of its rational coordinate polynomials.
fn cyclotomic_rational_candidates(f: &Poly<FieldElement>) -> Vec<FieldElement> {
    let dim = f
        .coeffs()
        .iter()
        .map(|c| match c {
            FieldElement::Cyclotomic { coeffs, .. } => coeffs.len(),
            _ => 0,
        })
        .max()
        .unwrap_or(0);
    let mut g = Poly::<FieldElement>::zero();
    for j in 0..dim {
        let comp: Vec<FieldElement> = f
            .coeffs()
            .iter()
            .map(|c| match c {
                FieldElement::Cyclotomic { coeffs, .. } => FieldElement::Rational(
                    coeffs.get(j).cloned().unwrap_or_else(BigRational::zero),
                ),
                _ => unreachable!(),
            })
            .collect();
        g = g.gcd(&Poly::from_coeffs(comp));
        if g.is_constant() && !g.is_zero() {
            return Vec::new();
        }
    }
    let kind = f.kind().unwrap();
    let (roots, _) = g.roots_in_field();
    roots
        .into_iter()
        .map(|(r, _)| match r {
            FieldElement::Rational(v) => FieldElement::from_rational(&kind, &v).unwrap(),
            _ => unreachable!(),
        })
        .collect()
}

/// f(pw * x) as a polynomial, used to look for monomial roots.
fn twist_by(f: &Poly<FieldElement>, pw: &FieldElement) -> Poly<FieldElement> {
    let mut scale = pw.one_like();
    let coeffs: Vec<FieldElement> = f
        .coeffs()
        .iter()
        .map(|c| {
            let t = c.checked_mul(&scale).unwrap();
            scale = scale.checked_mul(pw).unwrap();
            t
        })
        .collect();
    Poly::from_coeffs(coeffs)
}

// ---------------------------------------------------------------------------
// display
// ---------------------------------------------------------------------------

/// How a coefficient renders inside a polynomial term: magnitude text,
/// whether a leading minus was factored out, and whether the text is atomic
/// (no parentheses needed when multiplied by a power of the variable).
pub trait CoeffDisplay {
    fn coeff_text(&self) -> (String, bool, bool);
}

impl CoeffDisplay for FieldElement {
    fn coeff_text(&self) -> (String, bool, bool) {
        match self {
            FieldElement::Rational(r) => (r.abs().to_string(), r.is_negative(), true),
            FieldElement::Prime { val, .. } => (val.to_string(), false, true),
            FieldElement::Cyclotomic { coeffs, .. } => {
                let nonzero = coeffs.iter().filter(|c| !c.is_zero()).count();
                if nonzero == 0 {
                    return ("0".into(), false, true);
                }
                let s = self.to_string();
                if nonzero == 1 && !s.starts_with('-') {
                    (s, false, true)
                } else if nonzero == 1 {
                    (s[1..].to_string(), true, true)
                } else {
                    (s, false, false)
                }
            }
        }
    }
}

/// Renders `f` with the given variable name, reparseable by the expression
/// grammar (explicit `*`, parenthesized compound coefficients).
pub fn poly_to_string<C: Scalar + CoeffDisplay>(f: &Poly<C>, var: &str) -> String {
    if f.is_zero() {
        return "0".into();
    }
    let mut s = String::new();
    let mut first = true;
    for (i, c) in f.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let (text, negative, atom) = c.coeff_text();
        if first {
            if negative {
                s.push('-');
            }
            first = false;
        } else if negative {
            s.push_str(" - ");
        } else {
            s.push_str(" + ");
        }
        let is_unit_text = text == "1";
        match i {
            0 => {
                if atom {
                    s.push_str(&text);
                } else {
                    s.push_str(&format!("({text})"));
                }
            }
            _ => {
                if !is_unit_text {
                    if atom {
                        s.push_str(&format!("{text}*"));
                    } else {
                        s.push_str(&format!("({text})*"));
                    }
                }
                s.push_str(var);
                if i > 1 {
                    s.push_str(&format!("^{i}"));
                }
            }
        }
    }
    s
}

impl<C: Scalar + CoeffDisplay> fmt::Display for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", poly_to_string(self, "x"))
    }
}
