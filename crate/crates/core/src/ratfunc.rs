//! Rational functions N/D in one variable over any `Scalar`, kept reduced
//! with a monic denominator, plus exact p-th roots and the rewriting of
//! doubly-invariant functions in terms of s = t^2 + 1/t^2.

use crate::error::{Error, Result};
use crate::field::{field_nth_root, FieldElement, Scalar};
use crate::poly::{poly_to_string, CoeffDisplay, Poly};
use std::fmt;

/// A reduced rational function; the denominator is monic and nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatFunc<C: Scalar> {
    num: Poly<C>,
    den: Poly<C>,
}

/// Elements of the function field k(t).
pub type KElem = RatFunc<FieldElement>;

impl<C: Scalar> RatFunc<C> {
    pub fn new(num: Poly<C>, den: Poly<C>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let g = num.gcd(&den);
        let (num, den) = if g.degree().unwrap_or(0) > 0 {
            (num.div_exact(&g)?, den.div_exact(&g)?)
        } else {
            (num, den)
        };
        let lc_inv = den.leading_coeff().unwrap().inv().expect("nonzero leading coefficient");
        Ok(RatFunc { num: num.mul_scalar(&lc_inv), den: den.mul_scalar(&lc_inv) })
    }

    pub fn from_poly(p: Poly<C>) -> Self {
        let one = p
            .leading_coeff()
            .map(|c| c.one_like())
            .unwrap_or_else(|| panic!("zero polynomial needs a context; use from_poly_with"));
        RatFunc { num: p, den: Poly::constant(one) }
    }

    /// Like `from_poly` but usable for the zero polynomial.
    pub fn from_poly_with(p: Poly<C>, witness: &C) -> Self {
        RatFunc { num: p, den: Poly::constant(witness.one_like()) }
    }

    pub fn constant(c: C) -> Self {
        let one = c.one_like();
        RatFunc { num: Poly::constant(c), den: Poly::constant(one) }
    }

    /// The variable t itself.
    pub fn var_like(witness: &C) -> Self {
        RatFunc { num: Poly::var_like(witness), den: Poly::constant(witness.one_like()) }
    }

    pub fn num(&self) -> &Poly<C> {
        &self.num
    }

    pub fn den(&self) -> &Poly<C> {
        &self.den
    }

    /// A scalar of the coefficient domain, for zero/one construction.
    pub fn witness(&self) -> &C {
        self.den.leading_coeff().expect("denominator is nonzero")
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn as_constant(&self) -> Option<C> {
        if !self.is_constant() {
            return None;
        }
        Some(self.num.coeff_or_zero(0, self.witness()))
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_constant()
    }

    /// max(deg num, deg den), the degree of the map P1 -> P1 when nonconstant.
    pub fn map_degree(&self) -> usize {
        self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0))
    }

    pub fn eval(&self, x: &C) -> Option<C> {
        let d = self.den.eval(x);
        d.inv().map(|di| self.num.eval(x).mul(&di))
    }

    /// f(g) for a rational argument; error when the denominator collapses
    /// to zero (only possible for constant g).
    pub fn compose(&self, g: &Self) -> Result<Self> {
        let embed = |c: &C| Self::constant(c.clone());
        let n = self.num.eval_map(&embed, g);
        let d = self.den.eval_map(&embed, g);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::new(
            n.num.mul(&d.den),
            n.den.mul(&d.num),
        )
    }

    /// f((a t + b) / (c t + d)).
    pub fn substitute_fractional(&self, a: &C, b: &C, c: &C, d: &C) -> Result<Self> {
        let g = Self::new(
            Poly::from_coeffs(vec![b.clone(), a.clone()]),
            Poly::from_coeffs(vec![d.clone(), c.clone()]),
        )?;
        self.compose(&g)
    }

    pub fn derivative(&self) -> Self {
        let n = self.num.derivative().mul(&self.den).sub(&self.num.mul(&self.den.derivative()));
        let d = self.den.mul(&self.den);
        Self::new(n, d).expect("denominator stays nonzero")
    }

    pub fn map_coeffs<D: Scalar>(&self, embed: &impl Fn(&C) -> D) -> RatFunc<D> {
        RatFunc::new(self.num.map_coeffs(embed), self.den.map_coeffs(embed))
            .expect("embedding preserves nonzero denominators")
    }
}

impl<C: Scalar> Scalar for RatFunc<C> {
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn zero_like(&self) -> Self {
        let w = self.witness();
        RatFunc { num: Poly::zero(), den: Poly::constant(w.one_like()) }
    }

    fn one_like(&self) -> Self {
        let w = self.witness();
        RatFunc { num: Poly::constant(w.one_like()), den: Poly::constant(w.one_like()) }
    }

    fn add(&self, rhs: &Self) -> Self {
        let n = self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den));
        let d = self.den.mul(&rhs.den);
        Self::new(n, d).expect("denominator product is nonzero")
    }

    fn neg(&self) -> Self {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    fn mul(&self, rhs: &Self) -> Self {
        Self::new(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
            .expect("denominator product is nonzero")
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::new(self.den.clone(), self.num.clone()).expect("numerator is nonzero"))
    }
}

// ---------------------------------------------------------------------------
// exact p-th roots and the invariant rewrite, over concrete base fields
// ---------------------------------------------------------------------------

impl RatFunc<FieldElement> {
    /// Exact p-th root of a polynomial: all squarefree multiplicities must
    /// be divisible by p and the unit must be a p-th power in the field.
    fn poly_nth_root(f: &Poly<FieldElement>, p: u32) -> Result<Poly<FieldElement>> {
        if f.is_zero() {
            return Ok(Poly::zero());
        }
        let (unit, factors) = f.squarefree_decomposition()?;
        let root_unit = field_nth_root(&unit, p)?;
        let mut acc = Poly::constant(root_unit);
        for (g, m) in factors {
            if m % p != 0 {
                return Err(Error::NotAPower);
            }
            acc = acc.mul(&g.pow(m / p));
        }
        Ok(acc)
    }

    /// g with g^p = self, when one exists in k(t).
    pub fn pth_power_root(&self, p: u32) -> Result<Self> {
        assert!(p >= 1);
        if p == 1 || self.is_zero() {
            return Ok(self.clone());
        }
        let a = Self::poly_nth_root(&self.num, p)?;
        let b = Self::poly_nth_root(&self.den, p)?;
        let root = Self::new(a, b)?;
        // paranoia: verify
        let mut check = root.one_like();
        for _ in 0..p {
            check = check.mul(&root);
        }
        if check != *self {
            return Err(Error::NotAPower);
        }
        Ok(root)
    }

    /// Exact square root in k(t), if one exists.
    pub fn sqrt(&self) -> Option<Self> {
        self.pth_power_root(2).ok()
    }

    pub fn is_square(&self) -> bool {
        self.sqrt().is_some()
    }

    /// Rewrites a rational function Q(t) invariant under both t -> -t and
    /// t -> 1/t as T(s) with s = t^2 + 1/t^2. Errors with `NotInvariant`
    /// when Q lacks either symmetry.
    pub fn rewrite_in_invariant(&self) -> Result<Self> {
        let w = self.witness().clone();
        if self.is_zero() || self.is_constant() {
            return Ok(self.clone());
        }
        // invariance under t -> -t
        let minus_t = Self::new(
            Poly::from_coeffs(vec![w.zero_like(), w.one_like().neg()]),
            Poly::constant(w.one_like()),
        )?;
        if self.compose(&minus_t)? != *self {
            return Err(Error::NotInvariant("t -> -t".into()));
        }
        // invariance under t -> 1/t
        let inv_t = Self::new(
            Poly::constant(w.one_like()),
            Poly::from_coeffs(vec![w.zero_like(), w.one_like()]),
        )?;
        if self.compose(&inv_t)? != *self {
            return Err(Error::NotInvariant("t -> 1/t".into()));
        }
        // both num and den are even (coprimality rules out the odd case)
        let n1 = self.num.even_part().ok_or(Error::NotInvariant("t -> -t".into()))?;
        let d1 = self.den.even_part().ok_or(Error::NotInvariant("t -> -t".into()))?;
        // strip v-powers: n1 = v^a n2, d1 = v^b d2
        let a = n1.trailing_zero_count();
        let b = d1.trailing_zero_count();
        let n2 = n1.shift_down(a);
        let d2 = d1.shift_down(b);
        // 1/t-invariance in v-coordinates forces both parts self-reciprocal
        // of even degree with deg n2 - deg d2 = 2(b - a)
        if !n2.is_self_reciprocal() || !d2.is_self_reciprocal() {
            return Err(Error::NotInvariant("t -> 1/t".into()));
        }
        let dn = n2.degree().unwrap_or(0) as i64;
        let dd = d2.degree().unwrap_or(0) as i64;
        if dn % 2 != 0 || dd % 2 != 0 || dn - dd != 2 * (b as i64 - a as i64) {
            return Err(Error::NotInvariant("t -> 1/t".into()));
        }
        let t1 = n2.palindromic_reduce()?;
        let t2 = d2.palindromic_reduce()?;
        Self::new(t1, t2)
    }
}

// ---------------------------------------------------------------------------
// display
// ---------------------------------------------------------------------------

/// Renders with an explicit variable name; reparseable (numerator
/// parenthesized when compound, denominator always parenthesized).
pub fn ratfunc_to_string<C: Scalar + CoeffDisplay>(f: &RatFunc<C>, var: &str) -> String {
    let num = poly_to_string(&f.num, var);
    if f.den.is_constant() {
        return num;
    }
    let den = poly_to_string(&f.den, var);
    let num_atomic = !num.contains(' ');
    if num_atomic {
        format!("{num}/({den})")
    } else {
        format!("({num})/({den})")
    }
}

impl<C: Scalar + CoeffDisplay> fmt::Display for RatFunc<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", ratfunc_to_string(self, "x"))
    }
}

impl CoeffDisplay for RatFunc<FieldElement> {
    fn coeff_text(&self) -> (String, bool, bool) {
        if let Some(c) = self.as_constant() {
            return c.coeff_text();
        }
        if self.is_poly() {
            let nonzero = self.num.coeffs().iter().filter(|c| !c.is_zero()).count();
            (poly_to_string(&self.num, "x"), false, nonzero == 1)
        } else {
            (ratfunc_to_string(self, "x"), false, false)
        }
    }
}
