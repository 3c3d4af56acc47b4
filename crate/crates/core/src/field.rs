//! Exact base-field scalars: rationals, prime fields F_q and cyclotomic
//! extensions Q(zeta_n) represented as Q[z]/Phi_n(z).
//!
//! Every element is kept in a canonical form (reduced fraction, least
//! nonnegative residue, reduced coefficient vector) so that structural
//! equality is mathematical equality.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Mutex;

use num::bigint::BigInt;
use num::integer::Integer;
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};
use once_cell::sync::Lazy;

use crate::error::{Error, Result};
use crate::intfactor;

/// Largest admissible prime modulus. Keeps 128-bit intermediate products
/// comfortably in range and exhaustive scans (root searches) tractable.
pub const MAX_PRIME: u64 = 1 << 31;

/// The supported base fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldKind {
    /// The rational numbers.
    Rationals,
    /// A prime field F_q, q > 3 prime.
    Prime(u64),
    /// The cyclotomic field Q(zeta_n) = Q[z]/Phi_n(z).
    Cyclotomic(u32),
}

impl FieldKind {
    /// Validated constructor for F_q.
    pub fn prime(q: u64) -> Result<Self> {
        if q <= 3 || q >= MAX_PRIME || !intfactor::is_prime_u64(q) {
            return Err(Error::BadField(
                format!("Fp:{q}"),
                "modulus must be a prime with 3 < q < 2^31".into(),
            ));
        }
        Ok(FieldKind::Prime(q))
    }

    /// Validated constructor for Q(zeta_n).
    pub fn cyclotomic(n: u32) -> Result<Self> {
        if n == 0 || n > 512 {
            return Err(Error::BadField(
                format!("cyclo:{n}"),
                "conductor must satisfy 1 <= n <= 512".into(),
            ));
        }
        Ok(FieldKind::Cyclotomic(n))
    }

    /// Field characteristic (0 or q).
    pub fn characteristic(&self) -> u64 {
        match self {
            FieldKind::Prime(q) => *q,
            _ => 0,
        }
    }

    /// Degree of the extension over its prime field, when finite.
    pub fn extension_degree(&self) -> u64 {
        match self {
            FieldKind::Rationals | FieldKind::Prime(_) => 1,
            FieldKind::Cyclotomic(n) => euler_phi(*n) as u64,
        }
    }
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::Rationals => write!(f, "QQ"),
            FieldKind::Prime(q) => write!(f, "Fp:{q}"),
            FieldKind::Cyclotomic(n) => write!(f, "cyclo:{n}"),
        }
    }
}

impl FromStr for FieldKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "QQ" || s == "Q" {
            return Ok(FieldKind::Rationals);
        }
        if let Some(q) = s.strip_prefix("Fp:") {
            let q: u64 = q
                .parse()
                .map_err(|_| Error::BadField(s.into(), "modulus is not an integer".into()))?;
            return FieldKind::prime(q);
        }
        if let Some(n) = s.strip_prefix("cyclo:") {
            let n: u32 = n
                .parse()
                .map_err(|_| Error::BadField(s.into(), "conductor is not an integer".into()))?;
            return FieldKind::cyclotomic(n);
        }
        Err(Error::BadField(
            s.into(),
            "expected QQ, Fp:<q> or cyclo:<n>".into(),
        ))
    }
}

pub fn euler_phi(n: u32) -> u32 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

// ---------------------------------------------------------------------------
// dense Q[z] helpers (ascending coefficients, no trailing zeros)
// ---------------------------------------------------------------------------

type RatVec = Vec<BigRational>;

fn rp_trim(v: &mut RatVec) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn rp_mul(a: &[BigRational], b: &[BigRational]) -> RatVec {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    rp_trim(&mut out);
    out
}

fn rp_divmod(num: &[BigRational], den: &[BigRational]) -> (RatVec, RatVec) {
    assert!(!den.is_empty(), "division by zero polynomial");
    let mut rem: RatVec = num.to_vec();
    rp_trim(&mut rem);
    let dd = den.len() - 1;
    let lead = &den[dd];
    if rem.len() <= dd {
        return (Vec::new(), rem);
    }
    let mut quo = vec![BigRational::zero(); rem.len() - dd];
    while rem.len() > dd {
        let k = rem.len() - 1 - dd;
        let c = &rem[rem.len() - 1] / lead;
        quo[k] = c.clone();
        for (i, dc) in den.iter().enumerate() {
            let t = dc * &c;
            rem[k + i] -= t;
        }
        rp_trim(&mut rem);
        if rem.len() <= dd {
            break;
        }
    }
    rp_trim(&mut quo);
    (quo, rem)
}

/// Extended Euclid in Q[z]: returns (g, u, v) with u*a + v*b = g.
fn rp_ext_gcd(a: &[BigRational], b: &[BigRational]) -> (RatVec, RatVec, RatVec) {
    let mut r0: RatVec = a.to_vec();
    let mut r1: RatVec = b.to_vec();
    rp_trim(&mut r0);
    rp_trim(&mut r1);
    let mut s0: RatVec = vec![BigRational::one()];
    let mut s1: RatVec = Vec::new();
    let mut t0: RatVec = Vec::new();
    let mut t1: RatVec = vec![BigRational::one()];
    while !r1.is_empty() {
        let (q, r) = rp_divmod(&r0, &r1);
        let next_s = rp_sub(&s0, &rp_mul(&q, &s1));
        let next_t = rp_sub(&t0, &rp_mul(&q, &t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = next_s;
        t0 = t1;
        t1 = next_t;
    }
    (r0, s0, t0)
}

fn rp_sub(a: &[BigRational], b: &[BigRational]) -> RatVec {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, slot) in out.iter_mut().enumerate() {
        let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
        let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
        *slot = x - y;
    }
    rp_trim(&mut out);
    out
}

static CYCLOTOMIC_CACHE: Lazy<Mutex<HashMap<u32, RatVec>>> = Lazy::new(|| Mutex::new(HashMap::new()));

/// Coefficients of the n-th cyclotomic polynomial Phi_n, ascending.
pub(crate) fn cyclotomic_polynomial(n: u32) -> RatVec {
    if let Some(p) = CYCLOTOMIC_CACHE.lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by the product of Phi_d over proper divisors d of n.
    let mut num = vec![BigRational::zero(); n as usize + 1];
    num[0] = -BigRational::one();
    num[n as usize] = BigRational::one();
    let mut den = vec![BigRational::one()];
    for d in 1..n {
        if n % d == 0 {
            den = rp_mul(&den, &cyclotomic_polynomial(d));
        }
    }
    let (phi, rem) = rp_divmod(&num, &den);
    debug_assert!(rem.is_empty(), "cyclotomic division must be exact");
    CYCLOTOMIC_CACHE.lock().unwrap().insert(n, phi.clone());
    phi
}

fn reduce_mod_phi(n: u32, coeffs: RatVec) -> RatVec {
    let phi = cyclotomic_polynomial(n);
    let (_, mut rem) = rp_divmod(&coeffs, &phi);
    rp_trim(&mut rem);
    rem
}

// ---------------------------------------------------------------------------
// FieldElement
// ---------------------------------------------------------------------------

/// A scalar of one of the supported fields, always in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldElement {
    Rational(BigRational),
    Prime { q: u64, val: u64 },
    /// Coefficient vector of a representative reduced mod Phi_n, trailing
    /// zeros trimmed (so the empty vector is 0).
    Cyclotomic { n: u32, coeffs: Vec<BigRational> },
}

impl FieldElement {
    pub fn kind(&self) -> FieldKind {
        match self {
            FieldElement::Rational(_) => FieldKind::Rationals,
            FieldElement::Prime { q, .. } => FieldKind::Prime(*q),
            FieldElement::Cyclotomic { n, .. } => FieldKind::Cyclotomic(*n),
        }
    }

    pub fn zero(kind: &FieldKind) -> Self {
        match kind {
            FieldKind::Rationals => FieldElement::Rational(BigRational::zero()),
            FieldKind::Prime(q) => FieldElement::Prime { q: *q, val: 0 },
            FieldKind::Cyclotomic(n) => FieldElement::Cyclotomic { n: *n, coeffs: Vec::new() },
        }
    }

    pub fn one(kind: &FieldKind) -> Self {
        Self::from_integer(kind, 1)
    }

    pub fn from_integer(kind: &FieldKind, v: i64) -> Self {
        Self::from_bigint(kind, &BigInt::from(v))
    }

    pub fn from_bigint(kind: &FieldKind, v: &BigInt) -> Self {
        match kind {
            FieldKind::Rationals => FieldElement::Rational(BigRational::from(v.clone())),
            FieldKind::Prime(q) => {
                let m = BigInt::from(*q);
                let r = v.mod_floor(&m).to_u64().unwrap();
                FieldElement::Prime { q: *q, val: r }
            }
            FieldKind::Cyclotomic(n) => {
                let mut coeffs = vec![BigRational::from(v.clone())];
                rp_trim(&mut coeffs);
                FieldElement::Cyclotomic { n: *n, coeffs }
            }
        }
    }

    /// Embed a rational constant. Fails over F_q when the denominator is
    /// divisible by q.
    pub fn from_rational(kind: &FieldKind, v: &BigRational) -> Result<Self> {
        match kind {
            FieldKind::Rationals => Ok(FieldElement::Rational(v.clone())),
            FieldKind::Prime(_) => {
                let num = Self::from_bigint(kind, v.numer());
                let den = Self::from_bigint(kind, v.denom());
                num.checked_div(&den)
            }
            FieldKind::Cyclotomic(n) => {
                let mut coeffs = vec![v.clone()];
                rp_trim(&mut coeffs);
                Ok(FieldElement::Cyclotomic { n: *n, coeffs })
            }
        }
    }

    /// The canonical generator zeta_n of a cyclotomic field.
    pub fn zeta(kind: &FieldKind) -> Result<Self> {
        match kind {
            FieldKind::Cyclotomic(n) => {
                let coeffs = reduce_mod_phi(*n, vec![BigRational::zero(), BigRational::one()]);
                Ok(FieldElement::Cyclotomic { n: *n, coeffs })
            }
            _ => Err(Error::InvalidInput(format!("{kind} has no distinguished root of unity"))),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElement::Rational(r) => r.is_zero(),
            FieldElement::Prime { val, .. } => *val == 0,
            FieldElement::Cyclotomic { coeffs, .. } => coeffs.is_empty(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElement::Rational(r) => r.is_one(),
            FieldElement::Prime { val, .. } => *val == 1,
            FieldElement::Cyclotomic { coeffs, .. } => coeffs.len() == 1 && coeffs[0].is_one(),
        }
    }

    /// The rational value of elements that lie in the prime subfield Q
    /// (always for `Rational`, constant vectors for `Cyclotomic`).
    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            FieldElement::Rational(r) => Some(r.clone()),
            FieldElement::Cyclotomic { coeffs, .. } => match coeffs.len() {
                0 => Some(BigRational::zero()),
                1 => Some(coeffs[0].clone()),
                _ => None,
            },
            FieldElement::Prime { .. } => None,
        }
    }

    pub fn as_prime_residue(&self) -> Option<u64> {
        match self {
            FieldElement::Prime { val, .. } => Some(*val),
            _ => None,
        }
    }

    fn mismatch(&self, rhs: &Self) -> Error {
        Error::KindMismatch(self.kind(), rhs.kind())
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        match (self, rhs) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => {
                Ok(FieldElement::Rational(a + b))
            }
            (FieldElement::Prime { q, val: a }, FieldElement::Prime { q: q2, val: b })
                if q == q2 =>
            {
                Ok(FieldElement::Prime { q: *q, val: (a + b) % q })
            }
            (
                FieldElement::Cyclotomic { n, coeffs: a },
                FieldElement::Cyclotomic { n: n2, coeffs: b },
            ) if n == n2 => {
                let mut out = vec![BigRational::zero(); a.len().max(b.len())];
                for (i, slot) in out.iter_mut().enumerate() {
                    let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
                    let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
                    *slot = x + y;
                }
                rp_trim(&mut out);
                Ok(FieldElement::Cyclotomic { n: *n, coeffs: out })
            }
            _ => Err(self.mismatch(rhs)),
        }
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self> {
        self.checked_add(&rhs.negated())
    }

    pub fn negated(&self) -> Self {
        match self {
            FieldElement::Rational(r) => FieldElement::Rational(-r),
            FieldElement::Prime { q, val } => {
                FieldElement::Prime { q: *q, val: if *val == 0 { 0 } else { q - val } }
            }
            FieldElement::Cyclotomic { n, coeffs } => FieldElement::Cyclotomic {
                n: *n,
                coeffs: coeffs.iter().map(|c| -c).collect(),
            },
        }
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        match (self, rhs) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => {
                Ok(FieldElement::Rational(a * b))
            }
            (FieldElement::Prime { q, val: a }, FieldElement::Prime { q: q2, val: b })
                if q == q2 =>
            {
                let v = ((*a as u128 * *b as u128) % *q as u128) as u64;
                Ok(FieldElement::Prime { q: *q, val: v })
            }
            (
                FieldElement::Cyclotomic { n, coeffs: a },
                FieldElement::Cyclotomic { n: n2, coeffs: b },
            ) if n == n2 => {
                let prod = rp_mul(a, b);
                Ok(FieldElement::Cyclotomic { n: *n, coeffs: reduce_mod_phi(*n, prod) })
            }
            _ => Err(self.mismatch(rhs)),
        }
    }

    pub fn checked_inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match self {
            FieldElement::Rational(r) => Ok(FieldElement::Rational(r.recip())),
            FieldElement::Prime { q, val } => {
                Ok(FieldElement::Prime { q: *q, val: prime_inv(*val, *q) })
            }
            FieldElement::Cyclotomic { n, coeffs } => {
                let phi = cyclotomic_polynomial(*n);
                let (g, u, _) = rp_ext_gcd(coeffs, &phi);
                // Phi_n is irreducible over Q, so the gcd is a nonzero constant.
                debug_assert_eq!(g.len(), 1);
                let scale = g[0].recip();
                let inv: RatVec = u.iter().map(|c| c * &scale).collect();
                Ok(FieldElement::Cyclotomic { n: *n, coeffs: reduce_mod_phi(*n, inv) })
            }
        }
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        self.checked_mul(&rhs.checked_inv()?)
    }

    /// Integer power, negative exponents through the inverse.
    pub fn checked_pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.checked_inv()? } else { self.clone() };
        let mut acc = Self::one(&self.kind());
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.checked_mul(&b)?;
            }
            b = b.checked_mul(&b.clone())?;
            k >>= 1;
        }
        Ok(acc)
    }

    /// Total order used for canonical sorting: numeric on Q, least residue
    /// on F_q, lexicographic coefficient vectors on cyclotomic fields.
    /// Elements of different fields are ordered by field descriptor.
    pub fn cmp_total(&self, rhs: &Self) -> Ordering {
        fn rank(e: &FieldElement) -> u8 {
            match e {
                FieldElement::Rational(_) => 0,
                FieldElement::Prime { .. } => 1,
                FieldElement::Cyclotomic { .. } => 2,
            }
        }
        match (self, rhs) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => a.cmp(b),
            (FieldElement::Prime { q: qa, val: a }, FieldElement::Prime { q: qb, val: b }) => {
                qa.cmp(qb).then(a.cmp(b))
            }
            (
                FieldElement::Cyclotomic { n: na, coeffs: a },
                FieldElement::Cyclotomic { n: nb, coeffs: b },
            ) => na.cmp(nb).then_with(|| {
                for i in 0..a.len().max(b.len()) {
                    let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
                    let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
                    match x.cmp(&y) {
                        Ordering::Equal => continue,
                        other => return other,
                    }
                }
                Ordering::Equal
            }),
            _ => rank(self).cmp(&rank(rhs)),
        }
    }
}

impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_total(other)
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Rational(r) => write!(f, "{r}"),
            FieldElement::Prime { val, .. } => write!(f, "{val}"),
            FieldElement::Cyclotomic { coeffs, .. } => {
                if coeffs.is_empty() {
                    return write!(f, "0");
                }
                let mut first = true;
                for (i, c) in coeffs.iter().enumerate().rev() {
                    if c.is_zero() {
                        continue;
                    }
                    let mag = c.abs();
                    if first {
                        if c.is_negative() {
                            write!(f, "-")?;
                        }
                        first = false;
                    } else if c.is_negative() {
                        write!(f, " - ")?;
                    } else {
                        write!(f, " + ")?;
                    }
                    match i {
                        0 => write!(f, "{mag}")?,
                        _ => {
                            if !mag.is_one() {
                                write!(f, "{mag}*")?;
                            }
                            if i == 1 {
                                write!(f, "zeta")?;
                            } else {
                                write!(f, "zeta^{i}")?;
                            }
                        }
                    }
                }
                Ok(())
            }
        }
    }
}

fn prime_pow(b: u64, mut e: u64, q: u64) -> u64 {
    let mut acc: u128 = 1;
    let mut bb = b as u128 % q as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * bb % q as u128;
        }
        bb = bb * bb % q as u128;
        e >>= 1;
    }
    acc as u64
}

fn prime_inv(a: u64, q: u64) -> u64 {
    prime_pow(a, q - 2, q)
}

/// Inverse of a modulo an arbitrary m, when gcd(a, m) = 1.
fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

// ---------------------------------------------------------------------------
// Scalar abstraction shared by field elements and rational functions
// ---------------------------------------------------------------------------

/// Minimal field interface for generic polynomial / matrix code. Arithmetic
/// panics on mixed base fields (an internal invariant; the public API
/// validates kinds at the boundary).
pub trait Scalar: Clone + PartialEq + fmt::Debug {
    fn is_zero(&self) -> bool;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    /// None exactly on zero.
    fn inv(&self) -> Option<Self>;

    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    fn is_one(&self) -> bool {
        *self == self.one_like()
    }

    fn div(&self, rhs: &Self) -> Self {
        self.mul(&rhs.inv().expect("division by zero"))
    }
}

impl Scalar for FieldElement {
    fn is_zero(&self) -> bool {
        FieldElement::is_zero(self)
    }

    fn zero_like(&self) -> Self {
        FieldElement::zero(&self.kind())
    }

    fn one_like(&self) -> Self {
        FieldElement::one(&self.kind())
    }

    fn add(&self, rhs: &Self) -> Self {
        self.checked_add(rhs).expect("field kind mismatch")
    }

    fn neg(&self) -> Self {
        self.negated()
    }

    fn mul(&self, rhs: &Self) -> Self {
        self.checked_mul(rhs).expect("field kind mismatch")
    }

    fn inv(&self) -> Option<Self> {
        self.checked_inv().ok()
    }

    fn is_one(&self) -> bool {
        FieldElement::is_one(self)
    }
}

// ---------------------------------------------------------------------------
// roots of unity, square roots, p-th roots of constants
// ---------------------------------------------------------------------------

/// Multiplicative order of x, up to the given bound.
fn mult_order(x: &FieldElement, bound: u64) -> Option<u64> {
    if x.is_zero() {
        return None;
    }
    let mut acc = x.clone();
    for k in 1..=bound {
        if acc.is_one() {
            return Some(k);
        }
        acc = acc.checked_mul(x).ok()?;
    }
    None
}

/// A primitive root of unity of exact multiplicative order `order`, if the
/// field contains one.
pub fn primitive_root_of_unity(kind: &FieldKind, order: u64) -> Result<FieldElement> {
    let missing = || Error::MissingRootOfUnity { order, kind: *kind };
    if order == 0 {
        return Err(missing());
    }
    if order == 1 {
        return Ok(FieldElement::one(kind));
    }
    if order == 2 {
        return Ok(FieldElement::one(kind).negated());
    }
    match kind {
        FieldKind::Rationals => Err(missing()),
        FieldKind::Prime(q) => {
            if (q - 1) % order != 0 {
                return Err(missing());
            }
            let exp = (q - 1) / order;
            for x in 2..*q {
                let y = prime_pow(x, exp, *q);
                let cand = FieldElement::Prime { q: *q, val: y };
                if mult_order(&cand, order) == Some(order) {
                    return Ok(cand);
                }
            }
            Err(missing())
        }
        FieldKind::Cyclotomic(n) => {
            // The roots of unity of Q(zeta_n) are mu_n (mu_2n for odd n):
            // search +-zeta^j for the first element of exact order.
            let zeta = FieldElement::zeta(kind)?;
            let mut pow = FieldElement::one(kind);
            for _ in 0..*n {
                for cand in [pow.clone(), pow.negated()] {
                    if mult_order(&cand, order) == Some(order) {
                        return Ok(cand);
                    }
                }
                pow = pow.checked_mul(&zeta)?;
            }
            Err(missing())
        }
    }
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let sn = r.numer().sqrt();
    let sd = r.denom().sqrt();
    if &(&sn * &sn) == r.numer() && &(&sd * &sd) == r.denom() {
        Some(BigRational::new(sn, sd))
    } else {
        None
    }
}

fn prime_sqrt(c: u64, q: u64) -> Option<u64> {
    if c == 0 {
        return Some(0);
    }
    if prime_pow(c, (q - 1) / 2, q) != 1 {
        return None;
    }
    if q % 4 == 3 {
        let r = prime_pow(c, (q + 1) / 4, q);
        return Some(r);
    }
    // Tonelli-Shanks.
    let mut s = q - 1;
    let mut e = 0;
    while s % 2 == 0 {
        s /= 2;
        e += 1;
    }
    let mut z = 2;
    while prime_pow(z, (q - 1) / 2, q) == 1 {
        z += 1;
    }
    let mut m = e;
    let mut cc = prime_pow(z, s, q);
    let mut t = prime_pow(c, s, q);
    let mut r = prime_pow(c, (s + 1) / 2, q);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = ((t2 as u128 * t2 as u128) % q as u128) as u64;
            i += 1;
        }
        let b = prime_pow(cc, 1 << (m - i - 1), q);
        m = i;
        cc = ((b as u128 * b as u128) % q as u128) as u64;
        t = ((t as u128 * cc as u128) % q as u128) as u64;
        r = ((r as u128 * b as u128) % q as u128) as u64;
    }
    Some(r)
}

fn legendre(a: i64, l: u64) -> i64 {
    let a = a.rem_euclid(l as i64) as u64;
    if a == 0 {
        return 0;
    }
    if prime_pow(a, (l - 1) / 2, l) == 1 {
        1
    } else {
        -1
    }
}

/// The quadratic Gauss sum for an odd prime l dividing n, an element of
/// Q(zeta_n) whose square is (-1)^((l-1)/2) * l.
fn gauss_sum(n: u32, l: u64) -> FieldElement {
    let kind = FieldKind::Cyclotomic(n);
    let zeta = FieldElement::zeta(&kind).unwrap();
    let zl = zeta.checked_pow((n as u64 / l) as i64).unwrap();
    let mut acc = FieldElement::zero(&kind);
    let mut pw = FieldElement::one(&kind);
    for a in 1..l {
        pw = pw.checked_mul(&zl).unwrap();
        let term = if legendre(a as i64, l) == 1 { pw.clone() } else { pw.negated() };
        acc = acc.checked_add(&term).unwrap();
    }
    acc
}

/// Square root of a rational constant inside Q(zeta_n), built from Gauss
/// sums and small roots of unity; self-verified, None when not found.
fn cyclotomic_sqrt_of_rational(n: u32, r: &BigRational) -> Option<FieldElement> {
    let kind = FieldKind::Cyclotomic(n);
    if r.is_zero() {
        return Some(FieldElement::zero(&kind));
    }
    if let Some(s) = rational_sqrt(&r.abs()) {
        let root = FieldElement::from_rational(&kind, &s).ok()?;
        if !r.is_negative() {
            return Some(root);
        }
        // need i in the field
        if n % 4 == 0 {
            let i = FieldElement::zeta(&kind).ok()?.checked_pow((n / 4) as i64).ok()?;
            return Some(root.checked_mul(&i).ok()?);
        }
        // fall through: -|r| may still be a square via an odd quadratic subfield
    }
    // Write r = s^2 * d with d a squarefree integer and assemble sqrt(d).
    let num_f = intfactor::factorize(r.numer());
    let den_f = intfactor::factorize(r.denom());
    let mut s = BigRational::one();
    let mut d = BigInt::one();
    for (p, e) in &num_f {
        let p = BigInt::from(p.clone());
        s *= BigRational::from(p.pow(e / 2));
        if e % 2 == 1 {
            d *= p;
        }
    }
    for (p, e) in &den_f {
        let p = BigInt::from(p.clone());
        s /= BigRational::from(p.pow(e / 2));
        if e % 2 == 1 {
            d *= &p;
            s /= BigRational::from(p);
        }
    }
    if r.is_negative() {
        d = -d;
    }
    let mut root = FieldElement::from_rational(&kind, &s).ok()?;
    // Multiply in sqrt(l* ) for each odd prime factor of d.
    let mut rem = d.clone();
    for (p, _) in intfactor::factorize(&d) {
        let l = p.to_u64()?;
        if l == 2 {
            continue;
        }
        if n as u64 % l != 0 {
            return None;
        }
        root = root.checked_mul(&gauss_sum(n, l)).ok()?;
        let lstar = if l % 4 == 1 { BigInt::from(l) } else { -BigInt::from(l) };
        rem = rem / lstar;
    }
    // rem is now +-1 or +-2 (up to sign bookkeeping done above).
    let rem_i = rem.to_i64()?;
    match rem_i {
        1 => {}
        -1 => {
            if n % 4 != 0 {
                return None;
            }
            let i = FieldElement::zeta(&kind).ok()?.checked_pow((n / 4) as i64).ok()?;
            root = root.checked_mul(&i).ok()?;
        }
        2 | -2 => {
            if n % 8 != 0 {
                return None;
            }
            let z8 = FieldElement::zeta(&kind).ok()?.checked_pow((n / 8) as i64).ok()?;
            let sqrt2 = z8.checked_add(&z8.checked_inv().ok()?).ok()?;
            root = root.checked_mul(&sqrt2).ok()?;
            if rem_i == -2 {
                if n % 4 != 0 {
                    return None;
                }
                let i = FieldElement::zeta(&kind).ok()?.checked_pow((n / 4) as i64).ok()?;
                root = root.checked_mul(&i).ok()?;
            }
        }
        _ => return None,
    }
    let target = FieldElement::from_rational(&kind, r).ok()?;
    if root.checked_mul(&root.clone()).ok()? == target {
        Some(root)
    } else {
        None
    }
}

/// Exact square root in the base field. Over cyclotomic fields this is a
/// partial procedure (rational constants times powers of zeta, quadratic
/// subfields via Gauss sums); every returned value is verified by squaring.
pub fn field_sqrt(c: &FieldElement) -> Option<FieldElement> {
    if c.is_zero() {
        return Some(c.clone());
    }
    match c {
        FieldElement::Rational(r) => rational_sqrt(r).map(FieldElement::Rational),
        FieldElement::Prime { q, val } => {
            prime_sqrt(*val, *q).map(|r| FieldElement::Prime { q: *q, val: r })
        }
        FieldElement::Cyclotomic { n, .. } => {
            let kind = c.kind();
            let zeta = FieldElement::zeta(&kind).ok()?;
            // try c = r * zeta^(2k): sqrt = sqrt(r) * zeta^k
            let mut shift = FieldElement::one(&kind);
            for _ in 0..*n {
                let d = c.checked_div(&shift.checked_mul(&shift.clone()).ok()?).ok()?;
                if let Some(r) = d.as_rational() {
                    if let Some(root0) = cyclotomic_sqrt_of_rational(*n, &r) {
                        let root = root0.checked_mul(&shift).ok()?;
                        if root.checked_mul(&root.clone()).ok()? == *c {
                            return Some(root);
                        }
                    }
                }
                shift = shift.checked_mul(&zeta).ok()?;
            }
            None
        }
    }
}

fn rational_nth_root(r: &BigRational, p: u32) -> Option<BigRational> {
    if r.is_negative() && p % 2 == 0 {
        return None;
    }
    let rn = r.numer().nth_root(p);
    let rd = r.denom().nth_root(p);
    if &rn.pow(p) == r.numer() && &rd.pow(p) == r.denom() {
        Some(BigRational::new(rn, rd))
    } else {
        None
    }
}

/// Exact p-th root of a base-field constant.
///
/// Over cyclotomic fields only "obvious" constants are decided (rationals
/// times powers of zeta); anything else returns `UndeterminedPower` instead
/// of guessing.
pub fn field_nth_root(c: &FieldElement, p: u32) -> Result<FieldElement> {
    assert!(p >= 1);
    if p == 1 || c.is_zero() || c.is_one() {
        return Ok(c.clone());
    }
    if p == 2 {
        if let Some(r) = field_sqrt(c) {
            return Ok(r);
        }
        return match c {
            FieldElement::Cyclotomic { .. } if c.as_rational().is_none() => {
                Err(Error::UndeterminedPower)
            }
            _ => Err(Error::NotAPower),
        };
    }
    match c {
        FieldElement::Rational(r) => {
            let root = rational_nth_root(&r.abs(), p).ok_or(Error::NotAPower)?;
            if r.is_negative() {
                if p % 2 == 0 {
                    return Err(Error::NotAPower);
                }
                return Ok(FieldElement::Rational(-root));
            }
            Ok(FieldElement::Rational(root))
        }
        FieldElement::Prime { q, val } => {
            let g = num::integer::gcd(p as u64, q - 1);
            if g == 1 {
                let inv_p = mod_inverse(p as u64, q - 1).expect("coprime by construction");
                let r = prime_pow(*val, inv_p, *q);
                return Ok(FieldElement::Prime { q: *q, val: r });
            }
            if prime_pow(*val, (q - 1) / g, *q) != 1 {
                return Err(Error::NotAPower);
            }
            for x in 1..*q {
                if prime_pow(x, p as u64, *q) == *val {
                    return Ok(FieldElement::Prime { q: *q, val: x });
                }
            }
            Err(Error::NotAPower)
        }
        FieldElement::Cyclotomic { n, .. } => {
            let kind = c.kind();
            let zeta = FieldElement::zeta(&kind)?;
            // c = r * zeta^j?
            let mut shift = FieldElement::one(&kind);
            for j in 0..*n {
                if let Some(r) = c.checked_div(&shift)?.as_rational() {
                    // want m with m*p = j (mod n) and a rational p-th root of r
                    for m in 0..*n {
                        if (m as u64 * p as u64) % *n as u64 != j as u64 {
                            continue;
                        }
                        if let Some(t) = rational_nth_root(&r, p)
                            .or_else(|| rational_nth_root(&-r.clone(), p).map(|x| -x))
                        {
                            let cand = FieldElement::from_rational(&kind, &t)?
                                .checked_mul(&zeta.checked_pow(m as i64)?)?;
                            if cand.checked_pow(p as i64)? == *c {
                                return Ok(cand);
                            }
                        }
                    }
                    return Err(Error::NotAPower);
                }
                shift = shift.checked_mul(&zeta)?;
            }
            Err(Error::UndeterminedPower)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qq(n: i64, d: i64) -> FieldElement {
        FieldElement::Rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    #[test]
    fn rational_sum_reduces() {
        let a = qq(2, 3);
        let b = qq(1, 3);
        assert_eq!(a.checked_add(&b).unwrap(), qq(1, 1));
    }

    #[test]
    fn prime_product() {
        let k = FieldKind::prime(7).unwrap();
        let a = FieldElement::from_integer(&k, 5);
        let b = FieldElement::from_integer(&k, 9);
        assert_eq!(a.checked_mul(&b).unwrap(), FieldElement::from_integer(&k, 3));
    }

    #[test]
    fn zeta_cubed_is_one() {
        let k = FieldKind::cyclotomic(3).unwrap();
        let z = FieldElement::zeta(&k).unwrap();
        let z2 = z.checked_mul(&z).unwrap();
        // z^2 is stored reduced mod Phi_3: z^2 = -z - 1
        let expected = FieldElement::from_integer(&k, -1).checked_sub(&z).unwrap();
        assert_eq!(z2, expected);
        assert!(z.checked_mul(&z2).unwrap().is_one());
    }

    #[test]
    fn kind_mismatch_detected() {
        let a = qq(1, 2);
        let b = FieldElement::from_integer(&FieldKind::prime(5).unwrap(), 1);
        assert!(matches!(a.checked_add(&b), Err(Error::KindMismatch(_, _))));
    }

    #[test]
    fn division_by_zero_detected() {
        let a = qq(1, 2);
        assert!(matches!(a.checked_div(&qq(0, 1)), Err(Error::DivisionByZero)));
    }

    #[test]
    fn inverse_in_cyclotomic() {
        let k = FieldKind::cyclotomic(5).unwrap();
        let z = FieldElement::zeta(&k).unwrap();
        let x = z.checked_add(&FieldElement::from_integer(&k, 2)).unwrap();
        let inv = x.checked_inv().unwrap();
        assert!(x.checked_mul(&inv).unwrap().is_one());
    }

    #[test]
    fn total_order_is_numeric_on_q() {
        assert!(qq(-6, 1) < qq(0, 1));
        assert!(qq(0, 1) < qq(6, 1));
        assert!(qq(1, 3) < qq(1, 2));
    }

    #[test]
    fn roots_of_unity() {
        let z3 = primitive_root_of_unity(&FieldKind::cyclotomic(3).unwrap(), 3).unwrap();
        assert!(mult_order(&z3, 10) == Some(3));
        let f13 = FieldKind::prime(13).unwrap();
        let z4 = primitive_root_of_unity(&f13, 4).unwrap();
        assert!(mult_order(&z4, 10) == Some(4));
        assert!(primitive_root_of_unity(&FieldKind::Rationals, 3).is_err());
        // mu_6 lives in Q(zeta_3)
        let z6 = primitive_root_of_unity(&FieldKind::cyclotomic(3).unwrap(), 6).unwrap();
        assert!(mult_order(&z6, 10) == Some(6));
    }

    #[test]
    fn square_roots() {
        assert_eq!(field_sqrt(&qq(9, 4)), Some(qq(3, 2)));
        assert_eq!(field_sqrt(&qq(2, 1)), None);
        let f13 = FieldKind::prime(13).unwrap();
        let c = FieldElement::from_integer(&f13, 10);
        let r = field_sqrt(&c).unwrap();
        assert_eq!(r.checked_mul(&r.clone()).unwrap(), c);
        // -3 is a square in Q(zeta_3) via the Gauss sum
        let k3 = FieldKind::cyclotomic(3).unwrap();
        let m3 = FieldElement::from_integer(&k3, -3);
        let r3 = field_sqrt(&m3).unwrap();
        assert_eq!(r3.checked_mul(&r3.clone()).unwrap(), m3);
        // 5 is a square in Q(zeta_5)
        let k5 = FieldKind::cyclotomic(5).unwrap();
        let five = FieldElement::from_integer(&k5, 5);
        let r5 = field_sqrt(&five).unwrap();
        assert_eq!(r5.checked_mul(&r5.clone()).unwrap(), five);
    }

    #[test]
    fn nth_roots() {
        assert_eq!(field_nth_root(&qq(-8, 27), 3).unwrap(), qq(-2, 3));
        assert!(matches!(field_nth_root(&qq(2, 1), 3), Err(Error::NotAPower)));
        // gcd(5, 10) = 5: only +-1 are 5th powers mod 11
        let f11 = FieldKind::prime(11).unwrap();
        let c = FieldElement::from_integer(&f11, 10);
        let r = field_nth_root(&c, 5).unwrap();
        assert_eq!(r.checked_pow(5).unwrap(), c);
        assert!(field_nth_root(&FieldElement::from_integer(&f11, 4), 5).is_err());
        // gcd(5, 12) = 1: every element of F_13 is a 5th power
        let f13 = FieldKind::prime(13).unwrap();
        let c = FieldElement::from_integer(&f13, 4);
        let r = field_nth_root(&c, 5).unwrap();
        assert_eq!(r.checked_pow(5).unwrap(), c);
        let k3 = FieldKind::cyclotomic(3).unwrap();
        let z = FieldElement::zeta(&k3).unwrap();
        let r = field_nth_root(&z, 2).unwrap();
        assert_eq!(r.checked_mul(&r.clone()).unwrap(), z);
    }

    #[test]
    fn display_forms() {
        assert_eq!(qq(-3, 2).to_string(), "-3/2");
        let k = FieldKind::cyclotomic(3).unwrap();
        let z = FieldElement::zeta(&k).unwrap();
        let e = z.checked_mul(&FieldElement::from_integer(&k, 2)).unwrap()
            .checked_add(&FieldElement::from_integer(&k, 1)).unwrap();
        assert_eq!(e.to_string(), "2*zeta + 1");
    }

    #[test]
    fn field_kind_parsing() {
        assert_eq!("QQ".parse::<FieldKind>().unwrap(), FieldKind::Rationals);
        assert_eq!("Fp:101".parse::<FieldKind>().unwrap(), FieldKind::Prime(101));
        assert_eq!("cyclo:12".parse::<FieldKind>().unwrap(), FieldKind::Cyclotomic(12));
        assert!("Fp:4".parse::<FieldKind>().is_err());
        assert!("Fp:2".parse::<FieldKind>().is_err());
        assert!("nonsense".parse::<FieldKind>().is_err());
    }
}
