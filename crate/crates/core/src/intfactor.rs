//! Integer factorization helpers: trial division, Miller-Rabin and Pollard's
//! rho, enough to enumerate divisors of the constants met during rational
//! root searches.

use num::bigint::{BigInt, BigUint};
use num::integer::Integer;
use num::traits::{One, Zero};
use rand::RngCore;

/// Deterministic Miller-Rabin below 2^64, probabilistic (40 rounds) above.
pub fn is_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if n < &two {
        return false;
    }
    for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let p = BigUint::from(p);
        if *n == p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let witness = |a: &BigUint| -> bool {
        // true = composite witness
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            return false;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                return false;
            }
        }
        true
    };
    if n.bits() <= 64 {
        // This base set is known to be exact for 64-bit integers.
        for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
            let a = BigUint::from(a) % n;
            if a.is_zero() {
                continue;
            }
            if witness(&a) {
                return false;
            }
        }
        true
    } else {
        let mut rng = rand::rng();
        let byte_len = (n.bits() as usize).div_ceil(8);
        for _ in 0..40 {
            let mut bytes = vec![0u8; byte_len];
            rng.fill_bytes(&mut bytes);
            let a = &two + BigUint::from_bytes_le(&bytes) % (n - 3u32);
            if witness(&a) {
                return false;
            }
        }
        true
    }
}

fn pollard_rho(n: &BigUint) -> BigUint {
    // n must be odd, composite and not a prime power of a tiny prime.
    let one = BigUint::one();
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut x = BigUint::from(2u32);
        let mut y = x.clone();
        let mut d = BigUint::one();
        while d.is_one() {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            if diff.is_zero() {
                break;
            }
            d = diff.gcd(n);
        }
        if !d.is_zero() && d != one && &d != n {
            return d;
        }
        c += 1u32;
    }
}

fn factor_into(n: BigUint, out: &mut Vec<BigUint>) {
    if n.is_one() {
        return;
    }
    if is_prime(&n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(&n);
    let q = &n / &d;
    factor_into(d, out);
    factor_into(q, out);
}

/// Complete factorization of |n| as (prime, exponent) pairs, sorted by prime.
pub fn factorize(n: &BigInt) -> Vec<(BigUint, u32)> {
    let mut m = n.magnitude().clone();
    let mut primes: Vec<BigUint> = Vec::new();
    if m.is_zero() || m.is_one() {
        return Vec::new();
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        let p = BigUint::from(p);
        while (&m % &p).is_zero() {
            m /= &p;
            primes.push(p.clone());
        }
    }
    let mut t = BigUint::from(53u32);
    let limit = BigUint::from(1u32 << 16);
    while t < limit && &(&t * &t) <= &m {
        while (&m % &t).is_zero() {
            m /= &t;
            primes.push(t.clone());
        }
        t += 2u32;
    }
    if !m.is_one() {
        factor_into(m, &mut primes);
    }
    primes.sort();
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// All positive divisors of |n|; the caller is expected to keep n modest.
pub fn divisors(n: &BigInt) -> Vec<BigUint> {
    let mut divs = vec![BigUint::one()];
    for (p, e) in factorize(n) {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pk = BigUint::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        divs = next;
    }
    divs.sort();
    divs.dedup();
    divs
}

pub fn is_prime_u64(n: u64) -> bool {
    is_prime(&BigUint::from(n))
}

/// p-adic valuation of n (n != 0).
pub fn valuation(mut n: u64, p: u64) -> u32 {
    assert!(n != 0 && p >= 2);
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}
