//! 64-bit modular arithmetic and deterministic prime selection.

use num_bigint::{BigInt, Sign};
use num_traits::Zero;

use super::Rational;

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

pub fn pow_mod(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    acc
}

/// Inverse modulo a prime; `a` must be nonzero mod `p`.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin for all 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The `count` largest primes below `2^bits`, in decreasing order.
pub fn primes_below_power_of_two(bits: u32, count: usize) -> Vec<u64> {
    assert!((3..=63).contains(&bits), "prime bits must lie in 3..=63");
    let mut out = Vec::with_capacity(count);
    let mut c = (1u64 << bits) - 1;
    while out.len() < count && c >= 2 {
        if is_prime(c) {
            out.push(c);
        }
        c -= 1;
    }
    out
}

pub fn reduce_bigint(x: &BigInt, p: u64) -> u64 {
    let r = (x.magnitude() % p).iter_u64_digits().next().unwrap_or(0);
    if x.sign() == Sign::Minus && r != 0 {
        p - r
    } else {
        r
    }
}

/// Image of a rational in `Z/p`, or `None` when `p` divides the denominator.
pub fn reduce_rational(x: &Rational, p: u64) -> Option<u64> {
    if x.is_zero() {
        return Some(0);
    }
    let den = reduce_bigint(x.denom(), p);
    if den == 0 {
        return None;
    }
    Some(mul_mod(reduce_bigint(x.numer(), p), inv_mod(den, p), p))
}
