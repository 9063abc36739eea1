//! Elementary integer number theory used throughout the crate.

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Divisors in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn totient(n: u64) -> u64 {
    prime_factors(n).iter().fold(n, |acc, p| acc / p * (p - 1))
}

pub fn mobius(n: u64) -> i64 {
    let mut n = n;
    let mut sign = 1;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Ramanujan sum `c_s(m) = sum_{(i,s)=1} xi_s^(i m)`, via Hoelder's formula.
pub fn ramanujan_sum(s: u64, m: u64) -> i64 {
    let t = s / gcd(s, m);
    mobius(t) * (totient(s) / totient(t)) as i64
}

/// Units of Z/n, i.e. 1 <= i <= n with gcd(i, n) = 1 (for n = 1 this is {1}).
pub fn units(n: u64) -> Vec<u64> {
    (1..=n).filter(|&i| gcd(i, n) == 1).collect()
}

pub fn pow_u128(base: u64, exp: u32) -> u128 {
    (base as u128).pow(exp)
}

pub fn big_pow(base: u64, exp: u32) -> BigInt {
    num_traits::pow(BigInt::from(base), exp as usize)
}

/// Number of monic irreducible polynomials of degree m over F_q, by the
/// Moebius inversion of sum_{e|m} e * pi_q(e) = q^m.
pub fn prime_count(q: u64, m: u32) -> BigInt {
    assert!(m >= 1);
    let mut total = BigInt::zero();
    for e in divisors(m as u64) {
        let mu = mobius(e);
        if mu != 0 {
            total += BigInt::from(mu) * big_pow(q, m / e as u32);
        }
    }
    total / BigInt::from(m)
}

/// Binomial coefficient with a big upper argument.
pub fn big_binomial(n: &BigInt, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - BigInt::from(i)) / BigInt::from(i + 1);
    }
    acc
}

/// Smallest non-negative representative of a mod m.
pub fn modulo(a: i64, m: i64) -> i64 {
    ((a % m) + m) % m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_tables() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(totient(12), 4);
        assert_eq!(mobius(30), -1);
        assert_eq!(mobius(12), 0);
        assert_eq!(units(6), vec![1, 5]);
        assert_eq!(units(1), vec![1]);
        assert_eq!(prime_factors(360), vec![2, 3, 5]);
    }

    #[test]
    fn prime_counts() {
        assert_eq!(prime_count(3, 2), BigInt::from(3));
        assert_eq!(prime_count(2, 4), BigInt::from(3));
        assert_eq!(prime_count(7, 1), BigInt::from(7));
        assert_eq!(prime_count(2, 3), BigInt::from(2));
    }

    #[test]
    fn binomial_matches_small_cases() {
        assert_eq!(big_binomial(&BigInt::from(10), 3), BigInt::from(120));
        assert_eq!(big_binomial(&BigInt::from(2), 3), BigInt::zero());
    }
}
