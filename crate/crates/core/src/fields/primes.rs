//! Integer helpers: modular arithmetic on machine words, primality,
//! trial-division factorization and Legendre symbols.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Trial division bound used for square-class and Hilbert-symbol work.
pub const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse modulo a prime; `a` must be nonzero mod `p`.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(sp) {
            return n == sp;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    // These bases are deterministic for every 64-bit input.
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
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

/// Miller-Rabin on big integers. Deterministic below 3.3e24, probabilistic
/// (with the same fixed bases) above.
pub fn is_prime_big(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    if n.is_even() {
        return false;
    }
    let n_minus_1 = n - &one;
    let mut d = n_minus_1.clone();
    let mut s = 0u32;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Factorization of a positive integer as `(prime, exponent)` pairs.
///
/// Trial division runs up to [`TRIAL_DIVISION_LIMIT`]; a leftover cofactor
/// is accepted only if it is prime or the square of a prime. Anything else
/// is a `FactorizationLimit` error.
pub fn factor(n: &BigUint) -> Result<Vec<(BigUint, u32)>> {
    if n.is_zero() {
        return Err(Error::ZeroArgument);
    }
    let mut rest = n.clone();
    let mut out = Vec::new();
    let mut push = |p: BigUint, rest: &mut BigUint| {
        let mut e = 0;
        while (&*rest % &p).is_zero() {
            *rest /= &p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(BigUint::from(2u32), &mut rest);
    let mut d = 3u64;
    while d <= TRIAL_DIVISION_LIMIT {
        if rest.is_one() {
            break;
        }
        let dd = BigUint::from(d);
        if &dd * &dd > rest {
            break;
        }
        push(dd, &mut rest);
        d += 2;
    }
    if !rest.is_one() {
        let limit = BigUint::from(TRIAL_DIVISION_LIMIT);
        if &limit * &limit >= rest || is_prime_big(&rest) {
            out.push((rest, 1));
        } else {
            let r = rest.sqrt();
            if &r * &r == rest && is_prime_big(&r) {
                out.push((r, 2));
            } else {
                return Err(Error::FactorizationLimit(n.to_string()));
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Odd primes dividing `n` (which may be negative).
pub fn odd_prime_divisors(n: &BigInt) -> Result<Vec<BigUint>> {
    let m = n.abs().to_biguint().expect("abs is non-negative");
    Ok(factor(&m)?
        .into_iter()
        .map(|(p, _)| p)
        .filter(|p| p != &BigUint::from(2u32))
        .collect())
}

/// Squarefree part of a nonzero integer, keeping the sign.
pub fn squarefree_kernel(n: &BigInt) -> Result<BigInt> {
    if n.is_zero() {
        return Err(Error::ZeroArgument);
    }
    let mag = n.abs().to_biguint().expect("abs is non-negative");
    let mut core = BigUint::one();
    for (p, e) in factor(&mag)? {
        if e % 2 == 1 {
            core *= p;
        }
    }
    Ok(BigInt::from_biguint(
        if n.sign() == Sign::Minus { Sign::Minus } else { Sign::Plus },
        core,
    ))
}

pub fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

/// p-adic valuation of a nonzero integer together with the cofactor.
pub fn split_valuation(n: &BigInt, p: &BigInt) -> (i64, BigInt) {
    debug_assert!(!n.is_zero());
    let mut v = 0;
    let mut rest = n.clone();
    loop {
        let (q, r) = rest.div_rem(p);
        if !r.is_zero() {
            break;
        }
        rest = q;
        v += 1;
    }
    (v, rest)
}

/// Legendre symbol of an integer at an odd prime; 0 when `p | a`.
pub fn legendre_big(a: &BigInt, p: &BigUint) -> i32 {
    let pb = BigInt::from(p.clone());
    let r = a.mod_floor(&pb);
    if r.is_zero() {
        return 0;
    }
    let e = (&pb - 1u32) / 2u32;
    let v = r.modpow(&e, &pb);
    if v.is_one() {
        1
    } else {
        -1
    }
}

pub fn legendre_u64(a: u64, p: u64) -> i32 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Square root modulo an odd prime (Tonelli–Shanks); `None` for non-residues.
pub fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if legendre_u64(a, p) != 1 {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while legendre_u64(z, p) != -1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Least positive quadratic non-residue modulo an odd prime.
pub fn least_non_residue(p: u64) -> u64 {
    (2..p).find(|&a| legendre_u64(a, p) == -1).expect("odd prime has non-residues")
}

/// Determine whether `q` is a prime power `p^r`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q {
        if q.is_multiple_of(p) {
            break;
        }
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let mut rest = q;
    let mut r = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        r += 1;
    }
    (rest == 1 && is_prime_u64(p)).then_some((p, r))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
        assert!(is_prime_u64(1_000_000_007));
        assert!(!is_prime_u64(1_000_000_007 * 3));
    }

    #[test]
    fn factor_and_kernel() {
        let f = factor(&BigUint::from(360u32)).unwrap();
        assert_eq!(
            f,
            vec![(2u32.into(), 3), (3u32.into(), 2), (5u32.into(), 1)]
        );
        assert_eq!(squarefree_kernel(&BigInt::from(18)).unwrap(), BigInt::from(2));
        assert_eq!(squarefree_kernel(&BigInt::from(-12)).unwrap(), BigInt::from(-3));
        // A prime above the trial-division bound is still accepted.
        let big = BigUint::from(1_000_000_007u64);
        assert_eq!(factor(&big).unwrap(), vec![(big.clone(), 1)]);
    }

    #[test]
    fn factorization_limit() {
        // Product of two primes above 10^6 whose product exceeds 10^12.
        let n = BigUint::from(1_000_003u64) * BigUint::from(1_000_033u64);
        assert!(matches!(factor(&n), Err(Error::FactorizationLimit(_))));
        let sq = BigUint::from(1_000_003u64) * BigUint::from(1_000_003u64);
        assert_eq!(factor(&sq).unwrap(), vec![(BigUint::from(1_000_003u64), 2)]);
    }

    #[test]
    fn tonelli_matches_brute_force() {
        for p in [3u64, 5, 7, 11, 13, 17, 97] {
            for a in 0..p {
                let brute = (0..p).find(|x| x * x % p == a);
                match sqrt_mod_prime(a, p) {
                    Some(r) => assert_eq!(r * r % p, a),
                    None => assert!(brute.is_none()),
                }
            }
        }
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(13), Some((13, 1)));
        assert_eq!(prime_power(12), None);
        assert_eq!(least_non_residue(5), 2);
        assert_eq!(least_non_residue(7), 3);
    }
}
