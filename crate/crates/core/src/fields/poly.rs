//! Dense univariate polynomials over a prime field, stored little-endian
//! with no trailing zeros. Shared by the Galois-field and rational
//! function field implementations.

use super::primes::{inv_mod, mul_mod};

pub type Poly = Vec<u64>;

pub fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn degree(a: &[u64]) -> Option<usize> {
    if a.is_empty() {
        None
    } else {
        Some(a.len() - 1)
    }
}

pub fn add(a: &[u64], b: &[u64], p: u64) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p)
        .collect();
    trim(out)
}

pub fn neg(a: &[u64], p: u64) -> Poly {
    a.iter().map(|&c| (p - c) % p).collect()
}

pub fn sub(a: &[u64], b: &[u64], p: u64) -> Poly {
    add(a, &neg(b, p), p)
}

pub fn scale(a: &[u64], c: u64, p: u64) -> Poly {
    trim(a.iter().map(|&x| mul_mod(x, c, p)).collect())
}

pub fn mul(a: &[u64], b: &[u64], p: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    trim(out)
}

/// Quotient and remainder; `b` must be nonzero.
pub fn divrem(a: &[u64], b: &[u64], p: u64) -> (Poly, Poly) {
    let db = degree(b).expect("division by the zero polynomial");
    let lead_inv = inv_mod(b[db], p);
    let mut rem = a.to_vec();
    if rem.len() <= db {
        return (Vec::new(), trim(rem));
    }
    let mut quot = vec![0u64; rem.len() - db];
    for i in (db..rem.len()).rev() {
        let c = mul_mod(rem[i], lead_inv, p);
        if c == 0 {
            continue;
        }
        quot[i - db] = c;
        for (j, &bj) in b.iter().enumerate() {
            let k = i - db + j;
            rem[k] = (rem[k] + p - mul_mod(c, bj, p)) % p;
        }
    }
    rem.truncate(db);
    (trim(quot), trim(rem))
}

pub fn rem(a: &[u64], b: &[u64], p: u64) -> Poly {
    divrem(a, b, p).1
}

pub fn monic(a: &[u64], p: u64) -> Poly {
    match a.last() {
        None => Vec::new(),
        Some(&lead) => scale(a, inv_mod(lead, p), p),
    }
}

pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Poly {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    monic(&x, p)
}

pub fn constant(c: u64, p: u64) -> Poly {
    trim(vec![c % p])
}

/// All monic polynomials of the given degree, in increasing order of the
/// base-`p` encoding of their lower coefficients.
pub fn monic_of_degree(deg: usize, p: u64) -> impl Iterator<Item = Poly> {
    let count = p.checked_pow(deg as u32).unwrap_or(u64::MAX);
    (0..count).map(move |mut code| {
        let mut v = Vec::with_capacity(deg + 1);
        for _ in 0..deg {
            v.push(code % p);
            code /= p;
        }
        v.push(1);
        v
    })
}

/// Irreducibility by trial division with every monic polynomial of degree
/// at most `deg/2`.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let Some(deg) = degree(f) else { return false };
    if deg == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        for g in monic_of_degree(d, p) {
            if rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Square root in `F_p[t]` when it exists. For odd `p` the root is
/// recovered top-down and checked; for `p = 2` a polynomial is a square
/// exactly when all odd coefficients vanish.
pub fn sqrt(f: &[u64], p: u64) -> Option<Poly> {
    let f = trim(f.to_vec());
    if f.is_empty() {
        return Some(Vec::new());
    }
    let deg = f.len() - 1;
    if deg % 2 == 1 {
        return None;
    }
    if p == 2 {
        if f.iter().skip(1).step_by(2).any(|&c| c != 0) {
            return None;
        }
        return Some(f.iter().step_by(2).copied().collect());
    }
    let lead_root = super::primes::sqrt_mod_prime(f[deg], p)?;
    let n = deg / 2;
    let mut g = vec![0u64; n + 1];
    g[n] = lead_root;
    let two_lead_inv = inv_mod(mul_mod(2, lead_root, p), p);
    for k in 1..=n {
        // coefficient of t^(2n-k) in g^2 must match f
        let mut s = 0u64;
        for i in 1..k {
            s = (s + mul_mod(g[n - i], g[n - (k - i)], p)) % p;
        }
        let target = (f[deg - k] + p - s) % p;
        g[n - k] = mul_mod(target, two_lead_inv, p);
    }
    let g = trim(g);
    (mul(&g, &g, p) == f).then_some(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_identity() {
        let a = vec![1, 2, 0, 4, 3];
        let b = vec![2, 0, 1];
        let (q, r) = divrem(&a, &b, 5);
        assert_eq!(add(&mul(&q, &b, 5), &r, 5), trim(a));
        assert!(r.len() < b.len());
    }

    #[test]
    fn irreducibility() {
        assert!(is_irreducible(&[1, 0, 1], 3)); // x^2+1 over F3
        assert!(!is_irreducible(&[1, 0, 1], 5)); // 2^2+1 = 0 mod 5
        assert!(is_irreducible(&[1, 1, 1], 2)); // x^2+x+1 over F2
        assert!(!is_irreducible(&[1, 0, 1], 2));
    }

    #[test]
    fn square_roots() {
        let g = [3, 1, 4];
        for p in [2u64, 5, 7] {
            let g = trim(g.iter().map(|c| c % p).collect());
            let f = mul(&g, &g, p);
            let r = sqrt(&f, p).unwrap();
            assert_eq!(mul(&r, &r, p), f);
        }
        assert!(sqrt(&[0, 1], 5).is_none());
        assert!(sqrt(&[1, 1, 1], 2).is_none());
    }
}
