//! Dense univariate polynomial arithmetic over an abstract coefficient field.
//!
//! Polynomials are coefficient vectors, low degree first, with trailing
//! zeros trimmed (the zero polynomial is the empty vector). The same
//! routines serve every level of the tower: F_p scalars, F_q base elements
//! and ambient elements.

use std::fmt::Debug;

/// Field operations dispatched through a context value, so element data
/// stays plain and context-free.
pub(crate) trait Field {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// Number of elements of the field.
    fn size(&self) -> u128;
    /// Element with canonical index `k` in `[0, size)`.
    fn from_index(&self, k: u128) -> Self::Elem;
}

/// Integers modulo a prime.
#[derive(Clone, Copy, Debug)]
pub(crate) struct PrimeField {
    pub p: u64,
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            Some(pow_mod_u64(*a, self.p - 2, self.p))
        }
    }
    fn size(&self) -> u128 {
        self.p as u128
    }
    fn from_index(&self, k: u128) -> u64 {
        (k % self.p as u128) as u64
    }
}

pub(crate) fn trim<F: Field>(field: &F, v: &mut Vec<F::Elem>) {
    while v.last().is_some_and(|c| field.is_zero(c)) {
        v.pop();
    }
}

pub(crate) fn degree<T>(v: &[T]) -> Option<usize> {
    v.len().checked_sub(1)
}

pub(crate) fn sub<F: Field>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_else(|| field.zero());
        let y = b.get(i).cloned().unwrap_or_else(|| field.zero());
        out.push(field.sub(&x, &y));
    }
    trim(field, &mut out);
    out
}

pub(crate) fn mul<F: Field>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![field.zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if field.is_zero(ai) {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if field.is_zero(bj) {
                continue;
            }
            let t = field.mul(ai, bj);
            out[i + j] = field.add(&out[i + j], &t);
        }
    }
    trim(field, &mut out);
    out
}

/// Quotient and remainder by a nonzero divisor whose leading coefficient is
/// a unit (always the case over a field).
pub(crate) fn divrem<F: Field>(
    field: &F,
    a: &[F::Elem],
    d: &[F::Elem],
) -> (Vec<F::Elem>, Vec<F::Elem>) {
    assert!(!d.is_empty(), "division by the zero polynomial");
    let dd = d.len() - 1;
    let lead_inv = field.inv(&d[dd]).expect("leading coefficient is a unit");
    let mut r = a.to_vec();
    trim(field, &mut r);
    if r.len() <= dd {
        return (Vec::new(), r);
    }
    let mut q = vec![field.zero(); r.len() - dd];
    while r.len() > dd {
        let c = field.mul(r.last().unwrap(), &lead_inv);
        let shift = r.len() - 1 - dd;
        if !field.is_zero(&c) {
            q[shift] = c.clone();
            for (j, dj) in d.iter().enumerate() {
                let t = field.mul(&c, dj);
                r[shift + j] = field.sub(&r[shift + j], &t);
            }
        } else {
            // leading entry already zero after exact cancellation
            r.pop();
            continue;
        }
        trim(field, &mut r);
    }
    trim(field, &mut q);
    (q, r)
}

pub(crate) fn rem<F: Field>(field: &F, a: &[F::Elem], d: &[F::Elem]) -> Vec<F::Elem> {
    divrem(field, a, d).1
}

pub(crate) fn make_monic<F: Field>(field: &F, mut v: Vec<F::Elem>) -> Vec<F::Elem> {
    trim(field, &mut v);
    if let Some(lead) = v.last() {
        if *lead != field.one() {
            let inv = field.inv(lead).expect("leading coefficient is a unit");
            for c in v.iter_mut() {
                *c = field.mul(c, &inv);
            }
        }
    }
    v
}

/// Monic greatest common divisor (zero if both inputs are zero).
pub(crate) fn gcd<F: Field>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    trim(field, &mut r0);
    trim(field, &mut r1);
    while !r1.is_empty() {
        let r = rem(field, &r0, &r1);
        r0 = r1;
        r1 = r;
    }
    make_monic(field, r0)
}

/// `base^exp mod modulus`; the modulus must have degree at least one.
pub(crate) fn powmod<F: Field>(
    field: &F,
    base: &[F::Elem],
    mut exp: u128,
    modulus: &[F::Elem],
) -> Vec<F::Elem> {
    assert!(modulus.len() >= 2, "modulus must have positive degree");
    let mut result = vec![field.one()];
    let mut b = rem(field, base, modulus);
    while exp > 0 {
        if exp & 1 == 1 {
            result = rem(field, &mul(field, &result, &b), modulus);
        }
        exp >>= 1;
        if exp > 0 {
            b = rem(field, &mul(field, &b, &b), modulus);
        }
    }
    result
}

/// Inverse of `a` modulo `modulus` via the extended Euclidean algorithm;
/// `None` when the two are not coprime (or `a` reduces to zero).
pub(crate) fn mod_inverse<F: Field>(
    field: &F,
    a: &[F::Elem],
    modulus: &[F::Elem],
) -> Option<Vec<F::Elem>> {
    let mut r0 = modulus.to_vec();
    let mut r1 = rem(field, a, modulus);
    trim(field, &mut r0);
    let mut t0: Vec<F::Elem> = Vec::new();
    let mut t1 = vec![field.one()];
    while !r1.is_empty() {
        let (q, r) = divrem(field, &r0, &r1);
        let t = sub(field, &t0, &mul(field, &q, &t1));
        r0 = r1;
        r1 = r;
        t0 = t1;
        t1 = t;
    }
    if degree(&r0) != Some(0) {
        return None;
    }
    let scale = field.inv(&r0[0]).expect("nonzero by construction");
    let mut out: Vec<F::Elem> = t0.iter().map(|c| field.mul(c, &scale)).collect();
    trim(field, &mut out);
    Some(rem(field, &out, modulus))
}

/// Rabin irreducibility test for a monic polynomial of degree >= 1.
pub(crate) fn is_irreducible<F: Field>(field: &F, h: &[F::Elem]) -> bool {
    let n = degree(h).expect("nonzero polynomial");
    assert!(*h.last().unwrap() == field.one(), "h must be monic");
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let s = field.size();
    let x = vec![field.zero(), field.one()];
    let targets: Vec<usize> = prime_factors(n).into_iter().map(|l| n / l).collect();
    let mut cur = x.clone();
    for i in 1..=n {
        cur = powmod(field, &cur, s, h);
        if targets.contains(&i) {
            let g = gcd(field, &sub(field, &cur, &x), h);
            if degree(&g) != Some(0) {
                return false;
            }
        }
    }
    cur == x
}

/// Lexicographically smallest monic irreducible of the given degree.
///
/// Coefficient tuples `(c_0, ..., c_{n-1})` are compared low-degree-first,
/// each coefficient by its canonical index. Candidates with `c_0 = 0` are
/// divisible by x, so the search starts past that block for degree >= 2.
pub(crate) fn smallest_irreducible<F: Field>(field: &F, n: usize) -> Vec<F::Elem> {
    assert!(n >= 1);
    let s = field.size();
    let mut digits = vec![0u128; n];
    if n > 1 {
        digits[0] = 1;
    }
    loop {
        let mut h: Vec<F::Elem> = digits.iter().map(|&k| field.from_index(k)).collect();
        h.push(field.one());
        if is_irreducible(field, &h) {
            return h;
        }
        // advance the odometer; the last index is least significant
        let mut i = n - 1;
        loop {
            digits[i] += 1;
            if digits[i] < s {
                break;
            }
            digits[i] = 0;
            assert!(i > 0, "no irreducible polynomial found");
            i -= 1;
        }
    }
}

pub(crate) fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut result = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = ((result as u128 * base as u128) % m as u128) as u64;
        }
        base = ((base as u128 * base as u128) % m as u128) as u64;
        exp >>= 1;
    }
    result
}

/// Deterministic Miller-Rabin for u64.
pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..r - 1 {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Distinct prime factors of a small integer.
pub(crate) fn prime_factors(mut n: usize) -> Vec<usize> {
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

/// Divisors of a small integer, ascending.
pub(crate) fn divisors(n: usize) -> Vec<usize> {
    let mut out: Vec<usize> = (1..=n).filter(|d| n % d == 0).collect();
    out.sort_unstable();
    out
}
