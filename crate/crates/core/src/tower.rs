//! Exact arithmetic in the tower F_p ⊂ F_q ⊂ F_{q^M}, with q = p^e.
//!
//! Both extension steps are defined by the lexicographically smallest monic
//! irreducible of the required degree (coefficient tuples compared
//! low-degree-first, coefficients by canonical index), so the same
//! parameters always construct the same fields. Serialized data is only
//! portable across builds using this rule.

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::polyarith::{self, Field, PrimeField};

/// Default ceiling on the ambient element count q^M.
pub const DEFAULT_SIZE_BOUND: u128 = 1 << 64;

type Limbs = SmallVec<[u64; 2]>;

/// An element of F_q = F_p[x]/(h_base): `e` coefficients in `[0, p)`,
/// low degree first. Serializes as a plain JSON array of integers.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BaseElement {
    coeffs: Limbs,
}

impl BaseElement {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Canonical integer index: sum of c_i * p^i.
    pub fn index(&self, p: u64) -> u128 {
        let mut k = 0u128;
        for &c in self.coeffs.iter().rev() {
            k = k * p as u128 + c as u128;
        }
        k
    }
}

/// An element of the ambient field F_{q^M} = F_q[y]/(h_ext): `M` base
/// elements, low degree first. Its coefficient vector doubles as its
/// coordinate tuple with respect to the power basis of the h_ext root.
/// Serializes as a JSON array of M arrays of e integers.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AmbientElement {
    coeffs: Vec<BaseElement>,
}

impl AmbientElement {
    pub fn coeffs(&self) -> &[BaseElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

/// F_q as a coefficient field: p, e and the defining polynomial h_base.
#[derive(Clone, Copy)]
pub(crate) struct BaseCtx<'a> {
    pub fp: PrimeField,
    pub e: usize,
    pub h: &'a [u64],
}

impl BaseCtx<'_> {
    fn make(&self, mut poly: Vec<u64>) -> BaseElement {
        debug_assert!(poly.len() <= self.e);
        poly.resize(self.e, 0);
        BaseElement {
            coeffs: Limbs::from_vec(poly),
        }
    }

    fn as_poly(a: &BaseElement) -> Vec<u64> {
        let mut v = a.coeffs.to_vec();
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }
}

impl Field for BaseCtx<'_> {
    type Elem = BaseElement;

    fn zero(&self) -> BaseElement {
        BaseElement {
            coeffs: SmallVec::from_elem(0, self.e),
        }
    }

    fn one(&self) -> BaseElement {
        let mut c = SmallVec::from_elem(0, self.e);
        c[0] = 1 % self.fp.p;
        BaseElement { coeffs: c }
    }

    fn is_zero(&self, a: &BaseElement) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &BaseElement, b: &BaseElement) -> BaseElement {
        let coeffs = a
            .coeffs
            .iter()
            .zip(b.coeffs.iter())
            .map(|(x, y)| self.fp.add(x, y))
            .collect();
        BaseElement { coeffs }
    }

    fn sub(&self, a: &BaseElement, b: &BaseElement) -> BaseElement {
        let coeffs = a
            .coeffs
            .iter()
            .zip(b.coeffs.iter())
            .map(|(x, y)| self.fp.sub(x, y))
            .collect();
        BaseElement { coeffs }
    }

    fn neg(&self, a: &BaseElement) -> BaseElement {
        let coeffs = a.coeffs.iter().map(|x| self.fp.neg(x)).collect();
        BaseElement { coeffs }
    }

    fn mul(&self, a: &BaseElement, b: &BaseElement) -> BaseElement {
        if self.e == 1 {
            return BaseElement {
                coeffs: SmallVec::from_elem(self.fp.mul(&a.coeffs[0], &b.coeffs[0]), 1),
            };
        }
        // schoolbook product, then reduction by the monic h_base
        let e = self.e;
        let mut prod = vec![0u64; 2 * e - 1];
        for (i, &ai) in a.coeffs.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.coeffs.iter().enumerate() {
                if bj == 0 {
                    continue;
                }
                prod[i + j] = self.fp.add(&prod[i + j], &self.fp.mul(&ai, &bj));
            }
        }
        for i in (e..prod.len()).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            for j in 0..e {
                let t = self.fp.mul(&c, &self.h[j]);
                prod[i - e + j] = self.fp.sub(&prod[i - e + j], &t);
            }
        }
        prod.truncate(e);
        BaseElement {
            coeffs: Limbs::from_vec(prod),
        }
    }

    fn inv(&self, a: &BaseElement) -> Option<BaseElement> {
        let poly = Self::as_poly(a);
        let inv = polyarith::mod_inverse(&self.fp, &poly, self.h)?;
        Some(self.make(inv))
    }

    fn size(&self) -> u128 {
        (self.fp.p as u128)
            .checked_pow(self.e as u32)
            .expect("base field size fits u128")
    }

    fn from_index(&self, mut k: u128) -> BaseElement {
        let p = self.fp.p as u128;
        let coeffs = (0..self.e)
            .map(|_| {
                let d = (k % p) as u64;
                k /= p;
                d
            })
            .collect();
        BaseElement { coeffs }
    }
}

/// F_{q^M} as a coefficient field over BaseCtx.
#[derive(Clone, Copy)]
pub(crate) struct AmbientCtx<'a> {
    pub base: BaseCtx<'a>,
    pub m: usize,
    pub h: &'a [BaseElement],
}

impl AmbientCtx<'_> {
    fn make(&self, mut poly: Vec<BaseElement>) -> AmbientElement {
        debug_assert!(poly.len() <= self.m);
        poly.resize(self.m, self.base.zero());
        AmbientElement { coeffs: poly }
    }

    fn as_poly(&self, a: &AmbientElement) -> Vec<BaseElement> {
        let mut v = a.coeffs.clone();
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        v
    }
}

impl Field for AmbientCtx<'_> {
    type Elem = AmbientElement;

    fn zero(&self) -> AmbientElement {
        AmbientElement {
            coeffs: vec![self.base.zero(); self.m],
        }
    }

    fn one(&self) -> AmbientElement {
        let mut coeffs = vec![self.base.zero(); self.m];
        coeffs[0] = self.base.one();
        AmbientElement { coeffs }
    }

    fn is_zero(&self, a: &AmbientElement) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &AmbientElement, b: &AmbientElement) -> AmbientElement {
        let coeffs = a
            .coeffs
            .iter()
            .zip(b.coeffs.iter())
            .map(|(x, y)| self.base.add(x, y))
            .collect();
        AmbientElement { coeffs }
    }

    fn sub(&self, a: &AmbientElement, b: &AmbientElement) -> AmbientElement {
        let coeffs = a
            .coeffs
            .iter()
            .zip(b.coeffs.iter())
            .map(|(x, y)| self.base.sub(x, y))
            .collect();
        AmbientElement { coeffs }
    }

    fn neg(&self, a: &AmbientElement) -> AmbientElement {
        let coeffs = a.coeffs.iter().map(|x| self.base.neg(x)).collect();
        AmbientElement { coeffs }
    }

    fn mul(&self, a: &AmbientElement, b: &AmbientElement) -> AmbientElement {
        if self.m == 1 {
            return AmbientElement {
                coeffs: vec![self.base.mul(&a.coeffs[0], &b.coeffs[0])],
            };
        }
        let m = self.m;
        let mut prod = vec![self.base.zero(); 2 * m - 1];
        for (i, ai) in a.coeffs.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.coeffs.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let t = self.base.mul(ai, bj);
                prod[i + j] = self.base.add(&prod[i + j], &t);
            }
        }
        for i in (m..prod.len()).rev() {
            if prod[i].is_zero() {
                continue;
            }
            let c = prod[i].clone();
            for j in 0..m {
                if self.h[j].is_zero() {
                    continue;
                }
                let t = self.base.mul(&c, &self.h[j]);
                prod[i - m + j] = self.base.sub(&prod[i - m + j], &t);
            }
        }
        prod.truncate(m);
        AmbientElement { coeffs: prod }
    }

    fn inv(&self, a: &AmbientElement) -> Option<AmbientElement> {
        let poly = self.as_poly(a);
        let inv = polyarith::mod_inverse(&self.base, &poly, self.h)?;
        Some(self.make(inv))
    }

    fn size(&self) -> u128 {
        self.base
            .size()
            .checked_pow(self.m as u32)
            .expect("ambient size fits u128")
    }

    fn from_index(&self, mut k: u128) -> AmbientElement {
        let q = self.base.size();
        let coeffs = (0..self.m)
            .map(|_| {
                let d = k % q;
                k /= q;
                self.base.from_index(d)
            })
            .collect();
        AmbientElement { coeffs }
    }
}

/// The binary operations of [`Tower::arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithKind {
    Add,
    Sub,
    Mul,
    Neg,
    Inv,
}

/// The arithmetic universe: F_p ⊂ F_q ⊂ F_{q^M}, with the matrix of the
/// q-Frobenius precomputed on the power basis.
pub struct Tower {
    p: u64,
    e: usize,
    m: usize,
    h_base: Vec<u64>,
    h_ext: Vec<BaseElement>,
    // column j = (gamma^j)^q, whose coefficients are the j-th matrix column
    frob_cols: Vec<AmbientElement>,
}

impl Tower {
    /// Deterministically construct the tower for (p, e, M) under the
    /// default size bound.
    pub fn build(p: u64, e: usize, m: usize) -> Result<Tower> {
        Self::build_with_bound(p, e, m, DEFAULT_SIZE_BOUND)
    }

    pub fn build_with_bound(p: u64, e: usize, m: usize, bound: u128) -> Result<Tower> {
        if !polyarith::is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 || m == 0 {
            return Err(Error::OutOfRange(
                "extension degrees must be positive".into(),
            ));
        }
        let total = (e as u32).checked_mul(m as u32).and_then(|em| {
            (p as u128).checked_pow(em)
        });
        match total {
            Some(n) if n <= bound => {}
            _ => return Err(Error::SizeBoundExceeded { bound }),
        }

        let fp = PrimeField { p };
        let h_base = polyarith::smallest_irreducible(&fp, e);
        let base = BaseCtx {
            fp,
            e,
            h: &h_base,
        };
        let h_ext = polyarith::smallest_irreducible(&base, m);

        let mut tower = Tower {
            p,
            e,
            m,
            h_base: h_base.clone(),
            h_ext,
            frob_cols: Vec::new(),
        };
        tower.precompute_frobenius();
        Ok(tower)
    }

    /// Columns of the q-Frobenius matrix: (gamma^j)^q for the power basis
    /// gamma^j, built by iterated products and validated against direct
    /// square-and-multiply powering of each basis element.
    fn precompute_frobenius(&mut self) {
        let q = self.q();
        let cols = {
            let amb = self.ambient_ctx();
            let gamma_q = if self.m >= 2 {
                self.pow(&self.generator(), q)
            } else {
                amb.one()
            };
            let mut cols = Vec::with_capacity(self.m);
            let mut w = amb.one();
            for j in 0..self.m {
                if j > 0 {
                    w = amb.mul(&w, &gamma_q);
                }
                cols.push(w.clone());
            }
            cols
        };
        self.frob_cols = cols;

        let amb = self.ambient_ctx();
        let mut basis_sum = amb.zero();
        for j in 0..self.m {
            let mut coeffs = vec![self.base_zero(); self.m];
            coeffs[j] = self.base_one();
            let bj = AmbientElement { coeffs };
            basis_sum = amb.add(&basis_sum, &bj);
            let direct = self.pow(&bj, q);
            assert_eq!(
                self.frob_cols[j], direct,
                "frobenius matrix column {j} disagrees with direct powering"
            );
        }
        let applied = self.apply_frobenius_matrix(&basis_sum);
        assert_eq!(
            applied,
            self.pow(&basis_sum, q),
            "frobenius matrix application disagrees with direct powering"
        );
    }

    pub(crate) fn base_ctx(&self) -> BaseCtx<'_> {
        BaseCtx {
            fp: PrimeField { p: self.p },
            e: self.e,
            h: &self.h_base,
        }
    }

    pub(crate) fn ambient_ctx(&self) -> AmbientCtx<'_> {
        AmbientCtx {
            base: self.base_ctx(),
            m: self.m,
            h: &self.h_ext,
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> usize {
        self.e
    }

    /// q = p^e.
    pub fn q(&self) -> u128 {
        self.base_ctx().size()
    }

    /// Extension degree M of the ambient field over F_q.
    pub fn ambient_degree(&self) -> usize {
        self.m
    }

    /// Number of ambient elements, q^M.
    pub fn ambient_size(&self) -> u128 {
        self.ambient_ctx().size()
    }

    /// Defining polynomial of F_q over F_p (monic, length e + 1).
    pub fn h_base(&self) -> &[u64] {
        &self.h_base
    }

    /// Defining polynomial of the ambient field over F_q (monic, length M + 1).
    pub fn h_ext(&self) -> &[BaseElement] {
        &self.h_ext
    }

    // ---- base field elements ----

    pub fn base_zero(&self) -> BaseElement {
        self.base_ctx().zero()
    }

    pub fn base_one(&self) -> BaseElement {
        self.base_ctx().one()
    }

    pub fn base_from_index(&self, k: u128) -> BaseElement {
        self.base_ctx().from_index(k % self.q())
    }

    pub fn base_from_coeffs(&self, coeffs: &[u64]) -> Result<BaseElement> {
        if coeffs.len() != self.e {
            return Err(Error::WrongLength {
                expected: self.e,
                found: coeffs.len(),
            });
        }
        if coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::MixedTowers("base coefficient out of range"));
        }
        Ok(BaseElement {
            coeffs: Limbs::from_slice(coeffs),
        })
    }

    pub fn base_add(&self, a: &BaseElement, b: &BaseElement) -> BaseElement {
        self.base_ctx().add(a, b)
    }

    pub fn base_sub(&self, a: &BaseElement, b: &BaseElement) -> BaseElement {
        self.base_ctx().sub(a, b)
    }

    pub fn base_neg(&self, a: &BaseElement) -> BaseElement {
        self.base_ctx().neg(a)
    }

    pub fn base_mul(&self, a: &BaseElement, b: &BaseElement) -> BaseElement {
        self.base_ctx().mul(a, b)
    }

    pub fn base_inv(&self, a: &BaseElement) -> Result<BaseElement> {
        self.base_ctx().inv(a).ok_or(Error::DivisionByZero)
    }

    pub fn validate_base(&self, a: &BaseElement) -> Result<()> {
        if a.coeffs.len() != self.e {
            return Err(Error::MixedTowers("base element has wrong length"));
        }
        if a.coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::MixedTowers("base coefficient out of range"));
        }
        Ok(())
    }

    // ---- ambient elements ----

    pub fn zero(&self) -> AmbientElement {
        self.ambient_ctx().zero()
    }

    pub fn one(&self) -> AmbientElement {
        self.ambient_ctx().one()
    }

    /// The residue class of the prime-field integer k.
    pub fn scalar(&self, k: u64) -> AmbientElement {
        let mut coeffs = vec![self.base_zero(); self.m];
        let mut base = SmallVec::from_elem(0, self.e);
        base[0] = k % self.p;
        coeffs[0] = BaseElement { coeffs: base };
        AmbientElement { coeffs }
    }

    /// The power-basis generator (the h_ext root); zero when M = 1.
    pub fn generator(&self) -> AmbientElement {
        let mut coeffs = vec![self.base_zero(); self.m];
        if self.m >= 2 {
            coeffs[1] = self.base_one();
        }
        AmbientElement { coeffs }
    }

    pub fn from_index(&self, k: u128) -> AmbientElement {
        self.ambient_ctx().from_index(k % self.ambient_size())
    }

    pub fn index(&self, x: &AmbientElement) -> u128 {
        let q = self.q();
        let mut k = 0u128;
        for c in x.coeffs.iter().rev() {
            k = k * q + c.index(self.p);
        }
        k
    }

    /// Lift a base element into the ambient field.
    pub fn embed_base(&self, a: &BaseElement) -> AmbientElement {
        let mut coeffs = vec![self.base_zero(); self.m];
        coeffs[0] = a.clone();
        AmbientElement { coeffs }
    }

    pub fn validate_ambient(&self, x: &AmbientElement) -> Result<()> {
        if x.coeffs.len() != self.m {
            return Err(Error::MixedTowers("ambient element has wrong length"));
        }
        for c in &x.coeffs {
            self.validate_base(c)?;
        }
        Ok(())
    }

    pub fn add(&self, x: &AmbientElement, y: &AmbientElement) -> AmbientElement {
        self.ambient_ctx().add(x, y)
    }

    pub fn sub(&self, x: &AmbientElement, y: &AmbientElement) -> AmbientElement {
        self.ambient_ctx().sub(x, y)
    }

    pub fn neg(&self, x: &AmbientElement) -> AmbientElement {
        self.ambient_ctx().neg(x)
    }

    pub fn mul(&self, x: &AmbientElement, y: &AmbientElement) -> AmbientElement {
        self.ambient_ctx().mul(x, y)
    }

    pub fn inv(&self, x: &AmbientElement) -> Result<AmbientElement> {
        self.ambient_ctx().inv(x).ok_or(Error::DivisionByZero)
    }

    /// Checked arithmetic entry point: validates operand shapes first.
    /// Neg and Inv ignore the second operand.
    pub fn arith(
        &self,
        x: &AmbientElement,
        y: &AmbientElement,
        kind: ArithKind,
    ) -> Result<AmbientElement> {
        self.validate_ambient(x)?;
        if matches!(kind, ArithKind::Add | ArithKind::Sub | ArithKind::Mul) {
            self.validate_ambient(y)?;
        }
        match kind {
            ArithKind::Add => Ok(self.add(x, y)),
            ArithKind::Sub => Ok(self.sub(x, y)),
            ArithKind::Mul => Ok(self.mul(x, y)),
            ArithKind::Neg => Ok(self.neg(x)),
            ArithKind::Inv => self.inv(x),
        }
    }

    /// Multiply an ambient element by an F_q scalar (coordinate-wise).
    pub fn scale(&self, lambda: &BaseElement, x: &AmbientElement) -> AmbientElement {
        let base = self.base_ctx();
        let coeffs = x.coeffs.iter().map(|c| base.mul(lambda, c)).collect();
        AmbientElement { coeffs }
    }

    pub fn pow(&self, x: &AmbientElement, mut n: u128) -> AmbientElement {
        let amb = self.ambient_ctx();
        let mut result = amb.one();
        let mut b = x.clone();
        while n > 0 {
            if n & 1 == 1 {
                result = amb.mul(&result, &b);
            }
            n >>= 1;
            if n > 0 {
                b = amb.mul(&b, &b);
            }
        }
        result
    }

    fn apply_frobenius_matrix(&self, x: &AmbientElement) -> AmbientElement {
        let amb = self.ambient_ctx();
        let mut acc = amb.zero();
        for (j, col) in self.frob_cols.iter().enumerate() {
            if x.coeffs[j].is_zero() {
                continue;
            }
            let t = self.scale(&x.coeffs[j], col);
            acc = amb.add(&acc, &t);
        }
        acc
    }

    /// x^{q^i}, via the precomputed F_q-linear matrix of x ↦ x^q.
    pub fn frobenius(&self, x: &AmbientElement, i: usize) -> AmbientElement {
        let mut r = x.clone();
        for _ in 0..(i % self.m) {
            r = self.apply_frobenius_matrix(&r);
        }
        r
    }

    /// The unique q-th root (inverse of the Frobenius bijection).
    pub fn inv_frobenius(&self, x: &AmbientElement) -> AmbientElement {
        self.frobenius(x, self.m - 1)
    }

    /// Whether x lies in the subfield F_{q^d}; d must divide M.
    pub fn subfield_test(&self, x: &AmbientElement, d: usize) -> Result<bool> {
        if d == 0 || self.m % d != 0 {
            return Err(Error::NonDivisorDegree { d, m: self.m });
        }
        Ok(self.frobenius(x, d) == *x)
    }

    /// Degree over F_q of the subfield generated by x: the least d | M with
    /// x^{q^d} = x.
    pub fn element_degree(&self, x: &AmbientElement) -> usize {
        for d in polyarith::divisors(self.m) {
            if self.frobenius(x, d) == *x {
                return d;
            }
        }
        self.m
    }

    /// F_q-coordinates of x with respect to the power basis.
    pub fn coords(&self, x: &AmbientElement) -> Vec<BaseElement> {
        x.coeffs.clone()
    }

    pub fn from_coords(&self, coords: Vec<BaseElement>) -> Result<AmbientElement> {
        if coords.len() != self.m {
            return Err(Error::WrongLength {
                expected: self.m,
                found: coords.len(),
            });
        }
        for c in &coords {
            self.validate_base(c)?;
        }
        Ok(AmbientElement { coeffs: coords })
    }
}
