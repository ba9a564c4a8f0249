//! Linearized (q-)polynomials: evaluation, kernels, separability, the
//! q-th-root shift, and the conventional-gcd oracle.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{FqMatrix, Subspace};
use crate::polyarith::{self, Field};
use crate::tower::{AmbientElement, Tower};

/// c_0 x + c_1 x^q + ... + c_k x^{q^k}, with trailing zero coefficients
/// trimmed; the zero polynomial is the empty tuple. Serializes as a JSON
/// array of ambient element encodings, index i = coefficient of x^{q^i}.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QPolynomial {
    coeffs: Vec<AmbientElement>,
}

impl QPolynomial {
    pub fn new(tower: &Tower, mut coeffs: Vec<AmbientElement>) -> Result<QPolynomial> {
        for c in &coeffs {
            tower.validate_ambient(c)?;
        }
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Ok(QPolynomial { coeffs })
    }

    pub fn zero() -> QPolynomial {
        QPolynomial { coeffs: Vec::new() }
    }

    /// The identity map x.
    pub fn identity(tower: &Tower) -> QPolynomial {
        QPolynomial {
            coeffs: vec![tower.one()],
        }
    }

    pub(crate) fn from_trimmed(coeffs: Vec<AmbientElement>) -> QPolynomial {
        debug_assert!(!coeffs.last().is_some_and(|c| c.is_zero()));
        QPolynomial { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn q_degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[AmbientElement] {
        &self.coeffs
    }

    /// Coefficient of x^{q^i} (zero beyond the degree).
    pub fn coeff(&self, tower: &Tower, i: usize) -> AmbientElement {
        self.coeffs.get(i).cloned().unwrap_or_else(|| tower.zero())
    }

    /// Sum of c_i x^{q^i} at x, computed with incremental Frobenius.
    pub fn eval(&self, tower: &Tower, x: &AmbientElement) -> AmbientElement {
        let mut acc = tower.zero();
        let mut xi = x.clone();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                xi = tower.frobenius(&xi, 1);
            }
            if !c.is_zero() {
                acc = tower.add(&acc, &tower.mul(c, &xi));
            }
        }
        acc
    }

    /// All roots simple, i.e. c_0 != 0.
    pub fn is_separable(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(!self.coeffs[0].is_zero())
    }

    /// The M×M F_q-matrix of the evaluation map on the power basis.
    pub fn map_matrix(&self, tower: &Tower) -> FqMatrix {
        let m = tower.ambient_degree();
        let mut mat = FqMatrix::zeros(tower, m, m);
        for j in 0..m {
            let mut coords = vec![tower.base_zero(); m];
            coords[j] = tower.base_one();
            let bj = tower.from_coords(coords).expect("unit vector");
            let img = self.eval(tower, &bj);
            for (i, c) in tower.coords(&img).into_iter().enumerate() {
                *mat.get_mut(i, j) = c;
            }
        }
        mat
    }

    /// The ambient-truncated root space {x : f(x) = 0}, canonical RREF.
    /// Its dimension is at most the q-degree, with equality exactly when
    /// the full kernel lies in the ambient field.
    pub fn kernel(&self, tower: &Tower) -> Result<Subspace> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let ns = self.map_matrix(tower).nullspace(tower);
        Ok(Subspace::from_rref_matrix(tower, ns))
    }

    /// Coefficient-wise difference.
    pub fn sub(tower: &Tower, f: &QPolynomial, g: &QPolynomial) -> QPolynomial {
        let n = f.coeffs.len().max(g.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            let a = f.coeffs.get(i).cloned().unwrap_or_else(|| tower.zero());
            let b = g.coeffs.get(i).cloned().unwrap_or_else(|| tower.zero());
            coeffs.push(tower.sub(&a, &b));
        }
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPolynomial { coeffs }
    }

    /// Coefficient-wise scaling.
    pub fn scale(tower: &Tower, lambda: &AmbientElement, f: &QPolynomial) -> QPolynomial {
        let mut coeffs: Vec<AmbientElement> =
            f.coeffs.iter().map(|c| tower.mul(lambda, c)).collect();
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPolynomial { coeffs }
    }

    /// For f with zero x-coefficient, the q-polynomial h with h(x)^q = f(x)
    /// for all x; drops the q-degree by one. The coefficients are the
    /// unique q-th roots, taken through the inverse Frobenius bijection.
    pub fn q_shift_root(&self, tower: &Tower) -> Result<QPolynomial> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroLinearTerm);
        }
        let coeffs = self.coeffs[1..]
            .iter()
            .map(|c| tower.inv_frobenius(c))
            .collect();
        Ok(QPolynomial { coeffs })
    }

    /// Dense ordinary coefficient vector of length q^k + 1.
    pub fn to_ordinary(&self, tower: &Tower) -> Vec<AmbientElement> {
        if self.is_zero() {
            return Vec::new();
        }
        let q = tower.q();
        let top = q
            .checked_pow(self.q_degree().unwrap() as u32)
            .filter(|&n| n <= 1 << 20)
            .expect("ordinary expansion too large") as usize;
        let mut out = vec![tower.zero(); top + 1];
        let mut pos = 1usize;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                pos *= q as usize;
            }
            out[pos] = c.clone();
        }
        while out.last().is_some_and(|c| c.is_zero()) {
            out.pop();
        }
        out
    }

    /// Rebuild from ordinary coefficients; `None` if some coefficient off
    /// the q-power positions is nonzero.
    pub fn from_ordinary(tower: &Tower, ordinary: &[AmbientElement]) -> Option<QPolynomial> {
        let q = tower.q() as usize;
        let mut coeffs = Vec::new();
        let mut pos = 1usize;
        let mut covered = vec![false; ordinary.len()];
        if !ordinary.is_empty() {
            covered[0] = true; // constant term must be zero for a q-polynomial
            if !ordinary[0].is_zero() {
                return None;
            }
        }
        while pos < ordinary.len() {
            coeffs.push(ordinary[pos].clone());
            covered[pos] = true;
            match pos.checked_mul(q) {
                Some(next) => pos = next,
                None => break,
            }
        }
        for (i, c) in ordinary.iter().enumerate() {
            if !covered[i] && !c.is_zero() {
                return None;
            }
        }
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Some(QPolynomial { coeffs })
    }
}

/// Monic gcd of two q-polynomials viewed as ordinary polynomials, by the
/// Euclidean algorithm over the ambient field. Retained as an independent
/// oracle for the kernel-intersection bound; the production path is
/// linear-algebraic.
pub fn conventional_gcd(
    tower: &Tower,
    f: &QPolynomial,
    g: &QPolynomial,
) -> Result<Vec<AmbientElement>> {
    if f.is_zero() && g.is_zero() {
        return Err(Error::BothZero);
    }
    let amb = tower.ambient_ctx();
    Ok(polyarith::gcd(
        &amb,
        &f.to_ordinary(tower),
        &g.to_ordinary(tower),
    ))
}

/// Intersection of the two ambient-truncated kernels, by a stacked
/// nullspace computation.
pub fn kernel_intersection(
    tower: &Tower,
    f: &QPolynomial,
    g: &QPolynomial,
) -> Result<Subspace> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let m = tower.ambient_degree();
    let mf = f.map_matrix(tower);
    let mg = g.map_matrix(tower);
    let mut rows = mf.row_vecs();
    rows.extend(mg.row_vecs());
    let stacked = FqMatrix::from_rows(rows, m)?;
    Ok(Subspace::from_rref_matrix(
        tower,
        stacked.nullspace(tower),
    ))
}

/// Number of distinct roots of an ordinary polynomial that lie in the
/// ambient field: deg gcd(P, x^{q^M} - x), with the big power computed by
/// iterated q-th powering modulo P.
pub fn ambient_root_count(tower: &Tower, ordinary: &[AmbientElement]) -> usize {
    let amb = tower.ambient_ctx();
    let mut p = ordinary.to_vec();
    polyarith::trim(&amb, &mut p);
    if p.len() < 2 {
        return 0;
    }
    let q = tower.q();
    let x = vec![amb.zero(), amb.one()];
    let mut r = polyarith::rem(&amb, &x, &p);
    for _ in 0..tower.ambient_degree() {
        r = polyarith::powmod(&amb, &r, q, &p);
    }
    let g = polyarith::gcd(&amb, &polyarith::sub(&amb, &r, &x), &p);
    polyarith::degree(&g).unwrap_or(0)
}
