//! F_q-linear algebra: matrices, Gaussian elimination, nullspaces, affine
//! solves, and subspaces in canonical reduced row echelon form.

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::polyarith::{divisors, Field};
use crate::tower::{AmbientElement, BaseElement, Tower};

/// A dense matrix over F_q, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FqMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BaseElement>,
}

impl FqMatrix {
    pub fn zeros(tower: &Tower, rows: usize, cols: usize) -> FqMatrix {
        FqMatrix {
            rows,
            cols,
            data: vec![tower.base_zero(); rows * cols],
        }
    }

    pub fn identity(tower: &Tower, n: usize) -> FqMatrix {
        let mut m = Self::zeros(tower, n, n);
        for i in 0..n {
            *m.get_mut(i, i) = tower.base_one();
        }
        m
    }

    /// Build from rows, each of length `cols` (rows may be empty).
    pub fn from_rows(rows: Vec<Vec<BaseElement>>, cols: usize) -> Result<FqMatrix> {
        for r in &rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row of length {} in a {}-column matrix",
                    r.len(),
                    cols
                )));
            }
        }
        let nrows = rows.len();
        Ok(FqMatrix {
            rows: nrows,
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BaseElement {
        &self.data[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut BaseElement {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[BaseElement] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<BaseElement>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self, tower: &Tower) -> Vec<usize> {
        let base = tower.base_ctx();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pivot_row) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(r, pivot_row);
            let inv = base.inv(self.get(r, c)).expect("pivot is nonzero");
            for j in c..self.cols {
                let v = base.mul(self.get(r, j), &inv);
                *self.get_mut(r, j) = v;
            }
            for i in 0..self.rows {
                if i == r || self.get(i, c).is_zero() {
                    continue;
                }
                let factor = self.get(i, c).clone();
                for j in c..self.cols {
                    let t = base.mul(&factor, self.get(r, j));
                    let v = base.sub(self.get(i, j), &t);
                    *self.get_mut(i, j) = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, tower: &Tower) -> usize {
        let mut copy = self.clone();
        copy.rref(tower).len()
    }

    /// Canonical RREF basis of the right nullspace, one row per basis
    /// vector.
    pub fn nullspace(&self, tower: &Tower) -> FqMatrix {
        let base = tower.base_ctx();
        let mut red = self.clone();
        let pivots = red.rref(tower);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut rows = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![tower.base_zero(); self.cols];
            v[f] = tower.base_one();
            for (ri, &pc) in pivots.iter().enumerate() {
                v[pc] = base.neg(red.get(ri, f));
            }
            rows.push(v);
        }
        let mut basis = FqMatrix::from_rows(rows, self.cols).expect("consistent rows");
        basis.rref(tower);
        basis
    }

    pub fn matmul(&self, tower: &Tower, rhs: &FqMatrix) -> Result<FqMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let base = tower.base_ctx();
        let mut out = FqMatrix::zeros(tower, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let t = base.mul(a, rhs.get(k, j));
                    let v = base.add(out.get(i, j), &t);
                    *out.get_mut(i, j) = v;
                }
            }
        }
        Ok(out)
    }

    pub fn matpow(&self, tower: &Tower, k: usize) -> Result<FqMatrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("matrix power of a non-square".into()));
        }
        let mut out = FqMatrix::identity(tower, self.rows);
        for _ in 0..k {
            out = out.matmul(tower, self)?;
        }
        Ok(out)
    }

    /// Determinant by Gaussian elimination with row-swap sign tracking.
    pub fn determinant(&self, tower: &Tower) -> Result<BaseElement> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("determinant of a non-square".into()));
        }
        let base = tower.base_ctx();
        let mut a = self.clone();
        let n = a.rows;
        let mut det = tower.base_one();
        let mut negate = false;
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| !a.get(i, c).is_zero()) else {
                return Ok(tower.base_zero());
            };
            if pr != c {
                a.swap_rows(pr, c);
                negate = !negate;
            }
            det = base.mul(&det, a.get(c, c));
            let inv = base.inv(a.get(c, c)).expect("pivot is nonzero");
            for i in c + 1..n {
                if a.get(i, c).is_zero() {
                    continue;
                }
                let factor = base.mul(a.get(i, c), &inv);
                for j in c..n {
                    let t = base.mul(&factor, a.get(c, j));
                    let v = base.sub(a.get(i, j), &t);
                    *a.get_mut(i, j) = v;
                }
            }
        }
        if negate {
            det = base.neg(&det);
        }
        Ok(det)
    }
}

/// Result of [`linsolve`].
#[derive(Clone, Debug)]
pub enum LinSolveOutcome {
    /// No right-hand side was given: the full solution set of A·x = 0.
    Homogeneous { nullspace: FqMatrix },
    /// A·x = b is solvable; the solution set is `particular + nullspace`.
    Affine {
        particular: Vec<BaseElement>,
        nullspace: FqMatrix,
    },
    Inconsistent,
}

/// Solve A·x = 0 (when `b` is absent) or A·x = b exactly over F_q.
/// Inconsistency is an outcome, not an error.
pub fn linsolve(
    tower: &Tower,
    a: &FqMatrix,
    b: Option<&[BaseElement]>,
) -> Result<LinSolveOutcome> {
    let Some(b) = b else {
        return Ok(LinSolveOutcome::Homogeneous {
            nullspace: a.nullspace(tower),
        });
    };
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "rhs of length {} for a matrix with {} rows",
            b.len(),
            a.rows()
        )));
    }
    let mut aug_rows = a.row_vecs();
    for (row, bi) in aug_rows.iter_mut().zip(b.iter()) {
        row.push(bi.clone());
    }
    let mut aug = FqMatrix::from_rows(aug_rows, a.cols() + 1)?;
    let pivots = aug.rref(tower);
    if pivots.contains(&a.cols()) {
        return Ok(LinSolveOutcome::Inconsistent);
    }
    let mut particular = vec![tower.base_zero(); a.cols()];
    for (ri, &pc) in pivots.iter().enumerate() {
        particular[pc] = aug.get(ri, a.cols()).clone();
    }
    Ok(LinSolveOutcome::Affine {
        particular,
        nullspace: a.nullspace(tower),
    })
}

/// An F_q-subspace of the ambient field in canonical reduced row echelon
/// form. Two values are equal exactly when they are the same subspace.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<Vec<BaseElement>>,
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.basis.len()))?;
        for row in &self.basis {
            seq.serialize_element(row)?;
        }
        seq.end()
    }
}

impl Subspace {
    pub fn zero(tower: &Tower) -> Subspace {
        Subspace {
            ambient_dim: tower.ambient_degree(),
            basis: Vec::new(),
        }
    }

    /// Span of arbitrary coordinate rows (validated, then canonicalized).
    pub fn from_rows(tower: &Tower, rows: Vec<Vec<BaseElement>>) -> Result<Subspace> {
        let m = tower.ambient_degree();
        for row in &rows {
            if row.len() != m {
                return Err(Error::WrongLength {
                    expected: m,
                    found: row.len(),
                });
            }
            for c in row {
                tower.validate_base(c)?;
            }
        }
        let mut mat = FqMatrix::from_rows(rows, m)?;
        mat.rref(tower);
        Ok(Self::from_rref_matrix(tower, mat))
    }

    pub fn from_elements(tower: &Tower, elems: &[AmbientElement]) -> Result<Subspace> {
        let rows = elems.iter().map(|x| tower.coords(x)).collect();
        Self::from_rows(tower, rows)
    }

    /// Wrap a matrix already in RREF, dropping zero rows.
    pub(crate) fn from_rref_matrix(tower: &Tower, mat: FqMatrix) -> Subspace {
        let _ = tower;
        let basis = (0..mat.rows())
            .map(|i| mat.row(i).to_vec())
            .filter(|row| row.iter().any(|c| !c.is_zero()))
            .collect();
        Subspace {
            ambient_dim: mat.cols(),
            basis,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn basis_rows(&self) -> &[Vec<BaseElement>] {
        &self.basis
    }

    pub fn basis_elements(&self, tower: &Tower) -> Vec<AmbientElement> {
        self.basis
            .iter()
            .map(|row| tower.from_coords(row.clone()).expect("valid basis row"))
            .collect()
    }

    /// Pivot column of each basis row.
    pub fn pivots(&self) -> Vec<usize> {
        self.basis
            .iter()
            .map(|row| row.iter().position(|c| !c.is_zero()).expect("nonzero row"))
            .collect()
    }

    /// Reduce a coordinate vector modulo the basis: pivot coordinates of
    /// the result are zero. The result is the lexicographically smallest
    /// member of `v + self` (coordinates compared low-index-first).
    pub fn reduce(&self, tower: &Tower, v: &[BaseElement]) -> Vec<BaseElement> {
        let base = tower.base_ctx();
        let mut w = v.to_vec();
        for (row, pc) in self.basis.iter().zip(self.pivots()) {
            if w[pc].is_zero() {
                continue;
            }
            let c = w[pc].clone();
            for (wj, rj) in w.iter_mut().zip(row.iter()) {
                let t = base.mul(&c, rj);
                *wj = base.sub(wj, &t);
            }
        }
        w
    }

    pub fn contains_coords(&self, tower: &Tower, v: &[BaseElement]) -> bool {
        self.reduce(tower, v).iter().all(|c| c.is_zero())
    }

    pub fn contains(&self, tower: &Tower, x: &AmbientElement) -> bool {
        self.contains_coords(tower, &tower.coords(x))
    }

    pub fn contains_space(&self, tower: &Tower, other: &Subspace) -> bool {
        other
            .basis
            .iter()
            .all(|row| self.contains_coords(tower, row))
    }

    pub fn join(&self, tower: &Tower, other: &Subspace) -> Subspace {
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Subspace::from_rows(tower, rows).expect("rows already validated")
    }

    /// Orthogonal complement with respect to the standard dot form.
    pub fn orthogonal(&self, tower: &Tower) -> Subspace {
        let mat = FqMatrix::from_rows(self.basis.clone(), self.ambient_dim)
            .expect("basis rows are rectangular");
        Subspace::from_rref_matrix(tower, mat.nullspace(tower))
    }

    /// Intersection via (U ∩ W)⊥ = U⊥ + W⊥.
    pub fn intersect(&self, tower: &Tower, other: &Subspace) -> Subspace {
        self.orthogonal(tower)
            .join(tower, &other.orthogonal(tower))
            .orthogonal(tower)
    }

    /// All q^dim member elements. Intended for small subspaces.
    pub fn elements(&self, tower: &Tower) -> Vec<AmbientElement> {
        let q = tower.q();
        let total = q.pow(self.dim() as u32);
        let base = tower.base_ctx();
        let mut out = Vec::with_capacity(total as usize);
        for mut k in 0..total {
            let mut v = vec![tower.base_zero(); self.ambient_dim];
            for row in &self.basis {
                let c = base.from_index(k % q);
                k /= q;
                if c.is_zero() {
                    continue;
                }
                for (vj, rj) in v.iter_mut().zip(row.iter()) {
                    let t = base.mul(&c, rj);
                    *vj = base.add(vj, &t);
                }
            }
            out.push(tower.from_coords(v).expect("valid coordinates"));
        }
        out
    }

    /// The subfield F_{q^d} as a subspace: the fixed space of the d-th
    /// Frobenius power. d must divide the ambient degree.
    pub fn subfield(tower: &Tower, d: usize) -> Result<Subspace> {
        let m = tower.ambient_degree();
        if d == 0 || m % d != 0 {
            return Err(Error::NonDivisorDegree { d, m });
        }
        let phi = frobenius_matrix(tower).matpow(tower, d)?;
        let base = tower.base_ctx();
        let mut a = phi;
        for i in 0..m {
            let v = base.sub(a.get(i, i), &tower.base_one());
            *a.get_mut(i, i) = v;
        }
        Ok(Subspace::from_rref_matrix(tower, a.nullspace(tower)))
    }

    /// Degree of the smallest subfield F_{q^d} containing every basis
    /// element.
    pub fn field_of_definition(&self, tower: &Tower) -> usize {
        let mut d = 1;
        for x in self.basis_elements(tower) {
            d = lcm_usize(d, tower.element_degree(&x));
        }
        divisors(tower.ambient_degree())
            .into_iter()
            .find(|&k| k % d == 0)
            .unwrap_or(tower.ambient_degree())
    }
}

fn lcm_usize(a: usize, b: usize) -> usize {
    let g = gcd_usize(a, b);
    a / g * b
}

fn gcd_usize(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd_usize(b, a % b)
    }
}

/// The M×M matrix of x ↦ x^q on the power basis.
pub fn frobenius_matrix(tower: &Tower) -> FqMatrix {
    let m = tower.ambient_degree();
    let mut mat = FqMatrix::zeros(tower, m, m);
    for j in 0..m {
        let mut coords = vec![tower.base_zero(); m];
        coords[j] = tower.base_one();
        let bj = tower.from_coords(coords).expect("unit vector");
        let img = tower.frobenius(&bj, 1);
        for (i, c) in tower.coords(&img).into_iter().enumerate() {
            *mat.get_mut(i, j) = c;
        }
    }
    mat
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2(m: usize) -> Tower {
        Tower::build(2, 1, m).unwrap()
    }

    fn row(t: &Tower, bits: &[u64]) -> Vec<BaseElement> {
        bits.iter()
            .map(|&b| t.base_from_coeffs(&[b]).unwrap())
            .collect()
    }

    #[test]
    fn linsolve_identity_has_trivial_nullspace() {
        let t = f2(3);
        let a = FqMatrix::identity(&t, 3);
        match linsolve(&t, &a, None).unwrap() {
            LinSolveOutcome::Homogeneous { nullspace } => assert_eq!(nullspace.rows(), 0),
            _ => unreachable!(),
        }
    }

    #[test]
    fn linsolve_zero_matrix_has_full_nullspace() {
        let t = f2(3);
        let a = FqMatrix::zeros(&t, 3, 3);
        match linsolve(&t, &a, None).unwrap() {
            LinSolveOutcome::Homogeneous { nullspace } => {
                assert_eq!(nullspace.rows(), 3);
                assert_eq!(nullspace, FqMatrix::identity(&t, 3));
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn linsolve_affine_matches_exhaustive_search() {
        // over F_2: [1 1] x = [1]
        let t = f2(2);
        let a = FqMatrix::from_rows(vec![row(&t, &[1, 1])], 2).unwrap();
        let b = row(&t, &[1]);
        let LinSolveOutcome::Affine {
            particular,
            nullspace,
        } = linsolve(&t, &a, Some(&b)).unwrap()
        else {
            panic!("expected a solution");
        };
        // oracle: enumerate all four candidate vectors
        let mut solutions = Vec::new();
        for x0 in 0..2u64 {
            for x1 in 0..2u64 {
                if (x0 + x1) % 2 == 1 {
                    solutions.push(row(&t, &[x0, x1]));
                }
            }
        }
        assert_eq!(particular, row(&t, &[1, 0]));
        assert!(solutions.contains(&particular));
        assert_eq!(nullspace.rows(), 1);
        assert_eq!(nullspace.row(0), &row(&t, &[1, 1])[..]);
    }

    #[test]
    fn linsolve_inconsistent() {
        let t = f2(2);
        let a = FqMatrix::from_rows(vec![row(&t, &[1, 1]), row(&t, &[1, 1])], 2).unwrap();
        let b = vec![t.base_one(), t.base_zero()];
        assert!(matches!(
            linsolve(&t, &a, Some(&b)).unwrap(),
            LinSolveOutcome::Inconsistent
        ));
    }

    #[test]
    fn rref_canonicalizes_subspace_bases() {
        let t = f2(3);
        let s1 = Subspace::from_rows(&t, vec![row(&t, &[1, 1, 0]), row(&t, &[0, 1, 1])]).unwrap();
        let s2 = Subspace::from_rows(
            &t,
            vec![row(&t, &[1, 0, 1]), row(&t, &[0, 1, 1]), row(&t, &[1, 1, 0])],
        )
        .unwrap();
        assert_eq!(s1, s2);
        assert_eq!(s1.dim(), 2);
    }

    #[test]
    fn intersection_of_two_planes_in_f2_cubed() {
        let t = f2(3);
        let u = Subspace::from_rows(&t, vec![row(&t, &[1, 0, 0]), row(&t, &[0, 1, 0])]).unwrap();
        let w = Subspace::from_rows(&t, vec![row(&t, &[0, 1, 0]), row(&t, &[0, 0, 1])]).unwrap();
        let i = u.intersect(&t, &w);
        assert_eq!(i.dim(), 1);
        assert!(i.contains_coords(&t, &row(&t, &[0, 1, 0])));
    }

    #[test]
    fn subfield_has_q_to_the_d_elements() {
        let t = f2(4);
        let s = Subspace::subfield(&t, 2).unwrap();
        assert_eq!(s.dim(), 2);
        for x in s.elements(&t) {
            assert!(t.subfield_test(&x, 2).unwrap());
        }
        let s1 = Subspace::subfield(&t, 1).unwrap();
        assert_eq!(s1.dim(), 1);
        assert!(s1.contains(&t, &t.one()));
    }

    #[test]
    fn reduce_yields_lex_smallest_coset_representative() {
        let t = f2(3);
        let s = Subspace::from_rows(&t, vec![row(&t, &[1, 1, 0])]).unwrap();
        let v = row(&t, &[1, 0, 1]);
        let r = s.reduce(&t, &v);
        // coset {110 + 101 = 011, 101}: lexicographically smallest is 011
        assert_eq!(r, row(&t, &[0, 1, 1]));
        // oracle: compare against all coset members
        let base_v = t.from_coords(v).unwrap();
        let mut best: Option<Vec<u64>> = None;
        for member in s.elements(&t) {
            let cand = t.coords(&t.add(&base_v, &member));
            let key: Vec<u64> = cand.iter().map(|c| c.coeffs()[0]).collect();
            if best.as_ref().is_none_or(|b| key < *b) {
                best = Some(key);
            }
        }
        let r_key: Vec<u64> = r.iter().map(|c| c.coeffs()[0]).collect();
        assert_eq!(r_key, best.unwrap());
    }

    #[test]
    fn determinant_examples() {
        let t = Tower::build(3, 1, 1).unwrap();
        let two = t.base_from_coeffs(&[2]).unwrap();
        let one = t.base_one();
        let zero = t.base_zero();
        // det [[1,2],[2,1]] = 1 - 4 = -3 = 0 mod 3
        let a = FqMatrix::from_rows(
            vec![
                vec![one.clone(), two.clone()],
                vec![two.clone(), one.clone()],
            ],
            2,
        )
        .unwrap();
        assert_eq!(a.determinant(&t).unwrap(), zero);
        // det [[0,1],[1,0]] = -1 = 2 mod 3
        let b = FqMatrix::from_rows(
            vec![
                vec![zero.clone(), one.clone()],
                vec![one.clone(), zero.clone()],
            ],
            2,
        )
        .unwrap();
        assert_eq!(b.determinant(&t).unwrap(), two);
    }

    #[test]
    fn nullspace_vectors_satisfy_the_system() {
        let t = Tower::build(3, 1, 2).unwrap();
        let rows = vec![
            vec![
                t.base_from_coeffs(&[1]).unwrap(),
                t.base_from_coeffs(&[2]).unwrap(),
                t.base_from_coeffs(&[0]).unwrap(),
            ],
            vec![
                t.base_from_coeffs(&[2]).unwrap(),
                t.base_from_coeffs(&[1]).unwrap(),
                t.base_from_coeffs(&[0]).unwrap(),
            ],
        ];
        let a = FqMatrix::from_rows(rows, 3).unwrap();
        let ns = a.nullspace(&t);
        assert_eq!(a.rank(&t) + ns.rows(), 3);
        let base = t.base_ctx();
        for r in 0..ns.rows() {
            for i in 0..a.rows() {
                let mut acc = t.base_zero();
                for j in 0..a.cols() {
                    let term = base.mul(a.get(i, j), ns.get(r, j));
                    acc = base.add(&acc, &term);
                }
                assert!(acc.is_zero());
            }
        }
    }
}
