//! Moore matrices, Moore determinants, and the two determinant-defined
//! annihilator polynomials.
//!
//! Both row conventions are first-class: `annihilator_top` expands the
//! determinant with the x-row on top, `annihilator_bottom` with the x-row
//! at the bottom. Their sign relation (a factor (-1)^k) is pinned by tests;
//! mixing the conventions silently is the likeliest implementation bug, so
//! nothing here converts between them implicitly.

use crate::error::{Error, Result};
use crate::qpoly::QPolynomial;
use crate::tower::{AmbientElement, Tower};

/// Explicit Moore matrix: entry (i, j) = v_i^{q^j}.
#[derive(Clone, Debug)]
pub struct MooreMatrix {
    generators: Vec<AmbientElement>,
    ncols: usize,
    entries: Vec<Vec<AmbientElement>>,
}

impl MooreMatrix {
    pub fn new(tower: &Tower, generators: Vec<AmbientElement>, ncols: usize) -> MooreMatrix {
        let entries = power_grid(tower, &generators, ncols);
        MooreMatrix {
            generators,
            ncols,
            entries,
        }
    }

    pub fn generators(&self) -> &[AmbientElement] {
        &self.generators
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn entries(&self) -> &[Vec<AmbientElement>] {
        &self.entries
    }

    /// Determinant of a square Moore matrix.
    pub fn det(&self, tower: &Tower) -> Result<AmbientElement> {
        if self.generators.len() != self.ncols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} Moore matrix is not square",
                self.generators.len(),
                self.ncols
            )));
        }
        Ok(det_in_place(tower, self.entries.clone()))
    }
}

/// Rows of Frobenius powers: row i = (v_i, v_i^q, ..., v_i^{q^{ncols-1}}).
fn power_grid(
    tower: &Tower,
    generators: &[AmbientElement],
    ncols: usize,
) -> Vec<Vec<AmbientElement>> {
    generators
        .iter()
        .map(|v| {
            let mut row = Vec::with_capacity(ncols);
            let mut cur = v.clone();
            for j in 0..ncols {
                if j > 0 {
                    cur = tower.frobenius(&cur, 1);
                }
                row.push(cur.clone());
            }
            row
        })
        .collect()
}

/// Plain Gaussian elimination over the ambient field, pivot by first
/// nonzero entry, with row-swap sign tracking.
fn det_in_place(tower: &Tower, mut grid: Vec<Vec<AmbientElement>>) -> AmbientElement {
    let n = grid.len();
    if n == 0 {
        return tower.one();
    }
    let mut det = tower.one();
    let mut negate = false;
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| !grid[i][c].is_zero()) else {
            return tower.zero();
        };
        if pr != c {
            grid.swap(pr, c);
            negate = !negate;
        }
        det = tower.mul(&det, &grid[c][c]);
        let inv = tower.inv(&grid[c][c]).expect("pivot is nonzero");
        for i in c + 1..n {
            if grid[i][c].is_zero() {
                continue;
            }
            let factor = tower.mul(&grid[i][c], &inv);
            for j in c..n {
                let t = tower.mul(&factor, &grid[c][j]);
                grid[i][j] = tower.sub(&grid[i][j], &t);
            }
        }
    }
    if negate {
        det = tower.neg(&det);
    }
    det
}

/// Determinant of the k×k matrix with entry (i, j) = v_i^{q^j}; zero
/// exactly when the v_i are F_q-linearly dependent.
pub fn moore_det(tower: &Tower, generators: &[AmbientElement]) -> AmbientElement {
    let grid = power_grid(tower, generators, generators.len());
    det_in_place(tower, grid)
}

/// The k+1 minors of the k×(k+1) power grid: minor j omits column j.
fn minors(tower: &Tower, generators: &[AmbientElement]) -> Vec<AmbientElement> {
    let k = generators.len();
    let grid = power_grid(tower, generators, k + 1);
    (0..=k)
        .map(|omit| {
            let sub: Vec<Vec<AmbientElement>> = grid
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(j, _)| j != omit)
                        .map(|(_, v)| v.clone())
                        .collect()
                })
                .collect();
            det_in_place(tower, sub)
        })
        .collect()
}

/// Annihilator from the (k+1)×(k+1) determinant with the x-row on top:
/// coefficient of x^{q^j} is (-1)^j times minor j. For independent
/// generators the result is separable of q-degree k with kernel equal to
/// their span; for dependent generators it is the zero polynomial.
pub fn annihilator_top(tower: &Tower, generators: &[AmbientElement]) -> QPolynomial {
    let mut coeffs = minors(tower, generators);
    for (j, c) in coeffs.iter_mut().enumerate() {
        if j % 2 == 1 {
            *c = tower.neg(c);
        }
    }
    while coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    QPolynomial::from_trimmed(coeffs)
}

/// Annihilator from the determinant with the x-row at the bottom (the
/// covering construction's g): coefficient of x^{q^j} is (-1)^{k+j} times
/// minor j. Satisfies eval(g, w) = moore_det(v_1, ..., v_k, w) for all w.
pub fn annihilator_bottom(tower: &Tower, generators: &[AmbientElement]) -> QPolynomial {
    let k = generators.len();
    let mut coeffs = minors(tower, generators);
    for (j, c) in coeffs.iter_mut().enumerate() {
        if (k + j) % 2 == 1 {
            *c = tower.neg(c);
        }
    }
    while coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    QPolynomial::from_trimmed(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Subspace;
    use crate::qpoly;

    /// Laplace expansion along the first row; independent oracle for the
    /// elimination determinant.
    fn laplace_det(tower: &Tower, grid: &[Vec<AmbientElement>]) -> AmbientElement {
        let n = grid.len();
        if n == 0 {
            return tower.one();
        }
        if n == 1 {
            return grid[0][0].clone();
        }
        let mut acc = tower.zero();
        for j in 0..n {
            if grid[0][j].is_zero() {
                continue;
            }
            let sub: Vec<Vec<AmbientElement>> = grid[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, v)| v.clone())
                        .collect()
                })
                .collect();
            let term = tower.mul(&grid[0][j], &laplace_det(tower, &sub));
            if j % 2 == 0 {
                acc = tower.add(&acc, &term);
            } else {
                acc = tower.sub(&acc, &term);
            }
        }
        acc
    }

    #[test]
    fn one_by_one_det_is_the_generator() {
        let t = Tower::build(2, 1, 2).unwrap();
        let y = t.generator();
        assert_eq!(moore_det(&t, &[y.clone()]), y);
    }

    #[test]
    fn f4_two_by_two_example() {
        // det [[1,1],[y,y^2]] = y^2 - y = 1 in F_4
        let t = Tower::build(2, 1, 2).unwrap();
        let vs = [t.one(), t.generator()];
        assert_eq!(moore_det(&t, &vs), t.one());
    }

    #[test]
    fn repeated_rows_vanish() {
        let t = Tower::build(2, 1, 2).unwrap();
        let y = t.generator();
        assert!(moore_det(&t, &[y.clone(), y.clone()]).is_zero());
        assert!(annihilator_top(&t, &[y.clone(), y]).is_zero());
    }

    #[test]
    fn elimination_det_matches_laplace_oracle() {
        for (p, m) in [(2u64, 4usize), (3, 3)] {
            let t = Tower::build(p, 1, m).unwrap();
            for seed in 0..8u128 {
                let vs: Vec<AmbientElement> = (0..3)
                    .map(|i| t.from_index(seed * 31 + 7 * i + 1))
                    .collect();
                let grid = power_grid(&t, &vs, 3);
                assert_eq!(det_in_place(&t, grid.clone()), laplace_det(&t, &grid));
            }
        }
    }

    #[test]
    fn annihilator_top_k1_example() {
        // v = 1 over F_2: det [[x, x^2], [1, 1]] = x + x^2, kernel = F_2
        let t = Tower::build(2, 1, 2).unwrap();
        let f = annihilator_top(&t, &[t.one()]);
        assert_eq!(f.coeffs(), &[t.one(), t.neg(&t.one())]);
        let k = f.kernel(&t).unwrap();
        assert_eq!(k.dim(), 1);
        assert!(k.contains(&t, &t.one()));
    }

    #[test]
    fn annihilator_kernel_is_the_span() {
        let t = Tower::build(2, 1, 4).unwrap();
        let vs = [t.one(), t.generator()];
        let f = annihilator_top(&t, &vs);
        assert_eq!(f.q_degree(), Some(2));
        assert!(f.is_separable().unwrap());
        let span = Subspace::from_elements(&t, &vs).unwrap();
        assert_eq!(f.kernel(&t).unwrap(), span);
    }

    #[test]
    fn annihilator_bottom_t1_example() {
        // v = 1: g = x^2 - x (char 2 makes the sign immaterial); g(1) = 0
        let t = Tower::build(2, 1, 2).unwrap();
        let g = annihilator_bottom(&t, &[t.one()]);
        assert_eq!(g.q_degree(), Some(1));
        assert!(g.eval(&t, &t.one()).is_zero());
    }

    #[test]
    fn bottom_eval_equals_extended_moore_det() {
        // the ground-truth oracle: eval(g, w) = moore_det(v_1..v_t, w)
        for (p, m) in [(2u64, 4usize), (3, 2)] {
            let t = Tower::build(p, 1, m).unwrap();
            for seed in 0..10u128 {
                let vs: Vec<AmbientElement> =
                    (0..2).map(|i| t.from_index(seed * 13 + 5 * i + 1)).collect();
                let g = annihilator_bottom(&t, &vs);
                for wk in 0..t.ambient_size().min(16) {
                    let w = t.from_index(wk * 3 + 1);
                    let mut ext = vs.clone();
                    ext.push(w.clone());
                    assert_eq!(g.eval(&t, &w), moore_det(&t, &ext));
                }
            }
        }
    }

    #[test]
    fn bottom_is_signed_top() {
        // annihilator_bottom = (-1)^t * annihilator_top, coefficient-wise
        for p in [2u64, 3] {
            for tdim in 1..=3usize {
                let t = Tower::build(p, 1, 4).unwrap();
                let vs: Vec<AmbientElement> =
                    (0..tdim).map(|i| t.from_index(2 * i as u128 + 3)).collect();
                let top = annihilator_top(&t, &vs);
                let bottom = annihilator_bottom(&t, &vs);
                let sign = if tdim % 2 == 0 {
                    t.one()
                } else {
                    t.neg(&t.one())
                };
                assert_eq!(bottom, qpoly::QPolynomial::scale(&t, &sign, &top));
            }
        }
    }
}
