//! Property tests for the algebraic invariants: field axioms, Frobenius
//! laws, evaluation linearity, kernel structure, and the solver contracts.

use std::sync::LazyLock;

use proptest::prelude::*;

use qsteiner::linalg::{frobenius_matrix, linsolve, FqMatrix, LinSolveOutcome, Subspace};
use qsteiner::moore::moore_det;
use qsteiner::qpoly::{self, QPolynomial};
use qsteiner::{AmbientElement, BaseElement, Construction, Tower};

static F16: LazyLock<Tower> = LazyLock::new(|| Tower::build(2, 1, 4).unwrap());
static F81: LazyLock<Tower> = LazyLock::new(|| Tower::build(3, 1, 4).unwrap());
static F64_Q4: LazyLock<Tower> = LazyLock::new(|| Tower::build(2, 2, 3).unwrap());

fn towers() -> [&'static Tower; 3] {
    [&F16, &F81, &F64_Q4]
}

fn elem(t: &Tower, k: u128) -> AmbientElement {
    t.from_index(k)
}

// index into F_q through the tower's canonical order
fn fq_elem(t: &Tower, k: u128) -> BaseElement {
    let q = t.q();
    let x = t.from_index(k % q);
    t.coords(&x)[0].clone()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(i in any::<u128>(), j in any::<u128>(), k in any::<u128>()) {
        for t in towers() {
            let (x, y, z) = (elem(t, i), elem(t, j), elem(t, k));
            prop_assert_eq!(t.add(&x, &y), t.add(&y, &x));
            prop_assert_eq!(t.mul(&x, &y), t.mul(&y, &x));
            prop_assert_eq!(t.add(&t.add(&x, &y), &z), t.add(&x, &t.add(&y, &z)));
            prop_assert_eq!(t.mul(&t.mul(&x, &y), &z), t.mul(&x, &t.mul(&y, &z)));
            prop_assert_eq!(
                t.mul(&x, &t.add(&y, &z)),
                t.add(&t.mul(&x, &y), &t.mul(&x, &z))
            );
            prop_assert_eq!(t.add(&x, &t.neg(&x)), t.zero());
            if !x.is_zero() {
                let inv = t.inv(&x).unwrap();
                prop_assert_eq!(t.mul(&x, &inv), t.one());
            }
        }
    }

    #[test]
    fn frobenius_is_a_field_automorphism(i in any::<u128>(), j in any::<u128>(), n in 0usize..8) {
        for t in towers() {
            let (x, z) = (elem(t, i), elem(t, j));
            prop_assert_eq!(
                t.frobenius(&t.mul(&x, &z), n),
                t.mul(&t.frobenius(&x, n), &t.frobenius(&z, n))
            );
            prop_assert_eq!(
                t.frobenius(&t.add(&x, &z), n),
                t.add(&t.frobenius(&x, n), &t.frobenius(&z, n))
            );
        }
    }

    #[test]
    fn frobenius_composes(i in any::<u128>(), a in 0usize..6, b in 0usize..6) {
        for t in towers() {
            let x = elem(t, i);
            prop_assert_eq!(
                t.frobenius(&x, a + b),
                t.frobenius(&t.frobenius(&x, a), b)
            );
            prop_assert_eq!(t.frobenius(&x, 1), t.pow(&x, t.q()));
        }
    }

    #[test]
    fn inverse_frobenius_is_the_q_th_root(i in any::<u128>()) {
        for t in towers() {
            let x = elem(t, i);
            let r = t.inv_frobenius(&x);
            prop_assert_eq!(t.pow(&r, t.q()), x);
        }
    }

    #[test]
    fn eval_is_fq_linear(
        ci in proptest::collection::vec(any::<u128>(), 1..4),
        i in any::<u128>(),
        j in any::<u128>(),
        la in any::<u128>(),
        lb in any::<u128>(),
    ) {
        for t in towers() {
            let f = QPolynomial::new(t, ci.iter().map(|&k| elem(t, k)).collect()).unwrap();
            let (x, z) = (elem(t, i), elem(t, j));
            let (alpha, beta) = (fq_elem(t, la), fq_elem(t, lb));
            let combo = t.add(
                &t.scale(&alpha, &x),
                &t.scale(&beta, &z),
            );
            let lhs = f.eval(t, &combo);
            let rhs = t.add(
                &t.scale(&alpha, &f.eval(t, &x)),
                &t.scale(&beta, &f.eval(t, &z)),
            );
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn kernel_dim_and_root_count(ci in proptest::collection::vec(any::<u128>(), 1..4)) {
        for t in towers() {
            let f = QPolynomial::new(t, ci.iter().map(|&k| elem(t, k)).collect()).unwrap();
            if f.is_zero() {
                continue;
            }
            let kernel = f.kernel(t).unwrap();
            prop_assert!(kernel.dim() <= f.q_degree().unwrap());
            // exhaustive root count in the (small) ambient field
            let roots = (0..t.ambient_size())
                .filter(|&k| f.eval(t, &t.from_index(k)).is_zero())
                .count() as u128;
            prop_assert_eq!(roots, t.q().pow(kernel.dim() as u32));
            // kernel closed under addition and F_q-scaling
            let elems = kernel.elements(t);
            if elems.len() >= 2 {
                let s = t.add(&elems[1], &elems[elems.len() - 1]);
                prop_assert!(kernel.contains(t, &s));
            }
        }
    }

    #[test]
    fn q_shift_root_identity(ci in proptest::collection::vec(any::<u128>(), 1..4), i in any::<u128>()) {
        for t in towers() {
            let mut coeffs = vec![t.zero()];
            coeffs.extend(ci.iter().map(|&k| elem(t, k)));
            let f = QPolynomial::new(t, coeffs).unwrap();
            if f.is_zero() {
                continue;
            }
            let h = f.q_shift_root(t).unwrap();
            prop_assert_eq!(h.q_degree().unwrap(), f.q_degree().unwrap() - 1);
            let x = elem(t, i);
            prop_assert_eq!(t.pow(&h.eval(t, &x), t.q()), f.eval(t, &x));
        }
    }

    #[test]
    fn linsolve_contracts(
        entries in proptest::collection::vec(any::<u128>(), 12),
        rhs in proptest::collection::vec(any::<u128>(), 3),
    ) {
        for t in towers() {
            let rows: Vec<Vec<BaseElement>> = (0..3)
                .map(|i| (0..4).map(|j| fq_elem(t, entries[i * 4 + j])).collect())
                .collect();
            let a = FqMatrix::from_rows(rows, 4).unwrap();
            // rank-nullity
            let ns = a.nullspace(t);
            prop_assert_eq!(a.rank(t) + ns.rows(), a.cols());
            // every returned vector satisfies the system
            let b: Vec<BaseElement> = rhs.iter().map(|&k| fq_elem(t, k)).collect();
            match linsolve(t, &a, Some(&b)).unwrap() {
                LinSolveOutcome::Affine { particular, nullspace } => {
                    prop_assert!(check_solution(t, &a, &particular, Some(&b)));
                    for r in 0..nullspace.rows() {
                        prop_assert!(check_solution(t, &a, nullspace.row(r), None));
                    }
                }
                LinSolveOutcome::Inconsistent => {
                    // confirmed by rank comparison
                    let mut aug_rows = a.row_vecs();
                    for (row, bi) in aug_rows.iter_mut().zip(b.iter()) {
                        row.push(bi.clone());
                    }
                    let aug = FqMatrix::from_rows(aug_rows, 5).unwrap();
                    prop_assert!(aug.rank(t) > a.rank(t));
                }
                LinSolveOutcome::Homogeneous { .. } => prop_assert!(false),
            }
        }
    }

    #[test]
    fn moore_det_vanishes_exactly_on_dependent_tuples(ks in proptest::collection::vec(any::<u128>(), 3)) {
        for t in towers() {
            let vs: Vec<AmbientElement> = ks.iter().map(|&k| elem(t, k)).collect();
            let span = Subspace::from_elements(t, &vs).unwrap();
            let det = moore_det(t, &vs);
            prop_assert_eq!(det.is_zero(), span.dim() < vs.len());
        }
    }

    #[test]
    fn intersection_bound_for_shared_a(
        ak in any::<u128>(),
        bk in any::<u128>(),
        ck in any::<u128>(),
    ) {
        // t = 1: distinct coefficient tuples share at most the zero space
        for t in towers() {
            let a = elem(t, ak);
            if a.is_zero() {
                continue;
            }
            let (b, c) = (elem(t, bk), elem(t, ck));
            if b == c {
                continue;
            }
            let cons = Construction::new(t, 1).unwrap();
            let f = cons.f_from_ab(&a, std::slice::from_ref(&b)).unwrap();
            let g = cons.f_from_ab(&a, std::slice::from_ref(&c)).unwrap();
            let inter = qpoly::kernel_intersection(t, &f, &g).unwrap();
            prop_assert_eq!(inter.dim(), 0);
            // gcd oracle agrees
            let gcd = qpoly::conventional_gcd(t, &f, &g).unwrap();
            let roots = qpoly::ambient_root_count(t, &gcd) as u128;
            prop_assert_eq!(roots, 1);
        }
    }

    #[test]
    fn classify_ignores_the_generating_set(
        i in any::<u128>(),
        mix in proptest::collection::vec(any::<u128>(), 4),
    ) {
        // the same span, generated differently, classifies identically;
        // a is drawn from F_4 so the cover stays inside the ambient field
        let t = &*F16;
        let cons = Construction::new(t, 1).unwrap();
        let v = Subspace::from_elements(t, &[t.one()]).unwrap();
        let f4 = Subspace::subfield(t, 2).unwrap().elements(t);
        let omega = f4.iter().find(|x| !x.is_zero() && **x != t.one()).unwrap();
        let a = t.pow(omega, (i % 3) + 1);
        let blk = cons.cover(&a, &v).unwrap();
        let basis = blk.space().basis_elements(t);
        let g1 = t.add(&basis[0], &basis[1]);
        let g2 = t.add(&t.scale(&fq_elem(t, mix[0]), &basis[0]), &basis[1]);
        let regenerated = Subspace::from_elements(
            t,
            &[g1, g2, basis[0].clone(), basis[1].clone()],
        )
        .unwrap();
        prop_assert_eq!(&regenerated, blk.space());
        let c1 = cons.classify(blk.space()).unwrap();
        let c2 = cons.classify(&regenerated).unwrap();
        prop_assert_eq!(c1.label(), c2.label());
        prop_assert_eq!(c1.polynomial(), c2.polynomial());
    }
}

fn check_solution(
    t: &Tower,
    a: &FqMatrix,
    x: &[BaseElement],
    b: Option<&[BaseElement]>,
) -> bool {
    for i in 0..a.rows() {
        let mut acc = t.base_zero();
        for j in 0..a.cols() {
            acc = t.base_add(&acc, &t.base_mul(a.get(i, j), &x[j]));
        }
        let expect = b.map_or_else(|| t.base_zero(), |b| b[i].clone());
        if acc != expect {
            return false;
        }
    }
    true
}

#[test]
fn subfield_sizes_are_exact() {
    // the fixed set of frobenius(., d) has exactly q^d elements
    let t = Tower::build(2, 1, 4).unwrap();
    for d in [1usize, 2, 4] {
        let count = (0..t.ambient_size())
            .filter(|&k| t.subfield_test(&t.from_index(k), d).unwrap())
            .count() as u128;
        assert_eq!(count, 2u128.pow(d as u32));
    }
    let t9 = Tower::build(3, 1, 2).unwrap();
    let count = (0..t9.ambient_size())
        .filter(|&k| t9.subfield_test(&t9.from_index(k), 1).unwrap())
        .count();
    assert_eq!(count, 3);
}

#[test]
fn frobenius_matrix_has_full_rank() {
    for t in towers() {
        let m = frobenius_matrix(t);
        assert_eq!(m.rank(t), t.ambient_degree());
    }
}
