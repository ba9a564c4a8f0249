//! The block construction: f_{a,B}, the classes B_a, covering a t-space
//! within a class, and classifying a (t+1)-space to its class.
//!
//! For a nonzero `a` and a coefficient tuple B = (b_1, ..., b_t) the block
//! polynomial is
//!
//! ```text
//! f_{a,B} = a^q x + b_1 x^q + ... + b_t x^{q^t} + (-1)^{t+1} a x^{q^{t+1}}
//! ```
//!
//! whose kernel is a (t+1)-space. Blocks with a common `a` (up to F_q^*
//! scaling) form one class; the classes partition all (t+1)-spaces.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{linsolve, LinSolveOutcome, Subspace};
use crate::moore::{annihilator_bottom, annihilator_top};
use crate::qpoly::QPolynomial;
use crate::tower::{AmbientElement, Tower};

/// Canonical representative of the F_q^*-orbit of a nonzero element: the
/// first nonzero F_q-coordinate is scaled to 1.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(transparent)]
pub struct ClassLabel {
    rep: AmbientElement,
}

impl ClassLabel {
    pub fn rep(&self) -> &AmbientElement {
        &self.rep
    }
}

/// A block of a class: a (t+1)-space together with the data that cut it
/// out. Serializes as {label, a, B, f, basis}.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Block {
    space: Subspace,
    label: ClassLabel,
    a: AmbientElement,
    bs: Vec<AmbientElement>,
    f: QPolynomial,
}

impl Block {
    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn label(&self) -> &ClassLabel {
        &self.label
    }

    pub fn a(&self) -> &AmbientElement {
        &self.a
    }

    /// The coefficient tuple B = (b_1, ..., b_t).
    pub fn coefficients(&self) -> &[AmbientElement] {
        &self.bs
    }

    pub fn polynomial(&self) -> &QPolynomial {
        &self.f
    }
}

impl Serialize for Block {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Block", 5)?;
        s.serialize_field("label", &self.label)?;
        s.serialize_field("a", &self.a)?;
        s.serialize_field("B", &self.bs)?;
        s.serialize_field("f", &self.f)?;
        s.serialize_field("basis", &self.space)?;
        s.end()
    }
}

/// Construction parameters: the tower and the design parameter t.
#[derive(Clone, Copy)]
pub struct Construction<'t> {
    tower: &'t Tower,
    t: usize,
}

impl<'t> Construction<'t> {
    pub fn new(tower: &'t Tower, t: usize) -> Result<Construction<'t>> {
        if t == 0 {
            return Err(Error::OutOfRange("t must be positive".into()));
        }
        Ok(Construction { tower, t })
    }

    pub fn tower(&self) -> &'t Tower {
        self.tower
    }

    pub fn t(&self) -> usize {
        self.t
    }

    fn sign_t1(&self, x: &AmbientElement) -> AmbientElement {
        // (-1)^{t+1} x
        if (self.t + 1) % 2 == 0 {
            x.clone()
        } else {
            self.tower.neg(x)
        }
    }

    /// The block polynomial with coefficient tuple exactly
    /// (a^q, b_1, ..., b_t, (-1)^{t+1} a).
    pub fn f_from_ab(&self, a: &AmbientElement, bs: &[AmbientElement]) -> Result<QPolynomial> {
        let tower = self.tower;
        tower.validate_ambient(a)?;
        if a.is_zero() {
            return Err(Error::ZeroA);
        }
        if bs.len() != self.t {
            return Err(Error::WrongLength {
                expected: self.t,
                found: bs.len(),
            });
        }
        for b in bs {
            tower.validate_ambient(b)?;
        }
        let mut coeffs = Vec::with_capacity(self.t + 2);
        coeffs.push(tower.frobenius(a, 1));
        coeffs.extend(bs.iter().cloned());
        coeffs.push(self.sign_t1(a));
        QPolynomial::new(tower, coeffs)
    }

    /// Recover (a, B) from a polynomial of the block shape; rejects any
    /// q-polynomial whose x-coefficient is not a^q (e.g. a mis-signed
    /// determinant).
    pub fn extract_ab(&self, f: &QPolynomial) -> Result<(AmbientElement, Vec<AmbientElement>)> {
        let tower = self.tower;
        let deg = f.q_degree().unwrap_or(0);
        if f.q_degree() != Some(self.t + 1) {
            return Err(Error::WrongDegree {
                expected: self.t + 1,
                found: deg,
            });
        }
        let coeffs = f.coeffs();
        let a = self.sign_t1(&coeffs[self.t + 1]);
        if coeffs[0] != tower.frobenius(&a, 1) {
            return Err(Error::ShapeViolation(
                "coefficient of x is not the q-th power of the recovered a".into(),
            ));
        }
        Ok((a, coeffs[1..=self.t].to_vec()))
    }

    /// Canonical representative of the F_q^*-orbit of a.
    pub fn canonical_label(&self, a: &AmbientElement) -> Result<ClassLabel> {
        let tower = self.tower;
        tower.validate_ambient(a)?;
        if a.is_zero() {
            return Err(Error::ZeroA);
        }
        let coords = tower.coords(a);
        let first = coords.iter().find(|c| !c.is_zero()).expect("a is nonzero");
        let inv = tower.base_inv(first)?;
        Ok(ClassLabel {
            rep: tower.scale(&inv, a),
        })
    }

    /// The block ker f_{a,B}. Fails with `AmbientTooSmall` when the full
    /// (t+1)-dimensional kernel does not lie in the ambient field.
    pub fn block(&self, a: &AmbientElement, bs: &[AmbientElement]) -> Result<Block> {
        let tower = self.tower;
        let f = self.f_from_ab(a, bs)?;
        let space = f.kernel(tower)?;
        if space.dim() != self.t + 1 {
            let mut degs = vec![tower.element_degree(a)];
            degs.extend(bs.iter().map(|b| tower.element_degree(b)));
            return Err(Error::AmbientTooSmall {
                found_dim: Some(space.dim()),
                recommended_m: recommended_ambient(tower.q(), self.t + 1, &degs),
            });
        }
        Ok(Block {
            space,
            label: self.canonical_label(a)?,
            a: a.clone(),
            bs: bs.to_vec(),
            f,
        })
    }

    /// The unique block of B_a containing the t-space V: solve g(x) = a
    /// for the bottom-row annihilator g of V, adjoin the canonical root,
    /// and read the block polynomial off the top-row annihilator.
    pub fn cover(&self, a: &AmbientElement, v: &Subspace) -> Result<Block> {
        let tower = self.tower;
        tower.validate_ambient(a)?;
        if a.is_zero() {
            return Err(Error::ZeroA);
        }
        if v.dim() != self.t {
            return Err(Error::WrongDim {
                expected: self.t,
                found: v.dim(),
            });
        }
        if v.ambient_dim() != tower.ambient_degree() {
            return Err(Error::MixedTowers("subspace has wrong ambient dimension"));
        }
        let vs = v.basis_elements(tower);
        let g = annihilator_bottom(tower, &vs);
        let system = g.map_matrix(tower);
        let rhs = tower.coords(a);
        let particular = match linsolve(tower, &system, Some(&rhs))? {
            LinSolveOutcome::Affine { particular, .. } => particular,
            LinSolveOutcome::Inconsistent => {
                let degs = [tower.element_degree(a), v.field_of_definition(tower)];
                return Err(Error::AmbientTooSmall {
                    found_dim: None,
                    recommended_m: recommended_ambient(tower.q(), self.t, &degs),
                });
            }
            LinSolveOutcome::Homogeneous { .. } => unreachable!("rhs was provided"),
        };
        // canonical root: lexicographically smallest member of the
        // solution coset (the solution set of g(x) = a is particular + V)
        let root_coords = v.reduce(tower, &particular);
        let root = tower.from_coords(root_coords)?;

        let mut gens = vs;
        gens.push(root);
        let f = annihilator_top(tower, &gens);
        let (a_out, bs) = self.extract_ab(&f)?;
        assert_eq!(
            a_out, *a,
            "top-row annihilator must reproduce the requested a exactly"
        );
        let space = f.kernel(tower)?;
        assert_eq!(space.dim(), self.t + 1, "cover kernel must be full");
        debug_assert!(space.contains_space(tower, v));
        Ok(Block {
            space,
            label: self.canonical_label(a)?,
            a: a.clone(),
            bs,
            f,
        })
    }

    /// The class and canonical block data of a (t+1)-space: the top-row
    /// annihilator of its RREF basis determines (b, C), and the single
    /// F_q^* degree of freedom is spent making b canonical.
    pub fn classify(&self, w: &Subspace) -> Result<Block> {
        let tower = self.tower;
        if w.dim() != self.t + 1 {
            return Err(Error::WrongDim {
                expected: self.t + 1,
                found: w.dim(),
            });
        }
        if w.ambient_dim() != tower.ambient_degree() {
            return Err(Error::MixedTowers("subspace has wrong ambient dimension"));
        }
        let f0 = annihilator_top(tower, &w.basis_elements(tower));
        let (b, _) = self.extract_ab(&f0)?;
        let coords = tower.coords(&b);
        let first = coords.iter().find(|c| !c.is_zero()).expect("b is nonzero");
        let lambda = tower.base_inv(first)?;
        let f = QPolynomial::scale(tower, &tower.embed_base(&lambda), &f0);
        let (a, bs) = self.extract_ab(&f)?;
        let space = f.kernel(tower)?;
        debug_assert_eq!(space, *w, "kernel of the annihilator must be the input");
        Ok(Block {
            space,
            label: ClassLabel { rep: a.clone() },
            a,
            bs,
            f,
        })
    }
}

/// Ambient degree that guarantees the needed roots exist: the inputs live
/// in F_{q^s}, and each root generates an extension of degree at most q^t
/// over it, so s * lcm(1..q^t) always suffices.
fn recommended_ambient(q: u128, t: usize, input_degrees: &[usize]) -> u64 {
    let mut s: u128 = 1;
    for &d in input_degrees {
        s = lcm_u128(s, d as u128);
    }
    let cap = q.saturating_pow(t as u32).min(1 << 20);
    let mut l: u128 = 1;
    for k in 2..=cap {
        l = lcm_u128(l, k);
        if l > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    s.saturating_mul(l).min(u64::MAX as u128) as u64
}

fn lcm_u128(a: u128, b: u128) -> u128 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd_u128(a, b) * b
}

fn gcd_u128(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd_u128(b, a % b)
    }
}

/// The default ambient degree for enumeration work in F_{q^m}:
/// m * lcm(1, ..., q^t). `None` on overflow.
pub fn default_ambient(q: u128, t: usize, m: usize) -> Option<usize> {
    let cap = q.checked_pow(t as u32)?;
    let mut l: u128 = 1;
    let mut k: u128 = 2;
    while k <= cap {
        l = lcm_u128(l, k);
        if l > usize::MAX as u128 {
            return None;
        }
        k += 1;
    }
    (m as u128)
        .checked_mul(l)
        .filter(|&v| v <= usize::MAX as u128)
        .map(|v| v as usize)
}
