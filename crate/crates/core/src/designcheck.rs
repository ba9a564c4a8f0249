//! Desk-scale verification: exhaustive Grassmannian sweeps showing that
//! each class is a Steiner system on the subspaces of F_{q^m} and that the
//! classes form a large set, plus seeded randomized suites for the scalar,
//! intersection and Moore-invariance laws.
//!
//! Enumeration is confined to F_{q^m}; covers and roots may live in the
//! larger ambient field. A pass is therefore a statement about the chosen
//! finite truncation, not a proof for the full algebraic closure.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::linalg::{FqMatrix, Subspace};
use crate::moore::{annihilator_top, moore_det};
use crate::polyarith::Field;
use crate::qpoly::{self, QPolynomial};
use crate::steiner::Construction;
use crate::tower::{AmbientElement, BaseElement, Tower};

/// Exact number of d-dimensional subspaces of an m-dimensional F_q-space,
/// by the Gaussian recurrence (division-free).
pub fn gaussian_binomial(m: usize, d: usize, q: u128) -> Result<u128> {
    if d > m {
        return Err(Error::OutOfRange(format!(
            "subspace dimension {d} exceeds the space dimension {m}"
        )));
    }
    let overflow = || Error::OutOfRange("gaussian binomial overflows u128".into());
    // rows of the Gaussian triangle: row[k] = [n choose k]_q
    let mut row = vec![0u128; d + 1];
    row[0] = 1;
    for n in 1..=m {
        let mut next = vec![0u128; d + 1];
        next[0] = 1;
        for k in 1..=d.min(n) {
            let qk = q.checked_pow(k as u32).ok_or_else(overflow)?;
            let term = qk.checked_mul(row[k]).ok_or_else(overflow)?;
            next[k] = row[k - 1].checked_add(term).ok_or_else(overflow)?;
        }
        row = next;
    }
    Ok(row[d])
}

/// Iterator over all d-dimensional subspaces of F_{q^m} inside the ambient
/// field, one canonical RREF representative each. Enumeration runs over
/// pivot patterns (lexicographic) and free-entry assignments (odometer),
/// so the order is deterministic.
pub struct SubspaceEnumerator<'t> {
    tower: &'t Tower,
    m: usize,
    d: usize,
    sub_rows: Vec<Vec<BaseElement>>,
    pivot_sets: Vec<Vec<usize>>,
    ps_idx: usize,
    free_positions: Vec<(usize, usize)>,
    free_digits: Vec<u128>,
    exhausted: bool,
}

pub fn enumerate_subspaces<'t>(
    tower: &'t Tower,
    m: usize,
    d: usize,
) -> Result<SubspaceEnumerator<'t>> {
    let am = tower.ambient_degree();
    if d > m || m > am {
        return Err(Error::BadDims(format!(
            "need d <= m <= M, got d={d}, m={m}, M={am}"
        )));
    }
    if am % m != 0 {
        return Err(Error::BadDims(format!(
            "enumeration field degree {m} must divide the ambient degree {am}"
        )));
    }
    let sub = Subspace::subfield(tower, m)?;
    let mut it = SubspaceEnumerator {
        tower,
        m,
        d,
        sub_rows: sub.basis_rows().to_vec(),
        pivot_sets: combinations(m, d),
        ps_idx: 0,
        free_positions: Vec::new(),
        free_digits: Vec::new(),
        exhausted: false,
    };
    it.load_pivot_set();
    Ok(it)
}

/// All d-element subsets of {0..m}, lexicographic.
fn combinations(m: usize, d: usize) -> Vec<Vec<usize>> {
    use itertools::Itertools;
    (0..m).combinations(d).collect()
}

impl SubspaceEnumerator<'_> {
    fn load_pivot_set(&mut self) {
        if self.ps_idx >= self.pivot_sets.len() {
            self.exhausted = true;
            return;
        }
        let pivots = &self.pivot_sets[self.ps_idx];
        self.free_positions.clear();
        for (i, &p) in pivots.iter().enumerate() {
            for j in p + 1..self.m {
                if !pivots.contains(&j) {
                    self.free_positions.push((i, j));
                }
            }
        }
        self.free_digits = vec![0; self.free_positions.len()];
    }

    fn current_subspace(&self) -> Subspace {
        let tower = self.tower;
        let base = tower.base_ctx();
        let pivots = &self.pivot_sets[self.ps_idx];
        // d x m matrix over F_q in RREF with the chosen pivots
        let mut rows = vec![vec![tower.base_zero(); self.m]; self.d];
        for (i, &p) in pivots.iter().enumerate() {
            rows[i][p] = tower.base_one();
        }
        for (&(i, j), &digit) in self.free_positions.iter().zip(self.free_digits.iter()) {
            rows[i][j] = base.from_index(digit);
        }
        // map the subfield coordinates into ambient coordinates
        let am = tower.ambient_degree();
        let ambient_rows: Vec<Vec<BaseElement>> = rows
            .iter()
            .map(|row| {
                let mut out = vec![tower.base_zero(); am];
                for (c, sub_row) in row.iter().zip(self.sub_rows.iter()) {
                    if c.is_zero() {
                        continue;
                    }
                    for (o, s) in out.iter_mut().zip(sub_row.iter()) {
                        let t = base.mul(c, s);
                        *o = base.add(o, &t);
                    }
                }
                out
            })
            .collect();
        Subspace::from_rows(tower, ambient_rows).expect("valid coordinate rows")
    }

    fn advance(&mut self) {
        let q = self.tower.q();
        for i in (0..self.free_digits.len()).rev() {
            self.free_digits[i] += 1;
            if self.free_digits[i] < q {
                return;
            }
            self.free_digits[i] = 0;
        }
        self.ps_idx += 1;
        self.load_pivot_set();
    }
}

impl Iterator for SubspaceEnumerator<'_> {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        if self.exhausted {
            return None;
        }
        let s = self.current_subspace();
        self.advance();
        Some(s)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One failed check, with enough serialized witness data to re-check the
/// failure from the JSON alone.
#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub check: String,
    pub detail: serde_json::Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub status: Status,
    pub checked: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
    pub failures: Vec<Failure>,
}

impl VerificationReport {
    fn from_parts(checked: u64, failures: Vec<Failure>, started: Instant) -> VerificationReport {
        VerificationReport {
            status: if failures.is_empty() {
                Status::Pass
            } else {
                Status::Fail
            },
            checked,
            elapsed_ms: Some(started.elapsed().as_millis() as u64),
            failures,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Merge: counts add, failures concatenate, status follows.
    pub fn merge(mut self, other: VerificationReport) -> VerificationReport {
        self.checked += other.checked;
        self.failures.extend(other.failures);
        self.elapsed_ms = match (self.elapsed_ms, other.elapsed_ms) {
            (Some(a), Some(b)) => Some(a + b),
            (a, b) => a.or(b),
        };
        self.status = if self.failures.is_empty() {
            Status::Pass
        } else {
            Status::Fail
        };
        self
    }

    /// Drop the wall-clock field for byte-deterministic output.
    pub fn without_timing(mut self) -> VerificationReport {
        self.elapsed_ms = None;
        self
    }
}

/// Verification context: the construction plus the enumeration field
/// F_{q^m}.
pub struct Checker<'t> {
    cons: Construction<'t>,
    m: usize,
    sub_elems: Vec<AmbientElement>,
}

impl<'t> Checker<'t> {
    pub fn new(tower: &'t Tower, t: usize, m: usize) -> Result<Checker<'t>> {
        let cons = Construction::new(tower, t)?;
        let sub = Subspace::subfield(tower, m)?;
        Ok(Checker {
            cons,
            m,
            sub_elems: sub.basis_elements(tower),
        })
    }

    pub fn construction(&self) -> &Construction<'t> {
        &self.cons
    }

    pub fn enumeration_degree(&self) -> usize {
        self.m
    }

    fn tower(&self) -> &'t Tower {
        self.cons.tower()
    }

    fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed ^ trial.wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }

    fn rand_base(&self, rng: &mut ChaCha8Rng) -> BaseElement {
        let tower = self.tower();
        let coeffs: Vec<u64> = (0..tower.e()).map(|_| rng.gen_range(0..tower.p())).collect();
        tower.base_from_coeffs(&coeffs).expect("in-range coefficients")
    }

    /// Uniform element of F_{q^m}.
    fn rand_subfield(&self, rng: &mut ChaCha8Rng) -> AmbientElement {
        let tower = self.tower();
        let mut acc = tower.zero();
        for b in &self.sub_elems {
            let c = self.rand_base(rng);
            if !c.is_zero() {
                acc = tower.add(&acc, &tower.scale(&c, b));
            }
        }
        acc
    }

    fn rand_subfield_nonzero(&self, rng: &mut ChaCha8Rng) -> AmbientElement {
        loop {
            let x = self.rand_subfield(rng);
            if !x.is_zero() {
                return x;
            }
        }
    }

    /// Uniform ambient element (not confined to the subfield).
    fn rand_ambient(&self, rng: &mut ChaCha8Rng) -> AmbientElement {
        let tower = self.tower();
        let coords: Vec<BaseElement> = (0..tower.ambient_degree())
            .map(|_| self.rand_base(rng))
            .collect();
        tower.from_coords(coords).expect("valid coordinates")
    }

    /// Random d-dimensional subspace of F_{q^m}.
    fn rand_space(&self, rng: &mut ChaCha8Rng, d: usize) -> Subspace {
        let tower = self.tower();
        loop {
            let gens: Vec<AmbientElement> =
                (0..d).map(|_| self.rand_subfield(rng)).collect();
            let s = Subspace::from_elements(tower, &gens).expect("valid elements");
            if s.dim() == d {
                return s;
            }
        }
    }

    /// Random independent tuple from F_{q^m}.
    fn rand_independent(&self, rng: &mut ChaCha8Rng, k: usize) -> Vec<AmbientElement> {
        let tower = self.tower();
        loop {
            let gens: Vec<AmbientElement> =
                (0..k).map(|_| self.rand_subfield(rng)).collect();
            if Subspace::from_elements(tower, &gens).expect("valid").dim() == k {
                return gens;
            }
        }
    }

    /// Every t-space of F_{q^m} is covered, covers pairwise intersect in
    /// dimension at most t-1, and randomized foreign blocks never capture
    /// a t-space away from its cover.
    pub fn verify_steiner(
        &self,
        a: &AmbientElement,
        trials: u64,
        seed: u64,
    ) -> Result<VerificationReport> {
        let started = Instant::now();
        let tower = self.tower();
        tower.validate_ambient(a)?;
        if a.is_zero() {
            return Err(Error::ZeroA);
        }
        let t = self.cons.t();
        let tspaces: Vec<Subspace> = enumerate_subspaces(tower, self.m, t)?.collect();
        let covers = tspaces
            .par_iter()
            .map(|v| self.cons.cover(a, v))
            .collect::<Result<Vec<_>>>()?;

        let mut failures = Vec::new();
        for (v, blk) in tspaces.iter().zip(covers.iter()) {
            if !blk.space().contains_space(tower, v) {
                failures.push(Failure {
                    check: "cover_contains".into(),
                    detail: json!({ "a": a, "tspace": v, "block": blk }),
                });
            }
            if blk.space().dim() != t + 1 || blk.a() != a {
                failures.push(Failure {
                    check: "cover_shape".into(),
                    detail: json!({ "a": a, "tspace": v, "block": blk }),
                });
            }
        }

        // uniqueness: distinct cover spaces meet in dimension <= t-1, so no
        // t-space lies in two of them
        let mut distinct: Vec<&Subspace> = Vec::new();
        for blk in &covers {
            if !distinct.contains(&blk.space()) {
                distinct.push(blk.space());
            }
        }
        let pairs: Vec<(usize, usize)> = (0..distinct.len())
            .flat_map(|i| (i + 1..distinct.len()).map(move |j| (i, j)))
            .collect();
        let pair_failures: Vec<Option<Failure>> = pairs
            .par_iter()
            .map(|&(i, j)| {
                let inter = distinct[i].intersect(tower, distinct[j]);
                if inter.dim() > t - 1 {
                    Some(Failure {
                        check: "pairwise_intersection".into(),
                        detail: json!({
                            "a": a,
                            "space1": distinct[i],
                            "space2": distinct[j],
                            "intersection_dim": inter.dim(),
                        }),
                    })
                } else {
                    None
                }
            })
            .collect();
        failures.extend(pair_failures.into_iter().flatten());
        for (v, blk) in tspaces.iter().zip(covers.iter()) {
            let holders = distinct
                .iter()
                .filter(|s| s.contains_space(tower, v))
                .count();
            if holders != 1 {
                failures.push(Failure {
                    check: "unique_cover".into(),
                    detail: json!({ "a": a, "tspace": v, "holders": holders, "block": blk }),
                });
            }
        }

        // negative controls: a random block either is the cover or misses V
        let neg_failures: Vec<Option<Failure>> = (0..trials)
            .into_par_iter()
            .map(|trial| {
                let mut rng = Self::trial_rng(seed, trial);
                let idx = (trial % tspaces.len() as u64) as usize;
                let v = &tspaces[idx];
                let bs: Vec<AmbientElement> =
                    (0..t).map(|_| self.rand_subfield(&mut rng)).collect();
                let f = self.cons.f_from_ab(a, &bs).expect("valid coefficients");
                let k = f.kernel(tower).expect("nonzero polynomial");
                if k.contains_space(tower, v) && &k != covers[idx].space() {
                    Some(Failure {
                        check: "negative_control".into(),
                        detail: json!({ "a": a, "B": bs, "tspace": v, "kernel": k }),
                    })
                } else {
                    None
                }
            })
            .collect();
        failures.extend(neg_failures.into_iter().flatten());

        Ok(VerificationReport::from_parts(
            tspaces.len() as u64,
            failures,
            started,
        ))
    }

    /// Every (t+1)-space of F_{q^m} classifies; through any fixed t-space
    /// the containing (t+1)-spaces carry pairwise distinct labels; and
    /// covering the t-space inside its classified class returns the same
    /// (t+1)-space.
    pub fn verify_largeset(&self) -> Result<VerificationReport> {
        let started = Instant::now();
        let tower = self.tower();
        let t = self.cons.t();
        let wspaces: Vec<Subspace> = enumerate_subspaces(tower, self.m, t + 1)?.collect();
        let blocks = wspaces
            .par_iter()
            .map(|w| self.cons.classify(w))
            .collect::<Result<Vec<_>>>()?;

        let mut failures = Vec::new();
        for (w, blk) in wspaces.iter().zip(blocks.iter()) {
            if blk.space() != w {
                failures.push(Failure {
                    check: "classify_space".into(),
                    detail: json!({ "space": w, "block": blk }),
                });
            }
        }

        let tspaces: Vec<Subspace> = enumerate_subspaces(tower, self.m, t)?.collect();
        for v in &tspaces {
            let holders: Vec<usize> = (0..wspaces.len())
                .filter(|&i| wspaces[i].contains_space(tower, v))
                .collect();
            for (pos, &i) in holders.iter().enumerate() {
                for &j in &holders[pos + 1..] {
                    if blocks[i].label() == blocks[j].label() {
                        failures.push(Failure {
                            check: "distinct_labels_through_tspace".into(),
                            detail: json!({
                                "tspace": v,
                                "space1": &wspaces[i],
                                "space2": &wspaces[j],
                                "label": blocks[i].label(),
                            }),
                        });
                    }
                }
            }
        }

        // cover/classify consistency on all incidences
        let incidences: Vec<(usize, usize)> = (0..wspaces.len())
            .flat_map(|i| {
                let w = &wspaces[i];
                tspaces
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| w.contains_space(tower, v))
                    .map(move |(j, _)| (i, j))
                    .collect::<Vec<_>>()
            })
            .collect();
        let inc_failures: Vec<Option<Failure>> = incidences
            .par_iter()
            .map(|&(i, j)| {
                let blk = &blocks[i];
                match self.cons.cover(blk.a(), &tspaces[j]) {
                    Ok(cov) if cov.space() == &wspaces[i] => None,
                    Ok(cov) => Some(Failure {
                        check: "cover_classify_roundtrip".into(),
                        detail: json!({
                            "space": &wspaces[i],
                            "tspace": &tspaces[j],
                            "a": blk.a(),
                            "covered": cov.space(),
                        }),
                    }),
                    Err(e) => Some(Failure {
                        check: "cover_classify_roundtrip".into(),
                        detail: json!({
                            "space": &wspaces[i],
                            "tspace": &tspaces[j],
                            "a": blk.a(),
                            "error": e.to_string(),
                        }),
                    }),
                }
            })
            .collect();
        failures.extend(inc_failures.into_iter().flatten());

        Ok(VerificationReport::from_parts(
            wspaces.len() as u64,
            failures,
            started,
        ))
    }

    /// Kernel equality under every F_q^* scaling of (a, B), and kernel
    /// inequality for sampled non-multiples. The reference pair is drawn
    /// through `cover`, so its kernel is fully realized in the ambient
    /// field and inequality of truncated kernels is conclusive.
    pub fn verify_scalar_lemma(&self, trials: u64, seed: u64) -> Result<VerificationReport> {
        let started = Instant::now();
        let tower = self.tower();
        let t = self.cons.t();
        let q = tower.q();
        let base = tower.base_ctx();

        let failures: Vec<Vec<Failure>> = (0..trials)
            .into_par_iter()
            .map(|trial| -> Result<Vec<Failure>> {
                let mut rng = Self::trial_rng(seed, trial);
                let mut fails = Vec::new();
                let v = self.rand_space(&mut rng, t);
                let a = self.rand_subfield_nonzero(&mut rng);
                let reference = self.cons.cover(&a, &v)?;
                let bs = reference.coefficients().to_vec();
                let f = reference.polynomial();

                for lam_idx in 1..q {
                    let lam = base.from_index(lam_idx);
                    let lam_amb = tower.embed_base(&lam);
                    let la = tower.mul(&lam_amb, &a);
                    let lbs: Vec<AmbientElement> =
                        bs.iter().map(|b| tower.mul(&lam_amb, b)).collect();
                    let f_scaled = self.cons.f_from_ab(&la, &lbs)?;
                    if f_scaled != QPolynomial::scale(tower, &lam_amb, f) {
                        fails.push(Failure {
                            check: "scaled_polynomial_identity".into(),
                            detail: json!({ "a": a, "B": bs, "lambda": lam }),
                        });
                    }
                    let blk = self.cons.block(&la, &lbs)?;
                    if blk.space() != reference.space() {
                        fails.push(Failure {
                            check: "scaled_kernel_equality".into(),
                            detail: json!({
                                "a": a, "B": bs, "lambda": lam,
                                "space": reference.space(), "scaled_space": blk.space(),
                            }),
                        });
                    }
                    if blk.label() != reference.label() {
                        fails.push(Failure {
                            check: "scaled_label_equality".into(),
                            detail: json!({ "a": a, "lambda": lam }),
                        });
                    }
                }

                // a non-multiple (c, D): either perturb B or draw fresh
                // ambient-wide data
                let (c, ds) = loop {
                    let (c, ds) = if trial % 2 == 0 {
                        let mut ds = bs.clone();
                        let pos = rng.gen_range(0..t);
                        let delta = self.rand_subfield_nonzero(&mut rng);
                        ds[pos] = tower.add(&ds[pos], &delta);
                        (a.clone(), ds)
                    } else {
                        let c = loop {
                            let c = self.rand_ambient(&mut rng);
                            if !c.is_zero() {
                                break c;
                            }
                        };
                        let ds: Vec<AmbientElement> =
                            (0..t).map(|_| self.rand_ambient(&mut rng)).collect();
                        (c, ds)
                    };
                    if !is_fq_multiple(tower, (&a, &bs), (&c, &ds)) {
                        break (c, ds);
                    }
                };
                let g = self.cons.f_from_ab(&c, &ds)?;
                let k = g.kernel(tower)?;
                if &k == reference.space() {
                    fails.push(Failure {
                        check: "non_multiple_kernel_inequality".into(),
                        detail: json!({ "a": a, "B": bs, "c": c, "D": ds }),
                    });
                }
                Ok(fails)
            })
            .collect::<Result<Vec<_>>>()?;

        Ok(VerificationReport::from_parts(
            trials,
            failures.into_iter().flatten().collect(),
            started,
        ))
    }

    /// dim(ker f_{a,B} ∩ ker f_{a,C}) <= t-1 for B != C, cross-checked by
    /// the conventional-gcd oracle: the gcd is separable with at most
    /// q^{t-1} distinct roots, its ambient root count is exactly
    /// q^{intersection dim}, and its q-polynomial kernel matches.
    pub fn verify_intersection_lemma(
        &self,
        trials: u64,
        seed: u64,
    ) -> Result<VerificationReport> {
        let started = Instant::now();
        let tower = self.tower();
        let t = self.cons.t();
        let q = tower.q();

        let failures: Vec<Vec<Failure>> = (0..trials)
            .into_par_iter()
            .map(|trial| -> Result<Vec<Failure>> {
                let mut rng = Self::trial_rng(seed, trial);
                let mut fails = Vec::new();
                let a = self.rand_subfield_nonzero(&mut rng);
                let bs: Vec<AmbientElement> =
                    (0..t).map(|_| self.rand_subfield(&mut rng)).collect();
                let cs = loop {
                    let cs: Vec<AmbientElement> =
                        (0..t).map(|_| self.rand_subfield(&mut rng)).collect();
                    if cs != bs {
                        break cs;
                    }
                };
                let f = self.cons.f_from_ab(&a, &bs)?;
                let g = self.cons.f_from_ab(&a, &cs)?;
                let inter = qpoly::kernel_intersection(tower, &f, &g)?;
                if inter.dim() > t - 1 {
                    fails.push(Failure {
                        check: "intersection_dimension".into(),
                        detail: json!({ "a": a, "B": bs, "C": cs, "dim": inter.dim() }),
                    });
                }
                let gcd = qpoly::conventional_gcd(tower, &f, &g)?;
                let deg = gcd.len().saturating_sub(1) as u128;
                if deg > q.pow((t - 1) as u32) {
                    fails.push(Failure {
                        check: "gcd_distinct_roots_bound".into(),
                        detail: json!({ "a": a, "B": bs, "C": cs, "gcd_degree": deg.to_string() }),
                    });
                }
                let ambient_roots = qpoly::ambient_root_count(tower, &gcd) as u128;
                if ambient_roots != q.pow(inter.dim() as u32) {
                    fails.push(Failure {
                        check: "oracle_agreement".into(),
                        detail: json!({
                            "a": a, "B": bs, "C": cs,
                            "ambient_roots": ambient_roots.to_string(),
                            "intersection_dim": inter.dim(),
                        }),
                    });
                }
                match QPolynomial::from_ordinary(tower, &gcd) {
                    Some(gq) if !gq.is_zero() => {
                        if gq.kernel(tower)? != inter {
                            fails.push(Failure {
                                check: "gcd_kernel_agreement".into(),
                                detail: json!({ "a": a, "B": bs, "C": cs }),
                            });
                        }
                    }
                    _ => {
                        fails.push(Failure {
                            check: "gcd_is_linearized".into(),
                            detail: json!({ "a": a, "B": bs, "C": cs, "gcd": gcd }),
                        });
                    }
                }
                Ok(fails)
            })
            .collect::<Result<Vec<_>>>()?;

        Ok(VerificationReport::from_parts(
            trials,
            failures.into_iter().flatten().collect(),
            started,
        ))
    }

    /// moore_det(A·v) = det(A)·moore_det(v) and the same scaling for the
    /// top annihilator; spans are preserved by invertible A; annihilator
    /// kernels equal the span; and for k = t+1 the extracted a equals the
    /// Moore determinant.
    pub fn verify_moore_invariance(
        &self,
        k: usize,
        trials: u64,
        seed: u64,
    ) -> Result<VerificationReport> {
        let started = Instant::now();
        let tower = self.tower();
        if k == 0 || k > self.m {
            return Err(Error::BadDims(format!(
                "need 1 <= k <= m, got k={k}, m={}",
                self.m
            )));
        }

        let failures: Vec<Vec<Failure>> = (0..trials)
            .into_par_iter()
            .map(|trial| -> Result<Vec<Failure>> {
                let mut rng = Self::trial_rng(seed, trial);
                let mut fails = Vec::new();
                let vs = self.rand_independent(&mut rng, k);
                let det_v = moore_det(tower, &vs);
                let top_v = annihilator_top(tower, &vs);
                let span = Subspace::from_elements(tower, &vs)?;

                if det_v.is_zero() {
                    fails.push(Failure {
                        check: "independent_det_nonzero".into(),
                        detail: json!({ "v": vs }),
                    });
                }
                if top_v.kernel(tower)? != span {
                    fails.push(Failure {
                        check: "annihilator_kernel_is_span".into(),
                        detail: json!({ "v": vs }),
                    });
                }

                // random F_q matrix action on the generator tuple
                let rows: Vec<Vec<BaseElement>> = (0..k)
                    .map(|_| (0..k).map(|_| self.rand_base(&mut rng)).collect())
                    .collect();
                let mat = FqMatrix::from_rows(rows.clone(), k)?;
                let det_a = mat.determinant(tower)?;
                let ws: Vec<AmbientElement> = (0..k)
                    .map(|i| {
                        let mut acc = tower.zero();
                        for (j, v) in vs.iter().enumerate() {
                            if !rows[i][j].is_zero() {
                                acc = tower.add(&acc, &tower.scale(&rows[i][j], v));
                            }
                        }
                        acc
                    })
                    .collect();
                let det_w = moore_det(tower, &ws);
                let expected = tower.scale(&det_a, &det_v);
                if det_w != expected {
                    fails.push(Failure {
                        check: "moore_det_scaling".into(),
                        detail: json!({ "v": vs, "A": rows, "detA": det_a }),
                    });
                }
                let top_w = annihilator_top(tower, &ws);
                let scaled = QPolynomial::scale(tower, &tower.embed_base(&det_a), &top_v);
                if top_w != scaled {
                    fails.push(Failure {
                        check: "annihilator_scaling".into(),
                        detail: json!({ "v": vs, "A": rows, "detA": det_a }),
                    });
                }
                if !det_a.is_zero() {
                    let span_w = Subspace::from_elements(tower, &ws)?;
                    if span_w != span {
                        fails.push(Failure {
                            check: "span_preserved".into(),
                            detail: json!({ "v": vs, "A": rows }),
                        });
                    }
                }

                if k == self.cons.t() + 1 {
                    let (a, _) = self.cons.extract_ab(&top_v)?;
                    if a != det_v {
                        fails.push(Failure {
                            check: "extracted_a_is_moore_det".into(),
                            detail: json!({ "v": vs, "a": a, "det": det_v }),
                        });
                    }
                }
                Ok(fails)
            })
            .collect::<Result<Vec<_>>>()?;

        Ok(VerificationReport::from_parts(
            trials,
            failures.into_iter().flatten().collect(),
            started,
        ))
    }
}

/// Whether (c, D) = λ(a, B) for some λ in F_q^*.
fn is_fq_multiple(
    tower: &Tower,
    (a, bs): (&AmbientElement, &[AmbientElement]),
    (c, ds): (&AmbientElement, &[AmbientElement]),
) -> bool {
    let base = tower.base_ctx();
    for lam_idx in 1..tower.q() {
        let lam = base.from_index(lam_idx);
        if tower.scale(&lam, a) == *c
            && bs
                .iter()
                .zip(ds.iter())
                .all(|(b, d)| tower.scale(&lam, b) == *d)
        {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn gaussian_binomial_examples() {
        assert_eq!(gaussian_binomial(3, 0, 2).unwrap(), 1);
        assert_eq!(gaussian_binomial(3, 1, 2).unwrap(), 7);
        assert_eq!(gaussian_binomial(4, 2, 2).unwrap(), 35);
        assert_eq!(gaussian_binomial(2, 1, 3).unwrap(), 4);
        assert!(gaussian_binomial(2, 3, 2).is_err());
    }

    #[test]
    fn gaussian_binomial_matches_product_formula() {
        // independent oracle: prod (q^{m-i} - 1) / (q^{d-i} - 1)
        for q in [2u128, 3] {
            for m in 0..=6usize {
                for d in 0..=m {
                    let mut num = 1u128;
                    let mut den = 1u128;
                    for i in 0..d {
                        num *= q.pow((m - i) as u32) - 1;
                        den *= q.pow((d - i) as u32) - 1;
                    }
                    assert_eq!(num % den, 0);
                    assert_eq!(gaussian_binomial(m, d, q).unwrap(), num / den);
                }
            }
        }
    }

    #[test]
    fn enumeration_counts_and_distinctness() {
        let t2 = Tower::build(2, 1, 4).unwrap();
        for (m, d, expect) in [(2usize, 1usize, 3u128), (4, 2, 35), (4, 0, 1), (4, 4, 1)] {
            let subs: Vec<Subspace> = enumerate_subspaces(&t2, m, d).unwrap().collect();
            assert_eq!(subs.len() as u128, expect);
            let set: HashSet<Subspace> = subs.iter().cloned().collect();
            assert_eq!(set.len(), subs.len());
            for s in &subs {
                assert_eq!(s.dim(), d);
            }
        }
        let t3 = Tower::build(2, 1, 3).unwrap();
        let planes: Vec<Subspace> = enumerate_subspaces(&t3, 3, 2).unwrap().collect();
        assert_eq!(planes.len(), 7);
    }

    #[test]
    fn enumeration_rejects_bad_dims() {
        let t = Tower::build(2, 1, 4).unwrap();
        assert!(matches!(
            enumerate_subspaces(&t, 3, 1),
            Err(Error::BadDims(_))
        ));
        assert!(matches!(
            enumerate_subspaces(&t, 2, 3),
            Err(Error::BadDims(_))
        ));
    }

    #[test]
    fn steiner_suite_passes_for_the_smallest_case() {
        let t = Tower::build(2, 1, 4).unwrap();
        let checker = Checker::new(&t, 1, 2).unwrap();
        let report = checker.verify_steiner(&t.one(), 20, 0).unwrap();
        assert!(report.passed(), "failures: {:?}", report.failures);
        assert_eq!(report.checked, 3);
    }

    #[test]
    fn steiner_suite_rejects_zero_a() {
        let t = Tower::build(2, 1, 4).unwrap();
        let checker = Checker::new(&t, 1, 2).unwrap();
        assert!(matches!(
            checker.verify_steiner(&t.zero(), 5, 0),
            Err(Error::ZeroA)
        ));
    }

    #[test]
    fn largeset_suite_single_block_cases() {
        // q=2, t=1, m=2: exactly one 2-space (F_4 itself)
        let t = Tower::build(2, 1, 4).unwrap();
        let checker = Checker::new(&t, 1, 2).unwrap();
        let report = checker.verify_largeset().unwrap();
        assert!(report.passed(), "failures: {:?}", report.failures);
        assert_eq!(report.checked, 1);

        // q=3, t=1, m=2
        let t3 = Tower::build(3, 1, 12).unwrap();
        let checker3 = Checker::new(&t3, 1, 2).unwrap();
        let report3 = checker3.verify_largeset().unwrap();
        assert!(report3.passed(), "failures: {:?}", report3.failures);
        assert_eq!(report3.checked, 1);
    }

    #[test]
    fn scalar_lemma_suite_smoke() {
        let t = Tower::build(3, 1, 12).unwrap();
        let checker = Checker::new(&t, 1, 2).unwrap();
        let report = checker.verify_scalar_lemma(10, 7).unwrap();
        assert!(report.passed(), "failures: {:?}", report.failures);
        assert_eq!(report.checked, 10);
    }

    #[test]
    fn intersection_lemma_suite_smoke() {
        let t = Tower::build(2, 1, 4).unwrap();
        let checker = Checker::new(&t, 1, 2).unwrap();
        let report = checker.verify_intersection_lemma(25, 3).unwrap();
        assert!(report.passed(), "failures: {:?}", report.failures);
    }

    #[test]
    fn moore_invariance_suite_smoke() {
        let t = Tower::build(3, 1, 4).unwrap();
        let checker = Checker::new(&t, 1, 4).unwrap();
        let report = checker.verify_moore_invariance(2, 25, 11).unwrap();
        assert!(report.passed(), "failures: {:?}", report.failures);
    }

    #[test]
    fn report_merge_combines_counts_and_status() {
        let started = Instant::now();
        let pass = VerificationReport::from_parts(3, Vec::new(), started);
        let fail = VerificationReport::from_parts(
            2,
            vec![Failure {
                check: "x".into(),
                detail: json!({}),
            }],
            started,
        );
        let merged = pass.merge(fail);
        assert_eq!(merged.checked, 5);
        assert_eq!(merged.status, Status::Fail);
        assert_eq!(merged.failures.len(), 1);
    }

    #[test]
    fn report_serialization_is_stable_without_timing() {
        let started = Instant::now();
        let report = VerificationReport::from_parts(3, Vec::new(), started).without_timing();
        let s = serde_json::to_string(&report).unwrap();
        assert_eq!(s, r#"{"status":"pass","checked":3,"failures":[]}"#);
    }
}
