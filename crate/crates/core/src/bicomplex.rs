//! The bisimplicial complex `X_{p,q} = A^{⊗q} ⊗ V ⊗ B^{⊗p}` of a smash
//! biproduct, its diagonal comparison map and the two spectral sequences.
//!
//! Orientation: `p` counts B-factors and `q` counts A-factors. Horizontal
//! faces act on the B-string, vertical faces on the A-string. Cyclically the
//! string reads `v, b_1, …, b_p, a_1, …, a_q`, so `b_p` meets `a_1` through R.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::algebras::SmashCase;
use crate::error::{Error, Result};
use crate::hochschild::{box_degrees, Bimodule, ChainComplexSpec, ChainTuple, CoeffBasis, Window};
use crate::linalg::{induced_homology_map, rank, Scalar, SparseMatrix, SubquotientBasis};
use crate::pbw::{AlgebraPresentation, Monomial, Multidegree};
use crate::twist::{join_smash, split_smash};

/// Basis element `a_1 ⊗ … ⊗ a_q ⊗ v ⊗ b_1 ⊗ … ⊗ b_p`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BiTuple {
    pub a: Vec<Monomial>,
    pub v: CoeffBasis,
    pub b: Vec<Monomial>,
}

/// One multidegree component of `X_{p,q}`.
#[derive(Clone, Debug)]
pub struct BisimplicialBlock {
    pub p: usize,
    pub q: usize,
    pub degree: Multidegree,
    pub basis: Vec<BiTuple>,
    index: HashMap<BiTuple, usize>,
}

impl BisimplicialBlock {
    fn new(p: usize, q: usize, degree: Multidegree, mut basis: Vec<BiTuple>) -> Self {
        basis.sort();
        let index = basis.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        BisimplicialBlock { p, q, degree, basis, index }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, t: &BiTuple) -> Option<usize> {
        self.index.get(t).copied()
    }
}

type Terms<T> = Vec<(T, Scalar)>;

fn sign(i: usize) -> Scalar {
    if i % 2 == 0 {
        Scalar::one()
    } else {
        -Scalar::one()
    }
}

/// The bisimplicial complex of `A #_R B` with coefficients in an
/// `A #_R B`-bimodule `V` (acting through the smash generators).
pub struct Bicomplex<'a> {
    pub case: &'a SmashCase,
    pub coeff: &'a Bimodule,
}

fn pieces(alg: &AlgebraPresentation, cap: &Multidegree) -> Result<Vec<(Multidegree, Vec<Monomial>)>> {
    let mut out = Vec::new();
    for d in box_degrees(&vec![0; cap.axes()], &cap.0) {
        let b = alg.basis_of_degree(&d)?;
        if !b.is_empty() {
            out.push((d, b));
        }
    }
    Ok(out)
}

impl<'a> Bicomplex<'a> {
    /// Regular coefficients `V = A #_R B`.
    pub fn regular(case: &'a SmashCase, coeff: &'a Bimodule) -> Self {
        Bicomplex { case, coeff }
    }

    fn na(&self) -> usize {
        self.case.na()
    }

    fn lift_a(&self, a: &Monomial) -> Monomial {
        join_smash(a, &self.case.b.one())
    }

    fn lift_b(&self, b: &Monomial) -> Monomial {
        join_smash(&self.case.a.one(), b)
    }

    /// Enumerates `X_{p,q}` in degree `d`.
    pub fn block(&self, p: usize, q: usize, d: &Multidegree) -> Result<BisimplicialBlock> {
        let (a, b) = (&self.case.a, &self.case.b);
        if a.is_laurent() || b.is_laurent() {
            return Err(Error::InfiniteBasis("bisimplicial blocks need non-Laurent factors".into()));
        }
        if !d.is_nonnegative() {
            return Ok(BisimplicialBlock::new(p, q, d.clone(), Vec::new()));
        }
        let pa = pieces(a, d)?;
        let pb = pieces(b, d)?;
        let mut slots: Vec<&Vec<(Multidegree, Vec<Monomial>)>> = Vec::new();
        slots.extend(std::iter::repeat_n(&pa, q));
        slots.extend(std::iter::repeat_n(&pb, p));
        let mut out = Vec::new();
        let mut choice = Vec::with_capacity(p + q);
        self.enumerate(d, &slots, &mut choice, &Multidegree::zero(d.axes()), p, q, &mut out)?;
        Ok(BisimplicialBlock::new(p, q, d.clone(), out))
    }

    #[allow(clippy::too_many_arguments)]
    fn enumerate(
        &self,
        d: &Multidegree,
        slots: &[&Vec<(Multidegree, Vec<Monomial>)>],
        choice: &mut Vec<usize>,
        used: &Multidegree,
        p: usize,
        q: usize,
        out: &mut Vec<BiTuple>,
    ) -> Result<()> {
        let k = choice.len();
        if k == slots.len() {
            let vs = self.coeff.basis_of_degree(&(d - used))?;
            if vs.is_empty() {
                return Ok(());
            }
            let mut strings: Vec<Vec<Monomial>> = vec![Vec::new()];
            for (slot, &c) in slots.iter().zip(choice.iter()) {
                let list = &slot[c].1;
                strings = strings
                    .into_iter()
                    .flat_map(|s| {
                        list.iter().map(move |m| {
                            let mut s2 = s.clone();
                            s2.push(m.clone());
                            s2
                        })
                    })
                    .collect();
            }
            for s in strings {
                let (a, b) = s.split_at(q);
                debug_assert_eq!(b.len(), p);
                for v in &vs {
                    out.push(BiTuple { a: a.to_vec(), v: v.clone(), b: b.to_vec() });
                }
            }
            return Ok(());
        }
        for (i, (e, _)) in slots[k].iter().enumerate() {
            let next = used + e;
            if next.0.iter().zip(&d.0).any(|(x, y)| x > y) {
                continue;
            }
            choice.push(i);
            self.enumerate(d, slots, choice, &next, p, q, out)?;
            choice.pop();
        }
        Ok(())
    }

    fn act_right(&self, v: &CoeffBasis, m: &Monomial) -> Terms<CoeffBasis> {
        self.coeff.act_right(v, m)
    }

    fn act_left(&self, m: &Monomial, v: &CoeffBasis) -> Terms<CoeffBasis> {
        self.coeff.act_left(m, v)
    }

    /// Horizontal face `∂^h_i` on one tuple.
    pub fn h_face(&self, i: usize, t: &BiTuple) -> Result<Terms<BiTuple>> {
        let p = t.b.len();
        if p == 0 || i > p {
            return Err(Error::DimensionMismatch(format!("no horizontal face {i} on X_{{{p},·}}")));
        }
        let mut out = Vec::new();
        if i == 0 {
            for (v, c) in self.act_right(&t.v, &self.lift_b(&t.b[0])) {
                out.push((BiTuple { a: t.a.clone(), v, b: t.b[1..].to_vec() }, c));
            }
        } else if i < p {
            for (m, c) in self.case.b.mul_mono(&t.b[i - 1], &t.b[i]).iter() {
                let mut b = t.b[..i - 1].to_vec();
                b.push(m.clone());
                b.extend_from_slice(&t.b[i + 1..]);
                out.push((BiTuple { a: t.a.clone(), v: t.v.clone(), b }, c.clone()));
            }
        } else {
            // b_p passes a_1, …, a_q through R, then acts on v from the left
            let mut states: Terms<(Vec<Monomial>, Monomial)> = vec![((Vec::new(), t.b[p - 1].clone()), Scalar::one())];
            for ak in &t.a {
                let mut next = Vec::new();
                for ((done, bcur), c) in states {
                    for ((a2, b2), c2) in self.case.law.apply_r(&bcur, ak)?.iter() {
                        let mut d2 = done.clone();
                        d2.push(a2.clone());
                        next.push(((d2, b2.clone()), &c * c2));
                    }
                }
                states = next;
            }
            for ((a2, bfin), c) in states {
                for (v, c2) in self.act_left(&self.lift_b(&bfin), &t.v) {
                    out.push((BiTuple { a: a2.clone(), v, b: t.b[..p - 1].to_vec() }, &c * c2));
                }
            }
        }
        Ok(out)
    }

    /// Vertical face `∂^v_j` on one tuple.
    pub fn v_face(&self, j: usize, t: &BiTuple) -> Result<Terms<BiTuple>> {
        let q = t.a.len();
        if q == 0 || j > q {
            return Err(Error::DimensionMismatch(format!("no vertical face {j} on X_{{·,{q}}}")));
        }
        let mut out = Vec::new();
        if j == 0 {
            // a_1 passes b_p, …, b_1 through R, then acts on v from the right
            let p = t.b.len();
            let mut states: Terms<(Vec<Monomial>, Monomial)> = vec![((t.b.clone(), t.a[0].clone()), Scalar::one())];
            for k in (0..p).rev() {
                let mut next = Vec::new();
                for ((bs, acur), c) in states {
                    for ((a2, b2), c2) in self.case.law.apply_r(&bs[k], &acur)?.iter() {
                        let mut bs2 = bs.clone();
                        bs2[k] = b2.clone();
                        next.push(((bs2, a2.clone()), &c * c2));
                    }
                }
                states = next;
            }
            for ((bs, afin), c) in states {
                for (v, c2) in self.act_right(&t.v, &self.lift_a(&afin)) {
                    out.push((BiTuple { a: t.a[1..].to_vec(), v, b: bs.clone() }, &c * c2));
                }
            }
        } else if j < q {
            for (m, c) in self.case.a.mul_mono(&t.a[j - 1], &t.a[j]).iter() {
                let mut a = t.a[..j - 1].to_vec();
                a.push(m.clone());
                a.extend_from_slice(&t.a[j + 1..]);
                out.push((BiTuple { a, v: t.v.clone(), b: t.b.clone() }, c.clone()));
            }
        } else {
            for (v, c) in self.act_left(&self.lift_a(&t.a[q - 1]), &t.v) {
                out.push((BiTuple { a: t.a[..q - 1].to_vec(), v, b: t.b.clone() }, c));
            }
        }
        Ok(out)
    }

    fn matrix<F>(&self, src: &BisimplicialBlock, dst: &BisimplicialBlock, f: F) -> Result<SparseMatrix>
    where
        F: Fn(&BiTuple) -> Result<Terms<BiTuple>> + Sync,
    {
        let cols: Vec<Vec<(usize, Scalar)>> = src
            .basis
            .par_iter()
            .map(|t| {
                f(t)?
                    .into_iter()
                    .map(|(u, c)| {
                        dst.index_of(&u)
                            .map(|i| (i, c))
                            .ok_or_else(|| Error::Inhomogeneous("face leaves its block".into()))
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        Ok(SparseMatrix::from_columns(dst.dim(), cols))
    }

    /// Matrix of `∂^h_i: X_{p,q} → X_{p−1,q}`.
    pub fn h_face_matrix(&self, i: usize, src: &BisimplicialBlock, dst: &BisimplicialBlock) -> Result<SparseMatrix> {
        self.matrix(src, dst, |t| self.h_face(i, t))
    }

    /// Matrix of `∂^v_j: X_{p,q} → X_{p,q−1}`.
    pub fn v_face_matrix(&self, j: usize, src: &BisimplicialBlock, dst: &BisimplicialBlock) -> Result<SparseMatrix> {
        self.matrix(src, dst, |t| self.v_face(j, t))
    }

    /// `∂^h = Σ (−1)^i ∂^h_i`.
    pub fn dh(&self, src: &BisimplicialBlock, dst: &BisimplicialBlock) -> Result<SparseMatrix> {
        if src.p == 0 {
            return Ok(SparseMatrix::zero(0, src.dim()));
        }
        self.matrix(src, dst, |t| {
            let mut all = Vec::new();
            for i in 0..=t.b.len() {
                all.extend(self.h_face(i, t)?.into_iter().map(|(u, c)| (u, c * sign(i))));
            }
            Ok(all)
        })
    }

    /// `∂^v = Σ (−1)^j ∂^v_j`.
    pub fn dv(&self, src: &BisimplicialBlock, dst: &BisimplicialBlock) -> Result<SparseMatrix> {
        if src.q == 0 {
            return Ok(SparseMatrix::zero(0, src.dim()));
        }
        self.matrix(src, dst, |t| {
            let mut all = Vec::new();
            for j in 0..=t.a.len() {
                all.extend(self.v_face(j, t)?.into_iter().map(|(u, c)| (u, c * sign(j))));
            }
            Ok(all)
        })
    }

    /// Differential of the diagonal `Σ (−1)^i ∂^h_i ∂^v_i` on `X_{n,n}`.
    pub fn diagonal_differential(&self, src: &BisimplicialBlock, dst: &BisimplicialBlock) -> Result<SparseMatrix> {
        if src.p != src.q || dst.p != dst.q || src.p != dst.p + 1 {
            return Err(Error::DimensionMismatch("diagonal differential needs X_{n,n} → X_{n−1,n−1}".into()));
        }
        self.matrix(src, dst, |t| {
            let n = t.a.len();
            let mut all = Vec::new();
            for i in 0..=n {
                for (u, c) in self.v_face(i, t)? {
                    for (w, c2) in self.h_face(i, &u)? {
                        all.push((w, &c * c2 * sign(i)));
                    }
                }
            }
            Ok(all)
        })
    }

    /// Ψ on one Hochschild chain `v ⊗ c_1 ⊗ … ⊗ c_n` of `CH_n(A #_R B, V)`.
    /// For i = n down to 1, `a_i` moves right past `b_i, b_{i+1}, …, b_n` via L.
    pub fn diagonal_map(&self, t: &ChainTuple) -> Result<Terms<BiTuple>> {
        let na = self.na();
        let (mut a0, mut b0): (Vec<Monomial>, Vec<Monomial>) = (Vec::new(), Vec::new());
        for c in &t.factors {
            let (a, b) = split_smash(na, c);
            a0.push(a);
            b0.push(b);
        }
        let n = a0.len();
        let mut states: Terms<(Vec<Monomial>, Vec<Monomial>)> = vec![((a0, b0), Scalar::one())];
        for i in (0..n).rev() {
            for k in i..n {
                let mut next = Vec::new();
                for ((a, b), c) in states {
                    for ((b2, a2), c2) in self.case.law.apply_l(&a[i], &b[k])?.iter() {
                        let (mut a3, mut b3) = (a.clone(), b.clone());
                        a3[i] = a2.clone();
                        b3[k] = b2.clone();
                        next.push(((a3, b3), &c * c2));
                    }
                }
                states = next;
            }
        }
        Ok(states.into_iter().map(|((a, b), c)| (BiTuple { a, v: t.v.clone(), b }, c)).collect())
    }

    /// The inverse of Ψ: each `a_i` moves back left past `b_n, …, b_i` via R.
    pub fn diagonal_inverse(&self, t: &BiTuple) -> Result<Terms<ChainTuple>> {
        let n = t.a.len();
        if t.b.len() != n {
            return Err(Error::DimensionMismatch("Ψ⁻¹ needs a diagonal tuple".into()));
        }
        let mut states: Terms<(Vec<Monomial>, Vec<Monomial>)> = vec![((t.a.clone(), t.b.clone()), Scalar::one())];
        for i in 0..n {
            for k in (i..n).rev() {
                let mut next = Vec::new();
                for ((a, b), c) in states {
                    for ((a2, b2), c2) in self.case.law.apply_r(&b[k], &a[i])?.iter() {
                        let (mut a3, mut b3) = (a.clone(), b.clone());
                        a3[i] = a2.clone();
                        b3[k] = b2.clone();
                        next.push(((a3, b3), &c * c2));
                    }
                }
                states = next;
            }
        }
        Ok(states
            .into_iter()
            .map(|((a, b), c)| {
                let factors = a.iter().zip(&b).map(|(x, y)| join_smash(x, y)).collect();
                (ChainTuple { v: t.v.clone(), factors, w: None }, c)
            })
            .collect())
    }

    /// Checks that Ψ is a bijective chain map on the blocks of degree `d`
    /// for `n ≤ n_max`; returns the number of verified matrix identities.
    pub fn check_diagonal(&self, d: &Multidegree, n_max: usize) -> Result<usize> {
        let spec = ChainComplexSpec::hochschild(&self.case.smash, self.coeff);
        let mut chain = Vec::new();
        let mut diag = Vec::new();
        for n in 0..=n_max {
            chain.push(spec.chain_block(n, d)?);
            diag.push(self.block(n, n, d)?);
        }
        let psi = |n: usize| -> Result<SparseMatrix> {
            let (src, dst) = (&chain[n], &diag[n]);
            let cols: Vec<Vec<(usize, Scalar)>> = src
                .basis
                .par_iter()
                .map(|t| {
                    self.diagonal_map(t)?
                        .into_iter()
                        .map(|(u, c)| {
                            dst.index_of(&u).map(|i| (i, c)).ok_or_else(|| Error::Inhomogeneous("Ψ leaves its block".into()))
                        })
                        .collect()
                })
                .collect::<Result<_>>()?;
            Ok(SparseMatrix::from_columns(dst.dim(), cols))
        };
        let mut checks = 0;
        let psis: Vec<SparseMatrix> = (0..=n_max).map(psi).collect::<Result<_>>()?;
        for n in 0..=n_max {
            let m = &psis[n];
            if m.rows() != m.cols() || rank(m) != m.cols() {
                return Err(Error::CheckFailed(format!("Ψ is not bijective at n = {n}, degree {d}")));
            }
            for (j, t) in diag[n].basis.iter().enumerate() {
                let back = self.diagonal_inverse(t)?;
                let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
                for (u, c) in back {
                    let i = chain[n].index_of(&u).ok_or_else(|| Error::Inhomogeneous("Ψ⁻¹ leaves its block".into()))?;
                    for (r, c2) in m.column(i) {
                        *acc.entry(*r).or_insert_with(Scalar::zero) += &c * c2;
                    }
                }
                acc.retain(|_, c| !c.is_zero());
                if acc.len() != 1 || acc.get(&j) != Some(&Scalar::one()) {
                    return Err(Error::CheckFailed(format!("Ψ∘Ψ⁻¹ ≠ id at n = {n}, degree {d}")));
                }
            }
            checks += 1;
            if n >= 1 {
                let b = spec.boundary_matrix(&chain[n], &chain[n - 1])?;
                let dd = self.diagonal_differential(&diag[n], &diag[n - 1])?;
                if dd.mul(m)? != psis[n - 1].mul(&b)? {
                    return Err(Error::NotAChainMap(format!("Ψ does not commute with the boundary at n = {n}, degree {d}")));
                }
                checks += 1;
            }
        }
        Ok(checks)
    }

    /// Checks the simplicial identities in both directions, the vanishing of
    /// both squared differentials and `∂^h∂^v = ∂^v∂^h` on the blocks of
    /// degree `d` with `p + q ≤ top`. Returns the number of identities verified.
    pub fn check_identities(&self, d: &Multidegree, top: usize) -> Result<usize> {
        let mut blocks: BTreeMap<(usize, usize), BisimplicialBlock> = BTreeMap::new();
        for p in 0..=top {
            for q in 0..=top - p {
                blocks.insert((p, q), self.block(p, q, d)?);
            }
        }
        let mut checks = 0;
        let fail = |what: String| Err(Error::CheckFailed(what));
        for (&(p, q), x) in &blocks {
            if p >= 2 {
                let (y, z) = (&blocks[&(p - 1, q)], &blocks[&(p - 2, q)]);
                let faces: Vec<SparseMatrix> = (0..=p).map(|i| self.h_face_matrix(i, x, y)).collect::<Result<_>>()?;
                let lower: Vec<SparseMatrix> = (0..p).map(|i| self.h_face_matrix(i, y, z)).collect::<Result<_>>()?;
                for j in 1..=p {
                    for i in 0..j {
                        if lower[i].mul(&faces[j])? != lower[j - 1].mul(&faces[i])? {
                            return fail(format!("horizontal identity ∂_{i}∂_{j} fails on X_{{{p},{q}}} in degree {d}"));
                        }
                        checks += 1;
                    }
                }
            }
            if q >= 2 {
                let (y, z) = (&blocks[&(p, q - 1)], &blocks[&(p, q - 2)]);
                let faces: Vec<SparseMatrix> = (0..=q).map(|j| self.v_face_matrix(j, x, y)).collect::<Result<_>>()?;
                let lower: Vec<SparseMatrix> = (0..q).map(|j| self.v_face_matrix(j, y, z)).collect::<Result<_>>()?;
                for j in 1..=q {
                    for i in 0..j {
                        if lower[i].mul(&faces[j])? != lower[j - 1].mul(&faces[i])? {
                            return fail(format!("vertical identity ∂_{i}∂_{j} fails on X_{{{p},{q}}} in degree {d}"));
                        }
                        checks += 1;
                    }
                }
            }
            if p >= 1 && q >= 1 {
                let (xh, xv, xhv) = (&blocks[&(p - 1, q)], &blocks[&(p, q - 1)], &blocks[&(p - 1, q - 1)]);
                for i in 0..=p {
                    for j in 0..=q {
                        let hv = self.h_face_matrix(i, xv, xhv)?.mul(&self.v_face_matrix(j, x, xv)?)?;
                        let vh = self.v_face_matrix(j, xh, xhv)?.mul(&self.h_face_matrix(i, x, xh)?)?;
                        if hv != vh {
                            return fail(format!("∂^h_{i}∂^v_{j} ≠ ∂^v_{j}∂^h_{i} on X_{{{p},{q}}} in degree {d}"));
                        }
                        checks += 1;
                    }
                }
            }
        }
        Ok(checks)
    }
}

/// Which spectral sequence: `Columns` is `'E¹_{p,q} = H_p(B, CH_q(A,V))`
/// (horizontal homology first), `Rows` is `E¹_{p,q} = H_q(A, CH_p(B,V))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Filtration {
    Rows,
    Columns,
}

impl std::str::FromStr for Filtration {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rows" => Ok(Filtration::Rows),
            "columns" => Ok(Filtration::Columns),
            _ => Err(Error::Parse(format!("unknown filtration {s:?}"))),
        }
    }
}

impl Filtration {
    /// Target of `d^r` from `(p, q)`, if it has nonnegative coordinates.
    pub fn target(self, p: usize, q: usize, r: usize) -> Option<(usize, usize)> {
        match self {
            Filtration::Columns => (q >= r).then(|| (p + r - 1, q - r)),
            Filtration::Rows => (p >= r).then(|| (p - r, q + r - 1)),
        }
    }
}

/// One page of a spectral sequence: dimensions keyed by `(p, q, degree)`.
#[derive(Clone, Debug, Default, Serialize)]
pub struct SpectralPage {
    pub r: usize,
    pub entries: BTreeMap<(usize, usize, Multidegree), usize>,
    /// For r = 1: the induced `d¹` out of each position, in class bases.
    #[serde(skip)]
    pub d1_maps: BTreeMap<(usize, usize, Multidegree), SparseMatrix>,
}

impl SpectralPage {
    pub fn get(&self, p: usize, q: usize, d: &Multidegree) -> usize {
        self.entries.get(&(p, q, d.clone())).copied().unwrap_or(0)
    }

    /// Entries summed over all degrees.
    pub fn totals(&self) -> BTreeMap<(usize, usize), usize> {
        let mut out = BTreeMap::new();
        for ((p, q, _), v) in &self.entries {
            *out.entry((*p, *q)).or_insert(0) += v;
        }
        out
    }

    /// `Σ_{p+q=n} dim` per degree.
    pub fn diagonal_sums(&self, n_max: usize) -> BTreeMap<(usize, Multidegree), usize> {
        let mut out = BTreeMap::new();
        for ((p, q, d), v) in &self.entries {
            if p + q <= n_max {
                *out.entry((p + q, d.clone())).or_insert(0) += v;
            }
        }
        out
    }
}

/// E¹ and E² of one filtration, for `p + q ≤ n_max + 1`.
#[derive(Clone, Debug, Serialize)]
pub struct Pages {
    pub filtration: Filtration,
    pub n_max: usize,
    pub e1: SpectralPage,
    pub e2: SpectralPage,
}

fn degree_pages(bc: &Bicomplex, d: &Multidegree, n_max: usize, filt: Filtration) -> Result<(SpectralPage, SpectralPage)> {
    let top = n_max + 3;
    let mut blocks: BTreeMap<(usize, usize), BisimplicialBlock> = BTreeMap::new();
    for p in 0..=top {
        for q in 0..=top - p {
            blocks.insert((p, q), bc.block(p, q, d)?);
        }
    }
    // first differential: within the homology direction; second: induces d¹
    let first = |p: usize, q: usize| -> Result<SparseMatrix> {
        let x = &blocks[&(p, q)];
        match filt {
            Filtration::Columns if p > 0 => bc.dh(x, &blocks[&(p - 1, q)]),
            Filtration::Rows if q > 0 => bc.dv(x, &blocks[&(p, q - 1)]),
            _ => Ok(SparseMatrix::zero(0, x.dim())),
        }
    };
    let second = |p: usize, q: usize| -> Result<SparseMatrix> {
        let x = &blocks[&(p, q)];
        match filt {
            Filtration::Columns if q > 0 => bc.dv(x, &blocks[&(p, q - 1)]),
            Filtration::Rows if p > 0 => bc.dh(x, &blocks[&(p - 1, q)]),
            _ => Ok(SparseMatrix::zero(0, x.dim())),
        }
    };
    let positions: Vec<(usize, usize)> = blocks.keys().copied().filter(|(p, q)| p + q < top).collect();
    let first_maps: BTreeMap<(usize, usize), SparseMatrix> =
        blocks.keys().map(|&(p, q)| Ok(((p, q), first(p, q)?))).collect::<Result<_>>()?;
    for (&(p, q), m) in &first_maps {
        if p + q < 2 {
            continue;
        }
        let prev = match filt {
            Filtration::Columns if p >= 2 => Some(&first_maps[&(p - 1, q)]),
            Filtration::Rows if q >= 2 => Some(&first_maps[&(p, q - 1)]),
            _ => None,
        };
        if let Some(prev) = prev {
            if m.rows() > 0 && prev.rows() > 0 && !prev.mul(m)?.is_zero() {
                return Err(Error::NotAComplex(format!("squared differential nonzero at ({p},{q}) in degree {d}")));
            }
        }
    }
    // E¹ at (p,q): ker(first(p,q)) / im(first(next))
    let sub: BTreeMap<(usize, usize), SubquotientBasis> = positions
        .par_iter()
        .map(|&(p, q)| {
            let x = &blocks[&(p, q)];
            let incoming = match filt {
                Filtration::Columns => first_maps.get(&(p + 1, q)),
                Filtration::Rows => first_maps.get(&(p, q + 1)),
            };
            let zero = SparseMatrix::zero(x.dim(), 0);
            let s = SubquotientBasis::from_maps(incoming.unwrap_or(&zero), &first_maps[&(p, q)])?;
            Ok(((p, q), s))
        })
        .collect::<Result<_>>()?;
    let mut e1 = SpectralPage { r: 1, ..Default::default() };
    let mut ranks: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (&(p, q), s) in &sub {
        e1.entries.insert((p, q, d.clone()), s.dim());
        let tgt = match filt {
            Filtration::Columns => (q > 0).then(|| (p, q - 1)),
            Filtration::Rows => (p > 0).then(|| (p - 1, q)),
        };
        if let Some(t) = tgt {
            let f = second(p, q)?;
            let d1 = induced_homology_map(s, &sub[&t], &f)?;
            ranks.insert((p, q), rank(&d1));
            e1.d1_maps.insert((p, q, d.clone()), d1);
        }
    }
    let mut e2 = SpectralPage { r: 2, ..Default::default() };
    for (&(p, q), s) in &sub {
        if p + q > n_max + 1 {
            continue;
        }
        let incoming = match filt {
            Filtration::Columns => ranks.get(&(p, q + 1)),
            Filtration::Rows => ranks.get(&(p + 1, q)),
        };
        let dim = s.dim() - ranks.get(&(p, q)).copied().unwrap_or(0) - incoming.copied().unwrap_or(0);
        e2.entries.insert((p, q, d.clone()), dim);
    }
    e1.entries.retain(|(p, q, _), _| p + q <= n_max + 1);
    Ok((e1, e2))
}

/// E¹ and E² for every degree of the window.
pub fn pages(bc: &Bicomplex, window: &Window, n_max: usize, filtration: Filtration) -> Result<Pages> {
    let spec = ChainComplexSpec::hochschild(&bc.case.smash, bc.coeff);
    let degrees = window.degrees(&spec, n_max + 3)?;
    let per: Vec<(SpectralPage, SpectralPage)> =
        degrees.par_iter().map(|d| degree_pages(bc, d, n_max, filtration)).collect::<Result<_>>()?;
    let mut e1 = SpectralPage { r: 1, ..Default::default() };
    let mut e2 = SpectralPage { r: 2, ..Default::default() };
    for (a, b) in per {
        e1.entries.extend(a.entries);
        e1.d1_maps.extend(a.d1_maps);
        e2.entries.extend(b.entries);
    }
    Ok(Pages { filtration, n_max, e1, e2 })
}

/// Homology of the total complex `⊕_{p+q=n} X_{p,q}` with `D = ∂^h + (−1)^p ∂^v`.
pub fn total_homology(bc: &Bicomplex, d: &Multidegree, n_max: usize) -> Result<Vec<usize>> {
    let top = n_max + 1;
    let mut blocks: BTreeMap<(usize, usize), BisimplicialBlock> = BTreeMap::new();
    for p in 0..=top {
        for q in 0..=top - p {
            blocks.insert((p, q), bc.block(p, q, d)?);
        }
    }
    let offsets = |n: usize| -> (Vec<usize>, usize) {
        let mut off = Vec::new();
        let mut acc = 0;
        for p in 0..=n {
            off.push(acc);
            acc += blocks[&(p, n - p)].dim();
        }
        (off, acc)
    };
    let mut dims = Vec::new();
    let mut ranks = vec![0usize; top + 2];
    for n in 0..=top {
        let (off_src, dim_src) = offsets(n);
        dims.push(dim_src);
        if n == 0 {
            continue;
        }
        let (off_dst, dim_dst) = offsets(n - 1);
        let mut trip = Vec::new();
        for p in 0..=n {
            let q = n - p;
            let x = &blocks[&(p, q)];
            if p > 0 {
                let m = bc.dh(x, &blocks[&(p - 1, q)])?;
                trip.extend(m.entries().map(|(r, c, v)| (off_dst[p - 1] + r, off_src[p] + c, v.clone())));
            }
            if q > 0 {
                let m = bc.dv(x, &blocks[&(p, q - 1)])?;
                let s = sign(p);
                trip.extend(m.entries().map(|(r, c, v)| (off_dst[p] + r, off_src[p] + c, v * &s)));
            }
        }
        ranks[n] = rank(&SparseMatrix::from_triplets(dim_dst, dim_src, trip));
    }
    Ok((0..=n_max).map(|n| dims[n] - ranks[n] - ranks[n + 1]).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ConvergenceStatus {
    Pass,
    Fail,
    Inconclusive,
}

/// Comparison of `Σ_{p+q=n} E²` with Hochschild homology.
#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceReport {
    pub filtration: Filtration,
    pub status: ConvergenceStatus,
    /// `support` when no higher differential can be nonzero, `dimension count`
    /// when equality of the sums forces the higher differentials to vanish.
    pub method: String,
    /// `(n, degree, Σ E², HH)` for every mismatching row.
    pub mismatches: Vec<(usize, Multidegree, usize, usize)>,
    pub e2_totals: Vec<usize>,
    pub hh_totals: Vec<usize>,
    pub orientation: String,
}

/// True if no `d^r`, `r ≥ 2`, joins two nonzero E² positions in any degree.
pub fn degenerate_by_support(pages: &Pages) -> bool {
    let mut support: BTreeMap<Multidegree, BTreeSet<(usize, usize)>> = BTreeMap::new();
    for ((p, q, d), v) in &pages.e2.entries {
        if *v > 0 {
            support.entry(d.clone()).or_default().insert((*p, *q));
        }
    }
    support.values().all(|s| {
        s.iter().all(|&(p, q)| {
            (2..=p + q + 1).all(|r| pages.filtration.target(p, q, r).is_none_or(|t| !s.contains(&t)))
        })
    })
}

/// Compares E² with `hh` (entries `(n, degree) → dim`), for `n ≤ pages.n_max`.
pub fn convergence_check(pages: &Pages, hh: &crate::hochschild::HomologyTable) -> ConvergenceReport {
    let n_max = pages.n_max.min(hh.n_max);
    let sums = pages.e2.diagonal_sums(n_max);
    let mut keys: BTreeSet<(usize, Multidegree)> = sums.keys().cloned().collect();
    keys.extend(hh.entries.keys().filter(|(n, _)| *n <= n_max).cloned());
    let mut mismatches = Vec::new();
    let mut e2_totals = vec![0; n_max + 1];
    let mut hh_totals = vec![0; n_max + 1];
    for (n, d) in keys {
        let e = sums.get(&(n, d.clone())).copied().unwrap_or(0);
        let h = hh.get(n, &d);
        e2_totals[n] += e;
        hh_totals[n] += h;
        if e != h {
            mismatches.push((n, d, e, h));
        }
    }
    let support = degenerate_by_support(pages);
    let (status, method) = match (mismatches.is_empty(), support) {
        (true, true) => (ConvergenceStatus::Pass, "support"),
        (true, false) => (ConvergenceStatus::Pass, "dimension count"),
        (false, true) => (ConvergenceStatus::Fail, "support"),
        (false, false) => (ConvergenceStatus::Inconclusive, "inconclusive at E²"),
    };
    ConvergenceReport {
        filtration: pages.filtration,
        status,
        method: method.into(),
        mismatches,
        e2_totals,
        hh_totals,
        orientation: "p counts B-factors (horizontal), q counts A-factors (vertical)".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebras::{cqi, qplane};
    use crate::hochschild::homology_dims;
    use crate::linalg::{int, ratio};

    #[test]
    fn face_examples() {
        let case = qplane(&int(2)).unwrap();
        let v = Bimodule::regular(&case.smash);
        let bc = Bicomplex::regular(&case, &v);
        let x = case.a.gen(0);
        let y = case.b.gen(0);
        let one = CoeffBasis::Mono(case.smash.one());
        let t = BiTuple { a: vec![x.clone()], v: one, b: vec![y.clone()] };
        let ym = CoeffBasis::Mono(case.smash.monomial(&[("y", 1)]).unwrap());
        let xm = CoeffBasis::Mono(case.smash.monomial(&[("x", 1)]).unwrap());
        assert_eq!(bc.h_face(1, &t).unwrap(), vec![(BiTuple { a: vec![x.clone()], v: ym.clone(), b: vec![] }, int(2))]);
        assert_eq!(bc.h_face(0, &t).unwrap(), vec![(BiTuple { a: vec![x.clone()], v: ym, b: vec![] }, int(1))]);
        assert_eq!(bc.v_face(1, &t).unwrap(), vec![(BiTuple { a: vec![], v: xm, b: vec![y.clone()] }, int(1))]);
    }

    #[test]
    fn diagonal_examples() {
        let case = qplane(&int(2)).unwrap();
        let v = Bimodule::regular(&case.smash);
        let bc = Bicomplex::regular(&case, &v);
        let one = CoeffBasis::Mono(case.smash.one());
        let xy = case.smash.monomial(&[("x", 1), ("y", 1)]).unwrap();
        let chain = ChainTuple { v: one.clone(), factors: vec![xy], w: None };
        let img = bc.diagonal_map(&chain).unwrap();
        let expect = BiTuple { a: vec![case.a.gen(0)], v: one.clone(), b: vec![case.b.gen(0)] };
        assert_eq!(img, vec![(expect, ratio(1, 2))]);
        let x1 = case.smash.monomial(&[("x", 1)]).unwrap();
        let chain = ChainTuple { v: one.clone(), factors: vec![x1], w: None };
        let expect = BiTuple { a: vec![case.a.gen(0)], v: one, b: vec![case.b.one()] };
        assert_eq!(bc.diagonal_map(&chain).unwrap(), vec![(expect, int(1))]);
    }

    #[test]
    fn identities_and_diagonal_on_small_blocks() {
        for case in [qplane(&int(2)).unwrap(), cqi(2, 2, &int(3)).unwrap()] {
            let v = Bimodule::regular(&case.smash);
            let bc = Bicomplex::regular(&case, &v);
            for d in [vec![1, 1], vec![2, 1], vec![1, 2]] {
                let d = Multidegree(d);
                assert!(bc.check_identities(&d, 4).unwrap() > 0);
                assert!(bc.check_diagonal(&d, 3).unwrap() > 0);
            }
        }
    }

    #[test]
    fn cqi_pages_and_totals() {
        let case = cqi(2, 2, &int(2)).unwrap();
        let v = Bimodule::regular(&case.smash);
        let bc = Bicomplex::regular(&case, &v);
        let pg = pages(&bc, &Window::All, 3, Filtration::Columns).unwrap();
        let tot = pg.e2.totals();
        assert_eq!(tot.get(&(0, 0)), Some(&3));
        assert_eq!(tot.get(&(1, 0)), Some(&1));
        assert_eq!(tot.get(&(0, 1)), Some(&1));
        let spec = ChainComplexSpec::hochschild(&case.smash, &v);
        let hh = homology_dims(&spec, 3, &Window::All).unwrap();
        let rep = convergence_check(&pg, &hh);
        assert_eq!(rep.status, ConvergenceStatus::Pass, "{rep:?}");
        assert_eq!(rep.hh_totals, vec![3, 2, 2, 2]);
        let d = Multidegree(vec![1, 1]);
        assert_eq!(total_homology(&bc, &d, 3).unwrap(), (0..=3).map(|n| hh.get(n, &d)).collect::<Vec<_>>());
    }
}
