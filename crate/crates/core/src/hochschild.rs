//! Hochschild and bar complexes over graded blocks.
//!
//! The complexes are non-normalized: tensor slots may hold the unit. Every
//! block is a single multidegree, enumerated completely, so block
//! dimensions are exact and blocks never interact.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{rank, Scalar, SparseMatrix};
use crate::pbw::{AlgebraPresentation, Monomial, Multidegree};

/// Basis label of a coefficient bimodule.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CoeffBasis {
    Mono(Monomial),
    Index(usize),
}

/// Finite bimodule given by generator action matrices acting on columns:
/// `left[k] v = g_k ▷ v`, `right[k] v = v ◁ g_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TabulatedBimodule {
    pub dim: usize,
    pub degrees: Vec<Multidegree>,
    pub left: Vec<SparseMatrix>,
    pub right: Vec<SparseMatrix>,
}

/// Coefficients of a Hochschild complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bimodule {
    /// The algebra `algebra` with the acting algebra's generator `k` sent to
    /// generator `embed[k]`; for `V = A` this is the identity embedding.
    Regular { algebra: AlgebraPresentation, embed: Vec<usize> },
    Tabulated(TabulatedBimodule),
}

impl Bimodule {
    pub fn regular(p: &AlgebraPresentation) -> Self {
        Bimodule::Regular { algebra: p.clone(), embed: (0..p.num_generators()).collect() }
    }

    /// `big` as a bimodule over a subalgebra whose generators sit at `embed`.
    pub fn restricted(big: &AlgebraPresentation, embed: Vec<usize>) -> Self {
        Bimodule::Regular { algebra: big.clone(), embed }
    }

    /// One-dimensional bimodule in degree zero where generator `k` acts by
    /// `left[k]` and `right[k]`. Zero scalars give the augmentation module.
    pub fn one_dimensional(p: &AlgebraPresentation, left: &[Scalar], right: &[Scalar]) -> Result<Self> {
        let mk = |s: &Scalar| SparseMatrix::from_triplets(1, 1, [(0, 0, s.clone())]);
        let t = TabulatedBimodule {
            dim: 1,
            degrees: vec![Multidegree::zero(p.axes())],
            left: left.iter().map(mk).collect(),
            right: right.iter().map(mk).collect(),
        };
        let b = Bimodule::Tabulated(t);
        b.validate(p)?;
        Ok(b)
    }

    /// The trivial module `k`: every generator acts by zero on both sides.
    pub fn augmentation(p: &AlgebraPresentation) -> Result<Self> {
        let z = vec![Scalar::zero(); p.num_generators()];
        Self::one_dimensional(p, &z, &z)
    }

    /// Checks that the actions are representations of `p`, commute with each
    /// other and are homogeneous.
    pub fn validate(&self, p: &AlgebraPresentation) -> Result<()> {
        match self {
            Bimodule::Regular { algebra, embed } => {
                if embed.len() != p.num_generators() || embed.iter().any(|&k| k >= algebra.num_generators()) {
                    return Err(Error::InvalidBimodule("embedding does not match the acting algebra".into()));
                }
                for (k, &e) in embed.iter().enumerate() {
                    if algebra.generators()[e].degree != p.generators()[k].degree {
                        return Err(Error::InvalidBimodule(format!(
                            "generator {} changes degree under the embedding",
                            p.generators()[k].name
                        )));
                    }
                }
                Ok(())
            }
            Bimodule::Tabulated(t) => t.validate(p),
        }
    }

    pub fn is_laurent(&self) -> bool {
        matches!(self, Bimodule::Regular { algebra, .. } if algebra.is_laurent())
    }

    pub fn degree(&self, v: &CoeffBasis) -> Multidegree {
        match (self, v) {
            (Bimodule::Regular { algebra, .. }, CoeffBasis::Mono(m)) => algebra.degree_of(m),
            (Bimodule::Tabulated(t), CoeffBasis::Index(i)) => t.degrees[*i].clone(),
            _ => panic!("coefficient label does not match bimodule kind"),
        }
    }

    /// Basis of the coefficient space in degree `d`.
    pub fn basis_of_degree(&self, d: &Multidegree) -> Result<Vec<CoeffBasis>> {
        match self {
            Bimodule::Regular { algebra, .. } => {
                Ok(algebra.basis_of_degree(d)?.into_iter().map(CoeffBasis::Mono).collect())
            }
            Bimodule::Tabulated(t) => {
                Ok((0..t.dim).filter(|&i| &t.degrees[i] == d).map(CoeffBasis::Index).collect())
            }
        }
    }

    /// Every basis label, for finite-dimensional coefficients.
    pub fn full_basis(&self) -> Result<Vec<CoeffBasis>> {
        match self {
            Bimodule::Regular { algebra, .. } => Ok(algebra.full_basis()?.into_iter().map(CoeffBasis::Mono).collect()),
            Bimodule::Tabulated(t) => Ok((0..t.dim).map(CoeffBasis::Index).collect()),
        }
    }

    /// Axes on which coefficient degrees may be negative.
    fn laurent_axes(&self) -> Vec<usize> {
        match self {
            Bimodule::Regular { algebra, .. } => (0..algebra.num_generators())
                .filter(|&k| algebra.generators()[k].laurent)
                .flat_map(|k| {
                    let g = &algebra.generators()[k];
                    (0..algebra.axes()).filter(move |&ax| g.degree.0[ax] != 0)
                })
                .collect(),
            Bimodule::Tabulated(_) => Vec::new(),
        }
    }

    fn embed_mono(&self, m: &Monomial) -> Vec<(usize, i32)> {
        match self {
            Bimodule::Regular { embed, .. } => {
                m.0.iter().enumerate().filter(|(_, &e)| e != 0).map(|(k, &e)| (embed[k], e)).collect()
            }
            Bimodule::Tabulated(_) => m.0.iter().enumerate().filter(|(_, &e)| e != 0).map(|(k, &e)| (k, e)).collect(),
        }
    }

    /// `v ◁ m`.
    pub fn act_right(&self, v: &CoeffBasis, m: &Monomial) -> Vec<(CoeffBasis, Scalar)> {
        match (self, v) {
            (Bimodule::Regular { algebra, .. }, CoeffBasis::Mono(vm)) => {
                let mut word: Vec<(usize, i32)> =
                    vm.0.iter().enumerate().filter(|(_, &e)| e != 0).map(|(k, &e)| (k, e)).collect();
                word.extend(self.embed_mono(m));
                algebra
                    .normal_form(&word)
                    .expect("valid word")
                    .into_terms()
                    .into_iter()
                    .map(|(m, c)| (CoeffBasis::Mono(m), c))
                    .collect()
            }
            (Bimodule::Tabulated(t), CoeffBasis::Index(i)) => {
                let mut cur: Vec<(usize, Scalar)> = vec![(*i, Scalar::one())];
                for (k, e) in self.embed_mono(m) {
                    for _ in 0..e {
                        cur = t.right[k].apply(&cur);
                    }
                }
                cur.into_iter().map(|(i, c)| (CoeffBasis::Index(i), c)).collect()
            }
            _ => panic!("coefficient label does not match bimodule kind"),
        }
    }

    /// `m ▷ v`.
    pub fn act_left(&self, m: &Monomial, v: &CoeffBasis) -> Vec<(CoeffBasis, Scalar)> {
        match (self, v) {
            (Bimodule::Regular { algebra, .. }, CoeffBasis::Mono(vm)) => {
                let mut word = self.embed_mono(m);
                word.extend(vm.0.iter().enumerate().filter(|(_, &e)| e != 0).map(|(k, &e)| (k, e)));
                algebra
                    .normal_form(&word)
                    .expect("valid word")
                    .into_terms()
                    .into_iter()
                    .map(|(m, c)| (CoeffBasis::Mono(m), c))
                    .collect()
            }
            (Bimodule::Tabulated(t), CoeffBasis::Index(i)) => {
                let mut cur: Vec<(usize, Scalar)> = vec![(*i, Scalar::one())];
                for (k, e) in self.embed_mono(m).into_iter().rev() {
                    for _ in 0..e {
                        cur = t.left[k].apply(&cur);
                    }
                }
                cur.into_iter().map(|(i, c)| (CoeffBasis::Index(i), c)).collect()
            }
            _ => panic!("coefficient label does not match bimodule kind"),
        }
    }

    pub fn format(&self, v: &CoeffBasis) -> String {
        match (self, v) {
            (Bimodule::Regular { algebra, .. }, CoeffBasis::Mono(m)) => algebra.format_monomial(m),
            (_, CoeffBasis::Index(i)) => format!("e{i}"),
            _ => "?".into(),
        }
    }
}

impl TabulatedBimodule {
    fn validate(&self, p: &AlgebraPresentation) -> Result<()> {
        let n = p.num_generators();
        if self.left.len() != n || self.right.len() != n || self.degrees.len() != self.dim {
            return Err(Error::InvalidBimodule("action tables do not match the algebra".into()));
        }
        if p.is_laurent() {
            return Err(Error::Unsupported("tabulated bimodules over Laurent algebras".into()));
        }
        for m in self.left.iter().chain(&self.right) {
            if m.rows() != self.dim || m.cols() != self.dim {
                return Err(Error::InvalidBimodule("action matrix has the wrong size".into()));
            }
        }
        let bad = |what: String| Err(Error::InvalidBimodule(what));
        // homogeneity
        for k in 0..n {
            let dg = &p.generators()[k].degree;
            for m in [&self.left[k], &self.right[k]] {
                for (r, c, _) in m.entries() {
                    if self.degrees[r] != &self.degrees[c] + dg {
                        return bad(format!("action of {} is not homogeneous", p.generators()[k].name));
                    }
                }
            }
        }
        let mono_left = |m: &Monomial| -> SparseMatrix {
            let mut acc = SparseMatrix::identity(self.dim);
            for (k, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    acc = acc.mul(&self.left[k]).expect("square");
                }
            }
            acc
        };
        let mono_right = |m: &Monomial| -> SparseMatrix {
            let mut acc = SparseMatrix::identity(self.dim);
            for (k, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    acc = self.right[k].mul(&acc).expect("square");
                }
            }
            acc
        };
        let elem = |e: &crate::pbw::Element, f: &dyn Fn(&Monomial) -> SparseMatrix| -> SparseMatrix {
            let mut acc = SparseMatrix::zero(self.dim, self.dim);
            for (m, c) in e.iter() {
                acc = acc.add_scaled(c, &f(m)).expect("square");
            }
            acc
        };
        for j in 0..n {
            for i in 0..n {
                if j > i {
                    let rel = p.normal_form(&[(j, 1), (i, 1)])?;
                    let lhs = self.left[j].mul(&self.left[i])?;
                    if lhs != elem(&rel, &mono_left) {
                        return bad(format!(
                            "left action violates the relation for {}·{}",
                            p.generators()[j].name,
                            p.generators()[i].name
                        ));
                    }
                    let rhs = self.right[i].mul(&self.right[j])?;
                    if rhs != elem(&rel, &mono_right) {
                        return bad(format!(
                            "right action violates the relation for {}·{}",
                            p.generators()[j].name,
                            p.generators()[i].name
                        ));
                    }
                }
                if self.left[j].mul(&self.right[i])? != self.right[i].mul(&self.left[j])? {
                    return bad("left and right actions do not commute".into());
                }
            }
            if let Some(rule) = &p.generators()[j].power {
                let mono = Monomial::generator(n, j, rule.exponent as i32);
                let target = SparseMatrix::identity(self.dim).scale(&rule.value);
                if mono_left(&mono) != target || mono_right(&mono) != target {
                    return bad(format!("actions violate the power rule of {}", p.generators()[j].name));
                }
            }
        }
        Ok(())
    }
}

/// Which complex a block belongs to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Flavor {
    /// `CH_n(A, V) = V ⊗ A^{⊗n}`.
    Hochschild,
    /// `CB_n(V, A, W) = V ⊗ A^{⊗n} ⊗ W`.
    Bar(Box<Bimodule>),
}

/// Basis element `v ⊗ a_1 ⊗ … ⊗ a_n (⊗ w)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChainTuple {
    pub v: CoeffBasis,
    pub factors: Vec<Monomial>,
    pub w: Option<CoeffBasis>,
}

/// One multidegree component of one chain group, with its basis index.
#[derive(Clone, Debug)]
pub struct ChainBlock {
    pub n: usize,
    pub degree: Multidegree,
    pub basis: Vec<ChainTuple>,
    index: HashMap<ChainTuple, usize>,
}

impl ChainBlock {
    pub fn new(n: usize, degree: Multidegree, mut basis: Vec<ChainTuple>) -> Self {
        basis.sort();
        let index = basis.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        ChainBlock { n, degree, basis, index }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, t: &ChainTuple) -> Option<usize> {
        self.index.get(t).copied()
    }
}

/// The data shared by all blocks of one complex.
#[derive(Clone, Debug)]
pub struct ChainComplexSpec<'a> {
    pub algebra: &'a AlgebraPresentation,
    pub coeff: &'a Bimodule,
    pub flavor: Flavor,
}

/// Homogeneous pieces of the factor algebra, keyed by degree, up to a cap.
fn factor_pieces(alg: &AlgebraPresentation, cap: &[i64]) -> Result<Vec<(Multidegree, Vec<Monomial>)>> {
    let mut out = Vec::new();
    let mut cur = vec![0i64; cap.len()];
    fn rec(
        ax: usize,
        cap: &[i64],
        cur: &mut Vec<i64>,
        alg: &AlgebraPresentation,
        out: &mut Vec<(Multidegree, Vec<Monomial>)>,
    ) -> Result<()> {
        if ax == cap.len() {
            let d = Multidegree(cur.clone());
            let b = alg.basis_of_degree(&d)?;
            if !b.is_empty() {
                out.push((d, b));
            }
            return Ok(());
        }
        for x in 0..=cap[ax].max(0) {
            cur[ax] = x;
            rec(ax + 1, cap, cur, alg, out)?;
        }
        cur[ax] = 0;
        Ok(())
    }
    rec(0, cap, &mut cur, alg, &mut out)?;
    Ok(out)
}

impl<'a> ChainComplexSpec<'a> {
    pub fn hochschild(algebra: &'a AlgebraPresentation, coeff: &'a Bimodule) -> Self {
        ChainComplexSpec { algebra, coeff, flavor: Flavor::Hochschild }
    }

    pub fn bar(algebra: &'a AlgebraPresentation, left: &'a Bimodule, right: Bimodule) -> Self {
        ChainComplexSpec { algebra, coeff: left, flavor: Flavor::Bar(Box::new(right)) }
    }

    fn slots(&self, n: usize) -> usize {
        n
    }

    /// Enumerates the block of chain degree `n` and multidegree `d`.
    pub fn chain_block(&self, n: usize, d: &Multidegree) -> Result<ChainBlock> {
        let alg = self.algebra;
        if alg.is_laurent() {
            return Err(Error::InfiniteBasis(format!(
                "{} has Laurent generators, so its tensor powers have infinite blocks",
                alg.name
            )));
        }
        if d.axes() != alg.axes() {
            return Err(Error::DimensionMismatch(format!("degree {d} has the wrong number of axes")));
        }
        let laurent_axes = self.coeff.laurent_axes();
        let mut cap = d.0.clone();
        for &ax in &laurent_axes {
            if alg.generators().iter().any(|g| g.degree.0[ax] != 0) {
                return Err(Error::InfiniteBasis("a Laurent coefficient axis is shared with the factors".into()));
            }
            cap[ax] = 0;
        }
        if cap.iter().enumerate().any(|(ax, &c)| c < 0 && !laurent_axes.contains(&ax)) {
            return Ok(ChainBlock::new(n, d.clone(), Vec::new()));
        }
        let pieces = factor_pieces(alg, &cap)?;
        let w_module = match &self.flavor {
            Flavor::Hochschild => None,
            Flavor::Bar(w) => Some(w.as_ref()),
        };
        let slots = self.slots(n);
        let mut basis = Vec::new();
        let mut chosen: Vec<usize> = Vec::with_capacity(slots);
        self.enumerate(d, &pieces, slots, &mut chosen, &Multidegree::zero(d.axes()), w_module, &mut basis)?;
        Ok(ChainBlock::new(n, d.clone(), basis))
    }

    #[allow(clippy::too_many_arguments)]
    fn enumerate(
        &self,
        d: &Multidegree,
        pieces: &[(Multidegree, Vec<Monomial>)],
        slots: usize,
        chosen: &mut Vec<usize>,
        used: &Multidegree,
        w_module: Option<&Bimodule>,
        out: &mut Vec<ChainTuple>,
    ) -> Result<()> {
        if chosen.len() == slots {
            let rest = d - used;
            let factor_lists: Vec<&Vec<Monomial>> = chosen.iter().map(|&i| &pieces[i].1).collect();
            let mut tuples: Vec<Vec<Monomial>> = vec![Vec::new()];
            for list in factor_lists {
                let mut next = Vec::with_capacity(tuples.len() * list.len());
                for t in &tuples {
                    for m in list {
                        let mut t2 = t.clone();
                        t2.push(m.clone());
                        next.push(t2);
                    }
                }
                tuples = next;
            }
            match w_module {
                None => {
                    let vs = self.coeff.basis_of_degree(&rest)?;
                    for v in &vs {
                        for t in &tuples {
                            out.push(ChainTuple { v: v.clone(), factors: t.clone(), w: None });
                        }
                    }
                }
                Some(wm) => {
                    let mut vdeg: BTreeSet<Multidegree> = BTreeSet::new();
                    for v in self.coeff.full_basis()? {
                        vdeg.insert(self.coeff.degree(&v));
                    }
                    for dv in vdeg {
                        let dw = &rest - &dv;
                        let vs = self.coeff.basis_of_degree(&dv)?;
                        let ws = wm.basis_of_degree(&dw)?;
                        for v in &vs {
                            for w in &ws {
                                for t in &tuples {
                                    out.push(ChainTuple { v: v.clone(), factors: t.clone(), w: Some(w.clone()) });
                                }
                            }
                        }
                    }
                }
            }
            return Ok(());
        }
        for (i, (e, _)) in pieces.iter().enumerate() {
            let next = used + e;
            if next.0.iter().zip(&d.0).enumerate().any(|(ax, (x, y))| x > y && *x > 0 && !self.coeff.laurent_axes().contains(&ax)) {
                continue;
            }
            chosen.push(i);
            self.enumerate(d, pieces, slots, chosen, &next, w_module, out)?;
            chosen.pop();
        }
        Ok(())
    }

    /// Image of one basis tuple under the boundary, as a list of terms.
    pub fn boundary_of(&self, t: &ChainTuple) -> Vec<(ChainTuple, Scalar)> {
        let n = t.factors.len();
        let mut out = Vec::new();
        if n == 0 {
            return out;
        }
        let alg = self.algebra;
        // face 0: v◁a_1
        for (v2, c) in self.coeff.act_right(&t.v, &t.factors[0]) {
            out.push((ChainTuple { v: v2, factors: t.factors[1..].to_vec(), w: t.w.clone() }, c));
        }
        // inner faces
        for j in 1..n {
            let sign = if j % 2 == 0 { Scalar::one() } else { -Scalar::one() };
            let prod = alg.mul_mono(&t.factors[j - 1], &t.factors[j]);
            for (m, c) in prod.iter() {
                let mut f = t.factors[..j - 1].to_vec();
                f.push(m.clone());
                f.extend_from_slice(&t.factors[j + 1..]);
                out.push((ChainTuple { v: t.v.clone(), factors: f, w: t.w.clone() }, c * &sign));
            }
        }
        // last face
        let sign = if n % 2 == 0 { Scalar::one() } else { -Scalar::one() };
        let last = &t.factors[n - 1];
        let front = t.factors[..n - 1].to_vec();
        match (&self.flavor, &t.w) {
            (Flavor::Hochschild, _) => {
                for (v2, c) in self.coeff.act_left(last, &t.v) {
                    out.push((ChainTuple { v: v2, factors: front.clone(), w: None }, c * &sign));
                }
            }
            (Flavor::Bar(wm), Some(w)) => {
                for (w2, c) in wm.act_left(last, w) {
                    out.push((ChainTuple { v: t.v.clone(), factors: front.clone(), w: Some(w2) }, c * &sign));
                }
            }
            (Flavor::Bar(_), None) => panic!("bar tuple without right coefficient"),
        }
        out
    }

    /// Matrix of the boundary from `src` (degree n) to `dst` (degree n-1).
    pub fn boundary_matrix(&self, src: &ChainBlock, dst: &ChainBlock) -> Result<SparseMatrix> {
        if src.n == 0 {
            return Ok(SparseMatrix::zero(0, src.dim()));
        }
        if dst.n + 1 != src.n || dst.degree != src.degree {
            return Err(Error::DimensionMismatch("boundary between non-adjacent blocks".into()));
        }
        let cols: Result<Vec<Vec<(usize, Scalar)>>> = src
            .basis
            .par_iter()
            .map(|t| {
                let mut col = Vec::new();
                for (u, c) in self.boundary_of(t) {
                    let i = dst.index_of(&u).ok_or_else(|| {
                        Error::Inhomogeneous("boundary leaves its block; is the presentation homogeneous?".into())
                    })?;
                    col.push((i, c));
                }
                Ok(col)
            })
            .collect();
        Ok(SparseMatrix::from_columns(dst.dim(), cols?))
    }
}

/// Degree window for homology tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Window {
    /// Every degree that occurs; needs finite-dimensional algebra and coefficients.
    All,
    /// `0 ≤ d ≤ hi` on every axis.
    Box(Vec<i64>),
    /// `lo ≤ d ≤ hi` on every axis.
    Range(Vec<i64>, Vec<i64>),
    /// `d ≥ 0` with `Σ d ≤ t`.
    Total(i64),
    /// An explicit list.
    Degrees(Vec<Multidegree>),
}

/// Every multidegree with `lo ≤ d ≤ hi` on each axis.
pub fn box_degrees(lo: &[i64], hi: &[i64]) -> Vec<Multidegree> {
    let mut out = vec![Vec::new()];
    for (l, h) in lo.iter().zip(hi) {
        let mut next = Vec::new();
        for v in &out {
            for x in *l..=*h {
                let mut v2: Vec<i64> = v.clone();
                v2.push(x);
                next.push(v2);
            }
        }
        out = next;
    }
    out.into_iter().map(Multidegree).collect()
}

impl Window {
    /// Parses `"all"`, `"total:T"`, or comma-separated per-axis bounds.
    pub fn parse(s: &str) -> Result<Window> {
        let s = s.trim();
        if s == "all" {
            return Ok(Window::All);
        }
        if let Some(t) = s.strip_prefix("total:") {
            return t.trim().parse().map(Window::Total).map_err(|_| Error::Parse(format!("bad window {s:?}")));
        }
        if s.contains("..") {
            let mut lo = Vec::new();
            let mut hi = Vec::new();
            for part in s.split(',') {
                let (l, h) = part.split_once("..").ok_or_else(|| Error::Parse(format!("bad window {s:?}")))?;
                lo.push(l.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad window {s:?}")))?);
                hi.push(h.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad window {s:?}")))?);
            }
            return Ok(Window::Range(lo, hi));
        }
        let v: std::result::Result<Vec<i64>, _> = s.split(',').map(|x| x.trim().parse::<i64>()).collect();
        v.map(Window::Box).map_err(|_| Error::Parse(format!("bad window {s:?}")))
    }

    /// The multidegrees covered, given the chain degrees that will be built.
    pub fn degrees(&self, spec: &ChainComplexSpec, max_slots: usize) -> Result<Vec<Multidegree>> {
        let axes = spec.algebra.axes();
        let out = match self {
            Window::Box(hi) => box_degrees(&vec![0; axes], hi),
            Window::Range(lo, hi) => box_degrees(lo, hi),
            Window::Total(t) => box_degrees(&vec![0; axes], &vec![*t; axes])
                .into_iter()
                .filter(|d| d.total() <= *t)
                .collect(),
            Window::Degrees(list) => list.clone(),
            Window::All => {
                let a_deg: BTreeSet<Multidegree> =
                    spec.algebra.full_basis()?.iter().map(|m| spec.algebra.degree_of(m)).collect();
                let mut reach: BTreeSet<Multidegree> =
                    spec.coeff.full_basis()?.iter().map(|v| spec.coeff.degree(v)).collect();
                if let Flavor::Bar(w) = &spec.flavor {
                    let wd: BTreeSet<Multidegree> = w.full_basis()?.iter().map(|x| w.degree(x)).collect();
                    reach = reach.iter().flat_map(|x| wd.iter().map(move |y| x + y)).collect();
                }
                let mut all = reach.clone();
                for _ in 0..max_slots {
                    reach = reach.iter().flat_map(|x| a_deg.iter().map(move |y| x + y)).collect();
                    all.extend(reach.iter().cloned());
                }
                all.into_iter().collect()
            }
        };
        if out.iter().any(|d| d.axes() != axes) {
            return Err(Error::DimensionMismatch("window has the wrong number of axes".into()));
        }
        Ok(out)
    }
}

/// Homology dimensions per `(n, multidegree)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HomologyTable {
    pub n_max: usize,
    pub entries: BTreeMap<(usize, Multidegree), usize>,
    /// Number of verified `∂∘∂ = 0` block pairs.
    pub complex_checks: usize,
}

impl HomologyTable {
    pub fn get(&self, n: usize, d: &Multidegree) -> usize {
        self.entries.get(&(n, d.clone())).copied().unwrap_or(0)
    }

    pub fn totals(&self) -> Vec<usize> {
        let mut t = vec![0; self.n_max + 1];
        for ((n, _), v) in &self.entries {
            if *n <= self.n_max {
                t[*n] += v;
            }
        }
        t
    }

    pub fn degrees(&self) -> BTreeSet<Multidegree> {
        self.entries.keys().map(|(_, d)| d.clone()).collect()
    }

    /// Rows with nonzero dimension, as `(n, degree, dim)`.
    pub fn nonzero(&self) -> Vec<(usize, Multidegree, usize)> {
        self.entries.iter().filter(|(_, v)| **v > 0).map(|((n, d), v)| (*n, d.clone(), *v)).collect()
    }
}

/// All blocks and boundaries of one multidegree up to chain degree `top`.
pub struct DegreeComplex {
    pub blocks: Vec<ChainBlock>,
    /// `boundaries[n]` maps block n to block n-1 (`boundaries[0]` is 0×dim).
    pub boundaries: Vec<SparseMatrix>,
}

impl DegreeComplex {
    pub fn build(spec: &ChainComplexSpec, d: &Multidegree, top: usize) -> Result<Self> {
        let blocks: Vec<ChainBlock> = (0..=top).map(|n| spec.chain_block(n, d)).collect::<Result<_>>()?;
        let mut boundaries = vec![SparseMatrix::zero(0, blocks[0].dim())];
        for n in 1..=top {
            boundaries.push(spec.boundary_matrix(&blocks[n], &blocks[n - 1])?);
        }
        for n in 2..=top {
            if blocks[n].dim() > 0 && blocks[n - 2].dim() > 0 && !boundaries[n - 1].mul(&boundaries[n])?.is_zero() {
                return Err(Error::NotAComplex(format!("∂∘∂ ≠ 0 at n = {n}, degree {d}")));
            }
        }
        Ok(DegreeComplex { blocks, boundaries })
    }

    /// Homology dimensions for `n ≤ top - 1`.
    pub fn homology(&self) -> Vec<usize> {
        let top = self.blocks.len() - 1;
        let ranks: Vec<usize> = self.boundaries.iter().map(rank).collect();
        (0..top).map(|n| self.blocks[n].dim() - ranks[n] - ranks[n + 1]).collect()
    }
}

/// Exact homology dimensions of the complex over the window, for `n ≤ n_max`.
pub fn homology_dims(spec: &ChainComplexSpec, n_max: usize, window: &Window) -> Result<HomologyTable> {
    let degrees = window.degrees(spec, n_max + 1)?;
    let per: Vec<(Multidegree, Vec<usize>)> = degrees
        .par_iter()
        .map(|d| {
            let c = DegreeComplex::build(spec, d, n_max + 1)?;
            Ok((d.clone(), c.homology()))
        })
        .collect::<Result<_>>()?;
    let mut table = HomologyTable { n_max, ..HomologyTable::default() };
    for (d, h) in per {
        for (n, v) in h.into_iter().enumerate() {
            table.entries.insert((n, d.clone()), v);
        }
        table.complex_checks += n_max;
    }
    Ok(table)
}

/// Homology of the two-periodic complex `U ← U ← U ← …` for `T_a = k[x]/(x^a)`
/// with `∂_odd(u) = xu − ux` and `∂_even(u) = Σ x^i u x^{a−1−i}`, for `n ≤ n_max`.
pub fn periodic_t_complex(t: &AlgebraPresentation, u: &Bimodule, n_max: usize) -> Result<Vec<usize>> {
    if t.num_generators() != 1 {
        return Err(Error::InvalidPresentation("expected a single truncated generator".into()));
    }
    let a = match &t.generators()[0].power {
        Some(p) if p.value.is_zero() && p.exponent >= 1 => p.exponent as i32,
        _ => return Err(Error::InvalidPresentation("generator is not truncated".into())),
    };
    u.validate(t)?;
    let basis = u.full_basis()?;
    let index: HashMap<&CoeffBasis, usize> = basis.iter().enumerate().map(|(i, b)| (b, i)).collect();
    let dim = basis.len();
    let x = |e: i32| Monomial(vec![e]);
    let matrix = |f: &dyn Fn(&CoeffBasis) -> Vec<(CoeffBasis, Scalar)>| {
        let cols = basis.iter().map(|b| f(b).into_iter().map(|(v, c)| (index[&v], c)).collect()).collect();
        SparseMatrix::from_columns(dim, cols)
    };
    let odd = matrix(&|b| {
        let mut out = u.act_left(&x(1), b);
        out.extend(u.act_right(b, &x(1)).into_iter().map(|(v, c)| (v, -c)));
        out
    });
    let even = matrix(&|b| {
        let mut out = Vec::new();
        for i in 0..a {
            for (v, c) in u.act_left(&x(i), b) {
                for (w, c2) in u.act_right(&v, &x(a - 1 - i)) {
                    out.push((w, &c * c2));
                }
            }
        }
        out
    });
    if dim > 0 && (!odd.mul(&even)?.is_zero() || !even.mul(&odd)?.is_zero()) {
        return Err(Error::NotAComplex("periodic differentials do not compose to zero".into()));
    }
    let (r_odd, r_even) = (rank(&odd), rank(&even));
    let r = |n: usize| if n == 0 { 0 } else if n % 2 == 1 { r_odd } else { r_even };
    Ok((0..=n_max).map(|n| dim - r(n) - r(n + 1)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;
    use crate::pbw::{Generator, SwapRule};

    fn truncated(a: u32) -> AlgebraPresentation {
        let mut p = AlgebraPresentation::new(&format!("T_{a}"), 1);
        p.add_generator(Generator::new("x", vec![1]).truncated(a)).unwrap();
        p
    }

    fn qplane() -> AlgebraPresentation {
        let mut p = AlgebraPresentation::new("qplane", 2);
        p.add_generator(Generator::new("x", vec![1, 0])).unwrap();
        p.add_generator(Generator::new("y", vec![0, 1])).unwrap();
        p.set_swap("y", "x", SwapRule::scaling(int(2))).unwrap();
        p
    }

    #[test]
    fn block_sizes() {
        let t3 = truncated(3);
        let v = Bimodule::regular(&t3);
        let spec = ChainComplexSpec::hochschild(&t3, &v);
        let total: usize = (0..=2).map(|d| spec.chain_block(0, &Multidegree(vec![d])).unwrap().dim()).sum();
        assert_eq!(total, 3);

        let p = qplane();
        let v = Bimodule::regular(&p);
        let spec = ChainComplexSpec::hochschild(&p, &v);
        assert_eq!(spec.chain_block(1, &Multidegree(vec![2, 1])).unwrap().dim(), 6);
    }

    #[test]
    fn quantum_plane_commutator_face() {
        let p = qplane();
        let v = Bimodule::regular(&p);
        let spec = ChainComplexSpec::hochschild(&p, &v);
        let t = ChainTuple { v: CoeffBasis::Mono(p.monomial(&[("y", 1)]).unwrap()), factors: vec![p.monomial(&[("x", 1)]).unwrap()], w: None };
        // b(y⊗x) = yx − xy = (q−1) xy
        let img = spec.boundary_of(&t);
        let mut total: BTreeMap<ChainTuple, Scalar> = BTreeMap::new();
        for (u, c) in img {
            *total.entry(u).or_insert_with(Scalar::zero) += c;
        }
        total.retain(|_, c| !c.is_zero());
        let xy = ChainTuple { v: CoeffBasis::Mono(p.monomial(&[("x", 1), ("y", 1)]).unwrap()), factors: vec![], w: None };
        assert_eq!(total.into_iter().collect::<Vec<_>>(), vec![(xy, int(1))]);
    }

    #[test]
    fn truncated_homology_matches_periodic() {
        for a in 2..=3u32 {
            let t = truncated(a);
            let v = Bimodule::regular(&t);
            let spec = ChainComplexSpec::hochschild(&t, &v);
            let table = homology_dims(&spec, 4, &Window::All).unwrap();
            let periodic = periodic_t_complex(&t, &v, 4).unwrap();
            assert_eq!(table.totals(), periodic);
            assert_eq!(periodic[0], a as usize);
            assert!(periodic[1..].iter().all(|&h| h == a as usize - 1));
        }
    }

    #[test]
    fn bar_complex_of_truncated_algebra() {
        let t = truncated(2);
        let k = Bimodule::augmentation(&t).unwrap();
        let spec = ChainComplexSpec::bar(&t, &k, k.clone());
        let table = homology_dims(&spec, 4, &Window::All).unwrap();
        assert_eq!(table.totals(), vec![1, 1, 1, 1, 1]);
    }

    #[test]
    fn bad_tabulated_module_rejected() {
        let t = truncated(2);
        // x acting by 1 violates x^2 = 0
        let one = vec![int(1)];
        assert!(Bimodule::one_dimensional(&t, &one, &one).is_err());
    }

    #[test]
    fn window_parse() {
        assert_eq!(Window::parse("all").unwrap(), Window::All);
        assert_eq!(Window::parse("3,2").unwrap(), Window::Box(vec![3, 2]));
        assert_eq!(Window::parse("total:6").unwrap(), Window::Total(6));
        assert_eq!(Window::parse("0..2,-3..3").unwrap(), Window::Range(vec![0, -3], vec![2, 3]));
        assert!(Window::parse("x").is_err());
    }
}
