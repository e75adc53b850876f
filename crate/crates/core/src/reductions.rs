//! Reductions by B-actions: invariants and coinvariants of chain blocks,
//! the amenable and smooth strategies, weight lines for Laurent factors and
//! the e-component of group algebras.
//!
//! `[B, V]` is spanned by generator commutators because
//! `[bb′, v] = b[b′, v] + [b, v]b′`; for Laurent generators the inverse
//! letter is included as a generator.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::algebras::SmashCase;
use crate::error::{Error, Result};
use crate::hochschild::{ChainBlock, ChainComplexSpec, ChainTuple, CoeffBasis, HomologyTable};
use crate::linalg::{is_unit_modulus, kernel, pow, rank, Scalar, SparseMatrix, SparseVec};
use crate::pbw::{Monomial, Multidegree};
use crate::twist::join_smash;

/// Invariants and coinvariants of one block.
#[derive(Clone, Debug)]
pub struct InvariantsCoinvariants {
    pub dim: usize,
    /// Basis of the common kernel of the outgoing commutators.
    pub invariants: Vec<SparseVec>,
    /// Dimension of the span of the incoming commutator images.
    pub image_rank: usize,
}

impl InvariantsCoinvariants {
    pub fn coinvariant_dim(&self) -> usize {
        self.dim - self.image_rank
    }
}

/// Invariants: `⋂ ker(outgoing)`. Coinvariants: the block modulo `Σ im(incoming)`.
pub fn invariants_coinvariants(
    dim: usize,
    outgoing: &[SparseMatrix],
    incoming: &[SparseMatrix],
) -> Result<InvariantsCoinvariants> {
    let mut stacked = SparseMatrix::zero(0, dim).transpose();
    for m in outgoing {
        if m.cols() != dim {
            return Err(Error::DimensionMismatch("outgoing action does not start at the block".into()));
        }
        stacked = stacked.hstack(&m.transpose())?;
    }
    let invariants = kernel(&stacked.transpose());
    let mut images = SparseMatrix::zero(dim, 0);
    for m in incoming {
        if m.rows() != dim {
            return Err(Error::DimensionMismatch("incoming action does not end at the block".into()));
        }
        images = images.hstack(m)?;
    }
    Ok(InvariantsCoinvariants { dim, invariants, image_rank: rank(&images) })
}

/// The B-bimodule structure on `CH_n(A, V)` with `V = A #_R B` regular:
/// `b ▷ (v; a_1, …, a_n)` moves b through `a_1, …, a_n` via R and then
/// multiplies v on the left; `(v; a) ◁ b = (vb; a)`.
pub struct CommutatorAction<'a> {
    pub case: &'a SmashCase,
}

impl<'a> CommutatorAction<'a> {
    fn left(&self, b: &Monomial, t: &ChainTuple) -> Result<Vec<(ChainTuple, Scalar)>> {
        let case = self.case;
        let mut states: Vec<((Vec<Monomial>, Monomial), Scalar)> = vec![((Vec::new(), b.clone()), Scalar::one())];
        for ak in &t.factors {
            let mut next = Vec::new();
            for ((done, bcur), c) in states {
                for ((a2, b2), c2) in case.law.apply_r(&bcur, ak)?.iter() {
                    let mut d2 = done.clone();
                    d2.push(a2.clone());
                    next.push(((d2, b2.clone()), &c * c2));
                }
            }
            states = next;
        }
        let CoeffBasis::Mono(v) = &t.v else {
            return Err(Error::Unsupported("commutators need regular coefficients".into()));
        };
        let mut out = Vec::new();
        for ((a2, bfin), c) in states {
            let lifted = join_smash(&case.a.one(), &bfin);
            for (m, c2) in case.smash.mul_mono(&lifted, v).iter() {
                out.push((ChainTuple { v: CoeffBasis::Mono(m.clone()), factors: a2.clone(), w: None }, &c * c2));
            }
        }
        Ok(out)
    }

    fn right(&self, b: &Monomial, t: &ChainTuple) -> Result<Vec<(ChainTuple, Scalar)>> {
        let CoeffBasis::Mono(v) = &t.v else {
            return Err(Error::Unsupported("commutators need regular coefficients".into()));
        };
        let lifted = join_smash(&self.case.a.one(), b);
        Ok(self
            .case
            .smash
            .mul_mono(v, &lifted)
            .iter()
            .map(|(m, c)| (ChainTuple { v: CoeffBasis::Mono(m.clone()), factors: t.factors.clone(), w: None }, c.clone()))
            .collect())
    }

    /// `[b, t] = b ▷ t − t ◁ b`.
    pub fn commutator(&self, b: &Monomial, t: &ChainTuple) -> Result<Vec<(ChainTuple, Scalar)>> {
        let mut out = self.left(b, t)?;
        out.extend(self.right(b, t)?.into_iter().map(|(u, c)| (u, -c)));
        let mut acc: BTreeMap<ChainTuple, Scalar> = BTreeMap::new();
        for (u, c) in out {
            *acc.entry(u).or_insert_with(Scalar::zero) += c;
        }
        Ok(acc.into_iter().filter(|(_, c)| !c.is_zero()).collect())
    }

    /// Matrix of `[b, ·]` from `src` to `dst`.
    pub fn matrix(&self, b: &Monomial, src: &ChainBlock, dst: &ChainBlock) -> Result<SparseMatrix> {
        let cols: Vec<Vec<(usize, Scalar)>> = src
            .basis
            .par_iter()
            .map(|t| {
                self.commutator(b, t)?
                    .into_iter()
                    .map(|(u, c)| {
                        dst.index_of(&u)
                            .map(|i| (i, c))
                            .ok_or_else(|| Error::Inhomogeneous("commutator leaves its block".into()))
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        Ok(SparseMatrix::from_columns(dst.dim(), cols))
    }

    /// The generating letters of B: each generator, and its inverse when Laurent.
    pub fn letters(&self) -> Vec<Monomial> {
        let b = &self.case.b;
        let n = b.num_generators();
        let mut out = Vec::new();
        for k in 0..n {
            out.push(Monomial::generator(n, k, 1));
            if b.generators()[k].laurent {
                out.push(Monomial::generator(n, k, -1));
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Strategy {
    Amenable,
    Smooth,
}

/// Homology of the coinvariant quotient and invariant subcomplexes, and
/// the assembled Hochschild homology.
#[derive(Clone, Debug, Serialize)]
pub struct ReductionResult {
    pub strategy: Strategy,
    pub coinvariant_dims: BTreeMap<(usize, Multidegree), usize>,
    pub invariant_dims: BTreeMap<(usize, Multidegree), usize>,
    #[serde(skip)]
    pub hh: HomologyTable,
}

/// Per-degree data for the reductions.
struct Reduced {
    coinv: Vec<usize>,
    inv: Vec<usize>,
}

/// Boundary of the class `t ⊗ y` in `HH_1(B, CH(A,V))`: face 0 lets `a_1`
/// pass `y` through R first. Terms where `y` becomes a scalar are horizontal
/// boundaries and drop out.
fn twisted_boundary_of(spec: &ChainComplexSpec, case: &SmashCase, y: &Monomial, t: &ChainTuple) -> Result<Vec<(ChainTuple, Scalar)>> {
    let mut out = spec.boundary_of(t);
    if t.factors.is_empty() {
        return Ok(out);
    }
    let plain = spec.coeff.act_right(&t.v, &t.factors[0]);
    let rest = t.factors[1..].to_vec();
    for (v2, c) in plain {
        out.push((ChainTuple { v: v2, factors: rest.clone(), w: None }, -c));
    }
    for ((a2, b2), c) in case.law.apply_r(y, &t.factors[0])?.iter() {
        if b2 == y {
            for (v2, c2) in spec.coeff.act_right(&t.v, a2) {
                out.push((ChainTuple { v: v2, factors: rest.clone(), w: None }, c * &c2));
            }
        } else if case.b.degree_of(b2) != Multidegree::zero(case.b.axes()) {
            return Err(Error::Unsupported(format!("R moves {} to {}", case.b.format_monomial(y), case.b.format_monomial(b2))));
        }
    }
    Ok(out)
}

fn twisted_boundary_matrix(
    spec: &ChainComplexSpec,
    case: &SmashCase,
    y: &Monomial,
    src: &ChainBlock,
    dst: &ChainBlock,
) -> Result<SparseMatrix> {
    if src.n == 0 {
        return Ok(SparseMatrix::zero(0, src.dim()));
    }
    let cols: Vec<Vec<(usize, Scalar)>> = src
        .basis
        .par_iter()
        .map(|t| {
            twisted_boundary_of(spec, case, y, t)?
                .into_iter()
                .map(|(u, c)| {
                    dst.index_of(&u).map(|i| (i, c)).ok_or_else(|| Error::Inhomogeneous("boundary leaves its block".into()))
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok(SparseMatrix::from_columns(dst.dim(), cols))
}

/// Homology of `CH(A,V)_B` and `CH(A,V)^B` at degree `d`, for `n ≤ n_max`.
/// With `twist = Some(y)` the invariant complex carries the boundary of the
/// classes `t ⊗ y`, as needed for `B = k[y]`.
fn reduce_degree(case: &SmashCase, d: &Multidegree, n_max: usize, need_inv: bool, twist: Option<&Monomial>) -> Result<Reduced> {
    let v = case.regular_over_a();
    let spec = ChainComplexSpec::hochschild(&case.a, &v);
    let act = CommutatorAction { case };
    let top = n_max + 1;
    let letters: Vec<(Monomial, Multidegree)> =
        act.letters().into_iter().map(|m| { let e = case.b.degree_of(&m); (m, e) }).collect();
    let blocks: Vec<ChainBlock> = (0..=top).map(|n| spec.chain_block(n, d)).collect::<Result<_>>()?;
    let bnd: Vec<SparseMatrix> = (0..=top)
        .map(|n| if n == 0 { Ok(SparseMatrix::zero(0, blocks[0].dim())) } else { spec.boundary_matrix(&blocks[n], &blocks[n - 1]) })
        .collect::<Result<_>>()?;
    // incoming images [g, C(d − e)] and outgoing maps C(d) → C(d + e)
    let mut images: Vec<SparseMatrix> = Vec::new();
    let mut inv_bases: Vec<Vec<SparseVec>> = Vec::new();
    for n in 0..=top {
        let mut im = SparseMatrix::zero(blocks[n].dim(), 0);
        let mut out = Vec::new();
        for (g, e) in &letters {
            let src = spec.chain_block(n, &(d - e))?;
            im = im.hstack(&act.matrix(g, &src, &blocks[n])?)?;
            if need_inv {
                let dst = spec.chain_block(n, &(d + e))?;
                out.push(act.matrix(g, &blocks[n], &dst)?);
            }
        }
        images.push(im);
        if need_inv {
            inv_bases.push(invariants_coinvariants(blocks[n].dim(), &out, &[])?.invariants);
        }
    }
    // coinvariants: rank of b̄_n = rank[b_n | I_{n−1}] − rank I_{n−1}
    let img_rank: Vec<usize> = images.iter().map(rank).collect();
    let mut rbar = vec![0usize; top + 2];
    for n in 1..=top {
        let image_of_i = bnd[n].mul(&images[n])?;
        let stacked_i = images[n - 1].hstack(&image_of_i)?;
        if rank(&stacked_i) != img_rank[n - 1] {
            return Err(Error::NotAChainMap(format!("the boundary does not preserve [B, CH] at n = {n}, degree {d}")));
        }
        rbar[n] = rank(&images[n - 1].hstack(&bnd[n])?) - img_rank[n - 1];
    }
    let coinv = (0..=n_max).map(|n| blocks[n].dim() - img_rank[n] - rbar[n] - rbar[n + 1]).collect();
    let mut inv = Vec::new();
    if need_inv {
        let restricted: Vec<usize> = (0..=top)
            .map(|n| {
                if n == 0 {
                    return Ok(0);
                }
                match twist {
                    Some(y) => Ok(crate::linalg::rank_on(&twisted_boundary_matrix(&spec, case, y, &blocks[n], &blocks[n - 1])?, &inv_bases[n])),
                    None => Ok(crate::linalg::rank_on(&bnd[n], &inv_bases[n])),
                }
            })
            .collect::<Result<_>>()?;
        inv = (0..=n_max)
            .map(|n| inv_bases[n].len() - restricted[n] - restricted.get(n + 1).copied().unwrap_or(0))
            .collect();
    }
    Ok(Reduced { coinv, inv })
}

fn check_a(case: &SmashCase) -> Result<()> {
    if case.a.is_laurent() {
        return Err(Error::InfiniteBasis(
            "A has Laurent generators; use the weight-line reduction instead".into(),
        ));
    }
    Ok(())
}

/// `HH_n(A # B) = H_n(CH(A, V)_B)` for B the group algebra of a finite group
/// (generators with power rules `g^m = 1` in degree 0).
pub fn amenable_strategy(case: &SmashCase, n_max: usize, degrees: &[Multidegree]) -> Result<ReductionResult> {
    check_a(case)?;
    for g in case.b.generators() {
        let finite = g.power.as_ref().is_some_and(|p| p.value.is_one()) && g.degree.0.iter().all(|&x| x == 0);
        if !finite {
            return Err(Error::Unsupported(format!("{} is not a finite group generator", g.name)));
        }
    }
    let per: Vec<(Multidegree, Reduced)> = degrees
        .par_iter()
        .map(|d| Ok((d.clone(), reduce_degree(case, d, n_max, true, None)?)))
        .collect::<Result<_>>()?;
    let mut res = ReductionResult {
        strategy: Strategy::Amenable,
        coinvariant_dims: BTreeMap::new(),
        invariant_dims: BTreeMap::new(),
        hh: HomologyTable { n_max, ..Default::default() },
    };
    for (d, r) in per {
        for n in 0..=n_max {
            res.coinvariant_dims.insert((n, d.clone()), r.coinv[n]);
            res.invariant_dims.insert((n, d.clone()), r.inv[n]);
            res.hh.entries.insert((n, d.clone()), r.coinv[n]);
        }
    }
    Ok(res)
}

/// `HH_n(A # B)(d) = H_n(CH(A,V)_B)(d) ⊕ H_{n−1}(CH(A,V)^B)(d − deg y)` for
/// `B = k[y]` or `k[y, y⁻¹]`.
pub fn smooth_strategy(case: &SmashCase, n_max: usize, degrees: &[Multidegree]) -> Result<ReductionResult> {
    check_a(case)?;
    let b = &case.b;
    if b.num_generators() != 1 || b.generators()[0].power.is_some() {
        return Err(Error::NotSmooth(format!("{} is not k[y] or k[y, y^-1]", b.name)));
    }
    let e = b.generators()[0].degree.clone();
    let y = b.gen(0);
    let mut needed: Vec<Multidegree> = Vec::new();
    for d in degrees {
        needed.push(d.clone());
        needed.push(d - &e);
    }
    needed.sort();
    needed.dedup();
    let per: BTreeMap<Multidegree, Reduced> = needed
        .par_iter()
        .map(|d| Ok((d.clone(), reduce_degree(case, d, n_max, true, Some(&y))?)))
        .collect::<Result<_>>()?;
    let mut res = ReductionResult {
        strategy: Strategy::Smooth,
        coinvariant_dims: BTreeMap::new(),
        invariant_dims: BTreeMap::new(),
        hh: HomologyTable { n_max, ..Default::default() },
    };
    for (d, r) in &per {
        for n in 0..=n_max {
            res.coinvariant_dims.insert((n, d.clone()), r.coinv[n]);
            res.invariant_dims.insert((n, d.clone()), r.inv[n]);
        }
    }
    for d in degrees {
        let shifted = &per[&(d - &e)];
        for n in 0..=n_max {
            let inv = if n == 0 { 0 } else { shifted.inv[n - 1] };
            res.hh.entries.insert((n, d.clone()), per[d].coinv[n] + inv);
        }
    }
    Ok(res)
}

/// A ℤ-orbit of chains on which the B-generator commutator acts as `(λ − 1)·shift`.
#[derive(Clone, Debug, Serialize)]
pub struct WeightLine {
    #[serde(serialize_with = "crate::linalg::serialize_scalar")]
    pub lambda: Scalar,
    pub line_basis: String,
}

/// Group homology of ℤ with the generator acting by λ: `(dim H₀, dim H₁)`.
pub fn weight_line_homology(lambda: &Scalar) -> (usize, usize) {
    let m = SparseMatrix::from_triplets(1, 1, [(0, 0, lambda - Scalar::one())]);
    let r = rank(&m);
    (1 - r, 1 - r)
}

/// The same dimensions read off the centre of a finite window of the line
/// `e_{−w}, …, e_w` with `e_k ↦ (λ−1) e_{k+1}`.
pub fn weight_line_window(lambda: &Scalar, w: usize) -> Result<(usize, usize)> {
    let size = 2 * w + 1;
    let c = lambda - Scalar::one();
    let shift = SparseMatrix::from_triplets(size, size, (0..size - 1).map(|k| (k + 1, k, c.clone())));
    // restrict to the centre position
    let centre = w;
    let pick = |rows: &[usize], cols: &[usize]| {
        let trip = shift.entries().filter_map(|(r, cc, v)| {
            let r2 = rows.iter().position(|&x| x == r)?;
            let c2 = cols.iter().position(|&x| x == cc)?;
            Some((r2, c2, v.clone()))
        });
        SparseMatrix::from_triplets(rows.len(), cols.len(), trip.collect::<Vec<_>>())
    };
    let out = pick(&[centre + 1], &[centre]);
    let inc = pick(&[centre], &[centre - 1]);
    let ic = invariants_coinvariants(1, &[out], &[inc])?;
    Ok((ic.coinvariant_dim(), ic.invariants.len()))
}

/// Result of the quantum torus reduction.
#[derive(Clone, Debug, Serialize)]
pub struct TorusReduction {
    /// `(y-degree, λ, (H₀, H₁))` for the lines examined.
    pub lines: Vec<(i64, String, (usize, usize))>,
    pub coinvariant: Vec<usize>,
    pub invariant: Vec<usize>,
    pub totals: Vec<usize>,
    /// Identities checked on sample chains.
    pub checks: usize,
}

/// The quantum torus `k[x^±] # k[y^±]` by reductions only. Steps: the outer
/// smooth reduction over `B = k[y^±]`; the commutator `[y, ·]` acts on the
/// chain `(x^i y^j; x^{i_1}, …, x^{i_m})` as `(q^s − 1)·shift` with
/// `s = i + i_1 + … + i_m`, so only `s = 0` survives in both coinvariants and
/// invariants; at y-degree j that subcomplex is the bar complex of ℤ with
/// the generator acting by `q^j`, resolved by [`weight_line_homology`].
pub fn quantum_torus_reduction(case: &SmashCase, q: &Scalar, n_max: usize, j_window: i64) -> Result<TorusReduction> {
    if is_unit_modulus(q) || q.is_zero() {
        return Err(Error::InvalidSpec("q must satisfy |q| ≠ 1".into()));
    }
    if !(case.a.is_laurent() && case.b.is_laurent()) {
        return Err(Error::InvalidSpec("the torus reduction needs Laurent factors".into()));
    }
    let v = case.regular_over_a();
    let spec = ChainComplexSpec::hochschild(&case.a, &v);
    let act = CommutatorAction { case };
    let y = case.b.gen(0);
    let xm = |e: i64| Monomial(vec![e as i32]);
    let vm = |i: i64, j: i64| CoeffBasis::Mono(Monomial(vec![i as i32, j as i32]));
    let mut checks = 0;
    // sample chains: m ≤ 2 factors with exponents in [−1, 1]
    let mut samples: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..2 {
        let more: Vec<Vec<i64>> = samples
            .iter()
            .filter(|s| s.len() == samples.iter().map(|x| x.len()).max().unwrap_or(0))
            .flat_map(|s| (-1..=1).map(move |e| { let mut t = s.clone(); t.push(e); t }))
            .collect();
        samples.extend(more);
    }
    for f in &samples {
        for i in -1..=1 {
            for j in -1..=1 {
                let t = ChainTuple { v: vm(i, j), factors: f.iter().map(|&e| xm(e)).collect(), w: None };
                let s: i64 = i + f.iter().sum::<i64>();
                let img = act.commutator(&y, &t)?;
                let expect = pow(q, s) - Scalar::one();
                let shifted = ChainTuple { v: vm(i, j + 1), factors: t.factors.clone(), w: None };
                let ok = if expect.is_zero() { img.is_empty() } else { img == vec![(shifted, expect)] };
                if !ok {
                    return Err(Error::CheckFailed(format!("[y, ·] is not (q^s − 1)·shift on {t:?}")));
                }
                checks += 1;
            }
        }
    }
    // on s = 0 chains the Hochschild boundary is the bar differential of ℤ
    // with coefficients k_λ, λ = q^j, under (x^i y^j; g_1..g_m) ↔ (g_1..g_m)
    for f in samples.iter().filter(|f| !f.is_empty()) {
        for j in -2..=2i64 {
            let lambda = pow(q, j);
            let i = -f.iter().sum::<i64>();
            let t = ChainTuple { v: vm(i, j), factors: f.iter().map(|&e| xm(e)).collect(), w: None };
            let mut got: BTreeMap<ChainTuple, Scalar> = BTreeMap::new();
            for (u, c) in spec.boundary_of(&t) {
                *got.entry(u).or_insert_with(Scalar::zero) += c;
            }
            got.retain(|_, c| !c.is_zero());
            let m = f.len();
            let mut want: BTreeMap<ChainTuple, Scalar> = BTreeMap::new();
            let mut put = |g: Vec<i64>, c: Scalar| {
                let i2 = -g.iter().sum::<i64>();
                let u = ChainTuple { v: vm(i2, j), factors: g.iter().map(|&e| xm(e)).collect(), w: None };
                *want.entry(u).or_insert_with(Scalar::zero) += c;
            };
            put(f[1..].to_vec(), pow(&lambda, f[0]));
            for k in 1..m {
                let mut g = f[..k - 1].to_vec();
                g.push(f[k - 1] + f[k]);
                g.extend_from_slice(&f[k + 1..]);
                put(g, if k % 2 == 0 { Scalar::one() } else { -Scalar::one() });
            }
            put(f[..m - 1].to_vec(), if m % 2 == 0 { Scalar::one() } else { -Scalar::one() });
            want.retain(|_, c| !c.is_zero());
            if got != want {
                return Err(Error::CheckFailed(format!("weight-0 boundary differs from the bar complex of Z on {t:?}")));
            }
            checks += 1;
        }
    }
    // only j = 0 has λ = q^j = 1 since |q| ≠ 1
    let mut lines = Vec::new();
    let mut sum = (0usize, 0usize);
    for j in -j_window..=j_window {
        let lambda = pow(q, j);
        let h = weight_line_homology(&lambda);
        if weight_line_window(&lambda, 3)? != h {
            return Err(Error::CheckFailed("weight line window is unstable".into()));
        }
        sum.0 += h.0;
        sum.1 += h.1;
        lines.push((j, crate::linalg::format_scalar(&lambda), h));
    }
    let group = |n: usize| match n {
        0 => sum.0,
        1 => sum.1,
        _ => 0,
    };
    let coinvariant: Vec<usize> = (0..=n_max).map(group).collect();
    // the classes t ⊗ y see x pass y first, which multiplies λ by the R-scalar
    let r = case.law.apply_r(&y, &xm(1))?;
    let twist = match r.iter().next() {
        Some(((a2, b2), c)) if r.iter().count() == 1 && *a2 == xm(1) && *b2 == y => c.clone(),
        _ => return Err(Error::Unsupported("the torus law must be a scaling".into())),
    };
    let mut inv_sum = (0usize, 0usize);
    for j in -j_window..=j_window {
        let h = weight_line_homology(&(pow(q, j) * &twist));
        inv_sum.0 += h.0;
        inv_sum.1 += h.1;
    }
    let invariant: Vec<usize> = (0..=n_max)
        .map(|n| match n {
            0 => inv_sum.0,
            1 => inv_sum.1,
            _ => 0,
        })
        .collect();
    let totals = (0..=n_max).map(|n| coinvariant[n] + if n == 0 { 0 } else { invariant[n - 1] }).collect();
    Ok(TorusReduction { lines, coinvariant, invariant, totals, checks })
}

/// A finite group given by its multiplication table; element 0 is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    pub name: String,
    pub table: Vec<Vec<usize>>,
}

impl FiniteGroup {
    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroup { name: format!("Z/{n}"), table }
    }

    /// Dihedral group of order 2m: elements `r^k` (k < m) then `s r^k`.
    pub fn dihedral(m: usize) -> Self {
        let enc = |flip: bool, k: usize| if flip { m + k } else { k };
        let dec = |x: usize| (x >= m, x % m);
        let mut table = vec![vec![0; 2 * m]; 2 * m];
        for (x, row) in table.iter_mut().enumerate() {
            for (y, cell) in row.iter_mut().enumerate() {
                let ((f1, k1), (f2, k2)) = (dec(x), dec(y));
                // (s^f1 r^k1)(s^f2 r^k2) = s^{f1+f2} r^{±k1 + k2}
                let k = if f2 { (m - k1 % m + k2) % m } else { (k1 + k2) % m };
                *cell = enc(f1 ^ f2, k);
            }
        }
        FiniteGroup { name: format!("D_{m}"), table }
    }

    pub fn klein() -> Self {
        let table = (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect();
        FiniteGroup { name: "Z/2×Z/2".into(), table }
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        (0..self.order()).find(|&b| self.table[a][b] == 0).expect("group table")
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.order();
        let assoc = (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c)))));
        let unit = (0..n).all(|a| self.mul(0, a) == a && self.mul(a, 0) == a);
        let inv = (0..n).all(|a| (0..n).any(|b| self.mul(a, b) == 0));
        if !(assoc && unit && inv) {
            return Err(Error::InvalidSpec(format!("{} is not a group table", self.name)));
        }
        Ok(())
    }
}

fn tuples(order: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out.into_iter().flat_map(|t| (0..order).map(move |g| { let mut t2 = t.clone(); t2.push(g); t2 })).collect();
    }
    out
}

/// Homology of the e-component `CH^{(e)}(k[G])` (chains `g_0; g_1, …, g_n`
/// with `g_1⋯g_n g_0 = e`) and of the bar complex for `H_*(G, k)`, together
/// with a check that `g_1⊗…⊗g_n ↦ (g_1⋯g_n)^{-1}; g_1, …, g_n` is a chain isomorphism.
pub fn e_component_transfer(g: &FiniteGroup, n_max: usize) -> Result<Vec<usize>> {
    g.validate()?;
    let ord = g.order();
    let prod = |t: &[usize]| t.iter().fold(0, |acc, &x| g.mul(acc, x));
    // bases: bar complex C_n = G^n; e-component indexed by the same tuples via φ
    let bases: Vec<Vec<Vec<usize>>> = (0..=n_max + 1).map(|n| tuples(ord, n)).collect();
    let index: Vec<HashMap<Vec<usize>, usize>> =
        bases.iter().map(|b| b.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect()).collect();
    let sgn = |k: usize| if k % 2 == 0 { Scalar::one() } else { -Scalar::one() };
    let bar = |n: usize| -> SparseMatrix {
        let cols = bases[n]
            .iter()
            .map(|t| {
                let mut col: Vec<(usize, Scalar)> = vec![(index[n - 1][&t[1..].to_vec()], Scalar::one())];
                for k in 1..n {
                    let mut u = t[..k - 1].to_vec();
                    u.push(g.mul(t[k - 1], t[k]));
                    u.extend_from_slice(&t[k + 1..]);
                    col.push((index[n - 1][&u], sgn(k)));
                }
                col.push((index[n - 1][&t[..n - 1].to_vec()], sgn(n)));
                col
            })
            .collect();
        SparseMatrix::from_columns(bases[n - 1].len(), cols)
    };
    // Hochschild boundary on (g_0; g_1..g_n), expressed in φ-coordinates
    let hoch = |n: usize| -> Result<SparseMatrix> {
        let cols = bases[n]
            .iter()
            .map(|t| {
                let g0 = g.inv(prod(t));
                let mut terms: Vec<(usize, Vec<usize>, Scalar)> = vec![(g.mul(g0, t[0]), t[1..].to_vec(), Scalar::one())];
                for k in 1..n {
                    let mut u = t[..k - 1].to_vec();
                    u.push(g.mul(t[k - 1], t[k]));
                    u.extend_from_slice(&t[k + 1..]);
                    terms.push((g0, u, sgn(k)));
                }
                terms.push((g.mul(t[n - 1], g0), t[..n - 1].to_vec(), sgn(n)));
                terms
                    .into_iter()
                    .map(|(h0, u, c)| {
                        if g.mul(prod(&u), h0) != 0 {
                            return Err(Error::CheckFailed("the e-component is not a subcomplex".into()));
                        }
                        Ok((index[n - 1][&u], c))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        Ok(SparseMatrix::from_columns(bases[n - 1].len(), cols))
    };
    let mut bar_r = vec![0usize; n_max + 2];
    let mut hoch_r = vec![0usize; n_max + 2];
    for n in 1..=n_max + 1 {
        let (b, h) = (bar(n), hoch(n)?);
        if b != h {
            return Err(Error::NotAChainMap(format!("the transfer map is not a chain map at n = {n}")));
        }
        bar_r[n] = rank(&b);
        hoch_r[n] = rank(&h);
    }
    let dims = |r: &[usize]| (0..=n_max).map(|n| bases[n].len() - r[n] - r[n + 1]).collect::<Vec<_>>();
    let (direct, via_group) = (dims(&hoch_r), dims(&bar_r));
    if direct != via_group {
        return Err(Error::CheckFailed(format!("e-component {direct:?} differs from group homology {via_group:?}")));
    }
    Ok(direct)
}

/// The group ring case computed by the engine next to the closed form
/// `HH_n = H_{n−1}(G, k) ⊗ k[x^±]` that follows from vanishing coinvariants.
#[derive(Clone, Debug, Serialize)]
pub struct GroupRingComparison {
    /// Per x-degree ℓ: engine `HH_n` for `n ≤ n_max`.
    pub engine: BTreeMap<i64, Vec<usize>>,
    /// Per x-degree ℓ: engine coinvariant homology.
    pub coinvariants: BTreeMap<i64, Vec<usize>>,
    /// Closed form per x-degree from the e-component route.
    pub closed_form: Vec<usize>,
    /// `(ℓ, n, engine, closed form)` where they differ.
    pub discrepancies: Vec<(i64, usize, usize, usize)>,
}

pub fn group_ring_comparison(case: &SmashCase, group: &FiniteGroup, n_max: usize, ell: i64) -> Result<GroupRingComparison> {
    let degrees: Vec<Multidegree> = (-ell..=ell).map(|l| Multidegree(vec![l])).collect();
    let res = smooth_strategy(case, n_max, &degrees)?;
    let h = e_component_transfer(group, n_max)?;
    let closed_form: Vec<usize> = (0..=n_max).map(|n| if n == 0 { 0 } else { h[n - 1] }).collect();
    let mut cmp = GroupRingComparison {
        engine: BTreeMap::new(),
        coinvariants: BTreeMap::new(),
        closed_form: closed_form.clone(),
        discrepancies: Vec::new(),
    };
    for d in &degrees {
        let l = d.0[0];
        let row: Vec<usize> = (0..=n_max).map(|n| res.hh.get(n, d)).collect();
        let co: Vec<usize> = (0..=n_max).map(|n| res.coinvariant_dims[&(n, d.clone())]).collect();
        for n in 0..=n_max {
            if row[n] != closed_form[n] {
                cmp.discrepancies.push((l, n, row[n], closed_form[n]));
            }
        }
        cmp.engine.insert(l, row);
        cmp.coinvariants.insert(l, co);
    }
    Ok(cmp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebras::{galois_quadratic, group_ring_character, qcylinder, qplane, qtorus, smash_finite};
    use crate::hochschild::{homology_dims, Bimodule, Window};
    use crate::linalg::int;
    use crate::pbw::{AlgebraPresentation, Generator};
    use crate::twist::DistributiveLaw;

    #[test]
    fn weight_lines() {
        assert_eq!(weight_line_homology(&int(1)), (1, 1));
        assert_eq!(weight_line_homology(&int(2)), (0, 0));
        assert_eq!(weight_line_homology(&pow(&int(2), 3)), (0, 0));
        assert_eq!(weight_line_window(&int(1), 2).unwrap(), (1, 1));
        assert_eq!(weight_line_window(&int(5), 2).unwrap(), (0, 0));
    }

    #[test]
    fn zero_action_keeps_everything() {
        let z = SparseMatrix::zero(3, 3);
        let ic = invariants_coinvariants(3, &[z.clone()], &[z]).unwrap();
        assert_eq!((ic.invariants.len(), ic.coinvariant_dim()), (3, 3));
    }

    #[test]
    fn smooth_matches_brute_force_on_quantum_plane() {
        let case = qplane(&int(2)).unwrap();
        let degrees: Vec<Multidegree> = crate::hochschild::box_degrees(&[0, 0], &[3, 3])
            .into_iter()
            .filter(|d| d.total() <= 4)
            .collect();
        let red = smooth_strategy(&case, 3, &degrees).unwrap();
        let v = Bimodule::regular(&case.smash);
        let brute = homology_dims(&ChainComplexSpec::hochschild(&case.smash, &v), 3, &Window::Degrees(degrees.clone())).unwrap();
        for d in &degrees {
            for n in 0..=3 {
                assert_eq!(red.hh.get(n, d), brute.get(n, d), "n = {n}, d = {d}");
            }
        }
    }

    #[test]
    fn smooth_refuses_truncated() {
        let case = crate::algebras::cqi(2, 2, &int(2)).unwrap();
        assert!(matches!(smooth_strategy(&case, 2, &[Multidegree(vec![0, 0])]), Err(Error::NotSmooth(_))));
    }

    #[test]
    fn smooth_twists_the_invariant_boundary() {
        // k[Z/2] # k[y] with yg = −gy: HH_1 sits in even y-degrees
        let mut a = AlgebraPresentation::new("k[Z/2]", 1);
        a.add_generator(Generator::new("g", vec![0]).with_power(2, int(1))).unwrap();
        let mut b = AlgebraPresentation::new("k[y]", 1);
        b.add_generator(Generator::new("y", vec![1])).unwrap();
        let mut law = DistributiveLaw::new(a, b).unwrap();
        law.set_scaling("y", "g", int(-1)).unwrap();
        let case = SmashCase::new(law).unwrap();
        let degrees: Vec<Multidegree> = (0..=4).map(|l| Multidegree(vec![l])).collect();
        let red = smooth_strategy(&case, 2, &degrees).unwrap();
        let v = Bimodule::regular(&case.smash);
        let brute = homology_dims(&ChainComplexSpec::hochschild(&case.smash, &v), 2, &Window::Degrees(degrees.clone())).unwrap();
        for d in &degrees {
            for n in 0..=2 {
                assert_eq!(red.hh.get(n, d), brute.get(n, d), "n = {n}, d = {d}");
            }
        }
        assert_eq!(red.hh.get(1, &Multidegree(vec![2])), 1);
        assert_eq!(red.hh.get(1, &Multidegree(vec![3])), 0);
    }

    #[test]
    fn cylinder_lines() {
        let case = qcylinder(&int(2)).unwrap();
        let degrees: Vec<Multidegree> = (-2..=2).map(|j| Multidegree(vec![0, j])).collect();
        let red = smooth_strategy(&case, 2, &degrees).unwrap();
        for d in &degrees {
            assert_eq!((0..=2).map(|n| red.hh.get(n, d)).collect::<Vec<_>>(), vec![1, 1, 0], "{d}");
        }
    }

    #[test]
    fn torus_totals() {
        let q = int(2);
        let case = qtorus(&q).unwrap();
        let t = quantum_torus_reduction(&case, &q, 3, 4).unwrap();
        assert_eq!(t.totals, vec![1, 2, 1, 0]);
    }

    #[test]
    fn amenable_cases() {
        let g = galois_quadratic(&int(2)).unwrap();
        let r = amenable_strategy(&g, 2, &[Multidegree(vec![0])]).unwrap();
        assert_eq!(r.hh.totals(), vec![1, 0, 0]);
        let s = smash_finite(2, 2).unwrap();
        let degrees: Vec<Multidegree> = (0..=4).map(|k| Multidegree(vec![k])).collect();
        let r = amenable_strategy(&s, 2, &degrees).unwrap();
        let v = Bimodule::regular(&s.smash);
        let brute = homology_dims(&ChainComplexSpec::hochschild(&s.smash, &v), 2, &Window::All).unwrap();
        assert_eq!(r.hh.totals(), brute.totals());
    }

    #[test]
    fn e_component() {
        for g in [FiniteGroup::cyclic(1), FiniteGroup::cyclic(2), FiniteGroup::cyclic(3), FiniteGroup::klein(), FiniteGroup::dihedral(3)] {
            assert_eq!(e_component_transfer(&g, 2).unwrap(), vec![1, 0, 0], "{}", g.name);
        }
    }

    #[test]
    fn group_ring_runs() {
        let case = group_ring_character().unwrap();
        let cmp = group_ring_comparison(&case, &FiniteGroup::cyclic(2), 2, 1).unwrap();
        assert_eq!(cmp.closed_form, vec![0, 1, 0]);
        assert!(cmp.discrepancies.iter().any(|&(_, n, _, _)| n == 0));
    }
}
