//! Distributive laws `R: B⊗A → A⊗B`, their inverses, Ore data and the
//! smash biproduct presentation.
//!
//! Laws are stored on generator pairs only. On monomials they are extended
//! letter by letter, which is well defined exactly when the hexagons hold;
//! [`check_distributive_law`] tests that on every split within a bound.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{pow, rank, Scalar, SparseMatrix, Echelon, Insertion};
use crate::pbw::{AlgebraPresentation, Element, Generator, Monomial, Multidegree, SwapRule};

/// Sparse combination of pairs `(left, right)` of monomials from two
/// presentations.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PairElement {
    terms: BTreeMap<(Monomial, Monomial), Scalar>,
}

impl PairElement {
    pub fn zero() -> Self {
        PairElement { terms: BTreeMap::new() }
    }

    pub fn term(l: Monomial, r: Monomial, c: Scalar) -> Self {
        let mut e = Self::zero();
        e.add_term(l, r, c);
        e
    }

    pub fn add_term(&mut self, l: Monomial, r: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let key = (l, r);
        let v = self.terms.entry(key.clone()).or_insert_with(Scalar::zero);
        *v += c;
        if v.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add_scaled(&mut self, other: &PairElement, c: &Scalar) {
        for ((l, r), x) in &other.terms {
            self.add_term(l.clone(), r.clone(), x * c);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(Monomial, Monomial), &Scalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, l: &Monomial, r: &Monomial) -> Scalar {
        self.terms.get(&(l.clone(), r.clone())).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Scaling factor if this is `s * (l ⊗ r)` for the given pair.
    fn scaling_of(&self, l: &Monomial, r: &Monomial) -> Option<Scalar> {
        if self.terms.len() == 1 {
            self.terms.get(&(l.clone(), r.clone())).cloned()
        } else {
            None
        }
    }
}

/// Rules of a twisting map `P⊗Q → Q⊗P` on generator pairs, with its
/// letter-by-letter extension to monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Twisting {
    /// `(p generator, q generator)` ↦ combination of `(q monomial, p monomial)`.
    /// Missing pairs flip with coefficient one.
    pub rules: BTreeMap<(usize, usize), PairElement>,
}

impl Twisting {
    fn letter(&self, p: &AlgebraPresentation, q: &AlgebraPresentation, g: usize, ge: i32, h: usize, he: i32) -> Result<PairElement> {
        let gm = Monomial::generator(p.num_generators(), g, ge);
        let hm = Monomial::generator(q.num_generators(), h, he);
        let rule = self.rules.get(&(g, h));
        if ge == 1 && he == 1 {
            return Ok(match rule {
                Some(r) => r.clone(),
                None => PairElement::term(hm, gm, Scalar::one()),
            });
        }
        let s = match rule {
            None => Scalar::one(),
            Some(r) => r
                .scaling_of(&Monomial::generator(q.num_generators(), h, 1), &Monomial::generator(p.num_generators(), g, 1))
                .ok_or_else(|| {
                    Error::Unsupported(format!(
                        "inverse letters of {} or {} need a scaling rule",
                        p.generators()[g].name,
                        q.generators()[h].name
                    ))
                })?,
        };
        Ok(PairElement::term(hm, gm, pow(&s, ge as i64 * he as i64)))
    }

    /// Applies the extension to `pm ⊗ qm`, producing `Σ c (q', p')`.
    pub fn apply(&self, p: &AlgebraPresentation, q: &AlgebraPresentation, pm: &Monomial, qm: &Monomial) -> Result<PairElement> {
        if pm.is_one() || qm.is_one() {
            return Ok(PairElement::term(qm.clone(), pm.clone(), Scalar::one()));
        }
        // pm = rest · g^±1 with g the last letter
        let g = pm.highest().expect("nonunit");
        let ge = pm.0[g].signum();
        let mut rest = pm.clone();
        rest.0[g] -= ge;
        let moved = self.apply_letter(p, q, g, ge, qm)?;
        let mut out = PairElement::zero();
        for ((q1, g1), c) in moved.iter() {
            let inner = self.apply(p, q, &rest, q1)?;
            for ((q2, p2), c2) in inner.iter() {
                let prod = p.mul_mono(p2, g1);
                for (pm3, c3) in prod.iter() {
                    out.add_term(q2.clone(), pm3.clone(), c * c2 * c3);
                }
            }
        }
        Ok(out)
    }

    // g^±1 ⊗ qm, peeling qm from the left.
    fn apply_letter(&self, p: &AlgebraPresentation, q: &AlgebraPresentation, g: usize, ge: i32, qm: &Monomial) -> Result<PairElement> {
        if qm.is_one() {
            return Ok(PairElement::term(qm.clone(), Monomial::generator(p.num_generators(), g, ge), Scalar::one()));
        }
        let h = qm.lowest().expect("nonunit");
        let he = qm.0[h].signum();
        let mut rest = qm.clone();
        rest.0[h] -= he;
        let first = self.letter(p, q, g, ge, h, he)?;
        let mut out = PairElement::zero();
        for ((h1, g1), c) in first.iter() {
            let inner = self.apply(p, q, g1, &rest)?;
            for ((q2, p2), c2) in inner.iter() {
                let prod = q.mul_mono(h1, q2);
                for (qm3, c3) in prod.iter() {
                    out.add_term(qm3.clone(), p2.clone(), c * c2 * c3);
                }
            }
        }
        Ok(out)
    }

    /// Linear extension to a combination of `(p, q)` pairs.
    pub fn apply_pairs(&self, p: &AlgebraPresentation, q: &AlgebraPresentation, x: &PairElement) -> Result<PairElement> {
        let mut out = PairElement::zero();
        for ((pm, qm), c) in x.iter() {
            out.add_scaled(&self.apply(p, q, pm, qm)?, c);
        }
        Ok(out)
    }
}

/// `R: B⊗A → A⊗B` given on generator pairs, optionally with its inverse
/// `L: A⊗B → B⊗A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistributiveLaw {
    pub source_b: AlgebraPresentation,
    pub source_a: AlgebraPresentation,
    /// `(b generator, a generator)` ↦ combination of `(a monomial, b monomial)`.
    pub rules: BTreeMap<(usize, usize), PairElement>,
    /// `(a generator, b generator)` ↦ combination of `(b monomial, a monomial)`.
    pub inverse_rules: Option<BTreeMap<(usize, usize), PairElement>>,
}

impl DistributiveLaw {
    /// The flip `b⊗a ↦ a⊗b` with no rules; extra rules are added with
    /// [`DistributiveLaw::set_rule`].
    pub fn new(a: AlgebraPresentation, b: AlgebraPresentation) -> Result<Self> {
        if a.axes() != b.axes() {
            return Err(Error::InvalidLaw(format!(
                "{} has {} grading axes but {} has {}",
                a.name,
                a.axes(),
                b.name,
                b.axes()
            )));
        }
        Ok(DistributiveLaw { source_b: b, source_a: a, rules: BTreeMap::new(), inverse_rules: None })
    }

    /// Sets `R(b_gen ⊗ a_gen)`; the rule must be homogeneous.
    pub fn set_rule(&mut self, b_gen: &str, a_gen: &str, value: PairElement) -> Result<()> {
        let j = self.source_b.index_of(b_gen)?;
        let i = self.source_a.index_of(a_gen)?;
        let target = &self.source_b.generators()[j].degree + &self.source_a.generators()[i].degree;
        for ((am, bm), _) in value.iter() {
            self.source_a.check_normal(am)?;
            self.source_b.check_normal(bm)?;
            let d = &self.source_a.degree_of(am) + &self.source_b.degree_of(bm);
            if d != target {
                return Err(Error::Inhomogeneous(format!(
                    "R({b_gen}⊗{a_gen}) has a term of degree {d}, expected {target}"
                )));
            }
        }
        self.rules.insert((j, i), value);
        self.inverse_rules = None;
        Ok(())
    }

    /// `R(b_gen ⊗ a_gen) = s · a_gen ⊗ b_gen`.
    pub fn set_scaling(&mut self, b_gen: &str, a_gen: &str, s: Scalar) -> Result<()> {
        let j = self.source_b.index_of(b_gen)?;
        let i = self.source_a.index_of(a_gen)?;
        let v = PairElement::term(self.source_a.gen(i), self.source_b.gen(j), s);
        self.set_rule(b_gen, a_gen, v)
    }

    fn r_twisting(&self) -> Twisting {
        Twisting { rules: self.rules.clone() }
    }

    fn l_twisting(&self) -> Result<Twisting> {
        Ok(Twisting { rules: self.inverse_rules.clone().ok_or(Error::MissingInverse)? })
    }

    /// `R(b ⊗ a)` as a combination of `(a', b')`.
    pub fn apply_r(&self, b: &Monomial, a: &Monomial) -> Result<PairElement> {
        self.r_twisting().apply(&self.source_b, &self.source_a, b, a)
    }

    /// `L(a ⊗ b)` as a combination of `(b', a')`.
    pub fn apply_l(&self, a: &Monomial, b: &Monomial) -> Result<PairElement> {
        self.l_twisting()?.apply(&self.source_a, &self.source_b, a, b)
    }

    /// The inverse as a law with the roles of the two algebras exchanged.
    pub fn inverse_law(&self) -> Result<DistributiveLaw> {
        let inv = self.inverse_rules.clone().ok_or(Error::MissingInverse)?;
        Ok(DistributiveLaw {
            source_b: self.source_a.clone(),
            source_a: self.source_b.clone(),
            rules: inv,
            inverse_rules: Some(self.rules.clone()),
        })
    }

    /// True if every rule is a nonzero multiple of the flipped pair.
    pub fn is_scaling(&self) -> bool {
        self.rules.iter().all(|(&(j, i), v)| v.scaling_of(&self.source_a.gen(i), &self.source_b.gen(j)).is_some())
    }
}

/// Outcome of [`check_distributive_law`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LawReport {
    pub bound: usize,
    pub unit_checks: usize,
    pub hexagon_b_checks: usize,
    pub hexagon_a_checks: usize,
    pub inverse_checks: usize,
    /// Human-readable counterexamples.
    pub failures: Vec<String>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

// All normal monomials with at most `t` letters.
fn monomials_up_to(p: &AlgebraPresentation, t: usize) -> Result<Vec<Monomial>> {
    let mut out = vec![p.one()];
    for (k, g) in p.generators().iter().enumerate() {
        let mut next = Vec::new();
        for m in &out {
            let left = t as i32 - m.0.iter().map(|e| e.abs()).sum::<i32>();
            let lo = if g.laurent { -left } else { 0 };
            let hi = g.power.as_ref().map_or(left, |r| left.min(r.exponent as i32 - 1));
            for e in lo..=hi {
                let mut m2 = m.clone();
                m2.0[k] = e;
                next.push(m2);
            }
        }
        out = next;
    }
    Ok(out)
}

fn size(m: &Monomial) -> usize {
    m.0.iter().map(|e| e.unsigned_abs() as usize).sum()
}

/// Verifies the unit conditions and both hexagons on all monomial triples
/// whose combined size is at most `bound`; if inverse rules are present also
/// checks `R∘L = id` and `L∘R = id` on all pairs within the bound.
pub fn check_distributive_law(r: &DistributiveLaw, bound: usize) -> Result<LawReport> {
    let (a, b) = (&r.source_a, &r.source_b);
    let tw = r.r_twisting();
    let am = monomials_up_to(a, bound)?;
    let bm = monomials_up_to(b, bound)?;
    let mut rep = LawReport { bound, ..LawReport::default() };

    for x in &am {
        rep.unit_checks += 1;
        if tw.apply(b, a, &b.one(), x)? != PairElement::term(x.clone(), b.one(), Scalar::one()) {
            rep.failures.push(format!("R(1⊗{}) ≠ {}⊗1", a.format_monomial(x), a.format_monomial(x)));
        }
    }
    for y in &bm {
        rep.unit_checks += 1;
        if tw.apply(b, a, y, &a.one())? != PairElement::term(a.one(), y.clone(), Scalar::one()) {
            rep.failures.push(format!("R({}⊗1) ≠ 1⊗{}", b.format_monomial(y), b.format_monomial(y)));
        }
    }

    // Hexagon with μ_B: R(b1 b2 ⊗ a) = (A⊗μ_B)(R⊗B)(B⊗R)(b1⊗b2⊗a).
    for b1 in &bm {
        for b2 in &bm {
            for x in &am {
                if size(b1) + size(b2) + size(x) > bound || b1.is_one() || b2.is_one() || x.is_one() {
                    continue;
                }
                rep.hexagon_b_checks += 1;
                let mut lhs = PairElement::zero();
                for (m, c) in b.mul_mono(b1, b2).iter() {
                    lhs.add_scaled(&tw.apply(b, a, m, x)?, c);
                }
                let mut rhs = PairElement::zero();
                for ((x1, b2p), c) in tw.apply(b, a, b2, x)?.iter() {
                    for ((x2, b1p), c2) in tw.apply(b, a, b1, x1)?.iter() {
                        for (bb, c3) in b.mul_mono(b1p, b2p).iter() {
                            rhs.add_term(x2.clone(), bb.clone(), c * c2 * c3);
                        }
                    }
                }
                if lhs != rhs {
                    rep.failures.push(format!(
                        "hexagon (B-multiplication) fails on {}⊗{}⊗{}",
                        b.format_monomial(b1),
                        b.format_monomial(b2),
                        a.format_monomial(x)
                    ));
                }
            }
        }
    }

    // Hexagon with μ_A: R(b ⊗ a1 a2) = (μ_A⊗B)(A⊗R)(R⊗A)(b⊗a1⊗a2).
    for y in &bm {
        for a1 in &am {
            for a2 in &am {
                if size(y) + size(a1) + size(a2) > bound || y.is_one() || a1.is_one() || a2.is_one() {
                    continue;
                }
                rep.hexagon_a_checks += 1;
                let mut lhs = PairElement::zero();
                for (m, c) in a.mul_mono(a1, a2).iter() {
                    lhs.add_scaled(&tw.apply(b, a, y, m)?, c);
                }
                let mut rhs = PairElement::zero();
                for ((a1p, y1), c) in tw.apply(b, a, y, a1)?.iter() {
                    for ((a2p, y2), c2) in tw.apply(b, a, y1, a2)?.iter() {
                        for (aa, c3) in a.mul_mono(a1p, a2p).iter() {
                            rhs.add_term(aa.clone(), y2.clone(), c * c2 * c3);
                        }
                    }
                }
                if lhs != rhs {
                    rep.failures.push(format!(
                        "hexagon (A-multiplication) fails on {}⊗{}⊗{}",
                        b.format_monomial(y),
                        a.format_monomial(a1),
                        a.format_monomial(a2)
                    ));
                }
            }
        }
    }

    if let Some(inv) = &r.inverse_rules {
        let lt = Twisting { rules: inv.clone() };
        for y in &bm {
            for x in &am {
                if size(y) + size(x) > bound {
                    continue;
                }
                rep.inverse_checks += 1;
                let rl = lt.apply_pairs(a, b, &tw.apply(b, a, y, x)?)?;
                if rl != PairElement::term(y.clone(), x.clone(), Scalar::one()) {
                    rep.failures.push(format!("L∘R ≠ id on {}⊗{}", b.format_monomial(y), a.format_monomial(x)));
                }
                let lr = tw.apply_pairs(b, a, &lt.apply(a, b, x, y)?)?;
                if lr != PairElement::term(x.clone(), y.clone(), Scalar::one()) {
                    rep.failures.push(format!("R∘L ≠ id on {}⊗{}", a.format_monomial(x), b.format_monomial(y)));
                }
            }
        }
    }
    Ok(rep)
}

/// The smash biproduct presentation: A-generators first, then B-generators,
/// with `b·a` rewritten by R. Rules must have the PBW shape
/// `R(b⊗a) = s·a⊗b + (terms of lower measure)`.
pub fn build_smash(r: &DistributiveLaw) -> Result<AlgebraPresentation> {
    let (a, b) = (&r.source_a, &r.source_b);
    let na = a.num_generators();
    let mut p = AlgebraPresentation::new(&format!("{}#{}", a.name, b.name), a.axes());
    for g in a.generators().iter().chain(b.generators()) {
        if p.index_of(&g.name).is_ok() {
            return Err(Error::InvalidPresentation(format!("generator name {} used in both algebras", g.name)));
        }
        p.add_generator(g.clone())?;
    }
    let n = p.num_generators();
    let lift_a = |m: &Monomial| {
        let mut v = m.0.clone();
        v.resize(n, 0);
        Monomial(v)
    };
    let lift_b = |m: &Monomial| {
        let mut v = vec![0; na];
        v.extend_from_slice(&m.0);
        Monomial(v)
    };
    let lift_elem = |e: &Element, f: &dyn Fn(&Monomial) -> Monomial| -> Element {
        e.iter().map(|(m, c)| (f(m), c.clone())).collect()
    };
    for (&(j, i), rule) in a.swaps() {
        p.set_swap(
            &a.generators()[j].name,
            &a.generators()[i].name,
            SwapRule { scalar: rule.scalar.clone(), corrections: lift_elem(&rule.corrections, &lift_a) },
        )?;
    }
    for (&(j, i), rule) in b.swaps() {
        p.set_swap(
            &b.generators()[j].name,
            &b.generators()[i].name,
            SwapRule { scalar: rule.scalar.clone(), corrections: lift_elem(&rule.corrections, &lift_b) },
        )?;
    }
    for j in 0..b.num_generators() {
        for i in 0..na {
            let (bg, ag) = (&b.generators()[j], &a.generators()[i]);
            let Some(v) = r.rules.get(&(j, i)) else { continue };
            let lead = (a.gen(i), b.gen(j));
            let s = v.coeff(&lead.0, &lead.1);
            if s.is_zero() {
                return Err(Error::InvalidLaw(format!(
                    "R({}⊗{}) has no {}⊗{} term, so it is not a PBW swap",
                    bg.name, ag.name, ag.name, bg.name
                )));
            }
            let mut corr = Element::zero();
            for ((am, bm), c) in v.iter() {
                if (am, bm) != (&lead.0, &lead.1) {
                    let mut mono = lift_a(am);
                    for (k, e) in lift_b(bm).0.iter().enumerate() {
                        mono.0[k] += e;
                    }
                    corr.add_term(mono, c.clone());
                }
            }
            p.set_swap(&bg.name, &ag.name, SwapRule { scalar: s, corrections: corr })?;
        }
    }
    Ok(p)
}

/// Splits a smash monomial into its A-part and B-part.
pub fn split_smash(na: usize, m: &Monomial) -> (Monomial, Monomial) {
    (Monomial(m.0[..na].to_vec()), Monomial(m.0[na..].to_vec()))
}

/// Joins an A-monomial and a B-monomial into a smash monomial.
pub fn join_smash(a: &Monomial, b: &Monomial) -> Monomial {
    let mut v = a.0.clone();
    v.extend_from_slice(&b.0);
    Monomial(v)
}

fn pair_basis(left: &AlgebraPresentation, right: &AlgebraPresentation, d: &Multidegree) -> Result<Vec<(Monomial, Monomial)>> {
    if left.is_laurent() || right.is_laurent() {
        return Err(Error::Unsupported("block solves over Laurent algebras".into()));
    }
    let mut out = Vec::new();
    let mut split = vec![0i64; d.axes()];
    fn rec(
        ax: usize,
        d: &Multidegree,
        split: &mut Vec<i64>,
        left: &AlgebraPresentation,
        right: &AlgebraPresentation,
        out: &mut Vec<(Monomial, Monomial)>,
    ) -> Result<()> {
        if ax == d.axes() {
            let dl = Multidegree(split.clone());
            let dr = d - &dl;
            for l in left.basis_of_degree(&dl)? {
                for r in right.basis_of_degree(&dr)? {
                    out.push((l.clone(), r));
                }
            }
            return Ok(());
        }
        for x in 0..=d.0[ax].max(0) {
            split[ax] = x;
            rec(ax + 1, d, split, left, right, out)?;
        }
        Ok(())
    }
    rec(0, d, &mut split, left, right, &mut out)?;
    Ok(out)
}

/// Computes inverse rules by solving `R∘L = id` on the graded block of each
/// generator pair, then verifies both compositions on generator pairs.
pub fn invert_law(r: &DistributiveLaw) -> Result<DistributiveLaw> {
    let (a, b) = (&r.source_a, &r.source_b);
    let tw = r.r_twisting();
    let mut inv = BTreeMap::new();
    for i in 0..a.num_generators() {
        for j in 0..b.num_generators() {
            let (am, bm) = (a.gen(i), b.gen(j));
            let value = match r.rules.get(&(j, i)) {
                None => PairElement::term(bm.clone(), am.clone(), Scalar::one()),
                Some(v) => match v.scaling_of(&am, &bm) {
                    Some(s) => PairElement::term(bm.clone(), am.clone(), s.recip()),
                    None => solve_inverse(r, &tw, i, j)?,
                },
            };
            inv.insert((i, j), value);
        }
    }
    let mut out = r.clone();
    out.inverse_rules = Some(inv);
    let lt = out.l_twisting()?;
    for i in 0..a.num_generators() {
        for j in 0..b.num_generators() {
            let (am, bm) = (a.gen(i), b.gen(j));
            let lr = tw.apply_pairs(b, a, &lt.apply(a, b, &am, &bm)?)?;
            let rl = lt.apply_pairs(a, b, &tw.apply(b, a, &bm, &am)?)?;
            if lr != PairElement::term(am.clone(), bm.clone(), Scalar::one())
                || rl != PairElement::term(bm.clone(), am.clone(), Scalar::one())
            {
                return Err(Error::NotInvertible(format!(
                    "computed inverse fails on {}⊗{}",
                    a.generators()[i].name,
                    b.generators()[j].name
                )));
            }
        }
    }
    Ok(out)
}

fn solve_inverse(r: &DistributiveLaw, tw: &Twisting, i: usize, j: usize) -> Result<PairElement> {
    let (a, b) = (&r.source_a, &r.source_b);
    let d = &a.generators()[i].degree + &b.generators()[j].degree;
    let src = pair_basis(b, a, &d)?; // (b, a) pairs
    let dst = pair_basis(a, b, &d)?; // (a, b) pairs
    let name = || format!("{}⊗{}", a.generators()[i].name, b.generators()[j].name);
    if src.len() != dst.len() {
        return Err(Error::NotInvertible(format!("block of {} is not square", name())));
    }
    let index: BTreeMap<&(Monomial, Monomial), usize> = dst.iter().enumerate().map(|(k, p)| (p, k)).collect();
    let mut cols = Vec::with_capacity(src.len());
    for (bm, am) in &src {
        let img = tw.apply(b, a, bm, am)?;
        let mut col = Vec::new();
        for (pair, c) in img.iter() {
            let k = index
                .get(pair)
                .ok_or_else(|| Error::Inhomogeneous(format!("R leaves the block of {}", name())))?;
            col.push((*k, c.clone()));
        }
        cols.push(col);
    }
    let m = SparseMatrix::from_columns(dst.len(), cols);
    if rank(&m) < dst.len() {
        return Err(Error::NotInvertible(format!("singular block for {}", name())));
    }
    // Solve m x = e_target by tracking combinations.
    let target = index[&(a.gen(i), b.gen(j))];
    let mut ech = Echelon::new(dst.len());
    for c in m.columns() {
        ech.insert(c);
    }
    let (rem, combo) = ech.reduce(&vec![(target, Scalar::one())]);
    debug_assert!(rem.is_empty());
    let mut out = PairElement::zero();
    for (k, c) in combo {
        let (bm, am) = &src[k];
        out.add_term(bm.clone(), am.clone(), c);
    }
    Ok(out)
}

/// Ore datum `(A, α, δ)`; the extension variable is supplied when the law
/// is built.
#[derive(Clone, Debug)]
pub struct OreData {
    pub base: AlgebraPresentation,
    /// Images of the generators under α.
    pub alpha: Vec<Element>,
    /// Images of the generators under δ.
    pub delta: Vec<Element>,
}

impl OreData {
    /// Pure automorphism data (δ = 0).
    pub fn automorphism(base: AlgebraPresentation, alpha: Vec<Element>) -> Self {
        let delta = vec![Element::zero(); base.num_generators()];
        OreData { base, alpha, delta }
    }

    /// Diagonal α: `g_k ↦ s_k g_k`.
    pub fn diagonal(base: AlgebraPresentation, scalars: &[Scalar]) -> Self {
        let alpha = scalars.iter().enumerate().map(|(k, s)| Element::term(base.gen(k), s.clone())).collect();
        Self::automorphism(base, alpha)
    }

    /// α applied to a monomial.
    pub fn alpha_of(&self, m: &Monomial) -> Element {
        let p = &self.base;
        let mut acc = p.unit();
        for (k, &e) in m.0.iter().enumerate() {
            for _ in 0..e {
                acc = p.multiply(&acc, &self.alpha[k]);
            }
        }
        acc
    }

    /// δ applied to a monomial via `δ(g m) = α(g)δ(m) + δ(g)m`.
    pub fn delta_of(&self, m: &Monomial) -> Element {
        let p = &self.base;
        let Some(g) = m.lowest() else { return Element::zero() };
        let mut rest = m.clone();
        rest.0[g] -= 1;
        let rest_e = Element::from_monomial(rest.clone());
        let mut out = p.multiply(&self.alpha[g], &self.delta_of(&rest));
        out.add_scaled(&p.multiply(&self.delta[g], &rest_e), &Scalar::one());
        out
    }

    fn alpha_elem(&self, e: &Element) -> Element {
        let mut out = Element::zero();
        for (m, c) in e.iter() {
            out.add_scaled(&self.alpha_of(m), c);
        }
        out
    }

    fn delta_elem(&self, e: &Element) -> Element {
        let mut out = Element::zero();
        for (m, c) in e.iter() {
            out.add_scaled(&self.delta_of(m), c);
        }
        out
    }

    /// Checks that α respects the relations, that δ is an α-derivation on
    /// every relation, and that α is invertible on each generator block.
    pub fn validate(&self) -> Result<()> {
        let p = &self.base;
        let n = p.num_generators();
        if self.alpha.len() != n || self.delta.len() != n {
            return Err(Error::InvalidLaw("Ore data must give α and δ on every generator".into()));
        }
        if p.is_laurent() {
            return Err(Error::Unsupported("Ore data over Laurent bases".into()));
        }
        for k in 0..n {
            if p.homogeneous_degree(&self.alpha[k]).is_some_and(|d| d != p.generators()[k].degree) {
                return Err(Error::Inhomogeneous(format!("α({}) changes degree", p.generators()[k].name)));
            }
        }
        for j in 0..n {
            for i in 0..j {
                // g_j g_i = s g_i g_j + corr
                let word = p.normal_form(&[(j, 1), (i, 1)])?;
                let lhs_a = p.multiply(&self.alpha[j], &self.alpha[i]);
                let rhs_a = self.alpha_elem(&word);
                if lhs_a != rhs_a {
                    return Err(Error::InvalidLaw(format!(
                        "α does not respect the relation for {}·{}",
                        p.generators()[j].name,
                        p.generators()[i].name
                    )));
                }
                // δ(g_j g_i) computed letterwise must equal δ of its normal form
                let gi = Element::from_monomial(p.gen(i));
                let mut lhs_d = p.multiply(&self.alpha[j], &self.delta[i]);
                lhs_d.add_scaled(&p.multiply(&self.delta[j], &gi), &Scalar::one());
                if lhs_d != self.delta_elem(&word) {
                    return Err(Error::InvalidLaw(format!(
                        "δ is not an α-derivation on the relation for {}·{}",
                        p.generators()[j].name,
                        p.generators()[i].name
                    )));
                }
            }
        }
        for (k, g) in p.generators().iter().enumerate() {
            if let Some(rule) = &g.power {
                let mono = Monomial::generator(n, k, rule.exponent as i32);
                let mut power = p.unit();
                for _ in 0..rule.exponent {
                    power = p.multiply(&power, &self.alpha[k]);
                }
                let _ = mono;
                if power != p.unit().scale(&rule.value) {
                    return Err(Error::InvalidLaw(format!("α does not respect the power rule of {}", g.name)));
                }
            }
        }
        // α invertible on the blocks of generator degrees
        let mut degrees: Vec<Multidegree> = p.generators().iter().map(|g| g.degree.clone()).collect();
        degrees.sort();
        degrees.dedup();
        for d in degrees {
            let basis = p.basis_of_degree(&d)?;
            let idx: BTreeMap<&Monomial, usize> = basis.iter().enumerate().map(|(k, m)| (m, k)).collect();
            let mut ech = Echelon::new(basis.len());
            for m in &basis {
                let img = self.alpha_of(m);
                let mut col = Vec::new();
                for (t, c) in img.iter() {
                    col.push((idx[t], c.clone()));
                }
                col.sort_by_key(|e| e.0);
                if let Insertion::Dependent(_) = ech.insert(&col) {
                    return Err(Error::NotInvertible(format!("α is singular in degree {d}")));
                }
            }
        }
        Ok(())
    }

    /// The law `R(X⊗a) = α(a)⊗X + δ(a)⊗1` with `B = k[X]`.
    pub fn to_law(&self, var: Generator) -> Result<DistributiveLaw> {
        self.validate()?;
        let p = &self.base;
        let mut b = AlgebraPresentation::new(&format!("k[{}]", var.name), p.axes());
        let xname = var.name.clone();
        b.add_generator(var)?;
        let x = b.gen(0);
        let mut law = DistributiveLaw::new(p.clone(), b.clone())?;
        for (k, g) in p.generators().iter().enumerate() {
            let mut v = PairElement::zero();
            for (m, c) in self.alpha[k].iter() {
                v.add_term(m.clone(), x.clone(), c.clone());
            }
            for (m, c) in self.delta[k].iter() {
                v.add_term(m.clone(), b.one(), c.clone());
            }
            law.set_rule(&xname, &g.name, v)?;
        }
        Ok(law)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;

    fn poly(name: &str, axes: usize, axis: usize) -> AlgebraPresentation {
        let mut p = AlgebraPresentation::new(&format!("k[{name}]"), axes);
        let mut d = vec![0; axes];
        d[axis] = 1;
        p.add_generator(Generator::new(name, d)).unwrap();
        p
    }

    fn qplane_law(q: i64) -> DistributiveLaw {
        let mut r = DistributiveLaw::new(poly("x", 2, 0), poly("y", 2, 1)).unwrap();
        r.set_scaling("y", "x", int(q)).unwrap();
        r
    }

    #[test]
    fn scaling_law_extends_by_powers() {
        let r = qplane_law(2);
        let y2 = Monomial(vec![2]);
        let x3 = Monomial(vec![3]);
        assert_eq!(r.apply_r(&y2, &x3).unwrap(), PairElement::term(x3.clone(), y2.clone(), int(64)));
        assert!(check_distributive_law(&r, 4).unwrap().passed());
    }

    #[test]
    fn quantum_plane_inverse() {
        let r = invert_law(&qplane_law(2)).unwrap();
        let l = r.apply_l(&Monomial(vec![2]), &Monomial(vec![1])).unwrap();
        assert_eq!(l, PairElement::term(Monomial(vec![1]), Monomial(vec![2]), crate::linalg::ratio(1, 4)));
        let back = invert_law(&r.inverse_law().unwrap()).unwrap();
        assert_eq!(back.inverse_rules.unwrap(), r.rules);
    }

    #[test]
    fn smash_is_quantum_plane() {
        let p = build_smash(&qplane_law(2)).unwrap();
        let e = p.normal_form_named(&[("y", 1), ("x", 1)]).unwrap();
        assert_eq!(e, Element::term(p.monomial(&[("x", 1), ("y", 1)]).unwrap(), int(2)));
    }

    #[test]
    fn weyl_law_is_valid_but_truncated_one_is_not() {
        let mut r = DistributiveLaw::new(poly("x", 1, 0), poly("y", 1, 0)).unwrap();
        let one = Monomial(vec![0]);
        let mut v = PairElement::term(Monomial(vec![1]), Monomial(vec![1]), int(1));
        v.add_term(one.clone(), one.clone(), int(1));
        // inhomogeneous on the total grading
        assert!(r.set_rule("y", "x", v.clone()).is_err());

        let mut ux = AlgebraPresentation::new("k[x]", 1);
        ux.add_generator(Generator::new("x", vec![0])).unwrap();
        let mut uy = AlgebraPresentation::new("k[y]", 1);
        uy.add_generator(Generator::new("y", vec![0])).unwrap();
        let mut weyl = DistributiveLaw::new(ux, uy).unwrap();
        weyl.set_rule("y", "x", v.clone()).unwrap();
        assert!(check_distributive_law(&weyl, 4).unwrap().passed());

        let mut x = AlgebraPresentation::new("k[x]", 1);
        x.add_generator(Generator::new("x", vec![0]).truncated(2)).unwrap();
        let mut y = AlgebraPresentation::new("k[y]", 1);
        y.add_generator(Generator::new("y", vec![0]).truncated(3)).unwrap();
        let mut bad = DistributiveLaw::new(x, y).unwrap();
        bad.set_rule("y", "x", v).unwrap();
        let rep = check_distributive_law(&bad, 3).unwrap();
        assert!(!rep.passed());
        assert!(rep.failures.iter().any(|f| f.contains("y⊗x⊗x")), "{:?}", rep.failures);
    }

    #[test]
    fn singular_block_is_not_invertible() {
        let mut r = DistributiveLaw::new(poly("x", 2, 0), poly("y", 2, 1)).unwrap();
        r.set_rule("y", "x", PairElement::zero()).unwrap();
        assert!(matches!(invert_law(&r), Err(Error::NotInvertible(_))));
    }
}
