//! Ordered-monomial presentations, normal forms and confluence checking.
//!
//! A presentation lists generators in a fixed order. Normal-form monomials
//! are exponent vectors in that order. Out-of-order pairs `g_j g_i` (j > i)
//! rewrite to `s * g_i g_j + corrections`; a missing rule means the pair
//! commutes. A power rule `g^a = c` truncates (c = 0) or folds powers back.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{pow, Scalar};

/// A grading vector, one entry per axis.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Multidegree(pub Vec<i64>);

impl Multidegree {
    pub fn zero(axes: usize) -> Self {
        Multidegree(vec![0; axes])
    }

    pub fn axes(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    pub fn scaled(&self, k: i64) -> Self {
        Multidegree(self.0.iter().map(|x| x * k).collect())
    }
}

impl Add for &Multidegree {
    type Output = Multidegree;
    fn add(self, o: &Multidegree) -> Multidegree {
        Multidegree(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Multidegree {
    type Output = Multidegree;
    fn sub(self, o: &Multidegree) -> Multidegree {
        Multidegree(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Multidegree {
    type Output = Multidegree;
    fn neg(self) -> Multidegree {
        Multidegree(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for Multidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Exponent vector in generator order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<i32>);

impl Monomial {
    pub fn one(gens: usize) -> Self {
        Monomial(vec![0; gens])
    }

    pub fn generator(gens: usize, k: usize, e: i32) -> Self {
        let mut v = vec![0; gens];
        v[k] = e;
        Monomial(v)
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Index of the last generator with a nonzero exponent.
    pub fn highest(&self) -> Option<usize> {
        self.0.iter().rposition(|&e| e != 0)
    }

    /// Index of the first generator with a nonzero exponent.
    pub fn lowest(&self) -> Option<usize> {
        self.0.iter().position(|&e| e != 0)
    }

    pub fn exponents(&self) -> &[i32] {
        &self.0
    }
}

/// Sparse linear combination of normal-form monomials.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Element {
    terms: BTreeMap<Monomial, Scalar>,
}

impl Element {
    pub fn zero() -> Self {
        Element { terms: BTreeMap::new() }
    }

    pub fn from_monomial(m: Monomial) -> Self {
        Self::term(m, Scalar::one())
    }

    pub fn term(m: Monomial, c: Scalar) -> Self {
        let mut e = Element::zero();
        e.add_term(m, c);
        e
    }

    pub fn one(gens: usize) -> Self {
        Self::from_monomial(Monomial::one(gens))
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

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Element, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (m, x) in &other.terms {
            self.add_term(m.clone(), x * c);
        }
    }

    pub fn scale(&self, c: &Scalar) -> Element {
        let mut out = Element::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn sub(&self, other: &Element) -> Element {
        let mut out = self.clone();
        out.add_scaled(other, &-Scalar::one());
        out
    }

    pub fn plus(&self, other: &Element) -> Element {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::one());
        out
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, Scalar> {
        self.terms
    }
}

impl FromIterator<(Monomial, Scalar)> for Element {
    fn from_iter<I: IntoIterator<Item = (Monomial, Scalar)>>(iter: I) -> Self {
        let mut e = Element::zero();
        for (m, c) in iter {
            e.add_term(m, c);
        }
        e
    }
}

/// `g^exponent = value`; a zero value is a truncation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerRule {
    pub exponent: u32,
    pub value: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub laurent: bool,
    pub degree: Multidegree,
    pub power: Option<PowerRule>,
}

impl Generator {
    pub fn new(name: &str, degree: Vec<i64>) -> Self {
        Generator { name: name.to_string(), laurent: false, degree: Multidegree(degree), power: None }
    }

    pub fn laurent(mut self) -> Self {
        self.laurent = true;
        self
    }

    pub fn truncated(mut self, a: u32) -> Self {
        self.power = Some(PowerRule { exponent: a, value: Scalar::zero() });
        self
    }

    pub fn with_power(mut self, a: u32, value: Scalar) -> Self {
        self.power = Some(PowerRule { exponent: a, value });
        self
    }
}

/// `g_j g_i = scalar * g_i g_j + corrections` for j > i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SwapRule {
    pub scalar: Scalar,
    pub corrections: Element,
}

impl SwapRule {
    pub fn scaling(scalar: Scalar) -> Self {
        SwapRule { scalar, corrections: Element::zero() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraPresentation {
    pub name: String,
    axes: usize,
    generators: Vec<Generator>,
    swaps: BTreeMap<(usize, usize), SwapRule>,
}

impl AlgebraPresentation {
    pub fn new(name: &str, axes: usize) -> Self {
        AlgebraPresentation { name: name.to_string(), axes, generators: Vec::new(), swaps: BTreeMap::new() }
    }

    pub fn add_generator(&mut self, g: Generator) -> Result<usize> {
        if g.degree.axes() != self.axes {
            return Err(Error::InvalidPresentation(format!(
                "generator {} has {} degree entries, expected {}",
                g.name,
                g.degree.axes(),
                self.axes
            )));
        }
        if self.generators.iter().any(|h| h.name == g.name) {
            return Err(Error::InvalidPresentation(format!("duplicate generator {}", g.name)));
        }
        if !g.degree.is_nonnegative() {
            return Err(Error::InvalidPresentation(format!("generator {} has a negative degree", g.name)));
        }
        if let Some(p) = &g.power {
            if g.laurent {
                return Err(Error::InvalidPresentation(format!("Laurent generator {} has a power rule", g.name)));
            }
            if p.exponent < 1 {
                return Err(Error::InvalidPresentation(format!("power rule on {} has exponent 0", g.name)));
            }
            if !p.value.is_zero() && g.degree.0.iter().any(|&x| x != 0) {
                return Err(Error::Inhomogeneous(format!(
                    "{}^{} = {} needs {} in degree zero",
                    g.name, p.exponent, p.value, g.name
                )));
            }
        }
        // Existing monomials and rules are padded with a zero exponent.
        let old = std::mem::take(&mut self.swaps);
        for (k, mut r) in old {
            r.corrections = r
                .corrections
                .into_terms()
                .into_iter()
                .map(|(mut m, c)| {
                    m.0.push(0);
                    (m, c)
                })
                .collect();
            self.swaps.insert(k, r);
        }
        self.generators.push(g);
        Ok(self.generators.len() - 1)
    }

    /// Sets the rule for `later * earlier` where `later` comes after `earlier`.
    pub fn set_swap(&mut self, later: &str, earlier: &str, rule: SwapRule) -> Result<()> {
        let j = self.index_of(later)?;
        let i = self.index_of(earlier)?;
        if j <= i {
            return Err(Error::InvalidPresentation(format!(
                "swap rule {later}·{earlier} is not an out-of-order pair"
            )));
        }
        self.check_rule(j, i, &rule)?;
        self.swaps.insert((j, i), rule);
        Ok(())
    }

    fn check_rule(&self, j: usize, i: usize, rule: &SwapRule) -> Result<()> {
        let (gj, gi) = (&self.generators[j], &self.generators[i]);
        if rule.scalar.is_zero() {
            return Err(Error::InvalidPresentation(format!("zero scalar in rule {}·{}", gj.name, gi.name)));
        }
        if !rule.corrections.is_zero() && (gj.laurent || gi.laurent) {
            return Err(Error::InvalidPresentation(format!(
                "rule {}·{} involves a Laurent generator and has corrections",
                gj.name, gi.name
            )));
        }
        let target = &gj.degree + &gi.degree;
        for (m, _) in rule.corrections.iter() {
            self.check_normal(m)?;
            if self.degree_of(m) != target {
                return Err(Error::Inhomogeneous(format!(
                    "correction {} in rule {}·{} has degree {} but the pair has degree {}",
                    self.format_monomial(m),
                    gj.name,
                    gi.name,
                    self.degree_of(m),
                    target
                )));
            }
        }
        Ok(())
    }

    pub fn axes(&self) -> usize {
        self.axes
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn swaps(&self) -> &BTreeMap<(usize, usize), SwapRule> {
        &self.swaps
    }

    pub fn swap(&self, j: usize, i: usize) -> Option<&SwapRule> {
        self.swaps.get(&(j, i))
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.generators
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn is_laurent(&self) -> bool {
        self.generators.iter().any(|g| g.laurent)
    }

    /// Re-validates every rule; useful after deserialization.
    pub fn validate(&self) -> Result<()> {
        for (&(j, i), r) in &self.swaps {
            if j <= i || j >= self.generators.len() {
                return Err(Error::InvalidPresentation(format!("bad swap index pair ({j},{i})")));
            }
            self.check_rule(j, i, r)?;
        }
        Ok(())
    }

    pub fn one(&self) -> Monomial {
        Monomial::one(self.generators.len())
    }

    pub fn unit(&self) -> Element {
        Element::one(self.generators.len())
    }

    pub fn gen(&self, k: usize) -> Monomial {
        Monomial::generator(self.generators.len(), k, 1)
    }

    /// Monomial from named exponents, which must already be in normal form.
    pub fn monomial(&self, parts: &[(&str, i32)]) -> Result<Monomial> {
        let mut m = self.one();
        for &(name, e) in parts {
            let k = self.index_of(name)?;
            m.0[k] += e;
        }
        self.check_normal(&m)?;
        Ok(m)
    }

    pub fn check_normal(&self, m: &Monomial) -> Result<()> {
        if m.0.len() != self.generators.len() {
            return Err(Error::InvalidPresentation("monomial length does not match".into()));
        }
        for (g, &e) in self.generators.iter().zip(&m.0) {
            if e < 0 && !g.laurent {
                return Err(Error::NegativeExponent(g.name.clone()));
            }
            if let Some(p) = &g.power {
                if e >= p.exponent as i32 {
                    return Err(Error::InvalidPresentation(format!(
                        "{}^{} is not reduced by {}^{}",
                        g.name, e, g.name, p.exponent
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn degree_of(&self, m: &Monomial) -> Multidegree {
        let mut d = vec![0i64; self.axes];
        for (g, &e) in self.generators.iter().zip(&m.0) {
            if e != 0 {
                for (x, &y) in d.iter_mut().zip(&g.degree.0) {
                    *x += e as i64 * y;
                }
            }
        }
        Multidegree(d)
    }

    /// The common degree of all terms, or `None` if `e` is zero or inhomogeneous.
    pub fn homogeneous_degree(&self, e: &Element) -> Option<Multidegree> {
        let mut it = e.iter().map(|(m, _)| self.degree_of(m));
        let first = it.next()?;
        if it.all(|d| d == first) {
            Some(first)
        } else {
            None
        }
    }

    fn apply_power(&self, mut m: Monomial) -> Element {
        let mut c = Scalar::one();
        for (g, e) in self.generators.iter().zip(m.0.iter_mut()) {
            if let Some(p) = &g.power {
                let a = p.exponent as i32;
                if *e >= a {
                    if p.value.is_zero() {
                        return Element::zero();
                    }
                    c *= pow(&p.value, (*e / a) as i64);
                    *e %= a;
                }
            }
        }
        Element::term(m, c)
    }

    /// `m * g_k^e` for a normal monomial `m`.
    pub fn mul_generator_power(&self, m: &Monomial, k: usize, e: i32) -> Element {
        if e == 0 {
            return Element::from_monomial(m.clone());
        }
        let j = match m.highest() {
            Some(j) if j > k => j,
            _ => {
                let mut out = m.clone();
                out.0[k] += e;
                return self.apply_power(out);
            }
        };
        let f = m.0[j];
        let rule = self.swaps.get(&(j, k));
        let (scalar, corrections) = match rule {
            None => (Scalar::one(), None),
            Some(r) if r.corrections.is_zero() => (r.scalar.clone(), None),
            Some(r) => (r.scalar.clone(), Some(&r.corrections)),
        };
        match corrections {
            None => {
                // g_j^f g_k^e = s^(fe) g_k^e g_j^f
                let s = pow(&scalar, f as i64 * e as i64);
                let mut rest = m.clone();
                rest.0[j] = 0;
                let left = self.mul_generator_power(&rest, k, e);
                let mut out = Element::zero();
                for (t, c) in left.iter() {
                    out.add_scaled(&self.mul_generator_power(t, j, f), &(c * &s));
                }
                out
            }
            Some(corr) => {
                if e > 1 {
                    let first = self.mul_generator_power(m, k, 1);
                    let mut out = Element::zero();
                    for (t, c) in first.iter() {
                        out.add_scaled(&self.mul_generator_power(t, k, e - 1), c);
                    }
                    return out;
                }
                // m = m'' g_j, and g_j g_k = s g_k g_j + corr
                let mut shorter = m.clone();
                shorter.0[j] -= 1;
                let left = self.mul_generator_power(&shorter, k, 1);
                let mut out = Element::zero();
                for (t, c) in left.iter() {
                    out.add_scaled(&self.mul_generator_power(t, j, 1), &(c * &scalar));
                }
                let tail = self.mul_mono_elem(&shorter, corr);
                out.add_scaled(&tail, &Scalar::one());
                out
            }
        }
    }

    fn mul_mono_elem(&self, m: &Monomial, e: &Element) -> Element {
        let mut out = Element::zero();
        for (t, c) in e.iter() {
            out.add_scaled(&self.mul_mono(m, t), c);
        }
        out
    }

    /// Product of two normal monomials.
    pub fn mul_mono(&self, m1: &Monomial, m2: &Monomial) -> Element {
        let mut acc = Element::from_monomial(m1.clone());
        for (k, &e) in m2.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let mut next = Element::zero();
            for (t, c) in acc.iter() {
                next.add_scaled(&self.mul_generator_power(t, k, e), c);
            }
            acc = next;
            if acc.is_zero() {
                break;
            }
        }
        acc
    }

    /// Bilinear product of two elements.
    pub fn multiply(&self, e1: &Element, e2: &Element) -> Element {
        let mut out = Element::zero();
        for (m1, c1) in e1.iter() {
            for (m2, c2) in e2.iter() {
                out.add_scaled(&self.mul_mono(m1, m2), &(c1 * c2));
            }
        }
        out
    }

    /// Normal form of a word given as `(generator index, exponent)` letters.
    pub fn normal_form(&self, word: &[(usize, i32)]) -> Result<Element> {
        let mut acc = self.unit();
        for &(k, e) in word {
            let g = self
                .generators
                .get(k)
                .ok_or_else(|| Error::UnknownGenerator(format!("#{k}")))?;
            if e < 0 && !g.laurent {
                return Err(Error::NegativeExponent(g.name.clone()));
            }
            let mut next = Element::zero();
            for (t, c) in acc.iter() {
                next.add_scaled(&self.mul_generator_power(t, k, e), c);
            }
            acc = next;
        }
        Ok(acc)
    }

    /// Normal form of a word with named letters.
    pub fn normal_form_named(&self, word: &[(&str, i32)]) -> Result<Element> {
        let idx: Vec<(usize, i32)> =
            word.iter().map(|&(n, e)| Ok((self.index_of(n)?, e))).collect::<Result<_>>()?;
        self.normal_form(&idx)
    }

    /// Parses words such as `"d a"`, `"x^2 y"` or `"y^-1 x"`.
    pub fn parse_word(&self, s: &str) -> Result<Vec<(usize, i32)>> {
        let mut out = Vec::new();
        for tok in s.split(|c: char| c.is_whitespace() || c == '*' || c == '·').filter(|t| !t.is_empty()) {
            if tok == "1" {
                continue;
            }
            let (name, e) = match tok.split_once('^') {
                Some((n, e)) => (n, e.parse::<i32>().map_err(|_| Error::Parse(format!("bad exponent in {tok}")))?),
                None => (tok, 1),
            };
            out.push((self.index_of(name)?, e));
        }
        Ok(out)
    }

    /// All normal monomials of multidegree `d`.
    pub fn basis_of_degree(&self, d: &Multidegree) -> Result<Vec<Monomial>> {
        if d.axes() != self.axes {
            return Err(Error::DimensionMismatch(format!("degree {d} has wrong number of axes")));
        }
        let n = self.generators.len();
        let mut fixed = vec![None; n];
        let mut rest = d.clone();
        for (k, g) in self.generators.iter().enumerate() {
            if !g.laurent {
                continue;
            }
            let axis = self.private_axis(k).ok_or_else(|| {
                Error::InfiniteBasis(format!("Laurent generator {} has no private grading axis", g.name))
            })?;
            let step = g.degree.0[axis];
            if d.0[axis] % step != 0 {
                return Ok(Vec::new());
            }
            let e = d.0[axis] / step;
            fixed[k] = Some(e as i32);
            rest = &rest - &g.degree.scaled(e);
        }
        for (k, g) in self.generators.iter().enumerate() {
            if fixed[k].is_none() && g.power.is_none() && g.degree.0.iter().all(|&x| x == 0) {
                return Err(Error::InfiniteBasis(format!("generator {} has degree zero and no power rule", g.name)));
            }
        }
        if !rest.is_nonnegative() {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        let mut cur = vec![0i32; n];
        self.enumerate(0, &fixed, &mut rest.0.clone(), &mut cur, &mut out);
        out.sort();
        Ok(out)
    }

    fn enumerate(
        &self,
        k: usize,
        fixed: &[Option<i32>],
        rest: &mut Vec<i64>,
        cur: &mut Vec<i32>,
        out: &mut Vec<Monomial>,
    ) {
        if k == self.generators.len() {
            if rest.iter().all(|&x| x == 0) {
                out.push(Monomial(cur.clone()));
            }
            return;
        }
        if let Some(e) = fixed[k] {
            cur[k] = e;
            self.enumerate(k + 1, fixed, rest, cur, out);
            cur[k] = 0;
            return;
        }
        let g = &self.generators[k];
        let mut max = i64::MAX;
        for (r, &x) in rest.iter().zip(&g.degree.0) {
            if x > 0 {
                max = max.min(r / x);
            }
        }
        if let Some(p) = &g.power {
            max = max.min(p.exponent as i64 - 1);
        }
        for e in 0..=max {
            for (r, &x) in rest.iter_mut().zip(&g.degree.0) {
                *r -= e * x;
            }
            cur[k] = e as i32;
            self.enumerate(k + 1, fixed, rest, cur, out);
            for (r, &x) in rest.iter_mut().zip(&g.degree.0) {
                *r += e * x;
            }
        }
        cur[k] = 0;
    }

    /// An axis on which generator `k` has nonzero degree and no other
    /// generator does.
    pub fn private_axis(&self, k: usize) -> Option<usize> {
        (0..self.axes).find(|&ax| {
            self.generators[k].degree.0[ax] != 0
                && self.generators.iter().enumerate().all(|(i, g)| i == k || g.degree.0[ax] == 0)
        })
    }

    /// Every normal monomial, for finite-dimensional presentations.
    pub fn full_basis(&self) -> Result<Vec<Monomial>> {
        let mut out = vec![self.one()];
        for (k, g) in self.generators.iter().enumerate() {
            let p = g.power.as_ref().ok_or_else(|| {
                Error::InfiniteBasis(format!("generator {} has no power rule", g.name))
            })?;
            let mut next = Vec::new();
            for m in &out {
                for e in 0..p.exponent as i32 {
                    let mut m2 = m.clone();
                    m2.0[k] = e;
                    next.push(m2);
                }
            }
            out = next;
        }
        out.sort();
        Ok(out)
    }

    /// Every normal monomial with nonnegative exponents whose exponent sum
    /// (ignoring degree-zero generators) is at most `t`.
    pub fn monomials_up_to(&self, t: i64) -> Result<Vec<Monomial>> {
        if self.is_laurent() {
            return Err(Error::InfiniteBasis(format!("{} has Laurent generators", self.name)));
        }
        let n = self.generators.len();
        let mut out = Vec::new();
        let mut cur = vec![0i32; n];
        fn rec(p: &AlgebraPresentation, k: usize, left: i64, cur: &mut Vec<i32>, out: &mut Vec<Monomial>) -> Result<()> {
            if k == p.generators.len() {
                out.push(Monomial(cur.clone()));
                return Ok(());
            }
            let g = &p.generators[k];
            let zero_deg = g.degree.0.iter().all(|&x| x == 0);
            let max = match (&g.power, zero_deg) {
                (Some(pr), true) => pr.exponent as i64 - 1,
                (None, true) => return Err(Error::InfiniteBasis(format!("generator {} has degree zero", g.name))),
                (Some(pr), false) => left.min(pr.exponent as i64 - 1),
                (None, false) => left,
            };
            for e in 0..=max {
                cur[k] = e as i32;
                rec(p, k + 1, if zero_deg { left } else { left - e }, cur, out)?;
            }
            cur[k] = 0;
            Ok(())
        }
        rec(self, 0, t, &mut cur, &mut out)?;
        out.sort();
        Ok(out)
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        let parts: Vec<String> = self
            .generators
            .iter()
            .zip(&m.0)
            .filter(|(_, &e)| e != 0)
            .map(|(g, &e)| if e == 1 { g.name.clone() } else { format!("{}^{}", g.name, e) })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join(" ")
        }
    }

    pub fn format_element(&self, e: &Element) -> String {
        if e.is_zero() {
            return "0".to_string();
        }
        let parts: Vec<String> = e
            .iter()
            .map(|(m, c)| {
                if m.is_one() {
                    format!("{c}")
                } else if c.is_one() {
                    self.format_monomial(m)
                } else {
                    format!("({c})·{}", self.format_monomial(m))
                }
            })
            .collect();
        parts.join(" + ")
    }

    /// Checks local confluence of the letter rewriting system on every word
    /// of length at most `bound` (see [`ConfluenceReport`]).
    pub fn check_confluence(&self, bound: usize) -> ConfluenceReport {
        Confluence::new(self).run(bound)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Letter {
    gen: usize,
    inv: bool,
}

type Word = Vec<Letter>;

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct ConfluenceFailure {
    pub word: String,
    pub normal_forms: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct ConfluenceReport {
    pub bound: usize,
    pub words_checked: usize,
    /// Words on which at least two rules apply.
    pub ambiguous_words: usize,
    pub failures: Vec<ConfluenceFailure>,
    /// Rule applications that did not decrease the rewriting measure.
    pub measure_violations: Vec<String>,
}

impl ConfluenceReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.measure_violations.is_empty()
    }

    pub fn witness(&self) -> Option<&str> {
        self.failures.first().map(|f| f.word.as_str())
    }
}

struct Confluence<'a> {
    p: &'a AlgebraPresentation,
    memo: HashMap<Word, Element>,
    violations: Vec<String>,
}

// Lexicographic (length, weight, inversions) where weight sums 2^gen. Swaps
// keep the length, Ore corrections lower the weight, pure swaps lower the
// inversion count, and cancellations or powers shorten the word.
fn measure(w: &[Letter]) -> (usize, u128, usize) {
    let weight = w.iter().map(|l| 1u128 << l.gen.min(127)).sum();
    let mut inv = 0;
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            if w[i].gen > w[j].gen {
                inv += 1;
            }
        }
    }
    (w.len(), weight, inv)
}

impl<'a> Confluence<'a> {
    fn new(p: &'a AlgebraPresentation) -> Self {
        Confluence { p, memo: HashMap::new(), violations: Vec::new() }
    }

    fn alphabet(&self) -> Vec<Letter> {
        let mut out = Vec::new();
        for (k, g) in self.p.generators.iter().enumerate() {
            out.push(Letter { gen: k, inv: false });
            if g.laurent {
                out.push(Letter { gen: k, inv: true });
            }
        }
        out
    }

    fn format_word(&self, w: &[Letter]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.iter()
            .map(|l| {
                let n = &self.p.generators[l.gen].name;
                if l.inv {
                    format!("{n}^-1")
                } else {
                    n.clone()
                }
            })
            .collect::<Vec<_>>()
            .join("·")
    }

    fn letters_of(&self, m: &Monomial) -> Word {
        let mut w = Vec::new();
        for (k, &e) in m.0.iter().enumerate() {
            for _ in 0..e.unsigned_abs() {
                w.push(Letter { gen: k, inv: e < 0 });
            }
        }
        w
    }

    /// Reducible sites as (start, length).
    fn sites(&self, w: &[Letter]) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..w.len() {
            if i + 1 < w.len() {
                let (x, y) = (w[i], w[i + 1]);
                if x.gen > y.gen || (x.gen == y.gen && x.inv != y.inv) {
                    out.push((i, 2));
                }
            }
            if let Some(p) = &self.p.generators[w[i].gen].power {
                let a = p.exponent as usize;
                if i + a <= w.len() && w[i..i + a].iter().all(|l| *l == w[i]) {
                    out.push((i, a));
                }
            }
        }
        out
    }

    /// Applies the rule at a site, returning a combination of words.
    fn apply(&self, w: &[Letter], (i, len): (usize, usize)) -> Vec<(Word, Scalar)> {
        let splice = |mid: &[Letter]| {
            let mut v = w[..i].to_vec();
            v.extend_from_slice(mid);
            v.extend_from_slice(&w[i + len..]);
            v
        };
        let (x, y) = (w[i], *w.get(i + 1).unwrap_or(&w[i]));
        if len == 2 && x.gen == y.gen && x.inv != y.inv {
            return vec![(splice(&[]), Scalar::one())];
        }
        if len == 2 && x.gen > y.gen {
            let rule = self.p.swaps.get(&(x.gen, y.gen));
            let s = rule.map_or_else(Scalar::one, |r| r.scalar.clone());
            let sign = if x.inv == y.inv { 1 } else { -1 };
            let mut out = vec![(splice(&[y, x]), pow(&s, sign))];
            if let Some(r) = rule {
                for (m, c) in r.corrections.iter() {
                    out.push((splice(&self.letters_of(m)), c.clone()));
                }
            }
            return out;
        }
        let p = self.p.generators[x.gen].power.as_ref().expect("power site");
        if p.value.is_zero() {
            Vec::new()
        } else {
            vec![(splice(&[]), p.value.clone())]
        }
    }

    fn checked_apply(&mut self, w: &[Letter], site: (usize, usize)) -> Option<Vec<(Word, Scalar)>> {
        let out = self.apply(w, site);
        let before = measure(w);
        for (v, _) in &out {
            if measure(v) >= before {
                self.violations.push(format!("{} -> {}", self.format_word(w), self.format_word(v)));
                return None;
            }
        }
        Some(out)
    }

    fn word_monomial(&self, w: &[Letter]) -> Monomial {
        let mut m = self.p.one();
        for l in w {
            m.0[l.gen] += if l.inv { -1 } else { 1 };
        }
        m
    }

    fn engine_normal_form(&self, w: &[Letter]) -> Element {
        let word: Vec<(usize, i32)> = w.iter().map(|l| (l.gen, if l.inv { -1 } else { 1 })).collect();
        self.p.normal_form(&word).expect("letters respect Laurent flags")
    }

    /// Full reduction with the leftmost strategy.
    fn reduce(&mut self, w: &[Letter]) -> Element {
        if let Some(e) = self.memo.get(w) {
            return e.clone();
        }
        let sites = self.sites(w);
        let result = match sites.first() {
            None => Element::from_monomial(self.word_monomial(w)),
            Some(&site) => self.reduce_after(w, site),
        };
        self.memo.insert(w.to_vec(), result.clone());
        result
    }

    fn reduce_after(&mut self, w: &[Letter], site: (usize, usize)) -> Element {
        match self.checked_apply(w, site) {
            None => self.engine_normal_form(w),
            Some(terms) => {
                let mut out = Element::zero();
                for (v, c) in terms {
                    let r = self.reduce(&v);
                    out.add_scaled(&r, &c);
                }
                out
            }
        }
    }

    fn run(mut self, bound: usize) -> ConfluenceReport {
        let alphabet = self.alphabet();
        let mut report = ConfluenceReport {
            bound,
            words_checked: 0,
            ambiguous_words: 0,
            failures: Vec::new(),
            measure_violations: Vec::new(),
        };
        let mut layer: Vec<Word> = vec![Vec::new()];
        for _ in 0..bound {
            let mut next = Vec::with_capacity(layer.len() * alphabet.len());
            for w in &layer {
                for &l in &alphabet {
                    let mut v = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
            for w in &next {
                report.words_checked += 1;
                let sites = self.sites(w);
                if sites.len() >= 2 {
                    report.ambiguous_words += 1;
                }
                let mut forms: Vec<Element> = Vec::new();
                for &site in &sites {
                    let r = self.reduce_after(w, site);
                    if !forms.contains(&r) {
                        forms.push(r);
                    }
                }
                let engine = self.engine_normal_form(w);
                if !forms.is_empty() && !forms.contains(&engine) {
                    forms.push(engine);
                }
                if forms.len() > 1 {
                    report.failures.push(ConfluenceFailure {
                        word: self.format_word(w),
                        normal_forms: forms.iter().map(|e| self.p.format_element(e)).collect(),
                    });
                }
            }
            layer = next;
        }
        report.measure_violations = self.violations;
        report.measure_violations.sort();
        report.measure_violations.dedup();
        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, ratio};

    fn qplane(q: Scalar) -> AlgebraPresentation {
        let mut p = AlgebraPresentation::new("qplane", 2);
        p.add_generator(Generator::new("x", vec![1, 0])).unwrap();
        p.add_generator(Generator::new("y", vec![0, 1])).unwrap();
        p.set_swap("y", "x", SwapRule::scaling(q)).unwrap();
        p
    }

    fn t2() -> AlgebraPresentation {
        let mut p = AlgebraPresentation::new("T_2", 1);
        p.add_generator(Generator::new("x", vec![1]).truncated(2)).unwrap();
        p
    }

    #[test]
    fn quantum_plane_swap() {
        let p = qplane(int(2));
        let e = p.normal_form_named(&[("y", 1), ("x", 1)]).unwrap();
        assert_eq!(e, Element::term(p.monomial(&[("x", 1), ("y", 1)]).unwrap(), int(2)));
        let xy = Element::from_monomial(p.monomial(&[("x", 1), ("y", 1)]).unwrap());
        let x = Element::from_monomial(p.monomial(&[("x", 1)]).unwrap());
        let expected = Element::term(p.monomial(&[("x", 2), ("y", 1)]).unwrap(), int(2));
        assert_eq!(p.multiply(&xy, &x), expected);
    }

    #[test]
    fn truncation_kills() {
        let p = t2();
        assert!(p.normal_form_named(&[("x", 1), ("x", 1)]).unwrap().is_zero());
    }

    #[test]
    fn negative_exponent_rejected() {
        let p = qplane(int(2));
        assert_eq!(p.normal_form_named(&[("x", -1)]), Err(Error::NegativeExponent("x".into())));
    }

    #[test]
    fn laurent_inverse_scaling() {
        let mut p = AlgebraPresentation::new("qtorus", 2);
        p.add_generator(Generator::new("x", vec![1, 0]).laurent()).unwrap();
        p.add_generator(Generator::new("y", vec![0, 1]).laurent()).unwrap();
        p.set_swap("y", "x", SwapRule::scaling(int(3))).unwrap();
        // y^-1 x = 3^-1 x y^-1
        let e = p.normal_form_named(&[("y", -1), ("x", 1)]).unwrap();
        assert_eq!(e, Element::term(p.monomial(&[("x", 1), ("y", -1)]).unwrap(), ratio(1, 3)));
        let one = p.normal_form_named(&[("y", 2), ("x", -1), ("y", -2), ("x", 1)]).unwrap();
        assert_eq!(one, Element::term(p.one(), ratio(1, 9)));
        assert!(p.check_confluence(3).passed());
    }

    #[test]
    fn power_rule_folds() {
        let mut p = AlgebraPresentation::new("Z3", 1);
        p.add_generator(Generator::new("g", vec![0]).with_power(3, int(1))).unwrap();
        let e = p.normal_form_named(&[("g", 2), ("g", 2)]).unwrap();
        assert_eq!(e, Element::from_monomial(p.monomial(&[("g", 1)]).unwrap()));
        assert_eq!(p.full_basis().unwrap().len(), 3);
        assert!(p.basis_of_degree(&Multidegree(vec![0])).unwrap().len() == 3);
    }

    #[test]
    fn bases() {
        let mut s = AlgebraPresentation::new("S2", 2);
        s.add_generator(Generator::new("x1", vec![1, 0])).unwrap();
        s.add_generator(Generator::new("x2", vec![0, 1])).unwrap();
        let total: usize = (0..=2)
            .map(|i| s.basis_of_degree(&Multidegree(vec![i, 2 - i])).unwrap().len())
            .sum();
        assert_eq!(total, 3);
        assert_eq!(s.monomials_up_to(2).unwrap().len(), 6);
    }

    #[test]
    fn laurent_without_private_axis_is_infinite() {
        let mut p = AlgebraPresentation::new("bad", 1);
        p.add_generator(Generator::new("x", vec![1])).unwrap();
        p.add_generator(Generator::new("y", vec![1]).laurent()).unwrap();
        assert!(matches!(p.basis_of_degree(&Multidegree(vec![1])), Err(Error::InfiniteBasis(_))));
    }

    #[test]
    fn inhomogeneous_correction_rejected() {
        let mut p = AlgebraPresentation::new("bad", 2);
        p.add_generator(Generator::new("x", vec![1, 0])).unwrap();
        p.add_generator(Generator::new("y", vec![0, 1])).unwrap();
        let corr = Element::from_monomial(p.one());
        let err = p.set_swap("y", "x", SwapRule { scalar: int(1), corrections: corr }).unwrap_err();
        assert!(matches!(err, Error::Inhomogeneous(_)));
    }

    #[test]
    fn confluence_simple() {
        let r = qplane(int(2)).check_confluence(4);
        assert!(r.passed());
        assert!(r.ambiguous_words > 0);
        assert!(t2().check_confluence(4).passed());
    }

    #[test]
    fn parse_word_forms() {
        let p = qplane(int(2));
        assert_eq!(p.parse_word("y x^2").unwrap(), vec![(1, 1), (0, 2)]);
        assert_eq!(p.parse_word("1").unwrap(), vec![]);
        assert!(p.parse_word("z").is_err());
    }
}
