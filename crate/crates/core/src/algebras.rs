//! Constructors for the example algebras and their smash decompositions.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::hochschild::Bimodule;
use crate::linalg::{int, pow, Scalar};
use crate::pbw::{AlgebraPresentation, Element, Generator, Monomial, SwapRule};
use crate::twist::{build_smash, invert_law, DistributiveLaw, OreData};

/// A smash biproduct `A #_R B` together with its factors.
#[derive(Clone, Debug)]
pub struct SmashCase {
    pub a: AlgebraPresentation,
    pub b: AlgebraPresentation,
    pub law: DistributiveLaw,
    pub smash: AlgebraPresentation,
}

impl SmashCase {
    /// Builds the smash and, when possible, the inverse law.
    pub fn new(law: DistributiveLaw) -> Result<Self> {
        let smash = build_smash(&law)?;
        let law = match invert_law(&law) {
            Ok(l) => l,
            Err(Error::Unsupported(_)) => law,
            Err(e) => return Err(e),
        };
        Ok(SmashCase { a: law.source_a.clone(), b: law.source_b.clone(), law, smash })
    }

    pub fn na(&self) -> usize {
        self.a.num_generators()
    }

    /// Positions of the A-generators inside the smash.
    pub fn embed_a(&self) -> Vec<usize> {
        (0..self.na()).collect()
    }

    /// Positions of the B-generators inside the smash.
    pub fn embed_b(&self) -> Vec<usize> {
        (self.na()..self.smash.num_generators()).collect()
    }

    /// The regular bimodule of the smash, viewed over A.
    pub fn regular_over_a(&self) -> Bimodule {
        Bimodule::restricted(&self.smash, self.embed_a())
    }
}

fn polynomial(name: &str, axes: usize, axis: usize) -> Generator {
    let mut d = vec![0; axes];
    d[axis] = 1;
    Generator::new(name, d)
}

fn one_generator(g: Generator, axes: usize) -> Result<AlgebraPresentation> {
    let label = if g.laurent {
        format!("k[{0},{0}^-1]", g.name)
    } else if let Some(p) = &g.power {
        if p.value.is_zero() {
            format!("k[{}]/({}^{})", g.name, g.name, p.exponent)
        } else {
            format!("k[{}]/({}^{}={})", g.name, g.name, p.exponent, p.value)
        }
    } else {
        format!("k[{}]", g.name)
    };
    let mut p = AlgebraPresentation::new(&label, axes);
    p.add_generator(g)?;
    Ok(p)
}

/// `T_a = k[x]/(x^a)` graded by the power of x.
pub fn truncated(a: u32) -> Result<AlgebraPresentation> {
    if a == 0 {
        return Err(Error::InvalidSpec("truncation exponent must be positive".into()));
    }
    let mut p = one_generator(Generator::new("x", vec![1]).truncated(a), 1)?;
    p.name = format!("T_{a}");
    Ok(p)
}

fn check_q(q: &Scalar) -> Result<()> {
    if crate::linalg::is_unit_modulus(q) || q.is_zero() {
        return Err(Error::InvalidSpec(format!("q = {q} must satisfy q ≠ 0 and |q| ≠ 1")));
    }
    Ok(())
}

/// Two one-generator algebras in x and y with `R(y⊗x) = q x⊗y`.
fn two_variable(x: Generator, y: Generator, q: &Scalar) -> Result<SmashCase> {
    let a = one_generator(x, 2)?;
    let b = one_generator(y, 2)?;
    let mut law = DistributiveLaw::new(a, b)?;
    law.set_scaling("y", "x", q.clone())?;
    SmashCase::new(law)
}

/// `C_{a,b} = T_a #_R T_b` with `yx = q xy`.
pub fn cqi(a: u32, b: u32, q: &Scalar) -> Result<SmashCase> {
    check_q(q)?;
    if a < 2 || b < 2 {
        return Err(Error::InvalidSpec("C_{a,b} needs a, b ≥ 2".into()));
    }
    two_variable(polynomial("x", 2, 0).truncated(a), polynomial("y", 2, 1).truncated(b), q)
}

/// Quantum plane `k[x] #_R k[y]`.
pub fn qplane(q: &Scalar) -> Result<SmashCase> {
    check_q(q)?;
    two_variable(polynomial("x", 2, 0), polynomial("y", 2, 1), q)
}

/// Quantum cylinder `k[x] #_R k[y, y^{-1}]`.
pub fn qcylinder(q: &Scalar) -> Result<SmashCase> {
    check_q(q)?;
    two_variable(polynomial("x", 2, 0), polynomial("y", 2, 1).laurent(), q)
}

/// Quantum torus `k[x, x^{-1}] #_R k[y, y^{-1}]`.
pub fn qtorus(q: &Scalar) -> Result<SmashCase> {
    check_q(q)?;
    two_variable(polynomial("x", 2, 0).laurent(), polynomial("y", 2, 1).laurent(), q)
}

/// The first `count` primes.
pub fn default_primes(count: usize) -> Vec<Scalar> {
    let mut out = Vec::new();
    let mut n = 2i64;
    while out.len() < count {
        if (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0) {
            out.push(int(n));
        }
        n += 1;
    }
    out
}

/// Parameters `q_{i,j}` (`i < j`, 1-based) in the order (1,2), (1,3), …, (2,3), …
pub fn lambda_index(nu: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j <= nu);
    let mut k = 0;
    for r in 1..i {
        k += nu - r;
    }
    k + (j - i - 1)
}

/// `q_{i,j}` for any ordered pair of 1-based indices, with `q_{j,i} = q_{i,j}^{-1}`.
pub fn lambda_entry(nu: usize, lambda: &[Scalar], i: usize, j: usize) -> Scalar {
    match i.cmp(&j) {
        std::cmp::Ordering::Equal => Scalar::one(),
        std::cmp::Ordering::Less => lambda[lambda_index(nu, i, j)].clone(),
        std::cmp::Ordering::Greater => lambda[lambda_index(nu, j, i)].recip(),
    }
}

/// Checks that no relation `∏ q_{i,j}^{e_{ij}} = 1` with `0 < max |e| ≤ bound`
/// holds among the parameters, so they behave like free generators on the
/// exponents a run can reach.
pub fn check_lambda_free(lambda: &[Scalar], bound: i64) -> Result<()> {
    let mut e = vec![-bound; lambda.len()];
    loop {
        if e.iter().any(|&x| x != 0) {
            let prod = e.iter().zip(lambda).fold(Scalar::one(), |acc, (&k, q)| acc * pow(q, k));
            if prod.is_one() {
                return Err(Error::InvalidSpec(format!("the parameters satisfy a relation with exponents {e:?}")));
            }
        }
        let mut k = 0;
        while k < e.len() && e[k] == bound {
            e[k] = -bound;
            k += 1;
        }
        if k == e.len() {
            return Ok(());
        }
        e[k] += 1;
    }
}

/// `S(X_ν, Λ)` with `x_j x_i = q_{i,j} x_i x_j`, one axis per variable.
pub fn multiparam_presentation(nu: usize, lambda: &[Scalar]) -> Result<AlgebraPresentation> {
    if nu == 0 || lambda.len() != nu * (nu - 1) / 2 {
        return Err(Error::InvalidSpec(format!("ν = {nu} needs {} parameters", nu * nu.saturating_sub(1) / 2)));
    }
    for q in lambda {
        check_q(q)?;
    }
    let mut p = AlgebraPresentation::new(&format!("S(X_{nu})"), nu);
    for k in 0..nu {
        p.add_generator(polynomial(&format!("x{}", k + 1), nu, k))?;
    }
    for j in 2..=nu {
        for i in 1..j {
            p.set_swap(
                &format!("x{j}"),
                &format!("x{i}"),
                SwapRule::scaling(lambda_entry(nu, lambda, i, j)),
            )?;
        }
    }
    Ok(p)
}

/// `S(X_ν) = S(X_{ν−1}) #_R k[x_ν]`.
pub fn multiparam(nu: usize, lambda: &[Scalar]) -> Result<SmashCase> {
    if nu < 2 {
        return Err(Error::InvalidSpec("the smash decomposition needs ν ≥ 2".into()));
    }
    let full = multiparam_presentation(nu, lambda)?;
    let sub_lambda: Vec<Scalar> = (1..nu - 1)
        .flat_map(|i| ((i + 1)..nu).map(move |j| (i, j)))
        .map(|(i, j)| lambda_entry(nu, lambda, i, j))
        .collect();
    let mut a = multiparam_presentation(nu - 1, &sub_lambda)?;
    // same number of axes as the full algebra
    let mut a_full = AlgebraPresentation::new(&a.name, nu);
    for g in a.generators() {
        let mut d = g.degree.0.clone();
        d.push(0);
        a_full.add_generator(Generator::new(&g.name, d))?;
    }
    for (&(j, i), rule) in a.swaps() {
        let names = (a.generators()[j].name.clone(), a.generators()[i].name.clone());
        a_full.set_swap(&names.0, &names.1, rule.clone())?;
    }
    a = a_full;
    let xn = format!("x{nu}");
    let b = one_generator(polynomial(&xn, nu, nu - 1), nu)?;
    let mut law = DistributiveLaw::new(a, b)?;
    for i in 1..nu {
        law.set_scaling(&xn, &format!("x{i}"), lambda_entry(nu, lambda, i, nu))?;
    }
    let case = SmashCase::new(law)?;
    debug_assert_eq!(case.smash.swaps().len(), full.swaps().len());
    Ok(case)
}

/// Multidegree of each M_q(2) generator on the fine grading (row, column).
pub const MQ2_DEGREES: [[i64; 4]; 4] = [[1, 0, 1, 0], [1, 0, 0, 1], [0, 1, 1, 0], [0, 1, 0, 1]];

/// The Ore tower `A_1 ⊂ A_2 ⊂ A_3` and the datum of the last step
/// `M_q(2) = A_3[d, α_3, δ]`.
pub struct Mq2Tower {
    pub a1: AlgebraPresentation,
    pub a2: AlgebraPresentation,
    pub a3: AlgebraPresentation,
    pub last: OreData,
}

/// Builds the tower, with α_1(a) = qa; α_2(a) = qa, α_2(b) = b;
/// α_3(a) = a, α_3(b) = qb, α_3(c) = qc; δ(a) = (q − q⁻¹)bc.
pub fn mq2_tower(q: &Scalar) -> Result<Mq2Tower> {
    check_q(q)?;
    let g = |k: usize, name: &str| Generator::new(name, MQ2_DEGREES[k].to_vec());
    let mut a1 = AlgebraPresentation::new("A_1", 4);
    a1.add_generator(g(0, "a"))?;
    let step = |base: &AlgebraPresentation, scalars: &[Scalar], var: Generator, name: &str| -> Result<AlgebraPresentation> {
        let law = OreData::diagonal(base.clone(), scalars).to_law(var)?;
        let mut p = build_smash(&law)?;
        p.name = name.into();
        Ok(p)
    };
    let a2 = step(&a1, &[q.clone()], g(1, "b"), "A_2")?;
    let a3 = step(&a2, &[q.clone(), int(1)], g(2, "c"), "A_3")?;
    let mut last = OreData::diagonal(a3.clone(), &[int(1), q.clone(), q.clone()]);
    let bc = a3.monomial(&[("b", 1), ("c", 1)])?;
    last.delta[0] = Element::term(bc, q - q.recip());
    Ok(Mq2Tower { a1, a2, a3, last })
}

/// `M_q(2) = A_3 #_R k[d]`.
pub fn mq2(q: &Scalar) -> Result<SmashCase> {
    let tower = mq2_tower(q)?;
    let law = tower.last.to_law(Generator::new("d", MQ2_DEGREES[3].to_vec()))?;
    let mut case = SmashCase::new(law)?;
    case.smash.name = "M_q(2)".into();
    Ok(case)
}

/// The quantum determinant `ad − q⁻¹bc`.
pub fn quantum_determinant(p: &AlgebraPresentation, q: &Scalar) -> Result<Element> {
    let ad = p.normal_form_named(&[("a", 1), ("d", 1)])?;
    let bc = p.normal_form_named(&[("b", 1), ("c", 1)])?;
    Ok(ad.sub(&bc.scale(&q.recip())))
}

/// Total degree of an M_q(2) fine multidegree.
pub fn mq2_total_degree(d: &[i64]) -> i64 {
    d.iter().sum::<i64>() / 2
}

/// The closed forms for commuting powers of d past a, as
/// `(coefficient of a·dⁿ, coefficient of bc·dⁿ⁻¹)` in `dⁿ·a` and
/// `(coefficient of aⁿ·d, coefficient of aⁿ⁻¹bc)` in `d·aⁿ`.
pub fn ad_commutation_closed_form(q: &Scalar, n: i64) -> (Scalar, Scalar) {
    (Scalar::one(), pow(q, 2 * n - 1) - q.recip())
}

/// `K = k[s]/(s² = t)` with `G = {1, g}` acting by `s ↦ −s`, all in degree 0.
pub fn galois_quadratic(t: &Scalar) -> Result<SmashCase> {
    if t.is_zero() {
        return Err(Error::InvalidSpec("t must be nonzero".into()));
    }
    let mut k = one_generator(Generator::new("s", vec![0]).with_power(2, t.clone()), 1)?;
    k.name = format!("K(√{t})");
    let mut g = one_generator(Generator::new("g", vec![0]).with_power(2, int(1)), 1)?;
    g.name = "k[Z/2]".into();
    let mut law = DistributiveLaw::new(k, g)?;
    law.set_scaling("g", "s", int(-1))?;
    SmashCase::new(law)
}

/// `k[Z/2] #_R k[x, x^{-1}]` with `R(x^n ⊗ g) = σ(g)^n g ⊗ x^n` and σ the sign character.
pub fn group_ring_character() -> Result<SmashCase> {
    let mut a = one_generator(Generator::new("g", vec![0]).with_power(2, int(1)), 1)?;
    a.name = "k[Z/2]".into();
    let b = one_generator(Generator::new("x", vec![1]).laurent(), 1)?;
    let mut law = DistributiveLaw::new(a, b)?;
    law.set_scaling("x", "g", int(-1))?;
    SmashCase::new(law)
}

/// `T_a # k[Z/n]` with the generator acting by `x ↦ ζ x`; over ℚ only
/// `ζ = ±1` is available, so `n ∈ {1, 2}` with the sign action for n = 2.
pub fn smash_finite(a: u32, order: u32) -> Result<SmashCase> {
    let mut t = truncated(a)?;
    t.name = format!("T_{a}");
    let (name, s) = match order {
        1 => ("k", int(1)),
        2 => ("k[Z/2]", int(-1)),
        _ => return Err(Error::Unsupported("only Z/1 and Z/2 act over the rationals".into())),
    };
    if order == 1 {
        let trivial = AlgebraPresentation::new(name, 1);
        return SmashCase::new(DistributiveLaw::new(t, trivial)?);
    }
    let mut g = one_generator(Generator::new("g", vec![0]).with_power(order, int(1)), 1)?;
    g.name = name.into();
    let mut law = DistributiveLaw::new(t, g)?;
    law.set_scaling("g", "x", s)?;
    SmashCase::new(law)
}

/// Monomials of `p` of total degree exactly `t` (Laurent exponents excluded).
pub fn monomials_of_total(p: &AlgebraPresentation, t: i64) -> Result<Vec<Monomial>> {
    Ok(p.monomials_up_to(t)?.into_iter().filter(|m| p.degree_of(m).total() == t).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ratio;

    #[test]
    fn lambda_relations() {
        assert!(check_lambda_free(&default_primes(3), 4).is_ok());
        assert!(check_lambda_free(&[int(2), int(4)], 2).is_err());
        assert!(check_lambda_free(&[int(2), ratio(1, 2)], 1).is_err());
    }

    #[test]
    fn mq2_relations() {
        let q = int(2);
        let c = mq2(&q).unwrap();
        let p = &c.smash;
        assert_eq!(p.num_generators(), 4);
        assert_eq!(p.swaps().len(), 6);
        assert_eq!(p.swaps().values().filter(|r| !r.corrections.is_zero()).count(), 1);
        let da = p.normal_form_named(&[("d", 1), ("a", 1)]).unwrap();
        let ad = p.normal_form_named(&[("a", 1), ("d", 1)]).unwrap();
        let bc = p.normal_form_named(&[("b", 1), ("c", 1)]).unwrap();
        assert_eq!(da, ad.plus(&bc.scale(&(int(2) - ratio(1, 2)))));
        assert_eq!(p.normal_form_named(&[("b", 1), ("a", 1)]).unwrap(), p.normal_form_named(&[("a", 1), ("b", 1)]).unwrap().scale(&q));
        assert_eq!(p.normal_form_named(&[("c", 1), ("b", 1)]).unwrap(), bc);
        assert!(p.check_confluence(3).passed());
    }

    #[test]
    fn quantum_determinant_is_central() {
        let q = int(2);
        let p = mq2(&q).unwrap().smash;
        let dq = quantum_determinant(&p, &q).unwrap();
        for name in ["a", "b", "c", "d"] {
            let g = Element::from_monomial(p.monomial(&[(name, 1)]).unwrap());
            assert_eq!(p.multiply(&dq, &g), p.multiply(&g, &dq), "D_q does not commute with {name}");
        }
    }

    #[test]
    fn flipped_correction_sign_stays_confluent() {
        // any multiple of the bc correction is again an α-derivation
        let q = int(2);
        let mut p = mq2(&q).unwrap().smash;
        let bc = p.monomial(&[("b", 1), ("c", 1)]).unwrap();
        let flipped = SwapRule { scalar: int(1), corrections: Element::term(bc, q.recip() - &q) };
        p.set_swap("d", "a", flipped).unwrap();
        assert!(p.check_confluence(3).passed());
    }

    #[test]
    fn corrupted_db_scalar_breaks_confluence() {
        let q = int(2);
        let mut p = mq2(&q).unwrap().smash;
        p.set_swap("d", "b", SwapRule::scaling(int(3))).unwrap();
        let rep = p.check_confluence(3);
        assert!(!rep.passed());
        assert_eq!(rep.witness(), Some("d·b·a"));
    }

    #[test]
    fn power_commutation_closed_form() {
        let q = int(2);
        let p = mq2(&q).unwrap().smash;
        for n in 1..=4 {
            let lhs = p.normal_form_named(&[("d", n as i32), ("a", 1)]).unwrap();
            let (lead, corr) = ad_commutation_closed_form(&q, n);
            let mut rhs = p.normal_form_named(&[("a", 1), ("d", n as i32)]).unwrap().scale(&lead);
            rhs.add_scaled(&p.normal_form_named(&[("b", 1), ("c", 1), ("d", n as i32 - 1)]).unwrap(), &corr);
            assert_eq!(lhs, rhs, "n = {n}");
            let lhs = p.normal_form_named(&[("d", 1), ("a", n as i32)]).unwrap();
            let mut rhs = p.normal_form_named(&[("a", n as i32), ("d", 1)]).unwrap().scale(&lead);
            rhs.add_scaled(&p.normal_form_named(&[("a", n as i32 - 1), ("b", 1), ("c", 1)]).unwrap(), &corr);
            assert_eq!(lhs, rhs, "n = {n}");
        }
    }

    #[test]
    fn catalog_sizes() {
        let c = cqi(2, 2, &int(2)).unwrap();
        assert_eq!(c.smash.full_basis().unwrap().len(), 4);
        let g = galois_quadratic(&int(2)).unwrap();
        assert_eq!(g.smash.full_basis().unwrap().len(), 4);
        let s = smash_finite(2, 2).unwrap();
        assert_eq!(s.smash.full_basis().unwrap().len(), 4);
        let m = multiparam(3, &default_primes(3)).unwrap();
        let x2 = m.smash.index_of("x2").unwrap();
        let x3 = m.smash.index_of("x3").unwrap();
        assert_eq!(m.smash.swap(x3, x2).unwrap().scalar, int(5));
        assert_eq!(default_primes(3), vec![int(2), int(3), int(5)]);
        assert!(qtorus(&int(2)).is_ok());
        assert!(qplane(&int(1)).is_err());
    }
}
