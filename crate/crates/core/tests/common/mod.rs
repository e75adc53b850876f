#![allow(dead_code)]

use smash_core::algebras::{self, SmashCase};
use smash_core::hochschild::{Bimodule, ChainComplexSpec, Window};
use smash_core::linalg::{int, ratio};
use smash_core::pbw::{AlgebraPresentation, Element, Monomial};

pub fn catalog_cases() -> Vec<SmashCase> {
    let q = int(2);
    vec![
        algebras::cqi(2, 2, &q).unwrap(),
        algebras::cqi(3, 2, &ratio(1, 3)).unwrap(),
        algebras::qplane(&q).unwrap(),
        algebras::qcylinder(&q).unwrap(),
        algebras::qtorus(&q).unwrap(),
        algebras::multiparam(2, &algebras::default_primes(1)).unwrap(),
        algebras::multiparam(3, &algebras::default_primes(3)).unwrap(),
        algebras::mq2(&q).unwrap(),
        algebras::mq2(&ratio(-3, 2)).unwrap(),
        algebras::galois_quadratic(&int(2)).unwrap(),
        algebras::group_ring_character().unwrap(),
        algebras::smash_finite(2, 2).unwrap(),
        algebras::smash_finite(3, 1).unwrap(),
    ]
}

pub fn catalog_presentations() -> Vec<AlgebraPresentation> {
    let mut out: Vec<AlgebraPresentation> = (2..=4).map(|a| algebras::truncated(a).unwrap()).collect();
    for c in catalog_cases() {
        out.push(c.a.clone());
        out.push(c.b.clone());
        out.push(c.smash.clone());
    }
    out
}

/// Letters `(generator, ±1)`, with inverses only for Laurent generators.
pub fn letters(p: &AlgebraPresentation) -> Vec<(usize, i32)> {
    let mut out = Vec::new();
    for (k, g) in p.generators().iter().enumerate() {
        out.push((k, 1));
        if g.laurent {
            out.push((k, -1));
        }
    }
    out
}

pub fn words(p: &AlgebraPresentation, max_len: usize) -> Vec<Vec<(usize, i32)>> {
    let ls = letters(p);
    let mut all = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &l in &ls {
                let mut w2: Vec<(usize, i32)> = w.clone();
                w2.push(l);
                next.push(w2);
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    all
}

pub fn mono_word(m: &Monomial) -> Vec<(usize, i32)> {
    m.0.iter().enumerate().filter(|(_, &e)| e != 0).map(|(k, &e)| (k, e)).collect()
}

/// Normal monomials reachable from words of length at most `len`.
pub fn reachable(p: &AlgebraPresentation, len: usize) -> Vec<Monomial> {
    let mut out: Vec<Monomial> = words(p, len)
        .iter()
        .flat_map(|w| p.normal_form(w).unwrap().iter().map(|(m, _)| m.clone()).collect::<Vec<_>>())
        .collect();
    out.sort();
    out.dedup();
    out
}

pub fn length(m: &Monomial) -> i32 {
    m.0.iter().map(|e| e.abs()).sum()
}


/// Normal forms are fixed points of rewriting on words of length ≤ 4.
pub fn check_idempotence(p: &AlgebraPresentation) -> Result<usize, String> {
    let mut checked = 0;
    for w in words(p, 4) {
        for (m, _) in p.normal_form(&w).map_err(|e| e.to_string())?.iter() {
            if p.normal_form(&mono_word(m)).map_err(|e| e.to_string())? != Element::from_monomial(m.clone()) {
                return Err(format!("{}: {m:?} from {w:?}", p.name));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// `(m1 m2) m3 = m1 (m2 m3)` for normal monomials of combined length ≤ 4.
pub fn check_associativity(p: &AlgebraPresentation) -> Result<usize, String> {
    let monos = reachable(p, 4);
    let mut checked = 0;
    for m1 in &monos {
        for m2 in &monos {
            if length(m1) + length(m2) > 4 {
                continue;
            }
            let m12 = p.mul_mono(m1, m2);
            for m3 in &monos {
                if length(m1) + length(m2) + length(m3) > 4 {
                    continue;
                }
                let left = p.multiply(&m12, &Element::from_monomial(m3.clone()));
                let right = p.multiply(&Element::from_monomial(m1.clone()), &p.mul_mono(m2, m3));
                if left != right {
                    return Err(format!("{}: {m1:?} {m2:?} {m3:?}", p.name));
                }
                checked += 1;
            }
        }
    }
    Ok(checked)
}

/// `b ∘ b = 0` on consecutive blocks of every finite catalog complex; returns
/// the number of block pairs checked.
pub fn check_boundary_squares() -> Result<usize, String> {
    let mut specs: Vec<(AlgebraPresentation, Window, usize)> =
        (2..=4).map(|a| (algebras::truncated(a).unwrap(), Window::All, 4)).collect();
    for c in catalog_cases() {
        if c.smash.is_laurent() {
            continue;
        }
        let window = if c.smash.full_basis().is_ok() { Window::All } else { Window::Total(3) };
        specs.push((c.smash.clone(), window, 3));
    }
    let mut pairs = 0;
    for (alg, window, top) in specs {
        let v = Bimodule::regular(&alg);
        let spec = ChainComplexSpec::hochschild(&alg, &v);
        for d in window.degrees(&spec, top).map_err(|e| e.to_string())? {
            let blocks: Vec<_> = (0..=top).map(|n| spec.chain_block(n, &d).unwrap()).collect();
            for n in 2..=top {
                let b1 = spec.boundary_matrix(&blocks[n - 1], &blocks[n - 2]).map_err(|e| e.to_string())?;
                let b2 = spec.boundary_matrix(&blocks[n], &blocks[n - 1]).map_err(|e| e.to_string())?;
                if !b1.mul(&b2).map_err(|e| e.to_string())?.is_zero() {
                    return Err(format!("{} at n = {n}, degree {d}", alg.name));
                }
                pairs += 1;
            }
        }
    }
    Ok(pairs)
}
