//! Exact sparse linear algebra over the rationals.
//!
//! Matrices are stored column-major as sorted sparse vectors. Ranks use a
//! fraction-free integer elimination (each vector is scaled to a primitive
//! integer vector and kept primitive by content extraction); kernels and
//! subquotients use an echelon basis over `BigRational` that tracks how
//! every reduced vector was produced from the inserted ones.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar. Always kept in lowest terms with a positive
/// denominator by `num-rational`.
pub type Scalar = BigRational;

/// Integer-valued scalar.
pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

/// The rational `num/den`. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

/// `base^exp` for any integer exponent (negative powers invert).
pub fn pow(base: &Scalar, exp: i64) -> Scalar {
    if exp >= 0 {
        num_traits::pow(base.clone(), exp as usize)
    } else {
        num_traits::pow(base.recip(), exp.unsigned_abs() as usize)
    }
}

/// Parses `"num/den"` or a plain integer.
pub fn parse_scalar(s: &str) -> Result<Scalar> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Scalar::new(n, d))
        }
        None => Ok(Scalar::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Serializes as `"num/den"` (denominator always written).
pub fn format_scalar(x: &Scalar) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// A sparse vector: `(index, value)` pairs sorted by index, no zeros.
pub type SparseVec = Vec<(usize, Scalar)>;

fn axpy(y: &SparseVec, alpha: &Scalar, x: &SparseVec) -> SparseVec {
    // y + alpha * x
    let mut out = Vec::with_capacity(y.len() + x.len());
    let (mut i, mut j) = (0, 0);
    while i < y.len() || j < x.len() {
        if j == x.len() || (i < y.len() && y[i].0 < x[j].0) {
            out.push(y[i].clone());
            i += 1;
        } else if i == y.len() || x[j].0 < y[i].0 {
            out.push((x[j].0, alpha * &x[j].1));
            j += 1;
        } else {
            let v = &y[i].1 + alpha * &x[j].1;
            if !v.is_zero() {
                out.push((y[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn normalize(mut v: Vec<(usize, Scalar)>) -> SparseVec {
    v.sort_by_key(|e| e.0);
    let mut out: SparseVec = Vec::with_capacity(v.len());
    for (i, x) in v {
        match out.last_mut() {
            Some(last) if last.0 == i => last.1 += x,
            _ => out.push((i, x)),
        }
    }
    out.retain(|e| !e.1.is_zero());
    out
}

/// Column-major sparse matrix over the rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<SparseVec>,
}

impl fmt::Debug for SparseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparseMatrix({}x{}, nnz={})", self.rows, self.cols, self.nnz())
    }
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, columns: vec![Vec::new(); cols] }
    }

    pub fn identity(n: usize) -> Self {
        let columns = (0..n).map(|i| vec![(i, Scalar::one())]).collect();
        SparseMatrix { rows: n, cols: n, columns }
    }

    /// Builds a matrix from `(row, col, value)` triplets; duplicates are summed
    /// and zeros dropped.
    pub fn from_triplets<I>(rows: usize, cols: usize, entries: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Scalar)>,
    {
        let mut columns: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); cols];
        for (r, c, x) in entries {
            assert!(r < rows && c < cols, "entry ({r},{c}) outside {rows}x{cols}");
            columns[c].push((r, x));
        }
        let columns = columns.into_iter().map(normalize).collect();
        SparseMatrix { rows, cols, columns }
    }

    /// Builds a matrix from unsorted columns.
    pub fn from_columns(rows: usize, columns: Vec<Vec<(usize, Scalar)>>) -> Self {
        let cols = columns.len();
        let columns: Vec<SparseVec> = columns.into_iter().map(normalize).collect();
        for c in &columns {
            if let Some(&(r, _)) = c.last() {
                assert!(r < rows, "row index {r} outside {rows}");
            }
        }
        SparseMatrix { rows, cols, columns }
    }

    /// Dense constructor, mostly for tests.
    pub fn from_dense(rows: &[Vec<Scalar>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let entries = rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().enumerate().map(move |(j, x)| (i, j, x.clone())));
        Self::from_triplets(nrows, ncols, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.columns
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        match self.columns[c].binary_search_by_key(&r, |e| e.0) {
            Ok(k) => self.columns[c][k].1.clone(),
            Err(_) => Scalar::zero(),
        }
    }

    /// All nonzero entries as `(row, col, value)`, column by column.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> + '_ {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, x)| (*r, c, x)))
    }

    pub fn transpose(&self) -> Self {
        let mut columns: Vec<SparseVec> = vec![Vec::new(); self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            for (r, x) in col {
                columns[*r].push((c, x.clone()));
            }
        }
        SparseMatrix { rows: self.cols, cols: self.rows, columns }
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (j, x) in v {
            for (i, y) in &self.columns[*j] {
                *acc.entry(*i).or_insert_with(Scalar::zero) += x * y;
            }
        }
        acc.into_iter().filter(|(_, x)| !x.is_zero()).collect()
    }

    /// `self * other`.
    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let columns = other.columns.iter().map(|c| self.apply(c)).collect();
        Ok(SparseMatrix { rows: self.rows, cols: other.cols, columns })
    }

    pub fn add(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        self.add_scaled(&Scalar::one(), other)
    }

    /// `self + alpha * other`.
    pub fn add_scaled(&self, alpha: &Scalar, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let columns = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(a, b)| axpy(a, alpha, b))
            .collect();
        Ok(SparseMatrix { rows: self.rows, cols: self.cols, columns })
    }

    pub fn scale(&self, alpha: &Scalar) -> SparseMatrix {
        if alpha.is_zero() {
            return SparseMatrix::zero(self.rows, self.cols);
        }
        let columns = self
            .columns
            .iter()
            .map(|c| c.iter().map(|(i, x)| (*i, x * alpha)).collect())
            .collect();
        SparseMatrix { rows: self.rows, cols: self.cols, columns }
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "hstack of {} rows with {} rows",
                self.rows, other.rows
            )));
        }
        let mut columns = self.columns.clone();
        columns.extend(other.columns.iter().cloned());
        Ok(SparseMatrix { rows: self.rows, cols: columns.len(), columns })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_vectors(rows: usize, vectors: &[SparseVec]) -> SparseMatrix {
        SparseMatrix { rows, cols: vectors.len(), columns: vectors.to_vec() }
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        let mut out = vec![vec![Scalar::zero(); self.cols]; self.rows];
        for (r, c, x) in self.entries() {
            out[r][c] = x.clone();
        }
        out
    }
}

/// Which row index an elimination step pivots on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PivotOrder {
    Lowest,
    Highest,
}

type IntVec = Vec<(usize, BigInt)>;

fn primitive(v: &SparseVec) -> IntVec {
    let mut lcm = BigInt::one();
    for (_, x) in v {
        lcm = lcm.lcm(x.denom());
    }
    let mut out: IntVec = v.iter().map(|(i, x)| (*i, (x * &lcm).to_integer())).collect();
    make_primitive(&mut out);
    out
}

fn make_primitive(v: &mut IntVec) {
    let mut g = BigInt::zero();
    for (_, x) in v.iter() {
        g = g.gcd(x);
        if g.is_one() {
            return;
        }
    }
    if !g.is_zero() && !g.is_one() {
        for (_, x) in v.iter_mut() {
            *x /= &g;
        }
    }
}

fn lead(v: &IntVec, order: PivotOrder) -> usize {
    match order {
        PivotOrder::Lowest => v[0].0,
        PivotOrder::Highest => v[v.len() - 1].0,
    }
}

fn coeff_at(v: &IntVec, idx: usize) -> &BigInt {
    let k = v.binary_search_by_key(&idx, |e| e.0).expect("pivot index present");
    &v[k].1
}

// p_lead * v - v_lead * p, divided by the gcd of the multipliers.
fn eliminate(v: &IntVec, p: &IntVec, idx: usize) -> IntVec {
    let a = coeff_at(p, idx);
    let b = coeff_at(v, idx);
    let g = a.gcd(b);
    let (ma, mb) = (a / &g, b / &g);
    let mut out = Vec::with_capacity(v.len() + p.len());
    let (mut i, mut j) = (0, 0);
    while i < v.len() || j < p.len() {
        if j == p.len() || (i < v.len() && v[i].0 < p[j].0) {
            out.push((v[i].0, &ma * &v[i].1));
            i += 1;
        } else if i == v.len() || p[j].0 < v[i].0 {
            out.push((p[j].0, -(&mb * &p[j].1)));
            j += 1;
        } else {
            let x = &ma * &v[i].1 - &mb * &p[j].1;
            if !x.is_zero() {
                out.push((v[i].0, x));
            }
            i += 1;
            j += 1;
        }
    }
    let big = out.iter().any(|(_, x)| x.bits() > 64);
    if big {
        make_primitive(&mut out);
    }
    out
}

/// Exact rank over the rationals.
pub fn rank(m: &SparseMatrix) -> usize {
    rank_with(m, PivotOrder::Lowest)
}

/// Exact rank with an explicit pivot rule. Every pivot rule gives the same
/// number; the option exists so that callers can cross-check.
pub fn rank_with(m: &SparseMatrix, order: PivotOrder) -> usize {
    if m.rows == 0 || m.cols == 0 {
        return 0;
    }
    // Eliminate along the shorter side.
    let owned;
    let vectors: &[SparseVec] = if m.cols <= m.rows {
        &m.columns
    } else {
        owned = m.transpose();
        &owned.columns
    };
    let mut work: Vec<IntVec> = vectors.iter().filter(|v| !v.is_empty()).map(primitive).collect();
    work.sort_by_key(Vec::len);
    let mut pivots: HashMap<usize, IntVec> = HashMap::new();
    for mut v in work {
        loop {
            if v.is_empty() {
                break;
            }
            let idx = lead(&v, order);
            match pivots.get(&idx) {
                Some(p) => v = eliminate(&v, p, idx),
                None => {
                    make_primitive(&mut v);
                    pivots.insert(idx, v);
                    break;
                }
            }
        }
    }
    pivots.len()
}

/// Incremental echelon basis over the rationals that remembers, for every
/// stored vector, its expansion in terms of the vectors inserted so far.
#[derive(Clone, Debug)]
pub struct Echelon {
    dim: usize,
    pivot_of: HashMap<usize, usize>,
    reduced: Vec<SparseVec>,
    combos: Vec<SparseVec>,
    inserted: usize,
}

/// Outcome of inserting a vector into an [`Echelon`].
#[derive(Clone, Debug)]
pub enum Insertion {
    /// The vector was independent and now occupies this basis slot.
    Independent(usize),
    /// The vector was dependent; the payload expresses
    /// `inserted - sum(c_i * earlier_i) = 0` as the combination
    /// `[(earlier index, -c_i)..., (this index, 1)]`.
    Dependent(SparseVec),
}

impl Echelon {
    pub fn new(dim: usize) -> Self {
        Echelon { dim, pivot_of: HashMap::new(), reduced: Vec::new(), combos: Vec::new(), inserted: 0 }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.reduced.len()
    }

    pub fn inserted(&self) -> usize {
        self.inserted
    }

    /// Reduces `v` against the stored basis. Returns the remainder and the
    /// combination `c` (over inserted vectors) with `v = sum c_i u_i + remainder`.
    pub fn reduce(&self, v: &SparseVec) -> (SparseVec, SparseVec) {
        let mut rem = v.clone();
        let mut combo: SparseVec = Vec::new();
        let mut k = 0;
        while k < rem.len() {
            let (idx, ref x) = rem[k];
            if let Some(&slot) = self.pivot_of.get(&idx) {
                let x = x.clone();
                rem = axpy(&rem, &-x.clone(), &self.reduced[slot]);
                combo = axpy(&combo, &x, &self.combos[slot]);
                // rem[k] was cancelled; entries before k unchanged.
            } else {
                k += 1;
            }
        }
        (rem, combo)
    }

    /// Inserts `v`, recording whether it was independent.
    pub fn insert(&mut self, v: &SparseVec) -> Insertion {
        let me = self.inserted;
        self.inserted += 1;
        let (rem, combo) = self.reduce(v);
        if rem.is_empty() {
            let mut dep: SparseVec = combo.into_iter().map(|(i, x)| (i, -x)).collect();
            dep.push((me, Scalar::one()));
            return Insertion::Dependent(dep);
        }
        let (idx, lead) = rem[0].clone();
        let inv = lead.recip();
        let reduced: SparseVec = rem.into_iter().map(|(i, x)| (i, x * &inv)).collect();
        // reduced = inv * (v - combo) in terms of inserted vectors
        let mut own: SparseVec = combo.into_iter().map(|(i, x)| (i, -x * &inv)).collect();
        own.push((me, inv));
        let slot = self.reduced.len();
        self.pivot_of.insert(idx, slot);
        self.reduced.push(reduced);
        self.combos.push(own);
        Insertion::Independent(slot)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).0.is_empty()
    }
}

/// Basis of the null space of `m`.
pub fn kernel(m: &SparseMatrix) -> Vec<SparseVec> {
    let mut ech = Echelon::new(m.rows);
    let mut out = Vec::new();
    for col in &m.columns {
        if let Insertion::Dependent(dep) = ech.insert(col) {
            out.push(dep);
        }
    }
    out
}

/// A basis of the column space of `m`, chosen among its columns.
pub fn column_space(m: &SparseMatrix) -> Vec<SparseVec> {
    let mut ech = Echelon::new(m.rows);
    m.columns
        .iter()
        .filter(|c| matches!(ech.insert(c), Insertion::Independent(_)))
        .cloned()
        .collect()
}

fn check_composable(d_in: &SparseMatrix, d_out: &SparseMatrix) -> Result<()> {
    if d_in.rows != d_out.cols {
        return Err(Error::DimensionMismatch(format!(
            "incoming map lands in dimension {} but outgoing map starts in dimension {}",
            d_in.rows, d_out.cols
        )));
    }
    if d_in.cols > 0 && d_out.rows > 0 && !d_out.mul(d_in)?.is_zero() {
        return Err(Error::NotAComplex("outgoing ∘ incoming is nonzero".into()));
    }
    Ok(())
}

/// Dimension of `ker(d_out) / im(d_in)`.
pub fn homology_dim(d_in: &SparseMatrix, d_out: &SparseMatrix) -> Result<usize> {
    check_composable(d_in, d_out)?;
    let middle = d_in.rows;
    let r_out = rank(d_out);
    let r_in = rank(d_in);
    let h = middle as i64 - r_out as i64 - r_in as i64;
    debug_assert!(h >= 0);
    Ok(h as usize)
}

/// Cycles, boundaries and class representatives of one position of a complex.
#[derive(Clone, Debug)]
pub struct SubquotientBasis {
    pub ambient_dim: usize,
    pub cycle_basis: Vec<SparseVec>,
    pub boundary_basis: Vec<SparseVec>,
    /// Cycles completing `boundary_basis` to a basis of the cycle space; their
    /// classes form the chosen basis of the homology.
    pub class_reps: Vec<SparseVec>,
}

impl SubquotientBasis {
    pub fn dim(&self) -> usize {
        self.class_reps.len()
    }

    /// Builds the subquotient `ker(d_out) / im(d_in)`. Representatives are
    /// picked deterministically from the kernel basis in order.
    pub fn from_maps(d_in: &SparseMatrix, d_out: &SparseMatrix) -> Result<Self> {
        check_composable(d_in, d_out)?;
        let ambient_dim = d_in.rows;
        let cycle_basis = kernel(d_out);
        let boundary_basis = column_space(d_in);
        Self::new(ambient_dim, cycle_basis, boundary_basis)
    }

    pub fn new(ambient_dim: usize, cycle_basis: Vec<SparseVec>, boundary_basis: Vec<SparseVec>) -> Result<Self> {
        let mut ech = Echelon::new(ambient_dim);
        for b in &boundary_basis {
            if !matches!(ech.insert(b), Insertion::Independent(_)) {
                return Err(Error::NotAComplex("boundary basis is not independent".into()));
            }
        }
        let mut class_reps = Vec::new();
        for z in &cycle_basis {
            if let Insertion::Independent(_) = ech.insert(z) {
                class_reps.push(z.clone());
            }
        }
        if ech.rank() != cycle_basis.len() {
            return Err(Error::NotAComplex("boundaries are not contained in the cycles".into()));
        }
        Ok(SubquotientBasis { ambient_dim, cycle_basis, boundary_basis, class_reps })
    }

    fn solver(&self) -> Echelon {
        let mut ech = Echelon::new(self.ambient_dim);
        for v in self.boundary_basis.iter().chain(&self.class_reps) {
            ech.insert(v);
        }
        ech
    }
}

/// Matrix of the map induced by `f` from the homology described by `src` to
/// the one described by `dst`, in the class bases of the two subquotients.
pub fn induced_homology_map(
    src: &SubquotientBasis,
    dst: &SubquotientBasis,
    f: &SparseMatrix,
) -> Result<SparseMatrix> {
    if f.cols != src.ambient_dim || f.rows != dst.ambient_dim {
        return Err(Error::DimensionMismatch(format!(
            "map is {}x{} but subquotients live in {} and {}",
            f.rows, f.cols, src.ambient_dim, dst.ambient_dim
        )));
    }
    let solver = dst.solver();
    let nb = dst.boundary_basis.len();
    let mut columns = Vec::with_capacity(src.class_reps.len());
    for rep in &src.class_reps {
        let image = f.apply(rep);
        let (rem, combo) = solver.reduce(&image);
        if !rem.is_empty() {
            return Err(Error::NotAChainMap("image of a cycle is not a cycle of the target".into()));
        }
        columns.push(
            combo.into_iter().filter(|(i, _)| *i >= nb).map(|(i, x)| (i - nb, x)).collect::<Vec<_>>(),
        );
    }
    Ok(SparseMatrix::from_columns(dst.dim(), columns))
}

/// Rank of `m` restricted to the span of `basis` (vectors in the source).
pub fn rank_on(m: &SparseMatrix, basis: &[SparseVec]) -> usize {
    let image: Vec<SparseVec> = basis.iter().map(|v| m.apply(v)).collect();
    rank(&SparseMatrix::from_vectors(m.rows, &image))
}

/// Serializes a scalar as a `"num/den"` string.
pub fn serialize_scalar<S: serde::Serializer>(x: &Scalar, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_scalar(x))
}

/// Convenience: is `x` a nonzero scalar with absolute value one.
pub fn is_unit_modulus(x: &Scalar) -> bool {
    x.abs().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> SparseMatrix {
        let dense: Vec<Vec<Scalar>> = rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
        SparseMatrix::from_dense(&dense)
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&m(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(&SparseMatrix::zero(3, 5)), 0);
        assert_eq!(rank(&SparseMatrix::identity(4)), 4);
        assert_eq!(rank(&SparseMatrix::zero(0, 7)), 0);
        assert_eq!(rank(&SparseMatrix::zero(7, 0)), 0);
    }

    #[test]
    fn rank_rational_entries() {
        let a = SparseMatrix::from_dense(&[
            vec![ratio(1, 2), ratio(1, 3)],
            vec![ratio(3, 2), int(1)],
        ]);
        assert_eq!(rank(&a), 1);
        assert_eq!(rank_with(&a, PivotOrder::Highest), 1);
    }

    #[test]
    fn homology_dim_examples() {
        assert_eq!(homology_dim(&SparseMatrix::zero(3, 0), &SparseMatrix::zero(0, 3)).unwrap(), 3);
        assert_eq!(homology_dim(&SparseMatrix::zero(2, 0), &SparseMatrix::identity(2)).unwrap(), 0);
        let d_in = m(&[&[1], &[1]]);
        assert_eq!(homology_dim(&d_in, &SparseMatrix::zero(0, 2)).unwrap(), 1);
    }

    #[test]
    fn homology_dim_rejects_non_complex() {
        let err = homology_dim(&SparseMatrix::identity(2), &SparseMatrix::identity(2)).unwrap_err();
        assert!(matches!(err, Error::NotAComplex(_)));
        let err = homology_dim(&SparseMatrix::zero(3, 1), &SparseMatrix::zero(1, 2)).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch(_)));
    }

    #[test]
    fn induced_map_examples() {
        // identity on a complex with zero differentials
        let sq = SubquotientBasis::from_maps(&SparseMatrix::zero(2, 0), &SparseMatrix::zero(0, 2)).unwrap();
        let id = induced_homology_map(&sq, &sq, &SparseMatrix::identity(2)).unwrap();
        assert_eq!(id, SparseMatrix::identity(2));
        let zero = induced_homology_map(&sq, &sq, &SparseMatrix::zero(2, 2)).unwrap();
        assert!(zero.is_zero());

        // dst = k^2 / span(e2); f(e1) = e1 + e2
        let src = SubquotientBasis::from_maps(&SparseMatrix::zero(1, 0), &SparseMatrix::zero(0, 1)).unwrap();
        let dst = SubquotientBasis::from_maps(&m(&[&[0], &[1]]), &SparseMatrix::zero(0, 2)).unwrap();
        let f = m(&[&[1], &[1]]);
        let induced = induced_homology_map(&src, &dst, &f).unwrap();
        assert_eq!(induced, SparseMatrix::identity(1));
    }

    #[test]
    fn induced_map_rejects_non_cycles() {
        // dst complex: k^2 -> k via (1, 0); f(e1) = e1 is not a cycle
        let src = SubquotientBasis::from_maps(&SparseMatrix::zero(1, 0), &SparseMatrix::zero(0, 1)).unwrap();
        let dst = SubquotientBasis::from_maps(&SparseMatrix::zero(2, 0), &m(&[&[1, 0]])).unwrap();
        let f = m(&[&[1], &[0]]);
        assert!(matches!(induced_homology_map(&src, &dst, &f), Err(Error::NotAChainMap(_))));
    }

    #[test]
    fn kernel_is_annihilated() {
        let a = m(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0]]);
        let ker = kernel(&a);
        assert_eq!(ker.len(), 4 - rank(&a));
        for v in &ker {
            assert!(a.apply(v).is_empty());
        }
    }

    #[test]
    fn scalar_text_round_trip() {
        for s in ["3/4", "-7/2", "0/1", "12/1"] {
            assert_eq!(format_scalar(&parse_scalar(s).unwrap()), s);
        }
        assert_eq!(parse_scalar("6/8").unwrap(), ratio(3, 4));
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("x").is_err());
    }
}
