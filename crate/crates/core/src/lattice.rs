//! Exact integer linear algebra over `N = Z^d` and its dual `M`.
//!
//! Everything here uses arbitrary-precision integers. The Hermite normal form
//! follows a single row-style convention:
//!
//! * `u * m = h` with `u` unimodular;
//! * the nonzero rows of `h` come first and form an echelon: the pivot (first
//!   nonzero entry) of each row lies strictly to the right of the pivot above;
//! * every pivot is positive;
//! * every entry above a pivot lies in `[0, pivot)`.
//!
//! With this convention the output is unique for a given row lattice, so the
//! serialized form is stable.

use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, SeqAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An integer vector in `Z^d`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LatticeVector(Vec<BigInt>);

impl LatticeVector {
    pub fn new(entries: Vec<BigInt>) -> Self {
        LatticeVector(entries)
    }

    pub fn from_i64(entries: &[i64]) -> Self {
        LatticeVector(entries.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        LatticeVector(vec![BigInt::zero(); dim])
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zero(dim);
        v.0[i] = BigInt::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<BigInt> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &LatticeVector) -> BigInt {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    /// gcd of the entries; zero for the zero vector.
    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    /// The primitive vector on the same ray. The zero vector maps to itself.
    pub fn primitive(&self) -> LatticeVector {
        let g = self.content();
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        LatticeVector(self.0.iter().map(|x| x / &g).collect())
    }

    pub fn scale(&self, k: &BigInt) -> LatticeVector {
        LatticeVector(self.0.iter().map(|x| x * k).collect())
    }

    /// Entries as machine integers, failing if any does not fit.
    pub fn to_i64(&self) -> Result<Vec<i64>> {
        self.0.iter().map(|x| x.to_i64().ok_or(Error::Overflow)).collect()
    }

    pub fn to_rational(&self) -> Vec<BigRational> {
        self.0.iter().map(|x| BigRational::from_integer(x.clone())).collect()
    }

    /// Clears denominators of a rational vector and returns the primitive
    /// integer vector on the same ray (same direction, positive multiple).
    pub fn from_rational_ray(v: &[BigRational]) -> LatticeVector {
        let lcm = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
        let ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect();
        LatticeVector(ints).primitive()
    }
}

impl From<Vec<i64>> for LatticeVector {
    fn from(v: Vec<i64>) -> Self {
        LatticeVector::from_i64(&v)
    }
}

impl<const N: usize> From<[i64; N]> for LatticeVector {
    fn from(v: [i64; N]) -> Self {
        LatticeVector::from_i64(&v)
    }
}

impl Index<usize> for LatticeVector {
    type Output = BigInt;
    fn index(&self, i: usize) -> &BigInt {
        &self.0[i]
    }
}

impl Add for &LatticeVector {
    type Output = LatticeVector;
    fn add(self, rhs: &LatticeVector) -> LatticeVector {
        LatticeVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &LatticeVector {
    type Output = LatticeVector;
    fn sub(self, rhs: &LatticeVector) -> LatticeVector {
        LatticeVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        LatticeVector(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", x)?;
        }
        write!(f, ")")
    }
}

// JSON carries plain integers; values outside i64 fall back to decimal strings.
impl Serialize for LatticeVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
        for x in &self.0 {
            match x.to_i64() {
                Some(v) => seq.serialize_element(&v)?,
                None => seq.serialize_element(&x.to_string())?,
            }
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for LatticeVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Entry {
            Int(i64),
            Str(String),
        }
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = LatticeVector;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an array of integers")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<LatticeVector, A::Error> {
                let mut out = Vec::new();
                while let Some(e) = seq.next_element::<Entry>()? {
                    out.push(match e {
                        Entry::Int(v) => BigInt::from(v),
                        Entry::Str(s) => s.parse::<BigInt>().map_err(de::Error::custom)?,
                    });
                }
                Ok(LatticeVector(out))
            }
        }
        deserializer.deserialize_seq(V)
    }
}

/// Serde adapter for an optional big integer, in the same integer-or-string
/// form as vector entries.
pub(crate) mod opt_bigint {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<BigInt>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match v {
            None => s.serialize_none(),
            Some(x) => match x.to_i64() {
                Some(i) => s.serialize_some(&i),
                None => s.serialize_some(&x.to_string()),
            },
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<BigInt>, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Entry {
            Int(i64),
            Str(String),
        }
        match Option::<Entry>::deserialize(d)? {
            None => Ok(None),
            Some(Entry::Int(v)) => Ok(Some(BigInt::from(v))),
            Some(Entry::Str(t)) => t.parse().map(Some).map_err(de::Error::custom),
        }
    }
}

/// A rectangular integer matrix stored by rows.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct LatticeMatrix {
    rows: Vec<LatticeVector>,
    ncols: usize,
}

impl LatticeMatrix {
    pub fn new(rows: Vec<LatticeVector>) -> Result<Self> {
        let ncols = rows.first().ok_or(Error::Empty("matrix has no rows"))?.dim();
        if let Some(bad) = rows.iter().find(|r| r.dim() != ncols) {
            return Err(Error::DimensionMismatch { expected: ncols, found: bad.dim() });
        }
        Ok(LatticeMatrix { rows, ncols })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::new(rows.iter().map(|r| LatticeVector::from_i64(r)).collect())
    }

    pub fn identity(n: usize) -> Self {
        LatticeMatrix { rows: (0..n).map(|i| LatticeVector::unit(n, i)).collect(), ncols: n }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[LatticeVector] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.rows[i].0[j]
    }

    pub fn mul(&self, rhs: &LatticeMatrix) -> LatticeMatrix {
        assert_eq!(self.ncols, rhs.nrows());
        let rows = self
            .rows
            .iter()
            .map(|r| {
                LatticeVector(
                    (0..rhs.ncols)
                        .map(|j| r.0.iter().enumerate().map(|(k, a)| a * rhs.get(k, j)).sum())
                        .collect(),
                )
            })
            .collect();
        LatticeMatrix { rows, ncols: rhs.ncols }
    }

    pub fn transpose(&self) -> LatticeMatrix {
        let rows = (0..self.ncols)
            .map(|j| LatticeVector(self.rows.iter().map(|r| r.0[j].clone()).collect()))
            .collect();
        LatticeMatrix { rows, ncols: self.rows.len() }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.nrows(), self.ncols, "determinant of a non-square matrix");
        let n = self.ncols;
        let mut a: Vec<Vec<BigInt>> = self.rows.iter().map(|r| r.0.clone()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        if n == 0 {
            return BigInt::one();
        }
        sign * &a[n - 1][n - 1]
    }

    pub fn rank(&self) -> usize {
        rational_rref(&self.rows.iter().map(LatticeVector::to_rational).collect::<Vec<_>>()).len()
    }
}

impl fmt::Display for LatticeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", r)?;
        }
        write!(f, "]")
    }
}

/// Row-style Hermite normal form together with its unimodular transform.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermiteForm {
    pub h: LatticeMatrix,
    pub u: LatticeMatrix,
}

fn row_axpy(rows: &mut [Vec<BigInt>], target: usize, source: usize, q: &BigInt) {
    // rows[target] -= q * rows[source]
    let src = rows[source].clone();
    for (t, s) in rows[target].iter_mut().zip(&src) {
        *t -= q * s;
    }
}

pub fn hermite_normal_form(m: &LatticeMatrix) -> HermiteForm {
    let r = m.nrows();
    let c = m.ncols();
    let mut a: Vec<Vec<BigInt>> = m.rows.iter().map(|x| x.0.clone()).collect();
    let mut u: Vec<Vec<BigInt>> = LatticeMatrix::identity(r).rows.into_iter().map(|x| x.0).collect();
    let mut p = 0;
    for col in 0..c {
        if p == r {
            break;
        }
        loop {
            let best = (p..r)
                .filter(|&i| !a[i][col].is_zero())
                .min_by(|&i, &j| a[i][col].abs().cmp(&a[j][col].abs()));
            let Some(best) = best else { break };
            a.swap(p, best);
            u.swap(p, best);
            let mut done = true;
            for i in p + 1..r {
                if a[i][col].is_zero() {
                    continue;
                }
                let q = a[i][col].div_floor(&a[p][col]);
                row_axpy(&mut a, i, p, &q);
                row_axpy(&mut u, i, p, &q);
                if !a[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a[p][col].is_zero() {
            continue;
        }
        if a[p][col].is_negative() {
            for x in a[p].iter_mut().chain(u[p].iter_mut()) {
                *x = -&*x;
            }
        }
        for i in 0..p {
            let q = a[i][col].div_floor(&a[p][col]);
            if !q.is_zero() {
                row_axpy(&mut a, i, p, &q);
                row_axpy(&mut u, i, p, &q);
            }
        }
        p += 1;
    }
    HermiteForm {
        h: LatticeMatrix { rows: a.into_iter().map(LatticeVector).collect(), ncols: c },
        u: LatticeMatrix { rows: u.into_iter().map(LatticeVector).collect(), ncols: r },
    }
}

/// Smith invariant factors `d_1 | d_2 | ...`, one per diagonal position
/// (`min(rows, cols)` entries, trailing zeros for rank-deficient input).
pub fn smith_normal_form(m: &LatticeMatrix) -> Vec<BigInt> {
    let r = m.nrows();
    let c = m.ncols();
    let mut a: Vec<Vec<BigInt>> = m.rows.iter().map(|x| x.0.clone()).collect();
    let n = r.min(c);
    for t in 0..n {
        'outer: loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    if !a[i][j].is_zero() && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { break };
            a.swap(t, bi);
            for row in a.iter_mut() {
                row.swap(t, bj);
            }
            let mut clean = true;
            for i in t + 1..r {
                let q = a[i][t].div_floor(&a[t][t]);
                row_axpy(&mut a, i, t, &q);
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..c {
                let q = a[t][j].div_floor(&a[t][t]);
                for row in a.iter_mut() {
                    let v = &row[t] * &q;
                    row[j] -= v;
                }
                clean &= a[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            for i in t + 1..r {
                for j in t + 1..c {
                    if !(&a[i][j] % &a[t][t]).is_zero() {
                        // fold the offending row into the pivot row and retry
                        let row_i = a[i].clone();
                        for (x, y) in a[t].iter_mut().zip(row_i) {
                            *x += y;
                        }
                        continue 'outer;
                    }
                }
            }
            break;
        }
    }
    (0..n).map(|i| a[i][i].abs()).collect()
}

/// True iff the (rationally independent) vectors extend to a basis of `Z^d`.
pub fn extends_to_basis(vs: &[LatticeVector]) -> Result<bool> {
    if vs.is_empty() {
        return Ok(true);
    }
    let m = LatticeMatrix::new(vs.to_vec())?;
    if m.rank() != vs.len() {
        return Err(Error::NotIndependent);
    }
    Ok(smith_normal_form(&m).iter().all(One::is_one))
}

/// Reduced row echelon form over the rationals; returns the nonzero rows.
pub(crate) fn rational_rref(rows: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let mut a: Vec<Vec<BigRational>> = rows.to_vec();
    let ncols = a.first().map_or(0, Vec::len);
    let mut p = 0;
    for col in 0..ncols {
        let Some(piv) = (p..a.len()).find(|&i| !a[i][col].is_zero()) else { continue };
        a.swap(p, piv);
        let inv = a[p][col].recip();
        for x in a[p].iter_mut() {
            *x *= &inv;
        }
        for i in 0..a.len() {
            if i != p && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in 0..ncols {
                    let v = &f * &a[p][j];
                    a[i][j] -= v;
                }
            }
        }
        p += 1;
        if p == a.len() {
            break;
        }
    }
    a.truncate(p);
    a
}

/// Canonical integer basis of the row space: rational RREF rows scaled to
/// primitive integer vectors.
pub fn row_space_basis(rows: &[LatticeVector]) -> Vec<LatticeVector> {
    let q: Vec<Vec<BigRational>> = rows.iter().map(LatticeVector::to_rational).collect();
    rational_rref(&q).iter().map(|r| LatticeVector::from_rational_ray(r)).collect()
}

/// Canonical basis of the rational kernel `{x : r.x = 0 for every row r}`.
pub fn kernel_basis(rows: &[LatticeVector], dim: usize) -> Vec<LatticeVector> {
    let q: Vec<Vec<BigRational>> = rows.iter().map(LatticeVector::to_rational).collect();
    let rref = rational_rref(&q);
    let pivots: Vec<usize> = rref
        .iter()
        .map(|r| r.iter().position(|x| !x.is_zero()).expect("rref rows are nonzero"))
        .collect();
    let mut basis = Vec::new();
    for free in (0..dim).filter(|j| !pivots.contains(j)) {
        let mut v = vec![BigRational::zero(); dim];
        v[free] = BigRational::one();
        for (row, &pc) in rref.iter().zip(&pivots) {
            v[pc] = -row[free].clone();
        }
        basis.push(LatticeVector::from_rational_ray(&v));
    }
    row_space_basis(&basis)
}

/// Generalized cross product: for `d - 1` vectors in `Z^d`, the vector of
/// signed maximal minors. It spans the orthogonal complement when the inputs
/// are independent and vanishes otherwise.
pub fn cofactor_vector(rows: &[LatticeVector], dim: usize) -> LatticeVector {
    assert_eq!(rows.len() + 1, dim);
    let mut out = Vec::with_capacity(dim);
    for skip in 0..dim {
        let minor: Vec<LatticeVector> = rows
            .iter()
            .map(|r| LatticeVector((0..dim).filter(|&j| j != skip).map(|j| r.0[j].clone()).collect()))
            .collect();
        let det = if minor.is_empty() {
            BigInt::one()
        } else {
            LatticeMatrix { rows: minor, ncols: dim - 1 }.determinant()
        };
        out.push(if skip % 2 == 0 { det } else { -det });
    }
    LatticeVector(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> LatticeMatrix {
        LatticeMatrix::from_i64(rows).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn hnf_identity() {
        let id = m(&[&[1, 0], &[0, 1]]);
        let hf = hermite_normal_form(&id);
        assert_eq!(hf.h, id);
        assert_eq!(hf.u, LatticeMatrix::identity(2));
    }

    #[test]
    fn hnf_index_two() {
        let a = m(&[&[2, -1], &[0, 1]]);
        let hf = hermite_normal_form(&a);
        assert_eq!(hf.h, m(&[&[2, 0], &[0, 1]]));
        assert_eq!(hf.u.mul(&a), hf.h);
        assert_eq!(hf.u.determinant().abs(), BigInt::one());
        assert_eq!(hf.h.determinant().abs(), BigInt::from(2));
    }

    #[test]
    fn hnf_index_four() {
        let a = m(&[&[0, 1], &[4, -3]]);
        let hf = hermite_normal_form(&a);
        assert_eq!(hf.h, m(&[&[4, 0], &[0, 1]]));
        assert_eq!(hf.u.mul(&a), hf.h);
        assert_eq!(a.determinant().abs(), BigInt::from(4));
    }

    #[test]
    fn hnf_rank_deficient() {
        let a = m(&[&[2, 4], &[1, 2], &[3, 6]]);
        let hf = hermite_normal_form(&a);
        assert_eq!(hf.h, m(&[&[1, 2], &[0, 0], &[0, 0]]));
        assert_eq!(hf.u.mul(&a), hf.h);
        assert_eq!(hf.u.determinant().abs(), BigInt::one());
    }

    #[test]
    fn snf_examples() {
        assert_eq!(smith_normal_form(&m(&[&[1, 0], &[0, 1]])), ints(&[1, 1]));
        assert_eq!(smith_normal_form(&m(&[&[2, -1], &[0, 1]])), ints(&[1, 2]));
        assert_eq!(smith_normal_form(&m(&[&[0, 1], &[4, -3]])), ints(&[1, 4]));
        assert_eq!(smith_normal_form(&m(&[&[2, 0], &[0, 3]])), ints(&[1, 6]));
        assert_eq!(smith_normal_form(&m(&[&[2, 4, 6]])), ints(&[2]));
        assert_eq!(smith_normal_form(&m(&[&[1, 2], &[2, 4]])), ints(&[1, 0]));
    }

    #[test]
    fn basis_extension() {
        let v = |x: &[i64]| LatticeVector::from_i64(x);
        assert!(extends_to_basis(&[v(&[1, 0]), v(&[0, 1])]).unwrap());
        assert!(!extends_to_basis(&[v(&[2, -1]), v(&[0, 1])]).unwrap());
        assert!(extends_to_basis(&[v(&[1, 0])]).unwrap());
        assert!(!extends_to_basis(&[v(&[2, 2])]).unwrap());
        assert_eq!(extends_to_basis(&[v(&[1, 2]), v(&[2, 4])]), Err(Error::NotIndependent));
    }

    #[test]
    fn determinant_and_kernel() {
        assert_eq!(m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]]).determinant(), BigInt::from(-3));
        let k = kernel_basis(&[LatticeVector::from_i64(&[1, 3, 1]), LatticeVector::from_i64(&[0, 4, 1])], 3);
        assert_eq!(k, vec![LatticeVector::from_i64(&[1, 1, -4])]);
        let c = cofactor_vector(&[LatticeVector::from_i64(&[1, 3, 1]), LatticeVector::from_i64(&[0, 4, 1])], 3);
        assert_eq!(c.primitive(), LatticeVector::from_i64(&[-1, -1, 4]));
    }

    #[test]
    fn json_integers() {
        let v = LatticeVector::from_i64(&[3, -4]);
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, "[3,-4]");
        let back: LatticeVector = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }
}
