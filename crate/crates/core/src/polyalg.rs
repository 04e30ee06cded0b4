//! Sparse polynomials over affine semigroup rings `k[S]`, coefficient fields,
//! monomial orders and initial forms.
//!
//! Exponents are stored in ambient `Z^d` coordinates, so `x^a` divides `x^b`
//! exactly when `b - a` lies in `S`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::LatticeVector;
use crate::semigroups::AffineSemigroup;

/// Exponent of a monomial, in ambient lattice coordinates.
pub type Exponent = Vec<i64>;

pub(crate) fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter()
        .zip(b)
        .try_fold(0i64, |acc, (x, y)| x.checked_mul(*y).and_then(|p| acc.checked_add(p)))
        .expect("exponent arithmetic overflow")
}

pub(crate) fn add_exp(a: &[i64], b: &[i64]) -> Exponent {
    a.iter().zip(b).map(|(x, y)| x.checked_add(*y).expect("exponent arithmetic overflow")).collect()
}

pub(crate) fn sub_exp(a: &[i64], b: &[i64]) -> Exponent {
    a.iter().zip(b).map(|(x, y)| x.checked_sub(*y).expect("exponent arithmetic overflow")).collect()
}

/// Which coefficient field a computation runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoefficientField {
    Rational,
    Prime(u64),
}

impl CoefficientField {
    pub fn characteristic(&self) -> u64 {
        match self {
            CoefficientField::Rational => 0,
            CoefficientField::Prime(p) => *p,
        }
    }
}

impl fmt::Display for CoefficientField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientField::Rational => write!(f, "rational"),
            CoefficientField::Prime(p) => write!(f, "prime:{}", p),
        }
    }
}

impl FromStr for CoefficientField {
    type Err = Error;
    /// Accepts `rational`, `Q`, `prime:p`, `F5`-style and a bare prime.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("rational") || t == "Q" || t == "QQ" {
            return Ok(CoefficientField::Rational);
        }
        let digits = t.strip_prefix("prime:").or_else(|| t.strip_prefix('F')).or_else(|| t.strip_prefix("GF")).unwrap_or(t);
        let p: u64 = digits.parse().map_err(|_| Error::Parse(format!("unknown field '{}'", s)))?;
        PrimeField::new(p)?;
        Ok(CoefficientField::Prime(p))
    }
}

impl Serialize for CoefficientField {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for CoefficientField {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Arithmetic in a coefficient field. Elements are plain values; the field
/// object carries any runtime parameters (the modulus).
pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync {
    type Elem: Clone + PartialEq + Eq + fmt::Debug + Send + Sync;

    fn tag(&self) -> CoefficientField;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, x: i64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Panics on zero.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn format(&self, a: &Self::Elem) -> String;
    fn parse(&self, s: &str) -> Result<Self::Elem>;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn tag(&self) -> CoefficientField {
        CoefficientField::Rational
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, x: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(x))
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        assert!(!a.is_zero(), "inverse of zero");
        a.recip()
    }
    fn format(&self, a: &BigRational) -> String {
        a.to_string()
    }
    fn parse(&self, s: &str) -> Result<BigRational> {
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| Error::Parse(format!("bad rational '{}'", s)))?;
                let d: BigInt = d.trim().parse().map_err(|_| Error::Parse(format!("bad rational '{}'", s)))?;
                if d.is_zero() {
                    return Err(Error::Parse("zero denominator".into()));
                }
                Ok(BigRational::new(n, d))
            }
            None => s
                .parse::<BigInt>()
                .map(BigRational::from_integer)
                .map_err(|_| Error::Parse(format!("bad rational '{}'", s))),
        }
    }
}

/// `F_p` with plain modular arithmetic, `p < 2^61`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p >= 1 << 61 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn tag(&self) -> CoefficientField {
        CoefficientField::Prime(self.p)
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, x: i64) -> u64 {
        x.rem_euclid(self.p as i64) as u64
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.p)
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero");
        pow_mod(*a, self.p - 2, self.p)
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
    fn parse(&self, s: &str) -> Result<u64> {
        let s = s.trim();
        // rationals are accepted as long as the denominator is invertible
        let q = Rationals.parse(s)?;
        let p = BigInt::from(self.p);
        let num = (q.numer() % &p + &p) % &p;
        let den = (q.denom() % &p + &p) % &p;
        if den.is_zero() {
            return Err(Error::Parse(format!("denominator of '{}' vanishes mod {}", s, self.p)));
        }
        let num = num.to_u64().expect("reduced mod p");
        let den = den.to_u64().expect("reduced mod p");
        Ok(self.mul(&num, &self.inv(&den)))
    }
}

/// A total order on exponents, compatible with addition.
///
/// Every order here is a matrix order: exponents are compared through the
/// integer key `(r_1.u, r_2.u, ..., u_1, ..., u_d)` lexicographically. The
/// trailing coordinates make the order total even for rank-deficient rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MonomialOrder {
    Matrix(Vec<Vec<i64>>),
    /// `x^u > x^v` iff `w.u > w.v`, or the weights tie and `then` says so.
    WeightThen { weight: Vec<i64>, then: Box<MonomialOrder> },
}

impl MonomialOrder {
    pub fn lex(dim: usize) -> Self {
        MonomialOrder::Matrix((0..dim).map(|i| (0..dim).map(|j| (i == j) as i64).collect()).collect())
    }

    /// Graded by `grading`, ties broken lexicographically.
    pub fn graded_lex(grading: Vec<i64>) -> Self {
        MonomialOrder::Matrix(vec![grading])
    }

    /// Graded lex where the grading is the sum of the rays of `sigma`, an
    /// interior point of `sigma`; positive on every nonzero element of
    /// `S_sigma` when `sigma` is full-dimensional.
    pub fn default_tiebreak(semigroup: &AffineSemigroup) -> Self {
        let g = semigroup.sigma().interior_point().to_i64().expect("small rays");
        Self::graded_lex(g)
    }

    /// The order given by the rows `(2, -1)` and `(1, 1)`.
    pub fn toh_yama() -> Self {
        MonomialOrder::Matrix(vec![vec![2, -1], vec![1, 1]])
    }

    pub fn weight_then(weight: Vec<i64>, then: MonomialOrder) -> Self {
        MonomialOrder::WeightThen { weight, then: Box::new(then) }
    }

    pub fn dim(&self) -> Option<usize> {
        match self {
            MonomialOrder::Matrix(rows) => rows.first().map(Vec::len),
            MonomialOrder::WeightThen { weight, .. } => Some(weight.len()),
        }
    }

    fn push_key(&self, u: &[i64], out: &mut Vec<i64>) {
        match self {
            MonomialOrder::Matrix(rows) => {
                out.extend(rows.iter().map(|r| dot(r, u)));
                out.extend_from_slice(u);
            }
            MonomialOrder::WeightThen { weight, then } => {
                out.push(dot(weight, u));
                then.push_key(u, out);
            }
        }
    }

    /// The comparison key; linear in `u`.
    pub fn key(&self, u: &[i64]) -> Vec<i64> {
        let mut out = Vec::new();
        self.push_key(u, &mut out);
        out
    }

    pub fn compare(&self, u: &[i64], v: &[i64]) -> Ordering {
        self.key(u).cmp(&self.key(v))
    }

    /// Checks that every nonzero element of `S` is greater than `0`, which
    /// makes the order a well-order on `S`. Lexicographic positivity is closed
    /// under sums, so checking the Hilbert basis suffices.
    pub fn validate(&self, semigroup: &AffineSemigroup) -> Result<()> {
        let d = semigroup.ambient_dim();
        self.check_dims(d)?;
        let zero = vec![0i64; self.key(&vec![0; d]).len()];
        for h in semigroup.hilbert_basis() {
            let h = h.to_i64()?;
            if self.key(&h) <= zero {
                return Err(Error::InvalidOrder(format!(
                    "generator {:?} is not positive, so the order is not a well-order on the semigroup",
                    h
                )));
            }
        }
        Ok(())
    }

    fn check_dims(&self, d: usize) -> Result<()> {
        match self {
            MonomialOrder::Matrix(rows) => {
                for r in rows {
                    if r.len() != d {
                        return Err(Error::DimensionMismatch { expected: d, found: r.len() });
                    }
                }
                Ok(())
            }
            MonomialOrder::WeightThen { weight, then } => {
                if weight.len() != d {
                    return Err(Error::DimensionMismatch { expected: d, found: weight.len() });
                }
                then.check_dims(d)
            }
        }
    }
}

/// A polynomial (finite sum of terms `c x^u`) with coefficients in `F`.
/// Terms are kept in a map keyed by exponent, with no zero coefficients.
#[derive(Clone)]
pub struct Polynomial<F: Field> {
    field: F,
    terms: BTreeMap<Exponent, F::Elem>,
}

impl<F: Field> PartialEq for Polynomial<F> {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl<F: Field> Eq for Polynomial<F> {}

impl<F: Field> fmt::Debug for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<F: Field> fmt::Display for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let c = self.field.format(c);
            let (neg, mag) = match c.strip_prefix('-') {
                Some(m) => (true, m.to_string()),
                None => (false, c),
            };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let is_const = e.iter().all(|&x| x == 0);
            match (is_const, mag == "1") {
                (true, _) => write!(f, "{}", mag)?,
                (false, true) => write!(f, "x^{:?}", e)?,
                (false, false) => write!(f, "{}*x^{:?}", mag, e)?,
            }
        }
        Ok(())
    }
}

impl<F: Field> Polynomial<F> {
    pub fn zero(field: F) -> Self {
        Polynomial { field, terms: BTreeMap::new() }
    }

    pub fn monomial(field: F, exp: Exponent, coeff: F::Elem) -> Self {
        let mut p = Self::zero(field);
        p.add_term(exp, coeff);
        p
    }

    pub fn constant(field: F, c: F::Elem, dim: usize) -> Self {
        Self::monomial(field, vec![0; dim], c)
    }

    /// `x^u - 1`.
    pub fn binomial_minus_one(field: F, u: Exponent) -> Self {
        let dim = u.len();
        let one = field.one();
        let minus_one = field.neg(&one);
        let mut p = Self::monomial(field, u, one);
        p.add_term(vec![0; dim], minus_one);
        p
    }

    pub fn from_terms(field: F, terms: impl IntoIterator<Item = (Exponent, F::Elem)>) -> Self {
        let mut p = Self::zero(field);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &F::Elem)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &[i64]) -> Option<&F::Elem> {
        self.terms.get(e)
    }

    pub fn support(&self) -> Vec<Exponent> {
        self.terms.keys().cloned().collect()
    }

    pub fn add_term(&mut self, e: Exponent, c: F::Elem) {
        if self.field.is_zero(&c) {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(old) => {
                let s = self.field.add(old, &c);
                if self.field.is_zero(&s) {
                    self.terms.remove(&e);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in &other.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in &other.terms {
            r.add_term(e.clone(), self.field.neg(c));
        }
        r
    }

    pub fn neg(&self) -> Self {
        Polynomial { field: self.field.clone(), terms: self.terms.iter().map(|(e, c)| (e.clone(), self.field.neg(c))).collect() }
    }

    pub fn scale(&self, k: &F::Elem) -> Self {
        Self::from_terms(self.field.clone(), self.terms.iter().map(|(e, c)| (e.clone(), self.field.mul(c, k))))
    }

    pub fn mul_term(&self, e: &[i64], c: &F::Elem) -> Self {
        Self::from_terms(self.field.clone(), self.terms.iter().map(|(u, a)| (add_exp(u, e), self.field.mul(a, c))))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut r = Self::zero(self.field.clone());
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                r.add_term(add_exp(u, v), self.field.mul(a, b));
            }
        }
        r
    }

    pub fn pow(&self, k: u32) -> Self {
        let dim = self.terms.keys().next().map_or(0, Vec::len);
        (0..k).fold(Self::constant(self.field.clone(), self.field.one(), dim), |acc, _| acc.mul(self))
    }

    /// Leading exponent and coefficient under `order`.
    pub fn leading(&self, order: &MonomialOrder) -> Option<(&Exponent, &F::Elem)> {
        self.terms.iter().max_by(|a, b| order.compare(a.0, b.0))
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self, order: &MonomialOrder) -> Self {
        match self.leading(order) {
            Some((_, c)) => {
                let inv = self.field.inv(c);
                self.scale(&inv)
            }
            None => self.clone(),
        }
    }

    /// Sum of the terms whose exponent maximizes `w.u`.
    pub fn initial_form(&self, w: &[i64]) -> Result<Self> {
        let best = self.terms.keys().map(|u| dot(w, u)).max().ok_or(Error::ZeroPolynomial)?;
        Ok(Self::from_terms(
            self.field.clone(),
            self.terms.iter().filter(|(u, _)| dot(w, u) == best).map(|(u, c)| (u.clone(), c.clone())),
        ))
    }

    pub fn to_json(&self) -> PolynomialJson {
        PolynomialJson {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermJson { exp: LatticeVector::from_i64(e), coeff: CoeffJson::Text(self.field.format(c)) })
                .collect(),
        }
    }

    pub fn from_json(field: F, json: &PolynomialJson) -> Result<Self> {
        let mut p = Self::zero(field.clone());
        for t in &json.terms {
            let c = match &t.coeff {
                CoeffJson::Int(i) => field.from_i64(*i),
                CoeffJson::Text(s) => field.parse(s)?,
            };
            p.add_term(t.exp.to_i64()?, c);
        }
        Ok(p)
    }
}

/// `{"terms": [{"exp": [..], "coeff": "3/4"}]}`; integer coefficients may
/// also be given as JSON numbers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialJson {
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: LatticeVector,
    pub coeff: CoeffJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffJson {
    Int(i64),
    Text(String),
}

/// `k[S]` for a normal affine semigroup `S`: the semigroup together with the
/// coefficient field and the inequalities `r.u >= 0` cutting out `S`.
#[derive(Clone, Debug)]
pub struct SemigroupRing<F: Field> {
    semigroup: Arc<AffineSemigroup>,
    field: F,
    normals: Arc<Vec<Vec<i64>>>,
}

impl<F: Field> SemigroupRing<F> {
    pub fn new(semigroup: AffineSemigroup, field: F) -> Result<Self> {
        let normals = semigroup.sigma().rays().iter().map(LatticeVector::to_i64).collect::<Result<Vec<_>>>()?;
        Ok(SemigroupRing { semigroup: Arc::new(semigroup), field, normals: Arc::new(normals) })
    }

    pub fn semigroup(&self) -> &AffineSemigroup {
        &self.semigroup
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.semigroup.ambient_dim()
    }

    pub(crate) fn normals(&self) -> &[Vec<i64>] {
        &self.normals
    }

    pub fn contains(&self, u: &[i64]) -> bool {
        u.len() == self.dim() && self.normals.iter().all(|r| dot(r, u) >= 0)
    }

    /// Whether `x^a` divides `x^b`, i.e. `b - a ∈ S`.
    pub fn divides(&self, a: &[i64], b: &[i64]) -> bool {
        self.normals.iter().all(|r| dot(r, b) >= dot(r, a))
    }

    /// Checks that every exponent lies in `S`.
    pub fn element(&self, p: Polynomial<F>) -> Result<Polynomial<F>> {
        for e in p.terms.keys() {
            if !self.contains(e) {
                return Err(Error::NotInSemigroup(format!("{:?}", e)));
            }
        }
        Ok(p)
    }

    pub fn zero(&self) -> Polynomial<F> {
        Polynomial::zero(self.field.clone())
    }

    pub fn one(&self) -> Polynomial<F> {
        Polynomial::constant(self.field.clone(), self.field.one(), self.dim())
    }

    /// `x^a - 1` for each Hilbert basis element `a`.
    pub fn hilbert_binomials(&self) -> Vec<Polynomial<F>> {
        self.semigroup
            .hilbert_basis()
            .iter()
            .map(|a| Polynomial::binomial_minus_one(self.field.clone(), a.to_i64().expect("small generators")))
            .collect()
    }

    /// Checks `w ∈ sigma`, the cone of admissible weights.
    pub fn check_weight(&self, w: &[i64]) -> Result<()> {
        if w.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: w.len() });
        }
        if !self.semigroup.sigma().contains(&LatticeVector::from_i64(w)) {
            return Err(Error::WeightOutsideCone);
        }
        Ok(())
    }
}

/// Initial form of a ring element with respect to a weight of `sigma`.
pub fn initial_form<F: Field>(ring: &SemigroupRing<F>, f: &Polynomial<F>, w: &[i64]) -> Result<Polynomial<F>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    ring.check_weight(w)?;
    f.initial_form(w)
}

/// Compare `u` and `v` under `order`.
pub fn compare(order: &MonomialOrder, u: &[i64], v: &[i64]) -> Ordering {
    order.compare(u, v)
}
