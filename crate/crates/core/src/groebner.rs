//! Division, Buchberger's algorithm and marked reduced Groebner bases in
//! affine semigroup rings `k[S]`.
//!
//! In `k[S]` two monomials need not have a unique least common multiple:
//! `(a + S) ∩ (b + S)` is a monomial ideal with possibly several minimal
//! generators. Buchberger's criterion then reads: `G` is a Groebner basis iff
//! for every pair and every minimal common multiple `m` of their leading
//! exponents, `x^(m-a) g - x^(m-b) h` reduces to zero.

pub mod ambient;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::{LatticeMatrix, LatticeVector};
use crate::polyalg::{add_exp, dot, sub_exp, Exponent, Field, MonomialOrder, Polynomial, SemigroupRing};

/// An ideal of `k[S]` given by generators.
#[derive(Clone, Debug)]
pub struct Ideal<F: Field> {
    ring: SemigroupRing<F>,
    generators: Vec<Polynomial<F>>,
}

impl<F: Field> Ideal<F> {
    /// Zero generators are dropped; exponents must lie in `S`.
    pub fn new(ring: SemigroupRing<F>, generators: Vec<Polynomial<F>>) -> Result<Self> {
        let generators = generators
            .into_iter()
            .filter(|g| !g.is_zero())
            .map(|g| ring.element(g))
            .collect::<Result<Vec<_>>>()?;
        if generators.is_empty() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(Ideal { ring, generators })
    }

    pub fn ring(&self) -> &SemigroupRing<F> {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial<F>] {
        &self.generators
    }

    /// Products of all `k`-element multisets of generators, i.e. generators
    /// of the `k`-th power.
    pub fn power(&self, k: usize) -> Result<Self> {
        if k == 0 {
            return Ideal::new(self.ring.clone(), vec![self.ring.one()]);
        }
        let mut out = Vec::new();
        let mut idx = vec![0usize; k];
        let n = self.generators.len();
        loop {
            let p = idx.iter().skip(1).fold(self.generators[idx[0]].clone(), |acc, &i| acc.mul(&self.generators[i]));
            out.push(p);
            // next nondecreasing index tuple
            let mut pos = k;
            while pos > 0 && idx[pos - 1] == n - 1 {
                pos -= 1;
            }
            if pos == 0 {
                break;
            }
            idx[pos - 1] += 1;
            let v = idx[pos - 1];
            for x in idx[pos..].iter_mut() {
                *x = v;
            }
        }
        Ideal::new(self.ring.clone(), out)
    }
}

#[derive(Clone, Debug)]
struct Term<E> {
    key: Vec<i64>,
    exp: Exponent,
    coeff: E,
}

/// Polynomial with terms sorted by decreasing order key.
#[derive(Clone, Debug)]
struct OrderedPoly<E> {
    terms: Vec<Term<E>>,
}

impl<E: Clone> OrderedPoly<E> {
    fn from_poly<F: Field<Elem = E>>(p: &Polynomial<F>, order: &MonomialOrder) -> Self {
        let mut terms: Vec<Term<E>> =
            p.terms().map(|(e, c)| Term { key: order.key(e), exp: e.clone(), coeff: c.clone() }).collect();
        terms.sort_by(|a, b| b.key.cmp(&a.key));
        OrderedPoly { terms }
    }

    fn to_poly<F: Field<Elem = E>>(&self, field: &F) -> Polynomial<F> {
        Polynomial::from_terms(field.clone(), self.terms.iter().map(|t| (t.exp.clone(), t.coeff.clone())))
    }

    fn lead(&self) -> Option<&Term<E>> {
        self.terms.first()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

fn make_monic<F: Field>(field: &F, p: &mut OrderedPoly<F::Elem>) {
    if let Some(t) = p.terms.first() {
        if field.is_one(&t.coeff) {
            return;
        }
        let inv = field.inv(&t.coeff);
        for t in p.terms.iter_mut() {
            t.coeff = field.mul(&t.coeff, &inv);
        }
    }
}

/// `f - c * x^shift * g`, assuming the keys of `g` shifted by `shift_key`
/// stay sorted (keys are linear in the exponent).
fn sub_shifted<F: Field>(
    field: &F,
    f: &OrderedPoly<F::Elem>,
    c: &F::Elem,
    shift: &[i64],
    shift_key: &[i64],
    g: &OrderedPoly<F::Elem>,
) -> OrderedPoly<F::Elem> {
    let shifted = g.terms.iter().map(|t| Term {
        key: add_exp(&t.key, shift_key),
        exp: add_exp(&t.exp, shift),
        coeff: field.neg(&field.mul(c, &t.coeff)),
    });
    let mut out = Vec::with_capacity(f.terms.len() + g.terms.len());
    let mut a = f.terms.iter().cloned().peekable();
    let mut b = shifted.peekable();
    loop {
        match (a.peek(), b.peek()) {
            (None, None) => break,
            (Some(_), None) => out.push(a.next().unwrap()),
            (None, Some(_)) => out.push(b.next().unwrap()),
            (Some(x), Some(y)) => match x.key.cmp(&y.key) {
                std::cmp::Ordering::Greater => out.push(a.next().unwrap()),
                std::cmp::Ordering::Less => out.push(b.next().unwrap()),
                std::cmp::Ordering::Equal => {
                    let x = a.next().unwrap();
                    let y = b.next().unwrap();
                    let s = field.add(&x.coeff, &y.coeff);
                    if !field.is_zero(&s) {
                        out.push(Term { coeff: s, ..x });
                    }
                }
            },
        }
    }
    OrderedPoly { terms: out }
}

/// Fully reduces `f` modulo `basis` (every remaining term is irreducible).
fn reduce<F: Field>(
    ring: &SemigroupRing<F>,
    order: &MonomialOrder,
    f: &OrderedPoly<F::Elem>,
    basis: &[OrderedPoly<F::Elem>],
    mut quotients: Option<&mut Vec<Polynomial<F>>>,
) -> OrderedPoly<F::Elem> {
    let field = ring.field();
    let mut p = f.clone();
    let mut rem: Vec<Term<F::Elem>> = Vec::new();
    while let Some(lt) = p.lead().cloned() {
        let reducer = basis.iter().enumerate().find(|(_, g)| ring.divides(&g.lead().expect("nonzero").exp, &lt.exp));
        match reducer {
            Some((i, g)) => {
                let gl = g.lead().expect("nonzero");
                let shift = sub_exp(&lt.exp, &gl.exp);
                let c = field.mul(&lt.coeff, &field.inv(&gl.coeff));
                let shift_key = order.key(&shift);
                if let Some(q) = quotients.as_deref_mut() {
                    q[i].add_term(shift.clone(), c.clone());
                }
                p = sub_shifted(field, &p, &c, &shift, &shift_key, g);
            }
            None => {
                rem.push(lt);
                p.terms.remove(0);
            }
        }
    }
    OrderedPoly { terms: rem }
}

/// Result of the division algorithm: `f = sum q_i d_i + remainder`.
#[derive(Clone, Debug, PartialEq)]
pub struct Division<F: Field> {
    pub quotients: Vec<Polynomial<F>>,
    pub remainder: Polynomial<F>,
}

/// Multivariate division in `k[S]`: at each step the leading term is
/// cancelled by the first divisor whose leading exponent divides it, or moved
/// to the remainder.
pub fn divide<F: Field>(
    ring: &SemigroupRing<F>,
    f: &Polynomial<F>,
    divisors: &[Polynomial<F>],
    order: &MonomialOrder,
) -> Result<Division<F>> {
    order.validate(ring.semigroup())?;
    if divisors.iter().any(Polynomial::is_zero) {
        return Err(Error::ZeroPolynomial);
    }
    let basis: Vec<OrderedPoly<F::Elem>> = divisors.iter().map(|d| OrderedPoly::from_poly(d, order)).collect();
    let mut quotients = vec![ring.zero(); divisors.len()];
    let r = reduce(ring, order, &OrderedPoly::from_poly(f, order), &basis, Some(&mut quotients));
    Ok(Division { quotients, remainder: r.to_poly(ring.field()) })
}

/// Minimal elements of `(a + S) ∩ (b + S)` under divisibility.
///
/// The intersection is the set of lattice points of the polyhedron
/// `{x : r.x >= max(r.a, r.b)}` (with `r` running over the rays of `sigma`).
/// Its minimal generators lie in the box spanned by the polyhedron's vertices
/// plus the fundamental parallelepipeds of the recession cone `sigma^dual`.
pub fn minimal_common_multiples<F: Field>(ring: &SemigroupRing<F>, a: &[i64], b: &[i64]) -> Vec<Exponent> {
    let normals = ring.normals();
    let bounds: Vec<i64> = normals.iter().map(|r| dot(r, a).max(dot(r, b))).collect();
    let d = ring.dim();
    if ring.divides(a, b) {
        return vec![b.to_vec()];
    }
    if ring.divides(b, a) {
        return vec![a.to_vec()];
    }

    let vertices = polyhedron_vertices(normals, &bounds, d);
    let dual_rays: Vec<Vec<i64>> =
        ring.semigroup().dual_cone().rays().iter().map(|r| r.to_i64().expect("small rays")).collect();
    let mut lo = vec![i64::MAX; d];
    let mut hi = vec![i64::MIN; d];
    for v in &vertices {
        for i in 0..d {
            lo[i] = lo[i].min(v[i].floor().to_integer().to_i64().expect("small vertex"));
            hi[i] = hi[i].max(v[i].ceil().to_integer().to_i64().expect("small vertex"));
        }
    }
    for e in &dual_rays {
        for i in 0..d {
            lo[i] += e[i].min(0);
            hi[i] += e[i].max(0);
        }
    }

    let inside = |x: &[i64]| normals.iter().zip(&bounds).all(|(r, c)| dot(r, x) >= *c);
    let hilbert: Vec<Vec<i64>> =
        ring.semigroup().hilbert_basis().iter().map(|h| h.to_i64().expect("small generators")).collect();
    let mut out = Vec::new();
    let mut cur = lo.clone();
    'boxloop: loop {
        if inside(&cur) && !hilbert.iter().any(|h| inside(&sub_exp(&cur, h))) {
            out.push(cur.clone());
        }
        let mut i = 0;
        loop {
            if i == d {
                break 'boxloop;
            }
            if cur[i] < hi[i] {
                cur[i] += 1;
                break;
            }
            cur[i] = lo[i];
            i += 1;
        }
    }
    out.sort();
    out
}

fn polyhedron_vertices(normals: &[Vec<i64>], bounds: &[i64], d: usize) -> Vec<Vec<BigRational>> {
    let mut out = Vec::new();
    let n = normals.len();
    let mut idx: Vec<usize> = (0..d).collect();
    if n < d {
        return out;
    }
    loop {
        let rows: Vec<LatticeVector> = idx.iter().map(|&i| LatticeVector::from_i64(&normals[i])).collect();
        let m = LatticeMatrix::new(rows.clone()).expect("nonempty");
        let det = m.determinant();
        if !det.is_zero() {
            let x: Vec<BigRational> = (0..d)
                .map(|j| {
                    // Cramer on the transposed system: column j replaced by bounds
                    let cols: Vec<LatticeVector> = rows
                        .iter()
                        .zip(&idx)
                        .map(|(r, &i)| {
                            let mut e = r.clone().into_entries();
                            e[j] = BigInt::from(bounds[i]);
                            LatticeVector::new(e)
                        })
                        .collect();
                    BigRational::new(LatticeMatrix::new(cols).expect("nonempty").determinant(), det.clone())
                })
                .collect();
            let feasible = normals.iter().zip(bounds).all(|(r, c)| {
                let s: BigRational = r.iter().zip(&x).map(|(ri, xi)| xi * BigRational::from_integer(BigInt::from(*ri))).sum();
                s >= BigRational::from_integer(BigInt::from(*c))
            });
            if feasible {
                out.push(x);
            }
        }
        // next combination
        let mut i = d;
        while i > 0 && idx[i - 1] == n - d + i - 1 {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        idx[i - 1] += 1;
        for j in i..d {
            idx[j] = idx[j - 1] + 1;
        }
    }
    out
}

/// A reduced Groebner basis with each element's leading exponent recorded,
/// sorted by increasing leading exponent.
#[derive(Clone, Debug, PartialEq)]
pub struct MarkedGroebnerBasis<F: Field> {
    order: MonomialOrder,
    pairs: Vec<(Polynomial<F>, Exponent)>,
}

impl<F: Field> MarkedGroebnerBasis<F> {
    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn pairs(&self) -> &[(Polynomial<F>, Exponent)] {
        &self.pairs
    }

    pub fn polynomials(&self) -> Vec<Polynomial<F>> {
        self.pairs.iter().map(|(g, _)| g.clone()).collect()
    }

    /// `lm(G)`.
    pub fn leading_exponents(&self) -> Vec<Exponent> {
        self.pairs.iter().map(|(_, a)| a.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Normal form of `f`.
    pub fn normal_form(&self, ring: &SemigroupRing<F>, f: &Polynomial<F>) -> Polynomial<F> {
        let basis: Vec<OrderedPoly<F::Elem>> = self.pairs.iter().map(|(g, _)| OrderedPoly::from_poly(g, &self.order)).collect();
        reduce(ring, &self.order, &OrderedPoly::from_poly(f, &self.order), &basis, None).to_poly(ring.field())
    }

    pub fn contains(&self, ring: &SemigroupRing<F>, f: &Polynomial<F>) -> bool {
        self.normal_form(ring, f).is_zero()
    }

    /// Every S-polynomial (one per minimal common multiple) of every pair.
    pub fn s_polynomials(&self, ring: &SemigroupRing<F>) -> Vec<Polynomial<F>> {
        let mut out = Vec::new();
        for i in 0..self.pairs.len() {
            for j in i + 1..self.pairs.len() {
                let (gi, ai) = &self.pairs[i];
                let (gj, aj) = &self.pairs[j];
                for m in minimal_common_multiples(ring, ai, aj) {
                    let one = ring.field().one();
                    out.push(gi.mul_term(&sub_exp(&m, ai), &one).sub(&gj.mul_term(&sub_exp(&m, aj), &one)));
                }
            }
        }
        out
    }

    /// The reduced basis is monic with pairwise non-dividing leading
    /// exponents and no reducible tail term.
    pub fn is_reduced(&self, ring: &SemigroupRing<F>) -> bool {
        let field = ring.field();
        self.pairs.iter().enumerate().all(|(i, (g, a))| {
            g.leading(&self.order).map(|(e, c)| e == a && field.is_one(c)).unwrap_or(false)
                && self.pairs.iter().enumerate().all(|(j, (_, b))| {
                    i == j || g.terms().all(|(e, _)| !ring.divides(b, e))
                })
        })
    }
}

/// Buchberger's algorithm with the normal selection strategy and the product
/// criterion, followed by interreduction to the unique reduced basis.
pub fn buchberger<F: Field>(ideal: &Ideal<F>, order: &MonomialOrder) -> Result<MarkedGroebnerBasis<F>> {
    let ring = &ideal.ring;
    let field = ring.field();
    order.validate(ring.semigroup())?;

    let mut basis: Vec<OrderedPoly<F::Elem>> = Vec::new();
    // pending critical pairs: (key of the common multiple, i, j, multiple)
    let mut pairs: BTreeSet<(Vec<i64>, usize, usize, Exponent)> = BTreeSet::new();

    let add = |mut g: OrderedPoly<F::Elem>, basis: &mut Vec<OrderedPoly<F::Elem>>, pairs: &mut BTreeSet<_>| {
        make_monic(field, &mut g);
        let j = basis.len();
        let bj = g.lead().expect("nonzero").exp.clone();
        for (i, f) in basis.iter().enumerate() {
            let bi = &f.lead().expect("nonzero").exp;
            let mults = minimal_common_multiples(ring, bi, &bj);
            // product criterion: the only common multiple is a + b
            if mults.len() == 1 && mults[0] == add_exp(bi, &bj) {
                continue;
            }
            for m in mults {
                pairs.insert((order.key(&m), i, j, m));
            }
        }
        basis.push(g);
    };

    for g in &ideal.generators {
        let r = reduce(ring, order, &OrderedPoly::from_poly(g, order), &basis, None);
        if !r.is_zero() {
            add(r, &mut basis, &mut pairs);
        }
    }

    while let Some((_, i, j, m)) = pairs.pop_first() {
        let (gi, gj) = (&basis[i], &basis[j]);
        let si = sub_exp(&m, &gi.lead().unwrap().exp);
        let sj = sub_exp(&m, &gj.lead().unwrap().exp);
        let one = field.one();
        let lhs = sub_shifted(field, &OrderedPoly { terms: vec![] }, &field.neg(&one), &si, &order.key(&si), gi);
        let s = sub_shifted(field, &lhs, &one, &sj, &order.key(&sj), gj);
        let r = reduce(ring, order, &s, &basis, None);
        if !r.is_zero() {
            log::trace!("new basis element with {} terms", r.terms.len());
            add(r, &mut basis, &mut pairs);
        }
    }

    Ok(interreduce(ring, order, basis))
}

fn interreduce<F: Field>(ring: &SemigroupRing<F>, order: &MonomialOrder, basis: Vec<OrderedPoly<F::Elem>>) -> MarkedGroebnerBasis<F> {
    let field = ring.field();
    // keep elements whose leading exponent is minimal; among equal leads keep the first
    let mut minimal: Vec<OrderedPoly<F::Elem>> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let a = &g.lead().unwrap().exp;
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            let b = &h.lead().unwrap().exp;
            j != i && ring.divides(b, a) && (b != a || j < i)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    let mut reduced: Vec<OrderedPoly<F::Elem>> = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<OrderedPoly<F::Elem>> =
            minimal.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.clone()).collect();
        let mut g = minimal[i].clone();
        let lead = g.terms.remove(0);
        let tail = reduce(ring, order, &g, &others, None);
        let mut terms = vec![lead];
        terms.extend(tail.terms);
        let mut g = OrderedPoly { terms };
        make_monic(field, &mut g);
        reduced.push(g);
    }
    reduced.sort_by(|a, b| a.lead().unwrap().key.cmp(&b.lead().unwrap().key));
    MarkedGroebnerBasis {
        order: order.clone(),
        pairs: reduced.into_iter().map(|g| {
            let a = g.lead().unwrap().exp.clone();
            (g.to_poly(field), a)
        }).collect(),
    }
}

/// `in_w(I)`, generated by the initial forms of a Groebner basis for the
/// order refining `w` by `tiebreak`.
pub fn initial_ideal<F: Field>(ideal: &Ideal<F>, w: &[i64], tiebreak: &MonomialOrder) -> Result<Ideal<F>> {
    ideal.ring.check_weight(w)?;
    let order = MonomialOrder::weight_then(w.to_vec(), tiebreak.clone());
    let gb = buchberger(ideal, &order)?;
    let gens = gb.pairs.iter().map(|(g, _)| g.initial_form(w)).collect::<Result<Vec<_>>>()?;
    Ideal::new(ideal.ring.clone(), gens)
}

/// Whether two ideals of the same ring coincide, by comparing reduced bases.
pub fn same_ideal<F: Field>(a: &Ideal<F>, b: &Ideal<F>, order: &MonomialOrder) -> Result<bool> {
    Ok(buchberger(a, order)?.pairs == buchberger(b, order)?.pairs)
}
