//! The presentation `k[S] = k[y_1, ..., y_s] / I_A` through the Hilbert basis
//! `A = (a_1, ..., a_s)`, used to cross-check computations done intrinsically
//! in `k[S]`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::groebner::{buchberger, Ideal, MarkedGroebnerBasis};
use crate::lattice::{hermite_normal_form, LatticeMatrix, LatticeVector};
use crate::polyalg::{add_exp, sub_exp, Exponent, Field, MonomialOrder, Polynomial, SemigroupRing};
use crate::semigroups::AffineSemigroup;

/// `k[y_1..y_s]` with the toric ideal of the Hilbert basis of `S`.
#[derive(Clone, Debug)]
pub struct AmbientPresentation<F: Field> {
    ring: SemigroupRing<F>,
    polynomial_ring: SemigroupRing<F>,
    generators: Vec<Exponent>,
    order: MonomialOrder,
    toric: MarkedGroebnerBasis<F>,
}

/// `y^u+ - y^u-` for a vector `u`.
fn binomial<F: Field>(field: &F, u: &[i64]) -> Polynomial<F> {
    let plus: Exponent = u.iter().map(|&x| x.max(0)).collect();
    let minus: Exponent = u.iter().map(|&x| (-x).max(0)).collect();
    Polynomial::from_terms(field.clone(), [(plus, field.one()), (minus, field.neg(&field.one()))])
}

impl<F: Field> AmbientPresentation<F> {
    pub fn new(ring: &SemigroupRing<F>) -> Result<Self> {
        let field = ring.field().clone();
        let generators: Vec<Exponent> =
            ring.semigroup().hilbert_basis().iter().map(LatticeVector::to_i64).collect::<Result<_>>()?;
        let s = generators.len();
        if s == 0 {
            return Err(Error::Empty("Hilbert basis"));
        }

        // lattice basis of ker A: rows of the HNF transform with zero image
        let at = LatticeMatrix::new(generators.iter().map(|a| LatticeVector::from_i64(a)).collect())?;
        let hnf = hermite_normal_form(&at);
        let kernel: Vec<Exponent> = (0..s)
            .filter(|&i| hnf.h.rows()[i].is_zero())
            .map(|i| hnf.u.rows()[i].to_i64())
            .collect::<Result<_>>()?;

        let order = MonomialOrder::graded_lex(vec![1; s]);
        let polynomial_ring = SemigroupRing::new(AffineSemigroup::orthant(s), field.clone())?;
        let toric = if kernel.is_empty() {
            MarkedGroebnerBasis { order: order.clone(), pairs: Vec::new() }
        } else {
            // saturate the lattice basis ideal by one variable at a time: with
            // a positive grading refined by lowest y_i degree, the saturation
            // by y_i divides y_i out of a Groebner basis
            let g = ring.semigroup().sigma().interior_point().to_i64()?;
            let degrees: Vec<i64> = generators.iter().map(|a| a.iter().zip(&g).map(|(x, y)| x * y).sum()).collect();
            let mut gens: Vec<Polynomial<F>> = kernel.iter().map(|u| binomial(&field, u)).collect();
            for i in 0..s {
                let mut low = vec![0; s];
                low[i] = -1;
                let by_i = MonomialOrder::Matrix(vec![degrees.clone(), low]);
                let gb = buchberger(&Ideal::new(polynomial_ring.clone(), gens)?, &by_i)?;
                gens = gb
                    .polynomials()
                    .into_iter()
                    .map(|f| {
                        let k = f.terms().map(|(e, _)| e[i]).min().unwrap_or(0);
                        let mut shift = vec![0; s];
                        shift[i] = k;
                        Polynomial::from_terms(field.clone(), f.terms().map(|(e, c)| (sub_exp(e, &shift), c.clone())))
                    })
                    .collect();
            }
            buchberger(&Ideal::new(polynomial_ring.clone(), gens)?, &order)?
        };
        Ok(AmbientPresentation { ring: ring.clone(), polynomial_ring, generators, order, toric })
    }

    pub fn polynomial_ring(&self) -> &SemigroupRing<F> {
        &self.polynomial_ring
    }

    /// Reduced Groebner basis of the toric ideal `I_A` (graded lex).
    pub fn toric_ideal(&self) -> &MarkedGroebnerBasis<F> {
        &self.toric
    }

    /// Some `c` in `N^s` with `A c = e`, for `e` in `S`.
    pub fn factor(&self, e: &[i64]) -> Result<Exponent> {
        if !self.ring.contains(e) {
            return Err(Error::NotInSemigroup(format!("{e:?}")));
        }
        let mut rest = e.to_vec();
        let mut c = vec![0i64; self.generators.len()];
        // any nonzero element of S leaves an element of S after removing a
        // suitable generator, and each removal lowers an interior grading
        while rest.iter().any(|&x| x != 0) {
            let i = (0..self.generators.len())
                .find(|&i| self.ring.contains(&sub_exp(&rest, &self.generators[i])))
                .expect("nonzero semigroup element has a generator below it");
            rest = sub_exp(&rest, &self.generators[i]);
            c[i] += 1;
        }
        Ok(c)
    }

    /// A preimage of `f` in `k[y]`.
    pub fn lift(&self, f: &Polynomial<F>) -> Result<Polynomial<F>> {
        let mut cache: HashMap<Exponent, Exponent> = HashMap::new();
        let mut out = self.polynomial_ring.zero();
        for (e, c) in f.terms() {
            let y = match cache.get(e) {
                Some(y) => y.clone(),
                None => {
                    let y = self.factor(e)?;
                    cache.insert(e.clone(), y.clone());
                    y
                }
            };
            out.add_term(y, c.clone());
        }
        Ok(out)
    }

    /// The image of `g` under `y_i -> x^a_i`.
    pub fn push(&self, g: &Polynomial<F>) -> Polynomial<F> {
        let d = self.ring.dim();
        let mut out = self.ring.zero();
        for (y, c) in g.terms() {
            let e = y.iter().zip(&self.generators).fold(vec![0; d], |acc, (&k, a)| {
                add_exp(&acc, &a.iter().map(|x| x.checked_mul(k).expect("exponent overflow")).collect::<Vec<_>>())
            });
            out.add_term(e, c.clone());
        }
        out
    }

    /// Groebner basis in `k[y]` of the preimage of `ideal`.
    pub fn preimage(&self, ideal: &Ideal<F>) -> Result<MarkedGroebnerBasis<F>> {
        let mut gens = ideal.generators().iter().map(|g| self.lift(g)).collect::<Result<Vec<_>>>()?;
        gens.extend(self.toric.polynomials());
        buchberger(&Ideal::new(self.polynomial_ring.clone(), gens)?, &self.order)
    }

    /// Ideal membership decided in the presentation.
    pub fn contains(&self, ideal: &Ideal<F>, f: &Polynomial<F>) -> Result<bool> {
        let pre = self.preimage(ideal)?;
        Ok(pre.contains(&self.polynomial_ring, &self.lift(f)?))
    }

    /// Checks an intrinsic basis against the presentation: both generate the
    /// same ideal.
    pub fn validate_basis(&self, ideal: &Ideal<F>, basis: &MarkedGroebnerBasis<F>) -> Result<bool> {
        let pre = self.preimage(ideal)?;
        for g in basis.polynomials() {
            if !pre.contains(&self.polynomial_ring, &self.lift(&g)?) {
                return Ok(false);
            }
        }
        Ok(ideal.generators().iter().all(|g| basis.contains(&self.ring, g)))
    }
}
