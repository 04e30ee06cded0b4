//! The Groebner fan of an ideal of `k[S_sigma]`, restricted to `sigma`.
//!
//! A marked reduced Groebner basis `G` determines its cone
//! `C_G = {w in sigma : (a_i - b).w >= 0 for every b in supp(g_i)}`. In
//! dimension two the whole restricted fan is enumerated by sweeping from one
//! boundary ray of `sigma` to the other: at each wall `r` the basis for the
//! order "weight `r`, then weight of the far boundary ray, then the
//! tiebreak" is the basis valid at `r + eps * (far ray)` for all small
//! `eps > 0`, so its cone is the next cone of the fan.

use serde::Serialize;

use crate::cones::{Cone, ConvexCone, Fan};
use crate::error::{Error, Result};
use crate::groebner::{buchberger, Ideal, MarkedGroebnerBasis};
use crate::lattice::LatticeVector;
use crate::polyalg::{sub_exp, Field, MonomialOrder};

/// A maximal cone of the restricted Groebner fan with the basis that cuts it
/// out.
#[derive(Clone, Debug)]
pub struct GroebnerCone<F: Field> {
    pub cone: Cone,
    pub witness_weight: LatticeVector,
    pub basis: MarkedGroebnerBasis<F>,
}

/// `C_G`: the weights of `sigma` for which every marked term stays leading.
pub fn cone_of_basis<F: Field>(g: &MarkedGroebnerBasis<F>, sigma: &Cone) -> Result<Cone> {
    let d = sigma.ambient_dim();
    let dual = sigma.dual();
    let mut ineqs: Vec<LatticeVector> = dual.rays.clone();
    for l in &dual.lineality {
        ineqs.push(l.clone());
        ineqs.push(-l);
    }
    for (poly, alpha) in g.pairs() {
        for (beta, _) in poly.terms() {
            if beta != alpha {
                ineqs.push(LatticeVector::from_i64(&sub_exp(alpha, beta)));
            }
        }
    }
    let cone = ConvexCone::from_inequalities(d, &ineqs)?.to_cone()?;
    if cone.dimension() < sigma.dimension() {
        return Err(Error::DegenerateWeightCone);
    }
    Ok(cone)
}

/// The Groebner cone containing `w + eps * tiebreak`, in any dimension.
pub fn groebner_cone_at<F: Field>(ideal: &Ideal<F>, w: &[i64], tiebreak: &MonomialOrder) -> Result<GroebnerCone<F>> {
    ideal.ring().check_weight(w)?;
    let order = MonomialOrder::weight_then(w.to_vec(), tiebreak.clone());
    let basis = buchberger(ideal, &order)?;
    let cone = cone_of_basis(&basis, ideal.ring().semigroup().sigma())?;
    Ok(GroebnerCone { witness_weight: cone.interior_point(), cone, basis })
}

/// The restricted Groebner fan of a planar ideal, with one basis per cone.
#[derive(Clone, Debug)]
pub struct GroebnerFan<F: Field> {
    pub fan: Fan,
    pub cones: Vec<GroebnerCone<F>>,
}

impl<F: Field> GroebnerFan<F> {
    pub fn is_trivial(&self, sigma: &Cone) -> bool {
        is_trivial_fan(&self.fan, sigma)
    }
}

const MAX_SWEEP_STEPS: usize = 100_000;

/// Enumerates the restricted Groebner fan of `ideal` over a full-dimensional
/// planar `sigma` by a wall-crossing sweep.
pub fn groebner_fan_2d<F: Field>(ideal: &Ideal<F>, tiebreak: &MonomialOrder) -> Result<GroebnerFan<F>> {
    let sigma = ideal.ring().semigroup().sigma().clone();
    if sigma.ambient_dim() != 2 {
        return Err(Error::FanEnumerationUnsupported(sigma.ambient_dim()));
    }
    if !sigma.is_full_dimensional() {
        return Err(Error::NotFullDimensional);
    }
    let start = sigma.rays()[0].clone();
    let end = sigma.rays()[1].clone();
    let end_w = end.to_i64()?;

    let mut cones: Vec<GroebnerCone<F>> = Vec::new();
    let mut wall = start;
    for _ in 0..MAX_SWEEP_STEPS {
        let order = MonomialOrder::weight_then(wall.to_i64()?, MonomialOrder::weight_then(end_w.clone(), tiebreak.clone()));
        let basis = buchberger(ideal, &order)?;
        let cone = cone_of_basis(&basis, &sigma)?;
        let far = match cone.rays() {
            [a, b] if *a == wall => b.clone(),
            [a, b] if *b == wall => a.clone(),
            _ => {
                return Err(Error::InvalidFan(format!("sweep cone {:?} does not start at wall {}", cone, wall)));
            }
        };
        let gc = GroebnerCone { witness_weight: &wall + &far, cone, basis };
        match cones.last_mut() {
            Some(prev) if prev.basis.leading_exponents() == gc.basis.leading_exponents() => {
                // same initial ideal on both sides: not a genuine wall
                log::warn!("merging Groebner cones across {} (equal initial ideals)", wall);
                let merged = Cone::new(2, vec![prev.cone.rays()[0].clone(), prev.cone.rays()[1].clone(), far.clone()])?;
                prev.witness_weight = merged.interior_point();
                prev.cone = merged;
            }
            _ => cones.push(gc),
        }
        if far == end {
            let fan = Fan::new(2, cones.iter().map(|c| c.cone.clone()).collect())?;
            return Ok(GroebnerFan { fan, cones });
        }
        wall = far;
    }
    Err(Error::InvalidFan("sweep did not reach the end of the cone".into()))
}

/// Trivial means the fan is exactly the faces of `sigma`.
pub fn is_trivial_fan(fan: &Fan, sigma: &Cone) -> bool {
    fan.is_face_fan_of(sigma)
}

/// Serializable summary of one Groebner cone.
#[derive(Clone, Debug, Serialize)]
pub struct GroebnerConeSummary {
    pub rays: Vec<LatticeVector>,
    pub witness_weight: LatticeVector,
    pub leading_exponents: Vec<LatticeVector>,
}

impl<F: Field> From<&GroebnerCone<F>> for GroebnerConeSummary {
    fn from(c: &GroebnerCone<F>) -> Self {
        GroebnerConeSummary {
            rays: c.cone.rays().to_vec(),
            witness_weight: c.witness_weight.clone(),
            leading_exponents: c.basis.leading_exponents().iter().map(|e| LatticeVector::from_i64(e)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::{Polynomial, Rationals, SemigroupRing};
    use crate::semigroups::AffineSemigroup;

    fn ring(g: &[&[i64]]) -> SemigroupRing<Rationals> {
        SemigroupRing::new(AffineSemigroup::of_cone(&Cone::from_i64(g).unwrap()).unwrap(), Rationals).unwrap()
    }

    fn poly(terms: &[(&[i64], i64)]) -> Polynomial<Rationals> {
        use crate::polyalg::Field;
        Polynomial::from_terms(Rationals, terms.iter().map(|(e, c)| (e.to_vec(), Rationals.from_i64(*c))))
    }

    #[test]
    fn quadrant_is_trivial() {
        let q = ring(&[&[1, 0], &[0, 1]]);
        let i = Ideal::new(q.clone(), vec![poly(&[(&[1, 0], 1), (&[0, 0], -1)]), poly(&[(&[0, 1], 1), (&[0, 0], -1)])]).unwrap();
        let gb = buchberger(&i, &MonomialOrder::lex(2)).unwrap();
        let sigma = q.semigroup().sigma();
        assert_eq!(&cone_of_basis(&gb, sigma).unwrap(), sigma);
        let gf = groebner_fan_2d(&i, &MonomialOrder::default_tiebreak(q.semigroup())).unwrap();
        assert!(gf.is_trivial(sigma));
    }

    #[test]
    fn monomial_ideal_is_trivial() {
        let q = ring(&[&[1, 0], &[0, 1]]);
        let i = Ideal::new(q.clone(), vec![poly(&[(&[1, 0], 1)])]).unwrap();
        let gf = groebner_fan_2d(&i, &MonomialOrder::default_tiebreak(q.semigroup())).unwrap();
        assert!(gf.is_trivial(q.semigroup().sigma()));
    }

    #[test]
    fn one_variable() {
        let line = SemigroupRing::new(AffineSemigroup::orthant(1), Rationals).unwrap();
        let i = Ideal::new(line.clone(), vec![poly(&[(&[1], 1), (&[0], -1)])]).unwrap();
        let gb = buchberger(&i, &MonomialOrder::lex(1)).unwrap();
        assert_eq!(&cone_of_basis(&gb, line.semigroup().sigma()).unwrap(), line.semigroup().sigma());
        assert_eq!(groebner_fan_2d(&i, &MonomialOrder::lex(1)).unwrap_err(), Error::FanEnumerationUnsupported(1));
    }

    #[test]
    fn nontrivial_fan_example() {
        // x - y splits the quadrant along the diagonal
        let q = ring(&[&[1, 0], &[0, 1]]);
        let i = Ideal::new(q.clone(), vec![poly(&[(&[1, 0], 1), (&[0, 1], -1)])]).unwrap();
        let gf = groebner_fan_2d(&i, &MonomialOrder::default_tiebreak(q.semigroup())).unwrap();
        let cones: Vec<Cone> = gf.fan.maximal_cones().to_vec();
        assert_eq!(cones, vec![Cone::from_i64(&[&[0, 1], &[1, 1]]).unwrap(), Cone::from_i64(&[&[1, 0], &[1, 1]]).unwrap()]);
        assert!(!gf.is_trivial(q.semigroup().sigma()));
    }
}
