//! Affine semigroups `S = sigma^dual ∩ M` and their Hilbert bases.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::cones::{Cone, ConvexCone};
use crate::error::{Error, Result};
use crate::lattice::{LatticeMatrix, LatticeVector};

/// Simplicial cones (as ray lists) covering `cone`, using a pulling
/// triangulation from the first ray.
pub fn triangulate(cone: &Cone) -> Vec<Vec<LatticeVector>> {
    if cone.is_simplicial() {
        return vec![cone.rays().to_vec()];
    }
    let apex = &cone.rays()[0];
    let mut out = Vec::new();
    for facet in cone.facets() {
        if facet.rays().contains(apex) {
            continue;
        }
        for mut simplex in triangulate(&facet) {
            simplex.insert(0, apex.clone());
            out.push(simplex);
        }
    }
    out
}

/// Lattice points of the half-open parallelepiped `{sum t_i r_i : 0 <= t_i < 1}`
/// of linearly independent `rays`.
fn parallelepiped_points(rays: &[LatticeVector]) -> Vec<LatticeVector> {
    let dim = rays[0].dim();
    let k = rays.len();
    let lo: Vec<BigInt> = (0..dim).map(|i| rays.iter().map(|r| r[i].clone().min(BigInt::zero())).sum()).collect();
    let hi: Vec<BigInt> = (0..dim).map(|i| rays.iter().map(|r| r[i].clone().max(BigInt::zero())).sum()).collect();

    // pick k coordinates on which the rays are independent to solve for t
    let cols = independent_coordinates(rays);
    let sub = LatticeMatrix::new(rays.iter().map(|r| LatticeVector::new(cols.iter().map(|&c| r[c].clone()).collect())).collect())
        .expect("nonempty");
    let det = sub.determinant();

    let mut out = Vec::new();
    let mut cur: Vec<BigInt> = lo.clone();
    loop {
        let x = LatticeVector::new(cur.clone());
        let rhs: Vec<BigInt> = cols.iter().map(|&c| x[c].clone()).collect();
        // Cramer: t_j = det(sub with row j replaced by rhs) / det
        let t: Vec<BigRational> = (0..k)
            .map(|j| {
                let mut rows: Vec<LatticeVector> = sub.rows().to_vec();
                rows[j] = LatticeVector::new(rhs.clone());
                BigRational::new(LatticeMatrix::new(rows).expect("nonempty").determinant(), det.clone())
            })
            .collect();
        let in_range = t.iter().all(|ti| !ti.is_negative() && ti < &BigRational::from_integer(1.into()));
        if in_range {
            let recon: Vec<BigRational> = (0..dim)
                .map(|i| t.iter().zip(rays).map(|(tj, r)| tj * BigRational::from_integer(r[i].clone())).sum())
                .collect();
            if recon.iter().zip(x.entries()).all(|(a, b)| a == &BigRational::from_integer(b.clone())) {
                out.push(x);
            }
        }
        // odometer over the box
        let mut i = 0;
        loop {
            if i == dim {
                return out;
            }
            if cur[i] < hi[i] {
                cur[i] += 1;
                break;
            }
            cur[i] = lo[i].clone();
            i += 1;
        }
    }
}

fn independent_coordinates(rays: &[LatticeVector]) -> Vec<usize> {
    let dim = rays[0].dim();
    let k = rays.len();
    let mut chosen: Vec<usize> = Vec::new();
    for c in 0..dim {
        let mut trial = chosen.clone();
        trial.push(c);
        // columns as vectors over the rays
        let m = LatticeMatrix::new(trial.iter().map(|&j| LatticeVector::new(rays.iter().map(|r| r[j].clone()).collect())).collect())
            .expect("nonempty");
        if m.rank() == trial.len() {
            chosen = trial;
        }
        if chosen.len() == k {
            break;
        }
    }
    chosen
}

/// Minimal generating set of `cone ∩ Z^d`, sorted lexicographically.
///
/// Candidates are the rays together with the lattice points of the
/// fundamental parallelepipeds of a triangulation; the irreducible candidates
/// are exactly the Hilbert basis.
pub fn hilbert_basis(cone: &ConvexCone) -> Result<Vec<LatticeVector>> {
    if !cone.is_pointed() {
        return Err(Error::NotPointed);
    }
    let cone = cone.to_cone()?;
    if cone.rays().is_empty() {
        return Ok(Vec::new());
    }
    let mut candidates: BTreeSet<LatticeVector> = cone.rays().iter().cloned().collect();
    for simplex in triangulate(&cone) {
        candidates.extend(parallelepiped_points(&simplex).into_iter().filter(|p| !p.is_zero()));
    }
    let normals = cone.dual();
    let member = |v: &LatticeVector| {
        normals.rays.iter().all(|u| !u.dot(v).is_negative()) && normals.lineality.iter().all(|l| l.dot(v).is_zero())
    };
    let basis = candidates
        .iter()
        .filter(|x| !candidates.iter().any(|h| h != *x && member(&(*x - h))))
        .cloned()
        .collect();
    Ok(basis)
}

/// The semigroup `S_sigma = sigma^dual ∩ M` of a strongly convex cone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AffineSemigroup {
    sigma: Cone,
    dual_cone: Cone,
    hilbert_basis: Vec<LatticeVector>,
}

impl AffineSemigroup {
    /// Requires `sigma` full-dimensional so that the dual is pointed.
    pub fn of_cone(sigma: &Cone) -> Result<Self> {
        let dual = sigma.dual();
        let hilbert_basis = hilbert_basis(&dual)?;
        Ok(AffineSemigroup { sigma: sigma.clone(), dual_cone: dual.to_cone()?, hilbert_basis })
    }

    /// `N^d`, the semigroup of the positive orthant.
    pub fn orthant(dim: usize) -> Self {
        let rays: Vec<LatticeVector> = (0..dim).map(|i| LatticeVector::unit(dim, i)).collect();
        let sigma = Cone::new(dim, rays).expect("orthant is strongly convex");
        Self::of_cone(&sigma).expect("orthant is full-dimensional")
    }

    pub fn ambient_dim(&self) -> usize {
        self.sigma.ambient_dim()
    }

    pub fn sigma(&self) -> &Cone {
        &self.sigma
    }

    pub fn dual_cone(&self) -> &Cone {
        &self.dual_cone
    }

    pub fn hilbert_basis(&self) -> &[LatticeVector] {
        &self.hilbert_basis
    }

    /// `v ∈ sigma^dual ∩ Z^d`; for a normal semigroup this is membership.
    pub fn contains(&self, v: &LatticeVector) -> bool {
        v.dim() == self.ambient_dim() && self.sigma.rays().iter().all(|r| !r.dot(v).is_negative())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[i64]) -> LatticeVector {
        LatticeVector::from_i64(x)
    }

    fn hb(g: &[&[i64]]) -> Vec<LatticeVector> {
        let c = Cone::from_i64(g).unwrap();
        hilbert_basis(&ConvexCone { dim: c.ambient_dim(), lineality: vec![], rays: c.rays().to_vec() }).unwrap()
    }

    #[test]
    fn hilbert_examples() {
        assert_eq!(hb(&[&[1, 0], &[0, 1]]), vec![v(&[0, 1]), v(&[1, 0])]);
        assert_eq!(hb(&[&[1, 0], &[3, 4]]), vec![v(&[1, 0]), v(&[1, 1]), v(&[3, 4])]);
        assert_eq!(hb(&[&[1, 0], &[1, 2]]), vec![v(&[1, 0]), v(&[1, 1]), v(&[1, 2])]);
        // cone over a square: not simplicial, basis = 4 rays + (0,0,1)
        let sq = hb(&[&[1, 0, 1], &[0, 1, 1], &[-1, 0, 1], &[0, -1, 1]]);
        assert_eq!(sq.len(), 5);
        assert!(sq.contains(&v(&[0, 0, 1])));
    }

    #[test]
    fn degenerate_inputs() {
        let zero = ConvexCone { dim: 2, lineality: vec![], rays: vec![] };
        assert_eq!(hilbert_basis(&zero).unwrap(), Vec::<LatticeVector>::new());
        let half = Cone::from_i64(&[&[1, 0]]).unwrap().dual();
        assert_eq!(hilbert_basis(&half), Err(Error::NotPointed));
        assert!(AffineSemigroup::of_cone(&Cone::from_i64(&[&[1, 0]]).unwrap()).is_err());
    }

    #[test]
    fn membership() {
        let s = AffineSemigroup::of_cone(&Cone::from_i64(&[&[0, 1], &[4, -3]]).unwrap()).unwrap();
        assert!(s.contains(&v(&[2, 1])));
        assert!(!s.contains(&v(&[2, 3])));
        assert!(s.contains(&v(&[0, 0])));
        assert_eq!(s.hilbert_basis(), &[v(&[1, 0]), v(&[1, 1]), v(&[3, 4])]);
    }
}
