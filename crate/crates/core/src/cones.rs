//! Rational polyhedral cones, their duals and faces, and fans.
//!
//! A [`Cone`] is always strongly convex and stored by its primitive extreme
//! rays in lexicographic order, so two cones are equal exactly when their
//! point sets are. Duals of lower-dimensional cones contain lines; those are
//! represented by [`ConvexCone`], which keeps a lineality basis next to the
//! rays.
//!
//! Conversions between generators and inequalities go through a
//! Fourier-Motzkin style extreme-ray enumeration: a ray of
//! `{x : a.x >= 0, b.x = 0}` is a feasible vector annihilated by `d - 1`
//! independent constraints.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{cofactor_vector, extends_to_basis, kernel_basis, row_space_basis, smith_normal_form, LatticeMatrix, LatticeVector};

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Generators of `{x in R^d : a.x >= 0 for a in ineqs, b.x = 0 for b in eqs}`
/// as `(lineality basis, extreme rays of the part orthogonal to it)`.
pub(crate) fn hrep_to_vrep(ineqs: &[LatticeVector], eqs: &[LatticeVector], dim: usize) -> (Vec<LatticeVector>, Vec<LatticeVector>) {
    let ineqs: Vec<LatticeVector> = ineqs
        .iter()
        .filter(|a| !a.is_zero())
        .map(LatticeVector::primitive)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let all: Vec<LatticeVector> = ineqs.iter().chain(eqs).cloned().collect();
    let lineality = kernel_basis(&all, dim);

    // Cut the lineality space away so the remaining cone is pointed.
    let mut equalities: Vec<LatticeVector> = eqs.to_vec();
    equalities.extend(lineality.iter().cloned());
    let equalities = row_space_basis(&equalities);
    if equalities.len() >= dim {
        return (lineality, Vec::new());
    }
    let k = dim - 1 - equalities.len();
    let feasible = |x: &LatticeVector| ineqs.iter().all(|a| !a.dot(x).is_negative());
    let mut rays = BTreeSet::new();
    for subset in combinations(ineqs.len(), k) {
        let mut rows = equalities.clone();
        rows.extend(subset.iter().map(|&i| ineqs[i].clone()));
        let x = cofactor_vector(&rows, dim);
        if x.is_zero() {
            continue;
        }
        let x = x.primitive();
        if feasible(&x) {
            rays.insert(x);
        } else {
            let neg = -&x;
            if feasible(&neg) {
                rays.insert(neg);
            }
        }
    }
    (lineality, rays.into_iter().collect())
}

/// A polyhedral cone that may contain lines: `span(lineality) + cone(rays)`.
/// Rays are orthogonal to the lineality space, which makes the representation
/// canonical.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct ConvexCone {
    pub dim: usize,
    pub lineality: Vec<LatticeVector>,
    pub rays: Vec<LatticeVector>,
}

impl ConvexCone {
    pub fn from_generators(dim: usize, gens: &[LatticeVector]) -> Result<Self> {
        check_dims(dim, gens)?;
        let (dl, dr) = hrep_to_vrep(gens, &[], dim);
        let (lineality, rays) = hrep_to_vrep(&dr, &dl, dim);
        Ok(ConvexCone { dim, lineality, rays })
    }

    /// The cone `{x : a.x >= 0 for every a in ineqs}`.
    pub fn from_inequalities(dim: usize, ineqs: &[LatticeVector]) -> Result<Self> {
        check_dims(dim, ineqs)?;
        let (lineality, rays) = hrep_to_vrep(ineqs, &[], dim);
        Ok(ConvexCone { dim, lineality, rays })
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality.is_empty()
    }

    /// Rays plus both signs of each lineality vector, sorted.
    pub fn generators(&self) -> Vec<LatticeVector> {
        let mut g: Vec<LatticeVector> = self.rays.clone();
        for l in &self.lineality {
            g.push(l.clone());
            g.push(-l);
        }
        g.sort();
        g
    }

    pub fn dual(&self) -> ConvexCone {
        let (lineality, rays) = hrep_to_vrep(&self.rays, &self.lineality, self.dim);
        ConvexCone { dim: self.dim, lineality, rays }
    }

    pub fn contains(&self, v: &LatticeVector) -> bool {
        let d = self.dual();
        d.rays.iter().all(|u| !u.dot(v).is_negative()) && d.lineality.iter().all(|l| l.dot(v).is_zero())
    }

    pub fn to_cone(&self) -> Result<Cone> {
        if !self.is_pointed() {
            return Err(Error::NotStronglyConvex);
        }
        Ok(Cone { dim: self.dim, rays: self.rays.clone() })
    }
}

fn check_dims(dim: usize, vs: &[LatticeVector]) -> Result<()> {
    match vs.iter().find(|v| v.dim() != dim) {
        Some(v) => Err(Error::DimensionMismatch { expected: dim, found: v.dim() }),
        None => Ok(()),
    }
}

/// A strongly convex rational polyhedral cone.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "ConeJson", into = "ConeJson")]
pub struct Cone {
    dim: usize,
    rays: Vec<LatticeVector>,
}

#[derive(Serialize, Deserialize)]
struct ConeJson {
    dim: usize,
    rays: Vec<LatticeVector>,
}

impl TryFrom<ConeJson> for Cone {
    type Error = Error;
    fn try_from(c: ConeJson) -> Result<Cone> {
        Cone::new(c.dim, c.rays)
    }
}

impl From<Cone> for ConeJson {
    fn from(c: Cone) -> ConeJson {
        ConeJson { dim: c.dim, rays: c.rays }
    }
}

impl fmt::Debug for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cone[")?;
        for (i, r) in self.rays.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", r)?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Cone {
    /// The cone generated by `gens`, reduced to primitive extreme rays.
    /// Fails if the generators span a cone containing a line.
    pub fn new(dim: usize, gens: Vec<LatticeVector>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Empty("ambient dimension must be positive"));
        }
        ConvexCone::from_generators(dim, &gens)?.to_cone()
    }

    pub fn from_i64(gens: &[&[i64]]) -> Result<Self> {
        let dim = gens.first().ok_or(Error::Empty("no generators"))?.len();
        Self::new(dim, gens.iter().map(|g| LatticeVector::from_i64(g)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        Cone { dim, rays: Vec::new() }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    /// Dimension of the linear span.
    pub fn dimension(&self) -> usize {
        if self.rays.is_empty() {
            0
        } else {
            row_space_basis(&self.rays).len()
        }
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dimension() == self.dim
    }

    pub fn is_simplicial(&self) -> bool {
        self.dimension() == self.rays.len()
    }

    fn as_convex(&self) -> ConvexCone {
        ConvexCone { dim: self.dim, lineality: Vec::new(), rays: self.rays.clone() }
    }

    /// `{u : u(v) >= 0 for all v in the cone}`.
    pub fn dual(&self) -> ConvexCone {
        self.as_convex().dual()
    }

    pub fn contains(&self, v: &LatticeVector) -> bool {
        self.as_convex().contains(v)
    }

    pub fn contains_cone(&self, other: &Cone) -> bool {
        let d = self.dual();
        other.rays.iter().all(|v| {
            d.rays.iter().all(|u| !u.dot(v).is_negative()) && d.lineality.iter().all(|l| l.dot(v).is_zero())
        })
    }

    pub fn intersection(&self, other: &Cone) -> Cone {
        let a = self.dual();
        let b = other.dual();
        let ineqs: Vec<LatticeVector> = a.rays.iter().chain(&b.rays).cloned().collect();
        let eqs: Vec<LatticeVector> = a.lineality.iter().chain(&b.lineality).cloned().collect();
        let (lin, rays) = hrep_to_vrep(&ineqs, &eqs, self.dim);
        debug_assert!(lin.is_empty(), "intersection of pointed cones is pointed");
        Cone { dim: self.dim, rays }
    }

    /// Sum of the rays: a point of the relative interior.
    pub fn interior_point(&self) -> LatticeVector {
        self.rays.iter().fold(LatticeVector::zero(self.dim), |acc, r| &acc + r)
    }

    /// All faces, from `{0}` up to the cone itself, sorted by dimension and
    /// then lexicographically.
    pub fn faces(&self) -> Vec<Cone> {
        let d = self.dual();
        let mut seen: BTreeSet<Vec<LatticeVector>> = BTreeSet::new();
        let normals = &d.rays;
        // Every face is cut out by a set of facet normals; enumerate the ray
        // sets reachable by intersecting facets.
        let mut frontier: Vec<Vec<LatticeVector>> = vec![self.rays.clone()];
        seen.insert(self.rays.clone());
        while let Some(face) = frontier.pop() {
            for u in normals {
                let sub: Vec<LatticeVector> = face.iter().filter(|r| u.dot(r).is_zero()).cloned().collect();
                if sub.len() < face.len() && seen.insert(sub.clone()) {
                    frontier.push(sub);
                }
            }
        }
        let mut faces: Vec<Cone> = seen.into_iter().map(|rays| Cone { dim: self.dim, rays }).collect();
        faces.sort_by(|a, b| a.dimension().cmp(&b.dimension()).then_with(|| a.cmp(b)));
        faces
    }

    pub fn facets(&self) -> Vec<Cone> {
        let k = self.dimension();
        if k == 0 {
            return Vec::new();
        }
        self.faces().into_iter().filter(|f| f.dimension() + 1 == k).collect()
    }

    /// Whether `other` is a face of this cone.
    pub fn has_face(&self, other: &Cone) -> bool {
        if !self.contains_cone(other) {
            return false;
        }
        match self.minimal_face_containing(&other.interior_point()) {
            Ok(f) => &f == other,
            Err(_) => false,
        }
    }

    fn minimal_face_containing(&self, v: &LatticeVector) -> Result<Cone> {
        let d = self.dual();
        if !(d.rays.iter().all(|u| !u.dot(v).is_negative()) && d.lineality.iter().all(|l| l.dot(v).is_zero())) {
            return Err(Error::LimitDoesNotExist);
        }
        let tight: Vec<&LatticeVector> = d.rays.iter().filter(|u| u.dot(v).is_zero()).collect();
        let rays = self.rays.iter().filter(|r| tight.iter().all(|u| u.dot(r).is_zero())).cloned().collect();
        Ok(Cone { dim: self.dim, rays })
    }

    /// The face whose relative interior contains `v`: the orbit whose
    /// distinguished point is the limit of the one-parameter subgroup of `v`.
    pub fn limit_face(&self, v: &LatticeVector) -> Result<Cone> {
        if v.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: v.dim() });
        }
        if v.is_zero() {
            return Err(Error::ZeroVector);
        }
        self.minimal_face_containing(v)
    }

    /// Smooth iff the rays extend to a basis of the lattice.
    pub fn is_smooth(&self) -> bool {
        extends_to_basis(&self.rays).unwrap_or(false)
    }

    /// Index of the sublattice spanned by the rays inside its saturation, for
    /// simplicial cones. Equals `|det|` for full-dimensional simplicial cones.
    pub fn multiplicity(&self) -> Option<BigInt> {
        if !self.is_simplicial() {
            return None;
        }
        if self.rays.is_empty() {
            return Some(BigInt::from(1));
        }
        let m = LatticeMatrix::new(self.rays.clone()).ok()?;
        Some(smith_normal_form(&m).into_iter().product())
    }

    /// Apply the linear map `x -> x * a` (rows of `a` are images of the unit
    /// vectors).
    pub fn transform(&self, a: &LatticeMatrix) -> Result<Cone> {
        let rays: Vec<LatticeVector> = self
            .rays
            .iter()
            .map(|r| LatticeMatrix::new(vec![r.clone()]).map(|m| m.mul(a).rows()[0].clone()))
            .collect::<Result<_>>()?;
        Cone::new(a.ncols(), rays)
    }
}

/// Exact coordinates of `v` in the basis formed by the two rays of a 2D cone.
pub fn coordinates_2d(r1: &LatticeVector, r2: &LatticeVector, v: &LatticeVector) -> (BigRational, BigRational) {
    let det = &r1[0] * &r2[1] - &r1[1] * &r2[0];
    let a = &v[0] * &r2[1] - &v[1] * &r2[0];
    let b = &r1[0] * &v[1] - &r1[1] * &v[0];
    (BigRational::new(a, det.clone()), BigRational::new(b, det))
}

/// A finite collection of cones closed under faces, stored by its maximal
/// cones.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FanJson", into = "FanJson")]
pub struct Fan {
    dim: usize,
    maximal_cones: Vec<Cone>,
}

#[derive(Serialize, Deserialize)]
struct FanJson {
    dim: usize,
    maximal_cones: Vec<Vec<LatticeVector>>,
}

impl TryFrom<FanJson> for Fan {
    type Error = Error;
    fn try_from(f: FanJson) -> Result<Fan> {
        let cones = f.maximal_cones.into_iter().map(|rays| Cone::new(f.dim, rays)).collect::<Result<Vec<_>>>()?;
        Fan::new(f.dim, cones)
    }
}

impl From<Fan> for FanJson {
    fn from(f: Fan) -> FanJson {
        FanJson { dim: f.dim, maximal_cones: f.maximal_cones.into_iter().map(|c| c.rays).collect() }
    }
}

impl fmt::Debug for Fan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.maximal_cones).finish()
    }
}

impl Fan {
    /// Builds a fan from cones, dropping cones that are faces of others and
    /// validating that any two cones meet in a common face.
    pub fn new(dim: usize, cones: Vec<Cone>) -> Result<Self> {
        let fan = Self::new_unchecked(dim, cones)?;
        fan.validate()?;
        Ok(fan)
    }

    pub(crate) fn new_unchecked(dim: usize, cones: Vec<Cone>) -> Result<Self> {
        if cones.is_empty() {
            return Err(Error::InvalidFan("a fan needs at least one cone".into()));
        }
        for c in &cones {
            if c.dim != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: c.dim });
            }
        }
        let set: BTreeSet<Cone> = cones.into_iter().collect();
        let maximal: Vec<Cone> =
            set.iter().filter(|c| !set.iter().any(|o| o != *c && o.has_face(c))).cloned().collect();
        Ok(Fan { dim, maximal_cones: maximal })
    }

    /// The fan of all faces of `cone`.
    pub fn face_fan(cone: &Cone) -> Fan {
        Fan { dim: cone.dim, maximal_cones: vec![cone.clone()] }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn maximal_cones(&self) -> &[Cone] {
        &self.maximal_cones
    }

    /// Every cone of the fan (face closure), sorted.
    pub fn cones(&self) -> Vec<Cone> {
        let set: BTreeSet<Cone> = self.maximal_cones.iter().flat_map(Cone::faces).collect();
        set.into_iter().collect()
    }

    /// Checks that every pairwise intersection of maximal cones is a face of
    /// both. Works in any dimension through the face test of
    /// [`Cone::has_face`].
    pub fn validate(&self) -> Result<()> {
        for (i, a) in self.maximal_cones.iter().enumerate() {
            for b in &self.maximal_cones[i + 1..] {
                let c = a.intersection(b);
                if !a.has_face(&c) || !b.has_face(&c) {
                    return Err(Error::InvalidFan(format!("{:?} and {:?} meet in {:?}, not a common face", a, b, c)));
                }
            }
        }
        Ok(())
    }

    /// Whether the fan consists of the faces of `sigma` only.
    pub fn is_face_fan_of(&self, sigma: &Cone) -> bool {
        self.maximal_cones.len() == 1 && &self.maximal_cones[0] == sigma
    }

    pub fn contains_cone(&self, cone: &Cone) -> bool {
        self.maximal_cones.iter().any(|c| c == cone || c.has_face(cone))
    }
}

/// True iff every cone of `s` lies in a cone of `t` and every cone of `t` is a
/// union of cones of `s`.
pub fn is_refinement(s: &Fan, t: &Fan) -> bool {
    if s.dim != t.dim {
        return false;
    }
    if !s.maximal_cones.iter().all(|c| t.maximal_cones.iter().any(|tau| tau.contains_cone(c))) {
        return false;
    }
    t.maximal_cones.iter().all(|tau| covered_by(tau, s))
}

/// Whether the cones of `s` lying in `tau` cover it. The top-dimensional
/// pieces inside `tau` cover it iff each of their facets that is not on the
/// boundary of `tau` is shared with another piece.
fn covered_by(tau: &Cone, s: &Fan) -> bool {
    let k = tau.dimension();
    if k == 0 {
        return true;
    }
    let pieces: Vec<Cone> = s
        .cones()
        .into_iter()
        .filter(|c| c.dimension() == k && tau.contains_cone(c))
        .collect();
    if pieces.is_empty() {
        return false;
    }
    let tau_facets = tau.facets();
    for p in &pieces {
        for f in p.facets() {
            if tau_facets.iter().any(|tf| tf.contains_cone(&f)) {
                continue;
            }
            let shared = pieces.iter().filter(|q| *q != p && q.has_face(&f)).count();
            if shared == 0 {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[i64]) -> LatticeVector {
        LatticeVector::from_i64(x)
    }

    fn cone(g: &[&[i64]]) -> Cone {
        Cone::from_i64(g).unwrap()
    }

    #[test]
    fn canonical_rays() {
        let c = cone(&[&[4, -3], &[0, 2], &[1, 0], &[8, -6]]);
        assert_eq!(c.rays(), &[v(&[0, 1]), v(&[4, -3])]);
        assert_eq!(Cone::from_i64(&[&[1, 0], &[-1, 0]]), Err(Error::NotStronglyConvex));
    }

    #[test]
    fn dual_examples() {
        let q = cone(&[&[1, 0], &[0, 1]]);
        assert_eq!(q.dual().to_cone().unwrap(), q);
        let a3 = cone(&[&[0, 1], &[4, -3]]);
        assert_eq!(a3.dual().to_cone().unwrap(), cone(&[&[1, 0], &[3, 4]]));
        let ray = cone(&[&[1, 0]]);
        let d = ray.dual();
        assert_eq!(d.lineality, vec![v(&[0, 1])]);
        assert_eq!(d.rays, vec![v(&[1, 0])]);
        assert_eq!(d.generators(), vec![v(&[0, -1]), v(&[0, 1]), v(&[1, 0])]);
    }

    #[test]
    fn double_dual_3d() {
        let c = cone(&[&[1, 0, 0], &[0, 1, 0], &[1, 0, 1], &[0, 1, 1]]);
        assert_eq!(c.rays().len(), 4);
        assert_eq!(c.dual().to_cone().unwrap().dual().to_cone().unwrap(), c);
    }

    #[test]
    fn faces_examples() {
        let q = cone(&[&[1, 0], &[0, 1]]);
        assert_eq!(q.faces(), vec![Cone::zero(2), cone(&[&[0, 1]]), cone(&[&[1, 0]]), q.clone()]);
        let a3 = cone(&[&[0, 1], &[4, -3]]);
        assert_eq!(a3.faces(), vec![Cone::zero(2), cone(&[&[0, 1]]), cone(&[&[4, -3]]), a3.clone()]);
        let r = cone(&[&[1, 0]]);
        assert_eq!(r.faces(), vec![Cone::zero(2), r.clone()]);
        let sq = cone(&[&[1, 0, 1], &[0, 1, 1], &[-1, 0, 1], &[0, -1, 1]]);
        assert_eq!(sq.faces().len(), 1 + 4 + 4 + 1);
    }

    #[test]
    fn smoothness() {
        assert!(cone(&[&[1, 0], &[0, 1]]).is_smooth());
        assert!(!cone(&[&[0, 1], &[4, -3]]).is_smooth());
        assert!(!cone(&[&[2, -1], &[0, 1]]).is_smooth());
        assert!(cone(&[&[1, 0]]).is_smooth());
        assert!(Cone::zero(2).is_smooth());
        assert_eq!(cone(&[&[0, 1], &[4, -3]]).multiplicity(), Some(BigInt::from(4)));
    }

    #[test]
    fn limit_faces() {
        let a3 = cone(&[&[0, 1], &[4, -3]]);
        assert_eq!(a3.limit_face(&v(&[1, 0])).unwrap(), a3);
        let (s, t) = coordinates_2d(&v(&[0, 1]), &v(&[4, -3]), &v(&[1, 0]));
        assert_eq!((s.to_string(), t.to_string()), ("3/4".to_string(), "1/4".to_string()));
        assert_eq!(a3.limit_face(&v(&[0, 2])).unwrap(), cone(&[&[0, 1]]));
        assert_eq!(a3.limit_face(&v(&[-1, 0])), Err(Error::LimitDoesNotExist));
        assert_eq!(a3.limit_face(&v(&[0, 0])), Err(Error::ZeroVector));
    }

    #[test]
    fn refinements() {
        let a3 = cone(&[&[0, 1], &[4, -3]]);
        let trivial = Fan::face_fan(&a3);
        assert!(is_refinement(&trivial, &trivial));
        let split = Fan::new(2, vec![cone(&[&[0, 1], &[1, 0]]), cone(&[&[1, 0], &[4, -3]])]).unwrap();
        assert!(is_refinement(&split, &trivial));
        assert!(!is_refinement(&trivial, &split));
        let quad = Fan::face_fan(&cone(&[&[1, 0], &[0, 1]]));
        assert!(!is_refinement(&quad, &trivial));
        // a fan that misses part of the cone
        let partial = Fan::new(2, vec![cone(&[&[0, 1], &[1, 0]])]).unwrap();
        assert!(!is_refinement(&partial, &trivial));
    }

    #[test]
    fn fan_validation() {
        let bad = Fan::new(2, vec![cone(&[&[0, 1], &[2, -1]]), cone(&[&[1, 0], &[4, -3]])]);
        assert!(matches!(bad, Err(Error::InvalidFan(_))));
        let f = Fan::new(2, vec![cone(&[&[0, 1], &[1, 0]]), cone(&[&[1, 0]])]).unwrap();
        assert_eq!(f.maximal_cones().len(), 1);
    }

    #[test]
    fn json_schema() {
        let c: Cone = serde_json::from_str(r#"{"dim":2,"rays":[[4,-3],[0,1]]}"#).unwrap();
        assert_eq!(serde_json::to_string(&c).unwrap(), r#"{"dim":2,"rays":[[0,1],[4,-3]]}"#);
        let f = Fan::face_fan(&c);
        assert_eq!(serde_json::to_string(&f).unwrap(), r#"{"dim":2,"maximal_cones":[[[0,1],[4,-3]]]}"#);
    }
}
