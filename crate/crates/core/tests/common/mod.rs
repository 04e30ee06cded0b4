#![allow(dead_code)]

use nash_toric::cones::Cone;
use nash_toric::lattice::LatticeVector;
use nash_toric::nash::a_cone;
use nash_toric::polyalg::{Exponent, Field, MonomialOrder, Polynomial, SemigroupRing};
use nash_toric::semigroups::AffineSemigroup;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn cone(g: &[&[i64]]) -> Cone {
    Cone::from_i64(g).unwrap()
}

pub fn quadrant() -> Cone {
    cone(&[&[1, 0], &[0, 1]])
}

/// A_1, A_2, A_3 and cone((0,1),(5,-2)).
pub fn singular_battery() -> Vec<Cone> {
    vec![a_cone(1), a_cone(2), a_cone(3), cone(&[&[0, 1], &[5, -2]])]
}

/// A random unimodular 2x2 matrix as a product of elementary moves.
pub fn random_unimodular(rng: &mut ChaCha8Rng) -> [[i64; 2]; 2] {
    let mut m = [[1i64, 0], [0, 1]];
    for _ in 0..rng.gen_range(2..5) {
        let k = rng.gen_range(-2..=2);
        let (i, j) = if rng.gen_bool(0.5) { (0, 1) } else { (1, 0) };
        for c in 0..2 {
            m[i][c] += k * m[j][c];
        }
    }
    if rng.gen_bool(0.5) {
        m.swap(0, 1);
    }
    m
}

/// Ten distinct smooth cones: images of the quadrant under random
/// unimodular maps.
pub fn smooth_battery(seed: u64) -> Vec<Cone> {
    let mut r = rng(seed);
    let mut out: Vec<Cone> = Vec::new();
    while out.len() < 10 {
        let m = random_unimodular(&mut r);
        let c = Cone::new(2, vec![LatticeVector::from_i64(&[m[0][0], m[1][0]]), LatticeVector::from_i64(&[m[0][1], m[1][1]])])
            .unwrap();
        if !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

pub fn test_rings<F: Field>(field: F) -> Vec<SemigroupRing<F>> {
    [quadrant(), a_cone(1), a_cone(2), a_cone(3), cone(&[&[1, 0], &[1, 2]])]
        .iter()
        .map(|c| SemigroupRing::new(AffineSemigroup::of_cone(c).unwrap(), field.clone()).unwrap())
        .collect()
}

/// Sum of up to `depth` random Hilbert basis elements.
pub fn random_exponent<F: Field>(ring: &SemigroupRing<F>, rng: &mut ChaCha8Rng, depth: usize) -> Exponent {
    let hb = ring.semigroup().hilbert_basis();
    let mut e = vec![0i64; ring.dim()];
    for _ in 0..rng.gen_range(0..=depth) {
        let h = hb.choose(rng).unwrap().to_i64().unwrap();
        for (x, y) in e.iter_mut().zip(h) {
            *x += y;
        }
    }
    e
}

pub fn random_element<F: Field>(ring: &SemigroupRing<F>, rng: &mut ChaCha8Rng, terms: usize, depth: usize) -> Polynomial<F> {
    let f = ring.field();
    loop {
        let p = Polynomial::from_terms(
            f.clone(),
            (0..rng.gen_range(1..=terms)).map(|_| {
                let c = f.from_i64(*[-3i64, -2, -1, 1, 2, 3].choose(rng).unwrap());
                (random_exponent(ring, rng, depth), c)
            }),
        );
        if !p.is_zero() {
            return p;
        }
    }
}

/// A lattice point of the interior of sigma: a positive combination of rays.
pub fn random_interior_weight<F: Field>(ring: &SemigroupRing<F>, rng: &mut ChaCha8Rng) -> Vec<i64> {
    let mut w = vec![0i64; ring.dim()];
    for r in ring.semigroup().sigma().rays() {
        let k = rng.gen_range(1..5);
        for (x, y) in w.iter_mut().zip(r.to_i64().unwrap()) {
            *x += k * y;
        }
    }
    w
}

pub fn random_order<F: Field>(ring: &SemigroupRing<F>, rng: &mut ChaCha8Rng) -> MonomialOrder {
    let tie = MonomialOrder::default_tiebreak(ring.semigroup());
    MonomialOrder::weight_then(random_interior_weight(ring, rng), tie)
}
