//! Numerical semigroups of curve branches and the criterion for the `n`-th
//! Nash modification of a branch to be nonsingular.
//!
//! Elements are indexed `s_{-1} = 0 < s_0 < s_1 < ...`, so `s_0` is the
//! multiplicity. The `n`-th Nash modification is nonsingular at the origin
//! iff `s_n - 1` lies in the semigroup. The criterion only holds in
//! characteristic zero.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyalg::CoefficientField;

/// A numerical semigroup given by generators with gcd 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumericalSemigroup {
    generators: Vec<u64>,
    /// Membership of `0..conductor`; everything from the conductor on is in.
    below_conductor: Vec<bool>,
    conductor: u64,
}

/// The semigroup generated by `gs`.
pub fn semigroup_from_generators(gs: &[u64]) -> Result<NumericalSemigroup> {
    NumericalSemigroup::new(gs)
}

impl NumericalSemigroup {
    pub fn new(gs: &[u64]) -> Result<Self> {
        if gs.is_empty() || gs.contains(&0) || gs.iter().fold(0u64, |g, &x| g.gcd(&x)) != 1 {
            return Err(Error::NotBranchSemigroup);
        }
        let mut generators = gs.to_vec();
        generators.sort_unstable();
        generators.dedup();
        let m = generators[0];
        let mut member = vec![true];
        let mut run = 1u64;
        let mut x = 0u64;
        // a run of m consecutive elements means everything after is in
        while run < m {
            x += 1;
            let inside = generators.iter().any(|&g| g <= x && member[(x - g) as usize]);
            member.push(inside);
            run = if inside { run + 1 } else { 0 };
        }
        let conductor = x + 1 - m;
        member.truncate(conductor as usize);
        Ok(NumericalSemigroup { generators, below_conductor: member, conductor })
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    /// Least `c` with `[c, infinity)` inside the semigroup.
    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn multiplicity(&self) -> u64 {
        self.generators[0]
    }

    pub fn contains(&self, x: u64) -> bool {
        x >= self.conductor || self.below_conductor[x as usize]
    }

    /// Elements in increasing order, starting with `s_{-1} = 0`.
    pub fn elements(&self) -> impl Iterator<Item = u64> + '_ {
        (0u64..).filter(move |&x| self.contains(x))
    }

    /// `s_n` for `n >= -1`.
    pub fn element(&self, n: i64) -> u64 {
        assert!(n >= -1, "elements are indexed from -1");
        self.elements().nth((n + 1) as usize).expect("semigroup is infinite")
    }

    /// The gaps `N \ S`.
    pub fn gaps(&self) -> Vec<u64> {
        (0..self.conductor).filter(|&x| !self.contains(x)).collect()
    }
}

/// Whether the `n`-th Nash modification of a branch with semigroup `s` is
/// nonsingular: `s_n - 1 ∈ S`.
pub fn yasuda_nonsingular(s: &NumericalSemigroup, n: u64) -> bool {
    assert!(n >= 1, "the Nash order is positive");
    s.contains(s.element(n as i64) - 1)
}

/// Applies the criterion only over a field of characteristic zero.
pub fn yasuda_nonsingular_over(s: &NumericalSemigroup, n: u64, field: CoefficientField) -> Result<bool> {
    check_characteristic(field)?;
    Ok(yasuda_nonsingular(s, n))
}

pub fn check_characteristic(field: CoefficientField) -> Result<()> {
    match field.characteristic() {
        0 => Ok(()),
        p => Err(Error::PositiveCharacteristic(p)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionOrders {
    /// Orders `1 <= n <= up_to` passing the criterion.
    pub good: Vec<u64>,
    /// Least `N >= 1` with `s_N - 1 >= conductor`; every `n >= N` is good.
    pub stable_threshold: u64,
}

pub fn resolution_orders(s: &NumericalSemigroup, up_to: u64) -> ResolutionOrders {
    let good = (1..=up_to).filter(|&n| yasuda_nonsingular(s, n)).collect();
    let stable_threshold = (1u64..).find(|&n| s.element(n as i64) - 1 >= s.conductor()).expect("elements grow");
    ResolutionOrders { good, stable_threshold }
}

/// The JSON payload of the curve command.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveReport {
    pub generators: Vec<u64>,
    pub good_orders: Vec<u64>,
    pub stable_threshold: u64,
    pub conductor: u64,
    /// `s_{-1}, s_0, ..., s_{up_to}`.
    pub elements_prefix: Vec<u64>,
}

pub fn curve_report(s: &NumericalSemigroup, up_to: u64) -> CurveReport {
    let r = resolution_orders(s, up_to);
    CurveReport {
        generators: s.generators().to_vec(),
        good_orders: r.good,
        stable_threshold: r.stable_threshold,
        conductor: s.conductor(),
        elements_prefix: s.elements().take(up_to as usize + 2).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conductors() {
        let s = semigroup_from_generators(&[2, 3]).unwrap();
        assert_eq!(s.conductor(), 2);
        assert_eq!(s.elements().take(4).collect::<Vec<_>>(), vec![0, 2, 3, 4]);
        assert_eq!(semigroup_from_generators(&[1]).unwrap().conductor(), 0);
        let s = semigroup_from_generators(&[2, 5]).unwrap();
        assert_eq!(s.conductor(), 4);
        assert_eq!(s.elements().take(5).collect::<Vec<_>>(), vec![0, 2, 4, 5, 6]);
        assert_eq!(semigroup_from_generators(&[3, 5, 7]).unwrap().gaps(), vec![1, 2, 4]);
        assert_eq!(semigroup_from_generators(&[2, 4]), Err(Error::NotBranchSemigroup));
        assert_eq!(semigroup_from_generators(&[]), Err(Error::NotBranchSemigroup));
        assert_eq!(semigroup_from_generators(&[0, 1]), Err(Error::NotBranchSemigroup));
    }

    #[test]
    fn criterion() {
        let cusp = semigroup_from_generators(&[2, 3]).unwrap();
        assert_eq!(cusp.element(-1), 0);
        assert_eq!(cusp.element(0), 2);
        assert_eq!(cusp.element(1), 3);
        assert!(yasuda_nonsingular(&cusp, 1));
        let s25 = semigroup_from_generators(&[2, 5]).unwrap();
        assert!(!yasuda_nonsingular(&s25, 1));
        assert!(yasuda_nonsingular(&s25, 2));
        let line = semigroup_from_generators(&[1]).unwrap();
        assert!((1..10).all(|n| yasuda_nonsingular(&line, n)));
        assert_eq!(
            yasuda_nonsingular_over(&cusp, 1, CoefficientField::Prime(3)),
            Err(Error::PositiveCharacteristic(3))
        );
    }

    #[test]
    fn orders() {
        let r = resolution_orders(&semigroup_from_generators(&[2, 5]).unwrap(), 5);
        assert_eq!(r, ResolutionOrders { good: vec![2, 3, 4, 5], stable_threshold: 2 });
        let r = resolution_orders(&semigroup_from_generators(&[2, 3]).unwrap(), 3);
        assert_eq!(r, ResolutionOrders { good: vec![1, 2, 3], stable_threshold: 1 });
        let r = resolution_orders(&semigroup_from_generators(&[3, 4, 5]).unwrap(), 3);
        assert_eq!(r, ResolutionOrders { good: vec![1, 2, 3], stable_threshold: 1 });
    }
}
