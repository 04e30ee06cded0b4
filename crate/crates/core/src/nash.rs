//! Normalized higher Nash modifications of affine toric varieties.
//!
//! For `X = U_sigma` with Hilbert basis `a_1, ..., a_s` of `S_sigma`, the
//! normalized `n`-th Nash modification is the toric variety of the Groebner
//! fan of the Nash ideal, a power of `<x^a_1 - 1, ..., x^a_s - 1>`, restricted
//! to `sigma`. The modification is an isomorphism exactly when that fan is
//! trivial, which happens exactly when `sigma` is smooth.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cones::{coordinates_2d, Cone, Fan};
use crate::error::{Error, Result};
use crate::gfan::{groebner_fan_2d, GroebnerFan};
use crate::groebner::Ideal;
use crate::lattice::{LatticeMatrix, LatticeVector};
use crate::polyalg::{CoefficientField, Field, MonomialOrder, PrimeField, Rationals, SemigroupRing};
use crate::semigroups::AffineSemigroup;

/// Which power of the base ideal `B = <x^a_i - 1>` is the `n`-th Nash ideal.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PowerRule {
    /// `B` itself for every `n`.
    Base,
    /// `B^n`.
    Power,
    /// `B^(n+1)`, the rule selected by [`calibrate_power_rule`].
    #[default]
    PowerPlusOne,
}

impl PowerRule {
    pub const ALL: [PowerRule; 3] = [PowerRule::Base, PowerRule::Power, PowerRule::PowerPlusOne];

    /// The exponent applied to the base ideal for order `n`.
    pub fn exponent(self, n: usize) -> usize {
        match self {
            PowerRule::Base => 1,
            PowerRule::Power => n,
            PowerRule::PowerPlusOne => n + 1,
        }
    }
}

impl fmt::Display for PowerRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PowerRule::Base => "base",
            PowerRule::Power => "power(n)",
            PowerRule::PowerPlusOne => "power(n+1)",
        })
    }
}

impl FromStr for PowerRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "base" => Ok(PowerRule::Base),
            "power(n)" | "power" | "n" => Ok(PowerRule::Power),
            "power(n+1)" | "power-plus-one" | "n+1" => Ok(PowerRule::PowerPlusOne),
            other => Err(Error::Parse(format!("unknown power rule {other:?} (expected base, power(n) or power(n+1))"))),
        }
    }
}

impl Serialize for PowerRule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PowerRule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The Nash ideal of order `n` in `field[s]`.
pub fn build_nash_ideal<F: Field>(s: &AffineSemigroup, n: usize, rule: PowerRule, field: F) -> Result<Ideal<F>> {
    if n == 0 {
        return Err(Error::InvalidNashOrder);
    }
    let ring = SemigroupRing::new(s.clone(), field)?;
    let base = Ideal::new(ring.clone(), ring.hilbert_binomials())?;
    base.power(rule.exponent(n))
}

/// The restricted Groebner fan of the Nash ideal, with bases.
pub fn nash_groebner_fan<F: Field>(c: &Cone, n: usize, rule: PowerRule, field: F) -> Result<GroebnerFan<F>> {
    check_planar(c)?;
    let s = AffineSemigroup::of_cone(c)?;
    let ideal = build_nash_ideal(&s, n, rule, field)?;
    groebner_fan_2d(&ideal, &MonomialOrder::default_tiebreak(&s))
}

fn check_planar(c: &Cone) -> Result<()> {
    if c.ambient_dim() != 2 {
        return Err(Error::FanEnumerationUnsupported(c.ambient_dim()));
    }
    if !c.is_full_dimensional() {
        return Err(Error::NotFullDimensional);
    }
    Ok(())
}

/// Smoothness data for one maximal cone of a fan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeSmoothness {
    pub cone: Cone,
    pub smooth: bool,
    /// Lattice index `|det|` of a full-dimensional simplicial cone.
    #[serde(with = "crate::lattice::opt_bigint")]
    pub index: Option<BigInt>,
}

impl ConeSmoothness {
    pub fn of(cone: &Cone) -> Self {
        ConeSmoothness { cone: cone.clone(), smooth: cone.is_smooth(), index: cone.multiplicity() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NashReport {
    pub input_cone: Cone,
    pub order_n: usize,
    pub field: CoefficientField,
    pub power_rule: PowerRule,
    pub fan: Fan,
    pub is_isomorphism: bool,
    pub per_cone_smoothness: Vec<ConeSmoothness>,
}

/// Computes the normalized `n`-th Nash modification of `U_c` as a fan.
pub fn nash_fan(c: &Cone, n: usize, field: CoefficientField, rule: PowerRule) -> Result<NashReport> {
    let fan = match field {
        CoefficientField::Rational => nash_groebner_fan(c, n, rule, Rationals)?.fan,
        CoefficientField::Prime(p) => nash_groebner_fan(c, n, rule, PrimeField::new(p)?)?.fan,
    };
    Ok(NashReport {
        input_cone: c.clone(),
        order_n: n,
        field,
        power_rule: rule,
        is_isomorphism: fan.is_face_fan_of(c),
        per_cone_smoothness: fan.maximal_cones().iter().map(ConeSmoothness::of).collect(),
        fan,
    })
}

/// `cone((0,1), (k+1,-k))`, the cone of the `A_k` surface singularity.
pub fn a_cone(k: u32) -> Cone {
    let k = i64::from(k);
    Cone::from_i64(&[&[0, 1], &[k + 1, -k]]).expect("A_k cone is strongly convex")
}

/// The closed-form rays `(2,-1)` and `l_n` of the Toh-Yama cone for `A_3`.
pub fn toh_yama_rays(n: u32) -> (LatticeVector, LatticeVector) {
    let n = i64::from(n);
    let l = if n % 2 == 1 { [2 * n - 2, 2 - n] } else { [2 * n, 1 - n] };
    (LatticeVector::from_i64(&[2, -1]), LatticeVector::from_i64(&l))
}

pub fn toh_yama_cone(n: u32) -> Cone {
    let (a, b) = toh_yama_rays(n);
    Cone::new(2, vec![a, b]).expect("Toh-Yama rays are independent")
}

/// One row of a calibration run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CalibrationRow {
    pub rule: PowerRule,
    pub n: u32,
    pub matched: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Calibration {
    pub selected: PowerRule,
    pub rows: Vec<CalibrationRow>,
}

/// Selects the power rule whose `A_3` fans contain the Toh-Yama cone for
/// every `n` in `orders`.
pub fn calibrate_power_rule_on(orders: &[u32], field: CoefficientField) -> Result<Calibration> {
    let a3 = a_cone(3);
    let mut rows = Vec::new();
    for rule in PowerRule::ALL {
        for &n in orders {
            let report = nash_fan(&a3, n as usize, field, rule)?;
            rows.push(CalibrationRow { rule, n, matched: report.fan.maximal_cones().contains(&toh_yama_cone(n)) });
        }
    }
    let winners: Vec<PowerRule> =
        PowerRule::ALL.into_iter().filter(|r| rows.iter().filter(|row| row.rule == *r).all(|row| row.matched)).collect();
    match winners.as_slice() {
        [rule] => Ok(Calibration { selected: *rule, rows }),
        [] => Err(Error::CalibrationInconclusive("no rule reproduces the Toh-Yama cones".into())),
        _ => Err(Error::CalibrationInconclusive(format!("several rules match: {winners:?}"))),
    }
}

/// Calibration on `n = 2, 3, 4` over the rationals.
pub fn calibrate_power_rule() -> Result<Calibration> {
    calibrate_power_rule_on(&[2, 3, 4], CoefficientField::Rational)
}

/// One fan of an iteration together with its singular maximal cones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterationStep {
    pub fan: Fan,
    pub singular_cones: Vec<Cone>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterationTrace {
    /// `trace[0]` is the face fan of the input cone.
    pub trace: Vec<IterationStep>,
    pub terminated: bool,
    pub steps: usize,
}

impl IterationTrace {
    pub fn final_fan(&self) -> &Fan {
        &self.trace.last().expect("trace starts with the input").fan
    }
}

pub const DEFAULT_ITERATION_CAP: usize = 64;

/// Iterates the normalized Nash modification on a toric surface until every
/// cone is smooth.
pub fn iterate_normalized_nash(c: &Cone, field: CoefficientField) -> Result<IterationTrace> {
    iterate_normalized_nash_with(c, field, PowerRule::default(), DEFAULT_ITERATION_CAP)
}

pub fn iterate_normalized_nash_with(c: &Cone, field: CoefficientField, rule: PowerRule, cap: usize) -> Result<IterationTrace> {
    check_planar(c)?;
    let singular = |fan: &Fan| fan.maximal_cones().iter().filter(|k| !k.is_smooth()).cloned().collect::<Vec<_>>();
    let start = Fan::face_fan(c);
    let mut trace = vec![IterationStep { singular_cones: singular(&start), fan: start }];
    loop {
        let last = trace.last().expect("nonempty");
        if last.singular_cones.is_empty() {
            let steps = trace.len() - 1;
            return Ok(IterationTrace { trace, terminated: true, steps });
        }
        if trace.len() > cap {
            return Err(Error::IterationCap(cap));
        }
        let refined: Vec<Result<Vec<Cone>>> = last
            .fan
            .maximal_cones()
            .par_iter()
            .map(|k| {
                if k.is_smooth() {
                    Ok(vec![k.clone()])
                } else {
                    Ok(nash_fan(k, 1, field, rule)?.fan.maximal_cones().to_vec())
                }
            })
            .collect();
        let mut cones = Vec::new();
        for r in refined {
            cones.extend(r?);
        }
        let fan = Fan::new(2, cones)?;
        log::debug!("iteration step {}: {} cones", trace.len(), fan.maximal_cones().len());
        trace.push(IterationStep { singular_cones: singular(&fan), fan });
    }
}

/// Independent `n = 1` answer: the domains of linearity, inside `c`, of
/// `w -> min { w.(a_i + a_j) : det(a_i, a_j) != 0 }` over the Hilbert basis.
pub fn blowup_oracle_n1(c: &Cone) -> Result<Fan> {
    check_planar(c)?;
    let s = AffineSemigroup::of_cone(c)?;
    let hb = s.hilbert_basis();
    let mut exps: Vec<LatticeVector> = Vec::new();
    for (i, a) in hb.iter().enumerate() {
        for b in &hb[i + 1..] {
            let det = LatticeMatrix::new(vec![a.clone(), b.clone()]).expect("two rows").determinant();
            if !det.is_zero() {
                exps.push(a + b);
            }
        }
    }
    exps.sort();
    exps.dedup();
    if exps.is_empty() {
        return Err(Error::OracleDegenerate);
    }

    let (r1, r2) = (&c.rays()[0], &c.rays()[1]);
    // position along the sector from r1 (0) to r2 (1)
    let position = |v: &LatticeVector| {
        let (a, b) = coordinates_2d(r1, r2, v);
        &b / (&a + &b)
    };
    let mut rays: Vec<(BigRational, LatticeVector)> = vec![(position(r1), r1.clone()), (position(r2), r2.clone())];
    for (i, e) in exps.iter().enumerate() {
        for f in &exps[i + 1..] {
            let d = e - f;
            let perp = LatticeVector::new(vec![-d[1].clone(), d[0].clone()]).primitive();
            for p in [perp.clone(), -&perp] {
                let (a, b) = coordinates_2d(r1, r2, &p);
                if a.is_positive() && b.is_positive() {
                    rays.push((position(&p), p));
                }
            }
        }
    }
    rays.sort();
    rays.dedup();

    let argmin = |w: &LatticeVector| -> Result<usize> {
        let vals: Vec<BigInt> = exps.iter().map(|e| e.dot(w)).collect();
        let min = vals.iter().min().expect("nonempty");
        let hits: Vec<usize> = (0..vals.len()).filter(|&i| &vals[i] == min).collect();
        match hits.as_slice() {
            [i] => Ok(*i),
            _ => Err(Error::OracleDegenerate),
        }
    };
    let mut cones: Vec<Cone> = Vec::new();
    let mut current: Option<(usize, LatticeVector)> = None;
    for pair in rays.windows(2) {
        let (lo, hi) = (&pair[0].1, &pair[1].1);
        let k = argmin(&(lo + hi))?;
        current = match current {
            Some((prev, start)) if prev != k => {
                cones.push(Cone::new(2, vec![start, lo.clone()])?);
                Some((k, lo.clone()))
            }
            Some(kept) => Some(kept),
            None => Some((k, lo.clone())),
        };
    }
    let (_, start) = current.expect("at least one sector");
    cones.push(Cone::new(2, vec![start, r2.clone()])?);
    Fan::new(2, cones)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cones::is_refinement;

    fn cone(g: &[&[i64]]) -> Cone {
        Cone::from_i64(g).unwrap()
    }

    #[test]
    fn nash_ideal_generators() {
        let a3 = AffineSemigroup::of_cone(&a_cone(3)).unwrap();
        let base = build_nash_ideal(&a3, 1, PowerRule::Base, Rationals).unwrap();
        let shown: Vec<String> = base.generators().iter().map(|g| g.to_string()).collect();
        assert_eq!(shown.len(), 3);
        assert!(shown.contains(&"x^[3, 4] - 1".to_string()));
        let sq = build_nash_ideal(&a3, 2, PowerRule::Power, Rationals).unwrap();
        assert_eq!(sq.generators().len(), 6);
        assert_eq!(build_nash_ideal(&a3, 0, PowerRule::Base, Rationals).unwrap_err(), Error::InvalidNashOrder);
    }

    #[test]
    fn toh_yama_formulas() {
        let expect = [[0, 1], [4, -1], [4, -1], [8, -3], [8, -3], [12, -5]];
        for (n, l) in (1..=6).zip(expect) {
            let (a, b) = toh_yama_rays(n);
            assert_eq!(a, LatticeVector::from_i64(&[2, -1]));
            assert_eq!(b, LatticeVector::from_i64(&l));
            assert_eq!(toh_yama_cone(n).multiplicity(), Some(BigInt::from(2)));
        }
    }

    #[test]
    fn quadrant_and_a3() {
        let q = cone(&[&[1, 0], &[0, 1]]);
        let r = nash_fan(&q, 1, CoefficientField::Rational, PowerRule::default()).unwrap();
        assert!(r.is_isomorphism);
        let r = nash_fan(&a_cone(3), 1, CoefficientField::Rational, PowerRule::default()).unwrap();
        assert!(!r.is_isomorphism);
        assert!(r.fan.maximal_cones().contains(&cone(&[&[2, -1], &[0, 1]])));
        assert!(is_refinement(&r.fan, &Fan::face_fan(&a_cone(3))));
        assert_eq!(nash_fan(&a_cone(3), 1, CoefficientField::Rational, PowerRule::Base).unwrap().is_isomorphism, true);
    }

    #[test]
    fn oracle_examples() {
        let q = cone(&[&[1, 0], &[0, 1]]);
        assert!(blowup_oracle_n1(&q).unwrap().is_face_fan_of(&q));
        let a1 = blowup_oracle_n1(&a_cone(1)).unwrap();
        assert_eq!(a1.maximal_cones(), &[cone(&[&[0, 1], &[1, 0]]), cone(&[&[1, 0], &[2, -1]])]);
        let a3 = blowup_oracle_n1(&a_cone(3)).unwrap();
        assert_eq!(a3, nash_fan(&a_cone(3), 1, CoefficientField::Rational, PowerRule::default()).unwrap().fan);
    }

    #[test]
    fn iteration_small_cases() {
        let q = cone(&[&[1, 0], &[0, 1]]);
        let t = iterate_normalized_nash(&q, CoefficientField::Rational).unwrap();
        assert_eq!(t.steps, 0);
        assert!(t.terminated);
        let t = iterate_normalized_nash(&a_cone(1), CoefficientField::Rational).unwrap();
        assert_eq!(t.steps, 1);
        assert_eq!(t.final_fan().maximal_cones(), &[cone(&[&[0, 1], &[1, 0]]), cone(&[&[1, 0], &[2, -1]])]);
    }

    #[test]
    fn power_rule_text() {
        for r in PowerRule::ALL {
            assert_eq!(r.to_string().parse::<PowerRule>().unwrap(), r);
        }
        assert!("cube".parse::<PowerRule>().is_err());
    }
}
