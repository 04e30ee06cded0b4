//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

mod common;

use std::io::Write;
use std::time::Instant;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

use common::*;
use nash_toric::cones::{Cone, Fan};
use nash_toric::curve::{resolution_orders, semigroup_from_generators, yasuda_nonsingular};
use nash_toric::groebner::{buchberger, Ideal};
use nash_toric::lattice::LatticeVector;
use nash_toric::nash::{
    a_cone, blowup_oracle_n1, calibrate_power_rule, iterate_normalized_nash, nash_fan, toh_yama_cone, PowerRule,
};
use nash_toric::polyalg::{CoefficientField, Field, PrimeField, Rationals};
use nash_toric::semigroups::AffineSemigroup;

type Outcome = Result<String, String>;

const Q: CoefficientField = CoefficientField::Rational;

fn check(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn hilbert_a3() -> Outcome {
    let s = AffineSemigroup::of_cone(&a_cone(3)).map_err(|e| e.to_string())?;
    let expected: Vec<LatticeVector> = [[1, 0], [1, 1], [3, 4]].iter().map(|v| LatticeVector::from_i64(v)).collect();
    check(s.hilbert_basis() == expected.as_slice(), format!("got {:?}", s.hilbert_basis()))?;
    Ok(format!("{:?}", s.hilbert_basis()))
}

fn toh_yama() -> Outcome {
    let cal = calibrate_power_rule().map_err(|e| e.to_string())?;
    let rule = cal.selected;
    check(rule == PowerRule::default(), format!("calibration selected {rule}, default is {}", PowerRule::default()))?;
    for n in 1..=6u32 {
        let tau = toh_yama_cone(n);
        let r = nash_fan(&a_cone(3), n as usize, Q, rule).map_err(|e| e.to_string())?;
        check(r.fan.maximal_cones().contains(&tau), format!("n = {n}: {:?} not in {:?}", tau, r.fan))?;
        check(tau.multiplicity() == Some(BigInt::from(2)) && !tau.is_smooth(), format!("n = {n}: index of {:?}", tau))?;
    }
    Ok(format!("calibrated rule {rule}; cones for n = 1..6 found, each of index 2"))
}

fn smooth_iff_trivial() -> Outcome {
    for c in smooth_battery(61) {
        for n in 1..=2 {
            let r = nash_fan(&c, n, Q, PowerRule::default()).map_err(|e| e.to_string())?;
            check(r.is_isomorphism, format!("smooth {:?}, n = {n}: nontrivial fan {:?}", c, r.fan))?;
        }
    }
    for c in singular_battery() {
        for n in 1..=2 {
            let r = nash_fan(&c, n, Q, PowerRule::default()).map_err(|e| e.to_string())?;
            check(!r.is_isomorphism, format!("singular {:?}, n = {n}: trivial fan", c))?;
        }
    }
    Ok("10 smooth cones trivial, 4 singular cones nontrivial, n = 1, 2".into())
}

fn oracle() -> Outcome {
    let battery: Vec<Cone> = smooth_battery(61).into_iter().chain(singular_battery()).collect();
    for c in &battery {
        let o = blowup_oracle_n1(c).map_err(|e| e.to_string())?;
        let g = nash_fan(c, 1, Q, PowerRule::default()).map_err(|e| e.to_string())?.fan;
        check(o == g, format!("{:?}: oracle {:?} vs Groebner {:?}", c, o, g))?;
    }
    Ok(format!("{} cones agree", battery.len()))
}

/// Step counts recorded on the first verified run.
const GOLDEN_STEPS: [(&str, usize); 4] = [("A1", 1), ("A2", 2), ("A3", 2), ("(0,1),(7,-5)", 2)];

fn iteration() -> Outcome {
    let cones = [a_cone(1), a_cone(2), a_cone(3), cone(&[&[0, 1], &[7, -5]])];
    let mut seen = Vec::new();
    for (c, (name, golden)) in cones.iter().zip(GOLDEN_STEPS) {
        let t = iterate_normalized_nash(c, Q).map_err(|e| e.to_string())?;
        check(t.terminated, format!("{name} did not terminate"))?;
        let fan: &Fan = t.final_fan();
        check(
            fan.maximal_cones().iter().all(|k| k.multiplicity() == Some(BigInt::from(1))),
            format!("{name}: final fan {:?} has a cone of index > 1", fan),
        )?;
        check(t.steps == golden, format!("{name}: {} steps, golden {golden}", t.steps))?;
        seen.push(format!("{name}: {}", t.steps));
    }
    Ok(format!("steps {}", seen.join(", ")))
}

fn curves() -> Outcome {
    let cusp = semigroup_from_generators(&[2, 3]).map_err(|e| e.to_string())?;
    check(yasuda_nonsingular(&cusp, 1), "{2,3} not resolved at n = 1")?;
    let s25 = semigroup_from_generators(&[2, 5]).map_err(|e| e.to_string())?;
    check(resolution_orders(&s25, 10).good.first() == Some(&2), "{2,5}: first good order is not 2")?;
    let mut rng = rng(6);
    let mut done = 0;
    while done < 20 {
        let k = rng.gen_range(2..=4);
        let gens: Vec<u64> = (0..k).map(|_| rng.gen_range(2..=20)).collect();
        let Ok(s) = semigroup_from_generators(&gens) else { continue };
        done += 1;
        for n in 1..=60u64 {
            if s.element(n as i64) - 1 >= s.conductor() {
                check(yasuda_nonsingular(&s, n), format!("{gens:?}, n = {n} fails above the conductor"))?;
            }
        }
    }
    Ok("cusp at n = 1, {2,5} at n = 2, 20 random semigroups above the conductor".into())
}

/// Returns how many of the random ideals are proper.
fn groebner_cases<F: Field>(field: F, seed: u64, cases: usize) -> Result<usize, String> {
    let rings = test_rings(field);
    let mut rng = rng(seed);
    let mut proper = 0;
    for case in 0..cases {
        let ring = rings.choose(&mut rng).unwrap();
        let k = rng.gen_range(1..=3);
        let gens: Vec<_> = (0..k).map(|_| random_element(ring, &mut rng, 3, 2)).collect();
        let order = random_order(ring, &mut rng);
        let ideal = Ideal::new(ring.clone(), gens.clone()).map_err(|e| e.to_string())?;
        let gb = buchberger(&ideal, &order).map_err(|e| e.to_string())?;
        if !gb.contains(ring, &ring.one()) {
            proper += 1;
        }

        let mut shuffled = gens.clone();
        shuffled.shuffle(&mut rng);
        let again = buchberger(&Ideal::new(ring.clone(), shuffled).map_err(|e| e.to_string())?, &order).map_err(|e| e.to_string())?;
        check(gb.pairs() == again.pairs(), format!("case {case}: basis depends on generator order"))?;
        check(gb.is_reduced(ring), format!("case {case}: basis not reduced"))?;
        check(gb.s_polynomials(ring).iter().all(|s| gb.normal_form(ring, s).is_zero()), format!("case {case}: S-polynomial"))?;

        let combo = gens.iter().fold(ring.zero(), |acc, g| acc.add(&g.mul(&random_element(ring, &mut rng, 2, 2))));
        check(gb.normal_form(ring, &combo).is_zero(), format!("case {case}: combination not reduced to zero"))?;

        let w = random_interior_weight(ring, &mut rng);
        let (f, g) = (random_element(ring, &mut rng, 3, 2), random_element(ring, &mut rng, 3, 2));
        let lhs = f.mul(&g).initial_form(&w).map_err(|e| e.to_string())?;
        let rhs = f.initial_form(&w).map_err(|e| e.to_string())?.mul(&g.initial_form(&w).map_err(|e| e.to_string())?);
        check(lhs == rhs, format!("case {case}: initial form not multiplicative"))?;
    }
    Ok(proper)
}

fn groebner_properties() -> Outcome {
    let q = groebner_cases(Rationals, 7, 1000)?;
    let f5 = groebner_cases(PrimeField::new(5).map_err(|e| e.to_string())?, 77, 1000)?;
    Ok(format!("1000 cases over Q ({q} proper ideals) and 1000 over F_5 ({f5} proper), zero failures"))
}

fn characteristic_p() -> Outcome {
    for k in 1..=3 {
        let c = a_cone(k);
        let q = nash_fan(&c, 1, Q, PowerRule::default()).map_err(|e| e.to_string())?.fan;
        for p in [2u64, 3] {
            let fp = nash_fan(&c, 1, CoefficientField::Prime(p), PowerRule::default()).map_err(|e| e.to_string())?.fan;
            check(fp == q, format!("A{k} over F_{p}: {:?} vs {:?}", fp, q))?;
        }
    }
    Ok("A1..A3 fans over F_2, F_3 equal the rational ones".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("A3 Hilbert basis", hilbert_a3),
        ("Toh-Yama cones n = 1..6", toh_yama),
        ("smooth iff trivial Nash fan", smooth_iff_trivial),
        ("blowup oracle equals Nash fan", oracle),
        ("iterated Nash resolves surfaces", iteration),
        ("curve branch criterion", curves),
        ("Groebner basis properties", groebner_properties),
        ("positive characteristic agreement", characteristic_p),
    ];
    let mut failed = 0;
    let mut out = std::io::stderr();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let secs = start.elapsed().as_secs_f64();
        let (tag, detail) = match result {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        writeln!(out, "criterion {} [{tag}] {name} ({secs:.2}s): {detail}", i + 1).unwrap();
    }
    if failed > 0 {
        writeln!(out, "{failed} criteria failed").unwrap();
        std::process::exit(1);
    }
}
