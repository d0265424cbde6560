//! Seeded consistency checks between independent routes to the same value.

use std::collections::BTreeMap;

use arboreal_core::arith::{ratio, rat};
use arboreal_core::finitefield::{reduce_poly, reduce_rat, FieldTower};
use arboreal_core::newton::NewtonPolygon;
use arboreal_core::polynomial::{discriminant, resultant};
use arboreal_core::ramify::disc_valuation;
use arboreal_core::{ExtVal, Prime, QPoly, Rat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub name: String,
    pub cases: usize,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub seed: u64,
    pub checks: Vec<CheckSummary>,
    pub ok: bool,
}

const PRIMES: [u64; 4] = [2, 3, 5, 7];

fn rand_poly(rng: &mut ChaCha8Rng, max_deg: usize, monic: bool) -> QPoly {
    let d = rng.gen_range(1..=max_deg);
    let mut cs: Vec<i64> = (0..=d).map(|_| rng.gen_range(-9..=9)).collect();
    cs[d] = if monic {
        1
    } else {
        let c = rng.gen_range(1..=9);
        if rng.gen() {
            c
        } else {
            -c
        }
    };
    QPoly::from_ints(&cs)
}

fn rand_rat(rng: &mut ChaCha8Rng) -> Rat {
    ratio(rng.gen_range(-20..=20), rng.gen_range(1..=6))
}

fn rand_prime(rng: &mut ChaCha8Rng) -> Prime {
    Prime::new(PRIMES[rng.gen_range(0..PRIMES.len())]).expect("listed primes are prime")
}

fn check(name: &str, cases: usize, rng: &mut ChaCha8Rng, mut f: impl FnMut(&mut ChaCha8Rng) -> Option<String>) -> CheckSummary {
    let failures = (0..cases).filter_map(|_| f(rng)).collect();
    CheckSummary { name: name.to_string(), cases, failures }
}

fn perturbation(rng: &mut ChaCha8Rng) -> Option<String> {
    let f = rand_poly(rng, 5, false);
    let (x, t) = (rand_rat(rng), rand_rat(rng));
    let lhs = f.eval(&(&x + &t)) - f.eval(&x);
    let mut rhs = rat(0);
    let mut tj = rat(1);
    for fj in f.perturbation_coeffs() {
        tj = &tj * &t;
        rhs += fj.eval(&x) * &tj;
    }
    (lhs != rhs).then(|| format!("f = {f}, z = {x}, t = {t}"))
}

fn resultant_multiplicative(rng: &mut ChaCha8Rng) -> Option<String> {
    let (f, g, h) = (rand_poly(rng, 3, false), rand_poly(rng, 3, false), rand_poly(rng, 3, false));
    let lhs = resultant(&(&f * &g), &h);
    let rhs = resultant(&f, &h) * resultant(&g, &h);
    (lhs != rhs).then(|| format!("f = {f}, g = {g}, h = {h}"))
}

fn valuation_multiset(f: &QPoly, p: Prime) -> BTreeMap<ExtVal, usize> {
    let mut out = BTreeMap::new();
    for (v, m) in NewtonPolygon::build(f, p).expect("nonzero").root_valuations() {
        *out.entry(v).or_insert(0) += m;
    }
    out
}

fn newton_product(rng: &mut ChaCha8Rng) -> Option<String> {
    let (f, g, p) = (rand_poly(rng, 4, false), rand_poly(rng, 4, false), rand_prime(rng));
    let mut expect = valuation_multiset(&f, p);
    for (v, m) in valuation_multiset(&g, p) {
        *expect.entry(v).or_insert(0) += m;
    }
    (valuation_multiset(&(&f * &g), p) != expect).then(|| format!("f = {f}, g = {g}, p = {p}"))
}

fn roots_vs_brute_force(rng: &mut ChaCha8Rng) -> Option<String> {
    let (f, p) = (rand_poly(rng, 5, true), rand_prime(rng));
    let fbar = reduce_poly(&f, p).expect("integer coefficients");
    let mut tower = FieldTower::new(p).expect("small prime");
    let roots = tower.roots_all(&fbar);
    let total: usize = roots.iter().map(|(_, m)| m).sum();
    let rational: Vec<u64> = roots.iter().filter_map(|(r, _)| r.as_fp()).collect();
    let brute: Vec<u64> = (0..p.get()).filter(|&x| reduce_rat(&f.eval(&rat(x as i64)), p) == Some(0)).collect();
    (total != f.degree() || rational != brute).then(|| format!("f = {f}, p = {p}"))
}

fn disc_recursion(rng: &mut ChaCha8Rng) -> Option<String> {
    let f = loop {
        let f = rand_poly(rng, 3, true);
        if f.degree() >= 2 {
            break f;
        }
    };
    let p = rand_prime(rng);
    let n = rng.gen_range(1..=2);
    let fast = match disc_valuation(&f, &QPoly::z(), n, p) {
        Ok(v) => v,
        Err(e) => return Some(format!("f = {f}, p = {p}, n = {n}: {e}")),
    };
    let direct = p.val(&discriminant(&f.iterate(n)));
    (fast != direct).then(|| format!("f = {f}, p = {p}, n = {n}: {fast} vs {direct}"))
}

pub fn run(seed: u64, cases: usize) -> Summary {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let checks = vec![
        check("perturbation_identity", cases, &mut rng, perturbation),
        check("resultant_multiplicative", cases, &mut rng, resultant_multiplicative),
        check("newton_product_law", cases, &mut rng, newton_product),
        check("roots_vs_brute_force", cases, &mut rng, roots_vs_brute_force),
        check("disc_recursion", cases, &mut rng, disc_recursion),
    ];
    let ok = checks.iter().all(|c| c.failures.is_empty());
    Summary { seed, checks, ok }
}
