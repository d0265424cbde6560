//! Ramification along iterated preimage towers.
//!
//! Discriminant valuations of `g(f^n(z))` come from critical-orbit data:
//! with `r_n = f^n mod f'`, the sum of `v(g(f^n(c)))` over critical points
//! `c` is `v(Res(f', g(r_n) mod f'))` corrected by the leading coefficient,
//! so no critical point is ever extracted. On top of this sit the avoidance
//! constant `N(a)`, the congruent-pair count `M_1`, the lower bound on
//! ramification indices, the Newton valuation tower for the monomial case,
//! and the certificate that strings them together.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::arith::{fmt_rat, rat_str, ExtVal, Prime, Rat};
use crate::dynamics::{
    bad_directions, pcb_check, reduced_tree, reduction_form, BadDirectionReport, DynamicsError, PcbStatus, TreeClass,
};
use crate::finitefield::{reduce_poly, reduce_rat, FieldError, FieldTower, FqElem, FqPoly};
use crate::newton::NewtonPolygon;
use crate::polynomial::{discriminant, resultant, QPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RamifyError {
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("polynomial must have degree at least {0}")]
    DegreeTooSmall(usize),
    #[error("{0} is not integral at p")]
    NotIntegral(String),
    #[error("f(z) - a has a repeated root")]
    InseparableFiber,
    #[error("M1 is zero; the bound is vacuous")]
    ZeroM1,
    #[error("N(a) is infinite")]
    InfiniteN,
    #[error("bound denominator n*v(d) + N(a) vanishes")]
    DegenerateBound,
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("starting valuation equals the constant-term valuation")]
    EqualValuations,
    #[error("reduction is not a monomial z^d")]
    NotMonomialReduction,
    #[error("conjugation needs an extension of Q: {0}")]
    UnsupportedExtension(String),
    #[error("no rational conjugate is integral at p")]
    NoIntegralConjugate,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

fn require_monic(f: &QPoly, min_deg: usize) -> Result<(), RamifyError> {
    if !f.is_monic() {
        return Err(RamifyError::NotMonic);
    }
    if f.degree() < min_deg {
        return Err(RamifyError::DegreeTooSmall(min_deg));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Critical orbits through the resultant

/// `h(r) mod m` by Horner's rule, reducing at every step.
fn compose_mod(h: &QPoly, r: &QPoly, m: &QPoly) -> QPoly {
    let mut acc = QPoly::zero();
    for c in h.coeffs().iter().rev() {
        acc = (&(&acc * r) + &QPoly::constant(c.clone())).rem(m);
    }
    acc
}

/// The remainders `f^n mod f'` for `n = 0, 1, 2, ...`.
struct OrbitRemainders<'a> {
    f: &'a QPoly,
    df: QPoly,
    cur: QPoly,
}

impl<'a> OrbitRemainders<'a> {
    fn new(f: &'a QPoly) -> Self {
        let df = f.derivative();
        let cur = QPoly::z().rem(&df);
        OrbitRemainders { f, df, cur }
    }

    fn advance(&mut self) {
        self.cur = compose_mod(self.f, &self.cur, &self.df);
    }

    /// `sum over critical points c of v(g(f^n(c)))` for the current `n`.
    fn valuation(&self, g: &QPoly, p: Prime) -> ExtVal {
        let r = compose_mod(g, &self.cur, &self.df);
        if r.is_zero() {
            return ExtVal::Inf;
        }
        let vd = p.val(&self.df.lc());
        let res = resultant(&self.df, &r);
        let deg = Rat::from_integer((r.degree() as i64).into());
        p.val(&res) + ExtVal::Fin(-(vd.finite().unwrap() * deg))
    }
}

/// `N_{g,n} = sum_i v(g(f^n(c_i)))` over critical points, for `n = 0..=n_max`.
pub fn orbit_valuations(f: &QPoly, g: &QPoly, p: Prime, n_max: usize) -> Result<Vec<ExtVal>, RamifyError> {
    require_monic(f, 1)?;
    if f.degree() == 1 {
        return Ok(vec![ExtVal::zero(); n_max + 1]);
    }
    let mut it = OrbitRemainders::new(f);
    let mut out = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        if n > 0 {
            it.advance();
        }
        out.push(it.valuation(g, p));
    }
    Ok(out)
}

/// `N_{z-a,n}` for `n = 1..=horizon`.
pub fn critical_orbit_valuations(f: &QPoly, p: Prime, a: &Rat, horizon: usize) -> Result<Vec<ExtVal>, RamifyError> {
    let g = QPoly::new(vec![-a.clone(), Rat::one()]);
    let mut all = orbit_valuations(f, &g, p, horizon)?;
    all.remove(0);
    Ok(all)
}

/// `v(Disc(g(f^n(z))))` from `d^n v(Disc g) + e n d^n v(d) + sum_k d^k N_{g,n-k}`.
pub fn disc_valuation(f: &QPoly, g: &QPoly, n: usize, p: Prime) -> Result<ExtVal, RamifyError> {
    require_monic(f, 1)?;
    require_monic(g, 1)?;
    let d = f.degree();
    let e = g.degree();
    let big_d = |k: usize| Rat::from_integer(num_traits::pow(BigInt::from(d), k));
    let disc_g = p.val(&discriminant(g));
    let vd = Rat::from_integer(p.val_u64(d as u64).into());
    let mut total = disc_g.scale(&big_d(n));
    total = total + ExtVal::Fin(Rat::from_integer((e * n).into()) * big_d(n) * vd);
    let ns = orbit_valuations(f, g, p, n)?;
    for k in 0..n {
        total = total + ns[n - k].scale(&big_d(k));
    }
    Ok(total)
}

/// Least `n <= depth` with `Disc(f^n - a) = 0`.
pub fn separability_check(f: &QPoly, a: &Rat, depth: usize) -> Result<Option<usize>, RamifyError> {
    require_monic(f, 1)?;
    if f.degree() == 1 {
        return Ok(None);
    }
    // valuation-free zero test: any prime works
    let p = Prime::new(2).unwrap();
    let g = QPoly::new(vec![-a.clone(), Rat::one()]);
    let mut it = OrbitRemainders::new(f);
    for n in 1..=depth {
        it.advance();
        if it.valuation(&g, p).is_inf() {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// Avoidance

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AvoidStatus {
    Avoids,
    InClosure,
    Heuristic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitData {
    /// The critical point when it is rational.
    pub point: Option<String>,
    pub multiplicity: usize,
    pub tail: Vec<String>,
    pub cycle: Vec<String>,
    /// `v(x - a)` along tail then cycle, or `N_{z-a,n}` for `n = 0..=horizon`.
    pub valuations: Vec<ExtVal>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AvoidanceResult {
    pub status: AvoidStatus,
    #[serde(rename = "N_of_a")]
    pub n_of_a: ExtVal,
    pub horizon: usize,
    /// Heuristic runs only: the last values agree.
    pub stabilized: bool,
    pub orbit_data: Vec<OrbitData>,
}

/// Forward orbit of a rational point, `None` if it does not close up within `steps`.
fn rational_orbit(f: &QPoly, x: &Rat, steps: usize) -> Option<(Vec<Rat>, Vec<Rat>)> {
    let mut seen: HashMap<Rat, usize> = HashMap::new();
    let mut order = Vec::new();
    let mut cur = x.clone();
    for _ in 0..=steps {
        if let Some(&i) = seen.get(&cur) {
            let cycle = order.split_off(i);
            return Some((order, cycle));
        }
        seen.insert(cur.clone(), order.len());
        order.push(cur.clone());
        cur = f.eval(&cur);
    }
    None
}

/// Decides whether `a` avoids the post-critical set and computes `N(a)`.
///
/// Exact when every critical point is rational and pre-periodic within the
/// horizon; otherwise the supremum is taken over `n <= horizon` only.
pub fn avoidance_check(f: &QPoly, p: Prime, a: &Rat, horizon: usize) -> Result<AvoidanceResult, RamifyError> {
    require_monic(f, 1)?;
    if !f.is_integral(p) {
        return Err(RamifyError::NotIntegral("f".into()));
    }
    if p.val(a) < ExtVal::zero() {
        return Err(RamifyError::NotIntegral("base point".into()));
    }
    let d = f.degree();
    if d == 1 {
        return Ok(AvoidanceResult {
            status: AvoidStatus::Avoids,
            n_of_a: ExtVal::zero(),
            horizon,
            stabilized: false,
            orbit_data: vec![],
        });
    }
    let crit = f.derivative().rational_roots();
    let all_rational = crit.iter().map(|(_, m)| m).sum::<usize>() == d - 1;
    if all_rational {
        let orbits: Option<Vec<_>> = crit.iter().map(|(c, _)| rational_orbit(f, c, horizon)).collect();
        if let Some(orbits) = orbits {
            return Ok(exact_avoidance(p, a, horizon, &crit, orbits));
        }
    }
    let seq = orbit_valuations(f, &QPoly::new(vec![-a.clone(), Rat::one()]), p, horizon)?;
    let in_closure = seq.iter().any(ExtVal::is_inf);
    let n_of_a = seq.iter().cloned().fold(ExtVal::zero(), ExtVal::max);
    let window = seq.len().min(3);
    let stabilized = seq[seq.len() - window..].windows(2).all(|w| w[0] == w[1]);
    Ok(AvoidanceResult {
        status: if in_closure { AvoidStatus::InClosure } else { AvoidStatus::Heuristic },
        n_of_a,
        horizon,
        stabilized,
        orbit_data: vec![OrbitData { point: None, multiplicity: d - 1, tail: vec![], cycle: vec![], valuations: seq }],
    })
}

fn exact_avoidance(p: Prime, a: &Rat, horizon: usize, crit: &[(Rat, usize)], orbits: Vec<(Vec<Rat>, Vec<Rat>)>) -> AvoidanceResult {
    let mut data = Vec::new();
    let mut in_closure = false;
    for ((c, m), (tail, cycle)) in crit.iter().zip(&orbits) {
        let vals: Vec<ExtVal> = tail.iter().chain(cycle).map(|x| p.val(&(x - a))).collect();
        in_closure |= vals.iter().any(ExtVal::is_inf);
        data.push(OrbitData {
            point: Some(fmt_rat(c)),
            multiplicity: *m,
            tail: tail.iter().map(fmt_rat).collect(),
            cycle: cycle.iter().map(fmt_rat).collect(),
            valuations: vals,
        });
    }
    let n_of_a = if in_closure {
        ExtVal::Inf
    } else {
        // the summed sequence is periodic after the longest tail
        let tail_max = orbits.iter().map(|(t, _)| t.len()).max().unwrap_or(0);
        let period = orbits.iter().fold(1usize, |acc, (_, c)| acc.lcm(&c.len()));
        (0..tail_max + period)
            .map(|n| {
                data.iter()
                    .zip(&orbits)
                    .map(|(od, (t, c))| {
                        let idx = if n < t.len() { n } else { t.len() + (n - t.len()) % c.len() };
                        od.valuations[idx].scale(&Rat::from_integer(od.multiplicity.into()))
                    })
                    .fold(ExtVal::zero(), |acc, v| acc + v)
            })
            .fold(ExtVal::zero(), ExtVal::max)
    };
    AvoidanceResult {
        status: if in_closure { AvoidStatus::InClosure } else { AvoidStatus::Avoids },
        n_of_a,
        horizon,
        stabilized: false,
        orbit_data: data,
    }
}

// ---------------------------------------------------------------------------
// Bounds

/// Ordered pairs of distinct roots of `f - a` with equal residues.
pub fn m1_pairs(f: &QPoly, p: Prime, a: &Rat, tower: &mut FieldTower) -> Result<usize, RamifyError> {
    require_monic(f, 1)?;
    let fa = f - &QPoly::constant(a.clone());
    if discriminant(&fa).is_zero() {
        return Err(RamifyError::InseparableFiber);
    }
    let fbar = reduce_poly(&fa, p)?;
    Ok(tower.roots_all(&fbar).iter().map(|(_, e)| e * (e - 1)).sum())
}

/// Data of the lower bound `e_n > p^(ell(n-1)) M1 / (d (n v(d) + N(a)))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundParams {
    pub p: Prime,
    pub d: usize,
    pub ell: u32,
    pub vd: u64,
    pub m1: usize,
    pub n_of_a: Rat,
}

impl BoundParams {
    pub fn new(f: &QPoly, p: Prime, n_of_a: &ExtVal, m1: usize) -> Result<Self, RamifyError> {
        require_monic(f, 1)?;
        if m1 == 0 {
            return Err(RamifyError::ZeroM1);
        }
        let n_of_a = n_of_a.finite().ok_or(RamifyError::InfiniteN)?.clone();
        let (ell, _) = reduction_form(f, p)?;
        let d = f.degree();
        Ok(BoundParams { p, d, ell, vd: p.val_u64(d as u64), m1, n_of_a })
    }

    fn denom(&self, n: usize) -> Result<Rat, RamifyError> {
        let den = Rat::from_integer(((n as u64 * self.vd) as i64).into()) + &self.n_of_a;
        if den.is_zero() {
            return Err(RamifyError::DegenerateBound);
        }
        Ok(den * Rat::from_integer(self.d.into()))
    }

    fn p_ell(&self, k: usize) -> Rat {
        Rat::from_integer(num_traits::pow(self.p.big(), self.ell as usize * k))
    }

    pub fn lower_bound(&self, n: usize) -> Result<Rat, RamifyError> {
        assert!(n >= 1);
        Ok(self.p_ell(n - 1) * Rat::from_integer(self.m1.into()) / self.denom(n)?)
    }

    /// Upper bound on the least positive valuation of a difference of congruent roots at level `n`.
    pub fn vn_upper_bound(&self, n: usize) -> Result<Rat, RamifyError> {
        Ok(self.lower_bound(n)?.recip())
    }

    /// `A = d p^ell v(d) / M1`.
    pub fn a_coef(&self) -> Rat {
        self.p_ell(1) * Rat::from_integer((self.d as u64 * self.vd).into()) / Rat::from_integer(self.m1.into())
    }

    /// `B = d p^ell N(a) / M1`.
    pub fn b_coef(&self) -> Rat {
        self.p_ell(1) * Rat::from_integer(self.d.into()) * &self.n_of_a / Rat::from_integer(self.m1.into())
    }
}

pub fn ramification_lower_bound(f: &QPoly, p: Prime, n: usize, n_of_a: &ExtVal, m1: usize) -> Result<Rat, RamifyError> {
    BoundParams::new(f, p, n_of_a, m1)?.lower_bound(n)
}

pub fn vn_upper_bound(f: &QPoly, p: Prime, n: usize, n_of_a: &ExtVal, m1: usize) -> Result<Rat, RamifyError> {
    BoundParams::new(f, p, n_of_a, m1)?.vn_upper_bound(n)
}

// ---------------------------------------------------------------------------
// Monomial towers

fn is_monomial_reduction(g: &QPoly, p: Prime) -> Result<bool, RamifyError> {
    let gbar = reduce_poly(g, p)?;
    let mut mono = vec![0; g.degree() + 1];
    mono[g.degree()] = 1;
    Ok(gbar == FqPoly::from_fp(&mono))
}

/// `g(z) = f(z + a) - a`, required to reduce to `z^d`.
pub fn monomial_conjugate(f: &QPoly, p: Prime, a: &Rat) -> Result<QPoly, RamifyError> {
    require_monic(f, 1)?;
    if !f.is_integral(p) || p.val(a) < ExtVal::zero() {
        return Err(RamifyError::NotIntegral("f or a".into()));
    }
    let g = &f.taylor_shift(a) - &QPoly::constant(a.clone());
    if !is_monomial_reduction(&g, p)? {
        return Err(RamifyError::HypothesisViolation(format!("reduction of {g} is not z^{}", g.degree())));
    }
    Ok(g)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewtonTower {
    /// `v(beta_n)` for `n = 0..=max_n`.
    #[serde(serialize_with = "ser_indexed_vals", deserialize_with = "de_indexed_vals")]
    pub vals: Vec<ExtVal>,
    /// First `n` from which `v(beta_{n+1}) = v(beta_n) / d`.
    pub regime_start: Option<usize>,
    /// `ram_denominator` of the polygon of `g - beta_{n-1}`, `n = 1..=max_n`.
    pub denominators: Vec<String>,
}

/// `[n, num, den]` triples, `+inf` written as `["inf", "0"]`.
fn ser_indexed_vals<S: Serializer>(vals: &[ExtVal], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(vals.len()))?;
    for (n, v) in vals.iter().enumerate() {
        let (num, den) = match v {
            ExtVal::Fin(q) => (q.numer().to_string(), q.denom().to_string()),
            ExtVal::Inf => ("inf".to_string(), "0".to_string()),
        };
        seq.serialize_element(&(n, num, den))?;
    }
    seq.end()
}

fn de_indexed_vals<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Vec<ExtVal>, D::Error> {
    let raw: Vec<(usize, String, String)> = Vec::deserialize(d)?;
    raw.into_iter()
        .map(|(_, num, den)| {
            if num == "inf" {
                return Ok(ExtVal::Inf);
            }
            let n: BigInt = num.parse().map_err(serde::de::Error::custom)?;
            let d: BigInt = den.parse().map_err(serde::de::Error::custom)?;
            Ok(ExtVal::Fin(Rat::new(n, d)))
        })
        .collect()
}

/// Follows the least positive root valuation of `g - beta` up the preimage
/// tower of `beta_0`.
pub fn newton_tower(g: &QPoly, p: Prime, v_beta0: &ExtVal, max_n: usize) -> Result<NewtonTower, RamifyError> {
    require_monic(g, 2)?;
    if !g.is_integral(p) {
        return Err(RamifyError::NotIntegral("g".into()));
    }
    if !is_monomial_reduction(g, p)? {
        return Err(RamifyError::NotMonomialReduction);
    }
    if !v_beta0.is_positive() || *v_beta0 == ExtVal::zero() {
        return Err(RamifyError::HypothesisViolation("starting valuation must be positive".into()));
    }
    let d = g.degree();
    let vc: Vec<ExtVal> = g.coeffs().iter().map(|c| p.val(c)).collect();
    let floor = vc[..d].iter().cloned().fold(ExtVal::Inf, ExtVal::min);
    let mut vals = vec![v_beta0.clone()];
    let mut denominators = Vec::new();
    for _ in 0..max_n {
        let vb = vals.last().unwrap();
        if *vb == vc[0] {
            return Err(RamifyError::EqualValuations);
        }
        let mut pts: Vec<(usize, ExtVal)> = vc.iter().cloned().enumerate().collect();
        pts[0].1 = vc[0].clone().min(vb.clone());
        let np = NewtonPolygon::from_points(pts).expect("leading coefficient is finite");
        let next = np
            .min_root_valuation_above(&ExtVal::zero())
            .expect("monomial reduction gives a positive root valuation");
        denominators.push(np.ram_denominator().to_string());
        vals.push(next);
    }
    let regime_start = vals.iter().position(|v| *v < floor);
    Ok(NewtonTower { vals, regime_start, denominators })
}

// ---------------------------------------------------------------------------
// Normal form

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Normalized {
    #[serde(serialize_with = "ser_display", deserialize_with = "de_parse")]
    pub g: QPoly,
    /// `mu(z) = alpha z + beta`, with `g = mu . f . mu^-1`.
    #[serde(with = "rat_str")]
    pub alpha: Rat,
    #[serde(with = "rat_str")]
    pub beta: Rat,
}

fn ser_display<S: Serializer>(g: &QPoly, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&g.to_string())
}

fn de_parse<'de, D: serde::Deserializer<'de>>(d: D) -> Result<QPoly, D::Error> {
    String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
}

/// Rational `r` with `r^k = q`, positive when there is a choice.
fn rational_root_of(q: &Rat, k: u32) -> Option<Rat> {
    if k == 1 {
        return Some(q.clone());
    }
    if q.is_negative() && k % 2 == 0 {
        return None;
    }
    let n = q.numer().abs().nth_root(k);
    let d = q.denom().nth_root(k);
    let r = Rat::new(n, d);
    let r = if q.is_negative() { -r } else { r };
    (num_traits::pow(r.clone(), k as usize) == *q).then_some(r)
}

/// Affine conjugate of `f` that is monic, fixes 0, and is integral at `p`.
pub fn normalize(f: &QPoly, p: Prime) -> Result<Normalized, RamifyError> {
    if f.degree() < 2 {
        return Err(RamifyError::DegreeTooSmall(2));
    }
    let d = f.degree();
    let alpha = rational_root_of(&f.lc(), (d - 1) as u32)
        .ok_or_else(|| RamifyError::UnsupportedExtension(format!("leading coefficient has no rational {}-th root", d - 1)))?;
    // f1 = alpha f(z / alpha)
    let f1 = f.compose(&QPoly::monomial(alpha.recip(), 1)).scale(&alpha);
    debug_assert!(f1.is_monic());
    let fixed = (&f1 - &QPoly::z()).rational_roots();
    if fixed.is_empty() {
        return Err(RamifyError::UnsupportedExtension("no rational fixed point".into()));
    }
    let mut ordered: Vec<Rat> = fixed.into_iter().map(|(r, _)| r).collect();
    ordered.sort_by_key(|r| (!r.is_zero(), r.abs(), r.is_negative()));
    for b in ordered {
        let g = &f1.taylor_shift(&b) - &QPoly::constant(b.clone());
        if g.is_integral(p) {
            return Ok(Normalized { g, alpha, beta: -b });
        }
    }
    Err(RamifyError::NoIntegralConjugate)
}

// ---------------------------------------------------------------------------
// Certificate

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Pass,
    Fail,
    Heuristic,
    Skipped,
}

impl Check {
    fn from_bool(b: bool) -> Self {
        if b {
            Check::Pass
        } else {
            Check::Fail
        }
    }

    fn ok(self) -> bool {
        matches!(self, Check::Pass | Check::Heuristic)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypotheses {
    pub monic: Check,
    pub integral: Check,
    pub base_point_integral: Check,
    pub fixes_zero: Check,
    pub p_divides_degree: Check,
    pub pcb: Check,
    pub avoidance: Check,
    pub separable: Check,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    NoBadDirectionInTree,
    TotallyInvariantBadDirection,
    Unresolved,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    InfinitelyWildlyRamified,
    Unresolved,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    #[serde(rename = "M1")]
    pub m1: usize,
    #[serde(rename = "N_a")]
    pub n_a: ExtVal,
    #[serde(rename = "A", with = "rat_str")]
    pub a: Rat,
    #[serde(rename = "B", with = "rat_str")]
    pub b: Rat,
    /// `(n, bound_n)` with `e_n > bound_n`.
    pub curve: Vec<(usize, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerReport {
    /// The conjugated map whose preimage tower is followed.
    pub g: String,
    pub beta0: String,
    #[serde(flatten)]
    pub tower: NewtonTower,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertInput {
    pub poly: String,
    pub prime: u64,
    pub base_point: String,
    pub depth: usize,
    pub horizon: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WildCertificate {
    pub input: CertInput,
    pub hypotheses: Hypotheses,
    pub ell: Option<u32>,
    pub avoidance: Option<AvoidanceResult>,
    pub bad_directions: Option<BadDirectionReport>,
    pub tree_classification: Option<TreeClass>,
    pub branch: Branch,
    pub bound: Option<BoundReport>,
    pub tower: Option<TowerReport>,
    /// Kummer-style tower of `f` itself when its reduction is `z^d` and `v(a) > 0`.
    pub auxiliary_tower: Option<TowerReport>,
    /// False when `N(a)` was only observed up to the horizon.
    pub rigorous: bool,
    pub verdict: Verdict,
    pub unresolved_reason: Option<String>,
    pub failures: Vec<String>,
}

/// Runs every hypothesis check, selects the branch, and attaches the
/// matching evidence. Never fails: problems become an unresolved verdict.
pub fn certify_wild(f: &QPoly, p: Prime, a: &Rat, depth: usize, horizon: usize) -> WildCertificate {
    let mut tower = FieldTower::new(p).expect("prime fits residue arithmetic");
    certify_wild_with(f, a, depth, horizon, &mut tower)
}

/// [`certify_wild`] over an existing residue tower, which fixes the prime.
pub fn certify_wild_with(f: &QPoly, a: &Rat, depth: usize, horizon: usize, tower: &mut FieldTower) -> WildCertificate {
    let p = tower.prime();
    let d = f.degree();
    let monic = f.is_monic() && d >= 1;
    let integral = f.is_integral(p);
    let base_int = p.val(a) >= ExtVal::zero();
    let mut failures: Vec<String> = Vec::new();

    let pcb = if monic && integral {
        Check::from_bool(pcb_check(f, p) == PcbStatus::CertifiedPCB)
    } else {
        Check::Skipped
    };
    let avoidance = if monic && integral && base_int {
        avoidance_check(f, p, a, horizon).ok()
    } else {
        None
    };
    let avoid_check = match avoidance.as_ref().map(|r| r.status) {
        Some(AvoidStatus::Avoids) => Check::Pass,
        Some(AvoidStatus::Heuristic) => Check::Heuristic,
        Some(AvoidStatus::InClosure) => Check::Fail,
        None => Check::Skipped,
    };
    let sep = if monic { separability_check(f, a, depth).ok() } else { None };
    let sep_check = match sep {
        Some(None) => Check::Pass,
        Some(Some(_)) => Check::Fail,
        None => Check::Skipped,
    };
    let hypotheses = Hypotheses {
        monic: Check::from_bool(monic),
        integral: Check::from_bool(integral),
        base_point_integral: Check::from_bool(base_int),
        fixes_zero: Check::from_bool(f.coeff(0).is_zero()),
        p_divides_degree: Check::from_bool(d >= 1 && p.val_u64(d as u64) > 0),
        pcb,
        avoidance: avoid_check,
        separable: sep_check,
    };
    let named = [
        ("monic", hypotheses.monic),
        ("integral", hypotheses.integral),
        ("base_point_integral", hypotheses.base_point_integral),
        ("fixes_zero", hypotheses.fixes_zero),
        ("p_divides_degree", hypotheses.p_divides_degree),
        ("pcb", hypotheses.pcb),
        ("avoidance", hypotheses.avoidance),
        ("separable", hypotheses.separable),
    ];
    for (name, c) in named {
        if c.ok() {
            continue;
        }
        let detail = match name {
            "pcb" => match pcb_check(f, p) {
                PcbStatus::NotPCB(w) => format!("pcb: NotPCB({w})"),
                _ => format!("pcb: {c:?}"),
            },
            "avoidance" => match &avoidance {
                Some(r) => format!("avoidance: {:?}", r.status),
                None => "avoidance: Skipped".into(),
            },
            "separable" => match sep {
                Some(Some(n)) => format!("separable: repeated root at level {n}"),
                _ => "separable: Skipped".into(),
            },
            _ if c == Check::Skipped => format!("{name}: Skipped"),
            _ => name.to_string(),
        };
        failures.push(detail);
    }

    let ell = if monic && integral { reduction_form(f, p).ok().map(|(l, _)| l) } else { None };
    let bad = if monic && integral && d >= 1 { bad_directions(f, p, tower).ok() } else { None };

    let mut cert = WildCertificate {
        input: CertInput {
            poly: f.to_string(),
            prime: p.get(),
            base_point: fmt_rat(a),
            depth,
            horizon,
        },
        hypotheses,
        ell,
        rigorous: avoidance.as_ref().is_some_and(|r| r.status != AvoidStatus::Heuristic),
        avoidance,
        bad_directions: bad,
        tree_classification: None,
        branch: Branch::Unresolved,
        bound: None,
        tower: None,
        auxiliary_tower: None,
        verdict: Verdict::Unresolved,
        unresolved_reason: None,
        failures,
    };
    if !cert.failures.is_empty() {
        cert.unresolved_reason = Some(cert.failures[0].clone());
        return cert;
    }
    if let Err(reason) = select_branch(&mut cert, f, p, a, depth, horizon, tower) {
        cert.branch = Branch::Unresolved;
        cert.bound = None;
        cert.tower = None;
        cert.unresolved_reason = Some(reason);
        return cert;
    }
    cert.verdict = Verdict::InfinitelyWildlyRamified;
    cert
}

fn select_branch(
    cert: &mut WildCertificate,
    f: &QPoly,
    p: Prime,
    a: &Rat,
    depth: usize,
    horizon: usize,
    tower: &mut FieldTower,
) -> Result<(), String> {
    let abar = FqElem::from_fp(reduce_rat(a, p).expect("base point checked integral"));
    let tree = reduced_tree(f, p, &abar, depth.max(1), tower).map_err(|e| format!("reduced_tree: {e}"))?;
    cert.tree_classification = Some(tree.classification);
    let bad = cert.bad_directions.as_ref().ok_or("bad_directions: unavailable")?;
    let singleton_bad = match tree.classification {
        TreeClass::Undetermined => return Err("reduced_tree: Undetermined".into()),
        TreeClass::Infinite => false,
        TreeClass::Singleton => bad.bad_residues.contains(&tree.base),
    };
    if !singleton_bad {
        cert.branch = Branch::NoBadDirectionInTree;
        let m1 = m1_pairs(f, p, a, tower).map_err(|e| format!("m1: {e}"))?;
        let n_of_a = cert.avoidance.as_ref().unwrap().n_of_a.clone();
        let params = BoundParams::new(f, p, &n_of_a, m1).map_err(|e| format!("bound: {e}"))?;
        let curve = (1..=depth.max(horizon))
            .map(|n| params.lower_bound(n).map(|b| (n, fmt_rat(&b))))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| format!("bound: {e}"))?;
        cert.bound = Some(BoundReport { m1, n_a: n_of_a, a: params.a_coef(), b: params.b_coef(), curve });
        let va = p.val(a);
        if is_monomial_reduction(f, p).unwrap_or(false) && va.is_positive() && !va.is_inf() && f.degree() >= 2 {
            cert.auxiliary_tower = newton_tower(f, p, &va, depth).ok().map(|t| TowerReport {
                g: f.to_string(),
                beta0: fmt_rat(a),
                tower: t,
            });
        }
        return Ok(());
    }
    cert.branch = Branch::TotallyInvariantBadDirection;
    let g = monomial_conjugate(f, p, a).map_err(|e| format!("monomial_conjugate: {e}"))?;
    let c0 = g.coeff(0);
    let (beta0, v0) = if !c0.is_zero() {
        (Rat::zero(), ExtVal::Inf)
    } else {
        // a is fixed: start from a nonzero rational preimage of 0 under g
        let mut roots: Vec<Rat> = g.rational_roots().into_iter().map(|(r, _)| r).filter(|r| !r.is_zero()).collect();
        roots.sort_by_key(|r| (p.val(r), r.abs(), r.is_negative()));
        let b = roots.into_iter().next().ok_or("tower: no rational nonzero preimage of the base point")?;
        let v = p.val(&b);
        (b, v)
    };
    let t = newton_tower(&g, p, &v0, depth).map_err(|e| format!("newton_tower: {e}"))?;
    if t.regime_start.is_none() {
        return Err(format!("newton_tower: single-segment regime not reached by depth {depth}"));
    }
    cert.tower = Some(TowerReport { g: g.to_string(), beta0: fmt_rat(&beta0), tower: t });
    Ok(())
}
