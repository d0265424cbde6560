//! Residue-level dynamics of a monic integral polynomial: reduction form,
//! post-critical boundedness, direction degrees at the Gauss point, bad
//! directions, reduced preimage trees, and finite functional graphs.
//!
//! Directions at the Gauss point away from infinity are identified with
//! residue-field elements, so everything here is finite-field algebra.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{ExtVal, Prime, Rat};
use crate::finitefield::{power_substitution_decompose, reduce_poly, FieldError, FieldTower, FqElem, FqPoly};
use crate::newton::NewtonPolygon;
use crate::polynomial::QPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DynamicsError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("polynomial must be nonconstant")]
    Constant,
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// `f̄ = core(z^(p^ell))` with `core` not a polynomial in `z^p`.
pub fn reduction_form(f: &QPoly, p: Prime) -> Result<(u32, FqPoly), DynamicsError> {
    if !f.is_monic() {
        return Err(DynamicsError::NotMonic);
    }
    let fbar = reduce_poly(f, p)?;
    Ok(power_substitution_decompose(&fbar, p))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "witness")]
pub enum PcbStatus {
    CertifiedPCB,
    /// Most negative critical-point valuation.
    NotPCB(ExtVal),
    NotApplicable,
}

/// For monic integral `f`, post-critically bounded iff every critical point is integral.
pub fn pcb_check(f: &QPoly, p: Prime) -> PcbStatus {
    if !f.is_monic() || !f.is_integral(p) {
        return PcbStatus::NotApplicable;
    }
    let df = f.derivative();
    if df.degree() == 0 {
        return PcbStatus::CertifiedPCB;
    }
    let np = NewtonPolygon::build(&df, p).expect("derivative of a nonconstant polynomial");
    match np.root_valuations().into_iter().map(|(v, _)| v).next() {
        Some(v) if v < ExtVal::zero() => PcbStatus::NotPCB(v),
        _ => PcbStatus::CertifiedPCB,
    }
}

/// Indices `i` in `1..d` whose coefficient must be divisible by `p` but is not.
///
/// When `d` is a power of `p` every index is constrained; otherwise only those
/// with `v_p(i) < v_p(d)`.
pub fn coefficient_criterion(f: &QPoly, p: Prime) -> Result<Vec<(usize, ExtVal)>, DynamicsError> {
    if !f.is_monic() {
        return Err(DynamicsError::NotMonic);
    }
    if !f.is_integral(p) {
        return Err(DynamicsError::Precondition("coefficients not integral".into()));
    }
    if !f.coeff(0).is_zero() {
        return Err(DynamicsError::Precondition("f does not fix 0".into()));
    }
    let d = f.degree();
    let vd = p.val_u64(d as u64);
    if vd == 0 {
        return Err(DynamicsError::Precondition(format!("p does not divide degree {d}")));
    }
    Ok((1..d)
        .filter(|&i| p.val_u64(i as u64) < vd)
        .map(|i| (i, p.val(&f.coeff(i))))
        .filter(|(_, v)| !v.is_positive())
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectionDegree {
    #[serde(with = "elem_str")]
    pub residue: FqElem,
    pub degree: usize,
}

fn monic_integral(f: &QPoly, p: Prime) -> Result<FqPoly, DynamicsError> {
    if !f.is_monic() {
        return Err(DynamicsError::NotMonic);
    }
    if f.degree() == 0 {
        return Err(DynamicsError::Constant);
    }
    Ok(reduce_poly(f, p)?)
}

/// Local degree of `f` at the Gauss point in the direction of `x`.
pub fn direction_degree(f: &QPoly, p: Prime, x: &FqElem, tower: &mut FieldTower) -> Result<DirectionDegree, DynamicsError> {
    let fbar = monic_integral(f, p)?;
    let y = tower.eval(&fbar, x);
    let shifted = tower.sub_constant(&fbar, &y);
    let degree = tower.root_multiplicity(&shifted, x);
    Ok(DirectionDegree { residue: x.clone(), degree })
}

/// Directions over `x` with their degrees; the degrees sum to `deg f`.
pub fn preimage_disk_decomposition(
    f: &QPoly,
    p: Prime,
    x: &FqElem,
    tower: &mut FieldTower,
) -> Result<Vec<DirectionDegree>, DynamicsError> {
    let fbar = monic_integral(f, p)?;
    let g = tower.sub_constant(&fbar, x);
    Ok(tower
        .roots_all(&g)
        .into_iter()
        .map(|(residue, degree)| DirectionDegree { residue, degree })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BadDirectionReport {
    pub d0: usize,
    /// Perturbations `t` with `v(t) < eps0` are large enough.
    pub eps0: ExtVal,
    #[serde(with = "elems_str")]
    pub bad_residues: Vec<FqElem>,
}

pub fn bad_directions(f: &QPoly, p: Prime, tower: &mut FieldTower) -> Result<BadDirectionReport, DynamicsError> {
    monic_integral(f, p)?;
    let fj = f.perturbation_coeffs();
    let reduced = fj.iter().map(|g| reduce_poly(g, p)).collect::<Result<Vec<_>, _>>()?;
    // f_d = 1, so some reduction is nonzero
    let d0 = reduced.iter().position(|g| !g.is_zero()).unwrap() + 1;
    let eps0 = (1..d0)
        .map(|j| fj[j - 1].gauss_val(p).scale(&Rat::new(1.into(), ((d0 - j) as i64).into())))
        .fold(ExtVal::Inf, ExtVal::min);
    let bad_residues = tower.roots_all(&reduced[d0 - 1]).into_iter().map(|(r, _)| r).collect();
    Ok(BadDirectionReport { d0, eps0, bad_residues })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TreeClass {
    Singleton,
    Infinite,
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeNode {
    #[serde(with = "elem_str")]
    pub residue: FqElem,
    pub mult: usize,
    pub level_field: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducedTree {
    #[serde(with = "elem_str")]
    pub base: FqElem,
    pub levels: Vec<Vec<TreeNode>>,
    pub classification: TreeClass,
}

impl ReducedTree {
    /// Number of distinct residues over all computed levels.
    pub fn cumulative_count(&self, upto: usize) -> usize {
        let set: BTreeSet<&FqElem> = self.levels[..=upto].iter().flatten().map(|n| &n.residue).collect();
        set.len()
    }
}

/// Number of finite fibers of `core` that are a single point, or `None` when
/// every fiber is (degree one). `core` must not be a polynomial in `w^p`.
pub fn totally_ramified_fibers(core: &FqPoly, p: Prime, tower: &mut FieldTower) -> Option<usize> {
    let dd = core.degree();
    if dd <= 1 {
        return None;
    }
    let pp = p.get();
    if dd as u64 % pp == 0 {
        // F - c = lc (w - w0)^D would have zero derivative
        return Some(0);
    }
    let cs = core.fp_coeffs().expect("core has prime-field coefficients");
    // the only candidate centre: w0 = -F_{D-1} / (D lc)
    let denom = (dd as u64 % pp) * cs[dd] % pp;
    let w0 = (pp - cs[dd - 1]) % pp * fp_inv(denom, pp) % pp;
    let w0 = FqElem::from_fp(w0);
    let c = tower.eval(core, &w0);
    let shifted = tower.sub_constant(core, &c);
    Some(usize::from(tower.root_multiplicity(&shifted, &w0) == dd))
}

fn fp_inv(a: u64, p: u64) -> u64 {
    let (mut r, mut b, mut e) = (1u64, a % p, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Residue-level iterated preimages of `base` to the given depth.
pub fn reduced_tree(
    f: &QPoly,
    p: Prime,
    base: &FqElem,
    depth: usize,
    tower: &mut FieldTower,
) -> Result<ReducedTree, DynamicsError> {
    if depth == 0 {
        return Err(DynamicsError::Precondition("depth must be at least 1".into()));
    }
    let fbar = monic_integral(f, p)?;
    tower.ensure_level(base.level);
    let base = tower.normalize(base);
    let node = |r: FqElem, mult: usize| TreeNode { level_field: r.level, residue: r, mult };
    let mut levels = vec![vec![node(base.clone(), 1)]];
    for _ in 0..depth {
        let mut next: BTreeMap<FqElem, usize> = BTreeMap::new();
        for parent in levels.last().unwrap() {
            let g = tower.sub_constant(&fbar, &parent.residue);
            for (r, m) in tower.roots_all(&g) {
                next.insert(r, m);
            }
        }
        levels.push(next.into_iter().map(|(r, m)| node(r, m)).collect());
    }
    let first: Vec<&FqElem> = levels[1].iter().map(|n| &n.residue).collect();
    let classification = if first == [&base] {
        TreeClass::Singleton
    } else {
        let (_, core) = power_substitution_decompose(&fbar, p);
        match totally_ramified_fibers(&core, p, tower) {
            Some(k) if k <= 1 => TreeClass::Infinite,
            _ => TreeClass::Undetermined,
        }
    };
    Ok(ReducedTree { base, levels, classification })
}

// ---------------------------------------------------------------------------
// Finite functional graphs

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("image {1} of {0} is outside the domain")]
    NotTotal(usize, usize),
    #[error("{0} is not in the iterated preimage set")]
    PreconditionViolation(usize),
    #[error("no point of the preimage set avoids the given points")]
    NotFound,
}

/// A self-map of a finite set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMap {
    table: BTreeMap<usize, usize>,
    inverse: BTreeMap<usize, Vec<usize>>,
}

impl FiniteMap {
    pub fn new(pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, MapError> {
        let table: BTreeMap<usize, usize> = pairs.into_iter().collect();
        let mut inverse: BTreeMap<usize, Vec<usize>> = table.keys().map(|&k| (k, Vec::new())).collect();
        for (&x, &y) in &table {
            inverse.get_mut(&y).ok_or(MapError::NotTotal(x, y))?.push(x);
        }
        Ok(FiniteMap { table, inverse })
    }

    /// The map `i -> images[i]` on `0..images.len()`.
    pub fn from_vec(images: &[usize]) -> Result<Self, MapError> {
        Self::new(images.iter().copied().enumerate())
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[&x]
    }

    pub fn domain(&self) -> impl Iterator<Item = usize> + '_ {
        self.table.keys().copied()
    }

    pub fn preimages(&self, y: usize) -> &[usize] {
        self.inverse.get(&y).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn is_surjective(&self) -> bool {
        self.inverse.values().all(|v| !v.is_empty())
    }

    /// `{a} ∪ f^-1(a) ∪ f^-2(a) ∪ ...`
    pub fn t_infinity(&self, a: usize) -> BTreeSet<usize> {
        let mut seen = BTreeSet::from([a]);
        let mut queue = VecDeque::from([a]);
        while let Some(y) = queue.pop_front() {
            for &x in self.preimages(y) {
                if seen.insert(x) {
                    queue.push_back(x);
                }
            }
        }
        seen
    }

    /// Forward orbit of `y` split into the pre-periodic tail and the cycle.
    pub fn forward_orbit(&self, y: usize) -> (Vec<usize>, Vec<usize>) {
        let mut order = Vec::new();
        let mut index = BTreeMap::new();
        let mut x = y;
        while !index.contains_key(&x) {
            index.insert(x, order.len());
            order.push(x);
            x = self.apply(x);
        }
        let start = index[&x];
        let cycle = order.split_off(start);
        (order, cycle)
    }

    pub fn forward_closure(&self, y: usize) -> BTreeSet<usize> {
        let (tail, cycle) = self.forward_orbit(y);
        tail.into_iter().chain(cycle).collect()
    }

    /// A point `x0` of `T(x)` whose own preimage set misses every `ys`.
    ///
    /// Takes `x` itself when possible, otherwise the least point outside the
    /// union of the forward orbits of the `ys`.
    pub fn avoid_select(&self, x: usize, ys: &[usize]) -> Result<usize, MapError> {
        let t = self.t_infinity(x);
        if let Some(&bad) = ys.iter().find(|y| !t.contains(y)) {
            return Err(MapError::PreconditionViolation(bad));
        }
        let blocked: BTreeSet<usize> = ys.iter().flat_map(|&y| self.forward_closure(y)).collect();
        if !blocked.contains(&x) {
            return Ok(x);
        }
        t.into_iter().find(|z| !blocked.contains(z)).ok_or(MapError::NotFound)
    }

    /// Points of `T(a)` whose fiber has at most one element.
    pub fn thin_fibers(&self, a: usize) -> Vec<usize> {
        self.t_infinity(a).into_iter().filter(|&y| self.preimages(y).len() <= 1).collect()
    }

    /// The distinct-preimage chain `b, beta_1, beta_2, ...` above `a`, grown
    /// greedily until it reaches `max_len` or no admissible preimage exists.
    /// Returns `None` when `a` has no preimage other than itself.
    pub fn preimage_chain(&self, a: usize, max_len: usize) -> Option<Vec<usize>> {
        let b = *self.preimages(a).iter().find(|&&b| b != a)?;
        let mut chain = vec![b];
        while chain.len() < max_len {
            let last = *chain.last().unwrap();
            let next = self
                .preimages(last)
                .iter()
                .copied()
                .find(|&c| c != a && !chain.contains(&c));
            match next {
                Some(c) => chain.push(c),
                None => break,
            }
        }
        Some(chain)
    }
}

mod elem_str {
    use super::FqElem;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &FqElem, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<FqElem, D::Error> {
        let s = String::deserialize(d)?;
        parse_elem(&s).ok_or_else(|| serde::de::Error::custom(format!("bad residue {s:?}")))
    }

    pub fn parse_elem(s: &str) -> Option<FqElem> {
        let rest = s.strip_prefix("level ")?;
        let (lvl, coords) = rest.split_once(": ")?;
        let level = lvl.parse().ok()?;
        let inner = coords.strip_prefix('[')?.strip_suffix(']')?;
        let coords: Vec<u64> = inner.split(',').map(|c| c.parse().ok()).collect::<Option<_>>()?;
        (coords.len() == level).then_some(FqElem { level, coords })
    }
}

pub use elem_str::parse_elem;

mod elems_str {
    use super::FqElem;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(xs: &[FqElem], s: S) -> Result<S::Ok, S::Error> {
        xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<FqElem>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| super::elem_str::parse_elem(s).ok_or_else(|| serde::de::Error::custom("bad residue")))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ratio;

    fn two() -> Prime {
        Prime::new(2).unwrap()
    }

    fn q(s: &str) -> QPoly {
        s.parse().unwrap()
    }

    fn tower(p: u64) -> FieldTower {
        FieldTower::new(Prime::new(p).unwrap()).unwrap()
    }

    #[test]
    fn reduction_form_examples() {
        assert_eq!(reduction_form(&q("z^2+2z"), two()).unwrap(), (1, FqPoly::from_fp(&[0, 1])));
        assert_eq!(reduction_form(&q("z^6+z^4"), two()).unwrap(), (1, FqPoly::from_fp(&[0, 0, 1, 1])));
        assert_eq!(reduction_form(&q("z^3+z"), two()).unwrap().0, 0);
        assert!(matches!(
            reduction_form(&q("z^2+z/2"), two()),
            Err(DynamicsError::Field(FieldError::NonIntegralCoefficient(1)))
        ));
    }

    #[test]
    fn pcb_examples() {
        assert_eq!(pcb_check(&q("z^2+2z"), two()), PcbStatus::CertifiedPCB);
        assert_eq!(
            pcb_check(&q("z^3+z^2"), Prime::new(3).unwrap()),
            PcbStatus::NotPCB(ExtVal::from_int(-1))
        );
        assert_eq!(pcb_check(&q("z^6+z^4"), two()), PcbStatus::CertifiedPCB);
        assert_eq!(pcb_check(&q("2z^2"), two()), PcbStatus::NotApplicable);
    }

    #[test]
    fn coefficient_criterion_examples() {
        assert_eq!(coefficient_criterion(&q("z^6+z^4"), two()).unwrap(), vec![]);
        assert_eq!(coefficient_criterion(&q("z^6+z^3"), two()).unwrap(), vec![(3, ExtVal::zero())]);
        assert_eq!(coefficient_criterion(&q("z^4+2z^2+2z"), two()).unwrap(), vec![]);
        assert!(coefficient_criterion(&q("z^3+z"), two()).is_err());
        assert!(coefficient_criterion(&q("z^2+1"), two()).is_err());
    }

    #[test]
    fn direction_degree_examples() {
        let mut t = tower(2);
        let zero = FqElem::from_fp(0);
        let one = FqElem::from_fp(1);
        assert_eq!(direction_degree(&q("z^2+2z"), two(), &zero, &mut t).unwrap().degree, 2);
        assert_eq!(direction_degree(&q("z^6+z^4"), two(), &zero, &mut t).unwrap().degree, 4);
        assert_eq!(direction_degree(&q("z^6+z^4"), two(), &one, &mut t).unwrap().degree, 2);
    }

    #[test]
    fn decomposition_examples() {
        let mut t = tower(2);
        let dd = |f: &str, x: u64, t: &mut FieldTower| {
            preimage_disk_decomposition(&q(f), two(), &FqElem::from_fp(x), t).unwrap()
        };
        let a = dd("z^6+z^4", 0, &mut t);
        assert_eq!(
            a.iter().map(|d| (d.residue.clone(), d.degree)).collect::<Vec<_>>(),
            vec![(FqElem::from_fp(0), 4), (FqElem::from_fp(1), 2)]
        );
        let b = dd("z^2+2z", 1, &mut t);
        assert_eq!(b, vec![DirectionDegree { residue: FqElem::from_fp(1), degree: 2 }]);
        let c = dd("z^6+z^4", 1, &mut t);
        assert_eq!(c.len(), 3);
        assert!(c.iter().all(|d| d.degree == 2 && d.residue.level == 3));
    }

    #[test]
    fn bad_direction_examples() {
        let mut t = tower(2);
        let r = bad_directions(&q("z^2+2z"), two(), &mut t).unwrap();
        assert_eq!((r.d0, r.eps0.clone(), r.bad_residues.len()), (2, ExtVal::from_int(1), 0));
        let r = bad_directions(&q("z^6+z^4"), two(), &mut t).unwrap();
        assert_eq!((r.d0, r.bad_residues.clone()), (2, vec![FqElem::from_fp(0)]));
        let mut t3 = tower(3);
        let r = bad_directions(&q("z^3+z^2"), Prime::new(3).unwrap(), &mut t3).unwrap();
        assert_eq!((r.d0, r.eps0, r.bad_residues), (1, ExtVal::Inf, vec![FqElem::from_fp(0)]));
    }

    #[test]
    fn eps0_uses_gauss_valuations() {
        // f = z^4 + 2z^2 at p=2: f_1 = 4z^3+4z (v 2), f_2 = 6z^2+2 (v 1), f_3 = 4z (v 2), f_4 = 1
        let mut t = tower(2);
        let r = bad_directions(&q("z^4+2z^2"), two(), &mut t).unwrap();
        assert_eq!(r.d0, 4);
        assert_eq!(r.eps0, ExtVal::Fin(ratio(1, 2)));
    }

    #[test]
    fn reduced_tree_examples() {
        let mut t = tower(2);
        let one = FqElem::from_fp(1);
        let a = reduced_tree(&q("z^2+2z"), two(), &one, 3, &mut t).unwrap();
        assert_eq!(a.classification, TreeClass::Singleton);
        assert!(a.levels.iter().all(|l| l.len() == 1 && l[0].residue == one));
        let b = reduced_tree(&q("z^6+z^4"), two(), &one, 2, &mut t).unwrap();
        assert_eq!(b.classification, TreeClass::Infinite);
        assert_eq!(b.levels[1].len(), 3);
        assert!(b.levels[1].iter().all(|n| n.mult == 2 && n.level_field == 3));
        assert!(b.cumulative_count(2) > b.cumulative_count(1));
        let c = reduced_tree(&q("z^2+2z"), two(), &FqElem::from_fp(0), 2, &mut t).unwrap();
        assert_eq!(c.classification, TreeClass::Singleton);
    }

    #[test]
    fn reduced_tree_undetermined_for_pure_power() {
        // f̄ = z^2 is a bijection on the residue field
        let mut t = tower(2);
        let r = reduced_tree(&q("z^2"), two(), &FqElem { level: 2, coords: vec![0, 1] }, 1, &mut t).unwrap();
        assert_eq!(r.classification, TreeClass::Undetermined);
    }

    #[test]
    fn ramified_fibers() {
        let mut t = tower(2);
        assert_eq!(totally_ramified_fibers(&FqPoly::from_fp(&[0, 0, 1, 1]), two(), &mut t), Some(0));
        let mut t3 = tower(3);
        let p3 = Prime::new(3).unwrap();
        // w^2 + w = (w + 2)^2 - 1 over F_3
        assert_eq!(totally_ramified_fibers(&FqPoly::from_fp(&[0, 1, 1]), p3, &mut t3), Some(1));
        assert_eq!(totally_ramified_fibers(&FqPoly::from_fp(&[0, 1]), p3, &mut t3), None);
    }

    #[test]
    fn finite_map_examples() {
        let id = FiniteMap::new([(1, 1), (2, 2), (3, 3)]).unwrap();
        assert_eq!(id.t_infinity(1), BTreeSet::from([1]));
        let m = FiniteMap::new([(1, 2), (2, 1), (3, 1)]).unwrap();
        assert_eq!(m.t_infinity(1), BTreeSet::from([1, 2, 3]));
        let shift = FiniteMap::from_vec(&[1, 2, 3, 0]).unwrap();
        assert_eq!(shift.forward_orbit(0), (vec![], vec![0, 1, 2, 3]));
        assert_eq!(FiniteMap::new([(1, 5)]), Err(MapError::NotTotal(1, 5)));
    }

    #[test]
    fn avoid_select_examples() {
        let m = FiniteMap::new([(1, 2), (2, 1), (3, 1)]).unwrap();
        assert_eq!(m.avoid_select(1, &[3]), Err(MapError::NotFound));
        let m = FiniteMap::new([(1, 1), (2, 1), (3, 2), (4, 3)]).unwrap();
        let x0 = m.avoid_select(1, &[2]).unwrap();
        assert!([3, 4].contains(&x0));
        assert!(!m.t_infinity(x0).contains(&2));
        assert_eq!(m.avoid_select(1, &[]), Ok(1));
        let m = FiniteMap::new([(1, 1), (2, 2)]).unwrap();
        assert_eq!(m.avoid_select(1, &[2]), Err(MapError::PreconditionViolation(2)));
    }

    #[test]
    fn residue_json_roundtrip() {
        let d = DirectionDegree { residue: FqElem { level: 3, coords: vec![1, 0, 1] }, degree: 2 };
        let s = serde_json::to_string(&d).unwrap();
        assert_eq!(s, r#"{"residue":"level 3: [1,0,1]","degree":2}"#);
        assert_eq!(serde_json::from_str::<DirectionDegree>(&s).unwrap(), d);
    }
}
