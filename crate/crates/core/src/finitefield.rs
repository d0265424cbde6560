//! Finite fields `F_{p^m}` with compatible embeddings, standing in for the
//! algebraically closed residue field at whatever finite depth a computation
//! needs.
//!
//! Level `m` is `F_p[x]/(P_m)` where `P_m` is the least monic irreducible of
//! degree `m`, ordering candidates by their coefficient vectors read from
//! `c_{m-1}` down to `c_0` (equivalently by the integer `sum c_i p^i`). Level 1
//! uses `P_1 = z`, so its elements are plain residues.
//!
//! For `m | M` the embedding `F_{p^m} -> F_{p^M}` sends the generator of level
//! `m` to a root of `P_m` in level `M`. Roots are chosen least-first subject to
//! agreeing with every embedding already fixed on common subfields, so
//! embeddings compose. Elements leaving this module are always stored at
//! their minimal level, which makes equality structural.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{ExtVal, Prime};
use crate::polynomial::QPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("coefficient {0} is not integral at p")]
    NonIntegralCoefficient(usize),
    #[error("bad tower cache line {0:?}")]
    BadCache(String),
    #[error("prime {0} is too large for residue field arithmetic")]
    PrimeTooLarge(u64),
}

/// Element of `F_{p^level}`: coordinates over `F_p` in the power basis of the
/// level's generator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FqElem {
    pub level: usize,
    pub coords: Vec<u64>,
}

impl FqElem {
    pub fn from_fp(c: u64) -> Self {
        FqElem { level: 1, coords: vec![c] }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// `Some(c)` when the element lies in the prime field.
    pub fn as_fp(&self) -> Option<u64> {
        (self.level == 1).then(|| self.coords[0])
    }
}

impl Ord for FqElem {
    fn cmp(&self, other: &Self) -> Ordering {
        self.level
            .cmp(&other.level)
            .then_with(|| self.coords.iter().rev().cmp(other.coords.iter().rev()))
    }
}

impl PartialOrd for FqElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "level {}: [{}]", self.level, cs.join(","))
    }
}

/// Polynomial over `F_{p^level}`, ascending coefficients, trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FqPoly {
    pub level: usize,
    coeffs: Vec<Vec<u64>>,
}

impl FqPoly {
    pub fn new(level: usize, coeffs: Vec<Vec<u64>>) -> Self {
        let mut c = coeffs;
        trim(&mut c);
        FqPoly { level, coeffs: c }
    }

    /// Polynomial with prime-field coefficients.
    pub fn from_fp(cs: &[u64]) -> Self {
        FqPoly::new(1, cs.iter().map(|&c| vec![c]).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, i: usize) -> FqElem {
        FqElem {
            level: self.level,
            coords: self.coeffs.get(i).cloned().unwrap_or_else(|| vec![0; self.level]),
        }
    }

    pub fn raw_coeffs(&self) -> &[Vec<u64>] {
        &self.coeffs
    }

    /// Prime-field coefficients when the polynomial lives at level 1.
    pub fn fp_coeffs(&self) -> Option<Vec<u64>> {
        (self.level == 1).then(|| self.coeffs.iter().map(|c| c[0]).collect())
    }
}

impl fmt::Display for FqPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.iter().all(|&x| x == 0) {
                continue;
            }
            let coef = if self.level == 1 {
                c[0].to_string()
            } else {
                format!("[{}]", c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            };
            let is_one = self.level == 1 && c[0] == 1 || c.first() == Some(&1) && c[1..].iter().all(|&x| x == 0);
            parts.push(match (i, is_one) {
                (0, _) => coef,
                (1, true) => "z".into(),
                (1, false) => format!("{coef}*z"),
                (_, true) => format!("z^{i}"),
                (_, false) => format!("{coef}*z^{i}"),
            });
        }
        f.write_str(&parts.join("+"))
    }
}

fn trim(v: &mut Vec<Vec<u64>>) {
    while v.last().is_some_and(|c| c.iter().all(|&x| x == 0)) {
        v.pop();
    }
}

// ---------------------------------------------------------------------------
// Arithmetic in one level

/// Arithmetic context for `F_{p^m} = F_p[x]/(modulus)`.
#[derive(Debug, Clone)]
pub struct Fq {
    p: u64,
    m: usize,
    modulus: Vec<u64>,
}

type Elem = Vec<u64>;
type Poly = Vec<Elem>;

impl Fq {
    pub fn new(p: u64, modulus: Vec<u64>) -> Self {
        let m = modulus.len() - 1;
        Fq { p, m, modulus }
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    /// Field size `p^m`.
    pub fn order(&self) -> BigUint {
        num_traits::pow(BigUint::from(self.p), self.m)
    }

    fn zero(&self) -> Elem {
        vec![0; self.m]
    }

    fn one(&self) -> Elem {
        let mut e = self.zero();
        e[0] = 1;
        e
    }

    fn constant(&self, c: u64) -> Elem {
        let mut e = self.zero();
        e[0] = c % self.p;
        e
    }

    fn is_zero(&self, a: &[u64]) -> bool {
        a.iter().all(|&x| x == 0)
    }

    fn add(&self, a: &[u64], b: &[u64]) -> Elem {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }

    fn sub(&self, a: &[u64], b: &[u64]) -> Elem {
        a.iter().zip(b).map(|(x, y)| (x + self.p - y) % self.p).collect()
    }

    fn neg(&self, a: &[u64]) -> Elem {
        a.iter().map(|x| (self.p - x) % self.p).collect()
    }

    fn mul(&self, a: &[u64], b: &[u64]) -> Elem {
        let p = self.p;
        let m = self.m;
        if m == 1 {
            return vec![a[0] * b[0] % p];
        }
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        // modulus is monic of degree m
        for k in (m..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for i in 0..m {
                prod[k - m + i] = (prod[k - m + i] + (p - c) * self.modulus[i]) % p;
            }
        }
        prod.truncate(m);
        prod
    }

    fn pow(&self, a: &[u64], e: &BigUint) -> Elem {
        let mut acc = self.one();
        let bits = e.bits();
        for i in (0..bits).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    fn inv(&self, a: &[u64]) -> Elem {
        assert!(!self.is_zero(a), "inverting zero in a finite field");
        self.pow(a, &(self.order() - 2u32))
    }

    fn scalar_inv(&self, c: u64) -> u64 {
        fp_pow(c, self.p - 2, self.p)
    }

    fn random(&self, rng: &mut ChaCha8Rng) -> Elem {
        (0..self.m).map(|_| rng.gen_range(0..self.p)).collect()
    }

    // -- polynomials over the level ---------------------------------------

    fn pmonic(&self, f: &Poly) -> Poly {
        let inv = self.inv(f.last().unwrap());
        f.iter().map(|c| self.mul(c, &inv)).collect()
    }

    fn padd(&self, a: &Poly, b: &Poly) -> Poly {
        let n = a.len().max(b.len());
        let z = self.zero();
        let mut out: Poly = (0..n)
            .map(|i| self.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
            .collect();
        trim(&mut out);
        out
    }

    fn psub(&self, a: &Poly, b: &Poly) -> Poly {
        let n = a.len().max(b.len());
        let z = self.zero();
        let mut out: Poly = (0..n)
            .map(|i| self.sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
            .collect();
        trim(&mut out);
        out
    }

    fn pmul(&self, a: &Poly, b: &Poly) -> Poly {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut out = vec![self.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if self.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] = self.add(&out[i + j], &self.mul(x, y));
            }
        }
        trim(&mut out);
        out
    }

    fn pdivrem(&self, a: &Poly, b: &Poly) -> (Poly, Poly) {
        assert!(!b.is_empty(), "polynomial division by zero");
        let db = b.len() - 1;
        let mut r = a.clone();
        trim(&mut r);
        if r.len() <= db {
            return (vec![], r);
        }
        let inv = self.inv(&b[db]);
        let mut q = vec![self.zero(); r.len() - db];
        for k in (0..q.len()).rev() {
            let c = self.mul(&r[k + db], &inv);
            if !self.is_zero(&c) {
                for (i, bc) in b.iter().enumerate() {
                    r[k + i] = self.sub(&r[k + i], &self.mul(&c, bc));
                }
            }
            q[k] = c;
        }
        r.truncate(db);
        trim(&mut r);
        trim(&mut q);
        (q, r)
    }

    fn prem(&self, a: &Poly, b: &Poly) -> Poly {
        self.pdivrem(a, b).1
    }

    /// Monic gcd; zero only when both inputs are zero.
    fn pgcd(&self, a: &Poly, b: &Poly) -> Poly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_empty() {
            let r = self.prem(&x, &y);
            x = y;
            y = r;
        }
        if x.is_empty() {
            x
        } else {
            self.pmonic(&x)
        }
    }

    fn pderiv(&self, a: &Poly) -> Poly {
        let mut out: Poly = a
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| self.mul(c, &self.constant(i as u64 % self.p)))
            .collect();
        trim(&mut out);
        out
    }

    fn ppowmod(&self, base: &Poly, e: &BigUint, modulus: &Poly) -> Poly {
        let mut acc = vec![self.one()];
        let base = self.prem(base, modulus);
        for i in (0..e.bits()).rev() {
            acc = self.prem(&self.pmul(&acc, &acc), modulus);
            if e.bit(i) {
                acc = self.prem(&self.pmul(&acc, &base), modulus);
            }
        }
        acc
    }

    fn peval(&self, a: &Poly, x: &[u64]) -> Elem {
        let mut acc = self.zero();
        for c in a.iter().rev() {
            acc = self.add(&self.mul(&acc, x), c);
        }
        acc
    }

    /// `a(z)^(1/p)` for a polynomial whose exponents are all multiples of `p`.
    fn ppth_root(&self, a: &Poly) -> Poly {
        // c^(1/p) = c^(p^(m-1)) in F_{p^m}
        let e = num_traits::pow(BigUint::from(self.p), self.m - 1);
        a.iter()
            .step_by(self.p as usize)
            .map(|c| self.pow(c, &e))
            .collect()
    }

    /// Square-free factorization of a monic polynomial: `(factor, multiplicity)`.
    fn square_free(&self, f: &Poly) -> Vec<(Poly, usize)> {
        let mut out = Vec::new();
        self.sff_into(f, 1, &mut out);
        out
    }

    fn sff_into(&self, f: &Poly, scale: usize, out: &mut Vec<(Poly, usize)>) {
        if f.len() <= 1 {
            return;
        }
        let d = self.pderiv(f);
        if d.is_empty() {
            let root = self.ppth_root(f);
            self.sff_into(&root, scale * self.p as usize, out);
            return;
        }
        let mut c = self.pgcd(f, &d);
        let mut w = self.pdivrem(f, &c).0;
        let mut i = 1;
        while w.len() > 1 {
            let y = self.pgcd(&w, &c);
            let fac = self.pdivrem(&w, &y).0;
            if fac.len() > 1 {
                out.push((self.pmonic(&fac), i * scale));
            }
            w = y;
            c = self.pdivrem(&c, &w).0;
            i += 1;
        }
        if c.len() > 1 {
            let root = self.ppth_root(&c);
            self.sff_into(&root, scale * self.p as usize, out);
        }
    }

    /// Distinct-degree factorization of a monic square-free polynomial.
    fn distinct_degree(&self, f: &Poly) -> Vec<(Poly, usize)> {
        let x = vec![self.zero(), self.one()];
        let q = self.order();
        let mut rest = f.clone();
        let mut h = x.clone();
        let mut out = Vec::new();
        let mut i = 1;
        while rest.len() > 1 && 2 * i <= rest.len() - 1 {
            h = self.ppowmod(&h, &q, &rest);
            let g = self.pgcd(&rest, &self.psub(&h, &x));
            if g.len() > 1 {
                rest = self.pdivrem(&rest, &g).0;
                h = self.prem(&h, &rest);
                out.push((g, i));
            }
            i += 1;
        }
        if rest.len() > 1 {
            let k = rest.len() - 1;
            out.push((self.pmonic(&rest), k));
        }
        out
    }

    /// Roots of a monic square-free polynomial that splits into linear factors.
    fn split_roots(&self, f: &Poly, rng: &mut ChaCha8Rng) -> Vec<Elem> {
        match f.len() {
            0 | 1 => return vec![],
            2 => {
                let r = self.neg(&self.mul(&f[0], &self.inv(&f[1])));
                return vec![r];
            }
            _ => {}
        }
        loop {
            let a = self.random(rng);
            let t = if self.p == 2 {
                // trace of a*z
                let mut w = self.prem(&vec![self.zero(), a], f);
                let mut acc = w.clone();
                for _ in 1..self.m {
                    w = self.prem(&self.pmul(&w, &w), f);
                    acc = self.padd(&acc, &w);
                }
                acc
            } else {
                let e = (self.order() - 1u32) / 2u32;
                let s = self.ppowmod(&vec![a, self.one()], &e, f);
                self.psub(&s, &vec![self.one()])
            };
            let g = self.pgcd(f, &t);
            if g.len() > 1 && g.len() < f.len() {
                let h = self.pdivrem(f, &g).0;
                let h = self.pmonic(&h);
                let mut roots = self.split_roots(&g, rng);
                roots.extend(self.split_roots(&h, rng));
                return roots;
            }
        }
    }
}

fn fp_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            out.push(q);
            while n % q == 0 {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n % d == 0).collect()
}

fn lcm(a: usize, b: usize) -> usize {
    a / num_integer::gcd(a, b) * b
}

/// Rabin's irreducibility test over `F_p` for a monic polynomial.
pub fn is_irreducible_fp(p: u64, f: &[u64]) -> bool {
    let m = f.len() - 1;
    if m == 0 {
        return false;
    }
    if m == 1 {
        return true;
    }
    let ctx = Fq::new(p, vec![0, 1]);
    let fpoly: Poly = f.iter().map(|&c| vec![c]).collect();
    let x: Poly = vec![vec![0], vec![1]];
    let pb = BigUint::from(p);
    let frob = |k: usize| ctx.ppowmod(&x, &num_traits::pow(pb.clone(), k), &fpoly);
    if ctx.psub(&frob(m), &x) != Vec::<Elem>::new() {
        return false;
    }
    prime_factors(m).into_iter().all(|q| {
        let g = ctx.pgcd(&fpoly, &ctx.psub(&frob(m / q), &x));
        g.len() == 1
    })
}

/// Least monic irreducible of degree `m` over `F_p` in the tower's order.
pub fn least_irreducible(p: u64, m: usize) -> Vec<u64> {
    let mut digits = vec![0u64; m];
    loop {
        let mut f = digits.clone();
        f.push(1);
        if is_irreducible_fp(p, &f) {
            return f;
        }
        // increment base-p counter, c_0 least significant
        let mut i = 0;
        loop {
            digits[i] += 1;
            if digits[i] < p {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

// ---------------------------------------------------------------------------
// Tower

#[derive(Debug, Clone)]
struct Level {
    ctx: Fq,
    /// For each proper divisor `m`, the image of level `m`'s generator.
    gen_images: BTreeMap<usize, Elem>,
}

/// The residue-field tower `F_p ⊂ F_{p^2}, F_{p^3}, ...` built on demand.
///
/// Growing the tower needs `&mut self`; readers only need `&self`.
#[derive(Debug, Clone)]
pub struct FieldTower {
    p: Prime,
    levels: BTreeMap<usize, Level>,
    preset: BTreeMap<usize, Vec<u64>>,
}

impl FieldTower {
    pub fn new(p: Prime) -> Result<Self, FieldError> {
        if p.get() >= 1 << 31 {
            return Err(FieldError::PrimeTooLarge(p.get()));
        }
        let mut t = FieldTower { p, levels: BTreeMap::new(), preset: BTreeMap::new() };
        t.ensure_level(1);
        Ok(t)
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    /// Builds a tower whose moduli come from a cached table (see
    /// [`FieldTower::dump`]). Each cached modulus is checked for irreducibility.
    pub fn from_table(p: Prime, table: &str) -> Result<Self, FieldError> {
        let mut t = FieldTower::new(p)?;
        for line in table.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = || FieldError::BadCache(line.to_string());
            let (deg, cs) = line.split_once(':').ok_or_else(bad)?;
            let m: usize = deg.trim().parse().map_err(|_| bad())?;
            let f: Vec<u64> = cs
                .split(',')
                .map(|c| c.trim().parse::<u64>())
                .collect::<Result<_, _>>()
                .map_err(|_| bad())?;
            if m == 0 || f.len() != m + 1 || f[m] != 1 || f.iter().any(|&c| c >= p.get()) || !is_irreducible_fp(p.get(), &f) {
                return Err(bad());
            }
            t.preset.insert(m, f);
        }
        Ok(t)
    }

    /// Modulus table, one `degree: c_0,...,c_m` line per level.
    pub fn dump(&self) -> String {
        let mut out = format!("# p = {}\n", self.p);
        for (m, lvl) in &self.levels {
            let cs: Vec<String> = lvl.ctx.modulus.iter().map(|c| c.to_string()).collect();
            out.push_str(&format!("{m}: {}\n", cs.join(",")));
        }
        out
    }

    pub fn levels(&self) -> Vec<usize> {
        self.levels.keys().copied().collect()
    }

    pub fn modulus(&self, m: usize) -> Option<&[u64]> {
        self.levels.get(&m).map(|l| l.ctx.modulus.as_slice())
    }

    /// Arithmetic context for an existing level.
    pub fn ctx(&self, m: usize) -> &Fq {
        &self.levels.get(&m).unwrap_or_else(|| panic!("level {m} not built")).ctx
    }

    pub fn ensure_level(&mut self, m: usize) {
        if self.levels.contains_key(&m) {
            return;
        }
        for d in divisors(m) {
            if d < m {
                self.ensure_level(d);
            }
        }
        let p = self.p.get();
        let modulus = self.preset.get(&m).cloned().unwrap_or_else(|| least_irreducible(p, m));
        let ctx = Fq::new(p, modulus);
        let mut gen_images = BTreeMap::new();
        if m > 1 {
            let mut rng = ChaCha8Rng::seed_from_u64(0x7e57 + m as u64);
            let primes = prime_factors(m);
            let mut chosen: Vec<(usize, Elem)> = Vec::new();
            for &q in &primes {
                let sub = m / q;
                let sub_mod: Poly = self.levels[&sub].ctx.modulus.iter().map(|&c| ctx.constant(c)).collect();
                let mut roots = ctx.split_roots(&sub_mod, &mut rng);
                roots.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
                let pick = roots
                    .into_iter()
                    .find(|rho| {
                        chosen.iter().all(|(other, rho_o)| {
                            let c = num_integer::gcd(sub, *other);
                            let via_new = self.map_gen_through(&ctx, c, sub, rho);
                            let via_old = self.map_gen_through(&ctx, c, *other, rho_o);
                            via_new == via_old
                        })
                    })
                    .expect("compatible embedding exists");
                chosen.push((sub, pick));
            }
            for d in divisors(m) {
                if d == m {
                    continue;
                }
                let (sub, rho) = chosen.iter().find(|(s, _)| s % d == 0).unwrap();
                gen_images.insert(d, self.map_gen_through(&ctx, d, *sub, rho));
            }
        }
        self.levels.insert(m, Level { ctx, gen_images });
    }

    /// Image in the new level of level `c`'s generator, routed through level
    /// `sub` whose generator maps to `rho`.
    fn map_gen_through(&self, top: &Fq, c: usize, sub: usize, rho: &[u64]) -> Elem {
        let in_sub: Elem = if c == sub {
            let mut g = vec![0; sub];
            if sub > 1 {
                g[1] = 1;
            }
            g
        } else {
            self.levels[&sub].gen_images[&c].clone()
        };
        horner_embed(top, &in_sub, rho)
    }

    /// Embeds an element into level `target`, which must be a multiple of its level.
    pub fn embed(&mut self, x: &FqElem, target: usize) -> FqElem {
        assert_eq!(target % x.level, 0, "level {} does not divide {}", x.level, target);
        self.ensure_level(target);
        FqElem { level: target, coords: self.embed_raw(&x.coords, x.level, target) }
    }

    fn embed_raw(&self, coords: &[u64], from: usize, to: usize) -> Elem {
        if from == to {
            return coords.to_vec();
        }
        let top = &self.levels[&to];
        horner_embed(&top.ctx, coords, &top.gen_images[&from])
    }

    pub fn embed_poly(&mut self, g: &FqPoly, target: usize) -> FqPoly {
        assert_eq!(target % g.level, 0);
        self.ensure_level(target);
        let coeffs = g.coeffs.iter().map(|c| self.embed_raw(c, g.level, target)).collect();
        FqPoly::new(target, coeffs)
    }

    /// Rewrites an element at its minimal level.
    pub fn normalize(&self, x: &FqElem) -> FqElem {
        let ctx = self.ctx(x.level);
        let p = BigUint::from(self.p.get());
        for l in divisors(x.level) {
            if l == x.level {
                return x.clone();
            }
            let e = num_traits::pow(p.clone(), l);
            if ctx.pow(&x.coords, &e) == x.coords {
                let rho = &self.levels[&x.level].gen_images[&l];
                let coords = solve_in_basis(ctx, rho, l, &x.coords);
                return FqElem { level: l, coords };
            }
        }
        unreachable!()
    }

    /// `true` when the two elements are equal after embedding.
    pub fn same(&mut self, a: &FqElem, b: &FqElem) -> bool {
        let l = lcm(a.level, b.level);
        self.embed(a, l) == self.embed(b, l)
    }

    /// Brings a polynomial and a point to a common level.
    fn common(&mut self, g: &FqPoly, x: &FqElem) -> (usize, Poly, Elem) {
        let l = lcm(g.level, x.level);
        let gp = self.embed_poly(g, l);
        let xe = self.embed(x, l);
        (l, gp.coeffs, xe.coords)
    }

    pub fn eval(&mut self, g: &FqPoly, x: &FqElem) -> FqElem {
        let (l, gp, xe) = self.common(g, x);
        let v = self.ctx(l).peval(&gp, &xe);
        self.normalize(&FqElem { level: l, coords: v })
    }

    /// `g - c` as a polynomial at a common level.
    pub fn sub_constant(&mut self, g: &FqPoly, c: &FqElem) -> FqPoly {
        let (l, mut gp, ce) = self.common(g, c);
        let ctx = self.ctx(l).clone();
        if gp.is_empty() {
            gp.push(ctx.zero());
        }
        gp[0] = ctx.sub(&gp[0], &ce);
        FqPoly::new(l, gp)
    }

    /// Multiplicity of `x` as a root of `g` (0 when not a root). `g` nonzero.
    pub fn root_multiplicity(&mut self, g: &FqPoly, x: &FqElem) -> usize {
        assert!(!g.is_zero());
        let (l, mut gp, xe) = self.common(g, x);
        let ctx = self.ctx(l).clone();
        let lin = vec![ctx.neg(&xe), ctx.one()];
        let mut k = 0;
        loop {
            let (q, r) = ctx.pdivrem(&gp, &lin);
            if !r.is_empty() {
                return k;
            }
            gp = q;
            k += 1;
        }
    }

    /// All roots of `g` over the algebraic closure with multiplicities, each at
    /// its minimal level, sorted. The multiplicities sum to `deg g`.
    pub fn roots_all(&mut self, g: &FqPoly) -> Vec<(FqElem, usize)> {
        assert!(!g.is_zero(), "roots of the zero polynomial");
        if g.degree() == 0 {
            return vec![];
        }
        let m = g.level;
        let ctx = self.ctx(m).clone();
        let monic = ctx.pmonic(&g.coeffs);
        let mut rng = ChaCha8Rng::seed_from_u64(0xf00d);
        let mut out = Vec::new();
        for (sf, mult) in ctx.square_free(&monic) {
            for (part, k) in ctx.distinct_degree(&sf) {
                let big = m * k;
                let lifted = self.embed_poly(&FqPoly::new(m, part), big);
                let bctx = self.ctx(big).clone();
                for r in bctx.split_roots(&lifted.coeffs, &mut rng) {
                    out.push((self.normalize(&FqElem { level: big, coords: r }), mult));
                }
            }
        }
        out.sort();
        out
    }
}

fn horner_embed(top: &Fq, coords: &[u64], rho: &[u64]) -> Elem {
    let mut acc = top.zero();
    for &c in coords.iter().rev() {
        acc = top.add(&top.mul(&acc, rho), &top.constant(c));
    }
    acc
}

/// Solves `sum_{k<l} c_k rho^k = x` over `F_p`.
fn solve_in_basis(ctx: &Fq, rho: &[u64], l: usize, x: &[u64]) -> Elem {
    let p = ctx.p;
    let n = ctx.m;
    let mut cols = Vec::with_capacity(l);
    let mut pw = ctx.one();
    for _ in 0..l {
        cols.push(pw.clone());
        pw = ctx.mul(&pw, rho);
    }
    // augmented rows: n equations, l unknowns
    let mut rows: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let mut r: Vec<u64> = cols.iter().map(|c| c[i]).collect();
            r.push(x[i]);
            r
        })
        .collect();
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..l {
        let Some(sel) = (pivot_row..n).find(|&r| rows[r][col] != 0) else { continue };
        rows.swap(pivot_row, sel);
        let inv = ctx.scalar_inv(rows[pivot_row][col]);
        for v in rows[pivot_row].iter_mut() {
            *v = *v * inv % p;
        }
        for r in 0..n {
            if r != pivot_row && rows[r][col] != 0 {
                let f = rows[r][col];
                for k in 0..=l {
                    rows[r][k] = (rows[r][k] + (p - f) * rows[pivot_row][k]) % p;
                }
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    let mut sol = vec![0; l];
    for (r, &c) in pivots.iter().enumerate() {
        sol[c] = rows[r][l];
    }
    sol
}

// ---------------------------------------------------------------------------
// Reduction and decomposition

/// Coefficientwise reduction of an integral rational polynomial to `F_p`.
pub fn reduce_poly(f: &QPoly, p: Prime) -> Result<FqPoly, FieldError> {
    let pb = p.get();
    let coeffs = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| reduce_rat(c, p).map(|r| vec![r]).ok_or(FieldError::NonIntegralCoefficient(i)))
        .collect::<Result<Vec<_>, _>>()?;
    debug_assert!(coeffs.iter().all(|c| c[0] < pb));
    Ok(FqPoly::new(1, coeffs))
}

/// Residue of a `p`-integral rational, `None` when `v_p < 0`.
pub fn reduce_rat(q: &crate::arith::Rat, p: Prime) -> Option<u64> {
    if p.val(q) < ExtVal::zero() {
        return None;
    }
    let pb = num_bigint::BigInt::from(p.get());
    let n = residue_u64(q.numer(), &pb);
    let d = residue_u64(q.denom(), &pb);
    Some(n * fp_pow(d, p.get() - 2, p.get()) % p.get())
}

fn residue_u64(n: &num_bigint::BigInt, p: &num_bigint::BigInt) -> u64 {
    use num_integer::Integer;
    let r = n.mod_floor(p);
    r.try_into().unwrap()
}

/// Largest `ell` with `g(z) = core(z^(p^ell))`. Constants give `ell = 0`.
pub fn power_substitution_decompose(g: &FqPoly, p: Prime) -> (u32, FqPoly) {
    assert!(!g.is_zero(), "decomposing the zero polynomial");
    let p = p.get() as usize;
    let mut ell = 0;
    let mut cur = g.clone();
    while cur.degree() > 0
        && cur
            .coeffs
            .iter()
            .enumerate()
            .all(|(i, c)| i % p == 0 || c.iter().all(|&x| x == 0))
    {
        cur = FqPoly::new(cur.level, cur.coeffs.iter().step_by(p).cloned().collect());
        ell += 1;
    }
    (ell, cur)
}

impl FqPoly {
    /// `self(z^k)`.
    pub fn inflate(&self, k: usize) -> FqPoly {
        let mut coeffs = vec![vec![0; self.level]; self.degree() * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c.clone();
        }
        FqPoly::new(self.level, coeffs)
    }

    pub fn derivative(&self, p: Prime) -> FqPoly {
        let p = p.get();
        FqPoly::new(
            self.level,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.iter().map(|x| x * (i as u64 % p) % p).collect())
                .collect(),
        )
    }
}
