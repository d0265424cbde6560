//! Dense univariate polynomials over the rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::arith::{fmt_rat, parse_rat, rat, ExtVal, Prime, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("polynomial must have degree at least {0}")]
    DegreeTooSmall(usize),
}

fn parse_err(pos: usize, msg: impl Into<String>) -> PolyError {
    PolyError::Parse { pos, msg: msg.into() }
}

/// Polynomial with rational coefficients in ascending degree order, trimmed
/// so that the last stored coefficient is nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QPoly {
    coeffs: Vec<Rat>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn from_ints(cs: &[i64]) -> Self {
        QPoly::new(cs.iter().map(|&c| rat(c)).collect())
    }

    pub fn zero() -> Self {
        QPoly { coeffs: vec![] }
    }

    pub fn constant(c: Rat) -> Self {
        QPoly::new(vec![c])
    }

    /// The identity polynomial `z`.
    pub fn z() -> Self {
        QPoly::from_ints(&[0, 1])
    }

    pub fn monomial(c: Rat, k: usize) -> Self {
        let mut v = vec![Rat::zero(); k + 1];
        v[k] = c;
        QPoly::new(v)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn lc(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn is_integral(&self, p: Prime) -> bool {
        self.coeffs.iter().all(|c| p.val(c) >= ExtVal::zero())
    }

    /// Minimum coefficient valuation (the Gauss valuation); `inf` for zero.
    pub fn gauss_val(&self, p: Prime) -> ExtVal {
        self.coeffs.iter().map(|c| p.val(c)).min().unwrap_or(ExtVal::Inf)
    }

    pub fn scale(&self, s: &Rat) -> Self {
        QPoly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        QPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat(i as i64))
                .collect(),
        )
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = QPoly::constant(Rat::one());
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `self(inner(z))`.
    pub fn compose(&self, inner: &QPoly) -> Self {
        let mut acc = QPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &QPoly::constant(c.clone());
        }
        acc
    }

    /// `f^n`, with `f^0 = z`.
    pub fn iterate(&self, n: usize) -> Self {
        self.iterates(n).pop().unwrap()
    }

    /// `[f^0, f^1, ..., f^n]`.
    pub fn iterates(&self, n: usize) -> Vec<QPoly> {
        let mut out = Vec::with_capacity(n + 1);
        out.push(QPoly::z());
        for k in 0..n {
            let next = self.compose(&out[k]);
            out.push(next);
        }
        out
    }

    /// `g(z) = f(z + y)`.
    pub fn taylor_shift(&self, y: &Rat) -> Self {
        // Horner in the shifted variable: each step multiplies by (z + y).
        let mut acc: Vec<Rat> = Vec::new();
        for c in self.coeffs.iter().rev() {
            let mut next = vec![Rat::zero(); acc.len() + 1];
            for (i, a) in acc.iter().enumerate() {
                next[i + 1] += a;
                next[i] += a * y;
            }
            next[0] += c;
            acc = next;
        }
        QPoly::new(acc)
    }

    /// Quotient and remainder of division by a nonzero polynomial.
    pub fn div_rem(&self, d: &QPoly) -> (QPoly, QPoly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.degree();
        let inv_lc = d.lc().recip();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (QPoly::zero(), self.clone());
        }
        let mut q = vec![Rat::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] * &inv_lc;
            if !c.is_zero() {
                for (i, dc) in d.coeffs.iter().enumerate() {
                    r[k + i] -= &c * dc;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (QPoly::new(q), QPoly::new(r))
    }

    pub fn rem(&self, d: &QPoly) -> QPoly {
        self.div_rem(d).1
    }

    /// Primitive integer part: `self = content * prim` with `prim` having
    /// coprime integer coefficients and positive leading coefficient.
    pub fn primitive_part(&self) -> (Rat, Vec<BigInt>) {
        if self.is_zero() {
            return (Rat::zero(), vec![]);
        }
        let den = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rat::from_integer(den.clone())).to_integer())
            .collect();
        let mut g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if ints.last().unwrap().is_negative() {
            g = -g;
        }
        let prim = ints.iter().map(|c| c / &g).collect();
        (Rat::new(g, den), prim)
    }

    /// Rational roots with multiplicity, ascending.
    ///
    /// Candidates come from the rational root theorem; integer factoring is
    /// by trial division, so a composite cofactor above `10^12` in the
    /// constant or leading coefficient can hide roots.
    pub fn rational_roots(&self) -> Vec<(Rat, usize)> {
        assert!(!self.is_zero(), "roots of the zero polynomial");
        let mut out = Vec::new();
        let mut f = self.clone();
        let zeros = f.coeffs.iter().take_while(|c| c.is_zero()).count();
        if zeros > 0 {
            out.push((Rat::zero(), zeros));
            f = QPoly::new(f.coeffs[zeros..].to_vec());
        }
        if f.degree() == 0 {
            return out;
        }
        let (_, prim) = f.primitive_part();
        let nums = divisors(&prim[0].abs());
        let dens = divisors(&prim.last().unwrap().abs());
        let mut cands: Vec<Rat> = Vec::new();
        for u in &nums {
            for v in &dens {
                if u.gcd(v).is_one() {
                    let r = Rat::new(u.clone(), v.clone());
                    cands.push(-r.clone());
                    cands.push(r);
                }
            }
        }
        cands.sort();
        for r in cands {
            let lin = QPoly::new(vec![-r.clone(), Rat::one()]);
            let mut m = 0;
            while f.degree() > 0 && f.eval(&r).is_zero() {
                f = f.div_rem(&lin).0;
                m += 1;
            }
            if m > 0 {
                out.push((r, m));
            }
        }
        out.sort();
        out
    }

    /// `f_1, ..., f_d` with `f(z + t) - f(z) = sum_j f_j(z) t^j`.
    pub fn perturbation_coeffs(&self) -> Vec<QPoly> {
        let d = self.degree();
        (1..=d)
            .map(|j| {
                QPoly::new(
                    (j..=d)
                        .map(|i| &self.coeffs[i] * Rat::from_integer(binomial(i, j)))
                        .collect(),
                )
            })
            .collect()
    }

    /// Ascending comma-separated coefficient list.
    pub fn to_coeff_list(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.coeffs.iter().map(fmt_rat).collect::<Vec<_>>().join(",")
    }

    pub fn parse_coeff_list(s: &str) -> Result<Self, PolyError> {
        let mut coeffs = Vec::new();
        let mut pos = 0;
        for part in s.split(',') {
            let c = parse_rat(part).map_err(|_| parse_err(pos, format!("bad coefficient {:?}", part.trim())))?;
            coeffs.push(c);
            pos += part.len() + 1;
        }
        Ok(QPoly::new(coeffs))
    }

    pub fn parse_expr(s: &str) -> Result<Self, PolyError> {
        ExprParser::new(s)?.parse()
    }
}

/// Positive divisors of a positive integer, ascending.
fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let mut rest = n.clone();
    let mut q = BigInt::from(2);
    let limit = BigInt::from(1_000_000u32);
    while &q * &q <= rest && q <= limit {
        let mut e = 0;
        while (&rest % &q).is_zero() {
            rest /= &q;
            e += 1;
        }
        if e > 0 {
            primes.push((q.clone(), e));
        }
        q += 1;
    }
    if rest > BigInt::one() {
        primes.push((rest, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (q, e) in primes {
        let mut next = Vec::new();
        for d in &divs {
            let mut pw = d.clone();
            for _ in 0..=e {
                next.push(pw.clone());
                pw *= &q;
            }
        }
        divs = next;
    }
    divs.sort();
    divs
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

impl FromStr for QPoly {
    type Err = PolyError;

    /// A string containing a comma is a coefficient list; anything else is an
    /// expression in `z`.
    fn from_str(s: &str) -> Result<Self, PolyError> {
        if s.contains(',') {
            QPoly::parse_coeff_list(s)
        } else {
            QPoly::parse_expr(s)
        }
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if neg {
                f.write_str("-")?;
            } else if !first {
                f.write_str("+")?;
            }
            first = false;
            let mono = match i {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{i}"),
            };
            if i == 0 {
                f.write_str(&fmt_rat(&a))?;
            } else if a.is_one() {
                f.write_str(&mono)?;
            } else {
                write!(f, "{}*{}", fmt_rat(&a), mono)?;
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a QPoly> for &'a QPoly {
    type Output = QPoly;
    fn add(self, rhs: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<'a> Sub<&'a QPoly> for &'a QPoly {
    type Output = QPoly;
    fn sub(self, rhs: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<'a> Mul<&'a QPoly> for &'a QPoly {
    type Output = QPoly;
    fn mul(self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

// ---------------------------------------------------------------------------
// Resultants

/// Exact resultant `Res(f, g) = lc(f)^deg(g) * prod g(root_i(f))`.
///
/// Denominators and contents are factored out and the primitive integer
/// parts go through subresultant pseudo-remainder sequences.
pub fn resultant(f: &QPoly, g: &QPoly) -> Rat {
    if f.is_zero() || g.is_zero() {
        return Rat::zero();
    }
    let (df, dg) = (f.degree() as u32, g.degree() as u32);
    if df == 0 {
        return num_traits::pow(f.lc(), dg as usize);
    }
    if dg == 0 {
        return num_traits::pow(g.lc(), df as usize);
    }
    let (cf, pf) = f.primitive_part();
    let (cg, pg) = g.primitive_part();
    let scale = num_traits::pow(cf, dg as usize) * num_traits::pow(cg, df as usize);
    scale * Rat::from_integer(subresultant_primitive(pf, pg))
}

/// `Disc(f) = (-1)^(d(d-1)/2) Res(f, f') / lc(f)`.
pub fn discriminant(f: &QPoly) -> Rat {
    assert!(f.degree() >= 1, "discriminant of a constant");
    let d = f.degree();
    let r = resultant(f, &f.derivative()) / f.lc();
    if (d * (d - 1) / 2) % 2 == 1 {
        -r
    } else {
        r
    }
}

fn ipoly_trim(v: &mut Vec<BigInt>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

/// `lc(b)^(deg a - deg b + 1) * a mod b` over the integers.
fn prem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.to_vec();
    let mut e = a.len() - b.len() + 1;
    ipoly_trim(&mut r);
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let c = r[dr].clone();
        let shift = dr - db;
        for x in r.iter_mut() {
            *x *= lb;
        }
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] -= &c * bc;
        }
        ipoly_trim(&mut r);
        e -= 1;
    }
    if e > 0 {
        let m = num_traits::pow(lb.clone(), e);
        for x in r.iter_mut() {
            *x *= &m;
        }
    }
    r
}

/// Subresultant resultant of two primitive, nonconstant integer polynomials.
fn subresultant_primitive(mut a: Vec<BigInt>, mut b: Vec<BigInt>) -> BigInt {
    let mut s = BigInt::one();
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
        if (a.len() - 1) % 2 == 1 && (b.len() - 1) % 2 == 1 {
            s = -s;
        }
    }
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let (da, db) = (a.len() - 1, b.len() - 1);
        let delta = (da - db) as u32;
        if da % 2 == 1 && db % 2 == 1 {
            s = -s;
        }
        let r = prem(&a, &b);
        a = b;
        if r.is_empty() {
            return BigInt::zero();
        }
        let div = &g * num_traits::pow(h.clone(), delta as usize);
        b = r.into_iter().map(|c| c / &div).collect();
        g = a.last().unwrap().clone();
        h = if delta == 0 {
            h
        } else {
            num_traits::pow(g.clone(), delta as usize) / num_traits::pow(h, (delta - 1) as usize)
        };
        if b.len() == 1 {
            let da = a.len() - 1;
            let lb = b[0].clone();
            let hh = num_traits::pow(lb, da) / num_traits::pow(h, da - 1);
            return s * hh;
        }
    }
}

// ---------------------------------------------------------------------------
// Expression parsing

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Var,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct ExprParser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl ExprParser {
    fn new(s: &str) -> Result<Self, PolyError> {
        let mut toks = Vec::new();
        let bytes: Vec<char> = s.chars().collect();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i];
            let tok = match c {
                ' ' | '\t' => {
                    i += 1;
                    continue;
                }
                '0'..='9' => {
                    let start = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    let lit: String = bytes[start..i].iter().collect();
                    toks.push((start, Tok::Num(lit.parse().unwrap())));
                    continue;
                }
                'z' => Tok::Var,
                '+' => Tok::Plus,
                '-' | '\u{2212}' => Tok::Minus,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '^' => Tok::Caret,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                other => return Err(parse_err(i, format!("unexpected character {other:?}"))),
            };
            toks.push((i, tok));
            i += 1;
        }
        Ok(ExprParser { toks, at: 0, end: bytes.len() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn parse(mut self) -> Result<QPoly, PolyError> {
        if self.toks.is_empty() {
            return Err(parse_err(0, "empty polynomial"));
        }
        let p = self.expr()?;
        if self.at != self.toks.len() {
            return Err(parse_err(self.pos(), "trailing input"));
        }
        Ok(p)
    }

    fn expr(&mut self) -> Result<QPoly, PolyError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.at += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.at += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<QPoly, PolyError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.at += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(Tok::Slash) => {
                    self.at += 1;
                    let pos = self.pos();
                    let d = self.unary()?;
                    if d.is_zero() || d.degree() > 0 {
                        return Err(parse_err(pos, "division only by a nonzero constant"));
                    }
                    acc = acc.scale(&d.lc().recip());
                }
                // juxtaposition, as in `2z^2`
                Some(Tok::Num(_)) | Some(Tok::Var) | Some(Tok::LParen) => {
                    acc = &acc * &self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<QPoly, PolyError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.at += 1;
                Ok(-&self.unary()?)
            }
            Some(Tok::Plus) => {
                self.at += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<QPoly, PolyError> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.at += 1;
            let pos = self.pos();
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.at += 1;
                    let e: u32 = n
                        .try_into()
                        .map_err(|_| parse_err(pos, "exponent too large"))?;
                    Ok(base.pow(e))
                }
                _ => Err(parse_err(pos, "expected a non-negative integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<QPoly, PolyError> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.at += 1;
                Ok(QPoly::constant(Rat::from_integer(n)))
            }
            Some(Tok::Var) => {
                self.at += 1;
                Ok(QPoly::z())
            }
            Some(Tok::LParen) => {
                self.at += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(parse_err(self.pos(), "expected ')'"));
                }
                self.at += 1;
                Ok(inner)
            }
            Some(_) => Err(parse_err(pos, "expected a number, 'z' or '('")),
            None => Err(parse_err(pos, "unexpected end of input")),
        }
    }
}
