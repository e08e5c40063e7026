//! The two supported base fields, their canonical primes and residue fields.

use std::cmp::Ordering;
use std::collections::{BTreeSet, BinaryHeap};
use std::cmp::Reverse;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{self, RationalPrimes};
use crate::error::{Error, Result};
use crate::gauss::{two_squares, GaussInt};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BaseField {
    #[serde(rename = "Q")]
    Rationals,
    #[serde(rename = "Qi")]
    GaussianRationals,
}

impl BaseField {
    pub fn tag(self) -> &'static str {
        match self {
            BaseField::Rationals => "Q",
            BaseField::GaussianRationals => "Qi",
        }
    }

    pub fn from_tag(s: &str) -> Option<Self> {
        match s {
            "Q" | "QQ" | "q" => Some(BaseField::Rationals),
            "Qi" | "Q(i)" | "qi" => Some(BaseField::GaussianRationals),
            _ => None,
        }
    }

    /// Parses an element of the ring of integers.
    pub fn parse_integer(self, s: &str) -> Result<GaussInt> {
        let z: GaussInt = s
            .parse()
            .map_err(|e: crate::gauss::ParseGaussError| Error::Parse { line: 0, msg: e.to_string() })?;
        if self == BaseField::Rationals && !z.is_rational() {
            return Err(Error::Parse { line: 0, msg: format!("{s} is not a rational integer") });
        }
        Ok(z)
    }

    /// Parses a prime, replacing it by its canonical generator.
    pub fn parse_prime(self, s: &str) -> Result<Prime> {
        let z = self.parse_integer(s)?;
        Prime::new(self, z).ok_or_else(|| Error::Parse { line: 0, msg: format!("{s} is not prime in {}", self.tag()) })
    }

    pub fn parse_prime_list(self, s: &str) -> Result<Vec<Prime>> {
        let mut out: Vec<Prime> = Vec::new();
        for part in s.split([',', ';']).map(str::trim).filter(|p| !p.is_empty()) {
            let p = self.parse_prime(part)?;
            if out.contains(&p) {
                return Err(Error::DuplicatePrime(p.to_string()));
            }
            out.push(p);
        }
        out.sort();
        Ok(out)
    }
}

impl fmt::Display for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// A prime of the base field, held by its canonical generator: a positive
/// rational prime over Q, the first-quadrant associate over Q(i).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Prime {
    field: BaseField,
    gen: GaussInt,
    norm: u64,
}

impl Prime {
    /// Returns `None` unless `z` generates a prime ideal.
    pub fn new(field: BaseField, z: GaussInt) -> Option<Prime> {
        match field {
            BaseField::Rationals => {
                if !z.is_rational() {
                    return None;
                }
                let p = z.re.unsigned_abs();
                if p > u64::MAX as u128 || !arith::is_prime(p as u64) {
                    return None;
                }
                Some(Prime { field, gen: GaussInt::int(p as i128), norm: p as u64 })
            }
            BaseField::GaussianRationals => {
                if z.is_zero() {
                    return None;
                }
                let c = z.canonical().1;
                let n = c.norm() as u128;
                let ok = if arith::is_prime(n as u64) {
                    true
                } else if c.im == 0 {
                    let p = c.re as u64;
                    p % 4 == 3 && arith::is_prime(p)
                } else {
                    false
                };
                ok.then_some(Prime { field, gen: c, norm: n as u64 })
            }
        }
    }

    pub fn field(&self) -> BaseField {
        self.field
    }

    pub fn generator(&self) -> GaussInt {
        self.gen
    }

    /// Residue-field order `q`.
    pub fn norm(&self) -> u64 {
        self.norm
    }

    /// The rational prime below.
    pub fn characteristic(&self) -> u64 {
        match self.field {
            BaseField::Rationals => self.norm,
            BaseField::GaussianRationals => {
                if self.gen.im == 0 {
                    self.gen.re as u64
                } else {
                    self.norm
                }
            }
        }
    }

    pub fn degree(&self) -> u32 {
        if self.norm == self.characteristic() {
            1
        } else {
            2
        }
    }

    pub fn lies_over_two(&self) -> bool {
        self.characteristic() == 2
    }

    /// p-adic valuation of a nonzero integer of the field.
    pub fn valuation(&self, z: GaussInt) -> u32 {
        assert!(!z.is_zero(), "valuation of zero");
        let mut e = 0;
        let mut w = z;
        while let Some(q) = w.div_exact(self.gen) {
            w = q;
            e += 1;
        }
        e
    }

    pub fn divides(&self, z: GaussInt) -> bool {
        self.gen.divides(z)
    }

    pub fn residue_field(&self) -> ResidueField {
        ResidueField::new(self)
    }
}

impl Ord for Prime {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.field, self.norm, self.gen.im, self.gen.re).cmp(&(other.field, other.norm, other.gen.im, other.gen.re))
    }
}

impl PartialOrd for Prime {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.gen)
    }
}

/// Canonical primes in increasing (norm, imaginary part) order.
#[derive(Debug, Clone)]
pub struct PrimeStream {
    field: BaseField,
    rational: std::iter::Peekable<RationalPrimes>,
    pending: BinaryHeap<Reverse<(u64, i128, i128)>>,
    excluded: BTreeSet<Prime>,
    degree_one_only: bool,
}

pub fn canonical_primes(field: BaseField, excluded: &[Prime]) -> PrimeStream {
    PrimeStream {
        field,
        rational: RationalPrimes::new().peekable(),
        pending: BinaryHeap::new(),
        excluded: excluded.iter().copied().collect(),
        degree_one_only: false,
    }
}

impl PrimeStream {
    /// Skip inert primes of norm `p^2` (only meaningful over Q(i)).
    pub fn degree_one_only(mut self, yes: bool) -> Self {
        self.degree_one_only = yes;
        self
    }

    fn next_raw(&mut self) -> Prime {
        match self.field {
            BaseField::Rationals => {
                let p = self.rational.next().expect("infinite");
                Prime { field: self.field, gen: GaussInt::int(p as i128), norm: p }
            }
            BaseField::GaussianRationals => loop {
                let bound = *self.rational.peek().expect("infinite");
                if let Some(Reverse((n, im, re))) = self.pending.peek().copied() {
                    if n < bound {
                        self.pending.pop();
                        return Prime { field: self.field, gen: GaussInt::new(re, im), norm: n };
                    }
                }
                let p = self.rational.next().expect("infinite");
                if p == 2 {
                    self.pending.push(Reverse((2, 1, 1)));
                } else if p % 4 == 1 {
                    let (a, b) = two_squares(p);
                    self.pending.push(Reverse((p, b as i128, a as i128)));
                    self.pending.push(Reverse((p, a as i128, b as i128)));
                } else if !self.degree_one_only {
                    self.pending.push(Reverse((p * p, 0, p as i128)));
                }
            },
        }
    }
}

impl Iterator for PrimeStream {
    type Item = Prime;

    fn next(&mut self) -> Option<Prime> {
        loop {
            let p = self.next_raw();
            if !self.excluded.contains(&p) {
                return Some(p);
            }
        }
    }
}

/// Element of a residue field F_q; `b` is the coefficient of `i` when q = p^2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fq {
    pub a: u64,
    pub b: u64,
}

/// F_p, or F_p[i] = F_{p^2} for inert Gaussian primes, with the reduction map
/// from the ring of integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResidueField {
    p: u64,
    quadratic: bool,
    /// image of `i` in F_p for split Gaussian primes (or for p = 2)
    i_image: Option<u64>,
}

impl ResidueField {
    pub fn new(prime: &Prime) -> Self {
        let p = prime.characteristic();
        match prime.field() {
            BaseField::Rationals => ResidueField { p, quadratic: false, i_image: None },
            BaseField::GaussianRationals => {
                if prime.degree() == 2 {
                    ResidueField { p, quadratic: true, i_image: None }
                } else {
                    let g = prime.generator();
                    // a + b i ≡ 0  =>  i ≡ -a / b
                    let b = arith::reduce(g.im, p);
                    let binv = arith::inv_mod(b, p).expect("generator imaginary part is a unit");
                    let r = arith::mul_mod(arith::reduce(-g.re, p), binv, p);
                    ResidueField { p, quadratic: false, i_image: Some(r) }
                }
            }
        }
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn order(&self) -> u64 {
        if self.quadratic {
            self.p * self.p
        } else {
            self.p
        }
    }

    pub fn zero(&self) -> Fq {
        Fq { a: 0, b: 0 }
    }

    pub fn one(&self) -> Fq {
        Fq { a: 1 % self.p, b: 0 }
    }

    pub fn reduce(&self, z: GaussInt) -> Fq {
        let (a, b) = (arith::reduce(z.re, self.p), arith::reduce(z.im, self.p));
        if self.quadratic {
            Fq { a, b }
        } else if let Some(r) = self.i_image {
            Fq { a: (a + arith::mul_mod(b, r, self.p)) % self.p, b: 0 }
        } else {
            debug_assert!(z.im == 0, "non-rational element reduced in a rational field");
            Fq { a, b: 0 }
        }
    }

    pub fn from_u64(&self, n: u64) -> Fq {
        Fq { a: n % self.p, b: 0 }
    }

    pub fn add(&self, x: Fq, y: Fq) -> Fq {
        Fq { a: (x.a + y.a) % self.p, b: (x.b + y.b) % self.p }
    }

    pub fn neg(&self, x: Fq) -> Fq {
        Fq { a: (self.p - x.a) % self.p, b: (self.p - x.b) % self.p }
    }

    pub fn sub(&self, x: Fq, y: Fq) -> Fq {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: Fq, y: Fq) -> Fq {
        let p = self.p;
        if !self.quadratic {
            return Fq { a: arith::mul_mod(x.a, y.a, p), b: 0 };
        }
        let ac = arith::mul_mod(x.a, y.a, p);
        let bd = arith::mul_mod(x.b, y.b, p);
        let ad = arith::mul_mod(x.a, y.b, p);
        let bc = arith::mul_mod(x.b, y.a, p);
        Fq { a: (ac + p - bd) % p, b: (ad + bc) % p }
    }

    pub fn pow(&self, x: Fq, mut e: u64) -> Fq {
        let mut r = self.one();
        let mut b = x;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }

    pub fn is_zero(&self, x: Fq) -> bool {
        x.a == 0 && x.b == 0
    }

    pub fn inv(&self, x: Fq) -> Option<Fq> {
        if self.is_zero(x) {
            return None;
        }
        Some(self.pow(x, self.order() - 2))
    }

    /// Euler criterion; only valid in odd characteristic.
    pub fn is_square(&self, x: Fq) -> bool {
        assert!(self.p != 2, "Euler criterion needs odd characteristic");
        self.is_zero(x) || self.pow(x, (self.order() - 1) / 2) == self.one()
    }

    /// All field elements, for brute-force checks at small q.
    pub fn elements(&self) -> Vec<Fq> {
        let p = self.p;
        if self.quadratic {
            (0..p).flat_map(|a| (0..p).map(move |b| Fq { a, b })).collect()
        } else {
            (0..p).map(|a| Fq { a, b: 0 }).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qi(s: &str) -> Prime {
        BaseField::GaussianRationals.parse_prime(s).unwrap()
    }

    #[test]
    fn rational_stream() {
        let excl = [BaseField::Rationals.parse_prime("2").unwrap(), BaseField::Rationals.parse_prime("37").unwrap()];
        let ps: Vec<String> = canonical_primes(BaseField::Rationals, &excl).take(4).map(|p| p.to_string()).collect();
        assert_eq!(ps, ["3", "5", "7", "11"]);
        let excl3 = [BaseField::Rationals.parse_prime("3").unwrap()];
        let ps: Vec<String> = canonical_primes(BaseField::Rationals, &excl3).take(3).map(|p| p.to_string()).collect();
        assert_eq!(ps, ["2", "5", "7"]);
    }

    #[test]
    fn gaussian_stream_prefix() {
        let ps: Vec<String> = canonical_primes(BaseField::GaussianRationals, &[]).take(7).map(|p| p.to_string()).collect();
        assert_eq!(ps, ["1+i", "2+i", "1+2*i", "3", "3+2*i", "2+3*i", "4+i"]);
        let d1: Vec<String> = canonical_primes(BaseField::GaussianRationals, &[])
            .degree_one_only(true)
            .take(4)
            .map(|p| p.to_string())
            .collect();
        assert_eq!(d1, ["1+i", "2+i", "1+2*i", "3+2*i"]);
    }

    #[test]
    fn parse_canonicalizes() {
        assert_eq!(qi("-2-i"), qi("2+i"));
        assert_eq!(qi("-i+2").to_string(), "1+2*i");
        assert!(BaseField::GaussianRationals.parse_prime("5").is_err());
        assert!(BaseField::GaussianRationals.parse_prime("7").is_ok());
        assert!(BaseField::Rationals.parse_prime("-37").is_ok());
        assert_eq!(qi("3").norm(), 9);
    }

    #[test]
    fn residue_map_is_a_ring_map() {
        let p = qi("11+6i");
        let f = p.residue_field();
        assert!(f.is_zero(f.reduce(p.generator())));
        let x = GaussInt::new(17, -4);
        let y = GaussInt::new(-3, 9);
        assert_eq!(f.reduce(x * y), f.mul(f.reduce(x), f.reduce(y)));
        let f3 = qi("3").residue_field();
        assert_eq!(f3.order(), 9);
        assert_eq!(f3.reduce(x * y), f3.mul(f3.reduce(x), f3.reduce(y)));
        assert_eq!(f3.mul(f3.reduce(GaussInt::I), f3.reduce(GaussInt::I)), f3.reduce(GaussInt::int(-1)));
    }
}
