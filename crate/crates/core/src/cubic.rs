//! Monic cubics over the integers of the base field and the family 𝓕 of
//! candidate residual splitting fields.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{BaseField, Fq, Prime, ResidueField};
use crate::gauss::GaussInt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CubicPoly {
    pub field: BaseField,
    pub c2: GaussInt,
    pub c1: GaussInt,
    pub c0: GaussInt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GaloisType {
    C3,
    S3,
}

impl CubicPoly {
    pub fn new(field: BaseField, c2: GaussInt, c1: GaussInt, c0: GaussInt) -> Self {
        CubicPoly { field, c2, c1, c0 }
    }

    pub fn rational(c2: i128, c1: i128, c0: i128) -> Self {
        CubicPoly::new(BaseField::Rationals, c2.into(), c1.into(), c0.into())
    }

    pub fn eval(&self, x: GaussInt) -> GaussInt {
        ((x + self.c2) * x + self.c1) * x + self.c0
    }

    pub fn discriminant(&self) -> GaussInt {
        let (a, b, c) = (self.c2, self.c1, self.c0);
        let k = GaussInt::int;
        k(18) * a * b * c - k(4) * a * a * a * c + a * a * b * b - k(4) * b * b * b - k(27) * c * c
    }

    /// Integral root, if any. Any root divides `c0`.
    pub fn integral_root(&self) -> Option<GaussInt> {
        if self.c0.is_zero() {
            return Some(GaussInt::ZERO);
        }
        let units: &[GaussInt] = match self.field {
            BaseField::Rationals => &[GaussInt::ONE, GaussInt::new(-1, 0)],
            BaseField::GaussianRationals => {
                &[GaussInt::ONE, GaussInt::I, GaussInt::new(-1, 0), GaussInt::new(0, -1)]
            }
        };
        for d in self.c0.divisors() {
            for &u in units {
                let x = u * d;
                if self.eval(x).is_zero() {
                    return Some(x);
                }
            }
        }
        None
    }

    pub fn is_irreducible(&self) -> bool {
        self.integral_root().is_none()
    }

    pub fn galois_type(&self) -> Result<GaloisType> {
        if !self.is_irreducible() {
            return Err(Error::Reducible(self.to_string()));
        }
        Ok(if is_square(self.field, self.discriminant()) { GaloisType::C3 } else { GaloisType::S3 })
    }

    /// λ(f,p): true iff f has no root modulo p.
    pub fn lambda(&self, p: &Prime) -> Result<bool> {
        if p.divides(self.discriminant()) {
            return Err(Error::BadPrime { prime: p.to_string(), cubic: self.to_string() });
        }
        let f = p.residue_field();
        Ok(!has_root_mod(&f, [f.reduce(self.c0), f.reduce(self.c1), f.reduce(self.c2)]))
    }

    pub fn reduce(&self, f: &ResidueField) -> [Fq; 3] {
        [f.reduce(self.c0), f.reduce(self.c1), f.reduce(self.c2)]
    }
}

impl fmt::Display for CubicPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^3")?;
        for (c, mono) in [(self.c2, "*x^2"), (self.c1, "*x"), (self.c0, "")] {
            if c.is_zero() {
                continue;
            }
            if c.is_rational() {
                if c.re < 0 {
                    write!(f, " - {}{mono}", -c.re)?;
                } else {
                    write!(f, " + {}{mono}", c.re)?;
                }
            } else {
                write!(f, " + ({c}){mono}")?;
            }
        }
        Ok(())
    }
}

/// Squareness in K*: even exponents everywhere and a square unit.
pub fn is_square(field: BaseField, z: GaussInt) -> bool {
    if z.is_zero() {
        return false;
    }
    match field {
        BaseField::Rationals => {
            let n = z.re;
            n > 0 && {
                let r = crate::arith::isqrt(n as u128) as i128;
                r * r == n
            }
        }
        BaseField::GaussianRationals => {
            let (u, f) = z.factor();
            f.iter().all(|(_, e)| e % 2 == 0) && u.unit_exponent().is_some_and(|m| m % 2 == 0)
        }
    }
}

type Poly = Vec<Fq>; // coefficients, constant term first

fn trim(f: &ResidueField, mut a: Poly) -> Poly {
    while a.last().is_some_and(|&c| f.is_zero(c)) {
        a.pop();
    }
    a
}

fn poly_rem(f: &ResidueField, a: &Poly, m: &Poly) -> Poly {
    let mut r = trim(f, a.clone());
    let m = trim(f, m.clone());
    let lead_inv = f.inv(*m.last().expect("nonzero modulus")).expect("field");
    while r.len() >= m.len() {
        let shift = r.len() - m.len();
        let c = f.mul(*r.last().unwrap(), lead_inv);
        for (i, &mi) in m.iter().enumerate() {
            r[shift + i] = f.sub(r[shift + i], f.mul(c, mi));
        }
        r = trim(f, r);
    }
    r
}

fn poly_mulmod(f: &ResidueField, a: &Poly, b: &Poly, m: &Poly) -> Poly {
    let mut out = vec![f.zero(); a.len() + b.len()];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(ai, bj));
        }
    }
    poly_rem(f, &out, m)
}

fn poly_gcd_degree(f: &ResidueField, a: Poly, b: Poly) -> usize {
    let (mut a, mut b) = (trim(f, a), trim(f, b));
    while !b.is_empty() {
        let r = poly_rem(f, &a, &b);
        a = b;
        b = r;
    }
    a.len().saturating_sub(1)
}

/// Root test for the monic cubic `x^3 + c[2] x^2 + c[1] x + c[0]` via
/// `gcd(x^q - x, f)`.
pub fn has_root_mod(f: &ResidueField, c: [Fq; 3]) -> bool {
    let m: Poly = vec![c[0], c[1], c[2], f.one()];
    let x: Poly = vec![f.zero(), f.one()];
    // x^q mod m by square-and-multiply
    let mut e = f.order();
    let mut base = x.clone();
    let mut acc: Poly = vec![f.one()];
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(f, &acc, &base, &m);
        }
        base = poly_mulmod(f, &base, &base, &m);
        e >>= 1;
    }
    let mut h = acc;
    h.resize(3, f.zero());
    h[1] = f.sub(h[1], f.one());
    let h = trim(f, h);
    if h.is_empty() {
        return true;
    }
    poly_gcd_degree(f, m, h) > 0
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyMember {
    pub poly: CubicPoly,
    pub disc: GaussInt,
    pub galois: GaloisType,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubicFamily {
    pub field: BaseField,
    pub members: Vec<FamilyMember>,
    /// S(𝓕): S together with every prime dividing some discriminant.
    pub bad_set: Vec<Prime>,
    /// Discriminant primes found outside the declared S.
    pub warnings: Vec<String>,
}

impl CubicFamily {
    pub fn empty(field: BaseField, s: &[Prime]) -> Self {
        let mut bad_set = s.to_vec();
        bad_set.sort();
        CubicFamily { field, members: Vec::new(), bad_set, warnings: Vec::new() }
    }

    pub fn from_polys(field: BaseField, s: &[Prime], polys: &[CubicPoly]) -> Result<Self> {
        let mut fam = CubicFamily::empty(field, s);
        for (idx, &poly) in polys.iter().enumerate() {
            if fam.members.iter().any(|m| m.poly == poly) {
                return Err(Error::DuplicateCubic { index: idx + 1, cubic: poly.to_string() });
            }
            if !poly.is_irreducible() {
                return Err(Error::ReducibleCubic { index: idx + 1, cubic: poly.to_string() });
            }
            let disc = poly.discriminant();
            let galois = poly.galois_type()?;
            for q in prime_divisors(field, disc) {
                if !fam.bad_set.contains(&q) {
                    fam.warnings.push(format!("disc({poly}) = {disc} is divisible by {q} outside S"));
                    fam.bad_set.push(q);
                }
            }
            fam.members.push(FamilyMember { poly, disc, galois });
        }
        fam.bad_set.sort();
        Ok(fam)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn polys(&self) -> Vec<CubicPoly> {
        self.members.iter().map(|m| m.poly).collect()
    }
}

pub fn prime_divisors(field: BaseField, z: GaussInt) -> Vec<Prime> {
    match field {
        BaseField::Rationals => crate::arith::factor(z.re.unsigned_abs())
            .into_iter()
            .filter_map(|(p, _)| Prime::new(field, GaussInt::int(p as i128)))
            .collect(),
        BaseField::GaussianRationals => {
            let mut out: Vec<Prime> = z.factor().1.into_iter().filter_map(|(g, _)| Prime::new(field, g)).collect();
            out.sort();
            out
        }
    }
}

/// Parses a cubic family file: one `c2 c1 c0` per line, `#` comments.
pub fn load_family(field: BaseField, s: &[Prime], text: &str) -> Result<CubicFamily> {
    let mut polys = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(Error::Parse { line: n + 1, msg: format!("expected 3 coefficients, got {}", toks.len()) });
        }
        let mut cs = [GaussInt::ZERO; 3];
        for (k, t) in toks.iter().enumerate() {
            cs[k] = field.parse_integer(t).map_err(|_| Error::Parse { line: n + 1, msg: format!("bad coefficient {t:?}") })?;
        }
        polys.push(CubicPoly::new(field, cs[0], cs[1], cs[2]));
    }
    CubicFamily::from_polys(field, s, &polys)
}

pub fn write_family(fam: &CubicFamily) -> String {
    let mut out = String::new();
    for m in &fam.members {
        out.push_str(&format!("{} {} {}\n", m.poly.c2, m.poly.c1, m.poly.c0));
    }
    out
}
