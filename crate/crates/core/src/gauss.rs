//! Gaussian integers `a + b i`. Rational integers are the elements with `im = 0`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use crate::arith;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct GaussInt {
    pub re: i128,
    pub im: i128,
}

impl GaussInt {
    pub const ZERO: GaussInt = GaussInt { re: 0, im: 0 };
    pub const ONE: GaussInt = GaussInt { re: 1, im: 0 };
    pub const I: GaussInt = GaussInt { re: 0, im: 1 };

    pub const fn new(re: i128, im: i128) -> Self {
        GaussInt { re, im }
    }

    pub const fn int(n: i128) -> Self {
        GaussInt { re: n, im: 0 }
    }

    pub fn norm(self) -> i128 {
        self.re * self.re + self.im * self.im
    }

    pub fn conj(self) -> Self {
        GaussInt::new(self.re, -self.im)
    }

    pub fn is_zero(self) -> bool {
        self.re == 0 && self.im == 0
    }

    pub fn is_unit(self) -> bool {
        self.norm() == 1
    }

    pub fn is_rational(self) -> bool {
        self.im == 0
    }

    pub fn pow(self, mut e: u32) -> Self {
        let mut b = self;
        let mut r = GaussInt::ONE;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b;
            }
            b = b * b;
            e >>= 1;
        }
        r
    }

    /// `self / d` when the quotient is a Gaussian integer.
    pub fn div_exact(self, d: GaussInt) -> Option<GaussInt> {
        let n = d.norm();
        if n == 0 {
            return None;
        }
        let t = self * d.conj();
        if t.re % n != 0 || t.im % n != 0 {
            return None;
        }
        Some(GaussInt::new(t.re / n, t.im / n))
    }

    pub fn divides(self, z: GaussInt) -> bool {
        z.div_exact(self).is_some()
    }

    /// Nearest-integer division, remainder has norm at most half of `d`'s.
    pub fn div_round(self, d: GaussInt) -> (GaussInt, GaussInt) {
        let n = d.norm();
        let t = self * d.conj();
        let round = |x: i128| (2 * x + n).div_euclid(2 * n);
        let q = GaussInt::new(round(t.re), round(t.im));
        (q, self - q * d)
    }

    pub fn gcd(mut a: GaussInt, mut b: GaussInt) -> GaussInt {
        while !b.is_zero() {
            let (_, r) = a.div_round(b);
            a = b;
            b = r;
        }
        a.canonical().1
    }

    /// Splits `self` as `u * c` with `u` a unit and `c` in the first
    /// quadrant (`re > 0`, `im >= 0`). Zero maps to `(1, 0)`.
    pub fn canonical(self) -> (GaussInt, GaussInt) {
        if self.is_zero() {
            return (GaussInt::ONE, self);
        }
        let mut u = GaussInt::ONE;
        let mut c = self;
        // multiply by -i until in the first quadrant; u tracks the inverse
        for _ in 0..4 {
            if c.re > 0 && c.im >= 0 {
                return (u, c);
            }
            c = c * GaussInt::new(0, -1);
            u = u * GaussInt::I;
        }
        unreachable!("no first-quadrant associate for {self}")
    }

    /// Exponent `m` with `self = i^m`, for units.
    pub fn unit_exponent(self) -> Option<u32> {
        match (self.re, self.im) {
            (1, 0) => Some(0),
            (0, 1) => Some(1),
            (-1, 0) => Some(2),
            (0, -1) => Some(3),
            _ => None,
        }
    }

    /// Factorization into a unit and canonical primes, ordered by
    /// (norm, imaginary part).
    pub fn factor(self) -> (GaussInt, Vec<(GaussInt, u32)>) {
        assert!(!self.is_zero(), "factoring zero");
        let mut z = self;
        let mut out = Vec::new();
        for (p, _) in arith::factor(self.norm() as u128) {
            let p = p as i128;
            let cands: Vec<GaussInt> = if p == 2 {
                vec![GaussInt::new(1, 1)]
            } else if p % 4 == 3 {
                vec![GaussInt::int(p)]
            } else {
                let (a, b) = two_squares(p as u64);
                vec![GaussInt::new(a as i128, b as i128), GaussInt::new(b as i128, a as i128)]
            };
            for pi in cands {
                let mut e = 0;
                while let Some(q) = z.div_exact(pi) {
                    z = q;
                    e += 1;
                }
                if e > 0 {
                    out.push((pi, e));
                }
            }
        }
        out.sort_by_key(|(g, _)| (g.norm(), g.im));
        debug_assert!(z.is_unit());
        (z, out)
    }

    /// All divisors, up to units (canonical associates), including 1.
    pub fn divisors(self) -> Vec<GaussInt> {
        let (_, f) = self.factor();
        let mut divs = vec![GaussInt::ONE];
        for (p, e) in f {
            let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
            for d in &divs {
                let mut pk = GaussInt::ONE;
                for _ in 0..=e {
                    next.push(*d * pk);
                    pk = pk * p;
                }
            }
            divs = next;
        }
        divs
    }
}

/// Returns `(a, b)` with `a^2 + b^2 = p` and `a > b > 0`, for primes `p ≡ 1 mod 4`.
pub fn two_squares(p: u64) -> (u64, u64) {
    assert!(p % 4 == 1, "{p} is not 1 mod 4");
    // sqrt(-1) from a quadratic non-residue
    let mut c = 2u64;
    let r = loop {
        if arith::pow_mod(c, (p - 1) / 2, p) == p - 1 {
            break arith::pow_mod(c, (p - 1) / 4, p);
        }
        c += 1;
    };
    let g = GaussInt::gcd(GaussInt::int(p as i128), GaussInt::new(r as i128, 1));
    let (a, b) = (g.re.unsigned_abs() as u64, g.im.unsigned_abs() as u64);
    assert_eq!(a * a + b * b, p);
    (a.max(b), a.min(b))
}

impl Add for GaussInt {
    type Output = GaussInt;
    fn add(self, o: GaussInt) -> GaussInt {
        GaussInt::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for GaussInt {
    type Output = GaussInt;
    fn sub(self, o: GaussInt) -> GaussInt {
        GaussInt::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for GaussInt {
    type Output = GaussInt;
    fn mul(self, o: GaussInt) -> GaussInt {
        GaussInt::new(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
    }
}

impl Neg for GaussInt {
    type Output = GaussInt;
    fn neg(self) -> GaussInt {
        GaussInt::new(-self.re, -self.im)
    }
}

impl From<i128> for GaussInt {
    fn from(n: i128) -> Self {
        GaussInt::int(n)
    }
}

impl fmt::Display for GaussInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = (self.re, self.im);
        if b == 0 {
            return write!(f, "{a}");
        }
        let imag = match b.abs() {
            1 => "i".to_string(),
            m => format!("{m}*i"),
        };
        if a == 0 {
            if b < 0 {
                write!(f, "-{imag}")
            } else {
                write!(f, "{imag}")
            }
        } else {
            let sign = if b < 0 { '-' } else { '+' };
            write!(f, "{a}{sign}{imag}")
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseGaussError(pub String);

impl fmt::Display for ParseGaussError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cannot parse Gaussian integer {:?}", self.0)
    }
}

impl std::error::Error for ParseGaussError {}

/// Accepts `11+6*i`, `11+6i`, `(-2-i)`, `i`, `-3`, `2*i+1`.
impl FromStr for GaussInt {
    type Err = ParseGaussError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseGaussError(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace() && *c != '(' && *c != ')').collect();
        if t.is_empty() {
            return Err(err());
        }
        let mut z = GaussInt::ZERO;
        let mut start = 0;
        let bytes = t.as_bytes();
        let mut terms = Vec::new();
        for k in 1..=bytes.len() {
            if k == bytes.len() || ((bytes[k] == b'+' || bytes[k] == b'-') && bytes[k - 1] != b'*') {
                terms.push(&t[start..k]);
                start = k;
            }
        }
        for term in terms {
            let (neg, body) = match term.as_bytes()[0] {
                b'+' => (false, &term[1..]),
                b'-' => (true, &term[1..]),
                _ => (false, term),
            };
            let v = if let Some(coef) = body.strip_suffix('i') {
                let coef = coef.strip_suffix('*').unwrap_or(coef);
                let c: i128 = if coef.is_empty() { 1 } else { coef.parse().map_err(|_| err())? };
                GaussInt::new(0, c)
            } else {
                GaussInt::int(body.parse().map_err(|_| err())?)
            };
            z = if neg { z - v } else { z + v };
        }
        Ok(z)
    }
}
