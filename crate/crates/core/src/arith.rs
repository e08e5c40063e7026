//! Rational-integer helpers: modular arithmetic, primality, trial factoring
//! and an incremental prime generator.

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// `a mod m` in `[0, m)` for signed `a`.
pub fn reduce(a: i128, m: u64) -> u64 {
    a.rem_euclid(m as i128) as u64
}

pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut t, mut nt) = (0i128, 1i128);
    let (mut r, mut nr) = (m as i128, (a % m) as i128);
    while nr != 0 {
        let q = r / nr;
        (t, nt) = (nt, t - q * nt);
        (r, nr) = (nr, r - q * nr);
    }
    if r != 1 {
        return None;
    }
    Some(t.rem_euclid(m as i128) as u64)
}

pub fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Factorization of `|n|` by trial division, primes ascending.
pub fn factor(n: u128) -> Vec<(u128, u32)> {
    let mut out = Vec::new();
    let mut n = n;
    if n < 2 {
        return out;
    }
    let mut push = |p: u128, n: &mut u128| {
        let mut e = 0;
        while n.is_multiple_of(p) {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(2, &mut n);
    push(3, &mut n);
    let mut p = 5u128;
    while p * p <= n {
        push(p, &mut n);
        push(p + 2, &mut n);
        p += 6;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Squarefree part of a nonzero integer, keeping the sign.
pub fn squarefree_part(n: i128) -> i128 {
    assert!(n != 0, "squarefree part of zero");
    let mut r: i128 = n.signum();
    for (p, e) in factor(n.unsigned_abs()) {
        if e % 2 == 1 {
            r *= p as i128;
        }
    }
    r
}

/// Rational primes in increasing order, sieved in growing segments.
#[derive(Debug, Clone)]
pub struct RationalPrimes {
    found: Vec<u64>,
    pos: usize,
    limit: u64,
}

impl Default for RationalPrimes {
    fn default() -> Self {
        Self::new()
    }
}

impl RationalPrimes {
    pub fn new() -> Self {
        RationalPrimes { found: Vec::new(), pos: 0, limit: 1 }
    }

    fn extend(&mut self) {
        let lo = self.limit + 1;
        let hi = (self.limit * 2).max(1024);
        let mut mark = vec![true; (hi - lo + 1) as usize];
        let mut p = 2u64;
        while p * p <= hi {
            let start = (lo.div_ceil(p) * p).max(p * p);
            let mut m = start;
            while m <= hi {
                mark[(m - lo) as usize] = false;
                m += p;
            }
            p += 1;
        }
        for (i, ok) in mark.into_iter().enumerate() {
            let n = lo + i as u64;
            if ok && n >= 2 {
                self.found.push(n);
            }
        }
        self.limit = hi;
    }
}

impl Iterator for RationalPrimes {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        while self.pos >= self.found.len() {
            self.extend();
        }
        self.pos += 1;
        Some(self.found[self.pos - 1])
    }
}
