//! Black-box oracles answering Frobenius trace and determinant at a prime.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::field::{canonical_primes, BaseField, Prime};
use crate::selmer::{symbol_of, Discriminant, SelmerBasis};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    Exact,
    /// Known modulo `2^n`.
    Bits(u32),
}

impl Precision {
    pub fn min(self, other: Precision) -> Precision {
        match (self, other) {
            (Precision::Exact, p) | (p, Precision::Exact) => p,
            (Precision::Bits(a), Precision::Bits(b)) => Precision::Bits(a.min(b)),
        }
    }

    /// Number of known low bits; `u32::MAX` for exact values.
    pub fn bits(self) -> u32 {
        match self {
            Precision::Exact => u32::MAX,
            Precision::Bits(n) => n,
        }
    }

    pub fn covers(self, n: u32) -> bool {
        self.bits() >= n
    }

    pub fn is_exact(self) -> bool {
        self == Precision::Exact
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Precision::Exact => f.write_str("exact"),
            Precision::Bits(n) => write!(f, "2^{n}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Finite(u32),
    /// The value vanishes modulo all known bits.
    AtLeast(u32),
    /// Exact zero.
    Infinite,
}

impl Valuation {
    pub fn at_least(self, k: u32) -> bool {
        match self {
            Valuation::Finite(v) | Valuation::AtLeast(v) => v >= k,
            Valuation::Infinite => true,
        }
    }
}

/// A 2-adic integer known exactly or modulo a power of two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Adic {
    pub value: i128,
    pub precision: Precision,
}

fn mod_pow2(v: i128, n: u32) -> i128 {
    if n >= 127 {
        v
    } else {
        v.rem_euclid(1i128 << n)
    }
}

impl Adic {
    pub fn exact(value: i128) -> Self {
        Adic { value, precision: Precision::Exact }
    }

    /// Reduces `value` into `[0, 2^n)`.
    pub fn bits(value: i128, n: u32) -> Self {
        Adic { value: mod_pow2(value, n), precision: Precision::Bits(n) }
    }

    pub fn with_precision(value: i128, precision: Precision) -> Self {
        match precision {
            Precision::Exact => Adic::exact(value),
            Precision::Bits(n) => Adic::bits(value, n),
        }
    }

    pub fn truncate(self, n: u32) -> Self {
        if self.precision.covers(n) {
            Adic::bits(self.value, n)
        } else {
            self
        }
    }

    pub fn valuation(self) -> Valuation {
        match self.precision {
            Precision::Exact if self.value == 0 => Valuation::Infinite,
            Precision::Exact => Valuation::Finite(self.value.trailing_zeros()),
            Precision::Bits(n) => {
                let v = mod_pow2(self.value, n);
                if v == 0 {
                    Valuation::AtLeast(n)
                } else {
                    Valuation::Finite(v.trailing_zeros())
                }
            }
        }
    }

    /// Whether `self ≡ c (mod 2^n)`; requires `n` known bits.
    pub fn congruent(self, c: i128, n: u32) -> bool {
        mod_pow2(self.value - c, n) == 0
    }

    /// Bit `k` of the value (two's complement for negative integers).
    pub fn bit(self, k: u32) -> bool {
        (self.value >> k) & 1 == 1
    }


}

impl fmt::Display for Adic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.precision {
            Precision::Exact => write!(f, "{}", self.value),
            Precision::Bits(n) => write!(f, "{} mod 2^{n}", self.value),
        }
    }
}

impl std::ops::Add for Adic {
    type Output = Adic;

    fn add(self, o: Adic) -> Adic {
        Adic::with_precision(self.value + o.value, self.precision.min(o.precision))
    }
}

impl std::ops::Sub for Adic {
    type Output = Adic;

    fn sub(self, o: Adic) -> Adic {
        Adic::with_precision(self.value - o.value, self.precision.min(o.precision))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FrobeniusAnswer {
    Ramified,
    Frobenius { trace: Adic, det: Adic },
}

impl FrobeniusAnswer {
    pub fn exact(trace: i128, det: i128) -> Self {
        FrobeniusAnswer::Frobenius { trace: Adic::exact(trace), det: Adic::exact(det) }
    }

    /// `(trace, det)`, or `RamifiedAnswer`.
    pub fn parts(&self, p: &Prime) -> Result<(Adic, Adic)> {
        match *self {
            FrobeniusAnswer::Ramified => Err(Error::RamifiedAnswer(p.to_string())),
            FrobeniusAnswer::Frobenius { trace, det } => Ok((trace, det)),
        }
    }
}

/// `F_p(1) = 1 - trace + det`, at the lesser of the two precisions.
pub fn f_at_one(a: &FrobeniusAnswer) -> Result<Adic> {
    match *a {
        FrobeniusAnswer::Ramified => Err(Error::RamifiedAnswer("?".into())),
        FrobeniusAnswer::Frobenius { trace, det } => Ok(Adic::exact(1) - trace + det),
    }
}

/// Which quantity an analysis step drew from an answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Trace,
    Det,
    FAtOne,
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quantity::Trace => "trace",
            Quantity::Det => "det",
            Quantity::FAtOne => "F(1)",
        })
    }
}

pub trait Oracle: Send + Sync {
    fn field(&self) -> BaseField;
    fn bad_set(&self) -> &[Prime];
    fn query(&self, p: &Prime) -> Result<FrobeniusAnswer>;

    fn describe(&self) -> String {
        "oracle".into()
    }

    /// Hook for recording how many bits of an answer a computation relied on.
    fn note_usage(&self, _p: &Prime, _q: Quantity, _bits: u32) {}
}

impl<O: Oracle + ?Sized> Oracle for &O {
    fn field(&self) -> BaseField {
        (**self).field()
    }
    fn bad_set(&self) -> &[Prime] {
        (**self).bad_set()
    }
    fn query(&self, p: &Prime) -> Result<FrobeniusAnswer> {
        (**self).query(p)
    }
    fn describe(&self) -> String {
        (**self).describe()
    }
    fn note_usage(&self, p: &Prime, q: Quantity, bits: u32) {
        (**self).note_usage(p, q, bits)
    }
}

impl<O: Oracle + ?Sized> Oracle for Box<O> {
    fn field(&self) -> BaseField {
        (**self).field()
    }
    fn bad_set(&self) -> &[Prime] {
        (**self).bad_set()
    }
    fn query(&self, p: &Prime) -> Result<FrobeniusAnswer> {
        (**self).query(p)
    }
    fn describe(&self) -> String {
        (**self).describe()
    }
    fn note_usage(&self, p: &Prime, q: Quantity, bits: u32) {
        (**self).note_usage(p, q, bits)
    }
}

pub fn query(o: &dyn Oracle, p: &Prime) -> Result<FrobeniusAnswer> {
    o.query(p)
}

fn sorted(s: &[Prime]) -> Vec<Prime> {
    let mut v = s.to_vec();
    v.sort();
    v.dedup();
    v
}

// ---------------------------------------------------------------- table

#[derive(Debug, Clone)]
pub struct TableOracle {
    field: BaseField,
    bad_set: Vec<Prime>,
    rows: BTreeMap<Prime, (Adic, Adic)>,
}

impl TableOracle {
    pub fn rows(&self) -> &BTreeMap<Prime, (Adic, Adic)> {
        &self.rows
    }
}

impl Oracle for TableOracle {
    fn field(&self) -> BaseField {
        self.field
    }

    fn bad_set(&self) -> &[Prime] {
        &self.bad_set
    }

    fn query(&self, p: &Prime) -> Result<FrobeniusAnswer> {
        if self.bad_set.contains(p) {
            return Ok(FrobeniusAnswer::Ramified);
        }
        let (trace, det) = self.rows.get(p).ok_or_else(|| Error::UnknownPrime(p.to_string()))?;
        Ok(FrobeniusAnswer::Frobenius { trace: *trace, det: *det })
    }

    fn describe(&self) -> String {
        format!("table ({} primes)", self.rows.len())
    }
}

fn parse_precision(tok: &str) -> Option<Precision> {
    let t = tok.trim();
    if t.eq_ignore_ascii_case("exact") {
        return Some(Precision::Exact);
    }
    let n = t.strip_prefix("2^").unwrap_or(t);
    n.parse().ok().map(Precision::Bits)
}

/// Reads `prime <tab> trace [<tab> det] [<tab> 2^n]`. A `-` det, or none,
/// means `det = N(p)`; a missing precision column means exact.
pub fn make_table_oracle(field: BaseField, bad_set: &[Prime], text: &str) -> Result<TableOracle> {
    let bad_set = sorted(bad_set);
    let mut rows = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse { line: n + 1, msg };
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() < 2 || toks.len() > 4 {
            return Err(err(format!("expected 2 to 4 columns, got {}", toks.len())));
        }
        let p = field.parse_prime(toks[0]).map_err(|e| err(e.to_string()))?;
        if bad_set.contains(&p) {
            return Err(err(format!("prime {p} lies in S")));
        }
        let trace: i128 = toks[1].parse().map_err(|_| err(format!("bad trace {:?}", toks[1])))?;
        let mut det = p.norm() as i128;
        let mut prec = Precision::Exact;
        let mut rest = &toks[2..];
        if let Some(t) = rest.first() {
            if t.starts_with("2^") || t.eq_ignore_ascii_case("exact") {
                prec = parse_precision(t).ok_or_else(|| err(format!("bad precision {t:?}")))?;
                rest = &rest[1..];
            } else {
                if *t != "-" {
                    det = t.parse().map_err(|_| err(format!("bad det {t:?}")))?;
                }
                rest = &rest[1..];
                if let Some(t) = rest.first() {
                    prec = parse_precision(t).ok_or_else(|| err(format!("bad precision {t:?}")))?;
                    rest = &rest[1..];
                }
            }
        }
        if !rest.is_empty() {
            return Err(err("trailing columns".into()));
        }
        if prec.covers(1) && det.rem_euclid(2) == 0 {
            return Err(err(format!("det {det} at {p} is not a 2-adic unit")));
        }
        let entry = (Adic::with_precision(trace, prec), Adic::with_precision(det, prec));
        if rows.insert(p, entry).is_some() {
            return Err(Error::DuplicatePrime(p.to_string()));
        }
    }
    Ok(TableOracle { field, bad_set, rows })
}

/// Table text for the given rows; det is always written out.
pub fn write_table(rows: &[(Prime, FrobeniusAnswer)]) -> String {
    let mut out = String::from("# prime\ttrace\tdet\n");
    for (p, a) in rows {
        if let FrobeniusAnswer::Frobenius { trace, det } = a {
            let prec = trace.precision.min(det.precision);
            out.push_str(&format!("{p}\t{}\t{}", trace.value, det.value));
            if let Precision::Bits(n) = prec {
                out.push_str(&format!("\t2^{n}"));
            }
            out.push('\n');
        }
    }
    out
}

/// Every answer with `N(p) <= max_norm`, `p ∉ S`, in canonical order.
pub fn dump(o: &dyn Oracle, max_norm: u64) -> Result<Vec<(Prime, FrobeniusAnswer)>> {
    let mut out = Vec::new();
    for p in canonical_primes(o.field(), o.bad_set()) {
        if p.norm() > max_norm {
            break;
        }
        out.push((p, o.query(&p)?));
    }
    Ok(out)
}

// ---------------------------------------------------------------- elliptic curves over Q

#[derive(Debug, Clone)]
pub struct EcOracleQ {
    a: [i128; 5],
    bad_set: Vec<Prime>,
    disc: i128,
}

/// `[b2, b4, b6, b8]` of a Weierstrass model.
fn b_invariants(a: &[i128; 5]) -> [i128; 4] {
    let [a1, a2, a3, a4, a6] = *a;
    let b2 = a1 * a1 + 4 * a2;
    let b4 = 2 * a4 + a1 * a3;
    let b6 = a3 * a3 + 4 * a6;
    let b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    [b2, b4, b6, b8]
}

pub fn curve_discriminant(a: &[i128; 5]) -> i128 {
    let [b2, b4, b6, b8] = b_invariants(a);
    -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6
}

pub fn make_ec_oracle_q(a: [i128; 5], bad_set: &[Prime]) -> Result<EcOracleQ> {
    let bad_set = sorted(bad_set);
    if bad_set.iter().any(|p| p.field() != BaseField::Rationals) {
        return Err(Error::Parse { line: 0, msg: "curve oracles are defined over Q only".into() });
    }
    let disc = curve_discriminant(&a);
    if disc == 0 {
        return Err(Error::BadModel);
    }
    let mut rest = disc;
    for p in &bad_set {
        let q = p.norm() as i128;
        while rest % q == 0 {
            rest /= q;
        }
    }
    if rest.abs() != 1 {
        return Err(Error::SIncomplete(rest.to_string()));
    }
    Ok(EcOracleQ { a, bad_set, disc })
}

impl EcOracleQ {
    pub fn coefficients(&self) -> [i128; 5] {
        self.a
    }

    pub fn discriminant(&self) -> i128 {
        self.disc
    }

    /// `a_p = p + 1 - #E(F_p)` for a prime of good reduction.
    pub fn trace_at(&self, p: u64) -> i128 {
        if p == 2 {
            return 3 - count_points_naive(&self.a, 2) as i128;
        }
        let [b2, b4, b6, _] = b_invariants(&self.a);
        let pm = p as i128;
        let (c2, c1, c0) = (b2.rem_euclid(pm) as u64, (2 * b4).rem_euclid(pm) as u64, b6.rem_euclid(pm) as u64);
        // chi(n) for all residues via a table of squares
        let mut chi = vec![-1i8; p as usize];
        chi[0] = 0;
        for y in 1..p {
            chi[arith::mul_mod(y, y, p) as usize] = 1;
        }
        let mut s: i64 = 0;
        for x in 0..p {
            // 4x^3 + b2 x^2 + 2 b4 x + b6
            let x2 = arith::mul_mod(x, x, p);
            let x3 = arith::mul_mod(x2, x, p);
            let v = (arith::mul_mod(4, x3, p) + arith::mul_mod(c2, x2, p) + arith::mul_mod(c1, x, p) + c0) % p;
            s += chi[v as usize] as i64;
        }
        -(s as i128)
    }
}

/// Projective point count by iterating all affine `(x, y)`.
pub fn count_points_naive(a: &[i128; 5], p: u64) -> u64 {
    let [a1, a2, a3, a4, a6] = a.map(|c| c.rem_euclid(p as i128) as u64);
    let m = |x: u64, y: u64| arith::mul_mod(x, y, p);
    let mut n = 1; // point at infinity
    for x in 0..p {
        let rhs = (m(m(x, x), x) + m(a2, m(x, x)) + m(a4, x) + a6) % p;
        for y in 0..p {
            let lhs = (m(y, y) + m(a1, m(x, y)) + m(a3, y)) % p;
            if lhs == rhs {
                n += 1;
            }
        }
    }
    n
}

impl Oracle for EcOracleQ {
    fn field(&self) -> BaseField {
        BaseField::Rationals
    }

    fn bad_set(&self) -> &[Prime] {
        &self.bad_set
    }

    fn query(&self, p: &Prime) -> Result<FrobeniusAnswer> {
        if p.field() != BaseField::Rationals {
            return Err(Error::UnknownPrime(p.to_string()));
        }
        if self.bad_set.contains(p) {
            return Ok(FrobeniusAnswer::Ramified);
        }
        let q = p.norm();
        Ok(FrobeniusAnswer::exact(self.trace_at(q), q as i128))
    }

    fn describe(&self) -> String {
        let [a1, a2, a3, a4, a6] = self.a;
        format!("elliptic curve [{a1},{a2},{a3},{a4},{a6}]")
    }
}

/// Reads `a1 a2 a3 a4 a6`; text after `#` on a line is ignored.
pub fn parse_curve(s: &str) -> Result<[i128; 5]> {
    let body: String = s.lines().map(|l| l.split('#').next().unwrap_or("")).collect::<Vec<_>>().join(" ");
    let toks: Vec<&str> = body.split(|c: char| c.is_whitespace() || c == ',' || c == '[' || c == ']').filter(|t| !t.is_empty()).collect();
    if toks.len() != 5 {
        return Err(Error::Parse { line: 0, msg: format!("expected 5 curve coefficients, got {}", toks.len()) });
    }
    let mut a = [0i128; 5];
    for (k, t) in toks.iter().enumerate() {
        a[k] = t.parse().map_err(|_| Error::Parse { line: 0, msg: format!("bad coefficient {t:?}") })?;
    }
    Ok(a)
}

// ---------------------------------------------------------------- synthetic

/// The reducible representation χ_{Δ1} ⊕ χ_{Δ2}, written in the basis given
/// by a unimodular conjugator.
#[derive(Debug, Clone)]
pub struct SyntheticOracle {
    basis: SelmerBasis,
    d1: Discriminant,
    d2: Discriminant,
    conj: [[i128; 2]; 2],
}

pub fn make_synthetic_oracle(
    basis: &SelmerBasis,
    d1: Discriminant,
    d2: Discriminant,
    conj: [[i128; 2]; 2],
) -> Result<SyntheticOracle> {
    let det = conj[0][0] * conj[1][1] - conj[0][1] * conj[1][0];
    if det.abs() != 1 {
        return Err(Error::Parse { line: 0, msg: format!("conjugator has determinant {det}") });
    }
    Ok(SyntheticOracle { basis: basis.clone(), d1, d2, conj })
}

impl SyntheticOracle {
    pub fn characters(&self) -> (&Discriminant, &Discriminant) {
        (&self.d1, &self.d2)
    }

    fn matrix(&self, e1: i128, e2: i128) -> [[i128; 2]; 2] {
        let u = self.conj;
        let det = u[0][0] * u[1][1] - u[0][1] * u[1][0];
        let inv = [[u[1][1] * det, -u[0][1] * det], [-u[1][0] * det, u[0][0] * det]];
        let d = [[e1, 0], [0, e2]];
        let mul = |x: [[i128; 2]; 2], y: [[i128; 2]; 2]| {
            let mut r = [[0i128; 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    r[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
                }
            }
            r
        };
        mul(mul(u, d), inv)
    }
}

impl Oracle for SyntheticOracle {
    fn field(&self) -> BaseField {
        self.basis.field()
    }

    fn bad_set(&self) -> &[Prime] {
        self.basis.bad_set()
    }

    fn query(&self, p: &Prime) -> Result<FrobeniusAnswer> {
        if self.basis.bad_set().contains(p) {
            return Ok(FrobeniusAnswer::Ramified);
        }
        let eps = |d: &Discriminant| -> Result<i128> {
            Ok(if symbol_of(self.basis.classes(), d.repr, p)? { -1 } else { 1 })
        };
        let m = self.matrix(eps(&self.d1)?, eps(&self.d2)?);
        let trace = m[0][0] + m[1][1];
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        Ok(FrobeniusAnswer::exact(trace, det))
    }

    fn describe(&self) -> String {
        format!("synthetic chi({}) + chi({})", self.d1, self.d2)
    }
}

// ---------------------------------------------------------------- wrappers

/// Reports every answer modulo `2^bits`.
#[derive(Debug, Clone)]
pub struct Truncated<O> {
    pub inner: O,
    pub bits: u32,
}

impl<O: Oracle> Oracle for Truncated<O> {
    fn field(&self) -> BaseField {
        self.inner.field()
    }

    fn bad_set(&self) -> &[Prime] {
        self.inner.bad_set()
    }

    fn query(&self, p: &Prime) -> Result<FrobeniusAnswer> {
        Ok(match self.inner.query(p)? {
            FrobeniusAnswer::Ramified => FrobeniusAnswer::Ramified,
            FrobeniusAnswer::Frobenius { trace, det } => {
                FrobeniusAnswer::Frobenius { trace: trace.truncate(self.bits), det: det.truncate(self.bits) }
            }
        })
    }

    fn describe(&self) -> String {
        format!("{} mod 2^{}", self.inner.describe(), self.bits)
    }

    fn note_usage(&self, p: &Prime, q: Quantity, bits: u32) {
        self.inner.note_usage(p, q, bits)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryRecord {
    pub prime: String,
    pub queries: u32,
    pub ramified: bool,
    /// Precision of the answer as supplied.
    pub provided: Option<Precision>,
    /// Largest number of bits used, per quantity.
    pub used: BTreeMap<Quantity, u32>,
}

/// Records every query and every precision demand made on the inner oracle.
pub struct QueryLog<O> {
    pub inner: O,
    log: Mutex<BTreeMap<Prime, QueryRecord>>,
}

impl<O: Oracle> QueryLog<O> {
    pub fn new(inner: O) -> Self {
        QueryLog { inner, log: Mutex::new(BTreeMap::new()) }
    }

    pub fn records(&self) -> Vec<QueryRecord> {
        self.log.lock().expect("query log poisoned").values().cloned().collect()
    }

    pub fn total_queries(&self) -> u32 {
        self.log.lock().expect("query log poisoned").values().map(|r| r.queries).sum()
    }

    fn entry<R>(&self, p: &Prime, f: impl FnOnce(&mut QueryRecord) -> R) -> R {
        let mut log = self.log.lock().expect("query log poisoned");
        let rec = log.entry(*p).or_insert_with(|| QueryRecord {
            prime: p.to_string(),
            queries: 0,
            ramified: false,
            provided: None,
            used: BTreeMap::new(),
        });
        f(rec)
    }
}

impl<O: Oracle> Oracle for QueryLog<O> {
    fn field(&self) -> BaseField {
        self.inner.field()
    }

    fn bad_set(&self) -> &[Prime] {
        self.inner.bad_set()
    }

    fn query(&self, p: &Prime) -> Result<FrobeniusAnswer> {
        let a = self.inner.query(p)?;
        self.entry(p, |r| {
            r.queries += 1;
            match a {
                FrobeniusAnswer::Ramified => r.ramified = true,
                FrobeniusAnswer::Frobenius { trace, det } => {
                    r.provided = Some(trace.precision.min(det.precision))
                }
            }
        });
        Ok(a)
    }

    fn describe(&self) -> String {
        self.inner.describe()
    }

    fn note_usage(&self, p: &Prime, q: Quantity, bits: u32) {
        self.entry(p, |r| {
            let e = r.used.entry(q).or_insert(0);
            *e = (*e).max(bits);
        });
        self.inner.note_usage(p, q, bits);
    }
}

/// Answers from a closure; handy for tests and ad-hoc oracles.
pub struct FnOracle<F> {
    field: BaseField,
    bad_set: Vec<Prime>,
    f: F,
}

impl<F> FnOracle<F>
where
    F: Fn(&Prime) -> Result<FrobeniusAnswer> + Send + Sync,
{
    pub fn new(field: BaseField, bad_set: &[Prime], f: F) -> Self {
        FnOracle { field, bad_set: sorted(bad_set), f }
    }
}

impl<F> Oracle for FnOracle<F>
where
    F: Fn(&Prime) -> Result<FrobeniusAnswer> + Send + Sync,
{
    fn field(&self) -> BaseField {
        self.field
    }

    fn bad_set(&self) -> &[Prime] {
        &self.bad_set
    }

    fn query(&self, p: &Prime) -> Result<FrobeniusAnswer> {
        if self.bad_set.contains(p) {
            return Ok(FrobeniusAnswer::Ramified);
        }
        (self.f)(p)
    }

    fn describe(&self) -> String {
        "closure".into()
    }
}
