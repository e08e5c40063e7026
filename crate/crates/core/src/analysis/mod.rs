//! Decision procedures driven by oracle queries on the test sets: residual
//! image, quadratic characters, small/large classes and the structure of ρ
//! one level above a trivial one.

mod form;
mod report;

use serde::Serialize;

use crate::cubic::{CubicFamily, CubicPoly, GaloisType};
use crate::error::{Error, Result};
use crate::f2::{BitMatrix, BitVector};
use crate::field::{canonical_primes, Prime};
use crate::oracle::{f_at_one, Adic, Oracle, Quantity};
use crate::selmer::{Discriminant, SelmerBasis};
use crate::sets::{SearchConfig, T0Set, T1Set, T2Set};

pub use form::{pair_from_form, Form};
pub use report::{isogeny_report, IsogenyReport, ReportOptions, Tree, TreeVertex, Width};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResidualVerdict {
    Reducible,
    Irreducible { cubic: CubicPoly, group: GaloisType },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SmallOrLarge {
    Large,
    /// The two nontrivial discriminants, sorted by exponent vector.
    Small(Discriminant, Discriminant),
}

/// How the first coordinate was resolved after rotating `Δ_det` to the front.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FirstCoordinate {
    /// `t_2k(p_1) = 1`, so `x_1 = y_1 = z_1 = 1`.
    AllOnes,
    /// `x', y', z'` nonzero: the q vector fixes `(x_1, y_1)`.
    Independent,
    /// `x' = y' = z' = 0`.
    AllZero,
    /// `y' = 0`, `x' = z' ≠ 0`.
    OneZero,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Branch {
    pub det_trivial: bool,
    /// Rank of W (or W' after rotation): 0 or 2.
    pub w_rank: usize,
    /// Uses of `t_{2k+1}`, `(F+2^{2k})/2^{2k+1}` and `(F-2^{2k})/2^{2k+1}`.
    pub odd_tests: [u32; 3],
    /// Primes queried beyond T2 to complete the W = 0 sub-procedure.
    pub extra_primes: Vec<String>,
    pub first_coordinate: Option<FirstCoordinate>,
}

/// Exponent vectors, over the T1 dual basis, of the characters of
/// `μ = (ρ - I)/2^k mod 2`. After normalization `x ≤ y ≤ z` and `u ≤ v`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CharacterVector {
    pub level: u32,
    pub x: BitVector,
    pub y: BitVector,
    pub z: BitVector,
    pub u: BitVector,
    pub v: BitVector,
    pub det: BitVector,
    pub image_order_log2: usize,
    pub branch: Branch,
}

impl CharacterVector {
    /// ρ is trivial mod 2^{k+1} (up to isogeny).
    pub fn is_trivial(&self) -> bool {
        [&self.x, &self.y, &self.z, &self.u, &self.v].iter().all(|w| w.is_zero())
    }

    /// `{Δ_b, Δ_c, Δ_abcd}` as discriminants over `basis`.
    pub fn leaves(&self, basis: &SelmerBasis) -> [Discriminant; 3] {
        [basis.discriminant(&self.x), basis.discriminant(&self.y), basis.discriminant(&self.z)]
    }

    pub fn diagonal(&self, basis: &SelmerBasis) -> [Discriminant; 2] {
        [basis.discriminant(&self.u), basis.discriminant(&self.v)]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum TrivialLevel {
    /// Trivial mod 2^k but not mod 2^{k+1}, with the structure there
    /// (absent for a small class, where k = 0).
    Exact { k: u32, structure: Option<CharacterVector> },
    /// Trivial mod 2^k for the probed depth.
    AtLeast(u32),
}

pub const DEFAULT_K_MAX: u32 = 20;

// ---------------------------------------------------------------- probing

struct Probe<'a> {
    o: &'a dyn Oracle,
    op: String,
}

impl<'a> Probe<'a> {
    fn new(o: &'a dyn Oracle, op: impl Into<String>) -> Self {
        Probe { o, op: op.into() }
    }

    fn answer(&self, p: &Prime) -> Result<(Adic, Adic)> {
        self.o.query(p)?.parts(p)
    }

    fn need(&self, p: &Prime, q: Quantity, a: Adic, bits: u32) -> Result<()> {
        if !a.precision.covers(bits) {
            return Err(Error::PrecisionInsufficient {
                op: self.op.clone(),
                prime: p.to_string(),
                quantity: q.to_string(),
                needed: bits,
                available: a.precision.bits(),
            });
        }
        self.o.note_usage(p, q, bits);
        Ok(())
    }
}

fn low(a: Adic, n: u32) -> i128 {
    a.value.rem_euclid(1i128 << n)
}

fn bit(a: Adic, k: u32) -> bool {
    low(a, k + 1) >> k & 1 == 1
}

fn vec_of(bits: impl IntoIterator<Item = bool>) -> BitVector {
    BitVector::from_bits(&bits.into_iter().collect::<Vec<_>>())
}

// ---------------------------------------------------------------- residual

pub fn residual_image(o: &dyn Oracle, fam: &CubicFamily, t0: &T0Set) -> Result<ResidualVerdict> {
    let probe = Probe::new(o, "residual_image");
    let mut parity = Vec::with_capacity(t0.primes.len());
    for p in &t0.primes {
        let (trace, _) = probe.answer(p)?;
        probe.need(p, Quantity::Trace, trace, 1)?;
        parity.push(bit(trace, 0));
    }
    let parity = BitVector::from_bits(&parity);
    if parity.is_zero() {
        return Ok(ResidualVerdict::Reducible);
    }
    for (poly, sig) in &t0.signatures {
        if *sig == parity {
            let group = match fam.members.iter().find(|m| m.poly == *poly) {
                Some(m) => m.galois,
                None => poly.galois_type()?,
            };
            return Ok(ResidualVerdict::Irreducible { cubic: *poly, group });
        }
    }
    Err(Error::NoSignatureMatch(parity.to_string()))
}

/// The class `∏ Δ̃_j^{e_j}` whose symbols at the T1 primes are `bits`.
pub fn identify_quadratic(bits: &BitVector, t1: &T1Set) -> Discriminant {
    t1.dual_basis.discriminant(bits)
}

/// Compares `det ρ(Frob_p)` with `candidate(p)` on T1 modulo `2^bits`
/// (`None` for exact comparison).
pub fn det_character_equal(
    o: &dyn Oracle,
    candidate: impl Fn(&Prime) -> i128,
    t1: &T1Set,
    bits: Option<u32>,
) -> Result<bool> {
    let probe = Probe::new(o, "det_character_equal");
    let mut equal = true;
    for p in &t1.primes {
        let (_, det) = probe.answer(p)?;
        let c = candidate(p);
        match bits {
            None => {
                if !det.precision.is_exact() {
                    return Err(Error::ExactnessRequired { op: probe.op.clone(), prime: p.to_string() });
                }
                equal &= det.value == c;
            }
            Some(n) => {
                probe.need(p, Quantity::Det, det, n)?;
                equal &= det.congruent(c, n);
            }
        }
    }
    Ok(equal)
}

/// `t_k(p) = F_p(1)/2^k mod 2`.
pub fn test_fn(o: &dyn Oracle, p: &Prime, k: u32) -> Result<bool> {
    let probe = Probe::new(o, format!("t_{k}"));
    let a = o.query(p)?;
    a.parts(p)?;
    let f = f_at_one(&a)?;
    probe.need(p, Quantity::FAtOne, f, k + 1)?;
    let v = low(f, k + 1);
    if v != 0 && v.trailing_zeros() < k {
        return Err(Error::ValuationTooLow { prime: p.to_string(), valuation: v.trailing_zeros(), k });
    }
    Ok(bit(f, k))
}

struct Sample {
    prime: Prime,
    l: BitVector,
    trace: Adic,
    det: Adic,
    f: Adic,
}

fn collect(probe: &Probe<'_>, t1: &T1Set, primes: &[Prime], bits: u32) -> Result<Vec<Sample>> {
    let mut out = Vec::with_capacity(primes.len());
    for p in primes {
        let (trace, det) = probe.answer(p)?;
        let f = Adic::exact(1) - trace + det;
        probe.need(p, Quantity::FAtOne, f, bits)?;
        out.push(Sample { prime: *p, l: t1.dual_basis.symbol_vector(p)?, trace, det, f });
    }
    Ok(out)
}

pub fn small_or_large(o: &dyn Oracle, t2: &T2Set, t1: &T1Set) -> Result<SmallOrLarge> {
    let probe = Probe::new(o, "small_or_large");
    let samples = collect(&probe, t1, &t2.primes, 2)?;
    let mut points = Vec::with_capacity(samples.len());
    for s in &samples {
        if bit(s.f, 0) {
            return Err(Error::ValuationTooLow { prime: s.prime.to_string(), valuation: 0, k: 1 });
        }
        points.push((s.l.clone(), bit(s.f, 1)));
    }
    let form = Form::fit(t1.dual_basis.rank(), &points)?;
    Ok(match pair_from_form(&form, &points)? {
        None => SmallOrLarge::Large,
        Some((x, y)) => {
            let (a, b) = if x <= y { (x, y) } else { (y, x) };
            SmallOrLarge::Small(t1.dual_basis.discriminant(&a), t1.dual_basis.discriminant(&b))
        }
    })
}

// ---------------------------------------------------------------- level k

/// Recovers ρ mod 2^{k+1} assuming ρ ≡ I mod 2^k up to isogeny.
pub fn mod_next_level(o: &dyn Oracle, k: u32, t1: &T1Set, t2: &T2Set) -> Result<CharacterVector> {
    if k == 0 {
        return Err(Error::InconsistentData("level must be positive".into()));
    }
    if 2 * k + 2 > 120 {
        return Err(Error::InconsistentData(format!("level {k} exceeds the supported depth")));
    }
    let probe = Probe::new(o, format!("mod_next_level(k={k})"));
    let r = t1.dual_basis.rank();
    let not_trivial = |reason: String| Error::NotTrivialModLevel { level: k, reason };

    let mut delta = BitVector::zeros(r);
    for (i, p) in t1.primes.iter().enumerate() {
        let (_, det) = probe.answer(p)?;
        probe.need(p, Quantity::Det, det, k + 1)?;
        if !det.congruent(1, k) {
            return Err(not_trivial(format!("det at {p} is {det}, not 1 mod 2^{k}")));
        }
        delta.set(i, bit(det, k));
    }

    let bits = 2 * k + 2;
    let samples = collect(&probe, t1, &t2.primes, bits)?;
    for s in &samples {
        probe.need(&s.prime, Quantity::Trace, s.trace, bits)?;
        check_trivial_at(s, k).map_err(not_trivial)?;
        if s.l.dot(&delta) != bit(s.det, k) {
            return Err(Error::InconsistentData(format!(
                "det at {} disagrees with the determinant character read off T1",
                s.prime
            )));
        }
    }
    let (p, off) = basis_change(&delta);
    let to_new = p.transpose();
    let points = samples
        .iter()
        .map(|s| Ok((to_new.mul_vec(&s.l)?, bit(s.f, 2 * k))))
        .collect::<Result<Vec<_>>>()?;
    // Q in the rotated coordinates, where Δ_det is the first basis element
    let q = Form::fit(r, &points)?;
    let qn = |l: &BitVector| q.eval(l);
    let n = r - off;
    let embed = |ls: &BitVector| BitVector::zeros(off).concat(ls);

    let d = vec_of((0..n).map(|i| qn(&embed(&BitVector::unit(n, i)))));
    let mut w = BitMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let eij = BitVector::from_indices(n, &[i, j]);
                w.set(i, j, qn(&embed(&eij)) ^ d.get(i) ^ d.get(j));
            }
        }
    }
    let w_rank = w.rank();
    let mut branch =
        Branch { det_trivial: off == 0, w_rank, odd_tests: [0; 3], extra_primes: Vec::new(), first_coordinate: None };

    let (xs, ys, zs, us) = match w_rank {
        2 => {
            let (x, y) = two_distinct_rows(&w)
                .ok_or_else(|| Error::InconsistentData("W has rank 2 but fewer than two distinct rows".into()))?;
            let u = d.xor(&x.and(&y));
            let z = x.xor(&y);
            (x, y, z, u)
        }
        0 => {
            let u = d.clone();
            let mut pts = Vec::new();
            for s in &samples {
                if s.l.dot(&delta) {
                    continue;
                }
                pts.push(odd_test(s, k, &to_new, off, &u, &mut branch)?);
            }
            let needed = n * (n + 1) / 2;
            let mut rows = BitMatrix::new(needed);
            for (ls, _) in &pts {
                rows.push_row(crate::sets::psi_row(ls))?;
            }
            if rows.rank() < needed {
                let extra = extend_samples(&probe, t1, t2, &delta, k, (&to_new, off), &mut rows, needed)?;
                for s in &extra {
                    check_trivial_at(s, k).map_err(not_trivial)?;
                    pts.push(odd_test(s, k, &to_new, off, &u, &mut branch)?);
                    branch.extra_primes.push(s.prime.to_string());
                }
            }
            let sform = Form::fit(n, &pts)?;
            let x = match pair_from_form(&sform, &pts)? {
                None => BitVector::zeros(n),
                Some((a, b)) => a.min(b),
            };
            (x.clone(), BitVector::zeros(n), x, u)
        }
        other => return Err(Error::InconsistentData(format!("W has rank {other}; expected 0 or 2"))),
    };

    let (xn, yn, zn, un, vn) = if off == 0 {
        (xs, ys, zs, us.clone(), us)
    } else {
        let one = BitVector::from_bits(&[true]);
        let zero = BitVector::zeros(1);
        let (x1, y1, z1) = if qn(&BitVector::unit(r, 0)) {
            branch.first_coordinate = Some(FirstCoordinate::AllOnes);
            (true, true, true)
        } else {
            let qv = vec_of((0..n).map(|i| {
                let ei = embed(&BitVector::unit(n, i));
                let e1i = ei.xor(&BitVector::unit(r, 0));
                qn(&ei) ^ qn(&e1i) ^ us.get(i)
            }));
            if !xs.is_zero() && !ys.is_zero() && !zs.is_zero() {
                branch.first_coordinate = Some(FirstCoordinate::Independent);
                let fits: Vec<(bool, bool)> = [(false, false), (true, false), (false, true)]
                    .into_iter()
                    .filter(|&(x1, y1)| {
                        let mut t = BitVector::zeros(n);
                        if y1 {
                            t.xor_assign(&xs);
                        }
                        if x1 {
                            t.xor_assign(&ys);
                        }
                        t == qv
                    })
                    .collect();
                match fits.as_slice() {
                    [(x1, y1)] => (*x1, *y1, !(*x1 ^ *y1)),
                    _ => return Err(Error::InconsistentData(format!("q = {qv} fits no first coordinate"))),
                }
            } else if xs.is_zero() && ys.is_zero() && zs.is_zero() {
                branch.first_coordinate = Some(FirstCoordinate::AllZero);
                (false, false, true)
            } else {
                branch.first_coordinate = Some(FirstCoordinate::OneZero);
                if qv.is_zero() {
                    (false, false, true)
                } else if qv == xs {
                    (false, true, false)
                } else {
                    return Err(Error::InconsistentData(format!("q = {qv} is neither 0 nor x' = {xs}")));
                }
            }
        };
        let pre = |b: bool, w: &BitVector| if b { one.concat(w) } else { zero.concat(w) };
        (pre(x1, &xs), pre(y1, &ys), pre(z1, &zs), one.concat(&us), zero.concat(&us))
    };
    let back = |w: BitVector| p.mul_vec(&w).expect("dims");
    let (x, y, z, u, v) = (back(xn), back(yn), back(zn), back(un), back(vn));

    for s in &samples {
        let model = (u.dot(&s.l) & v.dot(&s.l)) ^ (x.dot(&s.l) & y.dot(&s.l));
        if model != bit(s.f, 2 * k) {
            return Err(Error::InconsistentData(format!("recovered characters do not reproduce t_{} at {}", 2 * k, s.prime)));
        }
    }
    if x.xor(&y).xor(&z) != delta || u.xor(&v) != delta {
        return Err(Error::InconsistentData("x + y + z and u + v differ from the determinant character".into()));
    }

    let mut leaves = [x, y, z];
    leaves.sort();
    let mut diag = [u, v];
    diag.sort();
    let span = BitMatrix::from_rows(r, vec![
        leaves[0].clone(),
        leaves[1].clone(),
        leaves[2].clone(),
        diag[0].clone(),
        diag[1].clone(),
    ])?;
    let [x, y, z] = leaves;
    let [u, v] = diag;
    Ok(CharacterVector { level: k, x, y, z, u, v, det: delta, image_order_log2: span.rank(), branch })
}

fn check_trivial_at(s: &Sample, k: u32) -> std::result::Result<(), String> {
    if !s.f.congruent(0, 2 * k) {
        return Err(format!("F(1) = {} at {} is not 0 mod 2^{}", s.f, s.prime, 2 * k));
    }
    if !s.trace.congruent(2, k) {
        return Err(format!("trace {} at {} is not 2 mod 2^{k}", s.trace, s.prime));
    }
    Ok(())
}

fn two_distinct_rows(w: &BitMatrix) -> Option<(BitVector, BitVector)> {
    let mut rows = w.rows().iter().filter(|r| !r.is_zero());
    let x = rows.next()?.clone();
    let y = rows.find(|r| **r != x)?.clone();
    Some((x, y))
}

/// The value `b·c_1 mod 2` at a prime with `ℓ·δ = 0`, from `F_p(1)` modulo
/// `2^{2k+2}` and `a + d` modulo 4.
fn odd_test(
    s: &Sample,
    k: u32,
    to_new: &BitMatrix,
    off: usize,
    u: &BitVector,
    branch: &mut Branch,
) -> Result<(BitVector, bool)> {
    let ln = to_new.mul_vec(&s.l)?;
    let ls = ln.slice(off, ln.len());
    let parity = ls.dot(u);
    // a + d = (trace - 2)/2^k, known mod 2^{k+2}
    let apd = ((s.trace.value - 2).rem_euclid(1i128 << (2 * k + 2)) >> k) & 3;
    if apd & 1 == 1 {
        return Err(Error::InconsistentData(format!("a + d is odd at {} although det ≡ 1 mod 2^{}", s.prime, k + 1)));
    }
    let m = 1i128 << (2 * k + 2);
    let h = 1i128 << (2 * k);
    let f = s.f.value;
    let (val, which) = match (parity, apd) {
        (false, _) => (f, 0),
        (true, 0) => (f + h, 1),
        (true, _) => (f - h, 2),
    };
    let val = val.rem_euclid(m);
    if val & ((1 << (2 * k + 1)) - 1) != 0 {
        return Err(Error::InconsistentData(format!("F(1) at {} does not match the parity of a and d", s.prime)));
    }
    branch.odd_tests[which] += 1;
    Ok((ls, val >> (2 * k + 1) & 1 == 1))
}

/// Searches past T2 for primes with trivial determinant symbol until their
/// psi rows, on the hyperplane `ℓ·δ = 0`, reach full rank.
#[allow(clippy::too_many_arguments)]
fn extend_samples(
    probe: &Probe<'_>,
    t1: &T1Set,
    t2: &T2Set,
    delta: &BitVector,
    k: u32,
    (to_new, off): (&BitMatrix, usize),
    rows: &mut BitMatrix,
    needed: usize,
) -> Result<Vec<Sample>> {
    let basis = &t1.dual_basis;
    let cfg = SearchConfig::default();
    let mut extra = Vec::new();
    for p in canonical_primes(basis.field(), basis.bad_set()) {
        if rows.rank() >= needed {
            break;
        }
        if p.norm() > cfg.norm_cap {
            return Err(Error::InsufficientTestSet(format!(
                "no primes with trivial determinant symbol complete the level-{k} test below norm {}",
                cfg.norm_cap
            )));
        }
        if t2.primes.contains(&p) || t1.primes.contains(&p) {
            continue;
        }
        let l = basis.symbol_vector(&p)?;
        if l.dot(delta) {
            continue;
        }
        let ln = to_new.mul_vec(&l)?;
        let row = crate::sets::psi_row(&ln.slice(off, ln.len()));
        if rows.in_rowspace(&row)? {
            continue;
        }
        rows.push_row(row)?;
        let mut s = collect(probe, t1, &[p], 2 * k + 2)?;
        probe.need(&p, Quantity::Trace, s[0].trace, 2 * k + 2)?;
        extra.push(s.remove(0));
    }
    Ok(extra)
}

/// Basis change whose first column is δ (the other columns are the unit
/// vectors skipping the first index where δ is 1), and the number of leading
/// coordinates it fixes; the identity with 0 when δ = 0.
fn basis_change(delta: &BitVector) -> (BitMatrix, usize) {
    let r = delta.len();
    match delta.first_one() {
        None => (BitMatrix::identity(r), 0),
        Some(m) => {
            let mut p = BitMatrix::zeros(r, r);
            for i in 0..r {
                p.set(i, 0, delta.get(i));
            }
            for (col, j) in (0..r).filter(|&j| j != m).enumerate() {
                p.set(j, col + 1, true);
            }
            (p, 1)
        }
    }
}

/// Climbs levels until the structure one step up is nontrivial.
pub fn max_trivial_level(o: &dyn Oracle, t1: &T1Set, t2: &T2Set, k_max: u32) -> Result<TrivialLevel> {
    if let SmallOrLarge::Small(..) = small_or_large(o, t2, t1)? {
        return Ok(TrivialLevel::Exact { k: 0, structure: None });
    }
    climb(o, t1, t2, k_max)
}

/// `max_trivial_level` for a class already known to be large.
fn climb(o: &dyn Oracle, t1: &T1Set, t2: &T2Set, k_max: u32) -> Result<TrivialLevel> {
    for k in 1..k_max {
        let s = mod_next_level(o, k, t1, t2)?;
        if !s.is_trivial() {
            return Ok(TrivialLevel::Exact { k, structure: Some(s) });
        }
    }
    Ok(TrivialLevel::AtLeast(k_max.max(1)))
}

/// det = 1 on T1 and trace = 2 on T2, exactly.
pub fn trivial_semisimplification(o: &dyn Oracle, t1: &T1Set, t2: &T2Set) -> Result<bool> {
    let op = "trivial_semisimplification";
    let probe = Probe::new(o, op);
    let exact = |p: &Prime, a: Adic| {
        if a.precision.is_exact() {
            Ok(())
        } else {
            Err(Error::ExactnessRequired { op: op.into(), prime: p.to_string() })
        }
    };
    let mut ok = true;
    for p in &t1.primes {
        let (_, det) = probe.answer(p)?;
        exact(p, det)?;
        ok &= det.value == 1;
    }
    for p in &t2.primes {
        let (trace, _) = probe.answer(p)?;
        exact(p, trace)?;
        ok &= trace.value == 2;
    }
    Ok(ok)
}
