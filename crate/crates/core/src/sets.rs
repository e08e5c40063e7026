//! The prime sets T0 (distinguishing), T1 (linearly independent) and T2
//! (quadratically independent) attached to (K, S).

use crate::cubic::{CubicFamily, CubicPoly};
use crate::error::{Error, Result};
use crate::f2::{BitMatrix, BitVector};
use crate::field::{canonical_primes, Prime, PrimeStream};
use crate::selmer::SelmerBasis;

pub const DEFAULT_NORM_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub norm_cap: u64,
    /// Over Q(i), skip primes of degree 2.
    pub degree_one_only: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { norm_cap: DEFAULT_NORM_CAP, degree_one_only: false }
    }
}

impl SearchConfig {
    fn stream(&self, basis_excluded: &[Prime], field: crate::field::BaseField) -> Capped {
        Capped { inner: canonical_primes(field, basis_excluded).degree_one_only(self.degree_one_only), cap: self.norm_cap }
    }
}

struct Capped {
    inner: PrimeStream,
    cap: u64,
}

impl Capped {
    fn next_or(&mut self, what: &str) -> Result<Prime> {
        let p = self.inner.next().expect("infinite stream");
        if p.norm() > self.cap {
            return Err(Error::SearchExhausted { what: what.to_string(), cap: self.cap });
        }
        Ok(p)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct T1Set {
    pub primes: Vec<Prime>,
    /// Basis Δ̃ with `[Δ̃_j | p_i] = δ_ij`.
    pub dual_basis: SelmerBasis,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct T0Set {
    pub primes: Vec<Prime>,
    /// λ-vector of each family member over `primes`.
    pub signatures: Vec<(CubicPoly, BitVector)>,
}

impl T0Set {
    /// Wraps a given list of primes, computing the signatures of `fam`.
    pub fn from_primes(fam: &CubicFamily, primes: Vec<Prime>) -> Result<T0Set> {
        let sigs = signatures(fam, &primes)?;
        Ok(T0Set { primes, signatures: fam.polys().into_iter().zip(sigs).collect() })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct T2Set {
    pub primes: Vec<Prime>,
    /// `I(p)` per prime (0-based), present for special sets.
    pub indexing: Option<Vec<Vec<usize>>>,
}

impl T2Set {
    pub fn is_special(&self) -> bool {
        self.indexing.is_some()
    }
}

pub fn sym2_dim(r: usize) -> usize {
    r * (r + 1) / 2
}

/// Position of the pair `{i, j}` (i < j) after the `r` singletons.
pub fn pair_position(i: usize, j: usize, r: usize) -> usize {
    debug_assert!(i < j && j < r);
    r + i * (2 * r - i - 1) / 2 + (j - i - 1)
}

/// Row `v(p)`: singletons `ℓ_i`, then pairs `ℓ_i ℓ_j` in lexicographic order.
pub fn psi_row(l: &BitVector) -> BitVector {
    let r = l.len();
    let mut v = BitVector::zeros(sym2_dim(r));
    let ones = l.ones();
    for &i in &ones {
        v.set(i, true);
    }
    for (a, &i) in ones.iter().enumerate() {
        for &j in &ones[a + 1..] {
            v.set(pair_position(i, j, r), true);
        }
    }
    v
}

/// Index sets in special order: `{0}, …, {r-1}, {0,1}, {0,2}, …`.
pub fn special_targets(r: usize) -> Vec<Vec<usize>> {
    let mut t: Vec<Vec<usize>> = (0..r).map(|i| vec![i]).collect();
    for i in 0..r {
        for j in i + 1..r {
            t.push(vec![i, j]);
        }
    }
    t
}

pub fn find_t1(basis: &SelmerBasis, cfg: &SearchConfig) -> Result<T1Set> {
    let r = basis.rank();
    let mut a = BitMatrix::new(r);
    let mut primes = Vec::with_capacity(r);
    let mut stream = cfg.stream(basis.bad_set(), basis.field());
    while a.nrows() < r {
        let p = stream.next_or("T1")?;
        let v = basis.symbol_vector(&p)?;
        if !a.in_rowspace(&v)? {
            a.push_row(v)?;
            primes.push(p);
        }
    }
    let b = if r == 0 { BitMatrix::zeros(0, 0) } else { a.invert()? };
    Ok(T1Set { primes, dual_basis: basis.transformed(&b)? })
}

fn signatures(fam: &CubicFamily, primes: &[Prime]) -> Result<Vec<BitVector>> {
    fam.members
        .iter()
        .map(|m| {
            let bits: Result<Vec<bool>> = primes.iter().map(|p| m.poly.lambda(p)).collect();
            Ok(BitVector::from_bits(&bits?))
        })
        .collect()
}

/// Pairwise-separation loop seeded with the reducible signature of `x^3`.
pub fn find_t0(fam: &CubicFamily, cfg: &SearchConfig) -> Result<T0Set> {
    let n = fam.len();
    let mut primes: Vec<Prime> = Vec::new();
    // index 0 is x^3, whose λ-vector is identically 0
    let name = |i: usize| if i == 0 { "x^3".to_string() } else { fam.members[i - 1].poly.to_string() };
    loop {
        let mut sigs = vec![BitVector::zeros(primes.len())];
        sigs.extend(signatures(fam, &primes)?);
        let collision = (0..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).find(|&(i, j)| sigs[i] == sigs[j]);
        let Some((i, j)) = collision else { break };
        let mut stream = cfg.stream(&fam.bad_set, fam.field);
        let what = format!("a prime separating {} and {}", name(i), name(j));
        loop {
            let p = stream.next_or(&what)?;
            if primes.contains(&p) {
                continue;
            }
            let li = if i == 0 { false } else { fam.members[i - 1].poly.lambda(&p)? };
            let lj = fam.members[j - 1].poly.lambda(&p)?;
            if li != lj {
                primes.push(p);
                break;
            }
        }
    }
    T0Set::from_primes(fam, primes)
}

pub fn find_t2(basis: &SelmerBasis, cfg: &SearchConfig) -> Result<T2Set> {
    let d = sym2_dim(basis.rank());
    let mut a = BitMatrix::new(d);
    let mut primes = Vec::with_capacity(d);
    let mut stream = cfg.stream(basis.bad_set(), basis.field());
    while a.nrows() < d {
        let p = stream.next_or("T2")?;
        let v = psi_row(&basis.symbol_vector(&p)?);
        if !a.in_rowspace(&v)? {
            a.push_row(v)?;
            primes.push(p);
        }
    }
    Ok(T2Set { primes, indexing: None })
}

pub fn find_t2_special(basis: &SelmerBasis, cfg: &SearchConfig) -> Result<T2Set> {
    let targets = special_targets(basis.rank());
    let mut slots: Vec<Option<Prime>> = vec![None; targets.len()];
    let mut open = targets.len();
    let mut stream = cfg.stream(basis.bad_set(), basis.field());
    while open > 0 {
        let p = stream.next_or("special T2")?;
        let i = basis.i_set(&p)?;
        if let Some(k) = targets.iter().position(|t| *t == i) {
            if slots[k].is_none() {
                slots[k] = Some(p);
                open -= 1;
            }
        }
    }
    Ok(T2Set { primes: slots.into_iter().map(|p| p.expect("filled")).collect(), indexing: Some(targets) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetKind {
    T0,
    T1,
    T2,
    T2Special,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub ok: bool,
    pub diagnostics: Vec<String>,
}

impl Verdict {
    fn from(diagnostics: Vec<String>) -> Self {
        Verdict { ok: diagnostics.is_empty(), diagnostics }
    }
}

/// What a candidate set is checked against.
pub struct VerifyContext<'a> {
    pub basis: &'a SelmerBasis,
    pub family: Option<&'a CubicFamily>,
}

/// A candidate for `verify_set`.
pub enum Candidate<'a> {
    T0(&'a [Prime]),
    T1 { primes: &'a [Prime], dual_basis: Option<&'a SelmerBasis> },
    T2(&'a T2Set),
}

pub fn verify_set(kind: SetKind, cand: Candidate<'_>, ctx: &VerifyContext<'_>) -> Verdict {
    let mut diag = Vec::new();
    let basis = ctx.basis;
    let r = basis.rank();
    let excluded_s = |primes: &[Prime], diag: &mut Vec<String>| {
        for p in primes {
            if basis.bad_set().contains(p) {
                diag.push(format!("{p} lies in S"));
            }
        }
    };
    let distinct = |primes: &[Prime], diag: &mut Vec<String>| {
        for (k, p) in primes.iter().enumerate() {
            if primes[..k].contains(p) {
                diag.push(format!("{p} listed twice"));
            }
        }
    };
    match (kind, cand) {
        (SetKind::T0, Candidate::T0(primes)) => {
            distinct(primes, &mut diag);
            let Some(fam) = ctx.family else {
                return Verdict::from(vec!["no cubic family supplied".into()]);
            };
            for p in primes {
                if fam.bad_set.contains(p) {
                    diag.push(format!("{p} lies in S(F)"));
                }
            }
            if diag.is_empty() {
                match signatures(fam, primes) {
                    Err(e) => diag.push(e.to_string()),
                    Ok(sigs) => {
                        for (i, s) in sigs.iter().enumerate() {
                            let f = &fam.members[i].poly;
                            if s.is_zero() {
                                diag.push(format!("λ-vector of {f} is zero"));
                            }
                            for (j, t) in sigs[..i].iter().enumerate() {
                                if s == t {
                                    diag.push(format!("{} and {f} share the λ-vector {s}", fam.members[j].poly));
                                }
                            }
                        }
                    }
                }
            }
        }
        (SetKind::T1, Candidate::T1 { primes, dual_basis }) => {
            distinct(primes, &mut diag);
            excluded_s(primes, &mut diag);
            if primes.len() != r {
                diag.push(format!("expected {r} primes, got {}", primes.len()));
            }
            if diag.is_empty() {
                let rows: Result<Vec<BitVector>> = primes.iter().map(|p| basis.symbol_vector(p)).collect();
                match rows.and_then(|rows| BitMatrix::from_rows(r, rows)) {
                    Err(e) => diag.push(e.to_string()),
                    Ok(a) if a.rank() < r => diag.push(format!("symbol matrix has rank {} < {r}", a.rank())),
                    Ok(_) => {}
                }
            }
            if let (true, Some(dual)) = (diag.is_empty(), dual_basis) {
                for (i, p) in primes.iter().enumerate() {
                    match dual.symbol_vector(p) {
                        Err(e) => diag.push(e.to_string()),
                        Ok(v) => {
                            if v != BitVector::unit(r, i) {
                                diag.push(format!("dual basis symbols at {p} are {v}, expected e_{}", i + 1));
                            }
                        }
                    }
                }
            }
        }
        (SetKind::T2 | SetKind::T2Special, Candidate::T2(set)) => {
            let primes = &set.primes;
            distinct(primes, &mut diag);
            excluded_s(primes, &mut diag);
            let d = sym2_dim(r);
            if primes.len() != d {
                diag.push(format!("expected {d} primes, got {}", primes.len()));
            }
            let mut isets = Vec::new();
            if diag.is_empty() {
                for p in primes {
                    match basis.i_set(p) {
                        Ok(i) => isets.push(i),
                        Err(e) => diag.push(e.to_string()),
                    }
                }
            }
            if diag.is_empty() {
                let rows = isets.iter().map(|i| psi_row(&BitVector::from_indices(r, i))).collect();
                let m = BitMatrix::from_rows(d, rows).expect("psi rows");
                if m.rank() < d {
                    diag.push(format!("v(p) rows have rank {} < {d}", m.rank()));
                }
            }
            if kind == SetKind::T2Special && diag.is_empty() {
                match &set.indexing {
                    None => diag.push("special set carries no I(p) indexing".into()),
                    Some(claimed) => {
                        for ((p, c), actual) in primes.iter().zip(claimed).zip(&isets) {
                            let mut c = c.clone();
                            c.sort();
                            if c != *actual {
                                diag.push(format!("I({p}) is {} but {} was claimed", show_iset(actual), show_iset(&c)));
                            }
                        }
                        let mut targets = special_targets(r);
                        for i in &isets {
                            if let Some(k) = targets.iter().position(|t| t == i) {
                                targets.remove(k);
                            } else {
                                diag.push(format!("I-set {} is not a singleton or pair, or repeats", show_iset(i)));
                            }
                        }
                    }
                }
            }
        }
        _ => diag.push("candidate does not match the requested kind".into()),
    }
    Verdict::from(diag)
}

/// 1-based display of a 0-based index set.
pub fn show_iset(i: &[usize]) -> String {
    let parts: Vec<String> = i.iter().map(|k| (k + 1).to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubic::load_family;
    use crate::field::BaseField;
    use crate::selmer::{selmer_group, unramified_subgroup};

    fn q(s: &str) -> Prime {
        BaseField::Rationals.parse_prime(s).unwrap()
    }

    fn basis_2_37() -> SelmerBasis {
        unramified_subgroup(&selmer_group(BaseField::Rationals, &[q("2"), q("37")])).unwrap()
    }

    #[test]
    fn positions() {
        assert_eq!(pair_position(0, 1, 3), 3);
        assert_eq!(pair_position(0, 2, 3), 4);
        assert_eq!(pair_position(1, 2, 3), 5);
        let v = psi_row(&BitVector::parse("101").unwrap());
        assert_eq!(v.to_string(), "101010");
    }

    #[test]
    fn t1_over_q() {
        let b = basis_2_37();
        let t1 = find_t1(&b, &SearchConfig::default()).unwrap();
        assert_eq!(t1.primes, vec![q("3"), q("5"), q("7")]);
        for (i, p) in t1.primes.iter().enumerate() {
            assert_eq!(t1.dual_basis.symbol_vector(p).unwrap(), BitVector::unit(3, i));
        }
        let empty = unramified_subgroup(&selmer_group(BaseField::Rationals, &[])).unwrap();
        assert!(find_t1(&empty, &SearchConfig::default()).unwrap().primes.is_empty());
    }

    #[test]
    fn t0_example() {
        let s = [q("2"), q("37")];
        let fam = load_family(BaseField::Rationals, &s, "-1 -12 -11\n-1 -3 1\n-1 -12 26\n").unwrap();
        let t0 = find_t0(&fam, &SearchConfig::default()).unwrap();
        assert_eq!(t0.primes, vec![q("3"), q("5")]);
        let sigs: Vec<String> = t0.signatures.iter().map(|(_, s)| s.to_string()).collect();
        assert_eq!(sigs, ["11", "10", "01"]);
        let ctx = VerifyContext { basis: &basis_2_37(), family: Some(&fam) };
        assert!(verify_set(SetKind::T0, Candidate::T0(&t0.primes), &ctx).ok);
        let bad = verify_set(SetKind::T0, Candidate::T0(&[q("3")]), &ctx);
        assert!(!bad.ok);
        assert!(bad.diagnostics.iter().any(|d| d.contains("zero") || d.contains("share")));
        let empty = CubicFamily::empty(BaseField::Rationals, &s);
        assert!(find_t0(&empty, &SearchConfig::default()).unwrap().primes.is_empty());
    }

    #[test]
    fn t0_duplicate_fields_hit_the_cap() {
        // the same cubic field written two ways: x -> x + 1
        let s = [q("2"), q("37")];
        let fam = load_family(BaseField::Rationals, &s, "-1 -12 -11\n2 -11 -23\n").unwrap();
        let cfg = SearchConfig { norm_cap: 2000, ..Default::default() };
        match find_t0(&fam, &cfg) {
            Err(Error::SearchExhausted { what, cap }) => {
                assert_eq!(cap, 2000);
                assert!(what.contains("separating"), "{what}");
            }
            other => panic!("expected SearchExhausted, got {other:?}"),
        }
    }

    #[test]
    fn t2_special_over_q() {
        let b = basis_2_37();
        let t2 = find_t2_special(&b, &SearchConfig::default()).unwrap();
        assert_eq!(t2.primes, vec![q("7"), q("53"), q("17"), q("3"), q("23"), q("5")]);
        let ctx = VerifyContext { basis: &b, family: None };
        assert!(verify_set(SetKind::T2Special, Candidate::T2(&t2), &ctx).ok);
        let generic = find_t2(&b, &SearchConfig::default()).unwrap();
        assert_eq!(generic.primes.len(), 6);
        assert!(verify_set(SetKind::T2, Candidate::T2(&generic), &ctx).ok);
    }
}
