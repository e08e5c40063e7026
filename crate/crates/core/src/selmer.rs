//! K(S,2), its unramified subgroup, discriminants and the splitting symbol.

use std::fmt;

use crate::arith;
use crate::error::{Error, Result};
use crate::f2::{BitMatrix, BitVector};
use crate::field::{BaseField, Prime};
use crate::gauss::GaussInt;

/// Square-class coordinates on K(S,2) with respect to the generators
/// `{-1} ∪ S` over Q and `S ∪ {i}` over Q(i).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareClasses {
    field: BaseField,
    bad_set: Vec<Prime>,
    gens: Vec<GaussInt>,
}

impl SquareClasses {
    pub fn new(field: BaseField, bad_set: &[Prime]) -> Self {
        let mut s = bad_set.to_vec();
        s.sort();
        s.dedup();
        let mut gens = Vec::with_capacity(s.len() + 1);
        match field {
            BaseField::Rationals => {
                gens.push(GaussInt::int(-1));
                gens.extend(s.iter().map(Prime::generator));
            }
            BaseField::GaussianRationals => {
                gens.extend(s.iter().map(Prime::generator));
                gens.push(GaussInt::I);
            }
        }
        SquareClasses { field, bad_set: s, gens }
    }

    pub fn field(&self) -> BaseField {
        self.field
    }

    pub fn bad_set(&self) -> &[Prime] {
        &self.bad_set
    }

    pub fn generators(&self) -> &[GaussInt] {
        &self.gens
    }

    pub fn dim(&self) -> usize {
        self.gens.len()
    }

    fn unit_slot(&self) -> usize {
        match self.field {
            BaseField::Rationals => 0,
            BaseField::GaussianRationals => self.bad_set.len(),
        }
    }

    fn prime_slot(&self, k: usize) -> usize {
        match self.field {
            BaseField::Rationals => k + 1,
            BaseField::GaussianRationals => k,
        }
    }

    /// Coordinates of the square class of `z`; fails if `z` has odd
    /// valuation at a prime outside S.
    pub fn coords(&self, z: GaussInt) -> Result<BitVector> {
        if z.is_zero() {
            return Err(Error::NotInSelmer { value: "0".into(), prime: "-".into() });
        }
        let mut v = BitVector::zeros(self.dim());
        match self.field {
            BaseField::Rationals => {
                if !z.is_rational() {
                    return Err(Error::NotInSelmer { value: z.to_string(), prime: "i".into() });
                }
                v.set(0, z.re < 0);
                for (p, e) in arith::factor(z.re.unsigned_abs()) {
                    if e % 2 == 0 {
                        continue;
                    }
                    let k = self.bad_set.iter().position(|q| q.norm() as u128 == p).ok_or_else(|| {
                        Error::NotInSelmer { value: z.to_string(), prime: p.to_string() }
                    })?;
                    v.set(self.prime_slot(k), true);
                }
            }
            BaseField::GaussianRationals => {
                let (u, f) = z.factor();
                let m = u.unit_exponent().expect("factor returns a unit");
                v.set(self.unit_slot(), m % 2 == 1);
                for (pi, e) in f {
                    if e % 2 == 0 {
                        continue;
                    }
                    let k = self.bad_set.iter().position(|q| q.generator() == pi).ok_or_else(|| {
                        Error::NotInSelmer { value: z.to_string(), prime: pi.to_string() }
                    })?;
                    v.set(self.prime_slot(k), true);
                }
            }
        }
        Ok(v)
    }

    pub fn element(&self, coords: &BitVector) -> GaussInt {
        coords.ones().into_iter().fold(GaussInt::ONE, |acc, j| acc * self.gens[j])
    }

    /// Whether K(√z)/K is unramified outside S. `z` must lie in K(S,2).
    pub fn is_unramified(&self, z: GaussInt) -> Result<bool> {
        self.coords(z)?;
        match self.field {
            BaseField::Rationals => {
                if self.bad_set.iter().any(|p| p.norm() == 2) {
                    return Ok(true);
                }
                Ok(arith::squarefree_part(z.re).rem_euclid(4) == 1)
            }
            BaseField::GaussianRationals => {
                if self.bad_set.iter().any(Prime::lies_over_two) {
                    return Ok(true);
                }
                Ok(unramified_at_pi(strip_pi(z)))
            }
        }
    }

    pub fn contains_prime(&self, p: &Prime) -> bool {
        self.bad_set.contains(p)
    }
}

const PI: GaussInt = GaussInt::new(1, 1);

/// Removes the largest even power of `1+i`.
fn strip_pi(z: GaussInt) -> GaussInt {
    let mut w = z;
    while let Some(q) = w.div_exact(PI * PI) {
        w = q;
    }
    w
}

/// For `z` prime to `1+i`: K(√z) is unramified at `1+i` iff z ≡ ±1 (mod 4).
fn unramified_at_pi(z: GaussInt) -> bool {
    if PI.divides(z) {
        return false;
    }
    let four = GaussInt::int(4);
    four.divides(z - GaussInt::ONE) || four.divides(z + GaussInt::ONE)
}

/// For a unit `z` at `1+i` with z ≡ ±1 (mod 4): is `z` a square in the
/// completion? Decided modulo `(1+i)^5 = 4(1+i)·unit`.
fn square_at_pi(z: GaussInt) -> bool {
    let m = PI.pow(5);
    (0..8).any(|a| {
        (0..4).any(|b| {
            let w = GaussInt::new(a, b);
            !PI.divides(w) && m.divides(w * w - z)
        })
    })
}

/// The full group K(S,2), in generator order.
pub fn selmer_group(field: BaseField, bad_set: &[Prime]) -> SelmerBasis {
    let sq = SquareClasses::new(field, bad_set);
    let elements = sq.generators().to_vec();
    let coords = (0..sq.dim()).map(|j| BitVector::unit(sq.dim(), j)).collect();
    SelmerBasis { classes: sq, elements, coords }
}

/// Basis of K(S,2)_u: returns `full` unchanged when S contains every prime
/// above 2, otherwise an echelon basis of the unramified classes.
pub fn unramified_subgroup(full: &SelmerBasis) -> Result<SelmerBasis> {
    let sq = &full.classes;
    let n = full.rank();
    let over_two = match sq.field() {
        BaseField::Rationals => sq.bad_set().iter().any(|p| p.norm() == 2),
        BaseField::GaussianRationals => sq.bad_set().iter().any(Prime::lies_over_two),
    };
    if over_two {
        return Ok(full.clone());
    }
    if n > 24 {
        return Err(Error::InconsistentData(format!("K(S,2) of rank {n} is too large to enumerate")));
    }
    let mut good = BitMatrix::new(sq.dim());
    for mask in 1u64..(1u64 << n) {
        let exps = BitVector::from_bits(&(0..n).map(|j| mask >> j & 1 == 1).collect::<Vec<_>>());
        let z = full.product(&exps);
        if sq.is_unramified(z)? {
            good.push_row(sq.coords(z)?)?;
        }
    }
    let (m, pivots) = good.rref();
    let coords: Vec<BitVector> = m.rows()[..pivots.len()].to_vec();
    let elements = coords.iter().map(|c| normalize_element(sq.field(), sq.element(c))).collect();
    Ok(SelmerBasis { classes: sq.clone(), elements, coords })
}

fn normalize_element(field: BaseField, z: GaussInt) -> GaussInt {
    match field {
        BaseField::Rationals => GaussInt::int(arith::squarefree_part(z.re)),
        BaseField::GaussianRationals => z,
    }
}

/// An ordered basis of a subgroup of K(S,2), kept with its square-class
/// coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelmerBasis {
    classes: SquareClasses,
    elements: Vec<GaussInt>,
    coords: Vec<BitVector>,
}

impl SelmerBasis {
    /// Builds a basis from explicit representatives: each must lie in K(S,2),
    /// be unramified outside S, and the list must be independent.
    pub fn from_elements(field: BaseField, bad_set: &[Prime], elements: Vec<GaussInt>) -> Result<Self> {
        let classes = SquareClasses::new(field, bad_set);
        let mut coords = Vec::with_capacity(elements.len());
        for &z in &elements {
            if !classes.is_unramified(z)? {
                return Err(Error::InconsistentData(format!("K(√{z}) ramifies outside S")));
            }
            coords.push(classes.coords(z)?);
        }
        let m = BitMatrix::from_rows(classes.dim(), coords.clone())?;
        if m.rank() != elements.len() {
            return Err(Error::InconsistentData("basis elements are dependent modulo squares".into()));
        }
        Ok(SelmerBasis { classes, elements, coords })
    }

    /// The basis `Δ̃_j = ∏ Δ_i^{b_ij}` for an exponent matrix whose columns give
    /// the new elements.
    pub fn transformed(&self, columns: &BitMatrix) -> Result<SelmerBasis> {
        let r = self.rank();
        if columns.nrows() != r || columns.ncols() != r {
            return Err(Error::DimensionMismatch { expected: r, found: columns.nrows() });
        }
        let mut elements = Vec::with_capacity(r);
        let mut coords = Vec::with_capacity(r);
        for j in 0..r {
            let col = columns.column(j);
            elements.push(normalize_element(self.field(), self.product(&col)));
            coords.push(self.coords_of_exponents(&col));
        }
        Ok(SelmerBasis { classes: self.classes.clone(), elements, coords })
    }

    pub fn field(&self) -> BaseField {
        self.classes.field()
    }

    pub fn bad_set(&self) -> &[Prime] {
        self.classes.bad_set()
    }

    pub fn classes(&self) -> &SquareClasses {
        &self.classes
    }

    pub fn rank(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[GaussInt] {
        &self.elements
    }

    pub fn element_coords(&self) -> &[BitVector] {
        &self.coords
    }

    /// Expanded product `∏ Δ_i^{e_i}`.
    pub fn product(&self, exps: &BitVector) -> GaussInt {
        exps.ones().into_iter().fold(GaussInt::ONE, |acc, j| acc * self.elements[j])
    }

    fn coords_of_exponents(&self, exps: &BitVector) -> BitVector {
        let mut c = BitVector::zeros(self.classes.dim());
        for j in exps.ones() {
            c.xor_assign(&self.coords[j]);
        }
        c
    }

    /// Exponent vector of `z` over this basis.
    pub fn express(&self, z: GaussInt) -> Result<BitVector> {
        let target = self.classes.coords(z)?;
        let m = BitMatrix::from_rows(self.classes.dim(), self.coords.clone())?.transpose();
        m.solve(&target)?
            .ok_or_else(|| Error::InconsistentData(format!("{z} is not in the span of the basis")))
    }

    pub fn discriminant(&self, exps: &BitVector) -> Discriminant {
        assert_eq!(exps.len(), self.rank(), "exponent length");
        let repr = normalize_element(self.field(), self.product(exps));
        let label = match self.field() {
            BaseField::Rationals => repr.to_string(),
            BaseField::GaussianRationals => {
                let parts: Vec<String> = exps
                    .ones()
                    .into_iter()
                    .map(|j| {
                        let e = self.elements[j];
                        if e.re != 0 && e.im != 0 {
                            format!("({e})")
                        } else {
                            e.to_string()
                        }
                    })
                    .collect();
                if parts.is_empty() {
                    "1".into()
                } else {
                    parts.join("*")
                }
            }
        };
        Discriminant { repr, exponents: exps.clone(), label }
    }

    pub fn discriminant_of(&self, z: GaussInt) -> Result<Discriminant> {
        let e = self.express(z)?;
        Ok(self.discriminant(&e))
    }

    pub fn basis_discriminant(&self, i: usize) -> Discriminant {
        self.discriminant(&BitVector::unit(self.rank(), i))
    }

    /// Vector of symbols `[Δ_i | p]`.
    pub fn symbol_vector(&self, p: &Prime) -> Result<BitVector> {
        let mut v = BitVector::zeros(self.rank());
        for (i, &z) in self.elements.iter().enumerate() {
            v.set(i, symbol_of(&self.classes, z, p)?);
        }
        Ok(v)
    }

    /// `I(p)`: 0-based indices of basis elements inert at p.
    pub fn i_set(&self, p: &Prime) -> Result<Vec<usize>> {
        Ok(self.symbol_vector(p)?.ones())
    }
}

/// A class in K(S,2)_u: normalized representative and exponents over a basis.
#[derive(Debug, Clone)]
pub struct Discriminant {
    pub repr: GaussInt,
    pub exponents: BitVector,
    pub label: String,
}

impl Discriminant {
    pub fn is_trivial(&self) -> bool {
        self.exponents.is_zero()
    }
}

impl PartialEq for Discriminant {
    fn eq(&self, other: &Self) -> bool {
        self.exponents == other.exponents
    }
}

impl Eq for Discriminant {}

impl fmt::Display for Discriminant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

/// `[Δ|p]`: false if p splits in K(√Δ) (or Δ is a square), true if inert.
pub fn splitting_symbol(basis: &SelmerBasis, delta: &Discriminant, p: &Prime) -> Result<bool> {
    symbol_of(basis.classes(), delta.repr, p)
}

/// Symbol of an arbitrary element of K(S,2)_u.
pub fn symbol_of(classes: &SquareClasses, z: GaussInt, p: &Prime) -> Result<bool> {
    let ramified = || Error::RamifiedPrime { prime: p.to_string(), what: format!("K(√{z})") };
    if classes.contains_prime(p) {
        return Err(ramified());
    }
    if z.is_zero() {
        return Err(ramified());
    }
    let v = p.valuation(z);
    if v % 2 == 1 {
        return Err(ramified());
    }
    let mut w = z;
    for _ in 0..v {
        w = w.div_exact(p.generator()).expect("valuation");
    }
    if p.lies_over_two() {
        return match classes.field() {
            BaseField::Rationals => match w.re.rem_euclid(8) {
                1 => Ok(false),
                5 => Ok(true),
                _ => Err(ramified()),
            },
            BaseField::GaussianRationals => {
                if !unramified_at_pi(w) {
                    return Err(ramified());
                }
                Ok(!square_at_pi(w))
            }
        };
    }
    let f = p.residue_field();
    Ok(!f.is_square(f.reduce(w)))
}
