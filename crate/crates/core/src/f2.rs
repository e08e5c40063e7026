//! Dense linear algebra over F2 with rows packed into `u64` words.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector { len, words: vec![0; len.div_ceil(WORD)] }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    /// Parses a string of `0`/`1` characters, index 0 first.
    pub fn parse(s: &str) -> Option<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => return None,
            }
        }
        Some(Self::from_bits(&bits))
    }

    pub fn from_indices(len: usize, idx: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in idx {
            v.set(i, true);
        }
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, b: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let m = 1u64 << (i % WORD);
        if b {
            self.words[i / WORD] |= m;
        } else {
            self.words[i / WORD] &= !m;
        }
    }

    pub fn flip(&mut self, i: usize) {
        let b = self.get(i);
        self.set(i, !b);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn ones(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.get(i)).collect()
    }

    pub fn first_one(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(k * WORD + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVector) -> BitVector {
        let mut r = self.clone();
        r.xor_assign(other);
        r
    }

    /// Componentwise product.
    pub fn and(&self, other: &BitVector) -> BitVector {
        assert_eq!(self.len, other.len, "length mismatch in and");
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect();
        BitVector { len: self.len, words }
    }

    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in dot");
        let ones: u32 = self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones()).sum();
        ones & 1 == 1
    }

    pub fn to_bits(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    /// Sub-vector `[start, end)`.
    pub fn slice(&self, start: usize, end: usize) -> BitVector {
        let bits: Vec<bool> = (start..end).map(|i| self.get(i)).collect();
        BitVector::from_bits(&bits)
    }

    pub fn concat(&self, other: &BitVector) -> BitVector {
        let mut bits = self.to_bits();
        bits.extend(other.to_bits());
        BitVector::from_bits(&bits)
    }
}

/// Serialized as a bit string such as `"0101"`.
impl serde::Serialize for BitVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for BitVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        BitVector::parse(&s).ok_or_else(|| serde::de::Error::custom(format!("bad bit string {s:?}")))
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

/// Lexicographic on the bit sequence, index 0 most significant, `0 < 1`.
impl Ord for BitVector {
    fn cmp(&self, other: &Self) -> Ordering {
        let n = self.len.min(other.len);
        for i in 0..n {
            match (self.get(i), other.get(i)) {
                (false, true) => return Ordering::Less,
                (true, false) => return Ordering::Greater,
                _ => {}
            }
        }
        self.len.cmp(&other.len)
    }
}

impl PartialOrd for BitVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVector>,
}

impl BitMatrix {
    pub fn new(cols: usize) -> Self {
        BitMatrix { cols, rows: Vec::new() }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix { cols, rows: vec![BitVector::zeros(cols); rows] }
    }

    pub fn identity(n: usize) -> Self {
        BitMatrix { cols: n, rows: (0..n).map(|i| BitVector::unit(n, i)).collect() }
    }

    pub fn from_rows(cols: usize, rows: Vec<BitVector>) -> Result<Self> {
        for r in &rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: r.len() });
            }
        }
        Ok(BitMatrix { cols, rows })
    }

    /// Convenience for tests and small literals.
    pub fn from_u8_rows(rows: &[&[u8]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| BitVector::from_bits(&r.iter().map(|&b| b != 0).collect::<Vec<_>>()))
            .collect();
        BitMatrix::from_rows(cols, rows).expect("ragged literal")
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, b: bool) {
        self.rows[i].set(j, b)
    }

    pub fn push_row(&mut self, v: BitVector) -> Result<()> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        self.rows.push(v);
        Ok(())
    }

    pub fn column(&self, j: usize) -> BitVector {
        let bits: Vec<bool> = self.rows.iter().map(|r| r.get(j)).collect();
        BitVector::from_bits(&bits)
    }

    pub fn transpose(&self) -> BitMatrix {
        let rows = (0..self.cols).map(|j| self.column(j)).collect();
        BitMatrix { cols: self.rows.len(), rows }
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVector::is_zero)
    }

    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.nrows() {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.nrows() });
        }
        let mut out = BitMatrix::zeros(self.nrows(), other.cols);
        for (i, r) in self.rows.iter().enumerate() {
            for k in r.ones() {
                out.rows[i].xor_assign(&other.rows[k]);
            }
        }
        Ok(out)
    }

    /// `M v` for a column vector `v`.
    pub fn mul_vec(&self, v: &BitVector) -> Result<BitVector> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        let bits: Vec<bool> = self.rows.iter().map(|r| r.dot(v)).collect();
        Ok(BitVector::from_bits(&bits))
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (BitMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut top = 0;
        for c in 0..self.cols {
            if top == m.rows.len() {
                break;
            }
            let Some(p) = (top..m.rows.len()).find(|&i| m.rows[i].get(c)) else {
                continue;
            };
            m.rows.swap(top, p);
            let pr = m.rows[top].clone();
            for i in 0..m.rows.len() {
                if i != top && m.rows[i].get(c) {
                    m.rows[i].xor_assign(&pr);
                }
            }
            pivots.push(c);
            top += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn in_rowspace(&self, v: &BitVector) -> Result<bool> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        let (m, pivots) = self.rref();
        let mut w = v.clone();
        for (i, &c) in pivots.iter().enumerate() {
            if w.get(c) {
                w.xor_assign(&m.rows[i]);
            }
        }
        Ok(w.is_zero())
    }

    pub fn invert(&self) -> Result<BitMatrix> {
        let n = self.nrows();
        if n != self.cols {
            return Err(Error::DimensionMismatch { expected: n, found: self.cols });
        }
        let mut a = self.rows.clone();
        let mut inv: Vec<BitVector> = (0..n).map(|i| BitVector::unit(n, i)).collect();
        for c in 0..n {
            let p = (c..n).find(|&i| a[i].get(c)).ok_or(Error::Singular)?;
            a.swap(c, p);
            inv.swap(c, p);
            let (ar, ir) = (a[c].clone(), inv[c].clone());
            for i in 0..n {
                if i != c && a[i].get(c) {
                    a[i].xor_assign(&ar);
                    inv[i].xor_assign(&ir);
                }
            }
        }
        Ok(BitMatrix { cols: n, rows: inv })
    }

    /// Solves `M x = b`. Returns `None` when the system is inconsistent;
    /// free variables are set to zero.
    pub fn solve(&self, b: &BitVector) -> Result<Option<BitVector>> {
        if b.len() != self.nrows() {
            return Err(Error::DimensionMismatch { expected: self.nrows(), found: b.len() });
        }
        // Row-reduce the augmented matrix [M | b].
        let aug_rows: Vec<BitVector> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| r.concat(&BitVector::from_bits(&[b.get(i)])))
            .collect();
        let aug = BitMatrix::from_rows(self.cols + 1, aug_rows)?;
        let (m, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = BitVector::zeros(self.cols);
        for (i, &c) in pivots.iter().enumerate() {
            x.set(c, m.rows[i].get(self.cols));
        }
        Ok(Some(x))
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_examples() {
        assert_eq!(BitMatrix::zeros(3, 3).rank(), 0);
        assert_eq!(BitMatrix::identity(4).rank(), 4);
        let m = BitMatrix::from_u8_rows(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn rowspace_examples() {
        let empty = BitMatrix::new(3);
        assert!(empty.in_rowspace(&BitVector::zeros(3)).unwrap());
        let full = BitMatrix::from_u8_rows(&[&[1, 0], &[0, 1]]);
        assert!(full.in_rowspace(&BitVector::from_bits(&[true, true])).unwrap());
        let one = BitMatrix::from_u8_rows(&[&[1, 1, 0]]);
        assert!(!one.in_rowspace(&BitVector::from_bits(&[true, false, false])).unwrap());
        assert!(matches!(
            one.in_rowspace(&BitVector::zeros(2)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn invert_examples() {
        let id = BitMatrix::identity(5);
        assert_eq!(id.invert().unwrap(), id);
        let m = BitMatrix::from_u8_rows(&[&[1, 1], &[0, 1]]);
        assert_eq!(m.invert().unwrap(), m);
        let a = BitMatrix::from_u8_rows(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 0]]);
        let b = a.invert().unwrap();
        assert_eq!(a.mul(&b).unwrap(), BitMatrix::identity(3));
        // Gauss-Jordan by hand: rows (0,0,1),(1,0,1),(1,1,1)
        assert_eq!(b, BitMatrix::from_u8_rows(&[&[0, 0, 1], &[1, 0, 1], &[1, 1, 1]]));
        let s = BitMatrix::from_u8_rows(&[&[1, 1], &[1, 1]]);
        assert!(matches!(s.invert(), Err(Error::Singular)));
    }

    #[test]
    fn solve_consistency() {
        let m = BitMatrix::from_u8_rows(&[&[1, 1, 0], &[0, 1, 1]]);
        let b = BitVector::from_bits(&[true, false]);
        let x = m.solve(&b).unwrap().unwrap();
        assert_eq!(m.mul_vec(&x).unwrap(), b);
        let dup = BitMatrix::from_u8_rows(&[&[1, 0], &[1, 0]]);
        assert!(dup.solve(&BitVector::from_bits(&[true, false])).unwrap().is_none());
    }

    #[test]
    fn ordering_and_display() {
        let a = BitVector::parse("0011").unwrap();
        let b = BitVector::parse("0101").unwrap();
        assert!(a < b);
        assert_eq!(a.to_string(), "0011");
        let wide = BitVector::unit(130, 129);
        assert_eq!(wide.first_one(), Some(129));
        assert_eq!(wide.count_ones(), 1);
    }
}
