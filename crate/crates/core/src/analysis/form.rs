use crate::error::{Error, Result};
use crate::f2::{BitMatrix, BitVector};
use crate::sets::{psi_row, sym2_dim};

/// A quadratic function on functionals `ℓ ∈ F_2^n`,
/// `Q(ℓ) = Σ c_i ℓ_i + Σ_{i<j} c_ij ℓ_i ℓ_j`, in psi coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Form {
    n: usize,
    coeffs: BitVector,
}

impl Form {
    /// Interpolates from sample values; the psi rows of the sample points
    /// must span, and the samples must agree with the solution.
    pub fn fit(n: usize, points: &[(BitVector, bool)]) -> Result<Form> {
        let d = sym2_dim(n);
        let mut a = BitMatrix::new(d);
        for (l, _) in points {
            if l.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: l.len() });
            }
            a.push_row(psi_row(l))?;
        }
        if a.rank() < d {
            return Err(Error::InsufficientTestSet(format!(
                "sample rows span {} of {d} quadratic coordinates",
                a.rank()
            )));
        }
        let b = BitVector::from_bits(&points.iter().map(|(_, t)| *t).collect::<Vec<_>>());
        let coeffs = a
            .solve(&b)?
            .ok_or_else(|| Error::InconsistentData("test values are not a quadratic function of the symbols".into()))?;
        Ok(Form { n, coeffs })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn eval(&self, l: &BitVector) -> bool {
        psi_row(l).dot(&self.coeffs)
    }

    /// `(Q(e_i))_i`.
    pub fn diagonal(&self) -> BitVector {
        BitVector::from_bits(&(0..self.n).map(|i| self.eval(&BitVector::unit(self.n, i))).collect::<Vec<_>>())
    }

    /// Polar matrix `W_ij = Q(e_i + e_j) + Q(e_i) + Q(e_j)`, zero diagonal.
    pub fn polar(&self) -> BitMatrix {
        let d = self.diagonal();
        let mut w = BitMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    let e = BitVector::from_indices(self.n, &[i, j]);
                    w.set(i, j, self.eval(&e) ^ d.get(i) ^ d.get(j));
                }
            }
        }
        w
    }
}

/// Recovers `{x, y}` with `Q(ℓ) = (x·ℓ)(y·ℓ)`, or `None` when the product
/// vanishes identically (one factor trivial).
pub fn pair_from_form(form: &Form, points: &[(BitVector, bool)]) -> Result<Option<(BitVector, BitVector)>> {
    let v = form.diagonal();
    let w = form.polar();
    let rank = w.rank();
    if rank != 0 && rank != 2 {
        return Err(Error::InconsistentData(format!("W has rank {rank}; expected 0 or 2")));
    }
    let (x, y) = if w.is_zero() {
        if v.is_zero() {
            return Ok(None);
        }
        (v.clone(), v)
    } else if v.is_zero() {
        let mut rows = w.rows().iter().filter(|r| !r.is_zero());
        let x = rows.next().expect("W nonzero").clone();
        let y = rows
            .find(|r| **r != x)
            .ok_or_else(|| Error::InconsistentData("W has a single distinct nonzero row".into()))?
            .clone();
        (x, y)
    } else {
        let i = v.first_one().expect("v nonzero");
        let z = w.row(i).clone();
        let x = w
            .rows()
            .iter()
            .find(|r| !r.is_zero() && **r != z)
            .ok_or_else(|| Error::InconsistentData("W has no nonzero row besides x + y".into()))?
            .clone();
        let y = x.xor(&z);
        (x, y)
    };
    for (l, t) in points {
        if (x.dot(l) & y.dot(l)) != *t {
            return Err(Error::InconsistentData(format!("pair ({x}, {y}) does not reproduce the test at {l}")));
        }
    }
    Ok(Some((x, y)))
}
