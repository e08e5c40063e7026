//! JSON document carrying a basis of K(S,2)_u together with the three test
//! sets, so that sets computed once (or taken from elsewhere) can be reused.

use serde::{Deserialize, Serialize};

use crate::cubic::{load_family, write_family, CubicFamily};
use crate::error::{Error, Result};
use crate::f2::{BitMatrix, BitVector};
use crate::field::{BaseField, Prime};
use crate::selmer::{selmer_group, unramified_subgroup, SelmerBasis};
use crate::sets::{
    find_t0, find_t1, find_t2, find_t2_special, verify_set, Candidate, SearchConfig, SetKind, T0Set, T1Set,
    T2Set, Verdict, VerifyContext,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestSetDocument {
    pub basis: SelmerBasis,
    pub family: CubicFamily,
    pub t0: T0Set,
    pub t1: T1Set,
    pub t2: T2Set,
}

#[derive(Serialize, Deserialize)]
struct RawDocument {
    field: BaseField,
    bad_set: Vec<String>,
    basis: Vec<String>,
    #[serde(default)]
    cubics: Vec<String>,
    t0: Vec<String>,
    t1: RawT1,
    t2: RawT2,
}

#[derive(Serialize, Deserialize)]
struct RawT1 {
    primes: Vec<String>,
    /// Exponents of each dual basis element over `basis`.
    dual_exponents: Vec<BitVector>,
}

#[derive(Serialize, Deserialize)]
struct RawT2 {
    primes: Vec<String>,
    /// 1-based `I(p)` per prime, for special sets.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    indexing: Option<Vec<Vec<usize>>>,
}

impl TestSetDocument {
    /// Computes all sets for (K, S) over the echelon basis of K(S,2)_u.
    pub fn compute(field: BaseField, bad_set: &[Prime], family: CubicFamily, cfg: &SearchConfig) -> Result<Self> {
        let basis = unramified_subgroup(&selmer_group(field, bad_set))?;
        let t0 = find_t0(&family, cfg)?;
        let t1 = find_t1(&basis, cfg)?;
        let t2 = match find_t2_special(&basis, cfg) {
            Err(Error::SearchExhausted { .. }) => find_t2(&basis, cfg)?,
            other => other?,
        };
        Ok(TestSetDocument { basis, family, t0, t1, t2 })
    }

    pub fn field(&self) -> BaseField {
        self.basis.field()
    }

    pub fn bad_set(&self) -> &[Prime] {
        self.basis.bad_set()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawDocument = serde_json::from_str(text)?;
        let field = raw.field;
        let bad_set = raw.bad_set.iter().map(|s| field.parse_prime(s)).collect::<Result<Vec<_>>>()?;
        let primes = |v: &[String]| v.iter().map(|s| field.parse_prime(s)).collect::<Result<Vec<_>>>();
        let elements = raw.basis.iter().map(|s| field.parse_integer(s)).collect::<Result<Vec<_>>>()?;
        let basis = SelmerBasis::from_elements(field, &bad_set, elements)?;
        let full = unramified_subgroup(&selmer_group(field, &bad_set))?;
        if basis.rank() != full.rank() {
            return Err(Error::InconsistentData(format!(
                "basis has {} elements but K(S,2)_u has rank {}",
                basis.rank(),
                full.rank()
            )));
        }
        let family = load_family(field, &bad_set, &raw.cubics.join("\n"))?;
        let t0 = T0Set::from_primes(&family, primes(&raw.t0)?)?;

        let r = basis.rank();
        if raw.t1.dual_exponents.len() != r || raw.t1.dual_exponents.iter().any(|e| e.len() != r) {
            return Err(Error::DimensionMismatch { expected: r, found: raw.t1.dual_exponents.len() });
        }
        let mut cols = BitMatrix::zeros(r, r);
        for (j, e) in raw.t1.dual_exponents.iter().enumerate() {
            for i in 0..r {
                cols.set(i, j, e.get(i));
            }
        }
        let t1 = T1Set { primes: primes(&raw.t1.primes)?, dual_basis: basis.transformed(&cols)? };

        let indexing = match raw.t2.indexing {
            None => None,
            Some(sets) => Some(
                sets.into_iter()
                    .map(|s| {
                        s.into_iter()
                            .map(|i| {
                                if i == 0 || i > r {
                                    Err(Error::InconsistentData(format!("index {i} outside 1..={r}")))
                                } else {
                                    Ok(i - 1)
                                }
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?,
            ),
        };
        let t2 = T2Set { primes: primes(&raw.t2.primes)?, indexing };
        if let Some(ix) = &t2.indexing {
            if ix.len() != t2.primes.len() {
                return Err(Error::DimensionMismatch { expected: t2.primes.len(), found: ix.len() });
            }
        }
        Ok(TestSetDocument { basis, family, t0, t1, t2 })
    }

    pub fn to_json(&self) -> String {
        let show = |v: &[Prime]| v.iter().map(|p| p.to_string()).collect::<Vec<_>>();
        let dual_exponents = self
            .t1
            .dual_basis
            .elements()
            .iter()
            .map(|&z| self.basis.express(z).expect("dual basis lies in the span"))
            .collect();
        let raw = RawDocument {
            field: self.field(),
            bad_set: show(self.bad_set()),
            basis: self.basis.elements().iter().map(|e| e.to_string()).collect(),
            cubics: write_family(&self.family).lines().map(str::to_string).collect(),
            t0: show(&self.t0.primes),
            t1: RawT1 { primes: show(&self.t1.primes), dual_exponents },
            t2: RawT2 {
                primes: show(&self.t2.primes),
                indexing: self.t2.indexing.as_ref().map(|ix| {
                    ix.iter().map(|s| s.iter().map(|i| i + 1).collect()).collect()
                }),
            },
        };
        serde_json::to_string_pretty(&raw).expect("serializable") + "\n"
    }

    /// Re-checks every set against its defining property.
    pub fn verify(&self) -> Vec<(SetKind, Verdict)> {
        let ctx = VerifyContext { basis: &self.basis, family: Some(&self.family) };
        let t2_kind = if self.t2.is_special() { SetKind::T2Special } else { SetKind::T2 };
        vec![
            (SetKind::T0, verify_set(SetKind::T0, Candidate::T0(&self.t0.primes), &ctx)),
            (
                SetKind::T1,
                verify_set(
                    SetKind::T1,
                    Candidate::T1 { primes: &self.t1.primes, dual_basis: Some(&self.t1.dual_basis) },
                    &ctx,
                ),
            ),
            (t2_kind, verify_set(t2_kind, Candidate::T2(&self.t2), &ctx)),
        ]
    }

    /// Every prime any analysis step may query, in canonical order.
    pub fn all_primes(&self) -> Vec<Prime> {
        let mut v: Vec<Prime> =
            self.t0.primes.iter().chain(&self.t1.primes).chain(&self.t2.primes).copied().collect();
        v.sort();
        v.dedup();
        v
    }
}
