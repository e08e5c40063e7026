use std::fs;

use proptest::prelude::*;

use tworep::analysis::{
    max_trivial_level, mod_next_level, residual_image, small_or_large, trivial_semisimplification,
    ResidualVerdict, SmallOrLarge, TrivialLevel,
};
use tworep::document::TestSetDocument;
use tworep::oracle::{make_ec_oracle_q, make_synthetic_oracle, make_table_oracle, FnOracle, FrobeniusAnswer, Truncated};
use tworep::{BitVector, Error};

fn fixture(name: &str) -> String {
    fs::read_to_string(format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn q_doc() -> TestSetDocument {
    TestSetDocument::from_json(&fixture("sets_q_2_37.json")).unwrap()
}

fn e3(m: u32) -> BitVector {
    BitVector::from_bits(&[(m & 1) == 1, (m & 2) == 2, (m & 4) == 4])
}

/// Unimodular integer matrices as short products of elementary ones.
fn unimodular() -> impl Strategy<Value = [[i128; 2]; 2]> {
    prop::collection::vec((any::<bool>(), -3i128..=3), 0..5).prop_map(|ops| {
        let mut m = [[1i128, 0], [0, 1]];
        for (upper, t) in ops {
            let e = if upper { [[1, t], [0, 1]] } else { [[1, 0], [t, 1]] };
            let mut r = [[0i128; 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    r[i][j] = m[i][0] * e[0][j] + m[i][1] * e[1][j];
                }
            }
            m = r;
        }
        m
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn synthetic_level_one(m1 in 0u32..8, m2 in 0u32..8) {
        let d = q_doc();
        let b = &d.t1.dual_basis;
        let o = make_synthetic_oracle(b, b.discriminant(&e3(m1)), b.discriminant(&e3(m2)), [[1, 0], [0, 1]]).unwrap();
        prop_assert_eq!(residual_image(&o, &d.family, &d.t0).unwrap(), ResidualVerdict::Reducible);
        prop_assert_eq!(small_or_large(&o, &d.t2, &d.t1).unwrap(), SmallOrLarge::Large);
        let s = mod_next_level(&o, 1, &d.t1, &d.t2).unwrap();
        let mut leaves = vec![s.x.clone(), s.y.clone(), s.z.clone()];
        leaves.sort();
        let mut want = vec![BitVector::zeros(3), BitVector::zeros(3), e3(m1 ^ m2)];
        want.sort();
        prop_assert_eq!(leaves, want);
        let mut diag = vec![s.u.clone(), s.v.clone()];
        diag.sort();
        let mut want = vec![e3(m1), e3(m2)];
        want.sort();
        prop_assert_eq!(diag, want);
        prop_assert!(s.branch.w_rank == 0 || s.branch.w_rank == 2);
        prop_assert_eq!(trivial_semisimplification(&o, &d.t1, &d.t2).unwrap(), m1 == 0 && m2 == 0);
    }

    #[test]
    fn conjugation_does_not_change_any_output(m1 in 0u32..8, m2 in 0u32..8, u in unimodular()) {
        let d = q_doc();
        let b = &d.t1.dual_basis;
        let (d1, d2) = (b.discriminant(&e3(m1)), b.discriminant(&e3(m2)));
        let plain = make_synthetic_oracle(b, d1.clone(), d2.clone(), [[1, 0], [0, 1]]).unwrap();
        let conj = make_synthetic_oracle(b, d1, d2, u).unwrap();
        prop_assert_eq!(
            residual_image(&plain, &d.family, &d.t0).unwrap(),
            residual_image(&conj, &d.family, &d.t0).unwrap()
        );
        prop_assert_eq!(small_or_large(&plain, &d.t2, &d.t1).unwrap(), small_or_large(&conj, &d.t2, &d.t1).unwrap());
        prop_assert_eq!(
            max_trivial_level(&plain, &d.t1, &d.t2, 6).unwrap(),
            max_trivial_level(&conj, &d.t1, &d.t2, 6).unwrap()
        );
        prop_assert_eq!(
            trivial_semisimplification(&plain, &d.t1, &d.t2).unwrap(),
            trivial_semisimplification(&conj, &d.t1, &d.t2).unwrap()
        );
    }

    #[test]
    fn more_precision_never_changes_a_verdict(lo in 0u32..14, extra in 1u32..10) {
        let d = q_doc();
        let o = make_ec_oracle_q([0, 0, 0, -1369, 0], d.bad_set()).unwrap();
        let a = Truncated { inner: &o, bits: lo };
        let b = Truncated { inner: &o, bits: lo + extra };
        if let Ok(v) = residual_image(&a, &d.family, &d.t0) {
            prop_assert_eq!(v, residual_image(&b, &d.family, &d.t0).unwrap());
        }
        if let Ok(v) = small_or_large(&a, &d.t2, &d.t1) {
            prop_assert_eq!(v, small_or_large(&b, &d.t2, &d.t1).unwrap());
        }
        if let Ok(v) = max_trivial_level(&a, &d.t1, &d.t2, 20) {
            prop_assert_eq!(v, max_trivial_level(&b, &d.t1, &d.t2, 20).unwrap());
        }
    }

    #[test]
    fn more_precision_over_gaussian_fixture(lo in 0u32..10, extra in 1u32..6) {
        let d = TestSetDocument::from_json(&fixture("sets_200.2a.json")).unwrap();
        let o = make_table_oracle(d.field(), d.bad_set(), &fixture("200.2a.tsv")).unwrap();
        let a = Truncated { inner: &o, bits: lo };
        let b = Truncated { inner: &o, bits: lo + extra };
        match max_trivial_level(&a, &d.t1, &d.t2, 20) {
            Ok(v) => prop_assert_eq!(v, max_trivial_level(&b, &d.t1, &d.t2, 20).unwrap()),
            Err(e) => prop_assert!(matches!(e, Error::PrecisionInsufficient { .. }), "{}", e),
        }
    }

    #[test]
    fn residual_reads_only_trace_parity(noise in prop::collection::vec(-50i128..50, 2), dets in prop::collection::vec(0i128..20, 2), pick in 0usize..4) {
        let d = TestSetDocument::compute(
            tworep::BaseField::Rationals,
            &tworep::BaseField::Rationals.parse_prime_list("2,37").unwrap(),
            tworep::cubic::load_family(tworep::BaseField::Rationals, &tworep::BaseField::Rationals.parse_prime_list("2,37").unwrap(), &fixture("ex48.cubics")).unwrap(),
            &Default::default(),
        ).unwrap();
        // parities of one cubic's λ-signature (or all even)
        let target: Vec<bool> = match pick {
            0 => vec![false; d.t0.primes.len()],
            i => d.t0.signatures[i - 1].1.to_bits(),
        };
        let t0 = d.t0.primes.clone();
        let parity = target.clone();
        let clean = FnOracle::new(d.field(), d.bad_set(), move |p| {
            let i = t0.iter().position(|q| q == p).unwrap_or(0);
            Ok(FrobeniusAnswer::exact(parity[i] as i128, 1))
        });
        let t0 = d.t0.primes.clone();
        let (noise2, dets2, parity2) = (noise.clone(), dets.clone(), target.clone());
        let noisy = FnOracle::new(d.field(), d.bad_set(), move |p| {
            let i = t0.iter().position(|q| q == p).unwrap_or(0);
            Ok(FrobeniusAnswer::exact(parity2[i] as i128 + 2 * noise2[i], 2 * dets2[i] + 1))
        });
        let a = residual_image(&clean, &d.family, &d.t0).unwrap();
        prop_assert_eq!(&a, &residual_image(&noisy, &d.family, &d.t0).unwrap());
        match (pick, a) {
            (0, ResidualVerdict::Reducible) => {}
            (i, ResidualVerdict::Irreducible { cubic, .. }) => prop_assert_eq!(cubic, d.t0.signatures[i - 1].0),
            (i, v) => return Err(TestCaseError::fail(format!("pick {i}: {v:?}"))),
        }
    }
}

#[test]
fn zeroed_high_trace_bits_keep_the_verdict() {
    let d = q_doc();
    let o = make_ec_oracle_q([0, 0, 0, -1369, 0], d.bad_set()).unwrap();
    let low = Truncated { inner: &o, bits: 1 };
    assert_eq!(residual_image(&o, &d.family, &d.t0).unwrap(), residual_image(&low, &d.family, &d.t0).unwrap());
}

#[test]
fn w_rank_on_fixtures() {
    for (sets, table) in [("sets_3140c.json", "3140c.tsv"), ("sets_200.2a.json", "200.2a.tsv")] {
        let d = TestSetDocument::from_json(&fixture(sets)).unwrap();
        let o = make_table_oracle(d.field(), d.bad_set(), &fixture(table)).unwrap();
        let TrivialLevel::Exact { k, structure: Some(s) } = max_trivial_level(&o, &d.t1, &d.t2, 20).unwrap() else {
            panic!("{table}: no structure");
        };
        assert!(s.branch.w_rank == 0 || s.branch.w_rank == 2, "{table}");
        assert_eq!(s.level, k);
    }
}

#[test]
fn not_trivial_mod_level_is_reported() {
    let d = q_doc();
    let o = make_table_oracle(d.field(), d.bad_set(), &fixture("350464h.tsv")).unwrap();
    // a small class is not trivial mod 2 on any lattice
    assert!(matches!(mod_next_level(&o, 1, &d.t1, &d.t2), Err(Error::NotTrivialModLevel { level: 1, .. })));
    assert_eq!(max_trivial_level(&o, &d.t1, &d.t2, 20).unwrap(), TrivialLevel::Exact { k: 0, structure: None });
}

#[test]
fn exactness_is_required_for_semisimplification() {
    let d = q_doc();
    let o = make_ec_oracle_q([0, 0, 0, -1369, 0], d.bad_set()).unwrap();
    let t = Truncated { inner: &o, bits: 30 };
    assert!(matches!(trivial_semisimplification(&t, &d.t1, &d.t2), Err(Error::ExactnessRequired { .. })));
    assert!(!trivial_semisimplification(&o, &d.t1, &d.t2).unwrap());
}
