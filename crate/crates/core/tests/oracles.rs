use std::fs;

use proptest::prelude::*;

use tworep::document::TestSetDocument;
use tworep::oracle::{
    count_points_naive, curve_discriminant, dump, f_at_one, make_ec_oracle_q, make_synthetic_oracle,
    make_table_oracle, write_table, Oracle, Truncated,
};
use tworep::{arith, canonical_primes, BaseField, BitVector, Prime};

fn fixture(name: &str) -> String {
    fs::read_to_string(format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn rational_prime(p: u64) -> Prime {
    BaseField::Rationals.parse_prime(&p.to_string()).unwrap()
}

fn s_complete(a: &[i128; 5]) -> Vec<Prime> {
    arith::factor((2 * curve_discriminant(a)).unsigned_abs()).into_iter().map(|(p, _)| rational_prime(p as u64)).collect()
}

fn curve() -> impl Strategy<Value = [i128; 5]> {
    prop::array::uniform5(-25i128..=25).prop_filter("singular", |a| curve_discriminant(a) != 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ec_oracle_matches_point_count(a in curve(), k in 0usize..40) {
        let s = s_complete(&a);
        let o = make_ec_oracle_q(a, &s).unwrap();
        let p = canonical_primes(BaseField::Rationals, &s).nth(k).unwrap();
        let (trace, det) = o.query(&p).unwrap().parts(&p).unwrap();
        let q = p.norm();
        prop_assert_eq!(trace.value, q as i128 + 1 - count_points_naive(&a, q) as i128);
        prop_assert_eq!(det.value, q as i128);
        // Hasse
        prop_assert!(trace.value * trace.value <= 4 * q as i128);
    }

    #[test]
    fn synthetic_characteristic_values(m1 in 0u32..8, m2 in 0u32..8, k in 0usize..200) {
        let f = BaseField::Rationals;
        let basis = tworep::selmer::unramified_subgroup(
            &tworep::selmer::selmer_group(f, &f.parse_prime_list("2,37").unwrap()),
        ).unwrap();
        let e = |m: u32| BitVector::from_bits(&[(m & 1) == 1, (m & 2) == 2, (m & 4) == 4]);
        let o = make_synthetic_oracle(&basis, basis.discriminant(&e(m1)), basis.discriminant(&e(m2)), [[3, 2], [1, 1]]).unwrap();
        let p = canonical_primes(f, basis.bad_set()).nth(k).unwrap();
        let a = o.query(&p).unwrap();
        let fv = f_at_one(&a).unwrap().value;
        prop_assert!(fv == 0 || fv == 4, "F(1) = {}", fv);
        let (_, det) = a.parts(&p).unwrap();
        prop_assert!(det.value == 1 || det.value == -1);
    }

    #[test]
    fn truncation_agrees_modulo_the_bits(bits in 0u32..12, k in 0usize..50) {
        let s = BaseField::Rationals.parse_prime_list("2,37").unwrap();
        let o = make_ec_oracle_q([0, 0, 0, -1369, 0], &s).unwrap();
        let t = Truncated { inner: o.clone(), bits };
        let p = canonical_primes(BaseField::Rationals, &s).nth(k).unwrap();
        let (a, _) = o.query(&p).unwrap().parts(&p).unwrap();
        let (b, _) = t.query(&p).unwrap().parts(&p).unwrap();
        prop_assert_eq!(b.precision.bits(), bits);
        prop_assert!(b.congruent(a.value, bits));
    }
}

/// det odd and F(1) even at every prime of the residually reducible fixtures.
#[test]
fn reducible_fixtures_have_odd_det_and_even_f() {
    for (sets, table) in [("sets_3140c.json", "3140c.tsv"), ("sets_200.2a.json", "200.2a.tsv"), ("sets_q_2_37.json", "350464h.tsv")] {
        let d = TestSetDocument::from_json(&fixture(sets)).unwrap();
        let o = make_table_oracle(d.field(), d.bad_set(), &fixture(table)).unwrap();
        for p in o.rows().keys() {
            let a = o.query(p).unwrap();
            let (_, det) = a.parts(p).unwrap();
            assert_eq!(det.value.rem_euclid(2), 1, "{table} at {p}");
            assert_eq!(f_at_one(&a).unwrap().value.rem_euclid(2), 0, "{table} at {p}");
        }
    }
}

#[test]
fn curve_43808_dump_rows() {
    let s = BaseField::Rationals.parse_prime_list("2,37").unwrap();
    let o = make_ec_oracle_q([0, 0, 0, -1369, 0], &s).unwrap();
    let rows = dump(&o, 60).unwrap();
    assert!(rows.iter().all(|(p, _)| p.norm() <= 60 && !s.contains(p)));
    let get = |p: u64| {
        let q = rational_prime(p);
        rows.iter().find(|(r, _)| *r == q).unwrap().1.parts(&q).unwrap().0.value
    };
    assert_eq!([7, 53, 17, 3, 5, 23].map(get), [0, 14, -2, 0, 2, 0]);
    // the dump reads back as the same oracle
    let back = make_table_oracle(BaseField::Rationals, &s, &write_table(&rows)).unwrap();
    for (p, a) in &rows {
        assert_eq!(back.query(p).unwrap(), *a);
    }
}

#[test]
fn trivial_synthetic_dump() {
    let f = BaseField::GaussianRationals;
    let s = f.parse_prime_list("1+i").unwrap();
    let basis = tworep::selmer::unramified_subgroup(&tworep::selmer::selmer_group(f, &s)).unwrap();
    let one = basis.discriminant(&BitVector::zeros(basis.rank()));
    let o = make_synthetic_oracle(&basis, one.clone(), one, [[1, 0], [0, 1]]).unwrap();
    let rows = dump(&o, 100).unwrap();
    assert!(!rows.is_empty());
    for (p, a) in rows {
        let (t, d) = a.parts(&p).unwrap();
        assert_eq!((t.value, d.value), (2, 1));
    }
}

#[test]
fn empty_dump_below_three() {
    let s = BaseField::Rationals.parse_prime_list("2").unwrap();
    let o = make_ec_oracle_q([1, 0, 1, 0, 0], &[]);
    assert!(o.is_err(), "bad set must cover the discriminant");
    let a = [0, 0, 0, -1, 0];
    let o = make_ec_oracle_q(a, &s).unwrap();
    assert!(dump(&o, 2).unwrap().is_empty());
    assert_eq!(o.query(&rational_prime(5)).unwrap().parts(&rational_prime(5)).unwrap().0.value, -2);
}
