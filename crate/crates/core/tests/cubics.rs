use proptest::prelude::*;

use tworep::cubic::{load_family, CubicPoly, GaloisType};
use tworep::{canonical_primes, BaseField, GaussInt, Prime};

/// Root search by plain integer arithmetic on representatives of the
/// residue field, independent of the library's finite-field code.
fn has_root_brute(f: &CubicPoly, p: &Prime) -> bool {
    let c = p.characteristic() as i128;
    let zero = |w: GaussInt| w.re.rem_euclid(c) == 0 && w.im.rem_euclid(c) == 0;
    let eval = |x: GaussInt| {
        let m = |a: GaussInt| GaussInt::new(a.re.rem_euclid(c), a.im.rem_euclid(c));
        let x2 = m(x * x);
        m(m(x2 * x) + m(f.c2 * x2) + m(f.c1 * x) + f.c0)
    };
    match (p.field(), p.degree()) {
        (BaseField::Rationals, _) => (0..c).any(|x| zero(eval(GaussInt::int(x)))),
        (_, 2) => (0..c).any(|x| (0..c).any(|y| zero(eval(GaussInt::new(x, y))))),
        _ => {
            let g = p.generator();
            let r = (0..c).find(|&r| (g.re + g.im * r).rem_euclid(c) == 0).unwrap();
            // send i to r
            let red = |w: GaussInt| (w.re + w.im * r).rem_euclid(c);
            let (c2, c1, c0) = (red(f.c2), red(f.c1), red(f.c0));
            (0..c).any(|x| (x * x % c * x + c2 * x % c * x + c1 * x + c0).rem_euclid(c) == 0)
        }
    }
}

/// Determinant by permutation expansion.
fn det(m: &[Vec<GaussInt>]) -> GaussInt {
    fn go(m: &[Vec<GaussInt>], row: usize, used: &mut Vec<bool>, sign: i128) -> GaussInt {
        if row == m.len() {
            return GaussInt::int(sign);
        }
        let mut acc = GaussInt::ZERO;
        let mut s = sign;
        for j in 0..m.len() {
            if used[j] {
                continue;
            }
            // the sign flips for each unused column passed over
            used[j] = true;
            acc = acc + m[row][j] * go(m, row + 1, used, s);
            used[j] = false;
            s = -s;
        }
        acc
    }
    go(m, 0, &mut vec![false; m.len()], 1)
}

/// `-Res(f, f')` through the 5x5 Sylvester matrix.
fn disc_by_resultant(f: &CubicPoly) -> GaussInt {
    let z = GaussInt::ZERO;
    let one = GaussInt::ONE;
    let (a, b, c) = (f.c2, f.c1, f.c0);
    let d2 = GaussInt::int(3);
    let d1 = GaussInt::int(2) * a;
    let m = vec![
        vec![one, a, b, c, z],
        vec![z, one, a, b, c],
        vec![d2, d1, b, z, z],
        vec![z, d2, d1, b, z],
        vec![z, z, d2, d1, b],
    ];
    -det(&m)
}

fn gauss() -> impl Strategy<Value = GaussInt> {
    (-9i128..=9, -9i128..=9).prop_map(|(a, b)| GaussInt::new(a, b))
}

proptest! {
    #[test]
    fn rational_lambda_matches_brute_force(c2 in -30i128..=30, c1 in -30i128..=30, c0 in -30i128..=30, k in 0usize..400) {
        let f = CubicPoly::rational(c2, c1, c0);
        let disc = f.discriminant();
        prop_assume!(!disc.is_zero());
        let p = canonical_primes(BaseField::Rationals, &[]).nth(k).unwrap();
        prop_assume!(!p.divides(disc));
        prop_assert_eq!(f.lambda(&p).unwrap(), !has_root_brute(&f, &p));
    }

    #[test]
    fn gaussian_lambda_matches_brute_force(c2 in gauss(), c1 in gauss(), c0 in gauss(), k in 0usize..120) {
        let f = CubicPoly::new(BaseField::GaussianRationals, c2, c1, c0);
        let disc = f.discriminant();
        prop_assume!(!disc.is_zero());
        // q < 10^4
        let p = canonical_primes(BaseField::GaussianRationals, &[]).nth(k).unwrap();
        prop_assume!(p.norm() < 10_000 && !p.divides(disc));
        prop_assert_eq!(f.lambda(&p).unwrap(), !has_root_brute(&f, &p));
    }

    #[test]
    fn discriminant_is_minus_the_resultant(c2 in gauss(), c1 in gauss(), c0 in gauss()) {
        let f = CubicPoly::new(BaseField::GaussianRationals, c2, c1, c0);
        prop_assert_eq!(f.discriminant(), disc_by_resultant(&f));
        let g = CubicPoly::rational(c2.re, c1.re, c0.re);
        prop_assert_eq!(g.discriminant(), disc_by_resultant(&g));
    }
}

fn lambda_density(f: &CubicPoly, field: BaseField) -> f64 {
    let disc = f.discriminant();
    let hits = canonical_primes(field, &[])
        .filter(|p| !p.divides(disc))
        .take(200)
        .filter(|p| f.lambda(p).unwrap())
        .count();
    hits as f64 / 200.0
}

#[test]
fn lambda_densities_follow_the_galois_group() {
    let q = BaseField::Rationals;
    let s = q.parse_prime_list("2,37").unwrap();
    let mut polys = load_family(q, &s, "-1 -12 -11\n-1 -3 1\n-1 -12 26\n").unwrap().polys();
    polys.push(CubicPoly::rational(0, -3, 1));
    polys.push(CubicPoly::rational(0, 0, -2));
    let mut seen = (false, false);
    for f in polys {
        let d = lambda_density(&f, q);
        match f.galois_type().unwrap() {
            GaloisType::C3 => {
                seen.0 = true;
                assert!((d - 2.0 / 3.0).abs() <= 0.15, "{f}: density {d}");
            }
            GaloisType::S3 => {
                seen.1 = true;
                assert!((d - 1.0 / 3.0).abs() <= 0.15, "{f}: density {d}");
            }
        }
    }
    assert_eq!(seen, (true, true));
}

#[test]
fn gaussian_lambda_density() {
    let qi = BaseField::GaussianRationals;
    // x^3 - 2 has group S3 over Q(i)
    let f = CubicPoly::new(qi, GaussInt::ZERO, GaussInt::ZERO, GaussInt::int(-2));
    assert_eq!(f.galois_type().unwrap(), GaloisType::S3);
    let d = lambda_density(&f, qi);
    assert!((d - 1.0 / 3.0).abs() <= 0.15, "density {d}");
}
