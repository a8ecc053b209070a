//! Brute-force counts against the closed-form and recursive counts.

use hyptri::enumeration::{tau_planar_polygon, GjRecursion};
use hyptri::oracle::{enumerate_planar_polygon, enumerate_rooted, GluingSpec};
use num_bigint::BigInt;

#[test]
fn closed_surfaces_match_recursion() {
    let mut gj = GjRecursion::seeded(&BigInt::from(4)).unwrap();
    for t in [2usize, 4, 6] {
        for g in 0..=2usize {
            let e = enumerate_rooted(&GluingSpec::closed(t, Some(g))).unwrap();
            assert_eq!(e.duplicates, 0);
            let n = (t / 2) as i64;
            assert_eq!(BigInt::from(e.len()), gj.tau(n, g).unwrap(), "T = {t}, g = {g}");
        }
    }
}

#[test]
fn polygons_match_closed_form() {
    for p in 1..=6usize {
        for t in 0..=6usize {
            if (t + p) % 2 == 1 || t + p < 2 {
                continue;
            }
            let e = enumerate_rooted(&GluingSpec::with_boundaries(t, vec![p], Some(0))).unwrap();
            assert_eq!(e.duplicates, 0);
            if t + 2 < p {
                assert!(e.is_empty());
                continue;
            }
            // t = 2n − p + 2
            let n = ((t + p) as i64 - 2) / 2;
            let want = tau_planar_polygon(n, p as u64).unwrap();
            assert_eq!(BigInt::from(e.len()), want, "p = {p}, T = {t}");
        }
    }
}

#[test]
fn planar_generator_reaches_larger_sizes() {
    for (p, v) in [(1usize, 5usize), (3, 4), (5, 3), (8, 2)] {
        let e = enumerate_planar_polygon(p, v).unwrap();
        assert_eq!(e.duplicates, 0);
        let n = (v + p) as i64 - 2;
        assert_eq!(BigInt::from(e.len()), tau_planar_polygon(n, p as u64).unwrap());
        assert!(e.maps.iter().all(|t| t.validate().is_ok()));
    }
}
