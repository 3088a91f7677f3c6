use arq_core::linalg::{Field, Matrix};
use proptest::prelude::*;

/// Fraction-free (Bareiss) rank over Q for small integer matrices.
fn bareiss_rank(rows: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let (m, n) = (a.len(), a.first().map_or(0, |r| r.len()));
    let (mut rank, mut prev) = (0usize, 1i128);
    for c in 0..n {
        let Some(p) = (rank..m).find(|&r| a[r][c] != 0) else { continue };
        a.swap(rank, p);
        for r in rank + 1..m {
            for k in c + 1..n {
                a[r][k] = (a[r][k] * a[rank][c] - a[r][c] * a[rank][k]) / prev;
            }
            a[r][c] = 0;
        }
        prev = a[rank][c];
        rank += 1;
    }
    rank
}

/// Plain modular elimination.
#[allow(clippy::needless_range_loop)]
fn rank_mod(rows: &[Vec<i64>], p: i64) -> usize {
    let mut a: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().map(|&x| x.rem_euclid(p)).collect()).collect();
    let (m, n) = (a.len(), a.first().map_or(0, |r| r.len()));
    let inv = |x: i64| (1..p).find(|y| x * y % p == 1).unwrap();
    let mut rank = 0;
    for c in 0..n {
        let Some(piv) = (rank..m).find(|&r| a[r][c] != 0) else { continue };
        a.swap(rank, piv);
        let i = inv(a[rank][c]);
        for r in 0..m {
            if r != rank && a[r][c] != 0 {
                let f = a[r][c] * i % p;
                for k in 0..n {
                    a[r][k] = (a[r][k] - f * a[rank][k]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn int_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..6, 1usize..6).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-3i64..=3, c), r))
}

fn fields() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Rational), Just(Field::Prime(2)), Just(Field::Prime(3)), Just(Field::Prime(7))]
}

proptest! {
    #[test]
    fn rank_matches_independent_elimination(rows in int_matrix(), f in fields()) {
        let m = Matrix::from_i64_rows(f, &rows);
        let want = match f {
            Field::Rational => bareiss_rank(&rows),
            Field::Prime(p) => rank_mod(&rows, p as i64),
        };
        prop_assert_eq!(m.rank(), want);
        prop_assert_eq!(m.transpose().rank(), want);
    }

    #[test]
    fn kernel_is_annihilated_and_has_nullity_dimension(rows in int_matrix(), f in fields()) {
        let m = Matrix::from_i64_rows(f, &rows);
        let (rank, k) = m.rank_kernel();
        prop_assert_eq!(k.cols(), m.cols() - rank);
        prop_assert!(m.mul(&k).is_zero());
        prop_assert_eq!(k.rank(), k.cols());
    }

    #[test]
    fn cokernel_kills_image(rows in int_matrix(), f in fields()) {
        let m = Matrix::from_i64_rows(f, &rows);
        let c = m.cokernel();
        prop_assert!(c.mul(&m).is_zero());
        prop_assert_eq!(c.rows(), m.rows() - m.rank());
    }

    #[test]
    fn solve_recovers_consistent_systems(rows in int_matrix(), f in fields(), seed in 0i64..50) {
        let m = Matrix::from_i64_rows(f, &rows);
        let x0 = Matrix::from_fn(f, m.cols(), 1, |r, _| f.from_i64((r as i64 * 7 + seed) % 5 - 2));
        let b = m.mul(&x0);
        let x = m.solve(&b).expect("consistent");
        prop_assert_eq!(m.mul(&x), b);
    }

    #[test]
    fn inverse_is_two_sided(rows in (1usize..5).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-3i64..=3, n), n)), f in fields()) {
        let m = Matrix::from_i64_rows(f, &rows);
        match m.inverse() {
            Some(inv) => {
                let id = Matrix::identity(f, m.rows());
                prop_assert_eq!(m.mul(&inv), id.clone());
                prop_assert_eq!(inv.mul(&m), id);
            }
            None => prop_assert!(m.rank() < m.rows()),
        }
    }

    #[test]
    fn complement_units_complete_a_basis(rows in int_matrix(), f in fields()) {
        let m = Matrix::from_i64_rows(f, &rows);
        let b = m.image_basis();
        let added = b.complement_units();
        prop_assert_eq!(b.cols() + added.len(), m.rows());
    }
}

#[test]
fn rref_is_idempotent() {
    let m = Matrix::from_i64_rows(Field::Rational, &[vec![2, 4, 1], vec![1, 2, 3], vec![3, 6, 4]]);
    let e = m.echelon();
    assert_eq!(e.pivots, vec![0, 2]);
    assert_eq!(e.rref.echelon().rref, e.rref);
}

#[test]
fn prime_field_arithmetic_wraps() {
    let f = Field::Prime(5);
    assert_eq!(f.mul(&f.from_i64(3), &f.from_i64(4)), f.from_i64(2));
    assert_eq!(f.inv(&f.from_i64(2)), f.from_i64(3));
    assert_eq!(Field::parse("Fp:5"), Some(f));
    assert_eq!(Field::parse("Fp:6"), None);
    assert_eq!(Field::parse("Q"), Some(Field::Rational));
}
