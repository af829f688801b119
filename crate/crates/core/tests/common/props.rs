//! Strategies and property bodies shared by the property suite and the
//! acceptance gate.

use forkred_core::format::{parse_json, parse_quiver, parse_text, to_json, to_text};
use forkred_core::{Error, ExtendedQuiver, IntMatrix, MutationSequence, QuiverMatrix};
use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

/// Ice quiver with `n` in 1..=6, `m` in 0..=4 and entries in -6..=6.
pub fn small_quiver() -> impl Strategy<Value = ExtendedQuiver> {
    (1usize..=6, 0usize..=4).prop_flat_map(|(n, m)| {
        let upper = proptest::collection::vec(-6i64..=6, n * (n - 1) / 2);
        let c = proptest::collection::vec(-6i64..=6, n * m);
        (Just(n), Just(m), upper, c).prop_map(|(n, m, upper, c)| build(n, m, &upper, &c, 1))
    })
}

/// Like [`small_quiver`] but with entries scaled past 64 bits.
pub fn big_quiver() -> impl Strategy<Value = ExtendedQuiver> {
    (1usize..=4, 0usize..=3, 0u32..=40).prop_flat_map(|(n, m, e)| {
        let upper = proptest::collection::vec(-6i64..=6, n * (n - 1) / 2);
        let c = proptest::collection::vec(-6i64..=6, n * m);
        (Just(n), Just(m), upper, c)
            .prop_map(move |(n, m, upper, c)| build(n, m, &upper, &c, 10u128.pow(e / 2) * 7))
    })
}

fn build(n: usize, m: usize, upper: &[i64], c: &[i64], scale: u128) -> ExtendedQuiver {
    let scale = BigInt::from(scale);
    let mut b = IntMatrix::zeros(n, n);
    let mut it = upper.iter();
    for i in 0..n {
        for j in i + 1..n {
            let x = BigInt::from(*it.next().unwrap()) * &scale;
            b[(i, j)] = x.clone();
            b[(j, i)] = -x;
        }
    }
    let mut cm = IntMatrix::zeros(n, m);
    for (k, x) in c.iter().enumerate() {
        cm[(k / m, k % m)] = BigInt::from(*x) * &scale;
    }
    ExtendedQuiver::new(QuiverMatrix::new(b).unwrap(), cm).unwrap()
}

/// The full `(n+m) x (n+m)` skew-symmetric matrix of `q` as `i128`.
#[allow(clippy::needless_range_loop)]
fn full_matrix(q: &ExtendedQuiver) -> Vec<Vec<i128>> {
    let (n, m) = (q.n(), q.m());
    let get = |x: &BigInt| i128::try_from(x).unwrap();
    let mut a = vec![vec![0i128; n + m]; n + m];
    for i in 0..n {
        for j in 0..n {
            a[i][j] = get(&q.mutable_part().matrix()[(i, j)]);
        }
        for j in 0..m {
            a[i][n + j] = get(&q.c_matrix()[(i, j)]);
            a[n + j][i] = -a[i][n + j];
        }
    }
    a
}

/// Textbook matrix mutation on the full skew-symmetric matrix.
fn textbook_mutation(a: &[Vec<i128>], k: usize) -> Vec<Vec<i128>> {
    let size = a.len();
    let mut out = a.to_vec();
    for i in 0..size {
        for j in 0..size {
            out[i][j] = if i == k || j == k {
                -a[i][j]
            } else {
                a[i][j] + a[i][k].signum() * (a[i][k] * a[k][j]).max(0)
            };
        }
    }
    out
}

pub fn mutation_is_an_involution(q: &ExtendedQuiver) -> Result<(), TestCaseError> {
    for k in q.mutable_vertices() {
        let back = q.mutate(k).unwrap().mutate(k).unwrap();
        prop_assert_eq!(&back, q);
    }
    Ok(())
}

pub fn mutation_matches_textbook_and_stays_skew(q: &ExtendedQuiver) -> Result<(), TestCaseError> {
    let full = full_matrix(q);
    for k in q.mutable_vertices() {
        let p = q.mutate(k).unwrap();
        let expected = textbook_mutation(&full, k.index());
        let got = full_matrix(&p);
        let n = q.n();
        for i in 0..n + q.m() {
            for j in 0..n + q.m() {
                if i < n || j < n {
                    prop_assert_eq!(got[i][j], expected[i][j], "entry ({}, {})", i, j);
                }
            }
        }
        // Re-validating the exchange matrix checks skew-symmetry.
        prop_assert!(QuiverMatrix::new(p.mutable_part().matrix().clone()).is_ok());
        prop_assert_eq!(p.m(), q.m());
    }
    Ok(())
}

pub fn reduced_sequences_are_enforced(
    q: &ExtendedQuiver,
    labels: &[usize],
) -> Result<(), TestCaseError> {
    let total = q.n() + q.m();
    let reduced = labels.windows(2).all(|w| w[0] != w[1]);
    match MutationSequence::from_labels(labels) {
        Ok(w) => {
            prop_assert!(reduced && labels.iter().all(|&l| l >= 1));
            let mut again = MutationSequence::empty();
            for &v in w.as_slice() {
                again.push(v).unwrap();
            }
            if let Some(last) = w.last() {
                let is_not_reduced = matches!(again.push(last), Err(Error::NotReduced { .. }));
                prop_assert!(is_not_reduced);
            }
            let applied = q.mutate_seq(&w);
            let in_range = labels.iter().all(|&l| l <= q.n());
            prop_assert_eq!(applied.is_ok(), in_range);
            if let Some(&bad) = labels.iter().find(|&&l| l > q.n()) {
                let err = applied.unwrap_err();
                if bad <= total {
                    prop_assert!(matches!(err, Error::FrozenVertex(_)), "{}", err);
                } else {
                    prop_assert!(matches!(err, Error::VertexOutOfRange { .. }), "{}", err);
                }
            }
        }
        Err(e) => {
            prop_assert!(!reduced || labels.contains(&0), "{}", e);
        }
    }
    Ok(())
}

pub fn formats_round_trip(q: &ExtendedQuiver) -> Result<(), TestCaseError> {
    let json = to_json(q);
    prop_assert_eq!(&parse_json(&json).unwrap(), q);
    prop_assert_eq!(&parse_quiver(&json).unwrap(), q);
    let text = to_text(q);
    prop_assert_eq!(&parse_text(&text).unwrap(), q);
    prop_assert_eq!(&parse_quiver(&text).unwrap(), q);
    Ok(())
}

pub fn label_lists() -> impl Strategy<Value = Vec<usize>> {
    proptest::collection::vec(0usize..=9, 0..12)
}
