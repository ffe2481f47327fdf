use std::sync::OnceLock;

use proptest::prelude::*;

use braceforge::constructions::trivial_brace;
use braceforge::enumeration::{all_groups, corpus};
use braceforge::ybe::YbeMap;
use braceforge::{FiniteGroup, Permutation, SkewBrace};

fn sample() -> &'static [SkewBrace] {
    static CELL: OnceLock<Vec<SkewBrace>> = OnceLock::new();
    CELL.get_or_init(|| {
        corpus(8)
            .unwrap()
            .into_iter()
            .flat_map(|c| c.entries.into_iter().map(|e| e.brace))
            .collect()
    })
}

fn groups() -> &'static [FiniteGroup] {
    static CELL: OnceLock<Vec<FiniteGroup>> = OnceLock::new();
    CELL.get_or_init(|| (1..=8).flat_map(|n| all_groups(n).unwrap()).collect())
}

fn brace_and_elements(k: usize) -> impl Strategy<Value = (usize, Vec<usize>)> {
    (0..sample().len()).prop_flat_map(move |i| {
        let n = sample()[i].order();
        (Just(i), proptest::collection::vec(0..n, k))
    })
}

/// A permutation of `0..n` that fixes 0, built from a shuffle seed.
fn relabeling(n: usize, seed: &[usize]) -> Permutation {
    let mut image: Vec<usize> = (0..n).collect();
    for (i, s) in seed.iter().enumerate().take(n.saturating_sub(2)) {
        let j = 1 + i;
        let k = j + s % (n - j);
        image.swap(j, k);
    }
    Permutation::new(image).unwrap()
}

fn conjugate_table(rows: &[Vec<usize>], p: &Permutation) -> Vec<Vec<usize>> {
    let n = rows.len();
    let inv = p.inverse();
    (0..n)
        .map(|a| (0..n).map(|b| p.apply(rows[inv.apply(a)][inv.apply(b)])).collect())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn trivial_braces_are_two_sided_and_classical_iff_abelian(i in 0..groups().len()) {
        let g = &groups()[i];
        let b = trivial_brace(g);
        prop_assert!(b.check_identities().all_hold());
        prop_assert!(b.is_two_sided());
        prop_assert!(b.is_trivial());
        prop_assert_eq!(b.is_classical(), g.is_abelian());
    }

    #[test]
    fn brace_identities_hold_pointwise((i, xs) in brace_and_elements(3)) {
        let b = &sample()[i];
        let (a, x, y) = (xs[0], xs[1], xs[2]);
        prop_assert_eq!(b.mul(a, b.add(x, y)), b.add(b.sub(b.mul(a, x), a), b.mul(a, y)));
        prop_assert_eq!(b.lambda_apply(a, 0), 0);
        prop_assert_eq!(b.lambda_apply(a, b.add(x, y)), b.add(b.lambda_apply(a, x), b.lambda_apply(a, y)));
        prop_assert_eq!(
            b.lambda_apply(b.mul(a, x), y),
            b.lambda_apply(a, b.lambda_apply(x, y))
        );
        prop_assert_eq!(b.star(a, 0), 0);
        prop_assert_eq!(b.star(0, a), 0);
        prop_assert_eq!(b.mul(a, b.inv(a)), 0);
    }

    #[test]
    fn single_cell_corruption_is_rejected(
        (i, xs) in brace_and_elements(3),
    ) {
        let b = &sample()[i];
        let n = b.order();
        prop_assume!(n > 2);
        let (r, c, shift) = (xs[0], xs[1], 1 + xs[2] % (n - 1));
        let mut mul = b.mul_rows();
        mul[r][c] = (mul[r][c] + shift) % n;
        prop_assert!(SkewBrace::from_tables(&b.add_rows(), &mul).is_err());
    }

    #[test]
    fn relabeling_preserves_brace_and_report(
        i in 0..sample().len(),
        seed in proptest::collection::vec(0usize..64, 8),
    ) {
        let b = &sample()[i];
        let p = relabeling(b.order(), &seed);
        let add = conjugate_table(&b.add_rows(), &p);
        let mul = conjugate_table(&b.mul_rows(), &p);
        let relabeled = SkewBrace::from_tables(&add, &mul).unwrap();
        prop_assert_eq!(relabeled.report(), b.report());
    }

    #[test]
    fn direct_sums_combine_flags(i in 0..sample().len(), j in 0..sample().len()) {
        let (x, y) = (&sample()[i], &sample()[j]);
        let s = SkewBrace::direct_sum(&[x, y]).unwrap();
        prop_assert_eq!(s.order(), x.order() * y.order());
        prop_assert_eq!(s.is_two_sided(), x.is_two_sided() && y.is_two_sided());
        prop_assert_eq!(s.is_classical(), x.is_classical() && y.is_classical());
        prop_assert_eq!(s.is_trivial(), x.is_trivial() && y.is_trivial());
    }

    #[test]
    fn ybe_map_fixes_identity_pairs((i, xs) in brace_and_elements(1)) {
        let b = &sample()[i];
        let r = YbeMap::from_brace(b).unwrap();
        let y = xs[0];
        prop_assert_eq!(r.apply(0, y), (y, 0));
        prop_assert_eq!(r.apply(y, 0), (0, y));
        prop_assert!(r.verify_nondegenerate());
    }
}
