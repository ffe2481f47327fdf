//! Library results compared against naive brute-force computations that
//! share no code with the library beyond table lookups.

use std::collections::BTreeSet;

use braceforge::constructions::{example1, example2, example3};
use braceforge::enumeration::{all_groups, braces_on, corpus};
use braceforge::{ElementSet, FiniteGroup, SkewBrace};

fn permutations_fixing_zero(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for x in 1..n {
            if !used[x] {
                used[x] = true;
                prefix.push(x);
                go(prefix, used, n, out);
                prefix.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    let mut used = vec![false; n];
    used[0] = true;
    go(&mut vec![0], &mut used, n, &mut out);
    out
}

fn is_hom(src: &FiniteGroup, dst: &FiniteGroup, f: &[usize]) -> bool {
    let n = src.order();
    (0..n).all(|a| (0..n).all(|b| f[src.op(a, b)] == dst.op(f[a], f[b])))
}

fn all_automorphisms(g: &FiniteGroup) -> Vec<Vec<usize>> {
    permutations_fixing_zero(g.order())
        .into_iter()
        .filter(|p| is_hom(g, g, p))
        .collect()
}

fn small_groups() -> Vec<FiniteGroup> {
    (1..=8).flat_map(|n| all_groups(n).unwrap()).collect()
}

#[test]
fn automorphism_groups_match_exhaustive_search() {
    for g in small_groups() {
        let brute = all_automorphisms(&g);
        let lib: Vec<Vec<usize>> = g.automorphisms().iter().map(|p| p.image().to_vec()).collect();
        assert_eq!(lib, brute, "order {}", g.order());
    }
}

#[test]
fn group_representatives_are_pairwise_non_isomorphic() {
    for n in 1..=8 {
        let reps = all_groups(n).unwrap();
        let perms = permutations_fixing_zero(n);
        for (i, g) in reps.iter().enumerate() {
            for h in &reps[i + 1..] {
                assert!(
                    !perms.iter().any(|p| is_hom(g, h, p)),
                    "two isomorphic representatives of order {n}"
                );
            }
        }
    }
}

fn naive_subgroup(g: &FiniteGroup, gens: &BTreeSet<usize>) -> BTreeSet<usize> {
    let mut set: BTreeSet<usize> = gens.clone();
    set.insert(0);
    loop {
        let mut grew = false;
        let snapshot: Vec<usize> = set.iter().copied().collect();
        for &a in &snapshot {
            for &b in &snapshot {
                grew |= set.insert(g.op(a, b));
            }
        }
        if !grew {
            return set;
        }
    }
}

fn naive_commutator(g: &FiniteGroup, x: &BTreeSet<usize>, y: &BTreeSet<usize>) -> BTreeSet<usize> {
    let mut gens = BTreeSet::new();
    for &a in x {
        for &b in y {
            gens.insert(g.op(g.op(a, b), g.op(g.inv(a), g.inv(b))));
        }
    }
    naive_subgroup(g, &gens)
}

fn naive_length(g: &FiniteGroup, lower_central: bool) -> Option<usize> {
    let full: BTreeSet<usize> = (0..g.order()).collect();
    let mut term = full.clone();
    for k in 0..=g.order() {
        if term.len() == 1 {
            return Some(k);
        }
        let next = if lower_central {
            naive_commutator(g, &term, &full)
        } else {
            naive_commutator(g, &term, &term)
        };
        if next == term {
            return None;
        }
        term = next;
    }
    None
}

#[test]
fn derived_and_nilpotency_classes_match_naive_series() {
    let mut groups = small_groups();
    for b in [
        example1(5).unwrap(),
        example2(4, 2).unwrap(),
        example2(3, 3).unwrap(),
        example3(2, 3).unwrap(),
    ] {
        groups.push(b.additive().clone());
        groups.push(b.multiplicative().clone());
    }
    for g in &groups {
        assert_eq!(g.solvability_class(), naive_length(g, false), "{}", g.signature());
        assert_eq!(g.nilpotency_class(), naive_length(g, true), "{}", g.signature());
    }
}

/// Every map `λ : A → Aut(A)` with `λ_0 = id`, filtered by the
/// compatibility condition, turned into multiplication tables.
fn brute_force_lambda_tables(add: &FiniteGroup) -> BTreeSet<Vec<Vec<usize>>> {
    let n = add.order();
    let auts = all_automorphisms(add);
    let mut out = BTreeSet::new();
    let mut choice = vec![0usize; n];
    loop {
        let lam = |a: usize| &auts[choice[a]];
        let compatible = (0..n).all(|a| {
            (0..n).all(|b| {
                let c = add.op(a, lam(a)[b]);
                (0..n).all(|x| lam(c)[x] == lam(a)[lam(b)[x]])
            })
        });
        if compatible {
            out.insert(
                (0..n)
                    .map(|a| (0..n).map(|b| add.op(a, lam(a)[b])).collect())
                    .collect(),
            );
        }
        // odometer over positions 1..n; λ_0 stays the identity (index 0)
        let mut i = 1;
        while i < n {
            choice[i] += 1;
            if choice[i] < auts.len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
        if i >= n {
            return out;
        }
    }
}

#[test]
fn lambda_search_matches_exhaustive_lambda_maps() {
    let mut groups: Vec<FiniteGroup> = (1..=7).flat_map(|n| all_groups(n).unwrap()).collect();
    groups.push(FiniteGroup::cyclic(8));
    for g in groups {
        let lib: BTreeSet<Vec<Vec<usize>>> =
            braces_on(&g).unwrap().iter().map(SkewBrace::mul_rows).collect();
        assert_eq!(lib, brute_force_lambda_tables(&g), "order {}", g.order());
    }
}

fn naive_is_ideal(b: &SkewBrace, set: &BTreeSet<usize>) -> bool {
    let n = b.order();
    let add = b.additive();
    let mul = b.multiplicative();
    let closed = |g: &FiniteGroup| set.iter().all(|&x| set.iter().all(|&y| set.contains(&g.op(x, y))));
    let normal = |g: &FiniteGroup| {
        (0..n).all(|a| set.iter().all(|&x| set.contains(&g.op(g.op(a, x), g.inv(a)))))
    };
    let lambda_closed = (0..n).all(|a| set.iter().all(|&x| set.contains(&b.lambda_apply(a, x))));
    set.contains(&0) && closed(add) && closed(mul) && normal(add) && normal(mul) && lambda_closed
}

#[test]
fn ideals_match_subset_scan() {
    let braces: Vec<SkewBrace> = corpus(8)
        .unwrap()
        .into_iter()
        .flat_map(|c| c.entries.into_iter().map(|e| e.brace))
        .chain([example1(3).unwrap(), example2(3, 2).unwrap()])
        .collect();
    for b in braces {
        let n = b.order();
        let mut brute: Vec<ElementSet> = (0u32..1 << (n - 1))
            .map(|mask| {
                std::iter::once(0)
                    .chain((1..n).filter(|i| mask >> (i - 1) & 1 == 1))
                    .collect::<BTreeSet<usize>>()
            })
            .filter(|s| naive_is_ideal(&b, s))
            .map(ElementSet::new)
            .collect();
        brute.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.members().cmp(y.members())));
        let mut lib = b.all_ideals().unwrap();
        lib.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.members().cmp(y.members())));
        assert_eq!(lib, brute);
    }
}

#[test]
fn star_square_matches_naive_closure() {
    for c in corpus(8).unwrap() {
        for e in c.entries {
            let b = &e.brace;
            let n = b.order();
            let gens: BTreeSet<usize> = (0..n)
                .flat_map(|x| (0..n).map(move |y| (x, y)))
                .map(|(x, y)| {
                    let l = b.additive().op(b.additive().inv(x), b.mul(x, y));
                    b.additive().op(l, b.additive().inv(y))
                })
                .collect();
            let naive = ElementSet::new(naive_subgroup(b.additive(), &gens));
            let full = ElementSet::full(n);
            assert_eq!(b.star_span(&full, &full), naive);
        }
    }
}

#[test]
fn corpus_is_duplicate_free_and_deterministic() {
    let first = corpus(8).unwrap();
    let again = corpus(8).unwrap();
    let mut seen = BTreeSet::new();
    for (c, d) in first.iter().zip(&again) {
        assert_eq!(c.len(), d.len());
        for (e, f) in c.entries.iter().zip(&d.entries) {
            assert_eq!(e.id(), f.id());
            assert_eq!(e.brace, f.brace);
            assert!(e.brace.check_identities().all_hold(), "{}", e.id());
            assert!(seen.insert((e.brace.add_rows(), e.brace.mul_rows())), "{}", e.id());
        }
    }
    assert_eq!(seen.len(), 335);
}
