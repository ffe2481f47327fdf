//! Exhaustive enumeration of small groups and skew braces.
//!
//! Braces on a fixed additive group are produced two ways:
//!
//! * [`braces_on`] searches maps `λ : A → Aut(A, ⊕)` with
//!   `λ_{a ⊕ λ_a(b)} = λ_a ∘ λ_b` and sets `a ⊙ b = a ⊕ λ_a(b)`;
//! * [`braces_raw_oracle`] fills the multiplication table cell by cell,
//!   pruning on the group axioms and the left brace law directly.
//!
//! Both re-validate every candidate through the full brace scan, and for
//! `n ≤ 6` their outputs are required to coincide.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::brace::SkewBrace;
use crate::exec::{self, Strategy};
use crate::group::{FiniteGroup, GroupSignature};

/// Largest group order [`all_groups`] and [`corpus`] accept.
pub const MAX_ENUMERATION_ORDER: usize = 8;
/// Largest order the raw oracle accepts.
pub const MAX_ORACLE_ORDER: usize = 6;
/// Largest `|Aut(A, ⊕)|` the λ search accepts.
pub const AUT_GUARD: usize = 168;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EnumerationError {
    #[error("order {order} exceeds the enumeration limit {limit}")]
    TooLarge { order: usize, limit: usize },
    #[error("automorphism group of order {size} exceeds the limit {limit}")]
    TooManyAutomorphisms { size: usize, limit: usize },
}

fn guard(order: usize, limit: usize) -> Result<(), EnumerationError> {
    if order > limit {
        Err(EnumerationError::TooLarge { order, limit })
    } else {
        Ok(())
    }
}

/// How a set of braces was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    LambdaMethod,
    RawOracle,
}

/// One representative per isomorphism class of groups of order `n`, in a
/// fixed order (lexicographically smallest normalized Cayley table first).
pub fn all_groups(n: usize) -> Result<Vec<FiniteGroup>, EnumerationError> {
    all_groups_with(n, Strategy::default())
}

pub fn all_groups_with(n: usize, strategy: Strategy) -> Result<Vec<FiniteGroup>, EnumerationError> {
    guard(n, MAX_ENUMERATION_ORDER)?;
    if n == 0 {
        return Ok(Vec::new());
    }
    let tables = group_tables(n, strategy);
    let mut reps: Vec<FiniteGroup> = Vec::new();
    for flat in tables {
        let g = FiniteGroup::validate_flat(n, flat, Strategy::Sequential)
            .expect("completed tables are groups");
        if !reps.iter().any(|r| r.is_isomorphic(&g)) {
            reps.push(g);
        }
    }
    Ok(reps)
}

/// All group tables on `0..n` with identity 0, lexicographic order.
fn group_tables(n: usize, strategy: Strategy) -> Vec<Vec<u16>> {
    let mut base = PartialTable {
        n,
        t: vec![UNSET; n * n],
    };
    for x in 0..n {
        base.t[x] = x as u16;
        base.t[x * n] = x as u16;
    }
    if n == 1 {
        return vec![base.t];
    }

    fn fill(p: PartialTable, out: &mut Vec<Vec<u16>>) {
        let Some(cell) = p.t.iter().position(|&v| v == UNSET) else {
            out.push(p.t);
            return;
        };
        let (a, b) = (cell / p.n, cell % p.n);
        for v in 0..p.n {
            let mut next = p.clone();
            if next.assign(a, b, v) {
                fill(next, out);
            }
        }
    }

    let firsts: Vec<usize> = (0..n).collect();
    let parts = exec::map(strategy, &firsts, |&v| {
        let mut out = Vec::new();
        let mut p = base.clone();
        if p.assign(1, 1, v) {
            fill(p, &mut out);
        }
        out
    });
    let mut tables: Vec<Vec<u16>> = parts.into_iter().flatten().collect();
    tables.sort();
    tables
}

/// A partially filled Cayley table that stays Latin and closes itself
/// under the consequences of associativity.
#[derive(Clone)]
struct PartialTable {
    n: usize,
    t: Vec<u16>,
}

impl PartialTable {
    fn get(&self, x: usize, y: usize) -> Option<usize> {
        let v = self.t[x * self.n + y];
        (v != UNSET).then_some(v as usize)
    }

    fn assign(&mut self, x: usize, y: usize, v: usize) -> bool {
        let mut queue = Vec::new();
        self.set(x, y, v, &mut queue) && self.propagate(queue)
    }

    fn set(&mut self, x: usize, y: usize, v: usize, queue: &mut Vec<(usize, usize)>) -> bool {
        let n = self.n;
        if let Some(old) = self.get(x, y) {
            return old == v;
        }
        let v16 = v as u16;
        if (0..n).any(|j| self.t[x * n + j] == v16) || (0..n).any(|i| self.t[i * n + y] == v16) {
            return false;
        }
        self.t[x * n + y] = v16;
        queue.push((x, y));
        true
    }

    /// Makes the products at two cells equal.
    fn unify(&mut self, l: (usize, usize), r: (usize, usize), queue: &mut Vec<(usize, usize)>) -> bool {
        match (self.get(l.0, l.1), self.get(r.0, r.1)) {
            (Some(a), Some(b)) => a == b,
            (Some(a), None) => self.set(r.0, r.1, a, queue),
            (None, Some(b)) => self.set(l.0, l.1, b, queue),
            (None, None) => true,
        }
    }

    fn propagate(&mut self, mut queue: Vec<(usize, usize)>) -> bool {
        let n = self.n;
        while let Some((a, b)) = queue.pop() {
            let v = self.get(a, b).expect("queued cells are set");
            for w in 0..n {
                // (ab)w = a(bw)
                if let Some(q) = self.get(b, w) {
                    if !self.unify((v, w), (a, q), &mut queue) {
                        return false;
                    }
                }
                // (wa)b = w(ab)
                if let Some(p) = self.get(w, a) {
                    if !self.unify((p, b), (w, v), &mut queue) {
                        return false;
                    }
                }
                for u in 0..n {
                    let wu = self.get(w, u);
                    // (wu)b = w(ub) with wu = a
                    if wu == Some(a) {
                        if let Some(q) = self.get(u, b) {
                            if !self.set(w, q, v, &mut queue) {
                                return false;
                            }
                        }
                    }
                    // (aw)u = a(wu) with wu = b
                    if wu == Some(b) {
                        if let Some(p) = self.get(a, w) {
                            if !self.set(p, u, v, &mut queue) {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }
}

/// Conventional name for groups of order at most 8, `Zn` for any cyclic group.
pub fn small_group_name(g: &FiniteGroup) -> Option<String> {
    let n = g.order();
    let orders: Vec<usize> = (0..n).map(|a| g.element_order(a)).collect();
    let max = orders.iter().copied().max().unwrap_or(1);
    if max == n {
        return Some(format!("Z{n}"));
    }
    let involutions = orders.iter().filter(|&&o| o == 2).count();
    let name = match (n, g.is_abelian(), max, involutions) {
        (4, true, 2, _) => "Z2xZ2",
        (6, false, _, _) => "S3",
        (8, true, 4, _) => "Z2xZ4",
        (8, true, 2, _) => "Z2xZ2xZ2",
        (8, false, _, 5) => "D4",
        (8, false, _, 1) => "Q8",
        _ => return None,
    };
    Some(name.to_string())
}

/// Looks up a group by short name: `Zn` for any `n ≥ 1`, otherwise one of
/// the names [`small_group_name`] produces (plus `V4`, `K4`, `D3`, `D8`).
pub fn named_group(name: &str) -> Option<FiniteGroup> {
    let canonical = match name {
        "V4" | "K4" => "Z2xZ2",
        "D3" => "S3",
        "D8" => "D4",
        other => other,
    };
    if let Some(rest) = canonical.strip_prefix('Z') {
        if let Ok(n) = rest.parse::<usize>() {
            return (1..=crate::group::MAX_ORDER).contains(&n).then(|| FiniteGroup::cyclic(n));
        }
    }
    (1..=MAX_ENUMERATION_ORDER)
        .flat_map(|n| all_groups(n).unwrap_or_default())
        .find(|g| small_group_name(g).as_deref() == Some(canonical))
}

/// Every multiplication making `(add, ⊙)` a skew brace, found by searching
/// compatible λ-maps. Output is sorted by multiplication table.
pub fn braces_on(add: &FiniteGroup) -> Result<Vec<SkewBrace>, EnumerationError> {
    braces_on_with(add, Strategy::default())
}

pub fn braces_on_with(
    add: &FiniteGroup,
    strategy: Strategy,
) -> Result<Vec<SkewBrace>, EnumerationError> {
    let n = add.order();
    guard(n, MAX_ENUMERATION_ORDER)?;
    let auts = add.automorphisms();
    if auts.len() > AUT_GUARD {
        return Err(EnumerationError::TooManyAutomorphisms {
            size: auts.len(),
            limit: AUT_GUARD,
        });
    }
    let search = LambdaSearch::new(add, &auts);
    let mut lambdas: Vec<Vec<u16>> = if n == 1 {
        vec![vec![0]]
    } else {
        let branches: Vec<usize> = (0..auts.len()).collect();
        exec::map(strategy, &branches, |&k| {
            let mut out = Vec::new();
            let mut lam = vec![UNSET; n];
            lam[0] = 0;
            if search.assign(&mut lam, 1, k as u16) {
                search.descend(&lam, &mut out);
            }
            out
        })
        .into_iter()
        .flatten()
        .collect()
    };
    lambdas.sort();
    lambdas.dedup();

    let braces = exec::map(strategy, &lambdas, |lam| {
        let mut flat = Vec::with_capacity(n * n);
        for a in 0..n {
            let phi = &auts[lam[a] as usize];
            for b in 0..n {
                flat.push(add.op(a, phi.apply(b)) as u16);
            }
        }
        let mul = FiniteGroup::validate_flat(n, flat, Strategy::Sequential)
            .expect("λ-compatible maps yield groups");
        SkewBrace::new_with(add.clone(), mul, Strategy::Sequential)
            .expect("λ-compatible maps yield skew braces")
    });
    let mut braces = braces;
    braces.sort_by(|x, y| x.multiplicative().flat().cmp(y.multiplicative().flat()));
    Ok(braces)
}

const UNSET: u16 = u16::MAX;

struct LambdaSearch<'a> {
    add: &'a FiniteGroup,
    n: usize,
    /// `apply[k * n + x] = φ_k(x)`
    apply: Vec<u16>,
    /// `compose[i * m + j]` = index of `φ_i ∘ φ_j`
    compose: Vec<u16>,
    m: usize,
}

impl<'a> LambdaSearch<'a> {
    fn new(add: &'a FiniteGroup, auts: &[crate::group::Permutation]) -> Self {
        let n = add.order();
        let m = auts.len();
        let apply: Vec<u16> = auts
            .iter()
            .flat_map(|p| p.image().iter().map(|&x| x as u16))
            .collect();
        let index: std::collections::HashMap<&[usize], usize> = auts
            .iter()
            .enumerate()
            .map(|(i, p)| (p.image(), i))
            .collect();
        let mut compose = vec![0u16; m * m];
        for i in 0..m {
            for j in 0..m {
                let c = auts[i].compose(&auts[j]);
                compose[i * m + j] = index[c.image()] as u16;
            }
        }
        LambdaSearch {
            add,
            n,
            apply,
            compose,
            m,
        }
    }

    #[inline]
    fn phi(&self, k: u16, x: usize) -> usize {
        self.apply[k as usize * self.n + x] as usize
    }

    /// Sets `λ_a = φ_k` and closes under the compatibility rule. Returns
    /// false on a contradiction (the array is then garbage).
    fn assign(&self, lam: &mut [u16], a: usize, k: u16) -> bool {
        if lam[a] != UNSET {
            return lam[a] == k;
        }
        lam[a] = k;
        let mut assigned: Vec<usize> = (0..self.n).filter(|&x| lam[x] != UNSET).collect();
        let mut queue = vec![a];
        while let Some(x) = queue.pop() {
            let mut i = 0;
            while i < assigned.len() {
                let y = assigned[i];
                i += 1;
                for (p, q) in [(x, y), (y, x)] {
                    let c = self.add.op(p, self.phi(lam[p], q));
                    let want = self.compose[lam[p] as usize * self.m + lam[q] as usize];
                    if lam[c] == UNSET {
                        lam[c] = want;
                        assigned.push(c);
                        queue.push(c);
                    } else if lam[c] != want {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn descend(&self, lam: &[u16], out: &mut Vec<Vec<u16>>) {
        let Some(a) = lam.iter().position(|&k| k == UNSET) else {
            out.push(lam.to_vec());
            return;
        };
        for k in 0..self.m as u16 {
            let mut next = lam.to_vec();
            if self.assign(&mut next, a, k) {
                self.descend(&next, out);
            }
        }
    }
}

/// Independent brace search by direct table filling. Output is sorted by
/// multiplication table.
pub fn braces_raw_oracle(add: &FiniteGroup) -> Result<Vec<SkewBrace>, EnumerationError> {
    braces_raw_oracle_with(add, Strategy::default())
}

pub fn braces_raw_oracle_with(
    add: &FiniteGroup,
    strategy: Strategy,
) -> Result<Vec<SkewBrace>, EnumerationError> {
    let n = add.order();
    guard(n, MAX_ORACLE_ORDER)?;
    const EMPTY: usize = usize::MAX;
    let mut base = vec![EMPTY; n * n];
    for x in 0..n {
        base[x] = x;
        base[x * n] = x;
    }
    let cells: Vec<(usize, usize)> = (1..n).flat_map(|a| (1..n).map(move |b| (a, b))).collect();

    let left_law_ok = |t: &[usize], a: usize| {
        let na = add.inv(a);
        for b in 0..n {
            let ab = t[a * n + b];
            if ab == EMPTY {
                continue;
            }
            for c in 0..n {
                let ac = t[a * n + c];
                let abc = t[a * n + add.op(b, c)];
                if ac != EMPTY && abc != EMPTY && abc != add.op(add.op(ab, na), ac) {
                    return false;
                }
            }
        }
        true
    };
    let associative_so_far = |t: &[usize]| {
        for x in 1..n {
            for y in 1..n {
                let p = t[x * n + y];
                if p == EMPTY {
                    continue;
                }
                for z in 1..n {
                    let q = t[y * n + z];
                    if q == EMPTY {
                        continue;
                    }
                    let (l, r) = (t[p * n + z], t[x * n + q]);
                    if l != EMPTY && r != EMPTY && l != r {
                        return false;
                    }
                }
            }
        }
        true
    };

    struct Ctx<'c, L, A> {
        n: usize,
        cells: &'c [(usize, usize)],
        left_law_ok: L,
        associative_so_far: A,
    }
    fn fill<L, A>(ctx: &Ctx<'_, L, A>, k: usize, t: &mut Vec<usize>, out: &mut Vec<Vec<usize>>)
    where
        L: Fn(&[usize], usize) -> bool,
        A: Fn(&[usize]) -> bool,
    {
        let n = ctx.n;
        if k == ctx.cells.len() {
            out.push(t.clone());
            return;
        }
        let (a, b) = ctx.cells[k];
        for v in 0..n {
            if (0..n).any(|j| t[a * n + j] == v) || (0..n).any(|i| t[i * n + b] == v) {
                continue;
            }
            t[a * n + b] = v;
            if (ctx.left_law_ok)(t, a) && (ctx.associative_so_far)(t) {
                fill(ctx, k + 1, t, out);
            }
            t[a * n + b] = usize::MAX;
        }
    }

    let ctx = Ctx {
        n,
        cells: &cells,
        left_law_ok,
        associative_so_far,
    };
    let tables: Vec<Vec<usize>> = if cells.is_empty() {
        vec![base]
    } else {
        let firsts: Vec<usize> = (0..n).collect();
        exec::map(strategy, &firsts, |&v| {
            let mut out = Vec::new();
            let mut t = base.clone();
            let (a, b) = cells[0];
            if (0..n).any(|j| t[a * n + j] == v) || (0..n).any(|i| t[i * n + b] == v) {
                return out;
            }
            t[a * n + b] = v;
            if (ctx.left_law_ok)(&t, a) && (ctx.associative_so_far)(&t) {
                fill(&ctx, 1, &mut t, &mut out);
            }
            out
        })
        .into_iter()
        .flatten()
        .collect()
    };

    let add_rows = add.rows();
    let mut braces: Vec<SkewBrace> = tables
        .into_iter()
        .filter_map(|flat| {
            let rows: Vec<Vec<usize>> = flat.chunks(n).map(<[usize]>::to_vec).collect();
            SkewBrace::from_tables_with(&add_rows, &rows, Strategy::Sequential).ok()
        })
        .collect();
    braces.sort_by(|x, y| x.multiplicative().flat().cmp(y.multiplicative().flat()));
    Ok(braces)
}

/// Bucket key: additive invariants, multiplicative invariants, two-sidedness.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BucketKey {
    pub additive: GroupSignature,
    pub multiplicative: GroupSignature,
    pub two_sided: bool,
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub brace: SkewBrace,
    /// Position of the additive group in [`all_groups`] for this order.
    pub group_index: usize,
    pub group_name: String,
    /// Position among the braces on that additive group.
    pub brace_index: usize,
}

impl CorpusEntry {
    /// Stable identifier, e.g. `o8-g2-b0013`.
    pub fn id(&self) -> String {
        format!(
            "o{}-g{}-b{:04}",
            self.brace.order(),
            self.group_index,
            self.brace_index
        )
    }
}

/// All braces of one order, deduplicated by exact table pair.
#[derive(Clone, Debug)]
pub struct BraceCorpus {
    pub order: usize,
    pub provenance: Provenance,
    pub entries: Vec<CorpusEntry>,
    /// Entry positions grouped by [`BucketKey`].
    pub buckets: BTreeMap<BucketKey, Vec<usize>>,
}

impl BraceCorpus {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn braces(&self) -> impl Iterator<Item = &SkewBrace> {
        self.entries.iter().map(|e| &e.brace)
    }
}

/// The corpus for every order `1..=n_max`.
pub fn corpus(n_max: usize) -> Result<Vec<BraceCorpus>, EnumerationError> {
    corpus_with(n_max, Strategy::default())
}

pub fn corpus_with(n_max: usize, strategy: Strategy) -> Result<Vec<BraceCorpus>, EnumerationError> {
    guard(n_max, MAX_ENUMERATION_ORDER)?;
    (1..=n_max).map(|n| corpus_of_order(n, strategy)).collect()
}

pub fn corpus_of_order(n: usize, strategy: Strategy) -> Result<BraceCorpus, EnumerationError> {
    guard(n, MAX_ENUMERATION_ORDER)?;
    let groups = all_groups_with(n, strategy)?;
    let mut entries = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (gi, g) in groups.iter().enumerate() {
        let name = small_group_name(g).unwrap_or_else(|| g.signature().to_string());
        for (bi, brace) in braces_on_with(g, strategy)?.into_iter().enumerate() {
            let key = (brace.additive().flat().to_vec(), brace.multiplicative().flat().to_vec());
            if seen.insert(key) {
                entries.push(CorpusEntry {
                    brace,
                    group_index: gi,
                    group_name: name.clone(),
                    brace_index: bi,
                });
            }
        }
    }
    let keys = exec::map(strategy, &entries, |e| BucketKey {
        additive: e.brace.additive().signature(),
        multiplicative: e.brace.multiplicative().signature(),
        two_sided: e.brace.two_sided_witness(Strategy::Sequential).is_none(),
    });
    let mut buckets: BTreeMap<BucketKey, Vec<usize>> = BTreeMap::new();
    for (i, k) in keys.into_iter().enumerate() {
        buckets.entry(k).or_default().push(i);
    }
    Ok(BraceCorpus {
        order: n,
        provenance: Provenance::LambdaMethod,
        entries,
        buckets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_counts_up_to_eight() {
        let counts: Vec<usize> = (1..=8).map(|n| all_groups(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 1, 2, 1, 2, 1, 5]);
        assert!(matches!(all_groups(9), Err(EnumerationError::TooLarge { .. })));
    }

    #[test]
    fn names_are_distinct_per_order() {
        for n in 1..=8 {
            let names: Vec<String> = all_groups(n)
                .unwrap()
                .iter()
                .map(|g| small_group_name(g).unwrap())
                .collect();
            let mut dedup = names.clone();
            dedup.sort();
            dedup.dedup();
            assert_eq!(dedup.len(), names.len(), "{names:?}");
        }
        assert!(named_group("Q8").unwrap().is_isomorphic(&named_group("Q8").unwrap()));
        assert!(named_group("V4").unwrap().is_isomorphic(
            &FiniteGroup::product(&[&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2)])
        ));
        assert_eq!(named_group("Z12").unwrap().order(), 12);
        assert!(named_group("A5").is_none());
    }

    #[test]
    fn lambda_search_small_cases() {
        let z2 = FiniteGroup::cyclic(2);
        let b = braces_on(&z2).unwrap();
        assert_eq!(b.len(), 1);
        assert!(b[0].is_trivial());
        let z3 = braces_on(&FiniteGroup::cyclic(3)).unwrap();
        assert!(z3.iter().any(SkewBrace::is_trivial));
        assert_eq!(braces_on(&FiniteGroup::cyclic(1)).unwrap().len(), 1);
    }

    #[test]
    fn oracle_small_cases() {
        assert_eq!(braces_raw_oracle(&FiniteGroup::cyclic(2)).unwrap().len(), 1);
        assert!(braces_raw_oracle(&FiniteGroup::cyclic(3))
            .unwrap()
            .iter()
            .any(SkewBrace::is_trivial));
        assert!(matches!(
            braces_raw_oracle(&FiniteGroup::cyclic(7)),
            Err(EnumerationError::TooLarge { .. })
        ));
    }

    #[test]
    fn methods_agree_up_to_order_five() {
        for n in 1..=5 {
            for g in all_groups(n).unwrap() {
                let a = braces_on(&g).unwrap();
                let b = braces_raw_oracle(&g).unwrap();
                assert_eq!(a, b, "order {n}");
            }
        }
    }

    #[test]
    fn small_corpus() {
        let c = corpus(4).unwrap();
        assert_eq!(c[1].len(), 1);
        let four = &c[3];
        for g in all_groups(4).unwrap() {
            assert!(four.braces().any(|b| b.is_trivial() && b.additive() == &g));
        }
    }
}
