//! Finite groups stored as Cayley tables over the indices `0..n`.
//!
//! The identity is always index 0. Subsets of the carrier are carried around
//! as [`ElementSet`]s (sorted, duplicate free) and every closure or series
//! computation returns one.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::{self, Strategy};

/// Largest carrier size a table can hold (entries are stored as `u16`).
pub const MAX_ORDER: usize = 1 << 16;

/// Which side of a Cayley table failed to be a permutation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Line {
    Row,
    Column,
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Line::Row => f.write_str("row"),
            Line::Column => f.write_str("column"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("empty table")]
    Empty,
    #[error("table is not square: row {row} has {len} entries, expected {order}")]
    NotSquare { row: usize, len: usize, order: usize },
    #[error("entry {value} at ({a}, {b}) is outside 0..{order}")]
    OutOfRange {
        a: usize,
        b: usize,
        value: usize,
        order: usize,
    },
    #[error("order {order} exceeds the supported maximum {max}")]
    TooLarge { order: usize, max: usize },
    #[error("no identity element")]
    NoIdentity,
    #[error("element {element} has no two-sided inverse")]
    NoInverse { element: usize },
    #[error("{line} {index} is not a permutation: value {value} repeats")]
    NotBijectiveRows {
        line: Line,
        index: usize,
        value: usize,
    },
    #[error("associativity fails at ({a}, {b}, {c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("not a subgroup: {reason}")]
    NotASubgroup { reason: String },
    #[error("not normal: conjugating {h} by {g} leaves the subgroup")]
    NotNormal { g: usize, h: usize },
    #[error("an iterated commutator needs at least two entries")]
    TooShort,
}

/// A subset of the carrier `0..n`, kept sorted and free of duplicates.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElementSet(Vec<usize>);

impl ElementSet {
    pub fn new<I: IntoIterator<Item = usize>>(members: I) -> Self {
        let mut v: Vec<usize> = members.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        ElementSet(v)
    }

    pub fn empty() -> Self {
        ElementSet(Vec::new())
    }

    /// `{0}`.
    pub fn trivial() -> Self {
        ElementSet(vec![0])
    }

    pub fn full(n: usize) -> Self {
        ElementSet((0..n).collect())
    }

    pub fn from_mask(mask: &[bool]) -> Self {
        ElementSet(
            mask.iter()
                .enumerate()
                .filter_map(|(i, &m)| m.then_some(i))
                .collect(),
        )
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.0.iter().all(|&x| other.contains(x))
    }

    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for &x in &self.0 {
            if x < n {
                m[x] = true;
            }
        }
        m
    }

    pub fn union(&self, other: &ElementSet) -> ElementSet {
        ElementSet::new(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }
}

impl FromIterator<usize> for ElementSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        ElementSet::new(iter)
    }
}

/// A bijection of `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(image: Vec<usize>) -> Option<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &x in &image {
            if x >= n || seen[x] {
                return None;
            }
            seen[x] = true;
        }
        Some(Permutation(image))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    pub fn image(&self) -> &[usize] {
        &self.0
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&x| self.0[x]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }
}

/// A group quotient together with the map sending each element to its coset.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: FiniteGroup,
    /// `coset_of[x]` is the index of the coset containing `x`.
    pub coset_of: Vec<usize>,
    /// Smallest element of each coset, in coset-index order.
    pub representatives: Vec<usize>,
}

/// Cheap isomorphism invariants, used for bucketing and naming.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupSignature {
    pub order: usize,
    pub abelian: bool,
    /// `(element order, how many elements have it)`, ascending.
    pub order_counts: Vec<(usize, usize)>,
    pub center_size: usize,
    pub derived_length: Option<usize>,
    pub nilpotency_class: Option<usize>,
}

impl fmt::Display for GroupSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.order)?;
        f.write_str(if self.abelian { ":ab" } else { ":nab" })?;
        f.write_str(":")?;
        for (i, (o, c)) in self.order_counts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{o}^{c}")?;
        }
        write!(f, ":z{}", self.center_size)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u16>,
    inverses: Vec<u16>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("order", &self.order)
            .field("table", &self.rows())
            .finish()
    }
}

impl FiniteGroup {
    /// Validates a Cayley table and relabels its identity to index 0.
    pub fn from_rows(rows: &[Vec<usize>]) -> Result<Self, GroupError> {
        Self::from_rows_with(rows, Strategy::default())
    }

    pub fn from_rows_with(rows: &[Vec<usize>], strategy: Strategy) -> Result<Self, GroupError> {
        let n = rows.len();
        let flat = flatten(rows)?;
        let e = find_identity(n, &flat).ok_or(GroupError::NoIdentity)?;
        let flat = if e == 0 { flat } else { swap_labels(n, &flat, e) };
        Self::validate_flat(n, flat, strategy)
    }

    /// Builds a group from `f(a, b)` on `0..n`, fully validated.
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> usize) -> Result<Self, GroupError> {
        let rows: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| f(a, b)).collect()).collect();
        Self::from_rows(&rows)
    }

    /// Validates a table whose identity must already be 0.
    pub(crate) fn validate_flat(
        n: usize,
        flat: Vec<u16>,
        strategy: Strategy,
    ) -> Result<Self, GroupError> {
        if !is_identity_at(n, &flat, 0) {
            return Err(GroupError::NoIdentity);
        }
        let inverses = inverses_of(n, &flat)?;
        check_latin(n, &flat)?;
        let g = FiniteGroup {
            order: n,
            table: flat,
            inverses,
        };
        if let Some((a, b, c)) = g.associativity_witness(strategy) {
            return Err(GroupError::NotAssociative { a, b, c });
        }
        Ok(g)
    }

    /// Trusted constructor for tables known to be groups with identity 0.
    pub(crate) fn from_flat_unchecked(n: usize, flat: Vec<u16>) -> Self {
        let inverses = inverses_of(n, &flat).expect("trusted table must have inverses");
        FiniteGroup {
            order: n,
            table: flat,
            inverses,
        }
    }

    pub fn cyclic(n: usize) -> Self {
        assert!((1..=MAX_ORDER).contains(&n));
        let flat = (0..n * n).map(|i| ((i / n + i % n) % n) as u16).collect();
        Self::from_flat_unchecked(n, flat)
    }

    /// Dihedral group of order `2k`: `(s, r)` encoded as `s * k + r`.
    pub fn dihedral(k: usize) -> Self {
        assert!(k >= 1);
        let n = 2 * k;
        Self::from_fn(n, |a, b| {
            let (sa, ra) = (a / k, a % k);
            let (sb, rb) = (b / k, b % k);
            let r = if sa == 0 { (ra + rb) % k } else { (ra + k - rb) % k };
            ((sa + sb) % 2) * k + r
        })
        .expect("dihedral table is a group")
    }

    /// Direct product, first factor least significant.
    pub fn product(factors: &[&FiniteGroup]) -> Self {
        let n: usize = factors.iter().map(|g| g.order).product();
        assert!(n <= MAX_ORDER);
        let decode = |mut x: usize| {
            factors
                .iter()
                .map(|g| {
                    let d = x % g.order;
                    x /= g.order;
                    d
                })
                .collect::<Vec<_>>()
        };
        let codes: Vec<Vec<usize>> = (0..n).map(decode).collect();
        let mut flat = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let mut idx = 0;
                let mut stride = 1;
                for (k, g) in factors.iter().enumerate() {
                    idx += g.op(codes[a][k], codes[b][k]) * stride;
                    stride *= g.order;
                }
                flat.push(idx as u16);
            }
        }
        Self::from_flat_unchecked(n, flat)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn op(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a] as usize
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|a| (0..self.order).map(|b| self.op(a, b)).collect())
            .collect()
    }

    pub(crate) fn flat(&self) -> &[u16] {
        &self.table
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a + 1..self.order).all(|b| self.op(a, b) == self.op(b, a)))
    }

    /// True when the elements of `set` pairwise commute.
    pub fn commutes_on(&self, set: &ElementSet) -> bool {
        let m = set.members();
        m.iter()
            .enumerate()
            .all(|(i, &a)| m[i + 1..].iter().all(|&b| self.op(a, b) == self.op(b, a)))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.op(x, a);
            k += 1;
        }
        k
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        let mut acc = 0;
        let mut base = a;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.op(acc, base);
            }
            base = self.op(base, base);
            k >>= 1;
        }
        acc
    }

    /// `g·h·g⁻¹`.
    #[inline]
    pub fn conjugate(&self, g: usize, h: usize) -> usize {
        self.op(self.op(g, h), self.inv(g))
    }

    /// `x·y·x⁻¹·y⁻¹`.
    #[inline]
    pub fn commutator(&self, x: usize, y: usize) -> usize {
        self.op(self.op(x, y), self.op(self.inv(x), self.inv(y)))
    }

    /// Left-normed commutator `[[…[x₁, x₂], x₃], …]`.
    pub fn iterated_commutator(&self, xs: &[usize]) -> Result<usize, GroupError> {
        if xs.len() < 2 {
            return Err(GroupError::TooShort);
        }
        Ok(xs[1..]
            .iter()
            .fold(xs[0], |acc, &x| self.commutator(acc, x)))
    }

    pub fn associativity_witness(&self, strategy: Strategy) -> Option<(usize, usize, usize)> {
        let n = self.order;
        exec::find_first(strategy, 0..n, |a| {
            for b in 0..n {
                let ab = self.op(a, b);
                for c in 0..n {
                    if self.op(ab, c) != self.op(a, self.op(b, c)) {
                        return Some((a, b, c));
                    }
                }
            }
            None
        })
    }

    /// Elements reachable from 0 by right multiplication with `gens`, as a
    /// membership mask. In a finite group this is the generated subgroup.
    fn closure_mask(&self, gens: &[usize], seed: Option<&[bool]>) -> (Vec<bool>, Vec<usize>) {
        let mut seen = vec![false; self.order];
        let mut out = Vec::new();
        match seed {
            Some(mask) => {
                for (i, &m) in mask.iter().enumerate() {
                    if m {
                        seen[i] = true;
                        out.push(i);
                    }
                }
            }
            None => {
                seen[0] = true;
                out.push(0);
            }
        }
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            i += 1;
            for &g in gens {
                let y = self.op(x, g);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                }
            }
        }
        (seen, out)
    }

    /// Smallest subgroup containing `s`.
    pub fn subgroup_generate(&self, s: &ElementSet) -> ElementSet {
        let gens: Vec<usize> = s.iter().filter(|&x| x != 0 && x < self.order).collect();
        let (mask, _) = self.closure_mask(&gens, None);
        ElementSet::from_mask(&mask)
    }

    /// Checks closure under the operation and inverses.
    pub fn check_subgroup(&self, h: &ElementSet) -> Result<(), GroupError> {
        if h.members().iter().any(|&x| x >= self.order) {
            return Err(GroupError::NotASubgroup {
                reason: "element outside the carrier".into(),
            });
        }
        if !h.contains(0) {
            return Err(GroupError::NotASubgroup {
                reason: "identity missing".into(),
            });
        }
        let mask = h.mask(self.order);
        for &a in h.members() {
            if !mask[self.inv(a)] {
                return Err(GroupError::NotASubgroup {
                    reason: format!("inverse of {a} missing"),
                });
            }
            for &b in h.members() {
                if !mask[self.op(a, b)] {
                    return Err(GroupError::NotASubgroup {
                        reason: format!("product of {a} and {b} missing"),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn is_subgroup(&self, h: &ElementSet) -> bool {
        self.check_subgroup(h).is_ok()
    }

    /// First `(g, h)` with `g·h·g⁻¹ ∉ H`, trusting that `H` is a subgroup.
    pub fn normality_witness(&self, h: &ElementSet) -> Option<(usize, usize)> {
        let mask = h.mask(self.order);
        (0..self.order).find_map(|g| {
            h.iter()
                .find(|&x| !mask[self.conjugate(g, x)])
                .map(|x| (g, x))
        })
    }

    /// Normality test; `H` is trusted to be a subgroup.
    pub fn is_normal(&self, h: &ElementSet) -> bool {
        self.normality_witness(h).is_none()
    }

    /// Normality test that first verifies `H` is a subgroup.
    pub fn is_normal_checked(&self, h: &ElementSet) -> Result<bool, GroupError> {
        self.check_subgroup(h)?;
        Ok(self.is_normal(h))
    }

    /// Smallest normal subgroup containing `s`.
    pub fn normal_closure(&self, s: &ElementSet) -> ElementSet {
        let mut gens: Vec<usize> = Vec::new();
        let mut seen = vec![false; self.order];
        for x in s.iter().filter(|&x| x != 0) {
            for g in 0..self.order {
                let c = self.conjugate(g, x);
                if !seen[c] {
                    seen[c] = true;
                    gens.push(c);
                }
            }
        }
        let (mask, _) = self.closure_mask(&gens, None);
        ElementSet::from_mask(&mask)
    }

    /// Subgroup generated by `[x, y]` for `x ∈ X`, `y ∈ Y`.
    pub fn commutator_subgroup(&self, x: &ElementSet, y: &ElementSet) -> ElementSet {
        let mut seen = vec![false; self.order];
        let mut gens = Vec::new();
        for a in x.iter() {
            for b in y.iter() {
                let c = self.commutator(a, b);
                if c != 0 && !seen[c] {
                    seen[c] = true;
                    gens.push(c);
                }
            }
        }
        let (mask, _) = self.closure_mask(&gens, None);
        ElementSet::from_mask(&mask)
    }

    /// `G ⊇ G' ⊇ G'' ⊇ …`, ending at the first repeated term.
    pub fn derived_series(&self) -> Vec<ElementSet> {
        self.series(|_, h| self.commutator_subgroup(h, h))
    }

    /// Derived length; `None` when the series stalls above `{0}`.
    pub fn solvability_class(&self) -> Option<usize> {
        class_from_series(&self.derived_series())
    }

    /// `γ₁ = G`, `γₖ₊₁ = [γₖ, G]`, ending at the first repeated term.
    pub fn lower_central_series(&self) -> Vec<ElementSet> {
        self.series(|full, h| self.commutator_subgroup(h, full))
    }

    /// Nilpotency class; `None` when the lower central series stalls above `{0}`.
    pub fn nilpotency_class(&self) -> Option<usize> {
        class_from_series(&self.lower_central_series())
    }

    fn series(&self, step: impl Fn(&ElementSet, &ElementSet) -> ElementSet) -> Vec<ElementSet> {
        let full = ElementSet::full(self.order);
        let mut out = vec![full.clone()];
        // strictly decreasing chains are short, `order` iterations is a hard cap
        for _ in 0..self.order {
            let last = out.last().unwrap();
            if last.len() == 1 {
                break;
            }
            let next = step(&full, last);
            if &next == last {
                break;
            }
            out.push(next);
        }
        out
    }

    pub fn center(&self) -> ElementSet {
        (0..self.order)
            .filter(|&z| (0..self.order).all(|g| self.op(z, g) == self.op(g, z)))
            .collect()
    }

    /// Subgroup generated by all `p`-th powers.
    pub fn power_subgroup(&self, p: usize) -> ElementSet {
        let powers: ElementSet = (0..self.order).map(|g| self.pow(g, p)).collect();
        self.subgroup_generate(&powers)
    }

    /// Quotient by a normal subgroup; the coset of 0 gets index 0.
    pub fn quotient(&self, n_sub: &ElementSet) -> Result<Quotient, GroupError> {
        self.check_subgroup(n_sub)?;
        if let Some((g, h)) = self.normality_witness(n_sub) {
            return Err(GroupError::NotNormal { g, h });
        }
        let n = self.order;
        let mut coset_of = vec![usize::MAX; n];
        let mut representatives = Vec::new();
        for x in 0..n {
            if coset_of[x] != usize::MAX {
                continue;
            }
            let idx = representatives.len();
            representatives.push(x);
            for h in n_sub.iter() {
                coset_of[self.op(x, h)] = idx;
            }
        }
        let k = representatives.len();
        let mut flat = Vec::with_capacity(k * k);
        for &ra in &representatives {
            for &rb in &representatives {
                flat.push(coset_of[self.op(ra, rb)] as u16);
            }
        }
        debug_assert!((0..n).all(|a| (0..n).all(|b| {
            coset_of[self.op(a, b)] == flat[coset_of[a] * k + coset_of[b]] as usize
        })));
        Ok(Quotient {
            group: FiniteGroup::from_flat_unchecked(k, flat),
            coset_of,
            representatives,
        })
    }

    /// Greedy generating set, preferring elements of large order.
    pub fn generators(&self) -> Vec<usize> {
        let mut candidates: Vec<usize> = (1..self.order).collect();
        let orders: Vec<usize> = (0..self.order).map(|a| self.element_order(a)).collect();
        candidates.sort_by_key(|&a| (std::cmp::Reverse(orders[a]), a));
        let mut gens = Vec::new();
        let mut mask = vec![false; self.order];
        mask[0] = true;
        let mut covered = 1;
        for g in candidates {
            if covered == self.order {
                break;
            }
            if !mask[g] {
                gens.push(g);
                let (m, out) = self.closure_mask(&gens, None);
                mask = m;
                covered = out.len();
            }
        }
        gens
    }

    /// All subgroups, sorted by size then members.
    pub fn subgroups(&self) -> Vec<ElementSet> {
        let mut found: BTreeSet<ElementSet> = BTreeSet::new();
        let trivial = ElementSet::trivial();
        found.insert(trivial.clone());
        let mut queue: Vec<(ElementSet, Vec<usize>)> = vec![(trivial, Vec::new())];
        while let Some((h, gens)) = queue.pop() {
            let mask = h.mask(self.order);
            for g in (0..self.order).filter(|&g| !mask[g]) {
                let mut next_gens = gens.clone();
                next_gens.push(g);
                let (m, _) = self.closure_mask(&next_gens, None);
                let k = ElementSet::from_mask(&m);
                if found.insert(k.clone()) {
                    queue.push((k, next_gens));
                }
            }
        }
        let mut v: Vec<ElementSet> = found.into_iter().collect();
        v.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        v
    }

    /// All normal subgroups, sorted by size then members.
    pub fn normal_subgroups(&self) -> Vec<ElementSet> {
        let mut found: BTreeSet<ElementSet> = BTreeSet::new();
        found.insert(ElementSet::trivial());
        let mut seen_elem = vec![false; self.order];
        let mut atoms = Vec::new();
        for g in 1..self.order {
            if seen_elem[g] {
                continue;
            }
            let nc = self.normal_closure(&ElementSet::new([g]));
            for x in nc.iter() {
                // conjugates of g generate the same closure
                if self.normal_closure(&ElementSet::new([x])) == nc {
                    seen_elem[x] = true;
                }
            }
            if found.insert(nc.clone()) {
                atoms.push(nc);
            }
        }
        let mut frontier: Vec<ElementSet> = found.iter().cloned().collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for a in &frontier {
                for b in &atoms {
                    if b.is_subset(a) {
                        continue;
                    }
                    let j = self.subgroup_generate(&a.union(b));
                    if found.insert(j.clone()) {
                        next.push(j);
                    }
                }
            }
            frontier = next;
        }
        let mut v: Vec<ElementSet> = found.into_iter().collect();
        v.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        v
    }

    /// All automorphisms, sorted lexicographically by image (identity first).
    pub fn automorphisms(&self) -> Vec<Permutation> {
        let mut out = homomorphisms_onto(self, self);
        out.sort();
        out
    }

    /// Some isomorphism `self → other`, if one exists.
    pub fn isomorphism_to(&self, other: &FiniteGroup) -> Option<Permutation> {
        if self.order != other.order || self.signature_quick() != other.signature_quick() {
            return None;
        }
        let mut found = None;
        search_isomorphisms(self, other, &mut |p| {
            found = Some(p);
            true
        });
        found
    }

    pub fn is_isomorphic(&self, other: &FiniteGroup) -> bool {
        self.isomorphism_to(other).is_some()
    }

    /// Relabels the carrier by `perm`: element `x` becomes `perm(x)`.
    /// `perm` must fix 0.
    pub fn relabel(&self, perm: &Permutation) -> FiniteGroup {
        assert_eq!(perm.apply(0), 0);
        let n = self.order;
        let inv = perm.inverse();
        let mut flat = vec![0u16; n * n];
        for a in 0..n {
            for b in 0..n {
                flat[a * n + b] = perm.apply(self.op(inv.apply(a), inv.apply(b))) as u16;
            }
        }
        FiniteGroup::from_flat_unchecked(n, flat)
    }

    fn order_counts(&self) -> Vec<(usize, usize)> {
        let mut counts = std::collections::BTreeMap::new();
        for a in 0..self.order {
            *counts.entry(self.element_order(a)).or_insert(0usize) += 1;
        }
        counts.into_iter().collect()
    }

    fn signature_quick(&self) -> (bool, Vec<(usize, usize)>) {
        (self.is_abelian(), self.order_counts())
    }

    pub fn signature(&self) -> GroupSignature {
        GroupSignature {
            order: self.order,
            abelian: self.is_abelian(),
            order_counts: self.order_counts(),
            center_size: self.center().len(),
            derived_length: self.solvability_class(),
            nilpotency_class: self.nilpotency_class(),
        }
    }
}

fn class_from_series(series: &[ElementSet]) -> Option<usize> {
    let last = series.last()?;
    (last.len() == 1).then(|| series.len() - 1)
}

fn flatten(rows: &[Vec<usize>]) -> Result<Vec<u16>, GroupError> {
    let n = rows.len();
    if n == 0 {
        return Err(GroupError::Empty);
    }
    if n > MAX_ORDER {
        return Err(GroupError::TooLarge {
            order: n,
            max: MAX_ORDER,
        });
    }
    let mut flat = Vec::with_capacity(n * n);
    for (a, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(GroupError::NotSquare {
                row: a,
                len: row.len(),
                order: n,
            });
        }
        for (b, &v) in row.iter().enumerate() {
            if v >= n {
                return Err(GroupError::OutOfRange {
                    a,
                    b,
                    value: v,
                    order: n,
                });
            }
            flat.push(v as u16);
        }
    }
    Ok(flat)
}

fn is_identity_at(n: usize, flat: &[u16], e: usize) -> bool {
    (0..n).all(|a| flat[e * n + a] as usize == a && flat[a * n + e] as usize == a)
}

fn find_identity(n: usize, flat: &[u16]) -> Option<usize> {
    (0..n).find(|&e| is_identity_at(n, flat, e))
}

fn swap_labels(n: usize, flat: &[u16], e: usize) -> Vec<u16> {
    let sw = |x: usize| {
        if x == e {
            0
        } else if x == 0 {
            e
        } else {
            x
        }
    };
    let mut out = vec![0u16; n * n];
    for a in 0..n {
        for b in 0..n {
            out[sw(a) * n + sw(b)] = sw(flat[a * n + b] as usize) as u16;
        }
    }
    out
}

fn inverses_of(n: usize, flat: &[u16]) -> Result<Vec<u16>, GroupError> {
    (0..n)
        .map(|a| {
            (0..n)
                .find(|&b| flat[a * n + b] == 0 && flat[b * n + a] == 0)
                .map(|b| b as u16)
                .ok_or(GroupError::NoInverse { element: a })
        })
        .collect()
}

fn check_latin(n: usize, flat: &[u16]) -> Result<(), GroupError> {
    let mut seen = vec![usize::MAX; n];
    for a in 0..n {
        for b in 0..n {
            let v = flat[a * n + b] as usize;
            if seen[v] == a {
                return Err(GroupError::NotBijectiveRows {
                    line: Line::Row,
                    index: a,
                    value: v,
                });
            }
            seen[v] = a;
        }
    }
    seen.iter_mut().for_each(|s| *s = usize::MAX);
    for b in 0..n {
        for a in 0..n {
            let v = flat[a * n + b] as usize;
            if seen[v] == b {
                return Err(GroupError::NotBijectiveRows {
                    line: Line::Column,
                    index: b,
                    value: v,
                });
            }
            seen[v] = b;
        }
    }
    Ok(())
}

/// Extends an assignment of generator images to a full map by walking words
/// in the generators. Returns `None` when the extension is inconsistent or
/// not injective.
fn extend_from_generators(
    src: &FiniteGroup,
    dst: &FiniteGroup,
    gens: &[usize],
    images: &[usize],
) -> Option<Permutation> {
    let n = src.order;
    let mut map = vec![usize::MAX; n];
    let mut hit = vec![false; n];
    map[0] = 0;
    hit[0] = true;
    let mut queue = vec![0usize];
    let mut i = 0;
    while i < queue.len() {
        let x = queue[i];
        i += 1;
        for (&g, &img) in gens.iter().zip(images) {
            let y = src.op(x, g);
            let want = dst.op(map[x], img);
            if map[y] == usize::MAX {
                if hit[want] {
                    return None;
                }
                map[y] = want;
                hit[want] = true;
                queue.push(y);
            } else if map[y] != want {
                return None;
            }
        }
    }
    if queue.len() != n {
        return None;
    }
    Permutation::new(map)
}

/// Enumerates isomorphisms `src → dst`; `visit` returns `true` to stop.
fn search_isomorphisms(
    src: &FiniteGroup,
    dst: &FiniteGroup,
    visit: &mut dyn FnMut(Permutation) -> bool,
) {
    let gens = src.generators();
    let dst_orders: Vec<usize> = (0..dst.order).map(|a| dst.element_order(a)).collect();
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&g| {
            let o = src.element_order(g);
            (0..dst.order).filter(|&y| dst_orders[y] == o).collect()
        })
        .collect();
    let mut images = Vec::with_capacity(gens.len());
    fn rec(
        src: &FiniteGroup,
        dst: &FiniteGroup,
        gens: &[usize],
        candidates: &[Vec<usize>],
        images: &mut Vec<usize>,
        visit: &mut dyn FnMut(Permutation) -> bool,
    ) -> bool {
        let k = images.len();
        if k == gens.len() {
            if let Some(p) = extend_from_generators(src, dst, gens, images) {
                return visit(p);
            }
            return false;
        }
        for &y in &candidates[k] {
            if images.contains(&y) {
                continue;
            }
            images.push(y);
            let stop = rec(src, dst, gens, candidates, images, visit);
            images.pop();
            if stop {
                return true;
            }
        }
        false
    }
    rec(src, dst, &gens, &candidates, &mut images, visit);
}

fn homomorphisms_onto(src: &FiniteGroup, dst: &FiniteGroup) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    search_isomorphisms(src, dst, &mut |p| {
        if seen.insert(p.clone()) {
            out.push(p);
        }
        false
    });
    out
}
