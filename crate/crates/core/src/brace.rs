//! Skew braces on a shared carrier `0..n`.
//!
//! A [`SkewBrace`] pairs an additive group `(A, ⊕)` with a multiplicative
//! group `(A, ⊙)` such that `a⊙(b⊕c) = (a⊙b) ⊖ a ⊕ (a⊙c)` for all triples.
//! Construction always runs the full triple scan; everything else on this
//! type assumes that law holds.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::{self, Strategy};
use crate::group::{self, ElementSet, FiniteGroup, GroupError, Permutation};

/// Ideal enumeration is refused above this order.
pub const IDEAL_GUARD: usize = 32;
/// Largest carrier a direct sum may produce.
pub const DIRECT_SUM_GUARD: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum BraceError {
    #[error("additive group: {0}")]
    Additive(GroupError),
    #[error("multiplicative group: {0}")]
    Multiplicative(GroupError),
    #[error("orders differ: additive {add}, multiplicative {mul}")]
    OrderMismatch { add: usize, mul: usize },
    #[error("identities differ: additive {add}, multiplicative {mul}")]
    IdentityMismatch { add: usize, mul: usize },
    #[error("left brace law fails at (a, b, c) = ({a}, {b}, {c})")]
    LeftBraceLawFails { a: usize, b: usize, c: usize },
    #[error("term {index} of the star series is not an ideal: {reason}")]
    SeriesTermNotIdeal { index: usize, reason: IdealFailure },
    #[error("not an ideal: {0}")]
    NotAnIdeal(IdealFailure),
    #[error("quotient operation is not well defined at ({a}, {b})")]
    WellDefinednessFailure { a: usize, b: usize },
    #[error("order {order} exceeds the limit {limit} for {what}")]
    TooLarge {
        order: usize,
        limit: usize,
        what: &'static str,
    },
}

/// First clause of the ideal definition that a subset violates.
#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum IdealFailure {
    #[error("not an additive subgroup ({0})")]
    NotAdditiveSubgroup(String),
    #[error("not normal in the additive group: ⊖{g} ⊕ {h} ⊕ {g} escapes")]
    NotAdditivelyNormal { g: usize, h: usize },
    #[error("not a multiplicative subgroup ({0})")]
    NotMultiplicativeSubgroup(String),
    #[error("not normal in the multiplicative group: {g}⊙{h}⊙{g}⁻¹ escapes")]
    NotMultiplicativelyNormal { g: usize, h: usize },
    #[error("not λ-invariant: λ_{a}({x}) escapes")]
    NotLambdaInvariant { a: usize, x: usize },
}

/// Result of one universally quantified identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "witness", rename_all = "kebab-case")]
pub enum Outcome {
    Holds,
    Fails(Vec<usize>),
    NotApplicable,
}

impl Outcome {
    fn from_witness(w: Option<Vec<usize>>) -> Self {
        match w {
            Some(t) => Outcome::Fails(t),
            None => Outcome::Holds,
        }
    }

    pub fn holds(&self) -> bool {
        !matches!(self, Outcome::Fails(_))
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Holds => f.write_str("OK"),
            Outcome::Fails(w) => write!(f, "FAILS at {w:?}"),
            Outcome::NotApplicable => f.write_str("n/a"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    /// Whether a failure means the structure is broken.
    pub mandatory: bool,
    pub outcome: Outcome,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub two_sided: bool,
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    /// True when every mandatory identity holds.
    pub fn all_hold(&self) -> bool {
        self.checks
            .iter()
            .all(|c| !c.mandatory || c.outcome.holds())
    }

    pub fn get(&self, name: &str) -> Option<&Outcome> {
        self.checks.iter().find(|c| c.name == name).map(|c| &c.outcome)
    }
}

/// Names of the identities reported by [`SkewBrace::check_identities`].
pub mod identity {
    pub const LEFT_LAW: &str = "left-brace-law";
    pub const RIGHT_LAW: &str = "right-brace-law";
    pub const INVERSE: &str = "inverse-identity";
    pub const STAR_DISTRIBUTIVE: &str = "star-distributivity";
    pub const LAMBDA_AUTOMORPHISM: &str = "lambda-automorphism";
    pub const LAMBDA_HOMOMORPHISM: &str = "lambda-homomorphism";
    pub const CONJUGATION: &str = "conjugation-distributes";
    pub const STAR_COMMUTATION: &str = "star-commutation";
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BraceReport {
    pub order: usize,
    pub is_two_sided: bool,
    pub is_classical: bool,
    pub is_trivial: bool,
    pub add_solv_class: Option<usize>,
    pub mul_solv_class: Option<usize>,
    pub add_nilp_class: Option<usize>,
    pub mul_nilp_class: Option<usize>,
    pub star_series_lengths: Vec<usize>,
    /// `None` when ideal enumeration was skipped for size.
    pub ideal_count: Option<usize>,
    pub is_simple: Option<bool>,
}

/// A quotient brace with the coset map of the carrier.
#[derive(Clone, Debug)]
pub struct BraceQuotient {
    pub brace: SkewBrace,
    pub coset_of: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SkewBrace {
    add: FiniteGroup,
    mul: FiniteGroup,
}

/// First `(a, b, c)` violating `a⊙(b⊕c) = (a⊙b) ⊖ a ⊕ (a⊙c)`; `mul` is a raw
/// row-major table that need not be a group.
fn left_law_witness(
    add: &FiniteGroup,
    mul: &[u16],
    strategy: Strategy,
) -> Option<(usize, usize, usize)> {
    let n = add.order();
    let m = |a: usize, b: usize| mul[a * n + b] as usize;
    exec::find_first(strategy, 0..n, |a| {
        let na = add.inv(a);
        for b in 0..n {
            let t = add.op(m(a, b), na);
            for c in 0..n {
                if m(a, add.op(b, c)) != add.op(t, m(a, c)) {
                    return Some((a, b, c));
                }
            }
        }
        None
    })
}

impl SkewBrace {
    /// Validates the left brace law on all `n³` triples.
    pub fn new(add: FiniteGroup, mul: FiniteGroup) -> Result<Self, BraceError> {
        Self::new_with(add, mul, Strategy::default())
    }

    pub fn new_with(
        add: FiniteGroup,
        mul: FiniteGroup,
        strategy: Strategy,
    ) -> Result<Self, BraceError> {
        if add.order() != mul.order() {
            return Err(BraceError::OrderMismatch {
                add: add.order(),
                mul: mul.order(),
            });
        }
        if let Some((a, b, c)) = left_law_witness(&add, mul.flat(), strategy) {
            return Err(BraceError::LeftBraceLawFails { a, b, c });
        }
        Ok(SkewBrace { add, mul })
    }

    /// Builds a brace from raw Cayley tables.
    ///
    /// The additive table is validated first, then the left brace law is
    /// scanned on the raw multiplicative table, and only then are the
    /// multiplicative group axioms checked. A shared identity other than 0
    /// is relabelled to 0 in both tables.
    pub fn from_tables(add: &[Vec<usize>], mul: &[Vec<usize>]) -> Result<Self, BraceError> {
        Self::from_tables_with(add, mul, Strategy::default())
    }

    pub fn from_tables_with(
        add: &[Vec<usize>],
        mul: &[Vec<usize>],
        strategy: Strategy,
    ) -> Result<Self, BraceError> {
        if add.len() != mul.len() {
            return Err(BraceError::OrderMismatch {
                add: add.len(),
                mul: mul.len(),
            });
        }
        let add_flat = raw_flatten(add).map_err(BraceError::Additive)?;
        let mul_flat = raw_flatten(mul).map_err(BraceError::Multiplicative)?;
        let n = add.len();
        let e_add = raw_identity(n, &add_flat).ok_or(BraceError::Additive(GroupError::NoIdentity))?;
        if let Some(e_mul) = raw_identity(n, &mul_flat) {
            if e_mul != e_add {
                return Err(BraceError::IdentityMismatch {
                    add: e_add,
                    mul: e_mul,
                });
            }
        }
        let (add_flat, mul_flat) = if e_add == 0 {
            (add_flat, mul_flat)
        } else {
            (swap_zero(n, &add_flat, e_add), swap_zero(n, &mul_flat, e_add))
        };
        let add = FiniteGroup::validate_flat(n, add_flat, strategy).map_err(BraceError::Additive)?;
        if let Some((a, b, c)) = left_law_witness(&add, &mul_flat, strategy) {
            return Err(BraceError::LeftBraceLawFails { a, b, c });
        }
        let mul =
            FiniteGroup::validate_flat(n, mul_flat, strategy).map_err(BraceError::Multiplicative)?;
        Ok(SkewBrace { add, mul })
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.add.order()
    }

    pub fn additive(&self) -> &FiniteGroup {
        &self.add
    }

    pub fn multiplicative(&self) -> &FiniteGroup {
        &self.mul
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add.op(a, b)
    }

    /// `⊖a`.
    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.add.inv(a)
    }

    /// `a ⊖ b`.
    #[inline]
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add.op(a, self.add.inv(b))
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul.op(a, b)
    }

    /// `a⁻¹` in the multiplicative group.
    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.mul.inv(a)
    }

    /// `λ_a(x) = ⊖a ⊕ (a⊙x)`.
    #[inline]
    pub fn lambda_apply(&self, a: usize, x: usize) -> usize {
        self.add(self.neg(a), self.mul(a, x))
    }

    pub fn lambda(&self, a: usize) -> Permutation {
        Permutation::new((0..self.order()).map(|x| self.lambda_apply(a, x)).collect())
            .expect("λ_a is a bijection in a skew brace")
    }

    /// `a * b = ⊖a ⊕ (a⊙b) ⊖ b`.
    #[inline]
    pub fn star(&self, a: usize, b: usize) -> usize {
        self.sub(self.lambda_apply(a, b), b)
    }

    /// Additive subgroup generated by `x * y` for `x ∈ X`, `y ∈ Y`.
    pub fn star_span(&self, x: &ElementSet, y: &ElementSet) -> ElementSet {
        let n = self.order();
        let mut seen = vec![false; n];
        for a in x.iter().filter(|&a| a < n) {
            for b in y.iter().filter(|&b| b < n) {
                seen[self.star(a, b)] = true;
            }
        }
        self.add.subgroup_generate(&ElementSet::from_mask(&seen))
    }

    pub fn is_trivial(&self) -> bool {
        self.add.flat() == self.mul.flat()
    }

    pub fn is_classical(&self) -> bool {
        self.add.is_abelian()
    }

    /// First `(a, b, c)` violating `(a⊕b)⊙c = (a⊙c) ⊖ c ⊕ (b⊙c)`.
    pub fn two_sided_witness(&self, strategy: Strategy) -> Option<(usize, usize, usize)> {
        let n = self.order();
        exec::find_first(strategy, 0..n, |a| {
            for b in 0..n {
                let s = self.add(a, b);
                for c in 0..n {
                    let rhs = self.add(self.sub(self.mul(a, c), c), self.mul(b, c));
                    if self.mul(s, c) != rhs {
                        return Some((a, b, c));
                    }
                }
            }
            None
        })
    }

    pub fn is_two_sided(&self) -> bool {
        self.two_sided_witness(Strategy::default()).is_none()
    }

    /// `λ_a` evaluated everywhere, row-major in `a`.
    fn lambda_table(&self) -> Vec<u16> {
        let n = self.order();
        let mut t = Vec::with_capacity(n * n);
        for a in 0..n {
            for x in 0..n {
                t.push(self.lambda_apply(a, x) as u16);
            }
        }
        t
    }

    /// First `(a, b, x)` with `λ_{a⊙b}(x) ≠ λ_a(λ_b(x))`.
    pub fn lambda_homomorphism_witness(&self, strategy: Strategy) -> Option<(usize, usize, usize)> {
        let n = self.order();
        let lam = self.lambda_table();
        let l = |a: usize, x: usize| lam[a * n + x] as usize;
        exec::find_first(strategy, 0..n, |a| {
            for b in 0..n {
                let ab = self.mul(a, b);
                for x in 0..n {
                    if l(ab, x) != l(a, l(b, x)) {
                        return Some((a, b, x));
                    }
                }
            }
            None
        })
    }

    pub fn check_lambda_homomorphism(&self) -> bool {
        self.lambda_homomorphism_witness(Strategy::default()).is_none()
    }

    /// First `(a, x, y)` with `λ_a(x⊕y) ≠ λ_a(x) ⊕ λ_a(y)`.
    pub fn lambda_automorphism_witness(&self, strategy: Strategy) -> Option<(usize, usize, usize)> {
        let n = self.order();
        let lam = self.lambda_table();
        let l = |a: usize, x: usize| lam[a * n + x] as usize;
        exec::find_first(strategy, 0..n, |a| {
            for x in 0..n {
                for y in 0..n {
                    if l(a, self.add(x, y)) != self.add(l(a, x), l(a, y)) {
                        return Some((a, x, y));
                    }
                }
            }
            None
        })
    }

    /// Checks the ideal clauses in order: additive normal subgroup,
    /// multiplicative normal subgroup, λ-invariance.
    pub fn ideal_check(&self, ideal: &ElementSet) -> Result<(), IdealFailure> {
        self.add
            .check_subgroup(ideal)
            .map_err(|e| IdealFailure::NotAdditiveSubgroup(reason_of(e)))?;
        if let Some((g, h)) = self.add.normality_witness(ideal) {
            return Err(IdealFailure::NotAdditivelyNormal { g, h });
        }
        self.mul
            .check_subgroup(ideal)
            .map_err(|e| IdealFailure::NotMultiplicativeSubgroup(reason_of(e)))?;
        if let Some((g, h)) = self.mul.normality_witness(ideal) {
            return Err(IdealFailure::NotMultiplicativelyNormal { g, h });
        }
        let mask = ideal.mask(self.order());
        for a in 0..self.order() {
            for x in ideal.iter() {
                if !mask[self.lambda_apply(a, x)] {
                    return Err(IdealFailure::NotLambdaInvariant { a, x });
                }
            }
        }
        Ok(())
    }

    pub fn is_ideal(&self, ideal: &ElementSet) -> bool {
        self.ideal_check(ideal).is_ok()
    }

    /// `A⁽¹⁾ = A`, `A⁽ᵏ⁺¹⁾ = A⁽ᵏ⁾ * A`, until the terms stop shrinking.
    /// Every term is checked to be an ideal.
    pub fn star_series(&self) -> Result<Vec<ElementSet>, BraceError> {
        let n = self.order();
        let full = ElementSet::full(n);
        let mut series = vec![full.clone()];
        for _ in 0..n {
            let last = series.last().unwrap();
            if last.len() == 1 {
                break;
            }
            let next = self.star_span(last, &full);
            if &next == last {
                break;
            }
            series.push(next);
        }
        for (index, term) in series.iter().enumerate() {
            if let Err(reason) = self.ideal_check(term) {
                return Err(BraceError::SeriesTermNotIdeal {
                    index: index + 1,
                    reason,
                });
            }
        }
        Ok(series)
    }

    /// All ideals, sorted by size. Refused above [`IDEAL_GUARD`].
    pub fn all_ideals(&self) -> Result<Vec<ElementSet>, BraceError> {
        let n = self.order();
        if n > IDEAL_GUARD {
            return Err(BraceError::TooLarge {
                order: n,
                limit: IDEAL_GUARD,
                what: "ideal enumeration",
            });
        }
        // ideals are additively normal, so the normal subgroups are a complete pool
        Ok(self
            .add
            .normal_subgroups()
            .into_iter()
            .filter(|s| self.is_ideal(s))
            .collect())
    }

    /// Nontrivial with `{0}` and `A` as its only ideals.
    pub fn is_simple(&self) -> Result<bool, BraceError> {
        Ok(self.order() > 1 && self.all_ideals()?.len() == 2)
    }

    pub fn quotient(&self, ideal: &ElementSet) -> Result<BraceQuotient, BraceError> {
        self.ideal_check(ideal).map_err(BraceError::NotAnIdeal)?;
        let q = self
            .add
            .quotient(ideal)
            .map_err(|e| BraceError::NotAnIdeal(IdealFailure::NotAdditiveSubgroup(reason_of(e))))?;
        let k = q.representatives.len();
        let mut mul_flat = Vec::with_capacity(k * k);
        for &ra in &q.representatives {
            for &rb in &q.representatives {
                mul_flat.push(q.coset_of[self.mul(ra, rb)] as u16);
            }
        }
        let n = self.order();
        for a in 0..n {
            for b in 0..n {
                let want = mul_flat[q.coset_of[a] * k + q.coset_of[b]] as usize;
                if q.coset_of[self.mul(a, b)] != want {
                    return Err(BraceError::WellDefinednessFailure { a, b });
                }
            }
        }
        let mul = FiniteGroup::validate_flat(k, mul_flat, Strategy::default())
            .map_err(BraceError::Multiplicative)?;
        let brace = SkewBrace::new(q.group, mul)?;
        Ok(BraceQuotient {
            brace,
            coset_of: q.coset_of,
        })
    }

    /// `(A * Z) ⊕ (Z * A)` for `Z` the multiplicative centre, formed as the
    /// additive span of the union.
    pub fn center_star_ideal(&self) -> ElementSet {
        let full = ElementSet::full(self.order());
        let z = self.mul.center();
        let left = self.star_span(&full, &z);
        let right = self.star_span(&z, &full);
        self.add.subgroup_generate(&left.union(&right))
    }

    /// The set `{z ⊕ i : z ∈ Z(A_⊙), i ∈ I}` for `I` the centre star ideal.
    pub fn center_extension(&self) -> ElementSet {
        let z = self.mul.center();
        let i = self.center_star_ideal();
        z.iter()
            .flat_map(|a| i.iter().map(move |b| (a, b)))
            .map(|(a, b)| self.add(a, b))
            .collect()
    }

    /// First `(a, b, c)` violating `c⁻¹⊙(a⊕b)⊙c = (c⁻¹⊙a⊙c) ⊕ (c⁻¹⊙b⊙c)`.
    pub fn conjugation_witness(&self, strategy: Strategy) -> Option<(usize, usize, usize)> {
        let n = self.order();
        let conj = |c: usize, x: usize| self.mul(self.mul(self.inv(c), x), c);
        exec::find_first(strategy, 0..n, |a| {
            for b in 0..n {
                let s = self.add(a, b);
                for c in 0..n {
                    if conj(c, s) != self.add(conj(c, a), conj(c, b)) {
                        return Some((a, b, c));
                    }
                }
            }
            None
        })
    }

    /// First `(a, b, c, d)` where `⊖c ⊕ (b⊙c) ⊖ b` and `a * d` fail to
    /// commute additively. Each side is deduplicated by value first, which
    /// leaves the quantifier unchanged.
    pub fn star_commutation_witness(&self) -> Option<(usize, usize, usize, usize)> {
        let n = self.order();
        let mut left: HashMap<usize, (usize, usize)> = HashMap::new();
        let mut right: HashMap<usize, (usize, usize)> = HashMap::new();
        for b in 0..n {
            for c in 0..n {
                let v = self.sub(self.add(self.neg(c), self.mul(b, c)), b);
                left.entry(v).or_insert((b, c));
            }
        }
        for a in 0..n {
            for d in 0..n {
                right.entry(self.star(a, d)).or_insert((a, d));
            }
        }
        let mut lv: Vec<_> = left.into_iter().collect();
        let mut rv: Vec<_> = right.into_iter().collect();
        lv.sort_by_key(|&(_, w)| w);
        rv.sort_by_key(|&(_, w)| w);
        for &(u, (b, c)) in &lv {
            for &(v, (a, d)) in &rv {
                if self.add(u, v) != self.add(v, u) {
                    return Some((a, b, c, d));
                }
            }
        }
        None
    }

    /// Scans every identity that holds in all skew braces, plus the ones
    /// that hold in two-sided braces when this brace is two-sided.
    pub fn check_identities(&self) -> IdentityReport {
        self.check_identities_with(Strategy::default())
    }

    pub fn check_identities_with(&self, strategy: Strategy) -> IdentityReport {
        use identity::*;
        let n = self.order();
        let triple = |w: Option<(usize, usize, usize)>| w.map(|(a, b, c)| vec![a, b, c]);

        let left = triple(left_law_witness(&self.add, self.mul.flat(), strategy));
        let right = triple(self.two_sided_witness(strategy));
        let two_sided = right.is_none();

        let inverse = triple(exec::find_first(strategy, 0..n, |a| {
            for b in 0..n {
                let t = self.sub(a, self.mul(a, b));
                for c in 0..n {
                    let lhs = self.mul(a, self.add(self.neg(b), c));
                    if lhs != self.add(t, self.mul(a, c)) {
                        return Some((a, b, c));
                    }
                }
            }
            None
        }));
        let distributive = triple(exec::find_first(strategy, 0..n, |a| {
            for b in 0..n {
                let ab = self.star(a, b);
                for c in 0..n {
                    let lhs = self.star(a, self.add(b, c));
                    let rhs = self.sub(self.add(self.add(ab, b), self.star(a, c)), b);
                    if lhs != rhs {
                        return Some((a, b, c));
                    }
                }
            }
            None
        }));
        let automorphism = triple(self.lambda_automorphism_witness(strategy));
        let homomorphism = triple(self.lambda_homomorphism_witness(strategy));

        let (conjugation, commutation) = if two_sided {
            (
                Outcome::from_witness(triple(self.conjugation_witness(strategy))),
                Outcome::from_witness(
                    self.star_commutation_witness()
                        .map(|(a, b, c, d)| vec![a, b, c, d]),
                ),
            )
        } else {
            (Outcome::NotApplicable, Outcome::NotApplicable)
        };

        let check = |name: &str, mandatory: bool, outcome: Outcome| IdentityCheck {
            name: name.to_string(),
            mandatory,
            outcome,
        };
        IdentityReport {
            two_sided,
            checks: vec![
                check(LEFT_LAW, true, Outcome::from_witness(left)),
                check(RIGHT_LAW, false, Outcome::from_witness(right)),
                check(INVERSE, true, Outcome::from_witness(inverse)),
                check(STAR_DISTRIBUTIVE, true, Outcome::from_witness(distributive)),
                check(LAMBDA_AUTOMORPHISM, true, Outcome::from_witness(automorphism)),
                check(LAMBDA_HOMOMORPHISM, true, Outcome::from_witness(homomorphism)),
                check(CONJUGATION, two_sided, conjugation),
                check(STAR_COMMUTATION, two_sided, commutation),
            ],
        }
    }

    /// Componentwise brace on the product carrier, first summand least
    /// significant in the index encoding.
    pub fn direct_sum(summands: &[&SkewBrace]) -> Result<SkewBrace, BraceError> {
        let order = summands
            .iter()
            .try_fold(1usize, |acc, b| acc.checked_mul(b.order()))
            .unwrap_or(usize::MAX);
        if order > DIRECT_SUM_GUARD {
            return Err(BraceError::TooLarge {
                order,
                limit: DIRECT_SUM_GUARD,
                what: "direct sum",
            });
        }
        let adds: Vec<&FiniteGroup> = summands.iter().map(|b| &b.add).collect();
        let muls: Vec<&FiniteGroup> = summands.iter().map(|b| &b.mul).collect();
        SkewBrace::new(FiniteGroup::product(&adds), FiniteGroup::product(&muls))
    }

    pub fn report(&self) -> BraceReport {
        let n = self.order();
        let series = self
            .star_series()
            .expect("star series terms are ideals in every skew brace");
        let ideals = (n <= IDEAL_GUARD).then(|| self.all_ideals().expect("guarded"));
        BraceReport {
            order: n,
            is_two_sided: self.is_two_sided(),
            is_classical: self.is_classical(),
            is_trivial: self.is_trivial(),
            add_solv_class: self.add.solvability_class(),
            mul_solv_class: self.mul.solvability_class(),
            add_nilp_class: self.add.nilpotency_class(),
            mul_nilp_class: self.mul.nilpotency_class(),
            star_series_lengths: series.iter().map(ElementSet::len).collect(),
            ideal_count: ideals.as_ref().map(Vec::len),
            is_simple: ideals.as_ref().map(|v| n > 1 && v.len() == 2),
        }
    }

    pub fn add_rows(&self) -> Vec<Vec<usize>> {
        self.add.rows()
    }

    pub fn mul_rows(&self) -> Vec<Vec<usize>> {
        self.mul.rows()
    }
}

fn reason_of(e: GroupError) -> String {
    match e {
        GroupError::NotASubgroup { reason } => reason,
        other => other.to_string(),
    }
}

fn raw_flatten(rows: &[Vec<usize>]) -> Result<Vec<u16>, GroupError> {
    let n = rows.len();
    if n == 0 {
        return Err(GroupError::Empty);
    }
    if n > group::MAX_ORDER {
        return Err(GroupError::TooLarge {
            order: n,
            max: group::MAX_ORDER,
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
        for (b, &value) in row.iter().enumerate() {
            if value >= n {
                return Err(GroupError::OutOfRange {
                    a,
                    b,
                    value,
                    order: n,
                });
            }
            flat.push(value as u16);
        }
    }
    Ok(flat)
}

fn raw_identity(n: usize, flat: &[u16]) -> Option<usize> {
    (0..n).find(|&e| (0..n).all(|x| flat[e * n + x] as usize == x && flat[x * n + e] as usize == x))
}

fn swap_zero(n: usize, flat: &[u16], e: usize) -> Vec<u16> {
    let sw = |x: usize| match x {
        0 => e,
        x if x == e => 0,
        x => x,
    };
    let mut out = vec![0u16; n * n];
    for a in 0..n {
        for b in 0..n {
            out[sw(a) * n + sw(b)] = sw(flat[a * n + b] as usize) as u16;
        }
    }
    out
}
