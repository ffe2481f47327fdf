//! Explicit skew braces over finite coefficient rings.
//!
//! * [`example1`]: `a ⊕ b = a + (−1)^a b`, `a ⊙ b = a + b` on `Z/2m`.
//! * [`example2`]: strictly upper triangular matrices over `Z/m` with
//!   `A ⊕ B = A + B` and `A ⊙ B = (I + A)(I + B) − I`.
//! * [`example3`]: pairs `(A, a)` with `A` strictly upper triangular over
//!   `Z/m` and `a` diagonal with entries `±1`, multiplied as the triangular
//!   matrices `(I + A)a`.
//!
//! Every constructor goes through [`SkewBrace::new`], so the left brace law
//! is scanned on every instance.

use thiserror::Error;

use crate::brace::{BraceError, SkewBrace};
use crate::group::{FiniteGroup, GroupError};

/// Largest order any constructor will build.
pub const ORDER_GUARD: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("order {order} exceeds the construction limit {limit}")]
    TooLarge { order: u128, limit: usize },
    #[error("modulus {modulus} is too small (need at least {min})")]
    BadModulus { modulus: usize, min: usize },
    #[error("matrix degree {degree} is too small (need at least 2)")]
    BadDegree { degree: usize },
    #[error("parameter must be at least 1, got {0}")]
    BadParameter(usize),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Brace(#[from] BraceError),
}

fn guarded_order(order: u128) -> Result<usize, ConstructionError> {
    if order > ORDER_GUARD as u128 {
        return Err(ConstructionError::TooLarge {
            order,
            limit: ORDER_GUARD,
        });
    }
    Ok(order as usize)
}

/// Index codec for strictly upper triangular `n × n` matrices over `Z/m`.
///
/// Entries are listed row-major over positions `(i, j)` with `i < j`; the
/// first position is the most significant base-`m` digit of the index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpperTriangularCarrier {
    degree: usize,
    modulus: usize,
    positions: Vec<(usize, usize)>,
    size: usize,
}

impl UpperTriangularCarrier {
    pub fn new(degree: usize, modulus: usize) -> Result<Self, ConstructionError> {
        if degree < 2 {
            return Err(ConstructionError::BadDegree { degree });
        }
        if modulus < 2 {
            return Err(ConstructionError::BadModulus { modulus, min: 2 });
        }
        let positions: Vec<(usize, usize)> = (0..degree)
            .flat_map(|i| (i + 1..degree).map(move |j| (i, j)))
            .collect();
        let size = (modulus as u128)
            .checked_pow(positions.len() as u32)
            .unwrap_or(u128::MAX);
        let size = guarded_order(size)?;
        Ok(UpperTriangularCarrier {
            degree,
            modulus,
            positions,
            size,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    /// Number of matrices, `m^(n(n−1)/2)`.
    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    /// Positions `(i, j)`, `i < j`, in entry order.
    pub fn positions(&self) -> &[(usize, usize)] {
        &self.positions
    }

    pub fn encode(&self, entries: &[usize]) -> usize {
        assert_eq!(entries.len(), self.positions.len());
        entries
            .iter()
            .fold(0, |acc, &e| acc * self.modulus + e % self.modulus)
    }

    pub fn decode(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.positions.len()];
        for slot in out.iter_mut().rev() {
            *slot = index % self.modulus;
            index /= self.modulus;
        }
        out
    }

    fn slot(&self, i: usize, j: usize) -> usize {
        // row-major offset of (i, j) among strictly upper positions
        i * self.degree - i * (i + 1) / 2 + (j - i - 1)
    }

    fn add(&self, a: &[usize], b: &[usize]) -> Vec<usize> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.modulus).collect()
    }

    /// `AB` for strictly upper triangular `A`, `B`.
    fn product(&self, a: &[usize], b: &[usize]) -> Vec<usize> {
        self.positions
            .iter()
            .map(|&(i, j)| {
                (i + 1..j)
                    .map(|k| a[self.slot(i, k)] * b[self.slot(k, j)])
                    .sum::<usize>()
                    % self.modulus
            })
            .collect()
    }

    /// `D B D` for `D` diagonal with `signs[i] = true` meaning `−1`.
    fn conjugate_by_signs(&self, b: &[usize], signs: &[bool]) -> Vec<usize> {
        self.positions
            .iter()
            .zip(b)
            .map(|(&(i, j), &x)| {
                if signs[i] != signs[j] {
                    (self.modulus - x) % self.modulus
                } else {
                    x
                }
            })
            .collect()
    }
}

/// Index codec for pairs `(A, a)`: `A` strictly upper triangular over `Z/m`,
/// `a` diagonal with `±1` entries.
///
/// The index is `sign_word · m^(n(n−1)/2) + index(A)`, where bit `i` of
/// `sign_word` is set when the `i`-th diagonal entry is `−1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangularCarrier {
    upper: UpperTriangularCarrier,
    size: usize,
}

impl TriangularCarrier {
    pub fn new(degree: usize, modulus: usize) -> Result<Self, ConstructionError> {
        if degree < 2 {
            return Err(ConstructionError::BadDegree { degree });
        }
        if modulus < 3 {
            return Err(ConstructionError::BadModulus { modulus, min: 3 });
        }
        let k = (degree * (degree - 1) / 2) as u32;
        let size = (modulus as u128)
            .checked_pow(k)
            .and_then(|s| s.checked_mul(1u128 << degree.min(127)))
            .unwrap_or(u128::MAX);
        let size = guarded_order(size)?;
        let upper = UpperTriangularCarrier::new(degree, modulus)?;
        Ok(TriangularCarrier { upper, size })
    }

    pub fn upper(&self) -> &UpperTriangularCarrier {
        &self.upper
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn encode(&self, entries: &[usize], signs: &[bool]) -> usize {
        assert_eq!(signs.len(), self.upper.degree);
        let word = signs
            .iter()
            .enumerate()
            .fold(0usize, |acc, (i, &s)| acc | (usize::from(s) << i));
        word * self.upper.len() + self.upper.encode(entries)
    }

    pub fn decode(&self, index: usize) -> (Vec<usize>, Vec<bool>) {
        let word = index / self.upper.len();
        let entries = self.upper.decode(index % self.upper.len());
        let signs = (0..self.upper.degree).map(|i| word >> i & 1 == 1).collect();
        (entries, signs)
    }
}

/// `Z/2m` with `a ⊕ b = a + (−1)^a b` and `a ⊙ b = a + b`.
pub fn example1(m: usize) -> Result<SkewBrace, ConstructionError> {
    if m == 0 {
        return Err(ConstructionError::BadParameter(m));
    }
    let n = guarded_order(2 * m as u128)?;
    let add = FiniteGroup::from_fn(n, |a, b| {
        if a % 2 == 0 {
            (a + b) % n
        } else {
            (a + n - b) % n
        }
    })?;
    Ok(SkewBrace::new(add, FiniteGroup::cyclic(n))?)
}

/// Strictly upper triangular `n × n` matrices over `Z/m` with
/// `A ⊙ B = A + B + AB`.
pub fn example2(degree: usize, modulus: usize) -> Result<SkewBrace, ConstructionError> {
    let carrier = UpperTriangularCarrier::new(degree, modulus)?;
    let size = carrier.len();
    let elems: Vec<Vec<usize>> = (0..size).map(|i| carrier.decode(i)).collect();
    let add = FiniteGroup::from_fn(size, |a, b| carrier.encode(&carrier.add(&elems[a], &elems[b])))?;
    let mul = FiniteGroup::from_fn(size, |a, b| {
        let (x, y) = (&elems[a], &elems[b]);
        let sum = carrier.add(x, y);
        carrier.encode(&carrier.add(&sum, &carrier.product(x, y)))
    })?;
    Ok(SkewBrace::new(add, mul)?)
}

/// Pairs `(A, a)` with `(A, a) ⊕ (B, b) = (A + B, ab)` and
/// `(A, a) ⊙ (B, b) = ((I + A) a (I + B) a⁻¹ − I, ab)`.
pub fn example3(degree: usize, modulus: usize) -> Result<SkewBrace, ConstructionError> {
    let carrier = TriangularCarrier::new(degree, modulus)?;
    let upper = carrier.upper();
    let size = carrier.len();
    let elems: Vec<(Vec<usize>, Vec<bool>)> = (0..size).map(|i| carrier.decode(i)).collect();
    let xor = |s: &[bool], t: &[bool]| s.iter().zip(t).map(|(x, y)| x ^ y).collect::<Vec<_>>();
    let add = FiniteGroup::from_fn(size, |a, b| {
        let ((x, s), (y, t)) = (&elems[a], &elems[b]);
        carrier.encode(&upper.add(x, y), &xor(s, t))
    })?;
    let mul = FiniteGroup::from_fn(size, |a, b| {
        let ((x, s), (y, t)) = (&elems[a], &elems[b]);
        let twisted = upper.conjugate_by_signs(y, s);
        let sum = upper.add(x, &twisted);
        let entries = upper.add(&sum, &upper.product(x, &twisted));
        carrier.encode(&entries, &xor(s, t))
    })?;
    Ok(SkewBrace::new(add, mul)?)
}

/// The brace with both operations equal to the group law of `group`.
pub fn trivial_brace(group: &FiniteGroup) -> SkewBrace {
    SkewBrace::new(group.clone(), group.clone()).expect("a group is always a trivial brace")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::ElementSet;
    use proptest::prelude::*;

    #[test]
    fn example1_small_cases() {
        let b = example1(1).unwrap();
        assert_eq!(b.order(), 2);
        assert_eq!(b.add(1, 1), 0);

        let b = example1(3).unwrap();
        assert_eq!(b.order(), 6);
        assert_eq!(b.add(1, 2), 5);
        assert_eq!(b.add(2, 1), 3);
        assert!(!b.additive().is_abelian());
        assert_eq!(b.multiplicative().element_order(1), 6);
        assert_eq!(b.mul(1, 1), 2);
        assert!(!b.is_trivial());
        assert_eq!(example1(0).unwrap_err(), ConstructionError::BadParameter(0));
    }

    #[test]
    fn example2_degree_two_is_trivial() {
        for m in 2..=5 {
            let b = example2(2, m).unwrap();
            assert_eq!(b.order(), m);
            assert!(b.is_trivial());
            assert!(b.additive().is_isomorphic(&FiniteGroup::cyclic(m)));
        }
    }

    #[test]
    fn heisenberg_brace() {
        let c = UpperTriangularCarrier::new(3, 2).unwrap();
        let b = example2(3, 2).unwrap();
        assert_eq!(b.order(), 8);
        assert!(b.additive().is_abelian());
        assert!(!b.multiplicative().is_abelian());
        assert_eq!(b.multiplicative().nilpotency_class(), Some(2));
        assert!(b.is_two_sided());
        assert!(!b.is_trivial());

        // entries are (a12, a13, a23)
        let a = c.encode(&[1, 0, 0]);
        let x = c.encode(&[0, 0, 1]);
        assert_eq!(c.decode(b.lambda_apply(a, x)), vec![0, 1, 1]);
        assert_eq!(c.decode(b.star(a, x)), vec![0, 1, 0]);

        let axis = ElementSet::new([0, c.encode(&[0, 1, 0])]);
        let full = ElementSet::full(8);
        assert_eq!(b.star_span(&full, &full), axis);
        assert_eq!(
            b.star_series().unwrap(),
            vec![full.clone(), axis.clone(), ElementSet::trivial()]
        );
        assert_eq!(b.multiplicative().center(), axis);
        assert_eq!(b.multiplicative().lower_central_series()[1], axis);

        let q = b.quotient(&axis).unwrap();
        assert_eq!(q.brace.order(), 4);
        assert!(q.brace.is_trivial());
        assert!(b.all_ideals().unwrap().contains(&axis));
        assert!(!b.is_simple().unwrap());
    }

    #[test]
    fn example3_small_case() {
        let c = TriangularCarrier::new(2, 3).unwrap();
        let b = example3(2, 3).unwrap();
        assert_eq!(b.order(), 12);
        assert_eq!(c.decode(0), (vec![0], vec![false, false]));
        assert!(b.additive().is_abelian());
        assert!(!b.multiplicative().is_abelian());
        let e12 = c.encode(&[1], &[false, false]);
        let d = c.encode(&[0], &[true, false]);
        assert_eq!(c.decode(b.mul(e12, d)), (vec![1], vec![true, false]));
        assert_eq!(c.decode(b.mul(d, e12)), (vec![2], vec![true, false]));
        assert_eq!(
            example3(2, 2).unwrap_err(),
            ConstructionError::BadModulus { modulus: 2, min: 3 }
        );
    }

    #[test]
    fn guards() {
        assert!(matches!(example2(6, 2), Err(ConstructionError::TooLarge { .. })));
        assert!(matches!(example3(4, 3), Err(ConstructionError::TooLarge { .. })));
        assert_eq!(
            example2(1, 2).unwrap_err(),
            ConstructionError::BadDegree { degree: 1 }
        );
        assert!(matches!(example1(5000), Err(ConstructionError::TooLarge { .. })));
    }

    #[test]
    fn trivial_braces() {
        let b = trivial_brace(&FiniteGroup::cyclic(1));
        assert_eq!(b.order(), 1);
        let s3 = trivial_brace(&FiniteGroup::dihedral(3));
        assert!(s3.is_trivial());
        assert!(s3.is_two_sided());
        assert!(trivial_brace(&FiniteGroup::cyclic(7)).is_simple().unwrap());
    }

    proptest! {
        #[test]
        fn upper_codec_round_trips(degree in 2usize..5, modulus in 2usize..5, seed in any::<usize>()) {
            if let Ok(c) = UpperTriangularCarrier::new(degree, modulus) {
                let i = seed % c.len();
                prop_assert_eq!(c.encode(&c.decode(i)), i);
            }
        }

        #[test]
        fn triangular_codec_round_trips(degree in 2usize..4, modulus in 3usize..6, seed in any::<usize>()) {
            if let Ok(c) = TriangularCarrier::new(degree, modulus) {
                let i = seed % c.len();
                let (e, s) = c.decode(i);
                prop_assert_eq!(c.encode(&e, &s), i);
            }
        }
    }
}
