//! Set-theoretic Yang–Baxter solutions built from skew braces.
//!
//! For a brace `A` the map is
//! `r(x, y) = (σ, σ⁻¹ ⊙ x ⊙ y)` with `σ = ⊖x ⊕ (x ⊙ y)`, tabulated on all
//! `n²` pairs.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::brace::SkewBrace;
use crate::exec::{self, Strategy};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum YbeError {
    #[error("r is not a bijection of pairs: ({x1}, {y1}) and ({x2}, {y2}) collide")]
    NotBijective {
        x1: usize,
        y1: usize,
        x2: usize,
        y2: usize,
    },
    #[error("malformed solution table: {0}")]
    Malformed(String),
}

/// `r : X × X → X × X` stored as two `n × n` tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YbeMap {
    n: usize,
    sigma: Vec<u16>,
    tau: Vec<u16>,
}

/// Which coordinate map failed to be a bijection.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Degeneracy {
    /// `σ(x, ·)` is not a bijection for this `x`.
    Sigma(usize),
    /// `τ(·, y)` is not a bijection for this `y`.
    Tau(usize),
}

/// Serialized form of a [`YbeMap`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct YbeDocument {
    pub format_version: String,
    pub kind: String,
    pub n: usize,
    pub sigma: Vec<Vec<usize>>,
    pub tau: Vec<Vec<usize>>,
}

impl YbeMap {
    /// Tabulates `r` for `brace` and checks it is a bijection of pairs.
    pub fn from_brace(brace: &SkewBrace) -> Result<Self, YbeError> {
        let n = brace.order();
        let mut sigma = Vec::with_capacity(n * n);
        let mut tau = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                let s = brace.lambda_apply(x, y);
                let t = brace.mul(brace.inv(s), brace.mul(x, y));
                sigma.push(s as u16);
                tau.push(t as u16);
            }
        }
        let map = YbeMap { n, sigma, tau };
        map.bijectivity_witness().map_or(Ok(()), Err)?;
        Ok(map)
    }

    /// Tabulates an arbitrary map `(x, y) ↦ f(x, y)`, without checks.
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> (usize, usize)) -> Self {
        let mut sigma = Vec::with_capacity(n * n);
        let mut tau = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                let (s, t) = f(x, y);
                assert!(s < n && t < n);
                sigma.push(s as u16);
                tau.push(t as u16);
            }
        }
        YbeMap { n, sigma, tau }
    }

    /// The flip `(x, y) ↦ (y, x)`.
    pub fn swap(n: usize) -> Self {
        Self::from_fn(n, |x, y| (y, x))
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn apply(&self, x: usize, y: usize) -> (usize, usize) {
        let i = x * self.n + y;
        (self.sigma[i] as usize, self.tau[i] as usize)
    }

    fn bijectivity_witness(&self) -> Option<YbeError> {
        let n = self.n;
        let mut preimage = vec![usize::MAX; n * n];
        for x in 0..n {
            for y in 0..n {
                let (s, t) = self.apply(x, y);
                let slot = &mut preimage[s * n + t];
                if *slot != usize::MAX {
                    return Some(YbeError::NotBijective {
                        x1: *slot / n,
                        y1: *slot % n,
                        x2: x,
                        y2: y,
                    });
                }
                *slot = x * n + y;
            }
        }
        None
    }

    pub fn is_bijective(&self) -> bool {
        self.bijectivity_witness().is_none()
    }

    /// First `(x, y, z)` where
    /// `(r×id)(id×r)(r×id)` and `(id×r)(r×id)(id×r)` disagree.
    pub fn braid_witness(&self, strategy: Strategy) -> Option<(usize, usize, usize)> {
        let n = self.n;
        exec::find_first(strategy, 0..n, |x| {
            for y in 0..n {
                let (a, b) = self.apply(x, y);
                for z in 0..n {
                    // left side: r×id, then id×r, then r×id
                    let (c, d) = self.apply(b, z);
                    let (e, f) = self.apply(a, c);
                    let lhs = (e, f, d);
                    // right side: id×r, then r×id, then id×r
                    let (p, q) = self.apply(y, z);
                    let (s, t) = self.apply(x, p);
                    let (u, v) = self.apply(t, q);
                    if lhs != (s, u, v) {
                        return Some((x, y, z));
                    }
                }
            }
            None
        })
    }

    pub fn verify_braid(&self) -> bool {
        self.braid_witness(Strategy::default()).is_none()
    }

    pub fn degeneracy_witness(&self) -> Option<Degeneracy> {
        let n = self.n;
        let mut seen = vec![usize::MAX; n];
        for x in 0..n {
            for y in 0..n {
                let s = self.apply(x, y).0;
                if seen[s] == x {
                    return Some(Degeneracy::Sigma(x));
                }
                seen[s] = x;
            }
        }
        seen.iter_mut().for_each(|s| *s = usize::MAX);
        for y in 0..n {
            for x in 0..n {
                let t = self.apply(x, y).1;
                if seen[t] == y {
                    return Some(Degeneracy::Tau(y));
                }
                seen[t] = y;
            }
        }
        None
    }

    pub fn verify_nondegenerate(&self) -> bool {
        self.degeneracy_witness().is_none()
    }

    /// First `(x, y)` with `r(r(x, y)) ≠ (x, y)`.
    pub fn involution_witness(&self) -> Option<(usize, usize)> {
        (0..self.n)
            .flat_map(|x| (0..self.n).map(move |y| (x, y)))
            .find(|&(x, y)| {
                let (s, t) = self.apply(x, y);
                self.apply(s, t) != (x, y)
            })
    }

    pub fn verify_involutive(&self) -> bool {
        self.involution_witness().is_none()
    }

    pub fn to_document(&self) -> YbeDocument {
        let rows = |t: &[u16]| {
            t.chunks(self.n.max(1))
                .map(|r| r.iter().map(|&v| v as usize).collect())
                .collect()
        };
        YbeDocument {
            format_version: "1".into(),
            kind: "ybe-solution".into(),
            n: self.n,
            sigma: rows(&self.sigma),
            tau: rows(&self.tau),
        }
    }

    pub fn from_document(doc: &YbeDocument) -> Result<Self, YbeError> {
        let n = doc.n;
        let flat = |t: &[Vec<usize>], name: &str| -> Result<Vec<u16>, YbeError> {
            if t.len() != n || t.iter().any(|r| r.len() != n) {
                return Err(YbeError::Malformed(format!("{name} is not {n} x {n}")));
            }
            t.iter()
                .flatten()
                .map(|&v| {
                    if v < n {
                        Ok(v as u16)
                    } else {
                        Err(YbeError::Malformed(format!("{name} entry {v} out of range")))
                    }
                })
                .collect()
        };
        Ok(YbeMap {
            n,
            sigma: flat(&doc.sigma, "sigma")?,
            tau: flat(&doc.tau, "tau")?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{example1, example2, trivial_brace};
    use crate::group::FiniteGroup;

    #[test]
    fn swap_map_is_a_solution() {
        let r = YbeMap::swap(5);
        assert!(r.is_bijective());
        assert!(r.verify_braid());
        assert!(r.verify_nondegenerate());
        assert!(r.verify_involutive());
    }

    #[test]
    fn constant_sigma_is_degenerate() {
        let r = YbeMap::from_fn(3, |x, _| (0, x));
        assert_eq!(r.degeneracy_witness(), Some(Degeneracy::Sigma(0)));
        assert!(!r.is_bijective());
    }

    #[test]
    fn trivial_braces_give_conjugation_maps() {
        let b = trivial_brace(&FiniteGroup::dihedral(3));
        let r = YbeMap::from_brace(&b).unwrap();
        for x in 0..6 {
            for y in 0..6 {
                let conj = b.add(b.add(b.neg(y), x), y);
                assert_eq!(r.apply(x, y), (y, conj));
            }
        }
        let r = YbeMap::from_brace(&trivial_brace(&FiniteGroup::cyclic(6))).unwrap();
        assert_eq!(r, YbeMap::swap(6));
    }

    #[test]
    fn identity_row_and_column() {
        let b = example1(3).unwrap();
        let r = YbeMap::from_brace(&b).unwrap();
        for y in 0..6 {
            assert_eq!(r.apply(0, y), (y, 0));
            assert_eq!(r.apply(y, 0), (0, y));
        }
        assert!(r.verify_braid());
        assert!(r.verify_nondegenerate());
    }

    #[test]
    fn classical_solution_is_involutive() {
        let r = YbeMap::from_brace(&example2(3, 2).unwrap()).unwrap();
        assert!(r.verify_braid());
        assert!(r.verify_nondegenerate());
        assert!(r.verify_involutive());
    }

    #[test]
    fn random_pair_bijections_are_rarely_solutions() {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let n = 3;
        let mut failures = 0;
        for _ in 0..50 {
            let mut image: Vec<usize> = (0..n * n).collect();
            image.shuffle(&mut rng);
            let r = YbeMap::from_fn(n, |x, y| {
                let v = image[x * n + y];
                (v / n, v % n)
            });
            assert!(r.is_bijective());
            if r.braid_witness(Strategy::Sequential).is_some() {
                failures += 1;
            }
        }
        assert!(failures >= 45, "only {failures} of 50 random maps failed");
    }

    #[test]
    fn document_round_trip() {
        let r = YbeMap::from_brace(&example1(2).unwrap()).unwrap();
        assert_eq!(YbeMap::from_document(&r.to_document()).unwrap(), r);
    }
}
