//! Claim registry and runner.
//!
//! Every claim decidable on finite braces is a pure function from a cached
//! [`Analysis`] of one brace to an optional [`Evidence`] of failure. The
//! runner scans all subjects, separates vacuous claims from verified ones,
//! and keeps the first counterexample as a replayable [`Witness`].

use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::brace::{identity, IdealFailure, SkewBrace};
use crate::constructions::{example1, example2, example3, trivial_brace};
use crate::enumeration::{self, EnumerationError};
use crate::exec::{self, Strategy};
use crate::group::{ElementSet, FiniteGroup};
use crate::ybe::YbeMap;

/// Largest order for which ideals are enumerated.
pub const LATTICE_GUARD: usize = 32;
/// Largest order for which multiplicative normal subgroups are enumerated.
pub const NORMAL_SUBGROUP_GUARD: usize = 64;

/// A labelled brace to check claims against.
#[derive(Clone, Debug)]
pub struct Subject {
    pub label: String,
    pub brace: SkewBrace,
}

impl Subject {
    pub fn new(label: impl Into<String>, brace: SkewBrace) -> Self {
        Subject {
            label: label.into(),
            brace,
        }
    }
}

/// The constructed examples used alongside the corpus.
pub fn constructed_examples() -> Vec<Subject> {
    let mut out = Vec::new();
    for m in 1..=6 {
        out.push(Subject::new(format!("example1(m={m})"), example1(m).expect("in guard")));
    }
    for (n, m) in [(2, 2), (2, 3), (3, 2), (3, 3), (4, 2)] {
        out.push(Subject::new(
            format!("example2(n={n},m={m})"),
            example2(n, m).expect("in guard"),
        ));
    }
    out.push(Subject::new("example3(n=2,m=3)", example3(2, 3).expect("in guard")));
    out.push(Subject::new("trivial(S3)", trivial_brace(&FiniteGroup::dihedral(3))));
    out
}

/// Every brace of order at most `n_max`, followed by the constructed examples.
pub fn standard_subjects(n_max: usize, strategy: Strategy) -> Result<Vec<Subject>, EnumerationError> {
    let mut out: Vec<Subject> = enumeration::corpus_with(n_max, strategy)?
        .into_iter()
        .flat_map(|c| c.entries)
        .map(|e| Subject::new(e.id(), e.brace))
        .collect();
    out.extend(constructed_examples());
    Ok(out)
}

/// Invariants of one brace, computed once and shared by all claims.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub label: String,
    pub brace: SkewBrace,
    pub two_sided: bool,
    pub add_solv: Option<usize>,
    pub mul_solv: Option<usize>,
    pub add_nilp: Option<usize>,
    pub mul_nilp: Option<usize>,
    /// Present up to [`LATTICE_GUARD`].
    pub ideals: Option<Vec<ElementSet>>,
    /// Present up to [`NORMAL_SUBGROUP_GUARD`] for two-sided braces.
    pub mul_normal: Option<Vec<ElementSet>>,
}

impl Analysis {
    pub fn new(subject: &Subject) -> Self {
        let b = &subject.brace;
        let n = b.order();
        let two_sided = b.two_sided_witness(Strategy::Sequential).is_none();
        let small = n <= LATTICE_GUARD;
        Analysis {
            label: subject.label.clone(),
            brace: b.clone(),
            two_sided,
            add_solv: b.additive().solvability_class(),
            mul_solv: b.multiplicative().solvability_class(),
            add_nilp: b.additive().nilpotency_class(),
            mul_nilp: b.multiplicative().nilpotency_class(),
            ideals: small.then(|| b.all_ideals().expect("guarded")),
            mul_normal: (n <= NORMAL_SUBGROUP_GUARD && two_sided).then(|| b.multiplicative().normal_subgroups()),
        }
    }

    fn order(&self) -> usize {
        self.brace.order()
    }

    fn mul_abelian(&self) -> bool {
        self.brace.multiplicative().is_abelian()
    }
}

/// What went wrong for one brace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Evidence {
    /// The hypothesis holds and the conclusion does not.
    Implication { hypothesis: String, conclusion: String },
    /// A named identity fails at these elements.
    Identity { identity: String, elements: Vec<usize> },
    /// A set that should be an ideal is not.
    NotIdeal { set: ElementSet, reason: IdealFailure },
    /// Two elements of a set that should be additively abelian do not commute.
    NotAbelian { set: ElementSet, a: usize, b: usize },
    /// An ideal with trivial quotient that misses an element of `A * A`.
    NotMinimal { ideal: ElementSet, missing: usize },
    /// A quotient that should be trivial is not.
    NontrivialQuotient { ideal: ElementSet },
}

impl fmt::Display for Evidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Evidence::Implication {
                hypothesis,
                conclusion,
            } => write!(f, "{hypothesis} but not {conclusion}"),
            Evidence::Identity { identity, elements } => {
                write!(f, "{identity} fails at {elements:?}")
            }
            Evidence::NotIdeal { set, reason } => {
                write!(f, "{:?} is not an ideal: {reason}", set.members())
            }
            Evidence::NotAbelian { set, a, b } => {
                write!(f, "{a} and {b} in {:?} do not commute", set.members())
            }
            Evidence::NotMinimal { ideal, missing } => write!(
                f,
                "ideal {:?} has trivial quotient but misses {missing}",
                ideal.members()
            ),
            Evidence::NontrivialQuotient { ideal } => {
                write!(f, "quotient by {:?} is not trivial", ideal.members())
            }
        }
    }
}

/// A counterexample tied to the subject it came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub subject: String,
    pub evidence: Evidence,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClaimStatus {
    Verified,
    Counterexample,
    Vacuous,
    #[serde(rename = "out-of-scope: infinite")]
    OutOfScope,
}

impl fmt::Display for ClaimStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClaimStatus::Verified => "verified",
            ClaimStatus::Counterexample => "counterexample",
            ClaimStatus::Vacuous => "vacuous",
            ClaimStatus::OutOfScope => "out-of-scope: infinite",
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimStats {
    /// Subjects examined.
    pub checked: usize,
    /// Subjects satisfying the hypothesis.
    pub in_scope: usize,
    pub counterexamples: usize,
    pub millis: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimResult {
    pub claim_id: String,
    pub statement: String,
    pub scope: String,
    pub status: ClaimStatus,
    pub witness: Option<Witness>,
    pub stats: ClaimStats,
}

type Applies = fn(&Analysis) -> bool;
type Check = fn(&Analysis) -> Option<Evidence>;

#[derive(Clone, Copy)]
pub enum ClaimKind {
    /// Checked on every subject that satisfies `applies`.
    PerBrace { applies: Applies, check: Check },
    /// Checked on a fixed family outside the subject list. Returns the
    /// number of instances and the first failure.
    Standalone(fn() -> (usize, Option<Witness>)),
    /// Not decidable on finite structures.
    OutOfScope,
}

#[derive(Clone, Copy)]
pub struct Claim {
    pub id: &'static str,
    pub statement: &'static str,
    pub scope: &'static str,
    pub kind: ClaimKind,
}

impl Claim {
    /// Runs this claim's check on one brace, ignoring the hypothesis.
    pub fn check(&self, analysis: &Analysis) -> Option<Evidence> {
        match self.kind {
            ClaimKind::PerBrace { check, .. } => check(analysis),
            _ => None,
        }
    }

    pub fn applies(&self, analysis: &Analysis) -> bool {
        match self.kind {
            ClaimKind::PerBrace { applies, .. } => applies(analysis),
            _ => false,
        }
    }
}

fn implication(holds: bool, hypothesis: &str, conclusion: &str) -> Option<Evidence> {
    (!holds).then(|| Evidence::Implication {
        hypothesis: hypothesis.into(),
        conclusion: conclusion.into(),
    })
}

fn identity_failure(name: &str, w: Option<Vec<usize>>) -> Option<Evidence> {
    w.map(|elements| Evidence::Identity {
        identity: name.into(),
        elements,
    })
}

fn ideal_failure(b: &SkewBrace, set: &ElementSet) -> Option<Evidence> {
    b.ideal_check(set).err().map(|reason| Evidence::NotIdeal {
        set: set.clone(),
        reason,
    })
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn star_square(b: &SkewBrace) -> ElementSet {
    let full = ElementSet::full(b.order());
    b.star_span(&full, &full)
}

fn always(_: &Analysis) -> bool {
    true
}

fn two_sided(a: &Analysis) -> bool {
    a.two_sided
}

/// The built-in claims.
pub fn registry() -> Vec<Claim> {
    vec![
        Claim {
            id: "finnil",
            statement: "if the additive group is nilpotent, the multiplicative group is solvable",
            scope: "braces with nilpotent additive group",
            kind: ClaimKind::PerBrace {
                applies: |a| a.add_nilp.is_some(),
                check: |a| implication(a.mul_solv.is_some(), "additive nilpotent", "multiplicative solvable"),
            },
        },
        Claim {
            id: "multab",
            statement: "if the multiplicative group is abelian, the additive group is solvable",
            scope: "braces with abelian multiplicative group",
            kind: ClaimKind::PerBrace {
                applies: Analysis::mul_abelian,
                check: |a| implication(a.add_solv.is_some(), "multiplicative abelian", "additive solvable"),
            },
        },
        Claim {
            id: "nill",
            statement: "if the multiplicative group is abelian, the additive group is metabelian",
            scope: "braces with abelian multiplicative group",
            kind: ClaimKind::PerBrace {
                applies: Analysis::mul_abelian,
                check: |a| {
                    implication(
                        a.add_solv.is_some_and(|c| c <= 2),
                        "multiplicative abelian",
                        "additive derived length at most 2",
                    )
                },
            },
        },
        Claim {
            id: "mgener",
            statement: "in a two-sided brace with multiplicative nilpotency class k, \
                        the additive derived length is at most 2k",
            scope: "two-sided braces with nilpotent multiplicative group",
            kind: ClaimKind::PerBrace {
                applies: |a| a.two_sided && a.mul_nilp.is_some(),
                check: |a| {
                    let k = a.mul_nilp.unwrap_or(0);
                    implication(
                        a.add_solv.is_some_and(|c| c <= 2 * k),
                        "two-sided, multiplicative nilpotent of class k",
                        "additive derived length at most 2k",
                    )
                },
            },
        },
        Claim {
            id: "two-sided-solvable",
            statement: "in a finite two-sided brace with solvable additive group, \
                        the multiplicative group is solvable",
            scope: "two-sided braces with solvable additive group",
            kind: ClaimKind::PerBrace {
                applies: |a| a.two_sided && a.add_solv.is_some(),
                check: |a| implication(a.mul_solv.is_some(), "two-sided, additive solvable", "multiplicative solvable"),
            },
        },
        Claim {
            id: "two-sided-solvable.fg-nilpotent",
            statement: "in a two-sided brace with finitely generated nilpotent additive group, \
                        the multiplicative group is solvable",
            scope: "infinite braces",
            kind: ClaimKind::OutOfScope,
        },
        Claim {
            id: "two-sided-solvable.fg-residually-nilpotent",
            statement: "in a two-sided brace with finitely generated residually nilpotent \
                        additive group, the multiplicative group is residually solvable",
            scope: "infinite braces",
            kind: ClaimKind::OutOfScope,
        },
        Claim {
            id: "two-sided-solvable.fg-residually-finite",
            statement: "in a two-sided brace with finitely generated residually finite \
                        additive group, the multiplicative group is residually finite",
            scope: "infinite braces",
            kind: ClaimKind::OutOfScope,
        },
        Claim {
            id: "simple-corollary",
            statement: "a finite two-sided brace with solvable additive group is simple \
                        iff it is trivial of prime order",
            scope: "two-sided braces with solvable additive group, order at most 32",
            kind: ClaimKind::PerBrace {
                applies: |a| a.two_sided && a.add_solv.is_some() && a.ideals.is_some(),
                check: |a| {
                    let n = a.order();
                    let simple = n > 1 && a.ideals.as_ref().is_some_and(|v| v.len() == 2);
                    let trivial_prime = a.brace.is_trivial() && is_prime(n);
                    match (simple, trivial_prime) {
                        (true, false) => implication(false, "simple", "trivial of prime order"),
                        (false, true) => implication(false, "trivial of prime order", "simple"),
                        _ => None,
                    }
                },
            },
        },
        Claim {
            id: "ideal-lemmas.normal-star-ideal",
            statement: "in a two-sided brace, X * A is an ideal for every normal subgroup X \
                        of the multiplicative group",
            scope: "two-sided braces of order at most 64, every multiplicative normal subgroup",
            kind: ClaimKind::PerBrace {
                applies: |a| a.mul_normal.is_some(),
                check: |a| {
                    let full = ElementSet::full(a.order());
                    a.mul_normal.as_ref()?.iter().find_map(|x| {
                        ideal_failure(&a.brace, &a.brace.star_span(x, &full))
                    })
                },
            },
        },
        Claim {
            id: "ideal-lemmas.center-star-ideal",
            statement: "in a two-sided brace with multiplicative centre Z, \
                        I = (A * Z) + (Z * A) is an ideal with abelian additive group",
            scope: "two-sided braces",
            kind: ClaimKind::PerBrace {
                applies: two_sided,
                check: |a| {
                    let b = &a.brace;
                    let i = b.center_star_ideal();
                    ideal_failure(b, &i).or_else(|| {
                        i.iter()
                            .flat_map(|x| i.iter().map(move |y| (x, y)))
                            .find(|&(x, y)| b.add(x, y) != b.add(y, x))
                            .map(|(x, y)| Evidence::NotAbelian {
                                set: i.clone(),
                                a: x,
                                b: y,
                            })
                    })
                },
            },
        },
        Claim {
            id: "ideal-lemmas.center-extension",
            statement: "in a two-sided brace, J = Z + I is an ideal containing the \
                        multiplicative centre",
            scope: "two-sided braces",
            kind: ClaimKind::PerBrace {
                applies: two_sided,
                check: |a| {
                    let b = &a.brace;
                    let j = b.center_extension();
                    ideal_failure(b, &j).or_else(|| {
                        implication(
                            b.multiplicative().center().is_subset(&j),
                            "J built from the centre",
                            "J contains the centre",
                        )
                    })
                },
            },
        },
        Claim {
            id: "ideal-lemmas.conjugation-distributes",
            statement: "in a two-sided brace, multiplicative conjugation is an additive \
                        automorphism",
            scope: "two-sided braces",
            kind: ClaimKind::PerBrace {
                applies: two_sided,
                check: |a| {
                    identity_failure(
                        identity::CONJUGATION,
                        a.brace
                            .conjugation_witness(Strategy::Sequential)
                            .map(|(x, y, z)| vec![x, y, z]),
                    )
                },
            },
        },
        Claim {
            id: "ideal-lemmas.star-commutation",
            statement: "in a two-sided brace, (-c + b.c - b) commutes additively with a * d",
            scope: "two-sided braces",
            kind: ClaimKind::PerBrace {
                applies: two_sided,
                check: |a| {
                    identity_failure(
                        identity::STAR_COMMUTATION,
                        a.brace
                            .star_commutation_witness()
                            .map(|(p, q, r, s)| vec![p, q, r, s]),
                    )
                },
            },
        },
        Claim {
            id: "ideal-lemmas.star-series",
            statement: "every term of the series A, A * A, (A * A) * A, ... is an ideal",
            scope: "all braces",
            kind: ClaimKind::PerBrace {
                applies: always,
                check: |a| {
                    let full = ElementSet::full(a.order());
                    let mut term = full.clone();
                    for _ in 0..a.order() {
                        if let Some(e) = ideal_failure(&a.brace, &term) {
                            return Some(e);
                        }
                        let next = a.brace.star_span(&term, &full);
                        if next == term {
                            break;
                        }
                        term = next;
                    }
                    None
                },
            },
        },
        Claim {
            id: "ideal-lemmas.star-square-quotient",
            statement: "the quotient A / (A * A) is a trivial brace",
            scope: "all braces",
            kind: ClaimKind::PerBrace {
                applies: always,
                check: |a| {
                    let a2 = star_square(&a.brace);
                    match a.brace.quotient(&a2) {
                        Ok(q) if q.brace.is_trivial() => None,
                        Ok(_) => Some(Evidence::NontrivialQuotient { ideal: a2 }),
                        Err(_) => ideal_failure(&a.brace, &a2),
                    }
                },
            },
        },
        Claim {
            id: "ideal-lemmas.star-square-minimal",
            statement: "A * A is contained in every ideal with trivial quotient",
            scope: "braces of order at most 32, every ideal",
            kind: ClaimKind::PerBrace {
                applies: |a| a.ideals.is_some(),
                check: |a| {
                    let b = &a.brace;
                    let a2 = star_square(b);
                    a.ideals.as_ref()?.iter().find_map(|j| {
                        let trivial = b.quotient(j).is_ok_and(|q| q.brace.is_trivial());
                        let missing = a2.iter().find(|&x| !j.contains(x))?;
                        trivial.then(|| Evidence::NotMinimal {
                            ideal: j.clone(),
                            missing,
                        })
                    })
                },
            },
        },
        Claim {
            id: "brace-identities",
            statement: "every identity valid in all skew braces holds, plus the two-sided \
                        ones when the brace is two-sided",
            scope: "all braces",
            kind: ClaimKind::PerBrace {
                applies: always,
                check: |a| {
                    let report = a.brace.check_identities_with(Strategy::Sequential);
                    report.checks.into_iter().find_map(|c| match c.outcome {
                        crate::brace::Outcome::Fails(w) if c.mandatory => {
                            identity_failure(&c.name, Some(w))
                        }
                        _ => None,
                    })
                },
            },
        },
        Claim {
            id: "lambda-compatibility",
            statement: "lambda recomputed from the tables satisfies \
                        lambda(a + lambda_a(b)) = lambda_a o lambda_b",
            scope: "all braces",
            kind: ClaimKind::PerBrace {
                applies: always,
                check: |a| {
                    let b = &a.brace;
                    let n = a.order();
                    (0..n)
                        .flat_map(|x| (0..n).map(move |y| (x, y)))
                        .find_map(|(x, y)| {
                            let c = b.add(x, b.lambda_apply(x, y));
                            (0..n)
                                .find(|&z| {
                                    b.lambda_apply(c, z) != b.lambda_apply(x, b.lambda_apply(y, z))
                                })
                                .map(|z| vec![x, y, z])
                        })
                        .and_then(|w| identity_failure(identity::LAMBDA_HOMOMORPHISM, Some(w)))
                },
            },
        },
        Claim {
            id: "ybe-braid",
            statement: "the associated map r is a bijective solution of the braid relation",
            scope: "all braces",
            kind: ClaimKind::PerBrace {
                applies: always,
                check: |a| match YbeMap::from_brace(&a.brace) {
                    Err(_) => implication(false, "brace", "r bijective"),
                    Ok(r) => identity_failure(
                        "braid",
                        r.braid_witness(Strategy::Sequential).map(|(x, y, z)| vec![x, y, z]),
                    ),
                },
            },
        },
        Claim {
            id: "ybe-nondegenerate",
            statement: "the associated map r is non-degenerate",
            scope: "all braces",
            kind: ClaimKind::PerBrace {
                applies: always,
                check: |a| {
                    let r = YbeMap::from_brace(&a.brace).ok()?;
                    implication(r.verify_nondegenerate(), "brace", "r non-degenerate")
                },
            },
        },
        Claim {
            id: "ybe-involutive-classical",
            statement: "for a brace with abelian additive group the associated map r is involutive",
            scope: "classical braces",
            kind: ClaimKind::PerBrace {
                applies: |a| a.brace.is_classical(),
                check: |a| {
                    let r = YbeMap::from_brace(&a.brace).ok()?;
                    identity_failure("involutive", r.involution_witness().map(|(x, y)| vec![x, y]))
                },
            },
        },
        Claim {
            id: "two-torsion",
            statement: "the additive group of the dihedral-on-cyclic example has an element of order 2",
            scope: "example1(m) for m = 1..6",
            kind: ClaimKind::Standalone(|| {
                let failure = (1..=6).find_map(|m| {
                    let b = example1(m).expect("in guard");
                    let has = (0..b.order()).any(|x| b.additive().element_order(x) == 2);
                    (!has).then(|| Witness {
                        subject: format!("example1(m={m})"),
                        evidence: Evidence::Implication {
                            hypothesis: "example1".into(),
                            conclusion: "additive 2-torsion".into(),
                        },
                    })
                });
                (6, failure)
            }),
        },
        Claim {
            id: "derived-length-growth",
            statement: "over an abelian additive group the multiplicative derived length of the \
                        unitriangular example over F2 is ceil(log2 n)",
            scope: "example2(n, 2) for n = 2, 3, 4",
            kind: ClaimKind::Standalone(|| {
                let failure = [2usize, 3, 4].into_iter().find_map(|n| {
                    let b = example2(n, 2).expect("in guard");
                    let want = n.next_power_of_two().trailing_zeros() as usize;
                    let ok = b.additive().is_abelian()
                        && b.multiplicative().solvability_class() == Some(want);
                    (!ok).then(|| Witness {
                        subject: format!("example2(n={n},m=2)"),
                        evidence: Evidence::Implication {
                            hypothesis: "additive abelian".into(),
                            conclusion: format!("multiplicative derived length {want}"),
                        },
                    })
                });
                (3, failure)
            }),
        },
    ]
}

/// Results of running a registry over a subject list.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub subjects: usize,
    pub results: Vec<ClaimResult>,
}

impl VerificationReport {
    /// True when every claim that can be decided is verified.
    pub fn passed(&self) -> bool {
        self.results
            .iter()
            .all(|r| matches!(r.status, ClaimStatus::Verified | ClaimStatus::OutOfScope))
    }

    pub fn get(&self, claim_id: &str) -> Option<&ClaimResult> {
        self.results.iter().find(|r| r.claim_id == claim_id)
    }

    /// Fixed-width text table.
    pub fn table(&self) -> String {
        let width = self
            .results
            .iter()
            .map(|r| r.claim_id.len())
            .max()
            .unwrap_or(8)
            .max(8);
        let mut out = format!(
            "{:<width$}  {:<22}  {:>8}  {:>8}  {:>8}\n",
            "claim", "status", "scope", "checked", "ms"
        );
        for r in &self.results {
            out += &format!(
                "{:<width$}  {:<22}  {:>8}  {:>8}  {:>8}\n",
                r.claim_id,
                r.status.to_string(),
                r.stats.in_scope,
                r.stats.checked,
                r.stats.millis
            );
            if let Some(w) = &r.witness {
                out += &format!("    witness: {}: {}\n", w.subject, w.evidence);
            }
        }
        out
    }
}

/// Analyses every subject and runs every claim.
pub fn run(claims: &[Claim], subjects: &[Subject], strategy: Strategy) -> VerificationReport {
    let analyses = exec::map(strategy, subjects, Analysis::new);
    let results = exec::map(strategy, claims, |c| run_claim(c, &analyses, strategy));
    VerificationReport {
        subjects: subjects.len(),
        results,
    }
}

pub fn run_claim(claim: &Claim, analyses: &[Analysis], strategy: Strategy) -> ClaimResult {
    let start = Instant::now();
    let (stats, witness) = match claim.kind {
        ClaimKind::OutOfScope => (ClaimStats::default(), None),
        ClaimKind::Standalone(f) => {
            let (count, witness) = f();
            let stats = ClaimStats {
                checked: count,
                in_scope: count,
                counterexamples: usize::from(witness.is_some()),
                millis: 0,
            };
            (stats, witness)
        }
        ClaimKind::PerBrace { applies, check } => {
            let outcomes = exec::map(strategy, analyses, |a| {
                applies(a).then(|| check(a).map(|e| (a.label.clone(), e)))
            });
            let in_scope = outcomes.iter().filter(|o| o.is_some()).count();
            let mut failures = outcomes.into_iter().flatten().flatten();
            let first = failures.next();
            let stats = ClaimStats {
                checked: analyses.len(),
                in_scope,
                counterexamples: usize::from(first.is_some()) + failures.count(),
                millis: 0,
            };
            let witness = first.map(|(subject, evidence)| Witness { subject, evidence });
            (stats, witness)
        }
    };
    let status = match claim.kind {
        ClaimKind::OutOfScope => ClaimStatus::OutOfScope,
        _ if witness.is_some() => ClaimStatus::Counterexample,
        _ if stats.in_scope == 0 => ClaimStatus::Vacuous,
        _ => ClaimStatus::Verified,
    };
    ClaimResult {
        claim_id: claim.id.to_string(),
        statement: claim.statement.to_string(),
        scope: claim.scope.to_string(),
        status,
        witness,
        stats: ClaimStats {
            millis: start.elapsed().as_millis() as u64,
            ..stats
        },
    }
}

/// Re-establishes a failure on `brace` from the evidence alone, using the
/// brace checks directly rather than the claim that produced it.
pub fn replay(brace: &SkewBrace, evidence: &Evidence) -> bool {
    let n = brace.order();
    let in_range = |xs: &[usize]| xs.iter().all(|&x| x < n);
    match evidence {
        Evidence::Identity { identity, elements } if in_range(elements) => {
            identity_fails_at(brace, identity, elements)
        }
        Evidence::Identity { .. } => false,
        Evidence::NotIdeal { set, .. } => !brace.is_ideal(set),
        Evidence::NotAbelian { set, a, b } => {
            set.contains(*a) && set.contains(*b) && brace.add(*a, *b) != brace.add(*b, *a)
        }
        Evidence::NotMinimal { ideal, missing } => {
            brace.is_ideal(ideal)
                && brace.quotient(ideal).is_ok_and(|q| q.brace.is_trivial())
                && star_square(brace).contains(*missing)
                && !ideal.contains(*missing)
        }
        Evidence::NontrivialQuotient { ideal } => {
            brace.quotient(ideal).is_ok_and(|q| !q.brace.is_trivial())
        }
        Evidence::Implication { .. } => {
            let analysis = Analysis::new(&Subject::new("replay", brace.clone()));
            registry()
                .iter()
                .any(|c| c.applies(&analysis) && c.check(&analysis).as_ref() == Some(evidence))
        }
    }
}

/// Evaluates one named identity at the given elements.
pub fn identity_fails_at(b: &SkewBrace, name: &str, xs: &[usize]) -> bool {
    match (name, xs) {
        (identity::LEFT_LAW, &[a, x, y]) => {
            b.mul(a, b.add(x, y)) != b.add(b.sub(b.mul(a, x), a), b.mul(a, y))
        }
        (identity::RIGHT_LAW, &[x, y, c]) => {
            b.mul(b.add(x, y), c) != b.add(b.sub(b.mul(x, c), c), b.mul(y, c))
        }
        (identity::INVERSE, &[a, x, y]) => {
            b.mul(a, b.add(b.neg(x), y)) != b.add(b.sub(a, b.mul(a, x)), b.mul(a, y))
        }
        (identity::STAR_DISTRIBUTIVE, &[a, x, y]) => {
            let rhs = b.sub(b.add(b.add(b.star(a, x), x), b.star(a, y)), x);
            b.star(a, b.add(x, y)) != rhs
        }
        (identity::LAMBDA_AUTOMORPHISM, &[a, x, y]) => {
            b.lambda_apply(a, b.add(x, y)) != b.add(b.lambda_apply(a, x), b.lambda_apply(a, y))
        }
        (identity::LAMBDA_HOMOMORPHISM, &[x, y, z]) => {
            let c = b.add(x, b.lambda_apply(x, y));
            b.lambda_apply(c, z) != b.lambda_apply(x, b.lambda_apply(y, z))
        }
        (identity::CONJUGATION, &[x, y, c]) => {
            let conj = |v: usize| b.mul(b.mul(b.inv(c), v), c);
            conj(b.add(x, y)) != b.add(conj(x), conj(y))
        }
        (identity::STAR_COMMUTATION, &[a, x, c, d]) => {
            let u = b.sub(b.add(b.neg(c), b.mul(x, c)), x);
            let v = b.star(a, d);
            b.add(u, v) != b.add(v, u)
        }
        ("braid", &[x, y, z]) => YbeMap::from_brace(b).is_ok_and(|r| {
            let (p, q) = r.apply(x, y);
            let (s, t) = r.apply(q, z);
            let (u, v) = r.apply(p, s);
            let (e, f) = r.apply(y, z);
            let (g, h) = r.apply(x, e);
            let (i, j) = r.apply(h, f);
            (u, v, t) != (g, i, j)
        }),
        ("involutive", &[x, y]) => YbeMap::from_brace(b).is_ok_and(|r| {
            let (s, t) = r.apply(x, y);
            r.apply(s, t) != (x, y)
        }),
        _ => false,
    }
}
