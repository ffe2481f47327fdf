//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use braceforge::catalog::{self, BraceDocument};
use braceforge::constructions::{example1, example2, example3};
use braceforge::enumeration::{all_groups, braces_on, braces_raw_oracle};
use braceforge::harness::standard_subjects;
use braceforge::ybe::YbeMap;
use braceforge::{SkewBrace, Strategy};
use braceforge_cli::{run_from, Exit};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const AXIOM_SUITE_LIMIT: Duration = Duration::from_secs(10);
const CORPUS_LIMIT: Duration = Duration::from_secs(300);
const YBE_LIMIT: Duration = Duration::from_secs(60);
const CORRUPTIONS: usize = 100;
const CORRUPTION_SEED: u64 = 0x5eed_b7ace;
const ENUMERATION_MAX: usize = 8;
const ORACLE_MAX: usize = 6;

const REQUIRED_CLAIMS: &[&str] = &[
    "finnil",
    "multab",
    "nill",
    "mgener",
    "two-sided-solvable",
    "simple-corollary",
    "ideal-lemmas.normal-star-ideal",
    "ideal-lemmas.center-star-ideal",
    "ideal-lemmas.center-extension",
    "ideal-lemmas.conjugation-distributes",
    "ideal-lemmas.star-commutation",
    "ideal-lemmas.star-series",
    "ideal-lemmas.star-square-quotient",
    "ideal-lemmas.star-square-minimal",
];

type Criterion<'a> = Box<dyn Fn() -> Outcome + 'a>;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn cli(args: &[&str]) -> (Exit, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["braceforge"];
    argv.extend_from_slice(args);
    let exit = run_from(argv, &mut out, &mut err);
    let mut text = String::from_utf8_lossy(&out).into_owned();
    text.push_str(&String::from_utf8_lossy(&err));
    (exit, text)
}

fn axiom_suites() -> Outcome {
    let start = Instant::now();
    let mut braces: Vec<(String, SkewBrace)> = Vec::new();
    for m in 1..=6 {
        braces.push((format!("example1({m})"), example1(m).unwrap()));
    }
    for (n, m) in [(2, 2), (2, 3), (3, 2), (3, 3), (4, 2)] {
        braces.push((format!("example2({n},{m})"), example2(n, m).unwrap()));
    }
    braces.push(("example3(2,3)".into(), example3(2, 3).unwrap()));
    let mut failures = Vec::new();
    let mut two_sided = 0;
    for (name, b) in &braces {
        // rebuild from raw tables so the full left-law scan runs again
        let rebuilt = SkewBrace::from_tables(&b.add_rows(), &b.mul_rows());
        let ids = b.check_identities();
        if rebuilt.is_err() || !ids.all_hold() {
            failures.push(name.clone());
        }
        if ids.two_sided {
            two_sided += 1;
        }
    }
    let elapsed = start.elapsed();
    outcome(
        failures.is_empty() && elapsed < AXIOM_SUITE_LIMIT,
        format!(
            "{} constructions valid, {two_sided} two-sided, failures {failures:?}, {:.2?} (limit {:?})",
            braces.len(),
            elapsed,
            AXIOM_SUITE_LIMIT
        ),
    )
}

fn structural_facts() -> Outcome {
    let e1 = example1(3).unwrap();
    let add = e1.additive();
    let mul = e1.multiplicative();
    let e1_ok = add.order() == 6
        && !add.is_abelian()
        && (0..6).any(|x| add.element_order(x) == 2)
        && mul.is_abelian()
        && (0..6).any(|x| mul.element_order(x) == 6);
    let e2 = example2(3, 2).unwrap();
    let e2_ok = e2.additive().is_abelian()
        && !e2.multiplicative().is_abelian()
        && e2.multiplicative().nilpotency_class() == Some(2);
    outcome(
        e1_ok && e2_ok,
        format!("example1(3) dihedral/cyclic: {e1_ok}, example2(3,2) abelian/class-2: {e2_ok}"),
    )
}

fn read_tree(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in fs::read_dir(&d).unwrap() {
            let p = entry.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                let rel = p.strip_prefix(dir).unwrap().to_string_lossy().into_owned();
                out.insert(rel, fs::read(&p).unwrap());
            }
        }
    }
    out
}

fn enumeration_cross_check(catalog_dir: &Path, scratch: &Path) -> Outcome {
    let mut mismatches = Vec::new();
    let mut groups = 0;
    for n in 1..=ORACLE_MAX {
        for g in all_groups(n).unwrap() {
            groups += 1;
            let fast = braces_on(&g).unwrap();
            let slow = braces_raw_oracle(&g).unwrap();
            let tables = |v: &[SkewBrace]| -> Vec<_> {
                v.iter().map(|b| (b.add_rows(), b.mul_rows())).collect()
            };
            if tables(&fast) != tables(&slow) {
                mismatches.push(format!("order {n}: {} vs {}", fast.len(), slow.len()));
            }
        }
    }

    let max = ENUMERATION_MAX.to_string();
    let start = Instant::now();
    let (exit, _) = cli(&["enumerate", "--max", &max, "--out", catalog_dir.to_str().unwrap()]);
    let elapsed = start.elapsed();
    let second = scratch.join("again");
    let (exit2, _) = cli(&[
        "--sequential",
        "enumerate",
        "--max",
        &max,
        "--out",
        second.to_str().unwrap(),
    ]);
    let first_tree = read_tree(catalog_dir);
    let identical = first_tree == read_tree(&second);
    let count = catalog::load_catalog(catalog_dir)
        .map(|c| c.braces.len())
        .unwrap_or(0);

    outcome(
        mismatches.is_empty()
            && exit == Exit::Success
            && exit2 == Exit::Success
            && identical
            && elapsed < CORPUS_LIMIT,
        format!(
            "{groups} groups agree with the oracle (mismatches {mismatches:?}); corpus({ENUMERATION_MAX}) \
             {count} braces, {} files, byte-identical rerun: {identical}, {:.2?} (limit {:?})",
            first_tree.len(),
            elapsed,
            CORPUS_LIMIT
        ),
    )
}

fn theorem_harness(catalog_dir: &Path, scratch: &Path) -> Outcome {
    let report_path = scratch.join("theorems.json");
    let (exit, _) = cli(&[
        "theorems",
        catalog_dir.to_str().unwrap(),
        "--with-examples",
        "--out",
        report_path.to_str().unwrap(),
    ]);
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&report_path).unwrap_or_default())
            .unwrap_or_default();
    let results = report["results"].as_array().cloned().unwrap_or_default();
    let status_of = |id: &str| {
        results
            .iter()
            .find(|r| r["claim_id"] == id)
            .map(|r| {
                (
                    r["status"].as_str().unwrap_or("").to_string(),
                    r["stats"]["in_scope"].as_u64().unwrap_or(0),
                )
            })
    };
    let mut bad = Vec::new();
    for id in REQUIRED_CLAIMS {
        match status_of(id) {
            Some((s, scope)) if s == "verified" && scope > 0 => {}
            other => bad.push(format!("{id}: {other:?}")),
        }
    }
    let counterexamples = results
        .iter()
        .filter(|r| r["status"] == "counterexample")
        .count();
    outcome(
        exit == Exit::Success && bad.is_empty() && counterexamples == 0,
        format!(
            "{} claims run over {} subjects, {} required verified and non-vacuous, \
             counterexamples {counterexamples}, problems {bad:?}",
            results.len(),
            report["subjects"],
            REQUIRED_CLAIMS.len() - bad.len()
        ),
    )
}

fn ybe_solutions() -> Outcome {
    let subjects = standard_subjects(ENUMERATION_MAX, Strategy::default()).unwrap();
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut classical = 0;
    for s in &subjects {
        let ok = match YbeMap::from_brace(&s.brace) {
            Err(_) => false,
            Ok(r) => {
                let involutive_ok = !s.brace.is_classical() || r.verify_involutive();
                classical += usize::from(s.brace.is_classical());
                r.verify_braid() && r.verify_nondegenerate() && involutive_ok
            }
        };
        if !ok {
            failures.push(s.label.clone());
        }
    }
    let elapsed = start.elapsed();
    outcome(
        failures.is_empty() && elapsed < YBE_LIMIT,
        format!(
            "{} solutions braid + nondegenerate, {classical} classical involutive, failures {failures:?}, \
             {:.2?} (limit {:?})",
            subjects.len(),
            elapsed,
            YBE_LIMIT
        ),
    )
}

fn growth_exhibit() -> Outcome {
    let mut measured = Vec::new();
    let mut ok = true;
    for n in [2usize, 3, 4] {
        let b = example2(n, 2).unwrap();
        let want = n.next_power_of_two().trailing_zeros() as usize;
        let got = b.multiplicative().solvability_class();
        ok &= b.additive().is_abelian() && got == Some(want);
        measured.push(format!("n={n}: {got:?} (want {want})"));
    }
    outcome(ok, format!("multiplicative derived lengths {}", measured.join(", ")))
}

fn left_law_fails(add: &[Vec<usize>], mul: &[Vec<usize>], a: usize, b: usize, c: usize) -> bool {
    let n = add.len();
    let neg = |x: usize| (0..n).find(|&y| add[x][y] == 0).unwrap();
    let lhs = mul[a][add[b][c]];
    let rhs = add[add[mul[a][b]][neg(a)]][mul[a][c]];
    lhs != rhs
}

fn parse_triple(text: &str) -> Option<(usize, usize, usize)> {
    let tail = text.split("(a, b, c) = (").nth(1)?;
    let inner = tail.split(')').next()?;
    let v: Vec<usize> = inner.split(", ").filter_map(|x| x.parse().ok()).collect();
    (v.len() == 3).then(|| (v[0], v[1], v[2]))
}

fn negative_controls(catalog_dir: &Path, scratch: &Path) -> Outcome {
    let loaded = match catalog::load_catalog(catalog_dir) {
        Ok(c) => c,
        Err(e) => return outcome(false, format!("catalog unreadable: {e}")),
    };
    let pool: Vec<&SkewBrace> = loaded
        .braces
        .iter()
        .map(|(_, b)| b)
        .filter(|b| b.order() >= 2)
        .collect();
    if pool.is_empty() {
        return outcome(false, "empty corpus");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(CORRUPTION_SEED);
    let path = scratch.join("corrupted.json");
    let (mut detected, mut left_law, mut replayed) = (0, 0, 0);
    let mut missed = Vec::new();
    for i in 0..CORRUPTIONS {
        let b = pool[rng.random_range(0..pool.len())];
        let n = b.order();
        let (x, y) = (rng.random_range(0..n), rng.random_range(0..n));
        let mut doc = BraceDocument::from_brace(b);
        let old = doc.mul_table[x][y];
        doc.mul_table[x][y] = (old + rng.random_range(1..n)) % n;
        doc.write(&path).unwrap();
        let (exit, text) = cli(&["verify", path.to_str().unwrap()]);
        let witnessed = text.contains("FAIL:") && text.chars().any(|c| c.is_ascii_digit());
        if exit == Exit::Failure && witnessed {
            detected += 1;
        } else {
            missed.push(i);
        }
        if let Some((a, p, q)) = parse_triple(&text) {
            left_law += 1;
            if left_law_fails(&doc.add_table, &doc.mul_table, a, p, q) {
                replayed += 1;
            }
        }
    }
    outcome(
        detected == CORRUPTIONS && replayed == left_law,
        format!(
            "{detected}/{CORRUPTIONS} corruptions detected with a witness ({left_law} left-law \
             triples, {replayed} confirmed by direct evaluation), missed {missed:?}"
        ),
    )
}

fn main() -> ExitCode {
    let scratch = tempfile::tempdir().expect("temporary directory");
    let catalog_dir = scratch.path().join("catalog");

    let criteria: Vec<(&str, Criterion<'_>)> = vec![
        ("axiom suites", Box::new(axiom_suites)),
        ("structural facts", Box::new(structural_facts)),
        (
            "enumeration cross-check",
            Box::new(|| enumeration_cross_check(&catalog_dir, scratch.path())),
        ),
        (
            "theorem harness",
            Box::new(|| theorem_harness(&catalog_dir, scratch.path())),
        ),
        ("yang-baxter solutions", Box::new(ybe_solutions)),
        ("derived length growth", Box::new(growth_exhibit)),
        (
            "negative controls",
            Box::new(|| negative_controls(&catalog_dir, scratch.path())),
        ),
    ];

    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("{tag} [{}] {name}: {}", i + 1, o.detail);
        failed += usize::from(!o.pass);
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
