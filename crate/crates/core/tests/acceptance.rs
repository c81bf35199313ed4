//! One test per acceptance criterion; each writes a PASS/FAIL line to stderr.

mod common;

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use paradecomp::config::generate_equations;
use paradecomp::decomp::{
    build_diagram, chain_bound, corollary_bound, count_paths, o_sets, tarski_bound_paths,
};
use paradecomp::gordan::{gordan_alternative, has_nontrivial_nonneg_solution, GordanOutcome};
use paradecomp::grouporacle::{
    generate_configurations, Decomposition, DecompositionPiece, FreeGroupOracle, GroupOracle,
    Instance, Region, SetIdentity, ViolationKind, verify_decomposition,
};
use paradecomp::intmat::{IntMatrix, Permutation};
use paradecomp::normality::{
    certificate_matrix, classify_instance, conjecture_scan, scan_instances, search_normality,
    verify_normality, SystemPair,
};
use paradecomp::word::GroupWord;

use common::*;

fn small(m: &IntMatrix) -> Vec<Vec<i64>> {
    m.iter_rows()
        .map(|r| r.iter().map(|v| v.to_i64().unwrap()).collect())
        .collect()
}

fn printed_pair() -> SystemPair {
    SystemPair::from_rows(&rows_u8(&PRINTED_A), &rows_u8(&PRINTED_B)).unwrap()
}

#[test]
fn criterion_1_printed_certificate() {
    let pair = printed_pair();
    let pi = Permutation::from_images(&PRINTED_PI).unwrap();
    let from_cycles = Permutation::from_cycles(7, &[&[2, 7], &[4, 6]]).unwrap();
    let start = Instant::now();
    let cert = certificate_matrix(&pair, &pi).unwrap();
    let normal = verify_normality(&pair, &pi);
    let elapsed = start.elapsed();
    let expected: Vec<Vec<i64>> = PRINTED_CERTIFICATE.iter().map(|r| r.to_vec()).collect();
    let ok = small(&cert) == expected && normal && pi == from_cycles && elapsed.as_millis() < 1;
    verdict(
        1,
        ok,
        &format!("35/35 entries match={} normal={normal} time={elapsed:?}", small(&cert) == expected),
    );
    assert!(ok);
}

#[test]
fn criterion_2_printed_equation_blocks() {
    let start = Instant::now();
    let eqs = generate_equations(&five_configs());
    let elapsed = start.elapsed();
    let diffs: Vec<Vec<i64>> = eqs.equations().iter().map(|e| e.difference()).collect();
    let mut missing = Vec::new();
    for (b, block) in PRINTED_BLOCKS.iter().enumerate() {
        for (r, row) in block.iter().enumerate() {
            let neg: Vec<i64> = row.iter().map(|v| -v).collect();
            if !diffs.iter().any(|d| d == row || *d == neg) {
                missing.push((b + 1, r + 1));
            }
        }
    }
    let ok = missing.is_empty() && eqs.len() == 3 * 4 * 3 / 2 && elapsed.as_millis() < 10;
    verdict(
        2,
        ok,
        &format!("36 printed rows, missing={missing:?}, equations={} time={elapsed:?}", eqs.len()),
    );
    assert!(ok);
}

#[test]
fn criterion_3_paths_and_bounds() {
    let sub1 = five_config_subsystem();
    let pi1 = Permutation::from_images(&PRINTED_PI).unwrap();
    let rows_match = sub1.pair() == &printed_pair();
    let d1 = build_diagram(&sub1, &pi1).unwrap();
    let (p1, t1) = (count_paths(&d1).unwrap(), tarski_bound_paths(&d1).unwrap());

    let sub2 = three_config_subsystem();
    let pi2 = search_normality(sub2.pair()).unwrap().pi;
    let d2 = build_diagram(&sub2, &pi2).unwrap();
    let (p2, t2) = (count_paths(&d2).unwrap(), tarski_bound_paths(&d2).unwrap());

    let chain = chain_bound(sub2.pair()).unwrap();
    let first_a = chain
        .as_ref()
        .map(|(pi, _)| sub2.pair().a().support(pi.image(1) - 1).len());
    let ok = rows_match
        && (p1, t1) == (6, 7)
        && (p2, t2) == (4, 5)
        && sub2.l() == 3
        && first_a == Some(1)
        && chain.as_ref().map(|c| c.1) == Some(5);
    verdict(
        3,
        ok,
        &format!(
            "five-config paths={p1} bound={t1}; three-config paths={p2} bound={t2}; chain={:?}",
            chain.map(|(pi, b)| (pi.to_string(), b))
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_4_sigma_counts() {
    let mut ok = true;
    for m in 1..=12usize {
        let mut total = 0usize;
        for k in 1..=m {
            let size = o_sets(k, m).unwrap().len();
            let expected = if k == m { 1 } else { 1 << (m - k - 1) };
            ok &= size == expected;
            total += size;
        }
        ok &= total == 1 << (m - 1);
    }
    let bound = corollary_bound(7, 5);
    ok &= bound == 508u32.into();
    verdict(4, ok, &format!("m<=12 counts checked, corollary_bound(7,5)={bound}"));
    assert!(ok);
}

type Q = BigRational;

/// Solves `rows · x = rhs` exactly; `Some(x)` only for a unique solution.
fn unique_solution(mut rows: Vec<Vec<Q>>, mut rhs: Vec<Q>, vars: usize) -> Option<Vec<Q>> {
    let mut pivot_row = 0;
    for col in 0..vars {
        let p = (pivot_row..rows.len()).find(|&r| !rows[r][col].is_zero())?;
        rows.swap(pivot_row, p);
        rhs.swap(pivot_row, p);
        let inv = Q::one() / rows[pivot_row][col].clone();
        for c in 0..vars {
            rows[pivot_row][c] = &rows[pivot_row][c] * &inv;
        }
        rhs[pivot_row] = &rhs[pivot_row] * &inv;
        for r in 0..rows.len() {
            if r != pivot_row && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in 0..vars {
                    let delta = &f * &rows[pivot_row][c];
                    rows[r][c] = &rows[r][c] - delta;
                }
                let delta = &f * &rhs[pivot_row];
                rhs[r] = &rhs[r] - delta;
            }
        }
        pivot_row += 1;
    }
    if rhs[pivot_row..].iter().any(|v| !v.is_zero()) {
        return None;
    }
    Some(rhs[..vars].to_vec())
}

/// `{Mx = 0, Σx = 1, x ≥ 0}` is nonempty iff it has a vertex, i.e. a column
/// support on which the equality system has a unique nonnegative solution.
fn feasible_by_vertices(m: &[Vec<i64>]) -> bool {
    let cols = m[0].len();
    for mask in 1u32..(1 << cols) {
        let support: Vec<usize> = (0..cols).filter(|c| mask >> c & 1 == 1).collect();
        let mut rows: Vec<Vec<Q>> = m
            .iter()
            .map(|r| support.iter().map(|&c| Q::from_integer(r[c].into())).collect())
            .collect();
        rows.push(vec![Q::one(); support.len()]);
        let mut rhs = vec![Q::zero(); m.len()];
        rhs.push(Q::one());
        if let Some(x) = unique_solution(rows, rhs, support.len()) {
            if x.iter().all(|v| !v.is_negative()) {
                return true;
            }
        }
    }
    false
}

#[test]
fn criterion_5_gordan_against_vertex_enumeration() {
    let start = Instant::now();
    let mut total = 0u64;
    let mut disagreements = 0u64;
    let mut unverified = 0u64;
    for rows in 1..=3usize {
        for cols in 1..=3usize {
            let cells = rows * cols;
            for code in 0..3u32.pow(cells as u32) {
                let mut c = code;
                let entries: Vec<i64> = (0..cells)
                    .map(|_| {
                        let v = (c % 3) as i64 - 1;
                        c /= 3;
                        v
                    })
                    .collect();
                let nested: Vec<Vec<i64>> = entries.chunks(cols).map(|r| r.to_vec()).collect();
                let m = IntMatrix::from_rows(&nested).unwrap();
                let outcome = gordan_alternative(&m);
                total += 1;
                if outcome.is_solution() != feasible_by_vertices(&nested) {
                    disagreements += 1;
                }
                let independent = match &outcome {
                    GordanOutcome::Solution(x) => {
                        x.iter().all(|v| !v.is_negative())
                            && x.iter().any(|v| !v.is_zero())
                            && nested.iter().all(|r| {
                                r.iter()
                                    .zip(x)
                                    .map(|(&a, v)| Q::from_integer(a.into()) * v)
                                    .fold(Q::zero(), |s, t| s + t)
                                    .is_zero()
                            })
                    }
                    GordanOutcome::Certificate(y) => (0..cols).all(|c| {
                        nested
                            .iter()
                            .zip(y)
                            .map(|(r, w)| BigInt::from(r[c]) * w)
                            .sum::<BigInt>()
                            .is_positive()
                    }),
                };
                if !(independent && outcome.verify(&m)) {
                    unverified += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = total == 21297 && disagreements == 0 && unverified == 0 && elapsed.as_secs() < 120;
    verdict(
        5,
        ok,
        &format!(
            "matrices={total} disagreements={disagreements} unverified={unverified} time={elapsed:?}"
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_6_normal_pairs_have_no_solution() {
    let mut normal = 0u64;
    let mut bad = 0u64;
    for n in 1..=3 {
        for l in 1..=3 {
            for pair in scan_instances(n, l).unwrap() {
                if classify_instance(&pair).is_some() {
                    normal += 1;
                    if has_nontrivial_nonneg_solution(&pair.difference()) {
                        bad += 1;
                    }
                }
            }
        }
    }
    let ok = normal > 0 && bad == 0;
    verdict(6, ok, &format!("normal pairs={normal} with nonnegative solution={bad}"));
    assert!(ok);
}

#[test]
fn criterion_7_conjecture_scan() {
    let start = Instant::now();
    let report = conjecture_scan(3, 3, 1, false).unwrap();
    let elapsed = start.elapsed();
    let again = conjecture_scan(3, 3, 4, false).unwrap();
    let deterministic = report == again && report.to_string() == again.to_string();

    let mut mismatches = 0u64;
    let mut oracle_rejected = Vec::new();
    for n in 1..=3 {
        for l in 1..=3 {
            for pair in scan_instances(n, l).unwrap() {
                let a = small(pair.a().as_int());
                let b = small(pair.b().as_int());
                let brute = brute_force_normal(&a, &b);
                if brute != classify_instance(&pair).is_some() {
                    mismatches += 1;
                }
                if !brute {
                    oracle_rejected.push(pair);
                }
            }
        }
    }
    let listed: Vec<&SystemPair> = report.counterexamples.iter().map(|c| &c.pair).collect();
    let attested = report.counterexamples.iter().all(|c| c.attestation.all_rejected());
    let ok = mismatches == 0
        && deterministic
        && attested
        && listed == oracle_rejected.iter().collect::<Vec<_>>()
        && elapsed.as_secs() < 300;
    verdict(
        7,
        ok,
        &format!(
            "examined={} normal={} counterexamples={} mismatches={mismatches} deterministic={deterministic} time={elapsed:?}",
            report.examined(),
            report.normal(),
            report.counterexamples.len()
        ),
    );
    for c in &report.counterexamples {
        verdict(7, attested, &format!("counterexample {}", c.pair.inline()));
    }
    assert!(ok);
}

/// Reduced words of length at most `r` by brute force over all letter strings.
fn brute_ball(r: usize) -> Vec<GroupWord> {
    let letters = [1, -1, 2, -2];
    let mut all = vec![GroupWord::identity()];
    let mut layer = vec![Vec::<i32>::new()];
    for _ in 0..r {
        let mut next = Vec::new();
        for w in &layer {
            for &l in &letters {
                let mut v = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        for w in &next {
            let mut cur = w.clone();
            loop {
                let pos = cur.windows(2).position(|p| p[0] == -p[1]);
                match pos {
                    Some(i) => {
                        cur.drain(i..i + 2);
                    }
                    None => break,
                }
            }
            let g = GroupWord::from_letters(cur);
            if !all.contains(&g) {
                all.push(g);
            }
        }
        layer = next;
    }
    all
}

/// Words beginning with `a`, `a⁻¹`, `b`, `b⁻¹` as first-letter blocks 2..=5.
fn classical_free_decomposition(inst: &Instance<'_, FreeGroupOracle>) -> Decomposition {
    let starting = |block: usize| -> Region {
        let atoms = inst
            .configs()
            .items()
            .iter()
            .enumerate()
            .filter(|(_, c)| c.block_at(0) == block)
            .map(|(i, _)| i);
        Region::atoms(GroupWord::identity(), atoms)
    };
    let everything = Region::atoms(GroupWord::identity(), 0..inst.configs().len());
    let a = GroupWord::generator(1);
    let b = GroupWord::generator(2);
    let piece = |label: &str, block, word: &GroupWord| DecompositionPiece {
        label: label.into(),
        region: starting(block),
        word: word.clone(),
    };
    Decomposition {
        pieces: vec![
            piece("W(a)", 2, &GroupWord::identity()),
            piece("W(a^-1)", 3, &a),
            piece("W(b)", 4, &GroupWord::identity()),
            piece("W(b^-1)", 5, &b),
        ],
        families: [vec![0, 1], vec![2, 3]],
        complete: false,
        identities: vec![
            SetIdentity {
                label: "G = W(a) + aW(a^-1)".into(),
                target: everything.clone(),
                parts: vec![
                    ("W(a)".into(), starting(2), GroupWord::identity()),
                    ("aW(a^-1)".into(), starting(3), a.clone()),
                ],
            },
            SetIdentity {
                label: "G = W(b) + bW(b^-1)".into(),
                target: everything,
                parts: vec![
                    ("W(b)".into(), starting(4), GroupWord::identity()),
                    ("bW(b^-1)".into(), starting(5), b.clone()),
                ],
            },
        ],
    }
}

#[test]
fn criterion_8_free_group_verification() {
    let start = Instant::now();
    let g = FreeGroupOracle::first_letter(2).unwrap();
    let ball3 = g.ball(3).unwrap();
    let brute = brute_ball(3);
    let same_set = ball3.len() == brute.len() && brute.iter().all(|w| ball3.contains(w));

    let gens = vec![GroupWord::generator(1), GroupWord::generator(2)];
    let configs = generate_configurations(&g, &gens, 4).unwrap();
    let inst = Instance::new(&g, gens, configs.set).unwrap();
    let plan = classical_free_decomposition(&inst);
    let report = verify_decomposition(&plan, &inst, 4).unwrap();

    let mut duplicated = plan.clone();
    duplicated.pieces.push(duplicated.pieces[0].clone());
    let dup_report = verify_decomposition(&duplicated, &inst, 4).unwrap();
    let dup_flagged = dup_report.has_violation(ViolationKind::Overlap)
        && dup_report.witnesses.iter().all(|w| !w.witness.is_empty());

    let mut dropped = plan.clone();
    dropped.families[0].retain(|&i| i != 1);
    let drop_report = verify_decomposition(&dropped, &inst, 4).unwrap();
    let drop_flagged = drop_report.has_violation(ViolationKind::Missing);
    let elapsed = start.elapsed();

    let ok = ball3.len() == 53
        && same_set
        && configs.stable
        && report.passed()
        && dup_flagged
        && drop_flagged
        && elapsed.as_secs() < 10;
    let first = |r: &paradecomp::grouporacle::VerificationReport| {
        r.witnesses
            .first()
            .map(|w| format!("{} at {}", w.check, w.witness))
            .unwrap_or_default()
    };
    verdict(
        8,
        ok,
        &format!(
            "|ball(3)|={} clean={} duplicated-piece=[{}] dropped-piece=[{}] time={elapsed:?}",
            ball3.len(),
            report.passed(),
            first(&dup_report),
            first(&drop_report)
        ),
    );
    assert!(ok);
}

fn write_fixture(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn matrix_text<const C: usize>(rows: &[[u8; C]]) -> String {
    let mut s = format!("{} {}\n", rows.len(), C);
    for r in rows {
        s += &r.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
        s.push('\n');
    }
    s
}

#[test]
fn criterion_9_jobs_do_not_change_output() {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("acceptance-determinism");
    std::fs::create_dir_all(&dir).unwrap();
    let a = write_fixture(&dir, "A.txt", &matrix_text(&PRINTED_A));
    let b = write_fixture(&dir, "B.txt", &matrix_text(&PRINTED_B));
    let cfg = write_fixture(&dir, "three.cfg", &three_configs().to_string());
    let sub = write_fixture(
        &dir,
        "three.sub",
        "eq=2,0,3 orient=+ mult=3\neq=1,0,1 orient=+ mult=2\neq=1,0,2 orient=+ mult=2\n",
    );
    let s = |p: &Path| p.to_str().unwrap().to_string();
    let commands: Vec<Vec<String>> = vec![
        vec!["check-normal".into(), s(&a), s(&b)],
        vec!["search-normal".into(), s(&a), s(&b)],
        vec!["search-normal".into(), s(&b), s(&a), "--attest".into()],
        vec!["decompose".into(), s(&cfg), s(&sub)],
        vec!["scan".into(), "--n".into(), "3".into(), "--l".into(), "3".into()],
        vec![
            "scan".into(),
            "--n".into(),
            "3".into(),
            "--l".into(),
            "3".into(),
            "--format".into(),
            "tsv".into(),
        ],
    ];
    let mut differing = Vec::new();
    for cmd in &commands {
        let run = |jobs: &str| {
            Command::new(env!("CARGO_BIN_EXE_paradecomp"))
                .args(cmd)
                .args(["--jobs", jobs])
                .output()
                .unwrap()
        };
        let (one, eight) = (run("1"), run("8"));
        if one.stdout != eight.stdout || one.status.code() != eight.status.code() || one.stdout.is_empty() {
            differing.push(cmd[0].clone());
        }
    }
    let ok = differing.is_empty();
    verdict(
        9,
        ok,
        &format!("{} commands compared at --jobs 1 and 8, differing={differing:?}", commands.len()),
    );
    assert!(ok);
}
