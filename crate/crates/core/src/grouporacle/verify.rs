//! Element-wise verification of a piecewise-translation decomposition on a ball.

use std::fmt;

use crate::error::Result;
use crate::word::GroupWord;

use super::{GroupOracle, Instance, Region};

/// Witnesses kept per check; the counters include all violations.
const WITNESS_LIMIT: usize = 10;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DecompositionPiece {
    pub label: String,
    pub region: Region,
    /// Translation applied when the piece is reassembled.
    pub word: GroupWord,
}

/// `target = ⊔ word_i · part_i`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SetIdentity {
    pub label: String,
    pub target: Region,
    pub parts: Vec<(String, Region, GroupWord)>,
}

/// Pairwise disjoint pieces, two families whose translates should each
/// partition the group, and optional intermediate identities.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Decomposition {
    pub pieces: Vec<DecompositionPiece>,
    pub families: [Vec<usize>; 2],
    /// Pieces are expected to cover the whole group.
    pub complete: bool,
    pub identities: Vec<SetIdentity>,
}

impl Decomposition {
    pub fn piece_count(&self) -> usize {
        self.pieces.len()
    }

    /// Longest word that verification will apply, in generator letters.
    pub fn max_word_len(&self) -> usize {
        let pieces = self.pieces.iter().map(|p| p.word.len() + p.region.max_word_len());
        let ids = self.identities.iter().flat_map(|id| {
            std::iter::once(id.target.max_word_len())
                .chain(id.parts.iter().map(|(_, r, w)| w.len() + r.max_word_len()))
        });
        pieces.chain(ids).max().unwrap_or(0)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ViolationKind {
    /// A point is covered more than once.
    Overlap,
    /// A point that should be covered is not.
    Missing,
    /// A point outside the target is covered.
    Spurious,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Violation {
    pub check: String,
    pub kind: ViolationKind,
    pub witness: String,
    pub detail: String,
    /// Labels of the pieces or parts involved, if any.
    pub parts: Vec<String>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Check {
    pub name: String,
    pub points_checked: usize,
    pub points_skipped: usize,
    pub violations: usize,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VerificationReport {
    pub radius: usize,
    pub checks: Vec<Check>,
    pub witnesses: Vec<Violation>,
}

impl VerificationReport {
    pub fn violation_count(&self) -> usize {
        self.checks.iter().map(|c| c.violations).sum()
    }

    /// No violations and every check decided at least one point.
    pub fn passed(&self) -> bool {
        self.violation_count() == 0 && self.checks.iter().all(|c| c.points_checked > 0)
    }

    pub fn has_violation(&self, kind: ViolationKind) -> bool {
        self.witnesses.iter().any(|v| v.kind == kind)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "verification radius={}", self.radius)?;
        for c in &self.checks {
            writeln!(
                f,
                "check {} points={} skipped={} violations={}",
                c.name, c.points_checked, c.points_skipped, c.violations
            )?;
        }
        for v in &self.witnesses {
            writeln!(
                f,
                "VIOLATION {} {:?} witness={} {}",
                v.check, v.kind, v.witness, v.detail
            )?;
        }
        writeln!(f, "result {}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

struct Recorder {
    checks: Vec<Check>,
    witnesses: Vec<Violation>,
}

impl Recorder {
    fn add_check(&mut self, name: String) -> usize {
        self.checks.push(Check {
            name,
            points_checked: 0,
            points_skipped: 0,
            violations: 0,
        });
        self.checks.len() - 1
    }

    fn skip(&mut self, id: usize) {
        self.checks[id].points_skipped += 1;
    }

    fn pass(&mut self, id: usize) {
        self.checks[id].points_checked += 1;
    }

    fn fail(&mut self, id: usize, kind: ViolationKind, witness: String, parts: Vec<String>) {
        let check = &mut self.checks[id];
        check.points_checked += 1;
        check.violations += 1;
        if check.violations <= WITNESS_LIMIT {
            let name = check.name.clone();
            let detail = match (kind, parts.as_slice()) {
                (ViolationKind::Overlap, [x, y, ..]) => format!("covered by {x} and {y}"),
                (ViolationKind::Spurious, [x, ..]) => format!("{x} lands outside the target"),
                _ => "not covered".to_string(),
            };
            self.witnesses.push(Violation {
                check: name,
                kind,
                witness,
                detail,
                parts,
            });
        }
    }
}

/// Outcome of counting how many of a list of sets contain a point.
enum Cover {
    /// Exact list of covering indices.
    Exact(Vec<usize>),
    /// At least these two cover the point; others undecided.
    Overlap(usize, usize),
    Undecided,
}

fn cover(values: impl Iterator<Item = Option<bool>>) -> Cover {
    let mut hits = Vec::new();
    let mut undecided = false;
    for (i, v) in values.enumerate() {
        match v {
            Some(true) => {
                hits.push(i);
                if hits.len() == 2 {
                    return Cover::Overlap(hits[0], hits[1]);
                }
            }
            Some(false) => {}
            None => undecided = true,
        }
    }
    if undecided {
        Cover::Undecided
    } else {
        Cover::Exact(hits)
    }
}

/// Checks, at every point of `ball(R)` where membership is decidable:
/// the pieces are pairwise disjoint (and cover the group when the
/// decomposition is complete), each identity's translated parts reassemble
/// its target exactly, and the translates in each family partition the group.
pub fn verify_decomposition<O: GroupOracle>(
    plan: &Decomposition,
    instance: &Instance<'_, O>,
    radius: usize,
) -> Result<VerificationReport> {
    let oracle = instance.oracle();
    let mut rec = Recorder {
        checks: Vec::new(),
        witnesses: Vec::new(),
    };
    let disjoint = rec.add_check("pieces-disjoint".into());
    let id_checks: Vec<usize> = plan
        .identities
        .iter()
        .map(|id| rec.add_check(format!("identity[{}]", id.label)))
        .collect();
    let fam_checks = [rec.add_check("family-1".into()), rec.add_check("family-2".into())];

    for y in oracle.ball(radius)? {
        let witness = oracle.format(&y);

        match cover(plan.pieces.iter().map(|p| instance.contains(&p.region, &y, radius))) {
            Cover::Overlap(a, b) => rec.fail(
                disjoint,
                ViolationKind::Overlap,
                witness.clone(),
                vec![plan.pieces[a].label.clone(), plan.pieces[b].label.clone()],
            ),
            Cover::Exact(hits) if plan.complete && hits.is_empty() => rec.fail(
                disjoint,
                ViolationKind::Missing,
                witness.clone(),
                Vec::new(),
            ),
            Cover::Exact(_) => rec.pass(disjoint),
            Cover::Undecided => rec.skip(disjoint),
        }

        for (id, &check) in plan.identities.iter().zip(&id_checks) {
            let parts = cover(
                id.parts
                    .iter()
                    .map(|(_, r, w)| instance.contains_translate(w, r, &y, radius)),
            );
            let target = instance.contains(&id.target, &y, radius);
            match (parts, target) {
                (Cover::Overlap(a, b), _) => rec.fail(
                    check,
                    ViolationKind::Overlap,
                    witness.clone(),
                    vec![id.parts[a].0.clone(), id.parts[b].0.clone()],
                ),
                (Cover::Exact(hits), Some(t)) => match (hits.len(), t) {
                    (0, true) => rec.fail(
                        check,
                        ViolationKind::Missing,
                        witness.clone(),
                        Vec::new(),
                    ),
                    (1, false) => rec.fail(
                        check,
                        ViolationKind::Spurious,
                        witness.clone(),
                        vec![id.parts[hits[0]].0.clone()],
                    ),
                    _ => rec.pass(check),
                },
                _ => rec.skip(check),
            }
        }

        for (f, &check) in plan.families.iter().zip(&fam_checks) {
            let hits = cover(f.iter().map(|&i| {
                let p = &plan.pieces[i];
                instance.contains_translate(&p.word, &p.region, &y, radius)
            }));
            match hits {
                Cover::Overlap(a, b) => rec.fail(
                    check,
                    ViolationKind::Overlap,
                    witness.clone(),
                    vec![plan.pieces[f[a]].label.clone(), plan.pieces[f[b]].label.clone()],
                ),
                Cover::Exact(h) if h.is_empty() => rec.fail(
                    check,
                    ViolationKind::Missing,
                    witness.clone(),
                    Vec::new(),
                ),
                Cover::Exact(_) => rec.pass(check),
                Cover::Undecided => rec.skip(check),
            }
        }
    }

    Ok(VerificationReport {
        radius,
        checks: rec.checks,
        witnesses: rec.witnesses,
    })
}
