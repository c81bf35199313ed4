use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::One;

use crate::config::{alpha_vector, completeness_check, stock_flow, Subsystem};
use crate::error::{Error, Result};
use crate::grouporacle::{
    verify_decomposition, Constraint, Decomposition, DecompositionPiece, GroupOracle, Instance,
    Region, RegionTerm, SetIdentity, VerificationReport,
};
use crate::intmat::Permutation;
use crate::word::GroupWord;

use super::diagram::{build_diagram, count_paths, Diagram};
use super::{check_plan_preconditions, g_sigma, sigma_slots, SigmaString};

/// Cap on the number of lineage paths materialised by a plan.
pub const MAX_PLAN_PATHS: usize = 100_000;

/// Pieces of `P_k` reaching step `m` along the steps of `σ`, merged over lineages.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PlanPiece {
    pub sigma: SigmaString,
    /// `g_σ` in step letters: letter `s` is the transfer word of step `s`.
    pub step_word: GroupWord,
    /// `g_σ` in generator letters, freely reduced.
    pub word: GroupWord,
    pub region: Region,
    pub lineages: usize,
    pub description: String,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PlanStep {
    /// 1-based position in `π`-order.
    pub step: usize,
    pub row: usize,
    pub word: GroupWord,
    pub a_set: Vec<usize>,
    pub b_set: Vec<usize>,
    /// `B̃ = ⊔ g_σ 𝒜_σ` over the realised strings, ordered by `(k, σ)`.
    pub pieces: Vec<PlanPiece>,
    /// `Σ_k |O_{k,m}|`, the number of strings available at this step.
    pub slots: BigUint,
}

/// A lineage ending in an atom copy that no later step consumes.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LeafPiece {
    pub label: String,
    pub config: usize,
    /// Diagram node of the leaf copy.
    pub node: usize,
    pub sigma: SigmaString,
    pub word: GroupWord,
    pub region: Region,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DecompositionPlan {
    pub pi: Permutation,
    pub steps: Vec<PlanStep>,
    pub alpha: Vec<BigInt>,
    /// Fresh material drawn per configuration.
    pub stock: Vec<u64>,
    /// Copies left over per configuration, `z_C = α_C + stock_C`.
    pub z: Vec<u64>,
    /// Steps (1-based) producing each leftover copy, per configuration.
    pub index_sets: Vec<Vec<usize>>,
    /// Result of [`completeness_check`].
    pub complete: bool,
    pub leaves: Vec<LeafPiece>,
    pub diagram: Diagram,
    pub path_count: u64,
}

struct Lineage {
    nodes: Vec<usize>,
    steps: Vec<usize>,
}

fn lineage_region(lin: &Lineage, diagram: &Diagram, step_words: &[GroupWord]) -> Region {
    let mut constraints = Vec::with_capacity(lin.nodes.len());
    let mut prefix = GroupWord::identity();
    for (i, &v) in lin.nodes.iter().enumerate() {
        if i > 0 {
            prefix = step_words[lin.steps[i - 1] - 1].concat(&prefix).reduce();
        }
        constraints.push(Constraint {
            word: prefix.clone(),
            atoms: std::iter::once(diagram.nodes()[v].config).collect(),
        });
    }
    Region {
        terms: vec![RegionTerm {
            prefix: GroupWord::identity(),
            constraints,
        }],
    }
}

fn lineage_text(lin: &Lineage, diagram: &Diagram) -> String {
    let mut s = format!("C{}", diagram.nodes()[lin.nodes[0]].config + 1);
    for (i, &v) in lin.nodes.iter().enumerate().skip(1) {
        s.push_str(&format!(" -{}-> C{}", lin.steps[i - 1], diagram.nodes()[v].config + 1));
    }
    s
}

fn step_letters(w: &GroupWord) -> String {
    let parts: Vec<String> = w.letters().iter().map(|l| format!("w{l}")).collect();
    parts.join(" ")
}

/// Symbolic plan: every lineage from fresh material to an atom copy, grouped
/// per step by its string of traversed steps.
pub fn build_plan(sub: &Subsystem, pi: &Permutation) -> Result<DecompositionPlan> {
    check_plan_preconditions(sub, pi)?;
    let diagram = build_diagram(sub, pi)?;
    let path_count = count_paths(&diagram)?;
    let flow = stock_flow(sub, pi)?;
    let l = sub.l();
    let step_words: Vec<GroupWord> = diagram.groups().iter().map(|g| g.word.clone()).collect();

    let mut lineages: Vec<Vec<Lineage>> = diagram
        .nodes()
        .iter()
        .enumerate()
        .map(|(v, n)| {
            if n.fresh {
                vec![Lineage {
                    nodes: vec![v],
                    steps: vec![],
                }]
            } else {
                Vec::new()
            }
        })
        .collect();
    let mut total = 0usize;
    let mut steps = Vec::with_capacity(sub.len());
    for g in diagram.groups() {
        let mut by_sigma: BTreeMap<(usize, Vec<usize>), Vec<Lineage>> = BTreeMap::new();
        for &c in &g.children {
            let mut here = Vec::new();
            for &s in &g.sources {
                for lin in &lineages[s] {
                    let mut nodes = lin.nodes.clone();
                    nodes.push(c);
                    let mut st = lin.steps.clone();
                    st.push(g.step);
                    here.push(Lineage { nodes, steps: st });
                }
            }
            total += here.len();
            if total > MAX_PLAN_PATHS {
                return Err(Error::ResourceGuard(format!(
                    "plan exceeds {MAX_PLAN_PATHS} lineages"
                )));
            }
            for lin in &here {
                by_sigma
                    .entry((lin.steps[0], lin.steps.clone()))
                    .or_default()
                    .push(Lineage {
                        nodes: lin.nodes.clone(),
                        steps: lin.steps.clone(),
                    });
            }
            lineages[c] = here;
        }
        let mut pieces = Vec::with_capacity(by_sigma.len());
        for ((_, st), lins) in by_sigma {
            let sigma = SigmaString::from_steps(&st)?;
            let step_word = g_sigma(&sigma);
            let word = step_word.substitute(&step_words).reduce();
            let region = lins
                .iter()
                .map(|lin| lineage_region(lin, &diagram, &step_words))
                .fold(Region::empty(), Region::union);
            let description = lins
                .iter()
                .map(|lin| lineage_text(lin, &diagram))
                .collect::<Vec<_>>()
                .join(" | ");
            pieces.push(PlanPiece {
                sigma,
                step_word,
                word,
                region,
                lineages: lins.len(),
                description,
            });
        }
        let row = &sub.rows()[g.row];
        steps.push(PlanStep {
            step: g.step,
            row: g.row,
            word: g.word.clone(),
            a_set: row.a_set.clone(),
            b_set: row.b_set.clone(),
            pieces,
            slots: sigma_slots(g.step),
        });
    }

    let leaf_nodes = diagram.leaves();
    let mut leaves = Vec::new();
    let mut index_sets = vec![Vec::new(); l];
    for &v in &leaf_nodes {
        let node = &diagram.nodes()[v];
        if !node.fresh {
            index_sets[node.config].push(node.step);
        }
        for lin in &lineages[v] {
            let sigma = SigmaString::from_steps(&lin.steps)?;
            let word = g_sigma(&sigma).substitute(&step_words).reduce();
            leaves.push(LeafPiece {
                label: format!("lineage[{}]", lineage_text(lin, &diagram)),
                config: node.config,
                node: v,
                sigma,
                word,
                region: lineage_region(lin, &diagram, &step_words),
            });
        }
    }

    Ok(DecompositionPlan {
        pi: pi.clone(),
        steps,
        alpha: alpha_vector(sub),
        stock: flow.fresh_totals(l),
        z: flow.leftover_totals(l),
        index_sets,
        complete: completeness_check(sub, pi)?,
        leaves,
        diagram,
        path_count,
    })
}

impl DecompositionPlan {
    pub fn tarski_bound(&self) -> u64 {
        self.path_count + 1
    }

    /// Two-family decomposition of the group: lineage pieces of the fresh
    /// stock plus, for each configuration with no fresh draw, its whole atom
    /// under the identity. Every configuration then has `1 + α_C` copies;
    /// the first copy of each goes to family 1 and the second to family 2.
    /// Marked complete exactly when every `α_C = 1`, so that no copy is spare.
    pub fn decomposition(&self) -> Decomposition {
        let l = self.alpha.len();
        let mut pieces = Vec::new();
        let mut copies: Vec<Vec<Vec<usize>>> = vec![Vec::new(); l];
        for c in 0..l {
            if self.stock[c] == 0 {
                pieces.push(DecompositionPiece {
                    label: format!("rest[C{}]", c + 1),
                    region: Region::atoms(GroupWord::identity(), [c]),
                    word: GroupWord::identity(),
                });
                copies[c].push(vec![pieces.len() - 1]);
            }
        }
        let mut by_node: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for leaf in &self.leaves {
            pieces.push(DecompositionPiece {
                label: leaf.label.clone(),
                region: leaf.region.clone(),
                word: leaf.word.clone(),
            });
            by_node.entry(leaf.node).or_default().push(pieces.len() - 1);
        }
        for (node, idx) in by_node {
            copies[self.diagram.nodes()[node].config].push(idx);
        }
        let mut families = [Vec::new(), Vec::new()];
        for per_config in &copies {
            for (f, family) in families.iter_mut().enumerate() {
                if let Some(idx) = per_config.get(f) {
                    family.extend_from_slice(idx);
                }
            }
        }
        let identities = self
            .steps
            .iter()
            .map(|st| SetIdentity {
                label: format!("step {}", st.step),
                target: Region::atoms(GroupWord::identity(), st.b_set.iter().copied()),
                parts: st
                    .pieces
                    .iter()
                    .map(|p| {
                        (
                            format!("k={} m={} sigma={}", p.sigma.k(), p.sigma.m(), p.sigma),
                            p.region.clone(),
                            p.word.clone(),
                        )
                    })
                    .collect(),
            })
            .collect();
        Decomposition {
            pieces,
            families,
            complete: self.alpha.iter().all(One::is_one),
            identities,
        }
    }
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn configs(set: &[usize]) -> String {
    if set.is_empty() {
        return "-".into();
    }
    set.iter().map(|c| format!("C{}", c + 1)).collect::<Vec<_>>().join(",")
}

impl fmt::Display for DecompositionPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "plan rows={} configs={}", self.steps.len(), self.alpha.len())?;
        writeln!(f, "pi {}", self.pi)?;
        writeln!(f, "alpha {}", join(&self.alpha))?;
        writeln!(f, "stock {}", join(&self.stock))?;
        writeln!(f, "z {}", join(&self.z))?;
        writeln!(f, "complete {}", self.complete)?;
        writeln!(f, "paths {}", self.path_count)?;
        writeln!(f, "tarski-bound {}", self.tarski_bound())?;
        for st in &self.steps {
            writeln!(
                f,
                "step m={} row={} word={} A={} B={} slots={}",
                st.step,
                st.row + 1,
                st.word,
                configs(&st.a_set),
                configs(&st.b_set),
                st.slots
            )?;
            for p in &st.pieces {
                writeln!(
                    f,
                    "  piece k={} m={} sigma={} g_sigma={} word={} lineages={} region={}",
                    p.sigma.k(),
                    p.sigma.m(),
                    p.sigma,
                    step_letters(&p.step_word),
                    p.word,
                    p.lineages,
                    p.description
                )?;
            }
        }
        for leaf in &self.leaves {
            writeln!(
                f,
                "leaf C{} k={} m={} sigma={} word={} {}",
                leaf.config + 1,
                leaf.sigma.k(),
                leaf.sigma.m(),
                leaf.sigma,
                leaf.word,
                leaf.label
            )?;
        }
        for (c, steps) in self.index_sets.iter().enumerate() {
            writeln!(f, "index C{} steps={}", c + 1, join(steps))?;
        }
        Ok(())
    }
}

/// [`build_plan`] followed by a ball-level check of every step identity,
/// piece disjointness and both families. The first failed check becomes a
/// construction-mismatch error naming its step (0 outside step identities).
pub fn build_plan_verified<O: GroupOracle>(
    sub: &Subsystem,
    pi: &Permutation,
    instance: &Instance<'_, O>,
    radius: usize,
) -> Result<(DecompositionPlan, VerificationReport)> {
    if instance.configs().len() != sub.l() {
        return Err(Error::Dimension(format!(
            "instance has {} configurations, subsystem {}",
            instance.configs().len(),
            sub.l()
        )));
    }
    let plan = build_plan(sub, pi)?;
    let report = verify_decomposition(&plan.decomposition(), instance, radius)?;
    let steps = plan.steps.len();
    if let Some((idx, check)) = report.checks.iter().enumerate().find(|(_, c)| c.violations > 0) {
        let witness = report.witnesses.iter().find(|w| w.check == check.name);
        return Err(Error::ConstructionMismatch {
            step: if (1..=steps).contains(&idx) { idx } else { 0 },
            sigma: witness
                .and_then(|w| w.parts.first().cloned())
                .unwrap_or_else(|| "-".into()),
            detail: witness.map_or_else(
                || check.name.clone(),
                |w| format!("{} at {}: {}", check.name, w.witness, w.detail),
            ),
        });
    }
    Ok((plan, report))
}
