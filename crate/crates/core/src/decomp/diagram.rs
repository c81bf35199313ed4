use std::fmt::Write as _;

use crate::config::{stock_flow, transfer_word, Subsystem};
use crate::error::{Error, Result};
use crate::intmat::Permutation;
use crate::word::GroupWord;

use super::check_plan_preconditions;

/// One copy of an atom `x_0(C)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiagramNode {
    /// Configuration index, 0-based.
    pub config: usize,
    /// Step (1-based) that drew this copy fresh or produced it.
    pub step: usize,
    pub fresh: bool,
}

/// The sources, translated by `word`, are split exactly among the children.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EdgeGroup {
    /// 1-based position in the processing order.
    pub step: usize,
    /// Subsystem row, 0-based.
    pub row: usize,
    pub sources: Vec<usize>,
    pub children: Vec<usize>,
    pub word: GroupWord,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Diagram {
    nodes: Vec<DiagramNode>,
    groups: Vec<EdgeGroup>,
}

impl Diagram {
    /// Checks node references; acyclicity is checked when paths are counted.
    pub fn from_parts(nodes: Vec<DiagramNode>, groups: Vec<EdgeGroup>) -> Result<Self> {
        for g in &groups {
            if let Some(bad) = g.sources.iter().chain(&g.children).find(|&&v| v >= nodes.len()) {
                return Err(Error::MalformedDiagram(format!(
                    "edge group at step {} references node {bad} of {}",
                    g.step,
                    nodes.len()
                )));
            }
        }
        Ok(Self { nodes, groups })
    }

    pub fn nodes(&self) -> &[DiagramNode] {
        &self.nodes
    }

    pub fn groups(&self) -> &[EdgeGroup] {
        &self.groups
    }

    fn degrees(&self) -> (Vec<usize>, Vec<usize>) {
        let mut indeg = vec![0; self.nodes.len()];
        let mut outdeg = vec![0; self.nodes.len()];
        for g in &self.groups {
            for &s in &g.sources {
                outdeg[s] += g.children.len();
            }
            for &c in &g.children {
                indeg[c] += g.sources.len();
            }
        }
        (indeg, outdeg)
    }

    /// Nodes without incoming edges.
    pub fn roots(&self) -> Vec<usize> {
        let (indeg, _) = self.degrees();
        (0..self.nodes.len()).filter(|&v| indeg[v] == 0).collect()
    }

    /// Nodes without outgoing edges.
    pub fn leaves(&self) -> Vec<usize> {
        let (_, outdeg) = self.degrees();
        (0..self.nodes.len()).filter(|&v| outdeg[v] == 0).collect()
    }

    /// Graphviz rendering; nodes are labelled `C<i>` with 1-based indices.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph transfer {\n");
        for (v, node) in self.nodes.iter().enumerate() {
            let shape = if node.fresh { "box" } else { "ellipse" };
            let _ = writeln!(out, "  n{v} [label=\"C{}\", shape={shape}];", node.config + 1);
        }
        for g in &self.groups {
            for &s in &g.sources {
                for &c in &g.children {
                    let _ = writeln!(
                        out,
                        "  n{s} -> n{c} [label=\"{}\", comment=\"step {}\"];",
                        g.word, g.step
                    );
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Transfer diagram of the stock bookkeeping in `π`-order: every consumed
/// atom copy is a source of the consuming step's edge group, and every atom
/// of that step's `B`-set is a new child node.
pub fn build_diagram(sub: &Subsystem, pi: &Permutation) -> Result<Diagram> {
    check_plan_preconditions(sub, pi)?;
    let flow = stock_flow(sub, pi)?;
    let mut nodes = Vec::new();
    let mut groups = Vec::new();
    // produced[s][c]: node holding step s's output copy of configuration c
    let mut produced: Vec<Vec<Option<usize>>> = Vec::with_capacity(sub.len());
    for (step, &row) in pi.zero_based().iter().enumerate() {
        let mut sources = Vec::new();
        for &(c, from) in &flow.supply[step] {
            let node = match from {
                Some(s) => produced[s][c].expect("stock flow consumes produced copies"),
                None => {
                    nodes.push(DiagramNode {
                        config: c,
                        step: step + 1,
                        fresh: true,
                    });
                    nodes.len() - 1
                }
            };
            sources.push(node);
        }
        let mut out = vec![None; sub.l()];
        let mut children = Vec::new();
        for &c in &sub.rows()[row].b_set {
            nodes.push(DiagramNode {
                config: c,
                step: step + 1,
                fresh: false,
            });
            out[c] = Some(nodes.len() - 1);
            children.push(nodes.len() - 1);
        }
        produced.push(out);
        groups.push(EdgeGroup {
            step: step + 1,
            row,
            sources,
            children,
            word: transfer_word(sub, row)?,
        });
    }
    Diagram::from_parts(nodes, groups)
}

/// Number of root-to-leaf paths; a node that is both root and leaf is one path.
pub fn count_paths(d: &Diagram) -> Result<u64> {
    let n = d.nodes.len();
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    let (mut indeg, _) = d.degrees();
    for g in &d.groups {
        for &s in &g.sources {
            succ[s].extend_from_slice(&g.children);
        }
    }
    let roots: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut topo = Vec::with_capacity(n);
    let mut queue = roots.clone();
    while let Some(v) = queue.pop() {
        topo.push(v);
        for &w in &succ[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                queue.push(w);
            }
        }
    }
    if topo.len() != n {
        return Err(Error::MalformedDiagram("diagram contains a cycle".into()));
    }
    let overflow = || Error::ResourceGuard("path count exceeds u64".into());
    let mut to_leaf = vec![0u64; n];
    for &v in topo.iter().rev() {
        to_leaf[v] = if succ[v].is_empty() {
            1
        } else {
            succ[v]
                .iter()
                .try_fold(0u64, |acc, &w| acc.checked_add(to_leaf[w]))
                .ok_or_else(overflow)?
        };
    }
    roots
        .iter()
        .try_fold(0u64, |acc, &r| acc.checked_add(to_leaf[r]))
        .ok_or_else(overflow)
}

pub fn tarski_bound_paths(d: &Diagram) -> Result<u64> {
    count_paths(d)?
        .checked_add(1)
        .ok_or_else(|| Error::ResourceGuard("path count exceeds u64".into()))
}
