//! Decomposition plans, transfer diagrams and Tarski-number bounds built
//! from a normal subsystem of configuration equations.
//!
//! Rows are processed in `π`-order. Row `t` says that the union of the
//! atoms in `A_t`, translated by `w_t = g_j⁻¹ g_k`, is exactly the union of
//! the atoms in `B_t`. Every consumed atom copy is taken from the leftover
//! output of the earliest earlier step that still holds one, and fresh
//! material is drawn only when none exists (see [`crate::config::stock_flow`]).

mod diagram;
mod plan;

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

pub use diagram::{build_diagram, count_paths, tarski_bound_paths, Diagram, DiagramNode, EdgeGroup};
pub use plan::{
    build_plan, build_plan_verified, DecompositionPlan, LeafPiece, PlanPiece, PlanStep,
};

use crate::config::{prefix_condition, stock_flow, Subsystem};
use crate::error::{Error, Result};
use crate::intmat::Permutation;
use crate::normality::{verify_normality, SystemPair};
use crate::word::GroupWord;

/// Longest `σ` span enumerated by [`o_sets`].
const MAX_SIGMA_SPAN: usize = 24;

/// Row limit for [`chain_bound`]; failed states are memoised per row subset.
const MAX_CHAIN_ROWS: usize = 24;

/// `(σ_k, …, σ_m)` with both ends set; indices are 1-based steps.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct SigmaString {
    k: usize,
    m: usize,
    bits: Vec<bool>,
}

impl SigmaString {
    pub fn new(k: usize, m: usize, bits: Vec<bool>) -> Result<Self> {
        if k == 0 || k > m {
            return Err(Error::Range(format!("sigma span {k}..={m}")));
        }
        if bits.len() != m - k + 1 || !bits[0] || !bits[bits.len() - 1] {
            return Err(Error::Precondition(format!(
                "sigma over {k}..={m} needs {} bits with both ends set",
                m - k + 1
            )));
        }
        Ok(Self { k, m, bits })
    }

    /// The string with ones exactly at the given steps.
    pub fn from_steps(steps: &[usize]) -> Result<Self> {
        let (k, m) = match (steps.first(), steps.last()) {
            (Some(&k), Some(&m)) => (k, m),
            _ => return Err(Error::Precondition("sigma needs at least one step".into())),
        };
        if k == 0 || steps.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Precondition(format!("steps {steps:?} not increasing from 1")));
        }
        let mut bits = vec![false; m - k + 1];
        for &s in steps {
            bits[s - k] = true;
        }
        Self::new(k, m, bits)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Steps with `σ_i = 1`, ascending.
    pub fn steps(&self) -> Vec<usize> {
        (self.k..=self.m).filter(|&i| self.bits[i - self.k]).collect()
    }

    pub fn ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

impl fmt::Display for SigmaString {
    /// Bits from `σ_k` to `σ_m`, e.g. `101`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// `O_{k,m}`: `{(1)}` when `k = m`, otherwise every string with `σ_k = σ_m = 1`,
/// ordered by the middle bits read as a binary number.
pub fn o_sets(k: usize, m: usize) -> Result<Vec<SigmaString>> {
    if k == 0 || k > m {
        return Err(Error::Range(format!("O({k},{m}) needs 1 <= k <= m")));
    }
    if m - k > MAX_SIGMA_SPAN {
        return Err(Error::ResourceGuard(format!(
            "O({k},{m}) has 2^{} strings",
            m - k - 1
        )));
    }
    if k == m {
        return Ok(vec![SigmaString { k, m, bits: vec![true] }]);
    }
    let inner = m - k - 1;
    Ok((0u64..1 << inner)
        .map(|mask| {
            let mut bits = Vec::with_capacity(m - k + 1);
            bits.push(true);
            bits.extend((0..inner).rev().map(|b| mask >> b & 1 == 1));
            bits.push(true);
            SigmaString { k, m, bits }
        })
        .collect())
}

/// `Σ_{k ≤ m} |O_{k,m}| = 2^{m−1}`.
pub fn sigma_slots(m: usize) -> BigUint {
    if m == 0 {
        return BigUint::from(0u32);
    }
    BigUint::one() << (m - 1)
}

/// `g_σ = g_m^{σ_m} ⋯ g_k^{σ_k}` in step letters, highest index leftmost.
pub fn g_sigma(sigma: &SigmaString) -> GroupWord {
    GroupWord::from_letters(sigma.steps().iter().rev().map(|&s| s as i32).collect())
}

/// `(ℓ − 1)(2ⁿ − 1)`.
pub fn corollary_bound(n: usize, l: usize) -> BigUint {
    let pieces = (BigUint::one() << n) - BigUint::one();
    BigUint::from(l.saturating_sub(1)) * pieces
}

/// Vertex pair of the graph on stock vectors: fresh totals and leftover totals.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GammaEdge {
    pub source: Vec<u64>,
    pub target: Vec<u64>,
}

impl fmt::Display for GammaEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &[u64]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        write!(f, "({}) -> ({})", show(&self.source), show(&self.target))
    }
}

pub(crate) fn check_plan_preconditions(sub: &Subsystem, pi: &Permutation) -> Result<()> {
    if pi.size() != sub.len() {
        return Err(Error::Dimension(format!(
            "permutation of size {} for {} rows",
            pi.size(),
            sub.len()
        )));
    }
    if !verify_normality(sub.pair(), pi) {
        return Err(Error::Precondition(format!("subsystem is not normal under pi = {pi}")));
    }
    if !prefix_condition(sub, pi)? {
        return Err(Error::Precondition(format!("prefix condition fails under pi = {pi}")));
    }
    Ok(())
}

pub fn gamma_edge(sub: &Subsystem, pi: &Permutation) -> Result<GammaEdge> {
    check_plan_preconditions(sub, pi)?;
    let flow = stock_flow(sub, pi)?;
    Ok(GammaEdge {
        source: flow.fresh_totals(sub.l()),
        target: flow.leftover_totals(sub.l()),
    })
}

/// Lexicographically first ordering with `A_{P(i+1)} ⊆ B_{P(i)}` for every
/// consecutive pair, and the bound `1 + |A_{P(1)}| + ℓ`. Requires the row
/// sums of `B − A` to be all ones.
pub fn chain_bound(pair: &SystemPair) -> Result<Option<(Permutation, u64)>> {
    let diff = pair.row_sum_diff().vector;
    if diff.iter().any(|v| !v.is_one()) {
        return Err(Error::NotApplicable(
            "column sums of B - A are not all ones".into(),
        ));
    }
    let rows = pair.rows();
    if rows > MAX_CHAIN_ROWS {
        return Err(Error::ResourceGuard(format!(
            "chain search limited to {MAX_CHAIN_ROWS} rows, got {rows}"
        )));
    }
    let a: Vec<Vec<usize>> = (0..rows).map(|r| pair.a().support(r)).collect();
    let b: Vec<Vec<bool>> = (0..rows).map(|r| pair.b().bit_row(r)).collect();
    let same = |x: usize, y: usize| pair.a().bit_row(x) == pair.a().bit_row(y) && b[x] == b[y];
    let first_dup: Vec<usize> = (0..rows).map(|r| (0..=r).find(|&q| same(q, r)).unwrap_or(r)).collect();
    let fits = |prev: usize, next: usize| a[next].iter().all(|&c| b[prev][c]);

    let mut order = Vec::with_capacity(rows);
    let mut used = vec![false; rows];
    let mut dead = HashSet::new();
    if !chain_dfs(&mut order, &mut used, &mut dead, &first_dup, &fits) {
        return Ok(None);
    }
    let pi = Permutation::from_zero_based(order);
    let bound = 1 + a[pi.zero_based()[0]].len() as u64 + pair.cols() as u64;
    Ok(Some((pi, bound)))
}

fn chain_dfs(
    order: &mut Vec<usize>,
    used: &mut [bool],
    dead: &mut HashSet<(usize, u64)>,
    first_dup: &[usize],
    fits: &dyn Fn(usize, usize) -> bool,
) -> bool {
    if order.len() == used.len() {
        return true;
    }
    let mask = used.iter().enumerate().fold(0u64, |m, (i, &u)| m | (u64::from(u) << i));
    let state = (order.last().copied().unwrap_or(usize::MAX), mask);
    if dead.contains(&state) {
        return false;
    }
    for r in 0..used.len() {
        if used[r] {
            continue;
        }
        // identical rows are interchangeable: only the lowest unused one is tried
        if (first_dup[r]..r).any(|q| !used[q] && first_dup[q] == first_dup[r]) {
            continue;
        }
        if let Some(&prev) = order.last() {
            if !fits(prev, r) {
                continue;
            }
        }
        used[r] = true;
        order.push(r);
        if chain_dfs(order, used, dead, first_dup, fits) {
            return true;
        }
        order.pop();
        used[r] = false;
    }
    dead.insert(state);
    false
}
