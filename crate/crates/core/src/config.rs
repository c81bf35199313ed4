//! Configuration sets, the configuration-equation system and oriented
//! subsystems of it.
//!
//! For a configuration `C = (c_0, …, c_n)` the atom `x_j(C)` lies in block
//! `E_i` exactly when `c_j = i`, so the equation for block `i` and positions
//! `j < k` has coefficient vectors `b_C = [c_j = i]` and `a_C = [c_k = i]`.
//! Because `g_k Ã = E_i = g_j B̃`, the set side `B̃` is the image of `Ã` under
//! `g_j⁻¹ g_k` (with `g_0` the identity).

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::gordan::MAX_BINARIZED_ROWS;
use crate::intmat::{BinMatrix, IntMatrix, Permutation};
use crate::normality::SystemPair;
use crate::word::GroupWord;

/// `(c_0, c_1, …, c_n)` with 1-based block indices.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Configuration(pub Vec<usize>);

impl Configuration {
    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    pub fn block_at(&self, position: usize) -> usize {
        self.0[position]
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConfigurationSet {
    n: usize,
    m: usize,
    items: Vec<Configuration>,
}

impl ConfigurationSet {
    /// `n` generators, `m` blocks; items must be distinct tuples of length `n + 1`.
    pub fn new(n: usize, m: usize, items: Vec<Configuration>) -> Result<Self> {
        if m == 0 {
            return Err(Error::Precondition("block count must be positive".into()));
        }
        if items.is_empty() {
            return Err(Error::Precondition("configuration set is empty".into()));
        }
        let mut seen = HashSet::new();
        for (idx, c) in items.iter().enumerate() {
            if c.0.len() != n + 1 {
                return Err(Error::Precondition(format!(
                    "configuration {} has length {}, expected {}",
                    idx + 1,
                    c.0.len(),
                    n + 1
                )));
            }
            if let Some(bad) = c.0.iter().find(|&&b| b == 0 || b > m) {
                return Err(Error::Precondition(format!(
                    "configuration {} uses block {bad} outside 1..={m}",
                    idx + 1
                )));
            }
            if !seen.insert(c.clone()) {
                return Err(Error::Precondition(format!(
                    "configuration {} duplicates {c}",
                    idx + 1
                )));
            }
        }
        Ok(Self { n, m, items })
    }

    pub fn from_tuples(n: usize, m: usize, tuples: &[&[usize]]) -> Result<Self> {
        Self::new(n, m, tuples.iter().map(|t| Configuration(t.to_vec())).collect())
    }

    /// Number of generators.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of partition blocks.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of configurations `ℓ`.
    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[Configuration] {
        &self.items
    }

    pub fn index_of(&self, c: &Configuration) -> Option<usize> {
        self.items.iter().position(|x| x == c)
    }
}

impl fmt::Display for ConfigurationSet {
    /// Configuration-set text format: `n m` header, then one tuple per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.n, self.m)?;
        for c in &self.items {
            let parts: Vec<String> = c.0.iter().map(ToString::to_string).collect();
            writeln!(f, "{}", parts.join(" "))?;
        }
        Ok(())
    }
}

/// Identifies the equation for block `i` and positions `j < k`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct EquationId {
    pub block: usize,
    pub j: usize,
    pub k: usize,
}

impl fmt::Display for EquationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.block, self.j, self.k)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Equation {
    pub id: EquationId,
    /// `b_C = [c_j = i]`
    pub b: Vec<bool>,
    /// `a_C = [c_k = i]`
    pub a: Vec<bool>,
}

impl Equation {
    /// `b − a` as integers.
    pub fn difference(&self) -> Vec<i64> {
        self.b
            .iter()
            .zip(&self.a)
            .map(|(&b, &a)| i64::from(b) - i64::from(a))
            .collect()
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EquationSystem {
    n: usize,
    m: usize,
    l: usize,
    equations: Vec<Equation>,
}

/// All `m·(n+1)·n/2` configuration equations, ordered by block then `(j, k)`.
pub fn generate_equations(cs: &ConfigurationSet) -> EquationSystem {
    let mut equations = Vec::with_capacity(cs.m() * (cs.n() + 1) * cs.n() / 2);
    for block in 1..=cs.m() {
        for j in 0..=cs.n() {
            for k in j + 1..=cs.n() {
                let member = |pos: usize| -> Vec<bool> {
                    cs.items().iter().map(|c| c.block_at(pos) == block).collect()
                };
                equations.push(Equation {
                    id: EquationId { block, j, k },
                    b: member(j),
                    a: member(k),
                });
            }
        }
    }
    EquationSystem {
        n: cs.n(),
        m: cs.m(),
        l: cs.len(),
        equations,
    }
}

impl EquationSystem {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn equations(&self) -> &[Equation] {
        &self.equations
    }

    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    pub fn find(&self, id: EquationId) -> Option<usize> {
        self.equations.iter().position(|e| e.id == id)
    }

    fn side_matrix(&self, pick: impl Fn(&Equation) -> &Vec<bool>) -> BinMatrix {
        let bits: Vec<bool> = self.equations.iter().flat_map(|e| pick(e).clone()).collect();
        BinMatrix::from_bits(self.equations.len(), self.l, &bits).expect("non-empty system")
    }

    /// Stacked `a` coefficients, one row per equation.
    pub fn a_matrix(&self) -> BinMatrix {
        self.side_matrix(|e| &e.a)
    }

    pub fn b_matrix(&self) -> BinMatrix {
        self.side_matrix(|e| &e.b)
    }

    /// Stacked `b − a`; the system reads `(b − a) · f = 0`.
    pub fn matrix(&self) -> IntMatrix {
        self.b_matrix()
            .as_int()
            .checked_sub(self.a_matrix().as_int())
            .expect("same shape")
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Orientation {
    /// `A`-side from `a` (position `k`), `B`-side from `b` (position `j`).
    AsIs,
    Swapped,
}

impl Orientation {
    pub fn symbol(self) -> char {
        match self {
            Orientation::AsIs => '+',
            Orientation::Swapped => '-',
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Selection {
    pub equation: EquationId,
    pub orientation: Orientation,
    pub multiplicity: usize,
}

impl fmt::Display for Selection {
    /// Selection line format `eq=<i,j,k> orient=<+|-> mult=<p>`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "eq={} orient={} mult={}",
            self.equation,
            self.orientation.symbol(),
            self.multiplicity
        )
    }
}

/// One expanded row `t` of a subsystem.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SubsystemRow {
    pub equation: EquationId,
    pub orientation: Orientation,
    pub block: usize,
    /// Position of the `B` side.
    pub j: usize,
    /// Position of the `A` side.
    pub k: usize,
    /// `A_t = {C : c_k = i}` as configuration indices (0-based).
    pub a_set: Vec<usize>,
    pub b_set: Vec<usize>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subsystem {
    n: usize,
    l: usize,
    selections: Vec<Selection>,
    rows: Vec<SubsystemRow>,
    pair: SystemPair,
}

impl Subsystem {
    pub fn new(system: &EquationSystem, selections: Vec<Selection>) -> Result<Self> {
        let mut rows = Vec::new();
        for sel in &selections {
            if sel.multiplicity == 0 {
                return Err(Error::Precondition(format!(
                    "selection eq={} has multiplicity 0",
                    sel.equation
                )));
            }
            let idx = system.find(sel.equation).ok_or_else(|| {
                Error::Precondition(format!("no equation eq={}", sel.equation))
            })?;
            let eq = &system.equations()[idx];
            let (a_bits, b_bits, j, k) = match sel.orientation {
                Orientation::AsIs => (&eq.a, &eq.b, eq.id.j, eq.id.k),
                Orientation::Swapped => (&eq.b, &eq.a, eq.id.k, eq.id.j),
            };
            let support = |bits: &Vec<bool>| -> Vec<usize> {
                bits.iter().enumerate().filter(|(_, &b)| b).map(|(c, _)| c).collect()
            };
            for _ in 0..sel.multiplicity {
                rows.push(SubsystemRow {
                    equation: sel.equation,
                    orientation: sel.orientation,
                    block: sel.equation.block,
                    j,
                    k,
                    a_set: support(a_bits),
                    b_set: support(b_bits),
                });
            }
        }
        if rows.is_empty() {
            return Err(Error::Precondition("subsystem selects no rows".into()));
        }
        if rows.len() > MAX_BINARIZED_ROWS {
            return Err(Error::ResourceGuard(format!(
                "subsystem has {} rows",
                rows.len()
            )));
        }
        let l = system.l();
        let bits = |f: &dyn Fn(&SubsystemRow) -> &Vec<usize>| -> Vec<bool> {
            rows.iter()
                .flat_map(|r| {
                    let mut line = vec![false; l];
                    for &c in f(r) {
                        line[c] = true;
                    }
                    line
                })
                .collect()
        };
        let pair = SystemPair::new(
            BinMatrix::from_bits(rows.len(), l, &bits(&|r| &r.a_set))?,
            BinMatrix::from_bits(rows.len(), l, &bits(&|r| &r.b_set))?,
        )?;
        Ok(Self {
            n: system.n(),
            l,
            selections,
            rows,
            pair,
        })
    }

    /// Subsystem selected by a Gordan certificate over the stacked `b − a`
    /// matrix: equation `i` with multiplicity `|m_i|`, swapped when `m_i < 0`.
    pub fn from_certificate(system: &EquationSystem, m: &[BigInt]) -> Result<Self> {
        if m.len() != system.len() {
            return Err(Error::Dimension(format!(
                "certificate of length {} for {} equations",
                m.len(),
                system.len()
            )));
        }
        let mut selections = Vec::new();
        for (eq, mi) in system.equations().iter().zip(m) {
            if mi.is_zero() {
                continue;
            }
            let multiplicity = mi
                .abs()
                .to_usize()
                .filter(|&v| v <= MAX_BINARIZED_ROWS)
                .ok_or_else(|| Error::ResourceGuard(format!("multiplicity {mi} too large")))?;
            selections.push(Selection {
                equation: eq.id,
                orientation: if mi.is_negative() {
                    Orientation::Swapped
                } else {
                    Orientation::AsIs
                },
                multiplicity,
            });
        }
        Self::new(system, selections)
    }

    /// Number of generators of the underlying configuration set.
    pub fn generator_count(&self) -> usize {
        self.n
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn selections(&self) -> &[Selection] {
        &self.selections
    }

    pub fn rows(&self) -> &[SubsystemRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn pair(&self) -> &SystemPair {
        &self.pair
    }
}

/// `V` rows from the `A` sides, `W` rows from the `B` sides.
pub fn subsystem_to_pair(sub: &Subsystem) -> SystemPair {
    sub.pair.clone()
}

/// Word `w_t` with `w_t · Ã_t = B̃_t`, namely `g_{j_t}⁻¹ g_{k_t}`.
pub fn transfer_word(sub: &Subsystem, t: usize) -> Result<GroupWord> {
    let row = sub
        .rows
        .get(t)
        .ok_or_else(|| Error::Range(format!("row {t} of {}", sub.rows.len())))?;
    Ok(transfer_word_for(row.j, row.k))
}

pub(crate) fn transfer_word_for(j: usize, k: usize) -> GroupWord {
    if j == k {
        return GroupWord::identity();
    }
    let mut letters = Vec::new();
    if j != 0 {
        letters.push(-(j as i32));
    }
    if k != 0 {
        letters.push(k as i32);
    }
    GroupWord::from_letters(letters)
}

/// For every `m` in `π`-order: `⋃_{k<m} (A_k ∩ A_m) ⊆ ⋃_{i<m} B_i`.
pub fn prefix_condition(sub: &Subsystem, pi: &Permutation) -> Result<bool> {
    check_order(sub, pi)?;
    let l = sub.l;
    let order = pi.zero_based();
    let mut seen_a = vec![false; l];
    let mut seen_b = vec![false; l];
    for &r in order {
        let row = &sub.rows[r];
        if row.a_set.iter().any(|&c| seen_a[c] && !seen_b[c]) {
            return Ok(false);
        }
        for &c in &row.a_set {
            seen_a[c] = true;
        }
        for &c in &row.b_set {
            seen_b[c] = true;
        }
    }
    Ok(true)
}

fn check_order(sub: &Subsystem, pi: &Permutation) -> Result<()> {
    if pi.size() != sub.len() {
        return Err(Error::Dimension(format!(
            "permutation of size {} for {} rows",
            pi.size(),
            sub.len()
        )));
    }
    Ok(())
}

/// `α = Σ_t (W_t − V_t)`.
pub fn alpha_vector(sub: &Subsystem) -> Vec<BigInt> {
    sub.pair.row_sum_diff().vector
}

/// Stock bookkeeping of processing the rows in `π`-order.
///
/// Each step consumes one copy of every atom in its `A`-set and produces one
/// copy of every atom in its `B`-set. A consumed copy is taken from the
/// unconsumed outputs of the earliest earlier step that still holds one;
/// only when none exists is fresh material drawn, and that draw is recorded
/// in `P_i`. `Q_i` is the part of step `i`'s output never consumed later.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StockFlow {
    /// `P'_i` per step (in `π`-order), as configuration index lists.
    pub fresh: Vec<Vec<usize>>,
    /// `Q'_i` per step.
    pub leftover: Vec<Vec<usize>>,
    /// For step `s` and each atom of its `A`-set: `None` if fresh, else the
    /// earlier step whose output copy was consumed.
    pub supply: Vec<Vec<(usize, Option<usize>)>>,
}

impl StockFlow {
    /// `Σ_i P'_i`.
    pub fn fresh_totals(&self, l: usize) -> Vec<u64> {
        totals(&self.fresh, l)
    }

    /// `Σ_i Q'_i`.
    pub fn leftover_totals(&self, l: usize) -> Vec<u64> {
        totals(&self.leftover, l)
    }
}

fn totals(sets: &[Vec<usize>], l: usize) -> Vec<u64> {
    let mut out = vec![0u64; l];
    for s in sets {
        for &c in s {
            out[c] += 1;
        }
    }
    out
}

pub fn stock_flow(sub: &Subsystem, pi: &Permutation) -> Result<StockFlow> {
    check_order(sub, pi)?;
    let p = sub.len();
    let l = sub.l;
    // available[c]: steps whose output copy of c is unconsumed, ascending
    let mut available: Vec<Vec<usize>> = vec![Vec::new(); l];
    let mut fresh = vec![Vec::new(); p];
    let mut supply = vec![Vec::new(); p];
    let mut consumed = vec![Vec::new(); p];
    for (step, &r) in pi.zero_based().iter().enumerate() {
        let row = &sub.rows[r];
        for &c in &row.a_set {
            if available[c].is_empty() {
                fresh[step].push(c);
                supply[step].push((c, None));
            } else {
                let from = available[c].remove(0);
                consumed[from].push(c);
                supply[step].push((c, Some(from)));
            }
        }
        for &c in &row.b_set {
            available[c].push(step);
        }
    }
    let leftover = pi
        .zero_based()
        .iter()
        .enumerate()
        .map(|(step, &r)| {
            sub.rows[r]
                .b_set
                .iter()
                .copied()
                .filter(|c| !consumed[step].contains(c))
                .collect()
        })
        .collect();
    Ok(StockFlow {
        fresh,
        leftover,
        supply,
    })
}

/// True iff every `α_C = 1` and every configuration is drawn fresh exactly once.
pub fn completeness_check(sub: &Subsystem, pi: &Permutation) -> Result<bool> {
    let alpha = alpha_vector(sub);
    if !alpha.iter().all(Signed::is_positive) {
        return Err(Error::Precondition("alpha is not strictly positive".into()));
    }
    let flow = stock_flow(sub, pi)?;
    let fresh = flow.fresh_totals(sub.l);
    Ok(alpha
        .iter()
        .zip(&fresh)
        .all(|(a, &f)| *a == BigInt::from(1) && f == 1))
}
