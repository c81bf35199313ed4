//! Normality of a homogeneous system `(B − A) X = 0` with `A`, `B` (0,1)-matrices.
//!
//! The system is normal when `Σ_i (B_i − A_i)` is strictly positive and some
//! permutation `π` makes every entry of `T P_π (B − A) − P_π⁺ A` at least `−1`.
//! Row `t` of that matrix is `Σ_{s≤t} (B − A)_{π(s)} − A_{π(t+1)}` (indices
//! cyclic), so it only depends on `π(1..=t+1)`; the search below checks each
//! row as soon as it is complete and prunes the subtree otherwise.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::intmat::{
    apply_permutation, prefix_sum_rows, row_sum_diff, shift_permutation, BinMatrix, IntMatrix,
    Permutation, RowSumDiff,
};

/// Pairs with `n·ℓ` above this need an explicit override to be scanned.
pub const SCAN_GUARD_CELLS: usize = 12;

/// The `(A, B)` pair of a system `(B − A) X = 0`; rows may repeat.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SystemPair {
    a: BinMatrix,
    b: BinMatrix,
}

impl SystemPair {
    pub fn new(a: BinMatrix, b: BinMatrix) -> Result<Self> {
        if a.rows() != b.rows() || a.cols() != b.cols() {
            return Err(Error::Dimension(format!(
                "A is {}x{}, B is {}x{}",
                a.rows(),
                a.cols(),
                b.rows(),
                b.cols()
            )));
        }
        Ok(Self { a, b })
    }

    pub fn from_rows(a: &[Vec<u8>], b: &[Vec<u8>]) -> Result<Self> {
        Self::new(BinMatrix::from_rows(a)?, BinMatrix::from_rows(b)?)
    }

    pub fn a(&self) -> &BinMatrix {
        &self.a
    }

    pub fn b(&self) -> &BinMatrix {
        &self.b
    }

    /// Number of equations `n`.
    pub fn rows(&self) -> usize {
        self.a.rows()
    }

    /// Number of variables `ℓ`.
    pub fn cols(&self) -> usize {
        self.a.cols()
    }

    /// `B − A`.
    pub fn difference(&self) -> IntMatrix {
        self.b
            .as_int()
            .checked_sub(self.a.as_int())
            .expect("shapes checked at construction")
    }

    pub fn row_sum_diff(&self) -> RowSumDiff {
        row_sum_diff(self)
    }

    /// The same pair with rows reordered by `π` on both sides.
    pub fn permute_rows(&self, pi: &Permutation) -> Result<Self> {
        Self::new(
            BinMatrix::new(apply_permutation(pi, self.a.as_int())?)?,
            BinMatrix::new(apply_permutation(pi, self.b.as_int())?)?,
        )
    }

    /// Inline serialisation `A=[[..],..] B=[[..],..]` used in scan reports.
    pub fn inline(&self) -> String {
        format!("A={} B={}", inline_matrix(&self.a), inline_matrix(&self.b))
    }
}

fn inline_matrix(m: &BinMatrix) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|r| {
            let bits: Vec<&str> = m
                .bit_row(r)
                .iter()
                .map(|&b| if b { "1" } else { "0" })
                .collect();
            format!("[{}]", bits.join(","))
        })
        .collect();
    format!("[{}]", rows.join(","))
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NormalityCertificate {
    pub pi: Permutation,
    pub matrix: IntMatrix,
}

/// `T P_π (B − A) − P_π⁺ A`.
pub fn certificate_matrix(pair: &SystemPair, pi: &Permutation) -> Result<IntMatrix> {
    let permuted = apply_permutation(pi, &pair.difference())?;
    let shifted = apply_permutation(&shift_permutation(pi), pair.a().as_int())?;
    prefix_sum_rows(&permuted).checked_sub(&shifted)
}

pub fn verify_normality(pair: &SystemPair, pi: &Permutation) -> bool {
    if !pair.row_sum_diff().strictly_positive {
        return false;
    }
    match certificate_matrix(pair, pi) {
        Ok(cert) => *cert.min_entry() >= BigInt::from(-1),
        Err(_) => false,
    }
}

/// Small-integer view of a pair used by the searches.
struct Rows {
    diff: Vec<Vec<i64>>,
    a: Vec<Vec<i64>>,
    /// `dup_of[j] = Some(i)` when row `i < j` is identical to row `j`.
    dup_of: Vec<Option<usize>>,
}

impl Rows {
    fn new(pair: &SystemPair) -> Self {
        let to_i64 = |m: &IntMatrix| -> Vec<Vec<i64>> {
            m.iter_rows()
                .map(|r| r.iter().map(|v| v.to_i64().expect("0/1 entries")).collect())
                .collect()
        };
        let a = to_i64(pair.a().as_int());
        let b = to_i64(pair.b().as_int());
        let diff = a
            .iter()
            .zip(&b)
            .map(|(ar, br)| br.iter().zip(ar).map(|(x, y)| x - y).collect())
            .collect();
        let dup_of = (0..a.len())
            .map(|j| (0..j).rev().find(|&i| a[i] == a[j] && b[i] == b[j]))
            .collect();
        Self { diff, a, dup_of }
    }

    fn len(&self) -> usize {
        self.a.len()
    }
}

struct Dfs<'a> {
    rows: &'a Rows,
    order: Vec<usize>,
    used: Vec<bool>,
    prefix: Vec<i64>,
    nodes: u64,
}

impl<'a> Dfs<'a> {
    fn new(rows: &'a Rows, cols: usize) -> Self {
        Self {
            rows,
            order: Vec::with_capacity(rows.len()),
            used: vec![false; rows.len()],
            prefix: vec![0; cols],
            nodes: 0,
        }
    }

    fn push(&mut self, r: usize) {
        self.used[r] = true;
        self.order.push(r);
        for (p, d) in self.prefix.iter_mut().zip(&self.rows.diff[r]) {
            *p += d;
        }
    }

    fn pop(&mut self) {
        let r = self.order.pop().expect("non-empty order");
        self.used[r] = false;
        for (p, d) in self.prefix.iter_mut().zip(&self.rows.diff[r]) {
            *p -= d;
        }
    }

    /// Row of the certificate closed by appending `next`.
    fn row_ok(&self, next: usize) -> bool {
        self.prefix
            .iter()
            .zip(&self.rows.a[next])
            .all(|(p, a)| p - a >= -1)
    }

    fn run(&mut self) -> bool {
        self.nodes += 1;
        let n = self.rows.len();
        if self.order.len() == n {
            return self.row_ok(self.order[0]);
        }
        for r in 0..n {
            if self.used[r] {
                continue;
            }
            // identical unused row with a smaller index was already explored
            if let Some(i) = self.rows.dup_of[r] {
                if !self.used[i] {
                    continue;
                }
            }
            if !self.order.is_empty() && !self.row_ok(r) {
                continue;
            }
            self.push(r);
            if self.run() {
                return true;
            }
            self.pop();
        }
        false
    }
}

/// Lexicographically smallest `π` certifying normality, if any.
pub fn search_normality(pair: &SystemPair) -> Option<NormalityCertificate> {
    search_normality_with_jobs(pair, 1)
}

/// As [`search_normality`], fanning out over `π(1)` on `jobs` worker threads.
/// The result does not depend on `jobs`.
pub fn search_normality_with_jobs(pair: &SystemPair, jobs: usize) -> Option<NormalityCertificate> {
    if !pair.row_sum_diff().strictly_positive {
        return None;
    }
    let rows = Rows::new(pair);
    let n = rows.len();
    let cols = pair.cols();
    let first_choice = |first: usize| -> Option<Vec<usize>> {
        if rows.dup_of[first].is_some() {
            return None;
        }
        let mut dfs = Dfs::new(&rows, cols);
        dfs.push(first);
        dfs.run().then(|| dfs.order.clone())
    };
    let order = if jobs <= 1 {
        (0..n).find_map(first_choice)
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("thread pool");
        let found: Vec<Option<Vec<usize>>> =
            pool.install(|| (0..n).into_par_iter().map(first_choice).collect());
        found.into_iter().flatten().next()
    }?;
    let pi = Permutation::from_zero_based(order);
    let matrix = certificate_matrix(pair, &pi).expect("sizes match");
    debug_assert!(verify_normality(pair, &pi));
    Some(NormalityCertificate { pi, matrix })
}

/// Outcome of enumerating all `n!` permutations without pruning.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Attestation {
    pub permutations_checked: u64,
    pub permutations_rejected: u64,
}

impl Attestation {
    pub fn all_rejected(&self) -> bool {
        self.permutations_checked == self.permutations_rejected
    }
}

/// Checks every permutation of the rows of `pair` with [`verify_normality`].
pub fn attest_exhaustively(pair: &SystemPair) -> Attestation {
    let n = pair.rows();
    let mut checked = 0u64;
    let mut rejected = 0u64;
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        checked += 1;
        let pi = Permutation::from_zero_based(perm.clone());
        if !verify_normality(pair, &pi) {
            rejected += 1;
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Attestation {
        permutations_checked: checked,
        permutations_rejected: rejected,
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("pivot exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Canonical instances of shape `n × ℓ`: rows encoded as `(A-row, B-row)`
/// codes in `0..4^ℓ`, non-decreasing, with strictly positive row-sum
/// difference. Sorting the rows quotients simultaneous row permutations,
/// which preserve normality.
pub fn scan_instances(n: usize, l: usize) -> Result<Vec<SystemPair>> {
    let kinds = 1usize
        .checked_shl(2 * l as u32)
        .ok_or_else(|| Error::ResourceGuard(format!("row alphabet for l={l} too large")))?;
    let mut out = Vec::new();
    let mut codes = vec![0usize; n];
    loop {
        if let Some(pair) = decode_instance(&codes, l) {
            out.push(pair);
        }
        // next non-decreasing sequence
        let Some(pos) = (0..n).rev().find(|&i| codes[i] + 1 < kinds) else {
            break;
        };
        let v = codes[pos] + 1;
        for c in codes[pos..].iter_mut() {
            *c = v;
        }
    }
    Ok(out)
}

fn decode_instance(codes: &[usize], l: usize) -> Option<SystemPair> {
    let mut a = Vec::with_capacity(codes.len() * l);
    let mut b = Vec::with_capacity(codes.len() * l);
    let mut sums = vec![0i64; l];
    for &code in codes {
        for c in 0..l {
            let abit = (code >> (l + c)) & 1 == 1;
            let bbit = (code >> c) & 1 == 1;
            sums[c] += i64::from(bbit) - i64::from(abit);
            a.push(abit);
            b.push(bbit);
        }
    }
    if sums.iter().any(|&s| s <= 0) {
        return None;
    }
    let n = codes.len();
    SystemPair::new(
        BinMatrix::from_bits(n, l, &a).ok()?,
        BinMatrix::from_bits(n, l, &b).ok()?,
    )
    .ok()
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DimensionSummary {
    pub n: usize,
    pub l: usize,
    pub examined: u64,
    pub normal: u64,
    pub counterexamples: u64,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Counterexample {
    pub pair: SystemPair,
    pub attestation: Attestation,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ScanReport {
    pub n_max: usize,
    pub l_max: usize,
    pub dimensions: Vec<DimensionSummary>,
    pub counterexamples: Vec<Counterexample>,
}

impl ScanReport {
    pub fn examined(&self) -> u64 {
        self.dimensions.iter().map(|d| d.examined).sum()
    }

    pub fn normal(&self) -> u64 {
        self.dimensions.iter().map(|d| d.normal).sum()
    }

    /// Tab-separated rendering: one summary row per dimension, then one row per counterexample.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("kind\tn\tl\texamined\tnormal\tcounterexamples\tdetail\n");
        for d in &self.dimensions {
            out += &format!(
                "dims\t{}\t{}\t{}\t{}\t{}\t-\n",
                d.n, d.l, d.examined, d.normal, d.counterexamples
            );
        }
        for c in &self.counterexamples {
            out += &format!(
                "counterexample\t{}\t{}\t-\t-\t-\t{} rejected={}/{}\n",
                c.pair.rows(),
                c.pair.cols(),
                c.pair.inline(),
                c.attestation.permutations_rejected,
                c.attestation.permutations_checked
            );
        }
        out
    }
}

impl fmt::Display for ScanReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "scan n<={} l<={}", self.n_max, self.l_max)?;
        for d in &self.dimensions {
            writeln!(
                f,
                "dims n={} l={} examined={} normal={} counterexamples={}",
                d.n, d.l, d.examined, d.normal, d.counterexamples
            )?;
        }
        writeln!(
            f,
            "total examined={} normal={} counterexamples={}",
            self.examined(),
            self.normal(),
            self.counterexamples.len()
        )?;
        for c in &self.counterexamples {
            writeln!(
                f,
                "COUNTEREXAMPLE n={} l={} {} rejected={}/{}",
                c.pair.rows(),
                c.pair.cols(),
                c.pair.inline(),
                c.attestation.permutations_rejected,
                c.attestation.permutations_checked
            )?;
        }
        Ok(())
    }
}

/// Per-instance path of the scanner.
pub fn classify_instance(pair: &SystemPair) -> Option<NormalityCertificate> {
    search_normality(pair)
}

/// Exhaustively scans every canonical instance with `1 ≤ n ≤ n_max`,
/// `1 ≤ ℓ ≤ l_max` for pairs that admit no normality certificate.
pub fn conjecture_scan(n_max: usize, l_max: usize, jobs: usize, force: bool) -> Result<ScanReport> {
    if n_max == 0 || l_max == 0 {
        return Err(Error::Precondition("scan bounds must be positive".into()));
    }
    if n_max * l_max > SCAN_GUARD_CELLS && !force {
        return Err(Error::ResourceGuard(format!(
            "n*l = {} exceeds {SCAN_GUARD_CELLS}; enumeration is 4^(n*l)",
            n_max * l_max
        )));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .expect("thread pool");
    let mut dimensions = Vec::new();
    let mut counterexamples = Vec::new();
    for n in 1..=n_max {
        for l in 1..=l_max {
            let instances = scan_instances(n, l)?;
            let normal: Vec<bool> = pool.install(|| {
                instances
                    .par_iter()
                    .map(|p| classify_instance(p).is_some())
                    .collect()
            });
            let mut found = 0;
            for (pair, ok) in instances.iter().zip(&normal) {
                if !ok {
                    found += 1;
                    counterexamples.push(Counterexample {
                        pair: pair.clone(),
                        attestation: attest_exhaustively(pair),
                    });
                }
            }
            dimensions.push(DimensionSummary {
                n,
                l,
                examined: instances.len() as u64,
                normal: normal.iter().filter(|&&b| b).count() as u64,
                counterexamples: found,
            });
        }
    }
    Ok(ScanReport {
        n_max,
        l_max,
        dimensions,
        counterexamples,
    })
}
