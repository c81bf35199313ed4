//! Gordan's alternative decided exactly over the rationals.
//!
//! For an integer matrix `M` (variables indexed by columns) exactly one of
//! the following holds:
//!
//! * there is `x ≥ 0`, `x ≠ 0` with `M x = 0`;
//! * there is an integer vector `m` with `mᵗ M > 0` entrywise.
//!
//! The first branch is decided as feasibility of `{M x = 0, 1ᵗx = 1, x ≥ 0}`
//! with a phase-one simplex over `BigRational` using Bland's rule. When that
//! program is infeasible the optimal phase-one dual `u` yields the separating
//! vector `m = −u_M`, which is scaled to integers by the lcm of its
//! denominators.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::intmat::{BinMatrix, IntMatrix};
use crate::normality::SystemPair;

/// Largest total row count `binarize` will materialise.
pub const MAX_BINARIZED_ROWS: usize = 100_000;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum GordanOutcome {
    /// Nonnegative, nonzero `x` with `M x = 0`; normalised so `Σ x = 1`.
    Solution(Vec<BigRational>),
    /// Integer `m` with `mᵗ M` strictly positive.
    Certificate(Vec<BigInt>),
}

impl GordanOutcome {
    /// Re-checks the branch against `m` from scratch.
    pub fn verify(&self, m: &IntMatrix) -> bool {
        match self {
            GordanOutcome::Solution(x) => verify_solution(m, x),
            GordanOutcome::Certificate(c) => verify_certificate(m, c),
        }
    }

    pub fn is_solution(&self) -> bool {
        matches!(self, GordanOutcome::Solution(_))
    }
}

pub fn verify_solution(m: &IntMatrix, x: &[BigRational]) -> bool {
    if x.len() != m.cols() || x.iter().any(Signed::is_negative) || x.iter().all(Zero::is_zero) {
        return false;
    }
    m.iter_rows().all(|row| {
        row.iter()
            .zip(x)
            .fold(BigRational::zero(), |acc, (a, xi)| {
                acc + BigRational::from_integer(a.clone()) * xi
            })
            .is_zero()
    })
}

pub fn verify_certificate(m: &IntMatrix, c: &[BigInt]) -> bool {
    match m.left_mul(c) {
        Ok(v) => v.iter().all(Signed::is_positive),
        Err(_) => false,
    }
}

/// Decides the alternative for `m`; the returned branch has been verified.
pub fn gordan_alternative(m: &IntMatrix) -> GordanOutcome {
    let outcome = match phase_one(m) {
        PhaseOne::Feasible(x) => GordanOutcome::Solution(x),
        PhaseOne::Infeasible(dual) => GordanOutcome::Certificate(integer_certificate(&dual)),
    };
    assert!(
        outcome.verify(m),
        "simplex produced an invalid Gordan branch for a {}x{} matrix",
        m.rows(),
        m.cols()
    );
    outcome
}

/// True iff `M x = 0` has a nonnegative nonzero solution.
pub fn has_nontrivial_nonneg_solution(m: &IntMatrix) -> bool {
    matches!(phase_one(m), PhaseOne::Feasible(_))
}

fn integer_certificate(dual: &[BigRational]) -> Vec<BigInt> {
    let scale = dual
        .iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    dual.iter()
        .map(|q| (q * BigRational::from_integer(scale.clone())).to_integer())
        .collect()
}

enum PhaseOne {
    Feasible(Vec<BigRational>),
    /// Separating vector `−u_M` before integer scaling.
    Infeasible(Vec<BigRational>),
}

/// Phase-one simplex on `[M; 1ᵗ] x + s = (0, …, 0, 1)`, minimising `Σ s`.
fn phase_one(m: &IntMatrix) -> PhaseOne {
    let rows = m.rows() + 1;
    let nx = m.cols();
    let ncols = nx + rows;
    let zero = BigRational::zero();
    let one = BigRational::one();

    // tableau rows: coefficients for [x | s] followed by rhs
    let mut tab: Vec<Vec<BigRational>> = Vec::with_capacity(rows);
    for r in 0..rows {
        let mut line = vec![zero.clone(); ncols + 1];
        for c in 0..nx {
            line[c] = if r < m.rows() {
                BigRational::from_integer(m.get(r, c).clone())
            } else {
                one.clone()
            };
        }
        line[nx + r] = one.clone();
        if r == rows - 1 {
            line[ncols] = one.clone();
        }
        tab.push(line);
    }
    let mut basis: Vec<usize> = (nx..ncols).collect();

    // reduced costs: c_j − c_Bᵗ B⁻¹ A_j, with c = (0, …, 0, 1, …, 1)
    let mut rc = vec![zero.clone(); ncols + 1];
    for line in &tab {
        for c in 0..nx {
            rc[c] -= &line[c];
        }
        rc[ncols] -= &line[ncols];
    }

    while let Some(enter) = (0..ncols).find(|&j| rc[j].is_negative()) {
        let mut leave: Option<usize> = None;
        let mut best: Option<BigRational> = None;
        for r in 0..rows {
            if !tab[r][enter].is_positive() {
                continue;
            }
            let ratio = &tab[r][ncols] / &tab[r][enter];
            let better = match &best {
                None => true,
                Some(b) => ratio < *b || (ratio == *b && basis[r] < basis[leave.unwrap()]),
            };
            if better {
                best = Some(ratio);
                leave = Some(r);
            }
        }
        // The phase-one objective is bounded below by 0, so a leaving row exists.
        let leave = leave.expect("phase-one program is bounded");
        pivot(&mut tab, &mut rc, leave, enter);
        basis[leave] = enter;
    }

    let objective = -rc[ncols].clone();
    if objective.is_zero() {
        let mut x = vec![zero; nx];
        for (r, &var) in basis.iter().enumerate() {
            if var < nx {
                x[var] = tab[r][ncols].clone();
            }
        }
        PhaseOne::Feasible(x)
    } else {
        // u_i = 1 − rc(s_i); the separating vector is −u over the rows of M.
        let sep = (0..m.rows()).map(|i| &rc[nx + i] - &one).collect();
        PhaseOne::Infeasible(sep)
    }
}

fn pivot(tab: &mut [Vec<BigRational>], rc: &mut [BigRational], row: usize, col: usize) {
    let p = tab[row][col].clone();
    for v in tab[row].iter_mut() {
        *v /= &p;
    }
    let pivot_row = tab[row].clone();
    for (r, line) in tab.iter_mut().enumerate() {
        if r == row || line[col].is_zero() {
            continue;
        }
        let f = line[col].clone();
        for (v, pv) in line.iter_mut().zip(&pivot_row) {
            if !pv.is_zero() {
                *v -= &f * pv;
            }
        }
    }
    if !rc[col].is_zero() {
        let f = rc[col].clone();
        for (v, pv) in rc.iter_mut().zip(&pivot_row) {
            if !pv.is_zero() {
                *v -= &f * pv;
            }
        }
    }
}

/// Builds a row-sum-positive pair from an arbitrary `(A, B)` and an integer
/// vector `m` with `mᵗ(B − A) > 0`: row `i` is repeated `m_i` times, repeated
/// `|m_i|` times with its sides exchanged when `m_i < 0`, and dropped when
/// `m_i = 0`.
pub fn binarize(a: &BinMatrix, b: &BinMatrix, m: &[BigInt]) -> Result<SystemPair> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::Dimension(format!(
            "A is {}x{}, B is {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    if m.len() != a.rows() {
        return Err(Error::Dimension(format!(
            "certificate of length {} for {} rows",
            m.len(),
            a.rows()
        )));
    }
    let cols = a.cols();
    let mut a_bits = Vec::new();
    let mut b_bits = Vec::new();
    let mut total = 0usize;
    for (i, mi) in m.iter().enumerate() {
        let times = mi
            .abs()
            .to_usize()
            .filter(|t| *t <= MAX_BINARIZED_ROWS)
            .ok_or_else(|| Error::ResourceGuard(format!("multiplicity {mi} too large")))?;
        total += times;
        if total > MAX_BINARIZED_ROWS {
            return Err(Error::ResourceGuard(format!(
                "binarized system exceeds {MAX_BINARIZED_ROWS} rows"
            )));
        }
        let (left, right) = if mi.is_negative() { (b, a) } else { (a, b) };
        for _ in 0..times {
            a_bits.extend(left.bit_row(i));
            b_bits.extend(right.bit_row(i));
        }
    }
    if total == 0 {
        return Err(Error::InvalidCertificate("certificate is identically zero".into()));
    }
    let pair = SystemPair::new(
        BinMatrix::from_bits(total, cols, &a_bits)?,
        BinMatrix::from_bits(total, cols, &b_bits)?,
    )?;
    if !pair.row_sum_diff().strictly_positive {
        return Err(Error::InvalidCertificate(
            "mᵗ(B − A) is not strictly positive".into(),
        ));
    }
    Ok(pair)
}
