//! Exact integer matrices and the three row operators used by normality
//! certificates: permutation of rows, the cyclically shifted permutation, and
//! the prefix-sum operator `T`.
//!
//! Permutations use 1-based semantics at the API surface: `image(i) = π(i)`
//! for `i ∈ 1..=n`. Applying `π` to a matrix `M` yields the matrix whose row
//! `i` is row `π(i)` of `M`, i.e. the product `P_π · M`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::normality::SystemPair;

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidMatrix(format!(
                "shape {rows}x{cols} has an empty dimension"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::InvalidMatrix(format!(
                "expected {} entries for shape {rows}x{cols}, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        Self::new(rows, cols, vec![BigInt::zero(); rows * cols])
    }

    /// Builds a matrix from nested rows; every row must have the same length.
    pub fn from_rows<T: Into<BigInt> + Copy>(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::InvalidMatrix(format!(
                    "row {} has {} entries, expected {cols}",
                    i + 1,
                    row.len()
                )));
            }
            data.extend(row.iter().map(|&v| v.into()));
        }
        Self::new(rows.len(), cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// Entry at 0-based `(r, c)`.
    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    /// Row `r` (0-based).
    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[BigInt]> {
        self.data.chunks(self.cols)
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn to_nested(&self) -> Vec<Vec<BigInt>> {
        self.iter_rows().map(<[BigInt]>::to_vec).collect()
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::Dimension(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Self::new(self.rows, self.cols, data)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Self::new(self.rows, self.cols, data)
    }

    pub fn neg(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| -v).collect(),
        }
    }

    /// Smallest entry of the matrix.
    pub fn min_entry(&self) -> &BigInt {
        self.data.iter().min().expect("matrix is non-empty")
    }

    /// Column sums, i.e. `1ᵗ M`.
    pub fn column_sums(&self) -> Vec<BigInt> {
        let mut sums = vec![BigInt::zero(); self.cols];
        for row in self.iter_rows() {
            for (s, v) in sums.iter_mut().zip(row) {
                *s += v;
            }
        }
        sums
    }

    /// `mᵗ M` for an integer row vector `m` of length `rows`.
    pub fn left_mul(&self, m: &[BigInt]) -> Result<Vec<BigInt>> {
        if m.len() != self.rows {
            return Err(Error::Dimension(format!(
                "vector of length {} against {} rows",
                m.len(),
                self.rows
            )));
        }
        let mut out = vec![BigInt::zero(); self.cols];
        for (coef, row) in m.iter().zip(self.iter_rows()) {
            if coef.is_zero() {
                continue;
            }
            for (o, v) in out.iter_mut().zip(row) {
                *o += coef * v;
            }
        }
        Ok(out)
    }

    /// True if every entry lies in `{0, 1}`.
    pub fn is_binary(&self) -> bool {
        self.data
            .iter()
            .all(|v| v.is_zero() || *v == BigInt::from(1))
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.data.iter().map(Signed::abs).max().unwrap_or_default()
    }
}

impl fmt::Display for IntMatrix {
    /// Matrix text format: a `rows cols` header followed by one line per row.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows, self.cols)?;
        for row in self.iter_rows() {
            let line: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// An [`IntMatrix`] whose entries all lie in `{0, 1}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BinMatrix(IntMatrix);

impl BinMatrix {
    pub fn new(m: IntMatrix) -> Result<Self> {
        if !m.is_binary() {
            return Err(Error::InvalidMatrix(
                "expected a (0,1)-matrix, found an entry outside {0,1}".into(),
            ));
        }
        Ok(Self(m))
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        Self::new(IntMatrix::from_rows(rows)?)
    }

    pub fn from_bits(rows: usize, cols: usize, bits: &[bool]) -> Result<Self> {
        let data = bits.iter().map(|&b| BigInt::from(u8::from(b))).collect();
        Self::new(IntMatrix::new(rows, cols, data)?)
    }

    pub fn as_int(&self) -> &IntMatrix {
        &self.0
    }

    pub fn into_int(self) -> IntMatrix {
        self.0
    }

    pub fn rows(&self) -> usize {
        self.0.rows
    }

    pub fn cols(&self) -> usize {
        self.0.cols
    }

    pub fn bit(&self, r: usize, c: usize) -> bool {
        !self.0.get(r, c).is_zero()
    }

    /// Row `r` as booleans.
    pub fn bit_row(&self, r: usize) -> Vec<bool> {
        (0..self.cols()).map(|c| self.bit(r, c)).collect()
    }

    /// Column indices (0-based) of the ones in row `r`.
    pub fn support(&self, r: usize) -> Vec<usize> {
        (0..self.cols()).filter(|&c| self.bit(r, c)).collect()
    }
}

impl fmt::Display for BinMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A permutation of `{1, …, n}`; ordered lexicographically by image list.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Permutation {
    // 0-based images
    image: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self {
            image: (0..n).collect(),
        }
    }

    /// From a 1-based image list `(π(1), …, π(n))`.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        if n == 0 {
            return Err(Error::InvalidPermutation("empty image list".into()));
        }
        let mut seen = vec![false; n];
        let mut image = Vec::with_capacity(n);
        for &v in images {
            if v == 0 || v > n {
                return Err(Error::InvalidPermutation(format!(
                    "image {v} outside 1..={n}"
                )));
            }
            if std::mem::replace(&mut seen[v - 1], true) {
                return Err(Error::InvalidPermutation(format!("image {v} repeated")));
            }
            image.push(v - 1);
        }
        Ok(Self { image })
    }

    /// From 0-based images; caller guarantees a bijection.
    pub(crate) fn from_zero_based(image: Vec<usize>) -> Self {
        debug_assert!({
            let mut s = image.clone();
            s.sort_unstable();
            s.iter().enumerate().all(|(i, &v)| i == v)
        });
        Self { image }
    }

    /// From disjoint cycles written 1-based, e.g. `(2 7)(4 6)` as `&[&[2, 7], &[4, 6]]`.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut image: Vec<usize> = (1..=n).collect();
        for cycle in cycles {
            for (idx, &from) in cycle.iter().enumerate() {
                let to = cycle[(idx + 1) % cycle.len()];
                if from == 0 || from > n || to == 0 || to > n {
                    return Err(Error::InvalidPermutation(format!(
                        "cycle entry outside 1..={n}"
                    )));
                }
                image[from - 1] = to;
            }
        }
        Self::from_images(&image)
    }

    pub fn size(&self) -> usize {
        self.image.len()
    }

    /// `π(i)` for 1-based `i`.
    pub fn image(&self, i: usize) -> usize {
        self.image[i - 1] + 1
    }

    pub fn images(&self) -> Vec<usize> {
        self.image.iter().map(|v| v + 1).collect()
    }

    pub(crate) fn zero_based(&self) -> &[usize] {
        &self.image
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.size()];
        for (i, &v) in self.image.iter().enumerate() {
            inv[v] = i;
        }
        Self { image: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &v)| i == v)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.images().iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

/// `P_π M`: row `i` of the result is row `π(i)` of `m`.
pub fn apply_permutation(pi: &Permutation, m: &IntMatrix) -> Result<IntMatrix> {
    if pi.size() != m.rows() {
        return Err(Error::Dimension(format!(
            "permutation of size {} applied to {} rows",
            pi.size(),
            m.rows()
        )));
    }
    let mut data = Vec::with_capacity(m.rows * m.cols);
    for &src in pi.zero_based() {
        data.extend_from_slice(m.row(src));
    }
    IntMatrix::new(m.rows, m.cols, data)
}

/// The permutation `π⁺` with `P_{π⁺} = P_ρ P_π`, ρ the cycle `(1 2 … n)`:
/// `π⁺(i) = π(i+1)` for `i < n` and `π⁺(n) = π(1)`.
pub fn shift_permutation(pi: &Permutation) -> Permutation {
    let mut image = pi.image.clone();
    image.rotate_left(1);
    Permutation { image }
}

/// `T M` where `T` is lower-triangular all-ones: row `j` is the sum of rows `1..=j`.
pub fn prefix_sum_rows(m: &IntMatrix) -> IntMatrix {
    let mut data = m.data.clone();
    for r in 1..m.rows {
        for c in 0..m.cols {
            let prev = data[(r - 1) * m.cols + c].clone();
            data[r * m.cols + c] += prev;
        }
    }
    IntMatrix {
        rows: m.rows,
        cols: m.cols,
        data,
    }
}

/// `Σ_i (B_i − A_i)` together with its strict positivity.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RowSumDiff {
    pub vector: Vec<BigInt>,
    pub strictly_positive: bool,
}

pub fn row_sum_diff(pair: &SystemPair) -> RowSumDiff {
    let diff = pair.difference();
    let vector = diff.column_sums();
    let strictly_positive = vector.iter().all(Signed::is_positive);
    RowSumDiff {
        vector,
        strictly_positive,
    }
}
