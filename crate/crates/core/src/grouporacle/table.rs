use crate::error::{Error, Result};

use super::GroupOracle;

/// Table orders above this skip the cubic associativity check.
const ASSOCIATIVITY_CHECK_LIMIT: usize = 200;

/// Finite group given by its multiplication table; elements are row indices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TableGroupOracle {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
    blocks: Vec<usize>,
}

impl TableGroupOracle {
    /// `table[x][y]` is the index of `x·y`; `blocks[x]` is the 1-based block of `x`.
    pub fn new(table: Vec<Vec<usize>>, blocks: Vec<usize>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::Precondition("empty multiplication table".into()));
        }
        if table.iter().any(|row| row.len() != n || row.iter().any(|&v| v >= n)) {
            return Err(Error::Precondition(format!(
                "table must be {n}x{n} with entries in 0..{n}"
            )));
        }
        if blocks.len() != n || blocks.contains(&0) {
            return Err(Error::Precondition(format!(
                "partition must assign a block >= 1 to each of {n} elements"
            )));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::Precondition("table has no identity element".into()))?;
        let inverse = (0..n)
            .map(|x| {
                (0..n)
                    .find(|&y| table[x][y] == identity && table[y][x] == identity)
                    .ok_or_else(|| Error::Precondition(format!("element {x} has no inverse")))
            })
            .collect::<Result<Vec<_>>>()?;
        if n <= ASSOCIATIVITY_CHECK_LIMIT {
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        if table[table[x][y]][z] != table[x][table[y][z]] {
                            return Err(Error::Precondition(format!(
                                "table is not associative at ({x}, {y}, {z})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(Self {
            table,
            identity,
            inverse,
            blocks,
        })
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }
}

impl GroupOracle for TableGroupOracle {
    type Elem = usize;

    fn identity(&self) -> usize {
        self.identity
    }

    fn multiply(&self, x: &usize, y: &usize) -> usize {
        self.table[*x][*y]
    }

    fn invert(&self, x: &usize) -> usize {
        self.inverse[*x]
    }

    fn classify(&self, x: &usize) -> usize {
        self.blocks[*x]
    }

    fn block_count(&self) -> usize {
        self.blocks.iter().copied().max().unwrap_or(1)
    }

    /// Word length is taken with respect to all non-identity elements.
    fn ball(&self, radius: usize) -> Result<Vec<usize>> {
        if radius == 0 {
            Ok(vec![self.identity])
        } else {
            Ok((0..self.order()).collect())
        }
    }

    fn length(&self, x: &usize) -> usize {
        usize::from(*x != self.identity)
    }

    fn within(&self, _x: &usize, _radius: usize) -> bool {
        true
    }

    /// Every element can be classified, so no margin is lost.
    fn safe_ball(&self, _radius: usize, _margin: usize) -> Result<Vec<usize>> {
        Ok((0..self.order()).collect())
    }

    fn format(&self, x: &usize) -> String {
        x.to_string()
    }

    fn parse_element(&self, s: &str) -> Option<usize> {
        s.parse().ok().filter(|&v| v < self.order())
    }
}
