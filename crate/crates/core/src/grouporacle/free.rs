use crate::error::{Error, Result};
use crate::word::GroupWord;

use super::{GroupOracle, MAX_BALL_SIZE};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PartitionRule {
    /// Identity in block 1; words starting with letter `x_i` in block `2i`,
    /// with `x_i⁻¹` in block `2i + 1`.
    FirstLetter,
    /// Longest matching reduced prefix wins; unmatched words go to `default`.
    Prefix {
        rules: Vec<(GroupWord, usize)>,
        default: usize,
    },
}

/// Free group of the given rank with reduced words as elements.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FreeGroupOracle {
    rank: usize,
    rule: PartitionRule,
}

impl FreeGroupOracle {
    pub fn new(rank: usize, rule: PartitionRule) -> Result<Self> {
        if rank == 0 || rank > 26 {
            return Err(Error::Precondition(format!("free rank {rank} outside 1..=26")));
        }
        if let PartitionRule::Prefix { rules, default } = &rule {
            if *default == 0 || rules.iter().any(|(w, b)| *b == 0 || w.max_index() > rank) {
                return Err(Error::Precondition(
                    "prefix rules need blocks >= 1 and letters within the rank".into(),
                ));
            }
        }
        let rule = match rule {
            PartitionRule::Prefix { rules, default } => PartitionRule::Prefix {
                rules: rules.into_iter().map(|(w, b)| (w.reduce(), b)).collect(),
                default,
            },
            other => other,
        };
        Ok(Self { rank, rule })
    }

    pub fn first_letter(rank: usize) -> Result<Self> {
        Self::new(rank, PartitionRule::FirstLetter)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Letters in shortlex order: `x_1, x_1⁻¹, x_2, x_2⁻¹, …`.
    fn letters(&self) -> Vec<i32> {
        (1..=self.rank as i32).flat_map(|i| [i, -i]).collect()
    }
}

impl GroupOracle for FreeGroupOracle {
    type Elem = GroupWord;

    fn identity(&self) -> GroupWord {
        GroupWord::identity()
    }

    fn multiply(&self, x: &GroupWord, y: &GroupWord) -> GroupWord {
        x.concat(y).reduce()
    }

    fn invert(&self, x: &GroupWord) -> GroupWord {
        x.inverse()
    }

    fn classify(&self, x: &GroupWord) -> usize {
        match &self.rule {
            PartitionRule::FirstLetter => match x.letters().first() {
                None => 1,
                Some(&l) if l > 0 => 2 * l as usize,
                Some(&l) => 2 * l.unsigned_abs() as usize + 1,
            },
            PartitionRule::Prefix { rules, default } => rules
                .iter()
                .filter(|(p, _)| x.letters().starts_with(p.letters()))
                .max_by_key(|(p, _)| p.len())
                .map_or(*default, |(_, b)| *b),
        }
    }

    fn block_count(&self) -> usize {
        match &self.rule {
            PartitionRule::FirstLetter => 2 * self.rank + 1,
            PartitionRule::Prefix { rules, default } => rules
                .iter()
                .map(|(_, b)| *b)
                .chain(std::iter::once(*default))
                .max()
                .unwrap_or(1),
        }
    }

    fn ball(&self, radius: usize) -> Result<Vec<GroupWord>> {
        let letters = self.letters();
        let mut all = vec![GroupWord::identity()];
        let mut frontier = vec![GroupWord::identity()];
        for _ in 0..radius {
            let mut next = Vec::new();
            for w in &frontier {
                for &l in &letters {
                    if w.letters().last() == Some(&-l) {
                        continue;
                    }
                    let mut v = w.letters().to_vec();
                    v.push(l);
                    next.push(GroupWord::from_letters(v));
                }
            }
            if all.len() + next.len() > MAX_BALL_SIZE {
                return Err(Error::ResourceGuard(format!(
                    "ball of radius {radius} exceeds {MAX_BALL_SIZE} elements"
                )));
            }
            all.extend(next.iter().cloned());
            frontier = next;
        }
        Ok(all)
    }

    fn length(&self, x: &GroupWord) -> usize {
        x.len()
    }

    fn within(&self, x: &GroupWord, radius: usize) -> bool {
        x.len() <= radius
    }

    fn format(&self, x: &GroupWord) -> String {
        x.to_alphabetic()
    }

    fn parse_element(&self, s: &str) -> Option<GroupWord> {
        let w = GroupWord::parse_alphabetic(s)?;
        (w.max_index() <= self.rank).then(|| w.reduce())
    }
}
