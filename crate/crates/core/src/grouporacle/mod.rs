//! Concrete groups for checking decompositions on finite portions of a group.
//!
//! A [`GroupOracle`] bundles a group with a partition `ℰ = {E_1, …, E_m}` of
//! it. Together with a generator string `𝔤` it becomes an [`Instance`], on
//! which configuration atoms `x_0(C) = E_{c_0} ∩ ⋂_j g_j⁻¹ E_{c_j}` and
//! [`Region`]s built from them can be evaluated element by element.
//!
//! Infinite groups are only explored inside `ball(R)`. An evaluation that
//! would need to classify an element outside the ball returns `None`, and
//! such points are excluded from every identity being checked.

mod free;
mod table;
mod verify;

use std::collections::{BTreeSet, HashMap};
use std::fmt::Debug;
use std::hash::Hash;

pub use free::{FreeGroupOracle, PartitionRule};
pub use table::TableGroupOracle;
pub use verify::{
    verify_decomposition, Check, Decomposition, DecompositionPiece, SetIdentity,
    VerificationReport, Violation, ViolationKind,
};

use crate::config::{Configuration, ConfigurationSet};
use crate::error::{Error, Result};
use crate::word::GroupWord;

/// Largest ball the oracles will enumerate.
pub const MAX_BALL_SIZE: usize = 2_000_000;

pub trait GroupOracle {
    type Elem: Clone + Eq + Hash + Ord + Debug;

    fn identity(&self) -> Self::Elem;
    fn multiply(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn invert(&self, x: &Self::Elem) -> Self::Elem;

    /// Block index in `1..=block_count()`.
    fn classify(&self, x: &Self::Elem) -> usize;
    fn block_count(&self) -> usize;

    /// Elements of word length at most `radius`, without duplicates, in a fixed order.
    fn ball(&self, radius: usize) -> Result<Vec<Self::Elem>>;

    /// Word length of `x`.
    fn length(&self, x: &Self::Elem) -> usize;

    /// Whether `x` may be classified when exploring `ball(radius)`.
    fn within(&self, x: &Self::Elem, radius: usize) -> bool;

    /// Elements `x` such that `y·x` stays inside `ball(radius)` whenever `|y| ≤ margin`.
    fn safe_ball(&self, radius: usize, margin: usize) -> Result<Vec<Self::Elem>> {
        self.ball(radius.saturating_sub(margin))
    }

    fn format(&self, x: &Self::Elem) -> String;
    fn parse_element(&self, s: &str) -> Option<Self::Elem>;
}

/// Product of a word in signed generator indices, evaluated against `gens`.
pub fn evaluate_word<O: GroupOracle>(oracle: &O, gens: &[O::Elem], word: &GroupWord) -> O::Elem {
    word.letters().iter().fold(oracle.identity(), |acc, &l| {
        let g = &gens[l.unsigned_abs() as usize - 1];
        let factor = if l > 0 { g.clone() } else { oracle.invert(g) };
        oracle.multiply(&acc, &factor)
    })
}

/// `(classify(x), classify(g_1 x), …, classify(g_n x))`.
pub fn configuration_of<O: GroupOracle>(oracle: &O, gens: &[O::Elem], x: &O::Elem) -> Configuration {
    let mut tuple = Vec::with_capacity(gens.len() + 1);
    tuple.push(oracle.classify(x));
    for g in gens {
        tuple.push(oracle.classify(&oracle.multiply(g, x)));
    }
    Configuration(tuple)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GeneratedConfigurations {
    pub set: ConfigurationSet,
    /// Whether enumerating at radius `R + 1` yields the same set.
    pub stable: bool,
}

fn configurations_at<O: GroupOracle>(
    oracle: &O,
    gens: &[O::Elem],
    radius: usize,
) -> Result<BTreeSet<Configuration>> {
    let margin = gens.iter().map(|g| oracle.length(g)).max().unwrap_or(0);
    Ok(oracle
        .safe_ball(radius, margin)?
        .iter()
        .map(|x| configuration_of(oracle, gens, x))
        .collect())
}

/// Distinct configurations realised by elements `x` whose translates `g_j x`
/// stay inside `ball(R)`, sorted lexicographically.
pub fn generate_configurations<O: GroupOracle>(
    oracle: &O,
    gens: &[O::Elem],
    radius: usize,
) -> Result<GeneratedConfigurations> {
    if radius == 0 {
        return Err(Error::Precondition("radius must be at least 1".into()));
    }
    let here = configurations_at(oracle, gens, radius)?;
    let next = configurations_at(oracle, gens, radius + 1)?;
    let set = ConfigurationSet::new(gens.len(), oracle.block_count(), here.iter().cloned().collect())?;
    Ok(GeneratedConfigurations {
        set,
        stable: here == next,
    })
}

/// `{x : w·x ∈ D̃}` for a word `w` over the generators and a set `D` of configurations.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Constraint {
    pub word: GroupWord,
    pub atoms: BTreeSet<usize>,
}

/// `prefix · {x : every constraint holds}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RegionTerm {
    pub prefix: GroupWord,
    pub constraints: Vec<Constraint>,
}

/// Formal union of translated cells. The plain `prefix · D̃` is a term with
/// a single identity-word constraint.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Region {
    pub terms: Vec<RegionTerm>,
}

impl Region {
    pub fn empty() -> Self {
        Self::default()
    }

    /// `prefix · D̃`.
    pub fn atoms(prefix: GroupWord, atoms: impl IntoIterator<Item = usize>) -> Self {
        Self {
            terms: vec![RegionTerm {
                prefix,
                constraints: vec![Constraint {
                    word: GroupWord::identity(),
                    atoms: atoms.into_iter().collect(),
                }],
            }],
        }
    }

    pub fn union(mut self, other: Region) -> Self {
        self.terms.extend(other.terms);
        self
    }

    /// Longest word (prefix or constraint) in generator letters.
    pub fn max_word_len(&self) -> usize {
        self.terms
            .iter()
            .flat_map(|t| {
                std::iter::once(t.prefix.len())
                    .chain(t.constraints.iter().map(|c| c.word.len() + t.prefix.len()))
            })
            .max()
            .unwrap_or(0)
    }
}

/// A group, its partition, a generator string and the configuration set they realise.
pub struct Instance<'a, O: GroupOracle> {
    oracle: &'a O,
    gens: Vec<O::Elem>,
    configs: ConfigurationSet,
    // configuration indices grouped by block at each position
    by_position: Vec<HashMap<usize, BTreeSet<usize>>>,
}

impl<'a, O: GroupOracle> Instance<'a, O> {
    pub fn new(oracle: &'a O, gens: Vec<O::Elem>, configs: ConfigurationSet) -> Result<Self> {
        if configs.n() != gens.len() {
            return Err(Error::Dimension(format!(
                "{} generators for configurations of length {}",
                gens.len(),
                configs.n() + 1
            )));
        }
        let mut by_position = vec![HashMap::<usize, BTreeSet<usize>>::new(); gens.len() + 1];
        for (idx, c) in configs.items().iter().enumerate() {
            for (pos, &b) in c.entries().iter().enumerate() {
                by_position[pos].entry(b).or_default().insert(idx);
            }
        }
        Ok(Self {
            oracle,
            gens,
            configs,
            by_position,
        })
    }

    pub fn oracle(&self) -> &O {
        self.oracle
    }

    pub fn generators(&self) -> &[O::Elem] {
        &self.gens
    }

    pub fn configs(&self) -> &ConfigurationSet {
        &self.configs
    }

    pub fn word(&self, w: &GroupWord) -> O::Elem {
        evaluate_word(self.oracle, &self.gens, w)
    }

    /// Index of the configuration of `x`, or `None` outside the safe region.
    pub fn atom_of(&self, x: &O::Elem, radius: usize) -> Option<Option<usize>> {
        let mut tuple = Vec::with_capacity(self.gens.len() + 1);
        if !self.oracle.within(x, radius) {
            return None;
        }
        tuple.push(self.oracle.classify(x));
        for g in &self.gens {
            let y = self.oracle.multiply(g, x);
            if !self.oracle.within(&y, radius) {
                return None;
            }
            tuple.push(self.oracle.classify(&y));
        }
        Some(self.configs.index_of(&Configuration(tuple)))
    }

    /// Whether `z ∈ D̃`, reading only as many coordinates of the
    /// configuration of `z` as needed to decide. Assumes the configuration
    /// set is complete for the instance.
    pub fn in_atoms(&self, z: &O::Elem, atoms: &BTreeSet<usize>, radius: usize) -> Option<bool> {
        let mut candidates: BTreeSet<usize> = (0..self.configs.len()).collect();
        for pos in 0..=self.gens.len() {
            if candidates.is_empty() || candidates.iter().all(|c| !atoms.contains(c)) {
                return Some(false);
            }
            if candidates.iter().all(|c| atoms.contains(c)) {
                return Some(true);
            }
            let elem = if pos == 0 {
                z.clone()
            } else {
                self.oracle.multiply(&self.gens[pos - 1], z)
            };
            if !self.oracle.within(&elem, radius) {
                return None;
            }
            let block = self.oracle.classify(&elem);
            let matching = self.by_position[pos].get(&block);
            candidates.retain(|c| matching.is_some_and(|s| s.contains(c)));
        }
        Some(!candidates.is_empty() && candidates.iter().all(|c| atoms.contains(c)))
    }

    /// Three-valued membership `y ∈ region`; `None` when undecidable inside `ball(radius)`.
    pub fn contains(&self, region: &Region, y: &O::Elem, radius: usize) -> Option<bool> {
        let mut undecided = false;
        for term in &region.terms {
            let x = self.oracle.multiply(&self.oracle.invert(&self.word(&term.prefix)), y);
            let mut term_value = Some(true);
            for c in &term.constraints {
                let z = self.oracle.multiply(&self.word(&c.word), &x);
                match self.in_atoms(&z, &c.atoms, radius) {
                    Some(true) => {}
                    Some(false) => {
                        term_value = Some(false);
                        break;
                    }
                    None => term_value = None,
                }
            }
            match term_value {
                Some(true) => return Some(true),
                Some(false) => {}
                None => undecided = true,
            }
        }
        if undecided {
            None
        } else {
            Some(false)
        }
    }

    /// `y ∈ w · region`.
    pub fn contains_translate(
        &self,
        word: &GroupWord,
        region: &Region,
        y: &O::Elem,
        radius: usize,
    ) -> Option<bool> {
        let x = self.oracle.multiply(&self.oracle.invert(&self.word(word)), y);
        self.contains(region, &x, radius)
    }
}

/// Elements of `ball(R)` certainly in `region`.
pub fn evaluate_region<O: GroupOracle>(
    region: &Region,
    instance: &Instance<'_, O>,
    radius: usize,
) -> Result<BTreeSet<O::Elem>> {
    Ok(instance
        .oracle()
        .ball(radius)?
        .into_iter()
        .filter(|y| instance.contains(region, y, radius) == Some(true))
        .collect())
}

/// Elements of `ball(R)` on which membership in `region` is decidable.
pub fn decidable_points<O: GroupOracle>(
    region: &Region,
    instance: &Instance<'_, O>,
    radius: usize,
) -> Result<BTreeSet<O::Elem>> {
    Ok(instance
        .oracle()
        .ball(radius)?
        .into_iter()
        .filter(|y| instance.contains(region, y, radius).is_some())
        .collect())
}

/// Parses a generator list for `oracle`, e.g. `"a b"` for a free group or `"1 2"` for a table.
pub fn parse_generators<O: GroupOracle>(oracle: &O, names: &str) -> Result<Vec<O::Elem>> {
    names.split_whitespace()
        .map(|tok| {
            oracle
                .parse_element(tok)
                .ok_or_else(|| Error::Precondition(format!("cannot parse generator {tok:?}")))
        })
        .collect()
}
