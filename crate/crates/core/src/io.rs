//! Text formats. Blank lines and anything after `#` are ignored; errors
//! name the file and the 1-based line.

use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;

use crate::config::{Configuration, ConfigurationSet, EquationId, Orientation, Selection};
use crate::error::{Error, Result};
use crate::grouporacle::{FreeGroupOracle, PartitionRule, TableGroupOracle};
use crate::intmat::{BinMatrix, IntMatrix, Permutation};
use crate::word::GroupWord;

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

struct Lines<'a> {
    path: PathBuf,
    items: std::vec::IntoIter<(usize, Vec<&'a str>)>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str, path: &Path) -> Self {
        let items: Vec<(usize, Vec<&str>)> = text
            .lines()
            .enumerate()
            .filter_map(|(i, raw)| {
                let body = raw.split('#').next().unwrap_or("");
                let toks: Vec<&str> = body.split_whitespace().collect();
                (!toks.is_empty()).then_some((i + 1, toks))
            })
            .collect();
        Self {
            path: path.to_path_buf(),
            items: items.into_iter(),
            last: text.lines().count().max(1),
        }
    }

    fn err(&self, line: usize, msg: impl Into<String>) -> Error {
        Error::Parse {
            path: self.path.clone(),
            line,
            msg: msg.into(),
        }
    }

    fn next_line(&mut self, what: &str) -> Result<(usize, Vec<&'a str>)> {
        let last = self.last;
        self.items
            .next()
            .ok_or_else(|| self.err(last, format!("unexpected end of file, expected {what}")))
    }

    fn finish(&mut self) -> Result<()> {
        match self.items.next() {
            Some((line, _)) => Err(self.err(line, "unexpected trailing content")),
            None => Ok(()),
        }
    }

    fn numbers<T: std::str::FromStr>(&self, line: usize, toks: &[&str], count: usize) -> Result<Vec<T>> {
        if toks.len() != count {
            return Err(self.err(line, format!("expected {count} values, found {}", toks.len())));
        }
        toks.iter()
            .map(|t| t.parse::<T>().map_err(|_| self.err(line, format!("bad number {t:?}"))))
            .collect()
    }
}

/// Header `rows cols`, then `rows` lines of `cols` integers.
pub fn parse_matrix(text: &str, path: &Path) -> Result<IntMatrix> {
    let mut lines = Lines::new(text, path);
    let (hl, header) = lines.next_line("matrix header \"rows cols\"")?;
    let dims: Vec<usize> = lines.numbers(hl, &header, 2)?;
    let (rows, cols) = (dims[0], dims[1]);
    if rows == 0 || cols == 0 {
        return Err(lines.err(hl, "matrix dimensions must be positive"));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        let (line, toks) = lines.next_line(&format!("matrix row {}", r + 1))?;
        data.extend(lines.numbers::<BigInt>(line, &toks, cols)?);
    }
    lines.finish()?;
    IntMatrix::new(rows, cols, data)
}

pub fn parse_binary_matrix(text: &str, path: &Path) -> Result<BinMatrix> {
    let m = parse_matrix(text, path)?;
    BinMatrix::new(m).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        line: 1,
        msg: e.to_string(),
    })
}

pub fn read_matrix(path: &Path) -> Result<IntMatrix> {
    parse_matrix(&read_text(path)?, path)
}

pub fn read_binary_matrix(path: &Path) -> Result<BinMatrix> {
    parse_binary_matrix(&read_text(path)?, path)
}

/// Header `n m`, then one configuration of `n + 1` blocks per line.
pub fn parse_configurations(text: &str, path: &Path) -> Result<ConfigurationSet> {
    let mut lines = Lines::new(text, path);
    let (hl, header) = lines.next_line("configuration header \"n m\"")?;
    let dims: Vec<usize> = lines.numbers(hl, &header, 2)?;
    let (n, m) = (dims[0], dims[1]);
    let mut items = Vec::new();
    let mut first_line = None;
    while let Some((line, toks)) = lines.items.next() {
        first_line.get_or_insert(line);
        let tuple: Vec<usize> = lines.numbers(line, &toks, n + 1)?;
        if let Some(bad) = tuple.iter().find(|&&b| b == 0 || b > m) {
            return Err(lines.err(line, format!("block {bad} outside 1..={m}")));
        }
        let c = Configuration(tuple);
        if items.contains(&c) {
            return Err(lines.err(line, format!("duplicate configuration {c}")));
        }
        items.push(c);
    }
    ConfigurationSet::new(n, m, items).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        line: first_line.unwrap_or(hl),
        msg: e.to_string(),
    })
}

pub fn read_configurations(path: &Path) -> Result<ConfigurationSet> {
    parse_configurations(&read_text(path)?, path)
}

/// Lines `eq=<i,j,k> orient=<+|-> mult=<p>`.
pub fn parse_selections(text: &str, path: &Path) -> Result<Vec<Selection>> {
    let mut lines = Lines::new(text, path);
    let mut out = Vec::new();
    while let Some((line, toks)) = lines.items.next() {
        let (mut eq, mut orient, mut mult) = (None, None, None);
        for tok in &toks {
            let (key, value) = tok
                .split_once('=')
                .ok_or_else(|| lines.err(line, format!("expected key=value, found {tok:?}")))?;
            match key {
                "eq" => {
                    let parts: Vec<usize> = value
                        .split(',')
                        .map(|p| p.parse().map_err(|_| lines.err(line, format!("bad equation {value:?}"))))
                        .collect::<Result<_>>()?;
                    if parts.len() != 3 || parts[1] >= parts[2] {
                        return Err(lines.err(line, format!("equation {value:?} must be i,j,k with j<k")));
                    }
                    eq = Some(EquationId {
                        block: parts[0],
                        j: parts[1],
                        k: parts[2],
                    });
                }
                "orient" => {
                    orient = Some(match value {
                        "+" => Orientation::AsIs,
                        "-" => Orientation::Swapped,
                        _ => return Err(lines.err(line, format!("orientation {value:?} is not + or -"))),
                    })
                }
                "mult" => {
                    mult = Some(
                        value
                            .parse::<usize>()
                            .ok()
                            .filter(|&p| p > 0)
                            .ok_or_else(|| lines.err(line, format!("bad multiplicity {value:?}")))?,
                    )
                }
                _ => return Err(lines.err(line, format!("unknown key {key:?}"))),
            }
        }
        match (eq, orient, mult) {
            (Some(equation), Some(orientation), Some(multiplicity)) => out.push(Selection {
                equation,
                orientation,
                multiplicity,
            }),
            _ => return Err(lines.err(line, "selection needs eq=, orient= and mult=")),
        }
    }
    if out.is_empty() {
        return Err(lines.err(1, "no selections"));
    }
    Ok(out)
}

pub fn read_selections(path: &Path) -> Result<Vec<Selection>> {
    parse_selections(&read_text(path)?, path)
}

pub fn format_selections(sels: &[Selection]) -> String {
    sels.iter().map(|s| format!("{s}\n")).collect()
}

/// Order `N`, then `N` rows of `N` element indices, then one line with the
/// block of each element.
pub fn parse_table(text: &str, path: &Path) -> Result<TableGroupOracle> {
    let mut lines = Lines::new(text, path);
    let (hl, header) = lines.next_line("group order")?;
    let n: usize = lines.numbers(hl, &header, 1)?[0];
    if n == 0 {
        return Err(lines.err(hl, "group order must be positive"));
    }
    let mut table = Vec::with_capacity(n);
    for r in 0..n {
        let (line, toks) = lines.next_line(&format!("table row {r}"))?;
        table.push(lines.numbers::<usize>(line, &toks, n)?);
    }
    let (pl, toks) = lines.next_line("partition line")?;
    let blocks: Vec<usize> = lines.numbers(pl, &toks, n)?;
    lines.finish()?;
    TableGroupOracle::new(table, blocks).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        line: hl,
        msg: e.to_string(),
    })
}

pub fn read_table(path: &Path) -> Result<TableGroupOracle> {
    parse_table(&read_text(path)?, path)
}

/// Lines `<prefix> -> <block>` (the arrow is optional) and one `default -> <block>`.
/// Prefixes use `a`, `b`, … with upper case for inverses.
pub fn parse_prefix_rule(text: &str, path: &Path) -> Result<PartitionRule> {
    let mut lines = Lines::new(text, path);
    let mut rules = Vec::new();
    let mut default = None;
    while let Some((line, toks)) = lines.items.next() {
        let toks: Vec<&str> = toks.into_iter().filter(|t| *t != "->").collect();
        if toks.len() != 2 {
            return Err(lines.err(line, "expected \"<prefix> -> <block>\""));
        }
        let block: usize = toks[1]
            .parse()
            .ok()
            .filter(|&b| b > 0)
            .ok_or_else(|| lines.err(line, format!("bad block {:?}", toks[1])))?;
        if toks[0] == "default" {
            if default.replace(block).is_some() {
                return Err(lines.err(line, "default block given twice"));
            }
        } else {
            let word = GroupWord::parse_alphabetic(toks[0])
                .ok_or_else(|| lines.err(line, format!("bad prefix {:?}", toks[0])))?;
            rules.push((word, block));
        }
    }
    let default = default.ok_or_else(|| lines.err(1, "missing default block"))?;
    Ok(PartitionRule::Prefix { rules, default })
}

pub fn read_prefix_rule(path: &Path) -> Result<PartitionRule> {
    parse_prefix_rule(&read_text(path)?, path)
}

/// `free:<rank>` with an optional prefix-rule file.
pub fn free_oracle(rank: &str, rule: Option<&Path>) -> Result<FreeGroupOracle> {
    let rank: usize = rank
        .parse()
        .map_err(|_| Error::Precondition(format!("bad free rank {rank:?}")))?;
    match rule {
        Some(p) => FreeGroupOracle::new(rank, read_prefix_rule(p)?),
        None => FreeGroupOracle::first_letter(rank),
    }
}

/// Space-separated 1-based images.
pub fn parse_permutation(s: &str) -> Result<Permutation> {
    let images: Vec<usize> = s
        .split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| Error::InvalidPermutation(format!("bad image {t:?}")))
        })
        .collect::<Result<_>>()?;
    Permutation::from_images(&images)
}
