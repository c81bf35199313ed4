//! Words in signed generator indices: `+i` is `g_i`, `-i` is `g_i⁻¹`.
//!
//! The same representation serves two roles: products of the configuration
//! generators `g_1, …, g_n` (transfer words, `g_σ`) and reduced elements of a
//! free group, whose letters are the free generators.

use std::fmt;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct GroupWord {
    letters: Vec<i32>,
}

impl GroupWord {
    pub fn identity() -> Self {
        Self::default()
    }

    /// Letters must be nonzero.
    pub fn from_letters(letters: Vec<i32>) -> Self {
        assert!(letters.iter().all(|&l| l != 0), "zero is not a letter");
        Self { letters }
    }

    pub fn generator(i: usize) -> Self {
        Self::from_letters(vec![i as i32])
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// Largest generator index that occurs.
    pub fn max_index(&self) -> usize {
        self.letters.iter().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0)
    }

    pub fn inverse(&self) -> Self {
        Self {
            letters: self.letters.iter().rev().map(|l| -l).collect(),
        }
    }

    /// `self · other` as a concatenation, without reduction.
    pub fn concat(&self, other: &Self) -> Self {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Self { letters }
    }

    /// Free reduction: cancels adjacent `x x⁻¹` pairs until none remain.
    pub fn reduce(&self) -> Self {
        let mut out: Vec<i32> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Self { letters: out }
    }

    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| w[0] != -w[1])
    }

    /// Replaces each letter `±i` by `words[i-1]` or its inverse.
    pub fn substitute(&self, words: &[GroupWord]) -> Self {
        let mut out = Vec::new();
        for &l in &self.letters {
            let w = &words[l.unsigned_abs() as usize - 1];
            if l > 0 {
                out.extend_from_slice(&w.letters);
            } else {
                out.extend(w.letters.iter().rev().map(|x| -x));
            }
        }
        Self { letters: out }
    }

    /// Letters rendered as `a`, `b`, … with inverses in upper case; `1` for the identity.
    pub fn to_alphabetic(&self) -> String {
        if self.letters.is_empty() {
            return "1".into();
        }
        self.letters
            .iter()
            .map(|&l| {
                let c = (b'a' + (l.unsigned_abs() as u8 - 1)) as char;
                if l > 0 {
                    c
                } else {
                    c.to_ascii_uppercase()
                }
            })
            .collect()
    }

    /// Parses the alphabetic form; `1` or an empty string is the identity.
    pub fn parse_alphabetic(s: &str) -> Option<Self> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Some(Self::identity());
        }
        let letters = s
            .chars()
            .map(|c| {
                if c.is_ascii_lowercase() {
                    Some((c as u8 - b'a' + 1) as i32)
                } else if c.is_ascii_uppercase() {
                    Some(-((c.to_ascii_lowercase() as u8 - b'a' + 1) as i32))
                } else {
                    None
                }
            })
            .collect::<Option<Vec<_>>>()?;
        Some(Self { letters })
    }
}

impl fmt::Display for GroupWord {
    /// Generator form, e.g. `g3 g1^-1`; `e` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("e");
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|&l| {
                if l > 0 {
                    format!("g{l}")
                } else {
                    format!("g{}^-1", -l)
                }
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}
