//! Permutations of `{1, ..., n}` in one-line notation, words in the adjacent
//! transpositions `s_i`, Bruhat order and minimal coset representatives.
//!
//! Everything is 1-indexed. A word `(i_1, ..., i_r)` denotes the product
//! `s_{i_1} s_{i_2} ... s_{i_r}`; multiplying `w` on the right by `s_i`
//! swaps the entries in positions `i` and `i + 1` of the one-line notation.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymError {
    #[error("{0:?} is not a permutation of 1..n")]
    NotAPermutation(Vec<usize>),
    #[error("letter {letter} is out of range for S_{n}")]
    LetterOutOfRange { letter: usize, n: usize },
    #[error("index {index} is out of range for S_{n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("permutation sizes differ ({0} vs {1})")]
    SizeMismatch(usize, usize),
    #[error("n = {n} exceeds the enumeration limit {max} (set PREPROJ_MAX_N to raise it)")]
    TooLarge { n: usize, max: usize },
    #[error("{perm} is not a minimal coset representative for index {index}")]
    NotMinimalRep { perm: String, index: usize },
    #[error("cannot parse {0:?} as a permutation")]
    Parse(String),
}

/// A permutation in one-line notation, `w(1) w(2) ... w(n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Perm {
    one_line: Vec<usize>,
}

impl Perm {
    pub fn new(one_line: Vec<usize>) -> Result<Self, SymError> {
        let n = one_line.len();
        let mut seen = vec![false; n + 1];
        for &v in &one_line {
            if v == 0 || v > n || seen[v] {
                return Err(SymError::NotAPermutation(one_line));
            }
            seen[v] = true;
        }
        Ok(Self { one_line })
    }

    pub fn identity(n: usize) -> Self {
        Self { one_line: (1..=n).collect() }
    }

    /// The longest element `n (n-1) ... 1`.
    pub fn longest(n: usize) -> Self {
        Self { one_line: (1..=n).rev().collect() }
    }

    /// All of `S_n` in lexicographic order.
    pub fn all(n: usize) -> Vec<Perm> {
        let mut cur: Vec<usize> = (1..=n).collect();
        let mut out = vec![Self { one_line: cur.clone() }];
        loop {
            let Some(i) = (1..cur.len()).rev().find(|&i| cur[i - 1] < cur[i]) else {
                return out;
            };
            let j = (i..cur.len()).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
            cur.swap(i - 1, j);
            cur[i..].reverse();
            out.push(Self { one_line: cur.clone() });
        }
    }

    /// Digits for `n <= 9` (`"25341"`), or a bracketed list (`"[2,5,3,4,1]"`).
    pub fn parse(s: &str) -> Result<Self, SymError> {
        let s = s.trim();
        let values: Option<Vec<usize>> = if let Some(inner) = s.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
            if inner.trim().is_empty() {
                Some(Vec::new())
            } else {
                inner.split(',').map(|t| t.trim().parse().ok()).collect()
            }
        } else {
            s.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect()
        };
        let values = values.ok_or_else(|| SymError::Parse(s.to_string()))?;
        Self::new(values).map_err(|_| SymError::Parse(s.to_string()))
    }

    pub fn n(&self) -> usize {
        self.one_line.len()
    }

    pub fn one_line(&self) -> &[usize] {
        &self.one_line
    }

    /// `w(i)`, 1-indexed.
    pub fn at(&self, i: usize) -> usize {
        self.one_line[i - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.one_line.iter().enumerate().all(|(i, &v)| v == i + 1)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.n()];
        for (i, &v) in self.one_line.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        Self { one_line: inv }
    }

    /// `self ∘ other`, i.e. `x ↦ self(other(x))`.
    pub fn compose(&self, other: &Self) -> Result<Self, SymError> {
        if self.n() != other.n() {
            return Err(SymError::SizeMismatch(self.n(), other.n()));
        }
        Ok(Self { one_line: other.one_line.iter().map(|&v| self.at(v)).collect() })
    }

    /// `w · s_i`.
    pub fn times_s(&self, i: usize) -> Result<Self, SymError> {
        if i == 0 || i >= self.n() {
            return Err(SymError::LetterOutOfRange { letter: i, n: self.n() });
        }
        let mut one_line = self.one_line.clone();
        one_line.swap(i - 1, i);
        Ok(Self { one_line })
    }

    /// Number of inversions.
    pub fn length(&self) -> usize {
        let w = &self.one_line;
        (0..w.len()).map(|i| (i + 1..w.len()).filter(|&j| w[i] > w[j]).count()).sum()
    }

    /// Indices `i` with `w(i) > w(i+1)`.
    pub fn right_descents(&self) -> Vec<usize> {
        (1..self.n()).filter(|&i| self.at(i) > self.at(i + 1)).collect()
    }

    /// `u[i, j] = #{a <= i : u(a) > j}` for `0 <= i, j <= n`.
    pub fn rank_table(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut t = vec![vec![0; n + 1]; n + 1];
        for i in 1..=n {
            for j in 0..=n {
                t[i][j] = t[i - 1][j] + usize::from(self.at(i) > j);
            }
        }
        t
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n() <= 9 {
            for v in &self.one_line {
                write!(f, "{v}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.one_line.iter().map(ToString::to_string).collect();
            write!(f, "[{}]", parts.join(","))
        }
    }
}

impl FromStr for Perm {
    type Err = SymError;

    fn from_str(s: &str) -> Result<Self, SymError> {
        Self::parse(s)
    }
}

impl TryFrom<Vec<usize>> for Perm {
    type Error = SymError;

    fn try_from(v: Vec<usize>) -> Result<Self, SymError> {
        Self::new(v)
    }
}

impl From<Perm> for Vec<usize> {
    fn from(p: Perm) -> Self {
        p.one_line
    }
}

/// A word in the adjacent transpositions.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word {
    letters: Vec<usize>,
}

impl Word {
    pub fn new(letters: Vec<usize>) -> Self {
        Self { letters }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn check_range(&self, n: usize) -> Result<(), SymError> {
        match self.letters.iter().find(|&&l| l == 0 || l >= n) {
            Some(&letter) => Err(SymError::LetterOutOfRange { letter, n }),
            None => Ok(()),
        }
    }
}

impl From<Vec<usize>> for Word {
    fn from(letters: Vec<usize>) -> Self {
        Self { letters }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.letters.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

pub fn length(w: &Perm) -> usize {
    w.length()
}

pub fn apply_word(word: &Word, n: usize) -> Result<Perm, SymError> {
    word.check_range(n)?;
    let mut one_line: Vec<usize> = (1..=n).collect();
    for &l in word.letters() {
        one_line.swap(l - 1, l);
    }
    Ok(Perm { one_line })
}

pub fn is_reduced(word: &Word, n: usize) -> Result<bool, SymError> {
    Ok(apply_word(word, n)?.length() == word.len())
}

/// Every reduced word of `w`, by recursion on right descents.
pub fn all_reduced_words(w: &Perm) -> Result<BTreeSet<Word>, SymError> {
    let max = crate::max_n();
    if w.n() > max {
        return Err(SymError::TooLarge { n: w.n(), max });
    }
    let mut memo: HashMap<Perm, Vec<Word>> = HashMap::new();
    Ok(reduced_words_memo(w, &mut memo).into_iter().collect())
}

fn reduced_words_memo(w: &Perm, memo: &mut HashMap<Perm, Vec<Word>>) -> Vec<Word> {
    if let Some(ws) = memo.get(w) {
        return ws.clone();
    }
    let out = if w.is_identity() {
        vec![Word::empty()]
    } else {
        let mut out = Vec::new();
        for i in w.right_descents() {
            let shorter = w.times_s(i).expect("descent index is in range");
            for mut word in reduced_words_memo(&shorter, memo) {
                word.letters.push(i);
                out.push(word);
            }
        }
        out
    };
    memo.insert(w.clone(), out.clone());
    out
}

pub fn bruhat_leq(u: &Perm, v: &Perm) -> Result<bool, SymError> {
    if u.n() != v.n() {
        return Err(SymError::SizeMismatch(u.n(), v.n()));
    }
    let (tu, tv) = (u.rank_table(), v.rank_table());
    Ok(tu.iter().zip(&tv).all(|(ru, rv)| ru.iter().zip(rv).all(|(a, b)| a <= b)))
}

/// `w^{⟨i⟩}`: the values `1..=i` sorted into the positions they occupy in
/// `w`, and likewise `i+1..=n`.
pub fn min_coset_rep(w: &Perm, i: usize) -> Result<Perm, SymError> {
    let n = w.n();
    if i == 0 || i >= n {
        return Err(SymError::IndexOutOfRange { index: i, n });
    }
    let mut one_line = vec![0; n];
    let (mut low, mut high) = (1, i + 1);
    for (pos, &v) in w.one_line.iter().enumerate() {
        if v <= i {
            one_line[pos] = low;
            low += 1;
        } else {
            one_line[pos] = high;
            high += 1;
        }
    }
    Ok(Perm { one_line })
}

/// The reduced word
/// `(s_i ... s_{u⁻¹(i)-1})(s_{i-1} ... s_{u⁻¹(i-1)-1}) ... (s_1 ... s_{u⁻¹(1)-1})`
/// of a minimal coset representative `u`.
pub fn canonical_reduced_word_of_rep(u: &Perm, i: usize) -> Result<Word, SymError> {
    if min_coset_rep(u, i)? != *u {
        return Err(SymError::NotMinimalRep { perm: u.to_string(), index: i });
    }
    let inv = u.inverse();
    let mut letters = Vec::new();
    for j in (1..=i).rev() {
        letters.extend(j..inv.at(j));
    }
    let word = Word::new(letters);
    debug_assert_eq!(apply_word(&word, u.n()).as_ref(), Ok(u));
    debug_assert_eq!(word.len(), u.length());
    Ok(word)
}
