use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest `n` accepted by [`partitions_of`].
pub const MAX_PARTITION_N: usize = 30;

/// An integer partition in canonical form: nonincreasing, strictly positive
/// parts with trailing zeros stripped.
///
/// Labels both mixtures `ν = (N₁, …, N_κ)` and symmetry classes `[μ]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Builds a partition from parts that must already be nonincreasing.
    /// Trailing zeros are stripped; an empty result is rejected.
    pub fn new(parts: impl Into<Vec<usize>>) -> Result<Self> {
        let mut parts = parts.into();
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.is_empty() {
            return Err(Error::InvalidPartition("no positive parts".into()));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!(
                "{parts:?} is not nonincreasing"
            )));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidPartition(format!(
                "{parts:?} has an interior zero"
            )));
        }
        Ok(Partition { parts })
    }

    /// Sorts arbitrary positive parts into canonical order. Returns the
    /// partition and whether any reordering took place.
    pub fn normalized(parts: impl Into<Vec<usize>>) -> Result<(Self, bool)> {
        let raw: Vec<usize> = parts.into();
        let mut sorted: Vec<usize> = raw.iter().copied().filter(|&p| p > 0).collect();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        let changed = sorted != raw;
        Ok((Partition::new(sorted)?, changed))
    }

    /// The one-row partition `[n]`.
    pub fn row(n: usize) -> Result<Self> {
        Partition::new(vec![n])
    }

    /// The one-column partition `[1, …, 1]`.
    pub fn column(n: usize) -> Result<Self> {
        Partition::new(vec![1; n])
    }

    /// Hook shape `[n - r, 1^r]`.
    pub fn hook(n: usize, r: usize) -> Result<Self> {
        if r >= n {
            return Err(Error::OutOfRange(format!("hook leg {r} for n = {n}")));
        }
        let mut parts = vec![n - r];
        parts.extend(std::iter::repeat_n(1, r));
        Partition::new(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Number of boxes, `N`.
    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of rows (`κ` for a mixture).
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Part `i` (0-based), zero past the end.
    pub fn part(&self, i: usize) -> usize {
        self.parts.get(i).copied().unwrap_or(0)
    }

    /// Column lengths of the Young diagram.
    pub fn conjugate(&self) -> Partition {
        let cols = self.parts[0];
        let parts = (0..cols)
            .map(|c| self.parts.iter().take_while(|&&p| p > c).count())
            .collect();
        Partition { parts }
    }

    /// Dominance order `self ⊵ other`: every prefix sum of `self` is at least
    /// the corresponding prefix sum of `other`.
    pub fn dominates(&self, other: &Partition) -> Result<bool> {
        check_same_n(self, other)?;
        let rows = self.len().max(other.len());
        let mut a = 0;
        let mut b = 0;
        for i in 0..rows {
            a += self.part(i);
            b += other.part(i);
            if a < b {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `N! / (N₁! ⋯ N_κ!)`, the number of snippets of this mixture.
    pub fn multinomial(&self) -> u128 {
        let mut acc: u128 = 1;
        let mut placed = 0u128;
        for &p in &self.parts {
            for j in 1..=p as u128 {
                placed += 1;
                // acc * placed / j stays integral: it is a running binomial product.
                acc = acc * placed / j;
            }
        }
        acc
    }

    /// Cells `(row, col)` in row-reading order.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(r, &len)| (0..len).map(move |c| (r, c)))
    }
}

pub(crate) fn check_same_n(a: &Partition, b: &Partition) -> Result<()> {
    if a.n() != b.n() {
        return Err(Error::SizeMismatch {
            left: a.n(),
            right: b.n(),
        });
    }
    Ok(())
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;

    fn try_from(parts: Vec<usize>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

/// Parses a comma separated list, with or without brackets. Input must be
/// canonical; use [`Partition::normalized`] to accept any order.
impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts = parse_parts(s)?;
        Partition::new(parts)
    }
}

pub(crate) fn parse_parts(s: &str) -> Result<Vec<usize>> {
    let trimmed = s.trim().trim_start_matches(['[', '(']).trim_end_matches([']', ')']);
    trimmed
        .split(',')
        .map(|t| {
            t.trim().parse::<usize>().map_err(|e| Error::Parse {
                context: format!("partition `{s}`"),
                message: format!("part `{}`: {e}", t.trim()),
            })
        })
        .collect()
}

/// Compares two partitions in reverse lexicographic order (largest first).
pub fn reverse_lex(a: &Partition, b: &Partition) -> Ordering {
    b.parts.cmp(&a.parts)
}

/// All partitions of `n` in reverse lexicographic order, starting at `[n]`.
pub fn partitions_of(n: usize) -> Result<Vec<Partition>> {
    if n == 0 || n > MAX_PARTITION_N {
        return Err(Error::OutOfRange(format!(
            "partitions_of({n}): n must be in 1..={MAX_PARTITION_N}"
        )));
    }
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    fill(n, n, &mut current, &mut out);
    Ok(out)
}

fn fill(remaining: usize, max_part: usize, current: &mut Vec<usize>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        out.push(Partition {
            parts: current.clone(),
        });
        return;
    }
    for p in (1..=max_part.min(remaining)).rev() {
        current.push(p);
        fill(remaining - p, p, current, out);
        current.pop();
    }
}
