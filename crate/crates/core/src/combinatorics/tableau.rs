use std::fmt;

use super::Partition;
use crate::{Error, Result};

/// Default cap on the number of standard tableaux enumerated at once.
pub const DEFAULT_TABLEAU_CAP: u64 = 1_000_000;

/// A Young tableau: a jagged row-major grid of positive integers congruent
/// to its shape. Standardness is checked, not assumed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tableau {
    shape: Partition,
    rows: Vec<Vec<usize>>,
}

impl Tableau {
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self> {
        let shape = Partition::new(rows.iter().map(Vec::len).collect::<Vec<_>>())?;
        if rows.iter().flatten().any(|&e| e == 0) {
            return Err(Error::InvalidPartition("tableau entries must be positive".into()));
        }
        Ok(Tableau { shape, rows })
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn entry(&self, row: usize, col: usize) -> usize {
        self.rows[row][col]
    }

    /// Entries concatenated row by row.
    pub fn reading_word(&self) -> Vec<usize> {
        self.rows.iter().flatten().copied().collect()
    }

    /// Position `(row, col)` of the first occurrence of `value`.
    pub fn find(&self, value: usize) -> Option<(usize, usize)> {
        self.rows.iter().enumerate().find_map(|(r, row)| {
            row.iter().position(|&e| e == value).map(|c| (r, c))
        })
    }

    /// Rows weakly increasing, columns strictly increasing.
    pub fn is_semistandard(&self) -> bool {
        let rows_ok = self.rows.iter().all(|r| r.windows(2).all(|w| w[0] <= w[1]));
        let cols_ok = self.rows.windows(2).all(|pair| {
            pair[1].iter().zip(&pair[0]).all(|(below, above)| below > above)
        });
        rows_ok && cols_ok
    }

    /// Semistandard with entries exactly `1..=n`.
    pub fn is_standard(&self) -> bool {
        let n = self.shape.n();
        let mut seen = vec![false; n + 1];
        for &e in self.rows.iter().flatten() {
            if e > n || seen[e] {
                return false;
            }
            seen[e] = true;
        }
        self.is_semistandard() && self.rows.iter().all(|r| r.windows(2).all(|w| w[0] < w[1]))
    }

    /// Number of entries equal to each value `1..=max`.
    pub fn content(&self, max: usize) -> Vec<usize> {
        let mut c = vec![0; max];
        for &e in self.rows.iter().flatten() {
            if e >= 1 && e <= max {
                c[e - 1] += 1;
            }
        }
        c
    }
}

impl fmt::Debug for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.rows).finish()
    }
}

/// Dimension of the Specht module `S^μ` by the hook length formula.
pub fn irrep_dimension(mu: &Partition) -> u64 {
    let conj = mu.conjugate();
    let n = mu.n() as u128;
    // arm + leg + 1 for every cell
    let den: u128 = mu
        .cells()
        .map(|(r, c)| (mu.part(r) - c + conj.part(c) - r - 1) as u128)
        .product();
    let num: u128 = (1..=n).product();
    u64::try_from(num / den).expect("irrep dimension fits in u64 for n <= 30")
}

/// All standard Young tableaux of shape `mu`, sorted by row-reading word.
pub fn standard_tableaux(mu: &Partition) -> Result<Vec<Tableau>> {
    standard_tableaux_capped(mu, DEFAULT_TABLEAU_CAP)
}

pub fn standard_tableaux_capped(mu: &Partition, cap: u64) -> Result<Vec<Tableau>> {
    let dim = irrep_dimension(mu);
    if dim > cap {
        return Err(Error::CapExceeded {
            what: "standard tableaux",
            value: dim as u128,
            cap: cap as u128,
        });
    }
    let mut out = Vec::with_capacity(dim as usize);
    let mut rows: Vec<Vec<usize>> = vec![Vec::new(); mu.len()];
    place(mu, 1, &mut rows, &mut out);
    out.sort_by_cached_key(Tableau::reading_word);
    debug_assert_eq!(out.len() as u64, dim);
    Ok(out)
}

fn place(mu: &Partition, next: usize, rows: &mut [Vec<usize>], out: &mut Vec<Tableau>) {
    if next > mu.n() {
        out.push(Tableau {
            shape: mu.clone(),
            rows: rows.to_vec(),
        });
        return;
    }
    for r in 0..rows.len() {
        let len = rows[r].len();
        let fits_row = len < mu.part(r);
        let fits_col = r == 0 || rows[r - 1].len() > len;
        if fits_row && fits_col {
            rows[r].push(next);
            place(mu, next + 1, rows, out);
            rows[r].pop();
        }
    }
}
